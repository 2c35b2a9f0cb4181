use std::cmp::Ordering;
use std::collections::BinaryHeap;

const LEAF: usize = 16;

#[derive(Debug, Clone)]
enum Node {
    Leaf { start: usize, end: usize },
    Split { dim: usize, value: f64, left: usize, right: usize },
}

/// Immutable k-d tree with median splits over a flat coordinate array.
#[derive(Debug, Clone)]
pub struct KdTree {
    dim: usize,
    coords: Vec<f64>,
    perm: Vec<usize>,
    nodes: Vec<Node>,
}

#[derive(PartialEq)]
struct Cand(f64, usize);

impl Eq for Cand {}

impl PartialOrd for Cand {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cand {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

impl KdTree {
    pub fn new(coords: &[f64], dim: usize) -> Self {
        assert!(dim > 0 && coords.len().is_multiple_of(dim));
        let n = coords.len() / dim;
        let mut tree = KdTree { dim, coords: coords.to_vec(), perm: (0..n).collect(), nodes: Vec::new() };
        if n > 0 {
            tree.build(0, n);
        }
        tree
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    #[inline]
    fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    fn build(&mut self, start: usize, end: usize) -> usize {
        let id = self.nodes.len();
        if end - start <= LEAF {
            self.nodes.push(Node::Leaf { start, end });
            return id;
        }
        // split on the axis of largest spread
        let mut best = (0, -1.0);
        for d in 0..self.dim {
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for &i in &self.perm[start..end] {
                let v = self.coords[i * self.dim + d];
                lo = lo.min(v);
                hi = hi.max(v);
            }
            if hi - lo > best.1 {
                best = (d, hi - lo);
            }
        }
        let dim = best.0;
        let mid = (start + end) / 2;
        let (coords, stride) = (&self.coords, self.dim);
        self.perm[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
            coords[a * stride + dim].total_cmp(&coords[b * stride + dim]).then(a.cmp(&b))
        });
        let value = self.coords[self.perm[mid] * self.dim + dim];
        self.nodes.push(Node::Leaf { start: 0, end: 0 });
        let left = self.build(start, mid);
        let right = self.build(mid, end);
        self.nodes[id] = Node::Split { dim, value, left, right };
        id
    }

    fn d2(&self, i: usize, x: &[f64]) -> f64 {
        self.point(i).iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum()
    }

    /// Indices with squared distance ≤ `r2` (inclusive), in ascending index order.
    pub fn within(&self, x: &[f64], r2: f64) -> Vec<usize> {
        let mut out = Vec::new();
        if !self.is_empty() {
            self.within_rec(0, x, r2, &mut out, true);
        }
        out.sort_unstable();
        out
    }

    /// Indices with squared distance < `r2` (strict), in ascending index order.
    pub fn within_open(&self, x: &[f64], r2: f64) -> Vec<usize> {
        let mut out = Vec::new();
        if !self.is_empty() {
            self.within_rec(0, x, r2, &mut out, false);
        }
        out.sort_unstable();
        out
    }

    fn within_rec(&self, node: usize, x: &[f64], r2: f64, out: &mut Vec<usize>, closed: bool) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for &i in &self.perm[start..end] {
                    let d = self.d2(i, x);
                    if d < r2 || (closed && d == r2) {
                        out.push(i);
                    }
                }
            }
            Node::Split { dim, value, left, right } => {
                let diff = x[dim] - value;
                let (near, far) = if diff < 0.0 { (left, right) } else { (right, left) };
                self.within_rec(near, x, r2, out, closed);
                if diff * diff <= r2 {
                    self.within_rec(far, x, r2, out, closed);
                }
            }
        }
    }

    /// The `k` nearest points as (squared distance, index), nearest first.
    pub fn knn(&self, x: &[f64], k: usize) -> Vec<(f64, usize)> {
        let mut heap: BinaryHeap<Cand> = BinaryHeap::with_capacity(k + 1);
        if k > 0 && !self.is_empty() {
            self.knn_rec(0, x, k, &mut heap);
        }
        let mut v: Vec<(f64, usize)> = heap.into_iter().map(|c| (c.0, c.1)).collect();
        v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        v
    }

    fn knn_rec(&self, node: usize, x: &[f64], k: usize, heap: &mut BinaryHeap<Cand>) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for &i in &self.perm[start..end] {
                    let c = Cand(self.d2(i, x), i);
                    if heap.len() < k {
                        heap.push(c);
                    } else if c < *heap.peek().expect("k > 0") {
                        heap.pop();
                        heap.push(c);
                    }
                }
            }
            Node::Split { dim, value, left, right } => {
                let diff = x[dim] - value;
                let (near, far) = if diff < 0.0 { (left, right) } else { (right, left) };
                self.knn_rec(near, x, k, heap);
                if heap.len() < k || diff * diff <= heap.peek().expect("nonempty").0 {
                    self.knn_rec(far, x, k, heap);
                }
            }
        }
    }

    /// Squared distance to the nearest point.
    pub fn nearest_d2(&self, x: &[f64]) -> f64 {
        self.knn(x, 1).first().map(|c| c.0).unwrap_or(f64::INFINITY)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn matches_linear_scan() {
        let mut rng = crate::rng::stream(11, 0);
        let dim = 3;
        let pts: Vec<f64> = (0..600 * dim).map(|_| rng.random::<f64>()).collect();
        let tree = KdTree::new(&pts, dim);
        for _ in 0..50 {
            let x: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
            let r2 = rng.random::<f64>() * 0.1;
            let scan: Vec<usize> = (0..600)
                .filter(|&i| (0..dim).map(|d| (pts[i * dim + d] - x[d]).powi(2)).sum::<f64>() <= r2)
                .collect();
            assert_eq!(tree.within(&x, r2), scan);
            let mut all: Vec<(f64, usize)> = (0..600)
                .map(|i| ((0..dim).map(|d| (pts[i * dim + d] - x[d]).powi(2)).sum::<f64>(), i))
                .collect();
            all.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            assert_eq!(tree.knn(&x, 7), all[..7].to_vec());
        }
    }
}
