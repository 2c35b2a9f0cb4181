//! One test per acceptance criterion. Each prints a PASS/FAIL line and the
//! individual checks with their measured values and bounds.

use menger_core::verify::run_criterion;

const SEED: u64 = 20240611;

fn criterion(id: u32) {
    let r = run_criterion(id, SEED);
    for c in &r.checks {
        println!("    [{}] {}: {} (bound {})", if c.passed { "ok" } else { "FAIL" }, c.name, c.value, c.bound);
    }
    println!("{}", r.line());
    assert!(r.passed, "{}", r.line());
}

#[test]
fn criterion_01_grassmannian() {
    criterion(1);
}

#[test]
fn criterion_02_constants() {
    criterion(2);
}

#[test]
fn criterion_03_simplex() {
    criterion(3);
}

#[test]
fn criterion_04_curvature() {
    criterion(4);
}

#[test]
fn criterion_05_energy() {
    criterion(5);
}

#[test]
fn criterion_06_flatness() {
    criterion(6);
}

#[test]
fn criterion_07_fine_sets() {
    criterion(7);
}

#[test]
fn criterion_08_search() {
    criterion(8);
}

#[test]
fn criterion_09_balance() {
    criterion(9);
}

#[test]
fn criterion_10_graph() {
    criterion(10);
}

#[test]
fn criterion_11_spiral() {
    criterion(11);
}

#[test]
fn criterion_12_determinism() {
    criterion(12);
}
