mod support;

use qlie::braid::{AlgebraSpec, AntisymTower, Check, TowerLimits};
use qlie::brst::{assemble_q, from_solutions, kernel_perturbation, solve_x, verify_chi_linear, verify_d_squared, verify_gauge_independence};
use qlie::complex::Complex;
use qlie::linalg::PivotOrder;
use qlie::presets;
use qlie::scalar::{Rational, ScalarMode};
use support::familiar_q;

fn run(name: &str, max_n: usize, chi_cap: usize, gamma_cap: usize) {
    let spec: AlgebraSpec<Rational> = presets::classical(name, ScalarMode::Symbolic).unwrap();
    let limits = TowerLimits { max_n, ..TowerLimits::for_dim(spec.dim) };
    let tower = AntisymTower::build(&spec.braiding(), limits).unwrap();
    let data = solve_x(&spec, &tower, PivotOrder::Forward).unwrap();
    assert!(verify_chi_linear(&spec, &tower, &data).iter().all(Check::passed), "{name}");
    for lvl in &data.levels[1..] {
        assert!(lvl.y.is_zero(), "{name}: Y_{}", lvl.r);
    }
    let cx = Complex::new(&spec, &tower, chi_cap).unwrap();
    let q = assemble_q(cx.wedge(), &data);
    let rep = verify_d_squared(&cx, &q, chi_cap, gamma_cap, 4).unwrap();
    assert!(rep.passed(), "{name}: {:?}", rep.failures.first());
    let same = verify_gauge_independence(&cx, &q, &familiar_q(&spec), chi_cap, gamma_cap, 4).unwrap();
    assert!(same.passed(), "{name}: {:?}", same.failures.first());
}

#[test]
fn sl2_gauges_agree() {
    let spec: AlgebraSpec<Rational> = presets::sl2(ScalarMode::Symbolic);
    let tower = AntisymTower::build(&spec.braiding(), TowerLimits::for_dim(3)).unwrap();
    let cx = Complex::new(&spec, &tower, 3).unwrap();
    let forward = solve_x(&spec, &tower, PivotOrder::Forward).unwrap();
    let reverse = solve_x(&spec, &tower, PivotOrder::Reverse).unwrap();
    let q1 = assemble_q(cx.wedge(), &forward);
    let mut others = vec![assemble_q(cx.wedge(), &reverse)];
    for r in 1..=2 {
        let xs = kernel_perturbation(&tower, &forward.xs(), r).expect("A has a kernel");
        others.push(assemble_q(cx.wedge(), &from_solutions(&tower, cx.wedge(), xs)));
    }
    for q2 in &others {
        assert!(verify_gauge_independence(&cx, &q1, q2, 3, 3, 4).unwrap().passed());
    }
}

#[test]
fn sl2_sweep() {
    run("sl2", 4, 3, 3);
}

#[test]
fn gl2_sweep() {
    run("gl2", 5, 2, 4);
}

#[test]
fn gl11_sweep() {
    // odd generators never terminate the tower; it is cut at γ-degree 4
    run("gl1|1", 5, 2, 3);
}

