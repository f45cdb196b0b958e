use qlie::braid::{AntisymTower, Check, TowerLimits};
use qlie::brst::{
    assemble_q, from_solutions, kernel_perturbation, off_kernel_perturbation, solve_x, verify_chi_linear, verify_d_squared,
    verify_gauge_independence, BrstData,
};
use qlie::complex::Complex;
use qlie::linalg::PivotOrder;
use qlie::scalar::{Rational, ScalarMode};
use qlie::uqgl::GlqData;

struct Setup {
    data: GlqData<Rational>,
    tower: AntisymTower<Rational>,
    xs: BrstData<Rational>,
    cx: Complex<Rational>,
}

fn setup() -> Setup {
    let data = GlqData::<Rational>::build(2, ScalarMode::numeric(&Rational::new(3, 2).0)).unwrap();
    let tower = AntisymTower::build(&data.spec.braiding(), TowerLimits::for_dim(4)).unwrap();
    let xs = solve_x(&data.spec, &tower, PivotOrder::Forward).unwrap();
    let cx = Complex::new(&data.spec, &tower, 2).unwrap();
    Setup { data, tower, xs, cx }
}

#[test]
fn gl2_operator_squares_to_zero() {
    let s = setup();
    assert_eq!(s.tower.height(), Some(4));
    assert!(verify_chi_linear(&s.data.spec, &s.tower, &s.xs).iter().all(Check::passed));
    assert!(!s.xs.level(1).y.is_zero());
    assert!(!s.xs.level(2).y.is_zero());
    // the level-3 right-hand side vanishes, so the top sandwich is zero
    assert!(s.xs.level(3).y.is_zero());
    let q = assemble_q(s.cx.wedge(), &s.xs);
    assert_eq!(q.grading(), Some(-1));
    let rep = verify_d_squared(&s.cx, &q, 2, 4, 4).unwrap();
    assert!(rep.passed(), "{:?}", rep.failures.first());
}

#[test]
fn gl2_top_level_is_forced() {
    let s = setup();
    let bad = from_solutions(&s.tower, s.cx.wedge(), off_kernel_perturbation(&s.tower, &s.xs.xs(), 3));
    assert!(!bad.level(3).y.is_zero());
    let rep = verify_d_squared(&s.cx, &assemble_q(s.cx.wedge(), &bad), 2, 4, 4).unwrap();
    assert!(!rep.failures.is_empty());
}

#[test]
fn gl2_gauge_independence() {
    let s = setup();
    let other = solve_x(&s.data.spec, &s.tower, PivotOrder::Reverse).unwrap();
    let q1 = assemble_q(s.cx.wedge(), &s.xs);
    let q2 = assemble_q(s.cx.wedge(), &other);
    let rep = verify_gauge_independence(&s.cx, &q1, &q2, 2, 4, 4).unwrap();
    assert!(rep.passed(), "{:?}", rep.failures.first());
    for r in 1..=2 {
        let xs = kernel_perturbation(&s.tower, &s.xs.xs(), r).expect("A has a kernel");
        assert_ne!(xs, s.xs.xs());
        let q3 = assemble_q(s.cx.wedge(), &from_solutions(&s.tower, s.cx.wedge(), xs));
        let rep = verify_gauge_independence(&s.cx, &q1, &q3, 2, 4, 4).unwrap();
        assert!(rep.passed(), "r={r}: {:?}", rep.failures.first());
    }
}
