use qlie::braid::{AlgebraSpec, AntisymTower, TowerLimits};
use qlie::complex::Complex;
use qlie::presets;
use qlie::relations::{check_operator_relations, check_wedge_omega};
use qlie::scalar::{Rational, ScalarMode};
use qlie::uqgl::GlqData;

fn run(spec: &AlgebraSpec<Rational>, gamma_cap: usize) {
    let tower = AntisymTower::build(&spec.braiding(), TowerLimits::for_dim(spec.dim)).unwrap();
    let cx = Complex::new(spec, &tower, 1).unwrap();
    for c in check_operator_relations(spec, &cx, 1, gamma_cap).unwrap() {
        eprintln!("{} {:?}", c.name, c.status);
        assert!(c.passed(), "{c:?}");
    }
    let elements = cx.basis(1, 1).unwrap();
    for r in [2, 3] {
        let c = check_wedge_omega(spec, &cx, r, &elements).unwrap();
        eprintln!("{} {:?}", c.name, c.status);
        assert!(c.passed(), "{c:?}");
    }
}

#[test]
fn sl2_relations() {
    run(&presets::sl2(ScalarMode::Symbolic), 3);
}

#[test]
fn uq_gl2_relations() {
    let data = GlqData::<Rational>::build(2, ScalarMode::numeric(&Rational::new(3, 2).0)).unwrap();
    run(&data.spec, 3);
}
