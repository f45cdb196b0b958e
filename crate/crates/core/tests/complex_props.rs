use std::sync::OnceLock;

use proptest::prelude::*;
use qlie::braid::{AntisymTower, TowerLimits};
use qlie::complex::{BasisKey, Complex, ComplexElement};
use qlie::linalg::{axpy, PivotOrder, Rref, SparseVec};
use qlie::scalar::{Rational, ScalarMode};
use qlie::uqgl::GlqData;

struct Setup {
    tower: AntisymTower<Rational>,
    cx: Complex<Rational>,
    basis: Vec<BasisKey>,
}

fn uq() -> &'static Setup {
    static S: OnceLock<Setup> = OnceLock::new();
    S.get_or_init(|| {
        let data = GlqData::<Rational>::build(2, ScalarMode::numeric(&Rational::new(3, 2).0)).unwrap();
        let tower = AntisymTower::build(&data.spec.braiding(), TowerLimits::for_dim(4)).unwrap();
        let cx = Complex::new(&data.spec, &tower, 2).unwrap();
        let basis = cx.basis(1, 4).unwrap();
        Setup { tower, cx, basis }
    })
}

fn degrees(phi: &ComplexElement<Rational>) -> Vec<usize> {
    phi.terms().map(|(k, _)| k.0).collect()
}

fn coeffs(len: usize) -> impl Strategy<Value = SparseVec<Rational>> {
    prop::collection::vec(prop_oneof![2 => Just(0i64), 1 => -3i64..4], len).prop_map(|v| {
        v.into_iter().enumerate().filter(|(_, c)| *c != 0).map(|(i, c)| (i, Rational::new(c, 1))).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn actions_respect_the_grading(k in 0usize..10_000, g in 0usize..4) {
        let s = uq();
        let key = s.basis[k % s.basis.len()];
        let phi = ComplexElement::basis(key);
        prop_assert!(degrees(&s.cx.act_chi(g, &phi).unwrap()).iter().all(|&n| n == key.0));
        if key.0 < 4 {
            prop_assert!(degrees(&s.cx.act_gamma(g, &phi).unwrap()).iter().all(|&n| n == key.0 + 1));
        }
        prop_assert!(degrees(&s.cx.act_omega(g, &phi).unwrap()).iter().all(|&n| n + 1 == key.0));
    }

    #[test]
    fn wedges_depend_only_on_the_sandwich(n in 1usize..4, c in coeffs(64), shift in coeffs(64)) {
        let s = uq();
        let size = 4usize.pow(n as u32);
        let c: SparseVec<Rational> = c.into_iter().filter(|(i, _)| *i < size).collect();
        let a = s.tower.a(n);
        // combine kernel vectors of c ↦ cᵀA with the random weights
        let kernel = Rref::new(&a.transpose(), PivotOrder::Forward).kernel();
        let mut k: SparseVec<Rational> = Vec::new();
        for (i, w) in shift.iter().filter(|(i, _)| *i < kernel.len()) {
            k = axpy(&k, w, &kernel[*i]);
        }
        let moved = axpy(&c, &Rational::new(1, 1), &k);
        let w = s.cx.wedge();
        prop_assert_eq!(w.wedge(n, &c).unwrap(), w.wedge(n, &moved).unwrap());
        let sandwich = |v: &SparseVec<Rational>| qlie::linalg::row_times(v, a);
        prop_assert_eq!(sandwich(&c).is_empty(), w.wedge(n, &c).unwrap().coords.is_empty());
    }
}
