use std::sync::OnceLock;

use proptest::prelude::*;
use qlie::nf::{chi_presentation, extended_presentation, NfElement, Presentation, QuotientBasis, Word};
use qlie::presets;
use qlie::scalar::{Field, Rational, ScalarMode};
use qlie::uqgl::GlqData;

type Q = QuotientBasis<Rational>;

fn sl2_chi() -> &'static Q {
    static B: OnceLock<Q> = OnceLock::new();
    B.get_or_init(|| {
        let spec = presets::sl2::<Rational>(ScalarMode::Symbolic);
        QuotientBasis::build(&chi_presentation(&spec).unwrap(), 4).unwrap()
    })
}

fn uq_chi() -> &'static Q {
    static B: OnceLock<Q> = OnceLock::new();
    B.get_or_init(|| {
        let data = GlqData::<Rational>::build(2, ScalarMode::numeric(&Rational::new(3, 2).0)).unwrap();
        QuotientBasis::build(&chi_presentation(&data.spec).unwrap(), 4).unwrap()
    })
}

fn sl2_extended() -> &'static Q {
    static B: OnceLock<Q> = OnceLock::new();
    B.get_or_init(|| {
        let spec = presets::sl2::<Rational>(ScalarMode::Symbolic);
        QuotientBasis::build(&extended_presentation(&spec).unwrap(), 3).unwrap()
    })
}

fn word(gens: usize, max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..gens, 0..=max)
}

fn combination(gens: usize, max: usize) -> impl Strategy<Value = Vec<(Rational, Word)>> {
    prop::collection::vec(((-4i64..5).prop_map(|c| Rational::new(c, 1)), word(gens, max)), 1..5)
}

fn as_input(e: &NfElement<Rational>) -> Vec<(Rational, Word)> {
    e.terms.iter().map(|(w, c)| (c.clone(), w.clone())).collect()
}

fn bases() -> [(&'static str, &'static Q, usize); 2] {
    [("sl2", sl2_chi(), 3), ("uq-gl2", uq_chi(), 4)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reduction_is_idempotent(x in combination(4, 4), pick in 0usize..2) {
        let (_, b, g) = bases()[pick];
        let x: Vec<_> = x.into_iter().map(|(c, w)| (c, w.into_iter().map(|l| l % g).collect())).collect();
        let once = b.normal_form(&x).unwrap();
        prop_assert_eq!(b.normal_form(&as_input(&once)).unwrap(), once.clone());
        prop_assert!(once.terms.iter().all(|(w, _)| b.is_standard(w)));
    }

    #[test]
    fn relations_generate_the_ideal(u in word(4, 2), v in word(4, 2), pick in 0usize..2, ri in 0usize..64) {
        let (_, b, g) = bases()[pick];
        let u: Word = u.into_iter().map(|l| l % g).collect();
        let v: Word = v.into_iter().map(|l| l % g).collect();
        prop_assume!(u.len() + v.len() + 2 <= b.cap());
        let rels = b.presentation().relations();
        let rel = &rels[ri % rels.len()];
        let x: Vec<(Rational, Word)> =
            rel.terms.iter().map(|(c, w)| (c.clone(), u.iter().chain(w).chain(&v).copied().collect())).collect();
        prop_assert!(b.normal_form(&x).unwrap().is_zero());
    }

    #[test]
    fn multiplication_is_associative(a in word(4, 2), bw in word(4, 1), c in word(4, 1), pick in 0usize..2) {
        let (_, b, g) = bases()[pick];
        let el = |w: Word| b.normal_form(&[(Rational::one(), w.into_iter().map(|l| l % g).collect())]).unwrap();
        let (x, y, z) = (el(a), el(bw), el(c));
        let left = b.multiply(&b.multiply(&x, &y).unwrap(), &z).unwrap();
        let right = b.multiply(&x, &b.multiply(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn reduction_preserves_degree(w in word(9, 3)) {
        let b = sl2_extended();
        let p = b.presentation();
        let deg = p.degree(&w);
        let nf = b.normal_form(&[(Rational::one(), w)]).unwrap();
        prop_assert!(nf.terms.iter().all(|(v, _)| p.degree(v) == deg));
    }

    #[test]
    fn dimensions_ignore_generator_order(order in Just((0..4).collect::<Vec<usize>>()).prop_shuffle()) {
        let p: &Presentation<Rational> = uq_chi().presentation();
        let shuffled = QuotientBasis::build(&p.reordered(&order), 3).unwrap();
        let reference = QuotientBasis::build(p, 3).unwrap();
        prop_assert_eq!(shuffled.dims_by_length(), reference.dims_by_length());
    }
}

#[test]
fn classical_dimensions_are_pbw() {
    // U(sl2) has C(n+2, 2) monomials of degree n
    assert_eq!(sl2_chi().dims_by_length(), vec![1, 3, 6, 10, 15]);
}
