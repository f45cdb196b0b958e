use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use qlie::scalar::{parse_literal, Field, Poly, RatFunc, Rational};

fn rational() -> impl Strategy<Value = Rational> {
    (-12i64..12, 1i64..7).prop_map(|(a, b)| Rational::new(a, b))
}

fn poly(max_len: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(-4i64..5, 0..max_len).prop_map(|c| Poly::from_ints(&c))
}

fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (poly(4), poly(4).prop_filter("nonzero denominator", |d| !d.is_zero()))
        .prop_map(|(n, d)| RatFunc::new(n, d).expect("nonzero denominator"))
}

fn br(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn field_laws<F: Field>(a: &F, b: &F, c: &F) {
    assert_eq!(a.add(b).add(c), a.add(&b.add(c)));
    assert_eq!(a.mul(b).mul(c), a.mul(&b.mul(c)));
    assert_eq!(a.mul(&b.add(c)), a.mul(b).add(&a.mul(c)));
    assert_eq!(a.add(b), b.add(a));
    assert_eq!(a.mul(b), b.mul(a));
    assert!(a.sub(a).is_zero());
    assert_eq!(a.add(&F::zero()), *a);
    assert_eq!(a.mul(&F::one()), *a);
    if !a.is_zero() {
        assert!(a.mul(&a.inv().unwrap()).is_one());
    } else {
        assert!(a.inv().is_err());
    }
}

proptest! {
    #[test]
    fn rational_field_laws(a in rational(), b in rational(), c in rational()) {
        field_laws(&a, &b, &c);
    }

    #[test]
    fn ratfunc_field_laws(a in ratfunc(), b in ratfunc(), c in ratfunc()) {
        field_laws(&a, &b, &c);
    }

    #[test]
    fn ratfunc_is_canonical(a in ratfunc(), b in ratfunc()) {
        let p = a.mul(&b).add(&a);
        prop_assert!(p.denominator().leading().unwrap().is_one());
        prop_assert!(Poly::gcd(p.numerator(), p.denominator()).degree().unwrap_or(0) == 0
            || p.numerator().is_zero());
    }

    #[test]
    fn eval_commutes_with_arithmetic(a in ratfunc(), b in ratfunc(), x in -6i64..7, y in 1i64..4) {
        let q0 = br(x, y);
        if let (Ok(va), Ok(vb)) = (a.eval(&q0), b.eval(&q0)) {
            prop_assert_eq!(a.add(&b).eval(&q0).unwrap(), &va + &vb);
            prop_assert_eq!(a.mul(&b).eval(&q0).unwrap(), &va * &vb);
            if let Ok(d) = a.div(&b) {
                if !vb.is_zero() {
                    if let Ok(vd) = d.eval(&q0) {
                        prop_assert_eq!(vd, va / vb);
                    }
                }
            }
        }
    }

    #[test]
    fn series_of_product(a in ratfunc(), b in ratfunc(), k in 0usize..4) {
        if let (Ok(sa), Ok(sb)) = (a.series_at_one(k), b.series_at_one(k)) {
            let mut prod = vec![BigRational::zero(); k + 1];
            for i in 0..=k {
                for j in 0..=k - i {
                    prod[i + j] += &sa[i] * &sb[j];
                }
            }
            prop_assert_eq!(a.mul(&b).series_at_one(k).unwrap(), prod);
        }
    }

    #[test]
    fn literals_round_trip(a in ratfunc(), r in rational()) {
        prop_assert_eq!(parse_literal::<RatFunc>(&a.to_literal(), &RatFunc::q()).unwrap(), a);
        prop_assert_eq!(parse_literal::<Rational>(&r.to_literal(), &Rational::one()).unwrap(), r);
    }
}

#[test]
fn laurent_powers_of_q() {
    let q = RatFunc::q();
    let q_inv = q.inv().unwrap();
    assert!(q.mul(&q_inv).is_one());
    assert_eq!(q_inv.eval(&br(2, 1)).unwrap(), br(1, 2));
    assert_eq!(q_inv.to_literal(), parse_literal::<RatFunc>("q^-1", &q).unwrap().to_literal());
}
