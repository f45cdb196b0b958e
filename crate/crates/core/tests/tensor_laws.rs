use proptest::prelude::*;
use qlie::scalar::{Field, Rational};
use qlie::tensor::{solve_linear, unflatten, Tensor};

fn entries(len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(prop_oneof![3 => Just(0i64), 2 => -3i64..4], len)
}

fn square(dim: usize, legs: usize) -> impl Strategy<Value = Tensor<Rational>> {
    let size = dim.pow(legs as u32);
    entries(size * size).prop_map(move |v| {
        Tensor::from_fn(dim, legs, legs, |o, i| {
            let r = o.iter().fold(0, |a, x| a * dim + x);
            let c = i.iter().fold(0, |a, x| a * dim + x);
            Rational::new(v[r * size + c], 1)
        })
    })
}

proptest! {
    #[test]
    fn embedding_respects_composition(a in square(2, 2), b in square(2, 2), legs in prop::sample::select(vec![[1, 2], [2, 1], [1, 3], [3, 2]])) {
        let ab = a.compose(&b).unwrap().embed(&legs, 3).unwrap();
        let ea = a.embed(&legs, 3).unwrap();
        let eb = b.embed(&legs, 3).unwrap();
        prop_assert_eq!(ab, ea.compose(&eb).unwrap());
    }

    #[test]
    fn partial_trace_of_composition(a in square(3, 2), b in square(3, 2), leg in 1usize..3) {
        let t = a.compose(&b).unwrap().partial_trace(leg).unwrap();
        for o in 0..3 {
            for i in 0..3 {
                let mut s = Rational::zero();
                for k in 0..3 {
                    let (mut oo, mut ii) = (vec![o, o], vec![i, i]);
                    oo[leg - 1] = k;
                    ii[leg - 1] = k;
                    for m in 0..9 {
                        let mid = unflatten(m, 3, 2);
                        s.add_mul_assign(&a.get(&oo, &mid), &b.get(&mid, &ii));
                    }
                }
                prop_assert_eq!(t.get(&[o], &[i]), s);
            }
        }
    }

    #[test]
    fn solutions_reproduce_rhs(a in square(2, 2), x in square(2, 2)) {
        let b = a.matrix().mul(x.matrix());
        let sol = solve_linear(a.matrix(), &b).expect("consistent by construction");
        prop_assert_eq!(a.matrix().mul(&sol), b);
    }

    #[test]
    fn records_round_trip(a in square(2, 2)) {
        let back = Tensor::from_record(&a.to_record(), &Rational::one()).unwrap();
        prop_assert!(a.to_record().entries.iter().all(|(_, v)| v != "0"));
        prop_assert_eq!(back, a);
    }
}
