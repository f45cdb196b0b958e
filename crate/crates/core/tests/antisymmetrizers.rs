use proptest::prelude::*;
use qlie::braid::{check_chain_identity, check_yang_baxter, AlgebraSpec, AntisymTower, Braiding, TowerLimits};
use qlie::linalg::SparseMat;
use qlie::presets;
use qlie::scalar::{Field, Rational, ScalarMode};
use qlie::tensor::Tensor;
use qlie::uqgl::{build_r, build_r_hat, check_hecke, GlqData};

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn parity(p: &[usize]) -> usize {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            inv += usize::from(p[i] > p[j]);
        }
    }
    inv % 2
}

/// `Σ_π sign(π) π` on `n` legs of dimension `d`, by direct index shuffling.
fn signed_sum(d: usize, n: usize) -> SparseMat<Rational> {
    let size = d.pow(n as u32);
    let digits = |mut f: usize| {
        let mut v = vec![0; n];
        for k in (0..n).rev() {
            v[k] = f % d;
            f /= d;
        }
        v
    };
    let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); size];
    for p in permutations(n) {
        let s = if parity(&p) == 0 { Rational::one() } else { Rational::one().neg() };
        for (r, row) in rows.iter_mut().enumerate() {
            let idx = digits(r);
            let c = p.iter().fold(0, |acc, &k| acc * d + idx[k]);
            row.push((c, s.clone()));
        }
    }
    let mut acc = SparseMat::zeros(size, size);
    acc = acc.add(&SparseMat::from_rows(size, rows));
    acc
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn permutation_height_matches_signed_sum_oracle() {
    for d in 1..=4 {
        let flip = Tensor::<Rational>::flip(d);
        let tower = AntisymTower::build(&Braiding::new(&flip, &flip), TowerLimits::for_dim(d)).unwrap();
        assert_eq!(tower.height(), Some(d), "dim {d}");
        for n in 1..=d + 1 {
            let oracle = signed_sum(d, n);
            assert_eq!(*tower.a(n), oracle, "dim {d}, n {n}");
            assert_eq!(oracle.rank(), binomial(d, n));
        }
    }
}

fn classical(name: &str) -> AlgebraSpec<Rational> {
    presets::classical(name, ScalarMode::Symbolic).unwrap()
}

#[test]
fn four_forms_agree_on_every_preset() {
    for (name, height) in [("sl2", Some(3)), ("gl2", Some(4)), ("gl1|1", None)] {
        let spec = classical(name);
        let limits = TowerLimits { max_n: 5, ..TowerLimits::for_dim(spec.dim) };
        let tower = AntisymTower::build(&spec.braiding(), limits).expect("forms agree");
        assert_eq!(tower.height(), height, "{name}");
    }
    let uq = GlqData::<Rational>::build(2, ScalarMode::numeric(&Rational::new(3, 2).0)).unwrap();
    let tower = AntisymTower::build(&uq.spec.braiding(), TowerLimits::for_dim(4)).unwrap();
    assert_eq!(tower.height(), Some(4));
    assert_eq!(tower.ranks(), vec![4, 6, 4, 1]);
}

#[test]
fn involutive_collapse_identity() {
    for name in ["sl2", "gl2", "gl1|1"] {
        let spec = classical(name);
        assert!(spec.is_involutive());
        let b = spec.braiding();
        let tower = AntisymTower::build(&b, TowerLimits { max_n: 4, ..TowerLimits::for_dim(spec.dim) }).unwrap();
        let d3 = spec.dim.pow(3);
        let m = b.sigma_at(2, 3).mul(&b.sigma_at(1, 3)).sub(&SparseMat::identity(d3));
        assert!(tower.a(3).mul(&m).is_zero(), "{name}");
    }
}

#[test]
fn chain_identity_up_to_four() {
    let uq = GlqData::<Rational>::build(2, ScalarMode::numeric(&Rational::new(3, 2).0)).unwrap();
    for spec in [classical("sl2"), uq.spec] {
        let b = spec.braiding();
        let tower = AntisymTower::build(&b, TowerLimits::for_dim(spec.dim)).unwrap();
        for r in 2..=4 {
            assert!(check_chain_identity(&b, &tower, r), "{} r={r}", spec.name);
        }
    }
}

fn hecke_braiding(q: &Rational) -> Tensor<Rational> {
    build_r_hat(&build_r(2, q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn hecke_r_matrix_braids(a in 1i64..9, b in 1i64..9) {
        let q = Rational::new(a, b);
        let rh = hecke_braiding(&q);
        prop_assert!(check_yang_baxter(&rh).passed());
        prop_assert!(check_hecke(&rh, &q).passed());
    }

    #[test]
    fn height_is_invariant_under_conjugation(a in 2i64..7, g in prop::collection::vec(-3i64..4, 4)) {
        let q = Rational::new(a, 1);
        let g = Tensor::from_fn(2, 1, 1, |o, i| Rational::new(g[o[0] * 2 + i[0]], 1));
        prop_assume!(g.inverse().is_ok());
        let gg = g.tensor(&g).unwrap();
        // eigenvalues 1 and −q⁻², so the tower stops like the flip's
        let rh = hecke_braiding(&q).scale(&q.inv().unwrap());
        let conj = gg.compose(&rh).unwrap().compose(&gg.inverse().unwrap()).unwrap();
        let height = |s: &Tensor<Rational>| {
            AntisymTower::build(&Braiding::new(s, &s.inverse().unwrap()), TowerLimits::for_dim(2)).unwrap().height()
        };
        prop_assert_eq!(height(&rh), Some(2));
        prop_assert_eq!(height(&conj), Some(2));
    }
}
