//! Oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use qlie::braid::AlgebraSpec;
use qlie::complex::{Complex, ComplexElement, OperatorElement, OperatorTerm};
use qlie::scalar::{Field, Rational};

/// `Ω^i χ_i − ½ Ω^j Ω^i C^k_{ij} γ_k`, written directly from the structure constants.
pub fn familiar_q(spec: &AlgebraSpec<Rational>) -> OperatorElement<Rational> {
    let d = spec.dim;
    let half = Rational::new(-1, 2);
    let mut terms: Vec<OperatorTerm<Rational>> =
        (0..d).map(|i| OperatorTerm { omega: vec![i], chi: vec![i], gamma: vec![], coeff: Rational::one() }).collect();
    for k in 0..d {
        for i in 0..d {
            for j in 0..d {
                let c = spec.c.get(&[k], &[i, j]);
                if !c.is_zero() {
                    terms.push(OperatorTerm { omega: vec![j, i], chi: vec![], gamma: vec![k], coeff: c.mul(&half) });
                }
            }
        }
    }
    OperatorElement { terms }
}

pub type Chain = BTreeMap<(Vec<usize>, Vec<usize>), i64>;

/// `[x_a, x_b]` in the basis (h, e, f).
fn bracket(a: usize, b: usize) -> Vec<(usize, i64)> {
    match (a, b) {
        (0, 1) => vec![(1, 2)],
        (1, 0) => vec![(1, -2)],
        (0, 2) => vec![(2, -2)],
        (2, 0) => vec![(2, 2)],
        (1, 2) => vec![(0, 1)],
        (2, 1) => vec![(0, -1)],
        _ => vec![],
    }
}

/// Sorted PBW monomial times a generator on the right.
fn pbw_times(u: &[usize], g: usize) -> BTreeMap<Vec<usize>, i64> {
    let mut out = BTreeMap::new();
    match u.last() {
        Some(&last) if last > g => {
            let pre = &u[..u.len() - 1];
            for (w, c) in pbw_times(pre, g) {
                for (w2, c2) in pbw_times(&w, last) {
                    *out.entry(w2).or_insert(0) += c * c2;
                }
            }
            for (k, c) in bracket(last, g) {
                for (w2, c2) in pbw_times(pre, k) {
                    *out.entry(w2).or_insert(0) += c * c2;
                }
            }
        }
        _ => {
            let mut w = u.to_vec();
            w.push(g);
            out.insert(w, 1);
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn pbw_word(word: &[usize]) -> BTreeMap<Vec<usize>, i64> {
    let mut acc = BTreeMap::from([(Vec::new(), 1)]);
    for &g in word {
        let mut next = BTreeMap::new();
        for (u, c) in acc {
            for (w, c2) in pbw_times(&u, g) {
                *next.entry(w).or_insert(0) += c * c2;
            }
        }
        acc = next;
    }
    acc
}

/// Sort a wedge monomial; `None` when a letter repeats.
fn wedge(mut v: Vec<usize>) -> Option<(Vec<usize>, i64)> {
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            } else if v[j] == v[j + 1] {
                return None;
            }
        }
    }
    v.windows(2).all(|w| w[0] < w[1]).then_some((v, sign))
}

fn add(chain: &mut Chain, u: &[usize], x: Vec<usize>, c: i64) {
    let Some((x, s)) = wedge(x) else { return };
    for (w, cu) in pbw_word(u) {
        *chain.entry((w, x.clone())).or_insert(0) += c * s * cu;
    }
}

/// `∂(u ⊗ x_1∧…∧x_n) = Σ (−1)^{i+1} u x_i ⊗ …x̂_i… + Σ_{i<j} (−1)^{i+j} u ⊗ [x_i,x_j]∧…x̂_i…x̂_j…`
pub fn boundary(chain: &Chain) -> Chain {
    let mut out = Chain::new();
    for ((u, x), &c) in chain {
        let n = x.len();
        for i in 0..n {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            let mut ux = u.clone();
            ux.push(x[i]);
            let rest: Vec<usize> = x.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &v)| v).collect();
            add(&mut out, &ux, rest, c * sign);
            for j in i + 1..n {
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                let rest: Vec<usize> =
                    x.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, &v)| v).collect();
                for (k, b) in bracket(x[i], x[j]) {
                    let mut y = vec![k];
                    y.extend(&rest);
                    add(&mut out, u, y, c * sign * b);
                }
            }
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

pub fn to_chain(cx: &Complex<Rational>, phi: &ComplexElement<Rational>) -> Chain {
    let mut out = Chain::new();
    for (&(n, word_id, t), c) in phi.terms() {
        let c = c.value();
        assert!(c.is_integer());
        let c: i64 = c.to_integer().try_into().unwrap();
        add(&mut out, &cx.chi().word_of(word_id), cx.wedge().monomial(n, t), c);
    }
    out.retain(|_, c| *c != 0);
    out
}

