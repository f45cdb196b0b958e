//! U_q(gl(N)): the Drinfeld–Jimbo R-matrix, the matrices Ψ and D, the
//! braiding σ and structure constants C on the N²-dimensional space of
//! index pairs, and the ω/L/J realization of the BRST operator.

mod olj;

use thiserror::Error;

use crate::braid::{check_qlie_axioms, AlgebraSpec, BraidError, Check, labeled::Labeled};
use crate::linalg::SparseMat;
use crate::scalar::{Field, HasParameter, LiteralError, ScalarMode};
use crate::tensor::{solve_linear, Tensor};

pub use olj::{
    classical_limit, closed_form_q, verify_identities, ClassicalLimitReport, IdentityReport, Inverse, Key, LimitRow, Olj,
    OljElement, Sector,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UqError {
    #[error("N must be at least 2 (got {0})")]
    TooSmall(usize),
    #[error("{0} is singular")]
    Singular(&'static str),
    #[error("the defining relation of {0} has no solution")]
    Inconsistent(&'static str),
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error(transparent)]
    Literal(#[from] LiteralError),
    #[error("{0}")]
    Olj(String),
}

/// `q − q⁻¹`.
pub fn lambda<F: Field>(q: &F) -> F {
    q.sub(&q.inv().expect("q is nonzero"))
}

/// `R^{i1 i2}_{j1 j2} = δ δ (q if i1 = i2 else 1) + λ δ^{i1}_{j2} δ^{i2}_{j1} [i1 > i2]`.
pub fn build_r<F: Field>(n: usize, q: &F) -> Tensor<F> {
    let lam = lambda(q);
    Tensor::from_fn(n, 2, 2, |o, i| {
        let mut v = F::zero();
        if o[0] == i[0] && o[1] == i[1] {
            v = if o[0] == o[1] { q.clone() } else { F::one() };
        }
        if o[0] == i[1] && o[1] == i[0] && o[0] > o[1] {
            v = v.add(&lam);
        }
        v
    })
}

/// `R̂^{ab}_{cd} = R^{ba}_{cd}`.
pub fn build_r_hat<F: Field>(r: &Tensor<F>) -> Tensor<F> {
    Tensor::flip(r.dim()).compose(r).expect("R shape")
}

/// `R̂² − λR̂ − 1 = 0`.
pub fn check_hecke<F: Field>(r_hat: &Tensor<F>, q: &F) -> Check {
    let n = r_hat.dim();
    let sq = r_hat.compose(r_hat).expect("shape");
    let rhs = r_hat.scale(&lambda(q)).add(&Tensor::identity(n, 2)).expect("shape");
    Check::from_witness("hecke", sq.first_difference(&rhs).map(|(o, i)| o.into_iter().chain(i).collect()))
}

/// Which trace relation defines Ψ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsiRelation {
    /// `Tr₂ R̂₁₂ Ψ₂₃ = P₁₃`
    Left,
    /// `Tr₂ Ψ₁₂ R̂₂₃ = P₁₃`
    Right,
}

fn idx4(n: usize, a: usize, b: usize, c: usize, d: usize) -> usize {
    ((a * n + b) * n + c) * n + d
}

/// Ψ with `Ψ^{be}_{xf}` stored as out legs `(b, e)` and in legs `(x, f)`.
pub fn solve_psi<F: Field>(r_hat: &Tensor<F>, rel: PsiRelation) -> Result<Tensor<F>, UqError> {
    let n = r_hat.dim();
    let rh = |a: usize, b: usize, c: usize, d: usize| r_hat.get(&[a, b], &[c, d]);
    let size = n.pow(4);
    let mut rows = vec![Vec::new(); size];
    let mut rhs = vec![Vec::new(); size];
    for (a, e, c, f) in quads(n) {
        let row = idx4(n, a, e, c, f);
        if a == f && e == c {
            rhs[row].push((0, F::one()));
        }
        for (b, x) in pairs(n) {
            match rel {
                PsiRelation::Left => rows[row].push((idx4(n, b, e, x, f), rh(a, x, c, b))),
                PsiRelation::Right => rows[row].push((idx4(n, a, x, c, b), rh(b, e, x, f))),
            }
        }
    }
    let m = SparseMat::from_rows(size, rows);
    let b = SparseMat::from_rows(1, rhs);
    let sol = solve_linear(&m, &b).map_err(|_| UqError::Inconsistent("Ψ"))?;
    let psi = Tensor::from_fn(n, 2, 2, |o, i| sol.get(idx4(n, o[0], o[1], i[0], i[1]), 0));
    Ok(psi)
}

/// `D^a_c = Σ_b Ψ^{ab}_{cb}`.
pub fn d_from_psi<F: Field>(psi: &Tensor<F>) -> Tensor<F> {
    let n = psi.dim();
    Tensor::from_fn(n, 1, 1, |o, i| {
        let mut s = F::zero();
        for b in 0..n {
            s.add_assign(&psi.get(&[o[0], b], &[i[0], b]));
        }
        s
    })
}

/// The two defining trace relations of Ψ and `Tr₁(D₁⁻¹ R̂⁻¹) = 1`.
pub fn check_psi_d<F: Field>(r_hat: &Tensor<F>, psi: &Tensor<F>, d: &Tensor<F>) -> Result<Vec<Check>, UqError> {
    let n = r_hat.dim();
    let rh = Labeled::of(r_hat, "axcb");
    let p = |l: &str| Labeled::of(psi, l);
    let delta = |l: &str| Labeled::<F>::delta(n, l);
    let target = delta("af").mul(&delta("ec"));
    let left = rh.mul(&p("bexf")).to("aecf");
    let right = p("axcb").mul(&Labeled::of(r_hat, "bexf")).to("aecf");
    let r_hat_inv = r_hat.inverse().map_err(|_| UqError::Singular("R̂"))?;
    let d_inv = d.inverse().map_err(|_| UqError::Singular("D"))?;
    let tr = Labeled::of(&d_inv, "xa").mul(&Labeled::of(&r_hat_inv, "abxd")).to("bd");
    Ok(vec![
        Check::from_witness("psi_left_trace", left.first_difference(&target.to("aecf"))),
        Check::from_witness("psi_right_trace", right.first_difference(&target.to("aecf"))),
        Check::from_witness("quantum_trace_unit", tr.first_difference(&delta("bd"))),
    ])
}

/// σ and C on the space of index pairs `(i, j) ↦ i·N + j`.
pub fn build_sigma_c<F: Field>(r: &Tensor<F>, d: &Tensor<F>) -> Result<(Tensor<F>, Tensor<F>), UqError> {
    let n = r.dim();
    let ri = r.inverse().map_err(|_| UqError::Singular("R"))?;
    let di = d.inverse().map_err(|_| UqError::Singular("D"))?;
    let s = Labeled::of(r, "jusp")
        .mul(&Labeled::of(&ri, "smkr"))
        .mul(&Labeled::of(&di, "fo"))
        .mul(&Labeled::of(r, "nout"))
        .mul(&Labeled::of(d, "tl"))
        .mul(&Labeled::of(&ri, "riqf"))
        .to("jlnqmpik");
    let mut s8 = vec![F::zero(); n.pow(8)];
    let flat = |ix: &[usize]| ix.iter().fold(0, |acc, x| acc * n + x);
    for (ix, v) in s.entries() {
        s8[flat(ix)] = v.clone();
    }
    let sig = Tensor::from_fn(n * n, 2, 2, |o, i| {
        let (j, l, nn, q) = (o[0] / n, o[0] % n, o[1] / n, o[1] % n);
        let (p, m, k, ii) = (i[0] / n, i[0] % n, i[1] / n, i[1] % n);
        s8[flat(&[j, l, nn, q, m, p, ii, k])].clone()
    });
    // C^{qp}_{(ji)(nm)} = δ^q_j δ^i_n δ^m_p − Σ_t S[q,t,t,p,i,j,m,n]
    let c = Tensor::from_fn(n * n, 1, 2, |o, i| {
        let (q, p) = (o[0] / n, o[0] % n);
        let (j, ii, nn, m) = (i[0] / n, i[0] % n, i[1] / n, i[1] % n);
        let mut v = if q == j && ii == nn && m == p { F::one() } else { F::zero() };
        for t in 0..n {
            v = v.sub(&s8[flat(&[q, t, t, p, ii, j, m, nn])]);
        }
        v
    });
    Ok((sig, c))
}

/// Everything derived from the R-matrix of U_q(gl(N)).
#[derive(Debug, Clone)]
pub struct GlqData<F> {
    pub n: usize,
    pub q: F,
    pub r: Tensor<F>,
    pub r_hat: Tensor<F>,
    pub psi: Tensor<F>,
    pub d: Tensor<F>,
    pub spec: AlgebraSpec<F>,
}

impl<F: HasParameter> GlqData<F> {
    pub fn build(n: usize, mode: ScalarMode) -> Result<Self, UqError> {
        if n < 2 {
            return Err(UqError::TooSmall(n));
        }
        let q = F::parameter(&mode)?;
        let r = build_r(n, &q);
        let r_hat = build_r_hat(&r);
        let psi = solve_psi(&r_hat, PsiRelation::Left)?;
        let d = d_from_psi(&psi);
        let (sigma, c) = build_sigma_c(&r, &d)?;
        let spec = AlgebraSpec::new(&format!("uq-gl{n}"), sigma, c, mode)?;
        Ok(GlqData { n, q, r, r_hat, psi, d, spec })
    }
}

impl<F: Field> GlqData<F> {
    /// Hecke condition, Ψ/D relations, and the quantum Lie algebra axioms of (σ, C).
    pub fn checks(&self) -> Result<Vec<Check>, UqError> {
        let mut out = vec![check_hecke(&self.r_hat, &self.q)];
        out.extend(check_psi_d(&self.r_hat, &self.psi, &self.d)?);
        out.extend(check_qlie_axioms(&self.spec).checks);
        Ok(out)
    }

    /// Rebuild σ and C from Ψ solved through the other trace relation.
    pub fn rebuilt_from_right_trace(&self) -> Result<(Tensor<F>, Tensor<F>), UqError> {
        let psi = solve_psi(&self.r_hat, PsiRelation::Right)?;
        build_sigma_c(&self.r, &d_from_psi(&psi))
    }
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |a| (0..n).map(move |b| (a, b)))
}

fn quads(n: usize) -> impl Iterator<Item = (usize, usize, usize, usize)> {
    pairs(n).flat_map(move |(a, b)| pairs(n).map(move |(c, e)| (a, b, c, e)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn gl2_at_three_halves() {
        let data = GlqData::<Rational>::build(2, ScalarMode::numeric(&Rational::new(3, 2).0)).unwrap();
        for c in data.checks().unwrap() {
            assert!(c.passed(), "{c:?}");
        }
        let q = Rational::new(3, 2);
        assert_eq!(data.r.get(&[0, 0], &[0, 0]), q);
        assert_eq!(data.r.get(&[0, 1], &[0, 1]), Rational::new(1, 1));
        assert_eq!(data.r.get(&[1, 0], &[0, 1]), lambda(&q));
    }
}
