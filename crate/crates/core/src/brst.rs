//! The X tensors of the BRST operator, the assembled operator Q and its
//! verification.
//!
//! Operators here are in formula orientation (see [`crate::braid`]): `X_r`
//! is a `d^{r+1} × d^r` matrix, rows indexed by its lower legs.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::braid::{check_chain_identity, AlgebraSpec, AntisymTower, Braiding, Check};
use crate::complex::{BasisKey, Complex, ComplexElement, ComplexError, OperatorElement, OperatorTerm, WedgeBasis};
use crate::linalg::{solve, Inconsistency, PivotOrder, Rref, SparseMat};
use crate::scalar::Field;
use crate::tensor::{unflatten, Tensor};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BrstError {
    #[error("the level-{level} equation for X has no solution (input data violate the axioms)")]
    Inconsistent { level: usize, certificate: Vec<(usize, String)> },
    #[error("X at level {level} does not satisfy its equation")]
    Residual { level: usize },
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("thread pool: {0}")]
    Pool(String),
}

/// One level `r` of the solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrstLevel<F> {
    pub r: usize,
    /// `X_r`.
    pub x: SparseMat<F>,
    /// `A_{1→r+1} X_r A_{1→r}`.
    pub y: SparseMat<F>,
    /// Coordinates of `Y_r` on (Ω-monomials of degree r+1) × (γ-wedge basis of degree r).
    pub z: SparseMat<F>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrstData<F> {
    pub dim: usize,
    pub levels: Vec<BrstLevel<F>>,
}

impl<F: Field> BrstData<F> {
    pub fn level(&self, r: usize) -> &BrstLevel<F> {
        &self.levels[r - 1]
    }

    /// `X_r` as a stored tensor (`r` out legs, `r+1` in legs).
    pub fn x_tensor(&self, r: usize) -> Tensor<F> {
        Tensor::from_matrix(self.dim, r, r + 1, self.level(r).x.transpose()).expect("X shape")
    }

    pub fn y_tensor(&self, r: usize) -> Tensor<F> {
        Tensor::from_matrix(self.dim, r, r + 1, self.level(r).y.transpose()).expect("Y shape")
    }

    pub fn xs(&self) -> Vec<SparseMat<F>> {
        self.levels.iter().map(|l| l.x.clone()).collect()
    }
}

/// `C` in formula orientation: `d² × d`, `[(i,j), k] = C^k_{ij}`.
fn c_formula<F: Field>(spec: &AlgebraSpec<F>) -> SparseMat<F> {
    spec.c.matrix().transpose()
}

/// Number of levels `r` for which `X_r` can be formed.
pub fn level_count<F: Field>(tower: &AntisymTower<F>) -> usize {
    tower.top().saturating_sub(1)
}

/// Right-hand side of the level-`r` equation `A_{1→r+1} X_r A_{1→r} = RHS`.
pub fn recurrence_rhs<F: Field>(
    spec: &AlgebraSpec<F>,
    b: &Braiding<F>,
    tower: &AntisymTower<F>,
    prev: Option<&SparseMat<F>>,
    r: usize,
) -> SparseMat<F> {
    let d = spec.dim;
    match prev {
        None => c_formula(spec).scale(&F::one().neg()),
        Some(xp) => {
            let n = r + 1;
            let sign = if r % 2 == 0 { F::one() } else { F::one().neg() };
            let s = b.chain_left(n, 1, n).scale(&sign).sub(&SparseMat::identity(d.pow(n as u32)));
            let shifted = SparseMat::identity(d).kron(xp);
            let tail = b.on_last(tower.a(r - 1));
            tower.a(n).mul(&s).mul(&shifted).mul(&tail)
        }
    }
}

fn certificate<F: Field>(c: Inconsistency<F>) -> Vec<(usize, String)> {
    c.y.into_iter().map(|(k, v)| (k + 1, v.to_literal())).collect()
}

/// Solve the recurrence level by level; free variables are zero and pivots
/// follow `gauge`.
pub fn solve_x<F: Field>(
    spec: &AlgebraSpec<F>,
    tower: &AntisymTower<F>,
    gauge: PivotOrder,
) -> Result<BrstData<F>, BrstError> {
    let b = spec.braiding();
    let wedge = WedgeBasis::new(tower);
    let mut xs: Vec<SparseMat<F>> = Vec::new();
    for r in 1..=level_count(tower) {
        let rhs = recurrence_rhs(spec, &b, tower, xs.last(), r);
        let (big, small) = (tower.a(r + 1), tower.a(r));
        let cols = Rref::new(big, gauge);
        let rows = Rref::new(&small.transpose(), gauge);
        let (os, gs) = (cols.pivots().to_vec(), rows.pivots().to_vec());
        let all_r: Vec<usize> = (0..big.nrows()).collect();
        let all_c: Vec<usize> = (0..small.ncols()).collect();
        let lm = big.select(&all_r, &os);
        let rm = small.select(&gs, &all_c);
        let m = solve(&lm, &rhs, PivotOrder::Forward)
            .map_err(|c| BrstError::Inconsistent { level: r, certificate: certificate(c) })?;
        let zt = solve(&rm.transpose(), &m.transpose(), PivotOrder::Forward)
            .map_err(|c| BrstError::Inconsistent { level: r, certificate: certificate(c) })?;
        let mut x_rows = vec![Vec::new(); big.ncols()];
        for (b_idx, a_idx, v) in zt.entries() {
            x_rows[os[a_idx]].push((gs[b_idx], v.clone()));
        }
        let x = SparseMat::from_rows(small.nrows(), x_rows);
        if big.mul(&x).mul(small) != rhs {
            return Err(BrstError::Residual { level: r });
        }
        xs.push(x);
    }
    Ok(from_solutions(tower, &wedge, xs))
}

/// Wrap given X tensors (formula orientation) with their sandwiches.
pub fn from_solutions<F: Field>(tower: &AntisymTower<F>, wedge: &WedgeBasis<F>, xs: Vec<SparseMat<F>>) -> BrstData<F> {
    let levels = xs
        .into_iter()
        .enumerate()
        .map(|(k, x)| {
            let r = k + 1;
            let y = tower.a(r + 1).mul(&x).mul(tower.a(r));
            let z = match (wedge.level(r + 1), wedge.level(r)) {
                (Ok(Some(up)), Ok(Some(down))) => up.echelon.mul(&x).mul(&down.coord_matrix()),
                _ => SparseMat::zeros(0, 0),
            };
            BrstLevel { r, x, y, z }
        })
        .collect();
    BrstData { dim: tower.dim(), levels }
}

/// Every level equation, checked exactly for the given X's.
pub fn check_recurrence<F: Field>(spec: &AlgebraSpec<F>, tower: &AntisymTower<F>, xs: &[SparseMat<F>]) -> Vec<Check> {
    let b = spec.braiding();
    let mut out = Vec::new();
    for (k, x) in xs.iter().enumerate() {
        let r = k + 1;
        let rhs = recurrence_rhs(spec, &b, tower, if r == 1 { None } else { Some(&xs[r - 2]) }, r);
        let lhs = tower.a(r + 1).mul(x).mul(tower.a(r));
        let name = if r == 1 { "initial_condition".to_string() } else { format!("recurrence_r{r}") };
        out.push(Check::from_witness(&name, witness(&lhs.sub(&rhs), spec.dim, r + 1, r)));
    }
    out
}

/// Lower-then-upper leg indices of the first nonzero entry.
fn witness<F: Field>(diff: &SparseMat<F>, d: usize, lower: usize, upper: usize) -> Option<Vec<usize>> {
    diff.first_nonzero().map(|(r, c, _)| unflatten(r, d, lower).into_iter().chain(unflatten(c, d, upper)).collect())
}

/// The χ-linear part of `Q² = 0`: the initial condition, and for `r ≥ 2`
/// `A_{1→r+1} X_r (Σ_k (−1)^{r−k} σ⁻¹_{r←k}) A_{1→r−1}
///   = −A_{1→r+1} (σ_{r+1←1} + (−1)^{r−1}) X_{r−1}[2..r+1] σ⁻¹_{r←1} A_{1→r−1}`,
/// together with the chain identity that turns it into the level equation.
pub fn verify_chi_linear<F: Field>(spec: &AlgebraSpec<F>, tower: &AntisymTower<F>, data: &BrstData<F>) -> Vec<Check> {
    let b = spec.braiding();
    let d = spec.dim;
    let mut out = Vec::new();
    if let Some(first) = data.levels.first() {
        let diff = tower.a(2).mul(&first.x).add(&c_formula(spec));
        out.push(Check::from_witness("initial_condition", witness(&diff, d, 2, 1)));
    }
    for r in 2..=data.levels.len() {
        let n = r + 1;
        let x = &data.level(r).x;
        let xp = &data.level(r - 1).x;
        let head = b.on_first(tower.a(r - 1));
        let mut sum = SparseMat::zeros(d.pow(r as u32), d.pow(r as u32));
        for k in 1..=r {
            let s = if (r - k) % 2 == 0 { F::one() } else { F::one().neg() };
            sum = sum.axpy(&s, &b.inv_chain(r, k, r));
        }
        let lhs = tower.a(n).mul(x).mul(&sum).mul(&head);
        let sign = if (r - 1) % 2 == 0 { F::one() } else { F::one().neg() };
        let inner = b.chain_left(n, 1, n).axpy(&sign, &SparseMat::identity(d.pow(n as u32)));
        let rhs = tower
            .a(n)
            .mul(&inner)
            .mul(&SparseMat::identity(d).kron(xp))
            .mul(&b.inv_chain(r, 1, r))
            .mul(&head)
            .scale(&F::one().neg());
        out.push(Check::from_witness(&format!("chi_linear_r{r}"), witness(&lhs.sub(&rhs), d, n, r)));
        let chain = if check_chain_identity(&b, tower, r) { None } else { Some(vec![0]) };
        out.push(Check::from_witness(&format!("chain_identity_r{r}"), chain));
    }
    out
}

/// `Q = Ω^i χ_i + Σ_r Q_(r)`; the Ω-block of `Q_(r)` is written
/// `Ω^{j_{r+1}} … Ω^{j_1}` and its γ-block `γ_{k_1} … γ_{k_r}`.
pub fn assemble_q<F: Field>(wedge: &WedgeBasis<F>, data: &BrstData<F>) -> OperatorElement<F> {
    let d = data.dim;
    let mut terms: Vec<OperatorTerm<F>> =
        (0..d).map(|i| OperatorTerm { omega: vec![i], chi: vec![i], gamma: vec![], coeff: F::one() }).collect();
    for lvl in &data.levels {
        let r = lvl.r;
        let (Ok(Some(up)), Ok(Some(down))) = (wedge.level(r + 1), wedge.level(r)) else { continue };
        for (a, bidx, v) in lvl.z.entries() {
            let mut omega = unflatten(up.dual_basis[a], d, r + 1);
            omega.reverse();
            let gamma = unflatten(down.basis[bidx], d, r);
            terms.push(OperatorTerm { omega, chi: vec![], gamma, coeff: v.clone() });
        }
    }
    OperatorElement { terms }
}

#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub element: String,
    pub residue: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub checked: usize,
    pub chi_cap: usize,
    pub gamma_cap: usize,
    /// Whether d lowered the γ-degree by exactly one on every element.
    pub grading_ok: bool,
    pub failures: Vec<Failure>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.grading_ok
    }
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool, BrstError> {
    rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(|e| BrstError::Pool(e.to_string()))
}

/// `d(d(φ)) = 0` on every basis element within the caps.
pub fn verify_d_squared<F: Field>(
    complex: &Complex<F>,
    q: &OperatorElement<F>,
    chi_cap: usize,
    gamma_cap: usize,
    jobs: usize,
) -> Result<SweepReport, BrstError> {
    let basis = complex.basis(chi_cap, gamma_cap)?;
    let results: Vec<Result<(bool, Option<Failure>), ComplexError>> = pool(jobs)?.install(|| {
        basis
            .par_iter()
            .map(|&key| {
                let phi = ComplexElement::basis(key);
                let once = complex.differential(q, &phi)?;
                let graded = once.degrees().iter().all(|&n| n + 1 == key.0);
                let twice = complex.differential(q, &once)?;
                let failure = (!twice.is_zero())
                    .then(|| Failure { element: complex.render(&phi), residue: complex.render(&twice) });
                Ok((graded, failure))
            })
            .collect()
    });
    let mut report =
        SweepReport { checked: basis.len(), chi_cap, gamma_cap, grading_ok: true, failures: Vec::new() };
    for r in results {
        let (graded, failure) = r?;
        report.grading_ok &= graded;
        report.failures.extend(failure);
    }
    Ok(report)
}

/// Two operators act identically on every basis element within the caps.
pub fn verify_gauge_independence<F: Field>(
    complex: &Complex<F>,
    q1: &OperatorElement<F>,
    q2: &OperatorElement<F>,
    chi_cap: usize,
    gamma_cap: usize,
    jobs: usize,
) -> Result<SweepReport, BrstError> {
    let basis: Vec<BasisKey> = complex.basis(chi_cap, gamma_cap)?;
    let results: Vec<Result<Option<Failure>, ComplexError>> = pool(jobs)?.install(|| {
        basis
            .par_iter()
            .map(|&key| {
                let phi = ComplexElement::basis(key);
                let diff = complex.apply(q1, &phi)?.sub(&complex.apply(q2, &phi)?);
                Ok((!diff.is_zero())
                    .then(|| Failure { element: complex.render(&phi), residue: complex.render(&diff) }))
            })
            .collect()
    });
    let mut report =
        SweepReport { checked: basis.len(), chi_cap, gamma_cap, grading_ok: true, failures: Vec::new() };
    for r in results {
        report.failures.extend(r?);
    }
    Ok(report)
}

/// `X_r + v ⊗ e_0` for a vector `v` with `A_{1→r+1} v = 0`: a change of X
/// that leaves every sandwich unchanged. `None` when `A_{1→r+1}` is injective.
pub fn kernel_perturbation<F: Field>(tower: &AntisymTower<F>, xs: &[SparseMat<F>], r: usize) -> Option<Vec<SparseMat<F>>> {
    let big = tower.a(r + 1);
    let v = Rref::new(big, PivotOrder::Forward).kernel().into_iter().next()?;
    let x = &xs[r - 1];
    let mut rows = x.rows().to_vec();
    for (i, c) in v {
        rows[i].push((0, c));
    }
    let mut out = xs.to_vec();
    out[r - 1] = SparseMat::from_rows(x.ncols(), rows);
    Some(out)
}

/// `X_r + e_{row} ⊗ e_{col}` on a pivot pair, which changes the level-`r` sandwich.
pub fn off_kernel_perturbation<F: Field>(tower: &AntisymTower<F>, xs: &[SparseMat<F>], r: usize) -> Vec<SparseMat<F>> {
    let row = Rref::new(tower.a(r + 1), PivotOrder::Forward).pivots()[0];
    let col = Rref::new(&tower.a(r).transpose(), PivotOrder::Forward).pivots()[0];
    let x = &xs[r - 1];
    let mut rows = x.rows().to_vec();
    rows[row].push((col, F::one()));
    let mut out = xs.to_vec();
    out[r - 1] = SparseMat::from_rows(x.ncols(), rows);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::TowerLimits;
    use crate::presets;
    use crate::scalar::{Rational, ScalarMode};

    #[test]
    fn sl2_d_squared() {
        let spec = presets::sl2::<Rational>(ScalarMode::Symbolic);
        let tower = AntisymTower::build(&spec.braiding(), TowerLimits::for_dim(3)).unwrap();
        let data = solve_x(&spec, &tower, PivotOrder::Forward).unwrap();
        assert!(verify_chi_linear(&spec, &tower, &data).iter().all(Check::passed));
        for lvl in &data.levels[1..] {
            assert!(lvl.y.is_zero());
        }
        let cx = Complex::new(&spec, &tower, 2).unwrap();
        let q = assemble_q(cx.wedge(), &data);
        assert_eq!(q.grading(), Some(-1));
        let rep = verify_d_squared(&cx, &q, 2, 3, 2).unwrap();
        assert!(rep.passed(), "{rep:?}");
    }
}
