//! Multi-leg tensors over an exact field.
//!
//! A tensor with `outs` out-legs and `ins` in-legs over a base space of
//! dimension `dim` is a `dim^outs x dim^ins` matrix: out-legs index rows
//! (upper indices), in-legs index columns (lower indices). Multi-indices are
//! flattened with the first leg most significant and are 0-based internally;
//! the interchange record uses 1-based indices.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, Inconsistency, PivotOrder, SparseMat};
use crate::scalar::{parse_literal, Field, LiteralError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("leg {leg} out of range 1..={total}")]
    Leg { leg: usize, total: usize },
    #[error("index {index} out of range 1..={dim}")]
    Index { index: usize, dim: usize },
    #[error(transparent)]
    Literal(#[from] LiteralError),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tensor<F> {
    dim: usize,
    outs: usize,
    ins: usize,
    mat: SparseMat<F>,
}

impl<F: std::fmt::Debug> std::fmt::Debug for Tensor<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Tensor(dim {}, {} out, {} in) ", self.dim, self.outs, self.ins)?;
        self.mat.fmt(f)
    }
}

pub fn flatten(idx: &[usize], dim: usize) -> usize {
    idx.iter().fold(0, |acc, &i| acc * dim + i)
}

pub fn unflatten(mut flat: usize, dim: usize, legs: usize) -> Vec<usize> {
    let mut out = vec![0; legs];
    for k in (0..legs).rev() {
        out[k] = flat % dim;
        flat /= dim;
    }
    out
}

impl<F: Field> Tensor<F> {
    pub fn from_matrix(dim: usize, outs: usize, ins: usize, mat: SparseMat<F>) -> Result<Self, TensorError> {
        if mat.nrows() != dim.pow(outs as u32) || mat.ncols() != dim.pow(ins as u32) {
            return Err(TensorError::Shape(format!(
                "{}x{} matrix for dim {dim} with {outs} out / {ins} in legs",
                mat.nrows(),
                mat.ncols()
            )));
        }
        Ok(Tensor { dim, outs, ins, mat })
    }

    /// Build from a function of the out and in multi-indices (0-based).
    pub fn from_fn(dim: usize, outs: usize, ins: usize, f: impl Fn(&[usize], &[usize]) -> F) -> Self {
        let nr = dim.pow(outs as u32);
        let nc = dim.pow(ins as u32);
        let cols: Vec<Vec<usize>> = (0..nc).map(|c| unflatten(c, dim, ins)).collect();
        let mat = SparseMat::from_fn(nr, nc, |r, c| f(&unflatten(r, dim, outs), &cols[c]));
        Tensor { dim, outs, ins, mat }
    }

    pub fn zeros(dim: usize, outs: usize, ins: usize) -> Self {
        Tensor { dim, outs, ins, mat: SparseMat::zeros(dim.pow(outs as u32), dim.pow(ins as u32)) }
    }

    pub fn identity(dim: usize, legs: usize) -> Self {
        Tensor { dim, outs: legs, ins: legs, mat: SparseMat::identity(dim.pow(legs as u32)) }
    }

    /// Leg permutation operator: sends the basis vector `e_{i_1} ⊗ … ⊗ e_{i_n}`
    /// to the vector whose leg `perm[k]` carries `i_k`.
    pub fn permutation(dim: usize, perm: &[usize]) -> Self {
        let n = perm.len();
        let rows = (0..dim.pow(n as u32))
            .map(|r| {
                let o = unflatten(r, dim, n);
                let i: Vec<usize> = (0..n).map(|k| o[perm[k]]).collect();
                vec![(flatten(&i, dim), F::one())]
            })
            .collect();
        Tensor { dim, outs: n, ins: n, mat: SparseMat::from_rows(dim.pow(n as u32), rows) }
    }

    /// The flip `P` on two legs.
    pub fn flip(dim: usize) -> Self {
        Self::permutation(dim, &[1, 0])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn out_legs(&self) -> usize {
        self.outs
    }

    pub fn in_legs(&self) -> usize {
        self.ins
    }

    pub fn matrix(&self) -> &SparseMat<F> {
        &self.mat
    }

    pub fn into_matrix(self) -> SparseMat<F> {
        self.mat
    }

    pub fn get(&self, out: &[usize], inn: &[usize]) -> F {
        self.mat.get(flatten(out, self.dim), flatten(inn, self.dim))
    }

    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }

    pub fn nnz(&self) -> usize {
        self.mat.nnz()
    }

    /// Nonzero entries as `(out multi-index, in multi-index, value)`, row-major.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, Vec<usize>, &F)> {
        let (d, o, i) = (self.dim, self.outs, self.ins);
        self.mat.entries().map(move |(r, c, v)| (unflatten(r, d, o), unflatten(c, d, i), v))
    }

    fn same_shape(&self, rhs: &Self) -> Result<(), TensorError> {
        if (self.dim, self.outs, self.ins) != (rhs.dim, rhs.outs, rhs.ins) {
            return Err(TensorError::Shape(format!(
                "({}, {}, {}) vs ({}, {}, {})",
                self.dim, self.outs, self.ins, rhs.dim, rhs.outs, rhs.ins
            )));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, TensorError> {
        self.same_shape(rhs)?;
        Ok(Tensor { mat: self.mat.add(&rhs.mat), ..self.clone_shape() })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, TensorError> {
        self.same_shape(rhs)?;
        Ok(Tensor { mat: self.mat.sub(&rhs.mat), ..self.clone_shape() })
    }

    pub fn scale(&self, a: &F) -> Self {
        Tensor { mat: self.mat.scale(a), ..self.clone_shape() }
    }

    fn clone_shape(&self) -> Self {
        Tensor { dim: self.dim, outs: self.outs, ins: self.ins, mat: SparseMat::zeros(0, 0) }
    }

    /// Composition `self ∘ rhs`: the in-legs of `self` contract with the
    /// out-legs of `rhs`.
    pub fn compose(&self, rhs: &Self) -> Result<Self, TensorError> {
        if self.dim != rhs.dim || self.ins != rhs.outs {
            return Err(TensorError::Shape(format!(
                "cannot compose {} in-legs with {} out-legs (dims {} and {})",
                self.ins, rhs.outs, self.dim, rhs.dim
            )));
        }
        Ok(Tensor { dim: self.dim, outs: self.outs, ins: rhs.ins, mat: self.mat.mul(&rhs.mat) })
    }

    /// Operator on `total` legs acting as `self` on the listed legs (1-based,
    /// in order) and as the identity elsewhere.
    pub fn embed(&self, legs: &[usize], total: usize) -> Result<Self, TensorError> {
        if self.outs != self.ins || self.outs != legs.len() {
            return Err(TensorError::Shape(format!(
                "embedding a ({}, {}) tensor into {} legs",
                self.outs,
                self.ins,
                legs.len()
            )));
        }
        for (k, &l) in legs.iter().enumerate() {
            if l == 0 || l > total {
                return Err(TensorError::Leg { leg: l, total });
            }
            if legs[..k].contains(&l) {
                return Err(TensorError::Shape(format!("leg {l} listed twice")));
            }
        }
        let d = self.dim;
        let n = legs.len();
        let size = d.pow(total as u32);
        let mut rows = Vec::with_capacity(size);
        for r in 0..size {
            let o = unflatten(r, d, total);
            let sub: Vec<usize> = legs.iter().map(|l| o[l - 1]).collect();
            let mut row = Vec::new();
            for (c, v) in self.mat.row(flatten(&sub, d)) {
                let ci = unflatten(*c, d, n);
                let mut full = o.clone();
                for (k, l) in legs.iter().enumerate() {
                    full[l - 1] = ci[k];
                }
                row.push((flatten(&full, d), v.clone()));
            }
            rows.push(row);
        }
        Ok(Tensor { dim: d, outs: total, ins: total, mat: SparseMat::from_rows(size, rows) })
    }

    /// Tensor product `self ⊗ rhs` (legs of `self` first).
    pub fn tensor(&self, rhs: &Self) -> Result<Self, TensorError> {
        if self.dim != rhs.dim {
            return Err(TensorError::Shape("tensor product of different dims".into()));
        }
        Ok(Tensor {
            dim: self.dim,
            outs: self.outs + rhs.outs,
            ins: self.ins + rhs.ins,
            mat: self.mat.kron(&rhs.mat),
        })
    }

    /// Trace over leg `leg` (1-based), which must exist on both sides.
    pub fn partial_trace(&self, leg: usize) -> Result<Self, TensorError> {
        if leg == 0 || leg > self.outs || leg > self.ins {
            return Err(TensorError::Leg { leg, total: self.outs.min(self.ins) });
        }
        let d = self.dim;
        let (no, ni) = (self.outs - 1, self.ins - 1);
        let mut rows: Vec<Vec<(usize, F)>> = vec![Vec::new(); d.pow(no as u32)];
        for (r, c, v) in self.mat.entries() {
            let mut o = unflatten(r, d, self.outs);
            let mut i = unflatten(c, d, self.ins);
            if o[leg - 1] != i[leg - 1] {
                continue;
            }
            o.remove(leg - 1);
            i.remove(leg - 1);
            rows[flatten(&o, d)].push((flatten(&i, d), v.clone()));
        }
        Ok(Tensor { dim: d, outs: no, ins: ni, mat: SparseMat::from_rows(d.pow(ni as u32), rows) })
    }

    /// Inverse as a square operator.
    pub fn inverse(&self) -> Result<Self, TensorError> {
        if self.outs != self.ins {
            return Err(TensorError::Shape("inverse of a non-square tensor".into()));
        }
        let n = self.mat.nrows();
        linalg::solve(&self.mat, &SparseMat::identity(n), PivotOrder::Forward)
            .ok()
            .filter(|x| self.mat.mul(x) == SparseMat::identity(n))
            .map(|x| Tensor { mat: x, ..self.clone_shape() })
            .ok_or_else(|| TensorError::Shape("operator is singular".into()))
    }

    /// Position of the first differing entry, as `(out, in)` multi-indices.
    pub fn first_difference(&self, rhs: &Self) -> Option<(Vec<usize>, Vec<usize>)> {
        let diff = self.mat.sub(&rhs.mat);
        diff.first_nonzero()
            .map(|(r, c, _)| (unflatten(r, self.dim, self.outs), unflatten(c, self.dim, self.ins)))
    }

    pub fn to_record(&self) -> TensorRecord {
        TensorRecord {
            dim: self.dim,
            out_legs: self.outs,
            in_legs: self.ins,
            entries: self
                .entries()
                .map(|(o, i, v)| {
                    let idx = o.iter().chain(i.iter()).map(|x| x + 1).collect();
                    (idx, v.to_literal())
                })
                .collect(),
        }
    }

    pub fn from_record(rec: &TensorRecord, q: &F) -> Result<Self, TensorError> {
        let d = rec.dim;
        let nl = rec.out_legs + rec.in_legs;
        let mut rows: Vec<Vec<(usize, F)>> = vec![Vec::new(); d.pow(rec.out_legs as u32)];
        for (idx, lit) in &rec.entries {
            if idx.len() != nl {
                return Err(TensorError::Shape(format!("index tuple {idx:?} has {} entries, need {nl}", idx.len())));
            }
            if let Some(&bad) = idx.iter().find(|&&x| x == 0 || x > d) {
                return Err(TensorError::Index { index: bad, dim: d });
            }
            let z: Vec<usize> = idx.iter().map(|x| x - 1).collect();
            let v: F = parse_literal(lit, q)?;
            rows[flatten(&z[..rec.out_legs], d)].push((flatten(&z[rec.out_legs..], d), v));
        }
        let mat = SparseMat::from_rows(d.pow(rec.in_legs as u32), rows);
        Tensor::from_matrix(d, rec.out_legs, rec.in_legs, mat)
    }
}

/// Sparse interchange form: 1-based index tuples (out legs then in legs)
/// with scalar literals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorRecord {
    pub dim: usize,
    pub out_legs: usize,
    pub in_legs: usize,
    pub entries: Vec<(Vec<usize>, String)>,
}

/// Solve `A X = B` for tensors viewed as matrices (see [`linalg::solve`]).
pub fn solve_linear<F: Field>(
    a: &SparseMat<F>,
    b: &SparseMat<F>,
) -> Result<SparseMat<F>, Inconsistency<F>> {
    linalg::solve(a, b, PivotOrder::Forward)
}
