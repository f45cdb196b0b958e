//! Exact sparse linear algebra: row-sparse matrices, reduced row echelon
//! forms, linear solves with inconsistency certificates, kernels.

use std::fmt;

use crate::scalar::Field;

/// A sparse vector: `(index, value)` pairs sorted by index, no zeros.
pub type SparseVec<F> = Vec<(usize, F)>;

/// `x += a * y` on sorted sparse vectors.
pub fn axpy<F: Field>(x: &SparseVec<F>, a: &F, y: &SparseVec<F>) -> SparseVec<F> {
    if a.is_zero() {
        return x.clone();
    }
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push(x[i].clone());
            i += 1;
        } else if take_y {
            out.push((y[j].0, a.mul(&y[j].1)));
            j += 1;
        } else {
            let mut v = x[i].1.clone();
            v.add_mul_assign(a, &y[j].1);
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn lookup<F>(v: &SparseVec<F>, idx: usize) -> Option<&F> {
    v.binary_search_by_key(&idx, |e| e.0).ok().map(|k| &v[k].1)
}

/// Row-sparse matrix with exact entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SparseMat<F> {
    ncols: usize,
    rows: Vec<SparseVec<F>>,
}

impl<F: Field> SparseMat<F> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMat { ncols, rows: vec![Vec::new(); nrows] }
    }

    pub fn identity(n: usize) -> Self {
        SparseMat { ncols: n, rows: (0..n).map(|i| vec![(i, F::one())]).collect() }
    }

    /// Build from rows; entries may come unsorted and may repeat (summed).
    pub fn from_rows(ncols: usize, rows: Vec<Vec<(usize, F)>>) -> Self {
        let rows = rows
            .into_iter()
            .map(|mut r| {
                r.sort_by_key(|e| e.0);
                let mut out: SparseVec<F> = Vec::with_capacity(r.len());
                for (c, v) in r {
                    assert!(c < ncols, "column {c} out of range {ncols}");
                    match out.last_mut() {
                        Some(last) if last.0 == c => last.1.add_assign(&v),
                        _ => out.push((c, v)),
                    }
                }
                out.retain(|e| !e.1.is_zero());
                out
            })
            .collect();
        SparseMat { ncols, rows }
    }

    pub fn from_fn(nrows: usize, ncols: usize, f: impl Fn(usize, usize) -> F) -> Self {
        let rows = (0..nrows)
            .map(|r| (0..ncols).map(|c| (c, f(r, c))).filter(|e| !e.1.is_zero()).collect())
            .collect();
        SparseMat { ncols, rows }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row(&self, r: usize) -> &SparseVec<F> {
        &self.rows[r]
    }

    pub fn rows(&self) -> &[SparseVec<F>] {
        &self.rows
    }

    pub fn set_row(&mut self, r: usize, v: SparseVec<F>) {
        debug_assert!(v.windows(2).all(|w| w[0].0 < w[1].0));
        self.rows[r] = v;
    }

    pub fn push_row(&mut self, v: SparseVec<F>) {
        self.rows.push(v);
    }

    pub fn get(&self, r: usize, c: usize) -> F {
        lookup(&self.rows[r], c).cloned().unwrap_or_else(F::zero)
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &F)> {
        self.rows.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn transpose(&self) -> Self {
        let mut rows: Vec<SparseVec<F>> = vec![Vec::new(); self.ncols];
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                rows[*c].push((r, v.clone()));
            }
        }
        SparseMat { ncols: self.nrows(), rows }
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &SparseMat<F>) -> Self {
        assert_eq!(self.ncols, rhs.nrows(), "matrix product shape mismatch");
        let rows = self.rows.iter().map(|row| row_times(row, rhs)).collect();
        SparseMat { ncols: rhs.ncols, rows }
    }

    pub fn mul_vec(&self, v: &SparseVec<F>) -> SparseVec<F> {
        let mut out = Vec::new();
        for (r, row) in self.rows.iter().enumerate() {
            let s = dot(row, v);
            if !s.is_zero() {
                out.push((r, s));
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.axpy(&F::one(), rhs)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.axpy(&F::one().neg(), rhs)
    }

    /// `self + a * rhs`.
    pub fn axpy(&self, a: &F, rhs: &Self) -> Self {
        assert_eq!((self.nrows(), self.ncols), (rhs.nrows(), rhs.ncols), "shape mismatch");
        let rows = self.rows.iter().zip(&rhs.rows).map(|(x, y)| axpy(x, a, y)).collect();
        SparseMat { ncols: self.ncols, rows }
    }

    pub fn scale(&self, a: &F) -> Self {
        if a.is_zero() {
            return Self::zeros(self.nrows(), self.ncols);
        }
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|(c, v)| (*c, v.mul(a))).collect())
            .collect();
        SparseMat { ncols: self.ncols, rows }
    }

    /// Kronecker product; row index `r1 * rhs.nrows + r2`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let mut rows = Vec::with_capacity(self.nrows() * rhs.nrows());
        for a in &self.rows {
            for b in &rhs.rows {
                let mut row = Vec::with_capacity(a.len() * b.len());
                for (ca, va) in a {
                    for (cb, vb) in b {
                        row.push((ca * rhs.ncols + cb, va.mul(vb)));
                    }
                }
                rows.push(row);
            }
        }
        SparseMat { ncols: self.ncols * rhs.ncols, rows }
    }

    /// Submatrix on the given rows and columns (in the given order).
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut pos = vec![usize::MAX; self.ncols];
        for (k, c) in cols.iter().enumerate() {
            pos[*c] = k;
        }
        let out = rows
            .iter()
            .map(|r| {
                let mut v: SparseVec<F> = self.rows[*r]
                    .iter()
                    .filter(|(c, _)| pos[*c] != usize::MAX)
                    .map(|(c, x)| (pos[*c], x.clone()))
                    .collect();
                v.sort_by_key(|e| e.0);
                v
            })
            .collect();
        SparseMat { ncols: cols.len(), rows: out }
    }

    /// First nonzero entry in row-major order.
    pub fn first_nonzero(&self) -> Option<(usize, usize, &F)> {
        self.entries().next()
    }

    pub fn rank(&self) -> usize {
        Rref::new(self, PivotOrder::Forward).rank()
    }
}

pub fn dot<F: Field>(a: &SparseVec<F>, b: &SparseVec<F>) -> F {
    let mut s = F::zero();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                s.add_mul_assign(&a[i].1, &b[j].1);
                i += 1;
                j += 1;
            }
        }
    }
    s
}

/// Row vector times matrix.
pub fn row_times<F: Field>(row: &SparseVec<F>, m: &SparseMat<F>) -> SparseVec<F> {
    match row.len() {
        0 => Vec::new(),
        1 => {
            let (k, a) = &row[0];
            m.rows[*k].iter().map(|(c, v)| (*c, a.mul(v))).filter(|e| !e.1.is_zero()).collect()
        }
        _ => {
            let mut acc: std::collections::BTreeMap<usize, F> = std::collections::BTreeMap::new();
            for (k, a) in row {
                for (c, v) in &m.rows[*k] {
                    acc.entry(*c).or_insert_with(F::zero).add_mul_assign(a, v);
                }
            }
            acc.into_iter().filter(|e| !e.1.is_zero()).collect()
        }
    }
}

impl<F: fmt::Debug> fmt::Debug for SparseMat<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SparseMat {}x{} [", self.rows.len(), self.ncols)?;
        for (r, row) in self.rows.iter().enumerate() {
            if !row.is_empty() {
                write!(f, "  {r}:")?;
                for (c, v) in row {
                    write!(f, " ({c}, {v:?})")?;
                }
                writeln!(f)?;
            }
        }
        write!(f, "]")
    }
}

/// Which end of the column range pivots are taken from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PivotOrder {
    /// Leftmost admissible column first (the default deterministic rule).
    #[default]
    Forward,
    /// Rightmost admissible column first.
    Reverse,
}

/// Reduced row echelon form of a matrix with respect to a pivot order.
///
/// Each basis row has a unit entry at its pivot column and zeros at every
/// other pivot column. Rows are listed in pivot order.
#[derive(Clone, Debug)]
pub struct Rref<F> {
    ncols: usize,
    order: PivotOrder,
    rows: Vec<SparseVec<F>>,
    pivots: Vec<usize>,
    pivot_row: Vec<Option<usize>>,
}

impl<F: Field> Rref<F> {
    pub fn new(m: &SparseMat<F>, order: PivotOrder) -> Self {
        let mut r = Rref::empty(m.ncols(), order);
        for row in m.rows() {
            r.insert(row.clone());
        }
        r.finish();
        r
    }

    /// An empty echelon basis to be grown with [`Rref::insert`].
    pub fn empty(ncols: usize, order: PivotOrder) -> Self {
        Rref { ncols, order, rows: Vec::new(), pivots: Vec::new(), pivot_row: vec![None; ncols] }
    }

    /// Reduce `v` against the current basis (result has no pivot-column entries).
    pub fn reduce(&self, v: &SparseVec<F>) -> SparseVec<F> {
        let mut out = v.clone();
        for (c, a) in v {
            if let Some(r) = self.pivot_row[*c] {
                out = axpy(&out, &a.neg(), &self.rows[r]);
            }
        }
        out
    }

    /// Add a row; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec<F>) -> bool {
        let v = self.reduce(&v);
        if v.is_empty() {
            return false;
        }
        let (p, lead) = match self.order {
            PivotOrder::Forward => v.first().unwrap().clone(),
            PivotOrder::Reverse => v.last().unwrap().clone(),
        };
        let inv = lead.inv().expect("nonzero pivot");
        let v: SparseVec<F> = v.into_iter().map(|(c, x)| (c, x.mul(&inv))).collect();
        for row in self.rows.iter_mut() {
            if let Some(a) = lookup(row, p).cloned() {
                *row = axpy(row, &a.neg(), &v);
            }
        }
        self.pivot_row[p] = Some(self.rows.len());
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    /// Sort rows by pivot position.
    pub fn finish(&mut self) {
        let mut idx: Vec<usize> = (0..self.rows.len()).collect();
        match self.order {
            PivotOrder::Forward => idx.sort_by_key(|&k| self.pivots[k]),
            PivotOrder::Reverse => idx.sort_by_key(|&k| std::cmp::Reverse(self.pivots[k])),
        }
        let rows: Vec<_> = idx.iter().map(|&k| std::mem::take(&mut self.rows[k])).collect();
        let pivots: Vec<_> = idx.iter().map(|&k| self.pivots[k]).collect();
        self.pivot_row = vec![None; self.ncols];
        for (k, p) in pivots.iter().enumerate() {
            self.pivot_row[*p] = Some(k);
        }
        self.rows = rows;
        self.pivots = pivots;
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn order(&self) -> PivotOrder {
        self.order
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[SparseVec<F>] {
        &self.rows
    }

    pub fn pivot_row(&self, col: usize) -> Option<usize> {
        self.pivot_row[col]
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col].is_some()
    }

    /// Non-pivot columns in ascending order.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|c| self.pivot_row[*c].is_none()).collect()
    }

    /// The echelon rows as a matrix (`rank x ncols`).
    pub fn matrix(&self) -> SparseMat<F> {
        SparseMat { ncols: self.ncols, rows: self.rows.clone() }
    }

    /// Coordinates of column `c` of the original matrix in terms of its pivot
    /// columns (one entry per echelon row).
    pub fn column_coords(&self, c: usize) -> SparseVec<F> {
        let mut out = Vec::new();
        for (k, row) in self.rows.iter().enumerate() {
            if let Some(v) = lookup(row, c) {
                out.push((k, v.clone()));
            }
        }
        out
    }

    /// Basis of the right kernel `{x : M x = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<SparseVec<F>> {
        let mut out = Vec::new();
        for f in self.free_columns() {
            let mut v: SparseVec<F> = vec![(f, F::one())];
            for (k, row) in self.rows.iter().enumerate() {
                if let Some(a) = lookup(row, f) {
                    v.push((self.pivots[k], a.neg()));
                }
            }
            v.sort_by_key(|e| e.0);
            out.push(v);
        }
        out
    }
}

/// Proof that `A x = b` has no solution: `y A = 0` while `y b != 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inconsistency<F> {
    pub y: SparseVec<F>,
    /// Column of the right-hand side on which `y b` is nonzero.
    pub rhs_column: usize,
    pub value: F,
}

/// Solve `A X = B` exactly.
///
/// Pivots are chosen by `order` over the columns of `A`; free variables are
/// set to zero. On failure returns a certificate `y` with `y A = 0` and
/// `y B != 0`.
pub fn solve<F: Field>(
    a: &SparseMat<F>,
    b: &SparseMat<F>,
    order: PivotOrder,
) -> Result<SparseMat<F>, Inconsistency<F>> {
    assert_eq!(a.nrows(), b.nrows(), "solve: row count mismatch");
    let (m, n, k) = (a.nrows(), a.ncols(), b.ncols());
    // Augmented [A | B | I]; pivots in the A block follow `order`, the
    // remaining blocks are pivoted left to right.
    let width = n + k + m;
    let mut ech: Rref<F> = Rref::empty(width, PivotOrder::Forward);
    let remap = |c: usize| match order {
        PivotOrder::Forward => c,
        PivotOrder::Reverse => n - 1 - c,
    };
    for r in 0..m {
        let mut row: SparseVec<F> = a.row(r).iter().map(|(c, v)| (remap(*c), v.clone())).collect();
        row.sort_by_key(|e| e.0);
        row.extend(b.row(r).iter().map(|(c, v)| (n + c, v.clone())));
        row.push((n + k + r, F::one()));
        ech.insert(row);
    }
    ech.finish();
    let mut x: Vec<SparseVec<F>> = vec![Vec::new(); n];
    for (row, &p) in ech.rows().iter().zip(ech.pivots()) {
        if p < n {
            let var = remap(p);
            x[var] = row
                .iter()
                .filter(|(c, _)| *c >= n && *c < n + k)
                .map(|(c, v)| (c - n, v.clone()))
                .collect();
        } else if p < n + k {
            let y = row.iter().filter(|(c, _)| *c >= n + k).map(|(c, v)| (c - n - k, v.clone())).collect();
            return Err(Inconsistency { y, rhs_column: p - n, value: lookup(row, p).unwrap().clone() });
        }
    }
    Ok(SparseMat { ncols: k, rows: x })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn m(rows: &[&[i64]]) -> SparseMat<Rational> {
        let ncols = rows[0].len();
        SparseMat::from_fn(rows.len(), ncols, |r, c| Rational::new(rows[r][c], 1))
    }

    #[test]
    fn rref_both_orders() {
        let a = m(&[&[1, 2, 3], &[2, 4, 7]]);
        let f = Rref::new(&a, PivotOrder::Forward);
        assert_eq!(f.pivots(), &[0, 2]);
        let r = Rref::new(&a, PivotOrder::Reverse);
        assert_eq!(r.pivots(), &[2, 1]);
        assert_eq!(f.kernel().len(), 1);
        for v in f.kernel().iter().chain(r.kernel().iter()) {
            assert!(a.mul_vec(v).is_empty());
        }
    }

    #[test]
    fn solve_identity_and_certificate() {
        let id = SparseMat::<Rational>::identity(3);
        let b = m(&[&[1], &[2], &[3]]);
        assert_eq!(solve(&id, &b, PivotOrder::Forward).unwrap(), b);
        let zero = m(&[&[0]]);
        let one = m(&[&[1]]);
        let cert = solve(&zero, &one, PivotOrder::Forward).unwrap_err();
        assert_eq!(cert.y, vec![(0, Rational::new(1, 1))]);
    }

    #[test]
    fn solve_free_variables_zero() {
        let a = m(&[&[1, 1, 0], &[0, 0, 1]]);
        let b = m(&[&[5], &[7]]);
        let x = solve(&a, &b, PivotOrder::Forward).unwrap();
        assert_eq!(x, m(&[&[5], &[0], &[7]]));
        let x = solve(&a, &b, PivotOrder::Reverse).unwrap();
        assert_eq!(x, m(&[&[0], &[5], &[7]]));
    }

    #[test]
    fn kron_and_transpose() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let i = SparseMat::identity(2);
        let k = a.kron(&i);
        assert_eq!(k.get(2, 0), Rational::new(3, 1));
        assert_eq!(k.get(3, 1), Rational::new(3, 1));
        assert_eq!(a.transpose().transpose(), a);
        assert_eq!(a.mul(&i), a);
    }
}
