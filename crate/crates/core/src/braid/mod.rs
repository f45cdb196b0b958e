//! The braiding σ and the structure constants C: chains, antisymmetrizers,
//! height, and the quantum Lie algebra axioms.
//!
//! Formulas in the FRT calculus read left to right with the upper indices of
//! a factor contracted against the lower indices of the next. Internally
//! every operator is therefore kept as the transpose of its stored tensor
//! matrix (rows = lower indices), so that a product written `M N` is the
//! matrix product `M * N`. [`Braiding`] holds σ in that orientation.

mod axioms;
pub mod labeled;

use thiserror::Error;

use crate::linalg::SparseMat;
use crate::scalar::{Field, ScalarMode};
use crate::tensor::{Tensor, TensorError};

pub use axioms::{
    check_c_condition, check_qlie_axioms, check_yang_baxter, unit_eigenprojector, AxiomReport, Check,
    CheckStatus, EigenError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraidError {
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error("sigma is not invertible")]
    Singular,
    #[error("chain needs n > k (got k = {k}, n = {n})")]
    Chain { k: usize, n: usize },
    #[error("antisymmetrizer forms disagree at n = {n}: {form}")]
    FormsDisagree { n: usize, form: &'static str },
}

/// A quantum Lie algebra datum: braiding σ (2 out, 2 in) and structure
/// constants C (1 out, 2 in) on a space of dimension `dim`.
#[derive(Clone, Debug)]
pub struct AlgebraSpec<F> {
    pub name: String,
    pub dim: usize,
    pub sigma: Tensor<F>,
    pub c: Tensor<F>,
    pub mode: ScalarMode,
    sigma_inv: Tensor<F>,
}

impl<F: Field> AlgebraSpec<F> {
    pub fn new(name: &str, sigma: Tensor<F>, c: Tensor<F>, mode: ScalarMode) -> Result<Self, BraidError> {
        let dim = sigma.dim();
        if sigma.out_legs() != 2 || sigma.in_legs() != 2 {
            return Err(TensorError::Shape("sigma must have 2 out and 2 in legs".into()).into());
        }
        if c.out_legs() != 1 || c.in_legs() != 2 || c.dim() != dim {
            return Err(TensorError::Shape("C must have 1 out and 2 in legs over the same space".into()).into());
        }
        let sigma_inv = sigma.inverse().map_err(|_| BraidError::Singular)?;
        Ok(AlgebraSpec { name: name.to_string(), dim, sigma, c, mode, sigma_inv })
    }

    pub fn sigma_inv(&self) -> &Tensor<F> {
        &self.sigma_inv
    }

    pub fn braiding(&self) -> Braiding<F> {
        Braiding::new(&self.sigma, &self.sigma_inv)
    }

    /// Whether σ² = 1.
    pub fn is_involutive(&self) -> bool {
        self.sigma.compose(&self.sigma).map(|s| s == Tensor::identity(self.dim, 2)).unwrap_or(false)
    }
}

/// σ and σ⁻¹ in formula orientation, with leg embeddings.
#[derive(Clone, Debug)]
pub struct Braiding<F> {
    dim: usize,
    s: SparseMat<F>,
    si: SparseMat<F>,
}

impl<F: Field> Braiding<F> {
    pub fn new(sigma: &Tensor<F>, sigma_inv: &Tensor<F>) -> Self {
        Braiding { dim: sigma.dim(), s: sigma.matrix().transpose(), si: sigma_inv.matrix().transpose() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `m` acting on the legs `k, k+1` of `n` legs (1-based).
    pub fn emb(&self, m: &SparseMat<F>, k: usize, n: usize) -> SparseMat<F> {
        let left = SparseMat::identity(self.dim.pow((k - 1) as u32));
        let right = SparseMat::identity(self.dim.pow((n - k - 1) as u32));
        left.kron(m).kron(&right)
    }

    /// `σ_{k,k+1}` on `n` legs.
    pub fn sigma_at(&self, k: usize, n: usize) -> SparseMat<F> {
        self.emb(&self.s, k, n)
    }

    /// `σ⁻¹_{k,k+1}` on `n` legs.
    pub fn sigma_inv_at(&self, k: usize, n: usize) -> SparseMat<F> {
        self.emb(&self.si, k, n)
    }

    /// `σ_{k→n} = σ_{k,k+1} σ_{k+1,k+2} … σ_{n-1,n}` on `total` legs.
    pub fn chain_right(&self, k: usize, n: usize, total: usize) -> SparseMat<F> {
        let mut p = SparseMat::identity(self.dim.pow(total as u32));
        for a in k..n {
            p = p.mul(&self.sigma_at(a, total));
        }
        p
    }

    /// `σ_{n←k} = σ_{n-1,n} … σ_{k+1,k+2} σ_{k,k+1}` on `total` legs.
    pub fn chain_left(&self, n: usize, k: usize, total: usize) -> SparseMat<F> {
        let mut p = SparseMat::identity(self.dim.pow(total as u32));
        for a in (k..n).rev() {
            p = p.mul(&self.sigma_at(a, total));
        }
        p
    }

    /// `σ⁻¹_{r←k} = σ⁻¹_{k,k+1} … σ⁻¹_{r-1,r}` on `total` legs; the identity for `r = k`.
    pub fn inv_chain(&self, r: usize, k: usize, total: usize) -> SparseMat<F> {
        let mut p = SparseMat::identity(self.dim.pow(total as u32));
        for a in k..r {
            p = p.mul(&self.sigma_inv_at(a, total));
        }
        p
    }

    /// `A ⊗ 1`: an operator on the first `n-1` of `n` legs.
    pub fn on_first(&self, a: &SparseMat<F>) -> SparseMat<F> {
        a.kron(&SparseMat::identity(self.dim))
    }

    /// `1 ⊗ A`: an operator on the last `n-1` of `n` legs.
    pub fn on_last(&self, a: &SparseMat<F>) -> SparseMat<F> {
        SparseMat::identity(self.dim).kron(a)
    }
}

/// Direction of a braid chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainKind {
    /// `σ_{k→n} = σ_{k,k+1} … σ_{n-1,n}`
    Right,
    /// `σ_{n←k} = σ_{n-1,n} … σ_{k,k+1}`
    Left,
}

/// Braid chain as a tensor on `n` legs.
pub fn braid_chain<F: Field>(
    spec: &AlgebraSpec<F>,
    kind: ChainKind,
    k: usize,
    n: usize,
) -> Result<Tensor<F>, BraidError> {
    if n <= k || k == 0 {
        return Err(BraidError::Chain { k, n });
    }
    let b = spec.braiding();
    let m = match kind {
        ChainKind::Right => b.chain_right(k, n, n),
        ChainKind::Left => b.chain_left(n, k, n),
    };
    Ok(Tensor::from_matrix(spec.dim, n, n, m.transpose())?)
}

/// Limits for the antisymmetrizer search.
#[derive(Debug, Clone, Copy)]
pub struct TowerLimits {
    /// Largest `n` for which `A_{1→n}` is built.
    pub max_n: usize,
    /// Largest operator size `dim^n` allowed.
    pub max_size: usize,
}

impl TowerLimits {
    pub fn for_dim(dim: usize) -> Self {
        TowerLimits { max_n: dim * dim + 1, max_size: 1 << 12 }
    }
}

/// The antisymmetrizers `A_{1→1}, A_{1→2}, …` in formula orientation.
#[derive(Clone, Debug)]
pub struct AntisymTower<F> {
    dim: usize,
    levels: Vec<SparseMat<F>>,
    height: Option<usize>,
}

impl<F: Field> AntisymTower<F> {
    /// Build the tower until the first vanishing operator or until a limit,
    /// checking the four equivalent constructions at every step.
    pub fn build(b: &Braiding<F>, limits: TowerLimits) -> Result<Self, BraidError> {
        let d = b.dim();
        let mut levels = vec![SparseMat::identity(d)];
        let mut height = None;
        let mut n = 2;
        while n <= limits.max_n && d.pow(n as u32) <= limits.max_size {
            let prev = &levels[n - 2];
            let first = b.on_first(prev);
            let last = b.on_last(prev);
            let a = right_chain_sum_left(b, &first, n);
            let forms: [(&'static str, SparseMat<F>); 3] = [
                ("A(1→n-1) (1 + Σ (-1)^{n-k} σ(n←k))", first_times_left_sum(b, &first, n)),
                ("(1 + Σ (-1)^k σ(k+1←1)) A(2→n)", left_sum_times(b, &last, n)),
                ("A(2→n) (1 + Σ (-1)^k σ(1→k+1))", last_times_right_sum(b, &last, n)),
            ];
            for (name, f) in forms {
                if f != a {
                    return Err(BraidError::FormsDisagree { n, form: name });
                }
            }
            let zero = a.is_zero();
            levels.push(a);
            if zero {
                height = Some(n - 1);
                break;
            }
            n += 1;
        }
        Ok(AntisymTower { dim: d, levels, height })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `A_{1→n}` in formula orientation, for `1 ≤ n ≤ self.computed()`.
    pub fn a(&self, n: usize) -> &SparseMat<F> {
        &self.levels[n - 1]
    }

    /// `A_{1→n}` as a stored tensor.
    pub fn tensor(&self, n: usize) -> Tensor<F> {
        Tensor::from_matrix(self.dim, n, n, self.levels[n - 1].transpose()).expect("tower shape")
    }

    /// Largest `n` for which `A_{1→n}` has been computed.
    pub fn computed(&self) -> usize {
        self.levels.len()
    }

    /// The height when the tower terminated within the limits.
    pub fn height(&self) -> Option<usize> {
        self.height
    }

    pub fn is_terminated(&self) -> bool {
        self.height.is_some()
    }

    /// Highest degree with a known nonzero antisymmetrizer.
    pub fn top(&self) -> usize {
        self.height.unwrap_or(self.levels.len())
    }

    /// Ranks of `A_{1→n}` for `n = 1..=top`.
    pub fn ranks(&self) -> Vec<usize> {
        (1..=self.top()).map(|n| self.levels[n - 1].rank()).collect()
    }
}

/// `(1 + Σ_k (-1)^{n-k} σ_{k→n}) X`, evaluated from the right end of the chains.
fn right_chain_sum_left<F: Field>(b: &Braiding<F>, x: &SparseMat<F>, n: usize) -> SparseMat<F> {
    let mut acc = x.clone();
    let mut w = x.clone();
    for k in (1..n).rev() {
        w = b.sigma_at(k, n).mul(&w);
        acc = acc.axpy(&sign(n - k), &w);
    }
    acc
}

/// `X (1 + Σ_k (-1)^{n-k} σ_{n←k})`.
fn first_times_left_sum<F: Field>(b: &Braiding<F>, x: &SparseMat<F>, n: usize) -> SparseMat<F> {
    let mut acc = x.clone();
    for k in 1..n {
        let mut v = x.clone();
        for a in (k..n).rev() {
            v = v.mul(&b.sigma_at(a, n));
        }
        acc = acc.axpy(&sign(n - k), &v);
    }
    acc
}

/// `(1 + Σ_k (-1)^k σ_{k+1←1}) X`.
fn left_sum_times<F: Field>(b: &Braiding<F>, x: &SparseMat<F>, n: usize) -> SparseMat<F> {
    let mut acc = x.clone();
    let mut u = x.clone();
    for k in 1..n {
        u = b.sigma_at(k, n).mul(&u);
        acc = acc.axpy(&sign(k), &u);
    }
    acc
}

/// `X (1 + Σ_k (-1)^k σ_{1→k+1})`.
fn last_times_right_sum<F: Field>(b: &Braiding<F>, x: &SparseMat<F>, n: usize) -> SparseMat<F> {
    let mut acc = x.clone();
    for k in 1..n {
        let mut v = x.clone();
        for a in 1..=k {
            v = v.mul(&b.sigma_at(a, n));
        }
        acc = acc.axpy(&sign(k), &v);
    }
    acc
}

pub(crate) fn sign<F: Field>(k: usize) -> F {
    if k % 2 == 0 {
        F::one()
    } else {
        F::one().neg()
    }
}

/// `σ⁻¹_{r←1} A_{1→r-1} = A_{2→r} σ⁻¹_{r←1}` on `r` legs.
pub fn check_chain_identity<F: Field>(b: &Braiding<F>, tower: &AntisymTower<F>, r: usize) -> bool {
    let chain = b.inv_chain(r, 1, r);
    let prev = tower.a(r - 1);
    chain.mul(&b.on_first(prev)) == b.on_last(prev).mul(&chain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn perm_spec(dim: usize) -> AlgebraSpec<Rational> {
        AlgebraSpec::new(
            "perm",
            Tensor::flip(dim),
            Tensor::zeros(dim, 1, 2),
            ScalarMode::numeric(&Rational::new(3, 2).0),
        )
        .unwrap()
    }

    #[test]
    fn first_antisymmetrizer() {
        let spec = perm_spec(2);
        let b = spec.braiding();
        let t = AntisymTower::build(&b, TowerLimits::for_dim(2)).unwrap();
        let expected = Tensor::identity(2, 2).sub(&spec.sigma).unwrap();
        assert_eq!(t.tensor(2), expected);
        assert_eq!(t.height(), Some(2));
    }

    #[test]
    fn chain_is_a_cycle() {
        let spec = perm_spec(2);
        let c = braid_chain(&spec, ChainKind::Right, 1, 3).unwrap();
        let single = braid_chain(&spec, ChainKind::Right, 2, 3).unwrap();
        assert_eq!(single, spec.sigma.embed(&[2, 3], 3).unwrap());
        // σ_{1→3} = P12 P23 moves the content of leg 1 to leg 3
        assert_eq!(c, Tensor::permutation(2, &[2, 0, 1]));
        assert!(braid_chain(&spec, ChainKind::Left, 3, 3).is_err());
    }
}
