//! The module Γ^∧ = (χ-algebra) ⊗ (γ-wedges) and the action of the
//! generators χ, γ, Ω on it.
//!
//! A γ-wedge of degree `n` is a row of `A_{1→n}`; the basis at degree `n`
//! consists of the monomials whose rows are independent (taken in increasing
//! order), and every other monomial is expanded in that basis. A
//! [`ComplexElement`] is a combination of `(χ standard word) ⊗ (wedge basis
//! element)`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braid::{AlgebraSpec, AntisymTower};
use crate::linalg::{solve, PivotOrder, Rref, SparseMat, SparseVec};
use crate::nf::{chi_presentation, NfError, QuotientBasis};
use crate::scalar::Field;
use crate::tensor::unflatten;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error(transparent)]
    Nf(#[from] NfError),
    #[error("γ-degree {degree} is beyond the computed antisymmetrizers (top {top}); raise the tower limit")]
    GammaCap { degree: usize, top: usize },
    #[error("{0} is not invertible")]
    Singular(&'static str),
}

/// Wedge data at one degree.
#[derive(Debug, Clone)]
pub struct WedgeLevel<F> {
    /// Flat monomials forming the γ-wedge basis.
    pub basis: Vec<usize>,
    /// Coordinates of every flat monomial in that basis.
    coords: Vec<SparseVec<F>>,
    /// Pivot columns of `A_{1→n}`: the Ω-monomials kept in normal-ordered operators.
    pub dual_basis: Vec<usize>,
    /// Echelon rows `E` with `A_{1→n} = A_{1→n}[:, dual_basis] · E`.
    pub echelon: SparseMat<F>,
}

impl<F: Field> WedgeLevel<F> {
    fn unit() -> Self {
        WedgeLevel {
            basis: vec![0],
            coords: vec![vec![(0, F::one())]],
            dual_basis: vec![0],
            echelon: SparseMat::identity(1),
        }
    }

    fn from_antisymmetrizer(a: &SparseMat<F>) -> Self {
        let rows = Rref::new(&a.transpose(), PivotOrder::Forward);
        let coords = rows.matrix().transpose().rows().to_vec();
        let cols = Rref::new(a, PivotOrder::Forward);
        WedgeLevel {
            basis: rows.pivots().to_vec(),
            coords,
            dual_basis: cols.pivots().to_vec(),
            echelon: cols.matrix(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn coords(&self, flat: usize) -> &SparseVec<F> {
        &self.coords[flat]
    }

    /// `G[J, t]`: coordinates of every monomial, as a matrix.
    pub fn coord_matrix(&self) -> SparseMat<F> {
        SparseMat::from_rows(self.dim(), self.coords.clone())
    }
}

/// The wedge bases of all computed degrees.
#[derive(Debug, Clone)]
pub struct WedgeBasis<F> {
    dim: usize,
    levels: Vec<WedgeLevel<F>>,
    terminated: bool,
}

impl<F: Field> WedgeBasis<F> {
    pub fn new(tower: &AntisymTower<F>) -> Self {
        let mut levels = vec![WedgeLevel::unit()];
        for n in 1..=tower.computed() {
            levels.push(WedgeLevel::from_antisymmetrizer(tower.a(n)));
        }
        WedgeBasis { dim: tower.dim(), levels, terminated: tower.is_terminated() }
    }

    /// Degree `n` data; `None` when the wedge space is known to vanish.
    pub fn level(&self, n: usize) -> Result<Option<&WedgeLevel<F>>, ComplexError> {
        match self.levels.get(n) {
            Some(l) if l.dim() > 0 => Ok(Some(l)),
            Some(_) => Ok(None),
            None if self.terminated => Ok(None),
            None => Err(ComplexError::GammaCap { degree: n, top: self.levels.len() - 1 }),
        }
    }

    /// Dimensions of the wedge spaces for `n = 0..=top`.
    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(WedgeLevel::dim).take_while(|d| *d > 0).collect()
    }

    /// Canonical form of `Σ_J c_J γ_J` (coefficients on flat monomials of degree `n`).
    pub fn wedge(&self, n: usize, coeffs: &SparseVec<F>) -> Result<WedgeElement<F>, ComplexError> {
        let mut coords = Vec::new();
        if let Some(l) = self.level(n)? {
            for (j, c) in coeffs {
                coords = crate::linalg::axpy(&coords, c, &l.coords[*j]);
            }
        }
        Ok(WedgeElement { degree: n, coords })
    }

    pub fn monomial(&self, n: usize, t: usize) -> Vec<usize> {
        unflatten(self.levels[n].basis[t], self.dim, n)
    }
}

/// An element of the degree-`n` wedge space in basis coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WedgeElement<F> {
    pub degree: usize,
    pub coords: SparseVec<F>,
}

/// Key of a basis element of Γ^∧: (γ-degree, χ word id, wedge basis index).
pub type BasisKey = (usize, usize, usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexElement<F> {
    terms: BTreeMap<BasisKey, F>,
}

impl<F: Field> Default for ComplexElement<F> {
    fn default() -> Self {
        ComplexElement { terms: BTreeMap::new() }
    }
}

impl<F: Field> ComplexElement<F> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(key: BasisKey) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(key, F::one());
        ComplexElement { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisKey, &F)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, key: &BasisKey) -> F {
        self.terms.get(key).cloned().unwrap_or_else(F::zero)
    }

    pub fn add_term(&mut self, key: BasisKey, c: F) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(key).or_insert_with(F::zero);
        slot.add_assign(&c);
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Self, c: &F) {
        for (k, v) in &other.terms {
            self.add_term(*k, v.mul(c));
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &F::one().neg());
        out
    }

    /// γ-degrees present.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(|k| k.0).collect();
        d.dedup();
        d
    }

    /// The part of γ-degree `n`.
    pub fn component(&self, n: usize) -> Self {
        ComplexElement { terms: self.terms.iter().filter(|(k, _)| k.0 == n).map(|(k, v)| (*k, v.clone())).collect() }
    }
}

/// One normal-ordered monomial `Ω…Ω χ…χ γ…γ` with a coefficient; letters
/// are 0-based and listed as written, so the rightmost acts first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorTerm<F> {
    pub omega: Vec<usize>,
    pub chi: Vec<usize>,
    pub gamma: Vec<usize>,
    pub coeff: F,
}

impl<F> OperatorTerm<F> {
    pub fn grading(&self) -> i64 {
        self.gamma.len() as i64 - self.omega.len() as i64
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorElement<F> {
    pub terms: Vec<OperatorTerm<F>>,
}

impl<F: Field> OperatorElement<F> {
    /// Common γ-grading of all terms, if homogeneous.
    pub fn grading(&self) -> Option<i64> {
        let g = self.terms.first()?.grading();
        self.terms.iter().all(|t| t.grading() == g).then_some(g)
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|t| {
                let mono = [bracket("W", &t.omega), bracket("X", &t.chi), bracket("G", &t.gamma)]
                    .into_iter()
                    .filter(|s| !s.is_empty())
                    .collect::<Vec<_>>()
                    .join(" ");
                with_coeff(&t.coeff, &mono)
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn to_record(&self) -> Vec<OperatorTermRecord> {
        self.terms
            .iter()
            .map(|t| OperatorTermRecord {
                omega: one_based(&t.omega),
                chi: one_based(&t.chi),
                gamma: one_based(&t.gamma),
                coeff: t.coeff.to_literal(),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorTermRecord {
    pub omega: Vec<usize>,
    pub chi: Vec<usize>,
    pub gamma: Vec<usize>,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexTermRecord {
    pub gamma_degree: usize,
    pub chi: Vec<usize>,
    pub gamma: Vec<usize>,
    pub coeff: String,
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|x| x + 1).collect()
}

/// `P[a,b^2,c]` with 1-based letters and runs collapsed; empty for no letters.
pub fn bracket(prefix: &str, letters: &[usize]) -> String {
    if letters.is_empty() {
        return String::new();
    }
    let mut parts = Vec::new();
    let mut k = 0;
    while k < letters.len() {
        let mut e = k;
        while e < letters.len() && letters[e] == letters[k] {
            e += 1;
        }
        parts.push(if e - k > 1 { format!("{}^{}", letters[k] + 1, e - k) } else { format!("{}", letters[k] + 1) });
        k = e;
    }
    format!("{prefix}[{}]", parts.join(","))
}

fn with_coeff<F: Field>(c: &F, mono: &str) -> String {
    let mono = if mono.is_empty() { "1" } else { mono };
    if c.is_one() {
        mono.to_string()
    } else if c.neg().is_one() {
        format!("-{mono}")
    } else {
        format!("({}) {mono}", c.to_literal())
    }
}

type Table<F> = Vec<Vec<(usize, usize, F)>>;

/// Γ^∧ with its χ normal forms, wedge bases and the generator actions.
pub struct Complex<F> {
    dim: usize,
    chi: QuotientBasis<F>,
    chi_cap: usize,
    wedge: WedgeBasis<F>,
    /// `γ_j χ_m = σ^{ab}_{jm} χ_a γ_b + C^b_{jm} γ_b`, keyed by `j·d + m`.
    gamma_push: Table<F>,
    gamma_lower: Vec<Vec<(usize, F)>>,
    /// `Ω^p χ_m = T⁻¹[p,m,j,i] χ_j Ω^i − K[p,m,q] Ω^q`, keyed by `p·d + m`.
    omega_push: Table<F>,
    omega_lower: Vec<Vec<(usize, F)>>,
    /// `Ω^p γ_s = U⁻¹[p,s,j,i] (δ_ij − γ_j Ω^i)`, keyed by `p·d + s`.
    omega_gamma: Table<F>,
    gamma_memo: Mutex<HashMap<(usize, usize, usize, usize), ComplexElement<F>>>,
    omega_memo: Mutex<HashMap<(usize, usize, usize, usize), ComplexElement<F>>>,
    mono_memo: Mutex<HashMap<(usize, usize, usize), SparseVec<F>>>,
}

/// Inverse of a `d² × d²` matrix given entrywise as `m(row, col)`.
fn invert_pairs<F: Field>(d: usize, m: impl Fn(usize, usize) -> F, what: &'static str) -> Result<SparseMat<F>, ComplexError> {
    let a = SparseMat::from_fn(d * d, d * d, m);
    let id = SparseMat::identity(d * d);
    match solve(&a, &id, PivotOrder::Forward) {
        Ok(x) if a.mul(&x) == id => Ok(x),
        _ => Err(ComplexError::Singular(what)),
    }
}

impl<F: Field> Complex<F> {
    /// Build the module for χ-degrees up to `chi_cap` (normal forms are
    /// computed two degrees higher so that `d∘d` stays within the cap).
    pub fn new(spec: &AlgebraSpec<F>, tower: &AntisymTower<F>, chi_cap: usize) -> Result<Self, ComplexError> {
        let d = spec.dim;
        let chi = QuotientBasis::build(&chi_presentation(spec)?, chi_cap + 2)?;
        let sig = |a: usize, b: usize, c: usize, e: usize| spec.sigma.get(&[a, b], &[c, e]);
        let sigi = |a: usize, b: usize, c: usize, e: usize| spec.sigma_inv().get(&[a, b], &[c, e]);
        let cc = |k: usize, i: usize, j: usize| spec.c.get(&[k], &[i, j]);

        let mut gamma_push = vec![Vec::new(); d * d];
        let mut gamma_lower = vec![Vec::new(); d * d];
        for (j, m, a, b) in quad(d) {
            let s = sig(a, b, j, m);
            if !s.is_zero() {
                gamma_push[j * d + m].push((a, b, s));
            }
            if a == 0 {
                let c = cc(b, j, m);
                if !c.is_zero() {
                    gamma_lower[j * d + m].push((b, c));
                }
            }
        }

        // T[(j,i),(p,m)] = σ^{mi}_{pj}
        let ti = invert_pairs(d, |r, c| sig(c % d, r % d, c / d, r / d), "the χΩ exchange matrix")?;
        let mut omega_push = vec![Vec::new(); d * d];
        let mut omega_lower = vec![Vec::new(); d * d];
        for (p, m) in pairs(d) {
            let mut k = vec![F::zero(); d];
            for (ji, v) in ti.row(p * d + m) {
                let (j, i) = (ji / d, ji % d);
                omega_push[p * d + m].push((j, i, v.clone()));
                for (q, kq) in k.iter_mut().enumerate() {
                    kq.add_mul_assign(v, &cc(i, q, j));
                }
            }
            omega_lower[p * d + m] = k.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect();
        }

        // U[(j,i),(p,s)] = (σ⁻¹)^{si}_{pj}
        let ui = invert_pairs(d, |r, c| sigi(c % d, r % d, c / d, r / d), "the γΩ exchange matrix")?;
        let mut omega_gamma = vec![Vec::new(); d * d];
        for (p, s) in pairs(d) {
            for (ji, v) in ui.row(p * d + s) {
                omega_gamma[p * d + s].push((ji / d, ji % d, v.clone()));
            }
        }

        Ok(Complex {
            dim: d,
            chi,
            chi_cap,
            wedge: WedgeBasis::new(tower),
            gamma_push,
            gamma_lower,
            omega_push,
            omega_lower,
            omega_gamma,
            gamma_memo: Mutex::new(HashMap::new()),
            omega_memo: Mutex::new(HashMap::new()),
            mono_memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn chi(&self) -> &QuotientBasis<F> {
        &self.chi
    }

    pub fn chi_cap(&self) -> usize {
        self.chi_cap
    }

    pub fn wedge(&self) -> &WedgeBasis<F> {
        &self.wedge
    }

    pub fn unit(&self) -> ComplexElement<F> {
        ComplexElement::basis((0, 0, 0))
    }

    /// Basis elements with χ-degree ≤ `chi_cap` and γ-degree ≤ `gamma_cap`.
    pub fn basis(&self, chi_cap: usize, gamma_cap: usize) -> Result<Vec<BasisKey>, ComplexError> {
        let words: Vec<usize> = self
            .chi
            .standard_words()
            .iter()
            .filter(|w| w.len() <= chi_cap)
            .map(|w| self.chi.word_id(w))
            .collect::<Result<_, _>>()?;
        let mut out = Vec::new();
        for n in 0..=gamma_cap {
            let Some(level) = self.wedge.level(n)? else { break };
            for &w in &words {
                out.extend((0..level.dim()).map(|t| (n, w, t)));
            }
        }
        Ok(out)
    }

    /// Element `χ_w ⊗ γ_J` for an arbitrary χ word and flat γ-monomial.
    pub fn element(&self, chi: &[usize], gamma: &[usize]) -> Result<ComplexElement<F>, ComplexError> {
        let mut out = self.unit();
        for &g in gamma.iter().rev() {
            out = self.act_gamma(g, &out)?;
        }
        for &x in chi.iter().rev() {
            out = self.act_chi(x, &out)?;
        }
        Ok(out)
    }

    pub fn act_chi(&self, i: usize, phi: &ComplexElement<F>) -> Result<ComplexElement<F>, ComplexError> {
        let mut out = ComplexElement::zero();
        for (&(n, w, t), c) in phi.terms() {
            let mut word = vec![i];
            word.extend(self.chi.word_of(w));
            let id = self.chi.word_id(&word)?;
            for (k, v) in self.chi.reduce_word(id) {
                out.add_term((n, k, t), v.mul(c));
            }
        }
        Ok(out)
    }

    pub fn act_gamma(&self, j: usize, phi: &ComplexElement<F>) -> Result<ComplexElement<F>, ComplexError> {
        let mut out = ComplexElement::zero();
        for (&(n, w, t), c) in phi.terms() {
            out.add_scaled(&self.gamma_word(j, w, n, t)?, c);
        }
        Ok(out)
    }

    pub fn act_omega(&self, p: usize, phi: &ComplexElement<F>) -> Result<ComplexElement<F>, ComplexError> {
        let mut out = ComplexElement::zero();
        for (&(n, w, t), c) in phi.terms() {
            out.add_scaled(&self.omega_word(p, w, n, t)?, c);
        }
        Ok(out)
    }

    /// `γ_j · χ_w ⊗ e_t` for any (not necessarily standard) word id `w`.
    fn gamma_word(&self, j: usize, w: usize, n: usize, t: usize) -> Result<ComplexElement<F>, ComplexError> {
        let key = (j, w, n, t);
        if let Some(v) = self.gamma_memo.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let d = self.dim;
        let word = self.chi.word_of(w);
        let mut out = ComplexElement::zero();
        if word.is_empty() {
            if let Some(next) = self.wedge.level(n + 1)? {
                let flat = j * d.pow(n as u32) + self.wedge.levels[n].basis[t];
                for (s, v) in next.coords(flat) {
                    out.add_term((n + 1, 0, *s), v.clone());
                }
            }
        } else {
            let m = word[0];
            let rest = self.chi.word_id(&word[1..])?;
            for (a, b, s) in &self.gamma_push[j * d + m] {
                out.add_scaled(&self.act_chi(*a, &self.gamma_word(*b, rest, n, t)?)?, s);
            }
            for (b, c) in &self.gamma_lower[j * d + m] {
                out.add_scaled(&self.gamma_word(*b, rest, n, t)?, c);
            }
        }
        self.gamma_memo.lock().unwrap().insert(key, out.clone());
        Ok(out)
    }

    fn omega_word(&self, p: usize, w: usize, n: usize, t: usize) -> Result<ComplexElement<F>, ComplexError> {
        let key = (p, w, n, t);
        if let Some(v) = self.omega_memo.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let d = self.dim;
        let word = self.chi.word_of(w);
        let mut out = ComplexElement::zero();
        if word.is_empty() {
            if n > 0 {
                for (s, v) in self.omega_mono(p, n, self.wedge.levels[n].basis[t])? {
                    out.add_term((n - 1, 0, s), v);
                }
            }
        } else {
            let m = word[0];
            let rest = self.chi.word_id(&word[1..])?;
            for (j, i, v) in &self.omega_push[p * d + m] {
                out.add_scaled(&self.act_chi(*j, &self.omega_word(*i, rest, n, t)?)?, v);
            }
            for (q, k) in &self.omega_lower[p * d + m] {
                out.add_scaled(&self.omega_word(*q, rest, n, t)?, &k.neg());
            }
        }
        self.omega_memo.lock().unwrap().insert(key, out.clone());
        Ok(out)
    }

    /// `Ω^p` on the flat γ-monomial `flat` of degree `n ≥ 1`, as wedge
    /// coordinates of degree `n − 1`.
    fn omega_mono(&self, p: usize, n: usize, flat: usize) -> Result<SparseVec<F>, ComplexError> {
        let key = (p, n, flat);
        if let Some(v) = self.mono_memo.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let d = self.dim;
        let tail = d.pow(n as u32 - 1);
        let (s, rest) = (flat / tail, flat % tail);
        let mut res: SparseVec<F> = Vec::new();
        let below = &self.wedge.levels[n - 1];
        for (j, i, u) in &self.omega_gamma[p * d + s] {
            if n > 1 {
                let inner = self.omega_mono(*i, n - 1, rest)?;
                let lower = &self.wedge.levels[n - 2];
                let step = d.pow(n as u32 - 2);
                for (t, o) in inner {
                    let c = u.mul(&o).neg();
                    res = crate::linalg::axpy(&res, &c, below.coords(j * step + lower.basis[t]));
                }
            }
            if i == j {
                res = crate::linalg::axpy(&res, u, below.coords(rest));
            }
        }
        self.mono_memo.lock().unwrap().insert(key, res.clone());
        Ok(res)
    }

    /// Apply a normal-ordered operator; terms sharing a γ-block share its action.
    pub fn apply(&self, op: &OperatorElement<F>, phi: &ComplexElement<F>) -> Result<ComplexElement<F>, ComplexError> {
        let mut gamma_cache: HashMap<&[usize], ComplexElement<F>> = HashMap::new();
        let mut out = ComplexElement::zero();
        for term in &op.terms {
            let g = match gamma_cache.get(term.gamma.as_slice()) {
                Some(g) => g.clone(),
                None => {
                    let mut g = phi.clone();
                    for &k in term.gamma.iter().rev() {
                        g = self.act_gamma(k, &g)?;
                    }
                    gamma_cache.insert(&term.gamma, g.clone());
                    g
                }
            };
            if g.is_zero() {
                continue;
            }
            let mut v = g;
            for &x in term.chi.iter().rev() {
                v = self.act_chi(x, &v)?;
            }
            for &o in term.omega.iter().rev() {
                v = self.act_omega(o, &v)?;
            }
            out.add_scaled(&v, &term.coeff);
        }
        Ok(out)
    }

    /// `φ · ψ`: left multiplication of `ψ` by the algebra element `φ`.
    pub fn left_multiply(&self, phi: &ComplexElement<F>, psi: &ComplexElement<F>) -> Result<ComplexElement<F>, ComplexError> {
        let mut out = ComplexElement::zero();
        for (&(n, w, t), c) in phi.terms() {
            let mut v = psi.clone();
            for &k in self.wedge.monomial(n, t).iter().rev() {
                v = self.act_gamma(k, &v)?;
            }
            for &x in self.chi.word_of(w).iter().rev() {
                v = self.act_chi(x, &v)?;
            }
            out.add_scaled(&v, c);
        }
        Ok(out)
    }

    /// `dφ = [Q, φ]_± (1)` with `Q` odd: `Q(φ) − (−1)^{deg φ} φ·Q(1)`.
    pub fn differential(&self, q: &OperatorElement<F>, phi: &ComplexElement<F>) -> Result<ComplexElement<F>, ComplexError> {
        let mut out = self.apply(q, phi)?;
        let q1 = self.apply(q, &self.unit())?;
        if !q1.is_zero() {
            for n in phi.degrees() {
                let part = self.left_multiply(&phi.component(n), &q1)?;
                let sign = if n % 2 == 0 { F::one().neg() } else { F::one() };
                out.add_scaled(&part, &sign);
            }
        }
        Ok(out)
    }

    pub fn render(&self, phi: &ComplexElement<F>) -> String {
        if phi.is_zero() {
            return "0".into();
        }
        phi.terms()
            .map(|(&(n, w, t), c)| {
                let mono = [bracket("X", &self.chi.word_of(w)), bracket("G", &self.wedge.monomial(n, t))]
                    .into_iter()
                    .filter(|s| !s.is_empty())
                    .collect::<Vec<_>>()
                    .join(" ");
                with_coeff(c, &mono)
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn to_record(&self, phi: &ComplexElement<F>) -> Vec<ComplexTermRecord> {
        phi.terms()
            .map(|(&(n, w, t), c)| ComplexTermRecord {
                gamma_degree: n,
                chi: one_based(&self.chi.word_of(w)),
                gamma: one_based(&self.wedge.monomial(n, t)),
                coeff: c.to_literal(),
            })
            .collect()
    }
}

fn pairs(d: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..d).flat_map(move |a| (0..d).map(move |b| (a, b)))
}

fn quad(d: usize) -> impl Iterator<Item = (usize, usize, usize, usize)> {
    pairs(d).flat_map(move |(a, b)| pairs(d).map(move |(c, e)| (a, b, c, e)))
}
