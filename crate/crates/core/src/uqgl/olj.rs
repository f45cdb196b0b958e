//! The algebra generated by the matrices ω, L, J with the R̂-matrix
//! exchange relations, its normal form (ω-block, L-block, J-block, each
//! reduced in its own sector) and the closed-form BRST operator.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use serde::Serialize;

use super::{lambda, GlqData, UqError};
use crate::braid::Check;
use crate::linalg::{solve, PivotOrder, Rref, SparseMat};
use crate::nf::{Generator, NfError, Presentation, QuotientBasis, Relation, Word};
use crate::scalar::{Field, RatFunc, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sector {
    Omega,
    L,
    J,
}

const SECTORS: [Sector; 3] = [Sector::Omega, Sector::L, Sector::J];

impl Sector {
    fn index(self) -> usize {
        self as usize
    }

    fn letter(self) -> &'static str {
        match self {
            Sector::Omega => "w",
            Sector::L => "L",
            Sector::J => "J",
        }
    }
}

/// Normal-ordered monomial: ω word, L word, J word (global generator ids).
pub type Key = (Word, Word, Word);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OljElement<F> {
    terms: BTreeMap<Key, F>,
}

impl<F: Field> Default for OljElement<F> {
    fn default() -> Self {
        OljElement { terms: BTreeMap::new() }
    }
}

impl<F: Field> OljElement<F> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit() -> Self {
        Self::monomial((vec![], vec![], vec![]), F::one())
    }

    pub fn monomial(key: Key, c: F) -> Self {
        let mut e = Self::zero();
        e.add_term(key, c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Key, &F)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, key: Key, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(v) => {
                v.add_assign(&c);
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &F) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v.mul(c));
        }
    }

    pub fn scaled(&self, c: &F) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &F::one().neg());
        out
    }
}

/// Matrix of free-algebra polynomials (words up to length 2).
type PolyMat<F> = Vec<Vec<BTreeMap<Word, F>>>;

/// One exchange step `hi·lo = Σ c·w` with `w` of type (lo, hi), or shorter.
type Rules<F> = HashMap<(usize, usize), Vec<(F, Word)>>;

/// The ω/L/J algebra for U_q(gl(N)) with its normal-form machinery.
pub struct Olj<F> {
    n: usize,
    q: F,
    d_inv: Vec<Vec<F>>,
    relations: Vec<Relation<F>>,
    rules: Rules<F>,
    sectors: Vec<QuotientBasis<F>>,
    left_memo: Mutex<HashMap<(Word, usize), Vec<(Option<usize>, Word, F)>>>,
    rmul_memo: Mutex<HashMap<(Key, usize), OljElement<F>>>,
}

fn poly_mul<F: Field>(a: &BTreeMap<Word, F>, b: &BTreeMap<Word, F>) -> BTreeMap<Word, F> {
    let mut out: BTreeMap<Word, F> = BTreeMap::new();
    for (wa, ca) in a {
        for (wb, cb) in b {
            let w: Word = wa.iter().chain(wb).copied().collect();
            out.entry(w).or_insert_with(F::zero).add_mul_assign(ca, cb);
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn poly_axpy<F: Field>(a: &mut BTreeMap<Word, F>, c: &F, b: &BTreeMap<Word, F>) {
    for (w, v) in b {
        a.entry(w.clone()).or_insert_with(F::zero).add_mul_assign(c, v);
    }
    a.retain(|_, v| !v.is_zero());
}

fn mat_mul<F: Field>(a: &PolyMat<F>, b: &PolyMat<F>) -> PolyMat<F> {
    let m = a.len();
    let mut out = vec![vec![BTreeMap::new(); m]; m];
    for i in 0..m {
        for k in 0..m {
            if a[i][k].is_empty() {
                continue;
            }
            for j in 0..m {
                if !b[k][j].is_empty() {
                    let p = poly_mul(&a[i][k], &b[k][j]);
                    poly_axpy(&mut out[i][j], &F::one(), &p);
                }
            }
        }
    }
    out
}

fn mat_prod<F: Field>(ms: &[&PolyMat<F>]) -> PolyMat<F> {
    ms[1..].iter().fold(ms[0].clone(), |acc, m| mat_mul(&acc, m))
}

fn mat_axpy<F: Field>(a: &PolyMat<F>, c: &F, b: &PolyMat<F>) -> PolyMat<F> {
    let mut out = a.clone();
    for (ro, rb) in out.iter_mut().zip(b) {
        for (o, e) in ro.iter_mut().zip(rb) {
            poly_axpy(o, c, e);
        }
    }
    out
}

fn numeric<F: Field>(m: &SparseMat<F>) -> PolyMat<F> {
    let k = m.nrows();
    let mut out = vec![vec![BTreeMap::new(); k]; k];
    for (r, c, v) in m.entries() {
        out[r][c].insert(Vec::new(), v.clone());
    }
    out
}

impl<F: Field> Olj<F> {
    fn gen(&self, s: Sector, i: usize, j: usize) -> usize {
        s.index() * self.n * self.n + i * self.n + j
    }

    pub fn sector_of(&self, g: usize) -> Sector {
        SECTORS[g / (self.n * self.n)]
    }

    /// The generator matrix of sector `s` placed in the second tensor factor.
    fn in_second(&self, s: Sector) -> PolyMat<F> {
        let n = self.n;
        let mut out = vec![vec![BTreeMap::new(); n * n]; n * n];
        for (a1, a2, b2) in (0..n).flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c)))) {
            out[a1 * n + a2][a1 * n + b2].insert(vec![self.gen(s, a2, b2)], F::one());
        }
        out
    }

    /// Build the relations, exchange rules and sector normal forms.
    /// `caps` are the word-length caps of the ω, L and J sectors.
    pub fn build(data: &GlqData<F>, caps: [usize; 3]) -> Result<Self, UqError> {
        let n = data.n;
        let q = data.q.clone();
        let d_inv_t = data.d.inverse().map_err(|_| UqError::Singular("D"))?;
        let d_inv = (0..n).map(|i| (0..n).map(|j| d_inv_t.get(&[i], &[j])).collect()).collect();
        let mut olj = Olj {
            n,
            q,
            d_inv,
            relations: Vec::new(),
            rules: HashMap::new(),
            sectors: Vec::new(),
            left_memo: Mutex::new(HashMap::new()),
            rmul_memo: Mutex::new(HashMap::new()),
        };
        let rh = numeric(data.r_hat.matrix());
        let rhi = numeric(data.r_hat.inverse().map_err(|_| UqError::Singular("R̂"))?.matrix());
        let (w2, l2, j2) = (olj.in_second(Sector::Omega), olj.in_second(Sector::L), olj.in_second(Sector::J));
        let one = F::one();
        let m1 = one.neg();
        let mats = [
            mat_axpy(&mat_prod(&[&w2, &rhi, &w2, &rh]), &one, &mat_prod(&[&rhi, &w2, &rhi, &w2])),
            mat_axpy(&mat_prod(&[&w2, &rh, &l2, &rh]), &m1, &mat_prod(&[&rh, &l2, &rh, &w2])),
            mat_axpy(
                &mat_axpy(&mat_prod(&[&w2, &rh, &j2, &rh]), &one, &mat_prod(&[&rh, &j2, &rh, &w2])),
                &one,
                &rh,
            ),
            mat_axpy(&mat_prod(&[&l2, &rh, &l2, &rh]), &m1, &mat_prod(&[&rh, &l2, &rh, &l2])),
            mat_axpy(&mat_prod(&[&j2, &rh, &l2, &rh]), &m1, &mat_prod(&[&rh, &l2, &rh, &j2])),
            mat_axpy(&mat_prod(&[&j2, &rh, &j2, &rh]), &one, &mat_prod(&[&rhi, &j2, &rh, &j2])),
        ];
        for m in &mats {
            for row in m {
                for p in row {
                    if !p.is_empty() {
                        olj.relations.push(Relation { terms: p.iter().map(|(w, c)| (c.clone(), w.clone())).collect() });
                    }
                }
            }
        }
        for (hi, lo) in [(Sector::L, Sector::Omega), (Sector::J, Sector::Omega), (Sector::J, Sector::L)] {
            let rules = olj.exchange(hi, lo)?;
            olj.rules.extend(rules);
        }
        for s in SECTORS {
            let basis = olj.sector_basis(s, caps[s.index()]).map_err(|e| UqError::Olj(e.to_string()))?;
            olj.sectors.push(basis);
        }
        Ok(olj)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn relations(&self) -> &[Relation<F>] {
        &self.relations
    }

    /// Relations whose quadratic words all have sector pairs in `types`.
    fn relations_of(&self, types: &[(Sector, Sector)]) -> Vec<&Relation<F>> {
        self.relations
            .iter()
            .filter(|r| {
                let quad: Vec<(Sector, Sector)> = r
                    .terms
                    .iter()
                    .filter(|(_, w)| w.len() == 2)
                    .map(|(_, w)| (self.sector_of(w[0]), self.sector_of(w[1])))
                    .collect();
                !quad.is_empty() && quad.iter().all(|t| types.contains(t))
            })
            .collect()
    }

    fn exchange(&self, hi: Sector, lo: Sector) -> Result<Rules<F>, UqError> {
        let n2 = self.n * self.n;
        let rels = self.relations_of(&[(hi, lo), (lo, hi)]);
        let wrong: Vec<Word> = (0..n2)
            .flat_map(|a| (0..n2).map(move |b| (a, b)))
            .map(|(a, b)| vec![hi.index() * n2 + a, lo.index() * n2 + b])
            .collect();
        let wrong_idx: HashMap<&Word, usize> = wrong.iter().enumerate().map(|(k, w)| (w, k)).collect();
        let mut others: Vec<Word> =
            rels.iter().flat_map(|r| r.terms.iter().map(|(_, w)| w.clone())).filter(|w| !wrong_idx.contains_key(w)).collect();
        others.sort();
        others.dedup();
        let other_idx: HashMap<&Word, usize> = others.iter().enumerate().map(|(k, w)| (w, k)).collect();
        let mut aw = Vec::new();
        let mut ao = Vec::new();
        for r in &rels {
            let mut rw = Vec::new();
            let mut ro = Vec::new();
            for (c, w) in &r.terms {
                match wrong_idx.get(w) {
                    Some(&k) => rw.push((k, c.clone())),
                    None => ro.push((other_idx[w], c.neg())),
                }
            }
            aw.push(rw);
            ao.push(ro);
        }
        let aw = SparseMat::from_rows(wrong.len(), aw);
        let ao = SparseMat::from_rows(others.len(), ao);
        if Rref::new(&aw, PivotOrder::Forward).rank() != wrong.len() {
            return Err(UqError::Olj(format!("{hi:?}·{lo:?} products are not determined by the relations")));
        }
        let sol = solve(&aw, &ao, PivotOrder::Forward)
            .map_err(|_| UqError::Olj(format!("{hi:?}·{lo:?} exchange relations are inconsistent")))?;
        let mut rules = HashMap::new();
        for (k, w) in wrong.iter().enumerate() {
            let rhs = sol.row(k).iter().map(|(c, v)| (v.clone(), others[*c].clone())).collect();
            rules.insert((w[0], w[1]), rhs);
        }
        Ok(rules)
    }

    fn sector_basis(&self, s: Sector, cap: usize) -> Result<QuotientBasis<F>, NfError> {
        let n2 = self.n * self.n;
        let shift = s.index() * n2;
        let gens = (0..n2)
            .map(|k| Generator { name: format!("{}{}{}", s.letter(), k / self.n + 1, k % self.n + 1), degree: 1 })
            .collect();
        let rels = self
            .relations_of(&[(s, s)])
            .into_iter()
            .map(|r| Relation { terms: r.terms.iter().map(|(c, w)| (c.clone(), w.iter().map(|g| g - shift).collect())).collect() })
            .collect();
        QuotientBasis::build(&Presentation::new(gens, rels)?, cap)
    }

    pub fn sector(&self, s: Sector) -> &QuotientBasis<F> {
        &self.sectors[s.index()]
    }

    /// Dimensions of the sector quotient by word length.
    pub fn sector_dims(&self, s: Sector) -> Vec<usize> {
        self.sector(s).dims_by_length()
    }

    /// Normal form of a word inside one sector (global ids in and out).
    fn reduce_in(&self, s: Sector, w: &[usize]) -> Result<Vec<(Word, F)>, UqError> {
        let n2 = self.n * self.n;
        let shift = s.index() * n2;
        let basis = self.sector(s);
        let local: Word = w.iter().map(|g| g - shift).collect();
        let id = basis.word_id(&local).map_err(|e| UqError::Olj(format!("{s:?} sector: {e}")))?;
        Ok(basis
            .reduce_word(id)
            .into_iter()
            .map(|(k, c)| (basis.word_of(k).into_iter().map(|g| g + shift).collect(), c))
            .collect())
    }

    /// `word · g` for a word of a higher sector and a generator `g` of a
    /// lower one, as terms `(moved letter or none) · word'`.
    fn move_left(&self, word: &[usize], g: usize) -> Result<Vec<(Option<usize>, Word, F)>, UqError> {
        if word.is_empty() {
            return Ok(vec![(Some(g), Vec::new(), F::one())]);
        }
        let key = (word.to_vec(), g);
        if let Some(v) = self.left_memo.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let (pre, last) = (&word[..word.len() - 1], word[word.len() - 1]);
        let mut acc: BTreeMap<(Option<usize>, Word), F> = BTreeMap::new();
        let mut push = |k: (Option<usize>, Word), c: F| {
            acc.entry(k).or_insert_with(F::zero).add_assign(&c);
        };
        for (c, w2) in &self.rules[&(last, g)] {
            match w2.len() {
                2 => {
                    for (pf, mut wd, c2) in self.move_left(pre, w2[0])? {
                        wd.push(w2[1]);
                        push((pf, wd), c.mul(&c2));
                    }
                }
                1 if self.sector_of(w2[0]) == self.sector_of(g) => {
                    for (pf, wd, c2) in self.move_left(pre, w2[0])? {
                        push((pf, wd), c.mul(&c2));
                    }
                }
                1 => {
                    let mut wd = pre.to_vec();
                    wd.push(w2[0]);
                    push((None, wd), c.clone());
                }
                _ => push((None, pre.to_vec()), c.clone()),
            }
        }
        let out: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|((pf, w), c)| (pf, w, c)).collect();
        self.left_memo.lock().unwrap().insert(key, out.clone());
        Ok(out)
    }

    fn reduce_or_unit(&self, s: Sector, w: &[usize]) -> Result<Vec<(Word, F)>, UqError> {
        if w.is_empty() {
            Ok(vec![(Vec::new(), F::one())])
        } else {
            self.reduce_in(s, w)
        }
    }

    /// `key · g` in normal form.
    fn rmul_gen(&self, key: &Key, g: usize) -> Result<OljElement<F>, UqError> {
        let memo_key = (key.clone(), g);
        if let Some(v) = self.rmul_memo.lock().unwrap().get(&memo_key) {
            return Ok(v.clone());
        }
        let (wv, lv, jv) = key;
        let mut out = OljElement::zero();
        if self.sector_of(g) == Sector::J {
            let mut w = jv.clone();
            w.push(g);
            for (jj, c) in self.reduce_in(Sector::J, &w)? {
                out.add_term((wv.clone(), lv.clone(), jj), c);
            }
        } else {
            for (pf, jw, c) in self.move_left(jv, g)? {
                let jred = self.reduce_or_unit(Sector::J, &jw)?;
                let Some(h) = pf else {
                    for (jj, c3) in &jred {
                        out.add_term((wv.clone(), lv.clone(), jj.clone()), c.mul(c3));
                    }
                    continue;
                };
                if self.sector_of(h) == Sector::L {
                    let mut lw = lv.clone();
                    lw.push(h);
                    for (ll, c2) in self.reduce_in(Sector::L, &lw)? {
                        for (jj, c3) in &jred {
                            out.add_term((wv.clone(), ll.clone(), jj.clone()), c.mul(&c2).mul(c3));
                        }
                    }
                    continue;
                }
                for (pf2, lw, c2) in self.move_left(lv, h)? {
                    let lred = self.reduce_or_unit(Sector::L, &lw)?;
                    let wred = match pf2 {
                        None => vec![(wv.clone(), F::one())],
                        Some(h2) => {
                            let mut ww = wv.clone();
                            ww.push(h2);
                            self.reduce_in(Sector::Omega, &ww)?
                        }
                    };
                    let cc = c.mul(&c2);
                    for (ww, c5) in &wred {
                        for (ll, c4) in &lred {
                            for (jj, c3) in &jred {
                                out.add_term((ww.clone(), ll.clone(), jj.clone()), cc.mul(c5).mul(c4).mul(c3));
                            }
                        }
                    }
                }
            }
        }
        self.rmul_memo.lock().unwrap().insert(memo_key, out.clone());
        Ok(out)
    }

    /// Product in normal form.
    pub fn mul(&self, a: &OljElement<F>, b: &OljElement<F>) -> Result<OljElement<F>, UqError> {
        // a times each right monomial, sharing work across common prefixes
        let mut prefix_cache: HashMap<Word, OljElement<F>> = HashMap::new();
        let mut out = OljElement::zero();
        for (kb, cb) in &b.terms {
            let letters: Word = kb.0.iter().chain(&kb.1).chain(&kb.2).copied().collect();
            let mut start = 0;
            for l in (0..=letters.len()).rev() {
                if l == 0 || prefix_cache.contains_key(&letters[..l]) {
                    start = l;
                    break;
                }
            }
            let mut cur = if start == 0 { a.clone() } else { prefix_cache[&letters[..start]].clone() };
            for l in start..letters.len() {
                let mut next = OljElement::zero();
                for (k, c) in &cur.terms {
                    next.add_scaled(&self.rmul_gen(k, letters[l])?, c);
                }
                cur = next;
                prefix_cache.insert(letters[..=l].to_vec(), cur.clone());
            }
            out.add_scaled(&cur, cb);
        }
        Ok(out)
    }

    pub fn generator(&self, s: Sector, i: usize, j: usize) -> OljElement<F> {
        let g = self.gen(s, i, j);
        let mut key: Key = (vec![], vec![], vec![]);
        match s {
            Sector::Omega => key.0.push(g),
            Sector::L => key.1.push(g),
            Sector::J => key.2.push(g),
        }
        OljElement::monomial(key, F::one())
    }

    fn matrix(&self, s: Sector) -> Vec<Vec<OljElement<F>>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.generator(s, i, j)).collect()).collect()
    }

    fn mat_mul(&self, a: &[Vec<OljElement<F>>], b: &[Vec<OljElement<F>>]) -> Result<Vec<Vec<OljElement<F>>>, UqError> {
        let n = self.n;
        let mut out = vec![vec![OljElement::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let p = self.mul(&a[i][k], &b[k][j])?;
                    out[i][j].add_scaled(&p, &F::one());
                }
            }
        }
        Ok(out)
    }

    /// `Tr(D⁻¹ M)`.
    fn trace_q(&self, m: &[Vec<OljElement<F>>]) -> OljElement<F> {
        let mut out = OljElement::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                out.add_scaled(&m[j][i], &self.d_inv[i][j]);
            }
        }
        out
    }

    /// `(1 + λ ω J)⁻¹`, solved inside the span of normal-ordered ω–J monomials.
    fn inverse_one_plus_omega_j(&self) -> Result<Vec<Vec<OljElement<F>>>, UqError> {
        let n = self.n;
        let lam = lambda(&self.q);
        let wj = self.mat_mul(&self.matrix(Sector::Omega), &self.matrix(Sector::J))?;
        let shift = |s: Sector| s.index() * n * n;
        let lift = |s: Sector, w: Word| -> Word { w.into_iter().map(|g| g + shift(s)).collect() };
        let ws: Vec<Word> = self.sector(Sector::Omega).standard_words().into_iter().map(|w| lift(Sector::Omega, w)).collect();
        let js: Vec<Word> = self.sector(Sector::J).standard_words().into_iter().map(|w| lift(Sector::J, w)).collect();
        let basis: Vec<Key> = ws.iter().flat_map(|a| js.iter().map(move |b| (a.clone(), vec![], b.clone()))).collect();
        let index: HashMap<&Key, usize> = basis.iter().enumerate().map(|(k, b)| (b, k)).collect();
        let nb = basis.len();
        let var = |k: usize, j: usize, b: usize| (k * n + j) * nb + b;
        let mut rows = vec![Vec::new(); n * n * nb];
        for i in 0..n {
            for k in 0..n {
                let mut m = wj[i][k].scaled(&lam);
                if i == k {
                    m.add_term((vec![], vec![], vec![]), F::one());
                }
                for (b, key) in basis.iter().enumerate() {
                    let prod = self.mul(&m, &OljElement::monomial(key.clone(), F::one()))?;
                    for (key2, c) in prod.terms() {
                        let Some(&b2) = index.get(key2) else {
                            return Err(UqError::Olj("ω–J sector is not closed under multiplication".into()));
                        };
                        for j in 0..n {
                            rows[(i * n + j) * nb + b2].push((var(k, j, b), c.clone()));
                        }
                    }
                }
            }
        }
        let a = SparseMat::from_rows(n * n * nb, rows);
        let unit = index[&(vec![], vec![], vec![])];
        let rhs = SparseMat::from_rows(1, (0..n * n * nb).map(|r| if r % nb == unit && (r / nb) / n == (r / nb) % n { vec![(0, F::one())] } else { vec![] }).collect());
        if Rref::new(&a, PivotOrder::Forward).rank() != n * n * nb {
            return Err(UqError::Olj("1 + λωJ is not invertible in the truncated ω–J sector".into()));
        }
        let sol = solve(&a, &rhs, PivotOrder::Forward).map_err(|_| UqError::Olj("1 + λωJ has no inverse".into()))?;
        let mut y = vec![vec![OljElement::zero(); n]; n];
        for (k, row) in y.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                for (b, key) in basis.iter().enumerate() {
                    e.add_term(key.clone(), sol.get(var(k, j, b), 0));
                }
            }
        }
        Ok(y)
    }

    pub fn render(&self, e: &OljElement<F>) -> String {
        if e.is_zero() {
            return "0".into();
        }
        let name = |g: &usize| {
            let s = self.sector_of(*g);
            let k = g % (self.n * self.n);
            format!("{}{}{}", s.letter(), k / self.n + 1, k % self.n + 1)
        };
        e.terms()
            .map(|(k, c)| {
                let mono: Vec<String> = k.0.iter().chain(&k.1).chain(&k.2).map(name).collect();
                let mono = if mono.is_empty() { "1".to_string() } else { mono.join(" ") };
                format!("({}) {}", c.to_literal(), mono)
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// How `(1 + λωJ)⁻¹` enters the closed-form operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Inverse {
    /// Exact inverse in the normal-ordered ω–J sector.
    Exact,
    /// Geometric series `Σ_{k ≤ K} (−λωJ)^k`.
    Series(usize),
}

/// `Q = −Tr_q(ω)/λ + Tr_q(ω L (1 + λωJ)⁻¹)/λ`.
pub fn closed_form_q<F: Field>(olj: &Olj<F>, inverse: Inverse) -> Result<OljElement<F>, UqError> {
    let lam = lambda(&olj.q);
    let lam_inv = lam.inv().map_err(|_| UqError::Singular("λ"))?;
    let w = olj.matrix(Sector::Omega);
    let wl = olj.mat_mul(&w, &olj.matrix(Sector::L))?;
    let mut q = olj.trace_q(&w).scaled(&lam_inv.neg());
    match inverse {
        Inverse::Exact => {
            let y = olj.inverse_one_plus_omega_j()?;
            q.add_scaled(&olj.trace_q(&olj.mat_mul(&wl, &y)?), &lam_inv);
        }
        Inverse::Series(kmax) => {
            let wj = olj.mat_mul(&w, &olj.matrix(Sector::J))?;
            let mut term = wl;
            let mut coeff = lam_inv;
            for _ in 0..=kmax {
                let t = olj.trace_q(&term);
                if t.is_zero() {
                    break;
                }
                q.add_scaled(&t, &coeff);
                term = olj.mat_mul(&term, &wj)?;
                coeff = coeff.mul(&lam).neg();
            }
        }
    }
    Ok(q)
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub q_terms: usize,
    pub checks: Vec<Check>,
}

impl IdentityReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

/// `Q² = 0`, `[Q, L^i_j] = 0` and `[Q, J^i_j]₊ = (δ^i_j − L^i_j)/λ`.
pub fn verify_identities<F: Field>(olj: &Olj<F>, q: &OljElement<F>) -> Result<IdentityReport, UqError> {
    let n = olj.n;
    let lam_inv = lambda(&olj.q).inv().map_err(|_| UqError::Singular("λ"))?;
    let with_residue = |name: &str, witness: Option<Vec<usize>>, residue: Option<String>| {
        let mut c = Check::from_witness(name, witness);
        c.note = residue;
        c
    };
    let q2 = olj.mul(q, q)?;
    let mut checks = vec![with_residue(
        "q_squared",
        (!q2.is_zero()).then(Vec::new),
        (!q2.is_zero()).then(|| olj.render(&q2)),
    )];
    let mut l_fail = None;
    let mut j_fail = None;
    for i in 0..n {
        for j in 0..n {
            let l = olj.generator(Sector::L, i, j);
            let comm = olj.mul(q, &l)?.sub(&olj.mul(&l, q)?);
            if !comm.is_zero() && l_fail.is_none() {
                l_fail = Some((vec![i, j], olj.render(&comm)));
            }
            let jg = olj.generator(Sector::J, i, j);
            let mut anti = olj.mul(q, &jg)?;
            anti.add_scaled(&olj.mul(&jg, q)?, &F::one());
            let mut target = l.scaled(&lam_inv.neg());
            if i == j {
                target.add_term((vec![], vec![], vec![]), lam_inv.clone());
            }
            let diff = anti.sub(&target);
            if !diff.is_zero() && j_fail.is_none() {
                j_fail = Some((vec![i, j], olj.render(&diff)));
            }
        }
    }
    let (w, r) = l_fail.map_or((None, None), |(w, r)| (Some(w), Some(r)));
    checks.push(with_residue("q_commutes_with_l", w, r));
    let (w, r) = j_fail.map_or((None, None), |(w, r)| (Some(w), Some(r)));
    checks.push(with_residue("q_anticommutator_j", w, r));
    Ok(IdentityReport { q_terms: q.len(), checks })
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassicalLimitReport {
    /// Constant `c` with `lim Q = c · Q_cl`, when one exists.
    pub normalization: Option<String>,
    /// Monomials whose coefficient diverges at `q = 1`.
    pub divergent: Vec<String>,
    /// Monomials where the limit and `c · Q_cl` differ.
    pub mismatches: Vec<String>,
    /// Every monomial of either side with its λ⁰ coefficient and its `Q_cl` coefficient.
    pub table: Vec<LimitRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LimitRow {
    /// w, x and J letters; x^i_j stands for `(L^i_j − δ^i_j)/λ`.
    pub monomial: String,
    pub limit: String,
    pub classical: String,
}

impl ClassicalLimitReport {
    pub fn passed(&self) -> bool {
        self.normalization.is_some() && self.divergent.is_empty() && self.mismatches.is_empty()
    }
}

/// Classical key: ω word, χ word (labelled by L generators), J word.
type ClassicalKey = (Word, Word, Word);

/// Substitute `L = 1 + λχ` into a symbolic `Q`, take `q → 1`, and compare
/// with `Tr(ωχ) + Tr(ω²γ)` where `γ = −J`. Words are compared after
/// reduction in the sectors of `olj_at_one` (the same algebra at `q = 1`).
pub fn classical_limit(q_symbolic: &OljElement<RatFunc>, olj_at_one: &Olj<Rational>) -> Result<ClassicalLimitReport, UqError> {
    let n = olj_at_one.n;
    let lam = lambda(&RatFunc::q());
    let mut expanded: BTreeMap<ClassicalKey, RatFunc> = BTreeMap::new();
    for ((w, l, j), c) in q_symbolic.terms() {
        // each L letter becomes δ (dropped, diagonal only) or λχ
        for mask in 0u32..(1 << l.len()) {
            let chosen = |k: usize| mask & (1 << k) != 0;
            if l.iter().enumerate().any(|(k, g)| !chosen(k) && (g % (n * n)) / n != g % n) {
                continue;
            }
            let chi: Word = l.iter().enumerate().filter(|(k, _)| chosen(*k)).map(|(_, g)| *g).collect();
            let coeff = c.mul(&lam.pow_i(chi.len() as i64).expect("λ power"));
            expanded.entry((w.clone(), chi, j.clone())).or_insert_with(RatFunc::zero).add_assign(&coeff);
        }
    }
    let mut limit: BTreeMap<ClassicalKey, Rational> = BTreeMap::new();
    let mut divergent = Vec::new();
    for (key, c) in expanded {
        if c.is_zero() {
            continue;
        }
        let (val, coeffs) = c.laurent_at_one(1).map_err(|e| UqError::Olj(e.to_string()))?;
        if val < 0 {
            divergent.push(format!("{key:?}"));
            continue;
        }
        if val == 0 {
            let v = Rational(coeffs[0].clone());
            add_reduced(olj_at_one, &mut limit, &key, &v)?;
        }
    }
    let mut classical: BTreeMap<ClassicalKey, Rational> = BTreeMap::new();
    let one = Rational::one();
    for i in 0..n {
        for j in 0..n {
            let w = olj_at_one.gen(Sector::Omega, i, j);
            add_reduced(olj_at_one, &mut classical, &(vec![w], vec![olj_at_one.gen(Sector::L, j, i)], vec![]), &one)?;
            for k in 0..n {
                let key = (vec![w, olj_at_one.gen(Sector::Omega, j, k)], vec![], vec![olj_at_one.gen(Sector::J, k, i)]);
                add_reduced(olj_at_one, &mut classical, &key, &one.neg())?;
            }
        }
    }
    limit.retain(|_, v| !v.is_zero());
    classical.retain(|_, v| !v.is_zero());
    let normalization = classical.iter().next().and_then(|(k, v)| limit.get(k).map(|l| l.div(v).expect("nonzero")));
    let name = |g: &usize| {
        let s = olj_at_one.sector_of(*g);
        let k = g % (n * n);
        let letter = if s == Sector::L { "x".to_string() } else { s.letter().to_string() };
        format!("{letter}{}{}", k / n + 1, k % n + 1)
    };
    let all_keys: std::collections::BTreeSet<&ClassicalKey> = limit.keys().chain(classical.keys()).collect();
    let table = all_keys
        .iter()
        .map(|k| LimitRow {
            monomial: k.0.iter().chain(&k.1).chain(&k.2).map(name).collect::<Vec<_>>().join(" "),
            limit: limit.get(*k).map_or("0".into(), Rational::to_literal),
            classical: classical.get(*k).map_or("0".into(), Rational::to_literal),
        })
        .collect();
    let mut mismatches = Vec::new();
    if let Some(c) = &normalization {
        let keys: std::collections::BTreeSet<&ClassicalKey> = limit.keys().chain(classical.keys()).collect();
        for k in keys {
            let a = limit.get(k).cloned().unwrap_or_else(Rational::zero);
            let b = classical.get(k).cloned().unwrap_or_else(Rational::zero).mul(c);
            if a != b {
                mismatches.push(format!("{k:?}: {} vs {}", a.to_literal(), b.to_literal()));
            }
        }
    }
    Ok(ClassicalLimitReport { normalization: normalization.map(|c| c.to_literal()), divergent, mismatches, table })
}

fn add_reduced(
    olj: &Olj<Rational>,
    acc: &mut BTreeMap<ClassicalKey, Rational>,
    key: &ClassicalKey,
    c: &Rational,
) -> Result<(), UqError> {
    let ws = olj.reduce_or_unit(Sector::Omega, &key.0)?;
    let js = olj.reduce_or_unit(Sector::J, &key.2)?;
    for (w, a) in &ws {
        for (j, b) in &js {
            acc.entry((w.clone(), key.1.clone(), j.clone())).or_insert_with(Rational::zero).add_assign(&c.mul(a).mul(b));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ScalarMode;

    fn gl2() -> Olj<Rational> {
        let data = GlqData::<Rational>::build(2, ScalarMode::numeric(&Rational::new(3, 2).0)).unwrap();
        Olj::build(&data, [5, 4, 5]).unwrap()
    }

    #[test]
    fn sector_dimensions() {
        let olj = gl2();
        assert_eq!(olj.sector_dims(Sector::Omega), vec![1, 4, 6, 4, 1, 0]);
        assert_eq!(olj.sector_dims(Sector::J), vec![1, 4, 6, 4, 1, 0]);
        // six independent reflection-equation relations among the 16 quadratic words
        assert_eq!(olj.sector_dims(Sector::L)[..3], [1, 4, 10]);
    }

    #[test]
    fn closed_form_identities() {
        let olj = gl2();
        let q = closed_form_q(&olj, Inverse::Exact).unwrap();
        let report = verify_identities(&olj, &q).unwrap();
        assert!(report.all_pass(), "{report:?}");
    }

    #[test]
    fn truncated_series_is_not_nilpotent() {
        let olj = gl2();
        let q = closed_form_q(&olj, Inverse::Series(3)).unwrap();
        let report = verify_identities(&olj, &q).unwrap();
        assert!(!report.checks[0].passed());
    }

    #[test]
    fn classical_limit_matches() {
        let data = GlqData::<RatFunc>::build(2, ScalarMode::Symbolic).unwrap();
        let olj = Olj::build(&data, [5, 4, 5]).unwrap();
        let q = closed_form_q(&olj, Inverse::Exact).unwrap();
        let one = GlqData::<Rational>::build(2, ScalarMode::numeric(&Rational::new(1, 1).0)).unwrap();
        let report = classical_limit(&q, &Olj::build(&one, [5, 4, 5]).unwrap()).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.normalization.as_deref(), Some("1"));
    }
}
