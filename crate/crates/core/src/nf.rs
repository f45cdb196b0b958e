//! Normal forms in filtered quadratic algebras by truncated linear reduction.
//!
//! A [`Presentation`] lists generators and relations of the shape
//! "quadratic part = lower-order part". For a word-length cap, the ideal is
//! spanned inside the space of words of length ≤ cap by all products
//! `u·r·v`; Gaussian elimination with the largest word (graded lexicographic
//! in the declared generator order) as pivot leaves the non-pivot words as a
//! canonical basis of the truncated quotient.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braid::AlgebraSpec;
use crate::linalg::{PivotOrder, Rref, SparseVec};
use crate::scalar::{parse_literal, Field, LiteralError};

pub type Word = Vec<usize>;

/// Default bound on the raw word count of a truncated quotient.
pub const DEFAULT_WORD_LIMIT: usize = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NfError {
    #[error("relation {0} has no quadratic part")]
    NoQuadraticPart(usize),
    #[error("relation {relation} is not homogeneous for the grading ({a} vs {b})")]
    Inhomogeneous { relation: usize, a: i32, b: i32 },
    #[error("relation {0} contains a word longer than 2")]
    LongTerm(usize),
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("cap must be at least 2 (got {0})")]
    CapTooSmall(usize),
    #[error("cap exceeded: word of length {len} under cap {cap}")]
    CapExceeded { len: usize, cap: usize },
    #[error("cap {cap} needs {words} words and about {rows} ideal rows; limit is {limit} words")]
    TooLarge { cap: usize, words: usize, rows: usize, limit: usize },
    #[error("{0}")]
    Literal(#[from] LiteralError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub degree: i32,
}

/// A formal combination of words of length ≤ 2, read as `Σ c·w = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation<F> {
    pub terms: Vec<(F, Word)>,
}

impl<F: Field> Relation<F> {
    /// Merge repeated words and drop zero coefficients.
    pub fn simplified(&self) -> Self {
        let mut acc: Vec<(F, Word)> = Vec::new();
        for (c, w) in &self.terms {
            match acc.iter_mut().find(|(_, x)| x == w) {
                Some((a, _)) => a.add_assign(c),
                None => acc.push((c.clone(), w.clone())),
            }
        }
        acc.retain(|(c, _)| !c.is_zero());
        Relation { terms: acc }
    }

    pub fn is_zero(&self) -> bool {
        self.simplified().terms.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation<F> {
    generators: Vec<Generator>,
    relations: Vec<Relation<F>>,
}

impl<F: Field> Presentation<F> {
    pub fn new(generators: Vec<Generator>, relations: Vec<Relation<F>>) -> Result<Self, NfError> {
        let relations: Vec<Relation<F>> = relations.iter().map(Relation::simplified).collect();
        for (k, r) in relations.iter().enumerate() {
            if r.terms.iter().any(|(_, w)| w.len() > 2) {
                return Err(NfError::LongTerm(k));
            }
            if let Some((_, w)) = r.terms.iter().find(|(_, w)| w.iter().any(|g| *g >= generators.len())) {
                return Err(NfError::UnknownGenerator(format!("{w:?}")));
            }
            if !r.terms.iter().any(|(_, w)| w.len() == 2) {
                return Err(NfError::NoQuadraticPart(k));
            }
            let deg = |w: &Word| w.iter().map(|g| generators[*g].degree).sum::<i32>();
            let d0 = deg(&r.terms[0].1);
            if let Some((_, w)) = r.terms.iter().find(|(_, w)| deg(w) != d0) {
                return Err(NfError::Inhomogeneous { relation: k, a: d0, b: deg(w) });
            }
        }
        Ok(Presentation { generators, relations })
    }

    /// Free algebra on the given generators.
    pub fn free(generators: Vec<Generator>) -> Self {
        Presentation { generators, relations: Vec::new() }
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn relations(&self) -> &[Relation<F>] {
        &self.relations
    }

    pub fn degree(&self, w: &[usize]) -> i32 {
        w.iter().map(|g| self.generators[*g].degree).sum()
    }

    /// The same algebra with generators listed in a new order:
    /// new generator `k` is old generator `order[k]`.
    pub fn reordered(&self, order: &[usize]) -> Self {
        let mut new_of = vec![0; order.len()];
        for (k, &o) in order.iter().enumerate() {
            new_of[o] = k;
        }
        let generators = order.iter().map(|&o| self.generators[o].clone()).collect();
        let relations = self
            .relations
            .iter()
            .map(|r| Relation {
                terms: r.terms.iter().map(|(c, w)| (c.clone(), w.iter().map(|g| new_of[*g]).collect())).collect(),
            })
            .collect();
        Presentation { generators, relations }
    }

    pub fn render_word(&self, w: &[usize]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter().map(|g| self.generators[*g].name.as_str()).collect::<Vec<_>>().join(" ")
    }

    pub fn to_record(&self) -> PresentationRecord {
        PresentationRecord {
            generators: self.generators.clone(),
            relations: self
                .relations
                .iter()
                .map(|r| r.terms.iter().map(|(c, w)| (c.to_literal(), self.render_word(w))).collect())
                .collect(),
        }
    }

    pub fn from_record(rec: &PresentationRecord, q: &F) -> Result<Self, NfError> {
        let lookup: HashMap<&str, usize> =
            rec.generators.iter().enumerate().map(|(k, g)| (g.name.as_str(), k)).collect();
        let mut relations = Vec::new();
        for r in &rec.relations {
            let mut terms = Vec::new();
            for (lit, word) in r {
                let c = parse_literal(lit, q)?;
                let w = word
                    .split_whitespace()
                    .filter(|t| *t != "1")
                    .map(|t| lookup.get(t).copied().ok_or_else(|| NfError::UnknownGenerator(t.to_string())))
                    .collect::<Result<Word, _>>()?;
                terms.push((c, w));
            }
            relations.push(Relation { terms });
        }
        Presentation::new(rec.generators.clone(), relations)
    }
}

/// Interchange form of a presentation: each relation is a list of
/// `(coefficient literal, space-separated generator names)`; `"1"` is the empty word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationRecord {
    pub generators: Vec<Generator>,
    pub relations: Vec<Vec<(String, String)>>,
}

/// Words of length ≤ cap numbered in graded lexicographic order.
#[derive(Debug, Clone)]
pub struct WordIndex {
    gens: usize,
    cap: usize,
    offsets: Vec<usize>,
}

impl WordIndex {
    pub fn new(gens: usize, cap: usize) -> Self {
        let mut offsets: Vec<usize> = vec![0];
        let mut layer = 1usize;
        for _ in 0..=cap {
            offsets.push(offsets.last().unwrap().saturating_add(layer));
            layer = layer.saturating_mul(gens);
        }
        WordIndex { gens, cap, offsets }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.offsets[self.cap + 1]
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Ids of the words of length `l`.
    pub fn layer(&self, l: usize) -> std::ops::Range<usize> {
        self.offsets[l]..self.offsets[l + 1]
    }

    pub fn index(&self, w: &[usize]) -> usize {
        self.offsets[w.len()] + w.iter().fold(0, |acc, g| acc * self.gens + g)
    }

    pub fn word(&self, id: usize) -> Word {
        let l = self.offsets.partition_point(|&o| o <= id) - 1;
        let mut rest = id - self.offsets[l];
        let mut w = vec![0; l];
        for k in (0..l).rev() {
            w[k] = rest % self.gens;
            rest /= self.gens;
        }
        w
    }
}

/// An element of the truncated quotient: coefficients on standard words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NfElement<F> {
    pub cap: usize,
    pub terms: Vec<(Word, F)>,
}

impl<F: Field> NfElement<F> {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Canonical basis of a presentation truncated at a word-length cap, with
/// its reduction map.
#[derive(Debug, Clone)]
pub struct QuotientBasis<F> {
    presentation: Presentation<F>,
    index: WordIndex,
    ech: Rref<F>,
    standard: Vec<usize>,
}

/// Raw word count and an estimate of the number of ideal rows at `cap`.
pub fn size_estimate(gens: usize, relations: usize, cap: usize) -> (usize, usize) {
    let words = WordIndex::new(gens, cap).len();
    let mut rows = 0usize;
    let mut layer = 1usize;
    for m in 0..=cap.saturating_sub(2) {
        rows = rows.saturating_add(relations.saturating_mul(m + 1).saturating_mul(layer));
        layer = layer.saturating_mul(gens);
    }
    (words, rows)
}

impl<F: Field> QuotientBasis<F> {
    pub fn build(p: &Presentation<F>, cap: usize) -> Result<Self, NfError> {
        Self::build_with_limit(p, cap, DEFAULT_WORD_LIMIT)
    }

    pub fn build_with_limit(p: &Presentation<F>, cap: usize, limit: usize) -> Result<Self, NfError> {
        if cap < 2 {
            return Err(NfError::CapTooSmall(cap));
        }
        let g = p.generators.len();
        let (words, rows) = size_estimate(g, p.relations.len(), cap);
        if words > limit {
            return Err(NfError::TooLarge { cap, words, rows, limit });
        }
        let index = WordIndex::new(g, cap);
        let mut ech = Rref::empty(index.len(), PivotOrder::Reverse);
        for m in 0..=cap - 2 {
            for id in index.layer(m) {
                let w = index.word(id);
                for split in 0..=m {
                    for r in &p.relations {
                        let mut row: SparseVec<F> = r
                            .terms
                            .iter()
                            .map(|(c, t)| {
                                let full: Word = w[..split].iter().chain(t).chain(&w[split..]).copied().collect();
                                (index.index(&full), c.clone())
                            })
                            .collect();
                        row.sort_by_key(|e| e.0);
                        ech.insert(row);
                    }
                }
            }
        }
        ech.finish();
        let standard = ech.free_columns();
        Ok(QuotientBasis { presentation: p.clone(), index, ech, standard })
    }

    pub fn presentation(&self) -> &Presentation<F> {
        &self.presentation
    }

    pub fn cap(&self) -> usize {
        self.index.cap()
    }

    pub fn dim(&self) -> usize {
        self.standard.len()
    }

    /// Quotient dimension contributed by each word length `0..=cap`.
    pub fn dims_by_length(&self) -> Vec<usize> {
        (0..=self.cap()).map(|l| self.standard.iter().filter(|id| self.index.layer(l).contains(id)).count()).collect()
    }

    pub fn standard_words(&self) -> Vec<Word> {
        self.standard.iter().map(|id| self.index.word(*id)).collect()
    }

    pub fn is_standard(&self, w: &[usize]) -> bool {
        w.len() <= self.cap() && !self.ech.is_pivot(self.index.index(w))
    }

    pub fn unit(&self) -> NfElement<F> {
        NfElement { cap: self.cap(), terms: vec![(Vec::new(), F::one())] }
    }

    pub fn word_id(&self, w: &[usize]) -> Result<usize, NfError> {
        if w.len() > self.cap() {
            return Err(NfError::CapExceeded { len: w.len(), cap: self.cap() });
        }
        Ok(self.index.index(w))
    }

    pub fn word_of(&self, id: usize) -> Word {
        self.index.word(id)
    }

    /// Reduce a sparse vector over word ids onto standard words.
    pub fn reduce_ids(&self, v: &SparseVec<F>) -> SparseVec<F> {
        self.ech.reduce(v)
    }

    /// Normal form of a single word, as coefficients on standard word ids.
    pub fn reduce_word(&self, id: usize) -> SparseVec<F> {
        match self.ech.pivot_row(id) {
            Some(r) => self.ech.rows()[r].iter().filter(|(c, _)| *c != id).map(|(c, v)| (*c, v.neg())).collect(),
            None => vec![(id, F::one())],
        }
    }

    pub fn normal_form(&self, x: &[(F, Word)]) -> Result<NfElement<F>, NfError> {
        let mut acc: HashMap<usize, F> = HashMap::new();
        for (c, w) in x {
            acc.entry(self.word_id(w)?).or_insert_with(F::zero).add_assign(c);
        }
        let mut v: SparseVec<F> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        v.sort_by_key(|e| e.0);
        Ok(self.element(self.reduce_ids(&v)))
    }

    fn element(&self, v: SparseVec<F>) -> NfElement<F> {
        NfElement { cap: self.cap(), terms: v.into_iter().map(|(id, c)| (self.index.word(id), c)).collect() }
    }

    pub fn multiply(&self, a: &NfElement<F>, b: &NfElement<F>) -> Result<NfElement<F>, NfError> {
        let mut x = Vec::with_capacity(a.terms.len() * b.terms.len());
        for (wa, ca) in &a.terms {
            for (wb, cb) in &b.terms {
                x.push((ca.mul(cb), wa.iter().chain(wb).copied().collect()));
            }
        }
        self.normal_form(&x)
    }

    pub fn render(&self, e: &NfElement<F>) -> String {
        if e.terms.is_empty() {
            return "0".into();
        }
        e.terms
            .iter()
            .map(|(w, c)| format!("({})*{}", c.to_literal(), self.presentation.render_word(w)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl<F: Field> fmt::Display for NfElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({}){:?}", c.to_literal(), w)?;
        }
        Ok(())
    }
}

fn generators(prefix: &str, dim: usize, degree: i32) -> Vec<Generator> {
    (1..=dim).map(|k| Generator { name: format!("{prefix}{k}"), degree }).collect()
}

fn chi_relations<F: Field>(spec: &AlgebraSpec<F>, shift: usize) -> Vec<Relation<F>> {
    let d = spec.dim;
    let mut out = Vec::new();
    for i in 0..d {
        for j in 0..d {
            // χ_i χ_j − σ^{mk}_{ij} χ_m χ_k − C^k_{ij} χ_k
            let mut terms = vec![(F::one(), vec![shift + i, shift + j])];
            for m in 0..d {
                for k in 0..d {
                    let s = spec.sigma.get(&[m, k], &[i, j]);
                    if !s.is_zero() {
                        terms.push((s.neg(), vec![shift + m, shift + k]));
                    }
                }
            }
            for k in 0..d {
                let c = spec.c.get(&[k], &[i, j]);
                if !c.is_zero() {
                    terms.push((c.neg(), vec![shift + k]));
                }
            }
            let r = Relation { terms }.simplified();
            if !r.terms.is_empty() {
                out.push(r);
            }
        }
    }
    out
}

/// The algebra generated by `χ_1..χ_d` subject to `χ_iχ_j − σ^{mk}_{ij}χ_mχ_k = C^k_{ij}χ_k`.
pub fn chi_presentation<F: Field>(spec: &AlgebraSpec<F>) -> Result<Presentation<F>, NfError> {
    Presentation::new(generators("X", spec.dim, 0), chi_relations(spec, 0))
}

/// Generators `Ω^1..Ω^d`, `χ_1..χ_d`, `γ_1..γ_d` (in this order, degrees
/// −1, 0, 1) with the χχ relations and the three cross relations between
/// the types. Relations inside the γ and Ω sectors are not included.
pub fn extended_presentation<F: Field>(spec: &AlgebraSpec<F>) -> Result<Presentation<F>, NfError> {
    let d = spec.dim;
    let (w, x, g) = (0, d, 2 * d);
    let mut gens = generators("W", d, -1);
    gens.extend(generators("X", d, 0));
    gens.extend(generators("G", d, 1));
    let mut rels = chi_relations(spec, x);
    let sig = |a: usize, b: usize, c: usize, e: usize| spec.sigma.get(&[a, b], &[c, e]);
    let sigi = |a: usize, b: usize, c: usize, e: usize| spec.sigma_inv().get(&[a, b], &[c, e]);
    let cc = |k: usize, i: usize, j: usize| spec.c.get(&[k], &[i, j]);
    for j in 0..d {
        for m in 0..d {
            // γ_j χ_m = σ^{ab}_{jm} χ_a γ_b + C^b_{jm} γ_b
            let mut terms = vec![(F::one(), vec![g + j, x + m])];
            for a in 0..d {
                for b in 0..d {
                    terms.push((sig(a, b, j, m).neg(), vec![x + a, g + b]));
                }
                terms.push((cc(a, j, m).neg(), vec![g + a]));
            }
            rels.push(Relation { terms });
        }
    }
    for j in 0..d {
        for i in 0..d {
            // χ_j Ω^i = σ^{mi}_{pj} Ω^p χ_m + C^i_{qj} Ω^q
            let mut terms = vec![(F::one(), vec![x + j, w + i])];
            for p in 0..d {
                for m in 0..d {
                    terms.push((sig(m, i, p, j).neg(), vec![w + p, x + m]));
                }
                terms.push((cc(i, p, j).neg(), vec![w + p]));
            }
            rels.push(Relation { terms });
            // γ_j Ω^i + Ω^p (σ⁻¹)^{si}_{pj} γ_s = δ^i_j
            let mut terms = vec![(F::one(), vec![g + j, w + i])];
            for p in 0..d {
                for s in 0..d {
                    terms.push((sigi(s, i, p, j), vec![w + p, g + s]));
                }
            }
            if i == j {
                terms.push((F::one().neg(), Vec::new()));
            }
            rels.push(Relation { terms });
        }
    }
    Presentation::new(gens, rels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use crate::scalar::{Rational, ScalarMode};

    #[test]
    fn word_index_round_trip() {
        let ix = WordIndex::new(3, 3);
        assert_eq!(ix.len(), 1 + 3 + 9 + 27);
        for id in 0..ix.len() {
            assert_eq!(ix.index(&ix.word(id)), id);
        }
        assert!(ix.index(&[2]) < ix.index(&[0, 0]));
    }

    #[test]
    fn sl2_bracket() {
        let spec = presets::sl2::<Rational>(ScalarMode::Symbolic);
        let b = QuotientBasis::build(&chi_presentation(&spec).unwrap(), 2).unwrap();
        assert_eq!(b.dims_by_length(), vec![1, 3, 6]);
        let one = Rational::new(1, 1);
        let nf = b.normal_form(&[(one.clone(), vec![1, 2]), (one.neg(), vec![2, 1])]).unwrap();
        assert_eq!(nf.terms, vec![(vec![0], one)]);
    }

    #[test]
    fn too_large_is_reported() {
        let p = Presentation::<Rational>::free(generators("x", 10, 0));
        match QuotientBasis::build_with_limit(&p, 6, 1000) {
            Err(NfError::TooLarge { words, .. }) => assert_eq!(words, 1_111_111),
            other => panic!("{other:?}"),
        }
    }
}
