//! Sparse index-labelled tensors with einsum-style contraction, used to
//! write the structure-constant identities index by index.

use std::collections::{BTreeMap, HashMap};

use crate::scalar::Field;
use crate::tensor::Tensor;

#[derive(Clone, Debug)]
pub struct Labeled<F> {
    labels: Vec<char>,
    entries: BTreeMap<Vec<usize>, F>,
}

impl<F: Field> Labeled<F> {
    /// Label the out legs then the in legs of `t` with the characters of `labels`.
    pub fn of(t: &Tensor<F>, labels: &str) -> Self {
        let labels: Vec<char> = labels.chars().collect();
        assert_eq!(labels.len(), t.out_legs() + t.in_legs(), "label count");
        let entries = t
            .entries()
            .map(|(o, i, v)| (o.into_iter().chain(i).collect::<Vec<_>>(), v.clone()))
            .collect();
        Labeled { labels, entries }.diagonal()
    }

    /// Kronecker delta on two labels.
    pub fn delta(dim: usize, labels: &str) -> Self {
        let labels: Vec<char> = labels.chars().collect();
        assert_eq!(labels.len(), 2);
        let entries = (0..dim).map(|i| (vec![i, i], F::one())).collect();
        Labeled { labels, entries }.diagonal()
    }

    /// Restrict to entries consistent with repeated labels and drop the repeats.
    fn diagonal(mut self) -> Self {
        let mut keep = Vec::new();
        let mut first: HashMap<char, usize> = HashMap::new();
        let mut checks = Vec::new();
        for (k, c) in self.labels.iter().enumerate() {
            match first.get(c) {
                Some(&f) => checks.push((f, k)),
                None => {
                    first.insert(*c, k);
                    keep.push(k);
                }
            }
        }
        if checks.is_empty() {
            return self;
        }
        let entries = std::mem::take(&mut self.entries)
            .into_iter()
            .filter(|(idx, _)| checks.iter().all(|(a, b)| idx[*a] == idx[*b]))
            .map(|(idx, v)| (keep.iter().map(|k| idx[*k]).collect(), v))
            .collect();
        Labeled { labels: keep.iter().map(|k| self.labels[*k]).collect(), entries }
    }

    /// Product summed over every shared label.
    pub fn mul(&self, rhs: &Self) -> Self {
        let shared: Vec<char> = self.labels.iter().filter(|c| rhs.labels.contains(c)).copied().collect();
        let a_pos: Vec<usize> = shared.iter().map(|c| self.pos(*c)).collect();
        let b_pos: Vec<usize> = shared.iter().map(|c| rhs.pos(*c)).collect();
        let a_keep: Vec<usize> = (0..self.labels.len()).filter(|k| !shared.contains(&self.labels[*k])).collect();
        let b_keep: Vec<usize> = (0..rhs.labels.len()).filter(|k| !shared.contains(&rhs.labels[*k])).collect();
        let mut index: HashMap<Vec<usize>, Vec<(&Vec<usize>, &F)>> = HashMap::new();
        for (idx, v) in &rhs.entries {
            index.entry(b_pos.iter().map(|p| idx[*p]).collect()).or_default().push((idx, v));
        }
        let mut entries: BTreeMap<Vec<usize>, F> = BTreeMap::new();
        for (ia, va) in &self.entries {
            let key: Vec<usize> = a_pos.iter().map(|p| ia[*p]).collect();
            if let Some(list) = index.get(&key) {
                for (ib, vb) in list {
                    let out: Vec<usize> =
                        a_keep.iter().map(|k| ia[*k]).chain(b_keep.iter().map(|k| ib[*k])).collect();
                    entries.entry(out).or_insert_with(F::zero).add_mul_assign(va, vb);
                }
            }
        }
        entries.retain(|_, v| !v.is_zero());
        let labels = a_keep.iter().map(|k| self.labels[*k]).chain(b_keep.iter().map(|k| rhs.labels[*k])).collect();
        Labeled { labels, entries }
    }

    fn pos(&self, c: char) -> usize {
        self.labels.iter().position(|x| *x == c).unwrap_or_else(|| panic!("no label {c}"))
    }

    /// Permute to the given label order.
    pub fn to(&self, order: &str) -> Self {
        let order: Vec<char> = order.chars().collect();
        assert_eq!(order.len(), self.labels.len(), "label set mismatch {:?} vs {:?}", order, self.labels);
        let perm: Vec<usize> = order.iter().map(|c| self.pos(*c)).collect();
        let entries = self.entries.iter().map(|(idx, v)| (perm.iter().map(|p| idx[*p]).collect(), v.clone())).collect();
        Labeled { labels: order, entries }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let r = rhs.to(&self.labels.iter().collect::<String>());
        let mut entries = self.entries.clone();
        for (k, v) in r.entries {
            entries.entry(k).or_insert_with(F::zero).add_assign(&v);
        }
        entries.retain(|_, v| !v.is_zero());
        Labeled { labels: self.labels.clone(), entries }
    }

    /// Lexicographically smallest index tuple where `self` and `rhs` differ
    /// (labels in the order of `self`).
    pub fn first_difference(&self, rhs: &Self) -> Option<Vec<usize>> {
        let r = rhs.to(&self.labels.iter().collect::<String>());
        let mut keys: Vec<&Vec<usize>> = self.entries.keys().chain(r.entries.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter().find(|k| self.entries.get(*k) != r.entries.get(*k)).cloned()
    }

    /// Nonzero entries keyed by index tuples in label order.
    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &F)> {
        self.entries.iter()
    }

    pub fn labels(&self) -> String {
        self.labels.iter().collect()
    }
}
