//! The defining relations of Γ^∧[Ω] checked as operator identities on Γ^∧,
//! and the formula for a γ-wedge times Ω.

use std::collections::HashMap;

use crate::braid::{sign, AlgebraSpec, Check};
use crate::complex::{BasisKey, Complex, ComplexElement, ComplexError};
use crate::nf::extended_presentation;
use crate::scalar::Field;

/// Which pair of generator types a relation exchanges.
fn family(d: usize, word: &[usize]) -> &'static str {
    let kind = |g: usize| g / d;
    match word.iter().map(|&g| kind(g)).collect::<Vec<_>>()[..] {
        [1, 1] => "chi_chi_relation",
        [2, 1] => "gamma_chi_exchange",
        [1, 0] => "chi_omega_exchange",
        [2, 0] => "gamma_omega_exchange",
        _ => "other",
    }
}

/// Apply a word of Ω (ids `0..d`), χ (`d..2d`) and γ (`2d..3d`) letters,
/// rightmost first.
fn apply_word<F: Field>(cx: &Complex<F>, word: &[usize], phi: &ComplexElement<F>) -> Result<ComplexElement<F>, ComplexError> {
    let d = cx.dim();
    let mut v = phi.clone();
    for &g in word.iter().rev() {
        v = match g / d {
            0 => cx.act_omega(g % d, &v)?,
            1 => cx.act_chi(g % d, &v)?,
            _ => cx.act_gamma(g % d, &v)?,
        };
    }
    Ok(v)
}

/// Every χχ, γχ, χΩ and γΩ relation annihilates every basis element within
/// the caps. One check per relation family; the witness is
/// (relation, basis element) in enumeration order.
pub fn check_operator_relations<F: Field>(
    spec: &AlgebraSpec<F>,
    cx: &Complex<F>,
    chi_cap: usize,
    gamma_cap: usize,
) -> Result<Vec<Check>, ComplexError> {
    let d = spec.dim;
    let p = extended_presentation(spec)?;
    let basis = cx.basis(chi_cap, gamma_cap)?;
    let mut failures: HashMap<&'static str, (Vec<usize>, String)> = HashMap::new();
    let mut names: Vec<&'static str> = Vec::new();
    for (ri, rel) in p.relations().iter().enumerate() {
        let lead = rel.terms.iter().find(|(_, w)| w.len() == 2).map(|(_, w)| w.as_slice()).unwrap_or(&[]);
        let name = family(d, lead);
        if !names.contains(&name) {
            names.push(name);
        }
        if failures.contains_key(name) {
            continue;
        }
        for (bi, &key) in basis.iter().enumerate() {
            let phi = ComplexElement::basis(key);
            let mut acc = ComplexElement::zero();
            for (c, w) in &rel.terms {
                acc.add_scaled(&apply_word(cx, w, &phi)?, c);
            }
            if !acc.is_zero() {
                failures.insert(name, (vec![ri, bi], cx.render(&acc)));
                break;
            }
        }
    }
    Ok(names
        .into_iter()
        .map(|name| {
            let f = failures.remove(name);
            let mut c = Check::from_witness(name, f.as_ref().map(|(w, _)| w.clone()));
            c.note = f.map(|(_, r)| r);
            c
        })
        .collect())
}

/// `γ_J(ψ)` for a flat multi-index `J` of length `n`.
fn gamma_block<F: Field>(cx: &Complex<F>, flat: usize, n: usize, psi: &ComplexElement<F>) -> Result<ComplexElement<F>, ComplexError> {
    let d = cx.dim();
    let mut v = psi.clone();
    let mut f = flat;
    // rightmost letter acts first: it is the least significant digit
    for _ in 0..n {
        v = cx.act_gamma(f % d, &v)?;
        f /= d;
    }
    Ok(v)
}

/// `γ_{|1>}∧…∧γ_{|r>} Ω^{<r|} = (−1)^r Ω^{<0|} σ⁻¹_{r←0} γ_{|0>}∧…∧γ_{|r−1>}
/// + (Σ_k (−1)^{r−k} σ⁻¹_{r←k}) γ_{|1>}∧…∧γ_{|r−1>}` on the given elements,
/// with free indices: γ lower legs `J`, Ω upper leg `i`.
pub fn check_wedge_omega<F: Field>(
    spec: &AlgebraSpec<F>,
    cx: &Complex<F>,
    r: usize,
    elements: &[BasisKey],
) -> Result<Check, ComplexError> {
    let name = format!("wedge_omega_r{r}");
    let d = spec.dim;
    let b = spec.braiding();
    // formula orientation: rows are lower legs, columns upper legs
    let long = b.inv_chain(r + 1, 1, r + 1);
    let mut short = b.inv_chain(r, r, r).scale(&sign(0));
    for k in 1..r {
        short = short.axpy(&sign(r - k), &b.inv_chain(r, k, r));
    }
    let dr = d.pow(r as u32);
    for (ei, &key) in elements.iter().enumerate() {
        let phi = ComplexElement::basis(key);
        let mut lhs: HashMap<(usize, usize), ComplexElement<F>> = HashMap::new();
        for i in 0..d {
            let w = cx.act_omega(i, &phi)?;
            for j in 0..dr {
                lhs.insert((j, i), gamma_block(cx, j, r, &w)?);
            }
        }
        let mut rhs: HashMap<(usize, usize), ComplexElement<F>> = HashMap::new();
        let mut omega_gamma: HashMap<(usize, usize), ComplexElement<F>> = HashMap::new();
        let lead = sign::<F>(r);
        for (row, col, v) in long.entries() {
            let (p, j) = (row / dr, row % dr);
            let (s, i) = (col / d, col % d);
            let term = match omega_gamma.get(&(p, s)) {
                Some(t) => t.clone(),
                None => {
                    let t = cx.act_omega(p, &gamma_block(cx, s, r, &phi)?)?;
                    omega_gamma.insert((p, s), t.clone());
                    t
                }
            };
            rhs.entry((j, i)).or_insert_with(ComplexElement::zero).add_scaled(&term, &v.mul(&lead));
        }
        let mut blocks: HashMap<usize, ComplexElement<F>> = HashMap::new();
        for (j, col, v) in short.entries() {
            let (s, i) = (col / d, col % d);
            if !blocks.contains_key(&s) {
                blocks.insert(s, gamma_block(cx, s, r - 1, &phi)?);
            }
            rhs.entry((j, i)).or_insert_with(ComplexElement::zero).add_scaled(&blocks[&s], v);
        }
        for j in 0..dr {
            for i in 0..d {
                let l = lhs.remove(&(j, i)).unwrap_or_default();
                let rr = rhs.remove(&(j, i)).unwrap_or_default();
                let diff = l.sub(&rr);
                if !diff.is_zero() {
                    let mut c = Check::from_witness(&name, Some(vec![ei, j, i]));
                    c.note = Some(cx.render(&diff));
                    return Ok(c);
                }
            }
        }
    }
    Ok(Check::from_witness(&name, None))
}
