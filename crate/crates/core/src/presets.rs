//! Built-in algebras: classical sl(2), gl(2), the Lie superalgebra gl(1|1)
//! (all with a (super-)permutation braiding) and U_q(gl(N)).

use crate::braid::{AlgebraSpec, BraidError};
use crate::scalar::{Field, ScalarMode};
use crate::tensor::Tensor;

pub const PRESET_NAMES: &[&str] = &["sl2", "gl2", "gl1|1", "uq-gl"];

/// Super-permutation braiding `σ^{mk}_{ij} = (-1)^{p(m)p(k)} δ^m_j δ^k_i`.
pub fn super_permutation<F: Field>(parity: &[u8]) -> Tensor<F> {
    let d = parity.len();
    Tensor::from_fn(d, 2, 2, |o, i| {
        if o[0] == i[1] && o[1] == i[0] {
            if parity[o[0]] & parity[o[1]] == 1 {
                F::one().neg()
            } else {
                F::one()
            }
        } else {
            F::zero()
        }
    })
}

/// Structure constants from a table of `(k, i, j, value)` entries of `C^k_{ij}`.
pub fn structure_constants<F: Field>(dim: usize, table: &[(usize, usize, usize, i64)]) -> Tensor<F> {
    let mut rows: Vec<Vec<(usize, F)>> = vec![Vec::new(); dim];
    for &(k, i, j, v) in table {
        rows[k].push((i * dim + j, F::from_i64(v)));
    }
    Tensor::from_matrix(dim, 1, 2, crate::linalg::SparseMat::from_rows(dim * dim, rows)).expect("shape")
}

/// sl(2) in the basis `(h, e, f)`: `[h,e] = 2e`, `[h,f] = -2f`, `[e,f] = h`.
pub fn sl2<F: Field>(mode: ScalarMode) -> AlgebraSpec<F> {
    let c = structure_constants(
        3,
        &[(1, 0, 1, 2), (1, 1, 0, -2), (2, 0, 2, -2), (2, 2, 0, 2), (0, 1, 2, 1), (0, 2, 1, -1)],
    );
    AlgebraSpec::new("sl2", super_permutation(&[0, 0, 0]), c, mode).expect("valid preset")
}

/// gl(2|0) or gl(1|1) in the matrix-unit basis `e_{ab}` ↦ `2a + b`, with
/// `[e_ab, e_ce} = δ_bc e_ae - (-1)^{|ab||ce|} δ_ea e_cb`.
fn gl_matrix_units<F: Field>(name: &str, odd_second: bool, mode: ScalarMode) -> AlgebraSpec<F> {
    let p = |a: usize| u8::from(odd_second && a == 1);
    let idx = |a: usize, b: usize| 2 * a + b;
    let parity: Vec<u8> = (0..4).map(|x| p(x / 2) ^ p(x % 2)).collect();
    let mut table = Vec::new();
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                for e in 0..2 {
                    let s = if parity[idx(a, b)] & parity[idx(c, e)] == 1 { -1 } else { 1 };
                    if b == c {
                        table.push((idx(a, e), idx(a, b), idx(c, e), 1));
                    }
                    if e == a {
                        table.push((idx(c, b), idx(a, b), idx(c, e), -s));
                    }
                }
            }
        }
    }
    let c = structure_constants(4, &table);
    AlgebraSpec::new(name, super_permutation(&parity), c, mode).expect("valid preset")
}

pub fn gl2<F: Field>(mode: ScalarMode) -> AlgebraSpec<F> {
    gl_matrix_units("gl2", false, mode)
}

/// gl(1|1): `e_11, e_22` even, `e_12, e_21` odd.
pub fn gl11<F: Field>(mode: ScalarMode) -> AlgebraSpec<F> {
    gl_matrix_units("gl1|1", true, mode)
}

/// Look up a classical preset by name.
pub fn classical<F: Field>(name: &str, mode: ScalarMode) -> Result<AlgebraSpec<F>, BraidError> {
    match name {
        "sl2" => Ok(sl2(mode)),
        "gl2" => Ok(gl2(mode)),
        "gl1|1" | "gl11" => Ok(gl11(mode)),
        other => Err(BraidError::Tensor(crate::tensor::TensorError::Shape(format!("unknown preset {other}")))),
    }
}
