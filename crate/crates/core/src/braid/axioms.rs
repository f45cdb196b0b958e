use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::labeled::Labeled;
use super::AlgebraSpec;
use crate::linalg::{PivotOrder, Rref, SparseMat};
use crate::scalar::Field;
use crate::tensor::Tensor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Unsupported,
}

/// Outcome of one exact identity check. Witnesses are 1-based index tuples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn from_witness(name: &str, witness: Option<Vec<usize>>) -> Self {
        Check {
            name: name.to_string(),
            status: if witness.is_some() { CheckStatus::Fail } else { CheckStatus::Pass },
            witness: witness.map(|w| w.into_iter().map(|x| x + 1).collect()),
            note: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

/// `σ12 σ23 σ12 = σ23 σ12 σ23`; the witness lists out then in indices.
pub fn check_yang_baxter<F: Field>(sigma: &Tensor<F>) -> Check {
    let s12 = sigma.embed(&[1, 2], 3).expect("sigma shape");
    let s23 = sigma.embed(&[2, 3], 3).expect("sigma shape");
    let lhs = s12.compose(&s23).and_then(|t| t.compose(&s12)).expect("shape");
    let rhs = s23.compose(&s12).and_then(|t| t.compose(&s23)).expect("shape");
    let w = lhs.first_difference(&rhs).map(|(o, i)| o.into_iter().chain(i).collect());
    Check::from_witness("yang_baxter", w)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EigenError {
    #[error("sigma has no eigenvalue 1")]
    Absent,
    #[error("sigma is not semisimple at eigenvalue 1")]
    NotSemisimple,
}

/// Projector onto `ker(σ - 1)` along `im(σ - 1)`, as a stored tensor.
pub fn unit_eigenprojector<F: Field>(sigma: &Tensor<F>) -> Result<Tensor<F>, EigenError> {
    let d = sigma.dim();
    let n = d * d;
    let m = sigma.matrix().sub(&SparseMat::identity(n));
    let ech = Rref::new(&m, PivotOrder::Forward);
    let kernel = ech.kernel();
    if kernel.is_empty() {
        return Err(EigenError::Absent);
    }
    // image basis: pivot columns of σ - 1
    let mt = m.transpose();
    let image: Vec<_> = ech.pivots().iter().map(|&c| mt.row(c).clone()).collect();
    if kernel.len() + image.len() != n {
        return Err(EigenError::NotSemisimple);
    }
    // B = [kernel | image] as columns; P = B diag(1,..,1,0,..,0) B^{-1}
    let cols: Vec<_> = kernel.iter().chain(image.iter()).cloned().collect();
    let bt = SparseMat::from_rows(n, cols);
    let b = bt.transpose();
    let binv = match crate::linalg::solve(&b, &SparseMat::identity(n), PivotOrder::Forward) {
        Ok(x) if b.mul(&x) == SparseMat::identity(n) => x,
        _ => return Err(EigenError::NotSemisimple),
    };
    let k = kernel.len();
    let keep = SparseMat::from_rows(n, (0..n).map(|i| if i < k { vec![(i, F::one())] } else { vec![] }).collect());
    let p = b.mul(&keep).mul(&binv);
    Ok(Tensor::from_matrix(d, 2, 2, p).expect("projector shape"))
}

/// `C ∘ P₁ = 0`; the witness is `(k, i, j)`.
pub fn check_c_condition<F: Field>(p1: &Tensor<F>, c: &Tensor<F>) -> Check {
    let prod = c.compose(p1).expect("shape");
    let w = prod.entries().next().map(|(o, i, _)| o.into_iter().chain(i).collect());
    Check::from_witness("unit_eigenspace_kills_c", w)
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub checks: Vec<Check>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Check the braided Jacobi identity, the two σ–C exchange identities, the
/// Yang–Baxter equation and the eigenvalue-1 condition.
pub fn check_qlie_axioms<F: Field>(spec: &AlgebraSpec<F>) -> AxiomReport {
    let d = spec.dim;
    let s = |l: &str| Labeled::of(&spec.sigma, l);
    let c = |l: &str| Labeled::of(&spec.c, l);
    let delta = |l: &str| Labeled::<F>::delta(d, l);

    let mut checks = vec![check_yang_baxter(&spec.sigma)];

    // C^p_{ni} C^l_{pj} = σ^{mk}_{ij} C^p_{nm} C^l_{pk} + C^p_{ij} C^l_{np}
    let lhs = c("pni").mul(&c("lpj")).to("nijl");
    let rhs = s("mkij").mul(&c("pnm")).mul(&c("lpk")).add(&c("pij").mul(&c("lnp"))).to("nijl");
    checks.push(Check::from_witness("jacobi", lhs.first_difference(&rhs)));

    // C^k_{ni} σ^{pm}_{kq} = σ^{sj}_{iq} σ^{pk}_{ns} C^m_{kj}
    let lhs = c("kni").mul(&s("pmkq")).to("niqpm");
    let rhs = s("sjiq").mul(&s("pkns")).mul(&c("mkj")).to("niqpm");
    checks.push(Check::from_witness("sigma_c_exchange", lhs.first_difference(&rhs)));

    // (σ^{pj}_{im} C^n_{qp} + δ^n_q C^j_{im}) σ^{ks}_{nj}
    //   = σ^{jn}_{qi} (σ^{ps}_{nm} C^k_{jp} + δ^k_j C^s_{nm})
    let lhs = s("pjim").mul(&c("nqp")).add(&delta("nq").mul(&c("jim")));
    let lhs = lhs.mul(&s("ksnj")).to("imqks");
    let inner = s("psnm").mul(&c("kjp")).add(&delta("kj").mul(&c("snm")));
    let rhs = s("jnqi").mul(&inner).to("imqks");
    checks.push(Check::from_witness("sigma_c_exchange_dual", lhs.first_difference(&rhs)));

    checks.push(match unit_eigenprojector(&spec.sigma) {
        Ok(p1) => check_c_condition(&p1, &spec.c),
        Err(EigenError::Absent) => Check {
            name: "unit_eigenspace_kills_c".into(),
            status: CheckStatus::Fail,
            witness: None,
            note: Some("sigma has no eigenvalue 1".into()),
        },
        Err(EigenError::NotSemisimple) => Check {
            name: "unit_eigenspace_kills_c".into(),
            status: CheckStatus::Unsupported,
            witness: None,
            note: Some("sigma is not semisimple at eigenvalue 1".into()),
        },
    });
    AxiomReport { checks }
}
