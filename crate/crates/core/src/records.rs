//! JSON file formats: algebra specs and BRST artifacts.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::braid::{AlgebraSpec, AntisymTower, Check};
use crate::brst::{from_solutions, BrstData};
use crate::complex::{OperatorTermRecord, WedgeBasis};
use crate::linalg::{PivotOrder, SparseMat};
use crate::scalar::{parse_literal, Field, HasParameter, ScalarMode};
use crate::tensor::{Tensor, TensorRecord};

pub const FORMAT_VERSION: u32 = 1;

/// Bad input with a 1-based position in the source text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct InputError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl InputError {
    fn at(text: &str, offset: usize, message: String) -> Self {
        let before = &text[..offset.min(text.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        InputError { line, column, message }
    }

    fn whole(message: String) -> Self {
        InputError { line: 1, column: 1, message }
    }
}

/// Sparse entry: 1-based indices (out legs, then in legs) and a scalar literal.
pub type Entry = (Vec<usize>, String);

/// The algebra-spec file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecFile {
    pub format_version: u32,
    pub name: String,
    pub dim: usize,
    /// `"symbolic"` or `"numeric"`.
    pub scalar_mode: String,
    /// Value of q in numeric mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    pub sigma: Vec<Entry>,
    pub c: Vec<Entry>,
}

impl SpecFile {
    pub fn from_spec<F: Field>(spec: &AlgebraSpec<F>) -> Self {
        let (scalar_mode, q) = match &spec.mode {
            ScalarMode::Symbolic => ("symbolic".to_string(), None),
            ScalarMode::Numeric { q } => ("numeric".to_string(), Some(q.clone())),
        };
        SpecFile {
            format_version: FORMAT_VERSION,
            name: spec.name.clone(),
            dim: spec.dim,
            scalar_mode,
            q,
            sigma: spec.sigma.to_record().entries,
            c: spec.c.to_record().entries,
        }
    }

    pub fn parse(text: &str) -> Result<Self, InputError> {
        let file: SpecFile = serde_json::from_str(text)
            .map_err(|e| InputError { line: e.line(), column: e.column(), message: e.to_string() })?;
        if file.format_version != FORMAT_VERSION {
            return Err(InputError::at(
                text,
                text.find("format_version").unwrap_or(0),
                format!("unsupported format_version {} (expected {FORMAT_VERSION})", file.format_version),
            ));
        }
        Ok(file)
    }

    /// Pretty JSON with one sparse entry per line.
    pub fn to_json(&self) -> String {
        let str_json = |s: &str| serde_json::to_string(s).expect("serializable");
        let entries = |es: &[Entry]| {
            let rows: Vec<String> =
                es.iter().map(|e| format!("    {}", serde_json::to_string(e).expect("serializable"))).collect();
            if rows.is_empty() {
                "[]".to_string()
            } else {
                format!("[\n{}\n  ]", rows.join(",\n"))
            }
        };
        let q = self.q.as_deref().map_or(String::new(), |q| format!("  \"q\": {},\n", str_json(q)));
        format!(
            "{{\n  \"format_version\": {},\n  \"name\": {},\n  \"dim\": {},\n  \"scalar_mode\": {},\n{q}  \"sigma\": {},\n  \"c\": {}\n}}\n",
            self.format_version,
            str_json(&self.name),
            self.dim,
            str_json(&self.scalar_mode),
            entries(&self.sigma),
            entries(&self.c),
        )
    }

    pub fn mode(&self) -> Result<ScalarMode, InputError> {
        match (self.scalar_mode.as_str(), &self.q) {
            ("symbolic", _) => Ok(ScalarMode::Symbolic),
            ("numeric", Some(q)) => Ok(ScalarMode::Numeric { q: q.clone() }),
            ("numeric", None) => Err(InputError::whole("numeric scalar_mode needs a q value".into())),
            (other, _) => Err(InputError::whole(format!("unknown scalar_mode {other:?}"))),
        }
    }

    /// Build the spec in the field matching `mode`; `text` is the source
    /// the record came from, used to locate bad literals.
    pub fn build<F: HasParameter>(&self, mode: &ScalarMode, text: &str) -> Result<AlgebraSpec<F>, InputError> {
        let q = parameter_for::<F>(mode, self.is_q_free())?;
        let tensor = |entries: &[Entry], outs: usize, what: &str| -> Result<Tensor<F>, InputError> {
            for (_, lit) in entries {
                if let Err(e) = parse_literal::<F>(lit, &q) {
                    let quoted = format!("\"{lit}\"");
                    let offset = text.find(&quoted).map_or(0, |o| o + 1 + e.pos);
                    return Err(InputError::at(text, offset, format!("{what}: {e}")));
                }
            }
            let rec = TensorRecord { dim: self.dim, out_legs: outs, in_legs: 2, entries: entries.to_vec() };
            Tensor::from_record(&rec, &q).map_err(|e| InputError::whole(format!("{what}: {e}")))
        };
        let sigma = tensor(&self.sigma, 2, "sigma")?;
        let c = tensor(&self.c, 1, "c")?;
        AlgebraSpec::new(&self.name, sigma, c, mode.clone()).map_err(|e| InputError::whole(e.to_string()))
    }

    /// No scalar literal mentions `q`.
    pub fn is_q_free(&self) -> bool {
        self.sigma.iter().chain(&self.c).all(|(_, lit)| !lit.contains('q'))
    }

    /// SHA-256 of the canonical serialization (entries sorted).
    pub fn hash(&self) -> String {
        let mut canon = self.clone();
        canon.sigma.sort();
        canon.c.sort();
        hex::encode(Sha256::digest(serde_json::to_vec(&canon).expect("serializable")))
    }
}

/// The parameter of `F` in `mode`; q-free data may use any field, with a
/// placeholder that never enters a literal.
fn parameter_for<F: HasParameter>(mode: &ScalarMode, q_free: bool) -> Result<F, InputError> {
    match F::parameter(mode) {
        Ok(q) => Ok(q),
        Err(_) if q_free => Ok(F::one()),
        Err(e) => Err(InputError::whole(format!("q: {e}"))),
    }
}

/// Content hash of a built spec.
pub fn spec_hash<F: Field>(spec: &AlgebraSpec<F>) -> String {
    SpecFile::from_spec(spec).hash()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub r: usize,
    pub x: TensorRecord,
    pub y: TensorRecord,
    /// Rank of `Y_r` as a matrix.
    pub sandwich_rank: usize,
}

/// Everything `brst` produces; `verify` re-reads it without re-solving.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Artifact {
    pub format_version: u32,
    pub spec_name: String,
    pub spec_hash: String,
    pub scalar_mode: ScalarMode,
    pub gauge: PivotOrder,
    /// Largest n with `A_{1→n} ≠ 0`, when the tower terminated.
    pub height: Option<usize>,
    /// Number of antisymmetrizers computed.
    pub tower_top: usize,
    pub levels: Vec<LevelRecord>,
    pub q: Vec<OperatorTermRecord>,
    pub q_rendered: String,
    pub checks: Vec<Check>,
}

impl Artifact {
    #[allow(clippy::too_many_arguments)]
    pub fn new<F: Field>(
        spec: &AlgebraSpec<F>,
        tower: &AntisymTower<F>,
        gauge: PivotOrder,
        data: &BrstData<F>,
        q: &crate::complex::OperatorElement<F>,
        checks: Vec<Check>,
    ) -> Self {
        let levels = data
            .levels
            .iter()
            .map(|l| LevelRecord {
                r: l.r,
                x: data.x_tensor(l.r).to_record(),
                y: data.y_tensor(l.r).to_record(),
                sandwich_rank: l.y.rank(),
            })
            .collect();
        Artifact {
            format_version: FORMAT_VERSION,
            spec_name: spec.name.clone(),
            spec_hash: spec_hash(spec),
            scalar_mode: spec.mode.clone(),
            gauge,
            height: tower.height(),
            tower_top: tower.top(),
            levels,
            q: q.to_record(),
            q_rendered: q.render(),
            checks,
        }
    }

    pub fn parse(text: &str) -> Result<Self, InputError> {
        let a: Artifact = serde_json::from_str(text)
            .map_err(|e| InputError { line: e.line(), column: e.column(), message: e.to_string() })?;
        if a.format_version != FORMAT_VERSION {
            return Err(InputError::whole(format!("unsupported artifact format_version {}", a.format_version)));
        }
        Ok(a)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    /// Rebuild the X data against `spec` and its tower.
    pub fn solutions<F: HasParameter>(
        &self,
        spec: &AlgebraSpec<F>,
        tower: &AntisymTower<F>,
        wedge: &WedgeBasis<F>,
    ) -> Result<BrstData<F>, InputError> {
        if self.spec_hash != spec_hash(spec) {
            return Err(InputError::whole(format!(
                "artifact was produced for a different algebra ({} with hash {}…)",
                self.spec_name,
                &self.spec_hash[..12.min(self.spec_hash.len())]
            )));
        }
        let q_free = self.levels.iter().flat_map(|l| &l.x.entries).all(|(_, lit)| !lit.contains('q'));
        let q = parameter_for::<F>(&spec.mode, q_free)?;
        let mut xs: Vec<SparseMat<F>> = Vec::new();
        for (k, l) in self.levels.iter().enumerate() {
            if l.r != k + 1 || l.x.out_legs != l.r || l.x.in_legs != l.r + 1 || l.x.dim != spec.dim {
                return Err(InputError::whole(format!("level record {} has the wrong shape", k + 1)));
            }
            let x = Tensor::from_record(&l.x, &q).map_err(|e| InputError::whole(format!("X_{}: {e}", l.r)))?;
            xs.push(x.matrix().transpose());
        }
        if xs.len() > crate::brst::level_count(tower) {
            return Err(InputError::whole("artifact has more levels than the tower supports".into()));
        }
        Ok(from_solutions(tower, wedge, xs))
    }
}
