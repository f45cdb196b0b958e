//! Where an algebra comes from: a spec file or a compiled-in preset.

use std::path::Path;

use qlie::braid::AlgebraSpec;
use qlie::presets::{self, PRESET_NAMES};
use qlie::records::SpecFile;
use qlie::scalar::{HasParameter, Rational, RatFunc, ScalarMode};
use qlie::uqgl::GlqData;

use crate::{SourceArgs, UsageError};

pub const UQ_GL_DEFAULT_Q: &str = "3/2";

/// A spec file together with the text it was read from.
pub struct Algebra {
    /// File path or preset name, for messages.
    pub origin: String,
    pub file: SpecFile,
    pub text: String,
    pub mode: ScalarMode,
}

/// Scalar field used for the computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scalars {
    Rational,
    RatFunc,
}

impl Algebra {
    pub fn scalars(&self) -> Scalars {
        match self.mode {
            ScalarMode::Numeric { .. } => Scalars::Rational,
            ScalarMode::Symbolic if self.file.is_q_free() => Scalars::Rational,
            ScalarMode::Symbolic => Scalars::RatFunc,
        }
    }

    pub fn build<F: HasParameter>(&self) -> Result<AlgebraSpec<F>, UsageError> {
        self.file.build(&self.mode, &self.text).map_err(|e| UsageError(format!("{}:{e}", self.origin)))
    }
}

pub fn mode_from_flags(q: Option<&str>, symbolic: bool, default: ScalarMode) -> ScalarMode {
    match (q, symbolic) {
        (Some(q), _) => ScalarMode::Numeric { q: q.to_string() },
        (None, true) => ScalarMode::Symbolic,
        (None, false) => default,
    }
}

pub fn check_n(n: usize, heavy: bool) -> Result<(), UsageError> {
    match n {
        2 => Ok(()),
        3 if !heavy => Ok(()),
        3 => Err(UsageError(
            "N = 3 is limited to the R, Ψ, D and axiom checks (use `qlie uqgl --n 3` or `qlie validate`); \
             the BRST pipeline runs at N = 2"
                .into(),
        )),
        _ => Err(UsageError(format!(
            "U_q(gl(N)) is supported for N = 2 (all checks) and N = 3 (data checks only); got N = {n}"
        ))),
    }
}

/// The spec file of a preset. `heavy` marks commands that run the BRST pipeline.
pub fn preset_file(name: &str, n: Option<usize>, q: Option<&str>, symbolic: bool, heavy: bool) -> Result<SpecFile, UsageError> {
    if name == "uq-gl" {
        let n = n.unwrap_or(2);
        check_n(n, heavy)?;
        let mode = mode_from_flags(q, symbolic, ScalarMode::Numeric { q: UQ_GL_DEFAULT_Q.into() });
        return Ok(match mode {
            ScalarMode::Symbolic => SpecFile::from_spec(&GlqData::<RatFunc>::build(n, mode)?.spec),
            numeric => SpecFile::from_spec(&GlqData::<Rational>::build(n, numeric)?.spec),
        });
    }
    if n.is_some() {
        return Err(UsageError(format!("--n applies to the uq-gl preset only, not {name}")));
    }
    if !PRESET_NAMES.contains(&name) && name != "gl11" {
        return Err(UsageError(format!("unknown preset {name:?}; available: {}", PRESET_NAMES.join(", "))));
    }
    let mode = mode_from_flags(q, symbolic, ScalarMode::Symbolic);
    let spec: AlgebraSpec<Rational> = presets::classical(name, mode)?;
    Ok(SpecFile::from_spec(&spec))
}

pub fn load(args: &SourceArgs, heavy: bool) -> Result<Algebra, UsageError> {
    if let Some(path) = &args.input {
        if args.n.is_some() || args.q.is_some() || args.symbolic {
            return Err(UsageError("--n, --q and --symbolic apply to presets; a spec file declares its own scalars".into()));
        }
        let text = read(path)?;
        let file = SpecFile::parse(&text).map_err(|e| UsageError(format!("{}:{e}", path.display())))?;
        let mode = file.mode().map_err(|e| UsageError(format!("{}:{e}", path.display())))?;
        return Ok(Algebra { origin: path.display().to_string(), file, text, mode });
    }
    let name = args.preset.as_deref().ok_or_else(|| UsageError("give --input or --preset".into()))?;
    let file = preset_file(name, args.n, args.q.as_deref(), args.symbolic, heavy)?;
    let mode = file.mode()?;
    Ok(Algebra { origin: format!("preset {name}"), text: file.to_json(), file, mode })
}

pub fn read(path: &Path) -> Result<String, UsageError> {
    std::fs::read_to_string(path).map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))
}

pub fn write(path: &Path, text: &str) -> Result<(), UsageError> {
    std::fs::write(path, text).map_err(|e| UsageError(format!("cannot write {}: {e}", path.display())))
}
