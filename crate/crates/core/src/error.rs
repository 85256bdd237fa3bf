use thiserror::Error;

/// Errors produced by graph construction, enumeration and the CLI layer.
///
/// Each variant maps to a process exit code through [`Error::exit_code`]:
/// input/parse problems exit 1, mathematical inconsistencies exit 2, and
/// refused oversize enumerations exit 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("curve JSON: {0}")]
    CurveJson(String),

    #[error("unknown preset '{0}'")]
    UnknownPreset(String),

    #[error("invalid class spec '{spec}': {reason}")]
    ClassSpec { spec: String, reason: String },

    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },

    #[error("modulus must be at least 2, got {0}")]
    BadModulus(u64),

    #[error("residue out of range: {value} is not in [0, {r})")]
    ResidueRange { value: i64, r: u64 },

    #[error("class has {got} residues but the graph has {expected} vertices")]
    ClassLength { got: usize, expected: usize },

    #[error("class is inconsistent: residues sum to {sum} (mod {r}), expected 0")]
    InconsistentClass { sum: u64, r: u64 },

    #[error(
        "spin divisibility fails: l*(2g-2) + markings = {value} leaves residue {residue} mod {r}"
    )]
    SpinDivisibility { value: i64, residue: u64, r: u64 },

    #[error("operation needs genus >= 2, graph has genus {genus}")]
    GenusTooSmall { genus: u64 },

    #[error("multidegree is attached to a different graph")]
    GraphMismatch,

    #[error("multidegree has {got} entries, model has {expected} vertices")]
    DegreeLength { got: usize, expected: usize },

    #[error("edge index {index} out of range (graph has {edges} edges)")]
    EdgeRange { index: usize, edges: usize },

    #[error("size gate: {what} needs {size}, limit is {limit}")]
    SizeGate {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("riass parameters out of range: {0}")]
    RiassRange(String),
}

impl Error {
    /// Exit code for the CLI: 1 = parse error, 2 = math inconsistency,
    /// 3 = size gate.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidCurve(_)
            | Error::CurveJson(_)
            | Error::UnknownPreset(_)
            | Error::ClassSpec { .. }
            | Error::ClassLength { .. }
            | Error::ResidueRange { .. }
            | Error::BadModulus(_)
            | Error::RiassRange(_) => 1,
            Error::Disconnected { .. }
            | Error::InconsistentClass { .. }
            | Error::SpinDivisibility { .. }
            | Error::GenusTooSmall { .. }
            | Error::GraphMismatch
            | Error::DegreeLength { .. }
            | Error::EdgeRange { .. } => 2,
            Error::SizeGate { .. } => 3,
        }
    }
}
