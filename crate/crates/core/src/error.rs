use thiserror::Error;

/// Every failure the engine can report. None of these are guessed around:
/// callers either retry with more resources or surface them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("truncation exhausted: every coefficient below order {order} vanishes")]
    TruncationExhausted { order: usize },
    #[error("polynomial is not y-regular")]
    NotYRegular,
    #[error("singular matrix")]
    SingularMatrix,
    #[error("no generic shear found after {attempts} attempts")]
    ShearExhausted { attempts: usize },
    #[error("singularity is not isolated: gcd(P, Q) = {gcd}")]
    NonIsolated { gcd: String },
    #[error("jet oracle did not stabilize below degree bound {bound}")]
    BoundTooSmall { bound: usize },
    #[error("nested algebraic extension required by minimal polynomial {polynomial}")]
    UnsupportedExtension { polynomial: String },
    #[error("reduction exceeded depth {depth}")]
    DepthExceeded { depth: usize },
    #[error("singularity is not simple")]
    NotSimple,
    #[error("singularity is not a saddle-node")]
    NotSaddleNode,
    #[error("branch is invariant by the foliation")]
    InvariantBranch,
    #[error("the radial foliation has no generic polar curve")]
    RadialFoliation,
    #[error("no generic polar found: {}", reasons.join("; "))]
    GenericityExhausted { reasons: Vec<String> },
    #[error("cannot place {needed} curvettes on dicritical component D{component}")]
    InsufficientTracePoints { component: usize, needed: usize },
    #[error("object is not real")]
    NotReal,
    #[error("reality of separatrix {id} cannot be decided at the current truncation")]
    UndecidedReality { id: usize },
    #[error("inconsistent certificate: {0}")]
    InconsistentCertificate(String),
    #[error("syntax error at {line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
}

impl Error {
    /// Module-qualified error code used in reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::TruncationExhausted { .. } => "numeric.TruncationExhausted",
            Error::NotYRegular => "numeric.NotYRegular",
            Error::SingularMatrix => "numeric.SingularMatrix",
            Error::UnsupportedExtension { .. } => "numeric.UnsupportedExtension",
            Error::ShearExhausted { .. } => "foliation.ShearExhausted",
            Error::NonIsolated { .. } => "foliation.NonIsolated",
            Error::BoundTooSmall { .. } => "foliation.BoundTooSmall",
            Error::NotSimple => "foliation.NotSimple",
            Error::NotSaddleNode => "foliation.NotSaddleNode",
            Error::DepthExceeded { .. } => "blowup.DepthExceeded",
            Error::InsufficientTracePoints { .. } => "separatrix.InsufficientTracePoints",
            Error::InvariantBranch => "polar.InvariantBranch",
            Error::RadialFoliation => "polar.RadialFoliation",
            Error::GenericityExhausted { .. } => "polar.GenericityExhausted",
            Error::NotReal => "real.NotReal",
            Error::UndecidedReality { .. } => "real.UndecidedReality",
            Error::InconsistentCertificate(_) => "real.InconsistentCertificate",
            Error::Syntax { .. } => "report.SyntaxError",
        }
    }

    /// Resource-type failures map to exit code 3 in the CLI.
    pub fn is_resource_failure(&self) -> bool {
        matches!(
            self,
            Error::TruncationExhausted { .. }
                | Error::ShearExhausted { .. }
                | Error::BoundTooSmall { .. }
                | Error::DepthExceeded { .. }
                | Error::UnsupportedExtension { .. }
                | Error::GenericityExhausted { .. }
                | Error::UndecidedReality { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
