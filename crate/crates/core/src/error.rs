use std::fmt;

use thiserror::Error;

/// A named assumption that failed, with the offending facet indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssumptionFailure {
    pub assumption: &'static str,
    pub facets: Vec<usize>,
}

impl fmt::Display for AssumptionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.facets.is_empty() {
            write!(f, "{}", self.assumption)
        } else {
            let ids: Vec<String> = self.facets.iter().map(ToString::to_string).collect();
            write!(f, "{} (facets {})", self.assumption, ids.join(", "))
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("degenerate support set")]
    DegenerateSupport,
    #[error("zero direction")]
    ZeroDirection,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("wrong arity: expected {expected} polytopes, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("overdetermined tuple")]
    Overdetermined,
    #[error("not weakly essential")]
    NotWeaklyEssential,
    #[error("projection degenerate")]
    ProjectionDegenerate,
    #[error("infinite index on non-horizontal facet")]
    InfiniteIndex,
    #[error("invalid index sequence: {0}")]
    InvalidSequence(String),
    #[error("identical elements")]
    IdenticalElements,
    #[error("vertically degenerate support")]
    VerticallyDegenerate,
    #[error("assumption violated: {}", join(.failures))]
    AssumptionViolated { failures: Vec<AssumptionFailure> },
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

fn join(failures: &[AssumptionFailure]) -> String {
    failures
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

impl Error {
    /// True for failures that indicate a bug or an inconsistent formula
    /// evaluation rather than bad input.
    pub fn is_consistency(&self) -> bool {
        matches!(self, Self::Consistency(_))
    }

    pub fn is_assumption(&self) -> bool {
        matches!(self, Self::AssumptionViolated { .. } | Self::InfiniteIndex)
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
