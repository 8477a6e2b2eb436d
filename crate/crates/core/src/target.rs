//! APL budgets: a multiplicative stretch, an absolute bound, or an additive
//! increment over the input graph's APL. All three resolve to one exact bound.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::graph::{apl, Graph, GraphError};
use crate::rational::{format_fraction, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TargetError {
    #[error("stretch must be >= 1, got {0}")]
    StretchBelowOne(String),
    #[error("increment must be > 0, got {0}")]
    NonPositiveIncrement(String),
    #[error("absolute APL bound must be > 0, got {0}")]
    NonPositiveBound(String),
    #[error("APL bound {bound} is below the input graph's APL {base}")]
    Infeasible { bound: String, base: String },
    #[error("input graph is disconnected; its APL is infinite")]
    DisconnectedInput,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpannerTarget {
    /// `bound = t * apl(G)`
    Stretch(Rational),
    /// `bound = C`
    Absolute(Rational),
    /// `bound = apl(G) + delta`
    Increment(Rational),
}

impl SpannerTarget {
    pub fn stretch(t: Rational) -> Result<Self, TargetError> {
        if t < Rational::one() {
            return Err(TargetError::StretchBelowOne(format_fraction(&t)));
        }
        Ok(Self::Stretch(t))
    }

    pub fn absolute(c: Rational) -> Result<Self, TargetError> {
        if c <= Rational::zero() {
            return Err(TargetError::NonPositiveBound(format_fraction(&c)));
        }
        Ok(Self::Absolute(c))
    }

    pub fn increment(delta: Rational) -> Result<Self, TargetError> {
        if delta <= Rational::zero() {
            return Err(TargetError::NonPositiveIncrement(format_fraction(&delta)));
        }
        Ok(Self::Increment(delta))
    }

    pub fn mode(&self) -> &'static str {
        match self {
            Self::Stretch(_) => "stretch",
            Self::Absolute(_) => "absolute",
            Self::Increment(_) => "increment",
        }
    }

    pub fn parameter(&self) -> Rational {
        match *self {
            Self::Stretch(v) | Self::Absolute(v) | Self::Increment(v) => v,
        }
    }

    /// Resolves against a known base APL; fails when the bound is below it.
    pub fn resolve(&self, base_apl: Rational) -> Result<ResolvedTarget, TargetError> {
        let bound = match *self {
            Self::Stretch(t) => t * base_apl,
            Self::Absolute(c) => c,
            Self::Increment(delta) => base_apl + delta,
        };
        if bound < base_apl {
            return Err(TargetError::Infeasible {
                bound: format_fraction(&bound),
                base: format_fraction(&base_apl),
            });
        }
        Ok(ResolvedTarget { target: *self, base_apl, bound })
    }

    /// Computes `apl(g)` and resolves against it.
    pub fn resolve_for(&self, g: &Graph) -> Result<ResolvedTarget, TargetError> {
        let base = apl(g)?.value().ok_or(TargetError::DisconnectedInput)?;
        self.resolve(base)
    }
}

impl fmt::Display for SpannerTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.mode(), format_fraction(&self.parameter()))
    }
}

/// A target together with the exact bound it resolved to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResolvedTarget {
    pub target: SpannerTarget,
    pub base_apl: Rational,
    pub bound: Rational,
}

impl ResolvedTarget {
    /// `bound / apl(G)`, the equivalent multiplicative stretch.
    pub fn stretch(&self) -> Rational {
        self.bound / self.base_apl
    }

    /// Bound on the unordered-pair distance sum: `bound * n (n - 1) / 2`.
    pub fn distance_sum_limit(&self, node_count: usize) -> Rational {
        let pairs = (node_count * node_count.saturating_sub(1) / 2) as i128;
        self.bound * Rational::from_integer(pairs)
    }

    /// `sum <= bound * pairs` compared exactly.
    pub fn admits_distance_sum(&self, sum: u64, node_count: usize) -> bool {
        Rational::from_integer(sum as i128) <= self.distance_sum_limit(node_count)
    }
}
