//! Region-exclusion checks.
//!
//! A parameter box is described by its midpoint and half-width; a check
//! decides whether a stored witness rules out every Rupert solution inside
//! the box. Each check exists twice: a floating-point form that the builder
//! uses to search for witnesses, and an exact rational form that the verifier
//! uses to accept them. The rational forms never consult floating point, and
//! their thresholds carry the kernel error budget `kappa`, so a rational
//! "excluded" is a proof while a float "excluded" is only a good guess.

mod float;
mod rational;

pub use float::{
    condition_a_float, condition_b_float, global_check_float, global_quantities_float,
    local_check_float, spanning_float, FLOAT_SAFETY,
};
pub use rational::{
    condition_a, condition_b, congruent_exact, eps_kappa_spanning, global_check_rational,
    local_check_rational, ConditionB, VertexSet,
};

use crate::certtree::Region5;
use crate::exact::{rat_to_f64, Rat};

/// Midpoint and half-width of a parameter box.
///
/// `epsilon` is the single scalar half-width: for anisotropic boxes it is the
/// maximum half-width over the five coordinates, which is conservative for
/// the narrower ones.
#[derive(Clone, Debug, PartialEq)]
pub struct RegionCenter<T> {
    pub theta1: T,
    pub phi1: T,
    pub theta2: T,
    pub phi2: T,
    pub alpha: T,
    pub epsilon: T,
}

impl<T> RegionCenter<T> {
    pub fn new(mid: [T; 5], epsilon: T) -> Self {
        let [theta1, phi1, theta2, phi2, alpha] = mid;
        RegionCenter { theta1, phi1, theta2, phi2, alpha, epsilon }
    }

    pub fn mids(&self) -> [&T; 5] {
        [&self.theta1, &self.phi1, &self.theta2, &self.phi2, &self.alpha]
    }
}

impl RegionCenter<Rat> {
    pub fn from_region(region: &Region5) -> Self {
        RegionCenter::new(region.center_rat(), region.eps_rat())
    }

    pub fn from_region_n(region: &Region5, denom: i64) -> Self {
        RegionCenter::new(region.center_rat_n(denom), region.eps_rat_n(denom))
    }

    pub fn to_f64(&self) -> RegionCenter<f64> {
        RegionCenter::new(
            [
                rat_to_f64(&self.theta1),
                rat_to_f64(&self.phi1),
                rat_to_f64(&self.theta2),
                rat_to_f64(&self.phi2),
                rat_to_f64(&self.alpha),
            ],
            rat_to_f64(&self.epsilon),
        )
    }
}

impl RegionCenter<f64> {
    pub fn from_region(region: &Region5) -> Self {
        RegionCenter::new(region.center_f64(), region.eps_f64())
    }

    pub fn from_region_n(region: &Region5, denom: i64) -> Self {
        RegionCenter::new(region.center_f64_n(denom), region.eps_f64_n(denom))
    }
}

/// Which witness triple a local diagnostic refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    P,
    Q,
}

/// Verdict of a region check. `Inconclusive` never claims a solution exists;
/// it only says this witness does not settle the region.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exclusion {
    Excluded,
    Inconclusive(Inconclusive),
}

impl Exclusion {
    pub fn is_excluded(&self) -> bool {
        matches!(self, Exclusion::Excluded)
    }
}

/// The first check step that failed, in pipeline order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Inconclusive {
    /// Global check: G did not strictly dominate `max_P H_P`.
    GlobalGap,
    /// The two witness triples have different Gram matrices, or the Q triple
    /// is degenerate (zero determinant).
    NotCongruent,
    /// A viewing-direction scalar product missed its lower bound.
    ConditionA(Side),
    /// A cyclic spanning product missed its threshold.
    NotSpanning(Side),
    /// `min_i norm_lower(M2 Qi)` failed to clear `r` plus slack: the stored
    /// radius is too large for this region.
    MinNormBelowR,
    /// The angular separation inequality failed for witness point `i`
    /// against vertex `j`.
    ConditionB { i: u8, j: u32 },
}

impl std::fmt::Display for Inconclusive {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Inconclusive::GlobalGap => write!(f, "G does not dominate max H_P"),
            Inconclusive::NotCongruent => write!(f, "witness triples not congruent"),
            Inconclusive::ConditionA(s) => write!(f, "condition A failed on the {s:?} triple"),
            Inconclusive::NotSpanning(s) => write!(f, "{s:?} triple is not spanning"),
            Inconclusive::MinNormBelowR => write!(f, "projected witness norms do not clear r"),
            Inconclusive::ConditionB { i, j } => {
                write!(f, "condition B failed at witness point {i} vs vertex {j}")
            }
        }
    }
}

/// Malformed input to a rational check (as opposed to a check that ran and
/// came back inconclusive).
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CheckError {
    #[error("witness w is not a unit vector: wx^2 + wy^2 != wden^2")]
    WitnessNotUnit,
    #[error("region midpoint outside the kernel domain [-4, 4]")]
    CenterOutOfDomain,
    #[error("region half-width must be positive")]
    NonPositiveEpsilon,
    #[error("vertex index {index} out of range for {n} vertices")]
    VertexIndex { index: u32, n: usize },
    #[error("witness radius r must be positive")]
    NonPositiveR,
    #[error("sigma_Q must be 0 or 1, got {0}")]
    BadSigma(u8),
}
