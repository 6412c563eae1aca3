//! Five-dimensional parameter boxes with integer endpoints.
//!
//! Every interval bound in a certificate tree is an integer numerator over
//! the fixed denominator `N = 15_360_000`, so region geometry (splitting,
//! containment, coverage) is exact integer arithmetic and survives
//! serialization bit-for-bit.

use crate::exact::{rat_int, Rat};

/// Global denominator for all region bounds.
pub const REGION_DENOM: i64 = 15_360_000;

/// Dimension order used throughout: theta1, phi1, theta2, phi2, alpha.
pub const DIM_NAMES: [&str; 5] = ["theta1", "phi1", "theta2", "phi2", "alpha"];

/// A box in (theta1, phi1, theta2, phi2, alpha)-space; `bounds[d] = (min,
/// max)` are numerators over [`REGION_DENOM`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Region5 {
    pub bounds: [(i64, i64); 5],
}

impl Region5 {
    pub fn new(bounds: [(i64, i64); 5]) -> Self {
        Region5 { bounds }
    }

    /// True if `min <= max` in every coordinate.
    pub fn is_valid(&self) -> bool {
        self.bounds.iter().all(|&(lo, hi)| lo <= hi)
    }

    pub fn width(&self, dim: usize) -> i64 {
        self.bounds[dim].1 - self.bounds[dim].0
    }

    pub fn max_width(&self) -> i64 {
        (0..5).map(|d| self.width(d)).max().unwrap()
    }

    /// Index of a widest dimension (ties broken toward lower index).
    pub fn widest_dim(&self) -> usize {
        (0..5).max_by_key(|&d| (self.width(d), std::cmp::Reverse(d))).unwrap()
    }

    pub fn contains(&self, other: &Region5) -> bool {
        self.bounds
            .iter()
            .zip(other.bounds.iter())
            .all(|(&(slo, shi), &(olo, ohi))| slo <= olo && ohi <= shi)
    }

    /// Exact rational midpoints of the five intervals.
    pub fn center_rat(&self) -> [Rat; 5] {
        self.center_rat_n(REGION_DENOM)
    }

    /// Midpoints over an explicit grid denominator.
    pub fn center_rat_n(&self, denom: i64) -> [Rat; 5] {
        std::array::from_fn(|d| {
            let (lo, hi) = self.bounds[d];
            Rat::new((lo + hi).into(), (2 * denom).into())
        })
    }

    /// Exact half-width `eps = max_d (max_d - min_d) / (2N)`; the single
    /// scalar used by both theorems even for anisotropic boxes.
    pub fn eps_rat(&self) -> Rat {
        self.eps_rat_n(REGION_DENOM)
    }

    pub fn eps_rat_n(&self, denom: i64) -> Rat {
        Rat::new(self.max_width().into(), (2 * denom).into())
    }

    pub fn center_f64(&self) -> [f64; 5] {
        self.center_f64_n(REGION_DENOM)
    }

    pub fn center_f64_n(&self, denom: i64) -> [f64; 5] {
        std::array::from_fn(|d| {
            let (lo, hi) = self.bounds[d];
            (lo as f64 + hi as f64) / (2.0 * denom as f64)
        })
    }

    pub fn eps_f64(&self) -> f64 {
        self.eps_f64_n(REGION_DENOM)
    }

    pub fn eps_f64_n(&self, denom: i64) -> f64 {
        self.max_width() as f64 / (2.0 * denom as f64)
    }

    /// All five rational bounds lie in [-4, 4], the trig kernel domain.
    pub fn within_kernel_domain(&self) -> bool {
        self.within_kernel_domain_n(REGION_DENOM)
    }

    pub fn within_kernel_domain_n(&self, denom: i64) -> bool {
        let four = rat_int(4);
        self.bounds.iter().all(|&(lo, hi)| {
            let l = Rat::new(lo.into(), denom.into());
            let h = Rat::new(hi.into(), denom.into());
            -&four <= l && h <= four
        })
    }

    /// Splits dimension `dim` into `parts` contiguous sub-intervals with
    /// boundaries `min + floor(j*width/parts)`; exact equal parts when
    /// `parts` divides the width, and in every case the children tile the
    /// parent interval without gaps.
    pub fn split_dim(&self, dim: usize, parts: u32) -> Vec<Region5> {
        assert!(dim < 5 && parts >= 1);
        let (lo, hi) = self.bounds[dim];
        let w = (hi - lo) as i128;
        let boundary = |j: u32| lo + ((w * j as i128) / parts as i128) as i64;
        (0..parts)
            .map(|j| {
                let mut b = self.bounds;
                b[dim] = (boundary(j), if j + 1 == parts { hi } else { boundary(j + 1) });
                Region5 { bounds: b }
            })
            .collect()
    }

    /// Halves all five dimensions (split code 6): 32 children ordered
    /// lexicographically by (theta1, phi1, theta2, phi2, alpha) halves, low
    /// half before high half; midpoints round down.
    pub fn split_all(&self) -> Vec<Region5> {
        let halves: [[(i64, i64); 2]; 5] = std::array::from_fn(|d| {
            let (lo, hi) = self.bounds[d];
            let mid = lo + (hi - lo) / 2;
            [(lo, mid), (mid, hi)]
        });
        (0..32u32)
            .map(|mask| {
                let b = std::array::from_fn(|d| halves[d][((mask >> (4 - d)) & 1) as usize]);
                Region5 { bounds: b }
            })
            .collect()
    }
}
