//! Exact certificate verification: the trusted half of the pipeline.
//!
//! A tree is a *proof* that no Rupert solution exists in its root region iff
//! the structural integrity pass is clean and every leaf's witness survives
//! the rational theorem check. Nothing from the tree is trusted: epsilon is
//! recomputed from each stored region, delta from each witness, and the
//! vertex truncation from the solid itself.
//!
//! This module deliberately touches none of the float machinery the builder
//! searches with; its only shared ground is the node and region types.

use rayon::prelude::*;

use crate::certtree::{
    CertNode, CodecError, IntegrityChecker, IntegrityReport, NodeBody, Region5,
};
use crate::exact::Rat;
use crate::exclusion::{
    global_check_rational, local_check_rational, CheckError, Exclusion, Inconclusive,
    RegionCenter, Side, VertexSet,
};
use crate::solids::{Polyhedron, SolidError};

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    /// Grid denominator the region bounds are interpreted over.
    pub denom: i64,
    /// Decimal digits kept when truncating vertex coordinates.
    pub trunc_digits: u32,
    /// Check only every k-th leaf. The result is then a spot check, never a
    /// proof, and the report says so.
    pub sample: Option<u64>,
    /// Leaves per parallel batch.
    pub batch: usize,
    /// Report progress on standard error.
    pub progress: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            denom: crate::certtree::REGION_DENOM,
            trunc_digits: 16,
            sample: None,
            batch: 512,
            progress: false,
        }
    }
}

/// Input-level trouble; mathematically failed leaves are *not* errors, they
/// land in the report.
#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("decode: {0}")]
    Decode(#[from] CodecError),
    #[error("solid: {0}")]
    Solid(#[from] SolidError),
}

/// Why one leaf did not verify.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnostic {
    /// The witness is malformed (bad unit vector, index, domain, ...).
    Malformed(CheckError),
    /// Well-formed, but a theorem step refused it.
    NotExcluded(Inconclusive),
    /// The node is an interior node, not a leaf.
    NotALeaf,
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Diagnostic::Malformed(e) => {
                let code = match e {
                    CheckError::WitnessNotUnit => "witness-not-unit".into(),
                    CheckError::CenterOutOfDomain => "center-out-of-domain".into(),
                    CheckError::NonPositiveEpsilon => "non-positive-epsilon".into(),
                    CheckError::VertexIndex { index, n } => {
                        format!("vertex-index-{index}-of-{n}")
                    }
                    CheckError::NonPositiveR => "non-positive-r".into(),
                    CheckError::BadSigma(s) => format!("bad-sigma-{s}"),
                };
                write!(f, "{code}")
            }
            Diagnostic::NotExcluded(k) => match k {
                Inconclusive::GlobalGap => write!(f, "global-gap"),
                Inconclusive::NotCongruent => write!(f, "not-congruent"),
                Inconclusive::ConditionA(Side::P) => write!(f, "condition-a-p"),
                Inconclusive::ConditionA(Side::Q) => write!(f, "condition-a-q"),
                Inconclusive::NotSpanning(Side::P) => write!(f, "not-spanning-p"),
                Inconclusive::NotSpanning(Side::Q) => write!(f, "not-spanning-q"),
                Inconclusive::MinNormBelowR => write!(f, "min-norm-below-r"),
                Inconclusive::ConditionB { i, j } => write!(f, "condition-b-{i}-{j}"),
            },
            Diagnostic::NotALeaf => write!(f, "not-a-leaf"),
        }
    }
}

/// Outcome of a whole-tree verification.
#[derive(Debug)]
pub struct VerificationReport {
    pub integrity: IntegrityReport,
    /// Offending leaf IDs with the step that refused them, in ID order.
    pub failures: Vec<(u64, Diagnostic)>,
    /// More failures occurred than were recorded.
    pub failures_truncated: bool,
    pub leaves_checked: u64,
    /// Leaf coverage was partial (sampling).
    pub sampled: bool,
}

const MAX_FAILURES: usize = 1000;

impl VerificationReport {
    /// Everything that was checked is in order.
    pub fn pass(&self) -> bool {
        self.integrity.is_clean() && self.failures.is_empty() && !self.failures_truncated
    }

    /// A clean pass over *every* leaf: the covered region admits no Rupert
    /// solution.
    pub fn is_proof(&self) -> bool {
        self.pass() && !self.sampled
    }
}

/// Exact check of one leaf against the truncated vertex set. `denom` is the
/// grid denominator for the stored region; midpoints and epsilon are derived
/// from it here and nowhere else.
pub fn verify_leaf(
    solid: &Polyhedron,
    verts: &VertexSet,
    node: &CertNode,
    denom: i64,
) -> Result<(), Diagnostic> {
    let c = RegionCenter::<Rat>::from_region_n(&node.region, denom);
    let outcome = match &node.body {
        NodeBody::Global(w) => global_check_rational(verts, &c, w),
        NodeBody::Local(w) => local_check_rational(solid, verts, &c, w),
        NodeBody::Split { .. } => return Err(Diagnostic::NotALeaf),
    };
    match outcome {
        Ok(Exclusion::Excluded) => Ok(()),
        Ok(Exclusion::Inconclusive(k)) => Err(Diagnostic::NotExcluded(k)),
        Err(e) => Err(Diagnostic::Malformed(e)),
    }
}

/// The truncated vertex set the verifier judges every leaf against.
pub fn truncated_vertex_set(
    solid: &Polyhedron,
    digits: u32,
) -> Result<VertexSet, SolidError> {
    Ok(VertexSet::new(solid.truncated_vertices(digits)?))
}

/// Verifies a node stream: one sequential integrity pass, leaf checks in
/// parallel batches whose results are merged back in ID order. `on_leaf` is
/// called for every checked leaf, in ID order, with `Ok` or its diagnostic;
/// use it for line-delimited reporting.
pub fn verify_tree_with<I, F>(
    solid: &Polyhedron,
    nodes: I,
    root_target: Option<Region5>,
    config: &VerifyConfig,
    mut on_leaf: F,
) -> Result<VerificationReport, VerifyError>
where
    I: IntoIterator<Item = Result<CertNode, CodecError>>,
    F: FnMut(&CertNode, &Result<(), Diagnostic>) -> std::io::Result<()>,
{
    let verts = truncated_vertex_set(solid, config.trunc_digits)?;
    let mut integrity = IntegrityChecker::new(root_target, Some(solid.n_vertices() as u32));
    let mut report = VerificationReport {
        integrity: IntegrityReport::default(),
        failures: Vec::new(),
        failures_truncated: false,
        leaves_checked: 0,
        sampled: config.sample.is_some(),
    };
    let stride = config.sample.unwrap_or(1).max(1);
    let mut leaf_ordinal: u64 = 0;
    let mut seen: u64 = 0;
    let mut batch: Vec<CertNode> = Vec::with_capacity(config.batch);

    let flush = |batch: &mut Vec<CertNode>,
                     report: &mut VerificationReport,
                     on_leaf: &mut F|
     -> Result<(), VerifyError> {
        let verdicts: Vec<Result<(), Diagnostic>> = batch
            .par_iter()
            .map(|n| verify_leaf(solid, &verts, n, config.denom))
            .collect();
        for (node, verdict) in batch.iter().zip(&verdicts) {
            report.leaves_checked += 1;
            on_leaf(node, verdict)?;
            if let Err(d) = verdict {
                if report.failures.len() < MAX_FAILURES {
                    report.failures.push((node.id, d.clone()));
                } else {
                    report.failures_truncated = true;
                }
            }
        }
        batch.clear();
        Ok(())
    };

    for item in nodes {
        let node = item?;
        integrity.absorb(&node);
        seen += 1;
        if config.progress && seen % 100_000 == 0 {
            eprintln!("verified through node {} ({} leaves so far)", node.id, leaf_ordinal);
        }
        if !matches!(node.body, NodeBody::Split { .. }) {
            let take = leaf_ordinal % stride == 0;
            leaf_ordinal += 1;
            if take {
                batch.push(node);
                if batch.len() >= config.batch {
                    flush(&mut batch, &mut report, &mut on_leaf)?;
                }
            }
        }
    }
    flush(&mut batch, &mut report, &mut on_leaf)?;
    report.integrity = integrity.finish();
    Ok(report)
}

/// [`verify_tree_with`] without per-leaf reporting.
pub fn verify_tree<I>(
    solid: &Polyhedron,
    nodes: I,
    root_target: Option<Region5>,
    config: &VerifyConfig,
) -> Result<VerificationReport, VerifyError>
where
    I: IntoIterator<Item = Result<CertNode, CodecError>>,
{
    verify_tree_with(solid, nodes, root_target, config, |_, _| Ok(()))
}
