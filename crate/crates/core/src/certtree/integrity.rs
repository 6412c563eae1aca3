//! Structural integrity of certificate trees, checked in one streaming pass.
//!
//! Establishes, with exact integer arithmetic only, that (i) each interior
//! node's children cover its region, (ii) IDs are consecutive and children
//! sit after their parent, (iii) the root covers the requested target box,
//! and (iv) every row is shaped correctly for its node type. Witness
//! *validity* (the actual theorem inequalities) is the verifier's job, not
//! handled here.

use std::collections::BTreeMap;

use super::node::{CertNode, NodeBody, TreeStats};
use super::region::Region5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// node 0 missing or IDs out of order
    IdNotConsecutive { expected: u64, found: u64 },
    /// children regions do not cover the parent region
    ChildCoverage { parent_id: u64 },
    /// interior node with malformed split metadata
    BadSplitShape { id: u64, reason: String },
    /// leaf carries an out-of-range vertex index
    IndexOutOfRange { id: u64 },
    /// local leaf with r <= 0
    NonPositiveR { id: u64 },
    /// local leaf with sigma_Q outside {0, 1}
    BadSigma { id: u64 },
    /// a region with min > max
    InvalidRegion { id: u64 },
    /// node is neither the root nor inside any parent's child range
    OrphanNode { id: u64 },
    /// stream ended before this parent's children all appeared
    MissingChildren { parent_id: u64 },
    /// root region does not contain the target box
    RootDoesNotCoverTarget,
    /// empty input
    RootMissing,
}

#[derive(Debug, Default)]
pub struct IntegrityReport {
    pub violations: Vec<Violation>,
    pub stats: TreeStats,
    /// true if more violations occurred than were recorded
    pub truncated: bool,
}

impl IntegrityReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && !self.truncated
    }
}

const MAX_RECORDED: usize = 1000;

struct Pending {
    parent_id: u64,
    region: Region5,
    split: u8,
    nr_children: u32,
    kids: Vec<Region5>,
}

pub struct IntegrityChecker {
    root_target: Option<Region5>,
    n_vertices: Option<u32>,
    /// keyed by first-child ID; children arrive in ID order so range lookup
    /// finds the owning parent in O(log #pending)
    pending: BTreeMap<u64, Pending>,
    next_id: u64,
    report: IntegrityReport,
}

impl IntegrityChecker {
    pub fn new(root_target: Option<Region5>, n_vertices: Option<u32>) -> Self {
        IntegrityChecker {
            root_target,
            n_vertices,
            pending: BTreeMap::new(),
            next_id: 0,
            report: IntegrityReport::default(),
        }
    }

    fn violate(&mut self, v: Violation) {
        if self.report.violations.len() < MAX_RECORDED {
            self.report.violations.push(v);
        } else {
            self.report.truncated = true;
        }
    }

    pub fn absorb(&mut self, node: &CertNode) {
        self.report.stats.absorb(node);
        if node.id != self.next_id {
            self.violate(Violation::IdNotConsecutive { expected: self.next_id, found: node.id });
        }
        self.next_id = node.id + 1;
        if !node.region.is_valid() {
            self.violate(Violation::InvalidRegion { id: node.id });
        }

        if node.id == 0 {
            if let Some(t) = self.root_target {
                if !node.region.contains(&t) {
                    self.violate(Violation::RootDoesNotCoverTarget);
                }
            }
        } else {
            // Attach to the owning pending parent, if any.
            let owner = self
                .pending
                .range(..=node.id)
                .next_back()
                .map(|(&first, p)| (first, first + p.nr_children as u64))
                .filter(|&(first, end)| first <= node.id && node.id < end)
                .map(|(first, _)| first);
            match owner {
                None => self.violate(Violation::OrphanNode { id: node.id }),
                Some(first) => {
                    let done = {
                        let p = self.pending.get_mut(&first).unwrap();
                        p.kids.push(node.region);
                        p.kids.len() as u32 == p.nr_children
                    };
                    if done {
                        let p = self.pending.remove(&first).unwrap();
                        if !children_cover(&p.region, p.split, &p.kids) {
                            self.violate(Violation::ChildCoverage { parent_id: p.parent_id });
                        }
                    }
                }
            }
        }

        match &node.body {
            NodeBody::Split { nr_children, id_first_child, split } => {
                let bad = |reason: &str| Violation::BadSplitShape {
                    id: node.id,
                    reason: reason.to_string(),
                };
                if !(1..=6).contains(split) {
                    let v = bad("split code outside 1..=6");
                    self.violate(v);
                } else if *split == 6 && *nr_children != 32 {
                    let v = bad("split=6 requires exactly 32 children");
                    self.violate(v);
                } else if *nr_children == 0 {
                    let v = bad("no children");
                    self.violate(v);
                } else if *id_first_child <= node.id {
                    let v = bad("first child must come after the parent");
                    self.violate(v);
                } else {
                    self.pending.insert(
                        *id_first_child,
                        Pending {
                            parent_id: node.id,
                            region: node.region,
                            split: *split,
                            nr_children: *nr_children,
                            kids: Vec::with_capacity(*nr_children as usize),
                        },
                    );
                }
            }
            NodeBody::Global(g) => {
                if let Some(n) = self.n_vertices {
                    if g.s_index >= n {
                        self.violate(Violation::IndexOutOfRange { id: node.id });
                    }
                }
            }
            NodeBody::Local(l) => {
                if l.r_numer <= 0 {
                    self.violate(Violation::NonPositiveR { id: node.id });
                }
                if l.sigma_q > 1 {
                    self.violate(Violation::BadSigma { id: node.id });
                }
                if let Some(n) = self.n_vertices {
                    if l.p.iter().chain(l.q.iter()).any(|&i| i >= n) {
                        self.violate(Violation::IndexOutOfRange { id: node.id });
                    }
                }
            }
        }
    }

    pub fn finish(mut self) -> IntegrityReport {
        if self.next_id == 0 {
            self.violate(Violation::RootMissing);
        }
        let unfinished: Vec<u64> = self.pending.values().map(|p| p.parent_id).collect();
        for parent_id in unfinished {
            self.violate(Violation::MissingChildren { parent_id });
        }
        self.report
    }
}

/// Exact coverage test: do `kids` cover `parent` under the split semantics?
fn children_cover(parent: &Region5, split: u8, kids: &[Region5]) -> bool {
    match split {
        1..=5 => {
            let dim = (split - 1) as usize;
            // In non-split dimensions every child must span the parent.
            for k in kids {
                for d in 0..5 {
                    if d == dim {
                        continue;
                    }
                    if k.bounds[d].0 > parent.bounds[d].0 || k.bounds[d].1 < parent.bounds[d].1 {
                        return false;
                    }
                }
            }
            let ivals: Vec<(i64, i64)> = kids.iter().map(|k| k.bounds[dim]).collect();
            union_covers(parent.bounds[dim], &ivals)
        }
        6 => {
            // Per dimension, gather the distinct child intervals; their union
            // must cover the parent and every combination of them must be
            // covered by some child, which together imply full coverage.
            let mut distinct: [Vec<(i64, i64)>; 5] = Default::default();
            for d in 0..5 {
                for k in kids {
                    if !distinct[d].contains(&k.bounds[d]) {
                        distinct[d].push(k.bounds[d]);
                    }
                }
                if !union_covers(parent.bounds[d], &distinct[d]) {
                    return false;
                }
            }
            let mut combo = [0usize; 5];
            loop {
                let boxed = Region5::new(std::array::from_fn(|d| distinct[d][combo[d]]));
                if !kids.iter().any(|k| k.contains(&boxed)) {
                    return false;
                }
                // mixed-radix increment
                let mut d = 4;
                loop {
                    combo[d] += 1;
                    if combo[d] < distinct[d].len() {
                        break;
                    }
                    combo[d] = 0;
                    if d == 0 {
                        return true;
                    }
                    d -= 1;
                }
            }
        }
        _ => false,
    }
}

/// True if the union of `ivals` contains `[target.0, target.1]`.
fn union_covers(target: (i64, i64), ivals: &[(i64, i64)]) -> bool {
    let mut sorted = ivals.to_vec();
    sorted.sort_unstable();
    let mut covered = target.0;
    for (s, e) in sorted {
        if s > covered {
            return false;
        }
        covered = covered.max(e);
        if covered >= target.1 {
            return true;
        }
    }
    covered >= target.1
}

/// Runs the whole pipeline over an iterator of nodes.
pub fn check_integrity<I: IntoIterator<Item = CertNode>>(
    nodes: I,
    root_target: Option<Region5>,
    n_vertices: Option<u32>,
) -> IntegrityReport {
    let mut c = IntegrityChecker::new(root_target, n_vertices);
    for n in nodes {
        c.absorb(&n);
    }
    c.finish()
}
