//! Certificate-tree nodes.

use super::region::Region5;

/// Witness for a global-theorem leaf: vertex index `S` and an exact unit
/// vector `w = (wx, wy)/wden` with `wx^2 + wy^2 = wden^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GlobalWitness {
    pub s_index: u32,
    pub wx: i64,
    pub wy: i64,
    pub wden: i64,
}

/// Witness for a local-theorem leaf: two congruent vertex triples, the inner
/// radius `r = r_numer/1000`, and the sign bit for the Q-side (the P-side
/// sign is fixed to 0 by convention; the builder flips the triple instead).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalWitness {
    pub p: [u32; 3],
    pub q: [u32; 3],
    pub r_numer: i64,
    pub sigma_q: u8,
}

pub const R_DENOM: i64 = 1000;

/// Node payload by `nodeType`: 1 = global leaf, 2 = local leaf, 3 = split.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeBody {
    Global(GlobalWitness),
    Local(LocalWitness),
    Split { nr_children: u32, id_first_child: u64, split: u8 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertNode {
    pub id: u64,
    pub region: Region5,
    pub body: NodeBody,
}

impl CertNode {
    pub fn node_type(&self) -> u8 {
        match self.body {
            NodeBody::Global(_) => 1,
            NodeBody::Local(_) => 2,
            NodeBody::Split { .. } => 3,
        }
    }

    pub fn is_leaf(&self) -> bool {
        !matches!(self.body, NodeBody::Split { .. })
    }
}

/// Node counts by kind.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TreeStats {
    pub total: u64,
    pub interior: u64,
    pub global_leaves: u64,
    pub local_leaves: u64,
}

impl TreeStats {
    pub fn leaves(&self) -> u64 {
        self.global_leaves + self.local_leaves
    }

    pub fn absorb(&mut self, node: &CertNode) {
        self.total += 1;
        match node.body {
            NodeBody::Global(_) => self.global_leaves += 1,
            NodeBody::Local(_) => self.local_leaves += 1,
            NodeBody::Split { .. } => self.interior += 1,
        }
    }
}
