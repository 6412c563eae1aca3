//! The polyhedra under study and their materializations.
//!
//! Orbit solids store three rational generator points; the 90 vertices are
//! the orbit under the order-30 group {(-1)^l R_z(2 pi k/15)}, indexed as
//! `k + 15 i + 45 l`. Vertices materialize in three scalar kinds: doubles
//! for the search side, exact cyclotomic numbers for congruence checks, and
//! floor-truncated rationals over a decimal grid for the verifier.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::certtree::{Region5, REGION_DENOM};
use crate::exact::cyclo::{cos_2pi_k15, sin_2pi_k15, CVec3, Cyclo};
use crate::exact::pi::{cos_bracket_interval, pi_bracket, pi_grid_bounds, sin_bracket_interval};
use crate::exact::rat::{qnorm3_sq, QVec3};
use crate::exact::{pow10, rat, rat_int, rat_to_f64, Rat};
use crate::geom::{self, Vec3};

#[derive(Debug, Error)]
pub enum SolidError {
    #[error("unknown solid {0:?}")]
    UnknownSolid(String),
    #[error("solid has no 30-fold symmetry descriptor")]
    NoOrbitSymmetry,
    #[error("vertex list line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("vertex {index} has squared norm {norm_sq} > 1")]
    VertexTooLong { index: usize, norm_sq: String },
    #[error("vertex set is not point-symmetric: no mate for vertex {index}")]
    NotPointSymmetric { index: usize },
    #[error("truncation needs at least 11 digits, got {0}")]
    TooFewDigits(u32),
    #[error("identity {identity} has no vertex permutation at this viewpoint")]
    NoPermutation { identity: usize },
}

#[derive(Clone, Debug)]
enum SolidKind {
    /// 90 vertices: (-1)^l R_z(2 pi k/15) generators[i]
    Orbit { generators: [QVec3; 3] },
    Literal { vertices: Vec<QVec3> },
}

#[derive(Clone, Debug)]
pub struct Polyhedron {
    pub name: String,
    kind: SolidKind,
    /// exact upper bound on every vertex norm; always <= 1
    pub radius_bound: Rat,
    f64_cache: OnceLock<Vec<Vec3>>,
    /// 16 is the truncation every exact pipeline uses, and computing it
    /// means re-bracketing all ninety orbit coordinates; keep it around.
    trunc16_cache: OnceLock<Vec<QVec3>>,
}

/// Composes an orbit vertex index from generator `i`, rotation step `k`,
/// sign `l`.
pub fn orbit_index(i: usize, k: usize, l: usize) -> usize {
    debug_assert!(i < 3 && k < 15 && l < 2);
    k + 15 * i + 45 * l
}

/// Inverse of [`orbit_index`].
pub fn orbit_decompose(idx: usize) -> (usize, usize, usize) {
    debug_assert!(idx < 90);
    (idx % 45 / 15, idx % 15, idx / 45)
}

impl Polyhedron {
    pub fn n_vertices(&self) -> usize {
        match &self.kind {
            SolidKind::Orbit { .. } => 90,
            SolidKind::Literal { vertices } => vertices.len(),
        }
    }

    pub fn is_orbit(&self) -> bool {
        matches!(self.kind, SolidKind::Orbit { .. })
    }

    pub fn vertex_f64(&self, idx: usize) -> Vec3 {
        match &self.kind {
            SolidKind::Literal { vertices } => {
                std::array::from_fn(|c| rat_to_f64(&vertices[idx][c]))
            }
            SolidKind::Orbit { generators } => {
                let (i, k, l) = orbit_decompose(idx);
                let g: Vec3 = std::array::from_fn(|c| rat_to_f64(&generators[i][c]));
                let ang = 2.0 * std::f64::consts::PI * k as f64 / 15.0;
                let sign = if l == 0 { 1.0 } else { -1.0 };
                let (s, c) = ang.sin_cos();
                [
                    sign * (c * g[0] - s * g[1]),
                    sign * (s * g[0] + c * g[1]),
                    sign * g[2],
                ]
            }
        }
    }

    /// All vertices as doubles, built once and cached.
    pub fn vertices_f64(&self) -> &[Vec3] {
        self.f64_cache
            .get_or_init(|| (0..self.n_vertices()).map(|i| self.vertex_f64(i)).collect())
    }

    /// Exact vertex in the cyclotomic field.
    pub fn vertex_cyclo(&self, idx: usize) -> CVec3 {
        match &self.kind {
            SolidKind::Literal { vertices } => {
                std::array::from_fn(|c| Cyclo::from_rat(vertices[idx][c].clone()))
            }
            SolidKind::Orbit { generators } => {
                let (i, k, l) = orbit_decompose(idx);
                let [gx, gy, gz] =
                    std::array::from_fn(|c| Cyclo::from_rat(generators[i][c].clone()));
                let c = cos_2pi_k15(k as i64);
                let s = sin_2pi_k15(k as i64);
                let mut v = [
                    c.mul(&gx).sub(&s.mul(&gy)),
                    s.mul(&gx).add(&c.mul(&gy)),
                    gz,
                ];
                if l == 1 {
                    v = [v[0].neg(), v[1].neg(), v[2].neg()];
                }
                v
            }
        }
    }

    /// Floor-truncates every vertex onto the grid `Z / 10^digits`, so each
    /// coordinate satisfies `trunc <= true < trunc + 10^-digits` and the
    /// truncated vertex is within `sqrt(3) * 10^-digits < kappa` of the true
    /// one (hence at least 11 digits are required).
    pub fn truncated_vertices(&self, digits: u32) -> Result<Vec<QVec3>, SolidError> {
        if digits == 16 {
            if let Some(hit) = self.trunc16_cache.get() {
                return Ok(hit.clone());
            }
            let fresh = self.compute_truncated(16)?;
            return Ok(self.trunc16_cache.get_or_init(|| fresh).clone());
        }
        self.compute_truncated(digits)
    }

    fn compute_truncated(&self, digits: u32) -> Result<Vec<QVec3>, SolidError> {
        if digits < 11 {
            return Err(SolidError::TooFewDigits(digits));
        }
        let scale = pow10(digits);
        match &self.kind {
            SolidKind::Literal { vertices } => Ok(vertices
                .iter()
                .map(|v| std::array::from_fn(|c| floor_to_grid(&v[c], &scale)))
                .collect()),
            SolidKind::Orbit { generators } => {
                // Brackets of sin/cos(2 pi k/15), shared across vertices.
                let work = digits + 24;
                let (pl, ph) = pi_bracket(work);
                let table: Vec<((Rat, Rat), (Rat, Rat))> = (0..15)
                    .map(|k| {
                        let al = &pl * rat(2 * k, 15);
                        let ah = &ph * rat(2 * k, 15);
                        (
                            cos_bracket_interval(&al, &ah, work),
                            sin_bracket_interval(&al, &ah, work),
                        )
                    })
                    .collect();
                let mut out = Vec::with_capacity(90);
                for idx in 0..90 {
                    let (i, k, l) = orbit_decompose(idx);
                    let g = &generators[i];
                    let (cb, sb) = &table[k];
                    let neg = l == 1;
                    let x = combine(cb, &g[0], &neg_interval(sb), &g[1], neg);
                    let y = combine(sb, &g[0], cb, &g[1], neg);
                    let z = if neg { -&g[2] } else { g[2].clone() };
                    out.push([
                        self.floor_interval(idx, 0, x, &scale),
                        self.floor_interval(idx, 1, y, &scale),
                        floor_to_grid(&z, &scale),
                    ]);
                }
                Ok(out)
            }
        }
    }

    /// Floor of a bracketed irrational coordinate; if the bracket straddles
    /// a grid line, decide via the exact cyclotomic value.
    fn floor_interval(&self, idx: usize, coord: usize, iv: (Rat, Rat), scale: &BigInt) -> Rat {
        let lo = (&iv.0 * scale).floor().to_integer();
        let hi = (&iv.1 * scale).floor().to_integer();
        if lo == hi {
            return Rat::new(lo, scale.clone());
        }
        let exact = self.vertex_cyclo(idx)[coord].clone();
        if let Some(r) = exact.as_rational() {
            return floor_to_grid(r, scale);
        }
        // Irrational algebraic number extremely close to a grid line: refine.
        let (rl, rh) = exact.embed_real_bracket(120);
        let lo = (&rl * scale).floor().to_integer();
        let hi = (&rh * scale).floor().to_integer();
        assert_eq!(
            lo, hi,
            "coordinate within 1e-120 of a decimal grid line; raise working precision"
        );
        Rat::new(lo, scale.clone())
    }

    /// Symmetry-reduced initial search box when the solid has the 30-fold
    /// orbit symmetry; the generic box otherwise. Upper bounds round pi up
    /// so the rational box provably covers the real one.
    pub fn initial_region(&self) -> Region5 {
        self.initial_region_n(REGION_DENOM)
    }

    /// Initial box over an explicit grid denominator.
    pub fn initial_region_n(&self, denom: i64) -> Region5 {
        let (_, pi_hi) = pi_grid_bounds();
        let n = rat_int(denom);
        let ceil_n = |x: Rat| -> i64 {
            (x * &n).ceil().to_integer().to_i64().expect("region bound fits i64")
        };
        let half_pi = ceil_n(pi_hi / rat_int(2));
        if self.is_orbit() {
            let theta = ceil_n(pi_hi * rat(2, 15));
            let phi = ceil_n(pi_hi.clone());
            Region5::new([(0, theta), (0, phi), (0, theta), (0, half_pi), (-half_pi, half_pi)])
        } else {
            let theta = ceil_n(pi_hi * rat_int(2));
            let phi = ceil_n(pi_hi.clone());
            Region5::new([(0, theta), (0, phi), (0, theta), (0, phi), (-half_pi, half_pi)])
        }
    }

    /// Evidence for the three projection symmetries of orbit solids at a
    /// sample viewpoint: vertex permutations `perm` with
    /// (1) `M(theta + 2 pi/15, phi) P_j = M(theta, phi) P_perm(j)`,
    /// (2) `R(alpha + pi) M P_j = R(alpha) M P_perm(j)`,
    /// (3) `diag(1,-1) M(theta, phi) P_j = M(theta + pi/15, pi - phi) P_perm(j)`,
    /// each matched within 1e-9.
    pub fn orbit_symmetry_permutations(
        &self,
        theta: f64,
        phi: f64,
        alpha: f64,
    ) -> Result<[Vec<usize>; 3], SolidError> {
        if !self.is_orbit() {
            return Err(SolidError::NoOrbitSymmetry);
        }
        let verts = self.vertices_f64();
        let project =
            |t: f64, f: f64, a: f64| -> Vec<[f64; 2]> {
                let m = geom::matmul2_23(geom::rot2(a), geom::projection(t, f));
                verts.iter().map(|&v| geom::matvec23(m, v)).collect()
            };
        let step = std::f64::consts::PI / 15.0;
        let plain = project(theta, phi, 0.0);
        let sets = [
            (project(theta + 2.0 * step, phi, 0.0), plain.clone()),
            (
                project(theta, phi, alpha + std::f64::consts::PI),
                project(theta, phi, alpha),
            ),
            (
                plain.iter().map(|p| [p[0], -p[1]]).collect(),
                project(theta + step, std::f64::consts::PI - phi, 0.0),
            ),
        ];
        let mut perms = [const { Vec::new() }; 3];
        for (which, (lhs, rhs)) in sets.into_iter().enumerate() {
            let mut perm = Vec::with_capacity(lhs.len());
            for l in &lhs {
                let found = rhs
                    .iter()
                    .position(|r| (l[0] - r[0]).abs() < 1e-9 && (l[1] - r[1]).abs() < 1e-9)
                    .ok_or(SolidError::NoPermutation { identity: which + 1 })?;
                perm.push(found);
            }
            perms[which] = perm;
        }
        Ok(perms)
    }
}

/// `floor(x * scale) / scale` exactly.
fn floor_to_grid(x: &Rat, scale: &BigInt) -> Rat {
    Rat::new((x * scale).floor().to_integer(), scale.clone())
}

fn neg_interval(iv: &(Rat, Rat)) -> (Rat, Rat) {
    (-&iv.1, -&iv.0)
}

/// Interval for `a_iv * a + b_iv * b`, negated when `neg`, with exact
/// rational scalars a, b.
fn combine(a_iv: &(Rat, Rat), a: &Rat, b_iv: &(Rat, Rat), b: &Rat, neg: bool) -> (Rat, Rat) {
    let scale = |iv: &(Rat, Rat), s: &Rat| -> (Rat, Rat) {
        if s.is_negative() {
            (&iv.1 * s, &iv.0 * s)
        } else {
            (&iv.0 * s, &iv.1 * s)
        }
    };
    let (al, ah) = scale(a_iv, a);
    let (bl, bh) = scale(b_iv, b);
    let (lo, hi) = (al + bl, ah + bh);
    if neg {
        (-hi, -lo)
    } else {
        (lo, hi)
    }
}

fn orbit_solid(name: &str, generators: [QVec3; 3]) -> Polyhedron {
    Polyhedron {
        name: name.to_string(),
        kind: SolidKind::Orbit { generators },
        radius_bound: Rat::one(),
        f64_cache: OnceLock::new(),
        trunc16_cache: OnceLock::new(),
    }
}

/// The 90-vertex point-symmetric solid with unit generator
/// (152024884, 0, 210152163)/259375205.
pub fn noperthedron() -> Polyhedron {
    let c1: QVec3 = std::array::from_fn(|i| {
        Rat::new([152024884, 0, 210152163][i].into(), 259375205.into())
    });
    let c2: QVec3 = std::array::from_fn(|i| {
        Rat::new([6632738028i64, 6106948881, 3980949609][i].into(), pow10(10))
    });
    let c3: QVec3 = std::array::from_fn(|i| {
        Rat::new([8193990033i64, 5298215096, 1230614493][i].into(), pow10(10))
    });
    orbit_solid("noperthedron", [c1, c2, c3])
}

/// The 90-vertex solid that admits a Rupert passage but no local one; unit
/// generator (3939, 0, 4340)/5861.
pub fn ruperthedron() -> Polyhedron {
    let d1: QVec3 = std::array::from_fn(|i| Rat::new([3939, 0, 4340][i].into(), 5861.into()));
    let d2: QVec3 = std::array::from_fn(|i| Rat::new([7855, 4178, 4484][i].into(), pow10(4)));
    let d3: QVec3 = std::array::from_fn(|i| Rat::new([9526, 2057, 1102][i].into(), pow10(4)));
    orbit_solid("ruperthedron", [d1, d2, d3])
}

/// Unit octahedron with the vertex order used by the worked local-theorem
/// examples: the first three vertices have nonnegative coordinates and the
/// last three are their antipodes in reverse order.
pub fn octahedron() -> Polyhedron {
    let coords: [[i64; 3]; 6] = [
        [0, 0, 1],
        [1, 0, 0],
        [0, 1, 0],
        [-1, 0, 0],
        [0, -1, 0],
        [0, 0, -1],
    ];
    Polyhedron {
        name: "octahedron".to_string(),
        kind: SolidKind::Literal {
            vertices: coords.iter().map(|c| std::array::from_fn(|i| rat_int(c[i]))).collect(),
        },
        radius_bound: Rat::one(),
        f64_cache: OnceLock::new(),
        trunc16_cache: OnceLock::new(),
    }
}

/// Cube rescaled to fit the unit ball: half-side 11547/20000, slightly
/// below 1/sqrt(3), so the squared circumradius 3 s^2 stays below 1.
pub fn cube() -> Polyhedron {
    let s = rat(11547, 20000);
    let mut vertices = Vec::with_capacity(8);
    for mask in 0..8u32 {
        let sign = |b: u32| if b == 0 { s.clone() } else { -s.clone() };
        vertices.push([sign(mask & 1), sign((mask >> 1) & 1), sign((mask >> 2) & 1)]);
    }
    Polyhedron {
        name: "cube".to_string(),
        kind: SolidKind::Literal { vertices },
        radius_bound: Rat::one(),
        f64_cache: OnceLock::new(),
        trunc16_cache: OnceLock::new(),
    }
}

pub fn solid_by_name(name: &str) -> Result<Polyhedron, SolidError> {
    match name {
        "noperthedron" | "nop" => Ok(noperthedron()),
        "ruperthedron" | "rup" => Ok(ruperthedron()),
        "octahedron" => Ok(octahedron()),
        "cube" => Ok(cube()),
        other => Err(SolidError::UnknownSolid(other.to_string())),
    }
}

/// Parses a vertex list, one point per line: three whitespace-separated
/// rationals (`3/4`, `-1`, or decimals like `0.25`); `#` starts a comment.
/// The set must be point-symmetric with all norms <= 1.
pub fn parse_vertex_list(name: &str, text: &str) -> Result<Polyhedron, SolidError> {
    let mut vertices: Vec<QVec3> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(SolidError::Parse {
                line: lineno + 1,
                reason: format!("expected 3 coordinates, found {}", parts.len()),
            });
        }
        let mut v: QVec3 = std::array::from_fn(|_| Rat::zero());
        for (c, p) in parts.iter().enumerate() {
            v[c] = parse_rational(p).ok_or_else(|| SolidError::Parse {
                line: lineno + 1,
                reason: format!("bad rational {p:?}"),
            })?;
        }
        vertices.push(v);
    }
    for (index, v) in vertices.iter().enumerate() {
        let norm_sq = qnorm3_sq(v);
        if norm_sq > Rat::one() {
            return Err(SolidError::VertexTooLong { index, norm_sq: norm_sq.to_string() });
        }
        let neg: QVec3 = std::array::from_fn(|c| -v[c].clone());
        if !vertices.contains(&neg) {
            return Err(SolidError::NotPointSymmetric { index });
        }
    }
    Ok(Polyhedron {
        name: name.to_string(),
        kind: SolidKind::Literal { vertices },
        radius_bound: Rat::one(),
        f64_cache: OnceLock::new(),
        trunc16_cache: OnceLock::new(),
    })
}

/// Parses a rational from integer (`-3`), fraction (`29/100`), or decimal
/// (`0.29`) notation.
pub fn parse_rational(s: &str) -> Option<Rat> {
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.parse().ok()?;
        let d: BigInt = d.parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rat::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let int_part: BigInt = if int == "-" || int.is_empty() {
            BigInt::zero()
        } else {
            int.parse().ok()?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let frac_num: BigInt = frac.parse().ok()?;
        let scale = pow10(frac.len() as u32);
        let abs = Rat::new(int_part.abs() * &scale + frac_num, scale);
        return Some(if neg { -abs } else { abs });
    }
    let n: BigInt = s.parse().ok()?;
    Some(Rat::from_integer(n))
}
