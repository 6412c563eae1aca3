//! Double-precision geometry: rotations, projections, operator norms, and
//! 2-D convex hulls.
//!
//! This is the untrusted mirror of `exact`: the certificate builder searches
//! with these, then everything is re-established rationally. Conventions:
//! `R(a)` is the CCW rotation of the plane, `R_y` rotates `+z` toward `+x`
//! (note the sign: entry (0,2) is `-sin`), `direction(theta, phi)` is the
//! unit vector at longitude theta / polar angle phi, and `projection` maps
//! onto the plane orthogonal to that direction so that
//! `projection(t, f) = [[0,1,0],[-1,0,0]] R_y(f) R_z(-t)`.

pub type Vec2 = [f64; 2];
pub type Vec3 = [f64; 3];
pub type Mat2 = [[f64; 2]; 2];
pub type Mat3 = [[f64; 3]; 3];
/// 2x3 matrix, row-major: maps R^3 -> R^2.
pub type Mat2x3 = [[f64; 3]; 2];

pub fn dot2(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

pub fn dot3(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn sub2(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] - b[0], a[1] - b[1]]
}

pub fn sub3(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn norm2(a: Vec2) -> f64 {
    dot2(a, a).sqrt()
}

pub fn norm3(a: Vec3) -> f64 {
    dot3(a, a).sqrt()
}

/// z-component of the cross product (o->a) x (o->b); positive iff the turn
/// o -> a -> b is counterclockwise.
pub fn cross2(o: Vec2, a: Vec2, b: Vec2) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

pub fn cross3(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Determinant of the 3x3 matrix with columns a, b, c.
pub fn det3_cols(a: Vec3, b: Vec3, c: Vec3) -> f64 {
    dot3(a, cross3(b, c))
}

pub fn rot2(a: f64) -> Mat2 {
    let (s, c) = a.sin_cos();
    [[c, -s], [s, c]]
}

/// d/da of `rot2`.
pub fn rot2_deriv(a: f64) -> Mat2 {
    let (s, c) = a.sin_cos();
    [[-s, -c], [c, -s]]
}

pub fn rot3_x(a: f64) -> Mat3 {
    let (s, c) = a.sin_cos();
    [[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]]
}

pub fn rot3_y(a: f64) -> Mat3 {
    let (s, c) = a.sin_cos();
    [[c, 0.0, -s], [0.0, 1.0, 0.0], [s, 0.0, c]]
}

pub fn rot3_z(a: f64) -> Mat3 {
    let (s, c) = a.sin_cos();
    [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]
}

/// Unit view direction at longitude `theta`, polar angle `phi`.
pub fn direction(theta: f64, phi: f64) -> Vec3 {
    let (ts, tc) = theta.sin_cos();
    let (fs, fc) = phi.sin_cos();
    [tc * fs, ts * fs, fc]
}

/// Orthogonal projection onto the plane normal to `direction(theta, phi)`.
pub fn projection(theta: f64, phi: f64) -> Mat2x3 {
    let (ts, tc) = theta.sin_cos();
    let (fs, fc) = phi.sin_cos();
    [[-ts, tc, 0.0], [-tc * fc, -ts * fc, fs]]
}

/// d/dtheta of `projection`.
pub fn projection_dtheta(theta: f64, phi: f64) -> Mat2x3 {
    let (ts, tc) = theta.sin_cos();
    let (_, fc) = phi.sin_cos();
    [[-tc, -ts, 0.0], [ts * fc, -tc * fc, 0.0]]
}

/// d/dphi of `projection`.
pub fn projection_dphi(theta: f64, phi: f64) -> Mat2x3 {
    let (ts, tc) = theta.sin_cos();
    let (fs, fc) = phi.sin_cos();
    [[0.0, 0.0, 0.0], [tc * fs, ts * fs, fc]]
}

pub fn matvec2(m: Mat2, v: Vec2) -> Vec2 {
    [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
}

pub fn matvec3(m: Mat3, v: Vec3) -> Vec3 {
    std::array::from_fn(|i| dot3(m[i], v))
}

pub fn matvec23(m: Mat2x3, v: Vec3) -> Vec2 {
    [dot3(m[0], v), dot3(m[1], v)]
}

pub fn matmul2(a: Mat2, b: Mat2) -> Mat2 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][0] * b[0][j] + a[i][1] * b[1][j]))
}

pub fn matmul3(a: Mat3, b: Mat3) -> Mat3 {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j])
    })
}

/// (2x2) * (2x3).
pub fn matmul2_23(a: Mat2, b: Mat2x3) -> Mat2x3 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][0] * b[0][j] + a[i][1] * b[1][j]))
}

/// (2x3) * (3x3).
pub fn matmul23_3(a: Mat2x3, b: Mat3) -> Mat2x3 {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j])
    })
}

pub fn mat2x3_sub(a: Mat2x3, b: Mat2x3) -> Mat2x3 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][j] - b[i][j]))
}

pub fn mat2_sub(a: Mat2, b: Mat2) -> Mat2 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][j] - b[i][j]))
}

pub fn mat3_sub(a: Mat3, b: Mat3) -> Mat3 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][j] - b[i][j]))
}

/// Largest singular value of a 2x2 matrix in closed form,
/// sigma_max = (|(a+d, b-c)| + |(a-d, b+c)|) / 2, which stays accurate even
/// when both singular values coincide (rotations), unlike the
/// frobenius/determinant discriminant.
pub fn opnorm2(m: Mat2) -> f64 {
    let [[a, b], [c, d]] = m;
    let big = ((a + d) * (a + d) + (b - c) * (b - c)).sqrt();
    let small = ((a - d) * (a - d) + (b + c) * (b + c)).sqrt();
    0.5 * (big + small)
}

/// Largest singular value of a 2x3 matrix: sqrt of the top eigenvalue of the
/// 2x2 Gram matrix A A^t.
pub fn opnorm2x3(m: Mat2x3) -> f64 {
    let g00 = dot3(m[0], m[0]);
    let g01 = dot3(m[0], m[1]);
    let g11 = dot3(m[1], m[1]);
    let mean = 0.5 * (g00 + g11);
    let disc = (0.25 * (g00 - g11) * (g00 - g11) + g01 * g01).max(0.0).sqrt();
    (mean + disc).max(0.0).sqrt()
}

/// Largest singular value of a 3x3 matrix: top eigenvalue of the symmetric
/// Gram matrix A^t A by the trigonometric (Cardano) formula.
pub fn opnorm3(m: Mat3) -> f64 {
    let col = |j: usize| [m[0][j], m[1][j], m[2][j]];
    let mut b = [[0.0f64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            b[i][j] = dot3(col(i), col(j));
        }
    }
    let p1 = b[0][1] * b[0][1] + b[0][2] * b[0][2] + b[1][2] * b[1][2];
    let trace = b[0][0] + b[1][1] + b[2][2];
    if p1 == 0.0 {
        return b[0][0].max(b[1][1]).max(b[2][2]).max(0.0).sqrt();
    }
    let q = trace / 3.0;
    let p2 = (b[0][0] - q).powi(2) + (b[1][1] - q).powi(2) + (b[2][2] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    let det_shifted = {
        let c = |i: usize, j: usize| (b[i][j] - if i == j { q } else { 0.0 }) / p;
        c(0, 0) * (c(1, 1) * c(2, 2) - c(1, 2) * c(2, 1))
            - c(0, 1) * (c(1, 0) * c(2, 2) - c(1, 2) * c(2, 0))
            + c(0, 2) * (c(1, 0) * c(2, 1) - c(1, 1) * c(2, 0))
    };
    let r = (det_shifted / 2.0).clamp(-1.0, 1.0);
    let eig = q + 2.0 * p * (r.acos() / 3.0).cos();
    eig.max(0.0).sqrt()
}

/// Indices of the convex hull of `pts` in counterclockwise order, starting
/// from the lexicographically smallest point. Strictly collinear points on
/// hull edges are dropped. Andrew's monotone chain.
pub fn hull2(pts: &[Vec2]) -> Vec<usize> {
    let n = pts.len();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| {
        pts[a][0]
            .total_cmp(&pts[b][0])
            .then_with(|| pts[a][1].total_cmp(&pts[b][1]))
    });
    let mut hull: Vec<usize> = Vec::with_capacity(2 * n);
    // Lower chain, then upper chain over the reversed order.
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &usize>> = if pass == 0 {
            Box::new(idx.iter())
        } else {
            Box::new(idx.iter().rev())
        };
        for &i in iter {
            while hull.len() >= start + 2 {
                let a = hull[hull.len() - 2];
                let b = hull[hull.len() - 1];
                if cross2(pts[a], pts[b], pts[i]) <= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(i);
        }
        hull.pop(); // endpoint repeats as the next chain's start
    }
    hull
}

/// True if `p` lies inside the CCW polygon `hull` with at least `clearance`
/// (Euclidean distance) to every edge line.
pub fn inside_hull_with_clearance(hull: &[Vec2], p: Vec2, clearance: f64) -> bool {
    let n = hull.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        let a = hull[i];
        let b = hull[(i + 1) % n];
        let edge_len = norm2(sub2(b, a));
        if edge_len == 0.0 {
            continue;
        }
        // Signed distance of p to the directed edge line; positive = left.
        if cross2(a, b, p) < clearance * edge_len {
            return false;
        }
    }
    true
}

/// True if every point of `inner` lies inside the CCW polygon `outer` with
/// the given clearance.
pub fn polygon_inside_polygon(outer: &[Vec2], inner: &[Vec2], clearance: f64) -> bool {
    inner.iter().all(|&p| inside_hull_with_clearance(outer, p, clearance))
}
