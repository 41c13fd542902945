//! Exact arithmetic on the triangular lattice.
//!
//! A lattice point is addressed by Eisenstein coordinates `(m, n)`, meaning
//! `m·(1, 0) + n·(1/2, √3/2)`. Squared distances between lattice points are
//! integers, so every metric question on a single lattice is answered without
//! floating point.

use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SQRT3: f64 = 1.732_050_807_568_877_2;

/// A point of the triangular lattice in Eisenstein coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct EisensteinPoint {
    pub m: i64,
    pub n: i64,
}

/// The six unit vectors, counterclockwise from `(1, 0)`.
pub const UNIT_DIRECTIONS: [EisensteinPoint; 6] = [
    EisensteinPoint::new(1, 0),
    EisensteinPoint::new(0, 1),
    EisensteinPoint::new(-1, 1),
    EisensteinPoint::new(-1, 0),
    EisensteinPoint::new(0, -1),
    EisensteinPoint::new(1, -1),
];

impl EisensteinPoint {
    pub const ORIGIN: EisensteinPoint = EisensteinPoint::new(0, 0);

    pub const fn new(m: i64, n: i64) -> Self {
        EisensteinPoint { m, n }
    }

    /// `m² + mn + n²`, the squared Euclidean length.
    pub fn norm(self) -> i64 {
        self.m * self.m + self.m * self.n + self.n * self.n
    }

    /// Rotation by 60° about the origin; an automorphism of the lattice.
    pub fn rotate60(self) -> Self {
        EisensteinPoint::new(-self.n, self.m + self.n)
    }

    /// Reflection across the 30° line, swapping the two basis vectors.
    pub fn reflect(self) -> Self {
        EisensteinPoint::new(self.n, self.m)
    }

    /// Number of unit steps from the origin (hexagonal ring index).
    pub fn hex_distance(self) -> i64 {
        self.m.abs().max(self.n.abs()).max((self.m + self.n).abs())
    }

    /// Index into [`UNIT_DIRECTIONS`] if this is a unit vector.
    pub fn direction_index(self) -> Option<usize> {
        UNIT_DIRECTIONS.iter().position(|&d| d == self)
    }

    pub fn to_cartesian(self) -> [f64; 2] {
        [self.m as f64 + self.n as f64 / 2.0, self.n as f64 * SQRT3 / 2.0]
    }

    pub fn scaled(self) -> ScaledLatticeVector {
        ScaledLatticeVector { u: 2 * self.m + self.n, v: self.n }
    }
}

impl Add for EisensteinPoint {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        EisensteinPoint::new(self.m + o.m, self.n + o.n)
    }
}

impl Sub for EisensteinPoint {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        EisensteinPoint::new(self.m - o.m, self.n - o.n)
    }
}

impl Neg for EisensteinPoint {
    type Output = Self;
    fn neg(self) -> Self {
        EisensteinPoint::new(-self.m, -self.n)
    }
}

/// Lattice vector with cartesian image `(u/2, v·√3/2)`.
///
/// Cross and dot products are integer multiples of `√3/4` and `1/4`
/// respectively, so orientation and betweenness tests are exact sign tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ScaledLatticeVector {
    pub u: i64,
    pub v: i64,
}

impl ScaledLatticeVector {
    /// `4/√3` times the cartesian cross product.
    pub fn cross(self, o: Self) -> i64 {
        self.u * o.v - o.u * self.v
    }

    /// Four times the cartesian dot product.
    pub fn dot(self, o: Self) -> i64 {
        self.u * o.u + 3 * self.v * o.v
    }
}

impl Sub for ScaledLatticeVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        ScaledLatticeVector { u: self.u - o.u, v: self.v - o.v }
    }
}

/// Isometry placing an abstract lattice in the plane: the lattice origin maps
/// to `origin` and the basis vector `(1, 0)` is rotated by `angle`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeFrame {
    pub origin: [f64; 2],
    pub angle: f64,
}

impl Default for LatticeFrame {
    fn default() -> Self {
        LatticeFrame { origin: [0.0, 0.0], angle: 0.0 }
    }
}

impl LatticeFrame {
    pub fn new(origin: [f64; 2], angle: f64) -> Self {
        LatticeFrame { origin, angle }
    }

    pub fn to_cartesian(&self, p: EisensteinPoint) -> [f64; 2] {
        let [x, y] = p.to_cartesian();
        let (s, c) = self.angle.sin_cos();
        [self.origin[0] + c * x - s * y, self.origin[1] + s * x + c * y]
    }

    /// Fractional Eisenstein coordinates of a plane point.
    pub fn from_cartesian(&self, q: [f64; 2]) -> [f64; 2] {
        let dx = q[0] - self.origin[0];
        let dy = q[1] - self.origin[1];
        let (s, c) = self.angle.sin_cos();
        let x = c * dx + s * dy;
        let y = -s * dx + c * dy;
        let n = 2.0 * y / SQRT3;
        [x - n / 2.0, n]
    }

    /// The lattice point within `tol` (plane units) of `q`, if any.
    pub fn snap(&self, q: [f64; 2], tol: f64) -> Option<EisensteinPoint> {
        let [fm, fn_] = self.from_cartesian(q);
        let p = EisensteinPoint::new(fm.round() as i64, fn_.round() as i64);
        let img = self.to_cartesian(p);
        let d = ((img[0] - q[0]).powi(2) + (img[1] - q[1]).powi(2)).sqrt();
        (d <= tol).then_some(p)
    }
}

pub fn eisenstein_norm(p: EisensteinPoint) -> i64 {
    p.norm()
}

/// The six lattice points at unit distance from `p`, counterclockwise from `p + (1, 0)`.
pub fn unit_neighbors(p: EisensteinPoint) -> [EisensteinPoint; 6] {
    UNIT_DIRECTIONS.map(|d| p + d)
}

/// All lattice points at unit distance from both `a` and `b`.
///
/// Any plane point at unit distance from two distinct lattice points is itself
/// a lattice point, so this set is every common unit neighbour in the plane.
pub fn complete_unit_pair(a: EisensteinPoint, b: EisensteinPoint) -> Result<Vec<EisensteinPoint>> {
    if a == b {
        return Err(Error::DegeneratePair);
    }
    let mut out: Vec<_> = unit_neighbors(a).into_iter().filter(|&c| (c - b).norm() == 1).collect();
    out.sort();
    Ok(out)
}

/// `√(12x − 3) − 3`.
pub fn phi(x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.25 {
        return Err(Error::Domain(format!("phi needs x >= 1/4, got {x}")));
    }
    Ok((12.0 * x - 3.0).sqrt() - 3.0)
}

/// Exact `φ(n) ≤ b`, i.e. `(b + 3)² ≥ 12n − 3`.
pub fn phi_at_most(n: u64, b: u64) -> bool {
    let lhs = (b as u128 + 3).pow(2);
    lhs + 3 >= 12 * n as u128
}

/// Floor square root by Newton iteration.
pub fn isqrt(x: u128) -> u128 {
    if x < 2 {
        return x;
    }
    let mut r = 1u128 << ((128 - x.leading_zeros()).div_ceil(2));
    loop {
        let next = (r + x / r) / 2;
        if next >= r {
            return r;
        }
        r = next;
    }
}

pub fn ceil_isqrt(x: u128) -> u128 {
    let r = isqrt(x);
    if r * r == x {
        r
    } else {
        r + 1
    }
}

/// `⌊3n − √(12n − 3)⌋`, computed as `3n − ⌈√(12n − 3)⌉` in integers.
pub fn harborth_bound(n: u64) -> Result<u64> {
    if n < 1 {
        return Err(Error::Domain("harborth_bound needs n >= 1".into()));
    }
    let n = n as u128;
    let bound = 3 * n - ceil_isqrt(12 * n - 3);
    u64::try_from(bound).map_err(|_| Error::Domain("n too large".into()))
}

/// `(φ(a−c) + φ(b+c)) − (φ(a) + φ(b))`, positive whenever `a > b + c`, `b ≥ 1`, `c > 0`.
pub fn concavity_gap(a: f64, b: f64, c: f64) -> Result<f64> {
    if !(a > b + c && b >= 1.0 && c > 0.0) {
        return Err(Error::Domain(format!("concavity_gap needs a > b + c, b >= 1, c > 0; got a={a}, b={b}, c={c}")));
    }
    Ok(phi(a - c)? + phi(b + c)? - phi(a)? - phi(b)?)
}
