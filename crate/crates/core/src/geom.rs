//! 3D primitives, the tolerance policy and low-level predicates.

use std::ops::{Add, AddAssign, Div, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A vector (or point) in 3-space.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// Points and vectors share one representation.
pub type Point3 = Vec3;

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    pub const X: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const Y: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    pub const Z: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    /// Unchecked constructor for literals. Use [`Vec3::try_new`] for data
    /// that comes from outside the program.
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn try_new(x: f64, y: f64, z: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() && z.is_finite() {
            Ok(Vec3 { x, y, z })
        } else {
            Err(Error::NonFinite)
        }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y).hypot(self.z)
    }

    pub fn distance(self, other: Vec3) -> f64 {
        (self - other).norm()
    }

    /// Unit vector in the direction of `self`; fails for vectors shorter
    /// than the absolute tolerance.
    pub fn normalize(self, tol: &Tolerance) -> Result<Vec3> {
        let n = self.norm();
        if n <= tol.abs {
            return Err(Error::DegenerateInput(format!(
                "cannot normalize vector of length {n:e}"
            )));
        }
        Ok(self / n)
    }

    /// Unsigned angle between two vectors, computed with `atan2` so that it
    /// stays accurate near 0 and π.
    pub fn angle_to(self, other: Vec3) -> f64 {
        self.cross(other).norm().atan2(self.dot(other))
    }

    pub fn midpoint(self, other: Vec3) -> Vec3 {
        (self + other) * 0.5
    }

    pub fn max_abs(self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// Lexicographic comparison used for deterministic output ordering.
    pub fn lex_cmp(&self, other: &Vec3) -> std::cmp::Ordering {
        self.x
            .total_cmp(&other.x)
            .then(self.y.total_cmp(&other.y))
            .then(self.z.total_cmp(&other.z))
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }
}

impl From<Vec3> for [f64; 3] {
    fn from(v: Vec3) -> Self {
        v.to_array()
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Vec3 index {i} out of range"),
        }
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

/// Tolerance policy shared by every predicate in the crate.
///
/// Two lengths are equal when they differ by at most
/// `max(abs, rel * scale)`, where `scale` is the largest magnitude
/// involved. Angles compare against `angle_abs` (radians).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    pub angle_abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rel: 1e-9,
            abs: 1e-12,
            angle_abs: 1e-9,
        }
    }
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64, angle_abs: f64) -> Result<Self> {
        for (name, v) in [("rel", rel), ("abs", abs), ("angle_abs", angle_abs)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::OutOfDomain(format!(
                    "tolerance {name} must be positive, got {v}"
                )));
            }
        }
        Ok(Tolerance {
            rel,
            abs,
            angle_abs,
        })
    }

    /// Admissible absolute error at a given magnitude.
    pub fn at(&self, scale: f64) -> f64 {
        self.abs.max(self.rel * scale.abs())
    }

    pub fn eq(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.at(a.abs().max(b.abs()))
    }

    /// `a == b` with an explicit scale, for quantities (like differences)
    /// whose own magnitude says nothing about the problem size.
    pub fn eq_at(&self, a: f64, b: f64, scale: f64) -> bool {
        (a - b).abs() <= self.at(scale)
    }

    pub fn angle_eq(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.angle_abs
    }

    pub fn points_eq(&self, p: Point3, q: Point3) -> bool {
        (p - q).norm() <= self.at(p.max_abs().max(q.max_abs()))
    }
}

/// The plane `normal · x = offset` with a unit normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plane {
    pub normal: Vec3,
    pub offset: f64,
}

impl Plane {
    pub fn new(normal: Vec3, offset: f64, tol: &Tolerance) -> Result<Self> {
        let n = normal.norm();
        if (n - 1.0).abs() > 1e3 * tol.rel.max(f64::EPSILON) {
            return Err(Error::DegenerateInput(format!(
                "plane normal must be unit length, got |n| = {n}"
            )));
        }
        Ok(Plane { normal, offset })
    }

    /// Plane through three points, normal oriented by `(b - a) × (c - a)`.
    pub fn through(a: Point3, b: Point3, c: Point3, tol: &Tolerance) -> Result<Self> {
        let scale = (b - a).norm().max((c - a).norm());
        let n = (b - a).cross(c - a);
        if n.norm() <= tol.at(scale * scale) {
            return Err(Error::DegenerateInput(
                "collinear points span no plane".into(),
            ));
        }
        let normal = n / n.norm();
        Ok(Plane {
            normal,
            offset: normal.dot(a),
        })
    }

    pub fn signed_distance(&self, p: Point3) -> f64 {
        self.normal.dot(p) - self.offset
    }

    pub fn project(&self, p: Point3) -> Point3 {
        p - self.normal * self.signed_distance(p)
    }
}

/// Distance from `p` to the infinite line through `base` with direction `dir`.
pub fn point_line_distance(p: Point3, base: Point3, dir: Vec3, tol: &Tolerance) -> Result<f64> {
    let u = dir.normalize(tol)?;
    let w = p - base;
    Ok((w - u * w.dot(u)).norm())
}

/// Intersect three spheres.
///
/// Returns the two intersection points, the first on the side of
/// `(c2 - c1) × (c3 - c1)`, the second its mirror image across the plane of
/// the centers. A squared height within `±abs` of zero is treated as
/// tangency and both points coincide; below `-abs` there is no solution.
pub fn trilaterate(
    centers: [Point3; 3],
    radii: [f64; 3],
    tol: &Tolerance,
) -> Result<(Point3, Point3)> {
    let frame = SphereFrame::new(centers, radii, tol)?;
    let z2_tol = tol.at(radii[0] * radii[0]);
    let z = if frame.height_squared < -z2_tol {
        return Err(Error::NoSolution(format!(
            "spheres have no common point (squared height {:e})",
            frame.height_squared
        )));
    } else if frame.height_squared <= z2_tol {
        0.0
    } else {
        frame.height_squared.sqrt()
    };
    Ok((frame.foot + frame.normal * z, frame.foot - frame.normal * z))
}

/// Radical-axis decomposition of a three-sphere intersection: the solutions
/// are `foot ± normal * sqrt(height_squared)`.
pub(crate) struct SphereFrame {
    pub foot: Point3,
    pub normal: Vec3,
    pub height_squared: f64,
}

impl SphereFrame {
    pub fn new(centers: [Point3; 3], radii: [f64; 3], tol: &Tolerance) -> Result<Self> {
        let [c1, c2, c3] = centers;
        let [r1, r2, r3] = radii;
        if radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(Error::DegenerateInput(format!(
                "radii must be positive: {radii:?}"
            )));
        }

        // Local frame: c1 at the origin, c2 on the first axis, c3 in the
        // first coordinate plane.
        let ex = (c2 - c1).normalize(tol)?;
        let i = ex.dot(c3 - c1);
        let ey_raw = c3 - c1 - ex * i;
        let scale = (c2 - c1).norm().max((c3 - c1).norm());
        if ey_raw.norm() <= tol.at(scale) {
            return Err(Error::DegenerateInput(
                "sphere centers are collinear".into(),
            ));
        }
        let ey = ey_raw / ey_raw.norm();
        let d = (c2 - c1).norm();
        let j = ey.dot(c3 - c1);

        let x = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
        let y = (r1 * r1 - r3 * r3 + i * i + j * j) / (2.0 * j) - (i / j) * x;
        Ok(SphereFrame {
            foot: c1 + ex * x + ey * y,
            normal: ex.cross(ey),
            height_squared: r1 * r1 - x * x - y * y,
        })
    }
}

/// Solve the 3×3 system `m · x = rhs` by Cramer's rule. Returns `None` when
/// the determinant vanishes relative to the row scale.
pub(crate) fn solve3(m: [[f64; 3]; 3], rhs: [f64; 3]) -> Option<[f64; 3]> {
    let r0 = Vec3::from(m[0]);
    let r1 = Vec3::from(m[1]);
    let r2 = Vec3::from(m[2]);
    let det = r0.dot(r1.cross(r2));
    let scale = r0.norm() * r1.norm() * r2.norm();
    if !(det.abs() > 1e-14 * scale) {
        return None;
    }
    // Columns of the inverse are the cross products of the rows.
    let c0 = r1.cross(r2);
    let c1 = r2.cross(r0);
    let c2 = r0.cross(r1);
    let x = (c0 * rhs[0] + c1 * rhs[1] + c2 * rhs[2]) / det;
    Some(x.to_array())
}
