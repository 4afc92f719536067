//! Per-tetrahedron measurements.
//!
//! Vertices are labeled `P1..P4` (indices `0..4`). Edge lengths always use
//! the fixed sextuple labeling
//!
//! ```text
//! a = |P1P2|   b = |P2P3|   c = |P1P3|
//! d = |P3P4|   e = |P1P4|   f = |P2P4|
//! ```
//!
//! so `d, e, f` are the edges opposite `a, b, c` and the Cayley–Menger
//! matrix rows read `0 a² c² e²`, `a² 0 b² f²`, `c² b² 0 d²`, `e² f² d² 0`.
//! Face `i` is the face opposite vertex `P(i+1)`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourball;
use crate::geom::{Point3, Tolerance, Vec3};

/// One of the six edges, named by its sextuple label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Edge {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl Edge {
    pub const ALL: [Edge; 6] = [Edge::A, Edge::B, Edge::C, Edge::D, Edge::E, Edge::F];

    /// Endpoint vertex indices (0-based).
    pub const fn vertices(self) -> (usize, usize) {
        match self {
            Edge::A => (0, 1),
            Edge::B => (1, 2),
            Edge::C => (0, 2),
            Edge::D => (2, 3),
            Edge::E => (0, 3),
            Edge::F => (1, 3),
        }
    }

    pub const fn opposite(self) -> Edge {
        match self {
            Edge::A => Edge::D,
            Edge::B => Edge::E,
            Edge::C => Edge::F,
            Edge::D => Edge::A,
            Edge::E => Edge::B,
            Edge::F => Edge::C,
        }
    }

    /// The two faces (by opposite-vertex index) that share this edge.
    pub const fn faces(self) -> (usize, usize) {
        self.opposite().vertices()
    }

    pub const fn index(self) -> usize {
        self as usize
    }

    pub fn between(i: usize, j: usize) -> Option<Edge> {
        let key = (i.min(j), i.max(j));
        Edge::ALL.into_iter().find(|e| e.vertices() == key)
    }

    pub const fn label(self) -> char {
        match self {
            Edge::A => 'a',
            Edge::B => 'b',
            Edge::C => 'c',
            Edge::D => 'd',
            Edge::E => 'e',
            Edge::F => 'f',
        }
    }
}

/// Vertex indices of face `i` (the face opposite vertex `i`), ascending.
pub const fn face_vertices(i: usize) -> [usize; 3] {
    match i {
        0 => [1, 2, 3],
        1 => [0, 2, 3],
        2 => [0, 1, 3],
        _ => [0, 1, 2],
    }
}

/// Six edge lengths in the fixed `(a, b, c | d, e, f)` labeling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeSextuple {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

impl EdgeSextuple {
    pub fn new(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64) -> Result<Self> {
        Self::from_array([a, b, c, d, e, f])
    }

    pub fn from_array(v: [f64; 6]) -> Result<Self> {
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        if v.iter().any(|x| *x <= 0.0) {
            return Err(Error::DegenerateInput(format!(
                "edge lengths must be positive: {v:?}"
            )));
        }
        let [a, b, c, d, e, f] = v;
        Ok(EdgeSextuple { a, b, c, d, e, f })
    }

    pub fn to_array(&self) -> [f64; 6] {
        [self.a, self.b, self.c, self.d, self.e, self.f]
    }

    pub fn get(&self, edge: Edge) -> f64 {
        self.to_array()[edge.index()]
    }

    pub fn max(&self) -> f64 {
        self.to_array().into_iter().fold(0.0, f64::max)
    }

    /// The three opposite-pair sums `(a+d, b+e, c+f)`.
    pub fn opposite_sums(&self) -> [f64; 3] {
        [self.a + self.d, self.b + self.e, self.c + self.f]
    }

    /// Side lengths of face `i`, ordered by the edges of that face.
    pub fn face(&self, i: usize) -> [f64; 3] {
        match i {
            0 => [self.b, self.d, self.f],
            1 => [self.c, self.d, self.e],
            2 => [self.a, self.e, self.f],
            _ => [self.a, self.b, self.c],
        }
    }

    /// Bordered 5×5 Cayley–Menger determinant; equals `288 V²`.
    pub fn cayley_menger_d3(&self) -> f64 {
        let sq = self.to_array().map(|x| x * x);
        let [a2, b2, c2, d2, e2, f2] = sq;
        determinant([
            [0.0, 1.0, 1.0, 1.0, 1.0],
            [1.0, 0.0, a2, c2, e2],
            [1.0, a2, 0.0, b2, f2],
            [1.0, c2, b2, 0.0, d2],
            [1.0, e2, f2, d2, 0.0],
        ])
    }

    /// The same determinant through the 3×3 expansion in the squared
    /// lengths of the edges at `P1`.
    pub fn cayley_menger_blumenthal(&self) -> f64 {
        let [a2, b2, c2, d2, e2, f2] = self.to_array().map(|x| x * x);
        let p = a2 + c2 - b2;
        let q = c2 + e2 - d2;
        let r = a2 + e2 - f2;
        2.0 * (4.0 * a2 * c2 * e2 + p * q * r - a2 * q * q - c2 * r * r - e2 * p * p)
    }

    /// Whether the six lengths bound a non-degenerate tetrahedron.
    ///
    /// Triangle inequalities are checked first, face by face, then the sign
    /// of the Cayley–Menger determinant. The two conditions are independent,
    /// so both failure modes are reported separately.
    pub fn exists(&self, tol: &Tolerance) -> Existence {
        for face in 0..4 {
            let [x, y, z] = self.face(face);
            if !(x + y > z && x + z > y && y + z > x) {
                return Existence::NoTriangle { face };
            }
        }
        let d3 = self.cayley_menger_d3();
        if d3 > tol.at(self.max().powi(6)) {
            Existence::Yes
        } else {
            Existence::NoEmbedding { d3 }
        }
    }

    /// Canonical placement: `P1` at the origin, `P2` on the positive first
    /// axis, `P3` in the first coordinate plane with positive second
    /// coordinate and `P4` above that plane.
    pub fn realize(&self, tol: &Tolerance) -> Result<Tetra> {
        match self.exists(tol) {
            Existence::Yes => {}
            Existence::NoTriangle { face } => {
                return Err(Error::NotRealizable(format!(
                    "face {face} violates the triangle inequality"
                )))
            }
            Existence::NoEmbedding { d3 } => {
                return Err(Error::NotRealizable(format!(
                    "Cayley-Menger determinant D3 = {d3} is not positive"
                )))
            }
        }
        let EdgeSextuple { a, b, c, d, e, f } = *self;
        let x3 = (a * a + c * c - b * b) / (2.0 * a);
        let y3 = (c * c - x3 * x3).max(0.0).sqrt();
        let x4 = (a * a + e * e - f * f) / (2.0 * a);
        let y4 = (0.5 * (e * e + c * c - d * d) - x3 * x4) / y3;
        // 6V = a * y3 * z4 and 288 V^2 = D3.
        let z4 = (self.cayley_menger_d3() / 8.0).sqrt() / (a * y3);
        Tetra::new(
            [
                Vec3::ZERO,
                Vec3::new(a, 0.0, 0.0),
                Vec3::new(x3, y3, 0.0),
                Vec3::new(x4, y4, z4),
            ],
            tol,
        )
    }
}

/// Outcome of the edge-length realizability test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Existence {
    Yes,
    NoTriangle { face: usize },
    NoEmbedding { d3: f64 },
}

fn determinant<const N: usize>(mut m: [[f64; N]; N]) -> f64 {
    let mut det = 1.0;
    for col in 0..N {
        let pivot = (col..N)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap_or(col);
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        for row in col + 1..N {
            let factor = m[row][col] / m[col][col];
            for k in col..N {
                m[row][k] -= factor * m[col][k];
            }
        }
    }
    det
}

/// Four labeled vertices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tetra {
    vertices: [Point3; 4],
}

impl Tetra {
    /// Validated constructor: coordinates finite and the volume not
    /// negligible at the scale of the longest edge.
    pub fn new(vertices: [Point3; 4], tol: &Tolerance) -> Result<Self> {
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let t = Tetra { vertices };
        let l = t.edge_sextuple().max();
        if !(t.signed_volume().abs() > tol.at(l * l * l)) {
            return Err(Error::DegenerateInput(format!(
                "tetrahedron volume {:e} is negligible",
                t.signed_volume().abs()
            )));
        }
        Ok(t)
    }

    /// Admits flat vertex sets, for limit configurations such as the
    /// Soddy-circle apex. Angle computations on such a value fail.
    pub fn degenerate(vertices: [Point3; 4]) -> Self {
        Tetra { vertices }
    }

    pub fn vertices(&self) -> &[Point3; 4] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> Point3 {
        self.vertices[i]
    }

    /// Apply a point map (rigid motion, scaling, ...) to every vertex.
    pub fn map(&self, f: impl Fn(Point3) -> Point3) -> Tetra {
        Tetra {
            vertices: self.vertices.map(f),
        }
    }

    /// Reorder vertices: new vertex `k` is old vertex `order[k]`.
    pub fn permuted(&self, order: [usize; 4]) -> Tetra {
        Tetra {
            vertices: order.map(|i| self.vertices[i]),
        }
    }

    pub fn edge_vector(&self, edge: Edge) -> Vec3 {
        let (i, j) = edge.vertices();
        self.vertices[j] - self.vertices[i]
    }

    pub fn edge_length(&self, edge: Edge) -> f64 {
        self.edge_vector(edge).norm()
    }

    pub fn edge_sextuple(&self) -> EdgeSextuple {
        let [a, b, c, d, e, f] = Edge::ALL.map(|e| self.edge_length(e));
        EdgeSextuple { a, b, c, d, e, f }
    }

    pub fn signed_volume(&self) -> f64 {
        let [p1, p2, p3, p4] = self.vertices;
        (p2 - p1).dot((p3 - p1).cross(p4 - p1)) / 6.0
    }

    pub fn volume(&self) -> f64 {
        self.signed_volume().abs()
    }

    pub fn centroid(&self) -> Point3 {
        (self.vertices[0] + self.vertices[1] + self.vertices[2] + self.vertices[3]) * 0.25
    }

    pub fn face_points(&self, i: usize) -> [Point3; 3] {
        face_vertices(i).map(|k| self.vertices[k])
    }

    pub fn face_area(&self, i: usize) -> f64 {
        let [p, q, r] = self.face_points(i);
        0.5 * (q - p).cross(r - p).norm()
    }

    pub fn surface_area(&self) -> f64 {
        (0..4).map(|i| self.face_area(i)).sum()
    }

    fn check_nondegenerate(&self, tol: &Tolerance) -> Result<()> {
        let l = self.edge_sextuple().max();
        if self.volume() > tol.at(l * l * l) {
            Ok(())
        } else {
            Err(Error::DegenerateInput(format!(
                "tetrahedron volume {:e} is negligible",
                self.volume()
            )))
        }
    }

    /// Outward unit normals of the four faces, indexed by opposite vertex.
    pub fn outward_normals(&self, tol: &Tolerance) -> Result<[Vec3; 4]> {
        self.check_nondegenerate(tol)?;
        let mut out = [Vec3::ZERO; 4];
        for (i, n) in out.iter_mut().enumerate() {
            let [p, q, r] = self.face_points(i);
            let raw = (q - p).cross(r - p);
            let unit = raw / raw.norm();
            *n = if unit.dot(self.vertices[i] - p) > 0.0 {
                -unit
            } else {
                unit
            };
        }
        Ok(out)
    }

    /// The six dihedral angles in edge order `a..f`: the angle at an edge is
    /// `π` minus the angle between the outward normals of its two faces.
    pub fn dihedral_angles(&self, tol: &Tolerance) -> Result<[f64; 6]> {
        let n = self.outward_normals(tol)?;
        Ok(Edge::ALL.map(|e| {
            let (f1, f2) = e.faces();
            // arccos(-n1·n2) evaluated via atan2 for accuracy near 0 and π.
            n[f1].angle_to(-n[f2])
        }))
    }

    pub fn dihedral_sum(&self, tol: &Tolerance) -> Result<f64> {
        Ok(self.dihedral_angles(tol)?.iter().sum())
    }

    /// Interior angles of face `i` at its three vertices (ascending index).
    pub fn face_angles(&self, i: usize) -> [f64; 3] {
        let [p, q, r] = self.face_points(i);
        [
            (q - p).angle_to(r - p),
            (p - q).angle_to(r - q),
            (p - r).angle_to(q - r),
        ]
    }

    pub fn angle_report(&self, tol: &Tolerance) -> Result<AngleReport> {
        let dihedral = self.dihedral_angles(tol)?;
        let sum = dihedral.iter().sum();
        let face_angles = [0, 1, 2, 3].map(|i| self.face_angles(i));
        let flags = Classification {
            nonobtuse: dihedral.iter().all(|&x| x <= FRAC_PI_2 + tol.angle_abs),
            path: self.path_ordering(tol).is_some(),
            equifacial: self.is_equifacial(tol),
            fourball: fourball::is_fourball(self, tol),
        };
        Ok(AngleReport {
            dihedral,
            sum,
            face_angles,
            flags,
        })
    }

    /// Inscribed sphere: center weighted by opposite face areas,
    /// `r = 3V / total area`.
    pub fn insphere(&self, tol: &Tolerance) -> Result<(Point3, f64)> {
        self.check_nondegenerate(tol)?;
        let areas = [0, 1, 2, 3].map(|i| self.face_area(i));
        let total: f64 = areas.iter().sum();
        let mut center = Vec3::ZERO;
        for (p, w) in self.vertices.iter().zip(areas) {
            center += *p * (w / total);
        }
        Ok((center, 3.0 * self.volume() / total))
    }

    /// Circumscribed sphere through all four vertices.
    pub fn circumsphere(&self, tol: &Tolerance) -> Result<(Point3, f64)> {
        self.check_nondegenerate(tol)?;
        let [p1, p2, p3, p4] = self.vertices;
        let (u, v, w) = (p2 - p1, p3 - p1, p4 - p1);
        let denom = 2.0 * u.dot(v.cross(w));
        let offset = (v.cross(w) * u.norm_squared()
            + w.cross(u) * v.norm_squared()
            + u.cross(v) * w.norm_squared())
            / denom;
        Ok((p1 + offset, offset.norm()))
    }

    /// A vertex ordering `(O, A, B, C)` whose consecutive edges `OA`, `AB`,
    /// `BC` are mutually orthogonal within `angle_abs`, if one exists.
    /// Each path is tried in one direction only (12 orderings).
    pub fn path_ordering(&self, tol: &Tolerance) -> Option<[usize; 4]> {
        const ORDERS: [[usize; 4]; 12] = [
            [0, 1, 2, 3],
            [0, 1, 3, 2],
            [0, 2, 1, 3],
            [0, 2, 3, 1],
            [0, 3, 1, 2],
            [0, 3, 2, 1],
            [1, 0, 2, 3],
            [1, 0, 3, 2],
            [1, 2, 0, 3],
            [1, 3, 0, 2],
            [2, 0, 1, 3],
            [2, 1, 0, 3],
        ];
        ORDERS.into_iter().find(|o| self.is_path_ordering(*o, tol))
    }

    /// Whether `OA`, `AB`, `BC` are mutually orthogonal for `order = (O, A, B, C)`.
    pub fn is_path_ordering(&self, order: [usize; 4], tol: &Tolerance) -> bool {
        let max_cos = tol.angle_abs.sin();
        let orthogonal = |u: Vec3, v: Vec3| {
            let denom = u.norm() * v.norm();
            denom > 0.0 && (u.dot(v) / denom).abs() <= max_cos
        };
        let [p0, p1, p2, p3] = order.map(|i| self.vertices[i]);
        let (s1, s2, s3) = (p1 - p0, p2 - p1, p3 - p2);
        orthogonal(s1, s2) && orthogonal(s2, s3) && orthogonal(s1, s3)
    }

    pub fn is_path(&self, tol: &Tolerance) -> bool {
        self.path_ordering(tol).is_some()
    }

    /// All faces congruent, i.e. opposite edges pairwise equal.
    pub fn is_equifacial(&self, tol: &Tolerance) -> bool {
        let s = self.edge_sextuple();
        tol.eq(s.a, s.d) && tol.eq(s.b, s.e) && tol.eq(s.c, s.f)
    }

    /// Barycentric coordinates of `p`.
    pub fn barycentric(&self, p: Point3) -> [f64; 4] {
        let total = self.signed_volume();
        let mut out = [0.0; 4];
        for (i, w) in out.iter_mut().enumerate() {
            let mut verts = self.vertices;
            verts[i] = p;
            *w = Tetra { vertices: verts }.signed_volume() / total;
        }
        out
    }

    /// Incenter and inradius of face `i`.
    pub fn face_incircle(&self, i: usize) -> (Point3, f64) {
        let [p, q, r] = self.face_points(i);
        let (lp, lq, lr) = ((q - r).norm(), (p - r).norm(), (p - q).norm());
        let per = lp + lq + lr;
        let center = (p * lp + q * lq + r * lr) / per;
        (center, 2.0 * self.face_area(i) / per)
    }

    /// Tetrahedron with positive signed volume (swapping `P3`, `P4` if needed).
    pub fn positively_oriented(&self) -> Tetra {
        if self.signed_volume() < 0.0 {
            self.permuted([0, 1, 3, 2])
        } else {
            *self
        }
    }
}

/// Class membership of a tetrahedron.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub nonobtuse: bool,
    pub path: bool,
    pub equifacial: bool,
    pub fourball: bool,
}

/// Dihedral angles (radians, edge order `a..f`), their sum, the interior
/// angles of each face and class flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleReport {
    pub dihedral: [f64; 6],
    pub sum: f64,
    pub face_angles: [[f64; 3]; 4],
    pub flags: Classification,
}

impl AngleReport {
    pub fn get(&self, edge: Edge) -> f64 {
        self.dihedral[edge.index()]
    }

    /// `Σ_T` in degrees.
    pub fn sum_degrees(&self) -> f64 {
        self.sum.to_degrees()
    }

    /// The three opposite-edge dihedral sums `(α_a+α_d, α_b+α_e, α_c+α_f)`.
    pub fn opposite_sums(&self) -> [f64; 3] {
        [Edge::A, Edge::B, Edge::C].map(|e| self.get(e) + self.get(e.opposite()))
    }
}

/// `6 arccos(1/3)`: the dihedral angle sum of the regular tetrahedron.
pub fn regular_sum() -> f64 {
    6.0 * (1.0f64 / 3.0).acos()
}

pub const TWO_PI: f64 = 2.0 * PI;
pub const THREE_PI: f64 = 3.0 * PI;

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    pub(crate) fn regular() -> Tetra {
        EdgeSextuple::new(1.0, 1.0, 1.0, 1.0, 1.0, 1.0)
            .unwrap()
            .realize(&tol())
            .unwrap()
    }

    #[test]
    fn edge_labels_are_consistent() {
        for e in Edge::ALL {
            let (i, j) = e.vertices();
            let (k, l) = e.opposite().vertices();
            let mut all = [i, j, k, l];
            all.sort();
            assert_eq!(
                all,
                [0, 1, 2, 3],
                "{e:?} and its opposite cover all vertices"
            );
            assert_eq!(Edge::between(j, i), Some(e));
            let (f1, f2) = e.faces();
            assert!(!face_vertices(f1).contains(&f1) && face_vertices(f1).contains(&i));
            assert!(face_vertices(f2).contains(&j));
        }
    }

    #[test]
    fn sextuple_rejects_bad_lengths() {
        assert!(EdgeSextuple::new(1.0, 1.0, 0.0, 1.0, 1.0, 1.0).is_err());
        assert_eq!(
            EdgeSextuple::new(1.0, f64::NAN, 1.0, 1.0, 1.0, 1.0),
            Err(Error::NonFinite)
        );
    }

    #[test]
    fn cayley_menger_fixtures() {
        let cases: [([f64; 6], f64); 4] = [
            ([1.0; 6], 4.0),
            ([5.0, 5.0, 4.0, 3.0, 3.0, 4.0], 10240.0),
            ([1.0, 3.0, 1.0, 5.0, 3.0, 1.0], 468.0),
            ([2.0, 11.0, 11.0, 20.0, 11.0, 11.0], 256000.0),
        ];
        for (edges, expected) in cases {
            let s = EdgeSextuple::from_array(edges).unwrap();
            assert_relative_eq!(s.cayley_menger_d3(), expected, max_relative = 1e-9);
            assert_relative_eq!(s.cayley_menger_blumenthal(), expected, max_relative = 1e-9);
        }
        let ex4 = EdgeSextuple::new(1.0, 1.0, 1.0, 1.0, 1.0, 1.75).unwrap();
        assert!((ex4.cayley_menger_d3() + 0.3828).abs() < 1e-3);
        let cube = EdgeSextuple::new(1.0, 2f64.sqrt(), 1.0, 2f64.sqrt(), 1.0, 2f64.sqrt()).unwrap();
        assert_relative_eq!(cube.cayley_menger_blumenthal(), 8.0, max_relative = 1e-9);
        let ex5 = EdgeSextuple::new(12.0, 12.0, 20.0, 11.0, 11.0, 3.0).unwrap();
        assert_relative_eq!(
            ex5.cayley_menger_blumenthal(),
            448000.0,
            max_relative = 1e-9
        );
    }

    #[test]
    fn existence_modes() {
        let t = tol();
        let ex4 = EdgeSextuple::new(1.0, 1.0, 1.0, 1.0, 1.0, 1.75).unwrap();
        assert!(matches!(ex4.exists(&t), Existence::NoEmbedding { .. }));
        let bad = EdgeSextuple::new(1.0, 3.0, 1.0, 3.0, 3.0, 3.0).unwrap();
        assert!(matches!(bad.exists(&t), Existence::NoTriangle { face: 3 }));
        assert_eq!(
            EdgeSextuple::from_array([1.0; 6]).unwrap().exists(&t),
            Existence::Yes
        );
        let short = EdgeSextuple::new(1.1, 1.1, 2.0, 2.0, 2.0, 1.1).unwrap();
        match short.exists(&t) {
            Existence::NoEmbedding { d3 } => assert!((d3 + 11.84).abs() < 1e-2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(ex4.realize(&t), Err(Error::NotRealizable(_))));
    }

    #[test]
    fn realize_canonical_regular() {
        let r = regular();
        let v = r.vertices();
        assert_eq!(v[0], Vec3::ZERO);
        assert_eq!(v[1], Vec3::X);
        assert_relative_eq!(v[2].x, 0.5, epsilon = 1e-15);
        assert_relative_eq!(v[2].y, 3f64.sqrt() / 2.0, epsilon = 1e-15);
        assert!(v[3].z > 0.0);
        assert_relative_eq!(r.volume(), 2f64.sqrt() / 12.0, max_relative = 1e-12);
        for e in Edge::ALL {
            assert_relative_eq!(r.edge_length(e), 1.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn mutual_tangency_example_volume() {
        // Vertices as printed for the mirror-symmetric example with all
        // opposite-edge sums 8.
        let r21 = 21f64.sqrt();
        let t = Tetra::new(
            [
                Vec3::new(-2.0, 0.0, 0.0),
                Vec3::new(2.0, 0.0, 0.0),
                Vec3::new(0.0, r21, 0.0),
                Vec3::new(0.0, 5.0 * r21 / 21.0, 4.0 * 105f64.sqrt() / 21.0),
            ],
            &tol(),
        )
        .unwrap();
        let s = t.edge_sextuple();
        for sum in s.opposite_sums() {
            assert_relative_eq!(sum, 8.0, max_relative = 1e-12);
        }
        let realized = s.realize(&tol()).unwrap();
        assert_relative_eq!(realized.volume(), t.volume(), max_relative = 1e-12);
        assert_relative_eq!(t.volume(), 8.0 * 5f64.sqrt() / 3.0, max_relative = 1e-12);
    }

    #[test]
    fn path_volume_and_detection() {
        let (a, b, c) = (1.5, 0.7, 2.2);
        let t = Tetra::new(
            [
                Vec3::ZERO,
                Vec3::new(a, 0.0, 0.0),
                Vec3::new(a, b, 0.0),
                Vec3::new(a, b, c),
            ],
            &tol(),
        )
        .unwrap();
        assert_relative_eq!(t.volume(), a * b * c / 6.0, max_relative = 1e-12);
        assert_eq!(t.path_ordering(&tol()), Some([0, 1, 2, 3]));
        assert!(!regular().is_path(&tol()));
        // Orderings are found regardless of labeling.
        assert!(t.permuted([2, 0, 3, 1]).is_path(&tol()));
    }

    #[test]
    fn regular_angles_and_spheres() {
        let t = tol();
        let r = regular();
        let report = r.angle_report(&t).unwrap();
        for x in report.dihedral {
            assert_relative_eq!(x, (1.0f64 / 3.0).acos(), max_relative = 1e-12);
        }
        assert!(report.flags.fourball && report.flags.equifacial && !report.flags.path);
        let (_, inr) = r.insphere(&t).unwrap();
        let (cc, circ) = r.circumsphere(&t).unwrap();
        assert_relative_eq!(inr, 6f64.sqrt() / 12.0, max_relative = 1e-12);
        assert_relative_eq!(circ, 6f64.sqrt() / 4.0, max_relative = 1e-12);
        assert!((cc - r.centroid()).norm() < 1e-14);
    }

    #[test]
    fn degenerate_rejected() {
        let flat = [Vec3::ZERO, Vec3::X, Vec3::Y, Vec3::new(1.0, 1.0, 0.0)];
        assert!(Tetra::new(flat, &tol()).is_err());
        let t = Tetra::degenerate(flat);
        assert!(matches!(
            t.dihedral_angles(&tol()),
            Err(Error::DegenerateInput(_))
        ));
        assert!(t.insphere(&tol()).is_err());
    }

    #[test]
    fn determinant_matches_cofactor() {
        let m = [[2.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 2.0]];
        assert_relative_eq!(determinant(m), 4.0, max_relative = 1e-14);
        assert_eq!(determinant([[0.0, 1.0], [1.0, 0.0]]), -1.0);
    }
}
