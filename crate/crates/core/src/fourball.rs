//! 4-ball tetrahedra: tetrahedra with a midsphere tangent to all six edges.
//!
//! Equivalently, four mutually externally tangent balls centred at the
//! vertices. The ball radius `l_i` at vertex `P_i` is also the tangent length
//! from `P_i` to the midsphere, and every edge satisfies
//! `|P_i P_j| = l_i + l_j`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{self, Point3, SphereFrame, Tolerance, Vec3};
use crate::tetra::{Edge, EdgeSextuple, Existence, Tetra};

/// Tangent lengths of a triangle `A1 A2 A3`, one per vertex, so that
/// `|A1A2| = l1 + l2`, `|A1A3| = l1 + l3` and `|A2A3| = l2 + l3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentLengths3 {
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
}

impl TangentLengths3 {
    pub fn new(l1: f64, l2: f64, l3: f64) -> Result<Self> {
        if [l1, l2, l3].iter().any(|l| !(l.is_finite() && *l > 0.0)) {
            return Err(Error::DegenerateInput(format!(
                "tangent lengths must be positive: {:?}",
                [l1, l2, l3]
            )));
        }
        Ok(TangentLengths3 { l1, l2, l3 })
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.l1, self.l2, self.l3]
    }
}

/// Invert `a = l1 + l2`, `b = l1 + l3`, `c = l2 + l3`.
pub fn triangle_to_tangents(a: f64, b: f64, c: f64) -> Result<TangentLengths3> {
    if !(a + b > c && a + c > b && b + c > a) {
        return Err(Error::NoTriangle { sides: [a, b, c] });
    }
    TangentLengths3::new(0.5 * (a + b - c), 0.5 * (a + c - b), 0.5 * (b + c - a))
}

/// The forward map; always yields a valid triangle `(a, b, c)`.
pub fn tangents_to_triangle(t: &TangentLengths3) -> (f64, f64, f64) {
    (t.l1 + t.l2, t.l1 + t.l3, t.l2 + t.l3)
}

/// Tangent lengths of the triangle with the given vertices, in vertex order.
pub fn triangle_tangents_at(points: [Point3; 3]) -> Result<TangentLengths3> {
    let [p1, p2, p3] = points;
    triangle_to_tangents(p1.distance(p2), p1.distance(p3), p2.distance(p3))
}

/// Tangent lengths (ball radii) `l1..l4` at vertices `P1..P4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct TangentLengths4([f64; 4]);

impl TangentLengths4 {
    pub fn new(l: [f64; 4]) -> Result<Self> {
        if l.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
            return Err(Error::DegenerateInput(format!(
                "tangent lengths must be positive: {l:?}"
            )));
        }
        Ok(TangentLengths4(l))
    }

    pub fn get(&self, vertex: usize) -> f64 {
        self.0[vertex]
    }

    pub fn as_array(&self) -> [f64; 4] {
        self.0
    }

    /// The common opposite-edge sum `l1 + l2 + l3 + l4`.
    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Induced edge lengths `l_i + l_j` in sextuple labeling.
    pub fn sextuple(&self) -> EdgeSextuple {
        let [a, b, c, d, e, f] = Edge::ALL.map(|e| {
            let (i, j) = e.vertices();
            self.0[i] + self.0[j]
        });
        EdgeSextuple { a, b, c, d, e, f }
    }
}

impl TryFrom<[f64; 4]> for TangentLengths4 {
    type Error = Error;
    fn try_from(l: [f64; 4]) -> Result<Self> {
        TangentLengths4::new(l)
    }
}

impl From<TangentLengths4> for [f64; 4] {
    fn from(t: TangentLengths4) -> Self {
        t.0
    }
}

/// Largest pairwise difference of the opposite-edge sums, relative to the
/// largest sum.
pub fn opposite_sum_residual(s: &EdgeSextuple) -> f64 {
    let sums = s.opposite_sums();
    let hi = sums.iter().copied().fold(f64::MIN, f64::max);
    let lo = sums.iter().copied().fold(f64::MAX, f64::min);
    (hi - lo) / hi
}

/// Canonical 4-ball predicate: `a + d = b + e = c + f` within tolerance.
pub fn is_fourball(t: &Tetra, tol: &Tolerance) -> bool {
    let s = t.edge_sextuple();
    let sums = s.opposite_sums();
    let scale = sums.iter().copied().fold(0.0, f64::max);
    tol.eq_at(sums[0], sums[1], scale)
        && tol.eq_at(sums[1], sums[2], scale)
        && tol.eq_at(sums[0], sums[2], scale)
}

/// Outcome of one of the equivalent 4-ball conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub pass: bool,
    /// Dimensionless for length conditions (divided by the longest edge),
    /// radians for the angle condition.
    pub residual: f64,
}

/// The five equivalent characterisations, evaluated independently.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourBallChecks {
    /// Opposite-edge length sums are equal.
    pub edge_sums: ConditionCheck,
    /// Opposite-edge dihedral angle sums are equal.
    pub dihedral_sums: ConditionCheck,
    /// Incircles of adjacent faces touch the shared edge at one point.
    pub incircles_touch: ConditionCheck,
    /// Four mutually externally tangent balls centred at the vertices exist.
    pub kissing_balls: ConditionCheck,
    /// Perpendiculars to the faces through the face incenters are concurrent.
    pub incenter_normals: ConditionCheck,
}

impl FourBallChecks {
    pub fn as_array(&self) -> [ConditionCheck; 5] {
        [
            self.edge_sums,
            self.dihedral_sums,
            self.incircles_touch,
            self.kissing_balls,
            self.incenter_normals,
        ]
    }

    pub fn all_pass(&self) -> bool {
        self.as_array().iter().all(|c| c.pass)
    }

    pub fn all_agree(&self) -> bool {
        let checks = self.as_array();
        checks.iter().all(|c| c.pass == checks[0].pass)
    }
}

pub fn fourball_checks(t: &Tetra, tol: &Tolerance) -> Result<FourBallChecks> {
    let s = t.edge_sextuple();
    let scale = s.max();
    let len_ok = |r: f64| r <= tol.at(1.0);

    let r1 = {
        let sums = s.opposite_sums();
        let hi = sums.iter().copied().fold(f64::MIN, f64::max);
        let lo = sums.iter().copied().fold(f64::MAX, f64::min);
        (hi - lo) / scale
    };

    let angles = t.dihedral_angles(tol)?;
    let r2 = {
        let sums =
            [Edge::A, Edge::B, Edge::C].map(|e| angles[e.index()] + angles[e.opposite().index()]);
        let hi = sums.iter().copied().fold(f64::MIN, f64::max);
        let lo = sums.iter().copied().fold(f64::MAX, f64::min);
        hi - lo
    };

    // Touching point of each face incircle on each edge of that face: the
    // foot of the perpendicular from the incenter.
    let incircles = [0, 1, 2, 3].map(|i| t.face_incircle(i));
    let r3 = Edge::ALL
        .into_iter()
        .map(|e| {
            let (i, j) = e.vertices();
            let (p, q) = (t.vertex(i), t.vertex(j));
            let u = (q - p) / (q - p).norm();
            let (f1, f2) = e.faces();
            let foot = |c: Point3| p + u * (c - p).dot(u);
            foot(incircles[f1].0).distance(foot(incircles[f2].0))
        })
        .fold(0.0, f64::max)
        / scale;

    // Least-squares ball radii for the six tangency equations.
    let lengths = s.to_array();
    let total: f64 = lengths.iter().sum();
    let mut at_vertex = [0.0; 4];
    for e in Edge::ALL {
        let (i, j) = e.vertices();
        at_vertex[i] += lengths[e.index()];
        at_vertex[j] += lengths[e.index()];
    }
    let radii = at_vertex.map(|sv| 0.5 * (sv - total / 3.0));
    let r4 = Edge::ALL
        .into_iter()
        .map(|e| {
            let (i, j) = e.vertices();
            (radii[i] + radii[j] - lengths[e.index()]).abs()
        })
        .fold(0.0, f64::max)
        / scale;
    let radii_positive = radii.iter().all(|&r| r > 0.0);

    let normals = t.outward_normals(tol)?;
    let lines: Vec<(Point3, Vec3)> = (0..4).map(|i| (incircles[i].0, normals[i])).collect();
    let r5 = match least_squares_point(&lines) {
        Some(x) => {
            lines
                .iter()
                .map(|(base, dir)| {
                    let w = x - *base;
                    (w - *dir * w.dot(*dir)).norm()
                })
                .fold(0.0, f64::max)
                / scale
        }
        None => f64::INFINITY,
    };

    Ok(FourBallChecks {
        edge_sums: ConditionCheck {
            pass: len_ok(r1),
            residual: r1,
        },
        dihedral_sums: ConditionCheck {
            pass: r2 <= tol.angle_abs,
            residual: r2,
        },
        incircles_touch: ConditionCheck {
            pass: len_ok(r3),
            residual: r3,
        },
        kissing_balls: ConditionCheck {
            pass: len_ok(r4) && radii_positive,
            residual: r4,
        },
        incenter_normals: ConditionCheck {
            pass: len_ok(r5),
            residual: r5,
        },
    })
}

/// Point minimising the summed squared distance to a set of lines given by
/// base point and unit direction.
fn least_squares_point(lines: &[(Point3, Vec3)]) -> Option<Point3> {
    let mut m = [[0.0; 3]; 3];
    let mut rhs = [0.0; 3];
    for (base, dir) in lines {
        for r in 0..3 {
            for c in 0..3 {
                let proj = if r == c { 1.0 } else { 0.0 } - dir[r] * dir[c];
                m[r][c] += proj;
                rhs[r] += proj * base[c];
            }
        }
    }
    geom::solve3(m, rhs).map(Vec3::from)
}

/// Tangent lengths of a 4-ball tetrahedron, from face `P1P2P3` extended to
/// `P4` and checked against all six edges.
pub fn fourball_tangents(t: &Tetra, tol: &Tolerance) -> Result<TangentLengths4> {
    let s = t.edge_sextuple();
    let not_fourball = || Error::NotFourBall {
        residual: opposite_sum_residual(&s),
    };
    if !is_fourball(t, tol) {
        return Err(not_fourball());
    }
    let base = triangle_tangents_at(t.face_points(3)).map_err(|_| not_fourball())?;
    let l4 = s.e - base.l1;
    let l = [base.l1, base.l2, base.l3, l4];
    let scale = s.max();
    for e in Edge::ALL {
        let (i, j) = e.vertices();
        if !tol.eq_at(l[i] + l[j], s.get(e), scale) {
            return Err(not_fourball());
        }
    }
    TangentLengths4::new(l).map_err(|_| not_fourball())
}

/// Point where the midsphere touches edge `P_i P_j`: at distance `l_i` from `P_i`.
pub fn tangency_point(t: &Tetra, l: &TangentLengths4, edge: Edge) -> Point3 {
    let (i, j) = edge.vertices();
    let (p, q) = (t.vertex(i), t.vertex(j));
    p + (q - p) * (l.get(i) / (q - p).norm())
}

/// Where a point sits relative to a tetrahedron.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CenterLocation {
    Interior,
    Boundary,
    Exterior,
}

pub fn locate(t: &Tetra, p: Point3, tol: &Tolerance) -> CenterLocation {
    let bary = t.barycentric(p);
    let eps = tol.at(1.0);
    if bary.iter().all(|&w| w > eps) {
        CenterLocation::Interior
    } else if bary.iter().any(|&w| w < -eps) {
        CenterLocation::Exterior
    } else {
        CenterLocation::Boundary
    }
}

/// Sphere tangent to all six edge lines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MidSphere {
    pub center: Point3,
    pub radius: f64,
    pub location: CenterLocation,
}

/// Midsphere of a 4-ball tetrahedron.
///
/// The radius is `ρ = 2 l1 l2 l3 l4 / (3 V)`. The center is seeded at the
/// closest approach of the incenter perpendiculars of faces 1 and 2 and
/// then polished by Gauss–Newton on the six residuals
/// `dist(G, edge line) − ρ`.
pub fn midsphere(t: &Tetra, tol: &Tolerance) -> Result<MidSphere> {
    let l = fourball_tangents(t, tol)?;
    let volume = t.volume();
    let radius = 2.0 * l.as_array().iter().product::<f64>() / (3.0 * volume);

    let normals = t.outward_normals(tol)?;
    let (c0, _) = t.face_incircle(0);
    let (c1, _) = t.face_incircle(1);
    let mut g = closest_approach(c0, normals[0], c1, normals[1])
        .ok_or_else(|| Error::DegenerateInput("incenter perpendiculars are parallel".into()))?;

    let lines = Edge::ALL.map(|e| {
        let (i, _) = e.vertices();
        let dir = t.edge_vector(e);
        (t.vertex(i), dir / dir.norm())
    });
    let scale = t.edge_sextuple().max();
    for _ in 0..20 {
        let mut jtj = [[0.0; 3]; 3];
        let mut jtr = [0.0; 3];
        let mut worst: f64 = 0.0;
        for (base, dir) in &lines {
            let w = g - *base;
            let perp = w - *dir * w.dot(*dir);
            let dist = perp.norm();
            if dist == 0.0 {
                continue;
            }
            let grad = perp / dist;
            let r = dist - radius;
            worst = worst.max(r.abs());
            for a in 0..3 {
                jtr[a] += grad[a] * r;
                for b in 0..3 {
                    jtj[a][b] += grad[a] * grad[b];
                }
            }
        }
        if worst <= 1e-15 * scale {
            break;
        }
        match geom::solve3(jtj, jtr) {
            Some(step) => {
                let step = Vec3::from(step);
                g = g - step;
                if step.norm() <= 1e-16 * scale {
                    break;
                }
            }
            None => break,
        }
    }

    Ok(MidSphere {
        center: g,
        radius,
        location: locate(t, g, tol),
    })
}

/// Midpoint of the shortest segment between two lines.
fn closest_approach(p: Point3, u: Vec3, q: Point3, v: Vec3) -> Option<Point3> {
    let w = p - q;
    let (a, b, c) = (u.dot(u), u.dot(v), v.dot(v));
    let (d, e) = (u.dot(w), v.dot(w));
    let denom = a * c - b * b;
    if denom.abs() <= 1e-14 * a * c {
        return None;
    }
    let s = (b * e - c * d) / denom;
    let t = (a * e - b * d) / denom;
    Some((p + u * s).midpoint(q + v * t))
}

/// Whether four balls with the given radii, centred at the vertices of some
/// tetrahedron, can be mutually externally tangent. Triangle inequalities
/// always hold for the induced lengths, so the binding test is `D3 > 0`.
pub fn kissing_feasible(l: &TangentLengths4, tol: &Tolerance) -> bool {
    l.sextuple().exists(tol) == Existence::Yes
}

/// Inner Soddy circle of three mutually tangent circles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SoddyCircle {
    pub center: Point3,
    pub radius: f64,
}

/// Descartes: `k0 = k1 + k2 + k3 + 2 sqrt(k1 k2 + k2 k3 + k3 k1)`.
pub fn soddy_radius(t: &TangentLengths3) -> f64 {
    let [k1, k2, k3] = t.to_array().map(|l| 1.0 / l);
    1.0 / (k1 + k2 + k3 + 2.0 * (k1 * k2 + k2 * k3 + k3 * k1).sqrt())
}

/// Inner Soddy circle for circles centred at `points` with radii `t`.
pub fn soddy_inner(
    points: [Point3; 3],
    t: &TangentLengths3,
    tol: &Tolerance,
) -> Result<SoddyCircle> {
    let [p1, p2, p3] = points;
    let (a, b, c) = tangents_to_triangle(t);
    let residual = [
        (p1.distance(p2) - a).abs(),
        (p1.distance(p3) - b).abs(),
        (p2.distance(p3) - c).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    if residual > tol.at(a.max(b).max(c)) {
        return Err(Error::BadConfiguration { residual });
    }
    let radius = soddy_radius(t);
    // The in-plane point at distance l_i + l0 from every A_i is the foot of
    // the three-sphere intersection (zero height at tangency).
    let frame = SphereFrame::new(points, t.to_array().map(|l| l + radius), tol)?;
    Ok(SoddyCircle {
        center: frame.foot,
        radius,
    })
}

/// Which of the two mirror apexes to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ApexSide {
    /// Side of `(A2 − A1) × (A3 − A1)`.
    #[default]
    Positive,
    Mirror,
}

/// A 4-ball tetrahedron on a given face with apex tangent length `l4`.
///
/// The face tangent lengths are fixed by the triangle; the apex is the
/// common point of the spheres of radius `l_i + l4` around the face
/// vertices. Requires `l4 > l0`, the inner Soddy radius.
pub fn fourball_from_face(
    triangle: [Point3; 3],
    l4: f64,
    side: ApexSide,
    tol: &Tolerance,
) -> Result<Tetra> {
    if !(l4.is_finite() && l4 > 0.0) {
        return Err(Error::OutOfDomain(format!("l4 must be positive, got {l4}")));
    }
    let t3 = triangle_tangents_at(triangle)?;
    let l0 = soddy_radius(&t3);
    if l4 <= l0 + tol.at(l0) {
        return Err(Error::ApexDegenerate { l0, l4 });
    }
    let radii = t3.to_array().map(|l| l + l4);
    let (up, down) = geom::trilaterate(triangle, radii, tol).map_err(|e| match e {
        Error::NoSolution(msg) => Error::NotConstructible {
            reason: format!(
                "no apex ball of radius {l4} touches all three face balls (Soddy radius l0 = {l0}): {msg}"
            ),
            solver: false,
        },
        other => other,
    })?;
    let apex = match side {
        ApexSide::Positive => up,
        ApexSide::Mirror => down,
    };
    let [a1, a2, a3] = triangle;
    Tetra::new([a1, a2, a3, apex], tol).map_err(|e| match e {
        Error::DegenerateInput(_) => Error::ApexDegenerate { l0, l4 },
        other => other,
    })
}

/// `D3` of the sextuple `(a, b, c, k − a, k − b, k − c)`: every member has
/// equal opposite-edge sums `k`. Quadratic in `k` for a fixed face.
pub fn d3_profile(a: f64, b: f64, c: f64, k: f64) -> f64 {
    EdgeSextuple {
        a,
        b,
        c,
        d: k - a,
        e: k - b,
        f: k - c,
    }
    .cayley_menger_blumenthal()
}

/// Converged solution of the cone construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeSolution {
    /// Tangent lengths at the three far vertices (apex length fixed at 1).
    pub lengths: [f64; 3],
    pub tetra: Tetra,
    pub iterations: usize,
}

/// The unique (up to scale) 4-ball tetrahedron with apex at the origin and
/// its three apex edges along `dirs`, normalised to apex tangent length 1.
pub fn fourball_from_cone(dirs: [Vec3; 3], tol: &Tolerance) -> Result<Tetra> {
    fourball_from_cone_with_start(dirs, [1.0; 3], tol).map(|s| s.tetra)
}

/// Newton iteration for the cone tangent lengths, started at `start`.
///
/// With apex tangent length 1 the edge conditions
/// `|(1+l_i) u_i − (1+l_j) u_j| = l_i + l_j` are equivalent to
/// `t_i t_j = sin²(θ_ij / 2)` with `t_i = l_i / (1 + l_i)`; the iteration
/// runs on `ln t_i`, and a solution needs every `t_i < 1`. The result is checked against the original
/// conditions before it is returned.
pub fn fourball_from_cone_with_start(
    dirs: [Vec3; 3],
    start: [f64; 3],
    tol: &Tolerance,
) -> Result<ConeSolution> {
    let u = [
        dirs[0].normalize(tol)?,
        dirs[1].normalize(tol)?,
        dirs[2].normalize(tol)?,
    ];
    let triple = u[0].dot(u[1].cross(u[2]));
    if triple.abs() <= 1e3 * f64::EPSILON {
        return Err(Error::DegenerateInput(
            "cone directions are coplanar".into(),
        ));
    }
    if start.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
        return Err(Error::OutOfDomain(format!(
            "start must be positive: {start:?}"
        )));
    }

    const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];
    let target = PAIRS.map(|(i, j)| (0.5 * u[i].angle_to(u[j])).sin().powi(2).ln());
    let residual = |y: &[f64; 3]| {
        [0, 1, 2].map(|row| {
            let (i, j) = PAIRS[row];
            y[i] + y[j] - target[row]
        })
    };
    let norm_inf = |r: &[f64; 3]| r.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let edge_residual = |l: &[f64; 3]| {
        PAIRS.iter().fold(0.0f64, |m, &(i, j)| {
            let d = u[i] * (1.0 + l[i]) - u[j] * (1.0 + l[j]);
            m.max((d.norm() - (l[i] + l[j])).abs())
        })
    };
    let mut jac = [[0.0; 3]; 3];
    for (row, &(i, j)) in PAIRS.iter().enumerate() {
        jac[row][i] = 1.0;
        jac[row][j] = 1.0;
    }

    let mut y = start.map(|l| (l / (1.0 + l)).ln());
    let mut r = residual(&y);
    const MAX_ITER: usize = 50;
    for iter in 0..MAX_ITER {
        if norm_inf(&r) <= 1e-14 {
            if y.iter().any(|&x| x >= 0.0) {
                break;
            }
            let l = y.map(|x| x.exp() / (1.0 - x.exp()));
            let scale = 1.0 + l.iter().copied().fold(0.0, f64::max);
            if !(edge_residual(&l) <= 1e-9 * scale) {
                break;
            }
            let tetra = Tetra::new(
                [
                    Vec3::ZERO,
                    u[0] * (1.0 + l[0]),
                    u[1] * (1.0 + l[1]),
                    u[2] * (1.0 + l[2]),
                ],
                tol,
            )?;
            return Ok(ConeSolution {
                lengths: l,
                tetra,
                iterations: iter,
            });
        }
        let Some(step) = geom::solve3(jac, r) else {
            break;
        };
        y = [0, 1, 2].map(|k| y[k] - step[k]);
        r = residual(&y);
    }

    let feasible = cone_admits_fourball(&u);
    Err(Error::NotConstructible {
        reason: if feasible {
            format!("cone solver did not converge from {start:?}")
        } else {
            "no 4-ball tetrahedron fits this cone: some tangent length would be unbounded".into()
        },
        solver: feasible,
    })
}

/// Diagnostic used when the Newton iteration fails. With apex tangent
/// length 1, `t_i = l_i / (1 + l_i)` obeys `t_i t_j = sin²(θ_ij / 2)`, so a
/// positive solution needs every `t_i < 1`.
fn cone_admits_fourball(u: &[Vec3; 3]) -> bool {
    let s = |i: usize, j: usize| (0.5 * u[i].angle_to(u[j])).sin();
    let t = [
        s(0, 1) * s(0, 2) / s(1, 2),
        s(0, 1) * s(1, 2) / s(0, 2),
        s(0, 2) * s(1, 2) / s(0, 1),
    ];
    t.iter().all(|&x| x < 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn z() -> f64 {
        8.0 * 14f64.sqrt() / 15.0
    }

    /// Asymmetric example ordered (C, A, B, D).
    fn asymmetric() -> Tetra {
        Tetra::new(
            [
                Vec3::ZERO,
                Vec3::new(12.0, 0.0, 0.0),
                Vec3::new(0.0, 5.0, 0.0),
                Vec3::new(4.0 / 3.0, 9.0 / 5.0, z()),
            ],
            &tol(),
        )
        .unwrap()
    }

    fn regular() -> Tetra {
        EdgeSextuple::from_array([1.0; 6])
            .unwrap()
            .realize(&tol())
            .unwrap()
    }

    #[test]
    fn triangle_tangent_round_trip() {
        let t = triangle_to_tangents(1.0, 1.0, 1.0).unwrap();
        assert_eq!(t.to_array(), [0.5; 3]);
        let t = triangle_to_tangents(3.0, 4.0, 5.0).unwrap();
        assert_eq!(t.to_array(), [1.0, 2.0, 3.0]);
        assert_eq!(tangents_to_triangle(&t), (3.0, 4.0, 5.0));
        let t = TangentLengths3::new(2.0, 10.0, 3.0).unwrap();
        assert_eq!(tangents_to_triangle(&t), (12.0, 5.0, 13.0));
        assert!(matches!(
            triangle_to_tangents(1.0, 1.0, 3.0),
            Err(Error::NoTriangle { .. })
        ));
    }

    #[test]
    fn asymmetric_face_tangents() {
        // a = |BC| = 5, b = |AC| = 12, c = |AB| = 13: l1 at C, l2 at B, l3 at A.
        let t = triangle_to_tangents(5.0, 12.0, 13.0).unwrap();
        assert_eq!(t.to_array(), [2.0, 3.0, 10.0]);
    }

    #[test]
    fn asymmetric_tangents_and_midsphere() {
        let t = asymmetric();
        let l = fourball_tangents(&t, &tol()).unwrap();
        for (got, want) in l.as_array().iter().zip([2.0, 10.0, 3.0, 1.0]) {
            assert_relative_eq!(*got, want, max_relative = 1e-12);
        }
        let m = midsphere(&t, &tol()).unwrap();
        assert_relative_eq!(m.radius, 4.0 / z(), max_relative = 1e-12);
        // Below the base face, hence outside.
        let g = Vec3::new(2.0, 2.0, -1.0 / 56f64.sqrt());
        assert!((m.center - g).norm() < 1e-9, "{:?}", m.center);
        assert_eq!(m.location, CenterLocation::Exterior);
    }

    #[test]
    fn regular_midsphere() {
        let t = regular();
        let m = midsphere(&t, &tol()).unwrap();
        assert_relative_eq!(m.radius, 2f64.sqrt() / 4.0, max_relative = 1e-12);
        assert!((m.center - t.centroid()).norm() < 1e-12);
        let l = fourball_tangents(&t, &tol()).unwrap();
        for x in l.as_array() {
            assert_relative_eq!(x, 0.5, max_relative = 1e-12);
        }
    }

    #[test]
    fn midsphere_touches_edges_at_tangent_lengths() {
        let t = asymmetric();
        let l = fourball_tangents(&t, &tol()).unwrap();
        let m = midsphere(&t, &tol()).unwrap();
        for e in Edge::ALL {
            let p = tangency_point(&t, &l, e);
            assert_relative_eq!(p.distance(m.center), m.radius, max_relative = 1e-10);
            let (i, _) = e.vertices();
            let dist =
                geom::point_line_distance(m.center, t.vertex(i), t.edge_vector(e), &tol()).unwrap();
            assert_relative_eq!(dist, m.radius, max_relative = 1e-10);
        }
    }

    #[test]
    fn not_fourball_errors() {
        let path = Tetra::new(
            [
                Vec3::ZERO,
                Vec3::X,
                Vec3::new(1.0, 1.0, 0.0),
                Vec3::new(1.0, 1.0, 1.0),
            ],
            &tol(),
        )
        .unwrap();
        assert!(!is_fourball(&path, &tol()));
        assert!(matches!(
            fourball_tangents(&path, &tol()),
            Err(Error::NotFourBall { .. })
        ));
        assert!(matches!(
            midsphere(&path, &tol()),
            Err(Error::NotFourBall { .. })
        ));
    }

    #[test]
    fn checks_agree_on_examples() {
        let c = fourball_checks(&asymmetric(), &tol()).unwrap();
        assert!(c.all_pass(), "{c:?}");
        let mut perturbed = *regular().vertices();
        perturbed[3] += Vec3::new(0.1, 0.0, 0.0);
        let t = Tetra::new(perturbed, &tol()).unwrap();
        let c = fourball_checks(&t, &tol()).unwrap();
        assert!(c.edge_sums.residual > tol().rel);
        assert!(!c.edge_sums.pass && c.all_agree(), "{c:?}");
    }

    #[test]
    fn kissing_feasibility() {
        let t = tol();
        assert!(!kissing_feasible(
            &TangentLengths4::new([0.1, 1.0, 1.0, 1.0]).unwrap(),
            &t
        ));
        assert!(kissing_feasible(
            &TangentLengths4::new([1.0; 4]).unwrap(),
            &t
        ));
        assert!(kissing_feasible(
            &TangentLengths4::new([2.0, 10.0, 3.0, 1.0]).unwrap(),
            &t
        ));
        let d3 = TangentLengths4::new([0.1, 1.0, 1.0, 1.0])
            .unwrap()
            .sextuple()
            .cayley_menger_d3();
        assert!((d3 + 11.84).abs() < 1e-2);
    }

    #[test]
    fn soddy_unit_circles() {
        // Descartes with k = 1, 1, 1 gives k0 = 3 + 2√3; center at the centroid.
        let h = 3f64.sqrt();
        let pts = [Vec3::ZERO, Vec3::new(2.0, 0.0, 0.0), Vec3::new(1.0, h, 0.0)];
        let t3 = TangentLengths3::new(1.0, 1.0, 1.0).unwrap();
        let s = soddy_inner(pts, &t3, &tol()).unwrap();
        assert_relative_eq!(s.radius, 1.0 / (3.0 + 2.0 * h), max_relative = 1e-14);
        let centroid = (pts[0] + pts[1] + pts[2]) / 3.0;
        assert!((s.center - centroid).norm() < 1e-12);
        for p in pts {
            assert_relative_eq!(p.distance(s.center), 1.0 + s.radius, max_relative = 1e-12);
        }
    }

    #[test]
    fn soddy_asymmetric_base() {
        // Base A, B, C with tangent lengths 10, 3, 2: curvatures 1/10, 1/3, 1/2
        // give k0 = 14/15 + 2 sqrt(1/4) = 29/15.
        let pts = [
            Vec3::new(12.0, 0.0, 0.0),
            Vec3::new(0.0, 5.0, 0.0),
            Vec3::ZERO,
        ];
        let t3 = triangle_tangents_at(pts).unwrap();
        assert_eq!(t3.to_array(), [10.0, 3.0, 2.0]);
        let s = soddy_inner(pts, &t3, &tol()).unwrap();
        assert_relative_eq!(s.radius, 15.0 / 29.0, max_relative = 1e-14);
        for (p, l) in pts.iter().zip(t3.to_array()) {
            assert_relative_eq!(p.distance(s.center), l + s.radius, max_relative = 1e-12);
        }
        let bad = TangentLengths3::new(1.0, 1.0, 1.0).unwrap();
        assert!(matches!(
            soddy_inner(pts, &bad, &tol()),
            Err(Error::BadConfiguration { .. })
        ));
    }

    #[test]
    fn soddy_isosceles_on_axis() {
        let pts = [
            Vec3::new(-1.5, 0.0, 0.0),
            Vec3::new(1.5, 0.0, 0.0),
            Vec3::new(0.0, 4.0, 0.0),
        ];
        let s = soddy_inner(pts, &triangle_tangents_at(pts).unwrap(), &tol()).unwrap();
        assert!(s.center.x.abs() < 1e-12);
    }

    #[test]
    fn from_face_reproduces_asymmetric_apex() {
        let tri = [
            Vec3::new(12.0, 0.0, 0.0),
            Vec3::new(0.0, 5.0, 0.0),
            Vec3::ZERO,
        ];
        let t = fourball_from_face(tri, 1.0, ApexSide::Positive, &tol()).unwrap();
        let d = Vec3::new(4.0 / 3.0, 9.0 / 5.0, z());
        assert!((t.vertex(3) - d).norm() < 1e-9);
        let m = fourball_from_face(tri, 1.0, ApexSide::Mirror, &tol()).unwrap();
        assert!((m.vertex(3) - Vec3::new(d.x, d.y, -d.z)).norm() < 1e-9);
        assert!(is_fourball(&t, &tol()));
    }

    #[test]
    fn from_face_equilateral_gives_regular() {
        let tri = [Vec3::ZERO, Vec3::X, Vec3::new(0.5, 3f64.sqrt() / 2.0, 0.0)];
        let t = fourball_from_face(tri, 0.5, ApexSide::Positive, &tol()).unwrap();
        for e in Edge::ALL {
            assert_relative_eq!(t.edge_length(e), 1.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn from_face_degenerate_limit() {
        let tri = [
            Vec3::new(12.0, 0.0, 0.0),
            Vec3::new(0.0, 5.0, 0.0),
            Vec3::ZERO,
        ];
        let l0 = 15.0 / 29.0;
        assert!(matches!(
            fourball_from_face(tri, l0, ApexSide::Positive, &tol()),
            Err(Error::ApexDegenerate { .. })
        ));
        assert!(matches!(
            fourball_from_face(tri, 0.1, ApexSide::Positive, &tol()),
            Err(Error::ApexDegenerate { .. })
        ));
        // Volume shrinks monotonically to zero as l4 -> l0+.
        let first = fourball_from_face(tri, l0 + 1.0, ApexSide::Positive, &tol())
            .unwrap()
            .volume();
        let mut prev = first;
        for k in 1..=6 {
            let eps = 10f64.powi(-k);
            let v = fourball_from_face(tri, l0 + eps, ApexSide::Positive, &tol())
                .unwrap()
                .volume();
            assert!(v < prev);
            prev = v;
        }
        assert!(prev < 1e-2 * first);
    }

    #[test]
    fn d3_profile_is_quadratic() {
        let (a, b, c) = (0.8, 1.3, 1.0);
        let h = 0.37;
        let k0 = 2.0;
        let f: Vec<f64> = (0..4)
            .map(|i| d3_profile(a, b, c, k0 + h * i as f64))
            .collect();
        let third = f[3] - 3.0 * f[2] + 3.0 * f[1] - f[0];
        assert!(third.abs() < 1e-10 * f.iter().fold(0.0f64, |m, x| m.max(x.abs())));
        assert!((d3_profile(1.1, 2.0, 1.1, 3.1) + 11.84).abs() < 1e-2);
        // Asymmetric example face (5, 12, 13) at k = 16: D3 = 288 (10 z)^2.
        let expected = 288.0 * (10.0 * z()).powi(2);
        assert_relative_eq!(
            d3_profile(5.0, 12.0, 13.0, 16.0),
            expected,
            max_relative = 1e-12
        );
        assert_relative_eq!(expected, 114688.0, max_relative = 1e-12);
    }

    #[test]
    fn cone_orthonormal_gives_cube_corner() {
        let t = fourball_from_cone([Vec3::X, Vec3::Y, Vec3::Z], &tol()).unwrap();
        let legs = [1, 2, 3].map(|i| t.vertex(i).norm());
        for leg in legs {
            assert_relative_eq!(leg, 2.0 + 2f64.sqrt(), max_relative = 1e-12);
        }
        assert!(is_fourball(&t, &tol()));
        let m = midsphere(&t, &tol()).unwrap();
        let l = fourball_tangents(&t, &tol()).unwrap();
        assert_relative_eq!(l.get(0), 1.0, max_relative = 1e-12);
        assert!(m.radius > 0.0);
    }

    #[test]
    fn cone_from_regular_vertex() {
        let r = regular();
        let dirs = [1, 2, 3].map(|i| r.vertex(i) - r.vertex(0));
        let t = fourball_from_cone(dirs, &tol()).unwrap();
        let s = t.edge_sextuple().to_array();
        for x in s {
            assert_relative_eq!(x, s[0], max_relative = 1e-12);
        }
    }

    #[test]
    fn cone_rejects_coplanar_and_infeasible() {
        let coplanar = [Vec3::X, Vec3::Y, Vec3::new(1.0, 1.0, 0.0)];
        assert!(matches!(
            fourball_from_cone(coplanar, &tol()),
            Err(Error::DegenerateInput(_))
        ));
        // Two nearly parallel edges and a far third one: t for the third
        // vertex exceeds 1.
        let dirs = [
            Vec3::new(1.0, 0.02, 0.0),
            Vec3::new(1.0, -0.02, 0.0),
            Vec3::new(0.0, 0.3, 1.0),
        ];
        match fourball_from_cone(dirs, &tol()) {
            Err(Error::NotConstructible { solver, .. }) => assert!(!solver),
            other => panic!("{other:?}"),
        }
    }
}
