//! Angle-sum formulas, tetrahedron families and bound certification.
//!
//! The certifications here are numerical: sweeps evaluate the dihedral sum
//! on finite grids and check the claimed inequalities at every sample. A
//! passing verdict is evidence, not proof.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourball::{self, ApexSide};
use crate::geom::{Tolerance, Vec3};
use crate::tetra::{regular_sum, Classification, Edge, Tetra, THREE_PI, TWO_PI};

/// Closed-form dihedral sum of the path tetrahedron
/// `O, (a,0,0), (a,1,0), (a,1,a)`.
pub fn sigma_path_closed(a: f64) -> f64 {
    1.5 * PI + 2.0 * a.atan() + (a * a / (a * a + 1.0)).acos()
}

/// Lower end of the cube-corner range, `1.5π + 3 arccos(√3/3)`.
pub fn cube_corner_min() -> f64 {
    1.5 * PI + 3.0 * (3f64.sqrt() / 3.0).acos()
}

/// Supremum of `k` over spherical triangles, `2 arccos(−1/3)`.
pub fn k_max_exact() -> f64 {
    2.0 * (-1.0f64 / 3.0).acos()
}

/// Height of the regular pyramid over the unit equilateral base.
pub fn regular_pyramid_height() -> f64 {
    (2.0f64 / 3.0).sqrt()
}

pub fn path_diag(a: f64, tol: &Tolerance) -> Result<Tetra> {
    positive("a", a)?;
    Tetra::new(
        [
            Vec3::ZERO,
            Vec3::new(a, 0.0, 0.0),
            Vec3::new(a, 1.0, 0.0),
            Vec3::new(a, 1.0, a),
        ],
        tol,
    )
}

pub fn cube_corner(a: f64, b: f64, c: f64, tol: &Tolerance) -> Result<Tetra> {
    for (name, x) in [("a", a), ("b", b), ("c", c)] {
        positive(name, x)?;
    }
    Tetra::new(
        [
            Vec3::ZERO,
            Vec3::new(a, 0.0, 0.0),
            Vec3::new(0.0, b, 0.0),
            Vec3::new(0.0, 0.0, c),
        ],
        tol,
    )
}

pub fn sigma_cube_corner(a: f64, b: f64, c: f64, tol: &Tolerance) -> Result<f64> {
    cube_corner(a, b, c, tol)?.dihedral_sum(tol)
}

/// Equilateral base of side 1 with the apex at height `h` over its centroid.
pub fn eq_pyramid(h: f64, tol: &Tolerance) -> Result<Tetra> {
    positive("h", h)?;
    let s3 = 3f64.sqrt();
    Tetra::new(
        [
            Vec3::ZERO,
            Vec3::X,
            Vec3::new(0.5, s3 / 2.0, 0.0),
            Vec3::new(0.5, s3 / 6.0, h),
        ],
        tol,
    )
}

/// Tetrahedron inscribed in the `p × q × r` box on alternate corners; its
/// opposite edges are equal face diagonals.
pub fn equifacial_box(p: f64, q: f64, r: f64, tol: &Tolerance) -> Result<Tetra> {
    for (name, x) in [("p", p), ("q", q), ("r", r)] {
        positive(name, x)?;
    }
    Tetra::new(
        [
            Vec3::ZERO,
            Vec3::new(p, q, 0.0),
            Vec3::new(p, 0.0, r),
            Vec3::new(0.0, q, r),
        ],
        tol,
    )
}

/// Random 4-ball tetrahedron: face tangent lengths log-uniform in
/// `[0.1, 10]`, apex tangent length uniform in `(l0, l0 + 10]`.
pub fn random_fourball<R: Rng>(rng: &mut R, tol: &Tolerance) -> Tetra {
    loop {
        let [l1, l2, l3] = [(); 3].map(|_| 10f64.powf(rng.gen_range(-1.0..=1.0)));
        let t3 = fourball::TangentLengths3 { l1, l2, l3 };
        let (a, b, c) = fourball::tangents_to_triangle(&t3);
        let x = (a * a + b * b - c * c) / (2.0 * a);
        let tri = [
            Vec3::ZERO,
            Vec3::new(a, 0.0, 0.0),
            Vec3::new(x, (b * b - x * x).max(0.0).sqrt(), 0.0),
        ];
        let l0 = fourball::soddy_radius(&t3);
        let l4 = l0 + 10.0 * (1.0 - rng.gen::<f64>());
        if let Ok(t) = fourball::fourball_from_face(tri, l4, ApexSide::Positive, tol) {
            return t;
        }
    }
}

/// Sample `index` of the seeded random 4-ball stream; independent of the
/// order in which samples are drawn.
pub fn random_fourball_sample(seed: u64, index: u64, tol: &Tolerance) -> Tetra {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    random_fourball(&mut rng, tol)
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::OutOfDomain(format!(
            "{name} must be positive, got {x}"
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    PathDiag,
    CubeCorner,
    EqPyramid,
    EquifacialBox,
    RandomFourball,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::PathDiag,
        Family::CubeCorner,
        Family::EqPyramid,
        Family::EquifacialBox,
        Family::RandomFourball,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::PathDiag => "path_diag",
            Family::CubeCorner => "cube_corner",
            Family::EqPyramid => "eq_pyramid",
            Family::EquifacialBox => "equifacial_box",
            Family::RandomFourball => "random_fourball",
        }
    }

    /// Number of parameters a member takes.
    pub fn arity(self) -> usize {
        match self {
            Family::PathDiag | Family::EqPyramid => 1,
            Family::CubeCorner | Family::EquifacialBox => 3,
            Family::RandomFourball => 1,
        }
    }

    pub fn domain(self) -> &'static str {
        match self {
            Family::PathDiag => "a > 0",
            Family::CubeCorner => "a, b, c > 0",
            Family::EqPyramid => "h > 0",
            Family::EquifacialBox => "p, q, r > 0",
            Family::RandomFourball => "sample index (seeded)",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::OutOfDomain(format!("unknown family {s:?}")))
    }
}

/// Member of `family` at `params`. Random members use `params[0]` as the
/// sample index into the stream selected by `seed`.
pub fn generate_family(
    family: Family,
    params: &[f64],
    seed: u64,
    tol: &Tolerance,
) -> Result<Tetra> {
    if params.len() != family.arity() {
        return Err(Error::OutOfDomain(format!(
            "{family} takes {} parameter(s), got {}",
            family.arity(),
            params.len()
        )));
    }
    match family {
        Family::PathDiag => path_diag(params[0], tol),
        Family::CubeCorner => cube_corner(params[0], params[1], params[2], tol),
        Family::EqPyramid => eq_pyramid(params[0], tol),
        Family::EquifacialBox => equifacial_box(params[0], params[1], params[2], tol),
        Family::RandomFourball => {
            let i = params[0];
            if !(i >= 0.0 && i.fract() == 0.0 && i < 2f64.powi(53)) {
                return Err(Error::OutOfDomain(format!(
                    "sample index must be a natural number, got {i}"
                )));
            }
            Ok(random_fourball_sample(seed, i as u64, tol))
        }
    }
}

/// One axis of a sampling grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    pub log: bool,
}

impl Axis {
    pub fn linear(lo: f64, hi: f64, n: usize) -> Self {
        Axis {
            lo,
            hi,
            n,
            log: false,
        }
    }

    pub fn log(lo: f64, hi: f64, n: usize) -> Self {
        Axis {
            lo,
            hi,
            n,
            log: true,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        let step = |i: usize| i as f64 / (self.n - 1) as f64;
        (0..self.n)
            .map(|i| {
                if self.log {
                    (self.lo.ln() + (self.hi.ln() - self.lo.ln()) * step(i)).exp()
                } else {
                    self.lo + (self.hi - self.lo) * step(i)
                }
            })
            .collect()
    }

    fn validate(&self) -> Result<()> {
        let ok = self.n >= 1
            && self.lo.is_finite()
            && self.hi.is_finite()
            && self.lo > 0.0
            && self.hi >= self.lo;
        if ok {
            Ok(())
        } else {
            Err(Error::OutOfDomain(format!("bad grid axis {self:?}")))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridSpec {
    /// Cartesian product of one axis per family parameter.
    Axes(Vec<Axis>),
    /// `n` seeded random members.
    Random { n: usize, seed: u64 },
}

impl GridSpec {
    fn points(&self, family: Family) -> Result<Vec<Vec<f64>>> {
        match self {
            GridSpec::Random { n, .. } => {
                if family != Family::RandomFourball {
                    return Err(Error::OutOfDomain(format!(
                        "{family} is sampled on a grid, not randomly"
                    )));
                }
                Ok((0..*n).map(|i| vec![i as f64]).collect())
            }
            GridSpec::Axes(axes) => {
                if family == Family::RandomFourball {
                    return Err(Error::OutOfDomain(
                        "random_fourball needs a sample count and seed".into(),
                    ));
                }
                if axes.len() != family.arity() {
                    return Err(Error::OutOfDomain(format!(
                        "{family} needs {} axes, got {}",
                        family.arity(),
                        axes.len()
                    )));
                }
                let mut points = vec![Vec::new()];
                for axis in axes {
                    axis.validate()?;
                    let values = axis.values();
                    points = points
                        .into_iter()
                        .flat_map(|p| {
                            values.iter().map(move |&v| {
                                let mut q = p.clone();
                                q.push(v);
                                q
                            })
                        })
                        .collect();
                }
                Ok(points)
            }
        }
    }

    fn seed(&self) -> u64 {
        match self {
            GridSpec::Random { seed, .. } => *seed,
            GridSpec::Axes(_) => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub params: Vec<f64>,
    pub sigma: f64,
    pub flags: Classification,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub claim: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub family: Family,
    pub samples: Vec<Sample>,
    pub min: f64,
    pub max: f64,
    pub argmin: Vec<f64>,
    pub argmax: Vec<f64>,
    pub verdicts: Vec<Verdict>,
}

impl SweepResult {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }
}

/// Evaluate the dihedral sum over a grid in parallel. Samples come back
/// sorted by parameter, so the result does not depend on scheduling.
pub fn sweep(family: Family, grid: &GridSpec, tol: &Tolerance) -> Result<SweepResult> {
    let points = grid.points(family)?;
    if points.is_empty() {
        return Err(Error::OutOfDomain("empty grid".into()));
    }
    let seed = grid.seed();
    let mut samples = points
        .into_par_iter()
        .map(|params| {
            let t = generate_family(family, &params, seed, tol)?;
            let report = t.angle_report(tol)?;
            Ok(Sample {
                params,
                sigma: report.sum,
                flags: report.flags,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    samples.sort_by(|a, b| {
        a.params
            .iter()
            .zip(&b.params)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    let (mut imin, mut imax) = (0, 0);
    for (i, s) in samples.iter().enumerate() {
        if s.sigma < samples[imin].sigma {
            imin = i;
        }
        if s.sigma > samples[imax].sigma {
            imax = i;
        }
    }
    let mut result = SweepResult {
        family,
        min: samples[imin].sigma,
        max: samples[imax].sigma,
        argmin: samples[imin].params.clone(),
        argmax: samples[imax].params.clone(),
        samples,
        verdicts: Vec::new(),
    };
    result.verdicts = verdicts(&result, grid, tol);
    Ok(result)
}

/// Verdicts for the inequalities claimed for a family, recomputed from the
/// samples.
pub fn verdicts(r: &SweepResult, grid: &GridSpec, tol: &Tolerance) -> Vec<Verdict> {
    let eps = 1e-9;
    let all = |f: &dyn Fn(&Sample) -> bool| r.samples.iter().all(f);
    let verdict = |claim: String, pass: bool| Verdict { claim, pass };
    let regular = regular_sum();
    match r.family {
        Family::PathDiag => {
            let mut v = vec![verdict(
                "2π < Σ < 2.5π".into(),
                all(&|s| s.sigma > TWO_PI && s.sigma < 2.5 * PI),
            )];
            if let GridSpec::Axes(axes) = grid {
                if axes[0].lo <= 1e-3 && axes[0].hi >= 1e3 {
                    v.push(verdict(
                        "range endpoints approached within 0.01 rad".into(),
                        r.min - TWO_PI < 0.01 && 2.5 * PI - r.max < 0.01,
                    ));
                }
            }
            v.push(verdict(
                "every sample is a path tetrahedron".into(),
                all(&|s| s.flags.path),
            ));
            v
        }
        Family::CubeCorner => {
            let lo = cube_corner_min();
            let step = match grid {
                GridSpec::Axes(axes) => axes.iter().map(grid_ratio).fold(1.0, f64::max),
                GridSpec::Random { .. } => 1.0,
            };
            let spread = r.argmin.iter().copied().fold(f64::MIN, f64::max)
                / r.argmin.iter().copied().fold(f64::MAX, f64::min);
            vec![
                verdict(
                    "1.5π + 3 arccos(√3/3) ≤ Σ < 2.5π".into(),
                    all(&|s| s.sigma >= lo - eps && s.sigma < 2.5 * PI),
                ),
                verdict(
                    "minimum at a = b = c within grid resolution".into(),
                    spread <= step * (1.0 + 1e-12),
                ),
                verdict(
                    "minimum ≈ 434.2° within 0.1°".into(),
                    (r.min.to_degrees() - 434.2).abs() <= 0.1,
                ),
            ]
        }
        Family::EqPyramid => {
            let h0 = regular_pyramid_height();
            let ordered: Vec<&Sample> = r.samples.iter().collect();
            let mut monotone = true;
            for w in ordered.windows(2) {
                let (s0, s1) = (w[0], w[1]);
                let slack = tol.at(s0.sigma.abs());
                if s1.params[0] <= h0 && s1.sigma > s0.sigma + slack {
                    monotone = false;
                }
                if s0.params[0] >= h0 && s1.sigma < s0.sigma - slack {
                    monotone = false;
                }
            }
            let argmin = r.argmin[0];
            let below = ordered
                .iter()
                .rev()
                .find(|s| s.params[0] <= h0)
                .map(|s| s.params[0]);
            let above = ordered
                .iter()
                .find(|s| s.params[0] >= h0)
                .map(|s| s.params[0]);
            let near_h0 = Some(argmin) == below || Some(argmin) == above;
            vec![
                verdict(
                    "6 arccos(1/3) ≤ Σ < 3π".into(),
                    all(&|s| s.sigma >= regular - eps && s.sigma < THREE_PI),
                ),
                verdict(
                    "decreasing on (0, h0], increasing on [h0, ∞)".into(),
                    monotone,
                ),
                verdict("minimum at h0 within grid resolution".into(), near_h0),
                verdict(
                    "every sample is a 4-ball tetrahedron".into(),
                    all(&|s| s.flags.fourball),
                ),
            ]
        }
        Family::EquifacialBox => {
            let at_bound = |s: &Sample| (s.sigma - regular).abs() <= eps;
            let is_cube = |s: &Sample| {
                let p = &s.params;
                tol.eq(p[0], p[1]) && tol.eq(p[1], p[2])
            };
            let mut v = vec![
                verdict(
                    "2π < Σ ≤ 6 arccos(1/3)".into(),
                    all(&|s| s.sigma > TWO_PI && s.sigma <= regular + eps),
                ),
                verdict(
                    "equality only at the regular point".into(),
                    all(&|s| at_bound(s) == is_cube(s)),
                ),
                verdict(
                    "every sample is equifacial".into(),
                    all(&|s| s.flags.equifacial),
                ),
            ];
            if r.samples.iter().any(is_cube) {
                v.push(verdict(
                    "maximum attained at the cube point".into(),
                    (r.max - regular).abs() <= eps,
                ));
            }
            v
        }
        Family::RandomFourball => vec![
            verdict(
                "6 arccos(1/3) ≤ Σ < 3π".into(),
                all(&|s| s.sigma >= regular - eps && s.sigma < THREE_PI),
            ),
            verdict(
                "every sample is a 4-ball tetrahedron".into(),
                all(&|s| s.flags.fourball),
            ),
        ],
    }
}

fn grid_ratio(axis: &Axis) -> f64 {
    if axis.n < 2 {
        return 1.0;
    }
    let v = axis.values();
    v.windows(2).map(|w| w[1] / w[0]).fold(1.0, f64::max)
}

/// Spherical law of cosines: the side opposite angle `alpha` in a triangle
/// with sides `b`, `c`.
pub fn spherical_cos_side(b: f64, c: f64, alpha: f64) -> f64 {
    (b.cos() * c.cos() + b.sin() * c.sin() * alpha.cos())
        .clamp(-1.0, 1.0)
        .acos()
}

/// Apex angle of the isosceles spherical triangle with base `a` and legs `b`.
pub fn isosceles_apex_angle(a: f64, b: f64) -> Result<f64> {
    let (c, bb, d) = (a.cos(), b.cos(), b.sin());
    let ratio = (c - bb * bb) / (d * d);
    if !(ratio.abs() <= 1.0 + 1e-12) || d == 0.0 {
        return Err(Error::OutOfDomain(format!(
            "no isosceles spherical triangle with base {a} and legs {b}"
        )));
    }
    Ok(ratio.clamp(-1.0, 1.0).acos())
}

/// Opposite-normal sum `k` for the symmetric configuration with sides
/// `(a, b, b)`.
///
/// `k = atan2(B − BC − ADS, BS − D − ACD)` with `C = cos a`, `S = sin a`,
/// `B = cos b`, `D = sin b`, `A = cos(α/2)` and `α` the apex angle; of the
/// two values differing by π the one in `(max(a, b), min(a, b) + π)` is
/// returned.
pub fn k_isosceles(a: f64, b: f64) -> Result<f64> {
    let alpha = isosceles_apex_angle(a, b)?;
    let (c, s, bb, d) = (a.cos(), a.sin(), b.cos(), b.sin());
    let aa = (0.5 * alpha).cos();
    let n = bb - bb * c - aa * d * s;
    let m = bb * s - d - aa * c * d;
    let base = n.atan2(m).rem_euclid(2.0 * PI);
    let (lo, hi) = (a.max(b), a.min(b) + PI);
    [base, base + PI, base - PI]
        .into_iter()
        .find(|&k| k > lo && k < hi)
        .ok_or_else(|| Error::OutOfDomain(format!("no admissible k for ({a}, {b})")))
}

/// Unit normals `n1, n2, n3` with `d(n2,n3) = a`, `d(n1,n3) = b`,
/// `d(n1,n2) = c`.
pub fn place_normals(a: f64, b: f64, c: f64) -> Result<[Vec3; 3]> {
    check_spherical_triangle(a, b, c)?;
    let n1 = Vec3::Z;
    let n2 = Vec3::new(c.sin(), 0.0, c.cos());
    let cos_phi = ((a.cos() - b.cos() * c.cos()) / (b.sin() * c.sin())).clamp(-1.0, 1.0);
    let phi = cos_phi.acos();
    let n3 = Vec3::new(b.sin() * phi.cos(), b.sin() * phi.sin(), b.cos());
    Ok([n1, n2, n3])
}

fn check_spherical_triangle(a: f64, b: f64, c: f64) -> Result<()> {
    let sides = [a, b, c];
    let in_range = sides.iter().all(|&s| s.is_finite() && s > 0.0 && s < PI);
    let triangle = a < b + c && b < a + c && c < a + b && a + b + c < 2.0 * PI;
    if in_range && triangle {
        Ok(())
    } else {
        Err(Error::NoSolution(format!(
            "({a}, {b}, {c}) is not a proper spherical triangle"
        )))
    }
}

fn unit_from_angles(theta: f64, phi: f64) -> Vec3 {
    Vec3::new(
        theta.sin() * phi.cos(),
        theta.sin() * phi.sin(),
        theta.cos(),
    )
}

/// Solve for the fourth unit normal `n4` and `k` with
/// `d(n4, n1) = k − a`, `d(n4, n2) = k − b`, `d(n4, n3) = k − c`, where
/// `n1..n3` realise the triangle `(a, b, c)`.
///
/// Accepts a root only when all six distances lie in `(0, π)` and the four
/// normals positively span space, as the outward normals of a tetrahedron
/// do. Damped Newton in `(θ, φ, k)` from eight seeds.
pub fn solve_k_general(a: f64, b: f64, c: f64) -> Result<f64> {
    let n = place_normals(a, b, c)?;
    let sides = [a, b, c];
    let centroid = n[0] + n[1] + n[2];
    let mut seeds: Vec<Vec3> = vec![-centroid];
    seeds.extend([
        -n[0],
        -n[1],
        -n[2],
        -(n[0] + n[1]),
        -(n[1] + n[2]),
        -(n[0] + n[2]),
        centroid.cross(n[0] - n[1]),
    ]);
    let mut best_residual = f64::INFINITY;
    for seed in seeds {
        let norm = seed.norm();
        if norm < 1e-12 {
            continue;
        }
        let u = seed / norm;
        let theta = u.z.clamp(-1.0, 1.0).acos();
        let phi = u.y.atan2(u.x);
        let k = (0..3).map(|i| u.angle_to(n[i]) + sides[i]).sum::<f64>() / 3.0;
        match newton_k(&n, sides, [theta, phi, k]) {
            Ok((n4, k)) => {
                if admissible(&n, n4, sides, k) {
                    return Ok(k);
                }
            }
            Err(r) => best_residual = best_residual.min(r),
        }
    }
    Err(Error::NoSolution(format!(
        "no admissible fourth normal for ({a}, {b}, {c}); best residual {best_residual:.2e}"
    )))
}

fn admissible(n: &[Vec3; 3], n4: Vec3, sides: [f64; 3], k: f64) -> bool {
    let dist_ok = (0..3).all(|i| {
        let d = k - sides[i];
        d > 0.0 && d < PI && (n4.angle_to(n[i]) - d).abs() < 1e-7
    });
    // −n4 = λ1 n1 + λ2 n2 + λ3 n3 with every λ > 0.
    let m = [
        [n[0].x, n[1].x, n[2].x],
        [n[0].y, n[1].y, n[2].y],
        [n[0].z, n[1].z, n[2].z],
    ];
    let spans = crate::geom::solve3(m, (-n4).to_array())
        .map(|l| l.iter().all(|&x| x > 0.0))
        .unwrap_or(false);
    dist_ok && spans
}

fn newton_k(
    n: &[Vec3; 3],
    sides: [f64; 3],
    start: [f64; 3],
) -> std::result::Result<(Vec3, f64), f64> {
    let residual = |x: &[f64; 3]| {
        let u = unit_from_angles(x[0], x[1]);
        [0, 1, 2].map(|i| u.angle_to(n[i]) - (x[2] - sides[i]))
    };
    let norm = |r: &[f64; 3]| r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut x = start;
    let mut r = residual(&x);
    for _ in 0..100 {
        if norm(&r) <= 1e-13 {
            return Ok((unit_from_angles(x[0], x[1]), x[2]));
        }
        let (st, ct, sp, cp) = (x[0].sin(), x[0].cos(), x[1].sin(), x[1].cos());
        let u = Vec3::new(st * cp, st * sp, ct);
        let du_dt = Vec3::new(ct * cp, ct * sp, -st);
        let du_dp = Vec3::new(-st * sp, st * cp, 0.0);
        let mut jac = [[0.0; 3]; 3];
        for i in 0..3 {
            let cosd = u.dot(n[i]).clamp(-1.0, 1.0);
            let s = (1.0 - cosd * cosd).sqrt().max(1e-300);
            jac[i] = [-du_dt.dot(n[i]) / s, -du_dp.dot(n[i]) / s, -1.0];
        }
        let Some(step) = crate::geom::solve3(jac, r) else {
            return Err(norm(&r));
        };
        let current = norm(&r);
        let mut alpha = 1.0;
        loop {
            let trial = [0, 1, 2].map(|i| x[i] - alpha * step[i]);
            let tr = residual(&trial);
            if norm(&tr) < current {
                x = trial;
                r = tr;
                break;
            }
            alpha *= 0.5;
            if alpha < 1e-10 {
                return Err(current);
            }
        }
    }
    if norm(&r) <= 1e-7 {
        Ok((unit_from_angles(x[0], x[1]), x[2]))
    } else {
        Err(norm(&r))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KmaxCertificate {
    pub resolution: usize,
    pub argmax: [f64; 3],
    pub k_max: f64,
    /// `|k_max − 2 arccos(−1/3)|`.
    pub error: f64,
    /// Implied lower bound `6π − 3 k_max` on Σ for 4-ball tetrahedra.
    pub sigma_lower: f64,
    /// Maximum of `k_isosceles(a, a)` over `a`, and where it occurs.
    pub isosceles_argmax: f64,
    pub isosceles_max: f64,
    /// `|k_isosceles − solve_k_general|` at the isosceles maximiser.
    pub isosceles_agreement: f64,
}

/// Maximise `solve_k_general` over a `resolution³` grid on `(0, π)³`, then
/// refine the best grid points by pattern search.
pub fn certify_kmax(resolution: usize) -> Result<KmaxCertificate> {
    if resolution < 20 {
        return Err(Error::OutOfDomain(format!(
            "resolution must be at least 20, got {resolution}"
        )));
    }
    let h = PI / (resolution + 1) as f64;
    let value = |p: [f64; 3]| solve_k_general(p[0], p[1], p[2]).unwrap_or(f64::NEG_INFINITY);
    let mut grid: Vec<([f64; 3], f64)> = (1..=resolution)
        .into_par_iter()
        .flat_map_iter(|i| {
            (1..=resolution).flat_map(move |j| {
                (1..=resolution).map(move |l| {
                    let p = [i as f64 * h, j as f64 * h, l as f64 * h];
                    (p, value(p))
                })
            })
        })
        .filter(|(_, k)| k.is_finite())
        .collect();
    if grid.is_empty() {
        return Err(Error::NoSolution("no admissible grid point".into()));
    }
    grid.sort_by(|x, y| {
        y.1.total_cmp(&x.1)
            .then_with(|| x.0.partial_cmp(&y.0).unwrap())
    });

    let (argmax, k_max) = grid
        .iter()
        .take(8)
        .map(|&(p, k)| pattern_search(p, k, h, &value))
        .max_by(|x, y| x.1.total_cmp(&y.1))
        .expect("grid is not empty");

    let iso = |a: f64| k_isosceles(a, a).unwrap_or(f64::NEG_INFINITY);
    let isosceles_argmax = golden_max(&iso, 0.1, 2.0 * PI / 3.0);
    let isosceles_max = iso(isosceles_argmax);
    let isosceles_agreement = (isosceles_max
        - solve_k_general(isosceles_argmax, isosceles_argmax, isosceles_argmax)?)
    .abs();

    Ok(KmaxCertificate {
        resolution,
        argmax,
        k_max,
        error: (k_max - k_max_exact()).abs(),
        sigma_lower: 6.0 * PI - 3.0 * k_max,
        isosceles_argmax,
        isosceles_max,
        isosceles_agreement,
    })
}

fn pattern_search(
    start: [f64; 3],
    k0: f64,
    h: f64,
    f: &impl Fn([f64; 3]) -> f64,
) -> ([f64; 3], f64) {
    let (mut p, mut best, mut step) = (start, k0, h);
    while step > 1e-10 {
        let mut improved = false;
        for axis in 0..3 {
            for sign in [1.0, -1.0] {
                let mut q = p;
                q[axis] += sign * step;
                let v = f(q);
                if v > best {
                    p = q;
                    best = v;
                    improved = true;
                }
            }
        }
        // Diagonal moves follow the symmetric ridge.
        for sign in [1.0, -1.0] {
            let q = p.map(|x| x + sign * step);
            let v = f(q);
            if v > best {
                p = q;
                best = v;
                improved = true;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (p, best)
}

fn golden_max(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > 1e-12 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    0.5 * (lo + hi)
}

/// Sum of the six geodesic distances between outward face normals.
pub fn gamma_of(t: &Tetra, tol: &Tolerance) -> Result<f64> {
    let n = t.outward_normals(tol)?;
    Ok(Edge::ALL
        .into_iter()
        .map(|e| {
            let (f1, f2) = e.faces();
            n[f1].angle_to(n[f2])
        })
        .sum())
}

/// Outward normals of faces 0, 1, 2 as a spherical triangle
/// `(d(n2,n3), d(n1,n3), d(n1,n2))`.
pub fn normal_triangle(t: &Tetra, tol: &Tolerance) -> Result<[f64; 3]> {
    let n = t.outward_normals(tol)?;
    Ok([
        n[1].angle_to(n[2]),
        n[0].angle_to(n[2]),
        n[0].angle_to(n[1]),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tetra::EdgeSextuple;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_PI_2;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn path_closed_form_limits() {
        assert!((sigma_path_closed(1e-9) - TWO_PI).abs() < 1e-8);
        assert!((sigma_path_closed(1e9) - 2.5 * PI).abs() < 1e-8);
        assert_relative_eq!(
            sigma_path_closed(1.0),
            TWO_PI + PI / 3.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn path_closed_form_matches_normals() {
        for a in [1e-2, 0.3, 1.0, 2.5, 40.0] {
            let t = path_diag(a, &tol()).unwrap();
            assert!(t.is_path(&tol()));
            assert!((t.dihedral_sum(&tol()).unwrap() - sigma_path_closed(a)).abs() < 1e-12);
        }
    }

    #[test]
    fn cube_corner_values() {
        let s = sigma_cube_corner(1.0, 1.0, 1.0, &tol()).unwrap();
        assert_relative_eq!(s, cube_corner_min(), max_relative = 1e-14);
        assert!((s.to_degrees() - 434.2).abs() < 0.05);
        let t = cube_corner(1.0, 2.0, 5.0, &tol()).unwrap();
        let right = t
            .dihedral_angles(&tol())
            .unwrap()
            .iter()
            .filter(|x| (**x - FRAC_PI_2).abs() < 1e-12)
            .count();
        assert_eq!(right, 3);
    }

    #[test]
    fn eq_pyramid_regular_and_flat() {
        let t = eq_pyramid(regular_pyramid_height(), &tol()).unwrap();
        for e in Edge::ALL {
            assert_relative_eq!(t.edge_length(e), 1.0, max_relative = 1e-12);
        }
        assert_relative_eq!(
            t.dihedral_sum(&tol()).unwrap(),
            regular_sum(),
            max_relative = 1e-12
        );
        let flat = eq_pyramid(1e-5, &tol()).unwrap();
        assert!((flat.dihedral_sum(&tol()).unwrap() - THREE_PI).abs() < 1e-3);
        assert!(fourball::is_fourball(&flat, &tol()));
    }

    #[test]
    fn equifacial_cube_is_regular() {
        let t = equifacial_box(1.0, 1.0, 1.0, &tol()).unwrap();
        let s = t.edge_sextuple().to_array();
        for x in s {
            assert_relative_eq!(x, 2f64.sqrt(), max_relative = 1e-14);
        }
        assert!(equifacial_box(1.0, 2.0, 3.0, &tol())
            .unwrap()
            .is_equifacial(&tol()));
    }

    #[test]
    fn family_domain_errors() {
        assert!(matches!(path_diag(0.0, &tol()), Err(Error::OutOfDomain(_))));
        assert!(matches!(
            eq_pyramid(-1.0, &tol()),
            Err(Error::OutOfDomain(_))
        ));
        assert!(generate_family(Family::CubeCorner, &[1.0], 0, &tol()).is_err());
        assert!(generate_family(Family::RandomFourball, &[0.5], 0, &tol()).is_err());
        assert_eq!("eq_pyramid".parse::<Family>().unwrap(), Family::EqPyramid);
        assert!("cube".parse::<Family>().is_err());
    }

    #[test]
    fn random_stream_is_reproducible() {
        let a = random_fourball_sample(42, 7, &tol());
        let b = random_fourball_sample(42, 7, &tol());
        assert_eq!(a, b);
        assert!(fourball::is_fourball(&a, &tol()));
        assert_ne!(a, random_fourball_sample(42, 8, &tol()));
    }

    #[test]
    fn path_sweep_verdicts() {
        let r = sweep(
            Family::PathDiag,
            &GridSpec::Axes(vec![Axis::log(1e-3, 1e3, 200)]),
            &tol(),
        )
        .unwrap();
        assert_eq!(r.samples.len(), 200);
        assert!(r.all_pass(), "{:?}", r.verdicts);
        assert!(r
            .samples
            .windows(2)
            .all(|w| w[0].params[0] < w[1].params[0]));
    }

    #[test]
    fn pyramid_sweep_verdicts() {
        let r = sweep(
            Family::EqPyramid,
            &GridSpec::Axes(vec![Axis::log(0.01, 20.0, 500)]),
            &tol(),
        )
        .unwrap();
        assert!(r.all_pass(), "{:?}", r.verdicts);
    }

    #[test]
    fn equifacial_sweep_verdicts() {
        let axis = Axis::linear(0.5, 1.5, 11);
        let r = sweep(
            Family::EquifacialBox,
            &GridSpec::Axes(vec![axis; 3]),
            &tol(),
        )
        .unwrap();
        assert!(r.all_pass(), "{:?}", r.verdicts);
        assert_eq!(r.argmax, vec![0.5, 0.5, 0.5]);
    }

    #[test]
    fn sweep_rejects_bad_grids() {
        assert!(sweep(
            Family::PathDiag,
            &GridSpec::Axes(vec![Axis::linear(-1.0, 1.0, 5)]),
            &tol()
        )
        .is_err());
        assert!(sweep(
            Family::PathDiag,
            &GridSpec::Random { n: 5, seed: 1 },
            &tol()
        )
        .is_err());
        assert!(sweep(
            Family::CubeCorner,
            &GridSpec::Axes(vec![Axis::linear(1.0, 2.0, 3)]),
            &tol()
        )
        .is_err());
    }

    #[test]
    fn spherical_law_of_cosines() {
        assert_relative_eq!(
            spherical_cos_side(FRAC_PI_2, FRAC_PI_2, FRAC_PI_2),
            FRAC_PI_2
        );
        assert_relative_eq!(spherical_cos_side(1.2, 0.5, 0.0), 0.7, max_relative = 1e-7);
        let (a, b) = (1.3, 1.1);
        let alpha = isosceles_apex_angle(a, b).unwrap();
        assert_relative_eq!(spherical_cos_side(b, b, alpha), a, max_relative = 1e-12);
    }

    #[test]
    fn k_isosceles_optimum() {
        let a = PI - (1.0f64 / 3.0).acos();
        let k = k_isosceles(a, a).unwrap();
        assert_relative_eq!(k, k_max_exact(), max_relative = 1e-12);
        assert_relative_eq!(k, 3.821266472498037, max_relative = 1e-12);
        assert_relative_eq!(k.cos(), -7.0 / 9.0, max_relative = 1e-12);
        assert_relative_eq!(k.sin(), -4.0 * 2f64.sqrt() / 9.0, max_relative = 1e-12);
        assert_relative_eq!(
            isosceles_apex_angle(a, a).unwrap(),
            2.0 * PI / 3.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn k_isosceles_domain() {
        assert!(matches!(k_isosceles(2.0, 2.2), Err(Error::OutOfDomain(_))));
        let k = k_isosceles(2.0, 1.8).unwrap();
        assert!((k - 3.80775).abs() < 1e-4);
    }

    #[test]
    fn general_solver_matches_isosceles() {
        for (a, b) in [
            (2.0, 1.8),
            (1.0, 1.2),
            (1.5, 2.0),
            (0.7, 0.9),
            (PI - (1.0f64 / 3.0).acos(), 2.0),
        ] {
            let k1 = k_isosceles(a, b).unwrap();
            let k2 = solve_k_general(a, b, b).unwrap();
            assert!((k1 - k2).abs() < 1e-8, "{a} {b}: {k1} vs {k2}");
        }
    }

    #[test]
    fn general_solver_domain() {
        assert!(matches!(
            solve_k_general(0.5, 0.5, 2.0),
            Err(Error::NoSolution(_))
        ));
        assert!(matches!(
            solve_k_general(3.5, 1.0, 3.0),
            Err(Error::NoSolution(_))
        ));
    }

    #[test]
    fn normals_of_regular() {
        let t = EdgeSextuple::from_array([1.0; 6])
            .unwrap()
            .realize(&tol())
            .unwrap();
        let g = gamma_of(&t, &tol()).unwrap();
        assert_relative_eq!(g, 6.0 * (PI - (1.0f64 / 3.0).acos()), max_relative = 1e-12);
        let [a, b, c] = normal_triangle(&t, &tol()).unwrap();
        let k = solve_k_general(a, b, c).unwrap();
        assert_relative_eq!(3.0 * k, g, max_relative = 1e-10);
    }

    #[test]
    fn certify_kmax_coarse() {
        let c = certify_kmax(20).unwrap();
        assert!(c.error < 1e-6, "{c:?}");
        let a0 = PI - (1.0f64 / 3.0).acos();
        assert!(c.argmax.iter().all(|x| (x - a0).abs() < 1e-3), "{c:?}");
        assert!((c.isosceles_argmax - a0).abs() < 1e-5);
        assert!(c.isosceles_agreement < 1e-8);
        assert!(matches!(certify_kmax(10), Err(Error::OutOfDomain(_))));
    }

    #[test]
    fn golden_section_finds_parabola_peak() {
        let x = golden_max(&|x: f64| -(x - 0.3) * (x - 0.3), 0.0, 1.0);
        assert!((x - 0.3).abs() < 1e-6);
    }
}
