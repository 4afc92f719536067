//! Face-to-face decompositions into path tetrahedra.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourball::{self, CenterLocation};
use crate::geom::{Point3, Tolerance};
use crate::tetra::{face_vertices, Edge, Tetra};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartitionKind {
    /// 24 path cells coned from the midsphere center.
    Fourball24,
    /// 8 path cells from edge midpoints (possibly applied recursively).
    Red8,
}

impl PartitionKind {
    pub fn name(self) -> &'static str {
        match self {
            PartitionKind::Fourball24 => "fourball24",
            PartitionKind::Red8 => "red8",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    pub parent: Tetra,
    pub cells: Vec<Tetra>,
    pub kind: PartitionKind,
}

impl Partition {
    pub fn total_volume(&self) -> f64 {
        self.cells.iter().map(Tetra::volume).sum()
    }

    pub fn volume_residual(&self) -> f64 {
        let v = self.parent.volume();
        (self.total_volume() - v).abs() / v
    }
}

/// Split a 4-ball tetrahedron into 24 path tetrahedra
/// `(vertex, tangency point, face incenter, G)`.
///
/// Each face is cut into six right triangles by its incenter and the three
/// points where the midsphere touches its edges; every right triangle is
/// coned to the midsphere center `G`, which must lie strictly inside.
pub fn partition_fourball_24(t: &Tetra, tol: &Tolerance) -> Result<Partition> {
    let l = fourball::fourball_tangents(t, tol)?;
    let m = fourball::midsphere(t, tol)?;
    if m.location != CenterLocation::Interior {
        return Err(Error::CenterNotInterior(m.location));
    }
    let mut cells = Vec::with_capacity(24);
    for face in 0..4 {
        let (incenter, _) = t.face_incircle(face);
        for v in face_vertices(face) {
            for w in face_vertices(face) {
                if w == v {
                    continue;
                }
                let edge = Edge::between(v, w).expect("distinct vertices");
                let touch = fourball::tangency_point(t, &l, edge);
                let cell = Tetra::new([t.vertex(v), touch, incenter, m.center], tol)?;
                cells.push(cell.positively_oriented());
            }
        }
    }
    Ok(Partition {
        parent: *t,
        cells,
        kind: PartitionKind::Fourball24,
    })
}

/// Red refinement of a path tetrahedron `O, A, B, C` into eight path
/// tetrahedra: four corner cells and four cells around the diagonal joining
/// the midpoints of `OB` and `AC`.
pub fn red_refine_path(t: &Tetra, ordering: [usize; 4], tol: &Tolerance) -> Result<Partition> {
    let reversed = [ordering[3], ordering[2], ordering[1], ordering[0]];
    if !(t.is_path_ordering(ordering, tol) || t.is_path_ordering(reversed, tol)) {
        return Err(Error::NotPath);
    }
    let p = ordering.map(|i| t.vertex(i));
    let m = |i: usize, j: usize| p[i].midpoint(p[j]);
    let (m01, m02, m03, m12, m13, m23) = (m(0, 1), m(0, 2), m(0, 3), m(1, 2), m(1, 3), m(2, 3));
    let raw = [
        [p[0], m01, m02, m03],
        [p[1], m01, m12, m13],
        [p[2], m02, m12, m23],
        [p[3], m03, m13, m23],
        [m02, m13, m01, m12],
        [m02, m13, m12, m23],
        [m02, m13, m23, m03],
        [m02, m13, m03, m01],
    ];
    let cells = raw
        .into_iter()
        .map(|v| Tetra::new(v, tol).map(|c| c.positively_oriented()))
        .collect::<Result<Vec<_>>>()?;
    Ok(Partition {
        parent: *t,
        cells,
        kind: PartitionKind::Red8,
    })
}

/// Apply red refinement `levels` times, re-detecting each cell's path
/// ordering before refining it.
pub fn red_refine_recursive(t: &Tetra, levels: u32, tol: &Tolerance) -> Result<Partition> {
    let mut cells = vec![*t];
    for _ in 0..levels {
        let mut next = Vec::with_capacity(cells.len() * 8);
        for cell in &cells {
            let order = cell.path_ordering(tol).ok_or(Error::NotPath)?;
            next.extend(red_refine_path(cell, order, tol)?.cells);
        }
        cells = next;
    }
    Ok(Partition {
        parent: *t,
        cells,
        kind: PartitionKind::Red8,
    })
}

/// First conformity violation found.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairViolation {
    pub first: usize,
    /// `None` when the violation involves a single cell.
    pub second: Option<usize>,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConformityReport {
    pub is_face_to_face: bool,
    pub volume_residual: f64,
    pub worst_pair: Option<PairViolation>,
}

/// Certify a partition by vertex-identity matching.
///
/// Cell vertices are merged when equal within tolerance. The partition is
/// accepted when every cell is positively oriented, every triangular facet
/// is shared by exactly two cells lying on opposite sides of it or else lies
/// on a face of the parent, the boundary facets exactly cover each parent
/// face, and the cell volumes add up to the parent volume.
pub fn validate_conformity(p: &Partition, tol: &Tolerance) -> ConformityReport {
    let volume_residual = p.volume_residual();
    let worst_pair = first_violation(p, tol);
    let volume_ok = volume_residual <= tol.rel.max(f64::EPSILON * p.cells.len() as f64);
    ConformityReport {
        is_face_to_face: worst_pair.is_none() && volume_ok,
        volume_residual,
        worst_pair,
    }
}

fn violation(
    first: usize,
    second: Option<usize>,
    description: impl Into<String>,
) -> Option<PairViolation> {
    Some(PairViolation {
        first,
        second,
        description: description.into(),
    })
}

fn first_violation(p: &Partition, tol: &Tolerance) -> Option<PairViolation> {
    let scale = p.parent.edge_sextuple().max();
    let close = |a: Point3, b: Point3| a.distance(b) <= tol.at(scale);

    let mut points: Vec<Point3> = Vec::new();
    let mut index_of = |q: Point3| match points.iter().position(|&x| close(x, q)) {
        Some(i) => i,
        None => {
            points.push(q);
            points.len() - 1
        }
    };
    let cells: Vec<[usize; 4]> = p
        .cells
        .iter()
        .map(|c| c.vertices().map(&mut index_of))
        .collect();

    let min_volume = tol.at(scale.powi(3));
    for (i, (cell, ids)) in p.cells.iter().zip(&cells).enumerate() {
        if cell.signed_volume() <= min_volume {
            return violation(i, None, "cell is degenerate or negatively oriented");
        }
        let mut sorted = *ids;
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return violation(i, None, "cell has coincident vertices");
        }
    }

    let mut facets: HashMap<[usize; 3], Vec<(usize, usize)>> = HashMap::new();
    for (i, ids) in cells.iter().enumerate() {
        for skip in 0..4 {
            let mut key = [0; 3];
            let mut k = 0;
            for (j, &id) in ids.iter().enumerate() {
                if j != skip {
                    key[k] = id;
                    k += 1;
                }
            }
            key.sort_unstable();
            facets.entry(key).or_default().push((i, ids[skip]));
        }
    }

    let parent_planes: Vec<_> = (0..4)
        .map(|f| {
            let [a, b, c] = p.parent.face_points(f);
            (a, (b - a).cross(c - a))
        })
        .collect();
    let mut boundary_area = [0.0; 4];

    let mut keys: Vec<_> = facets.keys().copied().collect();
    keys.sort_unstable();
    for key in keys {
        let owners = &facets[&key];
        let [a, b, c] = key.map(|k| points[k]);
        let normal = (b - a).cross(c - a);
        match owners.as_slice() {
            [(i, opp_i), (j, opp_j)] => {
                let si = normal.dot(points[*opp_i] - a);
                let sj = normal.dot(points[*opp_j] - a);
                if si * sj >= 0.0 {
                    return violation(*i, Some(*j), "cells overlap across a shared facet");
                }
            }
            [(i, _)] => {
                let on_face = parent_planes.iter().position(|(base, n)| {
                    let unit = *n / n.norm();
                    [a, b, c]
                        .iter()
                        .all(|q| unit.dot(*q - *base).abs() <= tol.at(scale))
                });
                match on_face {
                    Some(f) => boundary_area[f] += 0.5 * normal.norm(),
                    None => {
                        return violation(*i, None, "interior facet is not shared by a neighbour")
                    }
                }
            }
            many => {
                return violation(
                    many[0].0,
                    Some(many[1].0),
                    format!("facet shared by {} cells", many.len()),
                );
            }
        }
    }

    for (f, area) in boundary_area.iter().enumerate() {
        let expected = p.parent.face_area(f);
        if (area - expected).abs() > tol.at(expected).max(1e-12 * expected) {
            return violation(
                0,
                None,
                format!("parent face {f} is not covered exactly once"),
            );
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Vec3;
    use crate::tetra::EdgeSextuple;
    use approx::assert_relative_eq;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn legs(a: f64, b: f64, c: f64) -> Tetra {
        Tetra::new(
            [
                Vec3::ZERO,
                Vec3::new(a, 0.0, 0.0),
                Vec3::new(a, b, 0.0),
                Vec3::new(a, b, c),
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
    fn red_refinement_cells() {
        for (a, b, c, cell_volume) in [(1.0, 1.0, 1.0, 1.0 / 48.0), (1.0, 2.0, 3.0, 1.0 / 8.0)] {
            let t = legs(a, b, c);
            let p = red_refine_path(&t, [0, 1, 2, 3], &tol()).unwrap();
            assert_eq!(p.cells.len(), 8);
            for cell in &p.cells {
                assert!(cell.is_path(&tol()));
                assert_relative_eq!(cell.volume(), cell_volume, max_relative = 1e-12);
            }
            let report = validate_conformity(&p, &tol());
            assert!(report.is_face_to_face, "{report:?}");
        }
    }

    #[test]
    fn red_refinement_accepts_reversed_order() {
        let t = legs(1.0, 2.0, 3.0);
        assert!(red_refine_path(&t, [3, 2, 1, 0], &tol()).is_ok());
        assert!(matches!(
            red_refine_path(&t, [0, 2, 1, 3], &tol()),
            Err(Error::NotPath)
        ));
        assert!(matches!(
            red_refine_path(&regular(), [0, 1, 2, 3], &tol()),
            Err(Error::NotPath)
        ));
    }

    #[test]
    fn recursive_refinement() {
        let t = legs(1.0, 2.0, 3.0);
        let p = red_refine_recursive(&t, 2, &tol()).unwrap();
        assert_eq!(p.cells.len(), 64);
        for cell in &p.cells {
            assert!(cell.is_path(&tol()));
            assert_relative_eq!(cell.volume(), 1.0 / 64.0, max_relative = 1e-12);
        }
        assert!(validate_conformity(&p, &tol()).is_face_to_face);
    }

    #[test]
    fn regular_fourball_partition() {
        let t = regular();
        let p = partition_fourball_24(&t, &tol()).unwrap();
        assert_eq!(p.cells.len(), 24);
        for cell in &p.cells {
            assert!(cell.is_path(&tol()));
            assert_relative_eq!(cell.volume(), t.volume() / 24.0, max_relative = 1e-12);
        }
        let report = validate_conformity(&p, &tol());
        assert!(report.is_face_to_face, "{report:?}");
        assert!(report.volume_residual < 1e-12);
    }

    #[test]
    fn fourball_partition_path_legs() {
        // Legs: tangent length, face inradius, distance from face to G.
        let t = regular();
        let p = partition_fourball_24(&t, &tol()).unwrap();
        let mut expected = [0.5, 3f64.sqrt() / 6.0, 6f64.sqrt() / 12.0];
        expected.sort_by(f64::total_cmp);
        for cell in &p.cells {
            let o = cell.path_ordering(&tol()).unwrap();
            let mut got = [(0, 1), (1, 2), (2, 3)]
                .map(|(i, j)| cell.vertex(o[i]).distance(cell.vertex(o[j])));
            got.sort_by(f64::total_cmp);
            for (g, e) in got.iter().zip(expected) {
                assert_relative_eq!(*g, e, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn exterior_center_rejected() {
        // Flat equilateral pyramid: the midsphere center lies below the base.
        let h = 0.05;
        let s3 = 3f64.sqrt();
        let t = Tetra::new(
            [
                Vec3::ZERO,
                Vec3::X,
                Vec3::new(0.5, s3 / 2.0, 0.0),
                Vec3::new(0.5, s3 / 6.0, h),
            ],
            &tol(),
        )
        .unwrap();
        assert!(matches!(
            partition_fourball_24(&t, &tol()),
            Err(Error::CenterNotInterior(CenterLocation::Exterior))
        ));
    }

    #[test]
    fn perturbed_cell_fails() {
        let t = legs(1.0, 2.0, 3.0);
        let mut p = red_refine_path(&t, [0, 1, 2, 3], &tol()).unwrap();
        let mut v = *p.cells[5].vertices();
        v[0] += Vec3::new(1e-3, -2e-3, 1e-3);
        p.cells[5] = Tetra::new(v, &tol()).unwrap().positively_oriented();
        let report = validate_conformity(&p, &tol());
        assert!(!report.is_face_to_face);
        assert!(report.worst_pair.is_some());
    }

    #[test]
    fn overlapping_cells_fail() {
        let t = legs(1.0, 1.0, 1.0);
        let mut p = red_refine_path(&t, [0, 1, 2, 3], &tol()).unwrap();
        let dup = p.cells[0];
        p.cells.push(dup);
        assert!(!validate_conformity(&p, &tol()).is_face_to_face);
    }
}
