//! Document formats: JSON tetrahedra and meshes, OFF/OBJ export, sweep CSV.

use std::fmt::Write as _;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::bounds::{Family, SweepResult};
use crate::error::Error;
use crate::geom::{Point3, Tolerance, Vec3};
use crate::partition::{Partition, PartitionKind};
use crate::tetra::{EdgeSextuple, Tetra};

#[derive(Debug, thiserror::Error)]
pub enum DocumentError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid document: {0}")]
    Invalid(String),
    #[error(transparent)]
    Geometry(#[from] Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl From<serde_json::Error> for DocumentError {
    fn from(e: serde_json::Error) -> Self {
        DocumentError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

pub type DocResult<T> = std::result::Result<T, DocumentError>;

/// Partial tolerance override; missing fields keep the caller's values.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abs: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle_abs: Option<f64>,
}

impl ToleranceOverrides {
    pub fn apply(&self, base: Tolerance) -> crate::Result<Tolerance> {
        Tolerance::new(
            self.rel.unwrap_or(base.rel),
            self.abs.unwrap_or(base.abs),
            self.angle_abs.unwrap_or(base.angle_abs),
        )
    }
}

/// A tetrahedron given either by four vertices or by six edge lengths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TetraDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<[[f64; 3]; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<EdgeSextuple>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<ToleranceOverrides>,
}

/// What a [`TetraDocument`] describes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TetraInput {
    Vertices([Point3; 4]),
    Edges(EdgeSextuple),
}

impl TetraDocument {
    pub fn from_vertices(t: &Tetra) -> Self {
        TetraDocument {
            label: None,
            vertices: Some(t.vertices().map(|v| v.to_array())),
            edges: None,
            tolerance: None,
        }
    }

    pub fn from_edges(s: EdgeSextuple) -> Self {
        TetraDocument {
            label: None,
            vertices: None,
            edges: Some(s),
            tolerance: None,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn from_json(text: &str) -> DocResult<Self> {
        let doc: TetraDocument = serde_json::from_str(text)?;
        doc.input()?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn input(&self) -> DocResult<TetraInput> {
        match (&self.vertices, &self.edges) {
            (Some(v), None) => {
                let pts = v.map(Vec3::from);
                if pts.iter().any(|p| !p.is_finite()) {
                    return Err(Error::NonFinite.into());
                }
                Ok(TetraInput::Vertices(pts))
            }
            (None, Some(e)) => Ok(TetraInput::Edges(EdgeSextuple::from_array(e.to_array())?)),
            (Some(_), Some(_)) => Err(DocumentError::Invalid(
                "give either \"vertices\" or \"edges\", not both".into(),
            )),
            (None, None) => Err(DocumentError::Invalid(
                "missing \"vertices\" or \"edges\"".into(),
            )),
        }
    }

    /// Effective tolerance given the caller's defaults.
    pub fn tolerance(&self, base: Tolerance) -> DocResult<Tolerance> {
        Ok(match &self.tolerance {
            Some(o) => o.apply(base)?,
            None => base,
        })
    }

    /// The tetrahedron, realised from edges in canonical position if needed.
    pub fn to_tetra(&self, tol: &Tolerance) -> DocResult<Tetra> {
        Ok(match self.input()? {
            TetraInput::Vertices(v) => Tetra::new(v, tol)?,
            TetraInput::Edges(s) => s.realize(tol)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshProvenance {
    pub parent: [[f64; 3]; 4],
    pub kind: PartitionKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// A flat tetrahedral mesh.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshDocument {
    pub vertices: Vec<[f64; 3]>,
    pub cells: Vec<[usize; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<MeshProvenance>,
}

impl MeshDocument {
    /// Mesh of a partition with vertices merged within tolerance. Cells
    /// are sorted lexicographically by vertex coordinates (first vertex
    /// first) and vertices are numbered in order of first use, so the
    /// output does not depend on construction order.
    pub fn from_partition(p: &Partition, seed: Option<u64>, tol: &Tolerance) -> Self {
        let mut cells: Vec<[Point3; 4]> = p.cells.iter().map(|c| *c.vertices()).collect();
        cells.sort_by(|x, y| {
            x.iter()
                .zip(y)
                .map(|(a, b)| a.lex_cmp(b))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let scale = p.parent.edge_sextuple().max();
        let mut vertices: Vec<Point3> = Vec::new();
        let mut index_of = |q: Point3| match vertices
            .iter()
            .position(|&v| v.distance(q) <= tol.at(scale))
        {
            Some(i) => i,
            None => {
                vertices.push(q);
                vertices.len() - 1
            }
        };
        let cells = cells.into_iter().map(|c| c.map(&mut index_of)).collect();
        MeshDocument {
            vertices: vertices.into_iter().map(|v| v.to_array()).collect(),
            cells,
            provenance: Some(MeshProvenance {
                parent: p.parent.vertices().map(|v| v.to_array()),
                kind: p.kind,
                seed,
            }),
        }
    }

    pub fn validate(&self) -> DocResult<()> {
        let n = self.vertices.len();
        for (i, c) in self.cells.iter().enumerate() {
            if let Some(bad) = c.iter().find(|&&k| k >= n) {
                return Err(DocumentError::Invalid(format!(
                    "cell {i} refers to vertex {bad}, but there are only {n}"
                )));
            }
        }
        if self.vertices.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite.into());
        }
        Ok(())
    }

    /// Pairs of vertex indices closer than tolerance.
    pub fn duplicate_vertices(&self, tol: &Tolerance) -> Vec<(usize, usize)> {
        let pts: Vec<Point3> = self.vertices.iter().map(|&v| Vec3::from(v)).collect();
        let scale = pts.iter().map(|p| p.max_abs()).fold(0.0, f64::max);
        let mut out = Vec::new();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                if pts[i].distance(pts[j]) <= tol.at(scale) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Cell vertex coordinates, without degeneracy checks.
    pub fn cell_points(&self) -> Vec<[Point3; 4]> {
        self.cells
            .iter()
            .map(|c| c.map(|i| Vec3::from(self.vertices[i])))
            .collect()
    }

    pub fn cell_volumes(&self) -> Vec<f64> {
        self.cell_points()
            .into_iter()
            .map(|v| Tetra::degenerate(v).volume())
            .collect()
    }

    pub fn from_json(text: &str) -> DocResult<Self> {
        let doc: MeshDocument = serde_json::from_str(text)?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    /// OFF with tetrahedral cells written as `4 i j k l`.
    pub fn to_off(&self) -> String {
        let mut s = String::new();
        writeln!(s, "OFF").unwrap();
        writeln!(s, "{} {} 0", self.vertices.len(), self.cells.len()).unwrap();
        for [x, y, z] in &self.vertices {
            writeln!(s, "{x:?} {y:?} {z:?}").unwrap();
        }
        for [i, j, k, l] in &self.cells {
            writeln!(s, "4 {i} {j} {k} {l}").unwrap();
        }
        s
    }

    pub fn from_off(text: &str) -> DocResult<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let parse_err = |line: usize, message: String| DocumentError::Parse {
            line,
            column: 1,
            message,
        };
        match lines.next() {
            Some((_, "OFF")) => {}
            Some((n, other)) => {
                return Err(parse_err(
                    n,
                    format!("expected OFF header, found {other:?}"),
                ))
            }
            None => return Err(parse_err(1, "empty input".into())),
        }
        let (n, counts) = lines
            .next()
            .ok_or_else(|| parse_err(2, "missing counts".into()))?;
        let counts: Vec<usize> = counts
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| parse_err(n, format!("bad count {t:?}")))
            })
            .collect::<DocResult<_>>()?;
        let [nv, nc, ..] = counts[..] else {
            return Err(parse_err(n, "expected vertex and cell counts".into()));
        };
        let mut vertices = Vec::with_capacity(nv);
        for _ in 0..nv {
            let (n, l) = lines
                .next()
                .ok_or_else(|| parse_err(n, "missing vertex line".into()))?;
            let v: Vec<f64> = l
                .split_whitespace()
                .map(|t| {
                    t.parse()
                        .map_err(|_| parse_err(n, format!("bad coordinate {t:?}")))
                })
                .collect::<DocResult<_>>()?;
            let [x, y, z] = v[..] else {
                return Err(parse_err(
                    n,
                    format!("expected 3 coordinates, found {}", v.len()),
                ));
            };
            vertices.push([x, y, z]);
        }
        let mut cells = Vec::with_capacity(nc);
        for _ in 0..nc {
            let (n, l) = lines
                .next()
                .ok_or_else(|| parse_err(n, "missing cell line".into()))?;
            let c: Vec<usize> = l
                .split_whitespace()
                .map(|t| {
                    t.parse()
                        .map_err(|_| parse_err(n, format!("bad index {t:?}")))
                })
                .collect::<DocResult<_>>()?;
            let [4, i, j, k, m] = c[..] else {
                return Err(parse_err(n, "expected a cell line \"4 i j k l\"".into()));
            };
            cells.push([i, j, k, m]);
        }
        let doc = MeshDocument {
            vertices,
            cells,
            provenance: None,
        };
        doc.validate()?;
        Ok(doc)
    }

    /// Boundary surface as OBJ: triangles belonging to exactly one cell,
    /// wound so their normals point out of that cell.
    pub fn to_obj_surface(&self) -> String {
        use std::collections::HashMap;
        let pts: Vec<Point3> = self.vertices.iter().map(|&v| Vec3::from(v)).collect();
        let mut faces: HashMap<[usize; 3], Vec<([usize; 3], usize)>> = HashMap::new();
        for c in &self.cells {
            for skip in 0..4 {
                let tri: Vec<usize> = (0..4).filter(|&j| j != skip).map(|j| c[j]).collect();
                let tri = [tri[0], tri[1], tri[2]];
                let mut key = tri;
                key.sort_unstable();
                faces.entry(key).or_default().push((tri, c[skip]));
            }
        }
        let mut boundary: Vec<[usize; 3]> = faces
            .into_values()
            .filter(|v| v.len() == 1)
            .map(|v| {
                let ([i, j, k], opp) = v[0];
                let n = (pts[j] - pts[i]).cross(pts[k] - pts[i]);
                if n.dot(pts[opp] - pts[i]) > 0.0 {
                    [i, k, j]
                } else {
                    [i, j, k]
                }
            })
            .collect();
        boundary.sort_unstable();
        let mut s = String::new();
        for [x, y, z] in &self.vertices {
            writeln!(s, "v {x:?} {y:?} {z:?}").unwrap();
        }
        for [i, j, k] in boundary {
            writeln!(s, "f {} {} {}", i + 1, j + 1, k + 1).unwrap();
        }
        s
    }
}

fn param_names(family: Family) -> &'static [&'static str] {
    match family {
        Family::PathDiag => &["a"],
        Family::CubeCorner => &["a", "b", "c"],
        Family::EqPyramid => &["h"],
        Family::EquifacialBox => &["p", "q", "r"],
        Family::RandomFourball => &["index"],
    }
}

/// Sweep samples as CSV: one column per parameter, then `sigma_radians`,
/// `sigma_degrees` and `flags` (`;`-separated class names).
pub fn write_sweep_csv<W: Write>(r: &SweepResult, out: W) -> DocResult<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = param_names(r.family).to_vec();
    header.extend(["sigma_radians", "sigma_degrees", "flags"]);
    w.write_record(&header)?;
    for s in &r.samples {
        let mut row: Vec<String> = s.params.iter().map(|p| format!("{p:?}")).collect();
        row.push(format!("{:?}", s.sigma));
        row.push(format!("{:.6}", s.sigma.to_degrees()));
        let f = s.flags;
        let flags: Vec<&str> = [
            (f.path, "path"),
            (f.fourball, "fourball"),
            (f.equifacial, "equifacial"),
            (f.nonobtuse, "nonobtuse"),
        ]
        .into_iter()
        .filter_map(|(on, name)| on.then_some(name))
        .collect();
        row.push(flags.join(";"));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
