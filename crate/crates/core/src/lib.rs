//! Dihedral angle sums of path tetrahedra and 4-ball (midsphere) tetrahedra.
//!
//! The crate is organised bottom-up:
//!
//! * [`geom`] – vectors, planes, the tolerance policy, trilateration.
//! * [`tetra`] – per-tetrahedron measurements: edge sextuples, Cayley–Menger
//!   determinants, volume, dihedral angles, insphere and circumsphere,
//!   realizability from six lengths.
//! * [`fourball`] – tangent-length algebra, the five equivalent 4-ball
//!   tests, the midsphere, the inner Soddy circle and the two builders.
//! * [`partition`] – the 24 path-tetrahedron split of a 4-ball tetrahedron,
//!   red refinement of a path tetrahedron and a conformity validator.
//! * [`bounds`] – closed-form sums, tetrahedron families, the spherical
//!   solver for the opposite-normal sum `k`, and sweep certification.
//! * [`io`] – JSON documents, OFF/OBJ mesh export and CSV sweep output.

pub mod bounds;
pub mod error;
pub mod fourball;
pub mod geom;
pub mod io;
pub mod partition;
pub mod tetra;

pub use error::{Error, ErrorCategory, Result};
pub use geom::{Plane, Point3, Tolerance, Vec3};
pub use tetra::{AngleReport, Edge, EdgeSextuple, Existence, Tetra};
