//! Ideal triangulations: data model, file format and gluing equations.
//!
//! Face `f` of tetrahedron `t` is glued to face `perm[f]` of tetrahedron
//! `to`, with vertex `v` of `t` identified to vertex `perm[v]` of `to`.

mod format;
mod skeleton;
mod system;
mod validate;

pub use format::{parse_triangulation, serialize_triangulation};
pub use skeleton::{edge_index, EdgeClass, EdgeIncidence, ShapeSlot, Skeleton, EDGES};
pub use system::{gluing_system, EquationRow, GluingSystem, RowKind, SystemError};
pub use validate::{validate, Problem, ValidationReport};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::Perm4;

/// Where one face of a tetrahedron is glued.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaceGluing {
    pub to: usize,
    pub perm: Perm4,
}

/// Peripheral curves of one cusp, as rows of the gluing system.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cusp {
    pub meridian: Vec<i64>,
    pub longitude: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TriangulationError {
    #[error("malformed triangulation document: {0}")]
    Malformed(String),
    #[error("a triangulation needs at least one tetrahedron")]
    Empty,
    #[error("declared {declared} tetrahedra but {found} gluing records were given")]
    CountMismatch { declared: usize, found: usize },
    #[error("face {face} of tetrahedron {tet} points to tetrahedron {to}, out of range")]
    IndexOutOfRange { tet: usize, face: usize, to: usize },
    #[error("gluing of face {face} of tetrahedron {tet} is not involutive")]
    NotInvolutive { tet: usize, face: usize },
    #[error("peripheral row of cusp {cusp} has length {found}, expected {expected}")]
    RowLength { cusp: usize, expected: usize, found: usize },
}

/// Combinatorial ideal triangulation with peripheral annotations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IdealTriangulation {
    name: String,
    gluings: Vec<[FaceGluing; 4]>,
    cusps: Vec<Cusp>,
}

impl IdealTriangulation {
    /// Builds a triangulation, checking index ranges, involutivity and row
    /// lengths.
    pub fn new(name: impl Into<String>, gluings: Vec<[FaceGluing; 4]>, cusps: Vec<Cusp>) -> Result<Self, TriangulationError> {
        let tri = Self::unchecked(name, gluings, cusps)?;
        if let Some((tet, face)) = tri.involution_violations().first().copied() {
            return Err(TriangulationError::NotInvolutive { tet, face });
        }
        Ok(tri)
    }

    /// Like [`IdealTriangulation::new`] but accepts non-involutive gluings,
    /// so that [`validate`] can report them.
    pub fn unchecked(name: impl Into<String>, gluings: Vec<[FaceGluing; 4]>, cusps: Vec<Cusp>) -> Result<Self, TriangulationError> {
        let n = gluings.len();
        if n == 0 {
            return Err(TriangulationError::Empty);
        }
        for (tet, faces) in gluings.iter().enumerate() {
            for (face, g) in faces.iter().enumerate() {
                if g.to >= n {
                    return Err(TriangulationError::IndexOutOfRange { tet, face, to: g.to });
                }
            }
        }
        for (cusp, c) in cusps.iter().enumerate() {
            for row in [&c.meridian, &c.longitude] {
                if row.len() != 3 * n {
                    return Err(TriangulationError::RowLength { cusp, expected: 3 * n, found: row.len() });
                }
            }
        }
        Ok(IdealTriangulation { name: name.into(), gluings, cusps })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn tetrahedra(&self) -> usize {
        self.gluings.len()
    }

    pub fn gluings(&self) -> &[[FaceGluing; 4]] {
        &self.gluings
    }

    pub fn gluing(&self, tet: usize, face: usize) -> FaceGluing {
        self.gluings[tet][face]
    }

    pub fn cusps(&self) -> &[Cusp] {
        &self.cusps
    }

    /// Replaces the peripheral rows.
    pub fn with_cusps(&self, cusps: Vec<Cusp>) -> Result<Self, TriangulationError> {
        Self::unchecked(self.name.clone(), self.gluings.clone(), cusps)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Faces whose partner does not glue back with the inverse permutation.
    pub fn involution_violations(&self) -> Vec<(usize, usize)> {
        let mut bad = Vec::new();
        for (tet, faces) in self.gluings.iter().enumerate() {
            for (face, g) in faces.iter().enumerate() {
                let back = self.gluings[g.to][g.perm.apply(face)];
                if back.to != tet || back.perm != g.perm.inverse() {
                    bad.push((tet, face));
                }
            }
        }
        bad
    }
}
