use std::fmt;

use serde::Serialize;

use super::{gluing_system, IdealTriangulation, RowKind, Skeleton};

/// A violated triangulation invariant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "problem", rename_all = "snake_case")]
pub enum Problem {
    InvolutionViolation { tet: usize, face: usize },
    /// Gluing permutation is even, so the orientations of the two
    /// tetrahedra disagree.
    OrientationMismatch { tet: usize, face: usize },
    ReversedEdge { edge: usize },
    EdgeCount { expected: usize, found: usize },
    CuspCount { vertices: usize, declared: usize },
    NonTorusCusp { cusp: usize, euler: i64 },
    /// Edge rows plus one peripheral curve per cusp do not reach rank n, or
    /// edge rows plus both curves do not reach n + c.
    PeripheralRank { expected: usize, found: usize },
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Problem::InvolutionViolation { tet, face } => write!(f, "face {face} of tetrahedron {tet}: gluing is not involutive"),
            Problem::OrientationMismatch { tet, face } => write!(f, "face {face} of tetrahedron {tet}: orientation-preserving gluing expected"),
            Problem::ReversedEdge { edge } => write!(f, "edge {edge} is glued to itself in reverse"),
            Problem::EdgeCount { expected, found } => write!(f, "{found} edge classes, expected {expected}"),
            Problem::CuspCount { vertices, declared } => write!(f, "{vertices} ideal vertices but {declared} cusp records"),
            Problem::NonTorusCusp { cusp, euler } => write!(f, "link of cusp {cusp} has Euler characteristic {euler}"),
            Problem::PeripheralRank { expected, found } => write!(f, "edge and peripheral rows have rank {found}, expected {expected}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub tetrahedra: usize,
    pub edge_classes: usize,
    /// Number of ideal vertices (cusps) found in the gluing data.
    pub cusps: usize,
    pub euler_characteristics: Vec<i64>,
    pub problems: Vec<Problem>,
}

impl ValidationReport {
    pub fn passes(&self) -> bool {
        self.problems.is_empty()
    }
}

/// Checks every invariant of an ideal triangulation; failures are collected
/// in the report rather than returned as errors.
pub fn validate(tri: &IdealTriangulation) -> ValidationReport {
    let n = tri.tetrahedra();
    let mut problems: Vec<Problem> =
        tri.involution_violations().into_iter().map(|(tet, face)| Problem::InvolutionViolation { tet, face }).collect();
    if !problems.is_empty() {
        // the cell structure is meaningless without a face pairing
        return ValidationReport { tetrahedra: n, edge_classes: 0, cusps: 0, euler_characteristics: Vec::new(), problems };
    }
    for (tet, faces) in tri.gluings().iter().enumerate() {
        for (face, g) in faces.iter().enumerate() {
            if g.perm.is_even() {
                problems.push(Problem::OrientationMismatch { tet, face });
            }
        }
    }
    let sk = Skeleton::new(tri);
    problems.extend(sk.reversed_edges.iter().map(|&edge| Problem::ReversedEdge { edge }));
    if sk.edges.len() != n {
        problems.push(Problem::EdgeCount { expected: n, found: sk.edges.len() });
    }
    if sk.vertex_count != tri.cusps().len() {
        problems.push(Problem::CuspCount { vertices: sk.vertex_count, declared: tri.cusps().len() });
    }
    for (cusp, &euler) in sk.link_euler.iter().enumerate() {
        if euler != 0 {
            problems.push(Problem::NonTorusCusp { cusp, euler });
        }
    }
    if problems.is_empty() {
        let sys = gluing_system(tri, None).expect("no slopes given");
        // symplectic: edges plus all peripheral rows reach n + c
        let found = sys.rank();
        if found != n + sk.vertex_count {
            problems.push(Problem::PeripheralRank { expected: n + sk.vertex_count, found });
        }
        for kind in [RowKind::Meridian, RowKind::Longitude] {
            let found = sys.rank_of(|r| r.kind == RowKind::Edge || r.kind == kind);
            if found != n {
                problems.push(Problem::PeripheralRank { expected: n, found });
            }
        }
    }
    ValidationReport {
        tetrahedra: n,
        edge_classes: sk.edges.len(),
        cusps: sk.vertex_count,
        euler_characteristics: sk.link_euler,
        problems,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Perm4;
    use crate::triangulation::{parse_triangulation, FaceGluing};

    fn fixture(name: &str) -> IdealTriangulation {
        let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
        parse_triangulation(&std::fs::read_to_string(path).unwrap()).unwrap()
    }

    #[test]
    fn fixtures_pass() {
        let r = validate(&fixture("figure8.tri"));
        assert!(r.passes(), "{:?}", r.problems);
        assert_eq!((r.edge_classes, r.cusps, r.euler_characteristics.clone()), (2, 1, vec![0]));
        let r = validate(&fixture("borromean.tri"));
        assert!(r.passes());
        assert_eq!((r.edge_classes, r.cusps), (8, 3));
        let r = validate(&fixture("whitehead.tri"));
        assert!(r.passes());
        assert_eq!((r.edge_classes, r.cusps), (4, 2));
    }

    #[test]
    fn face_glued_twice_is_reported() {
        let tri = fixture("figure8.tri");
        let mut g = tri.gluings().to_vec();
        // face 1 of tetrahedron 0 now also claims the target of face 0
        g[0][1] = g[0][0];
        let bad = IdealTriangulation::unchecked("bad", g, tri.cusps().to_vec()).unwrap();
        let r = validate(&bad);
        assert!(!r.passes());
        assert!(r.problems.iter().any(|p| matches!(p, Problem::InvolutionViolation { .. })));
    }

    #[test]
    fn degenerate_peripheral_rows_are_reported() {
        let tri = fixture("figure8.tri");
        let zero = vec![0; 6];
        let cusp = crate::triangulation::Cusp { meridian: zero.clone(), longitude: zero };
        let r = validate(&tri.with_cusps(vec![cusp]).unwrap());
        assert!(r.problems.iter().any(|p| matches!(p, Problem::PeripheralRank { .. })));
    }

    #[test]
    fn even_gluing_is_rejected() {
        // one tetrahedron, faces 0/1 and 2/3 paired by the even perm (01)(23)
        let p = Perm4::swap(0, 1).compose(Perm4::swap(2, 3));
        let tri = IdealTriangulation::new("even", vec![[FaceGluing { to: 0, perm: p }; 4]], vec![]).unwrap();
        assert!(validate(&tri).problems.iter().any(|p| matches!(p, Problem::OrientationMismatch { .. })));
    }
}
