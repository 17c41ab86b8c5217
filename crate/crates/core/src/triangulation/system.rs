//! Integer gluing equations.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::{IdealTriangulation, Skeleton};
use crate::filling::Slope;
use crate::linalg;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowKind {
    Edge,
    Meridian,
    Longitude,
    Filling,
}

/// Σⱼ aⱼ log zⱼ + bⱼ log z′ⱼ + cⱼ log z″ⱼ = target·πi
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EquationRow {
    pub kind: RowKind,
    /// Cusp index for peripheral and filling rows.
    pub cusp: Option<usize>,
    pub coefficients: Vec<i64>,
    pub target: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error("{slopes} slopes given for {cusps} cusps")]
    SlopeCount { slopes: usize, cusps: usize },
    #[error("row {row} has {found} coefficients, expected {expected}")]
    Width { row: usize, expected: usize, found: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GluingSystem {
    tetrahedra: usize,
    rows: Vec<EquationRow>,
}

impl GluingSystem {
    pub fn new(tetrahedra: usize, rows: Vec<EquationRow>) -> Result<Self, SystemError> {
        for (row, r) in rows.iter().enumerate() {
            if r.coefficients.len() != 3 * tetrahedra {
                return Err(SystemError::Width { row, expected: 3 * tetrahedra, found: r.coefficients.len() });
            }
        }
        Ok(GluingSystem { tetrahedra, rows })
    }

    pub fn tetrahedra(&self) -> usize {
        self.tetrahedra
    }

    pub fn rows(&self) -> &[EquationRow] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Rows rewritten in the shapes z and z′ only, using
    /// log z + log z′ + log z″ = πi: (a, b, c; ν) becomes (a−c, b−c; ν−Σc).
    pub fn reduced(&self) -> (Vec<Vec<i64>>, Vec<i64>) {
        let mut rows = Vec::with_capacity(self.rows.len());
        let mut targets = Vec::with_capacity(self.rows.len());
        for r in &self.rows {
            let mut red = Vec::with_capacity(2 * self.tetrahedra);
            let mut shift = 0;
            for t in r.coefficients.chunks(3) {
                red.push(t[0] - t[2]);
                red.push(t[1] - t[2]);
                shift += t[2];
            }
            rows.push(red);
            targets.push(r.target - shift);
        }
        (rows, targets)
    }

    /// Rank over the rationals of the selected rows in reduced form.
    pub fn rank_of(&self, which: impl Fn(&EquationRow) -> bool) -> usize {
        let (red, _) = self.reduced();
        let picked: Vec<Vec<i64>> = red.into_iter().zip(&self.rows).filter(|(_, r)| which(r)).map(|(x, _)| x).collect();
        linalg::rational_rank(&picked)
    }

    pub fn rank(&self) -> usize {
        self.rank_of(|_| true)
    }

    /// Up to `n` rows independent in reduced form, visiting filling and
    /// meridian rows, then edge rows, then longitude rows.
    ///
    /// Longitudes come last because at a complete cusp their derivative is
    /// a multiple of the meridian's, so taking both makes the square
    /// Jacobian singular even though the rows are rationally independent.
    pub fn square_subsystem(&self) -> Vec<usize> {
        let (red, _) = self.reduced();
        let rank = |k: RowKind| match k {
            RowKind::Filling | RowKind::Meridian => 0,
            RowKind::Edge => 1,
            RowKind::Longitude => 2,
        };
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| rank(self.rows[i].kind));
        let mut chosen = linalg::select_independent(&red, &order, self.tetrahedra);
        chosen.sort_unstable();
        chosen
    }

    /// Hex SHA-256 of a canonical text form of the system.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("tetrahedra {}\n", self.tetrahedra));
        for r in &self.rows {
            let kind = match r.kind {
                RowKind::Edge => "edge",
                RowKind::Meridian => "meridian",
                RowKind::Longitude => "longitude",
                RowKind::Filling => "filling",
            };
            let cusp = r.cusp.map_or("-".to_string(), |c| c.to_string());
            let coeffs: Vec<String> = r.coefficients.iter().map(|c| c.to_string()).collect();
            h.update(format!("{kind} {cusp} {} : {}\n", r.target, coeffs.join(" ")));
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Block-diagonal union; the other system's tetrahedra come after ours
    /// and its cusps are renumbered after ours.
    pub fn disjoint_union(&self, other: &GluingSystem) -> GluingSystem {
        let n = self.tetrahedra + other.tetrahedra;
        let cusp_shift = self.rows.iter().filter_map(|r| r.cusp).max().map_or(0, |c| c + 1);
        let mut rows = Vec::with_capacity(self.rows.len() + other.rows.len());
        for r in &self.rows {
            let mut c = r.coefficients.clone();
            c.resize(3 * n, 0);
            rows.push(EquationRow { coefficients: c, ..r.clone() });
        }
        for r in &other.rows {
            let mut c = vec![0; 3 * self.tetrahedra];
            c.extend_from_slice(&r.coefficients);
            rows.push(EquationRow { coefficients: c, cusp: r.cusp.map(|k| k + cusp_shift), ..r.clone() });
        }
        GluingSystem { tetrahedra: n, rows }
    }
}

/// Edge rows, then per cusp either its two completeness rows or a single
/// filling row.
pub fn gluing_system(tri: &IdealTriangulation, slopes: Option<&[Slope]>) -> Result<GluingSystem, SystemError> {
    let cusps = tri.cusps();
    if let Some(s) = slopes {
        if s.len() != cusps.len() {
            return Err(SystemError::SlopeCount { slopes: s.len(), cusps: cusps.len() });
        }
    }
    let n = tri.tetrahedra();
    let skeleton = Skeleton::new(tri);
    let mut rows: Vec<EquationRow> = skeleton
        .edge_rows()
        .into_iter()
        .map(|coefficients| EquationRow { kind: RowKind::Edge, cusp: None, coefficients, target: 2 })
        .collect();
    for (k, cusp) in cusps.iter().enumerate() {
        match slopes.map_or(Slope::Unfilled, |s| s[k]) {
            Slope::Unfilled => {
                rows.push(EquationRow { kind: RowKind::Meridian, cusp: Some(k), coefficients: cusp.meridian.clone(), target: 0 });
                rows.push(EquationRow { kind: RowKind::Longitude, cusp: Some(k), coefficients: cusp.longitude.clone(), target: 0 });
            }
            Slope::Curve { p, q } => {
                let coefficients = cusp.meridian.iter().zip(&cusp.longitude).map(|(m, l)| p * m + q * l).collect();
                rows.push(EquationRow { kind: RowKind::Filling, cusp: Some(k), coefficients, target: 2 });
            }
        }
    }
    GluingSystem::new(n, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::parse_triangulation;

    fn fixture(name: &str) -> IdealTriangulation {
        let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
        parse_triangulation(&std::fs::read_to_string(path).unwrap()).unwrap()
    }

    #[test]
    fn figure_eight_shape() {
        let sys = gluing_system(&fixture("figure8.tri"), None).unwrap();
        assert_eq!(sys.rows().len(), 4);
        let kinds: Vec<_> = sys.rows().iter().map(|r| r.kind).collect();
        assert_eq!(kinds, [RowKind::Edge, RowKind::Edge, RowKind::Meridian, RowKind::Longitude]);
        assert!(sys.rows().iter().all(|r| r.coefficients.len() == 6));
    }

    #[test]
    fn edge_sums_and_ranks() {
        for (file, n, c) in [("figure8.tri", 2, 1), ("whitehead.tri", 4, 2), ("borromean.tri", 8, 3)] {
            let sys = gluing_system(&fixture(file), None).unwrap();
            let mut sums = vec![0; 3 * n];
            for r in sys.rows().iter().filter(|r| r.kind == RowKind::Edge) {
                assert_eq!(r.target, 2);
                for (s, x) in sums.iter_mut().zip(&r.coefficients) {
                    *s += x;
                }
            }
            assert!(sums.iter().all(|&s| s == 2), "{file}");
            assert_eq!(sys.rank_of(|r| r.kind == RowKind::Edge), n - c, "{file}");
            assert_eq!(sys.rank_of(|r| r.kind != RowKind::Longitude), n, "{file}");
            assert_eq!(sys.rank_of(|r| r.kind != RowKind::Meridian), n, "{file}");
            assert_eq!(sys.rank(), n + c, "{file}");
            assert_eq!(sys.square_subsystem().len(), n);
        }
    }

    #[test]
    fn unfilled_slopes_change_nothing() {
        let tri = fixture("whitehead.tri");
        let open = [Slope::Unfilled, Slope::Unfilled];
        assert_eq!(gluing_system(&tri, Some(&open)).unwrap(), gluing_system(&tri, None).unwrap());
        assert_eq!(
            gluing_system(&tri, Some(&open[..1])),
            Err(SystemError::SlopeCount { slopes: 1, cusps: 2 })
        );
    }

    #[test]
    fn filling_row_combines_peripheral_rows() {
        let tri = fixture("whitehead.tri");
        let sys = gluing_system(&tri, Some(&[Slope::new(1, 1).unwrap(), Slope::Unfilled])).unwrap();
        let fill = sys.rows().iter().find(|r| r.kind == RowKind::Filling).unwrap();
        let c = &tri.cusps()[0];
        let expect: Vec<i64> = c.meridian.iter().zip(&c.longitude).map(|(m, l)| m + l).collect();
        assert_eq!(fill.coefficients, expect);
        assert_eq!(fill.target, 2);
        assert_eq!(sys.rows().len(), 4 + 1 + 2);
    }

    #[test]
    fn digest_is_stable_and_discriminating() {
        let a = gluing_system(&fixture("figure8.tri"), None).unwrap();
        let b = gluing_system(&fixture("whitehead.tri"), None).unwrap();
        assert_eq!(a.digest(), a.clone().digest());
        assert_ne!(a.digest(), b.digest());
        assert_eq!(a.digest().len(), 64);
    }

    #[test]
    fn union_is_block_diagonal() {
        let a = gluing_system(&fixture("figure8.tri"), None).unwrap();
        let b = gluing_system(&fixture("whitehead.tri"), None).unwrap();
        let u = a.disjoint_union(&b);
        assert_eq!(u.tetrahedra(), 6);
        assert_eq!(u.rows().len(), a.rows().len() + b.rows().len());
        assert_eq!(u.rank(), 6 + 3);
        assert_eq!(u.rows().last().unwrap().cusp, Some(2));
    }
}
