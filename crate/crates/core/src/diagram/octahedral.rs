//! One ideal octahedron per crossing, cut into four tetrahedra around the
//! vertical axis.
//!
//! Tetrahedron `4k + q` sits in quadrant `q` of crossing `k`, between PD
//! positions `q` and `q + 1`. Its vertices are 0 = top of the axis (on the
//! over-strand side), 1 = bottom, 2 = equatorial vertex in direction `q`,
//! 3 = equatorial vertex in direction `q + 1`. Equatorial vertices in
//! over-strand directions go to +∞, the others to −∞; the two points at
//! infinity and the axis ends become finite vertices, removed afterwards.

use std::collections::HashMap;

use super::{cusp_basis, remove_finite_vertices, DiagramError, PDCode};
use crate::perm::Perm4;
use crate::triangulation::{validate, Cusp, FaceGluing, IdealTriangulation};

fn up(j: usize) -> bool {
    j % 2 == 1
}

/// The raw 4c-tetrahedron decomposition, with finite vertices still present
/// and no peripheral rows.
pub fn octahedral_decomposition(pd: &PDCode) -> IdealTriangulation {
    let c = pd.crossings();
    let n = 4 * c.len();
    let swap23 = Perm4::swap(2, 3);
    let mut glue: Vec<[Option<FaceGluing>; 4]> = vec![[None; 4]; n];
    for k in 0..c.len() {
        for q in 0..4 {
            let t = 4 * k + q;
            glue[t][3] = Some(FaceGluing { to: 4 * k + (q + 3) % 4, perm: swap23 });
            glue[t][2] = Some(FaceGluing { to: 4 * k + (q + 1) % 4, perm: swap23 });
        }
    }

    let mut occ: HashMap<i64, Vec<(usize, usize)>> = HashMap::new();
    for (k, x) in c.iter().enumerate() {
        for (j, &l) in x.iter().enumerate() {
            occ.entry(l).or_default().push((k, j));
        }
    }
    let direction = |q: usize, vert: usize| if vert == 2 { q } else { (q + 1) % 4 };
    let mut labels: Vec<&i64> = occ.keys().collect();
    labels.sort_unstable();
    for l in labels {
        let ends = &occ[l];
        let (first, second) = (ends[0], ends[1]);
        for ((a, ja), (b, jb)) in [(first, second), (second, first)] {
            for (qa, qb) in [(ja, (jb + 3) % 4), ((ja + 3) % 4, jb)] {
                let (ta, tb) = (4 * a + qa, 4 * b + qb);
                let xa = if up(ja) { 0 } else { 1 };
                let xb = if up(jb) { 0 } else { 1 };
                let (fa, fb) = (1 - xa, 1 - xb);
                let mut images = [usize::MAX; 4];
                images[xa] = xb;
                images[fa] = fb;
                for v in [2, 3] {
                    for w in [2, 3] {
                        if up(direction(qa, v)) == up(direction(qb, w)) {
                            images[v] = w;
                        }
                    }
                }
                let perm = Perm4::new(images.map(|x| x as u8)).expect("equatorial labels match one to one");
                glue[ta][fa] = Some(FaceGluing { to: tb, perm });
            }
        }
    }
    let gluings = glue.into_iter().map(|faces| faces.map(|g| g.expect("every face glued"))).collect();
    IdealTriangulation::new("octahedral decomposition", gluings, Vec::new()).expect("octahedral gluings are involutive")
}

/// Ideal triangulation of the link complement: the octahedral
/// decomposition with its finite vertices removed and peripheral rows from
/// [`cusp_basis`].
pub fn octahedral_triangulation(pd: &PDCode) -> Result<IdealTriangulation, DiagramError> {
    let raw = octahedral_decomposition(pd);
    let ideal = remove_finite_vertices(&raw);
    let rows = cusp_basis(&ideal)?;
    let cusps = rows.into_iter().map(|b| Cusp { meridian: b.meridian, longitude: b.longitude }).collect();
    let name = format!("link complement ({} crossings)", pd.crossings().len());
    let tri = ideal.with_cusps(cusps).map_err(|e| DiagramError::Construction(e.to_string()))?.with_name(name);
    let report = validate(&tri);
    if !report.passes() {
        let msg: Vec<String> = report.problems.iter().map(|p| p.to_string()).collect();
        return Err(DiagramError::Construction(msg.join("; ")));
    }
    if report.cusps != pd.components() {
        return Err(DiagramError::Construction(format!("{} cusps for {} components", report.cusps, pd.components())));
    }
    Ok(tri)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;
    use crate::diagram::tests::{FIGURE_EIGHT, HOPF};
    use crate::filling::complete;
    use crate::solver::SolveOptions;

    #[test]
    fn figure_eight_complement_is_structurally_sound() {
        let pd = parse_pd(FIGURE_EIGHT).unwrap();
        assert_eq!(octahedral_decomposition(&pd).tetrahedra(), 16);
        let tri = octahedral_triangulation(&pd).unwrap();
        assert_eq!(tri.cusps().len(), 1);
        let report = validate(&tri);
        assert!(report.passes());
        assert_eq!(report.euler_characteristics, vec![0]);
        // a degree-two edge survives the reduction, so no positively
        // oriented solution exists; only a geometric one is checked
        if let Ok(f) = complete(&tri, &SolveOptions::default()) {
            if f.certificate.geometric {
                assert!((f.volume.value - 2.029883212819307).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn output_is_deterministic() {
        let pd = parse_pd(FIGURE_EIGHT).unwrap();
        let a = crate::serialize_triangulation(&octahedral_triangulation(&pd).unwrap());
        let b = crate::serialize_triangulation(&octahedral_triangulation(&pd).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn hopf_link_has_two_cusps_and_no_hyperbolic_structure() {
        let pd = parse_pd(HOPF).unwrap();
        match octahedral_triangulation(&pd) {
            Ok(tri) => {
                assert_eq!(tri.cusps().len(), 2);
                let geometric = complete(&tri, &SolveOptions::default()).map(|f| f.certificate.geometric);
                assert!(!matches!(geometric, Ok(true)));
            }
            Err(e) => panic!("{e}"),
        }
    }
}
