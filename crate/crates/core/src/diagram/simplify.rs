//! Removing finite (sphere-link) vertices from a triangulation.
//!
//! The main move collapses an edge joining a finite vertex to a different
//! vertex, flattening every tetrahedron around it. When no edge passes the
//! safety checks, a two-tetrahedron gadget is inserted to open up a face so
//! that a later collapse applies.

use std::collections::HashSet;

use petgraph::unionfind::UnionFind;

use crate::perm::Perm4;
use crate::triangulation::{edge_index, FaceGluing, IdealTriangulation, Skeleton, EDGES};

type Gluings = Vec<[FaceGluing; 4]>;

fn face_classes(g: &Gluings) -> Vec<[usize; 4]> {
    let mut uf = UnionFind::<usize>::new(4 * g.len());
    for (t, faces) in g.iter().enumerate() {
        for (f, x) in faces.iter().enumerate() {
            uf.union(4 * t + f, 4 * x.to + x.perm.apply(f));
        }
    }
    (0..g.len()).map(|t| [0, 1, 2, 3].map(|f| uf.find(4 * t + f))).collect()
}

/// Collapses the edge `ab` of tetrahedron `t0`, or returns `None` if the
/// collapse would change the topology or is not defined.
fn collapse(g: &Gluings, sk: &Skeleton, finite: &[bool], t0: usize, a: usize, b: usize) -> Option<Gluings> {
    let (va, vb) = (sk.vertex_class[t0][a], sk.vertex_class[t0][b]);
    if va == vb || !(finite[va] || finite[vb]) {
        return None;
    }
    let e = sk.edge_class[t0][edge_index(a, b)];
    let mut embeddings = Vec::new();
    for t in 0..g.len() {
        for (i, &(x, y)) in EDGES.iter().enumerate() {
            if sk.edge_class[t][i] == e {
                embeddings.push((t, x, y));
            }
        }
    }
    let tets: HashSet<usize> = embeddings.iter().map(|&(t, _, _)| t).collect();
    if tets.len() != embeddings.len() {
        return None;
    }

    // edges xz, yz get identified for each triangle xyz on the edge, and
    // the two end faces of each flattened tetrahedron get identified: both
    // must stay acyclic
    let faces = face_classes(g);
    let mut edge_uf = UnionFind::<usize>::new(sk.edges.len());
    let mut face_uf = UnionFind::<usize>::new(4 * g.len());
    let mut seen = HashSet::new();
    for &(t, x, y) in &embeddings {
        let others: Vec<usize> = (0..4).filter(|&v| v != x && v != y).collect();
        for (z, w) in [(others[0], others[1]), (others[1], others[0])] {
            if !seen.insert(faces[t][w]) {
                continue;
            }
            if !edge_uf.union(sk.edge_class[t][edge_index(x, z)], sk.edge_class[t][edge_index(y, z)]) {
                return None;
            }
        }
        if !face_uf.union(faces[t][x], faces[t][y]) {
            return None;
        }
    }

    let flat: std::collections::HashMap<usize, (usize, usize)> = embeddings.iter().map(|&(t, x, y)| (t, (x, y))).collect();
    let keep: Vec<usize> = (0..g.len()).filter(|t| !flat.contains_key(t)).collect();
    let mut index = vec![usize::MAX; g.len()];
    for (i, &t) in keep.iter().enumerate() {
        index[t] = i;
    }
    let mut out = Vec::with_capacity(keep.len());
    for &t in &keep {
        let mut row = [g[0][0]; 4];
        for (f, slot) in row.iter_mut().enumerate() {
            let FaceGluing { to: mut u, mut perm } = g[t][f];
            // pass through flattened tetrahedra: entering face h of u leaves
            // through the face obtained by swapping the collapsed endpoints
            let mut guard = 0;
            while let Some(&(x, y)) = flat.get(&u) {
                let sw = Perm4::swap(x, y);
                let exit = sw.apply(perm.apply(f));
                let next = g[u][exit];
                perm = next.perm.compose(sw).compose(perm);
                u = next.to;
                guard += 1;
                if guard > g.len() {
                    return None;
                }
            }
            *slot = FaceGluing { to: index[u], perm };
        }
        out.push(row);
    }
    if out.is_empty() {
        return None;
    }
    Some(out)
}

/// Inserts two tetrahedra behind face `d` of `t`, where `(a, b, c, d)` is
/// even, giving the edge `ab` a new neighbourhood.
fn pinch(g: &Gluings, t: usize, a: usize, b: usize) -> Gluings {
    let others: Vec<usize> = (0..4).filter(|&v| v != a && v != b).collect();
    let (mut c, mut d) = (others[0], others[1]);
    if !Perm4::new([a, b, c, d].map(|x| x as u8)).unwrap().is_even() {
        std::mem::swap(&mut c, &mut d);
    }
    let mut out = g.clone();
    let FaceGluing { to: u, perm: p } = g[t][d];
    let (gt, ht) = (g.len(), g.len() + 1);
    let p8 = |v: [usize; 4]| Perm4::new(v.map(|x| x as u8)).expect("valid gadget permutation");
    let to_t = p8([a, b, d, c]);
    let to_u = p8([p.apply(a), p.apply(d), p.apply(b), p.apply(c)]);
    let s12 = Perm4::swap(1, 2);
    let s01 = Perm4::swap(0, 1);
    let mut grow = [FaceGluing { to: 0, perm: Perm4::IDENTITY }; 4];
    let mut hrow = grow;
    grow[2] = FaceGluing { to: t, perm: to_t };
    out[t][d] = FaceGluing { to: gt, perm: to_t.inverse() };
    grow[1] = FaceGluing { to: u, perm: to_u };
    out[u][p.apply(d)] = FaceGluing { to: gt, perm: to_u.inverse() };
    grow[0] = FaceGluing { to: ht, perm: s12 };
    hrow[0] = FaceGluing { to: gt, perm: s12 };
    grow[3] = FaceGluing { to: ht, perm: s01 };
    hrow[3] = FaceGluing { to: gt, perm: s01 };
    hrow[1] = FaceGluing { to: ht, perm: s12 };
    hrow[2] = FaceGluing { to: ht, perm: s12 };
    out.push(grow);
    out.push(hrow);
    out
}

fn finite_vertices(sk: &Skeleton) -> Vec<bool> {
    sk.link_euler.iter().map(|&chi| chi == 2).collect()
}

/// Repeatedly collapses edges at finite vertices (pinching when stuck)
/// until every vertex is ideal. Deterministic: candidates are scanned in
/// tetrahedron order, then edge order.
pub fn remove_finite_vertices(tri: &IdealTriangulation) -> IdealTriangulation {
    let mut g: Gluings = tri.gluings().to_vec();
    // each collapse removes at least one tetrahedron and each pinch is
    // followed by collapses, so this bound is generous
    for _ in 0..4 * g.len() + 16 {
        let current = IdealTriangulation::new(tri.name(), g.clone(), Vec::new()).expect("moves preserve involutivity");
        let sk = Skeleton::new(&current);
        let finite = finite_vertices(&sk);
        if !finite.iter().any(|&f| f) {
            return current.with_cusps(tri.cusps().to_vec()).unwrap_or(current);
        }
        let collapsed = (0..g.len())
            .flat_map(|t| EDGES.iter().map(move |&(a, b)| (t, a, b)))
            .find_map(|(t, a, b)| collapse(&g, &sk, &finite, t, a, b));
        g = match collapsed {
            Some(next) => next,
            None => {
                let (t, a, b) = (0..g.len())
                    .flat_map(|t| EDGES.iter().map(move |&(a, b)| (t, a, b)))
                    .find(|&(t, a, b)| {
                        let (va, vb) = (sk.vertex_class[t][a], sk.vertex_class[t][b]);
                        va != vb && (finite[va] || finite[vb])
                    })
                    .expect("a finite vertex has an edge to another vertex");
                pinch(&g, t, a, b)
            }
        };
    }
    IdealTriangulation::new(tri.name(), g, Vec::new()).expect("moves preserve involutivity")
}
