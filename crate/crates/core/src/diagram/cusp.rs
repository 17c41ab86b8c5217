//! Peripheral curves from the combinatorics of the cusp tori.
//!
//! The cusp torus of vertex class V is triangulated by the corner triangles
//! (t, v) with v in V. Corner w of triangle (t, v) sits on the edge vw;
//! side f lies in face f of the tetrahedron and is opposite corner f.
//! Corners (x, y, z) run counterclockwise when (v, x, y, z) is even, which
//! is a consistent orientation because gluings are odd.
//!
//! Curves are cycles in the dual graph (triangles joined across sides). A
//! curve crossing triangle (t, v) from side f_in to side f_out cuts off
//! corner w; it contributes ±1 to the shape slot of edge vw in t, with +1
//! when w is on its left.

use std::collections::{HashMap, VecDeque};

use petgraph::unionfind::UnionFind;
use thiserror::Error;

use crate::perm::Perm4;
use crate::triangulation::{IdealTriangulation, ShapeSlot, Skeleton};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CuspError {
    #[error("link of cusp {cusp} has Euler characteristic {euler}, not a torus")]
    NotTorus { cusp: usize, euler: i64 },
    #[error("no pair of curves with intersection ±1 found on cusp {0}")]
    NoBasis(usize),
}

/// Closed curve in the dual graph of a cusp triangulation: at each step,
/// the triangle `(tet, vertex)` is left through side `exit`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualCycle {
    pub steps: Vec<(usize, usize, usize)>,
}

impl DualCycle {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The same curve traversed backwards.
    pub fn reversed(&self, tri: &IdealTriangulation) -> DualCycle {
        let n = self.steps.len();
        let mut steps = Vec::with_capacity(n);
        for i in (0..n).rev() {
            let (t, v, f) = self.steps[i];
            let g = tri.gluing(t, f);
            steps.push((g.to, g.perm.apply(v), g.perm.apply(f)));
        }
        DualCycle { steps }
    }

    /// Holonomy row: per corner cut off, ±1 on the slot of that edge.
    pub fn row(&self, tri: &IdealTriangulation) -> Vec<i64> {
        let mut row = vec![0; 3 * tri.tetrahedra()];
        let n = self.steps.len();
        for i in 0..n {
            let (pt, _, pf) = self.steps[(i + n - 1) % n];
            let (t, v, f_out) = self.steps[i];
            let f_in = tri.gluing(pt, pf).perm.apply(pf);
            if f_in == f_out {
                continue;
            }
            let w = (0..4).find(|&x| x != v && x != f_in && x != f_out).expect("three distinct labels");
            let left = even(v, w, f_out, f_in);
            row[3 * t + ShapeSlot::of_edge(v, w).index()] += if left { 1 } else { -1 };
        }
        row
    }
}

fn even(a: usize, b: usize, c: usize, d: usize) -> bool {
    Perm4::new([a as u8, b as u8, c as u8, d as u8]).expect("distinct labels").is_even()
}

/// Peripheral rows for one cusp, with the curves they came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuspBasis {
    pub meridian: Vec<i64>,
    pub longitude: Vec<i64>,
    pub meridian_curve: DualCycle,
    pub longitude_curve: DualCycle,
    /// Algebraic intersection number of the two curves, always ±1.
    pub intersection: i64,
}

/// Cell structure of one cusp torus.
struct CuspTorus<'a> {
    tri: &'a IdealTriangulation,
    triangles: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
    /// Side id of each (triangle, face).
    side_of: HashMap<(usize, usize), usize>,
    /// Representative (triangle, face) of each side.
    sides: Vec<(usize, usize)>,
    /// Generators of H₁ as 1-chains on sides (net traversals in the
    /// representative's x → y direction, x < y).
    generators: Vec<HashMap<usize, i64>>,
}

impl<'a> CuspTorus<'a> {
    fn new(tri: &'a IdealTriangulation, sk: &Skeleton, cusp: usize) -> CuspTorus<'a> {
        let n = tri.tetrahedra();
        let triangles: Vec<(usize, usize)> =
            (0..n).flat_map(|t| (0..4).map(move |v| (t, v))).filter(|&(t, v)| sk.vertex_class[t][v] == cusp).collect();
        let index: HashMap<(usize, usize), usize> = triangles.iter().enumerate().map(|(i, &tv)| (tv, i)).collect();
        let mut side_of = HashMap::new();
        let mut sides = Vec::new();
        for (i, &(t, v)) in triangles.iter().enumerate() {
            for f in (0..4).filter(|&f| f != v) {
                if side_of.contains_key(&(i, f)) {
                    continue;
                }
                let g = tri.gluing(t, f);
                let j = index[&(g.to, g.perm.apply(v))];
                let id = sides.len();
                side_of.insert((i, f), id);
                side_of.insert((j, g.perm.apply(f)), id);
                sides.push((i, f));
            }
        }
        let mut torus = CuspTorus { tri, triangles, index, side_of, sides, generators: Vec::new() };
        torus.generators = torus.tree_cotree();
        torus
    }

    fn corners(&self, side: usize) -> (usize, usize) {
        let (i, f) = self.sides[side];
        let v = self.triangles[i].1;
        let mut c = (0..4).filter(|&x| x != v && x != f);
        (c.next().unwrap(), c.next().unwrap())
    }

    /// Neighbour across face `f` of triangle `i`, and the face entered.
    fn across(&self, i: usize, f: usize) -> (usize, usize) {
        let (t, v) = self.triangles[i];
        let g = self.tri.gluing(t, f);
        (self.index[&(g.to, g.perm.apply(v))], g.perm.apply(f))
    }

    fn dual_tree(&self, root: usize) -> (Vec<Option<(usize, usize)>>, Vec<usize>) {
        // parent[i] = (parent triangle, face of the parent crossed)
        let k = self.triangles.len();
        let mut parent = vec![None; k];
        let mut depth = vec![usize::MAX; k];
        depth[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(i) = queue.pop_front() {
            let v = self.triangles[i].1;
            for f in (0..4).filter(|&f| f != v) {
                let (j, _) = self.across(i, f);
                if depth[j] == usize::MAX {
                    depth[j] = depth[i] + 1;
                    parent[j] = Some((i, f));
                    queue.push_back(j);
                }
            }
        }
        (parent, depth)
    }

    /// Link vertex (oriented edge end) classes, indexed by (triangle, corner).
    fn link_vertices(&self) -> HashMap<(usize, usize), usize> {
        let k = self.triangles.len();
        let mut uf = UnionFind::<usize>::new(4 * k);
        for (i, &(_, v)) in self.triangles.iter().enumerate() {
            for f in (0..4).filter(|&f| f != v) {
                let (j, _) = self.across(i, f);
                let (t, _) = self.triangles[i];
                let g = self.tri.gluing(t, f);
                for w in (0..4).filter(|&w| w != v && w != f) {
                    uf.union(4 * i + w, 4 * j + g.perm.apply(w));
                }
            }
        }
        let mut out = HashMap::new();
        for (i, &(_, v)) in self.triangles.iter().enumerate() {
            for w in (0..4).filter(|&w| w != v) {
                out.insert((i, w), uf.find(4 * i + w));
            }
        }
        out
    }

    /// Primal cycles dual to the edges left over by a spanning tree of the
    /// dual graph and a spanning tree of the remaining primal edges.
    fn tree_cotree(&self) -> Vec<HashMap<usize, i64>> {
        let (parent, _) = self.dual_tree(0);
        let mut in_dual_tree = vec![false; self.sides.len()];
        for (j, p) in parent.iter().enumerate() {
            if let Some((i, f)) = p {
                let _ = j;
                in_dual_tree[self.side_of[&(*i, *f)]] = true;
            }
        }
        let lv = self.link_vertices();
        let ends = |s: usize| {
            let (i, _) = self.sides[s];
            let (x, y) = self.corners(s);
            (lv[&(i, x)], lv[&(i, y)])
        };
        let mut uf = UnionFind::<usize>::new(4 * self.triangles.len());
        let mut adjacency: HashMap<usize, Vec<(usize, usize, i64)>> = HashMap::new();
        let mut leftover = Vec::new();
        for s in 0..self.sides.len() {
            if in_dual_tree[s] {
                continue;
            }
            let (p, q) = ends(s);
            if uf.union(p, q) {
                adjacency.entry(p).or_default().push((q, s, 1));
                adjacency.entry(q).or_default().push((p, s, -1));
            } else {
                leftover.push(s);
            }
        }
        leftover
            .into_iter()
            .map(|s| {
                let (p, q) = ends(s);
                let mut chain = HashMap::from([(s, 1i64)]);
                // tree path from q back to p
                let mut prev: HashMap<usize, (usize, usize, i64)> = HashMap::new();
                let mut queue = VecDeque::from([q]);
                let mut seen = std::collections::HashSet::from([q]);
                while let Some(x) = queue.pop_front() {
                    if x == p {
                        break;
                    }
                    for &(y, side, dir) in adjacency.get(&x).into_iter().flatten() {
                        if seen.insert(y) {
                            prev.insert(y, (x, side, dir));
                            queue.push_back(y);
                        }
                    }
                }
                let mut x = p;
                while x != q {
                    let (from, side, dir) = prev[&x];
                    *chain.entry(side).or_insert(0) += dir;
                    x = from;
                }
                chain
            })
            .collect()
    }

    /// Intersection numbers of a dual cycle with the primal generators.
    fn coordinates(&self, cycle: &DualCycle) -> Vec<i64> {
        self.generators
            .iter()
            .map(|chain| {
                let mut total = 0;
                for &(t, v, f) in &cycle.steps {
                    let i = self.index[&(t, v)];
                    let s = self.side_of[&(i, f)];
                    let Some(&c) = chain.get(&s) else { continue };
                    let (ri, rf) = self.sides[s];
                    let rv = self.triangles[ri].1;
                    let (x, y) = self.corners(s);
                    let rep_on_left = even(rv, x, y, rf);
                    let leaving_rep = (ri, rf) == (i, f);
                    let sign = if rep_on_left == leaving_rep { 1 } else { -1 };
                    total += sign * c;
                }
                total
            })
            .collect()
    }

    /// Fundamental cycles of breadth-first trees from every root.
    fn candidates(&self) -> Vec<DualCycle> {
        let mut out = Vec::new();
        for root in 0..self.triangles.len() {
            let (parent, depth) = self.dual_tree(root);
            let path = |mut i: usize| {
                let mut steps = Vec::new();
                while let Some((p, f)) = parent[i] {
                    steps.push((p, f));
                    i = p;
                }
                steps.reverse();
                steps
            };
            for s in 0..self.sides.len() {
                let (a, fa) = self.sides[s];
                let (b, fb) = self.across(a, fa);
                if parent[b] == Some((a, fa)) || parent[a] == Some((b, fb)) {
                    continue;
                }
                let (pa, pb) = (path(a), path(b));
                let common = pa.iter().zip(&pb).take_while(|(x, y)| x == y).count();
                let mut steps: Vec<(usize, usize)> = pa[common..].to_vec();
                steps.push((a, fa));
                // walk back up from b to the branch point
                let mut i = b;
                while depth[i] > common {
                    let (p, f) = parent[i].expect("below the branch point");
                    let (_, entered) = self.across(p, f);
                    steps.push((i, entered));
                    i = p;
                }
                let steps = steps
                    .into_iter()
                    .map(|(i, f)| {
                        let (t, v) = self.triangles[i];
                        (t, v, f)
                    })
                    .collect();
                out.push(DualCycle { steps });
            }
        }
        out
    }
}

fn det(a: &[i64], b: &[i64]) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Meridian and longitude rows for every cusp, in vertex-class order.
///
/// Candidate curves are fundamental cycles of breadth-first spanning trees
/// of each cusp's dual graph; the pair with the smallest total length whose
/// intersection number is ±1 is kept, oriented so that it is +1.
pub fn cusp_basis(tri: &IdealTriangulation) -> Result<Vec<CuspBasis>, CuspError> {
    let sk = Skeleton::new(tri);
    let mut out = Vec::with_capacity(sk.vertex_count);
    for cusp in 0..sk.vertex_count {
        if sk.link_euler[cusp] != 0 {
            return Err(CuspError::NotTorus { cusp, euler: sk.link_euler[cusp] });
        }
        let torus = CuspTorus::new(tri, &sk, cusp);
        let mut classes: Vec<(Vec<i64>, DualCycle)> = Vec::new();
        let mut cands = torus.candidates();
        cands.sort_by_key(DualCycle::len);
        for c in cands {
            let coords = torus.coordinates(&c);
            if coords.iter().all(|&x| x == 0) {
                continue;
            }
            let neg: Vec<i64> = coords.iter().map(|x| -x).collect();
            if classes.iter().any(|(k, _)| *k == coords || *k == neg) {
                continue;
            }
            classes.push((coords, c));
        }
        let mut best: Option<(usize, usize, usize)> = None;
        for i in 0..classes.len() {
            for j in i + 1..classes.len() {
                if det(&classes[i].0, &classes[j].0).abs() == 1 {
                    let len = classes[i].1.len() + classes[j].1.len();
                    if best.is_none_or(|(_, _, l)| len < l) {
                        best = Some((i, j, len));
                    }
                }
            }
        }
        let (i, j, _) = best.ok_or(CuspError::NoBasis(cusp))?;
        let meridian_curve = classes[i].1.clone();
        let mut longitude_curve = classes[j].1.clone();
        if det(&classes[i].0, &classes[j].0) < 0 {
            longitude_curve = longitude_curve.reversed(tri);
        }
        let intersection = det(&torus.coordinates(&meridian_curve), &torus.coordinates(&longitude_curve));
        out.push(CuspBasis {
            meridian: meridian_curve.row(tri),
            longitude: longitude_curve.row(tri),
            meridian_curve,
            longitude_curve,
            intersection,
        });
    }
    Ok(out)
}
