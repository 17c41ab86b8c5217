//! Vertex and edge classes, vertex links.

use petgraph::unionfind::UnionFind;

use super::IdealTriangulation;

/// Edges of a tetrahedron in index order.
pub const EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

pub fn edge_index(a: usize, b: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    EDGES.iter().position(|&e| e == (a, b)).expect("distinct vertices 0..4")
}

/// Which of the three shape parameters sits on an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ShapeSlot {
    Z,
    ZPrime,
    ZDoublePrime,
}

impl ShapeSlot {
    /// 01/23 carry z, 02/13 carry z′, 03/12 carry z″.
    pub fn of_edge(a: usize, b: usize) -> ShapeSlot {
        match edge_index(a, b) {
            0 | 5 => ShapeSlot::Z,
            1 | 4 => ShapeSlot::ZPrime,
            _ => ShapeSlot::ZDoublePrime,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeIncidence {
    pub tet: usize,
    pub edge: (usize, usize),
    pub slot: ShapeSlot,
}

/// One edge of the triangulation with its incidences in cyclic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeClass {
    pub incidences: Vec<EdgeIncidence>,
}

impl EdgeClass {
    /// Gluing-equation row: coefficient triples per tetrahedron.
    pub fn row(&self, tetrahedra: usize) -> Vec<i64> {
        let mut row = vec![0; 3 * tetrahedra];
        for inc in &self.incidences {
            row[3 * inc.tet + inc.slot.index()] += 1;
        }
        row
    }
}

/// Derived cell structure of a triangulation.
#[derive(Clone, Debug)]
pub struct Skeleton {
    /// Vertex class of each tetrahedron corner, numbered by first appearance.
    pub vertex_class: Vec<[usize; 4]>,
    pub vertex_count: usize,
    /// Edge class of each tetrahedron edge (indexed as [`EDGES`]).
    pub edge_class: Vec<[usize; 6]>,
    pub edges: Vec<EdgeClass>,
    /// Edge classes identified with themselves in reverse.
    pub reversed_edges: Vec<usize>,
    /// Euler characteristic of each vertex link.
    pub link_euler: Vec<i64>,
}

fn oriented(t: usize, a: usize, b: usize) -> usize {
    16 * t + 4 * a + b
}

impl Skeleton {
    /// Computes the skeleton. Gluings are assumed involutive.
    pub fn new(tri: &IdealTriangulation) -> Skeleton {
        let n = tri.tetrahedra();

        let mut vuf = UnionFind::<usize>::new(4 * n);
        let mut euf = UnionFind::<usize>::new(16 * n);
        for t in 0..n {
            for f in 0..4 {
                let g = tri.gluing(t, f);
                for a in (0..4).filter(|&a| a != f) {
                    vuf.union(4 * t + a, 4 * g.to + g.perm.apply(a));
                    for b in (0..4).filter(|&b| b != f && b != a) {
                        euf.union(oriented(t, a, b), oriented(g.to, g.perm.apply(a), g.perm.apply(b)));
                    }
                }
            }
        }

        let mut vertex_class = vec![[0usize; 4]; n];
        let mut vertex_label = std::collections::HashMap::new();
        for t in 0..n {
            for v in 0..4 {
                let root = vuf.find(4 * t + v);
                let next = vertex_label.len();
                vertex_class[t][v] = *vertex_label.entry(root).or_insert(next);
            }
        }
        let vertex_count = vertex_label.len();

        let mut edge_class = vec![[usize::MAX; 6]; n];
        let mut edges = Vec::new();
        let mut reversed_edges = Vec::new();
        for t in 0..n {
            for (e, &(a, b)) in EDGES.iter().enumerate() {
                if edge_class[t][e] != usize::MAX {
                    continue;
                }
                let id = edges.len();
                if euf.equiv(oriented(t, a, b), oriented(t, b, a)) {
                    reversed_edges.push(id);
                }
                let class = walk_edge(tri, t, a, b);
                for inc in &class.incidences {
                    edge_class[inc.tet][edge_index(inc.edge.0, inc.edge.1)] = id;
                }
                edges.push(class);
            }
        }

        // link of V: one vertex per oriented edge end leaving V, one
        // triangle per corner, so χ = ends − corners / 2
        let mut ends = std::collections::HashSet::new();
        let mut twice_chi = vec![0i64; vertex_count];
        for t in 0..n {
            for a in 0..4 {
                twice_chi[vertex_class[t][a]] -= 1;
                for b in (0..4).filter(|&b| b != a) {
                    if ends.insert(euf.find(oriented(t, a, b))) {
                        twice_chi[vertex_class[t][a]] += 2;
                    }
                }
            }
        }
        let link_euler = twice_chi.iter().map(|&x| x.div_euclid(2)).collect();

        Skeleton { vertex_class, vertex_count, edge_class, edges, reversed_edges, link_euler }
    }

    /// Integer edge rows, one per edge class.
    pub fn edge_rows(&self) -> Vec<Vec<i64>> {
        let n = self.vertex_class.len();
        self.edges.iter().map(|e| e.row(n)).collect()
    }
}

/// Walks once around edge `ab` of tetrahedron `t`, recording incidences.
fn walk_edge(tri: &IdealTriangulation, t: usize, a: usize, b: usize) -> EdgeClass {
    let mut rest = (0..4).filter(|&x| x != a && x != b);
    let (c, d) = (rest.next().unwrap(), rest.next().unwrap());
    let start = (t, a, b, c, d);
    let (a0, b0) = (a, b);
    let mut state = start;
    let mut incidences = Vec::new();
    // bounded by the total number of edge incidences
    for _ in 0..6 * tri.tetrahedra() + 1 {
        let (t, a, b, c, d) = state;
        incidences.push(EdgeIncidence { tet: t, edge: (a.min(b), a.max(b)), slot: ShapeSlot::of_edge(a, b) });
        let g = tri.gluing(t, d);
        let p = g.perm;
        state = (g.to, p.apply(a), p.apply(b), p.apply(d), p.apply(c));
        // a reversed edge closes up on the mirror of the start state
        if state.0 == start.0 && [state.1.min(state.2), state.1.max(state.2)] == [a0.min(b0), a0.max(b0)] {
            break;
        }
    }
    EdgeClass { incidences }
}
