//! Link diagrams to ideal triangulations of their complements.

mod cusp;
mod octahedral;
mod simplify;

pub use cusp::{cusp_basis, CuspBasis, CuspError, DualCycle};
pub use octahedral::{octahedral_decomposition, octahedral_triangulation};
pub use simplify::remove_finite_vertices;

use std::collections::HashMap;

use petgraph::unionfind::UnionFind;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("a diagram needs at least 2 crossings, found {0}")]
    TooFewCrossings(usize),
    #[error("label {label} occurs {count} times, expected 2")]
    Multiplicity { label: i64, count: usize },
    #[error("crossing {0} repeats a label")]
    RepeatedLabel(usize),
    #[error("diagram is disconnected")]
    Disconnected,
    #[error("triangulation of the complement failed validation: {0}")]
    Construction(String),
    #[error(transparent)]
    Cusp(#[from] CuspError),
}

/// Planar diagram code. Each crossing lists its four strand labels
/// counterclockwise, starting from the incoming under-strand; positions 0
/// and 2 lie on the under-strand, 1 and 3 on the over-strand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PDCode {
    crossings: Vec<[i64; 4]>,
    components: usize,
}

impl PDCode {
    pub fn new(crossings: Vec<[i64; 4]>) -> Result<PDCode, DiagramError> {
        if crossings.len() < 2 {
            return Err(DiagramError::TooFewCrossings(crossings.len()));
        }
        let mut occurrences: HashMap<i64, Vec<usize>> = HashMap::new();
        for (k, c) in crossings.iter().enumerate() {
            for (j, &l) in c.iter().enumerate() {
                if c[..j].contains(&l) {
                    return Err(DiagramError::RepeatedLabel(k));
                }
                occurrences.entry(l).or_default().push(k);
            }
        }
        let mut labels: Vec<i64> = occurrences.keys().copied().collect();
        labels.sort_unstable();
        for &l in &labels {
            let count = occurrences[&l].len();
            if count != 2 {
                return Err(DiagramError::Multiplicity { label: l, count });
            }
        }

        let mut crossing_uf = UnionFind::<usize>::new(crossings.len());
        for l in &labels {
            let o = &occurrences[l];
            crossing_uf.union(o[0], o[1]);
        }
        if (1..crossings.len()).any(|k| !crossing_uf.equiv(0, k)) {
            return Err(DiagramError::Disconnected);
        }

        // strands run 0 → 2 (under) and 1 ↔ 3 (over) through each crossing
        let index: HashMap<i64, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let mut strand_uf = UnionFind::<usize>::new(labels.len());
        for c in &crossings {
            strand_uf.union(index[&c[0]], index[&c[2]]);
            strand_uf.union(index[&c[1]], index[&c[3]]);
        }
        let mut roots: Vec<usize> = (0..labels.len()).map(|i| strand_uf.find(i)).collect();
        roots.sort_unstable();
        roots.dedup();
        Ok(PDCode { crossings, components: roots.len() })
    }

    pub fn crossings(&self) -> &[[i64; 4]] {
        &self.crossings
    }

    pub fn components(&self) -> usize {
        self.components
    }
}

/// Reads lines of the form `X a b c d`. Blank lines and lines starting with
/// `#` are skipped; commas and brackets are treated as whitespace, so
/// `X[1,5,2,4]` is accepted too.
pub fn parse_pd(text: &str) -> Result<PDCode, DiagramError> {
    let mut crossings = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cleaned: String = line.chars().map(|c| if matches!(c, ',' | '[' | ']' | '(' | ')') { ' ' } else { c }).collect();
        let mut tokens = cleaned.split_whitespace();
        let syntax = |message: String| DiagramError::Syntax { line: i + 1, message };
        if tokens.next() != Some("X") {
            return Err(syntax(format!("expected `X a b c d`, found {line:?}")));
        }
        let labels: Vec<i64> =
            tokens.map(|t| t.parse().map_err(|_| syntax(format!("bad label {t:?}")))).collect::<Result<_, _>>()?;
        let c: [i64; 4] = labels.try_into().map_err(|v: Vec<i64>| syntax(format!("expected 4 labels, found {}", v.len())))?;
        crossings.push(c);
    }
    PDCode::new(crossings)
}
