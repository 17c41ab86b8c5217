//! Smith normal form and first homology of surgery on framed links.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Matrix = Vec<Vec<BigInt>>;

pub fn to_big(a: &[Vec<i64>]) -> Matrix {
    a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(BigInt::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(a: &Matrix) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// `u · a · v = d`, with `u`, `v` unimodular and `d` diagonal,
/// d₁ | d₂ | … and all diagonal entries nonnegative.
#[derive(Clone, Debug, PartialEq)]
pub struct SmithForm {
    pub u: Matrix,
    pub d: Matrix,
    pub v: Matrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.len().min(self.d.first().map_or(0, Vec::len))).map(|i| self.d[i][i].clone()).collect()
    }
}

/// Smith normal form, pivoting on the entry of smallest nonzero absolute
/// value. Exact; the identity `u·a·v = d` and |det u| = |det v| = 1 are
/// checked before returning.
pub fn smith_normal_form(a: &Matrix) -> SmithForm {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut d = a.clone();
    let mut u = identity(m);
    let mut v = identity(n);

    for t in 0..m.min(n) {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if !d[i][j].is_zero() && pivot.is_none_or(|(pi, pj)| d[i][j].abs() < d[pi][pj].abs()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break };
            d.swap(t, pi);
            u.swap(t, pi);
            for row in d.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }

            let p = d[t][t].clone();
            let mut clean = true;
            for i in t + 1..m {
                let q = d[i][t].div_floor(&p);
                if !q.is_zero() {
                    for j in 0..n {
                        let x = &q * &d[t][j];
                        d[i][j] -= x;
                    }
                    for j in 0..m {
                        let x = &q * &u[t][j];
                        u[i][j] -= x;
                    }
                }
                clean &= d[i][t].is_zero();
            }
            for j in t + 1..n {
                let q = d[t][j].div_floor(&p);
                if !q.is_zero() {
                    for i in 0..m {
                        let x = &q * &d[i][t];
                        d[i][j] -= x;
                    }
                    for i in 0..n {
                        let x = &q * &v[i][t];
                        v[i][j] -= x;
                    }
                }
                clean &= d[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility: fold a row with an offending entry into row t
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !(&d[i][j] % &p).is_zero()));
            match bad {
                Some(i) => {
                    for j in 0..n {
                        let x = d[i][j].clone();
                        d[t][j] += x;
                    }
                    for j in 0..m {
                        let x = u[i][j].clone();
                        u[t][j] += x;
                    }
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for j in 0..n {
                d[t][j] = -d[t][j].clone();
            }
            for j in 0..m {
                u[t][j] = -u[t][j].clone();
            }
        }
    }

    assert_eq!(mat_mul(&mat_mul(&u, a), &v), d, "Smith form identity");
    assert!(determinant(&u).abs().is_one() && determinant(&v).abs().is_one(), "unimodular transforms");
    SmithForm { u, d, v }
}

/// Finitely generated abelian group Z^r ⊕ Z/d₁ ⊕ … with d₁ | d₂ | ….
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianGroup {
    pub free_rank: usize,
    #[serde(serialize_with = "ser_torsion")]
    pub torsion: Vec<BigInt>,
}

fn ser_torsion<S: serde::Serializer>(t: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(t.iter().map(|x| x.to_string()))
}

impl AbelianGroup {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_infinite_cyclic(&self) -> bool {
        self.free_rank == 1 && self.torsion.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().fold(BigInt::one(), |a, b| a * b)
    }

    /// Cokernel of a presentation matrix.
    pub fn cokernel(a: &Matrix) -> AbelianGroup {
        let rows = a.len();
        let smith = smith_normal_form(a);
        let diag = smith.diagonal();
        let nonzero = diag.iter().filter(|x| !x.is_zero()).count();
        let torsion = diag.into_iter().filter(|x| x > &BigInt::one()).collect();
        AbelianGroup { free_rank: rows - nonzero, torsion }
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        parts.extend(std::iter::repeat_n("Z".to_string(), self.free_rank));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" ⊕ "))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("malformed linking matrix document: {0}")]
    Malformed(String),
    #[error("matrix has {found} entries, expected {expected}")]
    Size { expected: usize, found: usize },
    #[error("linking matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("{found} labels for {expected} components")]
    Labels { expected: usize, found: usize },
    #[error("component {index} out of range for {size} components")]
    ComponentOutOfRange { index: usize, size: usize },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinkingDocument {
    size: usize,
    matrix: Vec<i64>,
    #[serde(default)]
    labels: Option<Vec<String>>,
}

/// Framings on the diagonal, linking numbers off it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkingMatrix {
    entries: Vec<Vec<i64>>,
    labels: Vec<String>,
}

impl LinkingMatrix {
    pub fn new(entries: Vec<Vec<i64>>, labels: Option<Vec<String>>) -> Result<Self, HomologyError> {
        let m = entries.len();
        for row in &entries {
            if row.len() != m {
                return Err(HomologyError::Size { expected: m * m, found: entries.iter().map(Vec::len).sum() });
            }
        }
        for i in 0..m {
            for j in 0..i {
                if entries[i][j] != entries[j][i] {
                    return Err(HomologyError::NotSymmetric(i, j));
                }
            }
        }
        let labels = match labels {
            Some(l) if l.len() != m => return Err(HomologyError::Labels { expected: m, found: l.len() }),
            Some(l) => l,
            None => (0..m).map(|i| format!("K{i}")).collect(),
        };
        Ok(LinkingMatrix { entries, labels })
    }

    /// Reads `{"size": m, "matrix": [row-major], "labels": [...]}`.
    pub fn parse(text: &str) -> Result<Self, HomologyError> {
        let doc: LinkingDocument = serde_json::from_str(text).map_err(|e| HomologyError::Malformed(e.to_string()))?;
        if doc.matrix.len() != doc.size * doc.size {
            return Err(HomologyError::Size { expected: doc.size * doc.size, found: doc.matrix.len() });
        }
        let rows = if doc.size == 0 { Vec::new() } else { doc.matrix.chunks(doc.size).map(<[i64]>::to_vec).collect() };
        LinkingMatrix::new(rows, doc.labels)
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Adds a 0-framed component linking `component` once and nothing
    /// else: the meridian of that component.
    pub fn with_meridian(&self, component: usize) -> Result<LinkingMatrix, HomologyError> {
        let m = self.size();
        if component >= m {
            return Err(HomologyError::ComponentOutOfRange { index: component, size: m });
        }
        let mut e: Vec<Vec<i64>> = self.entries.iter().map(|r| {
            let mut r = r.clone();
            r.push(0);
            r
        }).collect();
        let mut last = vec![0; m + 1];
        last[component] = 1;
        e[component][m] = 1;
        e.push(last);
        let mut labels = self.labels.clone();
        labels.push(format!("meridian({})", self.labels[component]));
        LinkingMatrix::new(e, Some(labels))
    }
}

/// H₁ of the surgered manifold: the cokernel of the linking matrix.
pub fn surgery_homology(l: &LinkingMatrix) -> AbelianGroup {
    AbelianGroup::cokernel(&to_big(l.entries()))
}

/// Whether 0-surgery on the meridian of `component`, added to the
/// surgery description, gives H₁ ≅ Z.
pub fn meridian_zero_surgery_check(l: &LinkingMatrix, component: usize) -> Result<bool, HomologyError> {
    Ok(surgery_homology(&l.with_meridian(component)?).is_infinite_cyclic())
}
