use serde::{Deserialize, Serialize};
use std::fmt::Write;

use super::{Cusp, FaceGluing, IdealTriangulation, TriangulationError};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    name: String,
    tetrahedra: usize,
    gluings: Vec<[FaceGluing; 4]>,
    cusps: Vec<Cusp>,
}

/// Reads a triangulation document (JSON).
pub fn parse_triangulation(text: &str) -> Result<IdealTriangulation, TriangulationError> {
    let doc: Document = serde_json::from_str(text).map_err(|e| TriangulationError::Malformed(e.to_string()))?;
    if doc.tetrahedra == 0 {
        return Err(TriangulationError::Empty);
    }
    if doc.gluings.len() != doc.tetrahedra {
        return Err(TriangulationError::CountMismatch { declared: doc.tetrahedra, found: doc.gluings.len() });
    }
    IdealTriangulation::new(doc.name, doc.gluings, doc.cusps)
}

fn int_list(xs: impl IntoIterator<Item = impl std::fmt::Display>) -> String {
    let items: Vec<String> = xs.into_iter().map(|x| x.to_string()).collect();
    format!("[{}]", items.join(", "))
}

/// Writes the document form read by [`parse_triangulation`], one
/// tetrahedron per line. Output is a pure function of the triangulation.
pub fn serialize_triangulation(tri: &IdealTriangulation) -> String {
    let name = serde_json::to_string(tri.name()).expect("string serializes");
    let mut out = String::new();
    let _ = writeln!(out, "{{");
    let _ = writeln!(out, "  \"name\": {name},");
    let _ = writeln!(out, "  \"tetrahedra\": {},", tri.tetrahedra());
    let _ = writeln!(out, "  \"gluings\": [");
    let n = tri.tetrahedra();
    for (t, faces) in tri.gluings().iter().enumerate() {
        let recs: Vec<String> = faces
            .iter()
            .map(|g| format!("{{\"to\": {}, \"perm\": {}}}", g.to, int_list(g.perm.images())))
            .collect();
        let sep = if t + 1 < n { "," } else { "" };
        let _ = writeln!(out, "    [{}]{sep}", recs.join(", "));
    }
    let _ = writeln!(out, "  ],");
    if tri.cusps().is_empty() {
        let _ = writeln!(out, "  \"cusps\": []");
    } else {
        let _ = writeln!(out, "  \"cusps\": [");
        let k = tri.cusps().len();
        for (i, c) in tri.cusps().iter().enumerate() {
            let _ = writeln!(out, "    {{");
            let _ = writeln!(out, "      \"meridian\": {},", int_list(&c.meridian));
            let _ = writeln!(out, "      \"longitude\": {}", int_list(&c.longitude));
            let _ = writeln!(out, "    }}{}", if i + 1 < k { "," } else { "" });
        }
        let _ = writeln!(out, "  ]");
    }
    out.push_str("}\n");
    out
}
