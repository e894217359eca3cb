//! The JSON presentation formats: `sset/v1` for plain complexes,
//! `algsset/v1` for complexes with filler tables, `diagram/v1` for named
//! diagrams. The writer emits sorted keys and stable field order, so equal
//! values produce byte-identical documents.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraicComplex, FillerTable};
use crate::error::JsonError;
use crate::horn::{Horn, HornDescriptor, Mode};
use crate::map::SimplicialMap;
use crate::simplicial::{Provenance, SimplexId, SimplicialSet, SsetBuilder};

pub const SSET_SCHEMA: &str = "sset/v1";
pub const ALGSSET_SCHEMA: &str = "algsset/v1";
pub const DIAGRAM_SCHEMA: &str = "diagram/v1";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LevelDoc {
    pub dim: usize,
    pub simplices: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SsetDoc {
    pub schema: String,
    pub truncation: usize,
    pub levels: Vec<LevelDoc>,
    pub faces: BTreeMap<String, Vec<String>>,
    pub degeneracies: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgssetDoc {
    pub schema: String,
    pub truncation: usize,
    pub levels: Vec<LevelDoc>,
    pub faces: BTreeMap<String, Vec<String>>,
    pub degeneracies: BTreeMap<String, Vec<String>>,
    pub mode: Mode,
    pub table: Vec<TableEntryDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableEntryDoc {
    pub n: usize,
    pub k: usize,
    pub faces: Vec<String>,
    pub filler: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NodeDoc {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<serde_json::Value>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub source: String,
    pub target: String,
    pub mapping: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiagramDoc {
    pub schema: String,
    pub nodes: Vec<NodeDoc>,
    pub edges: Vec<EdgeDoc>,
}

/// Canonical rendering: pretty JSON with a trailing newline; map keys are
/// sorted by construction (`BTreeMap`), field order is fixed.
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

pub fn sset_to_doc(x: &SimplicialSet) -> SsetDoc {
    let d = x.truncation();
    let mut faces = BTreeMap::new();
    let mut degeneracies = BTreeMap::new();
    for n in 0..=d {
        for s in x.simplices(n) {
            if n >= 1 {
                faces.insert(
                    x.token(s).to_string(),
                    (0..=n).map(|i| x.token(x.face(s, i)).to_string()).collect(),
                );
            }
            if n < d {
                degeneracies.insert(
                    x.token(s).to_string(),
                    (0..=n)
                        .map(|i| x.token(x.degeneracy(s, i).unwrap()).to_string())
                        .collect(),
                );
            }
        }
    }
    SsetDoc {
        schema: SSET_SCHEMA.to_string(),
        truncation: d,
        levels: (0..=d)
            .map(|n| LevelDoc {
                dim: n,
                simplices: x.simplices(n).map(|s| x.token(s).to_string()).collect(),
            })
            .collect(),
        faces,
        degeneracies,
    }
}

fn build_sset(
    truncation: usize,
    levels: &[LevelDoc],
    faces: &BTreeMap<String, Vec<String>>,
    degeneracies: &BTreeMap<String, Vec<String>>,
) -> Result<Arc<SimplicialSet>, JsonError> {
    let schema_err = |context: &str, message: String| JsonError::Schema {
        context: context.to_string(),
        message,
    };
    if levels.len() != truncation + 1 {
        return Err(schema_err(
            "levels",
            format!("expected {} levels, got {}", truncation + 1, levels.len()),
        ));
    }
    let mut b = SsetBuilder::new(truncation);
    for (n, level) in levels.iter().enumerate() {
        if level.dim != n {
            return Err(schema_err(
                "levels",
                format!("level {n} labeled dim {}", level.dim),
            ));
        }
        for token in &level.simplices {
            let face_ids: Vec<SimplexId> = if n == 0 {
                Vec::new()
            } else {
                let row = faces.get(token).ok_or_else(|| {
                    schema_err("faces", format!("simplex `{token}` has no face entry"))
                })?;
                if row.len() != n + 1 {
                    return Err(schema_err(
                        "faces",
                        format!(
                            "simplex `{token}`: expected {} faces, got {}",
                            n + 1,
                            row.len()
                        ),
                    ));
                }
                row.iter()
                    .enumerate()
                    .map(|(i, t)| {
                        b.id_by_token(t).filter(|f| f.dim() + 1 == n).ok_or_else(|| {
                            schema_err(
                                "faces",
                                format!("simplex `{token}`, face {i}: unknown token `{t}`"),
                            )
                        })
                    })
                    .collect::<Result<_, _>>()?
            };
            b.add_simplex(n, token.clone(), &face_ids, Provenance::Input)
                .map_err(JsonError::Sset)?;
        }
    }
    for (n, level) in levels.iter().enumerate().take(truncation) {
        for token in &level.simplices {
            let id = b.id_by_token(token).expect("just inserted");
            let row = degeneracies.get(token).ok_or_else(|| {
                schema_err(
                    "degeneracies",
                    format!("simplex `{token}` has no degeneracy entry"),
                )
            })?;
            if row.len() != n + 1 {
                return Err(schema_err(
                    "degeneracies",
                    format!(
                        "simplex `{token}`: expected {} degeneracies, got {}",
                        n + 1,
                        row.len()
                    ),
                ));
            }
            for (i, t) in row.iter().enumerate() {
                let tgt = b.id_by_token(t).filter(|d| d.dim() == n + 1).ok_or_else(|| {
                    schema_err(
                        "degeneracies",
                        format!("simplex `{token}`, degeneracy {i}: unknown token `{t}`"),
                    )
                })?;
                b.set_degeneracy(id, i, tgt).map_err(JsonError::Sset)?;
            }
        }
    }
    let x = b.finish().map_err(JsonError::Sset)?;
    let report = x.validate();
    if !report.is_empty() {
        return Err(JsonError::Invalid(report));
    }
    Ok(x)
}

pub fn doc_to_sset(doc: &SsetDoc) -> Result<Arc<SimplicialSet>, JsonError> {
    if doc.schema != SSET_SCHEMA {
        return Err(JsonError::UnknownSchema(doc.schema.clone()));
    }
    build_sset(doc.truncation, &doc.levels, &doc.faces, &doc.degeneracies)
}

pub fn alg_to_doc(alg: &AlgebraicComplex) -> AlgssetDoc {
    let sset = sset_to_doc(&alg.sset);
    AlgssetDoc {
        schema: ALGSSET_SCHEMA.to_string(),
        truncation: sset.truncation,
        levels: sset.levels,
        faces: sset.faces,
        degeneracies: sset.degeneracies,
        mode: alg.mode,
        table: alg
            .table
            .iter()
            .map(|(h, f)| {
                let d = h.describe(&alg.sset);
                TableEntryDoc {
                    n: d.n,
                    k: d.k,
                    faces: d.faces,
                    filler: alg.sset.token(f).to_string(),
                }
            })
            .collect(),
    }
}

/// Loads an algebraic complex. The face law and mode admission are
/// enforced; totality is not (staged outputs carry partial tables), use
/// `make_algebraic` or `missing_horns` where totality matters.
pub fn doc_to_alg(doc: &AlgssetDoc) -> Result<Arc<AlgebraicComplex>, JsonError> {
    if doc.schema != ALGSSET_SCHEMA {
        return Err(JsonError::UnknownSchema(doc.schema.clone()));
    }
    let sset = build_sset(doc.truncation, &doc.levels, &doc.faces, &doc.degeneracies)?;
    let mut table = FillerTable::new();
    for entry in &doc.table {
        let descriptor = HornDescriptor {
            n: entry.n,
            k: entry.k,
            faces: entry.faces.clone(),
        };
        let horn: Horn = descriptor.resolve(&sset).map_err(JsonError::Sset)?;
        let filler = sset
            .by_token(&entry.filler)
            .ok_or_else(|| JsonError::Schema {
                context: "table".into(),
                message: format!("unknown filler token `{}`", entry.filler),
            })?;
        table.insert(horn, filler);
    }
    AlgebraicComplex::from_parts(sset, doc.mode, table).map_err(JsonError::Defects)
}

/// A parsed presentation document.
pub enum Presentation {
    Sset(Arc<SimplicialSet>),
    Alg(Arc<AlgebraicComplex>),
    Diagram(ParsedDiagram),
}

pub enum ParsedNode {
    Plain(Arc<SimplicialSet>),
    Alg(Arc<AlgebraicComplex>),
}

impl ParsedNode {
    pub fn sset(&self) -> &Arc<SimplicialSet> {
        match self {
            ParsedNode::Plain(x) => x,
            ParsedNode::Alg(a) => &a.sset,
        }
    }
}

pub struct ParsedEdge {
    pub name: Option<String>,
    pub source: String,
    pub target: String,
    pub map: SimplicialMap,
}

pub struct ParsedDiagram {
    pub nodes: Vec<(String, ParsedNode)>,
    pub edges: Vec<ParsedEdge>,
}

fn parse_value(value: serde_json::Value, base: Option<&Path>) -> Result<Presentation, JsonError> {
    let schema = value
        .get("schema")
        .and_then(|s| s.as_str())
        .unwrap_or("")
        .to_string();
    match schema.as_str() {
        SSET_SCHEMA => {
            let doc: SsetDoc = serde_json::from_value(value)?;
            Ok(Presentation::Sset(doc_to_sset(&doc)?))
        }
        ALGSSET_SCHEMA => {
            let doc: AlgssetDoc = serde_json::from_value(value)?;
            Ok(Presentation::Alg(doc_to_alg(&doc)?))
        }
        DIAGRAM_SCHEMA => {
            let doc: DiagramDoc = serde_json::from_value(value)?;
            Ok(Presentation::Diagram(parse_diagram(&doc, base)?))
        }
        other => Err(JsonError::UnknownSchema(other.to_string())),
    }
}

/// Parses any of the three presentation schemas; `base` resolves node file
/// references inside diagrams.
pub fn parse_presentation(text: &str, base: Option<&Path>) -> Result<Presentation, JsonError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    parse_value(value, base)
}

fn parse_diagram(doc: &DiagramDoc, base: Option<&Path>) -> Result<ParsedDiagram, JsonError> {
    let mut nodes: Vec<(String, ParsedNode)> = Vec::new();
    for node in &doc.nodes {
        let payload = match (&node.file, &node.value) {
            (Some(path), None) => {
                let full = match base {
                    Some(dir) => dir.join(path),
                    None => std::path::PathBuf::from(path),
                };
                let text = std::fs::read_to_string(&full)
                    .map_err(|e| JsonError::FileRef(path.clone(), e.to_string()))?;
                serde_json::from_str(&text)?
            }
            (None, Some(v)) => v.clone(),
            _ => {
                return Err(JsonError::Schema {
                    context: format!("node `{}`", node.name),
                    message: "exactly one of `file` or `value` required".into(),
                })
            }
        };
        let parsed = match parse_value(payload, base)? {
            Presentation::Sset(x) => ParsedNode::Plain(x),
            Presentation::Alg(a) => ParsedNode::Alg(a),
            Presentation::Diagram(_) => {
                return Err(JsonError::Schema {
                    context: format!("node `{}`", node.name),
                    message: "diagram nodes cannot nest diagrams".into(),
                })
            }
        };
        nodes.push((node.name.clone(), parsed));
    }
    let mut edges = Vec::new();
    for edge in &doc.edges {
        let find = |name: &str| {
            nodes
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, p)| p)
                .ok_or_else(|| JsonError::Schema {
                    context: "edges".into(),
                    message: format!("unknown node `{name}`"),
                })
        };
        let src = find(&edge.source)?;
        let tgt = find(&edge.target)?;
        let map = SimplicialMap::from_tokens(
            Arc::clone(src.sset()),
            Arc::clone(tgt.sset()),
            &edge.mapping,
        )
        .map_err(JsonError::Sset)?;
        edges.push(ParsedEdge {
            name: edge.name.clone(),
            source: edge.source.clone(),
            target: edge.target.clone(),
            map,
        });
    }
    Ok(ParsedDiagram { nodes, edges })
}

/// Token mapping of a simplicial map, for serialization (nondegenerate
/// simplices suffice; degenerate images are forced).
pub fn map_to_mapping(map: &SimplicialMap) -> BTreeMap<String, String> {
    let src = map.source();
    let tgt = map.target();
    let mut out = BTreeMap::new();
    for n in 0..=src.truncation() {
        for s in src.simplices(n) {
            if src.is_nondegenerate(s) {
                out.insert(
                    src.token(s).to_string(),
                    tgt.token(map.apply(s)).to_string(),
                );
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes::standard_simplex;

    #[test]
    fn sset_round_trip_is_token_identical() {
        let x = standard_simplex(2, 2);
        let doc = sset_to_doc(&x);
        let text = canonical_json(&doc);
        let back = match parse_presentation(&text, None).unwrap() {
            Presentation::Sset(b) => b,
            _ => panic!("expected a plain complex"),
        };
        assert!(*back == *x);
        // byte-identical re-emission
        assert_eq!(canonical_json(&sset_to_doc(&back)), text);
    }

    #[test]
    fn alg_round_trip() {
        use crate::algebra::{choose_fillers, make_algebraic};
        use crate::horn::Mode;
        let x = standard_simplex(0, 2);
        let alg = make_algebraic(
            Arc::clone(&x),
            Mode::Kan,
            choose_fillers(&x, Mode::Kan).unwrap(),
        )
        .unwrap();
        let text = canonical_json(&alg_to_doc(&alg));
        let back = match parse_presentation(&text, None).unwrap() {
            Presentation::Alg(a) => a,
            _ => panic!("expected an algebraic complex"),
        };
        assert_eq!(back.table, alg.table);
        assert_eq!(back.mode, alg.mode);
    }

    #[test]
    fn missing_face_entry_is_named() {
        let x = standard_simplex(1, 1);
        let mut doc = sset_to_doc(&x);
        doc.faces.remove("01");
        let err = doc_to_sset(&doc).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("01"), "{msg}");
    }

    #[test]
    fn face_law_violation_is_forwarded() {
        let x = standard_simplex(0, 1);
        let alg = crate::algebra::make_algebraic(
            Arc::clone(&x),
            crate::horn::Mode::Kan,
            crate::algebra::choose_fillers(&x, crate::horn::Mode::Kan).unwrap(),
        )
        .unwrap();
        let mut doc = alg_to_doc(&alg);
        // point the first entry at the vertex itself: wrong dimension
        doc.table[0].filler = "0".into();
        let err = doc_to_alg(&doc).unwrap_err();
        assert!(matches!(err, JsonError::Defects(_)));
    }
}
