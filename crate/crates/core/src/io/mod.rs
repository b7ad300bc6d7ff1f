//! Instance files and their sidecars.
//!
//! Every writer here produces canonical JSON: object keys sorted, vertices
//! sorted by id, level-graph edges sorted, tree children sorted by label.
//! SEFE edge lists keep their order because edge ids are positions in them.

mod drawing;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::model::{ClInstance, LevelGraph, SefeInstance, TLevelInstance, TreeNode};
use crate::oracles::{BetweennessInstance, LevelOrdering, RotationSystem, SefeWitness};
use crate::reductions::{ReductionProvenance, Role};

pub use drawing::{drawing_from_sidecar, drawing_to_sidecar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Level(LevelGraph),
    TLevel(TLevelInstance),
    Cl(ClInstance),
    Sefe(SefeInstance),
}

impl Instance {
    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Level(_) => "level",
            Instance::TLevel(_) => "tlevel",
            Instance::Cl(_) => "cl",
            Instance::Sefe(_) => "sefe",
        }
    }

    pub fn graph(&self) -> Option<&LevelGraph> {
        match self {
            Instance::Level(g) => Some(g),
            Instance::TLevel(t) => Some(t.graph()),
            Instance::Cl(c) => Some(c.graph()),
            Instance::Sefe(_) => None,
        }
    }
}

/// An instance with the provenance of the reduction that produced it, if
/// any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub instance: Instance,
    pub provenance: Option<ReductionProvenance>,
}

impl Document {
    pub fn new(instance: Instance) -> Self {
        Document {
            instance,
            provenance: None,
        }
    }

    pub fn with_provenance(instance: Instance, provenance: ReductionProvenance) -> Self {
        Document {
            instance,
            provenance: Some(provenance),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexDoc {
    id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    level: Option<i64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum NodeDoc {
    Leaf(LeafDoc),
    Node(InnerDoc),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LeafDoc {
    leaf: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InnerDoc {
    node: String,
    children: Vec<NodeDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeDoc {
    level: i64,
    tree: NodeDoc,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    levels: Option<usize>,
    vertices: Vec<VertexDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    edges: Option<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    trees: Option<Vec<TreeDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    clusters: Option<NodeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    e1: Option<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    e2: Option<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<BTreeMap<String, Role>>,
}

fn to_tree(n: &NodeDoc) -> TreeNode {
    match n {
        NodeDoc::Leaf(l) => TreeNode::leaf(l.leaf.clone()),
        NodeDoc::Node(i) => TreeNode::node(i.node.clone(), i.children.iter().map(to_tree).collect()),
    }
}

fn from_tree(n: &TreeNode) -> NodeDoc {
    match n {
        TreeNode::Leaf(u) => NodeDoc::Leaf(LeafDoc { leaf: u.clone() }),
        TreeNode::Node { id, children } => {
            let mut kids: Vec<&TreeNode> = children.iter().collect();
            kids.sort_by(|a, b| a.label().cmp(b.label()));
            NodeDoc::Node(InnerDoc {
                node: id.clone(),
                children: kids.into_iter().map(from_tree).collect(),
            })
        }
    }
}

fn schema(raw: &RawDocument) -> Vec<String> {
    let mut out = Vec::new();
    let (needs, forbids): (&[&str], &[&str]) = match raw.kind.as_str() {
        "level" => (&["edges"], &["trees", "clusters", "e1", "e2"]),
        "tlevel" => (&["edges", "trees"], &["clusters", "e1", "e2"]),
        "cl" => (&["edges", "clusters"], &["trees", "e1", "e2"]),
        "sefe" => (&["e1", "e2"], &["levels", "edges", "trees", "clusters"]),
        other => {
            out.push(format!("unknown kind {other:?}"));
            return out;
        }
    };
    let present = |f: &str| match f {
        "levels" => raw.levels.is_some(),
        "edges" => raw.edges.is_some(),
        "trees" => raw.trees.is_some(),
        "clusters" => raw.clusters.is_some(),
        "e1" => raw.e1.is_some(),
        "e2" => raw.e2.is_some(),
        _ => false,
    };
    for f in needs {
        if !present(f) {
            out.push(format!("kind {:?} requires field {f:?}", raw.kind));
        }
    }
    for f in forbids {
        if present(f) {
            out.push(format!("kind {:?} does not allow field {f:?}", raw.kind));
        }
    }
    let leveled = raw.kind != "sefe";
    for v in &raw.vertices {
        match (leveled, v.level) {
            (true, None) => out.push(format!("vertex {:?} has no level", v.id)),
            (false, Some(_)) => out.push(format!("sefe vertex {:?} must not have a level", v.id)),
            _ => {}
        }
    }
    if let Some(k) = raw.levels {
        let distinct: BTreeSet<i64> = raw.vertices.iter().filter_map(|v| v.level).collect();
        if distinct.len() != k {
            out.push(format!("\"levels\" is {k} but vertices use {} distinct levels", distinct.len()));
        }
    }
    out
}

/// Parses an instance document. Syntax errors carry line and column;
/// schema problems are all reported together.
pub fn parse_document(text: &str) -> Result<Document> {
    let raw: RawDocument = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let problems = schema(&raw);
    if !problems.is_empty() {
        return Err(Error::Schema(problems));
    }
    let provenance = raw.provenance.clone().map(|roles| ReductionProvenance { roles });
    let leveled = || -> Vec<(String, i64)> {
        raw.vertices.iter().map(|v| (v.id.clone(), v.level.unwrap_or_default())).collect()
    };
    let graph = || LevelGraph::new(leveled(), raw.edges.clone().unwrap_or_default());
    let instance = match raw.kind.as_str() {
        "level" => Instance::Level(graph()?),
        "tlevel" => {
            let trees = raw.trees.iter().flatten().map(|t| (t.level, to_tree(&t.tree)));
            Instance::TLevel(TLevelInstance::new(graph()?, trees)?)
        }
        "cl" => Instance::Cl(ClInstance::new(graph()?, to_tree(raw.clusters.as_ref().expect("schema checked")))?),
        _ => Instance::Sefe(SefeInstance::new(
            raw.vertices.iter().map(|v| v.id.clone()),
            raw.e1.clone().unwrap_or_default(),
            raw.e2.clone().unwrap_or_default(),
        )?),
    };
    Ok(Document { instance, provenance })
}

fn leveled_vertices(g: &LevelGraph) -> Vec<VertexDoc> {
    let mut vs: Vec<VertexDoc> = (0..g.vertex_count())
        .map(|v| VertexDoc {
            id: g.id(v).to_string(),
            level: Some(g.level(v) as i64),
        })
        .collect();
    vs.sort_by(|a, b| a.id.cmp(&b.id));
    vs
}

fn sorted_edges(g: &LevelGraph) -> Vec<(String, String)> {
    let mut es: Vec<(String, String)> = g
        .edges()
        .iter()
        .map(|&(u, v)| (g.id(u).to_string(), g.id(v).to_string()))
        .collect();
    es.sort();
    es
}

/// Canonical JSON text of a value: keys sorted, two-space indent, final
/// newline.
pub fn canonical_json<T: Serialize>(x: &T) -> Result<String> {
    // going through Value sorts every object's keys
    let v: Value = serde_json::to_value(x).map_err(|e| Error::Parse(e.to_string()))?;
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn serialize_document(d: &Document) -> Result<String> {
    let mut raw = RawDocument {
        kind: d.instance.kind().to_string(),
        provenance: d.provenance.as_ref().map(|p| p.roles.clone()),
        ..RawDocument::default()
    };
    match &d.instance {
        Instance::Level(g) => {
            raw.levels = Some(g.level_count());
            raw.vertices = leveled_vertices(g);
            raw.edges = Some(sorted_edges(g));
        }
        Instance::TLevel(t) => {
            let g = t.graph();
            raw.levels = Some(g.level_count());
            raw.vertices = leveled_vertices(g);
            raw.edges = Some(sorted_edges(g));
            raw.trees = Some(
                t.trees()
                    .iter()
                    .enumerate()
                    .map(|(l, tree)| TreeDoc {
                        level: l as i64,
                        tree: from_tree(tree),
                    })
                    .collect(),
            );
        }
        Instance::Cl(c) => {
            let g = c.graph();
            raw.levels = Some(g.level_count());
            raw.vertices = leveled_vertices(g);
            raw.edges = Some(sorted_edges(g));
            raw.clusters = Some(from_tree(&c.hierarchy().root));
        }
        Instance::Sefe(s) => {
            let mut vs: Vec<VertexDoc> = s
                .vertices()
                .iter()
                .map(|id| VertexDoc {
                    id: id.clone(),
                    level: None,
                })
                .collect();
            vs.sort_by(|a, b| a.id.cmp(&b.id));
            raw.vertices = vs;
            let (e1, e2) = s.edge_lists();
            raw.e1 = Some(e1);
            raw.e2 = Some(e2);
        }
    }
    canonical_json(&raw)
}

/// `parse ∘ serialize`: the instance as it reads back from its file.
/// Vertex indices and SEFE edge ids then match every sidecar written for
/// it.
pub fn canonicalize(d: &Document) -> Result<Document> {
    parse_document(&serialize_document(d)?)
}

pub fn parse_betweenness(text: &str) -> Result<BetweennessInstance> {
    let b: BetweennessInstance = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let v = b.violations();
    if v.is_empty() {
        Ok(b)
    } else {
        Err(Error::Invalid(v))
    }
}

pub fn serialize_betweenness(b: &BetweennessInstance) -> Result<String> {
    canonical_json(b)
}

pub fn serialize_ordering(o: &LevelOrdering) -> Result<String> {
    canonical_json(o)
}

pub fn parse_ordering(text: &str) -> Result<LevelOrdering> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Doc {
        orderings: Vec<Vec<String>>,
    }
    let d: Doc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(LevelOrdering::new(d.orderings))
}

pub fn serialize_provenance(p: &ReductionProvenance) -> Result<String> {
    canonical_json(&serde_json::json!({ "provenance": p.roles }))
}

pub fn parse_provenance(text: &str) -> Result<ReductionProvenance> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Doc {
        provenance: BTreeMap<String, Role>,
    }
    let d: Doc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(ReductionProvenance { roles: d.provenance })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RotationsDoc {
    rotations: BTreeMap<String, Vec<String>>,
}

fn rotations_doc(s: &SefeInstance, r: &RotationSystem) -> RotationsDoc {
    let rotations = r
        .rotations
        .iter()
        .enumerate()
        .map(|(v, list)| {
            // cyclic order written from its smallest edge
            let start = (0..list.len()).min_by_key(|&i| list[i]).unwrap_or(0);
            let ids = (0..list.len())
                .map(|i| SefeInstance::edge_id(list[(start + i) % list.len()]))
                .collect();
            (s.vertices()[v].clone(), ids)
        })
        .collect();
    RotationsDoc { rotations }
}

fn rotations_from(s: &SefeInstance, d: &RotationsDoc) -> Result<RotationSystem> {
    let mut rot = vec![Vec::new(); s.vertex_count()];
    for (v, ids) in &d.rotations {
        let i = s
            .index_of(v)
            .ok_or_else(|| Error::Parse(format!("rotation for unknown vertex {v}")))?;
        rot[i] = ids
            .iter()
            .map(|e| {
                e.strip_prefix('e')
                    .and_then(|n| n.parse::<usize>().ok())
                    .filter(|&n| n < s.edges().len())
                    .ok_or_else(|| Error::Parse(format!("bad edge id {e:?} at {v}")))
            })
            .collect::<Result<_>>()?;
    }
    Ok(RotationSystem::new(rot))
}

pub fn serialize_witness(s: &SefeInstance, w: &SefeWitness) -> Result<String> {
    canonical_json(&serde_json::json!({
        "g1": rotations_doc(s, &w.g1),
        "g2": rotations_doc(s, &w.g2),
    }))
}

pub fn parse_witness(s: &SefeInstance, text: &str) -> Result<SefeWitness> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Doc {
        g1: RotationsDoc,
        g2: RotationsDoc,
    }
    let d: Doc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(SefeWitness {
        g1: rotations_from(s, &d.g1)?,
        g2: rotations_from(s, &d.g2)?,
    })
}
