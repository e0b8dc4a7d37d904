//! JSON and DOT serialization of oriented graphs.

use super::{BwGraph, Color, GraphError, HalfEdge, Leaf, OrientedGraph, Vertex};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: usize,
    pub color: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfEdgeJson {
    pub id: usize,
    pub source: Option<usize>,
    pub partner: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leaf_label: Option<u32>,
    /// "in" or "out" for labeled leaves.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leaf_kind: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<VertexJson>,
    pub half_edges: Vec<HalfEdgeJson>,
    pub cyclic_order: BTreeMap<String, Vec<usize>>,
    pub orientation_sign: i8,
}

pub fn to_json(og: &OrientedGraph) -> GraphJson {
    let g = &og.graph;
    GraphJson {
        vertices: g
            .vertices
            .iter()
            .enumerate()
            .map(|(id, v)| VertexJson {
                id,
                color: match v.color {
                    Color::Black => "black".into(),
                    Color::White => "white".into(),
                },
                label: v.label,
                start: v.start,
            })
            .collect(),
        half_edges: g
            .half_edges
            .iter()
            .enumerate()
            .map(|(id, h)| HalfEdgeJson {
                id,
                source: h.source,
                partner: h.partner,
                leaf_label: h.leaf.map(|l| match l {
                    Leaf::In(i) | Leaf::Out(i) => i,
                }),
                leaf_kind: h.leaf.map(|l| match l {
                    Leaf::In(_) => "in".into(),
                    Leaf::Out(_) => "out".into(),
                }),
            })
            .collect(),
        cyclic_order: g.vertices.iter().enumerate().map(|(id, v)| (id.to_string(), v.cyclic.clone())).collect(),
        orientation_sign: og.sign,
    }
}

pub fn from_json(j: &GraphJson) -> Result<OrientedGraph, GraphError> {
    let bad = |m: String| GraphError::Malformed(m);
    let mut vertices = vec![None; j.vertices.len()];
    for v in &j.vertices {
        let color = match v.color.as_str() {
            "black" => Color::Black,
            "white" => Color::White,
            c => return Err(bad(format!("unknown color {}", c))),
        };
        let cyclic = j.cyclic_order.get(&v.id.to_string()).cloned().unwrap_or_default();
        let slot = vertices.get_mut(v.id).ok_or_else(|| bad(format!("vertex id {} out of range", v.id)))?;
        *slot = Some(Vertex { color, label: v.label, start: v.start, cyclic });
    }
    let mut half_edges = vec![None; j.half_edges.len()];
    for h in &j.half_edges {
        let leaf = match (h.leaf_label, h.leaf_kind.as_deref()) {
            (None, _) => None,
            (Some(i), Some("out")) => Some(Leaf::Out(i)),
            (Some(i), _) => Some(Leaf::In(i)),
        };
        let slot = half_edges.get_mut(h.id).ok_or_else(|| bad(format!("half-edge id {} out of range", h.id)))?;
        *slot = Some(HalfEdge { source: h.source, partner: h.partner, leaf });
    }
    let graph = BwGraph {
        vertices: vertices.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| bad("missing vertex id".into()))?,
        half_edges: half_edges
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| bad("missing half-edge id".into()))?,
    };
    graph.validate()?;
    if j.orientation_sign != 1 && j.orientation_sign != -1 {
        return Err(bad("orientation_sign must be 1 or -1".into()));
    }
    Ok(OrientedGraph { graph, sign: j.orientation_sign })
}

/// Graphviz rendering: white vertices are circles, black vertices points,
/// leaves small boxes, and the start half-edge of a white vertex is bold.
pub fn to_dot(og: &OrientedGraph) -> String {
    let g = &og.graph;
    let mut s = String::from("graph G {\n");
    s.push_str(&format!("  label=\"orientation {}\";\n", if og.sign > 0 { "+" } else { "-" }));
    for (i, v) in g.vertices.iter().enumerate() {
        match v.color {
            Color::White => s.push_str(&format!(
                "  v{} [shape=circle,label=\"{}\"];\n",
                i,
                v.label.map(|l| l.to_string()).unwrap_or_default()
            )),
            Color::Black => s.push_str(&format!("  v{} [shape=point,width=0.15];\n", i)),
        }
    }
    for (h, he) in g.half_edges.iter().enumerate() {
        let starts = g.vertices.iter().any(|v| v.start == Some(h));
        let style = if starts { ",style=bold,color=red" } else { "" };
        let src = he.source.map(|v| format!("v{}", v)).unwrap_or_else(|| format!("x{}", h));
        if he.partner == h {
            let lab = match he.leaf {
                Some(Leaf::In(i)) => format!("in{}", i),
                Some(Leaf::Out(i)) => format!("out{}", i),
                None => String::new(),
            };
            s.push_str(&format!("  l{} [shape=box,height=0.2,label=\"{}\"];\n", h, lab));
            s.push_str(&format!("  {} -- l{} [taillabel=\"{}\"{}];\n", src, h, h, style));
        } else if h < he.partner {
            let dst = g.half_edges[he.partner].source.map(|v| format!("v{}", v)).unwrap_or_default();
            let pstyle = if g.vertices.iter().any(|v| v.start == Some(he.partner)) { ",style=bold,color=red" } else { "" };
            s.push_str(&format!(
                "  {} -- {} [taillabel=\"{}\",headlabel=\"{}\"{}{}];\n",
                src, dst, h, he.partner, style, pstyle
            ));
        }
    }
    s.push_str("}\n");
    s
}
