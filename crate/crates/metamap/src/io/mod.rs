//! Canonical JSON file formats for graphs and maps, plus SVG rendering.
//!
//! Both writers emit a canonical form (sorted ids, insertion-ordered point
//! keys, shortest-round-trip float literals), so reading a canonical file
//! and writing it again reproduces it byte for byte.

pub mod svg;

use std::collections::BTreeMap;
use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::geom::Point2;
use crate::graph::{Vertex, VertexId, WeightedPlaneGraph};
use crate::map::{MetaphoricalMap, PointId, Region, RegionId, RegionKind};
use crate::{Error, Result};

#[derive(Serialize, Deserialize)]
struct GraphFile {
    vertices: Vec<VertexRecord>,
    edges: Vec<(u32, u32)>,
}

#[derive(Serialize, Deserialize)]
struct VertexRecord {
    id: u32,
    weight: f64,
    x: f64,
    y: f64,
}

#[derive(Serialize, Deserialize)]
struct MapFile {
    /// Point id (decimal string) to coordinates, in ascending id order.
    points: IndexMap<String, (f64, f64)>,
    regions: Vec<RegionRecord>,
}

#[derive(Serialize, Deserialize)]
struct RegionRecord {
    id: u32,
    kind: RegionKind,
    boundary: Vec<u32>,
    target_weight: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    source_vertex: Option<u32>,
}

/// Serializes a graph to its canonical JSON text.
pub fn write_graph_string(g: &WeightedPlaneGraph) -> String {
    let file = GraphFile {
        vertices: g
            .vertices()
            .iter()
            .map(|v| VertexRecord {
                id: v.id.0,
                weight: v.weight,
                x: v.pos.x,
                y: v.pos.y,
            })
            .collect(),
        edges: g.edges().iter().map(|&(a, b)| (a.0, b.0)).collect(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("graph serialization cannot fail");
    s.push('\n');
    s
}

/// Parses and validates a graph from JSON text. `origin` names the source
/// in error messages.
pub fn read_graph_string(text: &str, origin: &str) -> Result<WeightedPlaneGraph> {
    let file: GraphFile = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("{origin}: {e}")))?;
    let vertices: Vec<Vertex> = file
        .vertices
        .iter()
        .map(|r| Vertex {
            id: VertexId(r.id),
            weight: r.weight,
            pos: Point2::new(r.x, r.y),
        })
        .collect();
    let edges: Vec<(VertexId, VertexId)> = file
        .edges
        .iter()
        .map(|&(a, b)| (VertexId(a), VertexId(b)))
        .collect();
    WeightedPlaneGraph::new(vertices, edges, None)
}

pub fn save_graph(path: &Path, g: &WeightedPlaneGraph) -> Result<()> {
    std::fs::write(path, write_graph_string(g))?;
    Ok(())
}

pub fn load_graph(path: &Path) -> Result<WeightedPlaneGraph> {
    let text = std::fs::read_to_string(path)?;
    read_graph_string(&text, &path.display().to_string())
}

/// Serializes a map to its canonical JSON text.
pub fn write_map_string(map: &MetaphoricalMap) -> String {
    let mut points = IndexMap::new();
    for (id, p) in map.points() {
        points.insert(id.0.to_string(), (p.x, p.y));
    }
    let file = MapFile {
        points,
        regions: map
            .regions()
            .iter()
            .map(|r| RegionRecord {
                id: r.id.0,
                kind: r.kind,
                boundary: r.boundary.iter().map(|p| p.0).collect(),
                target_weight: r.target_weight,
                source_vertex: r.source_vertex.map(|v| v.0),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("map serialization cannot fail");
    s.push('\n');
    s
}

/// Parses and validates a map from JSON text.
pub fn read_map_string(text: &str, origin: &str) -> Result<MetaphoricalMap> {
    let file: MapFile = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("{origin}: {e}")))?;
    let mut points = BTreeMap::new();
    for (key, &(x, y)) in &file.points {
        let id: u32 = key
            .parse()
            .map_err(|_| Error::Parse(format!("{origin}: invalid point id {key:?}")))?;
        if points.insert(PointId(id), Point2::new(x, y)).is_some() {
            return Err(Error::Parse(format!("{origin}: duplicate point id {id}")));
        }
    }
    let regions: Vec<Region> = file
        .regions
        .iter()
        .map(|r| Region {
            id: RegionId(r.id),
            kind: r.kind,
            boundary: r.boundary.iter().map(|&p| PointId(p)).collect(),
            target_weight: r.target_weight,
            source_vertex: r.source_vertex.map(VertexId),
        })
        .collect();
    MetaphoricalMap::new(points, regions)
}

pub fn save_map(path: &Path, map: &MetaphoricalMap) -> Result<()> {
    std::fs::write(path, write_map_string(map))?;
    Ok(())
}

pub fn load_map(path: &Path) -> Result<MetaphoricalMap> {
    let text = std::fs::read_to_string(path)?;
    read_map_string(&text, &path.display().to_string())
}
