//! On-disk formats beyond the graph text format: vertex-set files, explicit
//! weight files, and the versioned cover JSON.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use tbrw_core::cover::{Cover, CoverSet};
use tbrw_core::{Graph, VertexSet, WeightedGraph};

/// Current version of every JSON artifact this tool writes.
pub const FORMAT_VERSION: u32 = 1;

/// Vertex-set file: whitespace-separated vertex ids.
pub fn read_vertex_set(path: &Path, n: usize) -> Result<VertexSet> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading vertex set {}", path.display()))?;
    let mut set = VertexSet::new(n);
    for tok in text.split_whitespace() {
        let v: u32 = tok
            .parse()
            .with_context(|| format!("bad vertex id {tok:?} in {}", path.display()))?;
        if v as usize >= n {
            bail!("vertex {v} out of range for graph on {n} vertices");
        }
        set.insert(v);
    }
    if set.is_empty() {
        bail!("vertex set file {} is empty", path.display());
    }
    Ok(set)
}

/// Weight file: one `u v w` line per edge; every graph edge must appear.
pub fn read_weights(path: &Path, graph: &Graph) -> Result<WeightedGraph> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading weights {}", path.display()))?;
    let mut map = std::collections::HashMap::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let mut field = || {
            it.next()
                .with_context(|| format!("line {}: expected `u v w`", idx + 1))
        };
        let u: u32 = field()?.parse().context("bad vertex")?;
        let v: u32 = field()?.parse().context("bad vertex")?;
        let w: f64 = field()?.parse().context("bad weight")?;
        if !graph.has_edge(u, v) {
            bail!("line {}: {u}-{v} is not an edge", idx + 1);
        }
        if w <= 0.0 || !w.is_finite() {
            bail!("line {}: weight must be positive, got {w}", idx + 1);
        }
        map.insert((u.min(v), u.max(v)), w);
    }
    for e in graph.edges() {
        if !map.contains_key(&e) {
            bail!("weight file misses edge {}-{}", e.0, e.1);
        }
    }
    Ok(WeightedGraph::from_fn(graph.clone(), |u, v| map[&(u, v)])?)
}

/// Cover artifact: radius certificate, construction level count, per-set
/// centers and members, and the exact overlap statistic.
#[derive(Serialize, Deserialize)]
pub struct CoverFile {
    pub format_version: u32,
    pub r: u32,
    pub k: u32,
    #[serde(rename = "K_actual")]
    pub k_actual: f64,
    pub sets: Vec<CoverFileSet>,
}

#[derive(Serialize, Deserialize)]
pub struct CoverFileSet {
    pub center: u32,
    pub level: Option<u32>,
    pub vertices: Vec<u32>,
}

impl CoverFile {
    pub fn from_cover(cover: &Cover, overlap: f64) -> Self {
        CoverFile {
            format_version: FORMAT_VERSION,
            r: cover.radius,
            k: cover.levels,
            k_actual: overlap,
            sets: cover
                .sets
                .iter()
                .map(|s| CoverFileSet {
                    center: s.center,
                    level: s.level,
                    vertices: s.vertices.clone(),
                })
                .collect(),
        }
    }

    pub fn into_cover(self) -> Cover {
        Cover {
            radius: self.r,
            levels: self.k,
            sets: self
                .sets
                .into_iter()
                .map(|s| CoverSet {
                    center: s.center,
                    level: s.level,
                    vertices: s.vertices,
                })
                .collect(),
        }
    }
}

pub fn read_cover(path: &Path) -> Result<Cover> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading cover {}", path.display()))?;
    let file: CoverFile = serde_json::from_str(&text)
        .with_context(|| format!("parsing cover {}", path.display()))?;
    if file.format_version != FORMAT_VERSION {
        bail!(
            "cover {} has format version {}, this build reads {}",
            path.display(),
            file.format_version,
            FORMAT_VERSION
        );
    }
    Ok(file.into_cover())
}

pub fn load_graph(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading graph {}", path.display()))?;
    Ok(Graph::from_text(&text)?)
}
