use std::path::Path;

use anyhow::{bail, Context, Result};
use avoidance::{Edge, Error, Graph};
use serde::de::DeserializeOwned;

/// A builtin name (`K3`, `C5`, `bowtie`, …) or a path to a graph text file.
pub fn graph(spec: &str) -> Result<Graph> {
    if let Some(g) = Graph::builtin(spec) {
        return Ok(g);
    }
    let path = Path::new(spec);
    if !path.is_file() {
        return Err(Error::UnknownGraph(spec.to_string()).into());
    }
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Graph::parse(&text).with_context(|| format!("in {}", path.display()))
}

pub fn json_file<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("malformed JSON in {}", path.display()))
}

/// `u,w`.
pub fn edge(text: &str) -> Result<Edge> {
    let list = usize_list(text)?;
    match list[..] {
        [u, w] => Ok((u, w)),
        _ => bail!("expected an edge `u,w`, got `{text}`"),
    }
}

pub fn usize_list(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .with_context(|| format!("`{s}` is not a vertex index"))
        })
        .collect()
}
