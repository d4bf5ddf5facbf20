//! Graph and weight-matrix file loading shared by the subcommands.

use std::path::Path;

use gsmin::graph::{Graph, WeightMatrix};
use gsmin::graph6::{parse_graph6, write_graph6};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum GraphFormat {
    Graph6,
    Json,
}

/// Loads a graph, sniffing the format: JSON when the content starts with
/// '{' or the extension says so, graph6 otherwise.
pub fn load_graph(path: &Path) -> Result<Graph, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))?;
    let looks_json = text.trim_start().starts_with('{')
        || path.extension().is_some_and(|e| e == "json");
    if looks_json {
        serde_json::from_str(&text)
            .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))
    } else {
        let line = text
            .lines()
            .find(|l| !l.trim().is_empty())
            .ok_or_else(|| CliError::parse(format!("{}: empty file", path.display())))?;
        parse_graph6(line).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))
    }
}

pub fn save_graph(path: &Path, g: &Graph, format: GraphFormat) -> Result<(), CliError> {
    let text = match format {
        GraphFormat::Graph6 => format!("{}\n", write_graph6(g)),
        GraphFormat::Json => format!("{}\n", serde_json::to_string(g).expect("graph serializes")),
    };
    std::fs::write(path, text)
        .map_err(|e| CliError::parse(format!("cannot write {}: {e}", path.display())))
}

pub fn load_weights(path: &Path, n: usize) -> Result<WeightMatrix, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))?;
    let w: WeightMatrix = serde_json::from_str(&text)
        .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
    if w.n() != n {
        return Err(CliError::parse(format!(
            "weight matrix is over {} vertices but the graph has {n}",
            w.n()
        )));
    }
    Ok(w)
}
