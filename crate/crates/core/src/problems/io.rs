//! Edge-list text format.
//!
//! ```text
//! # comment
//! n 3
//! 0 1
//! 1 2 0.5
//! ```
//!
//! The first non-comment line declares the node count; each following line
//! is `i j [w]` with the weight defaulting to 1.

use super::graph::Graph;
use crate::error::{Error, Result};

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut n_nodes = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match n_nodes {
            None => {
                if fields.len() != 2 || fields[0] != "n" {
                    return Err(parse_error(line_no, "expected header `n <n_nodes>`"));
                }
                let n = fields[1]
                    .parse::<usize>()
                    .map_err(|e| parse_error(line_no, format!("bad node count: {e}")))?;
                n_nodes = Some(n);
            }
            Some(_) => {
                if !(2..=3).contains(&fields.len()) {
                    return Err(parse_error(line_no, "expected `i j [w]`"));
                }
                let i = fields[0]
                    .parse::<usize>()
                    .map_err(|e| parse_error(line_no, format!("bad node index: {e}")))?;
                let j = fields[1]
                    .parse::<usize>()
                    .map_err(|e| parse_error(line_no, format!("bad node index: {e}")))?;
                let w = match fields.get(2) {
                    Some(s) => s
                        .parse::<f64>()
                        .map_err(|e| parse_error(line_no, format!("bad weight: {e}")))?,
                    None => 1.0,
                };
                edges.push((line_no, (i, j, w)));
            }
        }
    }
    let n = n_nodes.ok_or_else(|| parse_error(0, "missing `n <n_nodes>` header"))?;
    // Validate edge by edge so a bad line is reported with its number.
    let mut accepted = Vec::with_capacity(edges.len());
    for (line_no, edge) in edges {
        accepted.push(edge);
        Graph::new(n, accepted.clone()).map_err(|e| match e {
            Error::InvalidArgument(msg) => parse_error(line_no, msg),
            other => other,
        })?;
    }
    Graph::new(n, accepted)
}

pub fn to_edge_list(g: &Graph) -> String {
    let mut out = format!("n {}\n", g.n_nodes());
    for &(i, j, w) in g.edges() {
        if w == 1.0 {
            out.push_str(&format!("{i} {j}\n"));
        } else {
            out.push_str(&format!("{i} {j} {w}\n"));
        }
    }
    out
}
