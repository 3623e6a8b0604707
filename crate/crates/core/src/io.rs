//! Edge lists, label files, traces, reports and histograms.
//!
//! Edge list: one edge per line, `u v [w]` separated by whitespace, lines
//! starting with `#` ignored. Label file: one `vertex label` pair per line.
//! CSV floats are written with 17 significant digits.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::community::Partition;
use crate::error::{Error, Result};
use crate::flow::FlowTrace;
use crate::graph::{EdgeRecord, Graph, WeightVector};

#[derive(Debug, Clone)]
pub struct Dataset {
    pub name: String,
    pub graph: Graph,
    pub initial_weights: WeightVector,
    pub ground_truth: Option<Partition>,
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line.split_whitespace().collect()))
        }
    })
}

pub fn parse_edge_list(text: &str) -> Result<Vec<EdgeRecord>> {
    data_lines(text)
        .map(|(line, fields)| match fields.as_slice() {
            [u, v] => Ok(EdgeRecord::new(*u, *v)),
            [u, v, w] => {
                let weight = w.parse::<f64>().map_err(|e| Error::Parse {
                    line,
                    msg: format!("bad weight {w:?}: {e}"),
                })?;
                Ok(EdgeRecord::weighted(*u, *v, weight))
            }
            _ => Err(Error::Parse {
                line,
                msg: format!("expected `u v [w]`, found {} fields", fields.len()),
            }),
        })
        .collect()
}

pub fn read_edge_list(path: &Path) -> Result<(Graph, WeightVector)> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Graph::from_records(parse_edge_list(&text)?)
}

/// Formats an edge list that [`parse_edge_list`] reads back bit-exactly.
pub fn format_edge_list(graph: &Graph, weights: &WeightVector) -> String {
    let mut out = String::new();
    for (e, &(u, v)) in graph.edges().iter().enumerate() {
        let _ = writeln!(
            out,
            "{} {} {:.16e}",
            graph.name(u),
            graph.name(v),
            weights[e]
        );
    }
    out
}

pub fn write_edge_list(graph: &Graph, weights: &WeightVector, path: &Path) -> Result<()> {
    fs::write(path, format_edge_list(graph, weights)).map_err(|e| Error::io(path, e))
}

/// Parses `vertex label` lines into a partition of `graph`'s vertices.
pub fn parse_labels(graph: &Graph, text: &str) -> Result<Partition> {
    let mut assigned: Vec<Option<&str>> = vec![None; graph.vertex_count()];
    for (line, fields) in data_lines(text) {
        let [id, label] = fields.as_slice() else {
            return Err(Error::Parse {
                line,
                msg: format!("expected `vertex label`, found {} fields", fields.len()),
            });
        };
        let v = graph.index_of(id).ok_or_else(|| {
            Error::Mismatch(format!(
                "label file names unknown vertex {id:?} (line {line})"
            ))
        })?;
        if assigned[v].replace(label).is_some() {
            return Err(Error::Parse {
                line,
                msg: format!("vertex {id:?} labeled twice"),
            });
        }
    }
    let missing: Vec<&str> = assigned
        .iter()
        .enumerate()
        .filter(|(_, l)| l.is_none())
        .map(|(v, _)| graph.name(v))
        .collect();
    if !missing.is_empty() {
        return Err(Error::Mismatch(format!(
            "no label for vertices: {}",
            missing.join(", ")
        )));
    }
    let labels: Vec<&str> = assigned.into_iter().map(Option::unwrap).collect();
    Ok(Partition::from_labels(&labels))
}

pub fn read_labels(graph: &Graph, path: &Path) -> Result<Partition> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_labels(graph, &text)
}

/// Loads an edge list and, optionally, its ground-truth labels.
pub fn load_dataset(edges: &Path, labels: Option<&Path>) -> Result<Dataset> {
    let (graph, initial_weights) = read_edge_list(edges)?;
    let ground_truth = labels.map(|p| read_labels(&graph, p)).transpose()?;
    let name = edges
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Ok(Dataset {
        name,
        graph,
        initial_weights,
        ground_truth,
    })
}

/// Trace as CSV: one row per (step, edge). The last snapshot has no entropy.
pub fn format_trace(graph: &Graph, trace: &FlowTrace) -> String {
    let mut out = String::from("step,edge_u,edge_v,weight,entropy\n");
    for (step, weights) in trace.weights.iter().enumerate() {
        let entropies = trace.entropies.get(step);
        for (e, &(u, v)) in graph.edges().iter().enumerate() {
            let _ = write!(
                out,
                "{step},{},{},{:.16e},",
                graph.name(u),
                graph.name(v),
                weights[e]
            );
            if let Some(d) = entropies {
                let _ = write!(out, "{:.16e}", d[e]);
            }
            out.push('\n');
        }
    }
    out
}

pub fn write_trace(graph: &Graph, trace: &FlowTrace, path: &Path) -> Result<()> {
    fs::write(path, format_trace(graph, trace)).map_err(|e| Error::io(path, e))
}

/// Any serializable report as pretty JSON.
pub fn write_report<T: Serialize>(report: &T, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(report).map_err(|e| Error::Json {
        path: path.to_path_buf(),
        source: e,
    })?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bin {
    pub left: f64,
    pub right: f64,
    pub count: usize,
}

/// Equal-width bins spanning `[min, max]`; the last bin is closed.
pub fn histogram(values: &[f64], bins: usize) -> Result<Vec<Bin>> {
    if bins == 0 {
        return Err(Error::Parameter("bin count must be at least 1".into()));
    }
    if values.is_empty() {
        return Err(Error::Parameter(
            "cannot histogram an empty value list".into(),
        ));
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = (max - min) / bins as f64;
    let mut counts = vec![0; bins];
    for &x in values {
        let i = if width > 0.0 {
            (((x - min) / width) as usize).min(bins - 1)
        } else {
            0
        };
        counts[i] += 1;
    }
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| Bin {
            left: min + width * i as f64,
            right: if i + 1 == bins {
                max
            } else {
                min + width * (i + 1) as f64
            },
            count,
        })
        .collect())
}

pub fn histogram_export(values: &[f64], bins: usize, path: &Path) -> Result<()> {
    let mut out = String::from("bin_left,bin_right,count\n");
    for b in histogram(values, bins)? {
        let _ = writeln!(out, "{:.16e},{:.16e},{}", b.left, b.right, b.count);
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Vertex name to community label, for writing detected partitions.
pub fn format_labels(graph: &Graph, partition: &Partition) -> String {
    let mut out = String::new();
    for (v, l) in partition.labels().iter().enumerate() {
        let _ = writeln!(out, "{} {l}", graph.name(v));
    }
    out
}

/// Maps each name to its position; used to compare label files on the
/// same vertex set without a graph.
pub fn parse_label_pairs(text: &str) -> Result<Vec<(String, String)>> {
    let mut seen = HashMap::new();
    data_lines(text)
        .map(|(line, fields)| match fields.as_slice() {
            [id, label] => {
                if seen.insert(id.to_string(), line).is_some() {
                    return Err(Error::Parse {
                        line,
                        msg: format!("vertex {id:?} labeled twice"),
                    });
                }
                Ok((id.to_string(), label.to_string()))
            }
            _ => Err(Error::Parse {
                line,
                msg: format!("expected `vertex label`, found {} fields", fields.len()),
            }),
        })
        .collect()
}

/// Aligns two label files on a shared vertex set.
pub fn align_label_files(
    first: &[(String, String)],
    second: &[(String, String)],
) -> Result<(Partition, Partition)> {
    let lookup: HashMap<&str, &str> = second
        .iter()
        .map(|(id, l)| (id.as_str(), l.as_str()))
        .collect();
    if lookup.len() != first.len() {
        return Err(Error::Mismatch(format!(
            "label files cover {} and {} vertices",
            first.len(),
            lookup.len()
        )));
    }
    let mut b = Vec::with_capacity(first.len());
    for (id, _) in first {
        match lookup.get(id.as_str()) {
            Some(l) => b.push(*l),
            None => {
                return Err(Error::Mismatch(format!(
                    "vertex {id:?} missing from second label file"
                )))
            }
        }
    }
    let a: Vec<&str> = first.iter().map(|(_, l)| l.as_str()).collect();
    Ok((Partition::from_labels(&a), Partition::from_labels(&b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::flow::{run_flow, FlowConfig};

    #[test]
    fn parses_comments_and_weights() {
        let recs = parse_edge_list("# header\n\na b\n  b c 2.5\n").unwrap();
        assert_eq!(
            recs,
            vec![
                EdgeRecord::new("a", "b"),
                EdgeRecord::weighted("b", "c", 2.5)
            ]
        );
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert!(matches!(
            parse_edge_list("a b\nc\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_edge_list("a b x\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn utf8_ids() {
        let (g, _) = Graph::from_records(parse_edge_list("Zürich Genève\n").unwrap()).unwrap();
        assert_eq!(g.name(0), "Zürich");
    }

    #[test]
    fn labels_must_cover_known_vertices() {
        let (g, _) = Graph::from_records(parse_edge_list("a b\nb c\n").unwrap()).unwrap();
        let part = parse_labels(&g, "a 1\nb 1\nc 2\n").unwrap();
        assert_eq!(part.labels(), &[0, 0, 1]);
        let err = parse_labels(&g, "a 1\nb 1\n").unwrap_err();
        assert!(err.to_string().contains('c'));
        assert!(matches!(
            parse_labels(&g, "a 1\nb 1\nc 1\nd 2\n"),
            Err(Error::Mismatch(_))
        ));
    }

    #[test]
    fn trace_rows() {
        let (g, w) = fixtures::bridged_triangles();
        let trace = run_flow(&g, &w, &FlowConfig::new(0.5, 0.1, 0)).unwrap();
        let csv = format_trace(&g, &trace);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 1 + 7);
        assert_eq!(lines[0], "step,edge_u,edge_v,weight,entropy");
        assert!(lines[1].starts_with("0,x1,x2,1.0000000000000000e0,"));
        assert!(lines[1].ends_with(','));

        let trace = run_flow(&g, &w, &FlowConfig::new(0.5, 0.1, 10)).unwrap();
        let csv = format_trace(&g, &trace);
        assert_eq!(csv.lines().count(), 1 + 7 * 11);
        assert!(csv.lines().last().unwrap().ends_with(','));
        assert!(!csv.lines().nth(1).unwrap().ends_with(','));
    }

    #[test]
    fn histogram_cases() {
        let h = histogram(&[1.0, 1.0, 1.0], 1).unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(h[0].count, 3);
        assert!(histogram(&[1.0], 0).is_err());
        assert!(histogram(&[], 3).is_err());

        let h = histogram(&[0.0, 1.0, 2.0, 3.0], 3).unwrap();
        assert_eq!(h.iter().map(|b| b.count).collect::<Vec<_>>(), vec![1, 1, 2]);
        assert_eq!(h[2].right, 3.0);
    }

    #[test]
    fn align_label_files_by_name() {
        let a = parse_label_pairs("x 1\ny 1\nz 2\n").unwrap();
        let b = parse_label_pairs("z q\nx p\ny p\n").unwrap();
        let (pa, pb) = align_label_files(&a, &b).unwrap();
        assert_eq!(pa, pb);
        let c = parse_label_pairs("x 1\ny 1\nw 2\n").unwrap();
        assert!(align_label_files(&a, &c).is_err());
        let d = parse_label_pairs("x 1\n").unwrap();
        assert!(align_label_files(&a, &d).is_err());
    }
}
