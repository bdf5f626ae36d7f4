//! Dataset ingestion, synthetic benchmark sequences and sample-report
//! serialisation.
//!
//! Edge-list format: one edge per line, vertex labels separated by
//! commas and/or whitespace; `#`-prefixed lines and blank lines are
//! ignored. A label repeated within a line is collapsed (edges are
//! loopless) and counted, since real datasets such as email
//! correspondences routinely list the sender among the recipients.
//! Labels map to dense vertex ids in first-appearance order, so
//! identical files always produce identical hypergraphs.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::hypergraph::Hypergraph;
use crate::seq::IntSequence;
use crate::Error;

/// Parsed edge list: the hypergraph, the id-to-label table and the
/// number of collapsed duplicate labels.
#[derive(Debug, Clone)]
pub struct ParsedHypergraph {
    pub hypergraph: Hypergraph,
    /// Vertex id to original label, in first-appearance order.
    pub labels: Vec<String>,
    /// Within-line duplicate labels dropped during parsing.
    pub duplicate_collapses: usize,
}

/// Parses the edge-list format described in the module docs.
pub fn parse_hypergraph_edgelist(text: &str) -> Result<ParsedHypergraph> {
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut duplicate_collapses = 0usize;

    for (lineno, line) in text.lines().enumerate() {
        let line_number = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut edge: Vec<usize> = Vec::new();
        for field in trimmed.split(',') {
            let field = field.trim();
            if field.is_empty() {
                return Err(Error::Parse {
                    line: line_number,
                    msg: "empty label between commas".to_string(),
                });
            }
            for token in field.split_whitespace() {
                let id = match ids.get(token) {
                    Some(&id) => id,
                    None => {
                        let id = labels.len();
                        ids.insert(token.to_string(), id);
                        labels.push(token.to_string());
                        id
                    }
                };
                if edge.contains(&id) {
                    duplicate_collapses += 1;
                } else {
                    edge.push(id);
                }
            }
        }
        edges.push(edge);
    }

    if edges.is_empty() {
        return Err(Error::EmptyInput);
    }
    let hypergraph = Hypergraph::new(labels.len(), edges)?;
    Ok(ParsedHypergraph { hypergraph, labels, duplicate_collapses })
}

/// Renders a hypergraph back to edge-list text, one edge per line,
/// using the given labels (or the vertex ids when `labels` is `None`).
/// The format cannot express dimension-0 edges: they render as blank
/// lines, which re-parsing skips.
pub fn render_hypergraph_edgelist(h: &Hypergraph, labels: Option<&[String]>) -> String {
    let mut out = String::new();
    for edge in h.edges() {
        let mut first = true;
        for &v in edge {
            if !first {
                out.push(' ');
            }
            first = false;
            match labels {
                Some(ls) => out.push_str(&ls[v]),
                None => out.push_str(&v.to_string()),
            }
        }
        out.push('\n');
    }
    out
}

/// Parses whitespace/newline-separated non-negative integers into a
/// sequence sorted non-increasing. The empty input parses to the empty
/// sequence.
pub fn parse_sequence_file(text: &str) -> Result<IntSequence> {
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        for token in line.split_whitespace() {
            let v: usize = token.parse().map_err(|_| Error::Parse {
                line: lineno + 1,
                msg: format!("'{token}' is not a non-negative integer"),
            })?;
            values.push(v);
        }
    }
    Ok(IntSequence::sorted(values))
}

/// Renders a sequence as newline-separated integers.
pub fn render_sequence(seq: &IntSequence) -> String {
    let mut out = String::new();
    for v in seq.values() {
        out.push_str(&v.to_string());
        out.push('\n');
    }
    out
}

/// Degree and dimension sequences of the pseudo-fractal scale-free
/// graph family at generation `t`: `3^(t-s+1)` vertices of degree
/// `2^s` for `s = 1..=t` plus three vertices of degree `2^(t+1)`, with
/// every edge of dimension 2.
pub fn pseudofractal_sequences(t: u32) -> Result<(IntSequence, IntSequence)> {
    if !(1..=8).contains(&t) {
        return Err(Error::invalid(format!(
            "pseudofractal generation t must be in 1..=8, got {t}"
        )));
    }
    let mut degrees = Vec::new();
    for s in 1..=t {
        let copies = 3usize.pow(t - s + 1);
        let degree = 2usize.pow(s);
        degrees.extend(std::iter::repeat_n(degree, copies));
    }
    degrees.extend(std::iter::repeat_n(2usize.pow(t + 1), 3));
    let degrees = IntSequence::sorted(degrees);
    let n_edges = (degrees.total() / 2) as usize;
    let dimensions = IntSequence::new(vec![2; n_edges]);
    Ok((degrees, dimensions))
}

/// Run metadata carried in every samples report.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunMetadata {
    pub seed: u64,
    /// Weight mode for the generation sampler, or "mcmc" for chains.
    pub mode: String,
    /// Sampling lag for MCMC runs; absent for independent sampling.
    pub lag: Option<usize>,
}

/// One sample's SNIS ingredients and property value.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct SampleRecord {
    pub sample_index: usize,
    pub log_prob: f64,
    pub log_multiplicity: f64,
    pub property_value: f64,
}

/// The JSON report written by the sampling commands and consumed by
/// the estimation command.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SamplesReport {
    pub metadata: RunMetadata,
    pub n_samples: usize,
    /// Property estimate; absent when the report carries no samples.
    pub estimate: Option<f64>,
    /// Effective sample size (SNIS ESS for independent samples,
    /// autocorrelation ESS for chains); absent without samples.
    pub ess: Option<f64>,
    /// Bootstrap standard error of the estimate (1000 resamples);
    /// absent without samples.
    #[serde(default)]
    pub bootstrap_se: Option<f64>,
    pub samples: Vec<SampleRecord>,
}

pub fn render_report_json(report: &SamplesReport) -> Result<String> {
    let mut text = serde_json::to_string_pretty(report).map_err(|source| Error::Json {
        context: "serialising samples report".to_string(),
        source,
    })?;
    text.push('\n');
    Ok(text)
}

pub fn write_samples_report(report: &SamplesReport, path: &Path) -> Result<()> {
    let text = render_report_json(report)?;
    std::fs::write(path, text).map_err(|source| Error::Io {
        context: format!("writing report to {}", path.display()),
        source,
    })
}

pub fn read_samples_report(path: &Path) -> Result<SamplesReport> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        context: format!("reading report from {}", path.display()),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| Error::Json {
        context: format!("parsing report {}", path.display()),
        source,
    })
}

/// CSV rendering of the per-sample records, one row per sample.
pub fn render_samples_csv(report: &SamplesReport) -> String {
    let mut out = String::from("sample_index,log_prob,log_multiplicity,cc\n");
    for s in &report.samples {
        out.push_str(&format!(
            "{},{},{},{}\n",
            s.sample_index, s.log_prob, s.log_multiplicity, s.property_value
        ));
    }
    out
}

pub fn write_samples_csv(report: &SamplesReport, path: &Path) -> Result<()> {
    std::fs::write(path, render_samples_csv(report)).map_err(|source| Error::Io {
        context: format!("writing CSV to {}", path.display()),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_basic_edgelist() {
        let parsed = parse_hypergraph_edgelist("a b c\na b\nd\n").unwrap();
        assert_eq!(parsed.hypergraph.degree_sequence().0.values(), &[2, 2, 1, 1]);
        assert_eq!(parsed.hypergraph.dimension_sequence().values(), &[3, 2, 1]);
        assert_eq!(parsed.labels, vec!["a", "b", "c", "d"]);
        assert_eq!(parsed.duplicate_collapses, 0);
    }

    #[test]
    fn parse_collapses_duplicates_with_counter() {
        let parsed = parse_hypergraph_edgelist("a a b\n").unwrap();
        assert_eq!(parsed.hypergraph.edges(), &[vec![0, 1]]);
        assert_eq!(parsed.duplicate_collapses, 1);
    }

    #[test]
    fn comments_and_blanks_only_is_empty_input() {
        assert!(matches!(
            parse_hypergraph_edgelist("# comment\n\n"),
            Err(Error::EmptyInput)
        ));
    }

    #[test]
    fn comma_separated_labels() {
        let parsed = parse_hypergraph_edgelist("a, b,c\nd,e\n").unwrap();
        assert_eq!(parsed.hypergraph.dimension_sequence().values(), &[3, 2]);
        assert_eq!(parsed.labels.len(), 5);
    }

    #[test]
    fn empty_comma_field_is_malformed() {
        match parse_hypergraph_edgelist("a b\nx,,y\n") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("expected parse error at line 2, got {other:?}"),
        }
    }

    #[test]
    fn label_ids_follow_first_appearance() {
        let parsed = parse_hypergraph_edgelist("z y\nx z\n").unwrap();
        assert_eq!(parsed.labels, vec!["z", "y", "x"]);
        assert_eq!(parsed.hypergraph.edges(), &[vec![0, 1], vec![0, 2]]);
    }

    #[test]
    fn edgelist_roundtrip_up_to_relabelling() {
        let text = "a b c\nb d\na\n";
        let parsed = parse_hypergraph_edgelist(text).unwrap();
        let rendered =
            render_hypergraph_edgelist(&parsed.hypergraph, Some(&parsed.labels));
        let reparsed = parse_hypergraph_edgelist(&rendered).unwrap();
        assert_eq!(parsed.hypergraph, reparsed.hypergraph);
        assert_eq!(parsed.labels, reparsed.labels);
    }

    #[test]
    fn parse_sequence_examples() {
        assert_eq!(parse_sequence_file("1 2 2 4").unwrap().values(), &[4, 2, 2, 1]);
        assert!(parse_sequence_file("").unwrap().is_empty());
        assert_eq!(parse_sequence_file("3\n2\n1").unwrap().values(), &[3, 2, 1]);
    }

    #[test]
    fn parse_sequence_rejects_bad_tokens() {
        assert!(matches!(
            parse_sequence_file("3 x 1"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_sequence_file("3\n-2"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn pseudofractal_sizes() {
        let expected_sizes = [6, 15, 42, 123, 366, 1095];
        let expected_edges = [9, 27, 81, 243, 729, 2187];
        for t in 1..=6u32 {
            let (a, b) = pseudofractal_sequences(t).unwrap();
            assert_eq!(a.len(), expected_sizes[(t - 1) as usize], "t={t}");
            assert_eq!(b.len(), expected_edges[(t - 1) as usize], "t={t}");
            assert!(b.values().iter().all(|&d| d == 2));
        }
    }

    #[test]
    fn pseudofractal_t1_composition() {
        let (a, _) = pseudofractal_sequences(1).unwrap();
        assert_eq!(a.values(), &[4, 4, 4, 2, 2, 2]);
    }

    #[test]
    fn pseudofractal_guard() {
        assert!(pseudofractal_sequences(0).is_err());
        assert!(pseudofractal_sequences(9).is_err());
    }

    fn tiny_report() -> SamplesReport {
        SamplesReport {
            metadata: RunMetadata { seed: 7, mode: "exact".to_string(), lag: None },
            n_samples: 2,
            estimate: Some(0.3333333333333333),
            ess: Some(1.923076923076923),
            bootstrap_se: Some(0.125),
            samples: vec![
                SampleRecord {
                    sample_index: 0,
                    log_prob: -3.0f64.ln(),
                    log_multiplicity: std::f64::consts::LN_2,
                    property_value: 0.5,
                },
                SampleRecord {
                    sample_index: 1,
                    log_prob: -std::f64::consts::LN_2,
                    log_multiplicity: 0.0,
                    property_value: 0.25,
                },
            ],
        }
    }

    #[test]
    fn report_roundtrip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("report.json");
        let report = tiny_report();
        write_samples_report(&report, &path).unwrap();
        let back = read_samples_report(&path).unwrap();
        assert_eq!(back, report);
        assert_eq!(back.estimate.unwrap().to_bits(), report.estimate.unwrap().to_bits());
    }

    #[test]
    fn empty_report_is_valid_json() {
        let report = SamplesReport {
            metadata: RunMetadata { seed: 0, mode: "paper".to_string(), lag: None },
            n_samples: 0,
            estimate: None,
            ess: None,
            bootstrap_se: None,
            samples: vec![],
        };
        let text = render_report_json(&report).unwrap();
        let back: SamplesReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back.n_samples, 0);
    }

    #[test]
    fn write_errors_carry_path_context() {
        let report = tiny_report();
        let err = write_samples_report(&report, Path::new("/nonexistent/dir/report.json"))
            .unwrap_err();
        assert!(err.to_string().contains("/nonexistent/dir/report.json"));
    }

    #[test]
    fn csv_row_count_matches_samples() {
        let report = tiny_report();
        let csv = render_samples_csv(&report);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "sample_index,log_prob,log_multiplicity,cc");
        assert_eq!(lines.len(), 1 + report.n_samples);
    }
}
