//! Pajek NET and edge-list CSV interchange.
//!
//! The Pajek writer is byte-exact: `*Vertices N`, one `i "label"` line per
//! node (1-based, id order), `*Arcs` or `*Edges`, then `i j [w]` per tie,
//! LF terminated, single-space separated.

use thiserror::Error;

use crate::graph::{Attributes, GraphError, SocialGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PajekError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Graph {
        line: usize,
        #[source]
        source: GraphError,
    },
}

fn syntax(line: usize, message: impl Into<String>) -> PajekError {
    PajekError::Syntax {
        line,
        message: message.into(),
    }
}

pub fn export_pajek(g: &SocialGraph) -> String {
    let mut out = format!("*Vertices {}\n", g.node_count());
    for node in g.nodes() {
        out.push_str(&format!("{} \"{}\"\n", node.id + 1, node.label));
    }
    out.push_str(if g.is_directed() { "*Arcs\n" } else { "*Edges\n" });
    for tie in g.ties() {
        match tie.weight {
            Some(w) => out.push_str(&format!("{} {} {}\n", tie.src + 1, tie.dst + 1, w)),
            None => out.push_str(&format!("{} {}\n", tie.src + 1, tie.dst + 1)),
        }
    }
    out
}

/// Parses the grammar written by [`export_pajek`]. The graph is weighted
/// when tie lines carry a third field; mixing both forms is rejected.
pub fn import_pajek(text: &str, name: &str) -> Result<SocialGraph, PajekError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty());

    let (hline, header) = lines.next().ok_or_else(|| syntax(1, "missing *Vertices header"))?;
    let mut parts = header.split_whitespace();
    if !parts
        .next()
        .is_some_and(|h| h.eq_ignore_ascii_case("*vertices"))
    {
        return Err(syntax(hline, "expected *Vertices header"));
    }
    let count: usize = parts
        .next()
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| syntax(hline, "vertex count must be a non-negative integer"))?;
    if parts.next().is_some() {
        return Err(syntax(hline, "unexpected tokens after vertex count"));
    }

    let mut labels: Vec<Option<String>> = vec![None; count];
    let mut section = None;
    for (line, l) in lines.by_ref() {
        let trimmed = l.trim();
        if trimmed.starts_with('*') {
            section = Some((line, trimmed.to_ascii_lowercase()));
            break;
        }
        let (index, rest) = trimmed
            .split_once(char::is_whitespace)
            .ok_or_else(|| syntax(line, "expected `index \"label\"`"))?;
        let index = parse_index(index, count, line)?;
        let rest = rest.trim();
        let label = rest
            .strip_prefix('"')
            .and_then(|r| r.strip_suffix('"'))
            .filter(|l| !l.contains('"'))
            .ok_or_else(|| syntax(line, "label must be a double-quoted string"))?;
        if labels[index].replace(label.to_owned()).is_some() {
            return Err(syntax(line, format!("vertex {} declared twice", index + 1)));
        }
    }
    if let Some(missing) = labels.iter().position(Option::is_none) {
        return Err(syntax(hline, format!("vertex {} is not declared", missing + 1)));
    }

    let (section_line, section) = section.ok_or_else(|| syntax(hline, "missing *Arcs or *Edges section"))?;
    let directed = match section.as_str() {
        "*arcs" => true,
        "*edges" => false,
        other => return Err(syntax(section_line, format!("unknown section {other}"))),
    };

    let mut ties = Vec::new();
    let mut weighted = None;
    for (line, l) in lines {
        let fields: Vec<&str> = l.split_whitespace().collect();
        if fields.len() != 2 && fields.len() != 3 {
            return Err(syntax(line, "expected `i j` or `i j w`"));
        }
        let has_weight = fields.len() == 3;
        if *weighted.get_or_insert(has_weight) != has_weight {
            return Err(syntax(line, "mixed weighted and unweighted tie lines"));
        }
        let src = parse_index(fields[0], count, line)?;
        let dst = parse_index(fields[1], count, line)?;
        let weight = if has_weight {
            Some(
                fields[2]
                    .parse::<u8>()
                    .map_err(|_| syntax(line, format!("weight {:?} is not an integer in 1..=5", fields[2])))?,
            )
        } else {
            None
        };
        ties.push((line, src, dst, weight));
    }

    let mut g = SocialGraph::new(name, directed, weighted.unwrap_or(false));
    for (i, label) in labels.into_iter().enumerate() {
        let label = label.unwrap_or_default();
        g.add_node(&label, Attributes::new())
            .map_err(|source| PajekError::Graph { line: i + 2, source })?;
    }
    for (line, src, dst, weight) in ties {
        g.add_tie(src, dst, weight)
            .map_err(|source| PajekError::Graph { line, source })?;
    }
    Ok(g)
}

fn parse_index(field: &str, count: usize, line: usize) -> Result<usize, PajekError> {
    match field.parse::<usize>() {
        Ok(i) if (1..=count).contains(&i) => Ok(i - 1),
        Ok(i) => Err(syntax(line, format!("index {i} out of range 1..={count}"))),
        Err(_) => Err(syntax(line, format!("index {field:?} is not an integer"))),
    }
}

/// `src_label,dst_label,weight` with a header row; the weight column is
/// empty for unweighted graphs.
pub fn export_csv(g: &SocialGraph) -> String {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    writer
        .write_record(["src_label", "dst_label", "weight"])
        .expect("in-memory write");
    for tie in g.ties() {
        let weight = tie.weight.map(|w| w.to_string()).unwrap_or_default();
        writer
            .write_record([
                g.nodes()[tie.src].label.as_str(),
                g.nodes()[tie.dst].label.as_str(),
                weight.as_str(),
            ])
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("labels are UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn cyc3_exact_bytes() {
        assert_eq!(
            export_pajek(&cyc3()),
            "*Vertices 3\n1 \"a\"\n2 \"b\"\n3 \"c\"\n*Arcs\n1 2\n2 3\n3 1\n"
        );
    }

    #[test]
    fn weighted_tie_line() {
        let g = weighted(true, &["a", "b"], &[(0, 1, 4)]);
        assert!(export_pajek(&g).ends_with("*Arcs\n1 2 4\n"));
        let back = import_pajek(&export_pajek(&g), "w").unwrap();
        assert!(back.is_weighted());
        assert_eq!(back.tie(0, 1), Some(Some(4)));
    }

    #[test]
    fn empty_graph() {
        let g = SocialGraph::new("e", false, false);
        assert_eq!(export_pajek(&g), "*Vertices 0\n*Edges\n");
        assert_eq!(import_pajek("*Vertices 0\n*Edges\n", "e").unwrap().node_count(), 0);
    }

    #[test]
    fn line4_roundtrip() {
        let g = line4();
        let back = import_pajek(&export_pajek(&g), "line4").unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = import_pajek("*Vertexes 2\n", "x").unwrap_err();
        assert!(matches!(err, PajekError::Syntax { line: 1, .. }));

        let err = import_pajek("*Vertices 2\n1 \"a\"\n2 \"b\"\n*Arcs\n1 3\n", "x").unwrap_err();
        assert!(matches!(err, PajekError::Syntax { line: 5, .. }), "{err}");

        let err = import_pajek("*Vertices 2\n1 \"a\"\n2 \"b\"\n*Arcs\n1 2 2.5\n", "x").unwrap_err();
        assert!(matches!(err, PajekError::Syntax { line: 5, .. }), "{err}");

        let err = import_pajek("*Vertices 2\n1 \"a\"\n2 \"b\"\n*Arcs\n1 2 9\n", "x").unwrap_err();
        assert!(matches!(
            err,
            PajekError::Graph {
                line: 5,
                source: GraphError::WeightOutOfRange(9)
            }
        ));
    }

    #[test]
    fn csv_export() {
        let g = weighted(true, &["a", "b"], &[(0, 1, 4)]);
        assert_eq!(export_csv(&g), "src_label,dst_label,weight\na,b,4\n");
        assert_eq!(export_csv(&cyc3()).lines().nth(1), Some("a,b,"));
    }
}
