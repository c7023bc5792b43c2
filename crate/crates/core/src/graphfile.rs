//! Text serialization of ribbon graphs.
//!
//! ```text
//! # comment
//! ribbon 1 1
//! rot 0: 0 1
//! edge 0: 0 1 untwisted
//! ```
//!
//! Comment lines (`#` as the first non-blank character) and blank lines may
//! appear anywhere. Vertex and edge records may come in any order, but each
//! index must be listed exactly once.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::ribbon::{Edge, RibbonGraph};

pub fn parse_graph_file(text: &str) -> Result<RibbonGraph> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut rotations: Vec<Option<(usize, Vec<usize>)>> = Vec::new();
    let mut edges: Vec<Option<(usize, Edge)>> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let syntax = |msg: String| Error::Syntax { line, msg };
        let mut words = body.split_whitespace();
        let keyword = words.next().unwrap_or_default();

        let Some((v_count, e_count, _)) = header else {
            if keyword != "ribbon" {
                return Err(syntax(format!(
                    "expected `ribbon <vertices> <edges>`, found `{body}`"
                )));
            }
            let nums = parse_numbers(words, line)?;
            let [v, e] = nums[..] else {
                return Err(syntax("header needs exactly two counts".into()));
            };
            header = Some((v, e, line));
            rotations = vec![None; v];
            edges = vec![None; e];
            continue;
        };

        let (label, rest) = body
            .split_once(':')
            .ok_or_else(|| syntax(format!("missing `:` in `{body}`")))?;
        let mut label_words = label.split_whitespace();
        let keyword = label_words.next().unwrap_or_default();
        let index = match (label_words.next(), label_words.next()) {
            (Some(w), None) => parse_number(w, line)?,
            _ => return Err(syntax(format!("expected `{keyword} <index>:`"))),
        };
        match keyword {
            "rot" => {
                if index >= v_count {
                    return Err(Error::CountMismatch {
                        what: "vertices",
                        declared: v_count,
                        found: index + 1,
                    });
                }
                if rotations[index].is_some() {
                    return Err(syntax(format!("vertex {index} listed twice")));
                }
                let ids = parse_numbers(rest.split_whitespace(), line)?;
                rotations[index] = Some((line, ids));
            }
            "edge" => {
                if index >= e_count {
                    return Err(Error::CountMismatch {
                        what: "edges",
                        declared: e_count,
                        found: index + 1,
                    });
                }
                if edges[index].is_some() {
                    return Err(syntax(format!("edge {index} listed twice")));
                }
                let fields: Vec<&str> = rest.split_whitespace().collect();
                let [a, b, twist] = fields[..] else {
                    return Err(syntax("expected `<ha> <hb> twisted|untwisted`".into()));
                };
                let twisted = match twist {
                    "twisted" => true,
                    "untwisted" => false,
                    other => return Err(syntax(format!("unknown twist marker `{other}`"))),
                };
                let edge = Edge::new(parse_number(a, line)?, parse_number(b, line)?, twisted);
                edges[index] = Some((line, edge));
            }
            other => return Err(syntax(format!("unknown record `{other}`"))),
        }
    }

    let Some((v_count, e_count, _)) = header else {
        return Err(Error::Syntax {
            line: last_line.max(1),
            msg: "missing `ribbon` header".into(),
        });
    };
    let found_v = rotations.iter().flatten().count();
    if found_v != v_count {
        return Err(Error::CountMismatch {
            what: "vertices",
            declared: v_count,
            found: found_v,
        });
    }
    let found_e = edges.iter().flatten().count();
    if found_e != e_count {
        return Err(Error::CountMismatch {
            what: "edges",
            declared: e_count,
            found: found_e,
        });
    }

    let rotation_lines: Vec<(usize, Vec<usize>)> = rotations.into_iter().flatten().collect();
    let edge_lines: Vec<(usize, Edge)> = edges.into_iter().flatten().collect();
    let line_of = |h: usize| {
        edge_lines
            .iter()
            .find(|(_, e)| e.a == h || e.b == h)
            .map(|(l, _)| *l)
            .or_else(|| {
                rotation_lines
                    .iter()
                    .find(|(_, r)| r.contains(&h))
                    .map(|(l, _)| *l)
            })
    };
    let rotation_line_of = |h: usize| {
        rotation_lines
            .iter()
            .rev()
            .find(|(_, r)| r.contains(&h))
            .map(|(l, _)| *l)
    };

    RibbonGraph::new(
        v_count,
        rotation_lines.iter().map(|(_, r)| r.clone()).collect(),
        edge_lines.iter().map(|(_, e)| *e).collect(),
    )
    .map_err(|err| {
        let line = match &err {
            Error::HalfEdgeOutOfRange(h, _)
            | Error::PairedTwice(h)
            | Error::MissingFromRotation(h) => line_of(*h),
            Error::DuplicateInRotation(h) | Error::Unpaired(h) => rotation_line_of(*h),
            _ => None,
        };
        match line {
            Some(line) => Error::AtLine {
                line,
                source: Box::new(err),
            },
            None => err,
        }
    })
}

fn parse_number(word: &str, line: usize) -> Result<usize> {
    word.parse().map_err(|_| Error::Syntax {
        line,
        msg: format!("expected a non-negative integer, found `{word}`"),
    })
}

fn parse_numbers<'a>(words: impl Iterator<Item = &'a str>, line: usize) -> Result<Vec<usize>> {
    words.map(|w| parse_number(w, line)).collect()
}

/// Canonical text: header, vertices ascending, edges ascending, single
/// spaces, trailing newline, no comments.
pub fn write_graph_file(g: &RibbonGraph) -> String {
    let mut out = String::new();
    writeln!(out, "ribbon {} {}", g.vertex_count(), g.edge_count()).unwrap();
    for (i, rot) in g.rotations().iter().enumerate() {
        write!(out, "rot {i}:").unwrap();
        for h in rot {
            write!(out, " {h}").unwrap();
        }
        out.push('\n');
    }
    for (j, e) in g.edges().iter().enumerate() {
        let twist = if e.twisted { "twisted" } else { "untwisted" };
        writeln!(out, "edge {j}: {} {} {twist}", e.a, e.b).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const LOOP: &str = "ribbon 1 1\nrot 0: 0 1\nedge 0: 0 1 untwisted\n";

    #[test]
    fn loop_round_trip() {
        let g = parse_graph_file(LOOP).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(write_graph_file(&g), LOOP);
    }

    #[test]
    fn comments_and_spacing_canonicalize() {
        let text = "# a loop\n\n  ribbon   1 1\n# vertex\nrot 0 :  0   1\nedge 0: 0 1 twisted  \n";
        let g = parse_graph_file(text).unwrap();
        assert!(g.edges()[0].twisted);
        assert_eq!(
            write_graph_file(&g),
            "ribbon 1 1\nrot 0: 0 1\nedge 0: 0 1 twisted\n"
        );
    }

    #[test]
    fn count_mismatch() {
        let text = "ribbon 1 2\nrot 0: 0 1\nedge 0: 0 1 untwisted\n";
        assert_eq!(
            parse_graph_file(text).unwrap_err(),
            Error::CountMismatch {
                what: "edges",
                declared: 2,
                found: 1
            }
        );
        let text = "ribbon 1 1\nrot 0: 0 1\nedge 0: 0 1 untwisted\nedge 1: 0 1 untwisted\n";
        assert!(matches!(
            parse_graph_file(text),
            Err(Error::CountMismatch { .. })
        ));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad_twist = "ribbon 1 1\nrot 0: 0 1\nedge 0: 0 1 sideways\n";
        assert!(matches!(
            parse_graph_file(bad_twist),
            Err(Error::Syntax { line: 3, .. })
        ));

        let bad_number = "ribbon 1 1\nrot 0: 0 x\nedge 0: 0 1 untwisted\n";
        assert!(matches!(
            parse_graph_file(bad_number),
            Err(Error::Syntax { line: 2, .. })
        ));

        let no_header = "rot 0: 0 1\n";
        assert!(matches!(
            parse_graph_file(no_header),
            Err(Error::Syntax { line: 1, .. })
        ));

        let out_of_range = "ribbon 1 1\n# c\nrot 0: 0 1\nedge 0: 0 7 untwisted\n";
        let err = parse_graph_file(out_of_range).unwrap_err();
        assert!(matches!(err, Error::AtLine { line: 4, .. }), "{err}");
        assert!(err.to_string().contains('7'));

        let dup = "ribbon 2 1\nrot 0: 0 1\nrot 1: 1\nedge 0: 0 1 untwisted\n";
        let err = parse_graph_file(dup).unwrap_err();
        assert!(matches!(err, Error::AtLine { line: 3, .. }), "{err}");
    }

    #[test]
    fn empty_graph() {
        let g = parse_graph_file("ribbon 0 0\n").unwrap();
        assert_eq!(g.vertex_count(), 0);
        assert_eq!(write_graph_file(&g), "ribbon 0 0\n");
    }
}
