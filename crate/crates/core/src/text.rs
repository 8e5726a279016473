//! Line-oriented input formats. Blank lines and `#` comments are ignored
//! everywhere.
//!
//! * poset: `id: lower1 lower2 ...`, listing the elements `id` covers (an
//!   optional leading `covers` keyword is accepted); ids first seen on the
//!   right are declared implicitly.
//! * graph: `v <name>` and `e <name1> <name2> [label]`.
//! * pattern family: one pattern per line, items separated by spaces; `∅`
//!   or `{}` stands for the empty pattern.
//! * context: `object: item item ...`.
//! * abstraction: one generator per line, `object object ...`.

use std::collections::HashMap;

use thiserror::Error;

use crate::order::{FinitePoset, OrderError};
use crate::pattern::{Pattern, MAX_ITEMS};
use crate::setsys::GraphSpec;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

/// Non-blank lines with comments stripped, numbered from 1.
fn lines(src: &str) -> impl Iterator<Item = (usize, &str)> {
    src.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

/// Names mapped to dense indices in order of first appearance.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocabulary {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_names(names: impl IntoIterator<Item = String>) -> Self {
        let mut v = Self::new();
        for n in names {
            v.intern(&n);
        }
        v
    }

    pub fn intern(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), self.names.len() - 1);
        self.names.len() - 1
    }

    pub fn get(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Item names of `p`, space-separated; `∅` when empty.
    pub fn format(&self, p: &Pattern) -> String {
        if p.is_empty() {
            return "∅".into();
        }
        p.iter().map(|i| self.name(i)).collect::<Vec<_>>().join(" ")
    }

    fn pattern(&mut self, line: usize, tokens: &[&str]) -> Result<Pattern, ParseError> {
        let mut p = Pattern::empty();
        for t in tokens {
            if matches!(*t, "∅" | "{}") {
                continue;
            }
            let i = self.intern(t);
            if i >= MAX_ITEMS {
                return err(line, format!("more than {MAX_ITEMS} distinct items"));
            }
            p.insert(i);
        }
        Ok(p)
    }
}

pub fn parse_poset(src: &str) -> Result<FinitePoset, ParseError> {
    let mut ids = Vocabulary::new();
    let mut covers: Vec<Vec<usize>> = Vec::new();
    let mut defined: Vec<bool> = Vec::new();
    let mut last = 0;
    for (line, l) in lines(src) {
        last = line;
        let Some((id, rest)) = l.split_once(':') else {
            return err(line, "expected `id: lower ...`");
        };
        let id = id.trim();
        if id.is_empty() || id.contains(char::is_whitespace) {
            return err(line, format!("bad element id `{id}`"));
        }
        let x = ids.intern(id);
        let mut tokens: Vec<&str> = rest.split_whitespace().collect();
        if tokens.first() == Some(&"covers") {
            tokens.remove(0);
        }
        let lowers: Vec<usize> = tokens.iter().map(|t| ids.intern(t)).collect();
        covers.resize(ids.len(), Vec::new());
        defined.resize(ids.len(), false);
        if defined[x] {
            return err(line, format!("element `{id}` defined twice"));
        }
        defined[x] = true;
        covers[x] = lowers;
    }
    if ids.is_empty() {
        return err(last.max(1), "no elements");
    }
    FinitePoset::from_covers(ids.names().to_vec(), &covers).or_else(|e| match e {
        OrderError::Cycle(_) | OrderError::NotAntisymmetric(..) => {
            err(last, format!("cover relation is not an order: {e}"))
        }
        other => err(last, other.to_string()),
    })
}

pub fn parse_graph(src: &str) -> Result<GraphSpec, ParseError> {
    let mut vertices = Vocabulary::new();
    let mut edges = Vec::new();
    let mut labels = Vec::new();
    for (line, l) in lines(src) {
        let tokens: Vec<&str> = l.split_whitespace().collect();
        match tokens.as_slice() {
            ["v", name] => {
                if vertices.get(name).is_some() {
                    return err(line, format!("vertex `{name}` declared twice"));
                }
                vertices.intern(name);
            }
            ["e", a, b, rest @ ..] if rest.len() <= 1 => {
                let u = vertices.get(a).ok_or_else(|| ParseError {
                    line,
                    message: format!("unknown vertex `{a}`"),
                })?;
                let v = vertices.get(b).ok_or_else(|| ParseError {
                    line,
                    message: format!("unknown vertex `{b}`"),
                })?;
                if u == v {
                    return err(line, format!("self-loop on `{a}`"));
                }
                if edges
                    .iter()
                    .any(|&(x, y)| (x, y) == (u, v) || (x, y) == (v, u))
                {
                    return err(line, format!("edge `{a} {b}` listed twice"));
                }
                let label = rest
                    .first()
                    .map_or_else(|| format!("{a}-{b}"), |s| s.to_string());
                if labels.contains(&label) {
                    return err(line, format!("edge label `{label}` used twice"));
                }
                edges.push((u, v));
                labels.push(label);
            }
            _ => return err(line, "expected `v <name>` or `e <name1> <name2> [label]`"),
        }
    }
    GraphSpec::new(vertices.names().to_vec(), edges, labels).or_else(|e| err(0, e.to_string()))
}

/// Patterns, one per line, interning item names into `items`.
pub fn parse_patterns(src: &str, items: &mut Vocabulary) -> Result<Vec<Pattern>, ParseError> {
    lines(src)
        .map(|(line, l)| {
            let tokens: Vec<&str> = l.split_whitespace().collect();
            items.pattern(line, &tokens)
        })
        .collect()
}

/// Object names and descriptions, interning item names into `items`.
pub fn parse_context(
    src: &str,
    items: &mut Vocabulary,
) -> Result<(Vec<String>, Vec<Pattern>), ParseError> {
    let mut names: Vec<String> = Vec::new();
    let mut descriptions = Vec::new();
    for (line, l) in lines(src) {
        let Some((name, rest)) = l.split_once(':') else {
            return err(line, "expected `object: item ...`");
        };
        let name = name.trim();
        if name.is_empty() {
            return err(line, "missing object name");
        }
        if names.iter().any(|n| n == name) {
            return err(line, format!("object `{name}` listed twice"));
        }
        let tokens: Vec<&str> = rest.split_whitespace().collect();
        descriptions.push(items.pattern(line, &tokens)?);
        names.push(name.to_string());
    }
    Ok((names, descriptions))
}

/// Generator extents as object indices into `objects`.
pub fn parse_abstraction(src: &str, objects: &[String]) -> Result<Vec<Vec<usize>>, ParseError> {
    lines(src)
        .map(|(line, l)| {
            l.split_whitespace()
                .map(|o| {
                    objects
                        .iter()
                        .position(|n| n == o)
                        .ok_or_else(|| ParseError {
                            line,
                            message: format!("unknown object `{o}`"),
                        })
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poset_format() {
        let p = parse_poset("# diamond\nbot:\na: bot\nb: covers bot\ntop: a b\n").unwrap();
        assert_eq!(p.labels(), &["bot", "a", "b", "top"]);
        assert!(p.leq(0, 3));
        assert!(!p.leq(1, 2));
        // ids on the right are declared implicitly
        let q = parse_poset("y: x").unwrap();
        assert_eq!(q.labels(), &["y", "x"]);
        assert!(q.lt(1, 0));
    }

    #[test]
    fn poset_errors() {
        assert_eq!(parse_poset("a b\n").unwrap_err().line, 1);
        assert_eq!(parse_poset("a:\n\na: \n").unwrap_err().line, 3);
        assert!(parse_poset("a: b\nb: a\n").is_err());
        assert!(parse_poset("# nothing\n").is_err());
    }

    #[test]
    fn graph_format() {
        let g = parse_graph("v 1\nv 2\nv 3\ne 1 2 a\ne 2 3\n").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(g.edge_names(), &["a", "2-3"]);
        let e = parse_graph("v 1\ne 1 9\n").unwrap_err();
        assert_eq!(
            e,
            ParseError {
                line: 2,
                message: "unknown vertex `9`".into()
            }
        );
        assert_eq!(parse_graph("v 1\nv 1\n").unwrap_err().line, 2);
        assert_eq!(parse_graph("v 1\nx\n").unwrap_err().line, 2);
        assert_eq!(parse_graph("v 1\n\ne 1 1\n").unwrap_err().line, 3);
    }

    #[test]
    fn families_and_contexts() {
        let mut items = Vocabulary::new();
        let fam = parse_patterns("∅\na b\na c # comment\n", &mut items).unwrap();
        assert_eq!(items.names(), &["a", "b", "c"]);
        assert_eq!(
            fam,
            vec![
                Pattern::empty(),
                Pattern::from_items([0, 1]),
                Pattern::from_items([0, 2])
            ]
        );
        assert_eq!(items.format(&fam[2]), "a c");
        assert_eq!(items.format(&fam[0]), "∅");

        let (objects, desc) = parse_context("o1: a b\no2: d\no3:\n", &mut items).unwrap();
        assert_eq!(objects, vec!["o1", "o2", "o3"]);
        assert_eq!(desc[1], Pattern::singleton(3));
        assert!(desc[2].is_empty());
        assert_eq!(parse_context("o1 a b\n", &mut items).unwrap_err().line, 1);
        assert_eq!(
            parse_context("o: a\no: b\n", &mut items).unwrap_err().line,
            2
        );
    }

    #[test]
    fn abstraction_format() {
        let objects: Vec<String> = ["o1", "o2", "o3"].map(String::from).to_vec();
        assert_eq!(
            parse_abstraction("o1 o2\no1 o3\n", &objects).unwrap(),
            vec![vec![0, 1], vec![0, 2]]
        );
        let e = parse_abstraction("o1\no4\n", &objects).unwrap_err();
        assert_eq!(e.line, 2);
    }
}
