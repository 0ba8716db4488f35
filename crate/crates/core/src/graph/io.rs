//! Graph exchange formats: canonical JSON `{"n": .., "edges": [[u, v], ..]}`
//! and a plain edge list (`n` on the first line, then one `u v` per line).

use serde::{Deserialize, Serialize};

use super::{Digraph, GraphError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl From<&Digraph> for GraphJson {
    fn from(g: &Digraph) -> Self {
        Self { n: g.n(), edges: g.edges().map(|(u, v)| [u, v]).collect() }
    }
}

impl TryFrom<GraphJson> for Digraph {
    type Error = GraphError;

    fn try_from(raw: GraphJson) -> Result<Self, GraphError> {
        Digraph::new(raw.n, raw.edges.into_iter().map(|[u, v]| (u, v)))
    }
}

impl Serialize for Digraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GraphJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Digraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Digraph::try_from(GraphJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

pub fn parse_edge_list(text: &str) -> Result<Digraph, GraphError> {
    let mut lines =
        text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (_, header) = lines.next().ok_or_else(|| GraphError::Parse("missing vertex count line".into()))?;
    let n: usize =
        header.parse().map_err(|_| GraphError::Parse(format!("line 1: expected vertex count, got {header:?}")))?;
    let mut edges = Vec::new();
    for (lineno, line) in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parse =
            |s: &str| s.parse::<usize>().map_err(|_| GraphError::Parse(format!("line {lineno}: bad vertex id {s:?}")));
        match fields.as_slice() {
            [u, v] => edges.push((parse(u)?, parse(v)?)),
            _ => return Err(GraphError::Parse(format!("line {lineno}: expected \"u v\", got {line:?}"))),
        }
    }
    Digraph::new(n, edges)
}

pub fn to_edge_list(g: &Digraph) -> String {
    let mut out = format!("{}\n", g.n());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Accepts either format, choosing JSON when the text starts with `{`.
pub fn parse_any(text: &str) -> Result<Digraph, GraphError> {
    if text.trim_start().starts_with('{') {
        let raw: GraphJson = serde_json::from_str(text).map_err(|e| GraphError::Parse(e.to_string()))?;
        Digraph::try_from(raw)
    } else {
        parse_edge_list(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_is_canonical() {
        let g = Digraph::new(3, [(2, 0), (0, 2), (1, 0)]).unwrap();
        assert_eq!(serde_json::to_string(&g).unwrap(), r#"{"n":3,"edges":[[0,2],[1,0],[2,0]]}"#);
        let back: Digraph = serde_json::from_str(r#"{"n":3,"edges":[[2,0],[1,0],[0,2]]}"#).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn json_rejects_invalid_graphs() {
        assert!(serde_json::from_str::<Digraph>(r#"{"n":2,"edges":[[0,0]]}"#).is_err());
        assert!(parse_any(r#"{"n":2,"edges":[[0,5]]}"#).is_err());
    }

    #[test]
    fn edge_list_round_trip() {
        let g = Digraph::new(4, [(0, 1), (3, 2), (1, 0)]).unwrap();
        let text = to_edge_list(&g);
        assert_eq!(text, "4\n0 1\n1 0\n3 2\n");
        assert_eq!(parse_edge_list(&text).unwrap(), g);
        assert_eq!(parse_any("# comment\n2\n\n0 1\n").unwrap(), Digraph::new(2, [(0, 1)]).unwrap());
    }

    #[test]
    fn edge_list_errors_name_the_line() {
        let err = parse_edge_list("3\n0 1\n1 x\n").unwrap_err();
        assert_eq!(err, GraphError::Parse("line 3: bad vertex id \"x\"".into()));
        assert!(parse_edge_list("").is_err());
        assert!(parse_edge_list("3\n0 1 2\n").is_err());
    }
}
