//! Wire format for triangulated surfaces.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Dir {
    #[serde(rename = "+")]
    Forward,
    #[serde(rename = "-")]
    Backward,
}

impl Dir {
    pub fn is_forward(self) -> bool {
        self == Dir::Forward
    }

    fn symbol(self) -> &'static str {
        match self {
            Dir::Forward => "+",
            Dir::Backward => "-",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub id: String,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SideRecord {
    pub edge: String,
    pub dir: Dir,
}

impl SideRecord {
    pub fn new(edge: &str, forward: bool) -> Self {
        SideRecord { edge: edge.to_string(), dir: if forward { Dir::Forward } else { Dir::Backward } }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriangleRecord {
    pub sides: [SideRecord; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceDescription {
    pub edges: Vec<EdgeRecord>,
    pub triangles: Vec<TriangleRecord>,
}

fn quote(s: &str) -> String {
    serde_json::to_string(s).expect("string serialization")
}

impl SurfaceDescription {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Edges sorted by id, triangles in stored order, lengths in `{:.16e}`.
    pub fn to_canonical_json(&self) -> String {
        let mut edges: Vec<&EdgeRecord> = self.edges.iter().collect();
        edges.sort_by(|a, b| a.id.cmp(&b.id));
        let mut out = String::from("{\n  \"edges\": [\n");
        for (i, e) in edges.iter().enumerate() {
            let sep = if i + 1 < edges.len() { "," } else { "" };
            out.push_str(&format!(
                "    {{\"id\": {}, \"length\": {:.16e}}}{sep}\n",
                quote(&e.id),
                e.length
            ));
        }
        out.push_str("  ],\n  \"triangles\": [\n");
        for (i, t) in self.triangles.iter().enumerate() {
            let sides: Vec<String> = t
                .sides
                .iter()
                .map(|s| format!("{{\"edge\": {}, \"dir\": \"{}\"}}", quote(&s.edge), s.dir.symbol()))
                .collect();
            let sep = if i + 1 < self.triangles.len() { "," } else { "" };
            out.push_str(&format!("    {{\"sides\": [{}]}}{sep}\n", sides.join(", ")));
        }
        out.push_str("  ]\n}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_rejects() {
        let ok = r#"{"edges":[{"id":"x","length":0.5}],"triangles":[]}"#;
        assert_eq!(SurfaceDescription::from_json(ok).unwrap().edges[0].length, 0.5);
        let bad_dir = r#"{"edges":[],"triangles":[{"sides":[{"edge":"x","dir":"*"},{"edge":"x","dir":"+"},{"edge":"x","dir":"+"}]}]}"#;
        assert!(matches!(SurfaceDescription::from_json(bad_dir), Err(Error::Parse(_))));
        assert!(SurfaceDescription::from_json("{").is_err());
    }

    #[test]
    fn canonical_digits() {
        let d = SurfaceDescription {
            edges: vec![
                EdgeRecord { id: "b".into(), length: 0.1 },
                EdgeRecord { id: "a\"q".into(), length: 2.0 },
            ],
            triangles: vec![],
        };
        let text = d.to_canonical_json();
        assert!(text.contains(r#"{"id": "a\"q", "length": 2.0000000000000000e0}"#));
        assert!(text.contains("1.0000000000000001e-1"));
        let back = SurfaceDescription::from_json(&text).unwrap();
        assert_eq!(back.edges[1].length, 0.1);
    }
}
