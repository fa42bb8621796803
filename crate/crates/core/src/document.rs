//! Machine-readable table documents (JSON and CSV).
//!
//! Counts are decimal strings so no consumer has to cope with integers
//! wider than 64 bits. Field order is fixed by the struct layout, which makes
//! emit → parse → emit byte-stable.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::engine::Engine;
use crate::structure::{Family, StructureSpec};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableMeta {
    pub family: Family,
    pub r: usize,
    pub n: usize,
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m: Option<usize>,
    pub vertex_count: usize,
    pub engine: Engine,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub j: usize,
    pub count: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableDocument {
    pub meta: TableMeta,
    pub rows: Vec<TableRow>,
}

impl TableDocument {
    pub fn new(
        spec: StructureSpec,
        k: usize,
        engine: Engine,
        counts: &[BigUint],
        notes: Vec<String>,
    ) -> Self {
        TableDocument {
            meta: TableMeta {
                family: spec.family(),
                r: spec.r(),
                n: spec.n(),
                k,
                m: spec.m(),
                vertex_count: spec.vertex_count(),
                engine,
                notes,
            },
            rows: counts
                .iter()
                .enumerate()
                .take(spec.vertex_count() + 1)
                .map(|(j, c)| TableRow {
                    j,
                    count: c.to_string(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table documents always serialize")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,count\n");
        for row in &self.rows {
            out.push_str(&format!("{},{}\n", row.j, row.count));
        }
        out
    }

    /// Counts parsed back to integers; `None` if any row is malformed.
    pub fn counts(&self) -> Option<Vec<BigUint>> {
        self.rows.iter().map(|r| r.count.parse().ok()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let counts: Vec<BigUint> = [1u32, 3, 1, 0].into_iter().map(BigUint::from).collect();
        let doc = TableDocument::new(
            StructureSpec::LoosePath { r: 2, n: 2 },
            1,
            Engine::Formula,
            &counts,
            vec![],
        );
        let v: serde_json::Value = serde_json::from_str(&doc.to_json()).unwrap();
        assert_eq!(v["meta"]["family"], "loose-path");
        assert_eq!(v["meta"]["vertex_count"], 3);
        assert_eq!(v["meta"]["engine"], "formula");
        assert!(v["meta"].get("m").is_none());
        assert_eq!(v["rows"][1]["count"], "3");
        assert_eq!(doc.to_csv(), "j,count\n0,1\n1,3\n2,1\n3,0\n");
    }
}
