//! JSON documents for kernels, absorbing chains and gambler specs.
//!
//! Rationals travel as strings (`"3/6"`, `"-1"`). Any form is accepted on
//! input; output is always reduced with a positive denominator.
//!
//! ```json
//! { "states": ["1", "2", "3"], "rows": [["1/2", "1/2", "0"], ...],
//!   "win": "3", "coffin": "1", "poset": { "covers": [["2", "3"]] } }
//! { "d": 1, "N": [4], "p": [["1/2", "1/2", "1/2"]], "q": [["1/2", "1/2", "1/2"]] }
//! ```

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gambler::GamblerSpec;
use crate::kernel::{AbsorbingChain, Kernel};
use crate::matrix::Matrix;
use crate::poset::Poset;
use crate::rational::{self, Q};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetDoc {
    /// `(lower, upper)` pairs; the order is their reflexive-transitive closure.
    pub covers: Vec<(String, String)>,
}

impl PosetDoc {
    pub fn from_poset(poset: &Poset) -> PosetDoc {
        PosetDoc {
            covers: poset.cover_pairs(),
        }
    }
}

/// A kernel, optionally with the order it is considered under.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelDoc {
    pub states: Vec<String>,
    pub rows: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poset: Option<PosetDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainDoc {
    pub states: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub win: String,
    pub coffin: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poset: Option<PosetDoc>,
    /// Kernel to check the duality against instead of the computed antidual.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub antidual: Option<KernelDoc>,
    /// Externally quoted winning probabilities, compared for information only.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub reference: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDoc {
    pub d: usize,
    #[serde(rename = "N")]
    pub capitals: Vec<usize>,
    pub p: Vec<Vec<String>>,
    pub q: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    Spec(SpecDoc),
    Chain(ChainDoc),
    Kernel(KernelDoc),
}

fn doc_err(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Document {
        path: path.into(),
        message: message.into(),
    }
}

fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        doc_err(
            format!("line {} column {}", e.line(), e.column()),
            e.to_string(),
        )
    })
}

/// Picks the document kind from its keys: `d` → spec, `win` → chain, else kernel.
pub fn parse_document(text: &str) -> Result<Document> {
    let value: serde_json::Value = from_json(text)?;
    let obj = value
        .as_object()
        .ok_or_else(|| doc_err("document", "expected a JSON object"))?;
    if obj.contains_key("d") {
        from_json(text).map(Document::Spec)
    } else if obj.contains_key("win") {
        from_json(text).map(Document::Chain)
    } else if obj.contains_key("rows") {
        from_json(text).map(Document::Kernel)
    } else {
        Err(doc_err(
            "document",
            "expected a gambler spec (`d`, `N`, `p`, `q`) or a matrix (`states`, `rows`)",
        ))
    }
}

fn parse_cell(text: &str, path: String) -> Result<Q> {
    rational::parse(text).map_err(|m| doc_err(path, m))
}

fn parse_rows(states: &[String], rows: &[Vec<String>], field: &str) -> Result<Matrix> {
    if rows.len() != states.len() {
        return Err(doc_err(
            field,
            format!("{} rows for {} states", rows.len(), states.len()),
        ));
    }
    let parsed = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            if row.len() != states.len() {
                return Err(doc_err(
                    format!("{field}[{i}]"),
                    format!("{} entries for {} states", row.len(), states.len()),
                ));
            }
            row.iter()
                .enumerate()
                .map(|(j, cell)| parse_cell(cell, format!("{field}[{i}][{j}]")))
                .collect()
        })
        .collect::<Result<Vec<Vec<Q>>>>()?;
    Matrix::from_rows(parsed)
}

fn format_rows(m: &Matrix) -> Vec<Vec<String>> {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(rational::format).collect())
        .collect()
}

fn build_poset(doc: Option<&PosetDoc>, elements: &[String]) -> Result<Poset> {
    let doc = doc.ok_or_else(|| doc_err("poset", "missing"))?;
    Poset::from_covers(elements, &doc.covers).map_err(|e| doc_err("poset", e.to_string()))
}

impl KernelDoc {
    pub fn kernel(&self) -> Result<Kernel> {
        let m = parse_rows(&self.states, &self.rows, "rows")?;
        Kernel::classify(self.states.clone(), m).map_err(|e| doc_err("rows", e.to_string()))
    }

    pub fn poset(&self) -> Result<Poset> {
        build_poset(self.poset.as_ref(), &self.states)
    }

    pub fn from_kernel(k: &Kernel) -> KernelDoc {
        KernelDoc {
            states: k.states().to_vec(),
            rows: format_rows(k.matrix()),
            poset: None,
        }
    }
}

impl ChainDoc {
    pub fn chain(&self) -> Result<AbsorbingChain> {
        let m = parse_rows(&self.states, &self.rows, "rows")?;
        let k = Kernel::classify(self.states.clone(), m)
            .map_err(|e| doc_err("rows", e.to_string()))?;
        AbsorbingChain::new(k, &self.win, &self.coffin).map_err(|e| doc_err("chain", e.to_string()))
    }

    /// The order on the non-coffin states.
    pub fn poset(&self) -> Result<Poset> {
        let live: Vec<String> = self
            .states
            .iter()
            .filter(|s| **s != self.coffin)
            .cloned()
            .collect();
        build_poset(self.poset.as_ref(), &live)
    }

    pub fn antidual_kernel(&self) -> Result<Option<Kernel>> {
        self.antidual
            .as_ref()
            .map(|d| {
                let m = parse_rows(&d.states, &d.rows, "antidual.rows")?;
                Kernel::classify(d.states.clone(), m)
                    .map_err(|e| doc_err("antidual.rows", e.to_string()))
            })
            .transpose()
    }

    pub fn references(&self) -> Result<BTreeMap<String, Q>> {
        self.reference
            .iter()
            .map(|(k, v)| Ok((k.clone(), parse_cell(v, format!("reference.{k}"))?)))
            .collect()
    }

    pub fn from_chain(chain: &AbsorbingChain) -> ChainDoc {
        ChainDoc {
            states: chain.states().to_vec(),
            rows: format_rows(chain.kernel().matrix()),
            win: chain.win().to_owned(),
            coffin: chain.coffin().to_owned(),
            poset: None,
            antidual: None,
            reference: BTreeMap::new(),
        }
    }
}

impl SpecDoc {
    pub fn spec(&self) -> Result<GamblerSpec> {
        if self.d != self.capitals.len() {
            return Err(doc_err(
                "N",
                format!("d = {} but N has {} entries", self.d, self.capitals.len()),
            ));
        }
        let tables = |field: &str, tabs: &[Vec<String>]| -> Result<Vec<Vec<Q>>> {
            if tabs.len() != self.d {
                return Err(doc_err(
                    field,
                    format!("{} tables for d = {}", tabs.len(), self.d),
                ));
            }
            tabs.iter()
                .enumerate()
                .map(|(j, t)| {
                    let expected = self.capitals[j].saturating_sub(1);
                    if t.len() != expected {
                        return Err(doc_err(
                            format!("{field}[{j}]"),
                            format!("{} entries, expected N[{j}] - 1 = {expected}", t.len()),
                        ));
                    }
                    t.iter()
                        .enumerate()
                        .map(|(i, c)| parse_cell(c, format!("{field}[{j}][{i}]")))
                        .collect()
                })
                .collect()
        };
        let p = tables("p", &self.p)?;
        let q = tables("q", &self.q)?;
        GamblerSpec::new(self.capitals.clone(), p, q).map_err(|e| doc_err("spec", e.to_string()))
    }

    pub fn from_spec(spec: &GamblerSpec) -> SpecDoc {
        let fmt = |t: &[Q]| t.iter().map(rational::format).collect::<Vec<_>>();
        SpecDoc {
            d: spec.dimension(),
            capitals: spec.capitals().to_vec(),
            p: (0..spec.dimension()).map(|j| fmt(spec.p_table(j))).collect(),
            q: (0..spec.dimension()).map(|j| fmt(spec.q_table(j))).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    const MAZE: &str = r#"{
        "states": ["1", "2", "3", "4", "5"],
        "rows": [
            ["0", "1/2", "0", "1/2", "0"],
            ["2/4", "0", "1/2", "0", "0"],
            ["0", "0", "1", "0", "0"],
            ["1/3", "0", "1/3", "0", "1/3"],
            ["0", "0", "0", "0", "1"]
        ],
        "win": "5",
        "coffin": "3",
        "poset": { "covers": [["1", "2"], ["1", "4"], ["2", "5"], ["4", "5"]] },
        "reference": { "4": "1/7" }
    }"#;

    #[test]
    fn chain_document() {
        let Document::Chain(doc) = parse_document(MAZE).unwrap() else {
            panic!("expected chain");
        };
        let chain = doc.chain().unwrap();
        assert_eq!(chain.coffin(), "3");
        assert_eq!(doc.poset().unwrap().elements(), ["1", "2", "4", "5"]);
        assert_eq!(doc.references().unwrap()["4"], q(1, 7));
        let out = ChainDoc::from_chain(&chain);
        assert_eq!(out.rows[1], ["1/2", "0", "0", "0", "1/2"]);
        assert_eq!(out.states, ["1", "2", "4", "5", "3"]);
    }

    #[test]
    fn spec_document() {
        let text = r#"{"d": 1, "N": [4], "p": [["1/2","1/2","2/4"]], "q": [["1/2","1/2","1/2"]]}"#;
        let Document::Spec(doc) = parse_document(text).unwrap() else {
            panic!("expected spec");
        };
        let spec = doc.spec().unwrap();
        assert_eq!(spec.capitals(), [4]);
        assert_eq!(SpecDoc::from_spec(&spec).p, vec![vec!["1/2"; 3]]);
    }

    #[test]
    fn diagnostics_name_the_field() {
        let bad = r#"{"d": 1, "N": [3], "p": [["1/2","x"]], "q": [["1/2","1/2"]]}"#;
        let Document::Spec(doc) = parse_document(bad).unwrap() else {
            panic!()
        };
        match doc.spec().unwrap_err() {
            Error::Document { path, .. } => assert_eq!(path, "p[0][1]"),
            e => panic!("{e:?}"),
        }

        let short = r#"{"d": 2, "N": [3], "p": [], "q": []}"#;
        let Document::Spec(doc) = parse_document(short).unwrap() else {
            panic!()
        };
        assert!(matches!(doc.spec(), Err(Error::Document { path, .. }) if path == "N"));

        match parse_document("{\n  \"d\": 1,\n  \"N\": [2,\n}").unwrap_err() {
            Error::Document { path, .. } => assert!(path.starts_with("line 4")),
            e => panic!("{e:?}"),
        }

        let ragged = r#"{"states": ["a","b"], "rows": [["1","0"],["1"]]}"#;
        let Document::Kernel(doc) = parse_document(ragged).unwrap() else {
            panic!()
        };
        assert!(matches!(doc.kernel(), Err(Error::Document { path, .. }) if path == "rows[1]"));

        assert!(parse_document("[1, 2]").is_err());
        assert!(parse_document(r#"{"foo": 1}"#).is_err());
        assert!(parse_document(r#"{"d": 1, "N": [1], "p": [[]], "q": [[]], "x": 0}"#).is_err());
    }
}
