use std::fmt;

use serde::{Deserialize, Serialize};

/// A selection pushed down onto a base relation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Selection(pub String, pub f64);

impl Selection {
    pub fn relation(&self) -> &str {
        &self.0
    }

    pub fn selectivity(&self) -> f64 {
        self.1
    }

    fn key(&self) -> SelectionKey {
        SelectionKey {
            relation: self.0.clone(),
            selectivity_bits: self.1.to_bits(),
        }
    }
}

/// Exact, orderable identity of a selection.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SelectionKey {
    pub relation: String,
    selectivity_bits: u64,
}

impl SelectionKey {
    pub fn selectivity(&self) -> f64 {
        f64::from_bits(self.selectivity_bits)
    }
}

/// Canonical key of an equivalence node: its relation set plus the selections
/// applied below it, both sorted. Two expressions unify iff their keys are equal.
///
/// The empty signature is reserved for the dummy root.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    relations: Vec<String>,
    selections: Vec<SelectionKey>,
}

impl Signature {
    pub(crate) fn root() -> Self {
        Signature {
            relations: Vec::new(),
            selections: Vec::new(),
        }
    }

    pub fn is_root(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn relations(&self) -> &[String] {
        &self.relations
    }

    pub fn selections(&self) -> &[SelectionKey] {
        &self.selections
    }

    /// A single unfiltered relation.
    pub fn is_base(&self) -> bool {
        self.relations.len() == 1 && self.selections.is_empty()
    }

    /// Plain-text key used by fixture cost tables, e.g. `B,C` or `A,B|A=0.5`.
    pub fn key(&self) -> String {
        if self.is_root() {
            return "<root>".to_string();
        }
        let mut key = self.relations.join(",");
        if !self.selections.is_empty() {
            key.push('|');
            let sels: Vec<String> = self
                .selections
                .iter()
                .map(|s| format!("{}={}", s.relation, s.selectivity()))
                .collect();
            key.push_str(&sels.join(","));
        }
        key
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_root() {
            return f.write_str("<root>");
        }
        let parts: Vec<String> = self
            .relations
            .iter()
            .map(|r| {
                let sels: Vec<String> = self
                    .selections
                    .iter()
                    .filter(|s| &s.relation == r)
                    .map(|s| s.selectivity().to_string())
                    .collect();
                if sels.is_empty() {
                    r.clone()
                } else {
                    format!("σ[{}]({r})", sels.join(","))
                }
            })
            .collect();
        f.write_str(&parts.join("⋈"))
    }
}

/// Order-independent signature of a relation set and its selections.
pub fn canonical_signature<'a, R>(relations: R, selections: &[Selection]) -> Signature
where
    R: IntoIterator<Item = &'a str>,
{
    let mut relations: Vec<String> = relations.into_iter().map(str::to_string).collect();
    relations.sort();
    relations.dedup();
    let mut selections: Vec<SelectionKey> = selections.iter().map(Selection::key).collect();
    selections.sort();
    selections.dedup();
    Signature { relations, selections }
}
