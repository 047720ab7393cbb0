//! The combined logical AND-OR DAG of a query batch.
//!
//! Equivalence (OR) nodes stand for every expression producing one result;
//! operator (AND) nodes are scans, pushed-down selections, joins and the
//! dummy root that ties the batch together. Join commutativity is folded into
//! a canonical input order, so each unordered split of a relation set appears
//! once. Cross products are never generated.

mod build;
mod signature;

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub use build::{build_dag, MAX_RELATIONS_PER_QUERY};
pub use signature::{canonical_signature, Selection, SelectionKey, Signature};

pub type EqId = usize;
pub type OpId = usize;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Relation {
    pub name: String,
    /// Tuples.
    pub cardinality: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan_cost: Option<f64>,
}

/// `(left, right, selectivity)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JoinPredicate(pub String, pub String, pub f64);

impl JoinPredicate {
    pub fn selectivity(&self) -> f64 {
        self.2
    }

    pub fn connects(&self, a: &str, b: &str) -> bool {
        (self.0 == a && self.1 == b) || (self.0 == b && self.1 == a)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Query {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub relations: Vec<String>,
    #[serde(default)]
    pub predicates: Vec<JoinPredicate>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub selections: Vec<Selection>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum OperatorKind {
    Scan { relation: String },
    Select,
    Join,
    DummyRoot,
}

impl OperatorKind {
    pub fn name(&self) -> &'static str {
        match self {
            OperatorKind::Scan { .. } => "scan",
            OperatorKind::Select => "select",
            OperatorKind::Join => "join",
            OperatorKind::DummyRoot => "root",
        }
    }
}

#[derive(Debug, Clone)]
pub struct EquivalenceNode {
    pub id: EqId,
    pub signature: Signature,
    pub child_ops: Vec<OpId>,
    /// Distinct operators consuming this node.
    pub parent_ops: Vec<OpId>,
}

#[derive(Debug, Clone)]
pub struct OperatorNode {
    pub id: OpId,
    pub kind: OperatorKind,
    /// Canonically ordered; the dummy root keeps one slot per query, duplicates included.
    pub inputs: Vec<EqId>,
    pub output: EqId,
}

/// The expanded, unified DAG. Ids are assigned bottom-up, so every operator's
/// inputs have smaller ids than its output and id order is a topological order.
#[derive(Debug, Clone)]
pub struct QueryDag {
    pub(crate) eqs: Vec<EquivalenceNode>,
    pub(crate) ops: Vec<OperatorNode>,
    pub(crate) root: EqId,
    pub(crate) query_roots: Vec<EqId>,
    pub(crate) relations: Vec<Relation>,
    pub(crate) predicates: Vec<JoinPredicate>,
}

impl QueryDag {
    pub fn eq_nodes(&self) -> &[EquivalenceNode] {
        &self.eqs
    }

    pub fn op_nodes(&self) -> &[OperatorNode] {
        &self.ops
    }

    pub fn eq(&self, id: EqId) -> &EquivalenceNode {
        &self.eqs[id]
    }

    pub fn op(&self, id: OpId) -> &OperatorNode {
        &self.ops[id]
    }

    pub fn root(&self) -> EqId {
        self.root
    }

    pub fn query_roots(&self) -> &[EqId] {
        &self.query_roots
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.relations.iter().find(|r| r.name == name)
    }

    /// Workload-level join predicates, one per connected relation pair.
    pub fn predicates(&self) -> &[JoinPredicate] {
        &self.predicates
    }

    pub fn find(&self, signature: &Signature) -> Option<EqId> {
        self.eqs.iter().position(|e| &e.signature == signature)
    }

    /// Looks up the unselected node over `relations`.
    pub fn find_relations(&self, relations: &[&str]) -> Option<EqId> {
        self.find(&canonical_signature(relations.iter().copied(), &[]))
    }

    pub fn label(&self, id: EqId) -> String {
        self.eqs[id].signature.to_string()
    }

    /// Equivalence nodes reachable from `from`, including itself.
    pub fn descendants(&self, from: EqId) -> BTreeSet<EqId> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![from];
        while let Some(e) = stack.pop() {
            if seen.insert(e) {
                for &op in &self.eqs[e].child_ops {
                    stack.extend(self.ops[op].inputs.iter().copied());
                }
            }
        }
        seen
    }

    /// Graphviz rendering: boxes are equivalence nodes, ellipses operators.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph lqdag {\n  rankdir=BT;\n");
        for e in &self.eqs {
            let _ = writeln!(out, "  e{} [shape=box,label=\"{}\"];", e.id, e.signature);
        }
        for op in &self.ops {
            let label = match &op.kind {
                OperatorKind::Scan { relation } => format!("scan {relation}"),
                OperatorKind::Select => "σ".to_string(),
                OperatorKind::Join => "⋈".to_string(),
                OperatorKind::DummyRoot => "root".to_string(),
            };
            let _ = writeln!(out, "  o{} [shape=ellipse,label=\"{}\"];", op.id, label);
            let _ = writeln!(out, "  o{} -> e{};", op.id, op.output);
            for input in &op.inputs {
                let _ = writeln!(out, "  e{} -> o{};", input, op.id);
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Non-base equivalence nodes that at least two query slots of the batch can
/// consume, in id order. These are the only materialization candidates.
///
/// Query slots are counted with multiplicity, so a query submitted twice makes
/// its whole non-base closure shareable.
pub fn shareable_nodes(dag: &QueryDag) -> Vec<EqId> {
    let mut consumers = vec![0usize; dag.eqs.len()];
    let mut slots: Vec<EqId> = dag.query_roots.clone();
    slots.sort_unstable();
    let mut i = 0;
    while i < slots.len() {
        let root = slots[i];
        let copies = slots[i..].iter().take_while(|&&r| r == root).count();
        for e in dag.descendants(root) {
            consumers[e] += copies;
        }
        i += copies;
    }
    dag.eqs
        .iter()
        .filter(|e| e.id != dag.root && !e.signature.is_base() && consumers[e.id] >= 2)
        .map(|e| e.id)
        .collect()
}
