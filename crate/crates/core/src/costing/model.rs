use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::cardinality::estimate_cardinality;
use crate::error::{Error, Result};
use crate::qdag::{EqId, OperatorKind, QueryDag, Relation, Selection};

/// How operator, read and write costs are obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum CostModel {
    /// Explicit prices, keyed by node.
    Fixture(FixtureCosts),
    /// Per-block constants applied to estimated result sizes.
    Analytical(AnalyticalParams),
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel::Analytical(AnalyticalParams::default())
    }
}

/// Either one price for every node or a per-node table with an optional fallback.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PriceTable {
    Flat(f64),
    Table {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        default: Option<f64>,
        /// Keyed by [`Signature::key`](crate::qdag::Signature::key), e.g. `"B,C"`.
        #[serde(default)]
        nodes: BTreeMap<String, f64>,
    },
}

impl PriceTable {
    pub fn lookup(&self, key: &str) -> Option<f64> {
        match self {
            PriceTable::Flat(v) => Some(*v),
            PriceTable::Table { default, nodes } => nodes.get(key).copied().or(*default),
        }
    }

    fn values(&self) -> Vec<f64> {
        match self {
            PriceTable::Flat(v) => vec![*v],
            PriceTable::Table { default, nodes } => default.iter().chain(nodes.values()).copied().collect(),
        }
    }
}

/// Join prices are per output node, whichever split produces it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureCosts {
    /// Keyed by relation name. A relation's own `scan_cost` takes precedence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<PriceTable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub select: Option<PriceTable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub join: Option<PriceTable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub materialize_write: Option<PriceTable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub materialized_read: Option<PriceTable>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalyticalParams {
    pub read_cost_per_block: f64,
    pub write_cost_per_block: f64,
    /// Charged once per base-relation scan.
    pub seek_cost: f64,
    pub cpu_cost_per_block: f64,
    pub block_size_bytes: f64,
    pub tuple_width_bytes: f64,
}

impl Default for AnalyticalParams {
    fn default() -> Self {
        AnalyticalParams {
            read_cost_per_block: 2.0,
            write_cost_per_block: 4.0,
            seek_cost: 10.0,
            cpu_cost_per_block: 0.2,
            block_size_bytes: 4096.0,
            tuple_width_bytes: 100.0,
        }
    }
}

impl AnalyticalParams {
    /// Blocks occupied by `tuples` rows, never less than one.
    pub fn blocks(&self, tuples: f64) -> f64 {
        (tuples * self.tuple_width_bytes / self.block_size_bytes)
            .ceil()
            .max(1.0)
    }

    /// Block nested loops with the smaller outer side, plus CPU over the output.
    pub fn join_cost(&self, left: f64, right: f64, out: f64) -> f64 {
        let nested = |outer: f64, inner: f64| self.read_cost_per_block * (outer + outer * inner);
        nested(left, right).min(nested(right, left)) + self.cpu_cost_per_block * out
    }
}

/// Concrete prices for one DAG.
#[derive(Debug, Clone)]
pub struct Prices {
    pub op: Vec<f64>,
    pub read: Vec<Option<f64>>,
    pub write: Vec<Option<f64>>,
    pub(crate) labels: Vec<String>,
}

impl Prices {
    pub fn read_cost(&self, e: EqId) -> Result<f64> {
        self.read[e].ok_or_else(|| Error::MissingCost {
            kind: "materialized_read",
            node: self.labels[e].clone(),
        })
    }

    pub fn write_cost(&self, e: EqId) -> Result<f64> {
        self.write[e].ok_or_else(|| Error::MissingCost {
            kind: "materialize_write",
            node: self.labels[e].clone(),
        })
    }
}

fn check_price(kind: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::workload(
            format!("cost_model.{kind}"),
            format!("cost {v} must be finite and non-negative"),
        ))
    }
}

impl CostModel {
    /// Rejects negative or non-finite constants.
    pub fn validate(&self) -> Result<()> {
        match self {
            CostModel::Fixture(f) => {
                let tables = [
                    ("scan", &f.scan),
                    ("select", &f.select),
                    ("join", &f.join),
                    ("materialize_write", &f.materialize_write),
                    ("materialized_read", &f.materialized_read),
                ];
                for (kind, table) in tables {
                    for v in table.iter().flat_map(PriceTable::values) {
                        check_price(kind, v)?;
                    }
                }
            }
            CostModel::Analytical(p) => {
                for (kind, v) in [
                    ("read_cost_per_block", p.read_cost_per_block),
                    ("write_cost_per_block", p.write_cost_per_block),
                    ("seek_cost", p.seek_cost),
                    ("cpu_cost_per_block", p.cpu_cost_per_block),
                ] {
                    check_price(kind, v)?;
                }
                for (kind, v) in [
                    ("block_size_bytes", p.block_size_bytes),
                    ("tuple_width_bytes", p.tuple_width_bytes),
                ] {
                    if v <= 0.0 || !v.is_finite() {
                        return Err(Error::workload(format!("cost_model.{kind}"), "must be positive"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Prices every operator of `dag` and, where available, every node's read and write.
    pub fn price(&self, dag: &QueryDag) -> Result<Prices> {
        self.validate()?;
        let labels: Vec<String> = dag.eq_nodes().iter().map(|e| e.signature.to_string()).collect();
        let n_eq = dag.eq_nodes().len();
        let mut prices = Prices {
            op: vec![0.0; dag.op_nodes().len()],
            read: vec![None; n_eq],
            write: vec![None; n_eq],
            labels,
        };
        match self {
            CostModel::Fixture(fixture) => price_fixture(fixture, dag, &mut prices)?,
            CostModel::Analytical(params) => price_analytical(params, dag, &mut prices),
        }
        Ok(prices)
    }
}

fn scan_override(dag: &QueryDag, relation: &str) -> Option<f64> {
    dag.relation(relation).and_then(|r| r.scan_cost)
}

fn price_fixture(fixture: &FixtureCosts, dag: &QueryDag, prices: &mut Prices) -> Result<()> {
    let lookup = |table: &Option<PriceTable>, key: &str| table.as_ref().and_then(|t| t.lookup(key));
    for op in dag.op_nodes() {
        let out = dag.eq(op.output);
        let key = out.signature.key();
        let missing = |kind| Error::MissingCost {
            kind,
            node: out.signature.to_string(),
        };
        prices.op[op.id] = match &op.kind {
            OperatorKind::Scan { relation } => scan_override(dag, relation)
                .or_else(|| lookup(&fixture.scan, relation))
                .ok_or_else(|| missing("scan"))?,
            OperatorKind::Select => lookup(&fixture.select, &key).ok_or_else(|| missing("select"))?,
            OperatorKind::Join => lookup(&fixture.join, &key).ok_or_else(|| missing("join"))?,
            OperatorKind::DummyRoot => 0.0,
        };
    }
    for e in dag.eq_nodes() {
        let key = e.signature.key();
        prices.read[e.id] = lookup(&fixture.materialized_read, &key);
        prices.write[e.id] = lookup(&fixture.materialize_write, &key);
    }
    Ok(())
}

fn node_blocks(params: &AnalyticalParams, dag: &QueryDag) -> Vec<f64> {
    dag.eq_nodes()
        .iter()
        .map(|e| {
            if e.signature.is_root() {
                return 0.0;
            }
            let relations: Vec<&Relation> = e.signature.relations().iter().filter_map(|r| dag.relation(r)).collect();
            let selections: Vec<Selection> = e
                .signature
                .selections()
                .iter()
                .map(|s| Selection(s.relation.clone(), s.selectivity()))
                .collect();
            params.blocks(estimate_cardinality(&relations, dag.predicates(), &selections))
        })
        .collect()
}

fn price_analytical(params: &AnalyticalParams, dag: &QueryDag, prices: &mut Prices) {
    let blocks = node_blocks(params, dag);
    for op in dag.op_nodes() {
        prices.op[op.id] = match &op.kind {
            OperatorKind::Scan { relation } => scan_override(dag, relation)
                .unwrap_or(params.seek_cost + params.read_cost_per_block * blocks[op.output]),
            OperatorKind::Select => params.cpu_cost_per_block * blocks[op.inputs[0]],
            OperatorKind::Join => params.join_cost(blocks[op.inputs[0]], blocks[op.inputs[1]], blocks[op.output]),
            OperatorKind::DummyRoot => 0.0,
        };
    }
    for e in dag.eq_nodes() {
        if !e.signature.is_root() {
            prices.read[e.id] = Some(params.read_cost_per_block * blocks[e.id]);
            prices.write[e.id] = Some(params.write_cost_per_block * blocks[e.id]);
        }
    }
}
