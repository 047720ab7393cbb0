use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::model::{CostModel, Prices};
use crate::error::{Error, Result};
use crate::qdag::{EqId, OpId, QueryDag};

/// How a node's result is obtained by its consumers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NodeChoice {
    Compute { op: OpId },
    Read,
}

/// The argmin decisions of one DP run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanChoice {
    /// Per equivalence node, what a consumer does to obtain it.
    pub use_choice: Vec<NodeChoice>,
    /// Per materialized node, the operator that computes it before it is written.
    pub materialized: BTreeMap<EqId, OpId>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeCost {
    pub id: EqId,
    pub label: String,
    /// Cheapest way for a consumer to obtain the node.
    pub cost: f64,
    /// Cheapest way to compute it, reading materialized nodes below.
    pub compute_cost: f64,
    pub choice: NodeChoice,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaterializedCost {
    pub id: EqId,
    pub label: String,
    pub compute_cost: f64,
    pub write_cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostReport {
    pub total: f64,
    pub use_cost: f64,
    pub materialization_cost: f64,
    pub materialized: Vec<MaterializedCost>,
    pub nodes: Vec<NodeCost>,
    #[serde(skip)]
    pub plan: PlanChoice,
}

struct Solved {
    dp: Vec<f64>,
    compute: Vec<f64>,
    best_op: Vec<OpId>,
    choice: Vec<NodeChoice>,
}

/// A priced DAG ready to answer best-cost queries for any materialized set.
#[derive(Debug, Clone)]
pub struct Costing {
    dag: Arc<QueryDag>,
    prices: Prices,
}

impl Costing {
    pub fn new(dag: Arc<QueryDag>, model: &CostModel) -> Result<Self> {
        let prices = model.price(&dag)?;
        Ok(Costing { dag, prices })
    }

    pub fn dag(&self) -> &Arc<QueryDag> {
        &self.dag
    }

    pub fn prices(&self) -> &Prices {
        &self.prices
    }

    fn membership(&self, s: &[EqId]) -> Result<Vec<bool>> {
        let mut member = vec![false; self.dag.eq_nodes().len()];
        for &e in s {
            if e >= member.len() || e == self.dag.root() {
                return Err(Error::InvalidArgument(format!("node {e} cannot be materialized")));
            }
            member[e] = true;
        }
        Ok(member)
    }

    fn solve(&self, member: &[bool]) -> Result<Solved> {
        let n = member.len();
        let mut solved = Solved {
            dp: vec![0.0; n],
            compute: vec![0.0; n],
            best_op: vec![0; n],
            choice: vec![NodeChoice::Read; n],
        };
        // Ids are a topological order, so every input is final before its consumers.
        for node in self.dag.eq_nodes() {
            let e = node.id;
            let mut best = f64::INFINITY;
            let mut best_op = None;
            for &o in &node.child_ops {
                let op = self.dag.op(o);
                let cost = self.prices.op[o] + op.inputs.iter().map(|&i| solved.dp[i]).sum::<f64>();
                if cost < best {
                    best = cost;
                    best_op = Some(o);
                }
            }
            let best_op = best_op.expect("every equivalence node has an operator");
            solved.compute[e] = best;
            solved.best_op[e] = best_op;
            solved.dp[e] = best;
            solved.choice[e] = NodeChoice::Compute { op: best_op };
            if member[e] {
                let read = self.prices.read_cost(e)?;
                if read < best {
                    solved.dp[e] = read;
                    solved.choice[e] = NodeChoice::Read;
                }
            }
        }
        Ok(solved)
    }

    fn materialization(&self, member: &[bool], solved: &Solved) -> Result<f64> {
        let mut total = 0.0;
        for e in (0..member.len()).filter(|&e| member[e]) {
            total += solved.compute[e] + self.prices.write_cost(e)?;
        }
        Ok(total)
    }

    /// Cost of answering the batch when the nodes of `s` are available to read,
    /// with the argmin plan. Nothing is charged for producing `s`.
    pub fn best_use_cost(&self, s: &[EqId]) -> Result<(f64, PlanChoice)> {
        let member = self.membership(s)?;
        let solved = self.solve(&member)?;
        let plan = self.plan(&member, &solved);
        Ok((solved.dp[self.dag.root()], plan))
    }

    /// Cost of computing and writing every node of `s`, each one exploiting
    /// the members of `s` below it.
    pub fn materialization_cost(&self, s: &[EqId]) -> Result<f64> {
        let member = self.membership(s)?;
        let solved = self.solve(&member)?;
        self.materialization(&member, &solved)
    }

    /// `best_use_cost + materialization_cost` without building a report.
    pub fn total_cost(&self, s: &[EqId]) -> Result<f64> {
        let member = self.membership(s)?;
        let solved = self.solve(&member)?;
        Ok(solved.dp[self.dag.root()] + self.materialization(&member, &solved)?)
    }

    pub fn best_cost(&self, s: &[EqId]) -> Result<CostReport> {
        let member = self.membership(s)?;
        let solved = self.solve(&member)?;
        let use_cost = solved.dp[self.dag.root()];
        let materialization_cost = self.materialization(&member, &solved)?;
        let materialized = (0..member.len())
            .filter(|&e| member[e])
            .map(|e| {
                Ok(MaterializedCost {
                    id: e,
                    label: self.dag.label(e),
                    compute_cost: solved.compute[e],
                    write_cost: self.prices.write_cost(e)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let nodes = self
            .dag
            .eq_nodes()
            .iter()
            .map(|node| NodeCost {
                id: node.id,
                label: node.signature.to_string(),
                cost: solved.dp[node.id],
                compute_cost: solved.compute[node.id],
                choice: solved.choice[node.id],
            })
            .collect();
        Ok(CostReport {
            total: use_cost + materialization_cost,
            use_cost,
            materialization_cost,
            materialized,
            nodes,
            plan: self.plan(&member, &solved),
        })
    }

    fn plan(&self, member: &[bool], solved: &Solved) -> PlanChoice {
        PlanChoice {
            use_choice: solved.choice.clone(),
            materialized: (0..member.len())
                .filter(|&e| member[e])
                .map(|e| (e, solved.best_op[e]))
                .collect(),
        }
    }
}

impl PlanChoice {
    /// Prices the plan by walking it as a tree from the dummy root, charging
    /// every use separately, and returns `(use_cost, materialization_cost)`.
    pub fn recost(&self, costing: &Costing) -> Result<(f64, f64)> {
        if self.use_choice.len() != costing.dag().eq_nodes().len() {
            return Err(Error::InvalidArgument("plan does not match the DAG".into()));
        }
        let use_cost = self.walk(costing, costing.dag().root())?;
        let mut materialization = 0.0;
        for (&s, &op) in &self.materialized {
            materialization += self.apply(costing, op, s)? + costing.prices().write_cost(s)?;
        }
        Ok((use_cost, materialization))
    }

    fn walk(&self, costing: &Costing, e: EqId) -> Result<f64> {
        match self.use_choice[e] {
            NodeChoice::Read if self.materialized.contains_key(&e) => costing.prices().read_cost(e),
            NodeChoice::Read => Err(Error::InvalidArgument(format!("node {e} is read but not materialized"))),
            NodeChoice::Compute { op } => self.apply(costing, op, e),
        }
    }

    fn apply(&self, costing: &Costing, op: OpId, expected: EqId) -> Result<f64> {
        let node = costing.dag().op(op);
        if node.output != expected {
            return Err(Error::InvalidArgument(format!(
                "operator {op} does not produce node {expected}"
            )));
        }
        let mut cost = costing.prices().op[op];
        for &i in &node.inputs {
            cost += self.walk(costing, i)?;
        }
        Ok(cost)
    }
}
