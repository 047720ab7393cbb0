//! The workload file: relations, a query batch and a cost model.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::costing::{BenefitOracle, CostModel, Costing};
use crate::error::{Error, Result};
use crate::qdag::{build_dag, Query, QueryDag, Relation};

const EXAMPLE_ONE: &str = include_str!("../workloads/example1.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Workload {
    pub relations: Vec<Relation>,
    pub queries: Vec<Query>,
    #[serde(default)]
    pub cost_model: CostModel,
    /// Seed the workload was generated from, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// A validated workload with its DAG, prices and benefit oracle.
#[derive(Debug, Clone)]
pub struct PreparedWorkload {
    pub dag: Arc<QueryDag>,
    pub costing: Arc<Costing>,
    pub benefit: Arc<BenefitOracle>,
}

impl Workload {
    /// Parses and validates. Malformed JSON is a [`Error::Json`]; well-formed
    /// JSON of the wrong shape carries the path of the offending value.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let workload: Workload = serde_path_to_error::deserialize(de).map_err(|err| {
            let path = err.path().to_string();
            let path = if path == "." { "<root>".to_string() } else { path };
            let inner = err.into_inner();
            if inner.is_data() {
                Error::workload(path, inner.to_string())
            } else {
                Error::Json(inner.to_string())
            }
        })?;
        workload.validate()?;
        Ok(workload)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|err| Error::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("workloads always serialize")
    }

    /// The two-query batch sharing `B⋈C`, with unit-style fixture prices.
    pub fn example_one() -> Self {
        Self::from_json(EXAMPLE_ONE).expect("bundled workload is valid")
    }

    pub fn validate(&self) -> Result<()> {
        self.cost_model.validate()?;
        build_dag(&self.relations, &self.queries).map(|_| ())
    }

    pub fn dag(&self) -> Result<QueryDag> {
        build_dag(&self.relations, &self.queries)
    }

    /// Builds the DAG, prices it and sets up the benefit oracle over the shareable nodes.
    pub fn prepare(&self) -> Result<PreparedWorkload> {
        let dag = Arc::new(self.dag()?);
        let costing = Arc::new(Costing::new(Arc::clone(&dag), &self.cost_model)?);
        let benefit = Arc::new(BenefitOracle::new(Arc::clone(&costing))?);
        Ok(PreparedWorkload { dag, costing, benefit })
    }
}
