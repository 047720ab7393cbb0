use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::costing::CostModel;
use crate::error::{Error, Result};
use crate::qdag::{JoinPredicate, Query, Relation, Selection};
use crate::workload::Workload;

fn cardinality(rng: &mut ChaCha8Rng) -> u64 {
    10f64.powf(rng.gen_range(2.0..5.0)).round() as u64
}

fn selectivity(rng: &mut ChaCha8Rng, a: &Relation, b: &Relation) -> f64 {
    // Roughly key/foreign-key: the result is about as large as the bigger side.
    let s = rng.gen_range(0.5..2.0) / a.cardinality.max(b.cardinality) as f64;
    s.min(1.0)
}

/// A batch of `num_queries` tree-shaped join queries of `num_relations`
/// relations each. All queries share a chain over the first
/// `round(overlap · num_relations)` core relations (at least two when
/// `overlap > 0`); the rest hang off private relations. Priced analytically.
pub fn gen_join_workload(num_queries: usize, num_relations: usize, overlap: f64, seed: u64) -> Result<Workload> {
    if num_queries == 0 || num_relations == 0 {
        return Err(Error::InvalidArgument(
            "queries and relations per query must be positive".into(),
        ));
    }
    if !(0.0..=1.0).contains(&overlap) {
        return Err(Error::InvalidArgument(format!("overlap {overlap} outside [0, 1]")));
    }
    if overlap > 0.0 && num_relations < 2 {
        return Err(Error::InvalidArgument(
            "sharing a join needs at least two relations per query".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let core_size = if overlap > 0.0 {
        ((overlap * num_relations as f64).round() as usize).clamp(2, num_relations)
    } else {
        0
    };

    let mut relations: Vec<Relation> = (0..core_size)
        .map(|i| Relation {
            name: format!("C{i}"),
            cardinality: cardinality(&mut rng),
            scan_cost: None,
        })
        .collect();
    let core_edges: Vec<JoinPredicate> = (1..core_size)
        .map(|i| {
            let s = selectivity(&mut rng, &relations[i - 1], &relations[i]);
            JoinPredicate(relations[i - 1].name.clone(), relations[i].name.clone(), s)
        })
        .collect();

    let mut queries = Vec::with_capacity(num_queries);
    for q in 0..num_queries {
        let mut members: Vec<Relation> = relations[..core_size].to_vec();
        let mut predicates = core_edges.clone();
        let mut selections = Vec::new();
        for j in 0..num_relations - core_size {
            let rel = Relation {
                name: format!("P{q}_{j}"),
                cardinality: cardinality(&mut rng),
                scan_cost: None,
            };
            if !members.is_empty() {
                let parent = &members[rng.gen_range(0..members.len())];
                let s = selectivity(&mut rng, parent, &rel);
                predicates.push(JoinPredicate(parent.name.clone(), rel.name.clone(), s));
            }
            if rng.gen_bool(0.25) {
                selections.push(Selection(rel.name.clone(), rng.gen_range(0.05..0.9)));
            }
            members.push(rel.clone());
            relations.push(rel);
        }
        queries.push(Query {
            name: Some(format!("Q{q}")),
            relations: members.iter().map(|r| r.name.clone()).collect(),
            predicates,
            selections,
        });
    }

    let workload = Workload {
        relations,
        queries,
        cost_model: CostModel::default(),
        seed: Some(seed),
    };
    workload.validate()?;
    Ok(workload)
}
