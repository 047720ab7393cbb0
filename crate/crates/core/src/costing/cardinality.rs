use crate::qdag::{JoinPredicate, Relation, Selection};

/// Result size of joining `relations` under independence: the product of their
/// cardinalities times every predicate selectivity whose endpoints are both
/// present and every selection selectivity on a present relation.
pub fn estimate_cardinality(relations: &[&Relation], predicates: &[JoinPredicate], selections: &[Selection]) -> f64 {
    let present = |name: &str| relations.iter().any(|r| r.name == name);
    let base: f64 = relations.iter().map(|r| r.cardinality as f64).product();
    let joins: f64 = predicates
        .iter()
        .filter(|p| present(&p.0) && present(&p.1))
        .map(JoinPredicate::selectivity)
        .product();
    let filters: f64 = selections
        .iter()
        .filter(|s| present(s.relation()))
        .map(Selection::selectivity)
        .product();
    base * joins * filters
}
