use std::collections::{BTreeMap, HashMap};

use super::{
    canonical_signature, EqId, EquivalenceNode, JoinPredicate, OpId, OperatorKind, OperatorNode, Query, QueryDag,
    Relation, Selection, Signature,
};
use crate::error::{Error, Result};

/// Per-query limit for the connected-subset expansion.
pub const MAX_RELATIONS_PER_QUERY: usize = 20;

#[derive(Default)]
struct Builder {
    eqs: Vec<EquivalenceNode>,
    ops: Vec<OperatorNode>,
    by_signature: HashMap<Signature, EqId>,
    op_keys: HashMap<(EqId, String, Vec<EqId>), OpId>,
}

impl Builder {
    fn node(&mut self, signature: Signature) -> EqId {
        if let Some(&id) = self.by_signature.get(&signature) {
            return id;
        }
        let id = self.eqs.len();
        self.by_signature.insert(signature.clone(), id);
        self.eqs.push(EquivalenceNode {
            id,
            signature,
            child_ops: Vec::new(),
            parent_ops: Vec::new(),
        });
        id
    }

    fn op(&mut self, output: EqId, kind: OperatorKind, mut inputs: Vec<EqId>) -> OpId {
        if kind == OperatorKind::Join {
            let eqs = &self.eqs;
            inputs.sort_by(|a, b| eqs[*a].signature.cmp(&eqs[*b].signature));
        }
        let tag = match &kind {
            OperatorKind::Scan { relation } => format!("scan:{relation}"),
            other => other.name().to_string(),
        };
        let key = (output, tag, inputs.clone());
        if let Some(&id) = self.op_keys.get(&key) {
            return id;
        }
        let id = self.ops.len();
        self.op_keys.insert(key, id);
        for &input in &inputs {
            let parents = &mut self.eqs[input].parent_ops;
            if !parents.contains(&id) {
                parents.push(id);
            }
        }
        self.eqs[output].child_ops.push(id);
        self.ops.push(OperatorNode {
            id,
            kind,
            inputs,
            output,
        });
        id
    }
}

fn connected(mask: u32, adjacency: &[u32]) -> bool {
    if mask == 0 {
        return false;
    }
    let mut reached = mask & mask.wrapping_neg();
    loop {
        let mut next = reached;
        let mut bits = reached;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            next |= adjacency[i] & mask;
            bits &= bits - 1;
        }
        if next == reached {
            return reached == mask;
        }
        reached = next;
    }
}

fn check_selectivity(value: f64, path: &str) -> Result<()> {
    if value > 0.0 && value <= 1.0 {
        Ok(())
    } else {
        Err(Error::workload(path, format!("selectivity {value} is outside (0, 1]")))
    }
}

fn validate_relations(relations: &[Relation]) -> Result<BTreeMap<&str, &Relation>> {
    let mut by_name = BTreeMap::new();
    for (i, r) in relations.iter().enumerate() {
        if r.name.is_empty() {
            return Err(Error::workload(format!("relations[{i}].name"), "empty relation name"));
        }
        if r.cardinality == 0 {
            return Err(Error::workload(
                format!("relations[{i}].cardinality"),
                "cardinality must be positive",
            ));
        }
        if let Some(cost) = r.scan_cost {
            if cost < 0.0 || !cost.is_finite() {
                return Err(Error::workload(
                    format!("relations[{i}].scan_cost"),
                    "scan cost must be non-negative",
                ));
            }
        }
        if by_name.insert(r.name.as_str(), r).is_some() {
            return Err(Error::workload(
                format!("relations[{i}].name"),
                format!("duplicate relation {}", r.name),
            ));
        }
    }
    Ok(by_name)
}

/// Expands every query of the batch by join associativity and commutativity,
/// unifies common subexpressions across queries and adds the dummy root.
pub fn build_dag(relations: &[Relation], queries: &[Query]) -> Result<QueryDag> {
    let known = validate_relations(relations)?;
    if queries.is_empty() {
        return Err(Error::workload("queries", "the batch has no queries"));
    }

    let mut predicates: BTreeMap<(String, String), f64> = BTreeMap::new();
    let mut builder = Builder::default();
    let mut query_roots = Vec::with_capacity(queries.len());

    for (qi, query) in queries.iter().enumerate() {
        let path = format!("queries[{qi}]");
        if query.relations.is_empty() {
            return Err(Error::workload(format!("{path}.relations"), "query has no relations"));
        }
        if query.relations.len() > MAX_RELATIONS_PER_QUERY {
            return Err(Error::TooLarge {
                what: "query expansion",
                size: query.relations.len(),
                limit: MAX_RELATIONS_PER_QUERY,
            });
        }
        let mut names: Vec<&str> = Vec::with_capacity(query.relations.len());
        for (ri, name) in query.relations.iter().enumerate() {
            if !known.contains_key(name.as_str()) {
                return Err(Error::workload(
                    format!("{path}.relations[{ri}]"),
                    format!("unknown relation {name}"),
                ));
            }
            if names.contains(&name.as_str()) {
                return Err(Error::workload(
                    format!("{path}.relations[{ri}]"),
                    format!("relation {name} listed twice"),
                ));
            }
            names.push(name);
        }
        names.sort_unstable();
        let index = |name: &str| names.iter().position(|n| *n == name);

        let m = names.len();
        let mut adjacency = vec![0u32; m];
        for (pi, JoinPredicate(a, b, sel)) in query.predicates.iter().enumerate() {
            let ppath = format!("{path}.predicates[{pi}]");
            let (Some(ia), Some(ib)) = (index(a), index(b)) else {
                return Err(Error::workload(
                    ppath,
                    format!("predicate {a}-{b} references a relation outside the query"),
                ));
            };
            if ia == ib {
                return Err(Error::workload(ppath, "self-join predicates are not supported"));
            }
            check_selectivity(*sel, &ppath)?;
            let pair = if a < b {
                (a.clone(), b.clone())
            } else {
                (b.clone(), a.clone())
            };
            if let Some(prev) = predicates.insert(pair, *sel) {
                if prev != *sel {
                    return Err(Error::workload(
                        ppath,
                        format!("predicate {a}-{b} has selectivity {sel} here but {prev} elsewhere in the batch"),
                    ));
                }
            }
            adjacency[ia] |= 1 << ib;
            adjacency[ib] |= 1 << ia;
        }

        let mut local_sels: Vec<Vec<Selection>> = vec![Vec::new(); m];
        for (si, sel) in query.selections.iter().enumerate() {
            let spath = format!("{path}.selections[{si}]");
            let Some(i) = index(sel.relation()) else {
                return Err(Error::workload(
                    spath,
                    format!("selection on {} outside the query", sel.relation()),
                ));
            };
            check_selectivity(sel.selectivity(), &spath)?;
            local_sels[i].push(sel.clone());
        }

        let full = if m == 32 { u32::MAX } else { (1u32 << m) - 1 };
        if !connected(full, &adjacency) {
            return Err(Error::workload(
                format!("{path}.predicates"),
                "the join graph is not connected",
            ));
        }

        let mut node_of: HashMap<u32, EqId> = HashMap::new();
        for i in 0..m {
            let base = builder.node(canonical_signature([names[i]], &[]));
            builder.op(
                base,
                OperatorKind::Scan {
                    relation: names[i].to_string(),
                },
                Vec::new(),
            );
            let leaf = if local_sels[i].is_empty() {
                base
            } else {
                let filtered = builder.node(canonical_signature([names[i]], &local_sels[i]));
                builder.op(filtered, OperatorKind::Select, vec![base]);
                filtered
            };
            node_of.insert(1 << i, leaf);
        }

        let mut subsets: Vec<u32> = (1..=full)
            .filter(|s| s.count_ones() >= 2 && connected(*s, &adjacency))
            .collect();
        subsets.sort_by_key(|s| (s.count_ones(), *s));
        for mask in subsets {
            let members: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
            let sels: Vec<Selection> = members.iter().flat_map(|&i| local_sels[i].iter().cloned()).collect();
            let node = builder.node(canonical_signature(members.iter().map(|&i| names[i]), &sels));
            let low = mask & mask.wrapping_neg();
            let rest = mask & !low;
            // Enumerate left sides containing the lowest member so each unordered split appears once.
            let mut sub = rest;
            loop {
                let left = sub | low;
                let right = mask & !left;
                if right != 0 && connected(left, &adjacency) && connected(right, &adjacency) {
                    let inputs = vec![node_of[&left], node_of[&right]];
                    builder.op(node, OperatorKind::Join, inputs);
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & rest;
            }
            node_of.insert(mask, node);
        }
        query_roots.push(node_of[&full]);
    }

    // Nodes unify by relation set, so every query must join on the full predicate set induced on it.
    for (qi, query) in queries.iter().enumerate() {
        for (a, b) in predicates.keys() {
            let mentions = |r: &String| query.relations.contains(r);
            if mentions(a) && mentions(b) && !query.predicates.iter().any(|p| p.connects(a, b)) {
                return Err(Error::workload(
                    format!("queries[{qi}].predicates"),
                    format!("missing predicate {a}-{b} declared elsewhere in the batch"),
                ));
            }
        }
    }

    let root = builder.node(Signature::root());
    builder.op(root, OperatorKind::DummyRoot, query_roots.clone());

    Ok(QueryDag {
        eqs: builder.eqs,
        ops: builder.ops,
        root,
        query_roots,
        relations: relations.to_vec(),
        predicates: predicates
            .into_iter()
            .map(|((a, b), sel)| JoinPredicate(a, b, sel))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qdag::shareable_nodes;

    fn rels(names: &[&str]) -> Vec<Relation> {
        names
            .iter()
            .map(|n| Relation {
                name: n.to_string(),
                cardinality: 1000,
                scan_cost: None,
            })
            .collect()
    }

    fn query(names: &[&str], edges: &[(&str, &str)]) -> Query {
        Query {
            name: None,
            relations: names.iter().map(|s| s.to_string()).collect(),
            predicates: edges
                .iter()
                .map(|(a, b)| JoinPredicate(a.to_string(), b.to_string(), 0.01))
                .collect(),
            selections: Vec::new(),
        }
    }

    fn clique(names: &[&str]) -> Query {
        let mut edges = Vec::new();
        for (i, a) in names.iter().enumerate() {
            for b in &names[i + 1..] {
                edges.push((*a, *b));
            }
        }
        query(names, &edges)
    }

    fn joins(dag: &QueryDag, id: EqId) -> usize {
        dag.eq(id)
            .child_ops
            .iter()
            .filter(|&&o| dag.op(o).kind == OperatorKind::Join)
            .count()
    }

    #[test]
    fn three_way_clique_expansion() {
        let dag = build_dag(&rels(&["A", "B", "C"]), &[clique(&["A", "B", "C"])]).unwrap();
        // 7 subsets plus the dummy root
        assert_eq!(dag.eq_nodes().len(), 8);
        for set in [
            &["A"][..],
            &["B"],
            &["C"],
            &["A", "B"],
            &["A", "C"],
            &["B", "C"],
            &["A", "B", "C"],
        ] {
            assert!(dag.find_relations(set).is_some(), "missing {set:?}");
        }
        let abc = dag.find_relations(&["A", "B", "C"]).unwrap();
        assert_eq!(joins(&dag, abc), 3);
    }

    #[test]
    fn clique_counts_match_closed_form() {
        for m in 1..=6usize {
            let names: Vec<String> = (0..m).map(|i| format!("R{i}")).collect();
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            let dag = build_dag(&rels(&refs), &[clique(&refs)]).unwrap();
            let expected_nodes = (1usize << m) - 1;
            let expected_joins: usize = (1u32..1 << m).map(|s| (1usize << (s.count_ones() - 1)) - 1).sum();
            assert_eq!(dag.eq_nodes().len() - 1, expected_nodes);
            let join_ops = dag.op_nodes().iter().filter(|o| o.kind == OperatorKind::Join).count();
            assert_eq!(join_ops, expected_joins);
        }
    }

    #[test]
    fn batch_shares_the_common_join() {
        let dag = build_dag(
            &rels(&["A", "B", "C", "D"]),
            &[
                query(&["A", "B", "C"], &[("A", "B"), ("B", "C")]),
                query(&["B", "C", "D"], &[("B", "C"), ("C", "D")]),
            ],
        )
        .unwrap();
        let bc = dag.find_relations(&["B", "C"]).unwrap();
        let abc = dag.find_relations(&["A", "B", "C"]).unwrap();
        let bcd = dag.find_relations(&["B", "C", "D"]).unwrap();
        let parent_outputs: Vec<EqId> = dag.eq(bc).parent_ops.iter().map(|&o| dag.op(o).output).collect();
        assert!(parent_outputs.contains(&abc));
        assert!(parent_outputs.contains(&bcd));
        assert_eq!(shareable_nodes(&dag), vec![bc]);
    }

    #[test]
    fn single_relation_query() {
        let dag = build_dag(&rels(&["A"]), &[query(&["A"], &[])]).unwrap();
        assert_eq!(dag.eq_nodes().len(), 2);
        let kinds: Vec<&str> = dag.op_nodes().iter().map(|o| o.kind.name()).collect();
        assert_eq!(kinds, vec!["scan", "root"]);
        assert!(shareable_nodes(&dag).is_empty());
    }

    #[test]
    fn two_relation_query_has_nothing_to_share() {
        let dag = build_dag(&rels(&["A", "B"]), &[query(&["A", "B"], &[("A", "B")])]).unwrap();
        assert!(shareable_nodes(&dag).is_empty());
    }

    #[test]
    fn duplicated_query_makes_its_closure_shareable() {
        let q = clique(&["A", "B", "C"]);
        let dag = build_dag(&rels(&["A", "B", "C"]), &[q.clone(), q]).unwrap();
        let non_base: Vec<EqId> = dag
            .eq_nodes()
            .iter()
            .filter(|e| e.id != dag.root() && !e.signature.is_base())
            .map(|e| e.id)
            .collect();
        assert_eq!(non_base.len(), 4);
        assert_eq!(shareable_nodes(&dag), non_base);
        assert_eq!(dag.query_roots()[0], dag.query_roots()[1]);
    }

    #[test]
    fn selections_sit_on_their_own_nodes() {
        let mut q = query(&["A", "B"], &[("A", "B")]);
        q.selections.push(Selection("A".into(), 0.5));
        let dag = build_dag(&rels(&["A", "B"]), &[q]).unwrap();
        // A, σA, B, σA⋈B, root
        assert_eq!(dag.eq_nodes().len(), 5);
        let selected = dag
            .find(&canonical_signature(["A"], &[Selection("A".into(), 0.5)]))
            .unwrap();
        let op = dag.op(dag.eq(selected).child_ops[0]);
        assert_eq!(op.kind, OperatorKind::Select);
        assert_eq!(op.inputs, vec![dag.find_relations(&["A"]).unwrap()]);
    }

    #[test]
    fn disconnected_query_is_rejected() {
        let err = build_dag(&rels(&["A", "B", "C"]), &[query(&["A", "B", "C"], &[("A", "B")])]).unwrap_err();
        assert!(matches!(err, Error::Workload { ref path, .. } if path == "queries[0].predicates"));
    }

    #[test]
    fn validation_names_the_path() {
        let err = build_dag(&rels(&["A"]), &[query(&["A", "Z"], &[])]).unwrap_err();
        assert!(matches!(err, Error::Workload { ref path, .. } if path == "queries[0].relations[1]"));
        let err = build_dag(&rels(&["A"]), &[]).unwrap_err();
        assert!(matches!(err, Error::Workload { ref path, .. } if path == "queries"));
        let mut q = query(&["A", "B"], &[("A", "B")]);
        q.predicates[0].2 = 0.0;
        let err = build_dag(&rels(&["A", "B"]), &[q]).unwrap_err();
        assert!(matches!(err, Error::Workload { ref path, .. } if path == "queries[0].predicates[0]"));
    }

    #[test]
    fn inconsistent_predicates_are_rejected() {
        let q1 = query(&["A", "B"], &[("A", "B")]);
        let mut q2 = query(&["A", "B"], &[("B", "A")]);
        q2.predicates[0].2 = 0.5;
        assert!(build_dag(&rels(&["A", "B"]), &[q1, q2]).is_err());
    }

    #[test]
    fn induced_predicates_are_required() {
        let q1 = query(&["A", "B", "C"], &[("A", "B"), ("B", "C"), ("A", "C")]);
        let q2 = query(&["A", "B", "C"], &[("A", "B"), ("B", "C")]);
        let err = build_dag(&rels(&["A", "B", "C"]), &[q1, q2]).unwrap_err();
        assert!(matches!(err, Error::Workload { ref path, .. } if path == "queries[1].predicates"));
    }

    #[test]
    fn structure_is_topological_and_alternating() {
        let dag = build_dag(
            &rels(&["A", "B", "C", "D"]),
            &[clique(&["A", "B", "C", "D"]), clique(&["B", "C", "D"])],
        )
        .unwrap();
        for op in dag.op_nodes() {
            assert!(op.inputs.iter().all(|&i| i < op.output));
            match op.kind {
                OperatorKind::Join => assert_eq!(op.inputs.len(), 2),
                OperatorKind::Scan { .. } => assert!(op.inputs.is_empty()),
                OperatorKind::Select => assert_eq!(op.inputs.len(), 1),
                OperatorKind::DummyRoot => assert_eq!(op.inputs.len(), 2),
            }
        }
        let sigs: std::collections::HashSet<_> = dag.eq_nodes().iter().map(|e| e.signature.clone()).collect();
        assert_eq!(sigs.len(), dag.eq_nodes().len());
        assert_eq!(dag.descendants(dag.root()).len(), dag.eq_nodes().len());
        assert!(dag.to_dot().starts_with("digraph"));
    }
}
