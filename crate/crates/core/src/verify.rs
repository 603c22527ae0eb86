//! Independent constraint re-checkers.
//!
//! These walk the raw network and a result object and re-evaluate every
//! invariant from scratch — conservation, capacity, value accounting, and
//! chain admissibility — sharing no code with the solvers they audit.
//! All comparisons are exact; there are no tolerances.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::graph::{Network, NodeId, ServiceChain, Walk};
use crate::maxflow::FlowAssignment;
use crate::placement::TwoLayerFlow;
use crate::rational::Rational;

fn edge_lookup(net: &Network) -> BTreeMap<(NodeId, NodeId), usize> {
    let mut index = BTreeMap::new();
    for (i, e) in net.edges().iter().enumerate() {
        index.insert((e.tail, e.head), i);
        if !net.directed() {
            index.insert((e.head, e.tail), i);
        }
    }
    index
}

/// Re-checks a flow assignment: flows sit on real arcs and are
/// nonnegative, per-edge capacity holds (summing both orientations of an
/// undirected edge), flow is conserved at every node outside
/// `{source, destination} ∪ exempt`, and the net emission at the source
/// and absorption at the destination both equal the stated value.
pub fn check_flow(
    net: &Network,
    fa: &FlowAssignment,
    source: NodeId,
    destination: NodeId,
    exempt: &[NodeId],
) -> Result<(), Vec<String>> {
    let mut problems = Vec::new();
    let index = edge_lookup(net);
    let mut per_edge: BTreeMap<usize, Rational> = BTreeMap::new();
    let mut net_out: BTreeMap<NodeId, Rational> = BTreeMap::new();
    for ((tail, head), amount) in &fa.arc_flows {
        if amount < &Rational::zero() {
            problems.push(format!(
                "negative flow {amount} on ({}, {})",
                net.name(*tail),
                net.name(*head)
            ));
        }
        match index.get(&(*tail, *head)) {
            None => problems.push(format!(
                "flow on nonexistent arc ({}, {})",
                net.name(*tail),
                net.name(*head)
            )),
            Some(&e) => {
                *per_edge.entry(e).or_insert_with(Rational::zero) += amount;
            }
        }
        *net_out.entry(*tail).or_insert_with(Rational::zero) += amount;
        *net_out.entry(*head).or_insert_with(Rational::zero) -= amount;
    }
    for (e, total) in &per_edge {
        let cap = &net.edges()[*e].capacity;
        if total > cap {
            problems.push(format!("edge {e} carries {total} over capacity {cap}"));
        }
    }
    for v in net.node_ids() {
        if v == source || v == destination || exempt.contains(&v) {
            continue;
        }
        let net_v = net_out.get(&v).cloned().unwrap_or_else(Rational::zero);
        if !net_v.is_zero() {
            problems.push(format!(
                "conservation violated at {} (net {net_v})",
                net.name(v)
            ));
        }
    }
    let out_s = net_out.get(&source).cloned().unwrap_or_else(Rational::zero);
    if out_s != fa.value {
        problems.push(format!(
            "source ships {out_s}, stated value {}",
            fa.value
        ));
    }
    let into_d = -net_out
        .get(&destination)
        .cloned()
        .unwrap_or_else(Rational::zero);
    if into_d != fa.value {
        problems.push(format!(
            "destination receives {into_d}, stated value {}",
            fa.value
        ));
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(problems)
    }
}

/// Joint capacity check across several assignments sharing one network
/// (for per-commodity flows coupled on the same edges).
pub fn check_joint_capacity(net: &Network, flows: &[&FlowAssignment]) -> Result<(), Vec<String>> {
    let index = edge_lookup(net);
    let mut per_edge: BTreeMap<usize, Rational> = BTreeMap::new();
    let mut problems = Vec::new();
    for fa in flows {
        for ((tail, head), amount) in &fa.arc_flows {
            match index.get(&(*tail, *head)) {
                None => problems.push(format!(
                    "flow on nonexistent arc ({}, {})",
                    net.name(*tail),
                    net.name(*head)
                )),
                Some(&e) => *per_edge.entry(e).or_insert_with(Rational::zero) += amount,
            }
        }
    }
    for (e, total) in &per_edge {
        let cap = &net.edges()[*e].capacity;
        if total > cap {
            problems.push(format!(
                "edge {e} carries {total} across commodities, capacity {cap}"
            ));
        }
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(problems)
    }
}

/// Re-checks a two-layer placement witness against the directed network:
/// nonnegativity, shared capacity per arc, joint conservation at interior
/// nodes, processed growth exactly at the virtualized nodes, source
/// emission, and destination absorption — each evaluated directly from the
/// arc maps.
pub fn check_two_layer(
    net: &Network,
    source: NodeId,
    destination: NodeId,
    virtualized: &BTreeSet<NodeId>,
    target: &Rational,
    flow: &TwoLayerFlow,
) -> Result<(), Vec<String>> {
    let mut problems = Vec::new();
    if !net.directed() {
        problems.push("two-layer flows are defined on directed networks".to_string());
        return Err(problems);
    }
    let mut arc_index: BTreeMap<(NodeId, NodeId), usize> = BTreeMap::new();
    for (i, e) in net.edges().iter().enumerate() {
        arc_index.insert((e.tail, e.head), i);
    }
    for (label, layer) in [("unprocessed", &flow.unprocessed), ("processed", &flow.processed)] {
        for ((tail, head), amount) in layer {
            if amount < &Rational::zero() {
                problems.push(format!(
                    "negative {label} flow on ({}, {})",
                    net.name(*tail),
                    net.name(*head)
                ));
            }
            if !arc_index.contains_key(&(*tail, *head)) {
                problems.push(format!(
                    "{label} flow on nonexistent arc ({}, {})",
                    net.name(*tail),
                    net.name(*head)
                ));
            }
        }
    }
    let zero = Rational::zero;
    let amount_on = |layer: &BTreeMap<(NodeId, NodeId), Rational>, tail: NodeId, head: NodeId| {
        layer.get(&(tail, head)).cloned().unwrap_or_else(zero)
    };
    for e in net.edges() {
        let used = amount_on(&flow.unprocessed, e.tail, e.head)
            + amount_on(&flow.processed, e.tail, e.head);
        if used > e.capacity {
            problems.push(format!(
                "arc ({}, {}) carries {used} over capacity {}",
                net.name(e.tail),
                net.name(e.head),
                e.capacity
            ));
        }
    }
    for v in net.node_ids() {
        let mut in0 = Rational::zero();
        let mut in1 = Rational::zero();
        let mut out0 = Rational::zero();
        let mut out1 = Rational::zero();
        for e in net.edges() {
            if e.head == v {
                in0 += amount_on(&flow.unprocessed, e.tail, e.head);
                in1 += amount_on(&flow.processed, e.tail, e.head);
            }
            if e.tail == v {
                out0 += amount_on(&flow.unprocessed, e.tail, e.head);
                out1 += amount_on(&flow.processed, e.tail, e.head);
            }
        }
        if v == source {
            if out0 != *target {
                problems.push(format!(
                    "source emits {out0} unprocessed, target {target}"
                ));
            }
            continue;
        }
        if v == destination {
            if in1 != *target {
                problems.push(format!(
                    "destination absorbs {in1} processed, target {target}"
                ));
            }
            continue;
        }
        if &in0 + &in1 != &out0 + &out1 {
            problems.push(format!(
                "joint conservation violated at {}",
                net.name(v)
            ));
        }
        let expected_out1 = if virtualized.contains(&v) {
            &in1 + &in0
        } else {
            in1.clone()
        };
        if out1 != expected_out1 {
            problems.push(format!(
                "processed flow at {} is {out1}, expected {expected_out1}",
                net.name(v)
            ));
        }
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(problems)
    }
}

/// Replays the per-node function sets along a walk and reports whether it
/// starts at the chain's source, ends at its destination, traverses only
/// real arcs, and covers the chain functions in order. Greedy maximal
/// application at each visited node is optimal, since a larger covered
/// prefix only ever helps.
pub fn walk_satisfies_chain(net: &Network, sc: &ServiceChain, walk: &Walk) -> bool {
    let index = edge_lookup(net);
    if walk.nodes.first() != Some(&sc.source) || walk.nodes.last() != Some(&sc.destination) {
        return false;
    }
    for pair in walk.nodes.windows(2) {
        if !index.contains_key(&(pair[0], pair[1])) {
            return false;
        }
    }
    let mut progress = 0;
    for &v in &walk.nodes {
        while progress < sc.functions.len() && net.hosts(v, &sc.functions[progress]) {
            progress += 1;
        }
    }
    progress == sc.functions.len()
}

/// Recomputes a walk's cost from the network's edge costs; `None` when the
/// walk leaves the graph.
pub fn walk_cost(net: &Network, walk: &Walk) -> Option<Rational> {
    let index = edge_lookup(net);
    let mut total = Rational::zero();
    for pair in walk.nodes.windows(2) {
        let e = index.get(&(pair[0], pair[1]))?;
        total += &net.edges()[*e].cost;
    }
    Some(total)
}
