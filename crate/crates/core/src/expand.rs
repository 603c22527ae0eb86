//! Chain-constrained shortest paths via graph expansion.
//!
//! A network with chain `(phi_1, ..., phi_r)` expands into `r + 1` level
//! copies of every node, where reaching level `i` of a node certifies that
//! the walk so far covers the chain prefix `phi_1..phi_i`. Each original
//! arc `(u, v)` contributes, per tail level `i`, a single arc to the
//! highest head level `j` such that node `v` hosts all of
//! `phi_{i+1}..phi_j`. Pruning then repeatedly drops vertices (other than
//! the designated source and destination) that lack incoming or outgoing
//! arcs. A plain shortest-path search from `(source, t)` to
//! `(destination, r)` — where `t` counts the leading chain functions the
//! source itself hosts — maps back to a cheapest admissible walk.
//!
//! The expanded graph depends only on the topology and the chain, so it is
//! built once and re-searched as arc costs change; [`shortest_path_with`]
//! takes the live costs.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};
use std::fmt;

use num_traits::Zero;

use crate::graph::{chain_orderings, ChainError, Network, NodeId, ServiceChain, Walk};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExpandedVertex {
    pub node: NodeId,
    pub level: usize,
}

#[derive(Clone, Debug)]
pub struct ExpandedArc {
    pub from: usize,
    pub to: usize,
    pub cost: Rational,
    /// Originating edge in the network; `None` for the zero-cost
    /// level-crossing arcs of the layered baseline.
    pub edge: Option<usize>,
}

/// A leveled transformation of a network for one fixed-order chain. Also
/// reused for the layered baseline construction.
#[derive(Clone, Debug)]
pub struct ExpandedGraph {
    levels: usize,
    vertices: Vec<ExpandedVertex>,
    arcs: Vec<ExpandedArc>,
    out: Vec<Vec<usize>>,
    source: usize,
    destination: usize,
    source_level: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExpandError {
    /// The label-setting search requires nonnegative costs.
    NegativeCost { edge: usize },
    InvalidChain(ChainError),
}

impl fmt::Display for ExpandError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpandError::NegativeCost { edge } => write!(f, "edge {edge} has negative cost"),
            ExpandError::InvalidChain(e) => write!(f, "invalid chain: {e}"),
        }
    }
}

impl std::error::Error for ExpandError {}

impl From<ChainError> for ExpandError {
    fn from(e: ChainError) -> Self {
        ExpandError::InvalidChain(e)
    }
}

impl ExpandedGraph {
    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn vertices(&self) -> &[ExpandedVertex] {
        &self.vertices
    }

    pub fn arcs(&self) -> &[ExpandedArc] {
        &self.arcs
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn destination(&self) -> usize {
        self.destination
    }

    /// Leading chain functions already satisfied at the source (`t`).
    pub fn source_level(&self) -> usize {
        self.source_level
    }

    pub fn find_vertex(&self, node: NodeId, level: usize) -> Option<usize> {
        self.vertices
            .iter()
            .position(|v| v.node == node && v.level == level)
    }

    /// Original node of an expanded vertex.
    pub fn back_map(&self, vertex: usize) -> NodeId {
        self.vertices[vertex].node
    }
}

/// Length of the hosted chain run starting at position `from`.
fn hosted_run(chain: &[String], from: usize, hosted: &BTreeSet<String>) -> usize {
    let mut j = from;
    while j < chain.len() && hosted.contains(&chain[j]) {
        j += 1;
    }
    j
}

fn check_costs(net: &Network) -> Result<(), ExpandError> {
    for (i, e) in net.edges().iter().enumerate() {
        if e.cost < Rational::zero() {
            return Err(ExpandError::NegativeCost { edge: i });
        }
    }
    Ok(())
}

/// Initial expansion: `(r + 1) * |V|` vertices and one arc per network arc
/// per tail level. Flexible groups on the chain are ignored; the function
/// order is taken as given.
pub fn build_expanded(net: &Network, sc: &ServiceChain) -> Result<ExpandedGraph, ExpandError> {
    sc.validate(net)?;
    let chain = &sc.functions;
    let levels = chain.len() + 1;
    let n = net.node_count();
    let vertices: Vec<ExpandedVertex> = (0..n)
        .flat_map(|v| {
            (0..levels).map(move |level| ExpandedVertex {
                node: NodeId(v),
                level,
            })
        })
        .collect();
    let index = |node: NodeId, level: usize| node.0 * levels + level;
    let mut arcs = Vec::new();
    let mut out = vec![Vec::new(); vertices.len()];
    for arc in net.arcs() {
        let hosted = net.functions(arc.head);
        for i in 0..levels {
            let j = hosted_run(chain, i, hosted);
            let from = index(arc.tail, i);
            let to = index(arc.head, j);
            out[from].push(arcs.len());
            arcs.push(ExpandedArc {
                from,
                to,
                cost: net.edges()[arc.edge].cost.clone(),
                edge: Some(arc.edge),
            });
        }
    }
    let source_level = hosted_run(chain, 0, net.functions(sc.source));
    Ok(ExpandedGraph {
        levels,
        source: index(sc.source, source_level),
        destination: index(sc.destination, chain.len()),
        source_level,
        vertices,
        arcs,
        out,
    })
}

/// Iteratively removes vertices with no incoming or no outgoing arcs,
/// exempting the source and destination, until none remain. Pruning never
/// changes the shortest source-destination distance.
pub fn prune(eg: &ExpandedGraph) -> ExpandedGraph {
    let n = eg.vertices.len();
    let mut arc_alive = vec![true; eg.arcs.len()];
    let mut alive = vec![true; n];
    let mut in_deg = vec![0usize; n];
    let mut out_deg = vec![0usize; n];
    let mut incoming = vec![Vec::new(); n];
    for (i, arc) in eg.arcs.iter().enumerate() {
        in_deg[arc.to] += 1;
        out_deg[arc.from] += 1;
        incoming[arc.to].push(i);
    }
    let exempt = |v: usize| v == eg.source || v == eg.destination;
    let mut worklist: Vec<usize> = (0..n)
        .filter(|&v| !exempt(v) && (in_deg[v] == 0 || out_deg[v] == 0))
        .collect();
    while let Some(v) = worklist.pop() {
        if !alive[v] || exempt(v) {
            continue;
        }
        alive[v] = false;
        for &a in &eg.out[v] {
            if arc_alive[a] {
                arc_alive[a] = false;
                let to = eg.arcs[a].to;
                in_deg[to] -= 1;
                if in_deg[to] == 0 && alive[to] && !exempt(to) {
                    worklist.push(to);
                }
            }
        }
        for &a in &incoming[v] {
            if arc_alive[a] {
                arc_alive[a] = false;
                let from = eg.arcs[a].from;
                out_deg[from] -= 1;
                if out_deg[from] == 0 && alive[from] && !exempt(from) {
                    worklist.push(from);
                }
            }
        }
    }
    // Compact, preserving the original vertex and arc order.
    let mut remap = vec![usize::MAX; n];
    let mut vertices = Vec::new();
    for (v, vertex) in eg.vertices.iter().enumerate() {
        if alive[v] {
            remap[v] = vertices.len();
            vertices.push(*vertex);
        }
    }
    let mut arcs = Vec::new();
    let mut out = vec![Vec::new(); vertices.len()];
    for (i, arc) in eg.arcs.iter().enumerate() {
        if arc_alive[i] && alive[arc.from] && alive[arc.to] {
            let from = remap[arc.from];
            out[from].push(arcs.len());
            arcs.push(ExpandedArc {
                from,
                to: remap[arc.to],
                cost: arc.cost.clone(),
                edge: arc.edge,
            });
        }
    }
    ExpandedGraph {
        levels: eg.levels,
        source: remap[eg.source],
        destination: remap[eg.destination],
        source_level: eg.source_level,
        vertices,
        arcs,
        out,
    }
}

/// A shortest route through an expanded graph.
#[derive(Clone, Debug)]
pub struct RouteFound {
    pub cost: Rational,
    /// Vertex indices from source to destination.
    pub vertices: Vec<usize>,
    /// Arc indices traversed, one fewer than `vertices`.
    pub arcs: Vec<usize>,
}

/// Label-setting search with caller-supplied arc costs (all nonnegative).
/// Ties resolve by fewer hops, then smallest vertex index, so the result
/// is deterministic.
pub fn shortest_path_with<F>(eg: &ExpandedGraph, arc_cost: F) -> Option<RouteFound>
where
    F: Fn(&ExpandedArc) -> Rational,
{
    let n = eg.vertices.len();
    let mut best: Vec<Option<(Rational, usize)>> = vec![None; n];
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap: BinaryHeap<Reverse<(Rational, usize, usize)>> = BinaryHeap::new();
    best[eg.source] = Some((Rational::zero(), 0));
    heap.push(Reverse((Rational::zero(), 0, eg.source)));
    while let Some(Reverse((cost, hops, v))) = heap.pop() {
        if done[v] {
            continue;
        }
        let current = best[v].clone().expect("queued vertices have labels");
        if (cost.clone(), hops) != current {
            continue;
        }
        done[v] = true;
        if v == eg.destination {
            break;
        }
        for &a in &eg.out[v] {
            let arc = &eg.arcs[a];
            let to = arc.to;
            if done[to] {
                continue;
            }
            let label = (&cost + arc_cost(arc), hops + 1);
            let improves = match &best[to] {
                None => true,
                Some(old) => (label.0.clone(), label.1) < (old.0.clone(), old.1),
            };
            if improves {
                best[to] = Some(label.clone());
                parent[to] = Some(a);
                heap.push(Reverse((label.0, label.1, to)));
            }
        }
    }
    let (cost, _) = best[eg.destination].clone()?;
    let mut vertices = vec![eg.destination];
    let mut arcs = Vec::new();
    let mut v = eg.destination;
    while v != eg.source {
        let a = parent[v].expect("reached vertices have parents");
        arcs.push(a);
        v = eg.arcs[a].from;
        vertices.push(v);
    }
    vertices.reverse();
    arcs.reverse();
    Some(RouteFound {
        cost,
        vertices,
        arcs,
    })
}

/// Search using the arc costs stored in the graph.
pub fn shortest_path(eg: &ExpandedGraph) -> Option<RouteFound> {
    shortest_path_with(eg, |arc| arc.cost.clone())
}

/// Maps a found route back to a network walk; consecutive repeats of a node
/// (the layered baseline's level-crossing arcs) collapse.
pub fn route_to_walk(eg: &ExpandedGraph, route: &RouteFound) -> Walk {
    let mut nodes: Vec<NodeId> = Vec::with_capacity(route.vertices.len());
    for &v in &route.vertices {
        let node = eg.back_map(v);
        if nodes.last() != Some(&node) {
            nodes.push(node);
        }
    }
    Walk {
        nodes,
        cost: route.cost.clone(),
    }
}

/// Cheapest admissible walk for a fixed-order chain, or `None` when the
/// chain cannot be satisfied.
pub fn sfc_shortest_path(net: &Network, sc: &ServiceChain) -> Result<Option<Walk>, ExpandError> {
    check_costs(net)?;
    let eg = prune(&build_expanded(net, sc)?);
    Ok(shortest_path(&eg).map(|route| route_to_walk(&eg, &route)))
}

/// Cheapest admissible walk over every admissible function ordering of the
/// chain; ties between orderings resolve to the earliest one.
pub fn sfc_set_shortest_path(
    net: &Network,
    sc: &ServiceChain,
) -> Result<Option<Walk>, ExpandError> {
    check_costs(net)?;
    let mut best: Option<Walk> = None;
    for ordering in chain_orderings(sc) {
        if let Some(walk) = sfc_shortest_path(net, &ordering)? {
            let better = match &best {
                None => true,
                Some(b) => walk.cost < b.cost,
            };
            if better {
                best = Some(walk);
            }
        }
    }
    Ok(best)
}

/// Baseline construction: `r + 1` full copies of the network, with copy `i`
/// linked to copy `i + 1` by zero-cost arcs at the nodes hosting function
/// `i + 1`. Used for size and correctness comparisons only.
pub fn build_layered(net: &Network, sc: &ServiceChain) -> Result<ExpandedGraph, ExpandError> {
    sc.validate(net)?;
    let chain = &sc.functions;
    let levels = chain.len() + 1;
    let n = net.node_count();
    let vertices: Vec<ExpandedVertex> = (0..n)
        .flat_map(|v| {
            (0..levels).map(move |level| ExpandedVertex {
                node: NodeId(v),
                level,
            })
        })
        .collect();
    let index = |node: NodeId, level: usize| node.0 * levels + level;
    let mut arcs = Vec::new();
    let mut out = vec![Vec::new(); vertices.len()];
    for arc in net.arcs() {
        for level in 0..levels {
            let from = index(arc.tail, level);
            out[from].push(arcs.len());
            arcs.push(ExpandedArc {
                from,
                to: index(arc.head, level),
                cost: net.edges()[arc.edge].cost.clone(),
                edge: Some(arc.edge),
            });
        }
    }
    for (level, function) in chain.iter().enumerate() {
        for v in net.node_ids() {
            if net.hosts(v, function) {
                let from = index(v, level);
                out[from].push(arcs.len());
                arcs.push(ExpandedArc {
                    from,
                    to: index(v, level + 1),
                    cost: Rational::zero(),
                    edge: None,
                });
            }
        }
    }
    Ok(ExpandedGraph {
        levels,
        source: index(sc.source, 0),
        destination: index(sc.destination, chain.len()),
        source_level: 0,
        vertices,
        arcs,
        out,
    })
}

/// `(vertex count, arc count, vertex count + arc count)`.
pub fn graph_size(eg: &ExpandedGraph) -> (usize, usize, usize) {
    (
        eg.vertex_count(),
        eg.arc_count(),
        eg.vertex_count() + eg.arc_count(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::testutil::five_node_demo;

    fn demo_chain() -> (Network, ServiceChain) {
        let (net, v) = five_node_demo();
        let sc = ServiceChain::rigid(v[0], v[4], vec!["phi1".into(), "phi2".into()]);
        (net, sc)
    }

    #[test]
    fn demo_initial_expansion_has_fifteen_vertices_and_twentyone_arcs() {
        let (net, sc) = demo_chain();
        let eg = build_expanded(&net, &sc).unwrap();
        assert_eq!(graph_size(&eg), (15, 21, 36));
        assert_eq!(eg.source_level(), 0);
    }

    #[test]
    fn demo_pruned_expansion_has_seven_vertices_and_nine_arcs() {
        let (net, sc) = demo_chain();
        let eg = prune(&build_expanded(&net, &sc).unwrap());
        assert_eq!(graph_size(&eg), (7, 9, 16));
        // The survivors are exactly these (node, level) pairs.
        let survivors: Vec<(usize, usize)> = eg
            .vertices()
            .iter()
            .map(|v| (v.node.0 + 1, v.level))
            .collect();
        assert_eq!(
            survivors,
            vec![(1, 0), (2, 2), (3, 0), (3, 2), (4, 1), (4, 2), (5, 2)]
        );
    }

    #[test]
    fn pruning_is_idempotent() {
        let (net, sc) = demo_chain();
        let once = prune(&build_expanded(&net, &sc).unwrap());
        let twice = prune(&once);
        assert_eq!(graph_size(&once), graph_size(&twice));
        assert_eq!(once.vertices(), twice.vertices());
    }

    #[test]
    fn demo_shortest_walk_costs_six() {
        let (net, sc) = demo_chain();
        let walk = sfc_shortest_path(&net, &sc).unwrap().unwrap();
        assert_eq!(walk.cost, rat(6));
        let names: Vec<&str> = walk.nodes.iter().map(|&v| net.name(v)).collect();
        assert_eq!(names, vec!["v1", "v3", "v4", "v3", "v5"]);
    }

    #[test]
    fn empty_chain_reduces_to_plain_shortest_path() {
        let (net, v) = five_node_demo();
        let sc = ServiceChain::rigid(v[0], v[4], vec![]);
        let eg = build_expanded(&net, &sc).unwrap();
        assert_eq!(graph_size(&eg).0, net.node_count());
        assert_eq!(graph_size(&eg).1, net.edge_count());
        let walk = sfc_shortest_path(&net, &sc).unwrap().unwrap();
        assert_eq!(walk.cost, rat(2));
        let names: Vec<&str> = walk.nodes.iter().map(|&n| net.name(n)).collect();
        assert_eq!(names, vec!["v1", "v3", "v5"]);
    }

    #[test]
    fn infeasible_chain_returns_none() {
        let (net, v) = five_node_demo();
        let sc = ServiceChain::rigid(v[0], v[4], vec!["missing".into()]);
        assert!(sfc_shortest_path(&net, &sc).unwrap().is_none());
    }

    #[test]
    fn negative_costs_are_rejected() {
        let (mut net, v) = five_node_demo();
        net.add_edge(v[4], v[0], rat(-1), rat(1));
        let sc = ServiceChain::rigid(v[0], v[4], vec!["phi1".into()]);
        assert_eq!(
            sfc_shortest_path(&net, &sc),
            Err(ExpandError::NegativeCost { edge: 7 })
        );
    }

    #[test]
    fn source_hosting_a_prefix_raises_the_source_level() {
        let (mut net, v) = five_node_demo();
        net.add_function(v[0], "phi1");
        let sc = ServiceChain::rigid(v[0], v[4], vec!["phi1".into(), "phi2".into()]);
        let eg = build_expanded(&net, &sc).unwrap();
        assert_eq!(eg.source_level(), 1);
    }

    #[test]
    fn arcs_match_a_direct_rule_evaluation_when_everything_is_hosted() {
        // With every function everywhere, each arc must jump straight to
        // the top level.
        let mut net = Network::new(true);
        let a = net.add_node("a");
        let b = net.add_node("b");
        let c = net.add_node("c");
        for v in [a, b, c] {
            net.add_function(v, "f1");
            net.add_function(v, "f2");
        }
        net.add_edge(a, b, rat(1), rat(1));
        net.add_edge(b, c, rat(1), rat(1));
        let sc = ServiceChain::rigid(a, c, vec!["f1".into(), "f2".into()]);
        let eg = build_expanded(&net, &sc).unwrap();
        for arc in eg.arcs() {
            assert_eq!(eg.vertices()[arc.to].level, 2);
        }
        assert_eq!(eg.source_level(), 2);
    }

    #[test]
    fn layered_baseline_shape_for_demo() {
        let (net, sc) = demo_chain();
        let eg = build_layered(&net, &sc).unwrap();
        assert_eq!(eg.vertex_count(), 15);
        // Three intra-layer copies of the 7 edges plus one crossing arc per
        // hosting node per chain position: phi1 at {v2, v4}, phi2 at
        // {v2, v3}.
        assert_eq!(eg.arc_count(), 21 + 4);
        let walk = shortest_path(&eg).map(|r| route_to_walk(&eg, &r)).unwrap();
        assert_eq!(walk.cost, rat(6));
    }

    #[test]
    fn layered_with_empty_chain_is_the_original_graph() {
        let (net, v) = five_node_demo();
        let sc = ServiceChain::rigid(v[0], v[4], vec![]);
        let eg = build_layered(&net, &sc).unwrap();
        assert_eq!(graph_size(&eg).0, net.node_count());
        assert_eq!(graph_size(&eg).1, net.edge_count());
    }

    #[test]
    fn set_variant_on_rigid_chain_matches_single_search() {
        let (net, sc) = demo_chain();
        let a = sfc_shortest_path(&net, &sc).unwrap().unwrap();
        let b = sfc_set_shortest_path(&net, &sc).unwrap().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn flexible_demo_chain_is_no_worse_than_rigid() {
        let (net, v) = five_node_demo();
        let rigid = ServiceChain::rigid(v[0], v[4], vec!["phi1".into(), "phi2".into()]);
        let flexible =
            ServiceChain::fully_flexible(v[0], v[4], vec!["phi1".into(), "phi2".into()]);
        let rigid_walk = sfc_shortest_path(&net, &rigid).unwrap().unwrap();
        let flexible_walk = sfc_set_shortest_path(&net, &flexible).unwrap().unwrap();
        assert!(flexible_walk.cost <= rigid_walk.cost);
        assert_eq!(rigid_walk.cost, rat(6));
    }

    #[test]
    fn loop_chain_with_shared_endpoints() {
        // Source equals destination with one function elsewhere: the walk
        // must leave and come back.
        let mut net = Network::new(false);
        let a = net.add_node("a");
        let b = net.add_node("b");
        net.add_function(b, "f");
        net.add_edge(a, b, rat(2), rat(1));
        let sc = ServiceChain::rigid(a, a, vec!["f".into()]);
        let walk = sfc_shortest_path(&net, &sc).unwrap().unwrap();
        assert_eq!(walk.cost, rat(4));
        assert_eq!(walk.nodes, vec![a, b, a]);
    }
}
