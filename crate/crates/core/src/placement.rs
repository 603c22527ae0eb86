//! Minimum-cardinality virtualization placement.
//!
//! Given a directed network and a target flow (by default the s-d max
//! flow), pick the fewest nodes to virtualize so that the full target can
//! travel from `s` to `d` while being processed at some chosen node along
//! the way. Feasibility of a fixed node set is a linear program over a
//! two-layer flow: `f0` (unprocessed) and `f1` (processed) share each
//! arc's capacity, interior nodes conserve the joint flow, and processed
//! flow grows only at virtualized nodes, which convert all unprocessed
//! inflow. The source emits the target unprocessed and the destination
//! absorbs it processed.
//!
//! Boundary conditions pinned here (the conservation equations leave them
//! open): unprocessed flow may not enter the source and processed flow may
//! not leave the destination; processed flow is conserved at the source
//! and unprocessed flow at the destination. Without these, a source with
//! spare outgoing capacity could fabricate "processed" flow while dumping
//! its mandated unprocessed emission back into itself, certifying
//! placements that no admissible walk realizes. Walks that legitimately
//! pass through an endpoint mid-route remain expressible.
//!
//! The minimization branches on the binary placement variables — the
//! conversion constraint is bilinear in (k, flow), so each leaf is an LP —
//! with an LP relaxation bound (k in [0,1], conversion at a free node
//! limited to k times its incoming capacity).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;

use crate::graph::{Network, NodeId};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::maxflow;
use crate::rational::{rat, Rational};

/// A placement problem: directed network, endpoints, and the flow value
/// the placement must preserve.
#[derive(Clone, Debug)]
pub struct PlacementInstance {
    net: Network,
    source: NodeId,
    destination: NodeId,
    target_flow: Rational,
}

/// Unprocessed (`f0`) and processed (`f1`) per-arc flow amounts; only
/// nonzero arcs are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TwoLayerFlow {
    pub unprocessed: BTreeMap<(NodeId, NodeId), Rational>,
    pub processed: BTreeMap<(NodeId, NodeId), Rational>,
}

#[derive(Clone, Debug)]
pub struct PlacementResult {
    pub nodes: BTreeSet<NodeId>,
    pub witness: TwoLayerFlow,
    /// True when produced by the exact search, false for the greedy bound.
    pub optimal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlacementError {
    NotDirected,
    EndpointsEqual,
    EndpointOutOfRange,
    TargetExceedsMaxFlow { target: Rational, max_flow: Rational },
    NegativeTarget,
    /// Even virtualizing every candidate cannot deliver the target (e.g.
    /// the max flow needs a direct source-destination arc that no
    /// placement can cover).
    Unachievable,
}

impl fmt::Display for PlacementError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlacementError::NotDirected => write!(f, "placement requires a directed network"),
            PlacementError::EndpointsEqual => write!(f, "source equals destination"),
            PlacementError::EndpointOutOfRange => write!(f, "endpoint not in the network"),
            PlacementError::TargetExceedsMaxFlow { target, max_flow } => {
                write!(f, "target flow {target} exceeds the max flow {max_flow}")
            }
            PlacementError::NegativeTarget => write!(f, "target flow is negative"),
            PlacementError::Unachievable => {
                write!(f, "no placement achieves the target flow")
            }
        }
    }
}

impl std::error::Error for PlacementError {}

impl PlacementInstance {
    /// Instance whose target is the unconstrained max flow.
    pub fn new(net: Network, source: NodeId, destination: NodeId) -> Result<Self, PlacementError> {
        Self::check_endpoints(&net, source, destination)?;
        let target = maxflow::max_flow_value(&net, source, destination);
        Self::with_target(net, source, destination, target)
    }

    /// Instance with an explicit target, which may sit below the max flow.
    pub fn with_target(
        net: Network,
        source: NodeId,
        destination: NodeId,
        target_flow: Rational,
    ) -> Result<Self, PlacementError> {
        Self::check_endpoints(&net, source, destination)?;
        if target_flow < Rational::zero() {
            return Err(PlacementError::NegativeTarget);
        }
        let max_flow = maxflow::max_flow_value(&net, source, destination);
        if target_flow > max_flow {
            return Err(PlacementError::TargetExceedsMaxFlow {
                target: target_flow,
                max_flow,
            });
        }
        Ok(PlacementInstance {
            net,
            source,
            destination,
            target_flow,
        })
    }

    fn check_endpoints(
        net: &Network,
        source: NodeId,
        destination: NodeId,
    ) -> Result<(), PlacementError> {
        if !net.directed() {
            return Err(PlacementError::NotDirected);
        }
        if source.0 >= net.node_count() || destination.0 >= net.node_count() {
            return Err(PlacementError::EndpointOutOfRange);
        }
        if source == destination {
            return Err(PlacementError::EndpointsEqual);
        }
        Ok(())
    }

    pub fn net(&self) -> &Network {
        &self.net
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn destination(&self) -> NodeId {
        self.destination
    }

    pub fn target_flow(&self) -> &Rational {
        &self.target_flow
    }

    /// Virtualization candidates: every node but the endpoints.
    pub fn candidates(&self) -> Vec<NodeId> {
        self.net
            .node_ids()
            .filter(|&v| v != self.source && v != self.destination)
            .collect()
    }
}

/// Variable layout shared by the placement programs: `f0` for edge `e` at
/// index `e`, `f1` at `m + e`.
struct LpShape {
    m: usize,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
}

impl LpShape {
    fn of(net: &Network) -> LpShape {
        let n = net.node_count();
        let mut out_edges = vec![Vec::new(); n];
        let mut in_edges = vec![Vec::new(); n];
        for (i, e) in net.edges().iter().enumerate() {
            out_edges[e.tail.0].push(i);
            in_edges[e.head.0].push(i);
        }
        LpShape {
            m: net.edge_count(),
            out_edges,
            in_edges,
        }
    }

    fn f0(&self, edge: usize) -> usize {
        edge
    }

    fn f1(&self, edge: usize) -> usize {
        self.m + edge
    }
}

/// Adds the rows shared by every placement program: joint conservation at
/// interior nodes, per-arc capacity coupling, the source emission and
/// destination absorption rows (against a flow variable, or the fixed
/// target when `flow_var` is `None`), and the endpoint boundary
/// conditions.
fn add_common_rows(
    lp: &mut LinearProgram,
    inst: &PlacementInstance,
    shape: &LpShape,
    flow_var: Option<usize>,
) {
    let net = &inst.net;
    let s = inst.source.0;
    let d = inst.destination.0;
    for v in 0..net.node_count() {
        if v == s || v == d {
            continue;
        }
        let mut row: Vec<(usize, Rational)> = Vec::new();
        for &e in &shape.in_edges[v] {
            row.push((shape.f0(e), rat(1)));
            row.push((shape.f1(e), rat(1)));
        }
        for &e in &shape.out_edges[v] {
            row.push((shape.f0(e), rat(-1)));
            row.push((shape.f1(e), rat(-1)));
        }
        lp.add_constraint(row, Relation::Eq, Rational::zero());
    }
    for (e, edge) in net.edges().iter().enumerate() {
        lp.add_constraint(
            [(shape.f0(e), rat(1)), (shape.f1(e), rat(1))],
            Relation::Le,
            edge.capacity.clone(),
        );
    }
    // Source: emits the target unprocessed, unprocessed may not return,
    // processed only passes through.
    let mut emit: Vec<(usize, Rational)> = shape.out_edges[s]
        .iter()
        .map(|&e| (shape.f0(e), rat(1)))
        .collect();
    let emit_rhs = match flow_var {
        Some(var) => {
            emit.push((var, rat(-1)));
            Rational::zero()
        }
        None => inst.target_flow.clone(),
    };
    lp.add_constraint(emit, Relation::Eq, emit_rhs);
    for &e in &shape.in_edges[s] {
        lp.set_bounds(shape.f0(e), Rational::zero(), Some(Rational::zero()));
    }
    let mut s_processed: Vec<(usize, Rational)> = Vec::new();
    for &e in &shape.out_edges[s] {
        s_processed.push((shape.f1(e), rat(1)));
    }
    for &e in &shape.in_edges[s] {
        s_processed.push((shape.f1(e), rat(-1)));
    }
    lp.add_constraint(s_processed, Relation::Eq, Rational::zero());
    // Destination: absorbs the target processed, processed may not leave,
    // unprocessed only passes through.
    let mut absorb: Vec<(usize, Rational)> = shape.in_edges[d]
        .iter()
        .map(|&e| (shape.f1(e), rat(1)))
        .collect();
    let absorb_rhs = match flow_var {
        Some(var) => {
            absorb.push((var, rat(-1)));
            Rational::zero()
        }
        None => inst.target_flow.clone(),
    };
    lp.add_constraint(absorb, Relation::Eq, absorb_rhs);
    for &e in &shape.out_edges[d] {
        lp.set_bounds(shape.f1(e), Rational::zero(), Some(Rational::zero()));
    }
    let mut d_unprocessed: Vec<(usize, Rational)> = Vec::new();
    for &e in &shape.in_edges[d] {
        d_unprocessed.push((shape.f0(e), rat(1)));
    }
    for &e in &shape.out_edges[d] {
        d_unprocessed.push((shape.f0(e), rat(-1)));
    }
    lp.add_constraint(d_unprocessed, Relation::Eq, Rational::zero());
}

/// Processed-flow growth at interior nodes for a fully fixed placement:
/// processed out equals processed in, plus all unprocessed in at
/// virtualized nodes.
fn add_conversion_rows(
    lp: &mut LinearProgram,
    inst: &PlacementInstance,
    shape: &LpShape,
    set: &BTreeSet<NodeId>,
) {
    let s = inst.source.0;
    let d = inst.destination.0;
    for v in 0..inst.net.node_count() {
        if v == s || v == d {
            continue;
        }
        let mut row: Vec<(usize, Rational)> = Vec::new();
        for &e in &shape.out_edges[v] {
            row.push((shape.f1(e), rat(1)));
        }
        for &e in &shape.in_edges[v] {
            row.push((shape.f1(e), rat(-1)));
            if set.contains(&NodeId(v)) {
                row.push((shape.f0(e), rat(-1)));
            }
        }
        lp.add_constraint(row, Relation::Eq, Rational::zero());
    }
}

fn extract_witness(inst: &PlacementInstance, solution: &[Rational]) -> TwoLayerFlow {
    let shape = LpShape::of(&inst.net);
    let mut witness = TwoLayerFlow::default();
    for (e, edge) in inst.net.edges().iter().enumerate() {
        let f0 = &solution[shape.f0(e)];
        let f1 = &solution[shape.f1(e)];
        if !f0.is_zero() {
            witness
                .unprocessed
                .insert((edge.tail, edge.head), f0.clone());
        }
        if !f1.is_zero() {
            witness.processed.insert((edge.tail, edge.head), f1.clone());
        }
    }
    witness
}

/// Feasibility of a fixed placement: can the target reach the destination
/// processed when exactly the nodes of `set` convert?
pub fn placement_feasible(
    inst: &PlacementInstance,
    set: &BTreeSet<NodeId>,
) -> Option<TwoLayerFlow> {
    let shape = LpShape::of(&inst.net);
    let mut lp = LinearProgram::new(2 * shape.m);
    add_common_rows(&mut lp, inst, &shape, None);
    add_conversion_rows(&mut lp, inst, &shape, set);
    let solution = lp.feasible()?;
    Some(extract_witness(inst, &solution))
}

/// Best flow value deliverable with placement `set`, capped at the target,
/// plus its witness.
fn achievable_flow(inst: &PlacementInstance, set: &BTreeSet<NodeId>) -> (Rational, TwoLayerFlow) {
    let shape = LpShape::of(&inst.net);
    let flow_var = 2 * shape.m;
    let mut lp = LinearProgram::new(2 * shape.m + 1);
    lp.set_bounds(flow_var, Rational::zero(), Some(inst.target_flow.clone()));
    lp.set_objective(flow_var, rat(1));
    add_common_rows(&mut lp, inst, &shape, Some(flow_var));
    add_conversion_rows(&mut lp, inst, &shape, set);
    match lp.solve() {
        LpOutcome::Optimal { value, solution } => (value, extract_witness(inst, &solution)),
        // Zero flow is always feasible, so neither branch is reachable.
        LpOutcome::Infeasible | LpOutcome::Unbounded => (Rational::zero(), TwoLayerFlow::default()),
    }
}

/// Lower bound on the size of any placement completing the partial
/// assignment, from the LP relaxation: k in [0,1] per free candidate,
/// conversion as an explicit per-node variable bounded by unprocessed
/// inflow and (at free nodes) by k times the incoming capacity. `None`
/// means even the relaxation is infeasible.
fn relaxation_bound(
    inst: &PlacementInstance,
    candidates: &[NodeId],
    assignment: &[Option<bool>],
) -> Option<Rational> {
    let shape = LpShape::of(&inst.net);
    let interior: Vec<usize> = (0..inst.net.node_count())
        .filter(|&v| v != inst.source.0 && v != inst.destination.0)
        .collect();
    let conv_base = 2 * shape.m;
    let conv_index = |v: usize| -> usize {
        conv_base
            + interior
                .iter()
                .position(|&w| w == v)
                .expect("interior node")
    };
    let free: Vec<usize> = candidates
        .iter()
        .zip(assignment.iter())
        .filter(|(_, a)| a.is_none())
        .map(|(c, _)| c.0)
        .collect();
    let k_base = conv_base + interior.len();
    let k_index =
        |v: usize| -> usize { k_base + free.iter().position(|&w| w == v).expect("free node") };
    let mut lp = LinearProgram::new(k_base + free.len());
    add_common_rows(&mut lp, inst, &shape, None);
    for &v in &interior {
        // Processed growth equals the conversion variable, which cannot
        // exceed the unprocessed inflow.
        let mut row: Vec<(usize, Rational)> = vec![(conv_index(v), rat(-1))];
        for &e in &shape.out_edges[v] {
            row.push((shape.f1(e), rat(1)));
        }
        for &e in &shape.in_edges[v] {
            row.push((shape.f1(e), rat(-1)));
        }
        lp.add_constraint(row, Relation::Eq, Rational::zero());
        let mut cap_row: Vec<(usize, Rational)> = vec![(conv_index(v), rat(1))];
        for &e in &shape.in_edges[v] {
            cap_row.push((shape.f0(e), rat(-1)));
        }
        lp.add_constraint(cap_row, Relation::Le, Rational::zero());
    }
    let mut fixed_one_count = 0usize;
    for (c, a) in candidates.iter().zip(assignment.iter()) {
        match a {
            Some(true) => fixed_one_count += 1,
            Some(false) => {
                lp.set_bounds(conv_index(c.0), Rational::zero(), Some(Rational::zero()));
            }
            None => {
                let k = k_index(c.0);
                lp.set_bounds(k, Rational::zero(), Some(rat(1)));
                let cap_in: Rational = shape.in_edges[c.0]
                    .iter()
                    .map(|&e| inst.net.edges()[e].capacity.clone())
                    .fold(Rational::zero(), |a, b| a + b);
                lp.add_constraint(
                    [(conv_index(c.0), rat(1)), (k, -cap_in)],
                    Relation::Le,
                    Rational::zero(),
                );
                // Minimizing the k sum as a maximization of its negation.
                lp.set_objective(k, rat(-1));
            }
        }
    }
    match lp.solve() {
        LpOutcome::Optimal { value, .. } => Some(rat(fixed_one_count as i64) - value),
        LpOutcome::Infeasible => None,
        LpOutcome::Unbounded => unreachable!("relaxation objective is bounded"),
    }
}

/// Exact minimum-cardinality placement via depth-first branch-and-bound.
/// Candidates branch in id order, the greedy result seeds the incumbent,
/// and only strict size improvements replace it, so the returned set is
/// deterministic.
pub fn placement_min(inst: &PlacementInstance) -> Result<PlacementResult, PlacementError> {
    let greedy = placement_greedy(inst)?;
    let candidates = inst.candidates();
    let mut incumbent = (greedy.nodes, greedy.witness);
    let mut assignment: Vec<Option<bool>> = vec![None; candidates.len()];
    branch(inst, &candidates, &mut assignment, 0, &mut incumbent);
    Ok(PlacementResult {
        nodes: incumbent.0,
        witness: incumbent.1,
        optimal: true,
    })
}

fn branch(
    inst: &PlacementInstance,
    candidates: &[NodeId],
    assignment: &mut Vec<Option<bool>>,
    depth: usize,
    incumbent: &mut (BTreeSet<NodeId>, TwoLayerFlow),
) {
    let ones: BTreeSet<NodeId> = candidates
        .iter()
        .zip(assignment.iter())
        .filter(|(_, a)| **a == Some(true))
        .map(|(c, _)| *c)
        .collect();
    // Everything below this node contains at least the current ones.
    if ones.len() >= incumbent.0.len() {
        return;
    }
    if let Some(witness) = placement_feasible(inst, &ones) {
        // Descendants only add nodes; this is the subtree's best.
        *incumbent = (ones, witness);
        return;
    }
    // Infeasible as-is, so the subtree needs at least one more node.
    if ones.len() + 1 >= incumbent.0.len() {
        return;
    }
    match relaxation_bound(inst, candidates, assignment) {
        None => return,
        Some(bound) => {
            if bound > rat(incumbent.0.len() as i64 - 1) {
                return;
            }
        }
    }
    let next = match (depth..candidates.len()).find(|&i| assignment[i].is_none()) {
        Some(i) => i,
        None => return,
    };
    assignment[next] = Some(true);
    branch(inst, candidates, assignment, next + 1, incumbent);
    assignment[next] = Some(false);
    branch(inst, candidates, assignment, next + 1, incumbent);
    assignment[next] = None;
}

/// Greedy upper bound: repeatedly add the candidate that raises the
/// achievable flow the most (ties to the smallest id; a stalled round adds
/// the smallest unused candidate so the search always completes).
pub fn placement_greedy(inst: &PlacementInstance) -> Result<PlacementResult, PlacementError> {
    let candidates = inst.candidates();
    let mut set: BTreeSet<NodeId> = BTreeSet::new();
    let (mut current, mut witness) = achievable_flow(inst, &set);
    while current != inst.target_flow {
        if set.len() == candidates.len() {
            return Err(PlacementError::Unachievable);
        }
        let mut best: Option<(Rational, NodeId, TwoLayerFlow)> = None;
        for &u in candidates.iter().filter(|u| !set.contains(u)) {
            let mut trial = set.clone();
            trial.insert(u);
            let (value, w) = achievable_flow(inst, &trial);
            let better = match &best {
                None => true,
                Some((b, _, _)) => value > *b,
            };
            if better {
                let done = value == inst.target_flow;
                best = Some((value, u, w));
                if done {
                    break;
                }
            }
        }
        let (value, pick, w) = best.expect("unused candidates remain");
        if value > current {
            set.insert(pick);
            current = value;
            witness = w;
        } else {
            // Plateau: no single node helps yet, but a larger set may.
            let fallback = *candidates
                .iter()
                .find(|u| !set.contains(u))
                .expect("unused candidate");
            set.insert(fallback);
            let (value, w) = achievable_flow(inst, &set);
            current = value;
            witness = w;
        }
    }
    Ok(PlacementResult {
        nodes: set,
        witness,
        optimal: false,
    })
}

/// A placement instance produced by the set-cover reduction.
#[derive(Clone, Debug)]
pub struct SetCoverReduction {
    pub instance: PlacementInstance,
    /// Node standing in for each subset, by subset index.
    pub subset_nodes: Vec<NodeId>,
    /// The constructed path for each element (including source and
    /// destination).
    pub element_paths: Vec<Vec<NodeId>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetCoverError {
    UncoveredElement(usize),
    EmptyUniverse,
}

impl fmt::Display for SetCoverError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetCoverError::UncoveredElement(e) => {
                write!(f, "element {e} is covered by no subset")
            }
            SetCoverError::EmptyUniverse => write!(f, "universe must be nonempty"),
        }
    }
}

impl std::error::Error for SetCoverError {}

/// Builds the placement instance whose optimum equals the minimum set
/// cover: one node per subset between a source and a destination, one
/// unit-capacity path per element threading its covering subsets (in index
/// order), with capacities accumulating on shared arcs. The max flow of
/// the result is the universe size, one unit per element.
pub fn setcover_to_placement(
    universe: usize,
    subsets: &[BTreeSet<usize>],
) -> Result<SetCoverReduction, SetCoverError> {
    if universe == 0 {
        return Err(SetCoverError::EmptyUniverse);
    }
    let mut net = Network::new(true);
    let source = net.add_node("s");
    let subset_nodes: Vec<NodeId> = (0..subsets.len())
        .map(|i| net.add_node(format!("u{}", i + 1)))
        .collect();
    let destination = net.add_node("d");
    let mut element_paths = Vec::with_capacity(universe);
    let mut capacities: BTreeMap<(NodeId, NodeId), i64> = BTreeMap::new();
    for element in 0..universe {
        let covering: Vec<NodeId> = subsets
            .iter()
            .enumerate()
            .filter(|(_, s)| s.contains(&element))
            .map(|(i, _)| subset_nodes[i])
            .collect();
        if covering.is_empty() {
            return Err(SetCoverError::UncoveredElement(element));
        }
        let mut path = vec![source];
        path.extend(covering);
        path.push(destination);
        for pair in path.windows(2) {
            *capacities.entry((pair[0], pair[1])).or_insert(0) += 1;
        }
        element_paths.push(path);
    }
    for ((tail, head), cap) in capacities {
        net.add_edge(tail, head, rat(1), rat(cap));
    }
    let instance = PlacementInstance::new(net, source, destination)
        .expect("reduction builds a valid directed instance");
    Ok(SetCoverReduction {
        instance,
        subset_nodes,
        element_paths,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::placement_mesh;
    use crate::verify;

    fn mesh_instance() -> PlacementInstance {
        let (net, s, d) = placement_mesh();
        PlacementInstance::new(net, s, d).unwrap()
    }

    #[test]
    fn mesh_target_defaults_to_max_flow_eight() {
        let inst = mesh_instance();
        assert_eq!(*inst.target_flow(), rat(8));
    }

    #[test]
    fn mesh_single_node_feasibility_is_v6_only() {
        let inst = mesh_instance();
        let v6 = inst.net().node_by_name("v6").unwrap();
        for u in inst.candidates() {
            let feasible = placement_feasible(&inst, &BTreeSet::from([u])).is_some();
            assert_eq!(feasible, u == v6, "node {}", inst.net().name(u));
        }
    }

    #[test]
    fn empty_set_is_infeasible_when_target_positive() {
        let inst = mesh_instance();
        assert!(placement_feasible(&inst, &BTreeSet::new()).is_none());
    }

    #[test]
    fn mesh_optimum_is_v6_alone() {
        let inst = mesh_instance();
        let v6 = inst.net().node_by_name("v6").unwrap();
        let result = placement_min(&inst).unwrap();
        assert_eq!(result.nodes, BTreeSet::from([v6]));
        assert!(result.optimal);
        verify::check_two_layer(
            inst.net(),
            inst.source(),
            inst.destination(),
            &result.nodes,
            inst.target_flow(),
            &result.witness,
        )
        .unwrap();
    }

    #[test]
    fn path_graph_places_its_middle_node() {
        let mut net = Network::new(true);
        let s = net.add_node("s");
        let a = net.add_node("a");
        let d = net.add_node("d");
        net.add_edge(s, a, rat(1), rat(3));
        net.add_edge(a, d, rat(1), rat(3));
        let inst = PlacementInstance::new(net, s, d).unwrap();
        assert_eq!(*inst.target_flow(), rat(3));
        let exact = placement_min(&inst).unwrap();
        assert_eq!(exact.nodes, BTreeSet::from([a]));
        let greedy = placement_greedy(&inst).unwrap();
        assert_eq!(greedy.nodes, BTreeSet::from([a]));
        assert!(!greedy.optimal);
    }

    #[test]
    fn direct_arc_instances_are_unachievable() {
        let mut net = Network::new(true);
        let s = net.add_node("s");
        let d = net.add_node("d");
        net.add_node("side");
        net.add_edge(s, d, rat(1), rat(5));
        let inst = PlacementInstance::new(net, s, d).unwrap();
        assert_eq!(
            placement_min(&inst).unwrap_err(),
            PlacementError::Unachievable
        );
        assert_eq!(
            placement_greedy(&inst).unwrap_err(),
            PlacementError::Unachievable
        );
    }

    #[test]
    fn zero_target_needs_no_placement() {
        let mut net = Network::new(true);
        let s = net.add_node("s");
        let a = net.add_node("a");
        let d = net.add_node("d");
        net.add_edge(s, a, rat(1), rat(2));
        net.add_edge(a, d, rat(1), rat(2));
        let inst = PlacementInstance::with_target(net, s, d, Rational::zero()).unwrap();
        let result = placement_min(&inst).unwrap();
        assert!(result.nodes.is_empty());
    }

    #[test]
    fn target_above_max_flow_is_rejected() {
        let mut net = Network::new(true);
        let s = net.add_node("s");
        let d = net.add_node("d");
        net.add_edge(s, d, rat(1), rat(2));
        let err = PlacementInstance::with_target(net, s, d, rat(3)).unwrap_err();
        assert!(matches!(err, PlacementError::TargetExceedsMaxFlow { .. }));
    }

    #[test]
    fn lowered_target_can_shrink_the_placement() {
        // Two disjoint routes: covering both needs two nodes, half the
        // flow needs one.
        let mut net = Network::new(true);
        let s = net.add_node("s");
        let a = net.add_node("a");
        let b = net.add_node("b");
        let d = net.add_node("d");
        net.add_edge(s, a, rat(1), rat(1));
        net.add_edge(a, d, rat(1), rat(1));
        net.add_edge(s, b, rat(1), rat(1));
        net.add_edge(b, d, rat(1), rat(1));
        let full = PlacementInstance::new(net.clone(), s, d).unwrap();
        assert_eq!(placement_min(&full).unwrap().nodes.len(), 2);
        let half = PlacementInstance::with_target(net, s, d, rat(1)).unwrap();
        assert_eq!(placement_min(&half).unwrap().nodes.len(), 1);
    }

    #[test]
    fn smallest_reduction_is_a_unit_path() {
        let reduction = setcover_to_placement(1, &[BTreeSet::from([0])]).unwrap();
        let inst = &reduction.instance;
        assert_eq!(*inst.target_flow(), rat(1));
        assert_eq!(inst.net().edge_count(), 2);
        let result = placement_min(inst).unwrap();
        assert_eq!(result.nodes.len(), 1);
    }

    #[test]
    fn shared_subset_reduction_has_doubled_capacity() {
        let reduction = setcover_to_placement(2, &[BTreeSet::from([0, 1])]).unwrap();
        let inst = &reduction.instance;
        assert_eq!(*inst.target_flow(), rat(2));
        for e in inst.net().edges() {
            assert_eq!(e.capacity, rat(2));
        }
        assert_eq!(placement_min(inst).unwrap().nodes.len(), 1);
    }

    #[test]
    fn uncovered_element_is_an_error() {
        assert_eq!(
            setcover_to_placement(2, &[BTreeSet::from([0])]).unwrap_err(),
            SetCoverError::UncoveredElement(1)
        );
    }
}
