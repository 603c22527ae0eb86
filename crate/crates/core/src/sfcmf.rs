//! Chain-constrained maximum flow as a segment multicommodity LP.
//!
//! On an undirected graph where each chain function lives at exactly one
//! node, the chain splits the route into segments: source to first host,
//! host to host, last host to destination. Each segment becomes a
//! commodity, every commodity must ship at least `lambda`, and all
//! commodities share each edge's capacity (summing both directions). The
//! LP maximizes `lambda`.
//!
//! Instead of path variables (exponentially many) the LP uses one flow
//! variable per commodity per edge orientation with per-node conservation;
//! flow decomposition gives the same optimum. A commodity whose endpoints
//! coincide is trivially satisfied and enters neither variables nor
//! constraints. Segments may ship more than `lambda` at optimum (the
//! shipping constraint is an inequality); values report the raw LP flows
//! after cancelling opposite orientations within each commodity, which
//! changes neither values nor feasibility.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::graph::{ChainError, Network, NodeId, ServiceChain};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::maxflow::FlowAssignment;
use crate::rational::{rat, Rational};

/// One chain segment, from its shipping endpoint to its receiving one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentCommodity {
    /// 1-based segment index (`1..=r+1`).
    pub index: usize,
    pub from: NodeId,
    pub to: NodeId,
}

#[derive(Clone, Debug)]
pub struct SfcMaxFlowResult {
    pub lambda: Rational,
    /// Every segment with its flow; degenerate segments (equal endpoints)
    /// carry an empty zero-value assignment.
    pub commodities: Vec<(SegmentCommodity, FlowAssignment)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SfcMfError {
    NotUndirected,
    /// A chain function must be hosted at exactly one node.
    AmbiguousHosting { function: String, hosts: usize },
    /// Every segment has coincident endpoints, so no finite maximum
    /// exists.
    DegenerateChain,
    InvalidChain(ChainError),
}

impl fmt::Display for SfcMfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SfcMfError::NotUndirected => {
                write!(f, "chain-constrained max flow is defined on undirected graphs")
            }
            SfcMfError::AmbiguousHosting { function, hosts } => {
                write!(f, "function {function:?} hosted at {hosts} nodes, need exactly 1")
            }
            SfcMfError::DegenerateChain => {
                write!(f, "every segment is degenerate; the flow is unbounded")
            }
            SfcMfError::InvalidChain(e) => write!(f, "invalid chain: {e}"),
        }
    }
}

impl std::error::Error for SfcMfError {}

impl From<ChainError> for SfcMfError {
    fn from(e: ChainError) -> Self {
        SfcMfError::InvalidChain(e)
    }
}

/// The segment endpoints of a chain: source, one host per function, then
/// the destination.
pub fn segment_commodities(
    net: &Network,
    sc: &ServiceChain,
) -> Result<Vec<SegmentCommodity>, SfcMfError> {
    sc.validate(net)?;
    let mut endpoints = vec![sc.source];
    for function in &sc.functions {
        let hosts = net.hosts_of(function);
        if hosts.len() != 1 {
            return Err(SfcMfError::AmbiguousHosting {
                function: function.clone(),
                hosts: hosts.len(),
            });
        }
        endpoints.push(hosts[0]);
    }
    endpoints.push(sc.destination);
    Ok(endpoints
        .windows(2)
        .enumerate()
        .map(|(i, pair)| SegmentCommodity {
            index: i + 1,
            from: pair[0],
            to: pair[1],
        })
        .collect())
}

/// Maximum `lambda` shippable simultaneously along every chain segment.
pub fn sfc_max_flow(net: &Network, sc: &ServiceChain) -> Result<SfcMaxFlowResult, SfcMfError> {
    if net.directed() {
        return Err(SfcMfError::NotUndirected);
    }
    let commodities = segment_commodities(net, sc)?;
    let active: Vec<usize> = commodities
        .iter()
        .enumerate()
        .filter(|(_, c)| c.from != c.to)
        .map(|(i, _)| i)
        .collect();
    if active.is_empty() {
        return Err(SfcMfError::DegenerateChain);
    }
    let m = net.edge_count();
    // Variable 0 is lambda; then per active commodity, two orientations
    // per edge.
    let lambda_var = 0usize;
    let var = |slot: usize, edge: usize, reverse: bool| -> usize {
        1 + slot * 2 * m + 2 * edge + usize::from(reverse)
    };
    let mut lp = LinearProgram::new(1 + active.len() * 2 * m);
    lp.set_objective(lambda_var, rat(1));
    for (slot, &ci) in active.iter().enumerate() {
        let commodity = &commodities[ci];
        // Conservation at every node except the segment endpoints.
        for v in net.node_ids() {
            if v == commodity.from || v == commodity.to {
                continue;
            }
            let mut row: Vec<(usize, Rational)> = Vec::new();
            for (e, edge) in net.edges().iter().enumerate() {
                if edge.head == v {
                    row.push((var(slot, e, false), rat(1)));
                    row.push((var(slot, e, true), rat(-1)));
                } else if edge.tail == v {
                    row.push((var(slot, e, false), rat(-1)));
                    row.push((var(slot, e, true), rat(1)));
                }
            }
            if !row.is_empty() {
                lp.add_constraint(row, Relation::Eq, Rational::zero());
            }
        }
        // Net shipment out of the segment's tail is at least lambda.
        let mut row: Vec<(usize, Rational)> = vec![(lambda_var, rat(-1))];
        for (e, edge) in net.edges().iter().enumerate() {
            if edge.tail == commodity.from {
                row.push((var(slot, e, false), rat(1)));
                row.push((var(slot, e, true), rat(-1)));
            } else if edge.head == commodity.from {
                row.push((var(slot, e, false), rat(-1)));
                row.push((var(slot, e, true), rat(1)));
            }
        }
        lp.add_constraint(row, Relation::Ge, Rational::zero());
    }
    // Shared capacity: both orientations of every commodity on an edge.
    for (e, edge) in net.edges().iter().enumerate() {
        let row: Vec<(usize, Rational)> = active
            .iter()
            .enumerate()
            .flat_map(|(slot, _)| {
                [
                    (var(slot, e, false), rat(1)),
                    (var(slot, e, true), rat(1)),
                ]
            })
            .collect();
        lp.add_constraint(row, Relation::Le, edge.capacity.clone());
    }
    let (lambda, solution) = match lp.solve() {
        LpOutcome::Optimal { value, solution } => (value, solution),
        // Zero flow is feasible and capacities bound lambda.
        LpOutcome::Infeasible | LpOutcome::Unbounded => unreachable!("program is well posed"),
    };
    let mut out = Vec::with_capacity(commodities.len());
    for (i, commodity) in commodities.iter().enumerate() {
        let assignment = match active.iter().position(|&a| a == i) {
            None => FlowAssignment::zero(),
            Some(slot) => {
                let mut arc_flows: BTreeMap<(NodeId, NodeId), Rational> = BTreeMap::new();
                for (e, edge) in net.edges().iter().enumerate() {
                    let forward = solution[var(slot, e, false)].clone();
                    let backward = solution[var(slot, e, true)].clone();
                    // Opposite orientations of one commodity cancel.
                    let net_flow = &forward - &backward;
                    if net_flow.is_zero() {
                        continue;
                    }
                    if net_flow > Rational::zero() {
                        arc_flows.insert((edge.tail, edge.head), net_flow);
                    } else {
                        arc_flows.insert((edge.head, edge.tail), -net_flow);
                    }
                }
                let mut fa = FlowAssignment {
                    value: Rational::zero(),
                    arc_flows,
                };
                fa.value = fa.net_out(commodity.from);
                fa
            }
        };
        out.push((commodity.clone(), assignment));
    }
    Ok(SfcMaxFlowResult {
        lambda,
        commodities: out,
    })
}
