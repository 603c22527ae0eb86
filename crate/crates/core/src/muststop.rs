//! Maximum flow through one must-stop node on an undirected graph.
//!
//! The value of the largest flow that can travel from `s` to `d` while
//! every unit passes through `t` is the minimum of three plain max-flow
//! quantities: half the flow from `t` into a helper node attached to both
//! `s` and `d` at non-binding capacity, the `s`-`t` max flow, and the
//! `t`-`d` max flow. The realization re-attaches the helper at capacity
//! equal to that value, runs a max flow from `t`, and reverses the
//! source-side paths of its decomposition so everything flows
//! `s -> t -> d`.
//!
//! "Non-binding" capacity is the sum of all edge capacities plus one —
//! finite, so the solver stays exact. With integral capacities every
//! intermediate flow here is integral (denominators are cleared inside the
//! max-flow solver), and the value itself is a multiple of one half.

use std::fmt;

use num_traits::Zero;

use crate::graph::{Network, NodeId};
use crate::maxflow::{self, FlowAssignment};
use crate::rational::{rat, ratio, Rational};

/// The three upper bounds whose minimum is the must-stop flow value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MustStopBounds {
    /// Half the max flow from the via node toward both endpoints at once.
    pub via_total_half: Rational,
    /// Max flow between source and via node.
    pub source_via: Rational,
    /// Max flow between via node and destination.
    pub via_dest: Rational,
}

#[derive(Clone, Debug)]
pub struct MustStopResult {
    pub value: Rational,
    pub bounds: MustStopBounds,
    /// Present when a realization was requested; routes `value` from the
    /// source into the via node and onward to the destination.
    pub realization: Option<FlowAssignment>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MustStopError {
    NotUndirected,
    EndpointsNotDistinct,
    EndpointOutOfRange,
    /// The realization construction delivered a different amount than the
    /// computed value; indicates a solver bug, never expected.
    RealizationMismatch { expected: Rational, got: Rational },
}

impl fmt::Display for MustStopError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MustStopError::NotUndirected => {
                write!(f, "must-stop flow is defined on undirected graphs")
            }
            MustStopError::EndpointsNotDistinct => {
                write!(f, "source, via, and destination must be pairwise distinct")
            }
            MustStopError::EndpointOutOfRange => write!(f, "endpoint not in the network"),
            MustStopError::RealizationMismatch { expected, got } => {
                write!(f, "realization shipped {got}, expected {expected}")
            }
        }
    }
}

impl std::error::Error for MustStopError {}

fn check_endpoints(net: &Network, s: NodeId, t: NodeId, d: NodeId) -> Result<(), MustStopError> {
    if net.directed() {
        return Err(MustStopError::NotUndirected);
    }
    if s.0 >= net.node_count() || t.0 >= net.node_count() || d.0 >= net.node_count() {
        return Err(MustStopError::EndpointOutOfRange);
    }
    if s == t || t == d || s == d {
        return Err(MustStopError::EndpointsNotDistinct);
    }
    Ok(())
}

/// Clone of the network with a helper node attached to `s` and `d` at the
/// given capacity.
fn with_helper(net: &Network, s: NodeId, d: NodeId, capacity: &Rational) -> (Network, NodeId) {
    let mut g = net.clone();
    let helper = g.add_node("__helper__");
    g.add_edge(helper, s, Rational::zero(), capacity.clone());
    g.add_edge(helper, d, Rational::zero(), capacity.clone());
    (g, helper)
}

/// Value and bounds of the max flow from `s` to `d` forced through `t`.
pub fn must_stop_value(
    net: &Network,
    s: NodeId,
    t: NodeId,
    d: NodeId,
) -> Result<MustStopResult, MustStopError> {
    check_endpoints(net, s, t, d)?;
    let non_binding = net.total_capacity() + rat(1);
    let (g, helper) = with_helper(net, s, d, &non_binding);
    let via_total_half = maxflow::max_flow_value(&g, t, helper) * ratio(1, 2);
    let source_via = maxflow::max_flow_value(net, s, t);
    let via_dest = maxflow::max_flow_value(net, t, d);
    let value = via_total_half
        .clone()
        .min(source_via.clone())
        .min(via_dest.clone());
    Ok(MustStopResult {
        value,
        bounds: MustStopBounds {
            via_total_half,
            source_via,
            via_dest,
        },
        realization: None,
    })
}

/// Concrete routing of `value` units `s -> t -> d`: attach the helper at
/// capacity `value`, max-flow out of `t`, and reverse the decomposition
/// paths that end on the source side. The result conserves flow at every
/// node except `s` and `d` (the via node receives and re-emits `value`).
pub fn must_stop_realize(
    net: &Network,
    s: NodeId,
    t: NodeId,
    d: NodeId,
    value: &Rational,
) -> Result<FlowAssignment, MustStopError> {
    check_endpoints(net, s, t, d)?;
    if value.is_zero() {
        return Ok(FlowAssignment::zero());
    }
    let (g, helper) = with_helper(net, s, d, value);
    let flow = maxflow::max_flow(&g, t, helper);
    let expected = value * rat(2);
    if flow.value != expected {
        return Err(MustStopError::RealizationMismatch {
            expected: value.clone(),
            got: flow.value / rat(2),
        });
    }
    let decomposition = maxflow::decompose(&g, &flow, t, helper);
    let mut realization = FlowAssignment::zero();
    realization.value = value.clone();
    for (walk, amount) in &decomposition.paths {
        // Walks run t -> ... -> (s|d) -> helper; drop the helper hop.
        let nodes = &walk.nodes[..walk.nodes.len() - 1];
        let toward_source = *nodes.last().expect("nonempty path") == s;
        for pair in nodes.windows(2) {
            let arc = if toward_source {
                (pair[1], pair[0])
            } else {
                (pair[0], pair[1])
            };
            *realization
                .arc_flows
                .entry(arc)
                .or_insert_with(Rational::zero) += amount;
        }
    }
    // Self-check: the reversed superposition must ship `value` out of the
    // source and into the destination.
    let shipped = realization.net_out(s);
    if shipped != *value {
        return Err(MustStopError::RealizationMismatch {
            expected: value.clone(),
            got: shipped,
        });
    }
    Ok(realization)
}

/// Value, bounds, and realization in one call.
pub fn must_stop(
    net: &Network,
    s: NodeId,
    t: NodeId,
    d: NodeId,
) -> Result<MustStopResult, MustStopError> {
    let mut result = must_stop_value(net, s, t, d)?;
    result.realization = Some(must_stop_realize(net, s, t, d, &result.value)?);
    Ok(result)
}
