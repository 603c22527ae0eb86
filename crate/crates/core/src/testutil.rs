//! Shared in-memory test instances. Test-only.

use crate::graph::{Network, NodeId};
use crate::rational::rat;

/// Five-node directed network with two functions and a chain whose cheapest
/// admissible walk (v1, v3, v4, v3, v5) costs 6: phi1 at {v2, v4}, phi2 at
/// {v2, v3}.
pub fn five_node_demo() -> (Network, Vec<NodeId>) {
    let mut net = Network::new(true);
    let v: Vec<NodeId> = (1..=5).map(|i| net.add_node(format!("v{i}"))).collect();
    net.add_function(v[1], "phi1");
    net.add_function(v[1], "phi2");
    net.add_function(v[2], "phi2");
    net.add_function(v[3], "phi1");
    for (a, b, c) in [
        (1, 2, 3),
        (1, 3, 1),
        (1, 4, 5),
        (2, 5, 5),
        (3, 5, 1),
        (4, 3, 1),
        (3, 4, 3),
    ] {
        net.add_edge(v[a - 1], v[b - 1], rat(c), rat(1));
    }
    (net, v)
}

/// Undirected five-node diamond where the flow from s to d forced through t
/// is worth exactly 3/2.
pub fn must_stop_diamond() -> (Network, NodeId, NodeId, NodeId) {
    let mut net = Network::new(false);
    let s = net.add_node("s");
    let a = net.add_node("a");
    let b = net.add_node("b");
    let t = net.add_node("t");
    let d = net.add_node("d");
    for (x, y, cap) in [(s, a, 2), (a, b, 2), (a, t, 1), (b, t, 2), (b, d, 2)] {
        net.add_edge(x, y, rat(1), rat(cap));
    }
    (net, s, t, d)
}

/// Eight-node directed mesh with max flow 8 from v1 to v8; virtualizing v6
/// alone preserves it. The v6 -> v5 arc carries the capacity-3 reading of
/// the instance.
pub fn placement_mesh() -> (Network, NodeId, NodeId) {
    let mut net = Network::new(true);
    let v: Vec<NodeId> = (1..=8).map(|i| net.add_node(format!("v{i}"))).collect();
    for (a, b, c) in [
        (1, 2, 2),
        (1, 3, 3),
        (1, 4, 3),
        (2, 5, 5),
        (3, 6, 5),
        (4, 7, 3),
        (4, 3, 2),
        (5, 6, 6),
        (5, 8, 3),
        (6, 8, 5),
        (6, 5, 3),
        (7, 6, 2),
        (7, 8, 4),
    ] {
        net.add_edge(v[a - 1], v[b - 1], rat(1), rat(c));
    }
    (net, v[0], v[7])
}

/// Seven-node unit-capacity directed mesh carrying two chained flows:
/// (v1, phi1, phi2, v6) supportable at rate 2 and (v7, phi1, phi3, v5) at
/// rate 1.
pub fn two_flow_mesh() -> (Network, Vec<NodeId>) {
    let mut net = Network::new(true);
    let v: Vec<NodeId> = (1..=7).map(|i| net.add_node(format!("v{i}"))).collect();
    net.add_function(v[1], "phi1");
    net.add_function(v[2], "phi1");
    net.add_function(v[2], "phi3");
    net.add_function(v[3], "phi2");
    net.add_function(v[3], "phi3");
    net.add_function(v[4], "phi2");
    for (a, b) in [
        (1, 2),
        (1, 3),
        (2, 3),
        (2, 4),
        (3, 4),
        (3, 5),
        (4, 5),
        (4, 6),
        (5, 6),
        (7, 2),
        (7, 4),
    ] {
        net.add_edge(v[a - 1], v[b - 1], rat(1), rat(1));
    }
    (net, v)
}
