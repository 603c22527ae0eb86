//! Exact single-commodity maximum flow.
//!
//! Shortest-augmenting-path search (BFS) over an integer residual network.
//! Rational capacities are cleared to integers by scaling with the common
//! denominator, solved exactly, and unscaled on output, so flows stay
//! exact and integral capacities yield integral flows. Undirected edges
//! become mutually-cancelling arc pairs: pushing along one orientation
//! frees residual on the other, and the reported flow is the net amount in
//! the positive direction only.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::graph::{Network, NodeId, Walk};
use crate::rational::Rational;

/// Per-arc flow amounts plus the total value shipped from source to
/// destination. Only nonzero arcs are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowAssignment {
    pub value: Rational,
    pub arc_flows: BTreeMap<(NodeId, NodeId), Rational>,
}

impl FlowAssignment {
    pub fn zero() -> Self {
        FlowAssignment {
            value: Rational::zero(),
            arc_flows: BTreeMap::new(),
        }
    }

    /// Net flow out of `v` (outgoing minus incoming).
    pub fn net_out(&self, v: NodeId) -> Rational {
        let mut net = Rational::zero();
        for ((tail, head), amount) in &self.arc_flows {
            if *tail == v {
                net += amount;
            }
            if *head == v {
                net -= amount;
            }
        }
        net
    }
}

struct Residual {
    // Twin arcs at indices 2k, 2k+1.
    head: Vec<usize>,
    residual: Vec<BigInt>,
    adjacency: Vec<Vec<usize>>,
}

impl Residual {
    fn new(n: usize) -> Self {
        Residual {
            head: Vec::new(),
            residual: Vec::new(),
            adjacency: vec![Vec::new(); n],
        }
    }

    fn add_pair(&mut self, tail: usize, head: usize, forward: BigInt, backward: BigInt) -> usize {
        let idx = self.head.len();
        self.head.push(head);
        self.residual.push(forward);
        self.adjacency[tail].push(idx);
        self.head.push(tail);
        self.residual.push(backward);
        self.adjacency[head].push(idx + 1);
        idx
    }

    fn tail(&self, arc: usize) -> usize {
        self.head[arc ^ 1]
    }

    /// One BFS augmentation; returns the pushed amount (zero when done).
    fn augment(&mut self, s: usize, d: usize) -> BigInt {
        let n = self.adjacency.len();
        let mut parent_arc: Vec<Option<usize>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        'bfs: while let Some(u) = queue.pop_front() {
            for &arc in &self.adjacency[u] {
                let v = self.head[arc];
                if !seen[v] && self.residual[arc].is_positive() {
                    seen[v] = true;
                    parent_arc[v] = Some(arc);
                    if v == d {
                        break 'bfs;
                    }
                    queue.push_back(v);
                }
            }
        }
        if !seen[d] {
            return BigInt::zero();
        }
        let mut bottleneck: Option<BigInt> = None;
        let mut v = d;
        while v != s {
            let arc = parent_arc[v].expect("path arc");
            let r = &self.residual[arc];
            bottleneck = Some(match bottleneck {
                None => r.clone(),
                Some(b) => b.min(r.clone()),
            });
            v = self.tail(arc);
        }
        let amount = bottleneck.expect("nonempty path");
        let mut v = d;
        while v != s {
            let arc = parent_arc[v].expect("path arc");
            self.residual[arc] -= &amount;
            self.residual[arc ^ 1] += &amount;
            v = self.tail(arc);
        }
        amount
    }

    /// Nodes reachable from `s` through positive residual arcs.
    fn reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adjacency.len()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &arc in &self.adjacency[u] {
                let v = self.head[arc];
                if !seen[v] && self.residual[arc].is_positive() {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }
}

/// Common denominator of all capacities; scaling by it makes the instance
/// integral.
fn capacity_scale(net: &Network) -> BigInt {
    net.edges().iter().fold(BigInt::one(), |acc, e| {
        acc.lcm(e.capacity.denom())
    })
}

struct Solved {
    residual: Residual,
    scale: BigInt,
    // Per edge: index of its forward residual arc and its scaled capacity.
    edge_arcs: Vec<(usize, BigInt)>,
    pushed: BigInt,
}

fn solve(net: &Network, s: NodeId, d: NodeId) -> Solved {
    assert!(s != d, "source and destination must differ");
    assert!(s.0 < net.node_count() && d.0 < net.node_count());
    let scale = capacity_scale(net);
    let mut residual = Residual::new(net.node_count());
    let mut edge_arcs = Vec::with_capacity(net.edge_count());
    for e in net.edges() {
        let cap = (&e.capacity * &scale).to_integer();
        assert!(!cap.is_negative(), "negative capacity");
        let backward = if net.directed() {
            BigInt::zero()
        } else {
            cap.clone()
        };
        let idx = residual.add_pair(e.tail.0, e.head.0, cap.clone(), backward);
        edge_arcs.push((idx, cap));
    }
    let mut pushed = BigInt::zero();
    loop {
        let amount = residual.augment(s.0, d.0);
        if amount.is_zero() {
            break;
        }
        pushed += amount;
    }
    Solved {
        residual,
        scale,
        edge_arcs,
        pushed,
    }
}

fn extract_flows(net: &Network, solved: &Solved) -> FlowAssignment {
    let scale = Rational::from_integer(solved.scale.clone());
    let mut arc_flows = BTreeMap::new();
    for (e, (arc, cap)) in net.edges().iter().zip(solved.edge_arcs.iter()) {
        let sent = cap - &solved.residual.residual[*arc];
        if sent.is_positive() {
            arc_flows.insert(
                (e.tail, e.head),
                Rational::from_integer(sent) / &scale,
            );
        } else if sent.is_negative() {
            // Undirected edge used in the reverse orientation.
            arc_flows.insert(
                (e.head, e.tail),
                Rational::from_integer(-sent) / &scale,
            );
        }
    }
    FlowAssignment {
        value: Rational::from_integer(solved.pushed.clone()) / &scale,
        arc_flows,
    }
}

/// Maximum flow from `s` to `d`. Disconnected endpoints yield value zero.
pub fn max_flow(net: &Network, s: NodeId, d: NodeId) -> FlowAssignment {
    let solved = solve(net, s, d);
    extract_flows(net, &solved)
}

/// Convenience accessor for the value alone.
pub fn max_flow_value(net: &Network, s: NodeId, d: NodeId) -> Rational {
    max_flow(net, s, d).value
}

/// A saturated source-side cut certifying optimality of the max flow.
#[derive(Clone, Debug)]
pub struct MinCut {
    /// Indices into [`Network::edges`].
    pub edges: Vec<usize>,
    pub capacity: Rational,
}

/// Minimum s-d cut extracted from the final residual graph.
pub fn min_cut(net: &Network, s: NodeId, d: NodeId) -> MinCut {
    let solved = solve(net, s, d);
    let reachable = solved.residual.reachable(s.0);
    let mut edges = Vec::new();
    let mut capacity = Rational::zero();
    for (i, e) in net.edges().iter().enumerate() {
        let crossing = if net.directed() {
            reachable[e.tail.0] && !reachable[e.head.0]
        } else {
            reachable[e.tail.0] != reachable[e.head.0]
        };
        if crossing {
            edges.push(i);
            capacity += &e.capacity;
        }
    }
    MinCut { edges, capacity }
}

/// Path/cycle decomposition of a flow assignment.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub paths: Vec<(Walk, Rational)>,
    /// Circulations not contributing to the s-d value; discarded from the
    /// path list but reported here.
    pub cycles: Vec<(Vec<NodeId>, Rational)>,
}

impl Decomposition {
    /// Re-superposes paths and cycles into per-arc totals.
    pub fn superpose(&self) -> BTreeMap<(NodeId, NodeId), Rational> {
        let mut flows: BTreeMap<(NodeId, NodeId), Rational> = BTreeMap::new();
        let mut add = |nodes: &[NodeId], amount: &Rational| {
            for pair in nodes.windows(2) {
                *flows.entry((pair[0], pair[1])).or_insert_with(Rational::zero) += amount;
            }
        };
        for (walk, amount) in &self.paths {
            add(&walk.nodes, amount);
        }
        for (cycle, amount) in &self.cycles {
            add(cycle, amount);
        }
        flows
    }
}

/// Decomposes `fa` into at most `|E|` s-to-d paths plus leftover cycles.
/// Requires a capacity- and conservation-valid assignment; panics when the
/// flow cannot be walked forward (which a valid assignment never triggers).
pub fn decompose(net: &Network, fa: &FlowAssignment, s: NodeId, d: NodeId) -> Decomposition {
    let mut remaining: BTreeMap<NodeId, BTreeMap<NodeId, Rational>> = BTreeMap::new();
    for ((tail, head), amount) in &fa.arc_flows {
        if amount.is_positive() {
            remaining
                .entry(*tail)
                .or_default()
                .insert(*head, amount.clone());
        }
    }
    let cost_of = |a: NodeId, b: NodeId| -> Rational {
        for e in net.edges() {
            if (e.tail == a && e.head == b) || (!net.directed() && e.tail == b && e.head == a) {
                return e.cost.clone();
            }
        }
        Rational::zero()
    };
    let mut paths = Vec::new();
    let mut cycles = Vec::new();

    // Extracts the bottleneck amount along `nodes` and prunes empty arcs.
    fn drain(
        remaining: &mut BTreeMap<NodeId, BTreeMap<NodeId, Rational>>,
        nodes: &[NodeId],
    ) -> Rational {
        let mut bottleneck: Option<Rational> = None;
        for pair in nodes.windows(2) {
            let amount = &remaining[&pair[0]][&pair[1]];
            bottleneck = Some(match bottleneck {
                None => amount.clone(),
                Some(b) => b.min(amount.clone()),
            });
        }
        let amount = bottleneck.expect("walk has at least one arc");
        for pair in nodes.windows(2) {
            let out = remaining.get_mut(&pair[0]).expect("tail present");
            let left = out.get_mut(&pair[1]).expect("arc present");
            *left -= &amount;
            if left.is_zero() {
                out.remove(&pair[1]);
                if out.is_empty() {
                    remaining.remove(&pair[0]);
                }
            }
        }
        amount
    }

    // Source-rooted walks first; cycles encountered along the way are
    // extracted in place so the walk can continue.
    while remaining.get(&s).is_some_and(|out| !out.is_empty()) {
        let mut path = vec![s];
        let mut position: BTreeMap<NodeId, usize> = BTreeMap::from([(s, 0)]);
        loop {
            let here = *path.last().expect("nonempty path");
            if here == d && path.len() > 1 {
                let amount = drain(&mut remaining, &path);
                paths.push((
                    Walk {
                        cost: path
                            .windows(2)
                            .map(|p| cost_of(p[0], p[1]))
                            .fold(Rational::zero(), |a, c| a + c),
                        nodes: path.clone(),
                    },
                    amount,
                ));
                break;
            }
            let next = *remaining
                .get(&here)
                .and_then(|out| out.keys().next())
                .expect("flow conservation provides an outgoing arc");
            if let Some(&at) = position.get(&next) {
                // Found a cycle; peel it off and resume from the repeat.
                let mut cycle: Vec<NodeId> = path[at..].to_vec();
                cycle.push(next);
                let amount = drain(&mut remaining, &cycle);
                cycles.push((cycle, amount));
                for v in path.drain(at + 1..) {
                    position.remove(&v);
                }
                if remaining.get(&s).is_none_or(|out| out.is_empty()) && path == [s] {
                    break;
                }
                continue;
            }
            position.insert(next, path.len());
            path.push(next);
        }
    }
    // Whatever is left conserves flow at every node: pure circulations.
    while let Some((&start, _)) = remaining.iter().next() {
        let mut path = vec![start];
        let mut position: BTreeMap<NodeId, usize> = BTreeMap::from([(start, 0)]);
        loop {
            let here = *path.last().expect("nonempty");
            let next = *remaining
                .get(&here)
                .and_then(|out| out.keys().next())
                .expect("circulation continues");
            if let Some(&at) = position.get(&next) {
                let mut cycle: Vec<NodeId> = path[at..].to_vec();
                cycle.push(next);
                let amount = drain(&mut remaining, &cycle);
                cycles.push((cycle, amount));
                break;
            }
            position.insert(next, path.len());
            path.push(next);
        }
    }
    Decomposition { paths, cycles }
}
