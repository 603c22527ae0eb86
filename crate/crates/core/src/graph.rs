//! Core network, service-chain, and walk data model.
//!
//! A [`Network`] is a directed or undirected graph with rational edge costs
//! and capacities and a set of network functions hosted at each node. All
//! types are immutable once built; the algorithms in the other modules
//! treat them as shared read-only inputs.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::rational::{rat, Rational};

/// Index of a node inside its [`Network`].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A weighted, capacitated edge. In undirected networks the pair is stored
/// once and consumers expand it into the two directed arcs.
#[derive(Clone, Debug)]
pub struct Edge {
    pub tail: NodeId,
    pub head: NodeId,
    pub cost: Rational,
    pub capacity: Rational,
}

/// One directed arc of a network: the edge itself for directed graphs, or
/// one of the two orientations of an undirected edge.
#[derive(Clone, Debug)]
pub struct Arc {
    pub tail: NodeId,
    pub head: NodeId,
    /// Index of the underlying edge in [`Network::edges`].
    pub edge: usize,
}

/// A network graph with per-node function sets.
#[derive(Clone, Debug)]
pub struct Network {
    directed: bool,
    names: Vec<String>,
    functions: Vec<BTreeSet<String>>,
    edges: Vec<Edge>,
}

/// A structural problem found by [`Network::validate`]. Violations are
/// data, not faults: building an invalid network is possible (e.g. straight
/// from JSON) and validation reports everything wrong with it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    UnknownEndpoint { edge: usize },
    SelfLoop { edge: usize },
    NegativeCost { edge: usize },
    NegativeCapacity { edge: usize },
    DuplicateEdge { edge: usize },
    DuplicateNodeName { name: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownEndpoint { edge } => write!(f, "edge {edge}: unknown endpoint"),
            Violation::SelfLoop { edge } => write!(f, "edge {edge}: self loop"),
            Violation::NegativeCost { edge } => write!(f, "edge {edge}: negative cost"),
            Violation::NegativeCapacity { edge } => write!(f, "edge {edge}: negative capacity"),
            Violation::DuplicateEdge { edge } => write!(f, "edge {edge}: duplicate endpoint pair"),
            Violation::DuplicateNodeName { name } => write!(f, "duplicate node name {name:?}"),
        }
    }
}

impl Network {
    pub fn new(directed: bool) -> Self {
        Network {
            directed,
            names: Vec::new(),
            functions: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    pub fn add_node(&mut self, name: impl Into<String>) -> NodeId {
        self.names.push(name.into());
        self.functions.push(BTreeSet::new());
        NodeId(self.names.len() - 1)
    }

    pub fn add_function(&mut self, node: NodeId, function: impl Into<String>) {
        self.functions[node.0].insert(function.into());
    }

    /// Appends an edge without validation; problems surface via [`validate`].
    ///
    /// [`validate`]: Network::validate
    pub fn add_edge(&mut self, tail: NodeId, head: NodeId, cost: Rational, capacity: Rational) {
        self.edges.push(Edge {
            tail,
            head,
            cost,
            capacity,
        });
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.names.len()).map(NodeId)
    }

    pub fn name(&self, node: NodeId) -> &str {
        &self.names[node.0]
    }

    pub fn node_by_name(&self, name: &str) -> Option<NodeId> {
        self.names.iter().position(|n| n == name).map(NodeId)
    }

    pub fn functions(&self, node: NodeId) -> &BTreeSet<String> {
        &self.functions[node.0]
    }

    pub fn hosts(&self, node: NodeId, function: &str) -> bool {
        self.functions[node.0].contains(function)
    }

    /// Nodes hosting `function`, in id order.
    pub fn hosts_of(&self, function: &str) -> Vec<NodeId> {
        self.node_ids()
            .filter(|v| self.hosts(*v, function))
            .collect()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Directed arc view: the edges themselves for a directed network, both
    /// orientations of every edge for an undirected one.
    pub fn arcs(&self) -> Vec<Arc> {
        let mut arcs = Vec::with_capacity(if self.directed {
            self.edges.len()
        } else {
            2 * self.edges.len()
        });
        for (i, e) in self.edges.iter().enumerate() {
            arcs.push(Arc {
                tail: e.tail,
                head: e.head,
                edge: i,
            });
            if !self.directed {
                arcs.push(Arc {
                    tail: e.head,
                    head: e.tail,
                    edge: i,
                });
            }
        }
        arcs
    }

    /// Sum of all edge capacities; a convenient finite stand-in for an
    /// "infinite" capacity that can never bind.
    pub fn total_capacity(&self) -> Rational {
        self.edges
            .iter()
            .fold(Rational::zero(), |acc, e| acc + &e.capacity)
    }

    /// Checks every structural invariant and returns all violations found.
    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        let mut seen_names: HashMap<&str, usize> = HashMap::new();
        for name in &self.names {
            *seen_names.entry(name.as_str()).or_insert(0) += 1;
        }
        let mut reported: BTreeSet<&str> = BTreeSet::new();
        for name in &self.names {
            if seen_names[name.as_str()] > 1 && reported.insert(name.as_str()) {
                violations.push(Violation::DuplicateNodeName { name: name.clone() });
            }
        }
        let n = self.names.len();
        let mut seen_pairs: HashMap<(usize, usize), usize> = HashMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.tail.0 >= n || e.head.0 >= n {
                violations.push(Violation::UnknownEndpoint { edge: i });
                continue;
            }
            if e.tail == e.head {
                violations.push(Violation::SelfLoop { edge: i });
            }
            if e.cost < Rational::zero() {
                violations.push(Violation::NegativeCost { edge: i });
            }
            if e.capacity < Rational::zero() {
                violations.push(Violation::NegativeCapacity { edge: i });
            }
            let key = if self.directed || e.tail.0 <= e.head.0 {
                (e.tail.0, e.head.0)
            } else {
                (e.head.0, e.tail.0)
            };
            if seen_pairs.insert(key, i).is_some() {
                violations.push(Violation::DuplicateEdge { edge: i });
            }
        }
        violations
    }
}

/// An ordered function requirement between a source and a destination.
///
/// `flexible_groups`, when present, partitions the chain positions into
/// contiguous groups whose internal order is free; the groups themselves
/// stay in order. `None` means the chain is rigid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ServiceChain {
    pub source: NodeId,
    pub destination: NodeId,
    pub functions: Vec<String>,
    pub flexible_groups: Option<Vec<usize>>,
}

/// A structural problem with a [`ServiceChain`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainError {
    /// Equal endpoints are only meaningful when there is work to do.
    DegenerateLoop,
    /// Group sizes must be positive and sum to the chain length.
    BadGroups,
    EndpointOutOfRange,
}

impl fmt::Display for ChainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainError::DegenerateLoop => {
                write!(f, "source equals destination on an empty chain")
            }
            ChainError::BadGroups => {
                write!(f, "flexible groups must be positive sizes summing to the chain length")
            }
            ChainError::EndpointOutOfRange => write!(f, "chain endpoint not in the network"),
        }
    }
}

impl std::error::Error for ChainError {}

impl ServiceChain {
    pub fn rigid(source: NodeId, destination: NodeId, functions: Vec<String>) -> Self {
        ServiceChain {
            source,
            destination,
            functions,
            flexible_groups: None,
        }
    }

    /// Chain with every function order admissible.
    pub fn fully_flexible(source: NodeId, destination: NodeId, functions: Vec<String>) -> Self {
        let r = functions.len();
        ServiceChain {
            source,
            destination,
            functions,
            flexible_groups: if r > 0 { Some(vec![r]) } else { None },
        }
    }

    /// Number of chained functions (`r`).
    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn validate(&self, net: &Network) -> Result<(), ChainError> {
        if self.source.0 >= net.node_count() || self.destination.0 >= net.node_count() {
            return Err(ChainError::EndpointOutOfRange);
        }
        if self.source == self.destination && self.functions.is_empty() {
            return Err(ChainError::DegenerateLoop);
        }
        if let Some(groups) = &self.flexible_groups {
            if groups.iter().any(|&g| g == 0)
                || groups.iter().sum::<usize>() != self.functions.len()
            {
                return Err(ChainError::BadGroups);
            }
        }
        Ok(())
    }
}

/// Every admissible fixed-order chain of `sc`, one per permutation that
/// keeps each flexible group contiguous-in-place. The list is ordered
/// lexicographically by per-group permutation choice, so index 0 is the
/// original order. A rigid chain yields exactly itself.
pub fn chain_orderings(sc: &ServiceChain) -> Vec<ServiceChain> {
    use itertools::Itertools;

    let groups: Vec<usize> = match &sc.flexible_groups {
        None => {
            return vec![ServiceChain::rigid(
                sc.source,
                sc.destination,
                sc.functions.clone(),
            )]
        }
        Some(g) => g.clone(),
    };
    // Per-group permutations, then their cartesian product in order.
    let mut group_perms: Vec<Vec<Vec<String>>> = Vec::new();
    let mut start = 0;
    for &size in &groups {
        let slice = &sc.functions[start..start + size];
        let perms: Vec<Vec<String>> = slice
            .iter()
            .cloned()
            .permutations(size)
            .collect();
        group_perms.push(perms);
        start += size;
    }
    let mut out = Vec::new();
    let mut indices = vec![0usize; group_perms.len()];
    loop {
        let mut functions = Vec::with_capacity(sc.functions.len());
        for (g, &i) in indices.iter().enumerate() {
            functions.extend(group_perms[g][i].iter().cloned());
        }
        out.push(ServiceChain::rigid(sc.source, sc.destination, functions));
        // Odometer increment, last group fastest.
        let mut pos = indices.len();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            indices[pos] += 1;
            if indices[pos] < group_perms[pos].len() {
                break;
            }
            indices[pos] = 0;
        }
    }
}

/// A source-to-destination walk; nodes may repeat.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Walk {
    pub nodes: Vec<NodeId>,
    pub cost: Rational,
}

impl Walk {
    pub fn hops(&self) -> usize {
        self.nodes.len().saturating_sub(1)
    }
}

/// Configuration for the seeded random network generator.
#[derive(Clone, Debug)]
pub struct RandomNetwork {
    pub nodes: usize,
    pub directed: bool,
    /// Probability `z` that a catalog function is hosted at a node.
    pub function_probability: f64,
    /// Expected node degree (incident edge count, counting both directions
    /// for directed graphs).
    pub avg_degree: f64,
    pub cost_range: (i64, i64),
    pub capacity_range: (i64, i64),
    pub catalog: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenerateError {
    BadProbability,
    BadRange,
    TooFewNodes,
}

impl fmt::Display for GenerateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenerateError::BadProbability => write!(f, "probability must lie in [0, 1]"),
            GenerateError::BadRange => write!(f, "range lower bound exceeds upper bound"),
            GenerateError::TooFewNodes => write!(f, "need at least 2 nodes"),
        }
    }
}

impl std::error::Error for GenerateError {}

impl RandomNetwork {
    /// Generates a reproducible random network: nodes `v1..vn`, each
    /// catalog function placed independently per node with probability `z`,
    /// integer costs and capacities uniform over their ranges, and edges
    /// sampled so the expected degree matches `avg_degree`.
    pub fn generate(&self, seed: u64) -> Result<Network, GenerateError> {
        if !(0.0..=1.0).contains(&self.function_probability) {
            return Err(GenerateError::BadProbability);
        }
        if self.cost_range.0 > self.cost_range.1 || self.capacity_range.0 > self.capacity_range.1 {
            return Err(GenerateError::BadRange);
        }
        if self.nodes < 2 {
            return Err(GenerateError::TooFewNodes);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut net = Network::new(self.directed);
        for i in 0..self.nodes {
            let v = net.add_node(format!("v{}", i + 1));
            for f in &self.catalog {
                if rng.random_bool(self.function_probability) {
                    net.add_function(v, f.clone());
                }
            }
        }
        // Pair probability giving the requested expected degree.
        let n = self.nodes as f64;
        let p = if self.directed {
            (self.avg_degree / (2.0 * (n - 1.0))).clamp(0.0, 1.0)
        } else {
            (self.avg_degree / (n - 1.0)).clamp(0.0, 1.0)
        };
        for i in 0..self.nodes {
            for j in 0..self.nodes {
                if i == j || (!self.directed && j < i) {
                    continue;
                }
                if rng.random_bool(p) {
                    let cost = rng.random_range(self.cost_range.0..=self.cost_range.1);
                    let cap =
                        rng.random_range(self.capacity_range.0..=self.capacity_range.1);
                    net.add_edge(NodeId(i), NodeId(j), rat(cost), rat(cap));
                }
            }
        }
        Ok(net)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn demo_network() -> Network {
        // Five nodes, two functions, seven directed edges.
        let mut net = Network::new(true);
        let v: Vec<NodeId> = (1..=5).map(|i| net.add_node(format!("v{i}"))).collect();
        net.add_function(v[1], "phi1");
        net.add_function(v[1], "phi2");
        net.add_function(v[2], "phi2");
        net.add_function(v[3], "phi1");
        for (a, b, c) in [
            (0, 1, 3),
            (0, 2, 1),
            (0, 3, 5),
            (1, 4, 5),
            (2, 4, 1),
            (3, 2, 1),
            (2, 3, 3),
        ] {
            net.add_edge(v[a], v[b], rat(c), rat(1));
        }
        net
    }

    #[test]
    fn demo_network_is_valid() {
        assert!(demo_network().validate().is_empty());
    }

    #[test]
    fn validate_reports_unknown_endpoint_and_negative_capacity() {
        let mut net = Network::new(true);
        let a = net.add_node("a");
        let b = net.add_node("b");
        net.add_edge(a, NodeId(7), rat(1), rat(1));
        net.add_edge(a, b, rat(1), rat(-1));
        net.add_edge(b, b, rat(0), rat(1));
        let violations = net.validate();
        assert!(violations.contains(&Violation::UnknownEndpoint { edge: 0 }));
        assert!(violations.contains(&Violation::NegativeCapacity { edge: 1 }));
        assert!(violations.contains(&Violation::SelfLoop { edge: 2 }));
    }

    #[test]
    fn validate_catches_duplicate_edges_in_both_modes() {
        let mut net = Network::new(false);
        let a = net.add_node("a");
        let b = net.add_node("b");
        net.add_edge(a, b, rat(1), rat(1));
        net.add_edge(b, a, rat(2), rat(2));
        assert_eq!(net.validate(), vec![Violation::DuplicateEdge { edge: 1 }]);

        let mut net = Network::new(true);
        let a = net.add_node("a");
        let b = net.add_node("b");
        net.add_edge(a, b, rat(1), rat(1));
        net.add_edge(b, a, rat(2), rat(2));
        assert!(net.validate().is_empty());
    }

    #[test]
    fn chain_orderings_rigid_and_flexible() {
        let sc = ServiceChain::rigid(NodeId(0), NodeId(1), vec!["phi1".into(), "phi2".into()]);
        assert_eq!(chain_orderings(&sc).len(), 1);

        let sc = ServiceChain::fully_flexible(
            NodeId(0),
            NodeId(1),
            vec!["phi1".into(), "phi2".into()],
        );
        let orderings = chain_orderings(&sc);
        assert_eq!(orderings.len(), 2);
        assert_eq!(orderings[0].functions, vec!["phi1", "phi2"]);
        assert_eq!(orderings[1].functions, vec!["phi2", "phi1"]);
    }

    #[test]
    fn chain_orderings_respect_group_boundaries() {
        let sc = ServiceChain {
            source: NodeId(0),
            destination: NodeId(1),
            functions: vec!["phi1".into(), "phi2".into(), "phi3".into()],
            flexible_groups: Some(vec![1, 2]),
        };
        let orderings = chain_orderings(&sc);
        assert_eq!(orderings.len(), 2);
        for o in &orderings {
            assert_eq!(o.functions[0], "phi1");
        }
        assert_eq!(orderings[1].functions, vec!["phi1", "phi3", "phi2"]);
    }

    #[test]
    fn chain_orderings_count_is_product_of_factorials() {
        fn factorial(k: usize) -> usize {
            (1..=k).product::<usize>().max(1)
        }
        let functions: Vec<String> = (1..=5).map(|i| format!("f{i}")).collect();
        for groups in [vec![5], vec![2, 3], vec![1, 1, 3], vec![1, 4], vec![2, 2, 1]] {
            let sc = ServiceChain {
                source: NodeId(0),
                destination: NodeId(1),
                functions: functions.clone(),
                flexible_groups: Some(groups.clone()),
            };
            let expected: usize = groups.iter().map(|&g| factorial(g)).product();
            assert_eq!(chain_orderings(&sc).len(), expected, "groups {groups:?}");
        }
    }

    #[test]
    fn chain_validation() {
        let net = demo_network();
        let loopy = ServiceChain::rigid(NodeId(0), NodeId(0), vec![]);
        assert_eq!(loopy.validate(&net), Err(ChainError::DegenerateLoop));
        let loopy_with_work = ServiceChain::rigid(NodeId(0), NodeId(0), vec!["phi1".into()]);
        assert!(loopy_with_work.validate(&net).is_ok());
        let bad_groups = ServiceChain {
            source: NodeId(0),
            destination: NodeId(4),
            functions: vec!["phi1".into(), "phi2".into()],
            flexible_groups: Some(vec![1]),
        };
        assert_eq!(bad_groups.validate(&net), Err(ChainError::BadGroups));
    }

    #[test]
    fn generator_is_deterministic() {
        let cfg = RandomNetwork {
            nodes: 50,
            directed: true,
            function_probability: 0.5,
            avg_degree: 6.0,
            cost_range: (1, 10),
            capacity_range: (2, 10),
            catalog: vec!["phi1".into(), "phi2".into()],
        };
        let a = cfg.generate(7).unwrap();
        let b = cfg.generate(7).unwrap();
        assert_eq!(a.node_count(), b.node_count());
        assert_eq!(a.edge_count(), b.edge_count());
        for (x, y) in a.edges().iter().zip(b.edges().iter()) {
            assert_eq!((x.tail, x.head), (y.tail, y.head));
            assert_eq!(x.cost, y.cost);
            assert_eq!(x.capacity, y.capacity);
        }
        for v in a.node_ids() {
            assert_eq!(a.functions(v), b.functions(v));
        }
    }

    #[test]
    fn generator_z_one_hosts_everything() {
        let cfg = RandomNetwork {
            nodes: 10,
            directed: false,
            function_probability: 1.0,
            avg_degree: 3.0,
            cost_range: (1, 1),
            capacity_range: (1, 5),
            catalog: vec!["a".into(), "b".into(), "c".into()],
        };
        let net = cfg.generate(3).unwrap();
        for v in net.node_ids() {
            assert_eq!(net.functions(v).len(), 3);
        }
    }

    #[test]
    fn generator_output_always_validates() {
        for seed in 0..40 {
            let cfg = RandomNetwork {
                nodes: 2 + (seed as usize % 14),
                directed: seed % 2 == 0,
                function_probability: 0.5,
                avg_degree: 4.0,
                cost_range: (1, 5),
                capacity_range: (2, 10),
                catalog: vec!["phi1".into(), "phi2".into(), "phi3".into()],
            };
            let net = cfg.generate(seed).unwrap();
            assert!(net.validate().is_empty(), "seed {seed}");
        }
    }

    #[test]
    fn generator_rejects_bad_parameters() {
        let mut cfg = RandomNetwork {
            nodes: 5,
            directed: true,
            function_probability: 1.5,
            avg_degree: 2.0,
            cost_range: (1, 2),
            capacity_range: (1, 2),
            catalog: vec![],
        };
        assert_eq!(cfg.generate(0).unwrap_err(), GenerateError::BadProbability);
        cfg.function_probability = 0.5;
        cfg.capacity_range = (5, 2);
        assert_eq!(cfg.generate(0).unwrap_err(), GenerateError::BadRange);
        cfg.capacity_range = (2, 5);
        cfg.nodes = 1;
        assert_eq!(cfg.generate(0).unwrap_err(), GenerateError::TooFewNodes);
    }

    #[test]
    fn function_placement_frequency_matches_probability() {
        // Monte Carlo estimate of the per-node hosting frequency.
        let cfg = RandomNetwork {
            nodes: 30,
            directed: true,
            function_probability: 0.5,
            avg_degree: 0.0,
            cost_range: (1, 1),
            capacity_range: (1, 1),
            catalog: vec!["phi1".into()],
        };
        let trials = 10_000;
        let mut per_node = vec![0u32; 30];
        for seed in 0..trials {
            let net = cfg.generate(seed).unwrap();
            for v in net.node_ids() {
                if net.hosts(v, "phi1") {
                    per_node[v.0] += 1;
                }
            }
        }
        for (i, &count) in per_node.iter().enumerate() {
            let freq = count as f64 / trials as f64;
            assert!(
                (freq - 0.5).abs() <= 0.02,
                "node {i} frequency {freq} outside 0.5 +/- 0.02"
            );
        }
    }
}
