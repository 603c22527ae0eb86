//! The JSON graph schema:
//!
//! ```json
//! {
//!   "directed": true,
//!   "nodes": [{"id": "v1", "functions": ["phi1"]}],
//!   "edges": [{"from": "v1", "to": "v2", "cost": 3, "capacity": 2}]
//! }
//! ```
//!
//! Missing `cost` and `capacity` default to 1. Numbers are converted to
//! exact rationals (every finite JSON float is one); serialization writes
//! integers as integers and other rationals through their exact `f64`
//! value, so parse -> serialize -> parse is the identity on the model.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::{Network, NodeId, Violation};
use crate::rational::{self, rat, Rational};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphDoc {
    #[serde(default)]
    pub directed: bool,
    pub nodes: Vec<NodeDoc>,
    pub edges: Vec<EdgeDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NodeDoc {
    pub id: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub functions: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub from: String,
    pub to: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost: Option<serde_json::Number>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capacity: Option<serde_json::Number>,
}

/// Why a syntactically valid document does not describe a usable network.
#[derive(Debug)]
pub enum GraphDocError {
    /// Endpoint name with no matching node, non-finite number, etc.
    Invalid(Vec<String>),
}

impl fmt::Display for GraphDocError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphDocError::Invalid(problems) => write!(f, "{}", problems.join("; ")),
        }
    }
}

impl std::error::Error for GraphDocError {}

fn number_to_rational(n: &serde_json::Number) -> Option<Rational> {
    if let Some(i) = n.as_i64() {
        return Some(rat(i));
    }
    if let Some(u) = n.as_u64() {
        return Some(Rational::from_integer(u.into()));
    }
    n.as_f64().and_then(rational::from_f64)
}

fn rational_to_number(x: &Rational) -> serde_json::Number {
    use num_traits::ToPrimitive;
    if x.is_integer() {
        if let Some(i) = x.numer().to_i64() {
            return serde_json::Number::from(i);
        }
    }
    serde_json::Number::from_f64(rational::to_f64(x)).unwrap_or_else(|| serde_json::Number::from(0))
}

impl GraphDoc {
    /// Parses a JSON string. Syntax errors keep serde_json's line/column
    /// diagnostics.
    pub fn parse(text: &str) -> Result<GraphDoc, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Resolves the document into a validated [`Network`], collecting every
    /// problem rather than stopping at the first.
    pub fn resolve(&self) -> Result<Network, GraphDocError> {
        let mut problems = Vec::new();
        let mut net = Network::new(self.directed);
        let mut index: HashMap<&str, NodeId> = HashMap::new();
        for node in &self.nodes {
            let id = net.add_node(node.id.clone());
            for f in &node.functions {
                net.add_function(id, f.clone());
            }
            index.entry(node.id.as_str()).or_insert(id);
        }
        for (i, edge) in self.edges.iter().enumerate() {
            let tail = index.get(edge.from.as_str()).copied();
            let head = index.get(edge.to.as_str()).copied();
            let (tail, head) = match (tail, head) {
                (Some(t), Some(h)) => (t, h),
                _ => {
                    problems.push(format!(
                        "edge {i}: unknown endpoint {:?}",
                        if tail.is_none() { &edge.from } else { &edge.to }
                    ));
                    continue;
                }
            };
            let cost = match &edge.cost {
                None => rat(1),
                Some(n) => match number_to_rational(n) {
                    Some(c) => c,
                    None => {
                        problems.push(format!("edge {i}: non-finite cost"));
                        continue;
                    }
                },
            };
            let capacity = match &edge.capacity {
                None => rat(1),
                Some(n) => match number_to_rational(n) {
                    Some(c) => c,
                    None => {
                        problems.push(format!("edge {i}: non-finite capacity"));
                        continue;
                    }
                },
            };
            net.add_edge(tail, head, cost, capacity);
        }
        for violation in net.validate() {
            problems.push(violation.to_string());
        }
        if problems.is_empty() {
            Ok(net)
        } else {
            Err(GraphDocError::Invalid(problems))
        }
    }

    pub fn from_network(net: &Network) -> GraphDoc {
        GraphDoc {
            directed: net.directed(),
            nodes: net
                .node_ids()
                .map(|v| NodeDoc {
                    id: net.name(v).to_string(),
                    functions: net.functions(v).iter().cloned().collect(),
                })
                .collect(),
            edges: net
                .edges()
                .iter()
                .map(|e| EdgeDoc {
                    from: net.name(e.tail).to_string(),
                    to: net.name(e.head).to_string(),
                    cost: Some(rational_to_number(&e.cost)),
                    capacity: Some(rational_to_number(&e.capacity)),
                })
                .collect(),
        }
    }

    pub fn to_pretty_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph document serializes")
    }
}

/// Parse-and-resolve convenience; `Violation` values surface as messages.
pub fn network_from_str(text: &str) -> Result<Network, String> {
    let doc = GraphDoc::parse(text).map_err(|e| e.to_string())?;
    doc.resolve().map_err(|e| e.to_string())
}

/// The structural violations of a resolved network as display strings;
/// kept alongside [`network_from_str`] so callers can reuse the wording.
pub fn violation_messages(violations: &[Violation]) -> Vec<String> {
    violations.iter().map(|v| v.to_string()).collect()
}
