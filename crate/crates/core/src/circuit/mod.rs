//! Arithmetic circuits: DAGs of input, constant and parameter leaves joined by
//! binary `+` and `×` gates.
//!
//! Nodes are stored in topological order. Gate operands are 0-based indices
//! of earlier nodes; input variables and parameter slots are numbered from 1,
//! as in the text format.

mod enumerate;
mod eval;
mod metrics;
mod text;

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::error::{Error, Result};

pub use enumerate::{canonical_count, enumerate_circuits, CircuitStream, EnumerationSpec};
pub use eval::{evaluate, evaluate_in};
pub use metrics::{degree_bound, formal_degree, is_constant_free, metrics, weight_report, CircuitMetrics, WeightReport};
pub use text::parse_circuit;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Input(usize),
    Const(BigInt),
    Param(usize),
    Add(usize, usize),
    Mul(usize, usize),
}

impl Node {
    pub fn is_leaf(&self) -> bool {
        matches!(self, Node::Input(_) | Node::Const(_) | Node::Param(_))
    }

    pub fn children(&self) -> Option<(usize, usize)> {
        match *self {
            Node::Add(a, b) | Node::Mul(a, b) => Some((a, b)),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Circuit {
    nodes: Vec<Node>,
    output: usize,
    num_vars: usize,
    num_params: usize,
}

impl Circuit {
    /// Validates topological order, leaf index ranges and the output index.
    pub fn new(nodes: Vec<Node>, output: usize, num_vars: usize, num_params: usize) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidCircuit("circuit has no nodes".into()));
        }
        if output >= nodes.len() {
            return Err(Error::InvalidCircuit(format!("output {output} out of range")));
        }
        for (i, node) in nodes.iter().enumerate() {
            match *node {
                Node::Input(j) if j == 0 || j > num_vars => {
                    return Err(Error::InvalidCircuit(format!(
                        "node {i}: input index {j} outside 1..={num_vars}"
                    )))
                }
                Node::Param(j) if j == 0 || j > num_params => {
                    return Err(Error::InvalidCircuit(format!(
                        "node {i}: param index {j} outside 1..={num_params}"
                    )))
                }
                Node::Add(a, b) | Node::Mul(a, b) if a >= i || b >= i => {
                    return Err(Error::InvalidCircuit(format!(
                        "node {i}: operand refers to a later node"
                    )))
                }
                _ => {}
            }
        }
        Ok(Circuit {
            nodes,
            output,
            num_vars,
            num_params,
        })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn output(&self) -> usize {
        self.output
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_params(&self) -> usize {
        self.num_params
    }

    /// Vertex count (leaves and gates).
    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    pub fn gate_count(&self) -> usize {
        self.nodes.iter().filter(|n| !n.is_leaf()).count()
    }

    /// Same circuit with more declared variables; existing indices unchanged.
    pub fn with_num_vars(mut self, num_vars: usize) -> Result<Self> {
        if num_vars < self.max_input_index() {
            return Err(Error::InvalidCircuit(format!(
                "cannot declare {num_vars} variables, index {} is in use",
                self.max_input_index()
            )));
        }
        self.num_vars = num_vars;
        Ok(self)
    }

    /// Same circuit with more declared parameter slots.
    pub fn with_num_params(mut self, num_params: usize) -> Result<Self> {
        let used = self
            .nodes
            .iter()
            .filter_map(|n| match n {
                Node::Param(j) => Some(*j),
                _ => None,
            })
            .max()
            .unwrap_or(0);
        if num_params < used {
            return Err(Error::InvalidCircuit(format!(
                "cannot declare {num_params} params, index {used} is in use"
            )));
        }
        self.num_params = num_params;
        Ok(self)
    }

    fn max_input_index(&self) -> usize {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                Node::Input(j) => Some(*j),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// Keeps only the nodes reachable from the output, preserving order. The
    /// output becomes the last node.
    pub fn prune(&self) -> Circuit {
        let mut live = vec![false; self.nodes.len()];
        live[self.output] = true;
        for i in (0..self.nodes.len()).rev() {
            if !live[i] {
                continue;
            }
            if let Some((a, b)) = self.nodes[i].children() {
                live[a] = true;
                live[b] = true;
            }
        }
        let mut remap = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        for (i, node) in self.nodes.iter().enumerate() {
            if !live[i] {
                continue;
            }
            remap[i] = nodes.len();
            nodes.push(match *node {
                Node::Add(a, b) => Node::Add(remap[a], remap[b]),
                Node::Mul(a, b) => Node::Mul(remap[a], remap[b]),
                ref leaf => leaf.clone(),
            });
        }
        Circuit {
            output: remap[self.output],
            nodes,
            num_vars: self.num_vars,
            num_params: self.num_params,
        }
    }

    /// Replaces every parameter leaf by the given constant.
    pub fn bind_params(&self, values: &[BigInt]) -> Result<Circuit> {
        if values.len() < self.num_params {
            return Err(Error::MissingAssignment(format!(
                "{} parameter values for {} slots",
                values.len(),
                self.num_params
            )));
        }
        let nodes = self
            .nodes
            .iter()
            .map(|n| match n {
                Node::Param(j) => Node::Const(values[j - 1].clone()),
                other => other.clone(),
            })
            .collect();
        Ok(Circuit {
            nodes,
            output: self.output,
            num_vars: self.num_vars,
            num_params: 0,
        })
    }
}

/// Incremental construction of circuits. Leaves are shared, so asking for the
/// same input, parameter or constant twice returns the same node.
#[derive(Clone, Debug, Default)]
pub struct CircuitBuilder {
    nodes: Vec<Node>,
    num_vars: usize,
    num_params: usize,
    leaves: HashMap<Node, usize>,
}

impl CircuitBuilder {
    pub fn new(num_vars: usize, num_params: usize) -> Self {
        CircuitBuilder {
            num_vars,
            num_params,
            ..Default::default()
        }
    }

    fn leaf(&mut self, node: Node) -> usize {
        if let Some(&i) = self.leaves.get(&node) {
            return i;
        }
        let i = self.nodes.len();
        self.nodes.push(node.clone());
        self.leaves.insert(node, i);
        i
    }

    pub fn input(&mut self, j: usize) -> usize {
        assert!(j >= 1, "input indices start at 1");
        self.num_vars = self.num_vars.max(j);
        self.leaf(Node::Input(j))
    }

    pub fn param(&mut self, j: usize) -> usize {
        assert!(j >= 1, "param indices start at 1");
        self.num_params = self.num_params.max(j);
        self.leaf(Node::Param(j))
    }

    pub fn constant(&mut self, c: impl Into<BigInt>) -> usize {
        self.leaf(Node::Const(c.into()))
    }

    pub fn add(&mut self, a: usize, b: usize) -> usize {
        assert!(a < self.nodes.len() && b < self.nodes.len());
        self.nodes.push(Node::Add(a, b));
        self.nodes.len() - 1
    }

    pub fn mul(&mut self, a: usize, b: usize) -> usize {
        assert!(a < self.nodes.len() && b < self.nodes.len());
        self.nodes.push(Node::Mul(a, b));
        self.nodes.len() - 1
    }

    pub fn neg(&mut self, a: usize) -> usize {
        let m = self.constant(-1);
        self.mul(m, a)
    }

    pub fn sub(&mut self, a: usize, b: usize) -> usize {
        let nb = self.neg(b);
        self.add(a, nb)
    }

    /// Left-to-right sum; the empty sum is the constant 0.
    pub fn sum(&mut self, items: &[usize]) -> usize {
        match items.split_first() {
            None => self.constant(0),
            Some((&first, rest)) => rest.iter().fold(first, |acc, &x| self.add(acc, x)),
        }
    }

    /// Left-to-right product; the empty product is the constant 1.
    pub fn product(&mut self, items: &[usize]) -> usize {
        match items.split_first() {
            None => self.constant(1),
            Some((&first, rest)) => rest.iter().fold(first, |acc, &x| self.mul(acc, x)),
        }
    }

    /// Copies `c` into the builder with its inputs and parameters wired to the
    /// given nodes. Returns the node holding `c`'s output.
    pub fn inline(&mut self, c: &Circuit, inputs: &[usize], params: &[usize]) -> usize {
        assert!(inputs.len() >= c.num_vars() && params.len() >= c.num_params());
        let mut map = Vec::with_capacity(c.size());
        for node in c.nodes() {
            let id = match node {
                Node::Input(j) => inputs[j - 1],
                Node::Param(j) => params[j - 1],
                Node::Const(v) => self.constant(v.clone()),
                Node::Add(a, b) => self.add(map[*a], map[*b]),
                Node::Mul(a, b) => self.mul(map[*a], map[*b]),
            };
            map.push(id);
        }
        map[c.output()]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn finish(self, output: usize) -> Circuit {
        Circuit::new(self.nodes, output, self.num_vars, self.num_params)
            .expect("builder produces valid circuits")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_forward_operands() {
        let err = Circuit::new(vec![Node::Input(1), Node::Add(0, 2), Node::Input(1)], 1, 1, 0);
        assert!(matches!(err, Err(Error::InvalidCircuit(_))));
    }

    #[test]
    fn rejects_out_of_range_leaves() {
        assert!(Circuit::new(vec![Node::Input(2)], 0, 1, 0).is_err());
        assert!(Circuit::new(vec![Node::Param(1)], 0, 0, 0).is_err());
        assert!(Circuit::new(vec![Node::Input(0)], 0, 1, 0).is_err());
    }

    #[test]
    fn prune_drops_dead_nodes() {
        let mut b = CircuitBuilder::new(1, 0);
        let x = b.input(1);
        let dead = b.constant(7);
        let _ = b.mul(dead, dead);
        let sq = b.mul(x, x);
        let c = b.finish(sq).prune();
        assert_eq!(c.nodes(), &[Node::Input(1), Node::Mul(0, 0)]);
        assert_eq!(c.output(), 1);
    }

    #[test]
    fn builder_shares_leaves() {
        let mut b = CircuitBuilder::new(0, 0);
        let a = b.constant(3);
        let c = b.constant(3);
        assert_eq!(a, c);
        assert_eq!(b.len(), 1);
    }
}
