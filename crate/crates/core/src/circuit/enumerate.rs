//! Exhaustive circuit generation in a canonical form.
//!
//! A canonical circuit with `k` vertices consists of `ℓ ≥ 1` distinct leaves
//! followed by `k − ℓ` gates:
//!
//! - leaves come first, in label order (inputs `x1..xn`, then the constant
//!   pool in the order given);
//! - every gate `op(a, b)` has `a ≤ b` (commutative operands ordered by node
//!   index);
//! - every vertex other than the output is an operand of some later gate;
//! - the output is the last vertex, and a gate-free circuit is one leaf.
//!
//! Every circuit can be rewritten into this form without growing, so the
//! polynomials reachable with `≤ s` vertices are unchanged. Generation order
//! is deterministic: by size, then leaf subset (lexicographic), then gate
//! sequence (lexicographic in `(op, a, b)` with `add < mul`).

use std::collections::VecDeque;

use num_bigint::BigInt;

use super::{Circuit, Node};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationSpec {
    pub max_vertices: usize,
    pub num_vars: usize,
    pub pool: Vec<BigInt>,
    /// Optional cap on the number of gates.
    pub max_gates: Option<usize>,
    pub budget: u64,
}

impl EnumerationSpec {
    pub fn new(max_vertices: usize, num_vars: usize, pool: Vec<BigInt>) -> Self {
        EnumerationSpec {
            max_vertices,
            num_vars,
            pool,
            max_gates: None,
            budget: crate::Budgets::default().circuits,
        }
    }

    pub fn max_gates(mut self, g: usize) -> Self {
        self.max_gates = Some(g);
        self
    }

    pub fn budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    fn labels(&self) -> Vec<Node> {
        (1..=self.num_vars)
            .map(Node::Input)
            .chain(self.pool.iter().cloned().map(Node::Const))
            .collect()
    }

    /// `(vertices, leaves, gates)` shapes admitted by these bounds, in order.
    fn shapes(&self) -> Vec<(usize, usize, usize)> {
        let labels = self.num_vars + self.pool.len();
        let mut out = Vec::new();
        for k in 1..=self.max_vertices {
            for leaves in 1..=k.min(labels) {
                let gates = k - leaves;
                if gates == 0 && leaves != 1 {
                    continue;
                }
                if self.max_gates.is_some_and(|g| gates > g) {
                    continue;
                }
                out.push((k, leaves, gates));
            }
        }
        out
    }
}

/// Number of canonical circuits described by `spec`, computed directly by
/// inclusion–exclusion over the set of vertices left unused.
pub fn canonical_count(spec: &EnumerationSpec) -> u128 {
    let labels = (spec.num_vars + spec.pool.len()) as u128;
    spec.shapes()
        .into_iter()
        .map(|(_, leaves, gates)| binomial(labels, leaves as u128) * sequences(leaves, gates))
        .sum()
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Gate sequences over `leaves` leaves with every non-output vertex used.
fn sequences(leaves: usize, gates: usize) -> u128 {
    if gates == 0 {
        return u128::from(leaves == 1);
    }
    let n = leaves + gates;
    let must_use = n - 1;
    let mut total: i128 = 0;
    for forbidden in 0u64..(1u64 << must_use) {
        let mut prod: i128 = 1;
        for i in 0..gates {
            let avail = leaves + i;
            let blocked = (forbidden & ((1u64 << avail) - 1)).count_ones() as usize;
            let a = (avail - blocked) as i128;
            prod *= a * (a + 1); // two ops times a(a+1)/2 ordered pairs
            if prod == 0 {
                break;
            }
        }
        if forbidden.count_ones() % 2 == 0 {
            total += prod;
        } else {
            total -= prod;
        }
    }
    total as u128
}

/// Streams every canonical circuit of the spec. Fails up front when the exact
/// count exceeds `spec.budget`.
pub fn enumerate_circuits(spec: &EnumerationSpec) -> Result<CircuitStream> {
    let count = canonical_count(spec);
    if count > u128::from(spec.budget) {
        return Err(Error::Budget {
            what: "circuit enumeration",
            limit: spec.budget,
            reached: u64::try_from(count).unwrap_or(u64::MAX),
        });
    }
    Ok(CircuitStream {
        labels: spec.labels(),
        num_vars: spec.num_vars,
        shapes: spec.shapes().into(),
        subsets: VecDeque::new(),
        current_gates: 0,
        batch: VecDeque::new(),
        remaining: count,
    })
}

pub struct CircuitStream {
    labels: Vec<Node>,
    num_vars: usize,
    shapes: VecDeque<(usize, usize, usize)>,
    subsets: VecDeque<Vec<usize>>,
    current_gates: usize,
    batch: VecDeque<Circuit>,
    remaining: u128,
}

impl CircuitStream {
    /// Number of circuits not yet yielded.
    pub fn remaining(&self) -> u128 {
        self.remaining
    }

    fn fill(&mut self) -> bool {
        while self.batch.is_empty() {
            if let Some(subset) = self.subsets.pop_front() {
                let leaves: Vec<Node> = subset.iter().map(|&i| self.labels[i].clone()).collect();
                let mut out = Vec::new();
                let mut gates = Vec::new();
                let mut uses = vec![0u32; leaves.len()];
                gate_sequences(leaves.len(), self.current_gates, &mut gates, &mut uses, &mut |gs| {
                    out.push(gs.to_vec())
                });
                for gs in out {
                    let mut nodes = leaves.clone();
                    nodes.extend(gs.iter().map(|&(mul, a, b)| if mul { Node::Mul(a, b) } else { Node::Add(a, b) }));
                    let output = nodes.len() - 1;
                    self.batch.push_back(
                        Circuit::new(nodes, output, self.num_vars, 0).expect("canonical circuits are valid"),
                    );
                }
                continue;
            }
            let Some((_, leaves, gates)) = self.shapes.pop_front() else {
                return false;
            };
            self.current_gates = gates;
            self.subsets = combinations(self.labels.len(), leaves).into();
        }
        true
    }
}

impl Iterator for CircuitStream {
    type Item = Circuit;

    fn next(&mut self) -> Option<Circuit> {
        if !self.fill() {
            return None;
        }
        self.remaining = self.remaining.saturating_sub(1);
        self.batch.pop_front()
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Depth-first generation of gate lists `(is_mul, a, b)`; `uses[i]` counts
/// references to vertex `i` so far.
fn gate_sequences(
    leaves: usize,
    total: usize,
    gates: &mut Vec<(bool, usize, usize)>,
    uses: &mut Vec<u32>,
    emit: &mut dyn FnMut(&[(bool, usize, usize)]),
) {
    let n = leaves + gates.len();
    let rem = total - gates.len();
    if rem == 0 {
        if uses[..n - 1].iter().all(|&u| u > 0) {
            emit(gates);
        }
        return;
    }
    // Each non-final gate covers at most two vertices and adds one unused
    // vertex; the final gate covers at most two.
    let unused = uses.iter().filter(|&&u| u == 0).count();
    if unused > rem + 1 {
        return;
    }
    for mul in [false, true] {
        for a in 0..n {
            for b in a..n {
                uses[a] += 1;
                uses[b] += 1;
                uses.push(0);
                gates.push((mul, a, b));
                gate_sequences(leaves, total, gates, uses, emit);
                gates.pop();
                uses.pop();
                uses[a] -= 1;
                uses[b] -= 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: usize, pool: &[i64]) -> EnumerationSpec {
        EnumerationSpec::new(s, 1, pool.iter().map(|&v| BigInt::from(v)).collect())
    }

    #[test]
    fn single_vertex() {
        let all: Vec<Circuit> = enumerate_circuits(&spec(1, &[-1])).unwrap().collect();
        assert_eq!(all.len(), 2);
        assert_eq!(all[0].nodes(), &[Node::Input(1)]);
        assert_eq!(all[1].nodes(), &[Node::Const(BigInt::from(-1))]);
    }

    #[test]
    fn empty_for_zero_vertices() {
        assert_eq!(enumerate_circuits(&spec(0, &[-1])).unwrap().count(), 0);
    }

    #[test]
    fn three_vertices_contents() {
        let all: Vec<String> = enumerate_circuits(&spec(3, &[-1]))
            .unwrap()
            .map(|c| c.to_text().replace('\n', ";"))
            .collect();
        // (x1+x1)+(x1+x1) style: leaves x1 with two gates
        assert!(all.contains(&"nvars 1;g1 = in 1;g2 = add g1 g1;out g2;".to_string()));
        assert!(all.contains(&"nvars 1;g1 = in 1;g2 = mul g1 g1;out g2;".to_string()));
        assert!(all.contains(&"nvars 1;g1 = in 1;g2 = const -1;g3 = add g1 g2;out g3;".to_string()));
        assert!(all.contains(&"nvars 1;g1 = const -1;g2 = mul g1 g1;out g2;".to_string()));
        assert_eq!(all.len() as u128, canonical_count(&spec(3, &[-1])));
    }

    #[test]
    fn budget_refuses_large_enumerations() {
        let err = enumerate_circuits(&spec(6, &[-1, 0, 1]).budget(10)).err().unwrap();
        assert!(err.is_resource());
    }
}
