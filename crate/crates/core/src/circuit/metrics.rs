use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use super::{Circuit, Node};
use crate::algebra::{expand, Coeffs};
use crate::error::{Error, Result};

/// Structural measurements. `size` counts every vertex; `gate_count` only the
/// `+`/`×` gates, so either size convention can be reported.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CircuitMetrics {
    pub size: usize,
    pub gate_count: usize,
    pub formal_degree: u64,
    /// Largest absolute value among the constants (0 if there are none).
    #[serde(serialize_with = "crate::ser_display")]
    pub max_const_abs: BigUint,
}

impl CircuitMetrics {
    /// The `M` of the weight bound: `max(2, max |const|)`.
    pub fn weight_base(&self) -> BigUint {
        self.max_const_abs.clone().max(BigUint::from(2u32))
    }
}

/// Leaves have formal degree 1 (constants included), `+` takes the maximum and
/// `×` the sum. Saturates at `u64::MAX`.
pub fn formal_degree(c: &Circuit) -> u64 {
    fold_degree(c, |_| 1)
}

/// Upper bound on the total degree of the computed polynomial in its inputs
/// and parameters: like the formal degree, but constants have degree 0.
pub fn degree_bound(c: &Circuit) -> u64 {
    fold_degree(c, |n| u64::from(!matches!(n, Node::Const(_))))
}

fn fold_degree(c: &Circuit, leaf: impl Fn(&Node) -> u64) -> u64 {
    let mut deg: Vec<u64> = Vec::with_capacity(c.size());
    for node in c.nodes() {
        let d = match *node {
            Node::Add(a, b) => deg[a].max(deg[b]),
            Node::Mul(a, b) => deg[a].saturating_add(deg[b]),
            ref l => leaf(l),
        };
        deg.push(d);
    }
    deg[c.output()]
}

/// True iff every constant is −1 and there are no parameter slots in use.
pub fn is_constant_free(c: &Circuit) -> bool {
    let minus_one = BigInt::from(-1);
    c.nodes().iter().all(|n| match n {
        Node::Const(v) => *v == minus_one,
        Node::Param(_) => false,
        _ => true,
    })
}

pub fn metrics(c: &Circuit) -> CircuitMetrics {
    let max_const_abs = c
        .nodes()
        .iter()
        .filter_map(|n| match n {
            Node::Const(v) => v.abs().to_biguint(),
            _ => None,
        })
        .max()
        .unwrap_or_default();
    CircuitMetrics {
        size: c.size(),
        gate_count: c.gate_count(),
        formal_degree: formal_degree(c),
        max_const_abs,
    }
}

/// Exact weight of the computed polynomial against the bound `M^(s·d)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightReport {
    pub metrics: CircuitMetrics,
    #[serde(serialize_with = "crate::ser_display")]
    pub exact_weight: BigUint,
    #[serde(serialize_with = "crate::ser_display")]
    pub bound: BigUint,
    pub bound_holds: bool,
}

/// Expands `c` over the integers (parameters become extra variables) and
/// compares its weight to `M^(s·d)`. Exponents above 2^24 are refused.
pub fn weight_report(c: &Circuit, monomial_budget: usize) -> Result<WeightReport> {
    const MAX_EXPONENT: u64 = 1 << 24;
    let metrics = metrics(c);
    let exponent = (metrics.size as u64).saturating_mul(metrics.formal_degree);
    if exponent > MAX_EXPONENT {
        return Err(Error::Budget {
            what: "weight-bound exponent",
            limit: MAX_EXPONENT,
            reached: exponent,
        });
    }
    let poly = expand(c, Coeffs::Integers, None, monomial_budget)?;
    let exact_weight = poly.weight()?;
    let bound = num_traits::pow(metrics.weight_base(), exponent.to_usize().expect("exponent fits"));
    let bound_holds = exact_weight <= bound;
    debug_assert!(bound_holds, "weight bound violated: {exact_weight} > {bound}");
    Ok(WeightReport {
        metrics,
        exact_weight,
        bound,
        bound_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{parse_circuit, CircuitBuilder};

    #[test]
    fn formal_degrees() {
        assert_eq!(formal_degree(&parse_circuit("g1 = in 1\nout g1").unwrap()), 1);
        let sq = parse_circuit("g1 = in 1\ng2 = const 1\ng3 = add g1 g2\ng4 = mul g3 g3\nout g4").unwrap();
        assert_eq!(formal_degree(&sq), 2);
        // constants count as degree one
        let c = parse_circuit("g1 = const 5\ng2 = in 1\ng3 = mul g1 g2\ng4 = add g3 g2\nout g4").unwrap();
        assert_eq!(formal_degree(&c), 2);
        assert_eq!(degree_bound(&c), 1);
    }

    #[test]
    fn constant_freeness() {
        assert!(is_constant_free(&parse_circuit("g1 = in 1\ng2 = const -1\ng3 = mul g1 g2\nout g3").unwrap()));
        assert!(!is_constant_free(&parse_circuit("g1 = in 1\ng2 = const 2\ng3 = mul g1 g2\nout g3").unwrap()));
        assert!(!is_constant_free(&parse_circuit("g1 = in 1\ng2 = param 1\ng3 = mul g1 g2\nout g3").unwrap()));
    }

    #[test]
    fn weight_of_product() {
        // (2x + 3)(x - 1) = 2x^2 + x - 3
        let mut b = CircuitBuilder::new(1, 0);
        let x = b.input(1);
        let two = b.constant(2);
        let three = b.constant(3);
        let m1 = b.constant(-1);
        let tx = b.mul(two, x);
        let l = b.add(tx, three);
        let r = b.add(x, m1);
        let out = b.mul(l, r);
        let rep = weight_report(&b.finish(out), 1000).unwrap();
        assert_eq!(rep.exact_weight, BigUint::from(6u32));
        assert!(rep.bound_holds);
        assert_eq!(rep.metrics.weight_base(), BigUint::from(3u32));
    }

    #[test]
    fn bound_value() {
        // s = 3, d = 2, M = 2: x * x with a dangling constant 1
        let c = parse_circuit("g1 = in 1\ng2 = const 1\ng3 = mul g1 g1\nout g3").unwrap();
        let rep = weight_report(&c, 1000).unwrap();
        assert_eq!(rep.bound, BigUint::from(64u32));
        assert_eq!(rep.exact_weight, BigUint::from(1u32));
    }
}
