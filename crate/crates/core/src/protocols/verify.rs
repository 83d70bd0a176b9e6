use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{expand, Coeffs, SparsePoly};
use crate::circuit::{evaluate_in, formal_degree, Circuit};
use crate::error::{Error, Result};
use crate::families::SquareMatrix;
use crate::primes::{add_mod, mul_mod};
use crate::ring::Zp;

/// Result of checking a chain `C_1..C_t` against the permanent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainVerdict {
    pub accepted: bool,
    /// `0` for the base case, otherwise the level `k` whose identity failed.
    pub failed_level: Option<usize>,
    /// Random matrices evaluated before the verdict.
    pub evaluations: u32,
}

/// Checks that `chain[k − 1]` computes `per_k` modulo `p` by downward
/// self-reducibility: `C_1 ≡ x_{1,1}` exactly, and for `k ≥ 2` on `trials`
/// random matrices `M`, `C_k(M) = Σ_i M_{1,i}·C_{k−1}(M^{(1,i)})`.
///
/// Requires `p` above the largest formal degree in the chain.
pub fn permanent_verify(chain: &[Circuit], p: u64, trials: u32, seed: u64) -> Result<ChainVerdict> {
    let field = Zp::new(p)?;
    for (k, c) in chain.iter().enumerate() {
        let k = k + 1;
        if c.num_vars() != k * k || c.num_params() != 0 {
            return Err(Error::DimensionMismatch(format!(
                "level {k} has {} inputs and {} params, expected {} inputs",
                c.num_vars(),
                c.num_params(),
                k * k
            )));
        }
    }
    let d = chain.iter().map(formal_degree).max().unwrap_or(0);
    if p <= d {
        return Err(Error::Precondition(format!("p = {p} must exceed the formal degree {d}")));
    }
    let Some(first) = chain.first() else {
        return Err(Error::DimensionMismatch("empty chain".into()));
    };
    let base = expand(first, Coeffs::Mod(p), None, crate::Budgets::default().monomials)?;
    if base != SparsePoly::var(1, Coeffs::Mod(p), 0) {
        return Ok(ChainVerdict {
            accepted: false,
            failed_level: Some(0),
            evaluations: 0,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut evaluations = 0;
    for k in 2..=chain.len() {
        for _ in 0..trials {
            let m = SquareMatrix::from_fn(k, |_, _| rng.gen_range(0..p));
            evaluations += 1;
            let lhs = evaluate_in(&field, &chain[k - 1], m.entries(), &[])?;
            let mut rhs = 0;
            for i in 0..k {
                let minor = m.minor(0, i);
                let sub = evaluate_in(&field, &chain[k - 2], minor.entries(), &[])?;
                rhs = add_mod(rhs, mul_mod(*m.get(0, i), sub, p), p);
            }
            if lhs != rhs {
                return Ok(ChainVerdict {
                    accepted: false,
                    failed_level: Some(k),
                    evaluations,
                });
            }
        }
    }
    Ok(ChainVerdict {
        accepted: true,
        failed_level: None,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse_circuit;
    use crate::families::{determinant_circuit, permanent_chain, permanent_circuit};

    #[test]
    fn honest_chain() {
        for seed in 0..20 {
            let v = permanent_verify(&permanent_chain(3), 101, 3, seed).unwrap();
            assert!(v.accepted);
            assert_eq!(v.evaluations, 6);
        }
    }

    #[test]
    fn corrupted_base() {
        let c1 = parse_circuit("g1 = in 1\ng2 = const 1\ng3 = add g1 g2\nout g3").unwrap();
        let v = permanent_verify(&[c1, permanent_circuit(2)], 101, 3, 0).unwrap();
        assert_eq!(v.failed_level, Some(0));
    }

    #[test]
    fn determinant_is_caught() {
        let rejected = (0..200)
            .filter(|&seed| !permanent_verify(&[permanent_circuit(1), determinant_circuit(2)], 101, 2, seed).unwrap().accepted)
            .count();
        assert!(rejected >= 190);
    }

    #[test]
    fn refuses_small_primes() {
        assert!(matches!(permanent_verify(&permanent_chain(3), 3, 1, 0), Err(Error::Precondition(_))));
        assert!(matches!(
            permanent_verify(&[permanent_circuit(2)], 101, 1, 0),
            Err(Error::DimensionMismatch(_))
        ));
    }
}
