//! Search for hard 0/1 coefficient vectors and sign conditions.
//!
//! A vector `γ ∈ {0,1}^{d+1}` is *realizable* at `(s, d, p)` when some
//! parameter assignment of `U_s` over `F_p` has truncated coefficient vector
//! `γ`. The lexicographically first unrealizable vector (`γ_0` most
//! significant, `0 < 1`) is found in three independent ways:
//!
//! - by solving the systems `S_γ` exhaustively over `F_p`;
//! - by sweeping the coefficient map over all parameter assignments;
//! - by building the concrete circuit of every assignment (levels with zero
//!   coefficients omitted) and evaluating it in the sparse truncated ring.
//!
//! A fourth oracle enumerates all canonical circuits with at most `s`
//! vertices and constants in `F_p`; it certifies that a hard vector is not
//! computed by any small circuit.

use std::collections::BTreeSet;
use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{expand, poly::to_u64, Coeffs};
use crate::circuit::{
    enumerate_circuits, evaluate_in, is_constant_free, Circuit, CircuitBuilder, EnumerationSpec,
};
use crate::error::{Error, Result};
use crate::families::index_bits;
use crate::primes::is_prime;
use crate::ring::{DenseTruncated, TruncatedPolys};
use crate::systems::{build_hardness_system, solve_bruteforce};
use crate::universal::{build_universal, UniversalTemplate};
use crate::Budgets;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Oracle {
    /// Image of the dense truncated coefficient map over all assignments.
    ParameterSweep,
    /// One concrete universal-shape circuit per assignment, evaluated in the
    /// sparse truncated ring. Sizes are counted in levels, as for `U_s`.
    CircuitEnumeration,
    /// All canonical circuits with at most `s` vertices over one variable
    /// and constants `0..p−1`.
    FreeformEnumeration,
}

impl Oracle {
    pub fn name(&self) -> &'static str {
        match self {
            Oracle::ParameterSweep => "parameter-sweep",
            Oracle::CircuitEnumeration => "circuit-enumeration",
            Oracle::FreeformEnumeration => "freeform-enumeration",
        }
    }
}

/// All truncated coefficient vectors (not only 0/1 ones) produced by an
/// oracle up to degree `d_max`. Restricting to a smaller `d` takes prefixes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientImage {
    pub s: usize,
    pub p: u64,
    pub d_max: u32,
    pub oracle: Oracle,
    /// Number of assignments or circuits examined.
    pub examined: u64,
    pub vectors: BTreeSet<Vec<u64>>,
}

/// 0/1 vectors of length `d + 1` realized by an oracle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RealizableSet {
    pub s: usize,
    pub d: u32,
    pub p: u64,
    pub oracle: Oracle,
    pub examined: u64,
    pub vectors: BTreeSet<Vec<u8>>,
}

impl RealizableSet {
    /// Lexicographically first 0/1 vector missing from the set.
    pub fn first_absent(&self) -> HardOutcome {
        (0..1usize << (self.d + 1))
            .map(|idx| index_bits(self.d as usize + 1, idx))
            .find(|g| !self.vectors.contains(g))
            .map_or(HardOutcome::Saturated, HardOutcome::Found)
    }
}

impl CoefficientImage {
    pub fn compute(s: usize, d_max: u32, p: u64, oracle: Oracle, budgets: &Budgets) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let (examined, vectors) = match oracle {
            Oracle::ParameterSweep | Oracle::CircuitEnumeration => {
                let t = build_universal(s)?;
                let u = t.param_count();
                let total = (0..u).try_fold(1u64, |acc, _| acc.checked_mul(p)).unwrap_or(u64::MAX);
                if total > budgets.evaluations {
                    return Err(Error::Budget {
                        what: "parameter sweep",
                        limit: budgets.evaluations,
                        reached: total,
                    });
                }
                let vectors = if oracle == Oracle::ParameterSweep {
                    sweep(&t, d_max, p)?
                } else {
                    concrete_sweep(s, d_max, p, budgets.monomials)?
                };
                (total, vectors)
            }
            Oracle::FreeformEnumeration => {
                let pool: Vec<BigInt> = (0..p).map(BigInt::from).collect();
                let spec = EnumerationSpec::new(s, 1, pool).budget(budgets.circuits);
                let circuits: Vec<Circuit> = enumerate_circuits(&spec)?.collect();
                let ring = DenseTruncated::new(p, d_max)?;
                let vectors = circuits
                    .par_iter()
                    .map(|c| evaluate_in(&ring, c, &[ring.x()], &[]))
                    .collect::<Result<BTreeSet<_>>>()?;
                (circuits.len() as u64, vectors)
            }
        };
        Ok(CoefficientImage {
            s,
            p,
            d_max,
            oracle,
            examined,
            vectors,
        })
    }

    pub fn restrict(&self, d: u32) -> RealizableSet {
        assert!(d <= self.d_max, "degree {d} above the computed range {}", self.d_max);
        let vectors = self
            .vectors
            .iter()
            .map(|v| &v[..=d as usize])
            .filter(|v| v.iter().all(|&c| c <= 1))
            .map(|v| v.iter().map(|&c| c as u8).collect())
            .collect();
        RealizableSet {
            s: self.s,
            d,
            p: self.p,
            oracle: self.oracle,
            examined: self.examined,
            vectors,
        }
    }
}

/// Calls `f` on every assignment in `F_p^u`, partitioned over the first
/// coordinate, and unions the per-partition sets.
fn par_assignments<F>(u: usize, p: u64, f: F) -> Result<BTreeSet<Vec<u64>>>
where
    F: Fn(&[u64]) -> Result<Vec<u64>> + Sync,
{
    (0..p)
        .into_par_iter()
        .map(|first| {
            let mut set = BTreeSet::new();
            let mut v = vec![0u64; u];
            v[0] = first;
            loop {
                set.insert(f(&v)?);
                let mut k = u;
                loop {
                    k -= 1;
                    if k == 0 {
                        return Ok(set);
                    }
                    v[k] += 1;
                    if v[k] < p {
                        break;
                    }
                    v[k] = 0;
                }
            }
        })
        .try_reduce(BTreeSet::new, |mut a, b| {
            a.extend(b);
            Ok(a)
        })
}

fn sweep(t: &UniversalTemplate, d: u32, p: u64) -> Result<BTreeSet<Vec<u64>>> {
    let ring = DenseTruncated::new(p, d)?;
    par_assignments(t.param_count(), p, |v| {
        let ps: Vec<Vec<u64>> = v.iter().map(|&c| ring.scalar(c)).collect();
        evaluate_in(&ring, t.circuit(), &[ring.x()], &ps)
    })
}

/// The circuit `U_s` specialised at `v`, with zero terms left out and unit
/// coefficients not multiplied.
pub fn universal_instance(s: usize, v: &[u64]) -> Circuit {
    assert_eq!(v.len(), s * (s + 1), "assignment length");
    let mut b = CircuitBuilder::new(1, 0);
    let x = b.input(1);
    let mut levels = Vec::with_capacity(s);
    let affine = |b: &mut CircuitBuilder, offset: u64, terms: &[(u64, usize)]| {
        let mut parts = Vec::new();
        if offset != 0 {
            parts.push(b.constant(offset));
        }
        for &(c, node) in terms {
            match c {
                0 => {}
                1 => parts.push(node),
                _ => {
                    let k = b.constant(c);
                    parts.push(b.mul(k, node));
                }
            }
        }
        b.sum(&parts)
    };
    levels.push(affine(&mut b, v[0], &[(v[1], x)]));
    for j in 2..=s {
        let base = j * (j - 1);
        let a: Vec<(u64, usize)> = (1..j).map(|i| (v[base + i], levels[i - 1])).collect();
        let bb: Vec<(u64, usize)> = (1..j).map(|i| (v[base + j + i], levels[i - 1])).collect();
        let fa = affine(&mut b, v[base], &a);
        let fb = affine(&mut b, v[base + j], &bb);
        levels.push(b.mul(fa, fb));
    }
    let out = levels[s - 1];
    b.finish(out)
}

fn concrete_sweep(s: usize, d: u32, p: u64, budget: usize) -> Result<BTreeSet<Vec<u64>>> {
    let ring = TruncatedPolys {
        domain: Coeffs::Mod(p),
        nvars: 1,
        cap: d,
        budget,
    };
    let x = crate::algebra::SparsePoly::var(1, Coeffs::Mod(p), 0);
    par_assignments(s * (s + 1), p, |v| {
        let c = universal_instance(s, v);
        let poly = evaluate_in(&ring, &c, std::slice::from_ref(&x), &[])?;
        Ok(poly.univariate_coefficients(d)?.iter().map(to_u64).collect())
    })
}

pub fn realizable_vectors(s: usize, d: u32, p: u64, oracle: Oracle, budgets: &Budgets) -> Result<RealizableSet> {
    Ok(CoefficientImage::compute(s, d, p, oracle, budgets)?.restrict(d))
}

/// Either the lexicographically first hard vector or the statement that every
/// 0/1 vector is realizable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HardOutcome {
    Found(Vec<u8>),
    Saturated,
}

impl fmt::Display for HardOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HardOutcome::Found(g) => {
                for b in g {
                    write!(f, "{b}")?;
                }
                Ok(())
            }
            HardOutcome::Saturated => f.write_str("saturated"),
        }
    }
}

/// The lexicographically first `γ` whose system `S_γ` has no solution over
/// `F_p`. Requires `p > d`.
pub fn find_hard_gamma(s: usize, d: u32, p: u64, budgets: &Budgets) -> Result<HardOutcome> {
    if p <= u64::from(d) {
        return Err(Error::Precondition(format!(
            "p = {p} must exceed d = {d}: the points 0..={d} are not distinct mod p"
        )));
    }
    for idx in 0..1usize << (d + 1) {
        let gamma = index_bits(d as usize + 1, idx);
        let sys = build_hardness_system(s, d, &gamma)?;
        if solve_bruteforce(&sys, p, budgets.evaluations)?.is_none() {
            return Ok(HardOutcome::Found(gamma));
        }
    }
    Ok(HardOutcome::Saturated)
}

/// Per-oracle part of a [`ForgeReport`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub oracle: Oracle,
    pub examined: u64,
    pub realized: usize,
    pub outcome: HardOutcome,
}

/// Results of all hard-vector searches at one `(s, d, p)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ForgeReport {
    pub s: usize,
    pub d: u32,
    pub p: u64,
    /// Answer of the system-solvability path.
    pub gamma: HardOutcome,
    pub oracles: Vec<OracleResult>,
    pub agree: bool,
    /// `p^{s(s+1)} < 2^{d+1}`, in which case a hard vector must exist.
    pub counting_guarantee: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u128>,
}

impl fmt::Display for ForgeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "forge s={} d={} p={}", self.s, self.d, self.p)?;
        writeln!(f, "gamma={}", self.gamma)?;
        for o in &self.oracles {
            writeln!(
                f,
                "oracle={} examined={} realized={} gamma={}",
                o.oracle.name(),
                o.examined,
                o.realized,
                o.outcome
            )?;
        }
        writeln!(f, "agree={}", self.agree)?;
        writeln!(f, "counting_guarantee={}", self.counting_guarantee)?;
        if let Some(ms) = self.wall_ms {
            writeln!(f, "wall_ms={ms}")?;
        }
        Ok(())
    }
}

/// `p^{s(s+1)} < 2^{d+1}`.
pub fn counting_guarantee(s: usize, d: u32, p: u64) -> bool {
    let lhs = (0..s * (s + 1)).try_fold(1u128, |acc, _| acc.checked_mul(u128::from(p)));
    lhs.is_some_and(|l| l < 1u128 << (d + 1))
}

/// Runs the system path and both universal oracles and compares them.
pub fn forge(s: usize, d: u32, p: u64, budgets: &Budgets, timing: bool) -> Result<ForgeReport> {
    let start = Instant::now();
    let gamma = find_hard_gamma(s, d, p, budgets)?;
    let oracles = [Oracle::ParameterSweep, Oracle::CircuitEnumeration]
        .into_iter()
        .map(|o| {
            let set = realizable_vectors(s, d, p, o, budgets)?;
            Ok(OracleResult {
                oracle: o,
                examined: set.examined,
                realized: set.vectors.len(),
                outcome: set.first_absent(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let agree = oracles.iter().all(|o| o.outcome == gamma);
    Ok(ForgeReport {
        s,
        d,
        p,
        gamma,
        oracles,
        agree,
        counting_guarantee: counting_guarantee(s, d, p),
        wall_ms: timing.then(|| start.elapsed().as_millis()),
    })
}

/// Exhaustive check that no canonical circuit with at most `s` vertices and
/// constants in `F_p` has truncated coefficient vector `gamma`. Returns the
/// number of circuits examined, or the first offending circuit.
pub fn verify_hardness(s: usize, p: u64, gamma: &[u8], budgets: &Budgets) -> Result<std::result::Result<u64, Circuit>> {
    let d = gamma.len() as u32 - 1;
    let ring = DenseTruncated::new(p, d)?;
    let target: Vec<u64> = gamma.iter().map(|&g| u64::from(g)).collect();
    let pool: Vec<BigInt> = (0..p).map(BigInt::from).collect();
    let spec = EnumerationSpec::new(s, 1, pool).budget(budgets.circuits);
    let mut count = 0;
    for c in enumerate_circuits(&spec)? {
        if evaluate_in(&ring, &c, &[ring.x()], &[])? == target {
            return Ok(Err(c));
        }
        count += 1;
    }
    Ok(Ok(count))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Positive,
    Zero,
    Negative,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Positive => "positive",
            Sign::Zero => "zero",
            Sign::Negative => "negative",
        })
    }
}

fn univariate_constant_free(c: &Circuit) -> Result<Circuit> {
    if !is_constant_free(c) {
        return Err(Error::Precondition("circuit is not constant-free".into()));
    }
    if c.num_vars() > 1 {
        return Err(Error::Precondition(format!("expected one variable, got {}", c.num_vars())));
    }
    c.clone().with_num_vars(1)
}

/// Exact coefficient of `x^i` in a constant-free univariate circuit,
/// obtained by expansion truncated at degree `i`.
pub fn coefficient_of(c: &Circuit, i: u32, monomial_budget: usize) -> Result<BigInt> {
    let c = univariate_constant_free(c)?;
    expand(&c, Coeffs::Integers, Some(i), monomial_budget)?.coefficient(&[i])
}

/// Sign of the coefficient of `x^i`.
pub fn poscoef(c: &Circuit, i: u32, monomial_budget: usize) -> Result<Sign> {
    let v = coefficient_of(c, i, monomial_budget)?;
    Ok(if v.is_positive() {
        Sign::Positive
    } else if v.is_zero() {
        Sign::Zero
    } else {
        Sign::Negative
    })
}

/// `b_i = 1` iff the coefficient of `x^i` is strictly positive, `i ≤ big_d`.
pub fn sign_condition(c: &Circuit, big_d: u32, monomial_budget: usize) -> Result<Vec<u8>> {
    let c = univariate_constant_free(c)?;
    let poly = expand(&c, Coeffs::Integers, Some(big_d), monomial_budget)?;
    Ok(poly
        .univariate_coefficients(big_d)?
        .iter()
        .map(|v| u8::from(v.is_positive()))
        .collect())
}

/// Outcome of [`sign_condition_search`] with the realized set that proves it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignSearch {
    pub s: usize,
    pub big_d: u32,
    pub circuits: u64,
    pub realized: BTreeSet<Vec<u8>>,
    pub outcome: HardOutcome,
}

impl fmt::Display for SignSearch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "signcond s={} D={}", self.s, self.big_d)?;
        writeln!(f, "circuits={} realized={}", self.circuits, self.realized.len())?;
        writeln!(f, "condition={}", self.outcome)
    }
}

/// Lexicographically first `b ∈ {0,1}^{D+1}` that is the sign condition of
/// no constant-free circuit with at most `s` vertices.
pub fn sign_condition_search(s: usize, big_d: u32, budgets: &Budgets) -> Result<SignSearch> {
    let spec = EnumerationSpec::new(s, 1, vec![BigInt::from(-1)]).budget(budgets.circuits);
    let circuits: Vec<Circuit> = enumerate_circuits(&spec)?.collect();
    let realized = circuits
        .par_iter()
        .map(|c| sign_condition(c, big_d, budgets.monomials))
        .collect::<Result<BTreeSet<_>>>()?;
    let outcome = (0..1usize << (big_d + 1))
        .map(|idx| index_bits(big_d as usize + 1, idx))
        .find(|b| !realized.contains(b))
        .map_or(HardOutcome::Saturated, HardOutcome::Found);
    Ok(SignSearch {
        s,
        big_d,
        circuits: circuits.len() as u64,
        realized,
        outcome,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse_circuit;

    fn budgets() -> Budgets {
        Budgets::default()
    }

    #[test]
    fn linear_level_sweeps() {
        let expect: BTreeSet<Vec<u8>> = [vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0]].into();
        for p in [2, 5] {
            let set = realizable_vectors(1, 2, p, Oracle::ParameterSweep, &budgets()).unwrap();
            assert_eq!(set.vectors, expect);
        }
        for s in 1..=2 {
            let set = realizable_vectors(s, 0, 5, Oracle::ParameterSweep, &budgets()).unwrap();
            assert!(set.vectors.contains(&vec![0]) && set.vectors.contains(&vec![1]));
        }
    }

    #[test]
    fn first_hard_vector() {
        assert_eq!(find_hard_gamma(1, 2, 5, &budgets()).unwrap(), HardOutcome::Found(vec![0, 0, 1]));
        assert!(matches!(find_hard_gamma(1, 2, 2, &budgets()), Err(Error::Precondition(_))));
        assert_eq!(find_hard_gamma(1, 0, 5, &budgets()).unwrap(), HardOutcome::Saturated);
        let rep = forge(1, 2, 5, &budgets(), false).unwrap();
        assert!(rep.agree);
        assert!(rep.to_string().contains("gamma=001"));
    }

    #[test]
    fn instance_matches_template() {
        let t = build_universal(2).unwrap();
        let v = [1, 2, 3, 0, 4, 1, 0];
        let c = universal_instance(2, &v[..6]);
        let ring = DenseTruncated::new(7, 4).unwrap();
        let direct = evaluate_in(&ring, &c, &[ring.x()], &[]).unwrap();
        let via = crate::universal::truncated_coefficient_map(&t, 4, 7, &v[..6]).unwrap();
        assert_eq!(direct, via.entries);
    }

    #[test]
    fn certificates() {
        assert_eq!(verify_hardness(1, 5, &[0, 0, 1], &budgets()).unwrap(), Ok(6));
        assert!(verify_hardness(2, 5, &[0, 0, 1], &budgets()).unwrap().is_err());
    }

    #[test]
    fn coefficient_signs() {
        let c = parse_circuit("g1 = in 1\ng2 = const -1\ng3 = add g1 g2\ng4 = mul g3 g3\nout g4").unwrap();
        assert_eq!(poscoef(&c, 1, 1000).unwrap(), Sign::Negative);
        assert_eq!(poscoef(&c, 2, 1000).unwrap(), Sign::Positive);
        assert_eq!(poscoef(&c, 3, 1000).unwrap(), Sign::Zero);
        let two = parse_circuit("g1 = const 2\nout g1").unwrap();
        assert!(matches!(poscoef(&two, 0, 1000), Err(Error::Precondition(_))));
    }

    #[test]
    fn sign_conditions() {
        let r = sign_condition_search(1, 2, &budgets()).unwrap();
        assert_eq!(r.realized, [vec![0, 1, 0], vec![0, 0, 0]].into());
        assert_eq!(r.outcome, HardOutcome::Found(vec![0, 0, 1]));
        assert_eq!(sign_condition_search(3, 0, &budgets()).unwrap().outcome, HardOutcome::Saturated);
        assert_eq!(sign_condition_search(0, 3, &budgets()).unwrap().outcome, HardOutcome::Found(vec![0; 4]));
    }

    #[test]
    fn counting() {
        assert!(counting_guarantee(1, 4, 5));
        assert!(!counting_guarantee(1, 3, 5));
        assert!(!counting_guarantee(2, 6, 5));
    }
}
