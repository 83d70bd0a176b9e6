//! Polynomial systems given as circuits over shared unknowns, their
//! construction from universal templates and language tables, exhaustive
//! solving over `F_p` and prime-density probes.

use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::circuit::{evaluate_in, parse_circuit, Circuit, CircuitBuilder, Node};
use crate::error::{Error, Result};
use crate::families::{index_bits, projection_apply, Target};
use crate::primes::{add_mod, is_prime, mul_mod, primes_up_to};
use crate::ring::{Ring, Zp};
use crate::universal::Side;

/// Equations `P_k = 0`, each a circuit whose parameter slots `1..=u` are the
/// unknowns and which has no free inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySystem {
    unknowns: usize,
    equations: Vec<Circuit>,
    /// Free-form description of how the system was obtained.
    pub provenance: String,
    /// When set, solving is only meaningful for primes above this value.
    pub modulus_above: Option<u64>,
}

impl PolySystem {
    pub fn new(unknowns: usize, equations: Vec<Circuit>, provenance: impl Into<String>) -> Result<Self> {
        let equations = equations
            .into_iter()
            .enumerate()
            .map(|(k, c)| {
                if c.num_vars() > 0 && c.nodes().iter().any(|n| matches!(n, Node::Input(_))) {
                    return Err(Error::InvalidCircuit(format!("equation {} has free inputs", k + 1)));
                }
                c.with_num_vars(0)?.with_num_params(unknowns)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PolySystem {
            unknowns,
            equations,
            provenance: provenance.into(),
            modulus_above: None,
        })
    }

    pub fn unknowns(&self) -> usize {
        self.unknowns
    }

    pub fn equations(&self) -> &[Circuit] {
        &self.equations
    }

    /// True iff every equation vanishes at `v` over `F_p`.
    pub fn is_satisfied(&self, p: u64, v: &[u64]) -> Result<bool> {
        let field = Zp::new(p)?;
        for eq in &self.equations {
            if evaluate_in(&field, eq, &[], v)? != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Parses `unknowns <u>` followed by `---`-separated circuits. Comment
    /// lines `# provenance: ...` and `# modulus-above: <d>` in the header are
    /// read back.
    pub fn parse(text: &str) -> Result<Self> {
        let mut chunks: Vec<(usize, Vec<&str>)> = vec![(1, Vec::new())];
        for (k, line) in text.lines().enumerate() {
            if line.trim() == "---" {
                chunks.push((k + 2, Vec::new()));
            } else {
                chunks.last_mut().expect("nonempty").1.push(line);
            }
        }
        let (_, header) = chunks.remove(0);
        let mut unknowns = None;
        let mut provenance = String::new();
        let mut modulus_above = None;
        for (k, line) in header.iter().enumerate() {
            let t = line.trim();
            if let Some(rest) = t.strip_prefix("# provenance:") {
                provenance = rest.trim().to_string();
            } else if let Some(rest) = t.strip_prefix("# modulus-above:") {
                modulus_above = Some(rest.trim().parse::<u64>().map_err(|_| Error::Syntax {
                    line: k + 1,
                    msg: "bad modulus-above value".into(),
                })?);
            } else if t.starts_with('#') || t.is_empty() {
                continue;
            } else if let Some(rest) = t.strip_prefix("unknowns ") {
                unknowns = Some(rest.trim().parse::<usize>().map_err(|_| Error::Syntax {
                    line: k + 1,
                    msg: "bad unknown count".into(),
                })?);
            } else {
                return Err(Error::Syntax {
                    line: k + 1,
                    msg: format!("unexpected header line {t:?}"),
                });
            }
        }
        let unknowns = unknowns.ok_or(Error::Syntax {
            line: 1,
            msg: "missing `unknowns <u>` header".into(),
        })?;
        let equations = chunks
            .into_iter()
            .map(|(first, lines)| {
                parse_circuit(&lines.join("\n")).map_err(|e| match e {
                    Error::Syntax { line, msg } => Error::Syntax { line: line + first - 1, msg },
                    Error::ForwardReference { line, name } => Error::ForwardReference { line: line + first - 1, name },
                    Error::UndefinedGate { line, name } => Error::UndefinedGate { line: line + first - 1, name },
                    Error::DuplicateGate { line, name } => Error::DuplicateGate { line: line + first - 1, name },
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut sys = PolySystem::new(unknowns, equations, provenance)?;
        sys.modulus_above = modulus_above;
        Ok(sys)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for PolySystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "unknowns {}", self.unknowns)?;
        if !self.provenance.is_empty() {
            writeln!(f, "# provenance: {}", self.provenance)?;
        }
        if let Some(d) = self.modulus_above {
            writeln!(f, "# modulus-above: {d}")?;
        }
        for eq in &self.equations {
            writeln!(f, "---")?;
            write!(f, "{}", eq.to_text())?;
        }
        Ok(())
    }
}

/// The system `S_γ`: unknowns are the `s(s+1)` universal parameters, and for
/// every `m ∈ {0..d}` one equation `U_{s|d}(a, b, m) − P_γ(m) = 0`, where
/// `U_{s|d}(m) = Σ_i α_i m^i` is built from the coefficient recursion truncated
/// at degree `d` and `P_γ(m) = Σ γ_i m^i`.
pub fn build_hardness_system(s: usize, d: u32, gamma: &[u8]) -> Result<PolySystem> {
    if s == 0 {
        return Err(Error::Precondition("hardness systems need s >= 1".into()));
    }
    if gamma.len() != d as usize + 1 {
        return Err(Error::DimensionMismatch(format!("gamma of length {} for d = {d}", gamma.len())));
    }
    if gamma.iter().any(|&g| g > 1) {
        return Err(Error::Domain("gamma must be a 0/1 vector".into()));
    }
    let d = d as usize;
    let slot = |j: usize, i: usize, side: Side| j * (j - 1) + i + 1 + if side == Side::B { j } else { 0 };
    let mut b = CircuitBuilder::new(0, s * (s + 1));
    // alpha[k][i]: coefficient of x^i in level k + 1, `None` when identically zero
    let mut alpha: Vec<Vec<Option<usize>>> = Vec::with_capacity(s);
    let mut first = vec![None; d + 1];
    first[0] = Some(b.param(slot(1, 0, Side::A)));
    if d >= 1 {
        first[1] = Some(b.param(slot(1, 0, Side::B)));
    }
    alpha.push(first);
    for j in 2..=s {
        let factor = |side: Side, b: &mut CircuitBuilder| -> Vec<Option<usize>> {
            (0..=d)
                .map(|i| {
                    let mut terms: Vec<usize> = Vec::new();
                    if i == 0 {
                        terms.push(b.param(slot(j, 0, side)));
                    }
                    for (k, level) in alpha.iter().enumerate() {
                        if let Some(a) = level[i] {
                            let coef = b.param(slot(j, k + 1, side));
                            terms.push(b.mul(coef, a));
                        }
                    }
                    (!terms.is_empty()).then(|| b.sum(&terms))
                })
                .collect()
        };
        let fa = factor(Side::A, &mut b);
        let fb = factor(Side::B, &mut b);
        let level = (0..=d)
            .map(|i| {
                let terms: Vec<usize> = (0..=i)
                    .filter_map(|i1| Some((fa[i1]?, fb[i - i1]?)))
                    .map(|(x, y)| b.mul(x, y))
                    .collect();
                (!terms.is_empty()).then(|| b.sum(&terms))
            })
            .collect();
        alpha.push(level);
    }
    let top = alpha.last().expect("s >= 1").clone();
    let mut equations = Vec::with_capacity(d + 1);
    for m in 0..=d {
        let mut eb = b.clone();
        let mut terms = Vec::new();
        let mut target = BigInt::from(0);
        for i in 0..=d {
            let power = if m == 0 && i == 0 { BigInt::from(1) } else { BigInt::from(m).pow(i as u32) };
            if gamma[i] == 1 {
                target += &power;
            }
            if power == BigInt::from(0) {
                continue;
            }
            if let Some(a) = top[i] {
                let t = if power == BigInt::from(1) {
                    a
                } else {
                    let c = eb.constant(power);
                    eb.mul(c, a)
                };
                terms.push(t);
            }
        }
        let neg = eb.constant(-target);
        terms.push(neg);
        let out = eb.sum(&terms);
        equations.push(eb.finish(out).prune());
    }
    let bits: String = gamma.iter().map(|g| char::from(b'0' + g)).collect();
    let mut sys = PolySystem::new(
        s * (s + 1),
        equations,
        format!("hardness system s={s} d={d} gamma={bits}"),
    )?;
    sys.modulus_above = Some(d as u64);
    Ok(sys)
}

/// The system deciding membership of `L` through a skeleton circuit
/// `C(x, Y)` over `n` inputs and `k` parameters: unknowns `Y_1..Y_k` and `Z`
/// (slot `k + 1`), one equation `C(x, Y) = 0` per rejected `x`, and finally
/// `(Π_{x∈L} C(x, Y))·Z − 1 = 0`. Points are visited with `x_1` most
/// significant.
pub fn build_language_system(accept: &[bool], skeleton: &Circuit) -> Result<PolySystem> {
    let n = skeleton.num_vars();
    if n > 12 {
        return Err(Error::Budget {
            what: "language-table arity",
            limit: 12,
            reached: n as u64,
        });
    }
    if accept.len() != 1 << n {
        return Err(Error::DimensionMismatch(format!(
            "membership table of size {} for {n} inputs",
            accept.len()
        )));
    }
    let k = skeleton.num_params();
    let mut equations = Vec::new();
    let mut accepted = Vec::new();
    for (idx, &inside) in accept.iter().enumerate() {
        let subst: Vec<Target> = index_bits(n, idx).into_iter().map(|b| Target::Const(b.into())).collect();
        let c = projection_apply(skeleton, &subst, 0)?.with_num_params(k + 1)?;
        if inside {
            accepted.push(c);
        } else {
            equations.push(c);
        }
    }
    let mut b = CircuitBuilder::new(0, k + 1);
    let params: Vec<usize> = (1..=k + 1).map(|j| b.param(j)).collect();
    let factors: Vec<usize> = accepted.iter().map(|c| b.inline(c, &[], &params)).collect();
    let prod = b.product(&factors);
    let with_z = b.mul(prod, params[k]);
    let m1 = b.constant(-1);
    let out = b.add(with_z, m1);
    equations.push(b.finish(out));
    PolySystem::new(k + 1, equations, format!("language system n={n} accepted={}", accepted.len()))
}

#[derive(Clone, Copy, Debug)]
enum Op {
    Param(usize),
    Const(u64),
    Add(usize, usize),
    Mul(usize, usize),
}

fn compile(c: &Circuit, p: u64) -> Vec<Op> {
    let field = Zp::new(p).expect("caller checked primality");
    c.nodes()
        .iter()
        .map(|n| match n {
            Node::Param(j) => Op::Param(j - 1),
            Node::Const(v) => Op::Const(field.from_int(v)),
            Node::Add(a, b) => Op::Add(*a, *b),
            Node::Mul(a, b) => Op::Mul(*a, *b),
            Node::Input(_) => unreachable!("systems have no free inputs"),
        })
        .collect()
}

fn run(prog: &[Op], out: usize, v: &[u64], regs: &mut [u64], p: u64) -> u64 {
    for (i, op) in prog.iter().enumerate() {
        regs[i] = match *op {
            Op::Param(j) => v[j],
            Op::Const(c) => c,
            Op::Add(a, b) => add_mod(regs[a], regs[b], p),
            Op::Mul(a, b) => mul_mod(regs[a], regs[b], p),
        };
    }
    regs[out]
}

/// The lexicographically first solution over `F_p` (unknown 1 most
/// significant, residues `0..p−1`), or `None`. Refuses when `p^u` exceeds
/// `budget` or when `p` is not above the system's `modulus_above`.
pub fn solve_bruteforce(sys: &PolySystem, p: u64, budget: u64) -> Result<Option<Vec<u64>>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if let Some(d) = sys.modulus_above {
        if p <= d {
            return Err(Error::Precondition(format!(
                "p = {p} must exceed {d}: the points 0..={d} are not distinct mod p"
            )));
        }
    }
    let u = sys.unknowns;
    let total = (0..u).try_fold(1u64, |acc, _| acc.checked_mul(p)).unwrap_or(u64::MAX);
    if total > budget {
        return Err(Error::Budget {
            what: "assignment",
            limit: budget,
            reached: total,
        });
    }
    let progs: Vec<(Vec<Op>, usize)> = sys.equations.iter().map(|c| (compile(c, p), c.output())).collect();
    let mut regs = vec![0u64; progs.iter().map(|(ops, _)| ops.len()).max().unwrap_or(0)];
    let mut v = vec![0u64; u];
    loop {
        if progs.iter().all(|(ops, out)| run(ops, *out, &v, &mut regs, p) == 0) {
            assert!(sys.is_satisfied(p, &v)?, "compiled and generic evaluation disagree");
            return Ok(Some(v));
        }
        // odometer with the last unknown least significant
        let mut k = u;
        loop {
            if k == 0 {
                return Ok(None);
            }
            k -= 1;
            v[k] += 1;
            if v[k] < p {
                break;
            }
            v[k] = 0;
        }
    }
}

/// Counts of primes `p ≤ a` for which a system is solvable over `F_p`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityReport {
    pub a: u64,
    pub pi_a: usize,
    pub pi_s_a: usize,
    pub good_primes: Vec<u64>,
    /// Lexicographically first solution for each good prime.
    pub witnesses: Vec<Vec<u64>>,
    pub ratio: f64,
}

impl DensityReport {
    fn from_results(a: u64, results: Vec<(u64, Option<Vec<u64>>)>) -> Self {
        let pi_a = results.len();
        let (good_primes, witnesses): (Vec<u64>, Vec<Vec<u64>>) =
            results.into_iter().filter_map(|(p, w)| Some((p, w?))).unzip();
        let pi_s_a = good_primes.len();
        DensityReport {
            a,
            pi_a,
            pi_s_a,
            good_primes,
            witnesses,
            ratio: if pi_a == 0 { 0.0 } else { pi_s_a as f64 / pi_a as f64 },
        }
    }
}

impl fmt::Display for DensityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pi_S={} pi={} ratio={:?}", self.pi_s_a, self.pi_a, self.ratio)
    }
}

/// A probe stopped by a resource limit. `report` covers exactly the primes
/// below `high_water`.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialDensity {
    pub report: DensityReport,
    pub high_water: u64,
    pub cause: Error,
}

impl From<PartialDensity> for Error {
    fn from(p: PartialDensity) -> Self {
        p.cause
    }
}

/// Solves `sys` for every prime `p ≤ a` in parallel. Primes at or below the
/// system's `modulus_above` are skipped.
pub fn density_probe(sys: &PolySystem, a: u64, budget: u64) -> std::result::Result<DensityReport, PartialDensity> {
    let floor = sys.modulus_above.unwrap_or(0);
    let primes: Vec<u64> = primes_up_to(a).into_iter().filter(|&p| p > floor).collect();
    let results: Vec<(u64, Result<Option<Vec<u64>>>)> =
        primes.par_iter().map(|&p| (p, solve_bruteforce(sys, p, budget))).collect();
    let mut done = Vec::new();
    for (p, r) in results {
        match r {
            Ok(w) => done.push((p, w)),
            Err(cause) => {
                return Err(PartialDensity {
                    report: DensityReport::from_results(p - 1, done),
                    high_water: p,
                    cause,
                })
            }
        }
    }
    Ok(DensityReport::from_results(a, done))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xsq_plus_1() -> PolySystem {
        PolySystem::parse("unknowns 1\n---\ng1 = param 1\ng2 = mul g1 g1\ng3 = const 1\ng4 = add g2 g3\nout g4\n").unwrap()
    }

    #[test]
    fn sum_of_squares() {
        let s = xsq_plus_1();
        assert_eq!(solve_bruteforce(&s, 5, 100).unwrap(), Some(vec![2]));
        assert_eq!(solve_bruteforce(&s, 7, 100).unwrap(), None);
        assert_eq!(solve_bruteforce(&s, 2, 100).unwrap(), Some(vec![1]));
        let rep = density_probe(&s, 20, 100).unwrap();
        assert_eq!(rep.good_primes, vec![2, 5, 13, 17]);
        assert_eq!(rep.to_string(), "pi_S=4 pi=8 ratio=0.5");
    }

    #[test]
    fn text_round_trip() {
        let s = build_hardness_system(2, 2, &[0, 1, 1]).unwrap();
        let again = PolySystem::parse(&s.to_text()).unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn hardness_systems() {
        let s = build_hardness_system(1, 1, &[1, 1]).unwrap();
        assert_eq!(solve_bruteforce(&s, 5, 1000).unwrap(), Some(vec![1, 1]));
        let s = build_hardness_system(1, 2, &[0, 0, 1]).unwrap();
        assert_eq!(solve_bruteforce(&s, 5, 1000).unwrap(), None);
        assert!(matches!(solve_bruteforce(&s, 2, 1000), Err(Error::Precondition(_))));
        for (sz, d) in [(1, 2), (2, 3), (2, 0)] {
            let z = build_hardness_system(sz, d, &vec![0; d as usize + 1]).unwrap();
            let w = solve_bruteforce(&z, 5, 1 << 24).unwrap().unwrap();
            assert!(w.iter().all(|&v| v == 0));
        }
    }

    #[test]
    fn language_systems() {
        let skel = crate::circuit::parse_circuit("nvars 1\nnparams 1\ng1 = in 1\ng2 = param 1\ng3 = mul g1 g2\nout g3").unwrap();
        let s = build_language_system(&[false, true], &skel).unwrap();
        assert_eq!(s.unknowns(), 2);
        assert_eq!(s.equations().len(), 2);
        assert_eq!(solve_bruteforce(&s, 5, 100).unwrap(), Some(vec![1, 1]));

        let y = crate::circuit::parse_circuit("nvars 1\nnparams 1\ng1 = param 1\nout g1").unwrap();
        let s = build_language_system(&[false, false], &y).unwrap();
        assert_eq!(s.equations().len(), 3);
        assert_eq!(solve_bruteforce(&s, 5, 100).unwrap(), Some(vec![0, 1]));

        let zero = crate::circuit::parse_circuit("nvars 1\ng1 = const 0\nout g1").unwrap();
        let s = build_language_system(&[true, true], &zero).unwrap();
        for p in [2, 3, 5, 7] {
            assert_eq!(solve_bruteforce(&s, p, 100).unwrap(), None);
        }
    }

    #[test]
    fn budget_and_partial_reports() {
        let s = build_hardness_system(2, 1, &[0, 1]).unwrap();
        let err = density_probe(&s, 30, 10_000).unwrap_err();
        assert_eq!(err.high_water, 5);
        assert_eq!(err.report.pi_a, 2);
        assert!(err.cause.is_resource());
    }
}
