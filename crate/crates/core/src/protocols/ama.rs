use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::hash::{phi_witness, psi, HashMatrix};
use super::verify::permanent_verify;
use crate::circuit::{degree_bound, evaluate_in, formal_degree, Circuit, CircuitBuilder};
use crate::error::{Error, Result};
use crate::families::{determinant_circuit, permanent_circuit, permanent_eval, projection_apply, SquareMatrix, Target};
use crate::primes::{is_prime, next_prime, primes_up_to};
use crate::ring::{Integers, Ring, Zp};
use crate::systems::{solve_bruteforce, PolySystem};

/// Protocol sizes: `m` hash matrices of `m` rows over `cols`-bit encodings,
/// and `verify_trials` random matrices per level in each permanent check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AmaConfig {
    pub m: usize,
    pub cols: usize,
    pub verify_trials: u32,
    /// Cap on `p^u` for each per-prime root search of Merlin's system.
    pub solve_budget: u64,
}

impl Default for AmaConfig {
    fn default() -> Self {
        AmaConfig {
            m: 4,
            cols: 12,
            verify_trials: 2,
            solve_budget: 1 << 20,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheatVariant {
    /// Sends `u_1·det_t` as the skeleton and collides over all primes.
    DeterminantSkeleton,
    /// Sends the honest skeleton with composite moduli.
    BogusPrimes,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProverMode {
    Honest,
    Cheating(CheatVariant),
}

impl std::str::FromStr for ProverMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "honest" => Ok(ProverMode::Honest),
            "determinant" | "determinant-skeleton" => Ok(ProverMode::Cheating(CheatVariant::DeterminantSkeleton)),
            "bogus-primes" => Ok(ProverMode::Cheating(CheatVariant::BogusPrimes)),
            other => Err(Error::Domain(format!(
                "unknown prover '{other}' (honest, determinant, bogus-primes)"
            ))),
        }
    }
}

/// What Merlin commits to for matrices of side `t`: the chain `C_1..C_t`
/// (only `C_t` has parameters), the moduli he is prepared to use and his
/// constants for each of them.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub chain: Vec<Circuit>,
    /// Integer constants used for the large prime.
    pub constants: Vec<BigInt>,
    /// Candidate small moduli in increasing order.
    pub moduli: Vec<u64>,
    pub residues: HashMap<u64, Vec<u64>>,
}

/// A prover. Certificates are computed once per matrix side and shared
/// between runs.
#[derive(Debug)]
pub struct ProverStrategy {
    mode: ProverMode,
    cache: Mutex<HashMap<(usize, usize), Arc<Certificate>>>,
}

impl ProverStrategy {
    pub fn new(mode: ProverMode) -> Self {
        ProverStrategy {
            mode,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn honest() -> Self {
        ProverStrategy::new(ProverMode::Honest)
    }

    pub fn cheating(variant: CheatVariant) -> Self {
        ProverStrategy::new(ProverMode::Cheating(variant))
    }

    pub fn mode(&self) -> ProverMode {
        self.mode
    }

    pub fn certificate(&self, t: usize, config: &AmaConfig) -> Result<Arc<Certificate>> {
        let key = (t, config.cols);
        if let Some(c) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(Arc::clone(c));
        }
        let cert = Arc::new(match self.mode {
            ProverMode::Honest => honest_certificate(t, config)?,
            ProverMode::Cheating(CheatVariant::DeterminantSkeleton) => {
                let chain = skeleton_chain(t, determinant_circuit(t));
                let lo = degree_bound(chain.last().expect("t ≥ 1"));
                let moduli: Vec<u64> = primes_up_to((1u64 << config.cols) - 1).into_iter().filter(|&q| q > lo).collect();
                uniform_certificate(chain, moduli)
            }
            ProverMode::Cheating(CheatVariant::BogusPrimes) => {
                let chain = skeleton_chain(t, permanent_circuit(t));
                let lo = degree_bound(chain.last().expect("t ≥ 1"));
                let moduli: Vec<u64> = (lo + 1..1u64 << config.cols).filter(|&q| q % 2 == 1 && !is_prime(q)).collect();
                uniform_certificate(chain, moduli)
            }
        });
        self.cache.lock().expect("cache lock").insert(key, Arc::clone(&cert));
        Ok(cert)
    }
}

/// `[per_1, …, per_{t−1}, u_1·top]`.
fn skeleton_chain(t: usize, top: Circuit) -> Vec<Circuit> {
    let mut chain: Vec<Circuit> = (1..t).map(permanent_circuit).collect();
    let mut b = CircuitBuilder::new(t * t, 1);
    let inputs: Vec<usize> = (1..=t * t).map(|j| b.input(j)).collect();
    let u = b.param(1);
    let body = b.inline(&top, &inputs, &[]);
    let out = b.mul(u, body);
    chain.push(b.finish(out));
    chain
}

fn uniform_certificate(chain: Vec<Circuit>, moduli: Vec<u64>) -> Certificate {
    let k = chain.last().map_or(0, Circuit::num_params);
    let residues = moduli.iter().map(|&q| (q, vec![1; k])).collect();
    Certificate {
        chain,
        constants: vec![BigInt::from(1); k],
        moduli,
        residues,
    }
}

/// The interpolation-grid system for a skeleton `C(y, u)` of side `t`:
/// unknowns `u`, one equation `C(ε, u) − per_t(ε) = 0` per
/// `ε ∈ {0..D}^{t²}` with `D` the skeleton's degree bound.
pub fn skeleton_system(skeleton: &Circuit, t: usize) -> Result<PolySystem> {
    if skeleton.num_vars() != t * t {
        return Err(Error::DimensionMismatch(format!(
            "skeleton has {} inputs for a {t} x {t} matrix",
            skeleton.num_vars()
        )));
    }
    let d = degree_bound(skeleton);
    let k = skeleton.num_params();
    let points = (d + 1).checked_pow((t * t) as u32).filter(|&n| n <= 1 << 16).ok_or(Error::Budget {
        what: "interpolation grid points",
        limit: 1 << 16,
        reached: u64::MAX,
    })?;
    let mut equations = Vec::with_capacity(points as usize);
    for idx in 0..points {
        let mut rest = idx;
        let eps: Vec<u64> = (0..t * t)
            .map(|_| {
                let v = rest % (d + 1);
                rest /= d + 1;
                v
            })
            .collect();
        let subst: Vec<Target> = eps.iter().map(|&v| Target::Const(v.into())).collect();
        let at = projection_apply(skeleton, &subst, 0)?;
        let per = permanent_eval(&Integers, &SquareMatrix::from_fn(t, |r, c| BigInt::from(eps[r * t + c])))?;
        let mut b = CircuitBuilder::new(0, k);
        let params: Vec<usize> = (1..=k).map(|j| b.param(j)).collect();
        let value = b.inline(&at, &[], &params);
        let neg = b.constant(-per);
        let out = b.add(value, neg);
        equations.push(b.finish(out));
    }
    let mut sys = PolySystem::new(k, equations, format!("skeleton grid t={t} D={d}"))?;
    sys.modulus_above = Some(d);
    Ok(sys)
}

fn honest_certificate(t: usize, config: &AmaConfig) -> Result<Certificate> {
    let chain = skeleton_chain(t, permanent_circuit(t));
    let sys = skeleton_system(chain.last().expect("t ≥ 1"), t)?;
    let lo = sys.modulus_above.unwrap_or(0);
    let candidates: Vec<u64> = primes_up_to((1u64 << config.cols) - 1).into_iter().filter(|&q| q > lo).collect();
    let solved: Vec<(u64, Option<Vec<u64>>)> = candidates
        .par_iter()
        .map(|&q| solve_bruteforce(&sys, q, config.solve_budget).map(|w| (q, w)))
        .collect::<Result<_>>()?;
    let mut moduli = Vec::new();
    let mut residues = HashMap::new();
    for (q, w) in solved {
        if let Some(w) = w {
            moduli.push(q);
            residues.insert(q, w);
        }
    }
    Ok(Certificate {
        chain,
        constants: vec![BigInt::from(1)],
        moduli,
        residues,
    })
}

/// `(|y|, |z|)` with `0 < |y| ≤ |z|` and `|z|` a power of two.
pub fn split_lengths(n: usize) -> Result<(usize, usize)> {
    if n < 2 {
        return Err(Error::Precondition(format!("cannot split {n} inputs")));
    }
    let z = 1usize << (usize::BITS - 1 - (n - 1).leading_zeros());
    Ok((n - z, z))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sender {
    A,
    M,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Message {
    pub round: u32,
    pub sender: Sender,
    pub payload: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coin {
    pub label: String,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProtocolTranscript {
    pub seed: u64,
    pub rounds: Vec<Message>,
    pub coins: Vec<Coin>,
    pub accepted: bool,
    /// Bit Arthur derived from Merlin's certificate, if it passed his checks.
    pub answer: Option<u8>,
    /// `None` when no certificate was requested (non-square branch).
    pub checks_passed: Option<bool>,
}

impl ProtocolTranscript {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for m in &self.rounds {
            let sender = match m.sender {
                Sender::A => "A",
                Sender::M => "M",
            };
            let _ = writeln!(out, "round={} sender={sender} payload={}", m.round, m.payload);
        }
        let answer = self.answer.map_or("none".to_string(), |b| b.to_string());
        let _ = writeln!(
            out,
            "verdict={} answer={answer}",
            if self.accepted { "accept" } else { "reject" }
        );
        out
    }
}

impl std::fmt::Display for ProtocolTranscript {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_text())
    }
}

struct Transcript {
    t: ProtocolTranscript,
}

impl Transcript {
    fn say(&mut self, round: u32, sender: Sender, payload: String) {
        self.t.rounds.push(Message { round, sender, payload });
    }

    fn finish(mut self, accepted: bool, answer: Option<u8>, checks: Option<bool>) -> ProtocolTranscript {
        self.t.accepted = accepted;
        self.t.answer = answer;
        self.t.checks_passed = checks;
        self.t
    }
}

fn factorial_power(n: usize, m: u64) -> Option<u64> {
    let fact = (1..=n as u64).try_fold(1u64, |a, k| a.checked_mul(k))?;
    (0..n).try_fold(fact, |a, _| a.checked_mul(m))
}

fn encode_residues(r: &[u64]) -> String {
    let body: Vec<String> = r.iter().map(u64::to_string).collect();
    format!("{}:{}", r.len(), body.join(","))
}

fn circuit_payload(c: &Circuit) -> String {
    c.to_text().lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join(";")
}

/// Runs the evaluation protocol on the claim "bit `i` of `P_n(x)` is `b`",
/// where `P_n(y, z) = per_t(y)` for `|y| = t²`. Merlin's skeleton must have
/// at most `n^{2k}` nodes.
pub fn ama_simulate(
    x: &[u64],
    i: u32,
    b: u8,
    k: u32,
    prover: &ProverStrategy,
    config: &AmaConfig,
    seed: u64,
) -> Result<ProtocolTranscript> {
    let n = x.len();
    if n > 10 {
        return Err(Error::Precondition(format!("n = {n} exceeds 10")));
    }
    if b > 1 {
        return Err(Error::Domain(format!("claimed bit {b}")));
    }
    if i >= 64 {
        return Err(Error::Domain(format!("bit position {i}")));
    }
    if config.cols == 0 || config.cols > 32 || config.m == 0 || config.m > 64 {
        return Err(Error::DimensionMismatch(format!("m = {}, cols = {}", config.m, config.cols)));
    }
    let (ylen, zlen) = split_lengths(n)?;
    let t = (1..=ylen).find(|t| t * t >= ylen).unwrap_or(1);
    let square = t * t == ylen;
    let mut tr = Transcript {
        t: ProtocolTranscript {
            seed,
            rounds: Vec::new(),
            coins: Vec::new(),
            accepted: false,
            answer: None,
            checks_passed: None,
        },
    };
    tr.say(1, Sender::A, format!("split y={ylen} z={zlen} square={square}"));
    if !square {
        return Ok(tr.finish(b == 0, None, None));
    }
    let y = &x[..ylen];

    // Round 1: Arthur's coins.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hash_seed: u64 = rng.gen();
    tr.t.coins.push(Coin {
        label: "hash".into(),
        seed: hash_seed,
    });
    let mut hrng = ChaCha8Rng::seed_from_u64(hash_seed);
    let matrices: Vec<HashMatrix> = (0..config.m).map(|_| HashMatrix::random(config.m, config.cols, &mut hrng)).collect();
    let hex: Vec<String> = matrices.iter().map(HashMatrix::to_hex).collect();
    tr.say(1, Sender::A, format!("t={t} hash m={} cols={} A={}", config.m, config.cols, hex.join("|")));

    // Round 2: Merlin's certificate.
    let cert = prover.certificate(t, config)?;
    let max_x = x.iter().copied().max().unwrap_or(0);
    let bound = factorial_power(n, max_x).ok_or(Error::Budget {
        what: "bits of n!*M^n",
        limit: 63,
        reached: 64,
    })?;
    if bound >= 1 << 62 {
        return Err(Error::Budget {
            what: "bits of n!*M^n",
            limit: 62,
            reached: u64::from(64 - bound.leading_zeros()),
        });
    }
    let chain_degree = cert.chain.iter().map(formal_degree).max().unwrap_or(0);
    let big = next_prime(bound.max(chain_degree + 1)).expect("below 2^62");
    let tuple = phi_witness(&matrices, &cert.moduli)?;
    let big_residues: Vec<u64> = {
        let f = Zp::new(big)?;
        cert.constants.iter().map(|c| f.from_int(c)).collect()
    };
    let chain_text: Vec<String> = cert.chain.iter().map(circuit_payload).collect();
    tr.say(2, Sender::M, format!("skeleton {}", chain_text.join(" | ")));
    match &tuple {
        Some(ps) => {
            let entries: Vec<String> = ps.iter().map(|q| format!("{q}[{}]", encode_residues(&cert.residues[q]))).collect();
            tr.say(2, Sender::M, format!("moduli {}", entries.join(" ")));
        }
        None => tr.say(2, Sender::M, "moduli none".into()),
    }
    tr.say(2, Sender::M, format!("prime {big}[{}]", encode_residues(&big_residues)));

    // Round 3: Arthur's checks.
    let fail = |mut tr: Transcript, reason: String| {
        tr.say(3, Sender::A, format!("checks=fail reason={reason}"));
        tr.finish(b == 0, None, Some(false))
    };
    let Some(ps) = tuple else {
        return Ok(fail(tr, "no-collision-tuple".into()));
    };
    if !psi(&matrices, &ps)? {
        return Ok(fail(tr, "psi".into()));
    }
    if let Some(q) = ps.iter().chain([&big]).find(|&&q| !is_prime(q)) {
        return Ok(fail(tr, format!("composite-{q}")));
    }
    if big < bound {
        return Ok(fail(tr, "prime-too-small".into()));
    }
    let size_cap = (n as u64).checked_pow(2 * k).unwrap_or(u64::MAX);
    if let Some(c) = cert.chain.iter().find(|c| c.size() as u64 > size_cap) {
        return Ok(fail(tr, format!("size-{}", c.size())));
    }
    let mut moduli: Vec<(u64, Vec<BigInt>)> = ps
        .iter()
        .map(|q| (*q, cert.residues[q].iter().map(|&r| BigInt::from(r)).collect()))
        .collect();
    moduli.push((big, big_residues.iter().map(|&r| BigInt::from(r)).collect()));
    let mut top = None;
    for (q, alpha) in &moduli {
        let bound_chain: Vec<Circuit> = cert.chain.iter().map(|c| c.bind_params(alpha)).collect::<Result<_>>()?;
        let vseed: u64 = rng.gen();
        tr.t.coins.push(Coin {
            label: format!("verify-{q}"),
            seed: vseed,
        });
        match permanent_verify(&bound_chain, *q, config.verify_trials, vseed) {
            Ok(v) if v.accepted => {}
            Ok(v) => {
                let level = v.failed_level.unwrap_or(0);
                return Ok(fail(tr, format!("per-{q}-level-{level}")));
            }
            Err(e) if !e.is_resource() => return Ok(fail(tr, format!("per-{q}-malformed"))),
            Err(e) => return Err(e),
        }
        top = bound_chain.last().cloned();
    }
    let top = top.expect("at least the large prime");
    let f = Zp::new(big)?;
    let value = evaluate_in(&f, &top, y, &[])?;
    let bit = ((value >> i) & 1) as u8;
    tr.say(3, Sender::A, format!("checks=pass value={value} bit={bit}"));
    Ok(tr.finish(bit == b, Some(bit), Some(true)))
}

/// Bit `i` of `P_n(x)` computed directly, or `None` when `|y|` is not a square.
pub fn direct_bit(x: &[u64], i: u32) -> Result<Option<u8>> {
    let (ylen, _) = split_lengths(x.len())?;
    let t = (1..=ylen).find(|t| t * t >= ylen).unwrap_or(1);
    if t * t != ylen {
        return Ok(None);
    }
    let m = SquareMatrix::from_fn(t, |r, c| BigInt::from(x[r * t + c]));
    let per = permanent_eval(&Integers, &m)?;
    Ok(Some(u8::from(per.bit(u64::from(i)))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits() {
        assert_eq!(split_lengths(2).unwrap(), (1, 1));
        assert_eq!(split_lengths(3).unwrap(), (1, 2));
        assert_eq!(split_lengths(8).unwrap(), (4, 4));
        assert_eq!(split_lengths(9).unwrap(), (1, 8));
        assert_eq!(split_lengths(10).unwrap(), (2, 8));
        assert!(split_lengths(1).is_err());
    }

    #[test]
    fn honest_set_is_large() {
        let cert = ProverStrategy::honest().certificate(2, &AmaConfig::default()).unwrap();
        assert!(cert.moduli.len() >= 64);
        assert!(cert.residues.values().all(|r| r == &[1]));
    }

    #[test]
    fn non_square_branch() {
        let p = ProverStrategy::honest();
        let cfg = AmaConfig::default();
        for b in [0, 1] {
            let t = ama_simulate(&[1, 2, 3, 4, 5, 6], 0, b, 1, &p, &cfg, 3).unwrap();
            assert_eq!(t.accepted, b == 0);
            assert_eq!(t.answer, None);
        }
    }

    #[test]
    fn honest_run() {
        let x = [1, 2, 3, 4, 0, 0, 0, 0];
        let p = ProverStrategy::honest();
        let cfg = AmaConfig::default();
        for i in 0..4 {
            let bit = direct_bit(&x, i).unwrap().unwrap();
            let t = ama_simulate(&x, i, bit, 1, &p, &cfg, 7).unwrap();
            assert!(t.accepted, "{t}");
            assert_eq!(t.answer, Some(bit));
            let again = ama_simulate(&x, i, bit, 1, &p, &cfg, 7).unwrap();
            assert_eq!(t, again);
        }
    }

    #[test]
    fn cheaters_fail_checks() {
        let x = [1, 2, 3, 4, 5, 6, 7, 8];
        let cfg = AmaConfig::default();
        for v in [CheatVariant::DeterminantSkeleton, CheatVariant::BogusPrimes] {
            let p = ProverStrategy::cheating(v);
            let failed = (0..20).filter(|&s| ama_simulate(&x, 0, 1, 1, &p, &cfg, s).unwrap().checks_passed == Some(false)).count();
            assert!(failed >= 10, "{v:?}: {failed}");
        }
    }
}
