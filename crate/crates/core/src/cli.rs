//! Command-line front end. [`execute`] parses arguments, runs one subcommand
//! and returns the exit code with the captured report; [`run`] prints it.
//!
//! Exit codes: 0 success, 1 domain error, 2 budget exhausted, 64 usage.

use std::collections::BTreeSet;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value as Json};

use crate::algebra::SparsePoly;
use crate::circuit::{degree_bound, is_constant_free, metrics, parse_circuit, weight_report, Circuit};
use crate::error::{Error, Result};
use crate::families::{determinant_circuit, hc_eval, permanent_chain, permanent_eval, vnp_sum, SquareMatrix};
use crate::forge::{coefficient_of, forge, poscoef, sign_condition_search};
use crate::primes::is_prime;
use crate::protocols::{ama_simulate, gs_estimate, permanent_verify, AmaConfig, ProverMode, ProverStrategy};
use crate::ring::{BaseRing, Integers, RingSpec, Value, Zp};
use crate::systems::{density_probe, solve_bruteforce, PolySystem};
use crate::universal::embed;
use crate::Budgets;

/// Version tag of the JSON report layout.
pub const SCHEMA: &str = "polyforge-report/1";

#[derive(Parser, Debug)]
#[command(name = "polyforge", version, about = "Arithmetic circuits, hardness systems and protocol simulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for parallel sweeps (output does not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, default_value_t = Budgets::default().monomials)]
    monomial_budget: usize,
    #[arg(long, global = true, default_value_t = Budgets::default().evaluations)]
    eval_budget: u64,
    #[arg(long, global = true, default_value_t = Budgets::default().circuits)]
    circuit_budget: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a circuit at a point.
    Eval(EvalArgs),
    /// Formal degree, degree bound and size of a circuit.
    Degree(CircuitArg),
    /// Exact weight of a circuit's polynomial against M^(s*d).
    Weight(CircuitArg),
    /// Embed a one-variable circuit into the universal polynomial.
    Embed(EmbedArgs),
    /// Search for the first hard 0/1 coefficient vector.
    Forge(ForgeArgs),
    /// Search for an unrealizable sign condition.
    Signcond(SigncondArgs),
    /// Sign of one coefficient of a one-variable circuit.
    Poscoef(PoscoefArgs),
    /// Count primes for which a system has a solution.
    Density(DensityArgs),
    /// Solve a system over one prime field.
    Solve(SolveArgs),
    /// Estimate the hashing threshold on a random set.
    GsSim(GsArgs),
    /// Check a permanent chain by downward self-reduction.
    PerVerify(PerVerifyArgs),
    /// Simulate the evaluation protocol.
    AmaSim(AmaArgs),
    /// Permanent of a matrix.
    Per(MatrixArgs),
    /// Hamiltonian-cycle polynomial of a matrix.
    Hc(MatrixArgs),
    /// Sum a circuit over the Boolean cube in its trailing inputs.
    VnpSum(VnpArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Eval(_) => "eval",
            Command::Degree(_) => "degree",
            Command::Weight(_) => "weight",
            Command::Embed(_) => "embed",
            Command::Forge(_) => "forge",
            Command::Signcond(_) => "signcond",
            Command::Poscoef(_) => "poscoef",
            Command::Density(_) => "density",
            Command::Solve(_) => "solve",
            Command::GsSim(_) => "gs-sim",
            Command::PerVerify(_) => "per-verify",
            Command::AmaSim(_) => "ama-sim",
            Command::Per(_) => "per",
            Command::Hc(_) => "hc",
            Command::VnpSum(_) => "vnp-sum",
        }
    }

    fn params(&self) -> Json {
        let v = match self {
            Command::Eval(a) => serde_json::to_value(a),
            Command::Degree(a) | Command::Weight(a) => serde_json::to_value(a),
            Command::Embed(a) => serde_json::to_value(a),
            Command::Forge(a) => serde_json::to_value(a),
            Command::Signcond(a) => serde_json::to_value(a),
            Command::Poscoef(a) => serde_json::to_value(a),
            Command::Density(a) => serde_json::to_value(a),
            Command::Solve(a) => serde_json::to_value(a),
            Command::GsSim(a) => serde_json::to_value(a),
            Command::PerVerify(a) => serde_json::to_value(a),
            Command::AmaSim(a) => serde_json::to_value(a),
            Command::Per(a) | Command::Hc(a) => serde_json::to_value(a),
            Command::VnpSum(a) => serde_json::to_value(a),
        };
        v.expect("argument structs serialize")
    }
}

#[derive(Args, Debug, Serialize)]
struct CircuitArg {
    /// Circuit text file.
    #[arg(long)]
    circuit: String,
}

#[derive(Args, Debug, Serialize)]
struct EvalArgs {
    #[arg(long)]
    circuit: String,
    /// Comma-separated input values; `xJ` names a variable of a truncated ring.
    #[arg(long, default_value = "")]
    vars: String,
    #[arg(long, default_value = "")]
    params: String,
    /// `z`, `fp:P` or `trunc:BASE:NVARS:CAP` with BASE `z` or a prime.
    #[arg(long, default_value = "z")]
    ring: String,
}

#[derive(Args, Debug, Serialize)]
struct EmbedArgs {
    #[arg(long)]
    circuit: String,
    /// Prime used to verify the embedding.
    #[arg(long, default_value_t = 101)]
    p: u64,
}

#[derive(Args, Debug, Serialize)]
struct ForgeArgs {
    #[arg(long)]
    s: usize,
    #[arg(long)]
    d: u32,
    #[arg(long)]
    p: u64,
}

#[derive(Args, Debug, Serialize)]
struct SigncondArgs {
    #[arg(long)]
    s: usize,
    /// Largest coefficient index D.
    #[arg(long = "D", alias = "big-d")]
    big_d: u32,
}

#[derive(Args, Debug, Serialize)]
struct PoscoefArgs {
    #[arg(long)]
    circuit: String,
    #[arg(long)]
    i: u32,
}

#[derive(Args, Debug, Serialize)]
struct DensityArgs {
    /// System text file.
    #[arg(long)]
    system: String,
    #[arg(long)]
    limit: u64,
}

#[derive(Args, Debug, Serialize)]
struct SolveArgs {
    #[arg(long)]
    system: String,
    #[arg(long)]
    p: u64,
}

#[derive(Args, Debug, Serialize)]
struct GsArgs {
    /// Number of distinct random elements in the set.
    #[arg(long)]
    size: usize,
    #[arg(long, default_value_t = 4)]
    m: usize,
    #[arg(long, default_value_t = 12)]
    cols: usize,
    #[arg(long, default_value_t = 1000)]
    trials: u32,
    #[arg(long, default_value_t = 0.05)]
    tolerance: f64,
}

#[derive(Args, Debug, Serialize)]
struct PerVerifyArgs {
    /// Matrix side of the honest chain (ignored with --chain).
    #[arg(long, default_value_t = 2)]
    t: usize,
    /// Circuit files C_1..C_t, in order.
    #[arg(long, num_args = 1..)]
    chain: Vec<String>,
    /// Replace the top level by the determinant.
    #[arg(long)]
    determinant: bool,
    #[arg(long, default_value_t = 101)]
    p: u64,
    #[arg(long, default_value_t = 2)]
    trials: u32,
    /// Independent runs with seeds seed, seed+1, ...
    #[arg(long, default_value_t = 1)]
    runs: u32,
}

#[derive(Args, Debug, Serialize)]
struct AmaArgs {
    /// Comma-separated nonnegative inputs.
    #[arg(long)]
    x: String,
    /// Bit position, 0 for the least significant bit.
    #[arg(long)]
    i: u32,
    /// Claimed bit.
    #[arg(long)]
    b: u8,
    /// Hardness exponent: the skeleton may have at most n^(2k) nodes.
    #[arg(long, default_value_t = 1)]
    k: u32,
    /// `honest`, `determinant` or `bogus-primes`.
    #[arg(long, default_value = "honest")]
    prover: String,
    #[arg(long, default_value_t = 4)]
    m: usize,
    #[arg(long, default_value_t = 12)]
    cols: usize,
    #[arg(long, default_value_t = 2)]
    trials: u32,
    #[arg(long, default_value_t = 1)]
    runs: u32,
}

#[derive(Args, Debug, Serialize)]
struct MatrixArgs {
    /// Matrix text file: one row of integers per line.
    #[arg(long)]
    matrix: String,
    /// Work modulo this prime instead of over the integers.
    #[arg(long)]
    p: Option<u64>,
}

#[derive(Args, Debug, Serialize)]
struct VnpArgs {
    #[arg(long)]
    circuit: String,
    /// Values of the leading inputs; the remaining inputs are summed.
    #[arg(long, default_value = "")]
    x: String,
    #[arg(long, default_value = "z")]
    ring: String,
}

/// Everything that determines a report.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub params: Json,
    pub seed: u64,
    pub budgets: Budgets,
    pub format: &'static str,
}

/// Exit code and captured output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// A report in both renderings.
struct Report {
    text: String,
    json: Json,
}

impl Report {
    fn new(text: impl Into<String>, json: Json) -> Self {
        Report { text: text.into(), json }
    }
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn execute<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let rendered = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: rendered,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: rendered,
                }
            };
        }
    };
    let common = cli.common.clone();
    let config = RunConfig {
        command: cli.command.name().to_string(),
        params: cli.command.params(),
        seed: common.seed,
        budgets: Budgets {
            monomials: common.monomial_budget,
            evaluations: common.eval_budget,
            circuits: common.circuit_budget,
        },
        format: if common.json { "json" } else { "text" },
    };
    let result = match common.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli.command, &config)),
            Err(e) => Err((Error::Domain(format!("thread pool: {e}")), None)),
        },
        None => dispatch(&cli.command, &config),
    };
    let render = |r: &Report| {
        if common.json {
            let doc = json!({ "schema": SCHEMA, "config": config, "result": r.json });
            let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
            s.push('\n');
            s
        } else {
            let mut s = format!("config {}\n", serde_json::to_string(&config).expect("config serializes"));
            s.push_str(&r.text);
            if !s.ends_with('\n') {
                s.push('\n');
            }
            s
        }
    };
    match result {
        Ok(r) => Outcome {
            code: 0,
            stdout: render(&r),
            stderr: String::new(),
        },
        Err((e, partial)) => Outcome {
            code: if e.is_resource() { 2 } else { 1 },
            stdout: partial.as_ref().map(render).unwrap_or_default(),
            stderr: format!("error: {e}\n"),
        },
    }
}

/// Runs the CLI on `argv`, writing the report to standard output.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let out = execute(argv);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    out.code
}

type Failure = (Error, Option<Report>);

fn dispatch(cmd: &Command, cfg: &RunConfig) -> std::result::Result<Report, Failure> {
    let plain = |r: Result<Report>| r.map_err(|e| (e, None));
    match cmd {
        Command::Density(a) => density(a, cfg),
        Command::Eval(a) => plain(eval(a)),
        Command::Degree(a) => plain(degree(a)),
        Command::Weight(a) => plain(weight(a, cfg)),
        Command::Embed(a) => plain(embed_cmd(a)),
        Command::Forge(a) => plain(forge_cmd(a, cfg)),
        Command::Signcond(a) => plain(signcond(a, cfg)),
        Command::Poscoef(a) => plain(poscoef_cmd(a, cfg)),
        Command::Solve(a) => plain(solve(a, cfg)),
        Command::GsSim(a) => plain(gs_sim(a, cfg)),
        Command::PerVerify(a) => plain(per_verify(a, cfg)),
        Command::AmaSim(a) => plain(ama_sim(a, cfg)),
        Command::Per(a) => plain(per(a)),
        Command::Hc(a) => plain(hc(a, cfg)),
        Command::VnpSum(a) => plain(vnp(a, cfg)),
    }
}

fn read(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))
}

fn load_circuit(path: &str) -> Result<Circuit> {
    parse_circuit(&read(path)?)
}

fn load_system(path: &str) -> Result<PolySystem> {
    PolySystem::parse(&read(path)?)
}

fn load_matrix(path: &str) -> Result<SquareMatrix<BigInt>> {
    SquareMatrix::parse(&read(path)?)
}

fn parse_ring(s: &str) -> Result<RingSpec> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |t: &str| t.parse::<u64>().map_err(|_| Error::Domain(format!("bad number {t:?} in ring {s:?}")));
    let spec = match parts.as_slice() {
        ["z"] => RingSpec::Integers,
        ["fp", p] => RingSpec::PrimeField(num(p)?),
        ["trunc", base, nvars, cap] => RingSpec::Truncated {
            base: if *base == "z" {
                BaseRing::Integers
            } else {
                BaseRing::PrimeField(num(base)?)
            },
            var_count: num(nvars)? as usize,
            degree_cap: num(cap)? as u32,
        },
        _ => return Err(Error::Domain(format!("unknown ring {s:?}"))),
    };
    spec.validate()?;
    Ok(spec)
}

fn parse_values(list: &str, ring: &RingSpec) -> Result<Vec<Value>> {
    list.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            if let Some(j) = t.strip_prefix('x') {
                let RingSpec::Truncated { base, var_count, .. } = *ring else {
                    return Err(Error::Domain(format!("variable {t} needs a truncated ring")));
                };
                let j: usize = j.parse().map_err(|_| Error::Domain(format!("bad variable {t}")))?;
                if j == 0 || j > var_count {
                    return Err(Error::Domain(format!("variable {t} outside x1..x{var_count}")));
                }
                Ok(Value::Poly(SparsePoly::var(var_count, base.coeffs(), j - 1)))
            } else {
                t.parse::<BigInt>()
                    .map(Value::Int)
                    .map_err(|_| Error::Domain(format!("bad value {t:?}")))
            }
        })
        .collect()
}

fn parse_u64s(list: &str) -> Result<Vec<u64>> {
    list.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Error::Domain(format!("bad value {t:?}"))))
        .collect()
}

fn eval(a: &EvalArgs) -> Result<Report> {
    let c = load_circuit(&a.circuit)?;
    let ring = parse_ring(&a.ring)?;
    let vars = parse_values(&a.vars, &ring)?;
    let params = parse_values(&a.params, &ring)?;
    let v = crate::circuit::evaluate(&c, &ring, &vars, &params)?;
    Ok(Report::new(format!("value={v}"), json!({ "value": v.to_string() })))
}

fn degree(a: &CircuitArg) -> Result<Report> {
    let c = load_circuit(&a.circuit)?;
    let m = metrics(&c);
    let db = degree_bound(&c);
    let cf = is_constant_free(&c);
    Ok(Report::new(
        format!(
            "formal_degree={}\ndegree_bound={db}\nsize={}\ngate_count={}\nconstant_free={cf}",
            m.formal_degree, m.size, m.gate_count
        ),
        json!({ "metrics": m, "degree_bound": db, "constant_free": cf }),
    ))
}

fn weight(a: &CircuitArg, cfg: &RunConfig) -> Result<Report> {
    let c = load_circuit(&a.circuit)?;
    let w = weight_report(&c, cfg.budgets.monomials)?;
    Ok(Report::new(
        format!(
            "size={} formal_degree={} M={}\nweight={}\nbound={}\nbound_holds={}",
            w.metrics.size,
            w.metrics.formal_degree,
            w.metrics.weight_base(),
            w.exact_weight,
            w.bound,
            w.bound_holds
        ),
        serde_json::to_value(&w).expect("serializes"),
    ))
}

fn embed_cmd(a: &EmbedArgs) -> Result<Report> {
    let c = load_circuit(&a.circuit)?;
    let e = embed(&c, a.p)?;
    let params: Vec<String> = e.params.iter().map(ToString::to_string).collect();
    Ok(Report::new(
        format!("levels={}\nparams={}\nverified_mod={}", e.s, params.join(","), a.p),
        json!({ "embedding": e, "verified_mod": a.p }),
    ))
}

fn forge_cmd(a: &ForgeArgs, cfg: &RunConfig) -> Result<Report> {
    let r = forge(a.s, a.d, a.p, &cfg.budgets, false)?;
    Ok(Report::new(r.to_string(), serde_json::to_value(&r).expect("serializes")))
}

fn signcond(a: &SigncondArgs, cfg: &RunConfig) -> Result<Report> {
    let r = sign_condition_search(a.s, a.big_d, &cfg.budgets)?;
    Ok(Report::new(r.to_string(), serde_json::to_value(&r).expect("serializes")))
}

fn poscoef_cmd(a: &PoscoefArgs, cfg: &RunConfig) -> Result<Report> {
    let c = load_circuit(&a.circuit)?;
    let sign = poscoef(&c, a.i, cfg.budgets.monomials)?;
    let coef = coefficient_of(&c, a.i, cfg.budgets.monomials)?;
    Ok(Report::new(
        format!("coefficient={coef}\nsign={sign}"),
        json!({ "coefficient": coef.to_string(), "sign": sign }),
    ))
}

fn density(a: &DensityArgs, cfg: &RunConfig) -> std::result::Result<Report, Failure> {
    let sys = load_system(&a.system).map_err(|e| (e, None))?;
    let render = |r: &crate::systems::DensityReport| Report::new(r.to_string(), serde_json::to_value(r).expect("serializes"));
    match density_probe(&sys, a.limit, cfg.budgets.evaluations) {
        Ok(r) => Ok(render(&r)),
        Err(partial) => {
            let mut rep = render(&partial.report);
            rep.text = format!("partial high_water={}\n{}", partial.high_water, rep.text);
            rep.json = json!({ "partial": true, "high_water": partial.high_water, "report": rep.json });
            Err((partial.cause, Some(rep)))
        }
    }
}

fn solve(a: &SolveArgs, cfg: &RunConfig) -> Result<Report> {
    let sys = load_system(&a.system)?;
    let w = solve_bruteforce(&sys, a.p, cfg.budgets.evaluations)?;
    let text = match &w {
        Some(v) => format!("p={} solution={}", a.p, v.iter().map(u64::to_string).collect::<Vec<_>>().join(",")),
        None => format!("p={} solution=none", a.p),
    };
    Ok(Report::new(text, json!({ "p": a.p, "solution": w })))
}

fn gs_sim(a: &GsArgs, cfg: &RunConfig) -> Result<Report> {
    if a.cols == 0 || a.cols > 32 || a.size as u64 > 1u64 << a.cols {
        return Err(Error::Domain(format!("{} distinct elements of {} bits", a.size, a.cols)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut set = BTreeSet::new();
    while set.len() < a.size {
        set.insert(rng.gen_range(0..1u64 << a.cols));
    }
    let set: Vec<u64> = set.into_iter().collect();
    let r = gs_estimate(&set, a.m, a.cols, a.trials, rng.gen(), a.tolerance)?;
    Ok(Report::new(r.to_string(), serde_json::to_value(&r).expect("serializes")))
}

fn per_verify(a: &PerVerifyArgs, cfg: &RunConfig) -> Result<Report> {
    let mut chain = if a.chain.is_empty() {
        permanent_chain(a.t)
    } else {
        a.chain.iter().map(|p| load_circuit(p)).collect::<Result<_>>()?
    };
    if a.determinant {
        let t = chain.len();
        chain[t - 1] = determinant_circuit(t);
    }
    let verdicts = (0..a.runs)
        .into_par_iter()
        .map(|r| permanent_verify(&chain, a.p, a.trials, cfg.seed.wrapping_add(u64::from(r))))
        .collect::<Result<Vec<_>>>()?;
    let accepted = verdicts.iter().filter(|v| v.accepted).count();
    let mut text = format!(
        "t={} p={} trials={} runs={} accepted={accepted} rejected={}",
        chain.len(),
        a.p,
        a.trials,
        a.runs,
        verdicts.len() - accepted
    );
    if a.runs == 1 {
        let v = &verdicts[0];
        let level = v.failed_level.map_or("none".to_string(), |l| l.to_string());
        text.push_str(&format!("\nverdict={} failed_level={level}", if v.accepted { "accept" } else { "reject" }));
    }
    Ok(Report::new(text, json!({ "accepted": accepted, "runs": a.runs, "verdicts": verdicts })))
}

fn ama_sim(a: &AmaArgs, cfg: &RunConfig) -> Result<Report> {
    let x = parse_u64s(&a.x)?;
    let mode: ProverMode = a.prover.parse()?;
    let prover = ProverStrategy::new(mode);
    let config = AmaConfig {
        m: a.m,
        cols: a.cols,
        verify_trials: a.trials,
        ..AmaConfig::default()
    };
    let seeds: Vec<u64> = (0..a.runs).map(|r| cfg.seed.wrapping_add(u64::from(r))).collect();
    // Certificates are shared between runs; build them before fanning out.
    ama_simulate(&x, a.i, a.b, a.k, &prover, &config, seeds[0])?;
    let transcripts = seeds
        .par_iter()
        .map(|&s| ama_simulate(&x, a.i, a.b, a.k, &prover, &config, s))
        .collect::<Result<Vec<_>>>()?;
    if transcripts.len() == 1 {
        let t = &transcripts[0];
        return Ok(Report::new(t.to_text(), serde_json::to_value(t).expect("serializes")));
    }
    let accepted = transcripts.iter().filter(|t| t.accepted).count();
    let failed = transcripts.iter().filter(|t| t.checks_passed == Some(false)).count();
    let mut text = String::new();
    for t in &transcripts {
        let answer = t.answer.map_or("none".to_string(), |b| b.to_string());
        text.push_str(&format!(
            "seed={} verdict={} answer={answer}\n",
            t.seed,
            if t.accepted { "accept" } else { "reject" }
        ));
    }
    text.push_str(&format!("runs={} accepted={accepted} checks_failed={failed}", transcripts.len()));
    Ok(Report::new(
        text,
        json!({ "runs": transcripts.len(), "accepted": accepted, "checks_failed": failed, "transcripts": transcripts }),
    ))
}

fn field_or_int(p: Option<u64>) -> Result<Option<Zp>> {
    match p {
        Some(p) if !is_prime(p) => Err(Error::NotPrime(p)),
        Some(p) => Ok(Some(Zp::new(p)?)),
        None => Ok(None),
    }
}

fn per(a: &MatrixArgs) -> Result<Report> {
    let m = load_matrix(&a.matrix)?;
    let v = match field_or_int(a.p)? {
        Some(f) => permanent_eval(&f, &m.map(|e| crate::ring::Ring::from_int(&f, e)))?.to_string(),
        None => permanent_eval(&Integers, &m)?.to_string(),
    };
    Ok(Report::new(format!("permanent={v}"), json!({ "n": m.n(), "permanent": v })))
}

fn hc(a: &MatrixArgs, cfg: &RunConfig) -> Result<Report> {
    let m = load_matrix(&a.matrix)?;
    let v = match field_or_int(a.p)? {
        Some(f) => hc_eval(&f, &m.map(|e| crate::ring::Ring::from_int(&f, e)), cfg.budgets.evaluations)?.to_string(),
        None => hc_eval(&Integers, &m, cfg.budgets.evaluations)?.to_string(),
    };
    Ok(Report::new(format!("hc={v}"), json!({ "n": m.n(), "hc": v })))
}

fn vnp(a: &VnpArgs, cfg: &RunConfig) -> Result<Report> {
    let c = load_circuit(&a.circuit)?;
    let ring = parse_ring(&a.ring)?;
    let x = parse_values(&a.x, &ring)?;
    let m = c.num_vars().saturating_sub(x.len());
    let v = vnp_sum(&c, &ring, &x, cfg.budgets.evaluations)?;
    Ok(Report::new(format!("summed={m}\nsum={v}"), json!({ "summed": m, "sum": v.to_string() })))
}
