//! Named polynomial families: the permanent, the Hamiltonian-cycle polynomial
//! `HC_n`, Boolean interpolation of truth tables, exponential Boolean sums and
//! projections.
//!
//! Matrix variables `x_{i,j}` (1-based) are circuit inputs `(i − 1)·n + j`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{Coeffs, SparsePoly};
use crate::circuit::{evaluate_in, Circuit, CircuitBuilder, Node};
use crate::error::{Error, Result};
use crate::ring::{Integers, PrimeFieldElem, Ring, RingSpec, TruncatedPolys, Value, Zp};

/// Largest matrix dimension accepted by [`permanent_eval`].
pub const PERMANENT_CAP: usize = 12;

/// An `n × n` matrix stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareMatrix<T> {
    n: usize,
    entries: Vec<T>,
}

impl<T: Clone> SquareMatrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!("matrix with {n} rows is not square")));
        }
        Ok(SquareMatrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        SquareMatrix { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry at 0-based row `i`, column `j`.
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.entries[i * self.n + j] = v;
    }

    /// Entries in circuit-input order.
    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    /// The minor obtained by deleting row `r` and column `c`.
    pub fn minor(&self, r: usize, c: usize) -> Self {
        let n = self.n - 1;
        SquareMatrix::from_fn(n, |i, j| {
            let i = if i >= r { i + 1 } else { i };
            let j = if j >= c { j + 1 } else { j };
            self.get(i, j).clone()
        })
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> SquareMatrix<U> {
        SquareMatrix {
            n: self.n,
            entries: self.entries.iter().map(f).collect(),
        }
    }
}

impl SquareMatrix<BigInt> {
    /// Parses whitespace-separated integer rows, one row per line. Blank lines
    /// and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<BigInt>().map_err(|_| Error::Syntax {
                        line: k + 1,
                        msg: format!("bad matrix entry {t:?}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        SquareMatrix::from_rows(rows)
    }
}

impl<T: fmt::Display> fmt::Display for SquareMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.entries[i * self.n + j].to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Permanent by Ryser's formula. For `n ≤ 6` the result is cross-checked
/// against the permutation sum.
pub fn permanent_eval<R: Ring>(ring: &R, m: &SquareMatrix<R::Elem>) -> Result<R::Elem> {
    let n = m.n();
    if n > PERMANENT_CAP {
        return Err(Error::Budget {
            what: "permanent dimension",
            limit: PERMANENT_CAP as u64,
            reached: n as u64,
        });
    }
    let mut total = ring.zero();
    // (-1)^n Σ_S (-1)^{|S|} Π_i Σ_{j∈S} m_ij
    for set in 1u32..(1u32 << n) {
        let mut prod = ring.one();
        for i in 0..n {
            let mut row = ring.zero();
            for j in 0..n {
                if set >> j & 1 == 1 {
                    row = ring.add(&row, m.get(i, j))?;
                }
            }
            prod = ring.mul(&prod, &row)?;
        }
        if (n as u32 - set.count_ones()) % 2 == 1 {
            prod = ring.neg(&prod)?;
        }
        total = ring.add(&total, &prod)?;
    }
    if n == 0 {
        total = ring.one();
    }
    if n <= 6 {
        let naive = permanent_naive(ring, m)?;
        assert_eq!(total, naive, "Ryser and permutation-sum permanents disagree");
    }
    Ok(total)
}

/// Permanent as the sum over all permutations.
pub fn permanent_naive<R: Ring>(ring: &R, m: &SquareMatrix<R::Elem>) -> Result<R::Elem> {
    let n = m.n();
    let mut total = ring.zero();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let mut prod = ring.one();
        for (i, &j) in perm.iter().enumerate() {
            prod = ring.mul(&prod, m.get(i, j))?;
        }
        total = ring.add(&total, &prod)?;
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(total)
}

/// Advances to the next permutation in lexicographic order.
pub(crate) fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let Some(i) = (0..v.len() - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..v.len()).rev().find(|&j| v[j] > v[i]).expect("successor exists");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// The Hamiltonian cycles on `1..=n` as successor maps (0-based), in the
/// fixed order: for each ordering `v2..vn` of `2..n` in lexicographic order,
/// the cycle `1 → v2 → … → vn → 1`.
fn hamiltonian_cycles(n: usize, budget: u64) -> Result<Vec<Vec<usize>>> {
    if n < 2 {
        return Err(Error::Precondition(format!("HC_n needs n >= 2, got {n}")));
    }
    let count: u64 = (1..n as u64).try_fold(1u64, |acc, k| acc.checked_mul(k)).unwrap_or(u64::MAX);
    if count > budget {
        return Err(Error::Budget {
            what: "Hamiltonian cycle",
            limit: budget,
            reached: count,
        });
    }
    let mut rest: Vec<usize> = (1..n).collect();
    let mut out = Vec::new();
    loop {
        let mut succ = vec![0; n];
        let mut cur = 0;
        for &v in &rest {
            succ[cur] = v;
            cur = v;
        }
        succ[cur] = 0;
        out.push(succ);
        if !next_permutation(&mut rest) {
            break;
        }
    }
    Ok(out)
}

/// `HC_n(m) = Σ_σ Π_i m[i][σ(i)]` over the cyclic permutations `σ`.
pub fn hc_eval<R: Ring>(ring: &R, m: &SquareMatrix<R::Elem>, budget: u64) -> Result<R::Elem> {
    let mut total = ring.zero();
    for succ in hamiltonian_cycles(m.n(), budget)? {
        let mut prod = ring.one();
        for (i, &j) in succ.iter().enumerate() {
            prod = ring.mul(&prod, m.get(i, j))?;
        }
        total = ring.add(&total, &prod)?;
    }
    Ok(total)
}

/// `HC'_n(x_1..x_n) = HC_k(x_1..x_{k²})` with `k = ⌊√n⌋`; extra inputs are
/// ignored.
pub fn hc_padded_eval<R: Ring>(ring: &R, xs: &[R::Elem], budget: u64) -> Result<R::Elem> {
    let k = (xs.len() as f64).sqrt() as usize;
    let k = (k.saturating_sub(1)..=k + 1).filter(|k| k * k <= xs.len()).max().unwrap_or(0);
    let m = SquareMatrix {
        n: k,
        entries: xs[..k * k].to_vec(),
    };
    hc_eval(ring, &m, budget)
}

/// Sum-of-products circuit for `HC_n` in the `n²` matrix variables.
pub fn hc_circuit(n: usize, budget: u64) -> Result<Circuit> {
    let cycles = hamiltonian_cycles(n, budget)?;
    let mut b = CircuitBuilder::new(n * n, 0);
    let vars: Vec<usize> = (1..=n * n).map(|j| b.input(j)).collect();
    let terms: Vec<usize> = cycles
        .iter()
        .map(|succ| {
            let factors: Vec<usize> = succ.iter().enumerate().map(|(i, &j)| vars[i * n + j]).collect();
            b.product(&factors)
        })
        .collect();
    let out = b.sum(&terms);
    Ok(b.finish(out))
}

/// Circuit for the `t × t` permanent by expansion along the first row,
/// sharing the minors over common column sets (`O(t·2^t)` gates).
pub fn permanent_circuit(t: usize) -> Circuit {
    minors_circuit(t, false)
}

/// The determinant, built the same way as [`permanent_circuit`] with
/// alternating signs.
pub fn determinant_circuit(t: usize) -> Circuit {
    minors_circuit(t, true)
}

/// `[per_1, per_2, …, per_t]`, each over its own `k²` variables.
pub fn permanent_chain(t: usize) -> Vec<Circuit> {
    (1..=t).map(permanent_circuit).collect()
}

fn minors_circuit(t: usize, signed: bool) -> Circuit {
    assert!(t >= 1, "matrix dimension must be positive");
    let mut b = CircuitBuilder::new(t * t, 0);
    let vars: Vec<usize> = (1..=t * t).map(|j| b.input(j)).collect();
    // memo[cols] = node for the (sub)permanent of the last |cols| rows over cols
    let mut memo: HashMap<u32, usize> = HashMap::new();
    let full = (1u32 << t) - 1;
    let out = minors_rec(&mut b, &vars, t, full, signed, &mut memo);
    b.finish(out)
}

fn minors_rec(
    b: &mut CircuitBuilder,
    vars: &[usize],
    t: usize,
    cols: u32,
    signed: bool,
    memo: &mut HashMap<u32, usize>,
) -> usize {
    if let Some(&id) = memo.get(&cols) {
        return id;
    }
    let row = t - cols.count_ones() as usize;
    let id = if cols.count_ones() == 1 {
        vars[row * t + cols.trailing_zeros() as usize]
    } else {
        let mut terms = Vec::new();
        for (pos, j) in (0..t).filter(|j| cols >> j & 1 == 1).enumerate() {
            let sub = minors_rec(b, vars, t, cols & !(1 << j), signed, memo);
            let mut term = b.mul(vars[row * t + j], sub);
            if signed && pos % 2 == 1 {
                term = b.neg(term);
            }
            terms.push(term);
        }
        b.sum(&terms)
    };
    memo.insert(cols, id);
    id
}

/// A function `{0,1}^n → Z` given by its full table. Points are indexed with
/// `x_1` as the most significant bit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruthTable {
    n: usize,
    values: Vec<BigInt>,
}

impl TruthTable {
    pub fn new(n: usize, values: Vec<BigInt>) -> Result<Self> {
        if n > 20 {
            return Err(Error::Budget {
                what: "truth-table arity",
                limit: 20,
                reached: n as u64,
            });
        }
        if values.len() != 1 << n {
            return Err(Error::MissingAssignment(format!(
                "truth table on {n} bits has {} of {} values",
                values.len(),
                1usize << n
            )));
        }
        Ok(TruthTable { n, values })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(&[u8]) -> BigInt) -> Result<Self> {
        let values = (0..1usize << n).map(|idx| f(&index_bits(n, idx))).collect();
        TruthTable::new(n, values)
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn value(&self, bits: &[u8]) -> &BigInt {
        &self.values[bits_index(bits)]
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    /// Parses lines `bits value`, e.g. `01 3`. Every point must appear once.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: Vec<(usize, String, BigInt)> = Vec::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |msg: String| Error::Syntax { line: k + 1, msg };
            let mut parts = line.split_whitespace();
            let (Some(bits), Some(value), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(syntax("expected `bits value`".into()));
            };
            if !bits.chars().all(|c| c == '0' || c == '1') {
                return Err(syntax(format!("bad bit string {bits:?}")));
            }
            let value = value.parse::<BigInt>().map_err(|_| syntax(format!("bad value {value:?}")))?;
            entries.push((k + 1, bits.to_string(), value));
        }
        let n = entries.first().map_or(0, |e| e.1.len());
        let mut values: Vec<Option<BigInt>> = vec![None; 1usize.checked_shl(n as u32).unwrap_or(0)];
        for (line, bits, value) in entries {
            if bits.len() != n {
                return Err(Error::Syntax {
                    line,
                    msg: format!("expected {n} bits"),
                });
            }
            let idx = usize::from_str_radix(&bits, 2).map_err(|e| Error::Syntax { line, msg: e.to_string() })?;
            if values[idx].replace(value).is_some() {
                return Err(Error::Syntax {
                    line,
                    msg: format!("point {bits} listed twice"),
                });
            }
        }
        let missing = values.iter().filter(|v| v.is_none()).count();
        if missing > 0 || values.is_empty() {
            return Err(Error::MissingAssignment(format!("{missing} truth-table points")));
        }
        TruthTable::new(n, values.into_iter().map(Option::unwrap).collect())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (idx, v) in self.values.iter().enumerate() {
            let bits: String = index_bits(self.n, idx).iter().map(|b| char::from(b'0' + b)).collect();
            out.push_str(&format!("{bits} {v}\n"));
        }
        out
    }
}

/// Bits of `idx` with `x_1` first (most significant).
pub(crate) fn index_bits(n: usize, idx: usize) -> Vec<u8> {
    (0..n).map(|i| ((idx >> (n - 1 - i)) & 1) as u8).collect()
}

fn bits_index(bits: &[u8]) -> usize {
    bits.iter().fold(0, |acc, &b| acc << 1 | b as usize)
}

/// The multilinear polynomial `Σ_x f(x)·Π_i (x_i X_i + (1 − x_i)(1 − X_i))`,
/// the unique multilinear polynomial agreeing with `f` on `{0,1}^n`.
///
/// The coefficient of `Π_{i∈S} X_i` is `Σ_{T⊆S} (−1)^{|S∖T|} f(1_T)`,
/// computed by an in-place Möbius transform over subsets.
pub fn valiant_build(f: &TruthTable) -> SparsePoly {
    let n = f.n;
    let mut coef = f.values.clone();
    for bit in 0..n {
        for idx in 0..coef.len() {
            if idx >> bit & 1 == 1 {
                let lower = coef[idx ^ (1 << bit)].clone();
                coef[idx] -= lower;
            }
        }
    }
    let terms = coef.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(idx, c)| {
        let exps: Vec<u32> = index_bits(n, idx).into_iter().map(u32::from).collect();
        (exps, c)
    });
    SparsePoly::from_terms(n, Coeffs::Integers, terms).expect("exponent vectors have length n")
}

/// `Σ_{y∈{0,1}^m} c(x, y)` where the first `x.len()` inputs of `c` are `x`
/// and the remaining `m` inputs are summed over `{0,1}`.
pub fn vnp_sum(c: &Circuit, ring: &RingSpec, x: &[Value], budget: u64) -> Result<Value> {
    ring.validate()?;
    if x.len() > c.num_vars() {
        return Err(Error::DimensionMismatch(format!(
            "{} x-values for a circuit with {} inputs",
            x.len(),
            c.num_vars()
        )));
    }
    if c.num_params() > 0 {
        return Err(Error::MissingAssignment(format!("{} parameter slots", c.num_params())));
    }
    let m = c.num_vars() - x.len();
    if m > 24 || (1u64 << m) > budget {
        return Err(Error::Budget {
            what: "Boolean sum",
            limit: budget.min(1 << 24),
            reached: 1u64.checked_shl(m as u32).unwrap_or(u64::MAX),
        });
    }
    match *ring {
        RingSpec::Integers => {
            let xs = x.iter().map(|v| v.to_int("x")).collect::<Result<Vec<_>>>()?;
            Ok(Value::Int(cube_sum(&Integers, c, xs, m)?))
        }
        RingSpec::PrimeField(p) => {
            let xs = x.iter().map(|v| v.to_fp(p, "x")).collect::<Result<Vec<_>>>()?;
            let r = cube_sum(&Zp::new(p)?, c, xs, m)?;
            Ok(Value::Fp(PrimeFieldElem::new(r, p)?))
        }
        RingSpec::Truncated {
            base,
            var_count,
            degree_cap,
        } => {
            let r = TruncatedPolys {
                domain: base.coeffs(),
                nvars: var_count,
                cap: degree_cap,
                budget: crate::Budgets::default().monomials,
            };
            let xs = x.iter().map(|v| v.to_poly(&r, "x")).collect::<Result<Vec<_>>>()?;
            Ok(Value::Poly(cube_sum(&r, c, xs, m)?))
        }
    }
}

fn cube_sum<R: Ring>(ring: &R, c: &Circuit, mut point: Vec<R::Elem>, m: usize) -> Result<R::Elem> {
    let base = point.len();
    point.extend((0..m).map(|_| ring.zero()));
    let mut total = ring.zero();
    for y in 0..1usize << m {
        for (i, b) in index_bits(m, y).into_iter().enumerate() {
            point[base + i] = if b == 1 { ring.one() } else { ring.zero() };
        }
        total = ring.add(&total, &evaluate_in(ring, c, &point, &[])?)?;
    }
    Ok(total)
}

/// Image of an input variable under a projection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    /// Input `j` (1-based) of the projected circuit.
    Var(usize),
    Const(BigInt),
}

/// Substitutes input `i` of `c` by `subst[i − 1]`. The result has
/// `num_vars` inputs and the same node count.
pub fn projection_apply(c: &Circuit, subst: &[Target], num_vars: usize) -> Result<Circuit> {
    if subst.len() != c.num_vars() {
        return Err(Error::MissingAssignment(format!(
            "substitution covers {} of {} variables",
            subst.len(),
            c.num_vars()
        )));
    }
    if let Some(Target::Var(j)) = subst.iter().find(|t| matches!(t, Target::Var(j) if *j == 0 || *j > num_vars)) {
        return Err(Error::Precondition(format!("target variable x{j} is not among x1..x{num_vars}")));
    }
    let nodes = c
        .nodes()
        .iter()
        .map(|n| match n {
            Node::Input(i) => match &subst[i - 1] {
                Target::Var(j) => Node::Input(*j),
                Target::Const(v) => Node::Const(v.clone()),
            },
            other => other.clone(),
        })
        .collect();
    Circuit::new(nodes, c.output(), num_vars, c.num_params())
}

/// Brute-force sum of `P(x, y)` over `y ∈ {0,1}^m` on the expanded polynomial,
/// used as an independent reference for [`vnp_sum`].
pub fn boolean_sum_expanded(p: &SparsePoly, x: &[BigInt]) -> Result<BigInt> {
    let m = p.nvars() - x.len();
    let mut total = BigInt::zero();
    let mut point: Vec<BigInt> = x.to_vec();
    point.resize(p.nvars(), BigInt::zero());
    for y in 0..1usize << m {
        for (i, b) in index_bits(m, y).into_iter().enumerate() {
            point[x.len() + i] = if b == 1 { BigInt::one() } else { BigInt::zero() };
        }
        total += p.eval(&point)?;
    }
    Ok(p.domain().reduce(total))
}
