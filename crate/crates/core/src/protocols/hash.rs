use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// A linear map `F_2^cols → F_2^rows`; row `r` is a bit mask over the columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct HashMatrix {
    rows: Vec<u64>,
    cols: usize,
}

impl HashMatrix {
    pub fn new(rows: Vec<u64>, cols: usize) -> Result<Self> {
        if cols == 0 || cols > 64 || rows.len() > 64 {
            return Err(Error::DimensionMismatch(format!(
                "{} x {cols} hash matrix (at most 64 x 64)",
                rows.len()
            )));
        }
        let mask = mask(cols);
        if rows.iter().any(|r| r & !mask != 0) {
            return Err(Error::DimensionMismatch(format!("row wider than {cols} columns")));
        }
        Ok(HashMatrix { rows, cols })
    }

    pub fn zero(rows: usize, cols: usize) -> Result<Self> {
        HashMatrix::new(vec![0; rows], cols)
    }

    /// Square identity matrix.
    pub fn identity(n: usize) -> Result<Self> {
        HashMatrix::new((0..n).map(|i| 1u64 << i).collect(), n)
    }

    pub fn random(rows: usize, cols: usize, rng: &mut impl Rng) -> Self {
        let mask = mask(cols);
        HashMatrix {
            rows: (0..rows).map(|_| rng.gen::<u64>() & mask).collect(),
            cols,
        }
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// `A·x` with the result packed as bits (row `r` in bit `r`).
    pub fn apply(&self, x: u64) -> u64 {
        self.rows
            .iter()
            .enumerate()
            .fold(0, |acc, (r, row)| acc | (u64::from((row & x).count_ones() & 1) << r))
    }

    /// Rows as fixed-width hexadecimal, separated by `:`.
    pub fn to_hex(&self) -> String {
        let width = self.cols.div_ceil(4);
        self.rows.iter().map(|r| format!("{r:0width$x}")).collect::<Vec<_>>().join(":")
    }

    fn check(&self, x: u64) -> Result<()> {
        if x & !mask(self.cols) != 0 {
            return Err(Error::DimensionMismatch(format!(
                "element {x} does not fit in {} bits",
                self.cols
            )));
        }
        Ok(())
    }
}

fn mask(cols: usize) -> u64 {
    if cols >= 64 {
        u64::MAX
    } else {
        (1u64 << cols) - 1
    }
}

/// `⋀_j (A_j p_0 = A_j p_j ∧ p_0 ≠ p_j)` for `elems = [p_0, …, p_m]`.
pub fn psi(matrices: &[HashMatrix], elems: &[u64]) -> Result<bool> {
    if elems.len() != matrices.len() + 1 {
        return Err(Error::DimensionMismatch(format!(
            "{} elements for {} matrices",
            elems.len(),
            matrices.len()
        )));
    }
    for (a, &e) in matrices.iter().zip(&elems[1..]) {
        a.check(e)?;
        a.check(elems[0])?;
    }
    let p0 = elems[0];
    Ok(matrices.iter().zip(&elems[1..]).all(|(a, &pj)| pj != p0 && a.apply(pj) == a.apply(p0)))
}

/// `φ(A) = ∃ p_0..p_m ∈ E : ψ(A, p)`, decided by bucketing: `p_0` works iff
/// its bucket under every `A_j` holds another element.
pub fn phi(matrices: &[HashMatrix], set: &[u64]) -> Result<bool> {
    Ok(phi_witness(matrices, set)?.is_some())
}

/// A tuple `[p_0, …, p_m]` satisfying ψ, choosing the first qualifying `p_0`
/// in `set` order and for each `j` the first partner in `set` order.
pub fn phi_witness(matrices: &[HashMatrix], set: &[u64]) -> Result<Option<Vec<u64>>> {
    for a in matrices {
        for &e in set {
            a.check(e)?;
        }
    }
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let counts: Vec<std::collections::HashMap<u64, usize>> = matrices
        .iter()
        .map(|a| {
            let mut m = std::collections::HashMap::new();
            for &e in &sorted {
                *m.entry(a.apply(e)).or_insert(0) += 1;
            }
            m
        })
        .collect();
    let Some(&p0) = set
        .iter()
        .find(|&&p0| matrices.iter().zip(&counts).all(|(a, c)| c[&a.apply(p0)] >= 2))
    else {
        return Ok(None);
    };
    let mut tuple = vec![p0];
    for a in matrices {
        let h = a.apply(p0);
        let pj = *set.iter().find(|&&e| e != p0 && a.apply(e) == h).expect("bucket has a partner");
        tuple.push(pj);
    }
    Ok(Some(tuple))
}

/// Reference implementation of φ by backtracking over tuples.
pub fn phi_bruteforce(matrices: &[HashMatrix], set: &[u64]) -> bool {
    fn extend(matrices: &[HashMatrix], set: &[u64], tuple: &mut Vec<u64>) -> bool {
        if tuple.len() == matrices.len() + 1 {
            return psi(matrices, tuple).unwrap_or(false);
        }
        let j = tuple.len() - 1;
        for &e in set {
            if e != tuple[0] && matrices[j].apply(e) == matrices[j].apply(tuple[0]) {
                tuple.push(e);
                if extend(matrices, set, tuple) {
                    return true;
                }
                tuple.pop();
            }
        }
        false
    }
    set.iter().any(|&p0| extend(matrices, set, &mut vec![p0]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GsVerdict {
    Small,
    Large,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GsReport {
    pub set_size: usize,
    pub m: usize,
    pub cols: usize,
    pub trials: u32,
    pub hits: u32,
    pub rate: f64,
    pub verdict: GsVerdict,
    pub seed: u64,
}

impl std::fmt::Display for GsReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "set_size={} m={} cols={} trials={} hits={} rate={:?} verdict={}",
            self.set_size,
            self.m,
            self.cols,
            self.trials,
            self.hits,
            self.rate,
            match self.verdict {
                GsVerdict::Small => "small",
                GsVerdict::Large => "large",
                GsVerdict::Inconclusive => "inconclusive",
            }
        )
    }
}

/// Fraction of `trials` independent samples of `m` random `m × cols`
/// matrices for which φ holds on `set`. The verdict is `large` when every
/// trial hits, `small` when the rate is at most `1/2 + tolerance`.
pub fn gs_estimate(set: &[u64], m: usize, cols: usize, trials: u32, seed: u64, tolerance: f64) -> Result<GsReport> {
    if cols == 0 || cols > 64 || m > 64 {
        return Err(Error::DimensionMismatch(format!("m = {m}, cols = {cols}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0;
    for _ in 0..trials {
        let matrices: Vec<HashMatrix> = (0..m).map(|_| HashMatrix::random(m, cols, &mut rng)).collect();
        if phi(&matrices, set)? {
            hits += 1;
        }
    }
    let rate = if trials == 0 { 0.0 } else { f64::from(hits) / f64::from(trials) };
    let verdict = if trials > 0 && hits == trials {
        GsVerdict::Large
    } else if rate <= 0.5 + tolerance {
        GsVerdict::Small
    } else {
        GsVerdict::Inconclusive
    };
    Ok(GsReport {
        set_size: set.len(),
        m,
        cols,
        trials,
        hits,
        rate,
        verdict,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_cases() {
        let z = HashMatrix::zero(3, 8).unwrap();
        assert!(psi(&[z.clone()], &[1, 2]).unwrap());
        assert!(!psi(&[z], &[1, 1]).unwrap());
        let id = HashMatrix::identity(8).unwrap();
        assert!(!psi(&[id], &[1, 2]).unwrap());
        assert!(psi(&[HashMatrix::zero(1, 4).unwrap()], &[1, 200]).is_err());
    }

    #[test]
    fn estimates() {
        let one = gs_estimate(&[5], 3, 8, 50, 1, 0.05).unwrap();
        assert_eq!(one.hits, 0);
        let all: Vec<u64> = (0..256).collect();
        let r = gs_estimate(&all, 3, 8, 50, 1, 0.05).unwrap();
        assert_eq!(r.rate, 1.0);
        assert_eq!(r.verdict, GsVerdict::Large);
    }

    #[test]
    fn bucketing_matches_backtracking() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for size in [2, 3, 5, 8, 17] {
            let set: Vec<u64> = (0..size).map(|_| rng.gen_range(0..64)).collect();
            for _ in 0..20 {
                let ms: Vec<HashMatrix> = (0..2).map(|_| HashMatrix::random(2, 6, &mut rng)).collect();
                assert_eq!(phi(&ms, &set).unwrap(), phi_bruteforce(&ms, &set));
                if let Some(w) = phi_witness(&ms, &set).unwrap() {
                    assert!(psi(&ms, &w).unwrap());
                }
            }
        }
    }
}
