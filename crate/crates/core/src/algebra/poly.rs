use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Coefficient domain of a [`SparsePoly`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Coeffs {
    Integers,
    /// Residues modulo a prime, stored reduced into `[0, p)`.
    Mod(u64),
}

impl Coeffs {
    pub fn reduce(&self, v: BigInt) -> BigInt {
        match *self {
            Coeffs::Integers => v,
            Coeffs::Mod(p) => v.mod_floor(&BigInt::from(p)),
        }
    }
}

/// Dense exponent vector. Ordered graded-lexicographically: by total degree,
/// then lexicographically with the first variable most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    fn times(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exact sparse multivariate polynomial over the integers or a prime field.
/// No zero coefficient is ever stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    nvars: usize,
    domain: Coeffs,
    terms: BTreeMap<Monomial, BigInt>,
}

impl SparsePoly {
    pub fn zero(nvars: usize, domain: Coeffs) -> Self {
        SparsePoly {
            nvars,
            domain,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, domain: Coeffs, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(nvars, domain);
        p.add_term(Monomial::one(nvars), c.into());
        p
    }

    /// The variable with 0-based index `i`.
    pub fn var(nvars: usize, domain: Coeffs, i: usize) -> Self {
        assert!(i < nvars, "variable {i} out of range for {nvars} variables");
        let mut p = Self::zero(nvars, domain);
        p.add_term(Monomial::var(nvars, i), BigInt::one());
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs; repeated
    /// monomials are summed.
    pub fn from_terms<I>(nvars: usize, domain: Coeffs, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, BigInt)>,
    {
        let mut p = Self::zero(nvars, domain);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::DimensionMismatch(format!(
                    "exponent vector of length {} for {nvars} variables",
                    e.len()
                )));
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn domain(&self) -> Coeffs {
        self.domain
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored monomials.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        let c = self.domain.reduce(c);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = self.domain.reduce(o.get() + c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn check_compatible(&self, other: &SparsePoly) -> Result<()> {
        if self.nvars != other.nvars || self.domain != other.domain {
            return Err(Error::Domain(format!(
                "incompatible polynomials: {} vars over {:?} vs {} vars over {:?}",
                self.nvars, self.domain, other.nvars, other.domain
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> SparsePoly {
        let mut out = Self::zero(self.nvars, self.domain);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn sub(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigInt) -> SparsePoly {
        let mut out = Self::zero(self.nvars, self.domain);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * k);
        }
        out
    }

    /// Exact product.
    pub fn mul(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.mul_truncated(other, None, usize::MAX)
    }

    /// Product with every monomial of total degree above `cap` removed. Fails
    /// with a budget error as soon as the result would hold more than
    /// `budget` monomials.
    pub fn mul_truncated(&self, other: &SparsePoly, cap: Option<u32>, budget: usize) -> Result<SparsePoly> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.nvars, self.domain);
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            if cap.is_some_and(|d| da > d) {
                continue;
            }
            for (mb, cb) in &other.terms {
                if cap.is_some_and(|d| da + mb.degree() > d) {
                    continue;
                }
                out.add_term(ma.times(mb), ca * cb);
                if out.terms.len() > budget {
                    return Err(Error::Budget {
                        what: "monomial",
                        limit: budget as u64,
                        reached: out.terms.len() as u64,
                    });
                }
            }
        }
        Ok(out)
    }

    /// Drops every monomial of total degree above `cap`.
    pub fn truncate(&self, cap: u32) -> SparsePoly {
        SparsePoly {
            nvars: self.nvars,
            domain: self.domain,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= cap)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Coefficient of the monomial with the given exponents (zero if absent).
    pub fn coefficient(&self, exponents: &[u32]) -> Result<BigInt> {
        if exponents.len() != self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "exponent vector of length {} for {} variables",
                exponents.len(),
                self.nvars
            )));
        }
        Ok(self
            .terms
            .get(&Monomial(exponents.to_vec()))
            .cloned()
            .unwrap_or_default())
    }

    /// Sum of absolute values of the coefficients. Only meaningful over the
    /// integers.
    pub fn weight(&self) -> Result<BigUint> {
        if let Coeffs::Mod(p) = self.domain {
            return Err(Error::Domain(format!("weight is undefined over F_{p}")));
        }
        Ok(self
            .terms
            .values()
            .map(|c| c.abs().to_biguint().expect("absolute value is nonnegative"))
            .sum())
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Evaluates at an integer point; the result is reduced for `Mod(p)`.
    pub fn eval(&self, point: &[BigInt]) -> Result<BigInt> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "point of length {} for {} variables",
                point.len(),
                self.nvars
            )));
        }
        let mut acc = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(self.domain.reduce(acc))
    }

    /// Coefficients of `x^0..=x^d` for a univariate polynomial.
    pub fn univariate_coefficients(&self, d: u32) -> Result<Vec<BigInt>> {
        if self.nvars != 1 {
            return Err(Error::DimensionMismatch(format!(
                "expected a univariate polynomial, got {} variables",
                self.nvars
            )));
        }
        (0..=d).map(|i| self.coefficient(&[i])).collect()
    }

    /// Serialises as `npoly-vars <n> [mod <p>]` followed by one
    /// `coeff e1 .. en` line per monomial, graded-lex ascending.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn parse(text: &str) -> Result<SparsePoly> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let bad = |line: usize, msg: &str| Error::Syntax {
            line,
            msg: msg.to_string(),
        };
        let (hl, header) = lines.next().ok_or_else(|| bad(1, "missing npoly-vars header"))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        let (nvars, domain) = match h.as_slice() {
            ["npoly-vars", n] => (n.parse().map_err(|_| bad(hl, "bad variable count"))?, Coeffs::Integers),
            ["npoly-vars", n, "mod", p] => {
                let p: u64 = p.parse().map_err(|_| bad(hl, "bad modulus"))?;
                if !crate::primes::is_prime(p) {
                    return Err(Error::NotPrime(p));
                }
                (n.parse().map_err(|_| bad(hl, "bad variable count"))?, Coeffs::Mod(p))
            }
            _ => return Err(bad(hl, "expected `npoly-vars <n> [mod <p>]`")),
        };
        let mut terms = Vec::new();
        for (no, l) in lines {
            let toks: Vec<&str> = l.split_whitespace().collect();
            if toks.len() != nvars + 1 {
                return Err(bad(no, "wrong number of fields"));
            }
            let c: BigInt = toks[0].parse().map_err(|_| bad(no, "bad coefficient"))?;
            let e = toks[1..]
                .iter()
                .map(|t| t.parse::<u32>().map_err(|_| bad(no, "bad exponent")))
                .collect::<Result<Vec<_>>>()?;
            terms.push((e, c));
        }
        SparsePoly::from_terms(nvars, domain, terms)
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "npoly-vars {}", self.nvars)?;
        if let Coeffs::Mod(p) = self.domain {
            write!(f, " mod {p}")?;
        }
        writeln!(f)?;
        for (m, c) in &self.terms {
            write!(f, "{c}")?;
            for e in &m.0 {
                write!(f, " {e}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Human-readable rendering such as `2*x1^2 + x1 - 3`, highest terms first.
pub fn pretty(p: &SparsePoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().rev().enumerate() {
        let neg = c.sign() == Sign::Minus;
        let mag = c.abs();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let vars: Vec<String> = m
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{e}", i + 1) })
            .collect();
        if vars.is_empty() {
            out.push_str(&mag.to_string());
        } else {
            if !mag.is_one() {
                out.push_str(&mag.to_string());
                out.push('*');
            }
            out.push_str(&vars.join("*"));
        }
    }
    out
}

/// Reduces a residue-valued big integer to `u64`; caller guarantees range.
pub(crate) fn to_u64(v: &BigInt) -> u64 {
    v.to_u64().expect("value reduced into u64 range")
}
