//! Evaluation domains for circuits.
//!
//! [`Ring`] is the internal trait every evaluator is generic over. The
//! public, data-driven description of a domain is [`RingSpec`], with values
//! carried as [`Value`].

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{Coeffs, SparsePoly};
use crate::error::{Error, Result};
use crate::primes::{add_mod, is_prime, mul_mod};

pub trait Ring {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, v: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;

    fn neg(&self, a: &Self::Elem) -> Result<Self::Elem> {
        self.mul(&self.from_int(&BigInt::from(-1)), a)
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        self.add(a, &self.neg(b)?)
    }
}

/// The integers, with arbitrary precision.
#[derive(Clone, Copy, Debug, Default)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn from_int(&self, v: &BigInt) -> BigInt {
        v.clone()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> Result<BigInt> {
        Ok(a + b)
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> Result<BigInt> {
        Ok(a * b)
    }
    fn neg(&self, a: &BigInt) -> Result<BigInt> {
        Ok(-a)
    }
}

/// The prime field `F_p` with residues stored as `u64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Zp {
    p: u64,
}

impl Zp {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Zp { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
}

impl Ring for Zp {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_int(&self, v: &BigInt) -> u64 {
        crate::algebra::poly::to_u64(&v.mod_floor(&BigInt::from(self.p)))
    }
    fn add(&self, a: &u64, b: &u64) -> Result<u64> {
        Ok(add_mod(*a, *b, self.p))
    }
    fn mul(&self, a: &u64, b: &u64) -> Result<u64> {
        Ok(mul_mod(*a, *b, self.p))
    }
    fn neg(&self, a: &u64) -> Result<u64> {
        Ok(if *a == 0 { 0 } else { self.p - a })
    }
}

/// Polynomials in `nvars` variables with every monomial of total degree above
/// `cap` discarded after each operation.
#[derive(Clone, Copy, Debug)]
pub struct TruncatedPolys {
    pub domain: Coeffs,
    pub nvars: usize,
    pub cap: u32,
    pub budget: usize,
}

impl Ring for TruncatedPolys {
    type Elem = SparsePoly;

    fn zero(&self) -> SparsePoly {
        SparsePoly::zero(self.nvars, self.domain)
    }
    fn one(&self) -> SparsePoly {
        SparsePoly::constant(self.nvars, self.domain, 1)
    }
    fn from_int(&self, v: &BigInt) -> SparsePoly {
        SparsePoly::constant(self.nvars, self.domain, v.clone())
    }
    fn add(&self, a: &SparsePoly, b: &SparsePoly) -> Result<SparsePoly> {
        let s = a.add(b)?.truncate(self.cap);
        if s.len() > self.budget {
            return Err(Error::Budget {
                what: "monomial",
                limit: self.budget as u64,
                reached: s.len() as u64,
            });
        }
        Ok(s)
    }
    fn mul(&self, a: &SparsePoly, b: &SparsePoly) -> Result<SparsePoly> {
        a.mul_truncated(b, Some(self.cap), self.budget)
    }
    fn neg(&self, a: &SparsePoly) -> Result<SparsePoly> {
        Ok(a.neg())
    }
}

/// Exact (uncapped) polynomial ring used for symbolic expansion.
#[derive(Clone, Copy, Debug)]
pub struct Polys {
    pub domain: Coeffs,
    pub nvars: usize,
    pub budget: usize,
}

impl Ring for Polys {
    type Elem = SparsePoly;

    fn zero(&self) -> SparsePoly {
        SparsePoly::zero(self.nvars, self.domain)
    }
    fn one(&self) -> SparsePoly {
        SparsePoly::constant(self.nvars, self.domain, 1)
    }
    fn from_int(&self, v: &BigInt) -> SparsePoly {
        SparsePoly::constant(self.nvars, self.domain, v.clone())
    }
    fn add(&self, a: &SparsePoly, b: &SparsePoly) -> Result<SparsePoly> {
        let s = a.add(b)?;
        if s.len() > self.budget {
            return Err(Error::Budget {
                what: "monomial",
                limit: self.budget as u64,
                reached: s.len() as u64,
            });
        }
        Ok(s)
    }
    fn mul(&self, a: &SparsePoly, b: &SparsePoly) -> Result<SparsePoly> {
        a.mul_truncated(b, None, self.budget)
    }
    fn neg(&self, a: &SparsePoly) -> Result<SparsePoly> {
        Ok(a.neg())
    }
}

/// Univariate polynomials over `F_p` truncated at degree `cap`, stored densely
/// as `cap + 1` residues. Same semantics as [`TruncatedPolys`] with one
/// variable, without the map overhead.
#[derive(Clone, Copy, Debug)]
pub struct DenseTruncated {
    field: Zp,
    cap: usize,
}

impl DenseTruncated {
    pub fn new(p: u64, cap: u32) -> Result<Self> {
        Ok(DenseTruncated {
            field: Zp::new(p)?,
            cap: cap as usize,
        })
    }

    /// The indeterminate `x` (zero when `cap = 0`).
    pub fn x(&self) -> Vec<u64> {
        let mut v = vec![0; self.cap + 1];
        if self.cap >= 1 {
            v[1] = 1;
        }
        v
    }

    pub fn scalar(&self, c: u64) -> Vec<u64> {
        let mut v = vec![0; self.cap + 1];
        v[0] = c % self.field.p;
        v
    }
}

impl Ring for DenseTruncated {
    type Elem = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.cap + 1]
    }
    fn one(&self) -> Vec<u64> {
        self.scalar(1)
    }
    fn from_int(&self, v: &BigInt) -> Vec<u64> {
        self.scalar(self.field.from_int(v))
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Result<Vec<u64>> {
        let p = self.field.p;
        Ok(a.iter().zip(b).map(|(x, y)| add_mod(*x, *y, p)).collect())
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Result<Vec<u64>> {
        let p = self.field.p;
        let mut out = vec![0u64; self.cap + 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate().take(self.cap + 1 - i) {
                out[i + j] = add_mod(out[i + j], mul_mod(ai, bj, p), p);
            }
        }
        Ok(out)
    }
}

/// Base of a truncated polynomial ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BaseRing {
    Integers,
    PrimeField(u64),
}

impl BaseRing {
    pub fn coeffs(&self) -> Coeffs {
        match *self {
            BaseRing::Integers => Coeffs::Integers,
            BaseRing::PrimeField(p) => Coeffs::Mod(p),
        }
    }
}

/// Evaluation domain chosen at run time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RingSpec {
    Integers,
    PrimeField(u64),
    Truncated {
        base: BaseRing,
        var_count: usize,
        degree_cap: u32,
    },
}

impl RingSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            RingSpec::PrimeField(p)
            | RingSpec::Truncated {
                base: BaseRing::PrimeField(p),
                ..
            } if !is_prime(p) => Err(Error::NotPrime(p)),
            _ => Ok(()),
        }
    }
}

/// Element of `F_p`, always reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PrimeFieldElem {
    value: u64,
    modulus: u64,
}

impl PrimeFieldElem {
    pub fn new(value: u64, modulus: u64) -> Result<Self> {
        if !is_prime(modulus) {
            return Err(Error::NotPrime(modulus));
        }
        Ok(PrimeFieldElem {
            value: value % modulus,
            modulus,
        })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }
}

/// A ring element tagged with its domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Int(BigInt),
    Fp(PrimeFieldElem),
    Poly(SparsePoly),
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(BigInt::from(v))
    }
}

impl From<BigInt> for Value {
    fn from(v: BigInt) -> Self {
        Value::Int(v)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(v) => write!(f, "{v}"),
            Value::Fp(e) => write!(f, "{}", e.value),
            Value::Poly(p) => write!(f, "{}", crate::algebra::poly::pretty(p)),
        }
    }
}

impl Value {
    pub(crate) fn to_int(&self, what: &str) -> Result<BigInt> {
        match self {
            Value::Int(v) => Ok(v.clone()),
            _ => Err(Error::Domain(format!("{what}: expected an integer value"))),
        }
    }

    pub(crate) fn to_fp(&self, p: u64, what: &str) -> Result<u64> {
        match self {
            Value::Int(v) => Ok(Zp { p }.from_int(v)),
            Value::Fp(e) if e.modulus == p => Ok(e.value),
            Value::Fp(e) => Err(Error::Domain(format!(
                "{what}: element of F_{} used in F_{p}",
                e.modulus
            ))),
            Value::Poly(_) => Err(Error::Domain(format!("{what}: polynomial used as a field element"))),
        }
    }

    pub(crate) fn to_poly(&self, ring: &TruncatedPolys, what: &str) -> Result<SparsePoly> {
        match self {
            Value::Int(v) => Ok(ring.from_int(v)),
            Value::Fp(e) if ring.domain == Coeffs::Mod(e.modulus) => Ok(ring.from_int(&BigInt::from(e.value))),
            Value::Poly(p) if p.nvars() == ring.nvars && p.domain() == ring.domain => Ok(p.truncate(ring.cap)),
            _ => Err(Error::Domain(format!("{what}: value does not belong to the truncated ring"))),
        }
    }
}
