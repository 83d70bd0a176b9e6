//! The universal polynomial `U_s`.
//!
//! `U_1 = a_0^{(1)} + b_0^{(1)}·x` and, for `2 ≤ j ≤ s`,
//! `U_j = (a_0^{(j)} + Σ_{0<i<j} a_i^{(j)} U_i)·(b_0^{(j)} + Σ_{0<i<j} b_i^{(j)} U_i)`.
//! Every polynomial computed by a small circuit in one variable is a
//! specialisation of some `U_s`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::pit_equal;
use crate::circuit::{evaluate_in, Circuit, CircuitBuilder, Node};
use crate::error::{Error, Result};
use crate::ring::DenseTruncated;

/// Which factor of a level a parameter belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    A,
    B,
}

/// `U_s` as a circuit with one input `x` and `s(s+1)` parameter slots.
///
/// Slots are ordered by level, and within level `j` as
/// `a_0..a_{j−1}` then `b_0..b_{j−1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniversalTemplate {
    s: usize,
    circuit: Circuit,
}

impl UniversalTemplate {
    pub fn levels(&self) -> usize {
        self.s
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn param_count(&self) -> usize {
        self.s * (self.s + 1)
    }

    /// 1-based parameter slot of `a_i^{(j)}` or `b_i^{(j)}`.
    pub fn param_index(&self, j: usize, i: usize, side: Side) -> usize {
        assert!(1 <= j && j <= self.s && i < j, "no parameter ({j}, {i})");
        param_slot(j, i, side)
    }

    /// Inverse of [`param_index`](Self::param_index).
    pub fn param_name(&self, slot: usize) -> (usize, usize, Side) {
        assert!(1 <= slot && slot <= self.param_count(), "no parameter slot {slot}");
        let mut j = 1;
        while (j + 1) * j < slot {
            j += 1;
        }
        let k = slot - 1 - j * (j - 1);
        if k < j {
            (j, k, Side::A)
        } else {
            (j, k - j, Side::B)
        }
    }

    /// Circuit text preceded by `# universal s=<s>` and a slot legend.
    pub fn to_text(&self) -> String {
        let mut out = format!("# universal s={}\n", self.s);
        for slot in 1..=self.param_count() {
            let (j, i, side) = self.param_name(slot);
            let name = if side == Side::A { 'a' } else { 'b' };
            out.push_str(&format!("# param {slot} = {name}_{i}^({j})\n"));
        }
        out.push_str(&self.circuit.to_text());
        out
    }
}

fn param_slot(j: usize, i: usize, side: Side) -> usize {
    j * (j - 1) + i + 1 + if side == Side::B { j } else { 0 }
}

pub fn build_universal(s: usize) -> Result<UniversalTemplate> {
    if s == 0 {
        return Err(Error::Precondition("the universal template needs s >= 1".into()));
    }
    let mut b = CircuitBuilder::new(1, s * (s + 1));
    let x = b.input(1);
    let a0 = b.param(param_slot(1, 0, Side::A));
    let b0 = b.param(param_slot(1, 0, Side::B));
    let bx = b.mul(b0, x);
    let mut levels = vec![b.add(a0, bx)];
    for j in 2..=s {
        let factor = |side: Side, b: &mut CircuitBuilder| {
            let mut acc = b.param(param_slot(j, 0, side));
            for (i, &u) in levels.iter().enumerate() {
                let coef = b.param(param_slot(j, i + 1, side));
                let term = b.mul(coef, u);
                acc = b.add(acc, term);
            }
            acc
        };
        let fa = factor(Side::A, &mut b);
        let fb = factor(Side::B, &mut b);
        levels.push(b.mul(fa, fb));
    }
    let out = *levels.last().expect("s >= 1");
    Ok(UniversalTemplate { s, circuit: b.finish(out) })
}

/// The first `d + 1` coefficients of `U_s(params, x)` over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoefficientVector {
    pub s: usize,
    pub d: u32,
    pub p: u64,
    pub entries: Vec<u64>,
}

/// Evaluates the template in `F_p[x]/(x^{d+1})` and reads off `α_0..α_d`.
pub fn truncated_coefficient_map(t: &UniversalTemplate, d: u32, p: u64, params: &[u64]) -> Result<CoefficientVector> {
    let ring = DenseTruncated::new(p, d)?;
    if params.len() != t.param_count() {
        return Err(Error::MissingAssignment(format!(
            "{} of {} universal parameters",
            params.len(),
            t.param_count()
        )));
    }
    let ps: Vec<Vec<u64>> = params.iter().map(|&v| ring.scalar(v)).collect();
    let entries = evaluate_in(&ring, &t.circuit, &[ring.x()], &ps)?;
    Ok(CoefficientVector {
        s: t.s,
        d,
        p,
        entries,
    })
}

/// Degree bound `(i + 1)·2^{2s}` of the coefficient `α_i` as a polynomial in
/// the parameters.
pub fn coefficient_degree_bound(i: u32, s: usize) -> u64 {
    (u64::from(i) + 1) << (2 * s)
}

/// A parameter assignment realising a concrete circuit inside `U_s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Embedding {
    /// Number of levels used.
    pub s: usize,
    #[serde(serialize_with = "ser_bigints")]
    pub params: Vec<BigInt>,
}

fn ser_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

/// Affine combination `offset + Σ coef[i]·U_{i+1}` of universal levels.
#[derive(Clone, Debug)]
struct Form {
    offset: BigInt,
    coef: Vec<BigInt>,
}

impl Form {
    fn add(&self, other: &Form) -> Form {
        let n = self.coef.len().max(other.coef.len());
        let at = |f: &Form, i: usize| f.coef.get(i).cloned().unwrap_or_default();
        Form {
            offset: &self.offset + &other.offset,
            coef: (0..n).map(|i| at(self, i) + at(other, i)).collect(),
        }
    }

    fn level(j: usize) -> Form {
        let mut coef = vec![BigInt::zero(); j];
        coef[j - 1] = BigInt::one();
        Form {
            offset: BigInt::zero(),
            coef,
        }
    }
}

/// Finds parameters with `U_{s'}(params, x) ≡ c(x)`.
///
/// Level 1 is set to `x`; every gate of the pruned circuit takes one further
/// level, a product gate as `(form_f)·(form_g)` and a sum gate as
/// `(form_f + form_g)·1`. Constant leaves become offsets. The assignment is
/// checked with [`pit_equal`] over `F_p` before it is returned.
pub fn embed(c: &Circuit, p: u64) -> Result<Embedding> {
    if c.num_vars() > 1 || c.num_params() > 0 {
        return Err(Error::Precondition(format!(
            "embedding needs one variable and no parameters, got {} and {}",
            c.num_vars(),
            c.num_params()
        )));
    }
    let c = c.prune();
    let gates = c.gate_count();
    let s = match c.nodes()[c.output()] {
        Node::Input(_) => 1,
        Node::Const(_) => 2,
        _ => gates + 1,
    };
    let mut params = vec![BigInt::zero(); s * (s + 1)];
    params[param_slot(1, 0, Side::B) - 1] = BigInt::one();
    let mut forms: Vec<Form> = Vec::with_capacity(c.size());
    let mut next_level = 2;
    let write_factor = |params: &mut Vec<BigInt>, j: usize, side: Side, f: &Form| {
        params[param_slot(j, 0, side) - 1] = f.offset.clone();
        for (i, v) in f.coef.iter().enumerate() {
            params[param_slot(j, i + 1, side) - 1] = v.clone();
        }
    };
    for node in c.nodes() {
        let form = match node {
            Node::Input(_) => Form::level(1),
            Node::Const(v) => Form {
                offset: v.clone(),
                coef: Vec::new(),
            },
            Node::Param(_) => unreachable!("checked above"),
            Node::Add(a, b) | Node::Mul(a, b) => {
                let j = next_level;
                next_level += 1;
                let one = Form {
                    offset: BigInt::one(),
                    coef: Vec::new(),
                };
                let (fa, fb) = if matches!(node, Node::Add(..)) {
                    (forms[*a].add(&forms[*b]), one)
                } else {
                    (forms[*a].clone(), forms[*b].clone())
                };
                write_factor(&mut params, j, Side::A, &fa);
                write_factor(&mut params, j, Side::B, &fb);
                Form::level(j)
            }
        };
        forms.push(form);
    }
    if let Node::Const(v) = &c.nodes()[c.output()] {
        params[param_slot(2, 0, Side::A) - 1] = v.clone();
        params[param_slot(2, 0, Side::B) - 1] = BigInt::one();
    }
    let template = build_universal(s)?;
    let bound = template.circuit().bind_params(&params)?;
    let target = c.with_num_vars(1)?;
    let verdict = pit_equal(&bound, &target, p, 20, 0x5eed)?;
    if !verdict.is_equal() {
        return Err(Error::EmbedVerification(format!("U_{s} disagrees with the circuit: {verdict:?}")));
    }
    Ok(Embedding { s, params })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{expand, Coeffs};
    use crate::circuit::parse_circuit;
    use crate::ring::Integers;

    #[test]
    fn parameter_counts() {
        for s in 1..=12 {
            let t = build_universal(s).unwrap();
            assert_eq!(t.circuit().num_params(), s * (s + 1));
            for slot in 1..=t.param_count() {
                let (j, i, side) = t.param_name(slot);
                assert_eq!(t.param_index(j, i, side), slot);
            }
        }
    }

    #[test]
    fn level_one() {
        let t = build_universal(1).unwrap();
        let v = evaluate_in(&Integers, t.circuit(), &[1.into()], &[2.into(), 3.into()]).unwrap();
        assert_eq!(v, 5.into());
        let f = truncated_coefficient_map(&t, 2, 7, &[4, 5]).unwrap();
        assert_eq!(f.entries, vec![4, 5, 0]);
    }

    #[test]
    fn two_levels_all_ones() {
        let t = build_universal(2).unwrap();
        let f = truncated_coefficient_map(&t, 2, 5, &[1; 6]).unwrap();
        assert_eq!(f.entries, vec![4, 4, 1]);
    }

    #[test]
    fn symbolic_two_levels() {
        let t = build_universal(2).unwrap();
        let p = expand(t.circuit(), Coeffs::Integers, None, 10_000).unwrap();
        // variables: x, a0', b0', a0'', a1'', b0'', b1''
        assert_eq!(p.nvars(), 7);
        // a1'' b1'' b0'^2 x^2
        assert_eq!(p.coefficient(&[2, 0, 2, 0, 1, 0, 1]).unwrap(), 1.into());
        // a0'' b0''
        assert_eq!(p.coefficient(&[0, 0, 0, 1, 0, 1, 0]).unwrap(), 1.into());
        assert_eq!(p.len(), 8);
    }

    #[test]
    fn embeds_square_and_constant() {
        let sq = parse_circuit("g1 = in 1\ng2 = mul g1 g1\nout g2").unwrap();
        let e = embed(&sq, 101).unwrap();
        assert_eq!(e.s, 2);
        let t = build_universal(2).unwrap();
        assert_eq!(e.params[t.param_index(2, 1, Side::A) - 1], BigInt::one());
        assert_eq!(e.params[t.param_index(2, 1, Side::B) - 1], BigInt::one());
        assert_eq!(e.params[t.param_index(2, 0, Side::A) - 1], BigInt::zero());

        let seven = parse_circuit("g1 = const 7\nout g1").unwrap();
        let e = embed(&seven, 101).unwrap();
        assert_eq!(e.s, 2);
        let bound = t.circuit().bind_params(&e.params).unwrap();
        for r in [0, 5, 11] {
            assert_eq!(evaluate_in(&Integers, &bound, &[r.into()], &[]).unwrap(), 7.into());
        }
    }

    #[test]
    fn embeds_difference_of_squares() {
        let c = parse_circuit(
            "g1 = in 1\ng2 = const 1\ng3 = const -1\ng4 = add g1 g2\ng5 = add g1 g3\ng6 = mul g4 g5\nout g6",
        )
        .unwrap();
        let e = embed(&c, 101).unwrap();
        assert_eq!(e.s, 4);
    }

    #[test]
    fn legend() {
        let text = build_universal(2).unwrap().to_text();
        assert!(text.starts_with("# universal s=2\n# param 1 = a_0^(1)\n# param 2 = b_0^(1)\n# param 3 = a_0^(2)\n"));
        assert!(parse_circuit(&text).is_ok());
    }
}
