use super::{Circuit, Node};
use crate::error::{Error, Result};
use crate::ring::{Integers, PrimeFieldElem, Ring, RingSpec, TruncatedPolys, Value, Zp};

/// Evaluates `c` in `ring`. `vars[j - 1]` is the value of input `j` and
/// `params[j - 1]` the value of parameter slot `j`.
pub fn evaluate_in<R: Ring>(ring: &R, c: &Circuit, vars: &[R::Elem], params: &[R::Elem]) -> Result<R::Elem> {
    if vars.len() < c.num_vars() {
        return Err(Error::MissingAssignment(format!(
            "{} input values for {} variables",
            vars.len(),
            c.num_vars()
        )));
    }
    if params.len() < c.num_params() {
        return Err(Error::MissingAssignment(format!(
            "{} parameter values for {} slots",
            params.len(),
            c.num_params()
        )));
    }
    let mut vals: Vec<R::Elem> = Vec::with_capacity(c.size());
    for node in c.nodes() {
        let v = match node {
            Node::Input(j) => vars[j - 1].clone(),
            Node::Param(j) => params[j - 1].clone(),
            Node::Const(k) => ring.from_int(k),
            Node::Add(a, b) => ring.add(&vals[*a], &vals[*b])?,
            Node::Mul(a, b) => ring.mul(&vals[*a], &vals[*b])?,
        };
        vals.push(v);
    }
    Ok(vals.swap_remove(c.output()))
}

/// Evaluates `c` in the domain described by `spec`. Integer values are
/// accepted everywhere and mapped into the ring.
pub fn evaluate(c: &Circuit, spec: &RingSpec, vars: &[Value], params: &[Value]) -> Result<Value> {
    spec.validate()?;
    match *spec {
        RingSpec::Integers => {
            let v = conv(vars, |x| x.to_int("input"))?;
            let p = conv(params, |x| x.to_int("param"))?;
            Ok(Value::Int(evaluate_in(&Integers, c, &v, &p)?))
        }
        RingSpec::PrimeField(q) => {
            let ring = Zp::new(q)?;
            let v = conv(vars, |x| x.to_fp(q, "input"))?;
            let p = conv(params, |x| x.to_fp(q, "param"))?;
            let r = evaluate_in(&ring, c, &v, &p)?;
            Ok(Value::Fp(PrimeFieldElem::new(r, q)?))
        }
        RingSpec::Truncated {
            base,
            var_count,
            degree_cap,
        } => {
            let ring = TruncatedPolys {
                domain: base.coeffs(),
                nvars: var_count,
                cap: degree_cap,
                budget: crate::Budgets::default().monomials,
            };
            let v = conv(vars, |x| x.to_poly(&ring, "input"))?;
            let p = conv(params, |x| x.to_poly(&ring, "param"))?;
            Ok(Value::Poly(evaluate_in(&ring, c, &v, &p)?))
        }
    }
}

fn conv<T>(vals: &[Value], f: impl Fn(&Value) -> Result<T>) -> Result<Vec<T>> {
    vals.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use num_bigint::BigInt;

    use super::*;
    use crate::algebra::{Coeffs, SparsePoly};
    use crate::circuit::parse_circuit;
    use crate::ring::BaseRing;

    fn square_shift() -> Circuit {
        parse_circuit("g1 = in 1\ng2 = const -1\ng3 = add g1 g2\ng4 = mul g3 g3\nout g4").unwrap()
    }

    #[test]
    fn integers_and_fields() {
        let c = square_shift();
        assert_eq!(evaluate(&c, &RingSpec::Integers, &[3.into()], &[]).unwrap(), Value::Int(4.into()));
        assert_eq!(
            evaluate(&c, &RingSpec::PrimeField(5), &[3.into()], &[]).unwrap(),
            Value::Fp(PrimeFieldElem::new(4, 5).unwrap())
        );
        assert_eq!(
            evaluate(&c, &RingSpec::PrimeField(6), &[3.into()], &[]).unwrap_err(),
            Error::NotPrime(6)
        );
        assert!(matches!(
            evaluate(&c, &RingSpec::Integers, &[], &[]),
            Err(Error::MissingAssignment(_))
        ));
    }

    #[test]
    fn parameters() {
        let c = parse_circuit("g1 = param 1\ng2 = in 1\ng3 = mul g1 g2\nout g3").unwrap();
        assert_eq!(
            evaluate(&c, &RingSpec::Integers, &[2.into()], &[3.into()]).unwrap(),
            Value::Int(BigInt::from(6))
        );
    }

    #[test]
    fn truncated_ring() {
        let c = square_shift();
        let x = SparsePoly::var(1, Coeffs::Integers, 0);
        let spec = RingSpec::Truncated {
            base: BaseRing::Integers,
            var_count: 1,
            degree_cap: 1,
        };
        let Value::Poly(p) = evaluate(&c, &spec, &[Value::Poly(x)], &[]).unwrap() else {
            panic!("expected a polynomial");
        };
        // (x - 1)^2 truncated at degree 1
        assert_eq!(p.univariate_coefficients(2).unwrap(), vec![1.into(), (-2).into(), 0.into()]);
    }
}
