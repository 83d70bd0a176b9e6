//! Permanent, Hamiltonian cycles, Valiant's construction and Boolean sums.
//!
//! cargo run --example families

use num_bigint::BigInt;
use polyforge::algebra::pretty;
use polyforge::families::{
    hc_eval, permanent_eval, projection_apply, valiant_build, vnp_sum, SquareMatrix, Target, TruthTable,
};
use polyforge::circuit::parse_circuit;
use polyforge::ring::{Integers, RingSpec, Value, Zp};

fn main() -> polyforge::Result<()> {
    let ones = SquareMatrix::parse(include_str!("../data/ones3.mat"))?;
    println!("per(J_3) = {}", permanent_eval(&Integers, &ones)?);

    let k4 = SquareMatrix::parse(include_str!("../data/k4.mat"))?;
    println!("HC(K_4) = {}", hc_eval(&Integers, &k4, 1 << 20)?);
    let f7 = Zp::new(7)?;
    let m = SquareMatrix::from_fn(4, |i, j| (3 * i as u64 + j as u64 + 1) % 7);
    println!("per mod 7 of\n{m}= {}", permanent_eval(&f7, &m)?);

    // Majority of three bits as a multilinear polynomial.
    let maj = TruthTable::from_fn(3, |b| BigInt::from(u8::from(b.iter().sum::<u8>() >= 2)))?;
    println!("maj_3 = {}", pretty(&valiant_build(&maj)));

    // Sum x1*y1 + y1*y2 over (y1, y2) in {0,1}^2, then fix x1 by projection.
    let c = parse_circuit(include_str!("../data/vnp_example.circ"))?;
    let s = vnp_sum(&c, &RingSpec::Integers, &[Value::from(3)], 1 << 20)?;
    println!("sum at x1 = 3: {s}");
    let fixed = projection_apply(&c, &[Target::Const(3.into()), Target::Var(1), Target::Var(2)], 2)?;
    println!("after projection: {}", vnp_sum(&fixed, &RingSpec::Integers, &[], 1 << 20)?);
    Ok(())
}
