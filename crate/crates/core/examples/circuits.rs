//! Parse a circuit, evaluate it in several rings and enumerate small circuits.
//!
//! cargo run --example circuits

use num_bigint::BigInt;
use polyforge::circuit::{canonical_count, enumerate_circuits, evaluate, metrics, parse_circuit, EnumerationSpec};
use polyforge::ring::{BaseRing, RingSpec, Value};
use polyforge::algebra::{Coeffs, SparsePoly};

fn main() -> polyforge::Result<()> {
    let c = parse_circuit(include_str!("../data/square_minus_one.circ"))?;
    print!("{}", c.to_text());

    let m = metrics(&c);
    println!("size={} gates={} formal_degree={}", m.size, m.gate_count, m.formal_degree);

    let at3 = evaluate(&c, &RingSpec::Integers, &[Value::from(3)], &[])?;
    let mod7 = evaluate(&c, &RingSpec::PrimeField(7), &[Value::from(5)], &[])?;
    let trunc = RingSpec::Truncated {
        base: BaseRing::Integers,
        var_count: 1,
        degree_cap: 1,
    };
    let x = Value::Poly(SparsePoly::var(1, Coeffs::Integers, 0));
    let low = evaluate(&c, &trunc, &[x], &[])?;
    println!("c(3) = {at3}, c(5) mod 7 = {mod7}, c mod x^2 = {low}");

    // Every canonical circuit with at most three vertices over x and the constant -1.
    let spec = EnumerationSpec::new(3, 1, vec![BigInt::from(-1)]);
    println!("canonical circuits with <= 3 vertices: {}", canonical_count(&spec));
    for c in enumerate_circuits(&spec)? {
        let lines: Vec<String> = c.to_text().lines().filter(|l| !l.starts_with("nvars")).map(str::to_owned).collect();
        println!("  {}", lines.join("; "));
    }
    Ok(())
}
