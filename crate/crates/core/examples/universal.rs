//! The universal circuit U_s, its truncated coefficient map, and embeddings.
//!
//! cargo run --example universal

use polyforge::circuit::parse_circuit;
use polyforge::universal::{build_universal, embed, truncated_coefficient_map};

fn main() -> polyforge::Result<()> {
    let u2 = build_universal(2)?;
    print!("{}", u2.to_text());
    println!("U_2 has {} parameters", u2.param_count());

    let params: Vec<u64> = (0..u2.param_count() as u64).map(|k| k % 3).collect();
    let v = truncated_coefficient_map(&u2, 4, 5, &params)?;
    println!("coefficients mod 5 up to x^4 at {params:?}: {:?}", v.entries);

    let c = parse_circuit(include_str!("../data/square_minus_one.circ"))?;
    let e = embed(&c, 101)?;
    let shown: Vec<String> = e.params.iter().map(ToString::to_string).collect();
    println!("(x+1)(x-1) sits in U_{} at [{}]", e.s, shown.join(", "));
    Ok(())
}
