//! Expand circuits into sparse polynomials and compare them by random evaluation.
//!
//! cargo run --example polynomials

use polyforge::algebra::{expand, pit_equal, pretty, Coeffs, PitVerdict};
use polyforge::circuit::parse_circuit;
use polyforge::families::{determinant_circuit, permanent_circuit};

fn main() -> polyforge::Result<()> {
    let c = parse_circuit(include_str!("../data/cube_minus_x.circ"))?;
    let p = expand(&c, Coeffs::Integers, None, 10_000)?;
    println!("x^3 - x expands to {}", pretty(&p));
    println!("weight = {}", p.weight()?);
    println!("truncated at degree 2: {}", pretty(&expand(&c, Coeffs::Integers, Some(2), 10_000)?));

    let per = permanent_circuit(2);
    let det = determinant_circuit(2);
    println!("per_2 = {}", pretty(&expand(&per, Coeffs::Integers, None, 10_000)?));
    println!("det_2 = {}", pretty(&expand(&det, Coeffs::Integers, None, 10_000)?));

    // The same permanent written differently agrees; the determinant does not.
    let swapped = parse_circuit("g1 = in 2\ng2 = in 3\ng3 = mul g2 g1\ng4 = in 4\ng5 = in 1\ng6 = mul g4 g5\ng7 = add g3 g6\nout g7")?;
    for (name, other) in [("x2*x3 + x4*x1", &swapped), ("det_2", &det)] {
        match pit_equal(&per, other, 101, 20, 1)? {
            PitVerdict::Equal { error_bound, .. } => println!("per_2 vs {name}: equal (error <= {error_bound:e})"),
            PitVerdict::Different { witness, left, right } => {
                println!("per_2 vs {name}: different at {witness:?}: {left} vs {right}")
            }
        }
    }
    Ok(())
}
