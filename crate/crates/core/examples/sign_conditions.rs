//! Coefficient signs of constant-free circuits.
//!
//! cargo run --release --example sign_conditions

use polyforge::circuit::parse_circuit;
use polyforge::forge::{poscoef, sign_condition, sign_condition_search};
use polyforge::Budgets;

fn main() -> polyforge::Result<()> {
    let c = parse_circuit(include_str!("../data/cube_minus_x.circ"))?;
    for i in 0..4 {
        println!("coefficient {i} of x^3 - x is {}", poscoef(&c, i, 10_000)?);
    }
    println!("sign condition up to D=3: {:?}", sign_condition(&c, 3, 10_000)?);

    for (s, d) in [(1, 2), (2, 4), (3, 6)] {
        print!("{}", sign_condition_search(s, d, &Budgets::default())?);
    }
    Ok(())
}
