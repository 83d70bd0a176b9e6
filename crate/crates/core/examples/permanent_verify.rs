//! Checking circuits for the permanent by downward self-reduction.
//!
//! cargo run --release --example permanent_verify

use polyforge::families::{determinant_circuit, permanent_chain};
use polyforge::protocols::permanent_verify;

fn main() -> polyforge::Result<()> {
    let honest = permanent_chain(4);
    let ok = (0..100).filter(|&s| permanent_verify(&honest, 101, 2, s).map(|v| v.accepted).unwrap_or(false)).count();
    println!("honest chain t=4: accepted {ok}/100");

    let mut bad = permanent_chain(2);
    bad[1] = determinant_circuit(2);
    let mut rejected = 0;
    for s in 0..200 {
        if !permanent_verify(&bad, 101, 2, s)?.accepted {
            rejected += 1;
        }
    }
    println!("determinant at level 2: rejected {rejected}/200");
    Ok(())
}
