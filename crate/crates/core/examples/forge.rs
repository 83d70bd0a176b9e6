//! Search for the first 0/1 coefficient vector that no small circuit realizes.
//!
//! cargo run --release --example forge

use polyforge::forge::{forge, verify_hardness, HardOutcome};
use polyforge::systems::build_hardness_system;
use polyforge::Budgets;

fn main() -> polyforge::Result<()> {
    let budgets = Budgets::default();
    print!("{}", build_hardness_system(1, 2, &[0, 0, 1])?);

    for (s, d, p) in [(1, 2, 5), (1, 3, 7), (2, 3, 5)] {
        let report = forge(s, d, p, &budgets, false)?;
        print!("{report}");
        if let HardOutcome::Found(gamma) = &report.gamma {
            match verify_hardness(s, p, gamma, &budgets)? {
                Ok(n) => println!("certificate: none of {n} circuits computes it\n"),
                Err(c) => println!("certificate broken by\n{}", c.to_text()),
            }
        }
    }
    Ok(())
}
