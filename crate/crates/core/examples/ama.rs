//! The evaluation protocol with honest and cheating provers.
//!
//! cargo run --release --example ama

use polyforge::protocols::{ama_simulate, direct_bit, AmaConfig, CheatVariant, ProverStrategy};

fn main() -> polyforge::Result<()> {
    let cfg = AmaConfig::default();
    let x = [3, 1, 4, 1, 5, 9, 2, 6];
    // per(3 1; 4 1) = 7, so bit 3 is 0.
    let bit = direct_bit(&x, 3)?.expect("|y| = 4");

    let honest = ProverStrategy::honest();
    print!("{}", ama_simulate(&x, 3, bit, 1, &honest, &cfg, 42)?);

    // The false claim b = 1. A failed certificate makes Arthur accept only b = 0.
    for variant in [CheatVariant::DeterminantSkeleton, CheatVariant::BogusPrimes] {
        let cheat = ProverStrategy::cheating(variant);
        let caught = (0..50)
            .map(|s| ama_simulate(&x, 3, 1 - bit, 1, &cheat, &cfg, s))
            .collect::<polyforge::Result<Vec<_>>>()?
            .iter()
            .filter(|t| !t.accepted)
            .count();
        println!("{variant:?}: false claim rejected {caught}/50");
    }

    print!("{}", ama_simulate(&[1, 2, 3, 4, 5, 6], 0, 0, 1, &honest, &cfg, 0)?);
    Ok(())
}
