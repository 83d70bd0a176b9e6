//! Prime densities of polynomial systems.
//!
//! cargo run --release --example density

use polyforge::systems::{density_probe, solve_bruteforce, PolySystem};

fn main() -> polyforge::Result<()> {
    let sys = PolySystem::parse(include_str!("../data/xsq_plus_1.sys"))?;
    for p in [2, 3, 5, 7, 13] {
        println!("y^2 + 1 mod {p}: {:?}", solve_bruteforce(&sys, p, 1 << 20)?);
    }
    println!("{}", density_probe(&sys, 20, 1 << 20)?);
    println!("{}", density_probe(&sys, 10_000, 1 << 20)?);

    let planted = PolySystem::parse(include_str!("../data/planted.sys"))?;
    println!("planted: {}", density_probe(&planted, 100, 1 << 20)?);
    Ok(())
}
