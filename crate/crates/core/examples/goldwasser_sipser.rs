//! Hash-collision estimates for small and large sets.
//!
//! cargo run --release --example goldwasser_sipser

use polyforge::protocols::{gs_estimate, phi, phi_bruteforce, HashMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> polyforge::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for size in [1usize, 4, 16, 64, 256] {
        let mut set: Vec<u64> = (0..size).map(|_| rng.gen_range(0..1 << 12)).collect();
        set.sort_unstable();
        set.dedup();
        println!("{}", gs_estimate(&set, 4, 12, 1000, 7, 0.05)?);
    }

    let set: Vec<u64> = (0..20).map(|_| rng.gen_range(0..1 << 8)).collect();
    let ms: Vec<HashMatrix> = (0..3).map(|_| HashMatrix::random(3, 8, &mut rng)).collect();
    println!("bucketed {} / backtracking {}", phi(&ms, &set)?, phi_bruteforce(&ms, &set));
    Ok(())
}
