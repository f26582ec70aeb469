use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::expr::{mul, pow, var, Expr};
use super::suitable_power;
use crate::exercise::{Difficulty, GenerationFailed};

const MAX_ATTEMPTS: usize = 1000;
const VARIABLES: [&str; 2] = ["a", "b"];

/// A random expression that is not yet in normal form. The same
/// (difficulty, seed) pair always yields the same expression.
///
/// Products are left-associated, exponents are drawn from 2..=9 and at most
/// two variables occur.
pub fn generate_power(difficulty: Difficulty, seed: u64) -> Result<Expr, GenerationFailed> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Keep streams for different difficulties apart.
    rng.set_stream(difficulty as u64);
    for _ in 0..MAX_ATTEMPTS {
        let e = gen(&mut rng, difficulty.max_depth(), true);
        if e.size() <= difficulty.max_size() && suitable_power(&e) {
            return Ok(e);
        }
    }
    Err(GenerationFailed(MAX_ATTEMPTS))
}

fn gen(rng: &mut ChaCha8Rng, depth: usize, top: bool) -> Expr {
    if depth <= 2 {
        return leaf(rng, depth);
    }
    // The top level is never a bare variable; deeper levels shrink quickly
    // so that most expressions stay well below the bound.
    let roll = rng.random_range(0..10);
    match roll {
        0..=1 if !top => leaf(rng, depth),
        0..=4 => pow(gen(rng, depth - 1, false), exponent(rng)),
        _ => {
            let left = gen(rng, depth - 1, false);
            let right = gen_factor(rng, depth - 1);
            mul(left, right)
        }
    }
}

/// Anything but a product, so that products associate to the left.
fn gen_factor(rng: &mut ChaCha8Rng, depth: usize) -> Expr {
    if depth <= 2 || rng.random_bool(0.3) {
        return leaf(rng, depth);
    }
    pow(gen(rng, depth - 1, false), exponent(rng))
}

/// A variable, or a power of one when the depth allows.
fn leaf(rng: &mut ChaCha8Rng, depth: usize) -> Expr {
    let v = var(VARIABLES[rng.random_range(0..VARIABLES.len())]);
    if depth >= 2 && rng.random_bool(0.7) {
        pow(v, exponent(rng))
    } else {
        v
    }
}

fn exponent(rng: &mut ChaCha8Rng) -> i64 {
    rng.random_range(2..=9)
}
