//! Deterministic instance generators shared by tests and the CLI.
//!
//! Everything is seeded ChaCha8: the same seed always yields the same
//! games, so generated fixtures are reproducible across runs and
//! platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::game::Game;
use crate::minmax::{minmax_bounds, PromiseInstance, PromiseVerdict};
use crate::rational::{int, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random game with integer payoffs in `lo..=hi` for every player.
pub fn random_game(rng: &mut ChaCha8Rng, counts: &[usize], lo: i64, hi: i64) -> Game {
    let players = counts.len();
    let cells: usize = counts.iter().product();
    let payoffs: Vec<Rational> =
        (0..cells * players).map(|_| int(rng.gen_range(lo..=hi))).collect();
    let labels = counts.iter().map(|&n| (0..n).map(|j| format!("a{j}")).collect()).collect();
    Game::new(labels, payoffs).expect("generated shape is consistent")
}

/// Three-player source where Player 1 earns `c` in every cell and the
/// other players earn 0.
pub fn constant_source(c: &Rational, counts: &[usize; 3]) -> Game {
    let c = c.clone();
    Game::from_fn(counts, move |_, player| if player == 0 { c.clone() } else { int(0) })
}

/// Three-player source whose third player is a dummy with a single
/// action; Player 1's payoffs are random in `lo..=hi`, so the minmax is
/// the exact value of a two-player zero-sum LP.
pub fn dummy_p3_source(rng: &mut ChaCha8Rng, n1: usize, n2: usize, lo: i64, hi: i64) -> Game {
    let payoffs: Vec<i64> = (0..n1 * n2).map(|_| rng.gen_range(lo..=hi)).collect();
    Game::from_fn(&[n1, n2, 1], move |cell, player| {
        if player == 0 {
            int(payoffs[cell[0] * n2 + cell[1]])
        } else {
            int(0)
        }
    })
}

/// An instance whose promise verdict is known by construction.
#[derive(Debug, Clone)]
pub struct KnownVerdictInstance {
    pub instance: PromiseInstance,
    pub expected: PromiseVerdict,
}

/// A corpus of verdict-known instances: constant-payoff sources and
/// dummy-third-player sources (both have exactly computable minmax),
/// with thresholds shifted one unit to either side.
pub fn known_corpus(seed: u64, size: usize) -> Result<Vec<KnownVerdictInstance>> {
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(size);
    for i in 0..size {
        let (game, value) = if i % 2 == 0 {
            let counts =
                [rng.gen_range(1..=3usize), rng.gen_range(1..=3usize), rng.gen_range(1..=3usize)];
            let c = int(rng.gen_range(0..=2));
            (constant_source(&c, &counts), c)
        } else {
            let n1 = rng.gen_range(2..=3usize);
            let n2 = rng.gen_range(2..=3usize);
            let game = dummy_p3_source(&mut rng, n1, n2, 0, 2);
            let bounds = minmax_bounds(&game, 2)?;
            debug_assert_eq!(bounds.lower, bounds.upper);
            let value = bounds.lower.clone();
            (game, value)
        };
        let (r, expected) = if (i / 2) % 2 == 0 {
            (&value + int(1), PromiseVerdict::Yes)
        } else {
            (&value - int(1), PromiseVerdict::No)
        };
        out.push(KnownVerdictInstance { instance: PromiseInstance::new(game, r)?, expected });
    }
    Ok(out)
}
