//! Certified bounds on Player 1's minmax value in three-player games.
//!
//! The object bounded is v = min over *independent* mixtures (τ₂, τ₃) of
//! Player 1's best pure-reply payoff. Computing v exactly is hard, so the
//! module brackets it:
//!
//! * **lower**: one exact LP over *correlated* distributions on A₂×A₃
//!   (a relaxation, hence a valid lower bound), returned with a
//!   certificate pair — a Player-1 mixture guaranteeing `lower` against
//!   every pure opponent pair, and a correlated distribution capping every
//!   pure reply at `lower`.
//! * **upper**: the best product profile found on the k/N lattice over
//!   each opponent simplex, improved by coordinate descent whose line
//!   steps are exact LPs. Any product profile is sound; the lattice and
//!   descent only affect tightness.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::game::Game;
use crate::lp::{solve, LinearProgram, LpOutcome, Sense, VarBounds};
use crate::rational::{rat, Rational};

/// A (game, threshold) pair for the promise classification.
#[derive(Debug, Clone)]
pub struct PromiseInstance {
    pub game: Game,
    pub r: Rational,
}

impl PromiseInstance {
    pub fn new(game: Game, r: Rational) -> Result<Self> {
        if game.player_count() != 3 {
            return Err(Error::WrongPlayerCount { expected: 3, got: game.player_count() });
        }
        Ok(PromiseInstance { game, r })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PromiseVerdict {
    Yes,
    No,
    Ambiguous,
}

/// Certificate that `lower` equals the correlated-minmax LP optimum.
///
/// * `strategy`: a Player-1 mixture with Σ_a strategy_a·u₁(a, s₂, s₃) ≥
///   lower for every pure (s₂, s₃) — so *every* opponent distribution,
///   correlated or not, concedes at least `lower`.
/// * `rho`: a correlated distribution on A₂×A₃ (index s₂·n₃ + s₃) with
///   every pure reply worth at most `lower` — so the bound is not
///   improvable on the correlated side.
#[derive(Debug, Clone)]
pub struct LowerCertificate {
    pub strategy: Vec<Rational>,
    pub rho: Vec<Rational>,
}

/// The product profile achieving `upper`.
#[derive(Debug, Clone)]
pub struct UpperWitness {
    pub tau2: Vec<Rational>,
    pub tau3: Vec<Rational>,
}

#[derive(Debug, Clone)]
pub struct MinmaxBounds {
    pub lower: Rational,
    pub upper: Rational,
    pub upper_witness: UpperWitness,
    pub lower_certificate: LowerCertificate,
}

/// Scale every payoff by the denominator of r, making r an integer while
/// preserving the promise verdict (minmax scales by the same positive
/// factor). Labels are preserved.
pub fn normalize_instance(game: &Game, r: &Rational) -> Result<(Game, Rational)> {
    if game.player_count() != 3 {
        return Err(Error::WrongPlayerCount { expected: 3, got: game.player_count() });
    }
    let denom = Rational::from(r.denom().clone());
    if denom.is_one() {
        return Ok((game.clone(), r.clone()));
    }
    let players = game.player_count();
    let mut payoffs = Vec::with_capacity(game.cell_count() * players);
    for cell in game.cells() {
        for p in 0..players {
            payoffs.push(game.payoff(&cell, p) * &denom);
        }
    }
    let scaled = Game::new(game.all_action_labels().to_vec(), payoffs)?;
    Ok((scaled, r * &denom))
}

fn check_dimensions(game: &Game) -> Result<()> {
    if game.player_count() != 3 {
        return Err(Error::WrongPlayerCount { expected: 3, got: game.player_count() });
    }
    if let Some(p) = game.action_counts().iter().position(|&n| n == 0) {
        return Err(Error::LpDimension(format!("player {p} has no actions")));
    }
    Ok(())
}

/// Player 1's best pure-reply payoff against the product τ₂ ⊗ τ₃.
fn best_pure_reply(game: &Game, tau2: &[Rational], tau3: &[Rational]) -> Rational {
    let n1 = game.action_count(0);
    (0..n1)
        .map(|a| {
            let mut v = Rational::zero();
            for (s2, p2) in tau2.iter().enumerate() {
                for (s3, p3) in tau3.iter().enumerate() {
                    if !p2.is_zero() && !p3.is_zero() {
                        v += p2 * p3 * game.payoff(&[a, s2, s3], 0);
                    }
                }
            }
            v
        })
        .max()
        .expect("player 1 has at least one action")
}

/// Correlated-minmax LP: maximize v subject to
/// Σ_a x_a·u₁(a, s₂, s₃) ≥ v for every pure (s₂, s₃) and Σ x = 1, x ≥ 0.
/// The optimum equals the correlated minmax; the duals of the guarantee
/// rows (negated) form the optimal correlated distribution.
fn guarantee_lp(game: &Game) -> Result<(Rational, LowerCertificate)> {
    let n1 = game.action_count(0);
    let (n2, n3) = (game.action_count(1), game.action_count(2));
    let v_var = n1;
    let mut objective = vec![Rational::zero(); n1 + 1];
    objective[v_var] = Rational::one();
    let mut lp = LinearProgram::new(objective);
    lp.bounds[v_var] = VarBounds::free();
    for s2 in 0..n2 {
        for s3 in 0..n3 {
            let mut row: Vec<Rational> =
                (0..n1).map(|a| game.payoff(&[a, s2, s3], 0).clone()).collect();
            row.push(-Rational::one());
            lp.push_row(row, Sense::Ge, Rational::zero());
        }
    }
    let mut sum_row = vec![Rational::one(); n1 + 1];
    sum_row[v_var] = Rational::zero();
    lp.push_row(sum_row, Sense::Eq, Rational::one());

    match solve(&lp)? {
        LpOutcome::Optimal(sol) => {
            let rho: Vec<Rational> = sol.dual[..n2 * n3].iter().map(|y| -y).collect();
            Ok((sol.objective, LowerCertificate { strategy: sol.primal[..n1].to_vec(), rho }))
        }
        other => Err(Error::Internal(format!(
            "guarantee LP is feasible and bounded, solver said {other:?}"
        ))),
    }
}

/// Exact line step: given the other opponent's fixed vector, minimize
/// Player 1's best pure reply over this opponent's whole simplex.
/// `free_player` is 1 (optimize τ₂ given τ₃) or 2 (optimize τ₃ given τ₂).
fn response_lp(
    game: &Game,
    free_player: usize,
    other: &[Rational],
) -> Result<(Rational, Vec<Rational>)> {
    let n1 = game.action_count(0);
    let nf = game.action_count(free_player);
    let v_var = nf;
    let mut objective = vec![Rational::zero(); nf + 1];
    objective[v_var] = -Rational::one();
    let mut lp = LinearProgram::new(objective);
    lp.bounds[v_var] = VarBounds::free();
    for a in 0..n1 {
        // v − Σ_s M[a][s]·τ(s) ≥ 0 where M folds in the fixed opponent.
        let mut row = vec![Rational::zero(); nf + 1];
        for (s, coeff) in row.iter_mut().enumerate().take(nf) {
            let mut m = Rational::zero();
            for (t, w) in other.iter().enumerate() {
                let cell = if free_player == 1 { [a, s, t] } else { [a, t, s] };
                m += w * game.payoff(&cell, 0);
            }
            *coeff = -m;
        }
        row[v_var] = Rational::one();
        lp.push_row(row, Sense::Ge, Rational::zero());
    }
    let mut sum_row = vec![Rational::one(); nf + 1];
    sum_row[v_var] = Rational::zero();
    lp.push_row(sum_row, Sense::Eq, Rational::one());

    match solve(&lp)? {
        LpOutcome::Optimal(sol) => Ok((-sol.objective, sol.primal[..nf].to_vec())),
        other => Err(Error::Internal(format!(
            "response LP is feasible and bounded, solver said {other:?}"
        ))),
    }
}

/// All points k/den on the simplex over `n` coordinates, lexicographic.
fn simplex_grid(n: usize, den: u32) -> Vec<Vec<Rational>> {
    let den = den as i64;
    let mut out = Vec::new();
    let mut partial = vec![0i64; n];
    fn rec(
        n: usize,
        idx: usize,
        remaining: i64,
        den: i64,
        partial: &mut Vec<i64>,
        out: &mut Vec<Vec<Rational>>,
    ) {
        if idx == n - 1 {
            partial[idx] = remaining;
            out.push(partial.iter().map(|&k| rat(k, den)).collect());
            return;
        }
        for k in 0..=remaining {
            partial[idx] = k;
            rec(n, idx + 1, remaining - k, den, partial, out);
        }
    }
    rec(n, 0, den, den, &mut partial, &mut out);
    out
}

/// Certified bracket for Player 1's minmax value. The incumbent is kept on
/// exact ties throughout, so the result is deterministic.
pub fn minmax_bounds(game: &Game, grid_denominator: u32) -> Result<MinmaxBounds> {
    check_dimensions(game)?;
    if grid_denominator == 0 {
        return Err(Error::ShapeMismatch("grid denominator must be positive".to_string()));
    }

    let (lower, lower_certificate) = guarantee_lp(game)?;

    let (n2, n3) = (game.action_count(1), game.action_count(2));
    let mut best: Option<(Rational, Vec<Rational>, Vec<Rational>)> = None;
    for tau2 in simplex_grid(n2, grid_denominator) {
        for tau3 in simplex_grid(n3, grid_denominator) {
            let v = best_pure_reply(game, &tau2, &tau3);
            if best.as_ref().is_none_or(|(bv, _, _)| v < *bv) {
                best = Some((v, tau2.clone(), tau3));
            }
        }
    }
    let (mut upper, mut tau2, mut tau3) = best.expect("grid is nonempty");

    // Coordinate descent: accept a line step only on strict improvement;
    // stop when a full round improves nothing (capped defensively — the
    // cap can only cost tightness, never soundness).
    for _ in 0..16 {
        let mut improved = false;
        let (v2, cand2) = response_lp(game, 1, &tau3)?;
        if v2 < upper {
            upper = v2;
            tau2 = cand2;
            improved = true;
        }
        let (v3, cand3) = response_lp(game, 2, &tau2)?;
        if v3 < upper {
            upper = v3;
            tau3 = cand3;
            improved = true;
        }
        if !improved {
            break;
        }
    }

    let bounds = MinmaxBounds {
        lower,
        upper,
        upper_witness: UpperWitness { tau2, tau3 },
        lower_certificate,
    };
    verify_bounds(game, &bounds)?;
    Ok(bounds)
}

/// Recheck both certificates from scratch:
/// * strategy guarantees ≥ lower at every pure opponent pair, with
///   equality somewhere (so lower is exactly the LP optimum);
/// * rho caps every pure reply at ≤ lower, with equality somewhere;
/// * upper is exactly Player 1's best pure reply against the witness;
/// * lower ≤ upper.
pub fn verify_bounds(game: &Game, bounds: &MinmaxBounds) -> Result<()> {
    check_dimensions(game)?;
    let fail = |msg: String| Err(Error::Internal(format!("minmax bounds rejected: {msg}")));
    let n1 = game.action_count(0);
    let (n2, n3) = (game.action_count(1), game.action_count(2));
    let cert = &bounds.lower_certificate;
    let witness = &bounds.upper_witness;

    if cert.strategy.len() != n1 || cert.rho.len() != n2 * n3 {
        return fail("certificate shape mismatch".to_string());
    }
    if witness.tau2.len() != n2 || witness.tau3.len() != n3 {
        return fail("witness shape mismatch".to_string());
    }
    for (name, vec) in [
        ("strategy", &cert.strategy),
        ("rho", &cert.rho),
        ("tau2", &witness.tau2),
        ("tau3", &witness.tau3),
    ] {
        if vec.iter().any(|p| p.is_negative()) || vec.iter().sum::<Rational>() != Rational::one() {
            return fail(format!("{name} is not a distribution"));
        }
    }

    // Guarantee side.
    let mut min_guarantee: Option<Rational> = None;
    for s2 in 0..n2 {
        for s3 in 0..n3 {
            let v: Rational =
                (0..n1).map(|a| &cert.strategy[a] * game.payoff(&[a, s2, s3], 0)).sum();
            if min_guarantee.as_ref().is_none_or(|m| v < *m) {
                min_guarantee = Some(v);
            }
        }
    }
    if min_guarantee != Some(bounds.lower.clone()) {
        return fail("strategy does not guarantee exactly `lower`".to_string());
    }

    // Cap side.
    let max_reply: Rational = (0..n1)
        .map(|a| {
            let mut v = Rational::zero();
            for s2 in 0..n2 {
                for s3 in 0..n3 {
                    v += &cert.rho[s2 * n3 + s3] * game.payoff(&[a, s2, s3], 0);
                }
            }
            v
        })
        .max()
        .expect("player 1 has at least one action");
    if max_reply != bounds.lower {
        return fail("rho does not cap replies exactly at `lower`".to_string());
    }

    if best_pure_reply(game, &witness.tau2, &witness.tau3) != bounds.upper {
        return fail("upper does not match the witness".to_string());
    }
    if bounds.lower > bounds.upper {
        return fail("lower exceeds upper".to_string());
    }
    Ok(())
}

/// YES if upper < r, NO if lower > r, AMBIGUOUS when the bracket straddles
/// r (legitimate: instances outside the promise have no guaranteed side).
pub fn classify_promise(
    instance: &PromiseInstance,
    grid_denominator: u32,
) -> Result<PromiseVerdict> {
    let bounds = minmax_bounds(&instance.game, grid_denominator)?;
    Ok(if bounds.upper < instance.r {
        PromiseVerdict::Yes
    } else if bounds.lower > instance.r {
        PromiseVerdict::No
    } else {
        PromiseVerdict::Ambiguous
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn constant_game(c: Rational) -> Game {
        Game::from_fn(&[2, 2, 2], |_, player| if player == 0 { c.clone() } else { int(0) })
    }

    /// Player 3 is a dummy; Player 1's payoff is 1 iff Players 1, 2 pick
    /// different actions (matching-pennies payoffs in {0,1}).
    fn dummy_p3_pennies() -> Game {
        Game::from_fn(
            &[2, 2, 1],
            |cell, player| {
                if player == 0 && cell[0] != cell[1] {
                    int(1)
                } else {
                    int(0)
                }
            },
        )
    }

    /// Player 1 bets on whether Players 2 and 3 mismatch (action 0) or
    /// match (action 1).
    fn mismatch_game() -> Game {
        Game::from_fn(&[2, 2, 2], |cell, player| {
            let mismatched = cell[1] != cell[2];
            if player == 0 && (mismatched == (cell[0] == 0)) {
                int(1)
            } else {
                int(0)
            }
        })
    }

    #[test]
    fn normalize_examples() {
        let g = Game::from_fn(&[2, 2, 2], |cell, player| {
            if player == 0 && cell == [0, 0, 0] {
                int(1)
            } else {
                int(0)
            }
        });
        let (scaled, r) = normalize_instance(&g, &rat(3, 2)).unwrap();
        assert_eq!(r, int(3));
        assert_eq!(*scaled.payoff(&[0, 0, 0], 0), int(2));
        assert_eq!(*scaled.payoff(&[1, 0, 0], 0), int(0));
        assert_eq!(scaled.all_action_labels(), g.all_action_labels());

        let (again, r2) = normalize_instance(&g, &int(5)).unwrap();
        assert_eq!(r2, int(5));
        assert_eq!(*again.payoff(&[0, 0, 0], 0), int(1));

        let (neg, r3) = normalize_instance(&g, &rat(-1, 3)).unwrap();
        assert_eq!(r3, int(-1));
        assert_eq!(*neg.payoff(&[0, 0, 0], 0), int(3));
    }

    #[test]
    fn constant_game_collapses() {
        let g = constant_game(rat(7, 3));
        let b = minmax_bounds(&g, 2).unwrap();
        assert_eq!(b.lower, rat(7, 3));
        assert_eq!(b.upper, rat(7, 3));
        verify_bounds(&g, &b).unwrap();

        let yes = PromiseInstance::new(g.clone(), int(3)).unwrap();
        assert_eq!(classify_promise(&yes, 2).unwrap(), PromiseVerdict::Yes);
        let no = PromiseInstance::new(g, int(2)).unwrap();
        assert_eq!(classify_promise(&no, 2).unwrap(), PromiseVerdict::No);
    }

    #[test]
    fn dummy_p3_matches_zero_sum_lp() {
        let g = dummy_p3_pennies();
        let b = minmax_bounds(&g, 1).unwrap();
        assert_eq!(b.lower, rat(1, 2));
        assert_eq!(b.upper, rat(1, 2));
        assert_eq!(b.upper_witness.tau2, vec![rat(1, 2), rat(1, 2)]);
        assert_eq!(b.upper_witness.tau3, vec![int(1)]);

        // Independent oracle: the 2-player zero-sum value by a direct LP
        // over Player 2's mixture (minimize the best reply).
        let (v, _) = response_lp(&g, 1, &[int(1)]).unwrap();
        assert_eq!(v, rat(1, 2));
    }

    #[test]
    fn dummy_p3_tightness_on_random_games() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let n1 = rng.gen_range(2..=3);
            let n2 = rng.gen_range(2..=3);
            let payoffs: Vec<i64> = (0..n1 * n2).map(|_| rng.gen_range(0..=4)).collect();
            let g = Game::from_fn(&[n1, n2, 1], |cell, player| {
                if player == 0 {
                    int(payoffs[cell[0] * n2 + cell[1]])
                } else {
                    int(0)
                }
            });
            let b = minmax_bounds(&g, 2).unwrap();
            assert_eq!(b.lower, b.upper, "payoffs {payoffs:?}");
        }
    }

    #[test]
    fn mismatch_game_is_half_and_ambiguous_at_half() {
        let g = mismatch_game();
        let b = minmax_bounds(&g, 2).unwrap();
        assert_eq!(b.lower, rat(1, 2));
        assert_eq!(b.upper, rat(1, 2));

        // Sweep oracle: minimize max(m, 1−m) with m = p + q − 2pq over a
        // 1/20 lattice; the minimum is exactly 1/2 at p = q = 1/2.
        let mut sweep_min: Option<Rational> = None;
        for i in 0..=20i64 {
            for j in 0..=20i64 {
                let (p, q) = (rat(i, 20), rat(j, 20));
                let m = &p + &q - int(2) * &p * &q;
                let v = m.clone().max(int(1) - &m);
                if sweep_min.as_ref().is_none_or(|s| v < *s) {
                    sweep_min = Some(v);
                }
            }
        }
        assert_eq!(sweep_min, Some(rat(1, 2)));

        for grid in [1, 2, 3, 8] {
            let inst = PromiseInstance::new(g.clone(), rat(1, 2)).unwrap();
            assert_eq!(classify_promise(&inst, grid).unwrap(), PromiseVerdict::Ambiguous);
        }
    }

    #[test]
    fn refinement_reaches_exact_optimum_from_coarse_grid() {
        // Grid 1 only offers vertices, but the LP line steps land on the
        // interior optimum exactly.
        let b = minmax_bounds(&dummy_p3_pennies(), 1).unwrap();
        assert_eq!(b.upper, rat(1, 2));
        let b = minmax_bounds(&mismatch_game(), 1).unwrap();
        assert_eq!(b.upper, rat(1, 2));
    }

    #[test]
    fn doubling_grid_never_increases_upper_and_lower_stays_below() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..10 {
            let payoffs: Vec<i64> = (0..8).map(|_| rng.gen_range(0..=2)).collect();
            let g = Game::from_fn(&[2, 2, 2], |cell, player| {
                if player == 0 {
                    int(payoffs[4 * cell[0] + 2 * cell[1] + cell[2]])
                } else {
                    int(0)
                }
            });
            let mut prev: Option<Rational> = None;
            for grid in [1u32, 2, 4, 8] {
                let b = minmax_bounds(&g, grid).unwrap();
                assert!(b.lower <= b.upper);
                if let Some(p) = prev {
                    assert!(b.upper <= p, "payoffs {payoffs:?}, grid {grid}");
                }
                prev = Some(b.upper);
            }
        }
    }

    #[test]
    fn scaling_leaves_the_verdict_alone() {
        let g = dummy_p3_pennies();
        for (r, expected) in [
            (rat(3, 4), PromiseVerdict::Yes),
            (rat(1, 4), PromiseVerdict::No),
            (rat(1, 2), PromiseVerdict::Ambiguous),
        ] {
            for factor in [int(2), rat(1, 3), int(7)] {
                let scaled = Game::from_fn(&[2, 2, 1], |cell, player| {
                    game_payoff_scaled(&g, cell, player, &factor)
                });
                let inst = PromiseInstance::new(scaled, &r * &factor).unwrap();
                assert_eq!(classify_promise(&inst, 2).unwrap(), expected, "factor {factor}");
            }
        }
    }

    fn game_payoff_scaled(g: &Game, cell: &[usize], player: usize, factor: &Rational) -> Rational {
        if player == 0 {
            g.payoff(cell, player) * factor
        } else {
            g.payoff(cell, player).clone()
        }
    }

    #[test]
    fn dimension_and_shape_errors() {
        let two_player = Game::from_fn(&[2, 2], |_, _| int(0));
        assert!(matches!(
            minmax_bounds(&two_player, 2),
            Err(Error::WrongPlayerCount { expected: 3, got: 2 })
        ));
        let degenerate = Game::from_fn(&[2, 0, 2], |_, _| int(0));
        assert!(matches!(minmax_bounds(&degenerate, 2), Err(Error::LpDimension(_))));
        let g = constant_game(int(0));
        assert!(minmax_bounds(&g, 0).is_err());
        assert!(PromiseInstance::new(Game::from_fn(&[2, 2], |_, _| int(0)), int(1)).is_err());
    }

    #[test]
    fn verifier_rejects_tampered_bounds() {
        let g = dummy_p3_pennies();
        let good = minmax_bounds(&g, 2).unwrap();

        let mut bad = good.clone();
        bad.upper = int(1);
        assert!(verify_bounds(&g, &bad).is_err());

        let mut bad = good.clone();
        bad.lower = rat(1, 3);
        assert!(verify_bounds(&g, &bad).is_err());

        let mut bad = good.clone();
        bad.lower_certificate.strategy = vec![int(1), int(0)];
        assert!(verify_bounds(&g, &bad).is_err());

        let mut bad = good;
        bad.lower_certificate.rho = vec![int(1), int(0), int(0), int(0)];
        assert!(verify_bounds(&g, &bad).is_err());
    }
}
