//! The ⊥-extension gadget G → G′ and the end-to-end theorem pipeline.
//!
//! G′ appends one action ⊥ to every player of a three-player source game.
//! Players 2 and 3 earn 0 everywhere; Player 1 earns r wherever anyone
//! plays ⊥ and the source payoff otherwise. The all-⊥ profile μ is always
//! a Nash equilibrium of G′, and its trembling-hand perfection encodes
//! whether Player 1's minmax value in the source sits below or above r.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::game::{check_nash, Game, MixedProfile, NashVerdict, PureProfile};
use crate::minmax::{minmax_bounds, PromiseInstance, PromiseVerdict};
use crate::rational::{rat, Rational};
use crate::refinement::{
    build_witness_sequence, certify_witness, conditional_best_reply_test, CertifyOutcome,
    ConditionalReplyReport, PerfectionCertificate, DEFAULT_K0_BOUND,
};

/// The label appended for ⊥. A source game already using it cannot be
/// reduced (that collision is an error, never silently renamed).
pub const BOT_LABEL: &str = "_bot";

#[derive(Debug, Clone)]
pub struct ReducedGame {
    pub gprime: Game,
    /// Per-player index of ⊥ in `gprime` — always the appended last index,
    /// recorded explicitly rather than inferred from labels.
    pub bot_index: Vec<usize>,
    pub source: Game,
    pub r: Rational,
}

/// Build G′ from a three-player source and threshold r.
pub fn build_gprime(game: &Game, r: &Rational) -> Result<ReducedGame> {
    if game.player_count() != 3 {
        return Err(Error::WrongPlayerCount { expected: 3, got: game.player_count() });
    }
    let mut labels = Vec::with_capacity(3);
    for player in 0..3 {
        let mut row = game.action_labels(player).to_vec();
        if row.iter().any(|l| l == BOT_LABEL) {
            return Err(Error::BotLabelTaken(format!(
                "player {player} already has an action labeled {BOT_LABEL}"
            )));
        }
        row.push(BOT_LABEL.to_string());
        labels.push(row);
    }
    let counts = game.action_counts();
    let prime_counts: Vec<usize> = counts.iter().map(|n| n + 1).collect();
    let mut payoffs = Vec::new();
    for cell in crate::game::PureProfileIter::new(prime_counts) {
        let has_bot = cell.iter().zip(&counts).any(|(&a, &n)| a == n);
        let p1 = if has_bot { r.clone() } else { game.payoff(&cell, 0).clone() };
        payoffs.push(p1);
        payoffs.push(Rational::zero());
        payoffs.push(Rational::zero());
    }
    let gprime = Game::new(labels, payoffs)?;
    Ok(ReducedGame { gprime, bot_index: counts, source: game.clone(), r: r.clone() })
}

/// The all-⊥ profile, verified to be a Nash equilibrium of G′. This
/// always succeeds for gadgets produced by [`build_gprime`]; a tampered
/// `ReducedGame` is rejected.
pub fn mu_of(rg: &ReducedGame) -> Result<PureProfile> {
    let mu = PureProfile::new(rg.bot_index.clone());
    mu.validate(&rg.gprime)?;
    match check_nash(&rg.gprime, &mu.to_mixed(&rg.gprime)?)? {
        NashVerdict::Yes => Ok(mu),
        NashVerdict::No(d) => Err(Error::Internal(format!(
            "all-⊥ must be Nash in G′, found deviation for player {} to action {}",
            d.player, d.action
        ))),
    }
}

/// Deterministic fully mixed opponent profiles for the negative branch:
/// ⊥-centered, uniform-centered, source-directed, and rank-weighted
/// trembles at scales 1/2^j, j = 1..6, paired symmetrically and
/// asymmetrically, truncated to `size`.
pub fn negative_family(rg: &ReducedGame, size: usize) -> Vec<(Vec<Rational>, Vec<Rational>)> {
    fn bot_tremble(n: usize, t: &Rational) -> Vec<Rational> {
        let u = t / rat(n as i64, 1);
        let mut v = vec![u.clone(); n];
        v[n - 1] += Rational::one() - t;
        v
    }
    fn uniform_tremble(n: usize, t: &Rational) -> Vec<Rational> {
        let u = (Rational::one() - t) / rat(n as i64, 1);
        let mut v = vec![u.clone(); n];
        v[n - 1] += t.clone();
        v
    }
    fn directed(n: usize, target: usize, t: &Rational) -> Vec<Rational> {
        let half = t / rat(2, 1);
        let u = &half / rat(n as i64, 1);
        let mut v = vec![u.clone(); n];
        v[target] += &half;
        v[n - 1] += Rational::one() - t;
        v
    }
    fn weighted(n: usize, t: &Rational) -> Vec<Rational> {
        let total: i64 = (1..=n as i64).sum();
        let mut v: Vec<Rational> = (1..=n as i64).map(|i| t * rat(i, total)).collect();
        v[n - 1] += Rational::one() - t;
        v
    }

    let n2 = rg.gprime.action_count(1);
    let n3 = rg.gprime.action_count(2);
    let last2 = n2.saturating_sub(2);
    let last3 = n3.saturating_sub(2);
    let mut family = Vec::with_capacity(size);
    let mut j = 1u32;
    'outer: loop {
        let t = rat(1, 1i64 << j.min(20));
        let half = &t / rat(2, 1);
        let pairs: [(Vec<Rational>, Vec<Rational>); 9] = [
            (bot_tremble(n2, &t), bot_tremble(n3, &t)),
            (uniform_tremble(n2, &t), uniform_tremble(n3, &t)),
            (directed(n2, 0, &t), directed(n3, 0, &t)),
            (directed(n2, last2, &t), directed(n3, last3, &t)),
            (bot_tremble(n2, &t), bot_tremble(n3, &half)),
            (bot_tremble(n2, &half), bot_tremble(n3, &t)),
            (bot_tremble(n2, &t), uniform_tremble(n3, &t)),
            (uniform_tremble(n2, &t), bot_tremble(n3, &t)),
            (weighted(n2, &t), weighted(n3, &t)),
        ];
        for pair in pairs {
            family.push(pair);
            if family.len() == size {
                break 'outer;
            }
        }
        j += 1;
        if j > 6 && family.len() >= size {
            break;
        }
    }
    family
}

#[derive(Debug, Clone)]
pub struct TheoremConfig {
    /// Grid denominator handed to the minmax classifier.
    pub grid_denominator: u32,
    /// Number of fully mixed profiles tested on the negative branch.
    pub family_size: usize,
    /// Cap for the k0 search on the positive branch.
    pub k0_bound: u64,
}

impl Default for TheoremConfig {
    fn default() -> Self {
        TheoremConfig { grid_denominator: 4, family_size: 50, k0_bound: DEFAULT_K0_BOUND }
    }
}

#[derive(Debug, Clone)]
pub struct TheoremReport {
    pub instance: PromiseInstance,
    pub verdict_minmax: PromiseVerdict,
    pub perfection_positive: Option<PerfectionCertificate>,
    pub perfection_negative: Option<Vec<ConditionalReplyReport>>,
    pub consistent: bool,
}

/// Run the whole pipeline on one instance: classify the minmax promise,
/// then check the matching perfection direction in G′.
///
/// * YES (minmax upper bound < r): certify the σ(t) family built from
///   τ₂₃ = the minmax upper witness; consistency requires a valid
///   certificate.
/// * NO (lower bound > r): run the conditional best-reply test on the
///   negative family; consistency requires ⊥ beaten in every member.
/// * AMBIGUOUS: both directions are skipped — the report is marked
///   ambiguous and stays consistent (no claim is made either way).
pub fn verify_theorem(instance: &PromiseInstance, config: &TheoremConfig) -> Result<TheoremReport> {
    let rg = build_gprime(&instance.game, &instance.r)?;
    let mu = mu_of(&rg)?;
    let bounds = minmax_bounds(&instance.game, config.grid_denominator)?;
    let verdict = if bounds.upper < instance.r {
        PromiseVerdict::Yes
    } else if bounds.lower > instance.r {
        PromiseVerdict::No
    } else {
        PromiseVerdict::Ambiguous
    };

    let mut report = TheoremReport {
        instance: instance.clone(),
        verdict_minmax: verdict,
        perfection_positive: None,
        perfection_negative: None,
        consistent: true,
    };

    match verdict {
        PromiseVerdict::Yes => {
            let mut tau2 = bounds.upper_witness.tau2.clone();
            tau2.push(Rational::zero());
            let mut tau3 = bounds.upper_witness.tau3.clone();
            tau3.push(Rational::zero());
            let bot1 = rg.bot_index[0];
            let tau1: Vec<Rational> = (0..rg.gprime.action_count(0))
                .map(|a| if a == bot1 { Rational::one() } else { Rational::zero() })
                .collect();
            let tau = MixedProfile::new(vec![tau1, tau2, tau3])?;
            let sigma = build_witness_sequence(&rg.gprime, &mu, &tau)?;
            match certify_witness(&rg.gprime, &mu, &sigma, config.k0_bound)? {
                CertifyOutcome::Certified(cert) => {
                    crate::refinement::verify_certificate(&rg.gprime, &cert)?;
                    report.perfection_positive = Some(cert);
                }
                CertifyOutcome::Failed(_) => report.consistent = false,
            }
        }
        PromiseVerdict::No => {
            let mut results = Vec::new();
            let mut all_beaten = true;
            for (sigma2, sigma3) in negative_family(&rg, config.family_size) {
                let res = conditional_best_reply_test(&rg.gprime, &instance.r, &sigma2, &sigma3)?;
                all_beaten &= res.bot_beaten;
                results.push(res);
            }
            report.consistent = all_beaten;
            report.perfection_negative = Some(results);
        }
        PromiseVerdict::Ambiguous => {}
    }
    Ok(report)
}
