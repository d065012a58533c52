//! Strategic-form games with exact rational payoffs, mixed profiles,
//! expected payoffs and Nash verification.
//!
//! A [`Game`] is an n-player normal-form game: per-player action label lists
//! and a dense payoff tensor, row-major by player order, each cell holding
//! one payoff per player. All values are immutable after construction and
//! every operation here is a pure function, so games can be shared freely
//! across threads.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

/// n-player strategic-form game. Payoffs are stored flat:
/// `payoffs[cell * players + player]` where `cell` is the row-major index of
/// the pure action combination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Game {
    actions: Vec<Vec<String>>,
    payoffs: Vec<Rational>,
}

impl Game {
    /// Build a game from per-player action labels and a flat payoff vector
    /// (cell-major, then player). Rejects empty action sets and size
    /// mismatches.
    pub fn new(actions: Vec<Vec<String>>, payoffs: Vec<Rational>) -> Result<Self> {
        if actions.len() < 2 {
            return Err(Error::ShapeMismatch(format!(
                "a game needs at least 2 players, got {}",
                actions.len()
            )));
        }
        if actions.iter().any(|a| a.is_empty()) {
            return Err(Error::ShapeMismatch("every player needs at least one action".to_string()));
        }
        let cells: usize = actions.iter().map(|a| a.len()).product();
        let expected = cells * actions.len();
        if payoffs.len() != expected {
            return Err(Error::ShapeMismatch(format!(
                "payoff vector has {} entries, expected {} ({} cells x {} players)",
                payoffs.len(),
                expected,
                cells,
                actions.len()
            )));
        }
        Ok(Game { actions, payoffs })
    }

    /// Build a game with default labels (`a0`, `a1`, ...) from a payoff
    /// function over (pure profile, player).
    pub fn from_fn<F>(counts: &[usize], f: F) -> Self
    where
        F: Fn(&[usize], usize) -> Rational,
    {
        let actions: Vec<Vec<String>> =
            counts.iter().map(|&n| (0..n).map(|j| format!("a{j}")).collect()).collect();
        let players = counts.len();
        let mut payoffs = Vec::new();
        for cell in PureProfileIter::new(counts.to_vec()) {
            for p in 0..players {
                payoffs.push(f(&cell, p));
            }
        }
        Game { actions, payoffs }
    }

    pub fn player_count(&self) -> usize {
        self.actions.len()
    }

    pub fn action_count(&self, player: usize) -> usize {
        self.actions[player].len()
    }

    pub fn action_counts(&self) -> Vec<usize> {
        self.actions.iter().map(|a| a.len()).collect()
    }

    pub fn action_labels(&self, player: usize) -> &[String] {
        &self.actions[player]
    }

    pub fn all_action_labels(&self) -> &[Vec<String>] {
        &self.actions
    }

    /// Payoff of `player` at the pure profile `cell`.
    pub fn payoff(&self, cell: &[usize], player: usize) -> &Rational {
        &self.payoffs[self.cell_index(cell) * self.player_count() + player]
    }

    pub fn cell_count(&self) -> usize {
        self.actions.iter().map(|a| a.len()).product()
    }

    /// Iterate over all pure profiles in row-major order.
    pub fn cells(&self) -> PureProfileIter {
        PureProfileIter::new(self.action_counts())
    }

    fn cell_index(&self, cell: &[usize]) -> usize {
        debug_assert_eq!(cell.len(), self.player_count());
        let mut idx = 0;
        for (p, &a) in cell.iter().enumerate() {
            debug_assert!(a < self.action_count(p));
            idx = idx * self.action_count(p) + a;
        }
        idx
    }

    fn check_player(&self, player: usize) -> Result<()> {
        if player >= self.player_count() {
            return Err(Error::IndexOutOfRange(format!(
                "player {player} of {}",
                self.player_count()
            )));
        }
        Ok(())
    }

    fn check_profile_shape(&self, profile: &MixedProfile) -> Result<()> {
        if profile.rows.len() != self.player_count()
            || profile.rows.iter().zip(&self.actions).any(|(row, acts)| row.len() != acts.len())
        {
            return Err(Error::ShapeMismatch(format!(
                "profile shape {:?} does not match game shape {:?}",
                profile.rows.iter().map(Vec::len).collect::<Vec<_>>(),
                self.action_counts()
            )));
        }
        Ok(())
    }
}

/// Odometer over pure action profiles, row-major (last player fastest).
pub struct PureProfileIter {
    counts: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl PureProfileIter {
    pub fn new(counts: Vec<usize>) -> Self {
        let next = if counts.iter().all(|&n| n > 0) { Some(vec![0; counts.len()]) } else { None };
        PureProfileIter { counts, next }
    }
}

impl Iterator for PureProfileIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.clone()?;
        let mut bumped = false;
        let mut succ = current.clone();
        for p in (0..self.counts.len()).rev() {
            if succ[p] + 1 < self.counts[p] {
                succ[p] += 1;
                bumped = true;
                break;
            }
            succ[p] = 0;
        }
        self.next = if bumped { Some(succ) } else { None };
        Some(current)
    }
}

/// One exact probability vector per player. Vectors sum to exactly 1 with
/// all entries >= 0; this is validated at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedProfile {
    rows: Vec<Vec<Rational>>,
}

impl MixedProfile {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        for (p, row) in rows.iter().enumerate() {
            if row.is_empty() {
                return Err(Error::ShapeMismatch(format!("player {p} has an empty vector")));
            }
            if row.iter().any(|x| x < &Rational::zero()) {
                return Err(Error::ShapeMismatch(format!("player {p} has a negative probability")));
            }
            let sum: Rational = row.iter().sum();
            if !sum.is_one() {
                return Err(Error::ShapeMismatch(format!(
                    "player {p} probabilities sum to {}, not 1",
                    format_rational(&sum)
                )));
            }
        }
        Ok(MixedProfile { rows })
    }

    /// Uniform mixture for every player of `game`.
    pub fn uniform(game: &Game) -> Self {
        let rows = game
            .action_counts()
            .iter()
            .map(|&n| vec![Rational::new(1.into(), (n as i64).into()); n])
            .collect();
        MixedProfile { rows }
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn row(&self, player: usize) -> &[Rational] {
        &self.rows[player]
    }

    pub fn prob(&self, player: usize, action: usize) -> &Rational {
        &self.rows[player][action]
    }

    /// True when every action of every player has strictly positive
    /// probability.
    pub fn is_fully_mixed(&self) -> bool {
        self.rows.iter().all(|row| row.iter().all(|x| x > &Rational::zero()))
    }

    /// Support of one player's mixture: actions with positive probability.
    pub fn support(&self, player: usize) -> Vec<usize> {
        self.rows[player].iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(a, _)| a).collect()
    }

    /// Max-norm distance to another profile of the same shape.
    pub fn max_norm_distance(&self, other: &MixedProfile) -> Rational {
        let mut best = Rational::zero();
        for (a, b) in self.rows.iter().zip(&other.rows) {
            for (x, y) in a.iter().zip(b) {
                let d = if x >= y { x - y } else { y - x };
                if d > best {
                    best = d;
                }
            }
        }
        best
    }
}

/// One pure action per player.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PureProfile {
    actions: Vec<usize>,
}

impl PureProfile {
    pub fn new(actions: Vec<usize>) -> Self {
        PureProfile { actions }
    }

    pub fn actions(&self) -> &[usize] {
        &self.actions
    }

    pub fn action(&self, player: usize) -> usize {
        self.actions[player]
    }

    pub fn validate(&self, game: &Game) -> Result<()> {
        if self.actions.len() != game.player_count() {
            return Err(Error::ShapeMismatch(format!(
                "pure profile has {} entries for a {}-player game",
                self.actions.len(),
                game.player_count()
            )));
        }
        for (p, &a) in self.actions.iter().enumerate() {
            if a >= game.action_count(p) {
                return Err(Error::IndexOutOfRange(format!(
                    "action {a} for player {p} (has {} actions)",
                    game.action_count(p)
                )));
            }
        }
        Ok(())
    }

    /// Lossless conversion to a profile of point masses.
    pub fn to_mixed(&self, game: &Game) -> Result<MixedProfile> {
        self.validate(game)?;
        let rows = self
            .actions
            .iter()
            .enumerate()
            .map(|(p, &a)| {
                let mut row = vec![Rational::zero(); game.action_count(p)];
                row[a] = Rational::one();
                row
            })
            .collect();
        Ok(MixedProfile { rows })
    }
}

/// Exact expected payoff of `player` under a mixed profile: the multilinear
/// sum over pure profiles of the product of per-player probabilities times
/// the player's payoff.
pub fn expected_payoff(game: &Game, profile: &MixedProfile, player: usize) -> Result<Rational> {
    game.check_player(player)?;
    game.check_profile_shape(profile)?;
    let mut total = Rational::zero();
    'cells: for cell in game.cells() {
        let mut weight = Rational::one();
        for (p, &a) in cell.iter().enumerate() {
            let pr = profile.prob(p, a);
            if pr.is_zero() {
                continue 'cells;
            }
            weight *= pr;
        }
        total += weight * game.payoff(&cell, player);
    }
    Ok(total)
}

/// Expected payoff when `player` deviates to the pure action `action` while
/// everyone else plays `profile`.
pub fn deviation_payoff(
    game: &Game,
    profile: &MixedProfile,
    player: usize,
    action: usize,
) -> Result<Rational> {
    game.check_player(player)?;
    game.check_profile_shape(profile)?;
    if action >= game.action_count(player) {
        return Err(Error::IndexOutOfRange(format!(
            "action {action} for player {player} (has {} actions)",
            game.action_count(player)
        )));
    }
    let mut total = Rational::zero();
    'cells: for cell in game.cells() {
        if cell[player] != action {
            continue;
        }
        let mut weight = Rational::one();
        for (p, &a) in cell.iter().enumerate() {
            if p == player {
                continue;
            }
            let pr = profile.prob(p, a);
            if pr.is_zero() {
                continue 'cells;
            }
            weight *= pr;
        }
        total += weight * game.payoff(&cell, player);
    }
    Ok(total)
}

/// Best pure-deviation value and the exact argmax set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BestReply {
    pub value: Rational,
    pub argmax: Vec<usize>,
}

/// Maximum over `player`'s pure actions of the deviation payoff against
/// `profile`, together with every action attaining it.
pub fn best_reply_value(game: &Game, profile: &MixedProfile, player: usize) -> Result<BestReply> {
    game.check_player(player)?;
    game.check_profile_shape(profile)?;
    let mut value: Option<Rational> = None;
    let mut argmax = Vec::new();
    for a in 0..game.action_count(player) {
        let v = deviation_payoff(game, profile, player, a)?;
        match &value {
            Some(best) if v < *best => {}
            Some(best) if v == *best => argmax.push(a),
            _ => {
                value = Some(v);
                argmax = vec![a];
            }
        }
    }
    Ok(BestReply { value: value.expect("players have at least one action"), argmax })
}

/// A profitable unilateral deviation: the witness for a "no" Nash verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deviation {
    pub player: usize,
    pub action: usize,
    pub gain: Rational,
}

/// Result of exact Nash verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NashVerdict {
    Yes,
    /// Not an equilibrium; carries a maximally profitable deviation.
    No(Deviation),
}

impl NashVerdict {
    pub fn is_nash(&self) -> bool {
        matches!(self, NashVerdict::Yes)
    }
}

/// Exact Nash check: every action in the support of each player's mixture
/// must attain that player's best-reply value. No tolerances.
pub fn check_nash(game: &Game, profile: &MixedProfile) -> Result<NashVerdict> {
    game.check_profile_shape(profile)?;
    let mut worst: Option<Deviation> = None;
    for player in 0..game.player_count() {
        let br = best_reply_value(game, profile, player)?;
        let own = expected_payoff(game, profile, player)?;
        if own < br.value {
            let gain = &br.value - &own;
            let action = br.argmax[0];
            if worst.as_ref().is_none_or(|w| gain > w.gain) {
                worst = Some(Deviation { player, action, gain });
            }
        }
    }
    Ok(match worst {
        None => NashVerdict::Yes,
        Some(d) => NashVerdict::No(d),
    })
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::rational::int;

    /// Matching pennies with payoffs +-1.
    pub fn matching_pennies() -> Game {
        Game::from_fn(&[2, 2], |cell, player| {
            let matched = cell[0] == cell[1];
            let sign = if matched { 1 } else { -1 };
            int(if player == 0 { sign } else { -sign })
        })
    }

    pub fn uniform2() -> MixedProfile {
        MixedProfile::new(vec![
            vec![crate::rational::rat(1, 2); 2],
            vec![crate::rational::rat(1, 2); 2],
        ])
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::rational::{int, rat};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn expected_payoff_uniform_matching_pennies_is_zero() {
        let g = matching_pennies();
        let u = uniform2();
        assert_eq!(expected_payoff(&g, &u, 0).unwrap(), int(0));
        assert_eq!(expected_payoff(&g, &u, 1).unwrap(), int(0));
    }

    #[test]
    fn expected_payoff_trivial_game() {
        let g = Game::from_fn(&[1, 1, 1], |_, p| int([5, 1, 2][p]));
        let only = PureProfile::new(vec![0, 0, 0]).to_mixed(&g).unwrap();
        assert_eq!(expected_payoff(&g, &only, 0).unwrap(), int(5));
        assert_eq!(expected_payoff(&g, &only, 1).unwrap(), int(1));
        assert_eq!(expected_payoff(&g, &only, 2).unwrap(), int(2));
    }

    #[test]
    fn best_reply_matching_pennies_vs_uniform_ties() {
        let g = matching_pennies();
        let u = uniform2();
        let br = best_reply_value(&g, &u, 0).unwrap();
        assert_eq!(br.value, int(0));
        assert_eq!(br.argmax, vec![0, 1]);
    }

    #[test]
    fn best_reply_single_action_player() {
        let g = Game::from_fn(&[1, 2], |cell, p| int(if p == 0 { 3 + cell[1] as i64 } else { 0 }));
        let profile = MixedProfile::new(vec![vec![int(1)], vec![rat(1, 2), rat(1, 2)]]).unwrap();
        let br = best_reply_value(&g, &profile, 0).unwrap();
        assert_eq!(br.value, rat(7, 2));
        assert_eq!(br.argmax, vec![0]);
    }

    #[test]
    fn check_nash_matching_pennies() {
        let g = matching_pennies();
        assert!(check_nash(&g, &uniform2()).unwrap().is_nash());

        let pure = PureProfile::new(vec![0, 0]).to_mixed(&g).unwrap();
        match check_nash(&g, &pure).unwrap() {
            NashVerdict::No(d) => {
                // Player 2 flips to mismatch and gains 2.
                assert_eq!(d.player, 1);
                assert_eq!(d.action, 1);
                assert_eq!(d.gain, int(2));
            }
            NashVerdict::Yes => panic!("pure matching pennies profile is not Nash"),
        }
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let g = matching_pennies();
        let bad = MixedProfile::new(vec![vec![int(1)], vec![int(1), int(0)]]).unwrap();
        assert!(expected_payoff(&g, &bad, 0).is_err());
        assert!(check_nash(&g, &bad).is_err());
    }

    #[test]
    fn profile_validation() {
        assert!(MixedProfile::new(vec![vec![rat(1, 2), rat(1, 3)]]).is_err());
        assert!(MixedProfile::new(vec![vec![rat(3, 2), rat(-1, 2)]]).is_err());
        assert!(MixedProfile::new(vec![vec![rat(1, 2), rat(1, 2)]]).is_ok());
    }

    fn random_game(rng: &mut ChaCha8Rng, counts: &[usize], lo: i64, hi: i64) -> Game {
        let cells: usize = counts.iter().product();
        let payoffs = (0..cells * counts.len()).map(|_| int(rng.gen_range(lo..=hi))).collect();
        let actions = counts.iter().map(|&n| (0..n).map(|j| format!("a{j}")).collect()).collect();
        Game::new(actions, payoffs).unwrap()
    }

    /// Direct pure-deviation enumeration, the independent oracle for
    /// check_nash on pure profiles.
    fn brute_force_pure_nash(game: &Game, profile: &[usize]) -> bool {
        for p in 0..game.player_count() {
            let here = game.payoff(profile, p);
            for a in 0..game.action_count(p) {
                let mut dev = profile.to_vec();
                dev[p] = a;
                if game.payoff(&dev, p) > here {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn check_nash_agrees_with_pure_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let shapes: &[&[usize]] = &[&[2, 2], &[3, 2], &[3, 3], &[2, 2, 2], &[3, 3, 3], &[3, 2, 3]];
        for &shape in shapes {
            for _ in 0..10 {
                let g = random_game(&mut rng, shape, -2, 2);
                for cell in g.cells() {
                    let mixed = PureProfile::new(cell.clone()).to_mixed(&g).unwrap();
                    let ours = check_nash(&g, &mixed).unwrap().is_nash();
                    assert_eq!(ours, brute_force_pure_nash(&g, &cell), "{shape:?} {cell:?}");
                }
            }
        }
    }

    fn small_rationals() -> impl Strategy<Value = Rational> {
        (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
    }

    fn mixture(n: usize) -> impl Strategy<Value = Vec<Rational>> {
        proptest::collection::vec(0u32..=4, n).prop_map(move |w| {
            let total: u32 = w.iter().sum();
            if total == 0 {
                let mut row = vec![Rational::zero(); n];
                row[0] = Rational::one();
                row
            } else {
                w.iter().map(|&x| Rational::new((x as i64).into(), (total as i64).into())).collect()
            }
        })
    }

    proptest! {
        /// Multilinearity in one player's slot: mixing profiles mixes payoffs.
        #[test]
        fn expected_payoff_is_multilinear(
            payoffs in proptest::collection::vec(small_rationals(), 8),
            row_a in mixture(2),
            row_b in mixture(2),
            other in mixture(2),
            lambda in (0i64..=4).prop_map(|n| rat(n, 4)),
        ) {
            let actions = vec![vec!["a0".into(), "a1".into()], vec!["a0".into(), "a1".into()]];
            let g = Game::new(actions, payoffs).unwrap();
            let blend: Vec<Rational> = row_a
                .iter()
                .zip(&row_b)
                .map(|(x, y)| &lambda * x + (Rational::one() - &lambda) * y)
                .collect();

            let profile_a = MixedProfile::new(vec![row_a, other.clone()]).unwrap();
            let profile_b = MixedProfile::new(vec![row_b, other.clone()]).unwrap();
            let profile_m = MixedProfile::new(vec![blend, other]).unwrap();

            for player in 0..2 {
                let ea = expected_payoff(&g, &profile_a, player).unwrap();
                let eb = expected_payoff(&g, &profile_b, player).unwrap();
                let em = expected_payoff(&g, &profile_m, player).unwrap();
                prop_assert_eq!(em, &lambda * ea + (Rational::one() - &lambda) * eb);
            }
        }

        /// Point-mass profiles reproduce every tensor cell exactly.
        #[test]
        fn point_masses_reproduce_cells(
            payoffs in proptest::collection::vec(small_rationals(), 24),
        ) {
            let g = Game::new(
                vec![
                    vec!["a0".into(), "a1".into()],
                    vec!["a0".into(), "a1".into()],
                    vec!["a0".into(), "a1".into()],
                ],
                payoffs,
            )
            .unwrap();
            for cell in g.cells() {
                let mixed = PureProfile::new(cell.clone()).to_mixed(&g).unwrap();
                for p in 0..3 {
                    prop_assert_eq!(&expected_payoff(&g, &mixed, p).unwrap(), g.payoff(&cell, p));
                }
            }
        }
    }
}
