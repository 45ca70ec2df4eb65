//! Backward-induction values, grid-based Nash certification and the
//! deviation payoff curve for the Biggest Player rule.

use std::sync::Arc;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cake::{Fraction, PlayerId};
use crate::engine::{self, deviate, equilibrium_profile, Event, GameConfig, Rule, Side, StrategyProfile};
use crate::error::{Error, Result};
use crate::open_game::{ChoiceView, Chooser};

/// Candidate cut fractions `{0, 1/L, …, 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Grid {
    resolution: u64,
}

impl Default for Grid {
    /// `L = 2520 = lcm(2..=9)`.
    fn default() -> Self {
        Self { resolution: 2520 }
    }
}

impl Grid {
    pub fn new(resolution: u64) -> Result<Self> {
        if resolution < 2 {
            return Err(Error::Argument(format!("grid resolution must be >= 2, got {resolution}")));
        }
        Ok(Self { resolution })
    }

    pub fn resolution(&self) -> u64 {
        self.resolution
    }

    pub fn points(&self) -> impl Iterator<Item = Fraction> + '_ {
        let l = self.resolution as i64;
        (0..=l).map(move |i| Fraction::new(i, l))
    }

    pub fn len(&self) -> usize {
        self.resolution as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Whether every `i/k` for `k <= n` lies on the grid.
    pub fn resolves_up_to(&self, n: usize) -> bool {
        self.resolution.is_multiple_of(lcm_upto(n))
    }
}

/// `lcm(1, 2, …, n)`.
pub fn lcm_upto(n: usize) -> u64 {
    (1..=n as u64).fold(1, |acc, k| acc.lcm(&k))
}

/// Who gets what once the chooser has picked, with the chooser assuming every
/// later round is played for value `continuation` per unit of cake held.
struct RoundValues {
    side: Side,
    cutter: Fraction,
}

/// Best response of a Biggest Player chooser facing `(a, b)` with `k` players
/// left (cutter and chooser included). Holding the strictly larger piece
/// makes the chooser the next cutter, worth `continuation` per unit; ties
/// between equal values go to exiting, then to the first piece.
fn bp_round(a: &Fraction, b: &Fraction, k: usize, continuation: &Fraction) -> RoundValues {
    let last = k == 2;
    let worth = |mine: &Fraction, theirs: &Fraction| -> (Fraction, bool) {
        if !last && mine > theirs {
            (mine * continuation, false)
        } else {
            (mine.clone(), true)
        }
    };
    let (first, first_exits) = worth(a, b);
    let (second, second_exits) = worth(b, a);
    let side = if second > first || (second == first && second_exits && !first_exits) {
        Side::Second
    } else {
        Side::First
    };
    let (mine, theirs) = side.pick((a, b));
    // equal pieces leave the cutter in charge
    let cutter = if !last && theirs >= mine { theirs * continuation } else { theirs.clone() };
    RoundValues { side, cutter }
}

/// Value per unit of cake of being the Biggest Player with `k` players left,
/// for `k = 1..=k_max`, when every cutter picks the grid cut maximizing their
/// own value. By homogeneity the value of a piece of size `s` is `s` times
/// the tabulated entry.
#[derive(Debug, Clone)]
pub struct ValueTable {
    grid: Grid,
    // index k - 1 -> (value, best cut)
    entries: Vec<(Fraction, Option<Fraction>)>,
}

impl ValueTable {
    pub fn build(k_max: usize, grid: Grid) -> Result<Self> {
        if k_max < 1 {
            return Err(Error::Argument("backward induction needs k >= 1".into()));
        }
        let alphas: Vec<Fraction> = grid.points().collect();
        let mut entries: Vec<(Fraction, Option<Fraction>)> = vec![(Fraction::one(), None)];
        for k in 2..=k_max {
            let continuation = entries[k - 2].0.clone();
            let mut best: Option<(Fraction, &Fraction)> = None;
            for alpha in &alphas {
                let rest = Fraction::one() - alpha;
                let value = bp_round(alpha, &rest, k, &continuation).cutter;
                if best.as_ref().is_none_or(|(v, _)| value > *v) {
                    best = Some((value, alpha));
                }
            }
            let (value, alpha) = best.expect("grid is never empty");
            entries.push((value, Some(alpha.clone())));
        }
        Ok(Self { grid, entries })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn k_max(&self) -> usize {
        self.entries.len()
    }

    /// Unit value with `k` players left.
    pub fn value(&self, k: usize) -> Option<&Fraction> {
        k.checked_sub(1).and_then(|i| self.entries.get(i)).map(|e| &e.0)
    }

    pub fn best_cut(&self, k: usize) -> Option<&Fraction> {
        k.checked_sub(1).and_then(|i| self.entries.get(i)).and_then(|e| e.1.as_ref())
    }

    /// A chooser that best-responds using the tabulated continuation values.
    pub fn chooser(self: &Arc<Self>) -> Chooser {
        let table = Arc::clone(self);
        Arc::new(move |view: &ChoiceView| {
            let k = view.players_left;
            let continuation = table
                .value(k - 1)
                .unwrap_or_else(|| panic!("value table built up to k = {}, asked for {}", table.k_max(), k - 1));
            bp_round(&view.sizes.0, &view.sizes.1, k, continuation).side
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BackwardValue {
    pub value: Fraction,
    /// First grid cut attaining the value; `None` when `k = 1`.
    pub best_cut: Option<Fraction>,
}

/// Value of holding a piece of size `s` as Biggest Player with `k` players
/// left, everyone playing grid-optimal cuts and best-responding choices.
pub fn backward_induction(s: &Fraction, k: usize, grid: Grid) -> Result<BackwardValue> {
    if s.is_negative() {
        return Err(Error::Domain(format!("piece size {s} is negative")));
    }
    let table = ValueTable::build(k, grid)?;
    Ok(BackwardValue {
        value: s * table.value(k).expect("built up to k"),
        best_cut: table.best_cut(k).cloned(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    NoProfitableDeviation,
    DeviationFound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlayerReport {
    pub player: PlayerId,
    /// Cut the player makes at their first cutting opportunity, if they get one.
    pub baseline_cut: Option<Fraction>,
    pub baseline_payoff: Fraction,
    /// Grid cuts producing a different pair of piece sizes.
    pub deviations_checked: usize,
    /// Most profitable deviation and its payoff change.
    pub best_deviation: Option<Fraction>,
    pub best_delta: Option<Fraction>,
    /// Every checked deviation lost the player something.
    pub strictly_loss_inducing: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NashCertificate {
    pub rule: Rule,
    pub n: usize,
    pub grid: Grid,
    pub players: Vec<PlayerReport>,
    pub verdict: Verdict,
}

impl NashCertificate {
    /// Player and delta of the largest deviation gain found.
    pub fn best_deviation(&self) -> Option<(&PlayerReport, &Fraction)> {
        self.players
            .iter()
            .filter_map(|r| r.best_delta.as_ref().map(|d| (r, d)))
            .max_by(|a, b| a.1.cmp(b.1))
    }
}

/// Checks every on-grid unilateral change of each player's first cut, with
/// all choosers best-responding. Cuts that only swap the two piece sizes
/// (`α ↦ 1 − α`) leave every payoff unchanged and are not counted as deviations.
pub fn certify_nash(config: &GameConfig, profile: &StrategyProfile, grid: Grid) -> Result<NashCertificate> {
    if !grid.resolves_up_to(config.n) {
        return Err(Error::Precondition(format!(
            "grid resolution {} is not divisible by lcm(2..={}) = {}",
            grid.resolution(),
            config.n,
            lcm_upto(config.n)
        )));
    }
    let responsive = profile.with_best_responses();
    let (_, trace) = engine::play(config, &responsive)?;
    let baseline = trace.partition.shares();

    let mut players = Vec::with_capacity(config.n);
    for (i, baseline_payoff) in baseline.into_iter().enumerate() {
        let player = PlayerId(i + 1);
        let baseline_cut = trace.events.iter().find_map(|e| match e {
            Event::Cut { player: p, alpha, .. } if *p == player => Some(alpha.clone()),
            _ => None,
        });
        let Some(alpha0) = baseline_cut.clone() else {
            players.push(PlayerReport {
                player,
                baseline_cut,
                baseline_payoff,
                deviations_checked: 0,
                best_deviation: None,
                best_delta: None,
                strictly_loss_inducing: true,
            });
            continue;
        };
        let mirror = Fraction::one() - &alpha0;
        let candidates: Vec<Fraction> = grid.points().filter(|a| *a != alpha0 && *a != mirror).collect();
        let deltas: Vec<(Fraction, Fraction)> = candidates
            .par_iter()
            .map(|alpha| {
                let deviated = deviate(&responsive, player, alpha.clone())?;
                let payoff = engine::payoffs(config, &deviated)?.swap_remove(i);
                Ok((alpha.clone(), payoff - &baseline_payoff))
            })
            .collect::<Result<_>>()?;
        let best = deltas.iter().max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)));
        players.push(PlayerReport {
            player,
            baseline_cut,
            baseline_payoff,
            deviations_checked: deltas.len(),
            best_deviation: best.map(|b| b.0.clone()),
            best_delta: best.map(|b| b.1.clone()),
            strictly_loss_inducing: deltas.iter().all(|(_, d)| d.is_negative()),
        });
    }
    let verdict = if players.iter().all(|r| r.best_delta.as_ref().is_none_or(|d| !d.is_positive())) {
        Verdict::NoProfitableDeviation
    } else {
        Verdict::DeviationFound
    };
    Ok(NashCertificate { rule: config.rule, n: config.n, grid, players, verdict })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub epsilon: Fraction,
    /// First cutter's final share divided by the fair share `1/n`.
    pub payoff_norm: Fraction,
}

/// Normalized payoff of the first cutter in an `n`-player Biggest Player game
/// on a unit cake when they cut `(1/n + ε, (n−1)/n − ε)` and everyone else
/// plays the equilibrium.
pub fn payoff_at(n: usize, epsilon: &Fraction) -> Result<Fraction> {
    if n < 2 {
        return Err(Error::Argument("payoff curve needs n >= 2".into()));
    }
    let fair = Fraction::new(1, n as i64);
    let alpha = &fair + epsilon;
    if !alpha.is_unit_interval() {
        return Err(Error::Domain(format!(
            "epsilon {epsilon} makes a piece negative (allowed [-1/{n}, {}/{n}])",
            n - 1
        )));
    }
    let config = GameConfig::unit(n, Rule::BiggestPlayer)?;
    let profile = deviate(&equilibrium_profile(&config), PlayerId(1), alpha)?;
    let share = engine::payoffs(&config, &profile)?.swap_remove(0);
    Ok(share / fair)
}

/// [`payoff_at`] sampled at every grid cut with `|ε| < 1/n`. Beyond that
/// window the mirrored fair cut `α = (n−1)/n` reaches the peak again.
pub fn payoff_curve(n: usize, grid: Grid) -> Result<Vec<CurvePoint>> {
    if n < 2 {
        return Err(Error::Argument("payoff curve needs n >= 2".into()));
    }
    if !grid.resolution().is_multiple_of(n as u64) {
        return Err(Error::Precondition(format!(
            "grid resolution {} does not contain the fair cut 1/{n}",
            grid.resolution()
        )));
    }
    let fair = Fraction::new(1, n as i64);
    let epsilons: Vec<Fraction> = grid
        .points()
        .map(|alpha| alpha - &fair)
        .filter(|eps| eps.abs() < fair)
        .collect();
    epsilons
        .into_par_iter()
        .map(|epsilon| {
            let payoff_norm = payoff_at(n, &epsilon)?;
            Ok(CurvePoint { epsilon, payoff_norm })
        })
        .collect()
}
