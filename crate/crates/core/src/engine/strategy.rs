use serde::{Deserialize, Serialize};

use super::{GameConfig, Rule};
use crate::cake::{Fraction, PlayerId};
use crate::error::{Error, Result};

/// How a cutter picks the cut fraction `α` of the piece they hold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CutPolicy {
    /// `α = 1/2`.
    Halve,
    /// `α = 1/k` with `k` players still to be served, the cutter included.
    Proportional,
    /// A fixed fraction in `[0, 1]`.
    Fixed(Fraction),
}

impl CutPolicy {
    pub fn fixed(alpha: Fraction) -> Result<Self> {
        check_alpha(&alpha)?;
        Ok(CutPolicy::Fixed(alpha))
    }

    pub fn alpha(&self, players_left: usize) -> Fraction {
        match self {
            CutPolicy::Halve => Fraction::new(1, 2),
            CutPolicy::Proportional => Fraction::new(1, players_left.max(1) as i64),
            CutPolicy::Fixed(alpha) => alpha.clone(),
        }
    }
}

/// How a chooser picks between the two offered pieces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChoicePolicy {
    /// Strictly larger piece, first piece on ties.
    Bigger,
    /// Always the lower-coordinate piece.
    First,
    /// Whichever piece maximizes the chooser's final share given the rest of
    /// the profile; ties go to the option in which the chooser exits now,
    /// then to the first piece.
    BestResponse,
}

pub(crate) fn check_alpha(alpha: &Fraction) -> Result<()> {
    if alpha.is_unit_interval() {
        Ok(())
    } else {
        Err(Error::Strategy(format!("cut fraction {alpha} outside [0, 1]")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlayerStrategy {
    pub cut: CutPolicy,
    pub choice: ChoicePolicy,
    /// Replaces the policy at this player's first cutting opportunity only.
    pub first_cut: Option<Fraction>,
}

impl PlayerStrategy {
    pub fn new(cut: CutPolicy, choice: ChoicePolicy) -> Self {
        Self { cut, choice, first_cut: None }
    }

    pub fn alpha(&self, players_left: usize, has_cut: bool) -> Fraction {
        match (&self.first_cut, has_cut) {
            (Some(alpha), false) => alpha.clone(),
            _ => self.cut.alpha(players_left),
        }
    }
}

/// One strategy per player, indexed by `PlayerId(1)..`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyProfile {
    players: Vec<PlayerStrategy>,
}

impl StrategyProfile {
    pub fn new(players: Vec<PlayerStrategy>) -> Self {
        Self { players }
    }

    pub fn uniform(n: usize, strategy: PlayerStrategy) -> Self {
        Self { players: vec![strategy; n] }
    }

    pub fn len(&self) -> usize {
        self.players.len()
    }

    pub fn is_empty(&self) -> bool {
        self.players.is_empty()
    }

    pub fn get(&self, player: PlayerId) -> Option<&PlayerStrategy> {
        player.0.checked_sub(1).and_then(|i| self.players.get(i))
    }

    pub fn get_mut(&mut self, player: PlayerId) -> Option<&mut PlayerStrategy> {
        player.0.checked_sub(1).and_then(move |i| self.players.get_mut(i))
    }

    pub fn players(&self) -> impl Iterator<Item = (PlayerId, &PlayerStrategy)> {
        self.players.iter().enumerate().map(|(i, s)| (PlayerId(i + 1), s))
    }

    /// Same profile with every chooser switched to [`ChoicePolicy::BestResponse`].
    pub fn with_best_responses(&self) -> Self {
        let mut out = self.clone();
        for s in &mut out.players {
            s.choice = ChoicePolicy::BestResponse;
        }
        out
    }
}

/// Halving cutters and bigger-piece choosers under vanilla composition;
/// proportional cutters and best-responding choosers under the Biggest
/// Player rule.
pub fn equilibrium_profile(config: &GameConfig) -> StrategyProfile {
    let strategy = match config.rule {
        Rule::Vanilla => PlayerStrategy::new(CutPolicy::Halve, ChoicePolicy::Bigger),
        Rule::BiggestPlayer => {
            PlayerStrategy::new(CutPolicy::Proportional, ChoicePolicy::BestResponse)
        }
    };
    StrategyProfile::uniform(config.n, strategy)
}

/// Copy of `profile` in which `player` cuts `alpha` at their first cutting
/// opportunity.
pub fn deviate(profile: &StrategyProfile, player: PlayerId, alpha: Fraction) -> Result<StrategyProfile> {
    check_alpha(&alpha)?;
    let mut out = profile.clone();
    let strategy = out
        .get_mut(player)
        .ok_or_else(|| Error::Strategy(format!("{player} is not in the profile")))?;
    strategy.first_cut = Some(alpha);
    Ok(out)
}
