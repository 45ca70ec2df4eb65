//! Play-out engines for vanilla composition and the Biggest Player rule.
//!
//! Both rules share the same round: the current holder cuts their piece at
//! `lo + α·size`, the next entrant picks one of the two pieces. They differ in
//! who carries on. Under [`Rule::Vanilla`] the chooser always carries the
//! chosen piece into the next round and the cutter leaves with the other one.
//! Under [`Rule::BiggestPlayer`] whoever ends up with the weakly larger piece
//! (the cutter on ties) cuts next and the other player leaves. After the last
//! entrant has chosen, the holder leaves with what they hold.

mod strategy;
mod trace;

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use strategy::{
    deviate, equilibrium_profile, ChoicePolicy, CutPolicy, PlayerStrategy, StrategyProfile,
};
pub use trace::{parse_json_lines, replay, Event, GameTrace, Side};

use crate::cake::{Cake, Fraction, Partition, Piece, PlayerId};
use crate::error::{Error, Result};
use crate::open_game::QueryCounter;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    Vanilla,
    BiggestPlayer,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Vanilla => "vanilla",
            Rule::BiggestPlayer => "bp",
        })
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vanilla" => Ok(Rule::Vanilla),
            "bp" | "biggest-player" => Ok(Rule::BiggestPlayer),
            other => Err(Error::Argument(format!("unknown rule {other:?} (vanilla|bp)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameConfig {
    pub n: usize,
    pub cake: Cake,
    pub rule: Rule,
}

impl GameConfig {
    pub fn new(n: usize, cake: Cake, rule: Rule) -> Result<Self> {
        if n == 0 {
            return Err(Error::Argument("a game needs at least one player".into()));
        }
        Ok(Self { n, cake, rule })
    }

    pub fn unit(n: usize, rule: Rule) -> Result<Self> {
        Self::new(n, Cake::unit(), rule)
    }
}

#[derive(Debug, Clone)]
struct State {
    holder: PlayerId,
    piece: Piece,
    /// Player who chooses next; `n + 1` once everybody has entered.
    next_entrant: usize,
    allocations: Vec<Option<Piece>>,
    has_cut: Vec<bool>,
}

impl State {
    fn initial(config: &GameConfig) -> Self {
        Self {
            holder: PlayerId(1),
            piece: config.cake.whole(),
            next_entrant: 2,
            allocations: vec![None; config.n],
            has_cut: vec![false; config.n],
        }
    }

    fn finished(&self, n: usize) -> bool {
        self.next_entrant > n
    }

    fn assign(&mut self, player: PlayerId, piece: Piece) {
        self.allocations[player.0 - 1] = Some(piece);
    }
}

type Continuation = Rc<Vec<Fraction>>;
type MemoKey = (PlayerId, usize, Vec<bool>);

struct Engine<'a> {
    config: &'a GameConfig,
    profile: &'a StrategyProfile,
    /// Shares per unit of held cake from a given decision point. Every
    /// policy is scale-free, so one table entry serves all piece sizes.
    memo: RefCell<HashMap<MemoKey, Continuation>>,
}

impl<'a> Engine<'a> {
    fn new(config: &'a GameConfig, profile: &'a StrategyProfile) -> Self {
        Self { config, profile, memo: RefCell::new(HashMap::new()) }
    }

    fn strategy(&self, player: PlayerId) -> &PlayerStrategy {
        self.profile.get(player).expect("profile validated against config")
    }

    fn offer(&self, state: &State) -> Result<(Fraction, Piece, Piece)> {
        let players_left = self.config.n - state.next_entrant + 2;
        let alpha = self
            .strategy(state.holder)
            .alpha(players_left, state.has_cut[state.holder.0 - 1]);
        let (lo, hi) = state.piece.split(&alpha)?;
        Ok((alpha, lo, hi))
    }

    /// Applies the composition rule after `side` is picked. Returns the next
    /// state, whether the chooser exits in this round, and the events.
    fn resolve(&self, state: &State, pieces: (Piece, Piece), side: Side) -> (State, bool, Vec<Event>) {
        let cutter = state.holder;
        let chooser = PlayerId(state.next_entrant);
        let last = state.next_entrant == self.config.n;
        let (chosen, left) = side.pick(pieces);

        let mut next = state.clone();
        next.has_cut[cutter.0 - 1] = true;
        next.next_entrant += 1;
        let mut events = Vec::with_capacity(2);

        let (holder, held, leaver, leftover) = match self.config.rule {
            Rule::Vanilla => (chooser, chosen, cutter, left),
            Rule::BiggestPlayer if left.size() >= chosen.size() => (cutter, left, chooser, chosen),
            Rule::BiggestPlayer => (chooser, chosen, cutter, left),
        };
        if self.config.rule == Rule::BiggestPlayer && !last {
            events.push(Event::Handoff { player: holder });
        }
        events.push(Event::Exit { player: leaver, piece: leftover.clone() });
        next.assign(leaver, leftover);
        next.holder = holder;
        next.piece = held;
        (next, last || leaver == chooser, events)
    }

    fn choose(&self, state: &State, lo: &Piece, hi: &Piece) -> Result<Side> {
        let chooser = PlayerId(state.next_entrant);
        Ok(match self.strategy(chooser).choice {
            ChoicePolicy::First => Side::First,
            ChoicePolicy::Bigger => {
                if hi.size() > lo.size() {
                    Side::Second
                } else {
                    Side::First
                }
            }
            ChoicePolicy::BestResponse => {
                let mut best: Option<(Fraction, bool, Side)> = None;
                for side in [Side::First, Side::Second] {
                    let (next, exits, _) = self.resolve(state, (lo.clone(), hi.clone()), side);
                    let payoff = match &next.allocations[chooser.0 - 1] {
                        Some(piece) => piece.size(),
                        None => next.piece.size() * &self.continuation(&next)?[chooser.0 - 1],
                    };
                    let better = match &best {
                        None => true,
                        Some((p, e, _)) => payoff > *p || (payoff == *p && exits && !e),
                    };
                    if better {
                        best = Some((payoff, exits, side));
                    }
                }
                best.expect("two options").2
            }
        })
    }

    /// Shares of every player per unit of `state.piece`, for the play-out
    /// from `state` on; players who already left get zero.
    fn continuation(&self, state: &State) -> Result<Continuation> {
        // only players with a one-off first cut behave differently once they have cut
        let flags = self
            .profile
            .players()
            .map(|(p, s)| s.first_cut.is_some() && state.has_cut[p.0 - 1])
            .collect();
        let key = (state.holder, state.next_entrant, flags);
        if let Some(hit) = self.memo.borrow().get(&key) {
            return Ok(Rc::clone(hit));
        }
        let n = self.config.n;
        let mut shares = vec![Fraction::zero(); n];
        if state.finished(n) {
            shares[state.holder.0 - 1] = Fraction::one();
        } else {
            let unit = State {
                holder: state.holder,
                piece: Cake::unit().whole(),
                next_entrant: state.next_entrant,
                allocations: vec![None; n],
                has_cut: state.has_cut.clone(),
            };
            let (_, lo, hi) = self.offer(&unit)?;
            let side = self.choose(&unit, &lo, &hi)?;
            let (next, _, _) = self.resolve(&unit, (lo, hi), side);
            let rest = self.continuation(&next)?;
            let held = next.piece.size();
            for (i, share) in shares.iter_mut().enumerate() {
                *share = match &next.allocations[i] {
                    Some(piece) => piece.size(),
                    None => &held * &rest[i],
                };
            }
        }
        let shares = Rc::new(shares);
        self.memo.borrow_mut().insert(key, Rc::clone(&shares));
        Ok(shares)
    }

    /// Final shares reached from `state` without recording events.
    fn outcome(&self, state: State) -> Result<Vec<Fraction>> {
        let rest = self.continuation(&state)?;
        let held = state.piece.size();
        Ok(state
            .allocations
            .iter()
            .zip(rest.iter())
            .map(|(piece, unit)| match piece {
                Some(piece) => piece.size(),
                None => &held * unit,
            })
            .collect())
    }

    fn run(&self) -> Result<(Partition, GameTrace)> {
        let mut state = State::initial(self.config);
        let mut events = Vec::new();
        let mut queries = QueryCounter::default();
        while !state.finished(self.config.n) {
            let (alpha, lo, hi) = self.offer(&state)?;
            queries.record_cut(queries.cuts == 0);
            events.push(Event::Cut {
                player: state.holder,
                alpha,
                sizes: [lo.size(), hi.size()],
            });
            let side = self.choose(&state, &lo, &hi)?;
            queries.record_choice();
            events.push(Event::Choice { player: PlayerId(state.next_entrant), picked: side });
            let (next, _, round_events) = self.resolve(&state, (lo, hi), side);
            events.extend(round_events);
            state = next;
        }
        events.push(Event::Exit { player: state.holder, piece: state.piece.clone() });
        state.assign(state.holder, state.piece.clone());

        let allocations = state
            .allocations
            .into_iter()
            .enumerate()
            .map(|(i, p)| (PlayerId(i + 1), p.expect("every player exits")))
            .collect();
        let partition = Partition::new(self.config.cake.clone(), allocations)?;
        let trace = GameTrace { events, partition: partition.clone(), queries };
        Ok((partition, trace))
    }
}

fn validate(config: &GameConfig, profile: &StrategyProfile) -> Result<()> {
    if profile.len() != config.n {
        return Err(Error::Configuration(format!(
            "profile covers {} players, game has {}",
            profile.len(),
            config.n
        )));
    }
    for (player, s) in profile.players() {
        check_strategy(player, s)?;
    }
    Ok(())
}

pub(crate) fn check_strategy(player: PlayerId, s: &PlayerStrategy) -> Result<()> {
    let alphas = s.first_cut.iter().chain(match &s.cut {
        CutPolicy::Fixed(alpha) => Some(alpha),
        _ => None,
    });
    for alpha in alphas {
        strategy::check_alpha(alpha).map_err(|e| Error::Strategy(format!("{player}: {e}")))?;
    }
    Ok(())
}

/// Plays the game to completion.
pub fn play(config: &GameConfig, profile: &StrategyProfile) -> Result<(Partition, GameTrace)> {
    validate(config, profile)?;
    Engine::new(config, profile).run()
}

/// Final shares only, skipping trace construction.
pub fn payoffs(config: &GameConfig, profile: &StrategyProfile) -> Result<Vec<Fraction>> {
    validate(config, profile)?;
    let engine = Engine::new(config, profile);
    engine.outcome(State::initial(config))
}
