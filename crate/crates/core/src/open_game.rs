//! Open games as lenses.
//!
//! A lens `(X, S) -> (Y, R)` has a forward play map `X -> Y` and a backward
//! map `X × R -> S` that sends the response observed downstream back to the
//! previous stage. Every cake-cutting round decomposes into a choose stage,
//! a settle stage (payoff and Biggest Player bookkeeping) and a cut stage,
//! glued by sequential composition:
//!
//! ```text
//!   Offer ──choose──▶ Picked ──settle──▶ Holding ──cut──▶ Offer
//!    Side ◀─────────  Side   ◀─────────   Side   ◀─────── Side
//! ```
//!
//! The forward wire carries the play record along with the offer, so a
//! composed game's forward map yields the full event log. The backward wire
//! only carries the binary choice.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cake::{Cake, Fraction, Partition, Piece, PlayerId};
use crate::engine::{check_strategy, Event, GameConfig, GameTrace, PlayerStrategy, Rule, Side, StrategyProfile};
use crate::error::{Error, Result};

/// Robertson–Webb queries issued during a play-out.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QueryCounter {
    pub cuts: u64,
    pub evals: u64,
}

impl QueryCounter {
    pub fn total(&self) -> u64 {
        self.cuts + self.evals
    }

    /// One cut query; the opening cut also costs the evaluation of the whole cake.
    /// Later cutters already evaluated their piece when they chose it.
    pub fn record_cut(&mut self, opening: bool) {
        self.cuts += 1;
        if opening {
            self.evals += 1;
        }
    }

    /// The chooser evaluates both offered pieces.
    pub fn record_choice(&mut self) {
        self.evals += 2;
    }
}

/// Recomputes the query count from a complete event log.
pub fn count_queries(events: &[Event]) -> Result<QueryCounter> {
    let mut counter = QueryCounter::default();
    let mut choices = 0usize;
    let mut exited = BTreeSet::new();
    for event in events {
        match event {
            Event::Cut { .. } => counter.record_cut(counter.cuts == 0),
            Event::Choice { .. } => {
                choices += 1;
                counter.record_choice();
            }
            Event::Exit { player, .. } => {
                if !exited.insert(*player) {
                    return Err(Error::Trace(format!("{player} exits twice")));
                }
            }
            Event::Handoff { .. } => {}
        }
    }
    let cuts = counter.cuts as usize;
    if cuts != choices || exited.len() != cuts + 1 {
        return Err(Error::Trace(format!(
            "incomplete trace: {cuts} cuts, {choices} choices, {} exits",
            exited.len()
        )));
    }
    Ok(counter)
}

type Forward<X, Y> = Arc<dyn Fn(&X) -> Y + Send + Sync>;
type Backward<X, R, S> = Arc<dyn Fn(&X, &R) -> S + Send + Sync>;

/// Lens `(X, S) -> (Y, R)`.
pub struct Lens<X, Y, R, S> {
    forward: Forward<X, Y>,
    backward: Backward<X, R, S>,
}

impl<X, Y, R, S> Clone for Lens<X, Y, R, S> {
    fn clone(&self) -> Self {
        Self { forward: Arc::clone(&self.forward), backward: Arc::clone(&self.backward) }
    }
}

impl<X, Y, R, S> fmt::Debug for Lens<X, Y, R, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Lens { .. }")
    }
}

impl<X: 'static, Y: 'static, R: 'static, S: 'static> Lens<X, Y, R, S> {
    pub fn new(
        forward: impl Fn(&X) -> Y + Send + Sync + 'static,
        backward: impl Fn(&X, &R) -> S + Send + Sync + 'static,
    ) -> Self {
        Self { forward: Arc::new(forward), backward: Arc::new(backward) }
    }

    pub fn play(&self, x: &X) -> Y {
        (self.forward)(x)
    }

    pub fn coplay(&self, x: &X, r: &R) -> S {
        (self.backward)(x, r)
    }

    /// `self` followed by `next`.
    pub fn then<Z: 'static, Q: 'static>(&self, next: &Lens<Y, Z, Q, R>) -> Lens<X, Z, Q, S> {
        compose_seq(self, next)
    }
}

/// `forward = id`, `backward = (x, r) ↦ r`.
pub fn identity<X: Clone + 'static, R: Clone + 'static>() -> Lens<X, X, R, R> {
    Lens::new(X::clone, |_, r: &R| r.clone())
}

/// Sequential composition: `g2`'s backward output becomes the response fed
/// to `g1`'s backward map. Mismatched wire types do not type-check.
pub fn compose_seq<X, Y, Z, Q, R, S>(g1: &Lens<X, Y, R, S>, g2: &Lens<Y, Z, Q, R>) -> Lens<X, Z, Q, S>
where
    X: 'static,
    Y: 'static,
    Z: 'static,
    Q: 'static,
    R: 'static,
    S: 'static,
{
    let (f1, f2) = (Arc::clone(&g1.forward), Arc::clone(&g2.forward));
    let (b1, b2, f1b) = (Arc::clone(&g1.backward), Arc::clone(&g2.backward), Arc::clone(&g1.forward));
    Lens {
        forward: Arc::new(move |x| f2(&f1(x))),
        backward: Arc::new(move |x, q| {
            let y = f1b(x);
            b1(x, &b2(&y, q))
        }),
    }
}

/// Play record threaded along the forward wire.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub n: usize,
    pub cake: Cake,
    pub events: Vec<Event>,
    pub allocations: BTreeMap<PlayerId, Piece>,
    pub queries: QueryCounter,
    pub has_cut: BTreeSet<PlayerId>,
}

impl Table {
    pub fn new(n: usize, cake: Cake) -> Self {
        Self {
            n,
            cake,
            events: Vec::new(),
            allocations: BTreeMap::new(),
            queries: QueryCounter::default(),
            has_cut: BTreeSet::new(),
        }
    }

    /// Players not yet allocated a piece, including whoever holds the active piece.
    pub fn players_left(&self) -> usize {
        self.n - self.allocations.len()
    }

    fn exit(&mut self, player: PlayerId, piece: Piece) {
        self.events.push(Event::Exit { player, piece: piece.clone() });
        self.allocations.insert(player, piece);
    }
}

/// The `ℝ` wire: who holds the active piece.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Holding {
    pub holder: PlayerId,
    pub piece: Piece,
    pub table: Table,
}

impl Holding {
    /// Player 1 holding the whole cake.
    pub fn start(n: usize, cake: Cake) -> Self {
        Self { holder: PlayerId(1), piece: cake.whole(), table: Table::new(n, cake) }
    }
}

/// The `ℝ × ℝ` wire: two pieces offered by `cutter`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Offer {
    pub cutter: PlayerId,
    pub pieces: (Piece, Piece),
    pub table: Table,
}

/// An offer together with the chooser's pick, before payoffs are assigned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Picked {
    pub offer: Offer,
    pub chooser: PlayerId,
    pub side: Side,
}

/// Everything a choice policy may look at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChoiceView {
    pub chooser: PlayerId,
    pub sizes: (Fraction, Fraction),
    /// Players without a piece yet, cutter and chooser included.
    pub players_left: usize,
}

impl ChoiceView {
    pub fn is_last_round(&self) -> bool {
        self.players_left == 2
    }
}

pub type Chooser = Arc<dyn Fn(&ChoiceView) -> Side + Send + Sync>;

pub fn choose_bigger() -> Chooser {
    Arc::new(|v: &ChoiceView| if v.sizes.1 > v.sizes.0 { Side::Second } else { Side::First })
}

pub fn choose_first() -> Chooser {
    Arc::new(|_: &ChoiceView| Side::First)
}

fn cut(holding: &Holding, strategy: &PlayerStrategy) -> Offer {
    let mut table = holding.table.clone();
    let has_cut = table.has_cut.contains(&holding.holder);
    let alpha = strategy.alpha(table.players_left(), has_cut);
    let (lo, hi) = holding.piece.split(&alpha).expect("cut fractions validated at construction");
    table.queries.record_cut(table.queries.cuts == 0);
    table.has_cut.insert(holding.holder);
    table.events.push(Event::Cut {
        player: holding.holder,
        alpha,
        sizes: [lo.size(), hi.size()],
    });
    Offer { cutter: holding.holder, pieces: (lo, hi), table }
}

/// `P_i^cut` for a fixed cutter, as in vanilla composition.
pub fn make_cut_unit(player: PlayerId, strategy: PlayerStrategy) -> Result<Lens<Holding, Offer, Side, Side>> {
    check_strategy(player, &strategy)?;
    Ok(Lens::new(
        move |h: &Holding| {
            assert_eq!(h.holder, player, "cut unit for {player} wired to a piece held by {}", h.holder);
            cut(h, &strategy)
        },
        |_, r: &Side| *r,
    ))
}

/// `P_x^cut` whose cutter `x` arrives on the wire, as under the Biggest Player rule.
pub fn make_dynamic_cut_unit(profile: &StrategyProfile) -> Result<Lens<Holding, Offer, Side, Side>> {
    for (player, strategy) in profile.players() {
        check_strategy(player, strategy)?;
    }
    let profile = profile.clone();
    Ok(Lens::new(
        move |h: &Holding| {
            let strategy = profile.get(h.holder).expect("holder has a strategy");
            cut(h, strategy)
        },
        |_, r: &Side| *r,
    ))
}

/// `P_i^choose`: picks a piece and reports the pick on the backward wire.
pub fn make_choose_unit(player: PlayerId, policy: Chooser) -> Lens<Offer, Picked, Side, Side> {
    let decide = {
        let policy = Arc::clone(&policy);
        move |offer: &Offer| {
            policy(&ChoiceView {
                chooser: player,
                sizes: (offer.pieces.0.size(), offer.pieces.1.size()),
                players_left: offer.table.players_left(),
            })
        }
    };
    let decide_back = decide.clone();
    Lens::new(
        move |offer: &Offer| {
            let side = decide(offer);
            let mut offer = offer.clone();
            offer.table.queries.record_choice();
            offer.table.events.push(Event::Choice { player, picked: side });
            Picked { offer, chooser: player, side }
        },
        move |offer: &Offer, _downstream: &Side| decide_back(offer),
    )
}

/// Assigns the exiting piece and decides who holds the active piece next.
pub fn make_settle_unit(rule: Rule) -> Lens<Picked, Holding, Side, Side> {
    Lens::new(
        move |p: &Picked| {
            let mut table = p.offer.table.clone();
            let last = table.players_left() == 2;
            let (chosen, left) = p.side.pick(p.offer.pieces.clone());
            let cutter = p.offer.cutter;
            let (holder, held, leaver, leftover) = match rule {
                Rule::Vanilla => (p.chooser, chosen, cutter, left),
                Rule::BiggestPlayer => {
                    if left.size() >= chosen.size() {
                        (cutter, left, p.chooser, chosen)
                    } else {
                        (p.chooser, chosen, cutter, left)
                    }
                }
            };
            if rule == Rule::BiggestPlayer && !last {
                table.events.push(Event::Handoff { player: holder });
            }
            table.exit(leaver, leftover);
            Holding { holder, piece: held, table }
        },
        |_, r: &Side| *r,
    )
}

/// Closes the game: the final holder leaves with their piece.
pub fn make_close_unit() -> Lens<Holding, Table, Side, Side> {
    Lens::new(
        |h: &Holding| {
            let mut table = h.table.clone();
            table.exit(h.holder, h.piece.clone());
            table
        },
        |_, r: &Side| *r,
    )
}

/// One player's block `P_i = choose ; settle ; cut`.
pub fn player_unit(
    chooser: PlayerId,
    policy: Chooser,
    rule: Rule,
    cut_unit: &Lens<Holding, Offer, Side, Side>,
) -> Lens<Offer, Offer, Side, Side> {
    make_choose_unit(chooser, policy)
        .then(&make_settle_unit(rule))
        .then(cut_unit)
}

/// The closed `n`-player game as a single lens from the opening holding to
/// the final play record. `choosers[i]` is the policy of player `i + 2`.
pub fn compose_game(
    config: &GameConfig,
    profile: &StrategyProfile,
    choosers: &[Chooser],
) -> Result<Lens<Holding, Table, Side, Side>> {
    let n = config.n;
    if profile.len() != n || choosers.len() + 1 != n {
        return Err(Error::Configuration(format!(
            "{n}-player game needs {n} cut strategies and {} choosers",
            n - 1
        )));
    }
    let close = make_close_unit();
    if n == 1 {
        return Ok(close);
    }
    let cut_unit = |player: PlayerId| -> Result<Lens<Holding, Offer, Side, Side>> {
        match config.rule {
            Rule::Vanilla => make_cut_unit(player, profile.get(player).expect("length checked").clone()),
            Rule::BiggestPlayer => make_dynamic_cut_unit(profile),
        }
    };
    let mut game = cut_unit(PlayerId(1))?;
    for entrant in 2..n {
        let block = player_unit(PlayerId(entrant), Arc::clone(&choosers[entrant - 2]), config.rule, &cut_unit(PlayerId(entrant))?);
        game = game.then(&block);
    }
    let last = make_choose_unit(PlayerId(n), Arc::clone(&choosers[n - 2])).then(&make_settle_unit(config.rule));
    Ok(game.then(&last).then(&close))
}

/// Runs a composed game from player 1 holding the whole cake.
pub fn play_composed(
    config: &GameConfig,
    game: &Lens<Holding, Table, Side, Side>,
) -> Result<(Partition, GameTrace)> {
    let table = game.play(&Holding::start(config.n, config.cake.clone()));
    let partition = Partition::new(config.cake.clone(), table.allocations)?;
    let trace = GameTrace { events: table.events, partition: partition.clone(), queries: table.queries };
    Ok((partition, trace))
}
