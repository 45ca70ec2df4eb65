use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::Rule;
use crate::cake::{Cake, Fraction, Partition, Piece, PlayerId};
use crate::error::{Error, Result};
use crate::open_game::QueryCounter;

/// Which of the two offered pieces was picked; `First` is the lower-coordinate piece.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    First,
    Second,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::First => Side::Second,
            Side::Second => Side::First,
        }
    }

    /// Response bit: 0 for the first piece, 1 for the second.
    pub fn bit(self) -> u8 {
        match self {
            Side::First => 0,
            Side::Second => 1,
        }
    }

    pub fn pick<T>(self, pair: (T, T)) -> (T, T) {
        match self {
            Side::First => pair,
            Side::Second => (pair.1, pair.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "lowercase")]
pub enum Event {
    Cut { player: PlayerId, alpha: Fraction, sizes: [Fraction; 2] },
    Choice { player: PlayerId, picked: Side },
    /// Biggest Player designation for the next round.
    Handoff { player: PlayerId },
    Exit { player: PlayerId, piece: Piece },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameTrace {
    pub events: Vec<Event>,
    pub partition: Partition,
    pub queries: QueryCounter,
}

impl GameTrace {
    pub fn cuts(&self) -> usize {
        self.events.iter().filter(|e| matches!(e, Event::Cut { .. })).count()
    }

    pub fn cutters(&self) -> Vec<PlayerId> {
        self.events
            .iter()
            .filter_map(|e| match e {
                Event::Cut { player, .. } => Some(*player),
                _ => None,
            })
            .collect()
    }

    /// One JSON object per line.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for event in &self.events {
            out.push_str(&serde_json::to_string(event).expect("events serialize"));
            out.push('\n');
        }
        out
    }
}

pub fn parse_json_lines(text: &str) -> Result<Vec<Event>> {
    text.lines()
        .enumerate()
        .filter(|(_, line)| !line.trim().is_empty())
        .map(|(i, line)| {
            serde_json::from_str(line).map_err(|e| Error::Trace(format!("line {}: {e}", i + 1)))
        })
        .collect()
}

/// Re-executes an event log against the rules of `rule` and returns the
/// partition it describes; any event that could not have been produced by a
/// legal play-out is a trace error.
pub fn replay(cake: &Cake, n: usize, rule: Rule, events: &[Event]) -> Result<Partition> {
    if n == 0 {
        return Err(Error::Argument("replay needs n >= 1".into()));
    }
    let bad = |msg: String| Err(Error::Trace(msg));
    let mut events = events.iter();
    let mut holder = PlayerId(1);
    let mut piece = cake.whole();
    let mut allocations = BTreeMap::new();

    fn exit(
        allocations: &mut BTreeMap<PlayerId, Piece>,
        event: Option<&Event>,
        who: PlayerId,
        what: &Piece,
    ) -> Result<()> {
        match event {
            Some(Event::Exit { player, piece }) if *player == who && piece == what => {
                allocations.insert(who, piece.clone());
                Ok(())
            }
            other => Err(Error::Trace(format!("expected exit of {who} with {what:?}, got {other:?}"))),
        }
    }

    for entrant in 2..=n {
        let chooser = PlayerId(entrant);
        let (lo, hi) = match events.next() {
            Some(Event::Cut { player, alpha, sizes }) if *player == holder => {
                let (lo, hi) = piece.split(alpha).map_err(|e| Error::Trace(e.to_string()))?;
                if sizes[0] != lo.size() || sizes[1] != hi.size() {
                    return bad(format!("cut sizes {sizes:?} do not match alpha {alpha}"));
                }
                (lo, hi)
            }
            other => return bad(format!("expected cut by {holder}, got {other:?}")),
        };
        let picked = match events.next() {
            Some(Event::Choice { player, picked }) if *player == chooser => *picked,
            other => return bad(format!("expected choice by {chooser}, got {other:?}")),
        };
        let (chosen, left) = picked.pick((lo, hi));
        let last = entrant == n;
        let (next_holder, next_piece, leaver, leftover) = match rule {
            Rule::Vanilla => (chooser, chosen, holder, left),
            Rule::BiggestPlayer => {
                if left.size() >= chosen.size() {
                    (holder, left, chooser, chosen)
                } else {
                    (chooser, chosen, holder, left)
                }
            }
        };
        if rule == Rule::BiggestPlayer && !last {
            match events.next() {
                Some(Event::Handoff { player }) if *player == next_holder => {}
                other => return bad(format!("expected handoff to {next_holder}, got {other:?}")),
            }
        }
        exit(&mut allocations, events.next(), leaver, &leftover)?;
        holder = next_holder;
        piece = next_piece;
    }
    exit(&mut allocations, events.next(), holder, &piece)?;
    if let Some(extra) = events.next() {
        return bad(format!("unexpected event after the game ended: {extra:?}"));
    }
    Partition::new(cake.clone(), allocations)
}
