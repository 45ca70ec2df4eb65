use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::fraction::Fraction;
use crate::error::{Error, Result};

/// 1-based player identifier.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PlayerId(pub usize);

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.0)
    }
}

impl fmt::Debug for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The whole cake `[0, size)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cake {
    size: Fraction,
}

impl Cake {
    pub fn new(size: Fraction) -> Result<Self> {
        if !size.is_positive() {
            return Err(Error::Domain(format!("cake size must be positive, got {size}")));
        }
        Ok(Self { size })
    }

    pub fn unit() -> Self {
        Self { size: Fraction::one() }
    }

    pub fn size(&self) -> &Fraction {
        &self.size
    }

    pub fn whole(&self) -> Piece {
        Piece { lo: Fraction::zero(), hi: self.size.clone() }
    }

    pub fn contains(&self, piece: &Piece) -> bool {
        !piece.lo.is_negative() && piece.hi <= self.size
    }
}

impl Default for Cake {
    fn default() -> Self {
        Self::unit()
    }
}

/// Half-open interval `[lo, hi)` of cake coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Piece {
    lo: Fraction,
    hi: Fraction,
}

impl Piece {
    pub fn new(lo: Fraction, hi: Fraction) -> Result<Self> {
        if lo.is_negative() || hi < lo {
            return Err(Error::Domain(format!("invalid piece [{lo}, {hi})")));
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> &Fraction {
        &self.lo
    }

    pub fn hi(&self) -> &Fraction {
        &self.hi
    }

    pub fn size(&self) -> Fraction {
        &self.hi - &self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.lo == self.hi
    }

    /// Cuts at `lo + alpha * size`; the lower-coordinate piece comes first.
    pub fn split(&self, alpha: &Fraction) -> Result<(Piece, Piece)> {
        if !alpha.is_unit_interval() {
            return Err(Error::Strategy(format!("cut fraction {alpha} outside [0, 1]")));
        }
        let at = &self.lo + alpha * self.size();
        Ok((
            Piece { lo: self.lo.clone(), hi: at.clone() },
            Piece { lo: at, hi: self.hi.clone() },
        ))
    }

    /// Length of the overlap with `[lo, hi)`.
    pub(crate) fn overlap(&self, lo: &Fraction, hi: &Fraction) -> Fraction {
        let start = self.lo.clone().max(lo.clone());
        let end = self.hi.clone().min(hi.clone());
        if end > start {
            end - start
        } else {
            Fraction::zero()
        }
    }
}

impl fmt::Debug for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.lo, self.hi)
    }
}

/// Allocation of one contiguous piece to each of players `1..=n`, tiling the cake.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    cake: Cake,
    assignments: BTreeMap<PlayerId, Piece>,
}

impl Partition {
    /// Validates that the players are exactly `1..=n` and that the pieces
    /// tile `[0, |C|)` with no gaps or overlaps.
    pub fn new(cake: Cake, assignments: BTreeMap<PlayerId, Piece>) -> Result<Self> {
        let n = assignments.len();
        if n == 0 {
            return Err(Error::Argument("partition needs at least one player".into()));
        }
        for (expected, id) in (1..=n).zip(assignments.keys()) {
            if id.0 != expected {
                return Err(Error::Argument(format!(
                    "player ids must be 1..={n}, found {id}"
                )));
            }
        }
        let mut sorted: Vec<&Piece> = assignments.values().collect();
        sorted.sort_by(|a, b| (a.lo(), a.hi()).cmp(&(b.lo(), b.hi())));
        let mut cursor = Fraction::zero();
        for piece in sorted {
            if piece.lo != cursor {
                return Err(Error::Argument(format!(
                    "pieces do not tile the cake: gap or overlap at {cursor}"
                )));
            }
            cursor = piece.hi.clone();
        }
        if &cursor != cake.size() {
            return Err(Error::Argument(format!(
                "pieces cover [0, {cursor}) but the cake is [0, {})",
                cake.size()
            )));
        }
        Ok(Self { cake, assignments })
    }

    /// Contiguous pieces of the given sizes laid out left to right for players 1..=n.
    pub fn from_sizes(cake: Cake, sizes: &[Fraction]) -> Result<Self> {
        let mut lo = Fraction::zero();
        let mut assignments = BTreeMap::new();
        for (i, size) in sizes.iter().enumerate() {
            let hi = &lo + size;
            assignments.insert(PlayerId(i + 1), Piece::new(lo, hi.clone())?);
            lo = hi;
        }
        Self::new(cake, assignments)
    }

    pub fn cake(&self) -> &Cake {
        &self.cake
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn piece(&self, player: PlayerId) -> Option<&Piece> {
        self.assignments.get(&player)
    }

    pub fn iter(&self) -> impl Iterator<Item = (PlayerId, &Piece)> {
        self.assignments.iter().map(|(id, p)| (*id, p))
    }

    /// Piece sizes in player order.
    pub fn shares(&self) -> Vec<Fraction> {
        self.assignments.values().map(Piece::size).collect()
    }

    /// Number of interior cut points between adjacent non-empty pieces.
    pub fn interior_cuts(&self) -> Vec<Fraction> {
        let mut cuts: Vec<Fraction> = self
            .assignments
            .values()
            .map(|p| p.hi.clone())
            .filter(|hi| hi.is_positive() && hi < self.cake.size())
            .collect();
        cuts.sort();
        cuts.dedup();
        cuts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n: i64, d: i64) -> Fraction {
        Fraction::new(n, d)
    }

    #[test]
    fn split_is_exact_and_contiguous() {
        let p = Piece::new(f(1, 3), Fraction::one()).unwrap();
        let (a, b) = p.split(&f(1, 4)).unwrap();
        assert_eq!(a.size(), f(1, 6));
        assert_eq!(b.size(), f(1, 2));
        assert_eq!(a.hi(), b.lo());
        assert!(p.split(&f(5, 4)).is_err());
        assert!(p.split(&f(-1, 4)).is_err());
    }

    #[test]
    fn partition_rejects_gaps_overlaps_and_bad_ids() {
        let cake = Cake::unit();
        assert!(Partition::from_sizes(cake.clone(), &[f(1, 2), f(1, 2)]).is_ok());
        assert!(Partition::from_sizes(cake.clone(), &[f(1, 2), f(1, 4)]).is_err());

        let mut overlapping = BTreeMap::new();
        overlapping.insert(PlayerId(1), Piece::new(f(0, 1), f(2, 3)).unwrap());
        overlapping.insert(PlayerId(2), Piece::new(f(1, 3), f(1, 1)).unwrap());
        assert!(Partition::new(cake.clone(), overlapping).is_err());

        let mut skipped = BTreeMap::new();
        skipped.insert(PlayerId(1), Piece::new(f(0, 1), f(1, 2)).unwrap());
        skipped.insert(PlayerId(3), Piece::new(f(1, 2), f(1, 1)).unwrap());
        assert!(Partition::new(cake, skipped).is_err());
    }

    #[test]
    fn empty_pieces_tile() {
        let p = Partition::from_sizes(Cake::unit(), &[Fraction::zero(), Fraction::one()]).unwrap();
        assert_eq!(p.shares(), vec![Fraction::zero(), Fraction::one()]);
        assert!(p.interior_cuts().is_empty());
    }

    #[test]
    fn cake_must_be_positive() {
        assert!(Cake::new(Fraction::zero()).is_err());
        assert!(Cake::new(f(3, 1)).is_ok());
    }
}
