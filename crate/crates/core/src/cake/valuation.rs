use super::fraction::Fraction;
use super::geometry::{Cake, Piece};
use crate::error::{Error, Result};

/// Piecewise-constant density over `[0, |C|)`.
///
/// Segment `i` starts at `segments[i].0` and runs to the next breakpoint (or
/// the end of the cake) with height `segments[i].1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Valuation {
    cake: Cake,
    segments: Vec<(Fraction, Fraction)>,
}

impl Valuation {
    pub fn new(cake: Cake, segments: Vec<(Fraction, Fraction)>) -> Result<Self> {
        match segments.first() {
            Some((start, _)) if start.is_zero() => {}
            _ => return Err(Error::Domain("density must start at coordinate 0".into())),
        }
        for pair in segments.windows(2) {
            if pair[1].0 <= pair[0].0 {
                return Err(Error::Domain("breakpoints must be strictly increasing".into()));
            }
        }
        if segments.last().is_some_and(|(b, _)| b >= cake.size()) {
            return Err(Error::Domain("breakpoint at or beyond the end of the cake".into()));
        }
        if let Some((_, h)) = segments.iter().find(|(_, h)| h.is_negative()) {
            return Err(Error::Domain(format!("negative density {h}")));
        }
        Ok(Self { cake, segments })
    }

    /// Density 1 everywhere: value equals length.
    pub fn homogeneous(cake: Cake) -> Self {
        Self { cake, segments: vec![(Fraction::zero(), Fraction::one())] }
    }

    pub fn cake(&self) -> &Cake {
        &self.cake
    }

    /// `V(C)`.
    pub fn total(&self) -> Fraction {
        // whole cake is always in-domain
        self.measure(&self.cake.whole()).expect("whole cake")
    }

    /// Integral of the density over `piece`.
    pub fn measure(&self, piece: &Piece) -> Result<Fraction> {
        if !self.cake.contains(piece) {
            return Err(Error::Domain(format!(
                "piece {piece:?} outside cake [0, {})",
                self.cake.size()
            )));
        }
        let ends = self
            .segments
            .iter()
            .skip(1)
            .map(|(b, _)| b)
            .chain(std::iter::once(self.cake.size()));
        Ok(self
            .segments
            .iter()
            .zip(ends)
            .map(|((start, height), end)| piece.overlap(start, end) * height)
            .sum())
    }
}

/// Free-function form of [`Valuation::measure`].
pub fn measure(valuation: &Valuation, piece: &Piece) -> Result<Fraction> {
    valuation.measure(piece)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n: i64, d: i64) -> Fraction {
        Fraction::new(n, d)
    }

    fn piece(lo: Fraction, hi: Fraction) -> Piece {
        Piece::new(lo, hi).unwrap()
    }

    fn step() -> Valuation {
        Valuation::new(Cake::unit(), vec![(f(0, 1), f(2, 1)), (f(1, 2), f(0, 1))]).unwrap()
    }

    #[test]
    fn uniform_third() {
        let v = Valuation::homogeneous(Cake::unit());
        assert_eq!(v.measure(&piece(f(0, 1), f(1, 3))).unwrap(), f(1, 3));
    }

    #[test]
    fn empty_piece_is_zero() {
        let v = step();
        assert_eq!(v.measure(&piece(f(1, 4), f(1, 4))).unwrap(), Fraction::zero());
    }

    // midpoint Riemann sum at step 2^-12
    fn riemann(lo: f64, hi: f64, density: impl Fn(f64) -> f64) -> f64 {
        let h = 1.0 / 4096.0;
        let mut x = lo + h / 2.0;
        let mut total = 0.0;
        while x < hi {
            total += density(x) * h;
            x += h;
        }
        total
    }

    #[test]
    fn step_density_matches_riemann_oracle() {
        let oracle = riemann(0.25, 0.75, |x| if x < 0.5 { 2.0 } else { 0.0 });
        assert!((oracle - 0.5).abs() < 1e-9);
        let exact = step().measure(&piece(f(1, 4), f(3, 4))).unwrap();
        assert_eq!(exact, f(1, 2));
    }

    #[test]
    fn outside_domain() {
        let v = Valuation::homogeneous(Cake::unit());
        assert!(matches!(v.measure(&piece(f(1, 2), f(3, 2))), Err(Error::Domain(_))));
    }

    #[test]
    fn rejects_malformed_densities() {
        let cake = Cake::unit();
        assert!(Valuation::new(cake.clone(), vec![]).is_err());
        assert!(Valuation::new(cake.clone(), vec![(f(1, 4), f(1, 1))]).is_err());
        assert!(Valuation::new(cake.clone(), vec![(f(0, 1), f(1, 1)), (f(0, 1), f(1, 1))]).is_err());
        assert!(Valuation::new(cake.clone(), vec![(f(0, 1), f(-1, 1))]).is_err());
        assert!(Valuation::new(cake, vec![(f(0, 1), f(1, 1)), (f(1, 1), f(1, 1))]).is_err());
    }

    #[test]
    fn additive_over_adjacent_pieces() {
        let v = Valuation::new(
            Cake::unit(),
            vec![(f(0, 1), f(3, 1)), (f(1, 5), f(1, 2)), (f(2, 3), f(7, 4))],
        )
        .unwrap();
        let cuts = [f(0, 1), f(1, 9), f(1, 3), f(2, 3), f(4, 5), f(1, 1)];
        let parts: Fraction = cuts
            .windows(2)
            .map(|w| v.measure(&piece(w[0].clone(), w[1].clone())).unwrap())
            .sum();
        assert_eq!(parts, v.total());
    }
}
