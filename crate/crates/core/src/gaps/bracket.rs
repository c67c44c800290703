use serde::{Deserialize, Serialize};

use super::{GapError, Rational};
use crate::carpet::DigitSet;
use crate::connectivity::count_classes;
use crate::connectivity::labeler::Reach;
use crate::grid::{occupied_count, Caps, LevelSize};

/// Rigorous bounds `h_low <= h(δ) <= h_high` on the number of δ-classes of
/// the carpet, read off level-`L` cells.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HBracket {
    pub delta: Rational,
    pub level: u32,
    pub h_low: u64,
    pub h_high: u64,
    /// `h_high` is the occupied-cell count because `δ - 2 m^-L <= 0`. That
    /// count only bounds `h` when `δ >= m^-L`; below it a single cell may
    /// hold several classes.
    pub high_is_trivial: bool,
}

impl HBracket {
    pub fn is_exact(&self) -> bool {
        self.h_low == self.h_high
    }

    /// Usable for fitting: a real upper bound with `h_high / h_low <= 2`.
    pub fn is_tight(&self) -> bool {
        !self.high_is_trivial && self.h_high <= 2 * self.h_low
    }

    pub fn geometric_mean(&self) -> f64 {
        ((self.h_low as f64) * (self.h_high as f64)).sqrt()
    }
}

/// Cell reach for "rectangles within Chebyshev distance `delta`":
/// `|ΔX| <= floor(δ n^L) + 1` and `|ΔY| <= floor(δ m^L) + 1`.
pub fn liberal_reach(delta: &Rational, size: &LevelSize) -> Reach {
    // reaching past the window is the same as reaching across it
    let dx = delta.floor_times(size.columns).min(size.columns) + 1;
    let dy = delta.floor_times(size.rows).min(size.rows) + 1;
    Reach { dx, dy }
}

/// Bounds `h(δ)` from level `L`.
///
/// Lower bound: classes of cells under the liberal reach for `δ`; every cell
/// holds points of the carpet, and points at distance `<= δ` lie in cells
/// whose rectangles are within `δ`. Upper bound: the same count for
/// `δ' = δ - 2 m^-L`; cells within `δ'` hold only points within `δ`, since
/// a cell has Chebyshev diameter `m^-L`.
pub fn h_bracket(ds: &DigitSet, level: u32, delta: &Rational, caps: &Caps) -> Result<HBracket, GapError> {
    if !delta.is_positive() {
        return Err(GapError::NonPositiveDelta);
    }
    let size = LevelSize::new(ds, level)?;
    caps.check_level(ds, level)?;
    let h_low = count_classes(ds, level, liberal_reach(delta, &size), caps)?;
    let slack = Rational::new(2, size.rows);
    let conservative = delta - &slack;
    let (h_high, high_is_trivial) = if conservative.is_positive() {
        (count_classes(ds, level, liberal_reach(&conservative, &size), caps)?, false)
    } else {
        (occupied_count(ds, level) as u64, true)
    };
    Ok(HBracket { delta: delta.clone(), level, h_low, h_high, high_is_trivial })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn large_delta_is_one_class() {
        let ds = DigitSet::new(7, 3, [(0, 0), (3, 1)]).unwrap();
        let b = h_bracket(&ds, 3, &Rational::from_integer(2), &Caps::default()).unwrap();
        assert_eq!((b.h_low, b.h_high), (1, 1));
    }

    #[test]
    fn cantor_product_half() {
        let ds = DigitSet::new(3, 2, [(0, 0), (1, 0), (0, 1), (1, 1)]).unwrap();
        let b = h_bracket(&ds, 5, &Rational::new(1, 2), &Caps::default()).unwrap();
        assert_eq!((b.h_low, b.h_high), (1, 1));
        assert!(!b.high_is_trivial);
    }

    #[test]
    fn trivial_upper_bound() {
        let ds = DigitSet::new(7, 3, [(0, 0), (3, 1)]).unwrap();
        let b = h_bracket(&ds, 2, &Rational::new(1, 9), &Caps::default()).unwrap();
        assert!(b.high_is_trivial);
        assert_eq!(b.h_high, 4);
        assert!(b.h_low <= b.h_high);
        // h_low = h_high here, but the count is not a bound on h
        let b = h_bracket(&ds, 1, &Rational::new(1, 1000), &Caps::default()).unwrap();
        assert_eq!((b.h_low, b.h_high), (2, 2));
        assert!(b.high_is_trivial && !b.is_tight());
        assert_eq!(h_bracket(&ds, 2, &Rational::zero(), &Caps::default()), Err(GapError::NonPositiveDelta));
    }

    #[test]
    fn reach_uses_exact_floor() {
        let size = LevelSize { level: 3, columns: 343, rows: 27 };
        assert_eq!(liberal_reach(&Rational::new(1, 7), &size), Reach { dx: 50, dy: 4 });
        assert_eq!(liberal_reach(&Rational::from_integer(5), &size), Reach { dx: 344, dy: 28 });
    }
}
