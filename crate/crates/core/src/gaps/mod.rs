//! Gap sequences, two-sided bounds on the number of δ-classes, and
//! power-law fits of that count.
//!
//! Distances are Chebyshev (`max(|Δx|, |Δy|)`) throughout. Two points are
//! δ-equivalent when a chain inside the set joins them with every step
//! `<= δ`; `h(δ)` counts the classes, and the gap sequence lists the jump
//! points of `h` in decreasing order, each with multiplicity equal to the
//! size of the jump.

mod bracket;
mod fit;
mod mst;
mod rational;

pub use bracket::{h_bracket, liberal_reach, HBracket};
pub use fit::{
    collect_samples, fit_h_exponent, fit_power_law, samples_csv, ExponentReport, PowerLawFit, SampleSchedule,
};
pub use mst::{component_forest, component_gap_sequence, ComponentCells, ComponentForest};
pub use rational::{ParseRationalError, Rational};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::GridError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GapError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("{count} components exceed the cap of {cap}")]
    ComponentCap { count: u64, cap: usize },
    #[error("step function is not a valid h: {0}")]
    StepFunction(String),
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("delta must be positive")]
    NonPositiveDelta,
    #[error("only {tight} tight samples, need at least {needed}")]
    TooFewTightSamples { tight: usize, needed: usize },
    #[error("samples do not span more than one scale")]
    DegenerateSamples,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapEntry {
    pub value: Rational,
    pub multiplicity: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapSource {
    FiniteLevel { level: u32 },
    StepFunction,
    Reference,
}

/// Strictly descending gap values with positive multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapSequence {
    pub entries: Vec<GapEntry>,
    pub source: GapSource,
}

impl GapSequence {
    /// Groups equal values of an arbitrary list of gaps.
    pub fn from_values(mut values: Vec<Rational>, source: GapSource) -> Self {
        values.sort_unstable_by(|a, b| b.cmp(a));
        let mut entries: Vec<GapEntry> = Vec::new();
        for v in values {
            match entries.last_mut() {
                Some(last) if last.value == v => last.multiplicity += 1,
                _ => entries.push(GapEntry { value: v, multiplicity: 1 }),
            }
        }
        Self { entries, source }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of multiplicities; one less than the number of classes at the
    /// smallest listed threshold.
    pub fn total_multiplicity(&self) -> u64 {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    /// `h(δ) = 1 + #{gaps > δ}`.
    pub fn h_at(&self, delta: &Rational) -> u64 {
        1 + self.entries.iter().filter(|e| &e.value > delta).map(|e| e.multiplicity).sum::<u64>()
    }

    /// `g_k`, the k-th term (1-based) of the expanded sequence.
    pub fn term(&self, k: u64) -> Option<&Rational> {
        let mut seen = 0;
        for e in &self.entries {
            seen += e.multiplicity;
            if k >= 1 && k <= seen {
                return Some(&e.value);
            }
        }
        None
    }

    /// Jump points `(δ_j, h(δ_j))` followed by the terminal value `(0, h(0))`.
    pub fn step_function(&self) -> Vec<(Rational, u64)> {
        let mut h = 1;
        let mut steps = Vec::with_capacity(self.entries.len() + 1);
        for e in &self.entries {
            steps.push((e.value.clone(), h));
            h += e.multiplicity;
        }
        steps.push((Rational::zero(), h));
        steps
    }

    pub fn is_well_formed(&self) -> bool {
        self.entries.iter().all(|e| e.multiplicity >= 1 && e.value.is_positive())
            && self.entries.windows(2).all(|w| w[0].value > w[1].value)
    }
}

/// Converts jump points of `h` into a gap sequence.
///
/// `steps` lists `(δ_j, h(δ_j))` with `δ` strictly decreasing and `h`
/// strictly increasing from `h = 1`. The last point only supplies the value
/// of `h` below the previous jump: entry `j` gets multiplicity
/// `h(δ_{j+1}) - h(δ_j)`.
pub fn gap_from_h(steps: &[(Rational, u64)]) -> Result<GapSequence, GapError> {
    let Some((_, first)) = steps.first() else {
        return Err(GapError::StepFunction("no points".into()));
    };
    if *first != 1 {
        return Err(GapError::StepFunction(format!("h starts at {first}, not 1")));
    }
    let mut entries = Vec::with_capacity(steps.len().saturating_sub(1));
    for pair in steps.windows(2) {
        let ((d0, h0), (d1, h1)) = (&pair[0], &pair[1]);
        if d1 >= d0 {
            return Err(GapError::StepFunction(format!("delta {d1} does not decrease after {d0}")));
        }
        if h1 <= h0 {
            return Err(GapError::StepFunction(format!("h = {h1} at {d1} does not increase from {h0}")));
        }
        entries.push(GapEntry { value: d0.clone(), multiplicity: h1 - h0 });
    }
    Ok(GapSequence { entries, source: GapSource::StepFunction })
}

/// Gaps of the middle-type Cantor set `K(n, {0..n0-1})`:
/// `δ_j = (n - n0) / ((n - 1) n^j)` with multiplicity `n0^j - n0^(j-1)`.
pub fn cantor_gap_reference(n: u64, n0: u64, j_max: u32) -> Result<GapSequence, GapError> {
    if n0 < 2 || n0 + 1 > n {
        return Err(GapError::Parameter(format!("need 2 <= n0 <= n - 1, got n = {n}, n0 = {n0}")));
    }
    let entries = (1..=j_max)
        .map(|j| {
            let den = num_bigint::BigInt::from(n - 1) * num_traits::pow(num_bigint::BigInt::from(n), j as usize);
            GapEntry { value: Rational::new(n - n0, den), multiplicity: n0.pow(j) - n0.pow(j - 1) }
        })
        .collect();
    Ok(GapSequence { entries, source: GapSource::Reference })
}

/// `h(δ_j) = n0^(j-1)` for the same Cantor set, as jump points.
pub fn cantor_step_function(n: u64, n0: u64, j_max: u32) -> Vec<(Rational, u64)> {
    (1..=j_max)
        .map(|j| {
            let den = num_bigint::BigInt::from(n - 1) * num_traits::pow(num_bigint::BigInt::from(n), j as usize);
            (Rational::new(n - n0, den), n0.pow(j - 1))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    #[test]
    fn cantor_reference_values() {
        let g = cantor_gap_reference(3, 2, 2).unwrap();
        assert_eq!(
            g.entries,
            vec![GapEntry { value: r(1, 6), multiplicity: 1 }, GapEntry { value: r(1, 18), multiplicity: 2 }]
        );
        let g = cantor_gap_reference(5, 2, 1).unwrap();
        assert_eq!(g.entries, vec![GapEntry { value: r(3, 20), multiplicity: 1 }]);
        for n in 3..10u64 {
            let g = cantor_gap_reference(n, n - 1, 1).unwrap();
            assert_eq!(g.entries[0].value, r(1, (n * (n - 1)) as i64));
            assert_eq!(g.entries[0].multiplicity, n - 2);
        }
        assert!(cantor_gap_reference(3, 1, 2).is_err());
        assert!(cantor_gap_reference(3, 3, 2).is_err());
    }

    #[test]
    fn steps_to_gaps() {
        let g = gap_from_h(&cantor_step_function(3, 2, 4)).unwrap();
        assert_eq!(
            g.entries,
            vec![
                GapEntry { value: r(1, 6), multiplicity: 1 },
                GapEntry { value: r(1, 18), multiplicity: 2 },
                GapEntry { value: r(1, 54), multiplicity: 4 },
            ]
        );
        let g = gap_from_h(&[(r(1, 3), 1), (r(1, 9), 3)]).unwrap();
        assert_eq!(g.entries, vec![GapEntry { value: r(1, 3), multiplicity: 2 }]);
    }

    #[test]
    fn step_function_errors() {
        assert!(gap_from_h(&[]).is_err());
        assert!(gap_from_h(&[(r(1, 3), 2), (r(1, 9), 3)]).is_err());
        assert!(gap_from_h(&[(r(1, 3), 1), (r(1, 2), 3)]).is_err());
        assert!(gap_from_h(&[(r(1, 3), 1), (r(1, 9), 1)]).is_err());
    }

    #[test]
    fn round_trip_and_h() {
        let g = GapSequence::from_values(vec![r(1, 27), r(4, 27), r(1, 27)], GapSource::FiniteLevel { level: 3 });
        assert!(g.is_well_formed());
        assert_eq!(g.h_at(&r(1, 2)), 1);
        assert_eq!(g.h_at(&r(4, 27)), 1);
        assert_eq!(g.h_at(&r(1, 27)), 2);
        assert_eq!(g.h_at(&Rational::zero()), 4);
        assert_eq!(g.term(1), Some(&r(4, 27)));
        assert_eq!(g.term(3), Some(&r(1, 27)));
        assert_eq!(g.term(4), None);
        let back = gap_from_h(&g.step_function()).unwrap();
        assert_eq!(back.entries, g.entries);
        let empty = GapSequence::from_values(vec![], GapSource::FiniteLevel { level: 1 });
        assert!(gap_from_h(&empty.step_function()).unwrap().is_empty());
    }
}
