//! Digit sets, their combinatorial classification, and closed-form
//! dimension and exponent formulas.
//!
//! A digit `(i, j)` selects column `i` (x axis, base `n`) and row `j`
//! (y axis, base `m`, increasing upward). The map attached to a digit is
//! `x ↦ diag(1/n, 1/m)(x + (i, j))`.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative tolerance used when comparing real-valued dimensions/exponents.
pub const REAL_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum CarpetError {
    #[error("malformed digit-set description: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("cannot read digit-set file: {0}")]
    Io(#[from] std::io::Error),
    #[error("bases must satisfy n >= m >= 2 (got n = {n}, m = {m})")]
    Bases { n: u32, m: u32 },
    #[error("digit ({i}, {j}) lies outside {{0..{n}}} x {{0..{m}}}")]
    OutOfRange { i: u32, j: u32, n: u32, m: u32 },
    #[error("a carpet needs at least two digits (got {0})")]
    TooFewDigits(usize),
    #[error("duplicate digit ({0}, {1})")]
    Duplicate(u32, u32),
}

#[derive(Debug, Serialize, Deserialize)]
struct DigitSetJson {
    n: u32,
    m: u32,
    digits: Vec<[u32; 2]>,
}

/// The triple `(n, m, D)`. Digits are kept sorted by `(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DigitSet {
    n: u32,
    m: u32,
    digits: Vec<(u32, u32)>,
    // columns[j] = sorted {i : (i, j) in D}
    columns: Vec<Vec<u32>>,
}

impl DigitSet {
    pub fn new(n: u32, m: u32, digits: impl IntoIterator<Item = (u32, u32)>) -> Result<Self, CarpetError> {
        if m < 2 || n < m {
            return Err(CarpetError::Bases { n, m });
        }
        let mut seen = BTreeSet::new();
        for (i, j) in digits {
            if i >= n || j >= m {
                return Err(CarpetError::OutOfRange { i, j, n, m });
            }
            if !seen.insert((i, j)) {
                return Err(CarpetError::Duplicate(i, j));
            }
        }
        if seen.len() <= 1 {
            return Err(CarpetError::TooFewDigits(seen.len()));
        }
        let digits: Vec<_> = seen.into_iter().collect();
        let mut columns = vec![Vec::new(); m as usize];
        for &(i, j) in &digits {
            columns[j as usize].push(i);
        }
        Ok(Self { n, m, digits, columns })
    }

    /// Parses the canonical JSON form `{"n": .., "m": .., "digits": [[i, j], ..]}`.
    pub fn from_json(text: &str) -> Result<Self, CarpetError> {
        let raw: DigitSetJson = serde_json::from_str(text)?;
        Self::new(raw.n, raw.m, raw.digits.into_iter().map(|[i, j]| (i, j)))
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, CarpetError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        let raw = DigitSetJson { n: self.n, m: self.m, digits: self.digits.iter().map(|&(i, j)| [i, j]).collect() };
        serde_json::to_string(&raw).expect("digit set serializes")
    }

    /// `{0..n-1} x {0..m-1}`.
    pub fn full(n: u32, m: u32) -> Result<Self, CarpetError> {
        Self::new(n, m, (0..n).flat_map(|i| (0..m).map(move |j| (i, j))))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn digits(&self) -> &[(u32, u32)] {
        &self.digits
    }

    /// `N = #D`.
    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn contains(&self, i: u32, j: u32) -> bool {
        self.digits.binary_search(&(i, j)).is_ok()
    }

    /// Sorted columns selected in row `j`.
    pub fn row_columns(&self, j: u32) -> &[u32] {
        &self.columns[j as usize]
    }

    /// Sorted rows that contain at least one digit.
    pub fn occupied_rows(&self) -> Vec<u32> {
        (0..self.m).filter(|&j| !self.columns[j as usize].is_empty()).collect()
    }

    /// Image under `(i, j) ↦ (n-1-i, m-1-j)`.
    pub fn rotated(&self) -> Self {
        Self::new(self.n, self.m, self.digits.iter().map(|&(i, j)| (self.n - 1 - i, self.m - 1 - j)))
            .expect("rotation preserves validity")
    }

    /// Relabels columns by a permutation of `0..n`.
    pub fn with_columns_permuted(&self, perm: &[u32]) -> Self {
        assert_eq!(perm.len(), self.n as usize);
        Self::new(self.n, self.m, self.digits.iter().map(|&(i, j)| (perm[i as usize], j)))
            .expect("permutation preserves validity")
    }

    pub fn classify(&self) -> Classification {
        classify(self)
    }

    pub fn box_dimension(&self) -> f64 {
        box_dimension(self)
    }

    pub fn hausdorff_dimension(&self) -> f64 {
        hausdorff_dimension(self)
    }
}

impl fmt::Display for DigitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

/// Product structure of a linear digit set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Linearity {
    /// `D = A x {0..m-1}`.
    Columns { columns: Vec<u32> },
    /// `D = {0..n-1} x B`.
    Rows { rows: Vec<u32> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Bottom,
    Top,
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    /// `N`.
    pub digit_count: usize,
    /// `M`, the number of nonempty rows.
    pub nonempty_rows: usize,
    /// `M_j` for `j = 0..m`.
    pub row_counts: Vec<usize>,
    pub empty_rows: Vec<u32>,
    pub is_linear: bool,
    pub linearity: Option<Linearity>,
    pub is_one_sided: bool,
    pub one_sided: Option<Side>,
    pub has_full_rows: bool,
}

impl Classification {
    pub fn is_full(&self, ds: &DigitSet) -> bool {
        self.digit_count == (ds.n() as usize) * (ds.m() as usize)
    }
}

pub fn classify(ds: &DigitSet) -> Classification {
    let (n, m) = (ds.n(), ds.m());
    let row_counts: Vec<usize> = (0..m).map(|j| ds.row_columns(j).len()).collect();
    let empty_rows: Vec<u32> = (0..m).filter(|&j| row_counts[j as usize] == 0).collect();
    let nonempty_rows = m as usize - empty_rows.len();

    let first = ds.row_columns(0);
    let column_form = (1..m).all(|j| ds.row_columns(j) == first);
    let row_form = row_counts.iter().all(|&c| c == 0 || c == n as usize);
    let linearity = if column_form {
        Some(Linearity::Columns { columns: first.to_vec() })
    } else if row_form {
        Some(Linearity::Rows { rows: ds.occupied_rows() })
    } else {
        None
    };

    let one_sided = if ds.digits().iter().all(|&(_, j)| j == 0) {
        Some(Side::Bottom)
    } else if ds.digits().iter().all(|&(_, j)| j == m - 1) {
        Some(Side::Top)
    } else if ds.digits().iter().all(|&(i, _)| i == 0) {
        Some(Side::Left)
    } else if ds.digits().iter().all(|&(i, _)| i == n - 1) {
        Some(Side::Right)
    } else {
        None
    };

    Classification {
        digit_count: ds.len(),
        nonempty_rows,
        row_counts,
        empty_rows,
        is_linear: linearity.is_some(),
        linearity,
        is_one_sided: one_sided.is_some(),
        one_sided,
        has_full_rows: nonempty_rows == m as usize,
    }
}

/// `(log N - log M)/log n + log M/log m`.
pub fn box_dimension(ds: &DigitSet) -> f64 {
    let cls = classify(ds);
    let (n, m) = (ds.n() as f64, ds.m() as f64);
    let big_n = cls.digit_count as f64;
    let big_m = cls.nonempty_rows as f64;
    if ds.n() == ds.m() {
        return big_n.ln() / n.ln();
    }
    (big_n.ln() - big_m.ln()) / n.ln() + big_m.ln() / m.ln()
}

/// `log_m Σ_j M_j^(log m / log n)` over the nonempty rows.
pub fn hausdorff_dimension(ds: &DigitSet) -> f64 {
    let (n, m) = (ds.n() as f64, ds.m() as f64);
    let theta = m.ln() / n.ln();
    let sum: f64 = classify(ds).row_counts.iter().filter(|&&c| c > 0).map(|&c| (c as f64).powf(theta)).sum();
    sum.ln() / m.ln()
}

/// Number of connected components of the limit set, as far as it is known.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cardinality {
    Finite(u64),
    Infinite,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExponentCase {
    Linear,
    NonlinearFullRows,
    NonlinearPartialRows,
    Undefined,
}

/// `γ` with `h(δ) ≍ δ^-γ`, equivalently `g_k ≍ k^(-1/γ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PredictedExponent {
    pub gamma: Option<f64>,
    pub case: ExponentCase,
}

impl PredictedExponent {
    pub const UNDEFINED: Self = Self { gamma: None, case: ExponentCase::Undefined };

    pub fn is_defined(&self) -> bool {
        self.gamma.is_some()
    }
}

pub fn predicted_exponent(cls: &Classification, ds: &DigitSet, cardinality: Cardinality) -> PredictedExponent {
    if cardinality != Cardinality::Infinite {
        return PredictedExponent::UNDEFINED;
    }
    let bdim = box_dimension(ds);
    let (gamma, case) = if cls.is_linear {
        (bdim - 1.0, ExponentCase::Linear)
    } else if cls.has_full_rows {
        ((cls.digit_count as f64).ln() / (ds.n() as f64).ln(), ExponentCase::NonlinearFullRows)
    } else {
        (bdim, ExponentCase::NonlinearPartialRows)
    };
    PredictedExponent { gamma: Some(gamma), case }
}

/// `|a - b| <= REAL_TOLERANCE * max(|a|, |b|, 1)`.
pub fn reals_agree(a: f64, b: f64) -> bool {
    (a - b).abs() <= REAL_TOLERANCE * a.abs().max(b.abs()).max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d1() -> DigitSet {
        DigitSet::from_json(r#"{"n":9,"m":3,"digits":[[1,0],[3,0],[8,0],[8,1],[0,2],[2,2],[4,2],[8,2]]}"#).unwrap()
    }

    fn d2() -> DigitSet {
        let mut digits: Vec<_> = (0..9).map(|i| (i, 0)).collect();
        digits.extend([(0, 2), (2, 2), (4, 2)]);
        DigitSet::new(9, 3, digits).unwrap()
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(matches!(DigitSet::from_json(r#"{"n":3,"m":2,"digits":[[0,0]]}"#), Err(CarpetError::TooFewDigits(1))));
        assert!(matches!(
            DigitSet::from_json(r#"{"n":3,"m":4,"digits":[[0,0],[1,1]]}"#),
            Err(CarpetError::Bases { n: 3, m: 4 })
        ));
        assert!(matches!(
            DigitSet::from_json(r#"{"n":3,"m":2,"digits":[[0,0],[3,1]]}"#),
            Err(CarpetError::OutOfRange { .. })
        ));
        assert!(matches!(
            DigitSet::from_json(r#"{"n":3,"m":2,"digits":[[0,0],[0,0],[1,1]]}"#),
            Err(CarpetError::Duplicate(0, 0))
        ));
        assert!(matches!(DigitSet::from_json(r#"{"n":3,"m":2,"digits":"#), Err(CarpetError::Syntax(_))));
    }

    #[test]
    fn parse_is_order_and_whitespace_insensitive() {
        let a = DigitSet::from_json(r#"{"n":7,"m":3,"digits":[[3,1],[0,0]]}"#).unwrap();
        let b = DigitSet::from_json("{ \"digits\" : [ [0, 0],\n [3, 1] ], \"m\": 3, \"n\": 7 }").unwrap();
        assert_eq!(a, b);
        assert_eq!(DigitSet::from_json(&a.to_json()).unwrap(), a);
    }

    #[test]
    fn classify_d1() {
        let c = d1().classify();
        assert_eq!(c.digit_count, 8);
        assert_eq!(c.nonempty_rows, 3);
        assert_eq!(c.row_counts, vec![3, 1, 4]);
        assert!(c.has_full_rows);
        assert!(!c.is_linear);
        assert!(!c.is_one_sided);
        assert!(c.empty_rows.is_empty());
    }

    #[test]
    fn classify_full_square() {
        let ds = DigitSet::full(5, 3).unwrap();
        let c = ds.classify();
        assert!(c.is_linear && c.is_full(&ds));
        assert_eq!(c.nonempty_rows, 3);
        assert!(c.empty_rows.is_empty());
    }

    #[test]
    fn classify_sparse_pair() {
        let ds = DigitSet::new(7, 3, [(0, 0), (3, 1)]).unwrap();
        let c = ds.classify();
        assert_eq!((c.digit_count, c.nonempty_rows), (2, 2));
        assert_eq!(c.empty_rows, vec![2]);
        assert!(!c.is_linear && !c.is_one_sided);
    }

    #[test]
    fn linearity_both_orientations() {
        let cols = DigitSet::new(7, 3, [0, 3].iter().flat_map(|&i| (0..3).map(move |j| (i, j)))).unwrap();
        assert_eq!(cols.classify().linearity, Some(Linearity::Columns { columns: vec![0, 3] }));
        let rows = DigitSet::new(4, 3, (0..4).flat_map(|i| [(i, 0), (i, 2)])).unwrap();
        assert_eq!(rows.classify().linearity, Some(Linearity::Rows { rows: vec![0, 2] }));
    }

    #[test]
    fn one_sided_reports_side() {
        let ds = DigitSet::new(4, 3, [(3, 0), (3, 2)]).unwrap();
        assert_eq!(ds.classify().one_sided, Some(Side::Right));
        let ds = DigitSet::new(4, 3, [(0, 2), (2, 2)]).unwrap();
        assert_eq!(ds.classify().one_sided, Some(Side::Top));
    }

    #[test]
    fn dimensions_of_reference_sets() {
        // n = 7, m = 3, N = 6, M = 3
        let e1 = DigitSet::new(7, 3, [(0, 0), (3, 0), (1, 1), (5, 1), (2, 2), (6, 2)]).unwrap();
        assert!((e1.box_dimension() - (1.0 + 2f64.ln() / 7f64.ln())).abs() < 1e-12);
        assert!((DigitSet::full(4, 3).unwrap().box_dimension() - 2.0).abs() < 1e-12);
        assert!((DigitSet::full(4, 3).unwrap().hausdorff_dimension() - 2.0).abs() < 1e-12);
        let expected_box = 24f64.ln() / (2.0 * 3f64.ln());
        assert!((d2().box_dimension() - expected_box).abs() < 1e-12);
        assert!((d1().box_dimension() - expected_box).abs() < 1e-12);
        assert!((expected_box - 1.446_395).abs() < 1e-6);
        let expected_h = (3.0 + 3f64.sqrt()).ln() / 3f64.ln();
        assert!((d1().hausdorff_dimension() - expected_h).abs() < 1e-12);
        assert!((d2().hausdorff_dimension() - expected_h).abs() < 1e-12);
        assert!((expected_h - 1.414_838).abs() < 1e-6);
        let segment = DigitSet::new(2, 2, [(0, 0), (0, 1)]).unwrap();
        assert!((segment.hausdorff_dimension() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn predicted_exponents() {
        let e1 = DigitSet::new(7, 3, [(0, 0), (3, 0), (1, 1), (5, 1), (2, 2), (6, 2)]).unwrap();
        let p = predicted_exponent(&e1.classify(), &e1, Cardinality::Infinite);
        assert_eq!(p.case, ExponentCase::NonlinearFullRows);
        assert!((p.gamma.unwrap() - 6f64.ln() / 7f64.ln()).abs() < 1e-12);

        let e3 = DigitSet::new(7, 3, [0, 3].iter().flat_map(|&i| (0..3).map(move |j| (i, j)))).unwrap();
        let p = predicted_exponent(&e3.classify(), &e3, Cardinality::Infinite);
        assert_eq!(p.case, ExponentCase::Linear);
        assert!((p.gamma.unwrap() - 2f64.ln() / 7f64.ln()).abs() < 1e-12);

        let full = DigitSet::full(3, 3).unwrap();
        assert_eq!(predicted_exponent(&full.classify(), &full, Cardinality::Finite(1)), PredictedExponent::UNDEFINED);
        assert_eq!(predicted_exponent(&e1.classify(), &e1, Cardinality::Unknown), PredictedExponent::UNDEFINED);

        let d2 = d2();
        let p = predicted_exponent(&d2.classify(), &d2, Cardinality::Infinite);
        assert_eq!(p.case, ExponentCase::NonlinearPartialRows);
        assert!(reals_agree(p.gamma.unwrap(), d2.box_dimension()));
    }
}
