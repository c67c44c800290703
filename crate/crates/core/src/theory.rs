//! Executable verdicts built on the exponent formulas: whether two
//! carpets have comparable gap sequences, and a side-by-side report for a
//! pair that states the resulting Lipschitz non-equivalence when it applies.
//!
//! Gap sequences are comparable exactly when the exponents `γ` agree.
//! Equality of two log-ratios is certified in integers only for the
//! families listed in [`certify_equal`]; anything else is decided in
//! floating point and flagged as a near tie if it lands within tolerance.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::carpet::{
    predicted_exponent, reals_agree, Cardinality, Classification, DigitSet, ExponentCase, Linearity, PredictedExponent,
};
use crate::connectivity::{infer_component_cardinality, CardinalityVerdict};
use crate::grid::Caps;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparability {
    Comparable,
    NotComparable,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparabilityVerdict {
    pub verdict: Comparability,
    pub gamma_pair: (PredictedExponent, PredictedExponent),
    /// Which rule decided the verdict.
    pub basis: String,
    /// Integer identity proving `γ_1 = γ_2`, when one applies.
    pub exact_witness: Option<String>,
    /// Equal in floating point without an integer certificate.
    pub near_tie: bool,
}

fn case_name(case: ExponentCase) -> &'static str {
    match case {
        ExponentCase::Linear => "linear",
        ExponentCase::NonlinearFullRows => "nonlinear with full rows",
        ExponentCase::NonlinearPartialRows => "nonlinear with an empty row",
        ExponentCase::Undefined => "undefined",
    }
}

/// Integer certificate that two defined exponents coincide.
fn certify_equal(
    (a, ca, pa): (&DigitSet, &Classification, &PredictedExponent),
    (b, cb, pb): (&DigitSet, &Classification, &PredictedExponent),
) -> Option<String> {
    let same_bases = a.n() == b.n() && a.m() == b.m();
    if same_bases && pa.case == pb.case && ca.digit_count == cb.digit_count && ca.nonempty_rows == cb.nonempty_rows {
        return Some(format!(
            "same (n, m, N, M) = ({}, {}, {}, {}) and same branch",
            a.n(),
            a.m(),
            ca.digit_count,
            ca.nonempty_rows
        ));
    }
    let m = a.m() as u64;
    if same_bases
        && a.n() as u64 == m * m
        && pa.case == ExponentCase::NonlinearPartialRows
        && pb.case == ExponentCase::NonlinearPartialRows
        && ca.nonempty_rows * ca.digit_count == cb.nonempty_rows * cb.digit_count
    {
        return Some(format!(
            "n = m^2 and M1*N1 = {}*{} = {} = {}*{} = M2*N2",
            ca.nonempty_rows,
            ca.digit_count,
            ca.nonempty_rows * ca.digit_count,
            cb.nonempty_rows,
            cb.digit_count
        ));
    }
    match (&ca.linearity, &cb.linearity) {
        (Some(Linearity::Columns { columns: x }), Some(Linearity::Columns { columns: y }))
            if a.n() == b.n() && x.len() == y.len() && pa.case == ExponentCase::Linear =>
        {
            Some(format!("linear column products over n = {} with #A1 = #A2 = {}", a.n(), x.len()))
        }
        (Some(Linearity::Rows { rows: x }), Some(Linearity::Rows { rows: y }))
            if a.m() == b.m() && x.len() == y.len() && pa.case == ExponentCase::Linear =>
        {
            Some(format!("linear row products over m = {} with #B1 = #B2 = {}", a.m(), x.len()))
        }
        _ => None,
    }
}

pub fn comparability_verdict(
    ds1: &DigitSet,
    ds2: &DigitSet,
    card1: Cardinality,
    card2: Cardinality,
) -> ComparabilityVerdict {
    let (c1, c2) = (ds1.classify(), ds2.classify());
    let p1 = predicted_exponent(&c1, ds1, card1);
    let p2 = predicted_exponent(&c2, ds2, card2);
    let gamma_pair = (p1, p2);
    let (Some(g1), Some(g2)) = (p1.gamma, p2.gamma) else {
        return ComparabilityVerdict {
            verdict: Comparability::Unknown,
            gamma_pair,
            basis: format!("exponents need infinitely many components on both sides (got {card1:?} and {card2:?})"),
            exact_witness: None,
            near_tie: false,
        };
    };
    let branches = format!("{} vs {}", case_name(p1.case), case_name(p2.case));
    let full_rows_rule = !c1.is_linear && !c2.is_linear && c1.has_full_rows != c2.has_full_rows;
    if let Some(witness) = certify_equal((ds1, &c1, &p1), (ds2, &c2, &p2)) {
        debug_assert!(reals_agree(g1, g2));
        return ComparabilityVerdict {
            verdict: Comparability::Comparable,
            gamma_pair,
            basis: format!("{branches}: exponents equal by integer identity"),
            exact_witness: Some(witness),
            near_tie: false,
        };
    }
    if reals_agree(g1, g2) {
        return ComparabilityVerdict {
            verdict: Comparability::Comparable,
            gamma_pair,
            basis: format!("{branches}: exponents agree to relative 1e-12 without an integer certificate"),
            exact_witness: None,
            near_tie: true,
        };
    }
    let basis = if full_rows_rule {
        format!("{branches}: nonlinear pair where exactly one has full rows; exponents differ ({g1:.12} vs {g2:.12})")
    } else {
        format!("{branches}: exponents differ ({g1:.12} vs {g2:.12})")
    };
    ComparabilityVerdict {
        verdict: Comparability::NotComparable,
        gamma_pair,
        basis,
        exact_witness: None,
        near_tie: false,
    }
}

/// `Σ_j √M_j` in the canonical form `a + Σ c_b √b` with `b` squarefree.
fn sqrt_sum_form(row_counts: &[usize]) -> BTreeMap<u64, u64> {
    let mut form = BTreeMap::new();
    for &c in row_counts.iter().filter(|&&c| c > 0) {
        let (mut outside, mut inside) = (1u64, c as u64);
        let mut f = 2;
        while f * f <= inside {
            while inside % (f * f) == 0 {
                inside /= f * f;
                outside *= f;
            }
            f += 1;
        }
        *form.entry(inside).or_insert(0) += outside;
    }
    form
}

fn format_sqrt_form(form: &BTreeMap<u64, u64>) -> String {
    form.iter()
        .map(|(&radicand, &coef)| match (radicand, coef) {
            (1, c) => c.to_string(),
            (r, 1) => format!("√{r}"),
            (r, c) => format!("{c}√{r}"),
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CarpetFacts {
    pub digit_set: String,
    pub classification: Classification,
    pub box_dimension: f64,
    pub hausdorff_dimension: f64,
    /// `M * N`.
    pub rows_times_digits: usize,
    /// `Σ_j M_j^(log m / log n)` written out.
    pub hausdorff_sum: String,
    pub cardinality: CardinalityVerdict,
    pub predicted: PredictedExponent,
}

impl CarpetFacts {
    fn gather(ds: &DigitSet, k_max: u32, caps: &Caps) -> Self {
        let classification = ds.classify();
        let cardinality = infer_component_cardinality(ds, &classification, k_max, caps);
        let predicted = predicted_exponent(&classification, ds, cardinality.verdict);
        let exponent = if ds.n() as u64 == (ds.m() as u64).pow(2) {
            "1/2".to_string()
        } else {
            format!("log {}/log {}", ds.m(), ds.n())
        };
        let terms: Vec<String> =
            classification.row_counts.iter().filter(|&&c| c > 0).map(|c| format!("{c}^({exponent})")).collect();
        Self {
            digit_set: ds.to_json(),
            box_dimension: ds.box_dimension(),
            hausdorff_dimension: ds.hausdorff_dimension(),
            rows_times_digits: classification.nonempty_rows * classification.digit_count,
            hausdorff_sum: terms.join(" + "),
            classification,
            cardinality,
            predicted,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LipschitzReport {
    pub a: CarpetFacts,
    pub b: CarpetFacts,
    pub equal_box_dimension: bool,
    pub box_dimension_witness: Option<String>,
    pub equal_hausdorff_dimension: bool,
    pub hausdorff_dimension_witness: Option<String>,
    pub full_rows: (bool, bool),
    pub comparability: ComparabilityVerdict,
    pub conclusion: String,
}

/// Side-by-side comparison of two carpets. Never claims Lipschitz
/// equivalence; only non-equivalence follows from non-comparable gaps.
pub fn lipschitz_report(ds1: &DigitSet, ds2: &DigitSet, k_max: u32, caps: &Caps) -> LipschitzReport {
    let a = CarpetFacts::gather(ds1, k_max, caps);
    let b = CarpetFacts::gather(ds2, k_max, caps);
    let same_bases = ds1.n() == ds2.n() && ds1.m() == ds2.m();

    let (ca, cb) = (&a.classification, &b.classification);
    let box_dimension_witness =
        if same_bases && ca.digit_count == cb.digit_count && ca.nonempty_rows == cb.nonempty_rows {
            Some(format!("same (n, m, N, M) = ({}, {}, {}, {})", ds1.n(), ds1.m(), ca.digit_count, ca.nonempty_rows))
        } else if same_bases && ds1.n() as u64 == (ds1.m() as u64).pow(2) && a.rows_times_digits == b.rows_times_digits
        {
            Some(format!(
                "n = m^2 and M1*N1 = {}*{} = {} = {}*{} = M2*N2",
                ca.nonempty_rows, ca.digit_count, a.rows_times_digits, cb.nonempty_rows, cb.digit_count
            ))
        } else {
            None
        };
    let equal_box_dimension = box_dimension_witness.is_some() || reals_agree(a.box_dimension, b.box_dimension);

    let mut sorted_a: Vec<_> = ca.row_counts.iter().copied().filter(|&c| c > 0).collect();
    let mut sorted_b: Vec<_> = cb.row_counts.iter().copied().filter(|&c| c > 0).collect();
    sorted_a.sort_unstable();
    sorted_b.sort_unstable();
    let hausdorff_dimension_witness = if same_bases && sorted_a == sorted_b {
        Some(format!("same multiset of nonzero row counts {sorted_a:?}"))
    } else if same_bases && ds1.n() as u64 == (ds1.m() as u64).pow(2) {
        let (fa, fb) = (sqrt_sum_form(&ca.row_counts), sqrt_sum_form(&cb.row_counts));
        (fa == fb).then(|| format!("Σ_j √M_j = {} for both", format_sqrt_form(&fa)))
    } else {
        None
    };
    let equal_hausdorff_dimension =
        hausdorff_dimension_witness.is_some() || reals_agree(a.hausdorff_dimension, b.hausdorff_dimension);

    let comparability = comparability_verdict(ds1, ds2, a.cardinality.verdict, b.cardinality.verdict);
    let conclusion = match comparability.verdict {
        Comparability::NotComparable => {
            "gap sequences are not comparable, so the carpets are not Lipschitz equivalent".to_string()
        }
        Comparability::Comparable => {
            "gap sequences are comparable; this does not decide Lipschitz equivalence".to_string()
        }
        Comparability::Unknown => {
            "comparability undetermined: both carpets need infinitely many components".to_string()
        }
    };
    LipschitzReport {
        full_rows: (ca.has_full_rows, cb.has_full_rows),
        a,
        b,
        equal_box_dimension,
        box_dimension_witness,
        equal_hausdorff_dimension,
        hausdorff_dimension_witness,
        comparability,
        conclusion,
    }
}
