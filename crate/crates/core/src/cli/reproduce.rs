//! The acceptance suite as data: each criterion runs its computation and
//! returns rows of measured value, expected value, tolerance and verdict.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::carpet::{predicted_exponent, Cardinality, DigitSet};
use crate::connectivity::{
    count_components, find_csc_certificate, infer_component_cardinality, verify_certificate, Domain,
};
use crate::corpus;
use crate::gaps::{
    cantor_gap_reference, cantor_step_function, collect_samples, component_gap_sequence, fit_h_exponent, gap_from_h,
    h_bracket, liberal_reach, GapError, Rational, SampleSchedule,
};
use crate::grid::{Caps, LevelSize};
use crate::oracle;
use crate::theory::{comparability_verdict, lipschitz_report, Comparability};

pub const CRITERIA: [u32; 8] = [1, 2, 3, 4, 5, 6, 7, 8];

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub criterion: u32,
    pub label: String,
    pub measured: String,
    pub expected: String,
    pub tolerance: String,
    pub pass: bool,
    /// Wall time of the row; omitted from deterministic output.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
    #[serde(skip)]
    pub elapsed: Duration,
    #[serde(skip)]
    pub limit: Duration,
}

impl Outcome {
    fn new(criterion: u32, label: &str, measured: String, expected: String, tolerance: &str, ok: bool) -> Self {
        Self {
            criterion,
            label: label.to_string(),
            measured,
            expected,
            tolerance: tolerance.to_string(),
            pass: ok,
            elapsed_ms: None,
            elapsed: Duration::ZERO,
            limit: Duration::MAX,
        }
    }

    pub fn within_limit(&self) -> bool {
        self.elapsed <= self.limit
    }

    /// One line for a terminal table.
    pub fn line(&self) -> String {
        format!(
            "criterion {} [{}] {}: measured {} | expected {} | tol {} | {:.2}s",
            self.criterion,
            if self.pass { "PASS" } else { "FAIL" },
            self.label,
            self.measured,
            self.expected,
            self.tolerance,
            self.elapsed.as_secs_f64()
        )
    }
}

/// Runs `body` and stamps every returned row with its share of the time and
/// the criterion's limit; a row over the limit fails.
fn timed(limit_secs: u64, body: impl FnOnce() -> Vec<Outcome>) -> Vec<Outcome> {
    let start = Instant::now();
    let mut rows = body();
    let elapsed = start.elapsed();
    for row in &mut rows {
        row.elapsed = elapsed;
        row.limit = Duration::from_secs(limit_secs);
        row.pass &= row.within_limit();
    }
    rows
}

fn caps() -> Caps {
    Caps::with_max_cells(u64::MAX / 4)
}

fn load(name: &str) -> DigitSet {
    corpus::load(name).expect("shipped corpus entry")
}

fn component_counts(ds: &DigitSet, levels: std::ops::RangeInclusive<u32>) -> Vec<u64> {
    levels
        .map(|k| count_components(ds, k, Domain::Plain, &caps()).map(|s| s.component_count).unwrap_or(u64::MAX))
        .collect()
}

pub fn cantor_gaps() -> Vec<Outcome> {
    timed(5, || {
        let (k, n) = (8u32, 3u64);
        let reference = cantor_gap_reference(n, 2, 6).expect("valid parameters");
        let mut ok_ref = reference.entries.iter().enumerate().all(|(i, e)| {
            let j = i as u32 + 1;
            e.value == Rational::new(1, 2 * n.pow(j)) && e.multiplicity == 2u64.pow(j) - 2u64.pow(j - 1)
        });
        ok_ref &= gap_from_h(&cantor_step_function(n, 2, 7)).map(|g| g.entries == reference.entries).unwrap_or(false);

        let gaps = component_gap_sequence(&load("cantor_product"), k, &caps());
        let (matched, total) = match &gaps {
            Ok(g) => {
                let bound = Rational::inverse_power(n, k) / Rational::from_integer(2);
                let matched = (1..=7u32)
                    .filter(|&j| {
                        let Some(e) = g.entries.get(j as usize - 1) else { return false };
                        let expected =
                            (Rational::inverse_power(n, j) - Rational::inverse_power(n, k)) / Rational::from_integer(2);
                        let limit = Rational::inverse_power(n, j) / Rational::from_integer(2);
                        let err = if limit > e.value { &limit - &e.value } else { &e.value - &limit };
                        e.value == expected && e.multiplicity == 2u64.pow(j - 1) && err <= bound
                    })
                    .count();
                (matched, g.entries.len())
            }
            Err(_) => (0, 0),
        };
        vec![
            Outcome::new(
                1,
                "Cantor reference gaps j<=6",
                format!("formula and step-function multiplicities {}", if ok_ref { "agree" } else { "disagree" }),
                "δ_j = 1/(2·3^j), multiplicity 2^(j-1)".into(),
                "exact",
                ok_ref,
            ),
            Outcome::new(
                1,
                "Cantor product level-8 gaps",
                format!("{matched}/7 values match, {total} distinct values"),
                "(3^-j - 3^-8)/2 with multiplicity 2^(j-1), j=1..7".into(),
                "exact; |g_j - δ_j| <= 3^-8/2",
                matched == 7 && total == 7,
            ),
        ]
    })
}

pub fn linear_growth() -> Vec<Outcome> {
    timed(30, || {
        let counts = component_counts(&load("e3_standin"), 1..=6);
        let expected: Vec<u64> = (1..=6).map(|k| 1 << k).collect();
        vec![Outcome::new(
            2,
            "{0,3}x{0,1,2} n=7 m=3",
            format!("{counts:?}"),
            format!("{expected:?}"),
            "exact",
            counts == expected,
        )]
    })
}

pub fn strong_separation() -> Vec<Outcome> {
    timed(10, || {
        let ds = load("strong_separation");
        let counts = component_counts(&ds, 1..=10);
        let expected: Vec<u64> = (1..=10).map(|k| 1 << k).collect();
        let cert = find_csc_certificate(&ds, 1, &caps()).ok().flatten();
        let verdict = infer_component_cardinality(&ds, &ds.classify(), 1, &caps()).verdict;
        vec![
            Outcome::new(
                3,
                "#C(Q_k), k=1..10",
                format!("{counts:?}"),
                format!("{expected:?}"),
                "exact",
                counts == expected,
            ),
            Outcome::new(
                3,
                "certificate and cardinality",
                format!("certificate level {:?}, {verdict:?}", cert.as_ref().map(|c| c.level)),
                "certificate level Some(1), Infinite".into(),
                "exact",
                cert.is_some_and(|c| c.level == 1) && verdict == Cardinality::Infinite,
            ),
        ]
    })
}

pub fn example_pair() -> Vec<Outcome> {
    timed(1, || {
        let (d1, d2) = (load("d1"), load("d2"));
        let report = lipschitz_report(&d1, &d2, 3, &caps());
        let (c1, c2) = (&report.a.classification, &report.b.classification);
        let counts = (c1.digit_count, c1.nonempty_rows, c2.digit_count, c2.nonempty_rows);
        let bdim = 24f64.ln() / (2.0 * 3f64.ln());
        let hdim = (3.0 + 3f64.sqrt()).ln() / 3f64.ln();
        let box_err = (report.a.box_dimension - bdim).abs().max((report.b.box_dimension - bdim).abs());
        let h_err = (report.a.hausdorff_dimension - hdim).abs().max((report.b.hausdorff_dimension - hdim).abs());
        let q1 = count_components(&d1, 1, Domain::Plain, &caps()).map(|s| s.component_count).unwrap_or(0);
        vec![
            Outcome::new(
                4,
                "(N1, M1, N2, M2)",
                format!("{counts:?}"),
                "(8, 3, 12, 2)".into(),
                "exact",
                counts == (8, 3, 12, 2),
            ),
            Outcome::new(
                4,
                "box dimensions",
                format!("max error {box_err:.2e}, witness {:?}", report.box_dimension_witness),
                format!("{bdim:.12}"),
                "1e-12",
                box_err < 1e-12 && report.equal_box_dimension && report.box_dimension_witness.is_some(),
            ),
            Outcome::new(
                4,
                "Hausdorff dimensions",
                format!("max error {h_err:.2e}, witness {:?}", report.hausdorff_dimension_witness),
                format!("{hdim:.12}"),
                "1e-12",
                h_err < 1e-12 && report.equal_hausdorff_dimension,
            ),
            Outcome::new(
                4,
                "full rows, verdict, conclusion",
                format!("{:?}, {:?}, \"{}\"", report.full_rows, report.comparability.verdict, report.conclusion),
                "(true, false), NotComparable, not Lipschitz equivalent".into(),
                "exact",
                report.full_rows == (true, false)
                    && report.comparability.verdict == Comparability::NotComparable
                    && report.conclusion.contains("not Lipschitz equivalent"),
            ),
            Outcome::new(4, "#C(Q_1) for D1", q1.to_string(), "6".into(), "exact", q1 == 6),
        ]
    })
}

pub fn csc_growth_bounds() -> Vec<Outcome> {
    timed(600, || {
        ["d1", "d2"]
            .iter()
            .map(|&name| {
                let ds = load(name);
                let n = ds.len() as u64;
                let k0 = (1..=5).find(|&k| oracle::has_csc_brute(&ds, k));
                let cert = find_csc_certificate(&ds, 5, &caps()).ok().flatten();
                let cert_ok = match (&cert, k0) {
                    (Some(c), Some(k0)) => c.level == k0 && verify_certificate(&ds, c),
                    _ => false,
                };
                let k0v = k0.unwrap_or(6);
                let counts = component_counts(&ds, k0v + 1..=6);
                let bounds_ok = counts.iter().zip(k0v + 1..=6).all(|(&c, k)| n.pow(k - k0v) <= c && c <= n.pow(k));
                Outcome::new(
                    5,
                    &format!("{name}: N^(k-k0) <= #C(Q_k) <= N^k"),
                    format!("k0 = {k0:?} (library {:?}), counts k0+1..6 = {counts:?}", cert.map(|c| c.level)),
                    format!("k0 <= 5, bounds with N = {n}"),
                    "exact",
                    cert_ok && k0.is_some() && bounds_ok,
                )
            })
            .collect()
    })
}

fn fit_row(name: &str, label: &str, schedule: SampleSchedule, tol: f64) -> Outcome {
    let ds = load(name);
    let verdict = infer_component_cardinality(&ds, &ds.classify(), 3, &caps()).verdict;
    let predicted = predicted_exponent(&ds.classify(), &ds, verdict);
    let expected = predicted.gamma.map_or("undefined".into(), |g| format!("{g:.6}"));
    let tolerance = format!("{:.0}% relative", tol * 100.0);
    let result = collect_samples(&ds, &schedule, &caps()).and_then(|s| fit_h_exponent(&s, Some(predicted)));
    match result {
        Ok(r) => {
            let err = r.relative_error.unwrap_or(f64::INFINITY);
            Outcome::new(
                6,
                label,
                format!("γ = {:.6} ± {:.3} from {} tight samples", r.fitted_gamma, r.stderr, r.tight_samples),
                expected,
                &tolerance,
                err <= tol,
            )
        }
        Err(e) => Outcome::new(6, label, format!("no fit: {e}"), expected, &tolerance, false),
    }
}

pub fn exponent_fits() -> Vec<Outcome> {
    timed(900, || {
        vec![
            fit_row(
                "d2",
                "D2, δ = 9^-k, k=1..5, L = k+2",
                SampleSchedule { base: 9, k_min: 1, k_max: 5, level_scale: 1, level_offset: 2 },
                0.15,
            ),
            fit_row(
                "strong_separation",
                "strong separation, δ = 9^-k, k=1..5, L = 2k+2",
                SampleSchedule { base: 9, k_min: 1, k_max: 5, level_scale: 2, level_offset: 2 },
                0.15,
            ),
        ]
    })
}

/// Random digit set with `n <= 5`, `m <= 4`, `2 <= N <= 8`.
pub fn random_digit_set(rng: &mut impl Rng) -> DigitSet {
    let n = rng.gen_range(2..=5u32);
    let m = rng.gen_range(2..=n.min(4));
    let mut all: Vec<(u32, u32)> = (0..n).flat_map(|i| (0..m).map(move |j| (i, j))).collect();
    all.shuffle(rng);
    let count = rng.gen_range(2..=all.len().min(8));
    DigitSet::new(n, m, all.into_iter().take(count)).expect("valid by construction")
}

fn oracle_deltas(ds: &DigitSet, rng: &mut impl Rng) -> Vec<Rational> {
    let (n, m) = (ds.n() as i64, ds.m() as i64);
    let mut deltas = vec![
        Rational::new(1, 2),
        Rational::new(1, n),
        Rational::new(1, m),
        Rational::new(1, n * m),
        Rational::new(1, m * m * m),
    ];
    deltas.push(Rational::new(rng.gen_range(1..=20i64), rng.gen_range(20..=200i64)));
    deltas
}

pub fn oracle_equivalence() -> Vec<Outcome> {
    timed(120, || {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let (mut ccl_bad, mut bracket_bad, mut trip_bad, mut mst_bad, mut checks) = (0, 0, 0, 0, 0);
        for _ in 0..50 {
            let ds = random_digit_set(&mut rng);
            for k in 1..=3 {
                let cells = oracle::cells_by_words(&ds, k);
                checks += 1;
                let streamed = count_components(&ds, k, Domain::Plain, &caps()).map(|s| s.component_count);
                ccl_bad += usize::from(streamed != Ok(oracle::flood_fill_count(&cells)));

                let size = LevelSize::new(&ds, k).expect("k >= 1");
                for delta in oracle_deltas(&ds, &mut rng) {
                    let b = h_bracket(&ds, k, &delta, &caps()).expect("within caps");
                    let low = liberal_reach(&delta, &size);
                    let conservative = &delta - &Rational::new(2, size.rows);
                    let high = if conservative.is_positive() {
                        let r = liberal_reach(&conservative, &size);
                        oracle::closure_count(&cells, r.dx, r.dy)
                    } else {
                        cells.len() as u64
                    };
                    bracket_bad +=
                        usize::from(b.h_low != oracle::closure_count(&cells, low.dx, low.dy) || b.h_high != high);
                }

                match component_gap_sequence(&ds, k, &caps()) {
                    Ok(g) => {
                        trip_bad +=
                            usize::from(gap_from_h(&g.step_function()).map(|t| t.entries) != Ok(g.entries.clone()));
                        mst_bad += usize::from(g.entries != oracle::brute_gap_sequence(&ds, k).entries);
                    }
                    Err(_) => trip_bad += 1,
                }
            }
        }
        let row = |label: &str, bad: usize, what: &str| {
            Outcome::new(7, label, format!("{bad} mismatches in {checks} levels"), what.into(), "exact", bad == 0)
        };
        vec![
            row("streaming CCL vs flood fill", ccl_bad, "0 mismatches"),
            row("h bracket vs pairwise closure", bracket_bad, "0 mismatches"),
            row("gap_from_h round trip", trip_bad, "identity"),
            row("component MST vs cell-level Kruskal", mst_bad, "0 mismatches"),
        ]
    })
}

fn largest_level(ds: &DigitSet, max_cells: u128, top: u32) -> u32 {
    (1..=top).take_while(|&k| (ds.len() as u128).pow(k) <= max_cells).last().unwrap_or(1)
}

pub fn corpus_properties() -> Vec<Outcome> {
    timed(60, || {
        let all = corpus::all();
        let mut failures = Vec::new();
        let deltas: Vec<Rational> =
            [(1, 1), (1, 2), (1, 3), (1, 4), (1, 6), (1, 9), (1, 12), (1, 27), (1, 49), (1, 81)]
                .iter()
                .map(|&(p, q)| Rational::new(p, q))
                .collect();
        let mut cardinalities = Vec::new();
        for (name, ds) in &all {
            let top = largest_level(ds, 2_000_000, 8);
            let counts = component_counts(ds, 1..=top);
            if !counts.windows(2).all(|w| w[0] <= w[1]) {
                failures.push(format!("{name}: counts {counts:?}"));
            }
            let level = largest_level(ds, 100_000, 8);
            let brackets: Vec<_> =
                deltas.iter().map(|d| h_bracket(ds, level, d, &caps()).expect("small level")).collect();
            let monotone = brackets.windows(2).all(|w| w[0].h_low <= w[1].h_low && w[0].h_high <= w[1].h_high);
            if !monotone || brackets.iter().any(|b| b.h_low > b.h_high) {
                failures.push(format!("{name}: brackets not monotone at L = {level}"));
            }
            for k in 1..=largest_level(ds, 50_000, 6) {
                match component_gap_sequence(ds, k, &caps()) {
                    Ok(g) if g.is_well_formed() => {}
                    Ok(_) => failures.push(format!("{name}: malformed gaps at k = {k}")),
                    Err(GapError::ComponentCap { .. }) => break,
                    Err(e) => failures.push(format!("{name}: {e}")),
                }
            }
            cardinalities.push(infer_component_cardinality(ds, &ds.classify(), 3, &caps()).verdict);
        }
        for (i, (_, a)) in all.iter().enumerate() {
            for (j, (_, b)) in all.iter().enumerate() {
                let ab = comparability_verdict(a, b, cardinalities[i], cardinalities[j]);
                let ba = comparability_verdict(b, a, cardinalities[j], cardinalities[i]);
                if ab.verdict != ba.verdict || ab.near_tie != ba.near_tie {
                    failures.push(format!("verdict asymmetric for {} / {}", all[i].0, all[j].0));
                }
            }
        }
        vec![Outcome::new(
            8,
            "monotone counts and brackets, well-formed gaps, symmetric verdicts",
            if failures.is_empty() { "no violations".into() } else { failures.join("; ") },
            "no violations".into(),
            "exact",
            failures.is_empty(),
        )]
    })
}

pub fn run_criterion(criterion: u32) -> Vec<Outcome> {
    match criterion {
        1 => cantor_gaps(),
        2 => linear_growth(),
        3 => strong_separation(),
        4 => example_pair(),
        5 => csc_growth_bounds(),
        6 => exponent_fits(),
        7 => oracle_equivalence(),
        8 => corpus_properties(),
        _ => Vec::new(),
    }
}

pub fn run_all() -> Vec<Outcome> {
    CRITERIA.iter().flat_map(|&c| run_criterion(c)).collect()
}
