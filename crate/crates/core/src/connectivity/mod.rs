//! Components of `Q_k` and of its 3x3 tiling, component separation
//! certificates, and the verdict on how many components the carpet has.
//!
//! Cells are closed rectangles, so two occupied cells are connected when
//! `|ΔX| <= 1` and `|ΔY| <= 1`. All tests here are exact integer tests.

pub mod labeler;

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::carpet::{Cardinality, Classification, DigitSet, Linearity};
use crate::grid::{self, Caps, Cell, GridError, LevelSize, Window};
pub use labeler::{ClusterAttr, Reach};
use labeler::{Labeler, BOTTOM, LEFT, RIGHT, TOP};

/// Default last level tried by the certificate search.
pub const DEFAULT_CSC_KMAX: u32 = 6;
/// Components larger than this are certified by anchor only.
pub const WITNESS_CELL_LIMIT: u64 = 100_000;
/// Per-component flags are kept for at most this many components.
pub const FLAG_LIMIT: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConnectivityError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("level cap reached during search after exhausting levels 1..={levels_exhausted}: {source}")]
    SearchCap { levels_exhausted: u32, source: GridError },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Plain,
    Tilde,
}

impl From<Domain> for Window {
    fn from(d: Domain) -> Self {
        match d {
            Domain::Plain => Window::Plain,
            Domain::Tilde => Window::Tilde,
        }
    }
}

/// Sides of the window a component meets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BoundaryFlags {
    pub left: bool,
    pub right: bool,
    pub bottom: bool,
    pub top: bool,
}

impl BoundaryFlags {
    fn from_bits(bits: u8) -> Self {
        Self { left: bits & LEFT != 0, right: bits & RIGHT != 0, bottom: bits & BOTTOM != 0, top: bits & TOP != 0 }
    }

    pub fn is_vertical(&self) -> bool {
        self.top && self.bottom
    }

    pub fn is_horizontal(&self) -> bool {
        self.left && self.right
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// Every component meets both top and bottom.
    Vertical,
    /// Every component meets both left and right.
    Horizontal,
    /// No component is vertical or horizontal.
    Neither,
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentSummary {
    pub level: u32,
    pub domain: Domain,
    pub component_count: u64,
    pub occupied_cells: u64,
    pub vertical_components: u64,
    pub horizontal_components: u64,
    pub orientation: Orientation,
    /// Per component, ordered by minimal `(Y, X)` cell. For the tilde
    /// domain the sides are those of the whole 3x3 window.
    pub boundary_flags: Vec<BoundaryFlags>,
    /// Set when `boundary_flags` was dropped for exceeding [`FLAG_LIMIT`].
    pub flags_truncated: bool,
}

/// Labels every component of `window` at level `k` with 8-connectivity.
pub(crate) fn label_window(
    ds: &DigitSet,
    k: u32,
    window: Window,
    caps: &Caps,
    mut sink: impl FnMut(ClusterAttr),
) -> Result<u64, GridError> {
    let stream = grid::stream_rows(ds, k, window, caps)?;
    let (width, height) = stream.extent();
    let mut labeler = Labeler::new(Reach::ADJACENT, width, height, &mut sink);
    for row in stream {
        labeler.push_row(row.y, &row.runs);
    }
    Ok(labeler.finish())
}

/// Number of classes of occupied cells of `Q_L` under the relation
/// `|ΔX| <= reach.dx` and `|ΔY| <= reach.dy`, closed transitively.
pub fn count_classes(ds: &DigitSet, level: u32, reach: Reach, caps: &Caps) -> Result<u64, GridError> {
    let stream = grid::stream_rows(ds, level, Window::Plain, caps)?;
    let (width, height) = stream.extent();
    let mut labeler = Labeler::new(reach, width, height, |_| {});
    for row in stream {
        labeler.push_row(row.y, &row.runs);
    }
    Ok(labeler.finish())
}

pub fn count_components(
    ds: &DigitSet,
    k: u32,
    domain: Domain,
    caps: &Caps,
) -> Result<ComponentSummary, ConnectivityError> {
    let mut comps: Vec<ClusterAttr> = Vec::new();
    let (mut vertical, mut horizontal, mut either, mut cells) = (0u64, 0u64, 0u64, 0u64);
    let count = label_window(ds, k, domain.into(), caps, |attr| {
        let flags = BoundaryFlags::from_bits(attr.edges);
        vertical += flags.is_vertical() as u64;
        horizontal += flags.is_horizontal() as u64;
        either += (flags.is_vertical() || flags.is_horizontal()) as u64;
        cells += attr.cells;
        if (comps.len() as u64) < FLAG_LIMIT {
            comps.push(attr);
        }
    })?;
    let flags_truncated = count > FLAG_LIMIT;
    let boundary_flags = if flags_truncated {
        Vec::new()
    } else {
        comps.sort_by_key(|a| a.anchor);
        comps.iter().map(|a| BoundaryFlags::from_bits(a.edges)).collect()
    };
    let orientation = if vertical == count {
        Orientation::Vertical
    } else if horizontal == count {
        Orientation::Horizontal
    } else if either == 0 {
        Orientation::Neither
    } else {
        Orientation::Mixed
    };
    Ok(ComponentSummary {
        level: k,
        domain,
        component_count: count,
        occupied_cells: cells,
        vertical_components: vertical,
        horizontal_components: horizontal,
        orientation,
        boundary_flags,
        flags_truncated,
    })
}

/// A component of `Q_k` that is also a component of the 3x3 tiling.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CscCertificate {
    pub level: u32,
    /// Minimal `(Y, X)` cell of the witness component.
    pub anchor: Cell,
    pub cell_count: u64,
    /// Every cell of the witness, ordered by `(Y, X)`; empty when the
    /// component exceeds [`WITNESS_CELL_LIMIT`].
    pub witness: Vec<Cell>,
}

/// Searches `k = 1..=k_max` for the first level with a separated
/// component; returns the one with the smallest anchor. `None` only
/// means that none was found up to `k_max`.
pub fn find_csc_certificate(
    ds: &DigitSet,
    k_max: u32,
    caps: &Caps,
) -> Result<Option<CscCertificate>, ConnectivityError> {
    for k in 1..=k_max {
        match csc_at_level(ds, k, caps) {
            Ok(Some(cert)) => return Ok(Some(cert)),
            Ok(None) => {}
            Err(source @ GridError::CapExceeded { .. }) => {
                return Err(ConnectivityError::SearchCap { levels_exhausted: k - 1, source })
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(None)
}

/// Separated component of `Q_k` with the smallest anchor, if any.
pub fn csc_at_level(ds: &DigitSet, k: u32, caps: &Caps) -> Result<Option<CscCertificate>, GridError> {
    let mut best: Option<ClusterAttr> = None;
    label_window(ds, k, Window::Halo, caps, |attr| {
        if attr.edges == 0 && best.is_none_or(|b| attr.anchor < b.anchor) {
            best = Some(attr);
        }
    })?;
    Ok(best.map(|attr| {
        let anchor = Cell { x: attr.anchor.1 - 1, y: attr.anchor.0 - 1, level: k };
        let witness = if attr.cells <= WITNESS_CELL_LIMIT { component_cells(ds, anchor) } else { Vec::new() };
        CscCertificate { level: k, anchor, cell_count: attr.cells, witness }
    }))
}

/// Flood fill of the `Q_k` component containing `seed`, ordered by `(Y, X)`.
pub fn component_cells(ds: &DigitSet, seed: Cell) -> Vec<Cell> {
    let k = seed.level;
    let size = LevelSize::new(ds, k).expect("seed level is valid");
    let mut seen: HashSet<(u64, u64)> = HashSet::from([(seed.x, seed.y)]);
    let mut queue = VecDeque::from([(seed.x, seed.y)]);
    while let Some((x, y)) = queue.pop_front() {
        for ny in y.saturating_sub(1)..=(y + 1).min(size.rows - 1) {
            for nx in x.saturating_sub(1)..=(x + 1).min(size.columns - 1) {
                if grid::is_occupied(ds, k, nx, ny) && seen.insert((nx, ny)) {
                    queue.push_back((nx, ny));
                }
            }
        }
    }
    let mut cells: Vec<Cell> = seen.into_iter().map(|(x, y)| Cell { x, y, level: k }).collect();
    cells.sort_by_key(|c| (c.y, c.x));
    cells
}

/// Re-checks a certificate against the tiling directly: the witness is
/// occupied and connected, and growing it by one cell in every direction
/// inside the tiling reaches no occupied cell outside it.
pub fn verify_certificate(ds: &DigitSet, cert: &CscCertificate) -> bool {
    let k = cert.level;
    let Ok(size) = LevelSize::new(ds, k) else { return false };
    if cert.witness.is_empty() || cert.witness.len() as u64 != cert.cell_count {
        return false;
    }
    let (w, h) = (size.columns as i64, size.rows as i64);
    let tiled = |x: i64, y: i64| {
        (-w..2 * w).contains(&x)
            && (-h..2 * h).contains(&y)
            && grid::is_occupied(ds, k, x.rem_euclid(w) as u64, y.rem_euclid(h) as u64)
    };
    let set: BTreeSet<(i64, i64)> = cert.witness.iter().map(|c| (c.x as i64, c.y as i64)).collect();
    if cert.witness.iter().any(|c| c.level != k || !tiled(c.x as i64, c.y as i64)) {
        return false;
    }
    if cert.witness.iter().map(|c| (c.y, c.x)).min() != Some((cert.anchor.y, cert.anchor.x)) {
        return false;
    }
    for &(x, y) in &set {
        for dy in -1..=1 {
            for dx in -1..=1 {
                let (nx, ny) = (x + dx, y + dy);
                if tiled(nx, ny) && !set.contains(&(nx, ny)) {
                    return false;
                }
            }
        }
    }
    // connectivity of the witness itself
    let start = *set.iter().next().unwrap();
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some((x, y)) = queue.pop_front() {
        for dy in -1..=1 {
            for dx in -1..=1 {
                let next = (x + dx, y + dy);
                if set.contains(&next) && seen.insert(next) {
                    queue.push_back(next);
                }
            }
        }
    }
    seen.len() == set.len()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CardinalityEvidence {
    FullSquare,
    LinearRule {
        linearity: Linearity,
        factor_size: usize,
    },
    Csc(CscCertificate),
    /// `#C(Q_k)` for `k = 1, 2, ..`; shorter than requested when the cap hit.
    GrowthObservation {
        counts: Vec<u64>,
        cap_reached: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CardinalityVerdict {
    pub verdict: Cardinality,
    pub evidence: CardinalityEvidence,
}

/// Decision ladder: full set, then the product rule for linear sets, then
/// a separation certificate, else `Unknown` with the observed counts.
pub fn infer_component_cardinality(ds: &DigitSet, cls: &Classification, k_max: u32, caps: &Caps) -> CardinalityVerdict {
    if cls.is_full(ds) {
        return CardinalityVerdict { verdict: Cardinality::Finite(1), evidence: CardinalityEvidence::FullSquare };
    }
    if let Some(linearity) = &cls.linearity {
        let (factor_size, whole) = match linearity {
            Linearity::Columns { columns } => (columns.len(), ds.n() as usize),
            Linearity::Rows { rows } => (rows.len(), ds.m() as usize),
        };
        let verdict =
            if factor_size == 1 || factor_size == whole { Cardinality::Finite(1) } else { Cardinality::Infinite };
        return CardinalityVerdict {
            verdict,
            evidence: CardinalityEvidence::LinearRule { linearity: linearity.clone(), factor_size },
        };
    }
    if let Ok(Some(cert)) = find_csc_certificate(ds, k_max, caps) {
        return CardinalityVerdict { verdict: Cardinality::Infinite, evidence: CardinalityEvidence::Csc(cert) };
    }
    let mut counts = Vec::new();
    let mut cap_reached = false;
    for k in 1..=k_max {
        match count_components(ds, k, Domain::Plain, caps) {
            Ok(summary) => counts.push(summary.component_count),
            Err(_) => {
                cap_reached = true;
                break;
            }
        }
    }
    CardinalityVerdict {
        verdict: Cardinality::Unknown,
        evidence: CardinalityEvidence::GrowthObservation { counts, cap_reached },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair() -> DigitSet {
        DigitSet::new(7, 3, [(0, 0), (3, 1)]).unwrap()
    }

    fn d1() -> DigitSet {
        DigitSet::new(9, 3, [(1, 0), (3, 0), (8, 0), (8, 1), (0, 2), (2, 2), (4, 2), (8, 2)]).unwrap()
    }

    fn linear_e3() -> DigitSet {
        DigitSet::new(7, 3, [0, 3].iter().flat_map(|&i| (0..3).map(move |j| (i, j)))).unwrap()
    }

    fn count(ds: &DigitSet, k: u32) -> u64 {
        count_components(ds, k, Domain::Plain, &Caps::default()).unwrap().component_count
    }

    #[test]
    fn d1_level_one() {
        let s = count_components(&d1(), 1, Domain::Plain, &Caps::default()).unwrap();
        assert_eq!(s.component_count, 6);
        assert_eq!(s.occupied_cells, 8);
        // the chain (8,0),(8,1),(8,2) is vertical and touches the right side
        assert_eq!(s.vertical_components, 1);
        assert_eq!(s.orientation, Orientation::Mixed);
        let chain = s.boundary_flags[2];
        assert_eq!(chain, BoundaryFlags { left: false, right: true, bottom: true, top: true });
    }

    #[test]
    fn full_square_single_component() {
        let ds = DigitSet::full(4, 3).unwrap();
        for k in 1..=3 {
            let s = count_components(&ds, k, Domain::Plain, &Caps::default()).unwrap();
            assert_eq!(s.component_count, 1);
            assert_eq!(s.orientation, Orientation::Vertical);
            assert_eq!(count_components(&ds, k, Domain::Tilde, &Caps::default()).unwrap().component_count, 1);
        }
    }

    #[test]
    fn linear_growth() {
        for k in 1..=4 {
            assert_eq!(count(&linear_e3(), k), 1 << k);
        }
        let s = count_components(&linear_e3(), 2, Domain::Plain, &Caps::default()).unwrap();
        assert_eq!(s.orientation, Orientation::Vertical);
    }

    #[test]
    fn strong_separation_growth() {
        for k in 1..=6 {
            assert_eq!(count(&pair(), k), 1 << k);
        }
        let s = count_components(&pair(), 3, Domain::Plain, &Caps::default()).unwrap();
        assert_eq!(s.orientation, Orientation::Neither);
    }

    #[test]
    fn tilde_bound() {
        for ds in [d1(), pair(), linear_e3()] {
            for k in 1..=2 {
                let plain = count(&ds, k);
                let tilde = count_components(&ds, k, Domain::Tilde, &Caps::default()).unwrap().component_count;
                assert!(tilde <= 9 * plain);
            }
        }
    }

    #[test]
    fn certificate_for_pair() {
        let cert = find_csc_certificate(&pair(), 6, &Caps::default()).unwrap().unwrap();
        assert_eq!(cert.level, 1);
        assert_eq!(cert.witness, vec![Cell { x: 0, y: 0, level: 1 }]);
        assert!(verify_certificate(&pair(), &cert));
    }

    #[test]
    fn no_certificate_for_full_square() {
        let ds = DigitSet::full(3, 2).unwrap();
        assert_eq!(find_csc_certificate(&ds, 4, &Caps::default()).unwrap(), None);
    }

    #[test]
    fn tampered_certificate_fails() {
        let ds = d1();
        let cert = find_csc_certificate(&ds, 5, &Caps::default()).unwrap().unwrap();
        assert!(verify_certificate(&ds, &cert));
        let mut bad = cert.clone();
        bad.witness.pop();
        bad.cell_count -= 1;
        assert!(!verify_certificate(&ds, &bad));
        // the vertical chain of Q_1 touches its own translates
        let chain = CscCertificate {
            level: 1,
            anchor: Cell { x: 8, y: 0, level: 1 },
            cell_count: 3,
            witness: component_cells(&ds, Cell { x: 8, y: 0, level: 1 }),
        };
        assert!(!verify_certificate(&ds, &chain));
    }

    #[test]
    fn search_reports_cap() {
        let err = find_csc_certificate(&DigitSet::full(3, 2).unwrap(), 10, &Caps::with_max_cells(1000)).unwrap_err();
        assert!(matches!(err, ConnectivityError::SearchCap { levels_exhausted: 3, .. }));
    }

    #[test]
    fn cardinality_ladder() {
        let full = DigitSet::full(3, 2).unwrap();
        let v = infer_component_cardinality(&full, &full.classify(), 6, &Caps::default());
        assert_eq!(v.verdict, Cardinality::Finite(1));
        let e3 = linear_e3();
        let v = infer_component_cardinality(&e3, &e3.classify(), 6, &Caps::default());
        assert_eq!(v.verdict, Cardinality::Infinite);
        assert!(matches!(v.evidence, CardinalityEvidence::LinearRule { factor_size: 2, .. }));
        let segment = DigitSet::new(4, 3, [(2, 0), (2, 1), (2, 2)]).unwrap();
        assert_eq!(
            infer_component_cardinality(&segment, &segment.classify(), 6, &Caps::default()).verdict,
            Cardinality::Finite(1)
        );
        let v = infer_component_cardinality(&pair(), &pair().classify(), 6, &Caps::default());
        assert!(matches!(v.evidence, CardinalityEvidence::Csc(ref c) if c.level == 1));
    }
}
