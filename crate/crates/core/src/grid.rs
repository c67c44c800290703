//! Level-k approximations as integer occupancy grids.
//!
//! Cell `(X, Y)` at level `k` is the rectangle
//! `[X/n^k, (X+1)/n^k] x [Y/m^k, (Y+1)/m^k]`; it is occupied when the
//! base-`n` digits of `X` and the base-`m` digits of `Y`, paired position
//! by position, all belong to `D`.
//!
//! Rows are produced in ascending `Y` as sorted, maximal runs of occupied
//! columns. Nothing proportional to `N^k` is held in memory by the stream
//! itself; a single row's runs are the only buffer.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::carpet::DigitSet;

/// Default bound on `N^k`.
pub const DEFAULT_MAX_CELLS: u64 = 50_000_000;
/// Bound on the number of rectangles written by [`render_svg`].
pub const RENDER_MAX_CELLS: u64 = 1_000_000;
/// Default bound on components handled by pairwise gap computations.
pub const DEFAULT_MAX_COMPONENTS: usize = 1_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GridError {
    #[error("level must be at least 1")]
    LevelZero,
    #[error("level {level} needs {cells} cells, above the cap of {cap}")]
    CapExceeded { level: u32, cells: u128, cap: u64 },
    #[error("coordinates at level {0} do not fit in 64 bits")]
    Overflow(u32),
    #[error("digit ({0}, {1}) is not in the digit set")]
    NotADigit(u32, u32),
    #[error("empty word")]
    EmptyWord,
}

/// Resource guards shared by every grid-backed computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub max_cells: u64,
    pub max_components: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Self { max_cells: DEFAULT_MAX_CELLS, max_components: DEFAULT_MAX_COMPONENTS }
    }
}

impl Caps {
    pub fn with_max_cells(max_cells: u64) -> Self {
        Self { max_cells, ..Self::default() }
    }

    /// Fails when `N^k` exceeds `max_cells`.
    pub fn check_level(&self, ds: &DigitSet, k: u32) -> Result<(), GridError> {
        let cells = occupied_count(ds, k);
        if cells > self.max_cells as u128 {
            return Err(GridError::CapExceeded { level: k, cells, cap: self.max_cells });
        }
        Ok(())
    }
}

/// `N^k`, saturating.
pub fn occupied_count(ds: &DigitSet, k: u32) -> u128 {
    (ds.len() as u128).saturating_pow(k)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub x: u64,
    pub y: u64,
    pub level: u32,
}

/// Inclusive run `start..=end` of occupied columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Run {
    pub start: u64,
    pub end: u64,
}

impl Run {
    pub fn new(start: u64, end: u64) -> Self {
        debug_assert!(start <= end);
        Self { start, end }
    }

    pub fn len(&self) -> u64 {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, x: u64) -> bool {
        self.start <= x && x <= self.end
    }
}

/// Appends `run`, coalescing with the last run when they touch.
/// Runs must arrive in ascending order.
pub(crate) fn push_run(runs: &mut Vec<Run>, run: Run) {
    if let Some(last) = runs.last_mut() {
        if last.end + 1 >= run.start {
            last.end = last.end.max(run.end);
            return;
        }
    }
    runs.push(run);
}

/// One nonempty row of a stream.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub y: u64,
    pub runs: Vec<Run>,
}

impl Row {
    pub fn cell_count(&self) -> u64 {
        self.runs.iter().map(Run::len).sum()
    }
}

/// Which region of the plane a stream covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Window {
    /// `Q_k` over `[0, n^k) x [0, m^k)`.
    Plain,
    /// The 3x3 tiling of `Q_k` by integer translates, over
    /// `[-n^k, 2n^k) x [-m^k, 2m^k)`.
    Tilde,
    /// `Q_k` together with the one-cell ring of the tiling around it,
    /// over `[-1, n^k] x [-1, m^k]`. A component of `Q_k` is a component
    /// of the tiling exactly when its halo component avoids the ring.
    Halo,
}

/// `n^k` and `m^k` for one level.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LevelSize {
    pub level: u32,
    pub columns: u64,
    pub rows: u64,
}

impl LevelSize {
    pub fn new(ds: &DigitSet, k: u32) -> Result<Self, GridError> {
        if k == 0 {
            return Err(GridError::LevelZero);
        }
        let columns = (ds.n() as u64).checked_pow(k).ok_or(GridError::Overflow(k))?;
        let rows = (ds.m() as u64).checked_pow(k).ok_or(GridError::Overflow(k))?;
        // Tilde coordinates reach 3 n^k.
        columns.checked_mul(3).ok_or(GridError::Overflow(k))?;
        Ok(Self { level: k, columns, rows })
    }
}

/// Column pattern of one digit row: maximal runs inside `0..n`.
#[derive(Clone, Debug)]
struct Pattern {
    runs: Vec<(u64, u64)>,
    full: bool,
}

impl Pattern {
    fn new(columns: &[u32], n: u32) -> Self {
        let mut runs: Vec<(u64, u64)> = Vec::new();
        for &c in columns {
            let c = c as u64;
            match runs.last_mut() {
                Some(last) if last.1 + 1 == c => last.1 = c,
                _ => runs.push((c, c)),
            }
        }
        let full = columns.len() == n as usize;
        Self { runs, full }
    }

    /// Runs at the next level obtained by refining every cell of `prev`.
    fn expand(&self, prev: &[Run], n: u64, out: &mut Vec<Run>) {
        out.clear();
        for run in prev {
            if self.full {
                push_run(out, Run::new(run.start * n, run.end * n + n - 1));
                continue;
            }
            for x in run.start..=run.end {
                let base = x * n;
                for &(a, b) in &self.runs {
                    push_run(out, Run::new(base + a, base + b));
                }
            }
        }
    }
}

/// Nonempty rows of plain `Q_k`, ascending, by odometer over the occupied
/// row digits. Prefix expansions are cached so that advancing the last
/// digit only recomputes the innermost level.
struct BaseRows {
    n: u64,
    m: u64,
    k: usize,
    rows: Vec<u32>,
    patterns: Vec<Pattern>,
    odometer: Vec<usize>,
    stack: Vec<Vec<Run>>,
    done: bool,
}

impl BaseRows {
    fn new(ds: &DigitSet, k: u32) -> Self {
        let rows = ds.occupied_rows();
        let patterns = rows.iter().map(|&j| Pattern::new(ds.row_columns(j), ds.n())).collect();
        let k = k as usize;
        let mut this = Self {
            n: ds.n() as u64,
            m: ds.m() as u64,
            k,
            rows,
            patterns,
            odometer: vec![0; k],
            stack: vec![Vec::new(); k + 1],
            done: false,
        };
        this.stack[0].push(Run::new(0, 0));
        this.refill(0);
        this
    }

    fn refill(&mut self, from: usize) {
        for p in from..self.k {
            let (lo, hi) = self.stack.split_at_mut(p + 1);
            self.patterns[self.odometer[p]].expand(&lo[p], self.n, &mut hi[0]);
        }
    }

    fn current_y(&self) -> u64 {
        self.odometer.iter().fold(0, |y, &d| y * self.m + self.rows[d] as u64)
    }
}

impl Iterator for BaseRows {
    type Item = Row;

    fn next(&mut self) -> Option<Row> {
        if self.done {
            return None;
        }
        let row = Row { y: self.current_y(), runs: self.stack[self.k].clone() };
        let mut p = self.k;
        loop {
            if p == 0 {
                self.done = true;
                break;
            }
            p -= 1;
            self.odometer[p] += 1;
            if self.odometer[p] < self.rows.len() {
                self.refill(p);
                break;
            }
            self.odometer[p] = 0;
        }
        Some(row)
    }
}

/// Runs of base row `y`, or `None` when the row is empty.
pub fn base_row(ds: &DigitSet, k: u32, y: u64) -> Option<Vec<Run>> {
    let (n, m) = (ds.n() as u64, ds.m() as u64);
    let mut digits = vec![0u32; k as usize];
    let mut rest = y;
    for d in digits.iter_mut().rev() {
        *d = (rest % m) as u32;
        rest /= m;
    }
    let mut runs = vec![Run::new(0, 0)];
    let mut next = Vec::new();
    for j in digits {
        let cols = ds.row_columns(j);
        if cols.is_empty() {
            return None;
        }
        Pattern::new(cols, ds.n()).expand(&runs, n, &mut next);
        std::mem::swap(&mut runs, &mut next);
    }
    Some(runs)
}

/// Row-ordered stream over one [`Window`]. Coordinates are offset so
/// that they are nonnegative: see [`RowStream::origin`].
pub struct RowStream<'a> {
    size: LevelSize,
    window: Window,
    inner: Box<dyn Iterator<Item = Row> + 'a>,
}

impl<'a> RowStream<'a> {
    pub fn size(&self) -> LevelSize {
        self.size
    }

    pub fn window(&self) -> Window {
        self.window
    }

    /// Width and height of the window in cells.
    pub fn extent(&self) -> (u64, u64) {
        let LevelSize { columns, rows, .. } = self.size;
        match self.window {
            Window::Plain => (columns, rows),
            Window::Tilde => (3 * columns, 3 * rows),
            Window::Halo => (columns + 2, rows + 2),
        }
    }

    /// Cell of the window coordinate `(0, 0)` in `Q_k` coordinates.
    pub fn origin(&self) -> (i64, i64) {
        let LevelSize { columns, rows, .. } = self.size;
        match self.window {
            Window::Plain => (0, 0),
            Window::Tilde => (-(columns as i64), -(rows as i64)),
            Window::Halo => (-1, -1),
        }
    }
}

impl Iterator for RowStream<'_> {
    type Item = Row;

    fn next(&mut self) -> Option<Row> {
        self.inner.next()
    }
}

fn tile_row(runs: &[Run], width: u64) -> Vec<Run> {
    let mut out = Vec::with_capacity(runs.len() * 3);
    for t in 0..3 {
        for r in runs {
            push_run(&mut out, Run::new(r.start + t * width, r.end + t * width));
        }
    }
    out
}

fn halo_row(runs: &[Run], width: u64) -> Vec<Run> {
    let mut out = Vec::with_capacity(runs.len() + 2);
    if runs.last().is_some_and(|r| r.end == width - 1) {
        out.push(Run::new(0, 0));
    }
    for r in runs {
        push_run(&mut out, Run::new(r.start + 1, r.end + 1));
    }
    if runs.first().is_some_and(|r| r.start == 0) {
        push_run(&mut out, Run::new(width + 1, width + 1));
    }
    out
}

/// Streams the rows of `Q_k` (or of a window around it), ascending in `Y`.
pub fn stream_rows<'a>(ds: &'a DigitSet, k: u32, window: Window, caps: &Caps) -> Result<RowStream<'a>, GridError> {
    let size = LevelSize::new(ds, k)?;
    caps.check_level(ds, k)?;
    let (width, height) = (size.columns, size.rows);
    let inner: Box<dyn Iterator<Item = Row> + 'a> = match window {
        Window::Plain => Box::new(BaseRows::new(ds, k)),
        Window::Tilde => Box::new((0..3u64).flat_map(move |t| {
            BaseRows::new(ds, k).map(move |row| Row { y: row.y + t * height, runs: tile_row(&row.runs, width) })
        })),
        Window::Halo => {
            let below = base_row(ds, k, height - 1).map(|runs| Row { y: 0, runs: halo_row(&runs, width) });
            let above = base_row(ds, k, 0).map(|runs| Row { y: height + 1, runs: halo_row(&runs, width) });
            let body = BaseRows::new(ds, k).map(move |row| Row { y: row.y + 1, runs: halo_row(&row.runs, width) });
            Box::new(below.into_iter().chain(body).chain(above))
        }
    };
    Ok(RowStream { size, window, inner })
}

/// Direct digit test for cell `(x, y)` of `Q_k`.
pub fn is_occupied(ds: &DigitSet, k: u32, x: u64, y: u64) -> bool {
    let (n, m) = (ds.n() as u64, ds.m() as u64);
    let (mut x, mut y) = (x, y);
    for _ in 0..k {
        if !ds.contains((x % n) as u32, (y % m) as u32) {
            return false;
        }
        x /= n;
        y /= m;
    }
    x == 0 && y == 0
}

/// Cell addressed by a word `w_1 ... w_k` of digits, `w_1` most significant.
pub fn cell_from_word(ds: &DigitSet, word: &[(u32, u32)]) -> Result<Cell, GridError> {
    if word.is_empty() {
        return Err(GridError::EmptyWord);
    }
    let (n, m) = (ds.n() as u64, ds.m() as u64);
    let (mut x, mut y) = (0u64, 0u64);
    for &(i, j) in word {
        if !ds.contains(i, j) {
            return Err(GridError::NotADigit(i, j));
        }
        x = x.checked_mul(n).and_then(|v| v.checked_add(i as u64)).ok_or(GridError::Overflow(word.len() as u32))?;
        y = y.checked_mul(m).and_then(|v| v.checked_add(j as u64)).ok_or(GridError::Overflow(word.len() as u32))?;
    }
    Ok(Cell { x, y, level: word.len() as u32 })
}

/// All occupied cells of `Q_k`, ordered by `(Y, X)`.
pub fn enumerate_cells(ds: &DigitSet, k: u32, caps: &Caps) -> Result<Vec<Cell>, GridError> {
    let mut cells = Vec::new();
    for row in stream_rows(ds, k, Window::Plain, caps)? {
        for r in &row.runs {
            cells.extend((r.start..=r.end).map(|x| Cell { x, y: row.y, level: k }));
        }
    }
    Ok(cells)
}

/// `X,Y` dump of `Q_k` with the level in a header comment.
pub fn cells_csv(ds: &DigitSet, k: u32, caps: &Caps) -> Result<String, GridError> {
    let mut out = format!("# level {k}\nX,Y\n");
    for row in stream_rows(ds, k, Window::Plain, caps)? {
        for r in &row.runs {
            for x in r.start..=r.end {
                writeln!(out, "{x},{}", row.y).expect("write to string");
            }
        }
    }
    Ok(out)
}

/// SVG 1.1 picture of `Q_k`: one unit rectangle per occupied cell in a
/// `n^k x m^k` user space stretched over a square viewport, `y` upward.
pub fn render_svg(ds: &DigitSet, k: u32, max_cells: u64) -> Result<String, GridError> {
    let caps = Caps::with_max_cells(max_cells.min(RENDER_MAX_CELLS));
    let stream = stream_rows(ds, k, Window::Plain, &caps)?;
    let LevelSize { columns, rows, .. } = stream.size();
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"512\" height=\"512\" \
         viewBox=\"0 0 {columns} {rows}\" preserveAspectRatio=\"none\">"
    )
    .unwrap();
    writeln!(out, "<g fill=\"black\" shape-rendering=\"crispEdges\">").unwrap();
    for row in stream {
        let top = rows - 1 - row.y;
        for r in &row.runs {
            for x in r.start..=r.end {
                writeln!(out, "<rect x=\"{x}\" y=\"{top}\" width=\"1\" height=\"1\"/>").unwrap();
            }
        }
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}
