//! Exact gap sequence of a finite level `Q_k`.
//!
//! Single linkage over components: the gap sequence of `Q_k` is the
//! multiset of edge weights of a minimum spanning tree on its components,
//! weighted by Chebyshev set distance. For cells `(X1, Y1)`, `(X2, Y2)`
//! that distance is `max((|ΔX|-1)⁺ / n^k, (|ΔY|-1)⁺ / m^k)`. Weights are
//! kept as integer numerators over the common denominator `n^k m^k`.

use num_bigint::BigInt;

use super::{GapError, GapSequence, GapSource, Rational};
use crate::carpet::DigitSet;
use crate::connectivity::label_window;
use crate::grid::{self, Caps, LevelSize, Row, Run, Window};

/// Cells of one component, as runs grouped by row (ascending `y`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentCells {
    pub rows: Vec<(u64, Vec<Run>)>,
    pub x_min: u64,
    pub x_max: u64,
    pub y_min: u64,
    pub y_max: u64,
}

impl ComponentCells {
    pub fn cell_count(&self) -> u64 {
        self.rows.iter().flat_map(|(_, runs)| runs.iter()).map(Run::len).sum()
    }

    pub fn anchor(&self) -> (u64, u64) {
        (self.rows[0].0, self.rows[0].1[0].start)
    }

    pub fn cells(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.rows.iter().flat_map(|(y, runs)| runs.iter().flat_map(move |r| (r.start..=r.end).map(move |x| (x, *y))))
    }
}

/// Components of `Q_k` with their minimum spanning tree.
#[derive(Clone, Debug)]
pub struct ComponentForest {
    pub level: u32,
    pub size: LevelSize,
    /// Ordered by anchor, the minimal `(y, x)` cell.
    pub components: Vec<ComponentCells>,
    /// MST edges `(a, b, numerator)`, in the order Prim added them.
    pub edges: Vec<(usize, usize, u128)>,
}

impl ComponentForest {
    fn weights(&self) -> (u128, u128) {
        // a horizontal gap of g cells is g m^k / (n^k m^k); vertical g n^k / (n^k m^k)
        (self.size.rows as u128, self.size.columns as u128)
    }

    fn denominator(&self) -> BigInt {
        BigInt::from(self.size.columns) * BigInt::from(self.size.rows)
    }

    pub fn to_rational(&self, numerator: u128) -> Rational {
        Rational::new(BigInt::from(numerator), self.denominator())
    }

    /// Exact Chebyshev distance between components `a` and `b`.
    pub fn distance(&self, a: usize, b: usize) -> Rational {
        let (wx, wy) = self.weights();
        self.to_rational(distance(&self.components[a], &self.components[b], wx, wy, u128::MAX))
    }

    pub fn mst_weights(&self) -> Vec<Rational> {
        self.edges.iter().map(|&(_, _, w)| self.to_rational(w)).collect()
    }

    pub fn gap_sequence(&self) -> GapSequence {
        GapSequence::from_values(self.mst_weights(), GapSource::FiniteLevel { level: self.level })
    }

    /// MST weights under the Euclidean distance between the same closed
    /// cell unions, sorted descending. Pairwise over runs; meant for small
    /// instances.
    pub fn euclidean_mst_weights(&self) -> Vec<f64> {
        let (cw, ch) = (1.0 / self.size.columns as f64, 1.0 / self.size.rows as f64);
        let c = self.components.len();
        let dist = |a: &ComponentCells, b: &ComponentCells| {
            let mut best = f64::INFINITY;
            for (ya, ra) in &a.rows {
                for (yb, rb) in &b.rows {
                    let gy = ya.abs_diff(*yb).saturating_sub(1) as f64 * ch;
                    for x in ra {
                        for z in rb {
                            let gx = run_gap(x, z) as f64 * cw;
                            best = best.min(gx.hypot(gy));
                        }
                    }
                }
            }
            best
        };
        let mut weights = prim(c, |i, j, _| dist(&self.components[i], &self.components[j]), f64::INFINITY, |_, _| 0.0)
            .into_iter()
            .map(|(_, _, w)| w)
            .collect::<Vec<_>>();
        weights.sort_by(|a, b| b.partial_cmp(a).unwrap());
        weights
    }
}

/// Empty cells strictly between two runs: `(min |ΔX| - 1)⁺`.
fn run_gap(a: &Run, b: &Run) -> u64 {
    let delta = b.start.saturating_sub(a.end).max(a.start.saturating_sub(b.end));
    delta.saturating_sub(1)
}

/// Smallest [`run_gap`] between two sorted run lists.
fn row_gap(a: &[Run], b: &[Run]) -> u64 {
    let (mut i, mut j) = (0, 0);
    let mut best = u64::MAX;
    while i < a.len() && j < b.len() {
        best = best.min(run_gap(&a[i], &b[j]));
        if best == 0 {
            break;
        }
        if a[i].end < b[j].end {
            i += 1;
        } else {
            j += 1;
        }
    }
    best
}

fn bbox_bound(a: &ComponentCells, b: &ComponentCells, wx: u128, wy: u128) -> u128 {
    let gx = b.x_min.saturating_sub(a.x_max).max(a.x_min.saturating_sub(b.x_max)).saturating_sub(1);
    let gy = b.y_min.saturating_sub(a.y_max).max(a.y_min.saturating_sub(b.y_max)).saturating_sub(1);
    (gx as u128 * wx).max(gy as u128 * wy)
}

/// Distance numerator between two components, or `bound` if it is not smaller.
fn distance(a: &ComponentCells, b: &ComponentCells, wx: u128, wy: u128, bound: u128) -> u128 {
    let mut best = bound;
    for (ya, runs_a) in &a.rows {
        let split = b.rows.partition_point(|(y, _)| y < ya);
        for (yb, runs_b) in &b.rows[split..] {
            let gy = (yb - ya).saturating_sub(1) as u128 * wy;
            if gy >= best {
                break;
            }
            best = best.min((row_gap(runs_a, runs_b) as u128 * wx).max(gy));
        }
        for (yb, runs_b) in b.rows[..split].iter().rev() {
            let gy = (ya - yb).saturating_sub(1) as u128 * wy;
            if gy >= best {
                break;
            }
            best = best.min((row_gap(runs_a, runs_b) as u128 * wx).max(gy));
        }
        if best == 0 {
            break;
        }
    }
    best
}

/// Prim's algorithm on a complete graph; `exact(i, j, bound)` may return
/// any value `>= bound` when the true distance is not below `bound`, and
/// `lower(i, j)` must never exceed the true distance.
fn prim<W: Copy + PartialOrd>(
    count: usize,
    mut exact: impl FnMut(usize, usize, W) -> W,
    infinity: W,
    lower: impl Fn(usize, usize) -> W,
) -> Vec<(usize, usize, W)> {
    let mut edges = Vec::with_capacity(count.saturating_sub(1));
    if count == 0 {
        return edges;
    }
    let mut in_tree = vec![false; count];
    let mut key = vec![infinity; count];
    let mut from = vec![0usize; count];
    let mut u = 0;
    in_tree[0] = true;
    for _ in 1..count {
        for v in 0..count {
            if !in_tree[v] && lower(u, v) < key[v] {
                let d = exact(u, v, key[v]);
                if d < key[v] {
                    key[v] = d;
                    from[v] = u;
                }
            }
        }
        let mut next = usize::MAX;
        for v in 0..count {
            if !in_tree[v] && (next == usize::MAX || key[v] < key[next]) {
                next = v;
            }
        }
        in_tree[next] = true;
        edges.push((from[next], next, key[next]));
        u = next;
    }
    edges
}

fn group_components(rows: Vec<Row>) -> Vec<ComponentCells> {
    // union-find over every run of Q_k
    let mut offsets = Vec::with_capacity(rows.len() + 1);
    let mut total = 0;
    for row in &rows {
        offsets.push(total);
        total += row.runs.len();
    }
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for r in 1..rows.len() {
        let (prev, cur) = (&rows[r - 1], &rows[r]);
        if prev.y + 1 != cur.y {
            continue;
        }
        let (mut i, mut j) = (0, 0);
        while i < cur.runs.len() && j < prev.runs.len() {
            let (a, b) = (cur.runs[i], prev.runs[j]);
            if a.end + 1 < b.start {
                i += 1;
            } else if b.end + 1 < a.start {
                j += 1;
            } else {
                let (ra, rb) = (find(&mut parent, offsets[r] + i), find(&mut parent, offsets[r - 1] + j));
                parent[ra] = rb;
                if a.end < b.end {
                    i += 1;
                } else {
                    j += 1;
                }
            }
        }
    }
    let mut index_of_root = std::collections::HashMap::new();
    let mut comps: Vec<ComponentCells> = Vec::new();
    for (r, row) in rows.iter().enumerate() {
        for (i, run) in row.runs.iter().enumerate() {
            let root = find(&mut parent, offsets[r] + i);
            let idx = *index_of_root.entry(root).or_insert_with(|| {
                comps.push(ComponentCells { rows: Vec::new(), x_min: u64::MAX, x_max: 0, y_min: row.y, y_max: row.y });
                comps.len() - 1
            });
            let comp = &mut comps[idx];
            match comp.rows.last_mut() {
                Some((y, runs)) if *y == row.y => runs.push(*run),
                _ => comp.rows.push((row.y, vec![*run])),
            }
            comp.x_min = comp.x_min.min(run.start);
            comp.x_max = comp.x_max.max(run.end);
            comp.y_max = row.y;
        }
    }
    comps.sort_by_key(ComponentCells::anchor);
    comps
}

/// Components of `Q_k` and their MST, refusing more than
/// `caps.max_components` components.
pub fn component_forest(ds: &DigitSet, k: u32, caps: &Caps) -> Result<ComponentForest, GapError> {
    let size = LevelSize::new(ds, k)?;
    let count = label_window(ds, k, Window::Plain, caps, |_| {})?;
    if count > caps.max_components as u64 {
        return Err(GapError::ComponentCap { count, cap: caps.max_components });
    }
    let rows: Vec<Row> = grid::stream_rows(ds, k, Window::Plain, caps)?.collect();
    let components = group_components(rows);
    debug_assert_eq!(components.len() as u64, count);
    let mut forest = ComponentForest { level: k, size, components, edges: Vec::new() };
    let (wx, wy) = forest.weights();
    let comps = &forest.components;
    forest.edges = prim(
        comps.len(),
        |i, j, bound| distance(&comps[i], &comps[j], wx, wy, bound),
        u128::MAX,
        |i, j| bbox_bound(&comps[i], &comps[j], wx, wy),
    );
    Ok(forest)
}

/// Gap sequence of `Q_k` under the Chebyshev metric.
pub fn component_gap_sequence(ds: &DigitSet, k: u32, caps: &Caps) -> Result<GapSequence, GapError> {
    Ok(component_forest(ds, k, caps)?.gap_sequence())
}
