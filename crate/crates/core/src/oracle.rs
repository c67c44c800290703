//! Slow reference implementations used to cross-check the streaming code.
//! Every function here works on an explicit cell list built from words, so
//! it shares no code path with the row generator or the labeler.

use std::collections::{HashSet, VecDeque};

use crate::carpet::DigitSet;
use crate::gaps::{GapSequence, GapSource, Rational};
use crate::grid::{cell_from_word, Cell};

/// All cells of `Q_k` by enumerating the `N^k` words, sorted by `(Y, X)`.
pub fn cells_by_words(ds: &DigitSet, k: u32) -> Vec<Cell> {
    let digits = ds.digits();
    let mut word = vec![digits[0]; k as usize];
    let mut idx = vec![0usize; k as usize];
    let mut cells = Vec::with_capacity(ds.len().pow(k));
    loop {
        cells.push(cell_from_word(ds, &word).expect("word over the digit set"));
        let mut p = k as usize;
        loop {
            if p == 0 {
                cells.sort_by_key(|c| (c.y, c.x));
                return cells;
            }
            p -= 1;
            idx[p] += 1;
            if idx[p] < digits.len() {
                word[p] = digits[idx[p]];
                break;
            }
            idx[p] = 0;
            word[p] = digits[0];
        }
    }
}

/// 8-connected components by breadth-first flood fill over a hash set.
pub fn flood_fill_count(cells: &[Cell]) -> u64 {
    let occupied: HashSet<(u64, u64)> = cells.iter().map(|c| (c.x, c.y)).collect();
    let mut seen = HashSet::new();
    let mut count = 0;
    for c in cells {
        if !seen.insert((c.x, c.y)) {
            continue;
        }
        count += 1;
        let mut queue = VecDeque::from([(c.x, c.y)]);
        while let Some((x, y)) = queue.pop_front() {
            for nx in x.saturating_sub(1)..=x + 1 {
                for ny in y.saturating_sub(1)..=y + 1 {
                    if occupied.contains(&(nx, ny)) && seen.insert((nx, ny)) {
                        queue.push_back((nx, ny));
                    }
                }
            }
        }
    }
    count
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Classes of the relation `|ΔX| <= dx and |ΔY| <= dy`, closed
/// transitively by testing every pair.
pub fn closure_count(cells: &[Cell], dx: u64, dy: u64) -> u64 {
    let mut parent: Vec<usize> = (0..cells.len()).collect();
    let mut classes = cells.len() as u64;
    for a in 0..cells.len() {
        for b in a + 1..cells.len() {
            let (p, q) = (cells[a], cells[b]);
            if p.x.abs_diff(q.x) <= dx && p.y.abs_diff(q.y) <= dy {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra] = rb;
                    classes -= 1;
                }
            }
        }
    }
    classes
}

/// Gap sequence of `Q_k` from Kruskal's algorithm over all pairs of cells
/// with exact Chebyshev rectangle distances.
pub fn brute_gap_sequence(ds: &DigitSet, k: u32) -> GapSequence {
    let cells = cells_by_words(ds, k);
    let (nk, mk) = ((ds.n() as u128).pow(k), (ds.m() as u128).pow(k));
    let gap = |a: u64, b: u64| a.abs_diff(b).saturating_sub(1) as u128;
    let mut edges = Vec::new();
    for a in 0..cells.len() {
        for b in a + 1..cells.len() {
            let (p, q) = (cells[a], cells[b]);
            edges.push(((gap(p.x, q.x) * mk).max(gap(p.y, q.y) * nk), a, b));
        }
    }
    edges.sort_unstable();
    let mut parent: Vec<usize> = (0..cells.len()).collect();
    let mut values = Vec::new();
    for (w, a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            if w > 0 {
                values.push(Rational::new(w, nk * mk));
            }
        }
    }
    GapSequence::from_values(values, GapSource::FiniteLevel { level: k })
}

/// Whether some component of `Q_k` is also a component of the 3×3 tiling,
/// by flood fill over the nine translated copies.
pub fn has_csc_brute(ds: &DigitSet, k: u32) -> bool {
    let (w, h) = ((ds.n() as i64).pow(k), (ds.m() as i64).pow(k));
    let base = cells_by_words(ds, k);
    let mut tiled = HashSet::new();
    for a in -1..=1 {
        for b in -1..=1 {
            tiled.extend(base.iter().map(|c| (c.x as i64 + a * w, c.y as i64 + b * h)));
        }
    }
    let inside = |(x, y): (i64, i64)| (0..w).contains(&x) && (0..h).contains(&y);
    let mut seen = HashSet::new();
    for c in &base {
        let start = (c.x as i64, c.y as i64);
        if !seen.insert(start) {
            continue;
        }
        let mut contained = true;
        let mut queue = VecDeque::from([start]);
        while let Some((x, y)) = queue.pop_front() {
            contained &= inside((x, y));
            for nx in x - 1..=x + 1 {
                for ny in y - 1..=y + 1 {
                    if tiled.contains(&(nx, ny)) && seen.insert((nx, ny)) {
                        queue.push_back((nx, ny));
                    }
                }
            }
        }
        if contained {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words_cover_level() {
        let ds = DigitSet::new(3, 2, [(0, 0), (1, 0), (0, 1), (1, 1)]).unwrap();
        let cells = cells_by_words(&ds, 2);
        assert_eq!(cells.len(), 16);
        assert_eq!(cells[0], Cell { x: 0, y: 0, level: 2 });
        assert_eq!(flood_fill_count(&cells), 2);
        assert_eq!(closure_count(&cells, 1, 1), 2);
        assert_eq!(closure_count(&cells, 2, 1), 1);
    }

    #[test]
    fn brute_cantor_gaps() {
        let ds = DigitSet::new(3, 2, [(0, 0), (1, 0), (0, 1), (1, 1)]).unwrap();
        assert_eq!(brute_gap_sequence(&ds, 2).entries.len(), 1);
        let g = brute_gap_sequence(&ds, 3);
        assert_eq!(g.entries[0].value, Rational::new(4, 27));
        assert_eq!(g.entries[1].value, Rational::new(1, 27));
        assert_eq!(g.entries[1].multiplicity, 2);
    }

    #[test]
    fn brute_csc() {
        let sep = DigitSet::new(7, 3, [(0, 0), (3, 1)]).unwrap();
        assert!(has_csc_brute(&sep, 1));
        // columns touch their translates above and below
        let cols = DigitSet::new(7, 3, [0, 3].iter().flat_map(|&i| (0..3).map(move |j| (i, j)))).unwrap();
        assert!(!has_csc_brute(&cols, 1) && !has_csc_brute(&cols, 2));
    }
}
