//! Streaming run-based labeling.
//!
//! Two cells are linked when `|ΔX| <= dx` and `|ΔY| <= dy`; `dx = dy = 1`
//! is ordinary 8-connectivity. Each row is first reduced to clusters:
//! maximal groups of runs whose consecutive gaps satisfy
//! `next.start - prev.end <= dx`. Inside a cluster every window of
//! `2dx + 1` columns between its ends holds an occupied cell, so two
//! clusters in rows at most `dy` apart are linked iff their extents come
//! within `dx` of each other. Only clusters of the last `dy` rows stay
//! live; union-find nodes that no live cluster points at are retired and
//! reported as finished components.

use std::collections::VecDeque;

use crate::grid::Run;

pub const LEFT: u8 = 1;
pub const RIGHT: u8 = 2;
pub const BOTTOM: u8 = 4;
pub const TOP: u8 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Reach {
    pub dx: u64,
    pub dy: u64,
}

impl Reach {
    pub const ADJACENT: Reach = Reach { dx: 1, dy: 1 };
}

/// Aggregate carried by every component while it is being built.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClusterAttr {
    /// Window edges touched, as `LEFT | RIGHT | BOTTOM | TOP` bits.
    pub edges: u8,
    /// Minimal `(y, x)` cell.
    pub anchor: (u64, u64),
    pub cells: u64,
}

impl ClusterAttr {
    fn merge(&mut self, other: &ClusterAttr) {
        self.edges |= other.edges;
        self.anchor = self.anchor.min(other.anchor);
        self.cells += other.cells;
    }
}

#[derive(Clone, Copy, Debug)]
struct Cluster {
    start: u64,
    end: u64,
    label: usize,
}

struct LiveRow {
    y: u64,
    clusters: Vec<Cluster>,
}

pub struct Labeler<F: FnMut(ClusterAttr)> {
    reach: Reach,
    width: u64,
    height: u64,
    parent: Vec<usize>,
    size: Vec<u32>,
    attr: Vec<ClusterAttr>,
    live: VecDeque<LiveRow>,
    live_clusters: usize,
    last_y: Option<u64>,
    finished: u64,
    sink: F,
}

impl<F: FnMut(ClusterAttr)> Labeler<F> {
    /// `width` and `height` are the window extents used for edge flags.
    pub fn new(reach: Reach, width: u64, height: u64, sink: F) -> Self {
        assert!(reach.dx >= 1 && reach.dy >= 1, "reach must link a cell to its row neighbours");
        Self {
            reach,
            width,
            height,
            parent: Vec::new(),
            size: Vec::new(),
            attr: Vec::new(),
            live: VecDeque::new(),
            live_clusters: 0,
            last_y: None,
            finished: 0,
            sink,
        }
    }

    fn find(&mut self, mut node: usize) -> usize {
        let mut root = node;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[node] != root {
            let next = self.parent[node];
            self.parent[node] = root;
            node = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] = self.size[a].saturating_add(self.size[b]);
        let other = self.attr[b];
        self.attr[a].merge(&other);
    }

    fn make(&mut self, attr: ClusterAttr) -> usize {
        let id = self.parent.len();
        self.parent.push(id);
        self.size.push(1);
        self.attr.push(attr);
        id
    }

    /// Feeds one nonempty row. Rows must arrive with strictly increasing `y`
    /// and runs sorted, disjoint and non-adjacent.
    pub fn push_row(&mut self, y: u64, runs: &[Run]) {
        if runs.is_empty() {
            return;
        }
        assert!(self.last_y.is_none_or(|p| p < y), "rows out of order");
        self.last_y = Some(y);
        let Reach { dx, dy } = self.reach;

        while self.live.front().is_some_and(|row| row.y + dy < y) {
            let row = self.live.pop_front().unwrap();
            self.live_clusters -= row.clusters.len();
        }

        let row_edges = if y == 0 { BOTTOM } else { 0 } | if y + 1 == self.height { TOP } else { 0 };
        let mut clusters: Vec<Cluster> = Vec::new();
        let mut current: Option<(u64, u64, u64)> = None;
        for run in runs {
            match current.as_mut() {
                Some((_, end, cells)) if run.start - *end <= dx => {
                    *end = run.end;
                    *cells += run.len();
                }
                _ => {
                    if let Some((s, e, c)) = current.take() {
                        clusters.push(self.new_cluster(y, s, e, c, row_edges));
                    }
                    current = Some((run.start, run.end, run.len()));
                }
            }
        }
        if let Some((s, e, c)) = current {
            clusters.push(self.new_cluster(y, s, e, c, row_edges));
        }

        let mut links = Vec::new();
        for prev in &self.live {
            let (mut i, mut j) = (0, 0);
            while i < clusters.len() && j < prev.clusters.len() {
                let (a, b) = (&clusters[i], &prev.clusters[j]);
                if a.end + dx < b.start {
                    i += 1;
                } else if b.end + dx < a.start {
                    j += 1;
                } else {
                    links.push((a.label, b.label));
                    if a.end < b.end {
                        i += 1;
                    } else {
                        j += 1;
                    }
                }
            }
        }
        for (a, b) in links {
            self.union(a, b);
        }

        self.live_clusters += clusters.len();
        self.live.push_back(LiveRow { y, clusters });
        if self.parent.len() > 2 * self.live_clusters + 4096 {
            self.compact();
        }
    }

    fn new_cluster(&mut self, y: u64, start: u64, end: u64, cells: u64, row_edges: u8) -> Cluster {
        let edges = row_edges | if start == 0 { LEFT } else { 0 } | if end + 1 == self.width { RIGHT } else { 0 };
        let label = self.make(ClusterAttr { edges, anchor: (y, start), cells });
        Cluster { start, end, label }
    }

    /// Retires every root that no live cluster refers to and renumbers the rest.
    fn compact(&mut self) {
        let total = self.parent.len();
        let mut remap = vec![usize::MAX; total];
        let mut parent = Vec::new();
        let mut size = Vec::new();
        let mut attr = Vec::new();
        let mut live = std::mem::take(&mut self.live);
        for row in live.iter_mut() {
            for c in row.clusters.iter_mut() {
                let root = self.find(c.label);
                if remap[root] == usize::MAX {
                    remap[root] = parent.len();
                    parent.push(parent.len());
                    size.push(self.size[root]);
                    attr.push(self.attr[root]);
                }
                c.label = remap[root];
            }
        }
        for (node, &new) in remap.iter().enumerate().take(total) {
            if self.parent[node] == node && new == usize::MAX {
                self.finished += 1;
                (self.sink)(self.attr[node]);
            }
        }
        self.live = live;
        self.parent = parent;
        self.size = size;
        self.attr = attr;
    }

    /// Retires everything and returns the number of components seen.
    pub fn finish(mut self) -> u64 {
        self.live.clear();
        self.live_clusters = 0;
        self.compact();
        self.finished
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn runs(xs: &[(u64, u64)]) -> Vec<Run> {
        xs.iter().map(|&(s, e)| Run::new(s, e)).collect()
    }

    fn count(rows: &[(u64, Vec<Run>)], reach: Reach) -> (u64, Vec<ClusterAttr>) {
        let mut out = Vec::new();
        let mut lab = Labeler::new(reach, 100, 100, |a| out.push(a));
        for (y, r) in rows {
            lab.push_row(*y, r);
        }
        let n = lab.finish();
        out.sort_by_key(|a| a.anchor);
        (n, out)
    }

    #[test]
    fn diagonal_touch_connects() {
        let rows = vec![(0, runs(&[(0, 0), (4, 4)])), (1, runs(&[(1, 1)]))];
        let (n, comps) = count(&rows, Reach::ADJACENT);
        assert_eq!(n, 2);
        assert_eq!(comps[0].cells, 2);
        assert_eq!(comps[0].edges, LEFT | BOTTOM);
    }

    #[test]
    fn gap_rows_do_not_connect_under_adjacency() {
        let rows = vec![(0, runs(&[(0, 3)])), (2, runs(&[(0, 3)]))];
        assert_eq!(count(&rows, Reach::ADJACENT).0, 2);
        assert_eq!(count(&rows, Reach { dx: 1, dy: 2 }).0, 1);
    }

    #[test]
    fn wide_reach_merges_within_row() {
        let rows = vec![(5, runs(&[(0, 0), (3, 3), (9, 9)]))];
        assert_eq!(count(&rows, Reach { dx: 3, dy: 1 }).0, 2);
        assert_eq!(count(&rows, Reach { dx: 6, dy: 1 }).0, 1);
    }

    #[test]
    fn u_shape_merges_late() {
        // two columns joined only at the top
        let mut rows: Vec<_> = (0..50).map(|y| (y, runs(&[(0, 0), (10, 10)]))).collect();
        rows.push((50, runs(&[(0, 10)])));
        let (n, comps) = count(&rows, Reach::ADJACENT);
        assert_eq!(n, 1);
        assert_eq!(comps[0].cells, 111);
    }

    #[test]
    fn compaction_keeps_counts() {
        // many isolated cells force several compactions
        let rows: Vec<_> = (0..3000).map(|y| (2 * y, runs(&[(0, 0), (5, 5), (10, 12)]))).collect();
        let mut seen = 0u64;
        let mut lab = Labeler::new(Reach::ADJACENT, 13, 6000, |_| seen += 1);
        for (y, r) in &rows {
            lab.push_row(*y, r);
        }
        assert_eq!(lab.finish(), 9000);
        assert_eq!(seen, 9000);
    }
}
