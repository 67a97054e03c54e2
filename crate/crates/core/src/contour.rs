//! Zero sets of real functions on a rectangle by marching squares.

use std::collections::HashMap;

pub type Pt = (f64, f64);

#[derive(Clone, Copy, Debug)]
pub struct Grid {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    /// Cells per side.
    pub n: usize,
}

impl Grid {
    pub fn square(half_width: f64, n: usize) -> Self {
        Self { x0: -half_width, x1: half_width, y0: -half_width, y1: half_width, n }
    }

    fn x(&self, i: usize) -> f64 {
        self.x0 + (self.x1 - self.x0) * i as f64 / self.n as f64
    }

    fn y(&self, j: usize) -> f64 {
        self.y0 + (self.y1 - self.y0) * j as f64 / self.n as f64
    }
}

/// Line segments approximating {f = 0}. Edge crossings are linearly interpolated;
/// saddle cells are resolved with the cell-centre value.
pub fn segments(f: impl Fn(f64, f64) -> f64, grid: &Grid) -> Vec<(Pt, Pt)> {
    let n = grid.n;
    // exact zeros at vertices are nudged positive so every crossing lies inside an edge
    let nudge = |v: f64| if v == 0.0 { f64::MIN_POSITIVE } else { v };
    let vals: Vec<Vec<f64>> =
        (0..=n).map(|j| (0..=n).map(|i| nudge(f(grid.x(i), grid.y(j)))).collect()).collect();
    let mut out = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            let v: Vec<f64> = corners.iter().map(|&(a, b)| vals[b][a]).collect();
            if v.iter().any(|x| !x.is_finite()) {
                continue;
            }
            let p: Vec<Pt> = corners.iter().map(|&(a, b)| (grid.x(a), grid.y(b))).collect();
            // interpolate from the grid-lower endpoint so neighbouring cells agree bitwise
            let cross = |e: usize| {
                let (a, b) = if corners[e] < corners[(e + 1) % 4] { (e, (e + 1) % 4) } else { ((e + 1) % 4, e) };
                let t = v[a] / (v[a] - v[b]);
                (p[a].0 + t * (p[b].0 - p[a].0), p[a].1 + t * (p[b].1 - p[a].1))
            };
            let edges: Vec<usize> = (0..4).filter(|&e| (v[e] > 0.0) != (v[(e + 1) % 4] > 0.0)).collect();
            match edges.len() {
                2 => out.push((cross(edges[0]), cross(edges[1]))),
                4 => {
                    let c = nudge(f((p[0].0 + p[2].0) / 2.0, (p[0].1 + p[2].1) / 2.0));
                    if (c > 0.0) == (v[0] > 0.0) {
                        out.push((cross(0), cross(1)));
                        out.push((cross(2), cross(3)));
                    } else {
                        out.push((cross(3), cross(0)));
                        out.push((cross(1), cross(2)));
                    }
                }
                _ => {}
            }
        }
    }
    out
}

fn key(p: Pt) -> (i64, i64) {
    ((p.0 * 1e9).round() as i64, (p.1 * 1e9).round() as i64)
}

/// Chains segments sharing endpoints into polylines (deterministic order).
pub fn polylines(segs: &[(Pt, Pt)]) -> Vec<Vec<Pt>> {
    let mut adj: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, (a, b)) in segs.iter().enumerate() {
        adj.entry(key(*a)).or_default().push(i);
        adj.entry(key(*b)).or_default().push(i);
    }
    let mut used = vec![false; segs.len()];
    let mut out = Vec::new();
    let next_from = |p: Pt, used: &Vec<bool>| -> Option<usize> {
        adj.get(&key(p)).and_then(|v| v.iter().copied().find(|&i| !used[i]))
    };
    for start in 0..segs.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let (a, b) = segs[start];
        let mut line = vec![a, b];
        // extend forward then backward
        for forward in [true, false] {
            loop {
                let end = if forward { *line.last().unwrap() } else { line[0] };
                let Some(i) = next_from(end, &used) else { break };
                used[i] = true;
                let (s, t) = segs[i];
                let nxt = if key(s) == key(end) { t } else { s };
                if forward {
                    line.push(nxt);
                } else {
                    line.insert(0, nxt);
                }
            }
        }
        out.push(line);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_is_one_closed_loop() {
        let segs = segments(|x, y| x * x + y * y - 1.0, &Grid::square(2.0, 64));
        let lines = polylines(&segs);
        assert_eq!(lines.len(), 1);
        let l = &lines[0];
        assert_eq!(key(l[0]), key(*l.last().unwrap()));
        for p in l {
            assert!(((p.0 * p.0 + p.1 * p.1).sqrt() - 1.0).abs() < 0.01);
        }
    }

    #[test]
    fn line_crosses_window() {
        let segs = segments(|x, y| y - 0.3 * x - 0.1, &Grid::square(1.0, 20));
        let lines = polylines(&segs);
        assert_eq!(lines.len(), 1);
        for p in &lines[0] {
            assert!((p.1 - 0.3 * p.0 - 0.1).abs() < 1e-12);
        }
    }
}
