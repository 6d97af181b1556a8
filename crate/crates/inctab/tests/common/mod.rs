//! Independent oracles and generators shared by the integration suites.
//!
//! Everything here deliberately avoids the library's sliding machinery:
//! classical promotion and classical jeu de taquin are implemented directly
//! on grids, subsequence lengths by exhaustive search, and tiny families by
//! unpruned filtering, so they can stand as cross-checks.

#![allow(dead_code)] // each test target uses its own subset

use inctab::shapes::{Cell, Partition, Shape};
use inctab::tableaux::{BulletEntry, BulletFilling, IncreasingTableau};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

/// Classical Schuetzenberger promotion of a standard Young tableau, done
/// the textbook way: delete the 1, slide the hole by always moving the
/// smaller of the right/down neighbors, write `n+1` in the final hole,
/// decrement everything.
pub fn classical_promotion(rows: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut g: Vec<Vec<u32>> = rows.to_vec();
    let n: u32 = g.iter().map(|r| r.len() as u32).sum();
    assert_eq!(g[0][0], 1, "a standard tableau holds 1 in its corner");
    let (mut r, mut c) = (0usize, 0usize);
    loop {
        let right = g[r].get(c + 1).copied();
        let down = g.get(r + 1).and_then(|row| row.get(c)).copied();
        match (right, down) {
            (None, None) => break,
            (Some(x), None) => {
                g[r][c] = x;
                c += 1;
            }
            (None, Some(y)) => {
                g[r][c] = y;
                r += 1;
            }
            (Some(x), Some(y)) => {
                if x < y {
                    g[r][c] = x;
                    c += 1;
                } else {
                    g[r][c] = y;
                    r += 1;
                }
            }
        }
    }
    g[r][c] = n + 1;
    for row in &mut g {
        for v in row {
            *v -= 1;
        }
    }
    g
}

/// Classical jeu de taquin slide of a standard skew tableau into one inner
/// corner, as a map from boxes to entries.
pub fn classical_jdt_slide(
    t: &IncreasingTableau,
    corner: Cell,
) -> HashMap<Cell, u32> {
    let mut entries: HashMap<Cell, u32> = t
        .shape()
        .cells()
        .map(|b| (b, t.entry(b).unwrap()))
        .collect();
    let mut hole = corner;
    loop {
        let right = entries.get(&hole.right()).copied();
        let down = entries.get(&hole.down()).copied();
        let target = match (right, down) {
            (None, None) => break,
            (Some(_), None) => hole.right(),
            (None, Some(_)) => hole.down(),
            (Some(x), Some(y)) => {
                if x < y {
                    hole.right()
                } else {
                    hole.down()
                }
            }
        };
        let v = entries.remove(&target).unwrap();
        entries.insert(hole, v);
        hole = target;
    }
    entries
}

/// Longest strictly increasing subsequence length by trying all 2^n
/// subsequences.
pub fn brute_lis(w: &[u32]) -> usize {
    assert!(w.len() <= 20);
    let mut best = 0;
    for mask in 0u32..(1 << w.len()) {
        let picked: Vec<u32> = (0..w.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| w[i])
            .collect();
        if picked.windows(2).all(|p| p[0] < p[1]) {
            best = best.max(picked.len());
        }
    }
    best
}

pub fn brute_lds(w: &[u32]) -> usize {
    let complemented: Vec<u32> = w.iter().map(|&v| u32::MAX - v).collect();
    brute_lis(&complemented)
}

/// Counts increasing tableaux of a straight shape by filtering every
/// filling in `[1,q]^boxes`. Tiny inputs only.
pub fn brute_count_increasing(parts: &[usize], q: u32) -> u64 {
    let shape = Shape::straight(Partition::new(parts.to_vec()).unwrap());
    let n = shape.num_cells();
    assert!((q as u64).pow(n as u32) <= 20_000_000);
    let mut count = 0;
    let mut vals = vec![1u32; n];
    loop {
        let mut it = vals.iter();
        let rows: Vec<Vec<u32>> = (1..=shape.num_rows())
            .map(|r| {
                let (lo, hi) = shape.row_bounds(r);
                (&mut it).take(hi - lo).copied().collect()
            })
            .collect();
        if IncreasingTableau::new(shape.clone(), rows, q).is_ok() {
            count += 1;
        }
        // odometer over [1,q]^n
        let mut k = 0;
        loop {
            if k == n {
                return count;
            }
            if vals[k] < q {
                vals[k] += 1;
                break;
            }
            vals[k] = 1;
            k += 1;
        }
    }
}

/// Every standard Young tableau of the given straight shape, built by
/// removing the largest entry from an outer corner and recursing.
pub fn all_standard_tableaux(parts: &[usize]) -> Vec<Vec<Vec<u32>>> {
    let n: usize = parts.iter().sum();
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for r in 0..parts.len() {
        let len = parts[r];
        if len == 0 || (r + 1 < parts.len() && parts[r + 1] == len) {
            continue; // not an outer corner
        }
        let mut smaller = parts.to_vec();
        smaller[r] -= 1;
        while smaller.last() == Some(&0) {
            smaller.pop();
        }
        for mut g in all_standard_tableaux(&smaller) {
            if g.len() <= r {
                g.push(Vec::new());
            }
            g[r].push(n as u32);
            out.push(g);
        }
    }
    out
}

/// All partitions of `n`, largest part first.
pub fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=n.min(max)).rev() {
            prefix.push(part);
            go(n - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

fn random_partition(rng: &mut ChaCha8Rng, max_rows: usize, max_cols: usize) -> Vec<usize> {
    let rows = rng.gen_range(1..=max_rows);
    let mut parts = Vec::with_capacity(rows);
    let mut cap = rng.gen_range(1..=max_cols);
    for _ in 0..rows {
        let p = rng.gen_range(1..=cap);
        parts.push(p);
        cap = p;
    }
    parts
}

/// A random skew increasing tableau: random outer/inner partitions, then a
/// greedy fill where every box draws uniformly from its feasible range.
pub fn random_skew_tableau(rng: &mut ChaCha8Rng) -> IncreasingTableau {
    loop {
        let outer = random_partition(rng, 4, 7);
        let mut inner: Vec<usize> = Vec::new();
        let mut cap = usize::MAX;
        for &o in &outer {
            let i = rng.gen_range(0..=o.min(cap));
            inner.push(i);
            cap = i;
        }
        let shape = Shape::new(
            Partition::new(outer).unwrap(),
            Partition::new(inner).unwrap(),
        )
        .unwrap();
        if shape.num_cells() == 0 {
            continue;
        }
        let cells: Vec<Cell> = shape.cells().collect();
        // longest right/down chain per box, for the upper bound
        let mut chain: HashMap<Cell, u32> = HashMap::new();
        for &b in cells.iter().rev() {
            let r = chain.get(&b.right()).copied().unwrap_or(0);
            let d = chain.get(&b.down()).copied().unwrap_or(0);
            chain.insert(b, 1 + r.max(d));
        }
        let longest = chain.values().copied().max().unwrap();
        let q = longest + rng.gen_range(0..=4);
        let mut entries: HashMap<Cell, u32> = HashMap::new();
        for &b in &cells {
            let left = b.left().and_then(|x| entries.get(&x)).copied().unwrap_or(0);
            let up = b.up().and_then(|x| entries.get(&x)).copied().unwrap_or(0);
            let lo = left.max(up) + 1;
            let hi = q + 1 - chain[&b];
            entries.insert(b, rng.gen_range(lo..=hi));
        }
        let rows = (1..=shape.num_rows())
            .map(|r| {
                let (lo, hi) = shape.row_bounds(r);
                (lo + 1..=hi)
                    .map(|c| entries[&Cell::new(r, c)])
                    .collect()
            })
            .collect();
        return IncreasingTableau::new(shape, rows, q).expect("greedy fill is increasing");
    }
}

/// A random rectangular increasing tableau with the given dimensions.
pub fn random_rect_tableau(rng: &mut ChaCha8Rng, m: usize, n: usize, q: u32) -> IncreasingTableau {
    assert!(q as usize >= m + n - 1);
    let shape = Shape::rectangle(m, n);
    let mut grid = vec![vec![0u32; n]; m];
    for r in 0..m {
        for c in 0..n {
            let left = if c > 0 { grid[r][c - 1] } else { 0 };
            let up = if r > 0 { grid[r - 1][c] } else { 0 };
            let lo = left.max(up) + 1;
            let hi = q - (m - 1 - r) as u32 - (n - 1 - c) as u32;
            grid[r][c] = rng.gen_range(lo..=hi);
        }
    }
    IncreasingTableau::new(shape, grid, q).expect("greedy fill is increasing")
}

/// A random bullet filling over a random straight shape.
pub fn random_bullet_filling(rng: &mut ChaCha8Rng) -> BulletFilling {
    let outer = random_partition(rng, 4, 6);
    let shape = Shape::straight(Partition::new(outer).unwrap());
    let q = rng.gen_range(2..=9);
    let rows = (1..=shape.num_rows())
        .map(|r| {
            let (lo, hi) = shape.row_bounds(r);
            (lo..hi)
                .map(|_| {
                    if rng.gen_bool(0.25) {
                        BulletEntry::Bullet
                    } else {
                        BulletEntry::Num(rng.gen_range(1..=q + 1))
                    }
                })
                .collect()
        })
        .collect();
    BulletFilling::new(shape, rows, q).unwrap()
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entry map of a tableau, for comparisons against oracle output.
pub fn entry_map(t: &IncreasingTableau) -> HashMap<Cell, u32> {
    t.shape()
        .cells()
        .map(|b| (b, t.entry(b).unwrap()))
        .collect()
}
