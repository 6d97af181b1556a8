//! Exhaustive generation of `Inc^q(shape)` and its partition into
//! promotion orbits.
//!
//! Tableaux are emitted in row-major lexicographic order of their entry
//! sequences by a backtracking search with two per-box bounds: an entry
//! must exceed its left and upper neighbors, and must leave room for a
//! strictly increasing path to the far corner (`entry <= q - chain + 1`,
//! where `chain` is the longest right/down chain starting at the box).
//! The second bound is what turns the naive search into a desk-scale one.
//!
//! For ceilings below the forced minimum the set `Inc^q(shape)` is empty
//! and the stream is simply empty; audits treat that as vacuous.

use crate::dynamics::{orbit, promote, DynamicsError, Orbit};
use crate::shapes::{Cell, Shape};
use crate::tableaux::IncreasingTableau;
use rayon::prelude::*;
use std::collections::HashSet;

/// What to enumerate: a straight shape and an entry ceiling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumSpec {
    shape: Shape,
    q: u32,
}

impl EnumSpec {
    /// Panics if the shape is not straight; enumeration of skew fillings
    /// is not supported.
    pub fn new(shape: Shape, q: u32) -> Self {
        assert!(shape.is_straight(), "enumeration requires a straight shape");
        EnumSpec { shape, q }
    }

    pub fn rectangle(m: usize, n: usize, q: u32) -> Self {
        EnumSpec::new(Shape::rectangle(m, n), q)
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn q(&self) -> u32 {
        self.q
    }
}

/// A residue-class constraint on one box, used to shard the search tree
/// into independent ranges for parallel runs.
#[derive(Clone, Copy, Debug)]
struct Constraint {
    box_index: usize,
    modulus: u32,
    residue: u32,
}

/// Streaming enumerator over `Inc^q(shape)` in row-major lexicographic order.
pub struct Enumerator {
    q: u32,
    shape: Shape,
    cells: Vec<Cell>,
    left: Vec<Option<usize>>,
    up: Vec<Option<usize>>,
    /// longest strictly increasing right/down chain starting at each box
    chain: Vec<u32>,
    constraint: Option<Constraint>,
    vals: Vec<u32>,
    state: WalkState,
}

#[derive(PartialEq)]
enum WalkState {
    Fresh,
    Mid,
    Done,
}

impl Enumerator {
    pub fn new(spec: &EnumSpec) -> Self {
        let shape = spec.shape.clone();
        let cells: Vec<Cell> = shape.cells().collect();
        let index_of = |target: Cell| cells.binary_search(&target).ok();
        let left = cells
            .iter()
            .map(|c| c.left().and_then(index_of))
            .collect();
        let up = cells.iter().map(|c| c.up().and_then(index_of)).collect();
        let mut chain = vec![0u32; cells.len()];
        for (k, c) in cells.iter().enumerate().rev() {
            let right = index_of(c.right()).map_or(0, |j| chain[j]);
            let down = index_of(c.down()).map_or(0, |j| chain[j]);
            chain[k] = 1 + right.max(down);
        }
        Enumerator {
            q: spec.q,
            shape,
            vals: vec![0; cells.len()],
            left,
            up,
            chain,
            cells,
            constraint: None,
            state: WalkState::Fresh,
        }
    }

    /// Restricts the stream to tableaux strictly greater (row-major
    /// lexicographically) than `watermark`, which must be a valid member.
    pub fn resume_after(spec: &EnumSpec, watermark: &IncreasingTableau) -> Self {
        let mut e = Enumerator::new(spec);
        assert_eq!(watermark.shape(), &e.shape, "watermark shape mismatch");
        e.vals = watermark.row_major().collect();
        e.state = WalkState::Mid;
        e
    }

    /// Splits the search into `jobs` disjoint sub-streams by the residue of
    /// the first box whose value is not forced. Their union is the whole
    /// stream.
    pub fn shards(spec: &EnumSpec, jobs: usize) -> Vec<Enumerator> {
        let jobs = jobs.max(1);
        let probe = Enumerator::new(spec);
        // first box where lower < upper once everything before is minimal
        let mut vals = vec![0u32; probe.cells.len()];
        let mut split = None;
        for k in 0..probe.cells.len() {
            let lo = probe.lower(k, &vals);
            if lo < probe.upper(k) {
                split = Some(k);
                break;
            }
            vals[k] = lo;
        }
        let Some(box_index) = split else {
            // at most one tableau; a single shard covers it
            return vec![probe];
        };
        (0..jobs as u32)
            .map(|residue| {
                let mut e = Enumerator::new(spec);
                e.constraint = Some(Constraint {
                    box_index,
                    modulus: jobs as u32,
                    residue,
                });
                e
            })
            .collect()
    }

    fn lower(&self, k: usize, vals: &[u32]) -> u32 {
        let l = self.left[k].map_or(0, |j| vals[j]);
        let u = self.up[k].map_or(0, |j| vals[j]);
        l.max(u) + 1
    }

    fn upper(&self, k: usize) -> u32 {
        // q - (chain - 1): room for the strictly increasing path out
        (self.q + 1).saturating_sub(self.chain[k])
    }

    /// Smallest candidate >= `v` at box `k` under the shard constraint.
    fn round_up(&self, k: usize, v: u32) -> u32 {
        match self.constraint {
            Some(c) if c.box_index == k => {
                let rem = v % c.modulus;
                if rem <= c.residue {
                    v + (c.residue - rem)
                } else {
                    v + c.modulus - (rem - c.residue)
                }
            }
            _ => v,
        }
    }

    fn step(&self, k: usize) -> u32 {
        match self.constraint {
            Some(c) if c.box_index == k => c.modulus,
            _ => 1,
        }
    }

    /// Advances `vals` to the next complete assignment. `bump_from` is the
    /// box whose value must strictly increase first, or `None` to descend
    /// from scratch.
    fn seek(&mut self, bump_from: Option<usize>) -> bool {
        let n = self.cells.len();
        let mut k;
        match bump_from {
            None => k = 0,
            Some(b) => {
                k = b;
                loop {
                    let next = self.round_up(k, self.vals[k] + self.step(k));
                    if next <= self.upper(k) && next > self.vals[k] {
                        self.vals[k] = next;
                        k += 1;
                        break;
                    }
                    if k == 0 {
                        return false;
                    }
                    k -= 1;
                }
            }
        }
        while k < n {
            let v = self.round_up(k, self.lower(k, &self.vals));
            if v <= self.upper(k) {
                self.vals[k] = v;
                k += 1;
            } else {
                // dead end: bump the previous box
                loop {
                    if k == 0 {
                        return false;
                    }
                    k -= 1;
                    let next = self.round_up(k, self.vals[k] + self.step(k));
                    if next <= self.upper(k) {
                        self.vals[k] = next;
                        k += 1;
                        break;
                    }
                }
            }
        }
        true
    }

    fn current(&self) -> IncreasingTableau {
        let mut rows: Vec<Vec<u32>> = Vec::with_capacity(self.shape.num_rows());
        let mut it = self.vals.iter();
        for r in 1..=self.shape.num_rows() {
            let (lo, hi) = self.shape.row_bounds(r);
            rows.push((&mut it).take(hi - lo).copied().collect());
        }
        IncreasingTableau::new(self.shape.clone(), rows, self.q)
            .expect("search bounds keep the filling increasing")
    }
}

impl Iterator for Enumerator {
    type Item = IncreasingTableau;

    fn next(&mut self) -> Option<IncreasingTableau> {
        let found = match self.state {
            WalkState::Done => return None,
            WalkState::Fresh => {
                self.state = WalkState::Mid;
                self.seek(None)
            }
            WalkState::Mid => {
                let n = self.cells.len();
                n > 0 && self.seek(Some(n - 1))
            }
        };
        if !found {
            self.state = WalkState::Done;
            return None;
        }
        Some(self.current())
    }
}

/// All of `Inc^q(shape)`, streamed in row-major lexicographic order.
pub fn enumerate(spec: &EnumSpec) -> Enumerator {
    Enumerator::new(spec)
}

pub fn count(spec: &EnumSpec) -> u64 {
    enumerate(spec).count() as u64
}

pub fn count_parallel(spec: &EnumSpec, jobs: usize) -> u64 {
    Enumerator::shards(spec, jobs)
        .into_par_iter()
        .map(|shard| shard.count() as u64)
        .sum()
}

/// Partitions `Inc^q(shape)` into promotion orbits, each reported once via
/// its canonical (lexicographically least) representative, in canonical
/// order. `budget` bounds the promotions spent on any single orbit walk.
pub fn orbit_partition(
    spec: &EnumSpec,
    budget: u64,
    jobs: usize,
) -> Result<Vec<Orbit>, DynamicsError> {
    if jobs > 1 {
        return orbit_partition_sharded(spec, budget, jobs);
    }
    let mut orbits = Vec::new();
    let mut visited: HashSet<Vec<u8>> = HashSet::new();
    for t in enumerate(spec) {
        if visited.contains(&t.packed_key()) {
            continue;
        }
        // lexicographic emission means t is its orbit's canonical element
        let o = orbit(&t, budget)?;
        for e in o.elements() {
            visited.insert(e.packed_key());
        }
        orbits.push(o);
    }
    Ok(orbits)
}

/// Shard-parallel orbit partition: each shard walks the orbit of each of
/// its tableaux just far enough to decide whether the tableau is the
/// canonical representative, and keeps the full orbit only then. Results
/// merge by canonical key, so the outcome is independent of scheduling.
fn orbit_partition_sharded(
    spec: &EnumSpec,
    budget: u64,
    jobs: usize,
) -> Result<Vec<Orbit>, DynamicsError> {
    let shards = Enumerator::shards(spec, jobs);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool");
    let per_shard: Vec<Result<Vec<Orbit>, DynamicsError>> = pool.install(|| {
        shards
            .into_par_iter()
            .map(|shard| {
                let mut found = Vec::new();
                for t in shard {
                    match walk_if_canonical(&t, budget)? {
                        Some(o) => found.push(o),
                        None => continue,
                    }
                }
                Ok(found)
            })
            .collect()
    });
    let mut orbits: Vec<Orbit> = Vec::new();
    for r in per_shard {
        orbits.extend(r?);
    }
    orbits.sort_by(|a, b| {
        a.canonical()
            .row_major()
            .cmp(b.canonical().row_major())
    });
    Ok(orbits)
}

/// Walks the orbit of `t`, aborting early (with `None`) as soon as an
/// element smaller than `t` shows up.
fn walk_if_canonical(
    t: &IncreasingTableau,
    budget: u64,
) -> Result<Option<Orbit>, DynamicsError> {
    let mut elements = vec![t.clone()];
    let mut steps = 0u64;
    loop {
        let next = promote(elements.last().unwrap());
        steps += 1;
        if next == *t {
            return Ok(Some(Orbit::from_walk(elements)));
        }
        if next.row_major().lt(t.row_major()) {
            return Ok(None);
        }
        if steps >= budget {
            return Err(DynamicsError::BudgetExceeded { budget });
        }
        elements.push(next);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::DEFAULT_ORBIT_BUDGET;
    use crate::shapes::Partition;

    fn binomial(n: u64, k: u64) -> u64 {
        if k > n {
            return 0;
        }
        (1..=k).fold(1, |acc, i| acc * (n - i + 1) / i)
    }

    #[test]
    fn forced_minimum_is_unique() {
        let spec = EnumSpec::rectangle(2, 2, 3);
        let all: Vec<_> = enumerate(&spec).collect();
        assert_eq!(all.len(), 1);
        assert_eq!(
            all[0],
            IncreasingTableau::from_rows(3, &[&[1, 2], &[2, 3]]).unwrap()
        );
    }

    #[test]
    fn single_rows_count_subsets() {
        for (n, q) in [(1, 4), (2, 5), (3, 7), (4, 6)] {
            let spec = EnumSpec::rectangle(1, n, q);
            assert_eq!(count(&spec), binomial(q as u64, n as u64), "1x{n}, q={q}");
        }
    }

    #[test]
    fn below_minimum_is_empty() {
        assert_eq!(count(&EnumSpec::rectangle(2, 2, 2)), 0);
        assert_eq!(count(&EnumSpec::rectangle(3, 3, 4)), 0);
    }

    #[test]
    fn emission_is_lexicographic_and_duplicate_free() {
        let spec = EnumSpec::rectangle(2, 3, 5);
        let keys: Vec<Vec<u8>> = enumerate(&spec).map(|t| t.packed_key()).collect();
        assert!(!keys.is_empty());
        for w in keys.windows(2) {
            assert!(w[0] < w[1], "not strictly increasing");
        }
    }

    #[test]
    fn general_straight_shapes_enumerate() {
        let spec = EnumSpec::new(
            Shape::straight(Partition::new(vec![3, 2]).unwrap()),
            5,
        );
        let all: Vec<_> = enumerate(&spec).collect();
        assert!(!all.is_empty());
        for t in &all {
            assert_eq!(t.ceiling(), 5);
        }
    }

    #[test]
    fn shards_partition_the_stream() {
        let spec = EnumSpec::rectangle(2, 3, 6);
        let whole: Vec<Vec<u8>> = enumerate(&spec).map(|t| t.packed_key()).collect();
        for jobs in [1, 2, 3, 5] {
            let mut merged: Vec<Vec<u8>> = Enumerator::shards(&spec, jobs)
                .into_iter()
                .flat_map(|s| s.map(|t| t.packed_key()).collect::<Vec<_>>())
                .collect();
            merged.sort();
            assert_eq!(merged, whole, "jobs={jobs}");
        }
        assert_eq!(count_parallel(&spec, 3), whole.len() as u64);
    }

    #[test]
    fn resume_after_continues_the_stream() {
        let spec = EnumSpec::rectangle(2, 2, 5);
        let all: Vec<_> = enumerate(&spec).collect();
        let k = all.len() / 2;
        let rest: Vec<_> = Enumerator::resume_after(&spec, &all[k]).collect();
        assert_eq!(rest, all[k + 1..]);
    }

    #[test]
    fn orbit_partition_covers_exactly() {
        let spec = EnumSpec::rectangle(2, 3, 5);
        let total = count(&spec);
        let orbits = orbit_partition(&spec, DEFAULT_ORBIT_BUDGET, 1).unwrap();
        let sum: u64 = orbits.iter().map(|o| o.size() as u64).sum();
        assert_eq!(sum, total);
        let mut seen = HashSet::new();
        for o in &orbits {
            for e in o.elements() {
                assert!(seen.insert(e.packed_key()), "orbits overlap");
            }
        }
    }

    #[test]
    fn two_row_orbit_sizes_divide_q() {
        for q in 4..=6 {
            let spec = EnumSpec::rectangle(2, 3, q);
            for o in orbit_partition(&spec, DEFAULT_ORBIT_BUDGET, 1).unwrap() {
                assert_eq!(
                    q as usize % o.size(),
                    0,
                    "orbit size {} at q={q}",
                    o.size()
                );
            }
        }
    }

    #[test]
    fn parallel_orbit_partition_matches_sequential() {
        let spec = EnumSpec::rectangle(3, 3, 6);
        let seq = orbit_partition(&spec, DEFAULT_ORBIT_BUDGET, 1).unwrap();
        let par = orbit_partition(&spec, DEFAULT_ORBIT_BUDGET, 3).unwrap();
        assert_eq!(seq.len(), par.len());
        for (a, b) in seq.iter().zip(&par) {
            assert_eq!(a.canonical(), b.canonical());
            assert_eq!(a.size(), b.size());
        }
    }

    #[test]
    fn single_forced_tableau_is_one_orbit() {
        let spec = EnumSpec::rectangle(2, 2, 3);
        let orbits = orbit_partition(&spec, 100, 1).unwrap();
        assert_eq!(orbits.len(), 1);
        assert_eq!(orbits[0].size(), 1);
    }
}
