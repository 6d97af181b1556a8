//! The K-jeu de taquin operator calculus.
//!
//! The primitive is `swap(i, _)`: on every edge-connected component of the
//! boxes holding `i` or a bullet, exchange the two symbols, leaving
//! single-box components alone. A slide at a set `I` of inner corners is
//!
//! ```text
//! slide_I = remove_bullets . swap_q . ... . swap_2 . swap_1 . add_bullets_I
//! ```
//!
//! and iterating slides until the shape is straight produces a
//! rectification. Rectifications of an increasing tableau are not unique:
//! different corner choices may produce different straight shapes, which is
//! why the corner strategy is explicit.

use crate::shapes::Cell;
use crate::tableaux::{BulletEntry, BulletFilling, IncreasingTableau};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{HashSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SlideError {
    #[error("the corner set must be nonempty")]
    EmptyCornerSet,
    #[error("{0} is not an inner corner of the shape")]
    NotInnerCorner(Cell),
    #[error("bullet at {0} is not at an outer corner")]
    BulletNotAtOuterCorner(Cell),
    #[error("deleting bullets left a non-increasing filling: {0}")]
    NotIncreasing(crate::tableaux::TableauError),
}

/// Exchanges `i` and bullets on every nontrivial edge-connected component
/// of the boxes holding either symbol. Single-box components are untouched;
/// all other boxes are untouched.
pub fn swap(i: u32, x: &BulletFilling) -> BulletFilling {
    let involved: HashSet<Cell> = x
        .cells()
        .filter(|&c| match x.entry(c) {
            Some(BulletEntry::Bullet) => true,
            Some(BulletEntry::Num(v)) => v == i,
            None => false,
        })
        .collect();
    let mut out = x.clone();
    let mut seen: HashSet<Cell> = HashSet::new();
    for &start in &involved {
        if seen.contains(&start) {
            continue;
        }
        // BFS over the component of `start` inside `involved`
        let mut component = Vec::new();
        let mut queue = VecDeque::from([start]);
        seen.insert(start);
        while let Some(c) = queue.pop_front() {
            component.push(c);
            for nb in c.neighbors() {
                if involved.contains(&nb) && seen.insert(nb) {
                    queue.push_back(nb);
                }
            }
        }
        if component.len() < 2 {
            continue;
        }
        for c in component {
            let flipped = match x.entry(c).unwrap() {
                BulletEntry::Bullet => BulletEntry::Num(i),
                BulletEntry::Num(_) => BulletEntry::Bullet,
            };
            out.set_entry(c, flipped);
        }
    }
    out
}

/// Extends a skew tableau with a bullet in each box of `corners`, every one
/// of which must be an inner corner of the tableau's shape.
pub fn add_bullets(
    t: &IncreasingTableau,
    corners: &[Cell],
) -> Result<BulletFilling, SlideError> {
    if corners.is_empty() {
        return Err(SlideError::EmptyCornerSet);
    }
    let inner_corners = t.shape().inner_corners();
    for c in corners {
        if !inner_corners.contains(c) {
            return Err(SlideError::NotInnerCorner(*c));
        }
    }
    let grown = t.shape().grow_inward(corners);
    let mut rows = Vec::with_capacity(grown.num_rows());
    for r in 1..=grown.num_rows() {
        let (lo, hi) = grown.row_bounds(r);
        let row = (lo + 1..=hi)
            .map(|c| {
                let cell = Cell::new(r, c);
                match t.entry(cell) {
                    Some(v) => BulletEntry::Num(v),
                    None => BulletEntry::Bullet,
                }
            })
            .collect();
        rows.push(row);
    }
    Ok(BulletFilling::new(grown, rows, t.ceiling()).expect("rows match the grown shape"))
}

/// Deletes every bullet; defined only when each bullet sits at an outer
/// corner of the filling's shape. A failure here coming from `slide` would
/// be an invariant violation, so the error carries the offending box.
pub fn remove_bullets(x: &BulletFilling) -> Result<IncreasingTableau, SlideError> {
    let bullets = x.bullets();
    let outer_corners = x.shape().outer_corners();
    for b in &bullets {
        if !outer_corners.contains(b) {
            return Err(SlideError::BulletNotAtOuterCorner(*b));
        }
    }
    let shrunk = x.shape().shrink_outer(&bullets);
    let mut rows = Vec::with_capacity(shrunk.num_rows());
    for r in 1..=shrunk.num_rows() {
        let (lo, hi) = shrunk.row_bounds(r);
        let row = (lo + 1..=hi)
            .map(|c| x.entry(Cell::new(r, c)).unwrap().num().unwrap())
            .collect();
        rows.push(row);
    }
    IncreasingTableau::new(shrunk, rows, x.ceiling()).map_err(SlideError::NotIncreasing)
}

/// One K-jeu de taquin slide of `t` at the inner corners `corners`.
pub fn slide(t: &IncreasingTableau, corners: &[Cell]) -> Result<IncreasingTableau, SlideError> {
    slide_with_trace(t, corners, |_, _| {})
}

/// As `slide`, reporting each intermediate stage to `on_stage` with a label
/// such as `"swap 3"`.
pub fn slide_with_trace(
    t: &IncreasingTableau,
    corners: &[Cell],
    mut on_stage: impl FnMut(&str, &BulletFilling),
) -> Result<IncreasingTableau, SlideError> {
    let mut x = add_bullets(t, corners)?;
    on_stage("add bullets", &x);
    for i in 1..=t.ceiling() {
        x = swap(i, &x);
        on_stage(&format!("swap {i}"), &x);
    }
    // unreachable from a valid increasing tableau; a failure here is an
    // invariant violation, so keep the counterexample state in the message
    remove_bullets(&x).map_err(|e| {
        panic!("slide invariant violated: {e}; final stage {x:?}, input {t:?}")
    })
}

/// Chooses which nonempty set of inner corners each slide of a
/// rectification uses.
#[derive(Clone, Debug)]
pub enum CornerStrategy {
    /// Every inner corner, every step. Deterministic; the default.
    AllCorners,
    /// A fixed list of corner sets, one per slide. Boxes that are not
    /// inner corners at their step are ignored; after the list runs out
    /// (or a set contributes nothing) the remaining slides use all corners.
    FixedSequence(Vec<Vec<Cell>>),
    /// A uniformly random nonempty subset of the inner corners each step,
    /// from a seeded generator, so runs are reproducible.
    SeededRandom(u64),
}

enum StrategyState<'a> {
    All,
    Fixed(std::slice::Iter<'a, Vec<Cell>>),
    Random(Box<ChaCha8Rng>),
}

impl StrategyState<'_> {
    fn next_corners(&mut self, available: &[Cell]) -> Vec<Cell> {
        match self {
            StrategyState::All => available.to_vec(),
            StrategyState::Fixed(seq) => {
                for set in seq.by_ref() {
                    let valid: Vec<Cell> = set
                        .iter()
                        .copied()
                        .filter(|c| available.contains(c))
                        .collect();
                    if !valid.is_empty() {
                        return valid;
                    }
                }
                available.to_vec()
            }
            StrategyState::Random(rng) => {
                let mut picked: Vec<Cell> = available
                    .iter()
                    .copied()
                    .filter(|_| rng.gen_bool(0.5))
                    .collect();
                if picked.is_empty() {
                    picked.push(*available.choose(rng).unwrap());
                }
                picked
            }
        }
    }
}

/// Iterates slides until the shape is straight. Terminates in at most
/// `|inner|` slides since every slide strictly shrinks the inner partition.
pub fn rectify(t: &IncreasingTableau, strategy: &CornerStrategy) -> IncreasingTableau {
    let mut state = match strategy {
        CornerStrategy::AllCorners => StrategyState::All,
        CornerStrategy::FixedSequence(seq) => StrategyState::Fixed(seq.iter()),
        CornerStrategy::SeededRandom(seed) => {
            StrategyState::Random(Box::new(ChaCha8Rng::seed_from_u64(*seed)))
        }
    };
    let mut current = t.clone();
    loop {
        let corners = current.shape().inner_corners();
        if corners.is_empty() {
            return current;
        }
        let chosen = state.next_corners(&corners);
        current = slide(&current, &chosen).expect("strategy emits valid inner corners");
    }
}

/// Length of the longest strictly increasing subsequence.
pub fn lis(w: &[u32]) -> usize {
    // patience piles: tails[k] = least possible tail of an increasing
    // subsequence of length k+1
    let mut tails: Vec<u32> = Vec::new();
    for &x in w {
        let pos = tails.partition_point(|&t| t < x);
        if pos == tails.len() {
            tails.push(x);
        } else {
            tails[pos] = x;
        }
    }
    tails.len()
}

/// Length of the longest strictly decreasing subsequence.
pub fn lds(w: &[u32]) -> usize {
    let rev: Vec<u32> = w.iter().rev().copied().collect();
    lis(&rev)
}
