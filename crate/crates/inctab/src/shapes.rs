//! Partitions, skew shapes, boxes, corners, frames, and 180-degree rotation.
//!
//! All shapes live in English orientation: row 1 is the top row, and both
//! rows and columns are indexed from 1. Everything here is immutable after
//! construction and safe to share across threads.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShapeError {
    #[error("partition parts must be weakly decreasing, got {0:?}")]
    NotWeaklyDecreasing(Vec<usize>),
    #[error("inner partition ({inner}) is not contained in outer partition ({outer})")]
    InnerNotContained { outer: Partition, inner: Partition },
    #[error("invalid shape syntax {0:?}; expected \"MxN\", \"a,b,c\", or \"a,b,c/d,e\"")]
    Syntax(String),
}

/// An integer partition, identified with its Ferrers diagram.
///
/// Parts are weakly decreasing and trailing zeros are stripped on
/// construction, so structural equality coincides with equality of diagrams.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self, ShapeError> {
        if !parts.windows(2).all(|w| w[0] >= w[1]) {
            return Err(ShapeError::NotWeaklyDecreasing(parts));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition::default()
    }

    /// The rectangular partition with `m` rows of length `n`.
    pub fn rectangular(m: usize, n: usize) -> Self {
        if n == 0 {
            return Partition::empty();
        }
        Partition { parts: vec![n; m] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// The `i`-th part (0-based), or 0 past the end.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Number of boxes.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Containment of Ferrers diagrams: `other[i] <= self[i]` for all rows.
    pub fn contains(&self, other: &Partition) -> bool {
        (0..other.len()).all(|i| other.part(i) <= self.part(i))
    }

    pub fn contains_cell(&self, c: Cell) -> bool {
        c.col <= self.part(c.row - 1)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "-");
        }
        let s = self
            .parts
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",");
        write!(f, "{s}")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition({})", self)
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = ShapeError;
    fn try_from(parts: Vec<usize>) -> Result<Self, ShapeError> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Vec<usize> {
        p.parts
    }
}

/// A box of a Young diagram: 1-based `(row, col)`, row 1 on top.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub fn new(row: usize, col: usize) -> Self {
        assert!(row >= 1 && col >= 1, "cells are 1-based");
        Cell { row, col }
    }

    pub fn right(self) -> Cell {
        Cell::new(self.row, self.col + 1)
    }

    pub fn down(self) -> Cell {
        Cell::new(self.row + 1, self.col)
    }

    pub fn left(self) -> Option<Cell> {
        (self.col > 1).then(|| Cell::new(self.row, self.col - 1))
    }

    pub fn up(self) -> Option<Cell> {
        (self.row > 1).then(|| Cell::new(self.row - 1, self.col))
    }

    /// The up-to-four edge neighbors (diagonal boxes are never adjacent).
    pub fn neighbors(self) -> impl Iterator<Item = Cell> {
        [self.up(), self.left(), Some(self.right()), Some(self.down())]
            .into_iter()
            .flatten()
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

impl fmt::Debug for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// A straight or skew shape: the boxes of `outer` not in `inner`.
///
/// Row `r` holds the boxes `(r, c)` with `inner[r] < c <= outer[r]`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Shape {
    outer: Partition,
    inner: Partition,
}

impl Shape {
    pub fn new(outer: Partition, inner: Partition) -> Result<Self, ShapeError> {
        if !outer.contains(&inner) {
            return Err(ShapeError::InnerNotContained { outer, inner });
        }
        Ok(Shape { outer, inner })
    }

    pub fn straight(outer: Partition) -> Self {
        Shape {
            outer,
            inner: Partition::empty(),
        }
    }

    /// The `m x n` rectangle as a straight shape.
    pub fn rectangle(m: usize, n: usize) -> Self {
        Shape::straight(Partition::rectangular(m, n))
    }

    pub fn outer(&self) -> &Partition {
        &self.outer
    }

    pub fn inner(&self) -> &Partition {
        &self.inner
    }

    pub fn is_straight(&self) -> bool {
        self.inner.is_empty()
    }

    /// `Some((m, n))` if this is a straight `m x n` rectangle. Empty is (0,0).
    pub fn rectangle_dims(&self) -> Option<(usize, usize)> {
        if !self.is_straight() {
            return None;
        }
        if self.outer.is_empty() {
            return Some((0, 0));
        }
        let n = self.outer.part(0);
        let m = self.outer.len();
        self.outer.parts().iter().all(|&p| p == n).then_some((m, n))
    }

    pub fn num_rows(&self) -> usize {
        self.outer.len()
    }

    /// `(inner_r, outer_r)` for row `r` (1-based): boxes are cols `inner_r+1..=outer_r`.
    pub fn row_bounds(&self, row: usize) -> (usize, usize) {
        (self.inner.part(row - 1), self.outer.part(row - 1))
    }

    pub fn contains(&self, c: Cell) -> bool {
        let (lo, hi) = self.row_bounds(c.row);
        lo < c.col && c.col <= hi
    }

    /// All boxes in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (1..=self.num_rows()).flat_map(move |r| {
            let (lo, hi) = self.row_bounds(r);
            (lo + 1..=hi).map(move |c| Cell::new(r, c))
        })
    }

    pub fn num_cells(&self) -> usize {
        self.outer.size() - self.inner.size()
    }

    /// Boxes `b` of the inner partition with neither `b.right()` nor
    /// `b.down()` in the inner partition. Empty for straight shapes.
    pub fn inner_corners(&self) -> Vec<Cell> {
        (1..=self.inner.len())
            .filter_map(|r| {
                let c = self.inner.part(r - 1);
                (c > 0 && self.inner.part(r) < c).then(|| Cell::new(r, c))
            })
            .collect()
    }

    /// Boxes of the shape with no shape box to the right or below.
    pub fn outer_corners(&self) -> Vec<Cell> {
        (1..=self.num_rows())
            .filter_map(|r| {
                let (lo, hi) = self.row_bounds(r);
                if lo >= hi {
                    return None; // empty row
                }
                let b = Cell::new(r, hi);
                (!self.contains(b.down())).then_some(b)
            })
            .collect()
    }

    /// The shape with `cells` removed from the inner boundary (each must be
    /// an inner corner), growing the skew shape inward.
    pub(crate) fn grow_inward(&self, cells: &[Cell]) -> Shape {
        let mut parts = self.inner.parts().to_vec();
        for c in cells {
            debug_assert_eq!(parts[c.row - 1], c.col);
            parts[c.row - 1] -= 1;
        }
        Shape {
            outer: self.outer.clone(),
            inner: Partition::new(parts).expect("inner corners removal keeps a partition"),
        }
    }

    /// The shape with `cells` removed from the outer boundary (each must be
    /// an outer corner).
    pub(crate) fn shrink_outer(&self, cells: &[Cell]) -> Shape {
        let mut parts = self.outer.parts().to_vec();
        for c in cells {
            debug_assert_eq!(parts[c.row - 1], c.col);
            parts[c.row - 1] -= 1;
        }
        Shape {
            outer: Partition::new(parts).expect("outer corners removal keeps a partition"),
            inner: self.inner.clone(),
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((m, n)) = self.rectangle_dims() {
            if m > 0 {
                return write!(f, "{m}x{n}");
            }
        }
        if self.is_straight() {
            write!(f, "{}", self.outer)
        } else {
            write!(f, "{}/{}", self.outer, self.inner)
        }
    }
}

impl fmt::Debug for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Shape({})", self)
    }
}

fn parse_parts(s: &str) -> Result<Partition, ShapeError> {
    let parts = s
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| ShapeError::Syntax(s.to_string()))?;
    Partition::new(parts)
}

impl FromStr for Shape {
    type Err = ShapeError;

    /// Shape syntax: `"3x4"` (rectangle), `"6,4,2"` (straight),
    /// `"6,4,2/2,1"` (skew).
    fn from_str(s: &str) -> Result<Self, ShapeError> {
        let s = s.trim();
        if let Some((m, n)) = s.split_once(['x', 'X']) {
            let m = m.trim().parse::<usize>();
            let n = n.trim().parse::<usize>();
            return match (m, n) {
                (Ok(m), Ok(n)) => Ok(Shape::rectangle(m, n)),
                _ => Err(ShapeError::Syntax(s.to_string())),
            };
        }
        match s.split_once('/') {
            Some((outer, inner)) => Shape::new(parse_parts(outer)?, parse_parts(inner)?),
            None => Ok(Shape::straight(parse_parts(s)?)),
        }
    }
}

/// The frame of an `m x n` rectangle: first and last row, first and last column.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FrameSet {
    m: usize,
    n: usize,
    cells: BTreeSet<Cell>,
}

/// Builds the frame of the `m x n` rectangle. Requires `m, n >= 1`.
pub fn frame(m: usize, n: usize) -> FrameSet {
    assert!(m >= 1 && n >= 1, "frame requires a nonempty rectangle");
    let mut cells = BTreeSet::new();
    for c in 1..=n {
        cells.insert(Cell::new(1, c));
        cells.insert(Cell::new(m, c));
    }
    for r in 1..=m {
        cells.insert(Cell::new(r, 1));
        cells.insert(Cell::new(r, n));
    }
    FrameSet { m, n, cells }
}

impl FrameSet {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn contains(&self, c: Cell) -> bool {
        self.cells.contains(&c)
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.cells.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

/// The image of a box under rotating the `m x n` rectangle by 180 degrees.
///
/// An involution: `(r, c)` maps to `(m+1-r, n+1-c)`.
pub fn rotate_box(m: usize, n: usize, b: Cell) -> Cell {
    assert!(
        b.row <= m && b.col <= n,
        "box {b} not inside the {m}x{n} rectangle"
    );
    Cell::new(m + 1 - b.row, n + 1 - b.col)
}
