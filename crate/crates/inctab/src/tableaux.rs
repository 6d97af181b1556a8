//! Increasing tableaux and bullet fillings.
//!
//! An increasing tableau fills a shape with integers in `[1, q]` that
//! strictly increase along rows and down columns. A bullet filling is the
//! looser workspace used by the jeu de taquin swaps: any mix of positive
//! integers and bullet markers. Restriction, reading words, rotation, and
//! the shape-vector encoding all live here.
//!
//! Entries are stored densely, one `Vec` per shape row; the box-to-entry
//! view is the contract, the layout is not.

use crate::shapes::{Cell, Partition, Shape};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableauError {
    #[error("row {row} has {got} entries, expected {expected}")]
    RowLength {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("entry {value} at {cell} is outside [1, {q}]")]
    OutOfRange { cell: Cell, value: u32, q: u32 },
    #[error("entries do not strictly increase at {cell}")]
    NotIncreasing { cell: Cell },
    #[error("operation requires a rectangular shape, got {0}")]
    NotRectangular(String),
    #[error("shape vector is not nested at step {index}")]
    NotNested { index: usize },
    #[error("shape vector must start with the empty partition")]
    NonEmptyStart,
}

/// One box of a bullet filling: a positive integer or a bullet marker.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum BulletEntry {
    Num(u32),
    Bullet,
}

impl BulletEntry {
    pub fn is_bullet(self) -> bool {
        matches!(self, BulletEntry::Bullet)
    }

    pub fn num(self) -> Option<u32> {
        match self {
            BulletEntry::Num(v) => Some(v),
            BulletEntry::Bullet => None,
        }
    }
}

impl fmt::Display for BulletEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BulletEntry::Num(v) => write!(f, "{v}"),
            BulletEntry::Bullet => write!(f, "*"),
        }
    }
}

/// A strictly increasing filling of a straight or skew shape by integers
/// in `[1, q]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IncreasingTableau {
    shape: Shape,
    rows: Vec<Vec<u32>>,
    q: u32,
}

impl IncreasingTableau {
    /// Validates and builds a tableau. `rows[r]` holds the entries of shape
    /// row `r+1`, left to right (inner boxes omitted).
    pub fn new(shape: Shape, rows: Vec<Vec<u32>>, q: u32) -> Result<Self, TableauError> {
        let nrows = shape.num_rows();
        if rows.len() != nrows {
            return Err(TableauError::RowLength {
                row: nrows.max(rows.len()),
                got: rows.len(),
                expected: nrows,
            });
        }
        for r in 1..=nrows {
            let (lo, hi) = shape.row_bounds(r);
            if rows[r - 1].len() != hi - lo {
                return Err(TableauError::RowLength {
                    row: r,
                    got: rows[r - 1].len(),
                    expected: hi - lo,
                });
            }
        }
        let t = IncreasingTableau { shape, rows, q };
        t.validate()?;
        Ok(t)
    }

    /// Straight-shape convenience: the shape is read off the row lengths,
    /// which must be weakly decreasing.
    pub fn from_rows(q: u32, rows: &[&[u32]]) -> Result<Self, TableauError> {
        let lens: Vec<usize> = rows.iter().map(|r| r.len()).collect();
        let outer = Partition::new(lens.clone()).map_err(|_| {
            let row = lens.windows(2).position(|w| w[0] < w[1]).unwrap_or(0) + 2;
            TableauError::RowLength {
                row,
                got: lens.get(row - 1).copied().unwrap_or(0),
                expected: lens.get(row - 2).copied().unwrap_or(0),
            }
        })?;
        Self::new(
            Shape::straight(outer),
            rows.iter().map(|r| r.to_vec()).collect(),
            q,
        )
    }

    pub fn empty(q: u32) -> Self {
        IncreasingTableau {
            shape: Shape::straight(Partition::empty()),
            rows: Vec::new(),
            q,
        }
    }

    fn validate(&self) -> Result<(), TableauError> {
        for c in self.shape.cells() {
            let v = self.entry(c).unwrap();
            if v < 1 || v > self.q {
                return Err(TableauError::OutOfRange {
                    cell: c,
                    value: v,
                    q: self.q,
                });
            }
            if let Some(right) = self.entry(c.right()) {
                if right <= v {
                    return Err(TableauError::NotIncreasing { cell: c.right() });
                }
            }
            if let Some(down) = self.entry(c.down()) {
                if down <= v {
                    return Err(TableauError::NotIncreasing { cell: c.down() });
                }
            }
        }
        Ok(())
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    /// The entry ceiling `q` (entries lie in `[1, q]`).
    pub fn ceiling(&self) -> u32 {
        self.q
    }

    pub fn entry(&self, c: Cell) -> Option<u32> {
        if !self.shape.contains(c) {
            return None;
        }
        let (lo, _) = self.shape.row_bounds(c.row);
        Some(self.rows[c.row - 1][c.col - 1 - lo])
    }

    /// Entries in row-major order.
    pub fn row_major(&self) -> impl Iterator<Item = u32> + '_ {
        self.rows.iter().flatten().copied()
    }

    /// Row-major entries packed as a byte string, for visited sets and
    /// cross-run stable ordering. Two bytes per entry, big-endian, so the
    /// byte order agrees with the numeric row-major order.
    pub fn packed_key(&self) -> Vec<u8> {
        let mut key = Vec::with_capacity(2 * self.shape.num_cells());
        for v in self.row_major() {
            key.extend_from_slice(&(v as u16).to_be_bytes());
        }
        key
    }

    pub fn num_cells(&self) -> usize {
        self.shape.num_cells()
    }

    /// True if the entries are exactly `1..=n` each used once.
    pub fn is_standard(&self) -> bool {
        let n = self.num_cells();
        let mut seen = vec![false; n];
        for v in self.row_major() {
            let v = v as usize;
            if v < 1 || v > n || seen[v - 1] {
                return false;
            }
            seen[v - 1] = true;
        }
        true
    }

    /// The subtableau of entries `<= a` (boxes of larger entries removed).
    /// The result has ceiling `a`; it is straight whenever `self` is.
    pub fn restrict_le(&self, a: u32) -> IncreasingTableau {
        let mut outer = Vec::new();
        let mut rows = Vec::new();
        for r in 1..=self.shape.num_rows() {
            let (lo, _) = self.shape.row_bounds(r);
            let kept: Vec<u32> = self.rows[r - 1]
                .iter()
                .copied()
                .take_while(|&v| v <= a)
                .collect();
            if lo + kept.len() > 0 {
                outer.push(lo + kept.len());
                rows.push(kept);
            } else {
                break; // rows below are empty too
            }
        }
        let outer = Partition::new(outer).expect("restriction of a shape is a partition");
        let shape = Shape::new(outer, self.shape.inner().clone())
            .expect("inner partition still contained");
        IncreasingTableau {
            shape,
            rows,
            q: a,
        }
    }

    /// The skew subtableau of entries `> a`, entry values unshifted.
    pub fn restrict_gt(&self, a: u32) -> IncreasingTableau {
        let mut inner = Vec::new();
        let mut rows = Vec::new();
        for r in 1..=self.shape.num_rows() {
            let (lo, _) = self.shape.row_bounds(r);
            let dropped = self.rows[r - 1].iter().take_while(|&&v| v <= a).count();
            inner.push(lo + dropped);
            rows.push(self.rows[r - 1][dropped..].to_vec());
        }
        let inner = Partition::new(inner).expect("restriction boundary is a partition");
        let shape =
            Shape::new(self.shape.outer().clone(), inner).expect("grown inner still contained");
        IncreasingTableau {
            shape,
            rows,
            q: self.q,
        }
    }

    /// Reads the entries by rows, left to right, bottom row first.
    pub fn reading_word(&self) -> Vec<u32> {
        self.rows.iter().rev().flatten().copied().collect()
    }

    /// Rotates a rectangular tableau by 180 degrees and complements each
    /// entry `i` to `q+1-i`. An involution on rectangles.
    pub fn rot(&self) -> Result<IncreasingTableau, TableauError> {
        let (m, n) = self
            .shape
            .rectangle_dims()
            .ok_or_else(|| TableauError::NotRectangular(self.shape.to_string()))?;
        let rows: Vec<Vec<u32>> = (1..=m)
            .map(|r| {
                (1..=n)
                    .map(|c| self.q + 1 - self.entry(Cell::new(m + 1 - r, n + 1 - c)).unwrap())
                    .collect()
            })
            .collect();
        Ok(IncreasingTableau {
            shape: self.shape.clone(),
            rows,
            q: self.q,
        })
    }

    /// The nested shapes of `restrict_le(a)` for `a = 0..=q`. Straight
    /// tableaux are uniquely determined by this vector.
    pub fn encode(&self) -> ShapeVector {
        debug_assert!(self.shape.is_straight());
        let mut shapes = Vec::with_capacity(self.q as usize + 1);
        let mut outer = vec![0usize; self.shape.num_rows()];
        shapes.push(Partition::empty());
        for a in 1..=self.q {
            for r in 1..=self.shape.num_rows() {
                let row = &self.rows[r - 1];
                let mut len = outer[r - 1];
                while len < row.len() && row[len] <= a {
                    len += 1;
                }
                outer[r - 1] = len;
            }
            shapes.push(Partition::new(outer.clone()).expect("restricted shapes are partitions"));
        }
        ShapeVector { shapes }
    }
}

// Debug renders the grid inline: rows separated by "/", inner boxes as ".".
fn fmt_grid<E: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    q: u32,
    shape: &Shape,
    rows: &[Vec<E>],
) -> fmt::Result {
    write!(f, "[q={q} {shape}:")?;
    for r in 1..=shape.num_rows() {
        let (lo, _) = shape.row_bounds(r);
        write!(f, " ")?;
        for _ in 0..lo {
            write!(f, ". ")?;
        }
        for (i, e) in rows[r - 1].iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{e}")?;
        }
        if r < shape.num_rows() {
            write!(f, " /")?;
        }
    }
    write!(f, "]")
}

impl fmt::Debug for IncreasingTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_grid(f, self.q, &self.shape, &self.rows)
    }
}

/// Reverses a word and complements each letter `i` to `q+1-i`.
///
/// Satisfies `rot_word(reading_word(t), q) == reading_word(t.rot())` for
/// rectangular `t`.
pub fn rot_word(w: &[u32], q: u32) -> Vec<u32> {
    w.iter().rev().map(|&v| q + 1 - v).collect()
}

/// The subword of letters `<= a`.
pub fn word_le(w: &[u32], a: u32) -> Vec<u32> {
    w.iter().copied().filter(|&v| v <= a).collect()
}

/// A sequence of `q+1` nested partitions encoding an increasing tableau.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ShapeVector {
    shapes: Vec<Partition>,
}

impl ShapeVector {
    pub fn new(shapes: Vec<Partition>) -> Self {
        assert!(!shapes.is_empty(), "a shape vector has at least one shape");
        ShapeVector { shapes }
    }

    pub fn shapes(&self) -> &[Partition] {
        &self.shapes
    }

    pub fn ceiling(&self) -> u32 {
        (self.shapes.len() - 1) as u32
    }

    pub fn outer(&self) -> &Partition {
        self.shapes.last().unwrap()
    }

    /// Rebuilds the tableau: entry `a` fills the boxes of `shapes[a] \
    /// shapes[a-1]`. Fails on non-nested input or when the filling is not
    /// increasing (arbitrary nested vectors need not decode).
    pub fn decode(&self) -> Result<IncreasingTableau, TableauError> {
        if !self.shapes[0].is_empty() {
            return Err(TableauError::NonEmptyStart);
        }
        for (i, w) in self.shapes.windows(2).enumerate() {
            if !w[1].contains(&w[0]) {
                return Err(TableauError::NotNested { index: i + 1 });
            }
        }
        let q = self.ceiling();
        let outer = self.outer();
        let mut rows: Vec<Vec<u32>> = Vec::with_capacity(outer.len());
        for r in 0..outer.len() {
            let mut row = Vec::with_capacity(outer.part(r));
            for (a, w) in self.shapes.windows(2).enumerate() {
                for _ in w[0].part(r)..w[1].part(r) {
                    row.push(a as u32 + 1);
                }
            }
            rows.push(row);
        }
        IncreasingTableau::new(Shape::straight(outer.clone()), rows, q)
    }
}

/// A filling of a shape by positive integers and bullet markers; the
/// workspace of the jeu de taquin swap operators. Numeric entries may
/// transiently reach `q+1` during promotion.
#[derive(Clone, PartialEq, Eq)]
pub struct BulletFilling {
    shape: Shape,
    rows: Vec<Vec<BulletEntry>>,
    q: u32,
}

impl BulletFilling {
    pub fn new(shape: Shape, rows: Vec<Vec<BulletEntry>>, q: u32) -> Result<Self, TableauError> {
        for r in 1..=shape.num_rows() {
            let (lo, hi) = shape.row_bounds(r);
            let got = rows.get(r - 1).map_or(0, Vec::len);
            if got != hi - lo {
                return Err(TableauError::RowLength {
                    row: r,
                    got,
                    expected: hi - lo,
                });
            }
        }
        Ok(BulletFilling { shape, rows, q })
    }

    pub fn from_tableau(t: &IncreasingTableau) -> Self {
        BulletFilling {
            shape: t.shape.clone(),
            rows: t
                .rows
                .iter()
                .map(|row| row.iter().map(|&v| BulletEntry::Num(v)).collect())
                .collect(),
            q: t.q,
        }
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn ceiling(&self) -> u32 {
        self.q
    }

    pub fn entry(&self, c: Cell) -> Option<BulletEntry> {
        if !self.shape.contains(c) {
            return None;
        }
        let (lo, _) = self.shape.row_bounds(c.row);
        Some(self.rows[c.row - 1][c.col - 1 - lo])
    }

    pub(crate) fn set_entry(&mut self, c: Cell, e: BulletEntry) {
        debug_assert!(self.shape.contains(c));
        let (lo, _) = self.shape.row_bounds(c.row);
        self.rows[c.row - 1][c.col - 1 - lo] = e;
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.shape.cells()
    }

    pub fn bullets(&self) -> Vec<Cell> {
        self.cells()
            .filter(|&c| self.entry(c) == Some(BulletEntry::Bullet))
            .collect()
    }

    /// Applies `f` to every box.
    pub fn map_entries(&self, f: impl Fn(BulletEntry) -> BulletEntry) -> BulletFilling {
        BulletFilling {
            shape: self.shape.clone(),
            rows: self
                .rows
                .iter()
                .map(|row| row.iter().map(|&e| f(e)).collect())
                .collect(),
            q: self.q,
        }
    }

    /// Converts back to a tableau; the filling must be bullet-free and
    /// strictly increasing.
    pub fn into_tableau(self) -> Result<IncreasingTableau, TableauError> {
        let mut rows = Vec::with_capacity(self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            let mut out = Vec::with_capacity(row.len());
            for (i, e) in row.iter().enumerate() {
                let (lo, _) = self.shape.row_bounds(r + 1);
                match e.num() {
                    Some(v) => out.push(v),
                    None => {
                        return Err(TableauError::NotIncreasing {
                            cell: Cell::new(r + 1, lo + i + 1),
                        })
                    }
                }
            }
            rows.push(out);
        }
        IncreasingTableau::new(self.shape, rows, self.q)
    }
}

impl fmt::Debug for BulletFilling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_grid(f, self.q, &self.shape, &self.rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn t(q: u32, rows: &[&[u32]]) -> IncreasingTableau {
        IncreasingTableau::from_rows(q, rows).unwrap()
    }

    #[test]
    fn validation_catches_bad_fillings() {
        assert!(IncreasingTableau::from_rows(3, &[&[1, 2], &[2, 2]]).is_err());
        assert!(IncreasingTableau::from_rows(3, &[&[1, 1], &[2, 3]]).is_err());
        assert!(IncreasingTableau::from_rows(3, &[&[1, 2], &[2, 4]]).is_err());
        assert!(IncreasingTableau::from_rows(3, &[&[0, 2], &[2, 3]]).is_err());
        assert!(IncreasingTableau::from_rows(3, &[&[1], &[1, 2]]).is_err());
        assert!(!t(3, &[&[1, 2], &[2, 3]]).is_standard());
        assert!(t(4, &[&[1, 2], &[3, 4]]).is_standard());
    }

    #[test]
    fn skew_tableau_entries() {
        let shape = Shape::new(
            Partition::new(vec![2, 2]).unwrap(),
            Partition::new(vec![1]).unwrap(),
        )
        .unwrap();
        let t = IncreasingTableau::new(shape, vec![vec![2], vec![1, 3]], 3).unwrap();
        assert_eq!(t.entry(Cell::new(1, 2)), Some(2));
        assert_eq!(t.entry(Cell::new(1, 1)), None);
        assert_eq!(t.entry(Cell::new(2, 1)), Some(1));
    }

    #[test]
    fn restrict_le_examples() {
        let example = t(6, &[&[1, 2, 4], &[3, 4, 6]]);
        let r = example.restrict_le(3);
        assert_eq!(r, t(3, &[&[1, 2], &[3]]));
        assert_eq!(example.restrict_le(0), IncreasingTableau::empty(0));
        assert_eq!(example.restrict_le(6), example);
    }

    #[test]
    fn restrict_partitions_the_shape() {
        let example = t(6, &[&[1, 2, 4], &[3, 4, 6]]);
        for a in 0..=6 {
            let le = example.restrict_le(a);
            let gt = example.restrict_gt(a);
            assert!(le.row_major().all(|v| v <= a));
            assert!(gt.row_major().all(|v| v > a));
            assert_eq!(
                le.num_cells() + gt.num_cells(),
                example.num_cells(),
                "a={a}"
            );
            for c in example.shape().cells() {
                assert_eq!(
                    example.entry(c),
                    le.entry(c).or(gt.entry(c)),
                    "box {c} at a={a}"
                );
            }
        }
    }

    #[test]
    fn reading_word_examples() {
        assert_eq!(
            t(6, &[&[1, 2, 4], &[3, 4, 6]]).reading_word(),
            vec![3, 4, 6, 1, 2, 4]
        );
        assert_eq!(t(5, &[&[1, 3, 5]]).reading_word(), vec![1, 3, 5]);
        assert_eq!(t(2, &[&[1], &[2]]).reading_word(), vec![2, 1]);
    }

    #[test]
    fn rot_examples() {
        let fixed = t(3, &[&[1, 2], &[2, 3]]);
        assert_eq!(fixed.rot().unwrap(), fixed);
        let example = t(6, &[&[1, 2, 4], &[3, 4, 6]]);
        assert_eq!(example.rot().unwrap(), t(6, &[&[1, 3, 4], &[3, 5, 6]]));
        assert_eq!(example.rot().unwrap().rot().unwrap(), example);
        assert!(t(4, &[&[1, 2], &[3]]).rot().is_err());
    }

    #[test]
    fn rot_word_examples() {
        assert_eq!(rot_word(&[3, 4, 6, 1, 2, 4], 6), vec![3, 5, 6, 1, 3, 4]);
        assert_eq!(rot_word(&[], 5), Vec::<u32>::new());
        assert_eq!(rot_word(&[1], 1), vec![1]);
        let example = t(6, &[&[1, 2, 4], &[3, 4, 6]]);
        assert_eq!(
            rot_word(&example.reading_word(), 6),
            example.rot().unwrap().reading_word()
        );
    }

    #[test]
    fn encode_examples() {
        let fixed = t(3, &[&[1, 2], &[2, 3]]);
        let v = fixed.encode();
        let expect: Vec<Partition> = [vec![], vec![1], vec![2, 1], vec![2, 2]]
            .into_iter()
            .map(|p| Partition::new(p).unwrap())
            .collect();
        assert_eq!(v.shapes(), &expect[..]);
        assert_eq!(IncreasingTableau::empty(2).encode().shapes().len(), 3);
    }

    #[test]
    fn decode_inverts_encode() {
        for tab in [
            t(3, &[&[1, 2], &[2, 3]]),
            t(6, &[&[1, 2, 4], &[3, 4, 6]]),
            t(5, &[&[2, 3], &[3, 5]]),
            IncreasingTableau::empty(2),
        ] {
            assert_eq!(tab.encode().decode().unwrap(), tab);
        }
    }

    #[test]
    fn decode_rejects_bad_vectors() {
        let p = |v: &[usize]| Partition::new(v.to_vec()).unwrap();
        // two boxes added in one row with the same entry
        let bad = ShapeVector::new(vec![p(&[]), p(&[2])]);
        assert_eq!(
            bad.decode(),
            Err(TableauError::NotIncreasing {
                cell: Cell::new(1, 2)
            })
        );
        let not_nested = ShapeVector::new(vec![p(&[]), p(&[1]), p(&[1]), p(&[2, 1]), p(&[2])]);
        assert_eq!(not_nested.decode(), Err(TableauError::NotNested { index: 4 }));
        let bad_start = ShapeVector::new(vec![p(&[1]), p(&[1])]);
        assert_eq!(bad_start.decode(), Err(TableauError::NonEmptyStart));
    }

    #[test]
    fn bullet_filling_round_trip() {
        let tab = t(6, &[&[1, 2, 4], &[3, 4, 6]]);
        let b = BulletFilling::from_tableau(&tab);
        assert_eq!(b.entry(Cell::new(2, 1)), Some(BulletEntry::Num(3)));
        assert!(b.bullets().is_empty());
        assert_eq!(b.into_tableau().unwrap(), tab);
    }
}
