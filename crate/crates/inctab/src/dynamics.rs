//! K-promotion, its inverse, K-evacuation, dual K-evacuation, growth
//! diagrams, and promotion orbits.
//!
//! Promotion deletes the 1s to bullets, sweeps `swap_2 .. swap_q`, refills
//! the bullets with `q+1`, and decrements every entry. Evacuation and its
//! dual are defined through the shape vectors of promotion powers:
//! `evacuate(t)` decodes `a |-> sh(P^{q-a}(t) restricted to <= a)` and
//! `dual_evacuate(t)` decodes `a |-> sh(P^{-a}(t) restricted to <= a)`.
//! The growth diagram records `sh(P^j(t) restricted to <= i)` at position
//! `(i+j, j)`, so each row encodes one promotion power and each full-height
//! column encodes an evacuation.
//!
//! Promotion is defined on skew tableaux as well (the composition goes
//! through unchanged), but evacuation, its dual, and growth diagrams
//! require straight shapes.

use crate::kjdt::swap;
use crate::shapes::Partition;
use crate::tableaux::{BulletEntry, BulletFilling, IncreasingTableau, ShapeVector};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DynamicsError {
    #[error("orbit walk exceeded the step budget of {budget} promotions")]
    BudgetExceeded { budget: u64 },
}

/// One intermediate stage of a traced promotion or slide.
#[derive(Clone, Debug)]
pub struct TraceStage {
    pub label: String,
    pub filling: BulletFilling,
}

/// K-promotion. Preserves shape and ceiling; coincides with classical
/// Schuetzenberger promotion on standard Young tableaux.
pub fn promote(t: &IncreasingTableau) -> IncreasingTableau {
    promote_traced(t, &mut |_, _| {})
}

/// As `promote`, returning the intermediate stages: the bullet insertion,
/// each sweep stage `swap_2 .. swap_q`, and the refill, in order.
pub fn promote_with_trace(t: &IncreasingTableau) -> (IncreasingTableau, Vec<TraceStage>) {
    let mut stages = Vec::new();
    let out = promote_traced(t, &mut |label: &str, x: &BulletFilling| {
        stages.push(TraceStage {
            label: label.to_string(),
            filling: x.clone(),
        })
    });
    (out, stages)
}

fn promote_traced(
    t: &IncreasingTableau,
    on_stage: &mut dyn FnMut(&str, &BulletFilling),
) -> IncreasingTableau {
    let q = t.ceiling();
    let mut x = BulletFilling::from_tableau(t).map_entries(|e| match e {
        BulletEntry::Num(1) => BulletEntry::Bullet,
        other => other,
    });
    on_stage("1 -> *", &x);
    for i in 2..=q {
        x = swap(i, &x);
        on_stage(&format!("swap {i}"), &x);
    }
    x = x.map_entries(|e| match e {
        BulletEntry::Bullet => BulletEntry::Num(q + 1),
        other => other,
    });
    on_stage(&format!("* -> {}", q + 1), &x);
    let x = x.map_entries(|e| match e {
        BulletEntry::Num(v) => BulletEntry::Num(v - 1),
        bullet => bullet,
    });
    x.into_tableau()
        .unwrap_or_else(|e| panic!("promotion produced an invalid tableau: {e}; input {t:?}"))
}

/// The inverse of `promote`: increment, delete the `q+1`s to bullets, sweep
/// `swap_q .. swap_2` downward, refill bullets with 1. Each factor undoes
/// its counterpart in `promote` (the swaps are involutions).
pub fn promote_inverse(t: &IncreasingTableau) -> IncreasingTableau {
    let q = t.ceiling();
    let mut x = BulletFilling::from_tableau(t).map_entries(|e| match e {
        BulletEntry::Num(v) if v == q => BulletEntry::Bullet,
        BulletEntry::Num(v) => BulletEntry::Num(v + 1),
        bullet => bullet,
    });
    for i in (2..=q).rev() {
        x = swap(i, &x);
    }
    let x = x.map_entries(|e| match e {
        BulletEntry::Bullet => BulletEntry::Num(1),
        other => other,
    });
    x.into_tableau()
        .unwrap_or_else(|e| panic!("inverse promotion produced an invalid tableau: {e}; input {t:?}"))
}

/// `P^k(t)` for any integer `k` (negative powers via the inverse).
pub fn promote_power(t: &IncreasingTableau, k: i64) -> IncreasingTableau {
    let mut out = t.clone();
    if k >= 0 {
        for _ in 0..k {
            out = promote(&out);
        }
    } else {
        for _ in 0..-k {
            out = promote_inverse(&out);
        }
    }
    out
}

/// All powers `P^0(t) .. P^q(t)` (or down to `P^-q` for `forward = false`),
/// computed in one sweep so evacuation costs `q` promotions, not `q^2`.
fn powers(t: &IncreasingTableau, forward: bool) -> Vec<IncreasingTableau> {
    let q = t.ceiling() as usize;
    let mut out = Vec::with_capacity(q + 1);
    out.push(t.clone());
    for k in 1..=q {
        let next = if forward {
            promote(&out[k - 1])
        } else {
            promote_inverse(&out[k - 1])
        };
        out.push(next);
    }
    out
}

/// K-evacuation: decodes the vector `a |-> sh(P^{q-a}(t)_{<= a})`. An
/// involution on straight-shape tableaux.
pub fn evacuate(t: &IncreasingTableau) -> IncreasingTableau {
    evacuation_by(t, true)
}

/// Dual K-evacuation: decodes the vector `a |-> sh(P^{-a}(t)_{<= a})`.
/// An involution; on rectangles it equals `rot . evacuate . rot`.
pub fn dual_evacuate(t: &IncreasingTableau) -> IncreasingTableau {
    evacuation_by(t, false)
}

fn evacuation_by(t: &IncreasingTableau, forward: bool) -> IncreasingTableau {
    assert!(
        t.shape().is_straight(),
        "evacuation requires a straight shape, got {}",
        t.shape()
    );
    let q = t.ceiling();
    let pow = powers(t, forward);
    let shapes: Vec<Partition> = (0..=q)
        .map(|a| {
            let k = if forward { (q - a) as usize } else { a as usize };
            pow[k].restrict_le(a).shape().outer().clone()
        })
        .collect();
    ShapeVector::new(shapes).decode().unwrap_or_else(|e| {
        panic!("evacuation vector failed to decode ({e}); input {t:?}")
    })
}

/// The growth diagram of `t` over rows `j_min ..= j_max`: row `j` is the
/// shape vector of `P^j(t)`, and the cell at position `(i+j, j)` is
/// `sh(P^j(t)_{<= i})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthDiagram {
    j_min: i64,
    q: u32,
    rows: Vec<ShapeVector>,
}

/// Builds the growth diagram for rows `j_min ..= j_max`; requires
/// `j_min <= 0 <= j_max` so row 0 encodes `t` itself.
pub fn growth_diagram(t: &IncreasingTableau, j_min: i64, j_max: i64) -> GrowthDiagram {
    assert!(
        j_min <= 0 && 0 <= j_max,
        "window [{j_min}, {j_max}] must contain row 0"
    );
    assert!(t.shape().is_straight(), "growth diagrams require straight shapes");
    let mut rows = Vec::with_capacity((j_max - j_min + 1) as usize);
    let mut down = t.clone();
    for _ in 0..-j_min {
        down = promote_inverse(&down);
    }
    rows.push(down.encode());
    let mut current = down;
    for _ in j_min..j_max {
        current = promote(&current);
        rows.push(current.encode());
    }
    GrowthDiagram {
        j_min,
        q: t.ceiling(),
        rows,
    }
}

impl GrowthDiagram {
    pub fn j_min(&self) -> i64 {
        self.j_min
    }

    pub fn j_max(&self) -> i64 {
        self.j_min + self.rows.len() as i64 - 1
    }

    pub fn ceiling(&self) -> u32 {
        self.q
    }

    /// The shape vector of `P^j(t)`.
    pub fn row(&self, j: i64) -> &ShapeVector {
        &self.rows[(j - self.j_min) as usize]
    }

    /// The partition at diagram position `(x, j)`, i.e. `sh(P^j(t)_{<= x-j})`.
    pub fn cell(&self, x: i64, j: i64) -> Option<&Partition> {
        if j < self.j_min || j > self.j_max() {
            return None;
        }
        let i = x - j;
        if i < 0 || i > self.q as i64 {
            return None;
        }
        Some(&self.row(j).shapes()[i as usize])
    }

    /// The full-height column through positions `(j0 + q, j)` for
    /// `j0 <= j <= j0 + q`, read bottom cell upward. This single vector is
    /// the shape vector of `evacuate(P^j0(t))` and equally of
    /// `dual_evacuate(P^{j0+q}(t))` - the two operators meet in the column.
    /// Requires rows `j0 ..= j0 + q` to be inside the window.
    pub fn evacuation_vector(&self, j0: i64) -> ShapeVector {
        let q = self.q as i64;
        assert!(
            j0 >= self.j_min && j0 + q <= self.j_max(),
            "column at row {j0} not fully inside the window"
        );
        let x = j0 + q;
        let shapes = (0..=q)
            .map(|a| self.cell(x, x - a).unwrap().clone())
            .collect();
        ShapeVector::new(shapes)
    }
}

/// A full promotion orbit: `elements[0]` is the canonical representative
/// (lexicographically smallest row-major entry sequence) and
/// `promote(elements[k]) == elements[(k+1) % size]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    elements: Vec<IncreasingTableau>,
}

impl Orbit {
    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn canonical(&self) -> &IncreasingTableau {
        &self.elements[0]
    }

    pub fn elements(&self) -> &[IncreasingTableau] {
        &self.elements
    }

    /// `P^k(elements[idx])` looked up inside the orbit.
    pub fn power_of(&self, idx: usize, k: u32) -> &IncreasingTableau {
        &self.elements[(idx + k as usize) % self.elements.len()]
    }

    pub(crate) fn from_walk(mut elements: Vec<IncreasingTableau>) -> Orbit {
        let min = elements
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.row_major().cmp(b.row_major()))
            .map(|(i, _)| i)
            .unwrap();
        elements.rotate_left(min);
        Orbit { elements }
    }
}

/// Default promotion budget for orbit walks; orbit sizes have no known
/// upper bound, so a hard stop with a clear error beats nontermination.
pub const DEFAULT_ORBIT_BUDGET: u64 = 10_000_000;

/// Walks the promotion orbit of `t` until first return, spending at most
/// `budget` promotions.
pub fn orbit(t: &IncreasingTableau, budget: u64) -> Result<Orbit, DynamicsError> {
    let mut elements = vec![t.clone()];
    let mut steps = 0u64;
    loop {
        let next = promote(elements.last().unwrap());
        steps += 1;
        if next == *t {
            return Ok(Orbit::from_walk(elements));
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
    use crate::tableaux::IncreasingTableau;

    fn t(q: u32, rows: &[&[u32]]) -> IncreasingTableau {
        IncreasingTableau::from_rows(q, rows).unwrap()
    }

    #[test]
    fn promote_worked_example() {
        let example = t(6, &[&[1, 2, 4], &[3, 4, 6]]);
        assert_eq!(promote(&example), t(6, &[&[1, 3, 5], &[2, 5, 6]]));
    }

    #[test]
    fn promote_trace_stages() {
        let example = t(6, &[&[1, 2, 4], &[3, 4, 6]]);
        let (out, stages) = promote_with_trace(&example);
        assert_eq!(out, t(6, &[&[1, 3, 5], &[2, 5, 6]]));
        let labels: Vec<&str> = stages.iter().map(|s| s.label.as_str()).collect();
        assert_eq!(
            labels,
            vec!["1 -> *", "swap 2", "swap 3", "swap 4", "swap 5", "swap 6", "* -> 7"]
        );
    }

    #[test]
    fn promote_fixed_point_of_forced_tableau() {
        let forced = t(3, &[&[1, 2], &[2, 3]]);
        assert_eq!(promote(&forced), forced);
        assert_eq!(promote_inverse(&forced), forced);
    }

    #[test]
    fn promote_without_ones_is_plain_decrement() {
        let tab = t(5, &[&[2, 3], &[3, 5]]);
        assert_eq!(promote(&tab), t(5, &[&[1, 2], &[2, 4]]));
    }

    #[test]
    fn promote_inverse_of_worked_example() {
        let image = t(6, &[&[1, 3, 5], &[2, 5, 6]]);
        assert_eq!(promote_inverse(&image), t(6, &[&[1, 2, 4], &[3, 4, 6]]));
    }

    #[test]
    fn promote_round_trips() {
        for tab in [
            t(6, &[&[1, 2, 4], &[3, 4, 6]]),
            t(5, &[&[2, 3], &[3, 5]]),
            t(7, &[&[1, 3, 4, 6], &[3, 5, 6, 7]]),
            t(4, &[&[1, 2, 3], &[2, 3, 4]]),
        ] {
            assert_eq!(promote_inverse(&promote(&tab)), tab);
            assert_eq!(promote(&promote_inverse(&tab)), tab);
        }
    }

    #[test]
    fn promote_skew_shapes() {
        let shape = crate::shapes::Shape::new(
            crate::shapes::Partition::new(vec![2, 2]).unwrap(),
            crate::shapes::Partition::new(vec![1]).unwrap(),
        )
        .unwrap();
        let tab =
            IncreasingTableau::new(shape.clone(), vec![vec![2], vec![1, 3]], 3).unwrap();
        let p = promote(&tab);
        assert_eq!(p.shape(), &shape);
        assert_eq!(promote_inverse(&p), tab);
    }

    #[test]
    fn evacuate_is_involution_on_samples() {
        for tab in [
            t(3, &[&[1, 2], &[2, 3]]),
            t(6, &[&[1, 2, 4], &[3, 4, 6]]),
            t(5, &[&[1, 3, 4], &[2, 4], &[4]]),
        ] {
            assert_eq!(evacuate(&evacuate(&tab)), tab);
            assert_eq!(dual_evacuate(&dual_evacuate(&tab)), tab);
        }
    }

    #[test]
    fn forced_tableau_is_fixed_by_everything() {
        let forced = t(3, &[&[1, 2], &[2, 3]]);
        assert_eq!(evacuate(&forced), forced);
        assert_eq!(dual_evacuate(&forced), forced);
    }

    #[test]
    fn operator_identities_on_a_sample() {
        let tab = t(6, &[&[1, 2, 4], &[3, 4, 6]]);
        let q = tab.ceiling() as i64;
        assert_eq!(
            dual_evacuate(&evacuate(&tab)),
            promote_power(&tab, q),
            "E* . E = P^q"
        );
        assert_eq!(
            promote(&evacuate(&tab)),
            evacuate(&promote_inverse(&tab)),
            "P . E = E . P^-1"
        );
        assert_eq!(
            dual_evacuate(&tab),
            evacuate(&tab.rot().unwrap()).rot().unwrap(),
            "E* = rot . E . rot"
        );
    }

    #[test]
    fn growth_diagram_rows_encode_promotion_powers() {
        let tab = t(6, &[&[1, 2, 4], &[3, 4, 6]]);
        let gd = growth_diagram(&tab, -2, 3);
        for j in -2..=3 {
            assert_eq!(
                gd.row(j).decode().unwrap(),
                promote_power(&tab, j),
                "row {j}"
            );
        }
        // adjacent-row consistency
        for j in -2..3 {
            assert_eq!(
                promote(&gd.row(j).decode().unwrap()),
                gd.row(j + 1).decode().unwrap()
            );
        }
    }

    #[test]
    fn growth_diagram_columns_encode_evacuations() {
        let tab = t(6, &[&[1, 2, 4], &[3, 4, 6]]);
        let gd = growth_diagram(&tab, 0, 6);
        let column = gd.evacuation_vector(0).decode().unwrap();
        assert_eq!(column, evacuate(&tab));
        assert_eq!(column, dual_evacuate(&promote_power(&tab, 6)));
    }

    #[test]
    fn growth_diagram_of_fixed_point_has_identical_rows() {
        let forced = t(3, &[&[1, 2], &[2, 3]]);
        let gd = growth_diagram(&forced, -2, 2);
        for j in -2..=2 {
            assert_eq!(gd.row(j), gd.row(0));
        }
    }

    #[test]
    fn orbit_examples() {
        let forced = t(3, &[&[1, 2], &[2, 3]]);
        let o = orbit(&forced, 100).unwrap();
        assert_eq!(o.size(), 1);
        assert_eq!(o.canonical(), &forced);

        let tab = t(6, &[&[1, 2, 4], &[3, 4, 6]]);
        let o = orbit(&tab, 1000).unwrap();
        assert!(o.size() >= 1);
        // canonical representative is lexicographically least
        for e in o.elements() {
            assert!(o.canonical().row_major().le(e.row_major()));
        }
        // successive elements are promotions of each other
        for k in 0..o.size() {
            assert_eq!(&promote(&o.elements()[k]), o.power_of(k, 1));
        }
        assert_eq!(
            orbit(&tab, 1),
            Err(DynamicsError::BudgetExceeded { budget: 1 })
        );
    }
}
