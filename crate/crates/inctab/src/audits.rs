//! Exhaustive verification of the frame and homomesy statements, the
//! operator identities, the distribution-multiset invariance, and the
//! three-row periodicity scan.
//!
//! Every audit runs over a whole enumerated family `Inc^q(shape)` and
//! reports a machine-readable verdict. A `fail` verdict always carries a
//! witness that is re-checkable from the witness data alone. Orbit-average
//! arithmetic is exact rational; no audit can pass or fail by rounding.
//!
//! Audits parallelize over orbits (`jobs > 1` shards the enumeration);
//! aggregation is order-independent, so reports are deterministic
//! regardless of scheduling.

use crate::dynamics::{
    evacuate, promote, promote_inverse, promote_power, Orbit, DEFAULT_ORBIT_BUDGET,
};
use crate::enumeration::{enumerate, orbit_partition, EnumSpec, Enumerator};
use crate::format::TableauJson;
use crate::kjdt::lis;
use crate::shapes::{frame, rotate_box, Cell, FrameSet};
use crate::tableaux::{rot_word, word_le, IncreasingTableau};
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AuditError {
    #[error("box {0} lies outside the frame of the {1}x{2} rectangle")]
    NotInFrame(Cell, usize, usize),
    #[error("box set is not fixed under 180-degree rotation: {0} lacks its partner {1}")]
    NotSymmetric(Cell, Cell),
    #[error("audit requires a rectangular shape, got {0}")]
    NotRectangular(String),
    #[error("box {0} is outside the tableau shape")]
    OutsideShape(Cell),
    #[error(transparent)]
    Budget(#[from] crate::dynamics::DynamicsError),
    #[error("checkpoint {path}: {msg}")]
    Checkpoint { path: String, msg: String },
}

/// Sum of the entries of `t` over `cells`.
pub fn wt(
    t: &IncreasingTableau,
    cells: impl IntoIterator<Item = Cell>,
) -> Result<u64, AuditError> {
    let mut sum = 0u64;
    for c in cells {
        sum += t.entry(c).ok_or(AuditError::OutsideShape(c))? as u64;
    }
    Ok(sum)
}

/// The multiset (sorted) of values shown at frame box `b` over `q`
/// consecutive promotions of `t`, starting at `t` itself.
pub fn dist(t: &IncreasingTableau, b: Cell) -> Result<Vec<u32>, AuditError> {
    let (m, n) = rectangle_of(t)?;
    if !frame(m, n).contains(b) {
        return Err(AuditError::NotInFrame(b, m, n));
    }
    let mut values = Vec::with_capacity(t.ceiling() as usize);
    let mut current = t.clone();
    for _ in 0..t.ceiling() {
        values.push(current.entry(b).unwrap());
        current = promote(&current);
    }
    values.sort_unstable();
    Ok(values)
}

fn rectangle_of(t: &IncreasingTableau) -> Result<(usize, usize), AuditError> {
    t.shape()
        .rectangle_dims()
        .filter(|&(m, n)| m > 0 && n > 0)
        .ok_or_else(|| AuditError::NotRectangular(t.shape().to_string()))
}

fn spec_rectangle(spec: &EnumSpec) -> Result<(usize, usize), AuditError> {
    spec.shape()
        .rectangle_dims()
        .filter(|&(m, n)| m > 0 && n > 0)
        .ok_or_else(|| AuditError::NotRectangular(spec.shape().to_string()))
}

/// A statistic support: a set of frame boxes fixed setwise under
/// 180-degree rotation, summed by `wt`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatSet {
    cells: BTreeSet<Cell>,
    label: String,
}

impl StatSet {
    /// Any rotation-fixed subset of the frame of the `m x n` rectangle.
    pub fn symmetric(
        m: usize,
        n: usize,
        cells: impl IntoIterator<Item = Cell>,
        label: impl Into<String>,
    ) -> Result<Self, AuditError> {
        let cells: BTreeSet<Cell> = cells.into_iter().collect();
        let fr = frame(m, n);
        for &c in &cells {
            if !fr.contains(c) {
                return Err(AuditError::NotInFrame(c, m, n));
            }
        }
        check_rotation_fixed(m, n, &cells)?;
        Ok(StatSet {
            cells,
            label: label.into(),
        })
    }

    pub fn full_frame(m: usize, n: usize) -> Self {
        StatSet {
            cells: frame(m, n).cells().collect(),
            label: "full-frame".into(),
        }
    }

    pub fn corners(m: usize, n: usize) -> Self {
        StatSet {
            cells: [
                Cell::new(1, 1),
                Cell::new(1, n),
                Cell::new(m, 1),
                Cell::new(m, n),
            ]
            .into_iter()
            .collect(),
            label: "corners".into(),
        }
    }

    pub fn first_last_row(m: usize, n: usize) -> Self {
        StatSet {
            cells: (1..=n)
                .flat_map(|c| [Cell::new(1, c), Cell::new(m, c)])
                .collect(),
            label: "first+last-row".into(),
        }
    }

    /// The pair `{b, rotate_box(b)}` (a singleton when `b` is self-paired).
    pub fn pair(m: usize, n: usize, b: Cell) -> Result<Self, AuditError> {
        if !frame(m, n).contains(b) {
            return Err(AuditError::NotInFrame(b, m, n));
        }
        let partner = rotate_box(m, n, b);
        Ok(StatSet {
            cells: [b, partner].into_iter().collect(),
            label: format!("pair {b}"),
        })
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

    pub fn label(&self) -> &str {
        &self.label
    }
}

fn check_rotation_fixed(m: usize, n: usize, cells: &BTreeSet<Cell>) -> Result<(), AuditError> {
    for &c in cells {
        let partner = rotate_box(m, n, c);
        if !cells.contains(&partner) {
            return Err(AuditError::NotSymmetric(c, partner));
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => write!(f, "pass"),
            Verdict::Fail => write!(f, "fail"),
        }
    }
}

/// Machine-readable audit outcome. A failing report always carries a
/// self-contained witness.
#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub audit: String,
    pub shape: String,
    pub q: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub options: Option<String>,
    pub instances: u64,
    pub orbits: u64,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub elapsed_ms: u128,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    fn build(
        audit: &str,
        spec: &EnumSpec,
        options: Option<String>,
        instances: u64,
        orbits: u64,
        witness: Option<Witness>,
        started: Instant,
    ) -> AuditReport {
        AuditReport {
            audit: audit.to_string(),
            shape: spec.shape().to_string(),
            q: spec.q(),
            options,
            instances,
            orbits,
            verdict: if witness.is_some() {
                Verdict::Fail
            } else {
                Verdict::Pass
            },
            witness,
            elapsed_ms: started.elapsed().as_millis(),
        }
    }
}

/// Counterexample payloads; each contains everything needed to re-check
/// the violation without re-running the audit.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    FrameMismatch {
        tableau: TableauJson,
        power: TableauJson,
        cell: Cell,
        before: u32,
        after: u32,
    },
    HomomesyViolation {
        representative: TableauJson,
        stat_set: Vec<Cell>,
        orbit_size: u64,
        weight_sum: u64,
        observed_average: String,
        expected_average: String,
    },
    OperatorIdentity {
        identity: String,
        tableau: TableauJson,
        lhs: TableauJson,
        rhs: TableauJson,
    },
    RotEvacDisagreement {
        region: String,
        tableau: TableauJson,
        rotated: TableauJson,
        evacuated: TableauJson,
        cell: Cell,
    },
    RowLengthMismatch {
        tableau: TableauJson,
        level: u32,
        evac_first_row: usize,
        lis_value: usize,
    },
    DistMismatch {
        tableau: TableauJson,
        cell: Cell,
        dist: Vec<u32>,
        evac_dist: Vec<u32>,
    },
    PairSumMismatch {
        tableau: TableauJson,
        cell: Cell,
        partner: Cell,
        sum: u64,
        expected: u64,
    },
    Periodicity {
        tableau: TableauJson,
        power: TableauJson,
        orbit_size: u64,
    },
}

/// Runs `check` over every orbit of the family, in parallel for `jobs > 1`.
/// The returned witness, if any, comes from the earliest orbit in
/// canonical order, independent of scheduling.
fn for_each_orbit<F>(
    spec: &EnumSpec,
    jobs: usize,
    budget: u64,
    check: F,
) -> Result<(u64, u64, Option<Witness>), AuditError>
where
    F: Fn(&Orbit) -> Option<Witness> + Sync,
{
    let orbits = orbit_partition(spec, budget, jobs)?;
    let instances: u64 = orbits.iter().map(|o| o.size() as u64).sum();
    let witness = if jobs > 1 {
        orbits
            .par_iter()
            .enumerate()
            .filter_map(|(i, o)| check(o).map(|w| (i, w)))
            .min_by_key(|(i, _)| *i)
            .map(|(_, w)| w)
    } else {
        orbits.iter().find_map(&check)
    };
    Ok((instances, orbits.len() as u64, witness))
}

fn frame_cells_vec(m: usize, n: usize) -> Vec<Cell> {
    frame(m, n).cells().collect()
}

/// Verifies that `q` promotions preserve the frame labels of every tableau
/// of the rectangular family: `Frame(P^q(t)) = Frame(t)` boxwise.
pub fn audit_frame_theorem(
    spec: &EnumSpec,
    jobs: usize,
    budget: u64,
) -> Result<AuditReport, AuditError> {
    let started = Instant::now();
    let (m, n) = spec_rectangle(spec)?;
    let frame_cells = frame_cells_vec(m, n);
    let q = spec.q();
    let (instances, orbits, witness) = for_each_orbit(spec, jobs, budget, |o| {
        for (k, t) in o.elements().iter().enumerate() {
            let p = o.power_of(k, q);
            for &c in &frame_cells {
                let (before, after) = (t.entry(c).unwrap(), p.entry(c).unwrap());
                if before != after {
                    return Some(Witness::FrameMismatch {
                        tableau: TableauJson::from_tableau(t),
                        power: TableauJson::from_tableau(p),
                        cell: c,
                        before,
                        after,
                    });
                }
            }
        }
        None
    })?;
    Ok(AuditReport::build(
        "frame", spec, None, instances, orbits, witness, started,
    ))
}

/// Verifies that the whole tableau returns after `q` promotions (the
/// two-row statement; on `2 x n` the frame is the whole rectangle).
pub fn audit_full_periodicity(
    spec: &EnumSpec,
    jobs: usize,
    budget: u64,
) -> Result<AuditReport, AuditError> {
    let started = Instant::now();
    let q = spec.q();
    let (instances, orbits, witness) = for_each_orbit(spec, jobs, budget, |o| {
        if !(q as usize).is_multiple_of(o.size()) {
            let t = o.canonical();
            return Some(Witness::Periodicity {
                tableau: TableauJson::from_tableau(t),
                power: TableauJson::from_tableau(o.power_of(0, q)),
                orbit_size: o.size() as u64,
            });
        }
        None
    })?;
    Ok(AuditReport::build(
        "periodicity",
        spec,
        None,
        instances,
        orbits,
        witness,
        started,
    ))
}

fn expected_average(q: u32, set_len: usize) -> Ratio<i64> {
    Ratio::new((q as i64 + 1) * set_len as i64, 2)
}

fn homomesy_witness(o: &Orbit, cells: &[Cell], expected: Ratio<i64>) -> Option<Witness> {
    let sum: u64 = o
        .elements()
        .iter()
        .map(|t| wt(t, cells.iter().copied()).expect("stat set inside shape"))
        .sum();
    let observed = Ratio::new(sum as i64, o.size() as i64);
    if observed == expected {
        return None;
    }
    Some(Witness::HomomesyViolation {
        representative: TableauJson::from_tableau(o.canonical()),
        stat_set: cells.to_vec(),
        orbit_size: o.size() as u64,
        weight_sum: sum,
        observed_average: observed.to_string(),
        expected_average: expected.to_string(),
    })
}

/// Verifies the orbit-average statement for one rotation-fixed frame set:
/// every promotion orbit averages `wt` to exactly `(q+1)|S|/2`.
pub fn audit_homomesy(
    spec: &EnumSpec,
    set: &StatSet,
    jobs: usize,
    budget: u64,
) -> Result<AuditReport, AuditError> {
    let started = Instant::now();
    let (m, n) = spec_rectangle(spec)?;
    // re-validate against this rectangle; the set may have been built for
    // another one
    let set = StatSet::symmetric(m, n, set.cells(), set.label())?;
    let expected = expected_average(spec.q(), set.len());
    let cells: Vec<Cell> = set.cells().collect();
    let (instances, orbits, witness) = for_each_orbit(spec, jobs, budget, |o| {
        homomesy_witness(o, &cells, expected)
    })?;
    Ok(AuditReport::build(
        "homomesy",
        spec,
        Some(format!("S = {} ({} boxes)", set.label(), set.len())),
        instances,
        orbits,
        witness,
        started,
    ))
}

/// The standard homomesy battery: every symmetric pair first (pair-level
/// passing implies every symmetric set by linearity), then the aggregated
/// sets, to catch aggregation bugs independently.
pub fn audit_homomesy_suite(
    spec: &EnumSpec,
    jobs: usize,
    budget: u64,
) -> Result<Vec<AuditReport>, AuditError> {
    let (m, n) = spec_rectangle(spec)?;
    let mut reports = Vec::new();
    let mut seen = BTreeSet::new();
    for b in frame(m, n).cells() {
        let partner = rotate_box(m, n, b);
        if !seen.insert(b.min(partner)) {
            continue;
        }
        let set = StatSet::pair(m, n, b)?;
        reports.push(audit_homomesy(spec, &set, jobs, budget)?);
    }
    for set in [
        StatSet::full_frame(m, n),
        StatSet::corners(m, n),
        StatSet::first_last_row(m, n),
    ] {
        reports.push(audit_homomesy(spec, &set, jobs, budget)?);
    }
    Ok(reports)
}

/// Searches for an orbit violating the `(q+1)|S|/2` average for an
/// arbitrary rotation-fixed box set, frame or not. This is the negative
/// control: sets that leave the frame are expected to admit violations.
pub fn find_homomesy_violation(
    spec: &EnumSpec,
    cells: impl IntoIterator<Item = Cell>,
    budget: u64,
) -> Result<Option<Witness>, AuditError> {
    let (m, n) = spec_rectangle(spec)?;
    let cells: BTreeSet<Cell> = cells.into_iter().collect();
    for &c in &cells {
        if !spec.shape().contains(c) {
            return Err(AuditError::OutsideShape(c));
        }
    }
    check_rotation_fixed(m, n, &cells)?;
    let expected = expected_average(spec.q(), cells.len());
    let cells: Vec<Cell> = cells.into_iter().collect();
    for o in orbit_partition(spec, budget, 1)? {
        if let Some(w) = homomesy_witness(&o, &cells, expected) {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Checks the evacuation operator identities on every tableau of the
/// family: both evacuations are involutions, their composite is `P^q`,
/// promotion conjugates evacuation to its inverse, and (on rectangles)
/// dual evacuation is the rotation conjugate of evacuation.
pub fn audit_operator_identities(spec: &EnumSpec, jobs: usize) -> Result<AuditReport, AuditError> {
    let started = Instant::now();
    let rectangular = spec_rectangle(spec).is_ok();
    let q = spec.q();

    let check = |t: &IncreasingTableau| -> Option<Witness> {
        let mismatch = |identity: &str, lhs: &IncreasingTableau, rhs: &IncreasingTableau| {
            Some(Witness::OperatorIdentity {
                identity: identity.to_string(),
                tableau: TableauJson::from_tableau(t),
                lhs: TableauJson::from_tableau(lhs),
                rhs: TableauJson::from_tableau(rhs),
            })
        };
        let e = evacuate(t);
        let ee = evacuate(&e);
        if ee != *t {
            return mismatch("E.E = id", &ee, t);
        }
        let d = crate::dynamics::dual_evacuate(t);
        let dd = crate::dynamics::dual_evacuate(&d);
        if dd != *t {
            return mismatch("E*.E* = id", &dd, t);
        }
        let de = crate::dynamics::dual_evacuate(&e);
        let pq = promote_power(t, q as i64);
        if de != pq {
            return mismatch("E*.E = P^q", &de, &pq);
        }
        let pe = promote(&e);
        let ep = evacuate(&promote_inverse(t));
        if pe != ep {
            return mismatch("P.E = E.P^-1", &pe, &ep);
        }
        if rectangular {
            let rer = evacuate(&t.rot().unwrap()).rot().unwrap();
            if d != rer {
                return mismatch("E* = rot.E.rot", &d, &rer);
            }
        }
        None
    };

    let (instances, witness) = for_each_tableau(spec, jobs, check);
    Ok(AuditReport::build(
        "identities",
        spec,
        Some(if rectangular {
            "involutions, composite, conjugation, rotation".into()
        } else {
            "involutions, composite, conjugation (rotation skipped: not a rectangle)".into()
        }),
        instances,
        0,
        witness,
        started,
    ))
}

/// Runs `check` over every enumerated tableau; parallel over shards for
/// `jobs > 1` with a deterministic (earliest-in-order) witness.
fn for_each_tableau<F>(spec: &EnumSpec, jobs: usize, check: F) -> (u64, Option<Witness>)
where
    F: Fn(&IncreasingTableau) -> Option<Witness> + Sync,
{
    if jobs <= 1 {
        let mut instances = 0;
        let mut witness = None;
        for t in enumerate(spec) {
            instances += 1;
            if witness.is_none() {
                witness = check(&t);
            }
        }
        return (instances, witness);
    }
    type ShardResult = (u64, Option<(Vec<u8>, Witness)>);
    let results: Vec<ShardResult> = Enumerator::shards(spec, jobs)
        .into_par_iter()
        .map(|shard| {
            let mut instances = 0;
            let mut witness: Option<(Vec<u8>, Witness)> = None;
            for t in shard {
                instances += 1;
                if witness.is_none() {
                    witness = check(&t).map(|w| (t.packed_key(), w));
                }
            }
            (instances, witness)
        })
        .collect();
    let instances = results.iter().map(|(n, _)| n).sum();
    let witness = results
        .into_iter()
        .filter_map(|(_, w)| w)
        .min_by(|(a, _), (b, _)| a.cmp(b))
        .map(|(_, w)| w);
    (instances, witness)
}

/// Verifies that rotation and evacuation agree on the frame of every
/// tableau of the rectangular family, reporting the first row, first
/// column, and remaining frame separately, and cross-checks the first-row
/// lengths of the evacuation against longest-increasing-subsequence
/// lengths of the rotated reading word at every level.
pub fn audit_rot_evac_frame(spec: &EnumSpec, jobs: usize) -> Result<AuditReport, AuditError> {
    let started = Instant::now();
    let (m, n) = spec_rectangle(spec)?;
    let frame_cells = frame_cells_vec(m, n);
    let q = spec.q();

    let check = |t: &IncreasingTableau| -> Option<Witness> {
        let r = t.rot().unwrap();
        let e = evacuate(t);
        for &c in &frame_cells {
            if r.entry(c) != e.entry(c) {
                let region = if c.row == 1 {
                    "first row"
                } else if c.col == 1 {
                    "first column"
                } else {
                    "last row/column"
                };
                return Some(Witness::RotEvacDisagreement {
                    region: region.to_string(),
                    tableau: TableauJson::from_tableau(t),
                    rotated: TableauJson::from_tableau(&r),
                    evacuated: TableauJson::from_tableau(&e),
                    cell: c,
                });
            }
        }
        // first-row length of E(t) restricted to <= a, against the LIS of
        // the rotated reading word restricted to <= a
        let rotated_word = rot_word(&t.reading_word(), q);
        let evac_vector = e.encode();
        for a in 0..=q {
            let evac_first_row = evac_vector.shapes()[a as usize].part(0);
            let lis_value = lis(&word_le(&rotated_word, a));
            if evac_first_row != lis_value {
                return Some(Witness::RowLengthMismatch {
                    tableau: TableauJson::from_tableau(t),
                    level: a,
                    evac_first_row,
                    lis_value,
                });
            }
        }
        None
    };

    let (instances, witness) = for_each_tableau(spec, jobs, check);
    Ok(AuditReport::build(
        "rot-evac",
        spec,
        Some("frame agreement by region + first-row/LIS cross-check".into()),
        instances,
        0,
        witness,
        started,
    ))
}

/// Verifies the distribution-multiset statement on the rectangular family:
/// for every tableau and frame box, the multiset of values shown at the
/// box over `q` promotions is unchanged by evacuation, and each symmetric
/// pair of distributions sums to `q(q+1)`.
pub fn audit_dist(
    spec: &EnumSpec,
    jobs: usize,
    budget: u64,
) -> Result<AuditReport, AuditError> {
    let started = Instant::now();
    let (m, n) = spec_rectangle(spec)?;
    let frame_cells = frame_cells_vec(m, n);
    let q = spec.q();

    let (instances, orbits, witness) = for_each_orbit(spec, jobs, budget, |o| {
        for (k, t) in o.elements().iter().enumerate() {
            // distributions at every frame box, straight off the orbit
            let mut dists: Vec<Vec<u32>> = vec![Vec::with_capacity(q as usize); frame_cells.len()];
            for step in 0..q {
                let u = o.power_of(k, step);
                for (ci, &c) in frame_cells.iter().enumerate() {
                    dists[ci].push(u.entry(c).unwrap());
                }
            }
            for d in &mut dists {
                d.sort_unstable();
            }
            // one promotion walk of the evacuation covers every box
            let e = evacuate(t);
            let mut evac_dists: Vec<Vec<u32>> =
                vec![Vec::with_capacity(q as usize); frame_cells.len()];
            let mut current = e;
            for step in 0..q {
                for (ci, &c) in frame_cells.iter().enumerate() {
                    evac_dists[ci].push(current.entry(c).unwrap());
                }
                if step + 1 < q {
                    current = promote(&current);
                }
            }
            for d in &mut evac_dists {
                d.sort_unstable();
            }
            for (ci, &c) in frame_cells.iter().enumerate() {
                if dists[ci] != evac_dists[ci] {
                    return Some(Witness::DistMismatch {
                        tableau: TableauJson::from_tableau(t),
                        cell: c,
                        dist: dists[ci].clone(),
                        evac_dist: evac_dists[ci].clone(),
                    });
                }
                let partner = rotate_box(m, n, c);
                let pi = frame_cells.iter().position(|&x| x == partner).unwrap();
                let sum: u64 = dists[ci].iter().map(|&v| v as u64).sum::<u64>()
                    + dists[pi].iter().map(|&v| v as u64).sum::<u64>();
                let expected = q as u64 * (q as u64 + 1);
                if sum != expected {
                    return Some(Witness::PairSumMismatch {
                        tableau: TableauJson::from_tableau(t),
                        cell: c,
                        partner,
                        sum,
                        expected,
                    });
                }
            }
        }
        None
    })?;
    Ok(AuditReport::build(
        "dist", spec, None, instances, orbits, witness, started,
    ))
}

fn frame_restriction_agrees(t: &IncreasingTableau, u: &IncreasingTableau, fr: &FrameSet) -> bool {
    fr.cells().all(|c| t.entry(c) == u.entry(c))
}

/// Progress snapshot written during a three-row scan; `watermark` is the
/// row-major entry sequence of the last canonical representative whose
/// orbit was fully verified.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanCheckpoint {
    pub shape: String,
    pub q: u32,
    pub watermark: Vec<u32>,
    pub instances: u64,
    pub orbits: u64,
    pub promotions: u64,
    pub min_agreement: Option<u64>,
    pub complete: bool,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ScanOptions<'a> {
    /// Maximum promotions to spend before stopping with a checkpoint.
    pub budget: Option<u64>,
    /// Where to read and write the checkpoint.
    pub checkpoint: Option<&'a Path>,
    /// Checkpoint after this many newly verified orbits (0 = only at exit).
    pub checkpoint_every: u64,
}

/// Outcome of a (possibly partial) three-row scan.
#[derive(Clone, Debug)]
pub struct ScanOutcome {
    pub report: AuditReport,
    pub checkpoint: ScanCheckpoint,
    /// False when the budget ran out; resume from the checkpoint.
    pub complete: bool,
}

/// Scans `Inc^q(3 x n)` for a counterexample to full `q`-periodicity of
/// promotion (an open statement: a scan can only report "no counterexample
/// found", never truth). Each orbit is checked once at its canonical
/// representative; `P^q = id` on an orbit exactly when the orbit size
/// divides `q`. Also tracks the minimum number of boxes on which `t` and
/// `P^q(t)` agree; the frame alone guarantees `2n + 2` of the `3n`.
///
/// The walk restarts from the checkpointed canonical representative, so
/// interrupted scans resume without repeating verified orbits.
pub fn scan_three_row(n: usize, q: u32, opts: &ScanOptions) -> Result<ScanOutcome, AuditError> {
    let started = Instant::now();
    let spec = EnumSpec::rectangle(3, n, q);
    let fr = frame(3, n);

    let mut instances: u64 = 0;
    let mut orbits: u64 = 0;
    let mut promotions: u64 = 0;
    let mut min_agreement: Option<u64> = None;
    let mut witness: Option<Witness> = None;
    let mut watermark: Vec<u32> = Vec::new();
    let mut resumed = false;

    let mut stream = match opts.checkpoint {
        Some(path) if path.exists() => {
            let cp = read_checkpoint(path)?;
            if cp.shape != spec.shape().to_string() || cp.q != q {
                return Err(AuditError::Checkpoint {
                    path: path.display().to_string(),
                    msg: format!(
                        "checkpoint is for {} q={}, requested {} q={q}",
                        cp.shape,
                        cp.q,
                        spec.shape()
                    ),
                });
            }
            instances = cp.instances;
            orbits = cp.orbits;
            min_agreement = cp.min_agreement;
            watermark = cp.watermark.clone();
            resumed = true;
            let last = tableau_from_row_major(&spec, &cp.watermark);
            Enumerator::resume_after(&spec, &last)
        }
        _ => enumerate(&spec),
    };

    let budget = opts.budget.unwrap_or(u64::MAX);
    let mut since_checkpoint = 0u64;
    let mut exhausted = false;

    for t in &mut stream {
        // decide canonicity by walking; abort as soon as a smaller element
        // appears so interrupted runs stay resumable without a visited set
        let mut elements = vec![t.clone()];
        let mut canonical = true;
        loop {
            let next = promote(elements.last().unwrap());
            promotions += 1;
            if next == t {
                break;
            }
            if next.row_major().lt(t.row_major()) {
                canonical = false;
                break;
            }
            elements.push(next);
        }
        if !canonical {
            if promotions >= budget {
                exhausted = true;
                break;
            }
            continue;
        }
        let size = elements.len();
        orbits += 1;
        instances += size as u64;
        for (k, u) in elements.iter().enumerate() {
            let v = &elements[(k + q as usize) % size];
            let agreement = u
                .shape()
                .cells()
                .filter(|&c| u.entry(c) == v.entry(c))
                .count() as u64;
            min_agreement = Some(min_agreement.map_or(agreement, |m| m.min(agreement)));
            debug_assert!(frame_restriction_agrees(u, v, &fr));
        }
        if !(q as usize).is_multiple_of(size) && witness.is_none() {
            witness = Some(Witness::Periodicity {
                tableau: TableauJson::from_tableau(&t),
                power: TableauJson::from_tableau(&elements[q as usize % size]),
                orbit_size: size as u64,
            });
        }
        watermark = t.row_major().collect();
        since_checkpoint += 1;
        if let Some(path) = opts.checkpoint {
            if opts.checkpoint_every > 0 && since_checkpoint >= opts.checkpoint_every {
                since_checkpoint = 0;
                write_checkpoint(
                    path,
                    &make_checkpoint(
                        &spec, q, &watermark, instances, orbits, promotions, min_agreement, false,
                    ),
                )?;
            }
        }
        if promotions >= budget {
            exhausted = true;
            break;
        }
    }

    let complete = !exhausted;
    let checkpoint = make_checkpoint(
        &spec, q, &watermark, instances, orbits, promotions, min_agreement, complete,
    );
    if let Some(path) = opts.checkpoint {
        write_checkpoint(path, &checkpoint)?;
    }
    let mut options = format!(
        "scan of an open statement; a passing verdict means 'no counterexample found', \
         not truth; min boxwise agreement {} of {}",
        min_agreement.map_or_else(|| "n/a".to_string(), |m| m.to_string()),
        3 * n
    );
    if resumed {
        options.push_str("; resumed from checkpoint");
    }
    if !complete {
        options.push_str("; budget exhausted, partial");
    }
    let report = AuditReport {
        audit: "scan-3row".into(),
        shape: spec.shape().to_string(),
        q,
        options: Some(options),
        instances,
        orbits,
        verdict: if witness.is_some() {
            Verdict::Fail
        } else {
            Verdict::Pass
        },
        witness,
        elapsed_ms: started.elapsed().as_millis(),
    };
    Ok(ScanOutcome {
        report,
        checkpoint,
        complete,
    })
}

#[allow(clippy::too_many_arguments)]
fn make_checkpoint(
    spec: &EnumSpec,
    q: u32,
    watermark: &[u32],
    instances: u64,
    orbits: u64,
    promotions: u64,
    min_agreement: Option<u64>,
    complete: bool,
) -> ScanCheckpoint {
    ScanCheckpoint {
        shape: spec.shape().to_string(),
        q,
        watermark: watermark.to_vec(),
        instances,
        orbits,
        promotions,
        min_agreement,
        complete,
    }
}

fn tableau_from_row_major(spec: &EnumSpec, vals: &[u32]) -> IncreasingTableau {
    let shape = spec.shape().clone();
    let mut it = vals.iter();
    let rows = (1..=shape.num_rows())
        .map(|r| {
            let (lo, hi) = shape.row_bounds(r);
            (&mut it).take(hi - lo).copied().collect()
        })
        .collect();
    IncreasingTableau::new(shape, rows, spec.q()).expect("checkpoint watermark is a valid tableau")
}

fn read_checkpoint(path: &Path) -> Result<ScanCheckpoint, AuditError> {
    let text = std::fs::read_to_string(path).map_err(|e| AuditError::Checkpoint {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    serde_json::from_str(&text).map_err(|e| AuditError::Checkpoint {
        path: path.display().to_string(),
        msg: e.to_string(),
    })
}

fn write_checkpoint(path: &Path, cp: &ScanCheckpoint) -> Result<(), AuditError> {
    let text = serde_json::to_string_pretty(cp).expect("checkpoint serializes");
    std::fs::write(path, text).map_err(|e| AuditError::Checkpoint {
        path: path.display().to_string(),
        msg: e.to_string(),
    })
}

/// Convenience: budget used by audits unless the caller overrides it.
pub fn default_budget() -> u64 {
    DEFAULT_ORBIT_BUDGET
}
