//! Ordering comparisons between two modeled agents: does the agent with the
//! larger classical memory also need the larger quantum memory? Includes the
//! sufficient-condition classifier (usable when only one quantum value is
//! known) and parallel region scans over parameter grids.

use crate::error::Result;
use crate::quantum::ComplexityReport;

/// Dead band (bits) below which a difference counts as a tie.
pub const DEAD_BAND: f64 = 1e-9;

/// Sign of a difference, with the dead band treated as zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    /// Sign of `diff` under the global dead band.
    pub fn of(diff: f64) -> Self {
        if diff > DEAD_BAND {
            Sign::Positive
        } else if diff < -DEAD_BAND {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    /// True when both signs are strict and opposite.
    pub fn opposes(self, other: Self) -> bool {
        matches!(
            (self, other),
            (Sign::Positive, Sign::Negative) | (Sign::Negative, Sign::Positive)
        )
    }
}

/// What the comparison established about the two orderings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sufficiency {
    /// The classical and quantum orderings disagree.
    Ambiguous,
    /// The orderings agree (or nothing distinguishes the agents).
    Consistent,
    /// Not decidable from the available quantities.
    Agnostic,
}

/// Result of comparing two agents' memory measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderingVerdict {
    /// Sign of C_A − C_B.
    pub classical_order: Sign,
    /// Sign of Q_A − Q_B, when both quantum values are known.
    pub quantum_order: Option<Sign>,
    /// The classification established by the available quantities.
    pub sufficient: Sufficiency,
}

/// Compares two agents. With both quantum values known the orderings are
/// compared directly. With one known, the excess entropy of the other side
/// bounds its quantum memory from below (E ≤ Q), which suffices to detect
/// ambiguity or consistency when it exceeds the known Q; otherwise the
/// verdict is agnostic. All premises use the dead band strictly, so an
/// unconverged (lower-bound) excess-entropy estimate can only weaken, never
/// falsify, a fired condition.
pub fn classify(a: &ComplexityReport, b: &ComplexityReport) -> OrderingVerdict {
    let classical_order = Sign::of(a.c - b.c);
    let quantum_order = match (a.q, b.q) {
        (Some(qa), Some(qb)) => Some(Sign::of(qa - qb)),
        _ => None,
    };
    let sufficient = match (a.q, b.q) {
        (Some(_), Some(_)) => {
            let qo = quantum_order.expect("both present");
            if classical_order.opposes(qo) {
                Sufficiency::Ambiguous
            } else {
                Sufficiency::Consistent
            }
        }
        // One side known: E of the unknown side bounds its Q from below.
        (Some(qa), None) => one_sided(classical_order, Sign::Negative, b.e, qa),
        (None, Some(qb)) => one_sided(classical_order, Sign::Positive, a.e, qb),
        (None, None) => Sufficiency::Agnostic,
    };
    OrderingVerdict {
        classical_order,
        quantum_order,
        sufficient,
    }
}

/// One-sided test: the unknown side's Q is at least `e_unknown`; when that
/// strictly exceeds the known side's Q, the quantum order is `unknown_side`
/// (the sign of Q_A − Q_B given the unknown side is larger).
fn one_sided(classical: Sign, unknown_side: Sign, e_unknown: f64, q_known: f64) -> Sufficiency {
    if e_unknown > q_known + DEAD_BAND {
        if classical.opposes(unknown_side) {
            Sufficiency::Ambiguous
        } else if classical == unknown_side {
            Sufficiency::Consistent
        } else {
            Sufficiency::Agnostic
        }
    } else {
        Sufficiency::Agnostic
    }
}

/// Membership of one grid point in the four sufficient-condition regions
/// (plain inequalities, no dead band):
/// R₁ = {C_B > C_A and E_A ≥ Q_B} (ambiguity),
/// R₂ = {C_A > C_B and E_A ≥ Q_B} (consistency),
/// R₃ = {C_A > C_B and E_B ≥ Q_A} (ambiguity),
/// R₄ = {C_B > C_A and E_B ≥ Q_A} (consistency).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegionFlags {
    pub r1: bool,
    pub r2: bool,
    pub r3: bool,
    pub r4: bool,
}

/// Evaluates the four region memberships from two full reports.
pub fn region_flags(a: &ComplexityReport, b: &ComplexityReport) -> RegionFlags {
    let qa = a.q.unwrap_or(f64::INFINITY);
    let qb = b.q.unwrap_or(f64::INFINITY);
    RegionFlags {
        r1: b.c > a.c && a.e >= qb,
        r2: a.c > b.c && a.e >= qb,
        r3: a.c > b.c && b.e >= qa,
        r4: b.c > a.c && b.e >= qa,
    }
}

/// One fully evaluated grid point.
#[derive(Debug, Clone)]
pub struct RegionPoint {
    pub a: ComplexityReport,
    pub b: ComplexityReport,
    pub flags: RegionFlags,
    pub verdict: OrderingVerdict,
}

/// One grid node of a scan: its coordinates and either the evaluated point
/// or the error that node produced (errors don't stop a scan).
#[derive(Debug, Clone)]
pub struct RegionScanPoint {
    pub coords: Vec<f64>,
    pub outcome: Result<RegionPoint>,
}

/// Number of worker threads to use for `jobs` parallel tasks: capped by the
/// `EPSILON_LAB_THREADS` environment variable when set, else by the
/// available parallelism.
pub(crate) fn thread_count(jobs: usize) -> usize {
    let available = std::thread::available_parallelism()
        .map(std::num::NonZeroUsize::get)
        .unwrap_or(1);
    let cap = std::env::var("EPSILON_LAB_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or(available);
    cap.min(jobs.max(1))
}

/// Applies `eval` to every coordinate tuple in `grid` (in parallel when
/// allowed), producing one result per node in grid order regardless of
/// scheduling. Per-point errors are recorded in the output; the scan always
/// completes.
pub fn region_scan<F>(grid: &[Vec<f64>], eval: F) -> Vec<RegionScanPoint>
where
    F: Fn(&[f64]) -> Result<(ComplexityReport, ComplexityReport)> + Sync,
{
    let n = grid.len();
    if n == 0 {
        return Vec::new();
    }
    let mut out: Vec<Option<RegionScanPoint>> = (0..n).map(|_| None).collect();
    let workers = thread_count(n);
    let chunk = n.div_ceil(workers);
    let eval = &eval;
    std::thread::scope(|scope| {
        for (grid_chunk, out_chunk) in grid.chunks(chunk).zip(out.chunks_mut(chunk)) {
            scope.spawn(move || {
                for (coords, slot) in grid_chunk.iter().zip(out_chunk.iter_mut()) {
                    let outcome = eval(coords).map(|(a, b)| {
                        let flags = region_flags(&a, &b);
                        let verdict = classify(&a, &b);
                        RegionPoint {
                            a,
                            b,
                            flags,
                            verdict,
                        }
                    });
                    *slot = Some(RegionScanPoint {
                        coords: coords.clone(),
                        outcome,
                    });
                }
            });
        }
    });
    out.into_iter()
        .map(|p| p.expect("all slots filled"))
        .collect()
}

/// Grid helper: `n` cell-centered coordinates (i + ½)/n strictly inside
/// (0, 1).
pub fn centered_axis(n: usize) -> Vec<f64> {
    (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect()
}

/// Grid helper: row-major cartesian product of two axes.
pub fn product_grid(xs: &[f64], ys: &[f64]) -> Vec<Vec<f64>> {
    let mut grid = Vec::with_capacity(xs.len() * ys.len());
    for &x in xs {
        for &y in ys {
            grid.push(vec![x, y]);
        }
    }
    grid
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use crate::quantum::{quantum_complexity, QuantumMode};

    fn alice_report(r: f64) -> ComplexityReport {
        quantum_complexity(
            &models::delay_channel(),
            &models::biased_coin(r).unwrap(),
            QuantumMode::Standard,
        )
        .unwrap()
    }

    fn bob_report(alpha: f64, r: f64) -> ComplexityReport {
        quantum_complexity(
            &models::bob(alpha).unwrap(),
            &models::biased_coin(r).unwrap(),
            QuantumMode::Standard,
        )
        .unwrap()
    }

    #[test]
    fn delay_vs_detector_is_ambiguous_at_the_reference_point() {
        let a = alice_report(0.2);
        let b = bob_report(0.5, 0.2);
        let verdict = classify(&a, &b);
        assert_eq!(verdict.classical_order, Sign::Negative); // C_A < C_B
        assert_eq!(verdict.quantum_order, Some(Sign::Positive)); // Q_A > Q_B
        assert_eq!(verdict.sufficient, Sufficiency::Ambiguous);
        let flags = region_flags(&a, &b);
        assert!(flags.r1 && !flags.r2 && !flags.r3 && !flags.r4);
    }

    #[test]
    fn identical_reports_are_consistent() {
        let a = bob_report(0.5, 0.2);
        let verdict = classify(&a, &a.clone());
        assert_eq!(verdict.classical_order, Sign::Zero);
        assert_eq!(verdict.quantum_order, Some(Sign::Zero));
        assert_eq!(verdict.sufficient, Sufficiency::Consistent);
    }

    #[test]
    fn one_sided_bound_detects_ambiguity_without_the_other_q() {
        let mut a = alice_report(0.2);
        let b = bob_report(0.5, 0.2);
        a.q = None; // only the detector's quantum memory is known
        let verdict = classify(&a, &b);
        assert_eq!(verdict.quantum_order, None);
        // E_A = h(0.2) exceeds Q_B, and C_B > C_A: ambiguity is certified.
        assert_eq!(verdict.sufficient, Sufficiency::Ambiguous);
        // With no quantum value at all the verdict is agnostic.
        let mut b2 = b.clone();
        b2.q = None;
        assert_eq!(classify(&a, &b2).sufficient, Sufficiency::Agnostic);
    }

    #[test]
    fn scan_is_deterministic_and_records_errors() {
        let axis = centered_axis(4);
        let grid = product_grid(&axis, &axis);
        let eval = |coords: &[f64]| -> crate::error::Result<_> {
            let (alpha, r) = (coords[0], coords[1]);
            if alpha > 0.8 {
                return Err(crate::error::Error::ParamOutOfRange("test".into()));
            }
            Ok((alice_report(r), bob_report(alpha, r)))
        };
        let first = region_scan(&grid, eval);
        let second = region_scan(&grid, eval);
        assert_eq!(first.len(), 16);
        for (p, q) in first.iter().zip(&second) {
            assert_eq!(p.coords, q.coords);
            match (&p.outcome, &q.outcome) {
                (Ok(a), Ok(b)) => {
                    assert_eq!(a.flags, b.flags);
                    assert_eq!(a.verdict, b.verdict);
                }
                (Err(_), Err(_)) => {}
                _ => panic!("nondeterministic outcome"),
            }
        }
        let errors = first.iter().filter(|p| p.outcome.is_err()).count();
        assert_eq!(errors, 4); // the alpha = 0.875 column
                               // A single-point grid classifies that point.
        let single = region_scan(&[vec![0.5, 0.2]], eval);
        assert!(single[0].outcome.is_ok());
    }

    #[test]
    fn region_premises_match_verdicts_on_a_small_grid() {
        // Wherever a region premise holds with strict margins, the direct
        // verdict must agree with the region's label.
        let axis = centered_axis(6);
        for &alpha in &axis {
            for &r in &axis {
                let a = alice_report(r);
                let b = bob_report(alpha, r);
                let flags = region_flags(&a, &b);
                let verdict = classify(&a, &b);
                if flags.r1 && a.e > b.q.unwrap() + DEAD_BAND {
                    assert_ne!(verdict.sufficient, Sufficiency::Consistent);
                }
                if flags.r2 && a.e > b.q.unwrap() + DEAD_BAND {
                    assert_ne!(verdict.sufficient, Sufficiency::Ambiguous);
                }
            }
        }
    }
}
