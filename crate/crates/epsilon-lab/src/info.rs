//! Information measures of stationary processes: block entropy, entropy
//! rate, excess entropy (past–future mutual information), and the excess
//! entropy of a channel under a given input.

use std::collections::HashMap;

use crate::algebra::{joint_machine, remove_transients};
use crate::error::{Error, Result};
use crate::model::{MachinePresentation, TransducerPresentation};

/// Convergence tolerance (bits) for excess-entropy increments.
pub const EXCESS_TOL: f64 = 1e-9;
/// Largest block length attempted by the excess-entropy estimator.
pub const EXCESS_MAX_LENGTH: usize = 24;
/// Convergence tolerance (bits) for block-difference entropy-rate estimates.
pub const RATE_TOL: f64 = 1e-10;
/// Largest block length attempted by the block-difference entropy rate.
pub const RATE_MAX_LENGTH: usize = 30;
/// Belief vectors are identified when equal to this many decimal digits;
/// coarser grouping only grows the node count, never changes probabilities.
const BELIEF_DIGITS_SCALE: f64 = 1e12;
/// Safety cap on distinct belief nodes per level.
const MAX_BELIEF_NODES: usize = 1 << 16;
/// Probability mass below this is dropped during belief propagation.
const BRANCH_PRUNE: f64 = 1e-15;

const LN_2: f64 = std::f64::consts::LN_2;

// ---------------------------------------------------------------------------
// Block entropy via belief aggregation
// ---------------------------------------------------------------------------

/// A set of words sharing (to rounding) one conditional state distribution.
/// `p` accumulates Σ p(w) and `s` accumulates Σ p(w) ln p(w); both extend to
/// length L+1 with only per-node work, so the level cost is the number of
/// distinct beliefs rather than the number of words.
#[derive(Clone)]
struct BeliefNode {
    belief: Vec<f64>,
    p: f64,
    s: f64,
}

fn belief_key(belief: &[f64]) -> Vec<i64> {
    belief
        .iter()
        .map(|&b| (b * BELIEF_DIGITS_SCALE).round() as i64)
        .collect()
}

/// Streams the block-entropy curve H(1), H(2), … (bits) to `consume`,
/// stopping early when it returns `false`, after `max_length` levels, or —
/// without error — when the next level would exceed the belief-node cap.
/// Callers that need a specific level must check it was reached.
fn block_entropy_curve<F>(m: &MachinePresentation, max_length: usize, mut consume: F) -> Result<()>
where
    F: FnMut(usize, f64) -> bool,
{
    let pi = m.stationary()?;
    let root = BeliefNode {
        belief: pi.probabilities().to_vec(),
        p: 1.0,
        s: 0.0,
    };
    let mut level: HashMap<Vec<i64>, BeliefNode> = HashMap::new();
    level.insert(belief_key(&root.belief), root);

    for length in 1..=max_length {
        let mut next: HashMap<Vec<i64>, BeliefNode> = HashMap::new();
        for node in level.values() {
            // Stop (without consuming the incomplete level) rather than
            // letting a non-synchronizing presentation grow without bound.
            if next.len() > MAX_BELIEF_NODES {
                return Ok(());
            }
            for y in 0..m.alphabet().len() {
                let t = m.matrix(y);
                let n = m.n_states();
                // w = beliefᵀ T^(y); q = emission probability of y.
                let mut w = vec![0.0; n];
                let mut q = 0.0;
                for i in 0..n {
                    let bi = node.belief[i];
                    if bi == 0.0 {
                        continue;
                    }
                    for j in 0..n {
                        let v = bi * t[(i, j)];
                        w[j] += v;
                        q += v;
                    }
                }
                if q <= BRANCH_PRUNE {
                    continue;
                }
                for wj in &mut w {
                    *wj /= q;
                }
                let entry = next.entry(belief_key(&w)).or_insert_with(|| BeliefNode {
                    belief: w.clone(),
                    p: 0.0,
                    s: 0.0,
                });
                // Each word w' = w·y satisfies p(w') = q·p(w), hence
                // Σ p' ln p' = q·Σ p ln p + q ln q · Σ p.
                entry.p += q * node.p;
                entry.s += q * node.s + q * q.ln() * node.p;
            }
        }
        let h: f64 = -next.values().map(|n| n.s).sum::<f64>() / LN_2;
        if !consume(length, h) || next.len() > MAX_BELIEF_NODES {
            return Ok(());
        }
        level = next;
    }
    Ok(())
}

/// Shannon entropy H(L) (bits) of the length-`L` word distribution of the
/// stationary process presented by `m`, computed exactly by aggregating
/// words with equal conditional state distributions.
pub fn block_entropy(m: &MachinePresentation, length: usize) -> Result<f64> {
    if length == 0 {
        return Ok(0.0);
    }
    let mut out = None;
    let mut reached = 0;
    let mut last = 0.0;
    block_entropy_curve(m, length, |l, h| {
        (reached, last) = (l, h);
        if l == length {
            out = Some(h);
        }
        l < length
    })?;
    // The belief-node cap can end the curve before the requested length.
    out.ok_or(Error::NonConvergence {
        value: last,
        terminal_l: reached,
        residual: f64::INFINITY,
    })
}

// ---------------------------------------------------------------------------
// Entropy rate
// ---------------------------------------------------------------------------

/// Entropy rate h (bits/symbol). Exact for unifilar presentations
/// (state-averaged emission entropy); otherwise estimated from block-entropy
/// differences H(L) − H(L−1) until successive estimates agree to `1e-10`.
pub fn entropy_rate(m: &MachinePresentation) -> Result<f64> {
    if m.is_unifilar() {
        return entropy_rate_unifilar(m);
    }
    entropy_rate_block_difference(m)
}

fn entropy_rate_unifilar(m: &MachinePresentation) -> Result<f64> {
    let pi = m.stationary()?;
    let mut h = 0.0;
    for (i, &p) in pi.probabilities().iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        for q in m.emission_probs(i) {
            if q > 0.0 {
                h -= p * q * q.log2();
            }
        }
    }
    Ok(h)
}

fn entropy_rate_block_difference(m: &MachinePresentation) -> Result<f64> {
    let mut prev_h = 0.0;
    let mut prev_rate = f64::INFINITY;
    let mut rate = f64::INFINITY;
    let mut converged = false;
    block_entropy_curve(m, RATE_MAX_LENGTH, |_, h| {
        prev_rate = rate;
        rate = h - prev_h;
        prev_h = h;
        converged = (rate - prev_rate).abs() < RATE_TOL;
        !converged
    })?;
    if converged {
        Ok(rate)
    } else {
        Err(Error::NonConvergence {
            value: rate,
            terminal_l: RATE_MAX_LENGTH,
            residual: (rate - prev_rate).abs(),
        })
    }
}

// ---------------------------------------------------------------------------
// Excess entropy
// ---------------------------------------------------------------------------

/// Result of the excess-entropy estimator: the value E (bits), the block
/// length the iteration stopped at, the last increment observed, and
/// whether the increment fell below tolerance.
#[derive(Debug, Clone, Copy)]
pub struct ExcessEntropyEstimate {
    /// Estimated excess entropy in bits (a lower bound when unconverged:
    /// the finite-length estimates increase monotonically toward E).
    pub value: f64,
    /// Block length at which iteration stopped.
    pub terminal_length: usize,
    /// Last increment between successive estimates (bits).
    pub residual: f64,
    /// True when two successive increments fell below tolerance.
    pub converged: bool,
}

/// Excess entropy E = lim_L [H(L) − L·h] (bits): the mutual information
/// between the semi-infinite past and future. Converges when two successive
/// increments drop below `tol`; otherwise reports the (lower-bound) estimate
/// with `converged = false`.
pub fn excess_entropy_estimate(
    m: &MachinePresentation,
    tol: f64,
    max_length: usize,
) -> Result<ExcessEntropyEstimate> {
    let exact_rate = if m.is_unifilar() {
        Some(entropy_rate_unifilar(m)?)
    } else {
        None
    };
    let mut prev_h = 0.0;
    let mut est = ExcessEntropyEstimate {
        value: 0.0,
        terminal_length: 0,
        residual: f64::INFINITY,
        converged: false,
    };
    let mut prev_increment = f64::INFINITY;
    block_entropy_curve(m, max_length, |l, h| {
        // With an exact rate, E_L = H(L) − L·h; otherwise use the
        // finite-length form H(L) − L·[H(L) − H(L−1)], which is likewise
        // monotone nondecreasing for these processes.
        let value = match exact_rate {
            Some(rate) => h - (l as f64) * rate,
            None => h - (l as f64) * (h - prev_h),
        };
        let increment = (value - est.value).abs();
        let first = est.terminal_length == 0;
        est.value = value;
        est.terminal_length = l;
        est.residual = increment;
        prev_h = h;
        if !first && increment < tol && prev_increment < tol {
            est.converged = true;
            return false;
        }
        prev_increment = increment;
        true
    })?;
    Ok(est)
}

/// Excess entropy with the default tolerance (1e-9 bits) and maximum block
/// length (24); errors with the best estimate when unconverged.
pub fn excess_entropy(m: &MachinePresentation) -> Result<f64> {
    let est = excess_entropy_estimate(m, EXCESS_TOL, EXCESS_MAX_LENGTH)?;
    if est.converged {
        Ok(est.value)
    } else {
        Err(Error::NonConvergence {
            value: est.value,
            terminal_l: est.terminal_length,
            residual: est.residual,
        })
    }
}

// ---------------------------------------------------------------------------
// Channel excess entropy
// ---------------------------------------------------------------------------

/// Excess entropy of a channel under a given input process: the mutual
/// information between the joint past and the output future conditioned on
/// the input future, equal to E(joint) − E(input).
#[derive(Debug, Clone, Copy)]
pub struct ChannelExcessEntropy {
    /// E (bits): joint minus input excess entropy.
    pub value: f64,
    /// Estimator detail for the joint input-output process.
    pub joint: ExcessEntropyEstimate,
    /// Estimator detail for the input process alone.
    pub input: ExcessEntropyEstimate,
}

impl ChannelExcessEntropy {
    /// True when both underlying estimates converged.
    pub fn converged(&self) -> bool {
        self.joint.converged && self.input.converged
    }
}

/// Channel excess entropy of `t` driven by `input`, with estimator detail;
/// unconverged component estimates are reported rather than fatal (they
/// bound E from below).
pub fn channel_excess_entropy_estimate(
    t: &TransducerPresentation,
    input: &MachinePresentation,
) -> Result<ChannelExcessEntropy> {
    let joint = remove_transients(&joint_machine(t, input)?)?;
    let input_rec = remove_transients(input)?;
    let ej = excess_entropy_estimate(&joint, EXCESS_TOL, EXCESS_MAX_LENGTH)?;
    let ei = excess_entropy_estimate(&input_rec, EXCESS_TOL, EXCESS_MAX_LENGTH)?;
    Ok(ChannelExcessEntropy {
        value: ej.value - ei.value,
        joint: ej,
        input: ei,
    })
}

/// Channel excess entropy E (bits); errors when either component estimate
/// fails to converge.
pub fn channel_excess_entropy(
    t: &TransducerPresentation,
    input: &MachinePresentation,
) -> Result<f64> {
    let est = channel_excess_entropy_estimate(t, input)?;
    if est.converged() {
        Ok(est.value)
    } else {
        let worse = if est.joint.converged {
            est.input
        } else {
            est.joint
        };
        Err(Error::NonConvergence {
            value: est.value,
            terminal_l: worse.terminal_length,
            residual: worse.residual,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use approx::assert_abs_diff_eq;

    #[test]
    fn period2_blocks_and_excess() {
        let m = models::period2();
        assert_abs_diff_eq!(block_entropy(&m, 1).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(block_entropy(&m, 3).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(entropy_rate(&m).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(excess_entropy(&m).unwrap(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn coin_blocks_are_additive_and_memoryless() {
        let m = models::biased_coin(0.2).unwrap();
        let h = crate::model::binary_entropy(0.2);
        assert_abs_diff_eq!(h, 0.721928094887362, epsilon = 1e-14);
        assert_abs_diff_eq!(block_entropy(&m, 3).unwrap(), 3.0 * h, epsilon = 1e-12);
        assert_abs_diff_eq!(entropy_rate(&m).unwrap(), h, epsilon = 1e-12);
        assert_abs_diff_eq!(excess_entropy(&m).unwrap(), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn block_entropy_matches_word_enumeration() {
        let t = models::bob(0.3).unwrap();
        let input = models::biased_coin(0.4).unwrap();
        let joint = crate::algebra::joint_machine(&t, &input).unwrap();
        for length in 1..=5 {
            let d = crate::algebra::word_distribution(&joint, length, 0.0).unwrap();
            let brute: f64 = -d
                .iter()
                .filter(|&(_, p)| p > 0.0)
                .map(|(_, p)| p * p.log2())
                .sum::<f64>();
            assert_abs_diff_eq!(
                block_entropy(&joint, length).unwrap(),
                brute,
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn delay_channel_excess_is_input_entropy_rate() {
        let t = models::delay_channel();
        let input = models::biased_coin(0.2).unwrap();
        let e = channel_excess_entropy(&t, &input).unwrap();
        assert_abs_diff_eq!(e, 0.721928094887362, epsilon = 1e-9);
    }

    #[test]
    fn detector_channel_excess_matches_closed_form() {
        let t = models::bob(0.5).unwrap();
        let input = models::biased_coin(0.2).unwrap();
        let e = channel_excess_entropy(&t, &input).unwrap();
        assert_abs_diff_eq!(e, models::bob_excess(0.5, 0.2).unwrap(), epsilon = 1e-9);
        assert_abs_diff_eq!(e, 0.180800195507933, epsilon = 1e-9);
    }

    #[test]
    fn block_difference_rate_agrees_with_exact_rate() {
        // A unifilar machine fed through the block-difference path must
        // reproduce the exact state-averaged rate.
        let m = models::no_ambiguity_machine(0.3, 0.7, 0.4).unwrap();
        let exact = entropy_rate(&m).unwrap();
        let blockwise = entropy_rate_block_difference(&m).unwrap();
        assert_abs_diff_eq!(exact, blockwise, epsilon = 1e-9);
    }

    #[test]
    fn excess_entropy_estimates_increase_monotonically() {
        let m = models::no_ambiguity_machine(0.2, 0.9, 0.3).unwrap();
        let mut last = -1.0;
        for length in 1..=10 {
            let est = excess_entropy_estimate(&m, 0.0, length).unwrap();
            assert!(est.value >= last - 1e-12);
            last = est.value;
        }
    }
}
