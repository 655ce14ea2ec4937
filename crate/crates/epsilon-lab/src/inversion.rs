//! Channel inversion: from a channel and an input process, construct an
//! inverse channel that maps the output process back to the input process.
//!
//! The construction conditions the joint input-output process on its output
//! component: each joint transition emitting (x, y) with probability p
//! becomes an inverse transition reading y and writing x with probability
//! p / q, where q is the output process's probability of that y-step. Slots
//! never exercised by the output process remain free and are filled by a
//! completion policy before minimization.

use nalgebra::DMatrix;

use crate::algebra::{
    joint_machine, merge_equivalent_states_indexed, merge_equivalent_transducer, output_machine,
    remove_transients_indexed,
};
use crate::error::{Error, Result};
use crate::model::{
    Alphabet, MachinePresentation, TransducerPresentation, EQUIVALENCE_TOL, SUPPORT_TOL,
};

/// How to fill inverse-channel slots that the output process never reaches.
/// Either way the round-trip distribution is unaffected: the slots carry
/// zero probability under the driving output process.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompletionPolicy {
    /// Copy the behavior every defined state agrees on for that input, when
    /// unanimous; otherwise emit the first output symbol and self-transition.
    /// This reproduces the bundled reference inverse exactly.
    SelfLoop,
    /// Emit uniformly over output symbols and self-transition.
    Uniform,
}

/// A partially defined inverse channel: states are (channel state, output
/// causal state) pairs; transitions read an output symbol y and write an
/// input symbol x; `free_slots` lists (state, y) pairs the output process
/// never exercises.
#[derive(Debug, Clone)]
pub struct InverseDraft {
    states: Vec<String>,
    inputs: Alphabet,
    outputs: Alphabet,
    /// transitions[y][x]: matrix over draft states.
    transitions: Vec<Vec<DMatrix<f64>>>,
    free_slots: Vec<(usize, usize)>,
}

impl InverseDraft {
    /// Draft state labels, `(s,χ)` pairs.
    pub fn states(&self) -> &[String] {
        &self.states
    }

    /// Number of draft states.
    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    /// Input alphabet of the inverse (the original channel's outputs).
    pub fn inputs(&self) -> &Alphabet {
        &self.inputs
    }

    /// Output alphabet of the inverse (the original channel's inputs).
    pub fn outputs(&self) -> &Alphabet {
        &self.outputs
    }

    /// Transition matrix for reading `y` and writing `x`.
    pub fn matrix(&self, y: usize, x: usize) -> &DMatrix<f64> {
        &self.transitions[y][x]
    }

    /// Slots `(state, y)` with no defined transition, in ascending order.
    pub fn free_slots(&self) -> &[(usize, usize)] {
        &self.free_slots
    }
}

/// Runs the inversion construction, returning the draft inverse with its
/// free slots. Requires the output process to admit causal states: the
/// recurrent output presentation must be unifilar.
pub fn invert(t: &TransducerPresentation, input: &MachinePresentation) -> Result<InverseDraft> {
    let joint = joint_machine(t, input)?;
    let (joint_rec, keep) = remove_transients_indexed(&joint)?;
    let output_full = output_machine(t, input)?;
    // The output totals equal the joint totals, so the recurrent class is
    // the same index set; restrict directly.
    let out_rec = MachinePresentation::new(
        keep.iter()
            .map(|&i| output_full.states()[i].clone())
            .collect(),
        output_full.alphabet().clone(),
        output_full
            .matrices()
            .iter()
            .map(|m| m.select_rows(keep.iter()).select_columns(keep.iter()))
            .collect(),
    )?;
    if !out_rec.is_unifilar() {
        return Err(Error::OutputStateCorrespondenceAmbiguous(
            "the output process presentation is not unifilar, so joint states cannot be \
             assigned output causal states"
                .into(),
        ));
    }
    let (out_min, block_of) = merge_equivalent_states_indexed(&out_rec)?;

    let n = joint_rec.n_states();
    let nm = input.n_states();
    let n_in = t.inputs().len();
    let n_out = t.outputs().len();
    let states: Vec<String> = (0..n)
        .map(|r| {
            format!(
                "({},{})",
                t.states()[keep[r] / nm],
                out_min.states()[block_of[r]]
            )
        })
        .collect();

    let mut transitions = vec![vec![DMatrix::<f64>::zeros(n, n); n_in]; n_out];
    let mut free_slots = Vec::new();
    for i in 0..n {
        for y in 0..n_out {
            // Output-process probability of emitting y from this state's
            // causal state, and the joint mass it must account for.
            let q: f64 = out_min.matrix(y).row(block_of[i]).iter().sum();
            let joint_mass: f64 = (0..n_in)
                .map(|x| joint_rec.matrix(x * n_out + y).row(i).iter().sum::<f64>())
                .sum();
            if q <= SUPPORT_TOL {
                if joint_mass > SUPPORT_TOL {
                    return Err(Error::ZeroDivisor(format!(
                        "output probability 0 for symbol {} at {} despite joint mass {}",
                        t.outputs().symbol(y),
                        states[i],
                        joint_mass
                    )));
                }
                free_slots.push((i, y));
                continue;
            }
            let chi_next = out_min
                .successor(block_of[i], y)
                .expect("unifilar by construction");
            for x in 0..n_in {
                let m = joint_rec.matrix(x * n_out + y);
                for j in 0..n {
                    let p = m[(i, j)];
                    if p <= 0.0 {
                        continue;
                    }
                    if block_of[j] != chi_next {
                        return Err(Error::OutputStateCorrespondenceAmbiguous(format!(
                            "joint transition {} -> {} on output {} leaves its causal state",
                            states[i],
                            states[j],
                            t.outputs().symbol(y)
                        )));
                    }
                    transitions[y][x][(i, j)] += p / q;
                }
            }
        }
    }
    Ok(InverseDraft {
        states,
        inputs: t.outputs().clone(),
        outputs: t.inputs().clone(),
        transitions,
        free_slots,
    })
}

/// One state's defined behavior on input y: (written symbol, successor,
/// probability) triples, sorted.
fn row_signature(d: &InverseDraft, i: usize, y: usize) -> Vec<(usize, usize, f64)> {
    let mut sig = Vec::new();
    for x in 0..d.outputs.len() {
        let m = &d.transitions[y][x];
        for j in 0..d.n_states() {
            let p = m[(i, j)];
            if p > SUPPORT_TOL {
                sig.push((x, j, p));
            }
        }
    }
    sig
}

fn signatures_match(a: &[(usize, usize, f64)], b: &[(usize, usize, f64)]) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(&(xa, ja, pa), &(xb, jb, pb))| {
            xa == xb && ja == jb && (pa - pb).abs() <= EQUIVALENCE_TOL
        })
}

/// Fills the draft's free slots according to `policy`, returning a complete
/// (but not yet minimized) inverse channel.
pub fn complete(d: &InverseDraft, policy: CompletionPolicy) -> Result<TransducerPresentation> {
    let n = d.n_states();
    let mut transitions = d.transitions.clone();
    for &(i, y) in &d.free_slots {
        match policy {
            CompletionPolicy::SelfLoop => {
                // Collect defined behaviors on y; copy when unanimous.
                let mut unanimous: Option<Vec<(usize, usize, f64)>> = None;
                let mut agree = true;
                for i2 in 0..n {
                    if d.free_slots.contains(&(i2, y)) {
                        continue;
                    }
                    let sig = row_signature(d, i2, y);
                    match &unanimous {
                        None => unanimous = Some(sig),
                        Some(first) => {
                            if !signatures_match(first, &sig) {
                                agree = false;
                                break;
                            }
                        }
                    }
                }
                match (agree, unanimous) {
                    (true, Some(sig)) if !sig.is_empty() => {
                        for (x, j, p) in sig {
                            transitions[y][x][(i, j)] = p;
                        }
                    }
                    _ => {
                        transitions[y][0][(i, i)] = 1.0;
                    }
                }
            }
            CompletionPolicy::Uniform => {
                let k = d.outputs.len() as f64;
                for x in 0..d.outputs.len() {
                    transitions[y][x][(i, i)] = 1.0 / k;
                }
            }
        }
    }
    TransducerPresentation::new(
        d.states.to_vec(),
        d.inputs.clone(),
        d.outputs.clone(),
        transitions,
    )
}

/// Fills free slots and merges equivalent states, returning the finished
/// inverse channel.
pub fn complete_and_minimize(
    d: &InverseDraft,
    policy: CompletionPolicy,
) -> Result<TransducerPresentation> {
    merge_equivalent_transducer(&complete(d, policy)?)
}

/// Convenience: invert, complete with `policy`, and minimize.
pub fn invert_channel(
    t: &TransducerPresentation,
    input: &MachinePresentation,
    policy: CompletionPolicy,
) -> Result<TransducerPresentation> {
    complete_and_minimize(&invert(t, input)?, policy)
}

/// The output process presentation this inversion round-trips through:
/// recurrent part of the output machine, minimized.
pub fn output_process(
    t: &TransducerPresentation,
    input: &MachinePresentation,
) -> Result<MachinePresentation> {
    let output = output_machine(t, input)?;
    let (rec, _) = remove_transients_indexed(&output)?;
    let (min, _) = merge_equivalent_states_indexed(&rec)?;
    Ok(min)
}

/// Presentation of the process `t` writes when driven by `input`, without
/// state merging: the recurrent restriction of the output machine. Unlike
/// [`output_process`] the result need not be unifilar — an inverse driven by
/// the channel's own output usually is not — but its word statistics are
/// still exact, which is all a round-trip distribution check needs.
pub fn output_presentation(
    t: &TransducerPresentation,
    input: &MachinePresentation,
) -> Result<MachinePresentation> {
    let output = output_machine(t, input)?;
    let (rec, _) = remove_transients_indexed(&output)?;
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{remove_transients, word_distribution, WORD_PRUNE};
    use crate::models;
    use approx::assert_abs_diff_eq;

    fn relay_draft() -> InverseDraft {
        invert(&models::ternary_channel_default(), &models::ternary_input()).unwrap()
    }

    #[test]
    fn relay_draft_structure() {
        let d = relay_draft();
        assert_eq!(d.n_states(), 3);
        assert_eq!(d.free_slots(), &[(0, 0), (0, 1)]);
        // State 0 reads 2 and writes 1 or 2, evenly at the bundled point.
        assert_abs_diff_eq!(d.matrix(2, 1)[(0, 2)], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(d.matrix(2, 2)[(0, 2)], 0.5, epsilon = 1e-12);
        // States 1 and 2 behave identically: read y, write deterministically.
        for i in [1usize, 2] {
            assert_abs_diff_eq!(d.matrix(0, 0)[(i, 0)], 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(d.matrix(1, 1)[(i, 1)], 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(d.matrix(2, 1)[(i, 2)], 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn relay_draft_probabilities_follow_the_parameter() {
        // At a generic parameter point the state-0 ratios are
        // (1−p)/(2−p) and 1/(2−p).
        let p = 0.3;
        let t = models::ternary_channel(p, 1.0 / 3.0, 0.25).unwrap();
        let d = invert(&t, &models::ternary_input()).unwrap();
        assert_abs_diff_eq!(
            d.matrix(2, 1)[(0, 2)],
            (1.0 - p) / (2.0 - p),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(d.matrix(2, 2)[(0, 2)], 1.0 / (2.0 - p), epsilon = 1e-12);
    }

    #[test]
    fn relay_inverse_minimizes_to_two_states() {
        let d = relay_draft();
        let inv = complete_and_minimize(&d, CompletionPolicy::SelfLoop).unwrap();
        assert_eq!(inv.n_states(), 2);
        assert!(inv.validate().is_valid());
        // First state: reads 0 -> writes 0, self; reads 1 -> writes 1 to the
        // merged state; reads 2 -> writes 1 or 2 to the merged state.
        assert_abs_diff_eq!(inv.emission_prob(0, 0, 0), 1.0, epsilon = 1e-12);
        assert_eq!(inv.successor_map().unwrap().get(0, 0, 0), Some(0));
        assert_abs_diff_eq!(inv.emission_prob(0, 1, 1), 1.0, epsilon = 1e-12);
        assert_eq!(inv.successor_map().unwrap().get(0, 1, 1), Some(1));
        assert_abs_diff_eq!(inv.emission_prob(0, 2, 1), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(inv.emission_prob(0, 2, 2), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(inv.emission_prob(1, 2, 1), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn round_trip_reproduces_the_input_under_both_policies() {
        let t = models::ternary_channel_default();
        let input = models::ternary_input();
        let o = output_process(&t, &input).unwrap();
        let d = invert(&t, &input).unwrap();
        for policy in [CompletionPolicy::SelfLoop, CompletionPolicy::Uniform] {
            let inv = complete_and_minimize(&d, policy).unwrap();
            let reproduced =
                remove_transients(&crate::algebra::output_machine(&inv, &o).unwrap()).unwrap();
            for length in 1..=6 {
                let a = word_distribution(&reproduced, length, WORD_PRUNE).unwrap();
                let b = word_distribution(&input, length, WORD_PRUNE).unwrap();
                assert!(a.total_variation(&b).unwrap() < 1e-9, "length {length}");
            }
        }
    }

    #[test]
    fn inverse_memory_measures_match_reference_values() {
        let t = models::ternary_channel_default();
        let input = models::ternary_input();
        let o = output_process(&t, &input).unwrap();
        let inv = invert_channel(&t, &input, CompletionPolicy::SelfLoop).unwrap();
        for mode in [
            crate::quantum::QuantumMode::Standard,
            crate::quantum::QuantumMode::Saturating,
        ] {
            let report = crate::quantum::quantum_complexity(&inv, &o, mode).unwrap();
            assert_abs_diff_eq!(report.c, 0.918295834054490, epsilon = 1e-9);
            assert_abs_diff_eq!(report.q.unwrap(), 0.550047759582757, epsilon = 1e-9);
        }
    }

    #[test]
    fn identity_channel_inverts_to_itself() {
        let id = models::identity_channel(&crate::model::Alphabet::binary());
        let input = models::biased_coin(0.3).unwrap();
        let d = invert(&id, &input).unwrap();
        assert!(d.free_slots().is_empty());
        let inv = complete_and_minimize(&d, CompletionPolicy::SelfLoop).unwrap();
        assert_eq!(inv.n_states(), 1);
        for s in 0..2 {
            assert_abs_diff_eq!(inv.emission_prob(0, s, s), 1.0, epsilon = 1e-12);
        }
    }
}
