//! Constructions on presentations: the joint machine of a driven channel,
//! output marginalization, transient removal, minimization by state
//! equivalence, and exact word distributions.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, RowDVector};

use crate::error::{Error, Result};
use crate::model::{
    Alphabet, MachinePresentation, StationaryDistribution, TransducerPresentation, EQUIVALENCE_TOL,
    SUPPORT_TOL,
};

/// Default prune threshold for word enumeration: branches whose running
/// probability falls below this are dropped (bounded-error, exact for the
/// bundled example models whose word probabilities are far larger).
pub const WORD_PRUNE: f64 = 1e-15;

// ---------------------------------------------------------------------------
// Joint and output machines
// ---------------------------------------------------------------------------

/// Label used for the product symbol of input `x` and output `y`.
pub fn joint_symbol(x: &str, y: &str) -> String {
    format!("{x}|{y}")
}

/// Label used for the product state of transducer state `s` and input state `m`.
pub fn joint_state(s: &str, m: &str) -> String {
    format!("({s},{m})")
}

fn check_input_alphabet(t: &TransducerPresentation, input: &MachinePresentation) -> Result<()> {
    if t.inputs() != input.alphabet() {
        return Err(Error::AlphabetMismatch(format!(
            "channel reads {:?} but the source emits {:?}",
            t.inputs().symbols(),
            input.alphabet().symbols()
        )));
    }
    Ok(())
}

/// Machine of the joint input-output process of channel `t` driven by
/// `input`: per joint symbol `(x, y)`, the matrix `T^(y|x) ⊗ M^(x)` on the
/// product state space (transducer state major, input state minor). The
/// joint alphabet is ordered input-major: index `x·|outputs| + y`, label
/// `"x|y"`.
pub fn joint_machine(
    t: &TransducerPresentation,
    input: &MachinePresentation,
) -> Result<MachinePresentation> {
    check_input_alphabet(t, input)?;
    let nt = t.n_states();
    let nm = input.n_states();
    let mut symbols = Vec::with_capacity(t.inputs().len() * t.outputs().len());
    let mut transitions = Vec::with_capacity(symbols.capacity());
    for x in 0..t.inputs().len() {
        for y in 0..t.outputs().len() {
            symbols.push(joint_symbol(t.inputs().symbol(x), t.outputs().symbol(y)));
            transitions.push(t.matrix(x, y).kronecker(input.matrix(x)));
        }
    }
    let mut states = Vec::with_capacity(nt * nm);
    for s in 0..nt {
        for m in 0..nm {
            states.push(joint_state(&t.states()[s], &input.states()[m]));
        }
    }
    MachinePresentation::new(states, Alphabet::new(symbols)?, transitions)
}

/// Machine of the output process alone: `N^(y) = Σ_x T^(y|x) ⊗ M^(x)` on the
/// product state space. May be non-unifilar and non-minimal.
pub fn output_machine(
    t: &TransducerPresentation,
    input: &MachinePresentation,
) -> Result<MachinePresentation> {
    check_input_alphabet(t, input)?;
    let nt = t.n_states();
    let nm = input.n_states();
    let n = nt * nm;
    let mut transitions = vec![DMatrix::<f64>::zeros(n, n); t.outputs().len()];
    for x in 0..t.inputs().len() {
        for y in 0..t.outputs().len() {
            transitions[y] += t.matrix(x, y).kronecker(input.matrix(x));
        }
    }
    let mut states = Vec::with_capacity(n);
    for s in 0..nt {
        for m in 0..nm {
            states.push(joint_state(&t.states()[s], &input.states()[m]));
        }
    }
    MachinePresentation::new(states, t.outputs().clone(), transitions)
}

/// Stationary distribution over the *transducer's* states when `t` is driven
/// by `input`: the joint machine's stationary occupation marginalized over
/// the input-state coordinate.
pub fn driven_stationary(
    t: &TransducerPresentation,
    input: &MachinePresentation,
) -> Result<StationaryDistribution> {
    let joint = joint_machine(t, input)?;
    let pi_joint = joint.stationary()?;
    let nm = input.n_states();
    let mut pi = vec![0.0; t.n_states()];
    for (idx, &p) in pi_joint.probabilities().iter().enumerate() {
        pi[idx / nm] += p;
    }
    Ok(StationaryDistribution::from_vec(pi))
}

// ---------------------------------------------------------------------------
// Transient removal
// ---------------------------------------------------------------------------

/// Restriction of a machine to its unique recurrent communicating class,
/// together with the retained original state indices (ascending).
pub fn remove_transients_indexed(
    m: &MachinePresentation,
) -> Result<(MachinePresentation, Vec<usize>)> {
    let keep = crate::model::recurrent_class(&m.total())?;
    if keep.len() == m.n_states() {
        return Ok((m.clone(), keep));
    }
    let states = keep.iter().map(|&i| m.states()[i].clone()).collect();
    let transitions = m
        .matrices()
        .iter()
        .map(|t| t.select_rows(keep.iter()).select_columns(keep.iter()))
        .collect();
    Ok((
        MachinePresentation::new(states, m.alphabet().clone(), transitions)?,
        keep,
    ))
}

/// Restriction of a machine to its unique recurrent communicating class.
/// Word statistics at stationarity are unchanged. Errors when more than one
/// recurrent class exists.
pub fn remove_transients(m: &MachinePresentation) -> Result<MachinePresentation> {
    remove_transients_indexed(m).map(|(m, _)| m)
}

// ---------------------------------------------------------------------------
// Minimization by state equivalence (Moore-style partition refinement)
// ---------------------------------------------------------------------------

/// One state's behavior signature under a current partition: per label, the
/// emission probability and (when positive) the successor's block.
fn machine_signature(
    m: &MachinePresentation,
    i: usize,
    block_of: &[usize],
) -> Result<Vec<(f64, Option<usize>)>> {
    let mut sig = Vec::with_capacity(m.alphabet().len());
    for y in 0..m.alphabet().len() {
        let p: f64 = m.matrix(y).row(i).iter().sum();
        if p > SUPPORT_TOL {
            let succ = m.successor(i, y).ok_or_else(|| {
                Error::NotUnifilar(format!(
                    "state {:?} on symbol {:?} has multiple successors",
                    m.states()[i],
                    m.alphabet().symbol(y)
                ))
            })?;
            sig.push((p, Some(block_of[succ])));
        } else {
            sig.push((0.0, None));
        }
    }
    Ok(sig)
}

fn signatures_equal(a: &[(f64, Option<usize>)], b: &[(f64, Option<usize>)]) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(&(pa, ba), &(pb, bb))| (pa - pb).abs() <= EQUIVALENCE_TOL && ba == bb)
}

/// Runs partition refinement given a per-state signature function. Returns
/// the stable `state → block` assignment with blocks numbered in order of
/// first appearance.
fn refine<F>(n: usize, mut signature: F) -> Result<Vec<usize>>
where
    F: FnMut(usize, &[usize]) -> Result<Vec<(f64, Option<usize>)>>,
{
    let mut block_of = vec![0usize; n];
    loop {
        // Group states by (current block, signature), preserving state order.
        let sigs: Vec<_> = (0..n)
            .map(|i| signature(i, &block_of))
            .collect::<Result<_>>()?;
        let mut new_block_of = vec![usize::MAX; n];
        let mut reps: Vec<(usize, usize)> = Vec::new(); // (old block, representative state)
        for i in 0..n {
            let found = reps.iter().position(|&(old, rep)| {
                old == block_of[i] && signatures_equal(&sigs[rep], &sigs[i])
            });
            let b = match found {
                Some(b) => b,
                None => {
                    reps.push((block_of[i], i));
                    reps.len() - 1
                }
            };
            new_block_of[i] = b;
        }
        if new_block_of == block_of {
            return Ok(block_of);
        }
        block_of = new_block_of;
    }
}

fn merged_labels(states: &[String], block_of: &[usize], n_blocks: usize) -> Vec<String> {
    let mut members: Vec<Vec<&str>> = vec![Vec::new(); n_blocks];
    for (i, &b) in block_of.iter().enumerate() {
        members[b].push(&states[i]);
    }
    members
        .into_iter()
        .map(|m| {
            if m.len() == 1 {
                m[0].to_string()
            } else {
                m.join("+")
            }
        })
        .collect()
}

/// Merges equivalent states of a unifilar machine (behavioral partition
/// refinement to a fixed point, tolerance `1e-9`) and returns the quotient
/// along with the `state → block` assignment.
pub fn merge_equivalent_states_indexed(
    m: &MachinePresentation,
) -> Result<(MachinePresentation, Vec<usize>)> {
    let n = m.n_states();
    let block_of = refine(n, |i, blocks| machine_signature(m, i, blocks))?;
    let n_blocks = block_of.iter().copied().max().unwrap_or(0) + 1;
    if n_blocks == n {
        return Ok((m.clone(), block_of));
    }
    // Representative = first member of each block.
    let mut rep = vec![usize::MAX; n_blocks];
    for i in 0..n {
        if rep[block_of[i]] == usize::MAX {
            rep[block_of[i]] = i;
        }
    }
    let mut transitions = vec![DMatrix::<f64>::zeros(n_blocks, n_blocks); m.alphabet().len()];
    for y in 0..m.alphabet().len() {
        for (b, &r) in rep.iter().enumerate() {
            for j in 0..n {
                transitions[y][(b, block_of[j])] += m.matrix(y)[(r, j)];
            }
        }
    }
    let states = merged_labels(m.states(), &block_of, n_blocks);
    Ok((
        MachinePresentation::new(states, m.alphabet().clone(), transitions)?,
        block_of,
    ))
}

/// Merges equivalent states of a unifilar machine; word distributions are
/// preserved and the state count never increases.
pub fn merge_equivalent_states(m: &MachinePresentation) -> Result<MachinePresentation> {
    merge_equivalent_states_indexed(m).map(|(m, _)| m)
}

/// Merges equivalent states of a unifilar transducer (signatures range over
/// every (input, output) pair).
pub fn merge_equivalent_transducer(t: &TransducerPresentation) -> Result<TransducerPresentation> {
    let n = t.n_states();
    let n_in = t.inputs().len();
    let n_out = t.outputs().len();
    let succ = t.successor_map()?;
    let block_of = refine(n, |i, blocks| {
        let mut sig = Vec::with_capacity(n_in * n_out);
        for x in 0..n_in {
            for y in 0..n_out {
                let p = t.emission_prob(i, x, y);
                if p > SUPPORT_TOL {
                    let j = succ.get(i, x, y).expect("unifilar support");
                    sig.push((p, Some(blocks[j])));
                } else {
                    sig.push((0.0, None));
                }
            }
        }
        Ok(sig)
    })?;
    let n_blocks = block_of.iter().copied().max().unwrap_or(0) + 1;
    if n_blocks == n {
        return Ok(t.clone());
    }
    let mut rep = vec![usize::MAX; n_blocks];
    for i in 0..n {
        if rep[block_of[i]] == usize::MAX {
            rep[block_of[i]] = i;
        }
    }
    let mut transitions = vec![vec![DMatrix::<f64>::zeros(n_blocks, n_blocks); n_out]; n_in];
    for x in 0..n_in {
        for y in 0..n_out {
            for (b, &r) in rep.iter().enumerate() {
                for j in 0..n {
                    transitions[x][y][(b, block_of[j])] += t.matrix(x, y)[(r, j)];
                }
            }
        }
    }
    let states = merged_labels(t.states(), &block_of, n_blocks);
    TransducerPresentation::new(states, t.inputs().clone(), t.outputs().clone(), transitions)
}

// ---------------------------------------------------------------------------
// Word distributions
// ---------------------------------------------------------------------------

/// Exact distribution over length-`L` words of a stationary process, with
/// small-probability branches pruned.
#[derive(Debug, Clone)]
pub struct WordDistribution {
    length: usize,
    alphabet: Alphabet,
    entries: BTreeMap<Vec<u16>, f64>,
}

impl WordDistribution {
    pub(crate) fn from_entries(
        length: usize,
        alphabet: Alphabet,
        entries: BTreeMap<Vec<u16>, f64>,
    ) -> Self {
        Self {
            length,
            alphabet,
            entries,
        }
    }

    /// Word length `L`.
    pub fn length(&self) -> usize {
        self.length
    }

    /// The symbol alphabet words are over.
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Probability of a word (zero when absent/pruned).
    pub fn probability(&self, word: &[u16]) -> f64 {
        self.entries.get(word).copied().unwrap_or(0.0)
    }

    /// Iterates `(word, probability)` in lexicographic word order.
    pub fn iter(&self) -> impl Iterator<Item = (&[u16], f64)> {
        self.entries.iter().map(|(w, &p)| (w.as_slice(), p))
    }

    /// Number of retained words.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// True when no word carries mass (only for degenerate prunes).
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total retained probability mass (1 minus pruning loss).
    pub fn total_mass(&self) -> f64 {
        self.entries.values().sum()
    }

    /// Renders a word using its symbol labels: concatenated when every
    /// label is a single character, comma-joined otherwise.
    pub fn format_word(&self, word: &[u16]) -> String {
        let labels: Vec<&str> = word
            .iter()
            .map(|&s| self.alphabet.symbol(s as usize))
            .collect();
        if labels.iter().all(|l| l.chars().count() == 1) {
            labels.concat()
        } else {
            labels.join(",")
        }
    }

    /// Pushes every word through a symbol map (e.g. a joint symbol onto its
    /// output coordinate), merging probabilities of colliding images.
    pub fn map_symbols<F>(&self, target: Alphabet, f: F) -> Result<Self>
    where
        F: Fn(u16) -> u16,
    {
        let mut entries: BTreeMap<Vec<u16>, f64> = BTreeMap::new();
        for (word, p) in self.iter() {
            let image: Vec<u16> = word.iter().map(|&s| f(s)).collect();
            for &s in &image {
                if (s as usize) >= target.len() {
                    return Err(Error::ShapeMismatch(format!(
                        "mapped symbol index {s} outside target alphabet"
                    )));
                }
            }
            *entries.entry(image).or_insert(0.0) += p;
        }
        Ok(Self::from_entries(self.length, target, entries))
    }

    /// Total variation distance `½ Σ_w |p(w) − q(w)|` between two
    /// distributions over the same length and alphabet.
    pub fn total_variation(&self, other: &Self) -> Result<f64> {
        if self.length != other.length {
            return Err(Error::ShapeMismatch(format!(
                "word lengths differ: {} vs {}",
                self.length, other.length
            )));
        }
        if self.alphabet != other.alphabet {
            return Err(Error::ShapeMismatch("alphabets differ".into()));
        }
        let mut tv = 0.0;
        for (w, p) in self.iter() {
            tv += (p - other.probability(w)).abs();
        }
        for (w, q) in other.iter() {
            if !self.entries.contains_key(w) {
                tv += q;
            }
        }
        Ok(0.5 * tv)
    }
}

/// Exact word distribution of the stationary process presented by `m`:
/// `Pr(w) = π T^(w₁) ··· T^(w_L) 𝟙`, dropping branches whose running
/// probability falls below `prune`.
pub fn word_distribution(
    m: &MachinePresentation,
    length: usize,
    prune: f64,
) -> Result<WordDistribution> {
    let pi = m.stationary()?;
    let start = RowDVector::from_row_slice(pi.probabilities());
    let mut entries = BTreeMap::new();
    let n_sym = m.alphabet().len();
    // Depth-first enumeration; the stack carries (word, forward vector).
    let mut stack: Vec<(Vec<u16>, RowDVector<f64>)> = vec![(Vec::new(), start)];
    while let Some((word, vec)) = stack.pop() {
        if word.len() == length {
            entries.insert(word, vec.iter().sum());
            continue;
        }
        for y in 0..n_sym {
            let next = &vec * m.matrix(y);
            let mass: f64 = next.iter().sum();
            if mass >= prune {
                let mut w = word.clone();
                w.push(y as u16);
                stack.push((w, next));
            }
        }
    }
    Ok(WordDistribution::from_entries(
        length,
        m.alphabet().clone(),
        entries,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use approx::assert_abs_diff_eq;

    #[test]
    fn period2_words() {
        let m = models::period2();
        let d = word_distribution(&m, 2, WORD_PRUNE).unwrap();
        assert_eq!(d.len(), 2);
        assert_abs_diff_eq!(d.probability(&[0, 1]), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(d.probability(&[1, 0]), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn iid_words_follow_product_law() {
        let coin = models::biased_coin(0.2).unwrap();
        let d = word_distribution(&coin, 2, WORD_PRUNE).unwrap();
        assert_abs_diff_eq!(d.probability(&[0, 0]), 0.04, epsilon = 1e-15);
        assert_abs_diff_eq!(d.probability(&[0, 1]), 0.16, epsilon = 1e-15);
        assert_abs_diff_eq!(d.probability(&[1, 0]), 0.16, epsilon = 1e-15);
        assert_abs_diff_eq!(d.probability(&[1, 1]), 0.64, epsilon = 1e-15);
    }

    #[test]
    fn joint_machine_of_driven_detector() {
        // Detector ⊗ coin: the marginal over detector states is (b, 1−b)
        // with b = 1/(1 + (1−r)(1−α)); cross-checked by power iteration on
        // the product chain.
        let t = models::bob(0.5).unwrap();
        let input = models::biased_coin(0.2).unwrap();
        let joint = joint_machine(&t, &input).unwrap();
        assert_eq!(joint.n_states(), 2);
        assert_eq!(joint.alphabet().len(), 4);
        assert!(joint.is_unifilar());
        let pi = driven_stationary(&t, &input).unwrap();
        let b = 1.0 / (1.0 + 0.8 * 0.5);
        assert_abs_diff_eq!(pi.probabilities()[0], b, epsilon = 1e-12);
        assert_abs_diff_eq!(pi.probabilities()[1], 1.0 - b, epsilon = 1e-12);
    }

    #[test]
    fn trivial_input_reduces_to_the_machine() {
        let m = models::period2();
        let t = TransducerPresentation::from_machine(&m);
        let input = TransducerPresentation::trivial_input();
        let joint = joint_machine(&t, &input).unwrap();
        assert_eq!(joint.n_states(), m.n_states());
        for y in 0..m.alphabet().len() {
            assert_eq!(joint.matrix(y), m.matrix(y));
        }
    }

    #[test]
    fn identity_channel_output_is_the_input() {
        let id = models::identity_channel(&Alphabet::binary());
        let input = models::biased_coin(0.3).unwrap();
        let out = output_machine(&id, &input).unwrap();
        let out = remove_transients(&out).unwrap();
        let d_out = word_distribution(&out, 3, WORD_PRUNE).unwrap();
        let d_in = word_distribution(&input, 3, WORD_PRUNE).unwrap();
        assert!(d_out.total_variation(&d_in).unwrap() < 1e-12);
    }

    #[test]
    fn output_words_equal_marginalized_joint_words() {
        let t = models::bob(0.37).unwrap();
        let input = models::biased_coin(0.41).unwrap();
        let joint = joint_machine(&t, &input).unwrap();
        let out = output_machine(&t, &input).unwrap();
        let n_out = t.outputs().len() as u16;
        for length in 1..=4 {
            let dj = word_distribution(&joint, length, WORD_PRUNE).unwrap();
            let marg = dj.map_symbols(t.outputs().clone(), |s| s % n_out).unwrap();
            let d_out = word_distribution(&out, length, WORD_PRUNE).unwrap();
            assert!(marg.total_variation(&d_out).unwrap() < 1e-9);
        }
    }

    #[test]
    fn remove_transients_is_idempotent_and_drops_chains() {
        // a → b → c, c absorbing.
        let t0 = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0]);
        let m = MachinePresentation::new(
            vec!["a".into(), "b".into(), "c".into()],
            Alphabet::new(["0"]).unwrap(),
            vec![t0],
        )
        .unwrap();
        let (r1, keep) = remove_transients_indexed(&m).unwrap();
        assert_eq!(keep, vec![2]);
        assert_eq!(r1.n_states(), 1);
        let r2 = remove_transients(&r1).unwrap();
        assert_eq!(r2, r1);
    }

    #[test]
    fn merging_identical_states_collapses_them() {
        // Two states with identical rows and successors merge to one.
        let t0 = DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.5, 0.0]);
        let t1 = DMatrix::from_row_slice(2, 2, &[0.0, 0.5, 0.0, 0.5]);
        let m = MachinePresentation::new(
            vec!["a".into(), "b".into()],
            Alphabet::binary(),
            vec![t0, t1],
        )
        .unwrap();
        let (merged, blocks) = merge_equivalent_states_indexed(&m).unwrap();
        assert_eq!(merged.n_states(), 1);
        assert_eq!(blocks, vec![0, 0]);
        for length in 1..=5 {
            let a = word_distribution(&m, length, WORD_PRUNE).unwrap();
            let b = word_distribution(&merged, length, WORD_PRUNE).unwrap();
            assert!(a.total_variation(&b).unwrap() < 1e-9);
        }
    }

    #[test]
    fn minimal_machines_are_fixed_points_of_merging() {
        let m = models::period2();
        let merged = merge_equivalent_states(&m).unwrap();
        assert_eq!(merged, m);
        let t = models::bob(0.3).unwrap();
        let merged_t = merge_equivalent_transducer(&t).unwrap();
        assert_eq!(merged_t, t);
    }

    #[test]
    fn word_mass_is_complete_without_pruning_losses() {
        let m = models::period2();
        for length in 0..=6 {
            let d = word_distribution(&m, length, WORD_PRUNE).unwrap();
            assert_abs_diff_eq!(d.total_mass(), 1.0, epsilon = 1e-12);
        }
    }
}
