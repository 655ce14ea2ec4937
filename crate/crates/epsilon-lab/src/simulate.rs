//! Seeded trajectory sampling from machines and driven transducers,
//! empirical word statistics, and faithfulness checks against the analytic
//! distributions.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::algebra::{joint_machine, WordDistribution};
use crate::error::{Error, Result};
use crate::model::{Alphabet, MachinePresentation, TransducerPresentation};

/// Identity of the fixed random generator, recorded in every trajectory so
/// seeds stay portable across builds.
pub const GENERATOR: &str = "chacha20";

/// A sampled realization: the seed that produced it, the emitted symbols,
/// and the visited states (one more state than symbols — the start state
/// plus one state per step). Driven transducers are sampled through their
/// joint presentation, so their symbols are input/output pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    seed: u64,
    alphabet: Alphabet,
    state_labels: Vec<String>,
    symbols: Vec<u16>,
    visited: Vec<u16>,
}

impl Trajectory {
    /// Seed the trajectory was generated from.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Identity of the generator that consumed the seed.
    pub fn generator(&self) -> &'static str {
        GENERATOR
    }

    /// Alphabet the symbols are indices into.
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Number of emitted symbols.
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    /// True when no symbols were emitted.
    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Emitted symbol indices.
    pub fn symbols(&self) -> &[u16] {
        &self.symbols
    }

    /// Emitted symbols as labels.
    pub fn symbol_labels(&self) -> Vec<&str> {
        self.symbols
            .iter()
            .map(|&s| self.alphabet.symbol(s as usize))
            .collect()
    }

    /// Visited state indices (length `len() + 1`).
    pub fn visited(&self) -> &[u16] {
        &self.visited
    }

    /// Visited states as labels.
    pub fn visited_labels(&self) -> Vec<&str> {
        self.visited
            .iter()
            .map(|&i| self.state_labels[i as usize].as_str())
            .collect()
    }

    /// Labels of the state set the visited indices refer to.
    pub fn state_labels(&self) -> &[String] {
        &self.state_labels
    }
}

/// One state's outgoing branches, flattened in declared (symbol-major)
/// order: (probability, symbol, successor).
type Branches = Vec<(f64, u16, u16)>;

fn branch_table(m: &MachinePresentation) -> Vec<Branches> {
    let n = m.n_states();
    let k = m.alphabet().len();
    (0..n)
        .map(|i| {
            let mut row = Branches::new();
            for y in 0..k {
                let t = m.matrix(y);
                for j in 0..n {
                    let p = t[(i, j)];
                    if p > 0.0 {
                        row.push((p, y as u16, j as u16));
                    }
                }
            }
            row
        })
        .collect()
}

/// Draws one index from a cumulative walk over `weights` (declared order);
/// floating-point shortfall falls through to the last positive entry.
fn draw(rng: &mut ChaCha20Rng, weights: &[f64]) -> usize {
    let mut u: f64 = rng.random();
    let mut last = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        last = i;
        if u < w {
            return i;
        }
        u -= w;
    }
    last
}

/// Samples a length-`length` realization of `m`, starting from a state
/// drawn from the stationary distribution. Deterministic for a fixed seed.
pub fn sample_path(m: &MachinePresentation, length: usize, seed: u64) -> Result<Trajectory> {
    m.validate().require()?;
    let pi = m.stationary()?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut state = draw(&mut rng, pi.probabilities()) as u16;

    let branches = branch_table(m);
    let mut symbols = Vec::with_capacity(length);
    let mut visited = Vec::with_capacity(length + 1);
    visited.push(state);
    let mut weights = Vec::new();
    for _ in 0..length {
        let row = &branches[state as usize];
        weights.clear();
        weights.extend(row.iter().map(|&(p, _, _)| p));
        let (_, y, j) = row[draw(&mut rng, &weights)];
        symbols.push(y);
        state = j;
        visited.push(state);
    }
    Ok(Trajectory {
        seed,
        alphabet: m.alphabet().clone(),
        state_labels: m.states().to_vec(),
        symbols,
        visited,
    })
}

/// Samples a driven transducer by sampling its joint presentation: the
/// emitted symbols are input/output pairs and the visited states are joint
/// (transducer, input) states.
pub fn sample_path_driven(
    t: &TransducerPresentation,
    input: &MachinePresentation,
    length: usize,
    seed: u64,
) -> Result<Trajectory> {
    let joint = joint_machine(t, input)?;
    sample_path(&joint, length, seed)
}

/// Sliding-window frequencies of the length-`length` words in `traj`,
/// normalized over the `len − L + 1` windows.
pub fn empirical_word_distribution(traj: &Trajectory, length: usize) -> Result<WordDistribution> {
    if length == 0 {
        return Err(Error::Validation("word length must be at least 1".into()));
    }
    if traj.len() < length {
        return Err(Error::TooShort(format!(
            "trajectory of {} symbols is shorter than the window length {length}",
            traj.len()
        )));
    }
    let windows = traj.len() - length + 1;
    let weight = 1.0 / windows as f64;
    let mut entries: BTreeMap<Vec<u16>, f64> = BTreeMap::new();
    for w in traj.symbols().windows(length) {
        *entries.entry(w.to_vec()).or_insert(0.0) += weight;
    }
    Ok(WordDistribution::from_entries(
        length,
        traj.alphabet().clone(),
        entries,
    ))
}

/// Total variation distance ½ Σ_w |p(w) − q(w)| between two word
/// distributions over the same alphabet and length.
pub fn total_variation(p: &WordDistribution, q: &WordDistribution) -> Result<f64> {
    p.total_variation(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::word_distribution;
    use crate::models;
    use approx::assert_abs_diff_eq;

    #[test]
    fn period_two_paths_alternate_after_the_start() {
        let m = models::period2();
        let traj = sample_path(&m, 6, 7).unwrap();
        assert_eq!(traj.len(), 6);
        assert_eq!(traj.visited().len(), 7);
        for w in traj.symbols().windows(2) {
            assert_ne!(w[0], w[1]);
        }
        // Each step's (state, symbol, successor) has positive probability.
        for (step, w) in traj.visited().windows(2).enumerate() {
            let y = traj.symbols()[step] as usize;
            assert!(m.matrix(y)[(w[0] as usize, w[1] as usize)] > 0.0);
        }
    }

    #[test]
    fn degenerate_coin_emits_a_constant_path() {
        let m = models::biased_coin(1.0).unwrap();
        let traj = sample_path(&m, 5, 99).unwrap();
        assert_eq!(traj.symbols(), &[0, 0, 0, 0, 0]);
        assert_eq!(traj.symbol_labels(), vec!["0"; 5]);
    }

    #[test]
    fn identical_seeds_reproduce_identical_trajectories() {
        let m = models::ternary_input();
        let a = sample_path(&m, 2000, 12345).unwrap();
        let b = sample_path(&m, 2000, 12345).unwrap();
        assert_eq!(a, b);
        let c = sample_path(&m, 2000, 12346).unwrap();
        assert_ne!(a.symbols(), c.symbols());
    }

    #[test]
    fn sliding_windows_weight_every_occurrence() {
        let m = models::period2();
        // Build a 0101 trajectory by seed search over the two start states.
        let traj = (0..8)
            .map(|seed| sample_path(&m, 4, seed).unwrap())
            .find(|t| t.symbols() == [0, 1, 0, 1])
            .expect("both phases occur among eight seeds");
        let dist = empirical_word_distribution(&traj, 2).unwrap();
        assert_abs_diff_eq!(dist.probability(&[0, 1]), 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(dist.probability(&[1, 0]), 1.0 / 3.0, epsilon = 1e-15);
        // A window longer than the trajectory is an error.
        assert!(matches!(
            empirical_word_distribution(&traj, 5),
            Err(Error::TooShort(_))
        ));
    }

    #[test]
    fn constant_trajectories_have_point_mass_words() {
        let m = models::biased_coin(1.0).unwrap();
        let traj = sample_path(&m, 64, 1).unwrap();
        for len in [1, 2, 3] {
            let dist = empirical_word_distribution(&traj, len).unwrap();
            assert_abs_diff_eq!(dist.probability(&vec![0; len]), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn empirical_words_approach_the_analytic_distribution() {
        let m = models::ternary_input();
        let traj = sample_path(&m, 200_000, 2024).unwrap();
        let empirical = empirical_word_distribution(&traj, 3).unwrap();
        let analytic = word_distribution(&m, 3, 0.0).unwrap();
        let tv = total_variation(&empirical, &analytic).unwrap();
        assert!(tv < 0.02, "TV {tv} too large");
    }

    #[test]
    fn driven_sampling_visits_joint_states_with_stationary_frequencies() {
        let t = models::bob(0.5).unwrap();
        let input = models::biased_coin(0.2).unwrap();
        let steps = 100_000;
        let traj = sample_path_driven(&t, &input, steps, 3).unwrap();
        let joint = joint_machine(&t, &input).unwrap();
        let pi = joint.stationary().unwrap();
        let mut counts = vec![0usize; joint.n_states()];
        for &s in &traj.visited()[1..] {
            counts[s as usize] += 1;
        }
        for (i, &p) in pi.probabilities().iter().enumerate() {
            let freq = counts[i] as f64 / steps as f64;
            // Loose 4σ binomial bound; the acceptance checks run longer.
            let sigma = (p * (1.0 - p) / steps as f64).sqrt();
            assert!(
                (freq - p).abs() <= 4.0 * sigma + 1e-9,
                "state {i}: freq {freq} vs pi {p}"
            );
        }
        // Joint symbols are input/output pairs.
        assert_eq!(traj.alphabet().len(), 4);
        assert_eq!(traj.alphabet().symbol(1), "0|1");
    }

    #[test]
    fn zero_length_paths_are_empty_and_reject_statistics() {
        let m = models::biased_coin(0.5).unwrap();
        let traj = sample_path(&m, 0, 11).unwrap();
        assert!(traj.is_empty());
        assert_eq!(traj.visited().len(), 1);
        assert!(empirical_word_distribution(&traj, 1).is_err());
    }

    #[test]
    fn total_variation_matches_direct_arithmetic() {
        let p = models::biased_coin(0.6).unwrap();
        let q = models::biased_coin(0.5).unwrap();
        let pd = word_distribution(&p, 1, 0.0).unwrap();
        let qd = word_distribution(&q, 1, 0.0).unwrap();
        assert_abs_diff_eq!(total_variation(&pd, &qd).unwrap(), 0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(total_variation(&pd, &pd).unwrap(), 0.0, epsilon = 1e-15);
        // Disjoint point masses are at distance one.
        let one = models::biased_coin(1.0).unwrap();
        let zero = models::biased_coin(0.0).unwrap();
        let od = word_distribution(&one, 2, 0.0).unwrap();
        let zd = word_distribution(&zero, 2, 0.0).unwrap();
        assert_abs_diff_eq!(total_variation(&od, &zd).unwrap(), 1.0, epsilon = 1e-15);
    }
}
