//! Core presentations of stochastic and input-output processes: validation,
//! stationary distributions, and Shannon-entropy primitives.
//!
//! A `MachinePresentation` is an edge-emitting hidden Markov model: one
//! substochastic matrix `T^(y)` per output symbol, whose sum over symbols is
//! row-stochastic. A `TransducerPresentation` additionally conditions on an
//! input symbol: one matrix `T^(y|x)` per (input, output) pair, with
//! `Σ_y Σ_j T^(y|x)_ij = 1` for every state `i` and every input `x`.
//!
//! All entropies are in bits (log base 2).

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::error::{Error, Result};

/// Probability-equality tolerance for validation checks.
pub const VALIDATION_TOL: f64 = 1e-12;
/// Tolerance for state-equivalence tests (looser than validation because
/// equivalence testing compounds arithmetic over many entries).
pub const EQUIVALENCE_TOL: f64 = 1e-9;
/// Entries at or below this count as structural zeros in support graphs.
pub const SUPPORT_TOL: f64 = 1e-12;
/// Residual bound `‖πT − π‖∞` enforced on stationary distributions.
pub const STATIONARY_RESIDUAL_TOL: f64 = 1e-10;
/// State-count cutoff for the dense stationary solve; larger machines use
/// damped power iteration so results stay bit-reproducible across runs.
pub const DENSE_SOLVE_MAX_STATES: usize = 64;
/// Convergence tolerance of the damped power iteration.
pub const POWER_ITERATION_TOL: f64 = 1e-13;

const LN_2: f64 = std::f64::consts::LN_2;

// ---------------------------------------------------------------------------
// Entropy primitives
// ---------------------------------------------------------------------------

/// Shannon entropy of a probability vector, in bits, with `0·log 0 = 0`.
///
/// Errors with [`Error::NotADistribution`] unless entries are nonnegative
/// (within `-1e-12` slack) and sum to one within `1e-12`.
pub fn entropy(p: &[f64]) -> Result<f64> {
    let mut sum = 0.0;
    for (i, &v) in p.iter().enumerate() {
        if !v.is_finite() || v < -VALIDATION_TOL {
            return Err(Error::NotADistribution(format!(
                "entry {i} is {v}, expected a probability"
            )));
        }
        sum += v;
    }
    if (sum - 1.0).abs() > VALIDATION_TOL * p.len().max(1) as f64 {
        return Err(Error::NotADistribution(format!(
            "entries sum to {sum}, expected 1"
        )));
    }
    Ok(entropy_unchecked(p))
}

/// Shannon entropy in bits without distribution validation; negative or
/// zero entries contribute nothing.
pub(crate) fn entropy_unchecked(p: &[f64]) -> f64 {
    -p.iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| v * v.ln())
        .sum::<f64>()
        / LN_2
}

/// Binary entropy `h(q) = −q log₂ q − (1−q) log₂ (1−q)`, with `h(0)=h(1)=0`.
pub fn binary_entropy(q: f64) -> f64 {
    let mut h = 0.0;
    if q > 0.0 {
        h -= q * q.ln();
    }
    if q < 1.0 {
        h -= (1.0 - q) * (1.0 - q).ln();
    }
    h / LN_2
}

// ---------------------------------------------------------------------------
// Alphabet
// ---------------------------------------------------------------------------

/// An ordered, duplicate-free list of symbol labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    /// Builds an alphabet from symbol labels; labels must be distinct and
    /// the list non-empty.
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::Validation("alphabet must be non-empty".into()));
        }
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].contains(s) {
                return Err(Error::Validation(format!("duplicate symbol label {s:?}")));
            }
        }
        Ok(Self { symbols })
    }

    /// The two-symbol alphabet `{"0", "1"}`.
    pub fn binary() -> Self {
        Self::new(["0", "1"]).expect("static alphabet")
    }

    /// Number of symbols.
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    /// True when the alphabet has no symbols (never, by construction).
    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Index of a symbol label, if present.
    pub fn index(&self, symbol: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == symbol)
    }

    /// Label of the symbol at `i`.
    pub fn symbol(&self, i: usize) -> &str {
        &self.symbols[i]
    }

    /// All labels in declared order.
    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }
}

// ---------------------------------------------------------------------------
// Validation report
// ---------------------------------------------------------------------------

/// Outcome of structural validation; failures are reported, not raised.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    /// Every row (per input, for transducers) sums to one within `1e-12`.
    pub stochastic: bool,
    /// Each (state, input, output) has at most one positive successor.
    pub unifilar: bool,
    /// The support graph has exactly one recurrent communicating class.
    pub ergodic: bool,
    /// Human-readable diagnostics for each failed check.
    pub messages: Vec<String>,
}

impl ValidationReport {
    /// True when the presentation is usable by every operation.
    pub fn is_valid(&self) -> bool {
        self.stochastic && self.ergodic
    }

    /// Converts the report into an error carrying its diagnostics.
    pub fn require(&self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::Validation(self.messages.join("; ")))
        }
    }
}

// ---------------------------------------------------------------------------
// Stationary distribution
// ---------------------------------------------------------------------------

/// Long-run occupation probabilities over states.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryDistribution {
    probabilities: Vec<f64>,
}

impl StationaryDistribution {
    pub(crate) fn from_vec(probabilities: Vec<f64>) -> Self {
        Self { probabilities }
    }

    /// The probabilities in state order.
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// Number of states.
    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    /// True when there are no states (never, by construction).
    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    /// Shannon entropy of the distribution, in bits.
    pub fn entropy(&self) -> f64 {
        entropy_unchecked(&self.probabilities)
    }
}

/// Statistical complexity: entropy of the stationary distribution, in bits.
pub fn statistical_complexity(pi: &StationaryDistribution) -> f64 {
    pi.entropy()
}

// ---------------------------------------------------------------------------
// Shared helpers: recurrent classes and left-eigenvector solves
// ---------------------------------------------------------------------------

/// States of the unique recurrent communicating class of a row-stochastic
/// total matrix, in ascending index order. Errors when more than one
/// recurrent class exists.
pub(crate) fn recurrent_class(total: &DMatrix<f64>) -> Result<Vec<usize>> {
    let n = total.nrows();
    let mut graph = DiGraph::<(), ()>::new();
    let nodes: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
    for i in 0..n {
        for j in 0..n {
            if total[(i, j)] > SUPPORT_TOL {
                graph.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    let sccs = tarjan_scc(&graph);
    let mut component = vec![0usize; n];
    for (c, scc) in sccs.iter().enumerate() {
        for node in scc {
            component[node.index()] = c;
        }
    }
    let mut recurrent: Vec<Vec<usize>> = Vec::new();
    for scc in &sccs {
        let members: Vec<usize> = scc.iter().map(|node| node.index()).collect();
        let closed = members
            .iter()
            .all(|&i| (0..n).all(|j| total[(i, j)] <= SUPPORT_TOL || component[j] == component[i]));
        if closed {
            recurrent.push(members);
        }
    }
    match recurrent.len() {
        1 => {
            let mut class = recurrent.pop().expect("one class");
            class.sort_unstable();
            Ok(class)
        }
        k => Err(Error::MultipleRecurrentClasses(format!(
            "support graph has {k} recurrent classes, expected exactly 1"
        ))),
    }
}

/// Left stationary vector of an irreducible row-stochastic matrix.
fn stationary_of_irreducible(a: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = a.nrows();
    let mut pi = if n <= DENSE_SOLVE_MAX_STATES {
        // Solve π(A − I) = 0 with the normalization Σπ = 1 replacing the
        // last equation: rows of (Aᵀ − I) are the equations in πᵀ.
        let mut m = a.transpose() - DMatrix::<f64>::identity(n, n);
        for j in 0..n {
            m[(n - 1, j)] = 1.0;
        }
        let mut rhs = DVector::<f64>::zeros(n);
        rhs[n - 1] = 1.0;
        let solved = m
            .full_piv_lu()
            .solve(&rhs)
            .ok_or_else(|| Error::Validation("singular stationary system".into()))?;
        solved.iter().copied().collect::<Vec<f64>>()
    } else {
        // Damped power iteration: v ← (vA + v)/2 preserves the stationary
        // vector and converges for periodic chains as well.
        let mut v = DVector::<f64>::from_element(n, 1.0 / n as f64);
        let mut converged = false;
        for _ in 0..2_000_000usize {
            let mut next = (a.transpose() * &v + &v) * 0.5;
            let norm: f64 = next.iter().sum();
            next /= norm;
            let delta = (&next - &v).amax();
            v = next;
            if delta < POWER_ITERATION_TOL {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NonConvergence {
                value: f64::NAN,
                terminal_l: 2_000_000,
                residual: f64::NAN,
            });
        }
        v.iter().copied().collect()
    };
    let mut sum = 0.0;
    for p in pi.iter_mut() {
        if *p < 0.0 {
            if *p < -1e-9 {
                return Err(Error::Validation(format!(
                    "stationary solve produced negative probability {p}"
                )));
            }
            *p = 0.0;
        }
        sum += *p;
    }
    for p in pi.iter_mut() {
        *p /= sum;
    }
    Ok(pi)
}

/// Stationary distribution of a row-stochastic total matrix, with zeros on
/// transient states. Errors when rows are not stochastic or more than one
/// recurrent class exists; post-checks `‖πT − π‖∞ < 1e-10`.
pub(crate) fn stationary_of_total(total: &DMatrix<f64>) -> Result<StationaryDistribution> {
    let n = total.nrows();
    for i in 0..n {
        let row_sum: f64 = (0..n).map(|j| total[(i, j)]).sum();
        if (row_sum - 1.0).abs() > VALIDATION_TOL * n.max(1) as f64 {
            return Err(Error::NotStochastic(format!(
                "row {i} sums to {row_sum}, expected 1"
            )));
        }
    }
    let class = recurrent_class(total)?;
    let m = class.len();
    let mut restricted = DMatrix::<f64>::zeros(m, m);
    for (a, &i) in class.iter().enumerate() {
        for (b, &j) in class.iter().enumerate() {
            restricted[(a, b)] = total[(i, j)];
        }
    }
    let pi_restricted = stationary_of_irreducible(&restricted)?;
    let mut pi = vec![0.0; n];
    for (a, &i) in class.iter().enumerate() {
        pi[i] = pi_restricted[a];
    }
    // Post-check the defining property on the full matrix.
    let mut residual: f64 = 0.0;
    for j in 0..n {
        let image: f64 = (0..n).map(|i| pi[i] * total[(i, j)]).sum();
        residual = residual.max((image - pi[j]).abs());
    }
    if residual > STATIONARY_RESIDUAL_TOL {
        return Err(Error::NonConvergence {
            value: f64::NAN,
            terminal_l: 0,
            residual,
        });
    }
    Ok(StationaryDistribution::from_vec(pi))
}

fn check_states(states: &[String]) -> Result<()> {
    if states.is_empty() {
        return Err(Error::Validation("state list must be non-empty".into()));
    }
    for (i, s) in states.iter().enumerate() {
        if states[..i].contains(s) {
            return Err(Error::Validation(format!("duplicate state label {s:?}")));
        }
    }
    Ok(())
}

fn check_matrix_entries(m: &DMatrix<f64>, what: &str) -> Result<()> {
    for &v in m.iter() {
        if !v.is_finite() || v < -1e-15 {
            return Err(Error::Validation(format!(
                "{what} has entry {v}, expected a finite nonnegative probability"
            )));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// MachinePresentation
// ---------------------------------------------------------------------------

/// Edge-emitting hidden Markov presentation of a stochastic process: one
/// `N×N` matrix per output symbol; `T^(y)_ij` is the probability of emitting
/// `y` and moving from state `i` to state `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct MachinePresentation {
    states: Vec<String>,
    alphabet: Alphabet,
    transitions: Vec<DMatrix<f64>>,
}

impl MachinePresentation {
    /// Builds a presentation after shape checks. Row-stochasticity is *not*
    /// enforced here (so invalid rows can be diagnosed via [`Self::validate`]);
    /// operations that need stochasticity check it and error otherwise.
    pub fn new(
        states: Vec<String>,
        alphabet: Alphabet,
        transitions: Vec<DMatrix<f64>>,
    ) -> Result<Self> {
        check_states(&states)?;
        if transitions.len() != alphabet.len() {
            return Err(Error::Validation(format!(
                "expected {} transition matrices (one per symbol), got {}",
                alphabet.len(),
                transitions.len()
            )));
        }
        let n = states.len();
        for (y, m) in transitions.iter().enumerate() {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::Validation(format!(
                    "matrix for symbol {:?} is {}×{}, expected {n}×{n}",
                    alphabet.symbol(y),
                    m.nrows(),
                    m.ncols()
                )));
            }
            check_matrix_entries(m, &format!("matrix for symbol {:?}", alphabet.symbol(y)))?;
        }
        Ok(Self {
            states,
            alphabet,
            transitions,
        })
    }

    /// Single-state IID presentation: emits symbol `y` with probability
    /// `probs[y]` and stays put.
    pub fn iid(alphabet: Alphabet, probs: &[f64]) -> Result<Self> {
        if probs.len() != alphabet.len() {
            return Err(Error::Validation(format!(
                "{} probabilities for {} symbols",
                probs.len(),
                alphabet.len()
            )));
        }
        let transitions = probs
            .iter()
            .map(|&p| DMatrix::from_element(1, 1, p))
            .collect();
        Self::new(vec!["s".into()], alphabet, transitions)
    }

    /// State labels in declared order.
    pub fn states(&self) -> &[String] {
        &self.states
    }

    /// Number of states.
    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    /// The output alphabet.
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// The matrix `T^(y)` for symbol index `y`.
    pub fn matrix(&self, y: usize) -> &DMatrix<f64> {
        &self.transitions[y]
    }

    /// All per-symbol matrices in alphabet order.
    pub fn matrices(&self) -> &[DMatrix<f64>] {
        &self.transitions
    }

    /// Total transition matrix `T = Σ_y T^(y)`.
    pub fn total(&self) -> DMatrix<f64> {
        let n = self.n_states();
        let mut total = DMatrix::<f64>::zeros(n, n);
        for m in &self.transitions {
            total += m;
        }
        total
    }

    /// Emission distribution at state `i`: `p(y|i) = Σ_j T^(y)_ij`.
    pub fn emission_probs(&self, i: usize) -> Vec<f64> {
        self.transitions
            .iter()
            .map(|m| m.row(i).iter().sum())
            .collect()
    }

    /// True when every row of the total matrix sums to one within `1e-12`.
    pub fn is_stochastic(&self) -> bool {
        let total = self.total();
        (0..self.n_states()).all(|i| {
            let s: f64 = total.row(i).iter().sum();
            (s - 1.0).abs() <= VALIDATION_TOL * self.n_states().max(1) as f64
        })
    }

    /// True when each (state, symbol) has at most one positive successor.
    pub fn is_unifilar(&self) -> bool {
        (0..self.n_states()).all(|i| {
            self.transitions
                .iter()
                .all(|m| m.row(i).iter().filter(|&&v| v > SUPPORT_TOL).count() <= 1)
        })
    }

    /// Unique successor of state `i` on symbol `y`, when defined.
    pub fn successor(&self, i: usize, y: usize) -> Option<usize> {
        let row = self.transitions[y].row(i);
        let mut found = None;
        for (j, &v) in row.iter().enumerate() {
            if v > SUPPORT_TOL {
                if found.is_some() {
                    return None; // non-unifilar here
                }
                found = Some(j);
            }
        }
        found
    }

    /// Structural validation report: stochasticity, unifilarity, ergodicity.
    pub fn validate(&self) -> ValidationReport {
        let mut messages = Vec::new();
        let stochastic = self.is_stochastic();
        if !stochastic {
            let total = self.total();
            for i in 0..self.n_states() {
                let s: f64 = total.row(i).iter().sum();
                if (s - 1.0).abs() > VALIDATION_TOL * self.n_states() as f64 {
                    messages.push(format!("row for state {:?} sums to {s}", self.states[i]));
                }
            }
        }
        let unifilar = self.is_unifilar();
        if !unifilar {
            messages.push("some (state, symbol) has two or more successors".into());
        }
        let ergodic = match recurrent_class(&self.total()) {
            Ok(_) => true,
            Err(e) => {
                messages.push(e.to_string());
                false
            }
        };
        ValidationReport {
            stochastic,
            unifilar,
            ergodic,
            messages,
        }
    }

    /// Stationary distribution `π` with `πT = π`, zeros on transient states.
    pub fn stationary(&self) -> Result<StationaryDistribution> {
        stationary_of_total(&self.total())
    }
}

// ---------------------------------------------------------------------------
// TransducerPresentation
// ---------------------------------------------------------------------------

/// Input-output presentation: one `N×N` matrix `T^(y|x)` per (input, output)
/// pair; `T^(y|x)_ij` is the probability, upon reading `x` in state `i`, of
/// emitting `y` and moving to state `j`. Rows are stochastic per input.
#[derive(Debug, Clone, PartialEq)]
pub struct TransducerPresentation {
    states: Vec<String>,
    inputs: Alphabet,
    outputs: Alphabet,
    /// Indexed `transitions[x][y]`.
    transitions: Vec<Vec<DMatrix<f64>>>,
}

impl TransducerPresentation {
    /// Builds a presentation after shape checks; per-input stochasticity is
    /// diagnosed by [`Self::validate`], not enforced here.
    pub fn new(
        states: Vec<String>,
        inputs: Alphabet,
        outputs: Alphabet,
        transitions: Vec<Vec<DMatrix<f64>>>,
    ) -> Result<Self> {
        check_states(&states)?;
        if transitions.len() != inputs.len() {
            return Err(Error::Validation(format!(
                "expected {} input blocks, got {}",
                inputs.len(),
                transitions.len()
            )));
        }
        let n = states.len();
        for (x, per_output) in transitions.iter().enumerate() {
            if per_output.len() != outputs.len() {
                return Err(Error::Validation(format!(
                    "input {:?} has {} output matrices, expected {}",
                    inputs.symbol(x),
                    per_output.len(),
                    outputs.len()
                )));
            }
            for (y, m) in per_output.iter().enumerate() {
                if m.nrows() != n || m.ncols() != n {
                    return Err(Error::Validation(format!(
                        "matrix for ({:?}|{:?}) is {}×{}, expected {n}×{n}",
                        outputs.symbol(y),
                        inputs.symbol(x),
                        m.nrows(),
                        m.ncols()
                    )));
                }
                check_matrix_entries(
                    m,
                    &format!(
                        "matrix for ({:?}|{:?})",
                        outputs.symbol(y),
                        inputs.symbol(x)
                    ),
                )?;
            }
        }
        Ok(Self {
            states,
            inputs,
            outputs,
            transitions,
        })
    }

    /// Wraps a machine as a transducer over a trivial one-symbol input
    /// alphabet `{"*"}`, reducing process questions to channel questions.
    pub fn from_machine(m: &MachinePresentation) -> Self {
        Self {
            states: m.states().to_vec(),
            inputs: Alphabet::new(["*"]).expect("static alphabet"),
            outputs: m.alphabet().clone(),
            transitions: vec![m.matrices().to_vec()],
        }
    }

    /// The trivial one-symbol input source matching [`Self::from_machine`].
    pub fn trivial_input() -> MachinePresentation {
        MachinePresentation::iid(Alphabet::new(["*"]).expect("static alphabet"), &[1.0])
            .expect("static machine")
    }

    /// State labels in declared order.
    pub fn states(&self) -> &[String] {
        &self.states
    }

    /// Number of states.
    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    /// The input alphabet.
    pub fn inputs(&self) -> &Alphabet {
        &self.inputs
    }

    /// The output alphabet.
    pub fn outputs(&self) -> &Alphabet {
        &self.outputs
    }

    /// The matrix `T^(y|x)`.
    pub fn matrix(&self, x: usize, y: usize) -> &DMatrix<f64> {
        &self.transitions[x][y]
    }

    /// Emission probability `p(y|x, i) = Σ_j T^(y|x)_ij`.
    pub fn emission_prob(&self, i: usize, x: usize, y: usize) -> f64 {
        self.transitions[x][y].row(i).iter().sum()
    }

    /// Total matrix for one input: `T^x = Σ_y T^(y|x)` (row-stochastic).
    pub fn total_for_input(&self, x: usize) -> DMatrix<f64> {
        let n = self.n_states();
        let mut total = DMatrix::<f64>::zeros(n, n);
        for m in &self.transitions[x] {
            total += m;
        }
        total
    }

    /// True when, for every input, every row sums to one within `1e-12`.
    pub fn is_stochastic(&self) -> bool {
        (0..self.inputs.len()).all(|x| {
            let total = self.total_for_input(x);
            (0..self.n_states()).all(|i| {
                let s: f64 = total.row(i).iter().sum();
                (s - 1.0).abs() <= VALIDATION_TOL * self.n_states().max(1) as f64
            })
        })
    }

    /// True when each (state, input, output) has at most one successor.
    pub fn is_unifilar(&self) -> bool {
        (0..self.n_states()).all(|i| {
            self.transitions
                .iter()
                .flatten()
                .all(|m| m.row(i).iter().filter(|&&v| v > SUPPORT_TOL).count() <= 1)
        })
    }

    /// Structural validation. The ergodicity flag is evaluated on the
    /// uniform-input average `Σ_{x,y} T^(y|x) / |inputs|`, a conservative
    /// proxy; input-specific ergodicity is checked when a joint machine is
    /// actually built.
    pub fn validate(&self) -> ValidationReport {
        let mut messages = Vec::new();
        let stochastic = self.is_stochastic();
        if !stochastic {
            for x in 0..self.inputs.len() {
                let total = self.total_for_input(x);
                for i in 0..self.n_states() {
                    let s: f64 = total.row(i).iter().sum();
                    if (s - 1.0).abs() > VALIDATION_TOL * self.n_states() as f64 {
                        messages.push(format!(
                            "row for state {:?} on input {:?} sums to {s}",
                            self.states[i],
                            self.inputs.symbol(x)
                        ));
                    }
                }
            }
        }
        let unifilar = self.is_unifilar();
        if !unifilar {
            messages.push("some (state, input, output) has two or more successors".into());
        }
        let n = self.n_states();
        let mut avg = DMatrix::<f64>::zeros(n, n);
        for x in 0..self.inputs.len() {
            avg += self.total_for_input(x);
        }
        avg /= self.inputs.len() as f64;
        let ergodic = match recurrent_class(&avg) {
            Ok(_) => true,
            Err(e) => {
                messages.push(e.to_string());
                false
            }
        };
        ValidationReport {
            stochastic,
            unifilar,
            ergodic,
            messages,
        }
    }

    /// The deterministic successor map `(state, input, output) → state`,
    /// defined on the support of the transition tensor. Errors when the
    /// presentation is not unifilar.
    pub fn successor_map(&self) -> Result<SuccessorMap> {
        let mut map = HashMap::new();
        for i in 0..self.n_states() {
            for x in 0..self.inputs.len() {
                for y in 0..self.outputs.len() {
                    let row = self.transitions[x][y].row(i);
                    let mut found: Option<usize> = None;
                    for (j, &v) in row.iter().enumerate() {
                        if v > SUPPORT_TOL {
                            if found.is_some() {
                                return Err(Error::NotUnifilar(format!(
                                    "state {:?} on ({:?}|{:?}) has multiple successors",
                                    self.states[i],
                                    self.outputs.symbol(y),
                                    self.inputs.symbol(x)
                                )));
                            }
                            found = Some(j);
                        }
                    }
                    if let Some(j) = found {
                        map.insert((i, x, y), j);
                    }
                }
            }
        }
        Ok(SuccessorMap { map })
    }
}

// ---------------------------------------------------------------------------
// SuccessorMap
// ---------------------------------------------------------------------------

/// Deterministic next-state function `(state, input, output) → state` of a
/// unifilar transducer, defined where the transition tensor is positive.
#[derive(Debug, Clone)]
pub struct SuccessorMap {
    map: HashMap<(usize, usize, usize), usize>,
}

impl SuccessorMap {
    /// Successor of `state` on `(input, output)`, if that emission can occur.
    pub fn get(&self, state: usize, input: usize, output: usize) -> Option<usize> {
        self.map.get(&(state, input, output)).copied()
    }

    /// Number of defined entries.
    pub fn len(&self) -> usize {
        self.map.len()
    }

    /// True when no transition is defined (degenerate tensor).
    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn period2() -> MachinePresentation {
        // Two states; state a emits "1" and moves to b, b emits "0" back.
        let t0 = DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 1.0, 0.0]);
        let t1 = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        MachinePresentation::new(
            vec!["a".into(), "b".into()],
            Alphabet::binary(),
            vec![t0, t1],
        )
        .unwrap()
    }

    #[test]
    fn entropy_basics() {
        assert_abs_diff_eq!(entropy(&[0.5, 0.5]).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(entropy(&[1.0, 0.0]).unwrap(), 0.0, epsilon = 1e-15);
        // h(1/5) — direct evaluation of the binary-entropy formula.
        assert_abs_diff_eq!(
            entropy(&[0.2, 0.8]).unwrap(),
            0.721928094887362,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(binary_entropy(0.2), 0.721928094887362, epsilon = 1e-14);
        assert!(entropy(&[0.4, 0.4]).is_err());
        assert!(entropy(&[-0.1, 1.1]).is_err());
    }

    #[test]
    fn entropy_bounds_and_permutation_invariance() {
        let p = [0.1, 0.2, 0.3, 0.4];
        let q = [0.4, 0.1, 0.3, 0.2];
        assert_abs_diff_eq!(entropy(&p).unwrap(), entropy(&q).unwrap(), epsilon = 1e-15);
        assert!(entropy(&p).unwrap() <= (p.len() as f64).log2());
        assert!(entropy(&p).unwrap() >= 0.0);
    }

    #[test]
    fn period2_is_valid_and_uniform() {
        let m = period2();
        let report = m.validate();
        assert!(report.stochastic && report.unifilar && report.ergodic);
        let pi = m.stationary().unwrap();
        assert_abs_diff_eq!(pi.probabilities()[0], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(statistical_complexity(&pi), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn substochastic_row_is_reported() {
        let t0 = DMatrix::from_row_slice(1, 1, &[0.9]);
        let m = MachinePresentation::new(vec!["s".into()], Alphabet::new(["0"]).unwrap(), vec![t0])
            .unwrap();
        let report = m.validate();
        assert!(!report.stochastic);
        assert!(m.stationary().is_err());
    }

    #[test]
    fn two_absorbing_cycles_fail_ergodicity() {
        // States {a, b}: each absorbs with a self-loop; two recurrent classes.
        let t0 = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1.0]);
        let m = MachinePresentation::new(
            vec!["a".into(), "b".into()],
            Alphabet::new(["0"]).unwrap(),
            vec![t0],
        )
        .unwrap();
        assert!(!m.validate().ergodic);
        assert!(matches!(
            m.stationary(),
            Err(Error::MultipleRecurrentClasses(_))
        ));
    }

    #[test]
    fn transients_get_zero_mass() {
        // Chain a → b → c with c absorbing: only c is recurrent.
        let t0 = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0]);
        let m = MachinePresentation::new(
            vec!["a".into(), "b".into(), "c".into()],
            Alphabet::new(["0"]).unwrap(),
            vec![t0],
        )
        .unwrap();
        let pi = m.stationary().unwrap();
        assert_eq!(pi.probabilities(), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn symmetric_two_state_machine_is_uniform() {
        let half = DMatrix::from_row_slice(2, 2, &[0.25, 0.25, 0.25, 0.25]);
        let m = MachinePresentation::new(
            vec!["a".into(), "b".into()],
            Alphabet::binary(),
            vec![half.clone(), half],
        )
        .unwrap();
        let pi = m.stationary().unwrap();
        assert_abs_diff_eq!(pi.probabilities()[0], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(pi.probabilities()[1], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn iid_machine_and_complexity_bound() {
        let coin = MachinePresentation::iid(Alphabet::binary(), &[0.2, 0.8]).unwrap();
        let pi = coin.stationary().unwrap();
        assert_abs_diff_eq!(statistical_complexity(&pi), 0.0, epsilon = 1e-15);
        assert!(coin.is_unifilar());
    }

    #[test]
    fn successor_map_round_trip() {
        // Identity channel on {0,1}: output copies input, single state.
        let one = DMatrix::from_row_slice(1, 1, &[1.0]);
        let zero = DMatrix::from_row_slice(1, 1, &[0.0]);
        let t = TransducerPresentation::new(
            vec!["s".into()],
            Alphabet::binary(),
            Alphabet::binary(),
            vec![
                vec![one.clone(), zero.clone()],
                vec![zero.clone(), one.clone()],
            ],
        )
        .unwrap();
        let map = t.successor_map().unwrap();
        assert_eq!(map.get(0, 0, 0), Some(0));
        assert_eq!(map.get(0, 1, 1), Some(0));
        assert_eq!(map.get(0, 0, 1), None);
        // Rebuild the tensor from (successor map, emission probabilities).
        for x in 0..2 {
            for y in 0..2 {
                for i in 0..1 {
                    let p = t.emission_prob(i, x, y);
                    for j in 0..1 {
                        let expected = if map.get(i, x, y) == Some(j) { p } else { 0.0 };
                        assert_eq!(t.matrix(x, y)[(i, j)], expected);
                    }
                }
            }
        }
    }

    #[test]
    fn power_iteration_matches_dense_solve() {
        // A 70-state ring forces the power-iteration path; compare with the
        // dense answer on the same chain truncated to 60 states.
        let build = |n: usize| {
            let mut t = DMatrix::<f64>::zeros(n, n);
            for i in 0..n {
                t[(i, (i + 1) % n)] = 0.6;
                t[(i, i)] = 0.4;
            }
            MachinePresentation::new(
                (0..n).map(|i| format!("s{i}")).collect(),
                Alphabet::new(["0"]).unwrap(),
                vec![t],
            )
            .unwrap()
        };
        let large = build(70);
        let pi = large.stationary().unwrap();
        for &p in pi.probabilities() {
            assert_abs_diff_eq!(p, 1.0 / 70.0, epsilon = 1e-10);
        }
    }
}
