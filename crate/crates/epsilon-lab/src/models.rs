//! The bundled model zoo: constructors for every named example shipped with
//! the crate, their closed-form quantities, and a string-keyed dispatcher
//! used by the CLI.
//!
//! Machines are sources (no input); transducers are channels. All parameters
//! are probabilities in [0, 1] unless noted.

use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::model::{
    binary_entropy, entropy_unchecked, Alphabet, MachinePresentation, StationaryDistribution,
    TransducerPresentation,
};

fn check_unit(name: &str, v: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&v) || !v.is_finite() {
        return Err(Error::ParamOutOfRange(format!(
            "{name} = {v} is not a probability in [0, 1]"
        )));
    }
    Ok(v)
}

/// x·ln(x), continuously extended by 0 at x = 0.
fn x_ln_x(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln()
    } else {
        0.0
    }
}

fn labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn digit_alphabet(n: usize) -> Alphabet {
    Alphabet::new((0..n).map(|i| i.to_string())).expect("distinct digits")
}

// ---------------------------------------------------------------------------
// Sources (machines)
// ---------------------------------------------------------------------------

/// The period-2 source: emits 0101… or 1010…, one bit of memory, zero rate.
pub fn period2() -> MachinePresentation {
    let t0 = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
    let t1 = DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 1.0, 0.0]);
    MachinePresentation::new(
        vec!["A".into(), "B".into()],
        Alphabet::binary(),
        vec![t0, t1],
    )
    .expect("static model")
}

/// Memoryless binary source: emits 0 with probability `r`, 1 otherwise.
pub fn biased_coin(r: f64) -> Result<MachinePresentation> {
    check_unit("r", r)?;
    MachinePresentation::iid(Alphabet::binary(), &[r, 1.0 - r])
}

/// Memoryless source over `{0, 1, 2}` with the given symbol probabilities.
pub fn iid_ternary(probs: [f64; 3]) -> Result<MachinePresentation> {
    MachinePresentation::iid(digit_alphabet(3), &probs)
}

// ---------------------------------------------------------------------------
// Channels (transducers)
// ---------------------------------------------------------------------------

/// One-step delay channel: emits the previous input symbol, remembers the
/// current one. Two states labeled by the stored bit.
pub fn delay_channel() -> TransducerPresentation {
    let z = || DMatrix::<f64>::zeros(2, 2);
    // t[x][y][(i, j)]: in state i on input x, emit y and move to j.
    let mut t = vec![vec![z(), z()], vec![z(), z()]];
    for x in 0..2 {
        for i in 0..2 {
            t[x][i][(i, x)] = 1.0; // emit the stored bit i, store x
        }
    }
    TransducerPresentation::new(
        vec!["0".into(), "1".into()],
        Alphabet::binary(),
        Alphabet::binary(),
        t,
    )
    .expect("static model")
}

/// Noisy detector with dead time: in `ready`, input 1 is detected (emit 1)
/// with probability 1 − α and missed (emit 0) with probability α; a
/// detection is followed by one `dead` step that emits 0 and re-arms.
pub fn bob(alpha: f64) -> Result<TransducerPresentation> {
    check_unit("alpha", alpha)?;
    let z = || DMatrix::<f64>::zeros(2, 2);
    let mut t = vec![vec![z(), z()], vec![z(), z()]];
    t[0][0][(0, 0)] = 1.0; // ready, quiet input: emit 0, stay ready
    t[0][0][(1, 0)] = 1.0; // dead: emit 0, re-arm
    t[1][0][(0, 0)] = alpha; // ready, event: missed
    t[1][0][(1, 0)] = 1.0; // dead: emit 0, re-arm
    t[1][1][(0, 1)] = 1.0 - alpha; // ready, event: detected, go dead
    TransducerPresentation::new(
        vec!["ready".into(), "dead".into()],
        Alphabet::binary(),
        Alphabet::binary(),
        t,
    )
}

/// Parameters of the investor channel (all probabilities). States are
/// `f` (following the advisor), `u` (acting unadvised), `e` (out of the
/// market); inputs are advisor signals 0/1/2, outputs are the investor's
/// actions 0/1/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvestorParams {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
}

impl InvestorParams {
    /// The bundled default parameter point with one free knob `q1`:
    /// p₁ = p₂ = 0, p₃ = 4/7, q₂ = 3/5, q₃ = 1/100.
    pub fn default_with_q1(q1: f64) -> Self {
        Self {
            p1: 0.0,
            p2: 0.0,
            p3: 4.0 / 7.0,
            q1,
            q2: 0.6,
            q3: 0.01,
        }
    }

    /// Same defaults with `p3` also free.
    pub fn with_q1_p3(q1: f64, p3: f64) -> Self {
        Self {
            p3,
            ..Self::default_with_q1(q1)
        }
    }
}

/// The investor channel.
pub fn investor(params: InvestorParams) -> Result<TransducerPresentation> {
    let InvestorParams {
        p1,
        p2,
        p3,
        q1,
        q2,
        q3,
    } = params;
    for (name, v) in [
        ("p1", p1),
        ("p2", p2),
        ("p3", p3),
        ("q1", q1),
        ("q2", q2),
        ("q3", q3),
    ] {
        check_unit(name, v)?;
    }
    let z = || DMatrix::<f64>::zeros(3, 3);
    let mut t = vec![
        vec![z(), z(), z()],
        vec![z(), z(), z()],
        vec![z(), z(), z()],
    ];
    // Advisor signal 0.
    t[0][0][(0, 1)] = p1;
    t[0][0][(1, 1)] = 1.0 - p2;
    t[0][0][(2, 0)] = p3;
    t[0][1][(0, 2)] = 1.0 - p1;
    t[0][1][(1, 2)] = p2;
    t[0][1][(2, 2)] = 1.0 - p3;
    // Advisor signal 1.
    t[1][0][(0, 1)] = q1;
    t[1][0][(1, 1)] = 1.0 - q2;
    t[1][0][(2, 0)] = q3;
    t[1][1][(0, 2)] = 1.0 - q1;
    t[1][1][(1, 2)] = q2;
    t[1][1][(2, 2)] = 1.0 - q3;
    // Advisor signal 2: always act 2 and leave the market.
    t[2][2][(0, 2)] = 1.0;
    t[2][2][(1, 2)] = 1.0;
    t[2][2][(2, 2)] = 1.0;
    TransducerPresentation::new(
        vec!["f".into(), "u".into(), "e".into()],
        digit_alphabet(3),
        digit_alphabet(3),
        t,
    )
}

/// First bundled advisor-signal distribution: (0.2, 0.1, 0.7).
pub fn investor_input_one() -> MachinePresentation {
    iid_ternary([0.2, 0.1, 0.7]).expect("static model")
}

/// Second bundled advisor-signal distribution: (0.1, 0.7, 0.2).
pub fn investor_input_two() -> MachinePresentation {
    iid_ternary([0.1, 0.7, 0.2]).expect("static model")
}

/// Two-state source over `{0, 1, 2}` used to drive the three-symbol relay.
pub fn ternary_input() -> MachinePresentation {
    let t0 = DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.5, 0.0]);
    let t1 = DMatrix::from_row_slice(2, 2, &[0.0, 0.5, 0.0, 0.5]);
    let t2 = DMatrix::from_row_slice(2, 2, &[0.0, 0.5, 0.0, 0.0]);
    MachinePresentation::new(
        vec!["a".into(), "b".into()],
        digit_alphabet(3),
        vec![t0, t1, t2],
    )
    .expect("static model")
}

/// Three-state relay over `{0, 1, 2}`: input 0 always yields 0; input 1
/// yields 1 with a state-dependent probability (`p`, `q`, `r` by state) and
/// 2 otherwise; input 2 always yields 2. The state tracks the last output.
pub fn ternary_channel(p: f64, q: f64, r: f64) -> Result<TransducerPresentation> {
    check_unit("p", p)?;
    check_unit("q", q)?;
    check_unit("r", r)?;
    let z = || DMatrix::<f64>::zeros(3, 3);
    let mut t = vec![
        vec![z(), z(), z()],
        vec![z(), z(), z()],
        vec![z(), z(), z()],
    ];
    for i in 0..3 {
        t[0][0][(i, 0)] = 1.0;
        t[2][2][(i, 2)] = 1.0;
    }
    for (i, keep) in [p, q, r].into_iter().enumerate() {
        t[1][1][(i, 1)] = keep;
        t[1][2][(i, 2)] = 1.0 - keep;
    }
    TransducerPresentation::new(labels("s", 3), digit_alphabet(3), digit_alphabet(3), t)
}

/// The bundled parameter point of the three-symbol relay: p = 0, q = 1/3,
/// r = 1/4.
pub fn ternary_channel_default() -> TransducerPresentation {
    ternary_channel(0.0, 1.0 / 3.0, 0.25).expect("static model")
}

/// Spin mapper: reads a binary drive, writes a spin (0 = down, 1 = up)
/// whose flip probabilities on an excited input depend on the previous
/// spin (`a1` to stay up after down, `a2` to stay up after up).
pub fn ising_mapper(a1: f64, a2: f64) -> Result<TransducerPresentation> {
    check_unit("a1", a1)?;
    check_unit("a2", a2)?;
    let z = || DMatrix::<f64>::zeros(2, 2);
    let mut t = vec![vec![z(), z()], vec![z(), z()]];
    t[0][0][(0, 0)] = 1.0;
    t[0][0][(1, 0)] = 1.0;
    t[1][0][(0, 0)] = a1;
    t[1][0][(1, 0)] = 1.0 - a2;
    t[1][1][(0, 1)] = 1.0 - a1;
    t[1][1][(1, 1)] = a2;
    TransducerPresentation::new(
        vec!["down".into(), "up".into()],
        Alphabet::binary(),
        Alphabet::binary(),
        t,
    )
}

/// Two-state binary channel whose quantum and classical memory orderings
/// provably agree for every pair of memoryless inputs.
pub fn no_ambiguity(p: f64, q: f64) -> Result<TransducerPresentation> {
    check_unit("p", p)?;
    check_unit("q", q)?;
    let z = || DMatrix::<f64>::zeros(2, 2);
    let mut t = vec![vec![z(), z()], vec![z(), z()]];
    t[0][0][(0, 0)] = 1.0 - p;
    t[0][0][(1, 0)] = q;
    t[0][1][(0, 1)] = p;
    t[0][1][(1, 1)] = 1.0 - q;
    t[1][0][(0, 0)] = 1.0;
    t[1][0][(1, 0)] = 1.0;
    TransducerPresentation::new(labels("s", 2), Alphabet::binary(), Alphabet::binary(), t)
}

/// Output machine of [`no_ambiguity`] driven by a coin with bias `r`
/// (probability of input 0), built directly in closed form.
pub fn no_ambiguity_machine(p: f64, q: f64, r: f64) -> Result<MachinePresentation> {
    check_unit("p", p)?;
    check_unit("q", q)?;
    check_unit("r", r)?;
    let n0 = DMatrix::from_row_slice(2, 2, &[1.0 - r * p, 0.0, 1.0 - r * (1.0 - q), 0.0]);
    let n1 = DMatrix::from_row_slice(2, 2, &[0.0, r * p, 0.0, r * (1.0 - q)]);
    MachinePresentation::new(labels("s", 2), Alphabet::binary(), vec![n0, n1])
}

/// Cyclic n-state family: input 0 re-emits the current state label; input 1
/// advances to the next state with state-dependent probability `q[j]`
/// (emitting the new label) and re-emits otherwise.
pub fn tn(qs: &[f64]) -> Result<TransducerPresentation> {
    let n = qs.len();
    if n < 2 {
        return Err(Error::ParamOutOfRange(format!(
            "cycle family needs at least 2 states, got {n}"
        )));
    }
    for (j, &q) in qs.iter().enumerate() {
        check_unit(&format!("q{j}"), q)?;
        if q == 0.0 {
            return Err(Error::DegenerateParameters(format!(
                "q{j} = 0 makes state {j} absorbing"
            )));
        }
    }
    let z = || DMatrix::<f64>::zeros(n, n);
    let mut t = vec![vec![z(); n], vec![z(); n]];
    for j in 0..n {
        let k = (j + 1) % n;
        t[0][j][(j, j)] = 1.0;
        t[1][j][(j, j)] = 1.0 - qs[j];
        t[1][k][(j, k)] = qs[j];
    }
    TransducerPresentation::new(
        (0..n).map(|i| i.to_string()).collect(),
        Alphabet::binary(),
        digit_alphabet(n),
        t,
    )
}

/// Single-state channel that copies its input to its output.
pub fn identity_channel(alphabet: &Alphabet) -> TransducerPresentation {
    let k = alphabet.len();
    let mut t = vec![vec![DMatrix::<f64>::zeros(1, 1); k]; k];
    for x in 0..k {
        t[x][x][(0, 0)] = 1.0;
    }
    TransducerPresentation::new(vec!["s".into()], alphabet.clone(), alphabet.clone(), t)
        .expect("static model")
}

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

/// Closed-form classical complexity of the detector under a coin input:
/// h(b) with b = 1/(1 + (1−α)(1−r)).
pub fn bob_classical(alpha: f64, r: f64) -> Result<f64> {
    check_unit("alpha", alpha)?;
    check_unit("r", r)?;
    let b = 1.0 / (1.0 + (1.0 - alpha) * (1.0 - r));
    Ok(binary_entropy(b))
}

/// Closed-form quantum memory of the detector under a coin input:
/// h(λ₋) with λ₋ = (1 − √(1 − 4b(1−b)(1−α)))/2 and b as in
/// [`bob_classical`].
pub fn bob_quantum(alpha: f64, r: f64) -> Result<f64> {
    check_unit("alpha", alpha)?;
    check_unit("r", r)?;
    let b = 1.0 / (1.0 + (1.0 - alpha) * (1.0 - r));
    let disc = (1.0 - 4.0 * b * (1.0 - b) * (1.0 - alpha)).max(0.0);
    let lambda_minus = 0.5 * (1.0 - disc.sqrt());
    Ok(binary_entropy(lambda_minus))
}

/// Closed-form channel excess entropy of the detector under a coin input:
/// (1−r)(D ln D − ρ ln ρ + α ln α) / (D ln 2) with D = 1 + (1−α)(1−r) and
/// ρ = 1 − r(1−α).
pub fn bob_excess(alpha: f64, r: f64) -> Result<f64> {
    check_unit("alpha", alpha)?;
    check_unit("r", r)?;
    let d = 1.0 + (1.0 - alpha) * (1.0 - r);
    let rho = 1.0 - r * (1.0 - alpha);
    Ok((1.0 - r) * (x_ln_x(d) - x_ln_x(rho) + x_ln_x(alpha)) / (d * std::f64::consts::LN_2))
}

/// Closed-form pairwise fidelity bound of the detector's two memory states.
pub fn bob_fidelity(alpha: f64) -> f64 {
    alpha.sqrt()
}

/// Closed-form stationary distribution (states f, u, e) of the investor at
/// the bundled defaults driven by [`investor_input_one`]. Valid only at the
/// default p₁ = p₂ = 0, p₃ = 4/7, q₂ = 3/5, q₃ = 1/100.
pub fn investor_pi_one(q1: f64) -> [f64; 3] {
    let denom = 296_666.0 + 4_035.0 * q1;
    [30_666.0 / denom, 4_035.0 * q1 / denom, 266_000.0 / denom]
}

/// Closed-form stationary distribution (states f, u, e) of the investor at
/// the bundled defaults driven by [`investor_input_two`].
pub fn investor_pi_two(q1: f64) -> [f64; 3] {
    let denom = 230_919.0 + 15_715.0 * q1;
    [13_919.0 / denom, 15_715.0 * q1 / denom, 217_000.0 / denom]
}

/// Closed-form fidelity bound between the investor's f and e memory states:
/// min{√(1−p₃), √(0.99(1−q₁))}. The u state is orthogonal to both.
pub fn investor_fe_fidelity(p3: f64, q1: f64) -> f64 {
    (1.0 - p3).sqrt().min((0.99 * (1.0 - q1)).sqrt())
}

/// Product-form overlap between the investor's f and e memory states under
/// the standard encoding: √(1−p₃)·√(0.99(1−q₁)).
pub fn investor_fe_standard(p3: f64, q1: f64) -> f64 {
    (1.0 - p3).sqrt() * (0.99 * (1.0 - q1)).sqrt()
}

/// Closed-form stationary weight of the first output state of the
/// no-ambiguity channel under a coin with bias `r`:
/// φ₀ = (1 − (1−q)r) / (1 + (p+q−1)r).
pub fn no_ambiguity_phi0(p: f64, q: f64, r: f64) -> f64 {
    (1.0 - (1.0 - q) * r) / (1.0 + (p + q - 1.0) * r)
}

/// Closed-form eigenvalue pair of the 2-state memory overlap ensemble with
/// weights (φ₀, 1−φ₀) and pairwise overlap `f12`:
/// λ± = 1/2 ± √(1 − 4φ₀(1−φ₀)(1−f12²))/2.
pub fn two_state_gram_eigenvalues(phi0: f64, f12: f64) -> (f64, f64) {
    let disc = (1.0 - 4.0 * phi0 * (1.0 - phi0) * (1.0 - f12 * f12)).max(0.0);
    let half = 0.5 * disc.sqrt();
    (0.5 - half, 0.5 + half)
}

/// Closed-form standard-encoding overlap of the spin mapper's two memory
/// states: √(α₁(1−α₂)) + √(α₂(1−α₁)).
pub fn ising_overlap(a1: f64, a2: f64) -> f64 {
    (a1 * (1.0 - a2)).sqrt() + (a2 * (1.0 - a1)).sqrt()
}

/// Closed-form stationary distribution of the cyclic family:
/// π_i = Π_{j≠i} q_j / Σ_k Π_{j≠k} q_j. Errors when some q_j = 0.
pub fn family_tn_stationary(qs: &[f64]) -> Result<StationaryDistribution> {
    for (j, &q) in qs.iter().enumerate() {
        check_unit(&format!("q{j}"), q)?;
        if q == 0.0 {
            return Err(Error::DegenerateParameters(format!(
                "q{j} = 0 makes state {j} absorbing"
            )));
        }
    }
    let weights: Vec<f64> = (0..qs.len())
        .map(|i| {
            qs.iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &q)| q)
                .product()
        })
        .collect();
    let total: f64 = weights.iter().sum();
    Ok(StationaryDistribution::from_vec(
        weights.into_iter().map(|w| w / total).collect(),
    ))
}

/// Finds a parameter vector of the cyclic n-state family whose classical
/// (equivalently quantum) memory equals `target` bits under any memoryless
/// binary input with positive excitation probability. Searches the
/// one-parameter slice q = (s, 1, …, 1), on which the memory rises
/// monotonically from 0 to log₂ n, by bisection.
pub fn solve_target_complexity(
    n: usize,
    target: f64,
    input: &MachinePresentation,
) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::ParamOutOfRange(format!(
            "cycle family needs at least 2 states, got {n}"
        )));
    }
    let max = (n as f64).log2();
    if !(target > 0.0 && target <= max) {
        return Err(Error::TargetOutOfRange(format!(
            "target {target} outside (0, {max}] for n = {n}"
        )));
    }
    // The input only needs to excite the advancing transition.
    if input.alphabet().len() != 2 {
        return Err(Error::AlphabetMismatch(
            "driving input must be binary".into(),
        ));
    }
    let excite: f64 = input.matrices()[1].iter().sum();
    if excite <= 0.0 {
        return Err(Error::DegenerateParameters(
            "input never excites the advancing transition".into(),
        ));
    }
    let complexity = |s: f64| {
        let denom = 1.0 + (n as f64 - 1.0) * s;
        let mut pi = vec![s / denom; n];
        pi[0] = 1.0 / denom;
        entropy_unchecked(&pi)
    };
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    if (complexity(1.0) - target).abs() <= 1e-12 {
        lo = 1.0;
        hi = 1.0;
    }
    for _ in 0..200 {
        if hi - lo <= 1e-15 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if complexity(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let s = 0.5 * (lo + hi);
    let mut qs = vec![1.0; n];
    qs[0] = s;
    Ok(qs)
}

// ---------------------------------------------------------------------------
// Named dispatch
// ---------------------------------------------------------------------------

/// A model retrieved by name: either a source or a channel.
#[derive(Debug, Clone)]
pub enum NamedModel {
    Machine(MachinePresentation),
    Transducer(TransducerPresentation),
}

/// Key-value parameters for [`named_model`].
#[derive(Debug, Clone, Default)]
pub struct Params(BTreeMap<String, f64>);

impl Params {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds from `key=value` strings (e.g. CLI `--param alpha=0.5`).
    pub fn parse_list<S: AsRef<str>>(items: &[S]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for item in items {
            let item = item.as_ref();
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {item:?}")))?;
            let value: f64 = crate::cli::parse_prob(value.trim())?;
            map.insert(key.trim().to_string(), value);
        }
        Ok(Self(map))
    }

    pub fn set(&mut self, key: &str, value: f64) -> &mut Self {
        self.0.insert(key.to_string(), value);
        self
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.0.get(key).copied()
    }

    pub fn get_or(&self, key: &str, default: f64) -> f64 {
        self.get(key).unwrap_or(default)
    }

    fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        for key in self.0.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(Error::Validation(format!(
                    "unknown parameter {key:?}; allowed: {allowed:?}"
                )));
            }
        }
        Ok(())
    }
}

/// Names accepted by [`named_model`].
pub const MODEL_NAMES: &[&str] = &[
    "period-2",
    "coin",
    "delay",
    "bob",
    "investor",
    "investor-input-1",
    "investor-input-2",
    "ternary-input",
    "ternary-channel",
    "ising",
    "no-ambiguity",
    "tn",
    "identity",
];

/// Constructs a bundled model by name. Parameter defaults: coin r = 1/2;
/// bob alpha = 1/2; investor p1 = p2 = 0, p3 = 4/7, q1 = 3/10, q2 = 3/5,
/// q3 = 1/100; ternary-channel p = 0, q = 1/3, r = 1/4; ising a1 = 0,
/// a2 = 7/10; no-ambiguity p = q = 1/2; tn n = 3, q = 1/2 each;
/// identity k = 2 symbols.
pub fn named_model(name: &str, params: &Params) -> Result<NamedModel> {
    use NamedModel::{Machine, Transducer};
    match name {
        "period-2" => {
            params.check_keys(&[])?;
            Ok(Machine(period2()))
        }
        "coin" => {
            params.check_keys(&["r"])?;
            Ok(Machine(biased_coin(params.get_or("r", 0.5))?))
        }
        "delay" => {
            params.check_keys(&[])?;
            Ok(Transducer(delay_channel()))
        }
        "bob" => {
            params.check_keys(&["alpha"])?;
            Ok(Transducer(bob(params.get_or("alpha", 0.5))?))
        }
        "investor" => {
            params.check_keys(&["p1", "p2", "p3", "q1", "q2", "q3"])?;
            let mut p = InvestorParams::default_with_q1(params.get_or("q1", 0.3));
            p.p1 = params.get_or("p1", p.p1);
            p.p2 = params.get_or("p2", p.p2);
            p.p3 = params.get_or("p3", p.p3);
            p.q2 = params.get_or("q2", p.q2);
            p.q3 = params.get_or("q3", p.q3);
            Ok(Transducer(investor(p)?))
        }
        "investor-input-1" => {
            params.check_keys(&[])?;
            Ok(Machine(investor_input_one()))
        }
        "investor-input-2" => {
            params.check_keys(&[])?;
            Ok(Machine(investor_input_two()))
        }
        "ternary-input" => {
            params.check_keys(&[])?;
            Ok(Machine(ternary_input()))
        }
        "ternary-channel" => {
            params.check_keys(&["p", "q", "r"])?;
            Ok(Transducer(ternary_channel(
                params.get_or("p", 0.0),
                params.get_or("q", 1.0 / 3.0),
                params.get_or("r", 0.25),
            )?))
        }
        "ising" => {
            params.check_keys(&["a1", "a2"])?;
            Ok(Transducer(ising_mapper(
                params.get_or("a1", 0.0),
                params.get_or("a2", 0.7),
            )?))
        }
        "no-ambiguity" => {
            params.check_keys(&["p", "q"])?;
            Ok(Transducer(no_ambiguity(
                params.get_or("p", 0.5),
                params.get_or("q", 0.5),
            )?))
        }
        "tn" => {
            let n = params.get_or("n", 3.0);
            if n.fract() != 0.0 || !(2.0..=64.0).contains(&n) {
                return Err(Error::ParamOutOfRange(format!(
                    "n = {n} must be an integer in [2, 64]"
                )));
            }
            let n = n as usize;
            let mut allowed: Vec<String> = vec!["n".into(), "q".into()];
            allowed.extend((0..n).map(|j| format!("q{j}")));
            let allowed_refs: Vec<&str> = allowed.iter().map(String::as_str).collect();
            params.check_keys(&allowed_refs)?;
            let common = params.get_or("q", 0.5);
            let qs: Vec<f64> = (0..n)
                .map(|j| params.get_or(&format!("q{j}"), common))
                .collect();
            Ok(Transducer(tn(&qs)?))
        }
        "identity" => {
            params.check_keys(&["k"])?;
            let k = params.get_or("k", 2.0);
            if k.fract() != 0.0 || !(1.0..=64.0).contains(&k) {
                return Err(Error::ParamOutOfRange(format!(
                    "k = {k} must be an integer in [1, 64]"
                )));
            }
            Ok(Transducer(identity_channel(&digit_alphabet(k as usize))))
        }
        other => Err(Error::UnknownName(format!(
            "{other:?}; known models: {MODEL_NAMES:?}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::driven_stationary;
    use approx::assert_abs_diff_eq;

    #[test]
    fn all_bundled_models_validate() {
        let machines = [
            period2(),
            biased_coin(0.2).unwrap(),
            investor_input_one(),
            investor_input_two(),
            ternary_input(),
            no_ambiguity_machine(0.3, 0.7, 0.4).unwrap(),
        ];
        for m in &machines {
            let report = m.validate();
            assert!(report.is_valid(), "{:?}: {:?}", m.states(), report);
        }
        let transducers = [
            delay_channel(),
            bob(0.5).unwrap(),
            investor(InvestorParams::default_with_q1(0.3)).unwrap(),
            ternary_channel_default(),
            ising_mapper(0.0, 0.7).unwrap(),
            no_ambiguity(0.4, 0.6).unwrap(),
            tn(&[0.5, 0.25, 0.125]).unwrap(),
            identity_channel(&Alphabet::binary()),
        ];
        for t in &transducers {
            let report = t.validate();
            assert!(report.is_valid(), "{:?}: {:?}", t.states(), report);
        }
    }

    #[test]
    fn detector_edge_probabilities() {
        let alpha = 0.5;
        let t = bob(alpha).unwrap();
        // ready --0|0--> ready, ready --0|1 (missed)--> ready,
        // ready --1|1--> dead, dead --0|x--> ready.
        assert_abs_diff_eq!(t.emission_prob(0, 0, 0), 1.0);
        assert_eq!(t.successor_map().unwrap().get(0, 0, 0), Some(0));
        assert_abs_diff_eq!(t.emission_prob(0, 1, 0), alpha);
        assert_abs_diff_eq!(t.emission_prob(0, 1, 1), 1.0 - alpha);
        assert_eq!(t.successor_map().unwrap().get(0, 1, 1), Some(1));
        assert_abs_diff_eq!(t.emission_prob(1, 0, 0), 1.0);
        assert_abs_diff_eq!(t.emission_prob(1, 1, 0), 1.0);
        assert_eq!(t.successor_map().unwrap().get(1, 1, 0), Some(0));
    }

    #[test]
    fn detector_closed_forms_at_reference_point() {
        assert_abs_diff_eq!(
            bob_classical(0.5, 0.2).unwrap(),
            0.863120568566631,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            bob_quantum(0.5, 0.2).unwrap(),
            0.515831595356724,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            bob_excess(0.5, 0.2).unwrap(),
            0.180800195507933,
            epsilon = 1e-12
        );
    }

    #[test]
    fn investor_stationary_matches_closed_form() {
        let q1 = 0.3;
        let t = investor(InvestorParams::default_with_q1(q1)).unwrap();
        let pi1 = driven_stationary(&t, &investor_input_one()).unwrap();
        let cf1 = investor_pi_one(q1);
        assert_abs_diff_eq!(pi1.probabilities()[0], 0.102948705252009, epsilon = 1e-12);
        assert_abs_diff_eq!(pi1.probabilities()[1], 0.004063764681000, epsilon = 1e-12);
        assert_abs_diff_eq!(pi1.probabilities()[2], 0.892987530066991, epsilon = 1e-12);
        for i in 0..3 {
            assert_abs_diff_eq!(pi1.probabilities()[i], cf1[i], epsilon = 1e-12);
        }
        let pi2 = driven_stationary(&t, &investor_input_two()).unwrap();
        let cf2 = investor_pi_two(q1);
        for i in 0..3 {
            assert_abs_diff_eq!(pi2.probabilities()[i], cf2[i], epsilon = 1e-12);
        }
    }

    #[test]
    fn cycle_family_stationary_closed_form() {
        let qs = [0.5, 0.25, 0.125];
        let cf = family_tn_stationary(&qs).unwrap();
        // Weights (1/32, 1/16, 1/8) normalize to (1/7, 2/7, 4/7).
        assert_abs_diff_eq!(cf.probabilities()[0], 1.0 / 7.0, epsilon = 1e-12);
        assert_abs_diff_eq!(cf.probabilities()[1], 2.0 / 7.0, epsilon = 1e-12);
        assert_abs_diff_eq!(cf.probabilities()[2], 4.0 / 7.0, epsilon = 1e-12);
        let t = tn(&qs).unwrap();
        let pi = driven_stationary(&t, &biased_coin(0.3).unwrap()).unwrap();
        for i in 0..3 {
            assert_abs_diff_eq!(
                pi.probabilities()[i],
                cf.probabilities()[i],
                epsilon = 1e-10
            );
        }
        // Equal parameters give the uniform distribution.
        let uniform = family_tn_stationary(&[0.3; 4]).unwrap();
        for &p in uniform.probabilities() {
            assert_abs_diff_eq!(p, 0.25, epsilon = 1e-15);
        }
        assert!(matches!(
            family_tn_stationary(&[0.5, 0.0]),
            Err(Error::DegenerateParameters(_))
        ));
    }

    #[test]
    fn target_complexity_solver_hits_reference_point() {
        let input = biased_coin(0.5).unwrap();
        let qs = solve_target_complexity(2, 0.5, &input).unwrap();
        assert_abs_diff_eq!(qs[0], 0.123630684649, epsilon = 1e-9);
        assert_abs_diff_eq!(qs[1], 1.0);
        let pi = family_tn_stationary(&qs).unwrap();
        assert_abs_diff_eq!(pi.entropy(), 0.5, epsilon = 1e-9);
        // The boundary target log₂ n is reachable (uniform distribution).
        let qs = solve_target_complexity(2, 1.0, &input).unwrap();
        assert_abs_diff_eq!(qs[0], 1.0, epsilon = 1e-9);
        assert!(matches!(
            solve_target_complexity(2, 1.5, &input),
            Err(Error::TargetOutOfRange(_))
        ));
        assert!(matches!(
            solve_target_complexity(2, 0.0, &input),
            Err(Error::TargetOutOfRange(_))
        ));
    }

    #[test]
    fn no_ambiguity_machine_matches_phi0() {
        let (p, q, r) = (0.3, 0.7, 0.4);
        let m = no_ambiguity_machine(p, q, r).unwrap();
        let pi = m.stationary().unwrap();
        assert_abs_diff_eq!(
            pi.probabilities()[0],
            no_ambiguity_phi0(p, q, r),
            epsilon = 1e-12
        );
    }

    #[test]
    fn named_dispatch_and_errors() {
        let mut params = Params::new();
        params.set("alpha", 0.25);
        match named_model("bob", &params).unwrap() {
            NamedModel::Transducer(t) => {
                assert_abs_diff_eq!(t.emission_prob(0, 1, 0), 0.25);
            }
            NamedModel::Machine(_) => panic!("expected a channel"),
        }
        assert!(matches!(
            named_model("nonesuch", &Params::new()),
            Err(Error::UnknownName(_))
        ));
        let mut bad = Params::new();
        bad.set("beta", 0.5);
        assert!(matches!(
            named_model("bob", &bad),
            Err(Error::Validation(_))
        ));
        let mut oob = Params::new();
        oob.set("alpha", 1.5);
        assert!(matches!(
            named_model("bob", &oob),
            Err(Error::ParamOutOfRange(_))
        ));
        let mut cycle = Params::new();
        cycle.set("n", 4.0).set("q1", 0.25);
        match named_model("tn", &cycle).unwrap() {
            NamedModel::Transducer(t) => assert_eq!(t.n_states(), 4),
            NamedModel::Machine(_) => panic!("expected a channel"),
        }
    }

    #[test]
    fn overlap_closed_forms() {
        assert_abs_diff_eq!(
            ising_overlap(0.0, 0.7),
            0.7f64.sqrt() * 1.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(ising_overlap(0.5, 0.5), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            investor_fe_fidelity(3.0 / 7.0, 0.3),
            (4.0f64 / 7.0).sqrt().min((0.99f64 * 0.7).sqrt()),
            epsilon = 1e-15
        );
        assert!(investor_fe_standard(3.0 / 7.0, 0.3) <= investor_fe_fidelity(3.0 / 7.0, 0.3));
        let (lo, hi) = two_state_gram_eigenvalues(0.5, 0.0);
        assert_abs_diff_eq!(lo, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(hi, 0.5, epsilon = 1e-15);
    }
}
