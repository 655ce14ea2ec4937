//! Command-line surface: model-file ingestion, analysis commands, sweeps,
//! bundled reference datasets, simulation, and CSV emission.
//!
//! Exit codes: 0 success, 1 parse error, 2 validation error, 3 computation
//! error (and 3 when `verify` finds failing checks). The environment
//! variable `EPSILON_LAB_THREADS` caps worker parallelism for sweeps.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::algebra::{driven_stationary, joint_machine, word_distribution};
use crate::ambiguity::{
    centered_axis, classify, product_grid, region_scan, RegionScanPoint, Sufficiency,
};
use crate::error::{Error, Result};
use crate::inversion::{invert_channel, output_presentation, output_process, CompletionPolicy};
use crate::model::{statistical_complexity, Alphabet, MachinePresentation, TransducerPresentation};
use crate::models;
use crate::quantum::{
    fidelity_constraints, quantum_complexity, standard_overlaps, von_neumann_entropy,
    ComplexityReport, GramEnsemble, QuantumMode,
};
use crate::simulate::{empirical_word_distribution, sample_path, total_variation, Trajectory};

// ---------------------------------------------------------------------------
// Value parsing
// ---------------------------------------------------------------------------

/// Parses a probability given as a decimal literal (`0.25`) or an exact
/// rational (`1/4`), evaluated in binary floating point.
pub fn parse_prob(s: &str) -> Result<f64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("cannot parse probability {s:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let num: f64 = num.trim().parse().map_err(|_| bad())?;
        let den: f64 = den.trim().parse().map_err(|_| bad())?;
        if den == 0.0 {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(num / den)
    } else {
        s.parse().map_err(|_| bad())
    }
}

// ---------------------------------------------------------------------------
// Model files
// ---------------------------------------------------------------------------

/// A probability in a model file: a JSON number or a rational string "n/d".
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProbValue {
    Number(f64),
    Rational(String),
}

impl ProbValue {
    /// Numeric value (rationals evaluated in binary floating point).
    pub fn value(&self) -> Result<f64> {
        match self {
            ProbValue::Number(v) => Ok(*v),
            ProbValue::Rational(s) => parse_prob(s),
        }
    }
}

/// Alphabet declaration: machines use `symbols`, transducers use `inputs`
/// and `outputs`.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphabetSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbols: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inputs: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outputs: Option<Vec<String>>,
}

/// One transition record; `input` is present only for transducers.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionRecord {
    pub from: String,
    pub to: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    pub output: String,
    pub prob: ProbValue,
}

/// On-disk model description. Probabilities are decimal literals or exact
/// rationals "n/d"; emitted files use plain numbers rendered so that they
/// re-parse to bit-identical values.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub kind: String,
    pub alphabets: AlphabetSpec,
    pub states: Vec<String>,
    pub transitions: Vec<TransitionRecord>,
}

/// A parsed model file: either kind of presentation.
#[derive(Debug, Clone)]
pub enum ParsedModel {
    Machine(MachinePresentation),
    Transducer(TransducerPresentation),
}

fn state_index(states: &[String], label: &str) -> Result<usize> {
    states
        .iter()
        .position(|s| s == label)
        .ok_or_else(|| Error::Validation(format!("unknown state label {label:?}")))
}

fn symbol_index(alphabet: &Alphabet, label: &str, role: &str) -> Result<usize> {
    alphabet
        .index(label)
        .ok_or_else(|| Error::Validation(format!("unknown {role} symbol {label:?}")))
}

impl ModelFile {
    /// Parses JSON text into a model file.
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("model file: {e}")))
    }

    /// Pretty JSON rendering; numbers round-trip bit-exactly.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("serializable");
        text.push('\n');
        text
    }

    /// Builds the presentation this file describes and validates it.
    pub fn to_model(&self) -> Result<ParsedModel> {
        match self.kind.as_str() {
            "machine" => {
                let symbols = self.alphabets.symbols.as_deref().ok_or_else(|| {
                    Error::Validation("machine files need alphabets.symbols".into())
                })?;
                let alphabet = Alphabet::new(symbols.iter().cloned())?;
                let n = self.states.len();
                let mut transitions = vec![DMatrix::<f64>::zeros(n, n); alphabet.len()];
                for rec in &self.transitions {
                    if rec.input.is_some() {
                        return Err(Error::Validation(
                            "machine transitions must not carry an input symbol".into(),
                        ));
                    }
                    let i = state_index(&self.states, &rec.from)?;
                    let j = state_index(&self.states, &rec.to)?;
                    let y = symbol_index(&alphabet, &rec.output, "output")?;
                    transitions[y][(i, j)] += rec.prob.value()?;
                }
                let m = MachinePresentation::new(self.states.clone(), alphabet, transitions)?;
                m.validate().require()?;
                Ok(ParsedModel::Machine(m))
            }
            "transducer" => {
                let inputs = self.alphabets.inputs.as_deref().ok_or_else(|| {
                    Error::Validation("transducer files need alphabets.inputs".into())
                })?;
                let outputs = self.alphabets.outputs.as_deref().ok_or_else(|| {
                    Error::Validation("transducer files need alphabets.outputs".into())
                })?;
                let inputs = Alphabet::new(inputs.iter().cloned())?;
                let outputs = Alphabet::new(outputs.iter().cloned())?;
                let n = self.states.len();
                let mut transitions =
                    vec![vec![DMatrix::<f64>::zeros(n, n); outputs.len()]; inputs.len()];
                for rec in &self.transitions {
                    let input = rec.input.as_deref().ok_or_else(|| {
                        Error::Validation("transducer transitions need an input symbol".into())
                    })?;
                    let i = state_index(&self.states, &rec.from)?;
                    let j = state_index(&self.states, &rec.to)?;
                    let x = symbol_index(&inputs, input, "input")?;
                    let y = symbol_index(&outputs, &rec.output, "output")?;
                    transitions[x][y][(i, j)] += rec.prob.value()?;
                }
                let t =
                    TransducerPresentation::new(self.states.clone(), inputs, outputs, transitions)?;
                t.validate().require()?;
                Ok(ParsedModel::Transducer(t))
            }
            other => Err(Error::Validation(format!(
                "unknown model kind {other:?} (expected \"machine\" or \"transducer\")"
            ))),
        }
    }

    /// Describes a machine as a model file (canonical transition order).
    pub fn from_machine(m: &MachinePresentation) -> Self {
        let mut transitions = Vec::new();
        for i in 0..m.n_states() {
            for y in 0..m.alphabet().len() {
                let t = m.matrix(y);
                for j in 0..m.n_states() {
                    let p = t[(i, j)];
                    if p > 0.0 {
                        transitions.push(TransitionRecord {
                            from: m.states()[i].clone(),
                            to: m.states()[j].clone(),
                            input: None,
                            output: m.alphabet().symbol(y).to_string(),
                            prob: ProbValue::Number(p),
                        });
                    }
                }
            }
        }
        ModelFile {
            kind: "machine".into(),
            alphabets: AlphabetSpec {
                symbols: Some(m.alphabet().symbols().to_vec()),
                ..Default::default()
            },
            states: m.states().to_vec(),
            transitions,
        }
    }

    /// Describes a transducer as a model file (canonical transition order).
    pub fn from_transducer(t: &TransducerPresentation) -> Self {
        let mut transitions = Vec::new();
        for i in 0..t.n_states() {
            for x in 0..t.inputs().len() {
                for y in 0..t.outputs().len() {
                    let m = t.matrix(x, y);
                    for j in 0..t.n_states() {
                        let p = m[(i, j)];
                        if p > 0.0 {
                            transitions.push(TransitionRecord {
                                from: t.states()[i].clone(),
                                to: t.states()[j].clone(),
                                input: Some(t.inputs().symbol(x).to_string()),
                                output: t.outputs().symbol(y).to_string(),
                                prob: ProbValue::Number(p),
                            });
                        }
                    }
                }
            }
        }
        ModelFile {
            kind: "transducer".into(),
            alphabets: AlphabetSpec {
                inputs: Some(t.inputs().symbols().to_vec()),
                outputs: Some(t.outputs().symbols().to_vec()),
                ..Default::default()
            },
            states: t.states().to_vec(),
            transitions,
        }
    }
}

/// Reads and parses a model file from disk.
pub fn load_model(path: &Path) -> Result<ParsedModel> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    ModelFile::parse(&text)?.to_model()
}

// ---------------------------------------------------------------------------
// CSV rendering
// ---------------------------------------------------------------------------

/// Fixed 9-decimal rendering used by every CSV (bits as the only unit).
pub(crate) fn fmt9(v: f64) -> String {
    if v == 0.0 {
        // normalize -0.0
        return format!("{:.9}", 0.0);
    }
    format!("{v:.9}")
}

fn push_cells(line: &mut String, cells: &[String]) {
    line.push_str(&cells.join(","));
    line.push('\n');
}

// ---------------------------------------------------------------------------
// Reference datasets (shared by `paper`, `sweep`, and the verification suite)
// ---------------------------------------------------------------------------

/// Reports for the two reference agents at one parameter point: A relays
/// the previous input (its measures depend only on the input bias `r`),
/// B is the noisy detector with false-negative rate `alpha`. Both are
/// driven by a coin with bias `r`.
pub fn agent_reports(alpha: f64, r: f64) -> Result<(ComplexityReport, ComplexityReport)> {
    let input = models::biased_coin(r)?;
    let a = quantum_complexity(&models::delay_channel(), &input, QuantumMode::Standard)?;
    let b = quantum_complexity(&models::bob(alpha)?, &input, QuantumMode::Standard)?;
    Ok((a, b))
}

/// Full scan of the two reference agents over an `n`×`n` cell-centered
/// (alpha, r) grid.
pub fn agent_scan(n: usize) -> Vec<RegionScanPoint> {
    let axis = centered_axis(n);
    let grid = product_grid(&axis, &axis);
    region_scan(&grid, |coords| agent_reports(coords[0], coords[1]))
}

/// Renders an agent scan as CSV (row-major grid order).
pub fn sweep_csv(points: &[RegionScanPoint]) -> Result<String> {
    let mut out = String::from("alpha,r,C_A,Q_A,E_A,C_B,Q_B,E_B,R1,R2,R3,R4\n");
    for p in points {
        let rp = p.outcome.as_ref().map_err(Error::clone)?;
        let q = |v: Option<f64>| fmt9(v.unwrap_or(f64::NAN));
        let f = |b: bool| if b { "1" } else { "0" }.to_string();
        push_cells(
            &mut out,
            &[
                fmt9(p.coords[0]),
                fmt9(p.coords[1]),
                fmt9(rp.a.c),
                q(rp.a.q),
                fmt9(rp.a.e),
                fmt9(rp.b.c),
                q(rp.b.q),
                fmt9(rp.b.e),
                f(rp.flags.r1),
                f(rp.flags.r2),
                f(rp.flags.r3),
                f(rp.flags.r4),
            ],
        );
    }
    Ok(out)
}

/// One point of a one-dimensional slice through the agent pair.
pub struct SliceRow {
    pub x: f64,
    pub a: ComplexityReport,
    pub b: ComplexityReport,
}

/// Slice over alpha at fixed input bias `r` (`n` cell-centered points).
pub fn alpha_slice(n: usize, r: f64) -> Result<Vec<SliceRow>> {
    centered_axis(n)
        .into_iter()
        .map(|alpha| {
            let (a, b) = agent_reports(alpha, r)?;
            Ok(SliceRow { x: alpha, a, b })
        })
        .collect()
}

/// Slice over the input bias r at fixed `alpha`.
pub fn bias_slice(n: usize, alpha: f64) -> Result<Vec<SliceRow>> {
    centered_axis(n)
        .into_iter()
        .map(|r| {
            let (a, b) = agent_reports(alpha, r)?;
            Ok(SliceRow { x: r, a, b })
        })
        .collect()
}

/// First and last slice coordinates whose direct verdict is ambiguous.
pub fn ambiguous_band(rows: &[SliceRow]) -> Option<(f64, f64)> {
    let mut lo = None;
    let mut hi = None;
    for row in rows {
        if classify(&row.a, &row.b).sufficient == Sufficiency::Ambiguous {
            lo.get_or_insert(row.x);
            hi = Some(row.x);
        }
    }
    Some((lo?, hi?))
}

fn slice_csv(rows: &[SliceRow], x_name: &str) -> String {
    let mut out = format!("{x_name},C_A,Q_A,E_A,C_B,Q_B,E_B,ambiguous\n");
    for row in rows {
        let amb = classify(&row.a, &row.b).sufficient == Sufficiency::Ambiguous;
        push_cells(
            &mut out,
            &[
                fmt9(row.x),
                fmt9(row.a.c),
                fmt9(row.a.q.unwrap_or(f64::NAN)),
                fmt9(row.a.e),
                fmt9(row.b.c),
                fmt9(row.b.q.unwrap_or(f64::NAN)),
                fmt9(row.b.e),
                if amb { "1" } else { "0" }.to_string(),
            ],
        );
    }
    out
}

/// One point of the adaptive-investor curve: the same strategy driven by
/// two different markets. `q` uses the reference overlap family (the
/// flat/engaged overlap capped at √(4/7)); `q_saturating` uses the fidelity
/// fixed point of the strategy itself.
pub struct InvestorRow {
    pub q1: f64,
    pub c: [f64; 2],
    pub q: [f64; 2],
    pub q_saturating: [f64; 2],
}

impl InvestorRow {
    pub fn dc(&self) -> f64 {
        self.c[0] - self.c[1]
    }

    pub fn dq(&self) -> f64 {
        self.q[0] - self.q[1]
    }
}

/// The investor curve over `n` cell-centered values of the crash-recovery
/// parameter q₁.
pub fn investor_rows(n: usize) -> Result<Vec<InvestorRow>> {
    let inputs = [models::investor_input_one(), models::investor_input_two()];
    centered_axis(n)
        .into_iter()
        .map(|q1| {
            let t = models::investor(models::InvestorParams::default_with_q1(q1))?;
            // Reference overlap family: flat and engaged states overlap at
            // min{√(4/7), √(0.99 (1 − q₁))}; the cautious state is orthogonal.
            let f_fe = models::investor_fe_fidelity(3.0 / 7.0, q1);
            let mut reference = DMatrix::<f64>::identity(3, 3);
            reference[(0, 2)] = f_fe;
            reference[(2, 0)] = f_fe;
            let fixed_point = fidelity_constraints(&t)?;
            let mut c = [0.0; 2];
            let mut q = [0.0; 2];
            let mut q_saturating = [0.0; 2];
            for (k, input) in inputs.iter().enumerate() {
                let pi = driven_stationary(&t, input)?;
                c[k] = statistical_complexity(&pi);
                q[k] = von_neumann_entropy(&GramEnsemble::new(pi.clone(), reference.clone())?)?;
                q_saturating[k] =
                    von_neumann_entropy(&GramEnsemble::new(pi, fixed_point.clone())?)?;
            }
            Ok(InvestorRow {
                q1,
                c,
                q,
                q_saturating,
            })
        })
        .collect()
}

/// First and last q₁ where the classical and quantum differences have
/// strictly opposite signs (dead band applied).
pub fn investor_band(rows: &[InvestorRow]) -> Option<(f64, f64)> {
    let mut lo = None;
    let mut hi = None;
    for row in rows {
        let (dc, dq) = (row.dc(), row.dq());
        if crate::ambiguity::Sign::of(dc).opposes(crate::ambiguity::Sign::of(dq)) {
            lo.get_or_insert(row.q1);
            hi = Some(row.q1);
        }
    }
    Some((lo?, hi?))
}

fn investor_csv(rows: &[InvestorRow]) -> String {
    let mut out = String::from("q1,C_1,Q_1,C_2,Q_2,dC,dQ,Q_sat_1,Q_sat_2\n");
    for row in rows {
        push_cells(
            &mut out,
            &[
                fmt9(row.q1),
                fmt9(row.c[0]),
                fmt9(row.q[0]),
                fmt9(row.c[1]),
                fmt9(row.q[1]),
                fmt9(row.dc()),
                fmt9(row.dq()),
                fmt9(row.q_saturating[0]),
                fmt9(row.q_saturating[1]),
            ],
        );
    }
    out
}

/// One point of the spin-mapper comparison: two mappers driven by the same
/// coin, with the measures of the driven channels and of their output
/// processes side by side.
pub struct ChannelOutputRow {
    pub r: f64,
    /// (C, Q) of each driven channel.
    pub agents: [(f64, f64); 2],
    /// (C, Q) of each output process.
    pub outputs: [(f64, f64); 2],
}

impl ChannelOutputRow {
    pub fn dc(&self) -> f64 {
        self.agents[0].0 - self.agents[1].0
    }

    pub fn dq(&self) -> f64 {
        self.agents[0].1 - self.agents[1].1
    }

    pub fn dc_out(&self) -> f64 {
        self.outputs[0].0 - self.outputs[1].0
    }

    pub fn dq_out(&self) -> f64 {
        self.outputs[0].1 - self.outputs[1].1
    }

    /// Case label: which of the two comparisons invert their orderings.
    /// "ii" = both, "iv" = channels only, "iii" = outputs only, "i" =
    /// neither; "tie" when any difference sits inside the dead band.
    pub fn case(&self) -> &'static str {
        let band = crate::ambiguity::DEAD_BAND;
        let ds = [self.dc(), self.dq(), self.dc_out(), self.dq_out()];
        if ds.iter().any(|d| d.abs() <= band) {
            return "tie";
        }
        let agents_inverted = ds[0].signum() != ds[1].signum();
        let outputs_inverted = ds[2].signum() != ds[3].signum();
        match (agents_inverted, outputs_inverted) {
            (true, true) => "ii",
            (true, false) => "iv",
            (false, true) => "iii",
            (false, false) => "i",
        }
    }
}

/// The two bundled spin-mapper parameter pairs.
pub const MAPPER_PAIRS: [(f64, f64); 2] = [(0.0, 0.7), (2.0 / 3.0, 0.7)];

/// Channel-vs-output curves for the two bundled mappers over `n`
/// cell-centered input biases.
pub fn channel_output_rows(n: usize) -> Result<Vec<ChannelOutputRow>> {
    let mappers = [
        models::ising_mapper(MAPPER_PAIRS[0].0, MAPPER_PAIRS[0].1)?,
        models::ising_mapper(MAPPER_PAIRS[1].0, MAPPER_PAIRS[1].1)?,
    ];
    centered_axis(n)
        .into_iter()
        .map(|r| {
            let input = models::biased_coin(r)?;
            let mut agents = [(0.0, 0.0); 2];
            let mut outputs = [(0.0, 0.0); 2];
            for (k, t) in mappers.iter().enumerate() {
                let pi = driven_stationary(t, &input)?;
                let c = statistical_complexity(&pi);
                let q = von_neumann_entropy(&GramEnsemble::new(pi, standard_overlaps(t))?)?;
                agents[k] = (c, q);
                let om = output_process(t, &input)?;
                let pi_o = om.stationary()?;
                let c_o = statistical_complexity(&pi_o);
                let wrapped = TransducerPresentation::from_machine(&om);
                let q_o =
                    von_neumann_entropy(&GramEnsemble::new(pi_o, standard_overlaps(&wrapped))?)?;
                outputs[k] = (c_o, q_o);
            }
            Ok(ChannelOutputRow { r, agents, outputs })
        })
        .collect()
}

fn channel_output_csv(rows: &[ChannelOutputRow]) -> String {
    let mut out = String::from(
        "r,C_1,Q_1,C_out_1,Q_out_1,C_2,Q_2,C_out_2,Q_out_2,dC,dQ,dC_out,dQ_out,case\n",
    );
    for row in rows {
        push_cells(
            &mut out,
            &[
                fmt9(row.r),
                fmt9(row.agents[0].0),
                fmt9(row.agents[0].1),
                fmt9(row.outputs[0].0),
                fmt9(row.outputs[0].1),
                fmt9(row.agents[1].0),
                fmt9(row.agents[1].1),
                fmt9(row.outputs[1].0),
                fmt9(row.outputs[1].1),
                fmt9(row.dc()),
                fmt9(row.dq()),
                fmt9(row.dc_out()),
                fmt9(row.dq_out()),
                row.case().to_string(),
            ],
        );
    }
    out
}

/// The bundled inversion example: the ternary relay channel under its
/// two-state input, and its completed inverse under the channel's output
/// process. Returns (forward report, inverse report).
pub fn inversion_reports() -> Result<(ComplexityReport, ComplexityReport)> {
    let t = models::ternary_channel_default();
    let input = models::ternary_input();
    let forward = quantum_complexity(&t, &input, QuantumMode::Standard)?;
    let om = output_process(&t, &input)?;
    let inverse = invert_channel(&t, &input, CompletionPolicy::SelfLoop)?;
    let inverse_report = quantum_complexity(&inverse, &om, QuantumMode::Standard)?;
    Ok((forward, inverse_report))
}

fn inversion_csv() -> Result<String> {
    let (fwd, inv) = inversion_reports()?;
    let mut out = String::from("C_forward,C_inverse,Q_forward,Q_inverse\n");
    push_cells(
        &mut out,
        &[
            fmt9(fwd.c),
            fmt9(inv.c),
            fmt9(fwd.q.unwrap_or(f64::NAN)),
            fmt9(inv.q.unwrap_or(f64::NAN)),
        ],
    );
    Ok(out)
}

/// One row of the cyclic-family dataset: the solver hits a target classical
/// complexity on the one-parameter slice, and the driven pipeline confirms
/// C = Q (all memory states orthogonal).
pub struct CyclicRow {
    pub n: usize,
    pub target: f64,
    pub s: f64,
    pub c: f64,
    pub q: f64,
}

/// Cyclic-family rows: for each n in 2..=5, five targets spread over
/// (0, log₂ n].
pub fn cyclic_rows() -> Result<Vec<CyclicRow>> {
    let input = models::biased_coin(0.5)?;
    let mut rows = Vec::new();
    for n in 2..=5usize {
        let max = (n as f64).log2();
        for k in 1..=5usize {
            let target = max * k as f64 / 6.0;
            let qs = models::solve_target_complexity(n, target, &input)?;
            let s = qs[0];
            let t = models::tn(&qs)?;
            let pi = driven_stationary(&t, &input)?;
            let c = statistical_complexity(&pi);
            let q = von_neumann_entropy(&GramEnsemble::new(pi, standard_overlaps(&t))?)?;
            rows.push(CyclicRow { n, target, s, c, q });
        }
    }
    Ok(rows)
}

fn cyclic_csv(rows: &[CyclicRow]) -> String {
    let mut out = String::from("n,target,s,C,Q\n");
    for row in rows {
        push_cells(
            &mut out,
            &[
                row.n.to_string(),
                fmt9(row.target),
                fmt9(row.s),
                fmt9(row.c),
                fmt9(row.q),
            ],
        );
    }
    out
}

/// Renders one bundled dataset by id. Ids are stable interface tokens:
/// fig7 and fig10 are the full agent sweep, fig8/fig9 the two slices,
/// fig13 the investor curve, fig18 the channel-vs-output curves,
/// `inversion` the relay quartet, and `tn` the cyclic family.
pub fn paper_csv(id: &str) -> Result<String> {
    match id {
        "fig7" | "fig10" => sweep_csv(&agent_scan(200)),
        "fig8" => Ok(slice_csv(&alpha_slice(500, 0.2)?, "alpha")),
        "fig9" => Ok(slice_csv(&bias_slice(500, 0.5)?, "r")),
        "fig13" => Ok(investor_csv(&investor_rows(500)?)),
        "fig18" => Ok(channel_output_csv(&channel_output_rows(400)?)),
        "inversion" => inversion_csv(),
        "tn" => Ok(cyclic_csv(&cyclic_rows()?)),
        other => Err(Error::UnknownName(format!(
            "unknown dataset id {other:?} (expected fig7, fig8, fig9, fig10, fig13, fig18, inversion, or tn)"
        ))),
    }
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, ValueEnum, Default)]
enum ModeArg {
    #[default]
    Standard,
    Saturating,
}

impl From<ModeArg> for QuantumMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Standard => QuantumMode::Standard,
            ModeArg::Saturating => QuantumMode::Saturating,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum, Default)]
enum PolicyArg {
    #[default]
    SelfLoop,
    Uniform,
}

impl From<PolicyArg> for CompletionPolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::SelfLoop => CompletionPolicy::SelfLoop,
            PolicyArg::Uniform => CompletionPolicy::Uniform,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "epsilon-lab",
    version,
    about = "Memory measures of stochastic processes and adaptive strategies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the memory measures (E, Q, C) of a model file.
    Analyze {
        /// Machine or transducer model file (JSON).
        model: PathBuf,
        /// Input machine file (required for transducers).
        input: Option<PathBuf>,
        /// Overlap family for Q.
        #[arg(long, value_enum, default_value_t)]
        mode: ModeArg,
        /// Emit CSV instead of text.
        #[arg(long)]
        csv: bool,
    },
    /// Write one of the bundled reference datasets as CSV.
    Paper {
        /// Dataset id: fig7, fig8, fig9, fig10, fig13, fig18, inversion, tn.
        id: String,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Invert a channel under an input and write the inverse as a model file.
    Invert {
        /// Transducer model file (JSON).
        model: PathBuf,
        /// Input machine file (JSON).
        input: PathBuf,
        /// Free-slot completion policy.
        #[arg(long, value_enum, default_value_t)]
        policy: PolicyArg,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also report the round-trip distance TV(input, reproduction).
        #[arg(long)]
        check_round_trip: bool,
    },
    /// Sample a seeded trajectory and optional empirical word statistics.
    Simulate {
        /// Machine or transducer model file (JSON).
        model: PathBuf,
        /// Input machine file (required for transducers).
        input: Option<PathBuf>,
        /// Number of symbols to emit.
        #[arg(long)]
        length: usize,
        /// Seed for the fixed chacha20 generator.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also compare empirical block-L word frequencies to the analytic
        /// distribution (total variation).
        #[arg(long)]
        block: Option<usize>,
        /// Write the trajectory to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scan the two reference agents over an (alpha, r) grid.
    Sweep {
        /// Grid points per axis.
        #[arg(long, default_value_t = 200)]
        grid: usize,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the bundled verification checks.
    Verify,
}

fn write_or_return(text: String, out: Option<&Path>, what: &str) -> Result<String> {
    match out {
        Some(path) => {
            std::fs::write(path, &text)
                .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            Ok(format!(
                "wrote {what} to {} ({} bytes)\n",
                path.display(),
                text.len()
            ))
        }
        None => Ok(text),
    }
}

/// `analyze`: memory measures of one model (machine alone, or transducer
/// plus input machine).
pub fn cmd_analyze(
    model: &Path,
    input: Option<&Path>,
    mode: QuantumMode,
    csv: bool,
) -> Result<String> {
    let report = match (load_model(model)?, input) {
        (ParsedModel::Machine(m), None) => crate::quantum::machine_complexity(&m, mode)?,
        (ParsedModel::Machine(_), Some(_)) => {
            return Err(Error::Validation(
                "a machine takes no input model; pass a transducer to drive".into(),
            ))
        }
        (ParsedModel::Transducer(_), None) => {
            return Err(Error::Validation(
                "a transducer needs an input machine file".into(),
            ))
        }
        (ParsedModel::Transducer(t), Some(path)) => match load_model(path)? {
            ParsedModel::Machine(m) => quantum_complexity(&t, &m, mode)?,
            ParsedModel::Transducer(_) => {
                return Err(Error::Validation(
                    "the input model must be a machine, not a transducer".into(),
                ))
            }
        },
    };
    let q = report.q.unwrap_or(f64::NAN);
    if csv {
        let mut out = String::from("quantity,bits\n");
        push_cells(&mut out, &["E".into(), fmt9(report.e)]);
        push_cells(&mut out, &["Q".into(), fmt9(q)]);
        push_cells(&mut out, &["C".into(), fmt9(report.c)]);
        Ok(out)
    } else {
        let note = if report.e_converged {
            ""
        } else {
            " (lower bound; estimate did not converge)"
        };
        Ok(format!(
            "E = {} bits{note}\nQ = {} bits\nC = {} bits\n",
            fmt9(report.e),
            fmt9(q),
            fmt9(report.c),
        ))
    }
}

/// `paper`: render a bundled dataset.
pub fn cmd_paper(id: &str, out: Option<&Path>) -> Result<String> {
    let csv = paper_csv(id)?;
    write_or_return(csv, out, &format!("dataset {id}"))
}

/// `invert`: invert a channel under an input and emit the inverse as a
/// model file (which round-trips through the parser).
pub fn cmd_invert(
    model: &Path,
    input: &Path,
    policy: CompletionPolicy,
    out: Option<&Path>,
    check_round_trip: bool,
) -> Result<String> {
    let t = match load_model(model)? {
        ParsedModel::Transducer(t) => t,
        ParsedModel::Machine(_) => {
            return Err(Error::Validation("only transducers can be inverted".into()))
        }
    };
    let m = match load_model(input)? {
        ParsedModel::Machine(m) => m,
        ParsedModel::Transducer(_) => {
            return Err(Error::Validation(
                "the input model must be a machine, not a transducer".into(),
            ))
        }
    };
    let inverse = invert_channel(&t, &m, policy)?;
    let mut text = write_or_return(
        ModelFile::from_transducer(&inverse).to_json(),
        out,
        "inverse model",
    )?;
    if check_round_trip {
        let om = output_process(&t, &m)?;
        let reproduced = output_presentation(&inverse, &om)?;
        let mut worst: f64 = 0.0;
        for length in 1..=6 {
            let original = word_distribution(&m, length, 0.0)?;
            let image = word_distribution(&reproduced, length, 0.0)?;
            worst = worst.max(original.total_variation(&image)?);
        }
        let _ = writeln!(
            text,
            "round trip: max TV over lengths 1..=6 = {:.3e}",
            worst
        );
    }
    Ok(text)
}

/// `simulate`: sample a seeded trajectory; optionally compare block-L
/// empirical word frequencies against the analytic distribution.
pub fn cmd_simulate(
    model: &Path,
    input: Option<&Path>,
    length: usize,
    seed: u64,
    block: Option<usize>,
    out: Option<&Path>,
) -> Result<String> {
    let (traj, analytic_source): (Trajectory, MachinePresentation) =
        match (load_model(model)?, input) {
            (ParsedModel::Machine(m), None) => (sample_path(&m, length, seed)?, m),
            (ParsedModel::Machine(_), Some(_)) => {
                return Err(Error::Validation(
                    "a machine takes no input model; pass a transducer to drive".into(),
                ))
            }
            (ParsedModel::Transducer(_), None) => {
                return Err(Error::Validation(
                    "a transducer needs an input machine file".into(),
                ))
            }
            (ParsedModel::Transducer(t), Some(path)) => match load_model(path)? {
                ParsedModel::Machine(m) => {
                    let joint = joint_machine(&t, &m)?;
                    (sample_path(&joint, length, seed)?, joint)
                }
                ParsedModel::Transducer(_) => {
                    return Err(Error::Validation(
                        "the input model must be a machine, not a transducer".into(),
                    ))
                }
            },
        };
    let mut stats = String::new();
    if let Some(block) = block {
        let empirical = empirical_word_distribution(&traj, block)?;
        let analytic = word_distribution(&analytic_source, block, 0.0)?;
        let tv = total_variation(&empirical, &analytic)?;
        let _ = writeln!(stats, "TV@L={block} = {}", fmt9(tv));
    }
    let mut text = write_or_return(render_trajectory(&traj), out, "trajectory")?;
    text.push_str(&stats);
    Ok(text)
}

#[derive(Serialize)]
struct TrajectoryHeader<'a> {
    seed: u64,
    generator: &'static str,
    length: usize,
    alphabet: &'a [String],
    states: &'a [String],
}

/// Three-line trajectory format: a JSON header, the emitted symbol labels,
/// and the visited state labels (space-separated).
pub fn render_trajectory(traj: &Trajectory) -> String {
    let header = TrajectoryHeader {
        seed: traj.seed(),
        generator: traj.generator(),
        length: traj.len(),
        alphabet: traj.alphabet().symbols(),
        states: traj.state_labels(),
    };
    let mut out = serde_json::to_string(&header).expect("serializable");
    out.push('\n');
    out.push_str(&traj.symbol_labels().join(" "));
    out.push('\n');
    out.push_str(&traj.visited_labels().join(" "));
    out.push('\n');
    out
}

/// `sweep`: agent scan at a configurable grid size.
pub fn cmd_sweep(grid: usize, out: Option<&Path>) -> Result<String> {
    if grid == 0 {
        return Err(Error::Validation("grid must be at least 1".into()));
    }
    let csv = sweep_csv(&agent_scan(grid))?;
    write_or_return(csv, out, "sweep")
}

/// `verify`: run every bundled check; returns the report and whether all
/// checks passed.
pub fn cmd_verify() -> (String, bool) {
    let results = crate::verify::run_all();
    let mut out = String::new();
    let mut all = true;
    for r in &results {
        all &= r.passed;
        let _ = writeln!(
            out,
            "{} {:2}  {} — {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.id,
            r.name,
            r.details
        );
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    let _ = writeln!(
        out,
        "{} of {} checks passed",
        results.len() - failed,
        results.len()
    );
    (out, all)
}

/// Entry point for the binary: parses arguments, runs the command, prints
/// its output, and returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Analyze {
            model,
            input,
            mode,
            csv,
        } => cmd_analyze(&model, input.as_deref(), mode.into(), csv),
        Command::Paper { id, out } => cmd_paper(&id, out.as_deref()),
        Command::Invert {
            model,
            input,
            policy,
            out,
            check_round_trip,
        } => cmd_invert(
            &model,
            &input,
            policy.into(),
            out.as_deref(),
            check_round_trip,
        ),
        Command::Simulate {
            model,
            input,
            length,
            seed,
            block,
            out,
        } => cmd_simulate(
            &model,
            input.as_deref(),
            length,
            seed,
            block,
            out.as_deref(),
        ),
        Command::Sweep { grid, out } => cmd_sweep(grid, out.as_deref()),
        Command::Verify => {
            let (text, ok) = cmd_verify();
            print!("{text}");
            return if ok {
                0
            } else {
                eprintln!("error: verification checks failed");
                3
            };
        }
    };
    match result {
        Ok(text) => {
            print!("{text}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use approx::assert_abs_diff_eq;
    use nalgebra::dmatrix;

    #[test]
    fn probabilities_parse_as_decimals_and_rationals() {
        assert_eq!(parse_prob("0.25").unwrap(), 0.25);
        assert_eq!(parse_prob("1/4").unwrap(), 0.25);
        assert_eq!(parse_prob(" 2 / 8 ").unwrap(), 0.25);
        assert_eq!(parse_prob("1e-3").unwrap(), 1e-3);
        assert!(parse_prob("1/0").is_err());
        assert!(parse_prob("abc").is_err());
    }

    #[test]
    fn machine_files_round_trip_bit_exactly() {
        let m = models::biased_coin(1.0 / 3.0).unwrap();
        let json = ModelFile::from_machine(&m).to_json();
        let back = match ModelFile::parse(&json).unwrap().to_model().unwrap() {
            ParsedModel::Machine(m) => m,
            _ => panic!("expected machine"),
        };
        assert_eq!(back.states(), m.states());
        for y in 0..2 {
            assert_eq!(back.matrix(y), m.matrix(y)); // bit-exact
        }
    }

    #[test]
    fn transducer_files_round_trip_bit_exactly() {
        let t = models::bob(0.3).unwrap();
        let json = ModelFile::from_transducer(&t).to_json();
        let back = match ModelFile::parse(&json).unwrap().to_model().unwrap() {
            ParsedModel::Transducer(t) => t,
            _ => panic!("expected transducer"),
        };
        assert_eq!(back.states(), t.states());
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(back.matrix(x, y), t.matrix(x, y));
            }
        }
    }

    #[test]
    fn rational_probabilities_load_exactly() {
        let json = r#"{
            "kind": "machine",
            "alphabets": {"symbols": ["0", "1"]},
            "states": ["s"],
            "transitions": [
                {"from": "s", "to": "s", "output": "0", "prob": "1/3"},
                {"from": "s", "to": "s", "output": "1", "prob": "2/3"}
            ]
        }"#;
        let m = match ModelFile::parse(json).unwrap().to_model().unwrap() {
            ParsedModel::Machine(m) => m,
            _ => panic!("expected machine"),
        };
        assert_eq!(m.matrix(0)[(0, 0)], 1.0 / 3.0);
        assert_eq!(m.matrix(1)[(0, 0)], 2.0 / 3.0);
    }

    #[test]
    fn malformed_and_invalid_files_classify_separately() {
        let garbled = ModelFile::parse("{not json");
        assert!(matches!(garbled, Err(Error::Parse(_))));
        // Parses but the row sums exceed one: a validation error.
        let json = r#"{
            "kind": "machine",
            "alphabets": {"symbols": ["0"]},
            "states": ["s"],
            "transitions": [
                {"from": "s", "to": "s", "output": "0", "prob": 1.5}
            ]
        }"#;
        let invalid = ModelFile::parse(json).unwrap().to_model();
        assert!(invalid.is_err());
        assert_eq!(invalid.unwrap_err().exit_code(), 2);
    }

    #[test]
    fn slice_band_matches_the_reference_window() {
        let rows = alpha_slice(100, 0.2).unwrap();
        let (lo, hi) = ambiguous_band(&rows).unwrap();
        assert!((lo - 0.30).abs() < 0.03, "lo = {lo}");
        assert!((hi - 0.68).abs() < 0.03, "hi = {hi}");
    }

    #[test]
    fn dataset_ids_are_validated() {
        assert!(matches!(paper_csv("fig99"), Err(Error::UnknownName(_))));
    }

    #[test]
    fn inversion_dataset_matches_reference_quartet() {
        let csv = inversion_csv().unwrap();
        let line = csv.lines().nth(1).unwrap();
        let cells: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert_abs_diff_eq!(cells[0], 1.290715416, epsilon = 5e-10);
        assert_abs_diff_eq!(cells[1], 0.918295834, epsilon = 5e-10);
        assert_abs_diff_eq!(cells[2], 0.336403943, epsilon = 5e-10);
        assert_abs_diff_eq!(cells[3], 0.550047760, epsilon = 5e-10);
    }

    #[test]
    fn analyze_reports_nine_decimals() {
        // Two-state chain: state a holds with probability 0.8, state b always
        // returns, so π = (5/6, 1/6) and C = H(1/6) = 0.650022421648…
        let m = MachinePresentation::new(
            vec!["a".into(), "b".into()],
            Alphabet::binary(),
            vec![dmatrix![0.8, 0.0; 1.0, 0.0], dmatrix![0.0, 0.2; 0.0, 0.0]],
        )
        .unwrap();
        let dir = std::env::temp_dir().join("epsilon-lab-test-analyze");
        std::fs::create_dir_all(&dir).unwrap();
        let model = dir.join("hold.json");
        std::fs::write(&model, ModelFile::from_machine(&m).to_json()).unwrap();
        let text = cmd_analyze(&model, None, QuantumMode::Standard, false).unwrap();
        assert!(text.contains("C = 0.650022422 bits"), "{text}");
        assert!(text.starts_with("E = "), "{text}");
        std::fs::remove_dir_all(&dir).ok();
    }
}
