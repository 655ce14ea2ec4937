//! Quantum memory for stationary channels and sources: pairwise overlap
//! bounds (the maximum-fidelity fixed point), the standard √-amplitude
//! encoding, explicit state construction from target overlaps, and the von
//! Neumann entropy Q of the weighted Gram ensemble.

use nalgebra::{DMatrix, DVector};

use crate::algebra::driven_stationary;
use crate::error::{Error, Result};
use crate::info::channel_excess_entropy_estimate;
use crate::model::{
    statistical_complexity, MachinePresentation, StationaryDistribution, SuccessorMap,
    TransducerPresentation, SUPPORT_TOL,
};

/// Eigenvalues below this are treated as zero in entropy sums.
pub const EIGENVALUE_CUTOFF: f64 = 1e-12;
/// Fidelity fixed-point iteration stops when the max entrywise change is
/// below this.
pub const FIDELITY_TOL: f64 = 1e-12;
/// Iteration cap for the fidelity fixed point.
pub const FIDELITY_MAX_ITERATIONS: usize = 100_000;
/// Eigenvalue slack for positive-semidefiniteness checks.
pub const PSD_SLACK: f64 = 1e-10;
/// Largest explicit encoding dimension `(|Y|·N)^{|X|}` that will be
/// materialized as concrete vectors.
const MAX_ENCODING_DIM: usize = 1 << 16;

// ---------------------------------------------------------------------------
// Encodings
// ---------------------------------------------------------------------------

/// A set of real, non-negative-amplitude memory states, one vector per
/// causal state, in a shared orthonormal basis.
#[derive(Debug, Clone)]
pub struct QuantumEncoding {
    vectors: Vec<DVector<f64>>,
}

impl QuantumEncoding {
    /// One unit vector per state.
    pub fn vectors(&self) -> &[DVector<f64>] {
        &self.vectors
    }

    /// Number of encoded states.
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    /// True when no states are encoded.
    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Basis dimension.
    pub fn dim(&self) -> usize {
        self.vectors.first().map_or(0, DVector::len)
    }

    /// Inner product ⟨s_i|s_j⟩.
    pub fn overlap(&self, i: usize, j: usize) -> f64 {
        self.vectors[i].dot(&self.vectors[j])
    }

    /// All pairwise inner products.
    pub fn overlap_matrix(&self) -> DMatrix<f64> {
        let n = self.len();
        DMatrix::from_fn(n, n, |i, j| self.overlap(i, j))
    }

    /// Density matrix Σ_i π_i |s_i⟩⟨s_i| of the ensemble with weights `pi`.
    /// For spectra, prefer [`GramEnsemble`]: it carries the same non-zero
    /// eigenvalues at the size of the state count, while factoring a large
    /// rank-deficient embedding like this one can be numerically fragile.
    pub fn density_matrix(&self, pi: &StationaryDistribution) -> DMatrix<f64> {
        let d = self.dim();
        let mut rho = DMatrix::<f64>::zeros(d, d);
        for (v, &p) in self.vectors.iter().zip(pi.probabilities()) {
            if p > 0.0 {
                rho.ger(p, v, v, 1.0);
            }
        }
        rho
    }
}

// ---------------------------------------------------------------------------
// Fidelity fixed point
// ---------------------------------------------------------------------------

fn fidelity_step(
    t: &TransducerPresentation,
    succ: &SuccessorMap,
    f: &DMatrix<f64>,
) -> DMatrix<f64> {
    let n = t.n_states();
    let mut next = DMatrix::<f64>::identity(n, n);
    for s in 0..n {
        for s2 in (s + 1)..n {
            let mut best = f64::INFINITY;
            for x in 0..t.inputs().len() {
                let mut sum = 0.0;
                for y in 0..t.outputs().len() {
                    let p = t.emission_prob(s, x, y);
                    let p2 = t.emission_prob(s2, x, y);
                    if p > SUPPORT_TOL && p2 > SUPPORT_TOL {
                        let l = succ.get(s, x, y).expect("support implies successor");
                        let l2 = succ.get(s2, x, y).expect("support implies successor");
                        sum += (p * p2).sqrt() * f[(l, l2)];
                    }
                }
                best = best.min(sum);
            }
            next[(s, s2)] = best;
            next[(s2, s)] = best;
        }
    }
    next
}

/// Greatest fixed point (below the all-ones start) of the pairwise
/// maximum-fidelity recursion
/// `F_ss' = min_x Σ_y √(p(y|x,s) p(y|x,s')) F_{λ(s,x,y) λ(s',x,y)}`.
/// Any faithful encoding's overlaps are bounded entrywise by this matrix.
pub fn fidelity_constraints(t: &TransducerPresentation) -> Result<DMatrix<f64>> {
    let succ = t.successor_map()?;
    let n = t.n_states();
    let mut f = DMatrix::<f64>::from_element(n, n, 1.0);
    let mut residual = f64::INFINITY;
    for round in 0..FIDELITY_MAX_ITERATIONS {
        let next = fidelity_step(t, &succ, &f);
        residual = (&next - &f).amax();
        f = next;
        if residual < FIDELITY_TOL {
            return Ok(f);
        }
        // The map is a minimum of per-input affine maps, so once the
        // minimizing input of each pair has settled the fixed point solves
        // a linear system exactly. Near-critical contraction rates make
        // plain iteration arbitrarily slow; the solve finishes those
        // instances. A candidate is accepted only if it is a verified
        // fixed point of the full map, at or below the current monotone
        // upper envelope.
        if round >= 100 && round % 100 == 0 {
            if let Some(g) = solve_frozen_policy(t, &succ, &f) {
                let stepped = fidelity_step(t, &succ, &g);
                let fixed = (&stepped - &g).amax() <= FIDELITY_TOL;
                let below = g.iter().zip(f.iter()).all(|(&gi, &fi)| gi <= fi + 1e-9);
                if fixed && below {
                    return Ok(g);
                }
            }
        }
    }
    Err(Error::FidelityNonConvergence {
        last: f.iter().copied().collect(),
        residual,
        iterations: FIDELITY_MAX_ITERATIONS,
    })
}

/// Solves the fidelity fixed point for the per-pair minimizing inputs
/// frozen at the current iterate `f`: each off-diagonal pair satisfies
/// `F_p = Σ coeff(p → p') F_p' + b_p`, with same-successor terms feeding
/// the constant `b`. Returns `None` when the frozen system is singular.
fn solve_frozen_policy(
    t: &TransducerPresentation,
    succ: &SuccessorMap,
    f: &DMatrix<f64>,
) -> Option<DMatrix<f64>> {
    let n = t.n_states();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|s| ((s + 1)..n).map(move |s2| (s, s2)))
        .collect();
    if pairs.is_empty() {
        return Some(DMatrix::from_element(n, n, 1.0));
    }
    let index = |s: usize, s2: usize| s * n - s * (s + 1) / 2 + (s2 - s - 1);
    let count = pairs.len();
    let mut a = DMatrix::<f64>::zeros(count, count);
    let mut b = DVector::<f64>::zeros(count);
    for (p, &(s, s2)) in pairs.iter().enumerate() {
        let mut best_x = 0;
        let mut best = f64::INFINITY;
        for x in 0..t.inputs().len() {
            let mut sum = 0.0;
            for y in 0..t.outputs().len() {
                let pe = t.emission_prob(s, x, y);
                let pe2 = t.emission_prob(s2, x, y);
                if pe > SUPPORT_TOL && pe2 > SUPPORT_TOL {
                    let l = succ.get(s, x, y).expect("support implies successor");
                    let l2 = succ.get(s2, x, y).expect("support implies successor");
                    sum += (pe * pe2).sqrt() * f[(l, l2)];
                }
            }
            if sum < best {
                best = sum;
                best_x = x;
            }
        }
        for y in 0..t.outputs().len() {
            let pe = t.emission_prob(s, best_x, y);
            let pe2 = t.emission_prob(s2, best_x, y);
            if pe > SUPPORT_TOL && pe2 > SUPPORT_TOL {
                let l = succ.get(s, best_x, y).expect("support implies successor");
                let l2 = succ.get(s2, best_x, y).expect("support implies successor");
                let coeff = (pe * pe2).sqrt();
                if l == l2 {
                    b[p] += coeff;
                } else {
                    a[(p, index(l.min(l2), l.max(l2)))] += coeff;
                }
            }
        }
    }
    let system = DMatrix::identity(count, count) - a;
    let solved = system.lu().solve(&b)?;
    let mut g = DMatrix::<f64>::from_element(n, n, 1.0);
    for (p, &(s, s2)) in pairs.iter().enumerate() {
        let v = solved[p].clamp(0.0, 1.0);
        g[(s, s2)] = v;
        g[(s2, s)] = v;
    }
    Some(g)
}

// ---------------------------------------------------------------------------
// Standard encoding
// ---------------------------------------------------------------------------

/// Pairwise overlaps of the standard √-amplitude encoding:
/// `c_ij = Π_x Σ_{y,k} √(T^(y|x)_ik T^(y|x)_jk)`.
pub fn standard_overlaps(t: &TransducerPresentation) -> DMatrix<f64> {
    let n = t.n_states();
    DMatrix::from_fn(n, n, |i, j| {
        let mut prod = 1.0;
        for x in 0..t.inputs().len() {
            let mut sum = 0.0;
            for y in 0..t.outputs().len() {
                let m = t.matrix(x, y);
                for k in 0..n {
                    let a = m[(i, k)];
                    let b = m[(j, k)];
                    if a > 0.0 && b > 0.0 {
                        sum += (a * b).sqrt();
                    }
                }
            }
            prod *= sum;
        }
        prod
    })
}

/// Explicit standard-encoding vectors: per input `x` the factor
/// `|s_i^x⟩ = Σ_{y,k} √(T^(y|x)_ik) |y,k⟩`, and `|s_i⟩ = ⊗_x |s_i^x⟩`.
/// Errors when the product dimension exceeds an internal cap.
pub fn standard_encoding(t: &TransducerPresentation) -> Result<QuantumEncoding> {
    let n = t.n_states();
    let n_in = t.inputs().len();
    let n_out = t.outputs().len();
    let factor_dim = n_out * n;
    let dim = factor_dim
        .checked_pow(n_in as u32)
        .filter(|&d| d <= MAX_ENCODING_DIM)
        .ok_or_else(|| {
            Error::Validation(format!(
                "explicit encoding dimension ({factor_dim}^{n_in}) exceeds the cap {MAX_ENCODING_DIM}"
            ))
        })?;
    let mut vectors = Vec::with_capacity(n);
    for i in 0..n {
        let mut v = DVector::<f64>::from_element(1, 1.0);
        for x in 0..n_in {
            let mut factor = DVector::<f64>::zeros(factor_dim);
            for y in 0..n_out {
                let m = t.matrix(x, y);
                for k in 0..n {
                    factor[y * n + k] = m[(i, k)].sqrt();
                }
            }
            v = v.kronecker(&factor);
        }
        debug_assert_eq!(v.len(), dim);
        vectors.push(v);
    }
    Ok(QuantumEncoding { vectors })
}

// ---------------------------------------------------------------------------
// States from target overlaps
// ---------------------------------------------------------------------------

fn check_overlap_targets(targets: &DMatrix<f64>) -> Result<()> {
    if targets.nrows() != targets.ncols() {
        return Err(Error::ShapeMismatch(format!(
            "overlap matrix is {}×{}",
            targets.nrows(),
            targets.ncols()
        )));
    }
    for i in 0..targets.nrows() {
        if (targets[(i, i)] - 1.0).abs() > 1e-12 {
            return Err(Error::Validation(format!(
                "overlap diagonal entry {i} is {} (want 1)",
                targets[(i, i)]
            )));
        }
        for j in 0..i {
            if (targets[(i, j)] - targets[(j, i)]).abs() > 1e-12 {
                return Err(Error::Validation(format!(
                    "overlap matrix not symmetric at ({i}, {j})"
                )));
            }
        }
    }
    Ok(())
}

/// Constructs unit vectors whose pairwise inner products equal `targets`
/// (within 1e-10), via the symmetric square root of the target matrix.
/// Errors with `NotPsd` when no state set can achieve the targets.
pub fn states_from_overlaps(targets: &DMatrix<f64>) -> Result<QuantumEncoding> {
    check_overlap_targets(targets)?;
    let n = targets.nrows();
    let eig = targets.clone().symmetric_eigen();
    let mut scaled = eig.eigenvectors.clone();
    for k in 0..n {
        let lambda = eig.eigenvalues[k];
        if lambda < -PSD_SLACK {
            return Err(Error::NotPsd(format!(
                "target overlap matrix has eigenvalue {lambda}"
            )));
        }
        let root = lambda.max(0.0).sqrt();
        for i in 0..n {
            scaled[(i, k)] *= root;
        }
    }
    let vectors = (0..n)
        .map(|i| DVector::from_iterator(n, (0..n).map(|k| scaled[(i, k)])))
        .collect();
    Ok(QuantumEncoding { vectors })
}

// ---------------------------------------------------------------------------
// Gram ensembles and entropy
// ---------------------------------------------------------------------------

/// A stationary ensemble of memory states described by weights and pairwise
/// overlaps; its weighted Gram matrix `G_ij = √(π_i π_j) c_ij` shares its
/// non-zero spectrum with the ensemble's density matrix.
#[derive(Debug, Clone)]
pub struct GramEnsemble {
    pi: StationaryDistribution,
    overlaps: DMatrix<f64>,
    gram: DMatrix<f64>,
}

impl GramEnsemble {
    /// Builds the weighted Gram matrix; validates shapes, the overlap
    /// structure (symmetric, unit diagonal), and unit trace.
    pub fn new(pi: StationaryDistribution, overlaps: DMatrix<f64>) -> Result<Self> {
        check_overlap_targets(&overlaps)?;
        if pi.len() != overlaps.nrows() {
            return Err(Error::ShapeMismatch(format!(
                "{} weights for a {}-state overlap matrix",
                pi.len(),
                overlaps.nrows()
            )));
        }
        let roots: Vec<f64> = pi
            .probabilities()
            .iter()
            .map(|&p| p.max(0.0).sqrt())
            .collect();
        let n = pi.len();
        let gram = DMatrix::from_fn(n, n, |i, j| roots[i] * roots[j] * overlaps[(i, j)]);
        let trace = gram.trace();
        if (trace - 1.0).abs() > 1e-12 {
            return Err(Error::Validation(format!(
                "Gram trace {trace} differs from 1"
            )));
        }
        Ok(Self { pi, overlaps, gram })
    }

    /// The ensemble weights.
    pub fn pi(&self) -> &StationaryDistribution {
        &self.pi
    }

    /// The pairwise overlaps.
    pub fn overlaps(&self) -> &DMatrix<f64> {
        &self.overlaps
    }

    /// The weighted Gram matrix.
    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    /// Eigenvalues of the weighted Gram matrix, descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut eigs: Vec<f64> = self
            .gram
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        eigs.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
        eigs
    }
}

/// Shannon entropy (bits) of an eigenvalue list, ignoring entries below the
/// cutoff; errors with `NotPsd` when an eigenvalue is materially negative.
pub fn entropy_of_eigenvalues(eigs: &[f64]) -> Result<f64> {
    let mut h = 0.0;
    for &e in eigs {
        if e < -PSD_SLACK {
            return Err(Error::NotPsd(format!("negative eigenvalue {e}")));
        }
        if e > EIGENVALUE_CUTOFF {
            h -= e * e.log2();
        }
    }
    Ok(h)
}

/// Von Neumann entropy (bits) of the ensemble's average state: the entropy
/// of the weighted Gram matrix's eigenvalues.
pub fn von_neumann_entropy(g: &GramEnsemble) -> Result<f64> {
    entropy_of_eigenvalues(&g.eigenvalues())
}

// ---------------------------------------------------------------------------
// Quantum complexity
// ---------------------------------------------------------------------------

/// Which overlap family a report's Q was computed from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EncodingKind {
    /// Standard √-amplitude encoding.
    Standard,
    /// Overlaps taken from the fidelity fixed point; `scale` < 1 records the
    /// common off-diagonal shrink applied when the raw fixed point is not
    /// achievable by any state set.
    FidelitySaturating { scale: f64 },
    /// Overlaps supplied by the caller.
    UserSupplied,
}

/// Memory measures of one (channel, input) pair or one source.
#[derive(Debug, Clone)]
pub struct ComplexityReport {
    /// Classical memory: entropy of the stationary state distribution.
    pub c: f64,
    /// Quantum memory: entropy of the Gram ensemble (absent only when a
    /// caller constructed the report without a quantum side).
    pub q: Option<f64>,
    /// Excess entropy (a lower bound when `e_converged` is false).
    pub e: f64,
    /// Whether the excess-entropy estimate converged.
    pub e_converged: bool,
    /// Overlap family used for Q.
    pub encoding: EncodingKind,
}

/// Overlap family used by [`quantum_complexity`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuantumMode {
    /// Standard √-amplitude encoding overlaps.
    Standard,
    /// Fidelity fixed point as target overlaps (minimal Q among encodings
    /// bounded by it, when achievable).
    Saturating,
}

/// Largest common factor γ ∈ [0, 1] such that shrinking all off-diagonal
/// entries by γ makes the matrix achievable (PSD). Returns the scaled
/// matrix and γ; γ = 1 when the input is already achievable.
fn saturate_psd(f: &DMatrix<f64>) -> (DMatrix<f64>, f64) {
    let scaled = |gamma: f64| {
        let n = f.nrows();
        DMatrix::from_fn(n, n, |i, j| if i == j { 1.0 } else { gamma * f[(i, j)] })
    };
    let is_psd = |m: &DMatrix<f64>| {
        m.clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .all(|&e| e >= -PSD_SLACK)
    };
    if is_psd(f) {
        return (f.clone(), 1.0);
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if is_psd(&scaled(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (scaled(lo), lo)
}

fn report_from_overlaps(
    pi: StationaryDistribution,
    overlaps: DMatrix<f64>,
    e: crate::info::ChannelExcessEntropy,
    encoding: EncodingKind,
) -> Result<ComplexityReport> {
    let c = statistical_complexity(&pi);
    let gram = GramEnsemble::new(pi, overlaps)?;
    let q = von_neumann_entropy(&gram)?;
    Ok(ComplexityReport {
        c,
        q: Some(q),
        e: e.value,
        e_converged: e.converged(),
        encoding,
    })
}

/// Classical, quantum, and excess-entropy measures of channel `t` under
/// `input`. `Standard` mode uses the standard encoding's overlaps;
/// `Saturating` uses the fidelity fixed point as target overlaps, shrinking
/// off-diagonals by a common factor only when the fixed point is not
/// achievable (recorded in the encoding tag).
pub fn quantum_complexity(
    t: &TransducerPresentation,
    input: &MachinePresentation,
    mode: QuantumMode,
) -> Result<ComplexityReport> {
    let pi = driven_stationary(t, input)?;
    let e = channel_excess_entropy_estimate(t, input)?;
    let (overlaps, encoding) = match mode {
        QuantumMode::Standard => (standard_overlaps(t), EncodingKind::Standard),
        QuantumMode::Saturating => {
            let f = fidelity_constraints(t)?;
            let (targets, scale) = saturate_psd(&f);
            (targets, EncodingKind::FidelitySaturating { scale })
        }
    };
    report_from_overlaps(pi, overlaps, e, encoding)
}

/// Same as [`quantum_complexity`] with caller-chosen target overlaps
/// (validated and used as-is; tagged `UserSupplied`).
pub fn quantum_complexity_with_overlaps(
    t: &TransducerPresentation,
    input: &MachinePresentation,
    overlaps: DMatrix<f64>,
) -> Result<ComplexityReport> {
    let pi = driven_stationary(t, input)?;
    let e = channel_excess_entropy_estimate(t, input)?;
    states_from_overlaps(&overlaps)?; // achievability check
    report_from_overlaps(pi, overlaps, e, EncodingKind::UserSupplied)
}

/// Memory measures of a source (no input): the machine is treated as a
/// channel with a trivial one-symbol input.
pub fn machine_complexity(m: &MachinePresentation, mode: QuantumMode) -> Result<ComplexityReport> {
    let t = TransducerPresentation::from_machine(m);
    let input = TransducerPresentation::trivial_input();
    quantum_complexity(&t, &input, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use approx::assert_abs_diff_eq;
    use nalgebra::dmatrix;

    #[test]
    fn delay_states_are_forced_orthogonal() {
        let f = fidelity_constraints(&models::delay_channel()).unwrap();
        assert_eq!(f[(0, 1)], 0.0);
        assert_eq!(f[(1, 0)], 0.0);
        let c = standard_overlaps(&models::delay_channel());
        assert_eq!(c[(0, 1)], 0.0);
    }

    #[test]
    fn detector_fidelity_and_overlap_saturate_at_sqrt_alpha() {
        for alpha in [0.1, 0.5, 0.9] {
            let t = models::bob(alpha).unwrap();
            let f = fidelity_constraints(&t).unwrap();
            assert_abs_diff_eq!(f[(0, 1)], alpha.sqrt(), epsilon = 1e-12);
            let c = standard_overlaps(&t);
            assert_abs_diff_eq!(c[(0, 1)], alpha.sqrt(), epsilon = 1e-12);
        }
    }

    #[test]
    fn relay_overlaps_match_reference_values() {
        let t = models::ternary_channel_default();
        let c = standard_overlaps(&t);
        assert_abs_diff_eq!(c[(0, 1)], (2.0f64 / 3.0).sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(c[(0, 2)], (3.0f64 / 4.0).sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(
            c[(1, 2)],
            (1.0f64 / 12.0).sqrt() + 0.5f64.sqrt(),
            epsilon = 1e-12
        );
        // The standard encoding saturates the fidelity bound here.
        let f = fidelity_constraints(&t).unwrap();
        assert_abs_diff_eq!((&f - &c).amax(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn explicit_encoding_reproduces_product_overlaps() {
        let t = models::investor(models::InvestorParams::default_with_q1(0.3)).unwrap();
        let encoding = standard_encoding(&t).unwrap();
        let c = standard_overlaps(&t);
        assert_abs_diff_eq!(
            (encoding.overlap_matrix() - &c).amax(),
            0.0,
            epsilon = 1e-12
        );
        for v in encoding.vectors() {
            assert_abs_diff_eq!(v.norm(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn states_from_overlaps_achieve_targets() {
        let targets = dmatrix![
            1.0, 0.6, 0.0;
            0.6, 1.0, 0.3;
            0.0, 0.3, 1.0;
        ];
        let enc = states_from_overlaps(&targets).unwrap();
        assert_abs_diff_eq!(
            (enc.overlap_matrix() - &targets).amax(),
            0.0,
            epsilon = 1e-10
        );
        // Identity targets give an orthonormal set; all-ones a single ray.
        let id = DMatrix::<f64>::identity(3, 3);
        let enc = states_from_overlaps(&id).unwrap();
        assert_abs_diff_eq!((enc.overlap_matrix() - &id).amax(), 0.0, epsilon = 1e-12);
        let ones = DMatrix::<f64>::from_element(3, 3, 1.0);
        let enc = states_from_overlaps(&ones).unwrap();
        assert_abs_diff_eq!(enc.overlap(0, 1), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(enc.overlap(1, 2), 1.0, epsilon = 1e-12);
        // An unachievable target errors.
        let bad = dmatrix![
            1.0, 1.0, 0.0;
            1.0, 1.0, 1.0;
            0.0, 1.0, 1.0;
        ];
        assert!(matches!(states_from_overlaps(&bad), Err(Error::NotPsd(_))));
    }

    #[test]
    fn gram_entropy_reduces_to_shannon_for_orthogonal_states() {
        let pi = StationaryDistribution::from_vec(vec![0.2, 0.3, 0.5]);
        let g = GramEnsemble::new(pi.clone(), DMatrix::identity(3, 3)).unwrap();
        assert_abs_diff_eq!(
            von_neumann_entropy(&g).unwrap(),
            pi.entropy(),
            epsilon = 1e-12
        );
        // Identical states have a pure average: zero entropy.
        let ones = DMatrix::<f64>::from_element(2, 2, 1.0);
        let g = GramEnsemble::new(StationaryDistribution::from_vec(vec![0.4, 0.6]), ones).unwrap();
        assert_abs_diff_eq!(von_neumann_entropy(&g).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn three_state_gram_spectrum_closed_form() {
        // Overlap only between states 0 and 2 (weight π_1 stays an
        // eigenvalue); the other two eigenvalues follow the 2×2 closed form.
        let (pf, pu, pe) = (0.10294871, 0.00406376, 0.89298753);
        let c = 0.7;
        let overlaps = dmatrix![
            1.0, 0.0, c;
            0.0, 1.0, 0.0;
            c, 0.0, 1.0;
        ];
        let pi = StationaryDistribution::from_vec(vec![pf, pu, pe]);
        let g = GramEnsemble::new(pi, overlaps).unwrap();
        let eigs = g.eigenvalues();
        let disc = ((pf - pe) * (pf - pe) + 4.0 * c * c * pf * pe).sqrt();
        let hi = 0.5 * (pf + pe + disc);
        let lo = 0.5 * (pf + pe - disc);
        let mut expected = [pu, hi, lo];
        expected.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (have, want) in eigs.iter().zip(expected) {
            assert_abs_diff_eq!(*have, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn gram_route_matches_explicit_density_matrix() {
        let t = models::bob(0.5).unwrap();
        let input = models::biased_coin(0.2).unwrap();
        let pi = crate::algebra::driven_stationary(&t, &input).unwrap();
        let enc = standard_encoding(&t).unwrap();
        let rho = enc.density_matrix(&pi);
        let rho_eigs: Vec<f64> = rho.symmetric_eigen().eigenvalues.iter().copied().collect();
        let direct = entropy_of_eigenvalues(&rho_eigs).unwrap();
        let g = GramEnsemble::new(pi, standard_overlaps(&t)).unwrap();
        assert_abs_diff_eq!(von_neumann_entropy(&g).unwrap(), direct, epsilon = 1e-9);
    }

    #[test]
    fn entropy_decreases_as_overlap_grows() {
        let pi = || StationaryDistribution::from_vec(vec![0.4, 0.6]);
        let q = |c: f64| {
            let overlaps = dmatrix![1.0, c; c, 1.0];
            von_neumann_entropy(&GramEnsemble::new(pi(), overlaps).unwrap()).unwrap()
        };
        let mut last = q(0.0);
        for c in [0.2, 0.4, 0.6, 0.8, 0.95] {
            let next = q(c);
            assert!(next < last, "Q should fall as overlap rises");
            last = next;
        }
    }

    #[test]
    fn detector_report_matches_closed_forms() {
        let t = models::bob(0.5).unwrap();
        let input = models::biased_coin(0.2).unwrap();
        for mode in [QuantumMode::Standard, QuantumMode::Saturating] {
            let report = quantum_complexity(&t, &input, mode).unwrap();
            assert_abs_diff_eq!(report.c, 0.863120568566631, epsilon = 1e-12);
            assert_abs_diff_eq!(report.q.unwrap(), 0.515831595356724, epsilon = 1e-12);
            assert!(report.e_converged);
            assert_abs_diff_eq!(report.e, 0.180800195507933, epsilon = 1e-9);
        }
    }

    #[test]
    fn delay_channel_report_collapses_to_input_entropy() {
        let t = models::delay_channel();
        let input = models::biased_coin(0.2).unwrap();
        let report = quantum_complexity(&t, &input, QuantumMode::Standard).unwrap();
        let h = crate::model::binary_entropy(0.2);
        assert_abs_diff_eq!(report.c, h, epsilon = 1e-12);
        assert_abs_diff_eq!(report.q.unwrap(), h, epsilon = 1e-12);
        assert_abs_diff_eq!(report.e, h, epsilon = 1e-9);
    }

    #[test]
    fn saturation_fallback_only_rescales_unachievable_targets() {
        let psd = dmatrix![1.0, 0.5; 0.5, 1.0];
        let (same, scale) = saturate_psd(&psd);
        assert_eq!(scale, 1.0);
        assert_abs_diff_eq!((&same - &psd).amax(), 0.0, epsilon = 1e-15);
        let bad = dmatrix![
            1.0, 1.0, 0.0;
            1.0, 1.0, 1.0;
            0.0, 1.0, 1.0;
        ];
        let (fixed, scale) = saturate_psd(&bad);
        assert!(scale < 1.0 && scale > 0.0);
        let min_eig = fixed
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        assert!(min_eig >= -PSD_SLACK);
    }
}
