//! Quantum memory for a driven channel: pure-state encodings, overlap
//! matrices, fidelity constraints, and the resulting Q ≤ C comparison.
//!
//! Run with: `cargo run --example quantum_memory`

use epsilon_lab::algebra::driven_stationary;
use epsilon_lab::models;
use epsilon_lab::quantum::{
    fidelity_constraints, quantum_complexity, standard_encoding, standard_overlaps,
    von_neumann_entropy, GramEnsemble, QuantumMode,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // A detector channel that misses an event with probability alpha,
    // driven by a biased coin.
    let (alpha, r) = (0.5, 0.2);
    let t = models::bob(alpha)?;
    let input = models::biased_coin(r)?;

    // The standard encoding assigns each memory state a unit vector whose
    // pairwise inner products are computable in closed form.
    let enc = standard_encoding(&t)?;
    println!("encoding dimension: {}", enc.dim());
    println!("encoded overlap 01: {:.9}", enc.overlap(0, 1));
    let c = standard_overlaps(&t);
    println!("analytic overlap 01: {:.9}", c[(0, 1)]);
    println!("closed form sqrt(alpha): {:.9}", alpha.sqrt());

    // Q is the von Neumann entropy of the stationary ensemble, computed
    // from the weighted Gram matrix (same non-zero spectrum as the density
    // matrix, at the size of the state count).
    let pi = driven_stationary(&t, &input)?;
    let gram = GramEnsemble::new(pi, c)?;
    println!("Q = {:.9} bits", von_neumann_entropy(&gram)?);

    // quantum_complexity bundles C, Q, and E into one report.
    let report = quantum_complexity(&t, &input, QuantumMode::Standard)?;
    println!(
        "report: C = {:.9}, Q = {:.9}, E = {:.9} ({:?})",
        report.c,
        report.q.unwrap(),
        report.e,
        report.encoding
    );
    println!(
        "closed forms: C = {:.9}, Q = {:.9}",
        models::bob_classical(alpha, r)?,
        models::bob_quantum(alpha, r)?
    );

    // Unifilarity caps how similar two memory states can remain after any
    // shared future: the maximum-fidelity fixed point. The saturating mode
    // pushes overlaps to those bounds (scaled back, if needed, to stay
    // realizable), which can only lower Q further.
    let f = fidelity_constraints(&t)?;
    println!("fidelity bound 01: {:.9}", f[(0, 1)]);
    let saturated = quantum_complexity(&t, &input, QuantumMode::Saturating)?;
    println!(
        "saturating mode: Q = {:.9} ({:?})",
        saturated.q.unwrap(),
        saturated.encoding
    );
    Ok(())
}
