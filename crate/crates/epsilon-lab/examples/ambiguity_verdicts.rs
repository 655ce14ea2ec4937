//! Compare two strategies' classical and quantum memory orderings, certify
//! ambiguity (orderings that disagree), and scan a parameter grid.
//!
//! Run with: `cargo run --example ambiguity_verdicts`

use epsilon_lab::ambiguity::{
    centered_axis, classify, product_grid, region_flags, region_scan, Sufficiency,
};
use epsilon_lab::models;
use epsilon_lab::quantum::{quantum_complexity, QuantumMode};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Two strategies answering the same input coin: a one-step delay and a
    // lossy detector. Which needs more memory? The answer depends on
    // whether memory is classical or quantum.
    let (alpha, r) = (0.5, 0.2);
    let input = models::biased_coin(r)?;
    let a = quantum_complexity(&models::delay_channel(), &input, QuantumMode::Standard)?;
    let b = quantum_complexity(&models::bob(alpha)?, &input, QuantumMode::Standard)?;
    println!(
        "delay:    C = {:.6}, Q = {:.6}, E = {:.6}",
        a.c,
        a.q.unwrap(),
        a.e
    );
    println!(
        "detector: C = {:.6}, Q = {:.6}, E = {:.6}",
        b.c,
        b.q.unwrap(),
        b.e
    );

    // classify() compares the orderings directly when both Q values are
    // present.
    let verdict = classify(&a, &b);
    println!(
        "classical order {:?}, quantum order {:?} -> {:?}",
        verdict.classical_order, verdict.quantum_order, verdict.sufficient
    );

    // Suppose the detector's quantum model were unknown. E bounds every
    // implementation from below, so E_delay > Q_detector already certifies
    // the quantum ordering without building the missing model.
    let mut partial = a.clone();
    partial.q = None;
    let one_sided = classify(&partial, &b);
    println!(
        "with Q of the delay hidden: {:?} (quantum order {:?})",
        one_sided.sufficient, one_sided.quantum_order
    );

    // Region flags express the same one-sided tests as grid-friendly
    // predicates.
    let flags = region_flags(&a, &b);
    println!(
        "region flags: r1={} r2={} r3={} r4={}",
        flags.r1, flags.r2, flags.r3, flags.r4
    );

    // Scan a small (alpha, r) grid. Points are evaluated in parallel
    // (respecting EPSILON_LAB_THREADS) and reported in grid order.
    let grid = product_grid(&centered_axis(8), &centered_axis(8));
    let points = region_scan(&grid, |coords| {
        let (alpha, r) = (coords[0], coords[1]);
        let input = models::biased_coin(r)?;
        Ok((
            quantum_complexity(&models::delay_channel(), &input, QuantumMode::Standard)?,
            quantum_complexity(&models::bob(alpha)?, &input, QuantumMode::Standard)?,
        ))
    });
    let ambiguous = points
        .iter()
        .filter_map(|p| p.outcome.as_ref().ok())
        .filter(|p| p.verdict.sufficient == Sufficiency::Ambiguous)
        .count();
    println!(
        "8x8 grid: {ambiguous} of {} points have provably opposite orderings",
        points.len()
    );
    Ok(())
}
