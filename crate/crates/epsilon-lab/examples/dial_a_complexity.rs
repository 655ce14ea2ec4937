//! A channel family whose classical memory C is tunable while its quantum
//! memory equals C exactly — solve for the parameter that hits a target.
//!
//! Run with: `cargo run --example dial_a_complexity`

use epsilon_lab::algebra::driven_stationary;
use epsilon_lab::models;
use epsilon_lab::quantum::{quantum_complexity, standard_overlaps, QuantumMode};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // The cyclic family t_n walks n states; parameter q_i is the chance of
    // advancing from state i when the input says "go". Distinct states
    // always disagree on the current output, so their quantum encodings
    // stay orthogonal: no quantum advantage exists, Q = C.
    let input = models::biased_coin(0.5)?;
    let qs = [0.7, 0.4, 0.9];
    let t = models::tn(&qs)?;
    let report = quantum_complexity(&t, &input, QuantumMode::Standard)?;
    println!("n = 3 at q = {qs:?}");
    println!("C = {:.12}", report.c);
    println!("Q = {:.12}", report.q.unwrap());

    let overlaps = standard_overlaps(&t);
    println!(
        "off-diagonal overlaps: {:?}",
        [overlaps[(0, 1)], overlaps[(0, 2)], overlaps[(1, 2)]]
    );

    // The stationary distribution has a closed form; entropy of that
    // distribution is C.
    let pi = driven_stationary(&t, &input)?;
    let closed = models::family_tn_stationary(&qs)?;
    println!(
        "stationary, computed vs closed form: {:?} vs {:?}",
        pi.probabilities(),
        closed.probabilities()
    );

    // Because C is continuous and monotone along the slice q = (s, 1, …, 1),
    // any target in (0, log2 n) is reachable by bisection.
    for n in 2..=4usize {
        let target = 0.5 * (n as f64).log2();
        let solved = models::solve_target_complexity(n, target, &input)?;
        let reached = models::family_tn_stationary(&solved)?.entropy();
        println!(
            "n = {n}: target {target:.6} bits hit at s = {:.6} (reached {reached:.9})",
            solved[0]
        );
    }
    Ok(())
}
