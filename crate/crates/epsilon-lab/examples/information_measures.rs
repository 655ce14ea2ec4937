//! Block entropy, entropy rate, and excess entropy — for sources and for
//! driven channels.
//!
//! Run with: `cargo run --example information_measures`

use epsilon_lab::info::{
    block_entropy, channel_excess_entropy_estimate, entropy_rate, excess_entropy,
    excess_entropy_estimate,
};
use epsilon_lab::models;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // The period-2 source 010101… has H(L) = 1 bit for every L >= 1: one
    // bit decides the phase, nothing else is random.
    let m = models::period2();
    for length in 1..=4 {
        println!(
            "period-2 H({length}) = {:.9} bits",
            block_entropy(&m, length)?
        );
    }
    println!("period-2 rate h = {:.9} bits/symbol", entropy_rate(&m)?);
    println!("period-2 excess E = {:.9} bits", excess_entropy(&m)?);

    // A biased coin is memoryless: H(L) = L·h exactly and E = 0.
    let coin = models::biased_coin(0.2)?;
    println!(
        "coin h = {:.9}, E = {:.9}",
        entropy_rate(&coin)?,
        excess_entropy(&coin)?
    );

    // The estimator exposes its stopping point. E_L rises monotonically to
    // E, so an unconverged value is still a valid lower bound.
    let est = excess_entropy_estimate(&coin, 1e-9, 24)?;
    println!(
        "coin estimate: value {:.2e}, stopped at L = {}, converged: {}",
        est.value, est.terminal_length, est.converged
    );

    // For a channel, the interesting quantity is the difference E = E^joint
    // − E^input: the part of the past the channel itself must remember.
    // Any implementation of the behavior, classical or quantum, needs at
    // least E bits of memory.
    let t = models::bob(0.5)?;
    let input = models::biased_coin(0.2)?;
    let e = channel_excess_entropy_estimate(&t, &input)?;
    println!(
        "detector channel: E^J = {:.9}, E^I = {:.9}, E = {:.9} (converged: {})",
        e.joint.value,
        e.input.value,
        e.value,
        e.converged()
    );
    println!(
        "closed form for comparison: {:.9}",
        models::bob_excess(0.5, 0.2)?
    );
    Ok(())
}
