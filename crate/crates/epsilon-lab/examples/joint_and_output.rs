//! Drive a channel with a source: the joint machine over (input, output)
//! pairs, the output machine over outputs alone, and the two ways to get a
//! presentation of the output process.
//!
//! Run with: `cargo run --example joint_and_output`

use epsilon_lab::algebra::{driven_stationary, joint_machine, output_machine, word_distribution};
use epsilon_lab::inversion::{output_presentation, output_process};
use epsilon_lab::model::statistical_complexity;
use epsilon_lab::models;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // The delay channel repeats the previous input symbol; drive it with a
    // biased coin.
    let t = models::delay_channel();
    let input = models::biased_coin(0.2)?;

    // Joint machine: states are (channel state, source state) pairs, the
    // alphabet is input-major "x|y" pairs, and each matrix is the Kronecker
    // product of the channel's and the source's matrices for that pair.
    let joint = joint_machine(&t, &input)?;
    println!(
        "joint machine: states {:?}, symbols {:?}",
        joint.states(),
        joint.alphabet().symbols()
    );

    // Its stationary distribution marginalizes to the channel-state
    // distribution used by the memory measures.
    let pi = driven_stationary(&t, &input)?;
    println!("channel-state pi = {:?}", pi.probabilities());
    println!(
        "C of the driven channel = {:.9} bits",
        statistical_complexity(&pi)
    );

    // Output machine: same states, matrices summed over inputs. It presents
    // the output process but need not be unifilar: here the emitted symbol is
    // the *stored* bit, so it says nothing about which bit comes next.
    let om = output_machine(&t, &input)?;
    let report = om.validate();
    println!(
        "output machine: {} states, unifilar: {}",
        om.n_states(),
        report.unifilar
    );
    for msg in &report.messages {
        println!("  note: {msg}");
    }

    // output_presentation keeps only the recurrent states and leaves the
    // presentation otherwise alone, so it works on non-unifilar output
    // machines too. Its word statistics are exact: a delayed coin is still
    // the same coin.
    let presentation = output_presentation(&t, &input)?;
    let mut max_tv: f64 = 0.0;
    for length in 1..=4 {
        let lhs = word_distribution(&presentation, length, 0.0)?;
        let rhs = word_distribution(&input, length, 0.0)?;
        max_tv = max_tv.max(lhs.total_variation(&rhs)?);
    }
    println!(
        "output presentation: {} states; max TV against the coin at L = 1..=4: {max_tv:.3e}",
        presentation.n_states()
    );

    // output_process goes further and merges predictively equivalent states,
    // which requires a unifilar output machine. The ternary channel driven by
    // its companion source qualifies, and the merge is visible: the joint
    // product has more states than the process needs.
    let t = models::ternary_channel_default();
    let input = models::ternary_input();
    let om = output_machine(&t, &input)?;
    let process = output_process(&t, &input)?;
    println!(
        "ternary channel: output machine {} states -> output process {} states, C = {:.9} bits",
        om.n_states(),
        process.n_states(),
        statistical_complexity(&process.stationary()?)
    );
    Ok(())
}
