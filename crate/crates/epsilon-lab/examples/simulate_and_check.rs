//! Seeded simulation: sample trajectories from sources and driven channels,
//! then compare empirical word statistics against the analytic distribution.
//!
//! Run with: `cargo run --example simulate_and_check`

use epsilon_lab::algebra::{joint_machine, word_distribution};
use epsilon_lab::models;
use epsilon_lab::simulate::{
    empirical_word_distribution, sample_path, sample_path_driven, total_variation,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Trajectories are reproducible: the seed fully determines the path.
    let m = models::period2();
    let traj = sample_path(&m, 10, 7)?;
    println!("period-2 seed 7: {}", traj.symbol_labels().join(""));
    println!("states visited:  {}", traj.visited_labels().join(" "));
    assert_eq!(sample_path(&m, 10, 7)?, traj);

    // Empirical block statistics converge to the analytic distribution.
    let coin = models::biased_coin(0.3)?;
    let traj = sample_path(&coin, 200_000, 42)?;
    let empirical = empirical_word_distribution(&traj, 3)?;
    let analytic = word_distribution(&coin, 3, 0.0)?;
    println!(
        "coin, 2·10^5 steps: TV at L = 3 is {:.5}",
        total_variation(&empirical, &analytic)?
    );
    println!(
        "Pr(111) empirical {:.5} vs analytic {:.5}",
        empirical.probability(&[1, 1, 1]),
        analytic.probability(&[1, 1, 1])
    );

    // Driving a channel samples (input, output) pairs from the joint
    // machine; symbols are labeled "x|y".
    let t = models::bob(0.5)?;
    let input = models::biased_coin(0.2)?;
    let driven = sample_path_driven(&t, &input, 12, 3)?;
    println!("driven channel:  {}", driven.symbol_labels().join(" "));

    // The joint trajectory checks out against the joint machine's words.
    let joint = joint_machine(&t, &input)?;
    let long = sample_path_driven(&t, &input, 100_000, 5)?;
    let tv = total_variation(
        &empirical_word_distribution(&long, 2)?,
        &word_distribution(&joint, 2, 0.0)?,
    )?;
    println!("joint words, 10^5 steps: TV at L = 2 is {tv:.5}");
    Ok(())
}
