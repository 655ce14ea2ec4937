//! Build presentations by hand, validate them, and read off the basic
//! stationary quantities.
//!
//! Run with: `cargo run --example build_and_validate`

use epsilon_lab::model::{statistical_complexity, Alphabet, MachinePresentation};
use epsilon_lab::models::{self, NamedModel, Params};
use nalgebra::dmatrix;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // A two-state source: state `a` emits 0 and holds with probability 0.8,
    // otherwise emits 1 and moves to `b`; state `b` always emits 0 and
    // returns. One matrix per symbol; rows are from-states, columns
    // to-states, entries joint probabilities Pr(symbol, to | from).
    let m = MachinePresentation::new(
        vec!["a".into(), "b".into()],
        Alphabet::binary(),
        vec![
            dmatrix![0.8, 0.0; 1.0, 0.0], // symbol "0"
            dmatrix![0.0, 0.2; 0.0, 0.0], // symbol "1"
        ],
    )?;

    // validate() reports every structural property; require() turns a bad
    // report into an error. Unifilarity (deterministic successor per
    // symbol) is reported too, since several algorithms are exact only
    // for unifilar presentations.
    let report = m.validate();
    println!(
        "stochastic: {}, unifilar: {}, ergodic: {}",
        report.stochastic, report.unifilar, report.ergodic
    );
    report.require()?;

    // The stationary distribution solves pi T = pi; its Shannon entropy is
    // the classical memory C of the source.
    let pi = m.stationary()?;
    println!("pi = {:?}", pi.probabilities());
    println!("C  = {:.9} bits", statistical_complexity(&pi));

    // A broken variant: rows that do not sum to one are caught.
    let broken = MachinePresentation::new(
        vec!["a".into(), "b".into()],
        Alphabet::binary(),
        vec![
            dmatrix![0.8, 0.0; 1.0, 0.0],
            dmatrix![0.0, 0.1; 0.0, 0.0], // mass 0.9 leaves state a
        ],
    )?;
    let bad = broken.validate();
    println!("broken model valid: {}", bad.is_valid());
    for msg in &bad.messages {
        println!("  diagnostic: {msg}");
    }

    // Channels (transducers) carry one matrix per (input, output) pair and
    // normalize per input. The bundled families are also available by name.
    let t = models::delay_channel();
    t.validate().require()?;
    println!(
        "delay channel: {} states, inputs {:?}, outputs {:?}",
        t.n_states(),
        t.inputs().symbols(),
        t.outputs().symbols()
    );

    let mut params = Params::new();
    params.set("alpha", 0.25);
    match models::named_model("bob", &params)? {
        NamedModel::Transducer(bob) => {
            println!("named detector channel has {} states", bob.n_states())
        }
        NamedModel::Machine(_) => unreachable!("bob is a channel"),
    }
    Ok(())
}
