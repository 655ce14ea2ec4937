//! Writing models to JSON files and loading them back.
//!
//! Run with: `cargo run --example model_files [output-dir]`
//!
//! Every bundled model (with default parameters) is serialized into the
//! output directory, one `.json` file per name. One machine and one channel
//! are then re-loaded to show that the round trip reproduces the transition
//! matrices bit for bit. Probabilities in hand-written files may also be
//! rational strings such as `"1/3"`; the last section demonstrates that.

use epsilon_lab::cli::{load_model, ModelFile, ParsedModel};
use epsilon_lab::models::{self, NamedModel, Params};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = match std::env::args().nth(1) {
        Some(d) => std::path::PathBuf::from(d),
        None => std::env::temp_dir().join("epsilon-lab-model-files"),
    };
    std::fs::create_dir_all(&dir)?;

    // Serialize the whole bundled catalogue with default parameters.
    for name in models::MODEL_NAMES {
        let file = match models::named_model(name, &Params::new())? {
            NamedModel::Machine(m) => ModelFile::from_machine(&m),
            NamedModel::Transducer(t) => ModelFile::from_transducer(&t),
        };
        let path = dir.join(format!("{name}.json"));
        std::fs::write(&path, file.to_json())?;
        println!("wrote {}", path.display());
    }

    // Round trip a machine: every matrix entry survives exactly.
    let original = models::ternary_input();
    let reloaded = match load_model(&dir.join("ternary-input.json"))? {
        ParsedModel::Machine(m) => m,
        ParsedModel::Transducer(_) => unreachable!("ternary-input is a machine"),
    };
    assert_eq!(original.states(), reloaded.states());
    for y in 0..original.alphabet().len() {
        assert_eq!(original.matrix(y), reloaded.matrix(y));
    }
    println!("\nternary-input.json round trip: states and matrices identical");

    // Round trip a channel the same way.
    let original = models::bob(0.5)?;
    let reloaded = match load_model(&dir.join("bob.json"))? {
        ParsedModel::Machine(_) => unreachable!("bob is a channel"),
        ParsedModel::Transducer(t) => t,
    };
    assert_eq!(original.states(), reloaded.states());
    for x in 0..original.inputs().len() {
        for y in 0..original.outputs().len() {
            assert_eq!(original.matrix(x, y), reloaded.matrix(x, y));
        }
    }
    println!("bob.json round trip: states and matrices identical");

    // Hand-written files may spell probabilities as rationals.
    let text = r#"{
      "kind": "machine",
      "alphabets": { "symbols": ["0", "1"] },
      "states": ["a", "b"],
      "transitions": [
        { "from": "a", "to": "a", "output": "0", "prob": "2/3" },
        { "from": "a", "to": "b", "output": "1", "prob": "1/3" },
        { "from": "b", "to": "a", "output": "0", "prob": 1.0 }
      ]
    }"#;
    let m = match ModelFile::parse(text)?.to_model()? {
        ParsedModel::Machine(m) => m,
        ParsedModel::Transducer(_) => unreachable!("kind is machine"),
    };
    println!(
        "rational probabilities: P(a -0-> a) = {} (from \"2/3\")",
        m.matrix(0)[(0, 0)]
    );
    assert_eq!(m.matrix(0)[(0, 0)], 2.0 / 3.0);
    Ok(())
}
