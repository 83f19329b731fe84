//! Status-vector checks, minimal cut sets and path sets on the pipeline tree.

use pfl::fault_tree::StatusVector;
use pfl::fixtures;
use pfl::langpfl::format_vector;
use pfl::logic::{sugar_mps, Connectives, Formula1};
use pfl::prob::{check_layer1, satisfaction_set};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ft = fixtures::gas_pipeline();
    let names: Vec<String> = ft.basic_event_names().iter().map(|s| s.to_string()).collect();
    let a = |n: &str| Formula1::atom(n);

    // Water and oxygen present, nothing else.
    let mut bits = vec![false; ft.num_basic()];
    for e in ["WW", "O_2"] {
        bits[ft.be_index_of(e).unwrap()] = true;
    }
    let b = StatusVector(bits);
    for phi in [a("MeC"), a("O/GPF"), a("MeC").set0("WW"), a("Rup").not()] {
        println!("{:<24} {}", phi.to_string(), check_layer1(&ft, &phi, &b)?);
    }

    let cuts = satisfaction_set(&ft, &a("Cor").mcs())?;
    println!("\nminimal cut sets of Cor ({}):", cuts.len());
    for c in &cuts {
        println!("  {}", format_vector(&names, c));
    }

    // Read literally, MPS(φ) = MCS(¬φ) keeps the vector with fewest failures.
    let paths = satisfaction_set(&ft, &sugar_mps(a("Cor")))?;
    println!("\nMPS[Cor]: {:?}", paths.iter().map(|p| format_vector(&names, p)).collect::<Vec<_>>());
    Ok(())
}
