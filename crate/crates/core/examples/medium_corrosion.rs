//! Probability of medium corrosion after updating two failure rates.

use pfl::fault_tree::ProbVector;
use pfl::fixtures;
use pfl::logic::{Cmp, Formula1, Formula2, Formula3};
use pfl::prob::{check_layer2, eval_layer3, DEFAULT_EQ_TOLERANCE};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ft = fixtures::medium_corrosion();
    println!("{}", ft.to_source());

    // Order follows the tree's basic events: WW, H2S, O2, CO2.
    let rho = ProbVector::new(vec![0.002, 0.001, 0.0015, 0.002])?;
    let mec = Formula1::atom("MeC");

    let base = eval_layer3(&ft, &Formula3::pr(mec.clone()), &rho)?;
    let updated = Formula3::pr(mec.clone()).setp("H2S", 0.0023).setp("WW", 0.015);
    let value = eval_layer3(&ft, &updated, &rho)?;
    println!("P[MeC]                     = {:.6e}", base.value().unwrap_or(f64::NAN));
    println!("P[MeC][H2S->0.0023, WW->0.015] = {:.6e}", value.value().unwrap_or(f64::NAN));

    let psi = Formula2::pr(Cmp::Le, 1e-4, mec).setp("H2S", 0.0023).setp("WW", 0.015);
    println!("{psi}: {}", check_layer2(&ft, &psi, &rho, DEFAULT_EQ_TOLERANCE)?);
    Ok(())
}
