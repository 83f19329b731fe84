//! Assign a probability to an intermediate event that is a module.

use pfl::fault_tree::ProbVector;
use pfl::fixtures;
use pfl::logic::{well_formed, AnyFormula, Connectives, Formula1, Formula3};
use pfl::prob::eval_layer3;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ft = fixtures::gas_pipeline();
    let rho = ProbVector::uniform(ft.num_basic(), 0.01);
    let a = |n: &str| Formula1::atom(n);

    for e in ["AcM", "MeC", "Cor", "DoP"] {
        let id = ft.require(e)?;
        println!("{e:<4} module: {}", ft.is_module(id));
    }

    let xi = Formula3::pr(a("O/GPF")).setp("AcM", 0.005);
    let rewrite = well_formed(&AnyFormula::from(xi.clone()), &ft)?;
    println!("\npruned modules: {:?}", rewrite.modules());
    println!("derived tree:\n{}", rewrite.apply(&ft)?.to_source());
    println!("{xi} = {:?}", eval_layer3(&ft, &xi, &rho)?.value());

    let clash = Formula3::pr(a("O/GPF").and(a("H_2S"))).setp("AcM", 0.005);
    match well_formed(&AnyFormula::from(clash), &ft) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
