//! Thresholds, conditional probabilities and independence on the COVID tree.

use pfl::fault_tree::ProbVector;
use pfl::fixtures;
use pfl::logic::{sugar_sup, Cmp, Connectives, Formula1, Formula2};
use pfl::prob::{check_layer2, conditional_probability, DEFAULT_EQ_TOLERANCE};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ft = fixtures::covid_workplace();
    let rho = ProbVector::uniform(ft.num_basic(), 0.3);
    let a = |n: &str| Formula1::atom(n);

    let top = conditional_probability(&ft, &a("IWoS"), None, &rho)?;
    let given = conditional_probability(&ft, &a("IWoS"), Some(&a("PP")), &rho)?;
    println!("P[IWoS]      = {:?}", top.value());
    println!("P[IWoS | PP] = {:?}", given.value());

    let queries = [
        Formula2::pr(Cmp::Le, 0.03, a("IWoS")).setp("PP", 1.0),
        Formula2::pr_given(Cmp::Ge, 0.5, a("MoT"), a("IW")),
        Formula2::idp(a("OS"), a("CT")),
        Formula2::idp(a("AT"), a("IO")),
        sugar_sup("SH", &ft)?,
        Formula2::pr(Cmp::Ge, 0.5, a("CP/R")).and(Formula2::pr(Cmp::Lt, 0.1, a("OS"))),
    ];
    for psi in &queries {
        println!("{psi}: {}", check_layer2(&ft, psi, &rho, DEFAULT_EQ_TOLERANCE)?);
    }
    Ok(())
}
