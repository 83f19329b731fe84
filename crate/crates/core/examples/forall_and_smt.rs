//! Decide assertions over every probability vector, and export the rest.

use pfl::fault_tree::FaultTree;
use pfl::logic::{Cmp, Connectives, Formula1, Formula2};
use pfl::prob::DEFAULT_MONOMIAL_CAP;
use pfl::region::{check_forall, export_smt, RegionConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ft = FaultTree::parse("toplevel T;\nT or A b;\nA and a b;")?;
    let a = |n: &str| Formula1::atom(n);
    let cfg = RegionConfig::default();
    let queries = [
        Formula2::pr(Cmp::Ge, 0.0, a("T")),
        Formula2::pr_given(Cmp::Ge, 1.0, a("T"), a("b")),
        Formula2::pr(Cmp::Ge, 0.5, a("A")),
        Formula2::pr(Cmp::Le, 0.5, a("A")).implies(Formula2::pr(Cmp::Le, 0.9, a("a").and(a("b")))),
        Formula2::pr(Cmp::Eq, 0.5, a("T")),
    ];
    for psi in &queries {
        println!("{psi}: {:?}", check_forall(&ft, psi, &cfg)?);
    }
    println!("\n{}", export_smt(&ft, &queries[2], DEFAULT_MONOMIAL_CAP)?);
    Ok(())
}
