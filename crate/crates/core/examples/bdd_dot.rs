//! Print the BDD of a formula as Graphviz.
//!
//! ```bash
//! cargo run -p pfl --example bdd_dot | dot -Tsvg > mcs.svg
//! ```

use pfl::fixtures;
use pfl::logic::Formula1;
use pfl::translate::Translator;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ft = fixtures::medium_corrosion();
    let names: Vec<String> = ft.basic_event_names().iter().map(|s| s.to_string()).collect();
    let mut tr = Translator::new(ft);
    let top = tr.translate_formula(&Formula1::atom("MeC"))?;
    let mcs = tr.translate_formula(&Formula1::atom("MeC").mcs())?;
    let m = tr.manager();
    eprintln!("MeC: {} nodes, MCS[MeC]: {} nodes", m.node_count(top), m.node_count(mcs));
    print!("{}", m.to_dot(mcs, |v| names[v.be_index()].clone()));
    Ok(())
}
