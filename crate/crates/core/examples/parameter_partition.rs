//! Partition the parameter cube of a threshold query into yes/no/maybe boxes.

use pfl::fixtures;
use pfl::logic::{Cmp, Formula1};
use pfl::region::{epsilon_partition, write_partition, RegionConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ft = fixtures::medium_corrosion();
    let acm = Formula1::atom("AcM");
    for eps in [0.1, 0.01] {
        let p = epsilon_partition(&ft, &acm, None, 0.1, Cmp::Ge, &RegionConfig::with_epsilon(eps))?;
        println!(
            "epsilon={eps}: {} yes, {} no, {} maybe boxes; vol_yes={:.4} vol_no={:.4} vol_maybe={:.4}",
            p.yes.len(),
            p.no.len(),
            p.maybe.len(),
            p.vol_yes,
            p.vol_no,
            p.vol_maybe
        );
    }
    let p = epsilon_partition(&ft, &acm, None, 0.1, Cmp::Ge, &RegionConfig::with_epsilon(0.2))?;
    print!("{}", write_partition(&p));
    Ok(())
}
