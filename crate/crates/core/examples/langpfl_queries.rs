//! Parse, lower and run template queries.

use pfl::fault_tree::ProbVector;
use pfl::fixtures;
use pfl::langpfl::{format_result, lower_query, parse_query, Lowered, Outcome};
use pfl::prob::{check_layer2, eval_layer3, Layer1, DEFAULT_EQ_TOLERANCE};

const QUERIES: [&str; 5] = [
    "assume: setp H_2S = 0.0025 setp WW = 0.02 setp PS = 0.01 compute: P[Cor]",
    "assume: setp AcM = 0.005 setp MaD = 0.02 check: P[O/GPF] <= 0.012",
    "computeall: MCS[Cor] and not IAC",
    "assume: set WW = 1\ncheck: P[MeC | AcM] >= 0.99",
    "assume: P[DoP] >= 0.5 check: P[Pun] >= 0.5",
];

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ft = fixtures::gas_pipeline();
    let rho = ProbVector::uniform(ft.num_basic(), 0.02);
    for text in QUERIES {
        println!("> {}", text.replace('\n', " "));
        let lowered = lower_query(&parse_query(text)?, &ft)?;
        println!("  {}", lowered.formula());
        let outcome = match &lowered {
            Lowered::Check(psi) => Outcome::Check(check_layer2(&ft, psi, &rho, DEFAULT_EQ_TOLERANCE)?),
            Lowered::Compute(xi) => Outcome::Compute(eval_layer3(&ft, xi, &rho)?),
            Lowered::ComputeAll(phi) => {
                let l1 = Layer1::compile(&ft, phi)?;
                let names = l1.model().derived().basic_event_names().iter().map(|s| s.to_string()).collect();
                Outcome::ComputeAll { names, vectors: l1.satisfaction_set()? }
            }
        };
        for line in format_result(&outcome).lines() {
            println!("  {line}");
        }
    }

    match parse_query("check: P[Cor] >= 0.1 check: P[Rup] >= 0.1") {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
