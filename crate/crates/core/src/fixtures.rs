//! Bundled example trees, in the textual fault-tree format.

use crate::fault_tree::FaultTree;

/// Medium corrosion: `MeC = AND(WW, AcM)`, `AcM = OR(H2S, O2, CO2)`.
pub const MEDIUM_CORROSION: &str = include_str!("../fixtures/medium_corrosion.ft");

/// COVID-19 infected worker on site, top event `IWoS`.
pub const COVID_WORKPLACE: &str = include_str!("../fixtures/covid_workplace.ft");

/// Oil/gas pipeline failure, top event `O/GPF`.
pub const GAS_PIPELINE: &str = include_str!("../fixtures/gas_pipeline.ft");

pub fn medium_corrosion() -> FaultTree {
    FaultTree::parse(MEDIUM_CORROSION).expect("bundled fixture parses")
}

pub fn covid_workplace() -> FaultTree {
    FaultTree::parse(COVID_WORKPLACE).expect("bundled fixture parses")
}

pub fn gas_pipeline() -> FaultTree {
    FaultTree::parse(GAS_PIPELINE).expect("bundled fixture parses")
}
