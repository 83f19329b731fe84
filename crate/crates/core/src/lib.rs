//! `pfl`: a probabilistic fault-tree logic
//!
//! Fault trees are parsed from a Galileo-style text format. Queries are
//! written in a three-layer logic:
//! - Boolean formulas over basic-event status vectors, with minimal cut and path sets.
//! - Probability assertions and independence tests.
//! - Probability values.
//!
//! Every Boolean formula compiles to a reduced ordered BDD. Probabilities
//! come from a Shannon recursion over that BDD. Parametric questions
//! (for which probability vectors does an assertion hold?) are answered by
//! box subdivision over the vertices of the parameter cube, or handed to an
//! SMT solver as QF_NRA.
//!
//! ## Modules
//!
//! ```text
//! fault_tree   trees, parser, structure function, module pruning
//! logic        formula syntax, sugar, well-formedness
//! bdd          BDD manager: apply, quantification, renaming, all-sat
//! translate    Boolean formulas -> BDDs
//! prob         probability evaluation and multilinear polynomials
//! region       box extrema, epsilon-partitions, forall checks, SMT export
//! langpfl      the assume/check/compute/computeall query language
//! cli          the `pfl` command line
//! fixtures     the bundled example trees
//! ```
//!
//! ## Examples
//!
//! - **`medium_corrosion`** - Probability of a small tree under updated failure rates
//! - **`boolean_queries`** - Status-vector checks, cut sets and path sets
//! - **`probability_queries`** - Thresholds, conditionals and independence
//! - **`langpfl_queries`** - Parse, lower and run text queries
//! - **`parameter_partition`** - Partition the parameter cube for an assertion
//! - **`forall_and_smt`** - Universal checks and SMT-LIB2 export
//! - **`bdd_dot`** - Inspect the BDD of a formula as Graphviz
//! - **`module_assignment`** - Assign a probability to an intermediate module
//!
//! ```bash
//! cargo run -p pfl --example medium_corrosion
//! cargo run -p pfl --example langpfl_queries
//! cargo run -p pfl --example parameter_partition
//! ```
//!
//! ## Command line
//!
//! ```bash
//! pfl check --tree mec.ft --query-text 'check: P[MeC] <= 1e-4' --default-prob 0.002
//! pfl computeall --tree mec.ft --query-text 'computeall: MCS[MeC]'
//! pfl partition --tree mec.ft --query q.pfl --epsilon 0.05 --output part.txt
//! ```

pub mod bdd;
pub mod cli;
pub mod fault_tree;
pub mod fixtures;
pub mod langpfl;
pub mod logic;
pub mod prob;
pub mod region;
pub mod translate;
