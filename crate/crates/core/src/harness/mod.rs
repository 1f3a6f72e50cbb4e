//! Builtin corpus, bound suite and config-driven experiment runner.

pub mod config;
pub mod corpus;
pub mod report;
pub mod run;
pub mod suite;

pub use config::{ExperimentConfig, Kind, SubjectSpec, SweepConfig};
pub use corpus::{builtin_corpus, builtin_corpus_report, CorpusEntry, Exclusion, FunctionSpec};
pub use run::{error_exit_code, run_experiment, Artifact, RunOutcome, RunStatus};
pub use suite::{run_suite, Inequality, SuiteGrid};
