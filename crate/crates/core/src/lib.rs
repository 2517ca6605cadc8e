//! Relative efficiency of decision-making units under the slacks-based
//! measure, with triangular fuzzy inputs and outputs handled through
//! credibility, possibility or alpha-cut models.

pub mod dea;
pub mod error;
pub mod fixtures;
pub mod fuzzy;
pub mod fuzzy_dea;
pub mod ingest;
pub mod lp;

pub use dea::{build_crisp_sbm, solve_sbm, Attribute, Column, ColumnKind, Dataset, DmuRecord, SbmSolution};
pub use error::{Error, Result};
pub use fuzzy::{CutBounds, TriangularFuzzyNumber};
pub use fuzzy_dea::{
    alphacut_interval, build_cut_sbm, credibility_efficiency, evaluate, possibility_efficiency, rank, Approach,
    ApproachConfig, ChancePairing, EfficiencyResult, LevelResult, ModelOptions, Score,
};
pub use ingest::{fuzzify_column, normalize_group, parse_dataset, prepare, write_datasets, SchemaConfig};
pub use lp::{LinearProgram, LpSolution, LpStatus, Relation, SolverOptions};
