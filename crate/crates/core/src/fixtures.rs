//! Bundled oil-refinery data: raw figures and the normalized, fuzzified table.

use crate::dea::Dataset;
use crate::error::Result;
use crate::ingest::{parse_dataset, SchemaConfig};

pub const OIL_RAW_CSV: &str = include_str!("../data/oil_raw.csv");
pub const OIL_RAW_SCHEMA: &str = include_str!("../data/oil_raw.schema.json");
pub const OIL_NORMALIZED_CSV: &str = include_str!("../data/oil_normalized.csv");
pub const OIL_NORMALIZED_SCHEMA: &str = include_str!("../data/oil_normalized.schema.json");

/// Raw figures, grouped into large and small companies.
pub fn raw() -> Result<Vec<Dataset>> {
    parse_dataset(OIL_RAW_CSV, &SchemaConfig::from_json(OIL_RAW_SCHEMA)?)
}

/// Normalized reference data (two decimals, NCI as triangular numbers).
pub fn normalized() -> Result<Vec<Dataset>> {
    parse_dataset(OIL_NORMALIZED_CSV, &SchemaConfig::from_json(OIL_NORMALIZED_SCHEMA)?)
}
