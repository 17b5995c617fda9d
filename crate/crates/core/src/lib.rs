//! Trade-study engine for lunar landing-pad construction methods.
//!
//! Each construction process yields a [`process::ProcessResult`]; cases
//! combine an inner-zone and an outer-zone technology into a
//! [`costing::CombinedPlan`], which is priced by [`costing::cost_breakdown`]
//! and scale-optimized by [`optimizer::Model::optimize_scale`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod costing;
pub mod error;
pub mod gravel;
pub mod optimizer;
pub mod params;
pub mod pavers;
pub mod polymer;
pub mod process;
pub mod reliability;
pub mod report;
pub mod sintering;
pub mod siteprep;

pub use error::{ConfigError, Error, ModelError};
