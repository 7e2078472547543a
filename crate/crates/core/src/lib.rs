//! Generation adequacy risk assessment.
//!
//! Builds capacity outage probability tables for fleets of two-state units,
//! evaluates loss-of-load risk (LOLP, LOLE) against demand-wind records,
//! solves for the capacity value of variable generation by four methods
//! (hindcast EFC/ELCC, independent-convolution EFC, Garver exponential-tail
//! closed form, small-capacity approximation), and quantifies sampling
//! uncertainty by bootstrap resampling.

pub mod bootstrap;
pub mod capacity_value;
pub mod copt;
pub mod risk;

pub use bootstrap::{BootstrapConfig, BootstrapSummary, ResampleMode};
pub use capacity_value::{CapacityValueResult, GarverFit, Method};
pub use copt::{CapacityDistribution, CdfMode, GeneratingUnit};
pub use risk::{DemandWindRecord, MarginModel, RiskResult};
