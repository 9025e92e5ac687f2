//! Instance files, the verification battery, generators, reports and the cache.

pub mod battery;
pub mod cache;
pub mod generate;
pub mod instance;
pub mod report;
pub mod selftest;

pub use battery::{run_battery, BatteryError, BatteryOptions};
pub use cache::Cache;
pub use generate::{generate_instance, Family, GenParams};
pub use instance::{parse_instance, InputError, Instance};
pub use report::{emit_report, parse_report, Format, Report};
