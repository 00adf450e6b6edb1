//! Instance files, generation, verification and size reports.

pub mod check;
pub mod generate;
pub mod instance;
pub mod report;
pub mod suite;

pub use check::{check_instance, CheckItem, CheckReport};
pub use generate::{generate_instance, GenParams};
pub use instance::{load_instance, parse_instance, Instance, InstanceFile};
pub use report::ComplexityReport;
pub use suite::{
    run_suite, suite_instances, verify_instance, InstanceVerdict, Suite, SuiteInstance, SuiteParams,
};
