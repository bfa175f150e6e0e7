//! Reference implementation and invariant checkers.

pub mod check;
pub mod differential;
pub mod oracle;
pub mod shadow;

pub use check::{check_structure, fib_bound, Violation, ViolationKind};
pub use differential::{differential_run, execute, oracle_answers, ExecConfig, Execution, Report, Verify};
pub use oracle::OracleHeap;
pub use shadow::Shadow;
