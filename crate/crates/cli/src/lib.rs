//! Library half of the `trisqueeze` command line tool: output rendering and
//! the cross-backend property suite. The binary in `main.rs` is a thin
//! dispatcher over these modules, and the acceptance tests call them
//! directly so the CLI and the test suite verify the same code.

pub mod checks;
pub mod output;

/// Process exit codes of the CLI.
pub mod exit_codes {
    pub const SUCCESS: i32 = 0;
    pub const INVALID_ARGUMENTS: i32 = 2;
    pub const PRECISION_FAILURE: i32 = 3;
    pub const SELFCHECK_FAILURE: i32 = 4;
}

/// Map a library error onto the exit-code contract: bad input is 2,
/// truncation/precision/budget trouble is 3.
pub fn exit_code_for(err: &trisqueeze::Error) -> i32 {
    match err {
        trisqueeze::Error::InvalidArgument(_) => exit_codes::INVALID_ARGUMENTS,
        trisqueeze::Error::Truncation { .. }
        | trisqueeze::Error::Precision(_)
        | trisqueeze::Error::Resource(_) => exit_codes::PRECISION_FAILURE,
    }
}
