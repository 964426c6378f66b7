//! Config-driven runner and acceptance suite for `tdirac-core`.

pub mod acceptance;
pub mod config;
pub mod output;
pub mod run;

use tdirac_core::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED_CHECKS: u8 = 1;
pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_CONTRACT: u8 = 3;

pub fn exit_code(e: &Error) -> u8 {
    if e.is_validation() {
        EXIT_VALIDATION
    } else {
        EXIT_CONTRACT
    }
}
