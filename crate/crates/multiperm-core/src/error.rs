//! Error type shared across the crate.

use alloc::string::String;
use core::fmt;

/// Errors reported by fallible operations.
///
/// Contract violations that indicate a programming error (dimension
/// mismatches between values that the caller constructed) panic instead;
/// this enum covers conditions that a front end is expected to surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A textual form could not be parsed.
    Parse(String),
    /// A size-capped operation was asked to exceed its cap.
    /// `flag` names the command-line switch that raises the cap, if any.
    CapExceeded {
        what: &'static str,
        n: usize,
        cap: usize,
        flag: Option<&'static str>,
    },
    /// An input failed a structural invariant (bad partition, non-bijective
    /// image list, relation tuple out of range, ...).
    Invalid(String),
    /// A mathematical assertion baked into an algorithm failed on concrete
    /// data. This is never expected to fire; if it does, the input is a
    /// counterexample to a theorem the crate relies on.
    ClaimFalsified(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::CapExceeded { what, n, cap, flag } => {
                write!(f, "{what} is capped at n = {cap} (requested n = {n})")?;
                if let Some(flag) = flag {
                    write!(f, "; override with {flag}")?;
                }
                Ok(())
            }
            Error::Invalid(msg) => write!(f, "invalid input: {msg}"),
            Error::ClaimFalsified(msg) => {
                write!(f, "internal mathematical invariant falsified: {msg}")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
