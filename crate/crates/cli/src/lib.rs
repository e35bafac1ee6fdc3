//! Script language, report writer, text format and property suites on top
//! of the `indsheaf` library.

pub mod dsl;
pub mod error;
pub mod format;
mod oracle;
pub mod run;
pub mod suites;
