//! Library surface of the command-line harness: wire documents, suite
//! runners and reports. The binary in main.rs is a thin front-end over this.

pub mod document;
pub mod report;
pub mod suites;
