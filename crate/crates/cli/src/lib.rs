//! Library side of the `tropsym` command: the worked examples and the
//! corpus sweep, exposed for tests.

pub mod examples;
pub mod sweep;
