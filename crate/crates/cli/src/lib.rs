//! Document format, model building and command dispatch for the `hermsig` binary.

pub mod commands;
pub mod document;
pub mod error;
pub mod model;
