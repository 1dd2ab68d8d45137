//! File formats, Graphviz export, dimension reports, a command-line front end and an HTTP
//! service for eliciting CP-nets from people.

pub mod cli;
pub mod dot;
pub mod formats;
pub mod report;
pub mod service;
pub mod session;

pub use cpnet_core;
