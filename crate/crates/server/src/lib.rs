//! Study service: persistence, HTTP routes and the command-line front end.

pub mod api;
pub mod cli;
pub mod service;
