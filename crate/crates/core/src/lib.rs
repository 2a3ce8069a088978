//! Consistent-histories frameworks over small qubit circuits, with tools to
//! decide where information about a preparation is located: in which
//! subsystem, at which time, and in which framework.

pub mod circuit;
pub mod cli;
pub mod classical;
pub mod config;
pub mod dh;
pub mod error;
pub mod histories;
pub mod infoloc;
pub mod qmath;
pub mod scenarios;
pub mod serial;

pub use error::{Error, Result};
