//! Black-box testability of requirements over ordered system models.

pub mod algorithmic;
pub mod assumptions;
pub mod cli;
pub mod eio;
pub mod order;
pub mod sampling;
pub mod setup;
pub mod temporal;
