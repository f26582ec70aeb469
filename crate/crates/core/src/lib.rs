//! Rewrite strategies with a small-step and big-step semantics, zipper
//! navigation, and the stepwise feedback services built on top of them.

pub mod engine;
pub mod error;
pub mod exercise;
pub mod interactive;
pub mod lint;
pub mod nav;
pub mod powers;
pub mod protocol;
pub mod rule;
pub mod services;
pub mod strategy;

pub use error::{Error, ParseError};
