//! Pedestrian counterflow through a door bottleneck, simulated with a social
//! force model, and the stylized-fact statistics of the resulting door
//! density series (or of any other sampled series, such as log-prices).
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`]: corridor, door, agents and initial placement
//! - [`forces`]: driving, contact, social and wall forces on a cell grid
//! - [`dynamics`]: integration, reinsertion, the imitation decision rule, runs
//! - [`observables`]: κ-nearest-neighbour density on the door line
//! - [`stats`]: returns, ACF, kurtosis, KDE peak scaling, multifractal
//!   moments, DFA
//! - [`regime`], [`commands`], [`ingest`]: regime labels and the CLI surface

pub mod commands;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod forces;
pub mod geometry;
pub mod ingest;
pub mod observables;
pub mod regime;
pub mod stats;
pub mod vec2;

pub use config::{Individualism, SimConfig};
pub use dynamics::{run, RunOutput, Simulation};
pub use error::{Error, Result};
pub use geometry::{Agent, Group, SimState, WorldGeometry};
pub use stats::SampledSeries;
pub use vec2::Vec2;
