//! Synthetic metric geometry over model spaces.
//!
//! Every model exposes the same surface: a distance oracle, closed-form
//! geodesics and angle measurement. On top of that sit midpoint and
//! extension solvers, curvature-sign tests, bisector and perpendicular
//! constructions, Busemann functions and asymptotes, and a small experiment
//! harness that writes CSV and JSON reports.

pub mod asymptotics;
pub mod bisector;
pub mod curvature;
pub mod error;
pub mod experiment;
pub mod geometry;
mod linalg;
pub mod models;
pub mod numeric;
pub mod point;
pub mod rng;
pub mod sampling;
pub mod solver;

pub use error::{GeoError, Result};
pub use geometry::{GeodesicLine, GeodesicSegment, RaySpec, Triangle};
pub use models::{make_space, DomainSpec, Model, NormSpec, SpaceHandle, SpaceKind};
pub use point::{ChartKind, PointChart};
pub use sampling::{Region, TripleSampler};
pub use solver::{AxiomProbeReport, SearchSettings};
