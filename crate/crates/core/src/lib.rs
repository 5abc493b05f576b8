//! Physical plausibility scoring and refinement for 3D indoor scene layouts.
//!
//! The crate provides:
//! - a scene model with JSON I/O and a labeled synthetic corpus generator,
//! - a geometric kernel (truncated SDF grids, penetration depth, support
//!   polygons, COM margins),
//! - a nine-constraint physics evaluator with per-object flags, rates, and
//!   an overall score,
//! - a short-horizon rigid-body settle simulation,
//! - occupancy-map rasterization and A* reachability,
//! - differentiable test-time pose optimization, and
//! - group-relative preference training of a toy flow-matching layout
//!   generator.

pub mod math;
pub mod priors;
pub mod scene;
pub mod geometry;
pub mod navigation;
pub mod dynamics;
pub mod evaluator;
pub mod corpus;
pub mod tto;
pub mod grpo;

pub use scene::{load_scene, save_scene, Scene, SceneError};
