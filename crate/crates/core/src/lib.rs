//! Switched position-force control of a single contact degree of freedom
//! against a stiff Kelvin-Voigt wall.
//!
//! - [`model`]: plant, environment and controller parameters, closed-loop matrices.
//! - [`conewise`]: stability certificates from return maps and visible eigenvectors.
//! - [`trajectory`]: desired trajectories stitched from user profiles.
//! - [`sim`]: event-located simulation of the closed loops and error systems.
//! - [`design`]: damping synthesis and Λ sweeps.

pub mod cli;
pub mod conewise;
pub mod design;
pub mod model;
pub mod sim;
pub mod trajectory;
