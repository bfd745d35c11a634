//! Door-line density from the κ-nearest-neighbour estimator
//! `ρ = (κ − 1) / (π d_κ²)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::Agent;
use crate::vec2::Vec2;

pub const DEFAULT_KAPPA: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityProbe {
    pub points: Vec<Vec2>,
    pub kappa: usize,
}

impl DensityProbe {
    /// Three equidistant points at `y = −L/4, 0, +L/4` on the door line.
    pub fn door(door_width: f64, kappa: usize) -> Result<Self> {
        if kappa < 2 {
            return Err(Error::OutOfRange(format!("kappa must be at least 2, got {kappa}")));
        }
        let q = 0.25 * door_width;
        Ok(DensityProbe {
            points: vec![Vec2::new(0.0, -q), Vec2::new(0.0, 0.0), Vec2::new(0.0, q)],
            kappa,
        })
    }
}

/// Distance from `point` to the κ-th nearest of `positions`.
pub fn kth_neighbor_distance(point: Vec2, positions: &[Vec2], kappa: usize) -> Result<f64> {
    if kappa == 0 || positions.len() < kappa {
        return Err(Error::InsufficientPopulation {
            available: positions.len(),
            kappa,
        });
    }
    let mut d2: Vec<f64> = positions.iter().map(|&p| (p - point).norm_sq()).collect();
    let (_, kth, _) = d2.select_nth_unstable_by(kappa - 1, f64::total_cmp);
    Ok(kth.sqrt())
}

pub fn density_from_distance(kappa: usize, distance: f64) -> Result<f64> {
    if distance <= 0.0 {
        return Err(Error::CoincidentAgent);
    }
    Ok((kappa as f64 - 1.0) / (PI * distance * distance))
}

pub fn knn_density_at_point(point: Vec2, positions: &[Vec2], kappa: usize) -> Result<f64> {
    density_from_distance(kappa, kth_neighbor_distance(point, positions, kappa)?)
}

/// Mean κ-NN density over the probe points, counting agents of both groups.
pub fn door_density(agents: &[Agent], probe: &DensityProbe) -> Result<f64> {
    let positions: Vec<Vec2> = agents.iter().map(|a| a.position).collect();
    let mut sum = 0.0;
    for &p in &probe.points {
        sum += knn_density_at_point(p, &positions, probe.kappa)?;
    }
    Ok(sum / probe.points.len() as f64)
}
