//! Local packings: the neighbours of one unit sphere and the prism model.

use std::f64::consts::PI;

use serde::Serialize;

use crate::configurations::{from_directions, rho_bar, TypeIConfiguration};
use crate::error::{Error, Result};
use crate::extremal::{SQ_MIN, TRI_MIN};
use crate::geom::V3;

/// Height within which a neighbour counts as close.
pub const CLOSE_HEIGHT: f64 = 0.07;
/// Height below which a neighbour counts as touching.
pub const TOUCH_HEIGHT: f64 = 1e-12;

/// A neighbour at centre distance 2(1 + h) in the given direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub direction: V3,
    pub h: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LocalPacking {
    pub neighbors: Vec<Neighbor>,
}

impl LocalPacking {
    pub fn new(neighbors: Vec<Neighbor>) -> Result<Self> {
        let mut ns = Vec::with_capacity(neighbors.len());
        for n in neighbors {
            if n.h.is_nan() || n.h < 0.0 || n.direction.norm() == 0.0 {
                return Err(Error::InvalidConfiguration(format!("bad neighbour h = {}", n.h)));
            }
            ns.push(Neighbor {
                direction: n.direction.normalize(),
                h: n.h,
            });
        }
        let centers: Vec<V3> = ns.iter().map(|n| n.direction * 2.0 * (1.0 + n.h)).collect();
        for i in 0..centers.len() {
            for j in i + 1..centers.len() {
                let d = (centers[i] - centers[j]).norm();
                if d < 2.0 - 1e-9 {
                    return Err(Error::Overlap(d));
                }
            }
        }
        Ok(LocalPacking { neighbors: ns })
    }

    /// Neighbours of the given directions, all touching.
    pub fn touching(directions: &[V3]) -> Result<Self> {
        LocalPacking::new(
            directions
                .iter()
                .map(|&direction| Neighbor { direction, h: 0.0 })
                .collect(),
        )
    }

    pub fn close_neighbors(&self) -> Vec<Neighbor> {
        self.neighbors.iter().copied().filter(|n| n.h <= CLOSE_HEIGHT).collect()
    }

    fn touching_config(&self) -> Option<TypeIConfiguration> {
        let dirs: Vec<V3> = self
            .neighbors
            .iter()
            .filter(|n| n.h <= TOUCH_HEIGHT)
            .map(|n| n.direction)
            .collect();
        if dirs.len() != 12 {
            return None;
        }
        from_directions(dirs, "local").ok()
    }

    pub fn is_type_one(&self) -> bool {
        self.touching_config().is_some()
    }

    pub fn rho_bar_local(&self) -> Result<f64> {
        let c = self.touching_config().ok_or(Error::NotTypeOne)?;
        Ok(rho_bar(&c)?.rho_bar)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HcpCell {
    pub vol_tet: f64,
    pub vol_oct: f64,
    pub rho_tet: f64,
    pub rho_oct: f64,
    /// Two tetrahedra per octahedron.
    pub rho_bar: f64,
}

/// Tetrahedral and octahedral cells of edge 2 and their mixture.
pub fn hcp_cell_example() -> HcpCell {
    let vol_tet = 8f64.sqrt() / 3.0;
    let vol_oct = 8.0 * 2f64.sqrt() / 3.0;
    // vertex solid angles are TRI_MIN and SQ_MIN
    let in_tet = 4.0 * TRI_MIN / 3.0;
    let in_oct = 6.0 * SQ_MIN / 3.0;
    HcpCell {
        vol_tet,
        vol_oct,
        rho_tet: in_tet / vol_tet,
        rho_oct: in_oct / vol_oct,
        rho_bar: relative_density(&[2.0 * vol_tet, vol_oct], &[in_tet / vol_tet, in_oct / vol_oct])
            .expect("two cells"),
    }
}

pub fn relative_density(weights: &[f64], densities: &[f64]) -> Result<f64> {
    if weights.len() != densities.len() {
        return Err(Error::LengthMismatch(weights.len(), densities.len()));
    }
    if weights.is_empty() || weights.iter().any(|&w| w.is_nan() || w <= 0.0) {
        return Err(Error::Infeasible("weights must be positive"));
    }
    let num: f64 = weights.iter().zip(densities).map(|(w, r)| w * r).sum();
    Ok(num / weights.iter().sum::<f64>())
}

fn cap(t: f64) -> f64 {
    let t = t.clamp(0.0, 2.0);
    PI * t * t * (3.0 - t) / 3.0
}

/// Density of the prism over an equilateral triangle of centres.
pub fn prism_density(side: f64, heights: [f64; 3]) -> Result<f64> {
    prism_density_triangle([side; 3], heights)
}

/// Density of the prism T x [-H, H] over a triangle T of sphere centres.
///
/// Sphere i sits opposite sides[i] at height h_i >= 1, with a mirror image
/// below the table.
pub fn prism_density_triangle(sides: [f64; 3], heights: [f64; 3]) -> Result<f64> {
    if let Some(&s) = sides.iter().find(|&&s| s < 2.0 - 1e-12) {
        return Err(Error::Overlap(s));
    }
    if let Some(&h) = heights.iter().find(|&&h| h.is_nan() || h < 1.0) {
        return Err(Error::OutOfRange {
            value: h,
            lo: 1.0,
            hi: f64::INFINITY,
        });
    }
    let [a, b, c] = sides;
    let p = (a + b + c) / 2.0;
    let area2 = p * (p - a) * (p - b) * (p - c);
    if area2 <= 0.0 {
        return Err(Error::Infeasible("centres are collinear"));
    }
    let area = area2.sqrt();
    if sides.iter().any(|&s| 2.0 * area / s < 1.0) {
        return Err(Error::Infeasible("altitude below 1"));
    }
    // angle at the vertex opposite side i
    let ang = |x: f64, y: f64, z: f64| ((y * y + z * z - x * x) / (2.0 * y * z)).acos();
    let theta = [ang(a, b, c), ang(b, c, a), ang(c, a, b)];
    let top = heights.iter().copied().fold(f64::MIN, f64::max);
    let content: f64 = theta
        .iter()
        .zip(heights)
        .map(|(t, h)| t / PI * cap(top - h + 1.0))
        .sum();
    Ok(content / (2.0 * top * area))
}
