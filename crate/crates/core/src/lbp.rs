//! Rotation-invariant uniform local binary patterns (riu2).
//!
//! Each pixel is compared with `P` samples on a circle of radius `R`. Patterns
//! with at most two circular 0/1 transitions are coded by their number of
//! ones (`0..=P`); all other patterns share the code `P + 1`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::embedding::GrayImage;
use crate::error::{Error, Result};

/// Sample offsets within this distance of an integer are read without interpolation.
const GRID_SNAP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LbpParams {
    /// Number of circular samples (`P`).
    pub points: usize,
    /// Sampling radius in pixels (`R`).
    pub radius: f64,
}

impl LbpParams {
    pub fn new(points: usize, radius: f64) -> Result<Self> {
        let p = LbpParams { points, radius };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points < 4 {
            return Err(Error::config(format!("LBP needs P >= 4, got {}", self.points)));
        }
        if !self.radius.is_finite() || self.radius < 1.0 {
            return Err(Error::config(format!("LBP needs R >= 1, got {}", self.radius)));
        }
        Ok(())
    }

    /// Histogram length, `P + 2`.
    pub fn bins(&self) -> usize {
        self.points + 2
    }

    /// Pixels skipped along each border.
    pub fn margin(&self) -> usize {
        (self.radius - GRID_SNAP).ceil() as usize
    }
}

impl Default for LbpParams {
    fn default() -> Self {
        LbpParams { points: 8, radius: 1.0 }
    }
}

impl fmt::Display for LbpParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.points, self.radius)
    }
}

/// Parses `P,R`, e.g. `8,1` or `16,2`.
impl FromStr for LbpParams {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (p, r) = s.split_once(',').ok_or_else(|| Error::config(format!("expected `P,R`, got `{s}`")))?;
        let points = p.trim().parse().map_err(|_| Error::config(format!("bad LBP point count `{p}`")))?;
        let radius = r.trim().parse().map_err(|_| Error::config(format!("bad LBP radius `{r}`")))?;
        LbpParams::new(points, radius)
    }
}

/// Normalized riu2 histogram with `P + 2` bins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LbpHistogram {
    pub bins: Vec<f64>,
    pub params: LbpParams,
    /// Number of pixels that contributed.
    pub coded: usize,
}

/// riu2 code of a circular bit pattern.
pub fn riu2_code(bits: &[bool]) -> usize {
    let p = bits.len();
    let transitions = (0..p).filter(|&i| bits[i] != bits[(i + 1) % p]).count();
    if transitions <= 2 {
        bits.iter().filter(|b| **b).count()
    } else {
        p + 1
    }
}

/// Codes one pixel from its `points` neighbor samples. Ties count as ones.
pub fn code_pixel(neighborhood: &[f64], center: f64, points: usize) -> Result<usize> {
    if neighborhood.len() != points {
        return Err(Error::contract(format!("expected {points} neighbors, got {}", neighborhood.len())));
    }
    if !center.is_finite() || neighborhood.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain("non-finite neighborhood value"));
    }
    let bits: Vec<bool> = neighborhood.iter().map(|&g| g - center >= 0.0).collect();
    Ok(riu2_code(&bits))
}

#[derive(Debug, Clone, Copy)]
struct Sample {
    dy: isize,
    dx: isize,
    fy: f64,
    fx: f64,
}

fn samples(params: &LbpParams) -> Vec<Sample> {
    (0..params.points)
        .map(|p| {
            let theta = 2.0 * PI * p as f64 / params.points as f64;
            let y = snap(-params.radius * theta.sin());
            let x = snap(params.radius * theta.cos());
            let (y0, x0) = (y.floor(), x.floor());
            Sample { dy: y0 as isize, dx: x0 as isize, fy: y - y0, fx: x - x0 }
        })
        .collect()
}

fn snap(v: f64) -> f64 {
    let r = v.round();
    if (v - r).abs() < GRID_SNAP {
        r
    } else {
        v
    }
}

/// riu2 histogram of an arbitrary finite grid (values need not lie in `[0, 1]`).
///
/// Only pixels whose full sampling circle lies inside the grid are coded.
/// Interpolation is applied to differences from the center value, so a
/// neighborhood equal to the center compares as an exact tie.
pub fn lbp_histogram_grid(pixels: &[f64], width: usize, height: usize, params: &LbpParams) -> Result<LbpHistogram> {
    params.validate()?;
    if pixels.len() != width * height {
        return Err(Error::contract("pixel count does not match dimensions"));
    }
    let margin = params.margin();
    if width < 2 * margin + 1 || height < 2 * margin + 1 {
        return Err(Error::ImageTooSmall(format!(
            "{width}x{height} image cannot host P={} R={} neighborhoods",
            params.points, params.radius
        )));
    }
    let offsets = samples(params);
    let mut counts = vec![0usize; params.bins()];
    let mut bits = vec![false; params.points];
    let at = |r: isize, c: isize| pixels[r as usize * width + c as usize];

    for r in margin..height - margin {
        for c in margin..width - margin {
            let center = pixels[r * width + c];
            for (bit, s) in bits.iter_mut().zip(&offsets) {
                let (y, x) = (r as isize + s.dy, c as isize + s.dx);
                let diff = if s.fy == 0.0 && s.fx == 0.0 {
                    at(y, x) - center
                } else if s.fy == 0.0 {
                    lerp(at(y, x) - center, at(y, x + 1) - center, s.fx)
                } else if s.fx == 0.0 {
                    lerp(at(y, x) - center, at(y + 1, x) - center, s.fy)
                } else {
                    let top = lerp(at(y, x) - center, at(y, x + 1) - center, s.fx);
                    let bottom = lerp(at(y + 1, x) - center, at(y + 1, x + 1) - center, s.fx);
                    lerp(top, bottom, s.fy)
                };
                *bit = diff >= 0.0;
            }
            counts[riu2_code(&bits)] += 1;
        }
    }

    let coded: usize = counts.iter().sum();
    let bins = counts.iter().map(|&c| c as f64 / coded as f64).collect();
    Ok(LbpHistogram { bins, params: *params, coded })
}

#[inline]
fn lerp(a: f64, b: f64, t: f64) -> f64 {
    a + t * (b - a)
}

pub fn lbp_histogram(image: &GrayImage, params: &LbpParams) -> Result<LbpHistogram> {
    lbp_histogram_grid(image.pixels(), image.width(), image.height(), params)
}
