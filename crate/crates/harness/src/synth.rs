//! Synthetic texture dataset: noisy sinusoidal gratings.
//!
//! Rotation-invariant LBP cannot tell orientations apart, so each class pairs
//! an orientation with its own period. Pixels are
//! `0.9 * (0.5 + 0.5 sin(phase)) + 0.1 * U(0, 1)`, stored as 8-bit PNG.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use image::{GrayImage as PngImage, Luma};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GratingClass {
    pub period: f64,
    pub angle_deg: f64,
}

impl GratingClass {
    pub fn label(&self) -> String {
        format!("grating_p{}_a{}", self.period, self.angle_deg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub classes: Vec<GratingClass>,
    pub per_class: usize,
    pub size: usize,
    pub noise: f64,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        let classes = [(4.0, 0.0), (6.0, 45.0), (9.0, 90.0), (13.0, 135.0)]
            .map(|(period, angle_deg)| GratingClass { period, angle_deg })
            .to_vec();
        SynthSpec { classes, per_class: 40, size: 64, noise: 0.1, seed: 2024 }
    }
}

/// Intensities in `[0, 1]`, row-major. The phase is random per image.
pub fn grating(class: &GratingClass, size: usize, noise: f64, rng: &mut impl Rng) -> Vec<f64> {
    let phase = rng.random_range(0.0..2.0 * PI);
    let (s, c) = class.angle_deg.to_radians().sin_cos();
    let mut out = Vec::with_capacity(size * size);
    for row in 0..size {
        for col in 0..size {
            let t = 2.0 * PI * (col as f64 * c + row as f64 * s) / class.period + phase;
            let wave = 0.5 + 0.5 * t.sin();
            out.push((1.0 - noise) * wave + noise * rng.random::<f64>());
        }
    }
    out
}

/// Writes `<out>/<label>/<nnn>.png` for every class and returns the labels.
pub fn generate(out: &Path, spec: &SynthSpec) -> Result<Vec<String>> {
    if spec.classes.len() < 2 || spec.per_class == 0 || spec.size < 3 {
        return Err(HarnessError::usage("synthetic dataset needs >= 2 classes, >= 1 image each, size >= 3"));
    }
    if !(0.0..=1.0).contains(&spec.noise) {
        return Err(HarnessError::usage(format!("noise {} outside [0, 1]", spec.noise)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut labels = Vec::new();
    for class in &spec.classes {
        let label = class.label();
        let dir = out.join(&label);
        fs::create_dir_all(&dir).map_err(|e| HarnessError::io(&dir, e))?;
        for i in 0..spec.per_class {
            let pixels = grating(class, spec.size, spec.noise, &mut rng);
            let side = spec.size as u32;
            let img = PngImage::from_fn(side, side, |x, y| {
                let v = pixels[y as usize * spec.size + x as usize];
                Luma([(v * 255.0).round() as u8])
            });
            let path = dir.join(format!("{i:03}.png"));
            img.save(&path).map_err(|e| HarnessError::data(format!("{}: {e}", path.display())))?;
        }
        labels.push(label);
    }
    Ok(labels)
}
