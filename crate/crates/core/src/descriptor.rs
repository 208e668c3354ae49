//! The chaos-map texture descriptor.
//!
//! An image is embedded as a point cloud, the cloud is iterated `n_iter`
//! times under a chaotic map, and every iterate is reconstructed into an
//! image `I_k`. For each step `k` the descriptor collects riu2 LBP histograms
//! of the blends `(1 - w) I_{k-1} + w I_k` for `w = 0, delta, 2 delta, ..., 1`.
//! Blends at `w = 1` of step `k` and `w = 0` of step `k + 1` describe the same
//! image; both are kept, so the vector length is
//! `scales * n_iter * (1/delta + 1) * sum(P + 2)`.

use serde::{Deserialize, Serialize};

use crate::embedding::{blend, embed, reconstruct, GrayImage, PointCloud};
use crate::error::{Error, Result};
use crate::lbp::{lbp_histogram, LbpParams};
use crate::maps::ChaoticMap;
use crate::pca::PcaDims;

/// Anything that can advance a point cloud by one step.
pub trait CloudMap {
    fn map_cloud(&self, cloud: &PointCloud) -> Result<PointCloud>;
}

impl CloudMap for ChaoticMap {
    fn map_cloud(&self, cloud: &PointCloud) -> Result<PointCloud> {
        self.step_cloud(cloud)
    }
}

/// Leaves the cloud untouched; every blend then collapses to the input image.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityMap;

impl CloudMap for IdentityMap {
    fn map_cloud(&self, cloud: &PointCloud) -> Result<PointCloud> {
        Ok(cloud.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescriptorConfig {
    pub map: ChaoticMap,
    pub n_iter: usize,
    pub delta: f64,
    pub lbp: Vec<LbpParams>,
    pub scales: Vec<f64>,
    pub pca_dims: PcaDims,
}

impl Default for DescriptorConfig {
    fn default() -> Self {
        DescriptorConfig {
            map: ChaoticMap::logistic(),
            n_iter: 10,
            delta: 0.1,
            lbp: vec![LbpParams::default()],
            scales: vec![1.0],
            pca_dims: PcaDims::Auto,
        }
    }
}

impl DescriptorConfig {
    /// Defaults plus the 0.75 and 0.5 downsampled copies.
    pub fn multiscale() -> Self {
        DescriptorConfig { scales: vec![1.0, 0.75, 0.5], ..Self::default() }
    }

    pub fn with_map(mut self, map: ChaoticMap) -> Self {
        self.map = map;
        self
    }

    pub fn with_iterations(mut self, n_iter: usize) -> Self {
        self.n_iter = n_iter;
        self
    }

    /// Number of blend intervals, `1 / delta`.
    pub fn blend_steps(&self) -> Result<usize> {
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(Error::config(format!("delta must lie in (0, 1], got {}", self.delta)));
        }
        let inv = 1.0 / self.delta;
        let steps = inv.round();
        if (inv - steps).abs() > 1e-9 {
            return Err(Error::config(format!("1/delta must be an integer, got {inv}")));
        }
        Ok(steps as usize)
    }

    pub fn validate(&self) -> Result<()> {
        self.map.validate()?;
        self.blend_steps()?;
        if self.n_iter == 0 {
            return Err(Error::config("n_iter must be at least 1"));
        }
        if self.lbp.is_empty() {
            return Err(Error::config("at least one LBP (P,R) pair is required"));
        }
        for p in &self.lbp {
            p.validate()?;
        }
        if self.scales.is_empty() {
            return Err(Error::config("at least one scale is required"));
        }
        if let Some(s) = self.scales.iter().find(|s| !(**s > 0.0 && **s <= 1.0)) {
            return Err(Error::config(format!("scale {s} outside (0, 1]")));
        }
        Ok(())
    }

    pub fn layout(&self) -> Result<FeatureLayout> {
        self.validate()?;
        Ok(FeatureLayout {
            scales: self.scales.clone(),
            n_iter: self.n_iter,
            blend_steps: self.blend_steps()?,
            lbp: self.lbp.clone(),
        })
    }
}

/// Where each histogram sits inside a feature vector.
///
/// Order is scale, then iteration `k = 1..=n_iter`, then blend step
/// `i = 0..=blend_steps`, then LBP parameter set, then bin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureLayout {
    pub scales: Vec<f64>,
    pub n_iter: usize,
    pub blend_steps: usize,
    pub lbp: Vec<LbpParams>,
}

impl FeatureLayout {
    fn histogram_width(&self) -> usize {
        self.lbp.iter().map(LbpParams::bins).sum()
    }

    pub fn len(&self) -> usize {
        self.scales.len() * self.n_iter * (self.blend_steps + 1) * self.histogram_width()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Offset of the histogram for `(scale index, k, i, lbp index)`; `k` is 1-based.
    pub fn offset(&self, scale: usize, k: usize, i: usize, param: usize) -> usize {
        assert!(scale < self.scales.len() && (1..=self.n_iter).contains(&k));
        assert!(i <= self.blend_steps && param < self.lbp.len());
        let per_step = self.histogram_width();
        let per_iter = (self.blend_steps + 1) * per_step;
        let per_scale = self.n_iter * per_iter;
        let within: usize = self.lbp[..param].iter().map(LbpParams::bins).sum();
        scale * per_scale + (k - 1) * per_iter + i * per_step + within
    }

    /// Column names such as `s1_k3_i4_p8r1_b7`.
    pub fn column_names(&self) -> Vec<String> {
        let mut names = Vec::with_capacity(self.len());
        for s in &self.scales {
            for k in 1..=self.n_iter {
                for i in 0..=self.blend_steps {
                    for p in &self.lbp {
                        for b in 0..p.bins() {
                            names.push(format!("s{s}_k{k}_i{i}_p{}r{}_b{b}", p.points, p.radius));
                        }
                    }
                }
            }
        }
        names
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub values: Vec<f64>,
    pub layout: FeatureLayout,
}

impl FeatureVector {
    /// The `P + 2` bins at the given position.
    pub fn histogram(&self, scale: usize, k: usize, i: usize, param: usize) -> &[f64] {
        let start = self.layout.offset(scale, k, i, param);
        &self.values[start..start + self.layout.lbp[param].bins()]
    }
}

/// `[I_0, I_1, ..., I_n]`. The cloud itself is carried from step to step;
/// reconstructed images are never re-embedded.
pub fn iterate_images<M: CloudMap + ?Sized>(image: &GrayImage, map: &M, n_iter: usize) -> Result<Vec<GrayImage>> {
    let mut images = Vec::with_capacity(n_iter + 1);
    images.push(image.clone());
    let mut cloud = embed(image);
    for _ in 0..n_iter {
        cloud = map.map_cloud(&cloud)?;
        images.push(reconstruct(&cloud));
    }
    Ok(images)
}

/// Area-averaging downsample to `round(scale * size)` pixels per axis.
pub fn resize(image: &GrayImage, scale: f64) -> Result<GrayImage> {
    if !(scale > 0.0 && scale <= 1.0) {
        return Err(Error::config(format!("scale {scale} outside (0, 1]")));
    }
    if scale == 1.0 {
        return Ok(image.clone());
    }
    let (w, h) = (image.width(), image.height());
    let nw = ((w as f64 * scale).round() as usize).max(1);
    let nh = ((h as f64 * scale).round() as usize).max(1);
    let wx = area_weights(w, nw);
    let wy = area_weights(h, nh);

    let mut horizontal = vec![0.0; h * nw];
    for r in 0..h {
        for (c, taps) in wx.iter().enumerate() {
            horizontal[r * nw + c] = taps.iter().map(|&(k, t)| t * image.get(r, k)).sum();
        }
    }
    let mut out = Vec::with_capacity(nh * nw);
    for taps in &wy {
        for c in 0..nw {
            let v: f64 = taps.iter().map(|&(k, t)| t * horizontal[k * nw + c]).sum();
            out.push(v.clamp(0.0, 1.0));
        }
    }
    GrayImage::new(nw, nh, out)
}

/// For each output cell, the input cells it covers and their normalized overlap.
fn area_weights(src: usize, dst: usize) -> Vec<Vec<(usize, f64)>> {
    let ratio = src as f64 / dst as f64;
    (0..dst)
        .map(|o| {
            let (start, end) = (o as f64 * ratio, (o + 1) as f64 * ratio);
            let lo = start.floor() as usize;
            let hi = (end.ceil() as usize).min(src);
            (lo..hi)
                .filter_map(|k| {
                    let overlap = (end.min(k as f64 + 1.0) - start.max(k as f64)) / ratio;
                    (overlap > 0.0).then_some((k, overlap))
                })
                .collect()
        })
        .collect()
}

/// Full descriptor with the configured chaotic map.
pub fn extract(image: &GrayImage, config: &DescriptorConfig) -> Result<FeatureVector> {
    extract_with(image, config, &config.map)
}

/// Descriptor with an arbitrary cloud map standing in for `config.map`.
pub fn extract_with<M: CloudMap + ?Sized>(
    image: &GrayImage,
    config: &DescriptorConfig,
    map: &M,
) -> Result<FeatureVector> {
    let layout = config.layout()?;
    let steps = layout.blend_steps;
    let mut values = Vec::with_capacity(layout.len());

    for &scale in &config.scales {
        let scaled = resize(image, scale)?;
        check_size(&scaled, scale, &config.lbp)?;
        let images = iterate_images(&scaled, map, config.n_iter)?;
        for pair in images.windows(2) {
            for i in 0..=steps {
                let blended = blend(&pair[0], &pair[1], i as f64 / steps as f64)?;
                for params in &config.lbp {
                    values.extend(lbp_histogram(&blended, params)?.bins);
                }
            }
        }
    }
    debug_assert_eq!(values.len(), layout.len());
    Ok(FeatureVector { values, layout })
}

/// Plain LBP histograms of the (scaled) input image, without any chaos.
pub fn extract_plain(image: &GrayImage, config: &DescriptorConfig) -> Result<Vec<f64>> {
    config.validate()?;
    let mut values = Vec::new();
    for &scale in &config.scales {
        let scaled = resize(image, scale)?;
        check_size(&scaled, scale, &config.lbp)?;
        for params in &config.lbp {
            values.extend(lbp_histogram(&scaled, params)?.bins);
        }
    }
    Ok(values)
}

fn check_size(image: &GrayImage, scale: f64, lbp: &[LbpParams]) -> Result<()> {
    for p in lbp {
        let need = 2 * p.margin() + 1;
        if image.width() < need || image.height() < need {
            return Err(Error::ImageTooSmall(format!(
                "at scale {scale} the image is {}x{}, radius {} needs {need}x{need}",
                image.width(),
                image.height(),
                p.radius
            )));
        }
    }
    Ok(())
}
