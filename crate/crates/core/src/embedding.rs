//! Images as point clouds in the unit cube, and back.
//!
//! A pixel `(i, j)` (1-based) of an `m x n` image becomes the point
//! `(i/m, j/n, I(i, j))`. After the cloud has been pushed through a chaotic
//! map, [`reconstruct`] turns it back into an `m x n` image by ranking the
//! distinct row and column coordinates and spreading the ranks over the grid.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Spatial coordinates closer than this are treated as the same value.
const UNIQUE_SCALE: f64 = 1e12;

/// Grayscale image with intensities in `[0, 1]`, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::contract("image must have at least one pixel"));
        }
        if pixels.len() != width * height {
            return Err(Error::contract(format!("{} pixels supplied for a {width}x{height} image", pixels.len())));
        }
        if let Some(bad) = pixels.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::domain(format!("intensity {bad} outside [0, 1]")));
        }
        Ok(GrayImage { width, height, pixels })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width * height);
        for r in 0..height {
            for c in 0..width {
                pixels.push(f(r, c));
            }
        }
        Self::new(width, height, pixels)
    }

    pub fn constant(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    /// Builds an image from rows; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::contract("ragged rows"));
        }
        Self::new(width, height, rows.concat())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<f64> {
        self.pixels
    }

    /// Pixel at 0-based `(row, col)`.
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.pixels[row * self.width + col]
    }

    pub fn mean(&self) -> f64 {
        sorted_mean(&self.pixels)
    }

    /// Mean absolute pixel difference; images must share dimensions.
    pub fn mean_abs_diff(&self, other: &GrayImage) -> Result<f64> {
        same_dims(self, other)?;
        let total: f64 = self.pixels.iter().zip(&other.pixels).map(|(a, b)| (a - b).abs()).sum();
        Ok(total / self.pixels.len() as f64)
    }
}

fn same_dims(a: &GrayImage, b: &GrayImage) -> Result<()> {
    if a.width != b.width || a.height != b.height {
        return Err(Error::contract(format!(
            "dimension mismatch: {}x{} vs {}x{}",
            a.width, a.height, b.width, b.height
        )));
    }
    Ok(())
}

/// `m*n` points `(row, col, intensity)` in `[0, 1]^3`, plus the source image size.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    points: Vec<[f64; 3]>,
    height: usize,
    width: usize,
}

impl PointCloud {
    pub fn new(points: Vec<[f64; 3]>, height: usize, width: usize) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::contract("point cloud needs a non-empty source image"));
        }
        if points.len() != height * width {
            return Err(Error::contract(format!("{} points for a {height}x{width} source image", points.len())));
        }
        if let Some(bad) = points.iter().flatten().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::domain(format!("coordinate {bad} outside [0, 1]")));
        }
        Ok(PointCloud { points, height, width })
    }

    /// Builds a cloud from a flat row-major matrix with `cols` columns.
    pub fn from_flat(data: &[f64], cols: usize, height: usize, width: usize) -> Result<Self> {
        if cols != 3 {
            return Err(Error::contract(format!("point cloud needs 3 columns, got {cols}")));
        }
        if !data.len().is_multiple_of(3) {
            return Err(Error::contract("flat data length is not a multiple of 3"));
        }
        let points = data.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect();
        Self::new(points, height, width)
    }

    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Lifts every pixel to `(i/m, j/n, I(i, j))` with 1-based `i, j`.
pub fn embed(image: &GrayImage) -> PointCloud {
    let (m, n) = (image.height, image.width);
    let mut points = Vec::with_capacity(m * n);
    for i in 1..=m {
        for j in 1..=n {
            points.push([i as f64 / m as f64, j as f64 / n as f64, image.get(i - 1, j - 1)]);
        }
    }
    PointCloud { points, height: m, width: n }
}

/// Output of [`reconstruct_detailed`].
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub image: GrayImage,
    /// Row-major flags: `true` where at least one point landed.
    pub assigned: Vec<bool>,
    /// Cells that received more than one point.
    pub collisions: usize,
}

impl Reconstruction {
    pub fn holes(&self) -> usize {
        self.assigned.iter().filter(|a| !**a).count()
    }
}

/// Rebuilds an `m x n` image from a (possibly iterated) cloud.
pub fn reconstruct(cloud: &PointCloud) -> GrayImage {
    reconstruct_detailed(cloud).image
}

/// Rank-placement reconstruction.
///
/// A point whose row coordinate has rank `r` (1-based) among the `u` distinct
/// row coordinates goes to grid row `ceil(r * m / u)`; columns likewise with
/// `n`. Cells hit by several points take the mean of their intensities. Empty
/// cells copy the preceding cell in row-major order; an empty first cell takes
/// the mean intensity of the whole cloud.
pub fn reconstruct_detailed(cloud: &PointCloud) -> Reconstruction {
    let (m, n) = (cloud.height, cloud.width);
    let rows = rank_cells(cloud.points.iter().map(|p| p[0]), m);
    let cols = rank_cells(cloud.points.iter().map(|p| p[1]), n);

    let mut placed: Vec<(usize, f64)> =
        rows.iter().zip(&cols).zip(&cloud.points).map(|((&r, &c), p)| (r * n + c, p[2])).collect();
    // Sorting by value inside each cell makes the sums independent of input order.
    placed.sort_unstable_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let mut pixels = vec![0.0; m * n];
    let mut assigned = vec![false; m * n];
    let mut collisions = 0;
    for group in placed.chunk_by(|a, b| a.0 == b.0) {
        let cell = group[0].0;
        let sum: f64 = group.iter().map(|&(_, v)| v).sum();
        pixels[cell] = (sum / group.len() as f64).clamp(0.0, 1.0);
        assigned[cell] = true;
        if group.len() > 1 {
            collisions += 1;
        }
    }

    let intensities: Vec<f64> = cloud.points.iter().map(|p| p[2]).collect();
    let mut carry = sorted_mean(&intensities);
    for (v, &hit) in pixels.iter_mut().zip(&assigned) {
        if hit {
            carry = *v;
        } else {
            *v = carry;
        }
    }

    Reconstruction { image: GrayImage { width: n, height: m, pixels }, assigned, collisions }
}

/// 0-based grid index along one axis for every coordinate value.
fn rank_cells(values: impl Iterator<Item = f64> + Clone, size: usize) -> Vec<usize> {
    let keys: Vec<i64> = values.map(unique_key).collect();
    let mut unique = keys.clone();
    unique.sort_unstable();
    unique.dedup();
    let u = unique.len();
    keys.iter()
        .map(|k| {
            let rank = unique.binary_search(k).expect("key present") + 1;
            (rank * size).div_ceil(u) - 1
        })
        .collect()
}

#[inline]
fn unique_key(v: f64) -> i64 {
    (v * UNIQUE_SCALE).round() as i64
}

fn sorted_mean(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    sorted.iter().sum::<f64>() / sorted.len() as f64
}

/// Pixelwise `(1 - w) * a + w * b`.
pub fn blend(a: &GrayImage, b: &GrayImage, w: f64) -> Result<GrayImage> {
    same_dims(a, b)?;
    if !(0.0..=1.0).contains(&w) {
        return Err(Error::domain(format!("blend weight {w} outside [0, 1]")));
    }
    let pixels = a.pixels.iter().zip(&b.pixels).map(|(&x, &y)| ((1.0 - w) * x + w * y).clamp(0.0, 1.0)).collect();
    Ok(GrayImage { width: a.width, height: a.height, pixels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_image() -> impl Strategy<Value = GrayImage> {
        (1usize..12, 1usize..12).prop_flat_map(|(w, h)| {
            proptest::collection::vec(0.0f64..=1.0, w * h).prop_map(move |px| GrayImage::new(w, h, px).unwrap())
        })
    }

    #[test]
    fn embed_single_pixel() {
        let img = GrayImage::from_rows(&[vec![0.5]]).unwrap();
        assert_eq!(embed(&img).points(), &[[1.0, 1.0, 0.5]]);
    }

    #[test]
    fn embed_two_by_two() {
        let img = GrayImage::from_rows(&[vec![0.0, 0.25], vec![0.5, 1.0]]).unwrap();
        let want = [[0.5, 0.5, 0.0], [0.5, 1.0, 0.25], [1.0, 0.5, 0.5], [1.0, 1.0, 1.0]];
        assert_eq!(embed(&img).points(), &want);
    }

    #[test]
    fn rejects_bad_images() {
        assert!(GrayImage::new(0, 3, vec![]).is_err());
        assert!(GrayImage::new(2, 2, vec![0.0; 3]).is_err());
        assert!(GrayImage::new(1, 1, vec![1.5]).is_err());
        assert!(GrayImage::new(1, 1, vec![f64::NAN]).is_err());
    }

    #[test]
    fn cloud_needs_three_columns() {
        assert!(matches!(PointCloud::from_flat(&[0.0; 4], 2, 1, 2), Err(Error::Contract(_))));
        assert!(PointCloud::from_flat(&[0.5; 6], 3, 1, 2).is_ok());
    }

    #[test]
    fn single_point_reconstructs() {
        let cloud = PointCloud::new(vec![[1.0, 1.0, 0.7]], 1, 1).unwrap();
        assert_eq!(reconstruct(&cloud).pixels(), &[0.7]);
    }

    #[test]
    fn full_collision_fills_with_mean() {
        let pts = vec![[0.5, 0.5, 0.2], [0.5, 0.5, 0.4], [0.5, 0.5, 0.2], [0.5, 0.5, 0.4]];
        let cloud = PointCloud::new(pts, 2, 2).unwrap();
        let rec = reconstruct_detailed(&cloud);
        // everything lands in the last cell
        assert_eq!(rec.assigned, vec![false, false, false, true]);
        assert_eq!(rec.collisions, 1);
        for v in rec.image.pixels() {
            assert!((v - 0.3).abs() < 1e-15);
        }
    }

    #[test]
    fn holes_copy_previous_cell() {
        // Column ranks {0.1 -> 1, 0.9 -> 2} spread over n = 3: cells 2 and 3.
        let pts = vec![[1.0, 0.1, 0.6], [1.0, 0.9, 0.2], [1.0, 0.9, 0.4]];
        let cloud = PointCloud::new(pts, 1, 3).unwrap();
        let rec = reconstruct_detailed(&cloud);
        assert_eq!(rec.assigned, vec![false, true, true]);
        let px = rec.image.pixels();
        assert!((px[0] - 0.4).abs() < 1e-15); // cloud mean
        assert_eq!(px[1], 0.6);
        assert!((px[2] - 0.3).abs() < 1e-15);

        let pts = vec![[0.2, 0.1, 0.6], [0.2, 0.2, 0.8], [0.2, 0.2, 0.1], [0.2, 0.2, 0.5]];
        let rec = reconstruct_detailed(&PointCloud::new(pts, 2, 2).unwrap());
        // row rank 1 of 1 -> row 2; columns 0.1 -> col 1, 0.2 -> col 2
        assert_eq!(rec.assigned, vec![false, false, true, true]);
        let px = rec.image.pixels();
        let mean = (0.6 + 0.8 + 0.1 + 0.5) / 4.0;
        assert!((px[0] - mean).abs() < 1e-15 && (px[1] - mean).abs() < 1e-15);
        assert!((px[3] - (0.1 + 0.5 + 0.8) / 3.0).abs() < 1e-15);
    }

    #[test]
    fn spatial_permutation_places_every_intensity() {
        let (m, n) = (4usize, 5usize);
        let row_perm = [2usize, 0, 3, 1];
        let col_perm = [4usize, 1, 0, 3, 2];
        let mut pts = Vec::new();
        for i in 0..m {
            for j in 0..n {
                let v = (i * n + j) as f64 / 32.0;
                pts.push([(row_perm[i] + 1) as f64 / m as f64, ((col_perm[j] + 1) as f64 / n as f64).powi(2), v]);
            }
        }
        let rec = reconstruct_detailed(&PointCloud::new(pts.clone(), m, n).unwrap());
        assert_eq!(rec.holes(), 0);
        assert_eq!(rec.collisions, 0);
        let mut placed = rec.image.pixels().to_vec();
        let mut source: Vec<f64> = pts.iter().map(|p| p[2]).collect();
        placed.sort_by(f64::total_cmp);
        source.sort_by(f64::total_cmp);
        assert_eq!(placed, source);
        assert_eq!(rec.image.get(row_perm[1], col_perm[2]), (n + 2) as f64 / 32.0);
    }

    #[test]
    fn blend_examples() {
        let a = GrayImage::constant(3, 3, 0.2).unwrap();
        let b = GrayImage::constant(3, 3, 0.6).unwrap();
        assert_eq!(blend(&a, &b, 0.0).unwrap(), a);
        assert_eq!(blend(&a, &b, 1.0).unwrap(), b);
        for v in blend(&a, &b, 0.5).unwrap().pixels() {
            assert!((v - 0.4).abs() < 1e-15);
        }
        let c = GrayImage::constant(3, 4, 0.6).unwrap();
        assert!(matches!(blend(&a, &c, 0.5), Err(Error::Contract(_))));
    }

    proptest! {
        #[test]
        fn roundtrip_is_identity(img in arb_image()) {
            prop_assert_eq!(reconstruct(&embed(&img)), img);
        }

        #[test]
        fn reconstruct_ignores_row_order(img in arb_image(), seed in any::<u64>()) {
            let cloud = crate::maps::ChaoticMap::logistic().step_cloud(&embed(&img)).unwrap();
            let mut pts = cloud.points().to_vec();
            let len = pts.len();
            let mut s = seed;
            for i in (1..len).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                pts.swap(i, (s >> 33) as usize % (i + 1));
            }
            let shuffled = PointCloud::new(pts, cloud.height(), cloud.width()).unwrap();
            prop_assert_eq!(reconstruct(&cloud), reconstruct(&shuffled));
        }

        #[test]
        fn blend_is_affine(a in arb_image(), w in 0.0f64..=1.0, seed in 0.0f64..1.0) {
            let b = GrayImage::from_fn(a.width(), a.height(), |r, c| ((r * 7 + c * 3) as f64 * 0.13 + seed).fract()).unwrap();
            let ab = blend(&a, &b, w).unwrap();
            let ba = blend(&b, &a, w).unwrap();
            for i in 0..a.pixels().len() {
                let lhs = ab.pixels()[i] + ba.pixels()[i];
                prop_assert!((lhs - a.pixels()[i] - b.pixels()[i]).abs() <= 1e-12);
            }
        }
    }
}
