//! Directory-per-class image datasets.
//!
//! ```text
//! root/
//!   canvas/
//!     sample_a/img001.png     <- grouped: the folder name becomes the group id
//!     sample_b/img002.png
//!   cork/
//!     img003.jpg              <- ungrouped
//! ```
//!
//! Hidden entries (leading `.`) are ignored, which keeps the feature cache
//! out of the index.

use std::fs;
use std::path::{Path, PathBuf};

use chaostex_core::GrayImage;
use image::DynamicImage;
use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

const IMAGE_EXTENSIONS: [&str; 3] = ["png", "jpg", "jpeg"];

/// One labelled image. `path` is relative to the dataset root and uses `/`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sample {
    pub path: String,
    pub label: String,
    pub group: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassEntries {
    pub label: String,
    pub samples: Vec<Sample>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetIndex {
    pub root: PathBuf,
    /// Sorted by label; samples sorted by path.
    pub classes: Vec<ClassEntries>,
    /// Files that failed to decode and were dropped under `skip_bad`.
    pub skipped: Vec<(String, String)>,
}

impl DatasetIndex {
    pub fn labels(&self) -> Vec<String> {
        self.classes.iter().map(|c| c.label.clone()).collect()
    }

    /// All samples, class by class.
    pub fn samples(&self) -> Vec<Sample> {
        self.classes.iter().flat_map(|c| c.samples.iter().cloned()).collect()
    }

    pub fn len(&self) -> usize {
        self.classes.iter().map(|c| c.samples.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn absolute(&self, sample: &Sample) -> PathBuf {
        self.root.join(&sample.path)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct IngestOptions {
    /// Drop undecodable files instead of failing.
    pub skip_bad: bool,
}

fn is_hidden(path: &Path) -> bool {
    path.file_name().and_then(|n| n.to_str()).is_some_and(|n| n.starts_with('.'))
}

fn is_image(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| IMAGE_EXTENSIONS.iter().any(|x| e.eq_ignore_ascii_case(x)))
}

fn sorted_entries(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| HarnessError::io(dir, e))? {
        let path = entry.map_err(|e| HarnessError::io(dir, e))?.path();
        if !is_hidden(&path) {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

fn file_name(path: &Path) -> Result<String> {
    path.file_name()
        .and_then(|n| n.to_str())
        .map(str::to_owned)
        .ok_or_else(|| HarnessError::data(format!("{} is not valid UTF-8", path.display())))
}

/// Indexes `root` and checks that every image decodes.
pub fn ingest(root: &Path, options: IngestOptions) -> Result<DatasetIndex> {
    if !root.is_dir() {
        return Err(HarnessError::data(format!("{} is not a directory", root.display())));
    }
    let mut classes = Vec::new();
    for class_dir in sorted_entries(root)?.into_iter().filter(|p| p.is_dir()) {
        let label = file_name(&class_dir)?;
        let mut samples = Vec::new();
        for entry in sorted_entries(&class_dir)? {
            if entry.is_dir() {
                let group = file_name(&entry)?;
                for file in sorted_entries(&entry)?.into_iter().filter(|p| p.is_file() && is_image(p)) {
                    let path = format!("{label}/{group}/{}", file_name(&file)?);
                    samples.push(Sample { path, label: label.clone(), group: Some(group.clone()) });
                }
            } else if is_image(&entry) {
                let path = format!("{label}/{}", file_name(&entry)?);
                samples.push(Sample { path, label: label.clone(), group: None });
            }
        }
        if samples.is_empty() {
            warn!("class directory {} holds no images; ignoring it", class_dir.display());
            continue;
        }
        let grouped = samples.iter().filter(|s| s.group.is_some()).count();
        if grouped != 0 && grouped != samples.len() {
            return Err(HarnessError::data(format!(
                "class `{label}` mixes grouped and loose images; put every image in a group folder or none"
            )));
        }
        classes.push(ClassEntries { label, samples });
    }

    let failures: Vec<(String, String)> = classes
        .par_iter()
        .flat_map_iter(|c| c.samples.iter())
        .filter_map(|s| load_gray(&root.join(&s.path)).err().map(|e| (s.path.clone(), e.to_string())))
        .collect();
    if !failures.is_empty() {
        if !options.skip_bad {
            let list: Vec<String> = failures.iter().map(|(p, e)| format!("  {p}: {e}")).collect();
            return Err(HarnessError::data(format!(
                "{} unreadable image(s) (use --skip-bad to drop them):\n{}",
                failures.len(),
                list.join("\n")
            )));
        }
        for (p, e) in &failures {
            warn!("skipping {p}: {e}");
        }
        for class in &mut classes {
            class.samples.retain(|s| !failures.iter().any(|(p, _)| *p == s.path));
        }
        classes.retain(|c| !c.samples.is_empty());
    }

    if classes.len() < 2 {
        return Err(HarnessError::data(format!(
            "{} needs at least 2 class directories with images, found {}",
            root.display(),
            classes.len()
        )));
    }
    Ok(DatasetIndex { root: root.to_path_buf(), classes, skipped: failures })
}

/// Decodes an image file to luminance in `[0, 1]`. 16-bit data is scaled by
/// 65535, everything else by 255.
pub fn load_gray(path: &Path) -> Result<GrayImage> {
    let img = image::open(path).map_err(|e| HarnessError::data(format!("{}: {e}", path.display())))?;
    to_gray(&img)
}

pub fn to_gray(img: &DynamicImage) -> Result<GrayImage> {
    let (w, h) = (img.width() as usize, img.height() as usize);
    let pixels: Vec<f64> = match img {
        DynamicImage::ImageLuma16(_)
        | DynamicImage::ImageLumaA16(_)
        | DynamicImage::ImageRgb16(_)
        | DynamicImage::ImageRgba16(_) => img.to_luma16().into_raw().into_iter().map(|v| v as f64 / 65535.0).collect(),
        DynamicImage::ImageRgb32F(_) | DynamicImage::ImageRgba32F(_) => {
            img.to_luma32f().into_raw().into_iter().map(|v| (v as f64).clamp(0.0, 1.0)).collect()
        }
        _ => img.to_luma8().into_raw().into_iter().map(|v| v as f64 / 255.0).collect(),
    };
    Ok(GrayImage::new(w, h, pixels)?)
}
