//! Texture descriptors built from chaotic maps.
//!
//! A grayscale image is lifted into the unit cube ([`embedding`]), pushed
//! through one of six chaotic maps ([`maps`]) for several iterations, and each
//! reconstructed image is blended with its predecessor. Rotation-invariant
//! uniform LBP histograms ([`lbp`]) of the blends form the feature vector
//! ([`descriptor`]), which is reduced with [`pca`] and classified with LDA
//! ([`classify`]). [`logistic`] holds the power-series analysis of the
//! logistic map.

pub mod classify;
pub mod descriptor;
pub mod embedding;
pub mod error;
pub mod lbp;
pub mod logistic;
pub mod maps;
pub mod pca;

pub use classify::{cross_validate_lambda, fit_lda, Classifier, LdaModel, LdaTrainer, Trainer};
pub use descriptor::{extract, iterate_images, DescriptorConfig, FeatureLayout, FeatureVector};
pub use embedding::{blend, embed, reconstruct, GrayImage, PointCloud};
pub use error::{Error, Result};
pub use lbp::{lbp_histogram, LbpHistogram, LbpParams};
pub use maps::{ChaoticMap, MapFamily};
pub use pca::{fit_pca, PcaDims, PcaModel};
