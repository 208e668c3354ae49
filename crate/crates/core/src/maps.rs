//! The six one-dimensional chaotic maps used to scramble embedded images.
//!
//! Every map is defined on `[0, 1]` and the result of each step is clamped
//! back into `[0, 1]`, so iterating never leaves the normalized cube that
//! [`crate::embedding`] works in.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::embedding::PointCloud;
use crate::error::{Error, Result};

/// Below this magnitude the Gauss map treats its argument as zero.
const GAUSS_ZERO: f64 = 1e-12;

/// Tent map break point; `x == TENT_BREAK` falls on the descending branch.
const TENT_BREAK: f64 = 0.7;

// Quartic coefficients of the Singer map.
const SINGER: [f64; 4] = [7.86, -23.31, 28.75, -13.302875];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapFamily {
    Circle,
    Gauss,
    Logistic,
    Sine,
    Singer,
    Tent,
}

impl MapFamily {
    pub const ALL: [MapFamily; 6] =
        [MapFamily::Circle, MapFamily::Gauss, MapFamily::Logistic, MapFamily::Sine, MapFamily::Singer, MapFamily::Tent];

    pub fn name(self) -> &'static str {
        match self {
            MapFamily::Circle => "circle",
            MapFamily::Gauss => "gauss",
            MapFamily::Logistic => "logistic",
            MapFamily::Sine => "sine",
            MapFamily::Singer => "singer",
            MapFamily::Tent => "tent",
        }
    }

    fn uses_mu(self) -> bool {
        !matches!(self, MapFamily::Gauss | MapFamily::Tent)
    }
}

impl FromStr for MapFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        MapFamily::ALL
            .into_iter()
            .find(|f| f.name() == lower)
            .ok_or_else(|| Error::config(format!("unknown map family `{s}`")))
    }
}

/// A chaotic map family together with its parameters.
///
/// `mu` is the growth parameter (ignored by Gauss and Tent) and `nu` the
/// coupling of the circle map (ignored by everything else). No check is made
/// that a user-supplied `mu` actually lies in a chaotic regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChaoticMap {
    pub family: MapFamily,
    pub mu: f64,
    pub nu: f64,
}

impl ChaoticMap {
    /// The family with its default chaotic parameters.
    pub fn new(family: MapFamily) -> Self {
        let (mu, nu) = match family {
            MapFamily::Circle => (0.2, 0.5),
            MapFamily::Logistic => (3.8, 0.0),
            MapFamily::Sine => (4.0, 0.0),
            MapFamily::Singer => (1.07, 0.0),
            MapFamily::Gauss | MapFamily::Tent => (0.0, 0.0),
        };
        ChaoticMap { family, mu, nu }
    }

    pub fn circle() -> Self {
        Self::new(MapFamily::Circle)
    }

    pub fn gauss() -> Self {
        Self::new(MapFamily::Gauss)
    }

    pub fn logistic() -> Self {
        Self::new(MapFamily::Logistic)
    }

    pub fn sine() -> Self {
        Self::new(MapFamily::Sine)
    }

    pub fn singer() -> Self {
        Self::new(MapFamily::Singer)
    }

    pub fn tent() -> Self {
        Self::new(MapFamily::Tent)
    }

    pub fn with_mu(mut self, mu: f64) -> Self {
        self.mu = mu;
        self
    }

    pub fn with_nu(mut self, nu: f64) -> Self {
        self.nu = nu;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.mu.is_finite() || !self.nu.is_finite() {
            return Err(Error::config(format!("{self}: parameters must be finite")));
        }
        match self.family {
            MapFamily::Logistic | MapFamily::Sine | MapFamily::Singer if self.mu <= 0.0 => {
                Err(Error::config(format!("{}: mu must be positive, got {}", self.family.name(), self.mu)))
            }
            _ => Ok(()),
        }
    }

    /// One step of the map, clamped to `[0, 1]`. No argument checking.
    #[inline]
    pub fn apply(&self, x: f64) -> f64 {
        let y = match self.family {
            MapFamily::Circle => {
                let raw = x + self.mu - (self.nu / (2.0 * PI)) * (2.0 * PI * x).sin();
                raw.rem_euclid(1.0)
            }
            MapFamily::Gauss => {
                if x.abs() < GAUSS_ZERO {
                    0.0
                } else {
                    (1.0 / x).rem_euclid(1.0)
                }
            }
            MapFamily::Logistic => self.mu * x * (1.0 - x),
            MapFamily::Sine => (self.mu / 4.0) * (PI * x).sin(),
            MapFamily::Singer => {
                let [c1, c2, c3, c4] = SINGER;
                self.mu * x * (c1 + x * (c2 + x * (c3 + x * c4)))
            }
            MapFamily::Tent => {
                if x < TENT_BREAK {
                    x / TENT_BREAK
                } else {
                    (10.0 / 3.0) * (1.0 - x)
                }
            }
        };
        y.clamp(0.0, 1.0)
    }

    /// One checked step: rejects non-finite input and values outside `[0, 1]`.
    pub fn step(&self, x: f64) -> Result<f64> {
        check_unit(x)?;
        Ok(self.apply(x))
    }

    /// `[x0, x1, ..., xn]`, length `n + 1`.
    pub fn orbit(&self, x0: f64, n: usize) -> Result<Vec<f64>> {
        check_unit(x0)?;
        let mut out = Vec::with_capacity(n + 1);
        let mut x = x0;
        out.push(x);
        for _ in 0..n {
            x = self.apply(x);
            out.push(x);
        }
        Ok(out)
    }

    /// Applies the map to every coordinate of every point.
    pub fn step_cloud(&self, cloud: &PointCloud) -> Result<PointCloud> {
        let mut points = cloud.points().to_vec();
        for point in &mut points {
            for v in point.iter_mut() {
                check_unit(*v)?;
                *v = self.apply(*v);
            }
        }
        PointCloud::new(points, cloud.height(), cloud.width())
    }
}

impl Default for ChaoticMap {
    fn default() -> Self {
        Self::logistic()
    }
}

fn check_unit(x: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::domain(format!("non-finite map argument {x}")));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("map argument {x} outside [0, 1]")));
    }
    Ok(())
}

impl fmt::Display for ChaoticMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            MapFamily::Circle => write!(f, "circle:mu={},nu={}", self.mu, self.nu),
            fam if fam.uses_mu() => write!(f, "{}:mu={}", fam.name(), self.mu),
            fam => f.write_str(fam.name()),
        }
    }
}

/// Parses `family[:key=value[,key=value]]`, e.g. `logistic:mu=3.8` or
/// `circle:mu=0.2,nu=0.5`. Family names are case-insensitive; omitted
/// parameters keep their defaults.
impl FromStr for ChaoticMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (family, params) = match s.split_once(':') {
            Some((f, p)) => (f, Some(p)),
            None => (s, None),
        };
        let mut map = ChaoticMap::new(family.parse()?);
        for kv in params.into_iter().flat_map(|p| p.split(',')).filter(|kv| !kv.trim().is_empty()) {
            let (key, value) =
                kv.split_once('=').ok_or_else(|| Error::config(format!("expected key=value, got `{kv}`")))?;
            let value: f64 =
                value.trim().parse().map_err(|_| Error::config(format!("bad number `{value}` for `{key}`")))?;
            match (key.trim().to_ascii_lowercase().as_str(), map.family) {
                ("mu", fam) if fam.uses_mu() => map.mu = value,
                ("nu", MapFamily::Circle) => map.nu = value,
                (key, fam) => return Err(Error::config(format!("{} has no parameter `{key}`", fam.name()))),
            }
        }
        map.validate()?;
        Ok(map)
    }
}
