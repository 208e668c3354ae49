//! Power-series view of the logistic map `x -> mu x (1 - x)`.
//!
//! The iterates are written as `x_n = F((sqrt mu)^n F^{-1}(x_0))` with
//! `F(x) = sum a_{2k} x^{2k}`, `a_0 = 0`, `a_2 = 1` and
//!
//! ```text
//! |a_{2n}| = 1 / (mu^(n-1) - 1) * sum_{j=1}^{n-1} |a_{2j}| |a_{2n-2j}|
//! ```
//!
//! with signs alternating from `+x^2`. For `mu = 4` this reproduces the Taylor
//! series of `sin^2`, which is what makes the exact `mu = 4` orbit a useful
//! cross-check. Truncated at fourth order, `F^{-1}` is the root of a
//! biquadratic and the whole orbit has a closed approximation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::ChaoticMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    /// Maps `x_0 = 0` to `0`; the default.
    #[default]
    Minus,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Truncated even power series `F_mu`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerSeries {
    pub mu: f64,
    /// `even[k]` is the coefficient of `x^(2k)`.
    even: Vec<f64>,
}

impl PowerSeries {
    /// Highest retained power.
    pub fn order(&self) -> usize {
        2 * (self.even.len() - 1)
    }

    /// Coefficient of `x^power`; odd powers are zero.
    pub fn coefficient(&self, power: usize) -> f64 {
        if power % 2 == 1 {
            return 0.0;
        }
        self.even.get(power / 2).copied().unwrap_or(0.0)
    }

    pub fn even_coefficients(&self) -> &[f64] {
        &self.even
    }

    /// Evaluates the series with Neumaier summation.
    pub fn eval(&self, x: f64) -> f64 {
        let x2 = x * x;
        let mut acc = NeumaierSum::default();
        let mut pow = 1.0;
        for &a in &self.even {
            acc.add(a * pow);
            pow *= x2;
        }
        acc.value()
    }

    /// Inverse of the order-2 or order-4 truncation on the chosen branch.
    pub fn inverse(&self, y: f64, branch: Branch) -> Result<f64> {
        match self.order() {
            2 => {
                if y < 0.0 {
                    return Err(Error::domain(format!("x^2 = {y} has no real root")));
                }
                Ok(y.sqrt())
            }
            4 => biquadratic_inverse(y, self.mu, branch),
            order => {
                Err(Error::NotDerived(format!("explicit inverse is only available for orders 2 and 4, not {order}")))
            }
        }
    }
}

#[derive(Default)]
struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

fn check_mu(mu: f64) -> Result<()> {
    if !mu.is_finite() || mu <= 1.0 {
        return Err(Error::domain(format!("the series needs mu > 1, got {mu}")));
    }
    Ok(())
}

/// Coefficients up to `x^order`; `order` must be even and at least 2.
pub fn series_coefficients(mu: f64, order: usize) -> Result<PowerSeries> {
    check_mu(mu)?;
    if order < 2 || order % 2 == 1 {
        return Err(Error::config(format!("series order must be even and >= 2, got {order}")));
    }
    let top = order / 2;
    let mut mag = vec![0.0, 1.0];
    for n in 2..=top {
        let s: f64 = (1..n).map(|j| mag[j] * mag[n - j]).sum();
        mag.push(s / (mu.powi(n as i32 - 1) - 1.0));
    }
    let even = mag
        .iter()
        .enumerate()
        .map(|(k, m)| if k % 2 == 0 { -m } else { *m })
        .map(|v| if v == 0.0 { 0.0 } else { v })
        .collect();
    Ok(PowerSeries { mu, even })
}

/// Magnitude of the first omitted term of the fourth-order series,
/// `2 / ((mu - 1)^2 (mu + 1)) x^6`.
pub fn truncation_bound(mu: f64, x: f64, order: usize) -> Result<f64> {
    check_mu(mu)?;
    if order != 4 {
        return Err(Error::NotDerived(format!("the error bound is only derived for order 4, not {order}")));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("x = {x} outside [0, 1]")));
    }
    Ok((2.0 / ((mu - 1.0).powi(2) * (mu + 1.0)) * x.powi(6)).abs())
}

/// `sqrt(1 - 4 x0 / (mu - 1))`, failing past `x0 = (mu - 1) / 4`.
fn radical(x0: f64, mu: f64) -> Result<f64> {
    let radicand = 1.0 - 4.0 * x0 / (mu - 1.0);
    if radicand < 0.0 {
        return Err(Error::domain(format!(
            "x0 = {x0} exceeds (mu - 1)/4 = {}; the square root is not real",
            (mu - 1.0) / 4.0
        )));
    }
    Ok(radicand.sqrt())
}

/// Root of `y = z - z^2 / (mu - 1)` with `z = x^2`.
fn biquadratic_inverse(y: f64, mu: f64, branch: Branch) -> Result<f64> {
    let alpha = 1.0 / (mu - 1.0);
    let s = radical(y, mu)?;
    let z = (1.0 + branch.sign() * s) / (2.0 * alpha);
    Ok(z.max(0.0).sqrt())
}

/// Closed fourth-order approximation of `x_n`:
///
/// ```text
/// x_n = (mu^(n+1) - mu^n)/2 * (1 ± r) - (mu^(2n+1) - mu^(2n))/2 * (1 ± r - 2 x0/(mu - 1))
/// r   = sqrt(1 - 4 x0 / (mu - 1))
/// ```
///
/// The value is returned raw; it grows without bound as `n` increases.
pub fn closed_approx_xn(x0: f64, mu: f64, n: u32, branch: Branch) -> Result<f64> {
    check_mu(mu)?;
    let r = radical(x0, mu)?;
    let pm = 1.0 + branch.sign() * r;
    let mn = mu.powi(n as i32);
    let m2n = mn * mn;
    Ok((mn * mu - mn) / 2.0 * pm - (m2n * mu - m2n) / 2.0 * (pm - 2.0 * x0 / (mu - 1.0)))
}

/// Exact logistic iterate for the solvable parameters `mu = 2` and `mu = 4`.
///
/// `x_n = (1 - f(2^n f^{-1}(1 - 2 x0))) / 2` with `f = exp` for `mu = 2` and
/// `f = cos` for `mu = 4`.
pub fn exact_orbit_value(x0: f64, mu: f64, n: u32) -> Result<f64> {
    if !(0.0..=1.0).contains(&x0) {
        return Err(Error::domain(format!("x0 = {x0} outside [0, 1]")));
    }
    let doubling = 2f64.powi(n as i32);
    if mu == 4.0 {
        Ok(0.5 * (1.0 - (doubling * (1.0 - 2.0 * x0).acos()).cos()))
    } else if mu == 2.0 {
        // y_n = y_0^(2^n); the exponent is even for n >= 1.
        let y0 = 1.0 - 2.0 * x0;
        let yn = if n == 0 { y0 } else { y0.abs().powf(doubling) };
        Ok(0.5 * (1.0 - yn))
    } else {
        Err(Error::NotDerived(format!("no exact closed form for mu = {mu}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitCheckRow {
    pub x0: f64,
    pub n: u32,
    pub direct: f64,
    pub series: f64,
    pub closed_approx: f64,
    pub abs_error: f64,
}

/// Compares `F((sqrt mu)^n F^{-1}(x0))` with the directly iterated orbit for
/// steps `0..=n`, using the minus branch of the inverse.
pub fn series_orbit_check(x0: f64, mu: f64, n: u32, order: usize) -> Result<Vec<OrbitCheckRow>> {
    let series = series_coefficients(mu, order)?;
    let seed = series.inverse(x0, Branch::Minus)?;
    let direct = ChaoticMap::logistic().with_mu(mu).orbit(x0, n as usize)?;
    (0..=n)
        .map(|k| {
            let predicted = if k == 0 { x0 } else { series.eval(mu.sqrt().powi(k as i32) * seed) };
            let truth = direct[k as usize];
            Ok(OrbitCheckRow {
                x0,
                n: k,
                direct: truth,
                series: predicted,
                closed_approx: closed_approx_xn(x0, mu, k, Branch::Minus)?,
                abs_error: (predicted - truth).abs(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuasiLinearity {
    pub branch: Branch,
    /// Partial-sum length `K`.
    pub terms: usize,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Fits a line to `S_K(x0) = sum_{k=1}^K (1 ± r(x0))^k` over `grid` points of
/// `x0` in `[0, (mu - 1)/4]`, for every `K` in `1..=max_terms`.
pub fn quasi_linearity(mu: f64, max_terms: usize, grid: usize, branch: Branch) -> Result<Vec<QuasiLinearity>> {
    check_mu(mu)?;
    if grid < 2 {
        return Err(Error::config("need at least two grid points"));
    }
    let hi = (mu - 1.0) / 4.0;
    let xs: Vec<f64> = (0..grid).map(|i| hi * i as f64 / (grid - 1) as f64).collect();
    let bases: Vec<f64> =
        xs.iter().map(|&x| radical(x.min(hi), mu).map(|r| 1.0 + branch.sign() * r)).collect::<Result<_>>()?;
    let mut sums = vec![0.0; grid];
    let mut powers = vec![1.0; grid];
    let mut out = Vec::with_capacity(max_terms);
    for terms in 1..=max_terms {
        for ((s, p), b) in sums.iter_mut().zip(powers.iter_mut()).zip(&bases) {
            *p *= b;
            *s += *p;
        }
        let (slope, intercept, r_squared) = linear_fit(&xs, &sums);
        out.push(QuasiLinearity { branch, terms, slope, intercept, r_squared });
    }
    Ok(out)
}

fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, my - slope * mx, r2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fourth_order_coefficients() {
        let s = series_coefficients(3.8, 4).unwrap();
        assert_eq!(s.coefficient(0), 0.0);
        assert_eq!(s.coefficient(2), 1.0);
        assert!((s.coefficient(4) + 1.0 / 2.8).abs() < 1e-15);
        assert!((s.coefficient(4) + 0.357_142_857_142_857).abs() < 1e-12);
        assert_eq!(s.coefficient(3), 0.0);

        let s = series_coefficients(7.5, 2).unwrap();
        assert_eq!(s.even_coefficients(), &[0.0, 1.0]);
        assert_eq!(s.eval(0.3), 0.09);
    }

    #[test]
    fn second_order_shape_for_many_mu() {
        for mu in [1.01, 1.5, 2.0, 3.0, 3.57, 3.8, 4.0, 10.0] {
            let s = series_coefficients(mu, 4).unwrap();
            assert_eq!(s.coefficient(2), 1.0);
            assert_eq!(s.coefficient(4), -1.0 / (mu - 1.0));
        }
    }

    #[test]
    fn sixth_coefficient_at_two() {
        // n = 3: (a2 a4 + a4 a2) / (mu^2 - 1) = 2 / 3
        let s = series_coefficients(2.0, 6).unwrap();
        assert!((s.coefficient(6) - 2.0 / 3.0).abs() < 1e-15);
        assert!(s.coefficient(6) > 0.0);
    }

    #[test]
    fn mu_four_reproduces_sine_squared() {
        // sin^2 y = sum_{k>=1} (-1)^(k+1) 2^(2k-1) y^(2k) / (2k)!
        let s = series_coefficients(4.0, 24).unwrap();
        let mut fact = 1.0f64;
        for k in 1..=12usize {
            fact *= ((2 * k - 1) * 2 * k) as f64;
            let want = (-1f64).powi(k as i32 + 1) * 2f64.powi(2 * k as i32 - 1) / fact;
            let got = s.coefficient(2 * k);
            assert!((got - want).abs() <= 1e-14 * want.abs().max(1e-300), "k={k}: {got} vs {want}");
        }
        for i in 0..=100 {
            let y = std::f64::consts::FRAC_PI_2 * i as f64 / 100.0;
            assert!((s.eval(y) - y.sin().powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn mu_four_series_orbit_matches_exact() {
        // With the exact inverse asin(sqrt x0), F(2^n F^{-1}(x0)) is the exact orbit.
        let s = series_coefficients(4.0, 120).unwrap();
        for x0 in [0.05, 0.2, 0.37, 0.61, 0.9] {
            let seed = f64::asin(f64::sqrt(x0));
            for n in 0..=3u32 {
                // keep the argument where a 120th-order truncation is accurate
                let y = 2f64.powi(n as i32) * seed;
                if y > 3.0 * std::f64::consts::PI {
                    continue;
                }
                let want = exact_orbit_value(x0, 4.0, n).unwrap();
                assert!((s.eval(y) - want).abs() < 1e-6, "x0={x0} n={n}");
            }
        }
    }

    #[test]
    fn exact_forms_match_iteration() {
        for mu in [2.0, 4.0] {
            let map = ChaoticMap::logistic().with_mu(mu);
            for x0 in [0.0, 0.1, 0.33, 0.5, 0.77, 1.0] {
                let orbit = map.orbit(x0, 8).unwrap();
                for (n, &x) in orbit.iter().enumerate() {
                    let exact = exact_orbit_value(x0, mu, n as u32).unwrap();
                    assert!((x - exact).abs() < 1e-5, "mu={mu} x0={x0} n={n}");
                }
            }
        }
        assert!(exact_orbit_value(0.3, 3.8, 2).is_err());
    }

    #[test]
    fn bound_values() {
        let b = truncation_bound(3.8, 1.0, 4).unwrap();
        assert!((b - 2.0 / (2.8f64.powi(2) * 4.8)).abs() < 1e-15);
        assert!((b - 0.053_146).abs() < 1e-5);
        assert!(b <= 0.0532);
        assert_eq!(truncation_bound(3.1, 0.0, 4).unwrap(), 0.0);
        assert!((truncation_bound(2.0, 1.0, 4).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!(matches!(truncation_bound(3.8, 1.0, 6), Err(Error::NotDerived(_))));
        assert!(truncation_bound(1.0, 0.5, 4).is_err());
    }

    #[test]
    fn sixth_order_gap_within_bound() {
        let f4 = series_coefficients(3.8, 4).unwrap();
        let f6 = series_coefficients(3.8, 6).unwrap();
        let worst =
            (0..=10_000).map(|i| i as f64 / 10_000.0).map(|x| (f4.eval(x) - f6.eval(x)).abs()).fold(0.0, f64::max);
        assert!(worst <= 0.0532, "{worst}");
        assert!((worst - f6.coefficient(6)).abs() < 1e-15);
    }

    #[test]
    fn rejects_small_mu() {
        assert!(matches!(series_coefficients(1.0, 4), Err(Error::Domain(_))));
        assert!(series_coefficients(0.5, 4).is_err());
        assert!(series_coefficients(3.8, 5).is_err());
        assert!(series_coefficients(3.8, 0).is_err());
    }

    #[test]
    fn closed_approx_cases() {
        for n in 0..5 {
            assert_eq!(closed_approx_xn(0.0, 3.8, n, Branch::Minus).unwrap(), 0.0);
        }
        // n = 0 collapses algebraically to x0
        for x0 in [0.1, 0.35, 0.69] {
            for b in [Branch::Plus, Branch::Minus] {
                assert!((closed_approx_xn(x0, 3.8, 0, b).unwrap() - x0).abs() < 1e-12);
            }
        }
        let p = closed_approx_xn(0.7, 3.8, 2, Branch::Plus).unwrap();
        let m = closed_approx_xn(0.7, 3.8, 2, Branch::Minus).unwrap();
        assert_eq!(p, m);
        match closed_approx_xn(0.71, 3.8, 1, Branch::Minus) {
            Err(Error::Domain(msg)) => assert!(msg.contains("0.7")),
            other => panic!("{other:?}"),
        }

        // x0 = 0.5: r = sqrt(1 - 2/2.8)
        let r = (1.0 - 4.0 * 0.5 / 2.8f64).sqrt();
        let want = (3.8 * 3.8 - 3.8) / 2.0 * (1.0 - r) - (3.8f64.powi(3) - 3.8 * 3.8) / 2.0 * (1.0 - r - 1.0 / 2.8);
        let got = closed_approx_xn(0.5, 3.8, 1, Branch::Minus).unwrap();
        assert!((got - want).abs() < 1e-12);
        // far from the true 0.95; only characterized, not bounded
        assert!((got - 0.95).abs() > 0.05);
    }

    #[test]
    fn closed_form_equals_series_route() {
        for x0 in [0.05, 0.1, 0.3, 0.5, 0.65] {
            let rows = series_orbit_check(x0, 3.8, 4, 4).unwrap();
            for row in rows {
                let scale = 3.8f64.powi(2 * row.n as i32);
                assert!((row.series - row.closed_approx).abs() < 1e-9 * scale, "{row:?}");
            }
        }
    }

    #[test]
    fn orbit_check_first_step() {
        let rows = series_orbit_check(0.1, 3.8, 1, 4).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].series, 0.1);
        assert_eq!(rows[0].abs_error, 0.0);
        assert!((rows[1].direct - 0.342).abs() < 1e-12);
        assert!(rows[1].abs_error <= 2.0 * 0.0532 + 1e-3);
        assert!(rows[1].abs_error <= 0.11);
        assert!(matches!(series_orbit_check(0.1, 3.8, 1, 6), Err(Error::NotDerived(_))));
        assert!(series_orbit_check(0.8, 3.8, 1, 4).is_err());
    }

    #[test]
    fn quasi_linear_partial_sums() {
        let plus = quasi_linearity(3.8, 10, 1001, Branch::Plus).unwrap();
        assert_eq!(plus.len(), 10);
        for fit in &plus {
            assert!(fit.r_squared >= 0.9, "{fit:?}");
        }
        assert!(plus[..8].iter().all(|f| f.r_squared >= 0.95));
        let minus = quasi_linearity(3.8, 10, 1001, Branch::Minus).unwrap();
        assert!(minus[0].r_squared >= 0.95);
    }
}
