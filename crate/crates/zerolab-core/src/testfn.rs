//! Even test functions paired with closed-form, compactly supported
//! Fourier transforms.
//!
//! Convention: `φ̂(y) = ∫ φ(x) e^{-2πixy} dx`. Every statistic in this
//! crate is localized by such a pair, and the support radius of `φ̂`
//! controls how far into the prime (or eigenvalue) spectrum a computation
//! must reach. The workhorse family is the Fejér kernel pair
//! `φ̂(y) = (1 - |y|/T)⁺`, `φ(x) = T · sinc²(πTx)`, which is nonnegative
//! on both sides and has `∫φ = φ̂(0) = 1`.

use crate::numerics::{cos_over_x2_tail, integrate_split, linspace, sinc};
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Real-valued function of one variable, shareable across threads.
pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Analytic tail `(x0, y) ↦ ∫_{x0}^∞ φ(x) cos(2πxy) dx`, used to close
/// truncated quadratures against slowly decaying `φ`.
pub type TailFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Debug, Error)]
pub enum TestFnError {
    #[error("support radius must be positive and finite, got {0}")]
    InvalidSupport(f64),
    #[error("unknown test function spec {0:?}, expected e.g. \"fejer:0.8\"")]
    UnknownSpec(String),
}

/// An even test function `φ` together with its Fourier transform `φ̂`,
/// which vanishes outside `[-support_radius, support_radius]`.
#[derive(Clone)]
pub struct FourierPair {
    eval: RealFn,
    eval_hat: RealFn,
    support_radius: f64,
    family_tag: String,
    hat_breakpoints: Vec<f64>,
    cos_tail: Option<TailFn>,
}

impl fmt::Debug for FourierPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FourierPair")
            .field("family_tag", &self.family_tag)
            .field("support_radius", &self.support_radius)
            .finish()
    }
}

impl FourierPair {
    /// Assembles a pair from explicit parts. `hat_breakpoints` lists the
    /// kinks of `φ̂` so quadratures can split there; `cos_tail`, when
    /// available, supplies the analytic remainder of `∫ φ(x) cos(2πxy) dx`
    /// beyond a truncation point.
    pub fn from_parts(
        family_tag: impl Into<String>,
        support_radius: f64,
        eval: RealFn,
        eval_hat: RealFn,
        hat_breakpoints: Vec<f64>,
        cos_tail: Option<TailFn>,
    ) -> Result<Self, TestFnError> {
        if !(support_radius > 0.0) || !support_radius.is_finite() {
            return Err(TestFnError::InvalidSupport(support_radius));
        }
        Ok(Self {
            eval,
            eval_hat,
            support_radius,
            family_tag: family_tag.into(),
            hat_breakpoints,
            cos_tail,
        })
    }

    /// `φ(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    /// `φ̂(y)`.
    pub fn eval_hat(&self, y: f64) -> f64 {
        (self.eval_hat)(y)
    }

    /// Radius `T` with `φ̂ = 0` outside `[-T, T]`.
    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    /// Human-readable construction tag, e.g. `fejer:0.8`.
    pub fn family_tag(&self) -> &str {
        &self.family_tag
    }

    /// Kink locations of `φ̂` inside its support.
    pub fn hat_breakpoints(&self) -> &[f64] {
        &self.hat_breakpoints
    }

    /// Analytic spatial tail, if the family provides one.
    pub fn cos_tail(&self) -> Option<&TailFn> {
        self.cos_tail.as_ref()
    }

    /// The pair `a·φ₁ + b·φ₂`, with support radius the max of the two.
    pub fn linear_combination(a: f64, p1: &Self, b: f64, p2: &Self) -> Self {
        let (e1, e2) = (p1.eval.clone(), p2.eval.clone());
        let (h1, h2) = (p1.eval_hat.clone(), p2.eval_hat.clone());
        let mut breakpoints = p1.hat_breakpoints.clone();
        breakpoints.extend_from_slice(&p2.hat_breakpoints);
        breakpoints.sort_by(|x, y| x.partial_cmp(y).expect("non-finite breakpoint"));
        breakpoints.dedup();
        let cos_tail = match (&p1.cos_tail, &p2.cos_tail) {
            (Some(t1), Some(t2)) => {
                let (t1, t2) = (t1.clone(), t2.clone());
                Some(Arc::new(move |x0: f64, y: f64| a * t1(x0, y) + b * t2(x0, y)) as TailFn)
            }
            _ => None,
        };
        Self {
            eval: Arc::new(move |x| a * e1(x) + b * e2(x)),
            eval_hat: Arc::new(move |y| a * h1(y) + b * h2(y)),
            support_radius: p1.support_radius.max(p2.support_radius),
            family_tag: format!(
                "{}*({}) + {}*({})",
                a, p1.family_tag, b, p2.family_tag
            ),
            hat_breakpoints: breakpoints,
            cos_tail,
        }
    }

    /// Total mass `∫_{-∞}^{∞} φ`, evaluated from the spatial side with the
    /// analytic tail when present (window-only otherwise).
    ///
    /// The window is pre-split into a prime number of uniform panels:
    /// adaptive quadrature alone can alias against the periodic
    /// oscillation of `φ` when its dyadic nodes land on the zero lattice,
    /// and a prime panel count keeps every interior node off resonance.
    pub fn spatial_integral(&self) -> f64 {
        let window = if self.cos_tail.is_some() {
            48.0f64.max(12.0 / self.support_radius)
        } else {
            400.0f64.max(60.0 / self.support_radius)
        };
        let panels: Vec<f64> = (1..97).map(|j| window * j as f64 / 97.0).collect();
        let body = integrate_split(|x| self.eval(x), 0.0, window, &panels, 1e-11);
        let tail = self.cos_tail.as_ref().map_or(0.0, |t| t(window, 0.0));
        2.0 * (body + tail)
    }
}

/// Fejér pair with transform support radius `t`:
/// `φ̂(y) = max(0, 1 - |y|/t)` and `φ(x) = t · sinc²(π t x)`.
///
/// `φ ≥ 0`, `φ̂ ≥ 0`, `φ(0) = t`, `φ̂(0) = ∫φ = 1`. The spatial tail has
/// the closed form that follows from `φ(x) = (1 - cos(2πtx))/(2π²tx²)`:
/// after product-to-sum expansion each piece is a `cos(ax)/x²` tail.
pub fn fejer_pair(t: f64) -> Result<FourierPair, TestFnError> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(TestFnError::InvalidSupport(t));
    }
    let eval = Arc::new(move |x: f64| {
        let s = sinc(PI * t * x);
        t * s * s
    });
    let eval_hat = Arc::new(move |y: f64| (1.0 - y.abs() / t).max(0.0));
    let cos_tail = Arc::new(move |x0: f64, y: f64| {
        let y = y.abs();
        let a0 = 2.0 * PI * y;
        let a1 = 2.0 * PI * (t + y);
        let a2 = 2.0 * PI * (t - y).abs();
        (cos_over_x2_tail(a0, x0)
            - 0.5 * cos_over_x2_tail(a1, x0)
            - 0.5 * cos_over_x2_tail(a2, x0))
            / (2.0 * PI * PI * t)
    });
    FourierPair::from_parts(
        format!("fejer:{t}"),
        t,
        eval,
        eval_hat,
        vec![-t, 0.0, t],
        Some(cos_tail),
    )
}

/// Parses a test-function spec string such as `fejer:0.8` or `fejer:4/5`.
pub fn pair_from_spec(spec: &str) -> Result<FourierPair, TestFnError> {
    let Some((family, param)) = spec.split_once(':') else {
        return Err(TestFnError::UnknownSpec(spec.to_string()));
    };
    if family != "fejer" {
        return Err(TestFnError::UnknownSpec(spec.to_string()));
    }
    let t = if let Some((num, den)) = param.split_once('/') {
        let n: f64 = num
            .trim()
            .parse()
            .map_err(|_| TestFnError::UnknownSpec(spec.to_string()))?;
        let d: f64 = den
            .trim()
            .parse()
            .map_err(|_| TestFnError::UnknownSpec(spec.to_string()))?;
        n / d
    } else {
        param
            .trim()
            .parse()
            .map_err(|_| TestFnError::UnknownSpec(spec.to_string()))?
    };
    fejer_pair(t)
}

/// Measured deviations from the defining properties of a [`FourierPair`].
///
/// `pass` is true when every deviation is at most the requested
/// tolerance. `transform_dev` checks Fourier inversion
/// `φ(x) = ∫_{-T}^{T} φ̂(y) e^{2πixy} dy` on a grid, which pins down the
/// transform pairing without needing infinite-domain quadrature.
#[derive(Debug, Clone)]
pub struct PairVerification {
    pub evenness_dev: f64,
    pub support_dev: f64,
    pub transform_dev: f64,
    pub mass_dev: f64,
    pub hat_mass_dev: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Verifies evenness of both sides, vanishing of `φ̂` beyond its support,
/// Fourier inversion on a grid, and the two moment identities
/// `∫φ = φ̂(0)` and `∫φ̂ = φ(0)`.
pub fn verify_pair(fp: &FourierPair, tolerance: f64) -> PairVerification {
    let t = fp.support_radius();

    let mut evenness_dev: f64 = 0.0;
    for x in linspace(0.0, 12.0 / t.min(4.0), 97) {
        evenness_dev = evenness_dev.max((fp.eval(x) - fp.eval(-x)).abs());
    }
    for y in linspace(0.0, 1.5 * t, 97) {
        evenness_dev = evenness_dev.max((fp.eval_hat(y) - fp.eval_hat(-y)).abs());
    }

    let mut support_dev: f64 = 0.0;
    for y in linspace(t, 3.0 * t, 97) {
        support_dev = support_dev.max(fp.eval_hat(y).abs());
        support_dev = support_dev.max(fp.eval_hat(-y).abs());
    }

    // Floor at 1e-14: below that the adaptive quadrature cannot converge
    // in f64 and would burn the full recursion depth chasing noise.
    let quad_tol = (tolerance * 1e-3).clamp(1e-14, 1e-10);
    let breaks = fp.hat_breakpoints().to_vec();
    let mut transform_dev: f64 = 0.0;
    for x in linspace(0.0, 3.0 / t, 25) {
        // φ̂ is even, so the inverse transform reduces to a cosine integral.
        let inv = 2.0 * integrate_split(
            |y| fp.eval_hat(y) * (2.0 * PI * x * y).cos(),
            0.0,
            t,
            &breaks,
            quad_tol,
        );
        transform_dev = transform_dev.max((inv - fp.eval(x)).abs());
    }

    let mass_dev = (fp.spatial_integral() - fp.eval_hat(0.0)).abs();
    let hat_mass = 2.0 * integrate_split(|y| fp.eval_hat(y), 0.0, t, &breaks, quad_tol);
    let hat_mass_dev = (hat_mass - fp.eval(0.0)).abs();

    let pass = evenness_dev <= tolerance
        && support_dev <= tolerance
        && transform_dev <= tolerance
        && mass_dev <= tolerance
        && hat_mass_dev <= tolerance;
    PairVerification {
        evenness_dev,
        support_dev,
        transform_dev,
        mass_dev,
        hat_mass_dev,
        tolerance,
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn fejer_point_values() {
        let fp = fejer_pair(0.8).unwrap();
        assert_abs_diff_eq!(fp.eval(0.0), 0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(fp.eval_hat(0.0), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(fp.eval_hat(0.4), 0.5, epsilon = 1e-15);
        assert_eq!(fp.eval_hat(0.8), 0.0);
        assert_eq!(fp.eval_hat(-2.0), 0.0);
        // At x = 1/(2·0.8) the phase is π/2, so φ = 0.8·(2/π)².
        let x = 1.0 / 1.6;
        assert_abs_diff_eq!(fp.eval(x), 0.8 * (2.0 / PI).powi(2), epsilon = 1e-15);
    }

    #[test]
    fn fejer_rejects_bad_support() {
        assert!(fejer_pair(0.0).is_err());
        assert!(fejer_pair(-1.0).is_err());
        assert!(fejer_pair(f64::NAN).is_err());
        assert!(fejer_pair(f64::INFINITY).is_err());
    }

    #[test]
    fn spec_strings_parse() {
        assert_abs_diff_eq!(
            pair_from_spec("fejer:0.8").unwrap().support_radius(),
            0.8
        );
        assert_abs_diff_eq!(
            pair_from_spec("fejer:2/3").unwrap().support_radius(),
            2.0 / 3.0
        );
        assert!(pair_from_spec("gauss:1").is_err());
        assert!(pair_from_spec("fejer").is_err());
        assert!(pair_from_spec("fejer:zzz").is_err());
    }

    #[test]
    fn fejer_half_passes_verification() {
        let report = verify_pair(&fejer_pair(0.5).unwrap(), 1e-5);
        assert!(report.pass, "verification report: {report:?}");
    }

    #[test]
    fn fejer_family_passes_tight_verification() {
        for t in [2.0 / 3.0, 0.8, 1.0, 2.0] {
            let report = verify_pair(&fejer_pair(t).unwrap(), 1e-8);
            assert!(report.pass, "T={t}: {report:?}");
        }
    }

    #[test]
    fn corrupted_transform_fails_verification() {
        // Same φ, but φ̂ shifted by 0.1 inside its support: inversion and
        // both moment identities must blow past the tolerance.
        let base = fejer_pair(0.5).unwrap();
        let hat = base.eval_hat.clone();
        let t = base.support_radius();
        let corrupted = FourierPair::from_parts(
            "fejer:0.5+bump",
            t,
            base.eval.clone(),
            Arc::new(move |y: f64| if y.abs() < t { hat(y) + 0.1 } else { 0.0 }),
            base.hat_breakpoints().to_vec(),
            base.cos_tail().cloned(),
        )
        .unwrap();
        let report = verify_pair(&corrupted, 1e-5);
        assert!(!report.pass);
        assert!(report.transform_dev > 1e-2);
        assert!(report.mass_dev > 1e-2);
    }

    #[test]
    fn linear_combination_is_pointwise() {
        let p1 = fejer_pair(0.5).unwrap();
        let p2 = fejer_pair(1.5).unwrap();
        let combo = FourierPair::linear_combination(2.0, &p1, -0.25, &p2);
        assert_abs_diff_eq!(combo.support_radius(), 1.5);
        for x in [-1.3, 0.0, 0.7, 2.2] {
            assert_abs_diff_eq!(
                combo.eval(x),
                2.0 * p1.eval(x) - 0.25 * p2.eval(x),
                epsilon = 1e-15
            );
            assert_abs_diff_eq!(
                combo.eval_hat(x),
                2.0 * p1.eval_hat(x) - 0.25 * p2.eval_hat(x),
                epsilon = 1e-15
            );
        }
        let report = verify_pair(&combo, 1e-7);
        assert!(report.pass, "{report:?}");
    }

    proptest! {
        #[test]
        fn fejer_shape_invariants(t in 0.05f64..4.0, x in -20.0f64..20.0) {
            let fp = fejer_pair(t).unwrap();
            // Nonnegativity on both sides and evenness.
            prop_assert!(fp.eval(x) >= 0.0);
            prop_assert!(fp.eval_hat(x) >= 0.0);
            prop_assert!((fp.eval(x) - fp.eval(-x)).abs() < 1e-12);
            // Compact support of the transform.
            if x.abs() >= t {
                prop_assert_eq!(fp.eval_hat(x), 0.0);
            }
            // φ is maximized at the origin where it equals t.
            prop_assert!(fp.eval(x) <= t + 1e-12);
        }
    }
}
