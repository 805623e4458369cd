//! Limiting one-level density kernels of the five symmetry types, and the
//! pair-correlation functional they share with the unitary group.
//!
//! Each symmetry type carries a density kernel `W` on the real line whose
//! pairing `∫ W φ` is the large-size limit of the corresponding eigenangle
//! (or zero) statistic. On the Fourier side, with the window
//! `η = 1_{[-1,1]}`, every kernel decomposes as
//!
//! `Ŵ = δ₀ + w·η + c·1`
//!
//! with the window weight `w` and constant `c` listed per type. Pairing a
//! test function against `W` therefore needs only `φ̂(0)`, a finite window
//! integral of `φ̂`, and `φ(0)`, with no infinite-domain quadrature. For test
//! functions whose transform is supported inside `(-1, 1)` the window
//! integral collapses to `φ(0)`, which is why the three orthogonal
//! flavors become indistinguishable there while the symplectic one does
//! not.

use crate::numerics::{integrate, integrate_split, sinc};
use crate::testfn::FourierPair;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum KernelError {
    #[error("unknown symmetry class label {0:?}, expected U, Sp, SOeven, SOodd, or O")]
    UnknownClass(String),
    #[error("interval [{0}, {1}] is not a valid integration range")]
    BadInterval(f64, f64),
}

/// The five symmetry types of the classical compact groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymmetryClass {
    Unitary,
    Symplectic,
    OrthogonalEven,
    OrthogonalOdd,
    /// The full orthogonal average, ½(even) + ½(odd).
    Orthogonal,
}

impl SymmetryClass {
    pub const ALL: [SymmetryClass; 5] = [
        SymmetryClass::Unitary,
        SymmetryClass::Symplectic,
        SymmetryClass::OrthogonalEven,
        SymmetryClass::OrthogonalOdd,
        SymmetryClass::Orthogonal,
    ];

    pub fn label(self) -> &'static str {
        match self {
            SymmetryClass::Unitary => "U",
            SymmetryClass::Symplectic => "Sp",
            SymmetryClass::OrthogonalEven => "SOeven",
            SymmetryClass::OrthogonalOdd => "SOodd",
            SymmetryClass::Orthogonal => "O",
        }
    }
}

impl fmt::Display for SymmetryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SymmetryClass {
    type Err = KernelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "U" => Ok(SymmetryClass::Unitary),
            "Sp" => Ok(SymmetryClass::Symplectic),
            "SOeven" => Ok(SymmetryClass::OrthogonalEven),
            "SOodd" => Ok(SymmetryClass::OrthogonalOdd),
            "O" => Ok(SymmetryClass::Orthogonal),
            other => Err(KernelError::UnknownClass(other.to_string())),
        }
    }
}

/// A one-level density kernel `W(x) = smooth(x) + spatial_atom·δ₀`, with
/// its Fourier-side decomposition `Ŵ = fourier_atom·δ₀ +
/// fourier_window·1_{[-1,1]} + fourier_constant·1`.
#[derive(Debug, Clone, Copy)]
pub struct SymmetryKernel {
    pub class: SymmetryClass,
    pub spatial_atom: f64,
    pub fourier_atom: f64,
    pub fourier_window: f64,
    pub fourier_constant: f64,
}

impl SymmetryKernel {
    /// The smooth (non-atomic) part of `W` at `x`.
    pub fn spatial_smooth(&self, x: f64) -> f64 {
        let s = sinc(2.0 * PI * x);
        match self.class {
            SymmetryClass::Unitary => 1.0,
            SymmetryClass::Symplectic => 1.0 - s,
            SymmetryClass::OrthogonalEven => 1.0 + s,
            SymmetryClass::OrthogonalOdd => 1.0 - s,
            SymmetryClass::Orthogonal => 1.0,
        }
    }
}

/// The density kernel of a symmetry class.
pub fn kernel(class: SymmetryClass) -> SymmetryKernel {
    let (spatial_atom, fourier_window, fourier_constant) = match class {
        SymmetryClass::Unitary => (0.0, 0.0, 0.0),
        SymmetryClass::Symplectic => (0.0, -0.5, 0.0),
        SymmetryClass::OrthogonalEven => (0.0, 0.5, 0.0),
        SymmetryClass::OrthogonalOdd => (1.0, -0.5, 1.0),
        SymmetryClass::Orthogonal => (0.5, 0.0, 0.5),
    };
    SymmetryKernel {
        class,
        spatial_atom,
        fourier_atom: 1.0,
        fourier_window,
        fourier_constant,
    }
}

/// Parses a class label and returns its kernel.
pub fn kernel_by_label(label: &str) -> Result<SymmetryKernel, KernelError> {
    Ok(kernel(label.parse()?))
}

/// The pairing `∫ W(x) φ(x) dx`, evaluated on the Fourier side:
/// `φ̂(0) + w·∫_{-L}^{L} φ̂(y) dy + c·φ(0)` with `L = min(1, T_φ)`.
///
/// The window integral is split at the kinks of `φ̂`, so piecewise-smooth
/// transforms are integrated to near machine precision. For the full
/// orthogonal class the window weight is zero and the value
/// `φ̂(0) + ½φ(0)` is returned without any quadrature at all.
pub fn pair(k: &SymmetryKernel, fp: &FourierPair) -> f64 {
    let mut value = k.fourier_atom * fp.eval_hat(0.0) + k.fourier_constant * fp.eval(0.0);
    if k.fourier_window != 0.0 {
        let l = fp.support_radius().min(1.0);
        let window = 2.0
            * integrate_split(
                |y| fp.eval_hat(y),
                0.0,
                l,
                fp.hat_breakpoints(),
                1e-13,
            );
        value += k.fourier_window * window;
    }
    value
}

/// Side-by-side pairings of one test function against all five kernels,
/// flagging whether its support keeps the orthogonal flavors merged.
#[derive(Debug, Clone, Copy)]
pub struct IndistinguishabilityReport {
    pub support_radius: f64,
    /// True when `T_φ < 1`, the regime where the three orthogonal
    /// pairings provably coincide.
    pub hypothesis_ok: bool,
    pub orthogonal: f64,
    pub orthogonal_even: f64,
    pub orthogonal_odd: f64,
    /// Largest absolute difference among the three orthogonal pairings.
    pub max_orthogonal_spread: f64,
    pub symplectic: f64,
    pub unitary: f64,
}

/// Pairs `fp` against all five kernels and measures how far apart the
/// three orthogonal flavors are.
pub fn indistinguishability_report(fp: &FourierPair) -> IndistinguishabilityReport {
    let o = pair(&kernel(SymmetryClass::Orthogonal), fp);
    let e = pair(&kernel(SymmetryClass::OrthogonalEven), fp);
    let d = pair(&kernel(SymmetryClass::OrthogonalOdd), fp);
    let max_orthogonal_spread = (o - e)
        .abs()
        .max((o - d).abs())
        .max((e - d).abs());
    IndistinguishabilityReport {
        support_radius: fp.support_radius(),
        hypothesis_ok: fp.support_radius() < 1.0,
        orthogonal: o,
        orthogonal_even: e,
        orthogonal_odd: d,
        max_orthogonal_spread,
        symplectic: pair(&kernel(SymmetryClass::Symplectic), fp),
        unitary: pair(&kernel(SymmetryClass::Unitary), fp),
    }
}

/// The unitary pair-correlation kernel `1 - sinc²(πx)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct GuePairKernel;

impl GuePairKernel {
    pub fn eval(&self, x: f64) -> f64 {
        let s = sinc(PI * x);
        1.0 - s * s
    }
}

/// The pair-correlation functional `∫ (1 - sinc²(πx)) φ(x) dx`.
///
/// Evaluated by Plancherel: `sinc²(πx)` is the inverse transform of the
/// unit triangle `(1-|y|)⁺`, so the value equals
/// `φ̂(0) - ∫_{-1}^{1} (1-|y|) φ̂(y) dy`, a finite exact quadrature.
pub fn gue_functional(fp: &FourierPair) -> f64 {
    let l = fp.support_radius().min(1.0);
    let overlap = 2.0
        * integrate_split(
            |y| (1.0 - y.abs()) * fp.eval_hat(y),
            0.0,
            l,
            fp.hat_breakpoints(),
            1e-13,
        );
    fp.eval_hat(0.0) - overlap
}

/// The pair-correlation functional against the sharp window `1_{[lo,hi]}`,
/// by direct quadrature of `1 - sinc²(πx)`.
pub fn gue_functional_indicator(lo: f64, hi: f64) -> Result<f64, KernelError> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(KernelError::BadInterval(lo, hi));
    }
    let k = GuePairKernel;
    Ok(integrate(|x| k.eval(x), lo, hi, 1e-11))
}
