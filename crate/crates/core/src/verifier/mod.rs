//! Independent checks of the coefficient criteria.
//!
//! The class definitions are evaluated directly on sampled points of a circle
//! `|z| = r < 1`; the kernel ODE is checked through its residual; and
//! [`oracle`] recomputes every sum by naive high-precision summation.

pub mod oracle;
pub mod suites;

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::operators::NormalizedSeries;
use crate::series::{CoefficientSequence, KernelOrder};

pub const DEFAULT_DENOMINATOR_FLOOR: f64 = 1e-12;

/// Real points used by the negative-coefficient necessity check.
pub const NECESSITY_POINTS: [f64; 4] = [0.90, 0.99, 0.999, 0.9999];

/// Equally spaced points `r e^{2 pi i k / n}` on a circle inside the unit disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskSampling {
    radius: f64,
    num_points: usize,
    denominator_floor: f64,
}

impl DiskSampling {
    pub fn new(radius: f64, num_points: usize, denominator_floor: f64) -> Result<Self> {
        if !(radius > 0.0 && radius < 1.0) {
            return Err(Error::param(format!("sampling radius {radius} must lie in (0, 1)")));
        }
        if num_points < 64 {
            return Err(Error::param(format!(
                "need at least 64 sample points, got {num_points}"
            )));
        }
        if !(denominator_floor > 0.0) {
            return Err(Error::param("denominator floor must be positive"));
        }
        Ok(DiskSampling {
            radius,
            num_points,
            denominator_floor,
        })
    }

    pub fn with_defaults(radius: f64, num_points: usize) -> Result<Self> {
        Self::new(radius, num_points, DEFAULT_DENOMINATOR_FLOOR)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn num_points(&self) -> usize {
        self.num_points
    }

    pub fn denominator_floor(&self) -> f64 {
        self.denominator_floor
    }

    pub fn points(&self) -> Vec<Complex64> {
        (0..self.num_points)
            .map(|k| Complex64::from_polar(self.radius, TAU * k as f64 / self.num_points as f64))
            .collect()
    }
}

/// Which class ratio to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassRatio {
    /// `(z f' + l z^2 f'') / ((1 - l) f + l z f')`
    T,
    /// `(l z^3 f''' + (1 + 2l) z^2 f'' + z f') / (z f' + l z^2 f'')`
    L,
}

/// Real part of the class ratio at a single point.
pub fn class_ratio_real_part(
    f: &NormalizedSeries,
    ratio: ClassRatio,
    lambda: f64,
    z: Complex64,
    floor: f64,
) -> Result<f64> {
    let [f0, f1, f2, f3] = f.derivatives(z, 3);
    let (num, den) = match ratio {
        ClassRatio::T => (z * f1 + lambda * z * z * f2, (1.0 - lambda) * f0 + lambda * z * f1),
        ClassRatio::L => (
            lambda * z * z * z * f3 + (1.0 + 2.0 * lambda) * z * z * f2 + z * f1,
            z * f1 + lambda * z * z * f2,
        ),
    };
    let modulus = den.norm();
    if !(modulus >= floor) {
        return Err(Error::DegenerateDenominator { z, modulus });
    }
    Ok((num / den).re)
}

/// Minimum of the class ratio's real part over `points`. Evaluation is
/// parallel; the first degenerate point in input order is reported.
pub fn min_real_part_at(
    f: &NormalizedSeries,
    ratio: ClassRatio,
    lambda: f64,
    points: &[Complex64],
    floor: f64,
) -> Result<f64> {
    let values: Vec<Result<f64>> = points
        .par_iter()
        .map(|&z| class_ratio_real_part(f, ratio, lambda, z, floor))
        .collect();
    let mut min = f64::INFINITY;
    for v in values {
        min = min.min(v?);
    }
    Ok(min)
}

/// `min Re[(z f' + l z^2 f'') / ((1 - l) f + l z f')]` over the sampled circle.
pub fn min_real_part_t(f: &NormalizedSeries, lambda: f64, s: &DiskSampling) -> Result<f64> {
    min_real_part_at(f, ClassRatio::T, lambda, &s.points(), s.denominator_floor)
}

/// `min Re[(l z^3 f''' + (1 + 2l) z^2 f'' + z f') / (z f' + l z^2 f'')]` over the sampled circle.
pub fn min_real_part_l(f: &NormalizedSeries, lambda: f64, s: &DiskSampling) -> Result<f64> {
    min_real_part_at(f, ClassRatio::L, lambda, &s.points(), s.denominator_floor)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NecessityProbe {
    /// Minimum over [`NECESSITY_POINTS`] on the positive real axis.
    pub real_axis_min: f64,
    /// Minimum over full circles at the same radii.
    pub circle_min: f64,
}

/// Samples the class ratio along the positive real axis towards 1, plus full
/// circles at the same radii.
pub fn necessity_probe(
    f: &NormalizedSeries,
    ratio: ClassRatio,
    lambda: f64,
    num_points: usize,
) -> Result<NecessityProbe> {
    let real: Vec<Complex64> = NECESSITY_POINTS.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let real_axis_min = min_real_part_at(f, ratio, lambda, &real, DEFAULT_DENOMINATOR_FLOOR)?;
    let mut circle_min = f64::INFINITY;
    for r in NECESSITY_POINTS {
        let s = DiskSampling::with_defaults(r, num_points)?;
        circle_min = circle_min.min(min_real_part_at(f, ratio, lambda, &s.points(), s.denominator_floor)?);
    }
    Ok(NecessityProbe {
        real_axis_min,
        circle_min,
    })
}

/// `|S'' + (2 nu + 1)(S' - S'(0))/z - S|` at `z`, i.e. how far the truncated
/// kernel is from solving `L_nu u = u`.
///
/// `(S'(z) - S'(0))/z` is summed termwise as `sum_{n >= 2} n c_n z^{n-2}`, which
/// also gives the limit at `z = 0`. Accepts `nu >= -1/2`; at `-1/2` the
/// first-order term drops out and the kernel is `e^z`.
pub fn ode_residual(nu: KernelOrder, z: Complex64, tol: f64) -> Result<f64> {
    if nu.value() < -0.5 {
        return Err(Error::OperatorDomain(nu.value()));
    }
    let seq = CoefficientSequence::with_weighted_tail(nu, tol, 2, z.norm().max(1.0))?;
    let c = seq.values();
    let [s0, _, s2, _] = seq.derivatives(z);
    let mut quotient = Complex64::new(0.0, 0.0);
    for n in (2..c.len()).rev() {
        quotient = quotient * z + n as f64 * c[n];
    }
    let residual = s2 + (2.0 * nu.value() + 1.0) * quotient - s0;
    Ok(residual.norm())
}
