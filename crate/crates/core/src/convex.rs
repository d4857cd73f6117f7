//! Convex functions on `R^n` and sampled convexity / subgradient checks.

use alloc::vec::Vec;

use crate::vector::dot;
use crate::{Error, ExtReal, Result, Vector};

/// A convex, lower semicontinuous `f: R^n -> R ∪ {+inf}`.
///
/// Convexity and lower semicontinuity are contracts of the implementor.
/// Convexity can be spot-checked with [`check_segment_convexity`]; lower
/// semicontinuity is not checked anywhere.
pub trait ConvexFn {
    fn dim(&self) -> usize;

    fn eval(&self, x: &Vector) -> ExtReal;

    /// Effective domain: `eval(x)` is finite exactly when this is true.
    fn in_domain(&self, x: &Vector) -> bool {
        self.eval(x).is_finite()
    }
}

impl<F: ConvexFn + ?Sized> ConvexFn for &F {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn eval(&self, x: &Vector) -> ExtReal {
        (**self).eval(x)
    }

    fn in_domain(&self, x: &Vector) -> bool {
        (**self).in_domain(x)
    }
}

/// Closure adapter.
#[derive(Clone, Copy)]
pub struct FnConvex<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(&Vector) -> ExtReal> FnConvex<F> {
    pub fn new(dim: usize, f: F) -> Self {
        FnConvex { dim, f }
    }
}

impl<F: Fn(&Vector) -> ExtReal> ConvexFn for FnConvex<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &Vector) -> ExtReal {
        (self.f)(x)
    }
}

/// `weight * ||x||`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Norm {
    pub dim: usize,
    pub weight: f64,
}

impl ConvexFn for Norm {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &Vector) -> ExtReal {
        ExtReal::Finite(self.weight * x.norm())
    }
}

/// `weight * ||x||^2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SquaredNorm {
    pub dim: usize,
    pub weight: f64,
}

impl ConvexFn for SquaredNorm {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &Vector) -> ExtReal {
        ExtReal::Finite(self.weight * x.norm_sq())
    }
}

/// Indicator of the closed ball `B(radius)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BallIndicator {
    pub dim: usize,
    pub radius: f64,
}

impl ConvexFn for BallIndicator {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &Vector) -> ExtReal {
        indicator(|p| p.norm() <= self.radius, x)
    }
}

/// `0` on the set described by `member`, `+inf` off it.
pub fn indicator(member: impl Fn(&Vector) -> bool, p: &Vector) -> ExtReal {
    if member(p) {
        ExtReal::ZERO
    } else {
        ExtReal::PosInf
    }
}

/// `max(alpha, 0)`.
pub fn positive_part(alpha: f64) -> f64 {
    alpha.max(0.0)
}

/// Outcome of [`check_subgradient`]. Carries the probes it was decided on.
#[derive(Clone, Debug, PartialEq)]
pub struct SubgradientVerdict {
    pub probes: Vec<Vector>,
    /// Worst violating probe, if any.
    pub violation: Option<ProbeViolation>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeViolation {
    pub probe: Vector,
    /// `<z - x, u> - (f(z) - f(x))`, always `> tol`.
    pub excess: f64,
}

impl SubgradientVerdict {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Tests `u ∈ ∂f(x)` on a finite probe set:
/// `<z - x, u> <= f(z) - f(x) + tol` for every probe `z`.
///
/// Probes where `f(z) = +inf` satisfy the inequality. A pass is evidence,
/// not proof.
pub fn check_subgradient<F: ConvexFn>(
    f: &F,
    x: &Vector,
    u: &Vector,
    probes: &[Vector],
    tol: f64,
) -> Result<SubgradientVerdict> {
    x.check_dim(f.dim())?;
    u.check_dim(f.dim())?;
    if probes.is_empty() {
        return Err(Error::NoSamples);
    }
    let fx = f.eval(x).finite().ok_or(Error::OutsideDomain)?;
    let ux = dot(u.as_slice(), x.as_slice());
    let mut violation: Option<ProbeViolation> = None;
    for z in probes {
        z.check_dim(f.dim())?;
        let Some(fz) = f.eval(z).finite() else { continue };
        let lhs = dot(u.as_slice(), z.as_slice()) - ux;
        let excess = lhs - (fz - fx);
        if excess > tol && violation.as_ref().is_none_or(|v| excess > v.excess) {
            violation = Some(ProbeViolation { probe: z.clone(), excess });
        }
    }
    Ok(SubgradientVerdict { probes: probes.to_vec(), violation })
}

/// Outcome of [`check_segment_convexity`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SegmentVerdict {
    pub samples: usize,
    pub violation: Option<SegmentViolation>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SegmentViolation {
    pub t: f64,
    /// `f(t z1 + (1-t) z2) - (t f(z1) + (1-t) f(z2))`, or `+inf` when the
    /// left side is infinite and the right side finite.
    pub excess: f64,
}

impl SegmentVerdict {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks `f(t z1 + (1-t) z2) <= t f(z1) + (1-t) f(z2) + tol` at
/// `t = i / (k + 1)`, `i = 1..=k`. An infinite right side makes a sample
/// vacuous.
pub fn check_segment_convexity<F: ConvexFn>(
    f: &F,
    z1: &Vector,
    z2: &Vector,
    k: usize,
    tol: f64,
) -> Result<SegmentVerdict> {
    if k == 0 {
        return Err(Error::InvalidParameter("segment convexity needs k >= 1"));
    }
    z1.check_dim(f.dim())?;
    z2.check_dim(f.dim())?;
    let (f1, f2) = (f.eval(z1), f.eval(z2));
    let mut violation: Option<SegmentViolation> = None;
    for i in 1..=k {
        let t = i as f64 / (k + 1) as f64;
        let rhs = ExtReal::convex_combination(t, f1, f2)?;
        let Some(rhs) = rhs.finite() else { continue };
        let excess = match f.eval(&z1.lerp(t, z2)) {
            ExtReal::PosInf => f64::INFINITY,
            ExtReal::Finite(lhs) => lhs - rhs,
        };
        if excess > tol && violation.is_none_or(|v| excess > v.excess) {
            violation = Some(SegmentViolation { t, excess });
        }
    }
    Ok(SegmentVerdict { samples: k, violation })
}
