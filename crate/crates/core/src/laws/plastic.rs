//! Rigid-plastic law with yield threshold `lambda` (superpotential
//! `phi(x) = lambda ||x||`, conjugate the indicator of `B(lambda)`), blurred
//! by letting the threshold range over `[lambda-, lambda+] =
//! [lambda - epsilon, lambda + epsilon]`.
//!
//! Closed form: `b(x, y) = max(lambda-, ||y||) ||x|| + chi_B(lambda+)(y)`.
//! Critical set: `x = 0, ||y|| <= lambda+`, or
//! `lambda- <= ||y|| <= lambda+` with `x = eta y`, `eta >= 0`.

use alloc::vec::Vec;

use crate::bipotential::{Bipotential, LawGraph};
use crate::cover::ConvexCover;
use crate::vector::norm;
use crate::{Error, ExtReal, Result, Vector};

use super::{positively_colinear, uniform_grid, within, INTERVAL_SAMPLES};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlasticParams {
    lambda: f64,
    epsilon: f64,
    dim: usize,
}

impl PlasticParams {
    /// `lambda > 0`, `0 <= epsilon < lambda`; `epsilon = 0` is the ideal law.
    pub fn new(lambda: f64, epsilon: f64, dim: usize) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidParameter("yield threshold must be > 0"));
        }
        if !(epsilon.is_finite() && (0.0..lambda).contains(&epsilon)) {
            return Err(Error::InvalidParameter("tolerance margin must satisfy 0 <= epsilon < lambda"));
        }
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be >= 1"));
        }
        Ok(PlasticParams { lambda, epsilon, dim })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lambda_minus(&self) -> f64 {
        self.lambda - self.epsilon
    }

    pub fn lambda_plus(&self) -> f64 {
        self.lambda + self.epsilon
    }

    fn check(&self, x: &Vector, y: &Vector) -> Result<()> {
        x.check_dim(self.dim)?;
        y.check_dim(self.dim)
    }
}

fn closed_form(p: &PlasticParams, x: &[f64], y: &[f64]) -> ExtReal {
    let ny = norm(y);
    if !within(ny, p.lambda_plus()) {
        ExtReal::PosInf
    } else {
        ExtReal::Finite(p.lambda_minus().max(ny) * norm(x))
    }
}

fn member(p: &PlasticParams, x: &[f64], y: &[f64], tol: f64) -> bool {
    let ny = norm(y);
    if !within(ny, p.lambda_plus()) {
        return false;
    }
    norm(x) <= tol || (ny >= p.lambda_minus() - tol && positively_colinear(x, y, tol))
}

pub fn plastic_b(p: &PlasticParams, x: &Vector, y: &Vector) -> Result<ExtReal> {
    p.check(x, y)?;
    Ok(closed_form(p, x.as_slice(), y.as_slice()))
}

/// Membership in the blurred plastic graph. The rigid slice `x = 0` is
/// taken as `||y|| <= lambda+` (the `eta = 0` case of the flow branch).
pub fn plastic_member(p: &PlasticParams, x: &Vector, y: &Vector, tol: f64) -> Result<bool> {
    p.check(x, y)?;
    Ok(member(p, x.as_slice(), y.as_slice(), tol))
}

pub fn plastic_regime(p: &PlasticParams, x: &Vector, y: &Vector, tol: f64) -> Result<&'static str> {
    p.check(x, y)?;
    Ok(if !within(y.norm(), p.lambda_plus()) {
        "inadmissible stress"
    } else if !member(p, x.as_slice(), y.as_slice(), tol) {
        "off graph"
    } else if x.norm() <= tol {
        "rigid"
    } else {
        "plastic flow"
    })
}

fn cover_member(eta: f64, x: &[f64], y: &[f64]) -> ExtReal {
    if !within(norm(y), eta) {
        ExtReal::PosInf
    } else {
        ExtReal::Finite(eta * norm(x))
    }
}

/// Cover member `b_eta(x, y) = eta ||x|| + chi_B(eta)(y)`.
pub fn plastic_cover_b(p: &PlasticParams, eta: f64, x: &Vector, y: &Vector) -> Result<ExtReal> {
    p.check(x, y)?;
    if !(p.lambda_minus()..=p.lambda_plus()).contains(&eta) {
        return Err(Error::ParameterOutsideSet);
    }
    Ok(cover_member(eta, x.as_slice(), y.as_slice()))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlasticBipotential(pub PlasticParams);

impl Bipotential for PlasticBipotential {
    fn dims(&self) -> (usize, usize) {
        (self.0.dim, self.0.dim)
    }

    fn eval(&self, x: &Vector, y: &Vector) -> ExtReal {
        closed_form(&self.0, x.as_slice(), y.as_slice())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlasticGraph(pub PlasticParams);

impl LawGraph for PlasticGraph {
    fn dims(&self) -> (usize, usize) {
        (self.0.dim, self.0.dim)
    }

    fn member(&self, x: &Vector, y: &Vector, tol: f64) -> bool {
        member(&self.0, x.as_slice(), y.as_slice(), tol)
    }

    fn description(&self) -> &str {
        "blurred plasticity: x = 0, ||y|| <= lambda+, or lambda- <= ||y|| <= lambda+ with x = eta y"
    }
}

/// `b_eta`: separable bipotential of `eta ||.||` and `chi_B(eta)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlasticCoverMember {
    pub eta: f64,
    pub dim: usize,
}

impl Bipotential for PlasticCoverMember {
    fn dims(&self) -> (usize, usize) {
        (self.dim, self.dim)
    }

    fn eval(&self, x: &Vector, y: &Vector) -> ExtReal {
        cover_member(self.eta, x.as_slice(), y.as_slice())
    }
}

/// Variable yield threshold `eta ∈ [lambda-, lambda+] -> b_eta`.
#[derive(Clone, Debug)]
pub struct PlasticCover {
    params: PlasticParams,
    samples: Vec<f64>,
}

impl PlasticCover {
    /// Uniform grid of 1001 thresholds.
    pub fn new(params: PlasticParams) -> Self {
        Self::with_points(params, INTERVAL_SAMPLES)
    }

    pub fn with_points(params: PlasticParams, points: usize) -> Self {
        let samples = uniform_grid(params.lambda_minus(), params.lambda_plus(), points.max(1));
        PlasticCover { params, samples }
    }

    pub fn params(&self) -> &PlasticParams {
        &self.params
    }

    /// Grid spacing of the threshold samples.
    pub fn step(&self) -> f64 {
        let n = self.samples.len();
        if n < 2 {
            0.0
        } else {
            (self.params.lambda_plus() - self.params.lambda_minus()) / (n - 1) as f64
        }
    }
}

/// Keeps a rounded convex combination of `a` and `b` inside `[min, max]`.
pub(crate) fn clamp_between(v: f64, a: f64, b: f64) -> f64 {
    v.clamp(a.min(b), a.max(b))
}

impl ConvexCover for PlasticCover {
    type Param = f64;
    type Member = PlasticCoverMember;

    fn dims(&self) -> (usize, usize) {
        (self.params.dim, self.params.dim)
    }

    fn contains(&self, eta: &f64) -> bool {
        (self.params.lambda_minus()..=self.params.lambda_plus()).contains(eta)
    }

    fn eval_member(&self, eta: &f64, x: &Vector, y: &Vector) -> ExtReal {
        cover_member(*eta, x.as_slice(), y.as_slice())
    }

    fn member(&self, eta: &f64) -> Result<PlasticCoverMember> {
        if !self.contains(eta) {
            return Err(Error::ParameterOutsideSet);
        }
        Ok(PlasticCoverMember { eta: *eta, dim: self.params.dim })
    }

    fn lambda_samples(&self) -> &[f64] {
        &self.samples
    }

    /// `eta = alpha eta1 + (1 - alpha) eta2`.
    fn witness_frozen_x(&self, first: (&f64, &Vector), second: (&f64, &Vector), alpha: f64, _x: &Vector) -> f64 {
        let (e1, e2) = (*first.0, *second.0);
        clamp_between(alpha * e1 + (1.0 - alpha) * e2, e1, e2)
    }

    /// `eta = min(eta1, eta2)`; at `alpha ∈ {0, 1}` the surviving parameter.
    fn witness_frozen_y(&self, first: (&f64, &Vector), second: (&f64, &Vector), alpha: f64, _y: &Vector) -> f64 {
        if alpha == 1.0 {
            *first.0
        } else if alpha == 0.0 {
            *second.0
        } else {
            first.0.min(*second.0)
        }
    }

    /// `eta = clamp(||y||, lambda-, lambda+)`.
    fn refine(&self, _x: &Vector, y: &Vector) -> Option<f64> {
        Some(y.norm().clamp(self.params.lambda_minus(), self.params.lambda_plus()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipotential::{gap, is_critical};
    use crate::DEFAULT_TOL;

    fn p() -> PlasticParams {
        PlasticParams::new(1.0, 0.25, 2).unwrap()
    }

    fn v(a: f64, b: f64) -> Vector {
        Vector::from([a, b])
    }

    #[test]
    fn closed_form_branches() {
        assert_eq!(plastic_b(&p(), &v(1.0, 0.0), &v(1.5, 0.0)).unwrap(), ExtReal::PosInf);
        assert_eq!(plastic_b(&p(), &v(1.0, 0.0), &v(1.0, 0.0)).unwrap(), 1.0);
        assert_eq!(plastic_b(&p(), &v(1.0, 0.0), &v(0.5, 0.0)).unwrap(), 0.75);
    }

    #[test]
    fn criticality_examples() {
        let b = PlasticBipotential(p());
        assert!(is_critical(&b, &v(1.0, 0.0), &v(1.0, 0.0), DEFAULT_TOL).unwrap());
        assert!(!is_critical(&b, &v(1.0, 0.0), &v(0.5, 0.0), DEFAULT_TOL).unwrap());
        assert!(is_critical(&b, &v(0.0, 0.0), &v(0.0, 0.0), DEFAULT_TOL).unwrap());
        assert_eq!(gap(&b, &v(1.0, 0.0), &v(0.5, 0.0)).unwrap(), 0.25);
    }

    #[test]
    fn membership_examples() {
        let m = |x, y| plastic_member(&p(), &x, &y, DEFAULT_TOL).unwrap();
        assert!(m(v(0.0, 0.0), v(0.5, 0.0)));
        assert!(m(v(2.0, 0.0), v(1.0, 0.0)));
        assert!(!m(v(0.0, 1.0), v(1.0, 0.0)));
        assert!(!m(v(-2.0, 0.0), v(1.0, 0.0)));
        // rigid slice reaches lambda+ through eta = 0
        assert!(m(v(0.0, 0.0), v(1.2, 0.0)));
        assert!(!m(v(0.0, 0.0), v(1.3, 0.0)));
    }

    #[test]
    fn cover_member_examples() {
        let b = |x, y| plastic_cover_b(&p(), 1.0, &x, &y).unwrap();
        assert_eq!(b(v(1.0, 0.0), v(1.0, 0.0)), 1.0);
        assert_eq!(b(v(1.0, 0.0), v(1.1, 0.0)), ExtReal::PosInf);
        assert_eq!(b(v(0.0, 0.0), v(0.3, 0.0)), 0.0);
        let m = PlasticCoverMember { eta: 1.0, dim: 2 };
        assert!(is_critical(&m, &v(1.0, 0.0), &v(1.0, 0.0), DEFAULT_TOL).unwrap());
        assert!(is_critical(&m, &v(0.0, 0.0), &v(0.3, 0.0), DEFAULT_TOL).unwrap());
        assert_eq!(plastic_cover_b(&p(), 1.3, &v(0.0, 0.0), &v(0.0, 0.0)), Err(Error::ParameterOutsideSet));
    }

    #[test]
    fn default_cover_grid() {
        let c = PlasticCover::new(p());
        let s = c.lambda_samples();
        assert_eq!(s.len(), 1001);
        assert_eq!((s[0], s[1000]), (0.75, 1.25));
        assert!((c.step() - 5e-4).abs() < 1e-15);
    }

    #[test]
    fn params_are_validated() {
        assert!(PlasticParams::new(1.0, 1.0, 2).is_err());
        assert!(PlasticParams::new(-1.0, 0.1, 2).is_err());
        assert!(PlasticParams::new(1.0, 0.0, 2).is_ok());
    }
}
