//! Unilateral contact with Coulomb friction, and its blurred version with
//! the friction coefficient ranging over `[mu-, mu+]`.
//!
//! Vectors of `X = Y = R x R^2` split into a normal part (gap velocity /
//! contact pressure) and a tangential part (slip velocity / minus the
//! friction stress). Cones: `K_mu = {||y_t|| <= mu y_n}` and
//! `K_0* = {x_n <= 0}`.
//!
//! * Coulomb: `b_mu(x, y) = mu y_n ||x_t|| + chi_K_mu(y) + chi_K_0*(x)`.
//! * Blurred: `b(x, y) = max(mu- y_n, ||y_t||) ||x_t|| + chi_K_mu+(y) + chi_K_0*(x)`.

use alloc::vec::Vec;

use crate::bipotential::{Bipotential, LawGraph};
use crate::cover::ConvexCover;
use crate::vector::{dot, norm};
use crate::{Error, ExtReal, Result, Vector};

use super::plastic::clamp_between;
use super::{positively_colinear, uniform_grid, within, INTERVAL_SAMPLES};

/// A vector of `R x R^2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContactVec {
    pub normal: f64,
    pub tangential: [f64; 2],
}

impl ContactVec {
    pub const ZERO: ContactVec = ContactVec { normal: 0.0, tangential: [0.0, 0.0] };

    pub fn new(normal: f64, tangential: [f64; 2]) -> Self {
        ContactVec { normal, tangential }
    }

    pub fn from_vector(v: &Vector) -> Result<Self> {
        v.check_dim(3)?;
        Ok(Self::from_slice(v.as_slice()))
    }

    fn from_slice(v: &[f64]) -> Self {
        ContactVec { normal: v[0], tangential: [v[1], v[2]] }
    }

    pub fn to_vector(&self) -> Vector {
        Vector::from([self.normal, self.tangential[0], self.tangential[1]])
    }

    pub fn tangential_norm(&self) -> f64 {
        norm(&self.tangential)
    }

    /// `x_n y_n + <x_t, y_t>`.
    pub fn duality(&self, other: &ContactVec) -> f64 {
        self.normal * other.normal + dot(&self.tangential, &other.tangential)
    }

    pub fn norm(&self) -> f64 {
        norm(&[self.normal, self.tangential[0], self.tangential[1]])
    }
}

impl From<ContactVec> for Vector {
    fn from(c: ContactVec) -> Vector {
        c.to_vector()
    }
}

/// `y ∈ K_mu`: `||y_t|| <= mu y_n` (up to a few ulps).
pub fn in_coulomb_cone(mu: f64, y: &ContactVec) -> bool {
    y.normal >= 0.0 && within(y.tangential_norm(), mu * y.normal)
}

/// `x ∈ K_0*`: `x_n <= 0`.
pub fn in_gap_halfspace(x: &ContactVec) -> bool {
    x.normal <= 0.0
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrictionParams {
    mu_minus: f64,
    mu_plus: f64,
}

impl FrictionParams {
    /// `0 < mu- <= mu+`; `mu- = mu+` is the classical Coulomb law.
    pub fn new(mu_minus: f64, mu_plus: f64) -> Result<Self> {
        if !(mu_minus.is_finite() && mu_plus.is_finite()) {
            return Err(Error::NonFinite);
        }
        if !(mu_minus > 0.0 && mu_minus <= mu_plus) {
            return Err(Error::InvalidParameter("friction range must satisfy 0 < mu- <= mu+"));
        }
        Ok(FrictionParams { mu_minus, mu_plus })
    }

    pub fn mu_minus(&self) -> f64 {
        self.mu_minus
    }

    pub fn mu_plus(&self) -> f64 {
        self.mu_plus
    }
}

/// Classical Coulomb bipotential. `mu > 0` is a precondition.
pub fn coulomb_b(mu: f64, x: &ContactVec, y: &ContactVec) -> ExtReal {
    debug_assert!(mu > 0.0);
    if !in_coulomb_cone(mu, y) || !in_gap_halfspace(x) {
        return ExtReal::PosInf;
    }
    ExtReal::Finite(mu * y.normal * x.tangential_norm())
}

/// Separation (`x_n <= 0`, `y = 0`), sticking (`x = 0`, `y ∈ K_mu`) or
/// sliding (`x_n = 0`, `x_t != 0`, `y_t = mu y_n x_t / ||x_t||`).
pub fn coulomb_member(mu: f64, x: &ContactVec, y: &ContactVec, tol: f64) -> bool {
    if !in_coulomb_cone(mu, y) || !in_gap_halfspace(x) {
        return false;
    }
    if y.norm() <= tol || x.norm() <= tol {
        return true;
    }
    let nt = x.tangential_norm();
    if x.normal.abs() > tol || nt <= tol {
        return false;
    }
    let s = mu * y.normal / nt;
    let r = [y.tangential[0] - s * x.tangential[0], y.tangential[1] - s * x.tangential[1]];
    norm(&r) <= tol
}

/// Blurred Coulomb bipotential.
pub fn friction_b(p: &FrictionParams, x: &ContactVec, y: &ContactVec) -> ExtReal {
    if !in_coulomb_cone(p.mu_plus, y) || !in_gap_halfspace(x) {
        return ExtReal::PosInf;
    }
    ExtReal::Finite((p.mu_minus * y.normal).max(y.tangential_norm()) * x.tangential_norm())
}

/// Membership in the critical set of [`friction_b`]: separation, sticking
/// in `K_mu+`, or sliding with `mu- y_n <= ||y_t|| <= mu+ y_n` and `y_t`
/// positively colinear with `x_t`.
pub fn friction_member(p: &FrictionParams, x: &ContactVec, y: &ContactVec, tol: f64) -> bool {
    if !in_coulomb_cone(p.mu_plus, y) || !in_gap_halfspace(x) {
        return false;
    }
    if y.norm() <= tol || x.norm() <= tol {
        return true;
    }
    x.normal.abs() <= tol
        && x.tangential_norm() > tol
        && y.tangential_norm() >= p.mu_minus * y.normal - tol
        && positively_colinear(&x.tangential, &y.tangential, tol)
}

pub fn friction_regime(p: &FrictionParams, x: &ContactVec, y: &ContactVec, tol: f64) -> &'static str {
    if !in_gap_halfspace(x) {
        "inadmissible velocity"
    } else if !in_coulomb_cone(p.mu_plus, y) {
        "inadmissible stress"
    } else if !friction_member(p, x, y, tol) {
        "off graph"
    } else if y.norm() <= tol {
        "separation"
    } else if x.norm() <= tol {
        "sticking"
    } else {
        "sliding"
    }
}

fn split(v: &Vector) -> ContactVec {
    ContactVec::from_slice(v.as_slice())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoulombBipotential {
    mu: f64,
}

impl CoulombBipotential {
    pub fn new(mu: f64) -> Result<Self> {
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::InvalidParameter("friction coefficient must be > 0"));
        }
        Ok(CoulombBipotential { mu })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }
}

impl Bipotential for CoulombBipotential {
    fn dims(&self) -> (usize, usize) {
        (3, 3)
    }

    fn eval(&self, x: &Vector, y: &Vector) -> ExtReal {
        coulomb_b(self.mu, &split(x), &split(y))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrictionBipotential(pub FrictionParams);

impl Bipotential for FrictionBipotential {
    fn dims(&self) -> (usize, usize) {
        (3, 3)
    }

    fn eval(&self, x: &Vector, y: &Vector) -> ExtReal {
        friction_b(&self.0, &split(x), &split(y))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoulombGraph(pub CoulombBipotential);

impl LawGraph for CoulombGraph {
    fn dims(&self) -> (usize, usize) {
        (3, 3)
    }

    fn member(&self, x: &Vector, y: &Vector, tol: f64) -> bool {
        coulomb_member(self.0.mu, &split(x), &split(y), tol)
    }

    fn description(&self) -> &str {
        "unilateral contact with Coulomb friction: separation, sticking or sliding"
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrictionGraph(pub FrictionParams);

impl LawGraph for FrictionGraph {
    fn dims(&self) -> (usize, usize) {
        (3, 3)
    }

    fn member(&self, x: &Vector, y: &Vector, tol: f64) -> bool {
        friction_member(&self.0, &split(x), &split(y), tol)
    }

    fn description(&self) -> &str {
        "blurred Coulomb friction: friction coefficient anywhere in [mu-, mu+]"
    }
}

/// Friction coefficient `mu ∈ [mu-, mu+] -> b_mu`.
#[derive(Clone, Debug)]
pub struct FrictionCover {
    params: FrictionParams,
    samples: Vec<f64>,
}

impl FrictionCover {
    /// Uniform grid of 1001 coefficients.
    pub fn new(params: FrictionParams) -> Self {
        Self::with_points(params, INTERVAL_SAMPLES)
    }

    pub fn with_points(params: FrictionParams, points: usize) -> Self {
        FrictionCover { params, samples: uniform_grid(params.mu_minus, params.mu_plus, points.max(1)) }
    }

    pub fn params(&self) -> &FrictionParams {
        &self.params
    }

    pub fn step(&self) -> f64 {
        let n = self.samples.len();
        if n < 2 {
            0.0
        } else {
            (self.params.mu_plus - self.params.mu_minus) / (n - 1) as f64
        }
    }
}

impl ConvexCover for FrictionCover {
    type Param = f64;
    type Member = CoulombBipotential;

    fn dims(&self) -> (usize, usize) {
        (3, 3)
    }

    fn contains(&self, mu: &f64) -> bool {
        (self.params.mu_minus..=self.params.mu_plus).contains(mu)
    }

    fn eval_member(&self, mu: &f64, x: &Vector, y: &Vector) -> ExtReal {
        coulomb_b(*mu, &split(x), &split(y))
    }

    fn member(&self, mu: &f64) -> Result<CoulombBipotential> {
        if !self.contains(mu) {
            return Err(Error::ParameterOutsideSet);
        }
        CoulombBipotential::new(*mu)
    }

    fn lambda_samples(&self) -> &[f64] {
        &self.samples
    }

    /// Pressure-weighted mean
    /// `mu = (alpha mu1 y1_n + beta mu2 y2_n) / (alpha y1_n + beta y2_n)`,
    /// so that `mu * Y_n` equals the combination of `mu_i y_i_n` and the
    /// combined stress stays in `K_mu`. Plain mean when both pressures vanish.
    fn witness_frozen_x(&self, first: (&f64, &Vector), second: (&f64, &Vector), alpha: f64, _x: &Vector) -> f64 {
        let (m1, m2) = (*first.0, *second.0);
        let beta = 1.0 - alpha;
        let (p1, p2) = (first.1[0].max(0.0), second.1[0].max(0.0));
        let pressure = alpha * p1 + beta * p2;
        let mu = if pressure > 0.0 { (alpha * m1 * p1 + beta * m2 * p2) / pressure } else { alpha * m1 + beta * m2 };
        clamp_between(mu, m1, m2)
    }

    /// `mu = min(mu1, mu2)`; at `alpha ∈ {0, 1}` the surviving parameter.
    fn witness_frozen_y(&self, first: (&f64, &Vector), second: (&f64, &Vector), alpha: f64, _y: &Vector) -> f64 {
        if alpha == 1.0 {
            *first.0
        } else if alpha == 0.0 {
            *second.0
        } else {
            first.0.min(*second.0)
        }
    }

    /// `mu = clamp(||y_t|| / y_n, mu-, mu+)`.
    fn refine(&self, _x: &Vector, y: &Vector) -> Option<f64> {
        let y = split(y);
        let (lo, hi) = (self.params.mu_minus, self.params.mu_plus);
        Some(if y.normal > 0.0 { (y.tangential_norm() / y.normal).clamp(lo, hi) } else { lo })
    }
}
