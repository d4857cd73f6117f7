//! Linear elasticity `y = lambda x` accepted up to a residual of norm
//! `epsilon`: the graph `||y - lambda x|| <= epsilon`.
//!
//! Closed form:
//! `b(x, y) = <x, y> + ((||y - lambda x|| - epsilon)_+)^2 / (2 lambda)`.
//!
//! Cover: initial stress `a ∈ B(epsilon)` with the separable bipotentials
//! `b_a(x, y) = <x, y> + ||y - a - lambda x||^2 / (2 lambda)` of the Fenchel
//! pair `phi_a(x) = lambda/2 ||x||^2 + <x, a>`,
//! `phi_a*(y) = ||y - a||^2 / (2 lambda)`.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use crate::bipotential::{Bipotential, LawGraph};
use crate::convex::{positive_part, ConvexFn};
use crate::cover::ConvexCover;
use crate::vector::{dot, norm};
use crate::{Error, ExtReal, Result, Vector};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ElasticParams {
    lambda: f64,
    epsilon: f64,
    dim: usize,
}

impl ElasticParams {
    /// `lambda > 0`, `epsilon >= 0`; `epsilon = 0` is the ideal law.
    pub fn new(lambda: f64, epsilon: f64, dim: usize) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidParameter("elastic modulus must be > 0"));
        }
        if !(epsilon.is_finite() && epsilon >= 0.0) {
            return Err(Error::InvalidParameter("tolerance margin must be >= 0"));
        }
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be >= 1"));
        }
        Ok(ElasticParams { lambda, epsilon, dim })
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

    fn check(&self, x: &Vector, y: &Vector) -> Result<()> {
        x.check_dim(self.dim)?;
        y.check_dim(self.dim)
    }

    /// `||y - lambda x||`.
    fn residual(&self, x: &[f64], y: &[f64]) -> f64 {
        residual_norm(self.lambda, x, y, None)
    }
}

/// `||y - a - lambda x||` without allocating.
fn residual_norm(lambda: f64, x: &[f64], y: &[f64], a: Option<&[f64]>) -> f64 {
    libm::sqrt(residual_norm_sq(lambda, x, y, a))
}

fn residual_norm_sq(lambda: f64, x: &[f64], y: &[f64], a: Option<&[f64]>) -> f64 {
    match a {
        None => x.iter().zip(y).map(|(xi, yi)| (yi - lambda * xi) * (yi - lambda * xi)).sum(),
        Some(a) => x
            .iter()
            .zip(y)
            .zip(a)
            .map(|((xi, yi), ai)| {
                let r = yi - ai - lambda * xi;
                r * r
            })
            .sum(),
    }
}

pub fn elastic_b(p: &ElasticParams, x: &Vector, y: &Vector) -> Result<f64> {
    p.check(x, y)?;
    Ok(eval_closed_form(p, x.as_slice(), y.as_slice()))
}

fn eval_closed_form(p: &ElasticParams, x: &[f64], y: &[f64]) -> f64 {
    let excess = positive_part(p.residual(x, y) - p.epsilon);
    dot(x, y) + excess * excess / (2.0 * p.lambda)
}

/// `||y - lambda x|| <= epsilon + tol`.
pub fn elastic_member(p: &ElasticParams, x: &Vector, y: &Vector, tol: f64) -> Result<bool> {
    p.check(x, y)?;
    Ok(p.residual(x.as_slice(), y.as_slice()) <= p.epsilon + tol)
}

pub fn elastic_regime(p: &ElasticParams, x: &Vector, y: &Vector, tol: f64) -> Result<&'static str> {
    Ok(if elastic_member(p, x, y, tol)? { "inside thick line" } else { "outside thick line" })
}

/// Cover member `b_a(x, y)`; `||a|| > epsilon` is outside the parameter set.
pub fn elastic_cover_b(p: &ElasticParams, a: &Vector, x: &Vector, y: &Vector) -> Result<f64> {
    p.check(x, y)?;
    a.check_dim(p.dim)?;
    if !in_ball(a.as_slice(), p.epsilon) {
        return Err(Error::ParameterOutsideSet);
    }
    Ok(eval_member(p.lambda, a.as_slice(), x.as_slice(), y.as_slice()))
}

fn eval_member(lambda: f64, a: &[f64], x: &[f64], y: &[f64]) -> f64 {
    dot(x, y) + residual_norm_sq(lambda, x, y, Some(a)) / (2.0 * lambda)
}

/// `||a|| <= radius`, up to a few ulps so that points built on the sphere
/// (grid rims, stationary points) are accepted.
fn in_ball(a: &[f64], radius: f64) -> bool {
    super::within(norm(a), radius)
}

/// Minimiser of `a -> b_a(x, y)` over `B(epsilon)` on the constrained
/// branch `||y - lambda x|| > epsilon`.
///
/// Returns `(a, eta)` with the Lagrange multiplier
/// `eta = (||y - lambda x|| / epsilon - 1) / 2` and
/// `a = (y - lambda x) / (1 + 2 eta)`, so `||a|| = epsilon`.
pub fn elastic_stationarity(p: &ElasticParams, x: &Vector, y: &Vector) -> Result<(Vector, f64)> {
    p.check(x, y)?;
    let r = p.residual(x.as_slice(), y.as_slice());
    if r <= p.epsilon {
        return Err(Error::WrongBranch("||y - lambda x|| <= epsilon: the minimiser is a = y - lambda x"));
    }
    let eta = 0.5 * (r / p.epsilon - 1.0);
    let a = y.add_scaled(-p.lambda, x).scaled(1.0 / (1.0 + 2.0 * eta));
    Ok((a, eta))
}

/// Exact minimiser over the whole ball: the projection of `y - lambda x`
/// onto `B(epsilon)`.
fn exact_minimiser(p: &ElasticParams, x: &Vector, y: &Vector) -> Vector {
    let d = y.add_scaled(-p.lambda, x);
    let r = d.norm();
    if r <= p.epsilon {
        d
    } else {
        d.scaled(p.epsilon / r)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ElasticBipotential(pub ElasticParams);

impl Bipotential for ElasticBipotential {
    fn dims(&self) -> (usize, usize) {
        (self.0.dim, self.0.dim)
    }

    fn eval(&self, x: &Vector, y: &Vector) -> ExtReal {
        ExtReal::Finite(eval_closed_form(&self.0, x.as_slice(), y.as_slice()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ElasticGraph(pub ElasticParams);

impl LawGraph for ElasticGraph {
    fn dims(&self) -> (usize, usize) {
        (self.0.dim, self.0.dim)
    }

    fn member(&self, x: &Vector, y: &Vector, tol: f64) -> bool {
        self.0.residual(x.as_slice(), y.as_slice()) <= self.0.epsilon + tol
    }

    fn description(&self) -> &str {
        "blurred elasticity: ||y - lambda x|| <= epsilon"
    }
}

/// `phi_a(x) = lambda/2 ||x||^2 + <x, a>`.
#[derive(Clone, Debug, PartialEq)]
pub struct ElasticPotential {
    pub lambda: f64,
    pub a: Vector,
}

impl ConvexFn for ElasticPotential {
    fn dim(&self) -> usize {
        self.a.dim()
    }

    fn eval(&self, x: &Vector) -> ExtReal {
        ExtReal::Finite(0.5 * self.lambda * x.norm_sq() + dot(x.as_slice(), self.a.as_slice()))
    }
}

/// `phi_a*(y) = ||y - a||^2 / (2 lambda)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ElasticConjugate {
    pub lambda: f64,
    pub a: Vector,
}

impl ConvexFn for ElasticConjugate {
    fn dim(&self) -> usize {
        self.a.dim()
    }

    fn eval(&self, y: &Vector) -> ExtReal {
        ExtReal::Finite(y.sub(&self.a).norm_sq() / (2.0 * self.lambda))
    }
}

/// Cover member `b_a`, the separable bipotential of `(phi_a, phi_a*)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ElasticCoverMember {
    pub lambda: f64,
    pub a: Vector,
}

impl Bipotential for ElasticCoverMember {
    fn dims(&self) -> (usize, usize) {
        (self.a.dim(), self.a.dim())
    }

    fn eval(&self, x: &Vector, y: &Vector) -> ExtReal {
        ExtReal::Finite(eval_member(self.lambda, self.a.as_slice(), x.as_slice(), y.as_slice()))
    }
}

/// Initial-stress cover `a ∈ B(epsilon) -> b_a`.
///
/// In two dimensions the parameter samples form a polar grid (center plus
/// `angles x radii`); in other dimensions a product grid of the cube
/// `[-epsilon, epsilon]^n` restricted to the ball.
#[derive(Clone, Debug)]
pub struct ElasticCover {
    params: ElasticParams,
    samples: Vec<Vector>,
}

pub const POLAR_ANGLES: usize = 64;
pub const POLAR_RADII: usize = 128;

impl ElasticCover {
    /// Default discretisation: 64 angles x 128 radii (2-D), or 33 points per
    /// axis otherwise.
    pub fn new(params: ElasticParams) -> Self {
        if params.dim == 2 {
            Self::polar(params, POLAR_ANGLES, POLAR_RADII)
        } else {
            Self::cubic(params, 33)
        }
    }

    pub fn polar(params: ElasticParams, angles: usize, radii: usize) -> Self {
        assert_eq!(params.dim, 2, "polar grids are two-dimensional");
        let mut samples = Vec::with_capacity(1 + angles * radii);
        samples.push(Vector::zeros(2));
        for j in 1..=radii {
            let r = params.epsilon * j as f64 / radii as f64;
            for k in 0..angles {
                let th = TAU * k as f64 / angles as f64;
                samples.push(Vector::from([r * libm::cos(th), r * libm::sin(th)]));
            }
        }
        ElasticCover { params, samples }
    }

    pub fn cubic(params: ElasticParams, per_axis: usize) -> Self {
        let n = params.dim;
        let axis = super::uniform_grid(-params.epsilon, params.epsilon, per_axis.max(1));
        let mut samples = Vec::new();
        let mut idx = alloc::vec![0usize; n];
        loop {
            let a: Vec<f64> = idx.iter().map(|&i| axis[i]).collect();
            if in_ball(&a, params.epsilon) {
                samples.push(Vector::new(a).expect("grid coordinates are finite"));
            }
            let mut k = 0;
            while k < n {
                idx[k] += 1;
                if idx[k] < axis.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
        ElasticCover { params, samples }
    }

    /// Cover with user-supplied parameter samples (all inside `B(epsilon)`).
    pub fn with_samples(params: ElasticParams, samples: Vec<Vector>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::NoSamples);
        }
        for a in &samples {
            a.check_dim(params.dim)?;
            if !in_ball(a.as_slice(), params.epsilon) {
                return Err(Error::ParameterOutsideSet);
            }
        }
        Ok(ElasticCover { params, samples })
    }

    pub fn params(&self) -> &ElasticParams {
        &self.params
    }
}

impl ConvexCover for ElasticCover {
    type Param = Vector;
    type Member = ElasticCoverMember;

    fn dims(&self) -> (usize, usize) {
        (self.params.dim, self.params.dim)
    }

    fn contains(&self, a: &Vector) -> bool {
        a.dim() == self.params.dim && in_ball(a.as_slice(), self.params.epsilon)
    }

    fn eval_member(&self, a: &Vector, x: &Vector, y: &Vector) -> ExtReal {
        ExtReal::Finite(eval_member(self.params.lambda, a.as_slice(), x.as_slice(), y.as_slice()))
    }

    fn member(&self, a: &Vector) -> Result<ElasticCoverMember> {
        if !self.contains(a) {
            return Err(Error::ParameterOutsideSet);
        }
        Ok(ElasticCoverMember { lambda: self.params.lambda, a: a.clone() })
    }

    fn lambda_samples(&self) -> &[Vector] {
        &self.samples
    }

    /// `a = alpha a1 + (1 - alpha) a2`.
    fn witness_frozen_x(
        &self,
        first: (&Vector, &Vector),
        second: (&Vector, &Vector),
        alpha: f64,
        _x: &Vector,
    ) -> Vector {
        first.0.lerp(alpha, second.0)
    }

    /// `a = alpha a1 + (1 - alpha) a2`.
    fn witness_frozen_y(
        &self,
        first: (&Vector, &Vector),
        second: (&Vector, &Vector),
        alpha: f64,
        _y: &Vector,
    ) -> Vector {
        first.0.lerp(alpha, second.0)
    }

    /// Stationary point: `a = y - lambda x` inside the ball, otherwise the
    /// constrained multiplier solution.
    fn refine(&self, x: &Vector, y: &Vector) -> Option<Vector> {
        Some(exact_minimiser(&self.params, x, y))
    }
}
