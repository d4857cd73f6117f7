//! Bipotential convex covers and the inf-envelope construction.
//!
//! A cover is a compact family `lambda ∈ Λ -> b_lambda` of bipotentials
//! whose critical sets union to a target graph `M`, and whose
//! `f(lambda, x, y) = b_lambda(x, y)` is implicitly convex in each of
//! `(lambda, x)` and `(lambda, y)`: for any two parameterised points and
//! any convex weight there is a parameter making the convexity inequality
//! hold. Under those conditions `inf_lambda b_lambda` is a bipotential with
//! graph `M`.
//!
//! Existence of implicit-convexity witnesses is not searched for: every
//! cover supplies constructive selectors, and [`check_implicit_convexity`]
//! tests the inequality at the selected parameter. Joint lower
//! semicontinuity on `Λ x X` and `Λ x Y` is a contract of the cover.

use alloc::vec::Vec;
use core::fmt::Debug;

use crate::bipotential::{critical_tolerance, Bipotential, LawGraph};
use crate::vector::dot;
use crate::{Error, ExtReal, Result, Vector};

pub trait ConvexCover {
    type Param: Clone + Debug;
    type Member: Bipotential;

    fn dims(&self) -> (usize, usize);

    /// Membership of a parameter in `Λ`.
    fn contains(&self, param: &Self::Param) -> bool;

    /// `b_param(x, y)` without validating `param`.
    fn eval_member(&self, param: &Self::Param, x: &Vector, y: &Vector) -> ExtReal;

    fn member(&self, param: &Self::Param) -> Result<Self::Member>;

    /// Finite discretisation of `Λ` used by the envelope.
    fn lambda_samples(&self) -> &[Self::Param];

    /// Witness for `f(., x, .)` (x frozen, y varies): given
    /// `(lambda1, y1)`, `(lambda2, y2)` and `alpha`, a parameter `lambda` with
    /// `f(lambda, x, alpha y1 + (1-alpha) y2) <= alpha f(lambda1, x, y1) + (1-alpha) f(lambda2, x, y2)`.
    fn witness_frozen_x(
        &self,
        first: (&Self::Param, &Vector),
        second: (&Self::Param, &Vector),
        alpha: f64,
        x: &Vector,
    ) -> Self::Param;

    /// Witness for `f(., ., y)` (y frozen, x varies).
    fn witness_frozen_y(
        &self,
        first: (&Self::Param, &Vector),
        second: (&Self::Param, &Vector),
        alpha: f64,
        y: &Vector,
    ) -> Self::Param;

    /// Exact minimiser of `lambda -> b_lambda(x, y)` over all of `Λ`, when
    /// known in closed form.
    fn refine(&self, _x: &Vector, _y: &Vector) -> Option<Self::Param> {
        None
    }
}

/// Where the envelope found its minimum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArgMin {
    /// Index into `lambda_samples`; smallest index on ties.
    Sample(usize),
    /// The cover's exact minimiser.
    Refined,
}

/// `b(x, y) = min_lambda b_lambda(x, y)` over the parameter samples, and
/// optionally the cover's exact minimiser.
///
/// Without refinement this is a discretised infimum: an upper bound of the
/// true envelope whose error is governed by the parameter grid spacing.
pub struct InfEnvelope<'a, C: ConvexCover> {
    cover: &'a C,
    refine: bool,
}

pub fn inf_envelope<C: ConvexCover>(cover: &C) -> InfEnvelope<'_, C> {
    InfEnvelope { cover, refine: false }
}

impl<'a, C: ConvexCover> InfEnvelope<'a, C> {
    /// Also evaluate the member at [`ConvexCover::refine`].
    pub fn refined(self) -> Self {
        InfEnvelope { refine: true, ..self }
    }

    pub fn cover(&self) -> &'a C {
        self.cover
    }

    /// Minimum value and where it is attained. `None` only for an empty
    /// sample set without refinement.
    pub fn argmin(&self, x: &Vector, y: &Vector) -> Option<(ArgMin, ExtReal)> {
        let mut best: Option<(ArgMin, ExtReal)> = None;
        for (i, p) in self.cover.lambda_samples().iter().enumerate() {
            let v = self.cover.eval_member(p, x, y);
            if best.is_none_or(|(_, b)| v < b) {
                best = Some((ArgMin::Sample(i), v));
            }
        }
        if self.refine {
            if let Some(p) = self.cover.refine(x, y) {
                let v = self.cover.eval_member(&p, x, y);
                if best.is_none_or(|(_, b)| v < b) {
                    best = Some((ArgMin::Refined, v));
                }
            }
        }
        best
    }
}

impl<C: ConvexCover> Bipotential for InfEnvelope<'_, C> {
    fn dims(&self) -> (usize, usize) {
        self.cover.dims()
    }

    fn eval(&self, x: &Vector, y: &Vector) -> ExtReal {
        self.argmin(x, y).map_or(ExtReal::PosInf, |(_, v)| v)
    }
}

/// Which argument of `f(lambda, x, y)` is frozen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Frozen {
    /// `f(., x, .)`: `z1`, `z2` are points of `Y`.
    X,
    /// `f(., ., y)`: `z1`, `z2` are points of `X`.
    Y,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ImplicitConvexityCase<P> {
    pub lambda1: P,
    pub lambda2: P,
    pub z1: Vector,
    pub z2: Vector,
    /// The frozen argument.
    pub fixed: Vector,
    pub alpha: f64,
    pub frozen: Frozen,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ImplicitConvexityVerdict<P> {
    pub witness: P,
    /// `f(witness, alpha z1 + (1-alpha) z2)`.
    pub lhs: ExtReal,
    /// `alpha f(lambda1, z1) + (1-alpha) f(lambda2, z2)`.
    pub rhs: ExtReal,
    pub passed: bool,
}

/// Evaluates the implicit convexity inequality at the cover's witness.
/// An infinite right side passes vacuously.
pub fn check_implicit_convexity<C: ConvexCover>(
    cover: &C,
    case: &ImplicitConvexityCase<C::Param>,
    tol: f64,
) -> Result<ImplicitConvexityVerdict<C::Param>> {
    if !(0.0..=1.0).contains(&case.alpha) {
        return Err(Error::InvalidParameter("alpha must lie in [0, 1]"));
    }
    if !cover.contains(&case.lambda1) || !cover.contains(&case.lambda2) {
        return Err(Error::ParameterOutsideSet);
    }
    let (nx, ny) = cover.dims();
    let (zdim, fdim) = match case.frozen {
        Frozen::X => (ny, nx),
        Frozen::Y => (nx, ny),
    };
    case.z1.check_dim(zdim)?;
    case.z2.check_dim(zdim)?;
    case.fixed.check_dim(fdim)?;

    let first = (&case.lambda1, &case.z1);
    let second = (&case.lambda2, &case.z2);
    let witness = match case.frozen {
        Frozen::X => cover.witness_frozen_x(first, second, case.alpha, &case.fixed),
        Frozen::Y => cover.witness_frozen_y(first, second, case.alpha, &case.fixed),
    };
    if !cover.contains(&witness) {
        return Err(Error::ParameterOutsideSet);
    }

    let f = |p: &C::Param, z: &Vector| match case.frozen {
        Frozen::X => cover.eval_member(p, &case.fixed, z),
        Frozen::Y => cover.eval_member(p, z, &case.fixed),
    };
    let z = case.z1.lerp(case.alpha, &case.z2);
    let lhs = f(&witness, &z);
    let rhs = ExtReal::convex_combination(case.alpha, f(&case.lambda1, &case.z1), f(&case.lambda2, &case.z2))?;
    let passed = match rhs {
        ExtReal::PosInf => true,
        ExtReal::Finite(r) => lhs <= r + tol,
    };
    Ok(ImplicitConvexityVerdict { witness, lhs, rhs, passed })
}

/// Result of [`cover_covers`].
#[derive(Clone, Debug, PartialEq)]
pub struct CoverVerdict<P> {
    /// Graph points where no member is critical.
    pub uncovered: Vec<(Vector, Vector)>,
    /// Off-graph points where some member is critical, with that member.
    pub spurious: Vec<(Vector, Vector, P)>,
    pub on_graph: usize,
    pub off_graph: usize,
}

impl<P> CoverVerdict<P> {
    pub fn passed(&self) -> bool {
        self.uncovered.is_empty() && self.spurious.is_empty()
    }
}

/// Sampled check of `M = ∪ M(b_lambda)`.
///
/// Candidate parameters are the cover samples plus the cover's exact
/// minimiser at the point, if it has one: a generic graph point is critical
/// only for the member at its own parameter, which a finite grid misses.
pub fn cover_covers<C, G>(
    cover: &C,
    graph: &G,
    samples: &[(Vector, Vector)],
    tol: f64,
) -> Result<CoverVerdict<C::Param>>
where
    C: ConvexCover,
    G: LawGraph + ?Sized,
{
    let mut verdict = CoverVerdict { uncovered: Vec::new(), spurious: Vec::new(), on_graph: 0, off_graph: 0 };
    for (x, y) in samples {
        x.check_dim(cover.dims().0)?;
        y.check_dim(cover.dims().1)?;
        let d = dot(x.as_slice(), y.as_slice());
        let bound = critical_tolerance(tol, d);
        let critical = |p: &C::Param| cover.eval_member(p, x, y).finite().is_some_and(|v| v - d <= bound);
        let refined = cover.refine(x, y);
        let witness = cover.lambda_samples().iter().chain(refined.iter()).find(|p| critical(p));
        if graph.member(x, y, tol) {
            verdict.on_graph += 1;
            if witness.is_none() {
                verdict.uncovered.push((x.clone(), y.clone()));
            }
        } else {
            verdict.off_graph += 1;
            if let Some(p) = witness {
                verdict.spurious.push((x.clone(), y.clone(), p.clone()));
            }
        }
    }
    Ok(verdict)
}
