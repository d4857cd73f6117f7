//! Brute-force references: grid Fenchel conjugates and lattice scans of
//! critical sets.
//!
//! Grid suprema are lower bounds of the true supremum; callers compare them
//! with one-sided tolerances where the direction of the bias is known.

use alloc::vec::Vec;

use crate::bipotential::{is_critical, Bipotential};
use crate::convex::ConvexFn;
use crate::vector::dot;
use crate::{Error, ExtReal, Result, Vector};

/// Default cap on the number of points of a grid.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// Default threshold above which a grid conjugate counts as `+inf`.
pub const DEFAULT_INFINITY_THRESHOLD: f64 = 1e6;

/// A tensor grid over a box: `points_per_axis` equispaced nodes per axis,
/// endpoints included.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    bounds: Vec<(f64, f64)>,
    points_per_axis: usize,
    budget: u128,
}

impl GridSpec {
    pub fn new(bounds: Vec<(f64, f64)>, points_per_axis: usize) -> Result<Self> {
        Self::with_budget(bounds, points_per_axis, DEFAULT_BUDGET)
    }

    pub fn with_budget(bounds: Vec<(f64, f64)>, points_per_axis: usize, budget: u128) -> Result<Self> {
        if bounds.is_empty() {
            return Err(Error::InvalidGrid("at least one axis is required"));
        }
        if points_per_axis < 2 {
            return Err(Error::InvalidGrid("at least two points per axis are required"));
        }
        if bounds.iter().any(|&(lo, hi)| !(lo.is_finite() && hi.is_finite() && lo < hi)) {
            return Err(Error::InvalidGrid("every axis needs finite min < max"));
        }
        let spec = GridSpec { bounds, points_per_axis, budget };
        let points = spec.point_count();
        if points > budget {
            return Err(Error::BudgetExceeded { points, budget });
        }
        Ok(spec)
    }

    /// The cube `[-half_width, half_width]^dim`.
    pub fn cube(dim: usize, half_width: f64, points_per_axis: usize) -> Result<Self> {
        Self::new(alloc::vec![(-half_width, half_width); dim], points_per_axis)
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn point_count(&self) -> u128 {
        (self.points_per_axis as u128).saturating_pow(self.bounds.len() as u32)
    }

    /// Node `i` of an axis.
    pub fn node(&self, axis: usize, i: usize) -> f64 {
        let (lo, hi) = self.bounds[axis];
        let last = self.points_per_axis - 1;
        if i == last {
            hi
        } else {
            lo + (hi - lo) * i as f64 / last as f64
        }
    }

    /// Visits every grid point in lexicographic order (last axis fastest).
    pub fn for_each_point(&self, mut visit: impl FnMut(&[f64])) {
        let n = self.dim();
        let mut idx = alloc::vec![0usize; n];
        let mut point: Vec<f64> = (0..n).map(|a| self.node(a, 0)).collect();
        loop {
            visit(&point);
            let mut axis = n;
            loop {
                if axis == 0 {
                    return;
                }
                axis -= 1;
                idx[axis] += 1;
                if idx[axis] < self.points_per_axis {
                    point[axis] = self.node(axis, idx[axis]);
                    break;
                }
                idx[axis] = 0;
                point[axis] = self.node(axis, 0);
            }
        }
    }
}

/// `max_x <x, y> - phi(x)` over the grid: a lower bound of `phi*(y)`.
pub fn grid_conjugate<F: ConvexFn + ?Sized>(phi: &F, grid: &GridSpec, y: &Vector) -> Result<f64> {
    if grid.point_count() > grid.budget {
        return Err(Error::BudgetExceeded { points: grid.point_count(), budget: grid.budget });
    }
    y.check_dim(phi.dim())?;
    if grid.dim() != phi.dim() {
        return Err(Error::DimensionMismatch { expected: phi.dim(), found: grid.dim() });
    }
    let mut best = f64::NEG_INFINITY;
    let mut x = Vector::zeros(grid.dim());
    grid.for_each_point(|p| {
        x.as_mut_slice().copy_from_slice(p);
        if let ExtReal::Finite(v) = phi.eval(&x) {
            best = best.max(dot(p, y.as_slice()) - v);
        }
    });
    if best == f64::NEG_INFINITY {
        Err(Error::NoFiniteValue)
    } else {
        Ok(best)
    }
}

/// All pairs of a grid on `X x Y` (first `dim X` axes for `x`) at which
/// `b` is critical within `tol`.
pub fn lattice_critical_scan<B: Bipotential + ?Sized>(
    b: &B,
    grid: &GridSpec,
    tol: f64,
) -> Result<Vec<(Vector, Vector)>> {
    let (nx, ny) = b.dims();
    if grid.dim() != nx + ny {
        return Err(Error::DimensionMismatch { expected: nx + ny, found: grid.dim() });
    }
    scan_lattice(grid, |p| (Vector::new(p[..nx].to_vec()), Vector::new(p[nx..].to_vec())), b, tol)
}

/// Like [`lattice_critical_scan`] over an arbitrary embedding of the grid
/// into `X x Y`, e.g. a one-dimensional sublattice `x = (s, 0)`, `y = (t, 0)`.
pub fn scan_lattice<B, E>(grid: &GridSpec, embed: E, b: &B, tol: f64) -> Result<Vec<(Vector, Vector)>>
where
    B: Bipotential + ?Sized,
    E: Fn(&[f64]) -> (Result<Vector>, Result<Vector>),
{
    if grid.point_count() > grid.budget {
        return Err(Error::BudgetExceeded { points: grid.point_count(), budget: grid.budget });
    }
    let mut out = Vec::new();
    let mut err = None;
    grid.for_each_point(|p| {
        if err.is_some() {
            return;
        }
        let pair = embed(p);
        match (pair.0, pair.1) {
            (Ok(x), Ok(y)) => match is_critical(b, &x, &y, tol) {
                Ok(true) => out.push((x, y)),
                Ok(false) => {}
                Err(e) => err = Some(e),
            },
            (Err(e), _) | (_, Err(e)) => err = Some(e),
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// A probe where the grid conjugate disagrees with the candidate conjugate.
#[derive(Clone, Debug, PartialEq)]
pub struct ConjugateMismatch {
    pub y: Vector,
    pub grid_value: f64,
    pub claimed: ExtReal,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConjugateVerdict {
    pub mismatches: Vec<ConjugateMismatch>,
    pub probes: usize,
    /// Largest `|grid - claimed|` over finite claims.
    pub max_error: f64,
}

impl ConjugateVerdict {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares `phi_star` with the grid conjugate of `phi` at every probe:
/// finite claims must agree within `tol`, infinite claims must see the grid
/// value exceed `infinity_threshold`.
pub fn conjugate_pair_check<F, G>(
    phi: &F,
    phi_star: &G,
    grid: &GridSpec,
    probes: &[Vector],
    tol: f64,
    infinity_threshold: f64,
) -> Result<ConjugateVerdict>
where
    F: ConvexFn + ?Sized,
    G: ConvexFn + ?Sized,
{
    let mut verdict = ConjugateVerdict { mismatches: Vec::new(), probes: probes.len(), max_error: 0.0 };
    for y in probes {
        let grid_value = grid_conjugate(phi, grid, y)?;
        let claimed = phi_star.eval(y);
        let ok = match claimed {
            ExtReal::Finite(c) => {
                let e = (grid_value - c).abs();
                verdict.max_error = verdict.max_error.max(e);
                e <= tol
            }
            ExtReal::PosInf => grid_value > infinity_threshold,
        };
        if !ok {
            verdict.mismatches.push(ConjugateMismatch { y: y.clone(), grid_value, claimed });
        }
    }
    Ok(verdict)
}
