//! The bipotential abstraction, its two generic constructions and the
//! sampled axiom suite.
//!
//! A bipotential `b: X x Y -> R ∪ {+inf}` must be
//!
//! * (a) convex and lower semicontinuous in each argument,
//! * (b) bounded below by the duality product: `b(x, y) >= <x, y>`,
//! * (c) such that `y ∈ ∂b(., y)(x)`, `x ∈ ∂b(x, .)(y)` and
//!   `b(x, y) = <x, y>` are equivalent.
//!
//! The law it represents is the critical set `{(x, y) : b(x, y) = <x, y>}`.

use alloc::vec::Vec;

use crate::convex::{check_segment_convexity, check_subgradient, ConvexFn};
use crate::vector::dot;
use crate::{Error, ExtReal, Result, Vector};

pub trait Bipotential {
    /// `(dim X, dim Y)`.
    fn dims(&self) -> (usize, usize);

    /// Evaluates `b(x, y)`. Dimensions are the caller's responsibility;
    /// use [`gap`] or [`is_critical`] for checked access.
    fn eval(&self, x: &Vector, y: &Vector) -> ExtReal;
}

impl<B: Bipotential + ?Sized> Bipotential for &B {
    fn dims(&self) -> (usize, usize) {
        (**self).dims()
    }

    fn eval(&self, x: &Vector, y: &Vector) -> ExtReal {
        (**self).eval(x, y)
    }
}

/// A constitutive law given as a membership predicate on `X x Y`.
pub trait LawGraph {
    fn dims(&self) -> (usize, usize);

    /// Whether `(x, y)` belongs to the graph, comparisons within `tol`.
    fn member(&self, x: &Vector, y: &Vector, tol: f64) -> bool;

    fn description(&self) -> &str;
}

impl<G: LawGraph + ?Sized> LawGraph for &G {
    fn dims(&self) -> (usize, usize) {
        (**self).dims()
    }

    fn member(&self, x: &Vector, y: &Vector, tol: f64) -> bool {
        (**self).member(x, y, tol)
    }

    fn description(&self) -> &str {
        (**self).description()
    }
}

fn check_dims(dims: (usize, usize), x: &Vector, y: &Vector) -> Result<()> {
    x.check_dim(dims.0)?;
    y.check_dim(dims.1)
}

/// `b(x, y) - <x, y>`.
pub fn gap<B: Bipotential + ?Sized>(b: &B, x: &Vector, y: &Vector) -> Result<ExtReal> {
    check_dims(b.dims(), x, y)?;
    Ok(b.eval(x, y) - dot(x.as_slice(), y.as_slice()))
}

/// Tolerance used for criticality at a point with duality product `d`:
/// absolute below `|d| = 1`, relative above.
pub fn critical_tolerance(tol: f64, d: f64) -> f64 {
    tol * d.abs().max(1.0)
}

/// `gap(b, x, y) <= tol * max(1, |<x, y>|)`.
///
/// A strongly negative gap is an axiom violation, not criticality, but it
/// is not distinguished here; [`verify_axioms`] reports those.
pub fn is_critical<B: Bipotential + ?Sized>(b: &B, x: &Vector, y: &Vector, tol: f64) -> Result<bool> {
    check_dims(b.dims(), x, y)?;
    let d = dot(x.as_slice(), y.as_slice());
    Ok(match b.eval(x, y) {
        ExtReal::Finite(v) => v - d <= critical_tolerance(tol, d),
        ExtReal::PosInf => false,
    })
}

/// `b(x, y) = phi(x) + phi*(y)`.
#[derive(Clone, Copy, Debug)]
pub struct Separable<F, G> {
    pub phi: F,
    pub phi_star: G,
}

/// Builds the separable bipotential of a Fenchel pair. That `phi_star` is
/// the conjugate of `phi` is the caller's responsibility (see
/// [`crate::oracles::conjugate_pair_check`]).
pub fn separable<F: ConvexFn, G: ConvexFn>(phi: F, phi_star: G) -> Separable<F, G> {
    Separable { phi, phi_star }
}

impl<F: ConvexFn, G: ConvexFn> Bipotential for Separable<F, G> {
    fn dims(&self) -> (usize, usize) {
        (self.phi.dim(), self.phi_star.dim())
    }

    fn eval(&self, x: &Vector, y: &Vector) -> ExtReal {
        self.phi.eval(x) + self.phi_star.eval(y)
    }
}

/// `b_inf(x, y) = <x, y> + chi_M(x, y)`: critical exactly on `M`.
#[derive(Clone, Copy, Debug)]
pub struct BInfinity<G> {
    pub graph: G,
    /// Tolerance handed to the membership predicate.
    pub member_tol: f64,
}

pub fn b_infinity<G: LawGraph>(graph: G, member_tol: f64) -> BInfinity<G> {
    BInfinity { graph, member_tol }
}

impl<G: LawGraph> Bipotential for BInfinity<G> {
    fn dims(&self) -> (usize, usize) {
        self.graph.dims()
    }

    fn eval(&self, x: &Vector, y: &Vector) -> ExtReal {
        if self.graph.member(x, y, self.member_tol) {
            ExtReal::Finite(dot(x.as_slice(), y.as_slice()))
        } else {
            ExtReal::PosInf
        }
    }
}

/// Closure adapter.
#[derive(Clone, Copy)]
pub struct FnBipotential<F> {
    dims: (usize, usize),
    f: F,
}

impl<F: Fn(&Vector, &Vector) -> ExtReal> FnBipotential<F> {
    pub fn new(dims: (usize, usize), f: F) -> Self {
        FnBipotential { dims, f }
    }
}

impl<F: Fn(&Vector, &Vector) -> ExtReal> Bipotential for FnBipotential<F> {
    fn dims(&self) -> (usize, usize) {
        self.dims
    }

    fn eval(&self, x: &Vector, y: &Vector) -> ExtReal {
        (self.f)(x, y)
    }
}

/// `z -> b(z, y)`.
pub struct XSection<'a, B: ?Sized> {
    pub b: &'a B,
    pub y: &'a Vector,
}

impl<B: Bipotential + ?Sized> ConvexFn for XSection<'_, B> {
    fn dim(&self) -> usize {
        self.b.dims().0
    }

    fn eval(&self, x: &Vector) -> ExtReal {
        self.b.eval(x, self.y)
    }
}

/// `w -> b(x, w)`.
pub struct YSection<'a, B: ?Sized> {
    pub b: &'a B,
    pub x: &'a Vector,
}

impl<B: Bipotential + ?Sized> ConvexFn for YSection<'_, B> {
    fn dim(&self) -> usize {
        self.b.dims().1
    }

    fn eval(&self, y: &Vector) -> ExtReal {
        self.b.eval(self.x, y)
    }
}

/// Produces probe points around a base point for subgradient checks.
pub trait ProbeSource {
    fn probes_around(&self, center: &Vector) -> Vec<Vector>;
}

/// Probes `center + s * d` for every direction `d` and step `s`, plus the
/// origin, `2 * center` and `center / 2`.
///
/// Directions of several dimensions may be mixed; only those matching the
/// center's dimension are used.
#[derive(Clone, Debug, Default)]
pub struct ProbeSet {
    directions: Vec<Vector>,
    steps: Vec<f64>,
}

impl ProbeSet {
    pub fn new(directions: Vec<Vector>, steps: Vec<f64>) -> Result<Self> {
        if steps.iter().any(|s| !s.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(ProbeSet { directions, steps })
    }
}

impl ProbeSource for ProbeSet {
    fn probes_around(&self, center: &Vector) -> Vec<Vector> {
        let n = center.dim();
        let mut out = alloc::vec![Vector::zeros(n), center.scaled(2.0), center.scaled(0.5)];
        for d in self.directions.iter().filter(|d| d.dim() == n) {
            for &s in &self.steps {
                out.push(center.add_scaled(s, d));
            }
        }
        out
    }
}

/// Which argument of `b` a check varies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Argument {
    X,
    Y,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InequalityViolation {
    pub x: Vector,
    pub y: Vector,
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvexityFailure {
    pub varied: Argument,
    /// The frozen argument.
    pub fixed: Vector,
    pub from: Vector,
    pub to: Vector,
    pub t: f64,
    pub excess: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceFailure {
    pub x: Vector,
    pub y: Vector,
    /// `X`: `y ∉ ∂b(., y)(x)`; `Y`: `x ∉ ∂b(x, .)(y)`.
    pub side: Argument,
    pub excess: f64,
}

/// Result of [`verify_axioms`]. Entries are ordered by sample index.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AxiomReport {
    pub inequality_violations: Vec<InequalityViolation>,
    pub convexity_failures: Vec<ConvexityFailure>,
    pub equivalence_failures: Vec<EquivalenceFailure>,
    pub samples_used: usize,
    /// Pairs found critical, on which (c) was exercised.
    pub critical_pairs: usize,
    /// Smallest finite gap seen.
    pub min_gap: f64,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.inequality_violations.is_empty()
            && self.convexity_failures.is_empty()
            && self.equivalence_failures.is_empty()
    }
}

/// Interior points per segment in the convexity part of [`verify_axioms`].
pub const SEGMENT_SAMPLES: usize = 3;

/// Sampled check of the three bipotential axioms.
///
/// * (b) `gap >= -tol` on every pair;
/// * (a) convexity of `b(., y_i)` on `[x_i, x_{i+1}]` and of `b(x_i, .)` on
///   `[y_i, y_{i+1}]` (cyclically);
/// * (c) at every critical pair, both subgradient inclusions against the
///   probes from `probes`.
pub fn verify_axioms<B, P>(b: &B, pairs: &[(Vector, Vector)], probes: &P, tol: f64) -> Result<AxiomReport>
where
    B: Bipotential + ?Sized,
    P: ProbeSource + ?Sized,
{
    if pairs.is_empty() {
        return Err(Error::NoSamples);
    }
    let mut report = AxiomReport { samples_used: pairs.len(), min_gap: f64::INFINITY, ..Default::default() };

    for (x, y) in pairs {
        if let ExtReal::Finite(g) = gap(b, x, y)? {
            report.min_gap = report.min_gap.min(g);
            if g < -tol {
                report.inequality_violations.push(InequalityViolation { x: x.clone(), y: y.clone(), gap: g });
            }
        }
    }

    if pairs.len() >= 2 {
        for (i, (x1, y1)) in pairs.iter().enumerate() {
            let (x2, y2) = &pairs[(i + 1) % pairs.len()];
            let xs = XSection { b, y: y1 };
            if let Some(v) = check_segment_convexity(&xs, x1, x2, SEGMENT_SAMPLES, tol)?.violation {
                report.convexity_failures.push(ConvexityFailure {
                    varied: Argument::X,
                    fixed: y1.clone(),
                    from: x1.clone(),
                    to: x2.clone(),
                    t: v.t,
                    excess: v.excess,
                });
            }
            let ys = YSection { b, x: x1 };
            if let Some(v) = check_segment_convexity(&ys, y1, y2, SEGMENT_SAMPLES, tol)?.violation {
                report.convexity_failures.push(ConvexityFailure {
                    varied: Argument::Y,
                    fixed: x1.clone(),
                    from: y1.clone(),
                    to: y2.clone(),
                    t: v.t,
                    excess: v.excess,
                });
            }
        }
    }

    for (x, y) in pairs {
        if !is_critical(b, x, y, tol)? {
            continue;
        }
        report.critical_pairs += 1;
        let xs = XSection { b, y };
        let v = check_subgradient(&xs, x, y, &probes.probes_around(x), tol)?;
        if let Some(w) = v.violation {
            report.equivalence_failures.push(EquivalenceFailure {
                x: x.clone(),
                y: y.clone(),
                side: Argument::X,
                excess: w.excess,
            });
        }
        let ys = YSection { b, x };
        let v = check_subgradient(&ys, y, x, &probes.probes_around(y), tol)?;
        if let Some(w) = v.violation {
            report.equivalence_failures.push(EquivalenceFailure {
                x: x.clone(),
                y: y.clone(),
                side: Argument::Y,
                excess: w.excess,
            });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::{BallIndicator, Norm, SquaredNorm};
    use crate::laws::{ElasticBipotential, ElasticGraph, ElasticParams};
    use crate::DEFAULT_TOL;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn v(a: f64, b: f64) -> Vector {
        Vector::from([a, b])
    }

    fn probes(seed: u64) -> ProbeSet {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dirs = (0..16)
            .map(|_| {
                let th: f64 = rng.gen_range(0.0..core::f64::consts::TAU);
                v(libm::cos(th), libm::sin(th))
            })
            .collect();
        ProbeSet::new(dirs, vec![1.0, 0.1, 1e-3]).unwrap()
    }

    fn random_pairs(seed: u64, n: usize) -> Vec<(Vector, Vector)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut r = || rng.gen_range(-2.0..2.0);
        (0..n).map(|_| (v(r(), r()), v(r(), r()))).collect()
    }

    #[test]
    fn separable_self_conjugate_quadratic() {
        let half = SquaredNorm { dim: 2, weight: 0.5 };
        let b = separable(half, half);
        let (x, y) = (v(1.0, 0.0), v(1.0, 0.0));
        assert_eq!(b.eval(&x, &y), 1.0);
        assert!(is_critical(&b, &x, &y, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn separable_norm_and_ball() {
        let b = separable(Norm { dim: 2, weight: 1.0 }, BallIndicator { dim: 2, radius: 1.0 });
        assert_eq!(b.eval(&v(1.0, 0.0), &v(1.0, 0.0)), 1.0);
        assert!(is_critical(&b, &v(1.0, 0.0), &v(1.0, 0.0), DEFAULT_TOL).unwrap());
        assert_eq!(b.eval(&v(1.0, 0.0), &v(2.0, 0.0)), ExtReal::PosInf);
        assert!(!is_critical(&b, &v(1.0, 0.0), &v(2.0, 0.0), DEFAULT_TOL).unwrap());
    }

    #[test]
    fn b_infinity_is_the_indicator_of_its_graph() {
        let p = ElasticParams::new(1.0, 0.5, 2).unwrap();
        let b = b_infinity(ElasticGraph(p), DEFAULT_TOL);
        assert_eq!(b.eval(&v(0.0, 0.0), &v(0.25, 0.0)), 0.0);
        assert_eq!(b.eval(&v(1.0, 1.0), &v(1.2, 0.9)), 2.1);
        assert_eq!(b.eval(&v(0.0, 0.0), &v(2.0, 0.0)), ExtReal::PosInf);
        assert_eq!(gap(&b, &v(0.0, 0.0), &v(2.0, 0.0)).unwrap(), ExtReal::PosInf);
        for (x, y) in random_pairs(3, 2000) {
            let m = ElasticGraph(p).member(&x, &y, DEFAULT_TOL);
            assert_eq!(is_critical(&b, &x, &y, DEFAULT_TOL).unwrap(), m);
        }
    }

    #[test]
    fn relative_criticality_tolerance() {
        assert_eq!(critical_tolerance(1e-9, 0.5), 1e-9);
        assert!((critical_tolerance(1e-9, -100.0) - 1e-7).abs() < 1e-20);
        let b = FnBipotential::new((1, 1), |x: &Vector, y: &Vector| ExtReal::Finite(x[0] * y[0] + 5e-8));
        let big = Vector::from([100.0]);
        assert!(is_critical(&b, &big, &big, DEFAULT_TOL).unwrap());
        let small = Vector::from([0.1]);
        assert!(!is_critical(&b, &small, &small, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn axioms_hold_for_blurred_elasticity() {
        let b = ElasticBipotential(ElasticParams::new(1.0, 0.5, 2).unwrap());
        let mut pairs = random_pairs(11, 1000);
        // add on-graph pairs so that (c) is exercised
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..100 {
            let x = v(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let a = v(rng.gen_range(-0.35..0.35), rng.gen_range(-0.35..0.35));
            pairs.push((x.clone(), x.add_scaled(1.0, &a)));
        }
        let report = verify_axioms(&b, &pairs, &probes(5), DEFAULT_TOL).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.samples_used, 1100);
        assert!(report.critical_pairs >= 100);
    }

    #[test]
    fn duality_product_is_a_degenerate_bipotential() {
        let b = FnBipotential::new((2, 2), |x: &Vector, y: &Vector| ExtReal::Finite(dot(x.as_slice(), y.as_slice())));
        let pairs = random_pairs(21, 200);
        let report = verify_axioms(&b, &pairs, &probes(1), DEFAULT_TOL).unwrap();
        assert!(report.passed());
        assert_eq!(report.critical_pairs, 200);
    }

    #[test]
    fn broken_bipotential_violates_the_inequality() {
        let b = FnBipotential::new((2, 2), |x: &Vector, y: &Vector| {
            ExtReal::Finite(dot(x.as_slice(), y.as_slice()) - x.norm())
        });
        let pairs = random_pairs(8, 50);
        let report = verify_axioms(&b, &pairs, &probes(1), DEFAULT_TOL).unwrap();
        assert!(!report.passed());
        assert_eq!(report.inequality_violations.len(), 50);
        let w = &report.inequality_violations[0];
        assert!(!w.x.is_zero());
        assert!((w.gap + w.x.norm()).abs() < 1e-12);
    }

    #[test]
    fn concave_section_is_reported() {
        let b = FnBipotential::new((2, 2), |x: &Vector, y: &Vector| {
            ExtReal::Finite(dot(x.as_slice(), y.as_slice()) + 10.0 - x.norm_sq())
        });
        let report = verify_axioms(&b, &random_pairs(2, 20), &probes(1), DEFAULT_TOL).unwrap();
        assert!(report.convexity_failures.iter().any(|f| f.varied == Argument::X));
        assert!(report.convexity_failures.iter().all(|f| f.varied == Argument::X));
    }

    #[test]
    fn empty_sampler_is_an_error() {
        let b = ElasticBipotential(ElasticParams::new(1.0, 0.5, 2).unwrap());
        assert_eq!(verify_axioms(&b, &[], &probes(1), DEFAULT_TOL), Err(Error::NoSamples));
    }

    #[test]
    fn probe_set_shape() {
        let p = probes(0);
        let around = p.probes_around(&v(1.0, 2.0));
        assert_eq!(around.len(), 3 + 16 * 3);
        assert_eq!(around[0], v(0.0, 0.0));
        assert_eq!(around[1], v(2.0, 4.0));
        // directions of another dimension are skipped
        assert_eq!(p.probes_around(&Vector::zeros(3)).len(), 3);
    }
}
