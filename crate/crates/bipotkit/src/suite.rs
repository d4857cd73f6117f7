//! Verification suites behind `bipotkit verify`.
//!
//! Every check draws from its own sampler seeded from the configured seed,
//! so a check reports the same numbers whether it runs alone or in `all`.

use bipotkit_core::bipotential::{b_infinity, is_critical, verify_axioms, Bipotential, ProbeSet, ProbeSource};
use bipotkit_core::convex::{check_subgradient, indicator, BallIndicator, ConvexFn, FnConvex, Norm};
use bipotkit_core::cover::{
    check_implicit_convexity, cover_covers, inf_envelope, ConvexCover, Frozen, ImplicitConvexityCase,
};
use bipotkit_core::laws::elastic::{POLAR_ANGLES, POLAR_RADII};
use bipotkit_core::laws::*;
use bipotkit_core::oracles::{conjugate_pair_check, scan_lattice, GridSpec};
use bipotkit_core::{ExtReal, Vector};

use crate::config::LawConfig;
use crate::error::Result;
use crate::law::Law;
use crate::report::{Check, Report};
use crate::sampling::{Pair, Sampler};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Axioms,
    Cover,
    Oracle,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Axioms => "axioms",
            Suite::Cover => "cover",
            Suite::Oracle => "oracle",
            Suite::All => "all",
        }
    }
}

/// Steps of the subgradient probes `x + s d`.
pub const PROBE_STEPS: [f64; 4] = [1.0, 0.1, 0.01, 0.001];
/// Directions per probe set: with [`PROBE_STEPS`] and the three fixed
/// probes this gives 103 probes per point.
pub const PROBE_DIRECTIONS: usize = 25;
/// Points per subnormality check.
pub const SUBNORMAL_POINTS: usize = 100;
/// Probes per conjugate check.
pub const CONJUGATE_PROBES: usize = 100;
pub const CONJUGATE_TOL: f64 = 1e-3;
pub const REFINED_TOL: f64 = 1e-10;

pub fn run(cfg: &LawConfig, suite: Suite) -> Result<Report> {
    let mut checks = Vec::new();
    if matches!(suite, Suite::Axioms | Suite::All) {
        checks.extend(axioms(cfg)?);
    }
    if matches!(suite, Suite::Cover | Suite::All) {
        checks.extend(cover(cfg)?);
    }
    if matches!(suite, Suite::Oracle | Suite::All) {
        checks.extend(oracle(cfg)?);
    }
    Ok(Report::new(cfg.law.name(), suite.name(), cfg.seed, checks))
}

fn sampler(cfg: &LawConfig, stream: u64) -> Sampler {
    Sampler::new(cfg.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(stream), cfg.half_width)
}

fn probe_set(s: &mut Sampler, dim: usize) -> Result<ProbeSet> {
    Ok(ProbeSet::new(s.directions(dim, PROBE_DIRECTIONS), PROBE_STEPS.to_vec())?)
}

pub fn axioms(cfg: &LawConfig) -> Result<Vec<Check>> {
    let law = &cfg.law;
    let b = law.bipotential();
    let n = cfg.samples;
    let mut out = Vec::new();

    let mut s = sampler(cfg, 1);
    let mut pairs: Vec<Pair> = (0..n / 2).map(|_| s.uniform_pair(law)).collect();
    pairs.extend((0..n - n / 2).map(|_| s.on_graph(law)));
    let probes = probe_set(&mut s, law.dim())?;
    let r = verify_axioms(&*b, &pairs, &probes, cfg.tol)?;
    let worst_excess = |it: &mut dyn Iterator<Item = f64>| it.fold(0.0, f64::max);
    out.push(
        Check::new("inequality", r.samples_used, r.inequality_violations.len())
            .worst((-r.min_gap).max(0.0))
            .tolerance(cfg.tol),
    );
    out.push(
        Check::new("section_convexity", r.samples_used, r.convexity_failures.len())
            .worst(worst_excess(&mut r.convexity_failures.iter().map(|f| f.excess)))
            .tolerance(cfg.tol),
    );
    out.push(
        Check::new("subgradient_equivalence", r.critical_pairs, r.equivalence_failures.len())
            .worst(worst_excess(&mut r.equivalence_failures.iter().map(|f| f.excess)))
            .tolerance(cfg.tol),
    );

    let mut s = sampler(cfg, 2);
    let extra = (n / 10).max(1);
    let mut pairs: Vec<Pair> = (0..n).map(|_| s.uniform_pair(law)).collect();
    pairs.extend((0..extra).map(|_| s.boundary(law)));
    pairs.extend((0..extra).map(|_| s.on_graph(law)));
    let mut disagreements = 0;
    for (x, y) in &pairs {
        if is_critical(&*b, x, y, cfg.tol)? != law.member(x, y, cfg.tol) {
            disagreements += 1;
        }
    }
    out.push(Check::new("criticality_membership", pairs.len(), disagreements).tolerance(cfg.tol));

    let (on, off) = subnormality(cfg, 3)?;
    out.push(on);
    out.push(off);
    Ok(out)
}

/// `y ∈ ∂b(., y)(x)` holds on graph points and fails off the graph.
pub fn subnormality(cfg: &LawConfig, stream: u64) -> Result<(Check, Check)> {
    let law = &cfg.law;
    let b = law.bipotential();
    let mut s = sampler(cfg, stream);
    let probes = probe_set(&mut s, law.dim())?;
    let section = |y: &Vector| {
        let b = &b;
        let y = y.clone();
        FnConvex::new(law.dim(), move |z: &Vector| b.eval(z, &y))
    };
    let (mut on_fail, mut on_worst) = (0, 0.0f64);
    for _ in 0..SUBNORMAL_POINTS {
        let (x, y) = s.on_graph(law);
        let v = check_subgradient(&section(&y), &x, &y, &probes.probes_around(&x), cfg.tol)?;
        if let Some(viol) = v.violation {
            on_fail += 1;
            on_worst = on_worst.max(viol.excess);
        }
    }
    let (mut off_fail, mut off_least) = (0, f64::INFINITY);
    for _ in 0..SUBNORMAL_POINTS {
        let (x, y) = s.off_graph(law);
        match check_subgradient(&section(&y), &x, &y, &probes.probes_around(&x), cfg.tol)?.violation {
            Some(viol) => off_least = off_least.min(viol.excess),
            None => off_fail += 1,
        }
    }
    Ok((
        Check::new("subnormality_on_graph", SUBNORMAL_POINTS, on_fail).worst(on_worst).tolerance(cfg.tol),
        Check::new("subnormality_off_graph", SUBNORMAL_POINTS, off_fail)
            .worst(off_least)
            .tolerance(cfg.tol)
            .note("worst is the smallest detected violation"),
    ))
}

pub fn cover(cfg: &LawConfig) -> Result<Vec<Check>> {
    let law = cfg.law;
    match law {
        Law::Elastic(p) => {
            let c = ElasticCover::new(p);
            cover_checks(cfg, &c, |s, f| s.elastic_case(&law, f), |x, y| elastic_grid_bound(&c, x, y))
        }
        Law::Plastic(p) => {
            let c = PlasticCover::new(p);
            let h = c.step();
            cover_checks(cfg, &c, |s, f| s.interval_case(&law, f), |x, _| h * x.norm())
        }
        Law::Coulomb(_) | Law::Friction(_) => {
            let c = FrictionCover::new(law.friction_params().expect("friction law"));
            let h = c.step();
            cover_checks(
                cfg,
                &c,
                |s, f| s.interval_case(&law, f),
                |x, y| {
                    let (x, y) = (split(x), split(y));
                    h * y.normal.max(0.0) * x.tangential_norm()
                },
            )
        }
    }
}

fn split(v: &Vector) -> ContactVec {
    ContactVec::from_vector(v).expect("friction vectors are three-dimensional")
}

/// A priori error of the sampled elastic envelope: with every point of
/// `B(epsilon)` within `d` of a sample,
/// `min_k b_ak - b <= ((||y - lambda x|| - epsilon)+ d + d^2 / 2) / lambda`.
pub fn elastic_grid_bound(cover: &ElasticCover, x: &Vector, y: &Vector) -> f64 {
    let p = cover.params();
    let d = elastic_cover_spacing(p);
    let r = y.add_scaled(-p.lambda(), x).norm();
    ((r - p.epsilon()).max(0.0) * d + d * d / 2.0) / p.lambda()
}

/// Covering radius of the default elastic parameter grid.
pub fn elastic_cover_spacing(p: &ElasticParams) -> f64 {
    let eps = p.epsilon();
    if p.dim() == 2 {
        eps * (std::f64::consts::PI / POLAR_ANGLES as f64 + 1.0 / POLAR_RADII as f64)
    } else {
        // 33 points per axis: half the cell diagonal
        eps * 2.0 / 32.0 * (p.dim() as f64).sqrt() / 2.0
    }
}

fn cover_checks<C>(
    cfg: &LawConfig,
    c: &C,
    mut case: impl FnMut(&mut Sampler, Frozen) -> ImplicitConvexityCase<C::Param>,
    bound: impl Fn(&Vector, &Vector) -> f64,
) -> Result<Vec<Check>>
where
    C: ConvexCover,
{
    let law = &cfg.law;
    let n = cfg.samples;
    let mut out = Vec::new();

    for (frozen, name, stream) in
        [(Frozen::X, "implicit_convexity_frozen_x", 4), (Frozen::Y, "implicit_convexity_frozen_y", 5)]
    {
        let mut s = sampler(cfg, stream);
        let (mut failures, mut worst) = (0, f64::NEG_INFINITY);
        for _ in 0..n {
            let v = check_implicit_convexity(c, &case(&mut s, frozen), cfg.tol)?;
            if let (ExtReal::Finite(l), ExtReal::Finite(r)) = (v.lhs, v.rhs) {
                worst = worst.max(l - r);
            }
            if !v.passed {
                failures += 1;
            }
        }
        out.push(
            Check::new(name, n, failures)
                .worst(if worst.is_finite() { worst } else { 0.0 })
                .tolerance(cfg.tol)
                .note("worst is the largest lhs - rhs"),
        );
    }

    let mut s = sampler(cfg, 6);
    let mut samples: Vec<Pair> = (0..n / 2).map(|_| s.on_graph(law)).collect();
    samples.extend((0..n - n / 2).map(|_| s.off_graph(law)));
    let graph = law.graph();
    let v = cover_covers(c, &*graph, &samples, cfg.tol)?;
    out.push(
        Check::new("cover_covers", samples.len(), v.uncovered.len() + v.spurious.len())
            .tolerance(cfg.tol)
            .note(format!("{} on graph, {} off graph", v.on_graph, v.off_graph)),
    );

    let b = law.bipotential();
    let grid_env = inf_envelope(c);
    let refined_env = inf_envelope(c).refined();
    let mut s = sampler(cfg, 7);
    let (mut grid_fail, mut grid_worst) = (0, 0.0f64);
    let (mut ref_fail, mut ref_worst) = (0, 0.0f64);
    for _ in 0..n {
        let (x, y) = s.uniform_pair(law);
        let exact = b.eval(&x, &y);
        for (env, fail, worst, tol) in [
            (&grid_env, &mut grid_fail, &mut grid_worst, bound(&x, &y) + 1e-12),
            (&refined_env, &mut ref_fail, &mut ref_worst, REFINED_TOL),
        ] {
            match (env.eval(&x, &y), exact) {
                (ExtReal::PosInf, ExtReal::PosInf) => {}
                (ExtReal::Finite(e), ExtReal::Finite(b)) => {
                    let err = (e - b).abs();
                    *worst = worst.max(err);
                    if err > tol {
                        *fail += 1;
                    }
                }
                _ => {
                    *worst = f64::INFINITY;
                    *fail += 1;
                }
            }
        }
    }
    out.push(
        Check::new("envelope_grid", n, grid_fail)
            .worst(grid_worst)
            .note("per-sample tolerance is the a priori grid error bound"),
    );
    out.push(Check::new("envelope_refined", n, ref_fail).worst(ref_worst).tolerance(REFINED_TOL));
    Ok(out)
}

pub fn oracle(cfg: &LawConfig) -> Result<Vec<Check>> {
    let mut out = vec![conjugates(cfg)?];
    out.extend(lattice_scans(cfg)?);
    Ok(out)
}

/// Grid points per conjugate evaluation above which the resolution is
/// lowered (three-dimensional friction grids).
pub const CONJUGATE_POINT_CAP: u128 = 250_000;

/// Conjugate grid with the configured resolution, lowered to the largest
/// odd count within [`CONJUGATE_POINT_CAP`] so the origin stays a node.
fn conjugate_grid(cfg: &LawConfig, dim: usize) -> Result<GridSpec> {
    let mut ppa = cfg.conjugate_points;
    if (ppa as u128).saturating_pow(dim as u32) > CONJUGATE_POINT_CAP {
        ppa = (CONJUGATE_POINT_CAP as f64).powf(1.0 / dim as f64) as usize;
        if ppa.is_multiple_of(2) {
            ppa -= 1;
        }
    }
    Ok(GridSpec::cube(dim, cfg.conjugate_half_width, ppa)?)
}

/// Distance of the exterior conjugate probes from the finite region.
pub const EXTERIOR_MARGIN: f64 = 0.5;

/// Default divergence threshold: a grid on `[-R, R]^n` sees the conjugate
/// of a positively homogeneous function reach about `R * margin` at an
/// exterior probe; half of it is taken.
fn infinity_threshold(cfg: &LawConfig) -> f64 {
    cfg.infinity_threshold.unwrap_or(cfg.conjugate_half_width * EXTERIOR_MARGIN / 2.0)
}

/// Fenchel pairs underlying the law: `(phi_a, phi_a*)` for elasticity,
/// `(eta ||.||, chi_B(eta))` for plasticity, `(chi_K_mu, chi_K_mu*)` for
/// friction.
pub fn conjugates(cfg: &LawConfig) -> Result<Check> {
    let law = &cfg.law;
    let dim = law.dim();
    let grid = conjugate_grid(cfg, dim)?;
    let threshold = infinity_threshold(cfg);
    let mut s = sampler(cfg, 8);
    let (mut probes_used, mut failures, mut worst) = (0, 0, 0.0f64);
    let mut run = |phi: &dyn ConvexFn, phi_star: &dyn ConvexFn, probes: Vec<Vector>| -> Result<()> {
        let v = conjugate_pair_check(phi, phi_star, &grid, &probes, CONJUGATE_TOL, threshold)?;
        probes_used += v.probes;
        failures += v.mismatches.len();
        worst = worst.max(v.max_error);
        Ok(())
    };
    let per_pair = CONJUGATE_PROBES / 2;
    match *law {
        Law::Elastic(p) => {
            let mut a = vec![0.0; dim];
            a[0] = p.epsilon();
            for a in [Vector::zeros(dim), Vector::new(a)?] {
                let probes = (0..per_pair)
                    .map(|_| Vector::new(s.in_box(dim)).map(|u| a.add_scaled(p.lambda(), &u)))
                    .collect::<std::result::Result<Vec<_>, _>>()?;
                let phi = ElasticPotential { lambda: p.lambda(), a: a.clone() };
                let phi_star = ElasticConjugate { lambda: p.lambda(), a };
                run(&phi, &phi_star, probes)?;
            }
        }
        Law::Plastic(p) => {
            for eta in [p.lambda_minus(), p.lambda_plus()] {
                let mut probes = Vec::new();
                for k in 0..per_pair {
                    let r = if k % 2 == 0 {
                        s.uniform(0.0, 0.9 * eta)
                    } else {
                        s.uniform(eta + EXTERIOR_MARGIN, eta + 3.0 * EXTERIOR_MARGIN)
                    };
                    probes.push(Vector::new(s.direction(dim).iter().map(|c| c * r).collect())?);
                }
                run(&Norm { dim, weight: eta }, &BallIndicator { dim, radius: eta }, probes)?;
            }
        }
        Law::Coulomb(_) | Law::Friction(_) => {
            let fp = law.friction_params().expect("friction law");
            for mu in [fp.mu_minus(), fp.mu_plus()] {
                let cone = FnConvex::new(3, move |y: &Vector| indicator(|y| in_coulomb_cone(mu, &split(y)), y));
                let polar = FnConvex::new(3, move |x: &Vector| {
                    indicator(
                        |x| {
                            let x = split(x);
                            mu * x.tangential_norm() + x.normal <= 0.0
                        },
                        x,
                    )
                });
                let mut probes = Vec::new();
                for k in 0..per_pair {
                    // value of mu ||x_t|| + x_n: inside the polar cone or past its boundary
                    let level = if k % 2 == 0 {
                        -s.uniform(0.0, 1.0)
                    } else {
                        s.uniform(EXTERIOR_MARGIN, 3.0 * EXTERIOR_MARGIN)
                    };
                    let t = s.direction(2);
                    let rt = s.uniform(0.0, 1.0);
                    let xn = level - mu * rt;
                    probes.push(ContactVec::new(xn, [rt * t[0], rt * t[1]]).to_vector());
                }
                run(&cone, &polar, probes)?;
            }
        }
    }
    Ok(Check::new("conjugate_pairs", probes_used, failures).worst(worst).tolerance(CONJUGATE_TOL).note(format!(
        "grid {}^{dim} on [-{r}, {r}], divergence threshold {threshold}",
        grid.points_per_axis(),
        r = cfg.conjugate_half_width
    )))
}

/// Sublattice `(s, t) -> law.embed(s, t)` over the sampling box.
pub fn sublattice(cfg: &LawConfig) -> Result<GridSpec> {
    let h = cfg.half_width;
    Ok(GridSpec::new(vec![(-h, h), (-h, h)], cfg.lattice_points)?)
}

/// Critical sets of the closed form and of `b_inf` on the sublattice versus
/// the membership predicate.
pub fn lattice_scans(cfg: &LawConfig) -> Result<Vec<Check>> {
    let law = cfg.law;
    let grid = sublattice(cfg)?;
    let mut members = Vec::new();
    grid.for_each_point(|p| {
        let (x, y) = law.embed(p[0], p[1]);
        if law.member(&x, &y, cfg.tol) {
            members.push((x, y));
        }
    });
    let embed = |p: &[f64]| {
        let (x, y) = law.embed(p[0], p[1]);
        (Ok(x), Ok(y))
    };
    let b = law.bipotential();
    let closed = scan_lattice(&grid, embed, &*b, cfg.tol)?;
    let graph = law.graph();
    let b_inf = b_infinity(&*graph, cfg.tol);
    let trivial = scan_lattice(&grid, embed, &b_inf, cfg.tol)?;
    let diff = |found: &[Pair]| symmetric_difference(found, &members);
    let total = grid.point_count() as usize;
    Ok(vec![
        Check::new("lattice_scan", total, diff(&closed)).note(format!("{} critical lattice pairs", members.len())),
        Check::new("b_infinity_scan", total, diff(&trivial)),
    ])
}

/// Both lists are in lattice order.
fn symmetric_difference(a: &[Pair], b: &[Pair]) -> usize {
    let key = |p: &Pair| -> Vec<u64> { p.0.as_slice().iter().chain(p.1.as_slice()).map(|c| c.to_bits()).collect() };
    let a: std::collections::BTreeSet<_> = a.iter().map(key).collect();
    let b: std::collections::BTreeSet<_> = b.iter().map(key).collect();
    a.symmetric_difference(&b).count()
}
