//! Seeded samplers for verification: uniform pairs, graph points, regime
//! boundaries, off-graph points, probe directions and implicit-convexity
//! cases.
//!
//! Graph and boundary points are built so that the exact (untoleranced)
//! admissibility tests of the law hold: radii are shrunk by ulps when
//! rounding pushes them past a ball or cone boundary.

use bipotkit_core::cover::{Frozen, ImplicitConvexityCase};
use bipotkit_core::laws::{ContactVec, FrictionParams};
use bipotkit_core::{duality, ExtReal, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::law::Law;

/// Smallest gap of the points returned by [`Sampler::off_graph`].
pub const OFF_GRAPH_MARGIN: f64 = 1e-3;

pub type Pair = (Vector, Vector);

pub struct Sampler {
    rng: ChaCha8Rng,
    half_width: f64,
}

/// Scales `v` down until `norm(v) <= r`.
fn fit_ball(mut v: Vec<f64>, r: f64) -> Vec<f64> {
    while norm(&v) > r {
        for c in v.iter_mut() {
            *c *= 1.0 - 4.0 * f64::EPSILON;
        }
    }
    v
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

fn vector(v: Vec<f64>) -> Vector {
    Vector::new(v).expect("sampled coordinates are finite")
}

impl Sampler {
    pub fn new(seed: u64, half_width: f64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), half_width }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        if lo == hi {
            lo
        } else {
            self.rng.gen_range(lo..=hi)
        }
    }

    pub fn in_box(&mut self, dim: usize) -> Vec<f64> {
        let h = self.half_width;
        (0..dim).map(|_| self.rng.gen_range(-h..=h)).collect()
    }

    /// Uniform unit vector.
    pub fn direction(&mut self, dim: usize) -> Vec<f64> {
        loop {
            let v: Vec<f64> = (0..dim).map(|_| self.rng.gen_range(-1.0..=1.0)).collect();
            let n = norm(&v);
            if n > 1e-3 && n <= 1.0 {
                return v.iter().map(|c| c / n).collect();
            }
        }
    }

    /// Uniform point of the ball `B(r)` in `dim` dimensions.
    pub fn in_ball(&mut self, dim: usize, r: f64) -> Vec<f64> {
        let radius = r * self.rng.gen::<f64>().powf(1.0 / dim as f64);
        fit_ball(self.direction(dim).iter().map(|c| c * radius).collect(), r)
    }

    fn on_sphere(&mut self, dim: usize, r: f64) -> Vec<f64> {
        fit_ball(self.direction(dim).iter().map(|c| c * r).collect(), r)
    }

    pub fn uniform_pair(&mut self, law: &Law) -> Pair {
        let n = law.dim();
        (vector(self.in_box(n)), vector(self.in_box(n)))
    }

    /// Point of the law's graph, spread over its regimes.
    pub fn on_graph(&mut self, law: &Law) -> Pair {
        let h = self.half_width;
        match *law {
            Law::Elastic(p) => {
                let x = self.in_box(p.dim());
                let a = self.in_ball(p.dim(), p.epsilon());
                let y = x.iter().zip(&a).map(|(xi, ai)| p.lambda() * xi + ai).collect();
                (vector(x), vector(y))
            }
            Law::Plastic(p) => {
                let n = p.dim();
                if self.rng.gen_bool(0.5) {
                    (Vector::zeros(n), vector(self.in_ball(n, p.lambda_plus())))
                } else {
                    let r = self.uniform(p.lambda_minus(), p.lambda_plus());
                    let y = self.on_sphere(n, r);
                    let t = self.uniform(0.0, h / p.lambda_plus());
                    (vector(y.iter().map(|c| t * c).collect()), vector(y))
                }
            }
            Law::Coulomb(_) | Law::Friction(_) => {
                let fp = law.friction_params().expect("friction law");
                let (x, y) = match self.rng.gen_range(0..3) {
                    0 => (ContactVec::new(self.uniform(-h, 0.0), self.tangential(h)), ContactVec::ZERO),
                    1 => (ContactVec::ZERO, self.in_cone(fp.mu_plus())),
                    _ => {
                        let m = self.uniform(fp.mu_minus(), fp.mu_plus());
                        self.sliding(&fp, m)
                    }
                };
                (x.to_vector(), y.to_vector())
            }
        }
    }

    fn tangential(&mut self, h: f64) -> [f64; 2] {
        [self.rng.gen_range(-h..=h), self.rng.gen_range(-h..=h)]
    }

    /// Uniform-ish stress in `K_mu` with pressure up to the box width.
    fn in_cone(&mut self, mu: f64) -> ContactVec {
        let yn = self.uniform(0.0, self.half_width);
        let t = self.in_ball(2, mu * yn);
        ContactVec::new(yn, [t[0], t[1]])
    }

    /// Sliding pair with `||y_t|| = m y_n`, `y_t` along `x_t`.
    fn sliding(&mut self, p: &FrictionParams, m: f64) -> (ContactVec, ContactVec) {
        let h = self.half_width;
        let xt = loop {
            let t = self.tangential(h);
            if norm(&t) > 1e-3 {
                break t;
            }
        };
        let yn = self.uniform(1e-3, h);
        let s = m * yn / norm(&xt);
        let yt = fit_ball(vec![s * xt[0], s * xt[1]], p.mu_plus() * yn);
        (ContactVec::new(0.0, xt), ContactVec::new(yn, [yt[0], yt[1]]))
    }

    /// Graph point on a regime boundary, built with the closed inequalities
    /// attained.
    pub fn boundary(&mut self, law: &Law) -> Pair {
        let h = self.half_width;
        match *law {
            Law::Elastic(p) => {
                let x = self.in_box(p.dim());
                let a = self.on_sphere(p.dim(), p.epsilon());
                let y = x.iter().zip(&a).map(|(xi, ai)| p.lambda() * xi + ai).collect();
                (vector(x), vector(y))
            }
            Law::Plastic(p) => {
                let n = p.dim();
                match self.rng.gen_range(0..4) {
                    0 | 1 => {
                        let r = if self.rng.gen_bool(0.5) { p.lambda_minus() } else { p.lambda_plus() };
                        let y = self.on_sphere(n, r);
                        let t = self.uniform(0.0, h / p.lambda_plus());
                        (vector(y.iter().map(|c| t * c).collect()), vector(y))
                    }
                    2 => (Vector::zeros(n), vector(self.on_sphere(n, p.lambda_plus()))),
                    _ => (Vector::zeros(n), vector(self.on_sphere(n, p.lambda_minus()))),
                }
            }
            Law::Coulomb(_) | Law::Friction(_) => {
                let fp = law.friction_params().expect("friction law");
                let (x, y) = match self.rng.gen_range(0..4) {
                    0 => self.sliding(&fp, fp.mu_minus()),
                    1 => self.sliding(&fp, fp.mu_plus()),
                    2 => {
                        let yn = self.uniform(0.0, h);
                        let t = self.on_sphere(2, fp.mu_plus() * yn);
                        (ContactVec::ZERO, ContactVec::new(yn, [t[0], t[1]]))
                    }
                    _ => (ContactVec::new(0.0, self.tangential(h)), ContactVec::ZERO),
                };
                (x.to_vector(), y.to_vector())
            }
        }
    }

    /// Pair with finite `b` and gap at least [`OFF_GRAPH_MARGIN`].
    pub fn off_graph(&mut self, law: &Law) -> Pair {
        let b = law.bipotential();
        loop {
            let (x, y) = match *law {
                Law::Elastic(p) => {
                    let x = self.in_box(p.dim());
                    let r = p.epsilon() + self.uniform(0.05, 1.0);
                    let a = self.on_sphere(p.dim(), r);
                    let y = x.iter().zip(&a).map(|(xi, ai)| p.lambda() * xi + ai).collect();
                    (vector(x), vector(y))
                }
                Law::Plastic(p) => (vector(self.in_box(p.dim())), vector(self.in_ball(p.dim(), p.lambda_plus()))),
                Law::Coulomb(_) | Law::Friction(_) => {
                    let fp = law.friction_params().expect("friction law");
                    let x = ContactVec::new(self.uniform(-self.half_width, 0.0), self.tangential(self.half_width));
                    (x.to_vector(), self.in_cone(fp.mu_plus()).to_vector())
                }
            };
            if let ExtReal::Finite(v) = b.eval(&x, &y) {
                if v - duality(&x, &y).expect("same dimension") >= OFF_GRAPH_MARGIN {
                    return (x, y);
                }
            }
        }
    }

    pub fn directions(&mut self, dim: usize, count: usize) -> Vec<Vector> {
        (0..count).map(|_| vector(self.direction(dim))).collect()
    }

    /// Elastic cover case with both parameters in `B(epsilon)`.
    pub fn elastic_case(&mut self, law: &Law, frozen: Frozen) -> ImplicitConvexityCase<Vector> {
        let Law::Elastic(p) = *law else { panic!("elastic law expected") };
        let n = p.dim();
        ImplicitConvexityCase {
            lambda1: vector(self.in_ball(n, p.epsilon())),
            lambda2: vector(self.in_ball(n, p.epsilon())),
            z1: vector(self.in_box(n)),
            z2: vector(self.in_box(n)),
            fixed: vector(self.in_box(n)),
            alpha: self.rng.gen(),
            frozen,
        }
    }

    /// Interval-cover case (plasticity or friction) with a finite right-hand
    /// side, so the check is not vacuous.
    pub fn interval_case(&mut self, law: &Law, frozen: Frozen) -> ImplicitConvexityCase<f64> {
        let alpha = self.rng.gen();
        match *law {
            Law::Plastic(p) => {
                let n = p.dim();
                let e1 = self.uniform(p.lambda_minus(), p.lambda_plus());
                let e2 = self.uniform(p.lambda_minus(), p.lambda_plus());
                let (z1, z2, fixed) = match frozen {
                    Frozen::X => (self.in_ball(n, e1), self.in_ball(n, e2), self.in_box(n)),
                    Frozen::Y => (self.in_box(n), self.in_box(n), self.in_ball(n, e1.min(e2))),
                };
                ImplicitConvexityCase {
                    lambda1: e1,
                    lambda2: e2,
                    z1: vector(z1),
                    z2: vector(z2),
                    fixed: vector(fixed),
                    alpha,
                    frozen,
                }
            }
            Law::Coulomb(_) | Law::Friction(_) => {
                let fp = law.friction_params().expect("friction law");
                let m1 = self.uniform(fp.mu_minus(), fp.mu_plus());
                let m2 = self.uniform(fp.mu_minus(), fp.mu_plus());
                let h = self.half_width;
                let velocity = |s: &mut Self| ContactVec::new(s.uniform(-h, 0.0), s.tangential(h)).to_vector();
                let (z1, z2, fixed) = match frozen {
                    Frozen::X => {
                        let x = velocity(self);
                        (self.in_cone(m1).to_vector(), self.in_cone(m2).to_vector(), x)
                    }
                    Frozen::Y => {
                        let y = self.in_cone(m1.min(m2)).to_vector();
                        (velocity(self), velocity(self), y)
                    }
                };
                ImplicitConvexityCase { lambda1: m1, lambda2: m2, z1, z2, fixed, alpha, frozen }
            }
            Law::Elastic(_) => panic!("interval cover expected"),
        }
    }
}
