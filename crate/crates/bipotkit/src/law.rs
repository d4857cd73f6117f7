//! Runtime dispatch over the four supported laws.

use bipotkit_core::bipotential::{critical_tolerance, Bipotential, LawGraph};
use bipotkit_core::laws::*;
use bipotkit_core::{duality, ExtReal, Vector};

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Law {
    Elastic(ElasticParams),
    Plastic(PlasticParams),
    /// Classical Coulomb friction with a single coefficient.
    Coulomb(f64),
    Friction(FrictionParams),
}

/// Result of evaluating a law at one pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation {
    pub b: ExtReal,
    pub duality: f64,
    pub gap: ExtReal,
    pub critical: bool,
    pub regime: &'static str,
}

impl Law {
    pub fn name(&self) -> &'static str {
        match self {
            Law::Elastic(_) => "elastic",
            Law::Plastic(_) => "plastic",
            Law::Coulomb(_) => "coulomb",
            Law::Friction(_) => "friction",
        }
    }

    /// Dimension of `X` (equal to that of `Y`).
    pub fn dim(&self) -> usize {
        match self {
            Law::Elastic(p) => p.dim(),
            Law::Plastic(p) => p.dim(),
            Law::Coulomb(_) | Law::Friction(_) => 3,
        }
    }

    /// Coefficient range of a friction law; Coulomb is the degenerate range.
    pub fn friction_params(&self) -> Option<FrictionParams> {
        match *self {
            Law::Coulomb(mu) => FrictionParams::new(mu, mu).ok(),
            Law::Friction(p) => Some(p),
            _ => None,
        }
    }

    pub fn bipotential(&self) -> Box<dyn Bipotential> {
        match *self {
            Law::Elastic(p) => Box::new(ElasticBipotential(p)),
            Law::Plastic(p) => Box::new(PlasticBipotential(p)),
            Law::Coulomb(mu) => Box::new(CoulombBipotential::new(mu).expect("validated coefficient")),
            Law::Friction(p) => Box::new(FrictionBipotential(p)),
        }
    }

    pub fn graph(&self) -> Box<dyn LawGraph> {
        match *self {
            Law::Elastic(p) => Box::new(ElasticGraph(p)),
            Law::Plastic(p) => Box::new(PlasticGraph(p)),
            Law::Coulomb(mu) => Box::new(CoulombGraph(CoulombBipotential::new(mu).expect("validated coefficient"))),
            Law::Friction(p) => Box::new(FrictionGraph(p)),
        }
    }

    pub fn b(&self, x: &Vector, y: &Vector) -> ExtReal {
        self.bipotential().eval(x, y)
    }

    pub fn member(&self, x: &Vector, y: &Vector, tol: f64) -> bool {
        self.graph().member(x, y, tol)
    }

    pub fn regime(&self, x: &Vector, y: &Vector, tol: f64) -> Result<&'static str> {
        Ok(match *self {
            Law::Elastic(p) => elastic_regime(&p, x, y, tol)?,
            Law::Plastic(p) => plastic_regime(&p, x, y, tol)?,
            Law::Coulomb(_) | Law::Friction(_) => {
                let p = self.friction_params().expect("friction law");
                friction_regime(&p, &ContactVec::from_vector(x)?, &ContactVec::from_vector(y)?, tol)
            }
        })
    }

    pub fn evaluate(&self, x: &Vector, y: &Vector, tol: f64) -> Result<Evaluation> {
        let n = self.dim();
        for v in [x, y] {
            if v.dim() != n {
                return Err(bipotkit_core::Error::DimensionMismatch { expected: n, found: v.dim() }.into());
            }
        }
        let b = self.b(x, y);
        let d = duality(x, y)?;
        let gap = b - d;
        let critical = match gap {
            ExtReal::Finite(g) => g <= critical_tolerance(tol, d),
            ExtReal::PosInf => false,
        };
        Ok(Evaluation { b, duality: d, gap, critical, regime: self.regime(x, y, tol)? })
    }

    /// One-dimensional sublattice used for graph plots: `(s, t)` becomes
    /// `x = (s, 0, ..)`, `y = (t, 0, ..)`, or for friction
    /// `x = (0, (s, 0))`, `y = (1, (t, 0))`.
    pub fn embed(&self, s: f64, t: f64) -> (Vector, Vector) {
        match self {
            Law::Elastic(_) | Law::Plastic(_) => {
                let mut x = vec![0.0; self.dim()];
                let mut y = vec![0.0; self.dim()];
                x[0] = s;
                y[0] = t;
                (Vector::new(x).expect("finite"), Vector::new(y).expect("finite"))
            }
            Law::Coulomb(_) | Law::Friction(_) => {
                (ContactVec::new(0.0, [s, 0.0]).to_vector(), ContactVec::new(1.0, [t, 0.0]).to_vector())
            }
        }
    }
}
