use alloc::vec::Vec;
use core::ops::Index;

use crate::{Error, Result};

/// A point of `R^n`, the common model of the dual spaces `X` and `Y`.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector(Vec<f64>);

impl Vector {
    /// Builds a vector, rejecting empty and non-finite coordinates.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyVector);
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Vector(coords))
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "vectors have at least one coordinate");
        Vector(alloc::vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Mutable coordinates; callers keep them finite.
    pub(crate) fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    pub fn norm_sq(&self) -> f64 {
        dot(&self.0, &self.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0.0)
    }

    /// `c * self`.
    pub fn scaled(&self, c: f64) -> Vector {
        Vector(self.0.iter().map(|v| c * v).collect())
    }

    /// `self + c * other`; panics on dimension mismatch.
    pub fn add_scaled(&self, c: f64, other: &Vector) -> Vector {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + c * b).collect())
    }

    /// `self - other`; panics on dimension mismatch.
    pub fn sub(&self, other: &Vector) -> Vector {
        self.add_scaled(-1.0, other)
    }

    /// `t * self + (1 - t) * other`; panics on dimension mismatch.
    pub fn lerp(&self, t: f64, other: &Vector) -> Vector {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| t * a + (1.0 - t) * b).collect())
    }

    pub(crate) fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim() == expected {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected, found: self.dim() })
        }
    }
}

impl<const N: usize> From<[f64; N]> for Vector {
    fn from(coords: [f64; N]) -> Self {
        assert!(N >= 1, "vectors have at least one coordinate");
        Vector(coords.to_vec())
    }
}

impl Index<usize> for Vector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Euclidean duality product `<x, y>`.
pub fn duality(x: &Vector, y: &Vector) -> Result<f64> {
    y.check_dim(x.dim())?;
    Ok(dot(x.as_slice(), y.as_slice()))
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    let largest = a.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if largest == 0.0 {
        0.0
    } else if (1e-150..1e150).contains(&largest) {
        libm::sqrt(dot(a, a))
    } else {
        // rescale so squaring neither underflows nor overflows
        let s: f64 = a.iter().map(|v| (v / largest) * (v / largest)).sum();
        largest * libm::sqrt(s)
    }
}
