//! Exact truncated formal power series.
//!
//! A [`TruncatedSeries`] of order `N` stores the coefficients `c_0..c_N` of
//! `z^0..z^N`; every binary operation truncates to the smaller operand order.
//! [`HalfSeries`] adds an optional `z^(-1/2)` prefactor for S-transforms of
//! symmetric measures.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Coeff;

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries<C: Coeff> {
    coeffs: Vec<C>,
}

impl<C: Coeff> TruncatedSeries<C> {
    /// Build from `c_0..c_N`; the list length fixes the order.
    pub fn new(mut coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least a constant term");
        C::unify(&mut coeffs);
        TruncatedSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        TruncatedSeries { coeffs: vec![C::zero(); order + 1] }
    }

    pub fn constant(c: C, order: usize) -> Self {
        let mut coeffs = vec![C::zero(); order + 1];
        coeffs[0] = c;
        Self::new(coeffs)
    }

    /// The identity series `z`.
    pub fn identity(order: usize) -> Self {
        assert!(order >= 1);
        let mut coeffs = vec![C::zero(); order + 1];
        coeffs[1] = C::one();
        Self::new(coeffs)
    }

    /// A polynomial `a_0 + a_1 z + ...` padded or cut to the given order.
    pub fn from_poly(poly: &[C], order: usize) -> Self {
        let mut coeffs = vec![C::zero(); order + 1];
        for (i, c) in poly.iter().enumerate().take(order + 1) {
            coeffs[i] = c.clone();
        }
        Self::new(coeffs)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> C {
        self.coeffs.get(n).cloned().unwrap_or_else(C::zero)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        Self::new(self.coeffs[..=order].to_vec())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.order().min(rhs.order());
        Self::new((0..=n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.order().min(rhs.order());
        Self::new((0..=n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn scale(&self, k: &C) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * k.clone()).collect())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let n = self.order().min(rhs.order());
        let mut out = vec![C::zero(); n + 1];
        for i in 0..=n {
            if self.coeff(i).is_zero() {
                continue;
            }
            for j in 0..=(n - i) {
                out[i + j] = out[i + j].clone() + self.coeff(i) * rhs.coeff(j);
            }
        }
        Self::new(out)
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        if self.coeff(0).is_zero() {
            return Err(Error::DivisionByZeroConstant);
        }
        let n = self.order();
        let mut inv = vec![C::zero(); n + 1];
        inv[0] = C::one() / self.coeff(0);
        for m in 1..=n {
            let mut acc = C::zero();
            for k in 1..=m {
                acc = acc + self.coeff(k) * inv[m - k].clone();
            }
            inv[m] = -acc / self.coeff(0);
        }
        Ok(Self::new(inv))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.inverse()?.truncate(self.order().min(rhs.order()))))
    }

    /// `f(g(z))`; the inner series must vanish at 0.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeff(0).is_zero() {
            return Err(Error::NonzeroInnerConstant);
        }
        let n = self.order().min(inner.order());
        let f = self.truncate(n);
        let g = inner.truncate(n);
        // Horner evaluation in the truncated ring.
        let mut acc = Self::constant(f.coeff(n), n);
        for k in (0..n).rev() {
            acc = acc.mul(&g);
            let mut coeffs = acc.coeffs.clone();
            coeffs[0] = coeffs[0].clone() + f.coeff(k);
            acc = Self::new(coeffs);
        }
        Ok(acc)
    }

    /// Compositional inverse: `g` with `f(g(z)) = z` up to the truncation
    /// order. Requires `f(0) = 0` and `f'(0) != 0`.
    pub fn reversion(&self) -> Result<Self> {
        if !self.coeff(0).is_zero() {
            return Err(Error::NonzeroInnerConstant);
        }
        if self.coeff(1).is_zero() {
            return Err(Error::ZeroLinearCoefficient);
        }
        let n = self.order();
        let mut g = Self::zero(n);
        g.coeffs[1] = C::one() / self.coeff(1);
        // Solve coefficient by coefficient: with g known below order m, the
        // z^m coefficient of f(g) is linear in g_m with slope f'(0).
        for m in 2..=n {
            let h = self.truncate(m).compose(&g.truncate(m))?;
            g.coeffs[m] = -h.coeff(m) / self.coeff(1);
        }
        C::unify(&mut g.coeffs);
        Ok(g)
    }

    /// Square root with the positive branch at `z = 0`.
    pub fn sqrt(&self) -> Result<Self> {
        let c0 = self.coeff(0).sqrt_positive()?;
        let n = self.order();
        let mut g = vec![C::zero(); n + 1];
        g[0] = c0.clone();
        let two_c0 = c0.clone() + c0;
        for m in 1..=n {
            let mut acc = C::zero();
            for j in 1..m {
                acc = acc + g[j].clone() * g[m - j].clone();
            }
            g[m] = (self.coeff(m) - acc) / two_c0.clone();
        }
        Ok(Self::new(g))
    }

    /// Drop the constant term and divide by `z` (order shrinks by one).
    pub fn shift_down(&self) -> Self {
        assert!(self.order() >= 1);
        Self::new(self.coeffs[1..].to_vec())
    }

    /// Multiply by `z` (order grows by one).
    pub fn shift_up(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(C::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(coeffs)
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64()).collect()
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let n = self.order().min(other.order());
        (0..=n).all(|i| (self.coeff(i).to_f64() - other.coeff(i).to_f64()).abs() <= tol)
    }
}

impl<C: Coeff> fmt::Display for TruncatedSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*z")?,
                _ => write!(f, "({c})*z^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(z^{})", self.order() + 1)
    }
}

/// Ordinary series, optionally carrying a `z^(-1/2)` prefactor.
///
/// Symmetric S-transforms are of the form `z^(-1/2) * T(z)` with `T(0) > 0`.
/// The square of such a value is only ever used through the squared-S
/// identity, so a bare `z^(-1)` never needs representing.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfSeries<C: Coeff> {
    half: bool,
    body: TruncatedSeries<C>,
}

impl<C: Coeff> HalfSeries<C> {
    pub fn ordinary(body: TruncatedSeries<C>) -> Self {
        HalfSeries { half: false, body }
    }

    pub fn with_half_power(body: TruncatedSeries<C>) -> Self {
        assert!(
            body.coeff(0).is_positive(),
            "a z^(-1/2) series needs a positive leading coefficient"
        );
        HalfSeries { half: true, body }
    }

    pub fn is_half(&self) -> bool {
        self.half
    }

    pub fn body(&self) -> &TruncatedSeries<C> {
        &self.body
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.half && rhs.half {
            return Err(Error::DoubleHalfPower);
        }
        Ok(HalfSeries {
            half: self.half ^ rhs.half,
            body: self.body.mul(&rhs.body),
        })
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(HalfSeries {
            half: self.half ^ rhs.half,
            body: self.body.div(&rhs.body)?,
        })
    }

    /// `z * S(z)^2` as an ordinary series: for `S = z^(-1/2) T` this is `T^2`,
    /// for an ordinary `S` it is `z S^2`.
    pub fn z_times_square(&self) -> TruncatedSeries<C> {
        let sq = self.body.mul(&self.body);
        if self.half {
            sq
        } else {
            sq.shift_up().truncate(sq.order())
        }
    }
}
