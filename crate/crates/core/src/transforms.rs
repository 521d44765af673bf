//! The moment transform pipeline: psi, its reversion chi, and the
//! S-transform in both its ordinary and half-power (symmetric) forms.

use crate::error::{Error, Result};
use crate::scalar::Coeff;
use crate::series::{HalfSeries, TruncatedSeries};

/// `Psi(z) = sum_{n>=1} m_n z^n`, truncated at the length of `m`.
pub fn psi_from_moments<C: Coeff>(m: &[C]) -> TruncatedSeries<C> {
    let mut coeffs = Vec::with_capacity(m.len() + 1);
    coeffs.push(C::zero());
    coeffs.extend_from_slice(m);
    TruncatedSeries::new(coeffs)
}

/// The compositional inverse `chi = Psi^<-1>`; needs `m_1 != 0`.
pub fn chi_from_moments<C: Coeff>(m: &[C]) -> Result<TruncatedSeries<C>> {
    if m.is_empty() {
        return Err(Error::TooShort);
    }
    if m[0].is_zero() {
        return Err(Error::ZeroFirstMoment);
    }
    psi_from_moments(m).reversion()
}

/// `S(z) = chi(z) (1+z) / z` from moments `m_1..m_N`; the result has
/// order `N - 1` and constant term `1 / m_1`.
pub fn s_from_moments<C: Coeff>(m: &[C]) -> Result<TruncatedSeries<C>> {
    let chi = chi_from_moments(m)?;
    let over_z = chi.shift_down();
    Ok(over_z.mul(&one_plus_z(over_z.order())))
}

/// Moments `m_1..m_{K+1}` from an S-transform of order `K`.
pub fn moments_from_s<C: Coeff>(s: &TruncatedSeries<C>) -> Result<Vec<C>> {
    let chi = s.div(&one_plus_z(s.order()))?.shift_up();
    let psi = chi.reversion()?;
    Ok(psi.coeffs()[1..].to_vec())
}

/// The symmetric S-transform `S_mu(z) = z^{-1/2} sqrt((1+z) S_{mu^(2)}(z))`
/// from the moments of the carrier `mu^(2)`.
pub fn s_sym_from_carrier<C: Coeff>(carrier_m: &[C]) -> Result<HalfSeries<C>> {
    let s_rho = s_from_moments(carrier_m)?;
    let body = one_plus_z(s_rho.order()).mul(&s_rho).sqrt()?;
    Ok(HalfSeries::with_half_power(body))
}

/// Recover `S_{mu^(2)} = z S_mu(z)^2 / (1+z)` from a half-power transform.
pub fn carrier_s_from_sym<C: Coeff>(s: &HalfSeries<C>) -> Result<TruncatedSeries<C>> {
    if !s.is_half() {
        return Err(Error::AsymmetricInput);
    }
    s.z_times_square().div(&one_plus_z(s.body().order()))
}

/// Moments `m_1..m_{2K+2}` of the symmetric measure with half-power
/// S-transform `s` of body order `K`; odd entries are zero.
pub fn sym_moments_from_s_sym<C: Coeff>(s: &HalfSeries<C>) -> Result<Vec<C>> {
    let rho = moments_from_s(&carrier_s_from_sym(s)?)?;
    let mut out = Vec::with_capacity(2 * rho.len());
    for r in rho {
        out.push(C::zero());
        out.push(r);
    }
    Ok(out)
}

fn one_plus_z<C: Coeff>(order: usize) -> TruncatedSeries<C> {
    let mut coeffs = vec![C::zero(); order + 1];
    coeffs[0] = C::one();
    if order >= 1 {
        coeffs[1] = C::one();
    }
    TruncatedSeries::new(coeffs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    Nonincreasing,
    Nondecreasing,
    Constant,
    Mixed,
}

/// Sample `f` on a uniform grid over `(a, b)` and classify its direction
/// by central differences.  Differences below `tol` in absolute value are
/// treated as flat.
pub fn s_monotone_check<F>(f: F, a: f64, b: f64, grid: usize, tol: f64) -> Monotonicity
where
    F: Fn(f64) -> f64,
{
    assert!(b > a && grid >= 3);
    let step = (b - a) / (grid as f64 + 1.0);
    let mut up = false;
    let mut down = false;
    let mut prev = f(a + step);
    for i in 2..=grid {
        let v = f(a + step * i as f64);
        let d = v - prev;
        if d > tol {
            up = true;
        } else if d < -tol {
            down = true;
        }
        prev = v;
    }
    match (up, down) {
        (true, true) => Monotonicity::Mixed,
        (true, false) => Monotonicity::Nondecreasing,
        (false, true) => Monotonicity::Nonincreasing,
        (false, false) => Monotonicity::Constant,
    }
}
