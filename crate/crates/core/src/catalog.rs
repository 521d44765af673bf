//! Named distributions with closed-form moments, S-transforms and densities.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use crate::combinatorics::{self, CumulantSeq, MomentSeq};
use crate::error::{Error, Result};
use crate::quad;
use crate::scalar::Scalar;
use crate::series::{HalfSeries, TruncatedSeries};

type Series = TruncatedSeries<Scalar>;

/// A catalog family with parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum CatalogEntry {
    /// Semicircle with mean `b` and variance `a` on `[b - 2 sqrt(a), b + 2 sqrt(a)]`.
    Wigner { b: Scalar, a: Scalar },
    /// Free Poisson with rate `c`.
    MarchenkoPastur { c: Scalar },
    /// Symmetric arcsine on `(-sqrt(s), sqrt(s))`.
    ArcsineSym { s: Scalar },
    /// Positive arcsine on `(0, s)`.
    ArcsinePos { s: Scalar },
    /// `(delta_-1 + delta_1)/2`.
    BernoulliSym,
    /// Symmetric Beta(1/2, 3/2) on `(-2 sqrt(s), 2 sqrt(s))`.
    BetaSym { s: Scalar },
    /// Fuss-Catalan moment family, moments `A_n(p, r)`.
    Mlotkowski { p: Scalar, r: Scalar },
    /// Classical Gaussian with mean `b` and variance `a`.
    Gaussian { b: Scalar, a: Scalar },
    /// Classical Poisson with mean `c`.
    PoissonClassical { c: Scalar },
    /// Gamma with shape 1/2 and scale `s`.
    GammaHalf { s: Scalar },
    PointMass { x: Scalar },
}

impl CatalogEntry {
    /// Catalog spelling used by the CLI JSON schema.
    pub fn name(&self) -> &'static str {
        match self {
            CatalogEntry::Wigner { .. } => "wigner",
            CatalogEntry::MarchenkoPastur { .. } => "marchenko_pastur",
            CatalogEntry::ArcsineSym { .. } => "arcsine_sym",
            CatalogEntry::ArcsinePos { .. } => "arcsine_pos",
            CatalogEntry::BernoulliSym => "bernoulli_sym",
            CatalogEntry::BetaSym { .. } => "beta_sym",
            CatalogEntry::Mlotkowski { .. } => "mlotkowski",
            CatalogEntry::Gaussian { .. } => "gaussian",
            CatalogEntry::PoissonClassical { .. } => "poisson_classical",
            CatalogEntry::GammaHalf { .. } => "gamma_half",
            CatalogEntry::PointMass { .. } => "point_mass",
        }
    }

    pub fn params(&self) -> Vec<Scalar> {
        match self {
            CatalogEntry::Wigner { b, a } | CatalogEntry::Gaussian { b, a } => {
                vec![b.clone(), a.clone()]
            }
            CatalogEntry::MarchenkoPastur { c } | CatalogEntry::PoissonClassical { c } => {
                vec![c.clone()]
            }
            CatalogEntry::ArcsineSym { s }
            | CatalogEntry::ArcsinePos { s }
            | CatalogEntry::BetaSym { s }
            | CatalogEntry::GammaHalf { s } => vec![s.clone()],
            CatalogEntry::BernoulliSym => vec![],
            CatalogEntry::Mlotkowski { p, r } => vec![p.clone(), r.clone()],
            CatalogEntry::PointMass { x } => vec![x.clone()],
        }
    }

    pub fn from_name(name: &str, params: &[Scalar]) -> Result<CatalogEntry> {
        let bad = |msg: &str| Error::InvalidParams(format!("{name}: {msg}"));
        let want = |k: usize| {
            if params.len() == k {
                Ok(())
            } else {
                Err(bad(&format!("expected {k} parameter(s), got {}", params.len())))
            }
        };
        let e = match name {
            "wigner" => {
                want(2)?;
                CatalogEntry::Wigner { b: params[0].clone(), a: params[1].clone() }
            }
            "marchenko_pastur" => {
                want(1)?;
                CatalogEntry::MarchenkoPastur { c: params[0].clone() }
            }
            "arcsine_sym" => {
                want(1)?;
                CatalogEntry::ArcsineSym { s: params[0].clone() }
            }
            "arcsine_pos" => {
                want(1)?;
                CatalogEntry::ArcsinePos { s: params[0].clone() }
            }
            "bernoulli_sym" => {
                want(0)?;
                CatalogEntry::BernoulliSym
            }
            "beta_sym" => {
                want(1)?;
                CatalogEntry::BetaSym { s: params[0].clone() }
            }
            "mlotkowski" => {
                want(2)?;
                CatalogEntry::Mlotkowski { p: params[0].clone(), r: params[1].clone() }
            }
            "gaussian" => {
                want(2)?;
                CatalogEntry::Gaussian { b: params[0].clone(), a: params[1].clone() }
            }
            "poisson_classical" => {
                want(1)?;
                CatalogEntry::PoissonClassical { c: params[0].clone() }
            }
            "gamma_half" => {
                want(1)?;
                CatalogEntry::GammaHalf { s: params[0].clone() }
            }
            "point_mass" => {
                want(1)?;
                CatalogEntry::PointMass { x: params[0].clone() }
            }
            other => return Err(Error::SpecValidation(format!("unknown catalog family {other}"))),
        };
        e.validate()?;
        Ok(e)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParams(format!("{}: {msg}", self.name())));
        match self {
            CatalogEntry::Wigner { a, .. } | CatalogEntry::Gaussian { a, .. } => {
                if !a.is_positive() {
                    return bad("variance must be positive");
                }
            }
            CatalogEntry::MarchenkoPastur { c } | CatalogEntry::PoissonClassical { c } => {
                if !c.is_positive() {
                    return bad("rate must be positive");
                }
            }
            CatalogEntry::ArcsineSym { s }
            | CatalogEntry::ArcsinePos { s }
            | CatalogEntry::BetaSym { s }
            | CatalogEntry::GammaHalf { s } => {
                if !s.is_positive() {
                    return bad("scale must be positive");
                }
            }
            CatalogEntry::Mlotkowski { p, r } => {
                // Mlotkowski admissibility: p >= 1, 0 <= r <= p
                let one = Scalar::from_int(1);
                if (p.clone() - one).is_negative()
                    || r.is_negative()
                    || (p.clone() - r.clone()).is_negative()
                {
                    return bad("requires p >= 1 and 0 <= r <= p");
                }
            }
            CatalogEntry::BernoulliSym | CatalogEntry::PointMass { .. } => {}
        }
        Ok(())
    }

    /// Whether the family is symmetric about zero.
    pub fn is_symmetric(&self) -> bool {
        match self {
            CatalogEntry::Wigner { b, .. } | CatalogEntry::Gaussian { b, .. } => b.is_zero(),
            CatalogEntry::ArcsineSym { .. }
            | CatalogEntry::BernoulliSym
            | CatalogEntry::BetaSym { .. } => true,
            CatalogEntry::PointMass { x } => x.is_zero(),
            _ => false,
        }
    }

    /// Whether the support sits in `[0, infinity)`.
    pub fn is_positive_type(&self) -> bool {
        match self {
            CatalogEntry::MarchenkoPastur { .. }
            | CatalogEntry::ArcsinePos { .. }
            | CatalogEntry::PoissonClassical { .. }
            | CatalogEntry::GammaHalf { .. }
            | CatalogEntry::Mlotkowski { .. } => true,
            CatalogEntry::PointMass { x } => !x.is_negative(),
            _ => false,
        }
    }
}

/// `C(2n, n) / 4^n` as an exact rational.
fn central_binomial_over_4n(n: usize) -> Scalar {
    let mut acc = Scalar::from_int(1);
    // C(2n,n)/4^n = prod_{k=1}^{n} (2k-1)/(2k)
    for k in 1..=n {
        acc = acc * Scalar::ratio(2 * k as i64 - 1, 2 * k as i64);
    }
    acc
}

fn double_factorial_odd(n: usize) -> Scalar {
    // (2n-1)!!
    let mut acc = Scalar::from_int(1);
    for k in 1..=n {
        acc = acc * Scalar::from_int(2 * k as i64 - 1);
    }
    acc
}

/// Exact moments `m_1..m_N`.
pub fn catalog_moments(e: &CatalogEntry, n: usize) -> Result<MomentSeq> {
    e.validate()?;
    let m = match e {
        CatalogEntry::Wigner { b, a } => {
            let mut kappa = vec![Scalar::from_int(0); n];
            if n >= 1 {
                kappa[0] = b.clone();
            }
            if n >= 2 {
                kappa[1] = a.clone();
            }
            combinatorics::moments_from_free_cumulants(&kappa)
        }
        CatalogEntry::MarchenkoPastur { c } => {
            combinatorics::moments_from_free_cumulants(&vec![c.clone(); n])
        }
        CatalogEntry::ArcsineSym { s } => (1..=n)
            .map(|k| {
                if k % 2 == 1 {
                    Scalar::from_int(0)
                } else {
                    s.pow((k / 2) as u32) * central_binomial_over_4n(k / 2)
                }
            })
            .collect(),
        CatalogEntry::ArcsinePos { s } => {
            (1..=n).map(|k| s.pow(k as u32) * central_binomial_over_4n(k)).collect()
        }
        CatalogEntry::BernoulliSym => (1..=n)
            .map(|k| Scalar::from_int(if k % 2 == 0 { 1 } else { 0 }))
            .collect(),
        CatalogEntry::BetaSym { s } => beta_sym_moments(s, n),
        CatalogEntry::Mlotkowski { p, r } => {
            (1..=n).map(|k| combinatorics::fuss_catalan(p, r, k)).collect()
        }
        CatalogEntry::Gaussian { b, a } => {
            let mut m: Vec<Scalar> = Vec::with_capacity(n);
            for k in 1..=n {
                let m1 = if k >= 2 { m[k - 2].clone() } else { Scalar::from_int(1) };
                let m2 = match k {
                    1 => Scalar::from_int(0),
                    2 => Scalar::from_int(1),
                    _ => m[k - 3].clone(),
                };
                m.push(b.clone() * m1 + a.clone() * Scalar::from_int(k as i64 - 1) * m2);
            }
            m
        }
        CatalogEntry::PoissonClassical { c } => {
            combinatorics::moments_from_classical_cumulants(&vec![c.clone(); n])
        }
        CatalogEntry::GammaHalf { s } => (1..=n)
            .map(|k| s.pow(k as u32) * double_factorial_odd(k) * Scalar::ratio(1, 2).pow(k as u32))
            .collect(),
        CatalogEntry::PointMass { x } => (1..=n).map(|k| x.pow(k as u32)).collect(),
    };
    Ok(MomentSeq(m))
}

/// Free cumulants of a catalog family.
pub fn catalog_free_cumulants(e: &CatalogEntry, n: usize) -> Result<CumulantSeq> {
    Ok(combinatorics::free_cumulant_seq_from_moments(&catalog_moments(e, n)?))
}

/// Write-once cache for the quadrature-backed Beta moments.
fn beta_sym_moments(s: &Scalar, n: usize) -> Vec<Scalar> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Vec<f64>>>> = OnceLock::new();
    let sf = s.to_f64();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    let cached = guard.entry(sf.to_bits()).or_insert_with(Vec::new);
    let need = n / 2;
    if cached.len() < need {
        *cached = beta_sym_even_quadrature(sf, need);
    }
    (1..=n)
        .map(|k| {
            if k % 2 == 1 {
                Scalar::from_int(0)
            } else {
                Scalar::Float(cached[k / 2 - 1])
            }
        })
        .collect()
}

/// Even Beta(1/2,3/2) moments by Gauss-Legendre quadrature after the
/// substitution `x = L sin^2(t)`, which removes both endpoint singularities:
/// `m_{2k} = (4/pi) L^{2k} int_0^{pi/2} sin(t)^{4k} cos(t)^2 dt`, `L = 2 sqrt(s)`.
fn beta_sym_even_quadrature(s: f64, count: usize) -> Vec<f64> {
    let l = 2.0 * s.sqrt();
    (1..=count)
        .map(|k| {
            let v = quad::integrate(
                |t| (l * t.sin() * t.sin()).powi(2 * k as i32) * t.cos() * t.cos(),
                0.0,
                PI / 2.0,
                96,
            );
            4.0 / PI * v
        })
        .collect()
}

/// Closed-form S-transform expanded to order `n`; symmetric families carry
/// the `z^(-1/2)` prefactor.
pub fn catalog_s_transform(e: &CatalogEntry, n: usize) -> Result<HalfSeries<Scalar>> {
    e.validate()?;
    let one = Scalar::from_int(1);
    let linear = |c0: Scalar, c1: Scalar| Series::from_poly(&[c0, c1], n);
    match e {
        CatalogEntry::Wigner { b, a } if b.is_zero() => {
            // z^(-1/2) / sqrt(a)
            let inv_sqrt_a = (one / a.clone()).sqrt_positive()?;
            Ok(HalfSeries::with_half_power(Series::constant(inv_sqrt_a, n)))
        }
        CatalogEntry::MarchenkoPastur { c } => {
            Ok(HalfSeries::ordinary(
                Series::constant(one.clone(), n).div(&linear(c.clone(), one))?,
            ))
        }
        CatalogEntry::ArcsineSym { s } => {
            // z^(-1/2) sqrt((z+2)/s)
            let body = linear(Scalar::from_int(2) / s.clone(), one / s.clone()).sqrt()?;
            Ok(HalfSeries::with_half_power(body))
        }
        CatalogEntry::ArcsinePos { s } => {
            let num = linear(Scalar::from_int(2), one.clone());
            let den = linear(s.clone(), s.clone());
            Ok(HalfSeries::ordinary(num.div(&den)?))
        }
        CatalogEntry::BernoulliSym => {
            Ok(HalfSeries::with_half_power(linear(one.clone(), one).sqrt()?))
        }
        CatalogEntry::BetaSym { s } => {
            // S of arcsine_sym(s) times S of marchenko_pastur(1)
            let arc = linear(Scalar::from_int(2) / s.clone(), one.clone() / s.clone()).sqrt()?;
            let body = arc.div(&linear(one.clone(), one))?;
            Ok(HalfSeries::with_half_power(body))
        }
        CatalogEntry::PointMass { x } if x.is_positive() => {
            Ok(HalfSeries::ordinary(Series::constant(one / x.clone(), n)))
        }
        _ => Err(Error::NoClosedForm),
    }
}

/// The series expansion of `1/sqrt(z+2)`, the S-transform of the square
/// root `m-bar_2` of the free Poisson law of rate 2.
pub fn mp_bar2_s_transform(n: usize) -> Series {
    Series::from_poly(&[Scalar::from_int(2), Scalar::from_int(1)], n)
        .sqrt()
        .and_then(|s| s.inverse())
        .expect("constant term 2 is positive")
}

/// The atom weight at zero (Marchenko-Pastur with `c < 1`), zero elsewhere.
pub fn atom_at_zero(e: &CatalogEntry) -> f64 {
    match e {
        CatalogEntry::MarchenkoPastur { c } => (1.0 - c.to_f64()).max(0.0),
        _ => 0.0,
    }
}

/// Pointwise density of the absolutely continuous part.
pub fn catalog_density(e: &CatalogEntry, x: f64) -> Result<f64> {
    e.validate()?;
    let v = match e {
        CatalogEntry::Wigner { b, a } => {
            let (b, a) = (b.to_f64(), a.to_f64());
            let d = 4.0 * a - (x - b) * (x - b);
            if d > 0.0 {
                d.sqrt() / (2.0 * PI * a)
            } else {
                0.0
            }
        }
        CatalogEntry::MarchenkoPastur { c } => {
            let c = c.to_f64();
            let d = 4.0 * c - (x - 1.0 - c) * (x - 1.0 - c);
            if d > 0.0 && x > 0.0 {
                d.sqrt() / (2.0 * PI * x)
            } else {
                0.0
            }
        }
        CatalogEntry::ArcsineSym { s } => {
            let s = s.to_f64();
            if x * x < s {
                1.0 / (PI * (s - x * x).sqrt())
            } else {
                0.0
            }
        }
        CatalogEntry::ArcsinePos { s } => {
            let s = s.to_f64();
            if x > 0.0 && x < s {
                1.0 / (PI * (x * (s - x)).sqrt())
            } else {
                0.0
            }
        }
        CatalogEntry::BetaSym { s } => {
            let s = s.to_f64();
            let l = 2.0 * s.sqrt();
            let ax = x.abs();
            if ax > 0.0 && ax < l {
                (l - ax).sqrt() / (2.0 * PI * s.sqrt() * ax.sqrt())
            } else {
                0.0
            }
        }
        CatalogEntry::Gaussian { b, a } => {
            let (b, a) = (b.to_f64(), a.to_f64());
            (-(x - b) * (x - b) / (2.0 * a)).exp() / (2.0 * PI * a).sqrt()
        }
        CatalogEntry::GammaHalf { s } => {
            let s = s.to_f64();
            if x > 0.0 {
                (-x / s).exp() / (PI * s * x).sqrt()
            } else {
                0.0
            }
        }
        _ => return Err(Error::NoDensity),
    };
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms;

    fn ints(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&n| Scalar::from_int(n)).collect()
    }

    #[test]
    fn wigner_moments_are_catalan() {
        let e = CatalogEntry::Wigner { b: Scalar::from_int(0), a: Scalar::from_int(1) };
        assert_eq!(catalog_moments(&e, 6).unwrap().0, ints(&[0, 1, 0, 2, 0, 5]));
    }

    #[test]
    fn mlotkowski_2_1_is_marchenko_pastur_1() {
        let e = CatalogEntry::Mlotkowski { p: Scalar::from_int(2), r: Scalar::from_int(1) };
        let m = catalog_moments(&e, 8).unwrap();
        let mp = catalog_moments(&CatalogEntry::MarchenkoPastur { c: Scalar::from_int(1) }, 8)
            .unwrap();
        assert_eq!(m, mp);
        assert_eq!(m.0[..4], ints(&[1, 2, 5, 14])[..]);
    }

    #[test]
    fn point_mass_moments() {
        let e = CatalogEntry::PointMass { x: Scalar::from_int(1) };
        assert_eq!(catalog_moments(&e, 5).unwrap().0, ints(&[1, 1, 1, 1, 1]));
    }

    #[test]
    fn gamma_half_moments() {
        let e = CatalogEntry::GammaHalf { s: Scalar::from_int(1) };
        // m_n = (2n-1)!!/2^n: 1/2, 3/4, 15/8, 105/16
        assert_eq!(
            catalog_moments(&e, 4).unwrap().0,
            vec![
                Scalar::ratio(1, 2),
                Scalar::ratio(3, 4),
                Scalar::ratio(15, 8),
                Scalar::ratio(105, 16)
            ]
        );
    }

    #[test]
    fn gaussian_moments_match_hermite_values() {
        let e = CatalogEntry::Gaussian { b: Scalar::from_int(0), a: Scalar::from_int(1) };
        assert_eq!(catalog_moments(&e, 8).unwrap().0, ints(&[0, 1, 0, 3, 0, 15, 0, 105]));
    }

    #[test]
    fn s_transform_closed_forms() {
        let mp = CatalogEntry::MarchenkoPastur { c: Scalar::from_int(2) };
        let s = catalog_s_transform(&mp, 4).unwrap();
        assert!(!s.is_half());
        // 1/(z+2) = 1/2 - z/4 + z^2/8 - ...
        assert_eq!(s.body().coeff(0), Scalar::ratio(1, 2));
        assert_eq!(s.body().coeff(1), Scalar::ratio(-1, 4));

        let w = CatalogEntry::Wigner { b: Scalar::from_int(0), a: Scalar::from_int(1) };
        let sw = catalog_s_transform(&w, 4).unwrap();
        assert!(sw.is_half());
        assert_eq!(sw.body(), &Series::constant(Scalar::from_int(1), 4));

        let a = CatalogEntry::ArcsineSym { s: Scalar::from_int(1) };
        let sa = catalog_s_transform(&a, 4).unwrap();
        assert!(sa.is_half());
        assert!((sa.body().coeff(0).to_f64() - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn s_transform_agrees_with_moment_pipeline() {
        // positive families: closed form vs s_from_moments
        for e in [
            CatalogEntry::MarchenkoPastur { c: Scalar::ratio(3, 2) },
            CatalogEntry::ArcsinePos { s: Scalar::from_int(1) },
            CatalogEntry::PointMass { x: Scalar::from_int(3) },
        ] {
            let m = catalog_moments(&e, 10).unwrap();
            let s_closed = catalog_s_transform(&e, 9).unwrap();
            let s_series = transforms::s_from_moments(m.as_slice()).unwrap();
            assert_eq!(s_closed.body(), &s_series, "{}", e.name());
        }
    }

    #[test]
    fn densities_at_reference_points() {
        let w = CatalogEntry::Wigner { b: Scalar::from_int(0), a: Scalar::from_int(1) };
        assert!((catalog_density(&w, 0.0).unwrap() - 1.0 / PI).abs() < 1e-15);
        assert_eq!(catalog_density(&w, 2.5).unwrap(), 0.0);

        let a = CatalogEntry::ArcsineSym { s: Scalar::from_int(1) };
        assert!((catalog_density(&a, 0.0).unwrap() - 1.0 / PI).abs() < 1e-15);

        let mp = CatalogEntry::MarchenkoPastur { c: Scalar::ratio(1, 2) };
        assert!((atom_at_zero(&mp) - 0.5).abs() < 1e-15);
        assert_eq!(catalog_density(&mp, -1.0).unwrap(), 0.0);
    }

    #[test]
    fn no_density_for_atomic_families() {
        assert_eq!(catalog_density(&CatalogEntry::BernoulliSym, 0.5), Err(Error::NoDensity));
        let e = CatalogEntry::Mlotkowski { p: Scalar::ratio(3, 2), r: Scalar::from_int(1) };
        assert_eq!(catalog_density(&e, 1.0), Err(Error::NoDensity));
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(CatalogEntry::from_name("marchenko_pastur", &[Scalar::from_int(0)]).is_err());
        assert!(CatalogEntry::from_name(
            "mlotkowski",
            &[Scalar::ratio(1, 2), Scalar::from_int(1)]
        )
        .is_err());
        assert!(CatalogEntry::from_name("wigner", &[Scalar::from_int(0)]).is_err());
    }

    #[test]
    fn beta_sym_quadrature_matches_known_second_moment() {
        let e = CatalogEntry::BetaSym { s: Scalar::from_int(1) };
        let m = catalog_moments(&e, 4).unwrap();
        assert!(m.0[0].is_zero());
        assert!((m.0[1].to_f64() - 0.5).abs() < 1e-12);
    }
}
