//! Free additive and multiplicative convolutions, the Bercovici-Pata
//! bijection, free compound Poisson laws, and the symmetric/positive
//! correspondence between Levy data.

use crate::catalog::{self, CatalogEntry};
use crate::classify;
use crate::combinatorics::{
    classical_cumulants_from_moments, free_cumulants_from_moments, moments_from_free_cumulants,
};
use crate::error::{Error, Result};
use crate::measures::{self, DistSpec, FiniteMeasure, LevyMeasure, LevyTriplet};
use crate::scalar::Scalar;
use crate::transforms;

/// Free cumulants `k_1..k_N` of a spec.
pub fn free_cumulants_of(mu: &DistSpec, n: usize) -> Result<Vec<Scalar>> {
    if let DistSpec::Catalog(e) = mu {
        return Ok(catalog::catalog_free_cumulants(e, n)?.0);
    }
    let m = measures::moments_of(mu, n)?;
    Ok(free_cumulants_from_moments(m.as_slice()))
}

/// Free additive convolution: free cumulants add.
pub fn boxplus(mu: &DistSpec, nu: &DistSpec, n: usize) -> Result<DistSpec> {
    let a = free_cumulants_of(mu, n)?;
    let b = free_cumulants_of(nu, n)?;
    let sum: Vec<Scalar> = a.into_iter().zip(b).map(|(x, y)| x + y).collect();
    Ok(DistSpec::moments(moments_from_free_cumulants(&sum)))
}

/// The `c`-fold free additive convolution power: cumulants scale by `c`.
/// For `c < 1` this only exists for freely infinitely divisible laws, so
/// the free-ID screen must not reject `mu`.
pub fn boxplus_power(mu: &DistSpec, c: &Scalar, n: usize) -> Result<DistSpec> {
    if !c.is_positive() {
        return Err(Error::InvalidExponent(c.to_f64()));
    }
    if (Scalar::from_int(1) - c.clone()).is_positive() {
        let v = classify::free_id_test(mu, n)?;
        if v.is_rejected() {
            return Err(Error::InvalidExponent(c.to_f64()));
        }
    }
    let kappa: Vec<Scalar> = free_cumulants_of(mu, n)?
        .into_iter()
        .map(|k| c.clone() * k)
        .collect();
    Ok(DistSpec::moments(moments_from_free_cumulants(&kappa)))
}

/// Free multiplicative convolution of two laws with positive mean:
/// S-transforms multiply.
pub fn boxtimes_pos(mu: &DistSpec, nu: &DistSpec, n: usize) -> Result<DistSpec> {
    let ma = measures::moments_of(mu, n)?;
    let mb = measures::moments_of(nu, n)?;
    let sa = transforms::s_from_moments(ma.as_slice())?;
    let sb = transforms::s_from_moments(mb.as_slice())?;
    Ok(DistSpec::moments(transforms::moments_from_s(&sa.mul(&sb))?))
}

/// Free multiplicative convolution of a positive-mean law with a
/// symmetric one; the result is the symmetric law with carrier
/// `lambda (x) mu^(2) (x) lambda`.
pub fn boxtimes_sym(lambda: &DistSpec, mu: &DistSpec, n: usize) -> Result<DistSpec> {
    if !mu.is_symmetric() {
        return Err(Error::AsymmetricInput);
    }
    let half = n.div_ceil(2).max(1);
    let carrier = mu.symmetric_carrier(half)?;
    let once = boxtimes_pos(lambda, &carrier, half)?;
    let carrier = boxtimes_pos(&once, lambda, half)?;
    Ok(DistSpec::symmetric_from_carrier(carrier))
}

/// `boxtimes_pos`/`boxtimes_sym` dispatch on the symmetry of the inputs.
pub fn boxtimes(mu: &DistSpec, nu: &DistSpec, n: usize) -> Result<DistSpec> {
    match (mu.is_symmetric(), nu.is_symmetric()) {
        (false, false) => boxtimes_pos(mu, nu, n),
        (false, true) => boxtimes_sym(mu, nu, n),
        (true, false) => boxtimes_sym(nu, mu, n),
        (true, true) => Err(Error::DoubleHalfPower),
    }
}

/// Free compound Poisson law with rate `c` and jump distribution `sigma`:
/// free cumulants `k_n = c * m_n(sigma)`.
pub fn compound_poisson(c: &Scalar, sigma: &DistSpec, n: usize) -> Result<DistSpec> {
    if !c.is_positive() {
        return Err(Error::InvalidParams("compound Poisson rate must be positive".into()));
    }
    let m = measures::moments_of(sigma, n)?;
    let kappa: Vec<Scalar> = m.0.iter().map(|x| c.clone() * x.clone()).collect();
    Ok(DistSpec::moments(moments_from_free_cumulants(&kappa)))
}

/// The Bercovici-Pata bijection at cumulant level: the classical
/// cumulants of `mu` become the free cumulants of the image.
pub fn bp_lambda(mu_classical: &DistSpec, n: usize) -> Result<DistSpec> {
    let m = measures::moments_of(mu_classical, n)?;
    let c = classical_cumulants_from_moments(m.as_slice());
    Ok(DistSpec::moments(moments_from_free_cumulants(&c)))
}

/// The symmetric law `mu` with `k_{2n}(mu) = k_n(sigma)` and vanishing odd
/// cumulants, returned through its carrier; `sigma` must not fail the
/// free-regular screen.
pub fn main1_pos_to_sym(sigma: &DistSpec, n: usize) -> Result<DistSpec> {
    let half = n.div_ceil(2).max(1);
    let mut screen = half.max(4);
    if let Some(limit) = sigma.intrinsic_limit() {
        screen = screen.min(limit);
    }
    if classify::free_regular_test(sigma, screen)?.is_rejected() {
        return Err(Error::InvalidParams(
            "mixing law rejected by the free-regular screen".into(),
        ));
    }
    let ks = free_cumulants_of(sigma, half)?;
    let mut kappa = Vec::with_capacity(2 * half);
    for k in ks {
        kappa.push(Scalar::from_int(0));
        kappa.push(k);
    }
    let m = moments_from_free_cumulants(&kappa);
    let carrier: Vec<Scalar> = (1..=half).map(|k| m[2 * k - 1].clone()).collect();
    Ok(DistSpec::symmetric_from_carrier(DistSpec::moments(carrier)))
}

/// Inverse of [`main1_pos_to_sym`]: reads off `k_n(sigma) = k_{2n}(mu)`.
pub fn main1_sym_to_pos(mu: &DistSpec, n: usize) -> Result<DistSpec> {
    if !mu.is_symmetric() {
        return Err(Error::AsymmetricInput);
    }
    let kappa = free_cumulants_of(mu, 2 * n)?;
    let ks: Vec<Scalar> = (1..=n).map(|k| kappa[2 * k - 1].clone()).collect();
    Ok(DistSpec::moments(moments_from_free_cumulants(&ks)))
}

/// Levy-data form of the positive-to-symmetric map: the non-truncated
/// drift of `sigma` becomes the semicircle part of `mu`, and the Levy
/// measure is symmetrized under the square-root splitting.
pub fn main1_triplet_pos_to_sym(sigma: &LevyTriplet) -> Result<LevyTriplet> {
    sigma.validate()?;
    if !sigma.is_regular_positive() {
        return Err(Error::NegativeSupport);
    }
    let (nu, drift) = match &sigma.nu {
        LevyMeasure::Discrete(nu) => (
            measures::symmetrize_levy(nu)?,
            sigma.b.clone() - nu.small_jump_first_moment(),
        ),
        LevyMeasure::Density { .. } => {
            return Err(Error::ModelUnavailable("density Levy measures".into()))
        }
    };
    Ok(LevyTriplet { a: drift, nu: LevyMeasure::Discrete(nu), b: Scalar::from_int(0) })
}

/// Levy-data form of the symmetric-to-positive map:
/// `nu_sigma = 2 (nu_mu restricted to (0, infinity))^(2)` and the
/// semicircle part of `mu` returns as the drift of `sigma` (re-truncated).
pub fn main1_triplet_sym_to_pos(mu: &LevyTriplet) -> Result<LevyTriplet> {
    mu.validate()?;
    let nu = match &mu.nu {
        LevyMeasure::Discrete(nu) if nu.is_symmetric() && mu.b.is_zero() => nu,
        LevyMeasure::Discrete(_) => return Err(Error::AsymmetricInput),
        LevyMeasure::Density { .. } => {
            return Err(Error::ModelUnavailable("density Levy measures".into()))
        }
    };
    let pushed = nu.restrict_positive().push_power(2);
    let doubled: Vec<(Scalar, Scalar)> = pushed
        .atoms()
        .iter()
        .map(|(x, w)| (x.clone(), Scalar::from_int(2) * w.clone()))
        .collect();
    let nu_sigma = FiniteMeasure::new(doubled)?;
    let b = mu.a.clone() + nu_sigma.small_jump_first_moment();
    Ok(LevyTriplet { a: Scalar::from_int(0), nu: LevyMeasure::Discrete(nu_sigma), b })
}

/// The type-G construction from a finite mixing measure on the scale
/// parameter: `k_n(sigma) = sum_i w_i m_n(gamma_half(s_i))`, with the
/// symmetric companion obtained through the positive-to-symmetric map.
pub fn type_g_from_mixing(rho: &FiniteMeasure, n: usize) -> Result<(DistSpec, DistSpec)> {
    let mut kappa = vec![Scalar::from_int(0); n];
    for (s, w) in rho.atoms() {
        if !s.is_positive() {
            return Err(Error::NegativeScale);
        }
        let m = catalog::catalog_moments(&CatalogEntry::GammaHalf { s: s.clone() }, n)?;
        for (k, slot) in kappa.iter_mut().enumerate() {
            *slot = slot.clone() + w.clone() * m.get(k + 1);
        }
    }
    let sigma = DistSpec::moments(moments_from_free_cumulants(&kappa));
    let mu = main1_pos_to_sym(&sigma, 2 * n)?;
    Ok((sigma, mu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::moments_of;

    fn int(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn rat(p: i64, q: i64) -> Scalar {
        Scalar::ratio(p, q)
    }

    fn cat(e: CatalogEntry) -> DistSpec {
        DistSpec::catalog(e)
    }

    fn mp(c: Scalar) -> DistSpec {
        cat(CatalogEntry::MarchenkoPastur { c })
    }

    #[test]
    fn boxplus_delta_zero_is_neutral() {
        let mu = mp(rat(3, 2));
        let sum = boxplus(&mu, &cat(CatalogEntry::PointMass { x: int(0) }), 8).unwrap();
        assert_eq!(moments_of(&sum, 8).unwrap(), moments_of(&mu, 8).unwrap());
    }

    #[test]
    fn boxplus_mp_with_its_dual() {
        // m_c + reflect(m_c): cumulants (0, 2c, 0, 2c, ...)
        let c = rat(3, 4);
        let mu = mp(c.clone());
        let sum = boxplus(&mu, &mu.clone().reflect(), 12).unwrap();
        let kappa = free_cumulants_of(&sum, 12).unwrap();
        for (i, k) in kappa.iter().enumerate() {
            let expect = if i % 2 == 1 { int(2) * c.clone() } else { int(0) };
            assert_eq!(*k, expect);
        }
    }

    #[test]
    fn bernoulli_boxplus_square_is_arcsine() {
        let d = cat(CatalogEntry::BernoulliSym);
        let sum = boxplus(&d, &d, 8).unwrap();
        let a4 = cat(CatalogEntry::ArcsineSym { s: int(4) });
        assert_eq!(moments_of(&sum, 8).unwrap(), moments_of(&a4, 8).unwrap());
    }

    #[test]
    fn boxplus_power_scales_cumulants() {
        let m = mp(int(1));
        let mc = boxplus_power(&m, &rat(5, 2), 8).unwrap();
        assert_eq!(
            moments_of(&mc, 8).unwrap(),
            moments_of(&mp(rat(5, 2)), 8).unwrap()
        );
        let back = boxplus_power(&mp(rat(5, 2)), &rat(2, 5), 8).unwrap();
        assert_eq!(moments_of(&back, 8).unwrap(), moments_of(&m, 8).unwrap());
    }

    #[test]
    fn boxplus_power_gates_fractional_exponents() {
        // mlotkowski(3/2,1) is not freely infinitely divisible
        let bad = cat(CatalogEntry::Mlotkowski { p: rat(3, 2), r: int(1) });
        assert!(matches!(
            boxplus_power(&bad, &rat(1, 2), 8),
            Err(Error::InvalidExponent(_))
        ));
        // but whole powers are fine
        assert!(boxplus_power(&bad, &int(2), 8).is_ok());
    }

    #[test]
    fn compound_poisson_recovers_power_identity() {
        // (free compound Poisson (c, sigma))^{1/c} = m boxtimes sigma
        let c = int(3);
        let sigma = cat(CatalogEntry::ArcsinePos { s: int(1) });
        let cp = compound_poisson(&c, &sigma, 10).unwrap();
        let root = boxplus_power(&cp, &rat(1, 3), 10).unwrap();
        let direct = boxtimes_pos(&mp(int(1)), &sigma, 10).unwrap();
        assert_eq!(moments_of(&root, 10).unwrap(), moments_of(&direct, 10).unwrap());
    }

    #[test]
    fn mlotkowski_square_is_free_poisson() {
        let s = cat(CatalogEntry::Mlotkowski { p: rat(3, 2), r: int(1) });
        let prod = boxtimes_pos(&s, &s, 12).unwrap();
        assert_eq!(moments_of(&prod, 12).unwrap(), moments_of(&mp(int(1)), 12).unwrap());
    }

    #[test]
    fn boxtimes_point_mass_is_neutral() {
        let mu = mp(rat(1, 2));
        let prod = boxtimes_pos(&mu, &cat(CatalogEntry::PointMass { x: int(1) }), 9).unwrap();
        assert_eq!(moments_of(&prod, 9).unwrap(), moments_of(&mu, 9).unwrap());
    }

    #[test]
    fn boxtimes_sym_arcsine_with_free_poisson_is_beta() {
        let b1 = cat(CatalogEntry::BetaSym { s: int(1) });
        let prod = boxtimes_sym(&mp(int(1)), &cat(CatalogEntry::ArcsineSym { s: int(1) }), 12)
            .unwrap();
        let got = moments_of(&prod, 12).unwrap();
        assert!(got.approx_eq(&moments_of(&b1, 12).unwrap(), 1e-9));
    }

    #[test]
    fn boxtimes_dispatch_rejects_two_symmetric_factors() {
        let w = cat(CatalogEntry::Wigner { b: int(0), a: int(1) });
        assert_eq!(boxtimes(&w, &w, 8).err(), Some(Error::DoubleHalfPower));
    }

    #[test]
    fn bp_lambda_on_gaussian_and_poisson() {
        let g = cat(CatalogEntry::Gaussian { b: int(0), a: int(1) });
        let img = bp_lambda(&g, 10).unwrap();
        let w = cat(CatalogEntry::Wigner { b: int(0), a: int(1) });
        assert_eq!(moments_of(&img, 10).unwrap(), moments_of(&w, 10).unwrap());

        let p = cat(CatalogEntry::PoissonClassical { c: rat(1, 2) });
        let img = bp_lambda(&p, 10).unwrap();
        assert_eq!(moments_of(&img, 10).unwrap(), moments_of(&mp(rat(1, 2)), 10).unwrap());
    }

    #[test]
    fn main1_point_mass_gives_wigner() {
        let sigma = cat(CatalogEntry::PointMass { x: int(1) });
        let mu = main1_pos_to_sym(&sigma, 12).unwrap();
        let w = cat(CatalogEntry::Wigner { b: int(0), a: int(1) });
        assert_eq!(moments_of(&mu, 12).unwrap(), moments_of(&w, 12).unwrap());
    }

    #[test]
    fn main1_round_trip() {
        let sigma = mp(rat(4, 3));
        let mu = main1_pos_to_sym(&sigma, 16).unwrap();
        let back = main1_sym_to_pos(&mu, 8).unwrap();
        assert_eq!(moments_of(&back, 8).unwrap(), moments_of(&sigma, 8).unwrap());
    }

    #[test]
    fn main1_carrier_is_sigma_boxtimes_free_poisson() {
        // S_sigma(z) = z S_mu^2(z) gives mu^(2) = sigma boxtimes m
        let sigma = mp(int(1));
        let mu = main1_pos_to_sym(&sigma, 12).unwrap();
        let carrier = mu.symmetric_carrier(6).unwrap();
        let expect = boxtimes_pos(&sigma, &mp(int(1)), 6).unwrap();
        assert_eq!(moments_of(&carrier, 6).unwrap(), moments_of(&expect, 6).unwrap());
    }

    #[test]
    fn main1_triplet_maps_invert() {
        let nu = FiniteMeasure::new(vec![(int(4), rat(1, 3)), (rat(1, 4), int(2))]).unwrap();
        let sigma = LevyTriplet {
            a: int(0),
            nu: LevyMeasure::Discrete(nu),
            b: rat(7, 2),
        };
        let mu = main1_triplet_pos_to_sym(&sigma).unwrap();
        // drift 7/2 loses the small-jump compensator 2 * 1/4
        assert_eq!(mu.a, int(3));
        assert!(mu.b.is_zero());
        let back = main1_triplet_sym_to_pos(&mu).unwrap();
        assert_eq!(back, sigma);
    }

    #[test]
    fn main1_triplet_cumulants_match_moment_level_map() {
        let nu = FiniteMeasure::new(vec![(int(1), rat(1, 2)), (int(2), rat(1, 5))]).unwrap();
        let sigma = LevyTriplet { a: int(0), nu: LevyMeasure::Discrete(nu), b: int(1) };
        let mu_triplet = main1_triplet_pos_to_sym(&sigma).unwrap();
        let sig_spec = DistSpec::Triplet {
            triplet: sigma,
            flavor: crate::measures::IdFlavor::Free,
        };
        let mu_spec = DistSpec::Triplet {
            triplet: mu_triplet,
            flavor: crate::measures::IdFlavor::Free,
        };
        let via_cumulants = main1_pos_to_sym(&sig_spec, 12).unwrap();
        // the sqrt(2) atom forces float moments on the triplet side
        assert!(moments_of(&mu_spec, 12)
            .unwrap()
            .approx_eq(&moments_of(&via_cumulants, 12).unwrap(), 1e-9));
    }

    #[test]
    fn type_g_point_mixing() {
        let rho = FiniteMeasure::point(int(1), int(1));
        let (sigma, mu) = type_g_from_mixing(&rho, 6).unwrap();
        // kappa_n(sigma) = (2n-1)!!/2^n: 1/2, 3/4, 15/8, 105/16, ...
        let kappa = free_cumulants_of(&sigma, 4).unwrap();
        assert_eq!(kappa, vec![rat(1, 2), rat(3, 4), rat(15, 8), rat(105, 16)]);
        assert!(mu.is_symmetric());
        // lambda-image identity: sigma = m boxtimes gamma_1 at cumulant level
        let direct =
            compound_poisson(&int(1), &cat(CatalogEntry::GammaHalf { s: int(1) }), 6).unwrap();
        assert_eq!(moments_of(&sigma, 6).unwrap(), moments_of(&direct, 6).unwrap());
    }

    #[test]
    fn type_g_is_linear_in_mixing_measure() {
        let rho1 = FiniteMeasure::point(int(1), int(2));
        let (sigma2, _) = type_g_from_mixing(&rho1, 5).unwrap();
        let (sigma1, _) = type_g_from_mixing(&FiniteMeasure::point(int(1), int(1)), 5).unwrap();
        let k1 = free_cumulants_of(&sigma1, 5).unwrap();
        let k2 = free_cumulants_of(&sigma2, 5).unwrap();
        for (a, b) in k1.iter().zip(&k2) {
            assert_eq!(int(2) * a.clone(), b.clone());
        }
    }

    #[test]
    fn type_g_rejects_nonpositive_scales() {
        let rho = FiniteMeasure::point(int(-1), int(1));
        assert_eq!(type_g_from_mixing(&rho, 4).err(), Some(Error::NegativeScale));
    }
}
