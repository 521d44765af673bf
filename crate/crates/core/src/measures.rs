//! Distribution specs, Levy triplets and the push-forward maps used by the
//! symmetric/positive correspondence.

use crate::catalog::{self, CatalogEntry};
use crate::combinatorics::{self, MomentSeq};
use crate::error::{Error, Result};
use crate::quad;
use crate::scalar::Scalar;

/// Weighted atoms on the real line; total mass need not be one.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMeasure {
    atoms: Vec<(Scalar, Scalar)>,
}

impl FiniteMeasure {
    pub fn new(atoms: Vec<(Scalar, Scalar)>) -> Result<Self> {
        for (i, (x, w)) in atoms.iter().enumerate() {
            if !w.is_positive() {
                return Err(Error::SpecValidation("atom weights must be positive".into()));
            }
            if atoms[..i].iter().any(|(y, _)| y == x) {
                return Err(Error::SpecValidation("atom locations must be distinct".into()));
            }
        }
        Ok(FiniteMeasure { atoms })
    }

    pub fn point(x: Scalar, w: Scalar) -> Self {
        FiniteMeasure::new(vec![(x, w)]).unwrap()
    }

    pub fn atoms(&self) -> &[(Scalar, Scalar)] {
        &self.atoms
    }

    pub fn total_mass(&self) -> Scalar {
        self.atoms
            .iter()
            .fold(Scalar::from_int(0), |acc, (_, w)| acc + w.clone())
    }

    /// `int x^n d nu` over the atoms.
    pub fn power_integral(&self, n: u32) -> Scalar {
        self.atoms
            .iter()
            .fold(Scalar::from_int(0), |acc, (x, w)| acc + w.clone() * x.pow(n))
    }

    pub fn is_symmetric(&self) -> bool {
        self.atoms.iter().all(|(x, w)| {
            self.atoms
                .iter()
                .any(|(y, v)| (x.clone() + y.clone()).is_zero() && w == v)
        })
    }

    pub fn all_positive_support(&self) -> bool {
        self.atoms.iter().all(|(x, _)| x.is_positive())
    }

    /// Restriction to `(0, infinity)`.
    pub fn restrict_positive(&self) -> FiniteMeasure {
        FiniteMeasure {
            atoms: self
                .atoms
                .iter()
                .filter(|(x, _)| x.is_positive())
                .cloned()
                .collect(),
        }
    }

    /// `int_{0 < |x| <= 1} x dnu`, the small-jump part of the first moment.
    pub fn small_jump_first_moment(&self) -> Scalar {
        self.atoms
            .iter()
            .filter(|(x, _)| !(x.abs() - Scalar::from_int(1)).is_positive())
            .fold(Scalar::from_int(0), |acc, (x, w)| acc + w.clone() * x.clone())
    }

    /// Push-forward under `|x|^p` on atoms, merging coincident images.
    pub fn push_power(&self, p: u32) -> FiniteMeasure {
        let mut out: Vec<(Scalar, Scalar)> = Vec::new();
        for (x, w) in &self.atoms {
            let img = x.abs().pow(p);
            if let Some(slot) = out.iter_mut().find(|(y, _)| *y == img) {
                slot.1 = slot.1.clone() + w.clone();
            } else {
                out.push((img, w.clone()));
            }
        }
        FiniteMeasure { atoms: out }
    }
}

/// The generating triplet `(a, nu, b)` of an infinitely divisible law.
#[derive(Debug, Clone, PartialEq)]
pub struct LevyTriplet {
    pub a: Scalar,
    pub nu: LevyMeasure,
    pub b: Scalar,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LevyMeasure {
    Discrete(FiniteMeasure),
    /// A named density scaled to total mass `mass`.
    Density { mass: Scalar, entry: CatalogEntry },
}

impl LevyTriplet {
    pub fn validate(&self) -> Result<()> {
        if self.a.is_negative() {
            return Err(Error::SpecValidation("semicircle part must be nonnegative".into()));
        }
        if let LevyMeasure::Discrete(nu) = &self.nu {
            if nu.atoms().iter().any(|(x, _)| x.is_zero()) {
                return Err(Error::SpecValidation("Levy measure cannot charge zero".into()));
            }
        }
        Ok(())
    }

    /// Positive-regular check: no semicircle part, nonnegative drift in
    /// the non-truncated representation, Levy measure in `(0, infinity)`.
    pub fn is_regular_positive(&self) -> bool {
        let (nu_pos, drift) = match &self.nu {
            LevyMeasure::Discrete(nu) => (
                nu.all_positive_support(),
                self.b.clone() - nu.small_jump_first_moment(),
            ),
            LevyMeasure::Density { entry, .. } => (entry.is_positive_type(), self.b.clone()),
        };
        self.a.is_zero() && !drift.is_negative() && nu_pos
    }

    /// Cumulants of the law with this generating triplet:
    /// `k_1 = b + int_{|x|>1} x dnu`, `k_2 = a + int x^2 dnu`,
    /// `k_n = int x^n dnu` for `n >= 3`.
    pub fn cumulants(&self, n: usize) -> Result<Vec<Scalar>> {
        self.validate()?;
        let mut kappa = Vec::with_capacity(n);
        for order in 1..=n {
            let v = match order {
                1 => self.b.clone() + self.nu_tail_first_moment()?,
                2 => self.a.clone() + self.nu_power_integral(2)?,
                k => self.nu_power_integral(k as u32)?,
            };
            kappa.push(v);
        }
        Ok(kappa)
    }

    fn nu_power_integral(&self, p: u32) -> Result<Scalar> {
        match &self.nu {
            LevyMeasure::Discrete(nu) => Ok(nu.power_integral(p)),
            LevyMeasure::Density { mass, entry } => {
                let m = catalog::catalog_moments(entry, p as usize)?;
                Ok(mass.clone() * m.get(p as usize))
            }
        }
    }

    /// `int_{|x|>1} x dnu`, the compensator part of the first cumulant.
    fn nu_tail_first_moment(&self) -> Result<Scalar> {
        match &self.nu {
            LevyMeasure::Discrete(nu) => Ok(nu
                .atoms()
                .iter()
                .filter(|(x, _)| (x.abs() - Scalar::from_int(1)).is_positive())
                .fold(Scalar::from_int(0), |acc, (x, w)| acc + w.clone() * x.clone())),
            LevyMeasure::Density { mass, entry } => {
                let hi = density_support_bound(entry);
                let f = |x: f64| x * catalog::catalog_density(entry, x).unwrap_or(0.0);
                let mut v = 0.0;
                if hi > 1.0 {
                    v += quad::integrate(f, 1.0, hi, 128);
                    v -= quad::integrate(f, -hi, -1.0, 128);
                }
                Ok(Scalar::Float(mass.to_f64() * v))
            }
        }
    }
}

/// A practical truncation radius for the catalog densities with tails.
fn density_support_bound(e: &CatalogEntry) -> f64 {
    match e {
        CatalogEntry::Wigner { b, a } => b.to_f64().abs() + 2.0 * a.to_f64().sqrt(),
        CatalogEntry::MarchenkoPastur { c } => (1.0 + c.to_f64().sqrt()).powi(2),
        CatalogEntry::ArcsineSym { s } => s.to_f64().sqrt(),
        CatalogEntry::ArcsinePos { s } | CatalogEntry::BetaSym { s } => 2.0 * s.to_f64().sqrt(),
        CatalogEntry::Gaussian { b, a } => b.to_f64().abs() + 40.0 * a.to_f64().sqrt(),
        CatalogEntry::GammaHalf { s } => 200.0 * s.to_f64(),
        _ => 0.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdFlavor {
    Free,
    Classical,
}

/// A distribution description; everything the pipeline consumes.
#[derive(Debug, Clone, PartialEq)]
pub enum DistSpec {
    Moments(MomentSeq),
    Catalog(CatalogEntry),
    /// The symmetric measure whose even-moment push-forward is `carrier`.
    SymmetricCarrier(Box<DistSpec>),
    Triplet { triplet: LevyTriplet, flavor: IdFlavor },
    /// The dual measure `B -> mu(-B)`: moments pick up a sign `(-1)^n`.
    Reflected(Box<DistSpec>),
    /// Lazy push-forward under `|x|^p`.
    PushPower { of: Box<DistSpec>, p: u32 },
}

impl DistSpec {
    pub fn moments(m: Vec<Scalar>) -> DistSpec {
        DistSpec::Moments(MomentSeq(m))
    }

    pub fn catalog(e: CatalogEntry) -> DistSpec {
        DistSpec::Catalog(e)
    }

    pub fn symmetric_from_carrier(carrier: DistSpec) -> DistSpec {
        DistSpec::SymmetricCarrier(Box::new(carrier))
    }

    pub fn reflect(self) -> DistSpec {
        DistSpec::Reflected(Box::new(self))
    }

    /// Largest order for which moments exist, if bounded.
    pub fn intrinsic_limit(&self) -> Option<usize> {
        match self {
            DistSpec::Moments(m) => Some(m.order()),
            DistSpec::Catalog(_) | DistSpec::Triplet { .. } => None,
            DistSpec::SymmetricCarrier(c) => c.intrinsic_limit().map(|l| 2 * l + 1),
            DistSpec::Reflected(inner) => inner.intrinsic_limit(),
            DistSpec::PushPower { of, p } => of.intrinsic_limit().map(|l| l / *p as usize),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        match self {
            DistSpec::Moments(m) => m.0.iter().step_by(2).all(|x| x.is_zero()),
            DistSpec::Catalog(e) => e.is_symmetric(),
            DistSpec::SymmetricCarrier(_) => true,
            DistSpec::Triplet { triplet, .. } => {
                triplet.b.is_zero()
                    && match &triplet.nu {
                        LevyMeasure::Discrete(nu) => nu.is_symmetric(),
                        LevyMeasure::Density { entry, .. } => entry.is_symmetric(),
                    }
            }
            DistSpec::Reflected(inner) => inner.is_symmetric(),
            DistSpec::PushPower { of, .. } => {
                // a push-forward under |x|^p is symmetric only when degenerate at 0
                matches!(
                    of.as_ref(),
                    DistSpec::Catalog(CatalogEntry::PointMass { x }) if x.is_zero()
                )
            }
        }
    }

    /// The carrier of `mu^(2)` for a symmetric spec.
    pub fn symmetric_carrier(&self, n: usize) -> Result<DistSpec> {
        if !self.is_symmetric() {
            return Err(Error::AsymmetricInput);
        }
        if let DistSpec::SymmetricCarrier(c) = self {
            return Ok((**c).clone());
        }
        Ok(push_power(self, 2, n)?)
    }
}

/// Moments `m_1..m_N` of a spec.
pub fn moments_of(mu: &DistSpec, n: usize) -> Result<MomentSeq> {
    assert!(n >= 1);
    if let Some(limit) = mu.intrinsic_limit() {
        if n > limit {
            return Err(Error::UnsupportedOrder(n));
        }
    }
    let m = match mu {
        DistSpec::Moments(m) => m.truncate(n),
        DistSpec::Catalog(e) => catalog::catalog_moments(e, n)?,
        DistSpec::SymmetricCarrier(c) => {
            let inner = moments_of(c, n.div_ceil(2).max(1))?;
            MomentSeq(
                (1..=n)
                    .map(|k| if k % 2 == 0 { inner.get(k / 2) } else { Scalar::from_int(0) })
                    .collect(),
            )
        }
        DistSpec::Triplet { triplet, flavor } => {
            let kappa = triplet.cumulants(n)?;
            let m = match flavor {
                IdFlavor::Free => combinatorics::moments_from_free_cumulants(&kappa),
                IdFlavor::Classical => combinatorics::moments_from_classical_cumulants(&kappa),
            };
            MomentSeq(m)
        }
        DistSpec::Reflected(inner) => {
            let m = moments_of(inner, n)?;
            MomentSeq(
                m.0.iter()
                    .enumerate()
                    .map(|(i, x)| if i % 2 == 0 { -x.clone() } else { x.clone() })
                    .collect(),
            )
        }
        DistSpec::PushPower { of, p } => {
            let inner = moments_of(of, n * *p as usize)?;
            MomentSeq((1..=n).map(|k| inner.get(k * *p as usize)).collect())
        }
    };
    Ok(m)
}

/// Push-forward under `|x|^p` for positive even `p`.
pub fn push_power(mu: &DistSpec, p: u32, n: usize) -> Result<DistSpec> {
    if p == 0 || p % 2 != 0 {
        return Err(Error::SpecValidation("push power must be a positive even integer".into()));
    }
    if let DistSpec::SymmetricCarrier(c) = mu {
        if p == 2 {
            return Ok((**c).clone());
        }
    }
    if let Some(limit) = mu.intrinsic_limit() {
        if n * p as usize > limit {
            return Err(Error::InsufficientOrder);
        }
    }
    let m = moments_of(mu, n * p as usize)?;
    Ok(DistSpec::moments((1..=n).map(|k| m.get(k * p as usize)).collect()))
}

/// Split `nu` on `(0, infinity)` into its images under `sqrt(x)` and `-sqrt(x)`.
pub fn push_sqrt_split(nu: &FiniteMeasure) -> Result<(FiniteMeasure, FiniteMeasure)> {
    if !nu.all_positive_support() {
        return Err(Error::NegativeSupport);
    }
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for (x, w) in nu.atoms() {
        let root = x.sqrt_positive()?;
        plus.push((root.clone(), w.clone()));
        minus.push((-root, w.clone()));
    }
    Ok((FiniteMeasure { atoms: plus }, FiniteMeasure { atoms: minus }))
}

/// The symmetrization `(nu^(1/2)+ + nu^(1/2)-)/2` of a measure on `(0, infinity)`.
pub fn symmetrize_levy(nu: &FiniteMeasure) -> Result<FiniteMeasure> {
    let (plus, minus) = push_sqrt_split(nu)?;
    let half = Scalar::ratio(1, 2);
    let mut atoms = Vec::new();
    for (x, w) in plus.atoms().iter().chain(minus.atoms()) {
        atoms.push((x.clone(), half.clone() * w.clone()));
    }
    Ok(FiniteMeasure { atoms })
}

/// Density of `nu^(1/2)+` from a density of `nu`: `x -> 2 x h(x^2)` for `x > 0`.
pub fn density_sqrt_push<F>(h: F) -> impl Fn(f64) -> f64
where
    F: Fn(f64) -> f64,
{
    move |x: f64| if x > 0.0 { 2.0 * x * h(x * x) } else { 0.0 }
}
