//! Random-matrix realizations of the free convolutions: GUE, Wishart and
//! diagonal models conjugated by Haar unitaries, with seeded Monte Carlo
//! reports against the series predictions.

use std::f64::consts::PI;

use nalgebra::{Complex, DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::CatalogEntry;
use crate::error::{Error, Result};
use crate::freeconv;
use crate::measures::{self, DistSpec};

type CMatrix = DMatrix<Complex<f64>>;

#[derive(Debug, Clone, Serialize)]
pub struct MCReport {
    pub model: String,
    pub dim: usize,
    pub trials: usize,
    pub seed: u64,
    pub orders: usize,
    pub empirical: Vec<f64>,
    pub predicted: Vec<f64>,
    pub stderr: Vec<f64>,
    pub z_scores: Vec<f64>,
}

impl MCReport {
    pub fn max_abs_z(&self) -> f64 {
        self.z_scores.iter().fold(0.0f64, |a, z| a.max(z.abs()))
    }
}

/// A matrix ensemble realizing a spec.
#[derive(Debug, Clone)]
enum Model {
    Gue { mean: f64, var: f64 },
    Wishart { c: f64 },
    Diag(CatalogEntry),
    Negated(Box<Model>),
}

fn model_for(spec: &DistSpec) -> Result<Model> {
    match spec {
        DistSpec::Catalog(CatalogEntry::Wigner { b, a }) => {
            Ok(Model::Gue { mean: b.to_f64(), var: a.to_f64() })
        }
        DistSpec::Catalog(CatalogEntry::MarchenkoPastur { c }) => {
            Ok(Model::Wishart { c: c.to_f64() })
        }
        DistSpec::Catalog(e) if diag_samplable(e) => Ok(Model::Diag(e.clone())),
        DistSpec::Reflected(inner) => Ok(Model::Negated(Box::new(model_for(inner)?))),
        other => Err(Error::ModelUnavailable(format!("{other:?}"))),
    }
}

fn diag_samplable(e: &CatalogEntry) -> bool {
    matches!(
        e,
        CatalogEntry::PointMass { .. }
            | CatalogEntry::BernoulliSym
            | CatalogEntry::ArcsineSym { .. }
            | CatalogEntry::ArcsinePos { .. }
            | CatalogEntry::Gaussian { .. }
            | CatalogEntry::GammaHalf { .. }
    )
}

fn std_normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

fn complex_gaussian(rng: &mut ChaCha8Rng) -> Complex<f64> {
    // E|x|^2 = 1
    Complex::new(std_normal(rng), std_normal(rng)) / 2.0f64.sqrt()
}

/// Hermitian matrix with independent Gaussian entries, `E|h_ij|^2 = var/n`.
fn gue_matrix(n: usize, mean: f64, var: f64, rng: &mut ChaCha8Rng) -> CMatrix {
    let scale = (var / n as f64).sqrt();
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = Complex::new(mean + scale * std_normal(rng), 0.0);
        for j in i + 1..n {
            let z = complex_gaussian(rng) * scale;
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// Complex Wishart `X X* / m` with aspect ratio `c = n/m`.
fn wishart_matrix(n: usize, c: f64, rng: &mut ChaCha8Rng) -> CMatrix {
    let m = ((n as f64 / c).round() as usize).max(1);
    let x = CMatrix::from_fn(n, m, |_, _| complex_gaussian(rng));
    let xh = x.adjoint();
    (&x * xh) / Complex::new(m as f64, 0.0)
}

fn diag_sample(e: &CatalogEntry, rng: &mut ChaCha8Rng) -> f64 {
    match e {
        CatalogEntry::PointMass { x } => x.to_f64(),
        CatalogEntry::BernoulliSym => {
            if rng.gen::<bool>() {
                1.0
            } else {
                -1.0
            }
        }
        CatalogEntry::ArcsineSym { s } => {
            let u: f64 = rng.gen();
            s.to_f64().sqrt() * (PI * (u - 0.5)).sin()
        }
        CatalogEntry::ArcsinePos { s } => {
            let u: f64 = rng.gen();
            s.to_f64() * (PI * u / 2.0).sin().powi(2)
        }
        CatalogEntry::Gaussian { b, a } => b.to_f64() + a.to_f64().sqrt() * std_normal(rng),
        CatalogEntry::GammaHalf { s } => {
            Gamma::new(0.5, s.to_f64()).unwrap().sample(rng)
        }
        _ => unreachable!("guarded by diag_samplable"),
    }
}

fn diag_matrix(e: &CatalogEntry, n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    CMatrix::from_diagonal(&nalgebra::DVector::from_fn(n, |_, _| {
        Complex::new(diag_sample(e, rng), 0.0)
    }))
}

fn realize(model: &Model, n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    match model {
        Model::Gue { mean, var } => gue_matrix(n, *mean, *var, rng),
        Model::Wishart { c } => wishart_matrix(n, *c, rng),
        Model::Diag(e) => diag_matrix(e, n, rng),
        Model::Negated(inner) => -realize(inner, n, rng),
    }
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the
/// diagonal phases of R normalized away.
pub fn haar_unitary(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
    let qr = g.qr();
    let r = qr.r();
    let phases = nalgebra::DVector::from_fn(n, |i, _| {
        let d = r[(i, i)];
        if d.norm() == 0.0 {
            Complex::new(1.0, 0.0)
        } else {
            d / d.norm()
        }
    });
    qr.q() * CMatrix::from_diagonal(&phases)
}

fn eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// Sorted spectrum of a single realization; deterministic in `(spec, n, seed)`.
pub fn sample_spectrum(spec: &DistSpec, n: usize, seed: u64) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::InvalidDimension);
    }
    let model = model_for(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(eigenvalues(&realize(&model, n, &mut rng)))
}

/// Hermitian square root with tiny negative eigenvalues clamped to zero.
fn psd_sqrt(m: &CMatrix) -> Result<CMatrix> {
    let eig = SymmetricEigen::new(m.clone());
    let scale = eig.eigenvalues.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let mut roots = eig.eigenvalues.clone();
    for v in roots.iter_mut() {
        if *v < -1e-10 * scale {
            return Err(Error::NegativeSupport);
        }
        *v = v.max(0.0).sqrt();
    }
    let d = CMatrix::from_diagonal(&roots.map(|v| Complex::new(v, 0.0)));
    Ok(&eig.eigenvectors * d * eig.eigenvectors.adjoint())
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64 + 1);
    rng
}

fn report(
    model: String,
    n: usize,
    trials: usize,
    seed: u64,
    k: usize,
    per_trial: Vec<Vec<f64>>,
    predicted: Vec<f64>,
) -> MCReport {
    let t = trials as f64;
    let mut empirical = vec![0.0; k];
    let mut stderr = vec![0.0; k];
    for j in 0..k {
        let mean = per_trial.iter().map(|m| m[j]).sum::<f64>() / t;
        let var = per_trial.iter().map(|m| (m[j] - mean).powi(2)).sum::<f64>()
            / (t - 1.0).max(1.0);
        empirical[j] = mean;
        stderr[j] = (var / t).sqrt().max(1e-12);
    }
    let z_scores = (0..k).map(|j| (empirical[j] - predicted[j]) / stderr[j]).collect();
    MCReport { model, dim: n, trials, seed, orders: k, empirical, predicted, stderr, z_scores }
}

fn spectral_moments(ev: &[f64], k: usize) -> Vec<f64> {
    let n = ev.len() as f64;
    (1..=k)
        .map(|j| ev.iter().map(|&x| x.powi(j as i32)).sum::<f64>() / n)
        .collect()
}

/// Monte Carlo check of the multiplicative convolution: spectra of
/// `A^{1/2} (U B U*) A^{1/2}` against the `boxtimes` series prediction.
pub fn mc_boxtimes(
    lambda: &DistSpec,
    mu: &DistSpec,
    n: usize,
    trials: usize,
    seed: u64,
    k: usize,
) -> Result<MCReport> {
    if n < 2 || trials == 0 {
        return Err(Error::InvalidDimension);
    }
    let k = k.min(8);
    let model_a = model_for(lambda)?;
    let model_b = model_for(mu)?;
    let predicted = measures::moments_of(&freeconv::boxtimes(lambda, mu, k)?, k)?.to_f64();
    let per_trial: Vec<Vec<f64>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let a = realize(&model_a, n, &mut rng);
            let b = realize(&model_b, n, &mut rng);
            let u = haar_unitary(n, &mut rng);
            let root = psd_sqrt(&a)?;
            let conj = &u * b * u.adjoint();
            let prod = &root * conj * &root;
            Ok(spectral_moments(&eigenvalues(&prod), k))
        })
        .collect::<Result<_>>()?;
    Ok(report(
        format!("boxtimes[{:?} x {:?}]", model_a, model_b),
        n,
        trials,
        seed,
        k,
        per_trial,
        predicted,
    ))
}

/// Monte Carlo check of the additive convolution: spectra of `A + U B U*`.
pub fn mc_boxplus(
    mu: &DistSpec,
    nu: &DistSpec,
    n: usize,
    trials: usize,
    seed: u64,
    k: usize,
) -> Result<MCReport> {
    if n < 2 || trials == 0 {
        return Err(Error::InvalidDimension);
    }
    let k = k.min(8);
    let model_a = model_for(mu)?;
    let model_b = model_for(nu)?;
    let predicted = measures::moments_of(&freeconv::boxplus(mu, nu, k)?, k)?.to_f64();
    let per_trial: Vec<Vec<f64>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let a = realize(&model_a, n, &mut rng);
            let b = realize(&model_b, n, &mut rng);
            let u = haar_unitary(n, &mut rng);
            let sum = &a + &u * b * u.adjoint();
            Ok(spectral_moments(&eigenvalues(&sum), k))
        })
        .collect::<Result<_>>()?;
    Ok(report(
        format!("boxplus[{:?} + {:?}]", model_a, model_b),
        n,
        trials,
        seed,
        k,
        per_trial,
        predicted,
    ))
}
