//! Finite-order classification tests: Hankel positivity screens and the
//! derived free-ID / free-regular / divisibility / mixture procedures.
//!
//! Every test returns either `Rejected` with a recomputable witness or
//! `Inconclusive`; membership is never asserted, since all checks are
//! necessary conditions at finite order.

use num_rational::BigRational;
use serde::Serialize;

use crate::combinatorics::MomentSeq;
use crate::error::{Error, Result};
use crate::freeconv;
use crate::measures::{self, DistSpec};
use crate::scalar::Scalar;
use crate::series::TruncatedSeries;
use crate::transforms::{self, Monotonicity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Rejected,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub witness: String,
    pub tested_order: usize,
    /// Constructive candidate moments for the Inconclusive side of the
    /// divisibility tests; not part of the serialized surface.
    #[serde(skip)]
    pub candidate: Option<MomentSeq>,
}

impl Verdict {
    pub fn rejected(witness: impl Into<String>, tested_order: usize) -> Verdict {
        Verdict { outcome: Outcome::Rejected, witness: witness.into(), tested_order, candidate: None }
    }

    pub fn inconclusive(witness: impl Into<String>, tested_order: usize) -> Verdict {
        Verdict {
            outcome: Outcome::Inconclusive,
            witness: witness.into(),
            tested_order,
            candidate: None,
        }
    }

    pub fn is_rejected(&self) -> bool {
        self.outcome == Outcome::Rejected
    }

    fn with_candidate(mut self, candidate: MomentSeq) -> Verdict {
        self.candidate = Some(candidate);
        self
    }

    fn with_order(mut self, tested_order: usize) -> Verdict {
        self.tested_order = tested_order;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HankelMode {
    Hamburger,
    Stieltjes,
}

/// PSD screen on a moment sequence starting at `m_0`.  Exact input uses
/// exact determinant signs; float input uses `tol` (default
/// `1e-9 * max-abs` of the sequence).
pub fn hankel_psd(seq: &[Scalar], mode: HankelMode, tol: Option<f64>) -> Result<Verdict> {
    if seq.len() < 3 {
        return Err(Error::TooShort);
    }
    let order = seq.len() - 1;
    if seq.iter().all(|x| x.is_exact()) {
        let q: Vec<BigRational> = seq
            .iter()
            .map(|x| match x {
                Scalar::Exact(r) => r.clone(),
                Scalar::Float(_) => unreachable!(),
            })
            .collect();
        match scan_exact(&q, mode) {
            Scan::Violated(desc) => Ok(Verdict::rejected(desc, order)),
            Scan::Boundary(desc) => Ok(Verdict::inconclusive(desc, order)),
            Scan::Clean => Ok(Verdict::inconclusive(
                format!("all Hankel minors nonnegative through order {order}"),
                order,
            )),
        }
    } else {
        let f: Vec<f64> = seq.iter().map(|x| x.to_f64()).collect();
        let scale = f.iter().fold(1.0f64, |a, x| a.max(x.abs()));
        let tol = tol.unwrap_or(1e-9 * scale);
        match scan_float(&f, mode, tol) {
            Scan::Violated(desc) => Ok(Verdict::rejected(desc, order)),
            Scan::Boundary(desc) => Ok(Verdict::inconclusive(desc, order)),
            Scan::Clean => Ok(Verdict::inconclusive(
                format!("all Hankel minors nonnegative through order {order}"),
                order,
            )),
        }
    }
}

enum Scan {
    Violated(String),
    Boundary(String),
    Clean,
}

/// Walk the leading minors of one offset family.  A strictly negative
/// determinant is a violation; a zero determinant ends the family at the
/// PSD boundary (Sylvester's criterion says nothing past it).
fn scan_family<D>(seq_len: usize, off: usize, det: D) -> Scan
where
    D: Fn(usize) -> (std::cmp::Ordering, String),
{
    let mut k = 1;
    while 2 * k + off < seq_len {
        let (sign, value) = det(k + 1);
        match sign {
            std::cmp::Ordering::Less => {
                return Scan::Violated(format!(
                    "{}x{} Hankel minor (offset {off}) = {value} < 0",
                    k + 1,
                    k + 1
                ));
            }
            std::cmp::Ordering::Equal => {
                return Scan::Boundary(format!(
                    "{}x{} Hankel minor (offset {off}) at the PSD boundary",
                    k + 1,
                    k + 1
                ));
            }
            std::cmp::Ordering::Greater => k += 1,
        }
    }
    Scan::Clean
}

fn combine(families: impl IntoIterator<Item = Scan>) -> Scan {
    let mut boundary = None;
    for scan in families {
        match scan {
            Scan::Violated(w) => return Scan::Violated(w),
            Scan::Boundary(w) => boundary = Some(w),
            Scan::Clean => {}
        }
    }
    match boundary {
        Some(w) => Scan::Boundary(w),
        None => Scan::Clean,
    }
}

fn offsets(mode: HankelMode) -> &'static [usize] {
    match mode {
        HankelMode::Hamburger => &[0],
        HankelMode::Stieltjes => &[0, 1],
    }
}

fn scan_exact(seq: &[BigRational], mode: HankelMode) -> Scan {
    let zero = BigRational::from_integer(0.into());
    combine(offsets(mode).iter().map(|&off| {
        scan_family(seq.len(), off, |size| {
            let d = det_exact(seq, off, size);
            (d.cmp(&zero), Scalar::Exact(d).to_string())
        })
    }))
}

fn scan_float(seq: &[f64], mode: HankelMode, tol: f64) -> Scan {
    combine(offsets(mode).iter().map(|&off| {
        scan_family(seq.len(), off, |size| {
            let d = det_float(seq, off, size);
            let sign = if d < -tol {
                std::cmp::Ordering::Less
            } else if d <= tol {
                std::cmp::Ordering::Equal
            } else {
                std::cmp::Ordering::Greater
            };
            (sign, Scalar::Float(d).to_string())
        })
    }))
}

/// Determinant of the `size x size` Hankel matrix `(seq[i+j+offset])`.
fn det_exact(seq: &[BigRational], offset: usize, size: usize) -> BigRational {
    let mut m: Vec<Vec<BigRational>> = (0..size)
        .map(|i| (0..size).map(|j| seq[i + j + offset].clone()).collect())
        .collect();
    let zero = BigRational::from_integer(0.into());
    let mut det = BigRational::from_integer(1.into());
    for col in 0..size {
        let pivot = (col..size).find(|&r| m[r][col] != zero);
        let Some(p) = pivot else { return zero };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        det *= m[col][col].clone();
        for r in col + 1..size {
            let factor = &m[r][col] / &m[col][col];
            for c in col..size {
                let sub = &factor * &m[col][c];
                m[r][c] -= sub;
            }
        }
    }
    det
}

fn det_float(seq: &[f64], offset: usize, size: usize) -> f64 {
    let mut m: Vec<Vec<f64>> = (0..size)
        .map(|i| (0..size).map(|j| seq[i + j + offset]).collect())
        .collect();
    let mut det = 1.0;
    for col in 0..size {
        let p = (col..size)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap();
        if m[p][col] == 0.0 {
            return 0.0;
        }
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        det *= m[col][col];
        for r in col + 1..size {
            let factor = m[r][col] / m[col][col];
            for c in col..size {
                m[r][c] -= factor * m[col][c];
            }
        }
    }
    det
}

/// Necessary condition for free infinite divisibility: the shifted free
/// cumulants `(k_{n+2})` form a Hamburger moment sequence (they are the
/// moments of `x^2 nu + a delta_0`).  The 2x2 minor is the kurtosis
/// inequality `k_2 k_4 >= k_3^2`.
pub fn free_id_test(mu: &DistSpec, n: usize) -> Result<Verdict> {
    let kappa = freeconv::free_cumulants_of(mu, n)?;
    if kappa.len() < 4 {
        return Err(Error::TooShort);
    }
    let shifted = &kappa[1..];
    Ok(hankel_psd(shifted, HankelMode::Hamburger, None)?.with_order(n))
}

/// Necessary condition for free regularity: `k_1 >= 0` and the shifted
/// cumulants form a Stieltjes sequence (`nu` lives on the positive axis).
pub fn free_regular_test(mu: &DistSpec, n: usize) -> Result<Verdict> {
    let kappa = freeconv::free_cumulants_of(mu, n)?;
    if kappa.is_empty() {
        return Err(Error::TooShort);
    }
    if kappa[0].is_negative() {
        return Ok(Verdict::rejected(
            format!("first free cumulant = {} < 0", kappa[0]),
            n,
        ));
    }
    if kappa.len() < 4 {
        return Err(Error::TooShort);
    }
    Ok(hankel_psd(&kappa[1..], HankelMode::Stieltjes, None)?.with_order(n))
}

/// Moments of a candidate square root of the S-transform; shared by the
/// divisibility and mixture tests.
fn realizability(s_candidate: &TruncatedSeries<Scalar>, n: usize) -> Result<Verdict> {
    let cand = transforms::moments_from_s(s_candidate)?;
    let mut seq = vec![Scalar::from_int(1)];
    seq.extend(cand.iter().cloned());
    Ok(hankel_psd(&seq, HankelMode::Stieltjes, None)?
        .with_candidate(MomentSeq(cand))
        .with_order(n))
}

/// Is `sigma` a square under the free multiplicative convolution?  The
/// candidate root has S-transform `sqrt(S_sigma)`; rejection means its
/// moments violate the Stieltjes moment problem.
pub fn box2div_test(sigma: &DistSpec, n: usize) -> Result<Verdict> {
    let m = measures::moments_of(sigma, n)?;
    let s = transforms::s_from_moments(m.as_slice())?;
    realizability(&s.sqrt()?, n)
}

/// Can the symmetric law `mu` be written as `lambda boxtimes w`?  The
/// candidate mixer has the ordinary S-transform `sqrt(z) S_mu(z)`; it must
/// pass the Stieltjes screen, and when a closed form is known its
/// monotonicity is checked directly.
pub fn wigner_mixture_test(mu: &DistSpec, n: usize, grid: usize) -> Result<Verdict> {
    let half = n.div_ceil(2).max(2);
    let carrier = mu.symmetric_carrier(half)?;
    let cm = measures::moments_of(&carrier, half)?;
    let s_mu = transforms::s_sym_from_carrier(cm.as_slice())?;
    if let Some(f) = closed_form_s_lambda(mu) {
        let dir = transforms::s_monotone_check(&f, -1.0 + 1e-6, -1e-6, grid, 1e-9);
        if dir != Monotonicity::Nonincreasing && dir != Monotonicity::Constant {
            return Ok(Verdict::rejected(
                "candidate S-transform sqrt(z)S(z) is increasing on (-1,0)",
                n,
            ));
        }
    }
    realizability(s_mu.body(), n)
}

/// Closed-form `sqrt(z) S_mu(z)` for the symmetric catalog laws.
fn closed_form_s_lambda(mu: &DistSpec) -> Option<Box<dyn Fn(f64) -> f64>> {
    use crate::catalog::CatalogEntry::*;
    let DistSpec::Catalog(e) = mu else { return None };
    match e {
        Wigner { b, a } if b.is_zero() => {
            let a = a.to_f64();
            Some(Box::new(move |_| 1.0 / a.sqrt()))
        }
        ArcsineSym { s } => {
            let s = s.to_f64();
            Some(Box::new(move |t: f64| ((t + 2.0) / s).sqrt()))
        }
        BetaSym { s } => {
            let s = s.to_f64();
            Some(Box::new(move |t: f64| ((t + 2.0) / s).sqrt() / (1.0 + t)))
        }
        _ => None,
    }
}

/// Test for type W: `sigma-bar boxtimes w` is freely
/// infinitely divisible exactly when `sigma-bar boxtimes sigma-bar` is
/// free regular.
pub fn type_w_test(sigma_bar: &DistSpec, n: usize) -> Result<Verdict> {
    let sigma = freeconv::boxtimes_pos(sigma_bar, sigma_bar, n)?;
    Ok(free_regular_test(&sigma, n)?.with_order(n))
}

/// Type AS: `mu = lambda boxtimes a` requires (i) the candidate
/// `S_lambda = S_mu sqrt(z/(z+2))` to be realizable on the positive axis
/// and (ii) the law with `S_sigma = (1+z) S_{mu^(2)}` to be free regular.
pub fn type_as_test(mu: &DistSpec, n: usize) -> Result<Verdict> {
    let half = n.div_ceil(2).max(2);
    let carrier = mu.symmetric_carrier(half)?;
    let cm = measures::moments_of(&carrier, half)?;
    let s_mu = transforms::s_sym_from_carrier(cm.as_slice())?;

    // (i) lambda-representability: body(S_mu) / sqrt(z+2)
    let order = s_mu.body().order();
    let mut z_plus_2 = vec![Scalar::from_int(2), Scalar::from_int(1)];
    z_plus_2.resize(order + 1, Scalar::from_int(0));
    let root = TruncatedSeries::new(z_plus_2).sqrt()?;
    let s_lambda = s_mu.body().div(&root)?;
    let lambda_verdict = realizability(&s_lambda, n)?;
    if lambda_verdict.is_rejected() {
        return Ok(Verdict::rejected(
            format!("no positive mixer: {}", lambda_verdict.witness),
            n,
        ));
    }

    // (ii) sigma-regularity: S_sigma = (1+z) S_{mu^(2)}
    let s_rho = transforms::s_from_moments(cm.as_slice())?;
    let mut one_plus_z = vec![Scalar::from_int(1), Scalar::from_int(1)];
    one_plus_z.resize(s_rho.order() + 1, Scalar::from_int(0));
    let s_sigma = TruncatedSeries::new(one_plus_z).mul(&s_rho);
    let sigma = DistSpec::moments(transforms::moments_from_s(&s_sigma)?);
    let sigma_verdict = free_regular_test(&sigma, s_sigma.order() + 1)?;
    if sigma_verdict.is_rejected() {
        return Ok(Verdict::rejected(
            format!("companion law not free regular: {}", sigma_verdict.witness),
            n,
        ));
    }
    Ok(lambda_verdict.with_order(n))
}
