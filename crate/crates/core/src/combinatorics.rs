//! Moment/cumulant calculus and the Fuss-Catalan family.
//!
//! Production paths are the O(N^3) recursions over the non-crossing and
//! set-partition lattices; explicit partition enumeration lives in test
//! oracles only.

use serde::{Deserialize, Serialize};

use crate::scalar::{Coeff, Scalar};

/// Raw moments `m_1..m_N` (`m_0 = 1` implicit).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MomentSeq(pub Vec<Scalar>);

/// Cumulants `k_1..k_N` (free or classical depending on context).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CumulantSeq(pub Vec<Scalar>);

impl MomentSeq {
    pub fn order(&self) -> usize {
        self.0.len()
    }
    /// 1-based accessor; orders past the stored length read as zero.
    pub fn get(&self, n: usize) -> Scalar {
        assert!(n >= 1);
        self.0.get(n - 1).cloned().unwrap_or_else(|| Scalar::from_int(0))
    }
    pub fn as_slice(&self) -> &[Scalar] {
        &self.0
    }
    pub fn truncate(&self, n: usize) -> MomentSeq {
        MomentSeq(self.0.iter().take(n).cloned().collect())
    }
    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(|s| s.to_f64()).collect()
    }
    pub fn approx_eq(&self, other: &MomentSeq, tol: f64) -> bool {
        let n = self.order().min(other.order());
        (0..n).all(|i| self.0[i].approx_eq(&other.0[i], tol))
    }
}

impl CumulantSeq {
    pub fn order(&self) -> usize {
        self.0.len()
    }
    pub fn get(&self, n: usize) -> Scalar {
        assert!(n >= 1);
        self.0.get(n - 1).cloned().unwrap_or_else(|| Scalar::from_int(0))
    }
    pub fn as_slice(&self) -> &[Scalar] {
        &self.0
    }
    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(|s| s.to_f64()).collect()
    }
}

/// Fuss-Catalan number `A_m(p, r) = (r/m!) prod_{i=1}^{m-1} (m p + r - i)`,
/// with `A_0 = 1`.
pub fn fuss_catalan<C: Coeff>(p: &C, r: &C, m: usize) -> C {
    if m == 0 {
        return C::one();
    }
    let mut acc = r.clone();
    let mf = C::from_int(m as i64);
    for i in 1..m {
        acc = acc * (mf.clone() * p.clone() + r.clone() - C::from_int(i as i64));
    }
    let mut fact = C::one();
    for i in 2..=m {
        fact = fact * C::from_int(i as i64);
    }
    acc / fact
}

/// Coefficient of `z^k` in `(1 + m_1 z + ... )^s`, used by the non-crossing
/// recursion. `moments` is `m_1..` with the implicit leading 1.
fn power_coeffs<C: Coeff>(moments: &[C], s: usize, up_to: usize) -> Vec<C> {
    let mut base = vec![C::one()];
    base.extend(moments.iter().take(up_to).cloned());
    base.resize(up_to + 1, C::zero());
    let mut acc = vec![C::zero(); up_to + 1];
    acc[0] = C::one();
    for _ in 0..s {
        let mut next = vec![C::zero(); up_to + 1];
        for i in 0..=up_to {
            if acc[i].is_zero() {
                continue;
            }
            for j in 0..=(up_to - i) {
                next[i + j] = next[i + j].clone() + acc[i].clone() * base[j].clone();
            }
        }
        acc = next;
    }
    acc
}

/// Moments from free cumulants via the non-crossing recursion
/// `m_n = sum_s k_s sum_{i_1+..+i_s = n-s} m_{i_1} ... m_{i_s}`.
pub fn moments_from_free_cumulants<C: Coeff>(kappa: &[C]) -> Vec<C> {
    let n = kappa.len();
    let mut m: Vec<C> = Vec::with_capacity(n);
    for order in 1..=n {
        let mut acc = C::zero();
        // powers of the partial moment series, truncated at order-1
        let mut pow = vec![C::one()]; // M^0
        let mut base = vec![C::one()];
        base.extend(m.iter().cloned());
        base.resize(order, C::zero());
        for s in 1..=order {
            let mut next = vec![C::zero(); order];
            for i in 0..order {
                if pow.get(i).map_or(true, |c| c.is_zero()) {
                    continue;
                }
                for j in 0..(order - i) {
                    next[i + j] = next[i + j].clone() + pow[i].clone() * base[j].clone();
                }
            }
            pow = next;
            if order >= s {
                acc = acc + kappa[s - 1].clone() * pow[order - s].clone();
            }
        }
        m.push(acc);
    }
    m
}

/// Free cumulants from moments: the inverse recursion.
pub fn free_cumulants_from_moments<C: Coeff>(m: &[C]) -> Vec<C> {
    let n = m.len();
    let mut kappa: Vec<C> = Vec::with_capacity(n);
    for order in 1..=n {
        let mut acc = m[order - 1].clone();
        for s in 1..order {
            let pow = power_coeffs(m, s, order - s);
            acc = acc - kappa[s - 1].clone() * pow[order - s].clone();
        }
        kappa.push(acc);
    }
    kappa
}

fn binomial<C: Coeff>(n: usize, k: usize) -> C {
    if k > n {
        return C::zero();
    }
    let mut acc = C::one();
    for i in 0..k {
        acc = acc * C::from_int((n - i) as i64) / C::from_int((i + 1) as i64);
    }
    acc
}

/// Moments from classical cumulants:
/// `m_n = sum_k C(n-1, k-1) c_k m_{n-k}`.
pub fn moments_from_classical_cumulants<C: Coeff>(c: &[C]) -> Vec<C> {
    let n = c.len();
    let mut m: Vec<C> = Vec::with_capacity(n);
    for order in 1..=n {
        let mut acc = C::zero();
        for k in 1..=order {
            let prev = if order == k { C::one() } else { m[order - k - 1].clone() };
            acc = acc + binomial::<C>(order - 1, k - 1) * c[k - 1].clone() * prev;
        }
        m.push(acc);
    }
    m
}

/// Classical (set-partition) cumulants from moments.
pub fn classical_cumulants_from_moments<C: Coeff>(m: &[C]) -> Vec<C> {
    let n = m.len();
    let mut c: Vec<C> = Vec::with_capacity(n);
    for order in 1..=n {
        let mut acc = m[order - 1].clone();
        for k in 1..order {
            let prev = m[order - k - 1].clone();
            acc = acc - binomial::<C>(order - 1, k - 1) * c[k - 1].clone() * prev;
        }
        c.push(acc);
    }
    c
}

// Scalar-typed wrappers used throughout the transform pipeline.

pub fn moment_seq_from_free_cumulants(kappa: &CumulantSeq) -> MomentSeq {
    MomentSeq(moments_from_free_cumulants(&kappa.0))
}

pub fn free_cumulant_seq_from_moments(m: &MomentSeq) -> CumulantSeq {
    CumulantSeq(free_cumulants_from_moments(&m.0))
}

pub fn moment_seq_from_classical_cumulants(c: &CumulantSeq) -> MomentSeq {
    MomentSeq(moments_from_classical_cumulants(&c.0))
}

pub fn classical_cumulant_seq_from_moments(m: &MomentSeq) -> CumulantSeq {
    CumulantSeq(classical_cumulants_from_moments(&m.0))
}
