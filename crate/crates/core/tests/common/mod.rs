//! Independent oracles for the integration suites: partition
//! enumeration, Lagrange inversion, and a reference determinant.

#![allow(dead_code)]

use freeprob::scalar::Scalar;
use freeprob::series::TruncatedSeries;
use freeprob::Series;

/// All set partitions of `{0, .., n-1}` as block lists.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<Vec<usize>>> = vec![vec![]];
    for elem in 0..n {
        let mut next = Vec::new();
        for p in &out {
            for (i, _) in p.iter().enumerate() {
                let mut q = p.clone();
                q[i].push(elem);
                next.push(q);
            }
            let mut q = p.clone();
            q.push(vec![elem]);
            next.push(q);
        }
        out = next;
    }
    out
}

/// A partition is crossing if some `a < b < c < d` has `a, c` in one
/// block and `b, d` in another.
pub fn is_noncrossing(p: &[Vec<usize>]) -> bool {
    let mut block_of = std::collections::HashMap::new();
    for (i, b) in p.iter().enumerate() {
        for &x in b {
            block_of.insert(x, i);
        }
    }
    let n = block_of.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    if block_of[&a] == block_of[&c]
                        && block_of[&b] == block_of[&d]
                        && block_of[&a] != block_of[&b]
                    {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// `m_n = sum over (non-crossing) partitions of prod kappa_{|block|}`.
pub fn moments_by_partition_sum(kappa: &[Scalar], noncrossing_only: bool) -> Vec<Scalar> {
    (1..=kappa.len())
        .map(|n| {
            set_partitions(n)
                .iter()
                .filter(|p| !noncrossing_only || is_noncrossing(p))
                .fold(Scalar::from_int(0), |acc, p| {
                    let term = p.iter().fold(Scalar::from_int(1), |t, block| {
                        t * kappa[block.len() - 1].clone()
                    });
                    acc + term
                })
        })
        .collect()
}

/// Lagrange inversion: the compositional inverse of `f` has
/// `g_n = (1/n) [z^(n-1)] (z / f(z))^n`.
pub fn lagrange_inverse(f: &Series, order: usize) -> Series {
    let base = f.shift_down().inverse().unwrap();
    let mut coeffs = vec![Scalar::from_int(0)];
    let mut power = TruncatedSeries::constant(Scalar::from_int(1), order);
    for n in 1..=order {
        power = power.mul(&base);
        coeffs.push(power.coeff(n - 1) / Scalar::from_int(n as i64));
    }
    Series::new(coeffs)
}

/// Plain cofactor-free Gaussian determinant over f64, for checking
/// Hankel witnesses independently of the library's implementation.
pub fn det_f64(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    let mut m: Vec<Vec<f64>> = rows.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let p = (col..n)
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
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            for c in col..n {
                m[r][c] -= f * m[col][c];
            }
        }
    }
    det
}

/// Deterministic xorshift generator for reproducible random cases
/// without pulling RNG state through the test plumbing.
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    /// Rational in `[-bound, bound]` with denominator up to 8.
    pub fn rational(&mut self, bound: i64) -> Scalar {
        let num = (self.next_u64() % (2 * bound as u64 + 1)) as i64 - bound;
        let den = (self.next_u64() % 8) as i64 + 1;
        Scalar::ratio(num, den)
    }

    /// Strictly positive rational in `(0, bound]`.
    pub fn positive_rational(&mut self, bound: i64) -> Scalar {
        let num = (self.next_u64() % bound as u64) as i64 + 1;
        let den = (self.next_u64() % 8) as i64 + 1;
        Scalar::ratio(num, den)
    }
}
