//! Monte Carlo evaluation of Ginibre and Haar matrix integrals.
//!
//! Samples are drawn in fixed-size blocks. Block `b` owns the ChaCha8 stream
//! `(seed, b)`, and block statistics are merged in block order, so results do
//! not depend on the number of worker threads.

mod lemma;
mod proposition;

pub use lemma::{mc_lemma1, LemmaQuery, LemmaReport, Relation};
pub use proposition::{mc_proposition, DegreeComparison, PropositionQuery, PropositionReport};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::ser::SerializeTuple;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{to_f64, Rational};

/// Samples per RNG stream.
pub const BLOCK_SIZE: usize = 1024;

/// Acceptance threshold in standard errors.
pub const GATE_SIGMAS: f64 = 5.0;

/// Absolute slack for integrands that vanish identically, where the standard error is 0.
pub const ROUNDOFF_FLOOR: f64 = 1e-10;

pub type CMatrix = DMatrix<Complex64>;

pub(crate) fn serialize_complex<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&z.re)?;
    t.serialize_element(&z.im)?;
    t.end()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MCEstimate {
    #[serde(serialize_with = "serialize_complex")]
    pub mean: Complex64,
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
}

impl MCEstimate {
    /// `|mean - exact|` in units of the standard error; 0 within the roundoff floor.
    pub fn sigmas(&self, exact: Complex64) -> f64 {
        let diff = (self.mean - exact).norm();
        if diff <= ROUNDOFF_FLOOR * (1.0 + exact.norm()) {
            0.0
        } else if self.stderr > 0.0 {
            diff / self.stderr
        } else {
            f64::INFINITY
        }
    }

    pub fn passes(&self, exact: Complex64) -> bool {
        let diff = (self.mean - exact).norm();
        diff <= GATE_SIGMAS * self.stderr || diff <= ROUNDOFF_FLOOR * (1.0 + exact.norm())
    }
}

/// Running mean and sum of squared deviations, merged with Chan's update.
#[derive(Clone, Debug)]
struct Moments {
    count: usize,
    mean: Vec<Complex64>,
    m2: Vec<f64>,
}

impl Moments {
    fn new(width: usize) -> Self {
        Moments {
            count: 0,
            mean: vec![Complex64::new(0.0, 0.0); width],
            m2: vec![0.0; width],
        }
    }

    fn push(&mut self, x: &[Complex64]) {
        self.count += 1;
        let n = self.count as f64;
        for ((m, q), v) in self.mean.iter_mut().zip(&mut self.m2).zip(x) {
            let delta = v - *m;
            *m += delta / n;
            *q += (delta.conj() * (v - *m)).re;
        }
    }

    fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        let (na, nb) = (self.count as f64, other.count as f64);
        let n = na + nb;
        for i in 0..self.mean.len() {
            let delta = other.mean[i] - self.mean[i];
            self.mean[i] += delta * (nb / n);
            self.m2[i] += other.m2[i] + delta.norm_sqr() * na * nb / n;
        }
        self.count += other.count;
    }
}

/// Averages `f` over `samples` draws; `f` returns `width` values per draw.
pub(crate) fn estimate<F>(samples: usize, seed: u64, width: usize, f: F) -> Result<Vec<MCEstimate>>
where
    F: Fn(&mut ChaCha8Rng) -> Result<Vec<Complex64>> + Sync,
{
    if samples < 2 {
        return Err(Error::out_of_range("samples", format!("{samples}; need at least 2")));
    }
    let blocks = samples.div_ceil(BLOCK_SIZE);
    let parts: Vec<Moments> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let len = BLOCK_SIZE.min(samples - b * BLOCK_SIZE);
            let mut m = Moments::new(width);
            for _ in 0..len {
                let x = f(&mut rng)?;
                m.push(&x);
            }
            Ok(m)
        })
        .collect::<Result<_>>()?;
    let mut total = Moments::new(width);
    for p in &parts {
        total.merge(p);
    }
    let n = total.count as f64;
    Ok((0..width)
        .map(|i| MCEstimate {
            mean: total.mean[i],
            stderr: (total.m2[i] / (n - 1.0)).sqrt() / n.sqrt(),
            samples,
            seed,
        })
        .collect())
}

fn complex_normal<R: Rng>(rng: &mut R) -> Complex64 {
    let x: f64 = rng.sample(StandardNormal);
    let y: f64 = rng.sample(StandardNormal);
    Complex64::new(x, y) * std::f64::consts::FRAC_1_SQRT_2
}

/// `N × N` matrix of independent entries with `E[Z_ij] = 0`, `E|Z_ij|² = 1`.
pub fn sample_ginibre<R: Rng>(n: usize, rng: &mut R) -> CMatrix {
    assert!(n >= 1, "matrix size must be positive");
    DMatrix::from_fn(n, n, |_, _| complex_normal(rng))
}

/// Haar unitary: QR of a Ginibre matrix with the phases of `diag R` moved into `Q`.
pub fn sample_haar_unitary<R: Rng>(n: usize, rng: &mut R) -> CMatrix {
    let qr = sample_ginibre(n, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// `‖U†U - I‖` in the Frobenius norm, an upper bound on the operator norm.
pub fn unitarity_residual(u: &CMatrix) -> f64 {
    let n = u.nrows();
    (u.adjoint() * u - CMatrix::identity(n, n)).norm()
}

pub(crate) fn to_complex_matrix(rows: &[Vec<Rational>]) -> Result<CMatrix> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Parse("matrix must be square and non-empty".into()));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| Complex64::new(to_f64(&rows[i][j]), 0.0)))
}

pub(crate) fn to_complex(r: &Rational) -> Complex64 {
    Complex64::new(to_f64(r), 0.0)
}

/// Exact product of square matrices given by rows.
pub(crate) fn rational_product(factors: &[&Vec<Vec<Rational>>], n: usize) -> Vec<Vec<Rational>> {
    use num_traits::{One, Zero};
    let mut acc: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    for f in factors {
        acc = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).fold(Rational::zero(), |s, k| s + &acc[i][k] * &f[k][j]))
                    .collect()
            })
            .collect();
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ginibre_moments() {
        let n = 3;
        let est = estimate(10_000, 7, 2, |rng| {
            let z = sample_ginibre(n, rng);
            Ok(vec![(&z * z.adjoint()).trace() / (n * n) as f64, z.trace()])
        })
        .unwrap();
        assert!(est[0].passes(Complex64::new(1.0, 0.0)), "{:?}", est[0]);
        assert!(est[1].passes(Complex64::new(0.0, 0.0)), "{:?}", est[1]);
    }

    #[test]
    fn haar_moments_and_unitarity() {
        let n = 3;
        let est = estimate(10_000, 11, 2, |rng| {
            let u = sample_haar_unitary(n, rng);
            assert!(unitarity_residual(&u) <= 1e-12);
            Ok(vec![u[(0, 1)], Complex64::new(u[(0, 0)].norm_sqr(), 0.0)])
        })
        .unwrap();
        assert!(est[0].passes(Complex64::new(0.0, 0.0)));
        assert!(est[1].passes(Complex64::new(1.0 / n as f64, 0.0)), "{:?}", est[1]);
    }

    #[test]
    fn reproducible_across_thread_counts() {
        let run = |threads: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| {
                    estimate(5000, 3, 1, |rng| Ok(vec![sample_haar_unitary(2, rng)[(1, 1)]])).unwrap()
                })
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn welford_matches_two_pass() {
        let xs: Vec<Complex64> = (0..3000).map(|i| Complex64::new((i % 17) as f64, (i % 5) as f64 - 2.0)).collect();
        let mut blocks = Moments::new(1);
        for chunk in xs.chunks(700) {
            let mut m = Moments::new(1);
            chunk.iter().for_each(|x| m.push(&[*x]));
            blocks.merge(&m);
        }
        let mean = xs.iter().sum::<Complex64>() / xs.len() as f64;
        let m2: f64 = xs.iter().map(|x| (x - mean).norm_sqr()).sum();
        assert!((blocks.mean[0] - mean).norm() < 1e-9);
        assert!((blocks.m2[0] - m2).abs() < 1e-6 * m2);
        assert!(estimate(1, 0, 1, |_| Ok(vec![])).is_err());
    }
}
