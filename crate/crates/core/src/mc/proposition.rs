use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::genfun::layouts::{evaluate_proposition, proposition_series, Ensemble, Integrand, IntegralLayout, Slot};
use crate::partition::partitions_of;
use crate::scalar::{format_rational, Rational};
use crate::symfunc::{eval_schur, PowerAlphabet};

use super::{
    estimate, rational_product, sample_ginibre, sample_haar_unitary, serialize_complex, to_complex,
    to_complex_matrix, CMatrix, MCEstimate,
};

pub const PROPOSITION_MAX_SIZE: usize = 5;
pub const PROPOSITION_MAX_DEGREE: usize = 3;

#[derive(Clone, Debug, PartialEq)]
pub struct PropositionQuery {
    pub layout: IntegralLayout,
    pub matrix_size: usize,
    /// `C_1 … C_n` by rows.
    pub c: Vec<Vec<Vec<Rational>>>,
    /// `A_{12}, A_{23}, …, A_{n1}`; only read by the chain layout.
    pub chain: Vec<Vec<Vec<Rational>>>,
    /// Power sums `p_1, p_2, …` for each free slot, in slot order; missing entries are 0.
    pub free: Vec<Vec<Rational>>,
    pub d_max: usize,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeComparison {
    pub degree: usize,
    #[serde(flatten)]
    pub estimate: MCEstimate,
    #[serde(serialize_with = "serialize_complex")]
    pub exact: Complex64,
    pub exact_rational: String,
    pub sigmas: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropositionReport {
    pub layout: String,
    pub n: usize,
    pub t: usize,
    pub matrix_size: usize,
    pub signature: String,
    pub degrees: Vec<DegreeComparison>,
    pub pass: bool,
}

fn pad(values: &[Rational], len: usize) -> Vec<Rational> {
    let mut v: Vec<Rational> = values.iter().take(len).cloned().collect();
    v.resize(len, Rational::from_integer(0.into()));
    v
}

fn schur_sum_matrix(d: usize, m: &CMatrix, weights: Option<&PowerAlphabet<Complex64>>) -> Result<Complex64> {
    let traces = PowerAlphabet::from_matrix(m, d);
    let mut acc = Complex64::new(0.0, 0.0);
    for lambda in partitions_of(d) {
        let s = eval_schur(&lambda, &traces)?;
        acc += match weights {
            Some(p) => s * eval_schur(&lambda, p)?,
            None => s,
        };
    }
    Ok(acc)
}

/// Monte Carlo estimate of each degree of a truncated matrix integral against
/// the exact series evaluated at the same matrices and power sums.
pub fn mc_proposition(q: &PropositionQuery) -> Result<PropositionReport> {
    let layout = q.layout;
    let n_size = q.matrix_size;
    if n_size == 0 || n_size > PROPOSITION_MAX_SIZE {
        return Err(Error::guard(format!("matrix size limited to 1..={PROPOSITION_MAX_SIZE}, got {n_size}")));
    }
    if q.d_max > PROPOSITION_MAX_DEGREE {
        return Err(Error::guard(format!("degree limited to {PROPOSITION_MAX_DEGREE}, got {}", q.d_max)));
    }
    if q.c.len() != layout.n {
        return Err(Error::out_of_range("external matrices", format!("{} given, layout needs {}", q.c.len(), layout.n)));
    }
    let chain_layout = layout.integrand == Integrand::ChekhovStrahov;
    if chain_layout && q.chain.len() != layout.n {
        return Err(Error::out_of_range("chain matrices", format!("{} given, layout needs {}", q.chain.len(), layout.n)));
    }
    for m in q.c.iter().chain(if chain_layout { q.chain.iter() } else { [].iter() }) {
        if m.len() != n_size || m.iter().any(|r| r.len() != n_size) {
            return Err(Error::Parse(format!("external matrices must be {n_size}×{n_size}")));
        }
    }
    let prop = proposition_series(&layout, n_size, q.d_max)?;
    let free_slots = prop.slots.iter().filter(|s| matches!(s, Slot::Free(_))).count();
    if q.free.len() != free_slots {
        return Err(Error::out_of_range("free alphabets", format!("{} given, layout needs {free_slots}", q.free.len())));
    }

    // exact side
    let m_max = q.d_max.max(1);
    let mut free_iter = q.free.iter();
    let mut alphabets = Vec::with_capacity(prop.slots.len());
    for slot in &prop.slots {
        let a = match slot {
            Slot::Free(_) => PowerAlphabet::explicit(pad(free_iter.next().unwrap(), m_max)),
            Slot::Matrices(ix) => {
                let factors: Vec<&Vec<Vec<Rational>>> = ix.iter().map(|&i| &q.c[i - 1]).collect();
                PowerAlphabet::matrix_traces(&rational_product(&factors, n_size), m_max)?
            }
            Slot::Chain => {
                let factors: Vec<&Vec<Vec<Rational>>> = q.chain.iter().collect();
                PowerAlphabet::matrix_traces(&rational_product(&factors, n_size), m_max)?
            }
        };
        alphabets.push(a);
    }
    let exact = evaluate_proposition(&prop, &alphabets)?;

    // sampling side
    let cs: Vec<CMatrix> = q.c.iter().map(|m| to_complex_matrix(m)).collect::<Result<_>>()?;
    let chain: Vec<CMatrix> = if chain_layout {
        q.chain.iter().map(|m| to_complex_matrix(m)).collect::<Result<_>>()?
    } else {
        vec![]
    };
    let free: Vec<PowerAlphabet<Complex64>> = q
        .free
        .iter()
        .map(|p| PowerAlphabet::explicit(pad(p, m_max).iter().map(to_complex).collect()))
        .collect();
    let (n, t) = (layout.n, layout.t);
    let estimates = estimate(q.samples, q.seed, q.d_max + 1, |rng| {
        let zs: Vec<CMatrix> = (0..n)
            .map(|_| match layout.ensemble {
                Ensemble::Complex => sample_ginibre(n_size, rng),
                Ensemble::Unitary => sample_haar_unitary(n_size, rng),
            })
            .collect();
        let id = CMatrix::identity(n_size, n_size);
        let mut out = Vec::with_capacity(q.d_max + 1);
        if chain_layout {
            let zp = (0..n).fold(id, |acc, a| acc * &zs[a] * &cs[a] * zs[a].adjoint() * &chain[a]);
            for d in 0..=q.d_max {
                out.push(schur_sum_matrix(d, &zp, Some(&free[0]))?);
            }
            return Ok(out);
        }
        let z = (0..n).fold(id.clone(), |acc, a| acc * &zs[a] * &cs[a]);
        let z_star = (t..n).rev().chain(0..t).fold(id, |acc, a| acc * zs[a].adjoint());
        for d in 0..=q.d_max {
            let v = match layout.integrand {
                Integrand::TlTl => {
                    schur_sum_matrix(d, &z, Some(&free[0]))? * schur_sum_matrix(d, &z_star, Some(&free[1]))?
                }
                Integrand::SingleTl => schur_sum_matrix(d, &(&z * &z_star), Some(&free[0]))?,
                Integrand::TlBkp => schur_sum_matrix(d, &z, Some(&free[0]))? * schur_sum_matrix(d, &z_star, None)?,
                Integrand::SingleBkp => schur_sum_matrix(d, &(&z * &z_star), None)?,
                Integrand::ChekhovStrahov => unreachable!(),
            };
            out.push(v);
        }
        Ok(out)
    })?;

    let degrees: Vec<DegreeComparison> = estimates
        .into_iter()
        .zip(&exact)
        .enumerate()
        .map(|(degree, (est, ex))| {
            let exact_c = to_complex(ex);
            DegreeComparison {
                degree,
                sigmas: est.sigmas(exact_c),
                pass: est.passes(exact_c),
                estimate: est,
                exact: exact_c,
                exact_rational: format_rational(ex),
            }
        })
        .collect();
    Ok(PropositionReport {
        layout: layout.to_string(),
        n,
        t,
        matrix_size: n_size,
        signature: prop.claimed.to_string(),
        pass: degrees.iter().all(|d| d.pass),
        degrees,
    })
}
