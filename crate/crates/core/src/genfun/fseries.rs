use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::characters::hook_length_dim;
use crate::error::{Error, Result};
use crate::hurwitz::Cutoff;
use crate::partition::Partition;
use crate::scalar::{self as sc, big, factorial, int, pow_i, Rational};
use crate::symfunc::{eval_schur, pochhammer_lambda, schur_poly, PowerAlphabet};

use super::series::{schur_expansion, AuxPoly, ProfileSeries};

pub const F_SERIES_MAX_DEGREE: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamValue {
    /// Kept as a bookkeeping variable; its exponent becomes an aux entry.
    Symbolic,
    Value(Rational),
}

/// One factor `((a)_λ)^power`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperParam {
    pub a: ParamValue,
    pub power: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FSeriesSpec {
    pub euler: i64,
    pub alphabets: usize,
    pub params: Vec<HyperParam>,
    pub cutoff: Cutoff,
    pub d_max: usize,
}

/// Two ways of writing the same weight of λ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FForm {
    /// `s_λ(p_∞)^{E - Σn - k} Π s_λ(p(a_j))^{n_j}`
    SchurRatio,
    /// `s_λ(p_∞)^{E - k} Π ((a_j)_λ)^{n_j}`
    Pochhammer,
}

type Poly = Vec<Rational>;

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_pow(a: &Poly, e: i64) -> Result<Poly> {
    if e < 0 {
        return Err(Error::out_of_range(
            "symbolic parameter power",
            format!("{e}; negative powers need a numeric value"),
        ));
    }
    let mut acc = vec![Rational::one()];
    for _ in 0..e {
        acc = poly_mul(&acc, a);
    }
    Ok(acc)
}

/// `s_λ(p(a))` as a polynomial in `a`: each `p_Δ` contributes `a^{ℓ(Δ)}`.
fn schur_at_p_of_a(lambda: &Partition) -> Poly {
    let mut out = vec![Rational::zero(); lambda.weight() + 1];
    for (delta, c) in schur_poly(lambda).terms() {
        out[delta.length()] += c;
    }
    out
}

/// `(a)_λ` as a polynomial in `a`.
fn pochhammer_poly(lambda: &Partition) -> Poly {
    lambda
        .contents()
        .fold(vec![Rational::one()], |acc, c| poly_mul(&acc, &vec![int(c), Rational::one()]))
}

pub(crate) fn s_infinity(lambda: &Partition) -> Rational {
    big(&hook_length_dim(lambda)) / big(&factorial(lambda.weight()))
}

fn lambda_weight(spec: &FSeriesSpec, form: FForm, lambda: &Partition) -> Result<AuxPoly> {
    let sum_n: i64 = spec.params.iter().map(|p| p.power).sum();
    let exponent = match form {
        FForm::SchurRatio => spec.euler - sum_n - spec.alphabets as i64,
        FForm::Pochhammer => spec.euler - spec.alphabets as i64,
    };
    let mut scalar = pow_i(&s_infinity(lambda), exponent)?;
    let mut poly: BTreeMap<Vec<i64>, Rational> = BTreeMap::new();
    poly.insert(vec![], Rational::one());
    for param in &spec.params {
        match &param.a {
            ParamValue::Value(a) => {
                let v = match form {
                    FForm::SchurRatio => eval_schur(lambda, &PowerAlphabet::p_of_a(a.clone(), lambda.weight()))?,
                    FForm::Pochhammer => pochhammer_lambda(a, lambda),
                };
                scalar *= pow_i(&v, param.power)?;
            }
            ParamValue::Symbolic => {
                let base = match form {
                    FForm::SchurRatio => schur_at_p_of_a(lambda),
                    FForm::Pochhammer => pochhammer_poly(lambda),
                };
                let factor = poly_pow(&base, param.power)?;
                let mut next = BTreeMap::new();
                for (aux, c) in &poly {
                    for (e, f) in factor.iter().enumerate() {
                        if f.is_zero() {
                            continue;
                        }
                        let mut key = aux.clone();
                        key.push(e as i64);
                        *next.entry(key).or_insert_with(Rational::zero) += c * f;
                    }
                }
                poly = next;
            }
        }
    }
    if sc::Scalar::is_zero(&scalar) {
        return Ok(vec![]);
    }
    Ok(poly
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k, c * &scalar))
        .collect())
}

/// Truncated `F^{E,k;p}` expanded in power-sum monomials of every alphabet.
///
/// Symbolic parameters become aux entries named `a1, a2, …` in order.
pub fn f_series(spec: &FSeriesSpec, form: FForm) -> Result<ProfileSeries> {
    if spec.d_max > F_SERIES_MAX_DEGREE {
        return Err(Error::guard(format!(
            "series truncation limited to d_max <= {F_SERIES_MAX_DEGREE}, got {}",
            spec.d_max
        )));
    }
    if spec.cutoff == Cutoff::AtMost(0) {
        return Err(Error::out_of_range("cutoff N", "must be at least 1"));
    }
    let aux_names = spec
        .params
        .iter()
        .filter(|p| p.a == ParamValue::Symbolic)
        .enumerate()
        .map(|(i, _)| format!("a{}", i + 1))
        .collect();
    schur_expansion(spec.alphabets, aux_names, spec.d_max, spec.cutoff, |lambda| {
        lambda_weight(spec, form, lambda)
    })
}
