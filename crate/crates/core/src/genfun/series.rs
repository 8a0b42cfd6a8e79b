use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::ser::{Serialize, SerializeSeq, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::hurwitz::Cutoff;
use crate::partition::{partitions_up_to, Partition};
use crate::scalar::{self as sc, format_rational, Rational};
use crate::symfunc::{schur_poly, PowerAlphabet};

/// One monomial: degree, a power-sum profile per alphabet, and bookkeeping exponents.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SeriesKey {
    pub degree: usize,
    pub profiles: Vec<Partition>,
    pub aux: Vec<i64>,
}

impl SeriesKey {
    pub fn new(degree: usize, profiles: Vec<Partition>, aux: Vec<i64>) -> Self {
        SeriesKey {
            degree,
            profiles,
            aux,
        }
    }
}

/// Sparse truncated series over several power-sum alphabets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileSeries {
    alphabets: usize,
    aux_names: Vec<String>,
    d_max: usize,
    terms: BTreeMap<SeriesKey, Rational>,
}

/// How a folded alphabet enters: as a new bookkeeping variable, or by value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FoldValue {
    Symbolic(String),
    Value(Rational),
}

impl ProfileSeries {
    pub fn new(alphabets: usize, aux_names: Vec<String>, d_max: usize) -> Self {
        ProfileSeries {
            alphabets,
            aux_names,
            d_max,
            terms: BTreeMap::new(),
        }
    }

    pub fn alphabets(&self) -> usize {
        self.alphabets
    }

    pub fn aux_names(&self) -> &[String] {
        &self.aux_names
    }

    pub fn d_max(&self) -> usize {
        self.d_max
    }

    pub fn terms(&self) -> &BTreeMap<SeriesKey, Rational> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, key: &SeriesKey) -> Rational {
        self.terms.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    /// Adds to a coefficient; keys above `d_max` are dropped.
    pub fn add_term(&mut self, key: SeriesKey, coeff: Rational) {
        debug_assert_eq!(key.profiles.len(), self.alphabets);
        debug_assert_eq!(key.aux.len(), self.aux_names.len());
        if coeff.is_zero() || key.degree > self.d_max {
            return;
        }
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Keeps keys of degree `<= d_max`.
    pub fn truncate(&self, d_max: usize) -> Self {
        ProfileSeries {
            alphabets: self.alphabets,
            aux_names: self.aux_names.clone(),
            d_max: d_max.min(self.d_max),
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.degree <= d_max)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Product for series with at most one alphabet; degrees and aux exponents add.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.alphabets > 1 || self.alphabets != other.alphabets || self.aux_names != other.aux_names {
            return Err(Error::out_of_range(
                "series product",
                "needs matching layouts with at most one alphabet",
            ));
        }
        let d_max = self.d_max.min(other.d_max);
        let mut out = ProfileSeries::new(self.alphabets, self.aux_names.clone(), d_max);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if a.degree + b.degree > d_max {
                    continue;
                }
                let profiles = a
                    .profiles
                    .iter()
                    .zip(&b.profiles)
                    .map(|(p, q)| p.union(q))
                    .collect();
                let aux = a.aux.iter().zip(&b.aux).map(|(u, v)| u + v).collect();
                out.add_term(SeriesKey::new(a.degree + b.degree, profiles, aux), x * y);
            }
        }
        Ok(out)
    }

    fn unit_like(&self) -> Self {
        let mut out = ProfileSeries::new(self.alphabets, self.aux_names.clone(), self.d_max);
        out.add_term(
            SeriesKey::new(0, vec![Partition::empty(); self.alphabets], vec![0; self.aux_names.len()]),
            Rational::one(),
        );
        out
    }

    /// `exp` of a series without degree-0 terms, truncated at `d_max`.
    pub fn exp(&self) -> Result<Self> {
        if self.terms.keys().any(|k| k.degree == 0) {
            return Err(Error::out_of_range("series exponential", "constant term must vanish"));
        }
        let mut total = self.unit_like();
        let mut power = self.unit_like();
        for j in 1..=self.d_max {
            power = power.mul(self)?;
            if power.is_empty() {
                break;
            }
            let scaled = power.scale(&Rational::new(1.into(), crate::scalar::factorial(j)));
            total = total.add(&scaled)?;
        }
        Ok(total)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = ProfileSeries::new(self.alphabets, self.aux_names.clone(), self.d_max);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.alphabets != other.alphabets || self.aux_names != other.aux_names {
            return Err(Error::out_of_range("series sum", "layouts differ"));
        }
        let mut out = self.clone();
        out.d_max = self.d_max.min(other.d_max);
        out.terms.retain(|k, _| k.degree <= out.d_max);
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        Ok(out)
    }

    /// Sets alphabet `index` to `p(a)`: each `p_Δ` becomes `a^{ℓ(Δ)}`.
    pub fn fold_alphabet(&self, index: usize, value: &FoldValue) -> Result<Self> {
        self.check_index(index)?;
        let mut aux_names = self.aux_names.clone();
        if let FoldValue::Symbolic(name) = value {
            aux_names.push(name.clone());
        }
        let mut out = ProfileSeries::new(self.alphabets - 1, aux_names, self.d_max);
        for (k, v) in &self.terms {
            let mut profiles = k.profiles.clone();
            let removed = profiles.remove(index);
            let l = removed.length() as i64;
            let mut aux = k.aux.clone();
            let coeff = match value {
                FoldValue::Symbolic(_) => {
                    aux.push(l);
                    v.clone()
                }
                FoldValue::Value(a) => v * sc::pow_i(a, l)?,
            };
            out.add_term(SeriesKey::new(k.degree, profiles, aux), coeff);
        }
        Ok(out)
    }

    /// Substitutes explicit values for alphabet `index`.
    pub fn specialize_alphabet(&self, index: usize, x: &PowerAlphabet<Rational>) -> Result<Self> {
        self.check_index(index)?;
        let mut out = ProfileSeries::new(self.alphabets - 1, self.aux_names.clone(), self.d_max);
        for (k, v) in &self.terms {
            let mut profiles = k.profiles.clone();
            let removed = profiles.remove(index);
            let mut coeff = v.clone();
            for &m in removed.parts() {
                if m > x.m_max() {
                    return Err(Error::InsufficientTruncation {
                        m_max: x.m_max(),
                        needed: m,
                    });
                }
                coeff *= x.p(m);
            }
            out.add_term(SeriesKey::new(k.degree, profiles, k.aux.clone()), coeff);
        }
        Ok(out)
    }

    /// Full numeric evaluation.
    pub fn eval<S: sc::Scalar>(&self, alphabets: &[PowerAlphabet<S>], aux: &[S]) -> Result<S> {
        if alphabets.len() != self.alphabets || aux.len() != self.aux_names.len() {
            return Err(Error::out_of_range("evaluation", "argument count does not match the series"));
        }
        let mut total = S::zero();
        for (k, v) in &self.terms {
            let mut term = S::from_rational(v);
            for (delta, x) in k.profiles.iter().zip(alphabets) {
                for &m in delta.parts() {
                    if m > x.m_max() {
                        return Err(Error::InsufficientTruncation {
                            m_max: x.m_max(),
                            needed: m,
                        });
                    }
                    term = term * x.p(m).clone();
                }
            }
            for (e, a) in k.aux.iter().zip(aux) {
                term = term
                    * a.powi(*e)
                        .ok_or_else(|| Error::DivisionByZero("negative power of zero".into()))?;
            }
            total = total + term;
        }
        Ok(total)
    }

    /// Values of the degree-`d` parts, `d = 0..=d_max`.
    pub fn eval_by_degree<S: sc::Scalar>(&self, alphabets: &[PowerAlphabet<S>], aux: &[S]) -> Result<Vec<S>> {
        let mut out = vec![S::zero(); self.d_max + 1];
        for d in 0..=self.d_max {
            let mut part = ProfileSeries::new(self.alphabets, self.aux_names.clone(), self.d_max);
            part.terms = self
                .terms
                .iter()
                .filter(|(k, _)| k.degree == d)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect();
            out[d] = part.eval(alphabets, aux)?;
        }
        Ok(out)
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.alphabets {
            return Err(Error::out_of_range(
                "alphabet index",
                format!("{index} with {} alphabets", self.alphabets),
            ));
        }
        Ok(())
    }
}

struct TermView<'a>(&'a SeriesKey, &'a Rational);

impl Serialize for TermView<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Term", 4)?;
        st.serialize_field("degree", &self.0.degree)?;
        st.serialize_field("profiles", &self.0.profiles)?;
        st.serialize_field("aux", &self.0.aux)?;
        st.serialize_field("coeff", &format_rational(self.1))?;
        st.end()
    }
}

/// JSON list of `{degree, profiles, aux, coeff}`.
impl Serialize for ProfileSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (k, v) in &self.terms {
            seq.serialize_element(&TermView(k, v))?;
        }
        seq.end()
    }
}

/// Polynomial in the bookkeeping variables: aux exponents to coefficient.
pub(crate) type AuxPoly = Vec<(Vec<i64>, Rational)>;

/// `Σ_λ w(λ) Π_i s_λ(p^{(i)})` over admitted `|λ| <= d_max`, expanded per alphabet.
pub(crate) fn schur_expansion<F>(
    alphabets: usize,
    aux_names: Vec<String>,
    d_max: usize,
    cutoff: Cutoff,
    weight: F,
) -> Result<ProfileSeries>
where
    F: Fn(&Partition) -> Result<AuxPoly> + Sync,
{
    let lambdas: Vec<Partition> = partitions_up_to(d_max)
        .into_iter()
        .filter(|l| cutoff.admits(l))
        .collect();
    let pieces: Vec<Vec<(SeriesKey, Rational)>> = lambdas
        .par_iter()
        .map(|lambda| {
            let w = weight(lambda)?;
            let mut out = Vec::new();
            if w.is_empty() {
                return Ok(out);
            }
            let s = schur_poly(lambda);
            let terms: Vec<(&Partition, &Rational)> = s.terms().iter().collect();
            let mut idx = vec![0usize; alphabets];
            loop {
                let mut c = Rational::one();
                let mut profiles = Vec::with_capacity(alphabets);
                for &i in &idx {
                    c *= terms[i].1;
                    profiles.push(terms[i].0.clone());
                }
                for (aux, a) in &w {
                    out.push((SeriesKey::new(lambda.weight(), profiles.clone(), aux.clone()), &c * a));
                }
                // odometer over alphabet term choices
                let mut pos = 0;
                while pos < alphabets {
                    idx[pos] += 1;
                    if idx[pos] < terms.len() {
                        break;
                    }
                    idx[pos] = 0;
                    pos += 1;
                }
                if pos == alphabets {
                    break;
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut series = ProfileSeries::new(alphabets, aux_names, d_max);
    for piece in pieces {
        for (k, v) in piece {
            series.add_term(k, v);
        }
    }
    Ok(series)
}

pub(crate) fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}
