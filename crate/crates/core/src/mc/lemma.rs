use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::genfun::fseries::s_infinity;
use crate::partition::Partition;
use crate::scalar::{format_rational, int, Rational};
use crate::symfunc::{eval_schur, pochhammer_lambda, PowerAlphabet};

use super::{
    estimate, rational_product, sample_ginibre, sample_haar_unitary, serialize_complex, to_complex,
    to_complex_matrix, CMatrix, MCEstimate,
};

pub const LEMMA_MAX_WEIGHT: usize = 4;
pub const LEMMA_MAX_SIZE: usize = 6;
pub const LEMMA_MIN_SAMPLES: usize = 10_000;

/// The four averaging relations for Schur functions of matrix products.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Relation {
    /// `∫ s_λ(A U B U⁻¹) d*U = s_λ(A) s_λ(B) / s_λ(I_N)`
    #[serde(rename = "sAUBU-1")]
    AUBUinv,
    /// `∫ s_μ(A U) s_λ(U⁻¹ B) d*U = δ_{μλ} s_λ(AB) / s_λ(I_N)`
    #[serde(rename = "sAUU-1B")]
    AUUinvB,
    /// `E s_λ(A Z B Z†) = s_λ(A) s_λ(B) / s_λ(p_∞)`
    #[serde(rename = "sAZBZ+")]
    AZBZdag,
    /// `E s_μ(A Z) s_λ(Z† B) = δ_{μλ} s_λ(AB) / s_λ(p_∞)`
    #[serde(rename = "sAZZ+B")]
    AZZdagB,
}

impl Relation {
    pub const ALL: [Relation; 4] = [
        Relation::AUBUinv,
        Relation::AUUinvB,
        Relation::AZBZdag,
        Relation::AZZdagB,
    ];

    pub fn two_schur(self) -> bool {
        matches!(self, Relation::AUUinvB | Relation::AZZdagB)
    }

    fn unitary(self) -> bool {
        matches!(self, Relation::AUBUinv | Relation::AUUinvB)
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::AUBUinv => "sAUBU-1",
            Relation::AUUinvB => "sAUU-1B",
            Relation::AZBZdag => "sAZBZ+",
            Relation::AZZdagB => "sAZZ+B",
        })
    }
}

impl FromStr for Relation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Relation::ALL
            .into_iter()
            .find(|r| r.to_string() == s)
            .ok_or_else(|| Error::Parse(format!("relation `{s}`; expected one of sAUBU-1, sAUU-1B, sAZBZ+, sAZZ+B")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LemmaQuery {
    pub relation: Relation,
    pub lambda: Partition,
    /// Partition of the first factor in the two-Schur relations; `None` means λ.
    pub mu: Option<Partition>,
    pub a: Vec<Vec<Rational>>,
    pub b: Vec<Vec<Rational>>,
    pub samples: usize,
    pub seed: u64,
}

impl LemmaQuery {
    pub fn matrix_size(&self) -> usize {
        self.a.len()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaReport {
    pub relation: Relation,
    pub lambda: Partition,
    pub mu: Partition,
    pub matrix_size: usize,
    #[serde(flatten)]
    pub estimate: MCEstimate,
    #[serde(serialize_with = "serialize_complex")]
    pub exact: Complex64,
    pub exact_rational: String,
    pub sigmas: f64,
    pub pass: bool,
}

fn schur_of(lambda: &Partition, m: &CMatrix) -> Result<Complex64> {
    eval_schur(lambda, &PowerAlphabet::from_matrix(m, lambda.weight()))
}

fn exact_value(q: &LemmaQuery, mu: &Partition) -> Result<Rational> {
    let n = q.matrix_size();
    let lambda = &q.lambda;
    let traces = |rows: &[Vec<Rational>]| PowerAlphabet::matrix_traces(rows, lambda.weight());
    let denominator = if q.relation.unitary() {
        pochhammer_lambda(&int(n as i64), lambda) * s_infinity(lambda)
    } else {
        s_infinity(lambda)
    };
    if denominator.is_zero() {
        // ℓ(λ) > N: the integrand is identically zero
        return Ok(Rational::zero());
    }
    let numerator = if q.relation.two_schur() {
        if mu != lambda {
            return Ok(Rational::zero());
        }
        eval_schur(lambda, &traces(&rational_product(&[&q.a, &q.b], n))?)?
    } else {
        eval_schur(lambda, &traces(&q.a)?)? * eval_schur(lambda, &traces(&q.b)?)?
    };
    Ok(numerator / denominator)
}

/// Monte Carlo estimate of one averaging relation against its exact right side.
pub fn mc_lemma1(q: &LemmaQuery) -> Result<LemmaReport> {
    let n = q.matrix_size();
    let mu = q.mu.clone().unwrap_or_else(|| q.lambda.clone());
    if q.lambda.weight() > LEMMA_MAX_WEIGHT || mu.weight() > LEMMA_MAX_WEIGHT {
        return Err(Error::guard(format!("partitions limited to weight <= {LEMMA_MAX_WEIGHT}")));
    }
    if n > LEMMA_MAX_SIZE {
        return Err(Error::guard(format!("matrix size limited to N <= {LEMMA_MAX_SIZE}, got {n}")));
    }
    if q.samples < LEMMA_MIN_SAMPLES {
        return Err(Error::out_of_range("samples", format!("{}; need at least {LEMMA_MIN_SAMPLES}", q.samples)));
    }
    if q.mu.is_some() && !q.relation.two_schur() {
        return Err(Error::out_of_range("mu", "only the two-Schur relations take a second partition"));
    }
    let a = to_complex_matrix(&q.a)?;
    let b = to_complex_matrix(&q.b)?;
    if b.nrows() != n {
        return Err(Error::Parse("A and B must have the same size".into()));
    }
    let exact_rational = exact_value(q, &mu)?;
    let lambda = &q.lambda;
    let est = estimate(q.samples, q.seed, 1, |rng| {
        let v = match q.relation {
            Relation::AUBUinv => {
                let u = sample_haar_unitary(n, rng);
                schur_of(lambda, &(&a * &u * &b * u.adjoint()))?
            }
            Relation::AUUinvB => {
                let u = sample_haar_unitary(n, rng);
                schur_of(&mu, &(&a * &u))? * schur_of(lambda, &(u.adjoint() * &b))?
            }
            Relation::AZBZdag => {
                let z = sample_ginibre(n, rng);
                schur_of(lambda, &(&a * &z * &b * z.adjoint()))?
            }
            Relation::AZZdagB => {
                let z = sample_ginibre(n, rng);
                schur_of(&mu, &(&a * &z))? * schur_of(lambda, &(z.adjoint() * &b))?
            }
        };
        Ok(vec![v])
    })?[0];
    let exact = to_complex(&exact_rational);
    Ok(LemmaReport {
        relation: q.relation,
        lambda: lambda.clone(),
        mu,
        matrix_size: n,
        sigmas: est.sigmas(exact),
        pass: est.passes(exact),
        estimate: est,
        exact,
        exact_rational: format_rational(&exact_rational),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn diag(d: &[i64]) -> Vec<Vec<Rational>> {
        (0..d.len())
            .map(|i| (0..d.len()).map(|j| if i == j { int(d[i]) } else { int(0) }).collect())
            .collect()
    }

    fn query(relation: Relation, lambda: &str, a: Vec<Vec<Rational>>, b: Vec<Vec<Rational>>) -> LemmaQuery {
        LemmaQuery {
            relation,
            lambda: lambda.parse().unwrap(),
            mu: None,
            a,
            b,
            samples: 20_000,
            seed: 42,
        }
    }

    #[test]
    fn exact_values() {
        let q = query(Relation::AZBZdag, "2", diag(&[1, 1]), diag(&[1, 1]));
        assert_eq!(exact_value(&q, &q.lambda).unwrap(), int(18));
        let q = query(Relation::AUBUinv, "1", diag(&[1, 2]), diag(&[3, -1]));
        assert_eq!(exact_value(&q, &q.lambda).unwrap(), int(3));
        let q = query(Relation::AUUinvB, "1,1,1", diag(&[1, 2]), diag(&[3, -1]));
        assert_eq!(exact_value(&q, &q.lambda).unwrap(), int(0));
    }

    #[test]
    fn first_order_relations() {
        let a = vec![vec![int(1), rat(1, 2)], vec![int(0), int(2)]];
        let b = vec![vec![rat(1, 3), int(0)], vec![int(1), int(-1)]];
        for rel in Relation::ALL {
            let r = mc_lemma1(&query(rel, "1", a.clone(), b.clone())).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn orthogonality_of_different_partitions() {
        let mut q = query(Relation::AZZdagB, "2", diag(&[1, 2]), diag(&[1, 1]));
        q.mu = Some("1,1".parse().unwrap());
        let r = mc_lemma1(&q).unwrap();
        assert_eq!(r.exact_rational, "0/1");
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn guards_and_parsing() {
        let q = query(Relation::AZBZdag, "5", diag(&[1, 1]), diag(&[1, 1]));
        assert!(mc_lemma1(&q).unwrap_err().is_guard());
        let q = query(Relation::AZBZdag, "1", diag(&[1; 7]), diag(&[1; 7]));
        assert!(mc_lemma1(&q).unwrap_err().is_guard());
        for r in Relation::ALL {
            assert_eq!(r.to_string().parse::<Relation>().unwrap(), r);
        }
        assert!("sXYZ".parse::<Relation>().is_err());
    }
}
