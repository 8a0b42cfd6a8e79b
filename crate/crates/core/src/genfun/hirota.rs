//! Truncated bilinear checks for BKP hypergeometric tau functions with two
//! discrete times.
//!
//! `τ(N, n, p) = g(n) Σ_{ℓ(λ) <= N} r_λ(n) s_λ(p)`, with `τ = 0` for `N < 0`.
//! Derivatives are in the times `t_m = p_m / m`, so `∂_{t_1} = ∂_{p_1}` and
//! `∂_{t_2} = 2 ∂_{p_2}`. The normalisation fixes `U_0 = 0`:
//! `e^{-U_i} = Π_{j=1}^{i} r(j)` for `i >= 0` and `Π_{j=i+1}^{0} r(j)^{-1}` for
//! `i < 0`, while `g(n) = Π_{i=0}^{n-1} e^{-U_i}` for `n > 0` and
//! `Π_{i=n}^{-1} e^{U_i}` for `n < 0`.
//!
//! With `A = τ(N,n)`, `B = τ(N+1,n+1)` the first equation is
//!
//! `½ ∂₂A·B − ½ A·∂₂B + ½ A''·B + ½ A·B'' − A'·B' = τ(N+2,n+2) τ(N−1,n−1)`
//!
//! and with `X = τ(N,n+1)`, `Y = τ(N+1,n+1)` the second is
//!
//! `½ X·Y'' − ½ X''·Y + ½ X·∂₂Y − ½ ∂₂X·Y = τ(N+1,n+2)'·τ(N,n) − τ(N+2,n+2)'·τ(N−1,n)`.

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::{partitions_up_to, Partition};
use crate::scalar::{int, rat, Rational};
use crate::symfunc::{schur_poly, SparseSymPoly};

use super::content::ContentFunction;

pub const HIROTA_MAX_DEGREE: usize = 6;

/// Discrete times `n` at which both equations are checked.
pub const HIROTA_SHIFTS: [i64; 3] = [-1, 0, 1];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HirotaCase {
    pub n_size: i64,
    pub n: i64,
    pub first: bool,
    pub second: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HirotaReport {
    pub d_max: usize,
    pub cases: Vec<HirotaCase>,
}

impl HirotaReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.first && c.second)
    }
}

fn e_minus_u(r: &ContentFunction, i: i64) -> Result<Rational> {
    let mut acc = Rational::one();
    if i >= 0 {
        for j in 1..=i {
            acc *= r.eval(&int(j))?;
        }
    } else {
        for j in i + 1..=0 {
            let v = r.eval(&int(j))?;
            if v.is_zero() {
                return Err(Error::ContentUndefined(format!("r({j}) = 0 in the normalisation")));
            }
            acc /= v;
        }
    }
    Ok(acc)
}

/// The `n`-only normalisation factor.
pub fn normalisation(r: &ContentFunction, n: i64) -> Result<Rational> {
    let mut acc = Rational::one();
    if n > 0 {
        for i in 0..n {
            acc *= e_minus_u(r, i)?;
        }
    } else {
        for i in n..0 {
            let v = e_minus_u(r, i)?;
            if v.is_zero() {
                return Err(Error::ContentUndefined(format!("e^(-U_{i}) = 0")));
            }
            acc /= v;
        }
    }
    Ok(acc)
}

struct TauTable<'a> {
    r: &'a ContentFunction,
    weight: usize,
    lambdas: Vec<Partition>,
    cache: HashMap<(i64, i64), SparseSymPoly>,
}

impl TauTable<'_> {
    fn get(&mut self, n_size: i64, n: i64) -> Result<SparseSymPoly> {
        if let Some(t) = self.cache.get(&(n_size, n)) {
            return Ok(t.clone());
        }
        let mut tau = SparseSymPoly::zero();
        if n_size >= 0 {
            let g = normalisation(self.r, n)?;
            for lambda in self.lambdas.iter().filter(|l| l.length() as i64 <= n_size) {
                let w = self.r.content_product(&int(n), lambda)?;
                if w.is_zero() {
                    continue;
                }
                tau = tau.add(&schur_poly(lambda).scale(&(&w * &g)));
            }
        }
        debug_assert!(tau.max_weight() <= self.weight);
        self.cache.insert((n_size, n), tau.clone());
        Ok(tau)
    }
}

fn d1(f: &SparseSymPoly) -> SparseSymPoly {
    f.derivative(1)
}

fn d11(f: &SparseSymPoly) -> SparseSymPoly {
    f.derivative(1).derivative(1)
}

fn d2(f: &SparseSymPoly) -> SparseSymPoly {
    f.derivative(2).scale(&int(2))
}

/// Both elementary equations at `N`, for each `n` in [`HIROTA_SHIFTS`], up to total degree `d_max`.
pub fn verify_hirota_elementary(r: &ContentFunction, n_size: i64, d_max: usize) -> Result<HirotaReport> {
    if d_max > HIROTA_MAX_DEGREE {
        return Err(Error::guard(format!(
            "Hirota check limited to d_max <= {HIROTA_MAX_DEGREE}, got {d_max}"
        )));
    }
    if n_size < 0 {
        return Err(Error::out_of_range("N", format!("{n_size} is negative")));
    }
    // two derivatives in p_1 or one in p_2 cost two units of weight
    let weight = d_max + 2;
    let mut table = TauTable {
        r,
        weight,
        lambdas: partitions_up_to(weight),
        cache: HashMap::new(),
    };
    let half = rat(1, 2);
    let prod = |a: &SparseSymPoly, b: &SparseSymPoly| a.mul_truncated(b, d_max);
    let mut cases = Vec::new();
    for &n in &HIROTA_SHIFTS {
        let a = table.get(n_size, n)?;
        let b = table.get(n_size + 1, n + 1)?;
        let lhs = prod(&d2(&a), &b)
            .sub(&prod(&a, &d2(&b)))
            .add(&prod(&d11(&a), &b))
            .add(&prod(&a, &d11(&b)))
            .scale(&half)
            .sub(&prod(&d1(&a), &d1(&b)));
        let rhs = prod(&table.get(n_size + 2, n + 2)?, &table.get(n_size - 1, n - 1)?);
        let first = lhs.truncate(d_max) == rhs.truncate(d_max);

        let x = table.get(n_size, n + 1)?;
        let y = table.get(n_size + 1, n + 1)?;
        let lhs = prod(&x, &d11(&y))
            .sub(&prod(&d11(&x), &y))
            .add(&prod(&x, &d2(&y)))
            .sub(&prod(&d2(&x), &y))
            .scale(&half);
        let rhs = prod(&d1(&table.get(n_size + 1, n + 2)?), &table.get(n_size, n)?)
            .sub(&prod(&d1(&table.get(n_size + 2, n + 2)?), &table.get(n_size - 1, n)?));
        let second = lhs.truncate(d_max) == rhs.truncate(d_max);
        cases.push(HirotaCase {
            n_size,
            n,
            first,
            second,
        });
    }
    Ok(HirotaReport { d_max, cases })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_content() {
        for n_size in 0..=3 {
            let rep = verify_hirota_elementary(&ContentFunction::One, n_size, 4).unwrap();
            assert!(rep.passed(), "{rep:?}");
        }
    }

    #[test]
    fn shifted_linear_content() {
        let r = ContentFunction::linear(rat(1, 2));
        for n_size in 0..=3 {
            let rep = verify_hirota_elementary(&r, n_size, 3).unwrap();
            assert!(rep.passed(), "{rep:?}");
        }
    }

    #[test]
    fn rational_content() {
        let r: ContentFunction = "rational:1/3,5/2;-1/7".parse().unwrap();
        assert!(verify_hirota_elementary(&r, 2, 3).unwrap().passed());
    }

    #[test]
    fn wrong_normalisation_breaks_the_first_equation() {
        // dropping g(n) leaves an n-dependent factor the equations do not absorb
        let r = ContentFunction::linear(rat(1, 2));
        let mut table = TauTable {
            r: &r,
            weight: 5,
            lambdas: partitions_up_to(5),
            cache: HashMap::new(),
        };
        let a = table.get(1, 1).unwrap();
        let b = table.get(2, 2).unwrap().scale(&normalisation(&r, 2).unwrap().recip());
        let half = rat(1, 2);
        let lhs = d2(&a).mul_truncated(&b, 3)
            .sub(&a.mul_truncated(&d2(&b), 3))
            .add(&d11(&a).mul_truncated(&b, 3))
            .add(&a.mul_truncated(&d11(&b), 3))
            .scale(&half)
            .sub(&d1(&a).mul_truncated(&d1(&b), 3));
        let rhs = table.get(3, 3).unwrap().mul_truncated(&table.get(0, 0).unwrap(), 3);
        assert_ne!(lhs.truncate(3), rhs.truncate(3));
    }

    #[test]
    fn vanishing_normalisation_is_reported() {
        let r = ContentFunction::linear(int(0));
        assert!(matches!(
            verify_hirota_elementary(&r, 1, 2),
            Err(Error::ContentUndefined(_))
        ));
        assert!(verify_hirota_elementary(&ContentFunction::One, 1, 7).unwrap_err().is_guard());
    }
}
