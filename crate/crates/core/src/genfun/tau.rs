use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hurwitz::Cutoff;
use crate::partition::{partitions_of, Partition};
use crate::scalar::{int, pow_i, rat, Rational};
use crate::symfunc::{eval_schur, PowerAlphabet, SparseSymPoly};

use super::content::ContentFunction;
use super::series::{names, schur_expansion, ProfileSeries, SeriesKey};

pub const TAU_MAX_DEGREE: usize = 8;
pub const UNBRANCHED_MAX_DEGREE: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TauKind {
    /// Two alphabets, `Σ r_λ s_λ(p) s_λ(p*)`.
    Tl,
    /// One alphabet, `Σ r_λ s_λ(p)`.
    Bkp,
}

fn degree_guard(d_max: usize) -> Result<()> {
    if d_max > TAU_MAX_DEGREE {
        return Err(Error::guard(format!(
            "tau series limited to d_max <= {TAU_MAX_DEGREE}, got {d_max}"
        )));
    }
    Ok(())
}

/// `Σ_λ s_λ(p) s_λ(p*)`.
pub fn tau1_tl(d_max: usize) -> Result<ProfileSeries> {
    degree_guard(d_max)?;
    schur_expansion(2, vec![], d_max, Cutoff::Unbounded, |_| Ok(vec![(vec![], Rational::one())]))
}

/// `Σ_{ℓ(λ) <= N} s_λ(p)`.
pub fn tau1_bkp(cutoff: Cutoff, d_max: usize) -> Result<ProfileSeries> {
    degree_guard(d_max)?;
    schur_expansion(1, vec![], d_max, cutoff, |_| Ok(vec![(vec![], Rational::one())]))
}

/// Content-product weighted tau series; `r ≡ 1` gives the simplest ones.
pub fn hyp_tau(
    kind: TauKind,
    r: &ContentFunction,
    n: &Rational,
    cutoff: Cutoff,
    d_max: usize,
) -> Result<ProfileSeries> {
    degree_guard(d_max)?;
    let alphabets = match kind {
        TauKind::Tl => 2,
        TauKind::Bkp => 1,
    };
    schur_expansion(alphabets, vec![], d_max, cutoff, |lambda| {
        Ok(vec![(vec![], r.content_product(n, lambda)?)])
    })
}

/// Compares `Σ_λ s_λ(x)` with `Π (1 - x_i)^{-1} Π_{i<j} (1 - x_i x_j)^{-1}`,
/// graded by total degree in the `x`'s.
pub fn bkp_product_form_check(xs: &[Rational], d_max: usize) -> Result<bool> {
    degree_guard(d_max)?;
    let rhs = bkp_product_form(xs, d_max);
    let alphabet = PowerAlphabet::explicit(power_sums(xs, d_max));
    for (d, expected) in rhs.iter().enumerate() {
        let mut lhs = Rational::zero();
        for lambda in partitions_of(d) {
            lhs += eval_schur(&lambda, &alphabet)?;
        }
        if &lhs != expected {
            return Ok(false);
        }
    }
    Ok(true)
}

fn power_sums(xs: &[Rational], m_max: usize) -> Vec<Rational> {
    (1..=m_max)
        .map(|m| xs.iter().fold(Rational::zero(), |acc, x| acc + pow_i(x, m as i64).unwrap()))
        .collect()
}

/// Graded pieces `[u^d]` of the product with `x_i → u x_i`.
pub fn bkp_product_form(xs: &[Rational], d_max: usize) -> Vec<Rational> {
    let mut series = vec![Rational::zero(); d_max + 1];
    series[0] = Rational::one();
    let mut geometric = |ratio: Rational, step: usize| {
        // multiply by 1 / (1 - ratio u^step)
        for d in step..=d_max {
            let prev = series[d - step].clone();
            series[d] += &ratio * prev;
        }
    };
    for x in xs {
        geometric(x.clone(), 1);
    }
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            geometric(&xs[i] * &xs[j], 2);
        }
    }
    series
}

/// `exp(Σ p_m²/2m + Σ_{m odd} p_m/m)` as a polynomial in power sums.
pub fn bkp_exponent_form(d_max: usize) -> SparseSymPoly {
    let mut exponent = SparseSymPoly::zero();
    for m in 1..=d_max {
        if 2 * m <= d_max {
            exponent.add_term(Partition::from_unsorted(vec![m, m]), rat(1, 2 * m as i64));
        }
        if m % 2 == 1 {
            exponent.add_term(Partition::row(m), rat(1, m as i64));
        }
    }
    let mut total = SparseSymPoly::one();
    let mut power = SparseSymPoly::one();
    for j in 1..=d_max {
        power = power.mul_truncated(&exponent, d_max).scale(&rat(1, j as i64));
        total = total.add(&power);
    }
    total
}

/// The simplest BKP series against its exponential form.
pub fn bkp_exponential_check(d_max: usize) -> Result<bool> {
    let tau = tau1_bkp(Cutoff::Unbounded, d_max)?;
    let mut as_poly = SparseSymPoly::zero();
    for (k, v) in tau.terms() {
        as_poly.add_term(k.profiles[0].clone(), v.clone());
    }
    Ok(as_poly == bkp_exponent_form(d_max))
}

/// `h^{-2} Σ p_m² c^{2m}/2m + h^{-1} Σ_{m odd} p_m c^m/m`; aux is `[c, h^{-1}]`.
pub fn single_branch_connected(d_max: usize) -> Result<ProfileSeries> {
    degree_guard(d_max)?;
    let mut s = ProfileSeries::new(1, names(&["c", "h^-1"]), d_max);
    for m in 1..=d_max {
        if 2 * m <= d_max {
            let key = SeriesKey::new(2 * m, vec![Partition::from_unsorted(vec![m, m])], vec![2 * m as i64, 2]);
            s.add_term(key, rat(1, 2 * m as i64));
        }
        if m % 2 == 1 {
            let key = SeriesKey::new(m, vec![Partition::row(m)], vec![m as i64, 1]);
            s.add_term(key, rat(1, m as i64));
        }
    }
    Ok(s)
}

/// Exponential of [`single_branch_connected`].
///
/// The coefficient of `c^d h^{-ℓ(Δ)} p_Δ` is the Hurwitz number of the
/// projective plane with one branch point of profile Δ, where `Δ = (1^d)`
/// stands for the unbranched count.
pub fn single_branch_generator(d_max: usize) -> Result<ProfileSeries> {
    single_branch_connected(d_max)?.exp()
}

/// `[c^d] e^{c²/2 + c}` for `d = 0..=d_max`.
pub fn unbranched_gen(d_max: usize) -> Result<Vec<Rational>> {
    if d_max > UNBRANCHED_MAX_DEGREE {
        return Err(Error::guard(format!(
            "unbranched generator limited to d_max <= {UNBRANCHED_MAX_DEGREE}, got {d_max}"
        )));
    }
    // f' = (1 + c) f gives (d + 1) a_{d+1} = a_d + a_{d-1}.
    let mut a = vec![Rational::one(), Rational::one()];
    for d in 1..d_max {
        let next = (&a[d] + &a[d - 1]) / int(d as i64 + 1);
        a.push(next);
    }
    a.truncate(d_max + 1);
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hurwitz::hurwitz_value;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn tl_degree_one() {
        let t = tau1_tl(3).unwrap();
        assert_eq!(t.coefficient(&SeriesKey::new(1, vec![p("1"), p("1")], vec![])), int(1));
        assert_eq!(t.coefficient(&SeriesKey::new(0, vec![p(""), p("")], vec![])), int(1));
    }

    #[test]
    fn bkp_one_variable_is_geometric() {
        let x = rat(2, 5);
        assert!(bkp_product_form_check(std::slice::from_ref(&x), 3).unwrap());
        let pieces = bkp_product_form(std::slice::from_ref(&x), 3);
        assert_eq!(pieces, vec![int(1), x.clone(), &x * &x, &x * &x * &x]);
        assert!(bkp_product_form_check(&[rat(1, 2), rat(-1, 3), int(2)], 6).unwrap());
    }

    #[test]
    fn bkp_exponential() {
        for d in 0..=6 {
            assert!(bkp_exponential_check(d).unwrap(), "d={d}");
        }
    }

    #[test]
    fn trivial_content_is_tau1() {
        let r = ContentFunction::One;
        assert_eq!(hyp_tau(TauKind::Tl, &r, &int(0), Cutoff::Unbounded, 4).unwrap(), tau1_tl(4).unwrap());
        assert_eq!(
            hyp_tau(TauKind::Bkp, &r, &int(5), Cutoff::AtMost(2), 4).unwrap(),
            tau1_bkp(Cutoff::AtMost(2), 4).unwrap()
        );
    }

    #[test]
    fn single_branch_values() {
        let g = single_branch_generator(6).unwrap();
        let coeff = |d: usize, delta: &str| {
            let delta = p(delta);
            let l = delta.length() as i64;
            g.coefficient(&SeriesKey::new(d, vec![delta], vec![d as i64, l]))
        };
        assert_eq!(coeff(3, "3"), rat(1, 3));
        assert_eq!(coeff(3, "2,1"), int(0));
        assert_eq!(coeff(3, "1,1,1"), rat(2, 3));
        assert_eq!(coeff(2, "2"), int(0));
        for d in 1..=6 {
            assert_eq!(coeff(d, &vec!["1"; d].join(",")), hurwitz_value(1, d, &[]).unwrap());
        }
    }

    #[test]
    fn unbranched_values() {
        let a = unbranched_gen(10).unwrap();
        assert_eq!(a[0], int(1));
        assert_eq!(a[3], rat(2, 3));
        assert_eq!(a[4], rat(5, 12));
        for (d, v) in a.iter().enumerate() {
            assert_eq!(v, &hurwitz_value(1, d, &[]).unwrap(), "d={d}");
        }
        assert_eq!(unbranched_gen(0).unwrap(), vec![int(1)]);
        assert!(unbranched_gen(13).unwrap_err().is_guard());
    }
}
