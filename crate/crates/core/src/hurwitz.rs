//! Hurwitz numbers through the character formula, and the weighted sums built on it.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::characters::{character_table, chi_sum, tilde_phi, CharacterTable};
use crate::error::{Error, Result};
use crate::partition::{common_weight, euler_char_cover, partitions_of, Partition};
use crate::scalar::{big, factorial, int, pow_i, Rational};

/// Bound on `ℓ(λ)` in the character sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Cutoff {
    Unbounded,
    AtMost(usize),
}

impl Cutoff {
    pub fn admits(&self, lambda: &Partition) -> bool {
        match self {
            Cutoff::Unbounded => true,
            Cutoff::AtMost(n) => lambda.length() <= *n,
        }
    }

    /// True when no partition of `d` is cut away.
    pub fn covers(&self, d: usize) -> bool {
        match self {
            Cutoff::Unbounded => true,
            Cutoff::AtMost(n) => *n >= d,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HurwitzQuery {
    pub euler: i64,
    pub degree: usize,
    pub profiles: Vec<Partition>,
    pub cutoff: Cutoff,
}

impl HurwitzQuery {
    pub fn new(euler: i64, degree: usize, profiles: Vec<Partition>, cutoff: Cutoff) -> Result<Self> {
        if degree == 0 {
            return Err(Error::out_of_range("degree", "must be at least 1"));
        }
        if cutoff == Cutoff::AtMost(0) {
            return Err(Error::out_of_range("cutoff", "must be at least 1"));
        }
        common_weight(degree, &profiles)?;
        Ok(HurwitzQuery {
            euler,
            degree,
            profiles,
            cutoff,
        })
    }

    pub fn unbounded(euler: i64, degree: usize, profiles: Vec<Partition>) -> Result<Self> {
        Self::new(euler, degree, profiles, Cutoff::Unbounded)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HurwitzResult {
    pub value: Rational,
    pub query: HurwitzQuery,
    pub is_true_hurwitz: bool,
    /// Euler characteristic of the covering surface (Riemann–Hurwitz).
    pub euler_cover: i64,
}

pub fn hurwitz(q: &HurwitzQuery) -> Result<HurwitzResult> {
    let value = hurwitz_sum(q.euler, q.degree, &q.profiles, q.cutoff)?;
    Ok(HurwitzResult {
        value,
        query: q.clone(),
        is_true_hurwitz: q.cutoff.covers(q.degree),
        euler_cover: euler_char_cover(q.euler, q.degree, &q.profiles)?,
    })
}

/// Per-λ view into the character table.
pub(crate) struct Row<'a> {
    table: &'a CharacterTable,
    row: usize,
    pub lambda: &'a Partition,
    dim: Rational,
}

impl Row<'_> {
    pub fn phi(&self, delta: &Partition) -> Result<Rational> {
        let j = self.table.index_of(delta).ok_or(Error::WeightMismatch {
            expected: self.table.degree(),
            found: delta.weight(),
        })?;
        let chi = self.table.rows()[self.row][j];
        Ok(big(&delta.cycle_class_size()) * int(chi) / &self.dim)
    }
}

/// `Σ_{λ ⊢ d, admitted} (dim λ / d!)^E · weight(λ)`.
pub(crate) fn character_sum<F>(euler: i64, d: usize, cutoff: Cutoff, mut weight: F) -> Result<Rational>
where
    F: FnMut(&Row<'_>) -> Result<Rational>,
{
    let table = character_table(d);
    let fact = big(&factorial(d));
    let mut total = Rational::zero();
    for (row, lambda) in table.partitions().iter().enumerate() {
        if !cutoff.admits(lambda) {
            continue;
        }
        let dim = int(table.dim(row));
        let r = Row {
            table: &table,
            row,
            lambda,
            dim: dim.clone(),
        };
        let w = weight(&r)?;
        if w.is_zero() {
            continue;
        }
        total += pow_i(&(dim / &fact), euler)? * w;
    }
    Ok(total)
}

/// `Σ_λ (dim λ / d!)^E Π φ_λ(Δ^i)`; `d = 0` gives 1.
pub fn hurwitz_sum(euler: i64, d: usize, profiles: &[Partition], cutoff: Cutoff) -> Result<Rational> {
    common_weight(d, profiles)?;
    character_sum(euler, d, cutoff, |row| {
        profiles
            .iter()
            .try_fold(Rational::one(), |acc, delta| Ok(acc * row.phi(delta)?))
    })
}

/// Unbounded-cutoff shorthand.
pub fn hurwitz_value(euler: i64, d: usize, profiles: &[Partition]) -> Result<Rational> {
    hurwitz_sum(euler, d, profiles, Cutoff::Unbounded)
}

fn phi_k_row(row: &Row<'_>, d: usize, k: usize) -> Result<Rational> {
    if k == 0 {
        return Ok(Rational::one());
    }
    partitions_of(d)
        .iter()
        .filter(|delta| delta.length() + k == d)
        .try_fold(Rational::zero(), |acc, delta| Ok(acc + row.phi(delta)?))
}

/// Sum of Hurwitz numbers over all extra profiles of the given colengths.
pub fn gj_sum(
    euler: i64,
    d: usize,
    profiles: &[Partition],
    colengths: &[usize],
    cutoff: Cutoff,
) -> Result<Rational> {
    common_weight(d, profiles)?;
    if let Some(&bad) = colengths.iter().find(|&&l| d == 0 || l >= d) {
        return Err(Error::out_of_range("colength", format!("{bad} for d={d}")));
    }
    character_sum(euler, d, cutoff, |row| {
        let mut w = Rational::one();
        for delta in profiles {
            w *= row.phi(delta)?;
        }
        for &l in colengths {
            w *= phi_k_row(row, d, l)?;
        }
        Ok(w)
    })
}

/// Weighted sums with `tilde φ_{k_i}(λ; n_i)` factors; `k_i = 0` contributes 1.
pub fn gen_sum(
    euler: i64,
    d: usize,
    profiles: &[Partition],
    pairs: &[(usize, Rational)],
    cutoff: Cutoff,
) -> Result<Rational> {
    common_weight(d, profiles)?;
    character_sum(euler, d, cutoff, |row| {
        let mut w = Rational::one();
        for delta in profiles {
            w *= row.phi(delta)?;
        }
        for (k, n) in pairs {
            w *= tilde_phi(row.lambda, *k, n);
        }
        Ok(w)
    })
}

const IDENTITY_GUARD: usize = 7;

fn identity_guard(d: usize) -> Result<()> {
    if d > IDENTITY_GUARD {
        return Err(Error::guard(format!(
            "identity checks limited to d <= {IDENTITY_GUARD}, got {d}"
        )));
    }
    Ok(())
}

/// Cutting the base along a curve: both sides of the gluing identity.
pub fn glue_check(
    euler: i64,
    euler1: i64,
    d: usize,
    left: &[Partition],
    right: &[Partition],
) -> Result<bool> {
    identity_guard(d)?;
    let mut all = left.to_vec();
    all.extend_from_slice(right);
    let lhs = hurwitz_value(euler + euler1, d, &all)?;
    let fact = big(&factorial(d));
    let mut rhs = Rational::zero();
    for delta in partitions_of(d) {
        let mut a = left.to_vec();
        a.push(delta.clone());
        let mut b = vec![delta.clone()];
        b.extend_from_slice(right);
        let weight = &fact / big(&delta.cycle_class_size());
        rhs += weight * hurwitz_value(euler + 1, d, &a)? * hurwitz_value(euler1 + 1, d, &b)?;
    }
    Ok(lhs == rhs)
}

/// `H^{E-1,F}(Δs) = Σ_Δ H^{E,F+1}(Δs, Δ) χ(Δ)`.
pub fn hurwitz_down_check(euler: i64, d: usize, profiles: &[Partition]) -> Result<bool> {
    identity_guard(d)?;
    let lhs = hurwitz_value(euler - 1, d, profiles)?;
    let mut rhs = Rational::zero();
    for delta in partitions_of(d) {
        let mut ps = profiles.to_vec();
        ps.push(delta.clone());
        rhs += hurwitz_value(euler, d, &ps)? * int(chi_sum(&delta));
    }
    Ok(lhs == rhs)
}

/// Trading `g` handles for `2g` extra full-cycle branch points.
pub fn d_cycle_identity_check(euler: i64, d: usize, profiles: &[Partition], g: usize) -> Result<bool> {
    identity_guard(d)?;
    if d == 0 {
        return Err(Error::out_of_range("degree", "must be at least 1"));
    }
    let full = Partition::row(d);
    let mut lhs_profiles = profiles.to_vec();
    lhs_profiles.push(full.clone());
    let lhs = hurwitz_value(euler - 2 * g as i64, d, &lhs_profiles)?;
    let mut rhs_profiles = lhs_profiles.clone();
    rhs_profiles.extend(std::iter::repeat_n(full, 2 * g));
    let rhs = pow_i(&int(d as i64), 2 * g as i64)? * hurwitz_value(euler, d, &rhs_profiles)?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::phi_k;
    use crate::scalar::rat;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn hurwitz_examples() {
        let r = hurwitz(&HurwitzQuery::unbounded(1, 3, vec![]).unwrap()).unwrap();
        assert_eq!(r.value, rat(2, 3));
        assert!(r.is_true_hurwitz);
        assert_eq!(r.euler_cover, 3);
        let r = hurwitz(&HurwitzQuery::unbounded(1, 3, vec![p("3")]).unwrap()).unwrap();
        assert_eq!(r.value, rat(1, 3));
        assert_eq!(r.euler_cover, 1);
        assert_eq!(hurwitz_value(2, 2, &[]).unwrap(), rat(1, 2));
        assert_eq!(hurwitz_value(1, 3, &[p("2,1")]).unwrap(), int(0));
        assert_eq!(hurwitz_value(1, 3, &[p("1,1,1")]).unwrap(), rat(2, 3));
    }

    #[test]
    fn query_validation() {
        assert!(matches!(
            HurwitzQuery::unbounded(2, 3, vec![p("2")]),
            Err(Error::WeightMismatch { .. })
        ));
        assert!(HurwitzQuery::unbounded(2, 0, vec![]).is_err());
        assert!(HurwitzQuery::new(2, 2, vec![], Cutoff::AtMost(0)).is_err());
    }

    #[test]
    fn cutoff_flag() {
        for n in 1..=5 {
            let q = HurwitzQuery::new(1, 4, vec![], Cutoff::AtMost(n)).unwrap();
            assert_eq!(hurwitz(&q).unwrap().is_true_hurwitz, n >= 4);
        }
        // ℓ(λ) <= 1 keeps only λ = (d)
        let q = HurwitzQuery::new(2, 3, vec![], Cutoff::AtMost(1)).unwrap();
        assert_eq!(hurwitz(&q).unwrap().value, rat(1, 36));
    }

    #[test]
    fn identity_profile_is_neutral() {
        for d in 1..=6 {
            let base = hurwitz_value(2, d, &[]).unwrap();
            assert_eq!(hurwitz_value(2, d, &[Partition::column(d)]).unwrap(), base);
        }
    }

    #[test]
    fn denominators_divide_factorial_powers() {
        for d in 1..=5 {
            for delta in partitions_of(d) {
                let v = hurwitz_value(1, d, &[delta.clone(), delta]).unwrap();
                let f = factorial(d);
                let mut den = v.denom().clone();
                for _ in 0..4 {
                    let g = num_integer_gcd(&den, &f);
                    den /= g;
                }
                assert!(den.is_one(), "denominator of {v} for d={d}");
            }
        }
    }

    fn num_integer_gcd(a: &num_bigint::BigInt, b: &num_bigint::BigInt) -> num_bigint::BigInt {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = &a % &b;
            a = b;
            b = r;
        }
        a
    }

    #[test]
    fn gj_examples() {
        assert_eq!(
            gj_sum(2, 3, &[p("3")], &[], Cutoff::Unbounded).unwrap(),
            hurwitz_value(2, 3, &[p("3")]).unwrap()
        );
        assert_eq!(gj_sum(2, 2, &[p("2")], &[1], Cutoff::Unbounded).unwrap(), rat(1, 2));
        assert_eq!(gj_sum(1, 3, &[], &[2], Cutoff::Unbounded).unwrap(), rat(1, 3));
        assert!(gj_sum(1, 3, &[], &[3], Cutoff::Unbounded).is_err());
    }

    #[test]
    fn gj_equals_sum_over_colength_classes() {
        for d in 1..=5 {
            for l in 0..d {
                let direct = gj_sum(2, d, &[], &[l], Cutoff::Unbounded).unwrap();
                let summed: Rational = partitions_of(d)
                    .into_iter()
                    .filter(|delta| delta.colength() == l)
                    .map(|delta| hurwitz_value(2, d, &[delta]).unwrap())
                    .sum();
                assert_eq!(direct, summed);
            }
        }
    }

    #[test]
    fn gen_examples() {
        for d in 1..=4 {
            for k in 1..d {
                assert_eq!(
                    gen_sum(1, d, &[], &[(k, int(1))], Cutoff::Unbounded).unwrap(),
                    gj_sum(1, d, &[], &[k], Cutoff::Unbounded).unwrap()
                );
            }
        }
        assert_eq!(
            gen_sum(2, 3, &[p("2,1")], &[], Cutoff::Unbounded).unwrap(),
            hurwitz_value(2, 3, &[p("2,1")]).unwrap()
        );
        assert_eq!(gen_sum(2, 2, &[], &[(1, int(2))], Cutoff::Unbounded).unwrap(), int(0));
        assert_eq!(phi_k(&p("1,1"), 1).unwrap(), int(-1));
    }

    #[test]
    fn structural_identities() {
        assert!(glue_check(1, 1, 3, &[], &[]).unwrap());
        assert!(glue_check(2, 0, 4, &[p("2,2")], &[p("3,1")]).unwrap());
        assert!(glue_check(1, 1, 1, &[], &[]).unwrap());
        assert!(hurwitz_down_check(2, 3, &[]).unwrap());
        assert_eq!(
            partitions_of(3)
                .into_iter()
                .map(|delta| hurwitz_value(2, 3, std::slice::from_ref(&delta)).unwrap() * int(chi_sum(&delta)))
                .sum::<Rational>(),
            rat(2, 3)
        );
        assert!(d_cycle_identity_check(2, 1, &[], 1).unwrap());
        assert!(d_cycle_identity_check(2, 3, &[], 1).unwrap());
        assert_eq!(
            hurwitz_value(0, 3, &[p("3")]).unwrap(),
            int(9) * hurwitz_value(2, 3, &[p("3"), p("3"), p("3")]).unwrap()
        );
        assert!(d_cycle_identity_check(1, 4, &[p("2,1,1")], 1).unwrap());
        assert!(glue_check(1, 1, 8, &[], &[]).unwrap_err().is_guard());
    }
}
