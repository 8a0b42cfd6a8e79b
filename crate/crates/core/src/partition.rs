//! Integer partitions and conjugacy-class bookkeeping in S_d.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::factorial;

/// Weakly decreasing list of positive parts. The empty partition has weight 0.
///
/// The derived ordering is lexicographic on parts, so sorting descending gives
/// the reverse-lex order used by [`partitions_of`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusCoords {
    pub arms: Vec<usize>,
    pub legs: Vec<usize>,
}

impl FrobeniusCoords {
    pub fn rank(&self) -> usize {
        self.arms.len()
    }
}

impl Partition {
    /// Strict constructor: parts must already be positive and weakly decreasing.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Parse(format!("zero part in {parts:?}")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Parse(format!("parts not weakly decreasing: {parts:?}")));
        }
        Ok(Partition { parts })
    }

    /// Sorts and drops zeros, so any multiset of sizes is accepted.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The full cycle `(d)`.
    pub fn row(d: usize) -> Self {
        Partition::from_unsorted(vec![d])
    }

    /// The identity class `(1^d)`.
    pub fn column(d: usize) -> Self {
        Partition { parts: vec![1; d] }
    }

    /// The hook `(d - r, 1^r)`.
    pub fn hook(d: usize, r: usize) -> Result<Self> {
        if d == 0 || r >= d {
            return Err(Error::out_of_range("hook", format!("r={r} for d={d}")));
        }
        let mut parts = vec![d - r];
        parts.extend(std::iter::repeat_n(1, r));
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn length(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Part `i` (0-based), zero beyond the length.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.part(0);
        let parts = (0..first)
            .map(|j| self.parts.iter().take_while(|&&p| p > j).count())
            .collect();
        Partition { parts }
    }

    /// Length of the main diagonal.
    pub fn rank(&self) -> usize {
        self.parts.iter().enumerate().take_while(|(i, &p)| p > *i).count()
    }

    pub fn frobenius(&self) -> FrobeniusCoords {
        let conj = self.conjugate();
        let k = self.rank();
        FrobeniusCoords {
            arms: (0..k).map(|i| self.parts[i] - i - 1).collect(),
            legs: (0..k).map(|i| conj.parts[i] - i - 1).collect(),
        }
    }

    pub fn colength(&self) -> usize {
        self.weight() - self.length()
    }

    /// `(part, multiplicity)` pairs, largest part first.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// Centralizer order `z = Π i^{m_i} m_i!`.
    pub fn z(&self) -> BigInt {
        self.multiplicities()
            .into_iter()
            .fold(BigInt::one(), |acc, (i, m)| {
                acc * num_traits::pow(BigInt::from(i), m) * factorial(m)
            })
    }

    /// Size of the conjugacy class of cycle type `self` in `S_{|self|}`.
    pub fn cycle_class_size(&self) -> BigInt {
        factorial(self.weight()) / self.z()
    }

    pub fn aut_order(&self) -> BigInt {
        self.multiplicities()
            .into_iter()
            .fold(BigInt::one(), |acc, (_, m)| acc * factorial(m))
    }

    /// Cells `(row, col)`, 0-based, row-major.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (0..p).map(move |j| (i, j)))
    }

    /// Contents `j - i` of all cells.
    pub fn contents(&self) -> impl Iterator<Item = i64> + '_ {
        self.cells().map(|(i, j)| j as i64 - i as i64)
    }

    pub fn hook_lengths(&self) -> Vec<usize> {
        let conj = self.conjugate();
        self.cells()
            .map(|(i, j)| (self.parts[i] - j - 1) + (conj.parts[j] - i - 1) + 1)
            .collect()
    }

    /// Union of parts, `p_Δ p_Δ' = p_{Δ ∪ Δ'}`.
    pub fn union(&self, other: &Partition) -> Partition {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&other.parts);
        Partition::from_unsorted(parts)
    }

    /// Removes one part equal to `m`, if present.
    pub fn remove_part(&self, m: usize) -> Option<Partition> {
        let pos = self.parts.iter().position(|&p| p == m)?;
        let mut parts = self.parts.clone();
        parts.remove(pos);
        Some(Partition { parts })
    }

    /// Number of parts equal to `m`.
    pub fn multiplicity(&self, m: usize) -> usize {
        self.parts.iter().filter(|&&p| p == m).count()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for p in &self.parts {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Comma-separated parts in any order; the empty string is the empty partition.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "()" || s == "[]" {
            return Ok(Partition::empty());
        }
        let s = s.trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
        let parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad part {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if parts.contains(&0) {
            return Err(Error::Parse(format!("zero part in {s:?}")));
        }
        Ok(Partition::from_unsorted(parts))
    }
}

/// Cycle type together with its multiplicity vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycleClass {
    pub profile: Partition,
    /// `multiplicities[i - 1] = m_i`.
    pub multiplicities: Vec<usize>,
}

impl CycleClass {
    pub fn new(profile: Partition) -> Self {
        let top = profile.part(0);
        let multiplicities = (1..=top).map(|i| profile.multiplicity(i)).collect();
        CycleClass {
            profile,
            multiplicities,
        }
    }

    pub fn size(&self) -> BigInt {
        self.profile.cycle_class_size()
    }

    pub fn centralizer_order(&self) -> BigInt {
        self.profile.z()
    }
}

/// All partitions of `d` in reverse-lexicographic order: `(d)` first, `(1^d)` last.
pub fn partitions_of(d: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fill(d, d, &mut current, &mut out);
    out
}

fn fill(rest: usize, max: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition {
            parts: current.clone(),
        });
        return;
    }
    for p in (1..=max.min(rest)).rev() {
        current.push(p);
        fill(rest - p, p, current, out);
        current.pop();
    }
}

/// All partitions of weight at most `d_max`, grouped by weight.
pub fn partitions_up_to(d_max: usize) -> Vec<Partition> {
    (0..=d_max).flat_map(partitions_of).collect()
}

/// Common weight of a profile tuple.
pub fn common_weight(degree: usize, profiles: &[Partition]) -> Result<()> {
    for p in profiles {
        if p.weight() != degree {
            return Err(Error::WeightMismatch {
                expected: degree,
                found: p.weight(),
            });
        }
    }
    Ok(())
}

/// Riemann–Hurwitz: Euler characteristic of a degree-`d` cover of a base with
/// characteristic `euler`, branched over the given profiles.
pub fn euler_char_cover(euler: i64, degree: usize, profiles: &[Partition]) -> Result<i64> {
    if degree == 0 {
        return Err(Error::out_of_range("degree", "must be at least 1"));
    }
    common_weight(degree, profiles)?;
    let deficit: usize = profiles.iter().map(Partition::colength).sum();
    Ok(degree as i64 * euler - deficit as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn enumeration_order_and_counts() {
        assert_eq!(partitions_of(0), vec![Partition::empty()]);
        assert_eq!(partitions_of(3), vec![p("3"), p("2,1"), p("1,1,1")]);
        // p(d) for d = 0..12
        let counts = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77];
        for (d, &c) in counts.iter().enumerate() {
            let list = partitions_of(d);
            assert_eq!(list.len(), c, "p({d})");
            assert!(list.iter().all(|l| l.weight() == d));
            assert!(list.windows(2).all(|w| w[0] > w[1]));
        }
    }

    #[test]
    fn conjugates() {
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
        assert_eq!(p("2,1").conjugate(), p("2,1"));
        assert_eq!(p("3,1").conjugate(), p("2,1,1"));
        for d in 0..=12 {
            for l in partitions_of(d) {
                assert_eq!(l.conjugate().conjugate(), l);
                assert_eq!(l.part(0), l.conjugate().length());
            }
        }
    }

    #[test]
    fn frobenius_examples() {
        let f = p("3").frobenius();
        assert_eq!((f.arms, f.legs), (vec![2], vec![0]));
        let f = p("2,1").frobenius();
        assert_eq!((f.arms, f.legs), (vec![1], vec![1]));
        let f = p("2,2").frobenius();
        assert_eq!((f.arms, f.legs), (vec![1, 0], vec![1, 0]));
        for d in 0..=9 {
            for l in partitions_of(d) {
                let f = l.frobenius();
                let count = (0..l.length()).filter(|&i| l.parts()[i] > i).count();
                assert_eq!(f.rank(), count);
                let w: usize = f.arms.iter().zip(&f.legs).map(|(a, b)| a + b + 1).sum();
                assert_eq!(w, d);
            }
        }
    }

    #[test]
    fn class_statistics() {
        assert_eq!(p("1,1,1").colength(), 0);
        assert_eq!(p("2,1").colength(), 1);
        assert_eq!(p("5").colength(), 4);
        assert_eq!(p("1,1,1").cycle_class_size(), BigInt::from(1));
        assert_eq!(p("2,1").cycle_class_size(), BigInt::from(3));
        assert_eq!(p("3").cycle_class_size(), BigInt::from(2));
        assert_eq!(p("1,1,1").aut_order(), BigInt::from(6));
        assert_eq!(p("2,1").aut_order(), BigInt::from(1));
        assert_eq!(p("2,2,1").aut_order(), BigInt::from(2));
        for d in 0..=9 {
            let total: BigInt = partitions_of(d).iter().map(Partition::cycle_class_size).sum();
            assert_eq!(total, factorial(d));
        }
        let c = CycleClass::new(p("3,1,1"));
        assert_eq!(c.multiplicities, vec![2, 0, 1]);
        let weight: usize = c.multiplicities.iter().enumerate().map(|(i, m)| (i + 1) * m).sum();
        assert_eq!(weight, 5);
        assert_eq!(c.size() * c.centralizer_order(), factorial(5));
    }

    #[test]
    fn riemann_hurwitz() {
        assert_eq!(euler_char_cover(2, 2, &[p("2"), p("2")]).unwrap(), 2);
        assert_eq!(euler_char_cover(1, 3, &[p("3")]).unwrap(), 1);
        assert_eq!(euler_char_cover(2, 5, &[]).unwrap(), 10);
        assert!(matches!(
            euler_char_cover(2, 3, &[p("2")]),
            Err(Error::WeightMismatch { .. })
        ));
    }

    #[test]
    fn parsing_and_json() {
        assert_eq!(p("1,3,1"), p("3,1,1"));
        assert_eq!(p("").to_string(), "");
        assert_eq!(p("3,1,1").to_string(), "3,1,1");
        assert!("2,0".parse::<Partition>().is_err());
        assert!(Partition::new(vec![1, 2]).is_err());
        let json = serde_json::to_string(&p("3,1,1")).unwrap();
        assert_eq!(json, "[3,1,1]");
        assert_eq!(serde_json::to_string(&Partition::empty()).unwrap(), "[]");
        assert!(serde_json::from_str::<Partition>("[1,2]").is_err());
        assert_eq!(serde_json::from_str::<Partition>("[2,1]").unwrap(), p("2,1"));
    }

    #[test]
    fn hooks() {
        assert_eq!(p("2,2").hook_lengths(), vec![3, 2, 2, 1]);
        assert_eq!(Partition::hook(4, 2).unwrap(), p("2,1,1"));
    }

    proptest! {
        #[test]
        fn prop_from_unsorted_is_valid(parts in proptest::collection::vec(0usize..7, 0..8)) {
            let l = Partition::from_unsorted(parts.clone());
            prop_assert!(Partition::new(l.parts().to_vec()).is_ok());
            prop_assert_eq!(l.weight(), parts.iter().sum::<usize>());
            prop_assert_eq!(l.conjugate().weight(), l.weight());
            prop_assert_eq!(l.to_string().parse::<Partition>().unwrap(), l.clone());
        }
    }
}
