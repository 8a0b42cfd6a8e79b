//! Batteries of exact and statistical checks, grouped by criterion number.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::characters::{
    char_on_full_cycle, chi_sum, column_orthogonality_holds, phi, row_orthogonality_holds, zagier_hook_check,
};
use crate::error::Result;
use crate::genfun::layouts::{signature_series, Ensemble, Integrand};
use crate::genfun::{
    f_series, parse_layout_name, proposition_series, unbranched_gen, verify_hirota_elementary, ContentFunction,
    FForm, FSeriesSpec, HyperParam, IntegralLayout, ParamValue, SeriesKey,
};
use crate::hurwitz::{
    d_cycle_identity_check, gen_sum, glue_check, hurwitz_down_check, hurwitz_value, Cutoff,
};
use crate::mc::{mc_lemma1, mc_proposition, LemmaQuery, PropositionQuery, Relation};
use crate::oracle::{oracle_hurwitz, presentation_independence_check, square_root_count, SurfacePresentation};
use crate::partition::{partitions_of, partitions_up_to, Partition};
use crate::scalar::{format_rational, int, rat, Rational};
use crate::symfunc::{cauchy_littlewood_check, eval_schur, pochhammer_lambda, qt_pochhammer_lambda, PowerAlphabet};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub criterion: u8,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(criterion: u8, name: &str, pass: bool, detail: impl Into<String>) -> Check {
    Check {
        criterion,
        name: name.to_string(),
        pass,
        detail: detail.into(),
    }
}

/// Ranges for the exact suite; `quick` shrinks the expensive sweeps.
#[derive(Clone, Copy, Debug)]
pub struct Scale {
    pub quick: bool,
}

impl Scale {
    fn pick(&self, quick: usize, full: usize) -> usize {
        if self.quick {
            quick
        } else {
            full
        }
    }
}

/// All multisets of `size` elements drawn from `items`.
pub fn multisets<T: Clone>(items: &[T], size: usize) -> Vec<Vec<T>> {
    fn rec<T: Clone>(items: &[T], start: usize, left: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i].clone());
            rec(items, i, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, 0, size, &mut Vec::new(), &mut out);
    out
}

fn profile_sets(d: usize, max_len: usize) -> Vec<Vec<Partition>> {
    let parts = partitions_of(d);
    (0..=max_len).flat_map(|f| multisets(&parts, f)).collect()
}

fn p(s: &str) -> Partition {
    s.parse().expect("literal partition")
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    let num: i64 = rng.random_range(-9..=9);
    let den: i64 = rng.random_range(1..=9);
    rat(num, den)
}

pub fn exact_values() -> Result<Vec<Check>> {
    let start = Instant::now();
    let mut out = Vec::new();
    let unbranched = hurwitz_value(1, 3, &[])?;
    out.push(check(1, "H(E=1, d=3) unbranched", unbranched == rat(2, 3), format_rational(&unbranched)));
    let cases = [("3", rat(1, 3)), ("2,1", int(0)), ("1,1,1", rat(2, 3))];
    for (delta, expected) in cases {
        let v = hurwitz_value(1, 3, &[p(delta)])?;
        // the identity profile adds no branch point, so it repeats the unbranched value
        out.push(check(1, &format!("H(E=1, d=3; {delta})"), v == expected, format_rational(&v)));
    }
    let elapsed = start.elapsed();
    out.push(check(1, "runtime under 1 s", elapsed.as_secs_f64() < 1.0, format!("{elapsed:?}")));
    Ok(out)
}

pub fn oracle_equivalence(scale: Scale) -> Result<Vec<Check>> {
    let d_max = scale.pick(4, 5);
    let f_max = scale.pick(2, 3);
    let mut out = Vec::new();
    for euler in [2, 1, 0, -1, -2] {
        let mut compared = 0usize;
        let mut mismatches = Vec::new();
        for d in 1..=d_max {
            for profiles in profile_sets(d, f_max) {
                let exact = hurwitz_value(euler, d, &profiles)?;
                for pres in SurfacePresentation::for_euler(euler) {
                    compared += 1;
                    if oracle_hurwitz(&pres, d, &profiles)?.value != exact {
                        mismatches.push(format!("{pres} d={d} {profiles:?}"));
                    }
                }
                if euler <= 0 && euler % 2 == 0 && !presentation_independence_check(euler, d, &profiles)? {
                    mismatches.push(format!("presentations differ at d={d} {profiles:?}"));
                }
            }
        }
        let detail = if mismatches.is_empty() {
            format!("{compared} comparisons, d <= {d_max}, F <= {f_max}")
        } else {
            format!("{} mismatches, first: {}", mismatches.len(), mismatches[0])
        };
        out.push(check(2, &format!("character formula = brute force, E={euler}"), mismatches.is_empty(), detail));
    }
    Ok(out)
}

pub fn unbranched() -> Result<Vec<Check>> {
    let gen = unbranched_gen(10)?;
    let mut bad = Vec::new();
    for (d, a) in gen.iter().enumerate() {
        if *a != hurwitz_value(1, d, &[])? {
            bad.push(d);
        }
    }
    Ok(vec![check(
        3,
        "exp(c^2/2 + c) coefficients through d=10",
        bad.is_empty(),
        format!("a_10 = {}, mismatching degrees {bad:?}", format_rational(&gen[10])),
    )])
}

pub fn specializations(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lambdas: Vec<Partition> = partitions_up_to(8).into_iter().filter(|l| !l.is_empty()).collect();
    let mut bad = 0usize;
    let mut total = 0usize;
    for _ in 0..5 {
        let a = random_rational(&mut rng);
        for l in &lambdas {
            let m = l.weight();
            let lhs = eval_schur(l, &PowerAlphabet::p_of_a(a.clone(), m))?
                / eval_schur(l, &PowerAlphabet::<Rational>::p_infinity(m))?;
            total += 1;
            bad += usize::from(lhs != pochhammer_lambda(&a, l));
        }
    }
    let mut out = vec![check(4, "s(p(a)) / s(p_inf) = (a)_λ, |λ| <= 8", bad == 0, format!("{total} cases, {bad} failures"))];
    let (mut bad, mut total) = (0usize, 0usize);
    let mut pairs = 0;
    while pairs < 3 {
        let q = random_rational(&mut rng);
        let t = rat(rng.random_range(1..=8), 9);
        pairs += 1;
        for l in &lambdas {
            let m = l.weight();
            let lhs = eval_schur(l, &PowerAlphabet::p_of_qt(&q, &t, m)?)?
                / eval_schur(l, &PowerAlphabet::p_of_qt(&int(0), &t, m)?)?;
            total += 1;
            bad += usize::from(lhs != qt_pochhammer_lambda(&q, &t, l)?);
        }
    }
    out.push(check(4, "q,t analogue at 3 random pairs", bad == 0, format!("{total} cases, {bad} failures")));
    Ok(out)
}

pub fn characters(scale: Scale) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let d_orth = scale.pick(6, 8);
    let orth = (0..=d_orth).all(|d| row_orthogonality_holds(d) && column_orthogonality_holds(d));
    out.push(check(5, "character table orthogonality", orth, format!("d <= {d_orth}")));
    let mut bad = 0;
    for d in 1..=scale.pick(7, 9) {
        for l in partitions_of(d) {
            bad += usize::from(char_on_full_cycle(&l) != phi(&l, &Partition::row(d))?);
        }
    }
    out.push(check(5, "φ on the full cycle, closed form", bad == 0, format!("{bad} failures")));
    let mut bad = Vec::new();
    for d in 1..=scale.pick(6, 7) {
        for delta in partitions_of(d) {
            if chi_sum(&delta) != square_root_count(&delta)? as i64 {
                bad.push(delta.to_string());
            }
        }
    }
    out.push(check(5, "Σ χ_λ(Δ) = square-root counts", bad.is_empty(), format!("failures {bad:?}")));
    let mut bad = Vec::new();
    for d in 1..=7 {
        for delta in partitions_of(d) {
            if !zagier_hook_check(&delta)? {
                bad.push(delta.to_string());
            }
        }
    }
    out.push(check(5, "hook characters vs Π(1 - q^{d_i})", bad.is_empty(), format!("failures {bad:?}")));
    Ok(out)
}

pub fn structural(scale: Scale) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let splits = [(1, 1), (2, 0), (0, 2), (1, 0), (0, 1)];
    let mut count = 0;
    let mut bad = Vec::new();
    for d in 1..=scale.pick(4, 5) {
        let sides = profile_sets(d, 1);
        for &(e, e1) in &splits {
            for left in &sides {
                for right in &sides {
                    count += 1;
                    if !glue_check(e, e1, d, left, right)? {
                        bad.push(format!("E=({e},{e1}) d={d}"));
                    }
                }
            }
        }
    }
    out.push(check(6, "gluing along a curve", bad.is_empty(), format!("{count} cases, failures {bad:?}")));
    let (mut count, mut bad) = (0, Vec::new());
    for euler in [2, 1] {
        for d in 1..=5 {
            for profiles in profile_sets(d, 2) {
                count += 1;
                if !hurwitz_down_check(euler, d, &profiles)? {
                    bad.push(format!("E={euler} d={d} {profiles:?}"));
                }
            }
        }
    }
    out.push(check(6, "adding a crosscap via Σ χ", bad.is_empty(), format!("{count} cases, failures {bad:?}")));
    let (mut count, mut bad) = (0, Vec::new());
    for euler in [2, 1] {
        for g in [1, 2] {
            for d in 1..=scale.pick(5, 6) {
                for profiles in profile_sets(d, 1) {
                    count += 1;
                    if !d_cycle_identity_check(euler, d, &profiles, g)? {
                        bad.push(format!("E={euler} g={g} d={d} {profiles:?}"));
                    }
                }
            }
        }
    }
    out.push(check(6, "handles traded for full cycles", bad.is_empty(), format!("{count} cases, failures {bad:?}")));
    Ok(out)
}

fn powers_sets() -> Vec<Vec<i64>> {
    vec![vec![], vec![1], vec![2], vec![1, 2]]
}

/// Compares every coefficient of one series against the weighted sums, both ways.
fn series_vs_sums(euler: i64, alphabets: usize, powers: &[i64], cutoff: Cutoff, d_max: usize) -> Result<(usize, Vec<String>)> {
    let spec = FSeriesSpec {
        euler,
        alphabets,
        params: powers.iter().map(|&power| HyperParam { a: ParamValue::Symbolic, power }).collect(),
        cutoff,
        d_max,
    };
    let series = f_series(&spec, FForm::SchurRatio)?;
    let mut compared = 0;
    let mut bad = Vec::new();
    let expected = |d: usize, profiles: &[Partition], ks: &[usize]| -> Result<Rational> {
        let pairs: Vec<(usize, Rational)> = ks.iter().zip(powers).map(|(&k, &n)| (k, int(n))).collect();
        gen_sum(euler, d, profiles, &pairs, cutoff)
    };
    for d in 1..=d_max {
        let parts = partitions_of(d);
        let mut tuples: Vec<Vec<Partition>> = vec![vec![]];
        for _ in 0..alphabets {
            tuples = tuples
                .into_iter()
                .flat_map(|t| parts.iter().map(move |q| [t.clone(), vec![q.clone()]].concat()))
                .collect();
        }
        let mut ks: Vec<Vec<usize>> = vec![vec![]];
        for &n in powers {
            let top = d * n as usize;
            ks = ks.into_iter().flat_map(|k| (0..=top).map(move |j| [k.clone(), vec![j]].concat())).collect();
        }
        for profiles in &tuples {
            for k in &ks {
                let aux: Vec<i64> = k.iter().zip(powers).map(|(&kj, &n)| d as i64 * n - kj as i64).collect();
                let key = SeriesKey::new(d, profiles.clone(), aux);
                compared += 1;
                if series.coefficient(&key) != expected(d, profiles, k)? {
                    bad.push(format!("{key:?}"));
                }
            }
        }
    }
    // nothing outside the enumerated range
    for key in series.terms().keys().filter(|k| k.degree > 0) {
        let ks: Vec<i64> = key.aux.iter().zip(powers).map(|(&a, &n)| key.degree as i64 * n - a).collect();
        if ks.iter().zip(powers).any(|(&k, &n)| k < 0 || k > key.degree as i64 * n) {
            bad.push(format!("stray key {key:?}"));
        }
    }
    Ok((compared, bad))
}

pub fn series_coherence(scale: Scale) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let d_max = scale.pick(3, 4);
    let (mut compared, mut bad) = (0, Vec::new());
    for euler in [2, 1, 0, -1] {
        for alphabets in 1..=scale.pick(2, 3) {
            for powers in powers_sets() {
                for cutoff in [Cutoff::AtMost(2), Cutoff::AtMost(d_max)] {
                    let (c, b) = series_vs_sums(euler, alphabets, &powers, cutoff, d_max)?;
                    compared += c;
                    bad.extend(b);
                }
            }
        }
    }
    out.push(check(
        7,
        "series coefficients = weighted Hurwitz sums",
        bad.is_empty(),
        format!("{compared} keys, d <= {d_max}, {} failures {}", bad.len(), bad.first().cloned().unwrap_or_default()),
    ));

    let value = |r: Rational, power| HyperParam { a: ParamValue::Value(r), power };
    let symbolic = |power| HyperParam { a: ParamValue::Symbolic, power };
    let specs = [
        (2, 1, vec![value(int(3), 1), value(rat(1, 2), -1)], Cutoff::AtMost(3)),
        (1, 2, vec![symbolic(2)], Cutoff::Unbounded),
        (0, 1, vec![value(rat(-2, 3), 1), symbolic(1)], Cutoff::AtMost(2)),
        (-1, 2, vec![value(rat(5, 7), -2)], Cutoff::Unbounded),
    ];
    let mut bad = 0;
    for (euler, alphabets, params, cutoff) in specs.clone() {
        let spec = FSeriesSpec { euler, alphabets, params, cutoff, d_max: 5 };
        bad += usize::from(f_series(&spec, FForm::SchurRatio)? != f_series(&spec, FForm::Pochhammer)?);
    }
    out.push(check(7, "Pochhammer form = Schur-ratio form, d <= 5", bad == 0, format!("{} specs, {bad} differ", specs.len())));
    out.push(check(7, "Cauchy–Littlewood to degree 6", cauchy_littlewood_check(6)?, "p, p* expanded"));

    let layouts = IntegralLayout::enumerate(7);
    let mut bad = Vec::new();
    let mut without_pochhammer = 0;
    for l in &layouts {
        let (claimed, computed) = (l.claimed_signature(), l.computed_signature());
        if (claimed.euler, claimed.alphabets) != (computed.euler, computed.alphabets) {
            bad.push(format!("{l} n={} t={}: {claimed} vs {computed}", l.n, l.t));
        }
        without_pochhammer += usize::from(claimed != computed);
        if l.n <= 3 {
            let prop = proposition_series(l, 2, 2)?;
            if prop.series != signature_series(&computed, 2, 2)? {
                bad.push(format!("{l} n={} t={}: series does not match {computed}", l.n, l.t));
            }
        }
    }
    out.push(check(
        7,
        "integral layouts carry their stated F^{E,k}",
        bad.is_empty(),
        format!(
            "{} layouts n <= 7; {} differ only by an (N)_λ factor; failures {bad:?}",
            layouts.len(),
            without_pochhammer
        ),
    ));
    Ok(out)
}

pub fn hirota() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for n_size in 1..=3 {
        let rep = verify_hirota_elementary(&ContentFunction::One, n_size, 4)?;
        out.push(check(8, &format!("r = 1, N = {n_size}, d <= 4"), rep.passed(), format!("{:?}", rep.cases)));
    }
    let r = ContentFunction::linear(rat(1, 2));
    for n_size in 1..=3 {
        let rep = verify_hirota_elementary(&r, n_size, 3)?;
        out.push(check(8, &format!("r = x + 1/2, N = {n_size}, d <= 3"), rep.passed(), format!("{:?}", rep.cases)));
    }
    Ok(out)
}

pub fn exact_suite(scale: Scale) -> Result<Vec<Check>> {
    let mut out = exact_values()?;
    out.extend(oracle_equivalence(scale)?);
    out.extend(unbranched()?);
    out.extend(specializations(2024)?);
    out.extend(characters(scale)?);
    out.extend(structural(scale)?);
    out.extend(series_coherence(scale)?);
    out.extend(hirota()?);
    Ok(out)
}

fn diagonal(n: usize) -> Vec<Vec<Rational>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { rat(i as i64 + 2, n as i64 + 1) } else { int(0) }).collect())
        .collect()
}

fn hilbert(n: usize) -> Vec<Vec<Rational>> {
    (0..n).map(|i| (0..n).map(|j| rat(1, (i + j + 1) as i64)).collect()).collect()
}

fn scrambled(n: usize, salt: usize) -> Vec<Vec<Rational>> {
    (0..n)
        .map(|i| (0..n).map(|j| rat(((3 * i + 5 * j + salt) % 5) as i64 - 2, 4)).collect())
        .collect()
}

/// Statistical gates: every relation at `N ∈ {2,3,4}`, `|λ| <= 3`, then the
/// four basic integral layouts at `N ∈ {2,3,4}`, degree <= 2.
pub fn monte_carlo(samples: usize, seed: u64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let mut stream = seed;
    for relation in Relation::ALL {
        let (mut count, mut worst, mut bad) = (0, 0.0f64, Vec::new());
        for n in 2..=4 {
            for lambda in partitions_up_to(3).into_iter().filter(|l| !l.is_empty()) {
                stream += 1;
                let q = LemmaQuery {
                    relation,
                    lambda: lambda.clone(),
                    mu: None,
                    a: diagonal(n),
                    b: hilbert(n),
                    samples,
                    seed: stream,
                };
                let r = mc_lemma1(&q)?;
                count += 1;
                worst = worst.max(r.sigmas);
                if !r.pass {
                    bad.push(format!("N={n} λ={lambda} seed={stream} ({:.2}σ)", r.sigmas));
                }
            }
        }
        out.push(check(
            9,
            &format!("{relation} at N = 2..4, |λ| <= 3"),
            bad.is_empty(),
            format!("{count} runs of {samples}, worst {worst:.2}σ, failures {bad:?}"),
        ));
    }
    for name in ["prop1", "prop2", "prop1-u", "prop2-u"] {
        let (ensemble, integrand) = parse_layout_name(name)?;
        let (mut count, mut worst, mut bad) = (0, 0.0f64, Vec::new());
        for n_mats in 1..=2 {
            let layout = IntegralLayout::new(ensemble, integrand, n_mats, 0)?;
            let free_slots = match integrand {
                Integrand::TlTl => 2,
                _ => 1,
            };
            for size in 2..=4 {
                stream += 1;
                let q = PropositionQuery {
                    layout,
                    matrix_size: size,
                    c: (0..n_mats).map(|a| scrambled(size, a)).collect(),
                    chain: vec![],
                    free: (0..free_slots).map(|i| vec![rat(1, 2 + i as i64), rat(1, 3)]).collect(),
                    d_max: 2,
                    samples,
                    seed: stream,
                };
                let r = mc_proposition(&q)?;
                count += 1;
                let sig = r.degrees.iter().map(|d| d.sigmas).fold(0.0, f64::max);
                worst = worst.max(sig);
                if !r.pass {
                    bad.push(format!("n={n_mats} N={size} seed={stream} ({sig:.2}σ)"));
                }
            }
        }
        let ens = match ensemble {
            Ensemble::Complex => "complex",
            Ensemble::Unitary => "unitary",
        };
        out.push(check(
            9,
            &format!("{name} ({ens}) at N = 2..4, degree <= 2"),
            bad.is_empty(),
            format!("{count} runs of {samples}, worst {worst:.2}σ, failures {bad:?}"),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiset_counts() {
        let items = [1, 2, 3];
        assert_eq!(multisets(&items, 2).len(), 6);
        assert_eq!(multisets(&items, 0), vec![Vec::<i32>::new()]);
        assert_eq!(profile_sets(3, 2).len(), 1 + 3 + 6);
    }

    #[test]
    fn exact_values_pass() {
        assert!(exact_values().unwrap().iter().all(|c| c.pass));
        assert!(unbranched().unwrap()[0].pass);
    }
}
