use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hurwitz::Cutoff;
use crate::scalar::{int, pow_i, Rational};
use crate::symfunc::{pochhammer_lambda, PowerAlphabet};

use super::fseries::{f_series, s_infinity, FForm, FSeriesSpec, HyperParam, ParamValue, F_SERIES_MAX_DEGREE};
use super::series::{schur_expansion, ProfileSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Ensemble {
    /// Independent Ginibre matrices.
    Complex,
    /// Independent Haar unitaries.
    Unitary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Integrand {
    /// `τ₁(Z, p) τ₁(Z*, p*)`
    TlTl,
    /// `τ₁(Z Z*, p)`
    SingleTl,
    /// `τ₁(Z, p) τ₁^B(Z*)`
    TlBkp,
    /// `τ₁^B(Z Z*)`
    SingleBkp,
    /// `τ₁(Π Z_α C_α Z_α† A_{α,α+1}, p)`
    ChekhovStrahov,
}

impl Integrand {
    fn name(self) -> &'static str {
        match self {
            Integrand::TlTl => "prop1",
            Integrand::SingleTl => "prop2",
            Integrand::TlBkp => "prop1-odd",
            Integrand::SingleBkp => "prop2-odd",
            Integrand::ChekhovStrahov => "chekhov-strahov",
        }
    }
}

/// One matrix-integral configuration. `Z = (Z_1C_1)⋯(Z_nC_n)` and the
/// conjugate side is `Z_n†⋯Z_{t+1}† Z_1†⋯Z_t†`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IntegralLayout {
    pub ensemble: Ensemble,
    pub integrand: Integrand,
    pub n: usize,
    pub t: usize,
}

/// What an alphabet of the generated series stands for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Slot {
    /// A free set of power sums.
    Free(&'static str),
    /// Traces of powers of a product of the external matrices, 1-based.
    Matrices(Vec<usize>),
    /// Traces of powers of `A_{12} A_{23} ⋯ A_{n1}`.
    Chain,
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Free(name) => write!(f, "{name}"),
            Slot::Matrices(ix) => {
                let parts: Vec<String> = ix.iter().map(|i| format!("C{i}")).collect();
                write!(f, "{}", parts.join(""))
            }
            Slot::Chain => write!(f, "A"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayoutStructure {
    pub slots: Vec<Slot>,
    /// Power of `s_λ(p_∞)` in the summand.
    pub infinity_power: i64,
    /// Power of `s_λ(I_N)` in the summand.
    pub identity_power: i64,
}

/// `F^{E,k;p}`, with the single Pochhammer parameter `(N; power)` when `p = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub euler: i64,
    pub alphabets: usize,
    pub pochhammer_power: Option<i64>,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pochhammer_power {
            None => write!(f, "F^{{{},{};0}}", self.euler, self.alphabets),
            Some(e) => write!(f, "F^{{{},{};1}}(N;{e})", self.euler, self.alphabets),
        }
    }
}

fn sig(euler: i64, alphabets: i64, power: Option<i64>) -> Signature {
    Signature {
        euler,
        alphabets: alphabets as usize,
        pochhammer_power: power,
    }
}

impl IntegralLayout {
    pub fn new(ensemble: Ensemble, integrand: Integrand, n: usize, t: usize) -> Result<Self> {
        let bad = |why: &str| Err(Error::UnknownLayout(format!("{} n={n} t={t}: {why}", integrand.name())));
        if n == 0 {
            return bad("needs at least one matrix");
        }
        if t > n {
            return bad("t exceeds n");
        }
        match (ensemble, integrand) {
            (Ensemble::Unitary, Integrand::ChekhovStrahov) => return bad("no unitary version"),
            (Ensemble::Complex, Integrand::ChekhovStrahov) if t != 0 => return bad("only t = 0"),
            (Ensemble::Complex, Integrand::SingleBkp) if t > 1 => return bad("only t <= 1"),
            (Ensemble::Unitary, _) if t != 0 && t != n => return bad("unitary layouts need t = 0 or t = n"),
            _ => {}
        }
        Ok(IntegralLayout {
            ensemble,
            integrand,
            n,
            t,
        })
    }

    /// Every layout with `1 <= n <= n_max`.
    pub fn enumerate(n_max: usize) -> Vec<IntegralLayout> {
        let mut out = Vec::new();
        for ensemble in [Ensemble::Complex, Ensemble::Unitary] {
            for integrand in [
                Integrand::TlTl,
                Integrand::SingleTl,
                Integrand::TlBkp,
                Integrand::SingleBkp,
                Integrand::ChekhovStrahov,
            ] {
                for n in 1..=n_max {
                    for t in 0..=n {
                        if let Ok(l) = IntegralLayout::new(ensemble, integrand, n, t) {
                            out.push(l);
                        }
                    }
                }
            }
        }
        out
    }

    fn ordered(&self) -> bool {
        self.t <= 1
    }

    pub fn structure(&self) -> LayoutStructure {
        let n = self.n as i64;
        let t = self.t as i64;
        let singles = |from: usize| (from..=self.n).map(|i| Slot::Matrices(vec![i])).collect::<Vec<_>>();
        let odd: Vec<usize> = (1..=self.t).step_by(2).collect();
        let even: Vec<usize> = (2..=self.t).step_by(2).collect();
        let odd_even = Slot::Matrices(odd.iter().chain(&even).copied().collect());
        let mut slots = Vec::new();
        let (infinity_power, identity_power);
        match self.ensemble {
            Ensemble::Complex => {
                let k = (t + 1) / 2;
                let rest = n - t;
                let head = |slots: &mut Vec<Slot>, free: &[&'static str]| {
                    slots.extend(free.iter().map(|s| Slot::Free(s)));
                    if t % 2 == 0 {
                        slots.push(Slot::Matrices(odd.clone()));
                        slots.push(Slot::Matrices(even.clone()));
                    } else {
                        slots.push(odd_even.clone());
                    }
                    slots.extend(singles(self.t + 1));
                };
                infinity_power = match (self.integrand, self.ordered()) {
                    (Integrand::TlTl, true) => {
                        slots.extend(singles(1));
                        slots.extend([Slot::Free("p"), Slot::Free("p*")]);
                        -n
                    }
                    (Integrand::TlTl, false) => {
                        head(&mut slots, &["p1", "p2"]);
                        (4 - 2 * k) - if t % 2 == 0 { 4 } else { 3 } - rest
                    }
                    (Integrand::SingleTl, true) => {
                        slots.extend(singles(1));
                        slots.push(Slot::Free("p"));
                        -n
                    }
                    (Integrand::SingleTl, false) => {
                        head(&mut slots, &["p"]);
                        (4 - 2 * k) - if t % 2 == 0 { 3 } else { 2 } - rest
                    }
                    (Integrand::TlBkp, true) => {
                        slots.extend(singles(1));
                        slots.push(Slot::Free("p"));
                        -n
                    }
                    (Integrand::TlBkp, false) => {
                        head(&mut slots, &["p1"]);
                        (3 - 2 * k) - if t % 2 == 0 { 3 } else { 2 } - rest
                    }
                    (Integrand::SingleBkp, _) => {
                        slots.extend(singles(1));
                        -n
                    }
                    (Integrand::ChekhovStrahov, _) => {
                        slots.extend(singles(1));
                        slots.extend([Slot::Free("p"), Slot::Chain]);
                        -n
                    }
                };
                // integrating Z_1 C_1 ⋯ Z_n C_n Z_n† ⋯ Z_1† from the inside out ends on s_λ(I_N)
                identity_power = match (self.integrand, self.ordered()) {
                    (Integrand::SingleTl, true) | (Integrand::SingleBkp, _) => 1,
                    _ => 0,
                };
            }
            Ensemble::Unitary => {
                infinity_power = 0;
                let k = (n + 1) / 2;
                let free: &[&'static str] = match self.integrand {
                    Integrand::TlTl if self.ordered() => &["p", "p*"],
                    Integrand::TlTl => &["p1", "p2"],
                    Integrand::SingleTl => &["p"],
                    Integrand::TlBkp if self.ordered() => &["p"],
                    Integrand::TlBkp => &["p1"],
                    _ => &[],
                };
                if self.ordered() {
                    slots.extend(singles(1));
                    slots.extend(free.iter().map(|s| Slot::Free(s)));
                    identity_power = match self.integrand {
                        Integrand::TlTl | Integrand::TlBkp => -n,
                        _ => 1 - n,
                    };
                } else {
                    slots.extend(free.iter().map(|s| Slot::Free(s)));
                    if n % 2 == 0 {
                        slots.push(Slot::Matrices(odd.clone()));
                        slots.push(Slot::Matrices(even.clone()));
                    } else {
                        slots.push(odd_even.clone());
                    }
                    let shift = match self.integrand {
                        Integrand::TlTl | Integrand::TlBkp => 0,
                        _ => 1,
                    };
                    identity_power = shift - 2 * k + (n % 2);
                }
            }
        }
        LayoutStructure {
            slots,
            infinity_power,
            identity_power,
        }
    }

    /// Read off the summand: every Schur factor carries one unit of degree.
    pub fn computed_signature(&self) -> Signature {
        let s = self.structure();
        let k = s.slots.len() as i64;
        sig(
            s.infinity_power + s.identity_power + k,
            k,
            (s.identity_power != 0).then_some(s.identity_power),
        )
    }

    /// The signature as stated alongside each integral identity.
    ///
    /// For the complex single-tau layouts with `t <= 1` the statement has no
    /// `(N)_λ` factor, while [`Self::computed_signature`] carries `(N; 1)`.
    pub fn claimed_signature(&self) -> Signature {
        let n = self.n as i64;
        match self.ensemble {
            Ensemble::Complex => {
                let k = (self.t as i64 + 1) / 2;
                match (self.integrand, self.ordered()) {
                    (Integrand::TlTl, true) | (Integrand::ChekhovStrahov, _) => sig(2, n + 2, None),
                    (Integrand::TlTl, false) => sig(4 - 2 * k, 4 + n - 2 * k, None),
                    (Integrand::SingleTl, true) => sig(2, n + 1, None),
                    (Integrand::SingleTl, false) => sig(4 - 2 * k, 3 + n - 2 * k, None),
                    (Integrand::TlBkp, true) => sig(1, n + 1, None),
                    (Integrand::TlBkp, false) => sig(3 - 2 * k, 3 + n - 2 * k, None),
                    (Integrand::SingleBkp, _) => sig(1, n, None),
                }
            }
            Ensemble::Unitary => {
                let k = (n + 1) / 2;
                let even = n % 2 == 0;
                let nz = |e: i64| (e != 0).then_some(e);
                match (self.integrand, self.ordered()) {
                    (Integrand::TlTl, true) => sig(2, n + 2, nz(-n)),
                    (Integrand::SingleTl, true) => sig(2, n + 1, nz(1 - n)),
                    (Integrand::TlBkp, true) => sig(1, n + 1, nz(-n)),
                    (Integrand::SingleBkp, true) => sig(1, n, nz(1 - n)),
                    (Integrand::TlTl, false) if even => sig(4 - 2 * k, 4, nz(-2 * k)),
                    (Integrand::TlTl, false) => sig(4 - 2 * k, 3, nz(1 - 2 * k)),
                    (Integrand::SingleTl, false) if even => sig(4 - 2 * k, 3, nz(1 - 2 * k)),
                    (Integrand::SingleTl, false) => sig(4 - 2 * k, 2, nz(2 - 2 * k)),
                    (Integrand::TlBkp, false) if even => sig(3 - 2 * k, 3, nz(-2 * k)),
                    (Integrand::TlBkp, false) => sig(3 - 2 * k, 2, nz(1 - 2 * k)),
                    (Integrand::SingleBkp, false) if even => sig(3 - 2 * k, 2, nz(1 - 2 * k)),
                    (Integrand::SingleBkp, false) => sig(3 - 2 * k, 1, nz(2 - 2 * k)),
                    (Integrand::ChekhovStrahov, _) => unreachable!("rejected by the constructor"),
                }
            }
        }
    }
}

impl fmt::Display for IntegralLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let suffix = if self.ensemble == Ensemble::Unitary { "-u" } else { "" };
        write!(f, "{}{suffix}", self.integrand.name())
    }
}

/// Layout family by name; `n` and `t` are supplied separately.
pub fn parse_layout_name(name: &str) -> Result<(Ensemble, Integrand)> {
    let lower = name.trim().to_ascii_lowercase();
    let (base, ensemble) = match lower.strip_suffix("-u") {
        Some(b) => (b, Ensemble::Unitary),
        None => (lower.as_str(), Ensemble::Complex),
    };
    let integrand = match base {
        "prop1" => Integrand::TlTl,
        "prop2" => Integrand::SingleTl,
        "prop1-odd" => Integrand::TlBkp,
        "prop2-odd" => Integrand::SingleBkp,
        "chekhov-strahov" => Integrand::ChekhovStrahov,
        _ => return Err(Error::UnknownLayout(name.to_string())),
    };
    Ok((ensemble, integrand))
}

impl FromStr for Ensemble {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "complex" => Ok(Ensemble::Complex),
            "unitary" => Ok(Ensemble::Unitary),
            _ => Err(Error::Parse(format!("ensemble `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropositionSeries {
    pub layout: IntegralLayout,
    pub matrix_size: usize,
    pub slots: Vec<Slot>,
    pub claimed: Signature,
    pub computed: Signature,
    pub series: ProfileSeries,
}

/// The exact side of the integral identity, truncated at `d_max`, one alphabet per slot.
pub fn proposition_series(layout: &IntegralLayout, matrix_size: usize, d_max: usize) -> Result<PropositionSeries> {
    if d_max > F_SERIES_MAX_DEGREE {
        return Err(Error::guard(format!(
            "series truncation limited to d_max <= {F_SERIES_MAX_DEGREE}, got {d_max}"
        )));
    }
    if matrix_size == 0 {
        return Err(Error::out_of_range("matrix size", "must be at least 1"));
    }
    let structure = layout.structure();
    let computed = layout.computed_signature();
    let claimed = layout.claimed_signature();
    let big_n = int(matrix_size as i64);
    let series = schur_expansion(
        structure.slots.len(),
        vec![],
        d_max,
        Cutoff::AtMost(matrix_size),
        |lambda| {
            let s_inf = s_infinity(lambda);
            let s_identity = pochhammer_lambda(&big_n, lambda) * &s_inf;
            let w = pow_i(&s_inf, structure.infinity_power)? * pow_i(&s_identity, structure.identity_power)?;
            Ok(vec![(vec![], w)])
        },
    )?;
    Ok(PropositionSeries {
        layout: *layout,
        matrix_size,
        slots: structure.slots,
        claimed,
        computed,
        series,
    })
}

/// `F` series with the given signature, `N` fixed to the matrix size.
pub fn signature_series(signature: &Signature, matrix_size: usize, d_max: usize) -> Result<ProfileSeries> {
    let params = signature
        .pochhammer_power
        .map(|power| HyperParam {
            a: ParamValue::Value(int(matrix_size as i64)),
            power,
        })
        .into_iter()
        .collect();
    f_series(
        &FSeriesSpec {
            euler: signature.euler,
            alphabets: signature.alphabets,
            params,
            cutoff: Cutoff::AtMost(matrix_size),
            d_max,
        },
        FForm::SchurRatio,
    )
}

/// Degree-by-degree value of the exact side at the given alphabets.
pub fn evaluate_proposition(prop: &PropositionSeries, alphabets: &[PowerAlphabet<Rational>]) -> Result<Vec<Rational>> {
    prop.series.eval_by_degree(alphabets, &[])
}
