use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::scalar::{format_rational, parse_rational, pow_i, Rational};
use crate::symfunc;

/// The function `r` whose values on contents weight each Young diagram.
///
/// Text forms: `one`, `linear:a` (x + a), `rational:a1,a2;b1,b2`
/// (Π(x + a_i) / Π(x + b_i)), `pow:e:<form>`, `table:0=1,1=3/2`, and
/// products of these joined with `*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ContentFunction {
    One,
    Rational {
        numer: Vec<Rational>,
        denom: Vec<Rational>,
    },
    Power(Box<ContentFunction>, i64),
    Product(Vec<ContentFunction>),
    Tabulated(BTreeMap<i64, Rational>),
}

impl ContentFunction {
    /// `r(x) = x + a`.
    pub fn linear(a: Rational) -> Self {
        ContentFunction::Rational {
            numer: vec![a],
            denom: vec![],
        }
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        match self {
            ContentFunction::One => Ok(Rational::one()),
            ContentFunction::Rational { numer, denom } => {
                let num = numer.iter().fold(Rational::one(), |acc, a| acc * (a + x));
                let den = denom.iter().fold(Rational::one(), |acc, b| acc * (b + x));
                if den.is_zero() {
                    return Err(Error::ContentUndefined(format_rational(x)));
                }
                Ok(num / den)
            }
            ContentFunction::Power(inner, e) => {
                let v = inner.eval(x)?;
                pow_i(&v, *e).map_err(|_| Error::ContentUndefined(format_rational(x)))
            }
            ContentFunction::Product(fs) => fs
                .iter()
                .try_fold(Rational::one(), |acc, f| Ok(acc * f.eval(x)?)),
            ContentFunction::Tabulated(table) => {
                if !x.is_integer() {
                    return Err(Error::ContentUndefined(format_rational(x)));
                }
                let key = x
                    .to_integer()
                    .try_into()
                    .map_err(|_| Error::ContentUndefined(format_rational(x)))?;
                table
                    .get(&key)
                    .cloned()
                    .ok_or_else(|| Error::ContentUndefined(format_rational(x)))
            }
        }
    }

    /// `r_λ(n) = Π r(n + j - i)`.
    pub fn content_product(&self, n: &Rational, lambda: &Partition) -> Result<Rational> {
        symfunc::content_product(|x: &Rational| self.eval(x), n, lambda)
    }
}

fn list(items: &[Rational]) -> String {
    items.iter().map(format_rational).collect::<Vec<_>>().join(",")
}

impl fmt::Display for ContentFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContentFunction::One => write!(f, "one"),
            ContentFunction::Rational { numer, denom } if denom.is_empty() && numer.len() == 1 => {
                write!(f, "linear:{}", format_rational(&numer[0]))
            }
            ContentFunction::Rational { numer, denom } => {
                write!(f, "rational:{};{}", list(numer), list(denom))
            }
            ContentFunction::Power(inner, e) => write!(f, "pow:{e}:{inner}"),
            ContentFunction::Product(fs) => {
                let parts: Vec<String> = fs.iter().map(|g| g.to_string()).collect();
                write!(f, "{}", parts.join("*"))
            }
            ContentFunction::Tabulated(t) => {
                let parts: Vec<String> = t
                    .iter()
                    .map(|(k, v)| format!("{k}={}", format_rational(v)))
                    .collect();
                write!(f, "table:{}", parts.join(","))
            }
        }
    }
}

fn parse_list(s: &str) -> Result<Vec<Rational>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(vec![]);
    }
    s.split(',').map(|t| parse_rational(t.trim())).collect()
}

fn parse_atom(s: &str) -> Result<ContentFunction> {
    let s = s.trim();
    if s == "one" || s == "1" {
        return Ok(ContentFunction::One);
    }
    if s == "x" {
        return Ok(ContentFunction::linear(Rational::zero()));
    }
    let (head, rest) = s
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("content function `{s}`")))?;
    match head {
        "linear" => Ok(ContentFunction::linear(parse_rational(rest.trim())?)),
        "rational" => {
            let (a, b) = rest.split_once(';').unwrap_or((rest, ""));
            Ok(ContentFunction::Rational {
                numer: parse_list(a)?,
                denom: parse_list(b)?,
            })
        }
        "pow" => {
            let (e, inner) = rest
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("power form `{s}`")))?;
            let e: i64 = e
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("exponent `{e}`")))?;
            Ok(ContentFunction::Power(Box::new(parse_atom(inner)?), e))
        }
        "table" => {
            let mut t = BTreeMap::new();
            for entry in rest.split(',').filter(|e| !e.trim().is_empty()) {
                let (k, v) = entry
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("table entry `{entry}`")))?;
                let k: i64 = k
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("table key `{k}`")))?;
                t.insert(k, parse_rational(v.trim())?);
            }
            Ok(ContentFunction::Tabulated(t))
        }
        _ => Err(Error::Parse(format!("content function `{s}`"))),
    }
}

impl FromStr for ContentFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        // `pow:` swallows the rest, so split products only outside it.
        if !s.contains("pow:") && s.contains('*') {
            let fs = s.split('*').map(parse_atom).collect::<Result<Vec<_>>>()?;
            return Ok(ContentFunction::Product(fs));
        }
        parse_atom(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use crate::symfunc::pochhammer_lambda;

    #[test]
    fn linear_content_product_is_pochhammer() {
        let r = ContentFunction::linear(rat(1, 2));
        let lam: Partition = "3,1".parse().unwrap();
        let n = int(2);
        assert_eq!(
            r.content_product(&n, &lam).unwrap(),
            pochhammer_lambda(&(n + rat(1, 2)), &lam)
        );
    }

    #[test]
    fn product_is_termwise() {
        let f: ContentFunction = "linear:1/2".parse().unwrap();
        let g: ContentFunction = "rational:1;3".parse().unwrap();
        let fg: ContentFunction = "linear:1/2*rational:1;3".parse().unwrap();
        let lam: Partition = "2,2,1".parse().unwrap();
        let n = int(1);
        assert_eq!(
            fg.content_product(&n, &lam).unwrap(),
            f.content_product(&n, &lam).unwrap() * g.content_product(&n, &lam).unwrap()
        );
    }

    #[test]
    fn undefined_points() {
        let g: ContentFunction = "rational:;2".parse().unwrap();
        assert!(matches!(g.eval(&int(-2)), Err(Error::ContentUndefined(_))));
        let t: ContentFunction = "table:0=1,1=2".parse().unwrap();
        assert_eq!(t.eval(&int(1)).unwrap(), int(2));
        assert!(t.eval(&int(2)).is_err());
        let p: ContentFunction = "pow:-1:x".parse().unwrap();
        assert!(p.eval(&int(0)).is_err());
        assert_eq!(p.eval(&int(4)).unwrap(), rat(1, 4));
    }

    #[test]
    fn text_round_trip() {
        for s in ["one", "linear:1/2", "rational:1,2;3/4", "pow:2:linear:1", "table:-1=2,0=1"] {
            let f: ContentFunction = s.parse().unwrap();
            assert_eq!(f.to_string().parse::<ContentFunction>().unwrap(), f);
        }
        assert!("nope".parse::<ContentFunction>().is_err());
    }
}
