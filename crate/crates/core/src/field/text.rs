//! Canonical text form of field elements.
//!
//! * rationals: `p` or `p/q`
//! * prime field: `r mod p` (bare `r` inside a polynomial)
//! * extension elements: `c0+c1*a+c2*a^2`, zero terms omitted, nested
//!   extension coefficients wrapped in parentheses.

use num::{BigInt, BigRational, Zero};

use super::{BaseField, Elem, Field, FieldKind};
use crate::error::{Error, Result};

pub(super) fn format(k: &Field, a: &Elem, top: bool) -> String {
    match (&*k.0, a) {
        (_, Elem::Rat(r)) => {
            if r.is_integer() {
                r.numer().to_string()
            } else {
                format!("{}/{}", r.numer(), r.denom())
            }
        }
        (FieldKind::Base(BaseField::Prime(p)), Elem::Mod(r)) => {
            if top {
                format!("{r} mod {p}")
            } else {
                r.to_string()
            }
        }
        (FieldKind::Ext(e), Elem::Poly(c)) => format_poly(&e.base, c, &e.symbol),
        _ => panic!("element does not belong to {}", k.describe()),
    }
}

/// Formats a polynomial with coefficients in `k` in the variable `symbol`.
pub(crate) fn format_poly(k: &Field, coeffs: &[Elem], symbol: &str) -> String {
    let nested = k.as_extension().is_some();
    let mut out = String::new();
    for (j, c) in coeffs.iter().enumerate() {
        if k.is_zero(c) {
            continue;
        }
        let mut cs = format(k, c, false);
        if nested {
            cs = format!("({cs})");
        }
        let term = match j {
            0 => cs,
            1 => format!("{cs}*{symbol}"),
            _ => format!("{cs}*{symbol}^{j}"),
        };
        if !out.is_empty() && !term.starts_with('-') {
            out.push('+');
        }
        out.push_str(&term);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn err(input: &str, reason: impl Into<String>) -> Error {
    Error::Parse {
        input: input.to_string(),
        reason: reason.into(),
    }
}

pub(super) fn parse(k: &Field, s: &str) -> Result<Elem> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    match &*k.0 {
        FieldKind::Base(BaseField::Rationals) => parse_rational(&compact).map(Elem::Rat),
        FieldKind::Base(BaseField::Prime(p)) => parse_prime(k, *p, s.trim()),
        FieldKind::Ext(_) => parse_ext(k, &compact),
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = strip_parens(s);
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| err(s, "bad numerator"))?;
    let d: BigInt = d.parse().map_err(|_| err(s, "bad denominator"))?;
    if d.is_zero() {
        return Err(err(s, "zero denominator"));
    }
    Ok(BigRational::new(n, d))
}

fn parse_prime(k: &Field, p: u64, s: &str) -> Result<Elem> {
    let body = match s.split_once("mod") {
        Some((r, m)) => {
            let m: u64 = m.trim().parse().map_err(|_| err(s, "bad modulus"))?;
            if m != p {
                return Err(err(s, format!("expected residue mod {p}")));
            }
            r.trim()
        }
        None => s,
    };
    let compact: String = body.chars().filter(|c| !c.is_whitespace()).collect();
    k.from_rational(&parse_rational(&compact)?)
}

fn strip_parens(s: &str) -> &str {
    let mut s = s;
    while s.starts_with('(') && s.ends_with(')') && matching_close(s) == Some(s.len() - 1) {
        s = &s[1..s.len() - 1];
    }
    s
}

fn matching_close(s: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

/// Splits at top-level `+`/`-` signs that start a new term.
fn split_terms(s: &str) -> Result<Vec<&str>> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for i in 0..bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(err(s, "unbalanced parentheses"));
                }
            }
            b'+' | b'-' if depth == 0 && i > 0 => {
                let prev = bytes[i - 1];
                if !matches!(prev, b'*' | b'/' | b'^' | b'+' | b'-') {
                    out.push(&s[start..i]);
                    start = i;
                }
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(err(s, "unbalanced parentheses"));
    }
    out.push(&s[start..]);
    Ok(out)
}

fn parse_ext(k: &Field, s: &str) -> Result<Elem> {
    let e = k.as_extension().unwrap();
    let base = &e.base;
    let sym = e.symbol.as_str();
    let s = strip_parens(s);
    if s.is_empty() {
        return Err(err(s, "empty element"));
    }
    let mut coeffs: Vec<Elem> = Vec::new();
    for term in split_terms(s)? {
        let (negate, body) = match term.as_bytes().first() {
            Some(b'+') => (false, &term[1..]),
            Some(b'-') => (true, &term[1..]),
            _ => (false, term),
        };
        if body.is_empty() {
            return Err(err(s, "empty term"));
        }
        let (coeff, power) = split_monomial(body, sym)?;
        let mut c = match coeff {
            Some(cs) => parse_in_base(base, strip_parens(cs))?,
            None => base.one(),
        };
        if negate {
            c = base.neg(&c);
        }
        if coeffs.len() <= power {
            coeffs.resize(power + 1, base.zero());
        }
        coeffs[power] = base.add(&coeffs[power], &c);
    }
    Ok(k.from_coeffs(coeffs))
}

fn parse_in_base(base: &Field, s: &str) -> Result<Elem> {
    match &*base.0 {
        FieldKind::Base(BaseField::Rationals) => parse_rational(s).map(Elem::Rat),
        FieldKind::Base(BaseField::Prime(p)) => parse_prime(base, *p, s),
        FieldKind::Ext(_) => parse_ext(base, s),
    }
}

/// Splits `c*sym^n`, `sym^n`, `c*sym`, `sym` or a constant `c`.
fn split_monomial<'a>(body: &'a str, sym: &str) -> Result<(Option<&'a str>, usize)> {
    let power_of = |t: &str| -> Option<Result<usize>> {
        let rest = t.strip_prefix(sym)?;
        if rest.is_empty() {
            return Some(Ok(1));
        }
        let n = rest.strip_prefix('^')?;
        Some(n.parse().map_err(|_| err(t, "bad exponent")))
    };
    if let Some(p) = power_of(body) {
        return Ok((None, p?));
    }
    // last top-level '*'
    let mut depth = 0i32;
    let mut star = None;
    for (i, ch) in body.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '*' if depth == 0 => star = Some(i),
            _ => {}
        }
    }
    if let Some(i) = star {
        if let Some(p) = power_of(&body[i + 1..]) {
            return Ok((Some(&body[..i]), p?));
        }
        return Err(err(body, "unexpected factor"));
    }
    Ok((Some(body), 0))
}

#[cfg(test)]
mod tests {
    use super::super::{finite_extension, gaussian_rationals};
    use super::*;

    #[test]
    fn gaussian_round_trip() {
        let qi = gaussian_rationals();
        for s in ["0", "1", "1+1*i", "3-2*i", "-1/2*i", "2/3-7/5*i"] {
            let a = qi.parse(s).unwrap();
            assert_eq!(qi.format(&a), s);
        }
        // non-canonical inputs
        assert_eq!(qi.format(&qi.parse("i^2").unwrap()), "-1");
        assert_eq!(qi.format(&qi.parse("-i + 3").unwrap()), "3-1*i");
        assert!(qi.parse("1+").is_err());
        assert!(qi.parse("1/0").is_err());
    }

    #[test]
    fn prime_and_tower_text() {
        let f2 = Field::prime(2).unwrap();
        assert_eq!(f2.format(&f2.one()), "1 mod 2");
        assert_eq!(f2.parse("3 mod 2").unwrap(), f2.one());
        assert_eq!(f2.parse("1").unwrap(), f2.one());
        assert!(f2.parse("1 mod 3").is_err());

        let f4 = finite_extension(2, &[1, 1, 1], "w").unwrap();
        let w = f4.generator();
        assert_eq!(f4.format(&w), "1*w");
        assert_eq!(f4.format(&f4.mul(&w, &w)), "1+1*w");

        // F_16 = F_4[z]/(z^2 + z + w)
        let m = vec![w.clone(), f4.one(), f4.one()];
        let f16 = Field::extension(&f4, m, "z", false).unwrap();
        let z = f16.generator();
        let a = f16.add(&f16.mul(&f16.embed(w.clone()), &z), &f16.one());
        let s = f16.format(&a);
        assert_eq!(s, "(1)+(1*w)*z");
        assert_eq!(f16.parse(&s).unwrap(), a);
    }
}
