//! Irreducibility checks for extension moduli.
//!
//! Over finite bases the check is exact: a root search up to degree 3 and
//! trial division by every monic polynomial of degree at most `deg / 2`
//! beyond that. Over the rationals we run the rational-root test and then
//! reduce modulo up to three good primes; a modulus that stays reducible
//! everywhere is only accepted with an explicit assertion.

use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};

use super::{poly, text, BaseField, Elem, Field};
use crate::error::{Error, Result};

const GOOD_PRIMES: usize = 3;
const PRIME_SEARCH_LIMIT: u64 = 1000;
const DIVISOR_BOUND: i64 = 1_000_000_000_000;

pub(super) fn verify(base: &Field, modulus: &[Elem], assert_irreducible: bool) -> Result<()> {
    let deg = modulus.len() - 1;
    if deg == 1 {
        return Ok(());
    }
    if base.is_finite() {
        return match finite_factor(base, modulus) {
            Some(f) => Err(Error::Reducible {
                factor: text::format_poly(base, &f, "x"),
            }),
            None => Ok(()),
        };
    }
    match base.as_base() {
        Some(BaseField::Rationals) => rational(modulus, assert_irreducible),
        // number-field bases: no factorization available
        _ if assert_irreducible => Ok(()),
        _ => Err(Error::UnverifiableIrreducibility),
    }
}

/// A nontrivial monic factor of `f` over a finite field, if any.
pub(crate) fn finite_factor(k: &Field, f: &[Elem]) -> Option<Vec<Elem>> {
    let deg = poly::degree(k, f)?;
    if deg <= 1 {
        return None;
    }
    if deg <= 3 {
        return k
            .elements()
            .into_iter()
            .find(|r| k.is_zero(&poly::eval(k, f, r)))
            .map(|r| vec![k.neg(&r), k.one()]);
    }
    (1..=deg / 2).find_map(|d| {
        poly::monic_of_degree(k, d)
            .into_iter()
            .find(|g| poly::rem(k, f, g).is_empty())
    })
}

fn rational(modulus: &[Elem], assert_irreducible: bool) -> Result<()> {
    let q = Field::rationals();
    let deg = modulus.len() - 1;
    let coeffs: Vec<BigRational> = modulus
        .iter()
        .map(|c| match c {
            Elem::Rat(r) => r.clone(),
            _ => unreachable!("rational modulus"),
        })
        .collect();
    let denom_lcm = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| (c * BigRational::from_integer(denom_lcm.clone())).to_integer())
        .collect();

    match rational_root(&q, modulus, &ints) {
        RootSearch::Found(r) => {
            let factor = vec![q.neg(&Elem::Rat(r)), q.one()];
            return Err(Error::Reducible {
                factor: text::format_poly(&q, &factor, "x"),
            });
        }
        RootSearch::None if deg <= 3 => return Ok(()),
        _ => {}
    }

    let mut good = 0;
    for p in (2..PRIME_SEARCH_LIMIT).filter(|&p| super::is_prime(p)) {
        if good == GOOD_PRIMES {
            break;
        }
        if (&denom_lcm % p).is_zero() {
            continue;
        }
        let fp = Field::prime(p).expect("prime");
        let reduced: Vec<Elem> = coeffs
            .iter()
            .map(|c| fp.from_rational(c).expect("denominator coprime to p"))
            .collect();
        // squarefree mod p  <=>  p does not divide the discriminant
        if poly::gcd(&fp, &reduced, &poly::derivative(&fp, &reduced)).len() != 1 {
            continue;
        }
        good += 1;
        if finite_factor(&fp, &reduced).is_none() {
            return Ok(());
        }
    }
    if assert_irreducible {
        Ok(())
    } else {
        Err(Error::UnverifiableIrreducibility)
    }
}

enum RootSearch {
    Found(BigRational),
    None,
    Skipped,
}

fn rational_root(q: &Field, modulus: &[Elem], ints: &[BigInt]) -> RootSearch {
    let a0 = &ints[0];
    let an = ints.last().unwrap();
    if a0.is_zero() {
        return RootSearch::Found(BigRational::zero());
    }
    let (Some(a0), Some(an)) = (a0.abs().to_i64(), an.abs().to_i64()) else {
        return RootSearch::Skipped;
    };
    if a0 > DIVISOR_BOUND || an > DIVISOR_BOUND {
        return RootSearch::Skipped;
    }
    for num in divisors(a0) {
        for den in divisors(an) {
            for sign in [1i64, -1] {
                let r = BigRational::new((sign * num).into(), den.into());
                if q.is_zero(&poly::eval(q, modulus, &Elem::Rat(r.clone()))) {
                    return RootSearch::Found(r);
                }
            }
        }
    }
    RootSearch::None
}

fn divisors(n: i64) -> Vec<i64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisors_are_sorted() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
    }

    #[test]
    fn finite_quartic_factor() {
        // x^4 + x^2 + 1 = (x^2 + x + 1)^2 over F_2, no roots
        let f2 = Field::prime(2).unwrap();
        let f: Vec<Elem> = [1, 0, 1, 0, 1].iter().map(|&c| f2.from_i64(c)).collect();
        let g = finite_factor(&f2, &f).unwrap();
        assert_eq!(g, vec![f2.one(), f2.one(), f2.one()]);
        // x^4 + x + 1 is irreducible
        let f: Vec<Elem> = [1, 1, 0, 0, 1].iter().map(|&c| f2.from_i64(c)).collect();
        assert!(finite_factor(&f2, &f).is_none());
    }

    #[test]
    fn rational_quartics() {
        let q = Field::rationals();
        let m = |c: &[i64]| -> Vec<Elem> { c.iter().map(|&x| q.from_i64(x)).collect() };
        // x^4 + x + 1 stays irreducible mod 2
        assert!(verify(&q, &m(&[1, 1, 0, 0, 1]), false).is_ok());
        // (x^2+1)(x^2+2): no rational root, split mod every prime
        assert!(matches!(
            verify(&q, &m(&[2, 0, 3, 0, 1]), false),
            Err(Error::UnverifiableIrreducibility)
        ));
        // x^4 + 1 is irreducible but reducible mod every prime
        assert!(matches!(
            verify(&q, &m(&[1, 0, 0, 0, 1]), false),
            Err(Error::UnverifiableIrreducibility)
        ));
        assert!(verify(&q, &m(&[1, 0, 0, 0, 1]), true).is_ok());
        // rational root 1/1 found even with the assertion
        assert!(matches!(
            verify(&q, &m(&[-1, 0, 0, 0, 1]), true),
            Err(Error::Reducible { .. })
        ));
    }
}
