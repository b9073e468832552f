//! Exact fields: the rationals, prime fields, and quotient extensions
//! `K[x]/(f)` stacked at most two deep.
//!
//! Elements are plain data ([`Elem`]); all arithmetic goes through the
//! owning [`Field`], which carries the modulus. Representatives are
//! canonical: rationals are in lowest terms with positive denominator,
//! residues lie in `[0, p)`, and extension elements are dense coefficient
//! vectors of length exactly `degree`, low degree first, already reduced.

mod galois;
mod irreducible;
pub mod poly;
mod text;

use std::fmt;
use std::sync::Arc;

use num::{BigInt, BigRational, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};

pub use galois::{FieldAut, GaloisGroup};

/// Maximum supported tower depth (an extension of an extension).
pub const MAX_TOWER_DEPTH: usize = 2;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BaseField {
    Rationals,
    Prime(u64),
}

impl BaseField {
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(BaseField::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A field element. Only meaningful together with its [`Field`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Rat(BigRational),
    Mod(u64),
    Poly(Vec<Elem>),
}

#[derive(Debug, PartialEq, Eq, Hash)]
enum FieldKind {
    Base(BaseField),
    Ext(Extension),
}

/// `base[x]/(modulus)` with a verified irreducible monic modulus.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct Extension {
    base: Field,
    /// Monic, low degree first, `degree + 1` coefficients in `base`.
    modulus: Vec<Elem>,
    symbol: String,
}

impl Extension {
    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn modulus(&self) -> &[Elem] {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    /// Name of the residue class of `x`, used in text output.
    pub fn symbol(&self) -> &str {
        &self.symbol
    }
}

/// A shared handle on an exact field.
#[derive(Clone, Eq, Hash)]
pub struct Field(Arc<FieldKind>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self.describe())
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Field {
    pub fn rationals() -> Self {
        Field(Arc::new(FieldKind::Base(BaseField::Rationals)))
    }

    pub fn prime(p: u64) -> Result<Self> {
        Ok(Field(Arc::new(FieldKind::Base(BaseField::prime(p)?))))
    }

    pub fn from_base(base: BaseField) -> Self {
        Field(Arc::new(FieldKind::Base(base)))
    }

    /// Builds `base[x]/(modulus)` after checking that the modulus is monic
    /// and irreducible. With `assert_irreducible` the caller vouches for
    /// irreducibility whenever the built-in checks are inconclusive; a
    /// modulus that is found reducible is rejected regardless.
    pub fn extension(base: &Field, modulus: Vec<Elem>, symbol: &str, assert_irreducible: bool) -> Result<Self> {
        if base.depth() >= MAX_TOWER_DEPTH {
            return Err(Error::TowerTooDeep);
        }
        let modulus = poly::trim(base, modulus);
        if modulus.len() < 2 || !base.is_one(modulus.last().unwrap()) {
            return Err(Error::BadModulus);
        }
        for c in &modulus {
            if !base.contains(c) {
                return Err(Error::FieldMismatch);
            }
        }
        irreducible::verify(base, &modulus, assert_irreducible)?;
        Ok(Field(Arc::new(FieldKind::Ext(Extension {
            base: base.clone(),
            modulus,
            symbol: symbol.to_string(),
        }))))
    }

    pub fn as_extension(&self) -> Option<&Extension> {
        match &*self.0 {
            FieldKind::Ext(e) => Some(e),
            FieldKind::Base(_) => None,
        }
    }

    pub fn as_base(&self) -> Option<&BaseField> {
        match &*self.0 {
            FieldKind::Base(b) => Some(b),
            FieldKind::Ext(_) => None,
        }
    }

    /// The immediate base field, if this is an extension.
    pub fn base(&self) -> Option<&Field> {
        self.as_extension().map(|e| &e.base)
    }

    /// The prime field (or the rationals) at the bottom of the tower.
    pub fn prime_field(&self) -> &BaseField {
        match &*self.0 {
            FieldKind::Base(b) => b,
            FieldKind::Ext(e) => e.base.prime_field(),
        }
    }

    pub fn depth(&self) -> usize {
        match &*self.0 {
            FieldKind::Base(_) => 0,
            FieldKind::Ext(e) => 1 + e.base.depth(),
        }
    }

    /// Degree over the immediate base (1 for a base field).
    pub fn degree(&self) -> usize {
        self.as_extension().map_or(1, Extension::degree)
    }

    pub fn characteristic(&self) -> u64 {
        match self.prime_field() {
            BaseField::Rationals => 0,
            BaseField::Prime(p) => *p,
        }
    }

    /// Number of elements, for finite fields.
    pub fn size(&self) -> Option<u128> {
        match &*self.0 {
            FieldKind::Base(BaseField::Rationals) => None,
            FieldKind::Base(BaseField::Prime(p)) => Some(*p as u128),
            FieldKind::Ext(e) => {
                let q = e.base.size()?;
                q.checked_pow(e.degree() as u32)
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.characteristic() != 0
    }

    // -- construction -----------------------------------------------------

    pub fn zero(&self) -> Elem {
        match &*self.0 {
            FieldKind::Base(BaseField::Rationals) => Elem::Rat(BigRational::zero()),
            FieldKind::Base(BaseField::Prime(_)) => Elem::Mod(0),
            FieldKind::Ext(e) => Elem::Poly(vec![e.base.zero(); e.degree()]),
        }
    }

    pub fn one(&self) -> Elem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Elem {
        match &*self.0 {
            FieldKind::Base(BaseField::Rationals) => Elem::Rat(BigRational::from_integer(n.into())),
            FieldKind::Base(BaseField::Prime(p)) => Elem::Mod(n.rem_euclid(*p as i64) as u64),
            FieldKind::Ext(e) => self.embed(e.base.from_i64(n)),
        }
    }

    pub fn from_rational(&self, r: &BigRational) -> Result<Elem> {
        match &*self.0 {
            FieldKind::Base(BaseField::Rationals) => Ok(Elem::Rat(r.clone())),
            FieldKind::Base(BaseField::Prime(p)) => {
                let p_big = BigInt::from(*p);
                let num = r.numer().mod_floor_big(&p_big);
                let den = r.denom().mod_floor_big(&p_big);
                if den == 0 {
                    return Err(Error::Parse {
                        input: r.to_string(),
                        reason: format!("denominator divisible by {p}"),
                    });
                }
                let den_inv = self.inv(&Elem::Mod(den)).expect("nonzero residue");
                Ok(self.mul(&Elem::Mod(num), &den_inv))
            }
            FieldKind::Ext(e) => Ok(self.embed(e.base.from_rational(r)?)),
        }
    }

    /// Embeds an element of the immediate base as a constant.
    pub fn embed(&self, b: Elem) -> Elem {
        match &*self.0 {
            FieldKind::Ext(e) => {
                let mut coeffs = vec![e.base.zero(); e.degree()];
                coeffs[0] = b;
                Elem::Poly(coeffs)
            }
            FieldKind::Base(_) => b,
        }
    }

    /// Reduces a base-field polynomial into a canonical element.
    pub fn from_coeffs(&self, coeffs: Vec<Elem>) -> Elem {
        let e = self.as_extension().expect("from_coeffs on a base field");
        let (_, mut r) = poly::divrem(&e.base, &coeffs, &e.modulus);
        r.resize(e.degree(), e.base.zero());
        Elem::Poly(r)
    }

    /// The residue class of `x`.
    pub fn generator(&self) -> Elem {
        let e = self.as_extension().expect("generator of a base field");
        let mut c = vec![e.base.zero(), e.base.one()];
        c.resize(e.degree().max(2), e.base.zero());
        self.from_coeffs(c)
    }

    /// Coefficients of an extension element over the immediate base.
    pub fn coeffs<'a>(&self, a: &'a Elem) -> &'a [Elem] {
        match a {
            Elem::Poly(c) => c,
            _ => panic!("coeffs of a base-field element"),
        }
    }

    /// If `a` is a constant, its value in the immediate base.
    pub fn constant_term(&self, a: &Elem) -> Option<Elem> {
        let e = self.as_extension()?;
        let c = self.coeffs(a);
        c[1..].iter().all(|x| e.base.is_zero(x)).then(|| c[0].clone())
    }

    /// Checks that `a` is a canonical element of this field.
    pub fn contains(&self, a: &Elem) -> bool {
        match (&*self.0, a) {
            (FieldKind::Base(BaseField::Rationals), Elem::Rat(_)) => true,
            (FieldKind::Base(BaseField::Prime(p)), Elem::Mod(r)) => r < p,
            (FieldKind::Ext(e), Elem::Poly(c)) => c.len() == e.degree() && c.iter().all(|x| e.base.contains(x)),
            _ => false,
        }
    }

    // -- arithmetic -------------------------------------------------------

    pub fn is_zero(&self, a: &Elem) -> bool {
        match a {
            Elem::Rat(r) => r.is_zero(),
            Elem::Mod(r) => *r == 0,
            Elem::Poly(c) => {
                let b = self.base().expect("polynomial element of a base field");
                c.iter().all(|x| b.is_zero(x))
            }
        }
    }

    pub fn is_one(&self, a: &Elem) -> bool {
        *a == self.one()
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (&*self.0, a, b) {
            (_, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x + y),
            (FieldKind::Base(BaseField::Prime(p)), Elem::Mod(x), Elem::Mod(y)) => {
                Elem::Mod(((*x as u128 + *y as u128) % *p as u128) as u64)
            }
            (FieldKind::Ext(e), Elem::Poly(x), Elem::Poly(y)) => {
                Elem::Poly(x.iter().zip(y).map(|(s, t)| e.base.add(s, t)).collect())
            }
            _ => panic!("field element kind mismatch in add"),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match (&*self.0, a) {
            (_, Elem::Rat(x)) => Elem::Rat(-x),
            (FieldKind::Base(BaseField::Prime(p)), Elem::Mod(x)) => Elem::Mod(if *x == 0 { 0 } else { p - x }),
            (FieldKind::Ext(e), Elem::Poly(x)) => Elem::Poly(x.iter().map(|s| e.base.neg(s)).collect()),
            _ => panic!("field element kind mismatch in neg"),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (&*self.0, a, b) {
            (_, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x * y),
            (FieldKind::Base(BaseField::Prime(p)), Elem::Mod(x), Elem::Mod(y)) => {
                Elem::Mod(((*x as u128 * *y as u128) % *p as u128) as u64)
            }
            (FieldKind::Ext(e), Elem::Poly(x), Elem::Poly(y)) => self.from_coeffs(poly::mul(&e.base, x, y)),
            _ => panic!("field element kind mismatch in mul"),
        }
    }

    /// Multiplies an extension element by a scalar from the immediate base.
    pub fn scale_by_base(&self, s: &Elem, a: &Elem) -> Elem {
        let e = self.as_extension().expect("scale_by_base on a base field");
        Elem::Poly(self.coeffs(a).iter().map(|c| e.base.mul(s, c)).collect())
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: &Elem) -> Option<Elem> {
        if self.is_zero(a) {
            return None;
        }
        Some(match (&*self.0, a) {
            (_, Elem::Rat(x)) => Elem::Rat(x.recip()),
            (FieldKind::Base(BaseField::Prime(p)), Elem::Mod(x)) => Elem::Mod(mod_pow(*x, p - 2, *p)),
            (FieldKind::Ext(e), Elem::Poly(x)) => {
                let x = poly::trim(&e.base, x.clone());
                let (g, s, _) = poly::ext_gcd(&e.base, &x, &e.modulus);
                // gcd is a nonzero constant since the modulus is irreducible
                let g0 = e.base.inv(&g[0]).expect("nonzero gcd");
                let s: Vec<Elem> = s.iter().map(|c| e.base.mul(c, &g0)).collect();
                self.from_coeffs(s)
            }
            _ => panic!("field element kind mismatch in inv"),
        })
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Option<Elem> {
        Some(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Elem, mut n: u128) -> Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    // -- enumeration and sampling -----------------------------------------

    /// All elements of a finite field in a fixed order.
    ///
    /// Panics on infinite fields.
    pub fn elements(&self) -> Vec<Elem> {
        match &*self.0 {
            FieldKind::Base(BaseField::Rationals) => panic!("cannot enumerate the rationals"),
            FieldKind::Base(BaseField::Prime(p)) => (0..*p).map(Elem::Mod).collect(),
            FieldKind::Ext(e) => {
                let base_elems = e.base.elements();
                let mut out: Vec<Vec<Elem>> = vec![Vec::new()];
                for _ in 0..e.degree() {
                    out = out
                        .into_iter()
                        .flat_map(|prefix| {
                            base_elems.iter().map(move |b| {
                                let mut v = prefix.clone();
                                v.push(b.clone());
                                v
                            })
                        })
                        .collect();
                }
                out.into_iter().map(Elem::Poly).collect()
            }
        }
    }

    /// A random element. Rational coefficients are small (numerators in
    /// `[-5, 5]`, denominators in `[1, 3]`) to keep entries readable.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        match &*self.0 {
            FieldKind::Base(BaseField::Rationals) => {
                let n: i64 = rng.gen_range(-5..=5);
                let d: i64 = rng.gen_range(1..=3);
                Elem::Rat(BigRational::new(n.into(), d.into()))
            }
            FieldKind::Base(BaseField::Prime(p)) => Elem::Mod(rng.gen_range(0..*p)),
            FieldKind::Ext(e) => Elem::Poly((0..e.degree()).map(|_| e.base.random(rng)).collect()),
        }
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        loop {
            let x = self.random(rng);
            if !self.is_zero(&x) {
                return x;
            }
        }
    }

    // -- text -------------------------------------------------------------

    pub fn format(&self, a: &Elem) -> String {
        text::format(self, a, true)
    }

    pub fn parse(&self, s: &str) -> Result<Elem> {
        text::parse(self, s)
    }

    /// Short human-readable description, e.g. `Q[i]/(i^2+1)`.
    pub fn describe(&self) -> String {
        match &*self.0 {
            FieldKind::Base(BaseField::Rationals) => "Q".into(),
            FieldKind::Base(BaseField::Prime(p)) => format!("F_{p}"),
            FieldKind::Ext(e) => {
                format!(
                    "{}[{}]/({})",
                    e.base.describe(),
                    e.symbol,
                    text::format_poly(&e.base, &e.modulus, &e.symbol)
                )
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

fn mod_pow(b: u64, mut e: u64, p: u64) -> u64 {
    let p = p as u128;
    let mut acc: u128 = 1;
    let mut base = b as u128 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc as u64
}

trait ModFloorBig {
    fn mod_floor_big(&self, m: &BigInt) -> u64;
}

impl ModFloorBig for BigInt {
    fn mod_floor_big(&self, m: &BigInt) -> u64 {
        let mut r = self % m;
        if r.is_negative() {
            r += m;
        }
        u64::try_from(r).expect("residue fits in u64")
    }
}

/// Convenience for tests and fixtures: `Q(i) = Q[i]/(i^2 + 1)`.
pub fn gaussian_rationals() -> Field {
    let q = Field::rationals();
    let m = vec![q.one(), q.zero(), q.one()];
    Field::extension(&q, m, "i", false).expect("x^2+1 is irreducible over Q")
}

/// `F_{p^n}` given a monic irreducible modulus with integer coefficients
/// (low degree first).
pub fn finite_extension(p: u64, modulus: &[i64], symbol: &str) -> Result<Field> {
    let fp = Field::prime(p)?;
    let m = modulus.iter().map(|&c| fp.from_i64(c)).collect();
    Field::extension(&fp, m, symbol, false)
}

/// `Q[x]/(f)` for a monic integer polynomial (low degree first).
pub fn rational_extension(modulus: &[i64], symbol: &str, assert_irreducible: bool) -> Result<Field> {
    let q = Field::rationals();
    let m = modulus.iter().map(|&c| q.from_i64(c)).collect();
    Field::extension(&q, m, symbol, assert_irreducible)
}
