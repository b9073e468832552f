//! Dense univariate polynomials over a [`Field`], low degree first.
//!
//! The zero polynomial is the empty vector; every other result is trimmed
//! so that its last coefficient is nonzero.

use super::{Elem, Field};

pub fn trim(k: &Field, mut p: Vec<Elem>) -> Vec<Elem> {
    while p.last().is_some_and(|c| k.is_zero(c)) {
        p.pop();
    }
    p
}

/// Degree, with `None` for the zero polynomial.
pub fn degree(k: &Field, p: &[Elem]) -> Option<usize> {
    p.iter().rposition(|c| !k.is_zero(c))
}

pub fn add(k: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let n = a.len().max(b.len());
    let zero = k.zero();
    let out = (0..n)
        .map(|i| k.add(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    trim(k, out)
}

pub fn sub(k: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let nb: Vec<Elem> = b.iter().map(|c| k.neg(c)).collect();
    add(k, a, &nb)
}

pub fn mul(k: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![k.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if k.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = k.add(&out[i + j], &k.mul(x, y));
        }
    }
    trim(k, out)
}

pub fn scale(k: &Field, s: &Elem, a: &[Elem]) -> Vec<Elem> {
    trim(k, a.iter().map(|c| k.mul(s, c)).collect())
}

/// Quotient and remainder. Panics if `b` is zero.
pub fn divrem(k: &Field, a: &[Elem], b: &[Elem]) -> (Vec<Elem>, Vec<Elem>) {
    let b = trim(k, b.to_vec());
    let db = b.len().checked_sub(1).expect("division by the zero polynomial");
    let lead_inv = k.inv(&b[db]).expect("nonzero leading coefficient");
    let mut r = trim(k, a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![k.zero(); r.len() - db];
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = k.mul(r.last().unwrap(), &lead_inv);
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] = k.sub(&r[shift + i], &k.mul(&c, bi));
        }
        q[shift] = c;
        // the leading term cancels exactly
        r.pop();
        r = trim(k, r);
    }
    (trim(k, q), r)
}

pub fn rem(k: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    divrem(k, a, b).1
}

/// Makes a nonzero polynomial monic.
pub fn monic(k: &Field, a: &[Elem]) -> Vec<Elem> {
    match a.last() {
        None => Vec::new(),
        Some(l) => {
            let inv = k.inv(l).expect("trimmed polynomial");
            scale(k, &inv, a)
        }
    }
}

pub fn gcd(k: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let mut a = trim(k, a.to_vec());
    let mut b = trim(k, b.to_vec());
    while !b.is_empty() {
        let r = rem(k, &a, &b);
        a = b;
        b = r;
    }
    monic(k, &a)
}

/// Returns `(g, s, t)` with `s*a + t*b = g`; `g` is not normalized.
pub fn ext_gcd(k: &Field, a: &[Elem], b: &[Elem]) -> (Vec<Elem>, Vec<Elem>, Vec<Elem>) {
    let (mut r0, mut r1) = (trim(k, a.to_vec()), trim(k, b.to_vec()));
    let (mut s0, mut s1) = (vec![k.one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![k.one()]);
    while !r1.is_empty() {
        let (q, r) = divrem(k, &r0, &r1);
        let s = sub(k, &s0, &mul(k, &q, &s1));
        let t = sub(k, &t0, &mul(k, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    (r0, s0, t0)
}

pub fn derivative(k: &Field, a: &[Elem]) -> Vec<Elem> {
    let out = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| k.mul(&k.from_i64(i as i64), c))
        .collect();
    trim(k, out)
}

/// Evaluates `p` (coefficients in `k`) at `x` in `k`.
pub fn eval(k: &Field, p: &[Elem], x: &Elem) -> Elem {
    p.iter().rev().fold(k.zero(), |acc, c| k.add(&k.mul(&acc, x), c))
}

/// Evaluates `p` with coefficients in the immediate base of `ext` at a
/// point `x` of `ext`.
pub fn eval_over(ext: &Field, p: &[Elem], x: &Elem) -> Elem {
    p.iter()
        .rev()
        .fold(ext.zero(), |acc, c| ext.add(&ext.mul(&acc, x), &ext.embed(c.clone())))
}

/// All monic polynomials of the given degree over a finite field.
pub fn monic_of_degree(k: &Field, deg: usize) -> Vec<Vec<Elem>> {
    let elems = k.elements();
    let mut out: Vec<Vec<Elem>> = vec![Vec::new()];
    for _ in 0..deg {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                elems.iter().map(move |e| {
                    let mut v = prefix.clone();
                    v.push(e.clone());
                    v
                })
            })
            .collect();
    }
    for p in &mut out {
        p.push(k.one());
    }
    out
}
