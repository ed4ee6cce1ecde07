//! Inversion in `Z_m[x]/(M)`.
//!
//! For prime `m` this is the extended Euclidean algorithm over `GF(m)[x]`.
//! For `m = 2^e` the inverse modulo 2 is lifted with the Newton step
//! `b <- b * (2 - a * b)`, which doubles the 2-adic precision each round.

use super::{Poly, Quotient};
use crate::error::{Error, Result};

pub(super) fn invert(a: &Poly) -> Result<Poly> {
    let ctx = *a.context();
    let m = ctx.modulus().ok_or(Error::UnsupportedModulus(0))?;
    if is_prime(m) {
        invert_prime(a, m)
    } else if m & (m - 1) == 0 {
        invert_power_of_two(a, m)
    } else {
        Err(Error::UnsupportedModulus(m))
    }
}

/// Coefficients (low to high) of the polynomial the inverse is taken modulo.
fn inversion_modulus(q: Quotient) -> Vec<i64> {
    match q {
        // Phi_n = 1 + x + .. + x^(n-1)
        Quotient::Cyclic(n) => vec![1; n],
        Quotient::Trinomial(p) => {
            let mut d = vec![0; p + 1];
            d[0] = -1;
            d[1] = -1;
            d[p] = 1;
            d
        }
    }
}

/// Projects a ring element onto the inversion quotient (identity for the
/// trinomial, reduction by `Phi_n` for cyclic rings).
fn project(a: &Poly) -> Result<Poly> {
    if a.context().is_cyclic() {
        a.reduce_phi_n()
    } else {
        Ok(a.clone())
    }
}

fn invert_prime(a: &Poly, p: i64) -> Result<Poly> {
    let ctx = *a.context();
    let modulus = inversion_modulus(ctx.quotient());
    let a = project(a)?;
    let mut inv = gf_inverse(a.coeffs(), &modulus, p).ok_or(Error::NotInvertible)?;
    inv.resize(ctx.degree(), 0);
    Poly::from_coeffs(ctx, inv)
}

fn invert_power_of_two(a: &Poly, q: i64) -> Result<Poly> {
    let ctx = *a.context();
    let mut b = invert_prime(&a.with_modulus(Some(2))?, 2)?.with_modulus(Some(q))?;
    let a = project(a)?;
    let two = Poly::monomial(ctx, 0, 2);
    // b is correct modulo 2^bits
    let mut bits = 1u32;
    while (1i64 << bits.min(62)) < q {
        let ab = project(&a.mul(&b)?)?;
        b = project(&b.mul(&two.sub(&ab)?)?)?;
        bits *= 2;
    }
    Ok(b)
}

pub(crate) fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Inverse of `a` modulo the prime `p`.
pub(crate) fn inv_mod(a: i64, p: i64) -> Option<i64> {
    let (mut r0, mut r1) = (p, a.rem_euclid(p));
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let t = r0 / r1;
        (r0, r1) = (r1, r0 - t * r1);
        (s0, s1) = (s1, s0 - t * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(p))
}

fn trim(v: &mut Vec<i64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Inverse of `a` modulo `(p, modulus)` via the extended Euclidean algorithm,
/// or `None` if `gcd(a, modulus) != 1` over `GF(p)`.
pub(crate) fn gf_inverse(a: &[i64], modulus: &[i64], p: i64) -> Option<Vec<i64>> {
    let norm = |v: &[i64]| {
        let mut v: Vec<i64> = v.iter().map(|c| c.rem_euclid(p)).collect();
        trim(&mut v);
        v
    };
    let mut r0 = norm(modulus);
    let mut r1 = norm(a);
    let mut s0: Vec<i64> = Vec::new();
    let mut s1: Vec<i64> = vec![1];
    while !r1.is_empty() {
        // r0 = quot * r1 + rem
        let lead_inv = inv_mod(*r1.last().unwrap(), p)?;
        let mut rem = r0.clone();
        let mut quot = vec![0i64; rem.len().saturating_sub(r1.len()) + 1];
        while rem.len() >= r1.len() && !rem.is_empty() {
            let shift = rem.len() - r1.len();
            let c = rem.last().unwrap() * lead_inv % p;
            quot[shift] = c;
            for (i, &b) in r1.iter().enumerate() {
                rem[shift + i] = (rem[shift + i] - c * b).rem_euclid(p);
            }
            trim(&mut rem);
        }
        trim(&mut quot);
        // s_next = s0 - quot * s1
        let mut s_next = vec![0i64; (quot.len() + s1.len()).max(s0.len())];
        for (i, &c) in s0.iter().enumerate() {
            s_next[i] = c;
        }
        for (i, &qc) in quot.iter().enumerate() {
            if qc == 0 {
                continue;
            }
            for (j, &sc) in s1.iter().enumerate() {
                s_next[i + j] = (s_next[i + j] - qc * sc).rem_euclid(p);
            }
        }
        trim(&mut s_next);
        r0 = std::mem::replace(&mut r1, rem);
        s0 = std::mem::replace(&mut s1, s_next);
    }
    // gcd is r0; invertible iff it is a nonzero constant
    if r0.len() != 1 {
        return None;
    }
    let g = inv_mod(r0[0], p)?;
    let mut inv: Vec<i64> = s0.iter().map(|c| c * g % p).collect();
    trim(&mut inv);
    // reduce below deg(modulus)
    let m = norm(modulus);
    let m_inv = inv_mod(*m.last().unwrap(), p)?;
    while inv.len() >= m.len() {
        let shift = inv.len() - m.len();
        let c = inv.last().unwrap() * m_inv % p;
        for (i, &b) in m.iter().enumerate() {
            inv[shift + i] = (inv[shift + i] - c * b).rem_euclid(p);
        }
        trim(&mut inv);
    }
    Some(inv)
}
