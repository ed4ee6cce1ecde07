//! Streamlined NTRU-Prime over the field `Z_q[x]/(x^p - x - 1)`.
//!
//! Encapsulation rounds `c1 = h*r` coefficient-wise to the nearest multiple
//! of 3; the rounding error `m = c1 - Round(c1)` is the implicit ternary
//! message. Decapsulation recovers `r` from `3f * ct` and re-encapsulates.

use rand::Rng;

use crate::codec::{hash_polys, SharedSecret};
use crate::error::{Error, Result};
use crate::ring::{is_prime, Poly, RingContext, TernarySpec};

/// Nearest multiple of 3: `3 * sgn(x) * floor(|x/3| + 1/2)`.
pub fn closest3(x: i64) -> i64 {
    // floor(|x|/3 + 1/2) = floor((2|x| + 3) / 6)
    3 * x.signum() * ((2 * x.abs() + 3) / 6)
}

/// `Round = closest3 . Lift_q`: centers each coefficient into
/// `[-(q-1)/2, (q-1)/2]` and rounds it to a multiple of 3. The result is an
/// integer polynomial (no modulus), since for `q = 2 (mod 3)` the rounded
/// values may leave the centered range.
pub fn round_poly(a: &Poly) -> Poly {
    let lifted = a.centered();
    let ctx = *lifted.context();
    let coeffs = lifted.coeffs().iter().map(|&c| closest3(c)).collect();
    Poly::from_coeffs(ctx, coeffs).expect("same length")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeParams {
    p: usize,
    q: i64,
    w: usize,
}

impl PrimeParams {
    /// Checks everything except irreducibility of `x^p - x - 1` modulo `q`,
    /// which is left to [`PrimeParams::verify_field`].
    pub fn new(p: usize, q: i64, w: usize) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidParams(msg));
        if !is_prime(p as i64) {
            return invalid(format!("p = {p} is not prime"));
        }
        if !is_prime(q) {
            return invalid(format!("q = {q} is not prime"));
        }
        if w == 0 || !w.is_multiple_of(2) {
            return invalid(format!("w = {w} is not a positive even integer"));
        }
        if 2 * p < 3 * w {
            return invalid(format!("p = {p} < 1.5 w"));
        }
        if q < 16 * w as i64 + 1 {
            return invalid(format!("q = {q} < 16 w + 1"));
        }
        Ok(Self { p, q, w })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn w(&self) -> usize {
        self.w
    }

    pub fn ring_q(&self) -> RingContext {
        RingContext::trinomial(self.p, Some(self.q)).expect("validated")
    }

    pub fn ring_3(&self) -> RingContext {
        RingContext::trinomial(self.p, Some(3)).expect("validated")
    }

    pub fn ring_z(&self) -> RingContext {
        RingContext::trinomial(self.p, None).expect("validated")
    }

    /// `L_f = L_r = T_{p-1}(w)`.
    pub fn short_space(&self) -> TernarySpec {
        TernarySpec::fixed_weight(self.p - 1, self.w).expect("validated")
    }

    /// `L_g = T_{p-1}`.
    pub fn small_space(&self) -> TernarySpec {
        TernarySpec::unrestricted(self.p - 1)
    }

    /// Rabin's test for `x^p - x - 1` over `GF(q)` with `p` prime: the
    /// polynomial is irreducible iff `x^(q^p) = x` and `gcd(x^q - x, D) = 1`.
    /// The Frobenius map is applied as a `p x p` matrix, `O(p^3)` overall.
    pub fn verify_field(&self) -> Result<()> {
        let ctx = self.ring_q();
        let x = Poly::monomial(ctx, 1, 1);
        let frob_x = pow(&x, self.q as u64)?;
        let not_field = || {
            Err(Error::InvalidParams(format!(
                "x^{} - x - 1 is reducible modulo {}",
                self.p, self.q
            )))
        };
        match frob_x.sub(&x)?.inverse() {
            Ok(_) => {}
            Err(Error::NotInvertible) => return not_field(),
            Err(e) => return Err(e),
        }
        // rows[i] = (x^q)^i = (x^i)^q
        let mut rows = Vec::with_capacity(self.p);
        let mut acc = Poly::one(ctx);
        for _ in 0..self.p {
            rows.push(acc.coeffs().to_vec());
            acc = acc.mul(&frob_x)?;
        }
        let q = self.q;
        let mut v = x.coeffs().to_vec();
        for _ in 0..self.p {
            let mut next = vec![0i64; self.p];
            for (vi, row) in v.iter().zip(&rows) {
                if *vi == 0 {
                    continue;
                }
                for (n, r) in next.iter_mut().zip(row) {
                    *n = (*n + vi * r) % q;
                }
            }
            v = next;
        }
        if Poly::from_coeffs(ctx, v)? != x {
            return not_field();
        }
        Ok(())
    }

    pub fn keygen<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<PrimeKeyPair> {
        let (f, inv3f) = loop {
            let f = self.short_space().sample(self.ring_q(), rng)?;
            match f.scale(3).inverse() {
                Ok(inv) => break (f, inv),
                Err(Error::NotInvertible) => continue,
                Err(e) => return Err(e),
            }
        };
        let (g, g3) = loop {
            let g = self.small_space().sample(self.ring_3(), rng)?;
            match g.inverse() {
                Ok(inv) => break (g, inv),
                Err(Error::NotInvertible) => continue,
                Err(e) => return Err(e),
            }
        };
        let g = g.centered().with_modulus(Some(self.q))?;
        let h = g.mul(&inv3f)?;
        Ok(PrimeKeyPair {
            public: PrimePublicKey { params: *self, h },
            secret: PrimeSecretKey {
                f: f.centered(),
                g3,
            },
        })
    }

    /// `K = SHA-256(encode(r) || encode(ct))`.
    pub fn shared_secret(&self, r: &Poly, ct: &Poly) -> Result<SharedSecret> {
        hash_polys(&[], &[r, ct])
    }
}

fn pow(base: &Poly, mut e: u64) -> Result<Poly> {
    let mut acc = Poly::one(*base.context());
    let mut b = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&b)?;
        }
        b = b.mul(&b)?;
        e >>= 1;
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimePublicKey {
    params: PrimeParams,
    h: Poly,
}

#[derive(Clone, Debug)]
pub struct PrimeEncapsulation {
    /// `Round(h*r)` as integer coefficients, all multiples of 3.
    pub ciphertext: Poly,
    pub shared_secret: SharedSecret,
    pub r: Poly,
    /// `c1 - Round(c1)`, ternary; `ciphertext + m = h*r (mod q)`.
    pub m: Poly,
}

impl PrimePublicKey {
    pub fn params(&self) -> &PrimeParams {
        &self.params
    }

    pub fn h(&self) -> &Poly {
        &self.h
    }

    pub fn encap<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(SharedSecret, Poly)> {
        let e = self.encap_with_witness(rng)?;
        Ok((e.shared_secret, e.ciphertext))
    }

    pub fn encap_with_witness<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
    ) -> Result<PrimeEncapsulation> {
        let p = &self.params;
        let r = p.short_space().sample(p.ring_z(), rng)?;
        self.encap_with_nonce(&r)
    }

    /// Deterministic part of encapsulation for a given nonce `r`.
    pub fn encap_with_nonce(&self, r: &Poly) -> Result<PrimeEncapsulation> {
        let p = &self.params;
        let c1 = self.h.mul(&r.with_modulus(Some(p.q))?)?;
        let lifted = c1.centered();
        let ciphertext = round_poly(&c1);
        let m = lifted.sub(&ciphertext)?;
        let shared_secret = p.shared_secret(r, &ciphertext)?;
        Ok(PrimeEncapsulation {
            ciphertext,
            shared_secret,
            r: r.centered(),
            m,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeSecretKey {
    f: Poly,
    /// `g^-1 mod (3, x^p - x - 1)`.
    g3: Poly,
}

impl PrimeSecretKey {
    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn g3(&self) -> &Poly {
        &self.g3
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeKeyPair {
    pub public: PrimePublicKey,
    pub secret: PrimeSecretKey,
}

impl PrimeKeyPair {
    pub fn params(&self) -> &PrimeParams {
        &self.public.params
    }

    /// Returns `None` when the re-encapsulation check rejects `ct`.
    pub fn decap(&self, ct: &Poly) -> Result<Option<SharedSecret>> {
        let p = self.params();
        if ct.context().quotient() != p.ring_z().quotient() {
            return Ok(None);
        }
        let ct = ct.centered();
        let three_f = self.secret.f.scale(3).with_modulus(Some(p.q))?;
        let e1 = three_f.mul(&ct.with_modulus(Some(p.q))?)?;
        let e = e1.centered().with_modulus(Some(3))?;
        let r = e.mul(&self.secret.g3)?.centered();
        let c = round_poly(&self.public.h.mul(&r.with_modulus(Some(p.q))?)?);
        if c == ct {
            Ok(Some(p.shared_secret(&r, &c)?))
        } else {
            Ok(None)
        }
    }

    /// `g = h * 3f mod q`, centered.
    pub fn recover_g(&self) -> Result<Poly> {
        let p = self.params();
        let three_f = self.secret.f.scale(3).with_modulus(Some(p.q))?;
        Ok(self.public.h.mul(&three_f)?.centered())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed;
    use proptest::prelude::*;
    use rand::Rng;

    fn toy() -> PrimeParams {
        // x^53 - x - 1 is irreducible mod 2459 (checked by field_check)
        PrimeParams::new(53, 2459, 16).unwrap()
    }

    #[test]
    fn closest3_values() {
        assert_eq!(closest3(0), 0);
        assert_eq!(closest3(4), 3);
        assert_eq!(closest3(5), 6);
        assert_eq!(closest3(-4), -3);
        assert_eq!(closest3(-5), -6);
        assert_eq!(closest3(2310), 2310);
        assert_eq!(closest3(1), 0);
        assert_eq!(closest3(2), 3);
    }

    proptest! {
        #[test]
        fn closest3_is_nearest_multiple(x in -1_000_000i64..1_000_000) {
            let c = closest3(x);
            prop_assert_eq!(c % 3, 0);
            prop_assert!((c - x).abs() <= 1);
        }
    }

    #[test]
    fn round_of_zero_and_fixed_points() {
        let ctx = RingContext::trinomial(5, Some(4621)).unwrap();
        assert!(round_poly(&Poly::zero(ctx)).is_zero());
        let a = Poly::from_coeffs(ctx, vec![2310, 2311, 1, 4620, 3]).unwrap();
        assert_eq!(round_poly(&a).coeffs(), &[2310, -2310, 0, 0, 3]);
    }

    #[test]
    fn round_error_is_ternary() {
        let ctx = RingContext::trinomial(97, Some(4591)).unwrap();
        let mut rng = seed::rng(1);
        for _ in 0..100 {
            let a = Poly::from_coeffs(ctx, (0..97).map(|_| rng.gen_range(0..4591)).collect())
                .unwrap();
            let e = a.centered().sub(&round_poly(&a)).unwrap();
            assert!(e.is_ternary());
        }
    }

    #[test]
    fn q_two_mod_three_rounds_past_the_centered_range() {
        // q = 5: (q-1)/2 = 2 rounds to 3 = (q+1)/2, inside A_{q,2}
        let ctx = RingContext::trinomial(3, Some(5)).unwrap();
        let a = Poly::from_coeffs(ctx, vec![2, 3, 0]).unwrap();
        assert_eq!(round_poly(&a).coeffs(), &[3, -3, 0]);
    }

    #[test]
    fn parameter_validation() {
        assert!(PrimeParams::new(653, 4621, 288).is_ok());
        assert!(PrimeParams::new(761, 4591, 286).is_ok());
        assert!(PrimeParams::new(857, 5167, 322).is_ok());
        assert!(PrimeParams::new(653, 4621, 287).is_err());
        assert!(PrimeParams::new(653, 4620, 288).is_err());
        assert!(PrimeParams::new(653, 4603, 288).is_err());
        assert!(PrimeParams::new(401, 5167, 322).is_err());
    }

    #[test]
    fn field_check() {
        toy().verify_field().unwrap();
        // x^5 - x - 1 = (x^2 - x + 1)(x^3 + x^2 - 1) over Z
        let reducible = PrimeParams::new(5, 97, 2).unwrap();
        assert!(reducible.verify_field().is_err());
    }

    #[test]
    fn keygen_invariants() {
        let p = toy();
        let kp = p.keygen(&mut seed::rng(2)).unwrap();
        assert!(p.short_space().contains(kp.secret.f()));
        let g = kp.recover_g().unwrap();
        assert!(g.is_ternary());
        let g3 = g.with_modulus(Some(3)).unwrap();
        assert_eq!(g3.mul(kp.secret.g3()).unwrap(), Poly::one(p.ring_3()));
    }

    #[test]
    fn sntrup653_secret_weight() {
        let p = PrimeParams::new(653, 4621, 288).unwrap();
        let kp = p.keygen(&mut seed::rng(3)).unwrap();
        assert_eq!(kp.secret.f().weight(), 288);
    }

    #[test]
    fn encap_decap() {
        let p = toy();
        let mut rng = seed::rng(4);
        let kp = p.keygen(&mut rng).unwrap();
        for _ in 0..50 {
            let e = kp.public.encap_with_witness(&mut rng).unwrap();
            assert!(e.m.is_ternary());
            assert!(e.ciphertext.coeffs().iter().all(|c| c % 3 == 0));
            let hr = kp.public.h().mul(&e.r.with_modulus(Some(p.q())).unwrap()).unwrap();
            let sum = e.ciphertext.add(&e.m).unwrap().with_modulus(Some(p.q())).unwrap();
            assert_eq!(sum, hr);
            assert_eq!(kp.decap(&e.ciphertext).unwrap(), Some(e.shared_secret));
        }
    }

    #[test]
    fn tampered_ciphertext_is_rejected() {
        let p = toy();
        let mut rng = seed::rng(5);
        let kp = p.keygen(&mut rng).unwrap();
        let (k, ct) = kp.public.encap(&mut rng).unwrap();
        let mut coeffs = ct.coeffs().to_vec();
        coeffs[7] += 3;
        let bad = Poly::from_coeffs(*ct.context(), coeffs).unwrap();
        assert_ne!(kp.decap(&bad).unwrap(), Some(k));
    }

    #[test]
    fn zero_ciphertext_matches_recomputation() {
        // Independent recomputation of the decapsulation steps for ct = 0:
        // 3f*0 = 0, so r' = 0 and c' = Round(h*0) = 0 = ct; the key is the
        // hash of two zero encodings.
        let p = toy();
        let kp = p.keygen(&mut seed::rng(6)).unwrap();
        let zero = Poly::zero(p.ring_z());
        let expect = crate::codec::hash_polys(&[], &[&zero, &zero]).unwrap();
        assert_eq!(kp.decap(&zero).unwrap(), Some(expect));
    }
}
