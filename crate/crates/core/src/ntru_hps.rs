//! NTRU-HPS: key generation, encryption, decryption and the KEM wrapper over
//! `Z[x]/(x^N - 1)` with a power-of-two modulus `q`.
//!
//! Sample spaces: `f, r` are arbitrary ternary polynomials of degree at most
//! `N - 2`; `g, m` additionally have exactly `q/16 - 1` ones and as many
//! minus-ones.

use rand::Rng;

use crate::codec::{hash_polys, SharedSecret};
use crate::error::{Error, Result};
use crate::ring::{is_prime, Poly, RingContext, TernarySpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HpsParams {
    n: usize,
    q: i64,
}

impl HpsParams {
    pub fn new(n: usize, q: i64) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidParams(msg));
        if !is_prime(n as i64) {
            return invalid(format!("N = {n} is not prime"));
        }
        if q < 32 || q & (q - 1) != 0 {
            return invalid(format!("q = {q} is not a power of two >= 32"));
        }
        // q <= 16N/3 + 16
        if 3 * q > 16 * n as i64 + 48 {
            return invalid(format!("q = {q} exceeds 16N/3 + 16 for N = {n}"));
        }
        let d = (q / 16 - 1) as usize;
        if 2 * d > n - 1 {
            return invalid(format!("2d = {} does not fit degree N - 2", 2 * d));
        }
        Ok(Self { n, q })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    /// Number of ones (and of minus-ones) in `g` and `m`.
    pub fn d(&self) -> usize {
        (self.q / 16 - 1) as usize
    }

    pub fn ring_q(&self) -> RingContext {
        RingContext::cyclic(self.n, Some(self.q)).expect("validated")
    }

    pub fn ring_3(&self) -> RingContext {
        RingContext::cyclic(self.n, Some(3)).expect("validated")
    }

    pub fn ring_z(&self) -> RingContext {
        RingContext::cyclic(self.n, None).expect("validated")
    }

    /// `L_f = L_r = T_{N-2}`.
    pub fn nonce_space(&self) -> TernarySpec {
        TernarySpec::unrestricted(self.n - 2)
    }

    /// `L_g = L_m = T_{N-2}(d, d)`.
    pub fn message_space(&self) -> TernarySpec {
        TernarySpec::fixed_signs(self.n - 2, self.d(), self.d()).expect("validated")
    }

    pub fn keygen<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<HpsKeyPair> {
        let f_space = self.nonce_space();
        let (f, fq, f3) = loop {
            let f = f_space.sample(self.ring_q(), rng)?;
            let fq = match f.inverse() {
                Ok(v) => v,
                Err(Error::NotInvertible) => continue,
                Err(e) => return Err(e),
            };
            let f3 = match f.centered().with_modulus(Some(3))?.inverse() {
                Ok(v) => v,
                Err(Error::NotInvertible) => continue,
                Err(e) => return Err(e),
            };
            break (f, fq, f3);
        };
        // g (hence h) must be invertible mod (q, Phi_N) for h_q to exist
        let (h, hq) = loop {
            let g = self.message_space().sample(self.ring_q(), rng)?;
            let h = g.scale(3).mul(&fq)?;
            match h.inverse() {
                Ok(hq) => break (h, hq),
                Err(Error::NotInvertible) => continue,
                Err(e) => return Err(e),
            }
        };
        let mut seed = [0u8; 32];
        rng.fill_bytes(&mut seed);
        Ok(HpsKeyPair {
            public: HpsPublicKey { params: *self, h },
            secret: HpsSecretKey { f, f3, hq, seed },
        })
    }

    /// `Lift_3`: the unique ternary representative of degree at most `N - 2`
    /// of `m` in `S/3`, returned over `Z`.
    pub fn lift3(&self, m: &Poly) -> Result<Poly> {
        Ok(m.with_modulus(Some(3))?.reduce_phi_n()?.centerlift(3))
    }

    pub fn shared_secret(&self, r: &Poly, m: &Poly) -> Result<SharedSecret> {
        hash_polys(&[], &[r, m])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HpsPublicKey {
    params: HpsParams,
    h: Poly,
}

impl HpsPublicKey {
    pub fn params(&self) -> &HpsParams {
        &self.params
    }

    pub fn h(&self) -> &Poly {
        &self.h
    }

    /// `c = h*r + Lift_3(m) mod (q, x^N - 1)`.
    pub fn encrypt(&self, r: &Poly, m: &Poly) -> Result<Poly> {
        let p = &self.params;
        if !p.nonce_space().contains(r) {
            return Err(Error::Membership("L_r"));
        }
        if !p.message_space().contains(m) {
            return Err(Error::Membership("L_m"));
        }
        let ctx = p.ring_q();
        let r = r.with_modulus(Some(p.q))?;
        let lifted = p.lift3(m)?.with_modulus(Some(p.q))?;
        debug_assert_eq!(*r.context(), ctx);
        self.h.mul(&r)?.add(&lifted)
    }

    pub fn encap<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(Poly, SharedSecret)> {
        let e = self.encap_with_witness(rng)?;
        Ok((e.ciphertext, e.shared_secret))
    }

    /// Encapsulation that also hands back the sampled `(r, m)`; used by the
    /// experiment harness as ground truth.
    pub fn encap_with_witness<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<HpsEncapsulation> {
        let p = &self.params;
        let r = p.nonce_space().sample(p.ring_z(), rng)?;
        let m = p.message_space().sample(p.ring_z(), rng)?;
        let ciphertext = self.encrypt(&r, &m)?;
        let shared_secret = p.shared_secret(&r, &m)?;
        Ok(HpsEncapsulation {
            ciphertext,
            shared_secret,
            r,
            m,
        })
    }
}

#[derive(Clone, Debug)]
pub struct HpsEncapsulation {
    pub ciphertext: Poly,
    pub shared_secret: SharedSecret,
    pub r: Poly,
    pub m: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HpsSecretKey {
    f: Poly,
    /// `f^-1 mod (3, Phi_N)`.
    f3: Poly,
    /// `h^-1 mod (q, Phi_N)`.
    hq: Poly,
    seed: [u8; 32],
}

impl HpsSecretKey {
    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn f3(&self) -> &Poly {
        &self.f3
    }

    pub fn hq(&self) -> &Poly {
        &self.hq
    }

    pub fn rejection_seed(&self) -> &[u8; 32] {
        &self.seed
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HpsKeyPair {
    pub public: HpsPublicKey,
    pub secret: HpsSecretKey,
}

/// Result of [`HpsKeyPair::decrypt`]; on failure `m` and `r` are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HpsDecryption {
    pub m: Poly,
    pub r: Poly,
    pub fail: bool,
}

impl HpsKeyPair {
    pub fn params(&self) -> &HpsParams {
        &self.public.params
    }

    pub fn decrypt(&self, c: &Poly) -> HpsDecryption {
        self.try_decrypt(c).unwrap_or_else(|_| self.failure())
    }

    fn failure(&self) -> HpsDecryption {
        let z = self.params().ring_z();
        HpsDecryption {
            m: Poly::zero(z),
            r: Poly::zero(z),
            fail: true,
        }
    }

    fn try_decrypt(&self, c: &Poly) -> Result<HpsDecryption> {
        let p = self.params();
        if *c.context() != p.ring_q() || c.eval_at_one() != 0 {
            return Ok(self.failure());
        }
        let sk = &self.secret;
        // a is centered before it is reduced mod 3
        let a = c.mul(&sk.f)?.centered();
        let m = a
            .with_modulus(Some(3))?
            .mul(&sk.f3)?
            .reduce_phi_n()?
            .centered();
        let lifted = p.lift3(&m)?.with_modulus(Some(p.q))?;
        let r = c.sub(&lifted)?.mul(&sk.hq)?.reduce_phi_n()?.centered();
        if p.nonce_space().contains(&r) && p.message_space().contains(&m) {
            Ok(HpsDecryption { m, r, fail: false })
        } else {
            Ok(self.failure())
        }
    }

    /// Decapsulation with implicit rejection: on failure the secret is
    /// `SHA-256(seed || encode(c))`.
    pub fn decap(&self, c: &Poly) -> Result<SharedSecret> {
        let d = self.decrypt(c);
        if d.fail {
            hash_polys(&self.secret.seed, &[c])
        } else {
            self.params().shared_secret(&d.r, &d.m)
        }
    }

    /// `g = (f*h mod q)/3`, centered.
    pub fn recover_g(&self) -> Result<Poly> {
        let fh = self.secret.f.mul(&self.public.h)?.centered();
        if fh.coeffs().iter().any(|c| c % 3 != 0) {
            return Err(Error::Consistency("f*h is not divisible by 3".into()));
        }
        let ctx = self.params().ring_z();
        Poly::from_coeffs(ctx, fh.coeffs().iter().map(|c| c / 3).collect())
    }
}
