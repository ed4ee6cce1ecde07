//! Dense polynomial arithmetic in `Z[x]/(D)` and its reductions modulo an
//! integer.
//!
//! Two quotients are supported: the cyclic `x^n - 1` used by NTRU-HPS (which
//! splits as `Phi_1 * Phi_n`) and the trinomial `x^p - x - 1` used by
//! NTRU-Prime. Coefficients are `i64`; for a ring with a modulus `m` they are
//! stored in `[0, m)`, and [`Poly::centerlift`] produces the symmetric form
//! explicitly.

mod inverse;
mod ternary;

use std::fmt;

pub use ternary::{TernaryKind, TernarySpec};

pub(crate) use inverse::is_prime;

use crate::error::{Error, Result};

/// The monic polynomial the ring is quotiented by.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quotient {
    /// `x^n - 1`.
    Cyclic(usize),
    /// `x^p - x - 1`.
    Trinomial(usize),
}

impl Quotient {
    pub fn degree(self) -> usize {
        match self {
            Quotient::Cyclic(n) | Quotient::Trinomial(n) => n,
        }
    }
}

/// A quotient ring `Z[x]/(D)`, optionally reduced modulo an integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RingContext {
    quotient: Quotient,
    modulus: Option<i64>,
}

impl RingContext {
    pub fn cyclic(n: usize, modulus: Option<i64>) -> Result<Self> {
        Self::new(Quotient::Cyclic(n), modulus)
    }

    pub fn trinomial(p: usize, modulus: Option<i64>) -> Result<Self> {
        Self::new(Quotient::Trinomial(p), modulus)
    }

    pub fn new(quotient: Quotient, modulus: Option<i64>) -> Result<Self> {
        if quotient.degree() < 2 {
            return Err(Error::InvalidParams(format!(
                "ring degree must be at least 2, got {}",
                quotient.degree()
            )));
        }
        if let Some(m) = modulus {
            if m < 2 {
                return Err(Error::InvalidParams(format!("modulus {m} < 2")));
            }
        }
        Ok(Self { quotient, modulus })
    }

    pub fn quotient(&self) -> Quotient {
        self.quotient
    }

    pub fn degree(&self) -> usize {
        self.quotient.degree()
    }

    pub fn modulus(&self) -> Option<i64> {
        self.modulus
    }

    /// Same quotient, different coefficient modulus.
    pub fn with_modulus(&self, modulus: Option<i64>) -> Result<Self> {
        Self::new(self.quotient, modulus)
    }

    pub fn is_cyclic(&self) -> bool {
        matches!(self.quotient, Quotient::Cyclic(_))
    }

    fn check(&self, other: &RingContext) -> Result<()> {
        if self != other {
            return Err(Error::ContextMismatch {
                left: self.to_string(),
                right: other.to_string(),
            });
        }
        Ok(())
    }

    #[inline]
    fn normalize(&self, c: i64) -> i64 {
        match self.modulus {
            Some(m) => c.rem_euclid(m),
            None => c,
        }
    }
}

impl fmt::Display for RingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match self.quotient {
            Quotient::Cyclic(n) => format!("[x]/(x^{n}-1)"),
            Quotient::Trinomial(p) => format!("[x]/(x^{p}-x-1)"),
        };
        match self.modulus {
            Some(m) => write!(f, "Z_{m}{base}"),
            None => write!(f, "Z{base}"),
        }
    }
}

/// An element of a [`RingContext`]; `coeffs[i]` is the coefficient of `x^i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<i64>,
    ctx: RingContext,
}

impl Poly {
    pub fn zero(ctx: RingContext) -> Self {
        Self {
            coeffs: vec![0; ctx.degree()],
            ctx,
        }
    }

    pub fn one(ctx: RingContext) -> Self {
        Self::monomial(ctx, 0, 1)
    }

    /// `c * x^e`, with `e` taken below the ring degree.
    pub fn monomial(ctx: RingContext, e: usize, c: i64) -> Self {
        let mut p = Self::zero(ctx);
        p.coeffs[e % ctx.degree()] = ctx.normalize(c);
        p
    }

    /// Builds an element from exactly `deg D` coefficients, reducing them
    /// into the canonical range of the context modulus.
    pub fn from_coeffs(ctx: RingContext, coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.len() != ctx.degree() {
            return Err(Error::LengthMismatch {
                expected: ctx.degree(),
                got: coeffs.len(),
            });
        }
        let coeffs = coeffs.into_iter().map(|c| ctx.normalize(c)).collect();
        Ok(Self { coeffs, ctx })
    }

    pub fn context(&self) -> &RingContext {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<i64> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Highest index with a nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|&c| c != 0)
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.ctx.check(&other.ctx)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.ctx.check(&other.ctx)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub fn neg(&self) -> Poly {
        self.map(|c| -c)
    }

    pub fn scale(&self, k: i64) -> Poly {
        self.map(|c| c * k)
    }

    /// Product in the ring: schoolbook multiplication followed by reduction
    /// modulo `D` (`x^n = 1`, or `x^p = x + 1`) and the context modulus.
    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.ctx.check(&other.ctx)?;
        let n = self.ctx.degree();
        let mut wide = vec![0i64; 2 * n - 1];
        // Sparse operands (ternary secrets) are the common case.
        let (a, b) = if nonzero_count(&self.coeffs) <= nonzero_count(&other.coeffs) {
            (&self.coeffs, &other.coeffs)
        } else {
            (&other.coeffs, &self.coeffs)
        };
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (w, &bj) in wide[i..i + n].iter_mut().zip(b) {
                *w += ai * bj;
            }
        }
        let coeffs = reduce_wide(self.ctx.quotient, wide);
        Ok(Self::from_coeffs(self.ctx, coeffs).expect("reduction preserves length"))
    }

    /// Symmetric representatives modulo `m`: `[-m/2, m/2)` for even `m`,
    /// `[-(m-1)/2, (m-1)/2]` for odd `m`. The result lives in the same
    /// quotient ring without a modulus.
    pub fn centerlift(&self, m: i64) -> Poly {
        let ctx = RingContext {
            quotient: self.ctx.quotient,
            modulus: None,
        };
        Poly {
            coeffs: self.coeffs.iter().map(|&c| center(c, m)).collect(),
            ctx,
        }
    }

    /// Centered coefficients using the context's own modulus (identity for
    /// rings over `Z`).
    pub fn centered(&self) -> Poly {
        match self.ctx.modulus {
            Some(m) => self.centerlift(m),
            None => self.clone(),
        }
    }

    /// Reinterprets the coefficients in the same quotient with a new modulus.
    /// Moving to `None` keeps the stored representatives as they are.
    pub fn with_modulus(&self, modulus: Option<i64>) -> Result<Poly> {
        let ctx = self.ctx.with_modulus(modulus)?;
        Poly::from_coeffs(ctx, self.coeffs.clone())
    }

    /// Value at `x = 1`, reduced by the context modulus.
    pub fn eval_at_one(&self) -> i64 {
        self.ctx.normalize(self.coeffs.iter().sum())
    }

    /// Reduction modulo `Phi_n = 1 + x + .. + x^(n-1)` in a cyclic ring; the
    /// result has degree at most `n - 2`.
    pub fn reduce_phi_n(&self) -> Result<Poly> {
        if !self.ctx.is_cyclic() {
            return Err(Error::WrongRing("cyclic ring x^n - 1"));
        }
        let n = self.ctx.degree();
        let top = self.coeffs[n - 1];
        let mut coeffs: Vec<i64> = self.coeffs.iter().map(|&c| c - top).collect();
        coeffs[n - 1] = 0;
        Poly::from_coeffs(self.ctx, coeffs)
    }

    /// Inverse in the context ring. Cyclic rings invert modulo
    /// `(m, Phi_n)`, trinomial rings modulo `(m, x^p - x - 1)`; the result of
    /// a cyclic inversion is reduced to degree at most `n - 2`. Supported
    /// moduli are primes and powers of two.
    pub fn inverse(&self) -> Result<Poly> {
        inverse::invert(self)
    }

    pub fn is_ternary(&self) -> bool {
        self.centered().coeffs.iter().all(|c| (-1..=1).contains(c))
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self) -> usize {
        nonzero_count(&self.coeffs)
    }

    /// Squared Euclidean norm of the centered coefficient vector.
    pub fn norm_sq(&self) -> i64 {
        self.centered().coeffs.iter().map(|c| c * c).sum()
    }

    fn map(&self, f: impl Fn(i64) -> i64) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|&c| self.ctx.normalize(f(c))).collect(),
            ctx: self.ctx,
        }
    }

    fn zip_with(&self, other: &Poly, f: impl Fn(i64, i64) -> i64) -> Poly {
        Poly {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| self.ctx.normalize(f(a, b)))
                .collect(),
            ctx: self.ctx,
        }
    }
}

/// Symmetric representative of `c` modulo `m`.
#[inline]
pub fn center(c: i64, m: i64) -> i64 {
    let r = c.rem_euclid(m);
    // even m: [-m/2, m/2); odd m: [-(m-1)/2, (m-1)/2]
    if r >= (m + 1) / 2 {
        r - m
    } else {
        r
    }
}

fn nonzero_count(c: &[i64]) -> usize {
    c.iter().filter(|&&x| x != 0).count()
}

/// Folds a product of length `2n - 1` back to `n` coefficients.
fn reduce_wide(quotient: Quotient, mut wide: Vec<i64>) -> Vec<i64> {
    match quotient {
        Quotient::Cyclic(n) => {
            let (low, high) = wide.split_at_mut(n);
            for (l, h) in low.iter_mut().zip(high.iter()) {
                *l += h;
            }
            wide.truncate(n);
            wide
        }
        Quotient::Trinomial(p) => {
            // x^(p+j) = x^(j+1) + x^j
            for e in (p..wide.len()).rev() {
                let c = std::mem::take(&mut wide[e]);
                wide[e - p + 1] += c;
                wide[e - p] += c;
            }
            wide.truncate(p);
            wide
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    fn z3_cubic() -> RingContext {
        RingContext::cyclic(3, Some(3)).unwrap()
    }

    #[test]
    fn identity_multiplication() {
        let ctx = RingContext::cyclic(7, Some(2048)).unwrap();
        let b = Poly::from_coeffs(ctx, vec![5, -1, 2047, 0, 9, 1000, 3]).unwrap();
        assert_eq!(Poly::one(ctx).mul(&b).unwrap(), b);
    }

    #[test]
    fn hand_product_in_z3_cubic() {
        // (x + 1)(x^2 + 1) = x^3 + x^2 + x + 1 -> x^2 + x + 2
        let ctx = z3_cubic();
        let a = Poly::from_coeffs(ctx, vec![1, 1, 0]).unwrap();
        let b = Poly::from_coeffs(ctx, vec![1, 0, 1]).unwrap();
        assert_eq!(a.mul(&b).unwrap().coeffs(), &[2, 1, 1]);
    }

    #[test]
    fn trinomial_wraparound() {
        let p = 11;
        let ctx = RingContext::trinomial(p, Some(4591)).unwrap();
        let top = Poly::monomial(ctx, p - 1, 1);
        let x = Poly::monomial(ctx, 1, 1);
        let mut expect = vec![0; p];
        expect[0] = 1;
        expect[1] = 1;
        assert_eq!(top.mul(&x).unwrap().coeffs(), &expect[..]);
    }

    #[test]
    fn trinomial_high_powers() {
        // x^(p-1) * x^(p-1) = x^(2p-2) = x^(p-1) + x^(p-2) for p >= 3
        let p = 7;
        let ctx = RingContext::trinomial(p, None).unwrap();
        let top = Poly::monomial(ctx, p - 1, 1);
        let sq = top.mul(&top).unwrap();
        assert_eq!(sq.coeffs(), &[0, 0, 0, 0, 0, 1, 1]);
    }

    #[test]
    fn mismatched_contexts_are_rejected() {
        let a = Poly::one(RingContext::cyclic(5, Some(3)).unwrap());
        let b = Poly::one(RingContext::cyclic(5, Some(7)).unwrap());
        assert!(matches!(a.mul(&b), Err(Error::ContextMismatch { .. })));
        assert!(a.add(&b).is_err());
        let c = Poly::one(RingContext::trinomial(5, Some(3)).unwrap());
        assert!(a.sub(&c).is_err());
    }

    #[test]
    fn length_is_checked() {
        let ctx = RingContext::cyclic(5, None).unwrap();
        assert!(matches!(
            Poly::from_coeffs(ctx, vec![1, 2]),
            Err(Error::LengthMismatch { expected: 5, got: 2 })
        ));
    }

    #[test]
    fn centerlift_ranges() {
        assert_eq!(center(0, 2048), 0);
        assert_eq!(center(2047, 2048), -1);
        assert_eq!(center(1024, 2048), -1024);
        assert_eq!(center(1023, 2048), 1023);
        assert_eq!(center(2, 3), -1);
        assert_eq!(center(2310, 4621), 2310);
        assert_eq!(center(2311, 4621), -2310);
    }

    #[test]
    fn reduce_phi_n_drops_top_coefficient() {
        let ctx = RingContext::cyclic(5, Some(7)).unwrap();
        let a = Poly::from_coeffs(ctx, vec![1, 2, 3, 4, 5]).unwrap();
        let r = a.reduce_phi_n().unwrap();
        assert_eq!(r.coeffs(), &[3, 4, 5, 6, 0]);
        // a - r is a multiple of Phi_5 = 1 + x + .. + x^4
        let diff = a.sub(&r).unwrap();
        assert!(diff.coeffs().iter().all(|&c| c == diff.coeffs()[0]));
    }

    #[test]
    fn modular_mul_matches_integer_mul() {
        let mut rng = crate::seed::rng(3);
        let zctx = RingContext::trinomial(31, None).unwrap();
        let qctx = zctx.with_modulus(Some(4621)).unwrap();
        let a: Vec<i64> = (0..31).map(|_| rng.gen_range(-3000..3000)).collect();
        let b: Vec<i64> = (0..31).map(|_| rng.gen_range(-3000..3000)).collect();
        let exact = Poly::from_coeffs(zctx, a.clone())
            .unwrap()
            .mul(&Poly::from_coeffs(zctx, b.clone()).unwrap())
            .unwrap();
        let modular = Poly::from_coeffs(qctx, a)
            .unwrap()
            .mul(&Poly::from_coeffs(qctx, b).unwrap())
            .unwrap();
        assert_eq!(exact.with_modulus(Some(4621)).unwrap(), modular);
    }

    fn poly_strategy(ctx: RingContext) -> impl Strategy<Value = Poly> {
        let m = ctx.modulus().unwrap_or(1000);
        proptest::collection::vec(0..m, ctx.degree())
            .prop_map(move |c| Poly::from_coeffs(ctx, c).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn mul_commutes_and_distributes(
            (a, b, c) in (
                poly_strategy(RingContext::cyclic(13, Some(2048)).unwrap()),
                poly_strategy(RingContext::cyclic(13, Some(2048)).unwrap()),
                poly_strategy(RingContext::cyclic(13, Some(2048)).unwrap()),
            )
        ) {
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
            let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn trinomial_mul_commutes_and_distributes(
            (a, b, c) in (
                poly_strategy(RingContext::trinomial(17, Some(4591)).unwrap()),
                poly_strategy(RingContext::trinomial(17, Some(4591)).unwrap()),
                poly_strategy(RingContext::trinomial(17, Some(4591)).unwrap()),
            )
        ) {
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
            let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn centerlift_is_a_section(c in -100_000i64..100_000, m in 2i64..6000) {
            let x = center(c, m);
            prop_assert_eq!(x.rem_euclid(m), c.rem_euclid(m));
            if m % 2 == 0 {
                prop_assert!(-m / 2 <= x && x < m / 2);
            } else {
                prop_assert!(x.abs() <= (m - 1) / 2);
            }
        }
    }
}
