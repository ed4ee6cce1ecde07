use rand::seq::SliceRandom;
use rand::Rng;

use super::{Poly, RingContext};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TernaryKind {
    /// Any coefficients in `{-1, 0, 1}`.
    Unrestricted,
    /// Exactly `plus` ones and `minus` minus-ones.
    FixedSigns { plus: usize, minus: usize },
    /// Exactly `weight` nonzero coefficients.
    FixedWeight(usize),
}

/// A ternary sample space: polynomials of degree at most `max_degree` with
/// coefficients in `{-1, 0, 1}`, optionally with prescribed sign counts or
/// Hamming weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TernarySpec {
    max_degree: usize,
    kind: TernaryKind,
}

impl TernarySpec {
    pub fn new(max_degree: usize, kind: TernaryKind) -> Result<Self> {
        let slots = max_degree + 1;
        let needed = match kind {
            TernaryKind::Unrestricted => 0,
            TernaryKind::FixedSigns { plus, minus } => plus + minus,
            TernaryKind::FixedWeight(w) => w,
        };
        if needed > slots {
            return Err(Error::InvalidParams(format!(
                "{needed} nonzero coefficients do not fit degree {max_degree}"
            )));
        }
        Ok(Self { max_degree, kind })
    }

    pub fn unrestricted(max_degree: usize) -> Self {
        Self {
            max_degree,
            kind: TernaryKind::Unrestricted,
        }
    }

    pub fn fixed_signs(max_degree: usize, plus: usize, minus: usize) -> Result<Self> {
        Self::new(max_degree, TernaryKind::FixedSigns { plus, minus })
    }

    pub fn fixed_weight(max_degree: usize, weight: usize) -> Result<Self> {
        Self::new(max_degree, TernaryKind::FixedWeight(weight))
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn kind(&self) -> TernaryKind {
        self.kind
    }

    /// Draws uniformly from the sample space. Fixed-count kinds shuffle a
    /// multiset of the required signs over the `max_degree + 1` slots.
    pub fn sample<R: Rng + ?Sized>(&self, ctx: RingContext, rng: &mut R) -> Result<Poly> {
        if self.max_degree >= ctx.degree() {
            return Err(Error::InvalidParams(format!(
                "sample degree {} exceeds ring degree {}",
                self.max_degree,
                ctx.degree()
            )));
        }
        let slots = self.max_degree + 1;
        let mut head: Vec<i64> = match self.kind {
            TernaryKind::Unrestricted => (0..slots).map(|_| rng.gen_range(-1..=1)).collect(),
            TernaryKind::FixedSigns { plus, minus } => {
                let mut v = vec![0i64; slots];
                v[..plus].fill(1);
                v[plus..plus + minus].fill(-1);
                v.shuffle(rng);
                v
            }
            TernaryKind::FixedWeight(w) => {
                let mut v = vec![0i64; slots];
                for c in v.iter_mut().take(w) {
                    *c = if rng.gen::<bool>() { 1 } else { -1 };
                }
                v.shuffle(rng);
                v
            }
        };
        head.resize(ctx.degree(), 0);
        Poly::from_coeffs(ctx, head)
    }

    /// Membership test on the signed coefficient values; polynomials over a
    /// modulus are centerlifted first.
    pub fn contains(&self, a: &Poly) -> bool {
        let c = a.centered();
        let c = c.coeffs();
        if c.iter().any(|x| !(-1..=1).contains(x)) {
            return false;
        }
        if c.iter().skip(self.max_degree + 1).any(|&x| x != 0) {
            return false;
        }
        match self.kind {
            TernaryKind::Unrestricted => true,
            TernaryKind::FixedSigns { plus, minus } => {
                c.iter().filter(|&&x| x == 1).count() == plus
                    && c.iter().filter(|&&x| x == -1).count() == minus
            }
            TernaryKind::FixedWeight(w) => c.iter().filter(|&&x| x != 0).count() == w,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed;

    #[test]
    fn hps_message_space_counts() {
        let ctx = RingContext::cyclic(509, Some(2048)).unwrap();
        let spec = TernarySpec::fixed_signs(507, 127, 127).unwrap();
        let m = spec.sample(ctx, &mut seed::rng(1)).unwrap();
        let c = m.centered();
        assert_eq!(c.coeffs().iter().filter(|&&x| x == 1).count(), 127);
        assert_eq!(c.coeffs().iter().filter(|&&x| x == -1).count(), 127);
        assert!(m.degree().unwrap() <= 507);
        assert!(spec.contains(&m));
    }

    #[test]
    fn prime_short_weight() {
        let ctx = RingContext::trinomial(653, Some(4621)).unwrap();
        let spec = TernarySpec::fixed_weight(652, 288).unwrap();
        let f = spec.sample(ctx, &mut seed::rng(2)).unwrap();
        assert_eq!(f.weight(), 288);
        assert!(f.is_ternary());
        assert!(spec.contains(&f));
    }

    #[test]
    fn empty_sign_counts_give_zero() {
        let ctx = RingContext::cyclic(11, None).unwrap();
        let spec = TernarySpec::fixed_signs(9, 0, 0).unwrap();
        assert!(spec.sample(ctx, &mut seed::rng(0)).unwrap().is_zero());
    }

    #[test]
    fn membership_edge_cases() {
        let ctx = RingContext::cyclic(7, None).unwrap();
        let zero = Poly::zero(ctx);
        assert!(TernarySpec::unrestricted(5).contains(&zero));
        let two = Poly::from_coeffs(ctx, vec![0, 2, 0, 0, 0, 0, 0]).unwrap();
        assert!(!TernarySpec::unrestricted(6).contains(&two));
        let top = Poly::monomial(ctx, 6, 1);
        assert!(!TernarySpec::unrestricted(5).contains(&top));
        assert!(TernarySpec::unrestricted(6).contains(&top));
        assert!(!TernarySpec::fixed_signs(6, 0, 1).unwrap().contains(&top));
        assert!(TernarySpec::fixed_weight(6, 1).unwrap().contains(&top));
    }

    #[test]
    fn overfull_spec_is_rejected() {
        assert!(TernarySpec::fixed_signs(3, 3, 2).is_err());
        assert!(TernarySpec::fixed_weight(3, 5).is_err());
        assert!(TernarySpec::fixed_weight(3, 4).is_ok());
    }

    #[test]
    fn samples_always_pass_their_own_membership() {
        let ctx = RingContext::trinomial(41, Some(3)).unwrap();
        let specs = [
            TernarySpec::unrestricted(40),
            TernarySpec::fixed_signs(39, 7, 5).unwrap(),
            TernarySpec::fixed_weight(40, 20).unwrap(),
        ];
        let mut rng = seed::rng(9);
        for spec in specs {
            for _ in 0..200 {
                assert!(spec.contains(&spec.sample(ctx, &mut rng).unwrap()));
            }
        }
    }
}
