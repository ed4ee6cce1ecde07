//! Oracle-assisted message recovery.
//!
//! Every variant publishes `c = h*r + m (mod q)` with ternary `m`. For the
//! attack lattice `L_k`, let `b = k*c` and `u = -k*h*r` (both centered mod
//! `q`). Then `k*m = b + u + q*v` for an integer `v`, so `(-m, b + u)` lies
//! in `L_k`. An oracle reveals `E' ~ u` up to `|E'_i - u_i| <= R`, and the
//! target `t = (0, b + E')` sits at squared distance `|m|^2 + |E' - u|^2`
//! from that lattice point. When the exact CVP solution is `(-m, b + u)`
//! the message falls out of the first `N` coordinates, and the nonce and
//! shared key follow from public data.
//!
//! NTRU-Prime encapsulation publishes `ct = Round(h*r) = h*r - m_e`, so the
//! message in the above form is `m = -m_e`. Ground truth is stored with that
//! sign.

use std::fmt;
use std::time::Instant;

use rand::Rng;

use crate::codec::SharedSecret;
use crate::cvp::{cvp_vfk, CvpResult};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::ntru_hps::HpsParams;
use crate::ntru_prime::PrimeParams;
use crate::ring::{center, Poly};
use crate::seed;
use crate::vfk::VfkLattice;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    Hps,
    Prime,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Hps => "hps",
            Variant::Prime => "prime",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    Hps(HpsParams),
    Prime(PrimeParams),
}

impl Scheme {
    pub fn variant(&self) -> Variant {
        match self {
            Scheme::Hps(_) => Variant::Hps,
            Scheme::Prime(_) => Variant::Prime,
        }
    }

    /// Ring degree (`N` or `p`).
    pub fn n(&self) -> usize {
        match self {
            Scheme::Hps(p) => p.n(),
            Scheme::Prime(p) => p.p(),
        }
    }

    pub fn q(&self) -> i64 {
        match self {
            Scheme::Hps(p) => p.q(),
            Scheme::Prime(p) => p.q(),
        }
    }
}

/// Sufficient range for guaranteed success on HPS: with
/// `|m|^2 = q/8 - 2` and `sum delta_i^2 <= N R^2`, the target is within
/// `lambda_1 / 2` of the right lattice point when
/// `R < sqrt((lambda_1^2 / 4 - (q/8 - 2)) / N)`.
pub fn theoretical_r_bound(scheme: &Scheme, lambda1: f64) -> Result<f64> {
    let Scheme::Hps(p) = scheme else {
        return Err(Error::WrongRing(
            "the range bound assumes the fixed HPS message weight q/8 - 2",
        ));
    };
    let m_sq = (p.q() / 8 - 2) as f64;
    Ok(((lambda1 * lambda1 / 4.0 - m_sq) / p.n() as f64).max(0.0).sqrt())
}

#[derive(Clone, Debug)]
struct GroundTruth {
    m: Poly,
    r: Poly,
    key: SharedSecret,
}

/// One key pair and one encapsulation, plus the hidden values the oracle
/// and the verification step need.
#[derive(Clone, Debug)]
pub struct AttackInstance {
    scheme: Scheme,
    lattice: VfkLattice,
    h: Poly,
    /// Ciphertext reduced mod `q`.
    c: Poly,
    /// Ciphertext as transmitted (for NTRU-Prime, integer coefficients).
    ct: Poly,
    h_inv: Poly,
    truth: GroundTruth,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleOutput {
    pub e: Vec<i64>,
    pub range: i64,
    pub seed: u64,
}

/// What [`AttackInstance::recover`] extracted from one oracle output.
#[derive(Clone, Debug)]
pub struct Recovery {
    pub cvp: CvpResult,
    /// `(m, r, K)` when the candidate passed every membership check.
    pub candidate: Option<(Poly, Poly, SharedSecret)>,
}

#[derive(Clone, Debug)]
pub struct AttackRecord {
    pub range: i64,
    pub call_index: usize,
    pub seed: u64,
    pub success: bool,
    pub recovered_m: Option<Poly>,
    pub cvp_distance: f64,
    pub cvp_iterations: usize,
    pub wall_ms: f64,
}

#[derive(Clone, Debug)]
pub struct Sweep {
    /// Largest range with at least one success.
    pub r0: Option<i64>,
    pub records: Vec<AttackRecord>,
}

impl AttackInstance {
    /// Fresh key pair and encapsulation from `seed`.
    pub fn generate(scheme: Scheme, lattice: VfkLattice, seed: u64) -> Result<Self> {
        if lattice.n() != scheme.n() || lattice.q() != scheme.q() {
            return Err(Error::InvalidParams(format!(
                "lattice (N={}, q={}) does not match the scheme (N={}, q={})",
                lattice.n(),
                lattice.q(),
                scheme.n(),
                scheme.q()
            )));
        }
        let mut rng = seed::rng(seed);
        let inst = match scheme {
            Scheme::Hps(p) => {
                let kp = p.keygen(&mut rng)?;
                let enc = kp.public.encap_with_witness(&mut rng)?;
                Self {
                    scheme,
                    lattice,
                    h: kp.public.h().clone(),
                    c: enc.ciphertext.clone(),
                    ct: enc.ciphertext,
                    h_inv: kp.public.h().inverse()?,
                    truth: GroundTruth {
                        m: p.lift3(&enc.m)?,
                        r: enc.r,
                        key: enc.shared_secret,
                    },
                }
            }
            Scheme::Prime(p) => {
                let kp = p.keygen(&mut rng)?;
                let enc = kp.public.encap_with_witness(&mut rng)?;
                Self {
                    scheme,
                    lattice,
                    h: kp.public.h().clone(),
                    c: enc.ciphertext.with_modulus(Some(p.q()))?,
                    ct: enc.ciphertext,
                    h_inv: kp.public.h().inverse()?,
                    truth: GroundTruth {
                        m: enc.m.neg(),
                        r: enc.r,
                        key: enc.shared_secret,
                    },
                }
            }
        };
        inst.check_membership()?;
        Ok(inst)
    }

    pub fn scheme(&self) -> &Scheme {
        &self.scheme
    }

    pub fn lattice(&self) -> &VfkLattice {
        &self.lattice
    }

    pub fn h(&self) -> &Poly {
        &self.h
    }

    pub fn ciphertext(&self) -> &Poly {
        &self.ct
    }

    /// The message in the `c = h*r + m` convention (harness only).
    pub fn true_message(&self) -> &Poly {
        &self.truth.m
    }

    pub fn true_key(&self) -> &SharedSecret {
        &self.truth.key
    }

    fn q(&self) -> i64 {
        self.scheme.q()
    }

    /// `u = centered(-k * h*r mod q)`, the quantity the oracle leaks.
    pub fn u(&self) -> Vec<i64> {
        let q = self.q();
        let k = self.lattice.k();
        let r = self.truth.r.with_modulus(Some(q)).expect("q >= 2");
        let hr = self.h.mul(&r).expect("same ring");
        hr.coeffs().iter().map(|&x| center(-k * x, q)).collect()
    }

    /// `b = centered(k * c mod q)`.
    pub fn b(&self) -> Vec<i64> {
        let (q, k) = (self.q(), self.lattice.k());
        self.c.coeffs().iter().map(|&x| center(k * x, q)).collect()
    }

    /// Checks that `(-m, b + u)` is in `L_k`, i.e. that
    /// `v = (k*m - b - u) / q` is integral.
    fn check_membership(&self) -> Result<()> {
        let (q, k) = (self.q(), self.lattice.k());
        let (b, u) = (self.b(), self.u());
        let m = self.truth.m.coeffs();
        for i in 0..m.len() {
            if (k * m[i] - b[i] - u[i]).rem_euclid(q) != 0 {
                return Err(Error::Consistency(format!(
                    "k*m - b - u is not divisible by q at coefficient {i}"
                )));
            }
        }
        Ok(())
    }

    /// The lattice point `(-m, b + u)` the attack is looking for.
    pub fn expected_point(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self.truth.m.coeffs().iter().map(|x| -x).collect();
        v.extend(self.b().iter().zip(self.u()).map(|(b, u)| b + u));
        v
    }

    /// `E'_i = u_i + delta_i`, `delta_i` uniform on `{-R, .., R}`.
    pub fn oracle(&self, range: i64, seed: u64) -> Result<OracleOutput> {
        if range < 0 {
            return Err(Error::InvalidParams(format!("negative range {range}")));
        }
        let mut rng = seed::rng(seed);
        let e = self
            .u()
            .into_iter()
            .map(|u| u + rng.gen_range(-range..=range))
            .collect();
        Ok(OracleOutput { e, range, seed })
    }

    /// `t = (0, .., 0, b + E')`.
    pub fn build_target(&self, e: &[i64]) -> Result<Vec<i64>> {
        let n = self.lattice.n();
        if e.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: e.len(),
            });
        }
        let mut t = vec![0; n];
        t.extend(self.b().iter().zip(e).map(|(b, e)| b + e));
        Ok(t)
    }

    /// Solves CVP for the oracle output and derives `(m, r, K)` from public
    /// data only. Candidates failing a membership check are dropped.
    pub fn recover(&self, e: &[i64]) -> Result<Recovery> {
        let target = self.build_target(e)?;
        let cvp = cvp_vfk(&self.lattice, &target)?;
        let n = self.lattice.n();
        let coeffs: Vec<i64> = cvp.point[..n].iter().map(|x| -x).collect();
        let candidate = if coeffs.iter().all(|x| (-1..=1).contains(x)) {
            match self.scheme {
                Scheme::Hps(p) => self.finish_hps(&p, coeffs)?,
                Scheme::Prime(p) => self.finish_prime(&p, coeffs)?,
            }
        } else {
            None
        };
        Ok(Recovery { cvp, candidate })
    }

    fn finish_hps(&self, p: &HpsParams, coeffs: Vec<i64>) -> Result<Option<(Poly, Poly, SharedSecret)>> {
        let m = p.lift3(&Poly::from_coeffs(p.ring_z(), coeffs)?)?;
        if !p.message_space().contains(&m) {
            return Ok(None);
        }
        let r = self
            .c
            .sub(&m.with_modulus(Some(p.q()))?)?
            .mul(&self.h_inv)?
            .reduce_phi_n()?
            .centered();
        if !p.nonce_space().contains(&r) {
            return Ok(None);
        }
        let key = p.shared_secret(&r, &m)?;
        Ok(Some((m, r, key)))
    }

    fn finish_prime(&self, p: &PrimeParams, coeffs: Vec<i64>) -> Result<Option<(Poly, Poly, SharedSecret)>> {
        let m = Poly::from_coeffs(p.ring_z(), coeffs)?;
        let r = self
            .c
            .sub(&m.with_modulus(Some(p.q()))?)?
            .mul(&self.h_inv)?
            .centered();
        if !p.short_space().contains(&r) {
            return Ok(None);
        }
        let key = p.shared_secret(&r, &self.ct)?;
        Ok(Some((m, r, key)))
    }

    /// One oracle call followed by recovery and verification against the
    /// ground-truth key.
    pub fn attack_once(&self, range: i64, call_index: usize, seed: u64) -> Result<AttackRecord> {
        let start = Instant::now();
        let oracle = self.oracle(range, seed)?;
        let rec = self.recover(&oracle.e)?;
        let (success, recovered_m) = match rec.candidate {
            Some((m, _, key)) if key == self.truth.key && m == self.truth.m => (true, Some(m)),
            _ => (false, None),
        };
        Ok(AttackRecord {
            range,
            call_index,
            seed,
            success,
            recovered_m,
            cvp_distance: rec.cvp.distance(),
            cvp_iterations: rec.cvp.iterations,
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
        })
    }

    /// `calls` independent oracle calls with seeds `derive(master, i)`.
    pub fn run_attack(
        &self,
        range: i64,
        calls: usize,
        master_seed: u64,
        exec: Execution,
    ) -> Result<Vec<AttackRecord>> {
        if calls == 0 {
            return Err(Error::InvalidParams("calls must be at least 1".into()));
        }
        exec.map(calls, |i| {
            self.attack_once(range, i, seed::derive(master_seed, i as u64))
        })
        .into_iter()
        .collect()
    }

    /// [`AttackInstance::run_attack`] for every `R` in `r_min..=r_max`, with
    /// per-range master seeds `derive(master, R)`. Raw outcomes are reported
    /// without smoothing.
    pub fn sweep_r0(
        &self,
        r_min: i64,
        r_max: i64,
        calls: usize,
        master_seed: u64,
        exec: Execution,
    ) -> Result<Sweep> {
        if r_min < 0 || r_min > r_max {
            return Err(Error::InvalidParams(format!(
                "invalid range interval [{r_min}, {r_max}]"
            )));
        }
        if calls == 0 {
            return Err(Error::InvalidParams("calls must be at least 1".into()));
        }
        let width = (r_max - r_min + 1) as usize;
        let records: Vec<AttackRecord> = exec
            .map(width * calls, |j| {
                let range = r_min + (j / calls) as i64;
                let call = j % calls;
                let s = seed::derive(seed::derive(master_seed, range as u64), call as u64);
                self.attack_once(range, call, s)
            })
            .into_iter()
            .collect::<Result<_>>()?;
        let r0 = records.iter().filter(|r| r.success).map(|r| r.range).max();
        Ok(Sweep { r0, records })
    }
}
