//! Message-recovery experiments against NTRU-HPS and streamlined NTRU-Prime.
//!
//! Multiplying the encryption equation `c = h*r + m (mod q)` by an integer
//! `k` places the unknown pair `(-m, k*m mod q)` in the lattice generated by
//!
//! ```text
//! [ I  -kI ]
//! [ 0   qI ]
//! ```
//!
//! which, for suitable `k`, admits an obtuse superbasis (it is Voronoi of the
//! first kind). Exact closest-vector search on such lattices reduces to a
//! sequence of minimum cuts, so a good enough hint for `-k*h*r` turns into a
//! recovered message, nonce and shared key.
//!
//! Module map:
//!
//! * [`ring`]: polynomial arithmetic over `Z[x]/(D)`, sampling, inversion.
//! * [`ntru_hps`], [`ntru_prime`]: the two KEMs under attack.
//! * [`vfk`]: the attack lattice, its superbasis and Selling parameters.
//! * [`cvp`]: min-cut CVP, Babai's nearest plane and a brute-force oracle.
//! * [`attack`]: oracle simulation, recovery and range sweeps.
//! * [`registry`]: named parameter sets loaded from a TOML file.
//! * [`exec`]: sequential or rayon-backed execution of independent trials.

pub mod attack;
pub mod codec;
pub mod cvp;
pub mod error;
pub mod exec;
pub mod ntru_hps;
pub mod ntru_prime;
pub mod registry;
pub mod ring;
pub mod seed;
pub mod vfk;

pub use error::{Error, Result};
pub use exec::Execution;
