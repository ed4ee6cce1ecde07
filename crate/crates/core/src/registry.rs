//! Named parameter sets, read from a TOML file.
//!
//! The built-in file is `data/params.toml`; a different file with the same
//! layout can be loaded at run time. Each entry is validated on load:
//! variant invariants, then `(k, P)` (derived via [`max_k`] when absent)
//! must give an obtuse superbasis. Irreducibility of `x^p - x - 1` is an
//! `O(p^3)` check and runs only through [`ParamSet::verify_field`].

use std::path::Path;

use serde::Deserialize;

use crate::attack::{Scheme, Variant};
use crate::error::{Error, Result};
use crate::ntru_hps::HpsParams;
use crate::ntru_prime::PrimeParams;
use crate::vfk::{max_k, VfkLattice};

const BUILTIN: &str = include_str!("../data/params.toml");

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    #[serde(default)]
    set: Vec<RawSet>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSet {
    name: String,
    variant: String,
    n: usize,
    q: i64,
    w: Option<usize>,
    k: Option<i64>,
    shift: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamSet {
    name: String,
    scheme: Option<Scheme>,
    lattice: VfkLattice,
}

impl ParamSet {
    pub fn name(&self) -> &str {
        &self.name
    }

    /// `None` for bare lattices.
    pub fn scheme(&self) -> Option<&Scheme> {
        self.scheme.as_ref()
    }

    pub fn variant(&self) -> Option<Variant> {
        self.scheme.map(|s| s.variant())
    }

    pub fn lattice(&self) -> &VfkLattice {
        &self.lattice
    }

    pub fn n(&self) -> usize {
        self.lattice.n()
    }

    pub fn q(&self) -> i64 {
        self.lattice.q()
    }

    pub fn k(&self) -> i64 {
        self.lattice.k()
    }

    pub fn shift(&self) -> i64 {
        self.lattice.shift()
    }

    /// Full field check for NTRU-Prime sets; a no-op otherwise.
    pub fn verify_field(&self) -> Result<()> {
        match &self.scheme {
            Some(Scheme::Prime(p)) => p.verify_field(),
            _ => Ok(()),
        }
    }

    fn from_raw(raw: RawSet) -> Result<Self> {
        let ctx = |e: Error| Error::Registry(format!("set `{}`: {e}", raw.name));
        let scheme = match raw.variant.as_str() {
            "hps" => Some(Scheme::Hps(HpsParams::new(raw.n, raw.q).map_err(ctx)?)),
            "prime" => {
                let w = raw
                    .w
                    .ok_or_else(|| Error::Registry(format!("set `{}` needs w", raw.name)))?;
                Some(Scheme::Prime(PrimeParams::new(raw.n, raw.q, w).map_err(ctx)?))
            }
            "lattice" => None,
            other => {
                return Err(Error::Registry(format!(
                    "set `{}`: unknown variant `{other}`",
                    raw.name
                )))
            }
        };
        let (k, shift) = match (raw.k, raw.shift) {
            (Some(k), Some(p)) => (k, p),
            (None, None) => max_k(raw.q).map_err(ctx)?,
            (Some(k), None) => (k, crate::vfk::choose_p(k, raw.q)),
            (None, Some(_)) => {
                return Err(Error::Registry(format!(
                    "set `{}`: shift given without k",
                    raw.name
                )))
            }
        };
        let lattice = VfkLattice::build(raw.n, raw.q, k, shift).map_err(ctx)?;
        Ok(Self {
            name: raw.name,
            scheme,
            lattice,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Registry {
    sets: Vec<ParamSet>,
}

impl Registry {
    pub fn builtin() -> Self {
        Self::from_toml_str(BUILTIN).expect("built-in registry is valid")
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Registry(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawFile = toml::from_str(text).map_err(|e| Error::Registry(e.to_string()))?;
        let mut sets: Vec<ParamSet> = Vec::with_capacity(raw.set.len());
        for r in raw.set {
            if sets.iter().any(|s| s.name == r.name) {
                return Err(Error::Registry(format!("duplicate set `{}`", r.name)));
            }
            sets.push(ParamSet::from_raw(r)?);
        }
        Ok(Self { sets })
    }

    pub fn sets(&self) -> &[ParamSet] {
        &self.sets
    }

    pub fn names(&self) -> Vec<&str> {
        self.sets.iter().map(|s| s.name.as_str()).collect()
    }

    pub fn get(&self, name: &str) -> Result<&ParamSet> {
        self.sets
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| Error::UnknownSet {
                name: name.to_string(),
                known: self.names().join(", "),
            })
    }
}
