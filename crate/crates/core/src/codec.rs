//! Wire format shared by both KEMs: a polynomial is the concatenation of its
//! centered coefficients as signed 16-bit little-endian integers, lowest
//! degree first. Shared secrets are SHA-256 digests over such encodings.

use std::fmt;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::ring::Poly;

pub fn encode(p: &Poly) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(2 * p.coeffs().len());
    for &c in p.centered().coeffs() {
        let v = i16::try_from(c).map_err(|_| Error::EncodeRange(c))?;
        out.extend_from_slice(&v.to_le_bytes());
    }
    Ok(out)
}

/// Inverse of [`encode`] into the integer coefficients it was built from.
pub fn decode(bytes: &[u8]) -> Result<Vec<i64>> {
    if !bytes.len().is_multiple_of(2) {
        return Err(Error::InvalidParams(format!(
            "encoded polynomial has odd length {}",
            bytes.len()
        )));
    }
    Ok(bytes
        .chunks_exact(2)
        .map(|b| i64::from(i16::from_le_bytes([b[0], b[1]])))
        .collect())
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SharedSecret(pub [u8; 32]);

impl SharedSecret {
    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.0
    }
}

impl fmt::Debug for SharedSecret {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SharedSecret(")?;
        for b in &self.0[..4] {
            write!(f, "{b:02x}")?;
        }
        write!(f, "..)")
    }
}

/// SHA-256 over `prefix || encode(p1) || encode(p2) || ..`.
pub fn hash_polys(prefix: &[u8], polys: &[&Poly]) -> Result<SharedSecret> {
    let mut h = Sha256::new();
    h.update(prefix);
    for p in polys {
        h.update(encode(p)?);
    }
    Ok(SharedSecret(h.finalize().into()))
}
