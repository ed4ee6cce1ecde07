//! The attack lattice `L_k` and its obtuse superbasis.
//!
//! `L_k` is generated by the rows of
//!
//! ```text
//! M_k = [ I  -kI ]        A = U_P M_k = [ I   -kI      ]
//!       [ 0   qI ]                      [ PI  (q-Pk)I  ]
//! ```
//!
//! The rows of `A` are `v_1..v_2N`; adding `v_0 = -(v_1 + .. + v_2N)` gives a
//! superbasis. Every `v_j` touches only the coordinate pair `(i, N+i)`, so
//! the Gram matrix of the superbasis (the Selling parameters) has six
//! distinct values and `O(N)` nonzero entries. Nothing here stores it densely.

use crate::cvp::FlowNetwork;
use crate::error::{Error, Result};
use crate::exec::Execution;

/// `P = floor(kq / (k^2 + 1))`.
pub fn choose_p(k: i64, q: i64) -> i64 {
    (k * q).div_euclid(k * k + 1)
}

/// The three off-diagonal Selling values that must be non-positive:
/// `v_i . v_N+i`, `v_0 . v_i` and `v_0 . v_N+i` (for `1 <= i <= N`).
pub fn obtuseness(k: i64, shift: i64, q: i64) -> [i64; 3] {
    let p = shift;
    let cross = (k * p - q) * k + p;
    let r = -((k * p + k - q) * k + p + 1);
    let s = (k * p + k - q) * (q - k * p) - (p + 1) * p;
    [cross, r, s]
}

pub fn is_obtuse(k: i64, shift: i64, q: i64) -> bool {
    obtuseness(k, shift, q).iter().all(|&v| v <= 0)
}

/// Largest `k` such that every `k' <= k` yields an obtuse superbasis with
/// `P = choose_p(k', q)`, together with that `P`.
///
/// Isolated admissible values exist beyond the first failure (for instance
/// `k = q` with `P = 0`); the contiguous run is the one that reproduces the
/// published parameter table.
pub fn max_k(q: i64) -> Result<(i64, i64)> {
    if q < 4 {
        return Err(Error::NoAdmissibleK(q));
    }
    let mut best = None;
    for k in 1..=q + 1 {
        let p = choose_p(k, q);
        if !is_obtuse(k, p, q) {
            break;
        }
        best = Some((k, p));
    }
    best.ok_or(Error::NoAdmissibleK(q))
}

/// `L_k` for fixed `(N, q, k, P)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VfkLattice {
    n: usize,
    q: i64,
    k: i64,
    shift: i64,
}

impl VfkLattice {
    pub fn build(n: usize, q: i64, k: i64, shift: i64) -> Result<Self> {
        if n == 0 || q < 2 || k < 1 || shift < 0 {
            return Err(Error::InvalidParams(format!(
                "lattice needs N >= 1, q >= 2, k >= 1, P >= 0 (got N={n}, q={q}, k={k}, P={shift})"
            )));
        }
        if !is_obtuse(k, shift, q) {
            return Err(Error::NotObtuse { k, shift, q });
        }
        Ok(Self { n, q, k, shift })
    }

    /// `L_k` with `(k, P) = max_k(q)`.
    pub fn with_max_k(n: usize, q: i64) -> Result<Self> {
        let (k, p) = max_k(q)?;
        Self::build(n, q, k, p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// Ambient dimension `2N`.
    pub fn dim(&self) -> usize {
        2 * self.n
    }

    /// Number of superbasis vectors, `2N + 1`.
    pub fn superbasis_len(&self) -> usize {
        2 * self.n + 1
    }

    /// The 2-vector `v_j` restricted to its coordinate pair `(i, N+i)`.
    fn pair(&self, j: usize) -> [i64; 2] {
        let (k, p, q) = (self.k, self.shift, self.q);
        if j == 0 {
            [-1 - p, k * p + k - q]
        } else if j <= self.n {
            [1, -k]
        } else {
            [p, q - p * k]
        }
    }

    /// `q_ij = v_i . v_j` over superbasis indices `0..=2N`.
    pub fn selling(&self, i: usize, j: usize) -> i64 {
        let n = self.n;
        assert!(i <= 2 * n && j <= 2 * n, "superbasis index out of range");
        let dot = |a: [i64; 2], b: [i64; 2]| a[0] * b[0] + a[1] * b[1];
        match (i, j) {
            (0, 0) => n as i64 * dot(self.pair(0), self.pair(0)),
            _ if i == j => dot(self.pair(i), self.pair(i)),
            (0, _) | (_, 0) => dot(self.pair(i), self.pair(j)),
            _ if (i as isize - j as isize).unsigned_abs() == n => {
                dot(self.pair(i), self.pair(j))
            }
            _ => 0,
        }
    }

    /// Nonzero off-diagonal Selling entries as `(i, j, q_ij)` with `i < j`:
    /// the star around `v_0` plus the matching `i <-> N+i`.
    pub fn selling_edges(&self) -> Vec<(usize, usize, i64)> {
        let n = self.n;
        let mut out = Vec::with_capacity(3 * n);
        for j in 1..=2 * n {
            out.push((0, j, self.selling(0, j)));
        }
        for i in 1..=n {
            out.push((i, n + i, self.selling(i, n + i)));
        }
        out
    }

    /// Superbasis row `v_j` as a dense vector of length `2N`.
    pub fn row(&self, j: usize) -> Vec<i64> {
        let mut v = vec![0; self.dim()];
        let [a, b] = self.pair(j);
        if j == 0 {
            v[..self.n].fill(a);
            v[self.n..].fill(b);
        } else {
            let i = (j - 1) % self.n;
            v[i] = a;
            v[self.n + i] = b;
        }
        v
    }

    /// `v_1..v_2N`, the rows of `A`.
    pub fn basis_rows(&self) -> Vec<Vec<i64>> {
        (1..=self.dim()).map(|j| self.row(j)).collect()
    }

    /// `v_0..v_2N`.
    pub fn superbasis_rows(&self) -> Vec<Vec<i64>> {
        (0..self.superbasis_len()).map(|j| self.row(j)).collect()
    }

    /// `sum_j u_j v_j` over the superbasis, `u` of length `2N + 1`.
    pub fn combine(&self, u: &[i64]) -> Result<Vec<i64>> {
        if u.len() != self.superbasis_len() {
            return Err(Error::DimensionMismatch {
                expected: self.superbasis_len(),
                got: u.len(),
            });
        }
        let n = self.n;
        let [a0, b0] = self.pair(0);
        let [a1, b1] = self.pair(1);
        let [a2, b2] = self.pair(n + 1);
        let mut y = vec![0; self.dim()];
        for i in 0..n {
            let (x, w) = (u[1 + i], u[1 + n + i]);
            y[i] = u[0] * a0 + x * a1 + w * a2;
            y[n + i] = u[0] * b0 + x * b1 + w * b2;
        }
        Ok(y)
    }

    /// `lambda_1^2`, the minimum over nonempty proper subsets `I` of
    /// `|sum_{i in I} v_i|^2`. With edge weights `w_ij = -q_ij` that norm is
    /// exactly the weight of the cut `(I, complement)`, so the minimum is a
    /// global min cut: `v_0` is pinned to one side and each other vertex in
    /// turn is forced to the other by an `s-t` max flow.
    pub fn lambda1_sq(&self, exec: Execution) -> i64 {
        let m = self.superbasis_len();
        let mut base = FlowNetwork::new(m);
        for (i, j, qij) in self.selling_edges() {
            if qij < 0 {
                base.add_edge(i, j, -qij);
            }
        }
        exec.map(m - 1, |b| base.clone().max_flow(0, b + 1))
            .into_iter()
            .min()
            .expect("at least two superbasis vectors")
    }

    pub fn lambda1(&self, exec: Execution) -> f64 {
        (self.lambda1_sq(exec) as f64).sqrt()
    }

    /// `sqrt(1 + k^2)`, the length of `v_1`. This is only an upper bound on
    /// the minimum: whenever `1 + k^2` exceeds the plane Hermite bound
    /// `2q / sqrt 3` (all registered sets) the true minimum is shorter.
    pub fn lambda1_closed_form(&self) -> f64 {
        ((1 + self.k * self.k) as f64).sqrt()
    }
}
