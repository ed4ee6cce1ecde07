//! Closest-vector solvers.
//!
//! [`cvp_vfk`] is exact on `L_k`. Writing the target as `y = zB` over the
//! superbasis and the current candidate as `uB`, one step looks for the
//! 0/1 vector `t` minimizing
//!
//! ```text
//! |(p - t)B|^2 - |pB|^2 = sum_ij q_ij t_i t_j + sum_i s_i t_i,   p = z - u,
//! s_i = -2 sum_j q_ij p_j
//! ```
//!
//! Because every row of the Selling matrix sums to zero, the quadratic part
//! is the weight of the cut separating `{t = 1}` from `{t = 0}` under edge
//! weights `-q_ij`, and the linear part becomes terminal edges. A minimum
//! cut is therefore a minimizing `t`; when it is empty `u` is optimal.
//!
//! [`babai`] is the nearest-plane baseline and [`cvp_bruteforce`] the
//! enumeration oracle used by the tests.

mod babai;
mod brute;
mod flow;

pub use babai::{babai, Babai};
pub use brute::{cvp_bruteforce, BruteForce, MAX_BRUTE_DIM};
pub use flow::FlowNetwork;

use crate::error::{Error, Result};
use crate::vfk::VfkLattice;

/// Superbasis coordinates `z = num / den` of a point, with `z_0 = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coordinates {
    num: Vec<i64>,
    den: i64,
}

impl Coordinates {
    pub fn num(&self) -> &[i64] {
        &self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn floor(&self) -> Vec<i64> {
        self.num.iter().map(|x| x.div_euclid(self.den)).collect()
    }

    /// `Some(z)` when every coordinate is an integer.
    pub fn integral(&self) -> Option<Vec<i64>> {
        self.num
            .iter()
            .all(|x| x % self.den == 0)
            .then(|| self.floor())
    }
}

/// Solves `y = zB` with `z_0 = 0`. Per coordinate pair the block of `A` is
/// `[[1, -k], [P, q - Pk]]` with determinant `q`, so
/// `z_N+i = (k y_i + y_N+i) / q` and `z_i = y_i - P z_N+i`.
pub fn solve_coordinates(lat: &VfkLattice, y: &[i64]) -> Result<Coordinates> {
    let n = lat.n();
    if y.len() != lat.dim() {
        return Err(Error::DimensionMismatch {
            expected: lat.dim(),
            got: y.len(),
        });
    }
    let (q, k, p) = (lat.q(), lat.k(), lat.shift());
    let mut num = vec![0; lat.superbasis_len()];
    for i in 0..n {
        let hi = k * y[i] + y[n + i];
        num[1 + n + i] = hi;
        num[1 + i] = q * y[i] - p * hi;
    }
    Ok(Coordinates { num, den: q })
}

/// `q * s_i` for `p = z - u`, from the sparse Selling pattern.
pub fn linear_terms(lat: &VfkLattice, z: &Coordinates, u: &[i64]) -> Result<Vec<i64>> {
    let m = lat.superbasis_len();
    if u.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: u.len(),
        });
    }
    let pn: Vec<i64> = z.num.iter().zip(u).map(|(a, b)| a - z.den * b).collect();
    let mut acc: Vec<i64> = (0..m).map(|i| lat.selling(i, i) * pn[i]).collect();
    for (i, j, qij) in lat.selling_edges() {
        acc[i] += qij * pn[j];
        acc[j] += qij * pn[i];
    }
    Ok(acc.into_iter().map(|a| -2 * a).collect())
}

/// The network for one step, scaled by `q` so that every capacity is an
/// integer. Vertex `0` is the source, `1 + i` stands for superbasis index
/// `i` and `2N + 2` is the sink.
pub fn build_flow_network(lat: &VfkLattice, z: &Coordinates, u: &[i64]) -> Result<FlowNetwork> {
    let m = lat.superbasis_len();
    let sink = m + 1;
    let mut net = FlowNetwork::new(m + 2);
    for (i, j, qij) in lat.selling_edges() {
        if qij != 0 {
            net.add_edge(1 + i, 1 + j, -qij * z.den);
        }
    }
    for (i, s) in linear_terms(lat, z, u)?.into_iter().enumerate() {
        if s > 0 {
            net.add_edge(1 + i, sink, s);
        } else if s < 0 {
            net.add_edge(0, 1 + i, -s);
        }
    }
    Ok(net)
}

/// Minimum cut of a network laid out as in [`build_flow_network`]; `t_i` is
/// set for the internal vertices on the source side.
pub fn mincut(net: &mut FlowNetwork) -> Vec<bool> {
    let sink = net.vertex_count() - 1;
    net.max_flow(0, sink);
    let side = net.source_side(0);
    side[1..sink].to_vec()
}

/// `q * (|(p - t)B|^2 - |pB|^2)`, the scaled objective a step minimizes.
pub fn step_objective(lat: &VfkLattice, z: &Coordinates, u: &[i64], t: &[bool]) -> Result<i64> {
    let s = linear_terms(lat, z, u)?;
    let ti = |i: usize| i64::from(t[i]);
    let mut quad: i64 = (0..t.len()).map(|i| lat.selling(i, i) * ti(i)).sum();
    for (i, j, qij) in lat.selling_edges() {
        quad += 2 * qij * ti(i) * ti(j);
    }
    let lin: i64 = s.iter().enumerate().map(|(i, si)| si * ti(i)).sum();
    Ok(z.den * quad + lin)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CvpResult {
    pub point: Vec<i64>,
    /// Superbasis coordinates of `point`.
    pub u: Vec<i64>,
    pub dist_sq: i64,
    /// Min-cut rounds executed, including the final empty cut.
    pub iterations: usize,
    /// Whether an empty cut certified optimality within the round limit.
    pub converged: bool,
}

impl CvpResult {
    pub fn distance(&self) -> f64 {
        (self.dist_sq as f64).sqrt()
    }
}

/// One round of [`cvp_vfk_traced`]: the coordinates before the round, the
/// cut found and the squared distance afterwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CvpStep {
    pub u: Vec<i64>,
    pub t: Vec<bool>,
    pub dist_sq: i64,
}

fn dist_sq(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub fn cvp_vfk(lat: &VfkLattice, y: &[i64]) -> Result<CvpResult> {
    solve(lat, y, None)
}

/// [`cvp_vfk`] that also records every round; the starting squared distance
/// (before any cut) is returned alongside.
pub fn cvp_vfk_traced(lat: &VfkLattice, y: &[i64]) -> Result<(CvpResult, i64, Vec<CvpStep>)> {
    let mut trace = Vec::new();
    let z = solve_coordinates(lat, y)?;
    let start = dist_sq(y, &lat.combine(&z.floor())?);
    let res = solve(lat, y, Some(&mut trace))?;
    Ok((res, start, trace))
}

fn solve(lat: &VfkLattice, y: &[i64], mut trace: Option<&mut Vec<CvpStep>>) -> Result<CvpResult> {
    let z = solve_coordinates(lat, y)?;
    let mut u = z.floor();
    let mut point = lat.combine(&u)?;
    let mut dist = dist_sq(y, &point);
    let mut iterations = 0;
    let mut converged = false;
    for _ in 0..lat.superbasis_len() {
        let mut net = build_flow_network(lat, &z, &u)?;
        let t = mincut(&mut net);
        iterations += 1;
        // all-zero and all-one cuts both move by sum(v_i) = 0
        let done = t.iter().all(|&b| !b) || t.iter().all(|&b| b);
        let before = u.clone();
        if !done {
            for (ui, &ti) in u.iter_mut().zip(&t) {
                *ui += i64::from(ti);
            }
            point = lat.combine(&u)?;
            dist = dist_sq(y, &point);
        }
        if let Some(tr) = trace.as_deref_mut() {
            tr.push(CvpStep {
                u: before,
                t,
                dist_sq: dist,
            });
        }
        if done {
            converged = true;
            break;
        }
    }
    Ok(CvpResult {
        point,
        u,
        dist_sq: dist,
        iterations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    fn toy() -> VfkLattice {
        VfkLattice::build(2, 8, 3, 2).unwrap()
    }

    #[test]
    fn coordinates_of_zero_and_rows() {
        let lat = VfkLattice::with_max_k(4, 64).unwrap();
        let z = solve_coordinates(&lat, &[0; 8]).unwrap();
        assert!(z.num().iter().all(|&x| x == 0));
        for j in 1..=8 {
            let mut e = vec![0; 9];
            e[j] = 1;
            assert_eq!(solve_coordinates(&lat, &lat.row(j)).unwrap().integral(), Some(e));
        }
        assert!(solve_coordinates(&lat, &[0; 7]).is_err());
    }

    proptest! {
        #[test]
        fn coordinates_round_trip(u in proptest::collection::vec(-100i64..100, 10)) {
            let lat = VfkLattice::with_max_k(5, 128).unwrap();
            let mut full = vec![0];
            full.extend(&u);
            let y = lat.combine(&full).unwrap();
            prop_assert_eq!(solve_coordinates(&lat, &y).unwrap().integral(), Some(full));
        }
    }

    #[test]
    fn network_shape() {
        let lat = VfkLattice::with_max_k(6, 256).unwrap();
        let y: Vec<i64> = (0..12).map(|i| 37 * i - 200).collect();
        let z = solve_coordinates(&lat, &y).unwrap();
        let net = build_flow_network(&lat, &z, &z.floor()).unwrap();
        assert_eq!(net.vertex_count(), 2 * 6 + 3);
        assert!(net.edge_count() <= 3 * 6 + 13);
        assert!(net.edge_count() >= 3 * 6);
    }

    #[test]
    fn zero_offset_gives_empty_cut() {
        let lat = toy();
        let y = lat.combine(&[0, 1, -2, 3, 1]).unwrap();
        let z = solve_coordinates(&lat, &y).unwrap();
        assert!(linear_terms(&lat, &z, &z.floor()).unwrap().iter().all(|&s| s == 0));
        let mut net = build_flow_network(&lat, &z, &z.floor()).unwrap();
        assert!(mincut(&mut net).iter().all(|&t| !t));
    }

    #[test]
    fn linear_terms_match_dense() {
        let lat = toy();
        let rows = lat.superbasis_rows();
        let mut rng = crate::seed::rng(8);
        for _ in 0..50 {
            let y: Vec<i64> = (0..4).map(|_| rng.gen_range(-20..=20)).collect();
            let z = solve_coordinates(&lat, &y).unwrap();
            let u = z.floor();
            let s = linear_terms(&lat, &z, &u).unwrap();
            for i in 0..5 {
                let dense: i64 = (0..5)
                    .map(|j| {
                        let qij: i64 = rows[i].iter().zip(&rows[j]).map(|(a, b)| a * b).sum();
                        qij * (z.num()[j] - z.den() * u[j])
                    })
                    .sum();
                assert_eq!(s[i], -2 * dense);
            }
        }
    }

    #[test]
    fn three_vertex_hand_instance() {
        // N = 1: three superbasis vectors, eight assignments.
        let lat = VfkLattice::with_max_k(1, 32).unwrap();
        for y in [[5, -3], [17, 40], [-11, 2], [0, 16]] {
            let z = solve_coordinates(&lat, &y).unwrap();
            let u = z.floor();
            let mut net = build_flow_network(&lat, &z, &u).unwrap();
            let t = mincut(&mut net);
            let got = step_objective(&lat, &z, &u, &t).unwrap();
            let best = (0..8u8)
                .map(|m| {
                    let tt: Vec<bool> = (0..3).map(|i| m >> i & 1 == 1).collect();
                    step_objective(&lat, &z, &u, &tt).unwrap()
                })
                .min()
                .unwrap();
            assert_eq!(got, best, "y = {y:?}");
        }
    }

    #[test]
    fn objective_is_distance_change() {
        let lat = VfkLattice::with_max_k(3, 32).unwrap();
        let y = [3, -7, 12, 40, -9, 1];
        let z = solve_coordinates(&lat, &y).unwrap();
        let u = z.floor();
        let base = dist_sq(&y, &lat.combine(&u).unwrap());
        for m in 0..128u32 {
            let t: Vec<bool> = (0..7).map(|i| m >> i & 1 == 1).collect();
            let moved: Vec<i64> = u.iter().zip(&t).map(|(a, &b)| a + i64::from(b)).collect();
            let d = dist_sq(&y, &lat.combine(&moved).unwrap());
            assert_eq!(step_objective(&lat, &z, &u, &t).unwrap(), lat.q() * (d - base));
        }
    }

    #[test]
    fn lattice_points_are_fixed() {
        let lat = VfkLattice::with_max_k(8, 512).unwrap();
        let mut u = vec![0; 17];
        for (i, c) in u.iter_mut().enumerate() {
            *c = i as i64 * 3 - 20;
        }
        let y = lat.combine(&u).unwrap();
        let res = cvp_vfk(&lat, &y).unwrap();
        assert_eq!(res.point, y);
        assert_eq!(res.dist_sq, 0);
        assert!(res.converged);
    }

    #[test]
    fn matches_bruteforce_on_toy() {
        let lat = toy();
        let rows = lat.basis_rows();
        let mut rng = crate::seed::rng(9);
        for _ in 0..100 {
            let y: Vec<i64> = (0..4).map(|_| rng.gen_range(-20..=20)).collect();
            let res = cvp_vfk(&lat, &y).unwrap();
            let brute = cvp_bruteforce(&rows, &y).unwrap();
            assert_eq!(res.dist_sq, brute.dist_sq, "y = {y:?}");
            assert!(res.converged);
        }
    }

    #[test]
    fn trace_is_monotone() {
        let lat = VfkLattice::with_max_k(40, 2048).unwrap();
        let mut rng = crate::seed::rng(10);
        for _ in 0..20 {
            let y: Vec<i64> = (0..80).map(|_| rng.gen_range(-3000..=3000)).collect();
            let (res, start, trace) = cvp_vfk_traced(&lat, &y).unwrap();
            let mut prev = start;
            for step in &trace {
                assert!(step.dist_sq <= prev);
                prev = step.dist_sq;
            }
            assert_eq!(trace.len(), res.iterations);
            assert!(res.iterations <= lat.superbasis_len());
            assert_eq!(cvp_vfk(&lat, &y).unwrap(), res);
        }
    }
}
