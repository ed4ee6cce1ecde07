//! Exhaustive closest-vector search for small dimensions (test oracle).
//!
//! Coefficients are enumerated depth-first over the Gram-Schmidt levels
//! (Fincke-Pohst), so only the part of the coefficient box that can still
//! beat the best point found so far is visited. Pruning uses floating point
//! with a relative slack; every candidate that survives is scored in exact
//! integer arithmetic, so the reported minimum is exact.

use super::babai::Babai;
use crate::error::{Error, Result};

pub const MAX_BRUTE_DIM: usize = 12;

const SLACK: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteForce {
    pub point: Vec<i64>,
    pub coeffs: Vec<i64>,
    pub dist_sq: i64,
}

/// Global closest point to `y` in the lattice spanned by `rows`.
pub fn cvp_bruteforce(rows: &[Vec<i64>], y: &[i64]) -> Result<BruteForce> {
    if rows.len() > MAX_BRUTE_DIM {
        return Err(Error::SearchTooLarge(format!(
            "dimension {} exceeds {MAX_BRUTE_DIM}",
            rows.len()
        )));
    }
    if rows.is_empty() {
        return Ok(BruteForce {
            point: vec![0; y.len()],
            coeffs: Vec::new(),
            dist_sq: y.iter().map(|x| x * x).sum(),
        });
    }
    let babai = Babai::new(rows.to_vec())?;
    let (start, start_coeffs) = babai.solve(y)?;
    let mut search = Search {
        rows,
        y,
        babai: &babai,
        mu: mu_matrix(&babai),
        target: Vec::new(),
        coeffs: vec![0; rows.len()],
        best: BruteForce {
            dist_sq: dist_sq(y, &start),
            point: start,
            coeffs: start_coeffs,
        },
    };
    // target coordinates y = sum_i t_i b*_i + (orthogonal part)
    search.target = (0..rows.len())
        .map(|i| {
            let dot: f64 = y.iter().zip(&babai.gs[i]).map(|(&a, b)| a as f64 * b).sum();
            dot / babai.gs_norm_sq[i]
        })
        .collect();
    let perp = {
        let proj: f64 = (0..rows.len())
            .map(|i| search.target[i].powi(2) * babai.gs_norm_sq[i])
            .sum();
        let total: f64 = y.iter().map(|&a| (a as f64).powi(2)).sum();
        (total - proj).max(0.0)
    };
    search.descend(rows.len(), 0.0, perp);
    Ok(search.best)
}

fn dist_sq(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// `mu[j][i] = <b_j, b*_i> / |b*_i|^2` for `i < j`.
fn mu_matrix(b: &Babai) -> Vec<Vec<f64>> {
    let n = b.rows.len();
    (0..n)
        .map(|j| {
            (0..n)
                .map(|i| {
                    if i >= j {
                        return 0.0;
                    }
                    let dot: f64 = b.rows[j]
                        .iter()
                        .zip(&b.gs[i])
                        .map(|(&x, g)| x as f64 * g)
                        .sum();
                    dot / b.gs_norm_sq[i]
                })
                .collect()
        })
        .collect()
}

struct Search<'a> {
    rows: &'a [Vec<i64>],
    y: &'a [i64],
    babai: &'a Babai,
    mu: Vec<Vec<f64>>,
    target: Vec<f64>,
    coeffs: Vec<i64>,
    best: BruteForce,
}

impl Search<'_> {
    fn bound(&self) -> f64 {
        let b = self.best.dist_sq as f64;
        b * (1.0 + SLACK) + SLACK
    }

    /// Fixes `coeffs[level - 1]` given the higher levels; `partial` is the
    /// squared distance contributed by the fixed levels.
    fn descend(&mut self, level: usize, partial: f64, perp: f64) {
        if level == 0 {
            let point: Vec<i64> = (0..self.y.len())
                .map(|c| {
                    self.rows
                        .iter()
                        .zip(&self.coeffs)
                        .map(|(r, &k)| r[c] * k)
                        .sum()
                })
                .collect();
            let d = dist_sq(self.y, &point);
            if d < self.best.dist_sq {
                self.best = BruteForce {
                    point,
                    coeffs: self.coeffs.clone(),
                    dist_sq: d,
                };
            }
            return;
        }
        let i = level - 1;
        // center of the admissible interval for coeffs[i]
        let center = self.target[i]
            - (i + 1..self.rows.len())
                .map(|j| self.mu[j][i] * self.coeffs[j] as f64)
                .sum::<f64>();
        let norm = self.babai.gs_norm_sq[i];
        let room = self.bound() - partial - perp;
        if room < 0.0 {
            return;
        }
        let half = (room / norm).sqrt();
        let lo = (center - half).ceil() as i64;
        let hi = (center + half).floor() as i64;
        for c in lo..=hi {
            let step = (c as f64 - center).powi(2) * norm;
            if partial + perp + step > self.bound() {
                continue;
            }
            self.coeffs[i] = c;
            self.descend(level - 1, partial + step, perp);
        }
        self.coeffs[i] = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_target() {
        let rows = vec![vec![3, 1], vec![1, 4]];
        let r = cvp_bruteforce(&rows, &[0, 0]).unwrap();
        assert_eq!(r.dist_sq, 0);
        assert_eq!(r.point, vec![0, 0]);
    }

    #[test]
    fn one_dimensional_tie() {
        let q = 8;
        let r = cvp_bruteforce(&[vec![q]], &[q / 2]).unwrap();
        assert!(r.point == vec![0] || r.point == vec![q]);
        assert_eq!(r.dist_sq, (q / 2) * (q / 2));
    }

    #[test]
    fn too_large_is_rejected() {
        let rows: Vec<Vec<i64>> = (0..13)
            .map(|i| (0..13).map(|j| i64::from(i == j)).collect())
            .collect();
        assert!(matches!(
            cvp_bruteforce(&rows, &[0; 13]),
            Err(Error::SearchTooLarge(_))
        ));
    }

    fn inverse3(m: &[Vec<i64>]) -> Option<[[f64; 3]; 3]> {
        let a = |i: usize, j: usize| m[i][j] as f64;
        let det = a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
            - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
            + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
        if det.abs() < 0.5 {
            return None;
        }
        let mut inv = [[0.0; 3]; 3];
        for (i, row) in inv.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
                let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
                *x = (a(r0, c0) * a(r1, c1) - a(r0, c1) * a(r1, c0)) / det;
            }
        }
        Some(inv)
    }

    #[test]
    fn agrees_with_guaranteed_box() {
        use rand::Rng;
        let mut rng = crate::seed::rng(12);
        for _ in 0..100 {
            let (rows, inv) = loop {
                let r: Vec<Vec<i64>> = (0..3)
                    .map(|_| (0..3).map(|_| rng.gen_range(-6..=6)).collect())
                    .collect();
                if let Some(inv) = inverse3(&r) {
                    break (r, inv);
                }
            };
            let y: Vec<i64> = (0..3).map(|_| rng.gen_range(-30..=30)).collect();
            let got = cvp_bruteforce(&rows, &y).unwrap();
            // independent oracle: c = xB^-1, so |c_j - c*_j| <= |x - y| |col_j(B^-1)|
            let combo = |c: &[i64]| -> Vec<i64> {
                (0..3).map(|i| (0..3).map(|j| c[j] * rows[j][i]).sum()).collect()
            };
            let star: Vec<f64> = (0..3)
                .map(|j| (0..3).map(|i| y[i] as f64 * inv[i][j]).sum())
                .collect();
            let rounded: Vec<i64> = star.iter().map(|x| x.round() as i64).collect();
            let radius = (dist_sq(&y, &combo(&rounded)) as f64).sqrt();
            let span: Vec<(i64, i64)> = (0..3)
                .map(|j| {
                    let col = (0..3).map(|i| inv[i][j].powi(2)).sum::<f64>().sqrt();
                    let w = radius * col + 1e-6;
                    ((star[j] - w).floor() as i64, (star[j] + w).ceil() as i64)
                })
                .collect();
            let mut best = i64::MAX;
            for a in span[0].0..=span[0].1 {
                for b in span[1].0..=span[1].1 {
                    for c in span[2].0..=span[2].1 {
                        best = best.min(dist_sq(&y, &combo(&[a, b, c])));
                    }
                }
            }
            assert_eq!(got.dist_sq, best);
            assert_eq!(got.point, combo(&got.coeffs));
        }
    }
}
