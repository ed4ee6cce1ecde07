//! Babai's nearest-plane algorithm.

use crate::error::{Error, Result};

const DEGENERATE: f64 = 1e-9;

/// Precomputed Gram-Schmidt data for a fixed basis.
///
/// The orthogonalization is the classical one, `mu_ji = <b_j, b*_i> / |b*_i|^2`
/// against the original rows. Inner products only visit the nonzero entries
/// of `b_j`, which keeps the sparse rows of `L_k` cheap at `N` in the hundreds.
#[derive(Clone, Debug)]
pub struct Babai {
    pub(super) rows: Vec<Vec<i64>>,
    pub(super) gs: Vec<Vec<f64>>,
    pub(super) gs_norm_sq: Vec<f64>,
}

impl Babai {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: bad.len(),
            });
        }
        let mut gs: Vec<Vec<f64>> = Vec::with_capacity(rows.len());
        let mut gs_norm_sq = Vec::with_capacity(rows.len());
        for (j, row) in rows.iter().enumerate() {
            let support: Vec<(usize, f64)> = row
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(i, &x)| (i, x as f64))
                .collect();
            let mut star: Vec<f64> = row.iter().map(|&x| x as f64).collect();
            for i in 0..j {
                let dot: f64 = support.iter().map(|&(c, x)| x * gs[i][c]).sum();
                if dot == 0.0 {
                    continue;
                }
                let mu = dot / gs_norm_sq[i];
                for (s, g) in star.iter_mut().zip(&gs[i]) {
                    *s -= mu * g;
                }
            }
            let norm: f64 = star.iter().map(|x| x * x).sum();
            if norm < DEGENERATE {
                return Err(Error::DegenerateBasis(j));
            }
            gs.push(star);
            gs_norm_sq.push(norm);
        }
        Ok(Self {
            rows,
            gs,
            gs_norm_sq,
        })
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// The lattice point found for `y`, with its integer coefficients over
    /// the basis. Rounding is `floor(x + 1/2)`.
    pub fn solve(&self, y: &[i64]) -> Result<(Vec<i64>, Vec<i64>)> {
        let dim = self.gs.first().map_or(0, Vec::len);
        if y.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: y.len(),
            });
        }
        let mut b = y.to_vec();
        let mut coeffs = vec![0; self.rows.len()];
        for j in (0..self.rows.len()).rev() {
            let dot: f64 = b.iter().zip(&self.gs[j]).map(|(&x, g)| x as f64 * g).sum();
            let c = (dot / self.gs_norm_sq[j] + 0.5).floor() as i64;
            if c != 0 {
                for (x, r) in b.iter_mut().zip(&self.rows[j]) {
                    *x -= c * r;
                }
            }
            coeffs[j] = c;
        }
        let point = y.iter().zip(&b).map(|(a, r)| a - r).collect();
        Ok((point, coeffs))
    }
}

/// One-shot [`Babai::solve`] returning only the lattice point.
pub fn babai(rows: &[Vec<i64>], y: &[i64]) -> Result<Vec<i64>> {
    Ok(Babai::new(rows.to_vec())?.solve(y)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthogonal_basis_rounds_coordinates() {
        let rows = vec![vec![2, 0], vec![0, 3]];
        assert_eq!(babai(&rows, &[3, 4]).unwrap(), vec![4, 3]);
        assert_eq!(babai(&rows, &[-3, -5]).unwrap(), vec![-2, -6]);
    }

    #[test]
    fn lattice_points_are_fixed() {
        let rows = vec![vec![1, -3, 0], vec![2, 2, 0], vec![1, 1, 5]];
        let b = Babai::new(rows.clone()).unwrap();
        let y: Vec<i64> = (0..3).map(|i| 2 * rows[0][i] - 3 * rows[1][i] + rows[2][i]).collect();
        let (point, coeffs) = b.solve(&y).unwrap();
        assert_eq!(point, y);
        assert_eq!(coeffs, vec![2, -3, 1]);
    }

    #[test]
    fn output_is_the_stated_combination() {
        let rows = vec![vec![7, 1, 0], vec![2, 9, 1], vec![0, 4, 11]];
        let b = Babai::new(rows.clone()).unwrap();
        let (point, c) = b.solve(&[100, -37, 52]).unwrap();
        let combo: Vec<i64> = (0..3).map(|i| (0..3).map(|j| c[j] * rows[j][i]).sum()).collect();
        assert_eq!(point, combo);
    }

    #[test]
    fn dependent_rows_are_rejected() {
        let rows = vec![vec![1, 2], vec![2, 4]];
        assert_eq!(Babai::new(rows).unwrap_err(), Error::DegenerateBasis(1));
    }
}
