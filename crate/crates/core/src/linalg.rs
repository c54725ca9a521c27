//! Dense Gaussian elimination over an exact field.

use crate::ring::{mul, Field};

/// Reduced row echelon form. Zero rows are dropped; the returned pivot list
/// gives the leading column of each surviving row.
pub fn rref<F: Field>(mut rows: Vec<Vec<F>>) -> (Vec<Vec<F>>, Vec<usize>) {
    let width = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..width {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].inv();
        for x in rows[r].iter_mut() {
            *x = x.clone() * &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = x.clone() - &mul(&factor, p);
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank<F: Field>(rows: &[Vec<F>]) -> usize {
    rref(rows.to_vec()).0.len()
}

/// All coefficient vectors `c` with `Σ c_i rows_i = 0`, as a basis.
pub fn left_kernel<F: Field>(rows: &[Vec<F>]) -> Vec<Vec<F>> {
    let m = rows.len();
    if m == 0 {
        return Vec::new();
    }
    let width = rows[0].len();
    let augmented: Vec<Vec<F>> = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut v = row.clone();
            v.extend((0..m).map(|j| if i == j { F::one() } else { F::zero() }));
            v
        })
        .collect();
    let (reduced, pivots) = rref(augmented);
    reduced
        .into_iter()
        .zip(pivots)
        .filter(|(_, p)| *p >= width)
        .map(|(row, _)| row[width..].to_vec())
        .collect()
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse<F: Field>(m: &[Vec<F>]) -> Option<Vec<Vec<F>>> {
    let n = m.len();
    let augmented: Vec<Vec<F>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut v = row.clone();
            v.extend((0..n).map(|j| if i == j { F::one() } else { F::zero() }));
            v
        })
        .collect();
    let (reduced, pivots) = rref(augmented);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(reduced.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn determinant<F: Field>(m: &[Vec<F>]) -> F {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = F::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !a[i][col].is_zero()) else {
            return F::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        det = det * &a[col][col];
        let inv = a[col][col].inv();
        for i in col + 1..n {
            if a[i][col].is_zero() {
                continue;
            }
            let factor = a[i][col].clone() * &inv;
            for j in col..n {
                let sub = mul(&factor, &a[col][j]);
                a[i][j] = a[i][j].clone() - &sub;
            }
        }
    }
    det
}

pub fn mat_mul<F: Field>(a: &[Vec<F>], b: &[Vec<F>]) -> Vec<Vec<F>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(F::zero(), |acc, k| acc + &mul(&row[k], &b[k][j])))
                .collect()
        })
        .collect()
}

pub fn transpose<F: Clone>(a: &[Vec<F>]) -> Vec<Vec<F>> {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect()
}
