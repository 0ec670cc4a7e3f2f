//! Exact Gaussian elimination over any field-like scalar.

use num_rational::BigRational;
use num_traits::{One, Zero};

pub trait FieldOps: Clone {
    fn vanishes(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
}

impl FieldOps for BigRational {
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
}

/// Determinant by fraction-free-free plain elimination. `zero` fixes the field context.
pub fn determinant<T: FieldOps>(mut m: Vec<Vec<T>>, zero: &T) -> T {
    let n = m.len();
    let mut det = zero.one_like();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].vanishes()) else {
            return zero.zero_like();
        };
        if p != col {
            m.swap(p, col);
            det = det.neg();
        }
        let piv = m[col][col].clone();
        det = det.mul(&piv);
        for r in col + 1..n {
            if m[r][col].vanishes() {
                continue;
            }
            let f = m[r][col].div(&piv);
            for c in col..n {
                let t = f.mul(&m[col][c]);
                m[r][c] = m[r][c].sub(&t);
            }
        }
    }
    det
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref<T: FieldOps>(m: &mut [Vec<T>]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].vanishes()) else {
            continue;
        };
        m.swap(p, r);
        let inv = m[r][c].one_like().div(&m[r][c]);
        for k in 0..cols {
            m[r][k] = m[r][k].mul(&inv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].vanishes() {
                let f = m[i][c].clone();
                for k in 0..cols {
                    let t = f.mul(&m[r][k]);
                    m[i][k] = m[i][k].sub(&t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Unique solution of a square system, or None if singular.
pub fn solve<T: FieldOps>(a: Vec<Vec<T>>, b: Vec<T>, zero: &T) -> Option<Vec<T>> {
    let n = a.len();
    let mut aug: Vec<Vec<T>> = a
        .into_iter()
        .zip(b)
        .map(|(mut row, bi)| {
            row.push(bi);
            row
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.len() != n || piv.iter().enumerate().any(|(i, &c)| i != c) {
        return None;
    }
    let _ = zero;
    Some(aug.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

/// Basis of the right kernel of `m` (rows x cols).
pub fn kernel<T: FieldOps>(m: &[Vec<T>], zero: &T) -> Vec<Vec<T>> {
    let mut a = m.to_vec();
    let cols = if a.is_empty() { 0 } else { a[0].len() };
    let piv = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![zero.zero_like(); cols];
            v[f] = zero.one_like();
            for (i, &pc) in piv.iter().enumerate() {
                v[pc] = a[i][f].neg();
            }
            v
        })
        .collect()
}

pub fn int_matrix_to_rat(m: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    m.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect()
}

pub fn int_det(m: &[Vec<i64>]) -> BigRational {
    determinant(int_matrix_to_rat(m), &BigRational::zero())
}

pub fn mat_mul_i64(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![0i64; m]; n];
    for i in 0..n {
        for t in 0..k {
            let x = a[i][t];
            if x == 0 {
                continue;
            }
            for j in 0..m {
                out[i][j] += x * b[t][j];
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn det_of_affine_d4_cartan_vanishes() {
        let m = vec![
            vec![2, 0, 0, 0, 1],
            vec![0, 2, 0, 0, 1],
            vec![0, 0, 2, 0, 1],
            vec![0, 0, 0, 2, 1],
            vec![1, 1, 1, 1, 2],
        ];
        assert!(int_det(&m).is_zero());
        assert_eq!(int_det(&[vec![2, 1], vec![1, 2]]), r(3));
    }

    #[test]
    fn solve_and_kernel() {
        let a = int_matrix_to_rat(&[vec![2, 1], vec![1, 3]]);
        let x = solve(a, vec![r(3), r(4)], &r(0)).unwrap();
        assert_eq!(x, vec![r(1), r(1)]);
        let k = kernel(&int_matrix_to_rat(&[vec![1, 2, 3], vec![2, 4, 6]]), &r(0));
        assert_eq!(k.len(), 2);
    }
}
