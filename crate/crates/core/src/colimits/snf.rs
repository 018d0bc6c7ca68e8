//! Smith normal form over the integers.
//!
//! Pivoting always takes the smallest nonzero absolute value in the
//! remaining block, scanning rows then columns. Arithmetic runs in `i128`;
//! any intermediate entry leaving the `i64` range is reported as overflow.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    rows: usize,
    cols: usize,
    /// Nonzero diagonal entries, positive, each dividing the next.
    diagonal: Vec<i64>,
    /// Column transform `V` (cols × cols, unimodular) with `U·A·V = D`.
    col_transform: Vec<Vec<i128>>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[i64] {
        &self.diagonal
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<i64> {
        self.diagonal.iter().copied().filter(|&d| d > 1).collect()
    }

    pub fn free_rank(&self) -> usize {
        self.cols - self.rank()
    }

    /// Whether `v` lies in the row lattice of the original matrix.
    ///
    /// With `U·A·V = D`, `v ∈ ℤⁿA` iff `v·V ∈ ℤⁿD`.
    pub fn row_lattice_contains(&self, v: &[i64]) -> Result<bool> {
        if v.len() != self.cols {
            return Err(Error::Contract("vector length does not match column count".into()));
        }
        for j in 0..self.cols {
            let mut x: i128 = 0;
            for (i, &vi) in v.iter().enumerate() {
                x = x
                    .checked_add((vi as i128).checked_mul(self.col_transform[i][j]).ok_or_else(overflow)?)
                    .ok_or_else(overflow)?;
            }
            match self.diagonal.get(j) {
                Some(&d) if x % d as i128 != 0 => return Ok(false),
                None if x != 0 => return Ok(false),
                _ => {}
            }
        }
        Ok(true)
    }
}

fn overflow() -> Error {
    Error::Overflow("Smith normal form entry exceeds 2^63".into())
}

fn check(x: i128) -> Result<i128> {
    if x > i64::MAX as i128 || x < -(i64::MAX as i128) {
        Err(overflow())
    } else {
        Ok(x)
    }
}

pub fn smith_normal_form(matrix: &[Vec<i64>], cols: usize) -> Result<SmithForm> {
    let rows = matrix.len();
    if matrix.iter().any(|r| r.len() != cols) {
        return Err(Error::Contract("ragged integer matrix".into()));
    }
    let mut a: Vec<Vec<i128>> =
        matrix.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut v: Vec<Vec<i128>> =
        (0..cols).map(|i| (0..cols).map(|j| (i == j) as i128).collect()).collect();
    let mut diagonal = Vec::new();

    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero |entry| in the block a[t.., t..]
            let mut best: Option<(usize, usize, i128)> = None;
            for (i, row) in a.iter().enumerate().skip(t) {
                for (j, &x) in row.iter().enumerate().skip(t) {
                    if x != 0 && best.is_none_or(|(_, _, b)| x.abs() < b) {
                        best = Some((i, j, x.abs()));
                    }
                }
            }
            let Some((pi, pj, _)) = best else {
                return finish(rows, cols, diagonal, v);
            };
            a.swap(t, pi);
            if pj != t {
                for row in a.iter_mut() {
                    row.swap(t, pj);
                }
                for row in v.iter_mut() {
                    row.swap(t, pj);
                }
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = a[i][t] / p;
                if q != 0 {
                    for j in t..cols {
                        a[i][j] = check(a[i][j] - q * a[t][j])?;
                    }
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = a[t][j] / p;
                if q != 0 {
                    for row in a.iter_mut() {
                        row[j] = check(row[j] - q * row[t])?;
                    }
                    for row in v.iter_mut() {
                        row[j] = check(row[j] - q * row[t])?;
                    }
                }
                clean &= a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into the pivot row
            let offending = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % p != 0));
            match offending {
                Some(i) => {
                    for j in t..cols {
                        a[t][j] = check(a[t][j] + a[i][j])?;
                    }
                }
                None => break,
            }
        }
        diagonal.push(a[t][t].abs() as i64);
    }
    finish(rows, cols, diagonal, v)
}

fn finish(rows: usize, cols: usize, diagonal: Vec<i64>, v: Vec<Vec<i128>>) -> Result<SmithForm> {
    Ok(SmithForm { rows, cols, diagonal, col_transform: v })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gcd(a: i128, b: i128) -> i128 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }

    /// Fraction-free determinant by cofactor expansion; small inputs only.
    fn det(m: &[Vec<i128>]) -> i128 {
        match m.len() {
            0 => 1,
            1 => m[0][0],
            n => (0..n)
                .map(|j| {
                    let minor: Vec<Vec<i128>> = m[1..]
                        .iter()
                        .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| *x).collect())
                        .collect();
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    sign * m[0][j] * det(&minor)
                })
                .sum(),
        }
    }

    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut with: Vec<Vec<usize>> = subsets(n - 1, k - 1);
        for s in &mut with {
            s.push(n - 1);
        }
        let mut out = subsets(n - 1, k);
        out.extend(with);
        out
    }

    /// Invariant factors via determinantal divisors d_k = D_k / D_{k-1},
    /// where D_k is the gcd of all k×k minors.
    fn oracle(m: &[Vec<i64>], cols: usize) -> Vec<i64> {
        let rows = m.len();
        let mut out = Vec::new();
        let mut prev: i128 = 1;
        for k in 1..=rows.min(cols) {
            let mut g: i128 = 0;
            for rs in subsets(rows, k) {
                for cs in subsets(cols, k) {
                    let sub: Vec<Vec<i128>> =
                        rs.iter().map(|&i| cs.iter().map(|&j| m[i][j] as i128).collect()).collect();
                    g = gcd(g, det(&sub));
                }
            }
            if g == 0 {
                break;
            }
            out.push((g / prev) as i64);
            prev = g;
        }
        out
    }

    #[test]
    fn standard_relator_matrices() {
        // torus commutator, RP^2, Klein bottle abab^-1, wedge (no relators)
        let torus = smith_normal_form(&[vec![0, 0]], 2).unwrap();
        assert_eq!((torus.free_rank(), torus.torsion()), (2, vec![]));
        let rp2 = smith_normal_form(&[vec![2]], 1).unwrap();
        assert_eq!((rp2.free_rank(), rp2.torsion()), (0, vec![2]));
        let klein = smith_normal_form(&[vec![2, 0]], 2).unwrap();
        assert_eq!((klein.free_rank(), klein.torsion()), (1, vec![2]));
        let wedge = smith_normal_form(&[], 2).unwrap();
        assert_eq!((wedge.free_rank(), wedge.torsion()), (2, vec![]));
        assert_eq!(oracle(&[vec![2, 0]], 2), vec![2]);
        assert_eq!(oracle(&[vec![0, 0]], 2), Vec::<i64>::new());
    }

    #[test]
    fn frozen_oracle_values() {
        // values computed with the determinantal-divisor oracle
        let m = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        assert_eq!(oracle(&m, 3), vec![2, 6, 12]);
        assert_eq!(smith_normal_form(&m, 3).unwrap().diagonal(), &[2, 6, 12]);
        let m = vec![vec![6, 4], vec![4, 6]];
        assert_eq!(oracle(&m, 2), vec![2, 10]);
        assert_eq!(smith_normal_form(&m, 2).unwrap().diagonal(), &[2, 10]);
    }

    #[test]
    fn lattice_membership() {
        let s = smith_normal_form(&[vec![2, 0]], 2).unwrap();
        assert!(s.row_lattice_contains(&[4, 0]).unwrap());
        assert!(!s.row_lattice_contains(&[1, 0]).unwrap());
        assert!(!s.row_lattice_contains(&[0, 1]).unwrap());
        let s = smith_normal_form(&[vec![1, 1], vec![1, -1]], 2).unwrap();
        assert!(s.row_lattice_contains(&[2, 0]).unwrap());
        assert!(!s.row_lattice_contains(&[1, 0]).unwrap());
    }

    #[test]
    fn overflow_is_reported() {
        let big = i64::MAX / 2 + 7;
        let m = vec![vec![big, big - 1], vec![big - 1, -big]];
        match smith_normal_form(&m, 2) {
            Ok(s) => assert_eq!(s.rank(), 2),
            Err(e) => assert!(matches!(e, Error::Overflow(_))),
        }
    }

    proptest! {
        #[test]
        fn agrees_with_determinantal_divisors(
            rows in 0usize..4, cols in 1usize..4,
            entries in proptest::collection::vec(-9i64..10, 16)
        ) {
            let m: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| entries[i * 4 + j]).collect()).collect();
            let s = smith_normal_form(&m, cols).unwrap();
            prop_assert_eq!(s.diagonal().to_vec(), oracle(&m, cols));
            for w in s.diagonal().windows(2) {
                prop_assert_eq!(w[1] % w[0], 0);
            }
        }

        #[test]
        fn rows_belong_to_their_lattice(
            rows in 1usize..4, cols in 1usize..4,
            entries in proptest::collection::vec(-9i64..10, 16),
            coeffs in proptest::collection::vec(-3i64..4, 4)
        ) {
            let m: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| entries[i * 4 + j]).collect()).collect();
            let s = smith_normal_form(&m, cols).unwrap();
            let combo: Vec<i64> = (0..cols).map(|j| (0..rows).map(|i| coeffs[i] * m[i][j]).sum()).collect();
            prop_assert!(s.row_lattice_contains(&combo).unwrap());
        }
    }
}
