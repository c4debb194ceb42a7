//! Exact integer linear algebra on the root lattice.
//!
//! Matrices act on column vectors; column `j` of a matrix is the image of the
//! `j`-th basis vector. Fixed-width arithmetic is checked and reports
//! [`Error::Overflow`]; [`BigMatrix`] is used where entries grow without bound
//! (powers of hyperbolic elements).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Scalar type for lattice coordinates.
pub type Int = i128;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    n: usize,
    data: Vec<Int>,
}

impl Matrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        Matrix { n, data }
    }

    pub fn from_rows(rows: &[Vec<Int>]) -> Self {
        let n = rows.len();
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect::<Vec<_>>();
        assert_eq!(data.len(), n * n, "matrix must be square");
        Matrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> Int {
        self.data[row * self.n + col]
    }

    pub fn rows(&self) -> Vec<Vec<Int>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, col: usize) -> Vec<Int> {
        (0..self.n).map(|r| self.get(r, col)).collect()
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut data = vec![0; n * n];
        for r in 0..n {
            for c in 0..n {
                data[c * n + r] = self.data[r * n + c];
            }
        }
        Matrix { n, data }
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|r| (0..self.n).all(|c| self.get(r, c) == Int::from(r == c)))
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        let n = self.n;
        debug_assert_eq!(n, other.n);
        let mut data = vec![0; n * n];
        for r in 0..n {
            for c in 0..n {
                let mut acc: Int = 0;
                for k in 0..n {
                    let a = self.data[r * n + k];
                    if a == 0 {
                        continue;
                    }
                    let term = a.checked_mul(other.data[k * n + c]).ok_or(Error::Overflow)?;
                    acc = acc.checked_add(term).ok_or(Error::Overflow)?;
                }
                data[r * n + c] = acc;
            }
        }
        Ok(Matrix { n, data })
    }

    pub fn apply(&self, v: &[Int]) -> Result<Vec<Int>> {
        debug_assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|r| {
                let mut acc: Int = 0;
                for (c, &x) in v.iter().enumerate() {
                    let a = self.data[r * self.n + c];
                    if a == 0 || x == 0 {
                        continue;
                    }
                    acc = acc
                        .checked_add(a.checked_mul(x).ok_or(Error::Overflow)?)
                        .ok_or(Error::Overflow)?;
                }
                Ok(acc)
            })
            .collect()
    }

    pub fn to_big(&self) -> BigMatrix {
        BigMatrix {
            n: self.n,
            data: self.data.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }
}

/// Arbitrary-precision square matrix, used for powers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigMatrix {
    n: usize,
    data: Vec<BigInt>,
}

impl BigMatrix {
    pub fn mul(&self, other: &BigMatrix) -> BigMatrix {
        let n = self.n;
        let mut data = vec![BigInt::zero(); n * n];
        for r in 0..n {
            for k in 0..n {
                let a = &self.data[r * n + k];
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let b = &other.data[k * n + c];
                    if !b.is_zero() {
                        data[r * n + c] += a * b;
                    }
                }
            }
        }
        BigMatrix { n, data }
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|r| {
            (0..self.n).all(|c| {
                let x = &self.data[r * self.n + c];
                if r == c {
                    x.is_one()
                } else {
                    x.is_zero()
                }
            })
        })
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        (0..self.n)
            .map(|r| {
                let mut acc = BigInt::zero();
                for (c, x) in v.iter().enumerate() {
                    let a = &self.data[r * self.n + c];
                    if !a.is_zero() && !x.is_zero() {
                        acc += a * x;
                    }
                }
                acc
            })
            .collect()
    }
}

/// Sign of a sign-coherent lattice vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// `Some(Plus)` if all coordinates are `>= 0` and one is positive, `Some(Minus)`
/// for the mirror case, `None` for zero or mixed-sign vectors.
pub fn coherent_sign(v: &[Int]) -> Option<Sign> {
    let pos = v.iter().any(|&x| x > 0);
    let neg = v.iter().any(|&x| x < 0);
    match (pos, neg) {
        (true, false) => Some(Sign::Plus),
        (false, true) => Some(Sign::Minus),
        _ => None,
    }
}

pub fn coherent_sign_big(v: &[BigInt]) -> Option<Sign> {
    let pos = v.iter().any(|x| x.is_positive());
    let neg = v.iter().any(|x| x.is_negative());
    match (pos, neg) {
        (true, false) => Some(Sign::Plus),
        (false, true) => Some(Sign::Minus),
        _ => None,
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

pub fn totient(mut m: u64) -> u64 {
    let mut result = m;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Largest order of a finite-order element of `GL_n(Z)`: the maximum of
/// `lcm(m_1, ..., m_r)` over multisets with `sum phi(m_i) <= n`.
pub fn max_finite_order(n: usize) -> u64 {
    fn search(start: u64, budget: u64, acc: u64, limit: u64, best: &mut u64) {
        *best = (*best).max(acc);
        for m in start..=limit {
            let phi = totient(m);
            if phi <= budget {
                search(m + 1, budget - phi, lcm(acc, m), limit, best);
            }
        }
    }
    let n = n as u64;
    // phi(m) >= sqrt(m / 2), so larger m never fit the budget.
    let limit = 2 * n * n + 2;
    let mut best = 1;
    search(2, n, 1, limit, &mut best);
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totients() {
        let expected = [1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4];
        for (m, &phi) in (1..=12).zip(expected.iter()) {
            assert_eq!(totient(m), phi, "phi({m})");
        }
    }

    #[test]
    fn max_finite_order_matches_known_sequence() {
        // Landau-type bound for GL_n(Z).
        let expected = [2, 6, 6, 12, 12, 30, 30, 60, 60, 120];
        for (n, &b) in (1..=10).zip(expected.iter()) {
            assert_eq!(max_finite_order(n), b, "B({n})");
        }
    }

    #[test]
    fn checked_overflow_is_reported() {
        let big = Matrix::from_rows(&[vec![Int::MAX, 0], vec![0, 1]]);
        assert_eq!(big.mul(&big), Err(Error::Overflow));
    }

    #[test]
    fn signs() {
        assert_eq!(coherent_sign(&[0, 2, 1]), Some(Sign::Plus));
        assert_eq!(coherent_sign(&[-1, 0]), Some(Sign::Minus));
        assert_eq!(coherent_sign(&[1, -1]), None);
        assert_eq!(coherent_sign(&[0, 0]), None);
    }
}
