//! Exact rank over the rationals.
//!
//! The rank is computed modulo two fixed 31-bit primes. When both agree the
//! common value is returned; otherwise fraction-free (Bareiss) elimination
//! over arbitrary-precision integers decides.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::IntegerMatrix;

pub const RANK_PRIMES: [u64; 2] = [2_147_483_647, 2_147_483_629];

pub fn integer_rank(m: &IntegerMatrix) -> usize {
    let a = rank_mod_prime(m, RANK_PRIMES[0]);
    let b = rank_mod_prime(m, RANK_PRIMES[1]);
    if a == b {
        a
    } else {
        rank_exact(m)
    }
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Rank over `GF(p)` for a prime `p < 2^32`.
pub fn rank_mod_prime(m: &IntegerMatrix, p: u64) -> usize {
    // Eliminate along the shorter side so the loop can stop at full rank.
    let m = if m.shape().0 > m.shape().1 {
        m.transpose()
    } else {
        m.clone()
    };
    let (rows, cols) = m.shape();
    let pi = p as i64;
    let mut a: Vec<u64> = m
        .as_slice()
        .iter()
        .map(|&x| x.rem_euclid(pi) as u64)
        .collect();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&i| a[i * cols + col] != 0) else {
            continue;
        };
        if piv != rank {
            for j in col..cols {
                a.swap(piv * cols + j, rank * cols + j);
            }
        }
        let (head, tail) = a.split_at_mut((rank + 1) * cols);
        let pivot_row = &mut head[rank * cols..];
        let inv = pow_mod(pivot_row[col], p - 2, p);
        for x in &mut pivot_row[col..] {
            *x = *x * inv % p;
        }
        for row in tail.chunks_mut(cols) {
            let f = row[col];
            if f == 0 {
                continue;
            }
            let g = p - f;
            for (x, &y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x = (*x + g * y) % p;
            }
        }
        rank += 1;
    }
    rank
}

/// Fraction-free Gaussian elimination over `BigInt`.
pub fn rank_exact(m: &IntegerMatrix) -> usize {
    let (rows, cols) = m.shape();
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| m.row(i).iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(piv, rank);
        for i in rank + 1..rows {
            for j in col + 1..cols {
                let v = &a[i][j] * &a[rank][col] - &a[i][col] * &a[rank][j];
                a[i][j] = v / &prev;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}
