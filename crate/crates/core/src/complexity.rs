//! Operation counts for one CART-ELC split search.
//!
//! Finding and executing a split costs `C(n, r) * C(m, r) * r * (r^2 + n)`
//! operations with unit constants: every sample combination times every
//! feature combination, each paying `r^3` to fit the plane and `r * n` to
//! evaluate it.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Sample counts of the published grid.
pub const TABLE1_N: [u64; 6] = [100, 500, 1000, 5000, 10000, 20000];
/// Hyperplane orders of the published grid.
pub const TABLE1_R: [u64; 10] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10];

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        // acc = C(n, i) here, so the division is exact
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n, r) * C(m, r) * r * (r^2 + n)`.
pub fn op_count(n: u64, m: u64, r: u64) -> Result<BigUint> {
    if r < 1 || r > n.min(m) {
        return Err(Error::domain(alloc::format!(
            "need 1 <= r <= min(n, m), got n = {n}, m = {m}, r = {r}"
        )));
    }
    let tail = BigUint::from(r) * (BigUint::from(r) * r + n);
    Ok(binomial(n, r) * binomial(m, r) * tail)
}

/// One cell of [`table1`].
#[derive(Debug, Clone, PartialEq)]
pub struct Table1Cell {
    /// Hyperplane order, also the feature count.
    pub r: u64,
    /// Sample count.
    pub n: u64,
    /// The count, or the domain error when `r > n`.
    pub count: Result<BigUint>,
}

/// [`op_count`] with `m = r` for every `(r, n)`, rows by `r` then columns by `n`.
pub fn table1(n_values: &[u64], r_values: &[u64]) -> Vec<Vec<Table1Cell>> {
    r_values
        .iter()
        .map(|&r| {
            n_values
                .iter()
                .map(|&n| Table1Cell {
                    r,
                    n,
                    count: op_count(n, r, r),
                })
                .collect()
        })
        .collect()
}

/// Scientific notation with three significant digits (`1.01e+04`), rounded
/// half to even on the exact decimal expansion.
pub fn format_sci3(value: &BigUint) -> String {
    let digits = value.to_str_radix(10);
    if digits == "0" {
        return String::from("0.00e+00");
    }
    let mut exponent = digits.len() - 1;
    let bytes = digits.as_bytes();
    let mut lead: u32 = bytes[..digits.len().min(3)]
        .iter()
        .fold(0, |acc, b| acc * 10 + u32::from(b - b'0'));
    for _ in digits.len()..3 {
        lead *= 10;
    }
    let tail = bytes.get(3..).unwrap_or_default();
    let round_up = match tail.first() {
        Some(&d) if d > b'5' => true,
        Some(&b'5') => tail[1..].iter().any(|&d| d != b'0') || lead % 2 == 1,
        _ => false,
    };
    if round_up {
        lead += 1;
        if lead == 1000 {
            lead = 100;
            exponent += 1;
        }
    }
    alloc::format!("{}.{:02}e+{:02}", lead / 100, lead % 100, exponent)
}
