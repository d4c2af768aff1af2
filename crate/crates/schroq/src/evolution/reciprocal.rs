//! Binary-fraction reciprocal expansion.
//!
//! For x = 0.j1 j2 j3 ... (binary) with leading bit j1 = 1, the reciprocal
//! is written as the rapidly converging series
//!
//! ```text
//!   1/x = 1 + sum_{l >= 1} a_l 2^{-l}
//! ```
//!
//! with small *integer* coefficients a_l (not restricted to 0/1).  Matching
//! the coefficient of 2^{-m} in x * (1/x) = 1 = 0.111... bit by bit, without
//! carrying, gives the recursion
//!
//! ```text
//!   j_1 a_{m-1} + j_2 a_{m-2} + ... + j_{m-1} a_1 + j_m = 1,   m = 2, 3, ...
//! ```
//!
//! which determines each a_l from the previous ones since j_1 = 1.  The
//! Coulomb circuit builder evaluates the series truncated at 2^{-6}; on the
//! sixteen-point symmetric mesh this approximates 1/|x_k| to within 1.6%.

use crate::error::{Error, Result};

/// How many series coefficients the circuits use.
pub const TRUNCATION_ORDER: usize = 6;

/// Solves the bit recursion for a_1 ... a_6.
///
/// `bits` holds the binary fraction digits starting with j1; digits past the
/// end of the slice are zero.  The leading digit must be 1 (a caller holding
/// a smaller value shifts it up by a power of two first).
pub fn reciprocal_coefficients(bits: &[u8]) -> Result<[i64; TRUNCATION_ORDER]> {
    if bits.first().copied() != Some(1) {
        return Err(Error::InvalidParameter(
            "reciprocal expansion needs leading bit j1 = 1; shift the value first".into(),
        ));
    }
    for &b in bits {
        if b > 1 {
            return Err(Error::InvalidParameter(format!("{b} is not a bit")));
        }
    }
    let bit = |k: usize| -> i64 {
        // 1-indexed: bit(1) = j1
        bits.get(k - 1).copied().unwrap_or(0) as i64
    };
    let mut a = [0i64; TRUNCATION_ORDER];
    for m in 2..=TRUNCATION_ORDER + 1 {
        // a_{m-1} = 1 - j_m - sum_{k=2}^{m-1} j_k a_{m-k}
        let mut val = 1 - bit(m);
        for k in 2..m {
            val -= bit(k) * a[m - k - 1];
        }
        a[m - 2] = val;
    }
    Ok(a)
}

/// The series truncated at 2^{-6}: 1 + sum_{l<=6} a_l 2^{-l}.
pub fn truncated_reciprocal(bits: &[u8]) -> Result<f64> {
    let a = reciprocal_coefficients(bits)?;
    let mut y = 1.0;
    for (l, &al) in a.iter().enumerate() {
        y += al as f64 / (1u64 << (l + 1)) as f64;
    }
    Ok(y)
}

/// Truncated 1/|x_k| for the s = 4 symmetric mesh, where
/// |x_k| = 0.0 j2 j3 j4 1 (binary) after the sign fold.  The leading zeros
/// are removed by shifting and the shift is undone by the matching power of
/// two, exactly the branch values the Coulomb circuit applies.
pub fn coulomb_branch_value(j2: u8, j3: u8, j4: u8) -> f64 {
    // each arm: 2^shift * truncated_reciprocal(shifted bits)
    if j2 == 1 {
        2.0 * truncated_reciprocal(&[1, j3, j4, 1]).expect("leading bit is 1")
    } else if j3 == 1 {
        4.0 * truncated_reciprocal(&[1, j4, 1]).expect("leading bit is 1")
    } else if j4 == 1 {
        8.0 * truncated_reciprocal(&[1, 1]).expect("leading bit is 1")
    } else {
        16.0 * truncated_reciprocal(&[1]).expect("leading bit is 1")
    }
}
