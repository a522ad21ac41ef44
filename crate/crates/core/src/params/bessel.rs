//! Bessel functions of the first kind, orders 0 and 1.

use crate::{Error, Result};

/// Largest |x| accepted by [`bessel_j`].
pub const MAX_ARGUMENT: f64 = 30.0;

/// Below this |x| the ascending series is used; above it Miller's backward
/// recurrence.
const SERIES_LIMIT: f64 = 12.0;

/// `J_order(x)` for `order ∈ {0, 1}` and `|x| ≤ 30`, absolute error below
/// 1e-12.
pub fn bessel_j(order: i32, x: f64) -> Result<f64> {
    if order != 0 && order != 1 {
        return Err(Error::InvalidArgument(format!(
            "Bessel order {order} not supported (only 0 and 1)"
        )));
    }
    if !x.is_finite() || x.abs() > MAX_ARGUMENT {
        return Err(Error::Domain(format!(
            "Bessel argument {x} outside |x| <= {MAX_ARGUMENT}"
        )));
    }
    let ax = x.abs();
    let value = if ax < SERIES_LIMIT {
        series(order as u32, ax)
    } else {
        let (j0, j1) = miller(ax);
        if order == 0 {
            j0
        } else {
            j1
        }
    };
    // J0 is even, J1 is odd.
    Ok(if order == 1 && x < 0.0 { -value } else { value })
}

/// Ascending series Σ (−1)^k (x/2)^{2k+n} / (k! (k+n)!).
fn series(order: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = half * half;
    let mut term = if order == 0 { 1.0 } else { half };
    let mut sum = term;
    for k in 1..200u32 {
        term *= -q / (k as f64 * (k + order) as f64);
        sum += term;
        if k as f64 > half && term.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// Backward recurrence J_{k−1} = (2k/x) J_k − J_{k+1}, normalized with
/// J_0 + 2 Σ J_{2k} = 1. Returns (J_0, J_1).
fn miller(x: f64) -> (f64, f64) {
    let mut start = (x as usize) + 60;
    if start % 2 == 1 {
        start += 1;
    }
    let mut above = 0.0_f64;
    let mut current = 1e-300_f64;
    let mut norm = 0.0_f64;
    let mut j1 = 0.0_f64;
    for k in (1..=start).rev() {
        let below = 2.0 * k as f64 / x * current - above;
        above = current;
        current = below;
        // `current` now holds J_{k-1}.
        if k - 1 == 1 {
            j1 = current;
        }
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            norm += 2.0 * current;
        }
        if current.abs() > 1e250 {
            current *= 1e-250;
            above *= 1e-250;
            norm *= 1e-250;
            j1 *= 1e-250;
        }
    }
    norm += current;
    (current / norm, j1 / norm)
}
