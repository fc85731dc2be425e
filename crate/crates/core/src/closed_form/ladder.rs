//! Spectral ladders that need nothing beyond field arithmetic. They are
//! generic over [`Num`] so the same code evaluates in `f64` and exactly in
//! rationals (with alpha measured in units of pi).

use num_traits::Num;

use crate::scalar::integer;

/// `p_n = 2n + alpha/pi`.
pub fn momentum_level<F: Num + Copy>(n: i64, alpha_over_pi: F) -> F {
    integer::<F>(2 * n) + alpha_over_pi
}

/// `E_n = (2n + alpha/pi)^2`.
pub fn h_alpha_level<F: Num + Copy>(n: i64, alpha_over_pi: F) -> F {
    let p = momentum_level(n, alpha_over_pi);
    p * p
}

/// Infinite well, `E_n = (n + 1)^2`.
pub fn well_level<F: Num + Copy>(n: u32) -> F {
    let k = integer::<F>(i64::from(n) + 1);
    k * k
}

/// Calogero ladder `E_n = 4n + 2 + root` with `root = (1 + 4 gamma)^{1/2}`.
pub fn calogero_level<F: Num + Copy>(n: u32, root: F) -> F {
    integer::<F>(4 * i64::from(n) + 2) + root
}
