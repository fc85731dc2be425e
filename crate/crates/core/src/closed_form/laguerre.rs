use crate::scalar::Real;

/// Generalized Laguerre polynomial `L_n^{order}(y)` by the three-term recurrence
/// `L_{k+1} = ((2k + 1 + order - y) L_k - (k + order) L_{k-1}) / (k + 1)`.
pub fn laguerre<T: Real>(n: usize, order: T, y: T) -> T {
    let mut prev = T::one();
    if n == 0 {
        return prev;
    }
    let mut cur = T::one() + order - y;
    for k in 1..n {
        let kf = T::of_usize(k);
        let next = ((T::of(2.0) * kf + T::one() + order - y) * cur - (kf + order) * prev)
            / (kf + T::one());
        prev = cur;
        cur = next;
    }
    cur
}

/// `d/dy L_n^{order}(y) = -L_{n-1}^{order+1}(y)`.
pub fn laguerre_dy<T: Real>(n: usize, order: T, y: T) -> T {
    if n == 0 {
        T::zero()
    } else {
        -laguerre(n - 1, order + T::one(), y)
    }
}

/// `d^2/dy^2 L_n^{order}(y) = L_{n-2}^{order+2}(y)`.
pub fn laguerre_dyy<T: Real>(n: usize, order: T, y: T) -> T {
    if n < 2 {
        T::zero()
    } else {
        laguerre(n - 2, order + T::of(2.0), y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_orders() {
        assert_eq!(laguerre(0, 3.7, 12.0), 1.0);
        assert!((laguerre(1, 0.5_f64, 2.0) - (-0.5)).abs() < 1e-15);
        // L_2^a(y) = ((a+1)(a+2) - 2(a+2) y + y^2) / 2
        let (a, y) = (1.25_f64, 0.75);
        let l2 = ((a + 1.0) * (a + 2.0) - 2.0 * (a + 2.0) * y + y * y) / 2.0;
        assert!((laguerre(2, a, y) - l2).abs() < 1e-14);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let (n, a, y) = (5, 1.5_f64, 2.3);
        let eps = 1e-5;
        let fd = (laguerre(n, a, y + eps) - laguerre(n, a, y - eps)) / (2.0 * eps);
        assert!((laguerre_dy(n, a, y) - fd).abs() < 1e-7);
        let fd2 = (laguerre(n, a, y + eps) - 2.0 * laguerre(n, a, y) + laguerre(n, a, y - eps)) / (eps * eps);
        assert!((laguerre_dyy(n, a, y) - fd2).abs() < 1e-4);
    }
}
