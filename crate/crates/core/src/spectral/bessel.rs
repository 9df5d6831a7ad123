//! Bessel functions of integer and half-integer order, which is all the radial
//! transform needs: the order is `n/2 - 1` for integer dimension `n`.

use std::f64::consts::PI;

/// `J_nu(x)` for `nu = twice_order / 2`, `x >= 0`.
pub(crate) fn bessel_j(twice_order: u32, x: f64) -> f64 {
    if twice_order.is_multiple_of(2) {
        libm::jn((twice_order / 2) as i32, x)
    } else {
        let l = (twice_order - 1) / 2;
        if x == 0.0 {
            return 0.0;
        }
        (2.0 * x / PI).sqrt() * spherical_j(l, x)
    }
}

/// Spherical Bessel function `j_l(x)`.
pub(crate) fn spherical_j(l: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if l == 0 { 1.0 } else { 0.0 };
    }
    if x < l as f64 + 2.0 {
        return spherical_j_series(l, x);
    }
    let (s, c) = x.sin_cos();
    let j0 = s / x;
    if l == 0 {
        return j0;
    }
    let mut prev = j0;
    let mut cur = s / (x * x) - c / x;
    for k in 1..l {
        let next = (2 * k + 1) as f64 / x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

fn spherical_j_series(l: u32, x: f64) -> f64 {
    // x^l / (2l+1)!! * sum_k (-x^2/2)^k / (k! (2l+3)(2l+5)...(2l+2k+1))
    let mut lead = 1.0;
    for k in 0..l {
        lead *= x / (2 * k + 3) as f64;
    }
    let half_sq = -0.5 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..80u32 {
        term *= half_sq / ((k + 1) as f64 * (2 * l + 2 * k + 3) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    lead * sum
}

/// `lim_{r->0} r^{-nu} J_nu(k r) = (k/2)^nu / Gamma(nu + 1)`.
pub(crate) fn scaled_bessel_at_origin(twice_order: u32, k: f64) -> f64 {
    let nu = twice_order as f64 / 2.0;
    (k / 2.0).powf(nu) / libm::tgamma(nu + 1.0)
}

/// First `count` positive zeros of `J_nu`, increasing.
pub(crate) fn bessel_zeros(twice_order: u32, count: usize) -> Vec<f64> {
    let nu = twice_order as f64 / 2.0;
    let f = |x: f64| bessel_j(twice_order, x);
    let mut zeros = Vec::with_capacity(count);
    let step = 0.1;
    let mut a = nu + 0.5;
    let mut fa = f(a);
    while zeros.len() < count {
        let b = a + step;
        let fb = f(b);
        if fa == 0.0 {
            zeros.push(a);
        } else if fa * fb < 0.0 {
            zeros.push(bisect(&f, a, b, fa));
        }
        a = b;
        fa = fb;
    }
    zeros
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut flo: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_integer_closed_forms() {
        for &x in &[0.01, 0.3, 1.0, 2.5, 4.0, 7.5, 20.0, 300.0] {
            let (s, c) = f64::sin_cos(x);
            let j0 = s / x;
            let j1 = s / (x * x) - c / x;
            let j2 = (3.0 / (x * x) - 1.0) * s / x - 3.0 * c / (x * x);
            assert!((spherical_j(0, x) - j0).abs() < 1e-14);
            assert!((spherical_j(1, x) - j1).abs() < 1e-12 * (1.0 + j1.abs()), "x={x}");
            let tol = if x < 0.1 { 1e-9 } else { 1e-12 };
            assert!((spherical_j(2, x) - j2).abs() < tol, "x={x}");
        }
    }

    #[test]
    fn series_and_recurrence_agree_at_switch() {
        for l in 0..5u32 {
            let x = l as f64 + 2.0;
            let below = spherical_j_series(l, x);
            let above = spherical_j(l, x + 1e-12);
            assert!((below - above).abs() < 1e-11, "l={l}");
        }
    }

    #[test]
    fn known_zeros() {
        // j_{0,1}, j_{1,1}; half-integer order 1/2 has zeros m*pi
        assert!((bessel_zeros(0, 1)[0] - 2.404_825_557_695_773).abs() < 1e-12);
        assert!((bessel_zeros(2, 1)[0] - 3.831_705_970_207_512).abs() < 1e-12);
        let z = bessel_zeros(1, 50);
        for (m, z) in z.iter().enumerate() {
            assert!((z - (m + 1) as f64 * PI).abs() < 1e-11);
        }
        // order 3/2: tan x = x
        let z = bessel_zeros(3, 3);
        for z in z {
            assert!((z.tan() - z).abs() < 1e-8 * z);
        }
    }

    #[test]
    fn origin_limit_matches_small_argument() {
        for twice in 1..7u32 {
            let nu = twice as f64 / 2.0;
            let k = 1.7;
            let r = 1e-6;
            let direct = bessel_j(twice, k * r) / r.powf(nu);
            let limit = scaled_bessel_at_origin(twice, k);
            assert!((direct - limit).abs() < 1e-8 * limit, "twice={twice}");
        }
    }
}
