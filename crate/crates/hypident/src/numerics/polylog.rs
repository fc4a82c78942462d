//! Polylogarithms Li_k on the closed unit disc.
//!
//! Li_k(z) = sum_{n>=1} z^n / n^k. The Taylor series is used for |z| <= 1/2.
//! For 1/2 < |z| <= 1 the raw series loses roughly six digits near the
//! boundary, so we switch to the expansion around z = 1,
//!
//!   Li_n(e^u) = u^{n-1}/(n-1)! (H_{n-1} - ln(-u))
//!             + sum_{j != n-1} zeta(n-j) u^j / j!,
//!
//! which converges for |u| < 2 pi; on the annulus |u| = |ln z| <= 3.22, so
//! about fifty terms give full precision. The zeta(n-j) coefficients at
//! non-positive integers come from Bernoulli numbers via
//! zeta(-m) = -B_{m+1}/(m+1), with B_m/m! computed from the even zeta values
//! to avoid the unstable Bernoulli recurrence.

use super::{KahanSum, NumericsError};
use num_complex::Complex64;
use std::f64::consts::PI;

const MAX_ORDER: u32 = 40;

/// zeta(m) at integer arguments m != 1 (zero at negative even integers).
pub fn zeta(m: i32) -> Result<f64, NumericsError> {
    if m == 1 {
        return Err(NumericsError::Domain("zeta pole at 1".into()));
    }
    if m >= 2 {
        return Ok(zeta_pos(m as u32));
    }
    if m == 0 {
        return Ok(-0.5);
    }
    let k = (-m) as u32; // zeta(-k)
    if k % 2 == 0 {
        Ok(0.0)
    } else {
        // zeta(-k) = -B_{k+1}/(k+1) = -(B_{k+1}/(k+1)!) * k!
        Ok(-bernoulli_over_factorial(k + 1) * factorial(k))
    }
}

/// zeta(m) for m >= 2 by direct series with an Euler-Maclaurin tail.
fn zeta_pos(m: u32) -> f64 {
    if m == 2 {
        return PI * PI / 6.0;
    }
    if m == 3 {
        return super::ZETA3;
    }
    let s = m as f64;
    let n = 40u32;
    let mut acc = KahanSum::new();
    for j in 1..n {
        acc.add((j as f64).powi(-(m as i32)));
    }
    let nf = n as f64;
    // tail: N^{1-s}/(s-1) + N^{-s}/2 + s N^{-s-1}/12 - s(s+1)(s+2) N^{-s-3}/720
    acc.add(nf.powf(1.0 - s) / (s - 1.0));
    acc.add(0.5 * nf.powf(-s));
    acc.add(s * nf.powf(-s - 1.0) / 12.0);
    acc.add(-s * (s + 1.0) * (s + 2.0) * nf.powf(-s - 3.0) / 720.0);
    acc.value()
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// B_m / m!. Odd m >= 3 give zero; even m from the closed form
/// B_{2n} = (-1)^{n+1} 2 (2n)! zeta(2n) / (2 pi)^{2n}.
fn bernoulli_over_factorial(m: u32) -> f64 {
    match m {
        0 => 1.0,
        1 => -0.5,
        _ if m % 2 == 1 => 0.0,
        _ => {
            let n = m / 2;
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            sign * 2.0 * zeta_pos(m) / (2.0 * PI).powi(m as i32)
        }
    }
}

/// zeta(n - j) / j! for the z = 1 expansion, valid for n - j != 1.
fn zeta_coef(n: u32, j: u32) -> f64 {
    let arg = n as i64 - j as i64;
    debug_assert_ne!(arg, 1);
    if arg >= 2 {
        zeta_pos(arg as u32) / factorial(j)
    } else if arg == 0 {
        -0.5 / factorial(j)
    } else {
        let m = (-arg) as u32; // zeta(-m), m >= 1
        if m % 2 == 0 {
            0.0
        } else {
            // -(B_{m+1}/(m+1)!) * m!/j!  with m < j
            let mut ratio = 1.0; // m!/j!
            for i in (m + 1)..=j {
                ratio /= i as f64;
            }
            -bernoulli_over_factorial(m + 1) * ratio
        }
    }
}

/// The polylogarithm Li_k(z) for integer k >= 0 on |z| <= 1.
///
/// Accuracy is ~1e-15 relative for |z| <= 1/2 and better than 1e-12 up to
/// the boundary. For k <= 1 the point z = 1 is a pole/branch point and is
/// rejected; for k >= 2, Li_k(1) = zeta(k).
pub fn polylog(k: u32, z: Complex64) -> Result<Complex64, NumericsError> {
    if z.re.is_nan() || z.im.is_nan() {
        return Err(NumericsError::Domain("polylog: NaN input".into()));
    }
    if k > MAX_ORDER {
        return Err(NumericsError::Domain(format!(
            "polylog: order {k} exceeds supported maximum {MAX_ORDER}"
        )));
    }
    let r = z.norm();
    if r > 1.0 + 1e-12 {
        return Err(NumericsError::Domain(format!(
            "polylog: |z| = {r} outside the closed unit disc"
        )));
    }
    let one = Complex64::new(1.0, 0.0);
    if k <= 1 && (z - one).norm() < 1e-14 {
        return Err(NumericsError::Domain(
            "polylog: z = 1 is singular for k <= 1".into(),
        ));
    }
    match k {
        0 => Ok(z / (one - z)),
        1 => Ok(-(one - z).ln()),
        _ => {
            if r <= 0.5 {
                Ok(taylor_series(k, z))
            } else if (z - one).norm() < 1e-16 {
                Ok(Complex64::new(zeta_pos(k), 0.0))
            } else {
                Ok(log_expansion(k, z))
            }
        }
    }
}

/// Real-argument convenience wrapper.
pub fn polylog_real(k: u32, x: f64) -> Result<f64, NumericsError> {
    Ok(polylog(k, Complex64::new(x, 0.0))?.re)
}

fn taylor_series(k: u32, z: Complex64) -> Complex64 {
    let mut re = KahanSum::new();
    let mut im = KahanSum::new();
    let mut pow = Complex64::new(1.0, 0.0);
    for n in 1..=64u32 {
        pow *= z;
        let term = pow / (n as f64).powi(k as i32);
        re.add(term.re);
        im.add(term.im);
        if pow.norm() < 1e-18 {
            break;
        }
    }
    Complex64::new(re.value(), im.value())
}

fn log_expansion(n: u32, z: Complex64) -> Complex64 {
    let u = z.ln();
    let mut re = KahanSum::new();
    let mut im = KahanSum::new();

    // Singular term u^{n-1}/(n-1)! (H_{n-1} - ln(-u)).
    let h: f64 = (1..n).map(|i| 1.0 / i as f64).sum();
    let sing = u.powu(n - 1) / factorial(n - 1) * (Complex64::new(h, 0.0) - (-u).ln());
    re.add(sing.re);
    im.add(sing.im);

    let mut pow = Complex64::new(1.0, 0.0); // u^j
    let mut small_run = 0;
    for j in 0..=80u32 {
        if j > 0 {
            pow *= u;
        }
        if j as i64 == n as i64 - 1 {
            continue;
        }
        let term = pow * zeta_coef(n, j);
        re.add(term.re);
        im.add(term.im);
        let scale = re.value().abs() + im.value().abs();
        if term.norm() < 1e-17 * scale.max(1e-30) {
            small_run += 1;
            // Coefficients vanish at negative even integers, so demand a
            // streak of small terms before stopping.
            if small_run >= 4 {
                break;
            }
        } else {
            small_run = 0;
        }
    }
    Complex64::new(re.value(), im.value())
}
