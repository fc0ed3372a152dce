//! Bessel functions of the first kind, orders 0 and 1, on the real axis.
//!
//! Three evaluation paths, chosen by argument:
//! - `x < 12`: ascending power series,
//! - `12 <= x < 25`: Miller backward recurrence normalized by
//!   J0 + 2ΣJ_2k = 1,
//! - `x >= 25`: Hankel large-argument expansion, summed to the smallest term.

use core::f64::consts::{FRAC_PI_4, PI};
use core::sync::atomic::{AtomicU64, Ordering};

use crate::{Error, Result};

/// Below this argument the power series is used.
pub const SERIES_LIMIT: f64 = 12.0;
/// At and above this argument the Hankel expansion is used.
pub const HANKEL_LIMIT: f64 = 25.0;

const EPS: f64 = f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Series,
    Recurrence,
    Asymptotic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselEval {
    pub value: f64,
    pub branch: Branch,
    /// Estimated absolute error.
    pub est_error: f64,
}

pub fn bessel_j0(x: f64) -> Result<BesselEval> {
    check_argument(x)?;
    Ok(eval(0, x))
}

pub fn bessel_j1(x: f64) -> Result<BesselEval> {
    check_argument(x)?;
    Ok(eval(1, x))
}

/// J0 for any finite real argument.
pub fn j0(x: f64) -> f64 {
    eval(0, libm::fabs(x)).value
}

/// J1 for any finite real argument.
pub fn j1(x: f64) -> f64 {
    let v = eval(1, libm::fabs(x)).value;
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// Leading large-argument form of J1, written with an overall minus sign:
/// `-sqrt(2/(πx)) cos(x - 3π/4)`.
///
/// This is −J1(x) to leading order. Only |J1|² enters the cross sections, so
/// the sign is kept as written.
pub fn bessel_j1_asymptotic(x: f64) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::invalid("x", "finite and > 0", x));
    }
    Ok(-libm::sqrt(2.0 / (PI * x)) * libm::cos(x - 3.0 * FRAC_PI_4))
}

fn check_argument(x: f64) -> Result<()> {
    if x.is_finite() && x >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid("x", "finite and >= 0", x))
    }
}

fn eval(order: u32, x: f64) -> BesselEval {
    if x < SERIES_LIMIT {
        series(order, x)
    } else if x < HANKEL_LIMIT {
        recurrence(order, x)
    } else {
        hankel(order, x)
    }
}

fn series(order: u32, x: f64) -> BesselEval {
    let y = 0.25 * x * x;
    let mut term = if order == 0 { 1.0 } else { 0.5 * x };
    let mut sum = term;
    let mut largest = libm::fabs(term);
    let mut k = 1.0;
    while libm::fabs(term) > 1e-18 * largest.max(libm::fabs(sum)) || k < 3.0 {
        term *= -y / (k * (k + f64::from(order)));
        sum += term;
        largest = largest.max(libm::fabs(term));
        k += 1.0;
        if k > 200.0 {
            break;
        }
    }
    BesselEval {
        value: sum,
        branch: Branch::Series,
        est_error: 4.0 * EPS * largest + libm::fabs(term),
    }
}

fn recurrence(order: u32, x: f64) -> BesselEval {
    // Start well above x so the neglected J_{n} are below double precision.
    let mut n = (x + 30.0 + libm::sqrt(40.0 * x)) as u32;
    n += n % 2;
    let two_over_x = 2.0 / x;
    let mut next = 0.0;
    let mut current = 1e-300;
    let mut norm = 0.0;
    let mut j0_raw = 0.0;
    let mut j1_raw = 0.0;
    for k in (1..=n).rev() {
        let prev = f64::from(k) * two_over_x * current - next;
        next = current;
        current = prev;
        if libm::fabs(current) > 1e250 {
            current *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            j1_raw *= 1e-250;
        }
        // current holds J_{k-1}, next holds J_k
        match k - 1 {
            0 => j0_raw = current,
            1 => j1_raw = current,
            m if m % 2 == 0 => norm += 2.0 * current,
            _ => {}
        }
    }
    norm += j0_raw;
    let value = if order == 0 { j0_raw } else { j1_raw } / norm;
    BesselEval {
        value,
        branch: Branch::Recurrence,
        est_error: f64::from(n) * EPS,
    }
}

fn hankel(order: u32, x: f64) -> BesselEval {
    let mu = 4.0 * f64::from(order * order);
    let mut p = 1.0;
    let mut q = 0.0;
    let mut t: f64 = 1.0;
    let mut k = 1u32;
    let mut omitted = 0.0;
    loop {
        let odd = f64::from(2 * k - 1);
        let next = t * (mu - odd * odd) / (f64::from(k) * 8.0 * x);
        if libm::fabs(next) >= libm::fabs(t) && k > 2 {
            omitted = libm::fabs(next);
            break;
        }
        t = next;
        // t_k enters P for even k, Q for odd k, with alternating signs.
        match k % 4 {
            1 => q += t,
            2 => p -= t,
            3 => q -= t,
            _ => p += t,
        }
        if libm::fabs(t) < 1e-18 {
            break;
        }
        k += 1;
        if k > 200 {
            break;
        }
    }
    let phase = if order == 0 {
        FRAC_PI_4
    } else {
        3.0 * FRAC_PI_4
    };
    let (sx, cx) = (libm::sin(x), libm::cos(x));
    let (sp, cp) = (libm::sin(phase), libm::cos(phase));
    let cos_chi = cx * cp + sx * sp;
    let sin_chi = sx * cp - cx * sp;
    let amp = libm::sqrt(2.0 / (PI * x));
    BesselEval {
        value: amp * (p * cos_chi - q * sin_chi),
        branch: Branch::Asymptotic,
        est_error: amp * (omitted + 4.0 * EPS),
    }
}

const MAX_ZERO_INDEX: u32 = 100;

static J1_ZEROS: [AtomicU64; MAX_ZERO_INDEX as usize] =
    [const { AtomicU64::new(0) }; MAX_ZERO_INDEX as usize];

/// k-th positive zero of J1, 1 <= k <= 100.
///
/// Located by bisection on [`j1`] around the McMahon estimate and cached.
/// Concurrent first calls compute the same bits, so the fill is idempotent.
pub fn bessel_j1_zero(k: u32) -> Result<f64> {
    if !(1..=MAX_ZERO_INDEX).contains(&k) {
        return Err(Error::ZeroIndexOutOfRange(k));
    }
    let slot = &J1_ZEROS[(k - 1) as usize];
    let bits = slot.load(Ordering::Acquire);
    if bits != 0 {
        return Ok(f64::from_bits(bits));
    }
    let root = bisect_j1_zero(k);
    slot.store(root.to_bits(), Ordering::Release);
    Ok(root)
}

fn bisect_j1_zero(k: u32) -> f64 {
    let guess = j1_zero_mcmahon(u64::from(k));
    let mut lo = guess - 0.25;
    let mut hi = guess + 0.25;
    let mut f_lo = j1(lo);
    debug_assert!(f_lo * j1(hi) < 0.0, "zero {k} not bracketed");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = j1(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    if libm::fabs(j1(lo)) <= libm::fabs(j1(hi)) {
        lo
    } else {
        hi
    }
}

/// McMahon expansion of the k-th positive zero of J1 (four terms).
///
/// Absolute error is below 1e-6 at k = 1 and falls like k⁻⁷.
pub fn j1_zero_mcmahon(k: u64) -> f64 {
    let beta = (k as f64 + 0.25) * PI;
    let b2 = beta * beta;
    beta - 0.375 / beta + 0.023_437_5 / (beta * b2) - 0.230_273_437_5 / (beta * b2 * b2)
}

/// Number of positive zeros of J1 that are <= x.
pub fn j1_zero_count(x: f64) -> u64 {
    if x.is_nan() || x <= 0.0 {
        return 0;
    }
    let last_cached = bessel_j1_zero(MAX_ZERO_INDEX).unwrap_or(f64::INFINITY);
    if x <= last_cached {
        return (1..=MAX_ZERO_INDEX)
            .take_while(|&k| bessel_j1_zero(k).map(|z| z <= x).unwrap_or(false))
            .count() as u64;
    }
    let estimate = libm::floor(x / PI - 0.25).max(1.0) as u64;
    let mut k = estimate.saturating_sub(2).max(u64::from(MAX_ZERO_INDEX));
    while j1_zero_mcmahon(k + 1) <= x {
        k += 1;
    }
    k
}
