//! Bessel functions of the first kind and bracketed root finding.
//!
//! `J_n(x)` is evaluated from its ascending power series for `|x| <= 12`.
//! Past that point the alternating series cancels too many digits, so
//! Miller's backward recurrence normalised by `J_0 + 2 Σ J_2k = 1` takes over.
//! Both paths hold 1e-10 absolute accuracy out to `|x| = 30`; every argument
//! the patch models produce is below 3.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};

/// Default absolute tolerance for bracketed root solves.
pub const DEFAULT_ROOT_TOL: f64 = 1e-10;

/// Iteration cap for [`find_root_bracketed`].
pub const MAX_BISECTION_ITERATIONS: usize = 100;

/// First positive root of `J_1'`, the TM11 resonance argument.
pub const J1_PRIME_FIRST_ROOT: f64 = 1.841_183_781_340_659_3;

const SERIES_LIMIT: f64 = 12.0;
const SERIES_MAX_TERMS: usize = 300;

/// Interval known to straddle a sign change of the function being solved.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bracket<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Real> Bracket<T> {
    pub fn new(lo: T, hi: T) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
            return Err(Error::Domain(format!(
                "bracket requires finite lo < hi, got [{}, {}]",
                lo, hi
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn width(&self) -> T {
        self.hi - self.lo
    }
}

fn check_finite<T: Real>(x: T) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "Bessel argument must be finite, got {}",
            x
        )))
    }
}

/// Bessel function of the first kind `J_n(x)` for integer order `n >= 0`.
pub fn bessel_j<T: Real>(n: u32, x: T) -> Result<T> {
    check_finite(x)?;
    let ax = x.abs();
    let value = if ax <= lit(SERIES_LIMIT) {
        series(n, ax)
    } else {
        miller(n, ax)
    };
    // J_n(-x) = (-1)^n J_n(x)
    Ok(if x < T::zero() && n % 2 == 1 {
        -value
    } else {
        value
    })
}

/// Ascending series `Σ_k (-1)^k (x/2)^{2k+n} / (k! (k+n)!)`, for `x >= 0`.
fn series<T: Real>(n: u32, x: T) -> T {
    let half = x / lit(2.0);
    let mut term = T::one();
    for i in 1..=n {
        term = term * half / lit(f64::from(i));
    }
    if term == T::zero() {
        return T::zero();
    }
    let q = -(half * half);
    let nf: T = lit(f64::from(n));
    let mut sum = term;
    for k in 1..SERIES_MAX_TERMS {
        let kf: T = lit(k as f64);
        term = term * q / (kf * (kf + nf));
        sum = sum + term;
        if term.abs() <= T::epsilon() * sum.abs() * lit(0.01) || term == T::zero() {
            break;
        }
    }
    sum
}

/// Miller's backward recurrence, for `x > 0`.
fn miller<T: Real>(n: u32, x: T) -> T {
    let big: T = lit(1e10);
    let xi = x.ceil().to_usize().unwrap_or(0);
    let start = (n as usize).max(xi);
    let start = start + (60.0 * start as f64).sqrt() as usize + 20;
    let start = 2 * (start / 2 + 1);

    let two_over_x = lit::<T>(2.0) / x;
    let mut bjp = T::zero();
    let mut bj = T::one();
    let mut even_sum = T::zero();
    let mut ans = T::zero();
    let mut add = false;
    for j in (1..=start).rev() {
        let bjm = lit::<T>(j as f64) * two_over_x * bj - bjp;
        bjp = bj;
        bj = bjm;
        if bj.abs() > big {
            let inv = big.recip();
            bj = bj * inv;
            bjp = bjp * inv;
            ans = ans * inv;
            even_sum = even_sum * inv;
        }
        if add {
            even_sum = even_sum + bj;
        }
        add = !add;
        if j == n as usize {
            ans = bjp;
        }
    }
    let norm = lit::<T>(2.0) * even_sum - bj;
    if n == 0 {
        bj / norm
    } else {
        ans / norm
    }
}

/// Derivative `J_n'(x)`, via `(J_{n-1} - J_{n+1}) / 2` and `J_0' = -J_1`.
pub fn bessel_j_prime<T: Real>(n: u32, x: T) -> Result<T> {
    if n == 0 {
        return Ok(-bessel_j(1, x)?);
    }
    Ok((bessel_j(n - 1, x)? - bessel_j(n + 1, x)?) / lit(2.0))
}

/// Smallest positive root of `J_n'` for `n >= 1`.
///
/// `J_n` rises monotonically from zero to its first maximum, and that maximum
/// lies beyond `x = n`, so the search steps upward from `n` until `J_n'`
/// changes sign and then bisects.
pub fn jprime_first_root<T: Real>(n: u32, tol: T) -> Result<T> {
    if n == 0 {
        return Err(Error::Unsupported(
            "first positive root of J0' is not provided".into(),
        ));
    }
    let step: T = lit(0.25);
    let mut lo: T = lit(f64::from(n));
    let mut f_lo = bessel_j_prime(n, lo)?;
    for _ in 0..400 {
        let hi = lo + step;
        let f_hi = bessel_j_prime(n, hi)?;
        if f_lo.signum() != f_hi.signum() || f_hi == T::zero() {
            return find_root_bracketed(|x| bessel_j_prime(n, x), Bracket::new(lo, hi)?, tol);
        }
        lo = hi;
        f_lo = f_hi;
    }
    Err(Error::Convergence {
        iterations: 400,
        width: to_f64(step),
    })
}

/// Bisection on a bracket with a sign change.
///
/// Returns the midpoint of the final bracket once its width is at most `tol`
/// (or once the bracket cannot be split further in the scalar type). The
/// closure may fail; its error is propagated unchanged.
pub fn find_root_bracketed<T, F>(f: F, bracket: Bracket<T>, tol: T) -> Result<T>
where
    T: Real,
    F: Fn(T) -> Result<T>,
{
    if !(tol > T::zero()) {
        return Err(Error::Domain(format!(
            "root tolerance must be positive, got {}",
            tol
        )));
    }
    let Bracket { mut lo, mut hi } = bracket;
    let mut f_lo = eval_finite(&f, lo)?;
    let f_hi = eval_finite(&f, hi)?;
    if f_lo == T::zero() {
        return Ok(lo);
    }
    if f_hi == T::zero() {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Bracket {
            lo: to_f64(lo),
            hi: to_f64(hi),
            f_lo: to_f64(f_lo),
            f_hi: to_f64(f_hi),
        });
    }

    let half: T = lit(0.5);
    for _ in 0..MAX_BISECTION_ITERATIONS {
        let mid = lo + (hi - lo) * half;
        if hi - lo <= tol || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let f_mid = eval_finite(&f, mid)?;
        if f_mid == T::zero() {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    if hi - lo <= tol {
        return Ok(lo + (hi - lo) * half);
    }
    Err(Error::Convergence {
        iterations: MAX_BISECTION_ITERATIONS,
        width: to_f64(hi - lo),
    })
}

fn eval_finite<T: Real, F: Fn(T) -> Result<T>>(f: &F, x: T) -> Result<T> {
    let y = f(x)?;
    if y.is_finite() {
        Ok(y)
    } else {
        Err(Error::Domain(format!(
            "function is not finite at x = {}",
            x
        )))
    }
}

/// Composite Simpson rule on `[a, b]` with `intervals` (rounded up to even)
/// subintervals.
pub(crate) fn simpson<T, F>(f: F, a: T, b: T, intervals: usize) -> Result<T>
where
    T: Real,
    F: Fn(T) -> Result<T>,
{
    let n = intervals.max(2) + intervals % 2;
    let h = (b - a) / lit(n as f64);
    let mut acc = f(a)? + f(b)?;
    for i in 1..n {
        let w: T = if i % 2 == 1 { lit(4.0) } else { lit(2.0) };
        acc = acc + w * f(a + h * lit(i as f64))?;
    }
    Ok(acc * h / lit(3.0))
}
