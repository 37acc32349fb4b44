//! Log-factorial machinery accurate to a few ulps.
//!
//! `ln n! = n ln n - n + ln(2 pi n)/2 + stirlerr(n)`. Writing binomial
//! coefficients and probabilities through `stirlerr` and the saddle-point
//! deviance `bd0` avoids the cancellation between huge log-gamma values.
//! This is Loader's formulation of the binomial density.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LN_2PI: f64 = 1.837_877_066_409_345_5;

// stirlerr(n) for n = 1..=15, evaluated in 40-digit arithmetic
#[allow(clippy::excessive_precision)]
const STIRLERR_SMALL: [f64; 15] = [
    0.081_061_466_795_327_258_22,
    0.041_340_695_955_409_294_094,
    0.027_677_925_684_998_339_149,
    0.020_790_672_103_765_093_112,
    0.016_644_691_189_821_192_163,
    0.013_876_128_823_070_747_999,
    0.011_896_709_945_891_770_095,
    0.010_411_265_261_972_096_497,
    0.009_255_462_182_712_732_917_7,
    0.008_330_563_433_362_871_256_5,
    0.007_573_675_487_951_840_795,
    0.006_942_840_107_209_529_865_7,
    0.006_408_994_188_004_207_068_4,
    0.005_951_370_112_758_847_735_6,
    0.005_554_733_551_962_801_371,
];

/// `ln n! - (n ln n - n + ln(2 pi n)/2)` for `n >= 1`.
pub(crate) fn stirlerr(n: u64) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    debug_assert!(n >= 1);
    if n <= 15 {
        return STIRLERR_SMALL[n as usize - 1];
    }
    let nf = n as f64;
    let nn = nf * nf;
    (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / nf
}

/// `x ln(x/m) + m - x`, computed without cancellation when `x` is close to `m`.
pub(crate) fn bd0(x: f64, m: f64) -> f64 {
    if (x - m).abs() < 0.1 * (x + m) {
        let mut v = (x - m) / (x + m);
        let mut s = (x - m) * v;
        let mut ej = 2.0 * x * v;
        v *= v;
        for j in 1..1000 {
            ej *= v;
            let s1 = s + ej / (2 * j + 1) as f64;
            if s1 == s {
                return s1;
            }
            s = s1;
        }
        s
    } else {
        x * (x / m).ln() + m - x
    }
}

/// Log of the binomial probability of `x` successes in `n` trials with
/// success probability `p` and failure probability `q = 1 - p` (passed
/// separately so that callers with rational `p` keep `q` exact).
pub(crate) fn ln_binom_raw(x: u64, n: u64, p: f64, q: f64) -> f64 {
    debug_assert!(x <= n);
    if p == 0.0 {
        return if x == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    if q == 0.0 {
        return if x == n { 0.0 } else { f64::NEG_INFINITY };
    }
    let nf = n as f64;
    if x == 0 {
        if n == 0 {
            return 0.0;
        }
        return if p < 0.1 {
            -bd0(nf, nf * q) - nf * p
        } else {
            nf * q.ln()
        };
    }
    if x == n {
        return if q < 0.1 {
            -bd0(nf, nf * p) - nf * q
        } else {
            nf * p.ln()
        };
    }
    let xf = x as f64;
    let lc = stirlerr(n) - stirlerr(x) - stirlerr(n - x) - bd0(xf, nf * p) - bd0(nf - xf, nf * q);
    let lf = LN_2PI + xf.ln() + (-xf / nf).ln_1p();
    lc - 0.5 * lf
}

/// `ln C(n, k)`.
pub fn log_choose(n: u64, k: u64) -> Result<f64> {
    if k > n {
        return Err(Error::Domain(format!(
            "log_choose needs k <= n, got n={n}, k={k}"
        )));
    }
    if k == 0 || k == n {
        return Ok(0.0);
    }
    let (nf, kf) = (n as f64, k as f64);
    let r = kf / nf;
    // k ln(n/k) + (n-k) ln(n/(n-k)) - ln(2 pi k (n-k)/n)/2 + stirling corrections
    let main = kf * (nf / kf).ln() - (nf - kf) * (-r).ln_1p();
    let gauss = 0.5 * (2.0 * PI * kf).ln() + 0.5 * (-r).ln_1p();
    Ok(main - gauss + stirlerr(n) - stirlerr(k) - stirlerr(n - k))
}

/// Floor of `x`, except that values within `1e-9` (relative) of an integer
/// snap to it. Absorbs representation error in inputs such as `n * (i/n)`.
pub(crate) fn floor_snapped(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r
    } else {
        x.floor()
    }
}
