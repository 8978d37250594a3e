//! Riemann and Hurwitz zeta, plus the gamma values the polylog and
//! integral formulas need.

use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};

const BORWEIN_TERMS: usize = 30;

/// Riemann zeta for real `s != 1`.
pub fn zeta(s: f64) -> Result<f64> {
    if s == 1.0 {
        return Err(Error::Pole("zeta(1)".into()));
    }
    if !s.is_finite() {
        return Err(Error::Domain(format!("zeta({s})")));
    }
    if s == 0.0 {
        return Ok(-0.5);
    }
    if s > 0.0 {
        return Ok(zeta_positive(s));
    }
    // Trivial zeros.
    if s.fract() == 0.0 && (s as i64) % 2 == 0 {
        return Ok(0.0);
    }
    let t = 1.0 - s;
    let sin = (PI * s / 2.0).sin();
    let log_mag = s * LN_2 + (s - 1.0) * PI.ln() + ln_gamma(t) + zeta_positive(t).ln();
    Ok(sin * log_mag.exp())
}

/// Borwein's accelerated alternating series for the eta function.
fn zeta_positive(s: f64) -> f64 {
    if s > 60.0 {
        // 2^-60 is already below double precision relative to 1.
        return 1.0 + 2f64.powf(-s) + 3f64.powf(-s);
    }
    let n = BORWEIN_TERMS;
    let nf = n as f64;
    let mut d = Vec::with_capacity(n + 1);
    let mut t = 1.0;
    let mut acc = 1.0;
    d.push(acc);
    for i in 1..=n {
        let fi = i as f64;
        t *= 4.0 * (nf + fi - 1.0) * (nf - fi + 1.0) / ((2.0 * fi) * (2.0 * fi - 1.0));
        acc += t;
        d.push(acc);
    }
    let dn = d[n];
    let mut sum = 0.0;
    for k in (0..n).rev() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * (d[k] - dn) / ((k + 1) as f64).powf(s);
    }
    let eta = -sum / dn;
    eta / -((1.0 - s) * LN_2).exp_m1()
}

// Bernoulli numbers B_2, B_4, ..., B_30.
const BERNOULLI_EVEN: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

/// Hurwitz zeta `sum_{j>=0} (a+j)^-t` for `a > 0`, continued analytically in `t`.
pub fn hurwitz_zeta(t: f64, a: f64) -> Result<f64> {
    if t == 1.0 {
        return Err(Error::Pole("hurwitz_zeta(1, a)".into()));
    }
    if a <= 0.0 {
        return Err(Error::Domain(format!("hurwitz_zeta shift {a}")));
    }
    if t > 20.0 {
        let first = a.powf(-t);
        let mut sum = first;
        let mut j = 1.0;
        loop {
            let term = (a + j).powf(-t);
            sum += term;
            if term < 1e-18 * sum {
                break;
            }
            j += 1.0;
        }
        return Ok(sum);
    }
    // For t < 1 the head sum grows with the shift and cancels against the
    // correction terms, so stop earlier there.
    let target = if t < 1.0 { 12.0 } else { 30.0 };
    let shift = (target - a).ceil().max(0.0);
    let mut sum = 0.0;
    let mut j = 0.0;
    while j < shift {
        sum += (a + j).powf(-t);
        j += 1.0;
    }
    let x = a + shift;
    sum += x.powf(1.0 - t) / (t - 1.0) + 0.5 * x.powf(-t);
    // Rising factorial t(t+1)...(t+2k-2) / (2k)! accumulated alongside.
    let mut rising = t;
    let mut fact = 2.0;
    let mut power = x.powf(-t - 1.0);
    let inv_x2 = 1.0 / (x * x);
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        let term = b / fact * rising * power;
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
        let kk = (k + 1) as f64;
        rising *= (t + 2.0 * kk - 1.0) * (t + 2.0 * kk);
        fact *= (2.0 * kk + 1.0) * (2.0 * kk + 2.0);
        power *= inv_x2;
    }
    Ok(sum)
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Gamma(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Gamma for real arguments away from the poles; exact recurrence at half-integers.
pub fn gamma(x: f64) -> f64 {
    let twice = 2.0 * x;
    if twice.fract() == 0.0 && (twice as i64) % 2 != 0 && x.abs() < 150.0 {
        return gamma_half_integer(twice as i64);
    }
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    ln_gamma(x).exp()
}

/// `Gamma(k/2)` for odd `k`, from `Gamma(1/2) = sqrt(pi)`.
pub fn gamma_half_integer(k: i64) -> f64 {
    debug_assert!(k % 2 != 0);
    let mut x = 0.5;
    let mut g = PI.sqrt();
    let target = k as f64 / 2.0;
    while x < target {
        g *= x;
        x += 1.0;
    }
    while x > target {
        x -= 1.0;
        g /= x;
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn known_values() {
        assert!(rel(zeta(2.0).unwrap(), PI * PI / 6.0) < 1e-14);
        assert!(rel(zeta(1.5).unwrap(), 2.612_375_348_685_488_3) < 1e-13);
        assert!(rel(zeta(0.5).unwrap(), -1.460_354_508_809_586_8) < 1e-13);
        assert!(rel(zeta(-0.5).unwrap(), -0.207_886_224_977_354_57) < 1e-13);
        assert!(rel(zeta(-1.0).unwrap(), -1.0 / 12.0) < 1e-13);
        assert!(rel(zeta(-3.0).unwrap(), 1.0 / 120.0) < 1e-13);
        assert_eq!(zeta(-4.0).unwrap(), 0.0);
        assert_eq!(zeta(0.0).unwrap(), -0.5);
        assert!(matches!(zeta(1.0), Err(Error::Pole(_))));
    }

    #[test]
    fn matches_euler_maclaurin_oracle() {
        // Hurwitz with a = 1 is an independent summation route.
        for &s in &[0.3, 1.5, 2.5, 3.0, 7.25, 19.0, 33.0, 39.5] {
            let a = zeta(s).unwrap();
            let b = hurwitz_zeta(s, 1.0).unwrap();
            assert!(rel(a, b) < 1e-12, "s={s}: {a} vs {b}");
        }
    }

    #[test]
    fn negative_arguments_through_functional_equation() {
        // zeta(1-2k) = -B_2k / 2k
        let b = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0];
        for (i, bk) in b.iter().enumerate() {
            let k = (i + 1) as f64;
            let expect = -bk / (2.0 * k);
            assert!(rel(zeta(1.0 - 2.0 * k).unwrap(), expect) < 1e-12);
        }
        // Hurwitz continuation at a = 1 agrees on the negative side too.
        for &s in &[-0.5, -1.5] {
            assert!(rel(zeta(s).unwrap(), hurwitz_zeta(s, 1.0).unwrap()) < 1e-11);
        }
        assert!(zeta(-39.5).unwrap().is_finite());
    }

    #[test]
    fn hurwitz_shift_relation() {
        for &t in &[-0.5, 0.5, 1.5, 2.5, 25.5] {
            let lhs = hurwitz_zeta(t, 3.0).unwrap();
            let rhs = zeta(t).unwrap() - 1.0 - 2f64.powf(-t);
            assert!((lhs - rhs).abs() < 1e-12 * (1.0 + lhs.abs()), "t={t}");
        }
    }

    #[test]
    fn gamma_values() {
        assert!(rel(gamma(0.5), PI.sqrt()) < 1e-15);
        assert!(rel(gamma(-0.5), -2.0 * PI.sqrt()) < 1e-15);
        assert!(rel(gamma(1.5), PI.sqrt() / 2.0) < 1e-15);
        assert!(rel(gamma(5.0), 24.0) < 1e-13);
        assert!(rel(gamma(0.25), 3.625_609_908_221_908_3) < 1e-13);
        assert!(rel(ln_gamma(41.0), 110.320_639_714_757_4) < 1e-14);
    }
}
