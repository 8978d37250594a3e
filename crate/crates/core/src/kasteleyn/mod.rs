//! Exact finite-size partition functions from the Fourier-diagonalised
//! Kasteleyn matrices of the four boundary-condition sectors.
//!
//! All products run over conjugate pairs of Fourier modes in log space so
//! that tori with `m, n` in the thousands stay far from overflow; the only
//! factors that can be negative are the two real ones, whose signs are
//! counted exactly.

mod bell;

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::polylog::{li_int_exp, log1p_complex};
use crate::signed_log::SignedLog;

pub use bell::{bell_coefficient, complete_bell, partitions};

/// Largest moment order supported by [`moments_exact`].
pub const MAX_MOMENT_ORDER: usize = 8;

/// Factors with modulus below this make the cumulants unreliable.
pub const NEAR_SINGULAR: f64 = 1e-12;

const CHUNK: usize = 256;

/// An `m x n` honeycomb torus with edge weights `a` (vertical dimer, empty
/// path vertex), `b` (east step) and `c` (north step).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusParams {
    pub m: usize,
    pub n: usize,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl TorusParams {
    pub fn new(m: usize, n: usize, a: f64, b: f64, c: f64) -> Result<Self> {
        let t = TorusParams { m, n, a, b, c };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.n == 0 {
            return Err(Error::InvalidParams(format!("size {}x{}", self.m, self.n)));
        }
        for (name, w) in [("a", self.a), ("b", self.b), ("c", self.c)] {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidParams(format!("{name} = {w} must be positive")));
            }
        }
        if self.b >= self.a {
            return Err(Error::InvalidParams(format!(
                "need b < a, got a = {}, b = {}",
                self.a, self.b
            )));
        }
        Ok(())
    }

    /// Same torus with the north-step weight replaced.
    pub fn with_c(&self, c: f64) -> Self {
        TorusParams { c, ..*self }
    }

    /// `n (log c - log(a - b))`, the log of the criticality parameter.
    pub fn log_criticality(&self) -> f64 {
        self.n as f64 * (self.c.ln() - (self.a - self.b).ln())
    }

    pub fn area(&self) -> f64 {
        self.m as f64 * self.n as f64
    }
}

/// Boundary-condition sector: `sigma` twists the horizontal direction,
/// `tau` the vertical one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sector {
    pub sigma: u8,
    pub tau: u8,
}

impl Sector {
    pub const ALL: [Sector; 4] = [
        Sector { sigma: 0, tau: 0 },
        Sector { sigma: 1, tau: 0 },
        Sector { sigma: 0, tau: 1 },
        Sector { sigma: 1, tau: 1 },
    ];

    pub fn new(sigma: u8, tau: u8) -> Result<Self> {
        if sigma > 1 || tau > 1 {
            return Err(Error::InvalidParams(format!("sector ({sigma},{tau})")));
        }
        Ok(Sector { sigma, tau })
    }

    /// Sign with which the sector enters `Z`.
    pub fn eps(self) -> i8 {
        if self.sigma == 0 && self.tau == 0 {
            -1
        } else {
            1
        }
    }

    pub fn index(self) -> usize {
        usize::from(self.sigma) + 2 * usize::from(self.tau)
    }
}

/// One Fourier mode (or conjugate pair of modes) of a sector product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierFactor {
    /// Twice the mode index; `k = k2 / 2` lies in `Z_m + sigma/2`.
    pub k2: i64,
    pub theta: f64,
    /// `-exp(i theta)`.
    pub z: Complex64,
    /// `n (log(a - b) - log|a + b z|)`, never positive.
    pub log_r: f64,
    /// `-n arg(a + b z)`.
    pub phi: f64,
    /// 1 for the real modes `z = -1, +1`, 2 for a conjugate pair.
    pub multiplicity: u8,
}

impl FourierFactor {
    pub fn is_real(&self) -> bool {
        self.multiplicity == 1
    }

    /// `log w` with `w = (c / (a + b z))^n`.
    fn log_w(&self, log_crit: f64) -> Complex64 {
        Complex64::new(log_crit + self.log_r, self.phi)
    }
}

/// Representatives `0 <= k2 <= m` of the modes of a sector with horizontal
/// twist `sigma`; the modes with `k2 < 0` are their conjugates.
pub fn fourier_factors(t: &TorusParams, sigma: u8) -> Vec<FourierFactor> {
    let m = t.m as i64;
    let nf = t.n as f64;
    let (a, b) = (t.a, t.b);
    let log_amb = (a - b).ln();
    let first = i64::from(sigma & 1);
    (0..)
        .map(|j| first + 2 * j)
        .take_while(|&k2| k2 <= m)
        .map(|k2| {
            let real = k2 == 0 || k2 == m;
            let theta = PI * k2 as f64 / m as f64;
            let (log_mod, arg) = if k2 == 0 {
                (log_amb, 0.0)
            } else if k2 == m {
                ((a + b).ln(), 0.0)
            } else {
                let half = (theta / 2.0).sin();
                let sq = (a - b) * (a - b) + 4.0 * a * b * half * half;
                (0.5 * sq.ln(), (-b * theta.sin()).atan2(a - b * theta.cos()))
            };
            FourierFactor {
                k2,
                theta,
                z: -Complex64::from_polar(1.0, theta),
                log_r: nf * (log_amb - log_mod),
                phi: -nf * arg,
                multiplicity: if real { 1 } else { 2 },
            }
        })
        .collect()
}

/// `ln|1 - s w|` and its sign (sign is only meaningful for real factors).
fn factor_log(f: &FourierFactor, log_crit: f64, tau: u8) -> (f64, i8) {
    let lw = f.log_w(log_crit);
    let s = if tau == 0 { 1.0 } else { -1.0 };
    if f.is_real() {
        let x = lw.re;
        if tau == 1 {
            let softplus = if x > 0.0 { x + (-x).exp().ln_1p() } else { x.exp().ln_1p() };
            return (softplus, 1);
        }
        // 1 - e^x
        return if x == 0.0 {
            (f64::NEG_INFINITY, 0)
        } else if x < 0.0 {
            ((-x.exp_m1()).ln(), 1)
        } else if x < 30.0 {
            (x.exp_m1().ln(), -1)
        } else {
            (x + (-(-x).exp()).ln_1p(), -1)
        };
    }
    let ln_abs = if lw.re <= 0.0 {
        log1p_complex(-s * lw.exp()).re
    } else {
        lw.re + log1p_complex(-s * (-lw).exp()).re
    };
    (ln_abs, 1)
}

fn prefactor_log(t: &TorusParams, sigma: u8) -> f64 {
    let ratio_pow = (t.m as f64 * (t.b / t.a).ln()).exp();
    let inner = if sigma == 0 { (-ratio_pow).ln_1p() } else { ratio_pow.ln_1p() };
    t.n as f64 * (t.m as f64 * t.a.ln() + inner)
}

/// `Z_{sigma tau}` as a signed log; exactly vanishing sectors come back as
/// [`SignedLog::ZERO`].
pub fn log_z_sector(t: &TorusParams, s: Sector) -> Result<SignedLog> {
    t.validate()?;
    let factors = fourier_factors(t, s.sigma);
    let log_crit = t.log_criticality();
    let partial: Vec<(f64, i8)> = factors
        .par_chunks(CHUNK)
        .map(|chunk| {
            chunk.iter().fold((0.0, 1i8), |(acc, sign), f| {
                let (l, sg) = factor_log(f, log_crit, s.tau);
                (acc + f64::from(f.multiplicity) * l, sign * sg)
            })
        })
        .collect();
    let (mut log_abs, mut sign) = (prefactor_log(t, s.sigma), 1i8);
    for (l, sg) in partial {
        log_abs += l;
        sign *= sg;
    }
    Ok(SignedLog::new(log_abs, sign))
}

/// All four sectors in [`Sector::ALL`] order.
pub fn log_z_sectors(t: &TorusParams) -> Result<[SignedLog; 4]> {
    let mut out = [SignedLog::ZERO; 4];
    for (slot, s) in out.iter_mut().zip(Sector::ALL) {
        *slot = log_z_sector(t, s)?;
    }
    Ok(out)
}

fn combine_total(sectors: &[SignedLog; 4]) -> Result<SignedLog> {
    let total = SignedLog::sum(
        Sector::ALL
            .iter()
            .zip(sectors)
            .map(|(s, z)| if s.eps() < 0 { -*z } else { *z }),
    )
    .scale_log(-LN_2);
    if total.sign != 1 {
        return Err(Error::Inconsistent(format!(
            "signed sector sum is {total}, expected positive"
        )));
    }
    Ok(total)
}

/// `Z = (-Z_00 + Z_10 + Z_01 + Z_11) / 2`.
pub fn log_z_total(t: &TorusParams) -> Result<SignedLog> {
    combine_total(&log_z_sectors(t)?)
}

/// Sector weights `eps Z_{sigma tau} / (2 Z)` in [`Sector::ALL`] order.
pub fn sector_weights(t: &TorusParams) -> Result<[f64; 4]> {
    let sectors = log_z_sectors(t)?;
    let total = combine_total(&sectors)?;
    let mut w = [0.0; 4];
    for ((slot, s), z) in w.iter_mut().zip(Sector::ALL).zip(&sectors) {
        *slot = f64::from(s.eps()) * z.ratio(total) / 2.0;
    }
    Ok(w)
}

/// Cumulants `L_1 .. L_lmax` of `N_c` within one sector: iterated `c d/dc`
/// of `log Z_{sigma tau}`.
pub fn cumulants_sector(t: &TorusParams, s: Sector, lmax: usize) -> Result<Vec<f64>> {
    t.validate()?;
    if lmax == 0 || lmax as i32 > 1 - crate::polylog::MIN_INTEGER_ORDER {
        return Err(Error::InvalidParams(format!("cumulant order {lmax}")));
    }
    let factors = fourier_factors(t, s.sigma);
    let log_crit = t.log_criticality();
    let shift = if s.tau == 1 { PI } else { 0.0 };
    let partial: Vec<Result<Vec<f64>>> = factors
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut acc = vec![0.0; lmax];
            for f in chunk {
                let (ln_abs, _) = factor_log(f, log_crit, s.tau);
                if ln_abs == f64::NEG_INFINITY {
                    return Err(Error::Degenerate);
                }
                if ln_abs < NEAR_SINGULAR.ln() {
                    return Err(Error::NearSingular(ln_abs.exp()));
                }
                let lw = f.log_w(log_crit) + Complex64::new(0.0, shift);
                for (l, slot) in acc.iter_mut().enumerate() {
                    let v = li_int_exp(-(l as i32), lw)?;
                    *slot += if f.is_real() { v.re } else { 2.0 * v.re };
                }
            }
            Ok(acc)
        })
        .collect();
    let mut sums = vec![0.0; lmax];
    for chunk in partial {
        for (s, v) in sums.iter_mut().zip(chunk?) {
            *s += v;
        }
    }
    let nf = t.n as f64;
    Ok(sums
        .iter()
        .enumerate()
        .map(|(l, v)| -nf.powi(l as i32 + 1) * v)
        .collect())
}

/// Single cumulant `L_l` of a sector.
pub fn cumulant_sector(t: &TorusParams, s: Sector, l: usize) -> Result<f64> {
    Ok(cumulants_sector(t, s, l)?[l - 1])
}

/// Raw and central moments of `N_c`; index `l` holds the `l`-th moment.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentVector {
    pub raw: Vec<f64>,
    pub central: Vec<f64>,
    /// `eps Z_{sigma tau} / (2 Z)` in [`Sector::ALL`] order.
    pub sector_weights: [f64; 4],
}

impl MomentVector {
    pub fn mean(&self) -> f64 {
        self.raw[1]
    }

    pub fn variance(&self) -> f64 {
        self.central[2]
    }

    /// `C_3 / C_2^{3/2}`.
    pub fn skewness(&self) -> f64 {
        self.central[3] / self.central[2].powf(1.5)
    }

    /// `C_4 / C_2^2 - 3`.
    pub fn excess_kurtosis(&self) -> f64 {
        self.central[4] / (self.central[2] * self.central[2]) - 3.0
    }

    /// `sum |w|` over the sector weights. The weights sum to one, so values
    /// well above one mean the mixture cancels and loses that many digits.
    pub fn cancellation(&self) -> f64 {
        self.sector_weights.iter().map(|w| w.abs()).sum()
    }
}

/// Moments of `N_c` up to order `lmax` as a signed mixture of the four
/// sectors' Bell polynomials.
pub fn moments_exact(t: &TorusParams, lmax: usize) -> Result<MomentVector> {
    if lmax == 0 || lmax > MAX_MOMENT_ORDER {
        return Err(Error::InvalidParams(format!("moment order {lmax}")));
    }
    let weights = sector_weights(t)?;
    let mut cumulants: Vec<Option<Vec<f64>>> = Vec::with_capacity(4);
    for (s, w) in Sector::ALL.iter().zip(weights) {
        cumulants.push(if w == 0.0 {
            None
        } else {
            Some(cumulants_sector(t, *s, lmax)?)
        });
    }
    let mut raw = vec![0.0; lmax + 1];
    for (w, cum) in weights.iter().zip(&cumulants) {
        if let Some(cum) = cum {
            for (r, y) in raw.iter_mut().zip(complete_bell(cum)) {
                *r += w * y;
            }
        }
    }
    let mean = raw[1];
    let mut central = vec![0.0; lmax + 1];
    for (w, cum) in weights.iter().zip(&cumulants) {
        if let Some(cum) = cum {
            let mut shifted = cum.clone();
            shifted[0] -= mean;
            for (c, y) in central.iter_mut().zip(complete_bell(&shifted)) {
                *c += w * y;
            }
        }
    }
    central[0] = 1.0;
    raw[0] = 1.0;
    if lmax >= 1 {
        central[1] = 0.0;
    }
    Ok(MomentVector {
        raw,
        central,
        sector_weights: weights,
    })
}

/// `(Z_-, Z_+)`: the sectors split by the parity of `tau q + sigma p`.
pub fn z_plus_minus(t: &TorusParams, p: i64, q: i64) -> Result<(SignedLog, SignedLog)> {
    if crate::resonance::gcd(p.unsigned_abs(), q.unsigned_abs()) != 1 {
        return Err(Error::InvalidParams(format!("{p}/{q} not in lowest terms")));
    }
    let sectors = log_z_sectors(t)?;
    let mut minus = SignedLog::ZERO;
    let mut plus = SignedLog::ZERO;
    for (s, z) in Sector::ALL.iter().zip(sectors) {
        let parity = (i64::from(s.tau) * q + i64::from(s.sigma) * p).rem_euclid(2);
        if parity == 1 {
            minus = minus + z;
        } else {
            plus = plus + if s.eps() < 0 { -z } else { z };
        }
    }
    Ok((minus.scale_log(-LN_2), plus.scale_log(-LN_2)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn one_by_one_sectors() {
        let (a, b, c) = (1.0, 0.3, 0.9);
        let t = TorusParams::new(1, 1, a, b, c).unwrap();
        let expect = [a - b - c, a + b - c, a - b + c, a + b + c];
        for (s, e) in Sector::ALL.iter().zip(expect) {
            let v = log_z_sector(&t, *s).unwrap().to_f64();
            assert!(rel(v, e) < 1e-14, "{s:?}: {v} vs {e}");
        }
        let z = log_z_total(&t).unwrap();
        assert!((z.log_abs - (a + b + c).ln()).abs() < 1e-14);
    }

    #[test]
    fn fourier_modes_cover_the_index_set() {
        for m in 1..9usize {
            for sigma in 0..2u8 {
                let t = TorusParams::new(m, 3, 1.0, 0.4, 0.5).unwrap();
                let f = fourier_factors(&t, sigma);
                let count: usize = f.iter().map(|x| usize::from(x.multiplicity)).sum();
                assert_eq!(count, m, "m={m} sigma={sigma}");
                let has_plus_one = f.iter().any(|x| x.k2 == m as i64);
                assert_eq!(has_plus_one, (m % 2) as u8 == sigma);
                for x in &f {
                    assert!((x.z.norm() - 1.0).abs() < 1e-15);
                    assert!(x.log_r <= 1e-15);
                }
            }
        }
    }

    #[test]
    fn exact_zero_sector_at_the_critical_point() {
        let t = TorusParams::new(4, 4, 1.0, 0.5, 0.5).unwrap();
        assert!(log_z_sector(&t, Sector::ALL[0]).unwrap().is_zero());
        assert!(matches!(
            cumulants_sector(&t, Sector::ALL[0], 2),
            Err(Error::Degenerate)
        ));
        let m = moments_exact(&t, 4).unwrap();
        assert_eq!(m.sector_weights[0], 0.0);
        assert!(m.variance() > 0.0);
    }

    #[test]
    fn one_by_one_cumulant() {
        let (a, b, c) = (1.0, 0.2, 0.7);
        let t = TorusParams::new(1, 1, a, b, c).unwrap();
        let l1 = cumulant_sector(&t, Sector::ALL[3], 1).unwrap();
        assert!(rel(l1, c / (a + b + c)) < 1e-14);
    }

    #[test]
    fn large_torus_stays_finite() {
        let t = TorusParams::new(3000, 3000, 1.0, 0.5, 0.5).unwrap();
        let z = log_z_total(&t).unwrap();
        assert!(z.log_abs.is_finite() && z.sign == 1);
        let w = sector_weights(&t).unwrap();
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_parameters() {
        assert!(TorusParams::new(0, 1, 1.0, 0.5, 0.5).is_err());
        assert!(TorusParams::new(1, 1, 1.0, 1.0, 0.5).is_err());
        assert!(TorusParams::new(1, 1, 1.0, 0.5, -0.5).is_err());
        let t = TorusParams::new(2, 2, 1.0, 0.5, 0.3).unwrap();
        assert!(moments_exact(&t, 9).is_err());
        assert!(z_plus_minus(&t, 2, 4).is_err());
    }
}
