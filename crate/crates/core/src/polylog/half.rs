//! Half-integer orders `3/2`, `1/2`, `-1/2` on the principal branch.
//!
//! Four evaluation regimes:
//! * defining power series for `|z| <= 1/2`;
//! * Lindelof's expansion around `z = 1` for `|log z| <= 1.8`;
//! * the same expansion with the nearest poles of the Jonquiere sum kept
//!   exactly and the remainder expanded in Hurwitz zeta values, which
//!   converges for any `log z` and is used up to `ln|z| < 36`;
//! * the divergent large-`|z|` series truncated at its smallest term.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

use super::zeta::{gamma_half_integer, hurwitz_zeta, zeta};
use super::{BranchSide, HalfOrder};
use crate::error::{Error, Result};

pub const SERIES_RADIUS: f64 = 0.5;
pub const LINDELOF_RADIUS: f64 = 1.8;
pub const ASYMPTOTIC_LOG_MODULUS: f64 = 36.0;

const LINDELOF_TERMS: usize = 64;
const MAX_TERMS: usize = 600;

/// Evaluation route, exposed so that overlapping regimes can be compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Series,
    Lindelof,
    PoleSubtracted,
    Asymptotic,
}

fn on_cut(z: Complex64) -> bool {
    z.im == 0.0 && z.re > 1.0
}

/// Principal log with `arg` in `(-pi, pi]`, so `-0.0` imaginary parts on the
/// negative axis still give `+pi`.
fn principal_ln(z: Complex64) -> Complex64 {
    if z.im == 0.0 && z.re < 0.0 {
        Complex64::new((-z.re).ln(), PI)
    } else {
        z.ln()
    }
}

/// `(-mu)^e` where `mu = log z`; on the cut the side fixes `arg(-mu) = -+pi`.
fn neg_mu_pow(mu: Complex64, e: f64, cut: bool, side: BranchSide) -> Complex64 {
    if cut {
        let arg = match side {
            BranchSide::AboveCut => -PI,
            BranchSide::BelowCut => PI,
        };
        return Complex64::from_polar(mu.re.powf(e), arg * e);
    }
    (-mu).powf(e)
}

/// Choose the regime used by [`li_half`].
pub fn regime_for(z: Complex64) -> Regime {
    let r = z.norm();
    if r <= SERIES_RADIUS {
        return Regime::Series;
    }
    if r.ln() >= ASYMPTOTIC_LOG_MODULUS {
        return Regime::Asymptotic;
    }
    if principal_ln(z).norm() <= LINDELOF_RADIUS {
        Regime::Lindelof
    } else {
        Regime::PoleSubtracted
    }
}

/// Principal-branch `Li_nu(z)` for a half-integer order; `side` is consulted
/// only for real `z > 1`.
pub fn li_half(order: HalfOrder, z: Complex64, side: BranchSide) -> Result<Complex64> {
    li_half_in(order, z, side, regime_for(z))
}

/// `Li_nu(z)` through an explicitly chosen regime (each regime has its own
/// domain of validity; see the module docs).
pub fn li_half_in(
    order: HalfOrder,
    z: Complex64,
    side: BranchSide,
    regime: Regime,
) -> Result<Complex64> {
    if z.re.is_nan() || z.im.is_nan() {
        return Err(Error::Domain("NaN argument".into()));
    }
    if z == Complex64::new(0.0, 0.0) {
        return Ok(z);
    }
    if z == Complex64::new(1.0, 0.0) {
        return match order {
            HalfOrder::ThreeHalves => Ok(Complex64::new(zeta(1.5)?, 0.0)),
            _ => Err(Error::Pole(format!("Li_{}(1)", order.value()))),
        };
    }
    let v = match regime {
        Regime::Series => series(order, z),
        Regime::Lindelof => lindelof(order, z, side)?,
        Regime::PoleSubtracted => pole_subtracted(order, z, side)?,
        Regime::Asymptotic => asymptotic(order, z, side)?,
    };
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::Precision(format!(
            "Li_{}({z}) via {regime:?}",
            order.value()
        )))
    }
}

fn series(order: HalfOrder, z: Complex64) -> Complex64 {
    let nu = order.value();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut zk = Complex64::new(1.0, 0.0);
    for k in 1..MAX_TERMS {
        zk *= z;
        let term = zk * (k as f64).powf(-nu);
        sum += term;
        if term.norm() <= 1e-18 * sum.norm() {
            break;
        }
    }
    sum
}

fn lindelof_table(order: HalfOrder) -> &'static [f64] {
    static TABLES: OnceLock<[Vec<f64>; 3]> = OnceLock::new();
    let tables = TABLES.get_or_init(|| {
        let build = |nu: f64| {
            let mut out = Vec::with_capacity(LINDELOF_TERMS);
            let mut fact = 1.0;
            for n in 0..LINDELOF_TERMS {
                if n > 0 {
                    fact *= n as f64;
                }
                out.push(zeta(nu - n as f64).expect("half-integer zeta") / fact);
            }
            out
        };
        [build(1.5), build(0.5), build(-0.5)]
    });
    &tables[order.index()]
}

/// The part of Lindelof's expansion that is analytic at `z = 1`:
/// `sum_n zeta(nu - n) mu^n / n!`, valid for `|mu| < 2 pi`.
pub fn lindelof_regular(order: HalfOrder, mu: Complex64) -> Result<Complex64> {
    if mu.norm() >= 2.0 * PI {
        return Err(Error::Domain(format!("|mu| = {} outside the disk", mu.norm())));
    }
    let table = lindelof_table(order);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut pow = Complex64::new(1.0, 0.0);
    for coeff in table {
        let term = pow * coeff;
        sum += term;
        if term.norm() <= 1e-19 * (1.0 + sum.norm()) && pow.norm() < 1.0 {
            break;
        }
        pow *= mu;
    }
    Ok(sum)
}

fn lindelof(order: HalfOrder, z: Complex64, side: BranchSide) -> Result<Complex64> {
    let mu = principal_ln(z);
    let nu = order.value();
    let singular = order.gamma_one_minus() * neg_mu_pow(mu, nu - 1.0, on_cut(z), side);
    Ok(singular + lindelof_regular(order, mu)?)
}

/// Number of poles `2 pi i k` kept exactly for a given `|mu|`.
pub fn poles_kept(mu_abs: f64) -> usize {
    (((mu_abs / PI).ceil() as i64) - 1).max(1) as usize
}

fn pole_subtracted(order: HalfOrder, z: Complex64, side: BranchSide) -> Result<Complex64> {
    let mu = principal_ln(z);
    pole_subtracted_with(order, mu, on_cut(z), side, poles_kept(mu.norm()))
}

/// Jonquiere's sum `Gamma(1-nu) sum_k (2 pi i k - mu)^(nu-1)` with `|k| <= kmax`
/// taken exactly and the tail expanded in powers of `mu`.
pub(crate) fn pole_subtracted_with(
    order: HalfOrder,
    mu: Complex64,
    cut: bool,
    side: BranchSide,
    kmax: usize,
) -> Result<Complex64> {
    let nu = order.value();
    let g = order.gamma_one_minus();
    let mut singular = neg_mu_pow(mu, nu - 1.0, cut, side);
    for k in 1..=kmax {
        let pole = Complex64::new(0.0, 2.0 * PI * k as f64);
        singular += (pole - mu).powf(nu - 1.0) + (-pole - mu).powf(nu - 1.0);
    }
    let a = (kmax + 1) as f64;
    let ratio = mu.norm() / (2.0 * PI * a);
    if ratio >= 0.95 {
        return Err(Error::Precision(format!("tail ratio {ratio}")));
    }
    let mut regular = Complex64::new(0.0, 0.0);
    // binom(nu-1, n) (-1)^n, built by recurrence.
    let mut binom = 1.0;
    let mut pow = Complex64::new(1.0, 0.0);
    let mut small_run = 0;
    for n in 0..MAX_TERMS {
        if n > 0 {
            binom *= -(nu - 1.0 - (n - 1) as f64) / n as f64;
            pow *= mu;
        }
        let s = nu - 1.0 - n as f64;
        let tail = 2.0 * (2.0 * PI).powf(s) * (PI * s / 2.0).cos() * hurwitz_zeta(-s, a)?;
        let term = pow * (binom * tail);
        regular += term;
        if term.norm() <= 1e-19 * (1.0 + regular.norm() + singular.norm()) {
            small_run += 1;
            if small_run >= 2 {
                break;
            }
        } else {
            small_run = 0;
        }
    }
    Ok(g * (singular + regular))
}

fn asymptotic(order: HalfOrder, z: Complex64, side: BranchSide) -> Result<Complex64> {
    let mu = if on_cut(z) {
        let l = z.re.ln();
        match side {
            BranchSide::AboveCut => Complex64::new(l, -PI),
            BranchSide::BelowCut => Complex64::new(l, PI),
        }
    } else {
        principal_ln(-z)
    };
    let nu = order.value();
    let inv_mu2 = (mu * mu).inv();
    // mu^(nu - 2k) / Gamma(nu + 1 - 2k)
    let mut g = mu.powf(nu) / gamma_half_integer((2.0 * nu + 2.0) as i64);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 0..MAX_TERMS {
        let kk = k as f64;
        let factor = if k == 0 {
            -0.5
        } else {
            ((1.0 - 2.0 * kk) * std::f64::consts::LN_2).exp_m1() * zeta(2.0 * kk)?
        };
        let term = g * (2.0 * factor);
        let size = term.norm();
        if size > last {
            break;
        }
        sum += term;
        if size <= 1e-18 * sum.norm() {
            break;
        }
        last = size;
        g *= (nu - 2.0 * kk) * (nu - 2.0 * kk - 1.0) * inv_mu2;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    const ORDERS: [HalfOrder; 3] = [HalfOrder::ThreeHalves, HalfOrder::OneHalf, HalfOrder::MinusHalf];

    #[test]
    fn regime_boundaries() {
        assert_eq!(regime_for(c(0.5, 0.0)), Regime::Series);
        assert_eq!(regime_for(c(0.9, 0.1)), Regime::Lindelof);
        assert_eq!(regime_for(c(-3.0, 1.0)), Regime::PoleSubtracted);
        assert_eq!(regime_for(c(1e17, 0.0)), Regime::Asymptotic);
    }

    #[test]
    fn plain_expansion_is_the_zero_pole_case() {
        for order in ORDERS {
            for z in [c(0.7, 0.2), c(1.5, -0.4), c(-0.6, 0.1)] {
                let mu = principal_ln(z);
                let a = lindelof(order, z, BranchSide::BelowCut).unwrap();
                let b = pole_subtracted_with(order, mu, false, BranchSide::BelowCut, 0).unwrap();
                assert!((a - b).norm() < 1e-12 * (1.0 + a.norm()), "{order:?} {z}");
            }
        }
    }

    #[test]
    fn more_poles_do_not_change_the_value() {
        for order in ORDERS {
            let z = c(-30.0, 12.0);
            let mu = principal_ln(z);
            let base = pole_subtracted_with(order, mu, false, BranchSide::BelowCut, 2).unwrap();
            for k in 3..6 {
                let v = pole_subtracted_with(order, mu, false, BranchSide::BelowCut, k).unwrap();
                assert!((v - base).norm() < 1e-11 * (1.0 + base.norm()));
            }
        }
    }
}
