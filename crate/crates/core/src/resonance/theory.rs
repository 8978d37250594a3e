use num_complex::Complex64;
use std::f64::consts::{PI, SQRT_2};

use super::jint::{is_singular, j_closed, JQuery};
use super::params::{derive_params, CriticalParams};
use crate::error::{Error, Result};
use crate::kasteleyn::TorusParams;
use crate::polylog::{li_half, BranchSide, HalfOrder};

/// Two log-Z integrals closer than this (relative) are reported as a tie.
pub const TIE_TOL: f64 = 1e-9;
/// `-J_{-1}` below this is reported as a vanishing variance.
pub const ZERO_VAR_TOL: f64 = 1e-9;

/// Predictions for one choice of sign of `beta = +-A^q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchPrediction {
    pub sign: i8,
    /// `-J_1(+-A^q, alpha)`.
    pub log_z_integral: f64,
    pub log_z: f64,
    pub mean_nc: f64,
    pub var_nc: f64,
    pub singular: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PredictionFlags {
    /// The dominant spiral passes through `1`.
    pub singular: bool,
    /// Both signs give the same `log Z`; the edge count is then a mixture.
    pub tie: bool,
    pub near_zero_var: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub log_z: f64,
    /// Sign of `beta` maximising the log-Z integral.
    pub dominant: i8,
    pub mean_nc: f64,
    pub var_nc: f64,
    pub minus: BranchPrediction,
    pub plus: BranchPrediction,
    pub flags: PredictionFlags,
}

impl Prediction {
    pub fn branch(&self, sign: i8) -> &BranchPrediction {
        if sign < 0 {
            &self.minus
        } else {
            &self.plus
        }
    }
}

/// Prefactors turning the window integrals into `log Z`, mean and variance.
fn prefactors(t: &TorusParams, p: u64, q: u64) -> (f64, f64, f64) {
    let (m, n) = (t.m as f64, t.n as f64);
    let (b, c) = (t.b, t.c);
    let pq = (p * q) as f64;
    let base = PI * SQRT_2;
    let log_z = (m * n * b * c).powf(0.25) / (base * pq.powf(0.75));
    let mean = (m * n * c).powf(0.75) / (base * (pq * b).powf(0.25));
    let var = (m * n * c).powf(1.25) * pq.powf(0.25) / (base * b.powf(0.75));
    (log_z, mean, var)
}

fn branch(alpha: f64, log_beta: f64, pre: (f64, f64, f64), sign: i8) -> Result<BranchPrediction> {
    let beta = f64::from(sign) * log_beta.exp();
    let alpha = alpha.abs();
    let j1 = j_closed(JQuery::new(1, beta, alpha))?;
    let j0 = j_closed(JQuery::new(0, beta, alpha))?;
    let jm1 = j_closed(JQuery::new(-1, beta, alpha))?;
    Ok(BranchPrediction {
        sign,
        log_z_integral: -j1.re(),
        log_z: pre.0 * -j1.re(),
        mean_nc: pre.1 * -j0.re(),
        var_nc: pre.2 * -jm1.re(),
        singular: j1.singular,
    })
}

/// Leading-order `log Z`, mean and variance of `N_c` for the torus `t`
/// near the resonance described by `cp`.
pub fn predict_all(cp: &CriticalParams, t: &TorusParams) -> Result<Prediction> {
    let check = derive_params(t, cp.p, cp.q)?;
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()));
    if !close(check.alpha, cp.alpha) || !close(check.log_a, cp.log_a) {
        return Err(Error::InvalidParams(
            "critical parameters do not belong to this torus".into(),
        ));
    }
    predict_at(t, cp.p, cp.q, cp.alpha, cp.log_beta())
}

/// Predictions with the offset `alpha` and `log beta = q log A` supplied
/// directly; `t` only sets the prefactors.
pub fn predict_at(t: &TorusParams, p: u64, q: u64, alpha: f64, log_beta: f64) -> Result<Prediction> {
    t.validate()?;
    if p == 0 || q == 0 {
        return Err(Error::InvalidParams(format!("{p}/{q}")));
    }
    let pre = prefactors(t, p, q);
    let minus = branch(alpha, log_beta, pre, -1)?;
    let plus = branch(alpha, log_beta, pre, 1)?;
    let (lm, lp) = (minus.log_z_integral, plus.log_z_integral);
    let tie = (lm - lp).abs() <= TIE_TOL * (1.0 + lm.abs().max(lp.abs()));
    let dom = if lp > lm { plus } else { minus };
    let jm1 = dom.var_nc / pre.2;
    let mut flags = PredictionFlags {
        singular: dom.singular || (tie && (minus.singular || plus.singular)),
        tie,
        near_zero_var: jm1.abs() < ZERO_VAR_TOL,
    };
    if tie {
        let other = if dom.sign < 0 { plus } else { minus };
        flags.near_zero_var |= (other.var_nc / pre.2).abs() < ZERO_VAR_TOL;
    }
    Ok(Prediction {
        log_z: dom.log_z,
        dominant: dom.sign,
        mean_nc: dom.mean_nc,
        var_nc: dom.var_nc,
        minus,
        plus,
        flags,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LargeAlphaLimits {
    /// Limit of `-J_1`.
    pub log_z: f64,
    /// Limit of `-J_0`.
    pub mean: f64,
    /// Limit of `-alpha^2 J_{-1}`.
    pub var_scaled: f64,
}

/// Limits of the three window integrals as `alpha -> inf` with `beta > 0` fixed.
pub fn large_alpha_limits(beta: f64) -> Result<LargeAlphaLimits> {
    if !(beta > 0.0) {
        return Err(Error::Domain(format!("beta = {beta} must be positive")));
    }
    let l = beta.ln().max(0.0);
    Ok(LargeAlphaLimits {
        log_z: 4.0 / 3.0 * l.powf(1.5),
        mean: 2.0 * l.sqrt(),
        var_scaled: l.sqrt(),
    })
}

/// Sign-resolved log-Z difference `-J_1(-beta) - (-J_1(+beta))`.
pub fn dominance_gap(beta: f64, alpha: f64) -> Result<f64> {
    let plus = j_closed(JQuery::new(1, beta, alpha))?.re();
    let minus = j_closed(JQuery::new(1, -beta, alpha))?.re();
    Ok(plus - minus)
}

/// Right-hand side of the parametric crossover relation, before the `(-1)^r`.
fn crossover_rhs(r: u32, gamma: f64) -> Result<f64> {
    let eg = gamma.exp();
    let order = HalfOrder::ThreeHalves;
    let li_pos = li_half(order, Complex64::new(eg, 0.0), BranchSide::BelowCut)?;
    let li_neg = li_half(order, Complex64::new(-eg, 0.0), BranchSide::BelowCut)?;
    let mut total = (li_pos - li_neg) / (2.0 * PI.sqrt());
    let r = i64::from(r);
    for k in -r..=r {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * Complex64::new(-gamma, PI * k as f64).sqrt();
    }
    Ok(total.re)
}

/// The `r`-th crossover on the curve `log beta - alpha^2 = gamma`: returns
/// `(beta, alpha)` where the two signs of `beta` give equal log-Z integrals.
pub fn crossover(r: u32, gamma: f64) -> Result<(f64, f64)> {
    if !gamma.is_finite() {
        return Err(Error::Domain(format!("gamma = {gamma}")));
    }
    let sign = if r.is_multiple_of(2) { 1.0 } else { -1.0 };
    let alpha = sign * crossover_rhs(r, gamma)?;
    if !(alpha > 0.0) {
        return Err(Error::NoSolution(format!(
            "crossover {r} at gamma = {gamma} gives alpha = {alpha}"
        )));
    }
    let gap = |a: f64| dominance_gap((gamma + a * a).exp(), a);
    let tol = 1e-8;
    if gap(alpha)?.abs() < tol {
        return Ok(((gamma + alpha * alpha).exp(), alpha));
    }
    // Fall back to bisection on the gap along the same gamma curve.
    let g0 = gap(alpha)?;
    let mut step = 1e-6 * alpha.max(1e-3);
    let mut bracket = None;
    for _ in 0..40 {
        for cand in [alpha - step, alpha + step] {
            if cand > 0.0 && gap(cand)?.signum() != g0.signum() {
                bracket = Some(if cand < alpha { (cand, alpha) } else { (alpha, cand) });
                break;
            }
        }
        if bracket.is_some() {
            break;
        }
        step *= 2.0;
    }
    let (mut lo, mut hi) = bracket.ok_or_else(|| {
        Error::NoSolution(format!("no sign change near alpha = {alpha} for r = {r}"))
    })?;
    let glo = gap(lo)?;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let gm = gap(mid)?;
        if gm.abs() < tol * 1e-2 || hi - lo < 1e-15 * hi {
            lo = mid;
            hi = mid;
            break;
        }
        if gm.signum() == glo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let a = 0.5 * (lo + hi);
    Ok(((gamma + a * a).exp(), a))
}

/// Values of `alpha` at which the `+beta` and `-beta` spirals pass through `1`.
#[derive(Debug, Clone, PartialEq)]
pub struct NonanalyticityGrid {
    pub plus: Vec<f64>,
    pub minus: Vec<f64>,
}

pub fn nonanalyticity_grid(beta: f64, alpha_max: f64) -> Result<NonanalyticityGrid> {
    if !(beta > 1.0) {
        return Err(Error::Domain(format!("beta = {beta} must exceed 1")));
    }
    let spacing = PI / beta.ln().sqrt();
    let collect = |offset: f64| {
        (0..)
            .map(|k| (k as f64 + offset) * spacing)
            .take_while(|&a| a <= alpha_max)
            .collect::<Vec<_>>()
    };
    Ok(NonanalyticityGrid {
        plus: collect(0.0),
        minus: collect(0.5),
    })
}

/// Singular flags at each grid point, for checking against [`is_singular`].
pub fn grid_is_singular(beta: f64, grid: &NonanalyticityGrid) -> bool {
    grid.plus.iter().all(|&a| is_singular(beta, a)) && grid.minus.iter().all(|&a| is_singular(-beta, a))
}
