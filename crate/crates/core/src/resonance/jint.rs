//! Closed forms for `J_nu(beta, alpha) = int Li_nu(beta e^{2 i alpha x - x^2}) dx`
//! over the real line, `nu in {1, 0, -1}`, real `beta`.
//!
//! Shifting the contour to `Im x = alpha` leaves `sqrt(pi) Li_{nu+1/2}(beta
//! e^{-alpha^2})` plus one contribution for every sheet crossing of the
//! spiral `beta e^{2 i alpha x - x^2}` through the cut `[1, inf)`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::polylog::{gamma_half_integer, li_half, lindelof_regular, BranchSide, HalfOrder};

/// Relative band inside which a spiral is treated as passing through `1`.
pub const SINGULAR_TOL: f64 = 1e-9;

/// Below this `|alpha^2 - log beta|` the `k = 0` crossing is folded into the
/// main term analytically.
const FOLD_RADIUS: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JQuery {
    pub nu: i32,
    pub beta: f64,
    pub alpha: f64,
}

impl JQuery {
    pub fn new(nu: i32, beta: f64, alpha: f64) -> Self {
        JQuery { nu, beta, alpha }
    }
}

/// One crossing of the cut, or a conjugate pair of crossings already summed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchTerm {
    pub k: i64,
    pub partner: Option<i64>,
    pub value: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JResult {
    pub value: Complex64,
    pub main_term: Complex64,
    pub branch_terms: Vec<BranchTerm>,
    /// The spiral passes through `1`, where the integrand is singular.
    pub singular: bool,
}

impl JResult {
    pub fn re(&self) -> f64 {
        self.value.re
    }
}

fn half_order(nu: i32) -> Result<HalfOrder> {
    match nu {
        1 => Ok(HalfOrder::ThreeHalves),
        0 => Ok(HalfOrder::OneHalf),
        -1 => Ok(HalfOrder::MinusHalf),
        _ => Err(Error::UnsupportedOrder(format!("{nu} for the window integral"))),
    }
}

/// `arg beta` for real nonzero `beta`.
fn arg_of(beta: f64) -> f64 {
    if beta < 0.0 {
        PI
    } else {
        0.0
    }
}

/// Does the spiral for `(beta, alpha)` pass through `1`?
pub fn is_singular(beta: f64, alpha: f64) -> bool {
    let l = beta.abs().ln();
    if !(l >= 0.0) {
        return false;
    }
    let arg = arg_of(beta);
    let target = alpha * alpha * l;
    let tol = SINGULAR_TOL * (1.0 + target);
    let centre = (alpha.abs() * l.sqrt() - arg / 2.0) / PI;
    let lo = (-centre.abs() - 2.0).floor() as i64;
    let hi = (centre.abs() + 2.0).ceil() as i64;
    (lo..=hi).any(|k| {
        let y = PI * k as f64 + arg / 2.0;
        (target - y * y).abs() < tol
    })
}

/// Contribution of crossing `k` with `x = alpha^2 - log|beta|`, `y = 2 pi k + arg beta`.
fn crossing(nu: i32, alpha: f64, x: f64, y: f64) -> Complex64 {
    let e = if nu == 1 { 0.5 } else { f64::from(nu) - 0.5 };
    // On the real axis left of 0 the root is taken from above (x + i0).
    let pow = if y == 0.0 && x < 0.0 {
        Complex64::from_polar((-x).powf(e), PI * e)
    } else {
        Complex64::new(x, -y).powf(e)
    };
    if nu == 1 {
        2.0 * PI * (alpha - pow)
    } else {
        PI.sqrt() * gamma_half_integer((1 - 2 * nu) as i64) * pow
    }
}

/// Sum of crossings `k` and its mirror, which are complex conjugates.
fn crossing_pair(nu: i32, alpha: f64, x: f64, y: f64) -> Complex64 {
    if nu == 1 {
        let s = (2.0 * (x + x.hypot(y))).sqrt();
        Complex64::new(2.0 * PI * (2.0 * alpha - s), 0.0)
    } else {
        Complex64::new(2.0 * crossing(nu, alpha, x, y).re, 0.0)
    }
}

pub fn j_closed(query: JQuery) -> Result<JResult> {
    let JQuery { nu, beta, alpha } = query;
    let order = half_order(nu)?;
    if beta == 0.0 {
        let zero = Complex64::new(0.0, 0.0);
        return Ok(JResult {
            value: zero,
            main_term: zero,
            branch_terms: Vec::new(),
            singular: false,
        });
    }
    if !beta.is_finite() || !alpha.is_finite() {
        return Err(Error::Domain(format!("beta = {beta}, alpha = {alpha}")));
    }
    let alpha = alpha.abs();
    let l = beta.abs().ln();
    let x = alpha * alpha - l;
    let singular = is_singular(beta, alpha);
    let sqrt_pi = PI.sqrt();

    let mut branch_terms = Vec::new();
    let mut fold_k0 = false;
    if l > 0.0 {
        let reach = 4.0 * alpha * alpha * l;
        if beta > 0.0 {
            fold_k0 = x.abs() < FOLD_RADIUS;
            if !fold_k0 {
                branch_terms.push(BranchTerm {
                    k: 0,
                    partner: None,
                    value: crossing(nu, alpha, x, 0.0),
                });
            }
            let mut k = 1i64;
            loop {
                let y = 2.0 * PI * k as f64;
                if y * y > reach {
                    break;
                }
                branch_terms.push(BranchTerm {
                    k,
                    partner: Some(-k),
                    value: crossing_pair(nu, alpha, x, y),
                });
                k += 1;
            }
        } else {
            let mut k = 0i64;
            loop {
                let y = 2.0 * PI * k as f64 + PI;
                if y * y > reach {
                    break;
                }
                branch_terms.push(BranchTerm {
                    k,
                    partner: Some(-1 - k),
                    value: crossing_pair(nu, alpha, x, y),
                });
                k += 1;
            }
        }
    }

    let (main_term, mut value) = if fold_k0 {
        // Main term minus the k = 0 crossing, with their common singularity
        // at beta e^{-alpha^2} = 1 cancelled analytically.
        let regular = sqrt_pi * lindelof_regular(order, Complex64::new(-x, 0.0))?;
        let folded = if nu == 1 {
            regular - 2.0 * PI * alpha
        } else {
            regular
        };
        let k0 = crossing(nu, alpha, x, 0.0);
        branch_terms.insert(
            0,
            BranchTerm {
                k: 0,
                partner: None,
                value: k0,
            },
        );
        (folded + k0, folded)
    } else {
        let z = Complex64::new(beta.signum() * (l - alpha * alpha).exp(), 0.0);
        let main = match li_half(order, z, BranchSide::BelowCut) {
            Ok(v) => sqrt_pi * v,
            // The spiral starts at its pole; reported through `singular`.
            Err(Error::Pole(_)) if singular => Complex64::new(f64::INFINITY, 0.0),
            Err(e) => return Err(e),
        };
        (main, main)
    };
    let skip = usize::from(fold_k0);
    for t in &branch_terms[skip..] {
        value -= t.value;
    }
    Ok(JResult {
        value,
        main_term,
        branch_terms,
        singular,
    })
}
