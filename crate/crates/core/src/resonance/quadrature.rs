//! Direct numerical evaluation of the window integrals, used as an
//! independent check on the closed forms.

use num_complex::Complex64;
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use super::jint::JQuery;
use crate::error::{Error, Result};
use crate::polylog::{li_int_sided, BranchSide};

/// Tail cutoff: `|beta| e^{-x^2} < e^{-TAIL_NATS}` outside the window.
const TAIL_NATS: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    pub abs_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions {
            abs_tol: 1e-10,
            max_panels: 20_000,
        }
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_0,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

struct Panel {
    lo: f64,
    hi: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: Fn(f64) -> Result<Complex64>>(f: &F, lo: f64, hi: f64) -> Result<Panel> {
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let fc = f(c)?;
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx)? + f(c + dx)?;
        k += pair * WGK[j];
        if j % 2 == 1 {
            g += pair * WG[j / 2];
        }
    }
    let value = k * h;
    let error = ((k - g) * h).norm();
    Ok(Panel { lo, hi, value, error })
}

/// Globally adaptive Gauss-Kronrod (7/15) over `[breaks[0], breaks[last]]`
/// with every listed breakpoint kept as a panel edge.
pub fn integrate<F: Fn(f64) -> Result<Complex64>>(
    f: F,
    breaks: &[f64],
    opts: QuadratureOptions,
) -> Result<Complex64> {
    let mut heap = BinaryHeap::new();
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            heap.push(kronrod(&f, w[0], w[1])?);
        }
    }
    let resum = |heap: &BinaryHeap<Panel>| {
        heap.iter()
            .fold((Complex64::new(0.0, 0.0), 0.0), |(s, e), p| (s + p.value, e + p.error))
    };
    let mut err = resum(&heap).1;
    let mut steps = 0usize;
    loop {
        if err <= opts.abs_tol {
            // Confirm against a fresh sum so running-total drift cannot fake convergence.
            let (t, e) = resum(&heap);
            if e <= opts.abs_tol {
                return Ok(t);
            }
            err = e;
        }
        if heap.len() >= opts.max_panels {
            return Err(Error::Budget { achieved: err });
        }
        let worst = heap.pop().expect("nonempty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            return Err(Error::Budget { achieved: err });
        }
        let left = kronrod(&f, worst.lo, mid)?;
        let right = kronrod(&f, mid, worst.hi)?;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        steps += 1;
        if steps.is_multiple_of(256) {
            err = resum(&heap).1;
        }
    }
}

/// Abscissae where the integrand may jump or blow up.
pub fn breakpoints(beta: f64, alpha: f64) -> Vec<f64> {
    let l = beta.abs().ln();
    let alpha = alpha.abs();
    let half_width = alpha + (l.max(0.0) + TAIL_NATS).sqrt();
    let mut pts = vec![-half_width, 0.0, half_width];
    if l > 0.0 {
        let inner = l.sqrt();
        pts.push(-inner);
        pts.push(inner);
        if alpha > 0.0 {
            let arg = if beta < 0.0 { PI } else { 0.0 };
            // Crossings of the positive axis: 2 alpha x + arg = -2 pi k.
            let kmax = ((2.0 * alpha * inner + arg) / (2.0 * PI)).ceil() as i64 + 1;
            for k in -kmax..=kmax {
                let x = -(2.0 * PI * k as f64 + arg) / (2.0 * alpha);
                if x.abs() < inner {
                    pts.push(x);
                }
            }
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// `int Li_nu(beta e^{2 i alpha x - x^2}) dx` by adaptive quadrature.
pub fn j_quadrature_with(query: JQuery, opts: QuadratureOptions) -> Result<Complex64> {
    let JQuery { nu, beta, alpha } = query;
    if !(-1..=1).contains(&nu) {
        return Err(Error::UnsupportedOrder(format!("{nu} for the window integral")));
    }
    if beta == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let l = beta.abs().ln();
    let arg = if beta < 0.0 { PI } else { 0.0 };
    let integrand = |x: f64| -> Result<Complex64> {
        let w = Complex64::from_polar((l - x * x).exp(), 2.0 * alpha * x + arg);
        // With alpha = 0 the spiral degenerates onto the real axis; the
        // limit alpha -> 0+ puts x > 0 above the cut.
        let w = if alpha == 0.0 { Complex64::new(beta.signum() * (l - x * x).exp(), 0.0) } else { w };
        let side = if x >= 0.0 {
            BranchSide::AboveCut
        } else {
            BranchSide::BelowCut
        };
        li_int_sided(nu, w, side)
    };
    integrate(integrand, &breakpoints(beta, alpha), opts)
}

pub fn j_quadrature(query: JQuery) -> Result<Complex64> {
    j_quadrature_with(query, QuadratureOptions::default())
}
