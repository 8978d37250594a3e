//! Polylogarithms of integer order `nu <= 1`: `-log(1-z)` and the rational
//! functions obtained from it by repeated `z d/dz`.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::BranchSide;
use crate::error::{Error, Result};

/// Deepest supported order; `1 - lmax` for the eighth cumulant.
pub const MIN_INTEGER_ORDER: i32 = -12;

/// `log(1 + w)` without cancellation for small `w`.
pub fn log1p_complex(w: Complex64) -> Complex64 {
    let re = if w.norm() < 0.5 {
        0.5 * (2.0 * w.re + w.norm_sqr()).ln_1p()
    } else {
        (1.0 + w.re).hypot(w.im).ln()
    };
    Complex64::new(re, w.im.atan2(1.0 + w.re))
}

fn on_cut(z: Complex64) -> bool {
    z.im == 0.0 && z.re > 1.0
}

/// Eulerian numbers `E(j, k)`, `k = 0..j-1`.
fn eulerian_row(j: usize) -> Vec<f64> {
    let mut row = vec![1.0];
    for n in 2..=j {
        let mut next = vec![0.0; n];
        for k in 0..n {
            let keep = if k < row.len() { (k + 1) as f64 * row[k] } else { 0.0 };
            let bump = if k >= 1 { (n - k) as f64 * row[k - 1] } else { 0.0 };
            next[k] = keep + bump;
        }
        row = next;
    }
    row
}

fn rational_inside(j: usize, z: Complex64) -> Complex64 {
    let one_minus = Complex64::new(1.0, 0.0) - z;
    if j == 0 {
        return z / one_minus;
    }
    let row = eulerian_row(j);
    let mut poly = Complex64::new(0.0, 0.0);
    for coeff in row.iter().rev() {
        poly = poly * z + coeff;
    }
    z * poly / one_minus.powi(j as i32 + 1)
}

fn check_order(nu: i32) -> Result<()> {
    if !(MIN_INTEGER_ORDER..=1).contains(&nu) {
        return Err(Error::UnsupportedOrder(nu.to_string()));
    }
    Ok(())
}

/// Principal-branch `Li_nu(z)` for integer `nu <= 1`.
pub fn li_int(nu: i32, z: Complex64) -> Result<Complex64> {
    check_order(nu)?;
    if z == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole(format!("Li_{nu}(1)")));
    }
    if nu == 1 {
        if on_cut(z) {
            return Err(Error::Domain(format!(
                "Li_1({}) lies on the cut; a side is required",
                z.re
            )));
        }
        return Ok(-log1p_complex(-z));
    }
    let j = (-nu) as usize;
    if z.norm() <= 1.0 {
        return Ok(rational_inside(j, z));
    }
    let inv = rational_inside(j, z.inv());
    Ok(if j == 0 {
        -1.0 - inv
    } else if j % 2 == 1 {
        inv
    } else {
        -inv
    })
}

/// `Li_nu(z)` for integer `nu <= 1`, taking the limit from `side` on `[1, inf)`.
pub fn li_int_sided(nu: i32, z: Complex64, side: BranchSide) -> Result<Complex64> {
    if nu == 1 && on_cut(z) {
        let im = match side {
            BranchSide::AboveCut => PI,
            BranchSide::BelowCut => -PI,
        };
        return Ok(Complex64::new(-(z.re - 1.0).ln(), im));
    }
    li_int(nu, z)
}

/// `Li_nu(exp(log_w))` for `nu <= 0` without forming `exp(log_w)` when it would overflow.
pub fn li_int_exp(nu: i32, log_w: Complex64) -> Result<Complex64> {
    check_order(nu)?;
    if nu == 1 {
        return Err(Error::UnsupportedOrder("1 in exponential form".into()));
    }
    let j = (-nu) as usize;
    if log_w.re <= 0.0 {
        return li_int(nu, log_w.exp());
    }
    let inv = rational_inside(j, (-log_w).exp());
    Ok(if j == 0 {
        -1.0 - inv
    } else if j % 2 == 1 {
        inv
    } else {
        -inv
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn examples() {
        assert_eq!(li_int(1, c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert!((li_int(0, c(0.5, 0.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        assert!((li_int(-1, c(-1.0, 0.0)).unwrap() - c(-0.25, 0.0)).norm() < 1e-15);
        let partial: f64 = (1..200_000)
            .map(|n| if n % 2 == 0 { 1.0 } else { -1.0 } / n as f64)
            .sum();
        assert!((li_int(1, c(-1.0, 0.0)).unwrap().re - partial).abs() < 1e-5);
        assert!((li_int(1, c(-1.0, 0.0)).unwrap().re + 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        assert!(matches!(li_int(0, c(1.0, 0.0)), Err(Error::Pole(_))));
        assert!(matches!(li_int(1, c(3.0, 0.0)), Err(Error::Domain(_))));
        assert!(matches!(li_int(2, c(0.1, 0.0)), Err(Error::UnsupportedOrder(_))));
    }

    #[test]
    fn low_orders_closed_forms() {
        let z = c(0.3, -0.7);
        let one = c(1.0, 0.0);
        let li2 = z * (one + z) / (one - z).powi(3);
        assert!((li_int(-2, z).unwrap() - li2).norm() < 1e-14);
        let li3 = z * (one + 4.0 * z + z * z) / (one - z).powi(4);
        assert!((li_int(-3, z).unwrap() - li3).norm() < 1e-14);
    }

    #[test]
    fn series_agrees_inside_disk() {
        let z = c(0.2, 0.35);
        for nu in -5..=1 {
            let mut sum = c(0.0, 0.0);
            let mut zk = z;
            for k in 1..400 {
                sum += zk * (k as f64).powi(-nu);
                zk *= z;
            }
            let v = li_int(nu, z).unwrap();
            assert!((v - sum).norm() < 1e-12 * (1.0 + sum.norm()), "nu={nu}");
        }
    }

    #[test]
    fn cut_sides() {
        let above = li_int_sided(1, c(2.5, 0.0), BranchSide::AboveCut).unwrap();
        let below = li_int_sided(1, c(2.5, 0.0), BranchSide::BelowCut).unwrap();
        assert!((above - below - c(0.0, 2.0 * PI)).norm() < 1e-15);
        let near = li_int(1, c(2.5, 1e-12)).unwrap();
        assert!((near - above).norm() < 1e-9);
    }

    #[test]
    fn exponential_form_handles_huge_arguments() {
        let v = li_int_exp(-1, c(800.0, 0.3)).unwrap();
        assert!(v.is_finite() && v.norm() < 1e-300);
        let w = c(3.0, 0.4);
        for nu in -6..=0 {
            let direct = li_int(nu, w.exp()).unwrap();
            let viaexp = li_int_exp(nu, w).unwrap();
            assert!((direct - viaexp).norm() < 1e-12 * (1.0 + direct.norm()));
        }
        // Li_0(e^L) -> -1 as L -> inf.
        let big = li_int_exp(0, c(900.0, 0.0)).unwrap();
        assert!((big + 1.0).norm() < 1e-15);
    }

    proptest! {
        #[test]
        fn derivative_chain(re in -3.0f64..3.0, im in 0.2f64..3.0, nu in -4i32..=1) {
            let z = c(re, im);
            let h = 1e-5;
            let up = li_int(nu, z * (1.0 + h)).unwrap();
            let dn = li_int(nu, z * (1.0 - h)).unwrap();
            let fd = (up - dn) / (2.0 * h);
            let exact = li_int(nu - 1, z).unwrap();
            prop_assert!((fd - exact).norm() < 1e-6 * (1.0 + exact.norm()));
        }

        #[test]
        fn conjugate_symmetry(re in -5.0f64..5.0, im in 0.01f64..5.0, nu in -6i32..=1) {
            let z = c(re, im);
            let a = li_int(nu, z.conj()).unwrap();
            let b = li_int(nu, z).unwrap().conj();
            prop_assert!((a - b).norm() <= 1e-13 * (1.0 + a.norm()));
        }
    }
}
