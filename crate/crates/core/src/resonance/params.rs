use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::kasteleyn::TorusParams;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Scaling variables of a torus near the rational aspect ratio `p/q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalParams {
    /// `2 pi^2 n a b / (m^2 (a-b)^2)`.
    pub eps: f64,
    /// `2 pi n b / (m (a-b))`.
    pub phi: f64,
    /// `log A = n (log c - log(a-b))`.
    pub log_a: f64,
    pub p: u64,
    pub q: u64,
    /// Resonance width `sqrt(q eps) / (pi p)`.
    pub width: f64,
    /// Offset from the resonance in units of `width`.
    pub alpha: f64,
    /// `q log A - alpha^2`.
    pub gamma: f64,
}

impl CriticalParams {
    /// `log beta = q log A`.
    pub fn log_beta(&self) -> f64 {
        self.q as f64 * self.log_a
    }

    /// `phi` rebuilt from `p, q, alpha, width`.
    pub fn phi_from_alpha(&self) -> f64 {
        2.0 * PI * self.p as f64 / self.q as f64 * (1.0 + self.alpha * self.width)
    }
}

pub fn derive_params(t: &TorusParams, p: u64, q: u64) -> Result<CriticalParams> {
    t.validate()?;
    if p == 0 || q == 0 || gcd(p, q) != 1 {
        return Err(Error::InvalidParams(format!("{p}/{q} is not a reduced positive fraction")));
    }
    let (m, n) = (t.m as f64, t.n as f64);
    let amb = t.a - t.b;
    let eps = 2.0 * PI * PI * n * t.a * t.b / (m * m * amb * amb);
    let phi = 2.0 * PI * n * t.b / (m * amb);
    let log_a = t.log_criticality();
    let (pf, qf) = (p as f64, q as f64);
    let width = (qf * eps).sqrt() / (PI * pf);
    let alpha = (phi / (2.0 * PI) * qf / pf - 1.0) / width;
    Ok(CriticalParams {
        eps,
        phi,
        log_a,
        p,
        q,
        width,
        alpha,
        gamma: qf * log_a - alpha * alpha,
    })
}

/// Aspect variable `phi / 2 pi = n b / (m (a - b))` that `p/q` approximates.
pub fn aspect(t: &TorusParams) -> f64 {
    t.n as f64 * t.b / (t.m as f64 * (t.a - t.b))
}

/// Closest fraction `p/q` to `x > 0` with `q <= qmax`, from the continued
/// fraction convergents and the last admissible semiconvergent; ties go to
/// the smaller denominator.
pub fn best_rational(x: f64, qmax: u64) -> (u64, u64) {
    assert!(x > 0.0 && x.is_finite(), "best_rational needs a positive finite x");
    let qmax = qmax.max(1);
    // Convergents h/k with (h_prev, k_prev) one step behind.
    let (mut h_prev, mut k_prev, mut h, mut k) = (1u64, 0u64, x.floor() as u64, 1u64);
    let mut rest = x - x.floor();
    loop {
        if rest <= 1e-15 * x.max(1.0) {
            return (h, k);
        }
        let inv = 1.0 / rest;
        let a = inv.floor();
        rest = inv - a;
        let a = a as u64;
        let k_next = a.saturating_mul(k).saturating_add(k_prev);
        if k_next > qmax {
            // Largest semiconvergent still inside the bound.
            let t = (qmax - k_prev) / k;
            let (hs, ks) = (h_prev + t * h, k_prev + t * k);
            if t > 0 && (x - hs as f64 / ks as f64).abs() < (x - h as f64 / k as f64).abs() {
                return (hs, ks);
            }
            return (h, k);
        }
        let h_next = a * h + h_prev;
        (h_prev, k_prev, h, k) = (h, k, h_next, k_next);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rational_examples() {
        assert_eq!(best_rational(0.5, 10), (1, 2));
        assert_eq!(best_rational((1.0 + 5f64.sqrt()) / 2.0, 5), (8, 5));
        assert_eq!(best_rational(1.0, 100), (1, 1));
        assert_eq!(best_rational(PI, 10), (22, 7));
        assert_eq!(best_rational(PI, 200), (355, 113));
    }

    #[test]
    fn critical_point_params() {
        let t = TorusParams::new(40, 40, 1.0, 0.5, 0.5).unwrap();
        let cp = derive_params(&t, 1, 1).unwrap();
        assert!((cp.phi - 2.0 * PI).abs() < 1e-15);
        assert!(cp.alpha.abs() < 1e-12);
        assert_eq!(cp.log_a, 0.0);
        assert!((cp.gamma + cp.alpha * cp.alpha).abs() < 1e-15);

        let n = 1000.0f64;
        let t = TorusParams::new(1000, 1000, 1.0, 0.5, 0.5 * (1.0 / n).exp()).unwrap();
        let cp = derive_params(&t, 1, 1).unwrap();
        assert!((cp.log_a - 1.0).abs() < 1e-12);
        assert!((cp.phi_from_alpha() - cp.phi).abs() < 1e-12 * cp.phi);
    }

    #[test]
    fn rejects_unreduced() {
        let t = TorusParams::new(4, 4, 1.0, 0.5, 0.5).unwrap();
        assert!(derive_params(&t, 2, 2).is_err());
        assert!(derive_params(&t, 0, 1).is_err());
    }

    proptest! {
        #[test]
        fn matches_exhaustive_search(x in 0.05f64..20.0, qmax in 1u64..60) {
            let (p, q) = best_rational(x, qmax);
            let err = (x - p as f64 / q as f64).abs();
            for qq in 1..=qmax {
                let pp = (x * qq as f64).round();
                let e = (x - pp / qq as f64).abs();
                prop_assert!(err <= e + 1e-15, "{p}/{q} loses to {pp}/{qq}");
            }
            prop_assert!(q <= qmax);
        }

        #[test]
        fn alpha_round_trip(m in 5usize..3000, n in 5usize..3000, b in 0.1f64..0.9, c in 0.1f64..2.0) {
            let t = TorusParams::new(m, n, 1.0, b, c).unwrap();
            let (p, q) = best_rational(aspect(&t), 20);
            prop_assume!(p > 0);
            let cp = derive_params(&t, p, q).unwrap();
            prop_assert!((cp.phi_from_alpha() - cp.phi).abs() <= 1e-12 * cp.phi);
        }
    }
}
