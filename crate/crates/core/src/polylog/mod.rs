//! Polylogarithms `Li_nu` for integer orders `nu <= 1` and the half-integer
//! orders `3/2`, `1/2`, `-1/2`, together with the zeta and gamma helpers
//! they rely on.

mod half;
mod integer;
mod zeta;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use half::{li_half, li_half_in, lindelof_regular, regime_for, Regime};
pub use integer::{li_int, li_int_exp, li_int_sided, log1p_complex, MIN_INTEGER_ORDER};
pub use zeta::{gamma, gamma_half_integer, hurwitz_zeta, ln_gamma, zeta};

/// Which limit to take when the argument sits on the cut `[1, inf)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BranchSide {
    /// Limit from `Im z > 0`.
    AboveCut,
    /// Limit from `Im z < 0`.
    BelowCut,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HalfOrder {
    ThreeHalves,
    OneHalf,
    MinusHalf,
}

impl HalfOrder {
    pub fn value(self) -> f64 {
        match self {
            HalfOrder::ThreeHalves => 1.5,
            HalfOrder::OneHalf => 0.5,
            HalfOrder::MinusHalf => -0.5,
        }
    }

    pub fn from_value(nu: f64) -> Result<Self> {
        match nu {
            1.5 => Ok(HalfOrder::ThreeHalves),
            0.5 => Ok(HalfOrder::OneHalf),
            -0.5 => Ok(HalfOrder::MinusHalf),
            _ => Err(Error::UnsupportedOrder(nu.to_string())),
        }
    }

    /// The order one below, if supported.
    pub fn lower(self) -> Option<Self> {
        match self {
            HalfOrder::ThreeHalves => Some(HalfOrder::OneHalf),
            HalfOrder::OneHalf => Some(HalfOrder::MinusHalf),
            HalfOrder::MinusHalf => None,
        }
    }

    fn index(self) -> usize {
        match self {
            HalfOrder::ThreeHalves => 0,
            HalfOrder::OneHalf => 1,
            HalfOrder::MinusHalf => 2,
        }
    }

    /// `Gamma(1 - nu)`.
    pub fn gamma_one_minus(self) -> f64 {
        gamma_half_integer((2.0 - 2.0 * self.value()) as i64)
    }

    /// `Gamma(nu)`.
    pub fn gamma(self) -> f64 {
        gamma_half_integer((2.0 * self.value()) as i64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolylogOrder {
    /// Any integer `<= 1`.
    Integer(i32),
    Half(HalfOrder),
}

impl PolylogOrder {
    pub fn from_value(nu: f64) -> Result<Self> {
        if nu.fract() == 0.0 {
            if nu > 1.0 || nu < f64::from(MIN_INTEGER_ORDER) {
                return Err(Error::UnsupportedOrder(nu.to_string()));
            }
            Ok(PolylogOrder::Integer(nu as i32))
        } else {
            HalfOrder::from_value(nu).map(PolylogOrder::Half)
        }
    }

    pub fn value(self) -> f64 {
        match self {
            PolylogOrder::Integer(k) => f64::from(k),
            PolylogOrder::Half(h) => h.value(),
        }
    }
}

/// `Li_nu(z)` for any supported order.
pub fn li(order: PolylogOrder, z: Complex64, side: BranchSide) -> Result<Complex64> {
    match order {
        PolylogOrder::Integer(k) => li_int_sided(k, z, side),
        PolylogOrder::Half(h) => li_half(h, z, side),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    const ORDERS: [HalfOrder; 3] = [HalfOrder::ThreeHalves, HalfOrder::OneHalf, HalfOrder::MinusHalf];

    // Reference values at 30 digits, rounded; on the real axis past 1 the
    // reference is the limit from below.
    const REFERENCE: [(f64, f64, f64, f64, f64); 21] = [
        (1.5, 0.7, 0.2, 0.917639795384161793, 0.422836756017728704),
        (1.5, -3.0, 1.0, -1.71299481630821885, 0.352197873035927516),
        (1.5, 5.0, -2.0, -0.657423425562822698, -3.92908328715593219),
        (1.5, -40.0, 0.0, -5.84661179946172029, 0.0),
        (1.5, 1000.0, 0.001, -12.9421462391734925, 9.31693923274383273),
        (1.5, 2.5, 0.0, 1.18400018990853629, -3.39329470091134911),
        (1.5, -0.9, 0.0, -0.703500757618609705, 0.0),
        (0.5, 0.7, 0.2, 1.15857457498972204, 0.905207956885151232),
        (0.5, -3.0, 1.0, -1.09479078404875018, 0.144073118726791376),
        (0.5, 5.0, -2.0, -1.68844373673625173, -1.25070865273128837),
        (0.5, -40.0, 0.0, -2.08795231477488076, 0.0),
        (0.5, 1000.0, 0.001, -3.02043083241813627, 0.674382566433390391),
        (0.5, 2.5, 0.0, -1.66033332054137751, -1.85164739905793896),
        (0.5, -0.9, 0.0, -0.565525948458652768, 0.0),
        (-0.5, 0.7, 0.2, 1.32406074471427883, 2.84129517018285582),
        (-0.5, -3.0, 1.0, -0.450923346667794797, -0.00166130250257821122),
        (-0.5, 5.0, -2.0, -0.365082709530587339, 0.372232891601422524),
        (-0.5, -40.0, 0.0, -0.322208030334348793, 0.0),
        (-0.5, 1000.0, 0.001, -0.201694069015480243, -0.0488134420211632959),
        (-0.5, 2.5, 0.0, -0.227195940595071543, 1.01040386781531224),
        (-0.5, -0.9, 0.0, -0.367132378291466358, 0.0),
    ];

    #[test]
    fn reference_values() {
        for (nu, re, im, vre, vim) in REFERENCE {
            let order = HalfOrder::from_value(nu).unwrap();
            let v = li_half(order, c(re, im), BranchSide::BelowCut).unwrap();
            let expect = c(vre, vim);
            let err = (v - expect).norm() / expect.norm();
            assert!(err < 1e-12, "Li_{nu}({re}+{im}i) = {v}, expected {expect}, rel {err:e}");
        }
    }

    #[test]
    fn examples() {
        let zero = li_half(HalfOrder::ThreeHalves, c(0.0, 0.0), BranchSide::AboveCut).unwrap();
        assert_eq!(zero, c(0.0, 0.0));

        let alt: f64 = {
            // Alternating series with averaged partial sums.
            let mut s = 0.0;
            let mut prev = 0.0;
            for n in 1..=200_000u32 {
                prev = s;
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                s += sign * f64::from(n).powf(-1.5);
            }
            0.5 * (s + prev)
        };
        let v = li_half(HalfOrder::ThreeHalves, c(-1.0, 0.0), BranchSide::AboveCut).unwrap();
        assert!((v.re - alt).abs() < 1e-9);
        assert!((v.re + 0.765_147_024_625_407_9).abs() < 1e-13);

        let direct: f64 = (1..200).map(|n| 0.5f64.powi(n) / f64::from(n).powf(1.5)).sum();
        let v = li_half(HalfOrder::ThreeHalves, c(0.5, 0.0), BranchSide::AboveCut).unwrap();
        assert!((v.re - direct).abs() < 1e-15);
        assert!((v.re - 0.624_837_020_819_913_9).abs() < 1e-14);
    }

    #[test]
    fn special_value_at_minus_one() {
        for order in ORDERS {
            let nu = order.value();
            let v = li_half(order, c(-1.0, 0.0), BranchSide::AboveCut).unwrap();
            let expect = (2f64.powf(1.0 - nu) - 1.0) * zeta(nu).unwrap();
            assert!((v.re - expect).abs() < 1e-10 && v.im.abs() < 1e-14);
        }
    }

    #[test]
    fn value_at_one() {
        let v = li_half(HalfOrder::ThreeHalves, c(1.0, 0.0), BranchSide::AboveCut).unwrap();
        assert!((v.re - 2.612_375_348_685_488).abs() < 1e-13);
        assert!(li_half(HalfOrder::OneHalf, c(1.0, 0.0), BranchSide::AboveCut).is_err());
    }

    #[test]
    fn cut_jump() {
        for order in ORDERS {
            for x in [1.01, 1.5, 2.5, 7.0, 60.0, 1e5, 1e15, 1e17, 1e30] {
                let z = c(x, 0.0);
                let above = li_half(order, z, BranchSide::AboveCut).unwrap();
                let below = li_half(order, z, BranchSide::BelowCut).unwrap();
                let nu = order.value();
                let jump = c(0.0, 2.0 * PI * x.ln().powf(nu - 1.0) / order.gamma());
                assert!(
                    (above - below - jump).norm() < 1e-9 * (1.0 + jump.norm()),
                    "{order:?} x={x}"
                );
                assert!((above.conj() - below).norm() < 1e-12 * (1.0 + above.norm()));
                // Approaching from just above the axis.
                let near = li_half(order, c(x, x * 1e-13), BranchSide::BelowCut).unwrap();
                assert!((near - above).norm() < 1e-6 * (1.0 + above.norm()), "{order:?} x={x}");
            }
        }
    }

    #[test]
    fn regimes_agree_where_they_overlap() {
        let side = BranchSide::AboveCut;
        for order in ORDERS {
            // Series and both expansions near |z| = 1/2.
            for k in 0..24 {
                let th = 2.0 * PI * k as f64 / 24.0;
                let z = Complex64::from_polar(0.45, th);
                let s = li_half_in(order, z, side, Regime::Series).unwrap();
                let p = li_half_in(order, z, side, Regime::PoleSubtracted).unwrap();
                assert!((s - p).norm() < 1e-9 * (1.0 + s.norm()));
                if z.ln().norm() <= 1.8 {
                    let l = li_half_in(order, z, side, Regime::Lindelof).unwrap();
                    assert!((s - l).norm() < 1e-9 * (1.0 + s.norm()));
                }
            }
            // Lindelof against the pole-subtracted form across its disk.
            for k in 0..24 {
                let th = 2.0 * PI * k as f64 / 24.0;
                let mu = Complex64::from_polar(1.7, th);
                let z = mu.exp();
                let l = li_half_in(order, z, side, Regime::Lindelof).unwrap();
                let p = li_half_in(order, z, side, Regime::PoleSubtracted).unwrap();
                assert!((l - p).norm() < 1e-9 * (1.0 + l.norm()));
            }
            // Pole-subtracted against the asymptotic series for large |z|.
            for lr in [32.0, 36.0, 40.0] {
                for k in 0..16 {
                    let th = -PI + 2.0 * PI * k as f64 / 16.0 + 0.1;
                    let z = Complex64::from_polar(f64::exp(lr), th);
                    let p = li_half_in(order, z, side, Regime::PoleSubtracted).unwrap();
                    let a = li_half_in(order, z, side, Regime::Asymptotic).unwrap();
                    assert!((p - a).norm() < 1e-9 * (1.0 + p.norm()), "{order:?} lr={lr} th={th}");
                }
                let z = c(f64::exp(lr), 0.0);
                for side in [BranchSide::AboveCut, BranchSide::BelowCut] {
                    let p = li_half_in(order, z, side, Regime::PoleSubtracted).unwrap();
                    let a = li_half_in(order, z, side, Regime::Asymptotic).unwrap();
                    assert!((p - a).norm() < 1e-9 * (1.0 + p.norm()));
                }
            }
        }
    }

    #[test]
    fn dispatch_and_orders() {
        assert_eq!(PolylogOrder::from_value(-3.0).unwrap(), PolylogOrder::Integer(-3));
        assert_eq!(
            PolylogOrder::from_value(0.5).unwrap(),
            PolylogOrder::Half(HalfOrder::OneHalf)
        );
        assert!(PolylogOrder::from_value(2.0).is_err());
        assert!(PolylogOrder::from_value(2.5).is_err());
        let v = li(PolylogOrder::Integer(1), c(3.0, 0.0), BranchSide::AboveCut).unwrap();
        assert!((v.im - PI).abs() < 1e-15);
    }

    fn arg_strategy() -> impl Strategy<Value = Complex64> {
        (-2.0f64..45.0, -3.1f64..3.1)
            .prop_map(|(lr, th)| Complex64::from_polar(lr.exp(), th))
            .prop_filter("off the cut", |z| z.im.abs() > 1e-6 * z.norm())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn conjugate_symmetry(z in arg_strategy(), i in 0usize..3) {
            let order = ORDERS[i];
            let a = li_half(order, z.conj(), BranchSide::AboveCut).unwrap();
            let b = li_half(order, z, BranchSide::AboveCut).unwrap().conj();
            prop_assert!((a - b).norm() <= 1e-12 * (1.0 + a.norm()));
        }

        #[test]
        fn derivative_chain(z in arg_strategy(), i in 0usize..2) {
            let order = ORDERS[i];
            let lower = order.lower().unwrap();
            let h = 1e-5;
            let side = BranchSide::AboveCut;
            let up = li_half(order, z * (1.0 + h), side).unwrap();
            let dn = li_half(order, z * (1.0 - h), side).unwrap();
            let fd = (up - dn) / (2.0 * h);
            let exact = li_half(lower, z, side).unwrap();
            prop_assert!((fd - exact).norm() < 1e-6 * (1.0 + exact.norm()),
                "fd {} exact {}", fd, exact);
        }

        #[test]
        fn replication(r in 0.0f64..0.98, th in -3.1f64..3.1, i in 0usize..3, qi in 0usize..3) {
            let order = ORDERS[i];
            let q = [2usize, 3, 5][qi];
            let z = Complex64::from_polar(r, th);
            let side = BranchSide::AboveCut;
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..q {
                let w = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / q as f64);
                acc += li_half(order, w * z, side).unwrap();
            }
            acc /= q as f64;
            let rhs = li_half(order, z.powu(q as u32), side).unwrap()
                * (q as f64).powf(-order.value());
            prop_assert!((acc - rhs).norm() < 1e-10 * (1.0 + rhs.norm()));
        }
    }
}
