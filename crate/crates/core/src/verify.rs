//! Acceptance checks, each reporting a measured value against its target.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::time::Instant;

use crate::enumerate::{brute_moments, enumerate_covers, homology_table};
use crate::error::Result;
use crate::kasteleyn::{bell_coefficient, partitions};
use crate::kasteleyn::{log_z_sectors, log_z_total, moments_exact, Sector, TorusParams};
use crate::polylog::zeta;
use crate::resonance::{
    crossover, dominance_gap, is_singular, j_closed, j_quadrature, large_alpha_limits, JQuery,
};
use crate::scan::{scan_aspect, AspectScan};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub id: u32,
    pub name: String,
    pub measured: String,
    pub target: String,
    pub passed: bool,
}

impl CheckResult {
    fn new(id: u32, name: &str, measured: String, target: String, passed: bool) -> Self {
        CheckResult {
            id,
            name: name.to_string(),
            measured,
            target,
            passed,
        }
    }

    fn failed(id: u32, name: &str, target: &str, err: crate::Error) -> Self {
        CheckResult::new(id, name, format!("error: {err}"), target.to_string(), false)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub level: &'static str,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

pub fn run(level: Level) -> Report {
    let ids: &[u32] = match level {
        Level::Quick => &[1, 2, 3, 4, 7, 8, 9],
        Level::Full => &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10],
    };
    let checks: Vec<CheckResult> = ids.iter().map(|&id| check(id)).collect();
    Report {
        level: match level {
            Level::Quick => "quick",
            Level::Full => "full",
        },
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

pub fn check(id: u32) -> CheckResult {
    match id {
        1 => oracle_equivalence(),
        2 => one_by_one(),
        3 => moment_calculus(),
        4 => integral_identity(),
        5 => intro_convergence(),
        6 => gaussianity(),
        7 => dominance_positivity(),
        8 => large_alpha(),
        9 => crossovers(),
        10 => spike_shape(),
        _ => CheckResult::new(id, "unknown", String::new(), String::new(), false),
    }
}

pub const SMALL_TORI: [(usize, usize); 8] = [(1, 1), (2, 1), (1, 2), (2, 2), (3, 1), (1, 3), (3, 2), (2, 3)];

/// Five reproducible weight triples with `b < a`.
pub fn weight_triples() -> Vec<(f64, f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    (0..5)
        .map(|_| {
            let a = rng.gen_range(0.5..2.0);
            let b = a * rng.gen_range(0.05..0.95);
            let c = rng.gen_range(0.1..2.0);
            (a, b, c)
        })
        .collect()
}

fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / x.abs().max(y.abs()).max(f64::MIN_POSITIVE)
}

/// Worst relative errors (total, sector) over the small tori.
pub fn oracle_errors() -> Result<(f64, f64)> {
    let mut worst = (0.0f64, 0.0f64);
    for (m, n) in SMALL_TORI {
        for (a, b, c) in weight_triples() {
            let t = TorusParams::new(m, n, a, b, c)?;
            let table = homology_table(m, n, a, b, c)?;
            let total: f64 = enumerate_covers(m, n)?.iter().map(|s| s.weight(a, b, c)).sum();
            let z = log_z_total(&t)?;
            worst.0 = worst.0.max(rel(z.to_f64(), total));
            let sectors = log_z_sectors(&t)?;
            let scale = table.total();
            for (s, zs) in Sector::ALL.iter().zip(sectors) {
                let expect = table.sector_value(*s);
                worst.1 = worst.1.max((zs.to_f64() - expect).abs() / scale);
            }
        }
    }
    Ok(worst)
}

fn oracle_equivalence() -> CheckResult {
    let name = "oracle equivalence on small tori";
    let target = "total and sectors < 1e-10 relative, < 5 s";
    let start = Instant::now();
    match oracle_errors() {
        Ok((tot, sec)) => {
            let secs = start.elapsed().as_secs_f64();
            CheckResult::new(
                1,
                name,
                format!("total {tot:.2e}, sectors {sec:.2e}, {secs:.2} s"),
                target.into(),
                tot < 1e-10 && sec < 1e-10 && secs < 5.0,
            )
        }
        Err(e) => CheckResult::failed(1, name, target, e),
    }
}

fn one_by_one() -> CheckResult {
    let name = "1x1 closed forms";
    let target = "Z, sectors and class table exact to 4 ulp";
    let run = || -> Result<f64> {
        let mut worst = 0.0f64;
        for (a, b, c) in weight_triples() {
            let t = TorusParams::new(1, 1, a, b, c)?;
            worst = worst.max(rel(log_z_total(&t)?.to_f64(), a + b + c));
            let expect = [a - b - c, a + b - c, a - b + c, a + b + c];
            for (zs, e) in log_z_sectors(&t)?.iter().zip(expect) {
                worst = worst.max((zs.to_f64() - e).abs() / (a + b + c));
            }
            let table = homology_table(1, 1, a, b, c)?;
            for (v, e) in table.n.iter().zip([a, b, c, 0.0]) {
                worst = worst.max((v - e).abs() / (a + b + c));
            }
        }
        Ok(worst)
    };
    match run() {
        Ok(w) => CheckResult::new(2, name, format!("{w:.2e}"), target.into(), w <= 4.0 * f64::EPSILON),
        Err(e) => CheckResult::failed(2, name, target, e),
    }
}

/// Coefficients of the complete Bell polynomials up to order 5, one entry
/// per partition (parts in decreasing order).
pub const BELL_TABLE: &[(&[u32], u64)] = &[
    (&[1], 1),
    (&[2], 1),
    (&[1, 1], 1),
    (&[3], 1),
    (&[2, 1], 3),
    (&[1, 1, 1], 1),
    (&[4], 1),
    (&[3, 1], 4),
    (&[2, 2], 3),
    (&[2, 1, 1], 6),
    (&[1, 1, 1, 1], 1),
    (&[5], 1),
    (&[4, 1], 5),
    (&[3, 2], 10),
    (&[3, 1, 1], 10),
    (&[2, 2, 1], 15),
    (&[2, 1, 1, 1], 10),
    (&[1, 1, 1, 1, 1], 1),
];

fn moment_calculus() -> CheckResult {
    let name = "moment calculus";
    let target = "mean/var vs enumeration < 1e-9 relative; Bell coefficients exact";
    let run = || -> Result<(f64, bool)> {
        let mut worst = 0.0f64;
        for (m, n) in SMALL_TORI {
            for (a, b, c) in weight_triples() {
                let t = TorusParams::new(m, n, a, b, c)?;
                let exact = moments_exact(&t, 2)?;
                let brute = brute_moments(m, n, a, b, c, 2)?;
                worst = worst.max(rel(exact.mean(), brute.mean()));
                let var_scale = brute.variance().abs().max(brute.mean().powi(2)).max(1e-300);
                worst = worst.max((exact.variance() - brute.variance()).abs() / var_scale);
            }
        }
        let mut bell_ok = BELL_TABLE.iter().all(|(p, c)| bell_coefficient(p) == *c);
        for l in 1..=5 {
            let count = BELL_TABLE.iter().filter(|(p, _)| p.iter().sum::<u32>() == l).count();
            bell_ok &= partitions(l).len() == count;
        }
        Ok((worst, bell_ok))
    };
    match run() {
        Ok((w, bell)) => CheckResult::new(
            3,
            name,
            format!("moments {w:.2e}, Bell table {}", if bell { "exact" } else { "mismatch" }),
            target.into(),
            w < 1e-9 && bell,
        ),
        Err(e) => CheckResult::failed(3, name, target, e),
    }
}

pub const GRID_BETAS: [f64; 6] = [
    0.3,
    0.9,
    1.0,
    std::f64::consts::E,
    std::f64::consts::E * std::f64::consts::E,
    54.598_150_033_144_236,
];
pub const GRID_ALPHAS: [f64; 5] = [0.0, 0.4, 1.0, 2.0, 5.0];

/// `(points compared, worst scaled difference)` of closed form vs quadrature.
pub fn integral_identity_errors() -> Result<(usize, f64)> {
    use rayon::prelude::*;
    let mut queries = Vec::new();
    for nu in [1, 0, -1] {
        for b in GRID_BETAS {
            for beta in [b, -b] {
                for alpha in GRID_ALPHAS {
                    if !is_singular(beta, alpha) {
                        queries.push(JQuery::new(nu, beta, alpha));
                    }
                }
            }
        }
    }
    let errs: Vec<f64> = queries
        .par_iter()
        .map(|&q| -> Result<f64> {
            let c = j_closed(q)?.value;
            let d = j_quadrature(q)?;
            Ok((c - d).norm() / (1.0 + c.norm()))
        })
        .collect::<Result<_>>()?;
    Ok((errs.len(), errs.into_iter().fold(0.0, f64::max)))
}

fn integral_identity() -> CheckResult {
    let name = "closed form vs quadrature";
    let target = ">= 150 points, |diff| <= 1e-6 (1 + |value|), < 60 s";
    let start = Instant::now();
    match integral_identity_errors() {
        Ok((count, worst)) => {
            let secs = start.elapsed().as_secs_f64();
            CheckResult::new(
                4,
                name,
                format!("{count} points, worst {worst:.2e}, {secs:.2} s"),
                target.into(),
                count >= 150 && worst <= 1e-6 && secs < 60.0,
            )
        }
        Err(e) => CheckResult::failed(4, name, target, e),
    }
}

/// Limits of `log Z (mn)^{-1/4}`, `<N_c> (mn)^{-3/4}` and `Var N_c (mn)^{-5/4}`
/// at `a = 1, b = c = 1/2` on square tori.
pub fn intro_constants() -> Result<(f64, f64, f64)> {
    let d = 2.0 * std::f64::consts::PI.sqrt();
    Ok((
        zeta(1.5)? * (1.0 - 2f64.powf(-0.5)) / d,
        zeta(0.5)? * (1.0 - 2f64.sqrt()) / d,
        zeta(-0.5)? * (1.0 - 2f64.powf(1.5)) / d,
    ))
}

pub const INTRO_SIZES: [usize; 4] = [200, 500, 1000, 1414];

/// Scaled exact statistics `(log Z, mean, var)` at `m = n`.
pub fn intro_scaled(m: usize) -> Result<(f64, f64, f64)> {
    let t = TorusParams::new(m, m, 1.0, 0.5, 0.5)?;
    let area = t.area();
    let log_z = log_z_total(&t)?.log_abs;
    let mv = moments_exact(&t, 2)?;
    Ok((log_z / area.powf(0.25), mv.mean() / area.powf(0.75), mv.variance() / area.powf(1.25)))
}

fn intro_convergence() -> CheckResult {
    let name = "convergence to the critical constants";
    let target = "log Z monotone, < 1% at 1414; mean < 2%; var < 5%; < 30 s";
    let start = Instant::now();
    let run = || -> Result<CheckResult> {
        let (cz, cm, cv) = intro_constants()?;
        let mut errs = Vec::new();
        let mut last = (0.0, 0.0, 0.0);
        for m in INTRO_SIZES {
            last = intro_scaled(m)?;
            errs.push(rel(last.0, cz));
        }
        let monotone = errs.windows(2).all(|w| w[1] < w[0]);
        let (ez, em, ev) = (rel(last.0, cz), rel(last.1, cm), rel(last.2, cv));
        let secs = start.elapsed().as_secs_f64();
        Ok(CheckResult::new(
            5,
            name,
            format!(
                "log Z {ez:.2e} ({}), mean {em:.2e}, var {ev:.2e}, {secs:.2} s",
                if monotone { "monotone" } else { "not monotone" }
            ),
            target.into(),
            monotone && ez < 0.01 && em < 0.02 && ev < 0.05 && secs < 30.0,
        ))
    };
    run().unwrap_or_else(|e| CheckResult::failed(5, name, target, e))
}

/// Standardised skewness and excess kurtosis at `a = 1, b = c = 1/2, m = n`.
pub fn shape_at(m: usize) -> Result<(f64, f64)> {
    let t = TorusParams::new(m, m, 1.0, 0.5, 0.5)?;
    let mv = moments_exact(&t, 4)?;
    Ok((mv.skewness(), mv.excess_kurtosis()))
}

fn gaussianity() -> CheckResult {
    let name = "Gaussian shape at m = n = 1000";
    let target = "|skew| < 0.05, |excess kurtosis| < 0.05";
    match shape_at(1000) {
        Ok((s, k)) => CheckResult::new(
            6,
            name,
            format!("skew {s:.4}, excess kurtosis {k:.4}"),
            target.into(),
            s.abs() < 0.05 && k.abs() < 0.05,
        ),
        Err(e) => CheckResult::failed(6, name, target, e),
    }
}

/// The `(beta, alpha)` points on which `-beta` must dominate.
pub fn dominance_domain() -> Vec<(f64, f64)> {
    let mut pts = Vec::new();
    for beta in [0.05, 0.1, 0.3, 0.5, 0.7, 0.9, 1.0] {
        for i in 0..=40 {
            pts.push((beta, 0.25 * f64::from(i)));
        }
    }
    for i in 1..=40 {
        pts.push(((0.1 * f64::from(i)).exp(), 0.0));
    }
    pts
}

/// Smallest dominance gap and smallest `-J_{-1}(-beta)`, both relative to
/// `-J_1(-beta)` at the same point, over the domain.
pub fn dominance_margins() -> Result<(f64, f64)> {
    let mut dom = f64::INFINITY;
    let mut pos = f64::INFINITY;
    for (beta, alpha) in dominance_domain() {
        let minus = -j_closed(JQuery::new(1, -beta, alpha))?.re();
        let gap = dominance_gap(beta, alpha)?;
        dom = dom.min(gap / minus.abs());
        let var = -j_closed(JQuery::new(-1, -beta, alpha))?.re();
        pos = pos.min(var / minus.abs());
    }
    Ok((dom, pos))
}

fn dominance_positivity() -> CheckResult {
    let name = "dominance of -beta and positive variance";
    let target = "relative margins > 1e-12 on every grid point";
    match dominance_margins() {
        Ok((d, p)) => CheckResult::new(
            7,
            name,
            format!("dominance {d:.3e}, positivity {p:.3e}"),
            target.into(),
            d > 1e-12 && p > 1e-12,
        ),
        Err(e) => CheckResult::failed(7, name, target, e),
    }
}

/// Relative deviations of the three integrals from their large-offset limits
/// at `alpha = 40, beta = e`, worst over both signs.
pub fn large_alpha_errors() -> Result<(f64, f64, f64)> {
    let beta = std::f64::consts::E;
    let alpha = 40.0;
    let lim = large_alpha_limits(beta)?;
    let mut out = (0.0f64, 0.0f64, 0.0f64);
    for b in [beta, -beta] {
        let j1 = -j_closed(JQuery::new(1, b, alpha))?.re();
        let j0 = -j_closed(JQuery::new(0, b, alpha))?.re();
        let jm = -alpha * alpha * j_closed(JQuery::new(-1, b, alpha))?.re();
        out.0 = out.0.max(rel(j1, lim.log_z));
        out.1 = out.1.max(rel(j0, lim.mean));
        out.2 = out.2.max(rel(jm, lim.var_scaled));
    }
    Ok(out)
}

fn large_alpha() -> CheckResult {
    let name = "large-offset limits";
    let target = "within 2%, 2%, 5%";
    match large_alpha_errors() {
        Ok((a, b, c)) => CheckResult::new(
            8,
            name,
            format!("{a:.2e}, {b:.2e}, {c:.2e}"),
            target.into(),
            a < 0.02 && b < 0.02 && c < 0.05,
        ),
        Err(e) => CheckResult::failed(8, name, target, e),
    }
}

pub const CROSSOVER_GAMMAS: [f64; 6] = [-4.0, -9.0, -16.0, 12.0, 20.0, 40.0];

/// Worst log-Z gap over the crossovers and worst relative deviation from
/// the large-`beta` location among those with `log beta >= 10`.
pub fn crossover_errors() -> Result<(f64, f64, usize)> {
    let mut gap = 0.0f64;
    let mut loc = 0.0f64;
    let mut located = 0;
    for r in 0..3u32 {
        for gamma in CROSSOVER_GAMMAS {
            let (beta, alpha) = crossover(r, gamma)?;
            gap = gap.max(dominance_gap(beta, alpha)?.abs());
            let lb = beta.ln();
            if lb >= 10.0 {
                let approx = (f64::from(r) / 2.0 + 0.25) * std::f64::consts::PI / lb.sqrt();
                loc = loc.max(rel(alpha, approx));
                located += 1;
            }
        }
    }
    Ok((gap, loc, located))
}

fn crossovers() -> CheckResult {
    let name = "crossover locations";
    let target = "gap < 1e-8; alpha within 5% of the large-beta form when log beta >= 10";
    match crossover_errors() {
        Ok((g, l, k)) => CheckResult::new(
            9,
            name,
            format!("gap {g:.2e}, location {l:.2e} over {k} points"),
            target.into(),
            g < 1e-8 && l < 0.05 && k > 0,
        ),
        Err(e) => CheckResult::failed(9, name, target, e),
    }
}

/// `(ratio, log Z (mn)^{-1/4})` along the default aspect sweep.
pub fn spike_curve() -> Result<Vec<(f64, f64)>> {
    let cfg = AspectScan {
        alpha_max: 0.0,
        ..AspectScan::default()
    };
    let recs = scan_aspect(&cfg)?;
    Ok(recs
        .iter()
        .map(|r| {
            let area = (r.m * r.n) as f64;
            (
                r.n as f64 / r.m as f64,
                r.log_z_exact.unwrap_or(f64::NAN) / area.powf(0.25),
            )
        })
        .collect())
}

fn spike_shape() -> CheckResult {
    let name = "resonant spike at ratio 1";
    let target = "global max nearest ratio 1; exceeds 0.95 and 1.05 by > 10% of range";
    let run = || -> Result<CheckResult> {
        let curve = spike_curve()?;
        let nearest = |x: f64| {
            curve
                .iter()
                .enumerate()
                .min_by(|a, b| (a.1 .0 - x).abs().total_cmp(&(b.1 .0 - x).abs()))
                .map(|(i, _)| i)
                .unwrap_or(0)
        };
        let (imax, _) = curve
            .iter()
            .enumerate()
            .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
            .unwrap_or((0, &(0.0, 0.0)));
        let floor = curve.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        let i1 = nearest(1.0);
        let peak = curve[i1].1;
        let range = curve[imax].1 - floor;
        let lift = (peak - curve[nearest(0.95)].1).min(peak - curve[nearest(1.05)].1);
        Ok(CheckResult::new(
            10,
            name,
            format!("argmax ratio {:.4}, lift {:.3} of range", curve[imax].0, lift / range),
            target.into(),
            imax == i1 && lift > 0.1 * range,
        ))
    };
    run().unwrap_or_else(|e| CheckResult::failed(10, name, target, e))
}
