//! Parameter sweeps over aspect ratio, resonance offset and criticality,
//! and their CSV / JSON-lines serialisation.

use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;

use crate::error::{Error, Result};
use crate::kasteleyn::{log_z_total, moments_exact, TorusParams};
use crate::resonance::{
    aspect, best_rational, derive_params, dominance_gap, nonanalyticity_grid, predict_at,
    Prediction,
};

pub const COLUMNS: [&str; 14] = [
    "m",
    "n",
    "p",
    "q",
    "alpha",
    "logAq",
    "log_z_exact",
    "log_z_theory",
    "mean_nc_exact",
    "mean_nc_theory",
    "var_nc_exact",
    "var_nc_theory",
    "dominant",
    "flags",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flag {
    Singular,
    Tie,
    NearZeroVar,
    UnreliableCumulant,
}

impl Flag {
    pub fn as_str(self) -> &'static str {
        match self {
            Flag::Singular => "singular",
            Flag::Tie => "tie",
            Flag::NearZeroVar => "near-zero-var",
            Flag::UnreliableCumulant => "unreliable-cumulant",
        }
    }

    pub fn parse(s: &str) -> Option<Flag> {
        [Flag::Singular, Flag::Tie, Flag::NearZeroVar, Flag::UnreliableCumulant]
            .into_iter()
            .find(|f| f.as_str() == s)
    }
}

/// One output row. Statistics are unnormalised (`log Z`, `<N_c>`,
/// `Var N_c`); divide by powers of `mn` for the scaled curves.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScanRecord {
    pub m: usize,
    pub n: usize,
    pub p: Option<u64>,
    pub q: Option<u64>,
    pub alpha: Option<f64>,
    pub log_aq: Option<f64>,
    pub log_z_exact: Option<f64>,
    pub log_z_theory: Option<f64>,
    pub mean_nc_exact: Option<f64>,
    pub mean_nc_theory: Option<f64>,
    pub var_nc_exact: Option<f64>,
    pub var_nc_theory: Option<f64>,
    pub dominant: Option<i8>,
    pub flags: Vec<Flag>,
}

fn fmt_f(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.16e}")).unwrap_or_default()
}

fn fmt_u(x: Option<u64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

impl ScanRecord {
    fn push_flag(&mut self, f: Flag) {
        if !self.flags.contains(&f) {
            self.flags.push(f);
            self.flags.sort();
        }
    }

    pub fn flags_string(&self) -> String {
        self.flags.iter().map(|f| f.as_str()).collect::<Vec<_>>().join(";")
    }

    /// Fields in [`COLUMNS`] order, floats with 17 significant digits.
    pub fn fields(&self) -> Vec<String> {
        vec![
            self.m.to_string(),
            self.n.to_string(),
            fmt_u(self.p),
            fmt_u(self.q),
            fmt_f(self.alpha),
            fmt_f(self.log_aq),
            fmt_f(self.log_z_exact),
            fmt_f(self.log_z_theory),
            fmt_f(self.mean_nc_exact),
            fmt_f(self.mean_nc_theory),
            fmt_f(self.var_nc_exact),
            fmt_f(self.var_nc_theory),
            self.dominant.map(|d| d.to_string()).unwrap_or_default(),
            self.flags_string(),
        ]
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        let num = |x: Option<f64>| {
            x.and_then(serde_json::Number::from_f64)
                .map(serde_json::Value::Number)
                .unwrap_or(serde_json::Value::Null)
        };
        let int = |x: Option<u64>| x.map(serde_json::Value::from).unwrap_or(serde_json::Value::Null);
        map.insert("m".into(), self.m.into());
        map.insert("n".into(), self.n.into());
        map.insert("p".into(), int(self.p));
        map.insert("q".into(), int(self.q));
        map.insert("alpha".into(), num(self.alpha));
        map.insert("logAq".into(), num(self.log_aq));
        map.insert("log_z_exact".into(), num(self.log_z_exact));
        map.insert("log_z_theory".into(), num(self.log_z_theory));
        map.insert("mean_nc_exact".into(), num(self.mean_nc_exact));
        map.insert("mean_nc_theory".into(), num(self.mean_nc_theory));
        map.insert("var_nc_exact".into(), num(self.var_nc_exact));
        map.insert("var_nc_theory".into(), num(self.var_nc_theory));
        map.insert(
            "dominant".into(),
            self.dominant.map(serde_json::Value::from).unwrap_or(serde_json::Value::Null),
        );
        map.insert("flags".into(), self.flags_string().into());
        serde_json::Value::Object(map)
    }

    fn set_exact(&mut self, t: &TorusParams) {
        match exact_statistics(t) {
            Ok(ex) => {
                self.log_z_exact = Some(ex.log_z);
                self.mean_nc_exact = ex.mean;
                self.var_nc_exact = ex.var;
                if ex.mean.is_none() {
                    self.push_flag(Flag::UnreliableCumulant);
                }
            }
            Err(_) => self.push_flag(Flag::UnreliableCumulant),
        }
    }

    fn set_theory(&mut self, pred: &Prediction, sign: Option<i8>) {
        let b = match sign {
            Some(s) => *pred.branch(s),
            None => *pred.branch(pred.dominant),
        };
        let finite = |x: f64| x.is_finite().then_some(x);
        self.log_z_theory = finite(b.log_z);
        self.mean_nc_theory = finite(b.mean_nc);
        self.var_nc_theory = finite(b.var_nc);
        self.dominant = Some(pred.dominant);
        // With the dominant branch, flag a singularity on either curve.
        let singular = if sign.is_some() { b.singular } else { pred.minus.singular || pred.plus.singular };
        if singular {
            self.push_flag(Flag::Singular);
        }
        if pred.flags.tie {
            self.push_flag(Flag::Tie);
        }
        if pred.flags.near_zero_var {
            self.push_flag(Flag::NearZeroVar);
        }
    }
}

pub fn write_csv<W: Write>(out: W, records: &[ScanRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Inconsistent(format!("csv output: {e}"));
    w.write_record(COLUMNS).map_err(io)?;
    for r in records {
        w.write_record(r.fields()).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Inconsistent(format!("csv output: {e}")))
}

pub fn write_jsonl<W: Write>(mut out: W, records: &[ScanRecord]) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, &r.to_json())
            .map_err(|e| Error::Inconsistent(format!("json output: {e}")))?;
        writeln!(out).map_err(|e| Error::Inconsistent(format!("json output: {e}")))?;
    }
    Ok(())
}

/// Exact statistics; mean and variance are `None` when a cumulant is unreliable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactStatistics {
    pub log_z: f64,
    pub mean: Option<f64>,
    pub var: Option<f64>,
}

pub fn exact_statistics(t: &TorusParams) -> Result<ExactStatistics> {
    let log_z = log_z_total(t)?.log_abs;
    let (mean, var) = match moments_exact(t, 2) {
        Ok(mv) => (Some(mv.mean()), Some(mv.variance())),
        Err(Error::NearSingular(_) | Error::Degenerate) => (None, None),
        Err(e) => return Err(e),
    };
    Ok(ExactStatistics { log_z, mean, var })
}

/// `steps` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps <= 1 {
        return vec![(lo * hi).sqrt()];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..steps)
        .map(|i| {
            let t = i as f64 / (steps - 1) as f64;
            (a * (1.0 - t) + b * t).exp()
        })
        .collect()
}

/// `steps` evenly spaced points from `lo` to `hi` inclusive.
pub fn linear_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps <= 1 {
        return vec![0.5 * (lo + hi)];
    }
    (0..steps)
        .map(|i| {
            let t = i as f64 / (steps - 1) as f64;
            lo * (1.0 - t) + hi * t
        })
        .collect()
}

/// Integer `(m, n)` with `mn` closest to `area`, then `n/m` closest to `ratio`.
pub fn realize_aspect(area: u64, ratio: f64) -> Option<(usize, usize)> {
    if area == 0 || !(ratio > 0.0) {
        return None;
    }
    let ideal = (area as f64 / ratio).sqrt();
    let mut best: Option<(u64, f64, usize, usize)> = None;
    for m in [ideal.floor(), ideal.ceil()] {
        let m = m.max(1.0) as u64;
        let exact_n = area as f64 / m as f64;
        for n in [exact_n.floor(), exact_n.ceil()] {
            let n = n.max(1.0) as u64;
            let key = ((m * n).abs_diff(area), (n as f64 / m as f64 - ratio).abs());
            let better = match best {
                None => true,
                Some((d, r, _, _)) => key.0 < d || (key.0 == d && key.1 < r),
            };
            if better {
                best = Some((key.0, key.1, m as usize, n as usize));
            }
        }
    }
    best.map(|(_, _, m, n)| (m, n))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AspectScan {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub area: u64,
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub steps: usize,
    pub qmax: u64,
    /// Theory columns are filled only when `|alpha|` is below this.
    pub alpha_max: f64,
}

impl Default for AspectScan {
    fn default() -> Self {
        AspectScan {
            a: 1.0,
            b: 0.5,
            c: 0.5,
            area: 1_000_000,
            ratio_min: 0.8,
            ratio_max: 1.25,
            steps: 101,
            qmax: 20,
            alpha_max: 10.0,
        }
    }
}

/// Sweep the aspect ratio `n/m` at fixed area, exact route plus theory near
/// each best rational approximation.
pub fn scan_aspect(cfg: &AspectScan) -> Result<Vec<ScanRecord>> {
    TorusParams::new(1, 1, cfg.a, cfg.b, cfg.c)?;
    if cfg.area > 100_000_000 {
        return Err(Error::InvalidParams(format!("area {} above 1e8", cfg.area)));
    }
    let ratios = log_grid(cfg.ratio_min, cfg.ratio_max, cfg.steps);
    Ok(ratios.par_iter().map(|&ratio| aspect_point(cfg, ratio)).collect())
}

fn aspect_point(cfg: &AspectScan, ratio: f64) -> ScanRecord {
    let Some((m, n)) = realize_aspect(cfg.area, ratio) else {
        return ScanRecord::default();
    };
    let mut rec = ScanRecord {
        m,
        n,
        ..Default::default()
    };
    let t = TorusParams {
        m,
        n,
        a: cfg.a,
        b: cfg.b,
        c: cfg.c,
    };
    rec.set_exact(&t);
    let (p, q) = best_rational(aspect(&t), cfg.qmax);
    if p == 0 {
        return rec;
    }
    if let Ok(cp) = derive_params(&t, p, q) {
        rec.p = Some(p);
        rec.q = Some(q);
        rec.alpha = Some(cp.alpha);
        rec.log_aq = Some(cp.log_beta());
        if cp.alpha.abs() <= cfg.alpha_max {
            if let Ok(pred) = predict_at(&t, p, q, cp.alpha, cp.log_beta()) {
                rec.set_theory(&pred, None);
            }
        }
    }
    rec
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchChoice {
    Plus,
    Minus,
    Max,
}

impl BranchChoice {
    fn sign(self) -> Option<i8> {
        match self {
            BranchChoice::Plus => Some(1),
            BranchChoice::Minus => Some(-1),
            BranchChoice::Max => None,
        }
    }
}

/// Weights `(b, c)` with `a` fixed that realise a given `(alpha, log A^q)`
/// on an `m x n` torus near `p/q`.
pub fn weights_for(a: f64, m: usize, n: usize, p: u64, q: u64, alpha: f64, log_aq: f64) -> Result<(f64, f64)> {
    let (mf, nf, pf, qf) = (m as f64, n as f64, p as f64, q as f64);
    let mut b = 0.5 * a;
    for _ in 0..200 {
        let eps = 2.0 * std::f64::consts::PI.powi(2) * nf * a * b / (mf * mf * (a - b).powi(2));
        let width = (qf * eps).sqrt() / (std::f64::consts::PI * pf);
        let target = pf / qf * (1.0 + alpha * width);
        if !(target > 0.0) {
            return Err(Error::InvalidParams(format!("alpha = {alpha} is not realisable")));
        }
        // n b / (m (a - b)) = target
        let next = a * target * mf / (nf + target * mf);
        if (next - b).abs() <= 1e-15 * a {
            b = next;
            break;
        }
        b = next;
    }
    let c = (a - b) * (log_aq / (qf * nf)).exp();
    Ok((b, c))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaScan {
    pub a: f64,
    pub m: usize,
    pub n: usize,
    pub p: u64,
    pub q: u64,
    pub log_aq: f64,
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub steps: usize,
    pub branch: BranchChoice,
    /// Add exact values at the weights realising each `alpha`.
    pub exact: bool,
    /// Insert the nonanalyticity and crossover points into the sweep.
    pub markers: bool,
}

/// Theory curves against the resonance offset `alpha` at fixed `log A^q`.
pub fn scan_alpha(cfg: &AlphaScan) -> Result<Vec<ScanRecord>> {
    if cfg.m == 0 || cfg.n == 0 || cfg.p == 0 || cfg.q == 0 {
        return Err(Error::InvalidParams("sizes and p, q must be positive".into()));
    }
    let mut alphas = linear_grid(cfg.alpha_min, cfg.alpha_max, cfg.steps);
    if cfg.markers {
        alphas.extend(alpha_markers(cfg)?);
        alphas.sort_by(f64::total_cmp);
        alphas.dedup();
    }
    Ok(alphas
        .par_iter()
        .map(|&alpha| alpha_point(cfg, alpha))
        .collect())
}

/// Nonanalyticity points (for `A^q > 1`) and crossover points inside the range.
pub fn alpha_markers(cfg: &AlphaScan) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    if cfg.log_aq <= 0.0 {
        return Ok(out);
    }
    let beta = cfg.log_aq.exp();
    let grid = nonanalyticity_grid(beta, cfg.alpha_max.abs().max(cfg.alpha_min.abs()))?;
    let in_range = |a: f64| a >= cfg.alpha_min && a <= cfg.alpha_max;
    let mut push = |a: f64| {
        for s in [a, -a] {
            if in_range(s) && !(s == 0.0 && s.is_sign_negative()) {
                out.push(s);
            }
        }
    };
    for &a in grid.plus.iter().chain(&grid.minus) {
        push(a);
    }
    // Crossovers: sign changes of the dominance gap on a fine grid, refined by bisection.
    let fine = linear_grid(0.0, cfg.alpha_max.abs().max(cfg.alpha_min.abs()), 4 * cfg.steps.max(50));
    let gap = |a: f64| dominance_gap(beta, a).unwrap_or(f64::NAN);
    for w in fine.windows(2) {
        let (g0, g1) = (gap(w[0]), gap(w[1]));
        if !(g0.is_finite() && g1.is_finite()) || g0.signum() == g1.signum() {
            continue;
        }
        let (mut lo, mut hi, glo) = (w[0], w[1], g0);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if gap(mid).signum() == glo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        push(0.5 * (lo + hi));
    }
    Ok(out)
}

fn alpha_point(cfg: &AlphaScan, alpha: f64) -> ScanRecord {
    let mut rec = ScanRecord {
        m: cfg.m,
        n: cfg.n,
        p: Some(cfg.p),
        q: Some(cfg.q),
        alpha: Some(alpha),
        log_aq: Some(cfg.log_aq),
        ..Default::default()
    };
    let Ok((b, c)) = weights_for(cfg.a, cfg.m, cfg.n, cfg.p, cfg.q, alpha, cfg.log_aq) else {
        return rec;
    };
    let t = TorusParams {
        m: cfg.m,
        n: cfg.n,
        a: cfg.a,
        b,
        c,
    };
    if t.validate().is_err() {
        return rec;
    }
    if let Ok(pred) = predict_at(&t, cfg.p, cfg.q, alpha, cfg.log_aq) {
        rec.set_theory(&pred, cfg.branch.sign());
    }
    if cfg.exact {
        rec.set_exact(&t);
    }
    rec
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeltScan {
    pub a: f64,
    pub m: usize,
    pub n: usize,
    pub p: u64,
    pub q: u64,
    pub log_aq_min: f64,
    pub log_aq_max: f64,
    pub steps: usize,
}

/// Sweep `log A^q` through 0 at `alpha = 0`, theory with exact overlay.
pub fn scan_melt(cfg: &MeltScan) -> Result<Vec<ScanRecord>> {
    if cfg.m == 0 || cfg.n == 0 || cfg.p == 0 || cfg.q == 0 {
        return Err(Error::InvalidParams("sizes and p, q must be positive".into()));
    }
    let grid = linear_grid(cfg.log_aq_min, cfg.log_aq_max, cfg.steps);
    Ok(grid
        .par_iter()
        .map(|&log_aq| {
            let mut rec = ScanRecord {
                m: cfg.m,
                n: cfg.n,
                p: Some(cfg.p),
                q: Some(cfg.q),
                alpha: Some(0.0),
                log_aq: Some(log_aq),
                ..Default::default()
            };
            let Ok((b, c)) = weights_for(cfg.a, cfg.m, cfg.n, cfg.p, cfg.q, 0.0, log_aq) else {
                return rec;
            };
            let t = TorusParams {
                m: cfg.m,
                n: cfg.n,
                a: cfg.a,
                b,
                c,
            };
            if t.validate().is_err() {
                return rec;
            }
            if let Ok(pred) = predict_at(&t, cfg.p, cfg.q, 0.0, log_aq) {
                rec.set_theory(&pred, None);
            }
            rec.set_exact(&t);
            rec
        })
        .collect())
}
