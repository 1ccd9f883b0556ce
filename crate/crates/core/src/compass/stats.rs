use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::ensemble::EnsembleRecord;
use crate::error::{Error, Result};

pub fn mean_and_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Product-moment correlation coefficient.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Dimension { expected: x.len(), got: y.len() });
    }
    if x.len() < 2 {
        return Err(Error::UndefinedMeasure(format!("correlation of {} points", x.len())));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedMeasure("zero variance".into()));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

fn ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut r = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            r[k] = avg;
        }
        i = j + 1;
    }
    r
}

/// Rank correlation, ties get their average rank.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Dimension { expected: x.len(), got: y.len() });
    }
    pearson(&ranks(x), &ranks(y))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
    pub mean: f64,
    pub std: f64,
}

/// Uniform histogram over [0, 1]; values outside are clamped into the end bins.
pub fn histogram(values: &[f64], bins: usize) -> Result<Histogram> {
    if bins < 2 {
        return Err(Error::Config(format!("histogram needs at least 2 bins, got {bins}")));
    }
    let mut counts = vec![0usize; bins];
    for v in values {
        let b = ((v * bins as f64).floor().max(0.0) as usize).min(bins - 1);
        counts[b] += 1;
    }
    let edges = (0..=bins).map(|i| i as f64 / bins as f64).collect();
    let (mean, std) = mean_and_std(values);
    Ok(Histogram { edges, counts, mean, std })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExchangeConfig {
    pub j_min: f64,
    pub j_max: f64,
    pub bin_width: f64,
    /// Records with |J| below this form the low-exchange band.
    pub band: f64,
}

impl Default for ExchangeConfig {
    fn default() -> Self {
        Self { j_min: -10.0, j_max: 10.0, bin_width: 4.0, band: 2.0 }
    }
}

impl ExchangeConfig {
    pub fn n_bins(&self) -> Result<usize> {
        let n = ((self.j_max - self.j_min) / self.bin_width).round();
        if !(self.bin_width > 0.0 && n >= 1.0) {
            return Err(Error::Config("exchange bins must have positive width".into()));
        }
        Ok(n as usize)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JBin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    /// None when the bin is empty or its correlation is undefined.
    pub r: Option<f64>,
    pub mean_delta: Option<f64>,
    pub empty: bool,
}

/// Splits records by J into uniform bins; the last bin is closed on the right.
pub fn exchange_bins(records: &[EnsembleRecord], cfg: &ExchangeConfig) -> Result<Vec<JBin>> {
    let n = cfg.n_bins()?;
    let mut out = Vec::with_capacity(n);
    for b in 0..n {
        let lo = cfg.j_min + b as f64 * cfg.bin_width;
        let hi = lo + cfg.bin_width;
        let last = b + 1 == n;
        let sel: Vec<&EnsembleRecord> = records
            .iter()
            .filter(|r| r.j >= lo && (r.j < hi || (last && r.j <= hi)))
            .collect();
        let dy: Vec<f64> = sel.iter().map(|r| r.delta_y_s).collect();
        let cb: Vec<f64> = sel.iter().map(|r| r.c_bar).collect();
        out.push(JBin {
            lo,
            hi,
            count: sel.len(),
            r: pearson(&dy, &cb).ok(),
            mean_delta: (!sel.is_empty()).then(|| mean_and_std(&dy).0),
            empty: sel.is_empty(),
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BandCorrelation {
    pub k_d: f64,
    pub count: usize,
    pub r: Option<f64>,
}

/// Correlation restricted to |J| < band, one entry per K_d.
pub fn band_correlations(records: &[EnsembleRecord], k_d_list: &[f64], band: f64) -> Vec<BandCorrelation> {
    k_d_list
        .iter()
        .map(|&k_d| {
            let sel: Vec<&EnsembleRecord> =
                records.iter().filter(|r| r.k_d == k_d && r.j.abs() < band).collect();
            let dy: Vec<f64> = sel.iter().map(|r| r.delta_y_s).collect();
            let cb: Vec<f64> = sel.iter().map(|r| r.c_bar).collect();
            BandCorrelation { k_d, count: sel.len(), r: pearson(&dy, &cb).ok() }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KdStats {
    pub k_d: f64,
    pub count: usize,
    pub pearson: Option<f64>,
    pub spearman: Option<f64>,
    pub mean_delta_y_s: f64,
    pub std_delta_y_s: f64,
    pub mean_c_bar: f64,
    pub std_c_bar: f64,
    pub y_s: Histogram,
    pub y_t: Histogram,
    pub exchange: Vec<JBin>,
}

impl KdStats {
    /// Standard error of the mean singlet yield.
    pub fn y_s_standard_error(&self) -> f64 {
        self.y_s.std / (self.count as f64).sqrt()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleStats {
    pub per_k_d: Vec<KdStats>,
    /// Correlation between the per-K_d pairs (⟨⟨C̄⟩⟩, ⟨⟨δY_S⟩⟩).
    pub mean_pair_correlation: Option<f64>,
    pub band: Vec<BandCorrelation>,
    pub exchange_config: ExchangeConfig,
}

impl EnsembleStats {
    /// K_d values are taken in order of first appearance.
    pub fn compute(records: &[EnsembleRecord], bins: usize, exchange: &ExchangeConfig) -> Result<Self> {
        let mut k_d_list: Vec<f64> = Vec::new();
        for r in records {
            if !k_d_list.contains(&r.k_d) {
                k_d_list.push(r.k_d);
            }
        }
        if k_d_list.is_empty() {
            return Err(Error::UndefinedMeasure("no ensemble records".into()));
        }
        let mut per_k_d = Vec::with_capacity(k_d_list.len());
        for &k_d in &k_d_list {
            let sel: Vec<EnsembleRecord> = records.iter().filter(|r| r.k_d == k_d).copied().collect();
            let dy: Vec<f64> = sel.iter().map(|r| r.delta_y_s).collect();
            let cb: Vec<f64> = sel.iter().map(|r| r.c_bar).collect();
            let ys: Vec<f64> = sel.iter().map(|r| r.y_s).collect();
            let yt: Vec<f64> = sel.iter().map(|r| r.y_t).collect();
            let (mean_delta_y_s, std_delta_y_s) = mean_and_std(&dy);
            let (mean_c_bar, std_c_bar) = mean_and_std(&cb);
            per_k_d.push(KdStats {
                k_d,
                count: sel.len(),
                pearson: pearson(&dy, &cb).ok(),
                spearman: spearman(&dy, &cb).ok(),
                mean_delta_y_s,
                std_delta_y_s,
                mean_c_bar,
                std_c_bar,
                y_s: histogram(&ys, bins)?,
                y_t: histogram(&yt, bins)?,
                exchange: exchange_bins(&sel, exchange)?,
            });
        }
        let mc: Vec<f64> = per_k_d.iter().map(|s| s.mean_c_bar).collect();
        let md: Vec<f64> = per_k_d.iter().map(|s| s.mean_delta_y_s).collect();
        Ok(Self {
            mean_pair_correlation: pearson(&mc, &md).ok(),
            band: band_correlations(records, &k_d_list, exchange.band),
            per_k_d,
            exchange_config: *exchange,
        })
    }

    pub fn get(&self, k_d: f64) -> Option<&KdStats> {
        self.per_k_d.iter().find(|s| s.k_d == k_d)
    }

    pub fn report(&self) -> String {
        let opt = |v: Option<f64>| v.map_or_else(|| "undefined".to_string(), |x| format!("{x:.4}"));
        let mut s = String::new();
        let _ = writeln!(s, "K_d      n      r(dY,C)  rho_s    <<dY_S>>     <<C_bar>>    <<Y_S>>   sd(Y_S)   <<Y_T>>");
        for k in &self.per_k_d {
            let _ = writeln!(
                s,
                "{:<8} {:<6} {:<8} {:<8} {:<12.6e} {:<12.6} {:<9.5} {:<9.5} {:<9.5}",
                k.k_d,
                k.count,
                opt(k.pearson),
                opt(k.spearman),
                k.mean_delta_y_s,
                k.mean_c_bar,
                k.y_s.mean,
                k.y_s.std,
                k.y_t.mean
            );
        }
        let _ = writeln!(s, "\ncorrelation of mean pairs: {}", opt(self.mean_pair_correlation));
        let _ = writeln!(s, "\nexchange bins (width {}):", self.exchange_config.bin_width);
        for k in &self.per_k_d {
            let _ = writeln!(s, "  K_d = {}", k.k_d);
            for b in &k.exchange {
                if b.empty {
                    let _ = writeln!(s, "    J in [{:>5}, {:>5}): empty", b.lo, b.hi);
                } else {
                    let _ = writeln!(
                        s,
                        "    J in [{:>5}, {:>5}): n = {:<5} r = {:<9} <<dY_S>> = {:.6e}",
                        b.lo,
                        b.hi,
                        b.count,
                        opt(b.r),
                        b.mean_delta.unwrap_or(f64::NAN)
                    );
                }
            }
        }
        let _ = writeln!(s, "\n|J| < {}:", self.exchange_config.band);
        for b in &self.band {
            let _ = writeln!(s, "  K_d = {:<6} n = {:<5} r = {}", b.k_d, b.count, opt(b.r));
        }
        s
    }
}
