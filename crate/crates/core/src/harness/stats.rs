use crate::concentration::quantile;
use crate::csv::fmt_f64;
use crate::error::{Error, Result};

/// Summary of one metric over the trials of one experiment cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryStats {
    pub count: usize,
    pub mean: f64,
    pub median: f64,
    /// Exact order statistic at the configured quantile level.
    pub quantile: f64,
    pub stderr: f64,
    pub min: f64,
    pub max: f64,
}

impl SummaryStats {
    pub const HEADER: &'static str = "count,mean,median,quantile,stderr,min,max";

    pub fn from_samples(samples: &[f64], q: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidParameter("no samples to summarize".into()));
        }
        let m = samples.len();
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mean = samples.iter().sum::<f64>() / m as f64;
        let median = if m % 2 == 1 {
            sorted[m / 2]
        } else {
            0.5 * (sorted[m / 2 - 1] + sorted[m / 2])
        };
        let stderr = if m > 1 {
            let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (m - 1) as f64;
            (var / m as f64).sqrt()
        } else {
            0.0
        };
        Ok(Self {
            count: m,
            mean,
            median,
            quantile: quantile(&sorted, q)?,
            stderr,
            min: sorted[0],
            max: sorted[m - 1],
        })
    }

    pub fn csv_fields(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.count,
            fmt_f64(self.mean),
            fmt_f64(self.median),
            fmt_f64(self.quantile),
            fmt_f64(self.stderr),
            fmt_f64(self.min),
            fmt_f64(self.max)
        )
    }
}

/// One histogram bin `[left, right)` (the last bin is closed).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramBin {
    pub left: f64,
    pub right: f64,
    pub count: usize,
}

/// Equal-width histogram over `[lo, hi]`; values outside the range are
/// clipped into the end bins.
pub fn spectrum_histogram(
    values: &[f64],
    bins: usize,
    lo: f64,
    hi: f64,
) -> Result<Vec<HistogramBin>> {
    if bins == 0 || !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "cannot build {bins} bins over [{lo}, {hi}]"
        )));
    }
    let width = (hi - lo) / bins as f64;
    let edge = |k: usize| if k == bins { hi } else { lo + k as f64 * width };
    let mut counts = vec![0usize; bins];
    for &x in values {
        let mut k = if x <= lo {
            0
        } else if x >= hi {
            bins - 1
        } else {
            (((x - lo) / width).floor() as usize).min(bins - 1)
        };
        // Settle rounding at the edges so that bins are exactly left-closed.
        while k + 1 < bins && x >= edge(k + 1) {
            k += 1;
        }
        while k > 0 && x < edge(k) {
            k -= 1;
        }
        counts[k] += 1;
    }
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(k, count)| HistogramBin {
            left: edge(k),
            right: edge(k + 1),
            count,
        })
        .collect())
}

/// `bin_left,bin_right,count` rows.
pub fn histogram_csv(bins: &[HistogramBin]) -> String {
    let mut out = String::from("bin_left,bin_right,count\n");
    for b in bins {
        out.push_str(&format!(
            "{},{},{}\n",
            fmt_f64(b.left),
            fmt_f64(b.right),
            b.count
        ));
    }
    out
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::InvalidParameter(
            "need at least two (x, y) pairs".into(),
        ));
    }
    if xs.iter().chain(ys).any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::InvalidParameter(
            "log-log fit needs positive finite values".into(),
        ));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let m = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / m;
    let my = ly.iter().sum::<f64>() / m;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("x values are all equal".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(sxy / sxx)
}
