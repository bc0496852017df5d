use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// One term of a scaled constant sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesEntry {
    pub n: usize,
    pub raw: f64,
    /// `n^γ · raw`.
    pub scaled: f64,
}

/// A sequence `n^γ · C_n` with strictly increasing `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticSeries {
    entries: Vec<SeriesEntry>,
    gamma: f64,
}

impl AsymptoticSeries {
    pub fn new(gamma: f64) -> Result<Self> {
        if !gamma.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "scaling exponent must be finite, got {gamma}"
            )));
        }
        Ok(AsymptoticSeries {
            entries: Vec::new(),
            gamma,
        })
    }

    /// Builds a series from `(n, raw)` pairs given in increasing `n`.
    pub fn from_raw(gamma: f64, pairs: impl IntoIterator<Item = (usize, f64)>) -> Result<Self> {
        let mut s = AsymptoticSeries::new(gamma)?;
        for (n, raw) in pairs {
            s.push(n, raw)?;
        }
        Ok(s)
    }

    /// Appends a term; `n` must exceed every index already present.
    pub fn push(&mut self, n: usize, raw: f64) -> Result<()> {
        if n == 0 {
            return Err(Error::InvalidArgument("series index must be positive".into()));
        }
        if let Some(last) = self.entries.last() {
            if n <= last.n {
                return Err(Error::InvalidArgument(format!(
                    "series indices must increase strictly ({n} after {})",
                    last.n
                )));
            }
        }
        if !raw.is_finite() {
            return Err(Error::InvalidArgument(format!("non-finite series value at n = {n}")));
        }
        let scaled = (n as f64).powf(self.gamma) * raw;
        self.entries.push(SeriesEntry { n, raw, scaled });
        Ok(())
    }

    pub fn entries(&self) -> &[SeriesEntry] {
        &self.entries
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn last(&self) -> Option<&SeriesEntry> {
        self.entries.last()
    }
}

/// An extrapolated limit of a scaled sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtrapolationResult {
    pub limit: f64,
    /// Spread of the limit across model orders.
    pub error_estimate: f64,
    /// Order `k` of the model `C + a₁/n + … + a_k/n^k` that was selected;
    /// `0` when the estimate is the sequence tail itself.
    pub model: usize,
    /// Root-mean-square fit residual of the selected model.
    pub residual: f64,
    /// `C` for orders `1..=max_order`.
    pub limits_by_order: Vec<f64>,
}

/// Number of trailing entries each model is fitted to.
pub const FIT_WINDOW: usize = 6;

/// Richardson extrapolation by least-squares fits of `C + Σ a_i / n^i`.
///
/// Each order `k ≤ max_order` is fitted to the (at most) six entries with the
/// largest `n`. The order with the smallest residual per degree of freedom
/// wins, preferring lower orders when residuals tie at the rounding level.
pub fn richardson(series: &AsymptoticSeries, max_order: usize) -> Result<ExtrapolationResult> {
    if !(1..=3).contains(&max_order) {
        return Err(Error::InvalidArgument(format!(
            "max_order must be 1..=3, got {max_order}"
        )));
    }
    let needed = max_order + 2;
    if series.len() < needed {
        return Err(Error::InsufficientEntries {
            needed,
            got: series.len(),
        });
    }
    let tail = &series.entries()[series.len().saturating_sub(FIT_WINDOW)..];
    let scale = tail.iter().map(|e| e.scaled.abs()).fold(0.0, f64::max);

    let mut fits = Vec::with_capacity(max_order);
    for k in 1..=max_order {
        fits.push(fit(tail, k)?);
    }
    let limits_by_order: Vec<f64> = fits.iter().map(|f| f.0).collect();

    let floor = 1e-14 * scale.max(f64::MIN_POSITIVE);
    let score = |(_, rms, dof): &(f64, f64, usize)| rms * (tail.len() as f64 / *dof as f64).sqrt();
    let best_score = fits.iter().map(score).fold(f64::INFINITY, f64::min);
    let chosen = fits
        .iter()
        .position(|f| score(f) <= 1.5 * best_score + floor)
        .expect("some order attains the minimum");

    let mut spread: f64 = 0.0;
    for a in &limits_by_order {
        for b in &limits_by_order {
            spread = spread.max((a - b).abs());
        }
    }
    Ok(ExtrapolationResult {
        limit: limits_by_order[chosen],
        error_estimate: spread,
        model: chosen + 1,
        residual: fits[chosen].1,
        limits_by_order,
    })
}

/// Least-squares fit of order `k`: returns `(C, rms residual, dof)`.
fn fit(tail: &[SeriesEntry], k: usize) -> Result<(f64, f64, usize)> {
    let m = tail.len();
    let a = DMatrix::from_fn(m, k + 1, |i, j| (tail[i].n as f64).powi(-(j as i32)));
    let b = DVector::from_iterator(m, tail.iter().map(|e| e.scaled));
    let svd = a.clone().svd(true, true);
    let x = svd
        .solve(&b, 1e-14)
        .map_err(|e| Error::Singular(format!("richardson fit: {e}")))?;
    let r = &a * &x - &b;
    let rms = (r.norm_squared() / m as f64).sqrt();
    Ok((x[0], rms, (m - k - 1).max(1)))
}

/// Extrapolation with graceful handling of short or constant sequences.
///
/// Constant sequences return their value with zero error; sequences too
/// short for `richardson` return `None`.
pub fn extrapolate(series: &AsymptoticSeries, max_order: usize) -> Option<ExtrapolationResult> {
    let first = series.entries().first()?.scaled;
    let scale = series.entries().iter().map(|e| e.scaled.abs()).fold(0.0, f64::max);
    if series
        .entries()
        .iter()
        .all(|e| (e.scaled - first).abs() <= 1e-14 * scale)
    {
        return Some(ExtrapolationResult {
            limit: first,
            error_estimate: 0.0,
            model: 0,
            residual: 0.0,
            limits_by_order: Vec::new(),
        });
    }
    let order = max_order.min(series.len().saturating_sub(2));
    if order == 0 {
        return None;
    }
    richardson(series, order).ok()
}

/// Tail estimate for geometrically convergent sequences: the last term, with
/// the last increment as its error.
pub fn tail_limit(series: &AsymptoticSeries) -> Option<ExtrapolationResult> {
    let e = series.entries();
    let last = e.last()?;
    let step = if e.len() >= 2 {
        (last.scaled - e[e.len() - 2].scaled).abs()
    } else {
        f64::INFINITY
    };
    Some(ExtrapolationResult {
        limit: last.scaled,
        error_estimate: step,
        model: 0,
        residual: 0.0,
        limits_by_order: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(f: impl Fn(f64) -> f64, ns: &[usize]) -> AsymptoticSeries {
        AsymptoticSeries::from_raw(0.0, ns.iter().map(|&n| (n, f(n as f64)))).unwrap()
    }

    #[test]
    fn first_order_model_is_exact() {
        let s = series(|n| 1.0 + 1.0 / n, &[4, 8, 16, 32, 64]);
        let r = richardson(&s, 2).unwrap();
        assert!((r.limit - 1.0).abs() < 1e-10);
        assert_eq!(r.model, 1);
    }

    #[test]
    fn second_order_model_is_exact() {
        let s = series(|n| 2.0 + 3.0 / n + 5.0 / (n * n), &[4, 8, 16, 32, 64, 128]);
        let r = richardson(&s, 3).unwrap();
        assert!((r.limit - 2.0).abs() < 1e-8);
    }

    #[test]
    fn constant_series() {
        let s = series(|_| 0.7, &[4, 8, 16, 32, 64]);
        let r = richardson(&s, 3).unwrap();
        assert!((r.limit - 0.7).abs() < 1e-12);
        assert!(r.error_estimate < 1e-12);
    }

    #[test]
    fn too_short() {
        let s = series(|n| 1.0 / n, &[4, 8, 16]);
        assert!(matches!(
            richardson(&s, 2),
            Err(Error::InsufficientEntries { needed: 4, got: 3 })
        ));
    }

    #[test]
    fn push_rejects_non_increasing() {
        let mut s = AsymptoticSeries::new(1.0).unwrap();
        s.push(4, 0.5).unwrap();
        assert!(s.push(4, 0.5).is_err());
        assert!(s.push(2, 0.5).is_err());
        assert_eq!(s.entries()[0].scaled, 2.0);
    }

    #[test]
    fn extrapolate_handles_short_constant_series() {
        let s = series(|_| 0.0, &[4, 8]);
        let r = extrapolate(&s, 2).unwrap();
        assert_eq!(r.limit, 0.0);
        assert!(extrapolate(&series(|n| 1.0 / n, &[4, 8]), 2).is_none());
    }
}
