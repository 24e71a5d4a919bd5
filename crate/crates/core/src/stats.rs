//! Small statistics helpers.

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Standard error of the mean of independent samples (`s / √n`, with the
/// `n - 1` sample variance). Zero for fewer than two samples.
pub fn standard_error(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1) as f64;
    (var / n as f64).sqrt()
}

/// Error of the mean of a correlated series, from the spread of
/// `n_batches` contiguous batch means. Trailing samples that do not fill a
/// batch are dropped.
pub fn batch_means_error(series: &[f64], n_batches: usize) -> f64 {
    let size = series.len() / n_batches;
    if size == 0 {
        return f64::NAN;
    }
    let batches: Vec<f64> = series
        .chunks_exact(size)
        .take(n_batches)
        .map(mean)
        .collect();
    standard_error(&batches)
}
