#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoPass {
    pub mean: f64,
    /// Unbiased; 0 for fewer than two samples.
    pub variance: f64,
}

/// Textbook two-pass mean and variance, with the mean correction term that
/// cancels the first-pass rounding error.
pub fn two_pass_mean_variance(xs: &[f64]) -> Option<TwoPass> {
    if xs.is_empty() {
        return None;
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return Some(TwoPass { mean, variance: 0.0 });
    }
    let (sq, lin) = xs.iter().fold((0.0, 0.0), |(sq, lin), &x| {
        let d = x - mean;
        (sq + d * d, lin + d)
    });
    Some(TwoPass {
        mean: mean + lin / n,
        variance: (sq - lin * lin / n) / (n - 1.0),
    })
}
