/// Per-source utility `w ln(r + 1)`.
pub fn utility(r: usize, w: f64) -> f64 {
    w * (r as f64).ln_1p()
}

/// Frame reward: mean over sources of `w ln(r^(i) + 1)`.
pub fn utility_of_counts(counts: &[usize], w: f64) -> f64 {
    if counts.is_empty() {
        return 0.0;
    }
    counts.iter().map(|&r| utility(r, w)).sum::<f64>() / counts.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nothing_decoded_is_zero() {
        assert_eq!(utility_of_counts(&[0, 0, 0], 3.0), 0.0);
    }

    #[test]
    fn direct_evaluation() {
        assert!((utility_of_counts(&[7], 1.0) - 8f64.ln()).abs() < 1e-15);
        assert!((utility_of_counts(&[7], 1.0) - 2.0794).abs() < 1e-4);
        let two = utility_of_counts(&[1, 3], 2.0);
        assert!((two - (2f64.ln() + 4f64.ln())).abs() < 1e-15);
        assert!((two - 2.0794).abs() < 1e-4);
    }
}
