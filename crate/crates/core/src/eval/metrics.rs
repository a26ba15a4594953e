use crate::error::EvalError;
use crate::predictor::round_half_up;
use crate::scalar::Scalar;

/// Mean absolute error over `(predicted, actual)` pairs, on raw predictions.
pub fn mae<F: Scalar>(pairs: &[(F, F)]) -> Result<F, EvalError> {
    if pairs.is_empty() {
        return Err(EvalError::Empty);
    }
    Ok(pairs.iter().map(|&(p, y)| (p - y).abs()).sum::<F>() / F::of_usize(pairs.len()))
}

/// Percentage of pairs whose round-half-up prediction equals the label.
pub fn accuracy<F: Scalar>(pairs: &[(F, F)]) -> Result<F, EvalError> {
    accuracy_within(pairs, 0)
}

/// Percentage of pairs whose rounded prediction is within `tolerance` of the label.
pub fn accuracy_within<F: Scalar>(pairs: &[(F, F)], tolerance: u64) -> Result<F, EvalError> {
    if pairs.is_empty() {
        return Err(EvalError::Empty);
    }
    let hits = pairs
        .iter()
        .filter(|&&(p, y)| round_half_up(p.as_f64()).abs_diff(y.as_f64().round() as u64) <= tolerance)
        .count();
    Ok(F::of(100.0) * F::of_usize(hits) / F::of_usize(pairs.len()))
}

/// `(mean, sample standard deviation)`; the deviation is 0 for fewer than two values.
pub fn mean_std<F: Scalar>(values: &[F]) -> (F, F) {
    if values.is_empty() {
        return (F::nan(), F::nan());
    }
    let n = F::of_usize(values.len());
    let mean = values.iter().copied().sum::<F>() / n;
    if values.len() < 2 {
        return (mean, F::zero());
    }
    let var = values.iter().map(|&v| (v - mean) * (v - mean)).sum::<F>() / (n - F::one());
    (mean, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn fixtures() {
        assert_eq!(mae(&[(3.0, 4.0), (5.0, 5.0)]).unwrap(), 0.5);
        assert_eq!(mae(&[(0.0, 2.0), (0.0, 1.0), (0.0, 0.0)]).unwrap(), 1.0);
        assert_eq!(accuracy(&[(3.0, 3.0), (4.0, 5.0)]).unwrap(), 50.0);
        assert_eq!(accuracy(&[(1.0, 2.0), (3.0, 2.0), (8.0, 7.0)]).unwrap(), 0.0);
        assert_eq!(accuracy_within(&[(1.0, 2.0), (3.0, 2.0), (8.0, 7.0)], 1).unwrap(), 100.0);
        assert_eq!(accuracy(&[(2.5f32, 3.0)]).unwrap(), 100.0);
        assert_eq!(mae::<f64>(&[]), Err(EvalError::Empty));
        assert_eq!(accuracy::<f64>(&[]), Err(EvalError::Empty));
    }

    #[test]
    fn mean_and_sample_std() {
        let (m, s) = mean_std(&[41.0f64, 42.0, 43.0]);
        assert_eq!(m, 42.0);
        assert!((s - 1.0).abs() < 1e-12);
        assert_eq!(mean_std(&[5.0]), (5.0, 0.0));
    }

    proptest! {
        #[test]
        fn permutation_invariant(
            mut pairs in prop::collection::vec((0.0f64..30.0, 0u32..30), 1..40),
            seed in any::<u64>(),
        ) {
            let as_f: Vec<(f64, f64)> = pairs.iter().map(|&(p, y)| (p, y as f64)).collect();
            let (m0, a0) = (mae(&as_f).unwrap(), accuracy(&as_f).unwrap());
            use rand::{seq::SliceRandom, SeedableRng};
            pairs.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let shuffled: Vec<(f64, f64)> = pairs.iter().map(|&(p, y)| (p, y as f64)).collect();
            prop_assert!((mae(&shuffled).unwrap() - m0).abs() < 1e-9);
            prop_assert_eq!(accuracy(&shuffled).unwrap(), a0);
        }
    }
}
