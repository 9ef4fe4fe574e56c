use super::{mismatch, Result, Tensor4};

/// Mean squared error between predicted and true noise, accumulated in `f64`.
pub fn injection_loss(pred_noise: &Tensor4, true_noise: &Tensor4) -> Result<f64> {
    if pred_noise.shape() != true_noise.shape() {
        return Err(mismatch(format!(
            "prediction {:?} vs target {:?}",
            pred_noise.shape(),
            true_noise.shape()
        )));
    }
    let sum: f64 = pred_noise
        .data()
        .iter()
        .zip(true_noise.data())
        .map(|(&a, &b)| {
            let d = a as f64 - b as f64;
            d * d
        })
        .sum();
    Ok(sum / pred_noise.data().len() as f64)
}
