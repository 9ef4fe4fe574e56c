use super::{mismatch, KernelError, Result, Tensor4};
use crate::fit::FitClass;

/// Lower bound on the per-channel standard deviation.
pub const SIGMA_FLOOR: f64 = 1e-5;

/// One-hot fit label over `slim, regular, loose, tapered, straight`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitLabel {
    one_hot: [f32; 5],
}

impl FitLabel {
    pub fn new(fit: FitClass) -> Self {
        let mut one_hot = [0.0; 5];
        one_hot[fit.index()] = 1.0;
        Self { one_hot }
    }

    pub fn from_one_hot(v: &[f32]) -> Result<Self> {
        let one_hot: [f32; 5] = v.try_into().map_err(|_| {
            KernelError::InvalidLabel(format!("expected 5 entries, got {}", v.len()))
        })?;
        let ones = one_hot.iter().filter(|&&x| x == 1.0).count();
        let zeros = one_hot.iter().filter(|&&x| x == 0.0).count();
        if ones != 1 || zeros != 4 {
            return Err(KernelError::InvalidLabel(format!(
                "{one_hot:?} is not one-hot"
            )));
        }
        Ok(Self { one_hot })
    }

    pub fn one_hot(&self) -> &[f32; 5] {
        &self.one_hot
    }

    pub fn fit(&self) -> FitClass {
        let i = self
            .one_hot
            .iter()
            .position(|&x| x == 1.0)
            .expect("one-hot");
        FitClass::ALL[i]
    }
}

/// Per-channel scale and shift.
#[derive(Debug, Clone, PartialEq)]
pub struct FiLMParams {
    pub gamma: Vec<f32>,
    pub beta: Vec<f32>,
}

impl FiLMParams {
    pub fn identity(channels: usize) -> Self {
        Self {
            gamma: vec![1.0; channels],
            beta: vec![0.0; channels],
        }
    }
}

/// Affine map from a [`FitLabel`] to FiLM parameters; `weight[c]` holds one
/// coefficient per fit class.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearFilmProjection {
    pub gamma_weight: Vec<[f32; 5]>,
    pub gamma_bias: Vec<f32>,
    pub beta_weight: Vec<[f32; 5]>,
    pub beta_bias: Vec<f32>,
}

impl LinearFilmProjection {
    /// Projection producing `γ = 1, β = 0` for every label.
    pub fn neutral(channels: usize) -> Self {
        Self {
            gamma_weight: vec![[0.0; 5]; channels],
            gamma_bias: vec![1.0; channels],
            beta_weight: vec![[0.0; 5]; channels],
            beta_bias: vec![0.0; channels],
        }
    }

    pub fn project(&self, label: &FitLabel) -> FiLMParams {
        let apply = |w: &[[f32; 5]], b: &[f32]| {
            w.iter()
                .zip(b)
                .map(|(row, bias)| {
                    bias + row
                        .iter()
                        .zip(label.one_hot())
                        .map(|(a, l)| a * l)
                        .sum::<f32>()
                })
                .collect()
        };
        FiLMParams {
            gamma: apply(&self.gamma_weight, &self.gamma_bias),
            beta: apply(&self.beta_weight, &self.beta_bias),
        }
    }
}

/// `γ·(h − μ)/σ + β` per channel, with `μ`, `σ` taken over batch and space.
pub fn film_modulate(h: &Tensor4, params: &FiLMParams) -> Result<Tensor4> {
    let [b, c, hh, w] = h.shape();
    if params.gamma.len() != c || params.beta.len() != c {
        return Err(mismatch(format!(
            "FiLM parameters have {}/{} entries for {c} channels",
            params.gamma.len(),
            params.beta.len()
        )));
    }
    let plane = hh * w;
    let n = (b * plane) as f64;
    let data = h.data();
    let mut stats = Vec::with_capacity(c);
    for ci in 0..c {
        let values = || (0..b).flat_map(move |bi| data[(bi * c + ci) * plane..][..plane].iter());
        let mean = values().map(|&v| v as f64).sum::<f64>() / n;
        let var = values().map(|&v| (v as f64 - mean).powi(2)).sum::<f64>() / n;
        stats.push((mean, var.sqrt().max(SIGMA_FLOOR)));
    }
    Ok(Tensor4::from_fn([b, c, hh, w], |idx| {
        let ci = idx[1];
        let (mean, sigma) = stats[ci];
        let g = params.gamma[ci] as f64;
        let be = params.beta[ci] as f64;
        (g * (h.get(idx) as f64 - mean) / sigma + be) as f32
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn channel_stats(t: &Tensor4, ci: usize) -> (f64, f64) {
        let [b, _, h, w] = t.shape();
        let mut vals = Vec::new();
        for bi in 0..b {
            for hi in 0..h {
                for wi in 0..w {
                    vals.push(t.get([bi, ci, hi, wi]) as f64);
                }
            }
        }
        let n = vals.len() as f64;
        let m = vals.iter().sum::<f64>() / n;
        (m, vals.iter().map(|v| (v - m).powi(2)).sum::<f64>() / n)
    }

    #[test]
    fn identity_params_standardize() {
        let h = Tensor4::from_fn([2, 3, 5, 4], |[b, c, y, x]| {
            ((b * 31 + c * 17 + y * 7 + x * 3) % 11) as f32 * (c as f32 + 1.0) + 4.0
        });
        let out = film_modulate(&h, &FiLMParams::identity(3)).unwrap();
        for ci in 0..3 {
            let (m, v) = channel_stats(&out, ci);
            assert!(
                m.abs() < 1e-5 && (v - 1.0).abs() < 1e-5,
                "channel {ci}: {m} {v}"
            );
        }
    }

    #[test]
    fn zero_gamma_gives_beta() {
        let h = Tensor4::from_fn([1, 2, 3, 3], |[_, c, y, x]| (c + y * x) as f32);
        let p = FiLMParams {
            gamma: vec![0.0, 0.0],
            beta: vec![-2.5, 7.0],
        };
        let out = film_modulate(&h, &p).unwrap();
        for idx in 0..9 {
            assert_eq!(out.data()[idx], -2.5);
            assert_eq!(out.data()[9 + idx], 7.0);
        }
    }

    #[test]
    fn constant_channel_uses_floor() {
        let h = Tensor4::from_fn([1, 1, 2, 2], |_| 3.0);
        let out = film_modulate(&h, &FiLMParams::identity(1)).unwrap();
        assert!(out.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn channel_mismatch() {
        let h = Tensor4::zeros([1, 2, 2, 2]);
        assert!(film_modulate(&h, &FiLMParams::identity(3)).is_err());
    }

    #[test]
    fn labels() {
        let l = FitLabel::new(FitClass::Tapered);
        assert_eq!(l.one_hot(), &[0.0, 0.0, 0.0, 1.0, 0.0]);
        assert_eq!(
            FitLabel::from_one_hot(l.one_hot()).unwrap().fit(),
            FitClass::Tapered
        );
        assert!(FitLabel::from_one_hot(&[1.0, 1.0, 0.0, 0.0, 0.0]).is_err());
        assert!(FitLabel::from_one_hot(&[0.5, 0.5, 0.0, 0.0, 0.0]).is_err());
        assert!(FitLabel::from_one_hot(&[1.0, 0.0]).is_err());

        let mut proj = LinearFilmProjection::neutral(2);
        proj.beta_weight[1][FitClass::Loose.index()] = 0.5;
        let p = proj.project(&FitLabel::new(FitClass::Loose));
        assert_eq!(p.gamma, vec![1.0, 1.0]);
        assert_eq!(p.beta, vec![0.0, 0.5]);
    }
}
