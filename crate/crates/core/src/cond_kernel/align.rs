use super::{mismatch, KernelError, Result, Tensor4};

/// One level of a multi-scale feature pyramid.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleFeature {
    pub tensor: Tensor4,
    pub scale_id: usize,
}

/// Feature maps ordered coarse to fine; each level doubles the previous
/// level's height and width and all share one batch size.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleBundle {
    scales: Vec<ScaleFeature>,
}

impl ScaleBundle {
    pub fn new(scales: Vec<ScaleFeature>) -> Result<Self> {
        let first = scales
            .first()
            .ok_or_else(|| mismatch("empty scale bundle"))?;
        let batch = first.tensor.batch();
        for pair in scales.windows(2) {
            let (a, b) = (&pair[0].tensor, &pair[1].tensor);
            if b.batch() != batch || b.height() != 2 * a.height() || b.width() != 2 * a.width() {
                return Err(mismatch(format!(
                    "scale {} {:?} does not double scale {} {:?}",
                    pair[1].scale_id,
                    b.shape(),
                    pair[0].scale_id,
                    a.shape()
                )));
            }
        }
        Ok(Self { scales })
    }

    /// Convenience constructor numbering the scales `0..n`.
    pub fn from_tensors(tensors: Vec<Tensor4>) -> Result<Self> {
        Self::new(
            tensors
                .into_iter()
                .enumerate()
                .map(|(scale_id, tensor)| ScaleFeature { tensor, scale_id })
                .collect(),
        )
    }

    pub fn scales(&self) -> &[ScaleFeature] {
        &self.scales
    }

    pub fn len(&self) -> usize {
        self.scales.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scales.is_empty()
    }
}

/// Split alignment for U-Net try-on models: keeps the top (person) half of
/// every scale. Each scale must be exactly twice its target height with the
/// target width.
pub fn align_unet(bundle: &ScaleBundle, targets: &[(usize, usize)]) -> Result<ScaleBundle> {
    if targets.len() != bundle.len() {
        return Err(mismatch(format!(
            "{} target sizes for {} scales",
            targets.len(),
            bundle.len()
        )));
    }
    let scales = bundle
        .scales
        .iter()
        .zip(targets)
        .map(|(s, &(th, tw))| {
            let t = &s.tensor;
            if th == 0 || t.height() != 2 * th || t.width() != tw {
                return Err(mismatch(format!(
                    "scale {} is {}x{}, expected {}x{tw}",
                    s.scale_id,
                    t.height(),
                    t.width(),
                    2 * th
                )));
            }
            Ok(ScaleFeature {
                tensor: t.slice_rows(0, th)?,
                scale_id: s.scale_id,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ScaleBundle::new(scales)
}

/// Token sequence `(batch, tokens, channels)`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct TokenSeq {
    pub batch: usize,
    pub tokens: usize,
    pub channels: usize,
    pub data: Vec<f32>,
}

impl TokenSeq {
    pub fn get(&self, b: usize, t: usize, c: usize) -> f32 {
        self.data[(b * self.tokens + t) * self.channels + c]
    }
}

/// Bilinear resize with half-pixel centres (corner alignment off); source
/// coordinates are clamped to the valid range.
pub fn resize_bilinear(t: &Tensor4, out_h: usize, out_w: usize) -> Tensor4 {
    let [b, c, in_h, in_w] = t.shape();
    let taps = |out: usize, input: usize| -> Vec<(usize, usize, f64)> {
        (0..out)
            .map(|i| {
                let src = ((i as f64 + 0.5) * input as f64 / out as f64 - 0.5)
                    .clamp(0.0, (input - 1) as f64);
                let lo = src.floor() as usize;
                let hi = (lo + 1).min(input - 1);
                (lo, hi, src - lo as f64)
            })
            .collect()
    };
    let ys = taps(out_h, in_h);
    let xs = taps(out_w, in_w);
    Tensor4::from_fn([b, c, out_h, out_w], |[bi, ci, y, x]| {
        let (y0, y1, fy) = ys[y];
        let (x0, x1, fx) = xs[x];
        let v = |yy, xx| t.get([bi, ci, yy, xx]) as f64;
        let top = v(y0, x0) * (1.0 - fx) + v(y0, x1) * fx;
        let bottom = v(y1, x0) * (1.0 - fx) + v(y1, x1) * fx;
        (top * (1.0 - fy) + bottom * fy) as f32
    })
}

/// Interpolation alignment for DiT try-on models: every scale is resized to
/// `token_hw`, the scales are stacked along channels and the grid is
/// flattened row-major into tokens.
pub fn align_dit(bundle: &ScaleBundle, token_hw: (usize, usize)) -> Result<TokenSeq> {
    let (th, tw) = token_hw;
    if th == 0 || tw == 0 {
        return Err(mismatch(format!("token grid {th}x{tw} must be positive")));
    }
    let resized: Vec<Tensor4> = bundle
        .scales
        .iter()
        .map(|s| resize_bilinear(&s.tensor, th, tw))
        .collect();
    let refs: Vec<&Tensor4> = resized.iter().collect();
    let stacked = Tensor4::concat_channels(&refs)?;
    let [b, c, _, _] = stacked.shape();
    let tokens = th * tw;
    let mut data = Vec::with_capacity(b * tokens * c);
    for bi in 0..b {
        for y in 0..th {
            for x in 0..tw {
                data.extend((0..c).map(|ci| stacked.get([bi, ci, y, x])));
            }
        }
    }
    Ok(TokenSeq {
        batch: b,
        tokens,
        channels: c,
        data,
    })
}

/// 1×1 convolution `out = W·x + bias` applied at every pixel.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    out_channels: usize,
    in_channels: usize,
    weight: Vec<f32>,
    bias: Vec<f32>,
}

impl Projection {
    /// `weight` is `out × in`, row-major.
    pub fn new(
        out_channels: usize,
        in_channels: usize,
        weight: Vec<f32>,
        bias: Vec<f32>,
    ) -> Result<Self> {
        if out_channels == 0 || in_channels == 0 {
            return Err(KernelError::InvalidTensor(
                "projection channels must be positive".into(),
            ));
        }
        if weight.len() != out_channels * in_channels || bias.len() != out_channels {
            return Err(mismatch(format!(
                "projection {out_channels}x{in_channels} got {} weights and {} biases",
                weight.len(),
                bias.len()
            )));
        }
        Ok(Self {
            out_channels,
            in_channels,
            weight,
            bias,
        })
    }

    /// The zero-initialized projection.
    pub fn zeros(out_channels: usize, in_channels: usize) -> Self {
        Self::new(
            out_channels,
            in_channels,
            vec![0.0; out_channels * in_channels],
            vec![0.0; out_channels],
        )
        .expect("positive channels")
    }

    pub fn identity(channels: usize) -> Self {
        let mut w = vec![0.0; channels * channels];
        for i in 0..channels {
            w[i * channels + i] = 1.0;
        }
        Self::new(channels, channels, w, vec![0.0; channels]).expect("positive channels")
    }

    pub fn weight(&self, o: usize, i: usize) -> f32 {
        self.weight[o * self.in_channels + i]
    }

    pub fn bias(&self) -> &[f32] {
        &self.bias
    }

    pub fn apply(&self, x: &Tensor4) -> Result<Tensor4> {
        if x.channels() != self.in_channels {
            return Err(mismatch(format!(
                "projection expects {} channels, input has {}",
                self.in_channels,
                x.channels()
            )));
        }
        let [b, _, h, w] = x.shape();
        Ok(Tensor4::from_fn(
            [b, self.out_channels, h, w],
            |[bi, o, y, xx]| {
                let mut acc = self.bias[o] as f64;
                for i in 0..self.in_channels {
                    acc += self.weight(o, i) as f64 * x.get([bi, i, y, xx]) as f64;
                }
                acc as f32
            },
        ))
    }
}

/// Applies one projection per scale.
pub fn zero_init_project(bundle: &ScaleBundle, weights: &[Projection]) -> Result<ScaleBundle> {
    if weights.len() != bundle.len() {
        return Err(mismatch(format!(
            "{} projections for {} scales",
            weights.len(),
            bundle.len()
        )));
    }
    let scales = bundle
        .scales
        .iter()
        .zip(weights)
        .map(|(s, p)| {
            Ok(ScaleFeature {
                tensor: p.apply(&s.tensor)?,
                scale_id: s.scale_id,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ScaleBundle::new(scales)
}
