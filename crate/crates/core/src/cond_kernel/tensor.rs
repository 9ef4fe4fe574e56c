use super::{mismatch, KernelError, Result};

/// Dense `(batch, channels, height, width)` array of `f32`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor4 {
    shape: [usize; 4],
    data: Vec<f32>,
}

impl Tensor4 {
    pub fn new(shape: [usize; 4], data: Vec<f32>) -> Result<Self> {
        if shape.contains(&0) {
            return Err(KernelError::InvalidTensor(format!(
                "zero dimension in {shape:?}"
            )));
        }
        let len: usize = shape.iter().product();
        if data.len() != len {
            return Err(KernelError::InvalidTensor(format!(
                "shape {shape:?} needs {len} elements, got {}",
                data.len()
            )));
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(KernelError::InvalidTensor(format!(
                "non-finite value at flat index {i}"
            )));
        }
        Ok(Self { shape, data })
    }

    pub fn zeros(shape: [usize; 4]) -> Self {
        Self::new(shape, vec![0.0; shape.iter().product()]).expect("positive dims")
    }

    pub fn from_fn(shape: [usize; 4], mut f: impl FnMut([usize; 4]) -> f32) -> Self {
        let [b, c, h, w] = shape;
        let mut data = Vec::with_capacity(b * c * h * w);
        for bi in 0..b {
            for ci in 0..c {
                for hi in 0..h {
                    for wi in 0..w {
                        data.push(f([bi, ci, hi, wi]));
                    }
                }
            }
        }
        Self::new(shape, data).expect("from_fn produced an invalid tensor")
    }

    pub fn shape(&self) -> [usize; 4] {
        self.shape
    }

    pub fn batch(&self) -> usize {
        self.shape[0]
    }

    pub fn channels(&self) -> usize {
        self.shape[1]
    }

    pub fn height(&self) -> usize {
        self.shape[2]
    }

    pub fn width(&self) -> usize {
        self.shape[3]
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f32> {
        self.data
    }

    #[inline]
    fn offset(&self, [b, c, h, w]: [usize; 4]) -> usize {
        ((b * self.shape[1] + c) * self.shape[2] + h) * self.shape[3] + w
    }

    #[inline]
    pub fn get(&self, idx: [usize; 4]) -> f32 {
        self.data[self.offset(idx)]
    }

    #[inline]
    pub fn set(&mut self, idx: [usize; 4], v: f32) {
        let o = self.offset(idx);
        self.data[o] = v;
    }

    /// Elementwise sum of two equally shaped tensors.
    pub fn try_add(&self, other: &Tensor4) -> Result<Self> {
        if self.shape != other.shape {
            return Err(mismatch(format!(
                "cannot add {:?} and {:?}",
                self.shape, other.shape
            )));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Self::new(self.shape, data)
    }

    /// Channels `[start, end)`.
    pub fn slice_channels(&self, start: usize, end: usize) -> Result<Self> {
        if start >= end || end > self.channels() {
            return Err(mismatch(format!(
                "channel range {start}..{end} outside {}",
                self.channels()
            )));
        }
        let [b, _, h, w] = self.shape;
        Ok(Self::from_fn([b, end - start, h, w], |[bi, ci, hi, wi]| {
            self.get([bi, ci + start, hi, wi])
        }))
    }

    /// Rows `[start, end)`.
    pub fn slice_rows(&self, start: usize, end: usize) -> Result<Self> {
        if start >= end || end > self.height() {
            return Err(mismatch(format!(
                "row range {start}..{end} outside {}",
                self.height()
            )));
        }
        let [b, c, _, w] = self.shape;
        Ok(Self::from_fn([b, c, end - start, w], |[bi, ci, hi, wi]| {
            self.get([bi, ci, hi + start, wi])
        }))
    }

    /// Channel-wise concatenation; batch and spatial dims must agree.
    pub fn concat_channels(parts: &[&Tensor4]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| mismatch("nothing to concatenate"))?;
        let [b, _, h, w] = first.shape;
        if let Some(p) = parts
            .iter()
            .find(|p| p.batch() != b || p.height() != h || p.width() != w)
        {
            return Err(mismatch(format!(
                "cannot stack {:?} with {:?} along channels",
                p.shape, first.shape
            )));
        }
        let c: usize = parts.iter().map(|p| p.channels()).sum();
        let mut data = Vec::with_capacity(b * c * h * w);
        let plane = h * w;
        for bi in 0..b {
            for p in parts {
                let start = bi * p.channels() * plane;
                data.extend_from_slice(&p.data[start..start + p.channels() * plane]);
            }
        }
        Self::new([b, c, h, w], data)
    }

    /// Spatial concatenation along height: `top` above `bottom`.
    pub fn concat_height(top: &Tensor4, bottom: &Tensor4) -> Result<Self> {
        let [b, c, ht, w] = top.shape;
        if bottom.batch() != b || bottom.channels() != c || bottom.width() != w {
            return Err(mismatch(format!(
                "cannot stack {:?} above {:?}",
                top.shape, bottom.shape
            )));
        }
        let hb = bottom.height();
        Ok(Self::from_fn([b, c, ht + hb, w], |[bi, ci, hi, wi]| {
            if hi < ht {
                top.get([bi, ci, hi, wi])
            } else {
                bottom.get([bi, ci, hi - ht, wi])
            }
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Tensor4::new([1, 0, 2, 2], vec![]).is_err());
        assert!(Tensor4::new([1, 1, 2, 2], vec![0.0; 3]).is_err());
        assert!(Tensor4::new([1, 1, 1, 1], vec![f32::NAN]).is_err());
    }

    #[test]
    fn concat_then_slice() {
        let a = Tensor4::from_fn([2, 1, 2, 3], |[b, _, h, w]| (b * 100 + h * 10 + w) as f32);
        let b = Tensor4::from_fn([2, 2, 2, 3], |[b, c, h, w]| {
            -((b * 1000 + c * 100 + h * 10 + w) as f32)
        });
        let cat = Tensor4::concat_channels(&[&a, &b]).unwrap();
        assert_eq!(cat.shape(), [2, 3, 2, 3]);
        assert_eq!(cat.slice_channels(0, 1).unwrap(), a);
        assert_eq!(cat.slice_channels(1, 3).unwrap(), b);
        let tall = Tensor4::concat_height(&a, &a).unwrap();
        assert_eq!(tall.slice_rows(2, 4).unwrap(), a);
    }
}
