//! Row-major raster containers shared by the preprocessing and metric code.

use serde::{Deserialize, Serialize};

/// Per-pixel class of a body/garment layout map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[repr(u8)]
pub enum LayoutClass {
    Background = 0,
    Body = 1,
    Garment = 2,
}

impl LayoutClass {
    pub fn from_u8(v: u8) -> Option<Self> {
        match v {
            0 => Some(Self::Background),
            1 => Some(Self::Body),
            2 => Some(Self::Garment),
            _ => None,
        }
    }
}

/// H×W boolean image. `get(x, y)` is column `x`, row `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    data: Vec<bool>,
}

impl BinaryMask {
    /// All-false mask. Panics on a zero dimension.
    pub fn new(width: usize, height: usize) -> Self {
        assert!(width > 0 && height > 0, "mask dimensions must be positive");
        Self {
            width,
            height,
            data: vec![false; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::new(width, height);
        for y in 0..height {
            for x in 0..width {
                m.data[y * width + x] = f(x, y);
            }
        }
        m
    }

    /// Returns `None` when the dimensions are zero or disagree with `data.len()`.
    pub fn from_vec(width: usize, height: usize, data: Vec<bool>) -> Option<Self> {
        (width > 0 && height > 0 && data.len() == width * height).then_some(Self {
            width,
            height,
            data,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.data[y * self.width + x]
    }

    /// Out-of-bounds coordinates read as unset.
    #[inline]
    pub fn get_signed(&self, x: i64, y: i64) -> bool {
        x >= 0
            && y >= 0
            && (x as usize) < self.width
            && (y as usize) < self.height
            && self.data[y as usize * self.width + x as usize]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: bool) {
        self.data[y * self.width + x] = v;
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.data
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    /// Iterator over `(x, y)` of set pixels in row-major order.
    pub fn iter_set(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let w = self.width;
        self.data
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| (i % w, i / w))
    }
}

/// Integer label image (one byte per pixel).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl LabelImage {
    pub fn new(width: usize, height: usize) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be positive");
        Self {
            width,
            height,
            data: vec![0; width * height],
        }
    }

    pub fn from_vec(width: usize, height: usize, data: Vec<u8>) -> Option<Self> {
        (width > 0 && height > 0 && data.len() == width * height).then_some(Self {
            width,
            height,
            data,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: u8) {
        self.data[y * self.width + x] = v;
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<u8> {
        self.data
    }

    pub fn mask_of(&self, label: u8) -> BinaryMask {
        BinaryMask {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&v| v == label).collect(),
        }
    }
}

/// Three-class layout map over {background, body, garment}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayoutMap(LabelImage);

impl LayoutMap {
    pub fn new(width: usize, height: usize) -> Self {
        Self(LabelImage::new(width, height))
    }

    /// Fails with the first offending value when a label lies outside {0, 1, 2}.
    pub fn from_labels(labels: LabelImage) -> Result<Self, u8> {
        match labels.as_slice().iter().find(|&&v| v > 2) {
            Some(&v) => Err(v),
            None => Ok(Self(labels)),
        }
    }

    pub fn width(&self) -> usize {
        self.0.width
    }

    pub fn height(&self) -> usize {
        self.0.height
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> LayoutClass {
        LayoutClass::from_u8(self.0.get(x, y)).expect("layout labels are validated")
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, class: LayoutClass) {
        self.0.set(x, y, class as u8);
    }

    pub fn labels(&self) -> &LabelImage {
        &self.0
    }

    pub fn class_mask(&self, class: LayoutClass) -> BinaryMask {
        self.0.mask_of(class as u8)
    }

    pub fn count(&self, class: LayoutClass) -> usize {
        self.0.data.iter().filter(|&&v| v == class as u8).count()
    }
}
