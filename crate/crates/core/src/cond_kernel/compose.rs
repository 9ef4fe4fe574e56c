use super::{mismatch, Result, Tensor4};

/// Channels of each encoded latent.
pub const LATENT_CHANNELS: usize = 4;
/// Channels of the composed generator input.
pub const COMPOSED_CHANNELS: usize = 13;

/// The blocks of a composed input, recovered by slicing.
#[derive(Debug, Clone, PartialEq)]
pub struct ComposedParts {
    pub noise: Tensor4,
    pub mask: Tensor4,
    pub masked_person: Tensor4,
    pub garment: Tensor4,
    pub densepose: Tensor4,
}

/// Builds the 13-channel generator input
/// `noise ‖ (mask ⊕ 0) ‖ (masked_person ⊕ garment) ‖ (densepose ⊕ 0)`,
/// where `⊕` stacks along height (person block on top) and `‖` stacks channels.
///
/// The latents are `(b, 4, h, w)` and the mask `(b, 1, h, w)`. The noise is
/// sampled in the composed space and is therefore `(b, 4, 2h, w)`.
/// Output: `(b, 13, 2h, w)`; channel 4 is the mask, 5..9 person/garment,
/// 9..13 dense pose.
pub fn compose_input(
    noise: &Tensor4,
    mask: &Tensor4,
    masked_person: &Tensor4,
    garment: &Tensor4,
    densepose: &Tensor4,
) -> Result<Tensor4> {
    let [b, _, h, w] = masked_person.shape();
    let latent = [b, LATENT_CHANNELS, h, w];
    for (name, t) in [
        ("masked_person", masked_person),
        ("garment", garment),
        ("densepose", densepose),
    ] {
        if t.shape() != latent {
            return Err(mismatch(format!(
                "{name} is {:?}, expected {latent:?}",
                t.shape()
            )));
        }
    }
    if mask.shape() != [b, 1, h, w] {
        return Err(mismatch(format!(
            "mask is {:?}, expected {:?}",
            mask.shape(),
            [b, 1, h, w]
        )));
    }
    let noise_shape = [b, LATENT_CHANNELS, 2 * h, w];
    if noise.shape() != noise_shape {
        return Err(mismatch(format!(
            "noise is {:?}, expected {noise_shape:?}",
            noise.shape()
        )));
    }
    let mask_block = Tensor4::concat_height(mask, &Tensor4::zeros(mask.shape()))?;
    let person_block = Tensor4::concat_height(masked_person, garment)?;
    let pose_block = Tensor4::concat_height(densepose, &Tensor4::zeros(latent))?;
    Tensor4::concat_channels(&[noise, &mask_block, &person_block, &pose_block])
}

/// Inverse of [`compose_input`]. The zero padding blocks are discarded.
pub fn decompose_input(x: &Tensor4) -> Result<ComposedParts> {
    let [_, c, h2, _] = x.shape();
    if c != COMPOSED_CHANNELS || h2 % 2 != 0 {
        return Err(mismatch(format!(
            "composed input must be (b, 13, 2h, w), got {:?}",
            x.shape()
        )));
    }
    let h = h2 / 2;
    let top = x.slice_rows(0, h)?;
    Ok(ComposedParts {
        noise: x.slice_channels(0, 4)?,
        mask: top.slice_channels(4, 5)?,
        masked_person: top.slice_channels(5, 9)?,
        garment: x.slice_rows(h, h2)?.slice_channels(5, 9)?,
        densepose: top.slice_channels(9, 13)?,
    })
}
