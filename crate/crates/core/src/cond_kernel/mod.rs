//! Array-level conditioning math for a layout-conditioned try-on model.
//!
//! No learned weights live here: the functions are the deterministic glue
//! around them (input composition, FiLM, feature alignment, the
//! zero-initialized projection and the noise-prediction loss).

mod align;
mod compose;
mod container;
mod film;
mod loss;
mod tensor;

pub use align::{
    align_dit, align_unet, resize_bilinear, zero_init_project, Projection, ScaleBundle,
    ScaleFeature, TokenSeq,
};
pub use compose::{
    compose_input, decompose_input, ComposedParts, COMPOSED_CHANNELS, LATENT_CHANNELS,
};
pub use container::{read_tensor, write_tensor, DTYPE_F32, MAGIC};
pub use film::{film_modulate, FiLMParams, FitLabel, LinearFilmProjection, SIGMA_FLOOR};
pub use loss::injection_loss;
pub use tensor::Tensor4;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid tensor: {0}")]
    InvalidTensor(String),
    #[error("invalid fit label: {0}")]
    InvalidLabel(String),
    #[error("tensor container: {0}")]
    Container(String),
}

pub type Result<T> = std::result::Result<T, KernelError>;

pub(crate) fn mismatch(msg: impl Into<String>) -> KernelError {
    KernelError::ShapeMismatch(msg.into())
}
