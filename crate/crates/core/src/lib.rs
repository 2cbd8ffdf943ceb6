//! Differentiable discrete wavelet transform layers.
//!
//! The crate provides:
//!
//! * [`tensor`]: a small dense `f64` array with a bit-exact file format,
//! * [`filters`]: Haar, Daubechies (`db2`..`db6`) and Cohen (`ch2.2`..`ch5.5`)
//!   filter banks plus their tensor-product kernels,
//! * [`transform`]: 1D/2D/3D DWT and IDWT over multi-channel tensors with
//!   periodic, symmetric and zero boundary handling,
//! * [`autodiff`]: a reverse-mode tape whose DWT/IDWT nodes back-propagate
//!   through the exact adjoint of the forward map,
//! * [`wadsnet`]: a toy encoder-decoder built from wavelet dual structures,
//!   its max-pooling/unpooling baseline and a synthetic segmentation set,
//! * [`metrics`]: confusion matrices, IoU, global accuracy and PSNR.
//!
//! Data-parallel inner loops run on rayon when the `rayon` feature is on
//! (the default). Every entry point that fans out also has a `_with`
//! variant taking an explicit [`Exec`], so the sequential path stays
//! available and results never depend on the schedule.

pub mod autodiff;
pub mod error;
pub mod exec;
pub mod filters;
pub mod metrics;
pub mod tensor;
pub mod transform;
pub mod wadsnet;

pub use error::{Error, Result};
pub use exec::Exec;
pub use filters::{get_wavelet, WaveletSpec};
pub use tensor::Tensor;
pub use transform::{dwt, idwt, BoundaryMode, Subbands};
