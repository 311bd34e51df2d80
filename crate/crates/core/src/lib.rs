//! Link-level models for comparing an intelligent reflecting surface (IRS)
//! against a decode-and-forward (DF) relay when electromagnetic interference
//! (EMI) impinges on the node between source and destination.
//!
//! Every type is generic over a floating-point scalar implementing [`Real`].
//! The aliases at the crate root fix the scalar to `f64`, which is what the
//! sweep runner uses; `f32` works for everything that does not need
//! double-precision tolerances.
//!
//! ```
//! use emilink_core::{scene, irs};
//!
//! let layout = scene::make_layout::<f64>(4, 0.1, None).unwrap();
//! let h_sr = scene::los_channel(1e-6, -1.2, 0.0, &layout).unwrap();
//! let h_rd = scene::los_channel(1e-6, 0.3, 0.0, &layout).unwrap();
//! let phases = irs::phases_noise_only(&h_sr, &h_rd).unwrap();
//! assert_eq!(phases.len(), 4);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod emi;
mod error;
pub mod irs;
pub mod linalg;
pub mod quadrature;
pub mod relay;
pub mod scene;

pub use error::{Error, Result};

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar the models are written against.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossless-enough conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub type Complex<T> = num_complex::Complex<T>;

pub type Vec3F64 = scene::Vec3<f64>;
pub type OrientationF64 = scene::Orientation<f64>;
pub type ArrayLayoutF64 = scene::ArrayLayout<f64>;
pub type LosChannelF64 = scene::LosChannel<f64>;
pub type LinkBudgetF64 = scene::LinkBudget<f64>;
pub type AngularDensityF64 = emi::AngularDensity<f64>;
pub type EmiModelF64 = emi::EmiModel<f64>;
pub type CMatrixF64 = linalg::CMatrix<f64>;
pub type PhaseConfigF64 = irs::PhaseConfig<f64>;
pub type IrsLinkF64 = irs::IrsLink<f64>;
pub type EffectiveGainsF64 = relay::EffectiveGains<f64>;
pub type RelaySolutionF64 = relay::RelaySolution<f64>;
