//! A charged particle in a uniform electric field: exact solutions in the
//! static and dynamic gauges, extended Galilean transformations (EGTs)
//! between inertial and accelerated frames, and a Crank–Nicolson solver to
//! check them against.
//!
//! ```
//! use qgauge::closed_form::{AnalyticField, ClosedForm, SolutionId, SolutionKind};
//! use qgauge::model::{max_abs_difference, PhysicalParams, SpatialGrid};
//! use qgauge::transforms::{double_egt, gauge_transform, GaugeDirection, Resample};
//!
//! let p = PhysicalParams::default();
//! let grid = SpatialGrid::new(-8.0, 4.0, 121)?;
//! let src = ClosedForm::new(SolutionId::new(SolutionKind::Psi1Static), p);
//! let wf = src.sample(&grid, 0.9)?;
//! let two = double_egt(&wf, &p, Resample::Exact(&src))?;
//! let gt = gauge_transform(&wf, GaugeDirection::StaticToDynamic, &p)?;
//! assert!(max_abs_difference(two.amplitudes(), gt.amplitudes()) < 1e-12);
//! # Ok::<(), qgauge::error::Error>(())
//! ```

pub mod error;
pub mod model;
mod quadrature;
pub mod special;
pub mod closed_form;
pub mod transforms;
pub mod pde;

pub use error::{Error, Result};

// The book's code blocks run as doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/gauges.md")]
    mod gauges {}
    #[doc = include_str!("../../../book/src/theorem.md")]
    mod theorem {}
    #[doc = include_str!("../../../book/src/airy.md")]
    mod airy {}
    #[doc = include_str!("../../../book/src/pde.md")]
    mod pde {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
