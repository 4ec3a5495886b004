//! Combinatorial curvature, Gauss-Bonnet identities and type criteria for
//! infinite planar triangulations, evaluated on finite windows.

pub mod error;
pub mod rational;
pub mod window;

pub use error::{Error, Result};
pub use rational::Q;
pub use window::{FaceId, TriangulationWindow, V};
pub mod selection;
pub mod curvature;
pub mod sequences;
pub mod generators;
pub mod regions;
pub mod criteria;
pub mod vel;
pub mod layered_analysis;
pub mod sampling;

#[doc = include_str!("../../../book/src/intro.md")]
pub mod book_intro {}
#[doc = include_str!("../../../book/src/windows.md")]
pub mod book_windows {}
#[doc = include_str!("../../../book/src/curvature.md")]
pub mod book_curvature {}
#[doc = include_str!("../../../book/src/main_bodies.md")]
pub mod book_main_bodies {}
#[doc = include_str!("../../../book/src/type_criteria.md")]
pub mod book_type_criteria {}
#[doc = include_str!("../../../book/src/extremal_length.md")]
pub mod book_extremal_length {}
#[doc = include_str!("../../../book/src/layered.md")]
pub mod book_layered {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod book_cli {}
