//! Exact machinery for counting rational points of bounded height on plane
//! algebraic curves: Wronskian stratification, monotone arc decomposition,
//! interpolation by auxiliary curves and per-arc zero-count certificates.

pub mod algebraic;
pub mod arcs;
pub mod bipoly;
pub mod curve;
pub mod degree_check;
pub mod differential;
pub mod error;
pub mod interpolation;
pub mod interval;
pub mod modp;
pub mod parse;
pub mod pipeline;
pub mod points;
pub mod rational;
pub mod solve;
pub mod strata;
pub mod resultant;
pub mod roots;
pub mod unipoly;
pub mod zbipoly;
pub mod zpoly;

pub use algebraic::AlgebraicReal;
pub use bipoly::{mu, Axis, BiPoly, MonomialBasis};
pub use curve::PlaneCurve;
pub use error::{Error, Result};
pub use rational::{rational_height, BigRational};
pub use roots::{isolate_real_roots, Bound, IsolatingInterval, Range};
pub use unipoly::UniPoly;
