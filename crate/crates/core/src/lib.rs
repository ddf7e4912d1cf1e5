//! Closed track circuits on the square tiling.
//!
//! A circuit is a closed C¹ curve assembled from pieces, one per visited
//! unit square, whose ends sit on edge midpoints or square vertices. This
//! crate enumerates such circuits exhaustively, merges them up to symmetry,
//! decides which ones can actually be built, fits a growth law to the counts,
//! builds long circuits at random and renders them.
//!
//! ```
//! use railgrid::circuit::Inventory;
//! use railgrid::enumerator::{sweep, SweepSpec};
//!
//! let row = sweep(&SweepSpec::new(6, Inventory::unbounded())).unwrap().row;
//! assert_eq!(row.cells(), [10000, 36, 10, 5, 5]);
//! ```

pub mod circuit;
pub mod constructibility;
pub mod enumerator;
pub mod error;
pub mod fit;
pub mod geometry;
pub mod random;
pub mod record;
pub mod render;

pub use circuit::{Circuit, EndChoice, Equivalence, Inventory};
pub use error::{Error, Result};
pub use geometry::{Cell, Direction, PieceMode, TurnCode, WidthConfig};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/geometry.md")]
    mod geometry {}
    #[doc = include_str!("../../../book/src/circuits.md")]
    mod circuits {}
    #[doc = include_str!("../../../book/src/enumeration.md")]
    mod enumeration {}
    #[doc = include_str!("../../../book/src/constructibility.md")]
    mod constructibility {}
    #[doc = include_str!("../../../book/src/fit.md")]
    mod fit {}
    #[doc = include_str!("../../../book/src/random.md")]
    mod random {}
    #[doc = include_str!("../../../book/src/rendering.md")]
    mod rendering {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
