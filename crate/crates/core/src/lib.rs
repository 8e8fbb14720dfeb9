//! Exact computations with chord diagrams on string links.
//!
//! The crate covers diagram enumeration and algebra, intersection graphs and
//! their tree analysis, exact relation spaces over the rationals and the
//! integers, elementary transformations, and reconstruction of diagrams from
//! realizable trees.
//!
//! ```
//! use chordlink::{ChordDiagram, IntersectionGraph};
//!
//! let d: ChordDiagram = "k=2 [x y][y x]".parse()?;
//! assert_eq!(d.to_string(), "k=2 [a b][b a]");
//! let g = IntersectionGraph::of(&d);
//! assert_eq!(g.undirected_edges().len(), 1);
//! # Ok::<(), chordlink::Error>(())
//! ```

pub mod cache;
pub mod diagram;
pub mod enumerate;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod lincomb;
pub mod realizability;
pub mod reconstruct;
pub mod relations;
pub mod transform;
pub mod tree;
pub mod verify;

pub use diagram::{chord_name, Arc, CanonicalCode, ChordDiagram, Share};
pub use enumerate::{diagram_count, enumerate_diagrams, DiagramIndex, Limits};
pub use error::{Error, Result};
pub use graph::{is_connected, is_connected_with, Connectivity, IntersectionGraph, Relation};
pub use lincomb::LinearCombination;
pub use realizability::{brute_force_realizable, check_realizable, RealizabilityReport};
pub use reconstruct::{reconstruct, reconstruct_2strand, reconstruct_nstrand, round_trip_check, stacking_variants};
pub use relations::{RelationBasis, RelationSet, Ring};
pub use transform::{decompose, orbit, permute_boughs, reflect_marked};
pub use tree::MarkedTree;

// Book chapters compiled as doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/diagrams.md")]
    mod diagrams {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/relations.md")]
    mod relations {}
    #[doc = include_str!("../../../book/src/transformations.md")]
    mod transformations {}
    #[doc = include_str!("../../../book/src/reconstruction.md")]
    mod reconstruction {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
