//! Computing with relative presentations `<G, t | w>` and planar w-diagrams.
//!
//! The crate provides:
//!
//! - [`shape`]: the calculus of cyclic unreduced t-shapes (Magnus derivative,
//!   complexity, root, clumps, amenability);
//! - [`group`]: coefficient-group backends with a decidable word problem
//!   (free products of cyclic groups plus defined generators) and evaluation
//!   homomorphisms into finite permutation groups;
//! - [`word`]: cyclically reduced words in `G * <t>`, coefficient roles,
//!   substitution, and the blow-up normal form `w(s,t)` with its X/Y/J slot
//!   classes;
//! - [`diagram`]: the combinatorial planar-map model of w-diagrams,
//!   W-diagrams and diagrams with boundary: validation, region words,
//!   irreducibility, dipole reduction;
//! - [`convert`]: the pipeline turning a w-diagram over an amenable word into
//!   a W-diagram over `G * <s>` with two-leg discs;
//! - [`search`]: bounded exhaustive enumeration of diagrams, plus the classic
//!   constructions (the four-disc torsion example, power-shape pairs,
//!   substitution);
//! - [`homotopy`]: reading a diagram as a relative 2-cycle, evaluating it in
//!   finite quotients, and ranks of pseudo-projective planes;
//! - [`crash`]: dual cell subdivisions and the bigon traffic-flow simulator;
//! - [`render`]: a deterministic schematic SVG renderer;
//! - [`cli`]: the command-line surface used by the `diagramma` binary.
//!
//! Run `cargo run -- --help` for the CLI, or see the `examples/` directory
//! for one runnable example per capability.

pub mod cli;
pub mod convert;
pub mod corpus;
pub mod crash;
pub mod diagram;
pub mod group;
pub mod homotopy;
pub mod render;
pub mod search;
pub mod shape;
pub mod word;

pub use diagram::Diagram;
pub use group::{GroupElement, GroupSpec, PermHom};
pub use shape::TShape;
pub use word::{BlownUpWord, KCanonical, RelWord};
