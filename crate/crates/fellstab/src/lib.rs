//! fellstab: exact, desk-scale operator-algebra combinatorics.
//!
//! The crate works with Fell bundles over finite groupoids (Haar system =
//! counting measures) and the combinatorics of higher-rank graphs:
//!
//! * build and validate finite groupoids and Fell bundles,
//! * assemble section (convolution) *-algebras and decompose them into
//!   matrix blocks,
//! * stabilize a bundle: Hilbert-module fibers, the translation
//!   isomorphisms, the induced action on compact operators, the
//!   crossed-product bundle, and the equivalence bimodule — with a full
//!   numerical verification report,
//! * compare Morita invariants (blocks, centers, ideal lattices),
//! * k-graph skeletons: path counting, pullbacks along quotient maps,
//!   aperiodicity verdicts, saturated hereditary vertex sets, maximal
//!   tails,
//! * exact integer-lattice algebra: Smith normal form, rational
//!   2-cocycles, bicharacters, symmetrizer subgroups, dual-group shapes,
//! * primitive-ideal stratification for pullback k-graphs with rational
//!   cocycle data.
//!
//! The primary interface is the `examples/` directory; each example is a
//! small runnable program exercising one capability:
//!
//! ```bash
//! cargo run --example groupoid_basics
//! cargo run --example convolution_algebras
//! cargo run --example twisted_group_algebra
//! cargo run --example stabilization
//! cargo run --example dynamical_system
//! cargo run --example kgraph_aperiodicity
//! cargo run --example kgraph_ideals
//! cargo run --example pullback_prim
//! cargo run --example smith_normal_form
//! ```
//!
//! A thin command-line front end (`fellstab`) exposes the same pipelines
//! over interchange documents; see the README.

pub mod algebra;
pub mod bundle;
pub mod commands;
pub mod groupoid;
pub mod io;
pub mod kgraph;
pub mod lattice;
pub mod linalg;
pub mod prim;
pub mod report;
pub mod stabilize;
pub mod zoo;

/// Default absolute tolerance for all rank/kernel/residual decisions.
///
/// Structure constants produced by the constructors in this crate are exact
/// small integers or unit-modulus phases, so the gap between "zero" and
/// "structurally nonzero" is many orders of magnitude wider than this.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Default depth cap (per coordinate) for bounded path searches.
pub const DEFAULT_DEPTH: usize = 6;
