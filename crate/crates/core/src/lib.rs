//! Exhaustive testing, at desk scale, of a fixed-point question for finite
//! dynamical systems `T : X → X`.
//!
//! For every partition of the ground set, the forward orbit of a point
//! revisits some blocks forever; those recurrent-block sets, linked by
//! coarsening maps along the refinement order, form an inverse system whose
//! limit may or may not have a thread. The question under test is whether
//! the limit over the full partition lattice is nonempty exactly when the
//! point is periodic. Two semantics of the limit are implemented side by
//! side — [`Semantics::Standard`] and [`Semantics::PointSupported`] — and
//! every verdict records which one produced it.
//!
//! * [`partitions`] — canonical set partitions, enumeration, refinement.
//! * [`dynamics`] — endofunctions, orbit shapes, recurrent blocks.
//! * [`inverse_system`] — partition families, systems at a point, threads.
//! * [`conjecture`] — point verdicts, exhaustive and sampled sweeps.
//! * [`text`] — parsing of the table and partition text forms.

pub mod conjecture;
pub mod dynamics;
pub mod error;
pub mod inverse_system;
pub mod partitions;
pub mod text;

pub use conjecture::{
    backward_direction_holds, check_point, check_point_capped, exhaustive_sweep, sampled_sweep,
    DirectionBreakdown, FamilyDescriptor, FamilyMode, PointVerdict, SweepMode, SweepOptions,
    SweepReport, EXHAUSTIVE_SWEEP_CEILING,
};
pub use dynamics::{
    endofunction_count, enumerate_endofunctions, Endofunction, OrbitShape, RecurrentBlocks,
};
pub use error::{Error, Result};
pub use inverse_system::{
    threads_via_cycle, InverseSystem, PartitionFamily, Semantics, Thread, ThreadEntry,
    ThreadRecord, ThreadViolation,
};
pub use partitions::{
    common_refinement, enumerate_partitions, CoarseningMap, SetPartition, FULL_LATTICE_CEILING,
};
pub use text::{parse_endofunction, parse_partition};
