//! Verdicts and sweeps for the fixed-point question: does the inverse limit
//! of recurrent blocks have a thread exactly when the base point is
//! periodic?
//!
//! A [`PointVerdict`] records the answer for one `(map, point)` pair under
//! one semantics and one family. Sweeps evaluate entire endofunction spaces,
//! either exhaustively or from a seeded sample, and collect every failing
//! verdict as a replayable counterexample record. The direction "periodic
//! implies nonempty limit" is enforced as a hard internal invariant — the
//! thread choosing the point's own block everywhere witnesses it — so a
//! sweep that observes a violation aborts with [`Error::Internal`] rather
//! than reporting it as a finding.
//!
//! Reports are deterministic: identical inputs produce byte-identical JSON
//! regardless of worker count, and timing is kept out of the serialized
//! form.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{endofunction_count, Endofunction};
use crate::error::{Error, Result};
use crate::inverse_system::{
    threads_via_cycle, InverseSystem, PartitionFamily, Semantics, Thread, ThreadRecord,
};
use crate::text::parse_partition;

/// Default ceiling for exhaustive sweeps; `n^n · n` points beyond this take
/// hours, not minutes.
pub const EXHAUSTIVE_SWEEP_CEILING: usize = 6;

// ---------------------------------------------------------------------------
// Report data
// ---------------------------------------------------------------------------

/// A reconstructible description of the partition family a result used.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FamilyDescriptor {
    /// Every partition of `{0, …, n−1}`.
    FullLattice { n: usize },
    /// An explicit member list, one partition per entry in block notation.
    Explicit { members: Vec<String> },
}

impl FamilyDescriptor {
    pub fn of(family: &PartitionFamily) -> Self {
        if family.is_full_lattice() {
            FamilyDescriptor::FullLattice { n: family.n() }
        } else {
            FamilyDescriptor::Explicit {
                members: family
                    .members()
                    .iter()
                    .map(|member| member.blocks_text())
                    .collect(),
            }
        }
    }

    /// Rebuilds the family this descriptor came from.
    pub fn build(&self) -> Result<PartitionFamily> {
        match self {
            FamilyDescriptor::FullLattice { n } => PartitionFamily::full_lattice_unchecked(*n),
            FamilyDescriptor::Explicit { members } => {
                let members = members
                    .iter()
                    .map(|text| parse_partition(text))
                    .collect::<Result<Vec<_>>>()?;
                PartitionFamily::new(members)
            }
        }
    }
}

/// The full record for one `(map, point)` check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointVerdict {
    /// The map, in image-table text form.
    #[serde(with = "table_text")]
    pub map: Endofunction,
    pub point: usize,
    pub semantics: Semantics,
    pub family: FamilyDescriptor,
    pub limit_nonempty: bool,
    /// Number of threads found (all of them unless `truncated`).
    pub thread_count: usize,
    pub truncated: bool,
    pub periodic: bool,
    /// `limit_nonempty == periodic`.
    pub conjecture_holds: bool,
    /// One thread of the limit, present exactly when it is nonempty.
    pub witness: Option<ThreadRecord>,
}

mod table_text {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::dynamics::Endofunction;
    use crate::text::parse_endofunction;

    pub fn serialize<S: Serializer>(map: &Endofunction, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&map.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Endofunction, D::Error> {
        let text = String::deserialize(de)?;
        parse_endofunction(&text).map_err(serde::de::Error::custom)
    }
}

/// How a sweep chose its maps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SweepMode {
    Exhaustive,
    Sampled { sample_size: u64, seed: u64 },
}

/// Failure counts split by implication direction.
///
/// A forward failure is a nonempty limit at a non-periodic point; a backward
/// failure would be a void limit at a periodic point. Backward failures are
/// impossible by construction and abort the sweep if ever observed, so the
/// field exists for schema completeness and is always zero in practice.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectionBreakdown {
    pub forward_failures: u64,
    pub backward_failures: u64,
}

/// The outcome of one sweep.
///
/// `wall_time` is measured but deliberately not serialized: the JSON report
/// is a function of the sweep's inputs alone, so repeated runs and different
/// worker counts produce byte-identical files.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepReport {
    pub n: usize,
    pub semantics: Semantics,
    pub family: FamilyDescriptor,
    pub mode: SweepMode,
    pub thread_cap: Option<usize>,
    pub total_points: u64,
    pub holds_count: u64,
    pub counterexamples: Vec<PointVerdict>,
    pub direction: DirectionBreakdown,
    /// False when the sweep was cancelled and covers only part of the space.
    pub complete: bool,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl SweepReport {
    pub fn counterexample_count(&self) -> u64 {
        self.counterexamples.len() as u64
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serialization");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|err| Error::Parse {
            position: err.column(),
            message: format!("invalid report JSON: {err}"),
        })
    }
}

// ---------------------------------------------------------------------------
// Point checks
// ---------------------------------------------------------------------------

/// Checks one `(map, point)` pair, enumerating every thread.
pub fn check_point(
    map: &Endofunction,
    point: usize,
    semantics: Semantics,
    family: &PartitionFamily,
) -> Result<PointVerdict> {
    check_point_capped(map, point, semantics, family, None)
}

/// Like [`check_point`], returning at most `cap` witness threads' worth of
/// enumeration. On the full lattice under standard semantics the limit is
/// read off the eventual cycle directly; every other configuration builds
/// the system and runs the backtracking enumeration.
pub fn check_point_capped(
    map: &Endofunction,
    point: usize,
    semantics: Semantics,
    family: &PartitionFamily,
    cap: Option<usize>,
) -> Result<PointVerdict> {
    let periodic = map.is_periodic(point)?;
    let (threads, truncated) = if family.is_full_lattice() && semantics == Semantics::Standard {
        let mut threads = threads_via_cycle(map, point, family)?;
        let truncated = cap.is_some_and(|cap| threads.len() > cap);
        if let Some(cap) = cap {
            threads.truncate(cap);
        }
        (threads, truncated)
    } else {
        let system = InverseSystem::build(map, point, family)?;
        let enumeration = system.threads_capped(semantics, cap);
        (enumeration.threads, enumeration.truncated)
    };
    let limit_nonempty = !threads.is_empty();
    let witness = threads
        .first()
        .map(|thread: &Thread| thread.to_record(family));
    let thread_count = threads.len();
    Ok(PointVerdict {
        map: map.clone(),
        point,
        semantics,
        family: FamilyDescriptor::of(family),
        limit_nonempty,
        thread_count,
        truncated,
        periodic,
        conjecture_holds: limit_nonempty == periodic,
        witness,
    })
}

/// For a periodic point, decides whether the limit is nonempty by verifying
/// the canonical witness: the thread that picks the point's own block at
/// every member. Errors if the point is not periodic.
pub fn backward_direction_holds(
    map: &Endofunction,
    point: usize,
    semantics: Semantics,
    family: &PartitionFamily,
) -> Result<bool> {
    if !map.is_periodic(point)? {
        return Err(Error::Usage {
            op: "backward_direction_holds",
            message: format!("point {point} is not periodic"),
        });
    }
    let system = InverseSystem::build(map, point, family)?;
    let witness = Thread::from_choices(
        family
            .members()
            .iter()
            .map(|member| member.block_of(point))
            .collect(),
    );
    Ok(system.verify_thread(&witness, semantics).is_ok())
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

/// Which family a sweep runs against.
#[derive(Debug)]
pub enum FamilyMode {
    /// The full lattice at the sweep's ground-set size.
    FullLattice,
    /// A caller-supplied family; its ground set must match the sweep's `n`.
    Given(PartitionFamily),
}

/// Knobs shared by both sweeps.
#[derive(Debug, Clone, Default)]
pub struct SweepOptions {
    /// Worker threads; `None` uses the global pool. Content never depends
    /// on this.
    pub workers: Option<usize>,
    /// Overrides the sweep and lattice ceilings.
    pub force: bool,
    /// Per-point thread cap, recorded in the report for faithful replay.
    pub thread_cap: Option<usize>,
    /// Cooperative cancellation; a cancelled sweep returns a valid report
    /// with `complete = false`.
    pub cancel: Option<Arc<AtomicBool>>,
}

enum FamilyRef<'a> {
    Owned(PartitionFamily),
    Borrowed(&'a PartitionFamily),
}

impl FamilyRef<'_> {
    fn get(&self) -> &PartitionFamily {
        match self {
            FamilyRef::Owned(family) => family,
            FamilyRef::Borrowed(family) => family,
        }
    }
}

fn resolve_family<'a>(n: usize, mode: &'a FamilyMode, force: bool) -> Result<FamilyRef<'a>> {
    match mode {
        FamilyMode::FullLattice => {
            let family = if force {
                PartitionFamily::full_lattice_unchecked(n)?
            } else {
                PartitionFamily::full_lattice(n)?
            };
            Ok(FamilyRef::Owned(family))
        }
        FamilyMode::Given(family) => {
            if family.n() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: family.n(),
                });
            }
            Ok(FamilyRef::Borrowed(family))
        }
    }
}

#[derive(Default)]
struct Tally {
    checked: u64,
    holds: u64,
    forward_failures: u64,
    backward_failures: u64,
    counterexamples: Vec<PointVerdict>,
}

impl Tally {
    fn absorb(&mut self, verdict: PointVerdict) {
        self.checked += 1;
        if verdict.conjecture_holds {
            self.holds += 1;
        } else {
            if verdict.limit_nonempty {
                self.forward_failures += 1;
            } else {
                self.backward_failures += 1;
            }
            self.counterexamples.push(verdict);
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.holds += other.holds;
        self.forward_failures += other.forward_failures;
        self.backward_failures += other.backward_failures;
        self.counterexamples.extend(other.counterexamples);
        self
    }
}

fn check_map_points(
    map: &Endofunction,
    semantics: Semantics,
    family: &PartitionFamily,
    cap: Option<usize>,
) -> Result<Tally> {
    let mut tally = Tally::default();
    for point in 0..map.n() {
        tally.absorb(check_point_capped(map, point, semantics, family, cap)?);
    }
    Ok(tally)
}

fn is_cancelled(cancel: &Option<Arc<AtomicBool>>) -> bool {
    cancel
        .as_ref()
        .is_some_and(|flag| flag.load(Ordering::Relaxed))
}

/// Runs `body` on a dedicated pool when a worker count is requested.
fn with_workers<T: Send>(workers: Option<usize>, body: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(body()),
        Some(workers) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .map_err(|err| Error::Usage {
                    op: "sweep",
                    message: format!("cannot build a {workers}-worker pool: {err}"),
                })?;
            Ok(pool.install(body))
        }
    }
}

fn finalize(
    n: usize,
    semantics: Semantics,
    family: &PartitionFamily,
    mode: SweepMode,
    options: &SweepOptions,
    tallies: Vec<Option<Tally>>,
    started: Instant,
) -> Result<SweepReport> {
    let complete = tallies.iter().all(Option::is_some);
    let merged = tallies
        .into_iter()
        .flatten()
        .fold(Tally::default(), Tally::merge);
    if merged.backward_failures > 0 {
        return Err(Error::Internal(format!(
            "{} periodic points with a void limit; the canonical witness thread must exist",
            merged.backward_failures
        )));
    }
    Ok(SweepReport {
        n,
        semantics,
        family: FamilyDescriptor::of(family),
        mode,
        thread_cap: options.thread_cap,
        total_points: merged.checked,
        holds_count: merged.holds,
        counterexamples: merged.counterexamples,
        direction: DirectionBreakdown {
            forward_failures: merged.forward_failures,
            backward_failures: merged.backward_failures,
        },
        complete,
        wall_time: started.elapsed(),
    })
}

/// Checks every `(map, point)` pair at ground-set size `n`: all `n^n` image
/// tables in lexicographic order, all `n` points each. The merge order is
/// fixed, so the report content is independent of the worker count.
pub fn exhaustive_sweep(
    n: usize,
    semantics: Semantics,
    family_mode: &FamilyMode,
    options: &SweepOptions,
) -> Result<SweepReport> {
    if n == 0 {
        return Err(Error::EmptyGroundSet);
    }
    if !options.force && n > EXHAUSTIVE_SWEEP_CEILING {
        return Err(Error::CeilingExceeded {
            n,
            ceiling: EXHAUSTIVE_SWEEP_CEILING,
            what: "exhaustive sweep",
        });
    }
    let family_ref = resolve_family(n, family_mode, options.force)?;
    let family = family_ref.get();
    let map_count = endofunction_count(n).ok_or(Error::CeilingExceeded {
        n,
        ceiling: EXHAUSTIVE_SWEEP_CEILING,
        what: "exhaustive sweep",
    })?;
    let started = Instant::now();
    let cancel = &options.cancel;
    let tallies: Result<Vec<Option<Tally>>> = with_workers(options.workers, || {
        (0..map_count as usize)
            .into_par_iter()
            .map(|index| {
                if is_cancelled(cancel) {
                    return Ok(None);
                }
                let map = Endofunction::from_index(n, index as u64)?;
                check_map_points(&map, semantics, family, options.thread_cap).map(Some)
            })
            .collect()
    })?;
    finalize(
        n,
        semantics,
        family,
        SweepMode::Exhaustive,
        options,
        tallies?,
        started,
    )
}

/// Checks all points of `sample_size` pseudo-random maps drawn (with
/// replacement) from the seeded generator. Identical `(n, sample_size,
/// seed)` triples draw identical maps.
pub fn sampled_sweep(
    n: usize,
    semantics: Semantics,
    sample_size: u64,
    seed: u64,
    family_mode: &FamilyMode,
    options: &SweepOptions,
) -> Result<SweepReport> {
    if n == 0 {
        return Err(Error::EmptyGroundSet);
    }
    let family_ref = resolve_family(n, family_mode, options.force)?;
    let family = family_ref.get();
    let started = Instant::now();
    let sample = sample_maps(n, sample_size, seed);
    let cancel = &options.cancel;
    let tallies: Result<Vec<Option<Tally>>> = with_workers(options.workers, || {
        sample
            .par_iter()
            .map(|map| {
                if is_cancelled(cancel) {
                    return Ok(None);
                }
                check_map_points(map, semantics, family, options.thread_cap).map(Some)
            })
            .collect()
    })?;
    finalize(
        n,
        semantics,
        family,
        SweepMode::Sampled { sample_size, seed },
        options,
        tallies?,
        started,
    )
}

fn sample_maps(n: usize, sample_size: u64, seed: u64) -> Vec<Endofunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..sample_size)
        .map(|_| {
            let table = (0..n)
                .map(|_| uniform_below(&mut rng, n as u64) as usize)
                .collect();
            Endofunction::new(table).expect("sampled entries are in range")
        })
        .collect()
}

/// Unbiased uniform draw from `0..n` by rejection.
fn uniform_below(rng: &mut ChaCha8Rng, n: u64) -> u64 {
    let threshold = u64::MAX - u64::MAX % n;
    loop {
        let value = rng.next_u64();
        if value < threshold {
            return value % n;
        }
    }
}
