//! Families of partitions, the per-point system of recurrent blocks linked
//! by coarsening maps, and enumeration of the threads of its inverse limit.
//!
//! For a map `T`, a point `x`, and a family of partitions, each family
//! member contributes the set of blocks the orbit of `x` revisits forever,
//! and every comparable pair of members is linked by the coarsening map
//! restricted to those blocks. A thread picks one recurrent block per member
//! so that every coarsening map sends the finer choice to the coarser one.
//!
//! Two semantics are first class and every result is tagged with the one
//! that produced it:
//!
//! * [`Semantics::Standard`] — threads are exactly the compatible choices.
//! * [`Semantics::PointSupported`] — threads must additionally pick, at
//!   every member, the block containing the base point itself.
//!
//! The two disagree: for a constant map `c` and a point `x ≠ c`, the
//! standard limit contains the thread through `c` while the point-supported
//! limit is void.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error as ThisError;

use crate::dynamics::{Endofunction, RecurrentBlocks};
use crate::error::{Error, Result};
use crate::partitions::{bell_number, enumerate_partitions, SetPartition, FULL_LATTICE_CEILING};

/// Which inverse limit a thread enumeration computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Semantics {
    /// All compatible choices.
    Standard,
    /// Compatible choices whose every block contains the base point.
    PointSupported,
}

impl Semantics {
    pub fn as_str(self) -> &'static str {
        match self {
            Semantics::Standard => "standard",
            Semantics::PointSupported => "point-supported",
        }
    }
}

impl std::fmt::Display for Semantics {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Semantics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(Semantics::Standard),
            "point-supported" => Ok(Semantics::PointSupported),
            other => Err(Error::Parse {
                position: 0,
                message: format!(
                    "unknown semantics '{other}' (expected 'standard' or 'point-supported')"
                ),
            }),
        }
    }
}

// ---------------------------------------------------------------------------
// Partition families
// ---------------------------------------------------------------------------

/// An ordered collection of distinct partitions of the same ground set.
///
/// The refinement structure between members (which pairs are comparable and
/// the coarsening table for each) is computed once, on first use, and shared
/// by every system built over the family.
#[derive(Debug)]
pub struct PartitionFamily {
    n: usize,
    members: Vec<SetPartition>,
    is_full_lattice: bool,
    relations: OnceLock<FamilyRelations>,
}

/// One comparable pair inside a family, with the coarsening table.
#[derive(Debug, Clone, Copy)]
pub struct RefinementEdge<'a> {
    /// Index of the finer member.
    pub fine: usize,
    /// Index of the coarser member.
    pub coarse: usize,
    /// `table[b]` is the coarse block containing fine block `b`.
    pub table: &'a [usize],
}

impl PartitionFamily {
    pub fn new(members: Vec<SetPartition>) -> Result<Self> {
        let n = members.first().ok_or(Error::EmptyFamily)?.n();
        let mut seen = std::collections::BTreeMap::new();
        for (index, member) in members.iter().enumerate() {
            if member.n() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: member.n(),
                });
            }
            if let Some(&first) = seen.get(member.rgs()) {
                return Err(Error::DuplicateFamilyMember { index, first });
            }
            seen.insert(member.rgs().to_vec(), index);
        }
        let is_full_lattice = bell_number(n) == Some(members.len() as u64);
        Ok(PartitionFamily {
            n,
            members,
            is_full_lattice,
            relations: OnceLock::new(),
        })
    }

    /// Every partition of `{0, …, n−1}`, in lexicographic rgs order.
    pub fn full_lattice(n: usize) -> Result<Self> {
        if n > FULL_LATTICE_CEILING {
            return Err(Error::CeilingExceeded {
                n,
                ceiling: FULL_LATTICE_CEILING,
                what: "full partition lattice",
            });
        }
        Self::full_lattice_unchecked(n)
    }

    /// Like [`PartitionFamily::full_lattice`] but without the size ceiling.
    pub fn full_lattice_unchecked(n: usize) -> Result<Self> {
        let members: Vec<SetPartition> = enumerate_partitions(n)?.collect();
        Ok(PartitionFamily {
            n,
            members,
            is_full_lattice: true,
            relations: OnceLock::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[SetPartition] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Whether the members are exactly all partitions of the ground set.
    pub fn is_full_lattice(&self) -> bool {
        self.is_full_lattice
    }

    /// All comparable pairs among members, with coarsening tables.
    pub fn refinement_edges(&self) -> impl Iterator<Item = RefinementEdge<'_>> + '_ {
        self.relations().edges.iter().map(|e| RefinementEdge {
            fine: e.fine,
            coarse: e.coarse,
            table: &e.table,
        })
    }

    fn relations(&self) -> &FamilyRelations {
        self.relations
            .get_or_init(|| FamilyRelations::compute(&self.members))
    }
}

#[derive(Debug)]
struct FamilyRelations {
    edges: Vec<FamilyEdge>,
    /// Member indices ordered coarsest first (fewest blocks, then rgs).
    search_order: Vec<usize>,
    /// Per search position: the edges linking that member to members
    /// assigned earlier. The earlier member is always the coarser one.
    constraints: Vec<Vec<usize>>,
}

#[derive(Debug)]
struct FamilyEdge {
    fine: usize,
    coarse: usize,
    table: Vec<usize>,
}

impl FamilyRelations {
    fn compute(members: &[SetPartition]) -> Self {
        let count = members.len();
        let mut edges = Vec::new();
        for fine in 0..count {
            for coarse in 0..count {
                if fine == coarse {
                    continue;
                }
                if members[fine]
                    .refines(&members[coarse])
                    .expect("family members share a ground set")
                {
                    let map =
                        crate::partitions::CoarseningMap::new(&members[fine], &members[coarse])
                            .expect("refinement was just checked");
                    edges.push(FamilyEdge {
                        fine,
                        coarse,
                        table: map.table().to_vec(),
                    });
                }
            }
        }
        let mut search_order: Vec<usize> = (0..count).collect();
        search_order.sort_by(|&a, &b| {
            (members[a].block_count(), members[a].rgs())
                .cmp(&(members[b].block_count(), members[b].rgs()))
        });
        let mut position_of = vec![0usize; count];
        for (position, &member) in search_order.iter().enumerate() {
            position_of[member] = position;
        }
        let mut constraints = vec![Vec::new(); count];
        for (index, edge) in edges.iter().enumerate() {
            // A strict coarsening has strictly fewer blocks, so the coarse
            // side always precedes the fine side in the search order.
            debug_assert!(position_of[edge.coarse] < position_of[edge.fine]);
            constraints[position_of[edge.fine]].push(index);
        }
        FamilyRelations {
            edges,
            search_order,
            constraints,
        }
    }
}

// ---------------------------------------------------------------------------
// The system at a point
// ---------------------------------------------------------------------------

/// The recurrent-block sets of one `(map, point)` pair across a family,
/// together with the coarsening maps restricted to them.
///
/// Construction checks that every restricted coarsening map lands inside its
/// target's recurrent set; a failure is reported as [`Error::Internal`]
/// because no input can legitimately produce one.
#[derive(Debug)]
pub struct InverseSystem<'a> {
    map: &'a Endofunction,
    point: usize,
    family: &'a PartitionFamily,
    nodes: Vec<RecurrentBlocks>,
}

/// The result of a capped thread enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreadEnumeration {
    pub threads: Vec<Thread>,
    /// True when more threads exist than the cap allowed to be returned.
    pub truncated: bool,
}

impl<'a> InverseSystem<'a> {
    pub fn build(map: &'a Endofunction, point: usize, family: &'a PartitionFamily) -> Result<Self> {
        if family.n() != map.n() {
            return Err(Error::DimensionMismatch {
                left: map.n(),
                right: family.n(),
            });
        }
        let nodes: Vec<RecurrentBlocks> = family
            .members()
            .iter()
            .map(|member| map.recurrent_blocks(point, member))
            .collect::<Result<_>>()?;
        for edge in &family.relations().edges {
            for &block in nodes[edge.fine].blocks() {
                if !nodes[edge.coarse].contains(edge.table[block]) {
                    return Err(Error::Internal(format!(
                        "recurrent block {block} of member {} maps to block {} of member {}, \
                         which is not recurrent",
                        edge.fine, edge.table[block], edge.coarse
                    )));
                }
            }
        }
        Ok(InverseSystem {
            map,
            point,
            family,
            nodes,
        })
    }

    pub fn map(&self) -> &Endofunction {
        self.map
    }

    pub fn point(&self) -> usize {
        self.point
    }

    pub fn family(&self) -> &PartitionFamily {
        self.family
    }

    /// Per family member, the recurrent blocks of the base point's orbit.
    pub fn nodes(&self) -> &[RecurrentBlocks] {
        &self.nodes
    }

    /// All threads of the inverse limit under the given semantics, in
    /// ascending order of their choice vectors.
    pub fn threads(&self, semantics: Semantics) -> Vec<Thread> {
        self.threads_capped(semantics, None).threads
    }

    /// Like [`InverseSystem::threads`], returning at most `cap` threads and
    /// flagging whether any were cut off.
    ///
    /// Backtracking runs over members ordered coarsest first, after an
    /// arc-consistency pass has removed every block with no compatible
    /// image or preimage across some edge.
    pub fn threads_capped(&self, semantics: Semantics, cap: Option<usize>) -> ThreadEnumeration {
        let relations = self.family.relations();
        let members = self.family.members();
        let mut domains: Vec<Vec<usize>> = self
            .nodes
            .iter()
            .map(|node| node.blocks().to_vec())
            .collect();
        if semantics == Semantics::PointSupported {
            for (index, member) in members.iter().enumerate() {
                let home = member.block_of(self.point);
                domains[index].retain(|&block| block == home);
            }
        }

        // Arc consistency to a fixpoint.
        loop {
            let mut changed = false;
            for edge in &relations.edges {
                let kept: Vec<usize> = domains[edge.fine]
                    .iter()
                    .copied()
                    .filter(|&block| domains[edge.coarse].contains(&edge.table[block]))
                    .collect();
                if kept.len() != domains[edge.fine].len() {
                    domains[edge.fine] = kept;
                    changed = true;
                }
                let kept: Vec<usize> = domains[edge.coarse]
                    .iter()
                    .copied()
                    .filter(|&target| {
                        domains[edge.fine]
                            .iter()
                            .any(|&block| edge.table[block] == target)
                    })
                    .collect();
                if kept.len() != domains[edge.coarse].len() {
                    domains[edge.coarse] = kept;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if domains.iter().any(Vec::is_empty) {
            return ThreadEnumeration {
                threads: Vec::new(),
                truncated: false,
            };
        }

        let mut search = ThreadSearch {
            relations,
            domains: &domains,
            assignment: vec![usize::MAX; members.len()],
            found: Vec::new(),
            cap,
            truncated: false,
        };
        search.dive(0);
        let mut threads = search.found;
        threads.sort();
        ThreadEnumeration {
            threads,
            truncated: search.truncated,
        }
    }

    /// Checks a thread against the system from first principles: every
    /// choice must be a recurrent block, choices of comparable members must
    /// nest as element sets, and under point-supported semantics every
    /// choice must contain the base point. Deliberately does not reuse the
    /// search machinery or the cached coarsening tables.
    pub fn verify_thread(
        &self,
        thread: &Thread,
        semantics: Semantics,
    ) -> std::result::Result<(), ThreadViolation> {
        let members = self.family.members();
        if thread.choices.len() != members.len() {
            return Err(ThreadViolation::WrongLength {
                got: thread.choices.len(),
                expected: members.len(),
            });
        }
        for (member, &choice) in thread.choices.iter().enumerate() {
            if choice >= members[member].block_count() || !self.nodes[member].contains(choice) {
                return Err(ThreadViolation::NotRecurrent {
                    member,
                    block: choice,
                });
            }
            if semantics == Semantics::PointSupported
                && members[member].block_of(self.point) != choice
            {
                return Err(ThreadViolation::MissingPoint {
                    member,
                    point: self.point,
                });
            }
        }
        let n = self.family.n();
        for fine in 0..members.len() {
            for coarse in 0..members.len() {
                if fine == coarse {
                    continue;
                }
                if !members[fine]
                    .refines(&members[coarse])
                    .expect("family members share a ground set")
                {
                    continue;
                }
                for element in 0..n {
                    if members[fine].block_of(element) == thread.choices[fine]
                        && members[coarse].block_of(element) != thread.choices[coarse]
                    {
                        return Err(ThreadViolation::Incompatible {
                            fine,
                            coarse,
                            fine_block: thread.choices[fine],
                            coarse_block: thread.choices[coarse],
                            actual: members[coarse].block_of(element),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

struct ThreadSearch<'r> {
    relations: &'r FamilyRelations,
    domains: &'r [Vec<usize>],
    assignment: Vec<usize>,
    found: Vec<Thread>,
    cap: Option<usize>,
    truncated: bool,
}

impl ThreadSearch<'_> {
    /// Returns true when the search should stop (cap reached).
    fn dive(&mut self, position: usize) -> bool {
        if position == self.relations.search_order.len() {
            if self.cap.is_some_and(|cap| self.found.len() >= cap) {
                self.truncated = true;
                return true;
            }
            self.found.push(Thread {
                choices: self.assignment.clone(),
            });
            return false;
        }
        let member = self.relations.search_order[position];
        'candidates: for &block in &self.domains[member] {
            for &edge_index in &self.relations.constraints[position] {
                let edge = &self.relations.edges[edge_index];
                if edge.table[block] != self.assignment[edge.coarse] {
                    continue 'candidates;
                }
            }
            self.assignment[member] = block;
            if self.dive(position + 1) {
                return true;
            }
        }
        false
    }
}

// ---------------------------------------------------------------------------
// Threads
// ---------------------------------------------------------------------------

/// One element of the inverse limit: a block choice per family member,
/// compatible under every coarsening map.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Thread {
    choices: Vec<usize>,
}

impl Thread {
    /// A thread from explicit choices; validity is the caller's concern
    /// (see [`InverseSystem::verify_thread`]).
    pub fn from_choices(choices: Vec<usize>) -> Self {
        Thread { choices }
    }

    /// `choices()[i]` is the chosen block index in family member `i`.
    pub fn choices(&self) -> &[usize] {
        &self.choices
    }

    /// Renders the thread against its family: one entry per member mapping
    /// the partition (rgs text) to the chosen block (element-set text).
    pub fn to_record(&self, family: &PartitionFamily) -> ThreadRecord {
        let entries = self
            .choices
            .iter()
            .zip(family.members())
            .map(|(&block, member)| ThreadEntry {
                partition: member.rgs_text(),
                block: member.block_text(block),
            })
            .collect();
        ThreadRecord(entries)
    }
}

/// Serialized form of one thread.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ThreadRecord(pub Vec<ThreadEntry>);

/// One member's entry in a serialized thread.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreadEntry {
    /// The partition, in rgs text form.
    pub partition: String,
    /// The chosen block, in element-set text form.
    pub block: String,
}

/// Why a purported thread is not one.
#[derive(Debug, Clone, PartialEq, Eq, ThisError)]
pub enum ThreadViolation {
    #[error("thread has {got} choices but the family has {expected} members")]
    WrongLength { got: usize, expected: usize },

    #[error("choice {block} at member {member} is not a recurrent block")]
    NotRecurrent { member: usize, block: usize },

    #[error("choice {fine_block} at member {fine} lands in block {actual} of member {coarse}, not the chosen {coarse_block}")]
    Incompatible {
        fine: usize,
        coarse: usize,
        fine_block: usize,
        coarse_block: usize,
        actual: usize,
    },

    #[error("choice at member {member} does not contain the base point {point}")]
    MissingPoint { member: usize, point: usize },
}

/// Fast path for the full lattice: the all-singletons member pins every
/// thread to a single cycle point, so the limit has exactly one thread per
/// point of the eventual cycle, choosing that point's block everywhere.
///
/// Only valid on the full lattice; other families are rejected.
pub fn threads_via_cycle(
    map: &Endofunction,
    point: usize,
    family: &PartitionFamily,
) -> Result<Vec<Thread>> {
    if !family.is_full_lattice() {
        return Err(Error::Usage {
            op: "threads_via_cycle",
            message: "family must be the full partition lattice".into(),
        });
    }
    if family.n() != map.n() {
        return Err(Error::DimensionMismatch {
            left: map.n(),
            right: family.n(),
        });
    }
    let shape = map.orbit_shape(point)?;
    let mut threads: Vec<Thread> = shape
        .cycle()
        .iter()
        .map(|&cycle_point| Thread {
            choices: family
                .members()
                .iter()
                .map(|member| member.block_of(cycle_point))
                .collect(),
        })
        .collect();
    threads.sort();
    debug_assert!(threads.windows(2).all(|pair| pair[0] != pair[1]));
    Ok(threads)
}
