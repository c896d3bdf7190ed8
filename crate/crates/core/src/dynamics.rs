//! Finite endofunctions and their orbit structure.
//!
//! Every forward orbit of a map on a finite set is rho-shaped: a (possibly
//! empty) tail followed by an eventual cycle. A subset is visited infinitely
//! often by the orbit of `x` exactly when it meets that cycle, so the
//! "infinitely often" predicate is decided exactly, with no iteration
//! budget; bounded simulation is only ever used as a test oracle. Orbit
//! indexing starts at 1: the first iterate counted is `T(x)`, not `x`
//! itself, so a point on a tail never contributes its own block.

use std::fmt;

use crate::error::{Error, Result};
use crate::partitions::SetPartition;

/// A map `{0, …, n−1} → {0, …, n−1}` stored as its image table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Endofunction {
    table: Vec<usize>,
}

impl Endofunction {
    pub fn new(table: Vec<usize>) -> Result<Self> {
        if table.is_empty() {
            return Err(Error::EmptyGroundSet);
        }
        let n = table.len();
        for (position, &value) in table.iter().enumerate() {
            if value >= n {
                return Err(Error::EntryOutOfRange { position, value, n });
            }
        }
        Ok(Endofunction { table })
    }

    /// The identity map on `{0, …, n−1}`.
    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGroundSet);
        }
        Ok(Endofunction {
            table: (0..n).collect(),
        })
    }

    /// The constant map sending everything to `c`.
    pub fn constant(n: usize, c: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGroundSet);
        }
        if c >= n {
            return Err(Error::PointOutOfRange { point: c, n });
        }
        Ok(Endofunction { table: vec![c; n] })
    }

    /// The `index`-th table in lexicographic order (most significant digit
    /// first), for `index < n^n`.
    pub fn from_index(n: usize, index: u64) -> Result<Self> {
        let count = endofunction_count(n).ok_or(Error::CeilingExceeded {
            n,
            ceiling: 15,
            what: "endofunction indexing",
        })?;
        if index >= count {
            return Err(Error::Usage {
                op: "from_index",
                message: format!("index {index} out of range for {count} tables"),
            });
        }
        let mut table = vec![0usize; n];
        let mut rest = index;
        for slot in table.iter_mut().rev() {
            *slot = (rest % n as u64) as usize;
            rest /= n as u64;
        }
        Ok(Endofunction { table })
    }

    pub fn n(&self) -> usize {
        self.table.len()
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// `T(x)`.
    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    fn check_point(&self, x: usize) -> Result<()> {
        if x >= self.n() {
            return Err(Error::PointOutOfRange {
                point: x,
                n: self.n(),
            });
        }
        Ok(())
    }

    /// Decomposes the forward orbit of `x` into its tail and eventual cycle.
    pub fn orbit_shape(&self, x: usize) -> Result<OrbitShape> {
        self.check_point(x)?;
        let mut first_visit = vec![usize::MAX; self.n()];
        let mut order = Vec::new();
        let mut current = x;
        while first_visit[current] == usize::MAX {
            first_visit[current] = order.len();
            order.push(current);
            current = self.table[current];
        }
        let cycle_start = first_visit[current];
        let cycle = order.split_off(cycle_start);
        Ok(OrbitShape {
            x,
            tail: order,
            cycle,
        })
    }

    /// Whether `x` lies on its own cycle, i.e. `T^k(x) = x` for some `k ≥ 1`.
    pub fn is_periodic(&self, x: usize) -> Result<bool> {
        Ok(self.orbit_shape(x)?.tail.is_empty())
    }

    /// Whether the orbit of `x` enters `block` infinitely often, i.e.
    /// whether `block` meets the eventual cycle of `x`.
    pub fn visits_infinitely(&self, x: usize, block: &[usize]) -> Result<bool> {
        self.check_point(x)?;
        for &element in block {
            if element >= self.n() {
                return Err(Error::ElementOutOfRange {
                    element,
                    n: self.n(),
                });
            }
        }
        let shape = self.orbit_shape(x)?;
        Ok(block.iter().any(|e| shape.cycle.contains(e)))
    }

    /// The blocks of `partition` that the orbit of `x` visits infinitely
    /// often. Never empty: the cycle is nonempty and every cycle point lies
    /// in some block.
    pub fn recurrent_blocks(&self, x: usize, partition: &SetPartition) -> Result<RecurrentBlocks> {
        if partition.n() != self.n() {
            return Err(Error::DimensionMismatch {
                left: self.n(),
                right: partition.n(),
            });
        }
        let shape = self.orbit_shape(x)?;
        let mut hit = vec![false; partition.block_count()];
        for &point in shape.cycle() {
            hit[partition.block_of(point)] = true;
        }
        let blocks: Vec<usize> = (0..partition.block_count()).filter(|&b| hit[b]).collect();
        debug_assert!(!blocks.is_empty());
        Ok(RecurrentBlocks {
            partition: partition.clone(),
            blocks,
        })
    }
}

impl fmt::Display for Endofunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.table.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", body.join(","))
    }
}

/// `n^n` as a u64, if it fits.
pub fn endofunction_count(n: usize) -> Option<u64> {
    let n64 = n as u64;
    let mut count = 1u64;
    for _ in 0..n {
        count = count.checked_mul(n64)?;
    }
    Some(count)
}

/// The tail-and-cycle decomposition of one forward orbit.
///
/// `tail` runs from `x` up to (not including) the first repeated point;
/// `cycle` starts at that point and lists the eventual cycle in orbit order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitShape {
    x: usize,
    tail: Vec<usize>,
    cycle: Vec<usize>,
}

impl OrbitShape {
    pub fn x(&self) -> usize {
        self.x
    }

    pub fn tail(&self) -> &[usize] {
        &self.tail
    }

    pub fn cycle(&self) -> &[usize] {
        &self.cycle
    }

    pub fn tail_length(&self) -> usize {
        self.tail.len()
    }

    pub fn cycle_length(&self) -> usize {
        self.cycle.len()
    }

    /// True exactly when the tail is empty.
    pub fn is_periodic(&self) -> bool {
        self.tail.is_empty()
    }
}

/// The set of blocks of one partition that an orbit revisits forever.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrentBlocks {
    partition: SetPartition,
    blocks: Vec<usize>,
}

impl RecurrentBlocks {
    pub fn partition(&self) -> &SetPartition {
        &self.partition
    }

    /// Recurrent block indices, ascending.
    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn contains(&self, block: usize) -> bool {
        self.blocks.binary_search(&block).is_ok()
    }
}

/// Iterator over all `n^n` image tables in lexicographic order.
#[derive(Debug, Clone)]
pub struct Endofunctions {
    table: Vec<usize>,
    done: bool,
}

pub fn enumerate_endofunctions(n: usize) -> Result<Endofunctions> {
    if n == 0 {
        return Err(Error::EmptyGroundSet);
    }
    Ok(Endofunctions {
        table: vec![0; n],
        done: false,
    })
}

impl Iterator for Endofunctions {
    type Item = Endofunction;

    fn next(&mut self) -> Option<Endofunction> {
        if self.done {
            return None;
        }
        let item = Endofunction {
            table: self.table.clone(),
        };
        let n = self.table.len();
        // Odometer increment, least significant digit last.
        let mut j = n;
        loop {
            if j == 0 {
                self.done = true;
                break;
            }
            j -= 1;
            if self.table[j] + 1 < n {
                self.table[j] += 1;
                for slot in &mut self.table[j + 1..] {
                    *slot = 0;
                }
                break;
            }
        }
        Some(item)
    }
}
