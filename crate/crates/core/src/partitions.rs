//! Canonical set partitions of `{0, …, n−1}`: construction, exhaustive
//! enumeration, the refinement order, coarsening maps, and common
//! refinements.
//!
//! A partition is stored as a restricted-growth string (rgs): position `i`
//! holds the index of the block containing element `i`, block indices appear
//! in first-use order, so `rgs[0] = 0` and `rgs[i] ≤ 1 + max(rgs[..i])`.
//! The rgs form is unique per partition, which makes equality, hashing, and
//! lexicographic enumeration cheap.
//!
//! Order-direction convention: `fine.refines(coarse)` holds when every block
//! of `fine` sits inside a block of `coarse`. In lattice terms the one-block
//! partition is the minimum and the all-singletons partition is the maximum.

use std::fmt;

use crate::error::{Error, Result};

/// Soft ceiling for materializing every partition of a ground set at once.
///
/// B(12) = 4,213,597 partitions is the last size that is remotely practical
/// to hold in memory; callers that know better can use the unchecked
/// constructors.
pub const FULL_LATTICE_CEILING: usize = 12;

/// A partition of `{0, …, n−1}` in canonical restricted-growth form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    rgs: Vec<usize>,
    block_count: usize,
}

impl SetPartition {
    /// Builds a partition from a restricted-growth string.
    pub fn from_rgs(rgs: Vec<usize>) -> Result<Self> {
        if rgs.is_empty() {
            return Err(Error::EmptyGroundSet);
        }
        if rgs[0] != 0 {
            return Err(Error::InvalidRgs {
                position: 0,
                value: rgs[0],
                max_allowed: 0,
            });
        }
        let mut max_seen = 0;
        for (position, &value) in rgs.iter().enumerate().skip(1) {
            if value > max_seen + 1 {
                return Err(Error::InvalidRgs {
                    position,
                    value,
                    max_allowed: max_seen + 1,
                });
            }
            max_seen = max_seen.max(value);
        }
        Ok(SetPartition {
            block_count: max_seen + 1,
            rgs,
        })
    }

    /// Builds the unique canonical partition with the given blocks.
    ///
    /// The blocks must be nonempty, pairwise disjoint, and cover
    /// `{0, …, n−1}` exactly; the error names the offending element or block.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGroundSet);
        }
        let mut owner: Vec<Option<usize>> = vec![None; n];
        for (index, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::EmptyBlock { index });
            }
            for &element in block {
                if element >= n {
                    return Err(Error::ElementOutOfRange { element, n });
                }
                if owner[element].is_some() {
                    return Err(Error::OverlappingElement { element });
                }
                owner[element] = Some(index);
            }
        }
        // Relabel blocks in first-use order so the result is canonical.
        let mut relabel: Vec<Option<usize>> = vec![None; blocks.len()];
        let mut next_label = 0;
        let mut rgs = Vec::with_capacity(n);
        for (element, &slot) in owner.iter().enumerate() {
            let given = slot.ok_or(Error::MissingElement { element })?;
            let label = match relabel[given] {
                Some(label) => label,
                None => {
                    let label = next_label;
                    relabel[given] = Some(label);
                    next_label += 1;
                    label
                }
            };
            rgs.push(label);
        }
        Ok(SetPartition {
            rgs,
            block_count: next_label,
        })
    }

    /// The all-singletons partition `{{0}, {1}, …}`.
    pub fn singletons(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGroundSet);
        }
        Ok(SetPartition {
            rgs: (0..n).collect(),
            block_count: n,
        })
    }

    /// The one-block partition `{{0, …, n−1}}`.
    pub fn one_block(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGroundSet);
        }
        Ok(SetPartition {
            rgs: vec![0; n],
            block_count: 1,
        })
    }

    /// Trusted constructor for callers that already hold a canonical rgs.
    pub(crate) fn from_canonical_rgs(rgs: Vec<usize>, block_count: usize) -> Self {
        debug_assert!(is_valid_rgs(&rgs));
        debug_assert_eq!(rgs.iter().max().map(|&m| m + 1), Some(block_count));
        SetPartition { rgs, block_count }
    }

    /// Ground-set size.
    pub fn n(&self) -> usize {
        self.rgs.len()
    }

    /// Number of blocks.
    pub fn block_count(&self) -> usize {
        self.block_count
    }

    /// The restricted-growth string.
    pub fn rgs(&self) -> &[usize] {
        &self.rgs
    }

    /// Index of the block containing `element`.
    pub fn block_of(&self, element: usize) -> usize {
        self.rgs[element]
    }

    /// Elements of block `block`, ascending.
    pub fn block_elements(&self, block: usize) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.rgs[i] == block).collect()
    }

    /// All blocks as element sets, in block-index order.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.block_count];
        for (element, &block) in self.rgs.iter().enumerate() {
            blocks[block].push(element);
        }
        blocks
    }

    /// Whether every block of `self` is contained in some block of `coarse`.
    ///
    /// Single pass: two elements sharing a block here must share a block in
    /// `coarse`.
    pub fn refines(&self, coarse: &SetPartition) -> Result<bool> {
        if self.n() != coarse.n() {
            return Err(Error::DimensionMismatch {
                left: self.n(),
                right: coarse.n(),
            });
        }
        let mut image: Vec<Option<usize>> = vec![None; self.block_count];
        for (element, &fine_block) in self.rgs.iter().enumerate() {
            let coarse_block = coarse.rgs[element];
            match image[fine_block] {
                None => image[fine_block] = Some(coarse_block),
                Some(seen) if seen != coarse_block => return Ok(false),
                Some(_) => {}
            }
        }
        Ok(true)
    }

    /// The rgs in text form, e.g. `[0,0,1]`.
    pub fn rgs_text(&self) -> String {
        let body: Vec<String> = self.rgs.iter().map(|b| b.to_string()).collect();
        format!("[{}]", body.join(","))
    }

    /// One block in text form, e.g. `{0,1}`.
    pub fn block_text(&self, block: usize) -> String {
        let body: Vec<String> = self
            .block_elements(block)
            .iter()
            .map(|e| e.to_string())
            .collect();
        format!("{{{}}}", body.join(","))
    }

    /// The blocks in text form, e.g. `{0,1}|{2}`.
    pub fn blocks_text(&self) -> String {
        let blocks: Vec<String> = self
            .blocks()
            .iter()
            .map(|block| {
                let body: Vec<String> = block.iter().map(|e| e.to_string()).collect();
                format!("{{{}}}", body.join(","))
            })
            .collect();
        blocks.join("|")
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.blocks_text())
    }
}

pub(crate) fn is_valid_rgs(rgs: &[usize]) -> bool {
    if rgs.is_empty() || rgs[0] != 0 {
        return false;
    }
    let mut max_seen = 0;
    for &value in &rgs[1..] {
        if value > max_seen + 1 {
            return false;
        }
        max_seen = max_seen.max(value);
    }
    true
}

/// The map sending each block of a finer partition to the block of a coarser
/// one that contains it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoarseningMap {
    fine: SetPartition,
    coarse: SetPartition,
    table: Vec<usize>,
}

impl CoarseningMap {
    /// Builds the coarsening map; errors unless `fine` refines `coarse`.
    pub fn new(fine: &SetPartition, coarse: &SetPartition) -> Result<Self> {
        if fine.n() != coarse.n() {
            return Err(Error::DimensionMismatch {
                left: fine.n(),
                right: coarse.n(),
            });
        }
        let mut table: Vec<Option<usize>> = vec![None; fine.block_count()];
        for (element, &fine_block) in fine.rgs.iter().enumerate() {
            let coarse_block = coarse.rgs[element];
            match table[fine_block] {
                None => table[fine_block] = Some(coarse_block),
                Some(seen) if seen != coarse_block => {
                    return Err(Error::NotARefinement {
                        fine: fine.blocks_text(),
                        coarse: coarse.blocks_text(),
                    });
                }
                Some(_) => {}
            }
        }
        // Every fine block occurs in the rgs, so the table is total.
        let table = table.into_iter().map(Option::unwrap).collect();
        Ok(CoarseningMap {
            fine: fine.clone(),
            coarse: coarse.clone(),
            table,
        })
    }

    pub fn fine(&self) -> &SetPartition {
        &self.fine
    }

    pub fn coarse(&self) -> &SetPartition {
        &self.coarse
    }

    /// `table[b]` is the coarse block containing fine block `b`.
    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// The coarse block containing fine block `fine_block`.
    pub fn apply(&self, fine_block: usize) -> usize {
        self.table[fine_block]
    }
}

/// The coarsest partition refining both arguments: elements share a block in
/// the result exactly when they share a block in `p` and in `q`.
pub fn common_refinement(p: &SetPartition, q: &SetPartition) -> Result<SetPartition> {
    if p.n() != q.n() {
        return Err(Error::DimensionMismatch {
            left: p.n(),
            right: q.n(),
        });
    }
    let n = p.n();
    let mut label: Vec<Option<usize>> = vec![None; p.block_count() * q.block_count()];
    let mut next_label = 0;
    let mut rgs = Vec::with_capacity(n);
    for element in 0..n {
        let key = p.rgs[element] * q.block_count() + q.rgs[element];
        let value = match label[key] {
            Some(value) => value,
            None => {
                let value = next_label;
                label[key] = Some(value);
                next_label += 1;
                value
            }
        };
        rgs.push(value);
    }
    Ok(SetPartition::from_canonical_rgs(rgs, next_label))
}

/// Iterator over every partition of `{0, …, n−1}` in lexicographic rgs
/// order, from the one-block partition to all singletons.
#[derive(Debug, Clone)]
pub struct Partitions {
    rgs: Vec<usize>,
    // prefix_max[i] = max(rgs[..=i]); kept in step with rgs while advancing.
    prefix_max: Vec<usize>,
    done: bool,
}

/// Streams all partitions of `{0, …, n−1}`; the count is the Bell number
/// B(n). The stream is lazy, so large `n` is only bounded by the caller's
/// patience, but materializing it is subject to [`FULL_LATTICE_CEILING`].
pub fn enumerate_partitions(n: usize) -> Result<Partitions> {
    if n == 0 {
        return Err(Error::EmptyGroundSet);
    }
    Ok(Partitions {
        rgs: vec![0; n],
        prefix_max: vec![0; n],
        done: false,
    })
}

impl Iterator for Partitions {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        if self.done {
            return None;
        }
        let n = self.rgs.len();
        let item = SetPartition::from_canonical_rgs(self.rgs.clone(), self.prefix_max[n - 1] + 1);
        // Advance to the lexicographic successor: bump the rightmost
        // position that has not reached its growth bound, zero the suffix.
        let mut advanced = false;
        for j in (1..n).rev() {
            if self.rgs[j] <= self.prefix_max[j - 1] {
                self.rgs[j] += 1;
                self.prefix_max[j] = self.prefix_max[j - 1].max(self.rgs[j]);
                for k in j + 1..n {
                    self.rgs[k] = 0;
                    self.prefix_max[k] = self.prefix_max[j];
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            self.done = true;
        }
        Some(item)
    }
}

/// B(n) via the Bell triangle; `None` once the value overflows u64.
pub fn bell_number(n: usize) -> Option<u64> {
    if n == 0 {
        return Some(1);
    }
    let mut row = vec![1u64];
    for _ in 1..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().unwrap());
        for &value in &row {
            let sum = next.last().unwrap().checked_add(value)?;
            next.push(sum);
        }
        row = next;
    }
    Some(row[row.len() - 1])
}
