//! Independent oracles shared by the integration suites.
//!
//! Nothing here reuses the code paths under test: cycle structure comes
//! from Floyd's tortoise-and-hare, recurrence from bounded simulation,
//! refinement from direct element-set containment, thread enumeration from
//! filtered cartesian products, and partition counts from the Bell triangle.

#![allow(dead_code)]

use fpc_core::dynamics::Endofunction;
use fpc_core::inverse_system::{PartitionFamily, Semantics};
use fpc_core::partitions::SetPartition;

/// B(n) from the Bell triangle: each row starts with the previous row's last
/// entry and adds pairwise sums; B(n) is the first entry of row n.
pub fn bell_triangle(n: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &value in &row {
            let last = *next.last().unwrap();
            next.push(last + value);
        }
        row = next;
    }
    row[0]
}

/// Tail and cycle lengths of the orbit of `x`, by Floyd's tortoise-and-hare.
pub fn floyd_tail_cycle(map: &Endofunction, x: usize) -> (usize, usize) {
    let step = |p: usize| map.apply(p);
    let mut tortoise = step(x);
    let mut hare = step(step(x));
    while tortoise != hare {
        tortoise = step(tortoise);
        hare = step(step(hare));
    }
    let mut tail = 0;
    let mut tortoise = x;
    while tortoise != hare {
        tortoise = step(tortoise);
        hare = step(hare);
        tail += 1;
    }
    let mut cycle = 1;
    let mut hare = step(tortoise);
    while tortoise != hare {
        hare = step(hare);
        cycle += 1;
    }
    (tail, cycle)
}

/// Whether the orbit of `x` enters `block` infinitely often, by simulating
/// `tail + 2·cycle` steps and only counting hits past the tail.
pub fn simulated_visits(map: &Endofunction, x: usize, block: &[usize]) -> bool {
    let (tail, cycle) = floyd_tail_cycle(map, x);
    let mut current = x;
    let mut hit = false;
    for step in 1..=tail + 2 * cycle {
        current = map.apply(current);
        if step > tail && block.contains(&current) {
            hit = true;
        }
    }
    hit
}

/// Refinement by definition: every block of `fine`, as an element set, is a
/// subset of some block of `coarse`.
pub fn refines_by_containment(fine: &SetPartition, coarse: &SetPartition) -> bool {
    fine.blocks().iter().all(|fine_block| {
        coarse
            .blocks()
            .iter()
            .any(|coarse_block| fine_block.iter().all(|e| coarse_block.contains(e)))
    })
}

/// All subsets of `{0, …, n−1}`, including the empty one.
pub fn all_subsets(n: usize) -> Vec<Vec<usize>> {
    (0..1usize << n)
        .map(|mask| (0..n).filter(|&e| mask & (1 << e) != 0).collect())
        .collect()
}

/// Thread enumeration by brute force: per member, candidate blocks are those
/// the simulation oracle marks recurrent; candidates are combined by
/// cartesian product and filtered by element-set containment across every
/// comparable pair. Only usable for small families.
pub fn brute_force_threads(
    map: &Endofunction,
    x: usize,
    family: &PartitionFamily,
    semantics: Semantics,
) -> Vec<Vec<usize>> {
    let members = family.members();
    let candidates: Vec<Vec<usize>> = members
        .iter()
        .map(|member| {
            (0..member.block_count())
                .filter(|&block| {
                    let elements = member.block_elements(block);
                    let recurrent = simulated_visits(map, x, &elements);
                    let supported = semantics == Semantics::Standard || elements.contains(&x);
                    recurrent && supported
                })
                .collect()
        })
        .collect();

    let mut found = Vec::new();
    let mut choice = vec![0usize; members.len()];
    product(&candidates, 0, &mut choice, &mut |choice| {
        for fine in 0..members.len() {
            for coarse in 0..members.len() {
                if fine == coarse || !refines_by_containment(&members[fine], &members[coarse]) {
                    continue;
                }
                let fine_elements = members[fine].block_elements(choice[fine]);
                let coarse_elements = members[coarse].block_elements(choice[coarse]);
                if !fine_elements.iter().all(|e| coarse_elements.contains(e)) {
                    return;
                }
            }
        }
        found.push(choice.to_vec());
    });
    found.sort();
    found
}

fn product(
    candidates: &[Vec<usize>],
    index: usize,
    choice: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    if index == candidates.len() {
        visit(choice);
        return;
    }
    for &value in &candidates[index] {
        choice[index] = value;
        product(candidates, index + 1, choice, visit);
    }
}

/// Deterministic 64-bit generator for test-side sampling (SplitMix64).
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Unbiased draw from `0..n` by rejection.
    pub fn below(&mut self, n: u64) -> u64 {
        let threshold = u64::MAX - u64::MAX % n;
        loop {
            let value = self.next_u64();
            if value < threshold {
                return value % n;
            }
        }
    }
}

/// Every nonempty sub-family of the full lattice at `n`, in a fixed order.
pub fn all_subfamilies(n: usize) -> Vec<PartitionFamily> {
    let members: Vec<SetPartition> = fpc_core::enumerate_partitions(n).unwrap().collect();
    let count = members.len();
    assert!(count <= 16, "sub-family enumeration is for tiny lattices");
    (1..1usize << count)
        .map(|mask| {
            let chosen: Vec<SetPartition> = (0..count)
                .filter(|&i| mask & (1 << i) != 0)
                .map(|i| members[i].clone())
                .collect();
            PartitionFamily::new(chosen).unwrap()
        })
        .collect()
}
