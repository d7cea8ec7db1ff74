//! Ordered enumeration of a series' support.
//!
//! The families are merged through a min-heap keyed by exact exponent.
//! Tuples are generated along a tree in which a child increments coordinate
//! `i` only when all earlier coordinates sit at their starts, so every tuple
//! is produced exactly once, and the parent's exponent never exceeds the
//! child's (ladders are increasing). All tuples sharing the minimal exponent
//! are popped together and their coefficients aggregated; exact zeros are
//! skipped, so the output is the true support in increasing order.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::coeff::Coeff;
use crate::exponent::Exponent;

use super::Series;

/// Ceiling on heap pops per call, so enumeration over adversarial inputs
/// (e.g. long runs of cancelling points) still returns.
pub const DEFAULT_TUPLE_BUDGET: usize = 200_000;

type Entry = Reverse<(Exponent, usize, Vec<u64>)>;

impl Series {
    /// The first `count` support points in increasing exponent order with
    /// their exact coefficients. The second component is `true` when the
    /// support was exhausted (fewer than `count` points exist).
    pub fn enumerate(&self, count: usize) -> (Vec<(Exponent, Coeff)>, bool) {
        self.enumerate_with_budget(count, DEFAULT_TUPLE_BUDGET)
    }

    /// As [`Series::enumerate`] but with an explicit pop budget. When the
    /// budget runs out before `count` points are found, the points gathered
    /// so far are returned with `false` (not exhausted).
    pub fn enumerate_with_budget(
        &self,
        count: usize,
        budget: usize,
    ) -> (Vec<(Exponent, Coeff)>, bool) {
        let mut heap: BinaryHeap<Entry> = BinaryHeap::new();
        for (fi, f) in self.families().iter().enumerate() {
            let idx: Vec<u64> = f.dims.iter().map(|d| d.start).collect();
            heap.push(Reverse((f.exponent_at(&idx), fi, idx)));
        }
        let mut out = Vec::new();
        let mut pops = 0usize;
        while let Some(Reverse((e, fi, idx))) = heap.pop() {
            if pops >= budget {
                // Put the entry back conceptually; report non-exhaustion.
                return (out, false);
            }
            pops += 1;
            let mut coeff = self.families()[fi].coefficient_at(&idx);
            self.push_children(&mut heap, fi, &idx);
            // Drain every tuple at the same exponent, pushing children as we
            // go so same-valued children join the batch.
            while let Some(Reverse((e2, _, _))) = heap.peek() {
                if *e2 != e {
                    break;
                }
                let Reverse((_, fj, jdx)) = heap.pop().unwrap();
                pops += 1;
                coeff = coeff.add(&self.families()[fj].coefficient_at(&jdx));
                self.push_children(&mut heap, fj, &jdx);
            }
            if !coeff.is_zero() {
                out.push((e, coeff));
                if out.len() == count {
                    return (out, false);
                }
            }
        }
        (out, true)
    }

    fn push_children(&self, heap: &mut BinaryHeap<Entry>, fi: usize, idx: &[u64]) {
        let f = &self.families()[fi];
        for i in 0..idx.len() {
            if idx[..i].iter().zip(&f.dims).any(|(n, d)| *n != d.start) {
                break;
            }
            let mut child = idx.to_vec();
            child[i] += 1;
            heap.push(Reverse((f.exponent_at(&child), fi, child)));
        }
    }
}
