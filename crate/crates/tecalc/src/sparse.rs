//! Exact sparse linear systems solved by incremental elimination.
//!
//! Rows are reduced against the pivots seen so far as they arrive, which keeps the
//! block-triangular systems coming from order-by-order series equations sparse.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::scalar::Scalar;

type SparseRow = BTreeMap<usize, Scalar>;

#[derive(Debug, Clone, Default)]
pub struct SparseSystem {
    ncols: usize,
    pivots: BTreeMap<usize, (SparseRow, Scalar)>,
    inconsistent: bool,
}

/// Solution set `particular + span(kernel)`; `particular` is `None` for an inconsistent system.
#[derive(Debug, Clone)]
pub struct SolutionSet {
    pub particular: Option<Vec<Scalar>>,
    pub kernel: Vec<Vec<Scalar>>,
}

impl SparseSystem {
    pub fn new(ncols: usize) -> Self {
        SparseSystem {
            ncols,
            ..Default::default()
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_inconsistent(&self) -> bool {
        self.inconsistent
    }

    /// Add the equation `Σ coeff·x[col] = rhs`.
    pub fn push(&mut self, entries: impl IntoIterator<Item = (usize, Scalar)>, rhs: Scalar) {
        let mut row = SparseRow::new();
        for (c, v) in entries {
            assert!(c < self.ncols, "column {c} out of range");
            if v.is_zero() {
                continue;
            }
            let slot = row.entry(c).or_insert_with(Scalar::zero);
            *slot += &v;
            if slot.is_zero() {
                row.remove(&c);
            }
        }
        let mut rhs = rhs;
        let mut cursor = 0usize;
        while let Some((&c, _)) = row.range(cursor..).find(|(c, _)| self.pivots.contains_key(c)) {
            let factor = row.remove(&c).expect("present");
            let (prow, prhs) = &self.pivots[&c];
            for (&pc, pv) in prow.range(c + 1..) {
                let slot = row.entry(pc).or_insert_with(Scalar::zero);
                *slot -= &(&factor * pv);
                if slot.is_zero() {
                    row.remove(&pc);
                }
            }
            rhs -= &(&factor * prhs);
            cursor = c + 1;
        }
        let Some((&lead, lead_val)) = row.iter().next() else {
            if !rhs.is_zero() {
                self.inconsistent = true;
            }
            return;
        };
        let inv = lead_val.inv().expect("nonzero lead");
        for v in row.values_mut() {
            *v = &*v * &inv;
        }
        rhs = &rhs * &inv;
        self.pivots.insert(lead, (row, rhs));
    }

    pub fn solve(&self) -> SolutionSet {
        // back substitution to reduced form, highest pivot first
        let mut reduced: BTreeMap<usize, (SparseRow, Scalar)> = BTreeMap::new();
        for (&p, (row, rhs)) in self.pivots.iter().rev() {
            let mut row = row.clone();
            let mut rhs = rhs.clone();
            let later: Vec<usize> = row
                .keys()
                .copied()
                .filter(|c| *c > p && reduced.contains_key(c))
                .collect();
            for c in later {
                let Some(factor) = row.remove(&c) else {
                    continue;
                };
                let (rrow, rrhs) = &reduced[&c];
                for (&rc, rv) in rrow.iter() {
                    if rc == c {
                        continue;
                    }
                    let slot = row.entry(rc).or_insert_with(Scalar::zero);
                    *slot -= &(&factor * rv);
                    if slot.is_zero() {
                        row.remove(&rc);
                    }
                }
                rhs -= &(&factor * rrhs);
            }
            reduced.insert(p, (row, rhs));
        }
        let free: Vec<usize> = (0..self.ncols).filter(|c| !reduced.contains_key(c)).collect();
        let kernel = free
            .iter()
            .map(|&f| {
                let mut v = vec![Scalar::zero(); self.ncols];
                v[f] = Scalar::one();
                for (&p, (row, _)) in &reduced {
                    if let Some(x) = row.get(&f) {
                        v[p] = -x;
                    }
                }
                v
            })
            .collect();
        let particular = (!self.inconsistent).then(|| {
            let mut x = vec![Scalar::zero(); self.ncols];
            for (&p, (_, rhs)) in &reduced {
                x[p] = rhs.clone();
            }
            x
        });
        SolutionSet { particular, kernel }
    }
}

/// Rank of a set of vectors restricted to the given coordinates.
pub fn projected_rank(vectors: &[Vec<Scalar>], coords: impl Iterator<Item = usize> + Clone) -> usize {
    let width = coords.clone().count();
    let mut sys = SparseSystem::new(width.max(1));
    for v in vectors {
        sys.push(
            coords.clone().enumerate().map(|(k, c)| (k, v[c].clone())),
            Scalar::zero(),
        );
    }
    sys.rank()
}
