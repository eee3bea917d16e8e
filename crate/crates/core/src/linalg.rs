//! Exact sparse Gaussian elimination over a [`Field`].
//!
//! Vectors are sparse maps `column -> nonzero scalar`. An [`Echelon`] keeps a
//! reduced basis keyed by pivot column; each stored row can carry the
//! combination of inserted vectors that produced it, which is how kernels are
//! read off.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::scalar::{Field, Scalar};

pub type SparseVec = BTreeMap<usize, Scalar>;

pub fn axpy(target: &mut SparseVec, factor: &Scalar, source: &SparseVec) {
    for (col, v) in source {
        let delta = factor * v;
        match target.get_mut(col) {
            Some(t) => {
                *t += &delta;
                if t.is_zero() {
                    target.remove(col);
                }
            }
            None => {
                if !delta.is_zero() {
                    target.insert(*col, delta);
                }
            }
        }
    }
}

pub fn scale(v: &mut SparseVec, factor: &Scalar) {
    for x in v.values_mut() {
        *x *= factor;
    }
}

#[derive(Debug, Clone)]
struct Row {
    vec: SparseVec,
    combo: SparseVec,
}

/// Incremental row echelon form.
#[derive(Debug, Clone)]
pub struct Echelon {
    field: Field,
    rows: BTreeMap<usize, Row>,
}

impl Echelon {
    pub fn new(field: Field) -> Self {
        Echelon {
            field,
            rows: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `vec` (and its tracked `combo`) against the stored rows.
    fn reduce(&self, vec: &mut SparseVec, combo: &mut SparseVec) {
        let mut cursor = 0usize;
        loop {
            let next = vec
                .range(cursor..)
                .find(|(c, _)| self.rows.contains_key(c))
                .map(|(c, v)| (*c, v.clone()));
            let Some((col, coeff)) = next else { break };
            let row = &self.rows[&col];
            let factor = -coeff;
            axpy(vec, &factor, &row.vec);
            axpy(combo, &factor, &row.combo);
            cursor = col + 1;
        }
    }

    /// Inserts `vec`; returns `true` when it was independent of the span.
    pub fn insert(&mut self, vec: SparseVec) -> bool {
        self.insert_tracked(vec, SparseVec::new()).is_none()
    }

    /// Inserts `vec` together with a combination label. If `vec` lies in the
    /// span, the reduced label (a relation among inserted labels) is returned.
    pub fn insert_tracked(&mut self, mut vec: SparseVec, mut combo: SparseVec) -> Option<SparseVec> {
        self.reduce(&mut vec, &mut combo);
        let Some((&pivot, lead)) = vec.iter().next() else {
            return Some(combo);
        };
        let inv = lead.inv().expect("nonzero pivot");
        scale(&mut vec, &inv);
        scale(&mut combo, &inv);
        // keep the basis fully reduced in the pivot column
        let pivot_row = Row { vec, combo };
        for row in self.rows.values_mut() {
            if let Some(c) = row.vec.get(&pivot).cloned() {
                let factor = -c;
                axpy(&mut row.vec, &factor, &pivot_row.vec);
                axpy(&mut row.combo, &factor, &pivot_row.combo);
            }
        }
        self.rows.insert(pivot, pivot_row);
        None
    }

    /// True when `vec` lies in the span of the stored rows.
    pub fn contains(&self, vec: &SparseVec) -> bool {
        let mut v = vec.clone();
        let mut c = SparseVec::new();
        self.reduce(&mut v, &mut c);
        v.is_empty()
    }

    pub fn field(&self) -> Field {
        self.field
    }
}

/// Rank of the matrix whose columns (or rows) are the given sparse vectors.
pub fn rank(field: Field, vectors: impl IntoIterator<Item = SparseVec>) -> usize {
    let mut e = Echelon::new(field);
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

/// Kernel of the linear map sending basis vector `k` to `images[k]`.
///
/// Returns a basis of the kernel as sparse vectors over the domain basis.
pub fn kernel(field: Field, images: &[SparseVec]) -> Vec<SparseVec> {
    let mut e = Echelon::new(field);
    let mut out = Vec::new();
    for (k, img) in images.iter().enumerate() {
        let mut label = SparseVec::new();
        label.insert(k, field.one());
        if let Some(rel) = e.insert_tracked(img.clone(), label) {
            out.push(rel);
        }
    }
    out
}

/// Dense convenience: rank of a row-major matrix.
pub fn dense_rank(field: Field, rows: &[Vec<Scalar>]) -> usize {
    rank(
        field,
        rows.iter().map(|r| {
            r.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(c, v)| (c, v.clone()))
                .collect()
        }),
    )
}
