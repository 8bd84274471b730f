//! Dense bit-matrix relations over a carrier of `n` points.
//!
//! Row `i` holds the future image `{j : (i, j) ∈ R}` packed into 64-bit words,
//! so unions, compositions and closures are word-parallel row operations.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pointset::{first_bit, iter_bits, or_into, words_for, words_subset, PointSet, WORD_BITS};

/// Direction of an image: `Future` is the row `{q : (p, q) ∈ R}`, `Past` the
/// column `{q : (q, p) ∈ R}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Future,
    Past,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelOp {
    Union,
    Intersect,
    Compose,
    Difference,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rel {
    n: usize,
    stride: usize,
    bits: Vec<u64>,
}

// Rows below this size are not worth handing to the thread pool.
const PAR_MIN_ROWS: usize = 256;

impl Rel {
    pub fn new(n: usize) -> Self {
        let stride = words_for(n);
        Rel {
            n,
            stride,
            bits: vec![0; stride * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut r = Rel::new(n);
        for i in 0..n {
            r.insert(i, i);
        }
        r
    }

    pub fn full(n: usize) -> Self {
        let mut r = Rel::new(n);
        let row = PointSet::full(n);
        for i in 0..n {
            r.row_mut(i).copy_from_slice(row.words());
        }
        r
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, usize)>>(n: usize, pairs: I) -> Result<Self> {
        let mut r = Rel::new(n);
        for (i, j) in pairs {
            let bad = if i >= n { Some(i) } else if j >= n { Some(j) } else { None };
            if let Some(index) = bad {
                return Err(Error::OutOfRange { index, n });
            }
            r.insert(i, j);
        }
        Ok(r)
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> bool + Sync) -> Self {
        let mut r = Rel::new(n);
        let stride = r.stride;
        if stride == 0 {
            return r;
        }
        let fill = |(i, row): (usize, &mut [u64])| {
            for j in 0..n {
                if f(i, j) {
                    row[j / WORD_BITS] |= 1 << (j % WORD_BITS);
                }
            }
        };
        if n >= PAR_MIN_ROWS {
            r.bits.par_chunks_mut(stride).enumerate().for_each(fill);
        } else {
            r.bits.chunks_mut(stride).enumerate().for_each(fill);
        }
        r
    }

    /// Relation whose row `i` is `rows[i]`.
    pub fn from_rows(rows: &[PointSet]) -> Result<Self> {
        let n = rows.len();
        let mut r = Rel::new(n);
        for (i, row) in rows.iter().enumerate() {
            if row.universe() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: row.universe(),
                });
            }
            r.row_mut(i).copy_from_slice(row.words());
        }
        Ok(r)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && self.bits[i * self.stride + j / WORD_BITS] >> (j % WORD_BITS) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize, j: usize) {
        assert!(i < self.n && j < self.n, "pair ({i}, {j}) out of range {}", self.n);
        self.bits[i * self.stride + j / WORD_BITS] |= 1 << (j % WORD_BITS);
    }

    #[inline]
    pub fn remove(&mut self, i: usize, j: usize) {
        assert!(i < self.n && j < self.n, "pair ({i}, {j}) out of range {}", self.n);
        self.bits[i * self.stride + j / WORD_BITS] &= !(1 << (j % WORD_BITS));
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.bits[i * self.stride..(i + 1) * self.stride]
    }

    pub fn row_set(&self, i: usize) -> PointSet {
        PointSet::from_words(self.n, self.row(i).to_vec())
    }

    pub fn rows(&self) -> Vec<PointSet> {
        (0..self.n).map(|i| self.row_set(i)).collect()
    }

    /// Number of pairs.
    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Pairs in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| iter_bits(self.row(i)).map(move |j| (i, j)))
    }

    pub fn is_subset(&self, other: &Rel) -> bool {
        self.n == other.n && words_subset(&self.bits, &other.bits)
    }

    fn check_dim(&self, other: &Rel) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn union(&self, other: &Rel) -> Result<Rel> {
        self.check_dim(other)?;
        let mut r = self.clone();
        or_into(&mut r.bits, &other.bits);
        Ok(r)
    }

    pub fn intersect(&self, other: &Rel) -> Result<Rel> {
        self.check_dim(other)?;
        let mut r = self.clone();
        for (a, b) in r.bits.iter_mut().zip(&other.bits) {
            *a &= b;
        }
        Ok(r)
    }

    pub fn difference(&self, other: &Rel) -> Result<Rel> {
        self.check_dim(other)?;
        let mut r = self.clone();
        for (a, b) in r.bits.iter_mut().zip(&other.bits) {
            *a &= !b;
        }
        Ok(r)
    }

    /// Relational composition `{(x, z) : ∃y, (x, y) ∈ self ∧ (y, z) ∈ other}`.
    pub fn compose(&self, other: &Rel) -> Result<Rel> {
        self.check_dim(other)?;
        let mut out = Rel::new(self.n);
        if self.stride == 0 {
            return Ok(out);
        }
        let stride = self.stride;
        let fill = |(x, row): (usize, &mut [u64])| {
            for y in iter_bits(self.row(x)) {
                or_into(row, other.row(y));
            }
        };
        if self.n >= PAR_MIN_ROWS {
            out.bits.par_chunks_mut(stride).enumerate().for_each(fill);
        } else {
            out.bits.chunks_mut(stride).enumerate().for_each(fill);
        }
        Ok(out)
    }

    pub fn apply(&self, op: RelOp, other: &Rel) -> Result<Rel> {
        match op {
            RelOp::Union => self.union(other),
            RelOp::Intersect => self.intersect(other),
            RelOp::Compose => self.compose(other),
            RelOp::Difference => self.difference(other),
        }
    }

    pub fn converse(&self) -> Rel {
        let mut r = Rel::new(self.n);
        for (i, j) in self.pairs() {
            r.insert(j, i);
        }
        r
    }

    pub fn reflexive_closure(&self) -> Rel {
        let mut r = self.clone();
        for i in 0..self.n {
            r.insert(i, i);
        }
        r
    }

    /// Smallest transitive superset, by Warshall's row propagation.
    pub fn transitive_closure(&self) -> Rel {
        let mut r = self.clone();
        let stride = r.stride;
        let mut pivot = vec![0u64; stride];
        for k in 0..r.n {
            pivot.copy_from_slice(r.row(k));
            let (word, bit) = (k / WORD_BITS, k % WORD_BITS);
            for row in r.bits.chunks_mut(stride.max(1)).take(r.n) {
                if row[word] >> bit & 1 == 1 {
                    or_into(row, &pivot);
                }
            }
        }
        r
    }

    /// Transitive closure by repeated squaring, `R ← R ∪ R∘R` until stable.
    /// Slower than [`Rel::transitive_closure`]; kept as an independent route.
    pub fn transitive_closure_by_squaring(&self) -> Rel {
        let mut r = self.clone();
        loop {
            let next = r
                .union(&r.compose(&r).expect("same dimension"))
                .expect("same dimension");
            if next == r {
                return r;
            }
            r = next;
        }
    }

    pub fn image(&self, p: usize, direction: Direction) -> Result<PointSet> {
        if p >= self.n {
            return Err(Error::OutOfRange { index: p, n: self.n });
        }
        Ok(match direction {
            Direction::Future => self.row_set(p),
            Direction::Past => PointSet::from_indices(self.n, (0..self.n).filter(|&q| self.contains(q, p))),
        })
    }

    /// Relation with only the pairs whose endpoints both lie in `scope`.
    pub fn restrict(&self, scope: &PointSet) -> Rel {
        let mut r = self.clone();
        for i in 0..self.n {
            let row = r.row_mut(i);
            if scope.contains(i) {
                for (a, b) in row.iter_mut().zip(scope.words()) {
                    *a &= b;
                }
            } else {
                row.fill(0);
            }
        }
        r
    }

    pub fn properties(&self) -> RelationProperties {
        let n = self.n;
        let not_reflexive_at = (0..n).find(|&i| !self.contains(i, i)).map(|i| (i, i));
        let not_irreflexive_at = (0..n).find(|&i| self.contains(i, i)).map(|i| (i, i));
        let not_antisymmetric_at = self.pairs().find(|&(i, j)| i != j && self.contains(j, i));
        let not_transitive_at = self.transitivity_witness();
        RelationProperties {
            reflexive: not_reflexive_at.is_none(),
            irreflexive: not_irreflexive_at.is_none(),
            transitive: not_transitive_at.is_none(),
            antisymmetric: not_antisymmetric_at.is_none(),
            not_reflexive_at,
            not_irreflexive_at,
            not_transitive_at,
            not_antisymmetric_at,
        }
    }

    pub fn is_transitive(&self) -> bool {
        self.transitivity_witness().is_none()
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.antisymmetry_witness().is_none()
    }

    /// Lexicographically smallest `(p, q)`, `p != q`, with both `(p, q)` and
    /// `(q, p)` present.
    pub fn antisymmetry_witness(&self) -> Option<(usize, usize)> {
        self.pairs().find(|&(i, j)| i != j && self.contains(j, i))
    }

    /// Lexicographically smallest `(a, b, c)` with `(a, b)`, `(b, c)` present
    /// and `(a, c)` absent.
    pub fn transitivity_witness(&self) -> Option<(usize, usize, usize)> {
        let mut scratch = vec![0u64; self.stride];
        for a in 0..self.n {
            let row_a = self.row(a);
            for b in iter_bits(row_a) {
                for (s, (x, y)) in scratch.iter_mut().zip(self.row(b).iter().zip(row_a)) {
                    *s = x & !y;
                }
                if let Some(c) = first_bit(&scratch) {
                    return Some((a, b, c));
                }
            }
        }
        None
    }

    /// Row-major packed bytes: each row is `ceil(n / 8)` bytes and bit
    /// `j % 8` of byte `j / 8` is set iff `(i, j)` is present.
    pub fn to_row_bytes(&self) -> Vec<u8> {
        let row_bytes = self.n.div_ceil(8);
        let mut out = Vec::with_capacity(row_bytes * self.n);
        for i in 0..self.n {
            let row = self.row(i);
            out.extend((0..row_bytes).map(|k| (row[k / 8] >> (8 * (k % 8))) as u8));
        }
        out
    }

    pub fn from_row_bytes(n: usize, bytes: &[u8]) -> Result<Rel> {
        let row_bytes = n.div_ceil(8);
        if bytes.len() != row_bytes * n {
            return Err(Error::MalformedDataset(format!(
                "relation payload has {} bytes, expected {} for n = {n}",
                bytes.len(),
                row_bytes * n
            )));
        }
        let mut r = Rel::new(n);
        for i in 0..n {
            let chunk = &bytes[i * row_bytes..(i + 1) * row_bytes];
            let row = r.row_mut(i);
            for (k, &b) in chunk.iter().enumerate() {
                row[k / 8] |= (b as u64) << (8 * (k % 8));
            }
            // Padding bits past column n must be zero for the encoding to be canonical.
            if PointSet::from_words(n, row.to_vec()).words() != row {
                return Err(Error::MalformedDataset(format!("row {i} has bits beyond column {n}")));
            }
        }
        Ok(r)
    }
}

impl fmt::Debug for Rel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rel(n={}) ", self.n)?;
        f.debug_set().entries(self.pairs()).finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationProperties {
    pub reflexive: bool,
    pub irreflexive: bool,
    pub transitive: bool,
    pub antisymmetric: bool,
    pub not_reflexive_at: Option<(usize, usize)>,
    pub not_irreflexive_at: Option<(usize, usize)>,
    pub not_transitive_at: Option<(usize, usize, usize)>,
    pub not_antisymmetric_at: Option<(usize, usize)>,
}

impl RelationProperties {
    pub fn is_partial_order(&self) -> bool {
        self.reflexive && self.transitive && self.antisymmetric
    }
}
