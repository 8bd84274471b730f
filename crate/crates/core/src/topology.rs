//! Finite topologies given by a generating family (subbasis).
//!
//! On a finite carrier a topology is determined by its minimal neighbourhoods
//! `N(x)`, the intersection of all generators containing `x`. A set `U` is open
//! iff `N(x) ⊆ U` for every `x ∈ U`; interiors, closures and the closure of a
//! relation in the product topology all reduce to row operations on `N`.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::relation::Rel;
use crate::report::{CheckReport, Witness};

pub const BALL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteTopology {
    n: usize,
    generators: Vec<PointSet>,
    min_nbhd: Vec<PointSet>,
    radius: Option<f64>,
}

impl FiniteTopology {
    /// Topology generated by `generators` as a subbasis. Every point must lie
    /// in at least one generator.
    pub fn from_generators(n: usize, generators: Vec<PointSet>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyEventSet);
        }
        for g in &generators {
            if g.universe() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: g.universe(),
                });
            }
        }
        let min_nbhd = minimal_neighbourhoods(n, &generators);
        if let Some(point) = (0..n).find(|&x| !generators.iter().any(|g| g.contains(x))) {
            return Err(Error::NonCoveringFamily { point });
        }
        Ok(FiniteTopology {
            n,
            generators,
            min_nbhd,
            radius: None,
        })
    }

    /// Topology generated by the open balls `{y : dist(c, y) < radius}` around
    /// every point `c`. Distances within [`BALL_TOL`] of the radius count as
    /// inside, so lattice points at exactly the radius are treated uniformly
    /// regardless of rounding.
    pub fn from_balls(n: usize, radius: f64, dist: impl Fn(usize, usize) -> f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidParameter(format!("radius must be positive, got {radius}")));
        }
        let generators = (0..n)
            .map(|c| PointSet::from_indices(n, (0..n).filter(|&y| dist(c, y) < radius + BALL_TOL)))
            .collect();
        let mut t = Self::from_generators(n, generators)?;
        t.radius = Some(radius);
        Ok(t)
    }

    pub fn discrete(n: usize) -> Result<Self> {
        Self::from_generators(n, (0..n).map(|x| PointSet::singleton(n, x)).collect())
    }

    pub fn indiscrete(n: usize) -> Result<Self> {
        Self::from_generators(n, vec![PointSet::full(n)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PointSet] {
        &self.generators
    }

    /// Ball radius, when built from balls.
    pub fn radius(&self) -> Option<f64> {
        self.radius
    }

    pub fn min_nbhd(&self, x: usize) -> &PointSet {
        &self.min_nbhd[x]
    }

    pub fn min_nbhds(&self) -> &[PointSet] {
        &self.min_nbhd
    }

    /// `N` as a relation: `(x, a)` present iff `a ∈ N(x)`.
    pub fn nbhd_rel(&self) -> Rel {
        Rel::from_rows(&self.min_nbhd).expect("rows sized to carrier")
    }

    pub fn is_discrete(&self) -> bool {
        self.min_nbhd.iter().all(|s| s.len() == 1)
    }

    fn check_set(&self, s: &PointSet) -> Result<()> {
        if s.universe() == self.n {
            return Ok(());
        }
        match s.iter().find(|&p| p >= self.n) {
            Some(index) => Err(Error::OutOfRange { index, n: self.n }),
            None => Err(Error::DimensionMismatch {
                left: self.n,
                right: s.universe(),
            }),
        }
    }

    pub fn is_open(&self, s: &PointSet) -> Result<bool> {
        self.check_set(s)?;
        Ok(s.iter().all(|x| self.min_nbhd[x].is_subset(s)))
    }

    /// Largest open subset of `s`.
    pub fn interior(&self, s: &PointSet) -> Result<PointSet> {
        self.check_set(s)?;
        Ok(PointSet::from_indices(
            self.n,
            s.iter().filter(|&x| self.min_nbhd[x].is_subset(s)),
        ))
    }

    /// Smallest closed superset of `s`: points whose minimal neighbourhood
    /// meets `s`.
    pub fn closure_set(&self, s: &PointSet) -> Result<PointSet> {
        self.check_set(s)?;
        Ok(PointSet::from_indices(
            self.n,
            (0..self.n).filter(|&x| self.min_nbhd[x].intersects(s)),
        ))
    }

    /// Smallest open set containing `s`: the union of the minimal
    /// neighbourhoods of its points.
    pub fn open_hull(&self, s: &PointSet) -> PointSet {
        let mut out = PointSet::empty(self.n);
        for x in s.iter() {
            out.union_with(&self.min_nbhd[x]);
        }
        out
    }

    /// Row `p` of the result is `interior(R(p))` where `R(p)` is row `p` of
    /// `r`.
    pub fn interior_rows(&self, r: &Rel) -> Result<Rel> {
        self.check_rel(r)?;
        let rows: Vec<PointSet> = (0..self.n)
            .map(|p| self.interior(&r.row_set(p)).expect("row sized to carrier"))
            .collect();
        Rel::from_rows(&rows)
    }

    fn check_rel(&self, r: &Rel) -> Result<()> {
        if r.n() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: r.n(),
            });
        }
        Ok(())
    }

    /// Closure of `r` in the product topology, whose minimal neighbourhoods
    /// are `N(x) × N(y)`: `{(x, y) : (N(x) × N(y)) ∩ r ≠ ∅}`.
    pub fn relation_closure(&self, r: &Rel) -> Result<Rel> {
        self.check_rel(r)?;
        let nbhd = self.nbhd_rel();
        // (N ∘ r)(x) = everything reachable from N(x); composing with N^T then
        // collects every y whose N(y) meets it.
        nbhd.compose(r)?.compose(&nbhd.converse())
    }
}

fn minimal_neighbourhoods(n: usize, generators: &[PointSet]) -> Vec<PointSet> {
    let mut min_nbhd = vec![PointSet::full(n); n];
    for g in generators {
        for x in g.iter() {
            min_nbhd[x].intersect_with(g);
        }
    }
    min_nbhd
}

/// Minimal neighbourhoods of the topology generated by `family` on `n` points,
/// with the whole carrier counted as open (points covered by no member get the
/// whole carrier).
pub fn generated_neighbourhoods(n: usize, family: &[PointSet]) -> Result<Vec<PointSet>> {
    for s in family {
        if s.universe() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: s.universe(),
            });
        }
    }
    Ok(minimal_neighbourhoods(n, family))
}

/// Twice the largest nearest-neighbour distance over the carrier. Falls back to
/// `1.0` when there are fewer than two points.
pub fn default_radius(n: usize, dist: impl Fn(usize, usize) -> f64) -> f64 {
    if n < 2 {
        return 1.0;
    }
    let max_nn = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .map(|j| dist(i, j))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    2.0 * max_nn
}

/// Drops empty sets and duplicates, keeping first occurrences in order.
pub fn dedup_family(family: impl IntoIterator<Item = PointSet>) -> Vec<PointSet> {
    let mut seen = HashSet::new();
    family
        .into_iter()
        .filter(|s| !s.is_empty() && seen.insert(s.clone()))
        .collect()
}

/// Decides whether the topologies generated by `left` and `right` agree on the
/// subspace `restrict_to`: every member of each family must be open, around
/// each of its points in `restrict_to`, in the subspace topology generated by
/// the other family.
pub fn topologies_equivalent(
    n: usize,
    left: &[PointSet],
    right: &[PointSet],
    restrict_to: &PointSet,
) -> Result<CheckReport> {
    if restrict_to.universe() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: restrict_to.universe(),
        });
    }
    let n_left = generated_neighbourhoods(n, left)?;
    let n_right = generated_neighbourhoods(n, right)?;

    let mut report = CheckReport::new("topologies_equivalent", true)
        .detail("left_family_size", left.len())
        .detail("right_family_size", right.len())
        .detail("restricted_points", restrict_to.len());

    let directions: [(&str, &[PointSet], &[PointSet]); 2] = [
        ("left_in_right", left, &n_right),
        ("right_in_left", right, &n_left),
    ];
    for (direction, family, other_nbhd) in directions {
        for x in restrict_to.iter() {
            let local = other_nbhd[x].intersection(restrict_to);
            let offending = family
                .iter()
                .enumerate()
                .find(|(_, s)| s.contains(x) && !local.is_subset(s));
            if let Some((set, s)) = offending {
                report.holds = false;
                report.witness = Some(Witness::Refinement {
                    point: x,
                    set,
                    direction: direction.to_string(),
                    outside: local.difference(s).to_vec(),
                });
                return Ok(report);
            }
        }
    }
    Ok(report)
}
