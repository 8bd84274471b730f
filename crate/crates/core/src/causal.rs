//! Chronology, the K⁺ fixed point, and checkers for the causal ladder
//! properties on finite carriers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::relation::{Direction, Rel};
use crate::report::{CheckReport, Witness};
use crate::spacetimes::{EventSet, OracleKind};
use crate::topology::{dedup_family, FiniteTopology};

/// Pairwise chronology `I⁺` of the events under the model's analytic
/// predicate.
pub fn chronology(events: &EventSet) -> Result<Rel> {
    let i = oracle_relation(events, OracleKind::I)?;
    // Winding curves relate every pair on the cylinder both ways while the
    // diagonal stays empty, so transitivity is only expected elsewhere.
    debug_assert!(events.model.is_periodic() || i.is_transitive());
    Ok(i)
}

/// Materializes one of the model's analytic oracles as a relation.
pub fn oracle_relation(events: &EventSet, kind: OracleKind) -> Result<Rel> {
    if let Some(index) = events.events.iter().position(|e| !events.model.contains(*e)) {
        return Err(Error::EventOutsideRegion { index });
    }
    // Surface an unsupported oracle once instead of per pair.
    if !events.is_empty() {
        events.oracle(kind, 0, 0)?;
    }
    Ok(Rel::from_fn(events.len(), |i, j| {
        events.oracle(kind, i, j).expect("oracle support checked")
    }))
}

/// Result of the K⁺ computation: `rel` is the least transitive relation
/// containing the input that is closed in the product topology.
#[derive(Debug, Clone, PartialEq)]
pub struct KPlus {
    pub rel: Rel,
    /// Alternations of closure and transitive closure applied, including the
    /// final one that added nothing.
    pub iterations: usize,
}

/// Least fixed point of `R ↦ tc(cl(R))` above `i`.
///
/// Both maps are monotone and inflationary, and any closed transitive
/// superset of `i` is fixed by both, so iterating from `tc(i)` reaches the
/// smallest such relation.
pub fn k_plus(i: &Rel, t: &FiniteTopology) -> Result<KPlus> {
    if i.n() != t.n() {
        return Err(Error::DimensionMismatch {
            left: i.n(),
            right: t.n(),
        });
    }
    let n = i.n();
    let cap = (n * n).max(1);
    let mut r = i.transitive_closure();
    let mut iterations = 0;
    loop {
        iterations += 1;
        let next = t.relation_closure(&r)?.transitive_closure();
        if next == r {
            return Ok(KPlus { rel: r, iterations });
        }
        assert!(iterations < cap, "K+ iteration exceeded n² alternations");
        r = next;
    }
}

/// Checks that `k` contains `i`, is transitive, is closed, and is stable
/// under one more alternation.
pub fn k_plus_certificate(i: &Rel, t: &FiniteTopology, k: &Rel) -> Result<CheckReport> {
    let contains = i.is_subset(k);
    let transitive = k.transitivity_witness();
    let closure = t.relation_closure(k)?;
    let closed = closure.is_subset(k);
    let stable = closure.transitive_closure() == *k;
    let holds = contains && transitive.is_none() && closed && stable;
    let witness = if !contains {
        i.difference(k)?.pairs().next().map(|(p, q)| Witness::Pair { p, q })
    } else if let Some((a, b, c)) = transitive {
        Some(Witness::Triple { a, b, c })
    } else if !closed {
        closure.difference(k)?.pairs().next().map(|(p, q)| Witness::Pair { p, q })
    } else {
        None
    };
    Ok(CheckReport::new("k_plus_certificate", holds)
        .with_witness(witness)
        .detail("contains_chronology", contains)
        .detail("transitive", transitive.is_none())
        .detail("closed", closed)
        .detail("stable", stable))
}

/// Sampled events with their topology, chronology and computed K⁺.
#[derive(Debug, Clone, PartialEq)]
pub struct CausalStructure {
    pub events: EventSet,
    pub topology: FiniteTopology,
    pub chronology: Rel,
    pub k: Rel,
    pub iterations: usize,
}

impl CausalStructure {
    /// Builds the ball topology (default radius unless given), the analytic
    /// chronology and K⁺.
    pub fn build(events: EventSet, radius: Option<f64>) -> Result<Self> {
        let radius = radius.unwrap_or_else(|| events.default_radius());
        let topology = events.ball_topology(radius)?;
        let chronology = chronology(&events)?;
        let KPlus { rel, iterations } = k_plus(&chronology, &topology)?;
        Ok(CausalStructure {
            events,
            topology,
            chronology,
            k: rel,
            iterations,
        })
    }

    pub fn n(&self) -> usize {
        self.events.len()
    }

    pub fn radius(&self) -> f64 {
        self.topology.radius().unwrap_or(0.0)
    }

    /// Twice the ball radius.
    pub fn default_margin(&self) -> f64 {
        2.0 * self.radius()
    }

    /// Events at least `margin` (default [`Self::default_margin`]) from the
    /// region boundary and removed sets.
    pub fn scope(&self, margin: Option<f64>) -> PointSet {
        self.events.margin_interior(margin.unwrap_or_else(|| self.default_margin()))
    }

    /// Row `p` is `int K⁺(p)`.
    pub fn future_interiors(&self) -> Rel {
        self.topology.interior_rows(&self.k).expect("same carrier")
    }

    /// Row `q` is `int K⁻(q)`.
    pub fn past_interiors(&self) -> Rel {
        self.topology.interior_rows(&self.k.converse()).expect("same carrier")
    }
}

fn check_dims(t: &FiniteTopology, k: &Rel) -> Result<()> {
    if t.n() != k.n() {
        return Err(Error::DimensionMismatch {
            left: t.n(),
            right: k.n(),
        });
    }
    Ok(())
}

fn scope_or_full(n: usize, scope: Option<&PointSet>) -> Result<PointSet> {
    match scope {
        Some(s) if s.universe() != n => Err(Error::DimensionMismatch {
            left: n,
            right: s.universe(),
        }),
        Some(s) => Ok(s.clone()),
        None => Ok(PointSet::full(n)),
    }
}

/// Holds iff `k` is antisymmetric.
pub fn is_k_causal(k: &Rel) -> CheckReport {
    let witness = k.antisymmetry_witness();
    CheckReport::new("k_causal", witness.is_none())
        .with_witness(witness.map(|(p, q)| Witness::Pair { p, q }))
        .detail("pairs", k.count())
}

/// A violation of K-convexity of `u`: `a, b ∈ u` and `x ∉ u` with
/// `(a, x), (x, b) ∈ k`.
pub fn k_convexity_witness(k: &Rel, u: &PointSet) -> Option<(usize, usize, usize)> {
    let n = k.n();
    // Points outside u from which u is reachable again.
    let reentrant = PointSet::from_indices(
        n,
        (0..n).filter(|&x| !u.contains(x) && k.row_set(x).intersects(u)),
    );
    if reentrant.is_empty() {
        return None;
    }
    for a in u.iter() {
        if let Some(x) = k.row_set(a).intersection(&reentrant).first() {
            let b = k.row_set(x).intersection(u).first().expect("reentrant point");
            return Some((a, x, b));
        }
    }
    None
}

/// `K⁺(a) ∩ K⁻(b) ⊆ u` for all `a, b ∈ u`.
pub fn k_convexity(k: &Rel, u: &PointSet) -> bool {
    k_convexity_witness(k, u).is_none()
}

/// Smallest open K-convex set containing `p`: iterate open hull and convex
/// fill starting from `N(p)`.
pub fn convex_open_hull(t: &FiniteTopology, k: &Rel, kt: &Rel, p: usize) -> PointSet {
    let n = k.n();
    let mut u = t.min_nbhd(p).clone();
    loop {
        let mut future = PointSet::empty(n);
        let mut past = PointSet::empty(n);
        for a in u.iter() {
            future.union_with(&k.row_set(a));
            past.union_with(&kt.row_set(a));
        }
        let mut next = u.union(&future.intersection(&past));
        next = t.open_hull(&next);
        if next == u {
            return u;
        }
        u = next;
    }
}

/// For every point `p` in scope and every generator `V ∋ p`, decides whether
/// some open K-convex `U` has `p ∈ U ⊆ V`.
///
/// Every open K-convex set containing `p` contains the least one, so the
/// search reduces to comparing [`convex_open_hull`] with each `V`.
pub fn strong_k_causality(t: &FiniteTopology, k: &Rel, scope: Option<&PointSet>) -> Result<CheckReport> {
    check_dims(t, k)?;
    let scope = scope_or_full(t.n(), scope)?;
    let kt = k.converse();
    let mut failures = 0usize;
    let mut witness = None;
    let mut checked = 0usize;
    for p in scope.iter() {
        let hull = convex_open_hull(t, k, &kt, p);
        for (gi, v) in t.generators().iter().enumerate() {
            if !v.contains(p) {
                continue;
            }
            checked += 1;
            if !hull.is_subset(v) {
                failures += 1;
                witness.get_or_insert(Witness::Generator { point: p, generator: gi });
            }
        }
    }
    Ok(CheckReport::new("strong_k_causality", failures == 0)
        .with_witness(witness)
        .detail("point_generator_pairs", checked)
        .detail("failures", failures))
}

/// `F(p) = int K±(p)` for every `p`.
fn interior_images(t: &FiniteTopology, k: &Rel, sign: Direction) -> Rel {
    match sign {
        Direction::Future => t.interior_rows(k),
        Direction::Past => t.interior_rows(&k.converse()),
    }
    .expect("same carrier")
}

fn sign_name(sign: Direction) -> &'static str {
    match sign {
        Direction::Future => "future",
        Direction::Past => "past",
    }
}

/// Inner continuity of `p ↦ int K±(p)`: for each `p` in scope some open
/// `U ∋ p` has `F(p) ⊆ F(q)` for all `q ∈ U`.
///
/// Taking the compact set `C = F(p)` suffices by monotonicity, and `N(p)` is
/// the smallest open set around `p`.
pub fn inner_continuity(
    t: &FiniteTopology,
    k: &Rel,
    sign: Direction,
    scope: Option<&PointSet>,
) -> Result<CheckReport> {
    check_dims(t, k)?;
    let scope = scope_or_full(t.n(), scope)?;
    let f = interior_images(t, k, sign);
    let mut failures = 0usize;
    let mut witness = None;
    for p in scope.iter() {
        let fp = f.row_set(p);
        if let Some(q) = t.min_nbhd(p).iter().find(|&q| !fp.is_subset(&f.row_set(q))) {
            failures += 1;
            witness.get_or_insert((p, q));
        }
    }
    let mut report = CheckReport::new(format!("inner_continuity_{}", sign_name(sign)), failures == 0)
        .with_witness(witness.map(|(p, _)| Witness::Point { point: p }))
        .detail("failures", failures);
    if let Some((_, q)) = witness {
        report = report.detail("escaping_neighbour", q);
    }
    Ok(report)
}

/// Outer continuity of `p ↦ int K±(p)`: for each `p` in scope and `C`
/// disjoint from `cl F(p)`, some open `U ∋ p` keeps `C` disjoint from
/// `cl F(q)` for all `q ∈ U`. Only the maximal `C`, the complement of
/// `cl F(p)`, needs checking.
pub fn outer_continuity(
    t: &FiniteTopology,
    k: &Rel,
    sign: Direction,
    scope: Option<&PointSet>,
) -> Result<CheckReport> {
    check_dims(t, k)?;
    let scope = scope_or_full(t.n(), scope)?;
    let f = interior_images(t, k, sign);
    let closures: Vec<PointSet> = (0..t.n())
        .map(|p| t.closure_set(&f.row_set(p)).expect("same carrier"))
        .collect();
    let mut failures = 0usize;
    let mut witness = None;
    for p in scope.iter() {
        if let Some(q) = t.min_nbhd(p).iter().find(|&q| !closures[q].is_subset(&closures[p])) {
            failures += 1;
            witness.get_or_insert((p, q));
        }
    }
    let mut report = CheckReport::new(format!("outer_continuity_{}", sign_name(sign)), failures == 0)
        .with_witness(witness.map(|(p, _)| Witness::Point { point: p }))
        .detail("failures", failures)
        .note("outer continuity read as the standard set-valued-map notion: complements of closures persist on a neighbourhood");
    if let Some((_, q)) = witness {
        report = report.detail("escaping_neighbour", q);
    }
    Ok(report)
}

/// `p ∈ int K⁻(q) ⟺ q ∈ int K⁺(p)` for all `p, q` in scope.
pub fn lemma32_check(t: &FiniteTopology, k: &Rel, scope: Option<&PointSet>) -> Result<CheckReport> {
    check_dims(t, k)?;
    if let Some((p, q)) = k.antisymmetry_witness() {
        return Err(Error::NotKCausal(p, q));
    }
    let scope = scope_or_full(t.n(), scope)?;
    let future = interior_images(t, k, Direction::Future).restrict(&scope);
    // Transposing the past interiors puts (p, q) at p ∈ int K⁻(q).
    let past = interior_images(t, k, Direction::Past).converse().restrict(&scope);
    let diff = future.difference(&past)?.union(&past.difference(&future)?)?;
    let witness = diff.pairs().next();
    Ok(CheckReport::new("lemma32", witness.is_none())
        .with_witness(witness.map(|(p, q)| Witness::Pair { p, q }))
        .detail("asymmetric_pairs", diff.count())
        .detail("scope_size", scope.len()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma43Options {
    /// Largest carrier for which every triple is examined.
    pub full_threshold: usize,
    /// Number of random triples above the threshold.
    pub samples: usize,
    pub seed: u64,
}

impl Default for Lemma43Options {
    fn default() -> Self {
        Lemma43Options {
            full_threshold: 150,
            samples: 1_000_000,
            seed: 0,
        }
    }
}

/// Checks, with `⊑` the reflexive closure of `k`:
/// (i) `p ⊑ q` and `r ∈ int K⁺(q)` imply `r ∈ int K⁺(p)`;
/// (ii) `p ∈ int K⁻(q)` and `q ⊑ r` imply `p ∈ int K⁻(r)`.
///
/// All triples are examined up to `full_threshold` points (as row inclusions
/// over the pairs `p ⊑ q`); larger carriers use seeded random triples.
pub fn lemma43_check(k: &Rel, t: &FiniteTopology, options: Lemma43Options) -> Result<CheckReport> {
    check_dims(t, k)?;
    let n = k.n();
    let order = k.reflexive_closure();
    let future = interior_images(t, k, Direction::Future);
    let past = interior_images(t, k, Direction::Past);
    let mut witness = None;
    let mut violations = 0usize;
    let report = if n <= options.full_threshold {
        for (p, q) in order.pairs() {
            // (i): int K⁺(q) ⊆ int K⁺(p).
            let escaped = future.row_set(q).difference(&future.row_set(p));
            if let Some(r) = escaped.first() {
                violations += escaped.len();
                witness.get_or_insert(Witness::Triple { a: p, b: q, c: r });
            }
            // (ii) with (q, r) = (p, q): int K⁻(p) ⊆ int K⁻(q).
            let escaped = past.row_set(p).difference(&past.row_set(q));
            if let Some(x) = escaped.first() {
                violations += escaped.len();
                witness.get_or_insert(Witness::Triple { a: x, b: p, c: q });
            }
        }
        CheckReport::new("lemma43", violations == 0)
            .detail("mode", "full")
            .detail("triples", (n as u64).pow(3))
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
        for _ in 0..options.samples {
            let (p, q, r) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
            if order.contains(p, q) && future.contains(q, r) && !future.contains(p, r) {
                violations += 1;
                witness.get_or_insert(Witness::Triple { a: p, b: q, c: r });
            }
            if past.contains(q, p) && order.contains(q, r) && !past.contains(r, p) {
                violations += 1;
                witness.get_or_insert(Witness::Triple { a: p, b: q, c: r });
            }
        }
        CheckReport::new("lemma43", violations == 0)
            .detail("mode", "sampled")
            .detail("triples", options.samples as u64)
            .detail("seed", options.seed)
            .detail("rng", crate::spacetimes::RNG_ALGORITHM)
    };
    Ok(report.with_witness(witness).detail("violations", violations))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlexandrovKind {
    /// `I⁺(p) ∩ I⁻(q)`.
    Chronological,
    /// `int K⁺(p) ∩ int K⁻(q)`.
    KInterior,
}

/// Nonempty diamonds over all pairs, deduplicated in first-seen order.
pub fn alexandrov_family(source: &CausalStructure, kind: AlexandrovKind) -> Vec<PointSet> {
    let (future, past) = match kind {
        AlexandrovKind::Chronological => (source.chronology.clone(), source.chronology.converse()),
        AlexandrovKind::KInterior => (source.future_interiors(), source.past_interiors()),
    };
    diamond_family(&future, &past)
}

/// `{future(p) ∩ past(q)}` over all pairs, nonempty and deduplicated.
pub fn diamond_family(future: &Rel, past: &Rel) -> Vec<PointSet> {
    let n = future.n();
    let rows_f = future.rows();
    let rows_p = past.rows();
    dedup_family((0..n).flat_map(|p| {
        let fp = &rows_f[p];
        rows_p.iter().filter(move |pq| fp.intersects(pq)).map(move |pq| fp.intersection(pq))
    }))
}
