//! Posets, way-below and way-above relations, Scott opens, continuity and
//! the interval topology, on finite carriers.
//!
//! On a finite poset every directed set contains its supremum, so the
//! order-theoretic way-below relation collapses to the order itself. The
//! definitional evaluator below enumerates subsets to confirm this on small
//! carriers; on sampled spacetimes the interior characterization
//! `y ∈ int K⁺(x)` is used instead.

use serde::{Deserialize, Serialize};

use crate::causal::{diamond_family, lemma32_check, CausalStructure};
use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::relation::Rel;
use crate::report::{CheckReport, Witness, CAUSAL_INTERIOR_CAVEAT};
use crate::topology::{topologies_equivalent, FiniteTopology};

/// Largest carrier on which subset enumeration is attempted.
pub const ENUMERATION_CAP: usize = 12;

/// Largest carrier for [`upper_space_demo`]; its poset has `2ⁿ - 1` elements.
pub const UPPER_SPACE_CAP: usize = 4;

/// A validated partial order (reflexive, antisymmetric, transitive).
#[derive(Debug, Clone, PartialEq)]
pub struct PosetHandle {
    order: Rel,
}

impl PosetHandle {
    pub fn order(&self) -> &Rel {
        &self.order
    }

    pub fn n(&self) -> usize {
        self.order.n()
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.order.contains(x, y)
    }

    /// The same carrier with the order reversed.
    pub fn dual(&self) -> PosetHandle {
        PosetHandle {
            order: self.order.converse(),
        }
    }

    fn check_point(&self, p: usize) -> Result<()> {
        if p >= self.n() {
            return Err(Error::OutOfRange { index: p, n: self.n() });
        }
        Ok(())
    }

    fn check_set(&self, s: &PointSet) -> Result<()> {
        if s.universe() != self.n() {
            return Err(Error::DimensionMismatch {
                left: self.n(),
                right: s.universe(),
            });
        }
        Ok(())
    }
}

/// Validates `r` (after adding the diagonal when `reflexivize`) as a partial
/// order.
pub fn validate_order(r: &Rel, reflexivize: bool) -> Result<PosetHandle> {
    let order = if reflexivize { r.reflexive_closure() } else { r.clone() };
    if let Some(x) = (0..order.n()).find(|&x| !order.contains(x, x)) {
        return Err(Error::InvalidParameter(format!("relation is not reflexive at {x}")));
    }
    if let Some((p, q)) = order.antisymmetry_witness() {
        return Err(Error::NotAntisymmetric(p, q));
    }
    if let Some((a, b, c)) = order.transitivity_witness() {
        return Err(Error::NotTransitive(a, b, c));
    }
    Ok(PosetHandle { order })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub directed: bool,
    pub filtered: bool,
    pub supremum: Option<usize>,
    pub infimum: Option<usize>,
}

/// Directedness, filteredness, and the supremum and infimum of `s` when they
/// exist.
pub fn bounds(p: &PosetHandle, s: &PointSet) -> Result<Bounds> {
    p.check_set(s)?;
    if s.is_empty() {
        return Err(Error::EmptySubset);
    }
    let order = &p.order;
    let dual = order.converse();
    let pairwise_bounded = |rel: &Rel| {
        s.iter().all(|a| {
            s.iter().all(|b| {
                rel.row_set(a).intersection(&rel.row_set(b)).intersects(s)
            })
        })
    };
    let extremum = |rel: &Rel| {
        let mut bounds = PointSet::full(p.n());
        for a in s.iter() {
            bounds.intersect_with(&rel.row_set(a));
        }
        let found = bounds.iter().find(|&u| bounds.is_subset(&rel.row_set(u)));
        found
    };
    Ok(Bounds {
        directed: pairwise_bounded(order),
        filtered: pairwise_bounded(&dual),
        supremum: extremum(order),
        infimum: extremum(&dual),
    })
}

/// `Below` is the way-below relation `≪`, `Above` the way-above relation
/// `≪_d`. Both are stored with `(x, y)` meaning `x ≪ y` resp. `x ≪_d y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WayDirection {
    Below,
    Above,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WayBelowMethod {
    /// Subset enumeration of the defining quantifier.
    Definitional,
    /// The order itself, which is exact on finite posets.
    FiniteShortcut,
    /// `y ∈ int K⁺(x)`.
    CausalInterior,
    /// `(x, y) ∈ I⁺`, for globally hyperbolic models.
    Chronology,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WayBelowRel {
    pub rel: Rel,
    pub method: WayBelowMethod,
    pub direction: WayDirection,
}

/// Directed (or filtered) subsets possessing a supremum (or infimum), as
/// bit masks paired with that bound.
fn bounded_subsets(order: &Rel, direction: WayDirection, cap: usize) -> Result<Vec<(u64, usize)>> {
    let n = order.n();
    if n > cap {
        return Err(Error::CarrierTooLarge { n, cap });
    }
    let rel = match direction {
        WayDirection::Below => order.clone(),
        WayDirection::Above => order.converse(),
    };
    // up[a]: elements above a (below a for the dual).
    let up: Vec<u64> = (0..n).map(|a| mask_of(&rel.row_set(a))).collect();
    let mut out = Vec::new();
    for s in 1u64..(1u64 << n) {
        let members = || (0..n).filter(move |&a| s >> a & 1 == 1);
        let directed = members().all(|a| members().all(|b| up[a] & up[b] & s != 0));
        if !directed {
            continue;
        }
        let bounds = members().fold((1u64 << n) - 1, |acc, a| acc & up[a]);
        if let Some(sup) = (0..n).find(|&u| bounds >> u & 1 == 1 && bounds & !up[u] == 0) {
            out.push((s, sup));
        }
    }
    Ok(out)
}

fn mask_of(s: &PointSet) -> u64 {
    s.iter().fold(0, |m, a| m | 1 << a)
}

fn definitional_matrix(p: &PosetHandle, direction: WayDirection, cap: usize) -> Result<Rel> {
    let n = p.n();
    let family = bounded_subsets(&p.order, direction, cap)?;
    let up: Vec<u64> = (0..n).map(|a| mask_of(&p.order.row_set(a))).collect();
    let down: Vec<u64> = (0..n).map(|a| mask_of(&p.order.converse().row_set(a))).collect();
    Ok(Rel::from_fn(n, |x, y| match direction {
        // y ⊑ ⊔S ⇒ some s ∈ S has x ⊑ s.
        WayDirection::Below => family
            .iter()
            .all(|&(s, sup)| !p.leq(y, sup) || up[x] & s != 0),
        // ⊓S ⊑ x ⇒ some s ∈ S has s ⊑ y.
        WayDirection::Above => family
            .iter()
            .all(|&(s, inf)| !p.leq(inf, x) || down[y] & s != 0),
    }))
}

/// Evaluates `x ≪ y` (or `x ≪_d y`) by enumerating every directed subset
/// with a supremum (filtered subset with an infimum).
pub fn way_below_definitional(p: &PosetHandle, x: usize, y: usize, direction: WayDirection) -> Result<bool> {
    p.check_point(x)?;
    p.check_point(y)?;
    Ok(definitional_matrix(p, direction, ENUMERATION_CAP)?.contains(x, y))
}

/// The whole definitional relation; shares the subset enumeration across
/// pairs.
pub fn way_below_definitional_rel(p: &PosetHandle, direction: WayDirection) -> Result<WayBelowRel> {
    Ok(WayBelowRel {
        rel: definitional_matrix(p, direction, ENUMERATION_CAP)?,
        method: WayBelowMethod::Definitional,
        direction,
    })
}

/// The order itself: on a finite poset a directed set contains its
/// supremum, so both way relations coincide with `⊑`.
pub fn way_below_fast(p: &PosetHandle, direction: WayDirection) -> WayBelowRel {
    WayBelowRel {
        rel: p.order.clone(),
        method: WayBelowMethod::FiniteShortcut,
        direction,
    }
}

/// `x ≪ y ⟺ y ∈ int K⁺(x)`, the same matrix for both directions.
pub fn way_below_causal(cs: &CausalStructure, direction: WayDirection) -> Result<WayBelowRel> {
    if let Some((p, q)) = cs.k.antisymmetry_witness() {
        return Err(Error::NotKCausal(p, q));
    }
    Ok(WayBelowRel {
        rel: cs.future_interiors(),
        method: WayBelowMethod::CausalInterior,
        direction,
    })
}

/// Chronology as the way relation in both directions.
pub fn way_below_chronology(cs: &CausalStructure, direction: WayDirection) -> WayBelowRel {
    WayBelowRel {
        rel: cs.chronology.clone(),
        method: WayBelowMethod::Chronology,
        direction,
    }
}

pub fn is_upper_set(p: &PosetHandle, u: &PointSet) -> Result<bool> {
    p.check_set(u)?;
    Ok(u.iter().all(|x| p.order.row_set(x).is_subset(u)))
}

/// The two defining conditions of a Scott open set, evaluated separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScottConditions {
    pub upper_set: bool,
    /// Every directed set whose supremum lies in `U` meets `U`.
    pub inaccessible_by_directed_sups: bool,
}

pub fn scott_open_conditions(p: &PosetHandle, u: &PointSet) -> Result<ScottConditions> {
    let upper_set = is_upper_set(p, u)?;
    let target = mask_of(u);
    let inaccessible = bounded_subsets(&p.order, WayDirection::Below, ENUMERATION_CAP)?
        .iter()
        .all(|&(s, sup)| !u.contains(sup) || s & target != 0);
    Ok(ScottConditions {
        upper_set,
        inaccessible_by_directed_sups: inaccessible,
    })
}

pub fn scott_open_check(p: &PosetHandle, u: &PointSet) -> Result<bool> {
    let c = scott_open_conditions(p, u)?;
    Ok(c.upper_set && c.inaccessible_by_directed_sups)
}

fn check_rel_dims(n: usize, rel: &Rel) -> Result<()> {
    if rel.n() != n {
        return Err(Error::DimensionMismatch { left: n, right: rel.n() });
    }
    Ok(())
}

fn is_caveated(wb: &WayBelowRel) -> bool {
    matches!(wb.method, WayBelowMethod::CausalInterior)
}

/// Continuity, dual continuity, bicontinuity and joint bicontinuity.
///
/// `x` is continuous when `⇓x ∩ ↓x` contains a directed set with supremum
/// `x`; a finite directed set has a greatest element, which is then its
/// supremum, so this holds exactly when `x ∈ ⇓x`. Dually for `⇑_d x ∩ ↑x`.
/// Only points in `scope` are examined.
pub fn continuity_checks(
    p: &PosetHandle,
    wb: &WayBelowRel,
    wa: &WayBelowRel,
    scope: Option<&PointSet>,
) -> Result<CheckReport> {
    if wb.direction != WayDirection::Below || wa.direction != WayDirection::Above {
        return Err(Error::InvalidParameter(
            "continuity needs a way-below and a way-above relation".into(),
        ));
    }
    let n = p.n();
    check_rel_dims(n, &wb.rel)?;
    check_rel_dims(n, &wa.rel)?;
    let scope = match scope {
        Some(s) => {
            p.check_set(s)?;
            s.clone()
        }
        None => PointSet::full(n),
    };
    let not_continuous = scope.iter().find(|&x| !(wb.rel.contains(x, x) && p.leq(x, x)));
    let not_dual = scope.iter().find(|&x| !(wa.rel.contains(x, x) && p.leq(x, x)));
    let mismatch = wb
        .rel
        .restrict(&scope)
        .difference(&wa.rel.restrict(&scope))?
        .union(&wa.rel.restrict(&scope).difference(&wb.rel.restrict(&scope))?)?
        .pairs()
        .next();
    let continuous = not_continuous.is_none();
    let dual_continuous = not_dual.is_none();
    let bicontinuous = continuous && dual_continuous;
    let jointly = bicontinuous && mismatch.is_none();
    let witness = not_continuous
        .or(not_dual)
        .map(|point| Witness::Point { point })
        .or(mismatch.map(|(p, q)| Witness::Pair { p, q }));
    let mut report = CheckReport::new("continuity", jointly)
        .with_witness(witness)
        .detail("continuous", continuous)
        .detail("dual_continuous", dual_continuous)
        .detail("bicontinuous", bicontinuous)
        .detail("jointly_bicontinuous", jointly)
        .detail("relations_coincide", mismatch.is_none())
        .detail("scope_size", scope.len());
    if is_caveated(wb) || is_caveated(wa) {
        report = report.note(CAUSAL_INTERIOR_CAVEAT);
    }
    Ok(report)
}

/// For every `(x, y)` in `wb` (and in `only`, when given) looks for `z` with
/// `x ≪ z ≪ y`; `strict` additionally demands `z ∉ {x, y}`.
pub fn interpolation_check(wb: &WayBelowRel, only: Option<&Rel>, strict: bool) -> Result<CheckReport> {
    let n = wb.rel.n();
    let pairs = match only {
        Some(f) => wb.rel.intersect(f)?,
        None => wb.rel.clone(),
    };
    let below = wb.rel.converse();
    let mut failures = 0usize;
    let mut witness = None;
    for (x, y) in pairs.pairs() {
        let mut between = wb.rel.row_set(x).intersection(&below.row_set(y));
        if strict {
            between.remove(x);
            between.remove(y);
        }
        if between.is_empty() {
            failures += 1;
            witness.get_or_insert(Witness::Pair { p: x, q: y });
        }
    }
    let mut report = CheckReport::new("interpolation", failures == 0)
        .with_witness(witness)
        .detail("pairs_checked", pairs.count())
        .detail("failures", failures)
        .detail("strict", strict)
        .detail("carrier", n);
    if is_caveated(wb) {
        report = report.note(CAUSAL_INTERIOR_CAVEAT);
    }
    Ok(report)
}

/// `[a, b] = ↑a ∩ ↓b`.
pub fn interval(p: &PosetHandle, a: usize, b: usize) -> Result<PointSet> {
    p.check_point(a)?;
    p.check_point(b)?;
    Ok(PointSet::from_indices(
        p.n(),
        (0..p.n()).filter(|&x| p.leq(a, x) && p.leq(x, b)),
    ))
}

/// The sets `(a, b) = {x : a ≪ x ≪_d b}` over all pairs, nonempty and
/// deduplicated.
pub fn interval_topology_family(wb: &WayBelowRel, wa: &WayBelowRel) -> Result<Vec<PointSet>> {
    check_rel_dims(wb.rel.n(), &wa.rel)?;
    Ok(diamond_family(&wb.rel, &wa.rel.converse()))
}

/// Bicontinuity plus compactness of every interval in the interval topology;
/// the latter is automatic on a finite carrier.
pub fn gh_poset_check(
    p: &PosetHandle,
    wb: &WayBelowRel,
    wa: &WayBelowRel,
    scope: Option<&PointSet>,
) -> Result<CheckReport> {
    let continuity = continuity_checks(p, wb, wa, scope)?;
    let bicontinuous = continuity.flag("bicontinuous");
    let mut report = CheckReport::new("gh_poset", bicontinuous)
        .with_witness(if bicontinuous { None } else { continuity.witness.clone() })
        .detail("bicontinuous", bicontinuous)
        .detail("intervals_compact", true)
        .note("every subset of a finite space is compact, so interval compactness holds trivially");
    report.notes.extend(continuity.notes.iter().cloned());
    Ok(report)
}

/// Interior duality on a K-causal structure: the way-below and
/// way-above relations given by cone interiors coincide, and
/// `p ∈ int K⁻(q) ⟺ q ∈ int K⁺(p)` on `scope`.
pub fn theorem46_check(cs: &CausalStructure, scope: Option<&PointSet>) -> Result<CheckReport> {
    let wb = way_below_causal(cs, WayDirection::Below)?;
    let wa = way_below_causal(cs, WayDirection::Above)?;
    let lemma = lemma32_check(&cs.topology, &cs.k, scope)?;
    let same = wb.rel == wa.rel;
    Ok(CheckReport::new("theorem46", same && lemma.holds)
        .with_witness(lemma.witness.clone())
        .detail("below_equals_above", same)
        .detail("interior_characterizations_agree", lemma.holds)
        .detail("way_below_pairs", wb.rel.count())
        .note(CAUSAL_INTERIOR_CAVEAT))
}

/// Compares the interval topology built from `wb`/`wa` with `reference` on
/// `scope`.
pub fn interval_vs_topology(
    wb: &WayBelowRel,
    wa: &WayBelowRel,
    reference: &FiniteTopology,
    scope: &PointSet,
) -> Result<CheckReport> {
    let family = interval_topology_family(wb, wa)?;
    let mut report = topologies_equivalent(reference.n(), &family, reference.generators(), scope)?;
    report.name = "interval_vs_manifold".into();
    if is_caveated(wb) {
        report = report.note(CAUSAL_INTERIOR_CAVEAT);
    }
    Ok(report.detail("method", serde_json::to_value(wb.method).expect("serializable")))
}

/// Upper space of a small carrier: nonempty subsets ordered by reverse
/// inclusion. Checks that the enumerated way-below relation matches
/// `K ≪ L ⟺ L ⊆ int K` in the topology `t`.
///
/// Element `i` of the upper space is the subset with bit mask `i + 1`.
pub fn upper_space_demo(t: &FiniteTopology) -> Result<CheckReport> {
    let n = t.n();
    if n > UPPER_SPACE_CAP {
        return Err(Error::CarrierTooLarge { n, cap: UPPER_SPACE_CAP });
    }
    let m = (1usize << n) - 1;
    let subset = |i: usize| PointSet::from_mask(n, (i + 1) as u64);
    let order = Rel::from_fn(m, |a, b| subset(b).is_subset(&subset(a)));
    let poset = validate_order(&order, false)?;
    let wb = definitional_matrix(&poset, WayDirection::Below, m)?;
    let criterion = Rel::from_fn(m, |k, l| {
        subset(l).is_subset(&t.interior(&subset(k)).expect("same carrier"))
    });
    let mismatch = wb
        .difference(&criterion)?
        .union(&criterion.difference(&wb)?)?
        .pairs()
        .next();
    let mut report = CheckReport::new("upper_space", mismatch.is_none())
        .with_witness(mismatch.map(|(p, q)| Witness::Pair { p, q }))
        .detail("elements", m)
        .detail("way_below_pairs", wb.count());
    if !t.is_discrete() {
        report = report.note("topology is not discrete; the criterion is not expected to hold");
    }
    Ok(report)
}
