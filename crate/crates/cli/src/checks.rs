use std::str::FromStr;

use kcausal::causal::{
    alexandrov_family, convex_open_hull, is_k_causal, k_convexity_witness, k_plus_certificate, lemma32_check,
    lemma43_check, inner_continuity, outer_continuity, strong_k_causality, AlexandrovKind, Lemma43Options,
};
use kcausal::order::{
    continuity_checks, gh_poset_check, interpolation_check, interval_vs_topology, theorem46_check, validate_order,
    way_below_causal, way_below_chronology,
};
use kcausal::topology::topologies_equivalent;
use kcausal::{CausalStructure, CheckReport, Direction, Error, ModelKind, PointSet, Rel, WayDirection, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckName {
    KPlusCertificate,
    KCausal,
    StrongKCausal,
    KConvexity,
    InnerContinuity,
    OuterContinuity,
    Lemma32,
    Lemma43,
    Interpolation,
    Continuity,
    JointBicontinuity,
    IntervalVsManifold,
    AlexandrovVsManifold,
    GhPoset,
    Theorem46,
    Theorem31,
}

pub const ALL_CHECKS: &[(&str, CheckName)] = &[
    ("k-plus-certificate", CheckName::KPlusCertificate),
    ("k-causal", CheckName::KCausal),
    ("strong-k-causal", CheckName::StrongKCausal),
    ("k-convexity", CheckName::KConvexity),
    ("inner-continuity", CheckName::InnerContinuity),
    ("outer-continuity", CheckName::OuterContinuity),
    ("lemma32", CheckName::Lemma32),
    ("lemma43", CheckName::Lemma43),
    ("interpolation", CheckName::Interpolation),
    ("continuity", CheckName::Continuity),
    ("joint-bicontinuity", CheckName::JointBicontinuity),
    ("interval-vs-manifold", CheckName::IntervalVsManifold),
    ("alexandrov-vs-manifold", CheckName::AlexandrovVsManifold),
    ("gh-poset", CheckName::GhPoset),
    ("theorem46", CheckName::Theorem46),
    ("theorem31", CheckName::Theorem31),
];

impl FromStr for CheckName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        ALL_CHECKS
            .iter()
            .find(|(name, _)| *name == s.trim())
            .map(|(_, c)| *c)
            .ok_or_else(|| {
                let known: Vec<&str> = ALL_CHECKS.iter().map(|(n, _)| *n).collect();
                format!("unknown check {s:?}; known checks: {}", known.join(", "))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Balls,
    Alexandrov,
    KAlexandrov,
    Interval,
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "balls" => Ok(Family::Balls),
            "alexandrov" => Ok(Family::Alexandrov),
            "k-alexandrov" => Ok(Family::KAlexandrov),
            "interval" => Ok(Family::Interval),
            _ => Err(format!(
                "unknown family {s:?}; expected balls, alexandrov, k-alexandrov or interval"
            )),
        }
    }
}

pub struct Context<'a> {
    pub cs: &'a CausalStructure,
    pub margin: f64,
    pub scope: PointSet,
    pub seed: u64,
}

impl<'a> Context<'a> {
    pub fn new(cs: &'a CausalStructure, margin: Option<f64>, seed: u64) -> Self {
        let margin = margin.unwrap_or_else(|| cs.default_margin());
        Context {
            cs,
            margin,
            scope: cs.scope(Some(margin)),
            seed,
        }
    }
}

/// A library error that means the property under test fails rather than that
/// the input is unusable.
fn violation(name: &str, err: Error) -> Result<CheckReport, Error> {
    match err {
        Error::NotKCausal(p, q) => Ok(CheckReport::new(name, false)
            .with_witness(Some(Witness::Pair { p, q }))
            .note("K+ is not antisymmetric; the check presupposes K-causality")),
        other => Err(other),
    }
}

fn renamed(mut r: CheckReport, name: &str) -> CheckReport {
    r.name = name.to_string();
    r
}

fn both_signs(
    name: &str,
    f: impl Fn(Direction) -> Result<CheckReport, Error>,
) -> Result<Vec<CheckReport>, Error> {
    Ok(vec![
        renamed(f(Direction::Future)?, &format!("{name}-future")),
        renamed(f(Direction::Past)?, &format!("{name}-past")),
    ])
}

pub fn run_check(check: CheckName, ctx: &Context) -> Result<Vec<CheckReport>, Error> {
    let cs = ctx.cs;
    let t = &cs.topology;
    let k = &cs.k;
    let scope = Some(&ctx.scope);
    let reports = match check {
        CheckName::KPlusCertificate => vec![renamed(
            k_plus_certificate(&cs.chronology, t, k)?.detail("iterations", cs.iterations),
            "k-plus-certificate",
        )],
        CheckName::KCausal => vec![renamed(is_k_causal(k), "k-causal")],
        CheckName::StrongKCausal => vec![renamed(strong_k_causality(t, k, scope)?, "strong-k-causal")],
        CheckName::KConvexity => vec![k_convexity_report(cs, &ctx.scope)],
        CheckName::InnerContinuity => both_signs("inner-continuity", |s| inner_continuity(t, k, s, scope))?,
        CheckName::OuterContinuity => both_signs("outer-continuity", |s| outer_continuity(t, k, s, scope))?,
        CheckName::Lemma32 => vec![renamed(
            lemma32_check(t, k, scope).or_else(|e| violation("lemma32", e))?,
            "lemma32",
        )],
        CheckName::Lemma43 => {
            let options = Lemma43Options {
                seed: ctx.seed,
                ..Lemma43Options::default()
            };
            vec![renamed(lemma43_check(k, t, options)?, "lemma43")]
        }
        CheckName::Interpolation => vec![match way_below_causal(cs, WayDirection::Below) {
            Ok(wb) => {
                let slack = 2.0 * cs.radius();
                let pairs = Rel::from_fn(cs.n(), |x, y| {
                    ctx.scope.contains(x) && ctx.scope.contains(y) && cs.events.slack(x, y) > slack
                });
                renamed(interpolation_check(&wb, Some(&pairs), true)?, "interpolation")
                    .detail("min_chart_slack", slack)
            }
            Err(e) => violation("interpolation", e)?,
        }],
        CheckName::Continuity | CheckName::JointBicontinuity | CheckName::GhPoset => {
            let name = match check {
                CheckName::Continuity => "continuity",
                CheckName::JointBicontinuity => "joint-bicontinuity",
                _ => "gh-poset",
            };
            let rels = way_below_causal(cs, WayDirection::Below)
                .and_then(|wb| Ok((wb, way_below_causal(cs, WayDirection::Above)?)))
                .and_then(|(wb, wa)| Ok((validate_order(k, true)?, wb, wa)));
            match rels {
                Ok((poset, wb, wa)) => {
                    let mut r = if check == CheckName::GhPoset {
                        gh_poset_check(&poset, &wb, &wa, scope)?
                    } else {
                        continuity_checks(&poset, &wb, &wa, scope)?
                    };
                    if check == CheckName::Continuity {
                        r.holds = r.flag("bicontinuous");
                    }
                    vec![renamed(r, name)]
                }
                Err(Error::NotAntisymmetric(p, q)) => vec![violation(name, Error::NotKCausal(p, q))?],
                Err(e) => vec![violation(name, e)?],
            }
        }
        CheckName::IntervalVsManifold => vec![match (
            way_below_causal(cs, WayDirection::Below),
            way_below_causal(cs, WayDirection::Above),
        ) {
            (Ok(wb), Ok(wa)) => renamed(interval_vs_topology(&wb, &wa, t, &ctx.scope)?, "interval-vs-manifold"),
            (Err(e), _) | (_, Err(e)) => violation("interval-vs-manifold", e)?,
        }],
        CheckName::AlexandrovVsManifold => {
            let mut out = Vec::new();
            for (kind, name) in [
                (AlexandrovKind::Chronological, "alexandrov-vs-manifold"),
                (AlexandrovKind::KInterior, "k-alexandrov-vs-manifold"),
            ] {
                let fam = alexandrov_family(cs, kind);
                out.push(renamed(
                    topologies_equivalent(cs.n(), &fam, t.generators(), &ctx.scope)?,
                    name,
                ));
            }
            out
        }
        CheckName::Theorem46 => vec![renamed(
            theorem46_check(cs, scope).or_else(|e| violation("theorem46", e))?,
            "theorem46",
        )],
        CheckName::Theorem31 => {
            let wb = way_below_chronology(cs, WayDirection::Below);
            let wa = way_below_chronology(cs, WayDirection::Above);
            let mut r = renamed(interval_vs_topology(&wb, &wa, t, &ctx.scope)?, "theorem31");
            if !matches!(cs.events.model.kind, ModelKind::Minkowski1p1) {
                r = r.note("model is not globally hyperbolic; the preset expects a Minkowski sample");
            }
            vec![r]
        }
    };
    Ok(reports
        .into_iter()
        .map(|r| r.with_margin(Some(ctx.margin)))
        .collect())
}

/// Every minimal neighbourhood `N(p)`, `p` in scope, is K-convex; reports the
/// size of the smallest open K-convex set around each point as well.
fn k_convexity_report(cs: &CausalStructure, scope: &PointSet) -> CheckReport {
    let kt = cs.k.converse();
    let mut failures = 0usize;
    let mut witness = None;
    let mut largest_hull = 0usize;
    for p in scope.iter() {
        let nbhd = cs.topology.min_nbhd(p);
        if let Some((a, b, c)) = k_convexity_witness(&cs.k, nbhd) {
            failures += 1;
            witness.get_or_insert(Witness::Triple { a, b, c });
        }
        largest_hull = largest_hull.max(convex_open_hull(&cs.topology, &cs.k, &kt, p).len());
    }
    CheckReport::new("k-convexity", failures == 0)
        .with_witness(witness)
        .detail("failures", failures)
        .detail("largest_convex_open_hull", largest_hull)
}

/// Generating family for `compare`.
pub fn family(cs: &CausalStructure, f: Family) -> Result<Vec<PointSet>, Error> {
    Ok(match f {
        Family::Balls => cs.topology.generators().to_vec(),
        Family::Alexandrov => alexandrov_family(cs, AlexandrovKind::Chronological),
        Family::KAlexandrov => alexandrov_family(cs, AlexandrovKind::KInterior),
        Family::Interval => {
            let wb = way_below_causal(cs, WayDirection::Below)?;
            let wa = way_below_causal(cs, WayDirection::Above)?;
            kcausal::order::interval_topology_family(&wb, &wa)?
        }
    })
}
