//! Analytic 1+1 spacetime models with closed-form chronology and causality
//! oracles, and deterministic samplers producing [`EventSet`]s.
//!
//! Coordinates are chart coordinates `(t, x)` with the flat metric
//! `-dt² + dx²`. Cone membership uses an absolute tolerance of [`CONE_TOL`] so
//! that lattice pairs on a null line are recognised as null despite rounding.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::topology::{self, FiniteTopology};

pub const CONE_TOL: f64 = 1e-9;

/// Identifier of the pseudo-random generator used by the samplers.
pub const RNG_ALGORITHM: &str = "chacha8-seed_from_u64";

/// Attempts per event before random sampling gives up on avoiding removed sets.
pub const MAX_RESAMPLE_ATTEMPTS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub t: f64,
    pub x: f64,
}

impl Event {
    pub fn new(t: f64, x: f64) -> Self {
        Event { t, x }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub t_min: f64,
    pub t_max: f64,
    pub x_min: f64,
    pub x_max: f64,
}

impl Region {
    pub fn new(t_min: f64, t_max: f64, x_min: f64, x_max: f64) -> Self {
        Region {
            t_min,
            t_max,
            x_min,
            x_max,
        }
    }

    fn contains(&self, e: Event) -> bool {
        e.t >= self.t_min - CONE_TOL
            && e.t <= self.t_max + CONE_TOL
            && e.x >= self.x_min - CONE_TOL
            && e.x <= self.x_max + CONE_TOL
    }

    fn contains_strictly(&self, e: Event) -> bool {
        e.t > self.t_min && e.t < self.t_max && e.x > self.x_min && e.x < self.x_max
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelKind {
    Minkowski1p1,
    MinkowskiMinusPoints { points: Vec<Event> },
    /// Closed spacelike segment from `a` to `b`.
    MinkowskiMinusSegment { a: Event, b: Event },
    /// Time identified modulo `period`.
    TimelikeCylinder { period: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OracleKind {
    I,
    J,
    K,
}

impl fmt::Display for OracleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OracleKind::I => "I",
            OracleKind::J => "J",
            OracleKind::K => "K",
        })
    }
}

/// Which oracles have closed-form predicates for a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Capabilities {
    pub chronology: bool,
    pub causal: bool,
    pub k_plus: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpacetimeModel {
    #[serde(flatten)]
    pub kind: ModelKind,
    pub region: Region,
}

impl SpacetimeModel {
    /// Validates a model description.
    pub fn new(kind: ModelKind, region: Region) -> Result<Self> {
        let Region {
            t_min,
            t_max,
            x_min,
            x_max,
        } = region;
        let finite = [t_min, t_max, x_min, x_max].iter().all(|v| v.is_finite());
        if !finite || t_min >= t_max || x_min >= x_max {
            return Err(Error::MalformedSpec(format!("degenerate region {region:?}")));
        }
        match &kind {
            ModelKind::Minkowski1p1 => {}
            ModelKind::MinkowskiMinusPoints { points } => {
                if points.is_empty() {
                    return Err(Error::MalformedSpec("no removed points given".into()));
                }
                if let Some(p) = points.iter().find(|p| !region.contains_strictly(**p)) {
                    return Err(Error::MalformedSpec(format!("removed point {p:?} not inside region")));
                }
            }
            ModelKind::MinkowskiMinusSegment { a, b } => {
                if !region.contains_strictly(*a) || !region.contains_strictly(*b) {
                    return Err(Error::MalformedSpec("removed segment not inside region".into()));
                }
                if (b.t - a.t).abs() >= (b.x - a.x).abs() {
                    return Err(Error::MalformedSpec("removed segment is not spacelike".into()));
                }
            }
            ModelKind::TimelikeCylinder { period } => {
                if !(period.is_finite() && *period > 0.0) {
                    return Err(Error::MalformedSpec(format!("period must be positive, got {period}")));
                }
                if t_max - t_min > period + CONE_TOL {
                    return Err(Error::MalformedSpec(
                        "cylinder region spans more than one period".into(),
                    ));
                }
            }
        }
        Ok(SpacetimeModel { kind, region })
    }

    /// Flat diamond-sampling preset on `[0, 4] × [-2, 2]`.
    pub fn minkowski() -> Self {
        Self::new(ModelKind::Minkowski1p1, Region::new(0.0, 4.0, -2.0, 2.0)).expect("valid preset")
    }

    /// `[0, 4] × [-2, 2]` with the centre `(2, 0)` removed.
    pub fn minkowski_minus_centre() -> Self {
        Self::new(
            ModelKind::MinkowskiMinusPoints {
                points: vec![Event::new(2.0, 0.0)],
            },
            Region::new(0.0, 4.0, -2.0, 2.0),
        )
        .expect("valid preset")
    }

    /// `[0, 4] × [-2, 2]` with the segment `t = 2, x ∈ [-0.5, 0.5]` removed.
    pub fn minkowski_minus_bar() -> Self {
        Self::new(
            ModelKind::MinkowskiMinusSegment {
                a: Event::new(2.0, -0.5),
                b: Event::new(2.0, 0.5),
            },
            Region::new(0.0, 4.0, -2.0, 2.0),
        )
        .expect("valid preset")
    }

    /// One period `[0, period]` of the time-identified cylinder, `x ∈ [-1, 1]`.
    pub fn cylinder(period: f64) -> Result<Self> {
        Self::new(
            ModelKind::TimelikeCylinder { period },
            Region::new(0.0, period, -1.0, 1.0),
        )
    }

    pub fn capabilities(&self) -> Capabilities {
        Capabilities {
            chronology: true,
            causal: true,
            // J̄ is the natural candidate for the barrier model but it has not
            // been certified transitive, so no closed form is claimed.
            k_plus: !matches!(self.kind, ModelKind::MinkowskiMinusSegment { .. }),
        }
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self.kind, ModelKind::TimelikeCylinder { .. })
    }

    /// Whether `e` lies in the region and off every removed set.
    pub fn contains(&self, e: Event) -> bool {
        if !self.region.contains(e) {
            return false;
        }
        match &self.kind {
            ModelKind::MinkowskiMinusPoints { points } => points.iter().all(|p| euclid(*p, e) > CONE_TOL),
            ModelKind::MinkowskiMinusSegment { a, b } => segment_distance(e, *a, *b) > CONE_TOL,
            _ => true,
        }
    }

    /// Chart distance; periodic in `t` on the cylinder.
    pub fn chart_distance(&self, p: Event, q: Event) -> f64 {
        let dx = q.x - p.x;
        let dt = match self.kind {
            ModelKind::TimelikeCylinder { period } => {
                let d = (q.t - p.t).rem_euclid(period);
                d.min(period - d)
            }
            _ => q.t - p.t,
        };
        dt.hypot(dx)
    }

    /// Distance from `e` to the region boundary and to removed sets. The
    /// identified time direction of the cylinder has no boundary.
    pub fn boundary_distance(&self, e: Event) -> f64 {
        let r = &self.region;
        let mut d = (e.x - r.x_min).min(r.x_max - e.x);
        if !self.is_periodic() {
            d = d.min(e.t - r.t_min).min(r.t_max - e.t);
        }
        match &self.kind {
            ModelKind::MinkowskiMinusPoints { points } => points.iter().map(|p| euclid(*p, e)).fold(d, f64::min),
            ModelKind::MinkowskiMinusSegment { a, b } => d.min(segment_distance(e, *a, *b)),
            _ => d,
        }
    }

    /// Closed-form membership of `(p, q)` in I⁺, J⁺ or K⁺. I⁺ is irreflexive by
    /// convention; J⁺ and K⁺ contain coincident pairs.
    pub fn oracle(&self, kind: OracleKind, p: Event, q: Event) -> Result<bool> {
        let caps = self.capabilities();
        let supported = match kind {
            OracleKind::I => caps.chronology,
            OracleKind::J => caps.causal,
            OracleKind::K => caps.k_plus,
        };
        if !supported {
            return Err(Error::UnsupportedOracle(match kind {
                OracleKind::I => "I",
                OracleKind::J => "J",
                OracleKind::K => "K",
            }));
        }
        let slack = cone_slack(p, q);
        let coincident = self.chart_distance(p, q) <= CONE_TOL;
        Ok(match (&self.kind, kind) {
            (ModelKind::TimelikeCylinder { period }, kind) => {
                if kind == OracleKind::I && coincident {
                    false
                } else {
                    // Some winding always exists; computing it keeps the
                    // geometric content explicit.
                    let w = cylinder_winding(p, q, *period);
                    q.t + w as f64 * period - p.t - (q.x - p.x).abs() > CONE_TOL || kind != OracleKind::I
                }
            }
            (_, OracleKind::I) => !coincident && slack > CONE_TOL && !self.chronology_blocked(p, q),
            (ModelKind::MinkowskiMinusPoints { points }, OracleKind::J) => {
                coincident || (slack >= -CONE_TOL && !null_blocked(p, q, points))
            }
            (ModelKind::MinkowskiMinusSegment { a, b }, OracleKind::J) => {
                coincident || (slack >= -CONE_TOL && barrier_passable(p, q, *a, *b, false))
            }
            (_, OracleKind::J) | (_, OracleKind::K) => coincident || slack >= -CONE_TOL,
        })
    }

    fn chronology_blocked(&self, p: Event, q: Event) -> bool {
        match &self.kind {
            ModelKind::MinkowskiMinusSegment { a, b } => !barrier_passable(p, q, *a, *b, true),
            _ => false,
        }
    }

    pub fn sample(&self, scheme: &SamplingScheme) -> Result<EventSet> {
        match *scheme {
            SamplingScheme::Grid {
                m_t,
                m_x,
                jitter,
                seed,
            } => self.sample_grid(m_t, m_x, jitter, seed, scheme),
            SamplingScheme::Random { n, seed } => self.sample_random(n, seed, scheme),
        }
    }

    fn time_extent(&self) -> (f64, bool) {
        let r = &self.region;
        match self.kind {
            ModelKind::TimelikeCylinder { period } if r.t_max - r.t_min >= period - CONE_TOL => (period, true),
            _ => (r.t_max - r.t_min, false),
        }
    }

    fn sample_grid(
        &self,
        m_t: usize,
        m_x: usize,
        jitter: f64,
        seed: Option<u64>,
        scheme: &SamplingScheme,
    ) -> Result<EventSet> {
        if m_t == 0 || m_x == 0 {
            return Err(Error::InvalidParameter("grid counts must be at least 1".into()));
        }
        let r = self.region;
        let (t_extent, half_open) = self.time_extent();
        let h_t = if half_open {
            t_extent / m_t as f64
        } else if m_t > 1 {
            t_extent / (m_t - 1) as f64
        } else {
            t_extent
        };
        let h_x = if m_x > 1 {
            (r.x_max - r.x_min) / (m_x - 1) as f64
        } else {
            r.x_max - r.x_min
        };
        if !(jitter >= 0.0 && jitter.is_finite()) {
            return Err(Error::InvalidParameter(format!("jitter must be non-negative, got {jitter}")));
        }
        let min_spacing = match (m_t > 1 || half_open, m_x > 1) {
            (true, true) => h_t.min(h_x),
            (true, false) => h_t,
            (false, true) => h_x,
            (false, false) => f64::INFINITY,
        };
        if jitter > 0.0 && jitter >= min_spacing / 2.0 {
            return Err(Error::InvalidParameter(format!(
                "jitter {jitter} must be below half the grid spacing {}",
                min_spacing / 2.0
            )));
        }
        let mut rng = match (jitter > 0.0, seed) {
            (true, None) => return Err(Error::SeedRequired),
            (true, Some(s)) => Some(ChaCha8Rng::seed_from_u64(s)),
            (false, _) => None,
        };

        let single = |m: usize, lo: f64, hi: f64| if m == 1 { Some((lo + hi) / 2.0) } else { None };
        let mut t_nodes = axis_nodes(r.t_min, r.t_min + t_extent, h_t, m_t, half_open);
        let mut x_nodes = axis_nodes(r.x_min, r.x_max, h_x, m_x, false);
        if let Some(t) = single(m_t, r.t_min, r.t_max).filter(|_| !half_open) {
            t_nodes = vec![t];
        }
        if let Some(x) = single(m_x, r.x_min, r.x_max) {
            x_nodes = vec![x];
        }
        let mut anchored = false;
        if let ModelKind::MinkowskiMinusPoints { points } = &self.kind {
            // Straddle the first removed point: it sits at a cell centre, so
            // the lattice diagonals through it are blocked null pairs.
            let anchor = points[0];
            if m_t > 1 && !half_open {
                t_nodes = straddling_nodes(r.t_min, r.t_max, h_t, anchor.t);
            }
            if m_x > 1 {
                x_nodes = straddling_nodes(r.x_min, r.x_max, h_x, anchor.x);
            }
            anchored = true;
        }

        let mut events = Vec::with_capacity(t_nodes.len() * x_nodes.len());
        let mut skipped = 0;
        for &t in &t_nodes {
            for &x in &x_nodes {
                let mut e = Event::new(t, x);
                if let Some(rng) = rng.as_mut() {
                    e.t += rng.gen_range(-jitter..=jitter);
                    e.x += rng.gen_range(-jitter..=jitter);
                    if !half_open {
                        e.t = e.t.clamp(r.t_min, r.t_max);
                    }
                    e.x = e.x.clamp(r.x_min, r.x_max);
                }
                if self.contains(e) {
                    events.push(e);
                } else {
                    skipped += 1;
                }
            }
        }
        if events.is_empty() {
            return Err(Error::RegionTooSmall("grid produced no admissible events".into()));
        }
        let record = SamplingRecord {
            scheme: scheme.clone(),
            rng: rng.is_some().then(|| RNG_ALGORITHM.to_string()),
            policy: "grid: nodes on removed sets are skipped".into(),
            skipped,
            resampled: 0,
            anchored_to_removed_point: anchored,
        };
        EventSet::new(self.clone(), events, record)
    }

    fn sample_random(&self, n: usize, seed: Option<u64>, scheme: &SamplingScheme) -> Result<EventSet> {
        if n == 0 {
            return Err(Error::InvalidParameter("sample count must be at least 1".into()));
        }
        let seed = seed.ok_or(Error::SeedRequired)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = self.region;
        let (t_extent, half_open) = self.time_extent();
        let mut events = Vec::with_capacity(n);
        let mut resampled = 0;
        for _ in 0..n {
            let mut attempts = 0;
            let e = loop {
                let t = if half_open {
                    rng.gen_range(r.t_min..r.t_min + t_extent)
                } else {
                    rng.gen_range(r.t_min..=r.t_max)
                };
                let e = Event::new(t, rng.gen_range(r.x_min..=r.x_max));
                if self.contains(e) {
                    break e;
                }
                attempts += 1;
                resampled += 1;
                if attempts >= MAX_RESAMPLE_ATTEMPTS {
                    return Err(Error::RegionTooSmall(format!(
                        "no admissible event after {MAX_RESAMPLE_ATTEMPTS} attempts"
                    )));
                }
            };
            events.push(e);
        }
        let record = SamplingRecord {
            scheme: scheme.clone(),
            rng: Some(RNG_ALGORITHM.to_string()),
            policy: format!(
                "uniform fixed-count sampling (stands in for sprinkling); events on removed sets \
                 are redrawn up to {MAX_RESAMPLE_ATTEMPTS} times"
            ),
            skipped: 0,
            resampled,
            anchored_to_removed_point: false,
        };
        EventSet::new(self.clone(), events, record)
    }
}

fn axis_nodes(lo: f64, hi: f64, h: f64, m: usize, half_open: bool) -> Vec<f64> {
    (0..m)
        .map(|i| if !half_open && i + 1 == m { hi } else { lo + i as f64 * h })
        .collect()
}

/// Lattice nodes of spacing `h` within `[lo, hi]` placed so that `anchor` lies
/// midway between two nodes. Reproduces the plain `lo + i·h` lattice when the
/// anchor already sits at a cell centre.
fn straddling_nodes(lo: f64, hi: f64, h: f64, anchor: f64) -> Vec<f64> {
    let k = ((anchor - lo) / h - 0.5).round();
    let start = anchor - (k + 0.5) * h;
    let mut nodes = Vec::new();
    let mut i = -1i64;
    loop {
        let v = start + i as f64 * h;
        if v > hi + CONE_TOL {
            break;
        }
        if v >= lo - CONE_TOL {
            nodes.push(v.clamp(lo, hi));
        }
        i += 1;
    }
    nodes
}

fn euclid(p: Event, q: Event) -> f64 {
    (q.t - p.t).hypot(q.x - p.x)
}

fn segment_distance(e: Event, a: Event, b: Event) -> f64 {
    let (vt, vx) = (b.t - a.t, b.x - a.x);
    let len2 = vt * vt + vx * vx;
    let s = (((e.t - a.t) * vt + (e.x - a.x) * vx) / len2).clamp(0.0, 1.0);
    euclid(e, Event::new(a.t + s * vt, a.x + s * vx))
}

/// `Δt - |Δx|`: positive inside the open future cone.
pub fn cone_slack(p: Event, q: Event) -> f64 {
    (q.t - p.t) - (q.x - p.x).abs()
}

/// Smallest winding `w` with `q.t + w·period` strictly inside the future cone
/// of `p` in the unrolled cover.
pub fn cylinder_winding(p: Event, q: Event, period: f64) -> i64 {
    let deficit = (q.x - p.x).abs() - (q.t - p.t);
    let mut w = (deficit / period).floor() as i64;
    while q.t + w as f64 * period - p.t - (q.x - p.x).abs() <= CONE_TOL {
        w += 1;
    }
    w
}

/// Whether a null pair `(p, q)` has a removed point strictly between its
/// endpoints on the connecting null segment.
fn null_blocked(p: Event, q: Event, removed: &[Event]) -> bool {
    let dt = q.t - p.t;
    if (dt - (q.x - p.x).abs()).abs() > CONE_TOL || dt <= CONE_TOL {
        return false;
    }
    let dir = (q.x - p.x).signum();
    removed.iter().any(|r| {
        let s = r.t - p.t;
        s > CONE_TOL && q.t - r.t > CONE_TOL && ((r.x - p.x) - dir * s).abs() <= CONE_TOL
    })
}

/// Whether some future-directed curve from `p` to `q` (timelike when
/// `strict`, causal otherwise) avoids the closed spacelike segment `a b`.
///
/// Such curves cross the line through the segment at most once, at a point
/// `c` with `c ∈ I⁺(p) ∩ I⁻(q)` (resp. `J`), so it suffices to check whether
/// the admissible crossing interval pokes out of the segment.
fn barrier_passable(p: Event, q: Event, a: Event, b: Event, strict: bool) -> bool {
    let (a, b) = if a.x <= b.x { (a, b) } else { (b, a) };
    let m = (b.t - a.t) / (b.x - a.x);
    let c = a.t - m * a.x;
    let line_t = |x: f64| c + m * x;
    let below = p.t < line_t(p.x) - CONE_TOL;
    let above = q.t > line_t(q.x) + CONE_TOL;
    if !(below && above) {
        return true;
    }
    let lo = ((p.t + p.x - c) / (1.0 + m)).max((c - q.t + q.x) / (1.0 - m));
    let hi = ((c - p.t + p.x) / (1.0 - m)).min((q.t - c + q.x) / (1.0 + m));
    if strict {
        lo < hi - CONE_TOL && (lo < a.x - CONE_TOL || hi > b.x + CONE_TOL)
    } else {
        lo <= hi + CONE_TOL && (lo < a.x - CONE_TOL || hi > b.x + CONE_TOL)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SamplingScheme {
    Grid {
        m_t: usize,
        m_x: usize,
        #[serde(default)]
        jitter: f64,
        #[serde(default)]
        seed: Option<u64>,
    },
    Random {
        n: usize,
        seed: Option<u64>,
    },
}

impl SamplingScheme {
    pub fn grid(m_t: usize, m_x: usize) -> Self {
        SamplingScheme::Grid {
            m_t,
            m_x,
            jitter: 0.0,
            seed: None,
        }
    }

    pub fn random(n: usize, seed: u64) -> Self {
        SamplingScheme::Random { n, seed: Some(seed) }
    }
}

/// How an event set was produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingRecord {
    pub scheme: SamplingScheme,
    pub rng: Option<String>,
    pub policy: String,
    pub skipped: usize,
    pub resampled: usize,
    #[serde(default)]
    pub anchored_to_removed_point: bool,
}

impl SamplingRecord {
    /// Record for hand-placed events.
    pub fn explicit() -> Self {
        SamplingRecord {
            scheme: SamplingScheme::Random { n: 0, seed: None },
            rng: None,
            policy: "explicit events".into(),
            skipped: 0,
            resampled: 0,
            anchored_to_removed_point: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventSet {
    pub model: SpacetimeModel,
    pub events: Vec<Event>,
    pub sampling: SamplingRecord,
}

impl EventSet {
    pub fn new(model: SpacetimeModel, events: Vec<Event>, sampling: SamplingRecord) -> Result<Self> {
        if events.is_empty() {
            return Err(Error::EmptyEventSet);
        }
        if let Some(index) = events.iter().position(|e| !model.contains(*e)) {
            return Err(Error::EventOutsideRegion { index });
        }
        Ok(EventSet {
            model,
            events,
            sampling,
        })
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.model.chart_distance(self.events[i], self.events[j])
    }

    /// Twice the largest nearest-neighbour chart distance.
    pub fn default_radius(&self) -> f64 {
        topology::default_radius(self.len(), |i, j| self.distance(i, j))
    }

    pub fn ball_topology(&self, radius: f64) -> Result<FiniteTopology> {
        FiniteTopology::from_balls(self.len(), radius, |i, j| self.distance(i, j))
    }

    /// Events at chart distance at least `margin` from the region boundary
    /// and from removed sets.
    pub fn margin_interior(&self, margin: f64) -> PointSet {
        PointSet::from_indices(
            self.len(),
            (0..self.len()).filter(|&i| self.model.boundary_distance(self.events[i]) >= margin - CONE_TOL),
        )
    }

    pub fn oracle(&self, kind: OracleKind, i: usize, j: usize) -> Result<bool> {
        self.model.oracle(kind, self.events[i], self.events[j])
    }

    pub fn slack(&self, i: usize, j: usize) -> f64 {
        cone_slack(self.events[i], self.events[j])
    }
}

/// Parses `kind[:key=value,...]`.
///
/// Kinds: `minkowski`, `minus-points`, `minus-segment`, `cylinder`. Keys:
/// `t=LO..HI`, `x=LO..HI`, `points=T/X;T/X`, `segment=T/X;T/X`, `period=P`.
impl FromStr for SpacetimeModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: String| Error::MalformedSpec(msg);
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut region = None::<(Option<(f64, f64)>, Option<(f64, f64)>)>;
        let mut points = None;
        let mut segment = None;
        let mut period = None;
        let num = |v: &str| v.trim().parse::<f64>().map_err(|_| bad(format!("not a number: {v:?}")));
        let range = |v: &str| -> Result<(f64, f64)> {
            let (lo, hi) = v.split_once("..").ok_or_else(|| bad(format!("expected LO..HI, got {v:?}")))?;
            Ok((num(lo)?, num(hi)?))
        };
        let event = |v: &str| -> Result<Event> {
            let (t, x) = v.split_once('/').ok_or_else(|| bad(format!("expected T/X, got {v:?}")))?;
            Ok(Event::new(num(t)?, num(x)?))
        };
        for kv in rest.split(',').filter(|kv| !kv.trim().is_empty()) {
            let (k, v) = kv.split_once('=').ok_or_else(|| bad(format!("expected key=value, got {kv:?}")))?;
            match k.trim() {
                "t" => region.get_or_insert((None, None)).0 = Some(range(v)?),
                "x" => region.get_or_insert((None, None)).1 = Some(range(v)?),
                "points" => points = Some(v.split(';').map(event).collect::<Result<Vec<_>>>()?),
                "segment" => {
                    let ends = v.split(';').map(event).collect::<Result<Vec<_>>>()?;
                    if ends.len() != 2 {
                        return Err(bad("segment needs exactly two endpoints".into()));
                    }
                    segment = Some((ends[0], ends[1]));
                }
                "period" => period = Some(num(v)?),
                other => return Err(bad(format!("unknown key {other:?}"))),
            }
        }
        let base = match kind.trim() {
            "minkowski" => SpacetimeModel::minkowski(),
            "minus-points" => SpacetimeModel::minkowski_minus_centre(),
            "minus-segment" => SpacetimeModel::minkowski_minus_bar(),
            "cylinder" => SpacetimeModel::cylinder(period.unwrap_or(1.0))?,
            other => return Err(bad(format!("unknown model kind {other:?}"))),
        };
        let mut reg = base.region;
        if let Some((t, x)) = region {
            if let Some((lo, hi)) = t {
                reg.t_min = lo;
                reg.t_max = hi;
            }
            if let Some((lo, hi)) = x {
                reg.x_min = lo;
                reg.x_max = hi;
            }
        }
        let kind = match base.kind {
            ModelKind::MinkowskiMinusPoints { points: p } => ModelKind::MinkowskiMinusPoints {
                points: points.unwrap_or(p),
            },
            ModelKind::MinkowskiMinusSegment { a, b } => {
                let (a, b) = segment.unwrap_or((a, b));
                ModelKind::MinkowskiMinusSegment { a, b }
            }
            other => {
                if points.is_some() || segment.is_some() {
                    return Err(bad("removed sets only apply to minus-points / minus-segment".into()));
                }
                other
            }
        };
        if period.is_some() && !matches!(kind, ModelKind::TimelikeCylinder { .. }) {
            return Err(bad("period only applies to the cylinder".into()));
        }
        SpacetimeModel::new(kind, reg)
    }
}
