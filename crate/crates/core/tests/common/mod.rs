//! Brute-force reference implementations on bit masks, written from the
//! definitions and sharing no code with the library.

#![allow(dead_code)]

use std::collections::BTreeSet;

use kcausal::{FiniteTopology, PointSet, Rel};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub fn mask(s: &PointSet) -> u64 {
    assert!(s.universe() <= 64);
    s.iter().fold(0, |m, i| m | (1 << i))
}

pub fn has(m: u64, i: usize) -> bool {
    m >> i & 1 == 1
}

pub fn bits(m: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |&i| has(m, i))
}

/// Row masks of a relation: `rows[i]` holds every `j` with `(i, j)`.
pub fn rows(r: &Rel) -> Vec<u64> {
    (0..r.n()).map(|i| mask(&r.row_set(i))).collect()
}

pub fn rel(n: usize, rows: &[u64]) -> Rel {
    Rel::from_fn(n, |i, j| has(rows[i], j))
}

/// Every open set generated by `generators`: close under finite
/// intersection, then under arbitrary union.
pub fn opens_from_generators(n: usize, generators: &[u64]) -> Vec<u64> {
    let full = full_mask(n);
    let mut basis: BTreeSet<u64> = generators.iter().copied().collect();
    basis.insert(full);
    loop {
        let current: Vec<u64> = basis.iter().copied().collect();
        let before = basis.len();
        for &a in &current {
            for &b in &current {
                basis.insert(a & b);
            }
        }
        if basis.len() == before {
            break;
        }
    }
    let mut opens: BTreeSet<u64> = BTreeSet::from([0]);
    loop {
        let current: Vec<u64> = opens.iter().copied().collect();
        let before = opens.len();
        for &a in &current {
            for &b in &basis {
                opens.insert(a | b);
            }
        }
        if opens.len() == before {
            break;
        }
    }
    opens.into_iter().collect()
}

/// Every topology on `n` points, as its sorted list of opens.
pub fn all_topologies(n: usize) -> Vec<Vec<u64>> {
    let full = full_mask(n);
    let middle: Vec<u64> = (1..full).collect();
    let mut out = Vec::new();
    for choice in 0u64..(1 << middle.len()) {
        let mut opens = vec![0, full];
        opens.extend(bits(choice).map(|i| middle[i]));
        let closed = opens
            .iter()
            .all(|&a| opens.iter().all(|&b| opens.contains(&(a | b)) && opens.contains(&(a & b))));
        if closed {
            opens.sort_unstable();
            out.push(opens);
        }
    }
    out
}

pub fn topology(n: usize, opens: &[u64]) -> FiniteTopology {
    let generators = opens
        .iter()
        .filter(|&&o| o != 0)
        .map(|&o| PointSet::from_mask(n, o))
        .collect();
    FiniteTopology::from_generators(n, generators).unwrap()
}

pub fn interior(opens: &[u64], s: u64) -> u64 {
    opens.iter().filter(|&&o| o & !s == 0).fold(0, |acc, &o| acc | o)
}

pub fn closure(opens: &[u64], n: usize, s: u64) -> u64 {
    full_mask(n) & !interior(opens, full_mask(n) & !s)
}

/// Closure of a relation in the product topology: `(a, b)` is a limit pair
/// when every basic box `U × V` around it meets `r`.
pub fn rel_closure(opens: &[u64], n: usize, r: &[u64]) -> Vec<u64> {
    (0..n)
        .map(|a| {
            (0..n)
                .filter(|&b| {
                    opens.iter().filter(|&&u| has(u, a)).all(|&u| {
                        opens
                            .iter()
                            .filter(|&&v| has(v, b))
                            .all(|&v| bits(u).any(|x| r[x] & v != 0))
                    })
                })
                .fold(0, |m, b| m | (1 << b))
        })
        .collect()
}

pub fn is_transitive(r: &[u64]) -> bool {
    (0..r.len()).all(|a| bits(r[a]).all(|b| r[b] & !r[a] == 0))
}

/// Warshall closure.
pub fn transitive_closure(r: &[u64]) -> Vec<u64> {
    let mut c = r.to_vec();
    for k in 0..c.len() {
        for i in 0..c.len() {
            if has(c[i], k) {
                c[i] |= c[k];
            }
        }
    }
    c
}

pub fn compose(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().map(|&row| bits(row).fold(0, |m, j| m | b[j])).collect()
}

pub fn converse(r: &[u64]) -> Vec<u64> {
    let n = r.len();
    (0..n).map(|j| (0..n).filter(|&i| has(r[i], j)).fold(0, |m, i| m | (1 << i))).collect()
}

/// Least transitive, closed relation containing `i`, found by scanning every
/// relation on three points.
pub fn k_plus_exhaustive(opens: &[u64], i: &[u64]) -> Vec<u64> {
    let n = i.len();
    assert!(n <= 3);
    let mut meet = vec![full_mask(n); n];
    for code in 0u64..(1 << (n * n)) {
        let cand: Vec<u64> = (0..n).map(|a| (code >> (a * n)) & full_mask(n)).collect();
        let contains_i = (0..n).all(|a| i[a] & !cand[a] == 0);
        if contains_i && is_transitive(&cand) && rel_closure(opens, n, &cand) == cand {
            for a in 0..n {
                meet[a] &= cand[a];
            }
        }
    }
    meet
}

/// Every labeled partial order on `n` points, as reflexive up-set rows.
///
/// Extends each order on `n - 1` points by a new top-index element `z`
/// placed above a down-set `D` and below an up-set `U` with `D < U`.
pub fn all_posets(n: usize) -> Vec<Vec<u64>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let z = n - 1;
    for base in all_posets(n - 1) {
        let leq = |a: usize, b: usize| has(base[a], b);
        let m = n - 1;
        for d in 0u64..(1 << m) {
            let down_closed = bits(d).all(|b| (0..m).all(|a| !leq(a, b) || has(d, a)));
            if !down_closed {
                continue;
            }
            for u in 0u64..(1 << m) {
                if u & d != 0 {
                    continue;
                }
                let up_closed = bits(u).all(|a| (0..m).all(|b| !leq(a, b) || has(u, b)));
                if !up_closed || !bits(d).all(|a| bits(u).all(|b| leq(a, b))) {
                    continue;
                }
                let mut rows = base.clone();
                for a in bits(d) {
                    rows[a] |= 1 << z;
                }
                rows.push(u | 1 << z);
                out.push(rows);
            }
        }
    }
    out
}

/// Random partial order: a random DAG along a random linear extension,
/// transitively and reflexively closed.
pub fn random_poset(rng: &mut impl Rng, n: usize) -> Vec<u64> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let density: f64 = rng.gen_range(0.0..0.7);
    let mut r = vec![0u64; n];
    for i in 0..n {
        r[perm[i]] |= 1 << perm[i];
        for j in i + 1..n {
            if rng.gen_bool(density) {
                r[perm[i]] |= 1 << perm[j];
            }
        }
    }
    transitive_closure(&r)
}

/// Random family of subsets that covers every point.
pub fn random_cover(rng: &mut impl Rng, n: usize, count: usize) -> Vec<u64> {
    let mut family: Vec<u64> = (0..count).map(|_| rng.gen_range(1..=full_mask(n))).collect();
    let covered = family.iter().fold(0, |m, &s| m | s);
    if covered != full_mask(n) {
        family.push(full_mask(n) & !covered);
    }
    family
}

pub fn random_rel(rng: &mut impl Rng, n: usize, density: f64) -> Vec<u64> {
    (0..n)
        .map(|_| (0..n).filter(|_| rng.gen_bool(density)).fold(0, |m, j| m | (1 << j)))
        .collect()
}

/// `F(p) = int K±(p)`, computed from the opens.
pub fn interior_images(opens: &[u64], k: &[u64], future: bool) -> Vec<u64> {
    let base = if future { k.to_vec() } else { converse(k) };
    base.iter().map(|&row| interior(opens, row)).collect()
}

fn subsets(m: u64) -> impl Iterator<Item = u64> {
    // Every submask of `m`, down to 0.
    let mut next = Some(m);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & m) };
        Some(cur)
    })
}

/// Inner continuity at every `p` in `scope`: each compact `C ⊆ F(p)` stays
/// inside `F(q)` for all `q` in some open `U ∋ p`.
pub fn inner_continuous(opens: &[u64], n: usize, k: &[u64], future: bool, scope: u64) -> bool {
    let f = interior_images(opens, k, future);
    (0..n).filter(|&p| has(scope, p)).all(|p| {
        subsets(f[p]).all(|c| {
            opens
                .iter()
                .filter(|&&u| has(u, p))
                .any(|&u| bits(u).all(|q| c & !f[q] == 0))
        })
    })
}

/// Outer continuity at every `p` in `scope`: each compact `C` disjoint from
/// `cl F(p)` stays disjoint from `cl F(q)` for all `q` in some open `U ∋ p`.
pub fn outer_continuous(opens: &[u64], n: usize, k: &[u64], future: bool, scope: u64) -> bool {
    let f = interior_images(opens, k, future);
    let cl: Vec<u64> = f.iter().map(|&s| closure(opens, n, s)).collect();
    (0..n).filter(|&p| has(scope, p)).all(|p| {
        subsets(full_mask(n) & !cl[p]).all(|c| {
            opens
                .iter()
                .filter(|&&u| has(u, p))
                .any(|&u| bits(u).all(|q| c & cl[q] == 0))
        })
    })
}

pub fn k_convex(k: &[u64], u: u64) -> bool {
    bits(u).all(|a| bits(k[a]).all(|x| has(u, x) || k[x] & u == 0))
}

/// Every open `V ∋ p` contains an open K-convex `U ∋ p`.
pub fn strongly_k_causal(opens: &[u64], n: usize, k: &[u64], scope: u64) -> bool {
    (0..n).filter(|&p| has(scope, p)).all(|p| {
        opens.iter().filter(|&&v| has(v, p)).all(|&v| {
            opens
                .iter()
                .any(|&u| has(u, p) && u & !v == 0 && k_convex(k, u))
        })
    })
}

/// `y ⊑ ⋁S ⇒ ∃ s ∈ S, x ⊑ s` over every directed `S` with a supremum.
pub fn way_below_by_definition(order: &[u64], x: usize, y: usize) -> bool {
    let n = order.len();
    let leq = |a: usize, b: usize| has(order[a], b);
    (1..=full_mask(n)).all(|s| {
        let directed = bits(s).all(|a| bits(s).all(|b| bits(s).any(|c| leq(a, c) && leq(b, c))));
        let uppers: Vec<usize> = (0..n).filter(|&u| bits(s).all(|a| leq(a, u))).collect();
        let sup = uppers.iter().copied().find(|&u| uppers.iter().all(|&v| leq(u, v)));
        match (directed, sup) {
            (true, Some(sup)) if leq(y, sup) => bits(s).any(|a| leq(x, a)),
            _ => true,
        }
    })
}

pub fn is_upper_set(order: &[u64], u: u64) -> bool {
    bits(u).all(|a| order[a] & !u == 0)
}
