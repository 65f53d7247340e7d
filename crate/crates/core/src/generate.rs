//! Seeded random generation of spaces, maps, systems and valuations.
//!
//! Every generator takes an explicit RNG; [`rng`] builds the crate's
//! reproducible ChaCha stream from a `u64` seed.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::order::{FiniteSpace, MonotoneMap};
use crate::pointset::PointSet;
use crate::projective::{DirectedIndex, ProjectiveSystem};
use crate::valuation::Valuation;
use crate::value::ExtNonneg;

pub type GenRng = ChaCha8Rng;

pub fn rng(seed: u64) -> GenRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|k| format!("{prefix}{k}")).collect()
}

/// A random poset on `n` points: each pair of a random linear order is
/// related with probability `density`, then closed transitively.
pub fn random_poset(rng: &mut impl Rng, n: usize, density: f64) -> FiniteSpace {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(density) {
                edges.push((perm[a], perm[b]));
            }
        }
    }
    FiniteSpace::from_covers(labels("x", n), &edges).expect("edges along a linear order close to a poset")
}

/// A random poset with between `min` and `max` points (inclusive).
pub fn random_poset_sized(rng: &mut impl Rng, min: usize, max: usize) -> FiniteSpace {
    let n = rng.random_range(min..=max);
    let density = rng.random_range(0.15..0.6);
    random_poset(rng, n, density)
}

/// A random non-negative rational with small numerator and denominator.
pub fn random_value(rng: &mut impl Rng, zero_prob: f64) -> ExtNonneg {
    if rng.random_bool(zero_prob) {
        ExtNonneg::zero()
    } else {
        ExtNonneg::ratio(rng.random_range(1..=12), rng.random_range(1..=6))
    }
}

/// Random finite weights; about `zero_prob` of them zero.
pub fn random_valuation(rng: &mut impl Rng, space: &Arc<FiniteSpace>, zero_prob: f64) -> Valuation {
    let weights = (0..space.len()).map(|_| random_value(rng, zero_prob)).collect();
    Valuation::new(space.clone(), weights).expect("one weight per point")
}

/// Like [`random_valuation`] but each weight is `∞` with probability `inf_prob`.
pub fn random_extended_valuation(
    rng: &mut impl Rng,
    space: &Arc<FiniteSpace>,
    zero_prob: f64,
    inf_prob: f64,
) -> Valuation {
    let weights = (0..space.len())
        .map(|_| {
            if rng.random_bool(inf_prob) {
                ExtNonneg::Infinite
            } else {
                random_value(rng, zero_prob)
            }
        })
        .collect();
    Valuation::new(space.clone(), weights).expect("one weight per point")
}

/// A uniformly shuffled search for a monotone map, assigning points in a
/// linear extension of the source. A constant map always exists when the
/// target is nonempty, so this only fails for an empty target.
pub fn random_monotone_map(
    rng: &mut impl Rng,
    source: &Arc<FiniteSpace>,
    target: &Arc<FiniteSpace>,
) -> Option<MonotoneMap> {
    if target.is_empty() && !source.is_empty() {
        return None;
    }
    let order = source.linear_extension();
    let mut graph = vec![usize::MAX; source.len()];

    fn assign(
        rng: &mut impl Rng,
        source: &FiniteSpace,
        target: &FiniteSpace,
        order: &[usize],
        pos: usize,
        graph: &mut Vec<usize>,
    ) -> bool {
        let Some(&x) = order.get(pos) else { return true };
        // everything below x is already assigned
        let mut allowed = target.full_set();
        for z in source.down_of(x).iter().filter(|&z| z != x) {
            allowed = allowed.intersection(target.up_of(graph[z]));
        }
        let mut candidates = allowed.to_vec();
        candidates.shuffle(rng);
        for y in candidates {
            graph[x] = y;
            if assign(rng, source, target, order, pos + 1, graph) {
                return true;
            }
        }
        graph[x] = usize::MAX;
        false
    }

    assign(rng, source, target, &order, 0, &mut graph)
        .then(|| MonotoneMap::new(source.clone(), target.clone(), graph).expect("assignment respects the order"))
}

/// Adds up to `extra` points to `x`, each new point `y` placed strictly
/// above some `x₀` (with `↓y = ↓x₀ ∪ {y}`) and below a random up-set of
/// points strictly above `x₀`. The map sending `y` to `x₀` and fixing old
/// points is a projection whose embedding is the inclusion.
pub fn random_ep_extension(rng: &mut impl Rng, x: &Arc<FiniteSpace>, extra: usize) -> (Arc<FiniteSpace>, MonotoneMap) {
    let base = x.len();
    let mut names: Vec<String> = x.labels().to_vec();
    let mut le: Vec<Vec<bool>> = (0..base).map(|a| (0..base).map(|b| x.le(a, b)).collect()).collect();
    let mut proj: Vec<usize> = (0..base).collect();
    if base > 0 {
        for _ in 0..extra {
            let m = names.len();
            let x0 = rng.random_range(0..m);
            let strictly_above: Vec<usize> = (0..m).filter(|&z| z != x0 && le[x0][z]).collect();
            let mut seeds: Vec<usize> = strictly_above.iter().copied().filter(|_| rng.random_bool(0.4)).collect();
            // close upward inside the points above x0
            let mut k = 0;
            while k < seeds.len() {
                let s = seeds[k];
                for &z in &strictly_above {
                    if le[s][z] && !seeds.contains(&z) {
                        seeds.push(z);
                    }
                }
                k += 1;
            }
            for row in le.iter_mut() {
                row.push(false);
            }
            let mut row = vec![false; m + 1];
            row[m] = true;
            for &s in &seeds {
                row[s] = true;
            }
            le.push(row);
            for d in 0..m {
                if le[d][x0] {
                    le[d][m] = true;
                    for &s in &seeds {
                        le[d][s] = true;
                    }
                }
            }
            let mut name = format!("{}'", names[x0]);
            while names.contains(&name) {
                name.push('\'');
            }
            names.push(name);
            proj.push(proj[x0]);
        }
    }
    let y = Arc::new(FiniteSpace::from_le_fn(names, |a, b| le[a][b]));
    let p = MonotoneMap::new(y.clone(), x.clone(), proj).expect("projection is monotone by construction");
    (y, p)
}

/// An explicit-prefix ω-chain of `levels` levels whose bonds are ep
/// projections, spaces at most `max_size` points.
pub fn random_ep_chain(rng: &mut impl Rng, levels: usize, max_size: usize) -> ProjectiveSystem {
    let first = rng.random_range(1..=3.min(max_size));
    let mut spaces = vec![Arc::new(random_poset(rng, first, 0.4))];
    let mut bonds = Vec::new();
    for _ in 1..levels {
        let prev = spaces.last().expect("at least one level").clone();
        let room = max_size.saturating_sub(prev.len());
        let extra = rng.random_range(0..=room.min(2));
        let (next, p) = random_ep_extension(rng, &prev, extra);
        spaces.push(next);
        bonds.push(p);
    }
    ProjectiveSystem::chain(spaces, bonds).expect("generated bonds compose")
}

/// An explicit-prefix chain of nonempty random posets joined by random
/// monotone maps (not necessarily surjective).
pub fn random_chain(rng: &mut impl Rng, levels: usize, max_size: usize) -> ProjectiveSystem {
    let spaces: Vec<Arc<FiniteSpace>> = (0..levels)
        .map(|_| Arc::new(random_poset_sized(rng, 1, max_size)))
        .collect();
    let bonds = (0..levels.saturating_sub(1))
        .map(|n| random_monotone_map(rng, &spaces[n + 1], &spaces[n]).expect("targets are nonempty"))
        .collect();
    ProjectiveSystem::chain(spaces, bonds).expect("generated bonds compose")
}

/// A random directed poset of `k` indices: a random poset on `k - 1` points
/// plus a top.
pub fn random_directed_index(rng: &mut impl Rng, k: usize) -> DirectedIndex {
    assert!(k >= 1);
    let below = random_poset(rng, k - 1, 0.4);
    let mut names = labels("i", k);
    names[k - 1] = "top".into();
    let poset = FiniteSpace::from_le_fn(names, |a, b| b == k - 1 || (a < k - 1 && below.le(a, b)));
    DirectedIndex::new(Arc::new(poset)).expect("a poset with a top is directed")
}

/// A finite system over a random directed index of `k` indices.
///
/// Points of every level are tuples over a few small coordinate posets.
/// Each coordinate is introduced at some index and visible at every index
/// above it; level `i` is the set of projections of a point set `W_i`, with
/// `W_i ⊇ W_j` for `i ⊑ j`, so low levels may carry points outside the
/// eventual image.
pub fn random_finite_system(rng: &mut impl Rng, k: usize, coords: usize, base_points: usize) -> ProjectiveSystem {
    let index = random_directed_index(rng, k);
    let factors: Vec<Arc<FiniteSpace>> = (0..coords)
        .map(|_| Arc::new(random_poset_sized(rng, 2, 3)))
        .collect();
    let intro: Vec<usize> = (0..coords).map(|_| rng.random_range(0..k)).collect();
    let visible: Vec<Vec<usize>> = (0..k)
        .map(|i| (0..coords).filter(|&c| index.le(intro[c], i)).collect())
        .collect();
    let random_tuple = |rng: &mut dyn rand::RngCore| -> Vec<usize> {
        factors.iter().map(|f| rng.random_range(0..f.len())).collect()
    };
    let top = index.top();
    let mut w: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); k];
    for _ in 0..base_points.max(1) {
        w[top].insert(random_tuple(rng));
    }
    // fill downward along a reversed linear extension
    let mut order = index.poset().linear_extension();
    order.reverse();
    for &i in &order {
        let mut wi: BTreeSet<Vec<usize>> = index.above(i).filter(|&j| j != i).flat_map(|j| w[j].clone()).collect();
        wi.extend(w[i].iter().cloned());
        if i != top && rng.random_bool(0.5) {
            wi.insert(random_tuple(rng));
        }
        w[i] = wi;
    }
    let points: Vec<Vec<Vec<usize>>> = (0..k)
        .map(|i| {
            let set: BTreeSet<Vec<usize>> = w[i].iter().map(|t| visible[i].iter().map(|&c| t[c]).collect()).collect();
            set.into_iter().collect()
        })
        .collect();
    let spaces: Vec<Arc<FiniteSpace>> = (0..k)
        .map(|i| {
            let names = points[i]
                .iter()
                .map(|t| {
                    let parts: Vec<&str> = t.iter().zip(&visible[i]).map(|(&v, &c)| factors[c].label(v)).collect();
                    format!("({})", parts.join(","))
                })
                .collect();
            let pts = &points[i];
            let vis = &visible[i];
            Arc::new(FiniteSpace::from_le_fn(names, |a, b| {
                vis.iter().enumerate().all(|(pos, &c)| factors[c].le(pts[a][pos], pts[b][pos]))
            }))
        })
        .collect();
    let mut bonds = Vec::new();
    for i in 0..k {
        for j in index.above(i).filter(|&j| j != i) {
            let keep: Vec<usize> = visible[i]
                .iter()
                .map(|c| visible[j].iter().position(|d| d == c).expect("coordinates persist upward"))
                .collect();
            let graph = points[j]
                .iter()
                .map(|t| {
                    let image: Vec<usize> = keep.iter().map(|&pos| t[pos]).collect();
                    points[i].binary_search(&image).expect("W_j projects into W_i")
                })
                .collect();
            bonds.push((i, j, MonotoneMap::new(spaces[j].clone(), spaces[i].clone(), graph).expect("coordinate projections are monotone")));
        }
    }
    ProjectiveSystem::new(index, spaces, bonds).expect("coordinate projections compose")
}

/// All posets on `n` points up to isomorphism, in a fixed order.
pub fn all_posets(n: usize) -> Vec<FiniteSpace> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))).collect();
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..1 << pairs.len() {
        let le = |a: usize, b: usize| a == b || pairs.iter().position(|&p| p == (a, b)).is_some_and(|k| mask >> k & 1 == 1);
        let antisymmetric = pairs.iter().all(|&(a, b)| !(le(a, b) && le(b, a)));
        let transitive = (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| !(le(a, b) && le(b, c)) || le(a, c))));
        if !antisymmetric || !transitive {
            continue;
        }
        let canonical = perms
            .iter()
            .map(|p| {
                pairs
                    .iter()
                    .enumerate()
                    .filter(|&(_, &(a, b))| le(p[a], p[b]))
                    .fold(0u64, |acc, (k, _)| acc | 1 << k)
            })
            .min()
            .unwrap_or(0);
        if seen.insert(canonical) {
            out.push(FiniteSpace::from_le_fn(labels("p", n), le));
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// A random subset of the points of `space`.
pub fn random_subset(rng: &mut impl Rng, space: &FiniteSpace, prob: f64) -> PointSet {
    PointSet::from_indices(space.len(), (0..space.len()).filter(|_| rng.random_bool(prob)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::{materialize_limit, EpSystem};
    use crate::order::DEFAULT_MAX_POINTS;

    #[test]
    fn unlabeled_poset_counts() {
        let counts: Vec<usize> = (0..=4).map(|n| all_posets(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 16]);
    }

    #[test]
    fn monotone_maps_are_monotone() {
        let mut r = rng(7);
        for _ in 0..50 {
            let a = Arc::new(random_poset_sized(&mut r, 0, 6));
            let b = Arc::new(random_poset_sized(&mut r, 1, 6));
            assert!(random_monotone_map(&mut r, &a, &b).is_some());
        }
    }

    #[test]
    fn ep_chains_reconstruct() {
        let mut r = rng(11);
        for _ in 0..30 {
            let sys = Arc::new(random_ep_chain(&mut r, 5, 6));
            assert!(sys.spaces().iter().all(|s| s.len() <= 6));
            let ep = EpSystem::reconstruct(sys.clone()).unwrap();
            for n in 0..sys.len() {
                for m in n..sys.len() {
                    // the embedding of a generated bond is the inclusion of old points
                    assert!(ep.embedding(n, m).graph().iter().enumerate().all(|(x, &y)| x == y));
                }
            }
        }
    }

    #[test]
    fn finite_systems_are_valid() {
        let mut r = rng(3);
        for k in 1..=4 {
            for _ in 0..10 {
                let sys = Arc::new(random_finite_system(&mut r, k, 3, 4));
                let lim = materialize_limit(&sys, DEFAULT_MAX_POINTS).unwrap();
                assert_eq!(lim.len(), sys.space(sys.top()).len());
            }
        }
    }

    #[test]
    fn seeds_reproduce() {
        let a = random_poset_sized(&mut rng(5), 3, 8);
        let b = random_poset_sized(&mut rng(5), 3, 8);
        assert_eq!(a, b);
    }
}
