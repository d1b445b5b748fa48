//! Instance generators for exhaustive and seeded randomized checks.

use std::collections::HashSet;
use std::sync::Arc;

use rand::Rng;

use crate::frames::FiniteFrame;
use crate::nearness::{NearnessInstance, ThetaClosure};
use crate::poset::{bit, bits, full_mask, Mask, Poset};
use crate::spaces::{FiniteSpace, Role};

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("e{i}")).collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    fn rec(k: usize, perm: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == perm.len() {
            out.push(perm.clone());
            return;
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            rec(k + 1, perm, out);
            perm.swap(k, i);
        }
    }
    rec(0, &mut perm, &mut out);
    out
}

/// One poset per isomorphism class on `n` elements, n ≤ 6.
///
/// Every poset has a linear extension, so strict relations i < j with i < j
/// as indices cover all classes; classes are deduplicated by the least
/// encoding over all relabellings.
pub fn posets_up_to_iso(n: usize) -> Vec<Arc<Poset>> {
    assert!(n <= 6, "poset enumeration is limited to 6 elements");
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let perms = permutations(n);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for sel in 0u64..1 << pairs.len() {
        let rel: Vec<(usize, usize)> = bits(sel).map(|k| pairs[k]).collect();
        let has = |a: usize, b: usize| rel.contains(&(a, b));
        let transitive = rel
            .iter()
            .all(|&(a, b)| (0..n).all(|c| !has(b, c) || has(a, c)));
        if !transitive {
            continue;
        }
        let canon = perms
            .iter()
            .map(|pi| rel.iter().fold(0u64, |acc, &(a, b)| acc | 1 << (pi[a] * n + pi[b])))
            .min()
            .unwrap_or(0);
        if seen.insert(canon) {
            out.push(Arc::new(Poset::from_indices(names(n), &rel).expect("strict upper-triangular order")));
        }
    }
    out
}

/// Distributive lattices on `n` elements up to isomorphism, n ≤ 6.
pub fn distributive_lattices(n: usize) -> Vec<FiniteFrame> {
    posets_up_to_iso(n)
        .into_iter()
        .filter_map(|p| FiniteFrame::new(p).ok())
        .collect()
}

/// Every Θ ⊆ P(P) as a literal list, in ascending family order; |P| ≤ 4.
pub fn all_thetas(p: &Arc<Poset>) -> impl Iterator<Item = NearnessInstance> + '_ {
    let n = p.len();
    assert!(n <= 4, "all families exceed 2^16 beyond 4 elements");
    let subsets = 1usize << n;
    (0u64..1u64 << subsets).map(move |fam| {
        let masks: Vec<Mask> = bits(fam).map(|c| c as Mask).collect();
        NearnessInstance::from_masks(p.clone(), masks, ThetaClosure::Listed)
    })
}

/// Random literal Θ: up to `max_members` uniformly drawn subsets.
pub fn random_theta<R: Rng>(p: &Arc<Poset>, max_members: usize, rng: &mut R) -> NearnessInstance {
    let full = p.full_mask();
    let k = rng.gen_range(0..=max_members);
    let masks: Vec<Mask> = (0..k).map(|_| rng.gen_range(0..=full)).collect();
    NearnessInstance::from_masks(p.clone(), masks, ThetaClosure::Listed)
}

/// (D(P), ⊆) as a poset on the down-set masks, ascending.
fn downset_lattice(p: &Poset) -> (Vec<Mask>, Poset) {
    let ds = p.downset_masks();
    let mut pairs = Vec::new();
    for (i, &a) in ds.iter().enumerate() {
        for (j, &b) in ds.iter().enumerate() {
            if i != j && a & !b == 0 {
                pairs.push((i, j));
            }
        }
    }
    let q = Poset::from_indices(names(ds.len()), &pairs).expect("inclusion is a partial order");
    (ds, q)
}

/// One Θ per class of equal Θ^≤: the antichains of down-sets.
///
/// S ∈ Θ^≤ depends only on S^≥, so Θ^≤ is fixed by an up-set of D(P) and
/// its ⊆-minimal down-sets generate it.
pub fn le_closure_classes(p: &Arc<Poset>) -> Vec<NearnessInstance> {
    let (ds, q) = downset_lattice(p);
    q.upset_masks()
        .into_iter()
        .map(|u| {
            let gens: Vec<Mask> = bits(u)
                .filter(|&i| bits(u).all(|j| j == i || ds[j] & !ds[i] != 0))
                .map(|i| ds[i])
                .collect();
            NearnessInstance::from_masks(p.clone(), gens, ThetaClosure::Listed)
        })
        .collect()
}

/// Every Θ with Θ = Θ^≤, listed literally.
pub fn upset_thetas(p: &Arc<Poset>) -> Vec<NearnessInstance> {
    le_closure_classes(p)
        .into_iter()
        .map(|g| {
            let all: Vec<Mask> = (0..=p.full_mask()).filter(|&s| g.in_theta_le_mask(s)).collect();
            NearnessInstance::from_masks(p.clone(), all, ThetaClosure::Listed)
        })
        .collect()
}

/// Random Θ = Θ^≤ from a few random generators.
pub fn random_upset_theta<R: Rng>(p: &Arc<Poset>, rng: &mut R) -> NearnessInstance {
    let g = random_theta(p, 4, rng);
    let all: Vec<Mask> = (0..=p.full_mask()).filter(|&s| g.in_theta_le_mask(s)).collect();
    NearnessInstance::from_masks(p.clone(), all, ThetaClosure::Listed)
}

/// Every set family on `n_points` points that is T1, as masks ascending; n ≤ 3.
pub fn t1_families(n_points: usize) -> Vec<Vec<Mask>> {
    assert!(n_points <= 3, "family enumeration is limited to 3 points");
    let subsets = 1usize << n_points;
    (0u64..1u64 << subsets)
        .map(|fam| bits(fam).map(|c| c as Mask).collect::<Vec<_>>())
        .filter(|sets| is_t1(n_points, sets))
        .collect()
}

/// Literal T1 test on a mask family.
pub fn is_t1(n_points: usize, sets: &[Mask]) -> bool {
    (0..n_points).all(|x| {
        (0..n_points).all(|y| x == y || sets.iter().any(|&o| o & bit(x) != 0 && o & bit(y) == 0))
    })
}

/// A random T1 family of distinct sets on `n_points` points.
pub fn random_t1_family<R: Rng>(n_points: usize, rng: &mut R) -> Vec<Mask> {
    let full = full_mask(n_points);
    loop {
        let k = rng.gen_range(1..=2 * n_points.max(1));
        let mut sets: Vec<Mask> = (0..k).map(|_| rng.gen_range(0..=full)).collect();
        sets.sort_unstable();
        sets.dedup();
        if is_t1(n_points, &sets) {
            return sets;
        }
    }
}

pub fn space(n_points: usize, sets: &[Mask], role: Role) -> FiniteSpace {
    FiniteSpace::from_masks(n_points, sets, role).expect("generated families are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poset_counts() {
        let counts: Vec<usize> = (0..=5).map(|n| posets_up_to_iso(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 16, 63]);
    }

    #[test]
    fn lattice_counts() {
        let counts: Vec<usize> = (1..=6).map(|n| distributive_lattices(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 3, 5]);
    }

    #[test]
    fn closure_classes() {
        // Θ^≤ classes over the antichain on two elements: antichains of B2
        let p = Arc::new(Poset::antichain(&["a", "b"]).unwrap());
        assert_eq!(le_closure_classes(&p).len(), 6);
        let ups = upset_thetas(&p);
        assert!(ups.iter().all(|t| t.is_upset_family().unwrap()));
    }

    #[test]
    fn t1_enumeration() {
        assert_eq!(t1_families(1).len(), 4);
        assert!(t1_families(3).iter().all(|f| space(3, f, Role::Subbasis).is_t1_family()));
    }
}
