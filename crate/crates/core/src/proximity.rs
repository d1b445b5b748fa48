//! Near subsets, restrictions Θ|S, stars, the relations ⊲ and ⊴, and regularisation.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{NearnessError, Result};
use crate::nearness::{NearnessInstance, ThetaClosure};
use crate::poset::{bit, bits, ElementSet, Mask, Poset};

/// Outcome of a nearness query: the first witness D found, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NearWitness {
    pub subject: ElementSet,
    pub witness: Option<ElementSet>,
}

impl NearWitness {
    pub fn is_near(&self) -> bool {
        self.witness.is_some()
    }
}

/// ⊆-minimal hitting sets of `edges`, ascending. Empty when some edge is empty.
pub fn minimal_transversals(edges: &[Mask]) -> Vec<Mask> {
    let mut tr = vec![0];
    for &e in edges {
        if e == 0 {
            return Vec::new();
        }
        let mut next = Vec::with_capacity(tr.len());
        for &t in &tr {
            if t & e != 0 {
                next.push(t);
            } else {
                next.extend(bits(e).map(|i| t | bit(i)));
            }
        }
        tr = minimal_sets(next);
    }
    tr
}

/// The ⊆-minimal members, sorted and deduplicated.
pub fn minimal_sets(mut v: Vec<Mask>) -> Vec<Mask> {
    v.sort_unstable_by_key(|m| (m.count_ones(), *m));
    v.dedup();
    let mut out: Vec<Mask> = Vec::with_capacity(v.len());
    for m in v {
        if !out.iter().any(|&o| o & !m == 0) {
            out.push(m);
        }
    }
    out.sort_unstable();
    out
}

/// The family Θ|S, materialized as a membership table over P(P).
#[derive(Debug, Clone)]
pub struct Restriction {
    poset: Arc<Poset>,
    subject: Mask,
    f_generators: Vec<Mask>,
    transversals: Vec<Mask>,
    members: Vec<bool>,
}

impl Restriction {
    pub fn subject(&self) -> ElementSet {
        self.poset.set_unchecked(self.subject)
    }

    /// ⊆-minimal generators of F^S.
    pub fn f_generators(&self) -> &[Mask] {
        &self.f_generators
    }

    /// ⊆-minimal F^S-Cauchy sets.
    pub fn cauchy_transversals(&self) -> &[Mask] {
        &self.transversals
    }

    pub fn contains_mask(&self, c: Mask) -> bool {
        self.members[c as usize]
    }

    pub fn contains(&self, c: &ElementSet) -> Result<bool> {
        Ok(self.contains_mask(self.poset.check(c)?))
    }

    /// All members in ascending order.
    pub fn member_masks(&self) -> Vec<Mask> {
        (0..self.members.len() as u64).filter(|&c| self.members[c as usize]).collect()
    }

    /// ⊆-minimal members; enough to generate Θ|S up to refinement.
    pub fn minimal_member_masks(&self) -> Vec<Mask> {
        minimal_sets(self.member_masks())
    }

    pub fn is_empty_family(&self) -> bool {
        !self.members.iter().any(|&b| b)
    }

    pub fn is_full_family(&self) -> bool {
        self.members.iter().all(|&b| b)
    }
}

/// Which ⊲ the priming map uses at each regularisation step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Priming {
    /// ⊲ recomputed from the family being primed.
    #[default]
    StageLocal,
    /// ⊲ of the original family throughout.
    Original,
}

/// The tables ⊲ and ⊴.
#[derive(Debug, Clone)]
pub struct BelowRelation {
    poset: Arc<Poset>,
    // row p holds {q : p ⊲ q}
    ublow: Vec<Mask>,
    // row q holds {r : r ⊲ q}
    col: Vec<Mask>,
    // row p holds {q : p ⊴ q}
    lower: Vec<Mask>,
}

impl BelowRelation {
    fn from_rows(poset: Arc<Poset>, ublow: Vec<Mask>) -> Self {
        let n = poset.len();
        let mut col = vec![0; n];
        for (p, &row) in ublow.iter().enumerate() {
            for q in bits(row) {
                col[q] |= bit(p);
            }
        }
        let lower = (0..n)
            .map(|p| {
                (0..n)
                    .filter(|&q| col[p] & !col[q] == 0)
                    .fold(0, |acc, q| acc | bit(q))
            })
            .collect();
        BelowRelation {
            poset,
            ublow,
            col,
            lower,
        }
    }

    pub fn len(&self) -> usize {
        self.ublow.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ublow.is_empty()
    }

    pub fn below(&self, p: usize, q: usize) -> bool {
        self.ublow[p] & bit(q) != 0
    }

    pub fn lower(&self, p: usize, q: usize) -> bool {
        self.lower[p] & bit(q) != 0
    }

    /// {q : p ⊲ q}
    pub fn above_mask(&self, p: usize) -> Mask {
        self.ublow[p]
    }

    /// p^▷ = {r : r ⊲ p}
    pub fn below_mask(&self, p: usize) -> Mask {
        self.col[p]
    }

    pub fn below_set(&self, p: usize) -> ElementSet {
        self.poset.set_unchecked(self.col[p])
    }

    pub fn lower_row(&self, p: usize) -> Mask {
        self.lower[p]
    }

    /// Number of pairs with p ⊲ q.
    pub fn count(&self) -> usize {
        self.ublow.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|p| bits(self.ublow[p]).map(move |q| (p, q)))
            .collect()
    }

    /// C^▷ = {r : ∃c∈C, r ⊲ c}
    pub fn prime_mask(&self, c: Mask) -> Mask {
        bits(c).fold(0, |acc, x| acc | self.col[x])
    }

    /// R refines S along ⊲: every r ∈ R has some s ∈ S with r ⊲ s.
    pub fn refines_mask(&self, r: Mask, s: Mask) -> bool {
        bits(r).all(|x| self.ublow[x] & s != 0)
    }

    pub fn is_subset_of_order(&self) -> bool {
        (0..self.len()).all(|p| self.ublow[p] & !self.poset.up_mask(p) == 0)
    }

    pub fn is_transitive(&self) -> bool {
        (0..self.len()).all(|p| bits(self.ublow[p]).all(|q| self.ublow[q] & !self.ublow[p] == 0))
    }

    /// ⊲-regular: every s ∈ S has t ∈ S with t ⊲ s.
    pub fn is_regular_mask(&self, s: Mask) -> bool {
        bits(s).all(|x| self.col[x] & s != 0)
    }

    /// ⊲-filter: ⊲-closed and every finite F ⊆ S (the empty one too) has
    /// some s ∈ S with s ⊲ f for all f ∈ F.
    pub fn is_filter_mask(&self, s: Mask) -> bool {
        if bits(s).any(|x| self.ublow[x] & !s != 0) {
            return false;
        }
        // submask walk over every finite F ⊆ S
        let mut f = s;
        loop {
            let common = bits(f).fold(s, |acc, x| acc & self.col[x]);
            if common == 0 {
                return false;
            }
            if f == 0 {
                return true;
            }
            f = (f - 1) & s;
        }
    }
}

/// Result of iterating the priming map until a family repeats.
#[derive(Debug, Clone)]
pub struct Regularisation {
    pub instance: NearnessInstance,
    /// Θ^1, Θ^2, ... up to the first repeat; later stages in sorted form.
    pub stages: Vec<Vec<Mask>>,
    /// Index of the stage the sequence returns to.
    pub cycle_start: usize,
    pub priming: Priming,
}

impl NearnessInstance {
    fn require_double(&self, what: &'static str) -> Result<()> {
        self.bounds().check_double(what, self.len())
    }

    fn near_table(&self) -> &[bool] {
        self.near_table.get_or_init(|| {
            let n = self.len();
            let mut g = vec![false; 1usize << n];
            for &d in self.downsets() {
                if !self.in_theta_le_mask(d) {
                    let nd = (0..n)
                        .filter(|&s| self.in_theta_le_mask(d | bit(s)))
                        .fold(0, |acc, s| acc | bit(s));
                    g[nd as usize] = true;
                }
            }
            for i in 0..n {
                let b = 1usize << i;
                for t in 0..g.len() {
                    if t & b == 0 && g[t | b] {
                        g[t] = true;
                    }
                }
            }
            g
        })
    }

    /// S is Θ^≤-near. Assumes |P| is within the double-powerset bound.
    pub(crate) fn near_mask(&self, s: Mask) -> bool {
        self.near_table()[s as usize]
    }

    fn witness_ok(&self, d: Mask, s: Mask) -> bool {
        !self.in_theta_le_mask(d) && bits(s).all(|x| self.in_theta_le_mask(d | bit(x)))
    }

    /// First witness over down-sets in ascending order.
    pub fn near_witness_mask(&self, s: Mask) -> Option<Mask> {
        self.downsets().iter().copied().find(|&d| self.witness_ok(d, s))
    }

    /// First witness over all subsets; slow cross-check.
    pub fn near_witness_unrestricted(&self, s: Mask) -> Option<Mask> {
        (0..=self.full()).find(|&d| self.witness_ok(d, s))
    }

    pub fn is_near(&self, s: &ElementSet) -> Result<NearWitness> {
        let m = self.check(s)?;
        self.require_double("near")?;
        Ok(NearWitness {
            subject: *s,
            witness: self.near_witness_mask(m).map(|d| self.set(d)),
        })
    }

    pub fn is_near_bool(&self, s: &ElementSet) -> Result<bool> {
        let m = self.check(s)?;
        self.require_double("near")?;
        Ok(self.near_mask(m))
    }

    pub fn dotted_mask(&self) -> Result<Mask> {
        self.require_double("dotted")?;
        Ok((0..self.len())
            .filter(|&p| self.near_mask(bit(p)))
            .fold(0, |acc, p| acc | bit(p)))
    }

    pub fn dotted(&self) -> Result<ElementSet> {
        Ok(self.set(self.dotted_mask()?))
    }

    /// First p with p^≤ ≠ P whose singleton is not near.
    pub fn weak_admissibility_violation(&self) -> Result<Option<usize>> {
        let dot = self.dotted_mask()?;
        let full = self.full();
        Ok((0..self.len()).find(|&p| self.poset().up_mask(p) != full && dot & bit(p) == 0))
    }

    pub fn is_weakly_admissible(&self) -> Result<bool> {
        Ok(self.weak_admissibility_violation()?.is_none())
    }

    /// S is linked: {p,q} near for all p,q ∈ S.
    pub fn is_linked_mask(&self, s: Mask) -> Result<bool> {
        self.require_double("linked")?;
        Ok(bits(s).all(|p| bits(s).all(|q| self.near_mask(bit(p) | bit(q)))))
    }

    pub fn is_linked(&self, s: &ElementSet) -> Result<bool> {
        self.is_linked_mask(self.check(s)?)
    }

    pub(crate) fn pair_near(&self, c: usize, p: usize) -> bool {
        self.near_mask(bit(c) | bit(p))
    }

    pub fn star_mask(&self, c: Mask, p: usize) -> Result<Mask> {
        self.require_double("star")?;
        if p >= self.len() {
            return Err(NearnessError::IndexOutOfRange(p));
        }
        Ok(bits(c).filter(|&x| self.pair_near(x, p)).fold(0, |acc, x| acc | bit(x)))
    }

    pub fn star(&self, c: &ElementSet, p: usize) -> Result<ElementSet> {
        Ok(self.set(self.star_mask(self.check(c)?, p)?))
    }

    /// Θp: stars of every member of Θ, duplicates removed.
    pub fn theta_star_masks(&self, p: usize) -> Result<Vec<Mask>> {
        let mut out = Vec::new();
        for c in self.member_masks()? {
            let s = self.star_mask(c, p)?;
            if !out.contains(&s) {
                out.push(s);
            }
        }
        Ok(out)
    }

    pub fn theta_star(&self, p: usize) -> Result<Vec<ElementSet>> {
        Ok(self.theta_star_masks(p)?.into_iter().map(|m| self.set(m)).collect())
    }

    /// Minimal generators of F^S = {F : F ∪ S not near}.
    pub fn f_family_mask(&self, s: Mask) -> Result<Vec<Mask>> {
        self.require_double("F^S")?;
        let in_f = |f: Mask| !self.near_mask(f | s);
        Ok((0..=self.full())
            .filter(|&f| in_f(f) && bits(f).all(|x| !in_f(f & !bit(x))))
            .collect())
    }

    pub fn f_family(&self, s: &ElementSet) -> Result<Vec<ElementSet>> {
        Ok(self
            .f_family_mask(self.check(s)?)?
            .into_iter()
            .map(|m| self.set(m))
            .collect())
    }

    pub fn restriction_mask(&self, s: Mask) -> Result<Restriction> {
        let gens = self.f_family_mask(s)?;
        let tr = minimal_transversals(&gens);
        let members = (0..=self.full())
            .map(|c| tr.iter().all(|&d| self.in_theta_le_mask(c | d)))
            .collect();
        Ok(Restriction {
            poset: self.poset_arc().clone(),
            subject: s,
            f_generators: gens,
            transversals: tr,
            members,
        })
    }

    pub fn restriction(&self, s: &ElementSet) -> Result<Restriction> {
        self.restriction_mask(self.check(s)?)
    }

    /// Θ|S membership quantifying over every F^S-Cauchy D ⊆ P.
    pub fn restriction_oracle_mask(&self, s: Mask) -> Result<Vec<bool>> {
        self.require_double("Θ|S oracle")?;
        let full = self.full();
        let fam: Vec<Mask> = (0..=full).filter(|&f| !self.near_mask(f | s)).collect();
        let cauchy: Vec<Mask> = (0..=full)
            .filter(|&d| fam.iter().all(|&f| f & d != 0))
            .collect();
        Ok((0..=full)
            .map(|c| cauchy.iter().all(|&d| self.in_theta_le_mask(c | d)))
            .collect())
    }

    /// Restriction to the instance with family Θ|S (minimal members as generators).
    pub fn restricted_instance(&self, s: Mask) -> Result<NearnessInstance> {
        let r = self.restriction_mask(s)?;
        Ok(self.with_family(r.minimal_member_masks(), ThetaClosure::Listed))
    }

    /// Every member of Θp is refined by a finite member of Θp.
    pub fn is_nearly_finite(&self) -> Result<bool> {
        for p in 0..self.len() {
            let stars = self.theta_star_masks(p)?;
            // every member is finite here, so each one may serve itself
            let finite: Vec<Mask> = stars.clone();
            if !stars
                .iter()
                .all(|&x| finite.iter().any(|&y| self.poset().refines_mask(y, x)))
            {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// First near F with no spectrum point containing it.
    pub fn non_degeneracy_violation(&self) -> Result<Option<Mask>> {
        self.require_double("non-degeneracy")?;
        let spec = self.spectrum()?;
        Ok((0..=self.full()).find(|&f| {
            self.near_mask(f) && !spec.point_masks().iter().any(|&r| r & f == f)
        }))
    }

    pub fn is_non_degenerate(&self) -> Result<bool> {
        Ok(self.non_degeneracy_violation()?.is_none())
    }

    pub fn below_relations(&self) -> Result<BelowRelation> {
        self.require_double("below relations")?;
        let n = self.len();
        let p = self.poset();
        let mut rows = vec![0; n];
        for (x, row) in rows.iter_mut().enumerate() {
            for &c in self.generator_masks() {
                let st = self.star_mask(c, x)?;
                for q in 0..n {
                    if st & !p.down_mask(q) == 0 {
                        *row |= bit(q);
                    }
                }
            }
        }
        Ok(BelowRelation::from_rows(self.poset_arc().clone(), rows))
    }

    /// ∀p ∀C∈Θ ∃D∈Θ with Dp refining C along ⊲.
    pub fn is_star_regular(&self) -> Result<bool> {
        let rel = self.below_relations()?;
        let gens = self.generator_masks();
        for p in 0..self.len() {
            let stars: Vec<Mask> = gens
                .iter()
                .map(|&d| self.star_mask(d, p))
                .collect::<Result<_>>()?;
            for &c in gens {
                if !stars.iter().any(|&dp| rel.refines_mask(dp, c)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Θ^R under the chosen priming reading.
    pub fn regularise(&self, priming: Priming) -> Result<Regularisation> {
        self.require_double("regularisation")?;
        let original = self.below_relations()?;
        let first = self.member_masks()?;
        let mut stages: Vec<Vec<Mask>> = vec![first.clone()];
        let mut seen: HashMap<Vec<Mask>, usize> = HashMap::new();
        seen.insert(canonical(&first), 0);
        let mut current = self.with_family(first, ThetaClosure::Listed);
        let cycle_start;
        loop {
            if stages.len() > 1 << 16 {
                return Err(NearnessError::BoundExceeded {
                    what: "regularisation steps",
                    size: stages.len(),
                    bound: 1 << 16,
                });
            }
            let rel = match priming {
                Priming::StageLocal => current.below_relations()?,
                Priming::Original => original.clone(),
            };
            let next = canonical(
                &current
                    .generator_masks()
                    .iter()
                    .map(|&c| rel.prime_mask(c))
                    .collect::<Vec<_>>(),
            );
            if let Some(&i) = seen.get(&next) {
                cycle_start = i;
                break;
            }
            seen.insert(next.clone(), stages.len());
            stages.push(next.clone());
            current = self.with_family(next, ThetaClosure::Listed);
        }
        let mut union: Vec<Mask> = Vec::new();
        for st in &stages {
            for &c in st {
                if !union.contains(&c) {
                    union.push(c);
                }
            }
        }
        Ok(Regularisation {
            instance: self.with_family(union, ThetaClosure::Listed),
            stages,
            cycle_start,
            priming,
        })
    }

    /// Θ-Cauchy ⊲-filters inside dotted P, ascending.
    pub fn cauchy_below_filters(&self, rel: &BelowRelation) -> Result<Vec<Mask>> {
        let dot = self.dotted_mask()?;
        let mut out = Vec::new();
        let mut r = dot;
        loop {
            if self.is_cauchy_mask(r) && rel.is_filter_mask(r) {
                out.push(r);
            }
            if r == 0 {
                break;
            }
            r = (r - 1) & dot;
        }
        out.sort_unstable();
        Ok(out)
    }
}

fn canonical(f: &[Mask]) -> Vec<Mask> {
    let mut v = f.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nearness::NearnessInstance;

    fn inst(p: Poset, theta: &[&[&str]]) -> NearnessInstance {
        let p = Arc::new(p);
        let sets: Vec<ElementSet> = theta.iter().map(|c| p.set_from_names(c).unwrap()).collect();
        NearnessInstance::new(p, &sets).unwrap()
    }

    fn i1() -> NearnessInstance {
        inst(Poset::antichain(&["a", "b"]).unwrap(), &[&["a", "b"]])
    }

    fn i2() -> NearnessInstance {
        inst(Poset::chain(&["0", "1"]).unwrap(), &[&["1"]])
    }

    fn i3() -> NearnessInstance {
        inst(
            Poset::new(&["a", "b", "1"], &[("a", "1"), ("b", "1")]).unwrap(),
            &[&["a", "b"]],
        )
    }

    #[test]
    fn near_examples() {
        let n = i1();
        let w = n.is_near(&n.poset().set_from_names(&["a"]).unwrap()).unwrap();
        assert_eq!(w.witness.map(|d| d.bits()), Some(0b10));
        assert!(!n.is_near(&n.poset().full_set()).unwrap().is_near());
        let n = i2();
        assert_eq!(n.is_near(&n.poset().empty_set()).unwrap().witness.map(|d| d.bits()), Some(0));
        let n = i3();
        let w = n.is_near(&n.poset().set_from_names(&["a", "1"]).unwrap()).unwrap();
        assert_eq!(w.witness.map(|d| d.bits()), Some(0b010));
    }

    #[test]
    fn dotted_examples() {
        let n = i2();
        assert_eq!(n.dotted_mask().unwrap(), 0b10);
        assert!(n.is_weakly_admissible().unwrap());
        let n = i1();
        assert_eq!(n.dotted_mask().unwrap(), 0b11);
        assert!(n.is_weakly_admissible().unwrap());
        let e = inst(Poset::antichain(&["a", "b"]).unwrap(), &[]);
        assert!(!e.is_weakly_admissible().unwrap());
    }

    #[test]
    fn star_examples() {
        let n = i3();
        assert_eq!(n.star_mask(0b011, 0).unwrap(), 0b001);
        assert_eq!(i1().star_mask(0b11, 0).unwrap(), 0b01);
        let z = inst(Poset::antichain(&["a", "b"]).unwrap(), &[&[], &["a"]]);
        for c in 0..4 {
            for p in 0..2 {
                assert_eq!(z.star_mask(c, p).unwrap(), 0);
            }
        }
    }

    #[test]
    fn restriction_examples() {
        let n = i2();
        let r = n.restriction_mask(0b10).unwrap();
        assert_eq!(r.f_generators(), &[0b01]);
        assert_eq!(r.member_masks(), vec![0b10, 0b11]);
        assert!(n.restriction_mask(0b01).unwrap().is_full_family());
        let e = inst(Poset::antichain(&["a", "b"]).unwrap(), &[]);
        assert!(e.restriction_mask(0).unwrap().is_empty_family());
        assert!(e.restriction_mask(0b01).unwrap().is_full_family());
        assert!(e.restriction_mask(0b10).unwrap().is_full_family());
    }

    #[test]
    fn restriction_matches_oracle() {
        for n in [i1(), i2(), i3()] {
            for s in 0..=n.full() {
                let r = n.restriction_mask(s).unwrap();
                let o = n.restriction_oracle_mask(s).unwrap();
                assert!((0..=n.full()).all(|c| r.contains_mask(c) == o[c as usize]));
            }
        }
    }

    #[test]
    fn transversals() {
        assert_eq!(minimal_transversals(&[]), vec![0]);
        assert_eq!(minimal_transversals(&[0b011, 0b110]), vec![0b010, 0b101]);
        assert!(minimal_transversals(&[0b1, 0]).is_empty());
    }

    #[test]
    fn finiteness_and_degeneracy() {
        assert!(i1().is_nearly_finite().unwrap());
        assert!(i1().is_non_degenerate().unwrap());
    }

    #[test]
    fn below_examples() {
        let r = i1().below_relations().unwrap();
        assert_eq!(r.pairs(), vec![(0, 0), (1, 1)]);
        let r = i3().below_relations().unwrap();
        assert!(r.below(0, 0) && r.below(0, 2) && r.below(1, 1) && r.below(1, 2));
        assert!(!r.below(0, 1) && !r.below(1, 0));
        // the maximum is uniformly below itself since every star refines {1}
        assert!(r.below(2, 2));
        assert_eq!(r.count(), 5);
        let r = i2().below_relations().unwrap();
        assert_eq!(r.pairs(), vec![(0, 0), (0, 1), (1, 1)]);
    }

    #[test]
    fn linked_and_star_regular() {
        let n = i1();
        assert!(n.is_star_regular().unwrap());
        assert!(!n.is_linked_mask(0b11).unwrap());
        let d = n.dotted_mask().unwrap();
        for p in bits(d) {
            assert!(n.is_linked_mask(bit(p)).unwrap());
        }
    }

    #[test]
    fn regularise_examples() {
        let r = i1().regularise(Priming::StageLocal).unwrap();
        assert_eq!(r.instance.generator_masks(), &[0b11]);
        let r = i2().regularise(Priming::StageLocal).unwrap();
        assert!(r.stages.len() <= 2);
        assert_eq!(r.instance.generator_masks(), &[0b10, 0b11]);
    }
}
