//! Nearness instances (P, ≤, Θ), Cauchy and round subsets, and the spectrum.

use std::collections::HashSet;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::bounds::Bounds;
use crate::error::{NearnessError, Result};
use crate::poset::{bit, bits, full_mask, ElementSet, Mask, Poset};

// largest |P| for which the Θ^≤ membership bitmap is materialized
const MEMO_LIMIT: usize = 20;

/// How the stored generators describe Θ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ThetaClosure {
    /// Θ is exactly the stored list.
    Listed,
    /// Θ is every superset of a stored generator; generators are ⊆-minimal.
    Supersets,
}

/// Which family the preorder ≤_Θ is taken against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PreorderFamily {
    Theta,
    ThetaLe,
    RestrictionEmpty,
}

impl fmt::Display for PreorderFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PreorderFamily::Theta => "Θ",
            PreorderFamily::ThetaLe => "Θ^≤",
            PreorderFamily::RestrictionEmpty => "Θ|∅",
        })
    }
}

/// A finite poset together with a family Θ of its subsets.
#[derive(Debug, Clone)]
pub struct NearnessInstance {
    poset: Arc<Poset>,
    theta: Vec<Mask>,
    closure: ThetaClosure,
    bounds: Bounds,
    le_table: OnceLock<Vec<bool>>,
    listed: OnceLock<HashSet<Mask>>,
    downsets: OnceLock<Vec<Mask>>,
    pub(crate) near_table: OnceLock<Vec<bool>>,
}

impl NearnessInstance {
    /// Θ given literally; duplicates dropped, first occurrence kept.
    pub fn new(poset: Arc<Poset>, theta: &[ElementSet]) -> Result<Self> {
        let mut masks = Vec::with_capacity(theta.len());
        for c in theta {
            masks.push(poset.check(c)?);
        }
        Ok(Self::from_masks(poset, masks, ThetaClosure::Listed))
    }

    /// Θ = all supersets of the given generators.
    pub fn superset_closed(poset: Arc<Poset>, generators: &[ElementSet]) -> Result<Self> {
        let mut masks = Vec::with_capacity(generators.len());
        for c in generators {
            masks.push(poset.check(c)?);
        }
        Ok(Self::from_masks(poset, masks, ThetaClosure::Supersets))
    }

    /// Raw constructor; masks must lie within the poset.
    pub fn from_masks(poset: Arc<Poset>, masks: Vec<Mask>, closure: ThetaClosure) -> Self {
        let full = poset.full_mask();
        let mut seen = HashSet::new();
        let mut theta: Vec<Mask> = masks
            .into_iter()
            .map(|m| m & full)
            .filter(|m| seen.insert(*m))
            .collect();
        if closure == ThetaClosure::Supersets {
            let all = theta.clone();
            theta.retain(|&c| !all.iter().any(|&d| d != c && d & !c == 0));
            theta.sort_unstable();
        }
        NearnessInstance {
            poset,
            theta,
            closure,
            bounds: Bounds::from_env(),
            le_table: OnceLock::new(),
            listed: OnceLock::new(),
            downsets: OnceLock::new(),
            near_table: OnceLock::new(),
        }
    }

    pub fn with_bounds(mut self, bounds: Bounds) -> Self {
        self.bounds = bounds;
        self
    }

    /// Same poset and bounds, different family.
    pub fn with_family(&self, masks: Vec<Mask>, closure: ThetaClosure) -> Self {
        Self::from_masks(self.poset.clone(), masks, closure).with_bounds(self.bounds)
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn poset_arc(&self) -> &Arc<Poset> {
        &self.poset
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    pub fn closure(&self) -> ThetaClosure {
        self.closure
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    /// Stored generators as masks.
    pub fn generator_masks(&self) -> &[Mask] {
        &self.theta
    }

    pub fn generators(&self) -> Vec<ElementSet> {
        self.theta.iter().map(|&m| self.poset.set_unchecked(m)).collect()
    }

    pub fn theta_is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    /// Every member of Θ; for superset-closed Θ this lists all supersets.
    pub fn member_masks(&self) -> Result<Vec<Mask>> {
        match self.closure {
            ThetaClosure::Listed => Ok(self.theta.clone()),
            ThetaClosure::Supersets => {
                self.bounds.check_powerset("Θ member listing", self.len())?;
                Ok((0..=self.full())
                    .filter(|&s| self.in_theta_mask(s))
                    .collect())
            }
        }
    }

    pub(crate) fn full(&self) -> Mask {
        full_mask(self.len())
    }

    pub(crate) fn set(&self, m: Mask) -> ElementSet {
        self.poset.set_unchecked(m)
    }

    pub(crate) fn check(&self, s: &ElementSet) -> Result<Mask> {
        self.poset.check(s)
    }

    /// Down-sets of P in ascending order, cached.
    pub(crate) fn downsets(&self) -> &[Mask] {
        self.downsets.get_or_init(|| self.poset.downset_masks())
    }

    // ---- membership ----

    /// Literal membership C ∈ Θ.
    pub fn in_theta_mask(&self, c: Mask) -> bool {
        match self.closure {
            ThetaClosure::Listed => self
                .listed
                .get_or_init(|| self.theta.iter().copied().collect())
                .contains(&c),
            ThetaClosure::Supersets => self.theta.iter().any(|&g| g & !c == 0),
        }
    }

    pub fn in_theta(&self, c: &ElementSet) -> Result<bool> {
        Ok(self.in_theta_mask(self.check(c)?))
    }

    /// S ∈ Θ^≤, i.e. some C ∈ Θ refines S.
    pub fn in_theta_le_mask(&self, s: Mask) -> bool {
        let d = self.poset.down_closure(s);
        if self.len() <= MEMO_LIMIT {
            self.le_table.get_or_init(|| self.build_le_table())[d as usize]
        } else {
            self.theta.iter().any(|&c| c & !d == 0)
        }
    }

    pub fn in_theta_le(&self, s: &ElementSet) -> Result<bool> {
        Ok(self.in_theta_le_mask(self.check(s)?))
    }

    // f[T] = ∃C∈Θ with C ⊆ T, by a superset-sum pass
    fn build_le_table(&self) -> Vec<bool> {
        let n = self.len();
        let mut f = vec![false; 1usize << n];
        for &c in &self.theta {
            f[c as usize] = true;
        }
        for i in 0..n {
            let b = 1usize << i;
            for t in 0..f.len() {
                if t & b != 0 && f[t ^ b] {
                    f[t] = true;
                }
            }
        }
        f
    }

    // ---- Cauchy / round ----

    pub fn is_cauchy_mask(&self, s: Mask) -> bool {
        self.theta.iter().all(|&c| c & s != 0)
    }

    pub fn is_round_mask(&self, s: Mask) -> bool {
        bits(s).all(|x| {
            let below = self.poset.down_mask(x);
            self.theta.iter().any(|&c| c & s & !below == 0)
        })
    }

    pub fn is_cauchy(&self, s: &ElementSet) -> Result<bool> {
        Ok(self.is_cauchy_mask(self.check(s)?))
    }

    pub fn is_round(&self, s: &ElementSet) -> Result<bool> {
        Ok(self.is_round_mask(self.check(s)?))
    }

    /// Θ is directed under refinement: non-empty with pairwise lower bounds in Θ.
    pub fn is_directed_family(&self) -> bool {
        if self.theta.is_empty() {
            return false;
        }
        let p = &self.poset;
        self.theta.iter().enumerate().all(|(i, &c)| {
            self.theta[i + 1..].iter().all(|&d| {
                self.theta
                    .iter()
                    .any(|&e| p.refines_mask(e, c) && p.refines_mask(e, d))
            })
        })
    }

    /// Θ is an up-set of P(P) under refinement.
    pub fn is_upset_family(&self) -> Result<bool> {
        self.bounds.check_powerset("up-set family test", self.len())?;
        Ok((0..=self.full()).all(|s| !self.in_theta_le_mask(s) || self.in_theta_mask(s)))
    }

    pub fn is_filter_family(&self) -> Result<bool> {
        Ok(self.is_directed_family() && self.is_upset_family()?)
    }

    /// Θ ⊆ C_≤(P).
    pub fn theta_in_order_covers(&self) -> Result<bool> {
        Ok(self
            .member_masks()?
            .into_iter()
            .all(|c| crate::admissibility::is_order_cover_mask(&self.poset, c)))
    }

    // ---- spectrum ----

    pub fn spectrum(&self) -> Result<Spectrum> {
        self.bounds.check_powerset("spectrum", self.len())?;
        let pts: Vec<Mask> = self
            .poset
            .upset_masks()
            .into_iter()
            .filter(|&r| self.is_cauchy_mask(r) && self.is_round_mask(r))
            .collect();
        Ok(Spectrum::new(self.poset.clone(), pts))
    }

    /// Minimal Θ^≤-Cauchy subsets, found by scanning every subset.
    pub fn spectrum_oracle(&self) -> Result<Spectrum> {
        self.bounds.check_double("spectrum oracle", self.len())?;
        let full = self.full();
        let cauchy = |s: Mask| !self.in_theta_le_mask(full & !s);
        let pts: Vec<Mask> = (0..=full)
            .filter(|&s| cauchy(s) && bits(s).all(|i| !cauchy(s & !bit(i))))
            .collect();
        Ok(Spectrum::new(self.poset.clone(), pts))
    }

    // ---- ≤_Θ ----

    fn family_member(&self, family: PreorderFamily, restriction: Option<&crate::proximity::Restriction>, s: Mask) -> bool {
        match family {
            PreorderFamily::Theta => self.in_theta_mask(s),
            PreorderFamily::ThetaLe => self.in_theta_le_mask(s),
            PreorderFamily::RestrictionEmpty => restriction.expect("restriction").contains_mask(s),
        }
    }

    /// p ≤_F q: S∪{p} ∈ F ⇒ S∪{q} ∈ F for every S ⊆ P.
    pub fn leq_theta(&self, p: usize, q: usize, family: PreorderFamily) -> Result<bool> {
        self.leq_theta_impl(p, q, family, false)
    }

    /// Same relation, always scanning the full powerset.
    pub fn leq_theta_full_scan(&self, p: usize, q: usize, family: PreorderFamily) -> Result<bool> {
        self.leq_theta_impl(p, q, family, true)
    }

    fn leq_theta_impl(&self, p: usize, q: usize, family: PreorderFamily, full_scan: bool) -> Result<bool> {
        let n = self.len();
        if p >= n || q >= n {
            return Err(NearnessError::IndexOutOfRange(p.max(q)));
        }
        self.bounds.check_powerset("≤_Θ scan", n)?;
        let r = match family {
            PreorderFamily::RestrictionEmpty => Some(self.restriction_mask(0)?),
            _ => None,
        };
        let test = |s: Mask| {
            !self.family_member(family, r.as_ref(), s | bit(p))
                || self.family_member(family, r.as_ref(), s | bit(q))
        };
        // ≤-closed families only need down-sets
        if !full_scan && family != PreorderFamily::Theta {
            Ok(self.downsets().iter().all(|&s| test(s)))
        } else {
            Ok((0..=self.full()).all(test))
        }
    }

    /// Table of ≤_F over all pairs.
    pub fn leq_theta_table(&self, family: PreorderFamily) -> Result<Vec<Vec<bool>>> {
        let n = self.len();
        let mut t = vec![vec![false; n]; n];
        for (p, row) in t.iter_mut().enumerate() {
            for (q, cell) in row.iter_mut().enumerate() {
                *cell = self.leq_theta(p, q, family)?;
            }
        }
        Ok(t)
    }

    /// Θ^S membership: R ∪ S ∈ Θ.
    pub fn in_subfamily(&self, s: &ElementSet, r: &ElementSet) -> Result<bool> {
        Ok(self.in_theta_mask(self.check(s)? | self.check(r)?))
    }

    // ---- degenerate cases ----

    pub fn classify_degenerate(&self) -> Result<DegenerateReport> {
        let spec = self.spectrum()?;
        let pts = spec.point_masks();
        let full = self.full();
        let empty_theta = self.theta.is_empty();
        let empty_in = self.in_theta_mask(0);
        let has_empty_point = pts.contains(&0);
        let only_empty = pts == [0];
        let mut cases = vec![
            DegenerateCase {
                name: "Empty=Theta",
                fired: empty_theta,
                consistent: empty_theta == has_empty_point && has_empty_point == only_empty,
                detail: "Θ̂={∅}".into(),
            },
            DegenerateCase {
                name: "EmptyinTheta",
                fired: empty_in,
                consistent: !empty_in || pts.is_empty(),
                detail: "Θ̂=∅".into(),
            },
        ];
        if let Some(z) = self.poset.minimum() {
            let zero_in = self.in_theta_mask(bit(z));
            let lhs = zero_in && !empty_in;
            let p_in = pts.contains(&full);
            let only_p = pts == [full];
            cases.push(DegenerateCase {
                name: "0inTheta",
                fired: lhs,
                consistent: lhs == p_in && p_in == only_p,
                detail: "Θ̂={P}".into(),
            });
            cases.push(DegenerateCase {
                name: "0notinTheta",
                fired: !zero_in,
                consistent: zero_in || pts.iter().all(|&r| r & bit(z) == 0),
                detail: "Θ̂ ⊆ P(P∖{0})".into(),
            });
        }
        Ok(DegenerateReport { cases })
    }
}

/// One of the four degenerate-case equations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegenerateCase {
    pub name: &'static str,
    /// The left-hand hypothesis holds on this instance.
    pub fired: bool,
    /// The stated equation agrees with the computed spectrum.
    pub consistent: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegenerateReport {
    pub cases: Vec<DegenerateCase>,
}

impl DegenerateReport {
    pub fn all_consistent(&self) -> bool {
        self.cases.iter().all(|c| c.consistent)
    }

    /// Banner lines for the cases that fire.
    pub fn banners(&self) -> Vec<String> {
        self.cases
            .iter()
            .filter(|c| c.fired && c.name != "0notinTheta")
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect()
    }
}

/// The points Θ̂ with their subbasic sets Θ̂_p.
#[derive(Debug, Clone)]
pub struct Spectrum {
    poset: Arc<Poset>,
    points: Vec<Mask>,
    subbasic: Vec<Vec<usize>>,
}

impl PartialEq for Spectrum {
    fn eq(&self, other: &Self) -> bool {
        self.poset.id() == other.poset.id() && self.points == other.points
    }
}

impl Spectrum {
    pub(crate) fn new(poset: Arc<Poset>, mut points: Vec<Mask>) -> Self {
        points.sort_unstable();
        points.dedup();
        let subbasic = (0..poset.len())
            .map(|p| {
                points
                    .iter()
                    .enumerate()
                    .filter(|(_, &r)| r & bit(p) != 0)
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        Spectrum {
            poset,
            points,
            subbasic,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> Vec<ElementSet> {
        self.points.iter().map(|&m| self.poset.set_unchecked(m)).collect()
    }

    pub fn point_masks(&self) -> &[Mask] {
        &self.points
    }

    /// Θ̂_p as indices into `points`.
    pub fn subbasic(&self, p: usize) -> &[usize] {
        &self.subbasic[p]
    }

    /// Θ̂_F = points containing F, as indices.
    pub fn containing(&self, f: Mask) -> Vec<usize> {
        self.points
            .iter()
            .enumerate()
            .filter(|(_, &r)| r & f == f)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn index_of(&self, r: Mask) -> Option<usize> {
        self.points.binary_search(&r).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

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

    #[test]
    fn theta_le_examples() {
        let n = i1();
        let p = n.poset();
        assert!(n.in_theta_le(&p.full_set()).unwrap());
        assert!(!n.in_theta_le(&p.set_from_names(&["a"]).unwrap()).unwrap());
        let n = i2();
        assert!(n.in_theta_le(&n.poset().full_set()).unwrap());
    }

    #[test]
    fn cauchy_round_examples() {
        let e = inst(Poset::chain(&["0", "1"]).unwrap(), &[]);
        assert!(e.is_cauchy_mask(0) && e.is_cauchy_mask(3));
        let n = i1();
        let a = n.poset().set_from_names(&["a"]).unwrap();
        assert!(n.is_cauchy(&a).unwrap() && n.is_round(&a).unwrap());
        let n = i2();
        assert!(!n.is_round(&n.poset().full_set()).unwrap());
        assert!(n.is_round_mask(0));
    }

    #[test]
    fn spectrum_examples() {
        let e = inst(Poset::chain(&["0", "1"]).unwrap(), &[]);
        assert_eq!(e.spectrum().unwrap().point_masks(), &[0]);
        let z = inst(Poset::antichain(&["a", "b"]).unwrap(), &[&[], &["a"]]);
        assert!(z.spectrum().unwrap().is_empty());
        assert_eq!(i1().spectrum().unwrap().point_masks(), &[0b01, 0b10]);
        assert_eq!(i1().spectrum_oracle().unwrap().point_masks(), &[0b01, 0b10]);
        assert_eq!(i2().spectrum_oracle().unwrap().point_masks(), &[0b10]);
        let zero = inst(Poset::chain(&["0", "1"]).unwrap(), &[&["0"]]);
        assert_eq!(zero.spectrum_oracle().unwrap().point_masks(), &[0b11]);
        assert_eq!(zero.spectrum().unwrap().point_masks(), &[0b11]);
    }

    #[test]
    fn leq_theta_examples() {
        let n = i1();
        assert!(n.leq_theta(0, 0, PreorderFamily::Theta).unwrap());
        assert!(!n.leq_theta(0, 1, PreorderFamily::ThetaLe).unwrap());
        let n = i2();
        assert!(n.leq_theta(0, 1, PreorderFamily::ThetaLe).unwrap());
        assert!(n.leq_theta_full_scan(0, 1, PreorderFamily::ThetaLe).unwrap());
    }

    #[test]
    fn degenerate_banners() {
        let e = inst(Poset::antichain(&["a", "b"]).unwrap(), &[]);
        assert_eq!(e.classify_degenerate().unwrap().banners(), vec!["Empty=Theta: Θ̂={∅}"]);
        let z = inst(Poset::antichain(&["a", "b"]).unwrap(), &[&[], &["a"]]);
        assert_eq!(z.classify_degenerate().unwrap().banners(), vec!["EmptyinTheta: Θ̂=∅"]);
        let o = inst(Poset::chain(&["0"]).unwrap(), &[&["0"]]);
        let r = o.classify_degenerate().unwrap();
        assert_eq!(r.banners(), vec!["0inTheta: Θ̂={P}"]);
        assert!(r.all_consistent());
    }

    #[test]
    fn superset_closure_keeps_minimal_generators() {
        let p = Arc::new(Poset::antichain(&["a", "b", "c"]).unwrap());
        let n = NearnessInstance::from_masks(p, vec![0b011, 0b111, 0b110], ThetaClosure::Supersets);
        assert_eq!(n.generator_masks(), &[0b011, 0b110]);
        assert!(n.in_theta_mask(0b111));
        assert!(!n.in_theta_mask(0b101));
        assert_eq!(n.member_masks().unwrap(), vec![0b011, 0b110, 0b111]);
    }
}
