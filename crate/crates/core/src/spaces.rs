//! Finite spaces with a named family of subsets, cover families and round trips.

use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bounds::Bounds;
use crate::error::{NearnessError, Result};
use crate::nearness::{NearnessInstance, PreorderFamily, ThetaClosure};
use crate::poset::{bit, bits, full_mask, Mask, Poset};
use crate::proximity::minimal_transversals;

/// Role the family plays for the topology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Subbasis,
    Basis,
}

/// Which Θ ⊆ C_X(P) to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverMode {
    All,
    /// Finite covers; identical to `All` on a finite family.
    Finite,
    /// `k` covers drawn with the given seed; must be coinitial.
    Sample { k: usize, seed: u64 },
}

/// A finite point set X with a named family P ⊆ P(X).
#[derive(Debug, Clone)]
pub struct FiniteSpace {
    points: Vec<String>,
    names: Vec<String>,
    sets: Vec<Mask>,
    role: Role,
    poset: OnceLock<std::result::Result<Arc<Poset>, NearnessError>>,
}

impl FiniteSpace {
    pub fn new<S: AsRef<str>>(points: &[S], family: &[(S, Vec<S>)], role: Role) -> Result<Self> {
        let points: Vec<String> = points.iter().map(|s| s.as_ref().to_string()).collect();
        if points.len() > 63 {
            return Err(NearnessError::InvalidSpace(format!("{} points exceed 63", points.len())));
        }
        let mut seen = BTreeSet::new();
        for p in &points {
            if p.is_empty() || !seen.insert(p.as_str()) {
                return Err(NearnessError::InvalidSpace(format!("bad or duplicate point `{p}`")));
            }
        }
        let mut names = Vec::new();
        let mut sets = Vec::new();
        let mut seen_names = BTreeSet::new();
        for (name, members) in family {
            let name = name.as_ref().to_string();
            if name.is_empty() || !seen_names.insert(name.clone()) {
                return Err(NearnessError::InvalidSpace(format!("bad or duplicate set name `{name}`")));
            }
            let mut m = 0;
            for x in members {
                let i = points
                    .iter()
                    .position(|p| p == x.as_ref())
                    .ok_or_else(|| NearnessError::InvalidSpace(format!("set `{name}` has unknown point `{}`", x.as_ref())))?;
                m |= bit(i);
            }
            names.push(name);
            sets.push(m);
        }
        Self::build(points, names, sets, role)
    }

    /// Points `x0..`, sets `s0..` from raw masks.
    pub fn from_masks(n_points: usize, sets: &[Mask], role: Role) -> Result<Self> {
        let points = (0..n_points).map(|i| format!("x{i}")).collect();
        let names = (0..sets.len()).map(|i| format!("s{i}")).collect();
        let full = full_mask(n_points);
        if sets.iter().any(|&s| s & !full != 0) {
            return Err(NearnessError::InvalidSpace("set outside the point set".into()));
        }
        Self::build(points, names, sets.to_vec(), role)
    }

    fn build(points: Vec<String>, names: Vec<String>, sets: Vec<Mask>, role: Role) -> Result<Self> {
        if sets.len() > 63 {
            return Err(NearnessError::InvalidSpace(format!("{} sets exceed 63", sets.len())));
        }
        let s = FiniteSpace {
            points,
            names,
            sets,
            role,
            poset: OnceLock::new(),
        };
        if role == Role::Basis {
            if let Some((i, j, x)) = s.basis_axiom_violation() {
                return Err(NearnessError::InvalidSpace(format!(
                    "basis axiom fails at point `{}` of `{}` ∩ `{}`",
                    s.points[x], s.names[i], s.names[j]
                )));
            }
        }
        Ok(s)
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn sets(&self) -> &[Mask] {
        &self.sets
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn n_points(&self) -> usize {
        self.points.len()
    }

    pub fn universe(&self) -> Mask {
        full_mask(self.points.len())
    }

    pub fn format_points(&self, m: Mask) -> String {
        let v: Vec<&str> = bits(m).map(|i| self.points[i].as_str()).collect();
        format!("{{{}}}", v.join(","))
    }

    fn basis_axiom_violation(&self) -> Option<(usize, usize, usize)> {
        for (i, &a) in self.sets.iter().enumerate() {
            for (j, &b) in self.sets.iter().enumerate() {
                let ab = a & b;
                for x in bits(ab) {
                    if !self.sets.iter().any(|&c| c & bit(x) != 0 && c & !ab == 0) {
                        return Some((i, j, x));
                    }
                }
            }
        }
        None
    }

    /// x ≠ y ⇒ some O, N with x ∈ O∖N and y ∈ N∖O.
    pub fn is_t1_family(&self) -> bool {
        let n = self.n_points();
        (0..n).all(|x| {
            (0..n).all(|y| {
                x == y || {
                    let sep = |u: usize, v: usize| self.sets.iter().any(|&o| o & bit(u) != 0 && o & bit(v) == 0);
                    sep(x, y) && sep(y, x)
                }
            })
        })
    }

    /// Every x has O, N in the family with O∖N = {x}.
    pub fn is_td_family(&self) -> bool {
        (0..self.n_points()).all(|x| {
            self.sets
                .iter()
                .any(|&o| self.sets.iter().any(|&m| o & !m == bit(x)))
        })
    }

    /// Open sets generated by the family, ascending.
    pub fn topology(&self) -> Vec<Mask> {
        let mut inter: BTreeSet<Mask> = self.sets.iter().copied().collect();
        // empty intersection
        inter.insert(self.universe());
        loop {
            let cur: Vec<Mask> = inter.iter().copied().collect();
            let before = inter.len();
            for (k, &a) in cur.iter().enumerate() {
                for &b in &cur[k + 1..] {
                    inter.insert(a & b);
                }
            }
            if inter.len() == before {
                break;
            }
        }
        let mut opens: BTreeSet<Mask> = BTreeSet::new();
        opens.insert(0);
        for &b in &inter {
            let cur: Vec<Mask> = opens.iter().copied().collect();
            for o in cur {
                opens.insert(o | b);
            }
        }
        opens.into_iter().collect()
    }

    /// Every open set is a union of family members.
    pub fn is_basis(&self) -> bool {
        self.topology().into_iter().all(|o| {
            self.sets.iter().filter(|&&s| s & !o == 0).fold(0, |acc, &s| acc | s) == o
        })
    }

    pub fn closure(&self, a: Mask) -> Mask {
        let outside = self
            .topology()
            .into_iter()
            .filter(|&o| o & a == 0)
            .fold(0, |acc, o| acc | o);
        self.universe() & !outside
    }

    /// P_x as a mask over family indices.
    pub fn point_nbhd(&self, x: usize) -> Mask {
        self.sets
            .iter()
            .enumerate()
            .filter(|(_, &s)| s & bit(x) != 0)
            .fold(0, |acc, (i, _)| acc | bit(i))
    }

    /// ⋃C for C given over family indices.
    pub fn union_of(&self, c: Mask) -> Mask {
        bits(c).fold(0, |acc, i| acc | self.sets[i])
    }

    /// ⋂C, with ⋂∅ = X.
    pub fn intersection_of(&self, c: Mask) -> Mask {
        bits(c).fold(self.universe(), |acc, i| acc & self.sets[i])
    }

    /// C ∈ C_A(P): A ⊆ ⋃C.
    pub fn covers(&self, a: Mask, c: Mask) -> bool {
        a & !self.union_of(c) == 0
    }

    /// ⊆-minimal covers of A, ascending.
    pub fn minimal_covers_of(&self, a: Mask) -> Vec<Mask> {
        let edges: Vec<Mask> = bits(a).map(|x| self.point_nbhd(x)).collect();
        minimal_transversals(&edges)
    }

    pub fn minimal_covers(&self) -> Vec<Mask> {
        self.minimal_covers_of(self.universe())
    }

    /// All covers of X, ascending.
    pub fn all_covers(&self) -> Result<Vec<Mask>> {
        Bounds::from_env().check_powerset("cover listing", self.sets.len())?;
        Ok((0..=full_mask(self.sets.len()))
            .filter(|&c| self.covers(self.universe(), c))
            .collect())
    }

    /// The family ordered by ⊆, elements named after the sets.
    pub fn family_poset(&self) -> Result<Arc<Poset>> {
        self.poset
            .get_or_init(|| {
                let n = self.sets.len();
                let mut pairs = Vec::new();
                for i in 0..n {
                    for j in 0..n {
                        if i != j && self.sets[i] & !self.sets[j] == 0 {
                            pairs.push((i, j));
                        }
                    }
                }
                Poset::from_indices(self.names.clone(), &pairs).map(Arc::new)
            })
            .clone()
    }

    /// (P, ⊆, Θ) with Θ drawn from C_X(P) according to `mode`.
    pub fn cover_family(&self, mode: CoverMode) -> Result<NearnessInstance> {
        let poset = self.family_poset()?;
        match mode {
            CoverMode::All | CoverMode::Finite => Ok(NearnessInstance::from_masks(
                poset,
                self.minimal_covers(),
                ThetaClosure::Supersets,
            )),
            CoverMode::Sample { k, seed } => {
                let all = self.all_covers()?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let k = k.min(all.len());
                let mut picked: Vec<Mask> = sample(&mut rng, all.len(), k).into_iter().map(|i| all[i]).collect();
                picked.sort_unstable();
                let inst = NearnessInstance::from_masks(poset, picked, ThetaClosure::Listed);
                if let Some(m) = self.coinitiality_violation(&inst)? {
                    return Err(NearnessError::NotCoinitial(format!(
                        "minimal cover {} (seed {seed}, k {k})",
                        inst.poset().format_mask(m)
                    )));
                }
                Ok(inst)
            }
        }
    }

    /// Θ over this family from lists of set indices.
    pub fn instance_with_theta(&self, theta: &[Vec<usize>]) -> Result<NearnessInstance> {
        let poset = self.family_poset()?;
        let sets = theta
            .iter()
            .map(|c| poset.set_from_indices(c))
            .collect::<Result<Vec<_>>>()?;
        NearnessInstance::new(poset, &sets)
    }

    /// First minimal cover not refined by any member of Θ.
    pub fn coinitiality_violation(&self, theta: &NearnessInstance) -> Result<Option<Mask>> {
        let members = theta.member_masks()?;
        let po = theta.poset();
        Ok(self
            .minimal_covers()
            .into_iter()
            .find(|&m| !members.iter().any(|&c| po.refines_mask(c, m))))
    }

    /// Θ ⊆ C_X(P) and every cover is refined by a member.
    pub fn is_coinitial_in_covers(&self, theta: &NearnessInstance) -> Result<bool> {
        Ok(self.theta_within_covers(theta)? && self.coinitiality_violation(theta)?.is_none())
    }

    pub fn theta_within_covers(&self, theta: &NearnessInstance) -> Result<bool> {
        Ok(theta
            .member_masks()?
            .into_iter()
            .all(|c| self.covers(self.universe(), c)))
    }

    /// C*p = {c ∈ C : c ∩ p ≠ ∅}; C over family indices, p over points.
    pub fn star_concrete(&self, c: Mask, p: Mask) -> Mask {
        bits(c).filter(|&i| self.sets[i] & p != 0).fold(0, |acc, i| acc | bit(i))
    }

    /// C_X(P) ⊆ (Θ*p)^≤ for every p ∈ P.
    pub fn is_star_coinitial(&self, theta: &NearnessInstance) -> Result<bool> {
        let members = theta.member_masks()?;
        let po = theta.poset();
        let minimal = self.minimal_covers();
        Ok(self.sets.iter().all(|&p| {
            minimal.iter().all(|&m| {
                members
                    .iter()
                    .any(|&c| po.refines_mask(self.star_concrete(c, p), m))
            })
        }))
    }

    /// C_x = {c ∈ C : x ∈ c}
    fn at(&self, c: Mask, x: usize) -> Mask {
        c & self.point_nbhd(x)
    }

    /// (⋃C_x)_{C∈Θ} is a neighbourhood base at every x.
    pub fn is_compatible(&self, theta: &NearnessInstance) -> Result<bool> {
        let members = theta.member_masks()?;
        let nbhds: Vec<Vec<Mask>> = (0..self.n_points())
            .map(|x| members.iter().map(|&c| self.union_of(self.at(c, x))).collect())
            .collect();
        Ok(self.is_nbhd_base(&nbhds))
    }

    /// (⋃(C*⋃C_x))_{C∈Θ} is a neighbourhood base at every x.
    pub fn star_sets_form_base(&self, theta: &NearnessInstance) -> Result<bool> {
        let members = theta.member_masks()?;
        let nbhds: Vec<Vec<Mask>> = (0..self.n_points())
            .map(|x| {
                members
                    .iter()
                    .map(|&c| self.union_of(self.star_concrete(c, self.union_of(self.at(c, x)))))
                    .collect()
            })
            .collect();
        Ok(self.is_nbhd_base(&nbhds))
    }

    // each candidate contains an open nbhd of x, and every open nbhd contains a candidate
    fn is_nbhd_base(&self, cands: &[Vec<Mask>]) -> bool {
        let top = self.topology();
        (0..self.n_points()).all(|x| {
            let opens: Vec<Mask> = top.iter().copied().filter(|&o| o & bit(x) != 0).collect();
            cands[x]
                .iter()
                .all(|&b| opens.iter().any(|&o| o & !b == 0))
                && opens
                    .iter()
                    .all(|&o| cands[x].iter().any(|&b| b & !o == 0))
        })
    }

    /// ∀x ∀C ∃D with ⋃(D*⋃D_x) ⊆ ⋃C_x.
    pub fn is_locally_uniform(&self, theta: &NearnessInstance) -> Result<bool> {
        let members = theta.member_masks()?;
        Ok((0..self.n_points()).all(|x| {
            members.iter().all(|&c| {
                let target = self.union_of(self.at(c, x));
                members.iter().any(|&d| {
                    let dx = self.union_of(self.at(d, x));
                    self.union_of(self.star_concrete(d, dx)) & !target == 0
                })
            })
        }))
    }

    /// Every Θ-Cauchy ⊲-filter R ⊆ P contains some P_x.
    pub fn is_complete(&self, theta: &NearnessInstance) -> Result<bool> {
        let rel = theta.below_relations()?;
        let full = full_mask(self.sets.len());
        Ok((0..=full).all(|r| {
            !(theta.is_cauchy_mask(r) && rel.is_filter_mask(r))
                || (0..self.n_points()).any(|x| self.point_nbhd(x) & !r == 0)
        }))
    }

    /// Checks x ↦ P_x against the spectrum of Θ.
    pub fn roundtrip_t1(&self, theta: &NearnessInstance) -> Result<RoundTripReport> {
        let mut rep = RoundTripReport {
            t1: self.is_t1_family(),
            coinitial: self.is_coinitial_in_covers(theta)?,
            ..Default::default()
        };
        if !rep.t1 {
            rep.notes.push("hypothesis T1 fails".into());
        }
        if !rep.coinitial {
            rep.notes.push("hypothesis Θ coinitial in C_X(P) fails".into());
        }
        if !rep.hypotheses_hold() {
            return Ok(rep);
        }
        let spec = theta.spectrum()?;
        let images: Vec<Mask> = (0..self.n_points()).map(|x| self.point_nbhd(x)).collect();
        rep.points = images.len();
        rep.spectrum_points = spec.len();
        let idx: Vec<Option<usize>> = images.iter().map(|&m| spec.index_of(m)).collect();
        let distinct: BTreeSet<Mask> = images.iter().copied().collect();
        rep.bijection = idx.iter().all(|i| i.is_some()) && distinct.len() == images.len() && spec.len() == images.len();
        if !rep.bijection {
            rep.notes.push(format!(
                "images {:?} vs spectrum {:?}",
                images,
                spec.point_masks()
            ));
        }
        rep.subbasis_match = rep.bijection
            && (0..self.sets.len()).all(|p| {
                (0..self.n_points()).all(|x| {
                    let inside = self.sets[p] & bit(x) != 0;
                    inside == spec.subbasic(p).contains(&idx[x].unwrap())
                })
            });
        let within = self.theta_within_covers(theta)?;
        let px_cauchy = images.iter().all(|&m| theta.is_cauchy_mask(m));
        rep.cauchy_covers = within == px_cauchy;
        let all = self.cover_family(CoverMode::All)?;
        rep.subbasis_order = (0..self.sets.len()).all(|p| {
            (0..self.sets.len()).all(|q| {
                let sub = self.sets[p] & !self.sets[q] == 0;
                all.leq_theta(p, q, PreorderFamily::Theta).map(|v| v == sub).unwrap_or(false)
            })
        });
        Ok(rep)
    }
}

/// Outcome of the T1 round trip.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RoundTripReport {
    pub t1: bool,
    pub coinitial: bool,
    pub points: usize,
    pub spectrum_points: usize,
    pub bijection: bool,
    pub subbasis_match: bool,
    pub cauchy_covers: bool,
    pub subbasis_order: bool,
    pub notes: Vec<String>,
}

impl RoundTripReport {
    pub fn hypotheses_hold(&self) -> bool {
        self.t1 && self.coinitial
    }

    /// Every asserted conclusion holds (vacuously when hypotheses fail).
    pub fn ok(&self) -> bool {
        !self.hypotheses_hold()
            || (self.bijection && self.subbasis_match && self.cauchy_covers && self.subbasis_order)
    }
}

/// Nearness versus non-empty intersection, and Θ|S versus C_cl(⋂S)(P).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NearIntersectionReport {
    pub t1: bool,
    pub near_mismatches: Vec<Mask>,
    pub restriction_mismatches: Vec<Mask>,
}

impl NearIntersectionReport {
    pub fn ok(&self) -> bool {
        !self.t1 || (self.near_mismatches.is_empty() && self.restriction_mismatches.is_empty())
    }
}

impl FiniteSpace {
    /// Checks both statements for every S ⊆ P with Θ = C_X(P).
    pub fn near_equals_intersection(&self) -> Result<NearIntersectionReport> {
        let mut rep = NearIntersectionReport {
            t1: self.is_t1_family(),
            ..Default::default()
        };
        if !rep.t1 {
            return Ok(rep);
        }
        let inst = self.cover_family(CoverMode::All)?;
        let full = full_mask(self.sets.len());
        let cls: Vec<Mask> = (0..=full).map(|s| self.closure(self.intersection_of(s))).collect();
        for s in 0..=full {
            let inter = self.intersection_of(s);
            if (inter != 0) != inst.is_near_bool(&inst.poset().set(s)?)? {
                rep.near_mismatches.push(s);
            }
            let r = inst.restriction_mask(s)?;
            let cl = cls[s as usize];
            if (0..=full).any(|c| r.contains_mask(c) != self.covers(cl, c)) {
                rep.restriction_mismatches.push(s);
            }
        }
        Ok(rep)
    }
}
