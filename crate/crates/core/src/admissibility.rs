//! Order covers and the admissibility predicates.

use std::fmt;

use crate::error::Result;
use crate::nearness::{NearnessInstance, PreorderFamily};
use crate::poset::{bit, ElementSet, Mask, Poset};
use crate::proximity::BelowRelation;

/// C ∈ C_≤(P): whenever p ≰ q some c ∈ C and r ∈ P have r ≤ p, r ≤ c, r ≰ q.
pub fn is_order_cover_mask(p: &Poset, c: Mask) -> bool {
    let cd = p.down_closure(c);
    (0..p.len()).all(|x| {
        (0..p.len()).all(|y| p.le(x, y) || p.down_mask(x) & cd & !p.down_mask(y) != 0)
    })
}

pub fn is_order_cover(p: &Poset, c: &ElementSet) -> Result<bool> {
    Ok(is_order_cover_mask(p, p.check(c)?))
}

/// How `p = ⋁p^▷` is read when p^▷ is empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LubReading {
    /// ⋁∅ is the minimum, so p must be the minimum.
    #[default]
    Literal,
    /// Empty p^▷ is accepted for any p.
    VacuousEmpty,
}

/// Witness that a predicate fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub predicate: &'static str,
    pub p: Option<usize>,
    pub q: Option<usize>,
    pub cover: Option<Mask>,
    pub note: String,
}

impl Counterexample {
    pub fn render(&self, poset: &Poset) -> String {
        let mut parts = vec![self.predicate.to_string()];
        if let Some(p) = self.p {
            parts.push(format!("p={}", poset.name(p)));
        }
        if let Some(q) = self.q {
            parts.push(format!("q={}", poset.name(q)));
        }
        if let Some(c) = self.cover {
            parts.push(format!("C={}", poset.format_mask(c)));
        }
        if !self.note.is_empty() {
            parts.push(self.note.clone());
        }
        parts.join(" ")
    }
}

fn cx(predicate: &'static str, p: Option<usize>, q: Option<usize>, cover: Option<Mask>, note: &str) -> Counterexample {
    Counterexample {
        predicate,
        p,
        q,
        cover,
        note: note.to_string(),
    }
}

/// Substitution test shared by the Wallman and Picado-Pultr predicates.
fn substitution_violation(
    n: &NearnessInstance,
    predicate: &'static str,
    target: impl Fn(Mask) -> bool,
) -> Result<Option<Counterexample>> {
    let po = n.poset();
    let members = n.member_masks()?;
    for p in 0..n.len() {
        for q in 0..n.len() {
            let bad = members
                .iter()
                .copied()
                .find(|&c| !target((c & !bit(p)) | bit(q)));
            match (po.le(p, q), bad) {
                (true, Some(c)) => {
                    return Ok(Some(cx(predicate, Some(p), Some(q), Some(c), "p≤q but substitution leaves the family")))
                }
                (false, None) => {
                    return Ok(Some(cx(predicate, Some(p), Some(q), None, "p≰q but every substitution stays in the family")))
                }
                _ => {}
            }
        }
    }
    Ok(None)
}

pub fn wallman_violation(n: &NearnessInstance) -> Result<Option<Counterexample>> {
    substitution_violation(n, "wallman", |c| n.in_theta_mask(c))
}

pub fn is_wallman_admissible(n: &NearnessInstance) -> Result<bool> {
    Ok(wallman_violation(n)?.is_none())
}

pub fn picado_pultr_violation(n: &NearnessInstance) -> Result<Option<Counterexample>> {
    let po = n.poset();
    substitution_violation(n, "picado_pultr", |c| is_order_cover_mask(po, c))
}

pub fn is_picado_pultr_admissible(n: &NearnessInstance) -> Result<bool> {
    Ok(picado_pultr_violation(n)?.is_none())
}

/// First p that is not the least upper bound of p^▷.
pub fn admissible_violation(n: &NearnessInstance, rel: &BelowRelation, reading: LubReading) -> Option<Counterexample> {
    let po = n.poset();
    for p in 0..n.len() {
        let lows = rel.below_mask(p);
        if lows == 0 && reading == LubReading::VacuousEmpty {
            continue;
        }
        if let Some(r) = crate::poset::bits(lows).find(|&r| !po.le(r, p)) {
            return Some(cx("admissible", Some(p), Some(r), None, "member of p^▷ not below p"));
        }
        let uppers = (0..n.len()).filter(|&q| crate::poset::bits(lows).all(|r| po.le(r, q)));
        if let Some(q) = uppers.into_iter().find(|&q| !po.le(p, q)) {
            return Some(cx("admissible", Some(p), Some(q), None, "upper bound of p^▷ not above p"));
        }
    }
    None
}

pub fn is_admissible(n: &NearnessInstance, rel: &BelowRelation, reading: LubReading) -> bool {
    admissible_violation(n, rel, reading).is_none()
}

/// ≤ equals ≤_F for the given family; returns the first differing pair.
pub fn order_vs_leq_theta(n: &NearnessInstance, family: PreorderFamily) -> Result<Option<(usize, usize)>> {
    let po = n.poset();
    for p in 0..n.len() {
        for q in 0..n.len() {
            if po.le(p, q) != n.leq_theta(p, q, family)? {
                return Ok(Some((p, q)));
            }
        }
    }
    Ok(None)
}

/// Every predicate with counterexamples for the false ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub weakly: bool,
    pub wallman: bool,
    pub picado_pultr: bool,
    pub admissible: bool,
    /// Result of the alternative reading of ⋁∅; differs from `admissible` only on flagged instances.
    pub admissible_vacuous: bool,
    pub theta_subset_order_covers: bool,
    /// ≤ = ≤_Θ with Θ taken literally.
    pub leq_equals_leq_theta: bool,
    /// ≤ = ≤_{Θ^≤}.
    pub leq_equals_leq_theta_le: bool,
    pub counterexamples: Vec<Counterexample>,
}

impl AdmissibilityReport {
    pub fn compute(n: &NearnessInstance) -> Result<Self> {
        let mut ce = Vec::new();
        let weak = n.weak_admissibility_violation()?;
        if let Some(p) = weak {
            ce.push(cx("weakly", Some(p), None, None, "p^≤≠P but {p} is not near"));
        }
        let wall = wallman_violation(n)?;
        ce.extend(wall.clone());
        let pp = picado_pultr_violation(n)?;
        ce.extend(pp.clone());
        let rel = n.below_relations()?;
        let adm = admissible_violation(n, &rel, LubReading::Literal);
        ce.extend(adm.clone());
        let adm_vac = is_admissible(n, &rel, LubReading::VacuousEmpty);
        let po = n.poset();
        let bad_cover = n
            .member_masks()?
            .into_iter()
            .find(|&c| !is_order_cover_mask(po, c));
        if let Some(c) = bad_cover {
            ce.push(cx("theta_subset_order_covers", None, None, Some(c), "member is not a ≤-cover"));
        }
        let lt = order_vs_leq_theta(n, PreorderFamily::Theta)?;
        if let Some((p, q)) = lt {
            ce.push(cx("leq_equals_leq_theta", Some(p), Some(q), None, "≤ and ≤_Θ differ"));
        }
        let lte = order_vs_leq_theta(n, PreorderFamily::ThetaLe)?;
        if let Some((p, q)) = lte {
            ce.push(cx("leq_equals_leq_theta_le", Some(p), Some(q), None, "≤ and ≤_{Θ^≤} differ"));
        }
        Ok(AdmissibilityReport {
            weakly: weak.is_none(),
            wallman: wall.is_none(),
            picado_pultr: pp.is_none(),
            admissible: adm.is_none(),
            admissible_vacuous: adm_vac,
            theta_subset_order_covers: bad_cover.is_none(),
            leq_equals_leq_theta: lt.is_none(),
            leq_equals_leq_theta_le: lte.is_none(),
            counterexamples: ce,
        })
    }

    /// The admissible verdict depends on how ⋁∅ is read.
    pub fn lub_reading_diverges(&self) -> bool {
        self.admissible != self.admissible_vacuous
    }
}

/// The three conditions of the Wallman corollary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WallmanForms {
    pub wallman: bool,
    pub subset_closed: bool,
    pub le_closed: bool,
    pub order_is_leq_theta: bool,
}

impl WallmanForms {
    pub fn form1(&self) -> bool {
        self.wallman
    }
    pub fn form2(&self) -> bool {
        self.subset_closed && self.order_is_leq_theta
    }
    pub fn form3(&self) -> bool {
        self.le_closed && self.order_is_leq_theta
    }
    pub fn agree(&self) -> bool {
        self.form1() == self.form2() && self.form2() == self.form3()
    }
}

impl fmt::Display for WallmanForms {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(1) wallman={} (2) subset-closed∧≤=≤_Θ={} (3) ≤-closed∧≤=≤_Θ={} agree={}",
            self.form1(),
            self.form2(),
            self.form3(),
            self.agree()
        )
    }
}

/// Θ is ⊆-closed within P(P); one-element extensions suffice by iteration.
pub fn is_subset_closed(n: &NearnessInstance) -> Result<bool> {
    let members = n.member_masks()?;
    Ok(members
        .iter()
        .all(|&c| (0..n.len()).all(|x| n.in_theta_mask(c | bit(x)))))
}

/// Θ is closed upward under refinement within P(P).
pub fn is_le_closed(n: &NearnessInstance) -> Result<bool> {
    n.is_upset_family()
}

/// Θ is closed upward under ≤_Θ-refinement of subsets within P(P).
pub fn is_leq_theta_closed(n: &NearnessInstance) -> Result<bool> {
    let t = n.leq_theta_table(PreorderFamily::Theta)?;
    let k = n.len();
    let refines = |c: Mask, d: Mask| {
        crate::poset::bits(c).all(|x| crate::poset::bits(d).any(|y| t[x][y]))
    };
    let members = n.member_masks()?;
    Ok(members.iter().all(|&c| {
        (0..=crate::poset::full_mask(k)).all(|d| !refines(c, d) || n.in_theta_mask(d))
    }))
}

pub fn wallman_equivalent_forms(n: &NearnessInstance) -> Result<WallmanForms> {
    Ok(WallmanForms {
        wallman: is_wallman_admissible(n)?,
        subset_closed: is_subset_closed(n)?,
        le_closed: is_le_closed(n)?,
        order_is_leq_theta: order_vs_leq_theta(n, PreorderFamily::Theta)?.is_none(),
    })
}

/// All ≤-covers of P in ascending order.
pub fn order_covers(p: &Poset) -> Vec<Mask> {
    (0..=p.full_mask()).filter(|&c| is_order_cover_mask(p, c)).collect()
}
