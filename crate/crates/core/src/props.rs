//! Executable catalog of the duality propositions on finite instances.
//!
//! Each check returns `Pass`, `Skipped` when its hypothesis fails on the
//! instance, `Fail` with a counterexample, or `Info` for probes that carry
//! no claim.

use std::fmt;

use serde::Serialize;

use crate::admissibility::{
    is_admissible, is_leq_theta_closed, is_order_cover_mask, is_picado_pultr_admissible,
    is_subset_closed, is_wallman_admissible, order_covers, wallman_equivalent_forms, LubReading,
};
use crate::error::{NearnessError, Result};
use crate::frames::FiniteFrame;
use crate::nearness::{NearnessInstance, PreorderFamily, ThetaClosure};
use crate::poset::{bit, bits, full_mask, Mask};
use crate::proximity::{BelowRelation, Priming};
use crate::replacement::ReplacementReading;
use crate::spaces::{CoverMode, FiniteSpace};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", content = "detail", rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Skipped(String),
    Fail(String),
    Info(String),
}

impl Outcome {
    pub fn is_fail(&self) -> bool {
        matches!(self, Outcome::Fail(_))
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, Outcome::Pass)
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Pass => f.write_str("pass"),
            Outcome::Skipped(why) => write!(f, "skipped: hypothesis ({why})"),
            Outcome::Fail(why) => write!(f, "FAIL: {why}"),
            Outcome::Info(what) => write!(f, "info: {what}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    #[serde(flatten)]
    pub outcome: Outcome,
}

/// Named checks in a fixed order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Suite {
    pub checks: Vec<Check>,
}

impl Suite {
    fn push(&mut self, name: impl Into<String>, outcome: Outcome) {
        self.checks.push(Check {
            name: name.into(),
            outcome,
        });
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.outcome.is_fail())
    }

    pub fn all_pass(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn extend(&mut self, prefix: &str, other: Suite) {
        for c in other.checks {
            self.push(format!("{prefix}{}", c.name), c.outcome);
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{}: {}", c.name, c.outcome)?;
        }
        Ok(())
    }
}

fn verdict(first_failure: Option<String>) -> Outcome {
    match first_failure {
        None => Outcome::Pass,
        Some(w) => Outcome::Fail(w),
    }
}

fn given(hyp: bool, why: &str, body: impl FnOnce() -> Result<Outcome>) -> Result<Outcome> {
    if hyp {
        body()
    } else {
        Ok(Outcome::Skipped(why.into()))
    }
}

fn subsets(full: Mask) -> impl Iterator<Item = Mask> {
    0..=full
}

// ---- spectrum helpers ----

/// Θ̂_S = {R ∈ Θ̂ : S ⊆ R}
fn points_containing(points: &[Mask], s: Mask) -> Vec<Mask> {
    points.iter().copied().filter(|&r| s & !r == 0).collect()
}

/// Closure of A in the topology with subbasis (Θ̂_p): R is in cl(A) when
/// every basic neighbourhood Θ̂_F, F ⊆ R finite, meets A.
pub fn spectrum_closure(points: &[Mask], a: &[Mask]) -> Vec<Mask> {
    points
        .iter()
        .copied()
        .filter(|&r| {
            let mut f = r;
            loop {
                if !a.iter().any(|&x| f & !x == 0) {
                    return false;
                }
                if f == 0 {
                    return true;
                }
                f = (f - 1) & r;
            }
        })
        .collect()
}

fn is_subset_of(a: &[Mask], b: &[Mask]) -> bool {
    a.iter().all(|x| b.contains(x))
}

fn fmt_family(n: &NearnessInstance, f: &[Mask]) -> String {
    let v: Vec<String> = f.iter().map(|&m| n.poset().format_mask(m)).collect();
    format!("{{{}}}", v.join(", "))
}

fn order_equals_lower(n: &NearnessInstance, rel: &BelowRelation) -> bool {
    (0..n.len()).all(|p| (0..n.len()).all(|q| n.poset().le(p, q) == rel.lower(p, q)))
}

fn admissible(n: &NearnessInstance) -> Result<bool> {
    Ok(is_admissible(n, &n.below_relations()?, LubReading::Literal))
}

// ---- nearness ----

pub fn rcu_minimal_cauchy(n: &NearnessInstance) -> Result<Outcome> {
    let a = n.spectrum()?;
    let b = n.spectrum_oracle()?;
    Ok(if a == b {
        Outcome::Pass
    } else {
        Outcome::Fail(format!(
            "spectrum {} but minimal Θ^≤-Cauchy sets {}",
            fmt_family(n, a.point_masks()),
            fmt_family(n, b.point_masks())
        ))
    })
}

pub fn degenerate_equations(n: &NearnessInstance) -> Result<Outcome> {
    let rep = n.classify_degenerate()?;
    Ok(verdict(
        rep.cases
            .iter()
            .find(|c| !c.consistent)
            .map(|c| format!("{} inconsistent with the spectrum", c.name)),
    ))
}

pub fn upset_upset(n: &NearnessInstance) -> Result<Outcome> {
    given(n.is_upset_family()?, "Θ is not an up-set", || {
        Ok(verdict(
            subsets(n.poset().full_mask())
                .find(|&s| n.is_cauchy_mask(s) && n.is_round_mask(s) && !n.poset().is_upset_mask(s))
                .map(|s| format!("round Cauchy {} is not an up-set", n.poset().format_mask(s))),
        ))
    })
}

pub fn directed_directed(n: &NearnessInstance) -> Result<Outcome> {
    given(n.is_directed_family(), "Θ is not directed", || {
        let sp = n.spectrum()?;
        Ok(verdict(
            sp.point_masks()
                .iter()
                .find(|&&r| !n.poset().is_directed_mask(r))
                .map(|&r| format!("point {} is not directed", n.poset().format_mask(r))),
        ))
    })
}

pub fn filter_filter(n: &NearnessInstance) -> Result<Outcome> {
    given(n.is_filter_family()?, "Θ is not a filter", || {
        let sp = n.spectrum()?;
        let p = n.poset();
        Ok(verdict(
            sp.point_masks()
                .iter()
                .find(|&&r| !(p.is_upset_mask(r) && p.is_directed_mask(r)))
                .map(|&r| format!("point {} is not a filter", p.format_mask(r))),
        ))
    })
}

pub fn cauchy_upset_round(n: &NearnessInstance) -> Result<Outcome> {
    let sp = n.spectrum()?;
    let ups = n.poset().upset_masks();
    for &r in sp.point_masks() {
        if let Some(&u) = ups.iter().find(|&&u| u != r && u & !r == 0 && n.is_cauchy_mask(u)) {
            return Ok(Outcome::Fail(format!(
                "point {} strictly contains Cauchy up-set {}",
                n.poset().format_mask(r),
                n.poset().format_mask(u)
            )));
        }
    }
    Ok(Outcome::Pass)
}

pub fn avoiding_zero(n: &NearnessInstance) -> Result<Outcome> {
    let Some(z) = n.poset().minimum() else {
        return Ok(Outcome::Skipped("P has no minimum".into()));
    };
    let lhs = n.in_theta_mask(0) || n.in_theta_mask(bit(z));
    let mid = n.is_round_mask(n.poset().full_mask());
    let rhs = n
        .poset()
        .upset_masks()
        .into_iter()
        .any(|u| u & bit(z) != 0 && n.is_round_mask(u));
    Ok(if lhs == mid && mid == rhs {
        Outcome::Pass
    } else {
        Outcome::Fail(format!("∅ or {{0}} in Θ: {lhs}; P round: {mid}; round up-set with 0: {rhs}"))
    })
}

pub fn spectrum_t1(n: &NearnessInstance) -> Result<Outcome> {
    let sp = n.spectrum()?;
    let pts = sp.point_masks();
    for (i, &a) in pts.iter().enumerate() {
        for &b in &pts[i + 1..] {
            if a & !b == 0 || b & !a == 0 {
                return Ok(Outcome::Fail(format!(
                    "points {} and {} are not separated",
                    n.poset().format_mask(a),
                    n.poset().format_mask(b)
                )));
            }
        }
    }
    Ok(Outcome::Pass)
}

pub fn faithful_rightarrow(n: &NearnessInstance) -> Result<Outcome> {
    let sp = n.spectrum()?;
    let table = n.leq_theta_table(PreorderFamily::ThetaLe)?;
    for p in 0..n.len() {
        for q in 0..n.len() {
            let sub = sp.point_masks().iter().all(|&r| r & bit(p) == 0 || r & bit(q) != 0);
            if (n.poset().le(p, q) && !table[p][q]) || (table[p][q] && !sub) {
                return Ok(Outcome::Fail(format!(
                    "pair ({}, {}): ≤ {}, ≤_Θ^≤ {}, Θ̂_p ⊆ Θ̂_q {}",
                    n.poset().name(p),
                    n.poset().name(q),
                    n.poset().le(p, q),
                    table[p][q],
                    sub
                )));
            }
        }
    }
    Ok(Outcome::Pass)
}

pub fn coinitial_covers(n: &NearnessInstance) -> Result<Outcome> {
    let sp = n.spectrum()?;
    Ok(verdict(
        subsets(n.poset().full_mask())
            .find(|&c| n.in_theta_le_mask(c) != sp.point_masks().iter().all(|&r| r & c != 0))
            .map(|c| format!("C = {}", n.poset().format_mask(c))),
    ))
}

pub fn preorder_subseteq(n: &NearnessInstance) -> Result<Outcome> {
    let sp = n.spectrum()?;
    let table = n.leq_theta_table(PreorderFamily::ThetaLe)?;
    for p in 0..n.len() {
        for q in 0..n.len() {
            let sub = sp.point_masks().iter().all(|&r| r & bit(p) == 0 || r & bit(q) != 0);
            if sub != table[p][q] {
                return Ok(Outcome::Fail(format!(
                    "pair ({}, {}): Θ̂_p ⊆ Θ̂_q {sub}, ≤_Θ^≤ {}",
                    n.poset().name(p),
                    n.poset().name(q),
                    table[p][q]
                )));
            }
        }
    }
    Ok(Outcome::Pass)
}

// ---- proximity ----

pub fn finite_near_lemma(n: &NearnessInstance) -> Result<Outcome> {
    let sp = n.spectrum()?;
    for s in subsets(n.poset().full_mask()) {
        let near = n.is_near_bool(&n.poset().set(s)?)?;
        let inside = sp.point_masks().iter().any(|&r| s & !r == 0);
        let lit = n.near_witness_mask(s).is_some();
        let unr = n.near_witness_unrestricted(s).is_some();
        if near != inside || near != lit || lit != unr {
            return Ok(Outcome::Fail(format!(
                "S = {}: near {near}, inside a point {inside}, down-set witness {lit}, any witness {unr}",
                n.poset().format_mask(s)
            )));
        }
    }
    Ok(Outcome::Pass)
}

pub fn near_bounded(n: &NearnessInstance) -> Result<Outcome> {
    given(n.is_directed_family(), "Θ is not directed", || {
        let p = n.poset();
        let zero = p.minimum();
        let zero_far = zero.map(|z| !n.near_mask(bit(z))).unwrap_or(false);
        for s in subsets(p.full_mask()) {
            if !n.near_mask(s) {
                continue;
            }
            let ok = (0..n.len()).any(|x| s & !p.up_mask(x) == 0 && !(zero_far && Some(x) == zero));
            if !ok {
                return Ok(Outcome::Fail(format!("near {} has no lower bound", p.format_mask(s))));
            }
        }
        Ok(Outcome::Pass)
    })
}

pub fn finite_near_bounded(n: &NearnessInstance) -> Result<Outcome> {
    given(
        n.is_directed_family() && n.is_weakly_admissible()?,
        "Θ is not directed and weakly admissible",
        || {
            let p = n.poset();
            let dot = n.dotted_mask()?;
            Ok(verdict(
                subsets(p.full_mask())
                    .find(|&s| n.near_mask(s) != bits(dot).any(|x| s & !p.up_mask(x) == 0))
                    .map(|s| format!("F = {}", p.format_mask(s))),
            ))
        },
    )
}

pub fn zero_near(n: &NearnessInstance) -> Result<Outcome> {
    let Some(z) = n.poset().minimum() else {
        return Ok(Outcome::Skipped("P has no minimum".into()));
    };
    let lhs = n.near_mask(bit(z));
    let rhs = n.in_theta_mask(bit(z)) && !n.in_theta_mask(0);
    Ok(if lhs == rhs {
        Outcome::Pass
    } else {
        Outcome::Fail(format!("{{0}} near {lhs}, {{0}} ∈ Θ ∌ ∅ {rhs}"))
    })
}

pub fn restrictions(n: &NearnessInstance) -> Result<Outcome> {
    for p in 0..n.len() {
        let r = n.restriction_mask(bit(p))?;
        for c in n.theta_star_masks(p)? {
            if !r.contains_mask(c) {
                return Ok(Outcome::Fail(format!(
                    "star {} at {} is not in Θ|{}",
                    n.poset().format_mask(c),
                    n.poset().name(p),
                    n.poset().name(p)
                )));
            }
        }
    }
    Ok(Outcome::Pass)
}

pub fn cover_patching(n: &NearnessInstance) -> Result<Outcome> {
    given(!n.theta_is_empty(), "Θ is empty", || {
        let r0 = n.restriction_mask(0)?;
        let rs = (0..n.len())
            .map(|p| n.restriction_mask(bit(p)))
            .collect::<Result<Vec<_>>>()?;
        Ok(verdict(
            subsets(n.poset().full_mask())
                .find(|&c| r0.contains_mask(c) != rs.iter().all(|r| r.contains_mask(c)))
                .map(|c| format!("C = {}", n.poset().format_mask(c))),
        ))
    })
}

/// Θ = ∅ gives Θ|∅ = ∅ while every Θ|p = P(P).
pub fn cover_patching_empty(n: &NearnessInstance) -> Result<Outcome> {
    given(n.theta_is_empty(), "Θ is not empty", || {
        let r0 = n.restriction_mask(0)?;
        let ok = r0.is_empty_family()
            && (0..n.len()).all(|p| n.restriction_mask(bit(p)).map(|r| r.is_full_family()).unwrap_or(false));
        Ok(if ok {
            Outcome::Pass
        } else {
            Outcome::Fail("Θ = ∅ counterexample not reproduced".into())
        })
    })
}

fn restricted_points(n: &NearnessInstance, s: Mask) -> Result<Vec<Mask>> {
    Ok(n.restricted_instance(s)?.spectrum()?.point_masks().to_vec())
}

pub fn p_closure(n: &NearnessInstance) -> Result<Outcome> {
    let sp = n.spectrum()?;
    let pts = sp.point_masks();
    for s in subsets(n.poset().full_mask()) {
        let cl = spectrum_closure(pts, &points_containing(pts, s));
        let mid = restricted_points(n, s)?;
        if !is_subset_of(&cl, &mid) || !is_subset_of(&mid, pts) {
            return Ok(Outcome::Fail(format!(
                "S = {}: cl {} , Θ̂(Θ|S) {}",
                n.poset().format_mask(s),
                fmt_family(n, &cl),
                fmt_family(n, &mid)
            )));
        }
    }
    Ok(Outcome::Pass)
}

pub fn non_degenerate_results(n: &NearnessInstance) -> Result<Outcome> {
    given(n.is_non_degenerate()?, "Θ is degenerate", || {
        let sp = n.spectrum()?;
        let pts = sp.point_masks();
        for f in subsets(n.poset().full_mask()) {
            let cl = spectrum_closure(pts, &points_containing(pts, f));
            let mid = restricted_points(n, f)?;
            if cl != mid {
                return Ok(Outcome::Fail(format!(
                    "F = {}: cl {} ≠ Θ̂(Θ|F) {}",
                    n.poset().format_mask(f),
                    fmt_family(n, &cl),
                    fmt_family(n, &mid)
                )));
            }
            let r = n.restriction_mask(f)?;
            // superset monotone in D, so minimal Cauchy D suffice
            for &d in r.cauchy_transversals() {
                if let Some(&x) = pts.iter().find(|&&x| !cl.contains(&x) && x & d == 0) {
                    return Ok(Outcome::Fail(format!(
                        "F = {}, D = {}: point {} outside cl and ⋃Θ̂_d",
                        n.poset().format_mask(f),
                        n.poset().format_mask(d),
                        n.poset().format_mask(x)
                    )));
                }
            }
        }
        Ok(Outcome::Pass)
    })
}

pub fn p_closure2(n: &NearnessInstance) -> Result<Outcome> {
    let sp = n.spectrum()?;
    let pts = sp.point_masks();
    let strict = n.is_directed_family() && n.is_non_degenerate()?;
    for p in 0..n.len() {
        let cl = spectrum_closure(pts, &points_containing(pts, bit(p)));
        let star = n.with_family(n.theta_star_masks(p)?, ThetaClosure::Listed);
        let mid = star.spectrum()?.point_masks().to_vec();
        if !is_subset_of(&cl, &mid) || !is_subset_of(&mid, pts) || (strict && cl != mid) {
            return Ok(Outcome::Fail(format!(
                "p = {}: cl {} , Θ̂(Θp) {}{}",
                n.poset().name(p),
                fmt_family(n, &cl),
                fmt_family(n, &mid),
                if strict { " (directed, non-degenerate)" } else { "" }
            )));
        }
    }
    Ok(Outcome::Pass)
}

pub fn auxiliary(n: &NearnessInstance) -> Result<Outcome> {
    let rel = n.below_relations()?;
    let p = n.poset();
    let k = n.len();
    for a in 0..k {
        for b in 0..k {
            let aux = (0..k).any(|a2| {
                (0..k).any(|b2| p.le(a, a2) && rel.below(a2, b2) && p.le(b2, b))
            });
            if aux && !rel.below(a, b) {
                return Ok(Outcome::Fail(format!("({}, {}) breaks the auxiliary law", p.name(a), p.name(b))));
            }
            if p.le(a, b) && !rel.lower(a, b) {
                return Ok(Outcome::Fail(format!("{} ≤ {} but not ⊴", p.name(a), p.name(b))));
            }
        }
    }
    let preorder = (0..k).all(|a| {
        rel.lower(a, a) && (0..k).all(|b| !rel.lower(a, b) || (0..k).all(|c| !rel.lower(b, c) || rel.lower(a, c)))
    });
    Ok(if preorder {
        Outcome::Pass
    } else {
        Outcome::Fail("⊴ is not a preorder".into())
    })
}

pub fn triangle_subset_leq(n: &NearnessInstance) -> Result<Outcome> {
    given(n.theta_in_order_covers()?, "Θ ⊄ C_≤(P)", || {
        let w = n.is_weakly_admissible()?;
        let t = n.below_relations()?.is_subset_of_order();
        Ok(if w == t {
            Outcome::Pass
        } else {
            Outcome::Fail(format!("weakly admissible {w}, ⊲ ⊆ ≤ {t}"))
        })
    })
}

pub fn regular_linked_round(n: &NearnessInstance) -> Result<Outcome> {
    let rel = n.below_relations()?;
    for s in subsets(n.poset().full_mask()) {
        if rel.is_regular_mask(s) && n.is_linked_mask(s)? && !n.is_round_mask(s) {
            return Ok(Outcome::Fail(format!("{} is ⊲-regular, linked, not round", n.poset().format_mask(s))));
        }
    }
    Ok(Outcome::Pass)
}

pub fn regular_covers(n: &NearnessInstance) -> Result<Outcome> {
    given(admissible(n)?, "Θ is not admissible", || {
        let rel = n.below_relations()?;
        Ok(verdict(
            order_covers(n.poset())
                .into_iter()
                .find(|&c| !is_order_cover_mask(n.poset(), rel.prime_mask(c)))
                .map(|c| format!("C = {} but C^▷ is not a ≤-cover", n.poset().format_mask(c))),
        ))
    })
}

pub fn directed_transitive(n: &NearnessInstance) -> Result<Outcome> {
    given(n.is_directed_family(), "Θ is not directed", || {
        Ok(if n.below_relations()?.is_transitive() {
            Outcome::Pass
        } else {
            Outcome::Fail("⊲ is not transitive".into())
        })
    })
}

pub fn regular_admissible(n: &NearnessInstance) -> Result<Outcome> {
    given(
        n.is_directed_family() && n.is_star_regular()?,
        "Θ is not star-regular and directed",
        || {
            let rel = n.below_relations()?;
            let a = is_admissible(n, &rel, LubReading::Literal);
            let e = order_equals_lower(n, &rel);
            Ok(if a == e {
                Outcome::Pass
            } else {
                Outcome::Fail(format!("admissible {a}, ≤ = ⊴ {e}"))
            })
        },
    )
}

pub fn star_regular_spectrum(n: &NearnessInstance) -> Result<Outcome> {
    let rel = n.below_relations()?;
    given(
        n.is_directed_family() && rel.is_subset_of_order() && n.is_star_regular()?,
        "Θ is not star-regular, directed with ⊲ ⊆ ≤",
        || {
            let sp = n.spectrum()?;
            let filters = n.cauchy_below_filters(&rel)?;
            Ok(if sp.point_masks() == filters.as_slice() {
                Outcome::Pass
            } else {
                Outcome::Fail(format!(
                    "Θ̂ {} vs Cauchy ⊲-filters in Ṗ {}",
                    fmt_family(n, sp.point_masks()),
                    fmt_family(n, &filters)
                ))
            })
        },
    )
}

pub fn admissible_directed_regularisation(n: &NearnessInstance) -> Result<Outcome> {
    given(
        n.is_directed_family() && admissible(n)?,
        "Θ is not admissible and directed",
        || {
            let rel = n.below_relations()?;
            let reg = n.regularise(Priming::StageLocal)?.instance;
            let filters = n.cauchy_below_filters(&rel)?;
            let pts = reg.spectrum()?.point_masks().to_vec();
            let ra = admissible(&reg)?;
            let rd = reg.is_directed_family();
            Ok(if ra && rd && pts == filters {
                Outcome::Pass
            } else {
                Outcome::Fail(format!(
                    "Θ^R admissible {ra}, directed {rd}, Θ̂(Θ^R) {} vs {}",
                    fmt_family(n, &pts),
                    fmt_family(n, &filters)
                ))
            })
        },
    )
}

// ---- admissibility ----

pub fn wallman_weakly(n: &NearnessInstance) -> Result<Outcome> {
    given(is_wallman_admissible(n)?, "Θ is not Wallman admissible", || {
        Ok(if n.is_weakly_admissible()? {
            Outcome::Pass
        } else {
            Outcome::Fail("Wallman admissible but not weakly admissible".into())
        })
    })
}

pub fn pp_wallman(n: &NearnessInstance) -> Result<Outcome> {
    given(
        n.is_upset_family()? && is_picado_pultr_admissible(n)?,
        "Θ is not a Picado-Pultr admissible up-set",
        || {
            Ok(if is_wallman_admissible(n)? {
                Outcome::Pass
            } else {
                Outcome::Fail("Picado-Pultr admissible up-set but not Wallman admissible".into())
            })
        },
    )
}

fn theta_covers_outcome(n: &NearnessInstance) -> Result<Outcome> {
    Ok(verdict(
        n.member_masks()?
            .into_iter()
            .find(|&c| !is_order_cover_mask(n.poset(), c))
            .map(|c| format!("{} ∈ Θ is not a ≤-cover", n.poset().format_mask(c))),
    ))
}

pub fn picado_pultr_covers(n: &NearnessInstance) -> Result<Outcome> {
    given(
        n.is_upset_family()? && is_picado_pultr_admissible(n)?,
        "Θ is not a Picado-Pultr admissible up-set",
        || theta_covers_outcome(n),
    )
}

pub fn wallman_covers(n: &NearnessInstance) -> Result<Outcome> {
    given(
        n.is_filter_family()? && is_wallman_admissible(n)?,
        "Θ is not a Wallman admissible filter",
        || theta_covers_outcome(n),
    )
}

pub fn wallman_forms(n: &NearnessInstance) -> Result<Outcome> {
    let w = wallman_equivalent_forms(n)?;
    Ok(if w.agree() {
        Outcome::Pass
    } else {
        Outcome::Fail(w.to_string())
    })
}

pub fn subset_closed_theta(n: &NearnessInstance) -> Result<Outcome> {
    given(is_subset_closed(n)?, "Θ is not ⊆-closed", || {
        Ok(if is_leq_theta_closed(n)? {
            Outcome::Pass
        } else {
            Outcome::Fail("⊆-closed Θ is not ≤_Θ-closed".into())
        })
    })
}

pub fn nearness_properties1(n: &NearnessInstance) -> Result<Outcome> {
    let rel = n.below_relations()?;
    given(
        n.is_directed_family() && order_equals_lower(n, &rel),
        "Θ is not directed with ⊴ = ≤",
        || theta_covers_outcome(n),
    )
}

pub fn directed_admissible_faithful(n: &NearnessInstance) -> Result<Outcome> {
    given(
        n.is_directed_family() && admissible(n)?,
        "Θ is not directed and admissible",
        || {
            let sp = n.spectrum()?;
            for p in 0..n.len() {
                for q in 0..n.len() {
                    let sub = sp.point_masks().iter().all(|&r| r & bit(p) == 0 || r & bit(q) != 0);
                    if sub != n.poset().le(p, q) {
                        return Ok(Outcome::Fail(format!(
                            "pair ({}, {}): ≤ {}, Θ̂_p ⊆ Θ̂_q {sub}",
                            n.poset().name(p),
                            n.poset().name(q),
                            n.poset().le(p, q)
                        )));
                    }
                }
            }
            Ok(Outcome::Pass)
        },
    )
}

pub fn thetap_nonempty(n: &NearnessInstance) -> Result<Outcome> {
    given(
        n.is_filter_family()? && n.is_weakly_admissible()?,
        "Θ is not a weakly admissible filter",
        || {
            for p in 0..n.len() {
                if n.poset().up_mask(p) != n.poset().full_mask() && n.theta_star_masks(p)?.contains(&0) {
                    return Ok(Outcome::Fail(format!("∅ ∈ Θ{}", n.poset().name(p))));
                }
            }
            Ok(Outcome::Pass)
        },
    )
}

pub fn admissible_pp(n: &NearnessInstance) -> Result<Outcome> {
    given(
        n.is_filter_family()? && admissible(n)?,
        "Θ is not an admissible filter",
        || {
            Ok(if is_picado_pultr_admissible(n)? {
                Outcome::Pass
            } else {
                Outcome::Fail("admissible filter but not Picado-Pultr admissible".into())
            })
        },
    )
}

pub fn directed_basis(n: &NearnessInstance) -> Result<Outcome> {
    given(n.is_directed_family(), "Θ is not directed", || {
        let sp = n.spectrum()?;
        let pts = sp.point_masks();
        for &r in pts {
            if r == 0 {
                return Ok(Outcome::Fail("∅ is a point outside every Θ̂_p".into()));
            }
            for p in bits(r) {
                for q in bits(r) {
                    let ok = bits(r).any(|x| {
                        pts.iter()
                            .all(|&s| s & bit(x) == 0 || (s & bit(p) != 0 && s & bit(q) != 0))
                    });
                    if !ok {
                        return Ok(Outcome::Fail(format!(
                            "no Θ̂_r inside Θ̂_{} ∩ Θ̂_{} around {}",
                            n.poset().name(p),
                            n.poset().name(q),
                            n.poset().format_mask(r)
                        )));
                    }
                }
            }
        }
        Ok(Outcome::Pass)
    })
}

pub fn directed_replacement(n: &NearnessInstance) -> Result<Outcome> {
    if n.len() > n.bounds().replacement {
        return Ok(Outcome::Skipped(format!("|P| above the replacement bound {}", n.bounds().replacement)));
    }
    let r = n.directed_replacement(ReplacementReading::LeClosure)?;
    Ok(if r.holds() {
        Outcome::Pass
    } else {
        Outcome::Fail(format!(
            "Θ̂^F has {} points, {{F(R)}} has {}",
            r.points.len(),
            r.expected.len()
        ))
    })
}

/// Θ^F read literally against Θ; the equation needs Θ = Θ^≤ there.
pub fn directed_replacement_literal(n: &NearnessInstance) -> Result<Outcome> {
    if n.len() > n.bounds().replacement {
        return Ok(Outcome::Skipped(format!("|P| above the replacement bound {}", n.bounds().replacement)));
    }
    let r = n.directed_replacement(ReplacementReading::Literal)?;
    Ok(Outcome::Info(if r.holds() {
        "literal Θ^F gives the same spectrum".into()
    } else {
        format!("literal Θ^F has {} points against {}", r.points.len(), r.expected.len())
    }))
}

/// Θ^R under both priming readings; never a failure.
pub fn priming_probe(n: &NearnessInstance) -> Result<Outcome> {
    let a = n.regularise(Priming::StageLocal)?.instance;
    let b = n.regularise(Priming::Original)?.instance;
    let mut ga = a.generator_masks().to_vec();
    let mut gb = b.generator_masks().to_vec();
    ga.sort_unstable();
    gb.sort_unstable();
    Ok(Outcome::Info(if ga == gb {
        "priming readings agree".into()
    } else {
        format!("priming readings diverge: {} vs {}", fmt_family(n, &ga), fmt_family(n, &gb))
    }))
}

type InstanceCheck = fn(&NearnessInstance) -> Result<Outcome>;

/// Every instance-level proposition, in report order.
pub const INSTANCE_CHECKS: &[(&str, InstanceCheck)] = &[
    ("RCU<=>MleqC", rcu_minimal_cauchy),
    ("degenerate equations", degenerate_equations),
    ("Upset=>Upset", upset_upset),
    ("Directed=>Directed", directed_directed),
    ("Filter=>Filter", filter_filter),
    ("CauchyUpsetRound", cauchy_upset_round),
    ("Avoiding0", avoiding_zero),
    ("T1", spectrum_t1),
    ("FaithfulRightarrow", faithful_rightarrow),
    ("CoinitialCovers", coinitial_covers),
    ("ThetaPreorder=subseteq", preorder_subseteq),
    ("finite near lemma", finite_near_lemma),
    ("Near=>Bounded", near_bounded),
    ("FiniteNearBounded", finite_near_bounded),
    ("0near", zero_near),
    ("Restrictions", restrictions),
    ("CoverPatching", cover_patching),
    ("CoverPatching (Θ = ∅)", cover_patching_empty),
    ("pClosure", p_closure),
    ("Non-DegenerateResults", non_degenerate_results),
    ("pClosure2", p_closure2),
    ("Auxiliary", auxiliary),
    ("TriangleSubsetLeq", triangle_subset_leq),
    ("RegularLinked=>Round", regular_linked_round),
    ("RegularCovers", regular_covers),
    ("Directed=>Transitive", directed_transitive),
    ("Regular=>Admissible", regular_admissible),
    ("StarRegularSpectrum", star_regular_spectrum),
    ("AdmissibleDirectedRegularisation", admissible_directed_regularisation),
    ("Wallman=>Weakly", wallman_weakly),
    ("PP=>Wallman", pp_wallman),
    ("PicadoPultrCovers", picado_pultr_covers),
    ("WallmanCovers", wallman_covers),
    ("Wallman (three forms)", wallman_forms),
    ("SubsetClosedTheta", subset_closed_theta),
    ("NearnessProperties1", nearness_properties1),
    ("CountableDirectedAdmissible=>Faithful", directed_admissible_faithful),
    ("ThetapNonempty", thetap_nonempty),
    ("Admissible=>PPAdmissible", admissible_pp),
    ("Directed=>Basis", directed_basis),
    ("directed replacement", directed_replacement),
    ("directed replacement (literal Θ)", directed_replacement_literal),
    ("regularisation priming", priming_probe),
];

pub fn check_instance(n: &NearnessInstance) -> Result<Suite> {
    let mut s = Suite::default();
    for (name, f) in INSTANCE_CHECKS {
        s.push(*name, f(n)?);
    }
    Ok(s)
}

// ---- spaces ----

/// x ↦ P_x is a bijection onto Θ̂ carrying each p to Θ̂_p.
fn homeomorphism_failure(s: &FiniteSpace, theta: &NearnessInstance) -> Result<Option<String>> {
    let sp = theta.spectrum()?;
    let mut images: Vec<Mask> = (0..s.n_points()).map(|x| s.point_nbhd(x)).collect();
    images.sort_unstable();
    images.dedup();
    if images.len() != s.n_points() || images.as_slice() != sp.point_masks() {
        return Ok(Some(format!(
            "P_x images {} vs spectrum {}",
            fmt_family(theta, &images),
            fmt_family(theta, sp.point_masks())
        )));
    }
    Ok(None)
}

/// Sampled coinitial Θ, trying successive seeds from `seed`.
pub fn coinitial_sample(s: &FiniteSpace, seed: u64) -> Result<Option<(NearnessInstance, u64)>> {
    let total = s.all_covers()?.len();
    let k = (3 * total).div_ceil(4).max(1);
    for attempt in 0..64 {
        let sd = seed.wrapping_add(attempt);
        match s.cover_family(CoverMode::Sample { k, seed: sd }) {
            Ok(inst) => return Ok(Some((inst, sd))),
            Err(NearnessError::NotCoinitial(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

fn round_trip(s: &FiniteSpace, theta: &NearnessInstance, suite: &mut Suite, label: &str) -> Result<()> {
    let rep = s.roundtrip_t1(theta)?;
    if !rep.hypotheses_hold() {
        for n in ["T1Recovery", "CauchyCovers", "SubbasisOrder"] {
            suite.push(format!("{n}{label}"), Outcome::Skipped(rep.notes.join("; ")));
        }
        return Ok(());
    }
    let bij = if rep.bijection && rep.subbasis_match {
        Outcome::Pass
    } else {
        Outcome::Fail(rep.notes.join("; "))
    };
    suite.push(format!("T1Recovery{label}"), bij);
    suite.push(
        format!("CauchyCovers{label}"),
        if rep.cauchy_covers {
            Outcome::Pass
        } else {
            Outcome::Fail("Θ ⊆ C_X(P) disagrees with every P_x Θ-Cauchy".into())
        },
    );
    suite.push(
        format!("SubbasisOrder{label}"),
        if rep.subbasis_order {
            Outcome::Pass
        } else {
            Outcome::Fail("p ⊆ q differs from p ≤_Θ q".into())
        },
    );
    Ok(())
}

fn px_regular(s: &FiniteSpace, rel: &BelowRelation) -> bool {
    (0..s.n_points()).all(|x| rel.is_regular_mask(s.point_nbhd(x)))
}

/// (Θ*p)^≤ = (Θp)^≤ = C_cl(p)(P), as membership predicates.
fn local_star_failure(s: &FiniteSpace, theta: &NearnessInstance) -> Result<Option<String>> {
    let members = theta.member_masks()?;
    let po = theta.poset();
    let full = full_mask(s.sets().len());
    for (p, &pm) in s.sets().iter().enumerate() {
        let concrete: Vec<Mask> = members.iter().map(|&c| s.star_concrete(c, pm)).collect();
        let abstract_: Vec<Mask> = members
            .iter()
            .map(|&c| theta.star_mask(c, p))
            .collect::<Result<_>>()?;
        let cl = s.closure(pm);
        for c in 0..=full {
            let a = concrete.iter().any(|&d| po.refines_mask(d, c));
            let b = abstract_.iter().any(|&d| po.refines_mask(d, c));
            let e = s.covers(cl, c);
            if a != b || b != e {
                return Ok(Some(format!(
                    "p = {}, C = {}: (Θ*p)^≤ {a}, (Θp)^≤ {b}, C_cl(p) {e}",
                    s.names()[p],
                    po.format_mask(c)
                )));
            }
        }
    }
    Ok(None)
}

/// Concrete-space propositions for `s` with Θ (default C_X(P)).
pub fn check_space(s: &FiniteSpace, theta: Option<&NearnessInstance>, seed: u64) -> Result<Suite> {
    let mut suite = Suite::default();
    let all = s.cover_family(CoverMode::All)?;
    let theta = theta.unwrap_or(&all);
    let t1 = s.is_t1_family();
    let poset = s.family_poset()?;

    round_trip(s, theta, &mut suite, "")?;
    match coinitial_sample(s, seed)? {
        Some((inst, sd)) => {
            round_trip(s, &inst, &mut suite, &format!(" (sample seed {sd})"))?;
        }
        None => suite.push(
            "T1Recovery (sample)",
            Outcome::Skipped(format!("no coinitial sample from seed {seed}")),
        ),
    }

    let ni = s.near_equals_intersection()?;
    let (near, restr) = if !ni.t1 {
        let sk = Outcome::Skipped("family is not T1".into());
        (sk.clone(), sk)
    } else {
        (
            verdict(ni.near_mismatches.first().map(|&m| format!("S = {}", poset.format_mask(m)))),
            verdict(ni.restriction_mismatches.first().map(|&m| format!("S = {}", poset.format_mask(m)))),
        )
    };
    suite.push("NearForAllCovers", near);
    suite.push("Theta|pForAllCovers", restr);

    suite.push(
        "XCompatible",
        given(t1 && s.is_basis(), "family is not a T1 basis", || {
            Ok(if s.is_compatible(&all)? {
                Outcome::Pass
            } else {
                Outcome::Fail("C_X(P) is not compatible".into())
            })
        })?,
    );

    let compatible = s.is_compatible(theta)?;
    let lu = s.is_locally_uniform(theta)?;
    let base = s.star_sets_form_base(theta)?;
    suite.push(
        "LocallyUniform<=>Base",
        if (lu && compatible) == base {
            Outcome::Pass
        } else {
            Outcome::Fail(format!("locally uniform {lu}, compatible {compatible}, star sets a base {base}"))
        },
    );
    let rel = theta.below_relations()?;
    let directed = theta.is_directed_family();
    suite.push(
        "LocallyUniform<=>xRegular",
        given(compatible && directed, "Θ is not compatible and directed", || {
            let r = px_regular(s, &rel);
            Ok(if lu == r {
                Outcome::Pass
            } else {
                Outcome::Fail(format!("locally uniform {lu}, every P_x ⊲-regular {r}"))
            })
        })?,
    );
    suite.push(
        "CompatiblePxRegular=>Admissible",
        given(compatible && px_regular(s, &rel), "Θ is not compatible with ⊲-regular P_x", || {
            Ok(if is_admissible(theta, &rel, LubReading::Literal) {
                Outcome::Pass
            } else {
                Outcome::Fail("compatible with ⊲-regular P_x but not admissible".into())
            })
        })?,
    );

    let covers = s.all_covers()?;
    let ocovers = order_covers(&poset);
    suite.push(
        "XCover=>leqCover",
        given(s.is_basis(), "family is not a basis", || {
            Ok(verdict(
                covers
                    .iter()
                    .find(|c| !ocovers.contains(c))
                    .map(|&c| format!("{} covers X but is not a ⊆-cover", poset.format_mask(c))),
            ))
        })?,
    );
    suite.push(
        "XCover<=leqCover",
        given(s.is_td_family(), "family is not T_D", || {
            Ok(verdict(
                ocovers
                    .iter()
                    .find(|c| !covers.contains(c))
                    .map(|&c| format!("{} is a ⊆-cover but does not cover X", poset.format_mask(c))),
            ))
        })?,
    );

    let local_hyp = t1
        && s.n_points() > 0
        && directed
        && s.theta_within_covers(theta)?
        && s.is_star_coinitial(theta)?;
    suite.push(
        "LocalT1Recovery",
        given(local_hyp, "needs T1, X ≠ ∅ and directed *-coinitial Θ ⊆ C_X(P)", || {
            if !s.is_basis() {
                return Ok(Outcome::Fail("family is not a basis".into()));
            }
            if let Some(w) = homeomorphism_failure(s, theta)? {
                return Ok(Outcome::Fail(w));
            }
            Ok(verdict(local_star_failure(s, theta)?))
        })?,
    );
    suite.push(
        "T_D cardinality",
        given(t1 && s.is_td_family() && s.is_basis(), "family is not a T1, T_D basis", || {
            Ok(if s.sets().len() >= s.n_points() {
                Outcome::Pass
            } else {
                Outcome::Fail(format!("|P| = {} < |X| = {}", s.sets().len(), s.n_points()))
            })
        })?,
    );
    suite.push(
        "finite T1 => discrete",
        given(t1, "family is not T1", || {
            Ok(if s.topology().len() == 1 << s.n_points() {
                Outcome::Pass
            } else {
                Outcome::Fail("generated topology is not discrete".into())
            })
        })?,
    );
    suite.push("complete", Outcome::Info(format!("{}", s.is_complete(theta)?)));
    Ok(suite)
}

// ---- frames ----

pub fn check_frame(f: &FiniteFrame, theta: Option<&NearnessInstance>) -> Result<Suite> {
    let mut suite = Suite::default();
    let p = f.poset();
    let k = f.len();
    suite.push(
        "FrameCovers",
        verdict(f.frame_covers_violation().map(|c| format!("C = {}", p.format_mask(c)))),
    );
    let residuation = (0..k).find_map(|a| {
        (0..k).find_map(|b| {
            (0..k)
                .find(|&r| p.le(r, f.heyting(a, b)) != p.le(f.meet(r, a), b))
                .map(|r| format!("r = {}, p = {}, q = {}", p.name(r), p.name(a), p.name(b)))
        })
    });
    suite.push("residuation", verdict(residuation));
    let mut parts = Vec::new();
    for x in 0..k {
        parts.push(f.closed_sublocale(x));
        parts.push(f.open_sublocale(x));
    }
    let laws = parts.iter().all(|a| {
        f.is_sublocale_mask(a.carrier.bits())
            && f.sublocale_join(&[a.clone(), a.clone()]) == *a
            && parts.iter().all(|b| {
                let ab = f.sublocale_join(&[a.clone(), b.clone()]);
                ab == f.sublocale_join(&[b.clone(), a.clone()])
                    && parts.iter().all(|c| {
                        f.sublocale_join(&[ab.clone(), c.clone()])
                            == f.sublocale_join(&[a.clone(), f.sublocale_join(&[b.clone(), c.clone()])])
                    })
            })
    });
    suite.push(
        "sublocale joins",
        if laws {
            Outcome::Pass
        } else {
            Outcome::Fail("join laws fail on closed and open sublocales".into())
        },
    );
    if let Some(n) = theta {
        let rep = f.pp_equiv_check(n)?;
        let out = if !rep.theta_is_upset {
            Outcome::Skipped("Θ is not an up-set".into())
        } else if rep.holds() {
            Outcome::Pass
        } else {
            Outcome::Fail(match rep.witness {
                Some((x, o, j)) => format!(
                    "PP {} vs RHS {}; at p = {}: 𝔬(p) = {}, ⋁𝔠(q) = {}",
                    rep.lhs,
                    rep.rhs,
                    p.name(x),
                    p.format_mask(o),
                    p.format_mask(j)
                ),
                None => format!("PP {} vs RHS {}", rep.lhs, rep.rhs),
            })
        };
        suite.push("PPEquiv", out);
    }
    Ok(suite)
}
