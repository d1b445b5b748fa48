//! Finite frames, Heyting implication and sublocales.

use std::sync::Arc;

use crate::admissibility::{is_order_cover_mask, is_picado_pultr_admissible};
use crate::error::{NearnessError, Result};
use crate::nearness::NearnessInstance;
use crate::poset::{bit, bits, ElementSet, Mask, Poset};

/// A finite distributive lattice with its operation tables.
#[derive(Debug, Clone)]
pub struct FiniteFrame {
    poset: Arc<Poset>,
    meet: Vec<Vec<usize>>,
    join: Vec<Vec<usize>>,
    imp: Vec<Vec<usize>>,
    bottom: usize,
    top: usize,
}

/// Greatest element of `m`, if `m` has one.
fn greatest(p: &Poset, m: Mask) -> Option<usize> {
    bits(m).find(|&g| m & !p.down_mask(g) == 0)
}

fn least(p: &Poset, m: Mask) -> Option<usize> {
    bits(m).find(|&g| m & !p.up_mask(g) == 0)
}

impl FiniteFrame {
    pub fn new(poset: Arc<Poset>) -> Result<Self> {
        let n = poset.len();
        if n == 0 {
            return Err(NearnessError::NotAFrame("empty poset has no top".into()));
        }
        let mut meet = vec![vec![0; n]; n];
        let mut join = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                meet[a][b] = greatest(&poset, poset.down_mask(a) & poset.down_mask(b)).ok_or_else(|| {
                    NearnessError::NotAFrame(format!("no meet of {} and {}", poset.name(a), poset.name(b)))
                })?;
                join[a][b] = least(&poset, poset.up_mask(a) & poset.up_mask(b)).ok_or_else(|| {
                    NearnessError::NotAFrame(format!("no join of {} and {}", poset.name(a), poset.name(b)))
                })?;
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if meet[a][join[b][c]] != join[meet[a][b]][meet[a][c]] {
                        return Err(NearnessError::NotAFrame(format!(
                            "not distributive at {}, {}, {}",
                            poset.name(a),
                            poset.name(b),
                            poset.name(c)
                        )));
                    }
                }
            }
        }
        let bottom = poset.minimum().expect("finite lattice has a minimum");
        let top = poset.maximum().expect("finite lattice has a maximum");
        let mut imp = vec![vec![0; n]; n];
        for p in 0..n {
            for q in 0..n {
                let r = (0..n)
                    .filter(|&r| poset.le(meet[r][p], q))
                    .fold(0, |acc, r| acc | bit(r));
                imp[p][q] = greatest(&poset, r).ok_or_else(|| {
                    NearnessError::NotAFrame(format!("no implication {} → {}", poset.name(p), poset.name(q)))
                })?;
            }
        }
        Ok(FiniteFrame {
            poset,
            meet,
            join,
            imp,
            bottom,
            top,
        })
    }

    pub fn poset(&self) -> &Arc<Poset> {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }

    pub fn heyting(&self, p: usize, q: usize) -> usize {
        self.imp[p][q]
    }

    pub fn meet_all(&self, m: Mask) -> usize {
        bits(m).fold(self.top, |acc, x| self.meet[acc][x])
    }

    pub fn join_all(&self, m: Mask) -> usize {
        bits(m).fold(self.bottom, |acc, x| self.join[acc][x])
    }

    /// All meets of subsets of `u`, the empty meet included.
    pub fn meet_closure(&self, u: Mask) -> Mask {
        let mut s = u | bit(self.top);
        loop {
            let mut next = s;
            for a in bits(s) {
                for b in bits(s) {
                    next |= bit(self.meet[a][b]);
                }
            }
            if next == s {
                return s;
            }
            s = next;
        }
    }

    pub fn closed_sublocale(&self, p: usize) -> Sublocale {
        Sublocale {
            carrier: self.poset.set_unchecked(self.poset.up_mask(p)),
        }
    }

    pub fn open_sublocale(&self, p: usize) -> Sublocale {
        let m = (0..self.len()).fold(0, |acc, q| acc | bit(self.imp[p][q]));
        Sublocale {
            carrier: self.poset.set_unchecked(m),
        }
    }

    pub fn sublocale_join(&self, parts: &[Sublocale]) -> Sublocale {
        let u = parts.iter().fold(0, |acc, s| acc | s.carrier.bits());
        Sublocale {
            carrier: self.poset.set_unchecked(self.meet_closure(u)),
        }
    }

    /// Closed under subset meets and under p → s.
    pub fn is_sublocale_mask(&self, s: Mask) -> bool {
        self.meet_closure(s) == s
            && bits(s).all(|x| (0..self.len()).all(|p| s & bit(self.imp[p][x]) != 0))
    }

    pub fn is_sublocale(&self, s: &ElementSet) -> Result<bool> {
        Ok(self.is_sublocale_mask(self.poset.check(s)?))
    }

    /// Q = {q : ∃C∈Θ (C∖q^≥ ≤ p)}
    pub fn q_set(&self, members: &[Mask], p: usize) -> Mask {
        (0..self.len())
            .filter(|&q| {
                members
                    .iter()
                    .any(|&c| self.poset.refines_mask(c & !self.poset.down_mask(q), bit(p)))
            })
            .fold(0, |acc, q| acc | bit(q))
    }

    /// Both sides of the Picado-Pultr characterisation for an up-set Θ.
    pub fn pp_equiv_check(&self, n: &NearnessInstance) -> Result<PpEquivReport> {
        if n.poset().id() != self.poset.id() {
            return Err(NearnessError::InstanceMismatch);
        }
        let mut rep = PpEquivReport {
            theta_is_upset: n.is_upset_family()?,
            ..Default::default()
        };
        if !rep.theta_is_upset {
            return Ok(rep);
        }
        let members = n.member_masks()?;
        rep.lhs = is_picado_pultr_admissible(n)?;
        rep.theta_in_covers = members.iter().all(|&c| is_order_cover_mask(&self.poset, c));
        rep.equation = true;
        rep.working_form_agrees = true;
        for p in 0..self.len() {
            let q = self.q_set(&members, p);
            let open = self.open_sublocale(p).carrier.bits();
            let closed: Vec<Sublocale> = bits(q).map(|x| self.closed_sublocale(x)).collect();
            let joined = self.sublocale_join(&closed).carrier.bits();
            let fixed = (0..self.len())
                .filter(|&r| self.imp[p][r] == r)
                .fold(0, |acc, r| acc | bit(r));
            let meets_of_q = self.meet_closure(q);
            if (fixed == meets_of_q) != (open == joined) || fixed != open {
                rep.working_form_agrees = false;
            }
            if open != joined && rep.equation {
                rep.equation = false;
                rep.witness = Some((p, open, joined));
            }
        }
        rep.rhs = rep.theta_in_covers && rep.equation;
        Ok(rep)
    }

    /// C_≤(P) = {C : ⋁C = 1}; first subset where they differ.
    pub fn frame_covers_violation(&self) -> Option<Mask> {
        (0..=self.poset.full_mask())
            .find(|&c| is_order_cover_mask(&self.poset, c) != (self.join_all(c) == self.top))
    }
}

/// A set of frame elements closed under meets and implications.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sublocale {
    pub carrier: ElementSet,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PpEquivReport {
    pub theta_is_upset: bool,
    /// Picado-Pultr admissible.
    pub lhs: bool,
    pub theta_in_covers: bool,
    /// 𝔬(p) = ⋁_{q∈Q} 𝔠(q) for every p.
    pub equation: bool,
    pub rhs: bool,
    /// {r : r = p→r} = 𝔬(p), and it equals the meets of Q exactly when the equation holds.
    pub working_form_agrees: bool,
    /// (p, 𝔬(p), ⋁𝔠(q)) at the first failure of the equation.
    pub witness: Option<(usize, Mask, Mask)>,
}

impl PpEquivReport {
    pub fn holds(&self) -> bool {
        !self.theta_is_upset || (self.lhs == self.rhs && self.working_form_agrees)
    }
}
