//! The directed replacement Θ^F on the proset of subsets of P.

use crate::error::Result;
use crate::nearness::NearnessInstance;
use crate::poset::{bit, Mask};

/// Which family the Φ-Cauchy sets C must land in for Φ ∈ Θ^F.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ReplacementReading {
    /// C ∈ Θ, as written.
    #[default]
    Literal,
    /// C ∈ Θ^≤.
    LeClosure,
}

/// Subset of F(P) for |P| ≤ 8, one bit per subset of P.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Family(pub [u64; 4]);

impl PartialOrd for Family {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Family {
    // numeric order of the membership bit-vector
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.iter().rev().cmp(other.0.iter().rev())
    }
}

impl Family {
    pub fn contains(&self, f: Mask) -> bool {
        self.0[(f >> 6) as usize] & (1 << (f & 63)) != 0
    }

    pub fn insert(&mut self, f: Mask) {
        self.0[(f >> 6) as usize] |= 1 << (f & 63);
    }

    pub fn is_subset(&self, o: &Family) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(a, b)| a & !b == 0)
    }

    pub fn complement_within(&self, m: usize) -> Family {
        let mut out = Family::default();
        for f in 0..m as Mask {
            if !self.contains(f) {
                out.insert(f);
            }
        }
        out
    }

    pub fn members(&self, m: usize) -> impl Iterator<Item = Mask> + '_ {
        (0..m as Mask).filter(move |&f| self.contains(f))
    }

    /// F(R): every subset of R.
    pub fn powerset_of(r: Mask) -> Family {
        let mut out = Family::default();
        let mut s = r;
        loop {
            out.insert(s);
            if s == 0 {
                return out;
            }
            s = (s - 1) & r;
        }
    }
}

/// The proset (F(P), ≤^F), Θ^F and the spectrum comparison.
#[derive(Debug, Clone)]
pub struct DirectedReplacement {
    n: usize,
    // row F holds {G : G ≤^F F}
    below: Vec<Family>,
    theta: Vec<bool>,
    pub reading: ReplacementReading,
    /// Θ̂^F, from the minimal Cauchy up-sets of the proset.
    pub points: Vec<Family>,
    /// {F(R) : R ∈ Θ̂}.
    pub expected: Vec<Family>,
    /// Literal round Cauchy up-set enumeration, when |P| ≤ 3.
    pub literal_points: Option<Vec<Family>>,
}

impl DirectedReplacement {
    pub fn build(inst: &NearnessInstance, reading: ReplacementReading) -> Result<Self> {
        let n = inst.len();
        inst.bounds().check_replacement("directed replacement", n)?;
        let m = 1usize << n;
        // M(F) = ⋂_{f∈F} Θ^{≤f}
        let mf: Vec<Family> = (0..m as Mask)
            .map(|f| {
                let mut out = Family::default();
                for r in 0..m as Mask {
                    if crate::poset::bits(f).all(|x| inst.in_theta_le_mask(r | bit(x))) {
                        out.insert(r);
                    }
                }
                out
            })
            .collect();
        let below: Vec<Family> = (0..m)
            .map(|f| {
                let mut out = Family::default();
                for g in 0..m {
                    if mf[g].is_subset(&mf[f]) {
                        out.insert(g as Mask);
                    }
                }
                out
            })
            .collect();
        let theta: Vec<bool> = (0..m as Mask)
            .map(|c| match reading {
                ReplacementReading::Literal => inst.in_theta_mask(c),
                ReplacementReading::LeClosure => inst.in_theta_le_mask(c),
            })
            .collect();
        let mut rep = DirectedReplacement {
            n,
            below,
            theta,
            reading,
            points: Vec::new(),
            expected: Vec::new(),
            literal_points: None,
        };
        rep.points = rep.minimal_cauchy_upsets();
        let mut expected: Vec<Family> = inst
            .spectrum()?
            .point_masks()
            .iter()
            .map(|&r| Family::powerset_of(r))
            .collect();
        expected.sort();
        rep.expected = expected;
        if n <= 3 {
            rep.literal_points = Some(rep.literal_spectrum());
        }
        Ok(rep)
    }

    fn m(&self) -> usize {
        1 << self.n
    }

    pub fn leq(&self, f: Mask, g: Mask) -> bool {
        self.below[g as usize].contains(f)
    }

    /// Φ ∈ Θ^F: every C ⊆ P meeting all members of Φ lies in Θ (or Θ^≤).
    pub fn in_theta_f(&self, phi: &Family) -> bool {
        let m = self.m();
        (0..m as Mask).all(|c| !phi.members(m).all(|f| f & c != 0) || self.theta[c as usize])
    }

    // Cauchy up-sets are complements of down-sets D ∉ Θ^F; such D sit inside
    // I(C) = {F : every G ≤^F F meets C} for some C ∉ Θ
    fn minimal_cauchy_upsets(&self) -> Vec<Family> {
        let m = self.m();
        let mut ideals: Vec<Family> = Vec::new();
        for c in 0..m as Mask {
            if self.theta[c as usize] {
                continue;
            }
            let mut i = Family::default();
            for f in 0..m {
                if self.below[f].members(m).all(|g| g & c != 0) {
                    i.insert(f as Mask);
                }
            }
            if !ideals.contains(&i) {
                ideals.push(i);
            }
        }
        let maximal: Vec<Family> = ideals
            .iter()
            .filter(|a| !ideals.iter().any(|b| b != *a && a.is_subset(b)))
            .copied()
            .collect();
        let mut pts: Vec<Family> = maximal.iter().map(|d| d.complement_within(m)).collect();
        pts.sort();
        pts
    }

    fn is_upset(&self, r: &Family) -> bool {
        let m = self.m();
        r.members(m).all(|f| (0..m as Mask).all(|g| !self.leq(f, g) || r.contains(g)))
    }

    // quantifies over every Φ ⊆ F(P); only feasible for tiny P
    fn literal_spectrum(&self) -> Vec<Family> {
        let m = self.m();
        let all_phi: Vec<Family> = (0..1u64 << m)
            .map(|bitsv| Family([bitsv, 0, 0, 0]))
            .filter(|phi| self.in_theta_f(phi))
            .collect();
        let mut out = Vec::new();
        for rv in 0..1u64 << m {
            let r = Family([rv, 0, 0, 0]);
            if !self.is_upset(&r) {
                continue;
            }
            let cauchy = all_phi.iter().all(|phi| phi.0[0] & rv != 0);
            let round = r.members(m).all(|s| {
                all_phi.iter().any(|phi| {
                    Family([phi.0[0] & rv, 0, 0, 0])
                        .members(m)
                        .all(|f| self.leq(f, s))
                })
            });
            if cauchy && round {
                out.push(r);
            }
        }
        out.sort();
        out
    }

    /// Θ̂^F = {F(R) : R ∈ Θ̂}, and the literal enumeration agrees where run.
    pub fn holds(&self) -> bool {
        self.points == self.expected
            && self.literal_points.as_ref().is_none_or(|l| *l == self.points)
    }
}

impl NearnessInstance {
    pub fn directed_replacement(&self, reading: ReplacementReading) -> Result<DirectedReplacement> {
        DirectedReplacement::build(self, reading)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nearness::ThetaClosure;
    use crate::poset::Poset;
    use std::sync::Arc;

    fn inst(p: Poset, theta: Vec<Mask>) -> NearnessInstance {
        NearnessInstance::from_masks(Arc::new(p), theta, ThetaClosure::Listed)
    }

    #[test]
    fn i1_replacement() {
        let r = inst(Poset::antichain(&["a", "b"]).unwrap(), vec![0b11]).directed_replacement(ReplacementReading::Literal).unwrap();
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.points, vec![Family::powerset_of(0b01), Family::powerset_of(0b10)]);
    }

    #[test]
    fn empty_theta_replacement() {
        let r = inst(Poset::antichain(&["a", "b"]).unwrap(), vec![]).directed_replacement(ReplacementReading::Literal).unwrap();
        assert!(r.holds());
        assert_eq!(r.points, vec![Family::powerset_of(0)]);
    }

    #[test]
    fn i2_replacement() {
        let r = inst(Poset::chain(&["0", "1"]).unwrap(), vec![0b10]).directed_replacement(ReplacementReading::Literal).unwrap();
        assert!(r.holds());
        assert_eq!(r.points, vec![Family::powerset_of(0b10)]);
    }
}
