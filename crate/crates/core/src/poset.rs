//! Finite posets and the refinement preorder on their subsets.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::bounds::WORD_BITS;
use crate::error::{NearnessError, Result};

/// Subset of a poset as a raw bit mask, element `i` at bit `i`.
pub type Mask = u64;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// Mask with the lowest `n` bits set.
#[inline]
pub fn full_mask(n: usize) -> Mask {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[inline]
pub(crate) fn bit(i: usize) -> Mask {
    1u64 << i
}

/// Indices of the set bits, ascending.
pub fn bits(mut m: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

/// A subset of a specific poset.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet {
    // ordered by bits first so sorting follows the membership bit-vector
    bits: Mask,
    owner: u64,
}

impl ElementSet {
    pub(crate) fn new(owner: u64, bits: Mask) -> Self {
        ElementSet { bits, owner }
    }

    pub fn bits(&self) -> Mask {
        self.bits
    }

    pub fn owner(&self) -> u64 {
        self.owner
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, i: usize) -> bool {
        i < WORD_BITS && self.bits & bit(i) != 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> {
        bits(self.bits)
    }

    fn same(&self, other: &ElementSet) -> Result<()> {
        if self.owner == other.owner {
            Ok(())
        } else {
            Err(NearnessError::InstanceMismatch)
        }
    }

    pub fn union(&self, other: &ElementSet) -> Result<ElementSet> {
        self.same(other)?;
        Ok(ElementSet::new(self.owner, self.bits | other.bits))
    }

    pub fn intersection(&self, other: &ElementSet) -> Result<ElementSet> {
        self.same(other)?;
        Ok(ElementSet::new(self.owner, self.bits & other.bits))
    }

    pub fn difference(&self, other: &ElementSet) -> Result<ElementSet> {
        self.same(other)?;
        Ok(ElementSet::new(self.owner, self.bits & !other.bits))
    }

    pub fn is_subset(&self, other: &ElementSet) -> Result<bool> {
        self.same(other)?;
        Ok(self.bits & !other.bits == 0)
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A finite partial order on named elements.
#[derive(Debug, Clone)]
pub struct Poset {
    id: u64,
    names: Vec<String>,
    index: HashMap<String, usize>,
    up: Vec<Mask>,
    down: Vec<Mask>,
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.up == other.up
    }
}

impl Poset {
    /// Builds the reflexive-transitive closure of `pairs` (each `(p, q)`
    /// meaning p ≤ q) and rejects it unless antisymmetric.
    pub fn new<S: AsRef<str>>(elements: &[S], pairs: &[(S, S)]) -> Result<Poset> {
        let names: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        let index = index_names(&names)?;
        let look = |s: &S| {
            index
                .get(s.as_ref())
                .copied()
                .ok_or_else(|| NearnessError::UnknownElement(s.as_ref().to_string()))
        };
        let mut idx_pairs = Vec::with_capacity(pairs.len());
        for (p, q) in pairs {
            idx_pairs.push((look(p)?, look(q)?));
        }
        Poset::build(names, index, &idx_pairs)
    }

    /// Same as [`Poset::new`] with pairs given by index.
    pub fn from_indices(names: Vec<String>, pairs: &[(usize, usize)]) -> Result<Poset> {
        let index = index_names(&names)?;
        Poset::build(names, index, pairs)
    }

    /// Antichain on the given names.
    pub fn antichain<S: AsRef<str>>(elements: &[S]) -> Result<Poset> {
        Poset::new::<S>(elements, &[])
    }

    /// Chain in the given order, first element least.
    pub fn chain<S: AsRef<str>>(elements: &[S]) -> Result<Poset> {
        let names: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        let pairs: Vec<(usize, usize)> = (1..names.len()).map(|i| (i - 1, i)).collect();
        Poset::from_indices(names, &pairs)
    }

    fn build(names: Vec<String>, index: HashMap<String, usize>, pairs: &[(usize, usize)]) -> Result<Poset> {
        let n = names.len();
        let mut up: Vec<Mask> = (0..n).map(bit).collect();
        for &(p, q) in pairs {
            if p >= n || q >= n {
                return Err(NearnessError::IndexOutOfRange(p.max(q)));
            }
            up[p] |= bit(q);
        }
        // Warshall on bit rows
        for k in 0..n {
            for i in 0..n {
                if up[i] & bit(k) != 0 {
                    up[i] |= up[k];
                }
            }
        }
        let mut down = vec![0; n];
        for i in 0..n {
            for j in bits(up[i]) {
                down[j] |= bit(i);
            }
        }
        for i in 0..n {
            let both = up[i] & down[i] & !bit(i);
            if both != 0 {
                let j = both.trailing_zeros() as usize;
                let (a, b) = if i < j { (i, j) } else { (j, i) };
                return Err(NearnessError::NotAntisymmetric(names[a].clone(), names[b].clone()));
            }
        }
        Ok(Poset {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            names,
            index,
            up,
            down,
        })
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| NearnessError::UnknownElement(name.to_string()))
    }

    #[inline]
    pub fn le(&self, p: usize, q: usize) -> bool {
        self.up[p] & bit(q) != 0
    }

    /// p^≤ as a mask.
    #[inline]
    pub fn up_mask(&self, p: usize) -> Mask {
        self.up[p]
    }

    /// p^≥ as a mask.
    #[inline]
    pub fn down_mask(&self, p: usize) -> Mask {
        self.down[p]
    }

    pub fn full_mask(&self) -> Mask {
        full_mask(self.len())
    }

    pub fn set(&self, bits: Mask) -> Result<ElementSet> {
        if bits & !self.full_mask() != 0 {
            return Err(NearnessError::IndexOutOfRange(
                (bits & !self.full_mask()).trailing_zeros() as usize,
            ));
        }
        Ok(ElementSet::new(self.id, bits))
    }

    pub(crate) fn set_unchecked(&self, bits: Mask) -> ElementSet {
        ElementSet::new(self.id, bits)
    }

    pub fn empty_set(&self) -> ElementSet {
        ElementSet::new(self.id, 0)
    }

    pub fn full_set(&self) -> ElementSet {
        ElementSet::new(self.id, self.full_mask())
    }

    pub fn set_from_indices(&self, idx: &[usize]) -> Result<ElementSet> {
        let mut m = 0;
        for &i in idx {
            if i >= self.len() {
                return Err(NearnessError::IndexOutOfRange(i));
            }
            m |= bit(i);
        }
        Ok(ElementSet::new(self.id, m))
    }

    pub fn set_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<ElementSet> {
        let mut m = 0;
        for s in names {
            m |= bit(self.index_of(s.as_ref())?);
        }
        Ok(ElementSet::new(self.id, m))
    }

    pub fn set_names(&self, s: &ElementSet) -> Vec<&str> {
        s.iter().map(|i| self.names[i].as_str()).collect()
    }

    /// `{a,b}` rendering in element order.
    pub fn format_set(&self, s: &ElementSet) -> String {
        self.format_mask(s.bits())
    }

    pub fn format_mask(&self, m: Mask) -> String {
        let parts: Vec<&str> = bits(m).map(|i| self.names[i].as_str()).collect();
        format!("{{{}}}", parts.join(","))
    }

    pub(crate) fn check(&self, s: &ElementSet) -> Result<Mask> {
        if s.owner() == self.id {
            Ok(s.bits())
        } else {
            Err(NearnessError::InstanceMismatch)
        }
    }

    pub fn minimum(&self) -> Option<usize> {
        (0..self.len()).find(|&i| self.up[i] == self.full_mask())
    }

    pub fn maximum(&self) -> Option<usize> {
        (0..self.len()).find(|&i| self.down[i] == self.full_mask())
    }

    // ---- mask-level primitives ----

    pub fn up_closure(&self, s: Mask) -> Mask {
        bits(s).fold(0, |acc, i| acc | self.up[i])
    }

    pub fn down_closure(&self, s: Mask) -> Mask {
        bits(s).fold(0, |acc, i| acc | self.down[i])
    }

    /// R ≤ S in the refinement preorder.
    #[inline]
    pub fn refines_mask(&self, r: Mask, s: Mask) -> bool {
        r & !self.down_closure(s) == 0
    }

    pub fn is_upset_mask(&self, s: Mask) -> bool {
        self.up_closure(s) == s
    }

    pub fn is_downset_mask(&self, s: Mask) -> bool {
        self.down_closure(s) == s
    }

    pub fn is_directed_mask(&self, s: Mask) -> bool {
        if s == 0 {
            return false;
        }
        let el: Vec<usize> = bits(s).collect();
        for (k, &a) in el.iter().enumerate() {
            for &b in &el[k + 1..] {
                if self.down[a] & self.down[b] & s == 0 {
                    return false;
                }
            }
        }
        true
    }

    /// All up-sets in ascending mask order.
    pub fn upset_masks(&self) -> Vec<Mask> {
        let n = self.len();
        let mut out = Vec::new();
        self.upsets_rec(n, 0, 0, &mut out);
        out
    }

    // decides bits from the top index down, excluding before including,
    // which yields ascending numeric order
    fn upsets_rec(&self, k: usize, decided: Mask, chosen: Mask, out: &mut Vec<Mask>) {
        if k == 0 {
            out.push(chosen);
            return;
        }
        let i = k - 1;
        let d2 = decided | bit(i);
        if self.down[i] & decided & chosen == 0 {
            self.upsets_rec(i, d2, chosen, out);
        }
        if self.up[i] & decided & !chosen == 0 {
            self.upsets_rec(i, d2, chosen | bit(i), out);
        }
    }

    /// All down-sets in ascending mask order.
    pub fn downset_masks(&self) -> Vec<Mask> {
        let full = self.full_mask();
        let mut v: Vec<Mask> = self.upset_masks().into_iter().map(|u| full & !u).collect();
        v.sort_unstable();
        v
    }

    // ---- checked API ----

    pub fn closure_up(&self, s: &ElementSet) -> Result<ElementSet> {
        Ok(self.set_unchecked(self.up_closure(self.check(s)?)))
    }

    pub fn closure_down(&self, s: &ElementSet) -> Result<ElementSet> {
        Ok(self.set_unchecked(self.down_closure(self.check(s)?)))
    }

    pub fn refines(&self, r: &ElementSet, s: &ElementSet) -> Result<bool> {
        Ok(self.refines_mask(self.check(r)?, self.check(s)?))
    }

    pub fn is_upset(&self, s: &ElementSet) -> Result<bool> {
        Ok(self.is_upset_mask(self.check(s)?))
    }

    pub fn is_directed(&self, s: &ElementSet) -> Result<bool> {
        Ok(self.is_directed_mask(self.check(s)?))
    }

    pub fn is_filter(&self, s: &ElementSet) -> Result<bool> {
        let m = self.check(s)?;
        Ok(self.is_upset_mask(m) && self.is_directed_mask(m))
    }

    pub fn enumerate_upsets(&self) -> impl Iterator<Item = ElementSet> + '_ {
        self.upset_masks().into_iter().map(|m| self.set_unchecked(m))
    }
}

fn index_names(names: &[String]) -> Result<HashMap<String, usize>> {
    if names.len() > WORD_BITS {
        return Err(NearnessError::BoundExceeded {
            what: "poset size",
            size: names.len(),
            bound: WORD_BITS,
        });
    }
    let mut index = HashMap::with_capacity(names.len());
    for (i, s) in names.iter().enumerate() {
        if s.is_empty() {
            return Err(NearnessError::EmptyIdentifier);
        }
        if index.insert(s.clone(), i).is_some() {
            return Err(NearnessError::DuplicateElement(s.clone()));
        }
    }
    Ok(index)
}
