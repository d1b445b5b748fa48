//! Worked examples, one test per operation.

use std::sync::Arc;

use nearness::admissibility::{
    is_admissible, is_order_cover_mask, is_picado_pultr_admissible, is_wallman_admissible, wallman_equivalent_forms,
    AdmissibilityReport, LubReading,
};
use nearness::generate;
use nearness::replacement::Family;
use nearness::{
    CoverMode, FiniteFrame, FiniteSpace, Mask, NearnessError, NearnessInstance, Poset, PreorderFamily,
    ReplacementReading, Role, ThetaClosure,
};

fn antichain() -> Arc<Poset> {
    Arc::new(Poset::antichain(&["a", "b"]).unwrap())
}

fn chain() -> Arc<Poset> {
    Arc::new(Poset::chain(&["0", "1"]).unwrap())
}

// {a,b} < 1
fn vee() -> Arc<Poset> {
    Arc::new(Poset::new(&["a", "b", "1"], &[("a", "1"), ("b", "1")]).unwrap())
}

fn listed(p: Arc<Poset>, theta: &[Mask]) -> NearnessInstance {
    NearnessInstance::from_masks(p, theta.to_vec(), ThetaClosure::Listed)
}

fn i1() -> NearnessInstance {
    listed(antichain(), &[0b11])
}

fn i2() -> NearnessInstance {
    listed(chain(), &[0b10])
}

fn i3() -> NearnessInstance {
    listed(vee(), &[0b011])
}

fn i5() -> FiniteSpace {
    FiniteSpace::new(
        &["x", "y", "z"],
        &[("xy", vec!["x", "y"]), ("yz", vec!["y", "z"]), ("xz", vec!["x", "z"])],
        Role::Subbasis,
    )
    .unwrap()
}

fn singleton_space(n: usize, role: Role) -> FiniteSpace {
    let sets: Vec<Mask> = (0..n).map(|i| 1 << i).collect();
    FiniteSpace::from_masks(n, &sets, role).unwrap()
}

fn boolean4() -> FiniteFrame {
    let p = Poset::new(&["0", "a", "b", "1"], &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")]).unwrap();
    FiniteFrame::new(Arc::new(p)).unwrap()
}

fn up_closure(p: &Arc<Poset>, gens: &[Mask]) -> NearnessInstance {
    let g = listed(p.clone(), gens);
    let all: Vec<Mask> = (0..=p.full_mask()).filter(|&s| g.in_theta_le_mask(s)).collect();
    listed(p.clone(), &all)
}

// ---- poset ----

#[test]
fn closure_up_examples() {
    let c = chain();
    assert_eq!(c.closure_up(&c.set(0b01).unwrap()).unwrap().bits(), 0b11);
    let a = antichain();
    assert_eq!(a.closure_up(&a.set(0b01).unwrap()).unwrap().bits(), 0b01);
    let v = vee();
    assert_eq!(v.closure_up(&v.set(0b011).unwrap()).unwrap().bits(), 0b111);
    assert!(matches!(v.closure_up(&a.set(1).unwrap()), Err(NearnessError::InstanceMismatch)));
}

#[test]
fn refines_examples() {
    let v = vee();
    assert!(v.refines(&v.empty_set(), &v.empty_set()).unwrap());
    assert!(v.refines(&v.set(0b001).unwrap(), &v.set(0b100).unwrap()).unwrap());
    let a = antichain();
    assert!(!a.refines(&a.set(0b11).unwrap(), &a.set(0b01).unwrap()).unwrap());
}

#[test]
fn directed_and_filter_examples() {
    for p in [antichain(), chain(), vee()] {
        assert!(!p.is_directed(&p.empty_set()).unwrap());
    }
    let c = chain();
    assert!(c.is_filter(&c.set(0b10).unwrap()).unwrap());
    let a = antichain();
    assert!(!a.is_directed(&a.set(0b11).unwrap()).unwrap());
}

#[test]
fn enumerate_upsets_examples() {
    let list = |p: Arc<Poset>| p.enumerate_upsets().map(|s| s.bits()).collect::<Vec<_>>();
    assert_eq!(list(antichain()), vec![0b00, 0b01, 0b10, 0b11]);
    assert_eq!(list(chain()), vec![0b00, 0b10, 0b11]);
    // ∅, {1}, {a,1}, {b,1}, {a,b,1}
    assert_eq!(list(vee()), vec![0b000, 0b100, 0b101, 0b110, 0b111]);
}

// ---- nearness ----

#[test]
fn in_theta_le_examples() {
    assert!(i1().in_theta_le_mask(0b11));
    assert!(!i1().in_theta_le_mask(0b01));
    assert!(i2().in_theta_le_mask(0b11));
}

#[test]
fn cauchy_and_round_examples() {
    let empty = listed(vee(), &[]);
    assert!((0..8).all(|s| empty.is_cauchy_mask(s)));
    assert!(i1().is_cauchy_mask(0b01) && i1().is_round_mask(0b01));
    assert!(!i2().is_round_mask(0b11));
}

#[test]
fn spectrum_examples() {
    assert_eq!(listed(vee(), &[]).spectrum().unwrap().point_masks(), &[0]);
    assert!(listed(antichain(), &[0b00, 0b01]).spectrum().unwrap().is_empty());
    assert_eq!(i1().spectrum().unwrap().point_masks(), &[0b01, 0b10]);

    // P_x, P_y, P_z with sets xy=0, yz=1, xz=2
    let s = i5();
    let theta = s.cover_family(CoverMode::All).unwrap();
    let px: Vec<Mask> = (0..3).map(|x| s.point_nbhd(x)).collect();
    assert_eq!(px, vec![0b101, 0b011, 0b110]);
    let mut sorted = px.clone();
    sorted.sort_unstable();
    assert_eq!(theta.spectrum().unwrap().point_masks(), sorted.as_slice());
}

#[test]
fn spectrum_oracle_examples() {
    assert_eq!(i1().spectrum_oracle().unwrap().point_masks(), &[0b01, 0b10]);
    assert_eq!(i2().spectrum_oracle().unwrap().point_masks(), &[0b10]);
    assert_eq!(listed(chain(), &[0b01]).spectrum_oracle().unwrap().point_masks(), &[0b11]);
}

#[test]
fn leq_theta_examples() {
    for n in [i1(), i2(), i3()] {
        for p in 0..n.len() {
            for fam in [PreorderFamily::Theta, PreorderFamily::ThetaLe, PreorderFamily::RestrictionEmpty] {
                assert!(n.leq_theta(p, p, fam).unwrap());
            }
        }
    }
    assert!(!i1().leq_theta(0, 1, PreorderFamily::ThetaLe).unwrap());
    assert!(i2().leq_theta(0, 1, PreorderFamily::ThetaLe).unwrap());
}

#[test]
fn degenerate_examples() {
    let fired = |n: NearnessInstance| {
        let r = n.classify_degenerate().unwrap();
        assert!(r.all_consistent());
        r.banners()
    };
    assert_eq!(fired(listed(antichain(), &[])), vec!["Empty=Theta: Θ̂={∅}"]);
    assert_eq!(fired(listed(antichain(), &[0b00, 0b01])), vec!["EmptyinTheta: Θ̂=∅"]);
    let one = Arc::new(Poset::chain(&["0"]).unwrap());
    assert_eq!(fired(listed(one, &[0b1])), vec!["0inTheta: Θ̂={P}"]);
}

// ---- proximity ----

#[test]
fn near_examples() {
    let w = |n: &NearnessInstance, s: Mask| n.is_near(&n.poset().set(s).unwrap()).unwrap().witness.map(|d| d.bits());
    assert_eq!(w(&i1(), 0b01), Some(0b10));
    assert_eq!(w(&i1(), 0b11), None);
    assert_eq!(w(&i2(), 0b00), Some(0b00));
    assert_eq!(w(&i3(), 0b101), Some(0b010));
}

#[test]
fn near_witnesses_recheck() {
    for n in [i1(), i2(), i3()] {
        for s in 0..=n.poset().full_mask() {
            let w = n.is_near(&n.poset().set(s).unwrap()).unwrap();
            if let Some(d) = w.witness {
                let d = d.bits();
                assert!(!n.in_theta_le_mask(d));
                assert!(nearness::poset::bits(s).all(|x| n.in_theta_le_mask(d | 1 << x)));
            }
            assert_eq!(n.near_witness_mask(s).is_some(), n.near_witness_unrestricted(s).is_some());
        }
    }
}

#[test]
fn dotted_examples() {
    assert_eq!(i2().dotted_mask().unwrap(), 0b10);
    assert!(i2().is_weakly_admissible().unwrap());
    assert_eq!(i1().dotted_mask().unwrap(), 0b11);
    assert!(i1().is_weakly_admissible().unwrap());
    assert!(!listed(antichain(), &[]).is_weakly_admissible().unwrap());
}

#[test]
fn star_examples() {
    assert_eq!(i3().star_mask(0b011, 0).unwrap(), 0b001);
    assert_eq!(i1().star_mask(0b11, 0).unwrap(), 0b01);
    let with_empty = listed(vee(), &[0b000, 0b011]);
    for c in 0..8 {
        for p in 0..3 {
            assert_eq!(with_empty.star_mask(c, p).unwrap(), 0);
        }
    }
}

#[test]
fn restriction_examples() {
    let r = i2().restriction_mask(0b10).unwrap();
    assert_eq!(r.member_masks(), vec![0b10, 0b11]);
    assert_eq!(r.f_generators(), &[0b01]);
    assert!(i2().restriction_mask(0b01).unwrap().is_full_family());

    let empty = listed(antichain(), &[]);
    assert!(empty.restriction_mask(0).unwrap().is_empty_family());
    for p in 0..2 {
        assert!(empty.restriction_mask(1 << p).unwrap().is_full_family());
    }
}

#[test]
fn restriction_matches_full_scan() {
    for n in [i1(), i2(), i3(), listed(antichain(), &[])] {
        for s in 0..=n.poset().full_mask() {
            let r = n.restriction_mask(s).unwrap();
            let oracle = n.restriction_oracle_mask(s).unwrap();
            for (c, &member) in oracle.iter().enumerate() {
                assert_eq!(r.contains_mask(c as Mask), member);
            }
        }
    }
}

#[test]
fn non_degeneracy_examples() {
    for n in [i1(), i2(), i3()] {
        assert!(n.is_nearly_finite().unwrap());
    }
    assert!(i1().is_non_degenerate().unwrap());

    // a near singleton outside every point would be a witness; the finite
    // near lemma rules it out, and exhaustion on three elements confirms it
    let mut searched = 0;
    for p in generate::posets_up_to_iso(3) {
        for n in generate::all_thetas(&p) {
            let pts = n.spectrum().unwrap();
            for a in 0..n.len() {
                let near = n.near_witness_mask(1 << a).is_some();
                assert!(!near || pts.point_masks().iter().any(|&r| r & (1 << a) != 0));
            }
            assert!(n.is_non_degenerate().unwrap());
            searched += 1;
        }
    }
    assert_eq!(searched, 5 * 256);
}

#[test]
fn below_examples() {
    let rel = i3().below_relations().unwrap();
    for (p, q) in [(0, 0), (0, 2), (1, 1), (1, 2)] {
        assert!(rel.below(p, q));
    }
    assert!(!rel.below(0, 1) && !rel.below(1, 0));
    // 1 ⊲ 1 as well: the star of 1 in {a,b} is {a,b} ≤ {1}
    assert!(rel.below(2, 2));
    assert_eq!(rel.count(), 5);

    assert_eq!(i1().below_relations().unwrap().pairs(), vec![(0, 0), (1, 1)]);

    let directed = listed(vee(), &[0b100, 0b110, 0b101, 0b111]);
    assert!(directed.is_directed_family());
    assert!(directed.below_relations().unwrap().is_transitive());
}

#[test]
fn linked_and_star_regular_examples() {
    assert!(i1().is_star_regular().unwrap());
    for n in [i1(), i2(), i3()] {
        let d = n.dotted_mask().unwrap();
        for x in nearness::poset::bits(d) {
            assert!(n.is_linked_mask(1 << x).unwrap());
        }
    }
    assert!(!i1().is_linked_mask(0b11).unwrap());
}

#[test]
fn regularise_examples() {
    let r = i1().regularise(nearness::Priming::StageLocal).unwrap();
    assert_eq!(r.instance.member_masks().unwrap(), vec![0b11]);

    let r = i2().regularise(nearness::Priming::StageLocal).unwrap();
    assert!(r.stages.len() <= 2);
    assert_eq!(r.instance.member_masks().unwrap(), vec![0b10, 0b11]);

    // ⊲ ⊆ ≤ with every member ⊲-regular: fixed point
    for n in generate::posets_up_to_iso(3).iter().flat_map(generate::all_thetas) {
        let rel = n.below_relations().unwrap();
        let members = n.member_masks().unwrap();
        if rel.is_subset_of_order() && members.iter().all(|&c| rel.prime_mask(c) == c) {
            let r = n.regularise(nearness::Priming::StageLocal).unwrap();
            assert_eq!(r.instance.member_masks().unwrap(), members);
        }
    }
}

#[test]
fn directed_replacement_examples() {
    let r = i1().directed_replacement(ReplacementReading::LeClosure).unwrap();
    assert!(r.holds());
    assert_eq!(r.points, vec![Family::powerset_of(0b01), Family::powerset_of(0b10)]);

    let r = listed(antichain(), &[]).directed_replacement(ReplacementReading::LeClosure).unwrap();
    assert!(r.holds());
    assert_eq!(r.points, vec![Family::powerset_of(0)]);

    let r = i2().directed_replacement(ReplacementReading::LeClosure).unwrap();
    assert!(r.holds());
    assert_eq!(r.points, vec![Family::powerset_of(0b10)]);
}

// ---- admissibility ----

#[test]
fn order_cover_examples() {
    assert!(is_order_cover_mask(&chain(), 0b10));
    assert!(!is_order_cover_mask(&chain(), 0b01));
    assert!(is_order_cover_mask(&Poset::chain(&["0"]).unwrap(), 0b1));
}

#[test]
fn wallman_examples() {
    assert!(is_wallman_admissible(&i1()).unwrap());
    assert!(!is_wallman_admissible(&listed(antichain(), &[0b01])).unwrap());
    let discrete = singleton_space(3, Role::Subbasis).cover_family(CoverMode::Finite).unwrap();
    assert!(is_wallman_admissible(&discrete).unwrap());
}

#[test]
fn picado_pultr_examples() {
    assert!(is_picado_pultr_admissible(&i1()).unwrap());
    let one = Arc::new(Poset::chain(&["0"]).unwrap());
    assert!(is_picado_pultr_admissible(&listed(one, &[0b1])).unwrap());
    for p in generate::posets_up_to_iso(3) {
        for n in generate::upset_thetas(&p) {
            if is_picado_pultr_admissible(&n).unwrap() {
                assert!(n.theta_in_order_covers().unwrap());
            }
        }
    }
}

#[test]
fn admissible_examples() {
    let rel = i1().below_relations().unwrap();
    assert!(is_admissible(&i1(), &rel, LubReading::Literal));
    let rel = i2().below_relations().unwrap();
    assert!(is_admissible(&i2(), &rel, LubReading::Literal));
    assert!(is_admissible(&i2(), &rel, LubReading::VacuousEmpty));
    let rep = AdmissibilityReport::compute(&i2()).unwrap();
    assert!(rep.admissible && !rep.lub_reading_diverges());
    for p in generate::posets_up_to_iso(3) {
        for n in generate::upset_thetas(&p) {
            let rel = n.below_relations().unwrap();
            if n.is_filter_family().unwrap() && is_admissible(&n, &rel, LubReading::Literal) {
                assert!(is_picado_pultr_admissible(&n).unwrap());
            }
        }
    }
}

#[test]
fn wallman_forms_examples() {
    let f = wallman_equivalent_forms(&i1()).unwrap();
    assert!(f.form1() && f.form2() && f.form3());
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(5);
    for _ in 0..300 {
        let ps = generate::posets_up_to_iso(4);
        let p = &ps[rand::Rng::gen_range(&mut rng, 0..ps.len())];
        let n = generate::random_theta(p, 6, &mut rng);
        assert!(wallman_equivalent_forms(&n).unwrap().agree());
    }
}

// ---- spaces ----

#[test]
fn t1_examples() {
    assert!(i5().is_t1_family());
    let d = singleton_space(3, Role::Basis);
    assert!(d.is_t1_family() && d.is_td_family());
    assert!(!FiniteSpace::from_masks(2, &[0b11], Role::Subbasis).unwrap().is_t1_family());
}

#[test]
fn cover_family_examples() {
    assert_eq!(i5().cover_family(CoverMode::All).unwrap().generator_masks(), &[0b011, 0b101, 0b110]);
    let one = FiniteSpace::from_masks(1, &[0b1], Role::Basis).unwrap();
    assert_eq!(one.cover_family(CoverMode::All).unwrap().member_masks().unwrap(), vec![0b1]);
    let empty = FiniteSpace::from_masks(0, &[], Role::Basis).unwrap();
    assert_eq!(empty.cover_family(CoverMode::All).unwrap().member_masks().unwrap(), vec![0]);
    // a sample missing a minimal cover is refused
    assert!(matches!(
        i5().cover_family(CoverMode::Sample { k: 1, seed: 0 }),
        Err(NearnessError::NotCoinitial(_))
    ));
}

#[test]
fn roundtrip_examples() {
    let s = i5();
    let r = s.roundtrip_t1(&s.cover_family(CoverMode::All).unwrap()).unwrap();
    assert!(r.hypotheses_hold() && r.ok() && r.spectrum_points == 3 && r.subbasis_order);
    let d = singleton_space(3, Role::Basis);
    let r = d.roundtrip_t1(&d.cover_family(CoverMode::All).unwrap()).unwrap();
    assert!(r.ok() && r.bijection);
    let not_t1 = FiniteSpace::from_masks(2, &[0b11], Role::Subbasis).unwrap();
    let r = not_t1.roundtrip_t1(&not_t1.cover_family(CoverMode::All).unwrap()).unwrap();
    assert!(!r.t1 && r.ok());
    assert!(r.notes.iter().any(|n| n.contains("T1")), "{:?}", r.notes);
}

#[test]
fn star_concrete_examples() {
    let s = i5();
    assert_eq!(s.star_concrete(0b111, s.sets()[0]), 0b111);
    assert_eq!(s.star_concrete(0b111, 0), 0);
    assert!(s.is_star_coinitial(&s.cover_family(CoverMode::All).unwrap()).unwrap());
}

#[test]
fn topology_predicate_examples() {
    let d = singleton_space(3, Role::Basis);
    let all = d.cover_family(CoverMode::All).unwrap();
    assert!(d.is_compatible(&all).unwrap());
    assert!(d.is_complete(&all).unwrap());

    // X = {x,y} with basis {x},{y},X and Θ = {{X}}
    let s = FiniteSpace::from_masks(2, &[0b01, 0b10, 0b11], Role::Basis).unwrap();
    let coarse = s.instance_with_theta(&[vec![2]]).unwrap();
    assert!(!s.is_compatible(&coarse).unwrap());
}

#[test]
fn near_intersection_examples() {
    let s = i5();
    let rep = s.near_equals_intersection().unwrap();
    assert!(rep.t1 && rep.ok(), "{rep:?}");
    let theta = s.cover_family(CoverMode::All).unwrap();
    let p = theta.poset();
    // {xy, xz} meet in x; all three meet in nothing; ∅ meets in X
    assert!(theta.is_near_bool(&p.set(0b101).unwrap()).unwrap());
    assert!(!theta.is_near_bool(&p.set(0b111).unwrap()).unwrap());
    assert!(theta.is_near_bool(&p.set(0).unwrap()).unwrap());
}

// ---- frames ----

#[test]
fn heyting_examples() {
    let f = boolean4();
    assert_eq!(f.heyting(1, 2), 2);
    for q in 0..4 {
        assert_eq!(f.heyting(f.top(), q), q);
        for p in 0..4 {
            if f.poset().le(p, q) {
                assert_eq!(f.heyting(p, q), f.top());
            }
        }
    }
}

#[test]
fn sublocale_examples() {
    let f = boolean4();
    assert_eq!(f.closed_sublocale(3).carrier.bits(), 0b1000);
    assert_eq!(f.closed_sublocale(0).carrier.bits(), 0b1111);
    // 𝔬(a) = {b, 1}
    assert_eq!(f.open_sublocale(1).carrier.bits(), 0b1100);
    assert_eq!(f.sublocale_join(&[]).carrier.bits(), 0b1000);
}

#[test]
fn pp_equiv_examples() {
    let f = boolean4();
    let r = f.pp_equiv_check(&up_closure(f.poset(), &[0b0110])).unwrap();
    assert!(r.theta_is_upset && r.holds());
    let c = FiniteFrame::new(chain()).unwrap();
    let r = c.pp_equiv_check(&up_closure(c.poset(), &[0b10])).unwrap();
    assert!(r.theta_is_upset && r.holds());
    let covers = nearness::admissibility::order_covers(f.poset());
    let n = listed(f.poset().clone(), &covers);
    let r = f.pp_equiv_check(&n).unwrap();
    assert!(r.theta_is_upset && r.holds());
}
