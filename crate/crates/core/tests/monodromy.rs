use std::sync::Arc;

use fanbranch::census::{branch_census, fan_automorphisms};
use fanbranch::cover::{is_isomorphic, Axiom, CoverPoset};
use fanbranch::data;
use fanbranch::fan::Fan;
use fanbranch::monodromy::{canonical_class, spanning_tree, MonodromyAssignment, MonodromyContext, Permutation};
use proptest::prelude::*;

fn fulton() -> Arc<Fan> {
    Arc::new(data::fan("fulton").unwrap())
}

fn ctx(name: &str) -> MonodromyContext {
    MonodromyContext::new(Arc::new(data::fan(name).unwrap())).unwrap()
}

fn bipyramid() -> Fan {
    Fan::new(
        3,
        vec![vec![1, 0, 0], vec![0, 1, 0], vec![-1, -1, 0], vec![0, 0, 1], vec![0, 0, -1]],
        vec![vec![0, 1, 3], vec![1, 2, 3], vec![0, 2, 3], vec![0, 1, 4], vec![1, 2, 4], vec![0, 2, 4]],
    )
    .unwrap()
}

#[test]
fn spanning_tree_edge_counts() {
    let t = spanning_tree(&fulton()).unwrap();
    assert_eq!(t.tree_edges.len(), 5);
    assert_eq!(t.non_tree_edges.len(), 7);
    assert_eq!(spanning_tree(&data::fan("sigma_prime").unwrap()).unwrap().non_tree_edges.len(), 7);
    assert_eq!(spanning_tree(&bipyramid()).unwrap().non_tree_edges.len(), 4);
    let octant = Fan::new(3, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], vec![vec![0, 1, 2]]).unwrap();
    assert!(spanning_tree(&octant).is_err());
}

#[test]
fn assignment_counts() {
    let c = ctx("fulton");
    assert_eq!(c.count(2), 128);
    assert_eq!(c.assignments(2).count(), 128);
    assert_eq!(c.count(1), 1);
    assert_eq!(c.assignments(1).count(), 1);
    assert_eq!(ctx("sigma_prime").count(3), 279_936);
    // streaming order is lexicographic in permutation words
    let all: Vec<MonodromyAssignment> = c.assignments(2).collect();
    for w in all.windows(2) {
        assert!(w[0].perms < w[1].perms);
    }
    for (i, a) in all.iter().enumerate() {
        assert_eq!(c.index_of(a), i as u128);
    }
}

#[test]
fn identity_assignment_gives_wedge() {
    let c = ctx("fulton");
    let a = MonodromyAssignment::identity(2, 7);
    let cover = c.build_cover(&a).unwrap();
    let wedge = CoverPoset::wedge_power(fulton(), 2);
    assert!(is_isomorphic(&cover, &wedge));
    for r in 0..8 {
        assert!(c.ray_monodromy(&a, r).is_identity());
    }
    assert_eq!(cover.euler_characteristic(), 4);
}

#[test]
fn every_degree_two_cover_is_valid_maximal_and_satisfies_riemann_hurwitz() {
    let c = ctx("fulton");
    let mut seen = std::collections::BTreeSet::new();
    for a in c.assignments(2) {
        let cover = c.build_cover(&a).unwrap();
        cover.validate().unwrap();
        assert!(cover.is_maximal().unwrap());
        let branch = c.branch_rays(&a);
        assert_eq!(branch.len() % 2, 0);
        let rh: i64 = 4 - (0..8).map(|r| 2 - c.ray_monodromy(&a, r).cycle_count() as i64).sum::<i64>();
        assert_eq!(cover.euler_characteristic(), rh);
        assert!(seen.insert(branch));
    }
    assert_eq!(seen.len(), 128);
}

#[test]
fn type_c_cover() {
    let c = ctx("fulton");
    let a = c.assignments(2).find(|a| c.branch_rays(a) == vec![0, 2, 5, 7]).unwrap();
    let cover = c.build_cover(&a).unwrap();
    assert_eq!(cover.degree(), 2);
    assert_eq!(cover.ray_cells().len(), 12);
    assert_eq!(cover.wall_cells().len(), 24);
    assert_eq!(cover.maximal_cells().len(), 12);
    assert_eq!(cover.euler_characteristic(), 0);
    let ram: Vec<usize> = cover.ramification_cells().iter().map(|&x| cover.ray_of(x).unwrap()).collect();
    assert_eq!(ram, vec![0, 2, 5, 7]);
}

#[test]
fn census_matches_oracle() {
    let c = ctx("fulton");
    let census = branch_census(&c, 2);
    assert_eq!(census.total, 128);
    assert_eq!(census.unbranched, 1);
    assert_eq!(census.admissible.len(), 18);
    let mut sizes: Vec<(usize, Vec<usize>)> = census.orbits.iter().map(|o| (o.members.len(), o.distances.clone())).collect();
    sizes.sort();
    assert_eq!(sizes, vec![(2, vec![2, 2, 2, 2, 2, 2]), (4, vec![3]), (12, vec![2])]);
    assert_eq!(fan_automorphisms(c.fan()).len(), 48);
}

#[test]
fn canonical_classes() {
    let c = ctx("fulton");
    let classes: std::collections::BTreeSet<_> = c.assignments(2).map(|a| canonical_class(&a)).collect();
    assert_eq!(classes.len(), 128);
    let t = Permutation::transposition(3, 0, 2);
    let a = MonodromyAssignment::new(3, vec![t; 7]).unwrap();
    let least = Permutation::transposition(3, 1, 2);
    assert_eq!(canonical_class(&a).perms, vec![least; 7]);
}

#[test]
fn identity_and_wedge_covers() {
    let fan = fulton();
    let id2 = CoverPoset::weighted_identity(fan.clone(), 2);
    id2.validate().unwrap();
    assert_eq!(id2.degree(), 2);
    assert_eq!(id2.ramification_cells().len(), fan.faces().len() - 1);
    assert!(!id2.is_maximal().unwrap());
    assert_eq!(CoverPoset::weighted_identity(fan.clone(), 1).euler_characteristic(), 2);
    let w3 = CoverPoset::wedge_power(fan.clone(), 3);
    w3.validate().unwrap();
    assert_eq!(w3.degree(), 3);
    assert!(w3.ramification_cells().is_empty());
    let w2 = CoverPoset::wedge_power(fan.clone(), 2);
    assert!(w2.is_maximal().unwrap());
    assert_eq!(w2.euler_characteristic(), 4);
}

#[test]
fn wedge_and_product_constructions() {
    let fan = fulton();
    let c = ctx("fulton");
    let a = c.assignments(2).find(|a| c.branch_rays(a) == vec![0, 2, 5, 7]).unwrap();
    let tc = c.build_cover(&a).unwrap();
    let one = CoverPoset::weighted_identity(fan.clone(), 1);
    let w = tc.wedge_sum(&one).unwrap();
    w.validate().unwrap();
    assert_eq!(w.degree(), 3);
    assert!(is_isomorphic(&w, &one.wedge_sum(&tc).unwrap()));
    assert!(is_isomorphic(&tc.fibered_product(&one).unwrap(), &tc));
    let w2 = CoverPoset::wedge_power(fan.clone(), 2);
    let p = w2.fibered_product(&w2).unwrap();
    p.validate().unwrap();
    assert_eq!(p.degree(), 4);
    for f in 1..fan.faces().len() {
        assert_eq!(p.cells_over(f).len(), 4);
    }
    let prod = CoverPoset::weighted_identity(fan.clone(), 2)
        .fibered_product(&CoverPoset::weighted_identity(fan.clone(), 3))
        .unwrap();
    assert!(is_isomorphic(&prod, &CoverPoset::weighted_identity(fan.clone(), 6)));
    let other = Arc::new(data::fan("eikelberg").unwrap());
    assert!(one.wedge_sum(&CoverPoset::weighted_identity(other, 1)).is_err());
}

#[test]
fn deleting_a_wall_cell_breaks_local_isomorphism() {
    let fan = fulton();
    let w2 = CoverPoset::wedge_power(fan.clone(), 2);
    let victim = w2.wall_cells()[0];
    let err = w2.without_cell(victim).validate().unwrap_err();
    assert_eq!(err.axiom, Axiom::LocalIsomorphism);
}

#[test]
fn serialized_face_pairs_round_trip() {
    let c = ctx("fulton");
    let a = c.assignments(2).nth(77).unwrap();
    let cover = c.build_cover(&a).unwrap();
    let rebuilt = CoverPoset::new(cover.fan().clone(), cover.cells().to_vec(), &cover.covering_pairs()).unwrap();
    assert!(is_isomorphic(&cover, &rebuilt));
    rebuilt.validate().unwrap();
}

#[test]
fn sampled_degree_three_covers() {
    let c = ctx("sigma_prime");
    for i in (0..c.count(3)).step_by(9_973) {
        let a = c.assignments_in(3, i, i + 1).next().unwrap();
        let cover = c.build_cover(&a).unwrap();
        cover.validate().unwrap();
        assert!(cover.is_maximal().unwrap());
        let rh: i64 = 6 - (0..8).map(|r| 3 - c.ray_monodromy(&a, r).cycle_count() as i64).sum::<i64>();
        assert_eq!(cover.euler_characteristic(), rh);
        for r in 0..8 {
            let cells: Vec<usize> = cover.cells_over(cover.fan().ray_cone(r));
            let mut weights: Vec<usize> = cells.iter().map(|&x| cover.cell(x).weight as usize).collect();
            weights.sort_unstable_by(|a, b| b.cmp(a));
            assert_eq!(weights, c.ray_monodromy(&a, r).cycle_type());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]
    #[test]
    fn conjugate_assignments_give_isomorphic_covers(idx in 0u128..279_936, g in 0usize..6, other in 0u128..279_936) {
        let c = ctx("sigma_prime");
        let a = c.assignments_in(3, idx, idx + 1).next().unwrap();
        let h = &Permutation::all(3)[g];
        let b = a.conjugate_by(h);
        prop_assert_eq!(canonical_class(&a), canonical_class(&b));
        prop_assert!(is_isomorphic(&c.build_cover(&a).unwrap(), &c.build_cover(&b).unwrap()));
        let o = c.assignments_in(3, other, other + 1).next().unwrap();
        let same_class = canonical_class(&a) == canonical_class(&o);
        prop_assert_eq!(same_class, is_isomorphic(&c.build_cover(&a).unwrap(), &c.build_cover(&o).unwrap()));
    }
}
