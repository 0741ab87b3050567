mod common;

use std::sync::Arc;

use fanbranch::cover::is_isomorphic;
use fanbranch::data;
use fanbranch::io::{bundle_from_json, bundle_to_json, Bundle, FanRef};
use fanbranch::klyachko::{
    branched_cover_of, chern, direct_sum, dual, equal_chern, flag, interpolate, is_trivial_chern, necessary_dimension_check,
    pullback, verify, DimensionCheck, Filtration, KlyachkoData, Piece, SplittingCertificate,
};
use fanbranch::linalg::{frac, q, qvec, Rational, Subspace};
use fanbranch::monodromy::MonodromyContext;
use fanbranch::Fan;
use proptest::prelude::*;

fn fixture(name: &str) -> (KlyachkoData, SplittingCertificate) {
    let b = data::bundle(name).unwrap();
    (b.data, b.certificate.unwrap())
}

fn eikelberg_lists() -> Vec<Vec<(Vec<Rational>, u64)>> {
    let mut out: Vec<Vec<(Vec<Rational>, u64)>> = [
        [[15, -15, 3], [3, 3, -9]],
        [[16, -14, -4], [2, 2, -2]],
        [[12, -18, 0], [6, 6, -6]],
        [[24, -18, 0], [-6, 6, -6]],
        [[12, -6, 0], [6, -6, -6]],
    ]
    .iter()
    .map(|pair| pair.iter().map(|u| (qvec(u), 1)).collect())
    .collect();
    for m in &mut out {
        m.sort();
    }
    out
}

fn line(v: &[i64]) -> Subspace {
    Subspace::span_i64(v.len(), &[v.to_vec()]).unwrap()
}

#[test]
fn eikelberg_bundle_verifies_and_gives_the_branched_cover() {
    let (d, cert) = fixture("eikelberg");
    verify(&d, &cert).unwrap();
    let ch = chern(&d, &cert).unwrap();
    let got: Vec<Vec<(Vec<Rational>, u64)>> = ch.multisets.iter().map(|m| m.entries.clone()).collect();
    assert_eq!(got, eikelberg_lists());
    assert!(!ch.is_trivial());
    let (cover, psi) = branched_cover_of(&d, &cert).unwrap();
    cover.validate().unwrap();
    assert_eq!(cover.degree(), 2);
    let ram: Vec<usize> = cover.ramification_cells().iter().map(|&c| cover.ray_of(c).unwrap()).collect();
    assert_eq!(ram, vec![0, 5]);
    assert_eq!(psi.multisets(), ch.multisets);
    assert!(!psi.is_trivial());
    // Same cover as the monodromy construction.
    let ctx = MonodromyContext::new(cover.fan().clone()).unwrap();
    let built = ctx.build_cover(&ctx.assignment_for_branch_rays(&[0, 5]).unwrap()).unwrap();
    assert!(is_isomorphic(&cover, &built));
}

#[test]
fn eikelberg_screen_recovers_the_multisets() {
    let (d, _) = fixture("eikelberg");
    let DimensionCheck::Ok { multisets } = necessary_dimension_check(&d) else { panic!("screen rejected valid data") };
    let got: Vec<Vec<(Vec<Rational>, u64)>> = multisets.iter().map(|m| m.entries.clone()).collect();
    assert_eq!(got, eikelberg_lists());
}

#[test]
fn p2_tangent_cover() {
    let (d, cert) = fixture("p2_tangent");
    verify(&d, &cert).unwrap();
    let (cover, psi) = branched_cover_of(&d, &cert).unwrap();
    cover.validate().unwrap();
    let fan = cover.fan();
    let max = cover.maximal_cells();
    assert_eq!(max.len(), 6);
    assert!(max.iter().all(|&c| cover.cell(c).weight == 1));
    assert_eq!(cover.cell(cover.minimal_cell().unwrap()).weight, 2);
    // σ_i omits ray i; its cells carry e_j* − e_i* for the two other rays j.
    for (i, &c) in psi.cells().iter().enumerate() {
        let k = fan.max_index(cover.cell(c).base).unwrap();
        let u = &psi.slopes()[i];
        let values: Vec<Rational> = (0..3).map(|r| u.iter().zip(fan.ray(r)).map(|(a, &b)| a * q(b)).sum()).collect();
        let j = (0..3).find(|&j| values[j] == q(1)).expect("one ray takes value 1");
        assert_ne!(j, k);
        let mut expected = vec![q(0); 3];
        expected[j] = q(1);
        expected[k] = q(-1);
        assert_eq!(values, expected);
    }
    assert!(!is_trivial_chern(&d, &cert).unwrap());
}

#[test]
fn rank_one_data_is_its_support_function() {
    let fan = Arc::new(data::fan("p2").unwrap());
    // The support function of u = (2, -1) and a twist on one ray.
    let d = KlyachkoData::line(fan.clone(), &[2, -1, -1]).unwrap();
    let cert = SplittingCertificate { cones: vec![vec![Piece { u: vec![2, -1], subspace: Subspace::full(1) }]; 3] };
    verify(&d, &cert).unwrap();
    let (cover, psi) = branched_cover_of(&d, &cert).unwrap();
    assert_eq!(cover.len(), fan.faces().len());
    assert!(psi.slopes().iter().all(|u| *u == qvec(&[2, -1])));
    let ch = chern(&d, &cert).unwrap();
    assert!(ch.multisets.iter().all(|m| m.entries.len() == 1));
    // O(D_1): zero on the cone away from ray 0.
    let d = KlyachkoData::line(fan.clone(), &[1, 0, 0]).unwrap();
    let cones = vec![vec![0, 0], vec![1, -1], vec![1, 0]]
        .into_iter()
        .map(|u| vec![Piece { u, subspace: Subspace::full(1) }])
        .collect();
    let cert = SplittingCertificate { cones };
    verify(&d, &cert).unwrap();
    assert!(!is_trivial_chern(&d, &cert).unwrap());
}

#[test]
fn fulton_rank_three_fixture() {
    let (d, cert) = fixture("fulton_rank3");
    assert_eq!(d.rank(), 3);
    let listed: Vec<Vec<Vec<i64>>> = vec![
        vec![vec![1, -1, 0], vec![0, -1, 1], vec![0, 0, 0]],
        vec![vec![0, -1, 1], vec![0, -1, -1], vec![1, 0, 1]],
        vec![vec![1, -1, 0], vec![0, -1, 1], vec![0, 0, 0]],
        vec![vec![1, 0, 1], vec![0, -2, 0], vec![0, 0, 0]],
        vec![vec![1, -1, 0], vec![-1, -1, 0], vec![1, 0, 1]],
        vec![vec![1, -1, 0], vec![0, -1, 1], vec![0, 0, 0]],
    ];
    for (pieces, us) in cert.cones.iter().zip(&listed) {
        let mut got: Vec<Vec<i64>> = pieces.iter().map(|p| p.u.clone()).collect();
        let mut want = us.clone();
        got.sort();
        want.sort();
        assert_eq!(got, want);
    }
    // The listed multisets differ across cones.
    assert_ne!(listed[0], listed[1]);
    // The listed filtrations admit no splitting with these multisets.
    let violation = verify(&d, &cert).unwrap_err();
    assert_eq!(violation.cone, 0);
    assert!(chern(&d, &cert).is_err());
}

#[test]
fn three_lines_on_one_cone_fail_the_screen() {
    let fan = Arc::new(Fan::new(3, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], vec![vec![0, 1, 2]]).unwrap());
    let lines = [line(&[1, 0]), line(&[0, 1]), line(&[1, 1])];
    let filtrations =
        lines.iter().map(|l| Filtration::new(2, vec![(0, Subspace::full(2)), (1, l.clone())]).unwrap()).collect();
    let d = KlyachkoData::new(fan, 2, filtrations).unwrap();
    let check = necessary_dimension_check(&d);
    assert!(matches!(check, DimensionCheck::Violation { cone: 0, .. }));
    assert!(check.is_conclusive());
}

#[test]
fn screen_rejects_values_of_no_integral_functional() {
    // On the cone spanned by (1,0) and (1,2), values (0, 1) need u_2 = 1/2.
    let fan = Arc::new(Fan::new(2, vec![vec![1, 0], vec![1, 2]], vec![vec![0, 1]]).unwrap());
    let d = KlyachkoData::line(fan, &[0, 1]).unwrap();
    assert!(matches!(necessary_dimension_check(&d), DimensionCheck::Violation { .. }));
}

#[test]
fn dual_of_a_line_negates_the_jump() {
    let f = Filtration::single(1, 5);
    assert_eq!(f.dual().jumps(), vec![-5]);
    assert_eq!(f.dual().at(-5), Subspace::full(1));
    assert!(f.dual().at(-4).is_zero());
}

#[test]
fn dual_of_eikelberg_data() {
    let (d, cert) = fixture("eikelberg");
    let dd = dual(&d);
    // E^ρ2: E up to -12, L = span(1,0) up to 18.
    let f = dd.filtration(1);
    assert_eq!(f.steps(), &[(-18, Subspace::full(2)), (12, line(&[0, 1]))]);
    for r in 0..6 {
        let orig = d.filtration(r);
        for i in -25..25 {
            assert_eq!(dd.filtration(r).at(i), orig.at(1 - i).annihilator());
        }
    }
    assert_eq!(dual(&dd), d);
    let dc = cert.dual();
    verify(&dd, &dc).unwrap();
    let negated: Vec<Vec<Vec<Rational>>> =
        chern(&d, &cert).unwrap().multisets.iter().map(|m| m.entries.iter().map(|(u, _)| u.iter().map(|x| -x).collect()).collect()).collect();
    for (m, want) in chern(&dd, &dc).unwrap().multisets.iter().zip(negated) {
        let mut want = want;
        want.sort();
        assert_eq!(m.entries.iter().map(|(u, _)| u.clone()).collect::<Vec<_>>(), want);
    }
}

#[test]
fn direct_sums() {
    let fan = Arc::new(data::fan("p2").unwrap());
    let a = KlyachkoData::line(fan.clone(), &[1, 0, 0]).unwrap();
    let ca = SplittingCertificate {
        cones: vec![vec![0, 0], vec![1, -1], vec![1, 0]].into_iter().map(|u| vec![Piece { u, subspace: Subspace::full(1) }]).collect(),
    };
    let b = KlyachkoData::line(fan.clone(), &[1, 1, 1]).unwrap();
    let cb = SplittingCertificate { cones: vec![vec![Piece { u: vec![-2, 1], subspace: Subspace::full(1) }], vec![Piece { u: vec![1, -2], subspace: Subspace::full(1) }], vec![Piece { u: vec![1, 1], subspace: Subspace::full(1) }]] };
    verify(&b, &cb).unwrap();
    let s = direct_sum(&a, &b).unwrap();
    let cs = ca.direct_sum(&cb, 1, 1).unwrap();
    assert_eq!(s.rank(), 2);
    verify(&s, &cs).unwrap();
    let union: Vec<Vec<(Vec<Rational>, u64)>> = ca
        .multisets()
        .iter()
        .zip(cb.multisets())
        .map(|(x, y)| {
            let mut m = x.entries.clone();
            for e in y.entries {
                match m.iter_mut().find(|(u, _)| *u == e.0) {
                    Some(slot) => slot.1 += e.1,
                    None => m.push(e),
                }
            }
            m.sort();
            m
        })
        .collect();
    let got: Vec<Vec<(Vec<Rational>, u64)>> = chern(&s, &cs).unwrap().multisets.iter().map(|m| m.entries.clone()).collect();
    assert_eq!(got, union);
    assert_eq!(dual(&s), direct_sum(&dual(&a), &dual(&b)).unwrap());
    let other = Arc::new(data::fan("fulton").unwrap());
    assert!(direct_sum(&a, &KlyachkoData::line(other, &[0; 8]).unwrap()).is_err());
}

#[test]
fn trivial_line_sums_have_trivial_chern() {
    let fan = Arc::new(data::fan("fulton").unwrap());
    let chars = vec![vec![1, 0, 2], vec![0, -1, 1], vec![1, 0, 2]];
    let g: Vec<Vec<Rational>> = vec![qvec(&[1, 1, 0]), qvec(&[0, 1, 1]), qvec(&[1, 0, 1])];
    let (d, cert) = common::split_data(fan, &chars, &g);
    verify(&d, &cert).unwrap();
    let ch = chern(&d, &cert).unwrap();
    assert!(ch.is_trivial());
    assert_eq!(ch.multisets[0].entries, vec![(qvec(&[0, -1, 1]), 1), (qvec(&[1, 0, 2]), 2)]);
}

#[test]
fn interpolation_reproduces_filtrations() {
    for name in ["eikelberg", "p2_tangent"] {
        let (d, cert) = fixture(name);
        let fan = d.fan();
        for r in 0..fan.num_rays() {
            let v = fan.ray_as_rational(r);
            for i in -30..30 {
                assert_eq!(interpolate(&d, &cert, &v, &q(i)).unwrap(), d.filtration(r).at(i), "{name} ray {r} i {i}");
            }
            assert_eq!(interpolate(&d, &cert, &v, &q(-1000)).unwrap(), Subspace::full(d.rank()));
        }
    }
}

#[test]
fn flags_at_interior_points() {
    let fan = Arc::new(data::fan("fulton").unwrap());
    let chars = vec![vec![1, -1, 0], vec![0, -1, 1], vec![0, 0, 0]];
    let g: Vec<Vec<Rational>> = vec![qvec(&[1, 2, 0]), qvec(&[0, 1, -1]), qvec(&[3, 0, 1])];
    let (d, cert) = common::split_data(fan.clone(), &chars, &g);
    // An interior point of the first maximal cone: the sum of its rays.
    let v: Vec<Rational> = (0..3).map(|x| fan.max_cone(0).rays.iter().map(|&r| q(fan.ray(r)[x])).sum()).collect();
    let fl = flag(&d, &cert, &v).unwrap();
    assert_eq!(fl.iter().map(Subspace::dim).collect::<Vec<_>>(), vec![1, 2, 3]);
    // Oracle: order the lines by ⟨u, v⟩ and accumulate.
    let mut order: Vec<(Rational, usize)> =
        chars.iter().enumerate().map(|(i, u)| (u.iter().zip(&v).map(|(a, b)| q(*a) * b).sum(), i)).collect();
    order.sort_by(|a, b| b.cmp(a));
    let mut acc = Subspace::zero(3);
    for (k, &(_, i)) in order.iter().enumerate() {
        acc = acc.sum(&Subspace::span(3, &[g[i].clone()]).unwrap()).unwrap();
        assert_eq!(fl[k], acc);
    }
    assert_eq!(flag(&d, &cert, &qvec(&[0, 0, 0])).unwrap(), vec![Subspace::full(3)]);
    // A point with the same order pattern gives the same flag.
    let w: Vec<Rational> = v.iter().map(|x| x * frac(3, 2)).collect();
    assert_eq!(flag(&d, &cert, &w).unwrap(), fl);
}

#[test]
fn outside_support_is_an_error() {
    let fan = Arc::new(Fan::new(2, vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1]]).unwrap());
    let d = KlyachkoData::line(fan, &[0, 0]).unwrap();
    let cert = SplittingCertificate { cones: vec![vec![Piece { u: vec![0, 0], subspace: Subspace::full(1) }]] };
    assert!(interpolate(&d, &cert, &qvec(&[-1, 0]), &q(0)).is_err());
}

#[test]
fn pullback_along_identity_is_unchanged() {
    for name in ["eikelberg", "p2_tangent"] {
        let (d, cert) = fixture(name);
        let n = d.fan().rank();
        let id: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        let (p, pc) = pullback(&d, &cert, &id, d.fan().clone()).unwrap();
        assert_eq!(p, d);
        let sorted = |c: &SplittingCertificate| -> Vec<Vec<Piece>> {
            c.cones.iter().map(|ps| { let mut ps = ps.clone(); ps.sort_by(|a, b| a.u.cmp(&b.u)); ps }).collect()
        };
        assert_eq!(sorted(&pc), sorted(&cert));
    }
}

#[test]
fn pullback_of_a_line_along_a_projection() {
    let p1 = Arc::new(Fan::new(1, vec![vec![1], vec![-1]], vec![vec![0], vec![1]]).unwrap());
    let d = KlyachkoData::line(p1, &[3, -2]).unwrap();
    let cert = SplittingCertificate {
        cones: vec![vec![Piece { u: vec![3], subspace: Subspace::full(1) }], vec![Piece { u: vec![2], subspace: Subspace::full(1) }]],
    };
    verify(&d, &cert).unwrap();
    let square = Arc::new(
        Fan::new(2, vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]], vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]]).unwrap(),
    );
    let phi = vec![vec![1, 0]];
    let (p, pc) = pullback(&d, &cert, &phi, square.clone()).unwrap();
    verify(&p, &pc).unwrap();
    // Direct computation: the value at each ray is ⟨u, φ(v)⟩ on a cone containing φ(v).
    for r in 0..4 {
        let x = square.ray(r)[0];
        let expected = if x >= 0 { 3 * x } else { 2 * x };
        assert_eq!(p.filtration(r).jumps(), vec![expected]);
    }
    // A map that folds a cone across the origin is rejected.
    let p2 = Arc::new(data::fan("p2").unwrap());
    assert!(pullback(&d, &cert, &phi, p2).is_err());
}

#[test]
fn equal_chern_matches_isomorphic_covers() {
    let (d, cert) = fixture("eikelberg");
    let mut r = common::rng(7);
    let g = common::invertible(&mut r, 2);
    let (d2, c2) = common::twisted(&d, &cert, &g, &[0, 0, 0]);
    verify(&d2, &c2).unwrap();
    let (a, pa) = branched_cover_of(&d, &cert).unwrap();
    let (b, pb) = branched_cover_of(&d2, &c2).unwrap();
    assert!(equal_chern(&chern(&d, &cert).unwrap(), &chern(&d2, &c2).unwrap()));
    assert!(is_isomorphic(&a, &b));
    assert_eq!(pa.multisets(), pb.multisets());
    let (d3, c3) = common::twisted(&d, &cert, &g, &[1, 0, 0]);
    verify(&d3, &c3).unwrap();
    assert!(!equal_chern(&chern(&d, &cert).unwrap(), &chern(&d3, &c3).unwrap()));
    let (_, p3) = branched_cover_of(&d3, &c3).unwrap();
    assert_ne!(pa.multisets(), p3.multisets());
}

#[test]
fn bundle_files_round_trip() {
    for name in data::BUNDLE_NAMES {
        let b = data::bundle(name).unwrap();
        let fan_name = if name == "fulton_rank3" { "fulton" } else if name == "p2_tangent" { "p2" } else { name };
        let text = bundle_to_json(&b, FanRef::Named(fan_name.into())).to_string();
        let Bundle { data: d, certificate } = bundle_from_json(&text, None).unwrap();
        assert_eq!(d, b.data);
        assert_eq!(certificate, b.certificate);
    }
}

#[test]
fn malformed_filtrations_are_rejected() {
    let full = Subspace::full(2);
    assert!(Filtration::new(2, vec![(0, line(&[1, 0])), (1, line(&[1, 0]))]).is_err());
    assert!(Filtration::new(2, vec![(0, full.clone()), (0, line(&[1, 0]))]).is_err());
    assert!(Filtration::new(2, vec![(0, full.clone()), (1, line(&[1, 0])), (2, line(&[0, 1]))]).is_err());
    let f = Filtration::new(2, vec![(0, full.clone()), (1, full.clone()), (3, line(&[1, 0])), (4, Subspace::zero(2))]).unwrap();
    assert_eq!(f.steps(), &[(1, full), (3, line(&[1, 0]))]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]
    #[test]
    fn dual_is_an_involution(seed in any::<u64>(), r in 1usize..=3, which in 0usize..4) {
        let name = data::FAN_NAMES[which];
        let fan = Arc::new(data::fan(name).unwrap());
        let mut g = common::rng(seed);
        let d = common::random_data(&mut g, fan.clone(), r);
        prop_assert_eq!(dual(&dual(&d)), d.clone());
        let e = common::random_data(&mut g, fan, 1);
        prop_assert_eq!(dual(&direct_sum(&d, &e).unwrap()), direct_sum(&dual(&d), &dual(&e)).unwrap());
    }

    #[test]
    fn verified_bundles_pass_the_screen(seed in any::<u64>(), which in 0usize..2, twist in proptest::collection::vec(-3i64..=3, 3)) {
        let name = ["eikelberg", "p2_tangent"][which];
        let (d, cert) = fixture(name);
        let mut g = common::rng(seed);
        let m = common::invertible(&mut g, d.rank());
        let (d2, c2) = common::twisted(&d, &cert, &m, &twist[..d.fan().rank()]);
        prop_assert!(verify(&d2, &c2).is_ok());
        match necessary_dimension_check(&d2) {
            DimensionCheck::Ok { multisets } => prop_assert_eq!(multisets, c2.multisets()),
            DimensionCheck::Violation { .. } => prop_assert!(false, "screen rejected verified data"),
        }
        let (cover, psi) = branched_cover_of(&d2, &c2).unwrap();
        prop_assert!(cover.validate().is_ok());
        prop_assert!(psi.is_consistent());
        prop_assert_eq!(psi.multisets(), chern(&d2, &c2).unwrap().multisets);
        for r in 0..d2.fan().num_rays() {
            let v = d2.fan().ray_as_rational(r);
            for i in -40..40 {
                prop_assert_eq!(interpolate(&d2, &c2, &v, &q(i)).unwrap(), d2.filtration(r).at(i));
            }
        }
    }
}
