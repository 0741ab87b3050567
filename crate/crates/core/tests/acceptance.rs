//! End-to-end acceptance checks. Prints one PASS or FAIL line per criterion
//! and exits nonzero if any criterion fails.

mod common;

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use fanbranch::census::branch_census;
use fanbranch::cover::CoverPoset;
use fanbranch::data;
use fanbranch::fan::pair;
use fanbranch::klyachko::{branched_cover_of, dual, interpolate, is_trivial_chern, verify, KlyachkoData, SplittingCertificate};
use fanbranch::linalg::{q, qvec, zvec, Rational};
use fanbranch::monodromy::MonodromyContext;
use fanbranch::pl::{
    group_triviality, group_triviality_of, is_trivial_function, per_cell_dimension, solve, values_at_rays, Certificate, Mode,
    PLFunction, Verdict,
};
use fanbranch::sweep::{run_sweep, Sweep, SweepOptions};
use fanbranch::Fan;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn fan(name: &str) -> Arc<Fan> {
    Arc::new(data::fan(name).unwrap())
}

fn branched(name: &str, rays: &[usize]) -> Arc<CoverPoset> {
    let ctx = MonodromyContext::new(fan(name)).unwrap();
    Arc::new(ctx.build_cover(&ctx.assignment_for_branch_rays(rays).unwrap()).unwrap())
}

fn jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn within(elapsed: Duration, limit: Duration) -> Outcome {
    if elapsed <= limit {
        Ok(format!("{:.2}s", elapsed.as_secs_f64()))
    } else {
        Err(format!("took {:.2}s, limit {:.0}s", elapsed.as_secs_f64(), limit.as_secs_f64()))
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let f = fan("fulton");
    ensure!(f.is_complete().unwrap(), "fan is not complete");
    let counts = (f.num_rays(), f.num_max_cones(), f.walls().len());
    ensure!(counts == (8, 6, 12), "counts {counts:?}");
    let rel = f.wall_relation(0).unwrap();
    let expected = zvec(&[2, -4, 3, -5]);
    let negated: Vec<_> = expected.iter().map(|x| -x).collect();
    ensure!(rel == vec![expected.clone()] || rel == vec![negated], "relation {rel:?}");
    let t = within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("complete, 8 rays, 6 cones, 12 walls, relation ±(2,-4,3,-5), {t}"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let cover = branched("fulton", &[0, 2, 5, 7]);
    let v = values_at_rays(&cover).unwrap();
    let shape = (v.matrix.len(), v.columns.len());
    ensure!(shape == (12, 12), "matrix shape {shape:?}");
    ensure!(v.rank() == 9, "rank {}", v.rank());
    let basis = solve(cover, Mode::Rational).unwrap();
    ensure!(basis.dim() == 3, "dimension {}", basis.dim());
    let verdict = group_triviality_of(&basis);
    ensure!(matches!(verdict, Verdict::AllTrivial(Certificate::PullbacksOnly)), "verdict {verdict}");
    let t = within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("12x12 of rank 9, dimension 3, pullbacks-only, {t}"))
}

fn criterion_3() -> Outcome {
    let ctx = MonodromyContext::new(fan("fulton")).unwrap();
    let census = branch_census(&ctx, 2);
    ensure!(census.total == 128, "total {}", census.total);
    ensure!(census.admissible.len() == 18, "admissible {}", census.admissible.len());
    // Type A: two rays at distance three. Type B: two rays at distance two.
    // Type C: four rays.
    let count = |pred: &dyn Fn(&fanbranch::census::BranchOrbit) -> bool| -> usize {
        census.orbits.iter().filter(|o| pred(o)).map(|o| o.members.len()).sum()
    };
    let a = count(&|o| o.representative.len() == 2 && o.distances == vec![3]);
    let b = count(&|o| o.representative.len() == 2 && o.distances == vec![2]);
    let c = count(&|o| o.representative.len() == 4);
    ensure!((a, b, c) == (4, 12, 2), "orbit counts {a}/{b}/{c}");
    ensure!(a + b + c == 18, "orbits do not cover the admissible sets");
    Ok("128 assignments, 18 admissible, types 4 / 12 / 2".into())
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let sweep = Sweep::new(fan("fulton"), 2).unwrap();
    let s = run_sweep(&sweep, &SweepOptions { jobs: jobs(), ..Default::default() }, |_, _| {}).map_err(|e| e.to_string())?;
    ensure!(s.processed == 128, "processed {}", s.processed);
    ensure!(s.nontrivial.is_empty(), "{} nontrivial", s.nontrivial.len());
    let t = within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!("128 covers all trivial {:?}, {t}", s.by_verdict))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let sweep = Sweep::new(fan("sigma_prime"), 3).unwrap();
    let s = run_sweep(&sweep, &SweepOptions { jobs: jobs(), ..Default::default() }, |_, _| {}).map_err(|e| e.to_string())?;
    ensure!(s.processed == 279_936, "processed {}", s.processed);
    ensure!(
        s.nontrivial.is_empty(),
        "{} nontrivial, first branched over {:?}",
        s.nontrivial.len(),
        s.nontrivial[0].branch_rays
    );
    let t = within(start.elapsed(), Duration::from_secs(30 * 60))?;
    Ok(format!("279936 covers, 0 nontrivial {:?}, {t}", s.by_verdict))
}

fn eikelberg_table() -> Vec<Vec<Vec<Rational>>> {
    [
        [[15, -15, 3], [3, 3, -9]],
        [[16, -14, -4], [2, 2, -2]],
        [[12, -18, 0], [6, 6, -6]],
        [[24, -18, 0], [-6, 6, -6]],
        [[12, -6, 0], [6, -6, -6]],
    ]
    .iter()
    .map(|pair| pair.iter().map(|u| qvec(u)).collect())
    .collect()
}

fn criterion_6() -> Outcome {
    let f = fan("eikelberg");
    ensure!(f.is_complete().unwrap(), "fan is not complete");
    let cover = branched("eikelberg", &[0, 5]);
    let psi = PLFunction::from_multisets(cover.clone(), &eikelberg_table()).map_err(|e| format!("Ψ does not fit: {e}"))?;
    ensure!(psi.is_consistent(), "Ψ is inconsistent");
    ensure!(!is_trivial_function(&psi), "Ψ is trivial");
    let basis = solve(cover.clone(), Mode::Rational).unwrap();
    ensure!(basis.spans(&psi), "Ψ outside the solved space");
    ensure!(!group_triviality(cover).unwrap().is_trivial(), "cover reported all trivial");
    let b = data::bundle("eikelberg").unwrap();
    let cert = b.certificate.unwrap();
    verify(&b.data, &cert).map_err(|v| format!("bundle fails: {v}"))?;
    let (bc, bpsi) = branched_cover_of(&b.data, &cert).unwrap();
    let mut rays: Vec<usize> = bc.ramification_cells().iter().filter_map(|&c| bc.ray_of(c)).collect();
    rays.sort_unstable();
    ensure!(rays == vec![0, 5], "bundle cover branched over {rays:?}");
    let mut table: Vec<Vec<Vec<Rational>>> = eikelberg_table();
    table.iter_mut().for_each(|m| m.sort());
    let got: Vec<Vec<Vec<Rational>>> = bpsi.multisets().iter().map(|m| m.entries.iter().map(|(u, _)| u.clone()).collect()).collect();
    ensure!(got == table, "multisets {got:?}");
    ensure!(bpsi.multisets() == psi.multisets(), "bundle Ψ differs from the listed Ψ");
    Ok("cover over ρ1, ρ6 carries the listed nontrivial Ψ; bundle verifies and reproduces it".into())
}

fn criterion_7() -> Outcome {
    let b = data::bundle("fulton_rank3").unwrap();
    let cert = b.certificate.unwrap();
    let listed = cert.multisets();
    let listed_differ = listed.windows(2).any(|w| w[0].entries != w[1].entries);
    verify(&b.data, &cert)
        .map_err(|v| format!("fixture does not verify: {v}; the listed multisets alone differ across cones: {listed_differ}"))?;
    ensure!(!is_trivial_chern(&b.data, &cert).unwrap(), "Chern data trivial");
    Ok("fixture verifies; Chern data nontrivial".into())
}

fn criterion_8() -> Outcome {
    let b = data::bundle("p2_tangent").unwrap();
    let cert = b.certificate.unwrap();
    let (cover, psi) = branched_cover_of(&b.data, &cert).map_err(|e| e.to_string())?;
    let max = cover.maximal_cells();
    ensure!(max.len() == 6, "{} maximal cells", max.len());
    ensure!(max.iter().all(|&c| cover.cell(c).weight == 1), "maximal weights");
    let min = cover.minimal_cell().map(|c| cover.cell(c).weight);
    ensure!(min == Some(2), "minimal weight {min:?}");
    let f = cover.fan();
    for (i, &c) in psi.cells().iter().enumerate() {
        let k = f.max_index(cover.cell(c).base).unwrap();
        let values: Vec<Rational> = (0..3).map(|r| pair(&psi.slopes()[i], f.ray(r))).collect();
        let j = (0..3).find(|&j| j != k && values[j] == q(1)).ok_or(format!("cell {c}: no ray with value 1"))?;
        let mut expected = vec![q(0); 3];
        expected[j] = q(1);
        expected[k] = q(-1);
        ensure!(values == expected, "cell {c}: values {values:?}");
    }
    Ok("6 maximal cells of weight 1, apex weight 2, Ψ = e_j* - e_i* on each".into())
}

fn riemann_hurwitz(ctx: &MonodromyContext, a: &fanbranch::monodromy::MonodromyAssignment, cover: &CoverPoset) -> bool {
    let d = a.degree as i64;
    let defect: i64 = (0..ctx.fan().num_rays()).map(|r| d - ctx.ray_monodromy(a, r).cycle_count() as i64).sum();
    cover.euler_characteristic() == 2 * d - defect
}

fn criterion_9() -> Outcome {
    let mut notes = Vec::new();
    // (a), (b), (e), (f) on every Fulton degree-2 cover and every Eikelberg
    // degree-2 cover, with a sample of Σ′ degree-3 covers for (a) and (b).
    let mut covers = 0;
    for (name, d, step) in [("fulton", 2, 1u128), ("eikelberg", 2, 1), ("sigma_prime", 3, 97)] {
        let ctx = MonodromyContext::new(fan(name)).unwrap();
        let mut i = 0u128;
        while i < ctx.count(d) {
            let a = ctx.assignments_in(d, i, i + 1).next().unwrap();
            let cover = Arc::new(ctx.build_cover(&a).unwrap());
            ensure!(cover.validate().is_ok(), "(a) {name} assignment {i} invalid");
            ensure!(riemann_hurwitz(&ctx, &a, &cover), "(b) {name} assignment {i} violates Riemann-Hurwitz");
            if d == 2 {
                let basis = solve(cover.clone(), Mode::Rational).unwrap();
                ensure!(basis.dim() >= 3, "(e) {name} assignment {i}: dimension {}", basis.dim());
                for x in 0..3 {
                    let mut u = vec![q(0); 3];
                    u[x] = q(1);
                    ensure!(basis.spans(&PLFunction::pullback(cover.clone(), &u)), "(e) {name} assignment {i}: pullback missing");
                }
                if name == "fulton" {
                    let v = values_at_rays(&cover).unwrap().dimension();
                    ensure!(per_cell_dimension(&cover) == v && v == basis.dim(), "(f) assignment {i}: formulations disagree");
                }
            }
            covers += 1;
            i += step;
        }
    }
    for name in ["eikelberg", "p2_tangent"] {
        let b = data::bundle(name).unwrap();
        let (cover, _) = branched_cover_of(&b.data, b.certificate.as_ref().unwrap()).unwrap();
        ensure!(cover.validate().is_ok(), "(a) cover of bundle {name} invalid");
        covers += 1;
    }
    notes.push(format!("(a)(b) {covers} covers"));
    notes.push("(e)(f) all degree-2 covers of two fans".into());
    // (c) on random filtration families over all bundled fans.
    let mut rng = common::rng(2024);
    for i in 0..100 {
        let name = data::FAN_NAMES[i % data::FAN_NAMES.len()];
        let d = common::random_data(&mut rng, fan(name), 1 + i % 3);
        ensure!(dual(&dual(&d)) == d, "(c) fixture {i} on {name}");
    }
    notes.push("(c) 100 random fixtures".into());
    // (d) on every fixture with a verified splitting, plus twists of them.
    let mut fixtures: Vec<(String, KlyachkoData, SplittingCertificate)> = Vec::new();
    let mut excluded = Vec::new();
    for name in data::BUNDLE_NAMES {
        let b = data::bundle(name).unwrap();
        let cert = b.certificate.unwrap();
        if verify(&b.data, &cert).is_ok() {
            for s in 0..5u64 {
                let g = common::invertible(&mut rng, b.data.rank());
                let u0: Vec<i64> = (0..3).map(|x| (s as i64 + x) % 3 - 1).collect();
                let (d2, c2) = common::twisted(&b.data, &cert, &g, &u0[..b.data.fan().rank()]);
                fixtures.push((format!("{name} twist {s}"), d2, c2));
            }
            fixtures.push((name.to_string(), b.data, cert));
        } else {
            excluded.push(name);
        }
    }
    for (name, d, cert) in &fixtures {
        verify(d, cert).map_err(|v| format!("(d) {name}: {v}"))?;
        for r in 0..d.fan().num_rays() {
            let v = d.fan().ray_as_rational(r);
            for i in -40..40 {
                ensure!(interpolate(d, cert, &v, &q(i)).unwrap() == d.filtration(r).at(i), "(d) {name} ray {r} threshold {i}");
            }
        }
    }
    notes.push(format!("(d) {} fixtures; excluded for lack of a valid splitting: {excluded:?}", fixtures.len()));
    Ok(notes.join("; "))
}

fn main() {
    let criteria: [(usize, fn() -> Outcome); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    let mut out = std::io::stdout();
    for (n, f) in criteria {
        if !only.is_empty() && !only.contains(&n) {
            continue;
        }
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => writeln!(out, "criterion {n}: PASS ({detail})").unwrap(),
            Err(detail) => {
                failed += 1;
                writeln!(out, "criterion {n}: FAIL ({detail})").unwrap();
            }
        }
        out.flush().unwrap();
    }
    if failed > 0 {
        writeln!(out, "{failed} acceptance criteria failed").unwrap();
        std::process::exit(1);
    }
}
