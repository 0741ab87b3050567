//! Reruns the worked examples and compares the results with the expected
//! values bundled in `data/expected.json`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::census::branch_census;
use crate::data;
use crate::error::{Error, Result};
use crate::klyachko::{branched_cover_of, chern, verify};
use crate::linalg::{q, Rational};
use crate::monodromy::MonodromyContext;
use crate::pl::{group_triviality_of, solve, values_at_rays, ConeMultiset, Mode, PLFunction};
use crate::sweep::{run_sweep, Sweep, SweepOptions, SweepSummary};

pub const NAMES: [&str; 5] = ["eikelberg", "fulton-deg2", "fulton-rank3", "sigma-prime-deg3", "p2-tangent"];

const EXPECTED: &str = include_str!("../data/expected.json");

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub key: String,
    pub expected: Value,
    pub actual: Value,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.expected == self.actual
    }
}

#[derive(Clone, Debug)]
pub struct Reproduction {
    pub name: String,
    /// Free-form report lines.
    pub report: Vec<String>,
    pub checks: Vec<Check>,
}

impl Reproduction {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

/// The bundled expected values for one example.
pub fn expected(name: &str) -> Result<BTreeMap<String, Value>> {
    let all: BTreeMap<String, BTreeMap<String, Value>> = serde_json::from_str(EXPECTED)?;
    all.get(name).cloned().ok_or_else(|| Error::Format(format!("no example named {name:?}; known: {}", NAMES.join(", "))))
}

/// Runs one example. `sweep` configures the exhaustive sweeps.
pub fn reproduce(name: &str, sweep: &SweepOptions, progress: impl FnMut(u64, u64)) -> Result<Reproduction> {
    let expected = expected(name)?;
    let mut out = Out::default();
    match name {
        "eikelberg" => eikelberg(&mut out)?,
        "fulton-deg2" => fulton_deg2(&mut out, sweep)?,
        "fulton-rank3" => fulton_rank3(&mut out)?,
        "sigma-prime-deg3" => sigma_prime(&mut out, sweep, progress)?,
        "p2-tangent" => p2_tangent(&mut out)?,
        _ => unreachable!("expected() rejects unknown names"),
    }
    let checks = expected
        .into_iter()
        .map(|(key, expected)| {
            let actual = out.values.remove(&key).unwrap_or(Value::Null);
            Check { key, expected, actual }
        })
        .collect();
    Ok(Reproduction { name: name.to_string(), report: out.report, checks })
}

#[derive(Default)]
struct Out {
    values: BTreeMap<String, Value>,
    report: Vec<String>,
}

impl Out {
    fn set(&mut self, key: &str, v: Value) {
        self.values.insert(key.to_string(), v);
    }

    fn line(&mut self, s: impl Into<String>) {
        self.report.push(s.into());
    }
}

fn multisets_json(ms: &[ConeMultiset]) -> Value {
    Value::Array(
        ms.iter()
            .map(|m| {
                let mut flat: Vec<Value> = Vec::new();
                for (u, k) in &m.entries {
                    for _ in 0..*k {
                        flat.push(json!(u.iter().map(Rational::to_string).collect::<Vec<_>>()));
                    }
                }
                Value::Array(flat)
            })
            .collect(),
    )
}

fn fan_values(out: &mut Out, name: &str) -> Result<Arc<crate::Fan>> {
    let fan = Arc::new(data::fan(name)?);
    let complete = fan.is_complete()?;
    out.set("fan.complete", json!(complete));
    out.set("fan.rays", json!(fan.num_rays()));
    out.set("fan.max_cones", json!(fan.num_max_cones()));
    out.set("fan.walls", json!(fan.walls().len()));
    out.line(format!(
        "fan {name}: {}, {} rays, {} maximal cones, {} walls",
        if complete { "complete" } else { "not complete" },
        fan.num_rays(),
        fan.num_max_cones(),
        fan.walls().len()
    ));
    Ok(fan)
}

fn summary_lines(out: &mut Out, s: &SweepSummary) {
    out.set("sweep.assignments", json!(s.processed));
    out.set("sweep.nontrivial", json!(s.nontrivial.len()));
    out.line(format!("sweep: {} of {} assignments, {} nontrivial", s.processed, s.total, s.nontrivial.len()));
    for (tag, n) in &s.by_verdict {
        out.line(format!("  {tag}: {n}"));
    }
    for r in &s.nontrivial {
        out.line(format!("  nontrivial: assignment {} branched over {:?}", r.index, r.branch_rays));
    }
}

fn eikelberg(out: &mut Out) -> Result<()> {
    let fan = fan_values(out, "eikelberg")?;
    let ctx = MonodromyContext::new(fan.clone())?;
    let a = ctx.assignment_for_branch_rays(&[0, 5])?;
    out.set("cover.branch_rays", json!(ctx.branch_rays(&a)));
    let cover = Arc::new(ctx.build_cover(&a)?);
    let lists: Vec<Vec<Vec<Rational>>> = [
        [[15, -15, 3], [3, 3, -9]],
        [[16, -14, -4], [2, 2, -2]],
        [[12, -18, 0], [6, 6, -6]],
        [[24, -18, 0], [-6, 6, -6]],
        [[12, -6, 0], [6, -6, -6]],
    ]
    .iter()
    .map(|pair| pair.iter().map(|u| u.iter().map(|&x| q(x)).collect()).collect())
    .collect();
    match PLFunction::from_multisets(cover.clone(), &lists) {
        Ok(psi) => {
            out.set("psi.consistent", json!(psi.is_consistent()));
            out.set("psi.trivial", json!(psi.is_trivial()));
            let basis = solve(cover.clone(), Mode::Rational)?;
            out.set("psi.in_solution_space", json!(basis.spans(&psi)));
            let verdict = group_triviality_of(&basis);
            out.set("psi.verdict", json!(verdict.tag()));
            out.line(format!("cover over rays 0 and 5: {} functions, verdict {}", basis.dim(), verdict.tag()));
        }
        Err(e) => out.line(format!("the listed functionals do not fit the cover: {e}")),
    }
    let sweep = Sweep::new(fan, 2)?;
    let summary = run_sweep(&sweep, &SweepOptions { jobs: 1, ..Default::default() }, |_, _| {})?;
    out.set(
        "sweep.branched_over_0_5_is_nontrivial",
        json!(summary.nontrivial.iter().any(|r| r.branch_rays == vec![0, 5])),
    );
    summary_lines(out, &summary);
    bundle_values(out, "eikelberg")
}

fn bundle_values(out: &mut Out, name: &str) -> Result<()> {
    let b = data::bundle(name)?;
    let cert = b.certificate.ok_or_else(|| Error::InvalidBundle("fixture has no certificate".into()))?;
    out.set("bundle.rank", json!(b.data.rank()));
    match verify(&b.data, &cert) {
        Ok(()) => out.set("bundle.verifies", json!(true)),
        Err(v) => {
            out.set("bundle.verifies", json!(false));
            out.line(format!("bundle {name} fails verification: {v}"));
            let listed = cert.multisets();
            let trivial = listed.windows(2).all(|w| w[0].entries == w[1].entries);
            out.set("listed_multisets.trivial", json!(trivial));
            out.line(format!("listed multisets: {}", multisets_json(&listed)));
            return Ok(());
        }
    }
    let ch = chern(&b.data, &cert)?;
    out.set("bundle.multisets", multisets_json(&ch.multisets));
    out.set("bundle.chern_trivial", json!(ch.is_trivial()));
    let (cover, psi) = branched_cover_of(&b.data, &cert)?;
    let mut rays: Vec<usize> = cover.ramification_cells().iter().filter_map(|&c| cover.ray_of(c)).collect();
    rays.sort_unstable();
    out.set("bundle.cover_branch_rays", json!(rays));
    out.set("cover.degree", json!(cover.degree()));
    out.line(format!("bundle {name}: cover of degree {} ramified over rays {rays:?}", cover.degree()));
    out.line(format!("Ψ multisets: {}", multisets_json(&psi.multisets())));
    Ok(())
}

fn fulton_deg2(out: &mut Out, opts: &SweepOptions) -> Result<()> {
    let fan = fan_values(out, "fulton")?;
    let rel = fan.wall_relation(0)?;
    if let [r] = rel.as_slice() {
        let negate = r.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
        let v: Vec<i64> = r.iter().map(|x| if negate { -x } else { x.clone() }).filter_map(|x| x.to_i64()).collect();
        out.set("fan.first_wall_relation", json!(v));
        out.line(format!("relation among the rays of the first maximal cone: {v:?}"));
    }
    let ctx = MonodromyContext::new(fan.clone())?;
    let cover = Arc::new(ctx.build_cover(&ctx.assignment_for_branch_rays(&[0, 2, 5, 7])?)?);
    let system = values_at_rays(&cover)?;
    out.set("type_c.matrix_shape", json!([system.matrix.len(), system.columns.len()]));
    out.set("type_c.matrix_rank", json!(system.rank()));
    let basis = solve(cover, Mode::Rational)?;
    out.set("type_c.dim_pl", json!(basis.dim()));
    let verdict = group_triviality_of(&basis);
    out.set("type_c.verdict", json!(verdict.tag()));
    out.line(format!(
        "cover over rays 0, 2, 5, 7: {}x{} system of rank {}, {} functions, {}",
        system.matrix.len(),
        system.columns.len(),
        system.rank(),
        basis.dim(),
        verdict.tag()
    ));
    let census = branch_census(&ctx, 2);
    out.set("census.total", json!(census.total as u64));
    out.set("census.admissible", json!(census.admissible.len()));
    let mut orbits: Vec<(usize, usize)> = census.orbits.iter().map(|o| (o.representative.len(), o.members.len())).collect();
    orbits.sort_unstable();
    out.set("census.orbits", json!(orbits));
    out.line(format!("census: {} assignments, {} with admissible branch sets", census.total, census.admissible.len()));
    for o in &census.orbits {
        out.line(format!("  orbit of {:?}: {} branch sets, ray distances {:?}", o.representative, o.members.len(), o.distances));
    }
    let sweep = Sweep::new(fan, 2)?;
    let summary = run_sweep(&sweep, &SweepOptions { cache: None, resume: false, ..opts.clone() }, |_, _| {})?;
    summary_lines(out, &summary);
    Ok(())
}

fn fulton_rank3(out: &mut Out) -> Result<()> {
    bundle_values(out, "fulton_rank3")
}

fn sigma_prime(out: &mut Out, opts: &SweepOptions, progress: impl FnMut(u64, u64)) -> Result<()> {
    let sweep = Sweep::new(Arc::new(data::fan("sigma_prime")?), 3)?;
    let summary = run_sweep(&sweep, opts, progress)?;
    summary_lines(out, &summary);
    Ok(())
}

fn p2_tangent(out: &mut Out) -> Result<()> {
    bundle_values(out, "p2_tangent")?;
    let b = data::bundle("p2_tangent")?;
    let Some(cert) = b.certificate else { return Ok(()) };
    let Ok((cover, psi)) = branched_cover_of(&b.data, &cert) else { return Ok(()) };
    let fan = cover.fan();
    let max = cover.maximal_cells();
    out.set("cover.maximal_cells", json!(max.len()));
    out.set("cover.maximal_weights", json!(max.iter().map(|&c| cover.cell(c).weight).collect::<Vec<_>>()));
    out.set("cover.minimal_weight", json!(cover.minimal_cell().map(|c| cover.cell(c).weight)));
    out.set("psi.trivial", json!(psi.is_trivial()));
    // The cone without ray i carries e_j* - e_i* in coordinates of values at
    // the rays, for one of the two rays j it contains.
    let mut all = true;
    for (i, &c) in psi.cells().iter().enumerate() {
        let k = fan.max_index(cover.cell(c).base).unwrap();
        let values: Vec<Rational> = (0..fan.num_rays()).map(|r| crate::fan::pair(&psi.slopes()[i], fan.ray(r))).collect();
        let ones: Vec<usize> = (0..values.len()).filter(|&r| values[r] == q(1)).collect();
        let ok = values[k] == q(-1) && ones.len() == 1 && ones[0] != k && values.iter().filter(|x| **x == q(0)).count() == values.len() - 2;
        out.line(format!(
            "cell {c} over the cone without ray {k}: values at rays {:?}",
            values.iter().map(Rational::to_string).collect::<Vec<_>>()
        ));
        all &= ok;
    }
    out.set("psi.is_difference_of_dual_basis_vectors", json!(all));
    Ok(())
}
