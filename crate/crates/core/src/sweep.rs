//! Exhaustive sweeps over all monodromy assignments of a fixed degree.
//!
//! Every assignment is turned into a cover, its piecewise-linear functions
//! are solved for and the triviality verdict is recorded. Records are
//! produced in parallel and written in index order, one JSON object per
//! line, so a cache is identical for any number of workers and an
//! interrupted sweep can be resumed.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::monodromy::{MonodromyContext, Permutation};
use crate::pl::{group_triviality_of, solve_with, values_at_rays_with, verify_verdict, Certificate, Mode, RelationTable, Verdict};

pub const VERDICT_TAGS: [&str; 4] = ["pullbacks-only", "wedge-of-pullbacks", "matched-pattern", "nontrivial"];

const BLOCK: u64 = 2048;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub index: u64,
    pub branch_rays: Vec<usize>,
    /// Cycle type of the monodromy around each branch ray.
    pub ramification: Vec<(usize, Vec<usize>)>,
    pub dim_pl: usize,
    pub verdict: String,
    #[serde(skip)]
    pub duration: Duration,
}

impl SweepRecord {
    pub fn is_nontrivial(&self) -> bool {
        self.verdict == "nontrivial"
    }
}

/// Per-fan state shared by all workers of a sweep.
pub struct Sweep {
    ctx: MonodromyContext,
    table: RelationTable,
    degree: usize,
    perms: Vec<Permutation>,
    total: u64,
}

impl Sweep {
    pub fn new(fan: Arc<Fan>, degree: usize) -> Result<Sweep> {
        if degree == 0 {
            return Err(Error::InvalidAssignment("degree must be positive".into()));
        }
        let table = RelationTable::new(&fan)?;
        let ctx = MonodromyContext::new(fan)?;
        let total = u64::try_from(ctx.count(degree))
            .map_err(|_| Error::InvalidAssignment(format!("too many assignments of degree {degree}")))?;
        Ok(Sweep { ctx, table, degree, perms: Permutation::all(degree), total })
    }

    pub fn context(&self) -> &MonodromyContext {
        &self.ctx
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    fn branch_data(&self, index: u64) -> (Vec<usize>, Vec<(usize, Vec<usize>)>) {
        let a = self.ctx.assignment_at(self.degree, u128::from(index), &self.perms);
        let ramification: Vec<(usize, Vec<usize>)> = (0..self.ctx.fan().num_rays())
            .filter_map(|r| {
                let m = self.ctx.ray_monodromy(&a, r);
                (!m.is_identity()).then(|| (r, m.cycle_type()))
            })
            .collect();
        (ramification.iter().map(|(r, _)| *r).collect(), ramification)
    }

    /// Builds, solves and decides the cover of one assignment.
    ///
    /// Covers whose functions have dimension equal to the rank are decided
    /// from the rank of the values-at-rays system alone.
    pub fn record(&self, index: u64) -> Result<SweepRecord> {
        let start = Instant::now();
        let a = self.ctx.assignment_at(self.degree, u128::from(index), &self.perms);
        let cover = Arc::new(self.ctx.build_cover(&a)?);
        let fan = self.ctx.fan();
        let n = fan.rank();
        let system = values_at_rays_with(&self.table, &cover);
        for x in 0..n {
            let values: Vec<i64> = system.columns.iter().map(|&e| fan.ray(cover.ray_of(e).unwrap())[x]).collect();
            if system.matrix.iter().any(|row| row.iter().zip(&values).map(|(a, b)| a * b).sum::<i64>() != 0) {
                return Err(Error::InvalidCover(format!("assignment {index}: coordinate pullback {x} violates the system")));
            }
        }
        let dim_pl = system.dimension();
        if dim_pl < n {
            return Err(Error::InvalidCover(format!("assignment {index}: dimension {dim_pl} below rank {n}")));
        }
        let verdict = if dim_pl == n {
            Certificate::PullbacksOnly.tag().to_string()
        } else {
            let basis = solve_with(&self.table, cover, Mode::Rational)?;
            let verdict = group_triviality_of(&basis);
            if basis.dim() != dim_pl || !verify_verdict(&basis, &verdict) {
                return Err(Error::InvalidCover(format!("assignment {index}: verdict failed re-verification")));
            }
            match verdict {
                Verdict::AllTrivial(c) => c.tag().to_string(),
                Verdict::Nontrivial(_) => "nontrivial".to_string(),
            }
        };
        let (branch_rays, ramification) = self.branch_data(index);
        Ok(SweepRecord { index, branch_rays, ramification, dim_pl, verdict, duration: start.elapsed() })
    }

    /// Processes `start..end` with `jobs` workers, handing records to `sink`
    /// in index order.
    pub fn run(&self, start: u64, end: u64, jobs: usize, mut sink: impl FnMut(&[SweepRecord]) -> Result<()>) -> Result<()> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| Error::Format(format!("cannot start workers: {e}")))?;
        let end = end.min(self.total);
        let mut lo = start;
        while lo < end {
            let hi = (lo + BLOCK).min(end);
            let block: Vec<SweepRecord> = pool.install(|| (lo..hi).into_par_iter().map(|i| self.record(i)).collect::<Result<_>>())?;
            sink(&block)?;
            lo = hi;
        }
        Ok(())
    }

    /// Checks a cached record against the assignment it claims to describe.
    fn check_cached(&self, line: usize, rec: &SweepRecord) -> Result<()> {
        let bad = |reason: String| Err(Error::CacheCorrupt { line, reason });
        if rec.index != (line - 1) as u64 {
            return bad(format!("expected index {}, found {}", line - 1, rec.index));
        }
        if rec.index >= self.total {
            return bad(format!("index {} beyond the {} assignments", rec.index, self.total));
        }
        if !VERDICT_TAGS.contains(&rec.verdict.as_str()) {
            return bad(format!("unknown verdict {:?}", rec.verdict));
        }
        let rank = self.ctx.fan().rank();
        if rec.dim_pl < rank || (rec.dim_pl == rank) != (rec.verdict == "pullbacks-only") {
            return bad(format!("dimension {} inconsistent with verdict {}", rec.dim_pl, rec.verdict));
        }
        let (branch_rays, ramification) = self.branch_data(rec.index);
        if rec.branch_rays != branch_rays || rec.ramification != ramification {
            return bad("branch data does not match this fan and degree".into());
        }
        Ok(())
    }

    /// Reads and validates a cache written by a sweep of this fan and degree.
    pub fn read_cache(&self, path: &Path) -> Result<Vec<SweepRecord>> {
        let mut out = Vec::new();
        let mut reader = BufReader::new(File::open(path)?);
        let mut text = String::new();
        let mut line = 0;
        loop {
            text.clear();
            if reader.read_line(&mut text)? == 0 {
                break;
            }
            line += 1;
            if !text.ends_with('\n') {
                return Err(Error::CacheCorrupt { line, reason: "truncated record".into() });
            }
            let rec: SweepRecord = serde_json::from_str(&text)
                .map_err(|e| Error::CacheCorrupt { line, reason: e.to_string() })?;
            self.check_cached(line, &rec)?;
            out.push(rec);
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, Default)]
pub struct SweepOptions {
    pub jobs: usize,
    pub cache: Option<PathBuf>,
    pub resume: bool,
    /// Stop after this many assignments in total (including cached ones).
    pub limit: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SweepSummary {
    pub total: u64,
    pub processed: u64,
    pub by_verdict: BTreeMap<String, u64>,
    pub max_dim: usize,
    pub nontrivial: Vec<SweepRecord>,
}

impl SweepSummary {
    pub fn add(&mut self, rec: &SweepRecord) {
        self.processed += 1;
        *self.by_verdict.entry(rec.verdict.clone()).or_default() += 1;
        self.max_dim = self.max_dim.max(rec.dim_pl);
        if rec.is_nontrivial() {
            self.nontrivial.push(rec.clone());
        }
    }

    pub fn from_records(total: u64, records: &[SweepRecord]) -> SweepSummary {
        let mut s = SweepSummary { total, ..Default::default() };
        for r in records {
            s.add(r);
        }
        s
    }

    pub fn is_complete(&self) -> bool {
        self.processed == self.total
    }
}

/// Runs a sweep, appending to the cache if one is given. With a cache the
/// summary is recomputed from its contents.
pub fn run_sweep(sweep: &Sweep, opts: &SweepOptions, mut progress: impl FnMut(u64, u64)) -> Result<SweepSummary> {
    let total = sweep.total();
    let end = opts.limit.map_or(total, |l| l.min(total));
    let Some(path) = &opts.cache else {
        let mut summary = SweepSummary { total, ..Default::default() };
        sweep.run(0, end, opts.jobs, |block| {
            block.iter().for_each(|r| summary.add(r));
            progress(summary.processed, total);
            Ok(())
        })?;
        return Ok(summary);
    };
    let start = if opts.resume && path.exists() {
        sweep.read_cache(path)?.len() as u64
    } else {
        File::create(path)?;
        0
    };
    let mut out = BufWriter::new(OpenOptions::new().append(true).open(path)?);
    sweep.run(start, end, opts.jobs, |block| {
        for r in block {
            serde_json::to_writer(&mut out, r)?;
            out.write_all(b"\n")?;
        }
        out.flush()?;
        progress(block.last().map_or(0, |r| r.index + 1), total);
        Ok(())
    })?;
    drop(out);
    Ok(SweepSummary::from_records(total, &sweep.read_cache(path)?))
}
