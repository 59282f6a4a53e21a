//! Monte Carlo sweeps over a grid of edge probabilities.

use std::io::Write;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cycle::CycleSpec;
use crate::error::{invalid, Error, Result};
use crate::lab::stats::{pooled_se, wilson, Z_95};
use crate::models::{
    derive_seed, q_from_p, sample_colored, sample_directed, CoupledInstance, SampleMode,
};
use crate::solver::{find_rainbow_cycle, SearchMode, SearchOutcome, SearchStatus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Geometric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PGrid {
    pub start: f64,
    pub stop: f64,
    pub points: u32,
    pub spacing: Spacing,
}

impl PGrid {
    /// Parses `start:stop:points:spacing`; the spacing field defaults to linear.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        if !(3..=4).contains(&parts.len()) {
            return invalid(format!(
                "p-grid `{text}` is not start:stop:points[:spacing]"
            ));
        }
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidInput(format!("bad p-grid number `{s}`")))
        };
        let start = num(parts[0])?;
        let stop = num(parts[1])?;
        let points = parts[2]
            .trim()
            .parse::<u32>()
            .map_err(|_| Error::InvalidInput(format!("bad p-grid point count `{}`", parts[2])))?;
        let spacing = match parts.get(3).map(|s| s.trim()) {
            None | Some("linear") | Some("lin") => Spacing::Linear,
            Some("geometric") | Some("geom") | Some("log") => Spacing::Geometric,
            Some(other) => return invalid(format!("unknown spacing `{other}`")),
        };
        let grid = PGrid {
            start,
            stop,
            points,
            spacing,
        };
        grid.values()?;
        Ok(grid)
    }

    pub fn values(&self) -> Result<Vec<f64>> {
        let PGrid {
            start,
            stop,
            points,
            spacing,
        } = *self;
        if points == 0 {
            return invalid("p-grid needs at least one point");
        }
        if !(0.0..=1.0).contains(&start) || !(0.0..=1.0).contains(&stop) {
            return invalid("p-grid endpoints must lie in [0, 1]");
        }
        if points == 1 {
            return Ok(vec![start]);
        }
        if stop <= start {
            return invalid("p-grid must be strictly increasing");
        }
        let last = (points - 1) as f64;
        let values: Vec<f64> = match spacing {
            Spacing::Linear => (0..points)
                .map(|i| start + (stop - start) * i as f64 / last)
                .collect(),
            Spacing::Geometric => {
                if start <= 0.0 {
                    return invalid("geometric p-grid needs start > 0");
                }
                let ratio = (stop / start).ln();
                (0..points)
                    .map(|i| start * (ratio * i as f64 / last).exp())
                    .collect()
            }
        };
        let mut values = values;
        *values.last_mut().expect("points >= 2") = stop;
        if values.windows(2).any(|w| w[1] <= w[0]) {
            return invalid("p-grid points are not strictly increasing");
        }
        Ok(values)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColorRule {
    /// Exactly `r` colors.
    Explicit(u32),
    /// `r = floor(c n)`.
    Density(Ratio<u64>),
}

impl ColorRule {
    pub fn resolve(self, n: u32) -> u32 {
        match self {
            ColorRule::Explicit(r) => r,
            ColorRule::Density(c) => (c * Ratio::from_integer(n as u64)).to_integer() as u32,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub n: u32,
    pub k: u32,
    pub ell: u32,
    pub colors: ColorRule,
    pub grid: PGrid,
    pub trials: u32,
    pub seed: u64,
    pub mode: SearchMode,
    pub budget: u64,
    pub workers: usize,
    pub sample_mode: SampleMode,
}

impl SweepConfig {
    pub fn new(
        n: u32,
        k: u32,
        ell: u32,
        colors: ColorRule,
        grid: PGrid,
        trials: u32,
        seed: u64,
    ) -> Self {
        SweepConfig {
            n,
            k,
            ell,
            colors,
            grid,
            trials,
            seed,
            mode: SearchMode::Exhaustive,
            budget: u64::MAX,
            workers: 1,
            sample_mode: SampleMode::Enumerate,
        }
    }

    fn validate(&self) -> Result<(CycleSpec, u32, Vec<f64>)> {
        let spec = CycleSpec::new(self.n, self.k, self.ell)
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
        if self.trials == 0 {
            return invalid("trials must be at least 1");
        }
        let r = self.colors.resolve(self.n);
        if r == 0 {
            return invalid("the color rule yields r = 0");
        }
        Ok((spec, r, self.grid.values()?))
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers.max(1))
            .build()
            .map_err(|e| Error::InvalidInput(format!("cannot start worker pool: {e}")))
    }
}

/// One grid point of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub n: u32,
    pub k: u32,
    pub ell: u32,
    pub r: u32,
    pub p: f64,
    pub trials: u64,
    pub found: u64,
    pub not_found: u64,
    pub unknown: u64,
    pub phat: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub mean_nodes: f64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    found: u64,
    not_found: u64,
    unknown: u64,
    nodes: u64,
}

impl Tally {
    fn add(&mut self, outcome: &SearchOutcome) {
        match outcome.status {
            SearchStatus::Found => self.found += 1,
            SearchStatus::NotFound => self.not_found += 1,
            SearchStatus::Unknown => self.unknown += 1,
        }
        self.nodes += outcome.nodes_expanded;
    }

    fn row(&self, spec: CycleSpec, r: u32, p: f64) -> SweepResult {
        let trials = self.found + self.not_found + self.unknown;
        let (phat, ci_lo, ci_hi) = wilson(self.found, trials - self.unknown, Z_95);
        SweepResult {
            n: spec.n(),
            k: spec.k(),
            ell: spec.ell(),
            r,
            p,
            trials,
            found: self.found,
            not_found: self.not_found,
            unknown: self.unknown,
            phat,
            ci_lo,
            ci_hi,
            mean_nodes: if trials == 0 {
                0.0
            } else {
                self.nodes as f64 / trials as f64
            },
        }
    }
}

/// Independent instances per grid point; instance `(i, t)` uses seed
/// `derive_seed([master, i, t])`.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepResult>> {
    let (spec, r, grid) = config.validate()?;
    let tasks: Vec<(usize, u32)> = (0..grid.len())
        .flat_map(|i| (0..config.trials).map(move |t| (i, t)))
        .collect();
    let outcomes: Vec<Result<SearchOutcome>> = config.pool()?.install(|| {
        tasks
            .par_iter()
            .map(|&(i, t)| {
                let seed = derive_seed(&[config.seed, i as u64, t as u64]);
                let h = sample_colored(spec.n(), spec.k(), grid[i], r, seed, config.sample_mode)?;
                find_rainbow_cycle(&h, spec, config.mode, config.budget)
            })
            .collect()
    });
    let mut tallies = vec![Tally::default(); grid.len()];
    for (&(i, _), outcome) in tasks.iter().zip(outcomes) {
        tallies[i].add(&outcome?);
    }
    Ok(tallies
        .iter()
        .zip(&grid)
        .map(|(t, &p)| t.row(spec, r, p))
        .collect())
}

/// Per-trial outcome statuses of a coupled sweep, indexed `[trial][point]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledSweep {
    pub rows: Vec<SweepResult>,
    pub statuses: Vec<Vec<SearchStatus>>,
}

impl CoupledSweep {
    /// Trials where some point is Found while a later point is NotFound.
    pub fn monotonicity_violations(&self) -> usize {
        self.statuses
            .iter()
            .filter(|row| {
                row.iter().enumerate().any(|(i, s)| {
                    *s == SearchStatus::Found && row[i + 1..].contains(&SearchStatus::NotFound)
                })
            })
            .count()
    }
}

/// Every grid point of trial `t` realizes the same `CoupledInstance` with
/// seed `derive_seed([master, t])`, so outcomes are monotone in `p`.
pub fn run_coupled_sweep(config: &SweepConfig) -> Result<Vec<SweepResult>> {
    Ok(run_coupled_sweep_detailed(config)?.rows)
}

pub fn run_coupled_sweep_detailed(config: &SweepConfig) -> Result<CoupledSweep> {
    let (spec, r, grid) = config.validate()?;
    let per_trial: Vec<Result<Vec<SearchOutcome>>> = config.pool()?.install(|| {
        (0..config.trials)
            .into_par_iter()
            .map(|t| {
                let instance = CoupledInstance::new(
                    spec.n(),
                    spec.k(),
                    r,
                    derive_seed(&[config.seed, t as u64]),
                )?;
                grid.iter()
                    .map(|&p| {
                        find_rainbow_cycle(&instance.realize(p), spec, config.mode, config.budget)
                    })
                    .collect()
            })
            .collect()
    });
    let mut tallies = vec![Tally::default(); grid.len()];
    let mut statuses = Vec::with_capacity(per_trial.len());
    for outcomes in per_trial {
        let outcomes = outcomes?;
        for (tally, outcome) in tallies.iter_mut().zip(&outcomes) {
            tally.add(outcome);
        }
        statuses.push(outcomes.iter().map(|o| o.status).collect());
    }
    let rows = tallies
        .iter()
        .zip(&grid)
        .map(|(t, &p)| t.row(spec, r, p))
        .collect();
    Ok(CoupledSweep { rows, statuses })
}

/// Writes rows as CSV with the header
/// `n,k,ell,r,p,trials,found,not_found,unknown,phat,ci_lo,ci_hi,mean_nodes`.
pub fn write_csv<W: Write>(rows: &[SweepResult], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::InvalidInput(format!("csv write failed: {e}"));
    if rows.is_empty() {
        writer
            .write_record([
                "n",
                "k",
                "ell",
                "r",
                "p",
                "trials",
                "found",
                "not_found",
                "unknown",
                "phat",
                "ci_lo",
                "ci_hi",
                "mean_nodes",
            ])
            .map_err(io)?;
    }
    for row in rows {
        writer.serialize(row).map_err(io)?;
    }
    writer
        .flush()
        .map_err(|e| Error::InvalidInput(format!("csv write failed: {e}")))?;
    Ok(())
}

pub fn to_csv_string(rows: &[SweepResult]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

/// Outcome of the undirected vs directed comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoupleReport {
    pub n: u32,
    pub k: u32,
    pub r: u32,
    pub p: f64,
    pub q: f64,
    pub trials: u32,
    pub seed: u64,
    pub found_undirected: u64,
    pub found_directed: u64,
    pub phat_undirected: f64,
    pub phat_directed: f64,
    pub ci_undirected: (f64, f64),
    pub ci_directed: (f64, f64),
    pub pooled_se: f64,
    pub holds: bool,
}

/// Loose rainbow cycles in H^(k)_{n,p,r} versus the directed model at
/// `q = q_from_p(p)` with `r = n/(k-1)`, solved exhaustively.
pub fn couple_experiment(
    n: u32,
    k: u32,
    p: f64,
    trials: u32,
    seed: u64,
    workers: usize,
) -> Result<CoupleReport> {
    let q = q_from_p(p)?;
    let spec = CycleSpec::loose(n, k).map_err(|e| Error::InvalidInput(e.to_string()))?;
    if trials == 0 {
        return invalid("trials must be at least 1");
    }
    let r = spec.m();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidInput(format!("cannot start worker pool: {e}")))?;
    let run = |directed: bool| -> Result<u64> {
        let hits: Vec<Result<bool>> = pool.install(|| {
            (0..trials)
                .into_par_iter()
                .map(|t| {
                    let s = derive_seed(&[seed, directed as u64, t as u64]);
                    let h = if directed {
                        sample_directed(n, k, q, r, s)?
                    } else {
                        sample_colored(n, k, p, r, s, SampleMode::Enumerate)?
                    };
                    Ok(find_rainbow_cycle(&h, spec, SearchMode::Exhaustive, u64::MAX)?.found())
                })
                .collect()
        });
        hits.into_iter()
            .try_fold(0u64, |acc, h| Ok(acc + h? as u64))
    };
    let found_undirected = run(false)?;
    let found_directed = run(true)?;
    let t = trials as u64;
    let (phat_undirected, lo_u, hi_u) = wilson(found_undirected, t, Z_95);
    let (phat_directed, lo_d, hi_d) = wilson(found_directed, t, Z_95);
    let se = pooled_se(found_undirected, t, found_directed, t);
    Ok(CoupleReport {
        n,
        k,
        r,
        p,
        q,
        trials,
        seed,
        found_undirected,
        found_directed,
        phat_undirected,
        phat_directed,
        ci_undirected: (lo_u, hi_u),
        ci_directed: (lo_d, hi_d),
        pooled_se: se,
        holds: phat_directed >= phat_undirected - 2.0 * se,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loose12(trials: u32) -> SweepConfig {
        SweepConfig::new(
            6,
            3,
            1,
            ColorRule::Explicit(3),
            PGrid {
                start: 0.2,
                stop: 1.0,
                points: 5,
                spacing: Spacing::Linear,
            },
            trials,
            7,
        )
    }

    #[test]
    fn grid_parsing() {
        let g = PGrid::parse("0:1:5:linear").unwrap();
        assert_eq!(g.values().unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let g = PGrid::parse("0.01:1:3:geometric").unwrap();
        let v = g.values().unwrap();
        assert!((v[1] - 0.1).abs() < 1e-12 && v[2] == 1.0);
        assert!(PGrid::parse("0:1:3:cubic").is_err());
        assert!(PGrid::parse("0.5:0.2:3").is_err());
        assert!(PGrid::parse("0:1.5:3").is_err());
        assert!(PGrid::parse("0:1:0").is_err());
        assert!(PGrid::parse("0:1:3:geometric").is_err());
        assert_eq!(
            PGrid::parse("0.3:0.3:1").unwrap().values().unwrap(),
            vec![0.3]
        );
    }

    #[test]
    fn density_color_rule_floors() {
        assert_eq!(ColorRule::Density(Ratio::new(1, 2)).resolve(7), 3);
        assert_eq!(ColorRule::Density(Ratio::new(3, 2)).resolve(10), 15);
        assert_eq!(ColorRule::Explicit(4).resolve(100), 4);
    }

    #[test]
    fn endpoints_with_all_colors() {
        let mut cfg = loose12(20);
        cfg.colors = ColorRule::Explicit(1000);
        cfg.grid = PGrid {
            start: 0.0,
            stop: 1.0,
            points: 2,
            spacing: Spacing::Linear,
        };
        let rows = run_sweep(&cfg).unwrap();
        assert_eq!(rows[0].phat, 0.0);
        assert_eq!(rows[1].phat, 1.0);
    }

    #[test]
    fn row_accounting_and_ci_order() {
        let mut cfg = loose12(30);
        cfg.mode = SearchMode::Budgeted;
        cfg.budget = 3;
        for row in run_sweep(&cfg).unwrap() {
            assert_eq!(row.found + row.not_found + row.unknown, row.trials);
            assert!(
                0.0 <= row.ci_lo
                    && row.ci_lo <= row.phat
                    && row.phat <= row.ci_hi
                    && row.ci_hi <= 1.0
            );
        }
    }

    #[test]
    fn deterministic_across_workers() {
        let mut cfg = loose12(25);
        let a = to_csv_string(&run_sweep(&cfg).unwrap()).unwrap();
        cfg.workers = 4;
        let b = to_csv_string(&run_sweep(&cfg).unwrap()).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with(
            "n,k,ell,r,p,trials,found,not_found,unknown,phat,ci_lo,ci_hi,mean_nodes\n"
        ));
    }

    #[test]
    fn coupled_sweep_is_monotone() {
        let cfg = loose12(100);
        let sweep = run_coupled_sweep_detailed(&cfg).unwrap();
        assert_eq!(sweep.monotonicity_violations(), 0);
        assert!(sweep.rows.windows(2).all(|w| w[0].phat <= w[1].phat));
    }

    #[test]
    fn invalid_configs() {
        let mut cfg = loose12(1);
        cfg.n = 7;
        assert!(matches!(run_sweep(&cfg), Err(Error::InvalidInput(_))));
        let mut cfg = loose12(0);
        cfg.trials = 0;
        assert!(run_sweep(&cfg).is_err());
    }

    #[test]
    fn couple_at_zero_and_bad_p() {
        let rep = couple_experiment(6, 3, 0.0, 20, 1, 2).unwrap();
        assert_eq!((rep.phat_undirected, rep.phat_directed), (0.0, 0.0));
        assert!(rep.holds);
        assert!(matches!(
            couple_experiment(6, 3, 0.2, 20, 1, 1),
            Err(Error::NoRealRoot(_))
        ));
        let rep = couple_experiment(6, 3, 0.1, 10, 1, 1).unwrap();
        assert!((rep.q - 2.0 * rep.q * rep.q - 0.1).abs() < 1e-12);
    }
}
