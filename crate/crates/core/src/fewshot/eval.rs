use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::filters::{PercentileFilterSpec, SpectrumLayout};
use crate::rng::derive_seed;
use crate::taskgen::{Class, LabeledImage, TaskKind};
use crate::IMAGE_SIZE;

use super::features::{FeatureKind, PreparedImage};
use super::knn::{knn_fit, KnnClassifier};

pub const DEFAULT_SHOTS: usize = 10;
pub const DEFAULT_TEST_SIZE: usize = 1000;
pub const DEFAULT_TRIALS: usize = 10;
pub const VALIDATION_TRIALS: usize = 5;

/// Which seed space a trial draws from. Test seeds are even, validation
/// seeds odd, so the two never share images.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SeedSplit {
    Validation,
    #[default]
    Test,
}

pub fn trial_seed(base: u64, trial: usize, split: SeedSplit) -> u64 {
    let s = derive_seed(base, trial as u64);
    match split {
        SeedSplit::Test => s & !1,
        SeedSplit::Validation => s | 1,
    }
}

/// Trial count, set sizes and seeding shared by every evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Protocol {
    pub trials: usize,
    pub shots: usize,
    pub test_size: usize,
    pub base_seed: u64,
    pub split: SeedSplit,
    pub layout: SpectrumLayout,
}

impl Default for Protocol {
    fn default() -> Self {
        Self {
            trials: DEFAULT_TRIALS,
            shots: DEFAULT_SHOTS,
            test_size: DEFAULT_TEST_SIZE,
            base_seed: 0,
            split: SeedSplit::Test,
            layout: SpectrumLayout::default(),
        }
    }
}

impl Protocol {
    pub fn validation(base_seed: u64) -> Self {
        Self {
            trials: VALIDATION_TRIALS,
            base_seed,
            split: SeedSplit::Validation,
            ..Self::default()
        }
    }

    pub fn trial_seed(&self, trial: usize) -> u64 {
        trial_seed(self.base_seed, trial, self.split)
    }

    pub fn trial_seeds(&self) -> Vec<u64> {
        (0..self.trials).map(|t| self.trial_seed(t)).collect()
    }

    pub fn check(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(invalid("at least one trial is required"));
        }
        if self.shots < 2 {
            return Err(invalid("at least two training shots are required"));
        }
        if self.test_size == 0 {
            return Err(invalid("test set must not be empty"));
        }
        Ok(())
    }
}

/// One few-shot trial: a small labelled training set and a held-out test set.
#[derive(Debug, Clone)]
pub struct Episode {
    pub task: TaskKind,
    pub trial_seed: u64,
    pub train: Vec<LabeledImage>,
    pub test: Vec<LabeledImage>,
}

impl Episode {
    /// Train and test images come from separate sub-seeds of `trial_seed`.
    pub fn generate(task: TaskKind, trial_seed: u64, shots: usize, test_size: usize) -> Result<Self> {
        let train = task.generate(derive_seed(trial_seed, 0), shots)?;
        let test = task.generate(derive_seed(trial_seed, 1), test_size)?;
        Self::from_parts(task, trial_seed, train, test)
    }

    pub fn from_parts(task: TaskKind, trial_seed: u64, train: Vec<LabeledImage>, test: Vec<LabeledImage>) -> Result<Self> {
        if train.is_empty() || test.is_empty() {
            return Err(invalid("episode needs nonempty train and test sets"));
        }
        Ok(Self { task, trial_seed, train, test })
    }
}

struct PreparedEpisode {
    train: Vec<(PreparedImage, Class)>,
    test: Vec<(PreparedImage, Class)>,
}

impl PreparedEpisode {
    fn new(ep: &Episode) -> Self {
        let prep = |set: &[LabeledImage]| set.iter().map(|s| (PreparedImage::new(&s.image), s.label)).collect();
        Self { train: prep(&ep.train), test: prep(&ep.test) }
    }

    fn fit(&self, kind: &FeatureKind, layout: SpectrumLayout) -> Result<KnnClassifier> {
        let train = self
            .train
            .iter()
            .map(|(p, c)| Ok((p.features(kind, layout)?, *c)))
            .collect::<Result<Vec<_>>>()?;
        knn_fit(train)
    }

    /// Accuracy for every `k` in `ks`, sharing one neighbor ranking per query.
    fn accuracies(&self, kind: &FeatureKind, ks: &[usize], layout: SpectrumLayout) -> Result<Vec<f64>> {
        let clf = self.fit(kind, layout)?;
        let mut correct = vec![0usize; ks.len()];
        for (img, label) in &self.test {
            let order = clf.neighbors(&img.features(kind, layout)?)?;
            for (hits, &k) in correct.iter_mut().zip(ks) {
                if clf.vote(&order, k)? == *label {
                    *hits += 1;
                }
            }
        }
        let n = self.test.len() as f64;
        Ok(correct.into_iter().map(|c| c as f64 / n).collect())
    }
}

/// Fraction of test images classified correctly by `k`-NN on `kind` features.
pub fn run_episode(ep: &Episode, kind: &FeatureKind, k: usize) -> Result<f64> {
    run_episode_in(ep, kind, k, SpectrumLayout::default())
}

pub fn run_episode_in(ep: &Episode, kind: &FeatureKind, k: usize, layout: SpectrumLayout) -> Result<f64> {
    Ok(PreparedEpisode::new(ep).accuracies(kind, &[k], layout)?[0])
}

/// Accuracies over trials for one (task, feature kind) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub task: TaskKind,
    pub kind: FeatureKind,
    pub k: usize,
    pub shots: usize,
    pub test_size: usize,
    pub trial_seeds: Vec<u64>,
    pub accuracies: Vec<f64>,
}

impl EvalReport {
    pub fn trials(&self) -> usize {
        self.accuracies.len()
    }

    pub fn mean(&self) -> f64 {
        self.accuracies.iter().sum::<f64>() / self.accuracies.len() as f64
    }
}

/// Accuracy of every kind in `kinds` on trial `trial` of `task`; all kinds
/// see the same images.
pub fn evaluate_trial(task: TaskKind, trial: usize, kinds: &[FeatureKind], k: usize, protocol: &Protocol) -> Result<Vec<f64>> {
    protocol.check()?;
    let ep = Episode::generate(task, protocol.trial_seed(trial), protocol.shots, protocol.test_size)?;
    let prepared = PreparedEpisode::new(&ep);
    kinds
        .iter()
        .map(|kind| Ok(prepared.accuracies(kind, &[k], protocol.layout)?[0]))
        .collect()
}

/// Builds reports from per-trial results laid out task-major:
/// `results[task_index * trials + trial][kind_index]`.
pub fn assemble_reports(
    tasks: &[TaskKind],
    kinds: &[FeatureKind],
    k: usize,
    protocol: &Protocol,
    results: &[Vec<f64>],
) -> Result<Vec<EvalReport>> {
    if results.len() != tasks.len() * protocol.trials || results.iter().any(|r| r.len() != kinds.len()) {
        return Err(Error::Protocol("trial results do not match the task and kind lists".into()));
    }
    let seeds = protocol.trial_seeds();
    let mut out = Vec::with_capacity(tasks.len() * kinds.len());
    for (ti, &task) in tasks.iter().enumerate() {
        let rows = &results[ti * protocol.trials..(ti + 1) * protocol.trials];
        for (ki, kind) in kinds.iter().enumerate() {
            out.push(EvalReport {
                task,
                kind: *kind,
                k,
                shots: protocol.shots,
                test_size: protocol.test_size,
                trial_seeds: seeds.clone(),
                accuracies: rows.iter().map(|r| r[ki]).collect(),
            });
        }
    }
    Ok(out)
}

/// Reports for every (task, kind) pair, ordered task-major.
pub fn run_suite(tasks: &[TaskKind], kinds: &[FeatureKind], k: usize, protocol: &Protocol) -> Result<Vec<EvalReport>> {
    protocol.check()?;
    let mut results = Vec::with_capacity(tasks.len() * protocol.trials);
    for &task in tasks {
        for trial in 0..protocol.trials {
            results.push(evaluate_trial(task, trial, kinds, k, protocol)?);
        }
    }
    assemble_reports(tasks, kinds, k, protocol, &results)
}

pub fn run_trials(task: TaskKind, kind: &FeatureKind, k: usize, protocol: &Protocol) -> Result<EvalReport> {
    let mut reports = run_suite(&[task], &[*kind], k, protocol)?;
    Ok(reports.remove(0))
}

/// Candidate percentile-filter parameters and neighbor counts.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub p_values: Vec<f64>,
    pub wf_values: Vec<f64>,
    pub k_values: Vec<usize>,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            p_values: vec![5.0, 10.0, 20.0, 40.0],
            wf_values: vec![0.05, 0.1, 0.2],
            k_values: vec![1, 3, 5],
        }
    }
}

impl GridSpec {
    pub fn new(p_values: Vec<f64>, wf_values: Vec<f64>, k_values: Vec<usize>) -> Result<Self> {
        if p_values.is_empty() || wf_values.is_empty() || k_values.is_empty() {
            return Err(invalid("grid axes must be nonempty"));
        }
        Ok(Self { p_values, wf_values, k_values })
    }

    /// Cells in p-major, then wf, then k order.
    pub fn cells(&self) -> Vec<GridCell> {
        let mut cells = Vec::with_capacity(self.len());
        for &p in &self.p_values {
            for &wf in &self.wf_values {
                for &k in &self.k_values {
                    cells.push(GridCell { p, wf, k });
                }
            }
        }
        cells
    }

    pub fn len(&self) -> usize {
        self.p_values.len() * self.wf_values.len() * self.k_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridCell {
    pub p: f64,
    pub wf: f64,
    pub k: usize,
}

impl GridCell {
    pub fn spec(&self, width: usize) -> Result<PercentileFilterSpec> {
        PercentileFilterSpec::from_fraction(self.p, self.wf, width)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellScore {
    pub cell: GridCell,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridResult {
    pub scores: Vec<CellScore>,
    pub best: CellScore,
}

/// Index of the highest score; equal scores prefer smaller wf, then
/// smaller p, then smaller k.
pub fn select_best(scores: &[CellScore]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, s) in scores.iter().enumerate() {
        let better = match best {
            None => true,
            Some(b) => {
                let b = &scores[b];
                s.score
                    .total_cmp(&b.score)
                    .then(b.cell.wf.total_cmp(&s.cell.wf))
                    .then(b.cell.p.total_cmp(&s.cell.p))
                    .then(b.cell.k.cmp(&s.cell.k))
                    .is_gt()
            }
        };
        if better {
            best = Some(i);
        }
    }
    best
}

/// Scores every cell with `scorer` and returns the best.
pub fn grid_search(grid: &GridSpec, mut scorer: impl FnMut(&GridCell) -> Result<f64>) -> Result<GridResult> {
    let scores = grid
        .cells()
        .into_iter()
        .map(|cell| Ok(CellScore { cell, score: scorer(&cell)? }))
        .collect::<Result<Vec<_>>>()?;
    finish_grid(scores)
}

fn finish_grid(scores: Vec<CellScore>) -> Result<GridResult> {
    let best = select_best(&scores).ok_or_else(|| invalid("grid axes must be nonempty"))?;
    Ok(GridResult { best: scores[best], scores })
}

/// Which percentile-filtered feature a sweep tunes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepTarget {
    Amplitude,
    Saliency,
}

impl SweepTarget {
    pub fn kind(self, spec: PercentileFilterSpec) -> FeatureKind {
        match self {
            SweepTarget::Amplitude => FeatureKind::PercentileAmplitude(spec),
            SweepTarget::Saliency => FeatureKind::PercentileSaliency(spec),
        }
    }
}

/// Accuracy of every grid cell on one trial, in [`GridSpec::cells`] order.
pub fn validation_trial_scores(
    task: TaskKind,
    trial: usize,
    grid: &GridSpec,
    target: SweepTarget,
    protocol: &Protocol,
) -> Result<Vec<f64>> {
    protocol.check()?;
    let ep = Episode::generate(task, protocol.trial_seed(trial), protocol.shots, protocol.test_size)?;
    let prepared = PreparedEpisode::new(&ep);
    let mut out = Vec::with_capacity(grid.len());
    for &p in &grid.p_values {
        for &wf in &grid.wf_values {
            let kind = target.kind(PercentileFilterSpec::from_fraction(p, wf, IMAGE_SIZE)?);
            out.extend(prepared.accuracies(&kind, &grid.k_values, protocol.layout)?);
        }
    }
    Ok(out)
}

/// Averages per-trial cell scores (`rows[task_index * trials + trial]`) and
/// selects the best cell.
pub fn combine_validation(grid: &GridSpec, rows: &[Vec<f64>]) -> Result<GridResult> {
    if rows.is_empty() || rows.iter().any(|r| r.len() != grid.len()) {
        return Err(Error::Protocol("validation rows do not match the grid".into()));
    }
    let n = rows.len() as f64;
    let scores = grid
        .cells()
        .into_iter()
        .enumerate()
        .map(|(i, cell)| CellScore { cell, score: rows.iter().map(|r| r[i]).sum::<f64>() / n })
        .collect();
    finish_grid(scores)
}

/// Exhaustive sweep on validation episodes of every task in `tasks`.
pub fn validation_grid_search(
    tasks: &[TaskKind],
    grid: &GridSpec,
    target: SweepTarget,
    protocol: &Protocol,
) -> Result<GridResult> {
    if protocol.split != SeedSplit::Validation {
        return Err(Error::Protocol("grid search must use validation seeds".into()));
    }
    let mut rows = Vec::new();
    for &task in tasks {
        for trial in 0..protocol.trials {
            rows.push(validation_trial_scores(task, trial, grid, target, protocol)?);
        }
    }
    combine_validation(grid, &rows)
}

/// Per-task means of RAW, A and A_P.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskOrdering {
    pub task: TaskKind,
    pub raw: f64,
    pub amplitude: f64,
    pub percentile: f64,
}

impl TaskOrdering {
    pub fn holds(&self) -> bool {
        self.percentile > self.amplitude && self.amplitude > self.raw
    }
}

/// Whether mean(A_P) > mean(A) > mean(RAW) over a task set.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderingVerdict {
    pub raw: f64,
    pub amplitude: f64,
    pub percentile: f64,
    pub per_task: Vec<TaskOrdering>,
}

impl OrderingVerdict {
    pub fn holds(&self) -> bool {
        self.percentile > self.amplitude && self.amplitude > self.raw
    }

    pub fn tie(&self) -> bool {
        self.percentile == self.amplitude || self.amplitude == self.raw
    }

    pub fn annotation(&self) -> &'static str {
        if self.holds() {
            "holds"
        } else if self.tie() {
            "tie"
        } else {
            "violated"
        }
    }
}

/// Compares RAW, A and A_P reports. Every task needs exactly one report
/// of each, all drawn from the same trial seeds.
pub fn ordering_report(reports: &[EvalReport]) -> Result<OrderingVerdict> {
    let mut tasks: Vec<TaskKind> = Vec::new();
    for r in reports {
        if !tasks.contains(&r.task) {
            tasks.push(r.task);
        }
    }
    if tasks.is_empty() {
        return Err(Error::Protocol("no reports to compare".into()));
    }
    let seeds = &reports[0].trial_seeds;
    let mut per_task = Vec::with_capacity(tasks.len());
    for &task in &tasks {
        let find = |code: &str| -> Result<&EvalReport> {
            let mut hits = reports.iter().filter(|r| r.task == task && r.kind.code() == code);
            let hit = hits
                .next()
                .ok_or_else(|| Error::Protocol(format!("no {code} report for {task}")))?;
            if hits.next().is_some() {
                return Err(Error::Protocol(format!("several {code} reports for {task}")));
            }
            if &hit.trial_seeds != seeds {
                return Err(Error::Protocol(format!("{code} report for {task} uses different seeds")));
            }
            Ok(hit)
        };
        per_task.push(TaskOrdering {
            task,
            raw: find("RAW")?.mean(),
            amplitude: find("A")?.mean(),
            percentile: find("A_P")?.mean(),
        });
    }
    let n = per_task.len() as f64;
    let mean = |f: fn(&TaskOrdering) -> f64| per_task.iter().map(f).sum::<f64>() / n;
    Ok(OrderingVerdict {
        raw: mean(|t| t.raw),
        amplitude: mean(|t| t.amplitude),
        percentile: mean(|t| t.percentile),
        per_task,
    })
}
