//! CSV reports: UTF-8, header row, LF line endings.

use specsal_core::fewshot::{EvalReport, GridResult};
use specsal_core::IMAGE_SIZE;

fn writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<Vec<u8>, csv::Error> {
    w.into_inner().map_err(|e| csv::Error::from(e.into_error()))
}

/// One row per trial plus a `mean` row per (task, feature) pair.
pub fn trial_csv(reports: &[EvalReport]) -> Result<Vec<u8>, csv::Error> {
    let mut w = writer();
    w.write_record(["task", "feature", "params", "k", "trial", "seed", "accuracy"])?;
    for r in reports {
        let (task, code, params, k) = (r.task.name(), r.kind.code(), r.kind.params(), r.k.to_string());
        for (i, (acc, seed)) in r.accuracies.iter().zip(&r.trial_seeds).enumerate() {
            w.write_record([task, code, &params, &k, &i.to_string(), &seed.to_string(), &acc.to_string()])?;
        }
        w.write_record([task, code, &params, &k, "mean", "", &r.mean().to_string()])?;
    }
    finish(w)
}

pub fn manifest_csv(rows: &[(String, u8, u64)]) -> Result<Vec<u8>, csv::Error> {
    let mut w = writer();
    w.write_record(["filename", "label", "seed"])?;
    for (name, label, seed) in rows {
        w.write_record([name.as_str(), &label.to_string(), &seed.to_string()])?;
    }
    finish(w)
}

pub fn grid_csv(result: &GridResult) -> Result<Vec<u8>, csv::Error> {
    let mut w = writer();
    w.write_record(["p", "wf", "w", "k", "accuracy", "selected"])?;
    for s in &result.scores {
        let win = s.cell.spec(IMAGE_SIZE).map(|x| x.w().to_string()).unwrap_or_default();
        let selected = s.cell == result.best.cell;
        w.write_record([
            s.cell.p.to_string(),
            s.cell.wf.to_string(),
            win,
            s.cell.k.to_string(),
            s.score.to_string(),
            selected.to_string(),
        ])?;
    }
    finish(w)
}

pub fn sigma_csv(rows: &[(f64, usize, f64)]) -> Result<Vec<u8>, csv::Error> {
    let mut w = writer();
    w.write_record(["sigma", "k", "accuracy"])?;
    for (s, k, acc) in rows {
        w.write_record([s.to_string(), k.to_string(), acc.to_string()])?;
    }
    finish(w)
}
