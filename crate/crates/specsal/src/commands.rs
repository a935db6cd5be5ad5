use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use specsal_core::fewshot::{
    ordering_report, FeatureKind, GridSpec, Protocol, SweepTarget, DEFAULT_TRIALS, VALIDATION_TRIALS,
};
use specsal_core::filters::{
    filter_in_layout, gaussian_filter, percentile_filter, GaussianFilterSpec, PercentileFilterSpec, SpectrumLayout,
};
use specsal_core::grid::normalize_image;
use specsal_core::saliency::{
    percentile_saliency_map_in, phase_only_map, postprocess, smoothed_amplitude_map_in, spectral_residual_map,
    SaliencyMap,
};
use specsal_core::spectrum::{amplitude, dft2_forward};
use specsal_core::taskgen::TaskKind;
use specsal_core::GrayImage;

use crate::cli::{Cli, Command, EvaluateArgs, GenerateArgs, ProtocolArgs, SweepArgs, TransformArgs};
use crate::display::spectrum_image;
use crate::error::{CliError, CliResult};
use crate::io::{read_image, write_file, write_image};
use crate::parallel;
use crate::report::{grid_csv, manifest_csv, sigma_csv, trial_csv};
use crate::sidecar::{sidecar_path, Sidecar};

pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Transform(a) => cmd_transform(a).map(|_| ()),
        Command::Generate(a) => cmd_generate(a),
        Command::Evaluate(a) => cmd_evaluate(a).map(|s| print!("{s}")),
        Command::Sweep(a) => cmd_sweep(a).map(|s| print!("{s}")),
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn write_sidecar(output: &Path, sidecar: &Sidecar) -> CliResult<()> {
    write_file(&sidecar_path(output), sidecar.render().as_bytes())
}

fn saliency(map: SaliencyMap, post: Option<f64>, sidecar: &mut Sidecar) -> CliResult<GrayImage> {
    Ok(match post {
        Some(s) => {
            sidecar.set("post_sigma", s);
            postprocess(&map, &GaussianFilterSpec::new(s)?)?.as_image()
        }
        None => map.as_image(),
    })
}

/// Writes the requested rendering and its sidecar; returns the image.
pub fn cmd_transform(a: &TransformArgs) -> CliResult<GrayImage> {
    let img = read_image(&a.input)?;
    let layout: SpectrumLayout = a.layout.into();
    let code = a.feature.trim().to_ascii_uppercase();
    let mut side = Sidecar::new("transform");
    side.set("input", a.input.display())
        .set("output", a.out.display())
        .set("feature", &code)
        .set("width", img.width())
        .set("height", img.height());
    let percentile = |side: &mut Sidecar| -> CliResult<PercentileFilterSpec> {
        let spec = PercentileFilterSpec::from_fraction(a.p, a.wf, img.width())?;
        side.set("p", spec.p()).set("w", spec.w()).set("wf", a.wf).set("layout", layout.name());
        Ok(spec)
    };
    let gaussian = |side: &mut Sidecar| -> CliResult<GaussianFilterSpec> {
        let g = GaussianFilterSpec::new(a.sigma)?;
        side.set("sigma", g.sigma()).set("layout", layout.name());
        Ok(g)
    };
    let out = match code.as_str() {
        "RAW" => normalize_image(&img),
        "A" => spectrum_image(&amplitude(&dft2_forward(&img))),
        "A_P" => {
            let spec = percentile(&mut side)?;
            let amp = amplitude(&dft2_forward(&img));
            spectrum_image(&filter_in_layout(&amp, layout, |x| percentile_filter(x, &spec))?)
        }
        "A_G" => {
            let g = gaussian(&mut side)?;
            let amp = amplitude(&dft2_forward(&img));
            spectrum_image(&filter_in_layout(&amp, layout, |x| gaussian_filter(x, &g))?)
        }
        "S_P" => {
            let spec = percentile(&mut side)?;
            saliency(percentile_saliency_map_in(&img, &spec, layout)?, a.post_sigma, &mut side)?
        }
        "S_G" => {
            let g = gaussian(&mut side)?;
            saliency(smoothed_amplitude_map_in(&img, &g, layout)?, a.post_sigma, &mut side)?
        }
        "SR" => {
            side.set("box", a.box_size);
            saliency(spectral_residual_map(&img, a.box_size)?, a.post_sigma, &mut side)?
        }
        "PO" => saliency(phase_only_map(&img)?, a.post_sigma, &mut side)?,
        other => return Err(CliError::Usage(format!("unknown transform kind {other:?}"))),
    };
    write_image(&a.out, &out)?;
    write_sidecar(&a.out, &side)?;
    Ok(out)
}

/// File name of sample `index`, e.g. `sd1_2_0007.pgm`.
pub fn sample_name(task: TaskKind, label: u8, index: usize) -> String {
    format!("{}_{}_{:04}.pgm", task.name().to_ascii_lowercase(), label, index)
}

pub fn cmd_generate(a: &GenerateArgs) -> CliResult<()> {
    fs::create_dir_all(&a.out).map_err(|e| CliError::io(&a.out, e))?;
    let samples = a.task.generate(a.seed, a.n)?;
    let mut rows = Vec::with_capacity(samples.len());
    for (i, s) in samples.iter().enumerate() {
        let name = sample_name(a.task, s.label.value(), i);
        write_image(&a.out.join(&name), &s.image)?;
        rows.push((name, s.label.value(), s.seed));
    }
    write_file(&a.out.join("manifest.csv"), &manifest_csv(&rows)?)?;
    let mut side = Sidecar::new("generate");
    side.set("task", a.task).set("n", a.n).set("seed", a.seed);
    write_file(&a.out.join("config.txt"), side.render().as_bytes())?;
    Ok(())
}

fn protocol(p: &ProtocolArgs, default_trials: usize, validation: bool) -> Protocol {
    let base = if validation { Protocol::validation(p.seed) } else { Protocol { base_seed: p.seed, ..Protocol::default() } };
    Protocol {
        trials: p.trials.unwrap_or(default_trials),
        shots: p.shots,
        test_size: p.test_size,
        layout: p.layout.into(),
        ..base
    }
}

fn protocol_sidecar(side: &mut Sidecar, p: &Protocol) {
    side.set("trials", p.trials)
        .set("shots", p.shots)
        .set("test_size", p.test_size)
        .set("seed", p.base_seed)
        .set("split", format!("{:?}", p.split).to_ascii_lowercase())
        .set("layout", p.layout.name());
}

/// Writes the trial report and returns the printed summary.
pub fn cmd_evaluate(a: &EvaluateArgs) -> CliResult<String> {
    let proto = protocol(&a.protocol, DEFAULT_TRIALS, false);
    let kinds = a
        .feature
        .iter()
        .map(|f| FeatureKind::from_parts(f, Some(a.p), Some(a.wf), Some(a.sigma), specsal_core::IMAGE_SIZE))
        .collect::<Result<Vec<_>, _>>()?;
    let reports = parallel::run_suite(&a.task, &kinds, a.k, &proto)?;
    write_file(&a.out, &trial_csv(&reports)?)?;

    let mut side = Sidecar::new("evaluate");
    side.set("tasks", join(&a.task))
        .set("features", join(&kinds))
        .set("p", a.p)
        .set("wf", a.wf)
        .set("sigma", a.sigma)
        .set("k", a.k)
        .set("report", a.out.display());
    protocol_sidecar(&mut side, &proto);
    write_sidecar(&a.out, &side)?;

    let mut out = String::new();
    for r in &reports {
        writeln!(out, "{:<16} {:<20} mean {:.4} over {} trials", r.task.name(), r.kind.to_string(), r.mean(), r.trials()).unwrap();
    }
    let codes: Vec<&str> = kinds.iter().map(FeatureKind::code).collect();
    if ["RAW", "A", "A_P"].iter().all(|c| codes.contains(c)) {
        let ordered: Vec<_> = reports.iter().filter(|r| ["RAW", "A", "A_P"].contains(&r.kind.code())).cloned().collect();
        let v = ordering_report(&ordered)?;
        for t in &v.per_task {
            writeln!(
                out,
                "ordering {:<6} A_P {:.4} > A {:.4} > RAW {:.4}: {}",
                t.task.name(),
                t.percentile,
                t.amplitude,
                t.raw,
                if t.holds() { "yes" } else { "no" }
            )
            .unwrap();
        }
        writeln!(out, "ordering all    A_P {:.4} > A {:.4} > RAW {:.4}: {}", v.percentile, v.amplitude, v.raw, v.annotation()).unwrap();
    }
    Ok(out)
}

/// Writes per-cell validation means and returns the printed selection.
pub fn cmd_sweep(a: &SweepArgs) -> CliResult<String> {
    let proto = protocol(&a.protocol, VALIDATION_TRIALS, true);
    let mut side = Sidecar::new("sweep");
    side.set("tasks", join(&a.task)).set("k", join(&a.k)).set("report", a.out.display());
    protocol_sidecar(&mut side, &proto);
    let mut out = String::new();
    if a.sigma_sweep {
        if a.k.is_empty() || a.sigma.is_empty() {
            return Err(CliError::Usage("sigma sweep needs at least one k and one sigma".into()));
        }
        let kinds = a
            .sigma
            .iter()
            .map(|&s| Ok(FeatureKind::GaussianAmplitude(GaussianFilterSpec::new(s)?)))
            .collect::<CliResult<Vec<_>>>()?;
        let mut rows = Vec::new();
        for &k in &a.k {
            let reports = parallel::run_suite(&a.task, &kinds, k, &proto)?;
            for (i, &sigma) in a.sigma.iter().enumerate() {
                let per_task: Vec<f64> = reports.iter().skip(i).step_by(kinds.len()).map(|r| r.mean()).collect();
                let mean = per_task.iter().sum::<f64>() / per_task.len() as f64;
                writeln!(out, "sigma {sigma:<5} k {k}: {mean:.4}").unwrap();
                rows.push((sigma, k, mean));
            }
        }
        side.set("mode", "sigma").set("feature", "A_G").set("sigma", join(&a.sigma));
        write_file(&a.out, &sigma_csv(&rows)?)?;
    } else {
        let target = match a.feature.trim().to_ascii_uppercase().as_str() {
            "A_P" | "AP" => SweepTarget::Amplitude,
            "S_P" | "SP" => SweepTarget::Saliency,
            other => return Err(CliError::Usage(format!("sweep feature must be A_P or S_P, got {other:?}"))),
        };
        let grid = GridSpec::new(a.p.clone(), a.wf.clone(), a.k.clone())?;
        let result = parallel::validation_grid_search(&a.task, &grid, target, &proto)?;
        let b = result.best;
        let w = b.cell.spec(specsal_core::IMAGE_SIZE)?.w();
        writeln!(out, "{} cells; selected p={} wf={} (w={}) k={} accuracy {:.4}", result.scores.len(), b.cell.p, b.cell.wf, w, b.cell.k, b.score).unwrap();
        side.set("mode", "grid").set("feature", &a.feature).set("p", join(&a.p)).set("wf", join(&a.wf));
        side.set("selected", format!("p={} wf={} w={} k={}", b.cell.p, b.cell.wf, w, b.cell.k));
        write_file(&a.out, &grid_csv(&result)?)?;
    }
    write_sidecar(&a.out, &side)?;
    Ok(out)
}
