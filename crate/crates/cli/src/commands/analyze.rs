use anyhow::{bail, Context, Result};
use mogavs::analysis::{criteria_scan, hs_plot, kappa_metric, kappa_single, knee_point, os_plot, train_eval_split};
use mogavs::baselines::exhaustive_frontier;
use mogavs::moga::run_moga;
use mogavs::objectives::CriterionForm;
use mogavs::{mask_complexity, Frontier};
use serde::Serialize;

use super::{create_dir, parse_range, write_file};
use crate::args::{AnalyzeArgs, Form, Task};
use crate::frontier_file::FrontierFile;

#[derive(Serialize)]
struct KneeReport {
    complexity: usize,
    coefficients: usize,
    mask: String,
    variables: Vec<String>,
    distance: f64,
    pronounced: bool,
}

#[derive(Serialize)]
struct KappaReport {
    range: (usize, usize),
    train_fraction: f64,
    per_split: Vec<f64>,
    kappa: f64,
}

pub fn analyze(args: &AnalyzeArgs) -> Result<()> {
    let file = FrontierFile::read(&args.frontier)?;
    let frontier = file.frontier()?;
    create_dir(&args.out)?;
    match args.task {
        Task::Knee => {
            let knee = knee_point(&frontier)?;
            let model = &frontier.models()[knee.index];
            let report = KneeReport {
                complexity: knee.complexity,
                coefficients: mask_complexity(&model.mask, true),
                mask: model.mask.to_string(),
                variables: model.mask.indices().into_iter().map(|j| file.data.names[j].clone()).collect(),
                distance: knee.distance,
                pronounced: knee.pronounced,
            };
            write_file(&args.out, "knee.json", serde_json::to_string_pretty(&report)? + "\n")?;
            let shown = if args.count_intercept { report.coefficients } else { report.complexity };
            let note = if knee.pronounced { "" } else { " (no pronounced knee)" };
            println!("knee at {shown}: {}{note}", report.variables.join(" "));
        }
        Task::Criteria => {
            let form = match args.form {
                Form::LogMse => CriterionForm::LogMse,
                Form::NegTwoLogMse => CriterionForm::NegTwoLogMse,
            };
            let table = criteria_scan(&frontier, file.data.n, args.count_intercept, form);
            let text = table.to_text();
            write_file(&args.out, "criteria.txt", &text)?;
            print!("{text}");
        }
        Task::Kappa => {
            let range = parse_range(args.range.as_deref().context("kappa needs --range lo:hi")?)?;
            let report = kappa(&file, range, args.splits, args.train_fraction)?;
            write_file(&args.out, "kappa.json", serde_json::to_string_pretty(&report)? + "\n")?;
            println!("kappa over sizes {}..={}: {}", range.0, range.1, report.kappa);
        }
        Task::Osplot => {
            let plot = os_plot(&frontier, &file.snapshots(), args.count_intercept);
            write_file(&args.out, "osplot.csv", plot.to_csv())?;
            let svg = write_file(&args.out, "osplot.svg", plot.to_svg(args.log_y))?;
            println!("wrote {}", svg.display());
        }
        Task::Hsplot => {
            let range = args.range.as_deref().map(parse_range).transpose()?;
            let hs = hs_plot(&frontier, &file.data.names, range)?;
            let text = hs.to_text();
            write_file(&args.out, "hsplot.txt", &text)?;
            write_file(&args.out, "hsplot.svg", hs.to_svg())?;
            print!("{text}");
        }
    }
    Ok(())
}

/// Re-runs the recorded search on random training splits and scores each
/// resulting frontier on its held-out rows.
fn kappa(file: &FrontierFile, range: (usize, usize), splits: usize, fraction: f64) -> Result<KappaReport> {
    if splits == 0 {
        bail!("at least one split is required");
    }
    let data = file.data.load()?;
    let mut pairs = Vec::with_capacity(splits);
    for s in 0..splits as u64 {
        let (train_rows, eval_rows) = train_eval_split(data.n(), fraction, s)?;
        let train = data.select_rows(&train_rows)?;
        let eval = data.select_rows(&eval_rows)?;
        let frontier: Frontier = match (&file.config, file.max_complexity) {
            (Some(config), _) => run_moga(&train, config)?.frontier,
            (None, Some(d)) => exhaustive_frontier(&train, d, true)?,
            (None, None) => bail!("frontier file records neither a search config nor an exhaustive limit"),
        };
        pairs.push((frontier, eval));
    }
    let per_split = pairs.iter().map(|(f, d)| kappa_single(f, d, range.0, range.1)).collect::<Result<Vec<_>, _>>()?;
    let refs: Vec<_> = pairs.iter().map(|(f, d)| (f, d)).collect();
    let kappa = kappa_metric(&refs, range.0, range.1)?;
    Ok(KappaReport { range, train_fraction: fraction, per_split, kappa })
}
