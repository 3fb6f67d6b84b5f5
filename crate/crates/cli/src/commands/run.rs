use std::path::Path;

use anyhow::{bail, Context, Result};
use log::info;
use mogavs::data::load_csv;
use mogavs::moga::{best_by_complexity, run_moga_with, GaConfig, ObjectiveKind};
use mogavs::Dataset;

use super::{create_dir, parse_range, write_file};
use crate::args::RunArgs;
use crate::frontier_file::{frontier_csv, DataRef, FrontierFile};

pub fn parse_objective(text: &str) -> Result<ObjectiveKind> {
    match text.trim() {
        "insample" | "in-sample" => Ok(ObjectiveKind::InSample),
        other => match other.strip_prefix("cv:") {
            Some(k) => Ok(ObjectiveKind::CrossValidation {
                folds: k.parse().with_context(|| format!("bad fold count in {other:?}"))?,
            }),
            None => bail!("objective {other:?} must be insample or cv:K"),
        },
    }
}

fn config_from_args(args: &RunArgs, data: &Dataset) -> Result<GaConfig> {
    let defaults = GaConfig::for_predictors(data.k());
    let population_size = args.population.unwrap_or(defaults.population_size);
    Ok(GaConfig {
        population_size,
        iterations: args.iterations,
        crossover_prob: args.crossover,
        mutation_prob: args.mutation.unwrap_or(defaults.mutation_prob),
        offspring: args.offspring.unwrap_or(population_size),
        seed: args.seed,
        objective: parse_objective(&args.objective)?,
        complexity_bounds: args.bounds.as_deref().map(parse_range).transpose()?,
        snapshot_every: args.snapshot_every,
        archive: args.archive,
    })
}

pub fn run(args: &RunArgs) -> Result<()> {
    let (config, data, data_ref) = match &args.replay {
        Some(path) => {
            let old = FrontierFile::read(path)?;
            let config = old.config.clone().with_context(|| format!("{} was not produced by `run`", path.display()))?;
            let data = old.data.load()?;
            (config, data, old.data)
        }
        None => {
            let path = args.data.as_deref().expect("clap requires --data without --replay");
            let header = !args.no_header;
            let data = load_csv(path, &args.target, header)?;
            let config = config_from_args(args, &data)?;
            let data_ref = DataRef::new(path, &args.target, header, &data);
            (config, data, data_ref)
        }
    };
    info!("searching {} predictors over {} rows", data.k(), data.n());
    let progress = args.progress;
    let run = run_moga_with(&data, &config, |generation, population| {
        if progress {
            let summary: Vec<String> =
                best_by_complexity(population).iter().map(|o| format!("{}:{:.6}", o.complexity, o.error)).collect();
            eprintln!("generation {generation}: {}", summary.join(" "));
        }
    })?;
    let file = FrontierFile::from_run(&config, data_ref, &run);
    write_outputs(&args.out, &file)?;
    println!(
        "{} frontier models after {} generations ({} models evaluated, {} distinct)",
        file.models.len(),
        run.stats.generations,
        run.stats.models_evaluated,
        run.stats.unique_models
    );
    Ok(())
}

pub fn write_outputs(out: &Path, file: &FrontierFile) -> Result<()> {
    create_dir(out)?;
    file.write(&out.join("frontier.json"))?;
    write_file(out, "frontier.csv", frontier_csv(&file.models))?;
    if !file.snapshots.is_empty() {
        let mut csv = String::from("generation,complexity,mse\n");
        for s in &file.snapshots {
            for (c, e) in &s.objectives {
                csv.push_str(&format!("{},{c},{e}\n", s.generation));
            }
        }
        write_file(out, "snapshots.csv", csv)?;
    }
    Ok(())
}
