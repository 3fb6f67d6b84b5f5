use anyhow::Result;
use mogavs::baselines::{backward_elimination, exhaustive_frontier, forward_selection, stepwise, Trajectory};
use mogavs::data::load_csv;
use mogavs::Dataset;
use serde::Serialize;

use super::{create_dir, write_file};
use crate::args::{BaselineArgs, Method};
use crate::frontier_file::{DataRef, FrontierFile, ModelRecord};

#[derive(Serialize)]
struct TrajectoryFile<'a> {
    method: &'a str,
    enter: Option<f64>,
    exit: Option<f64>,
    data: DataRef,
    /// The starting model followed by one entry per add/remove step.
    models: Vec<ModelRecord>,
}

pub fn baseline(args: &BaselineArgs) -> Result<()> {
    let input = &args.input;
    let header = !input.no_header;
    let data = load_csv(&input.data, &input.target, header)?;
    let data_ref = DataRef::new(&input.data, &input.target, header, &data);
    create_dir(&args.out)?;
    let (name, trajectory, enter, exit) = match args.method {
        Method::Exhaustive => {
            let d = args.max_complexity.unwrap_or(data.k());
            let frontier = exhaustive_frontier(&data, d, args.allow_large)?;
            let file = FrontierFile::from_exhaustive(&frontier, d, data_ref);
            super::run::write_outputs(&args.out, &file)?;
            println!("{} frontier models from exhaustive search up to size {d}", file.models.len());
            return Ok(());
        }
        Method::Forward => ("forward", forward_selection(&data, args.enter)?, Some(args.enter), None),
        Method::Backward => ("backward", backward_elimination(&data, args.exit)?, None, Some(args.exit)),
        Method::Stepwise => ("stepwise", stepwise(&data, args.enter, args.exit)?, Some(args.enter), Some(args.exit)),
    };
    let models: Vec<ModelRecord> = trajectory.models().map(|m| ModelRecord::from_model(m, data.names())).collect();
    write_file(&args.out, "trajectory.csv", trajectory_csv(&trajectory, &data))?;
    let file = TrajectoryFile { method: name, enter, exit, data: data_ref, models };
    write_file(&args.out, "trajectory.json", serde_json::to_string_pretty(&file)? + "\n")?;
    let last = trajectory.final_model();
    println!(
        "{name}: {} steps, final model has {} variables, mse {}",
        trajectory.steps.len(),
        last.objective.complexity,
        last.objective.error
    );
    Ok(())
}

fn trajectory_csv(t: &Trajectory, data: &Dataset) -> String {
    let mut out = String::from("step,action,variable,complexity,mse,mask\n");
    let mut previous: Option<&mogavs::EvaluatedModel> = None;
    for (i, m) in t.models().enumerate() {
        let (action, variable) = match previous {
            None => ("start", String::new()),
            Some(p) => {
                let j = (0..m.mask.len()).find(|&j| m.mask.get(j) != p.mask.get(j)).expect("steps change one bit");
                (if m.mask.get(j) { "add" } else { "remove" }, data.names()[j].clone())
            }
        };
        out.push_str(&format!("{i},{action},{variable},{},{},{}\n", m.objective.complexity, m.objective.error, m.mask));
        previous = Some(m);
    }
    out
}
