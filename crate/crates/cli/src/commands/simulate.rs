use anyhow::Result;
use mogavs::simdata::{expand_features, gen_example1_with_noise, gen_example2_with_noise, TrueModel};

use super::{create_dir, write_file};
use crate::args::SimulateArgs;

pub fn simulate(args: &SimulateArgs) -> Result<()> {
    let (data, truth) = match args.example {
        1 => {
            let sim = gen_example1_with_noise(args.rows, args.seed, args.noise.unwrap_or(0.2))?;
            if args.raw {
                // The true terms live in the expanded space; list them anyway.
                (sim.data, sim.truth)
            } else {
                (expand_features(&sim.data)?, sim.truth)
            }
        }
        _ => {
            let sim = gen_example2_with_noise(args.rows, args.predictors, args.seed, args.noise.unwrap_or(1.0))?;
            (sim.data, sim.truth)
        }
    };
    create_dir(&args.out)?;
    let mut csv = Vec::new();
    data.write_csv_to(&mut csv, "y")?;
    let data_path = write_file(&args.out, "data.csv", csv)?;
    write_file(&args.out, "truth.json", truth_json(&truth)? + "\n")?;
    println!("wrote {} ({} rows, {} predictors)", data_path.display(), data.n(), data.k());
    Ok(())
}

fn truth_json(truth: &TrueModel) -> Result<String> {
    Ok(serde_json::to_string_pretty(truth)?)
}
