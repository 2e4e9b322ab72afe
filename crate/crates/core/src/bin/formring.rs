use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use formring::engine::LeafKind;
use formring::error::Error;
use formring::form_ideal::enumerate_form_ideals;
use formring::subset::Subset;
use formring::verify::{
    emit_report, exit_code, load_witnesses, replay, run_scenario, Format, Scenario, ScenarioConfig,
};

#[derive(Parser)]
#[command(name = "formring", version, about = "Unitary groups over small form rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks of a scenario and write a report.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, required_unless_present = "replay")]
        report: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        budget: Option<usize>,
        /// Re-evaluate the witnesses in a witness or report file instead of running checks.
        #[arg(long)]
        replay: Option<PathBuf>,
    },
    /// Print the order of one leaf subgroup.
    Enumerate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum)]
        group: GroupArg,
        #[arg(long)]
        ideal: String,
    },
    /// List the form ideals of the scenario's form ring.
    Ideals {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupArg {
    #[value(name = "E")]
    E,
    #[value(name = "G")]
    G,
    #[value(name = "F")]
    F,
    #[value(name = "C")]
    C,
}

fn load(config: &PathBuf, seed: Option<u64>, budget: Option<usize>) -> Result<Scenario, Error> {
    let mut cfg = ScenarioConfig::load(config)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(b) = budget {
        cfg.budget = b;
    }
    Scenario::build(cfg)
}

fn show(ring: &formring::ring::InvolutiveRing, s: Subset) -> String {
    let items: Vec<&str> = s.iter().map(|x| ring.label(x)).collect();
    format!("{{{}}}", items.join(","))
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Verify { config, report, format, seed, budget, replay: witnesses } => {
            let s = load(&config, seed, budget)?;
            if let Some(path) = witnesses {
                let text = std::fs::read_to_string(&path)?;
                let mut code = 0;
                for w in load_witnesses(&text)? {
                    let out = replay(&s, &w)?;
                    println!("{}: {}", if out.reproduced { "reproduced" } else { "not reproduced" }, out.detail);
                    if out.reproduced {
                        code = 1;
                    }
                }
                return Ok(code);
            }
            let reports = run_scenario(&s)?;
            let format = match format {
                FormatArg::Json => Format::Json,
                FormatArg::Text => Format::Text,
            };
            emit_report(&reports, format, report.as_ref().expect("clap enforces --report"))?;
            for r in &reports {
                eprintln!("{:<18} {}", r.name, r.status.as_str());
            }
            Ok(exit_code(&reports))
        }
        Command::Enumerate { config, group, ideal } => {
            let s = load(&config, None, None)?;
            let level = s.level(&ideal)?;
            let kind = match group {
                GroupArg::E => LeafKind::E,
                GroupArg::G => LeafKind::G,
                GroupArg::F => LeafKind::F,
                GroupArg::C => LeafKind::C,
            };
            let h = s.instance.leaf(kind, &level.ideal)?;
            match h.size() {
                Some(size) => {
                    println!("{size}");
                    Ok(0)
                }
                None => {
                    println!("{:?} ({} generators)", h.status, h.generators.len());
                    Ok(2)
                }
            }
        }
        Command::Ideals { config } => {
            let s = load(&config, None, None)?;
            let fr = s.fr();
            for fi in enumerate_form_ideals(fr, s.config.budget)? {
                let name = s.levels.values().find(|l| l.ideal == fi).map(|l| l.name.as_str()).unwrap_or("-");
                println!("{name:<6} I={} Γ={}", show(&fr.ring, fi.ideal.members), show(&fr.ring, fi.gamma));
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
