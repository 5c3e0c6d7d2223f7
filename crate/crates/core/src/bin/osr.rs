use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use osrepair::cli::{self, RunConfig};
use osrepair::optim::build_osr_model;
use osrepair::relation::write_csv;
use osrepair::repair::SolverLimits;
use osrepair::{Error, Result};

#[derive(Parser)]
#[command(name = "osr", version, about = "Optimal subset repair under denial constraints")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List violating tuple pairs.
    Detect {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute a removal set and write a JSON report.
    Repair {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        knobs: Knobs,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the OSR LP relaxation (no clique rows) in LP format.
        #[arg(long)]
        dump_lp: Option<PathBuf>,
        /// Also write per-tuple loss diagnostics as CSV.
        #[arg(long)]
        loss_csv: Option<PathBuf>,
        /// Write the resolved configuration as TOML.
        #[arg(long)]
        save_config: Option<PathBuf>,
        /// Include wall time in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Score a report against ground-truth dirty ids.
    Evaluate {
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        truth: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Corrupt a clean table and emit the dirty ids.
    Inject {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        types: Option<PathBuf>,
        #[arg(long)]
        rate: f64,
        /// Comma list of typo, duplicate, bogus, outlier; or `all`.
        #[arg(long, default_value = "all")]
        kinds: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Dirty CSV output.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        truth: PathBuf,
    },
    /// Repair and evaluate once per value of one knob; writes CSV.
    Sweep {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        knobs: Knobs,
        #[arg(long)]
        truth: PathBuf,
        /// gamma, kappa, k, m or model.
        #[arg(long)]
        axis: String,
        /// Comma-separated values.
        #[arg(long)]
        values: String,
        #[arg(long)]
        timing: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Input {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    dcs: PathBuf,
    /// `name:numeric|categorical` per line.
    #[arg(long)]
    types: Option<PathBuf>,
    /// Replace missing cells with the column mode instead of failing.
    #[arg(long)]
    fill_missing: bool,
}

#[derive(Args)]
struct Knobs {
    /// TOML run configuration; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    kappa: Option<usize>,
    #[arg(long = "k")]
    k: Option<usize>,
    #[arg(long = "G")]
    g: Option<String>,
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    m: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// auto, dense or sparse.
    #[arg(long)]
    engine: Option<String>,
}

impl Knobs {
    fn resolve(&self) -> Result<RunConfig> {
        let mut c = match &self.config {
            Some(p) => RunConfig::from_toml(&cli::read_text(p)?)?,
            None => RunConfig::default(),
        };
        if let Some(v) = &self.method {
            c.method = v.parse()?;
        }
        if let Some(v) = self.gamma {
            c.gamma = v;
        }
        if let Some(v) = self.kappa {
            c.kappa = v;
        }
        if let Some(v) = self.k {
            c.k = v;
        }
        if let Some(v) = &self.g {
            c.g = cli::parse_g(v)?;
        }
        if let Some(v) = &self.model {
            c.model = v.parse()?;
        }
        if let Some(v) = &self.m {
            c.m = cli::parse_pool(v)?;
        }
        if let Some(v) = self.seed {
            c.seed = v;
        }
        if let Some(v) = self.epsilon {
            c.epsilon = v;
        }
        if let Some(v) = &self.engine {
            c.engine = v.parse()?;
        }
        c.validate()?;
        Ok(c)
    }
}

impl Input {
    fn load(
        &self,
    ) -> Result<(
        osrepair::relation::Instance,
        Vec<osrepair::constraints::DenialConstraint>,
    )> {
        let inst = cli::load_instance(&self.data, self.types.as_deref(), self.fill_missing)?;
        let dcs = cli::load_constraints(&self.dcs, &inst)?;
        Ok((inst, dcs))
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => cli::write_text(p, text),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

fn create(path: &Path) -> Result<std::fs::File> {
    std::fs::File::create(path).map_err(|e| Error::io(path, e))
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Detect { input, out } => {
            let (inst, dcs) = input.load()?;
            let report = cli::cmd_detect(&inst, &dcs);
            let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
            text.push('\n');
            emit(out.as_deref(), &text)
        }
        Command::Repair {
            input,
            knobs,
            out,
            dump_lp,
            loss_csv,
            save_config,
            timing,
        } => {
            let (inst, dcs) = input.load()?;
            let config = knobs.resolve()?;
            if let Some(p) = &save_config {
                cli::write_text(p, &config.to_toml())?;
            }
            let (report, prep) = cli::cmd_repair(&inst, &dcs, &config, SolverLimits::from_env()?, timing)?;
            if let Some(p) = &dump_lp {
                let osr = build_osr_model(prep.table.weights(), &prep.graph, &[]);
                osr.model.write_lp(create(p)?).map_err(|e| Error::io(p, e))?;
            }
            if let Some(p) = &loss_csv {
                prep.table.write_diagnostics(&prep.graph, create(p)?)?;
            }
            emit(out.as_deref(), &report.to_json())
        }
        Command::Evaluate { report, truth, out } => {
            let e = cli::cmd_evaluate(&cli::read_text(&report)?, &cli::read_text(&truth)?)?;
            let mut text = serde_json::to_string_pretty(&e).expect("report serializes");
            text.push('\n');
            emit(out.as_deref(), &text)
        }
        Command::Inject {
            data,
            types,
            rate,
            kinds,
            seed,
            out,
            truth,
        } => {
            let inst = cli::load_instance(&data, types.as_deref(), false)?;
            let injected = cli::inject(&inst, rate, &cli::parse_kinds(&kinds)?, seed)?;
            write_csv(&injected.instance, create(&out)?)?;
            cli::write_text(&truth, &cli::format_truth(&injected.dirty))
        }
        Command::Sweep {
            input,
            knobs,
            truth,
            axis,
            values,
            timing,
            out,
        } => {
            let (inst, dcs) = input.load()?;
            let base = knobs.resolve()?;
            let truth = cli::parse_truth(&cli::read_text(&truth)?)?;
            let values: Vec<String> = values.split(',').map(str::to_string).collect();
            let rows = cli::run_sweep(
                &inst,
                &dcs,
                &truth,
                &base,
                axis.parse()?,
                &values,
                SolverLimits::from_env()?,
                timing,
            )?;
            let mut buf = Vec::new();
            cli::write_sweep_csv(&rows, &mut buf)?;
            emit(out.as_deref(), &String::from_utf8(buf).expect("csv is utf-8"))
        }
    }
}

fn main() -> ExitCode {
    let args = Cli::parse();
    match run(args.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("osr: {e}");
            ExitCode::from(cli::exit_code(&e) as u8)
        }
    }
}
