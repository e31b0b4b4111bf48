use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Arg, ArgMatches, Command};
use twomode_cli::config::KEYS;
use twomode_cli::{emit, CliError, RawConfig, RunConfig};

fn shared_args(cmd: Command) -> Command {
    let cmd = cmd.arg(
        Arg::new("config")
            .long("config")
            .short('c')
            .value_name("FILE")
            .value_parser(clap::value_parser!(PathBuf))
            .help("key=value configuration file"),
    );
    KEYS.iter().fold(cmd, |cmd, (key, help)| {
        cmd.arg(
            Arg::new(*key)
                .long(*key)
                .value_name("VALUE")
                .allow_negative_numbers(true)
                .help(*help),
        )
    })
}

fn cli() -> Command {
    Command::new("twomode")
        .about("Perturbative and exact nonclassicality witnesses of the two-mode BEC dimer")
        .subcommand_required(true)
        .arg_required_else_help(true)
        .subcommand(shared_args(
            Command::new("coeffs").about("Print f1..f9 and g1..g9 on the time grid"),
        ))
        .subcommand(shared_args(
            Command::new("witness").about("Witness time series as CSV"),
        ))
        .subcommand(shared_args(
            Command::new("sweep-ratio").about("Witnesses over epsilon/kappa at fixed kappa t"),
        ))
        .subcommand(shared_args(
            Command::new("compare")
                .about("Perturbative against exact values, with a convergence fit"),
        ))
}

fn load(m: &ArgMatches) -> Result<RunConfig, CliError> {
    let mut raw = match m.get_one::<PathBuf>("config") {
        Some(path) => RawConfig::parse_file(path)?,
        None => RawConfig::new(),
    };
    for (key, _) in KEYS {
        if let Some(v) = m.get_one::<String>(key) {
            raw.set(key, v.clone());
        }
    }
    Ok(raw.resolve()?)
}

fn run(name: &str, m: &ArgMatches) -> Result<(), CliError> {
    let cfg = load(m)?;
    let out = match name {
        "coeffs" => twomode_cli::coeffs(&cfg)?,
        "witness" => twomode_cli::witness(&cfg)?,
        "sweep-ratio" => twomode_cli::sweep_ratio(&cfg)?,
        "compare" => twomode_cli::compare(&cfg)?.0,
        _ => unreachable!("clap rejects unknown subcommands"),
    };
    for note in &out.notes {
        eprintln!("{note}");
    }
    emit(cfg.output.as_deref(), &out.text)
}

fn main() -> ExitCode {
    let matches = cli().get_matches();
    let (name, sub) = matches.subcommand().expect("subcommand is required");
    match run(name, sub) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("twomode: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
