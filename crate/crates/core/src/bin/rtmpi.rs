use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rtm_pi::encode::EncodeOptions;
use rtm_pi::lts::Mode;
use rtm_pi::workbench::{self, Exit, Format, Outcome, RunConfig, Universe};

/// Workbench for reactive Turing machines and their π-calculus specifications.
#[derive(Parser)]
#[command(name = "rtmpi", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// State bound for every exploration.
    #[arg(long, default_value_t = 50_000)]
    max_states: usize,
    /// Input names: a count of fresh names or a comma-separated list.
    #[arg(long, default_value = "1")]
    universe: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Dpbb)]
    mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = FormatArg::Aut)]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Bb,
    Dpbb,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Aut,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Random run of a machine.
    Simulate {
        machine: PathBuf,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Translate between formats.
    #[command(subcommand)]
    Encode(Encode),
    /// Explore a process file into a transition system.
    Explore {
        process: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Compare two .aut files.
    Check {
        left: PathBuf,
        right: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Quotient an .aut file.
    Minimize {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Compare a machine with the exploration of its specification.
    VerifySpec {
        machine: PathBuf,
        /// Leave rule K out of the encoding (mutation testing).
        #[arg(long, hide = true)]
        omit_rule: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Show that a machine does not behave like x(y).'y.0.
    Refute {
        machine: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum Encode {
    /// Machine to process file; with -o also writes OUT.names.
    Rtm2pi {
        machine: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Transition system to machine.
    Ts2rtm {
        system: PathBuf,
        /// Lines `state = number` fixing the numbering.
        #[arg(long)]
        numbering: Option<PathBuf>,
    },
}

impl Common {
    fn config(&self) -> Result<RunConfig, Outcome> {
        let universe = Universe::parse(&self.universe).map_err(Outcome::from)?;
        let config = RunConfig {
            rtm_max_states: self.max_states,
            pi_max_states: self.max_states,
            universe,
            mode: match self.mode {
                ModeArg::Bb => Mode::Branching,
                ModeArg::Dpbb => Mode::DivergencePreserving,
            },
            seed: self.seed,
            format: match self.format {
                FormatArg::Aut => Format::Aut,
                FormatArg::Text => Format::Text,
            },
        };
        config.validate().map_err(Outcome::from)?;
        Ok(config)
    }
}

fn read(path: &Path) -> Result<String, Outcome> {
    fs::read_to_string(path).map_err(|e| Outcome {
        exit: Exit::Usage,
        text: format!("error: {}: {e}\n", path.display()),
    })
}

fn dispatch(cli: Cli) -> Result<Outcome, Outcome> {
    Ok(match cli.command {
        Command::Simulate {
            machine,
            steps,
            common,
        } => workbench::simulate(&read(&machine)?, steps, &common.config()?),
        Command::Encode(Encode::Rtm2pi { machine, output }) => {
            let text = read(&machine)?;
            match output {
                None => workbench::encode_rtm2pi(&text),
                Some(out) => {
                    let source = workbench::encode_rtm2pi(&text);
                    if source.exit != Exit::Ok {
                        return Ok(source);
                    }
                    let names = workbench::encode_names(&text);
                    let mut sidecar = out.clone().into_os_string();
                    sidecar.push(".names");
                    for (path, body) in [
                        (out.as_os_str(), &source.text),
                        (sidecar.as_os_str(), &names.text),
                    ] {
                        fs::write(path, body).map_err(|e| Outcome {
                            exit: Exit::Usage,
                            text: format!("error: {}: {e}\n", Path::new(path).display()),
                        })?;
                    }
                    Outcome {
                        exit: Exit::Ok,
                        text: String::new(),
                    }
                }
            }
        }
        Command::Encode(Encode::Ts2rtm { system, numbering }) => {
            let phi = numbering.as_deref().map(read).transpose()?;
            workbench::encode_ts2rtm(&read(&system)?, phi.as_deref())
        }
        Command::Explore { process, common } => {
            workbench::explore_pi(&read(&process)?, &common.config()?)
        }
        Command::Check {
            left,
            right,
            common,
        } => workbench::check_aut(&read(&left)?, &read(&right)?, common.config()?.mode),
        Command::Minimize { input, common } => {
            workbench::minimize_aut(&read(&input)?, &common.config()?)
        }
        Command::VerifySpec {
            machine,
            omit_rule,
            common,
        } => workbench::verify_spec_with(
            &read(&machine)?,
            &common.config()?,
            &EncodeOptions { omit_rule },
        ),
        Command::Refute { machine, common } => {
            workbench::refute_rtm(&read(&machine)?, &common.config()?)
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                Exit::Usage.code() as u8
            } else {
                0
            });
        }
    };
    let outcome = dispatch(cli).unwrap_or_else(|e| e);
    if outcome.exit == Exit::Usage {
        eprint!("{}", outcome.text);
    } else {
        print!("{}", outcome.text);
    }
    ExitCode::from(outcome.exit.code() as u8)
}
