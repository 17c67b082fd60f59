use clap::{Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use twistnet::suites::{self, SuiteConfig};
use twistnet::Result;

#[derive(Parser)]
#[command(name = "twistnet", about = "Exact PEPS checks for anyon-permuting walls and twist defects")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a named suite: anyons, peps, walls, twists, stabilizers, zn, colorcode or all
    Run {
        suite: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// chain length for the wall identities
        #[arg(long)]
        n: Option<usize>,
        /// JSON report path (default: $TWISTNET_OUT/<suite>.json if set)
        #[arg(long)]
        out: Option<PathBuf>,
        /// directory to write the site and wall tensors to
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Describe a check
    Explain { check: String },
    /// Anyon-permuting symmetries
    Aps {
        #[command(subcommand)]
        cmd: ApsCmd,
    },
    /// Domain-wall identities
    Walls {
        #[command(subcommand)]
        cmd: WallsCmd,
    },
    /// Twist fusion
    Twists {
        #[command(subcommand)]
        cmd: TwistsCmd,
    },
    /// Twist stabilizer registries
    Stabilizers {
        #[command(subcommand)]
        cmd: StabCmd,
    },
}

#[derive(Subcommand)]
enum ApsCmd {
    Enumerate {
        /// toric, color or zn:N
        #[arg(long)]
        model: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum WallsCmd {
    Verify {
        /// D, C, Q<k>, W1, W2 or W5
        #[arg(long)]
        wall: String,
        #[arg(long)]
        n: usize,
        /// periodic or ends
        #[arg(long, default_value = "periodic")]
        closure: String,
        /// modulus for C and Q<k>
        #[arg(long, default_value_t = 3)]
        modulus: u32,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum TwistsCmd {
    Fuse {
        /// toric or zn:N
        #[arg(long)]
        model: String,
        /// pp (like species) or pm (unlike)
        #[arg(long)]
        pair: String,
    },
}

#[derive(Subcommand)]
enum StabCmd {
    Verify {
        /// network description file with a `twist` line
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// write the registry listing here
        #[arg(long)]
        export: Option<PathBuf>,
    },
}

fn write(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, text)?;
    Ok(())
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serializes")
}

fn outcome_line(o: &twistnet::harness::Outcome) -> bool {
    for (k, v) in &o.values {
        println!("  {k} = {v:e}");
    }
    for f in &o.failures {
        println!("  FAIL {f}");
    }
    println!("{}", if o.passed() { "PASS" } else { "FAIL" });
    o.passed()
}

fn dump_tensors(dir: &Path) -> Result<()> {
    use twistnet::peps::{color_site_tensor, toric_site_tensor, zn_site_tensor};
    use twistnet::walls::{duality_tensor, w5_tensor};
    write(&dir.join("toric_site.tensor"), &toric_site_tensor().tensor.dump())?;
    write(&dir.join("z3_site.tensor"), &zn_site_tensor(3)?.tensor.dump())?;
    write(&dir.join("color_site.tensor"), &color_site_tensor().tensor.dump())?;
    write(&dir.join("duality_wall.tensor"), &duality_tensor(2, 1).dump())?;
    write(&dir.join("w5_wall.tensor"), &w5_tensor()?.dump())?;
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Run { suite, tol, seed, n, out, dump } => {
            let cfg = SuiteConfig { suite: suite.clone(), tol, seed, n };
            let report = suites::run_suite(&cfg)?;
            print!("{}", report.summary());
            let out = out.or_else(|| std::env::var_os("TWISTNET_OUT").map(|d| PathBuf::from(d).join(format!("{suite}.json"))));
            if let Some(p) = out {
                write(&p, &json(&report))?;
            }
            if let Some(d) = dump {
                dump_tensors(&d)?;
            }
            Ok(report.ok())
        }
        Cmd::Explain { check } => {
            print!("{}", suites::explain(&check)?);
            Ok(true)
        }
        Cmd::Aps { cmd: ApsCmd::Enumerate { model, out } } => {
            let (table, order) = suites::aps_table(&model)?;
            print!("{table}");
            if let Some(p) = out {
                write(&p, &json(&serde_json::json!({ "model": model, "order": order, "table": table })))?;
            }
            Ok(true)
        }
        Cmd::Walls { cmd: WallsCmd::Verify { wall, n, closure, modulus, tol, out } } => {
            let periodic = match closure.as_str() {
                "periodic" => true,
                "ends" => false,
                c => return Err(twistnet::Error::Unknown(format!("closure {c}"))),
            };
            let o = suites::verify_wall(&wall, n, periodic, modulus, tol)?;
            if let Some(p) = out {
                write(&p, &json(&o))?;
            }
            Ok(outcome_line(&o))
        }
        Cmd::Twists { cmd: TwistsCmd::Fuse { model, pair } } => {
            let like = match pair.as_str() {
                "pp" => true,
                "pm" => false,
                p => return Err(twistnet::Error::Unknown(format!("pair {p}"))),
            };
            print!("{}", suites::fusion_table(&model, like)?);
            Ok(true)
        }
        Cmd::Stabilizers { cmd: StabCmd::Verify { config, tol, export } } => {
            let text = std::fs::read_to_string(&config)?;
            let (o, reg) = suites::verify_registry_file(&text, tol)?;
            if let Some(p) = export {
                write(&p, &reg.export())?;
            }
            Ok(outcome_line(&o))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
