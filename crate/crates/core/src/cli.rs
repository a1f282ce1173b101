//! Command-line front end.
//!
//! Exit codes: 0 for success (consistent, accepted, all claims hold), 1 for a
//! negative verdict (inconsistent, rejected, refuted), 2 for usage, file and
//! format errors.
//!
//! Text reports print metadata as `# key: value` comment lines followed by at
//! most one uncommented matrix, so the output of `solve`, `extract` and
//! `witness` can be fed back as a `--solution` or `--s` file. Further
//! matrices are printed commented out. `--json` prints the same fields as one
//! JSON object.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::exactmat::{ExactMatrix, StarMode};
use crate::model::{
    gen_consistent, gen_perturbed, parse_field_words, parse_star_word, GenParams, ParseOptions,
    StarSylvesterSystem,
};
use crate::oracle::{self, ProbeParams};
use crate::roth;
use crate::vecsolve::{self, Verdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "starsylv",
    version,
    about = "Exact analysis of systems A_i X - X* B_i = C_i"
)]
struct Cli {
    /// Print reports as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Allow GF(2) input and enable the characteristic 2 probe.
    #[arg(long, global = true)]
    probe_char2_enable: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide consistency and print a solution with the homogeneous basis.
    Solve { system: PathBuf },
    /// Build the congruence witness S from a solution X.
    Witness {
        system: PathBuf,
        #[arg(long)]
        solution: PathBuf,
    },
    /// Check S M_i S* = N_i for every equation.
    Verify {
        system: PathBuf,
        #[arg(long)]
        s: PathBuf,
    },
    /// Recover a solution from the pair space D.
    Extract { system: PathBuf },
    /// Dimensions of D and D0 and the claims relating them.
    Analyze {
        system: PathBuf,
        #[arg(long)]
        s: Option<PathBuf>,
    },
    /// Generate a seeded consistent (or perturbed) system.
    Gen {
        /// `Q`, `QI` or `GF <p>`.
        #[arg(long, num_args = 1..=2, required = true)]
        field: Vec<String>,
        #[arg(long, default_value = "T")]
        star: String,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        ell: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = GenParams::DEFAULT_ENTRY_BOUND)]
        bound: u32,
        /// Add a random nonzero matrix to C_1.
        #[arg(long)]
        perturb: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the planted solution (not allowed with --perturb).
        #[arg(long)]
        solution_out: Option<PathBuf>,
    },
    /// Count solutions over GF(p) by exhaustive search.
    Oracle {
        system: PathBuf,
        #[arg(long, default_value_t = oracle::DEFAULT_CAP)]
        cap: u64,
    },
    /// Compare solvability and congruence on sampled GF(2) systems.
    ProbeChar2 {
        #[arg(long, default_value_t = 3)]
        max_total_dim: usize,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write every instance where the two sides differ as a system file.
        #[arg(long)]
        dump_dir: Option<PathBuf>,
    },
}

/// A failure that maps to exit code 2.
#[derive(Debug)]
struct Failure(String);

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        Failure(e.to_string())
    }
}

#[derive(Default)]
struct Report {
    fields: Vec<(&'static str, Value)>,
    primary: Option<(&'static str, ExactMatrix)>,
    extra: Vec<(String, ExactMatrix)>,
    /// Printed verbatim in text mode instead of the fields.
    body: Option<String>,
}

impl Report {
    fn field(mut self, key: &'static str, value: impl Into<Value>) -> Self {
        self.fields.push((key, value.into()));
        self
    }

    fn render(&self, json_mode: bool) -> String {
        if json_mode {
            let mut map = Map::new();
            for (k, v) in &self.fields {
                map.insert((*k).to_string(), v.clone());
            }
            if let Some((k, m)) = &self.primary {
                map.insert((*k).to_string(), matrix_json(m));
            }
            for (k, m) in &self.extra {
                map.insert(k.clone(), matrix_json(m));
            }
            return format!("{}\n", Value::Object(map));
        }
        if let Some(body) = &self.body {
            return body.clone();
        }
        let mut out = String::new();
        for (k, v) in &self.fields {
            let shown = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("# {k}: {shown}\n"));
        }
        for (k, m) in &self.extra {
            out.push_str(&format!("# {k}:\n"));
            for line in m.to_text().lines() {
                out.push_str(&format!("# {line}\n"));
            }
        }
        if let Some((k, m)) = &self.primary {
            out.push_str(&format!("# {k}:\n"));
            out.push_str(&m.to_text());
        }
        out
    }
}

fn matrix_json(m: &ExactMatrix) -> Value {
    serde_json::to_value(m).expect("matrix serializes")
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure(format!("cannot write {}: {e}", path.display())))
}

fn load_system(path: &Path, allow_char2: bool) -> Result<StarSylvesterSystem, Failure> {
    let text = read(path)?;
    StarSylvesterSystem::parse(&text, ParseOptions { allow_char2 })
        .map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn load_matrix(path: &Path, sys: &StarSylvesterSystem) -> Result<ExactMatrix, Failure> {
    let text = read(path)?;
    ExactMatrix::parse_text(&text, sys.tag())
        .map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn bools(v: &[bool]) -> Value {
    json!(v)
}

fn execute(cli: &Cli) -> Result<(Report, i32), Failure> {
    let allow = cli.probe_char2_enable;
    match &cli.command {
        Command::Solve { system } => {
            let sys = load_system(system, allow)?;
            Ok(match vecsolve::solve(&sys) {
                Verdict::Consistent(set) => {
                    let mut report = Report::default()
                        .field("verdict", "consistent")
                        .field("dim", set.dim)
                        .field("realified", sys.mode().is_semilinear());
                    if let Ok(count) = vecsolve::solution_count_gf(&sys, &set) {
                        report = report.field("solutions", count.to_string());
                    }
                    report.extra = set
                        .homogeneous_basis
                        .iter()
                        .enumerate()
                        .map(|(k, h)| (format!("homogeneous_{}", k + 1), h.clone()))
                        .collect();
                    report.primary = Some(("x", set.particular));
                    (report, EXIT_OK)
                }
                Verdict::Inconsistent {
                    rank,
                    augmented_rank,
                } => (
                    Report::default()
                        .field("verdict", "inconsistent")
                        .field("rank", rank)
                        .field("augmented_rank", augmented_rank),
                    EXIT_NEGATIVE,
                ),
            })
        }
        Command::Witness { system, solution } => {
            let sys = load_system(system, allow)?;
            let x = load_matrix(solution, &sys)?;
            let w = roth::witness_from_solution(&sys, &x)?;
            let code = if w.accepted() { EXIT_OK } else { EXIT_NEGATIVE };
            let mut report = Report::default()
                .field("accepted", w.accepted())
                .field("invertible", w.invertible)
                .field("per_equation_ok", bools(&w.per_equation_ok));
            report.primary = Some(("s", w.s));
            Ok((report, code))
        }
        Command::Verify { system, s } => {
            let sys = load_system(system, allow)?;
            let s = load_matrix(s, &sys)?;
            let w = roth::verify_congruence(&sys, &s)?;
            let code = if w.accepted() { EXIT_OK } else { EXIT_NEGATIVE };
            Ok((
                Report::default()
                    .field("accepted", w.accepted())
                    .field("invertible", w.invertible)
                    .field("per_equation_ok", bools(&w.per_equation_ok)),
                code,
            ))
        }
        Command::Extract { system } => {
            let sys = load_system(system, allow)?;
            Ok(match roth::extract_solution(&sys)? {
                Some(x) => {
                    let mut report = Report::default()
                        .field("verdict", "consistent")
                        .field("residual_zero", sys.is_solution(&x)?);
                    report.primary = Some(("x", x));
                    (report, EXIT_OK)
                }
                None => (
                    Report::default().field("verdict", "inconsistent"),
                    EXIT_NEGATIVE,
                ),
            })
        }
        Command::Analyze { system, s } => {
            let sys = load_system(system, allow)?;
            let s = s.as_deref().map(|p| load_matrix(p, &sys)).transpose()?;
            let claims = roth::check_claims(&sys, s.as_ref())?;
            let code = if claims.all_hold() {
                EXIT_OK
            } else {
                EXIT_NEGATIVE
            };
            let mut report = Report::default();
            let Value::Object(map) = serde_json::to_value(&claims).expect("report serializes")
            else {
                unreachable!("struct serializes to an object")
            };
            for key in CLAIM_KEYS {
                report = report.field(key, map[key].clone());
            }
            Ok((report, code))
        }
        Command::Gen {
            field,
            star,
            m,
            n,
            ell,
            seed,
            bound,
            perturb,
            out,
            solution_out,
        } => {
            if *perturb && solution_out.is_some() {
                return Err(Failure(
                    "--solution-out cannot be combined with --perturb".into(),
                ));
            }
            let words: Vec<&str> = field.iter().map(String::as_str).collect();
            let tag = parse_field_words(&words, allow)?;
            let mode: StarMode = parse_star_word(star)?;
            let params = GenParams {
                entry_bound: *bound,
                ..GenParams::new(tag, mode, *m, *n, *ell, *seed)
            };
            let (mut sys, x) = gen_consistent(&params)?;
            if *perturb {
                sys = gen_perturbed(&sys, *seed, *bound);
            }
            let text = sys.to_text();
            if let Some(path) = solution_out {
                write(path, &x.to_text())?;
            }
            let mut report = Report::default()
                .field("field", tag.to_string())
                .field("star", mode.to_string())
                .field("m", *m)
                .field("n", *n)
                .field("ell", *ell)
                .field("seed", *seed)
                .field("perturbed", *perturb);
            match out {
                Some(path) => {
                    write(path, &text)?;
                    report = report.field("written", path.display().to_string());
                }
                None if cli.json => report = report.field("system", text),
                None => report.body = Some(text),
            }
            Ok((report, EXIT_OK))
        }
        Command::Oracle { system, cap } => {
            let sys = load_system(system, allow)?;
            let v = oracle::brute_force_consistency(&sys, *cap)?;
            let code = if v.consistent { EXIT_OK } else { EXIT_NEGATIVE };
            Ok((
                Report::default()
                    .field(
                        "verdict",
                        if v.consistent {
                            "consistent"
                        } else {
                            "inconsistent"
                        },
                    )
                    .field("solutions", v.solutions),
                code,
            ))
        }
        Command::ProbeChar2 {
            max_total_dim,
            samples,
            seed,
            dump_dir,
        } => {
            let params = ProbeParams {
                enabled: allow,
                max_total_dim: *max_total_dim,
                seed: *seed,
                sample_count: *samples,
            };
            let probe = oracle::probe_char2(&params)?;
            if let Some(dir) = dump_dir {
                fs::create_dir_all(dir)
                    .map_err(|e| Failure(format!("cannot create {}: {e}", dir.display())))?;
                for (name, text) in probe.anomaly_files() {
                    write(&dir.join(name), &text)?;
                }
            }
            let mut report = Report::default()
                .field("total", probe.instances.len())
                .field("a_without_b", probe.a_without_b())
                .field("b_without_a", probe.b_without_a())
                .field(
                    "instances",
                    serde_json::to_value(&probe.instances).expect("instances serialize"),
                );
            report.body = Some(probe.to_text());
            Ok((report, EXIT_OK))
        }
    }
}

const CLAIM_KEYS: [&str; 14] = [
    "dim_d",
    "dim_d0",
    "dim_ker_phi_d",
    "dim_im_phi_d",
    "dim_ker_phi_d0",
    "dim_im_phi_d0",
    "rank_nullity_ok",
    "claim_i",
    "claim_ii",
    "claim_iii",
    "claim_iv",
    "target_in_image_d",
    "twist_ok",
    "realified",
];

/// Run with explicit arguments and output streams; returns the exit code.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok((report, code)) => {
            let _ = stdout.write_all(report.render(cli.json).as_bytes());
            code
        }
        Err(Failure(message)) => {
            if cli.json {
                let _ = writeln!(stdout, "{}", json!({ "error": message }));
            }
            let _ = writeln!(stderr, "error: {message}");
            EXIT_ERROR
        }
    }
}

/// Run with the process arguments and standard streams.
pub fn run() -> i32 {
    run_with(
        std::env::args_os(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}
