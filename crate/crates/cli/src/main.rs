use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use unideal::applications::{permanent_lowrank, vertex_cover_lowrank};
use unideal::certifier::{compute_threshold, search_nonmembership, verify_certificate, Decision};
use unideal::division::{is_member_brute, random_zero_test, UnivariateIdeal};
use unideal::field::{parse_rational, random_prime};
use unideal::hadamard::{auto_trials, detection_fan_in, membership_powers, PowerIdealSpec, PowersConfig};
use unideal::lowrank::{rem_eval, rem_eval_report, LowRankInput, Strategy};
use unideal::reductions::{
    graph_coloring_instance, reduce_independent_set, reduce_klineq, reduce_one_in_three,
};
use unideal::{io, selftest, Circuit, Error, Field, Scalar};

const DEFAULT_CAP: usize = 1_000_000;
/// Largest total detection fan-in `--mode auto` will route to the powers path.
const AUTO_POWERS_FAN_IN: usize = 1 << 16;

#[derive(Parser)]
#[command(name = "unideal", version, about = "Membership in univariate ideals for circuit polynomials")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Run {
    /// `q` for the rationals or `p:<prime>`.
    #[arg(long, value_parser = parse_field)]
    field: Option<Field>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Emit one JSON object instead of text.
    #[arg(long)]
    json: bool,
    /// Report wall time (makes output nondeterministic).
    #[arg(long)]
    timings: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide f ∈ I.
    Member {
        #[arg(long, required_unless_present = "lowrank", conflicts_with = "lowrank")]
        circuit: Option<PathBuf>,
        /// Low-rank input file (outer circuit plus `form` lines).
        #[arg(long)]
        lowrank: Option<PathBuf>,
        #[arg(long)]
        ideal: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
        /// Zero-test points (lowrank) or colorings per degree (powers): a number or `auto`.
        #[arg(long, default_value = "auto")]
        trials: String,
        /// Degree bound for the powers path; defaults to the circuit's degree.
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[command(flatten)]
        run: Run,
    },
    /// Evaluate (f mod I) at a point.
    RemEval {
        #[arg(long)]
        lowrank: PathBuf,
        #[arg(long)]
        ideal: PathBuf,
        /// Space-separated coordinates, rationals as a/b.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[command(flatten)]
        run: Run,
    },
    /// Permanent of a low-rank matrix.
    Perm {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        rank: Option<usize>,
        #[command(flatten)]
        run: Run,
    },
    /// Randomized test for a vertex cover of size at most k.
    Vc {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        /// Run the edge-count product only to |E| instead of C(n,2).
        #[arg(long)]
        tight: bool,
        #[command(flatten)]
        run: Run,
    },
    /// Membership in ⟨x_i^{e_i}⟩ for polynomials of degree at most k.
    Mlmd {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        k: u32,
        /// Space-separated exponents e_1 … e_n.
        #[arg(long)]
        exponents: String,
        #[arg(long, default_value = "auto")]
        trials: String,
        #[command(flatten)]
        run: Run,
    },
    /// Numeric nonmembership certificates over ℚ.
    Certify {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        ideal: PathBuf,
        /// Check an existing certificate instead of searching.
        #[arg(long, conflicts_with = "search")]
        verify: Option<PathBuf>,
        #[arg(long)]
        search: bool,
        /// Where to write a found certificate.
        #[arg(long)]
        out_cert: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[command(flatten)]
        run: Run,
    },
    /// Generate instances from the hardness reductions.
    Reduce {
        #[arg(value_enum)]
        problem: Problem,
        #[arg(long = "in")]
        input: PathBuf,
        /// Independent-set size or number of colors.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        out_circuit: Option<PathBuf>,
        #[arg(long)]
        out_ideal: Option<PathBuf>,
        /// For one-in-three: also write the intermediate k-Lin-Eq instance.
        #[arg(long)]
        out_klineq: Option<PathBuf>,
        #[command(flatten)]
        run: Run,
    },
    /// Oracle-equivalence suite on small random instances.
    Selftest {
        #[command(flatten)]
        run: Run,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Auto,
    Lowrank,
    Powers,
    Brute,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Problem {
    IndepSet,
    Klineq,
    OneInThree,
    Coloring,
}

fn parse_field(s: &str) -> Result<Field, String> {
    match s {
        "q" | "Q" => Ok(Field::Rational),
        _ => {
            let p = s.strip_prefix("p:").ok_or("expected `q` or `p:<prime>`")?;
            let p: u64 = p.parse().map_err(|e| format!("bad prime: {e}"))?;
            Field::prime(p).map_err(|e| e.to_string())
        }
    }
}

#[derive(Serialize)]
struct Timings {
    total_ms: f64,
}

/// Result of one command; `details` become the provenance block.
#[derive(Serialize)]
struct Report {
    decision: Option<String>,
    value: Option<String>,
    error_bound: Option<f64>,
    seed: u64,
    algorithm: String,
    timings: Option<Timings>,
    #[serde(skip)]
    details: Vec<(&'static str, String)>,
    #[serde(skip)]
    exit: u8,
}

impl Report {
    fn new(algorithm: impl Into<String>, seed: u64) -> Self {
        Report {
            decision: None,
            value: None,
            error_bound: None,
            seed,
            algorithm: algorithm.into(),
            timings: None,
            details: Vec::new(),
            exit: 0,
        }
    }

    fn detail(&mut self, key: &'static str, v: impl ToString) {
        self.details.push((key, v.to_string()));
    }

    fn print(&self, json: bool) {
        if json {
            let mut v = serde_json::to_value(self).expect("report serializes");
            let extra: serde_json::Map<String, serde_json::Value> =
                self.details.iter().map(|(k, v)| (k.to_string(), v.clone().into())).collect();
            v["details"] = extra.into();
            println!("{v}");
            return;
        }
        if let Some(d) = &self.decision {
            println!("{d}");
        }
        if let Some(v) = &self.value {
            println!("{v}");
        }
        println!("algorithm: {}", self.algorithm);
        for (k, v) in &self.details {
            println!("{k}: {v}");
        }
        if let Some(b) = self.error_bound {
            if b == 0.0 {
                println!("error bound: 0");
            } else {
                println!("error bound: {b:.3e}");
            }
        }
        println!("seed: {}", self.seed);
        if let Some(t) = &self.timings {
            println!("time: {:.3} ms", t.total_ms);
        }
    }
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Res<T> = Result<T, Failure>;

fn read(path: &Path) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Res<()> {
    std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn trials_arg(s: &str) -> Res<Option<usize>> {
    if s == "auto" {
        return Ok(None);
    }
    s.parse().map(Some).map_err(|_| Failure::Usage(format!("--trials expects a number or `auto`, got `{s}`")))
}

fn parse_point(s: &str, field: Field) -> Res<Vec<Scalar>> {
    s.split_whitespace().map(|t| Ok(Scalar::from_rational(&parse_rational(t)?, field)?)).collect()
}

fn format_bound(x: &impl ToPrimitive) -> String {
    format!("{:e}", x.to_f64().unwrap_or(f64::NAN))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (run, result) = dispatch(cli.cmd);
    match result {
        Ok(mut report) => {
            if run.timings {
                report.timings = Some(Timings { total_ms: start.elapsed().as_secs_f64() * 1e3 });
            }
            report.print(run.json);
            ExitCode::from(report.exit)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::CapExceeded { .. } => 3,
                Error::Undecided => 4,
                Error::Parse { .. } | Error::Invalid(_) | Error::Arity { .. } | Error::NotPrime(_) => 2,
                _ => 1,
            })
        }
    }
}

fn dispatch(cmd: Cmd) -> (Run, Res<Report>) {
    match cmd {
        Cmd::Member { circuit, lowrank, ideal, mode, trials, k, cap, run } => {
            let r = member(circuit.as_deref(), lowrank.as_deref(), &ideal, mode, &trials, k, cap, &run);
            (run, r)
        }
        Cmd::RemEval { lowrank, ideal, point, run } => {
            let r = rem_eval_cmd(&lowrank, &ideal, &point, &run);
            (run, r)
        }
        Cmd::Perm { matrix, rank, run } => {
            let r = perm(&matrix, rank, &run);
            (run, r)
        }
        Cmd::Vc { graph, k, trials, tight, run } => {
            let r = vc(&graph, k, trials, tight, &run);
            (run, r)
        }
        Cmd::Mlmd { circuit, k, exponents, trials, run } => {
            let r = mlmd(&circuit, k, &exponents, &trials, &run);
            (run, r)
        }
        Cmd::Certify { circuit, ideal, verify, search: _, out_cert, cap, run } => {
            let r = certify(&circuit, &ideal, verify.as_deref(), out_cert.as_deref(), cap, &run);
            (run, r)
        }
        Cmd::Reduce { problem, input, k, out_circuit, out_ideal, out_klineq, run } => {
            let r = reduce(problem, &input, k, out_circuit.as_deref(), out_ideal.as_deref(), out_klineq.as_deref(), &run);
            (run, r)
        }
        Cmd::Selftest { run } => {
            let r = selftest_cmd(&run);
            (run, r)
        }
    }
}

fn member_word(member: bool) -> String {
    if member { "MEMBER" } else { "NONMEMBER" }.to_string()
}

/// Exponents `e_0 … e_{n−1}` when every variable has a generator `c·x^e`.
fn power_exponents(ideal: &UnivariateIdeal, n: usize) -> Option<Vec<u32>> {
    let pairs = ideal.power_exponents()?;
    let mut exps = vec![None; n];
    for (v, e) in pairs {
        if v < n {
            exps[v] = Some(e);
        }
    }
    exps.into_iter().collect()
}

#[allow(clippy::too_many_arguments)]
fn member(
    circuit: Option<&Path>,
    lowrank: Option<&Path>,
    ideal_path: &Path,
    mode: Mode,
    trials: &str,
    k: Option<u32>,
    cap: usize,
    run: &Run,
) -> Res<Report> {
    let field = run.field.unwrap_or(Field::Rational);
    let ideal = io::parse_ideal(&read(ideal_path)?, field)?;
    let input: Option<LowRankInput> = match lowrank {
        Some(p) => Some(io::parse_lowrank(&read(p)?, field)?),
        None => None,
    };
    let c: Circuit = match (&input, circuit) {
        (Some(i), _) => i.to_circuit()?,
        (None, Some(p)) => io::parse_circuit(&read(p)?, field)?,
        (None, None) => return Err(Failure::Usage("need --circuit or --lowrank".into())),
    };
    let exps = power_exponents(&ideal, c.nvars());
    let k = k.unwrap_or_else(|| c.effective_degree());
    let colorings = trials_arg(trials)?;
    let (chosen, why) = match mode {
        Mode::Auto if input.is_some() => (Mode::Lowrank, "linear forms given".to_string()),
        Mode::Auto => match &exps {
            Some(e) => {
                let fan_in = powers_fan_in(e, k, colorings);
                if fan_in <= AUTO_POWERS_FAN_IN {
                    (Mode::Powers, format!("every generator is a power x_i^{{e_i}}, fan-in {fan_in}"))
                } else {
                    (Mode::Brute, format!("power ideal but fan-in {fan_in} > {AUTO_POWERS_FAN_IN}, expansion capped"))
                }
            }
            None => (Mode::Brute, "general ideal, expansion capped".to_string()),
        },
        m => (m, "requested".to_string()),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(run.seed);
    let mut rep;
    match chosen {
        Mode::Lowrank => {
            let input = input.ok_or_else(|| Failure::Usage("lowrank mode needs --lowrank".into()))?;
            let t = colorings.unwrap_or(20);
            let zt = random_zero_test(
                |beta| rem_eval(&input, &ideal, beta),
                input.nvars(),
                u64::from(input.degree),
                t,
                field,
                &mut rng,
            )?;
            rep = Report::new("lowrank remainder evaluation + Schwartz-Zippel", run.seed);
            rep.decision = Some(member_word(!zt.nonzero));
            let (num, den) = zt.per_trial_error;
            rep.error_bound = Some(if zt.nonzero { 0.0 } else { (num as f64 / den as f64).powi(t as i32) });
            rep.detail("rank", input.rank());
            rep.detail("degree bound", input.degree);
            rep.detail("trials", format!("{} of {t}", zt.trials_run));
        }
        Mode::Powers => {
            let exps = exps.ok_or_else(|| Failure::Usage("powers mode needs x_i^{e_i} generators on every variable".into()))?;
            let spec = PowerIdealSpec::new(exps, k)?;
            let config = PowersConfig { trials: colorings, ..PowersConfig::default() };
            let r = membership_powers(&c, &spec, config, &mut rng)?;
            rep = Report::new("scaled Hadamard product with a color-coded diagonal circuit", run.seed);
            rep.decision = Some(member_word(!r.not_in_ideal));
            rep.error_bound = Some(r.error_bound);
            rep.detail("k", k);
            rep.detail("colorings per degree", format!("{:?}", r.trials));
            rep.detail("fan-in", r.fan_in);
        }
        _ => {
            let m = is_member_brute(&c, &ideal, cap)?;
            rep = Report::new("expand and divide", run.seed);
            rep.decision = Some(member_word(m));
            rep.error_bound = Some(0.0);
            rep.detail("cap", cap);
        }
    }
    rep.detail("field", field);
    rep.detail("mode", format!("{} ({why})", mode_name(chosen)));
    Ok(rep)
}

/// Total detection-circuit summands over the degrees the powers path tests.
fn powers_fan_in(exps: &[u32], k: u32, trials: Option<usize>) -> usize {
    let m: u32 = exps.iter().map(|e| e.saturating_sub(1)).sum();
    (0..=k.min(m))
        .map(|j| detection_fan_in(j, trials.unwrap_or_else(|| auto_trials(j))))
        .fold(0usize, usize::saturating_add)
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Auto => "auto",
        Mode::Lowrank => "lowrank",
        Mode::Powers => "powers",
        Mode::Brute => "brute",
    }
}

fn rem_eval_cmd(lowrank: &Path, ideal: &Path, point: &str, run: &Run) -> Res<Report> {
    let field = run.field.unwrap_or(Field::Rational);
    let input = io::parse_lowrank(&read(lowrank)?, field)?;
    let ideal = io::parse_ideal(&read(ideal)?, field)?;
    let alpha = parse_point(point, field)?;
    let r = rem_eval_report(&input, &ideal, &alpha, Strategy::Auto)?;
    let mut rep = Report::new("recursive lowrank remainder evaluation", run.seed);
    rep.value = Some(io::format_scalar(&r.value));
    rep.error_bound = Some(0.0);
    rep.detail("field", field);
    rep.detail("levels", r.levels);
    rep.detail("residual ranks", format!("{:?}", r.residual_ranks));
    rep.detail("max terms", r.max_terms);
    Ok(rep)
}

fn perm(matrix: &Path, rank: Option<usize>, run: &Run) -> Res<Report> {
    let field = run.field.unwrap_or(Field::Rational);
    let a = io::parse_matrix(&read(matrix)?, field)?;
    let v = permanent_lowrank(&a, rank)?;
    let mut rep = Report::new("permanent as the x_1...x_n coefficient of a lowrank product", run.seed);
    rep.value = Some(io::format_scalar(&v));
    rep.error_bound = Some(0.0);
    rep.detail("field", field);
    rep.detail("rank", rank.map_or("computed".to_string(), |r| r.to_string()));
    Ok(rep)
}

fn vc(graph: &Path, k: usize, trials: usize, tight: bool, run: &Run) -> Res<Report> {
    let g = io::parse_graph(&read(graph)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(run.seed);
    let field = match run.field {
        Some(f) => f,
        None => Field::Prime(random_prime(31, &mut rng)),
    };
    let r = vertex_cover_lowrank(&g, k, trials, field, tight, &mut rng)?;
    let mut rep = Report::new("lowrank vertex-cover polynomial + Schwartz-Zippel", run.seed);
    rep.decision = Some(if r.has_vc { "HAS-VC" } else { "NO-VC" }.to_string());
    rep.error_bound = Some(r.error_bound);
    rep.detail("field", field);
    rep.detail("rank", r.rank);
    rep.detail("degree bound", r.deg_bound);
    rep.detail("sample size", r.sample_size);
    rep.detail("trials", format!("{} of {trials}", r.trials_run));
    Ok(rep)
}

fn mlmd(circuit: &Path, k: u32, exponents: &str, trials: &str, run: &Run) -> Res<Report> {
    let c = io::parse_circuit(&read(circuit)?, Field::Rational)?;
    let exps: Vec<u32> = exponents
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Failure::Usage(format!("bad exponent `{t}`"))))
        .collect::<Res<_>>()?;
    let spec = PowerIdealSpec::new(exps, k)?;
    let config = PowersConfig { trials: trials_arg(trials)?, ..PowersConfig::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(run.seed);
    let r = membership_powers(&c, &spec, config, &mut rng)?;
    let mut rep = Report::new("scaled Hadamard product with a color-coded diagonal circuit", run.seed);
    rep.decision = Some(member_word(!r.not_in_ideal));
    rep.error_bound = Some(r.error_bound);
    rep.detail("k", k);
    rep.detail("colorings per degree", format!("{:?}", r.trials));
    rep.detail("fan-in", r.fan_in);
    if let Some(j) = r.witness_degree {
        rep.detail("witness degree", j);
    }
    rep.detail("primes", format!("{:?}", r.primes));
    Ok(rep)
}

fn certify(circuit: &Path, ideal: &Path, verify: Option<&Path>, out: Option<&Path>, cap: usize, run: &Run) -> Res<Report> {
    if run.field.is_some_and(|f| f != Field::Rational) {
        return Err(Failure::Usage("certify works over q only".into()));
    }
    let c = io::parse_circuit(&read(circuit)?, Field::Rational)?;
    let ideal = io::parse_ideal(&read(ideal)?, Field::Rational)?;
    if let Some(path) = verify {
        let cert = io::parse_certificate(&read(path)?)?;
        let budget = compute_threshold(&c, &ideal, cap)?;
        let v = verify_certificate(&c, &ideal, &cert, &budget)?;
        let mut rep = Report::new("certificate verification", run.seed);
        rep.decision = Some(if v.accepted { "NONMEMBER" } else { "REJECTED" }.to_string());
        rep.error_bound = Some(0.0);
        rep.detail("residual test", v.residual_ok);
        rep.detail("gap test", v.gap_ok);
        rep.detail("eps bits", budget.eps_bits);
        rep.detail("M", format_bound(&budget.m));
        return Ok(rep);
    }
    let s = search_nonmembership(&c, &ideal, cap)?;
    let mut rep = Report::new("approximate-root search with exact threshold", run.seed);
    rep.error_bound = Some(0.0);
    rep.decision = Some(
        match s.decision {
            Decision::Member => "MEMBER",
            Decision::NonMember => "NONMEMBER",
            Decision::Undecided => {
                rep.exit = 4;
                "UNDECIDED"
            }
        }
        .to_string(),
    );
    rep.detail("tuples checked", s.tuples_checked);
    rep.detail("eps bits", s.budget.eps_bits);
    rep.detail("M", format_bound(&s.budget.m));
    if let Some(cert) = &s.certificate {
        match out {
            Some(p) => {
                write(p, &io::write_certificate(cert))?;
                rep.detail("certificate", p.display());
            }
            None => {
                let coords: Vec<String> = cert.iter().map(ToString::to_string).collect();
                rep.detail("certificate", coords.join(", "));
            }
        }
    }
    Ok(rep)
}

fn reduce(
    problem: Problem,
    input: &Path,
    k: Option<usize>,
    out_circuit: Option<&Path>,
    out_ideal: Option<&Path>,
    out_klineq: Option<&Path>,
    run: &Run,
) -> Res<Report> {
    let text = read(input)?;
    let need_k = || k.ok_or_else(|| Failure::Usage("this reduction needs --k".into()));
    let mut rep;
    let (c, ideal) = match problem {
        Problem::IndepSet => {
            let g = io::parse_graph(&text)?;
            rep = Report::new("independent set to grid-ideal membership", run.seed);
            reduce_independent_set(&g, need_k()?)?
        }
        Problem::Klineq => {
            let inst = io::parse_klineq(&text)?;
            rep = Report::new("k-Lin-Eq to power-ideal membership", run.seed);
            reduce_klineq(&inst)?
        }
        Problem::OneInThree => {
            let inst = io::parse_one_in_three(&text)?;
            let lin = reduce_one_in_three(&inst)?;
            rep = Report::new("1-in-3 SAT to k-Lin-Eq to power-ideal membership", run.seed);
            rep.detail("k-Lin-Eq rows", lin.k());
            if let Some(p) = out_klineq {
                write(p, &io::write_klineq(&lin))?;
            }
            reduce_klineq(&lin)?
        }
        Problem::Coloring => {
            let g = io::parse_graph(&text)?;
            rep = Report::new("graph coloring on roots of unity", run.seed);
            graph_coloring_instance(&g, need_k()?)?
        }
    };
    rep.detail("variables", c.nvars());
    rep.detail("nodes", c.nodes().len());
    rep.detail("generators", ideal.len());
    match out_circuit {
        Some(p) => write(p, &io::write_circuit(&c))?,
        None if !run.json => print!("{}", io::write_circuit(&c)),
        None => {}
    }
    match out_ideal {
        Some(p) => write(p, &io::write_ideal(&ideal))?,
        None if !run.json => print!("{}", io::write_ideal(&ideal)),
        None => {}
    }
    Ok(rep)
}

fn selftest_cmd(run: &Run) -> Res<Report> {
    let checks = selftest::run(run.seed);
    let failed = checks.iter().filter(|c| !c.passed).count();
    let mut rep = Report::new("oracle equivalence on random instances", run.seed);
    for c in &checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        rep.detail(c.name, format!("{tag} {}", c.detail));
    }
    rep.decision = Some(if failed == 0 { "PASS".into() } else { format!("FAIL ({failed} checks)") });
    if failed > 0 {
        rep.exit = 1;
    }
    Ok(rep)
}
