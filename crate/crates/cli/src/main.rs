mod report;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use kp3::dist_family::{lambda_k_d, verify_distance_family};
use kp3::family::{gamma_k, size_bound, verify_amiable, FamilyKind, Verdict, VertexFamily};
use kp3::generate::{generate_kp3_free, GeneratorMode, GeneratorSpec};
use kp3::io::{parse_family, parse_forbidden, parse_instance, serialize_instance};
use kp3::oracles::{self, OracleBudget};
use kp3::solvers::{self, is_valid_coloring, Decision, SolveOptions, Solution};
use kp3::{Error, Graph, Instance, VertexSet};

use report::{coloring_pairs, one_based, to_json, weight_string, FamilyReport, InstanceSummary, SolveReport, Verdicts};

/// Exact solvers for kP3-free graphs.
#[derive(Parser)]
#[command(name = "kp3", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an optimisation or decision problem on an instance file.
    Solve(SolveArgs),
    /// Build or check a vertex family of an instance's graph.
    Family(FamilyArgs),
    /// Write a random kP3-free instance to standard output.
    Gen(GenArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Problem {
    /// Max-weight list-colourable induced subgraph (uses r, lists, weights; d must be 2).
    Mwlcis,
    /// Min-weight odd cycle transversal (uses weights).
    Oct,
    /// Max-weight independent set (uses weights).
    Mwis,
    /// Max-weight distance-d independent set (uses weights and d >= 6).
    Dsis,
    /// List (d,r)-colouring decision (uses r, lists and d >= 6).
    Ldrcol,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(value_enum)]
    problem: Problem,
    instance: PathBuf,
    /// Check with the exhaustive oracle that the graph is kP3-free first.
    #[arg(long)]
    verify_k: bool,
    /// Cross-check the answer against the brute-force oracle.
    #[arg(long)]
    oracle: bool,
    /// Worker threads for tuple evaluation; output does not depend on it.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: u32,
    /// Add the elapsed wall-clock time to the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyAction {
    /// Amiable family of the graph for the instance's k.
    Gen,
    /// Forbidden-set distance family for the instance's k and d (d >= 6).
    GenDist,
    /// Check a family (from --family, or freshly generated) for all defining properties.
    Verify,
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(value_enum)]
    action: FamilyAction,
    instance: PathBuf,
    /// Forbidden vertex file ("f v1 v2 ..." lines, 1-based).
    #[arg(long)]
    forbidden: Option<PathBuf>,
    /// Family file to verify ("m v1 v2 ..." lines, 1-based).
    #[arg(long)]
    family: Option<PathBuf>,
    /// Verify as a distance family using the instance's d and --forbidden.
    #[arg(long)]
    dist: bool,
    /// Include every member in the report.
    #[arg(long)]
    dump: bool,
    /// Add the elapsed wall-clock time to the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct GenArgs {
    /// Small random part plus a random cluster graph (default).
    #[arg(long, conflicts_with = "rejection")]
    structured: bool,
    /// Random graphs resampled until kP3-free (n at most 16).
    #[arg(long)]
    rejection: bool,
    /// Number of vertices.
    #[arg(long)]
    n: usize,
    /// The generated graph is kP3-free for this k.
    #[arg(long)]
    k: u32,
    /// Seed for the ChaCha8 generator.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Edge probability (rejection) or clique-joining probability (structured).
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    /// Palette size written to the instance.
    #[arg(long, default_value_t = 1)]
    r: u32,
    /// Distance parameter written to the instance.
    #[arg(long, default_value_t = 2)]
    d: u32,
    /// Rejection mode gives up after this many samples.
    #[arg(long, default_value_t = 1000)]
    max_attempts: u32,
}

/// Failure with its exit code.
enum Failure {
    /// 1: usage, I/O or parse error.
    Input(String),
    /// 2: the instance or flags violate a precondition.
    Precondition(String),
    /// 3: a result failed independent verification.
    Verification(String),
    /// 4: the solver disagrees with the brute-force oracle.
    OracleMismatch(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Precondition(_) => 2,
            Failure::Verification(_) => 3,
            Failure::OracleMismatch(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) => write!(f, "error: {m}"),
            Failure::Precondition(m) => write!(f, "precondition violated: {m}"),
            Failure::Verification(m) => write!(f, "verification failed: {m}"),
            Failure::OracleMismatch(m) => write!(f, "oracle mismatch: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::Semantic(_) => Failure::Input(e.to_string()),
            _ => Failure::Precondition(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    parse_instance(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn elapsed(start: Instant, enabled: bool) -> Option<u64> {
    enabled.then(|| start.elapsed().as_micros() as u64)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let result = match cli.command {
        Command::Solve(args) => cmd_solve(&args),
        Command::Family(args) => cmd_family(&args),
        Command::Gen(args) => cmd_gen(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{f}");
            ExitCode::from(f.code())
        }
    }
}

fn is_bipartite(g: &Graph) -> bool {
    let mut side: Vec<Option<bool>> = vec![None; g.universe()];
    for s in g.vertices().iter() {
        if side[s].is_some() {
            continue;
        }
        side[s] = Some(false);
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            let su = side[u].expect("visited");
            for v in g.neighbors(u).iter() {
                match side[v] {
                    None => {
                        side[v] = Some(!su);
                        stack.push(v);
                    }
                    Some(sv) if sv == su => return false,
                    Some(_) => {}
                }
            }
        }
    }
    true
}

/// Independent check of a solver result against the instance.
fn check_solution(problem: Problem, inst: &Instance, sol: &Solution) -> Result<(), String> {
    let g = &inst.graph;
    if sol.weight != inst.weight_of(&sol.chosen) {
        return Err("reported weight differs from the weight of the chosen set".into());
    }
    let ok = match problem {
        Problem::Mwlcis => sol
            .coloring
            .as_ref()
            .is_some_and(|c| is_valid_coloring(g, &inst.lists, &sol.chosen, c, 2)),
        Problem::Oct => {
            let rest = g.vertices().difference(&sol.chosen);
            is_bipartite(&g.induced_subgraph(&rest).map_err(|e| e.to_string())?)
        }
        Problem::Mwis => g.is_distance_d_independent(&sol.chosen, 2).unwrap_or(false),
        Problem::Dsis => g.is_distance_d_independent(&sol.chosen, inst.d).unwrap_or(false),
        Problem::Ldrcol => {
            sol.chosen == *g.vertices()
                && sol
                    .coloring
                    .as_ref()
                    .is_some_and(|c| is_valid_coloring(g, &inst.lists, &sol.chosen, c, inst.d))
        }
    };
    if ok {
        Ok(())
    } else {
        Err("the chosen set or colouring is not a feasible solution".into())
    }
}

fn problem_name(p: Problem) -> &'static str {
    match p {
        Problem::Mwlcis => "mwlcis",
        Problem::Oct => "oct",
        Problem::Mwis => "mwis",
        Problem::Dsis => "dsis",
        Problem::Ldrcol => "ldrcol",
    }
}

fn cmd_solve(args: &SolveArgs) -> Result<(), Failure> {
    let inst = load_instance(&args.instance)?;
    let start = Instant::now();
    let opts = SolveOptions {
        jobs: Some(args.jobs as usize),
        verify_k: args.verify_k,
        budget: OracleBudget::default(),
    };
    let g = &inst.graph;
    let w = &inst.weights;
    let outcome = match args.problem {
        Problem::Mwlcis => Decision::Yes(solvers::solve_mwlcis_with(&inst, &opts)?),
        Problem::Oct => Decision::Yes(solvers::solve_oct_with(g, w, inst.k, &opts)?),
        Problem::Mwis => Decision::Yes(solvers::solve_mwis_with(g, w, inst.k, &opts)?),
        Problem::Dsis => Decision::Yes(solvers::solve_distance_d_mwis_with(g, w, inst.k, inst.d, &opts)?),
        Problem::Ldrcol => solvers::solve_list_dr_coloring_with(&inst, &opts)?,
    };
    if let Decision::Yes(sol) = &outcome {
        check_solution(args.problem, &inst, sol).map_err(Failure::Verification)?;
    }

    let mut mismatch = None;
    let oracle = if args.oracle {
        let budget = OracleBudget::default();
        let agrees = match (&outcome, args.problem) {
            (Decision::Yes(sol), Problem::Mwlcis) => {
                let best = oracles::brute_mwlcis(&inst, &budget)?;
                (sol.weight == best).then_some(()).ok_or(weight_string(&best))
            }
            (Decision::Yes(sol), Problem::Oct) => {
                let best = oracles::brute_oct(g, w, &budget)?;
                (sol.weight == best).then_some(()).ok_or(weight_string(&best))
            }
            (Decision::Yes(sol), Problem::Mwis) => {
                let best = oracles::brute_mwis(g, w, &budget)?;
                (sol.weight == best).then_some(()).ok_or(weight_string(&best))
            }
            (Decision::Yes(sol), Problem::Dsis) => {
                let best = oracles::brute_distance_mwis(g, w, inst.d, &budget)?;
                (sol.weight == best).then_some(()).ok_or(weight_string(&best))
            }
            (_, _) => {
                let yes = oracles::brute_list_dr_coloring(&inst, &budget)?;
                (yes == outcome.is_yes())
                    .then_some(())
                    .ok_or_else(|| if yes { "yes" } else { "no" }.to_string())
            }
        };
        match agrees {
            Ok(()) => "match".to_string(),
            Err(expected) => {
                mismatch = Some(format!("oracle answer is {expected}"));
                "mismatch".to_string()
            }
        }
    } else {
        "skipped".to_string()
    };

    let mut command = format!("solve {}", problem_name(args.problem));
    if args.verify_k {
        command.push_str(" --verify-k");
    }
    if args.oracle {
        command.push_str(" --oracle");
    }
    let (decision, sol) = match (&outcome, args.problem) {
        (Decision::Yes(s), Problem::Ldrcol) => (Some("yes"), Some(s)),
        (Decision::No, _) => (Some("no"), None),
        (Decision::Yes(s), _) => (None, Some(s)),
    };
    let report = SolveReport {
        command,
        instance: InstanceSummary::of(&inst),
        decision,
        weight: sol.map(|s| weight_string(&s.weight)),
        chosen: sol.map(|s| one_based(&s.chosen)),
        coloring: sol.and_then(|s| s.coloring.as_ref().map(coloring_pairs)),
        verdicts: Verdicts {
            solution: if sol.is_some() { "valid" } else { "not applicable" },
            k_check: if args.verify_k { "passed" } else { "skipped" },
            oracle,
        },
        elapsed_us: elapsed(start, args.timing),
    };
    print!("{}", to_json(&report));
    match mismatch {
        Some(m) => Err(Failure::OracleMismatch(m)),
        None => Ok(()),
    }
}

fn cmd_family(args: &FamilyArgs) -> Result<(), Failure> {
    let inst = load_instance(&args.instance)?;
    let g = &inst.graph;
    let n = g.universe();
    let forbidden = match &args.forbidden {
        Some(p) => parse_forbidden(&read(p)?, n).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?,
        None => VertexSet::new(),
    };
    let start = Instant::now();
    let distance = matches!(args.action, FamilyAction::GenDist) || args.dist;
    let kind = if distance {
        FamilyKind::ForbiddenDistanceAmiable {
            d: inst.d,
            forbidden: forbidden.clone(),
        }
    } else {
        FamilyKind::Amiable
    };
    let family: VertexFamily = match (&args.family, args.action) {
        (Some(p), FamilyAction::Verify) => {
            parse_family(&read(p)?, n, kind).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?
        }
        (Some(_), _) => return Err(Failure::Input("--family is only used by \"family verify\"".into())),
        (None, _) if distance => lambda_k_d(g, &forbidden, inst.k, inst.d)?,
        (None, _) => gamma_k(g, inst.k)?,
    };
    let verdict = match args.action {
        FamilyAction::Verify => {
            let budget = OracleBudget::default();
            Some(if distance {
                verify_distance_family(g, &forbidden, inst.d, &family, &budget)?
            } else {
                verify_amiable(g, &family, &budget)?
            })
        }
        _ => None,
    };
    let bound = size_bound(g.order(), inst.k);
    let action = match args.action {
        FamilyAction::Gen => "gen",
        FamilyAction::GenDist => "gen-dist",
        FamilyAction::Verify => "verify",
    };
    let mut command = format!("family {action}");
    if args.dist {
        command.push_str(" --dist");
    }
    let report = FamilyReport {
        command,
        instance: InstanceSummary::of(&inst),
        forbidden: one_based(&forbidden),
        family_size: family.len(),
        size_bound: bound.to_string(),
        within_bound: family.len() as u128 <= bound,
        verdict: verdict.as_ref().map(|v| match v {
            Verdict::Ok => "ok".to_string(),
            Verdict::Counterexample(c) => format!("counterexample: {c}"),
        }),
        members: args.dump.then(|| family.iter().map(one_based).collect()),
        elapsed_us: elapsed(start, args.timing),
    };
    print!("{}", to_json(&report));
    match verdict {
        Some(Verdict::Counterexample(c)) => Err(Failure::Verification(c.to_string())),
        _ => Ok(()),
    }
}

fn cmd_gen(args: &GenArgs) -> Result<(), Failure> {
    let spec = GeneratorSpec {
        mode: if args.rejection {
            GeneratorMode::Rejection
        } else {
            GeneratorMode::Structured
        },
        n: args.n,
        k: args.k,
        edge_density: args.density,
        seed: args.seed,
        max_attempts: args.max_attempts,
    };
    let g = generate_kp3_free(&spec)?;
    let inst = Instance::unweighted(g, args.r, args.k, args.d)?;
    print!("{}", serialize_instance(&inst));
    Ok(())
}
