use std::path::PathBuf;
use std::process::ExitCode;

use ballpoly::duality::{
    apexed_prism_complex, barycentric_subdivision, canonical_duality, enumerate_self_dualities, fixed_point_report,
    SelfDuality,
};
use ballpoly::faces::build_face_complex;
use ballpoly::generators::{
    add_dangling_vertices, ball_truncate, rugby_ball, suspended_polygon, tetrahedron_with_arc_points, two_pole_family,
    GeneratorSpec, RugbyHeight,
};
use ballpoly::io::{
    diameter_graph_dot, export_mesh, parse_arc_counts, parse_edge_placements, parse_gap_placements, parse_number_list,
    parse_tolerance_overrides, read_configuration, skeleton_dot, to_report_json, write_configuration, DualityStatus,
    FaceCounts, RunReport,
};
use ballpoly::vazsonyi::{check_extremal, critical_core, diameter_graph};
use ballpoly::verify::run_invariant_suite;
use ballpoly::{Configuration, Error, Tolerance};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "ballpoly", version, about = "Face structure, extremality and self-duality of ball polytopes")]
struct Cli {
    /// Tolerance overrides, e.g. `eq_dist=1e-8,vertex_merge=1e-6`.
    #[arg(long, global = true)]
    tolerance: Option<String>,
    /// Seed for the sampling checks of `--verify`.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Run the full invariant suite on the input and fail on any violation.
    #[arg(long, global = true)]
    verify: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the face complex of B(V).
    Faces {
        input: String,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        mesh: Option<PathBuf>,
        #[arg(long)]
        obj: Option<PathBuf>,
        #[arg(long)]
        skeleton: Option<PathBuf>,
        /// Maximal arc subdivision step of the mesh, in degrees.
        #[arg(long, default_value_t = 5.0)]
        arc_step: f64,
    },
    /// Pairs realizing the diameter.
    DiameterGraph {
        input: String,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Decide e(V) = 2n − 2 and cross-check it against the face structure.
    CheckExtremal { input: String },
    /// Remove 2-valent points until every valence is at least 3.
    CriticalCore {
        input: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Canonical self-duality of an extremal configuration.
    Duality {
        input: String,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Construct a configuration from one of the families.
    Generate {
        #[command(subcommand)]
        family: Family,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Enumerate the involutory self-dualities of the apexed n-prism.
    PrismDualities {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum Family {
    /// Regular tetrahedron with points on pairwise adjacent arcs.
    Tetrahedron {
        /// Arc counts such as `01:2,02:1`.
        #[arg(long, default_value = "")]
        arcs: String,
    },
    /// Regular (2k−1)-gon with an apex.
    Suspended {
        #[arg(long)]
        k: usize,
    },
    /// Regular n-gon on the circle of two poles.
    Rugby {
        #[arg(long)]
        n: usize,
        /// Pole height, or `reuleaux`.
        #[arg(long)]
        h: String,
        #[arg(long)]
        poles: bool,
    },
    /// Two poles plus points on the dual arcs of marked gaps.
    TwoPole {
        #[arg(long)]
        h: f64,
        /// Marked angles in radians, increasing.
        #[arg(long, allow_hyphen_values = true)]
        angles: String,
        /// Per-gap parameters, gaps separated by `;`.
        #[arg(long)]
        gaps: String,
    },
    /// Truncate vertex `c` of an extremal configuration.
    Truncate(TruncateArgs),
    /// Add dangling vertices on edges of an extremal configuration.
    Dangling {
        input: String,
        /// Placements `edge:t,...`.
        #[arg(long)]
        placements: String,
    },
    /// Family given as a JSON spec file.
    Spec { path: PathBuf },
}

#[derive(Args)]
struct TruncateArgs {
    input: String,
    #[arg(long)]
    vertex: usize,
    #[arg(long, default_value_t = 0.05)]
    epsilon: f64,
}

enum Failure {
    Error(Error),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

type CliResult<T> = Result<T, Failure>;

fn write_file(path: &PathBuf, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| Failure::Error(Error::Io(format!("{}: {e}", path.display()))))
}

fn emit<T: Serialize>(value: &T) -> CliResult<String> {
    let s = to_report_json(value)?;
    print!("{s}");
    Ok(s)
}

struct Context {
    tolerance: Option<Tolerance>,
    seed: u64,
    verify: bool,
}

impl Context {
    fn tol(&self) -> Tolerance {
        self.tolerance.unwrap_or_default()
    }

    fn load(&self, input: &str) -> CliResult<Configuration> {
        let v = read_configuration(input)?;
        Ok(match self.tolerance {
            Some(t) => v.with_tolerance(t)?,
            None => v,
        })
    }

    fn maybe_verify(&self, v: &Configuration) -> CliResult<()> {
        if !self.verify {
            return Ok(());
        }
        let rep = run_invariant_suite(v, self.seed)?;
        for c in rep.checks.iter().filter(|c| !c.passed) {
            eprintln!("verification failed: {}: {}", c.name, c.detail);
        }
        if rep.all_passed() {
            eprintln!("verification passed: {} checks", rep.checks.len());
            Ok(())
        } else {
            Err(Failure::Verification(format!(
                "{} of {} checks failed",
                rep.checks.iter().filter(|c| !c.passed).count(),
                rep.checks.len()
            )))
        }
    }
}

#[derive(Serialize)]
struct DualityReport {
    status: DualityStatus,
    duality: SelfDuality,
}

#[derive(Serialize)]
struct PrismReport {
    n: usize,
    total: usize,
    fixed_point_free: usize,
    vertex_disjoint: usize,
}

fn run(cli: Cli) -> CliResult<()> {
    let ctx = Context {
        tolerance: cli.tolerance.as_deref().map(parse_tolerance_overrides).transpose()?,
        seed: cli.seed,
        verify: cli.verify,
    };
    match cli.command {
        Command::Faces { input, report, mesh, obj, skeleton, arc_step } => {
            let v = ctx.load(&input)?;
            let fc = build_face_complex(&v)?;
            let mut rep = RunReport::new(&input, &v);
            rep.faces = Some(FaceCounts::of(&fc));
            let text = emit(&rep)?;
            if let Some(path) = report {
                write_file(&path, &text)?;
            }
            if mesh.is_some() || obj.is_some() {
                let m = export_mesh(&fc, arc_step)?;
                if let Some(path) = mesh {
                    write_file(&path, &m.to_off())?;
                }
                if let Some(path) = obj {
                    write_file(&path, &m.to_obj())?;
                }
            }
            if let Some(path) = skeleton {
                write_file(&path, &skeleton_dot(&fc))?;
            }
            ctx.maybe_verify(&v)
        }
        Command::DiameterGraph { input, dot } => {
            let v = ctx.load(&input)?;
            let dg = diameter_graph(&v)?;
            #[derive(Serialize)]
            struct Out<'a> {
                n: usize,
                e_count: usize,
                diam: f64,
                edges: Vec<[usize; 2]>,
                valences: Vec<usize>,
                labels: &'a [usize],
            }
            let edges = dg.edges.iter().map(|e| [dg.labels[e[0]], dg.labels[e[1]]]).collect();
            emit(&Out {
                n: v.len(),
                e_count: dg.e_count(),
                diam: dg.diam,
                edges,
                valences: dg.valences(),
                labels: &dg.labels,
            })?;
            if let Some(path) = dot {
                write_file(&path, &diameter_graph_dot(&dg))?;
            }
            ctx.maybe_verify(&v)
        }
        Command::CheckExtremal { input } => {
            let v = ctx.load(&input)?;
            let verdict = check_extremal(&v)?;
            let mut rep = RunReport::new(&input, &v);
            rep.extremality = Some(verdict);
            emit(&rep)?;
            ctx.maybe_verify(&v)
        }
        Command::CriticalCore { input, out } => {
            let v = ctx.load(&input)?;
            let core = critical_core(&v)?;
            let text = write_configuration(&core);
            match out {
                Some(path) => write_file(&path, &text)?,
                None => print!("{text}"),
            }
            ctx.maybe_verify(&core)
        }
        Command::Duality { input, report } => {
            let v = ctx.load(&input)?;
            let fc = build_face_complex(&v)?;
            let d = canonical_duality(&fc)?;
            let k = barycentric_subdivision(&fc)?;
            let fp = fixed_point_report(&d, &k);
            let status = DualityStatus {
                canonical_found: true,
                cell_fixed_point_free: fp.cell_fixed_point_free,
                vertex_disjoint: fp.vertex_disjoint,
            };
            let text = emit(&DualityReport { status, duality: d })?;
            if let Some(path) = report {
                write_file(&path, &text)?;
            }
            ctx.maybe_verify(&v)
        }
        Command::Generate { family, out } => {
            let tol = ctx.tol();
            let v = match family {
                Family::Tetrahedron { arcs } => tetrahedron_with_arc_points(&parse_arc_counts(&arcs)?, tol)?,
                Family::Suspended { k } => suspended_polygon(k, tol)?,
                Family::Rugby { n, h, poles } => rugby_ball(n, h.parse::<RugbyHeight>()?, poles, tol)?,
                Family::TwoPole { h, angles, gaps } => {
                    two_pole_family(h, &parse_number_list(&angles)?, &parse_gap_placements(&gaps)?, tol)?.config
                }
                Family::Truncate(a) => ball_truncate(&ctx.load(&a.input)?, a.vertex, a.epsilon, None)?,
                Family::Dangling { input, placements } => {
                    add_dangling_vertices(&ctx.load(&input)?, &parse_edge_placements(&placements)?)?.config
                }
                Family::Spec { path } => {
                    let text = std::fs::read_to_string(&path).map_err(Error::from)?;
                    let spec: GeneratorSpec = serde_json::from_str(&text).map_err(|e| Error::Parse {
                        line: e.line(),
                        column: e.column(),
                        message: e.to_string(),
                    })?;
                    spec.build(tol)?
                }
            };
            let text = write_configuration(&v);
            match out {
                Some(path) => write_file(&path, &text)?,
                None => print!("{text}"),
            }
            ctx.maybe_verify(&v)
        }
        Command::PrismDualities { n } => {
            let c = apexed_prism_complex(n)?;
            let all = enumerate_self_dualities(&c)?;
            emit(&PrismReport {
                n,
                total: all.len(),
                fixed_point_free: all.iter().filter(|d| d.fixed_points.cell_fixed_point_free).count(),
                vertex_disjoint: all.iter().filter(|d| d.fixed_points.vertex_disjoint).count(),
            })?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
        Err(Failure::Verification(m)) => {
            eprintln!("verification failure: {m}");
            ExitCode::from(2)
        }
    }
}
