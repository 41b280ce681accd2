use std::fs::File;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mfunctor::basic_data::{load, matrix_to_json_value, to_json_string};
use mfunctor::curve_operators::{CofVariant, DehnClosedForm};
use mfunctor::genus_zero_relations::run_all;
use mfunctor::label_algebra::{structural_checks, verlinde_dim};
use mfunctor::linalg::{fmt_c, max_diff, CMat};
use mfunctor::s_reconstruction::{
    reconstruct_s0, s_from_twist_sandwich, s_lambda_main, MainForm, McgForm, SLambdaResult,
};
use mfunctor::suite::{full_suite, SuiteOptions};
use mfunctor::{generate, BasicData, Error, RelationReport};

const EXIT_HELP: &str = "Exit codes:
  0  every checked relation passes
  1  a relation fails (residual not below tolerance) or a reconstruction step fails
  2  the input document cannot be read, parsed or has inconsistent shapes,
     or the command line is malformed
  3  a built-in generator failed to produce a theory";

#[derive(Parser)]
#[command(name = "mfunctor", version, about = "Check and reconstruct modular functor basic data", after_help = EXIT_HELP)]
struct Cli {
    /// Residual tolerance; overrides the document's "tol"
    #[arg(long, global = true, value_parser = positive_f64)]
    tol: Option<f64>,
    /// Worker threads for the relation sweeps (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Tab-separated report lines only, no summaries
    #[arg(long, global = true)]
    machine: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Structural checks and every genus-zero relation
    Validate { input: PathBuf },
    /// Genus-zero relations plus the genus-one checks: integrality, Dehn
    /// coefficients, C multiplicativity, route equivalence and the torus
    /// mapping class relation
    Relations {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ClosedForm::Quotient)]
        closed_form: ClosedForm,
        #[arg(long, value_enum, default_value_t = McgArg::Image)]
        mcg_form: McgArg,
        #[arg(long, value_enum, default_value_t = CofArg::Statement)]
        cof: CofArg,
    },
    /// S(λ) from both routes, with residuals
    SMatrix {
        input: PathBuf,
        #[arg(long)]
        label: String,
        /// Which route is printed as the result
        #[arg(long, value_enum, default_value_t = Variant::Main)]
        variant: Variant,
        #[arg(long, value_enum, default_value_t = CofArg::Statement)]
        cof: CofArg,
        #[arg(long, value_enum, default_value_t = MainArg::Theorem)]
        main_form: MainArg,
    },
    /// Dimension of the space of a genus-g surface with labeled boundary
    Dims {
        input: PathBuf,
        #[arg(long)]
        genus: usize,
        /// Comma-separated boundary labels
        #[arg(long, value_delimiter = ',', default_value = "")]
        boundary: Vec<String>,
    },
    /// Emit a built-in theory: trivial, fibonacci or abelian-k
    Generate { name: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Main,
    Sandwich,
}

#[derive(Clone, Copy, ValueEnum)]
enum CofArg {
    Statement,
    Proof,
}

#[derive(Clone, Copy, ValueEnum)]
enum MainArg {
    Theorem,
    Proof,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClosedForm {
    /// c_κ = d_{κ†} S_{κ†,0}
    Printed,
    /// c_κ = S_{κ,0} / d_κ
    Quotient,
}

#[derive(Clone, Copy, ValueEnum)]
enum McgArg {
    /// (S T)³ = ρ S²
    Literal,
    /// (S⁻¹ T)³ = ρ S⁻²
    Image,
}

impl From<CofArg> for CofVariant {
    fn from(c: CofArg) -> Self {
        match c {
            CofArg::Statement => CofVariant::Statement,
            CofArg::Proof => CofVariant::Proof,
        }
    }
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("tolerance must be a positive number, got {s:?}")),
    }
}

enum Failure {
    Relation(String),
    Format(Error),
    Generator(Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Relation(_) => 1,
            Failure::Format(_) => 2,
            Failure::Generator(_) => 3,
        }
    }
}

type Outcome = Result<bool, Failure>;

fn read_doc(path: &PathBuf, tol: Option<f64>) -> Result<BasicData, Failure> {
    let mut buf = String::new();
    let res = if path.as_os_str() == "-" {
        io::stdin().read_to_string(&mut buf)
    } else {
        File::open(path).and_then(|mut f| f.read_to_string(&mut buf))
    };
    res.map_err(|e| Failure::Format(Error::Internal(format!("{}: {e}", path.display()))))?;
    let mut bd = load(buf.as_bytes()).map_err(Failure::Format)?;
    if let Some(t) = tol {
        bd.tol = t;
    }
    Ok(bd)
}

fn relation_err(e: Error) -> Failure {
    Failure::Relation(e.to_string())
}

fn emit(reports: &[RelationReport], machine: bool) -> bool {
    for r in reports {
        println!("{r}");
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    if !machine {
        println!("# {} checks, {} failed", reports.len(), failed);
    }
    failed == 0
}

fn cmd_validate(bd: &BasicData, machine: bool) -> Outcome {
    let mut reports = structural_checks(&bd.labels, &bd.dims);
    reports.extend(run_all(bd));
    Ok(emit(&reports, machine))
}

fn cmd_relations(bd: &BasicData, opt: SuiteOptions, machine: bool) -> Outcome {
    Ok(emit(&full_suite(bd, opt), machine))
}

fn print_matrix(title: &str, m: &CMat) {
    println!("{title}");
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| fmt_c(m[(i, j)], 12)).collect();
        println!("  [{}]", row.join(", "));
    }
}

fn basis_names(bd: &BasicData, r: &SLambdaResult) -> Vec<String> {
    r.basis
        .iter()
        .map(|&(mu, i)| format!("{}:{}", bd.labels.name(mu), i))
        .collect()
}

fn cmd_s_matrix(
    bd: &BasicData,
    label: &str,
    variant: Variant,
    cof: CofVariant,
    main_form: MainForm,
    machine: bool,
) -> Outcome {
    let lam = bd.labels.index(label).map_err(Failure::Format)?;
    let tol = bd.tol;
    let mut fixed_point = None;
    let bd_s;
    let bd = if bd.s.is_some() {
        bd
    } else {
        let rec = reconstruct_s0(bd).map_err(relation_err)?;
        fixed_point = Some(rec.residual);
        bd_s = bd.clone().with_s(Some(rec.s));
        &bd_s
    };
    let main = s_lambda_main(bd, lam, None, main_form, cof).map_err(relation_err)?;
    let sw = s_from_twist_sandwich(bd, lam, cof).map_err(relation_err)?;
    let route = max_diff(&main.m, &sw.m);
    // against the document's S only when it came with one
    let self_res = if fixed_point.is_none() {
        main.residual
    } else {
        None
    };
    let mut ok = route < tol;
    if let Some(r) = self_res {
        ok &= r < tol;
    }
    if let Some(r) = fixed_point {
        ok &= r < tol;
    }
    let (chosen, other) = match variant {
        Variant::Main => (&main, &sw),
        Variant::Sandwich => (&sw, &main),
    };
    if machine {
        let v = serde_json::json!({
            "label": label,
            "basis": basis_names(bd, chosen),
            "variant": chosen.variant,
            "S": matrix_to_json_value(&chosen.m),
            "other_variant": other.variant,
            "other": matrix_to_json_value(&other.m),
            "route_residual": route,
            "self_residual": self_res,
            "fixed_point_residual": fixed_point,
            "pass": ok,
        });
        println!("{v}");
    } else {
        println!("basis: {}", basis_names(bd, chosen).join(" "));
        print_matrix(&format!("S({label}) [{}]:", chosen.variant), &chosen.m);
        print_matrix(&format!("S({label}) [{}]:", other.variant), &other.m);
        println!("route residual: {route:.2e}");
        if let Some(r) = self_res {
            println!("self-consistency residual: {r:.2e}");
        }
        if let Some(r) = fixed_point {
            println!("fixed-point residual: {r:.2e}");
        }
        println!("{}", if ok { "PASS" } else { "FAIL" });
    }
    Ok(ok)
}

fn cmd_dims(bd: &BasicData, genus: usize, boundary: &[String]) -> Outcome {
    let labels = boundary
        .iter()
        .filter(|s| !s.is_empty())
        .map(|s| bd.labels.index(s.trim()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(Failure::Format)?;
    println!("{}", verlinde_dim(&bd.labels, &bd.dims, genus, &labels));
    Ok(true)
}

fn cmd_generate(name: &str) -> Outcome {
    let bd = generate(name).map_err(Failure::Generator)?;
    println!("{}", to_json_string(&bd));
    Ok(true)
}

fn run(cli: Cli) -> Outcome {
    let machine = cli.machine;
    match cli.cmd {
        Cmd::Validate { input } => cmd_validate(&read_doc(&input, cli.tol)?, machine),
        Cmd::Relations {
            input,
            closed_form,
            mcg_form,
            cof,
        } => {
            let opt = SuiteOptions {
                closed_form: Some(match closed_form {
                    ClosedForm::Printed => DehnClosedForm::Printed,
                    ClosedForm::Quotient => DehnClosedForm::TwistQuotient,
                }),
                mcg: match mcg_form {
                    McgArg::Literal => McgForm::Literal,
                    McgArg::Image => McgForm::MappingClassImage,
                },
                cof: cof.into(),
            };
            cmd_relations(&read_doc(&input, cli.tol)?, opt, machine)
        }
        Cmd::SMatrix {
            input,
            label,
            variant,
            cof,
            main_form,
        } => {
            let form = match main_form {
                MainArg::Theorem => MainForm::Theorem,
                MainArg::Proof => MainForm::Proof,
            };
            cmd_s_matrix(
                &read_doc(&input, cli.tol)?,
                &label,
                variant,
                cof.into(),
                form,
                machine,
            )
        }
        Cmd::Dims {
            input,
            genus,
            boundary,
        } => cmd_dims(&read_doc(&input, cli.tol)?, genus, &boundary),
        Cmd::Generate { name } => cmd_generate(&name),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global()
        {
            eprintln!("mfunctor: cannot configure {j} workers: {e}");
        }
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            match &f {
                Failure::Relation(m) => eprintln!("mfunctor: {m}"),
                Failure::Format(e) | Failure::Generator(e) => eprintln!("mfunctor: {e}"),
            }
            ExitCode::from(f.code())
        }
    }
}
