use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use finegrad::enumerate::{fine_gradings, Class, Enumeration, Family, GradingReport, Options, DEFAULT_MAX_N};
use finegrad::graded::MatGrading;
use finegrad::liealg::verify_lie;
use finegrad::octonion_d4::{self as d4, D4Row};
use finegrad::{CycNum, Error, Matrix, Rational};
use serde::Serialize;
use serde_json::json;

#[derive(Parser)]
#[command(name = "finegrad", version, about = "Fine gradings of sl_n, so_n, sp_n and so_8 with triality")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the fine gradings of a classical Lie algebra up to equivalence
    Enumerate {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        out: Output,
        /// Write the homogeneous bases of every grading into this directory
        #[arg(long)]
        emit_bases: Option<PathBuf>,
    },
    /// Build one class of an enumeration and list its homogeneous components
    Construct {
        #[command(flatten)]
        target: Target,
        /// 1-based position in the enumeration order
        #[arg(long)]
        index: usize,
        #[command(flatten)]
        out: Output,
        #[arg(long)]
        emit_bases: Option<PathBuf>,
    },
    /// Re-check every grading of an enumeration; exit 1 with a witness on failure
    Verify {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        out: Output,
    },
    /// The 17 fine gradings of so_8
    D4Table {
        #[command(flatten)]
        out: Output,
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
    /// Octonion, triality and root-system identities
    Selftest,
}

#[derive(Args)]
struct Target {
    /// sl, so or sp
    #[arg(long)]
    family: Family,
    #[arg(long)]
    n: usize,
    /// so_8 only: list the classes before triality identifies two of them
    #[arg(long)]
    premerge: bool,
    /// Worker threads, 0 for all cores
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_N)]
    max_n: usize,
}

impl Target {
    fn options(&self) -> Options {
        Options { premerge: self.premerge, max_n: self.max_n, workers: self.workers }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write to a file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invalid(_) | Error::Unsupported(_) | Error::Parse(_) => Failure::Usage(e.to_string()),
            _ => Failure::Verification(e.to_string()),
        }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure::Usage(format!("{}: {e}", path.display()))
}

fn render_type(t: &[usize]) -> String {
    let parts: Vec<String> = t.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

fn emit(out: &Output, text: String) -> Result<(), Failure> {
    match &out.output {
        Some(p) => fs::write(p, text).map_err(|e| io_failure(p, e)),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| io_failure(Path::new("stdout"), e))
        }
    }
}

fn to_json(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn report_row(r: &GradingReport) -> String {
    format!("{}\t{}\t{}\t{}\t{}\t{}\n", r.family, r.n, r.division, r.tuple, r.group, render_type(&r.type_))
}

fn enumeration_text(e: &Enumeration, format: Format) -> String {
    match format {
        Format::Json => to_json(&json!({
            "family": e.family,
            "n": e.n,
            "count": e.count(),
            "count_tag": e.count_tag(),
            "premerge": e.premerge,
            "reports": e.reports(),
        })),
        Format::Table => {
            let mut s = String::from("family\tn\tD\ttuple\tgroup\ttype\n");
            for r in e.reports() {
                s.push_str(&report_row(r));
            }
            s
        }
    }
}

fn matrix_strings(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect()).collect()
}

fn bases_json(report: &GradingReport, g: &MatGrading) -> serde_json::Value {
    let components: Vec<_> = g
        .components
        .iter()
        .map(|(deg, basis)| json!({ "degree": deg.to_string(), "basis": basis.iter().map(matrix_strings).collect::<Vec<_>>() }))
        .collect();
    json!({ "report": report, "components": components })
}

fn write_bases(dir: &Path, index: usize, c: &Class) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
    let path = dir.join(format!("{}{}-{:02}.json", c.report.family, c.report.n, index));
    fs::write(&path, to_json(&bases_json(&c.report, &c.grading))).map_err(|e| io_failure(&path, e))
}

fn check_target(t: &Target) -> Result<(), Failure> {
    if t.premerge && !(t.family == Family::So && t.n == 8) {
        return Err(Failure::Usage("--premerge only applies to --family so --n 8".into()));
    }
    Ok(())
}

fn enumerate(target: &Target, out: &Output, bases: Option<&Path>) -> Result<(), Failure> {
    check_target(target)?;
    let e = fine_gradings(target.family, target.n, &target.options())?;
    if let Some(dir) = bases {
        for (i, c) in e.classes.iter().enumerate() {
            write_bases(dir, i + 1, c)?;
        }
    }
    emit(out, enumeration_text(&e, out.format))
}

fn construct(target: &Target, index: usize, out: &Output, bases: Option<&Path>) -> Result<(), Failure> {
    check_target(target)?;
    let e = fine_gradings(target.family, target.n, &target.options())?;
    let c = index
        .checked_sub(1)
        .and_then(|i| e.classes.get(i))
        .ok_or_else(|| Failure::Usage(format!("--index must be between 1 and {}", e.count())))?;
    if let Some(dir) = bases {
        write_bases(dir, index, c)?;
    }
    let dims: Vec<(String, usize)> = c.grading.components.iter().map(|(g, b)| (g.to_string(), b.len())).collect();
    let text = match out.format {
        Format::Json => to_json(&json!({
            "report": c.report,
            "components": dims.iter().map(|(g, d)| json!({ "degree": g, "dim": d })).collect::<Vec<_>>(),
        })),
        Format::Table => {
            let mut s = String::from("family\tn\tD\ttuple\tgroup\ttype\n");
            s.push_str(&report_row(&c.report));
            s.push_str("\ndegree\tdim\n");
            for (g, d) in dims {
                s.push_str(&format!("{g}\t{d}\n"));
            }
            s
        }
    };
    emit(out, text)
}

fn type_sum(t: &[usize]) -> usize {
    t.iter().enumerate().map(|(i, c)| (i + 1) * c).sum()
}

fn verify(target: &Target, out: &Output) -> Result<(), Failure> {
    check_target(target)?;
    let e = fine_gradings(target.family, target.n, &target.options())?;
    let mut lines = Vec::new();
    let mut failures = Vec::new();
    for (i, c) in e.classes.iter().enumerate() {
        let mut witness: Vec<String> = verify_lie(&c.grading).into_iter().map(|v| v.what).take(3).collect();
        if type_sum(&c.report.type_) != c.grading.dim() {
            witness.push(format!("type sum {} != dimension {}", type_sum(&c.report.type_), c.grading.dim()));
        }
        let status = if witness.is_empty() { "ok".to_string() } else { format!("FAIL {}", witness.join("; ")) };
        if !witness.is_empty() {
            failures.push(format!("class {} {}: {}", i + 1, c.report.tuple, witness.join("; ")));
        }
        lines.push((i + 1, c.report.tuple.clone(), c.report.group.clone(), status));
    }
    if let Some(g) = e.golden {
        if g != e.count() {
            failures.push(format!("count {} differs from the known value {g}", e.count()));
        }
    }
    let text = match out.format {
        Format::Json => to_json(&json!({
            "family": e.family,
            "n": e.n,
            "count": e.count(),
            "count_tag": e.count_tag(),
            "failures": failures,
            "classes": lines.iter().map(|(i, t, g, s)| json!({ "index": i, "tuple": t, "group": g, "status": s })).collect::<Vec<_>>(),
        })),
        Format::Table => {
            let mut s = String::from("index\ttuple\tgroup\tstatus\n");
            for (i, t, g, st) in &lines {
                s.push_str(&format!("{i}\t{t}\t{g}\t{st}\n"));
            }
            s.push_str(&format!("# {} classes, {}\n", e.count(), e.count_tag()));
            s
        }
    };
    emit(out, text)?;
    match failures.first() {
        None => Ok(()),
        Some(_) => Err(Failure::Verification(failures.join("\n"))),
    }
}

fn d4_text(rows: &[D4Row], format: Format) -> String {
    match format {
        Format::Json => to_json(&json!({ "count": rows.len(), "rows": rows })),
        Format::Table => {
            let mut s = String::from("index\tgroup\ttype\tprovenance\n");
            for r in rows {
                s.push_str(&format!("{}\t{}\t{}\t{}\n", r.index, r.report.group, render_type(&r.report.type_), r.source));
            }
            s
        }
    }
}

fn d4_table(out: &Output, workers: usize) -> Result<(), Failure> {
    let rows = d4::d4_table(&Options { workers, ..Options::default() })?;
    emit(out, d4_text(&rows, out.format))
}

type Check = (&'static str, fn() -> Result<(), String>);

fn expect(ok: bool, witness: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(witness())
    }
}

fn half_cartan(v: [i64; 4]) -> Matrix {
    d4::cartan()
        .iter()
        .zip(v)
        .fold(Matrix::zeros(8, 8), |m, (h, c)| m.add(&h.scale(&CycNum::from_rational(Rational::new(c, 2)))))
}

fn selftest_checks() -> Vec<Check> {
    vec![
        ("octonion norm is multiplicative on basis pairs", || {
            for i in 0..8 {
                for j in 0..8 {
                    let (x, y) = (d4::Octonion::basis(i), d4::Octonion::basis(j));
                    let lhs = d4::norm(&d4::oct_mul(&x, &y));
                    expect(lhs == &d4::norm(&x) * &d4::norm(&y), || format!("b{i} b{j}"))?;
                }
            }
            let x = d4::Octonion::from_ints([1, 2, -1, 3, 0, 1, 1, -2]);
            let y = d4::Octonion::from_ints([2, -1, 1, 0, 1, 3, -1, 1]);
            expect(d4::norm(&d4::oct_mul(&x, &y)) == &d4::norm(&x) * &d4::norm(&y), || "mixed pair".into())
        }),
        ("tau is an automorphism of order 3", || {
            expect(d4::Eta::new(d4::tau_matrix()).is_ok(), || "tau rejected".into())
        }),
        ("theta on h0..h3", || {
            let tri = d4::Triality::standard();
            let h = d4::cartan();
            let rows = [[-1, -1, -1, -1], [1, 1, -1, -1], [1, -1, 1, -1], [1, -1, -1, 1]];
            for (i, r) in rows.into_iter().enumerate() {
                expect(tri.theta(&h[i]) == Some(half_cartan(r)), || format!("theta(h{i})"))?;
            }
            Ok(())
        }),
        ("theta^3 = id and theta preserves brackets", || {
            let tri = d4::Triality::standard();
            let t = |x: &Matrix| tri.theta(x).expect("in so(C,q)");
            let basis = d4::so_basis();
            for (i, x) in basis.iter().enumerate() {
                expect(t(&t(&t(x))) == *x, || format!("theta^3 on basis {i}"))?;
                for (j, y) in basis.iter().enumerate() {
                    expect(t(&x.commutator(y)) == t(x).commutator(&t(y)), || format!("bracket {i},{j}"))?;
                }
            }
            Ok(())
        }),
        ("der C has dimension 14 and is fixed by theta", || {
            let tri = d4::Triality::standard();
            let der = d4::derivations();
            expect(der.len() == 14, || format!("dim {}", der.len()))?;
            expect(der.iter().all(|d| tri.theta(d).as_ref() == Some(d)), || "a derivation moves".into())
        }),
        ("precomputed and direct triality lifts agree", || {
            let tri = d4::Triality::standard();
            for (i, x) in d4::so_basis().into_iter().enumerate().step_by(7) {
                let d = d4::SOElement::new(x).map_err(|e| e.to_string())?;
                let a = tri.lift(&d).map_err(|e| e.to_string())?;
                let b = tri.lift_direct(&d).map_err(|e| e.to_string())?;
                expect(a == b && tri.satisfies(&a), || format!("basis {i}"))?;
            }
            Ok(())
        }),
        ("|W| = 192, |Aut Phi| = 1152, no order 9, 3 order-3 classes", || {
            let w = d4::weyl_group().len();
            let g = d4::autphi_group();
            let classes = d4::order3_classes(&g).len();
            let nine = g.iter().filter(|x| x.order() == 9).count();
            expect((w, g.len(), nine, classes) == (192, 1152, 0, 3), || format!("{w} {} {nine} {classes}", g.len()))
        }),
        ("Phi has a unique partition into three blocks", || expect(d4::phi_partition_check(), || "not unique".into())),
        ("triality gradings (26,1), (14,7), (24,2)", || {
            let gs = d4::build_triality_gradings().map_err(|e| e.to_string())?;
            let types: Vec<Vec<usize>> = gs.iter().map(|g| g.type_of()).collect();
            expect(types == [vec![26, 1], vec![14, 7], vec![24, 2]], || format!("{types:?}"))?;
            expect(gs.iter().all(|g| verify_lie(g).is_empty()), || "verify_lie".into())
        }),
    ]
}

fn selftest() -> Result<(), Failure> {
    let mut failed = Vec::new();
    for (name, check) in selftest_checks() {
        match check() {
            Ok(()) => println!("ok\t{name}"),
            Err(w) => {
                println!("FAIL\t{name}: {w}");
                failed.push(format!("{name}: {w}"));
            }
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(failed.join("\n")))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Enumerate { target, out, emit_bases } => enumerate(target, out, emit_bases.as_deref()),
        Command::Construct { target, index, out, emit_bases } => construct(target, *index, out, emit_bases.as_deref()),
        Command::Verify { target, out } => verify(target, out),
        Command::D4Table { out, workers } => d4_table(out, *workers),
        Command::Selftest => selftest(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(m)) => {
            eprintln!("verification failed:\n{m}");
            ExitCode::from(1)
        }
    }
}
