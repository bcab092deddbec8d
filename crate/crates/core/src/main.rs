//! Command-line interface: verification subcommands, single-value queries,
//! and torus listings, with JSON/TSV/text reports.
//!
//! Exit codes: 0 all-pass (for `counterexample`: mismatch found), 1 any
//! verification failure, 2 usage or configuration error, 3 budget exceeded.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dlchar::cyclo::CycloNumber;
use dlchar::dl::{twisted_dl_value_collapsed, twisted_dl_value_full, DlSpec, TwistedDlSpec};
use dlchar::error::Error;
use dlchar::groups::{GroupContext, Mat, DEFAULT_BUDGET};
use dlchar::report::{emit_report, report_to_json, CycloJson, ModulusJson, ReportFormat};
use dlchar::tori::{
    all_characters, centralizer_torus, compose_with_norm, is_epsilon_stable_torus, partitions,
    so2_torus, torus_from_partition, weyl_group, RationalTorus, TorusCharacter,
};
use dlchar::verify::{
    find_remark_counterexample, verify_lift_independence, verify_normalizer, verify_theorem,
    verify_vanishing, Mode, STildeSelection, ThetaSelection, VerifyConfig, VerifyReport,
};

#[derive(Parser)]
#[command(
    name = "dlchar",
    version,
    about = "Exact Deligne-Lusztig character values and twisted character identities on small finite reductive groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the twisted character identity on every admissible case
    VerifyTheorem(VerifyArgs),
    /// Check the normalizer characterization by double enumeration
    VerifyNormalizer(VerifyArgs),
    /// Check that both sides vanish for elements not twisted-conjugate into
    /// the big torus
    VerifyVanishing(VerifyArgs),
    /// Search for regular elements with singular norm where the identity
    /// fails (transpose-inverse mode)
    Counterexample(VerifyArgs),
    /// Evaluate an untwisted character value at a regular semisimple element
    DlValue(ValueArgs),
    /// Evaluate a twisted character value at an element with regular norm
    TwistedValue(ValueArgs),
    /// List the standard tori of the fixed subgroup for a configuration
    ListTori(ListArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Frobenius,
    TransposeInverse,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Tsv,
    Text,
}

impl From<FormatArg> for ReportFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => ReportFormat::Json,
            FormatArg::Tsv => ReportFormat::Tsv,
            FormatArg::Text => ReportFormat::Text,
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "frobenius")]
    mode: ModeArg,
    #[arg(long, default_value_t = 2)]
    n: u8,
    #[arg(long)]
    q: u64,
    #[arg(long, default_value_t = 2)]
    ell: u32,
    /// restrict to these torus partitions (repeatable, e.g. --partition 1,1)
    #[arg(long)]
    partition: Vec<String>,
    /// enumerate all characters (the default; kept for symmetry)
    #[arg(long)]
    all_theta: bool,
    /// sample this many characters per torus instead of enumerating all
    #[arg(long)]
    sample_theta: Option<u32>,
    /// skip the semidirect-product oracle cross-check
    #[arg(long)]
    no_oracle: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// randomized lift-choice trials per case (verify-theorem)
    #[arg(long, default_value_t = 1)]
    trials: u32,
    /// include wall-clock timings in the manifest (breaks byte-stability)
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct ValueArgs {
    #[arg(long, value_enum, default_value = "frobenius")]
    mode: ModeArg,
    #[arg(long, default_value_t = 2)]
    n: u8,
    #[arg(long)]
    q: u64,
    /// extension degree; defaults to 1 for dl-value and 2 for twisted-value
    #[arg(long)]
    ell: Option<u32>,
    /// torus partition for T, e.g. 1,1
    #[arg(long)]
    partition: Option<String>,
    /// character exponents against the torus generators, e.g. 1,0
    #[arg(long)]
    theta: Option<String>,
    /// evaluate every character of the torus
    #[arg(long)]
    all_theta: bool,
    /// the element, rows separated by ';', entries by ',', each entry a
    /// field code (base-p digits of the coefficient vector)
    #[arg(long)]
    element: String,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Args)]
struct ListArgs {
    #[arg(long, value_enum, default_value = "frobenius")]
    mode: ModeArg,
    #[arg(long, default_value_t = 2)]
    n: u8,
    #[arg(long)]
    q: u64,
    #[arg(long, default_value_t = 2)]
    ell: u32,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error[{}]: {}", error_code(&e), e);
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn error_code(e: &Error) -> &'static str {
    match e {
        Error::NonPrime(_) => "nonprime",
        Error::FieldBudget { .. } => "field-budget",
        Error::UnknownDegree(_) => "unknown-degree",
        Error::NoEmbeddingPath(_, _) => "no-embedding",
        Error::NoCompatibleModulus { .. } => "no-modulus",
        Error::ZeroDlog => "zero-dlog",
        Error::GroupBudget { .. } => "group-budget",
        Error::Singular => "singular",
        Error::NotRegularSemisimple => "not-regular",
        Error::OutsideGroup => "outside-group",
        Error::OutsideTorus => "outside-torus",
        Error::BadPartition(_) => "bad-partition",
        Error::MalformedTorusPair(_) => "malformed-torus-pair",
        Error::NotEpsilonInvariant => "not-epsilon-invariant",
        Error::BadTransposeInverseConfig => "bad-ti-config",
        Error::Config(_) => "config",
        Error::Internal(_) => "internal",
        Error::Io(_) => "io",
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::GroupBudget { .. } | Error::FieldBudget { .. } => 3,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::VerifyTheorem(args) => {
            let cfg = build_config(&args)?;
            let start = Instant::now();
            let report = verify_theorem(&cfg)?;
            let mut reports = vec![report];
            if cfg.trials > 1 {
                reports.push(verify_lift_independence(&cfg)?);
            }
            finish_verify(&reports, &cfg, &args, start)
        }
        Command::VerifyNormalizer(args) => {
            let cfg = build_config(&args)?;
            let start = Instant::now();
            let report = verify_normalizer(&cfg)?;
            finish_verify(&[report], &cfg, &args, start)
        }
        Command::VerifyVanishing(args) => {
            let cfg = build_config(&args)?;
            let start = Instant::now();
            let report = verify_vanishing(&cfg)?;
            finish_verify(&[report], &cfg, &args, start)
        }
        Command::Counterexample(args) => {
            let mut cfg = build_config(&args)?;
            if cfg.mode != Mode::TransposeInverse {
                cfg = VerifyConfig {
                    mode: Mode::TransposeInverse,
                    n: 2,
                    ell: 2,
                    ..cfg
                };
            }
            let start = Instant::now();
            let report = find_remark_counterexample(&cfg)?;
            finish_verify(&[report], &cfg, &args, start)
        }
        Command::DlValue(args) => run_dl_value(args),
        Command::TwistedValue(args) => run_twisted_value(args),
        Command::ListTori(args) => run_list_tori(args),
    }
}

fn build_config(args: &VerifyArgs) -> Result<VerifyConfig, Error> {
    let mut cfg = match args.mode {
        ModeArg::Frobenius => VerifyConfig::frobenius(args.n, args.q, args.ell),
        ModeArg::TransposeInverse => VerifyConfig::transpose_inverse(args.q),
    };
    if !args.partition.is_empty() {
        let parsed: Result<Vec<Vec<u32>>, Error> =
            args.partition.iter().map(|s| parse_partition(s)).collect();
        cfg.partitions = Some(parsed?);
    }
    if let Some(count) = args.sample_theta {
        cfg.theta_selection = ThetaSelection::Sample {
            count,
            seed: args.seed,
        };
    }
    cfg.s_selection = STildeSelection::AllAdmissible;
    cfg.budget = args.budget;
    cfg.trials = args.trials;
    cfg.seed = args.seed;
    cfg.check_full_oracle = !args.no_oracle;
    cfg.record_timings = args.timings;
    Ok(cfg)
}

fn tower_moduli(ctx: &GroupContext) -> Vec<ModulusJson> {
    ctx.tower
        .degrees()
        .iter()
        .map(|&d| ModulusJson {
            degree: d,
            coeffs: ctx.tower.modulus(d).unwrap_or_default(),
        })
        .collect()
}

fn finish_verify(
    reports: &[VerifyReport],
    cfg: &VerifyConfig,
    args: &VerifyArgs,
    start: Instant,
) -> Result<u8, Error> {
    let ctx = cfg.build_context()?;
    let timings = args.timings.then(|| {
        let mut m = BTreeMap::new();
        m.insert("total_micros".to_string(), start.elapsed().as_micros() as u64);
        m
    });
    let mut all_ok = true;
    let jsons: Vec<_> = reports
        .iter()
        .map(|report| {
            all_ok &= report.all_passed();
            report_to_json(
                report,
                cfg,
                ctx.tower.p(),
                ctx.ambient_degree,
                tower_moduli(&ctx),
                timings.clone(),
            )
        })
        .collect();
    let payload = match (args.format, jsons.len()) {
        // several reports in one JSON run are emitted as a single array so
        // the output stays one valid document
        (FormatArg::Json, 2..) => {
            let mut s =
                serde_json::to_string_pretty(&jsons).map_err(|e| Error::Io(e.to_string()))?;
            s.push('\n');
            s.into_bytes()
        }
        _ => {
            let mut bytes = Vec::new();
            for json in &jsons {
                bytes.extend_from_slice(&emit_report(json, args.format.into())?);
            }
            bytes
        }
    };
    write_out(&payload, args.out.as_deref())?;
    Ok(if all_ok { 0 } else { 1 })
}

fn write_out(bytes: &[u8], out: Option<&std::path::Path>) -> Result<(), Error> {
    match out {
        Some(path) => {
            std::fs::write(path, bytes)?;
            Ok(())
        }
        None => {
            std::io::stdout()
                .write_all(bytes)
                .map_err(|e| Error::Io(e.to_string()))?;
            Ok(())
        }
    }
}

fn parse_partition(s: &str) -> Result<Vec<u32>, Error> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<u32>()
                .map_err(|_| Error::Config(format!("bad partition component: {p}")))
        })
        .collect()
}

fn parse_exps(s: &str) -> Result<Vec<u64>, Error> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<u64>()
                .map_err(|_| Error::Config(format!("bad exponent: {p}")))
        })
        .collect()
}

fn parse_element(s: &str, n: u8, degree: u32, size: u64) -> Result<Mat, Error> {
    let mut entries = Vec::new();
    for row in s.split(';') {
        for entry in row.split(',') {
            let code = entry
                .trim()
                .parse::<u64>()
                .map_err(|_| Error::Config(format!("bad entry code: {entry}")))?;
            if code >= size {
                return Err(Error::Config(format!(
                    "entry code {code} exceeds the field size {size}"
                )));
            }
            entries.push(code);
        }
    }
    if entries.len() != (n as usize) * (n as usize) {
        return Err(Error::Config(format!(
            "element needs {} entries, got {}",
            (n as usize) * (n as usize),
            entries.len()
        )));
    }
    Ok(Mat::new(n, degree, entries))
}

fn resolve_torus(
    ctx: &std::sync::Arc<GroupContext>,
    mode: ModeArg,
    partition: Option<&str>,
) -> Result<std::sync::Arc<RationalTorus>, Error> {
    match mode {
        ModeArg::Frobenius => {
            let lambda = match partition {
                Some(s) => parse_partition(s)?,
                None => vec![1; ctx.n as usize],
            };
            torus_from_partition(ctx, &lambda)
        }
        ModeArg::TransposeInverse => so2_torus(ctx),
    }
}

fn selected_characters(
    torus: &std::sync::Arc<RationalTorus>,
    theta: Option<&str>,
    all_theta: bool,
) -> Result<Vec<TorusCharacter>, Error> {
    if all_theta {
        return Ok(all_characters(torus));
    }
    match theta {
        Some(s) => Ok(vec![TorusCharacter::new(torus.clone(), parse_exps(s)?)?]),
        None => Ok(vec![TorusCharacter::trivial(torus.clone())]),
    }
}

fn emit_values(
    values: Vec<(Vec<u64>, CycloNumber)>,
    format: FormatArg,
    out: Option<&std::path::Path>,
) -> Result<u8, Error> {
    let payload = match format {
        FormatArg::Text => {
            let mut s = String::new();
            for (exps, v) in &values {
                s.push_str(&format!(
                    "theta=({}) value={}\n",
                    exps.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(","),
                    v
                ));
            }
            s.into_bytes()
        }
        FormatArg::Json => {
            #[derive(serde::Serialize)]
            struct ValueJson {
                theta_exponents: Vec<u64>,
                value: CycloJson,
            }
            let list: Vec<ValueJson> = values
                .iter()
                .map(|(exps, v)| ValueJson {
                    theta_exponents: exps.clone(),
                    value: CycloJson::from_value(v),
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&list)
                .map_err(|e| Error::Io(e.to_string()))?;
            s.push('\n');
            s.into_bytes()
        }
        FormatArg::Tsv => {
            let mut s = String::from("theta\tconductor\tcoeffs\n");
            for (exps, v) in &values {
                let j = CycloJson::from_value(v);
                s.push_str(&format!(
                    "{}\t{}\t{}\n",
                    exps.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(","),
                    j.conductor,
                    j.coeffs
                        .iter()
                        .map(|(a, b)| format!("{a}/{b}"))
                        .collect::<Vec<_>>()
                        .join(",")
                ));
            }
            s.into_bytes()
        }
    };
    write_out(&payload, out)?;
    Ok(0)
}

fn run_dl_value(args: ValueArgs) -> Result<u8, Error> {
    let ell = args.ell.unwrap_or(1);
    let ctx = match args.mode {
        ModeArg::Frobenius => GroupContext::new_frobenius(args.n, args.q, ell, args.budget)?,
        ModeArg::TransposeInverse => GroupContext::new_transpose_inverse(args.q, args.budget)?,
    };
    let torus = resolve_torus(&ctx, args.mode, args.partition.as_deref())?;
    // the element lives in G(k): entry codes in the base field
    let base_size = ctx.tower.field_size(ctx.base_degree)?;
    let x = parse_element(&args.element, ctx.n, ctx.base_degree, base_size)?;
    let mut values = Vec::new();
    for theta in selected_characters(&torus, args.theta.as_deref(), args.all_theta)? {
        let spec = DlSpec::new(&ctx, theta.clone())?;
        let v = dlchar::dl::dl_value(&ctx, &spec, &x)?;
        values.push((theta.exps().to_vec(), v));
    }
    emit_values(values, args.format, args.out.as_deref())
}

fn run_twisted_value(args: ValueArgs) -> Result<u8, Error> {
    let ell = args.ell.unwrap_or(2);
    let ctx = match args.mode {
        ModeArg::Frobenius => GroupContext::new_frobenius(args.n, args.q, ell, args.budget)?,
        ModeArg::TransposeInverse => GroupContext::new_transpose_inverse(args.q, args.budget)?,
    };
    let torus = resolve_torus(&ctx, args.mode, args.partition.as_deref())?;
    let t_tilde = centralizer_torus(&ctx, &torus)?;
    let ambient_size = ctx.tower.field_size(ctx.ambient_degree)?;
    let x = parse_element(&args.element, ctx.n, ctx.ambient_degree, ambient_size)?;
    let mut values = Vec::new();
    for theta in selected_characters(&torus, args.theta.as_deref(), args.all_theta)? {
        let theta_tilde = compose_with_norm(&ctx, &theta, &t_tilde)?;
        let spec = TwistedDlSpec::new(&ctx, theta_tilde)?;
        let collapsed = twisted_dl_value_collapsed(&ctx, &spec, &x)?;
        let full = twisted_dl_value_full(&ctx, &spec, &x)?;
        if collapsed != full {
            return Err(Error::Internal(
                "semidirect and collapsed forms disagree".into(),
            ));
        }
        values.push((theta.exps().to_vec(), collapsed));
    }
    emit_values(values, args.format, args.out.as_deref())
}

fn run_list_tori(args: ListArgs) -> Result<u8, Error> {
    let ctx = match args.mode {
        ModeArg::Frobenius => GroupContext::new_frobenius(args.n, args.q, args.ell, args.budget)?,
        ModeArg::TransposeInverse => GroupContext::new_transpose_inverse(args.q, args.budget)?,
    };
    #[derive(serde::Serialize)]
    struct TorusJson {
        label: String,
        points: u64,
        cyclic_orders: Vec<u64>,
        conductor: u64,
        weyl_order: usize,
        centralizer_points: u64,
        centralizer_epsilon_stable: bool,
    }
    let tori: Vec<std::sync::Arc<RationalTorus>> = match args.mode {
        ModeArg::Frobenius => partitions(ctx.n as u32)
            .iter()
            .map(|l| torus_from_partition(&ctx, l))
            .collect::<Result<_, _>>()?,
        ModeArg::TransposeInverse => vec![so2_torus(&ctx)?],
    };
    let mut rows = Vec::new();
    for t in &tori {
        let tt = centralizer_torus(&ctx, t)?;
        let label = match t.partition() {
            Some(p) => format!(
                "[{}]",
                p.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
            ),
            None => "so2".into(),
        };
        rows.push(TorusJson {
            label,
            points: t.size(),
            cyclic_orders: t.orders().to_vec(),
            conductor: t.conductor(),
            weyl_order: weyl_group(&ctx, t, true)?.len(),
            centralizer_points: tt.size(),
            centralizer_epsilon_stable: is_epsilon_stable_torus(&ctx, &tt)?,
        });
    }
    let payload = match args.format {
        FormatArg::Json => {
            let mut s =
                serde_json::to_string_pretty(&rows).map_err(|e| Error::Io(e.to_string()))?;
            s.push('\n');
            s.into_bytes()
        }
        _ => {
            let mut s = String::from("torus\tpoints\torders\tconductor\tweyl\tT~points\tT~eps-stable\n");
            for r in &rows {
                s.push_str(&format!(
                    "{}\t{}\t{:?}\t{}\t{}\t{}\t{}\n",
                    r.label,
                    r.points,
                    r.cyclic_orders,
                    r.conductor,
                    r.weyl_order,
                    r.centralizer_points,
                    r.centralizer_epsilon_stable
                ));
            }
            s.into_bytes()
        }
    };
    write_out(&payload, args.out.as_deref())?;
    Ok(0)
}
