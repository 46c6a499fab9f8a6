//! Command-line front end. Partition arguments are comma lists; pairs are
//! given as `<d'> <d>`, base point first and ambient partition second.

use std::fmt::Write as _;
use std::io::{Read, Write};

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use slodowy::chambers::{
    enumerate_chambers, flop_graph, format_character, locate, slice_chambers, CharacterPoint,
    Location,
};
use slodowy::liealg::{
    ad_matrix, jordan_nilpotent, sl2_completion, slice_sample_dim, slodowy_slice_basis,
    transversality_check,
};
use slodowy::linalg::Matrix;
use slodowy::partitions::{dominates, BOX};
use slodowy::quiverlab::{
    all_a_surjective, from_flag, is_one_stable, moment_map, nilpotent_partition, random_flag_point,
    random_unstable_tilde, reflect, reflect_inverse, sample_on_fiber, theta, QuiverRep,
};
use slodowy::slices::{
    biguint_json, count_slice_resolutions, decompose, dimension_vectors, make_slice_pair,
    slice_dim, tilde_vectors, Method, SlicePair,
};
use slodowy::verify::{format_table, run_all, VerifyConfig};
use slodowy::{Error, Partition};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser, Debug)]
#[command(
    name = "slodowy",
    version,
    about = "Crepant resolutions of Slodowy slices in sl_N"
)]
pub struct Cli {
    /// Output format; each verb has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Draw diagrams with '#' instead of a block glyph.
    #[arg(long, global = true)]
    ascii: bool,
    #[command(subcommand)]
    command: Verb,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Young,
    Quiver,
    Both,
}

#[derive(Subcommand, Debug)]
pub enum Verb {
    /// Dual (transposed) partition and both diagrams.
    Dual { d: Partition },
    /// Whether O_{d'} lies in the closure of O_d.
    Leq { dp: Partition, d: Partition },
    /// dim O_d for one partition; slice dimension and a sampled estimate for a pair.
    Dim {
        #[arg(num_args = 1..=2, required = true)]
        partitions: Vec<Partition>,
        #[arg(long, default_value_t = 4)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Number of crepant resolutions of the orbit closure.
    Count { d: Partition },
    /// Product decomposition of the slice S_{d',d}.
    Decompose {
        dp: Partition,
        d: Partition,
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
    },
    /// Number of crepant resolutions of the slice S_{d',d}.
    CountSlice { dp: Partition, d: Partition },
    /// Weyl chambers of d, or the product chamber structure of a slice.
    Chambers {
        #[arg(num_args = 1..=2, required = true)]
        partitions: Vec<Partition>,
        /// Character (comma list of rationals) to locate among the chambers.
        #[arg(long)]
        at: Option<CharacterPoint>,
        /// Shorthand for `--format dot`.
        #[arg(long)]
        dot: bool,
    },
    /// Flop graph of the resolutions of the orbit closure.
    Flops { d: Partition },
    /// A random representation on the zero fiber: tilde shape for one
    /// partition, slice shape for a pair.
    QuiverSample {
        #[arg(num_args = 1..=2, required = true)]
        partitions: Vec<Partition>,
        /// Flag type for the tilde shape; defaults to the dual partition.
        #[arg(long, value_delimiter = ',')]
        flag_type: Option<Vec<usize>>,
        /// Produce an unstable tilde representation instead.
        #[arg(long)]
        unstable: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Checks a representation given as JSON (file or stdin).
    QuiverCheck {
        /// Path to the JSON file; stdin when omitted or "-".
        file: Option<String>,
        /// Also reflect at this vertex.
        #[arg(long)]
        reflect: Option<usize>,
        /// Use the inverse (cokernel) reflection.
        #[arg(long, requires = "reflect")]
        inverse: bool,
    },
    /// The sl_2-triple through the Jordan matrix of d and its slice.
    Sl2 { d: Partition },
    /// Runs every property suite and prints a pass/fail table.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
}

/// Verb name to the library operations it reaches.
pub const DISPATCH: &[(&str, &[&str])] = &[
    ("dual", &["parse", "dual", "render"]),
    ("leq", &["parse", "dominates"]),
    (
        "dim",
        &[
            "orbit_dim",
            "make_slice_pair",
            "slice_dim",
            "slice_sample_dim",
        ],
    ),
    ("count", &["count_resolutions"]),
    (
        "decompose",
        &[
            "make_slice_pair",
            "dimension_vectors",
            "decompose_young",
            "decompose_quiver",
        ],
    ),
    ("count-slice", &["count_slice_resolutions"]),
    (
        "chambers",
        &["enumerate_chambers", "locate", "slice_chambers"],
    ),
    ("flops", &["flop_graph"]),
    (
        "quiver-sample",
        &[
            "tilde_vectors",
            "dimension_vectors",
            "from_flag",
            "moment_map",
        ],
    ),
    (
        "quiver-check",
        &[
            "moment_map",
            "is_one_stable",
            "all_A_surjective",
            "theta",
            "nilpotent_partition",
            "reflect",
        ],
    ),
    (
        "sl2",
        &[
            "jordan_nilpotent",
            "sl2_completion",
            "slodowy_slice_basis",
            "transversality_check",
        ],
    ),
    ("verify", &["run"]),
];

/// Every library operation exposed through the command line.
pub const OPERATIONS: &[&str] = &[
    "dual",
    "dominates",
    "orbit_dim",
    "count_resolutions",
    "render",
    "parse",
    "make_slice_pair",
    "dimension_vectors",
    "tilde_vectors",
    "decompose_quiver",
    "decompose_young",
    "count_slice_resolutions",
    "slice_dim",
    "enumerate_chambers",
    "locate",
    "flop_graph",
    "slice_chambers",
    "moment_map",
    "is_one_stable",
    "all_A_surjective",
    "theta",
    "from_flag",
    "nilpotent_partition",
    "reflect",
    "jordan_nilpotent",
    "sl2_completion",
    "slodowy_slice_basis",
    "transversality_check",
    "slice_sample_dim",
    "run",
];

pub fn command() -> clap::Command {
    Cli::command()
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_internal() {
            Failure::Internal(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

/// Parses `args` (including the program name), runs the verb and returns
/// the exit status: 0 on success, 1 on input errors, 2 on internal
/// inconsistencies or failed verification.
pub fn run<I, S>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let (result, code_on_success) = match dispatch(&cli, stdin) {
        Ok((text, code)) => (Ok(text), code),
        Err(f) => (Err(f), 0),
    };
    match result {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            code_on_success
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "{msg}");
            1
        }
        Err(Failure::Internal(msg)) => {
            let _ = writeln!(err, "{msg}");
            2
        }
    }
}

fn unsupported(verb: &str, format: Format) -> Failure {
    Failure::Input(format!(
        "UsageError: --format {} is not available for {verb}",
        format_name(format)
    ))
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Text => "text",
        Format::Json => "json",
        Format::Dot => "dot",
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn line(s: impl std::fmt::Display) -> String {
    format!("{s}\n")
}

fn pair(dp: &Partition, d: &Partition) -> std::result::Result<SlicePair, Failure> {
    Ok(make_slice_pair(dp, d)?)
}

fn tuple(v: &[usize]) -> String {
    let inner: Vec<String> = v.iter().map(usize::to_string).collect();
    format!("({})", inner.join(","))
}

fn dispatch(cli: &Cli, stdin: &mut dyn Read) -> std::result::Result<(String, i32), Failure> {
    let glyph = if cli.ascii { '#' } else { BOX };
    let fmt = |default: Format, allowed: &[Format], verb: &str| {
        let f = cli.format.unwrap_or(default);
        if allowed.contains(&f) {
            Ok(f)
        } else {
            Err(unsupported(verb, f))
        }
    };
    use Format::{Dot, Json, Text};
    let text = match &cli.command {
        Verb::Dual { d } => {
            let a = d.dual();
            match fmt(Text, &[Text, Json], "dual")? {
                Json => pretty(&json!({ "d": d, "dual": a })),
                _ => format!(
                    "dual: {a}\nd:\n{}\ndual(d):\n{}\n",
                    d.render_with(glyph),
                    a.render_with(glyph)
                ),
            }
        }
        Verb::Leq { dp, d } => {
            let leq = dominates(dp, d)?;
            match fmt(Text, &[Text, Json], "leq")? {
                Json => pretty(&json!({ "dp": dp, "d": d, "leq": leq })),
                _ => line(leq),
            }
        }
        Verb::Dim {
            partitions,
            trials,
            seed,
        } => {
            let f = fmt(Text, &[Text, Json], "dim")?;
            if let [d] = partitions.as_slice() {
                match f {
                    Json => pretty(&json!({ "d": d, "orbit_dim": d.orbit_dim() })),
                    _ => line(d.orbit_dim()),
                }
            } else {
                let sp = pair(&partitions[0], &partitions[1])?;
                let exact = slice_dim(&sp);
                let sampled = slice_sample_dim(&sp, *trials, *seed);
                match f {
                    Json => pretty(&json!({
                        "d": sp.d(),
                        "dp": sp.dp(),
                        "slice_dim": exact,
                        "sampled_dim": sampled.as_ref().ok(),
                        "sampling": match &sampled {
                            Ok(_) => Value::Null,
                            Err(e) => json!(e.to_string()),
                        },
                        "trials": trials,
                        "seed": seed,
                    })),
                    _ => {
                        let est = match &sampled {
                            Ok(k) => k.to_string(),
                            Err(e) => format!("unavailable ({e})"),
                        };
                        format!("slice_dim: {exact}\nsampled_dim: {est}\n")
                    }
                }
            }
        }
        Verb::Count { d } => {
            let c = d.count_resolutions();
            match fmt(Text, &[Text, Json], "count")? {
                Json => pretty(&json!({ "d": d, "count": biguint_json(&c) })),
                _ => line(c),
            }
        }
        Verb::Decompose { dp, d, method } => {
            let sp = pair(dp, d)?;
            let method = match method {
                MethodArg::Young => Method::Young,
                MethodArg::Quiver => Method::Quiver,
                MethodArg::Both => Method::Both,
            };
            let dec = decompose(&sp, method)?;
            match fmt(Json, &[Text, Json], "decompose")? {
                Json => pretty(&dec.to_json()),
                _ => {
                    let mut s = format!("N = {}, m = {}\n", sp.size(), sp.m());
                    if let Ok(dims) = dimension_vectors(&sp) {
                        let _ = writeln!(s, "v = {}\nw = {}", tuple(&dims.v), tuple(&dims.w));
                    }
                    for (k, f) in dec.factors.iter().enumerate() {
                        let _ = writeln!(
                            s,
                            "factor {}: d = {}  d' = {}  N = {}  count = {}",
                            k + 1,
                            f.d,
                            f.dp,
                            f.n,
                            f.count()
                        );
                        let _ = writeln!(s, "{}\n", f.d.render_with(glyph));
                    }
                    let _ = writeln!(
                        s,
                        "total_count: {}\nslice_dim: {}",
                        dec.total_count, dec.slice_dim
                    );
                    s
                }
            }
        }
        Verb::CountSlice { dp, d } => {
            let sp = pair(dp, d)?;
            let c = count_slice_resolutions(&sp)?;
            match fmt(Text, &[Text, Json], "count-slice")? {
                Json => pretty(&json!({ "d": d, "dp": dp, "count": biguint_json(&c) })),
                _ => line(c),
            }
        }
        Verb::Chambers {
            partitions,
            at,
            dot,
        } => match partitions.as_slice() {
            [d] => {
                let f = if *dot {
                    Dot
                } else {
                    fmt(Text, &[Text, Json, Dot], "chambers")?
                };
                if f == Dot {
                    if at.is_some() {
                        return Err(Failure::Input("UsageError: --at has no DOT output".into()));
                    }
                    flop_graph(d)?.to_dot()
                } else if let Some(chi) = at {
                    let loc = locate(chi, d)?;
                    match (f, loc) {
                        (Json, Location::Chamber(c)) => pretty(&json!({
                            "character": format_character(chi),
                            "chamber": c.to_json(),
                        })),
                        (Json, Location::Wall) => pretty(&json!({
                            "character": format_character(chi),
                            "chamber": Value::Null,
                        })),
                        (_, Location::Chamber(c)) => format!(
                            "chamber perm {} flag_type {}\n",
                            tuple(&c.perm),
                            tuple(&c.flag_type)
                        ),
                        (_, Location::Wall) => line("wall"),
                    }
                } else {
                    let cs = enumerate_chambers(d)?;
                    match f {
                        Json => pretty(&Value::Array(cs.iter().map(|c| c.to_json()).collect())),
                        _ => cs
                            .iter()
                            .map(|c| {
                                format!(
                                    "perm {} flag_type {}\n",
                                    tuple(&c.perm),
                                    tuple(&c.flag_type)
                                )
                            })
                            .collect(),
                    }
                }
            }
            [dp, d] => {
                if at.is_some() {
                    return Err(Failure::Input(
                        "UsageError: --at takes a single ambient partition".into(),
                    ));
                }
                let sc = slice_chambers(&pair(dp, d)?)?;
                let f = if *dot {
                    Dot
                } else {
                    fmt(Text, &[Text, Json, Dot], "chambers")?
                };
                match f {
                    Json => pretty(&sc.to_json()),
                    Dot => sc.to_dot(),
                    _ => {
                        let mut s = String::new();
                        for (k, (f, g)) in sc.factors.iter().zip(&sc.factor_graphs).enumerate() {
                            let _ = writeln!(
                                s,
                                "factor d = {}  d' = {}: {} chambers, {} resolutions, {} flops",
                                f.d,
                                f.dp,
                                sc.chamber_count(k),
                                g.nodes.len(),
                                g.edges.len()
                            );
                        }
                        let _ = writeln!(
                            s,
                            "resolutions: {}\nflops: {}",
                            sc.nodes.len(),
                            sc.edges.len()
                        );
                        s
                    }
                }
            }
            _ => unreachable!("clap limits the argument count"),
        },
        Verb::Flops { d } => {
            let g = flop_graph(d)?;
            match fmt(Dot, &[Text, Json, Dot], "flops")? {
                Json => pretty(&g.to_json()),
                Text => {
                    let mut s =
                        format!("resolutions: {}\nflops: {}\n", g.nodes.len(), g.edges.len());
                    for &(u, v) in &g.edges {
                        let _ = writeln!(s, "{} -- {}", tuple(&g.nodes[u]), tuple(&g.nodes[v]));
                    }
                    s
                }
                Dot => g.to_dot(),
            }
        }
        Verb::QuiverSample {
            partitions,
            flag_type,
            unstable,
            seed,
        } => {
            fmt(Json, &[Json], "quiver-sample")?;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let rep = match partitions.as_slice() {
                [d] => {
                    let dims = tilde_vectors(d)?;
                    let ft = match flag_type {
                        Some(ft) => {
                            let mut sorted = ft.clone();
                            sorted.sort_unstable_by(|a, b| b.cmp(a));
                            if sorted != d.dual().parts() {
                                return Err(Failure::Input(format!(
                                    "ShapeError: flag type {} is not a rearrangement of the columns {} of {d}",
                                    tuple(ft),
                                    d.dual()
                                )));
                            }
                            ft.clone()
                        }
                        None => d.dual().parts().to_vec(),
                    };
                    if *unstable {
                        random_unstable_tilde(&ft, &mut rng)
                    } else {
                        let fp = random_flag_point(&ft, &mut rng);
                        let flag: Vec<Matrix> = (1..fp.steps()).map(|i| fp.subspace(i)).collect();
                        let rep = from_flag(fp.x(), &flag)?;
                        if flag_type.is_none() && rep.dims() != &dims {
                            return Err(Failure::Internal(
                                "InternalInconsistency: sampled dimensions differ from the tilde vectors".into(),
                            ));
                        }
                        rep
                    }
                }
                [dp, d] => {
                    if flag_type.is_some() || *unstable {
                        return Err(Failure::Input(
                            "UsageError: --flag-type and --unstable take a single partition".into(),
                        ));
                    }
                    let dims = dimension_vectors(&pair(dp, d)?)?;
                    sample_on_fiber(&dims, &mut rng)?
                }
                _ => unreachable!("clap limits the argument count"),
            };
            if moment_map(&rep).iter().any(|m| !m.is_zero()) {
                return Err(Failure::Internal(
                    "InternalInconsistency: sample is off the zero fiber".into(),
                ));
            }
            pretty(&serde_json::to_value(&rep).expect("representations serialize"))
        }
        Verb::QuiverCheck {
            file,
            reflect: vertex,
            inverse,
        } => {
            let f = fmt(Json, &[Text, Json], "quiver-check")?;
            let mut raw = String::new();
            match file.as_deref() {
                None | Some("-") => stdin
                    .read_to_string(&mut raw)
                    .map_err(|e| Failure::Input(format!("ParseError: cannot read stdin: {e}")))?,
                Some(path) => {
                    raw = std::fs::read_to_string(path).map_err(|e| {
                        Failure::Input(format!("ParseError: cannot read {path}: {e}"))
                    })?;
                    raw.len()
                }
            };
            let rep: QuiverRep = serde_json::from_str(&raw)
                .map_err(|e| Failure::Input(format!("ParseError: {e}")))?;
            let report = check_report(&rep, *vertex, *inverse)?;
            match f {
                Json => pretty(&report),
                _ => text_report(&report),
            }
        }
        Verb::Sl2 { d } => {
            let t = sl2_completion(d)?;
            debug_assert_eq!(t.x, jordan_nilpotent(d));
            let basis = slodowy_slice_basis(&t);
            let transversal = transversality_check(&t, d);
            let image = ad_matrix(&t.x).rank();
            match fmt(Text, &[Text, Json], "sl2")? {
                Json => pretty(&json!({
                    "d": d,
                    "x": t.x,
                    "y": t.y,
                    "h": t.h,
                    "triple": t.check(),
                    "slice_dim": basis.len(),
                    "orbit_dim": image,
                    "transversal": transversal,
                })),
                _ => format!(
                    "x =\n{}y =\n{}h =\n{}triple relations: {}\ndim Ker(ad y) in sl_N: {}\ndim Im(ad x): {}\ntransversal: {}\n",
                    t.x,
                    t.y,
                    t.h,
                    t.check(),
                    basis.len(),
                    image,
                    transversal
                ),
            }
        }
        Verb::Verify { seed, trials } => {
            fmt(Text, &[Text], "verify")?;
            let reports = run_all(VerifyConfig {
                seed: *seed,
                trials: *trials,
            });
            let ok = reports.iter().all(|r| r.passed());
            let mut s = format_table(&reports);
            let _ = writeln!(
                s,
                "{}",
                if ok {
                    "all suites pass"
                } else {
                    "some suites fail"
                }
            );
            return Ok((s, if ok { 0 } else { 2 }));
        }
    };
    Ok((text, 0))
}

fn check_report(
    rep: &QuiverRep,
    vertex: Option<usize>,
    inverse: bool,
) -> std::result::Result<Value, Failure> {
    let mu = moment_map(rep);
    let off = mu.iter().position(|m| !m.is_zero());
    let mut report = json!({
        "v": rep.v(),
        "w": rep.w(),
        "on_fiber": off.is_none(),
        "moment_map": mu,
    });
    if off.is_none() {
        report["stable"] = json!(is_one_stable(rep)?);
    }
    if rep.is_tilde() {
        report["all_A_surjective"] = json!(all_a_surjective(rep)?);
        match theta(rep) {
            Ok(fp) => {
                let jordan = nilpotent_partition(fp.x())?;
                report["theta"] = json!({
                    "x": fp.x(),
                    "flag_type": fp.flag_type(),
                    "jordan_type": jordan,
                });
            }
            Err(e) if e.is_internal() => return Err(e.into()),
            Err(e) => report["theta"] = json!(e.to_string()),
        }
    }
    if let Some(i) = vertex {
        let r = if inverse {
            reflect_inverse(rep, i)?
        } else {
            reflect(rep, i)?
        };
        report["reflected"] = serde_json::to_value(&r).expect("representations serialize");
    }
    Ok(report)
}

fn text_report(report: &Value) -> String {
    let mut s = String::new();
    let list = |v: &Value| {
        v.as_array()
            .map(|a| {
                a.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .unwrap_or_default()
    };
    let _ = writeln!(
        s,
        "v = ({})\nw = ({})",
        list(&report["v"]),
        list(&report["w"])
    );
    let _ = writeln!(s, "on_fiber: {}", report["on_fiber"]);
    for key in ["stable", "all_A_surjective"] {
        if let Some(b) = report.get(key) {
            let _ = writeln!(s, "{key}: {b}");
        }
    }
    match report.get("theta") {
        Some(Value::String(e)) => {
            let _ = writeln!(s, "theta: {e}");
        }
        Some(t) => {
            let _ = writeln!(
                s,
                "theta: flag_type ({}), jordan_type {}",
                list(&t["flag_type"]),
                list(&t["jordan_type"])
            );
        }
        None => {}
    }
    if let Some(r) = report.get("reflected") {
        let _ = writeln!(s, "reflected: v = ({})", list(&r["v"]));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dispatch_covers_every_operation() {
        for op in OPERATIONS {
            assert!(
                DISPATCH.iter().any(|(_, ops)| ops.contains(op)),
                "{op} is not reachable from any verb"
            );
        }
        for (_, ops) in DISPATCH {
            for op in *ops {
                assert!(OPERATIONS.contains(op), "{op} is not a known operation");
            }
        }
    }

    #[test]
    fn dispatch_matches_subcommands() {
        let mut verbs: Vec<String> = command()
            .get_subcommands()
            .map(|c| c.get_name().to_string())
            .collect();
        let mut table: Vec<String> = DISPATCH.iter().map(|(v, _)| v.to_string()).collect();
        verbs.sort();
        table.sort();
        assert_eq!(verbs, table);
    }

    #[test]
    fn clap_definition_is_consistent() {
        command().debug_assert();
    }
}
