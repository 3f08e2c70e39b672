//! Batch front end: parses parameter-face descriptions, dispatches to the
//! library, and emits deterministic JSON or TSV reports.
//!
//! Exit codes: 0 success, 2 input error, 3 unsupported parameter regime,
//! 4 exhausted window or depth budget (and other computation failures).

use std::collections::hash_map::DefaultHasher;
use std::fs;
use std::hash::{Hash, Hasher};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use kacwreath_core::arrangement::{
    is_aspherical_predicted, rectangle_witness, singular_hyperplanes, subalgebra, Hyperplane,
    KClass, LinearInK, ParameterFace,
};
use kacwreath_core::exactmat::{IntMatrix, Rat};
use kacwreath_core::mckay::{fundamental_group, GammaDescriptor, GammaKind};
use kacwreath_core::partitions::PartitionCounter;
use kacwreath_core::predictions::{
    count_findim_opt, diophantine_count, exact_k_denominator, filtration_lattices_n1,
    gram_report, levelrank_irrational, levelrank_rational, predicted_gr2_opt, predicted_gr_opt,
    EngineOptions, GradedPrediction, Provenance,
};
use kacwreath_core::weights::RootSystem;
use kacwreath_core::{BigUint, Error};

#[derive(Parser)]
#[command(name = "kacwreath", version, about = "Exact reports for wreath-product parameter faces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Singular hyperplanes through a face, with asphericity annotations
    Hyperplanes(FaceArgs),
    /// Graded predictions, finite-dimensional counts, and cross-checks
    Predict(FaceArgs),
    /// Gram calculus for a decomposition matrix
    Gram(GramArgs),
    /// Invariant factors of the rank-one filtration lattices
    Snf(SnfArgs),
    /// Affine Dynkin data attached to a group
    DumpDynkin(DynkinArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Args)]
struct FaceArgs {
    /// Path to a face description in JSON
    #[arg(long, conflicts_with = "inline")]
    face: Option<PathBuf>,
    /// Inline face description in JSON
    #[arg(long)]
    inline: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Delta-depth override for the weight window and affine engines
    #[arg(long)]
    depth: Option<u64>,
    /// Root-norm bound override for the weight window
    #[arg(long)]
    beta_bound: Option<i64>,
    /// Directory for cached reports (purely an optimization)
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct GramArgs {
    /// Build the upper-triangular all-ones decomposition matrix of this size
    #[arg(long, conflicts_with_all = ["face", "inline"])]
    ell: Option<u32>,
    /// Path to JSON {"rows": [[..]], "findim": [..], "q_path": int?}
    #[arg(long, conflicts_with = "inline")]
    face: Option<PathBuf>,
    /// The same JSON inline
    #[arg(long)]
    inline: Option<String>,
    /// Indices of finite-dimensional simples (with --ell), e.g. "0,1"
    #[arg(long)]
    findim: Option<String>,
    /// Attach the q-Cartan determinant of a path with this many vertices
    #[arg(long)]
    q_path: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct SnfArgs {
    /// Order of the cyclic group
    #[arg(long)]
    ell: u32,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct DynkinArgs {
    /// Group label: trivial, cyclic(l), binary_dihedral(d),
    /// binary_tetrahedral, binary_octahedral, binary_icosahedral
    #[arg(long)]
    group: String,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

/// A failure carrying its process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::UnsupportedRegime(_) => 3,
            Error::InvalidFace(_)
            | Error::InvalidWeight(_)
            | Error::UnsupportedGroup(_)
            | Error::TrivialGroup
            | Error::DimensionMismatch(_)
            | Error::RankDeficient(_)
            | Error::NotSymmetric => 2,
            _ => 4,
        };
        Failure { code, message: e.to_string() }
    }
}

fn main() -> std::process::ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => std::process::ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            std::process::ExitCode::from(f.code)
        }
    }
}

/// A finished report: the JSON value plus a lossy tabular projection.
struct Report {
    json: Value,
    tsv: Vec<Vec<String>>,
}

impl Report {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("serializable");
                s.push('\n');
                s
            }
            Format::Tsv => {
                let mut s = String::new();
                for row in &self.tsv {
                    s.push_str(&row.join("\t"));
                    s.push('\n');
                }
                s
            }
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    let (report, format, cache) = match command {
        Command::Hyperplanes(args) => {
            let face = load_face(&args)?;
            let key = cache_key("hyperplanes", &face_json(&face), &args);
            (cmd_hyperplanes(&face)?, args.format, args.cache.map(|d| (d, key)))
        }
        Command::Predict(args) => {
            let face = load_face(&args)?;
            let key = cache_key("predict", &face_json(&face), &args);
            let opts = EngineOptions {
                delta_depth: args.depth,
                beta_norm_bound: args.beta_bound,
                affine_depth: args.depth,
            };
            (cmd_predict(&face, &opts)?, args.format, args.cache.map(|d| (d, key)))
        }
        Command::Gram(args) => (cmd_gram(&args)?, args.format, None),
        Command::Snf(args) => (cmd_snf(args.ell)?, args.format, None),
        Command::DumpDynkin(args) => (cmd_dump_dynkin(&args.group)?, args.format, None),
    };
    let ext = match format {
        Format::Json => "json",
        Format::Tsv => "tsv",
    };
    if let Some((dir, key)) = cache {
        let path = dir.join(format!("{key}.{ext}"));
        if let Ok(cached) = fs::read_to_string(&path) {
            print!("{cached}");
            return Ok(());
        }
        let out = report.render(format);
        fs::create_dir_all(&dir)
            .and_then(|_| fs::write(&path, &out))
            .map_err(|e| Failure { code: 2, message: format!("cache write failed: {e}") })?;
        print!("{out}");
        return Ok(());
    }
    print!("{}", report.render(format));
    Ok(())
}

fn cache_key(cmd: &str, input: &Value, args: &FaceArgs) -> String {
    let mut h = DefaultHasher::new();
    cmd.hash(&mut h);
    input.to_string().hash(&mut h);
    args.depth.hash(&mut h);
    args.beta_bound.hash(&mut h);
    format!("{cmd}-{:016x}", h.finish())
}

// ---- face input ----

fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_rat(s: &str, field: &str) -> Result<Rat, Failure> {
    s.trim()
        .parse::<Rat>()
        .map_err(|_| Failure::input(format!("field {field}: expected a rational \"p/q\", got {s:?}")))
}

fn parse_group(s: &str) -> Result<GammaDescriptor, Failure> {
    let fixed = match s {
        "trivial" => Some(GammaDescriptor::trivial()),
        "binary_tetrahedral" => Some(GammaDescriptor::binary_tetrahedral()),
        "binary_octahedral" => Some(GammaDescriptor::binary_octahedral()),
        "binary_icosahedral" => Some(GammaDescriptor::binary_icosahedral()),
        _ => None,
    };
    if let Some(g) = fixed {
        return Ok(g);
    }
    let parametric = |name: &str| -> Option<Result<u32, Failure>> {
        let rest = s.strip_prefix(name)?.strip_prefix('(')?.strip_suffix(')')?;
        Some(rest.parse::<u32>().map_err(|_| {
            Failure::input(format!("field group: bad parameter in {s:?}"))
        }))
    };
    if let Some(l) = parametric("cyclic") {
        return GammaDescriptor::cyclic(l?).map_err(Failure::from);
    }
    if let Some(d) = parametric("binary_dihedral") {
        return GammaDescriptor::binary_dihedral(d?).map_err(Failure::from);
    }
    Err(Failure::input(format!(
        "field group: unknown group {s:?} (expected trivial, cyclic(l), \
         binary_dihedral(d), binary_tetrahedral, binary_octahedral, binary_icosahedral)"
    )))
}

fn parse_face(v: &Value) -> Result<ParameterFace, Failure> {
    let obj = v
        .as_object()
        .ok_or_else(|| Failure::input("face must be a JSON object"))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "group" | "n" | "k" | "lambda") {
            return Err(Failure::input(format!("field {key}: unknown field")));
        }
    }
    let group = parse_group(
        obj.get("group")
            .and_then(Value::as_str)
            .ok_or_else(|| Failure::input("field group: required string"))?,
    )?;
    let n = obj
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| Failure::input("field n: required nonnegative integer"))?;
    let k = match obj.get("k") {
        Some(Value::String(s)) if s == "irrational" => KClass::Irrational,
        Some(Value::Object(m)) => {
            if m.len() != 1 {
                return Err(Failure::input("field k: expected {\"rational\": \"p/q\"}"));
            }
            let s = m
                .get("rational")
                .and_then(Value::as_str)
                .ok_or_else(|| Failure::input("field k: expected {\"rational\": \"p/q\"}"))?;
            KClass::Exact(parse_rat(s, "k")?)
        }
        _ => {
            return Err(Failure::input(
                "field k: required, either \"irrational\" or {\"rational\": \"p/q\"}",
            ))
        }
    };
    match obj.get("lambda") {
        None => Ok(ParameterFace::standard(group, n, k)),
        Some(Value::Array(entries)) => {
            let mut lambda = Vec::with_capacity(entries.len());
            for (i, e) in entries.iter().enumerate() {
                let pair = e
                    .as_array()
                    .filter(|p| p.len() == 2)
                    .ok_or_else(|| {
                        Failure::input(format!("field lambda[{i}]: expected [\"u\", \"v\"]"))
                    })?;
                let u = pair[0]
                    .as_str()
                    .ok_or_else(|| Failure::input(format!("field lambda[{i}][0]: expected string")))?;
                let v = pair[1]
                    .as_str()
                    .ok_or_else(|| Failure::input(format!("field lambda[{i}][1]: expected string")))?;
                lambda.push(LinearInK::new(
                    parse_rat(u, &format!("lambda[{i}][0]"))?,
                    parse_rat(v, &format!("lambda[{i}][1]"))?,
                ));
            }
            ParameterFace::new(group, n, k, lambda).map_err(Failure::from)
        }
        Some(_) => Err(Failure::input("field lambda: expected an array of [\"u\", \"v\"] pairs")),
    }
}

fn load_face(args: &FaceArgs) -> Result<ParameterFace, Failure> {
    let text = match (&args.face, &args.inline) {
        (Some(path), None) => fs::read_to_string(path)
            .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?,
        (None, Some(inline)) => inline.clone(),
        _ => return Err(Failure::input("provide exactly one of --face FILE or --inline JSON")),
    };
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| Failure::input(format!("malformed JSON: {e}")))?;
    parse_face(&value)
}

fn face_json(face: &ParameterFace) -> Value {
    let k = match &face.k {
        KClass::Irrational => json!("irrational"),
        KClass::Exact(v) => json!({ "rational": fmt_rat(v) }),
    };
    let lambda: Vec<Value> = face
        .lambda
        .iter()
        .map(|l| json!([fmt_rat(&l.constant), fmt_rat(&l.slope)]))
        .collect();
    json!({
        "group": face.group.label(),
        "n": face.n,
        "k": k,
        "lambda": lambda,
    })
}

// ---- hyperplanes ----

fn plane_json(h: &Hyperplane) -> Value {
    match h {
        Hyperplane::Boson { m, shift } => json!({
            "kind": "boson",
            "m": m.to_string(),
            "shift": shift.to_string(),
        }),
        Hyperplane::Root { alpha, m, shift } => json!({
            "kind": "root",
            "alpha": alpha.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "m": m.to_string(),
            "shift": shift.to_string(),
        }),
    }
}

fn plane_tsv(h: &Hyperplane) -> Vec<String> {
    match h {
        Hyperplane::Boson { m, shift } => {
            vec!["boson".into(), String::new(), m.to_string(), shift.to_string()]
        }
        Hyperplane::Root { alpha, m, shift } => {
            let a: Vec<String> = alpha.iter().map(|c| c.to_string()).collect();
            vec!["root".into(), a.join(","), m.to_string(), shift.to_string()]
        }
    }
}

fn cmd_hyperplanes(face: &ParameterFace) -> Result<Report, Failure> {
    let planes = singular_hyperplanes(face)?;
    let (aspherical, witnesses) = is_aspherical_predicted(face)?;
    let verdict = if aspherical {
        "aspherical (predicted)"
    } else if planes.is_empty() {
        "simple (predicted)"
    } else {
        "singular, spherical (predicted)"
    };
    let witness_json: Vec<Value> = witnesses
        .iter()
        .map(|w| {
            let rect = match w {
                Hyperplane::Root { m, shift, .. } => rectangle_witness(*m, *shift, face.n)
                    .map(|(a, b)| json!([a.to_string(), b.to_string()])),
                Hyperplane::Boson { .. } => None,
            };
            json!({ "plane": plane_json(w), "rectangle": rect })
        })
        .collect();
    let mut tsv = vec![vec!["verdict".to_string(), verdict.to_string()]];
    for p in &planes {
        let mut row = vec!["plane".to_string()];
        row.extend(plane_tsv(p));
        tsv.push(row);
    }
    for w in &witnesses {
        let mut row = vec!["witness".to_string()];
        row.extend(plane_tsv(w));
        tsv.push(row);
    }
    Ok(Report {
        json: json!({
            "face": face_json(face),
            "hyperplanes": planes.iter().map(plane_json).collect::<Vec<_>>(),
            "aspherical": aspherical,
            "witnesses": witness_json,
            "verdict": verdict,
        }),
        tsv,
    })
}

// ---- predict ----

fn provenance_label(p: Provenance) -> &'static str {
    match p {
        Provenance::Branching => "branching",
        Provenance::ClosedForm => "closed-form",
        Provenance::LevelRank => "level-rank",
        Provenance::Diophantine => "diophantine",
    }
}

fn gr_rows(p: &GradedPrediction) -> Vec<Value> {
    p.by_index
        .iter()
        .map(|(i, v)| json!({ "i": i.to_string(), "value": v.to_string() }))
        .collect()
}

fn gr2_rows(pair: &std::collections::BTreeMap<(u64, u64), BigUint>) -> Vec<Value> {
    pair.iter()
        .map(|(&(i, j), v)| {
            json!({ "i": i.to_string(), "j": j.to_string(), "value": v.to_string() })
        })
        .collect()
}

struct CrossCheck {
    name: &'static str,
    value: String,
    agree: bool,
}

fn cmd_predict(face: &ParameterFace, opts: &EngineOptions) -> Result<Report, Failure> {
    let a = subalgebra(face)?;
    let rank = RootSystem::new(&face.group).rank();
    let mut pc = PartitionCounter::new();

    let prediction = match predicted_gr_opt(face, opts) {
        Ok(p) => p,
        Err(Error::UnsupportedRegime(_)) => {
            // the level-rank count may still apply to the finite-dimensional
            // stratum; count_findim_opt reports unsupported otherwise
            let findim = count_findim_opt(face, opts)?;
            let tsv = vec![
                vec!["regime".to_string(), "level-rank".to_string()],
                vec!["findim".to_string(), findim.to_string()],
            ];
            return Ok(Report {
                json: json!({
                    "face": face_json(face),
                    "regime": "level-rank",
                    "findim": findim.to_string(),
                }),
                tsv,
            });
        }
        Err(e) => return Err(e.into()),
    };

    let findim = prediction.by_index.get(&0).cloned().unwrap_or_default();
    let mut checks: Vec<CrossCheck> = Vec::new();

    let expected_total = pc.multipartition_count(rank as u32 + 1, face.n);
    checks.push(CrossCheck {
        name: "total-mass",
        agree: prediction.total() == expected_total,
        value: expected_total.to_string(),
    });

    // integer k leaves the full affine algebra singular: gr has a product form
    let full_affine = a.components.len() == 1
        && a.components[0].affine
        && a.components[0].rank == rank
        && a.heisenberg_period.is_none();
    let integer_k = matches!(&face.k, KClass::Exact(v) if v.is_integer());
    if integer_k && full_affine {
        let mut agree = true;
        let mut rendered = Vec::new();
        for i in 0..=face.n {
            let v = pc.p_colored(rank as u32, face.n - i) * pc.p_colored(1, i);
            if prediction.by_index.get(&i).cloned().unwrap_or_default() != v {
                agree = false;
            }
            if v != BigUint::default() {
                rendered.push(format!("{i}:{v}"));
            }
        }
        checks.push(CrossCheck { name: "closed-form", agree, value: rendered.join(";") });
    }

    // orthogonal rank-one components: the quadratic-equation count
    if a.components.iter().all(|c| !c.affine && c.rank == 1) {
        let m_vec: Vec<i64> = a.components.iter().map(|c| c.simples[0].m).collect();
        let dio = diophantine_count(&m_vec, face.n);
        checks.push(CrossCheck {
            name: "diophantine",
            agree: dio == findim,
            value: dio.to_string(),
        });
    }

    if let GammaKind::Cyclic(ell) = face.group.kind {
        if face.finite_lambda_vanishes() {
            match &face.k {
                KClass::Irrational => {
                    let lr = levelrank_irrational(ell, face.n)?;
                    checks.push(CrossCheck {
                        name: "level-rank",
                        agree: lr == findim,
                        value: lr.to_string(),
                    });
                }
                KClass::Exact(_) => {
                    if let Some(m) = exact_k_denominator(face) {
                        let budget = opts.affine_depth.unwrap_or(face.n + 2);
                        let lr = levelrank_rational(ell, m, face.n, budget)?;
                        checks.push(CrossCheck {
                            name: "level-rank",
                            agree: lr == findim,
                            value: lr.to_string(),
                        });
                    }
                }
            }
        }
    }

    let gr2 = if exact_k_denominator(face).is_some() {
        let alt = predicted_gr2_opt(face, opts)?;
        if alt.provenance != prediction.provenance {
            let agree = alt.by_pair == prediction.by_pair;
            let rendered: Vec<String> = alt
                .by_pair
                .iter()
                .flatten()
                .map(|(&(i, j), v)| format!("{i},{j}:{v}"))
                .collect();
            checks.push(CrossCheck {
                name: "closed-form-gr2",
                agree,
                value: rendered.join(";"),
            });
        }
        alt.by_pair
    } else {
        prediction.by_pair.clone()
    };

    let checks_json: Vec<Value> = checks
        .iter()
        .map(|c| json!({ "name": c.name, "value": c.value, "agree": c.agree }))
        .collect();

    let mut tsv = vec![
        vec!["regime".to_string(), provenance_label(prediction.provenance).to_string()],
        vec!["findim".to_string(), findim.to_string()],
        vec!["total".to_string(), prediction.total().to_string()],
    ];
    for (i, v) in &prediction.by_index {
        tsv.push(vec!["gr".to_string(), i.to_string(), v.to_string()]);
    }
    if let Some(pair) = &gr2 {
        for (&(i, j), v) in pair {
            tsv.push(vec!["gr2".to_string(), i.to_string(), j.to_string(), v.to_string()]);
        }
    }
    for c in &checks {
        tsv.push(vec![
            "check".to_string(),
            c.name.to_string(),
            c.value.clone(),
            c.agree.to_string(),
        ]);
    }

    Ok(Report {
        json: json!({
            "face": face_json(face),
            "regime": provenance_label(prediction.provenance),
            "gr": gr_rows(&prediction),
            "gr2": gr2.as_ref().map(|p| gr2_rows(p)),
            "findim": findim.to_string(),
            "total": prediction.total().to_string(),
            "cross_checks": checks_json,
        }),
        tsv,
    })
}

// ---- gram ----

fn int_matrix_json(m: &IntMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect())
        .collect()
}

fn parse_usize_list(s: &str) -> Result<Vec<usize>, Failure> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| Failure::input(format!("bad index list entry {p:?}")))
        })
        .collect()
}

fn path_adjacency(vertices: usize) -> Result<IntMatrix, Failure> {
    if vertices == 0 {
        return Err(Failure::input("q_path needs at least one vertex"));
    }
    let rows: Vec<Vec<i64>> = (0..vertices)
        .map(|i| (0..vertices).map(|j| i64::from(i.abs_diff(j) == 1)).collect())
        .collect();
    IntMatrix::from_i64_rows(&rows).map_err(Failure::from)
}

fn cmd_gram(args: &GramArgs) -> Result<Report, Failure> {
    let (n_mat, findim, q_path) = if let Some(ell) = args.ell {
        if ell == 0 {
            return Err(Failure::input("--ell must be positive"));
        }
        let rows: Vec<Vec<i64>> = (0..ell as usize)
            .map(|i| (0..ell as usize).map(|j| i64::from(j >= i)).collect())
            .collect();
        let findim = match &args.findim {
            Some(s) => parse_usize_list(s)?,
            None => (0..ell as usize).collect(),
        };
        (IntMatrix::from_i64_rows(&rows)?, findim, args.q_path)
    } else {
        let text = match (&args.face, &args.inline) {
            (Some(path), None) => fs::read_to_string(path)
                .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?,
            (None, Some(inline)) => inline.clone(),
            _ => {
                return Err(Failure::input(
                    "provide --ell L, or exactly one of --face FILE / --inline JSON",
                ))
            }
        };
        let v: Value = serde_json::from_str(&text)
            .map_err(|e| Failure::input(format!("malformed JSON: {e}")))?;
        let obj = v
            .as_object()
            .ok_or_else(|| Failure::input("gram input must be a JSON object"))?;
        for key in obj.keys() {
            if !matches!(key.as_str(), "rows" | "findim" | "q_path") {
                return Err(Failure::input(format!("field {key}: unknown field")));
            }
        }
        let rows: Vec<Vec<i64>> = obj
            .get("rows")
            .and_then(Value::as_array)
            .ok_or_else(|| Failure::input("field rows: required array of integer rows"))?
            .iter()
            .map(|r| {
                r.as_array()
                    .map(|vals| vals.iter().filter_map(Value::as_i64).collect::<Vec<_>>())
                    .filter(|row| r.as_array().map(|a| a.len()) == Some(row.len()))
                    .ok_or_else(|| Failure::input("field rows: entries must be integers"))
            })
            .collect::<Result<_, _>>()?;
        let findim = match obj.get("findim") {
            None => Vec::new(),
            Some(Value::Array(idx)) => idx
                .iter()
                .map(|v| {
                    v.as_u64()
                        .map(|u| u as usize)
                        .ok_or_else(|| Failure::input("field findim: entries must be indices"))
                })
                .collect::<Result<_, _>>()?,
            Some(_) => return Err(Failure::input("field findim: expected an array")),
        };
        let q_path = match obj.get("q_path") {
            None => None,
            Some(v) => Some(
                v.as_u64()
                    .map(|u| u as usize)
                    .ok_or_else(|| Failure::input("field q_path: expected an integer"))?,
            ),
        };
        (IntMatrix::from_i64_rows(&rows)?, findim, q_path)
    };

    let q_adj = match q_path {
        None => None,
        Some(p) => Some(path_adjacency(p)?),
    };
    let report = gram_report(&n_mat, &findim, q_adj.as_ref())?;

    let c_inv: Vec<Vec<String>> = (0..report.c_inverse.rows())
        .map(|i| {
            (0..report.c_inverse.cols()).map(|j| fmt_rat(report.c_inverse.get(i, j))).collect()
        })
        .collect();
    let block: Vec<Vec<String>> = (0..report.findim_block.rows())
        .map(|i| {
            (0..report.findim_block.cols()).map(|j| fmt_rat(report.findim_block.get(i, j))).collect()
        })
        .collect();
    let q_det = report.q_det.as_ref().map(|p| {
        p.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>()
    });
    let q_factors = report.q_cyclotomic_factors.as_ref().map(|fs| {
        fs.iter()
            .map(|&(d, mult)| json!({ "d": d.to_string(), "mult": mult.to_string() }))
            .collect::<Vec<_>>()
    });
    let q_rem = report.q_remainder.as_ref().map(|p| {
        p.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>()
    });

    let mut tsv = Vec::new();
    for row in int_matrix_json(&report.c) {
        let mut line = vec!["c".to_string()];
        line.push(row.join(","));
        tsv.push(line);
    }
    for row in &c_inv {
        tsv.push(vec!["c_inverse".to_string(), row.join(",")]);
    }
    tsv.push(vec!["positive_definite".to_string(), report.positive_definite.to_string()]);
    if let Some(det) = &q_det {
        tsv.push(vec!["q_det".to_string(), det.join(",")]);
    }

    Ok(Report {
        json: json!({
            "c": int_matrix_json(&report.c),
            "c_inverse": c_inv,
            "findim_block": block,
            "positive_definite": report.positive_definite,
            "q_det": q_det,
            "q_cyclotomic_factors": q_factors,
            "q_remainder": q_rem,
            "nondegenerate_off_unity": report.nondegenerate_off_unity,
        }),
        tsv,
    })
}

// ---- snf ----

fn cmd_snf(ell: u32) -> Result<Report, Failure> {
    let (cyclic, truncated) = filtration_lattices_n1(ell)?;
    let center: Vec<String> = fundamental_group(&GammaDescriptor::cyclic(ell)?)
        .iter()
        .map(|f| f.to_string())
        .collect();
    let quot = |q: &kacwreath_core::predictions::LatticeQuotient| {
        json!({
            "invariant_factors": q.invariant_factors.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            "free_rank": q.free_rank.to_string(),
        })
    };
    let tsv = vec![
        vec![
            "cyclic_convention".to_string(),
            cyclic.invariant_factors.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(","),
            cyclic.free_rank.to_string(),
        ],
        vec![
            "truncated_convention".to_string(),
            truncated.invariant_factors.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(","),
            truncated.free_rank.to_string(),
        ],
        vec!["center".to_string(), center.join(",")],
    ];
    Ok(Report {
        json: json!({
            "cyclic_convention": quot(&cyclic),
            "truncated_convention": quot(&truncated),
            "center_invariant_factors": center,
        }),
        tsv,
    })
}

// ---- dump-dynkin ----

fn cmd_dump_dynkin(group: &str) -> Result<Report, Failure> {
    let g = parse_group(group)?;
    let diagram = g.affine_diagram();
    let marks: Vec<String> = diagram.marks.iter().map(|m| m.to_string()).collect();
    let fund: Vec<String> = fundamental_group(&g).iter().map(|f| f.to_string()).collect();
    let finite = diagram.finite_cartan();
    let mut tsv = vec![
        vec!["label".to_string(), diagram.label.clone()],
        vec!["group".to_string(), g.label()],
        vec!["order".to_string(), g.order().to_string()],
        vec!["marks".to_string(), marks.join(",")],
        vec!["fundamental_group".to_string(), fund.join(",")],
    ];
    for row in int_matrix_json(&diagram.cartan) {
        tsv.push(vec!["cartan".to_string(), row.join(",")]);
    }
    Ok(Report {
        json: json!({
            "group": g.label(),
            "order": g.order().to_string(),
            "label": diagram.label,
            "vertex_count": diagram.vertex_count().to_string(),
            "marks": marks,
            "adjacency": int_matrix_json(&diagram.adjacency),
            "cartan": int_matrix_json(&diagram.cartan),
            "finite_cartan": int_matrix_json(&finite),
            "fundamental_group": fund,
        }),
        tsv,
    })
}
