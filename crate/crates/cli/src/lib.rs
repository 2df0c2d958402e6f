//! Front end for the `frobtor` binary. Every subcommand produces a
//! [`Outcome`]: a text rendering, a JSON value carrying the same numbers,
//! and an exit code (0 ok, 1 input error, 2 inconsistent verdict).

pub mod search;

use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use frobenius::frobtor::{self, TorTable};
use frobenius::invariants::InvariantReport;
use frobenius::parse::{self, InputFile, ModuleSpec};
use frobenius::resolve::{self, ModulePresentation};
use frobenius::ring::{build_algebra, LocalAlgebra};
use frobenius::{corpus, Error};

/// Largest homological bound accepted on the command line.
pub const MAX_N: usize = 12;
/// Total matrix size above which a warning is printed.
pub const WARN_ENTRIES: usize = 10_000;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INCONSISTENT: i32 = 2;

/// JSON schema every `--format json` output validates against.
pub const SCHEMA: &str = include_str!("../schema/output.schema.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "frobtor", version, about = "Frobenius-twisted Tor over local F_p-algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ring invariants: condition (1), depth, c, socle, threshold.
    Check(Common),
    /// Lengths of Tor_j(M, ^{φ^r}R) for j = 0..N.
    Tor(Common),
    /// Tor table checked against the rigidity statements.
    Rigidity(Common),
    /// Ratios ℓ(Tor_j) / β_j.
    Ratio(Common),
    /// Tor computed from both sides.
    Balance(Common),
    /// Minimal free resolution of M.
    Resolve(Common),
    /// Randomized search for non-free modules with vanishing Tor.
    Search(SearchArgs),
}

/// Options shared by the single-ring subcommands.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Ring file path or bundled ring name (ex31, r1, ...).
    pub file: String,
    /// Declared module name, `k`, `free n` or `coker [[...]]`.
    #[arg(long, default_value = "k")]
    pub module: String,
    /// Frobenius exponents.
    #[arg(long = "r", value_delimiter = ',', default_value = "1")]
    pub r: Vec<u32>,
    /// Homological bound.
    #[arg(long = "N", default_value_t = 6)]
    pub n: usize,
    /// Degree cap override.
    #[arg(long)]
    pub cap: Option<u32>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    /// Optional fixed ring (path or bundled name); otherwise rings are drawn from --family.
    pub file: Option<String>,
    #[arg(long, value_enum, default_value = "artinian")]
    pub family: search::Family,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "r", value_delimiter = ',', default_value = "1,2")]
    pub r: Vec<u32>,
    #[arg(long = "N", default_value_t = 6)]
    pub n: usize,
    #[arg(long)]
    pub cap: Option<u32>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

/// The resolved settings of one run.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub input: String,
    pub command: String,
    pub r: Vec<u32>,
    pub n: usize,
    pub cap: Option<u32>,
    pub seed: Option<u64>,
    pub format: Format,
}

pub struct Outcome {
    pub text: String,
    pub json: Value,
    pub exit: i32,
    pub warnings: Vec<String>,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Self {
        Outcome { text, json, exit: EXIT_OK, warnings: Vec::new() }
    }

    /// What goes to stdout.
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Json => serde_json::to_string_pretty(&self.json).expect("serializable") + "\n",
        }
    }
}

/// A ring loaded from disk or the bundled corpus.
pub struct Ring {
    pub name: String,
    pub input: InputFile,
    pub alg: LocalAlgebra,
}

/// Reads `file` as a path if it exists, otherwise as a bundled ring name.
pub fn load_ring(file: &str, cap: Option<u32>) -> Result<Ring, Error> {
    let path = Path::new(file);
    let (name, text) = if path.exists() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::NotApplicable(format!("cannot read {file}: {e}")))?;
        let stem = path.file_stem().map_or(file.to_string(), |s| s.to_string_lossy().into_owned());
        (stem, text)
    } else {
        let e = corpus::entry(file)
            .ok_or_else(|| Error::NotApplicable(format!("`{file}` is neither a file nor a bundled ring")))?;
        (e.name.to_string(), e.source.to_string())
    };
    let mut input = parse::parse_input(&text)?;
    if let Some(c) = cap {
        input.ring = input.ring.with_cap(c);
    }
    let alg = build_algebra(&input.ring)?;
    Ok(Ring { name, input, alg })
}

/// Looks `module` up among the declared modules, then reads it inline.
pub fn load_module(ring: &Ring, module: &str) -> Result<ModulePresentation, Error> {
    let spec = match ring.input.module(module) {
        Some(s) => s.clone(),
        None if module == "k" => ModuleSpec::Residue,
        None if module == "R" => ModuleSpec::Free(1),
        None => parse::parse_module_spec(&ring.input.ring, module)?,
    };
    ModulePresentation::from_spec(&ring.alg, &spec)
}

fn check_n(n: usize) -> Result<(), Error> {
    if n > MAX_N {
        return Err(Error::NotApplicable(format!("N = {n} exceeds the ceiling {MAX_N}")));
    }
    Ok(())
}

fn header(command: &str, ring: &Ring, c: &Common) -> Value {
    json!({
        "command": command,
        "ring": ring.name,
        "presentation": ring.input.ring.to_string(),
        "cap": ring.alg.cap(),
        "module": c.module,
        "N": c.n,
    })
}

fn size_warning(betti: &[Option<usize>], dim: usize) -> Option<String> {
    let total: usize = betti.windows(2).map(|w| w[0].unwrap_or(0) * w[1].unwrap_or(0)).sum::<usize>() * dim;
    (total > WARN_ENTRIES).then(|| format!("warning: differentials expand to about {total} k-linear entries"))
}

/// Parses arguments and runs; errors become exit code 1.
pub fn run(cli: Cli) -> (Outcome, Format) {
    let format = match &cli.command {
        Command::Search(s) => s.format,
        Command::Check(c) | Command::Tor(c) | Command::Rigidity(c) | Command::Ratio(c) | Command::Balance(c) | Command::Resolve(c) => c.format,
    };
    let result = match cli.command {
        Command::Check(c) => cmd_check(&c),
        Command::Tor(c) => cmd_tor(&c),
        Command::Rigidity(c) => cmd_rigidity(&c),
        Command::Ratio(c) => cmd_ratio(&c),
        Command::Balance(c) => cmd_balance(&c),
        Command::Resolve(c) => cmd_resolve(&c),
        Command::Search(s) => search::cmd_search(&s),
    };
    let outcome = result.unwrap_or_else(|e| Outcome {
        text: format!("error: {e}\n"),
        json: json!({ "command": "error", "error": e.to_string() }),
        exit: EXIT_INPUT,
        warnings: Vec::new(),
    });
    (outcome, format)
}

pub fn render_invariants(inv: &InvariantReport) -> String {
    let opt = |v: Option<u32>| v.map_or("-".to_string(), |v| v.to_string());
    let mut out = format!("ring        {}\n", inv.ring);
    out += &format!("kind        {:?}{}\n", inv.kind, if inv.local_semantics_approximate { " (approximate local semantics)" } else { "" });
    out += &format!("length      {}\n", inv.length.map_or("infinite".into(), |l| l.to_string()));
    out += &format!("condition1  {}{}\n", inv.condition1, inv.note.as_ref().map_or(String::new(), |n| format!(" ({n})")));
    out += &format!("depth       {}{}\n", inv.depth, if inv.depth_at_cap { " (at cap)" } else { "" });
    if !inv.regular_sequence.is_empty() {
        out += &format!("regular seq {}\n", inv.regular_sequence.join(", "));
    }
    out += &format!("c           {}\n", opt(inv.c));
    out += &format!("c_y         {}\n", opt(inv.c_y));
    out += &format!("r_threshold {}\n", opt(inv.r_threshold));
    out += &format!("socle dim   {}\n", inv.socle_dim.map_or("-".into(), |s| s.to_string()));
    out += &format!("nilpotency  {}\n", opt(inv.nilpotency_index));
    out += &format!("m^p = 0     {}\n", inv.mp_zero);
    out
}

pub fn cmd_check(c: &Common) -> Result<Outcome, Error> {
    let ring = load_ring(&c.file, c.cap)?;
    let inv = InvariantReport::compute(&ring.alg)?;
    let mut j = header("check", &ring, c);
    j["report"] = serde_json::to_value(&inv).expect("serializable");
    Ok(Outcome::ok(render_invariants(&inv), j))
}

fn tables(c: &Common, ring: &Ring, m: &ModulePresentation) -> Result<Vec<TorTable>, Error> {
    c.r.iter().map(|&r| frobtor::tor_frobenius(&ring.alg, &c.module, m, r, c.n)).collect()
}

pub fn cmd_tor(c: &Common) -> Result<Outcome, Error> {
    check_n(c.n)?;
    let ring = load_ring(&c.file, c.cap)?;
    let m = load_module(&ring, &c.module)?;
    let tables = tables(c, &ring, &m)?;
    let mut out = Outcome::ok(tables.iter().map(|t| t.render()).collect::<Vec<_>>().join("\n"), Value::Null);
    if let Some(w) = tables.first().and_then(|t| size_warning(&t.betti(), ring.alg.dim())) {
        out.warnings.push(w);
    }
    let mut j = header("tor", &ring, c);
    j["tables"] = serde_json::to_value(&tables).expect("serializable");
    out.json = j;
    Ok(out)
}

pub fn cmd_rigidity(c: &Common) -> Result<Outcome, Error> {
    check_n(c.n)?;
    let ring = load_ring(&c.file, c.cap)?;
    let m = load_module(&ring, &c.module)?;
    let inv = InvariantReport::compute(&ring.alg)?;
    let mut reports = Vec::new();
    for &r in &c.r {
        reports.push(frobtor::rigidity_probe(&ring.alg, &inv, &c.module, &m, r, c.n)?);
    }
    let mut text = String::new();
    for rep in &reports {
        text += &format!("module {}  r = {}  free = {}\n", rep.module, rep.r, rep.is_free);
        text += &format!("lengths  {}\n", rep.lengths.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(","));
        for v in &rep.verdicts {
            let tag = if !v.applicable { "n/a" } else if v.consistent { "ok" } else { "FLAG" };
            text += &format!("  [{tag:>4}] {}: {}\n", v.rule, v.note);
        }
        text += &format!("consistent {}\n", rep.consistent);
    }
    let consistent = reports.iter().all(|r| r.consistent);
    let mut j = header("rigidity", &ring, c);
    j["reports"] = serde_json::to_value(&reports).expect("serializable");
    j["consistent"] = json!(consistent);
    let mut out = Outcome::ok(text, j);
    if !consistent {
        out.exit = EXIT_INCONSISTENT;
    }
    Ok(out)
}

pub fn cmd_ratio(c: &Common) -> Result<Outcome, Error> {
    check_n(c.n)?;
    let ring = load_ring(&c.file, c.cap)?;
    let m = load_module(&ring, &c.module)?;
    let mut reports = Vec::new();
    for &r in &c.r {
        reports.push(frobtor::ratio_report(&ring.alg, &c.module, &m, r, c.n)?);
    }
    let mut text = String::new();
    for rep in &reports {
        let ratios: Vec<String> = rep.ratios.iter().map(|q| q.clone().unwrap_or("-".into())).collect();
        text += &format!("module {}  r = {}  ratios {}\n", rep.module, rep.r, ratios.join(","));
        if let Some(v) = &rep.verdict {
            text += &format!("  {v}\n");
        }
    }
    let mut j = header("ratio", &ring, c);
    j["reports"] = serde_json::to_value(&reports).expect("serializable");
    let mut out = Outcome::ok(text, j);
    if reports.iter().any(|r| r.verdict.as_deref().is_some_and(|v| v.starts_with("NOT"))) {
        out.exit = EXIT_INCONSISTENT;
    }
    Ok(out)
}

pub fn cmd_balance(c: &Common) -> Result<Outcome, Error> {
    check_n(c.n)?;
    let ring = load_ring(&c.file, c.cap)?;
    let m = load_module(&ring, &c.module)?;
    let mut text = String::new();
    let mut all = Vec::new();
    let mut equal = true;
    for &r in &c.r {
        let rows = frobtor::tor_balance_oracle(&ring.alg, &m, r, c.n)?;
        text += &format!("module {}  r = {}\n{:>4}  {:>8}  {:>8}\n", c.module, r, "j", "tor", "oracle");
        for row in &rows {
            text += &format!("{:>4}  {:>8}  {:>8}{}\n", row.j, row.tor.to_string(), row.oracle, if row.equal { "" } else { "  MISMATCH" });
            equal &= row.equal;
        }
        all.push(json!({ "r": r, "rows": rows }));
    }
    let mut j = header("balance", &ring, c);
    j["balance"] = json!(all);
    j["equal"] = json!(equal);
    let mut out = Outcome::ok(text, j);
    if !equal {
        out.exit = EXIT_INCONSISTENT;
    }
    Ok(out)
}

pub fn cmd_resolve(c: &Common) -> Result<Outcome, Error> {
    check_n(c.n)?;
    let ring = load_ring(&c.file, c.cap)?;
    let m = load_module(&ring, &c.module)?;
    let res = resolve::minimal_free_resolution(&ring.alg, &m, c.n)?;
    let betti = res.ranks().to_vec();
    let mut text = format!("betti  {}\n", betti.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(","));
    let mut diffs = Vec::new();
    for (k, d) in res.differentials().iter().enumerate() {
        let f = d.format(&ring.alg);
        text += &format!("d_{}:\n{}\n", k + 1, f.trim_end());
        diffs.push(f.trim_end().to_string());
    }
    let mut j = header("resolve", &ring, c);
    j["betti"] = json!(betti);
    j["shifts"] = json!(res.shifts());
    j["differentials"] = json!(diffs);
    let mut out = Outcome::ok(text, j);
    let b: Vec<Option<usize>> = betti.iter().map(|&b| Some(b)).collect();
    if let Some(w) = size_warning(&b, ring.alg.dim()) {
        out.warnings.push(w);
    }
    Ok(out)
}
