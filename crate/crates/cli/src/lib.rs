// SPDX-License-Identifier: Apache-2.0
//! The `sslab` command line. `run` does all the work and returns the exit
//! code with the text to print, so tests can drive it without a process.
//!
//! Exit codes: 0 ok, 1 failed check or refused input, 2 unreadable input,
//! 3 instance too large for an exhaustive or dense run.

use std::fmt::Display;
use std::path::{Path, PathBuf};

use access::{symplectify, symplectify_structure, AccessStructure, Subset};
use classical_protocols::{css_audit, css_run, spir_audit, CssProtocol, ProtocolError, SpirProtocol};
use clap::{Parser, Subcommand, ValueEnum};
use constructions::{construct_cqmmsp, construct_eammsp, construct_qqmmsp, ConstructionError};
use field_tower::{Fe, Field};
use mmsp::{accepts_one, classify, fixtures, rate, rejects_one, BundleClass, MmspBundle, MmspError, RateKind};
use quantum_sim::{
    audit_qqss, audit_spir, audit_ss, backend_agreement_set, run_qqss, run_spir, run_ss, Backend, EaSim, QuantumError, Scheme,
    SpirScheme,
};
use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "sslab-report/1";
pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_TOO_LARGE: i32 = 3;

/// Set to any value to list every per-set check in text reports.
pub const VERBOSE_ENV: &str = "SSLAB_VERBOSE";

#[derive(Parser, Debug)]
#[command(name = "sslab", version, about = "Verification lab for linear secret sharing and SPIR over finite fields")]
pub struct Cli {
    /// Print the JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a bundle's class invariants and its accept/reject claims.
    Verify {
        bundle: PathBuf,
        /// access structure JSON overriding the one in the bundle
        #[arg(long)]
        structure: Option<PathBuf>,
    },
    /// Build a threshold MMSP and check it.
    Construct {
        class: ClassArg,
        r: usize,
        t: usize,
        n: usize,
        p: u32,
        /// number of entangled columns (ea only)
        #[arg(long)]
        y1: Option<usize>,
        /// write the bundle JSON here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One seeded protocol run; prints the transcript.
    Simulate {
        #[arg(long)]
        protocol: SimProtocol,
        #[arg(long)]
        bundle: PathBuf,
        /// comma-separated message symbols (packed field indices)
        #[arg(long)]
        message: Option<String>,
        /// comma-separated symbols of all files, file after file
        #[arg(long)]
        files: Option<String>,
        /// requested file, 1-based
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// comma-separated players holding the shares (qqss)
        #[arg(long)]
        subset: Option<String>,
        #[arg(long, value_enum, default_value_t = BackendArg::Dense)]
        backend: BackendArg,
        #[arg(long)]
        seed: u64,
    },
    /// Exhaustive security audit, compared with the MMSP verdict.
    Audit {
        protocol: AuditProtocol,
        bundle: PathBuf,
        /// number of files for the SPIR protocols
        #[arg(long, default_value_t = 2)]
        files: usize,
    },
    /// Closed-form rate of a threshold scheme.
    Rate { kind: String, r: usize, t: usize, n: usize },
    /// Dense against symplectic backend, and quantum against classical verdicts.
    Crosscheck { bundle: PathBuf },
    /// The worked examples as bundle JSON.
    Fixtures {
        /// directory to write one file per fixture
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ClassArg {
    Ea,
    Cq,
    Qq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SimProtocol {
    Css,
    Cqss,
    Qqss,
    Feass,
    Eass,
    Cqspir,
    Feaspir,
    Easpir,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AuditProtocol {
    Css,
    Cspir,
    Feass,
    Eass,
    Modified,
    Cqss,
    Qqss,
    Feaspir,
    Easpir,
    Cqspir,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Dense,
    Symplectic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
pub enum Fail {
    Parse(String),
    Failed(String),
    TooLarge(String),
}

impl Fail {
    fn code(&self) -> i32 {
        match self {
            Fail::Parse(_) => EXIT_PARSE,
            Fail::Failed(_) => EXIT_FAIL,
            Fail::TooLarge(_) => EXIT_TOO_LARGE,
        }
    }

    fn message(&self) -> &str {
        match self {
            Fail::Parse(m) | Fail::Failed(m) | Fail::TooLarge(m) => m,
        }
    }
}

fn failed(e: impl Display) -> Fail {
    Fail::Failed(e.to_string())
}

impl From<MmspError> for Fail {
    fn from(e: MmspError) -> Fail {
        match e {
            MmspError::Json(_) => Fail::Parse(e.to_string()),
            _ => failed(e),
        }
    }
}

impl From<ProtocolError> for Fail {
    fn from(e: ProtocolError) -> Fail {
        match e {
            ProtocolError::TooLarge(_) => Fail::TooLarge(e.to_string()),
            _ => failed(e),
        }
    }
}

impl From<QuantumError> for Fail {
    fn from(e: QuantumError) -> Fail {
        match e {
            QuantumError::TooLarge(_) | QuantumError::Protocol(ProtocolError::TooLarge(_)) => Fail::TooLarge(e.to_string()),
            _ => failed(e),
        }
    }
}

impl From<ConstructionError> for Fail {
    fn from(e: ConstructionError) -> Fail {
        failed(e)
    }
}

/// A report: named checks, extra JSON fields, and an overall verdict.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub ok: bool,
    pub checks: Vec<(String, bool, String)>,
    pub data: Map<String, Value>,
    pub notes: Vec<String>,
}

impl Report {
    fn new(command: &str) -> Report {
        Report { command: command.into(), ok: true, checks: Vec::new(), data: Map::new(), notes: Vec::new() }
    }

    fn check(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.ok &= ok;
        self.checks.push((name.into(), ok, detail.into()));
    }

    fn set(&mut self, key: &str, v: Value) {
        self.data.insert(key.into(), v);
    }

    fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("schema".into(), json!(SCHEMA));
        m.insert("command".into(), json!(self.command));
        m.insert("ok".into(), json!(self.ok));
        let checks: Vec<Value> = self.checks.iter().map(|(n, ok, d)| json!({ "name": n, "ok": ok, "detail": d })).collect();
        m.insert("checks".into(), Value::Array(checks));
        for (k, v) in &self.data {
            m.insert(k.clone(), v.clone());
        }
        Value::Object(m)
    }

    fn to_text(&self) -> String {
        let verbose = std::env::var_os(VERBOSE_ENV).is_some();
        let mut out = Vec::new();
        for (n, ok, d) in &self.checks {
            if verbose || !ok || self.checks.len() <= 12 {
                let tag = if *ok { "ok  " } else { "FAIL" };
                out.push(if d.is_empty() { format!("{tag} {n}") } else { format!("{tag} {n}: {d}") });
            }
        }
        out.extend(self.notes.iter().cloned());
        out.push(format!("{}: {}", self.command, if self.ok { "passed" } else { "failed" }));
        out.join("\n")
    }
}

pub fn run(cli: &Cli) -> Output {
    let name = command_name(&cli.command);
    let result = match &cli.command {
        Command::Verify { bundle, structure } => verify(bundle, structure.as_deref()),
        Command::Construct { class, r, t, n, p, y1, out } => construct(*class, *r, *t, *n, *p, *y1, out.as_deref()),
        Command::Simulate { protocol, bundle, message, files, k, subset, backend, seed } => {
            simulate(*protocol, bundle, message.as_deref(), files.as_deref(), *k, subset.as_deref(), *backend, *seed)
        }
        Command::Audit { protocol, bundle, files } => audit(*protocol, bundle, *files),
        Command::Rate { kind, r, t, n } => rate_cmd(kind, *r, *t, *n),
        Command::Crosscheck { bundle } => crosscheck(bundle),
        Command::Fixtures { out } => fixtures_cmd(out.as_deref()),
    };
    match result {
        Ok(rep) => {
            let code = if rep.ok { EXIT_OK } else { EXIT_FAIL };
            let stdout = if cli.json { serde_json::to_string_pretty(&rep.to_json()).expect("json") } else { rep.to_text() };
            Output { code, stdout, stderr: String::new() }
        }
        Err(e) => {
            let stdout = if cli.json {
                serde_json::to_string_pretty(&json!({ "schema": SCHEMA, "command": name, "ok": false, "error": e.message() }))
                    .expect("json")
            } else {
                String::new()
            };
            Output { code: e.code(), stdout, stderr: format!("error: {}", e.message()) }
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Verify { .. } => "verify",
        Command::Construct { .. } => "construct",
        Command::Simulate { .. } => "simulate",
        Command::Audit { .. } => "audit",
        Command::Rate { .. } => "rate",
        Command::Crosscheck { .. } => "crosscheck",
        Command::Fixtures { .. } => "fixtures",
    }
}

fn read(path: &Path) -> Result<String, Fail> {
    std::fs::read_to_string(path).map_err(|e| Fail::Parse(format!("{}: {e}", path.display())))
}

pub fn load_bundle(path: &Path) -> Result<MmspBundle, Fail> {
    MmspBundle::from_json_str(&read(path)?).map_err(|e| Fail::Parse(format!("{}: {e}", path.display())))
}

fn load_structure(path: &Path) -> Result<AccessStructure, Fail> {
    let v: Value = serde_json::from_str(&read(path)?).map_err(|e| Fail::Parse(format!("{}: {e}", path.display())))?;
    AccessStructure::from_json_value(&v).map_err(|e| Fail::Parse(format!("{}: {e}", path.display())))
}

fn parse_list(s: &str) -> Result<Vec<u128>, Fail> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<u128>().map_err(|e| Fail::Parse(format!("bad number {t:?}: {e}"))))
        .collect()
}

fn parse_symbols(f: &Field, s: &str) -> Result<Vec<Fe>, Fail> {
    parse_list(s)?.into_iter().map(|v| f.elem(v).map_err(|e| Fail::Parse(e.to_string()))).collect()
}

fn parse_subset(s: &str, n: usize) -> Result<Subset, Fail> {
    let players: Vec<usize> = parse_list(s)?.into_iter().map(|v| v as usize).collect();
    if let Some(&bad) = players.iter().find(|&&p| p == 0 || p > n) {
        return Err(Fail::Parse(format!("player {bad} outside 1..={n}")));
    }
    Ok(Subset::from_players(&players))
}

fn need<'a>(s: Option<&'a str>, what: &str) -> Result<&'a str, Fail> {
    s.ok_or_else(|| Fail::Parse(format!("{what} is required for this protocol")))
}

/// Structure on the rows of G and F: lifted unless the bundle is plain.
fn row_structure(b: &MmspBundle) -> Result<AccessStructure, Fail> {
    let fs = b.structure()?;
    Ok(if b.class == BundleClass::Plain { fs } else { symplectify_structure(&fs) })
}

fn verify(path: &Path, structure: Option<&Path>) -> Result<Report, Fail> {
    let mut b = load_bundle(path)?;
    if let Some(s) = structure {
        b = b.with_access(load_structure(s)?);
    }
    let mut rep = Report::new("verify");
    rep.set("class", json!(format!("{:?}", b.class).to_lowercase()));
    let verdict = match classify(&b) {
        Ok(v) => v,
        Err(MmspError::ClassInvariantViolated(msg)) => {
            rep.check("class invariants", false, msg);
            return Ok(rep);
        }
        Err(e) => return Err(e.into()),
    };
    rep.check("class invariants", true, "");
    let fs = b.structure()?;
    let (g, n) = (b.g(), fs.n);
    let lift = |s: Subset| if b.class == BundleClass::Plain { s } else { symplectify(s, n) };
    for a in fs.accept_checks() {
        rep.check(format!("accepts {a}"), accepts_one(&g, &b.f, lift(a))?, "");
    }
    for s in fs.reject_checks() {
        rep.check(format!("rejects {s}"), rejects_one(&g, &b.f, lift(s))?, "");
    }
    if let Some(c) = verdict.mmsp.counterexample {
        let set = match c {
            mmsp::Failure::NotAccepted(s) | mmsp::Failure::NotRejected(s) => s,
        };
        rep.set("counterexample", json!(set.players()));
        rep.notes.push(format!("counterexample {set}: {c}"));
    }
    rep.ok = verdict.ok();
    Ok(rep)
}

fn construct(class: ClassArg, r: usize, t: usize, n: usize, p: u32, y1: Option<usize>, out: Option<&Path>) -> Result<Report, Fail> {
    let c = match class {
        ClassArg::Ea => {
            let y1 = y1.ok_or_else(|| Fail::Parse("ea needs --y1".into()))?;
            construct_eammsp(r, t, n, y1, p)?
        }
        ClassArg::Cq => construct_cqmmsp(r, t, n, p)?,
        ClassArg::Qq => construct_qqmmsp(r, t, n, p)?,
    };
    let mut rep = Report::new("construct");
    for (name, ok) in &c.report.checks {
        rep.check(name.clone(), *ok, "");
    }
    let verdict = mmsp::classify_verdict(&c.bundle)?;
    rep.check("classify", verdict, "");
    rep.set("mode", json!(format!("{:?}", c.mode).to_lowercase()));
    rep.set("field", json!({ "p": c.bundle.f.field().p(), "r": c.bundle.f.field().r() }));
    let text = c.bundle.to_json_string();
    match out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| failed(format!("{}: {e}", path.display())))?;
            rep.notes.push(format!("bundle written to {}", path.display()));
        }
        None => rep.set("bundle", serde_json::from_str(&text).expect("bundle json")),
    }
    Ok(rep)
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    protocol: SimProtocol,
    path: &Path,
    message: Option<&str>,
    files: Option<&str>,
    k: usize,
    subset: Option<&str>,
    backend: BackendArg,
    seed: u64,
) -> Result<Report, Fail> {
    let b = load_bundle(path)?;
    let f = b.f.field().clone();
    let backend = match backend {
        BackendArg::Dense => Backend::Dense,
        BackendArg::Symplectic => Backend::Symplectic,
    };
    let mut rep = Report::new("simulate");
    let transcript = match protocol {
        SimProtocol::Css => {
            let p = CssProtocol::new(b.g(), b.f.clone(), row_structure(&b)?)?;
            css_run(&p, &parse_symbols(&f, need(message, "--message")?)?, seed)?
        }
        SimProtocol::Cqss | SimProtocol::Feass | SimProtocol::Eass => {
            let scheme = match protocol {
                SimProtocol::Cqss => Scheme::Cqss,
                SimProtocol::Feass => Scheme::Feass,
                _ => Scheme::Eass,
            };
            run_ss(&b, scheme, &parse_symbols(&f, need(message, "--message")?)?, seed, backend)?
        }
        SimProtocol::Qqss => {
            let a = parse_subset(need(subset, "--subset")?, b.n())?;
            let digits = parse_list(need(message, "--message")?)?;
            let q = f.q();
            let idx = digits.iter().try_fold(0u128, |acc, &d| if d < q { Ok(acc * q + d) } else { Err(Fail::Parse(format!("digit {d} >= {q}"))) })?;
            let dim = q.pow(b.x() as u32 / 2) as usize;
            if digits.len() != b.x() / 2 {
                return Err(Fail::Parse(format!("qqss input needs {} digits", b.x() / 2)));
            }
            let mut rho = nalgebra::DMatrix::from_element(dim, dim, quantum_sim::Cx::new(0.0, 0.0));
            rho[(idx as usize, idx as usize)] = quantum_sim::Cx::new(1.0, 0.0);
            let (t, out) = run_qqss(&b, &rho, a, seed)?;
            let fid = out[(idx as usize, idx as usize)].re;
            rep.set("recovered_fidelity", json!(fid));
            rep.notes.push(format!("fidelity of the recovered state with the input: {fid:.12}"));
            t
        }
        SimProtocol::Cqspir | SimProtocol::Feaspir | SimProtocol::Easpir => {
            let scheme = match protocol {
                SimProtocol::Cqspir => SpirScheme::Cqspir,
                SimProtocol::Feaspir => SpirScheme::Feaspir,
                _ => SpirScheme::Easpir,
            };
            run_spir(&b, scheme, &parse_symbols(&f, need(files, "--files")?)?, k, seed, backend)?
        }
    };
    for s in &transcript.steps {
        rep.notes.push(format!("{:?} {}: {:?}", s.role, s.label, s.values));
    }
    rep.set("transcript", serde_json::to_value(&transcript).expect("transcript json"));
    Ok(rep)
}

fn audit(protocol: AuditProtocol, path: &Path, files: usize) -> Result<Report, Fail> {
    let b = load_bundle(path)?;
    let mut rep = Report::new("audit");
    let value = match protocol {
        AuditProtocol::Css => {
            let r = css_audit(&CssProtocol::new(b.g(), b.f.clone(), row_structure(&b)?)?)?;
            rep.check("correctness", r.correctness, opt_set(&r.correctness_failure));
            rep.check("secrecy", r.secrecy, opt_set(&r.secrecy_failure));
            rep.set("mmsp", json!(r.mmsp));
            serde_json::to_value(&r)
        }
        AuditProtocol::Cspir => {
            let r = spir_audit(&SpirProtocol::standard(b.g(), b.f.clone(), files, row_structure(&b)?)?)?;
            rep.check("correctness", r.correctness, format!("{:?}", r.correctness_failure));
            rep.check("user secrecy", r.user_secrecy, opt_set(&r.user_secrecy_failure));
            rep.check("server secrecy", r.server_secrecy_structural && r.server_secrecy_empirical, "");
            serde_json::to_value(&r)
        }
        AuditProtocol::Feass | AuditProtocol::Eass | AuditProtocol::Modified | AuditProtocol::Cqss | AuditProtocol::Qqss => {
            let r = match protocol {
                AuditProtocol::Qqss => audit_qqss(&b)?,
                AuditProtocol::Feass => audit_ss(&b, Scheme::Feass)?,
                AuditProtocol::Modified => audit_ss(&b, Scheme::Modified)?,
                AuditProtocol::Cqss => audit_ss(&b, Scheme::Cqss)?,
                _ => audit_ss(&b, Scheme::Eass)?,
            };
            rep.check("correctness", r.correctness, format!("{} defect {:.3e}", opt_set(&r.correctness_failure), r.correctness_defect));
            rep.check("secrecy", r.secrecy, format!("{} defect {:.3e}", opt_set(&r.secrecy_failure), r.secrecy_defect));
            if protocol == AuditProtocol::Qqss {
                rep.check("F spans the logical operators", r.structural, "");
            }
            serde_json::to_value(&r)
        }
        AuditProtocol::Feaspir | AuditProtocol::Easpir | AuditProtocol::Cqspir => {
            let scheme = match protocol {
                AuditProtocol::Feaspir => SpirScheme::Feaspir,
                AuditProtocol::Cqspir => SpirScheme::Cqspir,
                _ => SpirScheme::Easpir,
            };
            let r = audit_spir(&b, scheme, files)?;
            rep.check("correctness", r.correctness, format!("{:?}", r.correctness_failure));
            rep.check("user secrecy", r.user_secrecy, opt_set(&r.user_secrecy_failure));
            rep.check("server secrecy", r.server_secrecy, format!("{:?}", r.server_secrecy_failure));
            if !r.uq_exhaustive {
                rep.notes.push("query randomness was sampled, not enumerated".into());
            }
            serde_json::to_value(&r)
        }
    };
    let value = value.expect("report json");
    let mmsp = value.get("mmsp").and_then(Value::as_bool).unwrap_or(false);
    rep.notes.push(format!("MMSP verdict: {mmsp}"));
    rep.set("report", value);
    Ok(rep)
}

fn opt_set(s: &Option<Vec<usize>>) -> String {
    match s {
        Some(p) => Subset::from_players(p).to_string(),
        None => String::new(),
    }
}

fn rate_cmd(kind: &str, r: usize, t: usize, n: usize) -> Result<Report, Fail> {
    let k: RateKind = kind.parse().map_err(|e: MmspError| Fail::Parse(e.to_string()))?;
    let v = rate(k, r, t, n)?;
    let mut rep = Report::new("rate");
    rep.set("rate", json!(v.to_string()));
    rep.notes.push(v.to_string());
    Ok(rep)
}

/// Backend agreement on every (m, u, set) and equal verdicts from the
/// quantum audit, the classical audit on the lifted structure, and classify.
fn crosscheck(path: &Path) -> Result<Report, Fail> {
    let b = load_bundle(path)?;
    let (sim_bundle, scheme) = match b.class {
        BundleClass::Ea => (b.clone(), Scheme::Eass),
        BundleClass::Cq => (b.clone(), Scheme::Cqss),
        BundleClass::Qq => (b.with_class(BundleClass::Ea), Scheme::Eass),
        BundleClass::Plain => return Err(failed("crosscheck needs an EA, CQ or QQ bundle")),
    };
    let mut rep = Report::new("crosscheck");
    let sim = EaSim::new(&sim_bundle, scheme)?;
    let f = b.f.field().clone();
    let fs = b.structure()?;
    let msgs = field_vectors(&f, b.x());
    let rands = field_vectors(&f, b.y2());
    let mut worst: f64 = 0.0;
    let mut cases = 0usize;
    for a in fs.accept_sets().into_iter().chain(fs.reject_sets()) {
        worst = worst.max(backend_agreement_set(&sim, a, &msgs, &rands)?);
        cases += msgs.len() * rands.len();
    }
    rep.check("dense = symplectic", worst <= 1e-12, format!("{cases} cases, largest gap {worst:.3e}"));
    let quantum = match b.class {
        BundleClass::Qq => audit_qqss(&b)?.secure,
        _ => audit_ss(&b, scheme)?.secure,
    };
    let classical = css_audit(&CssProtocol::new(b.g(), b.f.clone(), row_structure(&b)?)?)?.secure;
    let verdict = mmsp::classify_verdict(&b)?;
    rep.check("quantum audit = classify", quantum == verdict, format!("audit {quantum}, classify {verdict}"));
    if b.class != BundleClass::Qq {
        rep.check("classical audit = classify", classical == verdict, format!("audit {classical}, classify {verdict}"));
    }
    rep.set("largest_gap", json!(worst));
    Ok(rep)
}

fn field_vectors(f: &Field, len: usize) -> Vec<Vec<Fe>> {
    let q = f.q();
    (0..q.pow(len as u32))
        .map(|mut i| {
            (0..len)
                .map(|_| {
                    let d = i % q;
                    i /= q;
                    f.elem(d).expect("digit")
                })
                .collect()
        })
        .collect()
}

pub fn fixture_set() -> Vec<(&'static str, MmspBundle)> {
    vec![
        ("example1", fixtures::example1()),
        ("example1_qq", fixtures::example1_qq()),
        ("example2", fixtures::example2()),
        ("example2_amended", fixtures::example2_amended()),
        ("example3", fixtures::example3(3)),
    ]
}

fn fixtures_cmd(out: Option<&Path>) -> Result<Report, Fail> {
    let mut rep = Report::new("fixtures");
    let mut all = Map::new();
    for (name, b) in fixture_set() {
        let text = b.to_json_string();
        match out {
            Some(dir) => {
                std::fs::create_dir_all(dir).map_err(failed)?;
                let path = dir.join(format!("{name}.json"));
                std::fs::write(&path, &text).map_err(|e| failed(format!("{}: {e}", path.display())))?;
                rep.notes.push(path.display().to_string());
            }
            None => {
                all.insert(name.into(), serde_json::from_str(&text).expect("bundle json"));
            }
        }
    }
    if out.is_none() {
        rep.notes.push(serde_json::to_string_pretty(&Value::Object(all.clone())).expect("json"));
        rep.set("fixtures", Value::Object(all));
    }
    Ok(rep)
}

