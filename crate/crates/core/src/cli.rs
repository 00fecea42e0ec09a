// SPDX-License-Identifier: Apache-2.0

//! Command-line front end and the JSON-lines result cache.

use std::collections::{BTreeSet, HashMap};
use std::ffi::OsString;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::codes::{glue_code, kummer_check, lemma52_search};
use crate::k3::{
    self, emb_complex_witness, emb_supersingular, nk0, nk_direct, nk_with, residue_set, ss_reduction_possible,
    table1_fixture, table1_scan, K3Error, NkResult, NkWitness, SupersingularTarget,
};
use crate::lattice::GramLattice;
use crate::roots::{sigma_fqf, DynkinType, EnumBudget, OverlatticeEnumerator};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_OUT_OF_SCOPE: i32 = 3;
pub const EXIT_CHECK_FAILED: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Debug, Parser)]
#[command(name = "k3-rdp", version, about = "Rational double points on complex and supersingular K3 surfaces")]
pub struct Cli {
    /// JSON-lines file of `nk0` verdicts, read at start and appended to.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Worker threads for scans.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Wall-clock cap per Dynkin type.
    #[arg(long, global = true, default_value_t = 900)]
    pub budget_seconds: u64,
    /// Also decide `nk` by direct overlattice search and compare.
    #[arg(long, global = true)]
    pub verify_direct: bool,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// NK(0, R): a complex normal K3 surface with singularities R exists.
    Nk0 { r#type: String },
    /// NK(p, σ, R) for a supersingular K3 surface with Artin invariant σ.
    Nk { p: u64, sigma: u32, r#type: String },
    /// Primitive embedding of Σ⁻_R (or a Gram matrix) into Λ₀ or, with --p/--sigma, into Λ_{p,σ}.
    Emb {
        r#type: Option<String>,
        /// Whitespace-separated integer Gram matrix, one row per line.
        #[arg(long, conflicts_with = "type")]
        gram: Option<PathBuf>,
        #[arg(long, requires = "sigma")]
        p: Option<u64>,
        #[arg(long, requires = "p")]
        sigma: Option<u32>,
    },
    /// Residues of p mod 4|d_R| for which NK(p, σ, R) holds, when 2σ = 22 − rank R.
    Residues { r#type: String, sigma: u32 },
    /// Minimal types with NK(0, R) false up to the given rank.
    Scan { max_rank: u32 },
    /// Compare a full rank-19 scan with the shipped reference list.
    #[command(name = "table1_verify", alias = "table1-verify")]
    Table1Verify,
    /// Classify length-16 codes with nonzero weights in {8, 12, 16}.
    Lemma52,
    /// Check that every overlattice of Σ⁻_{16A1} with leng ≤ 6 glues the all-ones word.
    Kummer,
    /// Whether (−disc T / p) = −1.
    Ssred { disc_t: u64, p: u64 },
}

/// One cached `nk0` verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    #[serde(rename = "type")]
    pub ty: String,
    pub rank: u32,
    pub nk0: bool,
    pub witness: Option<NkWitness>,
    pub ms: u64,
    pub timestamp: u64,
    pub version: String,
}

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("cache I/O: {0}")]
    Io(#[from] std::io::Error),
    #[error("cache line {0}: {1}")]
    Parse(usize, String),
    #[error("conflicting verdicts for {0}")]
    Conflict(String),
}

/// Verdict store keyed by canonical type string; a single writer appends.
#[derive(Debug, Default)]
pub struct ResultCache {
    map: Mutex<HashMap<String, CacheRecord>>,
    file: Option<Mutex<File>>,
}

impl ResultCache {
    pub fn in_memory() -> Self {
        Self::default()
    }

    pub fn open(path: &Path) -> Result<Self, CacheError> {
        let mut map: HashMap<String, CacheRecord> = HashMap::new();
        if path.exists() {
            for (i, line) in BufReader::new(File::open(path)?).lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let rec: CacheRecord =
                    serde_json::from_str(&line).map_err(|e| CacheError::Parse(i + 1, e.to_string()))?;
                if let Some(old) = map.get(&rec.ty) {
                    if old.nk0 != rec.nk0 {
                        return Err(CacheError::Conflict(rec.ty));
                    }
                }
                map.insert(rec.ty.clone(), rec);
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(Self { map: Mutex::new(map), file: Some(Mutex::new(file)) })
    }

    pub fn get(&self, ty: &DynkinType) -> Option<CacheRecord> {
        self.map.lock().unwrap().get(&ty.to_string()).cloned()
    }

    pub fn len(&self) -> usize {
        self.map.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn put(&self, ty: &DynkinType, res: &NkResult) -> Result<(), CacheError> {
        let key = ty.to_string();
        let mut map = self.map.lock().unwrap();
        if let Some(old) = map.get(&key) {
            if old.nk0 != res.verdict {
                return Err(CacheError::Conflict(key));
            }
            return Ok(());
        }
        let rec = CacheRecord {
            ty: key.clone(),
            rank: ty.rank(),
            nk0: res.verdict,
            witness: res.witness.clone(),
            ms: res.elapsed_ms,
            timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
            version: env!("CARGO_PKG_VERSION").to_string(),
        };
        if let Some(f) = &self.file {
            let mut f = f.lock().unwrap();
            writeln!(f, "{}", serde_json::to_string(&rec).expect("record serializes"))?;
        }
        map.insert(key, rec);
        Ok(())
    }
}

/// A failed command: message and exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl CliError {
    fn usage(m: impl ToString) -> Self {
        Self { code: EXIT_USAGE, message: m.to_string() }
    }
}

impl From<K3Error> for CliError {
    fn from(e: K3Error) -> Self {
        let code = match e {
            K3Error::BudgetExceeded(_) => EXIT_BUDGET,
            K3Error::PNotCoprime(_)
            | K3Error::PDividesD(_)
            | K3Error::RankTooLarge(..)
            | K3Error::SignatureOutOfRange(..)
            | K3Error::EvenP(_) => EXIT_OUT_OF_SCOPE,
            K3Error::PathDisagreement { .. } => EXIT_CHECK_FAILED,
            _ => EXIT_USAGE,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<CacheError> for CliError {
    fn from(e: CacheError) -> Self {
        let code = if matches!(e, CacheError::Conflict(_)) { EXIT_CHECK_FAILED } else { EXIT_USAGE };
        Self { code, message: e.to_string() }
    }
}

/// The command's answer, before formatting.
#[derive(Debug, Serialize)]
pub struct Output {
    pub query: String,
    pub verdict: Value,
    pub witness: Value,
    pub ms: u64,
    #[serde(skip)]
    pub code: i32,
}

fn parse_type(s: &str) -> Result<DynkinType, CliError> {
    s.parse().map_err(|e| CliError::usage(format!("{s:?}: {e}")))
}

fn read_gram(path: &Path) -> Result<GramLattice, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    let rows: Result<Vec<Vec<i64>>, _> = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split_whitespace().map(str::parse::<i64>).collect())
        .collect();
    let rows = rows.map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    GramLattice::new(rows).map_err(|e| CliError::usage(e.to_string()))
}

struct Ctx {
    budget: EnumBudget,
    cache: ResultCache,
    verify_direct: bool,
}

impl Ctx {
    fn nk0(&self, r: &DynkinType) -> Result<NkResult, CliError> {
        if let Some(rec) = self.cache.get(r) {
            return Ok(NkResult { verdict: rec.nk0, witness: rec.witness, elapsed_ms: 0 });
        }
        let res = nk0(r, self.budget)?;
        self.cache.put(r, &res)?;
        Ok(res)
    }
}

fn execute(ctx: &Ctx, cmd: &Command) -> Result<Output, CliError> {
    let out = |query: String, verdict: Value, witness: Value| Output { query, verdict, witness, ms: 0, code: EXIT_OK };
    match cmd {
        Command::Nk0 { r#type } => {
            let r = parse_type(r#type)?;
            let res = ctx.nk0(&r)?;
            Ok(out(format!("nk0 {r}"), json!(res.verdict), json!(res.witness)))
        }
        Command::Nk { p, sigma, r#type } => {
            let r = parse_type(r#type)?;
            let res = nk_with(*p, *sigma, &r, |t| ctx.nk0(t))?;
            let mut witness = json!(res.witness);
            if ctx.verify_direct {
                let direct = nk_direct(*p, *sigma, &r, ctx.budget)?;
                if direct.verdict != res.verdict {
                    return Err(K3Error::PathDisagreement { p: *p, sigma: *sigma }.into());
                }
                witness = json!({ "trichotomy": res.witness, "direct": direct.witness });
            }
            Ok(out(format!("nk {p} {sigma} {r}"), json!(res.verdict), witness))
        }
        Command::Emb { r#type, gram, p, sigma } => {
            let (label, f, t_plus, t_minus) = match (r#type, gram) {
                (Some(t), None) => {
                    let r = parse_type(t)?;
                    (r.to_string(), sigma_fqf(&r), 0, r.rank() as usize)
                }
                (None, Some(path)) => {
                    let g = read_gram(path)?;
                    let (tp, tm) = g.signature();
                    let f = g.discriminant_form().map_err(|e| CliError::usage(e.to_string()))?;
                    (format!("gram:{}", path.display()), f, tp, tm)
                }
                _ => return Err(CliError::usage("emb needs a Dynkin type or --gram")),
            };
            match (p, sigma) {
                (Some(p), Some(s)) => {
                    let t = SupersingularTarget::new(*p, *s)?;
                    let v = emb_supersingular(&f, t_plus, t_minus, t)?;
                    Ok(out(format!("emb {label} {p} {s}"), json!(v), Value::Null))
                }
                _ => {
                    let w = emb_complex_witness(&f, t_plus, t_minus)?;
                    let wj = w.map(|w| w.choices.iter().map(|(l, t)| (*l, t.to_string())).collect::<Vec<_>>());
                    Ok(out(format!("emb {label}"), json!(wj.is_some()), json!(wj)))
                }
            }
        }
        Command::Residues { r#type, sigma } => {
            let r = parse_type(r#type)?;
            let set = residue_set(&r, *sigma)?;
            let v = ctx.nk0(&r)?.verdict;
            let residues = if v { set.residues.clone() } else { vec![] };
            Ok(out(
                format!("residues {r} {sigma}"),
                json!({ "modulus": set.modulus, "residues": residues }),
                json!({ "nk0": v, "arth_residues": set.residues }),
            ))
        }
        Command::Scan { max_rank } => {
            let rep = scan(ctx, *max_rank)?;
            let names: Vec<String> = rep.iter().map(|t| t.to_string()).collect();
            Ok(out(format!("scan {max_rank}"), json!(names), json!({ "count": names.len() })))
        }
        Command::Table1Verify => {
            let found: BTreeSet<String> = scan(ctx, k3::MAX_RANK)?.iter().map(|t| t.to_string()).collect();
            let want: BTreeSet<String> = table1_fixture().iter().map(|t| t.to_string()).collect();
            let missing: Vec<&String> = want.difference(&found).collect();
            let extra: Vec<&String> = found.difference(&want).collect();
            let ok = missing.is_empty() && extra.is_empty();
            let mut o = out(
                "table1_verify".into(),
                json!(ok),
                json!({ "entries": found.len(), "missing": missing, "extra": extra }),
            );
            if !ok {
                o.code = EXIT_CHECK_FAILED;
            }
            Ok(o)
        }
        Command::Lemma52 => {
            let rep = lemma52_search();
            let ok = rep.counterexamples.is_empty() && rep.classes_by_dim.get(&5) == Some(&1);
            let mut o = out("lemma52".into(), json!(ok), serde_json::to_value(&rep).expect("report serializes"));
            if !ok {
                o.code = EXIT_CHECK_FAILED;
            }
            Ok(o)
        }
        Command::Kummer => {
            let (checked, failures) = kummer_all(ctx.budget)?;
            let ok = failures.is_empty();
            let mut o = out("kummer".into(), json!(ok), json!({ "checked": checked, "failures": failures }));
            if !ok {
                o.code = EXIT_CHECK_FAILED;
            }
            Ok(o)
        }
        Command::Ssred { disc_t, p } => {
            let v = ss_reduction_possible(*disc_t, *p)?;
            Ok(out(format!("ssred {disc_t} {p}"), json!(v), Value::Null))
        }
    }
}

fn scan(ctx: &Ctx, max_rank: u32) -> Result<Vec<DynkinType>, CliError> {
    let write_err: Mutex<Option<CacheError>> = Mutex::new(None);
    let rep = table1_scan(
        max_rank,
        ctx.budget,
        |t| ctx.cache.get(t).map(|r| r.nk0),
        |t, res| {
            if let Err(e) = ctx.cache.put(t, res) {
                write_err.lock().unwrap().get_or_insert(e);
            }
        },
    )?;
    if let Some(e) = write_err.into_inner().unwrap() {
        return Err(e.into());
    }
    Ok(rep.minimal)
}

/// Every overlattice of `Σ⁻_{16A₁}` with `leng(D_M) ≤ 6`: count checked and the failing glue codes.
pub fn kummer_all(budget: EnumBudget) -> Result<(usize, Vec<String>), CliError> {
    let r: DynkinType = "16A1".parse().expect("valid type");
    let e = OverlatticeEnumerator::new(&r, budget).map_err(K3Error::from)?;
    let mut checked = 0;
    let mut failures = Vec::new();
    for o in e.collect().map_err(K3Error::from)? {
        let dm = e.disc_form(&o.glue).map_err(K3Error::from)?;
        let code = glue_code(&r, &o.glue).map_err(CliError::usage)?;
        if dm.leng() != 16 - 2 * code.dim() {
            failures.push(format!("length mismatch for {code}"));
        }
        if dm.leng() <= 6 {
            checked += 1;
            if !kummer_check(&r, &o.glue).map_err(CliError::usage)? {
                failures.push(code.to_string());
            }
        }
    }
    Ok((checked, failures))
}

fn render(o: &Output, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string(o).expect("output serializes"),
        Format::Tsv => format!("{}\t{}\t{}\t{}", o.query, o.verdict, o.witness, o.ms),
    }
}

/// Runs the command line, writing results to `out` and diagnostics to `err`; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let sink: &mut dyn Write = if code == EXIT_OK { out } else { err };
            let _ = write!(sink, "{e}");
            return code;
        }
    };
    if let Some(j) = cli.jobs {
        // a second global pool in the same process is refused; keep the first
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global();
    }
    let cache = match &cli.cache {
        Some(p) => match ResultCache::open(p) {
            Ok(c) => c,
            Err(e) => {
                let e = CliError::from(e);
                let _ = writeln!(err, "{}", json!({ "error": e.message }));
                return e.code;
            }
        },
        None => ResultCache::in_memory(),
    };
    let ctx = Ctx {
        budget: EnumBudget { time_limit: Some(Duration::from_secs(cli.budget_seconds)), ..EnumBudget::default() },
        cache,
        verify_direct: cli.verify_direct,
    };
    let start = Instant::now();
    match execute(&ctx, &cli.command) {
        Ok(mut o) => {
            o.ms = start.elapsed().as_millis() as u64;
            let _ = writeln!(out, "{}", render(&o, cli.format));
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "{}", json!({ "error": e.message }));
            e.code
        }
    }
}
