//! Job configuration, command dispatch, check suites, result caching and reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::braiding::{total_degree, BraidedSpace, BraidingError, Degree};
use crate::cartan::{self, CartanDatum};
use crate::freealg::{jacobi_residual, symmetrizer_kernel, Flavor, FreeElement, PairingRadical};
use crate::liealg::{self, CheckResult, LieSpan, Status};
use crate::nichols::{sub_degrees, Height, NicholsBasis, NicholsError, Snapshot, SuperLetters};
use crate::scalar::CycScalar;
use crate::words::{format_word_n, shirshov_decomposition};

pub const FORMAT_VERSION: u32 = 1;

/// Highest total degree used by the kernel cross-validation in the structure suite.
pub fn kernel_check_degree(rank: usize) -> u32 {
    if rank <= 2 {
        8
    } else {
        6
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{line}:{column}: {message}")]
    Config { line: usize, column: usize, message: String },
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Nichols(#[from] NicholsError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Identities,
    Theorems,
    Structure,
}

impl Suite {
    fn parse(s: &str) -> Option<Suite> {
        match s.trim() {
            "identities" => Some(Suite::Identities),
            "theorems" => Some(Suite::Theorems),
            "structure" => Some(Suite::Structure),
            _ => None,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    format_version: u32,
    name: Option<String>,
    #[serde(rename = "M")]
    m: u32,
    n: usize,
    q: Vec<Vec<toml::Spanned<String>>>,
    cutoff: u32,
    #[serde(default)]
    checks: Vec<toml::Spanned<String>>,
    cache_dir: Option<PathBuf>,
}

/// A parsed job.
#[derive(Clone, Debug)]
pub struct JobConfig {
    pub name: String,
    pub m: u32,
    pub n: usize,
    pub q: Vec<Vec<String>>,
    pub cutoff: u32,
    pub checks: Vec<Suite>,
    pub cache_dir: Option<PathBuf>,
    pub space: Arc<BraidedSpace>,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn config_error(text: &str, offset: usize, message: impl Into<String>) -> CliError {
    let (line, column) = line_col(text, offset);
    CliError::Config {
        line,
        column,
        message: message.into(),
    }
}

impl JobConfig {
    pub fn parse(text: &str) -> Result<JobConfig, CliError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| {
            let offset = e.span().map_or(0, |s| s.start);
            config_error(text, offset, e.message().to_string())
        })?;
        if raw.format_version != FORMAT_VERSION {
            return Err(config_error(text, 0, format!("unsupported format_version {}", raw.format_version)));
        }
        if raw.cutoff < 1 {
            return Err(config_error(text, 0, "cutoff must be at least 1"));
        }
        if raw.q.len() != raw.n || raw.q.iter().any(|r| r.len() != raw.n) {
            return Err(config_error(text, 0, format!("q must be a {0}×{0} matrix", raw.n)));
        }
        let mut checks = Vec::new();
        for c in &raw.checks {
            match Suite::parse(c.get_ref()) {
                Some(s) => checks.push(s),
                None => return Err(config_error(text, c.span().start, format!("unknown check suite {:?}", c.get_ref()))),
            }
        }
        let mut rows = Vec::new();
        for row in &raw.q {
            let mut out = Vec::new();
            for entry in row {
                // the span includes the opening quote
                let start = entry.span().start + 1;
                let value = CycScalar::parse(raw.m, entry.get_ref()).map_err(|e| {
                    config_error(
                        text,
                        start + e.column - 1,
                        format!("bad scalar {:?}: {}", entry.get_ref(), e.message),
                    )
                })?;
                out.push(value);
            }
            rows.push(out);
        }
        let space = BraidedSpace::new(raw.m, rows).map_err(|e| {
            let (offset, msg) = match &e {
                BraidingError::ZeroEntry(row, col) => (raw.q[*row][*col].span().start, e.to_string()),
                _ => (0, e.to_string()),
            };
            config_error(text, offset, msg)
        })?;
        Ok(JobConfig {
            name: raw.name.unwrap_or_else(|| "unnamed".to_string()),
            m: raw.m,
            n: raw.n,
            q: raw.q.iter().map(|r| r.iter().map(|s| s.get_ref().clone()).collect()).collect(),
            cutoff: raw.cutoff,
            checks,
            cache_dir: raw.cache_dir,
            space: Arc::new(space),
        })
    }

    pub fn load(path: &Path) -> Result<JobConfig, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        JobConfig::parse(&text).map_err(|e| match e {
            CliError::Config { line, column, message } => CliError::Config {
                line,
                column,
                message: format!("{}: {message}", path.display()),
            },
            other => other,
        })
    }

    /// Canonical text of the braiding and cutoff, independent of formatting.
    pub fn canonical(&self) -> String {
        let mut s = format!("M={};n={};cutoff={};q=", self.m, self.n, self.cutoff);
        for row in self.space.matrix() {
            for x in row {
                let _ = write!(s, "[{x}]");
            }
            s.push(';');
        }
        s
    }

    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    checksum: String,
    key: String,
    payload: String,
}

/// What happened when looking up the basis cache.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheStatus {
    Disabled,
    Hit,
    Miss,
    /// A stale or corrupted entry was evicted and recomputed.
    Evicted,
}

fn cache_path(dir: &Path, key: &str) -> PathBuf {
    dir.join(format!("{key}.json"))
}

fn read_cache(path: &Path, key: &str, space: &Arc<BraidedSpace>) -> Option<NicholsBasis> {
    let text = fs::read_to_string(path).ok()?;
    let file: CacheFile = serde_json::from_str(&text).ok()?;
    if file.key != key || hex::encode(Sha256::digest(file.payload.as_bytes())) != file.checksum {
        return None;
    }
    let snap: Snapshot = serde_json::from_str(&file.payload).ok()?;
    NicholsBasis::from_snapshot(space, &snap).ok()
}

fn write_cache(dir: &Path, key: &str, basis: &NicholsBasis) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    let payload = serde_json::to_string(&basis.to_snapshot()).expect("snapshot serializes");
    let file = CacheFile {
        checksum: hex::encode(Sha256::digest(payload.as_bytes())),
        key: key.to_string(),
        payload,
    };
    let tmp = dir.join(format!(".{key}.{}.tmp", std::process::id()));
    {
        let mut f = fs::File::create(&tmp).map_err(io)?;
        f.write_all(serde_json::to_string(&file).expect("serializes").as_bytes())
            .map_err(io)?;
        f.sync_all().map_err(io)?;
    }
    fs::rename(&tmp, cache_path(dir, key)).map_err(io)?;
    Ok(())
}

/// Build the basis, going through the cache directory when one is given.
pub fn load_or_build(config: &JobConfig, dir: Option<&Path>) -> Result<(NicholsBasis, CacheStatus), CliError> {
    let Some(dir) = dir else {
        return Ok((NicholsBasis::build(&config.space, config.cutoff)?, CacheStatus::Disabled));
    };
    let key = config.hash();
    let path = cache_path(dir, &key);
    let existed = path.exists();
    if existed {
        if let Some(b) = read_cache(&path, &key, &config.space) {
            return Ok((b, CacheStatus::Hit));
        }
        let _ = fs::remove_file(&path);
    }
    let basis = NicholsBasis::build(&config.space, config.cutoff)?;
    write_cache(dir, &key, &basis)?;
    Ok((basis, if existed { CacheStatus::Evicted } else { CacheStatus::Miss }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Hilbert,
    Roots,
    Pbw,
    Lie,
    Present,
    Check,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub suites: Option<Vec<Suite>>,
    pub cache_dir: Option<PathBuf>,
    pub timings: bool,
}

/// Everything computed for one configuration, filled in lazily.
pub struct Analysis {
    pub config: JobConfig,
    pub basis: NicholsBasis,
    pub letters: SuperLetters,
    spans: BTreeMap<&'static str, LieSpan>,
}

impl Analysis {
    pub fn new(config: JobConfig, basis: NicholsBasis) -> Result<Analysis, NicholsError> {
        let letters = SuperLetters::compute(&basis)?;
        Ok(Analysis {
            config,
            basis,
            letters,
            spans: BTreeMap::new(),
        })
    }

    pub fn space(&self) -> &Arc<BraidedSpace> {
        &self.config.space
    }

    pub fn span(&mut self, flavor: Flavor) -> Result<&LieSpan, NicholsError> {
        if !self.spans.contains_key(flavor.name()) {
            let s = LieSpan::closure(&self.basis, flavor)?;
            self.spans.insert(flavor.name(), s);
        }
        Ok(&self.spans[flavor.name()])
    }

    fn word(&self, u: &[u8]) -> String {
        format_word_n(u, self.space().rank())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConfigEcho {
    pub name: String,
    #[serde(rename = "M")]
    pub m: u32,
    pub n: usize,
    pub q: Vec<Vec<String>>,
    pub cutoff: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct LetterReport {
    pub word: String,
    pub degree: Degree,
    pub p_uu: String,
    pub ord: Option<u32>,
    pub height: Height,
    /// `p_uu = 1`, whose height convention is ambiguous.
    pub flagged: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairProduct {
    pub u: String,
    pub v: String,
    pub product: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RootsReport {
    pub positive_roots: Vec<Degree>,
    pub vertex_labels: Vec<String>,
    pub edges: Vec<(usize, usize, String)>,
    pub e_e: usize,
    pub e_e_prime: usize,
    pub pair_products: Vec<PairProduct>,
    pub cartan_matrix: Option<Vec<Vec<i32>>>,
    pub cartan_type: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusEntry {
    pub degree: Degree,
    pub pbw: u64,
    pub block: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct LieReport {
    pub flavor: String,
    pub dim: usize,
    pub stabilized: bool,
    pub label: String,
    pub hilbert: Vec<usize>,
}

/// Status of `dim B(V)`, with the certificate for infinite verdicts.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Finiteness {
    Finite { dimension: usize, top_degree: u32 },
    Infinite { certificate: liealg::InfiniteCertificate },
    UnknownAtCutoff { cutoff: u32 },
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub format_version: u32,
    pub command: Command,
    pub config: ConfigEcho,
    pub config_hash: String,
    pub finiteness: Finiteness,
    pub hilbert: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub letters: Option<Vec<LetterReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub roots: Option<RootsReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub census: Option<Vec<CensusEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lie: Option<Vec<LieReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub presentation: Option<String>,
    pub checks: Vec<CheckResult>,
    /// Only with `--timings`; never part of the deterministic report.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, u128>>,
}

impl Report {
    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn to_structured(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let c = &self.config;
        let _ = writeln!(
            s,
            "config {} (M={}, n={}, cutoff={}) hash {}",
            c.name,
            c.m,
            c.n,
            c.cutoff,
            &self.config_hash[..16]
        );
        match &self.finiteness {
            Finiteness::Finite { dimension, top_degree } => {
                let _ = writeln!(s, "dim B(V) = {dimension} (top degree {top_degree})");
            }
            Finiteness::Infinite { certificate } => {
                let _ = writeln!(s, "dim B(V) = ∞ ({certificate:?})");
            }
            Finiteness::UnknownAtCutoff { cutoff } => {
                let _ = writeln!(s, "dim B(V) unknown at cutoff {cutoff}");
            }
        }
        let h: Vec<String> = self.hilbert.iter().map(usize::to_string).collect();
        let _ = writeln!(s, "hilbert {}", h.join(" "));
        if let Some(letters) = &self.letters {
            for l in letters {
                let height = match &l.height {
                    Height::Finite { value } => value.to_string(),
                    Height::Infinite { certificate } => format!("∞ ({certificate:?})"),
                    Height::UnknownAtCutoff => "unknown at cutoff".to_string(),
                };
                let ord = l.ord.map_or("∞".to_string(), |o| o.to_string());
                let flag = if l.flagged { " [p_uu = 1]" } else { "" };
                let _ = writeln!(
                    s,
                    "letter [{}] degree {:?} p_uu = {} ord {} height {}{}",
                    l.word, l.degree, l.p_uu, ord, height, flag
                );
            }
        }
        if let Some(r) = &self.roots {
            let _ = writeln!(s, "positive roots {:?}", r.positive_roots);
            let _ = writeln!(s, "vertex labels {}", r.vertex_labels.join(", "));
            for (i, j, l) in &r.edges {
                let _ = writeln!(s, "edge {}-{}: {}", i, j, l);
            }
            let _ = writeln!(s, "E_e = {}, E_e' = {}", r.e_e, r.e_e_prime);
            for p in &r.pair_products {
                let _ = writeln!(s, "p_uv p_vu [{}] [{}] = {}", p.u, p.v, p.product);
            }
            if let (Some(m), Some(t)) = (&r.cartan_matrix, &r.cartan_type) {
                let _ = writeln!(s, "cartan {m:?} type {t}");
            }
        }
        if let Some(census) = &self.census {
            for e in census {
                let _ = writeln!(s, "census {:?}: pbw {} block {}", e.degree, e.pbw, e.block);
            }
        }
        if let Some(lie) = &self.lie {
            for l in lie {
                let h: Vec<String> = l.hilbert.iter().map(usize::to_string).collect();
                let _ = writeln!(s, "lie {}: dim {} [{}]", l.flavor, l.label, h.join(" "));
            }
        }
        if let Some(p) = &self.presentation {
            s.push_str(p);
        }
        for c in &self.checks {
            let w = c.witness.as_ref().map_or(String::new(), |w| format!(" [witness {w}]"));
            let _ = writeln!(s, "{} {}: {}{}", c.status, c.name, c.detail, w);
        }
        if let Some(t) = &self.timings_ms {
            for (k, v) in t {
                let _ = writeln!(s, "time {k}: {v} ms");
            }
        }
        s
    }
}

fn letter_reports(a: &Analysis) -> Vec<LetterReport> {
    a.letters
        .records
        .iter()
        .map(|r| LetterReport {
            word: a.word(&r.word),
            degree: r.degree.clone(),
            p_uu: r.p_uu.to_string(),
            ord: r.ord,
            height: r.height.clone(),
            flagged: r.flagged,
        })
        .collect()
}

fn roots_report(a: &Analysis) -> RootsReport {
    let space = a.space();
    let dyn_data = space.dynkin();
    let recs = &a.letters.records;
    let mut pairs = Vec::new();
    for (i, u) in recs.iter().enumerate() {
        for v in &recs[i + 1..] {
            let p = space.bicharacter(&u.degree, &v.degree) * space.bicharacter(&v.degree, &u.degree);
            pairs.push(PairProduct {
                u: a.word(&u.word),
                v: a.word(&v.word),
                product: p.to_string(),
            });
        }
    }
    let datum = CartanDatum::of(space);
    RootsReport {
        positive_roots: a.letters.positive_roots(),
        vertex_labels: dyn_data.vertex_labels.iter().map(|x| x.to_string()).collect(),
        edges: dyn_data
            .edge_labels
            .iter()
            .map(|((i, j), l)| (i + 1, j + 1, l.to_string()))
            .collect(),
        e_e: dyn_data.edge_count(),
        e_e_prime: a.letters.e_e_prime(space),
        pair_products: pairs,
        cartan_matrix: datum.as_ref().map(|d| d.matrix.clone()),
        cartan_type: datum.as_ref().map(CartanDatum::type_label),
    }
}

fn census(a: &Analysis) -> Vec<CensusEntry> {
    let n = a.space().rank();
    let last = a.basis.top_degree().unwrap_or(a.basis.cutoff());
    let series = a.letters.pbw_census(n, last);
    let mut degrees: Vec<Degree> = series.keys().cloned().collect();
    for d in a.basis.blocks().keys() {
        if !series.contains_key(d) {
            degrees.push(d.clone());
        }
    }
    degrees.sort();
    degrees
        .into_iter()
        .map(|d| CensusEntry {
            pbw: series.get(&d).copied().unwrap_or(0),
            block: a.basis.block_dim(&d),
            degree: d,
        })
        .collect()
}

fn finiteness(a: &Analysis) -> Finiteness {
    if let (Some(dimension), Some(top_degree)) = (a.basis.dimension(), a.basis.top_degree()) {
        return Finiteness::Finite { dimension, top_degree };
    }
    let cert = liealg::b_infinite_certificate(&a.basis, &a.letters).or_else(|| liealg::l_infinite_certificate(&a.basis, &a.letters));
    match cert {
        Some(certificate) => Finiteness::Infinite { certificate },
        None => Finiteness::UnknownAtCutoff { cutoff: a.basis.cutoff() },
    }
}

/// Collapse many checks of one kind into a single line.
fn summarize(name: &str, results: Vec<CheckResult>) -> CheckResult {
    if let Some(f) = results.iter().find(|r| r.status == Status::Fail) {
        let mut out = f.clone();
        out.name = name.to_string();
        out.detail = format!("{}: {}", f.name, f.detail);
        return out;
    }
    let count = |s: Status| results.iter().filter(|r| r.status == s).count();
    let (p, sk, inc) = (count(Status::Pass), count(Status::Skipped), count(Status::Inconclusive));
    let detail = format!("{p} pass, {sk} skipped, {inc} inconclusive");
    if p > 0 {
        CheckResult::pass(name, detail)
    } else if inc > 0 {
        CheckResult::inconclusive(name, detail)
    } else {
        CheckResult::skipped(
            name,
            if results.is_empty() {
                "nothing to check".to_string()
            } else {
                detail
            },
        )
    }
}

fn random_element(space: &Arc<BraidedSpace>, rng: &mut ChaCha8Rng) -> FreeElement {
    let n = space.rank() as u8;
    let len = rng.gen_range(1..=3);
    let w: Vec<u8> = (0..len).map(|_| rng.gen_range(1..=n)).collect();
    let mut perm = w.clone();
    perm.rotate_left(rng.gen_range(0..len));
    let c = CycScalar::from_int(space.order(), rng.gen_range(-2..=2));
    FreeElement::from_word(space, &w).add(&FreeElement::from_word(space, &perm).scale(&c))
}

/// Number of randomized triples for the braided Jacobi check.
pub const JACOBI_TRIPLES: usize = 200;

pub fn jacobi_check(space: &Arc<BraidedSpace>, seed: u64, triples: usize) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..triples {
        let (u, v, w) = (
            random_element(space, &mut rng),
            random_element(space, &mut rng),
            random_element(space, &mut rng),
        );
        if !jacobi_residual(&u, &v, &w).is_zero() {
            return CheckResult::fail(
                "braided jacobi",
                format!("nonzero residual on triple {t}"),
                format!("{} | {} | {}", u.format(), v.format(), w.format()),
            );
        }
    }
    CheckResult::pass("braided jacobi", format!("{triples} random homogeneous triples, seed {seed}"))
}

fn seed_of(config: &JobConfig) -> u64 {
    let h = Sha256::digest(config.canonical().as_bytes());
    u64::from_le_bytes(h[..8].try_into().expect("8 bytes"))
}

fn identities_suite(a: &Analysis) -> Result<Vec<CheckResult>, NicholsError> {
    let space = a.space();
    let order = space.order();
    let mut out = vec![jacobi_check(space, seed_of(&a.config), JACOBI_TRIPLES)];
    let recs = &a.letters.records;
    let mut recursions = Vec::new();
    let mut flat = Vec::new();
    for u in recs {
        for v in recs {
            if u.word == v.word {
                continue;
            }
            let aux = liealg::pair_space(
                order,
                &u.p_uu,
                &space.bicharacter(&u.degree, &v.degree),
                &space.bicharacter(&v.degree, &u.degree),
                &v.p_uu,
            );
            let label = format!("{},{}", a.word(&u.word), a.word(&v.word));
            for k in 1..=3 {
                if !liealg::power_bracket_precondition(&aux, k) {
                    recursions.push(CheckResult::skipped("power bracket identities", "precondition"));
                    continue;
                }
                recursions.push(match liealg::power_bracket_identities(&aux, k) {
                    Ok(()) => CheckResult::pass("power bracket identities", label.clone()),
                    Err(e) => CheckResult::fail("power bracket identities", e, format!("{label} k={k}")),
                });
            }
            if u.p_uu.is_one() {
                for k in 1..=4 {
                    flat.push(match liealg::flat_power_identities(&aux, k) {
                        Ok(()) => CheckResult::pass("flat power identities", label.clone()),
                        Err(e) => CheckResult::fail("flat power identities", e, format!("{label} k={k}")),
                    });
                }
            }
        }
    }
    // the flat recursion over every p_uv p_vu = 1 split available in the field
    let l = space.unit_order();
    for b in 0..l as i64 {
        let aux = liealg::pair_space(
            order,
            &CycScalar::one(order),
            &CycScalar::unit(order, b),
            &CycScalar::unit(order, -b),
            &CycScalar::from_int(order, -1),
        );
        for k in 1..=4 {
            flat.push(match liealg::flat_power_identities(&aux, k) {
                Ok(()) => CheckResult::pass("flat power identities", format!("b={b}")),
                Err(e) => CheckResult::fail("flat power identities", e, format!("b={b} k={k}")),
            });
        }
    }
    out.push(summarize("power bracket identities", recursions));
    out.push(summarize("flat power identities", flat));
    let n = space.rank();
    let mut l14 = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for k in 1..=4u32 {
                if !a.basis.covers(k + 1) {
                    break;
                }
                l14.push(match liealg::nilpotency_check(&a.basis, i, j, k)? {
                    Ok(_) => CheckResult::pass("nilpotency", ""),
                    Err(e) => CheckResult::fail("nilpotency", e, format!("i={} j={} k={k}", i + 1, j + 1)),
                });
            }
        }
    }
    out.push(summarize("nilpotency", l14));
    Ok(out)
}

fn theorems_suite(a: &mut Analysis) -> Result<Vec<CheckResult>, NicholsError> {
    let std = a.span(Flavor::Std)?.clone();
    let minus = a.span(Flavor::Minus)?.clone();
    let (basis, letters, space) = (&a.basis, &a.letters, a.config.space.clone());
    let mut out = vec![
        liealg::finiteness_check(basis, letters, &std),
        liealg::connected_finiteness_check(basis, letters, &std),
        liealg::bound_lminus(basis, letters, &minus)?.to_check(),
    ];
    out.push(match liealg::bound_l(basis, letters, &std) {
        Some(r) => r.to_check(),
        None => CheckResult::skipped("bound L", "heights not all finite"),
    });
    let mut powers = Vec::new();
    for r in &letters.records {
        powers.push(liealg::check_powers_in_l(basis, &std, r)?);
    }
    out.push(summarize("powers in L", powers));
    let mut p21 = Vec::new();
    for u in &letters.records {
        for v in &letters.records {
            if u.word != v.word {
                for k in 1..=3 {
                    p21.push(liealg::power_brackets_check(basis, &std, u, v, k)?);
                }
            }
        }
    }
    out.push(summarize("power brackets", p21));
    out.extend(liealg::split_membership_check(basis, letters, &std)?);
    out.push(match CartanDatum::of(&space) {
        Some(d) => cartan::cartan_bound(&space, &d, letters, &std).1,
        None => CheckResult::skipped("cartan bound", "not of Cartan type"),
    });
    out.push(liealg::orthogonal_letter_check(basis, letters));
    out.push(match liealg::pair_growth(basis, letters, &std)? {
        Some((_, c)) => c,
        None => CheckResult::skipped("pair growth", "no pair with p_uu = 1 and p_uv p_vu ≠ 1"),
    });
    out.push(liealg::minus_split_check(basis, letters)?);
    out.push(liealg::product_membership_check(basis, &std)?);
    Ok(out)
}

/// `B(V)` and `L(V)` of a disconnected space against its components.
fn components_check(a: &mut Analysis) -> Result<CheckResult, NicholsError> {
    let space = a.space().clone();
    let comps = space.connected_components();
    if comps.len() < 2 {
        return Ok(CheckResult::skipped("components", "connected"));
    }
    let cutoff = a.basis.cutoff();
    let total = a.basis.top_degree().unwrap_or(cutoff) as usize;
    let mut hb = vec![0usize; total + 1];
    hb[0] = 1;
    let mut hl = vec![0usize; total + 1];
    for c in &comps {
        let sub = Arc::new(space.subspace(c));
        let b = NicholsBasis::build(&sub, cutoff)?;
        let l = LieSpan::closure(&b, Flavor::Std)?;
        let h = b.hilbert();
        let mut next = vec![0usize; total + 1];
        for (i, x) in hb.iter().enumerate() {
            for (j, y) in h.iter().enumerate() {
                if i + j <= total {
                    next[i + j] += x * y;
                }
            }
        }
        hb = next;
        for (j, y) in l.hilbert().iter().enumerate() {
            if j <= total {
                hl[j] += y;
            }
        }
    }
    let mine_b = a.basis.hilbert();
    let mine_l = a.span(Flavor::Std)?.hilbert();
    let trunc = |v: &[usize]| -> Vec<usize> {
        let mut x = v.to_vec();
        x.resize(total + 1, 0);
        x
    };
    if trunc(&mine_b) != hb {
        return Ok(CheckResult::fail(
            "components",
            format!("hilbert {mine_b:?} vs product {hb:?}"),
            "B(V)",
        ));
    }
    if trunc(&mine_l) != hl {
        return Ok(CheckResult::fail("components", format!("L dims {mine_l:?} vs sum {hl:?}"), "L(V)"));
    }
    Ok(CheckResult::pass(
        "components",
        format!("{} components: B and L decompose", comps.len()),
    ))
}

/// `ker S_m` = pairing radical = kernel of `T(V) → B(V)` per degree through `max_total`.
pub fn kernel_check(space: &Arc<BraidedSpace>, basis: &NicholsBasis, max_total: u32) -> Result<CheckResult, NicholsError> {
    let n = space.rank();
    let mut radical = PairingRadical::new(space);
    let mut degrees = 0;
    let top = max_total.min(basis.cutoff());
    let corner: Degree = vec![top; n];
    let mut all: Vec<Degree> = sub_degrees(&corner).into_iter().filter(|d| total_degree(d) <= top).collect();
    all.sort_by_key(|d| (total_degree(d), d.clone()));
    for d in all {
        let sym = symmetrizer_kernel(space, &d);
        let rad = radical.radical(&d);
        let nb = basis.kernel_echelon(&d)?;
        if sym != rad || sym != nb {
            return Ok(CheckResult::fail("kernels", "kernels differ", format!("{d:?}")));
        }
        degrees += 1;
    }
    Ok(CheckResult::pass("kernels", format!("{degrees} degrees through total {top}")))
}

fn structure_suite(a: &mut Analysis) -> Result<Vec<CheckResult>, NicholsError> {
    let space = a.space().clone();
    let mut out = Vec::new();
    let mismatch = census(a).into_iter().find(|e| e.pbw != e.block as u64);
    out.push(match mismatch {
        None => CheckResult::pass(
            "pbw census",
            format!("through total degree {}", a.basis.top_degree().unwrap_or(a.basis.cutoff())),
        ),
        Some(e) => CheckResult::fail(
            "pbw census",
            format!("pbw {} vs block {}", e.pbw, e.block),
            format!("{:?}", e.degree),
        ),
    });
    let words = a.letters.words();
    let bad13 = a.letters.records.iter().find(|r| {
        r.word.len() > 1 && {
            let (v, w) = shirshov_decomposition(&r.word).expect("Lyndon");
            !words.contains(&v) || !words.contains(&w)
        }
    });
    out.push(match bad13 {
        None => CheckResult::pass("shirshov parts", "Shirshov parts of hard letters are hard"),
        Some(r) => CheckResult::fail("shirshov parts", "non-hard Shirshov part", a.word(&r.word)),
    });
    match CartanDatum::of(&space) {
        Some(datum) if datum.cartan_type.is_some() => {
            out.push(cartan::uniqueness_check(&datum, &a.letters, a.basis.cutoff()));
            out.push(cartan::orthogonal_check(&space, &datum, &a.letters));
            out.push(cartan::root_labels_check(&space, &datum, &a.letters));
            let pres = cartan::presentation(&space, &datum, &a.letters);
            out.push(summarize("presentation", pres.verify(&a.basis, &a.letters)?));
        }
        _ => out.push(CheckResult::skipped("cartan", "not of finite Cartan type")),
    }
    out.push(cartan::orthogonal_exception_scan(&a.basis, &a.letters));
    let std = a.span(Flavor::Std)?.clone();
    out.push(liealg::direct_sum(&a.basis, &std)?.1);
    out.push(components_check(a)?);
    out.push(kernel_check(&space, &a.basis, kernel_check_degree(space.rank()))?);
    Ok(out)
}

pub fn run_suites(a: &mut Analysis, suites: &[Suite]) -> Result<Vec<CheckResult>, NicholsError> {
    let mut out = Vec::new();
    for s in suites {
        let results = match s {
            Suite::Identities => identities_suite(a)?,
            Suite::Theorems => theorems_suite(a)?,
            Suite::Structure => structure_suite(a)?,
        };
        let tag = match s {
            Suite::Identities => "identities",
            Suite::Theorems => "theorems",
            Suite::Structure => "structure",
        };
        out.extend(results.into_iter().map(|mut r| {
            r.name = format!("{tag}/{}", r.name);
            r
        }));
    }
    Ok(out)
}

/// Run one command on a configuration.
pub fn run(config: JobConfig, command: Command, opts: &RunOptions) -> Result<Report, CliError> {
    let mut timings = BTreeMap::new();
    let t0 = Instant::now();
    let dir = opts.cache_dir.clone().or_else(|| config.cache_dir.clone());
    let (basis, status) = load_or_build(&config, dir.as_deref())?;
    if status != CacheStatus::Disabled {
        eprintln!("cache {status:?} for {}", &config.hash()[..16]);
    }
    timings.insert("basis".to_string(), t0.elapsed().as_millis());
    let t1 = Instant::now();
    let mut a = Analysis::new(config, basis)?;
    timings.insert("letters".to_string(), t1.elapsed().as_millis());
    let echo = ConfigEcho {
        name: a.config.name.clone(),
        m: a.config.m,
        n: a.config.n,
        q: a.config.q.clone(),
        cutoff: a.config.cutoff,
    };
    let mut report = Report {
        format_version: FORMAT_VERSION,
        command,
        config: echo,
        config_hash: a.config.hash(),
        finiteness: finiteness(&a),
        hilbert: a.basis.hilbert(),
        letters: None,
        roots: None,
        census: None,
        lie: None,
        presentation: None,
        checks: Vec::new(),
        timings_ms: None,
    };
    let t2 = Instant::now();
    match command {
        Command::Hilbert => {}
        Command::Roots => {
            report.letters = Some(letter_reports(&a));
            report.roots = Some(roots_report(&a));
        }
        Command::Pbw => {
            report.letters = Some(letter_reports(&a));
            let c = census(&a);
            let ok = c.iter().all(|e| e.pbw == e.block as u64);
            report.checks.push(if ok {
                CheckResult::pass("pbw census", "PBW counts match block dimensions")
            } else {
                CheckResult::fail("pbw census", "mismatch", "census")
            });
            report.census = Some(c);
        }
        Command::Lie => {
            let mut lie = Vec::new();
            for f in [Flavor::Std, Flavor::Minus, Flavor::C] {
                let s = a.span(f)?;
                lie.push(LieReport {
                    flavor: f.name().to_string(),
                    dim: s.dim(),
                    stabilized: s.stabilized,
                    label: s.dim_label(),
                    hilbert: s.hilbert(),
                });
            }
            report.lie = Some(lie);
        }
        Command::Present => {
            let space = a.space().clone();
            match CartanDatum::of(&space) {
                Some(datum) => {
                    let pres = cartan::presentation(&space, &datum, &a.letters);
                    report.presentation = Some(pres.export_text(&space));
                    report.checks = pres.verify(&a.basis, &a.letters)?;
                }
                None => report.checks.push(CheckResult::skipped("presentation", "not of Cartan type")),
            }
        }
        Command::Check => {
            let suites = opts.suites.clone().unwrap_or_else(|| {
                if a.config.checks.is_empty() {
                    vec![Suite::Identities, Suite::Theorems, Suite::Structure]
                } else {
                    a.config.checks.clone()
                }
            });
            report.checks = run_suites(&mut a, &suites)?;
        }
    }
    timings.insert(format!("{command:?}").to_lowercase(), t2.elapsed().as_millis());
    if opts.timings {
        report.timings_ms = Some(timings);
    }
    Ok(report)
}

/// Command-line arguments of the `nichols` binary.
#[derive(Parser, Debug)]
#[command(name = "nichols", about = "Nichols algebras of diagonal type and their braided Lie algebras")]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub cutoff: Option<u32>,
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// Comma-separated suites for `check`.
    #[arg(long, value_delimiter = ',')]
    pub suite: Option<Vec<Suite>>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Append wall-clock timings to the report.
    #[arg(long)]
    pub timings: bool,
}

/// Entry point shared by the binary: returns the process exit code.
pub fn main_with(args: Args, out: &mut impl std::io::Write, err: &mut impl std::io::Write) -> i32 {
    let mut config = match JobConfig::load(&args.config) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    if let Some(c) = args.cutoff {
        if c < 1 {
            let _ = writeln!(err, "error: cutoff must be at least 1");
            return 2;
        }
        config.cutoff = c;
    }
    let opts = RunOptions {
        suites: args.suite,
        cache_dir: args.cache,
        timings: args.timings,
    };
    match run(config, args.command, &opts) {
        Ok(report) => {
            let text = match args.format {
                Format::Text => report.to_text(),
                Format::Structured => report.to_structured() + "\n",
            };
            let _ = out.write_all(text.as_bytes());
            if report.failed() {
                1
            } else {
                0
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MIXED36: &str = r#"
format_version = 1
name = "mixed36"
M = 6
n = 2
q = [["z^2", "-z^2"], ["1", "-1"]]
cutoff = 12
"#;

    #[test]
    fn parse_example_config() {
        let c = JobConfig::parse(MIXED36).unwrap();
        assert_eq!(c.n, 2);
        assert_eq!(c.space.q(0, 1), &-CycScalar::zeta_pow(6, 2));
        assert_eq!(c.hash().len(), 64);
    }

    #[test]
    fn scalar_error_location() {
        let bad = MIXED36.replace("\"-1\"", "\"z^\"");
        match JobConfig::parse(&bad) {
            Err(CliError::Config { line, column, .. }) => {
                assert_eq!(line, 6);
                assert!(column > 20, "{column}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn toml_error_location() {
        let bad = MIXED36.replace("cutoff = 12", "cutoff = ");
        match JobConfig::parse(&bad) {
            Err(CliError::Config { line, .. }) => assert_eq!(line, 7),
            other => panic!("{other:?}"),
        }
    }
}
