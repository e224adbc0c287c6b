use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use super::analysis::{Analysis, CmSummaryF, CmSummaryG};
use super::ast::{Directive, DirectiveKind, OptionValue, Session};
use crate::criteria::{check_o_regular, check_star_regular, fc1_witness, ChecklistVerdict, CriteriaError, DepthCertificate, Target};
use crate::groebner::GbConfig;
use crate::ideal::{CacheStats, GbCache, Ideal, IdealError, RingConfig, RingContext};
use crate::invariants::{colength_local, mingens, Blowup, Family, HilbertSeries, LengthTable, DEFAULT_REDUCTION_CAP};
use crate::poly::{parse_polynomial, MonomialOrder, ParseError, Polynomial};

/// Version of the structured report layout.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub reduction_cap: u32,
    /// Window for regularity checks; `r + d + 2` when unset.
    pub nmax: Option<u32>,
    pub degree_cap: u32,
    pub cache_dir: Option<PathBuf>,
    /// Worker threads; the global pool when unset.
    pub jobs: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { reduction_cap: DEFAULT_REDUCTION_CAP, nmax: None, degree_cap: GbConfig::default().degree_cap, cache_dir: None, jobs: None }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SessionError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("ring declaration: {0}")]
    Ring(IdealError),
    #[error("line {line}: `{directive}`: {source}")]
    Directive { line: usize, directive: String, source: CriteriaError },
    #[error("line {line}: {message}")]
    Usage { line: usize, message: String },
    #[error("cache directory: {0}")]
    Cache(std::io::Error),
    #[error("thread pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdealEcho {
    pub name: String,
    pub generators: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Instance {
    pub ring: String,
    pub vars: Vec<String>,
    pub presentation: Vec<String>,
    pub dimension: u32,
    pub ideals: Vec<IdealEcho>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionEcho {
    pub r: u32,
    pub rm: u32,
    pub cap: u32,
    pub minimal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeriesEcho {
    pub numerator: Vec<i64>,
    pub denominator_exponent: u32,
    pub e0: i64,
    pub e1: i64,
    pub window: u32,
    pub function: Vec<u64>,
}

impl From<&HilbertSeries> for SeriesEcho {
    fn from(s: &HilbertSeries) -> Self {
        SeriesEcho {
            numerator: s.numerator.clone(),
            denominator_exponent: s.denominator_exponent,
            e0: s.e0,
            e1: s.e1,
            window: s.function.len() as u32 - 1,
            function: s.function.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeriesPair {
    #[serde(rename = "G")]
    pub g: SeriesEcho,
    #[serde(rename = "F")]
    pub f: SeriesEcho,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DepthPair {
    #[serde(rename = "G")]
    pub g: DepthCertificate,
    #[serde(rename = "F")]
    pub f: DepthCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CmPair {
    #[serde(rename = "G")]
    pub g: CmSummaryG,
    #[serde(rename = "F")]
    pub f: CmSummaryF,
}

/// The full invariant battery for one pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Battery {
    pub pair: BTreeMap<&'static str, String>,
    pub reduction: ReductionEcho,
    pub sums: BTreeMap<&'static str, LengthTable>,
    pub series: SeriesPair,
    pub depth: DepthPair,
    pub cm: CmPair,
    pub checklist: Vec<ChecklistVerdict>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectiveResult {
    pub line: usize,
    pub directive: String,
    pub value: Value,
}

/// Run-dependent counters; not part of the deterministic content.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub elapsed_ms: u64,
    pub groebner_runs: u64,
    pub cache: Option<CacheStats>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub format_version: u32,
    pub instance: Instance,
    #[serde(flatten)]
    pub battery: Option<Battery>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub results: Vec<DirectiveResult>,
    pub stats: Stats,
}

impl Report {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    /// The structured report with the `stats` section removed.
    pub fn deterministic_json(&self) -> Value {
        let mut v = self.to_json();
        v.as_object_mut().unwrap().remove("stats");
        v
    }
}

/// Executes the directives of a session in order.
pub fn run_session(session: &Session, config: &RunConfig) -> Result<Report, SessionError> {
    match config.jobs {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build().map_err(|e| SessionError::Pool(e.to_string()))?;
            pool.install(|| run_inner(session, config))
        }
        None => run_inner(session, config),
    }
}

struct Runner<'a> {
    session: &'a Session,
    config: &'a RunConfig,
    ctx: RingContext,
    analyses: HashMap<(String, String, u32, Option<u32>), Arc<Analysis>>,
}

fn run_inner(session: &Session, config: &RunConfig) -> Result<Report, SessionError> {
    let start = Instant::now();
    let cache = match &config.cache_dir {
        Some(dir) => Some(Arc::new(GbCache::open(dir).map_err(SessionError::Cache)?)),
        None => None,
    };
    let ring_config = RingConfig { gb: GbConfig { degree_cap: config.degree_cap }, cache: cache.clone(), ..RingConfig::default() };
    let ring = &session.ring;
    let ctx = RingContext::new(ring.vars.clone(), ring.presentation.clone(), ring_config).map_err(SessionError::Ring)?;
    let names = ctx.names();
    let show = |ps: &[Polynomial]| ps.iter().map(|p| p.display(names).to_string()).collect::<Vec<_>>();
    let instance = Instance {
        ring: ring.name.clone(),
        vars: ring.vars.clone(),
        presentation: show(&ring.presentation),
        dimension: ctx.dimension() as u32,
        ideals: session.ideals.iter().map(|d| IdealEcho { name: d.name.clone(), generators: show(&d.gens) }).collect(),
    };
    let mut runner = Runner { session, config, ctx: ctx.clone(), analyses: HashMap::new() };
    let mut battery = None;
    let mut results = Vec::new();
    for d in &session.directives {
        let wrap = |source: CriteriaError| SessionError::Directive { line: d.line, directive: d.to_string(), source };
        match &d.kind {
            DirectiveKind::Report => {
                let an = runner.analysis(d)?;
                battery = Some(full_battery(&an, d).map_err(wrap)?);
            }
            _ => {
                let value = runner.directive(d)?;
                results.push(DirectiveResult { line: d.line, directive: d.to_string(), value });
            }
        }
    }
    let stats = Stats { elapsed_ms: start.elapsed().as_millis() as u64, groebner_runs: ctx.stats().groebner_runs, cache: cache.map(|c| c.stats()) };
    Ok(Report { format_version: FORMAT_VERSION, instance, battery, results, stats })
}

fn full_battery(an: &Analysis, d: &Directive) -> Result<Battery, CriteriaError> {
    let red = an.reduction()?;
    let mut sums = BTreeMap::new();
    for f in Family::ALL {
        sums.insert(f.name(), an.table(f)?.clone());
    }
    let pair = BTreeMap::from([("I", ideal_option(d, "i", "I")), ("J", ideal_option(d, "j", "J"))]);
    Ok(Battery {
        pair,
        reduction: ReductionEcho { r: red.r, rm: red.rm, cap: red.cap, minimal: an.minimal()? },
        sums,
        series: SeriesPair { g: an.series_g()?.into(), f: an.series_f()?.into() },
        depth: DepthPair { g: an.depth(Target::G)?.clone(), f: an.depth(Target::F)?.clone() },
        cm: CmPair { g: an.cm_g()?, f: an.cm_f()? },
        checklist: an.checklist()?.to_vec(),
    })
}

fn ideal_option(d: &Directive, key: &str, default: &str) -> String {
    match d.option(key) {
        Some(OptionValue::Ident(s)) | Some(OptionValue::Str(s)) => s.clone(),
        _ => default.to_string(),
    }
}

impl Runner<'_> {
    fn usage(&self, d: &Directive, message: impl Into<String>) -> SessionError {
        SessionError::Usage { line: d.line, message: message.into() }
    }

    fn int_option(&self, d: &Directive, key: &str) -> Result<Option<u32>, SessionError> {
        match d.option(key) {
            None => Ok(None),
            Some(OptionValue::Int(n)) => u32::try_from(*n).map(Some).map_err(|_| self.usage(d, format!("option `{key}` is too large"))),
            Some(v) => Err(self.usage(d, format!("option `{key}` expects an integer, found {v}"))),
        }
    }

    fn ideal(&self, d: &Directive, name: &str) -> Result<Ideal, SessionError> {
        let decl = self.session.ideal(name).ok_or_else(|| self.usage(d, format!("ideal `{name}` is not declared")))?;
        Ok(self.ctx.ideal(decl.gens.clone()))
    }

    fn analysis(&mut self, d: &Directive) -> Result<Arc<Analysis>, SessionError> {
        let i_name = ideal_option(d, "i", "I");
        let j_name = ideal_option(d, "j", "J");
        let cap = self.int_option(d, "cap")?.unwrap_or(self.config.reduction_cap);
        let nmax = self.int_option(d, "nmax")?.or(self.config.nmax);
        let key = (i_name.clone(), j_name.clone(), cap, nmax);
        if let Some(a) = self.analyses.get(&key) {
            return Ok(a.clone());
        }
        let i = self.ideal(d, &i_name)?;
        let j_gens = self.session.ideal(&j_name).ok_or_else(|| self.usage(d, format!("ideal `{j_name}` is not declared")))?.gens.clone();
        let bl = Blowup::new(&i, j_gens).map_err(|e| SessionError::Directive { line: d.line, directive: d.to_string(), source: e.into() })?;
        let a = Arc::new(Analysis::new(bl, cap, nmax));
        self.analyses.insert(key, a.clone());
        Ok(a)
    }

    /// An element given as a string expression or as the name of a principal ideal.
    fn element(&self, d: &Directive) -> Result<Polynomial, SessionError> {
        match d.option("element") {
            Some(OptionValue::Str(text)) => Ok(parse_polynomial(text, self.ctx.names(), MonomialOrder::GrevLex)?),
            Some(OptionValue::Ident(name)) => {
                let decl = self.session.ideal(name).ok_or_else(|| self.usage(d, format!("ideal `{name}` is not declared")))?;
                match decl.gens.as_slice() {
                    [g] => Ok(g.clone()),
                    _ => Err(self.usage(d, format!("`{name}` must have exactly one generator to serve as an element"))),
                }
            }
            _ => Err(self.usage(d, "option `element` is required")),
        }
    }

    fn target(&self, d: &Directive) -> Result<Option<Target>, SessionError> {
        match d.option("target") {
            None => Ok(None),
            Some(OptionValue::Ident(t)) if t == "G" => Ok(Some(Target::G)),
            Some(OptionValue::Ident(t)) if t == "F" => Ok(Some(Target::F)),
            Some(v) => Err(self.usage(d, format!("option `target` expects G or F, found {v}"))),
        }
    }

    fn directive(&mut self, d: &Directive) -> Result<Value, SessionError> {
        let wrap = |source: CriteriaError| SessionError::Directive { line: d.line, directive: d.to_string(), source };
        match &d.kind {
            DirectiveKind::Report => unreachable!(),
            DirectiveKind::Check(id) => {
                let an = self.analysis(d)?;
                let list = an.checklist().map_err(wrap)?;
                let v = list.iter().find(|v| v.id == id).ok_or_else(|| self.usage(d, format!("unknown statement id `{id}`")))?;
                Ok(to_value(v))
            }
            DirectiveKind::Compute(what) => match what.as_str() {
                "colength" | "mingens" => {
                    let name = ideal_option(d, "ideal", "I");
                    let ideal = self.ideal(d, &name)?;
                    let n = if what == "colength" { colength_local(&ideal) } else { mingens(&ideal) };
                    Ok(json!({ "ideal": name, what.as_str(): n.map_err(|e| wrap(e.into()))? }))
                }
                _ => {
                    let an = self.analysis(d)?;
                    let nmax = match self.int_option(d, "nmax")? {
                        Some(n) => n,
                        None => an.nmax().map_err(wrap)?,
                    };
                    let value = match what.as_str() {
                        "reduction" => {
                            let red = an.reduction().map_err(wrap)?;
                            to_value(&ReductionEcho { r: red.r, rm: red.rm, cap: red.cap, minimal: an.minimal().map_err(wrap)? })
                        }
                        "sums" => match d.option("family") {
                            Some(OptionValue::Ident(name)) => {
                                let family = Family::ALL.into_iter().find(|f| f.name() == name).ok_or_else(|| self.usage(d, format!("unknown family `{name}`")))?;
                                to_value(an.table(family).map_err(wrap)?)
                            }
                            None => {
                                let mut all = BTreeMap::new();
                                for f in Family::ALL {
                                    all.insert(f.name(), an.table(f).map_err(wrap)?.clone());
                                }
                                to_value(&all)
                            }
                            Some(v) => return Err(self.usage(d, format!("option `family` expects a family name, found {v}"))),
                        },
                        "series" => {
                            let g = || an.series_g().map(SeriesEcho::from).map_err(wrap);
                            let f = || an.series_f().map(SeriesEcho::from).map_err(wrap);
                            match self.target(d)? {
                                Some(Target::G) => to_value(&g()?),
                                Some(Target::F) => to_value(&f()?),
                                None => to_value(&SeriesPair { g: g()?, f: f()? }),
                            }
                        }
                        "depth" => match self.target(d)? {
                            Some(t) => to_value(an.depth(t).map_err(wrap)?),
                            None => to_value(&DepthPair { g: an.depth(Target::G).map_err(wrap)?.clone(), f: an.depth(Target::F).map_err(wrap)?.clone() }),
                        },
                        "star" => to_value(&check_star_regular(&an.blowup, &self.element(d)?, nmax).map_err(wrap)?),
                        "oregular" => to_value(&check_o_regular(&an.blowup, &self.element(d)?, nmax).map_err(wrap)?),
                        "cmtest" => to_value(an.fiber_test().map_err(wrap)?),
                        "vv" => to_value(&an.valabrega_valla().map_err(wrap)?),
                        "cz" => to_value(&an.cortadellas_zarzuela().map_err(wrap)?),
                        "witness" => {
                            let fc1 = an.table(Family::FC1).map_err(wrap)?;
                            let k = match self.int_option(d, "k")? {
                                Some(k) => k,
                                None => fc1.support().first().map(|n| n + 1).ok_or_else(|| self.usage(d, "the FC1 sum vanishes, so there is nothing to witness"))?,
                            };
                            to_value(&fc1_witness(&an.blowup, fc1, k).map_err(wrap)?)
                        }
                        "checklist" => to_value(&an.checklist().map_err(wrap)?),
                        _ => unreachable!("targets are checked by the parser"),
                    };
                    Ok(value)
                }
            },
        }
    }
}

fn to_value<T: Serialize + ?Sized>(v: &T) -> Value {
    serde_json::to_value(v).expect("result serializes")
}
