//! Experiment plumbing shared by the command line tool and the C ABI:
//! configs naming a graph and a schema, an encode → decode → verify run,
//! node-level verification of supplied advice, and versioned reports.

use std::collections::{BTreeMap, HashSet};
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::advice::{measure_sparsity, AdviceAssignment, AdviceKind, ComposableParams, Schema};
use crate::bits::Bits;
use crate::coloring::three::Inequality;
use crate::coloring::{delta_coloring_alpha, delta_schema, ColoringConstants, InitialColoringSchema, ThreeColoringSchema};
use crate::error::{Error, Result};
use crate::gen::{generate, GeneratorKind};
use crate::graph::Graph;
use crate::lcl::LclProblem;
use crate::local::LocalityReport;
use crate::onebit::to_one_bit;
use crate::orientation::{
    delta_edge_coloring_alpha, delta_edge_coloring_schema, splitting_schema, EdgeSubsetCodec, OrientationConfig,
    OrientationSchema,
};
use crate::solution::{canonical_edges, Solution};
use crate::subexp::{cycle_ball, grid_ball, ClusterConstants, SubexpConfig, SubexpSchema};

pub const REPORT_VERSION: u32 = 1;

const MAX_CLUSTER_R: usize = 16;

/// Every schema name the runner knows.
pub const SCHEMAS: [&str; 9] = [
    "orientation",
    "orientation-variable",
    "edge-subset",
    "splitting",
    "edge-coloring",
    "lcl-subexp",
    "initial-coloring",
    "delta-coloring",
    "three-coloring",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case", deny_unknown_fields)]
pub enum GraphSpec {
    Generator {
        kind: String,
        params: Vec<usize>,
        seed: u64,
        #[serde(default = "one")]
        id_exponent: u32,
    },
    File {
        path: PathBuf,
    },
}

fn one() -> u32 {
    1
}

impl GraphSpec {
    /// `kind:p1,p2,...` names a generator; anything else is a file path.
    pub fn parse(text: &str, seed: u64) -> GraphSpec {
        if !Path::new(text).exists() {
            if let Some((kind, params)) = text.split_once(':') {
                if kind.parse::<GeneratorKind>().is_ok() {
                    if let Ok(params) = params.split(',').map(|p| p.trim().parse::<usize>()).collect() {
                        return GraphSpec::Generator { kind: kind.to_string(), params, seed, id_exponent: 1 };
                    }
                }
            }
        }
        GraphSpec::File { path: PathBuf::from(text) }
    }

    /// The graph and, for planted generators, the hidden coloring.
    pub fn load(&self) -> Result<(Graph, Option<Vec<u32>>)> {
        match self {
            GraphSpec::Generator { kind, params, seed, id_exponent } => {
                let g = generate(kind.parse()?, params, *seed, *id_exponent)?;
                Ok((g.graph, g.planted))
            }
            GraphSpec::File { path } => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                Ok((crate::io::read_graph(&text)?, None))
            }
        }
    }
}

/// Schema parameters; every field is optional and defaults per schema.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SchemaParams {
    pub c: Option<f64>,
    pub gamma: Option<usize>,
    pub alpha: Option<usize>,
    /// Short-piece threshold of the orientation schemas.
    pub r: Option<usize>,
    /// Resampling budget of the orientation marker search.
    pub budget: Option<usize>,
    /// LCL solved by `lcl-subexp`, e.g. `3-coloring` or `mis`.
    pub lcl: Option<String>,
    /// Cluster parameter r of `lcl-subexp`.
    pub cluster_r: Option<usize>,
    /// Explicit x0 of `lcl-subexp`; derived from the graph family when absent.
    pub x0: Option<usize>,
    /// Check only the per-instance conditions of `lcl-subexp`.
    pub relaxed: bool,
    /// Coloring constants; the profile named by the environment otherwise.
    pub profile: Option<ColoringConstants>,
    pub root_distance: Option<usize>,
    /// Edge subset by ID pairs; random with `density` when absent.
    pub subset: Option<Vec<(u64, u64)>>,
    pub density: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub graph: GraphSpec,
    pub schema: String,
    #[serde(default)]
    pub params: SchemaParams,
    #[serde(default)]
    pub seed: u64,
    /// Verification predicate; only `schema` (the schema's own problem).
    #[serde(default = "schema_predicate")]
    pub verify: String,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub advice_out: Option<PathBuf>,
}

fn schema_predicate() -> String {
    "schema".into()
}

impl ExperimentConfig {
    pub fn new(graph: GraphSpec, schema: &str, params: SchemaParams, seed: u64) -> ExperimentConfig {
        ExperimentConfig { graph, schema: schema.into(), params, seed, verify: schema_predicate(), out: None, advice_out: None }
    }

    pub fn from_json(text: &str) -> Result<ExperimentConfig> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub kind: String,
    pub message: String,
    pub exit_code: i32,
}

impl From<&Error> for Failure {
    fn from(e: &Error) -> Failure {
        let kind = match e {
            Error::InvalidParams(_) => "invalid-params",
            Error::UnknownNode(_) => "unknown-node",
            Error::PaletteExceeded(_) => "palette-exceeded",
            Error::Infeasible(_) => "constants-infeasible",
            Error::Decode(_) => "decode",
            Error::NodeFailure { .. } => "node-failure",
            Error::SearchFailed(_) => "search-failed",
            Error::Precondition(_) => "precondition",
            Error::Verification(_) => "verification",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
        };
        Failure { kind: kind.into(), message: e.to_string(), exit_code: e.exit_code() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub n: usize,
    pub m: usize,
    pub max_degree: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BitSummary {
    pub kind: AdviceKind,
    pub beta: usize,
    pub max: usize,
    pub mean: f64,
    pub holders: usize,
    /// Fraction of 1s; uniform 1-bit advice only.
    pub sparsity: Option<f64>,
}

impl BitSummary {
    fn of(a: &AdviceAssignment) -> BitSummary {
        BitSummary {
            kind: a.kind,
            beta: a.beta,
            max: a.max_bits(),
            mean: a.mean_bits(),
            holders: a.holders().len(),
            sparsity: measure_sparsity(a).ok(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: u32,
    pub command: String,
    pub schema: String,
    pub config: Option<ExperimentConfig>,
    pub graph: GraphSummary,
    pub bits: Option<BitSummary>,
    pub declared_radius: Option<usize>,
    pub measured_radius: Option<usize>,
    pub max_ball: Option<usize>,
    /// Active coloring constants, when the schema uses them.
    pub constants: Option<BTreeMap<String, usize>>,
    /// Instance inequalities checked by the encoder.
    pub inequalities: Vec<Inequality>,
    pub verdict: Verdict,
    /// IDs of the nodes whose local check failed.
    pub rejecting: Vec<u64>,
    pub failure: Option<Failure>,
    /// Excluded from reproducibility comparisons.
    pub wall_ms: u128,
}

impl Report {
    fn empty(command: &str, schema: &str) -> Report {
        Report {
            version: REPORT_VERSION,
            command: command.into(),
            schema: schema.into(),
            config: None,
            graph: GraphSummary::default(),
            bits: None,
            declared_radius: None,
            measured_radius: None,
            max_ball: None,
            constants: None,
            inequalities: Vec::new(),
            verdict: Verdict::Fail,
            rejecting: Vec::new(),
            failure: None,
            wall_ms: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// 0 on pass; the failure's code, or 3 for rejecting nodes.
    pub fn exit_code(&self) -> i32 {
        match (&self.verdict, &self.failure) {
            (Verdict::Pass, _) => 0,
            (Verdict::Fail, Some(f)) => f.exit_code,
            (Verdict::Fail, None) => 3,
        }
    }

    /// The report with run-dependent fields cleared.
    pub fn comparable(&self) -> Report {
        Report { wall_ms: 0, ..self.clone() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> Result<Report> {
        let r: Report = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if r.version != REPORT_VERSION {
            return Err(Error::Parse(format!("report version {} is not {REPORT_VERSION}", r.version)));
        }
        Ok(r)
    }

    fn fail(&mut self, e: &Error) {
        self.verdict = Verdict::Fail;
        self.failure = Some(Failure::from(e));
    }
}

/// Local predicate each node evaluates on the decoded output.
#[derive(Clone, Debug)]
enum NodeCheck {
    Coloring(u32),
    Balanced,
    Splitting,
    EdgeColoring(u32),
    Lcl(LclProblem),
    /// Membership of incident edges must match this subset.
    Subset(Option<HashSet<(usize, usize)>>),
}

enum Built {
    Plain(Box<dyn Schema>),
    Three(ThreeColoringSchema),
    Subset(EdgeSubsetCodec),
}

struct Runner {
    built: Built,
    check: NodeCheck,
    constants: Option<BTreeMap<String, usize>>,
}

fn coloring_profile(p: &SchemaParams) -> Result<ColoringConstants> {
    match &p.profile {
        Some(c) => {
            c.validate()?;
            Ok(c.clone())
        }
        None => ColoringConstants::from_env(),
    }
}

fn composable(p: &SchemaParams, c: f64, gamma: usize, alpha: usize) -> ComposableParams {
    ComposableParams { c: p.c.unwrap_or(c), gamma: p.gamma.unwrap_or(gamma), alpha: p.alpha.unwrap_or(alpha) }
}

fn orient_config(p: &SchemaParams, seed: u64) -> OrientationConfig {
    let d = OrientationConfig::default();
    OrientationConfig { r: p.r, seed, budget: p.budget.unwrap_or(d.budget), ..d }
}

fn subset_of(g: &Graph, p: &SchemaParams, seed: u64) -> Result<Vec<(usize, usize)>> {
    match &p.subset {
        Some(pairs) => pairs.iter().map(|&(a, b)| Ok((g.index_of(a)?, g.index_of(b)?))).collect(),
        None => {
            let density = p.density.unwrap_or(0.5);
            if !(0.0..=1.0).contains(&density) {
                return Err(Error::InvalidParams(format!("density {density} outside [0, 1]")));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok(g.edges().into_iter().filter(|_| rng.gen_bool(density)).collect())
        }
    }
}

fn build(name: &str, p: &SchemaParams, g: &Graph, seed: u64, planted: Option<Vec<u32>>) -> Result<Runner> {
    let delta = g.max_degree();
    let plain = |s: Box<dyn Schema>, check| Ok(Runner { built: Built::Plain(s), check, constants: None });
    match name {
        "orientation" => {
            let params = composable(p, 0.0007, 2, 24_000);
            let inner = OrientationSchema::new(params, orient_config(p, seed))?;
            plain(Box::new(to_one_bit(Box::new(inner), params)?), NodeCheck::Balanced)
        }
        "orientation-variable" => {
            let params = composable(p, 1.0, 2, 16);
            plain(Box::new(OrientationSchema::new(params, orient_config(p, seed))?), NodeCheck::Balanced)
        }
        "edge-subset" => {
            let params = composable(p, 0.0007, 2, 24_000);
            let codec = EdgeSubsetCodec::new(params, orient_config(p, seed))?;
            let want = match &p.subset {
                Some(_) => Some(canonical_edges(g, &subset_of(g, p, seed)?).into_iter().collect()),
                None => None,
            };
            Ok(Runner { built: Built::Subset(codec), check: NodeCheck::Subset(want), constants: None })
        }
        "splitting" => {
            let params = composable(p, 1.0, 3, 11_664);
            plain(Box::new(splitting_schema(params, orient_config(p, seed))?), NodeCheck::Splitting)
        }
        "edge-coloring" => {
            let c = p.c.unwrap_or(1.0);
            let gamma = p.gamma.unwrap_or(1 + 2 * delta.saturating_sub(1));
            let params = composable(p, c, gamma, delta_edge_coloring_alpha(delta, c, gamma));
            let s = delta_edge_coloring_schema(delta, params, orient_config(p, seed))?;
            plain(Box::new(s), NodeCheck::EdgeColoring(delta as u32))
        }
        "lcl-subexp" => {
            let problem = LclProblem::builtin(p.lcl.as_deref().unwrap_or("3-coloring"))?;
            let at = |r: usize| match p.x0 {
                Some(x0) => ClusterConstants::new(r, delta.max(1), x0),
                None if delta <= 2 => ClusterConstants::for_family(r, delta.max(1), cycle_ball),
                None => ClusterConstants::for_family(r, delta, grid_ball),
            };
            // Without an explicit r, the smallest one whose constants pass.
            let consts = match p.cluster_r {
                Some(r) => at(r)?,
                None => {
                    let found = (1..=MAX_CLUSTER_R).map(at).find(|c| c.as_ref().is_ok_and(|c| c.check_family().is_ok()));
                    match found {
                        Some(c) => c?,
                        None => at(MAX_CLUSTER_R)?,
                    }
                }
            };
            let config = if p.relaxed { SubexpConfig::relaxed(consts) } else { SubexpConfig::verified(consts) };
            let s = SubexpSchema::new(problem.clone(), config)?;
            plain(Box::new(s), NodeCheck::Lcl(problem))
        }
        "initial-coloring" => {
            let consts = coloring_profile(p)?;
            let params = composable(p, 1.0, 3, 81);
            let active = consts.active(params.alpha, delta);
            let s = InitialColoringSchema::new(params, consts)?;
            let palette = crate::coloring::linial_target(delta);
            Ok(Runner { built: Built::Plain(Box::new(s)), check: NodeCheck::Coloring(palette), constants: Some(active) })
        }
        "delta-coloring" => {
            let consts = coloring_profile(p)?;
            let c = p.c.unwrap_or(1.0);
            let gamma = p.gamma.unwrap_or(6);
            let params = composable(p, c, gamma, delta_coloring_alpha(c, gamma));
            let active = consts.active(params.alpha, delta);
            let s = delta_schema(params, consts, p.root_distance)?;
            Ok(Runner { built: Built::Plain(Box::new(s)), check: NodeCheck::Coloring(delta as u32), constants: Some(active) })
        }
        "three-coloring" => {
            let consts = coloring_profile(p)?;
            let active = consts.active(1, delta);
            let s = crate::coloring::three_coloring_schema(consts, seed, planted);
            Ok(Runner { built: Built::Three(s), check: NodeCheck::Coloring(3), constants: Some(active) })
        }
        other => Err(Error::InvalidParams(format!("unknown schema {other:?}; known: {}", SCHEMAS.join(", ")))),
    }
}

impl Runner {
    fn schema(&self) -> Option<&dyn Schema> {
        match &self.built {
            Built::Plain(s) => Some(s.as_ref()),
            Built::Three(s) => Some(s),
            Built::Subset(_) => None,
        }
    }

    fn radius(&self, g: &Graph) -> usize {
        match &self.built {
            Built::Subset(c) => c.radius(g),
            _ => self.schema().expect("schema").radius(g),
        }
    }

    fn encode(&self, g: &Graph, p: &SchemaParams, seed: u64, report: &mut Report) -> Result<(AdviceAssignment, NodeCheck)> {
        match &self.built {
            Built::Plain(s) => Ok((s.encode(g, &[])?, self.check.clone())),
            Built::Three(s) => {
                let enc = s.encode_detailed(g);
                let enc = enc?;
                report.inequalities = enc.checks.clone();
                Ok((enc.advice, self.check.clone()))
            }
            Built::Subset(c) => {
                let x = subset_of(g, p, seed)?;
                let want: HashSet<(usize, usize)> = canonical_edges(g, &x).into_iter().collect();
                Ok((c.encode(g, &x)?, NodeCheck::Subset(Some(want))))
            }
        }
    }

    fn decode(&self, g: &Graph, advice: &[Bits]) -> Result<(Solution, LocalityReport)> {
        match &self.built {
            Built::Subset(c) => {
                let (edges, loc) = c.decode(g, advice)?;
                Ok((Solution::EdgeSubset(canonical_edges(g, &edges)), loc))
            }
            _ => {
                let d = self.schema().expect("schema").decode(g, advice, &[])?;
                Ok((d.solution, d.locality))
            }
        }
    }

    /// Global check of the schema's problem, on top of the node checks.
    fn global_check(&self, g: &Graph, sol: &Solution) -> Result<()> {
        match self.schema() {
            Some(s) => s.check(g, sol, &[]),
            None => Ok(()),
        }
    }
}

/// Nodes (IDs ascending) whose local predicate fails on `sol`.
fn rejecting(g: &Graph, check: &NodeCheck, sol: &Solution) -> Result<Vec<u64>> {
    let mut bad: Vec<usize> = Vec::new();
    match (check, sol) {
        (NodeCheck::Coloring(k), Solution::VertexColoring(c)) => {
            for v in 0..g.n() {
                if c[v] == 0 || c[v] > *k || g.neighbors(v).iter().any(|&w| c[w] == c[v]) {
                    bad.push(v);
                }
            }
        }
        (NodeCheck::Balanced, Solution::Orientation(o)) => {
            for v in 0..g.n() {
                let consistent = g.neighbors(v).iter().enumerate().all(|(i, &w)| {
                    g.adj_pos(w, v).is_some_and(|j| o.out[v].get(i) != o.out[w].get(j))
                });
                let diff = o.in_degree(v).abs_diff(o.out_degree(v));
                if !consistent || diff > 1 || (g.degree(v) % 2 == 0 && diff != 0) {
                    bad.push(v);
                }
            }
        }
        (NodeCheck::Splitting, Solution::EdgeColoring(e)) | (NodeCheck::EdgeColoring(_), Solution::EdgeColoring(e)) => {
            for v in 0..g.n() {
                let cols = &e.colors[v];
                let consistent = g.neighbors(v).iter().enumerate().all(|(i, &w)| e.color(g, w, v) == cols[i]);
                let ok = match check {
                    NodeCheck::Splitting => {
                        let red = cols.iter().filter(|&&c| c == 1).count();
                        let blue = cols.iter().filter(|&&c| c == 2).count();
                        red == blue && red + blue == cols.len()
                    }
                    NodeCheck::EdgeColoring(k) => {
                        let set: HashSet<u32> = cols.iter().copied().collect();
                        set.len() == cols.len() && cols.iter().all(|&c| c >= 1 && c <= *k)
                    }
                    _ => unreachable!(),
                };
                if !(consistent && ok) {
                    bad.push(v);
                }
            }
        }
        (NodeCheck::Lcl(p), Solution::Labeling(l)) => bad = p.rejecting(g, &[], l)?,
        (NodeCheck::Subset(want), Solution::EdgeSubset(got)) => {
            if let Some(want) = want {
                let got: HashSet<(usize, usize)> = got.iter().copied().collect();
                for v in 0..g.n() {
                    let differs = g.neighbors(v).iter().any(|&w| {
                        let e = if g.id(v) < g.id(w) { (v, w) } else { (w, v) };
                        want.contains(&e) != got.contains(&e)
                    });
                    if differs {
                        bad.push(v);
                    }
                }
            }
        }
        (_, other) => {
            return Err(Error::Verification(format!("unexpected solution kind {:?}", std::mem::discriminant(other))));
        }
    }
    let mut ids: Vec<u64> = bad.into_iter().map(|v| g.id(v)).collect();
    ids.sort_unstable();
    ids.dedup();
    Ok(ids)
}

/// Decodes `advice`, runs every node's check and the global check, and
/// fills the verdict fields of `report`.
fn judge(runner: &Runner, g: &Graph, advice: &[Bits], check: &NodeCheck, report: &mut Report) {
    report.declared_radius = Some(runner.radius(g));
    let outcome = runner.decode(g, advice).and_then(|(sol, loc)| {
        report.measured_radius = Some(loc.measured_radius);
        report.max_ball = Some(loc.max_ball);
        let bad = rejecting(g, check, &sol)?;
        Ok((sol, bad))
    });
    match outcome {
        Ok((sol, bad)) => {
            report.rejecting = bad;
            if !report.rejecting.is_empty() {
                report.verdict = Verdict::Fail;
                let first = report.rejecting[0];
                report.failure =
                    Some(Failure::from(&Error::Verification(format!("{} node(s) reject, first {first}", report.rejecting.len()))));
            } else if let Err(e) = runner.global_check(g, &sol) {
                report.fail(&e);
            } else {
                report.verdict = Verdict::Pass;
            }
        }
        Err(e) => report.fail(&e),
    }
}

fn check_predicate(name: &str) -> Result<()> {
    if name == "schema" {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("unknown verification predicate {name:?}")))
    }
}

/// Encodes, decodes and verifies. Failures are recorded in the report,
/// never raised; the advice is returned when encoding succeeded.
pub fn run_with_advice(config: &ExperimentConfig) -> (Report, Option<(Graph, AdviceAssignment)>) {
    let start = std::time::Instant::now();
    let loaded = check_predicate(&config.verify).and_then(|_| config.graph.load());
    let (mut report, kept) = match loaded {
        Ok((g, planted)) => {
            let (report, advice) = run_loaded(&g, planted, &config.schema, &config.params, config.seed);
            (report, advice.map(|a| (g, a)))
        }
        Err(e) => {
            let mut report = Report::empty("run", &config.schema);
            report.fail(&e);
            (report, None)
        }
    };
    report.config = Some(config.clone());
    report.wall_ms = start.elapsed().as_millis();
    (report, kept)
}

/// Encode, decode and verify on a graph already in memory. `planted` is a
/// known proper coloring handed to schemas that can use one.
pub fn run_on_graph(
    g: &Graph,
    planted: Option<Vec<u32>>,
    schema: &str,
    params: &SchemaParams,
    seed: u64,
) -> (Report, Option<AdviceAssignment>) {
    let start = std::time::Instant::now();
    let (mut report, advice) = run_loaded(g, planted, schema, params, seed);
    report.wall_ms = start.elapsed().as_millis();
    (report, advice)
}

fn run_loaded(
    g: &Graph,
    planted: Option<Vec<u32>>,
    schema: &str,
    params: &SchemaParams,
    seed: u64,
) -> (Report, Option<AdviceAssignment>) {
    let mut report = Report::empty("run", schema);
    report.graph = GraphSummary { n: g.n(), m: g.m(), max_degree: g.max_degree() };
    let res = (|| -> Result<AdviceAssignment> {
        let runner = build(schema, params, g, seed, planted)?;
        report.constants = runner.constants.clone();
        let (advice, check) = runner.encode(g, params, seed, &mut report)?;
        report.bits = Some(BitSummary::of(&advice));
        judge(&runner, g, &advice.bits, &check, &mut report);
        Ok(advice)
    })();
    match res {
        Ok(a) => (report, Some(a)),
        Err(e) => {
            report.fail(&e);
            (report, None)
        }
    }
}

pub fn run(config: &ExperimentConfig) -> Report {
    run_with_advice(config).0
}

/// Verifies supplied advice: decode, then every node checks its output.
pub fn verify(g: &Graph, advice: &[Bits], schema: &str, params: &SchemaParams, seed: u64) -> Report {
    let start = std::time::Instant::now();
    let mut report = Report::empty("verify", schema);
    report.graph = GraphSummary { n: g.n(), m: g.m(), max_degree: g.max_degree() };
    match build(schema, params, g, seed, None) {
        Ok(runner) => {
            report.constants = runner.constants.clone();
            if advice.len() == g.n() {
                report.bits = Some(BitSummary::of(&AdviceAssignment::variable(advice.to_vec())));
                let check = runner.check.clone();
                judge(&runner, g, advice, &check, &mut report);
            } else {
                report.fail(&Error::Parse(format!("{} advice strings for {} nodes", advice.len(), g.n())));
            }
        }
        Err(e) => report.fail(&e),
    }
    report.wall_ms = start.elapsed().as_millis();
    report
}

/// The decoder's output on supplied advice, without any checking.
pub fn decode_solution(
    g: &Graph,
    advice: &[Bits],
    schema: &str,
    params: &SchemaParams,
    seed: u64,
) -> Result<(Solution, LocalityReport)> {
    build(schema, params, g, seed, None)?.decode(g, advice)
}

pub const CSV_HEADER: &str =
    "schema,command,n,m,max_degree,max_bits,mean_bits,holders,sparsity,declared_radius,measured_radius,max_ball,verdict,exit_code";

/// One CSV row per report.
pub fn stats_csv(reports: &[Report]) -> Result<String> {
    if reports.is_empty() {
        return Err(Error::InvalidParams("no reports given".into()));
    }
    let opt = |x: Option<String>| x.unwrap_or_default();
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in reports {
        let b = r.bits.as_ref();
        let row = [
            r.schema.clone(),
            r.command.clone(),
            r.graph.n.to_string(),
            r.graph.m.to_string(),
            r.graph.max_degree.to_string(),
            opt(b.map(|b| b.max.to_string())),
            opt(b.map(|b| format!("{:.6}", b.mean))),
            opt(b.map(|b| b.holders.to_string())),
            opt(b.and_then(|b| b.sparsity).map(|s| format!("{s:.6}"))),
            opt(r.declared_radius.map(|x| x.to_string())),
            opt(r.measured_radius.map(|x| x.to_string())),
            opt(r.max_ball.map(|x| x.to_string())),
            if r.passed() { "pass".into() } else { "fail".into() },
            r.exit_code().to_string(),
        ];
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(kind: &str, params: &[usize], seed: u64) -> GraphSpec {
        GraphSpec::Generator { kind: kind.into(), params: params.to_vec(), seed, id_exponent: 1 }
    }

    #[test]
    fn orientation_on_c6() {
        let r = run(&ExperimentConfig::new(gen("cycle", &[6], 0), "orientation", SchemaParams::default(), 0));
        assert!(r.passed(), "{r:?}");
        let b = r.bits.unwrap();
        assert_eq!((b.max, b.kind, b.sparsity), (1, AdviceKind::UniformFixed, Some(0.0)));
    }

    #[test]
    fn same_config_same_report() {
        let cfg = ExperimentConfig::new(gen("cycle", &[40], 3), "orientation-variable", SchemaParams::default(), 1);
        let a = run(&cfg).comparable();
        let b = run(&cfg).comparable();
        assert_eq!(a.to_json(), b.to_json());
        let back = Report::from_json(&a.to_json()).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn config_round_trips() {
        let mut p = SchemaParams { alpha: Some(30), lcl: Some("mis".into()), ..Default::default() };
        p.subset = Some(vec![(1, 2)]);
        let cfg = ExperimentConfig::new(gen("grid2d", &[4, 4], 2), "lcl-subexp", p, 5);
        let back = ExperimentConfig::from_json(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
        assert!(ExperimentConfig::from_json(r#"{"graph": {"source": "file", "path": "x"}, "schema": "s", "bogus": 1}"#).is_err());
    }

    #[test]
    fn graph_spec_parsing() {
        assert_eq!(GraphSpec::parse("grid2d:3,4", 7), gen("grid2d", &[3, 4], 7));
        assert!(matches!(GraphSpec::parse("no/such/file", 0), GraphSpec::File { .. }));
    }

    #[test]
    fn unknown_schema_exits_one() {
        let r = run(&ExperimentConfig::new(gen("cycle", &[6], 0), "nope", SchemaParams::default(), 0));
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn all_zero_advice_on_a_long_cycle_fails() {
        let g = crate::gen::generate_graph(GeneratorKind::Cycle, &[400], 1).unwrap();
        let params = SchemaParams { alpha: Some(16), c: Some(1.0), r: Some(5), ..Default::default() };
        let zeros = vec![Bits::new(); g.n()];
        let r = verify(&g, &zeros, "orientation-variable", &params, 0);
        assert!(!r.passed());
        assert_ne!(r.exit_code(), 0);
    }

    #[test]
    fn stats_rows() {
        let r = run(&ExperimentConfig::new(gen("cycle", &[6], 0), "orientation", SchemaParams::default(), 0));
        let csv = stats_csv(&[r]).unwrap();
        assert_eq!(csv.lines().count(), 2);
        assert!(stats_csv(&[]).is_err());
    }
}
