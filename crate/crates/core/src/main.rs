use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use blockpart::blocking::{
    verify_ell_blocking, verify_z_property, BlockingError, SearchOptions, Verdict, DEFAULT_BUDGET,
};
use blockpart::chordal::{build_chordal_partition, ChordalError, ChordalOptions};
use blockpart::embedding::RotationSystem;
use blockpart::generators::{
    complete_kary_tree, forest_decomposition, grid, layered_genus_instance, partial_k_tree,
    regular_high_girth, stacked_triangulation, CorpusManifest, GenError,
};
use blockpart::graph::{Graph, Layering, Partition, SubPartition};
use blockpart::refinement::{
    assemble_refined_partition, build_cut_family, refined_width_bound, RefinementError,
    RefinementParams,
};
use blockpart::report::{measure_blocking, RunReport};
use blockpart::shallow::{
    centred_colouring_bound, model_power_in_product, power_graph_degree_bounded,
    random_shallow_model, shallow_minors_iterate, shallow_minors_step, tw_bound,
    validate_shallow_model, RootedModel, ShallowError, ShallowParams, TwoBlockingProvider,
};
use blockpart::surface::{
    blocking_genus_combine, genus_z_partition, planar_rest_partition, SurfaceError,
    VerticalPathTree,
};
use blockpart::treepart::{
    improved_tree_partition, min_fill_decomposition, two_blocking_partition, TreeDecomposition,
    TreePartError,
};

const SUBCOMMANDS: [&str; 10] = [
    "gen", "chordal", "refine", "treepart", "block2", "verify", "power", "step", "genusz", "bounds",
];

#[derive(Parser)]
#[command(
    name = "blockpart",
    version,
    about = "Blocking partitions and clean-path verification"
)]
struct Cli {
    /// JSON object of flag values for the subcommand; flags on the command line win
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Write the report to FILE instead of stdout
    #[arg(long, global = true, value_name = "FILE")]
    report: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded instance with its certificates
    Gen(GenArgs),
    /// Chordal partition of a plane graph
    Chordal(ChordalArgs),
    /// Chordal partition refined by cutting long core paths
    Refine(RefineArgs),
    /// Detached tree-partition from a tree decomposition
    Treepart(TreeArgs),
    /// 2-blocking partition from a tree decomposition
    Block2(TreeArgs),
    /// Exhaustive clean-path check of a partition
    Verify(VerifyArgs),
    /// Degree-bounded power graph and its shallow model
    Power(PowerArgs),
    /// Radius-reducing step on a shallow model
    Step(StepArgs),
    /// Blocking sub-partition around vertical paths of a layered graph
    Genusz(GenuszArgs),
    /// Treewidth and centred colouring bound tables
    Bounds(BoundsArgs),
}

#[derive(Args, Serialize)]
struct SearchFlags {
    /// Maximum path extensions before giving up
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Worker threads for the path search
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

impl SearchFlags {
    fn options(&self) -> SearchOptions {
        SearchOptions {
            budget: self.budget,
            workers: self.workers.max(1),
        }
    }
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Kind {
    Grid,
    Triangulation,
    Tree,
    Regular4,
    Ktree,
    LayeredGenus,
}

#[derive(Args, Serialize)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    rows: usize,
    #[arg(long, default_value_t = 10)]
    cols: usize,
    /// Vertex count (triangulation, regular4, ktree)
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    branching: usize,
    #[arg(long, default_value_t = 3)]
    height: usize,
    #[arg(long, default_value_t = 3)]
    girth: usize,
    #[arg(long, default_value_t = 1000)]
    tries: u64,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 8)]
    max_degree: usize,
    #[arg(long, default_value_t = 1)]
    genus: usize,
    #[arg(long, value_name = "DIR")]
    #[serde(skip)]
    out_dir: PathBuf,
}

#[derive(Args, Serialize)]
struct PlaneSource {
    /// Embedding JSON file
    #[arg(long, value_name = "FILE", conflicts_with_all = ["n", "grid_rows"])]
    #[serde(skip)]
    embedding: Option<PathBuf>,
    /// Generate a stacked triangulation on N vertices
    #[arg(long, conflicts_with = "grid_rows")]
    n: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Generate a grid with this many rows (needs --grid-cols)
    #[arg(long, requires = "grid_cols")]
    grid_rows: Option<usize>,
    #[arg(long, requires = "grid_rows")]
    grid_cols: Option<usize>,
}

impl PlaneSource {
    fn load(&self, report: &mut RunReport) -> Result<RotationSystem, Failure> {
        let rs = if let Some(p) = &self.embedding {
            read_json(p)?
        } else if let Some(n) = self.n {
            stacked_triangulation(n, self.seed)?.embedding
        } else if let (Some(r), Some(c)) = (self.grid_rows, self.grid_cols) {
            grid(r, c)?.embedding
        } else {
            return Err(Failure::usage(
                "give --embedding, --n or --grid-rows/--grid-cols",
            ));
        };
        report.input("embedding", &rs);
        Ok(rs)
    }
}

#[derive(Args, Serialize)]
struct ChordalArgs {
    #[command(flatten)]
    source: PlaneSource,
    #[arg(long, default_value_t = 1)]
    tau: usize,
    /// Also compute the longest clean path
    #[arg(long)]
    measure: bool,
    #[command(flatten)]
    search: SearchFlags,
    #[arg(long, value_name = "DIR")]
    #[serde(skip)]
    out_dir: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct RefineArgs {
    #[command(flatten)]
    source: PlaneSource,
    #[arg(long, default_value_t = 2)]
    tau: usize,
    /// Mixed-distance threshold for cut edges
    #[arg(long, default_value_t = 2)]
    c: usize,
    /// Independence distance between cut edges
    #[arg(long, default_value_t = 8)]
    d_indep: usize,
    /// Window length along long core paths
    #[arg(long, default_value_t = 16)]
    n0: usize,
    #[arg(long)]
    measure: bool,
    #[command(flatten)]
    search: SearchFlags,
    #[arg(long, value_name = "DIR")]
    #[serde(skip)]
    out_dir: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct TreeArgs {
    #[arg(long, value_name = "FILE")]
    #[serde(skip)]
    graph: PathBuf,
    /// Tree decomposition JSON; a min-fill decomposition is used otherwise
    #[arg(long, value_name = "FILE")]
    #[serde(skip)]
    decomposition: Option<PathBuf>,
    #[arg(long)]
    measure: bool,
    #[command(flatten)]
    search: SearchFlags,
    #[arg(long, value_name = "DIR")]
    #[serde(skip)]
    out_dir: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    #[arg(long, value_name = "FILE")]
    #[serde(skip)]
    graph: PathBuf,
    /// Partition JSON, or sub-partition JSON with --z-parts
    #[arg(long, value_name = "FILE")]
    #[serde(skip)]
    partition: PathBuf,
    #[arg(long)]
    ell: usize,
    /// Check instead that paths of length at most ell meet at most this many parts
    #[arg(long)]
    z_parts: Option<usize>,
    #[command(flatten)]
    search: SearchFlags,
}

#[derive(Args, Serialize)]
struct PowerArgs {
    #[arg(long, value_name = "FILE")]
    #[serde(skip)]
    graph: PathBuf,
    /// Maximum path length
    #[arg(long)]
    k: usize,
    /// Maximum degree of inner vertices
    #[arg(long)]
    d: usize,
    #[arg(long, value_name = "DIR")]
    #[serde(skip)]
    out_dir: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct StepArgs {
    /// Model JSON; a random model on a grid is generated otherwise
    #[arg(long, value_name = "FILE")]
    #[serde(skip)]
    model: Option<PathBuf>,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    s: usize,
    /// Repeat the step until the radius reaches 4
    #[arg(long)]
    iterate: bool,
    #[arg(long, default_value_t = 8)]
    grid_rows: usize,
    #[arg(long, default_value_t = 8)]
    grid_cols: usize,
    #[arg(long, default_value_t = 2)]
    copies: usize,
    #[arg(long, default_value_t = 6)]
    sets: usize,
    #[arg(long, default_value_t = 4)]
    growth: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    search: SearchFlags,
    #[arg(long, value_name = "DIR")]
    #[serde(skip)]
    out_dir: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct GenuszArgs {
    /// Graph JSON (with --layering and --paths); a layered instance is generated otherwise
    #[arg(long, value_name = "FILE", requires_all = ["layering", "paths"])]
    #[serde(skip)]
    graph: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    #[serde(skip)]
    layering: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    #[serde(skip)]
    paths: Option<PathBuf>,
    /// Plane embedding of the graph without the root, for --combine with file input
    #[arg(long, value_name = "FILE")]
    #[serde(skip)]
    planar_embedding: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    genus: usize,
    #[arg(long)]
    ell: usize,
    #[arg(long, default_value_t = 30)]
    rows: usize,
    #[arg(long, default_value_t = 12)]
    cols: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Partition the rest with chordal partitions and verify the union
    #[arg(long)]
    combine: bool,
    /// Tau of the chordal partitions used by --combine
    #[arg(long, default_value_t = 2)]
    tau: usize,
    #[command(flatten)]
    search: SearchFlags,
    #[arg(long, value_name = "DIR")]
    #[serde(skip)]
    out_dir: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct BoundsArgs {
    #[arg(long)]
    ell: u64,
    #[arg(long)]
    t: u64,
    /// Largest p in the centred colouring table
    #[arg(long, default_value_t = 4)]
    p_max: u64,
}

struct Failure {
    code: u8,
    message: String,
    report: Option<Box<RunReport>>,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
            report: None,
        }
    }

    fn budget(message: impl Into<String>) -> Self {
        Failure {
            code: 3,
            message: message.into(),
            report: None,
        }
    }

    fn assertion(claim: &str, detail: impl std::fmt::Display) -> Self {
        Failure {
            code: 4,
            message: format!("assertion failed: claim {claim}: {detail}"),
            report: None,
        }
    }

    fn with_report(mut self, mut report: RunReport) -> Self {
        report.status = match self.code {
            2 => "counterexample",
            3 => "budget_exhausted",
            _ => "failed",
        }
        .to_string();
        self.report = Some(Box::new(report));
        self
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<BlockingError> for Failure {
    fn from(e: BlockingError) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<GenError> for Failure {
    fn from(e: GenError) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<blockpart::graph::GraphError> for Failure {
    fn from(e: blockpart::graph::GraphError) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<ChordalError> for Failure {
    fn from(e: ChordalError) -> Self {
        match &e {
            ChordalError::ClaimFailed { claim, .. } => Failure::assertion(claim, &e),
            _ => Failure::usage(e.to_string()),
        }
    }
}

impl From<RefinementError> for Failure {
    fn from(e: RefinementError) -> Self {
        match &e {
            RefinementError::ClaimFailed { claim, .. } => Failure::assertion(claim, &e),
            RefinementError::NoQualifyingEdge { .. } => {
                Failure::assertion("window_has_qualifying_edge", &e)
            }
            _ => Failure::usage(e.to_string()),
        }
    }
}

impl From<TreePartError> for Failure {
    fn from(e: TreePartError) -> Self {
        match &e {
            TreePartError::Assertion { claim, .. } => Failure::assertion(claim, &e),
            _ => Failure::usage(e.to_string()),
        }
    }
}

impl From<SurfaceError> for Failure {
    fn from(e: SurfaceError) -> Self {
        match &e {
            SurfaceError::Assertion { claim, .. } => Failure::assertion(claim, &e),
            SurfaceError::Chordal(c) => c.clone().into(),
            SurfaceError::Budget(_) => Failure::budget(e.to_string()),
            _ => Failure::usage(e.to_string()),
        }
    }
}

impl From<ShallowError> for Failure {
    fn from(e: ShallowError) -> Self {
        match &e {
            ShallowError::Assertion { claim, .. } => Failure::assertion(claim, &e),
            ShallowError::WidthRefused { .. } => Failure::assertion("blocking_width", &e),
            ShallowError::TreePartition(t) => t.clone().into(),
            _ => Failure::usage(e.to_string()),
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

/// Records the artifact hash and writes it when an output directory is set.
fn emit<T: Serialize>(
    dir: Option<&Path>,
    name: &str,
    value: &T,
    report: &mut RunReport,
) -> Result<(), Failure> {
    report.output(name, value);
    if let Some(dir) = dir {
        fs::create_dir_all(dir)?;
        let mut text = serde_json::to_string(value).expect("serialisable");
        text.push('\n');
        fs::write(dir.join(name), text)?;
    }
    Ok(())
}

fn params<T: Serialize>(args: &T) -> Value {
    serde_json::to_value(args).expect("serialisable")
}

fn run_gen(a: &GenArgs) -> Result<RunReport, Failure> {
    let mut rep = RunReport::new("gen", params(a));
    let dir = Some(a.out_dir.as_path());
    let mut manifest = CorpusManifest::default();
    let (name, graph) = match a.kind {
        Kind::Grid => {
            let gi = grid(a.rows, a.cols)?;
            emit(dir, "embedding.json", &gi.embedding, &mut rep)?;
            emit(dir, "decomposition.json", &gi.decomposition, &mut rep)?;
            ("grid", gi.graph)
        }
        Kind::Triangulation => {
            let t = stacked_triangulation(a.n, a.seed)?;
            emit(dir, "embedding.json", &t.embedding, &mut rep)?;
            ("stacked_triangulation", t.graph)
        }
        Kind::Tree => {
            let g = complete_kary_tree(a.branching, a.height)?;
            emit(
                dir,
                "decomposition.json",
                &forest_decomposition(&g)?,
                &mut rep,
            )?;
            ("complete_kary_tree", g)
        }
        Kind::Regular4 => (
            "regular_high_girth",
            regular_high_girth(a.n, a.girth, a.seed, a.tries)?,
        ),
        Kind::Ktree => {
            let kt = partial_k_tree(a.n, a.k, a.max_degree, a.seed)?;
            emit(dir, "decomposition.json", &kt.decomposition, &mut rep)?;
            ("partial_k_tree", kt.graph)
        }
        Kind::LayeredGenus => {
            let inst = layered_genus_instance(a.genus, a.rows, a.cols, a.seed)?;
            emit(dir, "layering.json", &inst.layering, &mut rep)?;
            emit(dir, "paths.json", &inst.tree, &mut rep)?;
            emit(dir, "planar_embedding.json", &inst.planar_part, &mut rep)?;
            rep.detail("columns", &inst.columns);
            ("layered_genus_instance", inst.graph)
        }
    };
    emit(dir, "graph.json", &graph, &mut rep)?;
    rep.detail("n", graph.n());
    rep.detail("m", graph.m());
    rep.detail("max_degree", graph.max_degree());
    manifest.add("graph.json", name, a.seed, params(a), &graph);
    emit(dir, "manifest.json", &manifest, &mut rep)?;
    Ok(rep)
}

fn run_chordal(a: &ChordalArgs) -> Result<RunReport, Failure> {
    let mut rep = RunReport::new("chordal", params(a));
    let rs = a.source.load(&mut rep)?;
    let res = build_chordal_partition(&rs, &ChordalOptions::new(a.tau))?;
    let g = rs.graph();
    let dir = a.out_dir.as_deref();
    emit(dir, "graph.json", g, &mut rep)?;
    emit(dir, "embedding.json", &rs, &mut rep)?;
    emit(dir, "partition.json", &res.partition, &mut rep)?;
    emit(
        dir,
        "quotient_decomposition.json",
        &res.quotient_decomposition,
        &mut rep,
    )?;
    rep.width = Some(res.partition.width());
    rep.claims = res.claims.clone();
    rep.detail("trees", res.trees.len());
    rep.detail("quotient_width", res.quotient_decomposition.width());
    rep.detail(
        "exact_cores",
        res.states.iter().filter(|s| s.exact_core).count(),
    );
    if a.measure {
        rep.blocking_number = Some(measure_blocking(g, &res.partition, &a.search.options())?);
    }
    Ok(rep)
}

fn run_refine(a: &RefineArgs) -> Result<RunReport, Failure> {
    let mut rep = RunReport::new("refine", params(a));
    let rs = a.source.load(&mut rep)?;
    let p = RefinementParams::new(a.tau, a.c, a.d_indep, a.n0)?;
    let chordal = build_chordal_partition(&rs, &ChordalOptions::new(a.tau))?;
    let g = rs.graph();
    let run = build_cut_family(g, &chordal, &p)?;
    let refined = assemble_refined_partition(g, &chordal, &run.family)?;
    let dir = a.out_dir.as_deref();
    emit(dir, "graph.json", g, &mut rep)?;
    emit(dir, "embedding.json", &rs, &mut rep)?;
    emit(dir, "partition.json", &refined, &mut rep)?;
    emit(dir, "cuts.json", &run.family, &mut rep)?;
    rep.width = Some(refined.width());
    rep.claims = chordal.claims.clone();
    rep.claims.merge(&run.claims);
    rep.detail("chordal_width", chordal.partition.width());
    rep.detail(
        "width_bound",
        refined_width_bound(g.max_degree(), &p).to_string(),
    );
    rep.detail("stats", run.stats);
    if a.measure {
        rep.blocking_number = Some(measure_blocking(g, &refined, &a.search.options())?);
    }
    Ok(rep)
}

fn load_tree_input(
    a: &TreeArgs,
    rep: &mut RunReport,
) -> Result<(Graph, TreeDecomposition), Failure> {
    let g: Graph = read_json(&a.graph)?;
    rep.input("graph", &g);
    let td = match &a.decomposition {
        Some(p) => {
            let td: TreeDecomposition = read_json(p)?;
            rep.input("decomposition", &td);
            td
        }
        None => min_fill_decomposition(&g),
    };
    td.validate(&g)?;
    rep.detail("decomposition_width", td.width());
    Ok((g, td))
}

fn run_treepart(a: &TreeArgs) -> Result<RunReport, Failure> {
    let mut rep = RunReport::new("treepart", params(a));
    let (g, td) = load_tree_input(a, &mut rep)?;
    let (rtp, stats) = improved_tree_partition(&g, &td)?;
    let k = td.width() + 1;
    let d = g.max_degree().max(1);
    emit(a.out_dir.as_deref(), "tree_partition.json", &rtp, &mut rep)?;
    rep.width = Some(rtp.width());
    rep.claims
        .record("tree_partition.width", rtp.width() <= 90 * k * d);
    rep.claims
        .record("tree_partition.tree_degree", rtp.max_degree() <= 15 * d);
    rep.claims.record("tree_partition.detached", rtp.detached);
    rep.detail("width_bound", 90 * k * d);
    rep.detail("tree_degree", rtp.max_degree());
    rep.detail("tree_degree_bound", 15 * d);
    rep.detail("nodes", rtp.bags.len());
    rep.detail("stats", stats);
    Ok(rep)
}

fn run_block2(a: &TreeArgs) -> Result<RunReport, Failure> {
    let mut rep = RunReport::new("block2", params(a));
    let (g, td) = load_tree_input(a, &mut rep)?;
    let res = two_blocking_partition(&g, &td)?;
    emit(
        a.out_dir.as_deref(),
        "partition.json",
        &res.partition,
        &mut rep,
    )?;
    rep.width = Some(res.partition.width());
    rep.claims.record(
        "two_blocking.width",
        res.partition.width() <= res.width_bound,
    );
    rep.claims.record("two_blocking.blocking", true);
    rep.detail("width_bound", res.width_bound);
    rep.detail("stats", &res.stats);
    if a.measure {
        rep.blocking_number = Some(measure_blocking(&g, &res.partition, &a.search.options())?);
    }
    Ok(rep)
}

fn run_verify(a: &VerifyArgs) -> Result<RunReport, Failure> {
    let mut rep = RunReport::new("verify", params(a));
    let g: Graph = read_json(&a.graph)?;
    rep.input("graph", &g);
    let opts = a.search.options();
    let result = match a.z_parts {
        None => {
            let r: Partition = read_json(&a.partition)?;
            rep.input("partition", &r);
            rep.width = Some(r.width());
            verify_ell_blocking(&g, &r, a.ell, &opts)?
        }
        Some(k) => {
            let z: SubPartition = read_json(&a.partition)?;
            rep.input("partition", &z);
            rep.width = Some(z.width());
            verify_z_property(&g, &z, a.ell, k, &opts)?
        }
    };
    rep.detail("nodes_expanded", result.nodes_expanded);
    match result.verdict {
        Verdict::Holds => {
            rep.detail("verdict", "holds");
            Ok(rep)
        }
        Verdict::Counterexample(path) => {
            rep.detail("verdict", "counterexample");
            rep.detail("counterexample", &path);
            let msg = format!(
                "counterexample: {}",
                serde_json::to_string(&path).expect("serialisable")
            );
            Err(Failure {
                code: 2,
                message: msg,
                report: None,
            }
            .with_report(rep))
        }
        Verdict::BudgetExhausted => {
            rep.detail("verdict", "budget_exhausted");
            Err(Failure::budget(format!(
                "budget of {} extensions exhausted",
                a.search.budget
            ))
            .with_report(rep))
        }
    }
}

fn run_power(a: &PowerArgs) -> Result<RunReport, Failure> {
    let mut rep = RunReport::new("power", params(a));
    let g: Graph = read_json(&a.graph)?;
    rep.input("graph", &g);
    let power = power_graph_degree_bounded(&g, a.k, a.d);
    let model = model_power_in_product(&g, a.k, a.d)?;
    let p = ShallowParams { r: a.k / 2, s: a.d };
    let check = validate_shallow_model(&model, p)?;
    let dir = a.out_dir.as_deref();
    emit(dir, "power.json", &power, &mut rep)?;
    emit(dir, "model.json", &model, &mut rep)?;
    rep.claims
        .record("power_model.matches_power", model.pattern == power);
    rep.claims.record("power_model.shallow", check.valid);
    rep.detail("m", power.m());
    rep.detail("max_degree", power.max_degree());
    rep.detail("model", &check);
    if !check.valid {
        return Err(Failure::assertion(
            "power_model.shallow",
            format!("{:?}", check.violations.first()),
        )
        .with_report(rep));
    }
    Ok(rep)
}

fn run_step(a: &StepArgs) -> Result<RunReport, Failure> {
    let mut rep = RunReport::new("step", params(a));
    let p = ShallowParams { r: a.r, s: a.s };
    let model: RootedModel = match &a.model {
        Some(path) => read_json(path)?,
        None => {
            let base = grid(a.grid_rows, a.grid_cols)?.graph;
            random_shallow_model(&base, a.copies, p, a.sets, a.growth, a.seed)?
        }
    };
    rep.input("model", &model);
    let opts = a.search.options();
    let steps = if a.iterate {
        shallow_minors_iterate(&model, p, &TwoBlockingProvider, &opts)?
    } else {
        vec![shallow_minors_step(&model, p, &TwoBlockingProvider, &opts)?]
    };
    let mut summary = Vec::new();
    for st in &steps {
        rep.claims.record("step.output_shallow", st.report.valid);
        rep.claims.record(
            "step.blocking_width",
            st.partition.width() as u128 <= st.claimed_width,
        );
        summary.push(json!({
            "r": st.params.r,
            "s": st.params.s,
            "s_bound": st.s_bound.to_string(),
            "copies": st.model.copies,
            "copies_bound": st.d_bound.to_string(),
            "partition_width": st.partition.width(),
            "claimed_width": st.claimed_width.to_string(),
            "max_radius": st.report.max_radius,
            "max_degree": st.report.max_degree,
        }));
    }
    rep.width = steps.iter().map(|s| s.partition.width()).max();
    rep.detail("steps", summary);
    let last = steps.last().map_or(&model, |s| &s.model);
    emit(a.out_dir.as_deref(), "model.json", last, &mut rep)?;
    Ok(rep)
}

fn run_genusz(a: &GenuszArgs) -> Result<RunReport, Failure> {
    let mut rep = RunReport::new("genusz", params(a));
    let (g, layering, tree, planar) = match &a.graph {
        Some(gp) => {
            let g: Graph = read_json(gp)?;
            let layering: Layering = read_json(a.layering.as_deref().expect("required by clap"))?;
            let tree: VerticalPathTree = read_json(a.paths.as_deref().expect("required by clap"))?;
            let planar: Option<RotationSystem> =
                a.planar_embedding.as_deref().map(read_json).transpose()?;
            (g, layering, tree, planar)
        }
        None => {
            let inst = layered_genus_instance(a.genus, a.rows, a.cols, a.seed)?;
            (inst.graph, inst.layering, inst.tree, Some(inst.planar_part))
        }
    };
    rep.input("graph", &g);
    rep.input("layering", &layering);
    rep.input("paths", &tree);
    let opts = a.search.options();
    let res = genus_z_partition(&g, &layering, &tree, a.genus, a.ell, &opts)?;
    let dir = a.out_dir.as_deref();
    emit(dir, "graph.json", &g, &mut rep)?;
    emit(dir, "z_partition.json", &res.partition, &mut rep)?;
    rep.width = Some(res.partition.width());
    rep.claims = res.claims.clone();
    rep.detail("width_bound", res.width_bound);
    rep.detail("z_vertices", res.z_vertices.len());
    rep.detail("steps", &res.steps);
    if a.combine {
        let planar = planar
            .ok_or_else(|| Failure::usage("--combine with file input needs --planar-embedding"))?;
        rep.input("planar_embedding", &planar);
        let pr = planar_rest_partition(&g, &planar, &res.partition, a.tau, &opts)?;
        if !pr.exact {
            return Err(
                Failure::budget("blocking number of the planar part not settled").with_report(rep),
            );
        }
        let ell_p = pr.ell_p.max(1);
        let c = blocking_genus_combine(&g, &res.partition, &pr.rest, ell_p, a.ell, &opts)?;
        rep.claims.record("combined_blocking", true);
        emit(dir, "partition.json", &c.partition, &mut rep)?;
        rep.width = Some(c.partition.width());
        rep.detail("planar_blocking_number", pr.ell_p);
        rep.detail("combined_bound", c.bound);
    }
    Ok(rep)
}

fn run_bounds(a: &BoundsArgs) -> Result<RunReport, Failure> {
    let mut rep = RunReport::new("bounds", params(a));
    let tw: Vec<Value> = (1..=a.t)
        .map(|t| json!({"t": t, "tw_bound": tw_bound(a.ell, t).to_string()}))
        .collect();
    let centred: Vec<Value> = (1..=a.p_max)
        .map(|p| json!({"p": p, "bound": centred_colouring_bound(a.ell, p, a.t).to_string()}))
        .collect();
    rep.detail("tw_bound", tw_bound(a.ell, a.t).to_string());
    rep.detail("tw_bound_table", tw);
    rep.detail("centred_colouring_table", centred);
    Ok(rep)
}

/// Inserts the `--config` values right after the subcommand name, skipping
/// any flag already given on the command line.
fn expand_config(args: Vec<String>) -> Result<Vec<String>, String> {
    let mut path = None;
    for (i, a) in args.iter().enumerate() {
        if a == "--config" {
            path = args.get(i + 1).cloned();
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        }
    }
    let Some(path) = path else { return Ok(args) };
    let Some(at) = args.iter().position(|a| SUBCOMMANDS.contains(&a.as_str())) else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path).map_err(|e| format!("{path}: {e}"))?;
    let cfg: Value = serde_json::from_str(&text).map_err(|e| format!("{path}: {e}"))?;
    let Value::Object(cfg) = cfg else {
        return Err(format!("{path}: config must be a JSON object"));
    };
    let given: BTreeSet<String> = args
        .iter()
        .filter_map(|a| a.strip_prefix("--"))
        .map(|a| a.split('=').next().unwrap_or(a).to_string())
        .collect();
    let mut extra = Vec::new();
    for (key, value) in cfg {
        let flag = key.replace('_', "-");
        if given.contains(&flag) {
            continue;
        }
        let values = match value {
            Value::Array(vs) => vs,
            v => vec![v],
        };
        for v in values {
            match v {
                Value::Bool(true) => extra.push(format!("--{flag}")),
                Value::Bool(false) | Value::Null => {}
                Value::String(s) => extra.extend([format!("--{flag}"), s]),
                Value::Number(x) => extra.extend([format!("--{flag}"), x.to_string()]),
                _ => return Err(format!("{path}: unsupported value for {key}")),
            }
        }
    }
    let mut out = args[..=at].to_vec();
    out.extend(extra);
    out.extend(args[at + 1..].iter().cloned());
    Ok(out)
}

fn main() -> ExitCode {
    let args = match expand_config(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let start = Instant::now();
    let outcome = match &cli.command {
        Command::Gen(a) => run_gen(a),
        Command::Chordal(a) => run_chordal(a),
        Command::Refine(a) => run_refine(a),
        Command::Treepart(a) => run_treepart(a),
        Command::Block2(a) => run_block2(a),
        Command::Verify(a) => run_verify(a),
        Command::Power(a) => run_power(a),
        Command::Step(a) => run_step(a),
        Command::Genusz(a) => run_genusz(a),
        Command::Bounds(a) => run_bounds(a),
    };
    let (report, code, message) = match outcome {
        Ok(r) => (Some(r), 0, None),
        Err(f) => (f.report.map(|b| *b), f.code, Some(f.message)),
    };
    if let Some(r) = report {
        let text = r.to_json();
        match &cli.report {
            Some(p) => {
                if let Err(e) = fs::write(p, text) {
                    eprintln!("error: {}: {e}", p.display());
                    return ExitCode::from(1);
                }
            }
            None => print!("{text}"),
        }
    }
    if let Some(m) = message {
        eprintln!("error: {m}");
    }
    eprintln!(
        "{}",
        json!({"wall_time_ms": start.elapsed().as_millis() as u64})
    );
    ExitCode::from(code)
}
