//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 resource budget exceeded,
//! 4 failed assertion under `--check`, 1 internal error.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::index::sample;
use rand::SeedableRng;
use serde::Serialize;
use serde_json::{json, Value};

use hurwitz_lab::ff::{self, ClOptions, Field};
use hurwitz_lab::groups::{is_admissible, is_nonsplitting, subgroups};
use hurwitz_lab::hurwitz::{self, ComponentRing};
use hurwitz_lab::koszul::{self, DiscreteModule};
use hurwitz_lab::rack::{self, SignConvention};
use hurwitz_lab::spec::{parse_abelian_spec, parse_group_spec, parse_rack_spec, GroupSpec};
use hurwitz_lab::Error;

const BUDGET_ENV: &str = "HURWITZ_LAB_BUDGET";

#[derive(Parser, Debug)]
#[command(name = "hurwitz-lab", version, about = "Hurwitz orbits, rack and Koszul homology, function-field class groups")]
struct Cli {
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for randomized choices such as curve subsampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Turn report rows into assertions; exit 4 if one fails.
    #[arg(long, global = true)]
    check: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Work budget; defaults to $HURWITZ_LAB_BUDGET, then to per-command defaults.
    #[arg(long, global = true)]
    budget: Option<u128>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Braid orbits, the component ring and stabilization.
    #[command(subcommand)]
    Hurwitz(HurwitzCmd),
    /// Rack homology and the shuffle coproduct.
    #[command(subcommand)]
    Rack(RackCmd),
    /// A-module homology of discrete modules.
    #[command(subcommand)]
    Koszul(KoszulCmd),
    /// Squarefree counts and class-group statistics.
    #[command(subcommand)]
    Ff(FfCmd),
    /// Group and class diagnostics.
    #[command(subcommand)]
    Group(GroupCmd),
}

#[derive(Args, Debug, Clone, Serialize)]
struct GroupArg {
    /// gdih:3, gdih:3,3, sym:3, or a JSON table file.
    #[arg(long)]
    group: String,
}

#[derive(Subcommand, Debug)]
enum HurwitzCmd {
    /// Orbit table of c^n / B_n.
    Orbits {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        n: usize,
    },
    /// Search for the stabilizing element U_D.
    Stabilize {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long, default_value_t = 12)]
        n_max: usize,
        #[arg(long, default_value_t = 4)]
        d_cap: usize,
    },
    /// Rank table of U: R_{n-N} -> R_n, globally and per sector.
    ScanU {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long, default_value_t = 12)]
        n_max: usize,
        #[arg(long, default_value_t = 4)]
        d_cap: usize,
    },
    /// Exploratory scan of V on generating orbits.
    ScanV {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long, default_value_t = 12)]
        n_max: usize,
    },
}

#[derive(Subcommand, Debug)]
enum RackCmd {
    /// Rational (optionally integral) rack homology.
    Homology {
        /// trivial:m or a group spec.
        #[arg(long)]
        rack: String,
        #[arg(long)]
        dmax: usize,
        /// Also compute integral homology by Smith normal form.
        #[arg(long)]
        integral: bool,
    },
    /// Coassociativity of the shuffle coproduct on all basis tensors.
    CoproductCheck {
        #[arg(long)]
        rack: String,
        #[arg(long, default_value_t = 4)]
        n_max: usize,
    },
}

#[derive(Args, Debug, Clone, Serialize)]
struct ModuleArgs {
    #[command(flatten)]
    g: GroupArg,
    /// R, k, or sector[:H] (H a subgroup index; default the whole group).
    #[arg(long, default_value = "R")]
    module: String,
    #[arg(long, default_value_t = 6)]
    n_max: usize,
}

#[derive(Subcommand, Debug)]
enum KoszulCmd {
    /// Table of dim H^A_{n,d}.
    Ahom {
        #[command(flatten)]
        m: ModuleArgs,
        #[arg(long, default_value_t = 3)]
        d_max: usize,
    },
    /// Regularity and cofiber bounds.
    Regularity {
        #[command(flatten)]
        m: ModuleArgs,
        #[arg(long, default_value_t = 3)]
        d_max: usize,
        #[arg(long, default_value_t = 4)]
        d_cap: usize,
        /// Window for the stabilizer search (at least n_max).
        #[arg(long)]
        stab_n_max: Option<usize>,
    },
    /// Degrees of the cofiber of U acting on the module.
    Cofiber {
        #[command(flatten)]
        m: ModuleArgs,
        #[arg(long, default_value_t = 4)]
        d_cap: usize,
        #[arg(long)]
        stab_n_max: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum FfCmd {
    /// Number of monic squarefree polynomials of degree n over F_q.
    SquarefreeCount {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
    },
    /// Average m_A and density of class groups with l-part A over S_n.
    ClStats {
        #[arg(long)]
        q: u64,
        /// One or more odd degrees, comma separated.
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        /// Invariant factors of A, e.g. 3 or 3,3.
        #[arg(long, default_value = "3")]
        a: String,
        /// Proceed when q is not good for l.
        #[arg(long)]
        allow_bad: bool,
        /// Skip the zeta-function cross-check.
        #[arg(long)]
        no_cross_check: bool,
    },
    /// Per-curve class groups, optionally a seeded subsample.
    CurveDump {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "3")]
        a: String,
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long)]
        allow_bad: bool,
    },
}

#[derive(Subcommand, Debug)]
enum GroupCmd {
    /// Orders, class data and subgroup counts.
    Info {
        #[command(flatten)]
        g: GroupArg,
    },
    /// Admissibility and the non-splitting property.
    Check {
        #[command(flatten)]
        g: GroupArg,
    },
}

enum Failure {
    Core(Error),
    Check(Vec<String>),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Out = std::result::Result<Report, Failure>;

/// A command's output: a JSON body and, where it is tabular, a CSV body.
struct Report {
    json: Value,
    csv: Option<String>,
    failures: Vec<String>,
}

impl Report {
    fn new(json: Value) -> Self {
        Report { json, csv: None, failures: Vec::new() }
    }

    fn csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    fn assert(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }
}

fn budget(cli: &Cli, default: u128) -> std::result::Result<u128, Failure> {
    if let Some(b) = cli.budget {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(s) => s.trim().parse().map_err(|_| Failure::Core(Error::invalid(format!("{BUDGET_ENV}='{s}' is not a number")))),
        Err(_) => Ok(default),
    }
}

fn positive(name: &str, x: usize) -> std::result::Result<(), Failure> {
    if x == 0 {
        return Err(Failure::Core(Error::invalid(format!("--{name} must be positive"))));
    }
    Ok(())
}

fn ring(g: &GroupSpec, n_max: usize, budget: u128) -> std::result::Result<ComponentRing, Failure> {
    Ok(ComponentRing::build(&g.group, &g.class, n_max, budget)?)
}

fn module(ring: &ComponentRing, spec: &str) -> std::result::Result<DiscreteModule, Failure> {
    let m = match spec {
        "R" => koszul::module_from_ring(ring)?,
        "k" => koszul::trivial_module(ring)?,
        s if s == "sector" || s.starts_with("sector:") => {
            let h = match s.strip_prefix("sector:") {
                Some(h) => h.parse().map_err(|_| Failure::Core(Error::invalid(format!("bad subgroup index in '{s}'"))))?,
                None => ring.subgroup_table().whole(),
            };
            koszul::sector_module(ring, h)?
        }
        other => return Err(Failure::Core(Error::invalid(format!("unknown module '{other}' (R, k, sector[:H])")))),
    };
    Ok(m)
}

fn stabilizer(ring: &ComponentRing, d_cap: usize) -> std::result::Result<hurwitz::StabilizerSpec, Failure> {
    let search = hurwitz::find_stabilizer_u(ring, d_cap)?;
    Ok(search.spec()?.clone())
}

fn run_hurwitz(cli: &Cli, cmd: &HurwitzCmd) -> Out {
    let b = budget(cli, hurwitz::DEFAULT_BUDGET)?;
    match cmd {
        HurwitzCmd::Orbits { g, n } => {
            let gs = parse_group_spec(&g.group)?;
            let r = ring(&gs, *n, b)?;
            let table = r.orbit_table(*n)?;
            let mut rep = Report::new(serde_json::to_value(&table).expect("serializable")).csv(table.to_csv());
            let k = gs.class.len() as u128;
            rep.assert(table.total_size() == k.pow(*n as u32), "orbit sizes sum to |c|^n");
            if k.pow(*n as u32) <= 1_000_000 {
                let bfs = hurwitz::bfs_partition(&gs.group, &gs.class, *n, b)?;
                rep.assert(bfs.sizes.len() == table.len(), "orbit count agrees with breadth-first search");
            }
            Ok(rep)
        }
        HurwitzCmd::Stabilize { g, n_max, d_cap } => {
            let gs = parse_group_spec(&g.group)?;
            let r = ring(&gs, *n_max, b)?;
            let search = hurwitz::find_stabilizer_u(&r, *d_cap)?;
            let mut rep = Report::new(serde_json::to_value(&search).expect("serializable"));
            rep.assert(search.is_conclusive(), format!("no D <= {d_cap} stabilizes within n <= {n_max}"));
            if let Ok(spec) = search.spec() {
                rep.assert(hurwitz::scan_u_stability(&r, spec).stable_from(spec.n0), "U is bijective from N_0");
            }
            Ok(rep)
        }
        HurwitzCmd::ScanU { g, n_max, d_cap } => {
            let gs = parse_group_spec(&g.group)?;
            let r = ring(&gs, *n_max, b)?;
            let spec = stabilizer(&r, *d_cap)?;
            let scan = hurwitz::scan_u_stability(&r, &spec);
            let mut rep = Report::new(json!({ "stabilizer": spec, "scan": scan })).csv(scan.to_csv());
            for row in scan.rows.iter().filter(|row| row.n >= spec.n0) {
                rep.assert(row.bijective(), format!("U bijective at n = {}", row.n));
                rep.assert(row.sectors_bijective(), format!("U bijective on every sector at n = {}", row.n));
            }
            Ok(rep)
        }
        HurwitzCmd::ScanV { g, n_max } => {
            let gs = parse_group_spec(&g.group)?;
            let r = ring(&gs, *n_max, b)?;
            let scan = hurwitz::scan_v_stability(&r);
            let mut csv = String::from("n,dim_src,dim_tgt,injective,surjective\n");
            for row in &scan.rows {
                writeln!(csv, "{},{},{},{},{}", row.n, row.dim_src, row.dim_tgt, row.injective, row.surjective).unwrap();
            }
            Ok(Report::new(serde_json::to_value(&scan).expect("serializable")).csv(csv))
        }
    }
}

fn run_rack(cli: &Cli, cmd: &RackCmd) -> Out {
    let b = budget(cli, rack::DEFAULT_RACK_BUDGET)?;
    match cmd {
        RackCmd::Homology { rack: spec, dmax, integral } => {
            let r = parse_rack_spec(spec)?;
            let dims = rack::rack_homology_dims(&r, *dmax, SignConvention::Standard, b)?;
            let m = r.orbit_count();
            let mut csv = String::from("d,dim_Hd,expected_m_pow_d\n");
            let mut rows = Vec::new();
            for (d, &h) in dims.iter().enumerate() {
                let e = m.pow(d as u32);
                writeln!(csv, "{d},{h},{e}").unwrap();
                rows.push(json!({ "d": d, "dim_Hd": h, "expected_m_pow_d": e }));
            }
            let integral = if *integral { Some(rack::rack_homology_integral(&r, *dmax)?) } else { None };
            let mut rep = Report::new(json!({ "rack_size": r.size(), "orbit_count": m, "dims": rows, "integral": integral }))
                .csv(csv);
            for (d, &h) in dims.iter().enumerate() {
                rep.assert(h == m.pow(d as u32), format!("dim H_{d} = m^{d}"));
            }
            Ok(rep)
        }
        RackCmd::CoproductCheck { rack: spec, n_max } => {
            let r = parse_rack_spec(spec)?;
            let work = (r.size() as u128).saturating_pow(*n_max as u32);
            if work > b {
                return Err(Failure::Core(Error::Budget { what: "coproduct check", needed: work, limit: b }));
            }
            let ok = rack::coassociativity_holds(&r, *n_max);
            let mut rep = Report::new(json!({ "rack_size": r.size(), "n_max": n_max, "coassociative": ok }))
                .csv(format!("n_max,coassociative\n{n_max},{ok}\n"));
            rep.assert(ok, "shuffle coproduct is coassociative");
            Ok(rep)
        }
    }
}

fn stab_window(n_max: usize, stab: Option<usize>) -> usize {
    stab.unwrap_or(12).max(n_max)
}

fn run_koszul(cli: &Cli, cmd: &KoszulCmd) -> Out {
    let b = budget(cli, koszul::DEFAULT_KOSZUL_BUDGET)?;
    let ring_budget = budget(cli, hurwitz::DEFAULT_BUDGET)?;
    match cmd {
        KoszulCmd::Ahom { m, d_max } => {
            let gs = parse_group_spec(&m.g.group)?;
            let r = ring(&gs, m.n_max, ring_budget)?;
            let md = module(&r, &m.module)?;
            let table = koszul::a_homology_table(&md, m.n_max, *d_max, b)?;
            let mut csv = String::from("n,d,dim\n");
            for (n, row) in table.iter().enumerate() {
                for (d, x) in row.iter().enumerate() {
                    writeln!(csv, "{n},{d},{x}").unwrap();
                }
            }
            let mut rep = Report::new(json!({ "module": md.name(), "dims": md.dims(), "h": table })).csv(csv);
            rep.assert(koszul::differential_squares_to_zero(&md, m.n_max, b)?, "d∘d = 0");
            match m.module.as_str() {
                "k" => {
                    let k = gs.class.len();
                    for (n, row) in table.iter().enumerate() {
                        for (d, &x) in row.iter().enumerate() {
                            let e = if n == d { k.pow(n as u32) } else { 0 };
                            rep.assert(x == e, format!("H^A_{{{n},{d}}}(k) = {e}"));
                        }
                    }
                }
                "R" => {
                    for (n, row) in table.iter().enumerate().skip(1) {
                        rep.assert(row[0] == 0, format!("H^A_{{{n},0}}(R) = 0"));
                    }
                }
                _ => {}
            }
            Ok(rep)
        }
        KoszulCmd::Regularity { m, d_max, d_cap, stab_n_max } => {
            let gs = parse_group_spec(&m.g.group)?;
            let r = ring(&gs, stab_window(m.n_max, *stab_n_max), ring_budget)?;
            let spec = stabilizer(&r, *d_cap)?;
            let md = module(&r, &m.module)?;
            let report = koszul::regularity_check(&md, &spec, *d_max, m.n_max, m.module == "R", b)?;
            let mut csv = String::from("bound,d,lhs,rhs,holds\n");
            for c in &report.bounds_ok {
                let show = |x: Option<String>| x.unwrap_or_else(|| "-inf".into());
                writeln!(
                    csv,
                    "\"{}\",{},{},{},{}",
                    c.bound,
                    c.d.map_or(String::new(), |d| d.to_string()),
                    show(c.lhs.map(|x| x.to_string())),
                    show(c.rhs.map(|x| x.to_string())),
                    c.holds
                )
                .unwrap();
            }
            let mut rep = Report::new(serde_json::to_value(&report).expect("serializable")).csv(csv);
            for c in &report.bounds_ok {
                rep.assert(c.holds, format!("{} (d = {:?})", c.bound, c.d));
            }
            Ok(rep)
        }
        KoszulCmd::Cofiber { m, d_cap, stab_n_max } => {
            let gs = parse_group_spec(&m.g.group)?;
            let r = ring(&gs, stab_window(m.n_max, *stab_n_max), ring_budget)?;
            let spec = stabilizer(&r, *d_cap)?;
            let md = module(&r, &m.module)?;
            let report = koszul::regularity_check(&md, &spec, 1, m.n_max, false, b)?;
            let cof = koszul::cofiber_degrees(&md, &spec, m.n_max)?;
            let show = |x: Option<usize>| x.map_or("-inf".to_string(), |v| v.to_string());
            let csv = format!(
                "deg0,deg1,h0,h1,N_0\n{},{},{},{},{}\n",
                show(cof.deg0.value),
                show(cof.deg1.value),
                show(report.h[0]),
                show(report.h[1]),
                spec.n0
            );
            let bounds: Vec<_> = report.bounds_ok.iter().filter(|c| c.d.is_none()).cloned().collect();
            let mut rep = Report::new(json!({
                "module": md.name(),
                "n_max": m.n_max,
                "N_0": spec.n0,
                "N": spec.n_grading,
                "cofiber": cof,
                "h": report.h,
                "bounds": bounds,
            }))
            .csv(csv);
            for c in &bounds {
                rep.assert(c.holds, c.bound.clone());
            }
            Ok(rep)
        }
    }
}

fn field_json(f: &Field) -> Value {
    json!({ "p": f.characteristic(), "k": f.degree(), "q": f.order(), "modulus": f.tower(), "epsilon": f.smallest_nonsquare() })
}

fn run_ff(cli: &Cli, cmd: &FfCmd) -> Out {
    let b = budget(cli, ff::DEFAULT_FF_BUDGET)?;
    match cmd {
        FfCmd::SquarefreeCount { q, n } => {
            positive("n", *n)?;
            let f = Field::of_order(*q)?;
            let count = ff::enumerate_monic_squarefree(&f, *n, b)?.len() as u64;
            let expect = if *n == 1 { *q } else { q.pow(*n as u32) - q.pow(*n as u32 - 1) };
            let mut rep = Report::new(json!({ "field": field_json(&f), "n": n, "count": count, "expected": expect }))
                .csv(format!("q,n,count,expected\n{q},{n},{count},{expect}\n"));
            rep.assert(count == expect, format!("count {count} = {expect}"));
            Ok(rep)
        }
        FfCmd::ClStats { q, n, a, allow_bad, no_cross_check } => {
            if n.is_empty() {
                return Err(Failure::Core(Error::invalid("--n needs at least one degree")));
            }
            let a = parse_abelian_spec(a)?;
            let opts = ClOptions { allow_bad: *allow_bad, cross_check: !no_cross_check, budget: b };
            let sweep = ff::density_sweep(*q, n, &a, &opts)?;
            let mut csv = String::from(
                "q,n,A,S_n_size,sum_mA,average,density_A,mu_reference,abs_average_minus_one,abs_density_minus_mu\n",
            );
            let mut rep_failures = Vec::new();
            for r in &sweep.reports {
                writeln!(
                    csv,
                    "{},{},{},{},{},{},{},{},{},{}",
                    r.q, r.n, r.a, r.s_n_size, r.sum_m_a, r.average, r.density_a, r.mu_reference,
                    r.abs_average_minus_one, r.abs_density_minus_mu
                )
                .unwrap();
                let expect = 2 * (q.pow(r.n as u32) - q.pow(r.n as u32 - 1));
                if r.s_n_size != expect {
                    rep_failures.push(format!("|S_{}| = {expect}", r.n));
                }
                if r.zeta_mismatches != 0 {
                    rep_failures.push(format!("{} class-number mismatches at n = {}", r.zeta_mismatches, r.n));
                }
            }
            let mut rep = Report::new(serde_json::to_value(&sweep).expect("serializable")).csv(csv);
            rep.failures = rep_failures;
            Ok(rep)
        }
        FfCmd::CurveDump { q, n, a, sample: k, allow_bad } => {
            let a = parse_abelian_spec(a)?;
            let opts = ClOptions { allow_bad: *allow_bad, cross_check: true, budget: b };
            let (report, mut records) = ff::cl_statistics(*q, *n, &a, &opts)?;
            if let Some(k) = k {
                let mut rng = rand::rngs::StdRng::seed_from_u64(cli.seed);
                let mut idx = sample(&mut rng, records.len(), (*k).min(records.len())).into_vec();
                idx.sort_unstable();
                records = idx.into_iter().map(|i| records[i].clone()).collect();
            }
            let mut rep = Report::new(json!({ "summary": report, "curves": records })).csv(ff::curve_records_csv(&records));
            for r in &records {
                rep.assert(r.zeta_agrees != Some(false), format!("class number of {} (twist {})", r.f, r.twist));
            }
            Ok(rep)
        }
    }
}

fn run_group(cmd: &GroupCmd) -> Out {
    match cmd {
        GroupCmd::Info { g } => {
            let gs = parse_group_spec(&g.group)?;
            let subs = subgroups(&gs.group)?;
            let class: Vec<String> = gs.class.elements().iter().map(|&x| gs.group.label(x)).collect();
            let json = json!({
                "order": gs.group.order(),
                "abelian": gs.group.is_abelian(),
                "class": class,
                "class_size": gs.class.len(),
                "class_element_order": gs.class.common_order(),
                "subgroup_count": subs.len(),
                "admissible": is_admissible(&gs.group, &gs.class),
                "nonsplitting": is_nonsplitting(&gs.group, &gs.class),
            });
            let csv = format!(
                "order,class_size,class_element_order,subgroup_count\n{},{},{},{}\n",
                gs.group.order(),
                gs.class.len(),
                gs.class.common_order(),
                subs.len()
            );
            Ok(Report::new(json).csv(csv))
        }
        GroupCmd::Check { g } => {
            let gs = parse_group_spec(&g.group)?;
            let adm = is_admissible(&gs.group, &gs.class);
            let ns = is_nonsplitting(&gs.group, &gs.class);
            let mut rep = Report::new(json!({ "admissible": adm, "nonsplitting": ns }))
                .csv(format!("admissible,nonsplitting\n{adm},{ns}\n"));
            rep.assert(adm, "c is a single class generating G");
            rep.assert(ns, "c is non-splitting");
            Ok(rep)
        }
    }
}

/// The resolved configuration embedded in every report. The thread count is
/// left out so that reports are byte-identical across thread counts.
fn config_json(cli: &Cli, args: &[String]) -> Value {
    let budget_env = std::env::var(BUDGET_ENV).ok();
    json!({
        "command": args.iter().skip(1).cloned().collect::<Vec<_>>(),
        "seed": cli.seed,
        "check": cli.check,
        "format": cli.format,
        "budget": cli.budget.map(|b| b.to_string()),
        "budget_env": budget_env,
        "version": env!("CARGO_PKG_VERSION"),
    })
}

fn strip_threads(args: Vec<String>) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for a in args {
        if skip {
            skip = false;
            continue;
        }
        if a == "--threads" {
            skip = true;
            continue;
        }
        if a.starts_with("--threads=") {
            continue;
        }
        out.push(a);
    }
    out
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: cannot start thread pool: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match &cli.command {
        Command::Hurwitz(c) => run_hurwitz(&cli, c),
        Command::Rack(c) => run_rack(&cli, c),
        Command::Koszul(c) => run_koszul(&cli, c),
        Command::Ff(c) => run_ff(&cli, c),
        Command::Group(c) => run_group(c),
    };
    let result = result.and_then(|rep| emit(&cli, &strip_threads(args), rep));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Budget { .. } => 3,
                Error::Contract(_) => 1,
                _ => 2,
            })
        }
        Err(Failure::Check(fails)) => {
            for f in fails {
                eprintln!("check failed: {f}");
            }
            ExitCode::from(4)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn emit(cli: &Cli, args: &[String], rep: Report) -> std::result::Result<(), Failure> {
    let config = config_json(cli, args);
    let body = match (cli.format, &rep.csv) {
        (Format::Csv, Some(csv)) => format!("# config: {config}\n{csv}"),
        (Format::Csv, None) => return Err(Failure::Core(Error::invalid("this command has no CSV output"))),
        (Format::Json, _) => {
            let mut v = json!({ "config": config, "report": rep.json });
            if cli.check {
                v["check"] = json!({ "passed": rep.failures.is_empty(), "failures": rep.failures });
            }
            serde_json::to_string_pretty(&v).expect("serializable") + "\n"
        }
    };
    match &cli.output {
        Some(path) => std::fs::write(path, body).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes()).map_err(|e| Failure::Io(e.to_string()))?;
        }
    }
    if cli.check && !rep.failures.is_empty() {
        return Err(Failure::Check(rep.failures));
    }
    Ok(())
}
