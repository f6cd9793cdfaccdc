//! Command-line front end: one subcommand family per library area, with
//! deterministic JSON/CSV output, SVG heatmaps for grids, and an `--expect`
//! hook that turns any run into a regression check.
//!
//! Exit codes: 0 success, 1 validation error, 2 size guard exceeded,
//! 3 mismatch against an `--expect` value.

mod emit;

use std::fs;
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};

use emit::{csv_row, fmt_float, render_json, svg_heatmap, J};
use hforge_core::clifford::{zauner, zauner_expected_dims};
use hforge_core::exactmath::CycloNum;
use hforge_core::finitefield::FField;
use hforge_core::gunitary::{embed_roundtrip, GLpMat, GUnitary};
use hforge_core::lindep::{
    exhaustive_search, incidence_counts, normals_and_orthogonality, orbit_grouping,
    predicted_sets, write_depsets_jsonl, EigLabel, OrbitContext,
};
use hforge_core::mubcycler::{
    balanced_orbit_count, balanced_wigner, cycler_canonical, cycler_eigenvector,
    enumerate_cyclers, verify_balanced, Classifier, GlType,
};
use hforge_core::sictools::{
    dependent_subset_count, is_sic, kt_measure, projectors, sic3_family, sic_search,
    sic_search_zauner,
};
use hforge_core::Error as CoreError;

#[derive(Parser)]
#[command(name = "hforge", version, about = "Weyl-Heisenberg orbits, SIC tools, MUBs, and Galois-unitary machinery")]
struct Cli {
    /// Write the summary JSON here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format for the summary
    #[arg(long, global = true, default_value = "json", value_parser = ["json", "csv"])]
    format: String,
    /// Compare the command's headline value against this and exit 3 on mismatch
    #[arg(long, global = true)]
    expect: Option<f64>,
    /// Worker threads (default: HFORGE_THREADS or all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Finite-field inspection
    Field {
        #[command(subcommand)]
        cmd: FieldCmd,
    },
    /// Mutually unbiased bases
    Mub {
        #[command(subcommand)]
        cmd: MubCmd,
    },
    /// The order-3 symplectic unitary
    Zauner {
        #[command(subcommand)]
        cmd: ZaunerCmd,
    },
    /// Linear dependencies in Weyl-Heisenberg orbits
    Lindep {
        #[command(subcommand)]
        cmd: LindepCmd,
    },
    /// SIC verification and search
    Sic {
        #[command(subcommand)]
        cmd: SicCmd,
    },
    /// Galois-unitary operators
    Gu {
        #[command(subcommand)]
        cmd: GuCmd,
    },
    /// MUB-cycler pipeline
    Cycler {
        #[command(subcommand)]
        cmd: CyclerCmd,
    },
}

#[derive(Args)]
struct FieldArgs {
    #[arg(long)]
    p: u32,
    #[arg(long, default_value_t = 1)]
    n: u32,
}

#[derive(Subcommand)]
enum FieldCmd {
    /// Modulus, primitive element, and basic structure of F_{p^n}
    Info(FieldArgs),
}

#[derive(Subcommand)]
enum MubCmd {
    /// Build the standard complete MUB set and verify unbiasedness exactly
    Build {
        #[command(flatten)]
        field: FieldArgs,
        /// Skip the exact pairwise overlap verification
        #[arg(long)]
        skip_exact_check: bool,
    },
}

#[derive(Subcommand)]
enum ZaunerCmd {
    /// Eigenspace dimensions of the order-3 unitary
    Spectrum {
        #[arg(long)]
        d: u32,
    },
}

#[derive(Args)]
struct LindepArgs {
    #[arg(long)]
    d: u32,
    /// H1, Heta, or Heta2
    #[arg(long, default_value = "H1")]
    eigenspace: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Relative singular-value tolerance for the dependency decision
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Allow the d = 8 scan (~4.4e9 subsets)
    #[arg(long)]
    long_run: bool,
}

#[derive(Subcommand)]
enum LindepCmd {
    /// Exhaustive scan for dependent d-subsets
    Search {
        #[command(flatten)]
        args: LindepArgs,
        /// Stream dependent sets to this JSON-lines file
        #[arg(long)]
        sets_out: Option<PathBuf>,
    },
    /// Combinatorially predicted dependent sets (each verified numerically)
    Predict {
        #[command(flatten)]
        args: LindepArgs,
    },
    /// Translation-orbit structure of the dependent sets
    Orbits {
        #[command(flatten)]
        args: LindepArgs,
        /// Render the per-point incidence heatmap here
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Hyperplane normals and their orthogonality structure
    Normals {
        #[command(flatten)]
        args: LindepArgs,
        /// Use a searched fiducial (restricted to the largest eigenspace)
        /// instead of a random eigenvector
        #[arg(long)]
        fiducial: bool,
        #[arg(long, default_value_t = 50)]
        restarts: u32,
    },
}

#[derive(Subcommand)]
enum SicCmd {
    /// The d = 3 one-parameter family at a given θ
    Family {
        #[arg(long)]
        theta: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Verify the SIC overlap property of the family or a searched candidate
    Verify {
        #[arg(long)]
        d: u32,
        /// d = 3 family parameter; otherwise a search is run first
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        restarts: u32,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Frame-potential minimization for a fiducial
    Search {
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        restarts: u32,
        /// Restrict the search to the largest order-3 eigenspace
        #[arg(long)]
        zauner_subspace: bool,
        /// Write the fiducial components here (one "re im" pair per line)
        #[arg(long)]
        fiducial_out: Option<PathBuf>,
    },
    /// The orthogonality measure K_t on d² projectors
    Kt {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        t: f64,
        /// d = 3 family parameter; otherwise a search is run first
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        restarts: u32,
    },
}

#[derive(Args)]
struct GuArgs {
    #[arg(long)]
    p: u32,
    #[arg(long, default_value_t = 1)]
    n: u32,
}

#[derive(Subcommand)]
enum GuCmd {
    /// Compose two Galois-unitaries and compare with the product element
    Compose {
        #[command(flatten)]
        field: GuArgs,
        /// entries a,b,c,d over the prime subfield
        #[arg(long)]
        g1: String,
        #[arg(long)]
        g2: String,
    },
    /// Apply a Galois-unitary to a rational vector
    Apply {
        #[command(flatten)]
        field: GuArgs,
        #[arg(long)]
        g: String,
        /// comma-separated rational components, e.g. "1,0,0,1/2,0"
        #[arg(long)]
        vec: String,
    },
    /// Check the unitary-embedding simulation against the direct action
    Embed {
        #[command(flatten)]
        field: GuArgs,
        #[arg(long)]
        g: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        trials: u32,
    },
}

#[derive(Subcommand)]
enum CyclerCmd {
    /// Type, suborder, and cycling decision of one GL_p element
    Classify {
        #[command(flatten)]
        field: GuArgs,
        #[arg(long)]
        g: String,
    },
    /// Exhaustive count of MUB-cyclers
    Enumerate {
        #[command(flatten)]
        field: GuArgs,
        #[arg(long)]
        long_run: bool,
    },
    /// Exact unit eigenvector of a cycler (canonical cycler by default)
    Eigvec {
        #[command(flatten)]
        field: GuArgs,
        #[arg(long)]
        g: Option<String>,
    },
    /// Balancedness of the cycler eigenvector across all MUBs
    Balanced {
        #[command(flatten)]
        field: GuArgs,
        #[arg(long)]
        g: Option<String>,
    },
    /// Orbit of the balanced state under the extended Clifford group
    Orbit {
        #[command(flatten)]
        field: GuArgs,
        #[arg(long)]
        long_run: bool,
    },
    /// Wigner function of the distinguished balanced state
    Wigner {
        #[command(flatten)]
        field: GuArgs,
        /// SVG heatmap output path
        #[arg(long)]
        svg: Option<PathBuf>,
        /// CSV grid output path
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<CoreError>()
                .is_some_and(|c| matches!(c, CoreError::GuardExceeded(_)))
            {
                2
            } else {
                1
            }
        }
    };
    std::process::exit(code);
}

fn provenance(seed: Option<u64>, tol: Option<f64>) -> J {
    let mut p = J::obj();
    let argv: Vec<String> = std::env::args().collect();
    p.push("command_line", J::s(argv.join(" ")));
    match seed {
        Some(s) => p.push("seed", J::UInt(s)),
        None => p.push("seed", J::Null),
    };
    match tol {
        Some(t) => p.push("tol", J::Float(t)),
        None => p.push("tol", J::Null),
    };
    p.push("threads", J::UInt(rayon::current_num_threads() as u64));
    p.push("version", J::s(env!("CARGO_PKG_VERSION")));
    p
}

fn field(p: u32, n: u32) -> anyhow::Result<Arc<FField>> {
    Ok(FField::new(p, n)?)
}

fn parse_mat(s: &str) -> anyhow::Result<[i64; 4]> {
    let parts: Vec<i64> = s
        .split(',')
        .map(|x| x.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .context("matrix entries must be integers a,b,c,d")?;
    if parts.len() != 4 {
        return Err(anyhow!("expected 4 matrix entries, got {}", parts.len()));
    }
    Ok([parts[0], parts[1], parts[2], parts[3]])
}

fn parse_rational_vec(s: &str, n: u32, len: usize) -> anyhow::Result<Vec<CycloNum>> {
    let comps: Vec<&str> = s.split(',').collect();
    if comps.len() != len {
        return Err(anyhow!("expected {len} components, got {}", comps.len()));
    }
    comps
        .iter()
        .map(|c| {
            let c = c.trim();
            let (num, den) = match c.split_once('/') {
                Some((a, b)) => (a.parse::<i64>()?, b.parse::<i64>()?),
                None => (c.parse::<i64>()?, 1),
            };
            Ok(CycloNum::from_rational(n, hforge_core::exactmath::rat(num, den)))
        })
        .collect()
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    let threads = cli
        .threads
        .or_else(|| {
            std::env::var("HFORGE_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(0);
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .ok();
    }
    let (summary, headline) = dispatch(&cli)?;
    let text = match cli.format.as_str() {
        "json" => render_json(&summary),
        _ => json_to_csv(&summary),
    };
    match &cli.out {
        Some(path) => fs::write(path, &text).with_context(|| format!("writing {path:?}"))?,
        None => print!("{text}"),
    }
    if let Some(expect) = cli.expect {
        let ok = match headline {
            Some(v) => (v - expect).abs() <= 1e-9 * expect.abs().max(1.0),
            None => false,
        };
        if !ok {
            eprintln!(
                "expect mismatch: wanted {}, computed {}",
                fmt_float(expect),
                headline.map_or("none".into(), fmt_float)
            );
            return Ok(3);
        }
    }
    Ok(0)
}

/// Flattens the summary object to key,value CSV rows (arrays as joined cells).
fn json_to_csv(v: &J) -> String {
    fn scalar(v: &J) -> String {
        match v {
            J::Null => "".into(),
            J::Bool(b) => b.to_string(),
            J::Int(i) => i.to_string(),
            J::UInt(u) => u.to_string(),
            J::Float(f) => fmt_float(*f),
            J::Str(s) => s.clone(),
            J::Arr(items) => items.iter().map(scalar).collect::<Vec<_>>().join(";"),
            J::Obj(_) => "<object>".into(),
        }
    }
    fn walk(prefix: &str, v: &J, rows: &mut Vec<String>) {
        match v {
            J::Obj(fields) => {
                for (k, val) in fields {
                    let key = if prefix.is_empty() {
                        k.clone()
                    } else {
                        format!("{prefix}.{k}")
                    };
                    walk(&key, val, rows);
                }
            }
            other => rows.push(csv_row(&[prefix.to_string(), scalar(other)])),
        }
    }
    let mut rows = vec![csv_row(&["key".into(), "value".into()])];
    walk("", v, &mut rows);
    rows.join("\r\n") + "\r\n"
}

fn dispatch(cli: &Cli) -> anyhow::Result<(J, Option<f64>)> {
    match &cli.command {
        Cmd::Field { cmd: FieldCmd::Info(a) } => {
            let f = field(a.p, a.n)?;
            let mut o = J::obj();
            o.push("p", J::UInt(a.p as u64));
            o.push("n", J::UInt(a.n as u64));
            o.push("order", J::UInt(f.order()));
            o.push(
                "modulus",
                J::Arr(f.modulus().iter().map(|&c| J::UInt(c as u64)).collect()),
            );
            o.push("theta", J::s(format!("{}", f.theta())));
            o.push(
                "theta_order",
                J::UInt(f.theta().mul_order().unwrap_or(0)),
            );
            o.push("theta_trace", J::UInt(f.theta().trace() as u64));
            o.push("provenance", provenance(None, None));
            let order = f.order() as f64;
            Ok((o, Some(order)))
        }
        Cmd::Mub { cmd: MubCmd::Build { field: a, skip_exact_check } } => {
            let f = field(a.p, a.n)?;
            let mub = hforge_core::clifford::mub_standard(&f)?;
            let d = mub.d();
            let mut unbiased = true;
            if !skip_exact_check {
                let inv_d = CycloNum::from_rational(4 * a.p, hforge_core::exactmath::rat(1, d as i64));
                let labels = mub.labels();
                'outer: for (i, b1) in labels.iter().enumerate() {
                    let m1 = mub.basis(b1);
                    if !m1.dagger().matmul(m1).is_identity() {
                        unbiased = false;
                        break;
                    }
                    for b2 in labels.iter().skip(i + 1) {
                        let g = m1.dagger().matmul(mub.basis(b2));
                        for r in 0..d {
                            for c in 0..d {
                                if g[(r, c)].abs_sq() != inv_d {
                                    unbiased = false;
                                    break 'outer;
                                }
                            }
                        }
                    }
                }
            }
            let mut o = J::obj();
            o.push("d", J::UInt(d as u64));
            o.push("bases", J::UInt(d as u64 + 1));
            o.push("exact_check", J::Bool(!skip_exact_check));
            o.push("unbiased", J::Bool(unbiased));
            o.push("provenance", provenance(None, None));
            if !unbiased {
                return Err(anyhow!("constructed bases fail the exact unbiasedness check"));
            }
            Ok((o, Some(d as f64 + 1.0)))
        }
        Cmd::Zauner { cmd: ZaunerCmd::Spectrum { d } } => {
            let z = zauner(*d)?;
            let dims = z.dims();
            let expect = zauner_expected_dims(*d);
            let mut o = J::obj();
            o.push("d", J::UInt(*d as u64));
            o.push(
                "dims",
                J::Arr(vec![
                    J::UInt(dims.0 as u64),
                    J::UInt(dims.1 as u64),
                    J::UInt(dims.2 as u64),
                ]),
            );
            o.push(
                "expected",
                J::Arr(vec![
                    J::UInt(expect.0 as u64),
                    J::UInt(expect.1 as u64),
                    J::UInt(expect.2 as u64),
                ]),
            );
            o.push("matches_table", J::Bool(dims == expect));
            o.push("provenance", provenance(None, None));
            Ok((o, Some(dims.0 as f64)))
        }
        Cmd::Lindep { cmd } => lindep_cmd(cmd),
        Cmd::Sic { cmd } => sic_cmd(cmd),
        Cmd::Gu { cmd } => gu_cmd(cmd),
        Cmd::Cycler { cmd } => cycler_cmd(cmd),
    }
}

fn lindep_ctx(a: &LindepArgs) -> anyhow::Result<OrbitContext> {
    let label = EigLabel::parse(&a.eigenspace)?;
    Ok(OrbitContext::random(a.d, label, a.seed)?)
}

fn lindep_cmd(cmd: &LindepCmd) -> anyhow::Result<(J, Option<f64>)> {
    match cmd {
        LindepCmd::Search { args, sets_out } => {
            let ctx = lindep_ctx(args)?;
            let sets = exhaustive_search(&ctx, args.tol, args.long_run)?;
            if let Some(path) = sets_out {
                let fh = fs::File::create(path)?;
                write_depsets_jsonl(std::io::BufWriter::new(fh), &sets, args.d)?;
            }
            let mut o = J::obj();
            o.push("d", J::UInt(args.d as u64));
            o.push("eigenspace", J::s(ctx.label.to_string()));
            o.push("count", J::UInt(sets.len() as u64));
            let rank_d1 = sets.iter().filter(|s| s.rank == args.d as usize - 1).count();
            o.push("rank_d_minus_1", J::UInt(rank_d1 as u64));
            o.push("z_invariant_sets", J::UInt(sets.iter().filter(|s| s.z_invariant).count() as u64));
            o.push("provenance", provenance(Some(args.seed), Some(args.tol)));
            Ok((o, Some(sets.len() as f64)))
        }
        LindepCmd::Predict { args } => {
            let ctx = lindep_ctx(args)?;
            let sets = predicted_sets(&ctx, args.tol)?;
            let mut o = J::obj();
            o.push("d", J::UInt(args.d as u64));
            o.push("eigenspace", J::s(ctx.label.to_string()));
            o.push("count", J::UInt(sets.len() as u64));
            o.push("all_verified_rank_deficient", J::Bool(true));
            o.push("provenance", provenance(Some(args.seed), Some(args.tol)));
            Ok((o, Some(sets.len() as f64)))
        }
        LindepCmd::Orbits { args, svg } => {
            let ctx = lindep_ctx(args)?;
            let sets = exhaustive_search(&ctx, args.tol, args.long_run)?;
            let orbits = orbit_grouping(&sets, args.d);
            let mut by_len: Vec<(usize, usize)> = vec![];
            for orb in &orbits {
                match by_len.iter_mut().find(|(l, _)| *l == orb.length) {
                    Some((_, c)) => *c += 1,
                    None => by_len.push((orb.length, 1)),
                }
            }
            by_len.sort();
            let z = orbits.iter().filter(|o| o.z_invariant).count();
            let m_excl = orbits.iter().filter(|o| o.m_invariant && !o.z_invariant).count();
            let inc = incidence_counts(&sets, args.d);
            if let Some(path) = svg {
                let grid: Vec<f64> = inc.iter().map(|&c| c as f64).collect();
                fs::write(path, svg_heatmap(&grid, args.d as usize, args.d as usize, "dependent-set incidence"))?;
            }
            let mut o = J::obj();
            o.push("d", J::UInt(args.d as u64));
            o.push("eigenspace", J::s(ctx.label.to_string()));
            o.push("set_count", J::UInt(sets.len() as u64));
            o.push("orbit_count", J::UInt(orbits.len() as u64));
            o.push(
                "orbits_by_length",
                J::Arr(
                    by_len
                        .iter()
                        .map(|(l, c)| {
                            let mut e = J::obj();
                            e.push("length", J::UInt(*l as u64));
                            e.push("orbits", J::UInt(*c as u64));
                            e
                        })
                        .collect(),
                ),
            );
            o.push("z_invariant_orbits", J::UInt(z as u64));
            o.push("m_invariant_only_orbits", J::UInt(m_excl as u64));
            let uniform = inc.iter().all(|&c| c == inc[0]);
            o.push("incidence_uniform", J::Bool(uniform));
            o.push("incidence_per_point", J::UInt(inc[0] as u64));
            o.push("provenance", provenance(Some(args.seed), Some(args.tol)));
            Ok((o, Some(orbits.len() as f64)))
        }
        LindepCmd::Normals { args, fiducial, restarts } => {
            let ctx = if *fiducial {
                let out = sic_search_zauner(args.d, args.seed, *restarts)?;
                let f = out
                    .fiducial
                    .ok_or_else(|| anyhow!("fiducial search failed (objective {})", out.objective))?;
                OrbitContext::from_vector(args.d, &f)?
            } else {
                lindep_ctx(args)?
            };
            let sets = exhaustive_search(&ctx, args.tol, args.long_run)?;
            let rep = normals_and_orthogonality(&sets, args.d, 1e-8);
            let mut o = J::obj();
            o.push("d", J::UInt(args.d as u64));
            o.push("eigenspace", J::s(ctx.label.to_string()));
            o.push("fiducial", J::Bool(*fiducial));
            o.push("set_count", J::UInt(sets.len() as u64));
            o.push("hyperplanes", J::UInt(rep.hyperplanes as u64));
            o.push("orthogonal_pairs", J::UInt(rep.orthogonal_pairs as u64));
            o.push("orthogonal_triples", J::UInt(rep.orthogonal_triples as u64));
            o.push("orthogonal_quadruples", J::UInt(rep.orthogonal_quadruples as u64));
            if let Some(mub) = rep.complete_mub_d3 {
                o.push("normals_form_complete_mub", J::Bool(mub));
            }
            o.push("provenance", provenance(Some(args.seed), Some(args.tol)));
            Ok((o, Some(rep.orthogonal_triples as f64)))
        }
    }
}

fn sic_cmd(cmd: &SicCmd) -> anyhow::Result<(J, Option<f64>)> {
    match cmd {
        SicCmd::Family { theta, tol } => {
            let c = sic3_family(*theta);
            let ok = is_sic(&c, *tol)?;
            let deps = dependent_subset_count(&c, *tol);
            let mut o = J::obj();
            o.push("theta", J::Float(*theta));
            o.push("is_sic", J::Bool(ok));
            o.push("dependent_triples", J::UInt(deps as u64));
            o.push("provenance", provenance(None, Some(*tol)));
            Ok((o, Some(deps as f64)))
        }
        SicCmd::Verify { d, theta, seed, restarts, tol } => {
            let (candidate, how) = match theta {
                Some(t) if *d == 3 => (sic3_family(*t), format!("family theta={t}")),
                _ => {
                    let out = sic_search(*d, *seed, *restarts);
                    let f = out.fiducial.ok_or_else(|| {
                        anyhow!("search failed (objective {})", fmt_float(out.objective))
                    })?;
                    (
                        hforge_core::sictools::SicCandidate::from_fiducial(*d, &f),
                        "searched fiducial orbit".to_string(),
                    )
                }
            };
            let ok = is_sic(&candidate, (*tol).max(1e-5))?;
            let mut o = J::obj();
            o.push("d", J::UInt(*d as u64));
            o.push("source", J::s(how));
            o.push("is_sic", J::Bool(ok));
            o.push("provenance", provenance(Some(*seed), Some(*tol)));
            Ok((o, Some(if ok { 1.0 } else { 0.0 })))
        }
        SicCmd::Search { d, seed, restarts, zauner_subspace, fiducial_out } => {
            let out = if *zauner_subspace {
                sic_search_zauner(*d, *seed, *restarts)?
            } else {
                sic_search(*d, *seed, *restarts)
            };
            if let (Some(path), Some(f)) = (fiducial_out, &out.fiducial) {
                let mut text = String::new();
                for c in f {
                    text.push_str(&format!("{} {}\n", fmt_float(c.re), fmt_float(c.im)));
                }
                fs::write(path, text)?;
            }
            let mut o = J::obj();
            o.push("d", J::UInt(*d as u64));
            o.push("objective", J::Float(out.objective));
            o.push("target", J::Float(out.target));
            o.push("gap", J::Float(out.objective - out.target));
            o.push("found", J::Bool(out.fiducial.is_some()));
            o.push("winning_restart", J::UInt(out.winning_restart as u64));
            o.push("restarts", J::UInt(*restarts as u64));
            o.push("zauner_subspace", J::Bool(*zauner_subspace));
            o.push("provenance", provenance(Some(*seed), None));
            Ok((o, Some(out.objective)))
        }
        SicCmd::Kt { d, t, theta, seed, restarts } => {
            let candidate = match theta {
                Some(th) if *d == 3 => sic3_family(*th),
                _ => {
                    let out = sic_search(*d, *seed, *restarts);
                    let f = out.fiducial.ok_or_else(|| {
                        anyhow!("search failed (objective {})", fmt_float(out.objective))
                    })?;
                    hforge_core::sictools::SicCandidate::from_fiducial(*d, &f)
                }
            };
            let ops = projectors(&candidate);
            let rep = kt_measure(&ops, *t, 1e-7)?;
            let mut o = J::obj();
            o.push("d", J::UInt(*d as u64));
            o.push("t", J::Float(rep.t));
            o.push("value", J::Float(rep.value));
            o.push("bound", J::Float(rep.bound));
            o.push("saturated", J::Bool(rep.saturated));
            o.push("provenance", provenance(Some(*seed), None));
            Ok((o, Some(rep.value)))
        }
    }
}

fn gu_cmd(cmd: &GuCmd) -> anyhow::Result<(J, Option<f64>)> {
    match cmd {
        GuCmd::Compose { field: fa, g1, g2 } => {
            let f = field(fa.p, fa.n)?;
            let g1 = GLpMat::from_ints(&f, parse_mat(g1)?)?;
            let g2 = GLpMat::from_ints(&f, parse_mat(g2)?)?;
            let composed = GUnitary::new(&g1)?.compose(&GUnitary::new(&g2)?);
            let direct = GUnitary::new(&g1.matmul(&g2))?;
            let relation = if composed == direct {
                "equal"
            } else if composed.usym == direct.usym.neg() && composed.gal == direct.gal {
                "negated"
            } else {
                "mismatch"
            };
            let mut o = J::obj();
            o.push("p", J::UInt(fa.p as u64));
            o.push("n", J::UInt(fa.n as u64));
            o.push("relation", J::s(relation));
            o.push("delta_product", J::UInt(composed.delta() as u64));
            o.push("provenance", provenance(None, None));
            let headline = match relation {
                "equal" => 1.0,
                "negated" => 0.5,
                _ => 0.0,
            };
            if relation == "mismatch" {
                return Err(anyhow!("composition disagrees with the product element"));
            }
            Ok((o, Some(headline)))
        }
        GuCmd::Apply { field: fa, g, vec } => {
            let f = field(fa.p, fa.n)?;
            let g = GLpMat::from_ints(&f, parse_mat(g)?)?;
            let u = GUnitary::new(&g)?;
            let v = parse_rational_vec(vec, 4 * fa.p, f.order() as usize)?;
            let w = u.apply(&v);
            let mut o = J::obj();
            o.push("p", J::UInt(fa.p as u64));
            o.push("n", J::UInt(fa.n as u64));
            o.push("delta", J::UInt(u.delta() as u64));
            o.push(
                "result_exact",
                J::Arr(w.iter().map(|c| J::s(format!("{c}"))).collect()),
            );
            o.push(
                "result_float",
                J::Arr(
                    w.iter()
                        .flat_map(|c| {
                            let z = c.to_c64();
                            [J::Float(z.re), J::Float(z.im)]
                        })
                        .collect(),
                ),
            );
            o.push("provenance", provenance(None, None));
            Ok((o, None))
        }
        GuCmd::Embed { field: fa, g, seed, trials } => {
            let f = field(fa.p, fa.n)?;
            let g = GLpMat::from_ints(&f, parse_mat(g)?)?;
            let u = GUnitary::new(&g)?;
            let mut all_equal = true;
            for v in hforge_core::gunitary::random_omega_vectors(&f, *seed, *trials as usize) {
                if embed_roundtrip(&u, &v)? != u.apply(&v) {
                    all_equal = false;
                }
            }
            let mut o = J::obj();
            o.push("p", J::UInt(fa.p as u64));
            o.push("n", J::UInt(fa.n as u64));
            o.push("trials", J::UInt(*trials as u64));
            o.push("simulation_matches", J::Bool(all_equal));
            o.push("provenance", provenance(Some(*seed), None));
            Ok((o, Some(if all_equal { 1.0 } else { 0.0 })))
        }
    }
}

fn cycler_cmd(cmd: &CyclerCmd) -> anyhow::Result<(J, Option<f64>)> {
    match cmd {
        CyclerCmd::Classify { field: fa, g } => {
            let f = field(fa.p, fa.n)?;
            let g = GLpMat::from_ints(&f, parse_mat(g)?)?;
            let rep = Classifier::new(&f)?.classify(&g);
            let mut o = J::obj();
            o.push("p", J::UInt(fa.p as u64));
            o.push("n", J::UInt(fa.n as u64));
            o.push(
                "type",
                J::UInt(match rep.gl_type {
                    GlType::Type1 => 1,
                    GlType::Type2 => 2,
                    GlType::Type3 => 3,
                }),
            );
            o.push("suborder", J::UInt(rep.suborder));
            match rep.r {
                Some(r) => o.push("r", J::UInt(r)),
                None => o.push("r", J::Null),
            };
            o.push("delta", J::UInt(rep.delta as u64));
            o.push("is_cycler", J::Bool(rep.is_cycler));
            o.push("provenance", provenance(None, None));
            Ok((o, Some(rep.suborder as f64)))
        }
        CyclerCmd::Enumerate { field: fa, long_run } => {
            let f = field(fa.p, fa.n)?;
            let en = enumerate_cyclers(&f, *long_run)?;
            let mut o = J::obj();
            o.push("d", J::UInt(f.order()));
            o.push("glp_order", J::UInt(en.total_glp));
            o.push("cyclers", J::UInt(en.cyclers));
            o.push("provenance", provenance(None, None));
            Ok((o, Some(en.cyclers as f64)))
        }
        CyclerCmd::Eigvec { field: fa, g } => {
            let f = field(fa.p, fa.n)?;
            let g = resolve_cycler(&f, g)?;
            let eig = cycler_eigenvector(&g)?;
            let mut o = J::obj();
            o.push("d", J::UInt(f.order()));
            o.push("s1_dim", J::UInt(eig.s1_dim as u64));
            o.push("parity_sign", J::Int(eig.parity_sign as i64));
            o.push("lambda", J::s(format!("{}", eig.lambda)));
            o.push("mu", J::s(format!("{}", eig.mu)));
            o.push(
                "psi_exact",
                J::Arr(eig.psi.iter().map(|c| J::s(format!("{c}"))).collect()),
            );
            o.push("provenance", provenance(None, None));
            Ok((o, Some(eig.s1_dim as f64)))
        }
        CyclerCmd::Balanced { field: fa, g } => {
            let f = field(fa.p, fa.n)?;
            let g = resolve_cycler(&f, g)?;
            let eig = cycler_eigenvector(&g)?;
            let rep = verify_balanced(&eig.psi, &f)?;
            let mut o = J::obj();
            o.push("d", J::UInt(f.order()));
            o.push("balanced", J::Bool(rep.balanced));
            o.push("min_uncertainty", J::Bool(rep.min_uncertainty));
            o.push(
                "reference_probabilities",
                J::Arr(
                    rep.multisets[0]
                        .iter()
                        .map(|p| J::Float(p.to_c64().re))
                        .collect(),
                ),
            );
            o.push("provenance", provenance(None, None));
            Ok((o, Some(if rep.balanced { 1.0 } else { 0.0 })))
        }
        CyclerCmd::Orbit { field: fa, long_run } => {
            let f = field(fa.p, fa.n)?;
            let oc = balanced_orbit_count(&f, *long_run)?;
            let mut o = J::obj();
            o.push("d", J::UInt(f.order()));
            o.push("count", J::UInt(oc.count));
            o.push("formula_d3_dm1_over_2", J::UInt(oc.formula));
            o.push("matches_formula", J::Bool(oc.count == oc.formula));
            o.push("provenance", provenance(None, None));
            Ok((o, Some(oc.count as f64)))
        }
        CyclerCmd::Wigner { field: fa, svg, csv } => {
            let f = field(fa.p, fa.n)?;
            let w = balanced_wigner(&f)?;
            let d = w.d as usize;
            if let Some(path) = svg {
                // scaled grid d·W as in the reference visualization
                let scaled: Vec<f64> = w.grid.iter().map(|x| x * w.d as f64).collect();
                fs::write(
                    path,
                    svg_heatmap(&scaled, d, d, &format!("scaled Wigner grid, d = {d}")),
                )?;
            }
            if let Some(path) = csv {
                let mut rows = vec![];
                for r in 0..d {
                    rows.push(csv_row(
                        &(0..d)
                            .map(|c| fmt_float(w.grid[r * d + c]))
                            .collect::<Vec<_>>(),
                    ));
                }
                fs::write(path, rows.join("\r\n") + "\r\n")?;
            }
            let mut o = J::obj();
            o.push("d", J::UInt(w.d as u64));
            o.push("sum_is_one", J::Bool(w.sum_is_one));
            o.push("rho_is_rank1_projector", J::Bool(w.rho_is_rank1_projector));
            o.push("rho_invariant_under_cycler", J::Bool(w.rho_invariant_under_cycler));
            o.push("provenance", provenance(None, None));
            let ok = w.sum_is_one && w.rho_is_rank1_projector && w.rho_invariant_under_cycler;
            Ok((o, Some(if ok { 1.0 } else { 0.0 })))
        }
    }
}

fn resolve_cycler(f: &Arc<FField>, g: &Option<String>) -> anyhow::Result<GLpMat> {
    match g {
        Some(s) => Ok(GLpMat::from_ints(f, parse_mat(s)?)?),
        None => {
            let canon = cycler_canonical(f)?;
            canon
                .g0
                .ok_or_else(|| anyhow!("no cycler exists for even extension degree"))
        }
    }
}
