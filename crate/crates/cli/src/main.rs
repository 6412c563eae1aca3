//! Command-line driver for the Rupert passage toolkit.
//!
//! Exit codes: 0 when the requested claim holds (tree verified, region
//! excluded, solution certified, band proof complete), 1 when the
//! mathematics says no (a check failed or nothing was found), 2 on usage or
//! I/O errors. Thread count only changes speed, never verdicts, and no
//! environment variable influences any mathematical result.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use rupert_core::band::{
    build_band_cover, covers_reduced_ranges, verify_band_cover, BandConfig, BandGrid,
};
use rupert_core::builder::{
    build_tree, propose_global_witness, propose_local_witness, BuildConfig, BuildError,
};
use rupert_core::certtree::{
    create_tree, open_tree, GlobalWitness, LocalWitness, Region5, TreeStats, REGION_DENOM,
};
use rupert_core::exact::{rat_int, rat_to_f64, Rat};
use rupert_core::exclusion::{
    global_check_rational, local_check_rational, Exclusion, RegionCenter, FLOAT_SAFETY,
};
use rupert_core::solids::{parse_rational, solid_by_name, Polyhedron};
use rupert_core::solution::{
    certify_solution, export_projection, nieuwland_lower, search_solution, ExportFormat,
    RupertSolution, SearchConfig,
};
use rupert_core::verifier::{truncated_vertex_set, verify_tree, VerifyConfig};

#[derive(Parser)]
#[command(
    name = "rupert",
    version,
    about = "Build, check, and verify certificates about Rupert passages of \
             point-symmetric convex polyhedra"
)]
struct Cli {
    /// Worker threads for parallel phases (0 = one per core). Parallelism
    /// only changes speed, never verdicts.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in solids.
    Solids,

    /// Build a certificate tree excluding Rupert passages over a region.
    BuildTree {
        /// Solid name (see `solids`).
        #[arg(long)]
        solid: String,
        /// Output CSV path; a `.gz` suffix enables gzip compression.
        #[arg(long)]
        out: PathBuf,
        /// Root region as `lo:hi,lo:hi,lo:hi,lo:hi,lo:hi` in grid units
        /// (dimensions theta1, phi1, theta2, phi2, alpha). Defaults to the
        /// solid's full symmetry-reduced search box.
        #[arg(long, allow_hyphen_values = true)]
        region: Option<String>,
        /// Grid denominator the region units refer to.
        #[arg(long, default_value_t = REGION_DENOM)]
        denominator: i64,
        /// Maximum node depth before the build gives up.
        #[arg(long, default_value_t = 40)]
        max_depth: u32,
        /// Extra float headroom demanded when proposing witnesses.
        #[arg(long, default_value_t = 1e-4)]
        margin: f64,
        /// Report progress per level on standard error.
        #[arg(long)]
        progress: bool,
    },

    /// Exactly verify a certificate tree with big-rational arithmetic.
    VerifyTree {
        /// Solid name (see `solids`).
        #[arg(long)]
        solid: String,
        /// Tree CSV path (gzip detected by content).
        #[arg(long)]
        tree: PathBuf,
        /// Region the root must cover, as `lo:hi,...` in grid units.
        /// Defaults to the solid's full symmetry-reduced search box.
        #[arg(long, allow_hyphen_values = true)]
        region: Option<String>,
        /// Grid denominator the region units refer to.
        #[arg(long, default_value_t = REGION_DENOM)]
        denominator: i64,
        /// Check only every k-th leaf: a spot check, never a proof.
        #[arg(long)]
        sample: Option<u64>,
        /// Report progress on standard error.
        #[arg(long)]
        progress: bool,
    },

    /// Exactly check one region against a witness (supplied or proposed).
    CheckRegion {
        /// Solid name (see `solids`).
        #[arg(long)]
        solid: String,
        /// Region as `lo:hi,lo:hi,lo:hi,lo:hi,lo:hi` in grid units.
        #[arg(long, allow_hyphen_values = true)]
        region: String,
        /// Grid denominator the region units refer to.
        #[arg(long, default_value_t = REGION_DENOM)]
        denominator: i64,
        /// Global witness: index into the solid's separating directions.
        #[arg(long, requires = "w")]
        s_index: Option<u32>,
        /// Global witness: unit vector as `wx,wy,wden` with wx^2+wy^2=wden^2.
        #[arg(long, requires = "s_index", allow_hyphen_values = true)]
        w: Option<String>,
        /// Local witness: inner vertex triple as `i,j,k`.
        #[arg(long, requires_all = ["q", "r_numer"])]
        p: Option<String>,
        /// Local witness: outer vertex triple as `i,j,k`.
        #[arg(long, requires = "p")]
        q: Option<String>,
        /// Local witness: inner radius numerator over 1000.
        #[arg(long, requires = "p")]
        r_numer: Option<i64>,
        /// Local witness: sign bit for the outer triple (0 or 1).
        #[arg(long, default_value_t = 0)]
        sigma_q: u8,
    },

    /// Search for a certified Rupert passage of a solid.
    FindSolution {
        /// Solid name (see `solids`).
        #[arg(long)]
        solid: String,
        /// How many best grid cells get refined by coordinate descent.
        #[arg(long, default_value_t = 10)]
        seeds: usize,
        /// Coordinate-descent rounds per seed.
        #[arg(long, default_value_t = 80)]
        descent_iters: u32,
        /// Required float scale estimate before exact certification is tried.
        #[arg(long, default_value_t = 1.0 + 1e-4)]
        min_score: f64,
    },

    /// Certify a passage at five exact angles and bound its Nieuwland ratio.
    Nieuwland {
        /// Solid name (see `solids`).
        #[arg(long)]
        solid: String,
        /// Exact angles `theta1,phi1,theta2,phi2,alpha`, each an integer,
        /// fraction, or decimal (e.g. `0.29,29/100,0.02,2.27,-1.02`).
        #[arg(long, value_delimiter = ',', value_parser = rat_arg,
              allow_hyphen_values = true)]
        angles: Vec<Rat>,
        /// Also certify the passage at this exact scale factor.
        #[arg(long, value_parser = rat_arg, allow_hyphen_values = true)]
        nu: Option<Rat>,
    },

    /// Render one shadow (and optionally the rotated inner copy) of a solid.
    ExportProjection {
        /// Solid name (see `solids`).
        #[arg(long)]
        solid: String,
        /// Viewing angle theta in radians.
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        /// Viewing angle phi in radians.
        #[arg(long, allow_hyphen_values = true)]
        phi: f64,
        /// Also draw the shadow rotated by alpha as the inner layer.
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Svg)]
        format: Format,
        /// Output path; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Prove a whole band of near-diagonal view pairs admits no passage.
    BandProof {
        /// Solid name (see `solids`).
        #[arg(long)]
        solid: String,
        /// Half-width of every grid box, as an exact rational; must be a
        /// whole number of grid units.
        #[arg(long, value_parser = rat_arg, default_value = "6/10000")]
        epsilon_grid: Rat,
        /// Grid denominator the band coordinates are expressed over.
        #[arg(long, default_value_t = REGION_DENOM)]
        denominator: i64,
        /// Extra float headroom demanded when proposing witnesses.
        #[arg(long, default_value_t = FLOAT_SAFETY)]
        margin: f64,
        /// Abort if the cover needs more regions than this.
        #[arg(long, default_value_t = 5000)]
        max_regions: usize,
        /// Report progress on standard error.
        #[arg(long)]
        progress: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Svg,
    Csv,
}

fn rat_arg(s: &str) -> Result<Rat, String> {
    parse_rational(s)
        .ok_or_else(|| format!("expected a rational like 3/5, -2, or 0.25, got `{s}`"))
}

/// Parses `lo:hi,lo:hi,lo:hi,lo:hi,lo:hi` (grid units, inclusive bounds).
fn parse_region(s: &str) -> Result<Region5> {
    let dims: Vec<&str> = s.split(',').collect();
    if dims.len() != 5 {
        bail!("region needs 5 comma-separated ranges (theta1, phi1, theta2, phi2, alpha), got {}",
              dims.len());
    }
    let mut bounds = [(0i64, 0i64); 5];
    for (k, dim) in dims.iter().enumerate() {
        let (lo, hi) = dim
            .split_once(':')
            .with_context(|| format!("range `{dim}` is not of the form lo:hi"))?;
        let lo: i64 = lo.trim().parse().with_context(|| format!("bad integer `{lo}`"))?;
        let hi: i64 = hi.trim().parse().with_context(|| format!("bad integer `{hi}`"))?;
        if lo >= hi {
            bail!("range `{dim}` is empty: lo must be strictly below hi");
        }
        bounds[k] = (lo, hi);
    }
    Ok(Region5::new(bounds))
}

fn parse_triple(s: &str) -> Result<[u32; 3]> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        bail!("triple `{s}` needs exactly 3 comma-separated vertex indices");
    }
    let mut out = [0u32; 3];
    for (k, p) in parts.iter().enumerate() {
        out[k] = p.trim().parse().with_context(|| format!("bad vertex index `{p}`"))?;
    }
    Ok(out)
}

fn parse_w(s: &str) -> Result<(i64, i64, i64)> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        bail!("witness vector `{s}` needs exactly `wx,wy,wden`");
    }
    let n = |p: &str| -> Result<i64> {
        p.trim().parse().with_context(|| format!("bad integer `{p}`"))
    };
    Ok((n(parts[0])?, n(parts[1])?, n(parts[2])?))
}

fn load_solid(name: &str) -> Result<Polyhedron> {
    solid_by_name(name).with_context(|| format!("unknown solid `{name}`; try `rupert solids`"))
}

fn root_or_default(region: &Option<String>, solid: &Polyhedron, denom: i64) -> Result<Region5> {
    match region {
        Some(s) => parse_region(s),
        None => Ok(solid.initial_region_n(denom)),
    }
}

fn print_stats(stats: &TreeStats) {
    println!(
        "nodes: {} total, {} interior, {} global leaves, {} local leaves",
        stats.total, stats.interior, stats.global_leaves, stats.local_leaves
    );
}

fn approx(r: &Rat) -> f64 {
    rat_to_f64(r)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        // Ignore the error when a pool already exists: pool size never
        // affects results.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

/// Exit code for "the mathematics says no" (vs 2 for usage/IO trouble).
fn fail() -> ExitCode {
    ExitCode::from(1)
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Solids => {
            for name in ["noperthedron", "ruperthedron", "octahedron", "cube"] {
                let solid = load_solid(name)?;
                println!("{name:<14} {:>3} vertices", solid.vertices_f64().len());
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::BuildTree { solid, out, region, denominator, max_depth, margin, progress } => {
            let solid = load_solid(&solid)?;
            let root = root_or_default(&region, &solid, denominator)?;
            let config = BuildConfig { denom: denominator, max_depth, margin, progress };
            println!(
                "building certificate tree for {} over {:?} / {}",
                solid.name, root.bounds, denominator
            );
            let start = Instant::now();
            let mut writer = create_tree(&out)
                .with_context(|| format!("cannot create {}", out.display()))?;
            match build_tree(&solid, root, &config, &mut writer) {
                Ok(stats) => {
                    writer.finish().context("flushing tree")?;
                    print_stats(&stats);
                    println!("wrote {} in {:.1?}", out.display(), start.elapsed());
                    Ok(ExitCode::SUCCESS)
                }
                Err(BuildError::Io(e)) => Err(e).context("writing tree"),
                Err(e) => {
                    println!("build failed: {e}");
                    Ok(fail())
                }
            }
        }

        Command::VerifyTree { solid, tree, region, denominator, sample, progress } => {
            let solid = load_solid(&solid)?;
            let target = root_or_default(&region, &solid, denominator)?;
            let config = VerifyConfig {
                denom: denominator,
                sample,
                progress,
                ..VerifyConfig::default()
            };
            println!(
                "verifying {} against {} over {:?} / {}",
                tree.display(),
                solid.name,
                target.bounds,
                denominator
            );
            let start = Instant::now();
            let reader = open_tree(&tree)
                .with_context(|| format!("cannot open {}", tree.display()))?;
            let report = verify_tree(&solid, reader, Some(target), &config)?;

            let stats = &report.integrity.stats;
            print_stats(stats);
            if !report.integrity.is_clean() {
                let shown = report.integrity.violations.iter().take(10);
                for v in shown {
                    println!("integrity violation: {v:?}");
                }
                if report.integrity.truncated {
                    println!("integrity violations truncated; more follow");
                }
            }
            for (id, why) in report.failures.iter().take(10) {
                println!("leaf {id} refused: {why}");
            }
            if report.failures.len() > 10 || report.failures_truncated {
                println!("further leaf failures omitted");
            }
            println!("leaves checked: {} of {}", report.leaves_checked, stats.leaves());
            if report.sampled {
                println!("SPOT CHECK ONLY: sampling skipped leaves, this is not a proof");
            }
            if report.pass() {
                println!(
                    "verdict: {} in {:.1?}",
                    if report.is_proof() { "VERIFIED (exhaustive)" } else { "VERIFIED (sampled)" },
                    start.elapsed()
                );
                Ok(ExitCode::SUCCESS)
            } else {
                println!("verdict: FAILED in {:.1?}", start.elapsed());
                Ok(fail())
            }
        }

        Command::CheckRegion { solid, region, denominator, s_index, w, p, q, r_numer, sigma_q } => {
            let solid = load_solid(&solid)?;
            let region = parse_region(&region)?;
            let center = RegionCenter::<Rat>::from_region_n(&region, denominator);
            let verts = truncated_vertex_set(&solid, 16)?;

            let outcome = if let (Some(s_index), Some(w)) = (s_index, &w) {
                let (wx, wy, wden) = parse_w(w)?;
                let witness = GlobalWitness { s_index, wx, wy, wden };
                println!("checking global witness {witness:?}");
                global_check_rational(&verts, &center, &witness)
            } else if let (Some(p), Some(q), Some(r_numer)) = (&p, &q, r_numer) {
                let witness = LocalWitness {
                    p: parse_triple(p)?,
                    q: parse_triple(q)?,
                    r_numer,
                    sigma_q,
                };
                println!("checking local witness {witness:?}");
                local_check_rational(&solid, &verts, &center, &witness)
            } else {
                // Propose like the builder does: a global witness first, a
                // local one when the global attempt finds nothing or the
                // exact check refuses it.
                let float_center = RegionCenter::<f64>::from_region_n(&region, denominator);
                let global = propose_global_witness(&solid, &float_center).map(|witness| {
                    println!("proposed global witness {witness:?}");
                    global_check_rational(&verts, &center, &witness)
                });
                match global {
                    Some(outcome @ Ok(Exclusion::Excluded)) => outcome,
                    other => {
                        if let Some(outcome) = other {
                            match outcome {
                                Ok(Exclusion::Inconclusive(why)) => {
                                    println!("global witness refused: {why}")
                                }
                                Err(e) => println!("global witness rejected: {e}"),
                                Ok(Exclusion::Excluded) => unreachable!(),
                            }
                        }
                        match propose_local_witness(&solid, &float_center, FLOAT_SAFETY) {
                            Some(witness) => {
                                println!("proposed local witness {witness:?}");
                                local_check_rational(&solid, &verts, &center, &witness)
                            }
                            None => {
                                println!("not excluded: no witness candidate found for this region");
                                return Ok(fail());
                            }
                        }
                    }
                }
            };

            match outcome {
                Ok(Exclusion::Excluded) => {
                    println!("excluded: no Rupert solution exists in this region");
                    Ok(ExitCode::SUCCESS)
                }
                Ok(Exclusion::Inconclusive(why)) => {
                    println!("not excluded: {why}");
                    Ok(fail())
                }
                Err(e) => {
                    println!("witness rejected: {e}");
                    Ok(fail())
                }
            }
        }

        Command::FindSolution { solid, seeds, descent_iters, min_score } => {
            let solid = load_solid(&solid)?;
            let config = SearchConfig { seeds, descent_iters, min_score, ..SearchConfig::default() };
            let start = Instant::now();
            match search_solution(&solid, &config)? {
                Some(sol) => {
                    println!("certified passage of {} found in {:.1?}:", solid.name, start.elapsed());
                    for (name, v) in
                        ["theta1", "phi1", "theta2", "phi2", "alpha"].iter().zip(sol.angles())
                    {
                        println!("  {name:<6} = {v} (~{:.6})", approx(v));
                    }
                    match nieuwland_lower(&solid, &sol)? {
                        Some(bound) => {
                            println!("  nu     > {bound} (~{:.6})", approx(&bound))
                        }
                        None => println!("  nu bound unavailable"),
                    }
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    println!("no certified passage found (searched {seeds} seeds)");
                    Ok(fail())
                }
            }
        }

        Command::Nieuwland { solid, angles, nu } => {
            let solid = load_solid(&solid)?;
            if angles.len() != 5 {
                bail!("--angles needs exactly 5 values (theta1, phi1, theta2, phi2, alpha), got {}",
                      angles.len());
            }
            let mut it = angles.into_iter();
            let angles: [Rat; 5] = std::array::from_fn(|_| it.next().unwrap());
            let sol = RupertSolution::new(angles, nu.clone().unwrap_or_else(|| rat_int(1)));

            if let Some(nu) = &nu {
                if certify_solution(&solid, &sol)? {
                    println!("certified: the {}x copy passes through at these angles", nu);
                } else {
                    println!("not certified at scale {nu}");
                    return Ok(fail());
                }
            }
            match nieuwland_lower(&solid, &sol)? {
                Some(bound) => {
                    println!("nieuwland ratio > {bound} (~{:.6})", approx(&bound));
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    println!("not a passage: containment already fails at scale 1");
                    Ok(fail())
                }
            }
        }

        Command::ExportProjection { solid, theta, phi, alpha, format, out } => {
            let solid = load_solid(&solid)?;
            let format = match format {
                Format::Svg => ExportFormat::Svg,
                Format::Csv => ExportFormat::Csv,
            };
            let rendered = export_projection(&solid, theta, phi, alpha, format);
            match out {
                Some(path) => std::fs::write(&path, rendered)
                    .with_context(|| format!("cannot write {}", path.display()))?,
                None => std::io::stdout().write_all(rendered.as_bytes())?,
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::BandProof { solid, epsilon_grid, denominator, margin, max_regions, progress } => {
            let solid = load_solid(&solid)?;
            let omega = &epsilon_grid * rat_int(denominator);
            if !omega.is_integer() {
                bail!(
                    "--epsilon-grid {epsilon_grid} is not a whole number of grid units over {}",
                    denominator
                );
            }
            let omega_units = i64::try_from(omega.to_integer())
                .ok()
                .filter(|&u| u > 0)
                .context("--epsilon-grid must be positive and fit the grid")?;
            let grid = BandGrid::for_omega(omega_units, denominator);
            println!(
                "band grid: {} x {} boxes of half-width {}/{} around the diagonal",
                grid.theta_steps + 1,
                grid.phi_steps + 1,
                omega_units,
                denominator
            );
            if !covers_reduced_ranges(&grid) {
                bail!("internal error: minimal grid does not cover the reduced ranges");
            }

            let config = BandConfig { margin, max_regions, progress };
            let start = Instant::now();
            let cover = match build_band_cover(&solid, &grid, &config) {
                Ok(cover) => cover,
                Err(e) => {
                    println!("cover construction failed: {e}");
                    return Ok(fail());
                }
            };
            println!("cover built: {} regions in {:.1?}", cover.leaves.len(), start.elapsed());

            let report = verify_band_cover(&solid, &cover, progress)?;
            for (k, why) in report.region_failures.iter().take(10) {
                println!("region {k} refused: {why}");
            }
            if report.coverage_failures > 0 {
                println!(
                    "{} grid boxes not covered, first at index {:?}",
                    report.coverage_failures, report.first_uncovered
                );
            }
            println!(
                "checked {} regions and {} boxes in {:.1?}",
                report.regions_checked,
                report.boxes_checked,
                start.elapsed()
            );
            if report.pass() {
                println!("verdict: BAND EXCLUDED (exhaustive, exact)");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("verdict: FAILED");
                Ok(fail())
            }
        }
    }
}
