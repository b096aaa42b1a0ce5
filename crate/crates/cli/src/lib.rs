//! Command-line front end: every subcommand reads and writes the JSON
//! documents of `rhombus_core::json`.

pub mod render;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use rhombus_core::algebra::AlgebraicNumber;
use rhombus_core::atlas::{atlas_contains, r_atlas, Atlas};
use rhombus_core::json as js;
use rhombus_core::planarity::{conjugate_slope, levitov_surface, thickness, LiftCloud, Profile};
use rhombus_core::presets;
use rhombus_core::slope::{frequencies, grassmann, Slope, SlopeSpec, PLUCKER_TOLERANCE};
use rhombus_core::subperiods::{levitov_condition, max_lift_norm, subperiods, subperiods_numeric, LevitovFailure};
use rhombus_core::systems::{
    classify, classify_codim2, classify_with_pivot, coordinate_names, intersect_lifted_slopes, nfold_system,
    restrict, subperiod_relations,
};
use rhombus_core::tiling::{generate_patch, generate_patch_seeded, Patch, DEFAULT_SEED};

use render::{to_svg, Overlay, RenderOptions};

#[derive(Parser, Debug)]
#[command(name = "rhombus", version, about = "Planar rhombus tilings: slopes, subperiods, patches, planarity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct SlopeArgs {
    /// Slope JSON file.
    #[arg(long, conflicts_with = "preset")]
    slope: Option<PathBuf>,
    /// Built-in slope: golden-octagonal, ammann-beenker, penrose, cubic-dodecagonal.
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Grassmann coordinates, Plücker check and tile frequencies.
    SlopeInfo {
        #[command(flatten)]
        slope: SlopeArgs,
    },
    /// Subperiods of every shadow with their lifts.
    Subperiods {
        #[command(flatten)]
        slope: SlopeArgs,
        /// Search small integer vectors instead of exact kernels (numeric slopes).
        #[arg(long)]
        numeric_heuristic: bool,
        /// Entry bound of the heuristic search.
        #[arg(long, default_value_t = 6)]
        bound: i64,
        /// Relative residual tolerance of the heuristic search.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Subperiod relations plus Plücker relations: reduction and dimension.
    System {
        #[command(flatten)]
        slope: SlopeArgs,
        /// Coordinate normalized to one, e.g. G13 (default G12 when free).
        #[arg(long)]
        pivot: Option<String>,
    },
    /// Chebyshev analysis of the n-fold subperiod system.
    Nfold { n: usize },
    /// Canonical cut-and-project patch.
    Gen {
        #[command(flatten)]
        slope: SlopeArgs,
        /// Patch radius in edge lengths.
        #[arg(long, default_value_t = 15.0, allow_hyphen_values = true)]
        radius: f64,
        /// Seed of the pseudo-random window offset.
        #[arg(long, conflicts_with = "offset")]
        seed: Option<u64>,
        /// Explicit window offset, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        offset: Option<String>,
        /// Patch JSON output (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write an SVG rendering.
        #[arg(long)]
        render: Option<PathBuf>,
        #[arg(long, default_value_t = 40.0, allow_hyphen_values = true)]
        edge_px: f64,
    },
    /// Thickness of a patch lift or point cloud relative to a slope.
    Thickness {
        #[arg(long, conflicts_with = "cloud")]
        patch: Option<PathBuf>,
        /// JSON array of points.
        #[arg(long)]
        cloud: Option<PathBuf>,
        /// Reference slope (default: the patch's own slope).
        #[command(flatten)]
        slope: SlopeArgs,
    },
    /// r-atlas of a patch, optionally tested for containment of another.
    Atlas {
        #[arg(long)]
        patch: PathBuf,
        /// Disk diameter in edge lengths.
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        r: f64,
        /// Patch or atlas JSON whose atlas must be contained in this one.
        #[arg(long)]
        compare: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Point cloud of the surface with shifted subperiod lifts.
    LevitovSurface {
        #[command(flatten)]
        slope: SlopeArgs,
        /// Which other real embedding of the field gives the second plane.
        #[arg(long, default_value_t = 0)]
        conjugate: usize,
        /// Profile along the first subperiod: zero, cubic or staircase.
        #[arg(long, default_value = "cubic")]
        f: String,
        /// Profile along the second subperiod.
        #[arg(long, default_value = "cubic")]
        g: String,
        #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
        radius: f64,
        #[arg(long, default_value_t = 0.25, allow_hyphen_values = true)]
        step: f64,
        /// Shadow periodicity tolerance.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Cloud JSON output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Intersection of the preimages of restricted slopes.
    Intersect {
        #[command(flatten)]
        slope: SlopeArgs,
        /// Index subsets (1-based), e.g. "1,2,3,5;1,4,5,6". Default: every 4-subset.
        #[arg(long)]
        subsets: Option<String>,
    },
    /// SVG rendering of a patch JSON.
    Render {
        #[arg(long)]
        patch: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 40.0, allow_hyphen_values = true)]
        edge_px: f64,
        #[arg(long, default_value_t = 1.0)]
        stroke_width: f64,
        /// Fill of a tile type, e.g. 13=#ff8800 (repeatable).
        #[arg(long)]
        color: Vec<String>,
        /// Overlay circle x,y,diameter in edge lengths (repeatable).
        #[arg(long, allow_hyphen_values = true)]
        circle: Vec<String>,
        /// Unit edge vectors "x1,y1;x2,y2;..." replacing the projected ones.
        #[arg(long, allow_hyphen_values = true)]
        tile_vectors: Option<String>,
    },
}

/// `Usage` exits with 2, `Failed` with 1.
#[derive(Debug)]
enum CliError {
    Usage(String),
    Failed(String),
}

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

fn failed(e: impl std::fmt::Display) -> CliError {
    CliError::Failed(e.to_string())
}

pub fn run(args: Vec<String>) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs with explicit output streams; returns the exit code.
pub fn run_with(args: Vec<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return e.exit_code();
        }
    };
    match execute(cli.command) {
        Ok(v) => {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("serializable"));
            0
        }
        Err(CliError::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        Err(CliError::Failed(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
    }
}

fn read_json(path: &Path, flag: &str) -> Result<Value, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("--{flag}: cannot read {}: {e}", path.display())))?;
    js::parse(&text).map_err(|e| CliError::Usage(format!("--{flag}: {e}")))
}

fn write_file(path: &Path, flag: &str, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Usage(format!("--{flag}: cannot write {}: {e}", path.display())))
}

fn write_json(path: &Path, flag: &str, v: &Value) -> Result<(), CliError> {
    write_file(path, flag, &format!("{}\n", serde_json::to_string_pretty(v).expect("serializable")))
}

impl SlopeArgs {
    fn load(&self) -> Result<Option<Slope>, CliError> {
        if let Some(name) = &self.preset {
            return match presets::by_name(name) {
                Some(s) => Ok(Some(Slope::Exact(s))),
                None => usage(format!("--preset: unknown preset {name:?} (known: {})", presets::PRESET_NAMES.join(", "))),
            };
        }
        match &self.slope {
            Some(p) => {
                let v = read_json(p, "slope")?;
                js::slope_from_json(&v).map(Some).map_err(|e| CliError::Usage(format!("--slope: {e}")))
            }
            None => Ok(None),
        }
    }

    fn require(&self) -> Result<Slope, CliError> {
        self.load()?.map_or_else(|| usage("--slope or --preset is required"), Ok)
    }

    fn require_exact(&self) -> Result<SlopeSpec<AlgebraicNumber>, CliError> {
        match self.require()? {
            Slope::Exact(s) => Ok(s),
            Slope::Numeric(_) => usage("--slope: an exact slope (with a number field) is required"),
        }
    }
}

fn parse_floats(text: &str, flag: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Usage(format!("--{flag}: {x:?} is not a number")))
        })
        .collect()
}

fn parse_pair_name(text: &str, n: usize, flag: &str) -> Result<(usize, usize), CliError> {
    let names = coordinate_names(n);
    let key = text.trim().trim_start_matches(['G', 'g', 'T', 't']);
    let pos = names
        .iter()
        .position(|m| m[1..] == *key)
        .ok_or_else(|| CliError::Usage(format!("--{flag}: {text:?} is not a pair of indices for n = {n}")))?;
    Ok(rhombus_core::slope::pairs(n)[pos])
}

fn check_radius(r: f64, flag: &str) -> Result<(), CliError> {
    if r.is_finite() && r > 0.0 {
        Ok(())
    } else {
        usage(format!("--{flag} must be positive, got {r}"))
    }
}

fn execute(cmd: Command) -> Result<Value, CliError> {
    match cmd {
        Command::SlopeInfo { slope } => slope_info(&slope.require()?),
        Command::Subperiods {
            slope,
            numeric_heuristic,
            bound,
            tol,
        } => {
            let s = slope.require()?;
            match (&s, numeric_heuristic) {
                (Slope::Exact(e), false) => subperiod_report(e),
                (_, true) => {
                    if bound < 1 {
                        return usage("--bound must be at least 1");
                    }
                    let g = s.grassmann_f64().map_err(failed)?;
                    let shadows = subperiods_numeric(&g, bound, tol);
                    let list: Vec<Value> = shadows
                        .iter()
                        .map(|sh| {
                            let (i, j, k) = sh.triple;
                            json!({
                                "shadow": [i + 1, j + 1, k + 1],
                                "periods": sh.periods.iter().map(|p| p.to_i64().expect("small")).collect::<Vec<_>>(),
                                "count": sh.count(),
                            })
                        })
                        .collect();
                    Ok(json!({"n": s.n(), "heuristic": true, "shadows": list}))
                }
                (Slope::Numeric(_), false) => {
                    usage("--slope: exact slope required for subperiods (or pass --numeric-heuristic)")
                }
            }
        }
        Command::System { slope, pivot } => {
            let s = slope.require_exact()?;
            let shadows = subperiods(&s).map_err(failed)?;
            let sps = rhombus_core::subperiods::all_subperiods(&shadows);
            let rel = subperiod_relations(&sps, s.n());
            let report = match pivot {
                Some(p) => {
                    let pair = parse_pair_name(&p, s.n(), "pivot")?;
                    classify_with_pivot(&rel, pair).map_err(|e| CliError::Usage(format!("--pivot: {e}")))?
                }
                None if s.n() == 4 => classify_codim2(&rel).map_err(failed)?,
                None => classify(&rel),
            };
            Ok(js::system_to_json(&report))
        }
        Command::Nfold { n } => {
            let r = nfold_system(n).map_err(|e| CliError::Usage(format!("n: {e}")))?;
            Ok(js::nfold_to_json(&r))
        }
        Command::Gen {
            slope,
            radius,
            seed,
            offset,
            out,
            render,
            edge_px,
        } => {
            let s = slope.require()?;
            check_radius(radius, "radius")?;
            let opts = RenderOptions {
                edge_px,
                ..RenderOptions::default()
            };
            opts.validate(s.n()).map_err(|m| CliError::Usage(format!("--{m}")))?;
            let p = match offset {
                Some(text) => {
                    let c = parse_floats(&text, "offset")?;
                    generate_patch(&s, &c, radius).map_err(|e| match e {
                        rhombus_core::tiling::TilingError::OffsetLength { .. } => CliError::Usage(format!("--offset: {e}")),
                        other => failed(other),
                    })?
                }
                None => generate_patch_seeded(&s, seed.unwrap_or(DEFAULT_SEED), radius).map_err(failed)?,
            };
            let doc = js::patch_to_json(&p);
            if let Some(path) = &render {
                write_file(path, "render", &to_svg(&p, &opts))?;
            }
            match out {
                Some(path) => {
                    write_json(&path, "out", &doc)?;
                    Ok(json!({
                        "patch": path.display().to_string(),
                        "tiles": p.tiles.len(),
                        "svg": render.map(|r| r.display().to_string()),
                    }))
                }
                None => Ok(doc),
            }
        }
        Command::Thickness { patch, cloud, slope } => {
            let given = slope.load()?;
            let (c, reference) = match (patch, cloud) {
                (Some(path), None) => {
                    let p = load_patch(&path, "patch")?;
                    let reference = given.unwrap_or_else(|| p.slope.clone());
                    (LiftCloud::from_patch(&p), reference)
                }
                (None, Some(path)) => {
                    let v = read_json(&path, "cloud")?;
                    let c = js::cloud_from_json(&v).map_err(|e| CliError::Usage(format!("--cloud: {e}")))?;
                    let Some(reference) = given else {
                        return usage("--slope or --preset is required with --cloud");
                    };
                    (c, reference)
                }
                _ => return usage("exactly one of --patch and --cloud is required"),
            };
            if reference.n() != c.n {
                return usage(format!("--slope: slope has n = {} but the points have dimension {}", reference.n(), c.n));
            }
            let r = thickness(&c, &reference.to_f64()).map_err(failed)?;
            Ok(js::thickness_to_json(&r, &reference))
        }
        Command::Atlas { patch, r, compare, out } => {
            check_radius(r, "r")?;
            let p = load_patch(&patch, "patch")?;
            let a = r_atlas(&p, r).map_err(failed)?;
            let mut report = json!({"r": r, "patterns": a.patterns.len()});
            if let Some(path) = compare {
                let v = read_json(&path, "compare")?;
                let b: Atlas = if v.get("tiles").is_some() {
                    let q = js::patch_from_json(&v).map_err(|e| CliError::Usage(format!("--compare: {e}")))?;
                    r_atlas(&q, r).map_err(failed)?
                } else {
                    js::atlas_from_json(&v).map_err(|e| CliError::Usage(format!("--compare: {e}")))?
                };
                let c = atlas_contains(&a, &b).map_err(|e| CliError::Usage(format!("--compare: {e}")))?;
                report["compared_patterns"] = json!(b.patterns.len());
                report["containment"] = js::containment_to_json(&c);
            }
            match out {
                Some(path) => {
                    write_json(&path, "out", &js::atlas_to_json(&a))?;
                    Ok(report)
                }
                None if report.get("containment").is_some() => Ok(report),
                None => Ok(js::atlas_to_json(&a)),
            }
        }
        Command::LevitovSurface {
            slope,
            conjugate,
            f,
            g,
            radius,
            step,
            tol,
            out,
        } => {
            let e = slope.require_exact()?;
            let pf = Profile::parse(&f).ok_or_else(|| CliError::Usage(format!("--f: unknown profile {f:?}")))?;
            let pg = Profile::parse(&g).ok_or_else(|| CliError::Usage(format!("--g: unknown profile {g:?}")))?;
            check_radius(radius, "radius")?;
            check_radius(step, "step")?;
            let e2 = conjugate_slope(&e, conjugate).map_err(|err| CliError::Usage(format!("--conjugate: {err}")))?;
            let s = levitov_surface(&e, &e2, pf, pg, radius, step).map_err(failed)?;
            let t = thickness(&s.cloud, &e.to_f64()).map_err(failed)?;
            let periodic: Vec<Value> = (0..2)
                .map(|w| s.shadow_is_periodic(w, tol).map(Value::Bool).unwrap_or(Value::Null))
                .collect();
            if let Some(path) = &out {
                write_json(path, "out", &js::cloud_to_json(&s.cloud))?;
            }
            Ok(json!({
                "points": s.cloud.points.len(),
                "f": pf.name(),
                "g": pg.name(),
                "radius": radius,
                "subperiods": s.subperiods.iter().map(|sp| {
                    let (i, j, k) = sp.triple;
                    json!({"shadow": [i + 1, j + 1, k + 1], "period": sp.vector.to_i64()})
                }).collect::<Vec<_>>(),
                "thickness": t.t,
                "shadows_periodic": periodic,
                "cloud": out.map(|p| p.display().to_string()),
            }))
        }
        Command::Intersect { slope, subsets } => {
            let s = slope.require_exact()?;
            let n = s.n();
            let sets: Vec<Vec<usize>> = match subsets {
                Some(text) => text
                    .split(';')
                    .map(|part| {
                        part.split(',')
                            .map(|x| match x.trim().parse::<usize>() {
                                Ok(k) if k >= 1 && k <= n => Ok(k - 1),
                                _ => usage(format!("--subsets: {x:?} is not an index in 1..={n}")),
                            })
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<_, _>>()?,
                None => rhombus_core::slope::quadruples(n)
                    .into_iter()
                    .map(|(a, b, c, d)| vec![a, b, c, d])
                    .collect(),
            };
            let constraints: Vec<(Vec<usize>, SlopeSpec<AlgebraicNumber>)> =
                sets.into_iter().map(|set| (set.clone(), restrict(&s, &set))).collect();
            let x = intersect_lifted_slopes(n, &constraints).map_err(|e| CliError::Usage(format!("--subsets: {e}")))?;
            Ok(js::intersection_to_json(&x))
        }
        Command::Render {
            patch,
            out,
            edge_px,
            stroke_width,
            color,
            circle,
            tile_vectors,
        } => {
            let p = load_patch(&patch, "patch")?;
            let n = p.n();
            let mut opts = RenderOptions {
                edge_px,
                stroke_width,
                ..RenderOptions::default()
            };
            for c in &color {
                let (pair, hex) = c
                    .split_once('=')
                    .ok_or_else(|| CliError::Usage(format!("--color: expected ij=#rrggbb, got {c:?}")))?;
                let pair = parse_pair_name(pair, n, "color")?;
                opts.colors.insert(pair, hex.trim().to_string());
            }
            for c in &circle {
                let v = parse_floats(c, "circle")?;
                if v.len() != 3 {
                    return usage(format!("--circle: expected x,y,diameter, got {c:?}"));
                }
                opts.overlays.push(Overlay {
                    center: [v[0], v[1]],
                    diameter: v[2],
                });
            }
            if let Some(text) = tile_vectors {
                let vs = text
                    .split(';')
                    .map(|part| {
                        let v = parse_floats(part, "tile-vectors")?;
                        if v.len() == 2 {
                            Ok([v[0], v[1]])
                        } else {
                            usage(format!("--tile-vectors: expected x,y, got {part:?}"))
                        }
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                opts.tile_vectors = Some(vs);
            }
            opts.validate(n).map_err(|m| CliError::Usage(format!("--{m}")))?;
            if p.tiles.is_empty() {
                return usage("--patch: the patch has no tiles");
            }
            write_file(&out, "out", &to_svg(&p, &opts))?;
            Ok(json!({"svg": out.display().to_string(), "tiles": p.tiles.len()}))
        }
    }
}

fn load_patch(path: &Path, flag: &str) -> Result<Patch, CliError> {
    let v = read_json(path, flag)?;
    js::patch_from_json(&v).map_err(|e| CliError::Usage(format!("--{flag}: {e}")))
}

fn slope_info(s: &Slope) -> Result<Value, CliError> {
    let mut v = json!({"n": s.n(), "slope": js::slope_to_json(s)});
    match s {
        Slope::Exact(e) => {
            let g = grassmann(e).map_err(failed)?;
            let violations = g.plucker_violations();
            let f = frequencies(&g).map_err(failed)?;
            v["grassmann"] = js::grassmann_exact_to_json(&g);
            v["plucker"] = json!({"exact": true, "violations": quads(&violations), "ok": violations.is_empty()});
            v["frequencies"] = js::frequencies_to_json(e.n(), &f.values.iter().map(AlgebraicNumber::to_f64).collect::<Vec<_>>());
            v["absent_tiles"] = pair_names(&f.degenerate);
        }
        Slope::Numeric(x) => {
            let g = grassmann(x).map_err(failed)?;
            let violations = g.plucker_violations(PLUCKER_TOLERANCE);
            let f = frequencies(&g).map_err(failed)?;
            v["grassmann"] = js::grassmann_f64_to_json(&g);
            v["plucker"] = json!({
                "exact": false,
                "violations": quads(&violations),
                "max_residual": g.max_plucker_residual(),
                "ok": violations.is_empty(),
            });
            v["frequencies"] = js::frequencies_to_json(x.n(), &f.values);
            v["absent_tiles"] = pair_names(&g.near_zero_pairs(PLUCKER_TOLERANCE));
        }
    }
    Ok(v)
}

fn quads(q: &[(usize, usize, usize, usize)]) -> Value {
    json!(q.iter().map(|&(i, j, k, l)| [i + 1, j + 1, k + 1, l + 1]).collect::<Vec<_>>())
}

fn pair_names(ps: &[(usize, usize)]) -> Value {
    json!(ps.iter().map(|&(i, j)| format!("T{}{}", i + 1, j + 1)).collect::<Vec<_>>())
}

fn subperiod_report(e: &SlopeSpec<AlgebraicNumber>) -> Result<Value, CliError> {
    let shadows = subperiods(e).map_err(failed)?;
    let total: usize = shadows.iter().map(|s| s.count()).sum();
    let mut v = json!({
        "n": e.n(),
        "shadows": js::subperiods_to_json(e, &shadows),
        "total": total,
        "max_lift_norm": max_lift_norm(e).ok(),
    });
    if e.n() == 4 {
        v["levitov"] = match levitov_condition(e) {
            Ok(verdict) => json!({
                "holds": verdict.holds,
                "witness": verdict.witness.iter().map(|l| {
                    let (i, j, k) = l.subperiod.triple;
                    json!({"shadow": [i + 1, j + 1, k + 1], "period": l.subperiod.vector.to_i64(), "lift": l.to_f64()})
                }).collect::<Vec<_>>(),
                "failure": verdict.failure.map(|f| match f {
                    LevitovFailure::RationalDirection(w) => format!("rational direction {:?}", w.to_i64()),
                    LevitovFailure::TooFewSingleShadows(k) => format!("only {k} single-period shadows"),
                    LevitovFailure::CollinearLifts => "lifts span at most two lines".to_string(),
                }),
            }),
            Err(err) => json!({"holds": false, "failure": err.to_string()}),
        };
    }
    Ok(v)
}
