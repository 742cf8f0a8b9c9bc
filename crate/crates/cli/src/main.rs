use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gmaps::bijection::{close_rooted, close_rooted_pointed, open_rooted, open_rooted_pointed, Sign};
use gmaps::census::{enumerate_g_trees, enumerate_rooted_maps, enumerate_rooted_quadrangulations, enumerate_well_labeled_trees, Budget};
use gmaps::format::{parse_records, MapRecord};
use gmaps::quad_map::{map_to_quad, quad_to_map};
use gmaps::sampler::{distance_profile, rng_for, sample_quadrangulation_with};
use gmaps::schemes::{dominant_schemes_with, enumerate_schemes_with, SchemeLimits};
use gmaps::series;
use gmaps::verify;
use gmaps::PointedQuad;
use rayon::prelude::*;

type CliResult<T> = Result<T, String>;

#[derive(Parser)]
#[command(name = "gmaps", version, about = "Maps, labeled one-face maps and quadrangulations on orientable surfaces")]
struct Cli {
    /// Output style
    #[arg(long, value_enum, default_value_t = OutputFormat::Lines, global = true, env = "GMAPS_FORMAT")]
    format: OutputFormat,
    /// Maximum number of worker threads
    #[arg(long, global = true, env = "GMAPS_JOBS")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Table,
    Lines,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeriesKind {
    #[value(name = "T")]
    T,
    #[value(name = "U")]
    U,
    #[value(name = "B")]
    B,
    #[value(name = "Rhat")]
    Rhat,
    #[value(name = "Tg")]
    Tg,
    #[value(name = "Qg")]
    Qg,
    #[value(name = "Qbullet")]
    Qbullet,
}

#[derive(Clone, Copy, ValueEnum)]
enum CensusKind {
    Maps,
    Gtrees,
    Wltrees,
    Quads,
}

#[derive(Clone, Copy, ValueEnum)]
enum Level {
    Desk,
}

#[derive(Subcommand)]
enum Command {
    /// Check every record of a map file
    Validate { input: Option<PathBuf> },
    /// Replace each map by its quadrangulation
    ToQuad { input: Option<PathBuf> },
    /// Replace each rooted bipartite quadrangulation by its map
    FromQuad { input: Option<PathBuf> },
    /// Open quadrangulations into labeled one-face maps
    Open {
        input: Option<PathBuf>,
        /// Rooted quadrangulations, opened at the root vertex
        #[arg(long, conflicts_with = "pointed")]
        rooted: bool,
        /// Basepoint given by any dart of its vertex; defaults to the
        /// record's `basepoint` field
        #[arg(long, value_name = "DART")]
        pointed: Option<usize>,
    },
    /// Close labeled one-face maps into quadrangulations
    Close {
        input: Option<PathBuf>,
        /// Well-labeled input, closed into a rooted quadrangulation
        #[arg(long, conflicts_with = "sign")]
        rooted: bool,
        /// Root orientation (1 or -1); defaults to the record's `sign` field, then 1
        #[arg(long, allow_hyphen_values = true)]
        sign: Option<i64>,
    },
    /// List the labeled schemes of a genus
    Schemes {
        #[arg(long)]
        genus: usize,
        /// Only the schemes with trivalent vertices and distinct labels
        #[arg(long)]
        dominant: bool,
        /// Largest genus allowed
        #[arg(long, env = gmaps::schemes::MAX_GENUS_ENV)]
        max_genus: Option<usize>,
    },
    /// Coefficients of a generating series
    Series {
        #[arg(long, value_enum)]
        what: SeriesKind,
        #[arg(long, default_value_t = 0)]
        genus: usize,
        #[arg(long)]
        order: usize,
        #[arg(long, env = gmaps::schemes::MAX_GENUS_ENV)]
        max_genus: Option<usize>,
    },
    /// Exact asymptotic constants of a genus
    Constants {
        #[arg(long)]
        genus: usize,
        #[arg(long, env = gmaps::schemes::MAX_GENUS_ENV)]
        max_genus: Option<usize>,
    },
    /// Exhaustive lists of small objects (quadrangulations are counted by faces)
    Census {
        #[arg(long, value_enum)]
        what: CensusKind,
        #[arg(long)]
        edges: usize,
        #[arg(long, default_value_t = 0)]
        genus: usize,
        #[arg(long)]
        count_only: bool,
        /// Largest size per genus, e.g. `5,4,3`
        #[arg(long, env = gmaps::census::BUDGET_ENV)]
        max_n: Option<String>,
    },
    /// Uniform random rooted pointed planar quadrangulations
    Sample {
        #[arg(long)]
        faces: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print radius statistics instead of the samples
        #[arg(long)]
        profile: bool,
    },
    /// Run the acceptance checks
    Verify {
        #[arg(long, value_enum, default_value_t = Level::Desk)]
        level: Level,
        /// Run only these checks
        #[arg(long = "check", value_name = "ID")]
        checks: Vec<usize>,
    },
}

fn read_input(path: &Option<PathBuf>) -> CliResult<Vec<(usize, MapRecord)>> {
    let mut text = String::new();
    match path {
        Some(p) => text = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?,
        None => {
            io::stdin().read_to_string(&mut text).map_err(|e| format!("stdin: {e}"))?;
        }
    }
    parse_records(&text).map_err(|e| e.to_string())
}

fn scheme_limits(max_genus: Option<usize>) -> SchemeLimits {
    max_genus.map(|max_genus| SchemeLimits { max_genus }).unwrap_or_default()
}

struct Out {
    format: OutputFormat,
    out: io::BufWriter<io::StdoutLock<'static>>,
}

impl Out {
    fn line(&mut self, s: impl AsRef<str>) -> CliResult<()> {
        writeln!(self.out, "{}", s.as_ref()).map_err(|e| e.to_string())
    }
}

fn run(cli: Cli) -> CliResult<bool> {
    if let Some(j) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    let mut o = Out {
        format: cli.format,
        out: io::BufWriter::new(io::stdout().lock()),
    };
    let table = o.format == OutputFormat::Table;
    match cli.command {
        Command::Validate { input } => {
            let mut ok = true;
            if table {
                o.line(format!("{:>6}  {:>8}  {:>8}  {:>8}  {:>5}  status", "line", "vertices", "edges", "faces", "genus"))?;
            }
            for (line, r) in read_input(&input)? {
                let checked = r.to_map(line).and_then(|m| {
                    if r.labels.is_some() {
                        r.to_labeled(line)?;
                    }
                    if r.basepoint.is_some() {
                        r.to_pointed(line)?;
                    }
                    r.sign_value(line)?;
                    Ok(m)
                });
                match checked {
                    Ok(m) => {
                        let g = m.genus().map_err(|e| e.to_string())?;
                        let (v, e, f) = (m.n_vertices(), m.n_edges(), m.n_faces());
                        if table {
                            o.line(format!("{line:>6}  {v:>8}  {e:>8}  {f:>8}  {g:>5}  ok"))?;
                        } else {
                            o.line(format!("{line} ok vertices={v} edges={e} faces={f} genus={g}"))?;
                        }
                    }
                    Err(e) => {
                        ok = false;
                        o.line(format!("{line} error {e}"))?;
                    }
                }
            }
            Ok(ok)
        }
        Command::ToQuad { input } => {
            for (line, r) in read_input(&input)? {
                let q = map_to_quad(&r.to_map(line).map_err(|e| e.to_string())?);
                o.line(MapRecord::from_map(&q).to_line())?;
            }
            Ok(true)
        }
        Command::FromQuad { input } => {
            for (line, r) in read_input(&input)? {
                let m = quad_to_map(&r.to_map(line).map_err(|e| e.to_string())?).map_err(|e| format!("line {line}: {e}"))?;
                o.line(MapRecord::from_map(&m).to_line())?;
            }
            Ok(true)
        }
        Command::Open { input, rooted, pointed } => {
            for (line, r) in read_input(&input)? {
                let quad = r.to_map(line).map_err(|e| e.to_string())?;
                let rec = if rooted {
                    MapRecord::from_labeled(&open_rooted(&quad).map_err(|e| format!("line {line}: {e}"))?)
                } else {
                    let pq = match pointed {
                        Some(d) if d == 0 || d > quad.n_darts() => {
                            return Err(format!("line {line}: --pointed {d} outside 1..={}", quad.n_darts()))
                        }
                        Some(d) => PointedQuad {
                            basepoint: quad.vertex_of()[d - 1],
                            quad,
                        },
                        None => r.to_pointed(line).map_err(|e| format!("{e} (or pass --pointed or --rooted)"))?,
                    };
                    let (t, sign) = open_rooted_pointed(&pq).map_err(|e| format!("line {line}: {e}"))?;
                    MapRecord::from_labeled(&t).with_sign(sign)
                };
                o.line(rec.to_line())?;
            }
            Ok(true)
        }
        Command::Close { input, rooted, sign } => {
            let flag_sign = match sign {
                None => None,
                Some(s) => Some(Sign::from_i64(s).ok_or_else(|| format!("--sign must be 1 or -1, found {s}"))?),
            };
            for (line, r) in read_input(&input)? {
                let t = r.to_labeled(line).map_err(|e| e.to_string())?;
                let rec = if rooted {
                    MapRecord::from_map(&close_rooted(&t).map_err(|e| format!("line {line}: {e}"))?)
                } else {
                    let s = match flag_sign {
                        Some(s) => s,
                        None => r.sign_value(line).map_err(|e| e.to_string())?.unwrap_or(Sign::Plus),
                    };
                    MapRecord::from_pointed(&close_rooted_pointed(&t, s).map_err(|e| format!("line {line}: {e}"))?)
                };
                o.line(rec.to_line())?;
            }
            Ok(true)
        }
        Command::Schemes { genus, dominant, max_genus } => {
            let limits = scheme_limits(max_genus);
            let schemes = if dominant {
                dominant_schemes_with(genus, &limits)
            } else {
                enumerate_schemes_with(genus, &limits)
            }
            .map_err(|e| e.to_string())?;
            let mut recs: Vec<MapRecord> = schemes.par_iter().map(|s| MapRecord::from_labeled(&s.as_labeled_map())).collect();
            recs.par_sort();
            if table {
                o.line(format!("{:>8}  {:>5}  {:>8}  labels", "scheme", "edges", "vertices"))?;
                for (i, r) in recs.iter().enumerate() {
                    let labels = r.labels.as_deref().unwrap_or(&[]);
                    o.line(format!("{:>8}  {:>5}  {:>8}  {labels:?}", i + 1, r.n_darts / 2, labels.len()))?;
                }
                o.line(format!("total {}", recs.len()))?;
            } else {
                for r in &recs {
                    o.line(r.to_line())?;
                }
            }
            Ok(true)
        }
        Command::Series { what, genus, order, max_genus } => {
            let limits = scheme_limits(max_genus);
            let s = match what {
                SeriesKind::T => series::series_t(order),
                SeriesKind::U => series::series_u(order),
                SeriesKind::B => series::series_b(order),
                SeriesKind::Rhat => series::rhat_with(genus, order, &limits).map_err(|e| e.to_string())?,
                SeriesKind::Tg | SeriesKind::Qg | SeriesKind::Qbullet => {
                    limits.check(genus).map_err(|e| e.to_string())?;
                    match what {
                        SeriesKind::Tg => series::series_tg(genus, order),
                        SeriesKind::Qg => series::series_qg(genus, order),
                        _ => series::series_q_bullet(genus, order),
                    }
                    .map_err(|e| e.to_string())?
                }
            };
            if table {
                o.line(format!("{:>6}  coefficient of {}^n", "n", s.var()))?;
            }
            for (n, c) in s.coeffs().iter().enumerate() {
                if table {
                    o.line(format!("{n:>6}  {}", series::ratio_text(c)))?;
                } else {
                    o.line(format!("{n} {}", series::ratio_text(c)))?;
                }
            }
            Ok(true)
        }
        Command::Constants { genus, max_genus } => {
            let limits = scheme_limits(max_genus);
            let tau = series::tau_with(genus, &limits).map_err(|e| e.to_string())?;
            let c = series::constant_from_tau(genus, &tau);
            if table {
                o.line(format!("genus  {genus}"))?;
                o.line(format!("tau    {}", series::ratio_text(&tau)))?;
                o.line(format!("c      {c}"))?;
                o.line(format!("c      {:.6e} (estimate)", c.to_f64()))?;
            } else {
                o.line(format!("tau {}", series::ratio_text(&tau)))?;
                o.line(format!("c {c}"))?;
            }
            Ok(true)
        }
        Command::Census {
            what,
            edges,
            genus,
            count_only,
            max_n,
        } => {
            let budget = match max_n {
                Some(s) => Budget::parse(&s).ok_or_else(|| format!("--max-n: expected comma separated sizes, found `{s}`"))?,
                None => Budget::default(),
            };
            let e = |e: gmaps::census::CensusError| e.to_string();
            let recs: Vec<MapRecord> = match what {
                CensusKind::Maps => enumerate_rooted_maps(edges, genus, &budget).map_err(e)?.iter().map(MapRecord::from_map).collect(),
                CensusKind::Gtrees => enumerate_g_trees(edges, genus, &budget).map_err(e)?.iter().map(MapRecord::from_map).collect(),
                CensusKind::Wltrees => enumerate_well_labeled_trees(edges, genus, &budget)
                    .map_err(e)?
                    .iter()
                    .map(MapRecord::from_labeled)
                    .collect(),
                CensusKind::Quads => enumerate_rooted_quadrangulations(edges, genus, &budget)
                    .map_err(e)?
                    .iter()
                    .map(MapRecord::from_map)
                    .collect(),
            };
            if count_only || table {
                o.line(format!("{}", recs.len()))?;
            } else {
                for r in &recs {
                    o.line(r.to_line())?;
                }
            }
            Ok(true)
        }
        Command::Sample {
            faces,
            count,
            seed,
            profile,
        } => {
            if faces == 0 {
                return Err("--faces must be at least 1".into());
            }
            if profile {
                let p = distance_profile(faces, count, seed);
                if table {
                    o.line(format!("faces                 {}", p.n))?;
                    o.line(format!("samples               {}", p.samples))?;
                    o.line(format!("mean radius           {:.4} (estimate)", p.mean_max))?;
                    o.line(format!("mean distance         {:.4} (estimate)", p.mean_distance))?;
                    o.line(format!("largest radius        {}", p.max_max))?;
                } else {
                    o.line(format!(
                        "faces={} samples={} mean_radius_estimate={:.4} mean_distance_estimate={:.4} max_radius={}",
                        p.n, p.samples, p.mean_max, p.mean_distance, p.max_max
                    ))?;
                }
            } else {
                let recs: Vec<String> = (0..count as u64)
                    .into_par_iter()
                    .map(|i| {
                        sample_quadrangulation_with(faces, seed, &mut rng_for(seed, i))
                            .map(|s| MapRecord::from_pointed(&s.quad).with_sign(s.sign).with_seed(seed).to_line())
                            .map_err(|e| e.to_string())
                    })
                    .collect::<CliResult<_>>()?;
                for r in recs {
                    o.line(r)?;
                }
            }
            Ok(true)
        }
        Command::Verify { level: Level::Desk, checks } => {
            let ids: Vec<usize> = if checks.is_empty() { (1..=8).collect() } else { checks };
            let mut ok = true;
            for id in ids {
                let r = verify::run_check(id);
                ok &= r.passed;
                let status = if r.passed { "PASS" } else { "FAIL" };
                if table {
                    o.line(format!("{status}  {:>2}  {:<26} {:>8.2}s  {}", r.id, r.name, r.elapsed.as_secs_f64(), r.detail))?;
                } else {
                    o.line(format!("{status} {} {} {:.3}s {}", r.id, r.name.replace(' ', "_"), r.elapsed.as_secs_f64(), r.detail))?;
                }
                o.out.flush().map_err(|e| e.to_string())?;
            }
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
