//! `quint`: verification, tables, puzzle solving and rib mesh export.

mod config;
mod spec_file;

use std::f64::consts::PI;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use quintessence::cell120::{build_complex_with, cell_geometry, Complex120};
use quintessence::check::{Check, Report};
use quintessence::dodeca::{generate_group_with, generators, verify_dodeca_trig};
use quintessence::nalgebra::Matrix3;
use quintessence::meshgen::{check_mesh, rib_mesh, write_obj, write_skeleton_obj, write_stl};
use quintessence::puzzle::{
    catalog, check_rib_limits, count_solutions, is_feasible, solve, PuzzleContext, PuzzleError,
    SolveOptions,
};
use quintessence::quat::{stereo_derivative, stereographic, UnitQuaternion};
use quintessence::strata::{
    hopf_check, layer_census, rib_cells, ring_layer_table, rings, southern_cells, Layer, RibType, RingLayerTable,
};

use config::Config;

const EXIT_ERROR: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;

#[derive(Parser)]
#[command(name = "quint", version, about = "Quaternionic 120-cell puzzles and printable ribs")]
struct Cli {
    /// key = value config file; defaults to $QUINT_CONFIG
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the invariant suite and print a JSON report
    Verify,
    /// Print the layer census or the ring-layer table
    Tables {
        #[arg(value_enum)]
        kind: TableKind,
        #[arg(long, value_enum, default_value = "json")]
        format: TableFormat,
    },
    /// Assemble a catalog puzzle or a spec file
    Solve {
        /// Catalog name (e.g. "Dc45 Meteor", Dc45Meteor) or spec file path
        #[arg(long)]
        puzzle: String,
        /// Report raw and orbit counts instead of assemblies
        #[arg(long)]
        count: bool,
        /// Also place ribs by reflections
        #[arg(long)]
        allow_mirror: bool,
        /// Assemblies to print; 0 prints all
        #[arg(long, default_value_t = 1)]
        max: usize,
    },
    /// List the catalog, or check every entry end to end
    Catalog {
        #[arg(long)]
        validate: bool,
    },
    /// Export a printable rib mesh
    Ribs {
        #[arg(long = "type")]
        rib_type: RibType,
        #[arg(long, value_enum, default_value = "stl")]
        format: MeshFormat,
        /// Output file; defaults to <out_dir>/<type>.<format>
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        scale_mm: Option<f64>,
        #[arg(long)]
        frame_width: Option<f64>,
        #[arg(long)]
        tess: Option<usize>,
    },
    /// Export the projected 1-skeleton of some cells as OBJ polylines
    Skeleton {
        /// Comma-separated cell ids
        #[arg(long, conflicts_with_all = ["rib", "southern"])]
        cells: Option<String>,
        /// Cells of a canonical rib
        #[arg(long)]
        rib: Option<RibType>,
        /// All cells of the closed southern hemisphere
        #[arg(long)]
        southern: bool,
        /// Chords per edge
        #[arg(long, default_value_t = 8)]
        segments: usize,
        /// Output file; stdout when absent
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TableKind {
    Layers,
    Rings,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MeshFormat {
    Obj,
    Stl,
}

impl MeshFormat {
    fn extension(self) -> &'static str {
        match self {
            MeshFormat::Obj => "obj",
            MeshFormat::Stl => "stl",
        }
    }
}

fn emit(cfg: &Config, value: &impl Serialize) -> Result<()> {
    let text = if cfg.pretty {
        serde_json::to_string_pretty(value)?
    } else {
        serde_json::to_string(value)?
    };
    write_stdout(format!("{text}\n").as_bytes())
}

/// Writes to stdout; a reader that hangs up early is not an error.
fn write_stdout(bytes: &[u8]) -> Result<()> {
    match io::stdout().lock().write_all(bytes) {
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn build(cfg: &Config) -> Result<Complex120> {
    let g = generators();
    let group = generate_group_with(g.p, g.q, cfg.eps_match)?;
    Ok(build_complex_with(group, cfg.eps_alg)?)
}

fn verify_report(cfg: &Config) -> Result<Report> {
    let c = build(cfg)?;
    let g = c.group();
    let mut r = Report::default();
    r.push(Check::exact("group_order", g.len(), 120));
    let closed = (0..g.len()).all(|a| {
        let near = |q: UnitQuaternion| g.id_of(q).is_some();
        near(g.element(a).inverse())
            && near(g.element(a).conj())
            && (0..g.len()).all(|b| near(g.element(a) * g.element(b)))
    });
    r.push(Check::flag("group_closure", closed));

    let census = layer_census(&c)?;
    for l in Layer::ALL {
        let want = [1, 12, 20, 12, 30, 12, 20, 12, 1][l.index()];
        r.push(Check::exact(format!("layer_{}", l.slug()), census[l.index()], want));
    }
    r.push(Check::exact("cells", c.cell_count(), 120));
    r.push(Check::exact("faces", c.faces().len(), 720));
    r.push(Check::exact("edges", c.edges().len(), 1200));
    r.push(Check::exact("vertices", c.vertices().len(), 600));
    r.push(Check::approx("euler_sum", c.euler_sum() as f64, 0.0, 0.0));

    let angles = cell_geometry(&c, 0).dihedral_angles();
    let worst = angles
        .iter()
        .copied()
        .max_by(|a, b| (a - 2.0 * PI / 3.0).abs().total_cmp(&(b - 2.0 * PI / 3.0).abs()))
        .unwrap_or(f64::NAN);
    r.push(Check::approx("dihedral_angle", worst, 2.0 * PI / 3.0, 1e-9));

    let ids = g.generator_ids();
    let qq = g.element(ids.q).inverse() * g.element(ids.q_prime);
    r.push(Check::approx("neighbor_real_part", qq.real(), (PI / 5.0).cos(), 1e-9));
    let t = 0.5 * (1.0 + 3.0 * (PI / 5.0).cos()).sqrt();
    let vertex_re = c.vertex(c.cell_vertex_ids(0)[0]).position.real();
    r.push(Check::approx("vertex_real_part", vertex_re, t, 1e-9));

    let rs = rings(&c)?;
    let table = ring_layer_table(&c, &rs)?;
    r.push(Check::flag("ring_inner_uniform", table.inner_uniform));
    r.push(Check::flag("ring_outer_uniform", table.outer_uniform));
    r.extend(hopf_check(&c, &rs));
    r.push(Check::exact("southern_cells", southern_cells(&c).len(), 75));

    r.push(Check::approx("stereo_origin", stereographic(UnitQuaternion::ONE)?.norm(), 0.0, 0.0));
    r.push(Check::approx("stereo_derivative_0", stereo_derivative(0.0)?, 0.5, 0.0));
    r.push(Check::approx("stereo_derivative_half_pi", stereo_derivative(PI / 2.0)?, 1.0, 0.0));
    let kernel = (0..g.len())
        .filter(|&i| (g.element(i).rotation_matrix() - Matrix3::identity()).norm() < 1e-9)
        .count();
    r.push(Check::exact("double_cover_kernel", kernel, 2));
    r.extend(verify_dodeca_trig());
    Ok(r)
}

fn cmd_verify(cfg: &Config) -> Result<u8> {
    let report = verify_report(cfg)?;
    let measured = |name: &str| report.get(name).map(|c| c.measured);
    let pass = report.all_pass();
    emit(
        cfg,
        &json!({
            "pass": pass,
            "group_order": measured("group_order").map(|x| x as usize),
            "dihedral_angle": measured("dihedral_angle"),
            "euler_sum": measured("euler_sum").map(|x| x as i64),
            "checks": report.checks,
        }),
    )?;
    if let Some(f) = report.first_failure() {
        eprintln!(
            "verify failed: {} measured {} expected {} (tolerance {})",
            f.name, f.measured, f.expected, f.tolerance
        );
        return Ok(EXIT_ERROR);
    }
    Ok(0)
}

fn layers_json(c: &Complex120) -> Result<Value> {
    let census = layer_census(c)?;
    let rows: Vec<Value> = Layer::ALL
        .iter()
        .map(|l| {
            json!({
                "layer": l.name(),
                "slug": l.slug(),
                "angle": l.nominal_angle(),
                "real_part": l.nominal_angle().cos(),
                "cells": census[l.index()],
            })
        })
        .collect();
    Ok(json!({"kind": "layers", "total": census.iter().sum::<usize>(), "rows": rows}))
}

fn layers_text(c: &Complex120) -> Result<String> {
    let census = layer_census(c)?;
    let mut s = format!("{:<20} {:>10} {:>11} {:>5}\n", "layer", "angle", "Re", "cells");
    for l in Layer::ALL {
        s.push_str(&format!(
            "{:<20} {:>10.7} {:>11.8} {:>5}\n",
            l.name(),
            l.nominal_angle(),
            l.nominal_angle().cos(),
            census[l.index()]
        ));
    }
    Ok(s)
}

fn rings_json(t: &RingLayerTable) -> Value {
    let rows: Vec<Value> = Layer::ALL
        .iter()
        .map(|&l| {
            let r = t.row(l);
            json!({
                "layer": l.name(),
                "cells": t.layer_counts[l.index()],
                "spine": r[0],
                "equator": r[1],
                "remaining": r[2],
                "inner": r[3],
                "outer": r[4],
            })
        })
        .collect();
    json!({
        "kind": "rings",
        "columns": RingLayerTable::COLUMNS,
        "rows": rows,
        "inner_uniform": t.inner_uniform,
        "outer_uniform": t.outer_uniform,
    })
}

fn cmd_tables(cfg: &Config, kind: TableKind, format: TableFormat) -> Result<u8> {
    let c = build(cfg)?;
    match (kind, format) {
        (TableKind::Layers, TableFormat::Json) => emit(cfg, &layers_json(&c)?)?,
        (TableKind::Layers, TableFormat::Text) => write_stdout(layers_text(&c)?.as_bytes())?,
        (TableKind::Rings, f) => {
            let t = ring_layer_table(&c, &rings(&c)?)?;
            match f {
                TableFormat::Json => emit(cfg, &rings_json(&t))?,
                TableFormat::Text => write_stdout(t.to_text().as_bytes())?,
            }
        }
    }
    Ok(0)
}

fn assembly_json(a: &quintessence::puzzle::Assembly) -> Value {
    let placements: Vec<Value> = a
        .placements
        .iter()
        .map(|p| json!({"rib": p.rib_type.name(), "cells": p.cells, "mirror": p.mirror}))
        .collect();
    json!({ "placements": placements })
}

fn cmd_solve(cfg: &Config, puzzle: &str, count: bool, allow_mirror: bool, max: usize) -> Result<u8> {
    let spec = spec_file::resolve(puzzle)?;
    spec.validate()?;
    let ctx = PuzzleContext::new(build(cfg)?)?;
    let limits = check_rib_limits(&spec);
    let violations: Vec<String> = limits
        .violations()
        .map(|v| format!("{}: {} used, at most {} ({} capacity {})", v.bound, v.used, v.limit, v.layer, v.layer_capacity))
        .collect();
    if count {
        let n = count_solutions(&ctx, &spec, allow_mirror);
        emit(
            cfg,
            &json!({
                "puzzle": spec.name,
                "cells": spec.cells,
                "allow_mirror": allow_mirror,
                "counts": n,
                "limit_violations": violations,
            }),
        )?;
        return Ok(if n.raw == 0 { EXIT_INFEASIBLE } else { 0 });
    }
    let opts = SolveOptions {
        allow_mirror,
        max_solutions: if max == 0 { None } else { Some(max) },
        ..SolveOptions::default()
    };
    match solve(&ctx, &spec, opts) {
        Ok(found) => {
            let assemblies: Vec<Value> = found.iter().map(assembly_json).collect();
            emit(
                cfg,
                &json!({
                    "puzzle": spec.name,
                    "cells": spec.cells,
                    "feasible": true,
                    "assemblies": assemblies,
                }),
            )?;
            Ok(0)
        }
        Err(e @ PuzzleError::Infeasible(_)) => {
            emit(
                cfg,
                &json!({
                    "puzzle": spec.name,
                    "cells": spec.cells,
                    "feasible": false,
                    "reason": e.to_string(),
                    "limit_violations": violations,
                }),
            )?;
            Ok(EXIT_INFEASIBLE)
        }
        Err(e) => Err(e.into()),
    }
}

#[derive(Serialize)]
struct EntryCheck {
    name: String,
    cells: usize,
    total_ok: bool,
    limits_ok: bool,
    feasible: bool,
    variants: Vec<VariantCheck>,
}

#[derive(Serialize)]
struct VariantCheck {
    name: String,
    cells: usize,
    feasible: bool,
}

fn cmd_catalog(cfg: &Config, validate: bool) -> Result<u8> {
    let entries = catalog();
    if !validate {
        emit(cfg, &entries)?;
        return Ok(0);
    }
    let ctx = PuzzleContext::new(build(cfg)?)?;
    let checks: Vec<EntryCheck> = entries
        .iter()
        .map(|spec| EntryCheck {
            name: spec.name.clone(),
            cells: spec.cells,
            total_ok: spec.validate().is_ok(),
            limits_ok: check_rib_limits(spec).ok(),
            feasible: is_feasible(&ctx, spec, false),
            variants: spec
                .variant_specs()
                .iter()
                .map(|v| VariantCheck {
                    name: v.name.clone(),
                    cells: v.cells,
                    feasible: is_feasible(&ctx, v, false),
                })
                .collect(),
        })
        .collect();
    let ok = checks
        .iter()
        .all(|e| e.total_ok && e.limits_ok && e.feasible && e.variants.iter().all(|v| v.feasible));
    emit(cfg, &json!({"pass": ok, "entries": checks}))?;
    Ok(if ok { 0 } else { EXIT_ERROR })
}

struct RibArgs {
    rib_type: RibType,
    format: MeshFormat,
    out: Option<PathBuf>,
    scale_mm: Option<f64>,
    frame_width: Option<f64>,
    tess: Option<usize>,
}

fn cmd_ribs(cfg: &Config, a: RibArgs) -> Result<u8> {
    let mut params = cfg.design.clone();
    if let Some(s) = a.scale_mm {
        params.scale_mm = s;
    }
    if let Some(w) = a.frame_width {
        params.frame_width = w;
    }
    if let Some(n) = a.tess {
        params.tessellation_level = n;
    }
    params.validate()?;
    let c = build(cfg)?;
    let rib = rib_cells(&c, &rings(&c)?, a.rib_type);
    let mesh = rib_mesh(&c, &rib, &params)?;
    let path = a
        .out
        .unwrap_or_else(|| cfg.out_dir.join(format!("{}.{}", a.rib_type.name(), a.format.extension())));
    let mut bytes = Vec::new();
    match a.format {
        MeshFormat::Stl => write_stl(&mesh, &mut bytes)?,
        MeshFormat::Obj => write_obj(&mesh, &mut bytes)?,
    }
    fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
    let report = check_mesh(&mesh);
    emit(
        cfg,
        &json!({
            "rib": a.rib_type.name(),
            "cells": rib.cells,
            "format": a.format.extension(),
            "path": path.display().to_string(),
            "params": params,
            "mesh": report,
        }),
    )?;
    Ok(0)
}

fn skeleton_cells(c: &Complex120, cells: Option<String>, rib: Option<RibType>, southern: bool) -> Result<Vec<usize>> {
    if let Some(list) = cells {
        let ids = list
            .split(',')
            .map(|s| s.trim().parse::<usize>().with_context(|| format!("bad cell id {s:?}")))
            .collect::<Result<Vec<_>>>()?;
        if let Some(bad) = ids.iter().find(|&&i| i >= c.cell_count()) {
            bail!("cell id {bad} out of range 0..{}", c.cell_count());
        }
        return Ok(ids);
    }
    if let Some(t) = rib {
        return Ok(rib_cells(c, &rings(c)?, t).cells);
    }
    if southern {
        return Ok(southern_cells(c));
    }
    Ok((0..c.cell_count()).collect())
}

fn cmd_skeleton(
    cfg: &Config,
    cells: Option<String>,
    rib: Option<RibType>,
    southern: bool,
    segments: usize,
    out: Option<PathBuf>,
) -> Result<u8> {
    if segments == 0 {
        bail!("segments must be at least 1");
    }
    let c = build(cfg)?;
    let ids = skeleton_cells(&c, cells, rib, southern)?;
    let mut bytes = Vec::new();
    write_skeleton_obj(&c, &ids, segments, cfg.design.scale_mm, &mut bytes)?;
    match out {
        Some(p) => fs::write(&p, bytes).with_context(|| format!("writing {}", p.display()))?,
        None => write_stdout(&bytes)?,
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<u8> {
    let cfg = Config::load(cli.config.as_deref())?;
    match cli.command {
        Command::Verify => cmd_verify(&cfg),
        Command::Tables { kind, format } => cmd_tables(&cfg, kind, format),
        Command::Solve {
            puzzle,
            count,
            allow_mirror,
            max,
        } => cmd_solve(&cfg, &puzzle, count, allow_mirror, max),
        Command::Catalog { validate } => cmd_catalog(&cfg, validate),
        Command::Ribs {
            rib_type,
            format,
            out,
            scale_mm,
            frame_width,
            tess,
        } => cmd_ribs(
            &cfg,
            RibArgs {
                rib_type,
                format,
                out,
                scale_mm,
                frame_width,
                tess,
            },
        ),
        Command::Skeleton {
            cells,
            rib,
            southern,
            segments,
            out,
        } => cmd_skeleton(&cfg, cells, rib, southern, segments, out),
    }
}

fn main() -> ExitCode {
    // usage errors exit 1 so that 2 always means an infeasible puzzle
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
