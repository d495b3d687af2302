use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use qknot::evolve::{
    events_csv, read_snapshot, run as evolve, timeseries_csv, track_nodal, write_snapshot, EvolutionConfig,
    FieldState, Hamiltonian, InitialState, NodalEvent, TrackSettings, SIDE_PER_RADIUS,
};
use qknot::nodal::{extract, ExtractSettings, Pole, SampleGrid, DEFAULT_EXTENT};

use super::field::{parse_field, parse_numbers};
use crate::args::{EvolveArgs, EvolveCmd, Format};
use crate::context::{json, Ctx, Outcome};
use crate::error::CliError;

/// Box side used when no field sets the scale.
const DEFAULT_SIDE: f64 = 16.0;
/// Resolution of the extraction that measures a field's bounding radius.
const RADIUS_PROBE_N: usize = 48;

pub const SNAPSHOT_EXT: &str = "qks";

fn hamiltonian(s: &str) -> Result<Hamiltonian, CliError> {
    match s.split_once(':') {
        None if s == "free" => Ok(Hamiltonian::Free),
        Some(("harmonic", w)) => {
            let omega = match w.split(',').count() {
                1 => [parse_numbers::<1>("--hamiltonian", w)?[0]; 3],
                _ => parse_numbers::<3>("--hamiltonian", w)?,
            };
            Ok(Hamiltonian::Harmonic { omega })
        }
        _ => Err(CliError::usage(format!(
            "--hamiltonian expects free, harmonic:w or harmonic:wx,wy,wz, got {s:?}"
        ))),
    }
}

/// Largest distance from the origin of the field's nodal set in the plus chart.
fn bounding_radius(ctx: &Ctx, name: &str, radius: Option<f64>) -> Result<f64, CliError> {
    let f = parse_field(name, radius)?;
    let grid = SampleGrid::stereographic(Pole::Plus, RADIUS_PROBE_N, DEFAULT_EXTENT * f.radius);
    let c = extract(
        &f,
        &grid,
        ExtractSettings {
            refine: None,
            execution: ctx.exec,
        },
    )
    .map_err(|e| CliError::domain("evolve", format!("cannot size the box from the nodal set ({e}); pass --side")))?;
    let r = c
        .points()
        .map(|x| x.iter().map(|v| v * v).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    if r == 0.0 {
        return Err(CliError::domain("evolve", "field has an empty nodal set; pass --side"));
    }
    Ok(r)
}

fn setup(ctx: &Ctx, a: &EvolveArgs) -> Result<(EvolutionConfig, InitialState), CliError> {
    let field = a.init.strip_prefix("field:");
    let side = match (a.side, field) {
        (Some(s), _) => s,
        (None, Some(name)) => SIDE_PER_RADIUS * bounding_radius(ctx, name, a.radius)?,
        (None, None) => DEFAULT_SIDE,
    };
    let init = if let Some(name) = field {
        let f = parse_field(name, a.radius)?;
        match (InitialState::field(f, side), a.envelope) {
            (InitialState::Field { field, scale, .. }, Some(envelope)) => InitialState::Field {
                field,
                scale,
                envelope,
            },
            (s, _) => s,
        }
    } else if a.init == "gaussian" {
        InitialState::Gaussian {
            center: parse_numbers::<3>("--center", &a.center)?,
            width: a.width,
            momentum: parse_numbers::<3>("--momentum", &a.momentum)?,
        }
    } else if let Some(m) = a.init.strip_prefix("plane-wave:") {
        let v = parse_numbers::<3>("--init plane-wave", m)?;
        if v.iter().any(|x| x.fract() != 0.0) {
            return Err(CliError::usage("plane-wave modes must be integers"));
        }
        InitialState::PlaneWave {
            modes: v.map(|x| x as i64),
        }
    } else {
        return Err(CliError::usage(format!(
            "--init expects field:<name>, gaussian or plane-wave:mx,my,mz, got {:?}",
            a.init
        )));
    };
    let cfg = EvolutionConfig {
        hamiltonian: hamiltonian(&a.hamiltonian)?,
        side,
        n: a.n,
        dt: a.dt,
        steps: a.steps,
    };
    cfg.validate()?;
    Ok((cfg, init))
}

fn history(ctx: &Ctx, a: &EvolveArgs) -> Result<(EvolutionConfig, InitialState, Vec<FieldState>), CliError> {
    let (cfg, init) = setup(ctx, a)?;
    let s0 = FieldState::initial(&cfg, &init, ctx.exec);
    let states = evolve(&cfg, s0, a.every, ctx.exec)?;
    Ok((cfg, init, states))
}

pub fn run(ctx: &mut Ctx, cmd: &EvolveCmd) -> Result<Outcome, CliError> {
    match cmd {
        EvolveCmd::Run { evolve, snapshots } => run_cmd(ctx, evolve, snapshots.as_deref()),
        EvolveCmd::Track {
            evolve,
            from,
            events,
            match_cells,
            amplitude_floor,
        } => {
            let settings = TrackSettings {
                execution: ctx.exec,
                match_cells: *match_cells,
                amplitude_floor: *amplitude_floor,
            };
            track_cmd(ctx, evolve, from.as_deref(), events.as_deref(), settings)
        }
    }
}

#[derive(Serialize)]
struct NormRow {
    index: usize,
    time: f64,
    norm: f64,
    relative_drift: f64,
    file: Option<String>,
}

#[derive(Serialize)]
struct RunReport {
    config: EvolutionConfig,
    init: InitialState,
    snapshots: Vec<NormRow>,
    max_relative_drift: f64,
}

fn snapshot_path(dir: &Path, index: usize) -> PathBuf {
    dir.join(format!("snapshot_{index:05}.{SNAPSHOT_EXT}"))
}

fn run_cmd(ctx: &mut Ctx, a: &EvolveArgs, dir: Option<&Path>) -> Result<Outcome, CliError> {
    let (config, init, states) = history(ctx, a)?;
    if let Some(d) = dir {
        fs::create_dir_all(d).map_err(|e| CliError::domain("io", format!("{}: {e}", d.display())))?;
    }
    let mut rows = Vec::with_capacity(states.len());
    for (index, s) in states.iter().enumerate() {
        let file = match dir {
            Some(d) => {
                let p = snapshot_path(d, index);
                let mut buf = Vec::new();
                write_snapshot(s, &mut buf)?;
                ctx.write_side_output(&p, &buf)?;
                Some(p.display().to_string())
            }
            None => None,
        };
        let norm = s.norm();
        rows.push(NormRow {
            index,
            time: s.time,
            norm,
            relative_drift: (norm - s.norm0).abs() / s.norm0,
            file,
        });
    }
    let r = RunReport {
        config,
        init,
        max_relative_drift: rows.iter().map(|r| r.relative_drift).fold(0.0, f64::max),
        snapshots: rows,
    };
    let body = ctx.render(&r, || {
        let mut s = String::from("snapshot,time,norm,relative_drift\n");
        for row in &r.snapshots {
            s += &format!("{},{:.9},{:.15e},{:.3e}\n", row.index, row.time, row.norm, row.relative_drift);
        }
        s
    })?;
    Ok(Outcome::ok(body))
}

fn load_dir(ctx: &mut Ctx, dir: &Path) -> Result<Vec<FieldState>, CliError> {
    let io = |e: std::io::Error| CliError::domain("io", format!("{}: {e}", dir.display()));
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io)?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()
        .map_err(io)?;
    paths.retain(|p| p.extension().is_some_and(|x| x == SNAPSHOT_EXT));
    paths.sort();
    if paths.is_empty() {
        return Err(CliError::domain("io", format!("{}: no .{SNAPSHOT_EXT} snapshots", dir.display())));
    }
    paths
        .iter()
        .map(|p| {
            let bytes = ctx.read_bytes(p)?;
            read_snapshot(&bytes[..]).map_err(|e| CliError::domain("evolve", format!("{}: {e}", p.display())))
        })
        .collect()
}

#[derive(Serialize)]
struct TrackRow {
    snapshot: usize,
    time: f64,
    components: Option<usize>,
    dropped: usize,
    vertices: Option<usize>,
    max_displacement: Option<f64>,
    gap: Option<String>,
}

#[derive(Serialize)]
struct TrackReport {
    config: Option<EvolutionConfig>,
    init: Option<InitialState>,
    snapshots: Vec<TrackRow>,
    events: Vec<NodalEvent>,
    max_displacement: f64,
}

fn track_cmd(
    ctx: &mut Ctx,
    a: &EvolveArgs,
    from: Option<&Path>,
    events: Option<&Path>,
    settings: TrackSettings,
) -> Result<Outcome, CliError> {
    let (config, init, states) = match from {
        Some(dir) => (None, None, load_dir(ctx, dir)?),
        None => {
            let (c, i, s) = history(ctx, a)?;
            (Some(c), Some(i), s)
        }
    };
    let t = track_nodal(&states, settings);
    if let Some(p) = events {
        ctx.write_side_output(p, events_csv(&t).as_bytes())?;
    }
    let body = match ctx.format {
        Format::Text => timeseries_csv(&t),
        Format::Json => json(&TrackReport {
            config,
            init,
            max_displacement: t.max_displacement(),
            snapshots: t
                .snapshots
                .iter()
                .map(|s| TrackRow {
                    snapshot: s.index,
                    time: s.time,
                    components: s.curve.as_ref().map(|c| c.component_count()),
                    dropped: s.dropped,
                    vertices: s.curve.as_ref().map(|c| c.vertex_count()),
                    max_displacement: s.max_displacement,
                    gap: s.error.clone(),
                })
                .collect(),
            events: t.events.clone(),
        })?,
    };
    Ok(Outcome::ok(body))
}
