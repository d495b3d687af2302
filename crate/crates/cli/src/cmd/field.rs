use serde::Serialize;

use qknot::classify::ComplexField;
use qknot::nodal::{
    curve_csv, curve_obj, eval_chart, extract, fiber_csv, sample_fiber, verify_knot_type, Chart, ExtractSettings,
    NodalCurve, Pole, RefineSettings, SampleGrid, TransversalityWarning, VerifySettings,
};

use crate::args::{CurveFormat, FieldArgs, FieldCmd, Format, GridArgs, PoleArg};
use crate::context::{json, Ctx, Outcome};
use crate::error::CliError;

pub fn pole(p: PoleArg) -> Pole {
    match p {
        PoleArg::Plus => Pole::Plus,
        PoleArg::Minus => Pole::Minus,
    }
}

pub fn parse_field(name: &str, radius: Option<f64>) -> Result<ComplexField, CliError> {
    let f: ComplexField = name.parse().map_err(|e| CliError::usage(format!("--field {name:?}: {e}")))?;
    match radius {
        Some(r) => Ok(f.with_radius(r)?),
        None => Ok(f),
    }
}

fn field_of(a: &FieldArgs) -> Result<ComplexField, CliError> {
    parse_field(&a.field, a.radius)
}

fn grid_of(g: &GridArgs) -> Result<SampleGrid, CliError> {
    if !(g.extent.is_finite() && g.extent > 0.0) {
        return Err(CliError::usage(format!("--extent must be positive, got {}", g.extent)));
    }
    Ok(SampleGrid::stereographic(pole(g.pole), g.n, g.extent))
}

pub fn parse_numbers<const K: usize>(flag: &str, s: &str) -> Result<[f64; K], CliError> {
    let v: Result<Vec<f64>, _> = s.split(',').map(|x| x.trim().parse::<f64>()).collect();
    match v {
        Ok(v) if v.len() == K => Ok(v.try_into().expect("length checked")),
        _ => Err(CliError::usage(format!("{flag} expects {K} comma-separated numbers, got {s:?}"))),
    }
}

pub fn run(ctx: &mut Ctx, cmd: &FieldCmd) -> Result<Outcome, CliError> {
    match cmd {
        FieldCmd::Eval { field, point, at, pole: p } => eval(ctx, field, point.as_deref(), at.as_deref(), *p),
        FieldCmd::Extract {
            field,
            grid,
            no_refine,
            export,
        } => extract_cmd(ctx, field, grid, *no_refine, *export),
        FieldCmd::Verify { field, grid, expect } => verify(ctx, field, grid, expect),
        FieldCmd::Fiber {
            field,
            grid,
            theta,
            band,
            nodal_tol,
        } => fiber(ctx, field, grid, *theta, *band, *nodal_tol),
    }
}

#[derive(Serialize)]
struct EvalReport {
    field: String,
    re: f64,
    im: f64,
    abs: f64,
    phase: Option<f64>,
}

fn eval(ctx: &mut Ctx, a: &FieldArgs, point: Option<&str>, at: Option<&str>, p: PoleArg) -> Result<Outcome, CliError> {
    let f = field_of(a)?;
    let v = match (point, at) {
        (Some(s), _) => f.eval_real(parse_numbers::<4>("--point", s)?),
        (None, Some(s)) => eval_chart(&f, Chart::Stereographic { pole: pole(p) }, parse_numbers::<3>("--at", s)?),
        (None, None) => return Err(CliError::usage("give --point or --at")),
    };
    let abs = v.norm();
    let r = EvalReport {
        field: f.name(),
        re: v.re,
        im: v.im,
        abs,
        phase: (abs > 0.0).then(|| v.arg().rem_euclid(std::f64::consts::TAU)),
    };
    let body = ctx.render(&r, || {
        let ph = r.phase.map(|p| p.to_string()).unwrap_or_else(|| "undefined".into());
        format!("{} {} abs {} phase {}\n", r.re, r.im, r.abs, ph)
    })?;
    Ok(Outcome::ok(body))
}

#[derive(Serialize)]
struct ComponentSummary {
    vertices: usize,
    residual: f64,
    closure_gap: f64,
}

#[derive(Serialize)]
struct ExtractReport<'a> {
    field: String,
    chart: Chart,
    n: usize,
    extent: f64,
    components: Vec<ComponentSummary>,
    residual: f64,
    warnings: &'a [TransversalityWarning],
}

fn summary<'a>(f: &ComplexField, c: &'a NodalCurve) -> ExtractReport<'a> {
    ExtractReport {
        field: f.name(),
        chart: c.grid.chart,
        n: c.grid.n,
        extent: c.grid.extent,
        components: c
            .components
            .iter()
            .map(|k| ComponentSummary {
                vertices: k.points.len(),
                residual: k.residual,
                closure_gap: k.closure_gap,
            })
            .collect(),
        residual: c.residual,
        warnings: &c.warnings,
    }
}

fn extract_cmd(
    ctx: &mut Ctx,
    a: &FieldArgs,
    g: &GridArgs,
    no_refine: bool,
    export: Option<CurveFormat>,
) -> Result<Outcome, CliError> {
    let f = field_of(a)?;
    let grid = grid_of(g)?;
    let settings = ExtractSettings {
        refine: (!no_refine).then(RefineSettings::default),
        execution: ctx.exec,
    };
    let c = extract(&f, &grid, settings)?;
    let chart = c.grid.chart;
    let body = match export {
        Some(CurveFormat::Csv) => curve_csv(&c, |x| eval_chart(&f, chart, x).norm()),
        Some(CurveFormat::Obj) => curve_obj(&c),
        Some(CurveFormat::Json) => json(&summary(&f, &c))?,
        None => {
            let s = summary(&f, &c);
            ctx.render(&s, || {
                let mut t = format!("{}: {} component(s), residual {:e}\n", s.field, s.components.len(), s.residual);
                for (i, k) in s.components.iter().enumerate() {
                    t += &format!("component {i}: {} vertices, residual {:e}\n", k.vertices, k.residual);
                }
                t
            })?
        }
    };
    Ok(Outcome::ok(body))
}

fn verify(ctx: &mut Ctx, a: &FieldArgs, g: &GridArgs, expect: &str) -> Result<Outcome, CliError> {
    let f = field_of(a)?;
    let grid = grid_of(g)?;
    let expected = ctx.diagram(expect)?;
    let c = extract(
        &f,
        &grid,
        ExtractSettings {
            refine: Some(RefineSettings::default()),
            execution: ctx.exec,
        },
    )?;
    let settings = VerifySettings {
        bracket: ctx.bracket_settings(),
        ..VerifySettings::default()
    };
    let r = verify_knot_type(&c, &expected, settings)?;
    let body = ctx.render(&r, || {
        format!(
            "match: {}{}\ncomputed: {}\nexpected: {}\ncrossings: {} projected, {} after reduction\n",
            r.matched,
            if r.matched && r.mirror { " (mirror image)" } else { "" },
            r.computed_text,
            r.expected_text,
            r.crossings_projected,
            r.crossings_reduced
        )
    })?;
    let failure = (!r.matched).then(|| {
        CliError::domain(
            "knot-mismatch",
            format!("computed Jones {} differs from expected {}", r.computed_text, r.expected_text),
        )
    });
    Ok(Outcome { body, failure })
}

fn fiber(ctx: &mut Ctx, a: &FieldArgs, g: &GridArgs, theta: f64, band: f64, nodal_tol: f64) -> Result<Outcome, CliError> {
    if !(band.is_finite() && band > 0.0) {
        return Err(CliError::usage(format!("--band must be positive, got {band}")));
    }
    let f = field_of(a)?;
    let grid = grid_of(g)?;
    let pts = sample_fiber(&f, theta, &grid, band, nodal_tol, ctx.exec);
    let body = match ctx.format {
        Format::Text => fiber_csv(&pts),
        Format::Json => json(&pts)?,
    };
    Ok(Outcome::ok(body))
}
