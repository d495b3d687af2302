use std::fmt::Write as _;

use serde::Serialize;

use qknot::ambient::{orbit, same_orbit, MoveInstance};
use qknot::invariants::{bracket, jones, PlanarDiagram, Variable};
use qknot::mosaic::{EdgeViolation, Mosaic};

use crate::args::MosaicCmd;
use crate::context::{Ctx, Outcome};
use crate::error::CliError;

pub fn run(ctx: &mut Ctx, cmd: &MosaicCmd) -> Result<Outcome, CliError> {
    match cmd {
        MosaicCmd::Validate(k) => validate(ctx, &k.input),
        MosaicCmd::Show(k) => show(ctx, &k.input),
        MosaicCmd::Orbit { knot, members } => orbit_cmd(ctx, &knot.input, *members),
        MosaicCmd::SameOrbit { a, b } => same(ctx, a, b),
        MosaicCmd::Jones { knot, bracket } => jones_cmd(ctx, &knot.input, *bracket),
    }
}

fn violation_line(v: &EdgeViolation) -> String {
    match v {
        EdgeViolation::Boundary { row, col, side } => format!("boundary {row} {col} {side:?}"),
        EdgeViolation::Mismatch { row, col, side } => format!("mismatch {row} {col} {side:?}"),
    }
}

fn validate(ctx: &mut Ctx, input: &str) -> Result<Outcome, CliError> {
    let m = ctx.mosaic(input)?;
    let report = m.validate()?;
    let body = ctx.render(&report, || {
        if report.valid {
            "valid\n".into()
        } else {
            report.violations.iter().map(|v| violation_line(v) + "\n").collect()
        }
    })?;
    let failure = (!report.valid).then(|| {
        CliError::domain(
            "invalid-mosaic",
            format!("{} edge violation(s)", report.violations.len()),
        )
    });
    Ok(Outcome { body, failure })
}

#[derive(Serialize)]
struct ShowReport {
    n: usize,
    cells: Vec<u8>,
    encoding: String,
    crossings: usize,
    components: usize,
    pd: String,
}

fn show(ctx: &mut Ctx, input: &str) -> Result<Outcome, CliError> {
    let m = ctx.mosaic(input)?;
    m.ensure_valid()?;
    let d = PlanarDiagram::from_mosaic(&m)?;
    let r = ShowReport {
        n: m.size(),
        cells: m.cells().to_vec(),
        encoding: m.encode(),
        crossings: m.crossing_count(),
        components: d.component_count(),
        pd: d.pd_text(),
    };
    let body = ctx.render(&r, || {
        format!(
            "{}crossings: {}\ncomponents: {}\npd: {}\n",
            m.render(),
            r.crossings,
            r.components,
            r.pd
        )
    })?;
    Ok(Outcome::ok(body))
}

#[derive(Serialize)]
struct OrbitReport {
    n: usize,
    size: usize,
    representative: String,
    members: Option<Vec<String>>,
}

fn orbit_cmd(ctx: &mut Ctx, input: &str, members: bool) -> Result<Outcome, CliError> {
    let m = ctx.mosaic(input)?;
    let table = ctx.table()?;
    let o = orbit(&m, &table, ctx.orbit_settings())?;
    let r = OrbitReport {
        n: m.size(),
        size: o.len(),
        representative: o.representative().encode(),
        members: members.then(|| o.keys().into_iter().collect()),
    };
    let body = ctx.render(&r, || {
        let mut s = format!("size: {}\nrepresentative:\n{}", r.size, o.representative().render());
        for k in r.members.iter().flatten() {
            let _ = write!(s, "\n{k}");
        }
        s
    })?;
    Ok(Outcome::ok(body))
}

#[derive(Serialize)]
struct SameReport<'a> {
    same: bool,
    moves: Option<usize>,
    witness: Option<&'a [MoveInstance]>,
}

fn same(ctx: &mut Ctx, a: &str, b: &str) -> Result<Outcome, CliError> {
    let ma: Mosaic = ctx.mosaic(a)?;
    let mb: Mosaic = ctx.mosaic(b)?;
    let table = ctx.table()?;
    let res = same_orbit(&ma, &mb, &table, ctx.orbit_settings())?;
    let r = SameReport {
        same: res.same,
        moves: res.witness.as_ref().map(Vec::len),
        witness: res.witness.as_deref(),
    };
    let body = ctx.render(&r, || {
        let mut s = format!("same: {}\n", r.same);
        for mv in r.witness.unwrap_or_default() {
            let _ = writeln!(s, "{} at {} {}", mv.template.name, mv.row, mv.col);
        }
        s
    })?;
    Ok(Outcome::ok(body))
}

fn jones_cmd(ctx: &mut Ctx, input: &str, want_bracket: bool) -> Result<Outcome, CliError> {
    let d = ctx.diagram(input)?;
    let settings = ctx.bracket_settings();
    let (poly, var) = if want_bracket {
        (bracket(&d, settings)?, Variable::A)
    } else {
        (jones(&d, settings)?, Variable::SqrtT)
    };
    let body = match ctx.format {
        crate::args::Format::Json => poly.to_json(var) + "\n",
        crate::args::Format::Text if want_bracket => poly.display_in("A") + "\n",
        crate::args::Format::Text => poly.display_sqrt_t() + "\n",
    };
    Ok(Outcome::ok(body))
}
