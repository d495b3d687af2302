use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use qknot::classify::{abelianization_rank, wirtinger, WirtingerRelation};
use qknot::hilbert::{DiagonalObservable, HilbertError, OrbitSummary, StateVector};
use qknot::invariants::{jones_in_t, jones_of_mosaic, BracketSettings, InvariantError};
use qknot::mosaic::Mosaic;

use crate::args::{KnotInput, ObservableCmd};
use crate::context::{Ctx, Outcome};
use crate::error::CliError;

#[derive(Serialize)]
struct Amplitude {
    label: String,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct ObservableReport {
    observable: String,
    lattice: usize,
    expectation: f64,
    image: Vec<Amplitude>,
    orbits: Vec<OrbitSummary>,
}

fn amplitudes(s: &StateVector) -> Vec<Amplitude> {
    s.iter()
        .map(|(l, a)| Amplitude {
            label: l.to_string(),
            re: a.re,
            im: a.im,
        })
        .collect()
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// A state JSON file, or a mosaic taken as a single basis ket.
fn load_state(ctx: &mut Ctx, source: &str) -> Result<StateVector, CliError> {
    if source.starts_with("lib:") {
        return Ok(StateVector::mosaic(&ctx.mosaic(source)?));
    }
    let text = ctx.read(Path::new(source))?;
    if text.trim_start().starts_with('[') {
        Ok(StateVector::from_json(&text)?)
    } else {
        Ok(StateVector::mosaic(&Mosaic::parse_any(&text)?))
    }
}

fn lattice_of(psi: &StateVector) -> Result<usize, CliError> {
    let (label, _) = psi
        .iter()
        .next()
        .ok_or_else(|| CliError::domain("hilbert", "state has no nonzero amplitudes"))?;
    Ok(Mosaic::decode(label)?.size())
}

pub fn run(ctx: &mut Ctx, cmd: &ObservableCmd) -> Result<Outcome, CliError> {
    let (name, psi, obs) = match cmd {
        ObservableCmd::Chi { knot, state } => {
            let k = ctx.mosaic(knot)?;
            let psi = load_state(ctx, state)?;
            let obs = DiagonalObservable::chi(&k, ctx.table()?, ctx.orbit_settings())?;
            (format!("chi:{}", one_line(&k.encode())), psi, obs)
        }
        ObservableCmd::Invariant { invariant, state } => {
            let psi = load_state(ctx, state)?;
            let n = lattice_of(&psi)?;
            let inv = parse_invariant(invariant, ctx.bracket_settings())?;
            let obs = DiagonalObservable::invariant(inv, n, ctx.table()?, ctx.orbit_settings());
            (invariant.clone(), psi, obs)
        }
    };
    let image = obs.apply(&psi)?;
    let r = ObservableReport {
        observable: name,
        lattice: obs.lattice(),
        expectation: obs.expectation(&psi)?,
        image: amplitudes(&image),
        orbits: obs.export(),
    };
    let body = ctx.render(&r, || {
        let mut s = format!("observable: {}\nexpectation: {}\n", r.observable, r.expectation);
        for o in &r.orbits {
            let _ = writeln!(
                s,
                "orbit size {} eigenvalue {} representative {}",
                o.orbit_size,
                o.eigenvalue,
                one_line(&o.orbit_representative)
            );
        }
        s
    })?;
    Ok(Outcome::ok(body))
}

type Invariant = Box<dyn Fn(&Mosaic) -> Result<f64, HilbertError> + Send + Sync>;

fn parse_invariant(source: &str, settings: BracketSettings) -> Result<Invariant, CliError> {
    let bad = |m: String| CliError::usage(format!("--invariant {source:?}: {m}"));
    let (name, arg) = source.split_once(':').unwrap_or((source, ""));
    let wrap = |e: InvariantError| HilbertError::Invariant(e.to_string());
    match name {
        "jones_at" => {
            let t: f64 = arg.parse().map_err(|_| bad(format!("expected a number, got {arg:?}")))?;
            Ok(Box::new(move |m: &Mosaic| {
                let v = jones_of_mosaic(m, settings).map_err(wrap)?;
                jones_in_t(&v).and_then(|p| p.evaluate(t)).map_err(wrap)
            }))
        }
        "crossings" if arg.is_empty() => Ok(Box::new(|m: &Mosaic| Ok(m.crossing_count() as f64))),
        "const" => {
            let c: f64 = arg.parse().map_err(|_| bad(format!("expected a number, got {arg:?}")))?;
            Ok(Box::new(move |_: &Mosaic| Ok(c)))
        }
        _ => Err(bad("expected jones_at:T, crossings or const:C".into())),
    }
}

#[derive(Serialize)]
struct WirtingerReport {
    generators: usize,
    relations: Vec<WirtingerRelation>,
    abelianization_rank: usize,
    text: String,
}

pub fn wirtinger_cmd(ctx: &mut Ctx, k: &KnotInput) -> Result<Outcome, CliError> {
    let d = ctx.diagram(&k.input)?;
    let w = wirtinger(&d)?;
    let r = WirtingerReport {
        generators: w.arcs,
        abelianization_rank: abelianization_rank(&w.presentation()),
        text: w.to_text(),
        relations: w.relations.clone(),
    };
    let body = ctx.render(&r, || format!("{}abelianization rank: {}\n", r.text, r.abelianization_rank))?;
    Ok(Outcome::ok(body))
}
