use std::fmt::Write as _;
use std::io::{Read, Write};

use num_complex::Complex64;

use super::{EvolveError, FieldState, Tracking};

/// Leading bytes of a binary snapshot.
pub const SNAPSHOT_MAGIC: &[u8; 8] = b"QKSNAP01";

/// Little-endian layout: magic, n (u64), side, time, norm0 (f64), then n³
/// (re, im) pairs with x fastest.
pub fn write_snapshot(s: &FieldState, mut w: impl Write) -> Result<(), EvolveError> {
    let mut buf = Vec::with_capacity(40 + 16 * s.values.len());
    buf.extend_from_slice(SNAPSHOT_MAGIC);
    buf.extend_from_slice(&(s.n as u64).to_le_bytes());
    for v in [s.side, s.time, s.norm0] {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    for v in &s.values {
        buf.extend_from_slice(&v.re.to_le_bytes());
        buf.extend_from_slice(&v.im.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_snapshot(mut r: impl Read) -> Result<FieldState, EvolveError> {
    let mut buf = Vec::new();
    r.read_to_end(&mut buf)?;
    if buf.len() < 40 || &buf[..8] != SNAPSHOT_MAGIC {
        return Err(EvolveError::Snapshot("missing snapshot header".into()));
    }
    let word = |i: usize| -> [u8; 8] { buf[i..i + 8].try_into().expect("8-byte slice") };
    let n = u64::from_le_bytes(word(8)) as usize;
    let (side, time, norm0) = (
        f64::from_le_bytes(word(16)),
        f64::from_le_bytes(word(24)),
        f64::from_le_bytes(word(32)),
    );
    let count = n.checked_pow(3).ok_or_else(|| EvolveError::Snapshot(format!("resolution {n} too large")))?;
    if buf.len() != 40 + 16 * count {
        return Err(EvolveError::Snapshot(format!(
            "expected {} bytes for n = {n}, found {}",
            40 + 16 * count,
            buf.len()
        )));
    }
    let values = (0..count)
        .map(|i| {
            let o = 40 + 16 * i;
            Complex64::new(f64::from_le_bytes(word(o)), f64::from_le_bytes(word(o + 8)))
        })
        .collect();
    Ok(FieldState {
        n,
        side,
        values,
        time,
        norm0,
    })
}

/// One row per snapshot; gaps carry the extraction error.
pub fn timeseries_csv(t: &Tracking) -> String {
    let mut s = String::from("snapshot,time,components,dropped,vertices,max_displacement,status\n");
    for snap in &t.snapshots {
        let (comps, verts) = snap
            .curve
            .as_ref()
            .map(|c| (c.component_count().to_string(), c.vertex_count().to_string()))
            .unwrap_or_default();
        let disp = snap.max_displacement.map(|d| format!("{d:.6e}")).unwrap_or_default();
        let status = match &snap.error {
            None => "ok".to_string(),
            Some(e) => format!("\"gap: {}\"", e.replace('"', "'")),
        };
        let _ = writeln!(s, "{},{:.9},{comps},{},{verts},{disp},{status}", snap.index, snap.time, snap.dropped);
    }
    s
}

pub fn events_csv(t: &Tracking) -> String {
    let ids = |v: &[usize]| v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
    let mut s = String::from("snapshot,time,kind,before,after,distance\n");
    for e in &t.events {
        let kind = serde_json::to_value(e.kind).expect("unit enum serializes");
        let _ = writeln!(
            s,
            "{},{:.9},{},{},{},{:.6e}",
            e.snapshot,
            e.time,
            kind.as_str().unwrap_or_default(),
            ids(&e.before),
            ids(&e.after),
            e.distance
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snapshot_survives_a_write_read_cycle() {
        let values = (0..27).map(|i| Complex64::new(i as f64, -0.5 * i as f64)).collect();
        let s = FieldState::from_values(3, 2.5, values, 0.125);
        let mut buf = Vec::new();
        write_snapshot(&s, &mut buf).unwrap();
        assert_eq!(read_snapshot(&buf[..]).unwrap(), s);
        assert!(read_snapshot(&buf[..buf.len() - 1]).is_err());
        assert!(read_snapshot(&b"not a snapshot at all, clearly......xxxx"[..]).is_err());
    }
}
