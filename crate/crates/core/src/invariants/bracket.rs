use super::{InvariantError, LaurentPoly, PlanarDiagram, UnionFind};
use crate::mosaic::Mosaic;
use crate::par::Execution;

pub const DEFAULT_CROSSING_CAP: usize = 24;

/// States handled by one work item of the state sum.
const CHUNK_BITS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BracketSettings {
    pub cap: usize,
    pub execution: Execution,
}

impl Default for BracketSettings {
    fn default() -> Self {
        BracketSettings {
            cap: DEFAULT_CROSSING_CAP,
            execution: Execution::default(),
        }
    }
}

/// Kauffman bracket in A, normalized so a single crossingless loop is 1.
///
/// The state sum is tallied as a table of counts indexed by the number of
/// A-smoothings and the number of loops, so the integer result does not
/// depend on how states are split across threads.
pub fn bracket(d: &PlanarDiagram, settings: BracketSettings) -> Result<LaurentPoly, InvariantError> {
    let c = d.crossing_count();
    if c > settings.cap {
        return Err(InvariantError::TooManyCrossings {
            count: c,
            cap: settings.cap,
        });
    }
    if d.component_count() == 0 {
        return Err(InvariantError::NoComponents);
    }
    let delta = LaurentPoly::from_terms([(2, -1), (-2, -1)]);
    let free = d.free_loops();
    if c == 0 {
        return Ok(delta.pow(free as u32 - 1));
    }

    let pd = d.pd();
    let edges = 2 * c;
    let max_loops = edges + free;
    let width = max_loops + 1;
    let total: u64 = 1 << c;
    let chunk = 1u64 << CHUNK_BITS.min(c);
    let chunks = (total / chunk) as usize;

    let partials = settings.execution.map_range(0..chunks, |k| {
        let mut counts = vec![0u64; (c + 1) * width];
        let mut uf = UnionFind::new(edges);
        let start = k as u64 * chunk;
        for state in start..start + chunk {
            uf.reset();
            let mut classes = edges;
            for (x, q) in pd.iter().enumerate() {
                let [a, b, cc, dd] = q.edges.map(|e| e - 1);
                let merged = if state >> x & 1 == 0 {
                    uf.union(a, b) as usize + uf.union(cc, dd) as usize
                } else {
                    uf.union(a, dd) as usize + uf.union(b, cc) as usize
                };
                classes -= merged;
            }
            let a_count = c - state.count_ones() as usize;
            counts[a_count * width + classes + free] += 1;
        }
        counts
    });

    let mut counts = vec![0u64; (c + 1) * width];
    for p in partials {
        for (t, v) in counts.iter_mut().zip(p) {
            *t += v;
        }
    }

    let delta_pows: Vec<LaurentPoly> = (0..width).map(|k| delta.pow(k.saturating_sub(1) as u32)).collect();
    let mut out = LaurentPoly::zero();
    for a in 0..=c {
        for loops in 1..width {
            let n = counts[a * width + loops];
            if n == 0 {
                continue;
            }
            let shift = a as i32 - (c - a) as i32;
            out = &out + &(&delta_pows[loops].shift(shift) * n as i64);
        }
    }
    Ok(out)
}

/// Jones polynomial with exponents counting powers of t^(1/2).
pub fn jones(d: &PlanarDiagram, settings: BracketSettings) -> Result<LaurentPoly, InvariantError> {
    let b = bracket(d, settings)?;
    let w = d.writhe();
    let sign = if w % 2 == 0 { 1 } else { -1 };
    let normalized = &b.shift(-3 * w) * sign;
    // A^k = t^(-k/4) = (t^(1/2))^(-k/2)
    let half = normalized
        .compress(2)
        .ok_or_else(|| InvariantError::Malformed("bracket has odd powers of A".into()))?;
    Ok(half.invert_variable())
}

pub fn jones_of_mosaic(m: &Mosaic, settings: BracketSettings) -> Result<LaurentPoly, InvariantError> {
    jones(&PlanarDiagram::from_mosaic(m)?, settings)
}
