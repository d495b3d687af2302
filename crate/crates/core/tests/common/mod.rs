//! Test oracles written independently of the library's diagram code.
#![allow(dead_code)]

use std::collections::BTreeMap;

use qknot::invariants::LaurentPoly;
use qknot::mosaic::Mosaic;
use rand::Rng;

/// A suitably connected mosaic: the symmetric difference of random 2×2
/// face boundaries, with a random crossing or double arc wherever four
/// sides meet.
pub fn random_valid(n: usize, rng: &mut impl Rng, p: f64) -> Mosaic {
    let mut h = vec![false; n * n];
    let mut v = vec![false; n * n];
    for r in 0..n.saturating_sub(1) {
        for c in 0..n - 1 {
            if rng.gen_bool(p) {
                h[r * n + c] ^= true;
                h[(r + 1) * n + c] ^= true;
                v[r * n + c] ^= true;
                v[r * n + c + 1] ^= true;
            }
        }
    }
    let mut cells = vec![0u8; n * n];
    for r in 0..n {
        for c in 0..n {
            let e = h[r * n + c];
            let w = c > 0 && h[r * n + c - 1];
            let s = v[r * n + c];
            let nn = r > 0 && v[(r - 1) * n + c];
            cells[r * n + c] = match (nn, e, s, w) {
                (false, false, false, false) => 0,
                (false, false, true, true) => 1,
                (false, true, true, false) => 2,
                (true, true, false, false) => 3,
                (true, false, false, true) => 4,
                (false, true, false, true) => 5,
                (true, false, true, false) => 6,
                _ => [7, 8, 9, 10][rng.gen_range(0..4)],
            };
        }
    }
    Mosaic::new(n, cells).unwrap()
}

// Sides: 0 = N, 1 = E, 2 = S, 3 = W.
const TILE_ARCS: [&[(usize, usize)]; 11] = [
    &[],
    &[(3, 2)],
    &[(2, 1)],
    &[(1, 0)],
    &[(0, 3)],
    &[(3, 1)],
    &[(0, 2)],
    &[(3, 2), (1, 0)],
    &[(2, 1), (0, 3)],
    &[(3, 1), (0, 2)],
    &[(3, 1), (0, 2)],
];

fn find(p: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while p[r] != r {
        r = p[r];
    }
    let mut y = x;
    while p[y] != r {
        let nxt = p[y];
        p[y] = r;
        y = nxt;
    }
    r
}

fn union(p: &mut [usize], a: usize, b: usize) {
    let (a, b) = (find(p, a), find(p, b));
    p[a] = b;
}

/// Closed loops of a crossing-free cell array.
fn loops(n: usize, cells: &[u8]) -> usize {
    let id = |cell: usize, side: usize| 4 * cell + side;
    let mut parent: Vec<usize> = (0..4 * n * n).collect();
    let mut used = vec![false; 4 * n * n];
    for (cell, &t) in cells.iter().enumerate() {
        for &(a, b) in TILE_ARCS[t as usize] {
            union(&mut parent, id(cell, a), id(cell, b));
            used[id(cell, a)] = true;
            used[id(cell, b)] = true;
        }
        let (r, c) = (cell / n, cell % n);
        if c + 1 < n {
            union(&mut parent, id(cell, 1), id(cell + 1, 3));
        }
        if r + 1 < n {
            union(&mut parent, id(cell, 2), id(cell + n, 0));
        }
    }
    let mut roots: Vec<usize> = (0..4 * n * n).filter(|&i| used[i]).map(|i| find(&mut parent, i)).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

pub type Poly = BTreeMap<i32, i64>;

fn add(p: &mut Poly, e: i32, c: i64) {
    *p.entry(e).or_insert(0) += c;
    if p[&e] == 0 {
        p.remove(&e);
    }
}

fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (&ea, &ca) in a {
        for (&eb, &cb) in b {
            add(&mut out, ea + eb, ca * cb);
        }
    }
    out
}

fn loop_power(k: usize) -> Poly {
    // d = -A² - A⁻²
    let d: Poly = [(2, -1), (-2, -1)].into_iter().collect();
    (0..k).fold([(0, 1)].into_iter().collect(), |acc, _| mul(&acc, &d))
}

/// Kauffman bracket in A by summing over all 2^c smoothings of the
/// crossing tiles. Horizontal-over tiles A-smooth to the S–E/N–W double
/// arc, vertical-over tiles to the W–S/E–N one.
pub fn mosaic_bracket(m: &Mosaic) -> Poly {
    let n = m.size();
    let cells = m.cells().to_vec();
    let xs: Vec<usize> = (0..cells.len()).filter(|&i| cells[i] >= 9).collect();
    let mut total = Poly::new();
    for state in 0u64..1 << xs.len() {
        let mut c = cells.clone();
        let mut a_count = 0i32;
        for (bit, &i) in xs.iter().enumerate() {
            let a = state >> bit & 1 == 0;
            a_count += a as i32;
            let horizontal = cells[i] == 9;
            c[i] = match (horizontal, a) {
                (true, true) | (false, false) => 8,
                _ => 7,
            };
        }
        let b_count = xs.len() as i32 - a_count;
        let l = loops(n, &c);
        for (e, k) in loop_power(l - 1) {
            add(&mut total, e + a_count - b_count, k);
        }
    }
    total
}

/// Writhe of a mosaic, oriented by walking each strand from its first
/// point in row-major order.
pub fn mosaic_writhe(m: &Mosaic) -> i32 {
    let n = m.size();
    let cells = m.cells();
    let partner = |t: u8, s: usize| -> Option<usize> {
        TILE_ARCS[t as usize]
            .iter()
            .find_map(|&(a, b)| if a == s { Some(b) } else if b == s { Some(a) } else { None })
    };
    let step = |cell: usize, side: usize| -> (usize, usize) {
        match side {
            0 => (cell - n, 2),
            1 => (cell + 1, 3),
            2 => (cell + n, 0),
            _ => (cell - 1, 1),
        }
    };
    // direction of travel leaving through a side, with y pointing up
    let dir = |side: usize| -> (i32, i32) { [(0, 1), (1, 0), (0, -1), (-1, 0)][side] };
    let mut seen = vec![[false; 4]; n * n];
    let mut passes: BTreeMap<usize, Vec<(bool, (i32, i32))>> = BTreeMap::new();
    for start in 0..n * n {
        for s0 in 0..4 {
            if seen[start][s0] || partner(cells[start], s0).is_none() {
                continue;
            }
            let (mut cell, mut enter) = (start, s0);
            loop {
                let t = cells[cell];
                let exit = partner(t, enter).unwrap();
                seen[cell][enter] = true;
                seen[cell][exit] = true;
                if t >= 9 {
                    let horizontal_pass = exit % 2 == 1;
                    let over = horizontal_pass == (t == 9);
                    passes.entry(cell).or_default().push((over, dir(exit)));
                }
                let (next, side) = step(cell, exit);
                if next == start && side == s0 {
                    break;
                }
                cell = next;
                enter = side;
            }
        }
    }
    passes
        .values()
        .map(|v| {
            let o = v.iter().find(|p| p.0).unwrap().1;
            let u = v.iter().find(|p| !p.0).unwrap().1;
            (o.0 * u.1 - o.1 * u.0).signum()
        })
        .sum()
}

/// (-A³)^(-w) ⟨K⟩ with A = t^(-1/4), as exponents of t^(1/2).
pub fn normalize(bracket: &Poly, writhe: i32) -> LaurentPoly {
    let sign = if writhe % 2 == 0 { 1 } else { -1 };
    LaurentPoly::from_terms(bracket.iter().map(|(&e, &c)| {
        let a = e - 3 * writhe;
        assert_eq!(a % 2, 0, "odd power of A in a normalized bracket");
        (-a / 2, sign * c)
    }))
}

pub fn mosaic_jones(m: &Mosaic) -> LaurentPoly {
    normalize(&mosaic_bracket(m), mosaic_writhe(m))
}

/// `X[i,j,k,l]` quadruples, i the incoming under edge, counterclockwise.
pub fn parse_pd(text: &str) -> Vec<[usize; 4]> {
    text.split("X[")
        .skip(1)
        .map(|chunk| {
            let body = &chunk[..chunk.find(']').unwrap()];
            let v: Vec<usize> = body.split(',').map(|s| s.trim().parse().unwrap()).collect();
            [v[0], v[1], v[2], v[3]]
        })
        .collect()
}

/// Bracket of a PD code, smoothing X[i,j,k,l] to (i,j)(k,l) for A and
/// (i,l)(j,k) for B.
pub fn pd_bracket(pd: &[[usize; 4]]) -> Poly {
    let max = pd.iter().flatten().copied().max().unwrap_or(0);
    let mut total = Poly::new();
    for state in 0u64..1 << pd.len() {
        let mut parent: Vec<usize> = (0..=max).collect();
        let mut a_count = 0i32;
        for (bit, &[i, j, k, l]) in pd.iter().enumerate() {
            if state >> bit & 1 == 0 {
                a_count += 1;
                union(&mut parent, i, j);
                union(&mut parent, k, l);
            } else {
                union(&mut parent, i, l);
                union(&mut parent, j, k);
            }
        }
        let mut roots: Vec<usize> = (1..=max).map(|e| find(&mut parent, e)).collect();
        roots.sort_unstable();
        roots.dedup();
        let b_count = pd.len() as i32 - a_count;
        for (e, c) in loop_power(roots.len() - 1) {
            add(&mut total, e + a_count - b_count, c);
        }
    }
    total
}

/// Writhe of a one-component PD code labelled 1..2n along the knot.
pub fn pd_writhe(pd: &[[usize; 4]]) -> i32 {
    pd.iter()
        .map(|&[_, j, _, l]| {
            let (j, l) = (j as i64, l as i64);
            if j - l == 1 || l - j > 1 {
                1
            } else {
                -1
            }
        })
        .sum()
}

pub fn pd_jones(pd: &[[usize; 4]]) -> LaurentPoly {
    normalize(&pd_bracket(pd), pd_writhe(pd))
}

/// Reference Jones polynomials, in powers of t^(1/2).
pub fn right_trefoil() -> LaurentPoly {
    LaurentPoly::from_terms([(2, 1), (6, 1), (8, -1)])
}

pub fn figure_eight() -> LaurentPoly {
    LaurentPoly::from_terms([(4, 1), (2, -1), (0, 1), (-2, -1), (-4, 1)])
}

/// A three-strand closed braid wound around a torus, sampled at 1800
/// points. Its Jones polynomial is that of the figure-eight knot.
pub fn closed_braid_figure_eight() -> Vec<[f64; 3]> {
    let s = 3.0;
    let l = 2.0;
    let samples = 1800;
    (0..samples)
        .map(|i| {
            let u = std::f64::consts::TAU * s * i as f64 / samples as f64;
            let th = l * u / s;
            let (re, im) = (th.cos(), 0.5 * (2.0 * th).sin());
            let rho = 3.0 + re;
            [rho * u.cos(), rho * u.sin(), im]
        })
        .collect()
}
