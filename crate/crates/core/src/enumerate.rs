//! Enumeration of lattice points with prescribed embedding sizes.
//!
//! The logarithmic space `{c ∈ R^3 : c1 + c2 + c3 = 0}` is tiled by cells
//! centred on the integer points `c = (c1, c2, -c1 - c2)`. In the cell at
//! `c`, a lattice is measured by the quadratic form
//! `Σ_j (e^(-c_j - offset) σ_j(x))^2`; its points of size at most
//! [`CELL_BOUND`] are found by LLL reduction followed by Fincke–Pohst
//! enumeration. Every `x` whose centred log vector
//! `log|σ_j(x)| - offset` lies within `1/2` of `(c1, c2)` in its first two
//! coordinates is found in the cell `c`.
//!
//! Reduced bases are cached per cell and reused as a warm start for the
//! neighbouring cells, which keeps the floating-point reduction well
//! conditioned far from the origin.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{FromPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::CubicField;
use crate::hp::Real;
use crate::linalg::{IMat3, IVec3};

/// Squared radius of the search ball in each cell. The rounding cell of a
/// log vector has coordinate offsets within `(1/2, 1/2, 1)`, so the worst
/// case is `2e + e^2 ≈ 12.83`; the rest is slack for rounding.
pub const CELL_BOUND: f64 = 13.5;

/// Largest distance between a log vector and any cell whose ball contains
/// it (attained near `(a, a, -2a)` with `2e^(2a) + e^(-4a) = 12.83`).
pub const CELL_REACH: f64 = 2.3;

/// Distance from a log vector to its rounding cell: `sqrt(1/4 + 1/4 + 1)`.
pub const ROUNDING_REACH: f64 = 1.23;

pub type Cell = (i64, i64);

pub fn cell_vector(c: Cell) -> [i64; 3] {
    [c.0, c.1, -c.0 - c.1]
}

pub fn cell_norm2(c: Cell) -> i64 {
    let v = cell_vector(c);
    v[0] * v[0] + v[1] * v[1] + v[2] * v[2]
}

/// The cyclic shift matching the automorphism: the reduced basis of
/// `rotate(c)` is the image under `τ` of the reduced basis of `c`.
pub fn rotate(c: Cell) -> Cell {
    let v = cell_vector(c);
    (v[1], v[2])
}

fn canonical(c: Cell) -> (Cell, usize) {
    let r1 = rotate(c);
    let r2 = rotate(r1);
    let mut best = (c, 0);
    for (k, r) in [(1, r1), (2, r2)] {
        if r > best.0 {
            best = (r, k);
        }
    }
    best
}

/// Cells with squared norm in `(lo2, hi2]`, sorted by norm then
/// lexicographically. With `symmetric`, only one cell per rotation orbit.
pub fn cells_in_shell(lo2: i64, hi2: i64, symmetric: bool) -> Vec<Cell> {
    let r = ((hi2 as f64).sqrt() as i64) + 1;
    let mut out = Vec::new();
    for c1 in -r..=r {
        for c2 in -r..=r {
            let c = (c1, c2);
            let n = cell_norm2(c);
            if n <= lo2 || n > hi2 {
                continue;
            }
            if symmetric && canonical(c).0 != c {
                continue;
            }
            out.push(c);
        }
    }
    out.sort_by_key(|&c| (cell_norm2(c), c));
    out
}

#[derive(Clone)]
struct Basis {
    vecs: IMat3,
    emb: [[Real; 3]; 3],
}

impl Basis {
    fn rotated(&self, k: &CubicField, times: usize) -> Basis {
        let mut b = self.clone();
        for _ in 0..times {
            b = Basis {
                vecs: b.vecs.clone().map(|v| k.automorphism(&v)),
                emb: b
                    .emb
                    .clone()
                    .map(|e| [e[1].clone(), e[2].clone(), e[0].clone()]),
            };
        }
        b
    }
}

/// A lattice point found in a cell, with its scaled embeddings.
#[derive(Debug, Clone)]
pub struct CellPoint {
    pub coords: IVec3,
    pub scaled: [f64; 3],
}

/// Cell-by-cell enumerator over one lattice.
pub struct CellScanner<'k> {
    field: &'k CubicField,
    offset: f64,
    symmetric: bool,
    start: Basis,
    reduced: HashMap<Cell, Basis>,
}

impl<'k> CellScanner<'k> {
    /// `lattice` rows are integral coordinates of a Z-basis; `offset` is
    /// added to every log coordinate (use `log(N)/3` for an ideal of norm
    /// `N`). `symmetric` declares the lattice stable under `τ`.
    pub fn new(field: &'k CubicField, lattice: &IMat3, offset: f64, symmetric: bool) -> Self {
        let emb = lattice.clone().map(|v| field.embed_integral(&v));
        CellScanner {
            field,
            offset,
            symmetric,
            start: Basis {
                vecs: lattice.clone(),
                emb,
            },
            reduced: HashMap::new(),
        }
    }

    fn scale(&self, c: Cell) -> [f64; 3] {
        cell_vector(c).map(|x| (-(x as f64) - self.offset).exp())
    }

    fn cached(&self, c: Cell) -> Option<Basis> {
        if self.symmetric {
            let (m, k) = canonical(c);
            self.reduced
                .get(&m)
                .map(|b| b.rotated(self.field, (3 - k) % 3))
        } else {
            self.reduced.get(&c).cloned()
        }
    }

    fn warm_start(&self, c: Cell) -> Basis {
        const STEPS: [Cell; 6] = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)];
        let mut best: Option<(i64, Basis)> = None;
        for d in STEPS {
            let n = (c.0 + d.0, c.1 + d.1);
            let n2 = cell_norm2(n);
            if best.as_ref().is_some_and(|(b, _)| *b <= n2) {
                continue;
            }
            if let Some(b) = self.cached(n) {
                best = Some((n2, b));
            }
        }
        best.map(|(_, b)| b).unwrap_or_else(|| self.start.clone())
    }

    /// All non-zero lattice points of scaled size at most [`CELL_BOUND`]
    /// in cell `c`, one of each `±` pair.
    pub fn scan(&mut self, c: Cell) -> Result<Vec<CellPoint>> {
        let s = self.scale(c);
        let mut basis = self.warm_start(c);
        lll(&mut basis, &s)?;
        let pts = enumerate_short(&basis, &s, CELL_BOUND);
        let key = if self.symmetric { canonical(c).0 } else { c };
        if key == c {
            self.reduced.insert(c, basis);
        }
        Ok(pts)
    }
}

fn scaled_rows(b: &Basis, s: &[f64; 3]) -> [[f64; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| b.emb[i][j].to_f64() * s[j]))
}

struct Gs {
    mu: [[f64; 3]; 3],
    bstar: [f64; 3],
}

fn gram_schmidt(v: &[[f64; 3]; 3]) -> Gs {
    let dot = |a: &[f64; 3], b: &[f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let mut star = [[0.0; 3]; 3];
    let mut mu = [[0.0; 3]; 3];
    let mut bstar = [0.0; 3];
    for i in 0..3 {
        let mut w = v[i];
        for j in 0..i {
            mu[i][j] = if bstar[j] > 0.0 {
                dot(&v[i], &star[j]) / bstar[j]
            } else {
                0.0
            };
            for t in 0..3 {
                w[t] -= mu[i][j] * star[j][t];
            }
        }
        star[i] = w;
        bstar[i] = dot(&w, &w);
    }
    Gs { mu, bstar }
}

/// LLL reduction (δ = 0.99) of the scaled embedding lattice, tracking the
/// exact integral coordinates. Embeddings are updated in high precision so
/// the floating-point rows never accumulate cancellation error.
fn lll(b: &mut Basis, s: &[f64; 3]) -> Result<()> {
    const DELTA: f64 = 0.99;
    let mut v = scaled_rows(b, s);
    let mut k = 1;
    let mut iterations = 0;
    while k < 3 {
        iterations += 1;
        if iterations > 100_000 {
            return Err(Error::Internal(
                "lattice reduction did not terminate".into(),
            ));
        }
        // size reduction, repeated while floating error leaves large μ
        loop {
            let gs = gram_schmidt(&v);
            let mut changed = false;
            for j in (0..k).rev() {
                let r = gs.mu[k][j].round();
                if r != 0.0 && gs.mu[k][j].abs() > 0.501 {
                    let rb = BigInt::from_f64(r).expect("finite multiplier");
                    let (lo, hi) = b.vecs.split_at_mut(k);
                    for t in 0..3 {
                        hi[0][t] -= &rb * &lo[j][t];
                    }
                    for t in 0..3 {
                        b.emb[k][t] = b.emb[k][t].sub(&b.emb[j][t].mul_int(&rb));
                    }
                    changed = true;
                    break;
                }
            }
            if !changed {
                break;
            }
            v[k] = std::array::from_fn(|t| b.emb[k][t].to_f64() * s[t]);
        }
        let gs = gram_schmidt(&v);
        let m = gs.mu[k][k - 1];
        if gs.bstar[k] < (DELTA - m * m) * gs.bstar[k - 1] {
            b.vecs.swap(k, k - 1);
            b.emb.swap(k, k - 1);
            v.swap(k, k - 1);
            k = (k - 1).max(1);
        } else {
            k += 1;
        }
    }
    Ok(())
}

/// Fincke–Pohst enumeration of `Σ x_i v_i` with squared length `≤ bound`.
fn enumerate_short(b: &Basis, s: &[f64; 3], bound: f64) -> Vec<CellPoint> {
    let v = scaled_rows(b, s);
    let gs = gram_schmidt(&v);
    let mut out = Vec::new();
    let mut x = [0i64; 3];
    enumerate_level(2, &gs, bound, 0.0, &mut x, &mut |x| {
        if x.iter().all(|&t| t == 0) {
            return;
        }
        // keep one of ±x: the last non-zero coordinate is positive
        let lead = x.iter().rev().find(|&&t| t != 0).copied().unwrap_or(0);
        if lead < 0 {
            return;
        }
        let mut coords: IVec3 = Default::default();
        for i in 0..3 {
            if x[i] != 0 {
                let xi = BigInt::from(x[i]);
                for t in 0..3 {
                    coords[t] += &xi * &b.vecs[i][t];
                }
            }
        }
        let scaled = std::array::from_fn(|t| (0..3).map(|i| x[i] as f64 * v[i][t]).sum());
        out.push(CellPoint { coords, scaled });
    });
    out.retain(|p| !p.coords.iter().all(|c| c.is_zero()));
    out
}

fn enumerate_level(
    level: usize,
    gs: &Gs,
    bound: f64,
    partial: f64,
    x: &mut [i64; 3],
    emit: &mut dyn FnMut(&[i64; 3]),
) {
    let center: f64 = -((level + 1)..3)
        .map(|j| gs.mu[j][level] * x[j] as f64)
        .sum::<f64>();
    let room = bound - partial;
    if room < 0.0 || gs.bstar[level] <= 0.0 {
        return;
    }
    let half = (room / gs.bstar[level]).sqrt() + 1e-9;
    let lo = (center - half).ceil() as i64;
    let hi = (center + half).floor() as i64;
    for t in lo..=hi {
        let d = t as f64 - center;
        let p = partial + d * d * gs.bstar[level];
        if p > bound {
            continue;
        }
        x[level] = t;
        if level == 0 {
            emit(x);
        } else {
            enumerate_level(level - 1, gs, bound, p, x, emit);
        }
    }
    x[level] = 0;
}
