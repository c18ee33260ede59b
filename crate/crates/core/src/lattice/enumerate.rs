use std::collections::BTreeMap;

use rayon::prelude::*;

use super::model::ModelKind;
use super::tiles::{occupied, partner, B, DENSE_TILES, DILUTE_TILES, L, POS, R, T};
use crate::arith::gcd_conv;
use crate::error::{Error, Result};

/// Largest M·N accepted per model.
pub const DENSE_MAX_FACES: usize = 36;
pub const DILUTE_MAX_FACES: usize = 20;

/// Tile labels on an M×N torus, row-major, row 0 at the bottom.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TileGrid {
    pub m: usize,
    pub n: usize,
    pub tiles: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LoopCensus {
    pub n_beta: u32,
    /// Primitive class (i, j), j ≥ 0 (i > 0 when j = 0) → number of loops.
    pub windings: BTreeMap<(i64, i64), u32>,
    pub tile_counts: [u32; 9],
    /// Occupied edges on the cut between rows 0 and 1.
    pub h_cross: u32,
    /// Occupied edges on the cut between columns 0 and 1.
    pub v_cross: u32,
}

impl LoopCensus {
    pub fn sector(&self) -> (u8, u8) {
        ((self.h_cross % 2) as u8, (self.v_cross % 2) as u8)
    }

    pub fn n_noncontractible(&self) -> u32 {
        self.windings.values().sum()
    }
}

impl TileGrid {
    pub fn new(m: usize, n: usize, tiles: Vec<u8>) -> Result<Self> {
        if m == 0 || n == 0 || tiles.len() != m * n || tiles.iter().any(|t| !(1..=9).contains(t)) {
            return Err(Error::InvalidParameter("bad tile grid".into()));
        }
        Ok(TileGrid { m, n, tiles })
    }

    pub fn tile(&self, y: usize, x: usize) -> u8 {
        self.tiles[y * self.n + x]
    }

    /// Edge id of `role` on face (y, x). Horizontal edges come first.
    fn edge(&self, y: usize, x: usize, role: usize) -> usize {
        let (m, n) = (self.m, self.n);
        match role {
            B => y * n + x,
            T => ((y + 1) % m) * n + x,
            L => m * n + y * n + x,
            _ => m * n + y * n + (x + 1) % n,
        }
    }

    /// Face and role seen from `side` (0: above/right, 1: below/left) of an edge.
    fn side(&self, e: usize, side: usize) -> (usize, usize, usize) {
        let (m, n) = (self.m, self.n);
        if e < m * n {
            let (y, x) = (e / n, e % n);
            if side == 0 {
                (y, x, B)
            } else {
                ((y + m - 1) % m, x, T)
            }
        } else {
            let k = e - m * n;
            let (y, x) = (k / n, k % n);
            if side == 0 {
                (y, x, L)
            } else {
                (y, (x + n - 1) % n, R)
            }
        }
    }

    /// Every segment end meets a segment end across each edge.
    pub fn has_no_free_ends(&self) -> bool {
        (0..2 * self.m * self.n).all(|e| {
            let (y0, x0, r0) = self.side(e, 0);
            let (y1, x1, r1) = self.side(e, 1);
            occupied(self.tile(y0, x0), r0) == occupied(self.tile(y1, x1), r1)
        })
    }

    /// Traces all loops and classifies them by homology.
    pub fn census(&self) -> Result<LoopCensus> {
        let (m, n) = (self.m, self.n);
        let ne = 2 * m * n;
        let mut out = LoopCensus::default();
        for &t in &self.tiles {
            out.tile_counts[t as usize - 1] += 1;
        }
        let is_occ = |e: usize| {
            let (y, x, r) = self.side(e, 0);
            occupied(self.tile(y, x), r)
        };
        for x in 0..n {
            if is_occ(self.edge(1 % m, x, B)) {
                out.h_cross += 1;
            }
        }
        for y in 0..m {
            if is_occ(self.edge(y, 1 % n, L)) {
                out.v_cross += 1;
            }
        }
        let mut seen = vec![false; ne];
        for start in 0..ne {
            if seen[start] || !is_occ(start) {
                continue;
            }
            let (mut dx, mut dy) = (0i64, 0i64);
            let start_face = self.side(start, 0);
            let (mut y, mut x, mut r_in) = start_face;
            let mut e = start;
            loop {
                seen[e] = true;
                let r_out = partner(self.tile(y, x), r_in)
                    .ok_or_else(|| Error::Internal("free end during loop trace".into()))?;
                dx += POS[r_out].0 - POS[r_in].0;
                dy += POS[r_out].1 - POS[r_in].1;
                e = self.edge(y, x, r_out);
                // B/L roles sit on side 0 of their edge, T/R on side 1
                let far = if r_out == B || r_out == L { 1 } else { 0 };
                (y, x, r_in) = self.side(e, far);
                if (y, x, r_in) == start_face {
                    break;
                }
            }
            if dx % (2 * n as i64) != 0 || dy % (2 * m as i64) != 0 {
                return Err(Error::Internal("loop displacement off lattice".into()));
            }
            let (mut i, mut j) = (dx / (2 * n as i64), dy / (2 * m as i64));
            if i == 0 && j == 0 {
                out.n_beta += 1;
                continue;
            }
            if j < 0 || (j == 0 && i < 0) {
                i = -i;
                j = -j;
            }
            let g = gcd_conv(i, j) as i64;
            *out.windings.entry((i / g, j / g)).or_insert(0) += 1;
        }
        Ok(out)
    }
}

fn guard(kind: ModelKind, m: usize, n: usize) -> Result<()> {
    let cap = match kind {
        ModelKind::Dense => DENSE_MAX_FACES,
        ModelKind::Dilute => DILUTE_MAX_FACES,
    };
    if m == 0 || n == 0 || m * n > cap {
        return Err(Error::SizeGuard(format!(
            "{} enumeration on {m}x{n} exceeds {cap} faces",
            kind.name()
        )));
    }
    Ok(())
}

fn tile_set(kind: ModelKind) -> &'static [u8] {
    match kind {
        ModelKind::Dense => &DENSE_TILES,
        ModelKind::Dilute => &DILUTE_TILES,
    }
}

struct Dfs<'a> {
    m: usize,
    n: usize,
    tiles: &'a [u8],
    grid: Vec<u8>,
}

impl Dfs<'_> {
    fn fits(&self, f: usize, t: u8) -> bool {
        let (m, n) = (self.m, self.n);
        let (y, x) = (f / n, f % n);
        let at = |yy: usize, xx: usize| {
            let k = yy * n + xx;
            if k == f {
                t
            } else {
                self.grid[k]
            }
        };
        if x > 0 && occupied(t, L) != occupied(at(y, x - 1), R) {
            return false;
        }
        if x == n - 1 && occupied(t, R) != occupied(at(y, 0), L) {
            return false;
        }
        if y > 0 && occupied(t, B) != occupied(at(y - 1, x), T) {
            return false;
        }
        if y == m - 1 && occupied(t, T) != occupied(at(0, x), B) {
            return false;
        }
        true
    }

    fn run(&mut self, f: usize, visit: &mut dyn FnMut(&[u8])) {
        if f == self.m * self.n {
            visit(&self.grid);
            return;
        }
        for &t in self.tiles {
            if self.fits(f, t) {
                self.grid[f] = t;
                self.run(f + 1, visit);
            }
        }
        self.grid[f] = 0;
    }
}

/// Prefix assignments of the first `depth` faces that pass the local checks.
fn prefixes(kind: ModelKind, m: usize, n: usize, depth: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut dfs = Dfs {
        m: 1usize.max(m),
        n,
        tiles: tile_set(kind),
        grid: vec![0; m * n],
    };
    fn go(d: &mut Dfs, f: usize, depth: usize, out: &mut Vec<Vec<u8>>) {
        if f == depth {
            out.push(d.grid[..depth].to_vec());
            return;
        }
        for &t in d.tiles {
            if d.fits(f, t) {
                d.grid[f] = t;
                go(d, f + 1, depth, out);
            }
        }
        d.grid[f] = 0;
    }
    go(&mut dfs, 0, depth, &mut out);
    out
}

/// Calls `visit` once for every configuration without free ends.
pub fn for_each_config(
    kind: ModelKind,
    m: usize,
    n: usize,
    mut visit: impl FnMut(&TileGrid, &LoopCensus),
) -> Result<()> {
    guard(kind, m, n)?;
    let mut dfs = Dfs {
        m,
        n,
        tiles: tile_set(kind),
        grid: vec![0; m * n],
    };
    let mut err = None;
    dfs.run(0, &mut |g| {
        let grid = TileGrid {
            m,
            n,
            tiles: g.to_vec(),
        };
        match grid.census() {
            Ok(c) => visit(&grid, &c),
            Err(e) => err = Some(e),
        }
    });
    err.map_or(Ok(()), Err)
}

/// All configurations with their census, in DFS order.
pub fn enumerate_configs(kind: ModelKind, m: usize, n: usize) -> Result<Vec<(TileGrid, LoopCensus)>> {
    let mut out = Vec::new();
    for_each_config(kind, m, n, |g, c| out.push((g.clone(), c.clone())))?;
    Ok(out)
}

/// Parallel fold over all configurations: the first row is split across
/// workers and per-worker accumulators are merged.
pub fn fold_configs<A, F, M>(kind: ModelKind, m: usize, n: usize, init: A, fold: F, merge: M) -> Result<A>
where
    A: Clone + Send + Sync,
    F: Fn(&mut A, &TileGrid, &LoopCensus) + Sync,
    M: Fn(A, A) -> A + Sync + Send,
{
    guard(kind, m, n)?;
    let depth = n.min(m * n);
    let pre = prefixes(kind, m, n, depth);
    pre.par_iter()
        .map(|prefix| -> Result<A> {
            let mut acc = init.clone();
            let mut dfs = Dfs {
                m,
                n,
                tiles: tile_set(kind),
                grid: vec![0; m * n],
            };
            dfs.grid[..depth].copy_from_slice(prefix);
            let mut err = None;
            dfs.run(depth, &mut |g| {
                let grid = TileGrid {
                    m,
                    n,
                    tiles: g.to_vec(),
                };
                match grid.census() {
                    Ok(c) => fold(&mut acc, &grid, &c),
                    Err(e) => err = Some(e),
                }
            });
            err.map_or(Ok(acc), Err)
        })
        .try_reduce(|| init.clone(), |a, b| Ok(merge(a, b)))
}
