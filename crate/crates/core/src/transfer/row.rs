use std::collections::HashMap;

use num_complex::Complex64;

use super::laurent::{LaurentMatrix, OmegaLaurent};
use super::link::{module_basis, LinkState, Site};
use crate::error::{Error, Result};
use crate::lattice::tiles::{occupied, partner, B, DENSE_TILES, DILUTE_TILES, L, R, T};
use crate::lattice::{face_weights, ModelKind, ModelSpec};

/// Largest module dimension accepted for dense Laurent matrices.
pub const MAX_DIM: usize = 2500;

/// One-row transfer matrix on a standard module, `matrix[new][old]`.
#[derive(Clone, Debug)]
pub struct TransferOperator {
    pub spec: ModelSpec,
    pub n: usize,
    pub d: usize,
    pub basis: Vec<LinkState>,
    pub matrix: LaurentMatrix,
}

/// Outcome of stacking one row of tiles on a link state.
#[derive(Debug, PartialEq)]
pub(crate) struct RowAction {
    pub state: LinkState,
    pub omega: i64,
    pub n_beta: u32,
    pub n_alpha: u32,
}

struct Graph {
    // edges: (node a, node b, doubled seam crossings going a -> b)
    edges: Vec<(usize, usize, i64)>,
    ports: Vec<Vec<(usize, usize)>>,
}

impl Graph {
    fn link(&mut self, a: usize, b: usize, cross: i64) {
        let e = self.edges.len();
        self.edges.push((a, b, cross));
        self.ports[a].push((e, 0));
        self.ports[b].push((e, 1));
    }

    /// Follows a strand out through `from` until it reaches a node with a
    /// single port or comes back to `from`. Returns (end node, crossings).
    fn walk(&self, from: (usize, usize), used: &mut [bool]) -> Result<(usize, i64)> {
        let (mut e, mut s) = from;
        let mut cross = 0;
        loop {
            used[e] = true;
            let (a, b, c) = self.edges[e];
            let at = if s == 0 { b } else { a };
            cross += if s == 0 { c } else { -c };
            let arrived = (e, 1 - s);
            let next = self.ports[at].iter().find(|&&p| p != arrived);
            match next {
                Some(&p) if self.ports[at].len() == 2 => {
                    if p == from {
                        return halve(at, cross);
                    }
                    (e, s) = p;
                }
                _ => return halve(at, cross),
            }
        }
    }
}

fn halve(at: usize, c: i64) -> Result<(usize, i64)> {
    if c % 2 != 0 {
        return Err(Error::Internal("strand ends on the seam".into()));
    }
    Ok((at, c / 2))
}

/// Composes a row of tiles on top of `state`. `None` means the row joins
/// two defects and the term vanishes.
pub(crate) fn apply_row(state: &LinkState, tiles: &[u8]) -> Result<Option<RowAction>> {
    let n = state.n();
    // nodes: top x -> x, bottom x -> n + x, vertical edge left of face x -> 2n + x
    let node = |x: usize, role: usize| match role {
        T => x,
        B => n + x,
        L => 2 * n + x,
        _ => 2 * n + (x + 1) % n,
    };
    let mut g = Graph {
        edges: Vec::new(),
        ports: vec![Vec::new(); 3 * n],
    };
    for (x, &t) in tiles.iter().enumerate() {
        for r in 0..4 {
            if let Some(q) = partner(t, r) {
                if q > r {
                    let exit = |role: usize| match role {
                        R if x == n - 1 => 1,
                        L if x == 0 => -1,
                        _ => 0,
                    };
                    // half a crossing on each side of the seam edge
                    let c = exit(q) - exit(r);
                    g.link(node(x, r), node(x, q), c);
                }
            }
        }
    }
    for a in 0..n {
        if state.occupied(a) != occupied(tiles[a], B) {
            return Err(Error::Internal("row does not fit the state".into()));
        }
        if let Site::Arc { partner: b, wraps } = state.sites[a] {
            let b = b as usize;
            if b > a {
                g.link(n + a, n + b, if wraps { -2 } else { 0 });
            }
        }
    }
    let mut used = vec![false; g.edges.len()];
    let mut sites = vec![Site::Vacant; n];
    let mut omega = 0;
    for t in 0..n {
        let Some(&port) = g.ports[t].first() else { continue };
        if used[port.0] {
            continue;
        }
        let (end, c) = g.walk(port, &mut used)?;
        if end < n {
            let (a, b, cab) = if t < end { (t, end, c) } else { (end, t, -c) };
            let wraps = match cab {
                0 => false,
                -1 => true,
                _ => return Err(Error::Internal(format!("arc with seam crossing {cab}"))),
            };
            sites[a] = Site::Arc { partner: b as u8, wraps };
            sites[b] = Site::Arc { partner: a as u8, wraps };
        } else if end < 2 * n && state.sites[end - n] == Site::Defect {
            sites[t] = Site::Defect;
            omega -= c;
        } else {
            return Err(Error::Internal("strand ended inside the row".into()));
        }
    }
    for x in 0..n {
        if state.sites[x] == Site::Defect && !used[g.ports[n + x][0].0] {
            return Ok(None);
        }
    }
    let (mut n_beta, mut n_alpha) = (0, 0);
    for e in 0..g.edges.len() {
        if used[e] {
            continue;
        }
        let (_, c) = g.walk((e, 0), &mut used)?;
        match c {
            0 => n_beta += 1,
            1 | -1 if state.defects() == 0 => n_alpha += 1,
            _ => return Err(Error::Internal(format!("closed loop with seam crossing {c}"))),
        }
    }
    Ok(Some(RowAction {
        state: LinkState { sites },
        omega,
        n_beta,
        n_alpha,
    }))
}

/// All rows of tiles whose bottom edges match the occupancy of `state`.
pub(crate) fn rows_for(kind: ModelKind, state: &LinkState) -> Vec<Vec<u8>> {
    let n = state.n();
    let set: &[u8] = match kind {
        ModelKind::Dense => &DENSE_TILES,
        ModelKind::Dilute => &DILUTE_TILES,
    };
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn go(set: &[u8], state: &LinkState, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        let n = state.n();
        let x = cur.len();
        if x == n {
            if occupied(cur[n - 1], R) == occupied(cur[0], L) {
                out.push(cur.clone());
            }
            return;
        }
        for &t in set {
            if occupied(t, B) != state.occupied(x) {
                continue;
            }
            if x > 0 && occupied(t, L) != occupied(cur[x - 1], R) {
                continue;
            }
            cur.push(t);
            go(set, state, cur, out);
            cur.pop();
        }
    }
    go(set, state, &mut cur, &mut out);
    out
}

fn size_check(kind: ModelKind, n: usize, d: usize) -> Result<()> {
    let cap = match kind {
        ModelKind::Dense => 12,
        ModelKind::Dilute => 8,
    };
    if n > cap {
        return Err(Error::SizeGuard(format!("{} transfer matrix with N={n} > {cap}", kind.name())));
    }
    let _ = d;
    Ok(())
}

pub fn build_transfer(spec: &ModelSpec, n: usize, d: usize) -> Result<TransferOperator> {
    size_check(spec.kind, n, d)?;
    let basis = module_basis(spec.kind, n, d)?;
    build_on_basis(spec, n, d, basis)
}

/// Builds the operator on a caller-supplied ordering of the module basis.
pub fn build_on_basis(spec: &ModelSpec, n: usize, d: usize, basis: Vec<LinkState>) -> Result<TransferOperator> {
    if basis.len() > MAX_DIM {
        return Err(Error::SizeGuard(format!("module dimension {} > {MAX_DIM}", basis.len())));
    }
    let rho = face_weights(spec)?;
    let beta = spec.beta();
    let index: HashMap<&LinkState, usize> = basis.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut matrix = LaurentMatrix::zeros(basis.len());
    for (col, st) in basis.iter().enumerate() {
        for row in rows_for(spec.kind, st) {
            let Some(act) = apply_row(st, &row)? else { continue };
            let &i = index
                .get(&act.state)
                .ok_or_else(|| Error::Internal(format!("{} not in the module basis", act.state.render())))?;
            let w: f64 = row.iter().map(|&t| rho[t as usize - 1]).product::<f64>() * beta.powi(act.n_beta as i32);
            if w == 0.0 {
                continue;
            }
            let term = OmegaLaurent::alpha_pow(act.n_alpha).shift(act.omega).scale(Complex64::new(w, 0.0));
            *matrix.get_mut(i, col) += &term;
        }
    }
    Ok(TransferOperator {
        spec: *spec,
        n,
        d,
        basis,
        matrix,
    })
}

impl TransferOperator {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// tr T^M as a Laurent polynomial in ω.
    pub fn trace_power(&self, m: u32) -> OmegaLaurent {
        self.matrix.pow(m).trace()
    }

    pub fn numeric(&self, omega: Complex64) -> faer::Mat<Complex64> {
        self.matrix.eval(omega)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(k: f64) -> Complex64 {
        Complex64::new(k, 0.0)
    }

    #[test]
    fn dense_two_sites_two_defects_by_hand() {
        let spec = ModelSpec::new(ModelKind::Dense, 2, 3, 0.3).unwrap();
        let r = face_weights(&spec).unwrap();
        let t = build_transfer(&spec, 2, 2).unwrap();
        assert_eq!(t.dim(), 1);
        let e = t.matrix.get(0, 0);
        let want = OmegaLaurent::monomial(-1, w(r[7] * r[7])) + &OmegaLaurent::monomial(1, w(r[8] * r[8]));
        for k in -2..=2 {
            assert!((e.coeff(k) - want.coeff(k)).norm() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn dilute_one_site_vacuum() {
        let spec = ModelSpec::new(ModelKind::Dilute, 1, 2, 0.45).unwrap();
        let r = face_weights(&spec).unwrap();
        let t = build_transfer(&spec, 1, 0).unwrap();
        assert_eq!(t.dim(), 1);
        let e = t.matrix.get(0, 0);
        // empty tile, plus a horizontal loop through the seam
        assert!((e.coeff(0) - w(r[0])).norm() < 1e-14);
        assert!((e.coeff(1) - w(r[5])).norm() < 1e-14);
        assert!((e.coeff(-1) - w(r[5])).norm() < 1e-14);
    }

    #[test]
    fn dense_two_sites_one_row_trace() {
        let spec = ModelSpec::new(ModelKind::Dense, 1, 3, 0.2).unwrap();
        let r = face_weights(&spec).unwrap();
        let tr = build_transfer(&spec, 2, 0).unwrap().trace_power(1);
        assert!(tr.coeff(0).norm() < 1e-14);
        assert!((tr.coeff(1) - w(2.0 * r[7] * r[8])).norm() < 1e-14);
        assert!((tr.coeff(-1) - w(2.0 * r[7] * r[8])).norm() < 1e-14);
    }

    #[test]
    fn zeroth_power_is_dimension() {
        let spec = ModelSpec::isotropic(ModelKind::Dilute, 2, 3).unwrap();
        let t = build_transfer(&spec, 3, 1).unwrap();
        let tr = t.trace_power(0);
        assert_eq!(tr.terms().count(), 1);
        assert!((tr.coeff(0) - w(t.dim() as f64)).norm() < 1e-14);
    }

    #[test]
    fn rows_respect_vacancies() {
        let st = module_basis(ModelKind::Dilute, 3, 0).unwrap();
        for s in &st {
            for row in rows_for(ModelKind::Dilute, s) {
                for (x, &t) in row.iter().enumerate() {
                    assert_eq!(occupied(t, B), s.occupied(x));
                }
            }
        }
    }
}
