use crate::error::{Error, Result};
use crate::lattice::ModelKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Site {
    Defect,
    /// Paired with `partner`. For the smaller endpoint a, `wraps` means the
    /// arc leaves leftwards across the seam instead of covering a+1..b-1.
    Arc { partner: u8, wraps: bool },
    Vacant,
}

/// One state of a standard module: a row of N boundary sites.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinkState {
    pub sites: Vec<Site>,
}

impl LinkState {
    pub fn n(&self) -> usize {
        self.sites.len()
    }

    pub fn defects(&self) -> usize {
        self.sites.iter().filter(|s| **s == Site::Defect).count()
    }

    pub fn occupied(&self, i: usize) -> bool {
        self.sites[i] != Site::Vacant
    }

    /// Sites strictly enclosed by the arc (a, b), a < b.
    pub fn covered(&self, a: usize, b: usize, wraps: bool) -> Vec<usize> {
        if wraps {
            ((b + 1)..self.n()).chain(0..a).collect()
        } else {
            ((a + 1)..b).collect()
        }
    }

    fn arcs(&self) -> Vec<(usize, usize, bool)> {
        self.sites
            .iter()
            .enumerate()
            .filter_map(|(a, s)| match *s {
                Site::Arc { partner, wraps } if (partner as usize) > a => Some((a, partner as usize, wraps)),
                _ => None,
            })
            .collect()
    }

    /// Non-crossing on the annulus and no defect under any arc.
    pub fn is_planar(&self) -> bool {
        let arcs = self.arcs();
        for &(a, b, w) in &arcs {
            let inside = self.covered(a, b, w);
            let mut mask = vec![false; self.n()];
            for &i in &inside {
                if self.sites[i] == Site::Defect {
                    return false;
                }
                mask[i] = true;
            }
            for &(c, e, w2) in &arcs {
                if (c, e) == (a, b) {
                    continue;
                }
                match (mask[c], mask[e]) {
                    (true, true) => {
                        if self.covered(c, e, w2).iter().any(|&i| !mask[i]) {
                            return false;
                        }
                    }
                    (false, false) => {}
                    _ => return false,
                }
            }
        }
        true
    }

    pub fn render(&self) -> String {
        self.sites
            .iter()
            .enumerate()
            .map(|(i, s)| match *s {
                Site::Defect => "|".to_string(),
                Site::Vacant => ".".to_string(),
                Site::Arc { partner, wraps } => {
                    let open = (partner as usize) > i;
                    match (open, wraps) {
                        (true, false) => "(".into(),
                        (false, false) => ")".into(),
                        (true, true) => ">".into(),
                        (false, true) => "<".into(),
                    }
                }
            })
            .collect()
    }
}

/// Canonically ordered basis of the standard module with d defects.
pub fn module_basis(kind: ModelKind, n: usize, d: usize) -> Result<Vec<LinkState>> {
    if n == 0 || d > n || (kind == ModelKind::Dense && (n - d) % 2 != 0) {
        return Err(Error::InvalidParameter(format!(
            "no {} module with N={n}, d={d}",
            kind.name()
        )));
    }
    let mut out = Vec::new();
    let mut cur: Vec<Option<Site>> = vec![None; n];
    fill(kind, d, 0, &mut cur, &mut out);
    out.sort();
    Ok(out)
}

fn fill(kind: ModelKind, d: usize, i: usize, cur: &mut Vec<Option<Site>>, out: &mut Vec<LinkState>) {
    let n = cur.len();
    if i == n {
        let st = LinkState {
            sites: cur.iter().map(|s| s.unwrap()).collect(),
        };
        if st.defects() == d && st.is_planar() {
            out.push(st);
        }
        return;
    }
    if cur[i].is_some() {
        return fill(kind, d, i + 1, cur, out);
    }
    let mut opts = vec![Site::Defect];
    if kind == ModelKind::Dilute {
        opts.push(Site::Vacant);
    }
    for s in opts {
        cur[i] = Some(s);
        fill(kind, d, i + 1, cur, out);
    }
    for j in i + 1..n {
        if cur[j].is_some() {
            continue;
        }
        for wraps in [false, true] {
            cur[i] = Some(Site::Arc { partner: j as u8, wraps });
            cur[j] = Some(Site::Arc { partner: i as u8, wraps });
            fill(kind, d, i + 1, cur, out);
            cur[j] = None;
        }
    }
    cur[i] = None;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn dense_dimensions_are_binomial() {
        assert_eq!(module_basis(ModelKind::Dense, 4, 0).unwrap().len(), 6);
        for n in 1..=8usize {
            for d in (n % 2..=n).step_by(2) {
                let dim = module_basis(ModelKind::Dense, n, d).unwrap().len() as u64;
                assert_eq!(dim, binom(n as u64, ((n - d) / 2) as u64), "N={n} d={d}");
            }
        }
    }

    #[test]
    fn dilute_small_dimensions() {
        let dims: Vec<usize> = (0..=2).map(|d| module_basis(ModelKind::Dilute, 2, d).unwrap().len()).collect();
        assert_eq!(dims, vec![3, 2, 1]);
        // dilute: choose occupied sites, then a dense state on them
        for n in 1..=6usize {
            for d in 0..=n {
                let want: u64 = (d..=n)
                    .filter(|k| (k - d) % 2 == 0)
                    .map(|k| binom(n as u64, k as u64) * binom(k as u64, ((k - d) / 2) as u64))
                    .sum();
                let got = module_basis(ModelKind::Dilute, n, d).unwrap().len() as u64;
                assert_eq!(got, want, "N={n} d={d}");
            }
        }
    }

    #[test]
    fn wraps_forced_by_defects() {
        for st in module_basis(ModelKind::Dilute, 5, 1).unwrap() {
            for (a, b, w) in st.arcs() {
                let direct_has_defect = (a + 1..b).any(|i| st.sites[i] == Site::Defect);
                assert_eq!(w, direct_has_defect, "{}", st.render());
            }
        }
    }

    #[test]
    fn parity_errors() {
        assert!(module_basis(ModelKind::Dense, 4, 1).is_err());
        assert!(module_basis(ModelKind::Dilute, 3, 4).is_err());
    }
}
