use std::collections::{BTreeMap, HashMap};

use super::enumerate::{fold_configs, LoopCensus};
use super::model::{face_weights, ModelKind, ModelSpec};
use crate::error::{Error, Result};

/// Weights of non-contractible loops.
#[derive(Clone, Debug, PartialEq)]
pub enum Alphas {
    Uniform(f64),
    /// Per primitive class, with a fallback for classes not listed.
    PerClass(BTreeMap<(i64, i64), f64>, f64),
}

impl Alphas {
    pub fn weight(&self, class: (i64, i64)) -> f64 {
        match self {
            Alphas::Uniform(a) => *a,
            Alphas::PerClass(map, dflt) => *map.get(&class).unwrap_or(dflt),
        }
    }
}

/// Everything about a configuration that its Boltzmann weight depends on.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CensusKey {
    pub n_beta: u32,
    pub tile_counts: [u32; 9],
    pub class: Option<(i64, i64)>,
    pub n_nc: u32,
    pub sector: (u8, u8),
}

impl CensusKey {
    pub fn from_census(c: &LoopCensus) -> Result<Self> {
        if c.windings.len() > 1 {
            return Err(Error::Internal(format!(
                "configuration with several loop classes: {:?}",
                c.windings
            )));
        }
        let (class, n_nc) = match c.windings.iter().next() {
            Some((&k, &v)) => (Some(k), v),
            None => (None, 0),
        };
        Ok(CensusKey {
            n_beta: c.n_beta,
            tile_counts: c.tile_counts,
            class,
            n_nc,
            sector: c.sector(),
        })
    }
}

/// Multiplicities of census keys over all configurations of one size.
/// Independent of p, p′ and u, so one table serves every weight choice.
#[derive(Clone, Debug, PartialEq)]
pub struct CensusTable {
    pub kind: ModelKind,
    pub m: usize,
    pub n: usize,
    pub counts: BTreeMap<CensusKey, u64>,
}

fn merge(mut a: HashMap<CensusKey, u64>, b: HashMap<CensusKey, u64>) -> HashMap<CensusKey, u64> {
    if a.len() < b.len() {
        return merge(b, a);
    }
    for (k, v) in b {
        *a.entry(k).or_insert(0) += v;
    }
    a
}

impl CensusTable {
    pub fn build(kind: ModelKind, m: usize, n: usize) -> Result<Self> {
        let map = fold_configs(
            kind,
            m,
            n,
            HashMap::new(),
            |acc: &mut HashMap<CensusKey, u64>, _, c| {
                // classes never mix on a torus, so this cannot fail for valid grids
                if let Ok(k) = CensusKey::from_census(c) {
                    *acc.entry(k).or_insert(0) += 1;
                }
            },
            merge,
        )?;
        Ok(CensusTable {
            kind,
            m,
            n,
            counts: map.into_iter().collect(),
        })
    }

    pub fn n_configs(&self) -> u64 {
        self.counts.values().sum()
    }

    fn check_kind(&self, spec: &ModelSpec) -> Result<()> {
        if spec.kind != self.kind {
            return Err(Error::InvalidParameter("census table built for another model".into()));
        }
        Ok(())
    }

    fn dense_sector_check(&self, sector: (u8, u8)) -> Result<()> {
        let want = ((self.n % 2) as u8, (self.m % 2) as u8);
        if sector != want {
            return Err(Error::DenseSector {
                h: sector.0,
                v: sector.1,
                m: self.m,
                n: self.n,
            });
        }
        Ok(())
    }

    fn sum(&self, spec: &ModelSpec, keep: impl Fn(&CensusKey) -> bool, alpha: impl Fn(&CensusKey) -> f64) -> Result<f64> {
        let rho = face_weights(spec)?;
        let beta = spec.beta();
        let mut z = 0.0;
        for (k, &cnt) in &self.counts {
            if !keep(k) {
                continue;
            }
            let mut w = cnt as f64 * beta.powi(k.n_beta as i32) * alpha(k).powi(k.n_nc as i32);
            for (r, &e) in rho.iter().zip(&k.tile_counts) {
                if e > 0 {
                    w *= r.powi(e as i32);
                }
            }
            z += w;
        }
        Ok(z)
    }

    /// Partition function. Dilute sectors select configurations by the
    /// parity of the cut crossings (H, V) and carry the two-fold cluster
    /// colouring multiplicity; dense sectors are fixed by (N, M).
    pub fn z(&self, spec: &ModelSpec, sector: Option<(u8, u8)>, alphas: &Alphas) -> Result<f64> {
        self.check_kind(spec)?;
        let a = |k: &CensusKey| k.class.map_or(1.0, |c| alphas.weight(c));
        match (self.kind, sector) {
            (_, None) => self.sum(spec, |_| true, a),
            (ModelKind::Dense, Some(s)) => {
                self.dense_sector_check(s)?;
                self.sum(spec, |_| true, a)
            }
            (ModelKind::Dilute, Some(s)) => Ok(2.0 * self.sum(spec, |k| k.sector == s, a)?),
        }
    }

    /// Dilute sector from the winding-class weight table: the sector class
    /// gets α, the other two classes 0, loopless configurations 1; the
    /// sector is the even (h,v)=(0,0) or odd projection in α.
    pub fn z_table_route(&self, spec: &ModelSpec, sector: (u8, u8), alpha: f64) -> Result<f64> {
        self.check_kind(spec)?;
        if self.kind == ModelKind::Dense {
            self.dense_sector_check(sector)?;
            return self.sum(spec, |_| true, |k| if k.class.is_some() { alpha } else { 1.0 });
        }
        let table = |a: f64| {
            self.sum(spec, |_| true, |k| match k.class {
                None => 1.0,
                Some((i, j)) => {
                    let cls = ((j.rem_euclid(2)) as u8, (i.rem_euclid(2)) as u8);
                    if sector == (0, 0) || cls == sector {
                        a
                    } else {
                        0.0
                    }
                }
            })
        };
        let (plus, minus) = (table(alpha)?, table(-alpha)?);
        Ok(if sector == (0, 0) { plus + minus } else { plus - minus })
    }
}

/// One-shot partition function; builds the census table internally.
pub fn lattice_z(spec: &ModelSpec, m: usize, n: usize, sector: Option<(u8, u8)>, alphas: &Alphas) -> Result<f64> {
    CensusTable::build(spec.kind, m, n)?.z(spec, sector, alphas)
}

pub fn lattice_z_table_route(spec: &ModelSpec, m: usize, n: usize, sector: (u8, u8), alpha: f64) -> Result<f64> {
    CensusTable::build(spec.kind, m, n)?.z_table_route(spec, sector, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SECTORS: [(u8, u8); 4] = [(0, 0), (0, 1), (1, 0), (1, 1)];

    #[test]
    fn dilute_one_by_one_by_hand() {
        let spec = ModelSpec::new(ModelKind::Dilute, 2, 3, 0.4).unwrap();
        let r = face_weights(&spec).unwrap();
        let b = spec.beta();
        let a = 0.7;
        let t = CensusTable::build(ModelKind::Dilute, 1, 1).unwrap();
        let z = t.z(&spec, None, &Alphas::Uniform(a)).unwrap();
        let want = r[0] + a * (r[5] + r[6] + r[7] + r[8]);
        assert!((z - want).abs() < 1e-12);
        let s01 = t.z(&spec, Some((0, 1)), &Alphas::Uniform(a)).unwrap();
        assert!((s01 - 2.0 * a * r[5]).abs() < 1e-12);
        let _ = b;
    }

    #[test]
    fn sectors_partition_configs() {
        for (m, n) in [(1, 2), (2, 2), (2, 3)] {
            let t = CensusTable::build(ModelKind::Dilute, m, n).unwrap();
            let spec = ModelSpec::new(ModelKind::Dilute, 1, 2, 0.37).unwrap();
            let al = Alphas::Uniform(0.6);
            let full = t.z(&spec, None, &al).unwrap();
            let sum: f64 = SECTORS.iter().map(|&s| t.z(&spec, Some(s), &al).unwrap()).sum();
            assert!((sum - 2.0 * full).abs() < 1e-9 * (1.0 + full.abs()));
            let mut by_sector = [0u64; 4];
            for (k, c) in &t.counts {
                by_sector[(2 * k.sector.0 + k.sector.1) as usize] += c;
            }
            assert_eq!(by_sector.iter().sum::<u64>(), t.n_configs());
        }
    }

    #[test]
    fn parity_and_table_routes_agree() {
        for (m, n) in [(1, 2), (2, 2), (2, 3), (3, 3)] {
            let t = CensusTable::build(ModelKind::Dilute, m, n).unwrap();
            for (p, pq) in [(1, 2), (2, 3), (3, 4)] {
                let spec = ModelSpec::isotropic(ModelKind::Dilute, p, pq).unwrap();
                for a in [1.0, 2.0, 0.6] {
                    for s in SECTORS {
                        let x = t.z(&spec, Some(s), &Alphas::Uniform(a)).unwrap();
                        let y = t.z_table_route(&spec, s, a).unwrap();
                        assert!((x - y).abs() < 1e-9 * (1.0 + x.abs()), "{m}x{n} {s:?}: {x} vs {y}");
                    }
                }
            }
        }
    }

    #[test]
    fn sector_class_consistency() {
        // the sector of a configuration is fixed by its loop class and count
        let t = CensusTable::build(ModelKind::Dilute, 3, 3).unwrap();
        for k in t.counts.keys() {
            let want = match k.class {
                None => (0, 0),
                Some((i, j)) => (((k.n_nc as i64 * j) % 2) as u8, ((k.n_nc as i64 * i.abs()) % 2) as u8),
            };
            assert_eq!(k.sector, want, "{k:?}");
        }
    }

    #[test]
    fn dense_sector_errors() {
        let spec = ModelSpec::isotropic(ModelKind::Dense, 2, 3).unwrap();
        let t = CensusTable::build(ModelKind::Dense, 2, 3).unwrap();
        assert!(t.z(&spec, Some((1, 0)), &Alphas::Uniform(1.0)).is_ok());
        assert!(matches!(
            t.z(&spec, Some((0, 0)), &Alphas::Uniform(1.0)),
            Err(Error::DenseSector { .. })
        ));
    }

    #[test]
    fn zero_beta_kills_contractible() {
        // (1,2) dense has β = 0
        let spec = ModelSpec::isotropic(ModelKind::Dense, 1, 2).unwrap();
        assert!(spec.beta().abs() < 1e-15);
        let t = CensusTable::build(ModelKind::Dense, 2, 2).unwrap();
        let z = t.z(&spec, None, &Alphas::Uniform(1.3)).unwrap();
        let rho = face_weights(&spec).unwrap();
        let manual: f64 = t
            .counts
            .iter()
            .filter(|(k, _)| k.n_beta == 0)
            .map(|(k, &c)| {
                c as f64 * 1.3f64.powi(k.n_nc as i32) * rho[7].powi(k.tile_counts[7] as i32) * rho[8].powi(k.tile_counts[8] as i32)
            })
            .sum();
        assert!((z - manual).abs() < 1e-12);
    }

    #[test]
    fn table_is_weight_independent() {
        let a = CensusTable::build(ModelKind::Dilute, 2, 2).unwrap();
        let b = CensusTable::build(ModelKind::Dilute, 2, 2).unwrap();
        assert_eq!(a, b);
    }
}
