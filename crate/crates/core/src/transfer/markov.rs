use std::collections::BTreeMap;

use num_complex::Complex64;

use super::laurent::OmegaLaurent;
use super::row::{build_transfer, TransferOperator};
use crate::arith::{chebyshev_t, gcd_conv};
use crate::error::{Error, Result};
use crate::lattice::{ModelKind, ModelSpec};

/// tr T(u)^M on the module with d defects.
pub fn trace_tm(spec: &ModelSpec, n: usize, m: u32, d: usize) -> Result<OmegaLaurent> {
    Ok(build_transfer(spec, n, d)?.trace_power(m))
}

/// Coefficients C_{d,j} of tr T^M = Σ_j ω^{-j} C_{d,j}, for d ≥ 0.
#[derive(Clone, Debug, PartialEq)]
pub struct CTable {
    pub kind: ModelKind,
    pub n: usize,
    pub m: u32,
    pub entries: BTreeMap<(i64, i64), f64>,
}

impl CTable {
    /// C_{d,j}, extended to d < 0 by C_{-d,j} = C_{d,-j}.
    pub fn get(&self, d: i64, j: i64) -> f64 {
        let key = if d < 0 { (-d, -j) } else { (d, j) };
        self.entries.get(&key).copied().unwrap_or(0.0)
    }

    pub fn from_traces(kind: ModelKind, n: usize, m: u32, traces: &[(usize, OmegaLaurent)]) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (d, tr) in traces {
            for (k, c) in tr.terms() {
                if c.im.abs() > 1e-9 * (1.0 + c.re.abs()) {
                    return Err(Error::ImaginaryResidue(c.im));
                }
                entries.insert((*d as i64, -k), c.re);
            }
        }
        Ok(CTable { kind, n, m, entries })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.entries
                .iter()
                .map(|(&(d, j), &v)| serde_json::json!({"d": d, "j": j, "value": v}))
                .collect(),
        )
    }
}

fn defect_numbers(kind: ModelKind, n: usize) -> Vec<usize> {
    match kind {
        ModelKind::Dense => (n % 2..=n).step_by(2).collect(),
        ModelKind::Dilute => (0..=n).collect(),
    }
}

pub fn c_table(spec: &ModelSpec, n: usize, m: u32) -> Result<CTable> {
    let traces = defect_numbers(spec.kind, n)
        .into_iter()
        .map(|d| Ok((d, trace_tm(spec, n, m, d)?)))
        .collect::<Result<Vec<_>>>()?;
    CTable::from_traces(spec.kind, n, m, &traces)
}

/// Markov-trace assembly of the (h,v) sector from a C table.
pub fn markov_z_from_traces(table: &CTable, h: u8, v: u8, alpha: f64) -> Result<f64> {
    let (n, m) = (table.n as i64, table.m as i64);
    if table.kind == ModelKind::Dense && (h as i64, v as i64) != (n % 2, m % 2) {
        return Err(Error::DenseSector {
            h,
            v,
            m: table.m as usize,
            n: table.n,
        });
    }
    let factor = match table.kind {
        ModelKind::Dense => 1.0,
        ModelKind::Dilute => 2.0,
    };
    let mut z = 0.0;
    for d in -n..=n {
        if d.rem_euclid(2) != h as i64 {
            continue;
        }
        for j in -m..=m {
            if j.rem_euclid(2) != v as i64 {
                continue;
            }
            let c = table.get(d, j);
            if c == 0.0 {
                continue;
            }
            let k = gcd_conv(d, j);
            z += factor * chebyshev_t(k, alpha / 2.0) * c;
        }
    }
    Ok(z)
}

pub fn markov_z(spec: &ModelSpec, m: u32, n: usize, h: u8, v: u8, alpha: f64) -> Result<f64> {
    if spec.kind == ModelKind::Dense && (h as usize, v as u32) != (n % 2, m % 2) {
        return Err(Error::DenseSector { h, v, m: m as usize, n });
    }
    markov_z_from_traces(&c_table(spec, n, m)?, h, v, alpha)
}

/// Eigenvalues of the transfer matrix at a real twist ω = ±1.
pub fn spectrum(op: &TransferOperator, omega: f64) -> Result<Vec<Complex64>> {
    let a = op.numeric(Complex64::new(omega, 0.0));
    let re = faer::Mat::<f64>::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)].re);
    re.eigenvalues()
        .map_err(|e| Error::Internal(format!("eigenvalue solver failed: {e:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_parity_rule() {
        for (p, pq) in [(1, 2), (2, 3)] {
            let spec = ModelSpec::new(ModelKind::Dense, p, pq, 0.37).unwrap();
            for n in [2usize, 3, 4] {
                for m in 1..=4u32 {
                    let t = c_table(&spec, n, m).unwrap();
                    for (&(_, j), &c) in &t.entries {
                        if (j + m as i64).rem_euclid(2) == 1 {
                            assert!(c.abs() < 1e-12, "N={n} M={m} j={j} C={c}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn support_within_m() {
        let spec = ModelSpec::isotropic(ModelKind::Dilute, 2, 3).unwrap();
        for d in 0..=3 {
            let tr = trace_tm(&spec, 3, 2, d).unwrap();
            if let (Some(lo), Some(hi)) = (tr.min_power(), tr.max_power()) {
                assert!(lo >= -2 && hi <= 2);
            }
        }
    }

    #[test]
    fn dilute_trace_at_one_matches_float_power() {
        let spec = ModelSpec::isotropic(ModelKind::Dilute, 3, 4).unwrap();
        let t = build_transfer(&spec, 2, 1).unwrap();
        let lp = t.trace_power(2).eval(Complex64::new(1.0, 0.0));
        let a = t.numeric(Complex64::new(1.0, 0.0));
        let sq = &a * &a;
        let num: Complex64 = (0..sq.nrows()).map(|i| sq[(i, i)]).sum();
        assert!((lp - num).norm() < 1e-12);
    }

    #[test]
    fn chebyshev_gcd_example() {
        // d=4, j=6 picks T_2
        assert_eq!(gcd_conv(4, 6), 2);
        let x: f64 = 0.3;
        assert!((chebyshev_t(2, x) - (2.0 * x * x - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn commuting_family() {
        for kind in [ModelKind::Dense, ModelKind::Dilute] {
            let a = build_transfer(&ModelSpec::new(kind, 2, 3, 0.21).unwrap(), 4, 2).unwrap();
            let b = build_transfer(&ModelSpec::new(kind, 2, 3, 0.63).unwrap(), 4, 2).unwrap();
            let w = Complex64::from_polar(1.0, 0.9);
            let (x, y) = (a.numeric(w), b.numeric(w));
            let comm = &x * &y - &y * &x;
            let (c, nx, ny) = (comm.norm_l2(), x.norm_l2(), y.norm_l2());
            assert!(c < 1e-10 * (1.0 + nx * ny), "{kind:?}: {c}");
        }
    }

    #[test]
    fn dense_sector_mismatch_errors() {
        let spec = ModelSpec::isotropic(ModelKind::Dense, 1, 2).unwrap();
        assert!(markov_z(&spec, 2, 3, 0, 0, 1.0).is_err());
        assert!(markov_z(&spec, 2, 3, 1, 0, 1.0).is_ok());
    }
}
