use std::f64::consts::PI;

use crate::arith::gcd_conv;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelKind {
    Dense,
    Dilute,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Dense => "dense",
            ModelKind::Dilute => "dilute",
        }
    }
}

impl std::str::FromStr for ModelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense" => Ok(ModelKind::Dense),
            "dilute" => Ok(ModelKind::Dilute),
            _ => Err(Error::InvalidParameter(format!("unknown model '{s}'"))),
        }
    }
}

/// Model kind, (p,p′) and spectral parameter u.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub p: i64,
    pub pq: i64,
    pub u: f64,
}

impl ModelSpec {
    pub fn new(kind: ModelKind, p: i64, pq: i64, u: f64) -> Result<Self> {
        if p < 1 || pq <= p || gcd_conv(p, pq) != 1 {
            return Err(Error::InvalidParameter(format!(
                "need coprime 1 <= p < p', got ({p},{pq})"
            )));
        }
        Ok(ModelSpec { kind, p, pq, u })
    }

    /// Same model at the isotropic point.
    pub fn isotropic(kind: ModelKind, p: i64, pq: i64) -> Result<Self> {
        let s = Self::new(kind, p, pq, 0.0)?;
        Ok(ModelSpec {
            u: s.isotropic_u(),
            ..s
        })
    }

    pub fn lambda(&self) -> f64 {
        let (p, pq) = (self.p as f64, self.pq as f64);
        match self.kind {
            ModelKind::Dense => PI * (pq - p) / pq,
            ModelKind::Dilute => PI * (2.0 * pq - p) / (4.0 * pq),
        }
    }

    /// Contractible loop fugacity.
    pub fn beta(&self) -> f64 {
        let l = self.lambda();
        match self.kind {
            ModelKind::Dense => 2.0 * l.cos(),
            ModelKind::Dilute => -2.0 * (4.0 * l).cos(),
        }
    }

    pub fn isotropic_u(&self) -> f64 {
        match self.kind {
            ModelKind::Dense => self.lambda() / 2.0,
            ModelKind::Dilute => 1.5 * self.lambda(),
        }
    }

    /// Anisotropy angle ϑ.
    pub fn theta(&self) -> f64 {
        match self.kind {
            ModelKind::Dense => PI * self.u / self.lambda(),
            ModelKind::Dilute => PI * self.u / (3.0 * self.lambda()),
        }
    }
}

/// ρ₁..ρ₉ (index 0 is tile 1).
pub fn face_weights(spec: &ModelSpec) -> Result<[f64; 9]> {
    let l = spec.lambda();
    let sl = l.sin();
    if sl.abs() < 1e-14 {
        return Err(Error::InvalidParameter("lambda is a multiple of pi".into()));
    }
    let s = |x: f64| x.sin() / sl;
    let u = spec.u;
    Ok(match spec.kind {
        ModelKind::Dense => [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, s(l - u), s(u)],
        ModelKind::Dilute => {
            let r23 = s(2.0 * l) * s(3.0 * l - u);
            let r45 = s(2.0 * l) * s(u);
            let r67 = s(u) * s(3.0 * l - u);
            [
                s(2.0 * l) * s(3.0 * l) + s(u) * s(3.0 * l - u),
                r23,
                r23,
                r45,
                r45,
                r67,
                r67,
                s(2.0 * l - u) * s(3.0 * l - u),
                -s(u) * s(l - u),
            ]
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_weights() {
        let spec = ModelSpec::isotropic(ModelKind::Dense, 2, 3).unwrap();
        let w = face_weights(&spec).unwrap();
        assert!((w[7] - w[8]).abs() < 1e-15);
        let w0 = face_weights(&ModelSpec { u: 0.0, ..spec }).unwrap();
        assert!((w0[7] - 1.0).abs() < 1e-15 && w0[8] == 0.0);
    }

    #[test]
    fn dilute_at_zero() {
        let spec = ModelSpec::new(ModelKind::Dilute, 3, 4, 0.0).unwrap();
        let w = face_weights(&spec).unwrap();
        assert_eq!(w[8], 0.0);
        assert_eq!(w[5], 0.0);
        assert_eq!(w[6], 0.0);
        // identity at u = 0: tiles 1, 2, 3, 8 share one weight
        for i in [1, 2, 7] {
            assert!((w[i] - w[0]).abs() < 1e-13);
        }
    }

    #[test]
    fn beta_two_ways() {
        for (p, pq) in [(1, 2), (2, 3), (3, 4), (3, 5), (4, 7)] {
            let want = 2.0 * (PI * (pq - p) as f64 / pq as f64).cos();
            for kind in [ModelKind::Dense, ModelKind::Dilute] {
                let s = ModelSpec::new(kind, p, pq, 0.2).unwrap();
                assert!((s.beta() - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_bad_pairs() {
        assert!(ModelSpec::new(ModelKind::Dense, 2, 4, 0.1).is_err());
        assert!(ModelSpec::new(ModelKind::Dense, 3, 2, 0.1).is_err());
    }
}
