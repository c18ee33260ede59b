use std::f64::consts::PI;

use num_complex::Complex64;

use crate::arith::{chebyshev_t, gcd_conv};
use crate::error::{Error, Result};
use crate::lattice::ModelSpec;
use crate::series::{rat, Rational};

use super::chars::{u1_weight, U1CharIndex};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Modular parameter τ with Im τ > 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TauPoint {
    pub tau: Complex64,
}

impl TauPoint {
    pub fn new(tau: Complex64) -> Result<Self> {
        if tau.im.is_nan() || tau.re.is_nan() || tau.im <= 0.0 {
            return Err(Error::InvalidParameter(format!("Im tau must be positive, got {tau}")));
        }
        Ok(TauPoint { tau })
    }

    /// q = exp(−2πi δ e^{−iϑ}), i.e. τ = −δ e^{−iϑ}.
    pub fn from_geometry(delta: f64, theta: f64) -> Result<Self> {
        Self::new(-delta * Complex64::from_polar(1.0, -theta))
    }

    pub fn from_model(spec: &ModelSpec, delta: f64) -> Result<Self> {
        Self::from_geometry(delta, spec.theta())
    }

    pub fn q(&self) -> Complex64 {
        (2.0 * PI * I * self.tau).exp()
    }

    pub fn qbar(&self) -> Complex64 {
        self.q().conj()
    }

    /// q^x on the principal branch through τ.
    pub fn qpow(&self, x: f64) -> Complex64 {
        (2.0 * PI * I * self.tau * x).exp()
    }

    pub fn qbarpow(&self, x: f64) -> Complex64 {
        self.qpow(x).conj()
    }

    pub fn plus_one(&self) -> Self {
        TauPoint { tau: self.tau + 1.0 }
    }

    pub fn s_dual(&self) -> Self {
        TauPoint { tau: -1.0 / self.tau }
    }
}

/// (q)_∞ by direct product until the factor is 1 to double precision.
fn euler_numeric(tau: &TauPoint) -> Complex64 {
    let q = tau.q();
    let mut qn = q;
    let mut prod = Complex64::new(1.0, 0.0);
    while qn.norm() > 1e-18 {
        prod *= 1.0 - qn;
        qn *= q;
    }
    prod
}

/// η(τ) = q^{1/24} (q)_∞.
pub fn eta(tau: &TauPoint) -> Complex64 {
    tau.qpow(1.0 / 24.0) * euler_numeric(tau)
}

fn zmm_with(g: f64, m: i64, mp: i64, tau: &TauPoint, inv_eta2: f64) -> f64 {
    let ti = tau.tau.im;
    let w = tau.tau * m as f64 - mp as f64;
    (g / ti).sqrt() * inv_eta2 * (-PI * g * w.norm_sqr() / ti).exp()
}

/// Z_{m,m′}(g) = (g/τ_i)^{1/2} (1/ηη̄) exp[−πg|mτ−m′|²/τ_i].
pub fn zmm(g: f64, m: i64, mp: i64, tau: &TauPoint) -> f64 {
    zmm_with(g, m, mp, tau, 1.0 / eta(tau).norm_sqr())
}

/// Σ_{d≡h, j≡v, |d|,|j| ≤ dmax} 2 T_{d∧j}(α/2) Z_{d,j}(g/4), g = p/p′.
pub fn conformal_z_numeric(g: f64, alpha: f64, h: u8, v: u8, tau: &TauPoint, dmax: i64) -> f64 {
    let inv = 1.0 / eta(tau).norm_sqr();
    let mut total = 0.0;
    for d in -dmax..=dmax {
        if (d - h as i64).rem_euclid(2) != 0 {
            continue;
        }
        for j in -dmax..=dmax {
            if (j - v as i64).rem_euclid(2) != 0 {
                continue;
            }
            let t = chebyshev_t(gcd_conv(d, j), alpha / 2.0);
            total += 2.0 * t * zmm_with(g / 4.0, d, j, tau, inv);
        }
    }
    total
}

/// (1/ηη̄) Σ_{r, s−h/2 ∈ ℤ} (−1)^{vr} q^{(r/√g − s√g)²/4} q̄^{(r/√g + s√g)²/4}.
pub fn coulomb_z_hv(g: f64, h: u8, v: u8, tau: &TauPoint, rmax: i64) -> Complex64 {
    let sg = g.sqrt();
    let mut total = Complex64::new(0.0, 0.0);
    for r in -rmax..=rmax {
        for s0 in -rmax..=rmax {
            let s = s0 as f64 + h as f64 / 2.0;
            let a = (r as f64 / sg - s * sg).powi(2) / 4.0;
            let b = (r as f64 / sg + s * sg).powi(2) / 4.0;
            let sign = if v == 1 && r.rem_euclid(2) == 1 { -1.0 } else { 1.0 };
            total += sign * tau.qpow(a) * tau.qbarpow(b);
        }
    }
    total / eta(tau).norm_sqr()
}

pub fn coulomb_z(g: f64, tau: &TauPoint, rmax: i64) -> Complex64 {
    coulomb_z_hv(g, 0, 0, tau, rmax)
}

/// κ^n_j(z, q) summed until the theta terms drop below 1e-18.
pub fn u1_char_numeric(idx: &U1CharIndex, tau: &TauPoint) -> Complex64 {
    let n = idx.n as f64;
    let j = idx.label2 as f64 / 2.0;
    let k0 = (-j / (2.0 * n)).round() as i64;
    let mut theta = Complex64::new(0.0, 0.0);
    let mut step = 0i64;
    loop {
        let mut small = true;
        for k in if step == 0 { vec![k0] } else { vec![k0 - step, k0 + step] } {
            let x = j + 2.0 * k as f64 * n;
            let t = tau.qpow(x * x / (4.0 * n));
            let sign = if idx.z == -1 && k.rem_euclid(2) == 1 { -1.0 } else { 1.0 };
            theta += sign * t;
            if t.norm() > 1e-18 {
                small = false;
            }
        }
        if small && step > 0 {
            break;
        }
        step += 1;
    }
    theta / (tau.qpow(1.0 / 24.0) * euler_numeric(tau))
}

/// Sector order (0,0), (0,1), (1,0), (1,1).
pub const SECTORS: [(u8, u8); 4] = [(0, 0), (0, 1), (1, 0), (1, 1)];

/// Z(−1/τ) = S Z(τ) on the sector vector.
pub fn s_matrix() -> [[i64; 4]; 4] {
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]
}

/// Z(τ+1) = T Z(τ) on the sector vector.
pub fn t_matrix() -> [[i64; 4]; 4] {
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]
}

fn matmul(a: &[[i64; 4]; 4], b: &[[i64; 4]; 4]) -> [[i64; 4]; 4] {
    let mut c = [[0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            c[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

fn identity4() -> [[i64; 4]; 4] {
    let mut c = [[0; 4]; 4];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 1;
    }
    c
}

#[derive(Clone, Debug)]
pub struct ModularReport {
    pub s2_identity: bool,
    pub st3_identity: bool,
    pub t2_identity: bool,
    pub char_s_max_err: f64,
    pub char_t_max_err: f64,
    pub tsign_ok: bool,
}

impl ModularReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.s2_identity
            && self.st3_identity
            && self.t2_identity
            && self.tsign_ok
            && self.char_s_max_err < tol
            && self.char_t_max_err < tol
    }
}

/// exp[2πi(Δ^{4n}_j − Δ^{4n}_{4n−j})] = (−1)^j, checked exactly as a statement mod 1.
fn tsign_holds(n: i64, j: i64) -> bool {
    let x: Rational = u1_weight(4 * n, 2 * j) - u1_weight(4 * n, 2 * (4 * n - j)) - rat(j, 2);
    x.is_integer()
}

/// Permutation-representation identities exactly, plus the character-level
/// S and T actions at the sampled τ for the given levels.
pub fn modular_rep_check(levels: &[i64], taus: &[TauPoint]) -> ModularReport {
    let (s, t) = (s_matrix(), t_matrix());
    let id = identity4();
    let st = matmul(&s, &t);
    let mut s_err: f64 = 0.0;
    let mut t_err: f64 = 0.0;
    let mut tsign_ok = true;
    for &n in levels {
        for j in 0..=4 * n {
            tsign_ok &= tsign_holds(n, j);
        }
        for tau in taus {
            let chars: Vec<Complex64> = (0..2 * n)
                .map(|k| u1_char_numeric(&U1CharIndex { n, label2: 2 * k, z: 1 }, tau))
                .collect();
            let norm = 1.0 / ((2 * n) as f64).sqrt();
            for j in 0..2 * n {
                let lhs = u1_char_numeric(&U1CharIndex { n, label2: 2 * j, z: 1 }, &tau.s_dual());
                let mut rhs = Complex64::new(0.0, 0.0);
                for (k, ck) in chars.iter().enumerate() {
                    let ph = -PI * (j * k as i64) as f64 / n as f64;
                    rhs += Complex64::from_polar(norm, ph) * ck;
                }
                s_err = s_err.max((lhs - rhs).norm() / (1.0 + lhs.norm()));
                let w = crate::series::rat_to_f64(&u1_weight(n, 2 * j)) - 1.0 / 24.0;
                let lhs = u1_char_numeric(&U1CharIndex { n, label2: 2 * j, z: 1 }, &tau.plus_one());
                let rhs = Complex64::from_polar(1.0, 2.0 * PI * w) * chars[j as usize];
                t_err = t_err.max((lhs - rhs).norm() / (1.0 + lhs.norm()));
            }
        }
    }
    ModularReport {
        s2_identity: matmul(&s, &s) == id,
        st3_identity: matmul(&st, &matmul(&st, &st)) == id,
        t2_identity: matmul(&t, &t) == id,
        char_s_max_err: s_err,
        char_t_max_err: t_err,
        tsign_ok,
    }
}
