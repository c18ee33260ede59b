use std::collections::HashMap;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::series::{int, rat, QSeries, Rational};

use super::{over_euler_q, sq_range};

/// κ^n_j(z,·) with the label stored doubled, so j ∈ ½ℤ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct U1CharIndex {
    pub n: i64,
    pub label2: i64,
    pub z: i8,
}

impl U1CharIndex {
    pub fn new(n: i64, label2: i64, z: i8) -> Result<Self> {
        if n < 1 || !(z == 1 || z == -1) {
            return Err(Error::InvalidParameter(format!(
                "u(1) character needs n >= 1 and z = ±1, got n={n} z={z}"
            )));
        }
        Ok(U1CharIndex { n, label2, z })
    }

    /// Doubled period P: 2n for z = 1, 4n for z = −1.
    pub fn period2(&self) -> i64 {
        if self.z == 1 {
            4 * self.n
        } else {
            8 * self.n
        }
    }

    /// Same character with 0 ≤ label < P.
    pub fn normalized(&self) -> Self {
        U1CharIndex {
            label2: self.label2.rem_euclid(self.period2()),
            ..*self
        }
    }

    pub fn label(&self) -> Rational {
        rat(self.label2, 2)
    }

    pub fn render(&self, var: &str) -> String {
        format!(
            "k[{},{}]({},{var})",
            self.n,
            crate::bezout::half_str(self.label2),
            self.z
        )
    }
}

/// κ^n_j(z,q) = q^{−1/24}/(q)_∞ · Σ_k z^k q^{(j+2kn)²/4n}, exact through `cutoff`.
pub fn u1_char(idx: &U1CharIndex, cutoff: &Rational) -> QSeries {
    let n = idx.n;
    let bound = 16.0 * n as f64 * (super::to_f64(cutoff) + 1.0);
    let mut theta = Vec::new();
    for k in sq_range(idx.label2 as f64, 4.0 * n as f64, bound) {
        let x = idx.label2 + 4 * k * n;
        let e = rat(x * x, 16 * n) - rat(1, 24);
        if e > *cutoff {
            continue;
        }
        let sign = if idx.z == -1 && k.rem_euclid(2) == 1 { -1 } else { 1 };
        theta.push((e, int(sign)));
    }
    over_euler_q(&theta, cutoff)
}

/// Δ^n_j = min(j²/4n, (2n−j)²/4n), label doubled.
pub fn u1_weight(n: i64, label2: i64) -> Rational {
    let a = rat(label2 * label2, 16 * n);
    let b = rat((4 * n - label2) * (4 * n - label2), 16 * n);
    a.min(b)
}

/// Memo of characters at a fixed cutoff, keyed by normalized index.
pub struct CharCache {
    cutoff: Rational,
    map: Mutex<HashMap<U1CharIndex, QSeries>>,
}

impl CharCache {
    pub fn new(cutoff: Rational) -> Self {
        CharCache {
            cutoff,
            map: Mutex::new(HashMap::new()),
        }
    }

    pub fn cutoff(&self) -> &Rational {
        &self.cutoff
    }

    pub fn get(&self, idx: &U1CharIndex) -> QSeries {
        let key = idx.normalized();
        if let Some(s) = self.map.lock().expect("cache poisoned").get(&key) {
            return s.clone();
        }
        let s = u1_char(&key, &self.cutoff);
        self.map
            .lock()
            .expect("cache poisoned")
            .insert(key, s.clone());
        s
    }

    pub fn at(&self, n: i64, label2: i64, z: i8) -> QSeries {
        self.get(&U1CharIndex { n, label2, z })
    }
}

/// Outcome of one family of character identities.
#[derive(Clone, Debug)]
pub struct IdentityCount {
    pub name: &'static str,
    pub checked: usize,
    pub failed: Vec<String>,
}

impl IdentityCount {
    fn new(name: &'static str) -> Self {
        IdentityCount {
            name,
            checked: 0,
            failed: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed.push(what());
        }
    }
}

/// Foldings, periods, intertwinings and the vanishing of κ^n_n(−1) at level n,
/// over every doubled label in [0, 8n], as exact series equalities.
/// Characters are generated directly from the theta sum at the raw label.
pub fn character_identities(n: i64, cutoff: &Rational) -> Vec<IdentityCount> {
    let raw = |l: i64, z: i8| u1_char(&U1CharIndex { n, label2: l, z }, cutoff);
    let raw4 = |l: i64| u1_char(&U1CharIndex { n: 4 * n, label2: l, z: 1 }, cutoff);
    let eq = |a: &QSeries, b: &QSeries| a.agrees_with(b);
    let neg = |a: &QSeries| a.neg();

    let mut f1 = IdentityCount::new("folding1");
    let mut per = IdentityCount::new("periods");
    let mut f2 = IdentityCount::new("folding2");
    let mut vanish = IdentityCount::new("kappa_n(-1)=0");
    let mut pm = IdentityCount::new("varkappapm");

    for l in 0..=8 * n {
        let k1 = raw(l, 1);
        let km = raw(l, -1);
        for (z, kz) in [(1i8, &k1), (-1, &km)] {
            let zf = |s: &QSeries| if z == 1 { s.clone() } else { neg(s) };
            f1.check(eq(&raw(l + 4 * n, z), &zf(kz)), || {
                format!("k[{n},{l}/2+2n]({z}) != z^-1 k[{n},{l}/2]")
            });
            f1.check(eq(&raw(4 * n - l, z), &zf(kz)), || {
                format!("k[{n},2n-{l}/2]({z}) != z^-1 k[{n},{l}/2]")
            });
        }
        per.check(eq(&raw(l + 4 * n, 1), &k1), || format!("period 2n fails at {l}/2"));
        per.check(eq(&raw(l + 8 * n, -1), &km), || format!("period 4n fails at {l}/2"));
        f2.check(eq(&raw(4 * n - l, 1), &k1), || format!("k_(2n-j)(1) at {l}/2"));
        f2.check(eq(&raw(4 * n - l, -1), &neg(&km)), || format!("k_(2n-j)(-1) at {l}/2"));
        f2.check(eq(&raw(8 * n - l, -1), &km), || format!("k_(4n-j)(-1) at {l}/2"));
        let a = raw4(2 * l);
        let b = raw4(8 * n - 2 * l);
        pm.check(eq(&k1, &a.add(&b)), || format!("k^n_j(1) != k^4n_2j + k^4n_(4n-2j) at {l}/2"));
        pm.check(eq(&km, &a.sub(&b)), || format!("k^n_j(-1) != k^4n_2j - k^4n_(4n-2j) at {l}/2"));
    }
    let kn = raw(2 * n, -1);
    vanish.check(kn.is_empty(), || format!("k[{n},{n}](-1) has {} terms", kn.len()));
    vec![f1, per, f2, vanish, pm]
}
