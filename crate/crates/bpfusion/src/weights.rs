//! Levels, weight sets, the Z3 action and highest-weight data.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::Q;

/// Rational data attached to a nondegenerate admissible level `k + 3 = u/v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LevelParams {
    pub u: i64,
    pub v: i64,
    pub k: Q,
    pub kappa: Q,
    pub c_bp: Q,
    pub c_w3: Q,
    pub c_pi: Q,
}

impl LevelParams {
    /// `u/v` as a rational.
    pub fn uv(&self) -> Q {
        Q::new(self.u, self.v)
    }

    /// The BP vacuum label `[u-3,0,0;v-2,-1,0]`.
    pub fn vacuum(&self) -> RSLabel {
        RSLabel::new([self.u - 3, 0, 0], [self.v - 2, -1, 0])
    }

    /// The W3 vacuum label `[u-3,0,0;v-3,0,0]`.
    pub fn w3_vacuum(&self) -> RSLabel {
        RSLabel::new([self.u - 3, 0, 0], [self.v - 3, 0, 0])
    }

    /// Default truncation depth for resolutions.
    pub fn default_depth(&self) -> i64 {
        9 * self.v
    }
}

/// Validates `(u,v)` and computes level, `kappa` and the three central charges.
pub fn level_params(u: i64, v: i64) -> Result<LevelParams> {
    if u < 3 || v < 3 || u.gcd(&v) != 1 {
        return Err(Error::NotAdmissible { u, v });
    }
    let uv = Q::new(u, v);
    let k = uv - 3;
    let kappa = Q::new(2 * u - 3 * v, 6 * v);
    let c_bp = Q::one() - Q::new(6 * (u - 2 * v) * (u - 2 * v), u * v);
    let c_w3 = Q::from(2) - Q::new(24 * (u - v) * (u - v), u * v);
    let c_pi = Q::from(-1) + Q::new(6 * (3 * u - 4 * v), v);
    Ok(LevelParams { u, v, k, kappa, c_bp, c_w3, c_pi })
}

/// A weight `[r0,r1,r2;s0,s1,s2]`.
///
/// No invariants are enforced here; membership in the highest-weight set or
/// its relaxed subset is checked against a [`LevelParams`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RSLabel {
    pub r: [i64; 3],
    pub s: [i64; 3],
}

impl RSLabel {
    pub const fn new(r: [i64; 3], s: [i64; 3]) -> Self {
        RSLabel { r, s }
    }

    /// The Z3 generator: `(r0,r1,r2;s0,s1,s2) -> (r2,r0,r1;s2,s0,s1)`.
    pub fn sigma(&self) -> Self {
        let [r0, r1, r2] = self.r;
        let [s0, s1, s2] = self.s;
        RSLabel::new([r2, r0, r1], [s2, s0, s1])
    }

    /// `sigma^i` for any integer `i`.
    pub fn sigma_pow(&self, i: i64) -> Self {
        let mut out = *self;
        for _ in 0..i.rem_euclid(3) {
            out = out.sigma();
        }
        out
    }

    /// Whether this label lies in the highest-weight set of the level.
    pub fn in_sigma(&self, p: &LevelParams) -> bool {
        let [s0, s1, s2] = self.s;
        self.r.iter().all(|&x| x >= 0)
            && self.r.iter().sum::<i64>() == p.u - 3
            && s0 >= 0
            && s1 >= -1
            && s2 >= 0
            && s0 + s1 + s2 == p.v - 3
    }

    /// Whether this label lies in the relaxed subset (all `s_i >= 0`).
    pub fn in_infwts(&self, p: &LevelParams) -> bool {
        self.in_sigma(p) && self.s[1] >= 0
    }

    /// Finite Dynkin labels `(lambda1, lambda2)` of the sl3 weight.
    pub fn lambda(&self, p: &LevelParams) -> (Q, Q) {
        let uv = p.uv();
        let l1 = Q::from(self.r[1]) - uv * (self.s[1] + 1);
        let l2 = Q::from(self.r[2]) - uv * self.s[2];
        (l1, l2)
    }

    /// `j(lambda) = (lambda1 - lambda2)/3`.
    pub fn j(&self, p: &LevelParams) -> Q {
        let (l1, l2) = self.lambda(p);
        (l1 - l2) / 3
    }

    /// `j^tw(lambda) = j(lambda) + kappa`.
    pub fn j_tw(&self, p: &LevelParams) -> Q {
        self.j(p) + p.kappa
    }

    /// The finite part `[r1,r2]`.
    pub fn r_bar(&self) -> [i64; 2] {
        [self.r[1], self.r[2]]
    }

    /// The finite part `[s1,s2]`.
    pub fn s_bar(&self) -> [i64; 2] {
        [self.s[1], self.s[2]]
    }
}

impl fmt::Display for RSLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [r0, r1, r2] = self.r;
        let [s0, s1, s2] = self.s;
        write!(f, "[{r0},{r1},{r2};{s0},{s1},{s2}]")
    }
}

/// Free function form of [`RSLabel::sigma`].
pub fn sigma(label: &RSLabel) -> RSLabel {
    label.sigma()
}

/// A sigma-orbit, keyed by its lexicographically smallest member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbitClass {
    rep: RSLabel,
}

impl OrbitClass {
    /// The orbit containing `label`.
    pub fn of(label: &RSLabel) -> Self {
        let rep = *Self::members_of(label).iter().min().unwrap();
        OrbitClass { rep }
    }

    fn members_of(label: &RSLabel) -> [RSLabel; 3] {
        [*label, label.sigma(), label.sigma().sigma()]
    }

    /// Canonical representative.
    pub fn rep(&self) -> RSLabel {
        self.rep
    }

    /// `rep`, `sigma(rep)`, `sigma^2(rep)`.
    pub fn members(&self) -> [RSLabel; 3] {
        Self::members_of(&self.rep)
    }
}

impl fmt::Display for OrbitClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.rep)
    }
}

/// All `[t0,t1,t2]` with nonnegative entries summing to `level`, in lexicographic order.
pub fn integrable_weights(level: i64) -> Vec<[i64; 3]> {
    let mut out = Vec::new();
    if level < 0 {
        return out;
    }
    for t0 in 0..=level {
        for t1 in 0..=level - t0 {
            out.push([t0, t1, level - t0 - t1]);
        }
    }
    out
}

/// The highest-weight set, lexicographically ordered.
pub fn enumerate_surv(p: &LevelParams) -> Vec<RSLabel> {
    let mut out = Vec::new();
    for r in integrable_weights(p.u - 3) {
        for s0 in 0..=p.v - 2 {
            for s1 in -1..=p.v - 3 {
                let s2 = p.v - 3 - s0 - s1;
                let l = RSLabel::new(r, [s0, s1, s2]);
                if l.in_sigma(p) {
                    out.push(l);
                }
            }
        }
    }
    out.sort();
    out
}

/// The relaxed labels modulo sigma, one orbit per canonical representative.
pub fn enumerate_infwts(p: &LevelParams) -> Vec<OrbitClass> {
    let mut out: Vec<OrbitClass> = enumerate_surv(p)
        .iter()
        .filter(|l| l.in_infwts(p))
        .map(OrbitClass::of)
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Charge and conformal weight of the untwisted and twisted highest-weight vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HWData {
    pub j: Q,
    pub delta: Q,
    pub j_tw: Q,
    pub delta_tw: Q,
}

/// Weight shift under spectral flow by `m`: `(j, delta) -> (j + 2 m kappa, delta + m j + m^2 kappa)`.
pub fn flowed_weight(p: &LevelParams, j: Q, delta: Q, m: Q) -> (Q, Q) {
    (j + m * p.kappa * 2, delta + m * j + m * m * p.kappa)
}

pub fn hw_data(p: &LevelParams, label: &RSLabel) -> Result<HWData> {
    if !label.in_sigma(p) {
        return Err(Error::NotInSigma(*label));
    }
    let (l1, l2) = label.lambda(p);
    let k = p.k;
    let delta = ((l1 - l2) * (l1 - l2) - (l1 + l2) * (k * 2 + 2 - l1 - l2) * 3) / ((k + 3) * 12);
    let j = (l1 - l2) / 3;
    let (j_tw, delta_tw) = flowed_weight(p, j, delta, Q::new(1, 2));
    Ok(HWData { j, delta, j_tw, delta_tw })
}

/// Conformal weight of a W3 highest-weight vector, plus the `W_0` eigenvalue
/// split as a rational times `(3uv)^(-3/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct W3Data {
    pub delta: Q,
    pub w_rational: Q,
}

impl W3Data {
    /// `w` as a float.
    pub fn w(&self, p: &LevelParams) -> f64 {
        let n = (3 * p.u * p.v) as f64;
        let q = self.w_rational;
        (*q.numer() as f64 / *q.denom() as f64) * n.powf(-1.5)
    }
}

/// W3 data computed on an arbitrary representative (no orbit canonicalisation).
pub fn w3_data_label(p: &LevelParams, l: &RSLabel) -> W3Data {
    let (u, v) = (p.u, p.v);
    let [r0, r1, r2] = l.r;
    let [s0, s1, s2] = l.s;
    let a = v * (r1 + 1) - u * (s1 + 1);
    let b = v * (r2 + 1) - u * (s2 + 1);
    // The vacuum has a = b = v - u, which fixes the constant at 3(u-v)^2.
    let delta = Q::new(a * b + a * a + b * b - 3 * (u - v) * (u - v), 3 * u * v);
    let f = |x: i64, y: i64, sx: i64, sy: i64| v * (x - y) - u * (sx - sy);
    let num = f(r0, r1, s0, s1) * f(r0, r2, s0, s2) * f(r1, r2, s1, s2);
    W3Data { delta, w_rational: Q::new(num, 3) }
}

pub fn w3_data(p: &LevelParams, orbit: &OrbitClass) -> W3Data {
    w3_data_label(p, &orbit.rep())
}

/// Exact reduction of a rational into `[0, 1)`.
pub fn frac(q: Q) -> Q {
    q - q.floor()
}

/// Whether a rational is an integer.
pub fn is_integer(q: Q) -> bool {
    q.denom().is_one() || q.numer().is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_examples() {
        let p = level_params(4, 3).unwrap();
        assert_eq!(p.k, Q::new(-5, 3));
        assert_eq!(p.c_bp, Q::from(-1));
        assert_eq!(p.kappa, Q::new(-1, 18));
        let p = level_params(3, 4).unwrap();
        assert_eq!(p.k, Q::new(-9, 4));
        assert_eq!(p.c_bp, Q::new(-23, 2));
        assert_eq!(p.kappa, Q::new(-1, 4));
        let p = level_params(5, 3).unwrap();
        assert_eq!(p.kappa, Q::new(1, 18));
        assert_eq!(p.c_bp, Q::new(3, 5));
    }

    #[test]
    fn rejects_bad_levels() {
        assert!(level_params(6, 3).is_err());
        assert!(level_params(2, 5).is_err());
        assert!(level_params(4, 2).is_err());
    }

    #[test]
    fn sigma_cycles() {
        let l = RSLabel::new([0, 1, 0], [0, 0, 0]);
        assert_eq!(l.sigma(), RSLabel::new([0, 0, 1], [0, 0, 0]));
        let l = RSLabel::new([1, 2, 3], [4, 5, 6]);
        assert_eq!(l.sigma().sigma().sigma(), l);
        assert_eq!(l.sigma_pow(-1), l.sigma().sigma());
    }

    #[test]
    fn counts() {
        for (u, v, n, o) in [(4, 3, 9, 1), (5, 3, 18, 2), (3, 4, 6, 1)] {
            let p = level_params(u, v).unwrap();
            assert_eq!(enumerate_surv(&p).len(), n);
            assert_eq!(enumerate_infwts(&p).len(), o);
        }
    }

    #[test]
    fn hw_examples() {
        let p = level_params(4, 3).unwrap();
        let d = hw_data(&p, &RSLabel::new([0, 1, 0], [1, -1, 0])).unwrap();
        assert_eq!((d.j, d.delta), (Q::new(1, 3), Q::new(1, 2)));
        let d = hw_data(&p, &RSLabel::new([0, 0, 1], [0, 0, 0])).unwrap();
        assert_eq!((d.j, d.delta), (Q::new(-7, 9), Q::new(5, 18)));
        for (u, v) in [(4, 3), (5, 7), (3, 8)] {
            let p = level_params(u, v).unwrap();
            let d = hw_data(&p, &p.vacuum()).unwrap();
            assert_eq!((d.j, d.delta), (Q::zero(), Q::zero()));
        }
    }

    #[test]
    fn w3_yang_lee() {
        let p = level_params(5, 3).unwrap();
        let d = w3_data_label(&p, &RSLabel::new([1, 1, 0], [0, 0, 0]));
        assert_eq!(d.delta, Q::new(-1, 5));
        assert_eq!(w3_data_label(&p, &p.w3_vacuum()).delta, Q::zero());
        assert_eq!(w3_data_label(&p, &p.w3_vacuum()).w_rational, Q::zero());
    }

    #[test]
    fn twisted_weight_matches_w3() {
        for (u, v) in [(4, 3), (5, 3), (3, 4), (4, 5), (7, 5)] {
            let p = level_params(u, v).unwrap();
            for o in enumerate_infwts(&p) {
                for m in o.members() {
                    let d = hw_data(&p, &m).unwrap();
                    let w = w3_data_label(&p, &m);
                    assert_eq!(d.delta_tw, w.delta + p.kappa * Q::new(9, 4), "{m}");
                }
            }
        }
    }
}
