//! Finite sl3 representation combinatorics and the level-`l` fusion ring.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A finite sl3 weight in Dynkin labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteWeight(pub [i64; 2]);

impl FiniteWeight {
    pub const ZERO: FiniteWeight = FiniteWeight([0, 0]);
    pub const RHO: FiniteWeight = FiniteWeight([1, 1]);

    pub fn is_dominant(&self) -> bool {
        self.0[0] >= 0 && self.0[1] >= 0
    }

    /// Height against the Weyl vector; strictly increases along positive roots.
    fn height(&self) -> i64 {
        self.0[0] + self.0[1]
    }

    /// Dimension of the simple module, by Weyl's formula.
    pub fn dim(&self) -> i64 {
        let [a, b] = self.0;
        (a + 1) * (b + 1) * (a + b + 2) / 2
    }

    /// Conjugate weight `[t2, t1]`.
    pub fn conj(&self) -> Self {
        FiniteWeight([self.0[1], self.0[0]])
    }
}

impl std::ops::Add for FiniteWeight {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        FiniteWeight([self.0[0] + o.0[0], self.0[1] + o.0[1]])
    }
}

impl std::ops::Sub for FiniteWeight {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        FiniteWeight([self.0[0] - o.0[0], self.0[1] - o.0[1]])
    }
}

impl fmt::Display for FiniteWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.0[0], self.0[1])
    }
}

/// An integral affine weight `[t0,t1,t2]`; its level is the sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineLevelWeight(pub [i64; 3]);

impl AffineLevelWeight {
    pub fn level(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_integrable(&self) -> bool {
        self.0.iter().all(|&t| t >= 0)
    }

    pub fn finite(&self) -> FiniteWeight {
        FiniteWeight([self.0[1], self.0[2]])
    }

    pub fn from_finite(t: FiniteWeight, level: i64) -> Self {
        AffineLevelWeight([level - t.0[0] - t.0[1], t.0[0], t.0[1]])
    }

    /// Outer automorphism `[t0,t1,t2] -> [t2,t0,t1]`.
    pub fn sigma(&self) -> Self {
        AffineLevelWeight([self.0[2], self.0[0], self.0[1]])
    }

    pub fn conj(&self) -> Self {
        AffineLevelWeight([self.0[0], self.0[2], self.0[1]])
    }
}

/// A Weyl group element on Dynkin labels, with its sign.
pub type WeylElement = (fn([i64; 2]) -> [i64; 2], i64);

/// The six elements of the finite Weyl group acting on Dynkin labels, with signs.
pub fn weyl_group() -> [WeylElement; 6] {
    fn id(t: [i64; 2]) -> [i64; 2] {
        t
    }
    fn s1(t: [i64; 2]) -> [i64; 2] {
        [-t[0], t[0] + t[1]]
    }
    fn s2(t: [i64; 2]) -> [i64; 2] {
        [t[0] + t[1], -t[1]]
    }
    fn s1s2(t: [i64; 2]) -> [i64; 2] {
        s1(s2(t))
    }
    fn s2s1(t: [i64; 2]) -> [i64; 2] {
        s2(s1(t))
    }
    fn w0(t: [i64; 2]) -> [i64; 2] {
        s1(s2(s1(t)))
    }
    [(id, 1), (s1, -1), (s2, -1), (s1s2, 1), (s2s1, 1), (w0, -1)]
}

/// The invariant form in Dynkin coordinates, `(2 a1 b1 + a1 b2 + a2 b1 + 2 a2 b2)/3`.
pub fn inner_f(a: [f64; 2], b: [f64; 2]) -> f64 {
    (2.0 * a[0] * b[0] + a[0] * b[1] + a[1] * b[0] + 2.0 * a[1] * b[1]) / 3.0
}

/// Complex version of [`inner_f`], linear in both slots.
pub fn inner_c(a: [f64; 2], b: [Complex64; 2]) -> Complex64 {
    (b[0] * (2.0 * a[0] + a[1]) + b[1] * (a[0] + 2.0 * a[1])) / 3.0
}

/// Kostant partition function of sl3 at `gamma` (Dynkin labels).
fn kostant(gamma: [i64; 2]) -> i64 {
    let (a3, b3) = (2 * gamma[0] + gamma[1], gamma[0] + 2 * gamma[1]);
    if a3 % 3 != 0 || b3 % 3 != 0 {
        return 0;
    }
    let (a, b) = (a3 / 3, b3 / 3);
    if a < 0 || b < 0 {
        0
    } else {
        a.min(b) + 1
    }
}

/// Weight multiplicities of a simple module.
pub type WeightMultiplicityMap = BTreeMap<FiniteWeight, i64>;

/// Weights of `L(t)` with multiplicities, via Kostant's formula.
pub fn weight_multiplicities(t: FiniteWeight) -> Result<WeightMultiplicityMap> {
    if !t.is_dominant() {
        return Err(Error::NotDominant(t.0[0], t.0[1]));
    }
    let n = t.0[0] + t.0[1];
    let tr = (t + FiniteWeight::RHO).0;
    let mut out = BTreeMap::new();
    for a in 0..=n {
        for b in 0..=n {
            let mu = [t.0[0] - 2 * a + b, t.0[1] + a - 2 * b];
            let mr = [mu[0] + 1, mu[1] + 1];
            let m: i64 = weyl_group()
                .iter()
                .map(|(w, sgn)| {
                    let x = w(tr);
                    sgn * kostant([x[0] - mr[0], x[1] - mr[1]])
                })
                .sum();
            if m != 0 {
                out.insert(FiniteWeight(mu), m);
            }
        }
    }
    Ok(out)
}

/// `chi_t(xi) = sum mult * exp<mu, xi>` with `xi` in Dynkin coordinates.
pub fn weyl_character(t: FiniteWeight, xi: [Complex64; 2]) -> Result<Complex64> {
    Ok(weight_multiplicities(t)?
        .iter()
        .map(|(mu, m)| (*m as f64) * inner_c([mu.0[0] as f64, mu.0[1] as f64], xi).exp())
        .sum())
}

/// Decomposition of `L(t) (x) L(t')` into simple modules.
pub fn tensor_decomposition(t: FiniteWeight, tp: FiniteWeight) -> Result<WeightMultiplicityMap> {
    let a = weight_multiplicities(t)?;
    let b = weight_multiplicities(tp)?;
    let mut prod: BTreeMap<FiniteWeight, i64> = BTreeMap::new();
    for (x, mx) in &a {
        for (y, my) in &b {
            *prod.entry(*x + *y).or_insert(0) += mx * my;
        }
    }
    let mut out = BTreeMap::new();
    loop {
        prod.retain(|_, m| *m != 0);
        let Some(top) = prod.keys().copied().max_by_key(|w| (w.height(), *w)) else {
            break;
        };
        debug_assert!(top.is_dominant());
        let c = prod[&top];
        out.insert(top, c);
        for (w, m) in weight_multiplicities(top)? {
            *prod.entry(w).or_insert(0) -= c * m;
        }
    }
    Ok(out)
}

/// Multiplicity of `L(t'')` in `L(t) (x) L(t')`.
pub fn tensor_coeff(t: FiniteWeight, tp: FiniteWeight, tpp: FiniteWeight) -> Result<i64> {
    Ok(*tensor_decomposition(t, tp)?.get(&tpp).unwrap_or(&0))
}

/// Shifted affine Weyl reflection of `t` into the level-`level` alcove.
///
/// Returns `None` when `t + rho` lies on a wall, otherwise the image and `det w`.
pub fn reflect_to_alcove(t: FiniteWeight, level: i64) -> Option<(FiniteWeight, i64)> {
    let k = level + 3;
    let [mut a, mut b] = (t + FiniteWeight::RHO).0;
    let mut sign = 1;
    loop {
        if a == 0 || b == 0 || a + b == k {
            return None;
        }
        if a < 0 {
            (a, b) = (-a, a + b);
        } else if b < 0 {
            (a, b) = (a + b, -b);
        } else if a + b > k {
            (a, b) = (k - b, k - a);
        } else {
            return Some((FiniteWeight([a - 1, b - 1]), sign));
        }
        sign = -sign;
    }
}

fn check_integrable(t: &AffineLevelWeight, level: i64) -> Result<()> {
    if t.is_integrable() && t.level() == level {
        Ok(())
    } else {
        let [a, b, c] = t.0;
        Err(Error::NotIntegrable(a, b, c, level))
    }
}

/// Level-`level` fusion of `L(r)` and `L(r')`, as a map over integrable outputs.
pub fn kac_walton_product(
    level: i64,
    r: &AffineLevelWeight,
    rp: &AffineLevelWeight,
) -> Result<BTreeMap<AffineLevelWeight, i64>> {
    check_integrable(r, level)?;
    check_integrable(rp, level)?;
    let mut out = BTreeMap::new();
    for (nu, m) in tensor_decomposition(r.finite(), rp.finite())? {
        if let Some((img, sgn)) = reflect_to_alcove(nu, level) {
            *out.entry(AffineLevelWeight::from_finite(img, level)).or_insert(0) += sgn * m;
        }
    }
    out.retain(|_, m| *m != 0);
    debug_assert!(out.values().all(|m| *m > 0));
    Ok(out)
}

/// The fusion coefficient `N_{r r'}^{r''}` at level `level`.
pub fn kac_walton(
    level: i64,
    r: &AffineLevelWeight,
    rp: &AffineLevelWeight,
    rpp: &AffineLevelWeight,
) -> Result<i64> {
    check_integrable(rpp, level)?;
    Ok(*kac_walton_product(level, r, rp)?.get(rpp).unwrap_or(&0))
}

/// `N(sigma r, r', sigma r'') = N(r, sigma r', sigma r'') = N(r, r', r'')`.
pub fn sl3_sigma_symmetry_check(
    level: i64,
    r: &AffineLevelWeight,
    rp: &AffineLevelWeight,
    rpp: &AffineLevelWeight,
) -> Result<bool> {
    let n = kac_walton(level, r, rp, rpp)?;
    let a = kac_walton(level, &r.sigma(), rp, &rpp.sigma())?;
    let b = kac_walton(level, r, &rp.sigma(), &rpp.sigma())?;
    Ok(n == a && n == b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::integrable_weights;

    fn fw(a: i64, b: i64) -> FiniteWeight {
        FiniteWeight([a, b])
    }

    #[test]
    fn adjoint_and_antifundamental() {
        let m = weight_multiplicities(fw(1, 1)).unwrap();
        assert_eq!(m.values().sum::<i64>(), 8);
        assert_eq!(m[&fw(0, 0)], 2);
        let m = weight_multiplicities(fw(0, 1)).unwrap();
        let keys: Vec<_> = m.keys().copied().collect();
        assert_eq!(keys.len(), 3);
        for w in [fw(0, 1), fw(1, -1), fw(-1, 0)] {
            assert_eq!(m[&w], 1);
        }
    }

    #[test]
    fn dimensions() {
        for a in 0..5 {
            for b in 0..5 {
                let t = fw(a, b);
                let m = weight_multiplicities(t).unwrap();
                assert_eq!(m.values().sum::<i64>(), t.dim(), "{t}");
            }
        }
        assert!(weight_multiplicities(fw(-1, 0)).is_err());
    }

    #[test]
    fn weyl_invariance() {
        let m = weight_multiplicities(fw(2, 1)).unwrap();
        for (w, _) in weyl_group() {
            for (mu, k) in &m {
                assert_eq!(m.get(&FiniteWeight(w(mu.0))), Some(k));
            }
        }
    }

    #[test]
    fn tensor_examples() {
        assert_eq!(tensor_coeff(fw(1, 1), fw(1, 1), fw(1, 1)).unwrap(), 2);
        let d = tensor_decomposition(fw(1, 0), fw(0, 1)).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d[&fw(1, 1)], 1);
        assert_eq!(d[&fw(0, 0)], 1);
        let d = tensor_decomposition(fw(1, 1), fw(1, 1)).unwrap();
        let expect = [(fw(2, 2), 1), (fw(3, 0), 1), (fw(0, 3), 1), (fw(1, 1), 2), (fw(0, 0), 1)];
        assert_eq!(d, expect.into_iter().collect());
    }

    #[test]
    fn character_values() {
        let z = [Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.7)];
        assert!((weyl_character(fw(0, 0), z).unwrap() - 1.0).norm() < 1e-12);
        let zero = [Complex64::new(0.0, 0.0); 2];
        assert!((weyl_character(fw(0, 1), zero).unwrap() - 3.0).norm() < 1e-12);
    }

    #[test]
    fn yang_lee_level_two() {
        let w = |a, b, c| AffineLevelWeight([a, b, c]);
        let p = kac_walton_product(2, &w(0, 1, 1), &w(0, 1, 1)).unwrap();
        assert_eq!(p, [(w(0, 1, 1), 1), (w(2, 0, 0), 1)].into_iter().collect());
        assert_eq!(reflect_to_alcove(fw(3, 0), 2), None);
        assert_eq!(reflect_to_alcove(fw(2, 2), 2), Some((fw(1, 1), -1)));
    }

    #[test]
    fn ring_axioms_small_levels() {
        for level in 0..=3 {
            let ws: Vec<_> = integrable_weights(level).into_iter().map(AffineLevelWeight).collect();
            let vac = AffineLevelWeight([level, 0, 0]);
            let table: BTreeMap<_, _> = ws
                .iter()
                .flat_map(|a| ws.iter().map(move |b| ((*a, *b), kac_walton_product(level, a, b).unwrap())))
                .collect();
            let n = |a: &AffineLevelWeight, b: &AffineLevelWeight, c: &AffineLevelWeight| {
                *table[&(*a, *b)].get(c).unwrap_or(&0)
            };
            for a in &ws {
                for b in &ws {
                    assert_eq!(n(&vac, a, b), (a == b) as i64);
                    for c in &ws {
                        assert_eq!(n(a, b, c), n(b, a, c));
                        assert_eq!(n(a, b, c), n(a, &c.conj(), &b.conj()));
                        assert!(sl3_sigma_symmetry_check(level, a, b, c).unwrap());
                        for d in &ws {
                            let lhs: i64 = ws.iter().map(|x| n(a, b, x) * n(x, c, d)).sum();
                            let rhs: i64 = ws.iter().map(|y| n(b, c, y) * n(a, y, d)).sum();
                            assert_eq!(lhs, rhs);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn large_level_is_tensor() {
        let r = AffineLevelWeight([6, 1, 2]);
        let rp = AffineLevelWeight([7, 2, 0]);
        let p = kac_walton_product(9, &r, &rp).unwrap();
        let t = tensor_decomposition(r.finite(), rp.finite()).unwrap();
        assert_eq!(p.len(), t.len());
        for (w, m) in t {
            assert_eq!(p[&AffineLevelWeight::from_finite(w, 9)], m);
        }
    }
}
