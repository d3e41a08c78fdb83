//! W3 minimal-model S-matrix, its identities, and fusion via sl3 factorisation.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::sl3::{self, weyl_character, weyl_group, AffineLevelWeight, FiniteWeight};
use crate::weights::{enumerate_infwts, frac, LevelParams, OrbitClass, RSLabel};
use crate::Q;

/// Default absolute tolerance for float comparisons.
pub const TOL: f64 = 1e-9;

/// `exp(2 pi i q)`, reducing `q` mod 1 exactly first.
pub fn e(q: Q) -> Complex64 {
    let x = frac(q).to_f64().unwrap();
    Complex64::from_polar(1.0, 2.0 * PI * x)
}

/// Exact `<a, b>` for integral Dynkin vectors, as a rational.
pub fn inner_q(a: [i64; 2], b: [i64; 2]) -> Q {
    Q::new(2 * a[0] * b[0] + a[0] * b[1] + a[1] * b[0] + 2 * a[1] * b[1], 3)
}

fn plus_rho(t: [i64; 2]) -> [i64; 2] {
    [t[0] + 1, t[1] + 1]
}

fn weyl_sum(t: [i64; 2], tp: [i64; 2], ratio: Q) -> Complex64 {
    let (x, y) = (plus_rho(t), plus_rho(tp));
    weyl_group()
        .iter()
        .map(|(w, sgn)| (*sgn as f64) * e(-ratio * inner_q(w(x), y)))
        .sum()
}

/// A single S-matrix entry; any integral labels are accepted.
pub fn w3_smatrix_entry(p: &LevelParams, a: &RSLabel, b: &RSLabel) -> Complex64 {
    let (u, v) = (p.u, p.v);
    let (r, s, rp, sp) = (a.r_bar(), a.s_bar(), b.r_bar(), b.s_bar());
    let phase = e(inner_q(plus_rho(r), plus_rho(sp)) + inner_q(plus_rho(s), plus_rho(rp)));
    let pref = 1.0 / (3f64.sqrt() * (u * v) as f64);
    phase * weyl_sum(r, rp, Q::new(v, u)) * weyl_sum(s, sp, Q::new(u, v)) * pref
}

/// The full S-matrix on orbit classes.
#[derive(Debug, Clone)]
pub struct W3SMatrix {
    pub params: LevelParams,
    pub orbits: Vec<OrbitClass>,
    pub entries: Vec<Vec<Complex64>>,
}

impl W3SMatrix {
    pub fn new(p: &LevelParams) -> Self {
        let orbits = enumerate_infwts(p);
        let entries = orbits
            .iter()
            .map(|a| orbits.iter().map(|b| w3_smatrix_entry(p, &a.rep(), &b.rep())).collect())
            .collect();
        W3SMatrix { params: *p, orbits, entries }
    }

    pub fn index(&self, o: &OrbitClass) -> usize {
        self.orbits.iter().position(|x| x == o).expect("orbit belongs to this level")
    }

    pub fn get(&self, a: &OrbitClass, b: &OrbitClass) -> Complex64 {
        self.entries[self.index(a)][self.index(b)]
    }

    pub fn vacuum_index(&self) -> usize {
        self.index(&OrbitClass::of(&self.params.w3_vacuum()))
    }

    /// `max |S_ab - S_ba|`.
    pub fn symmetry_residual(&self) -> f64 {
        let n = self.orbits.len();
        let mut m: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                m = m.max((self.entries[i][j] - self.entries[j][i]).norm());
            }
        }
        m
    }

    /// `max |(S S^dagger - 1)_ab|`.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.orbits.len();
        let mut m: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let x: Complex64 = (0..n).map(|k| self.entries[i][k] * self.entries[j][k].conj()).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                m = m.max((x - target).norm());
            }
        }
        m
    }

    /// `max |(S^2 - C)_ab|` where `C` is the conjugation permutation.
    pub fn conjugation_residual(&self) -> f64 {
        let n = self.orbits.len();
        let mut m: f64 = 0.0;
        for i in 0..n {
            let c = OrbitClass::of(&conj_label(&self.orbits[i].rep()));
            let ci = self.index(&c);
            for j in 0..n {
                let x: Complex64 = (0..n).map(|k| self.entries[i][k] * self.entries[k][j]).sum();
                let target = if j == ci { 1.0 } else { 0.0 };
                m = m.max((x - target).norm());
            }
        }
        m
    }

    /// Numeric Verlinde coefficient `sum_m S_am S_bm conj(S_cm) / S_0m`.
    pub fn verlinde(&self, a: &OrbitClass, b: &OrbitClass, c: &OrbitClass) -> Complex64 {
        let (ia, ib, ic, i0) = (self.index(a), self.index(b), self.index(c), self.vacuum_index());
        (0..self.orbits.len())
            .map(|m| {
                self.entries[ia][m] * self.entries[ib][m] * self.entries[ic][m].conj()
                    / self.entries[i0][m]
            })
            .sum()
    }
}

/// The conjugation swap `(r1 <-> r2, s1 <-> s2)`.
pub fn conj_label(l: &RSLabel) -> RSLabel {
    RSLabel::new([l.r[0], l.r[2], l.r[1]], [l.s[0], l.s[2], l.s[1]])
}

/// `S_{[sigma r, s], b} = (-1)^v e(v j_tw(b)) S_{a,b}` and the inverse phase for `sigma` on `s`.
pub fn sigma_phase_check(p: &LevelParams, a: &RSLabel, b: &RSLabel, tol: f64) -> bool {
    let s = w3_smatrix_entry(p, a, b);
    let ph = e(b.j_tw(p) * p.v) * if p.v % 2 == 0 { 1.0 } else { -1.0 };
    let sr = RSLabel::new(a.sigma().r, a.s);
    let ss = RSLabel::new(a.r, a.sigma().s);
    let both = a.sigma();
    (w3_smatrix_entry(p, &sr, b) - ph * s).norm() <= tol
        && (w3_smatrix_entry(p, &ss, b) - s / ph).norm() <= tol
        && (w3_smatrix_entry(p, &both, b) - s).norm() <= tol
}

/// `xi_{s'} = -2 pi i (u/v)(s' + rho)` in Dynkin coordinates.
pub fn xi(p: &LevelParams, sp: [i64; 2]) -> [Complex64; 2] {
    let f = -2.0 * PI * (p.u as f64) / (p.v as f64);
    [Complex64::new(0.0, f * (sp[0] + 1) as f64), Complex64::new(0.0, f * (sp[1] + 1) as f64)]
}

/// Residual of `S[r,s]/S[r,0] = e(<s, r'+rho>) chi_s(xi_{s'})`.
pub fn ratio_weyl_character_residual(p: &LevelParams, a: &RSLabel, b: &RSLabel) -> Result<f64> {
    let zero_s = RSLabel::new(a.r, [p.v - 3, 0, 0]);
    let den = w3_smatrix_entry(p, &zero_s, b);
    if den.norm() < TOL {
        return Err(Error::Unsupported("vanishing denominator entry".into()));
    }
    let lhs = w3_smatrix_entry(p, a, b) / den;
    let rhs = e(inner_q(a.s_bar(), plus_rho(b.r_bar())))
        * weyl_character(FiniteWeight(a.s_bar()), xi(p, b.s_bar()))?;
    Ok((lhs - rhs).norm())
}

pub fn ratio_weyl_character_check(p: &LevelParams, a: &RSLabel, b: &RSLabel, tol: f64) -> Result<bool> {
    Ok(ratio_weyl_character_residual(p, a, b)? <= tol)
}

/// Residual of `sum_{t' in L(t)} S[r, s+t'] = e(<t, r'+rho>) chi_t(xi_{s'}) S[r,s]`.
pub fn tensor_sum_residual(p: &LevelParams, a: &RSLabel, t: FiniteWeight, b: &RSLabel) -> Result<f64> {
    let lhs: Complex64 = sl3::weight_multiplicities(t)?
        .iter()
        .map(|(w, m)| {
            let [t1, t2] = w.0;
            let shifted = RSLabel::new(a.r, [a.s[0] - t1 - t2, a.s[1] + t1, a.s[2] + t2]);
            w3_smatrix_entry(p, &shifted, b) * (*m as f64)
        })
        .sum();
    let rhs = e(inner_q(t.0, plus_rho(b.r_bar())))
        * weyl_character(t, xi(p, b.s_bar()))?
        * w3_smatrix_entry(p, a, b);
    Ok((lhs - rhs).norm())
}

pub fn tensor_sum_check(p: &LevelParams, a: &RSLabel, t: FiniteWeight, b: &RSLabel, tol: f64) -> Result<bool> {
    Ok(tensor_sum_residual(p, a, t, b)? <= tol)
}

/// Complete symmetric polynomial `h_m(x1, x2, x3)`.
pub fn complete_symmetric(m: usize, x: [Complex64; 3]) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    for i in 0..=m {
        for j in 0..=m - i {
            total += x[0].powu(i as u32) * x[1].powu(j as u32) * x[2].powu((m - i - j) as u32);
        }
    }
    total
}

/// Residual of `sum_{m<=v-3} x^m h_m(X) = (1 - x^v X2^v) / prod (1 - x Xi)`.
pub fn sum_of_complete_residual(v: i64, x: Complex64, big: [Complex64; 3]) -> f64 {
    let lhs: Complex64 = (0..=(v - 3) as usize).map(|m| x.powu(m as u32) * complete_symmetric(m, big)).sum();
    let rhs = (Complex64::new(1.0, 0.0) - x.powu(v as u32) * big[1].powu(v as u32))
        / big.iter().map(|xi| Complex64::new(1.0, 0.0) - x * xi).product::<Complex64>();
    (lhs - rhs).norm() / (1.0 + rhs.norm())
}

/// `c_i = (j' - kappa) - j_tw(sigma^i b)`, singular when some `c_i` is an integer.
pub fn gap_offsets(p: &LevelParams, b: &RSLabel, jp: Q) -> [Q; 3] {
    [0, 1, 2].map(|i| jp - p.kappa - b.sigma_pow(i).j_tw(p))
}

/// Residual of the closed form for `sum_m x^m chi_{m omega2}(xi_{s'})`.
pub fn sum_fund_modules_residual(p: &LevelParams, b: &RSLabel, jp: f64) -> Result<f64> {
    let kappa = p.kappa.to_f64().unwrap();
    let x0 = jp - kappa;
    let jt = |i: i64| b.sigma_pow(i).j_tw(p).to_f64().unwrap();
    let c = [0, 1, 2].map(|i| x0 - jt(i));
    if c.iter().any(|ci| (ci - ci.round()).abs() < 1e-9) {
        return Err(Error::SingularCharge);
    }
    let rr = plus_rho(b.r_bar());
    let pair = inner_q(rr, [0, 1]).to_f64().unwrap();
    let x = -Complex64::from_polar(1.0, 2.0 * PI * (pair - x0));
    let xi = xi(p, b.s_bar());
    let mut lhs = Complex64::new(0.0, 0.0);
    for m in 0..=(p.v - 3) {
        lhs += x.powu(m as u32) * weyl_character(FiniteWeight([0, m]), xi)?;
    }
    let one = Complex64::new(1.0, 0.0);
    let v = p.v as f64;
    let num = (one - Complex64::from_polar(1.0, 2.0 * PI * v * (jt(0) - x0)))
        * Complex64::from_polar(1.0, 3.0 * PI * x0);
    let den = 8.0 * c.iter().map(|ci| (PI * ci).sin()).product::<f64>();
    Ok((lhs - num / den).norm())
}

pub fn sum_fund_modules_check(p: &LevelParams, b: &RSLabel, jp: f64, tol: f64) -> Result<bool> {
    Ok(sum_fund_modules_residual(p, b, jp)? <= tol)
}

/// Which root-lattice condition picks orbit representatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepRule {
    R,
    S,
}

fn in_root_lattice(t: [i64; 2]) -> bool {
    (t[0] + 2 * t[1]).rem_euclid(3) == 0
}

/// The rule prescribed for this level; the `r` rule when either would do.
pub fn default_rule(p: &LevelParams) -> RepRule {
    if p.u % 3 == 0 {
        RepRule::S
    } else {
        RepRule::R
    }
}

/// The unique orbit member satisfying the root-lattice condition of `rule`.
pub fn representative(orbit: &OrbitClass, rule: RepRule) -> RSLabel {
    let pick = orbit.members().into_iter().find(|m| match rule {
        RepRule::R => in_root_lattice(m.r_bar()),
        RepRule::S => in_root_lattice(m.s_bar()),
    });
    pick.expect("gcd(u,v) = 1 guarantees a root-lattice representative")
}

/// Fusion coefficient with an explicit representative rule.
pub fn w3_fusion_with(p: &LevelParams, a: &OrbitClass, b: &OrbitClass, c: &OrbitClass, rule: RepRule) -> i64 {
    let [x, y, z] = [a, b, c].map(|o| representative(o, rule));
    let kw = |level: i64, f: fn(&RSLabel) -> [i64; 3]| {
        sl3::kac_walton(
            level,
            &AffineLevelWeight(f(&x)),
            &AffineLevelWeight(f(&y)),
            &AffineLevelWeight(f(&z)),
        )
        .expect("labels are integrable")
    };
    kw(p.u - 3, |l| l.r) * kw(p.v - 3, |l| l.s)
}

/// `N_{[a][b]}^{[c]}` for the W3 minimal model.
pub fn w3_fusion(p: &LevelParams, a: &OrbitClass, b: &OrbitClass, c: &OrbitClass) -> i64 {
    w3_fusion_with(p, a, b, c, default_rule(p))
}

/// Fusion where `b` may sit on a shifted alcove boundary (some `s_i = -1`).
///
/// Such labels have vanishing S-matrix rows, so Verlinde assigns them zero.
pub fn w3_fusion_extended(p: &LevelParams, a: &OrbitClass, b: &RSLabel, c: &OrbitClass) -> Result<i64> {
    if b.in_infwts(p) {
        return Ok(w3_fusion(p, a, &OrbitClass::of(b), c));
    }
    let on_wall = b.s.contains(&-1) || b.r.contains(&-1);
    let sums_ok = b.s.iter().sum::<i64>() == p.v - 3 && b.r.iter().sum::<i64>() == p.u - 3;
    if on_wall && sums_ok && b.s.iter().chain(b.r.iter()).all(|&x| x >= -1) {
        Ok(0)
    } else {
        Err(Error::NotInfinite(*b))
    }
}

/// Vir(2,5) S-matrix in the basis (identity, phi), for comparison at (5,3) and (3,5).
pub fn yang_lee_smatrix() -> [[f64; 2]; 2] {
    let f = 2.0 / 5f64.sqrt();
    let (a, b) = ((2.0 * PI / 5.0).sin(), (4.0 * PI / 5.0).sin());
    [[-f * a, f * b], [f * b, f * a]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{enumerate_infwts, level_params};

    const LEVELS: [(i64, i64); 6] = [(4, 3), (5, 3), (3, 4), (4, 5), (5, 4), (3, 5)];

    #[test]
    fn matrix_properties() {
        for (u, v) in LEVELS {
            let p = level_params(u, v).unwrap();
            let s = W3SMatrix::new(&p);
            assert!(s.symmetry_residual() < TOL, "{u},{v}");
            assert!(s.unitarity_residual() < TOL, "{u},{v}");
            assert!(s.conjugation_residual() < TOL, "{u},{v}");
        }
    }

    #[test]
    fn one_by_one_is_one() {
        let p = level_params(3, 4).unwrap();
        let s = W3SMatrix::new(&p);
        assert_eq!(s.orbits.len(), 1);
        assert!((s.entries[0][0] - 1.0).norm() < TOL);
    }

    #[test]
    fn boundary_vanishing() {
        let p = level_params(4, 5).unwrap();
        let b = RSLabel::new([1, 0, 0], [1, 1, 0]);
        for s in [[3, -1, 0], [0, 3, -1], [-1, 1, 2]] {
            let a = RSLabel::new([0, 1, 0], s);
            assert!(w3_smatrix_entry(&p, &a, &b).norm() < TOL);
        }
    }

    #[test]
    fn phases() {
        for (u, v) in LEVELS {
            let p = level_params(u, v).unwrap();
            for a in enumerate_infwts(&p) {
                for b in enumerate_infwts(&p) {
                    for bm in b.members() {
                        assert!(sigma_phase_check(&p, &a.rep(), &bm, TOL), "{u},{v} {a} {bm}");
                    }
                }
            }
        }
    }

    #[test]
    fn yang_lee_up_to_permutation() {
        let yl = yang_lee_smatrix();
        for (u, v) in [(5, 3), (3, 5)] {
            let p = level_params(u, v).unwrap();
            let s = W3SMatrix::new(&p);
            let i0 = s.vacuum_index();
            let i1 = 1 - i0;
            let perm = [i0, i1];
            for a in 0..2 {
                for b in 0..2 {
                    let x = s.entries[perm[a]][perm[b]];
                    assert!(x.im.abs() < TOL);
                    assert!((x.re.abs() - yl[a][b].abs()).abs() < TOL);
                }
            }
        }
    }

    #[test]
    fn verlinde_matches_factorisation() {
        for (u, v) in LEVELS {
            let p = level_params(u, v).unwrap();
            let s = W3SMatrix::new(&p);
            for a in &s.orbits {
                for b in &s.orbits {
                    for c in &s.orbits {
                        let n = s.verlinde(a, b, c);
                        let k = w3_fusion(&p, a, b, c);
                        assert!((n - k as f64).norm() < 1e-6, "{u},{v} {a} {b} {c}: {n} vs {k}");
                    }
                }
            }
        }
    }

    #[test]
    fn rules_agree_when_both_allowed() {
        for (u, v) in [(4, 5), (5, 4), (7, 4), (5, 7)] {
            let p = level_params(u, v).unwrap();
            let os = enumerate_infwts(&p);
            for a in &os {
                for b in &os {
                    for c in &os {
                        assert_eq!(
                            w3_fusion_with(&p, a, b, c, RepRule::R),
                            w3_fusion_with(&p, a, b, c, RepRule::S)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn yang_lee_fusion() {
        let p = level_params(5, 3).unwrap();
        let phi = OrbitClass::of(&RSLabel::new([1, 1, 0], [0, 0, 0]));
        let vac = OrbitClass::of(&p.w3_vacuum());
        assert_eq!(w3_fusion(&p, &phi, &phi, &phi), 1);
        assert_eq!(w3_fusion(&p, &phi, &phi, &vac), 1);
        assert_eq!(w3_fusion(&p, &phi, &vac, &phi), 1);
    }

    #[test]
    fn identity_spot_checks() {
        let p = level_params(4, 5).unwrap();
        let a = RSLabel::new([0, 1, 0], [1, 0, 1]);
        let b = RSLabel::new([1, 0, 0], [0, 2, 0]);
        assert!(ratio_weyl_character_residual(&p, &a, &b).unwrap() < TOL);
        let zero = RSLabel::new(a.r, [2, 0, 0]);
        assert!(ratio_weyl_character_residual(&p, &zero, &b).unwrap() < TOL);
        for t in [[0, 0], [0, 1], [1, 0], [1, 1]] {
            assert!(tensor_sum_residual(&p, &a, FiniteWeight(t), &b).unwrap() < TOL);
        }
        let p = level_params(3, 4).unwrap();
        let b = RSLabel::new([0, 0, 0], [1, 0, 0]);
        assert!(sum_fund_modules_residual(&p, &b, 1.0 / 7.0).unwrap() < TOL);
        let p = level_params(5, 3).unwrap();
        let b = RSLabel::new([1, 1, 0], [0, 0, 0]);
        assert!(sum_fund_modules_residual(&p, &b, 0.123).unwrap() < TOL);
    }
}
