//! Module labels: spectral flow, conjugation, orbit types, exact sequences
//! and resolutions, all at the level of Grothendieck classes.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::weights::{frac, LevelParams, OrbitClass, RSLabel};
use crate::Q;

/// An element of `Z/2`, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };
    pub const HALF: HalfInt = HalfInt { twice: 1 };

    pub const fn from_twice(twice: i64) -> Self {
        HalfInt { twice }
    }

    pub const fn int(n: i64) -> Self {
        HalfInt { twice: 2 * n }
    }

    pub fn twice(&self) -> i64 {
        self.twice
    }

    /// Untwisted sector.
    pub fn is_integer(&self) -> bool {
        self.twice % 2 == 0
    }

    pub fn to_q(&self) -> Q {
        Q::new(self.twice, 2)
    }

    /// Exact conversion from a rational with denominator 1 or 2.
    pub fn from_q(q: Q) -> Option<Self> {
        let t = q * 2;
        t.is_integer().then(|| HalfInt { twice: t.to_integer() })
    }

    /// Floor of the value.
    pub fn floor(&self) -> i64 {
        self.twice.div_euclid(2)
    }
}

impl Add for HalfInt {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        HalfInt { twice: self.twice + o.twice }
    }
}

impl Sub for HalfInt {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        HalfInt { twice: self.twice - o.twice }
    }
}

impl Neg for HalfInt {
    type Output = Self;
    fn neg(self) -> Self {
        HalfInt { twice: -self.twice }
    }
}

impl From<i64> for HalfInt {
    fn from(n: i64) -> Self {
        HalfInt::int(n)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// Prints a rational as `p/q`, or `p` when integral.
pub fn fmt_q(q: Q) -> String {
    if q.is_integer() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// The spectral flow `sigma^ell(I_lam)` of a highest-weight module.
///
/// Constructed only through [`HWLabel::new`], which moves `lam` to the
/// leftmost label of its spectral-flow orbit; equal labels are then
/// isomorphic modules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HWLabel {
    ell: HalfInt,
    lam: RSLabel,
}

/// Moves `lam` left along its orbit; returns the leftmost label and how far it moved.
pub fn leftmost(p: &LevelParams, lam: &RSLabel) -> (RSLabel, i64) {
    let mut cur = *lam;
    let mut d = 0;
    while cur.s[2] == 0 {
        let [r0, r1, r2] = cur.r;
        let [s0, s1, _] = cur.s;
        cur = RSLabel::new([r1, r2, r0], [s1 + 1, -1, s0]);
        d += 1;
        debug_assert!(cur.in_sigma(p) && d <= 2);
    }
    (cur, d)
}

impl HWLabel {
    pub fn new(p: &LevelParams, ell: HalfInt, lam: RSLabel) -> Result<Self> {
        if !lam.in_sigma(p) {
            return Err(Error::NotInSigma(lam));
        }
        let (lam, d) = leftmost(p, &lam);
        Ok(HWLabel { ell: ell + HalfInt::int(d), lam })
    }

    pub fn ell(&self) -> HalfInt {
        self.ell
    }

    /// The leftmost label.
    pub fn lam(&self) -> RSLabel {
        self.lam
    }

    /// `(ell', mid)` with `self = sigma^ell'(I_mid)` and `mid = [r; v-2, -1, 0]`, for type 3 only.
    pub fn type3_middle(&self, p: &LevelParams) -> Option<(HalfInt, RSLabel)> {
        (orbit_type(p, &self.lam) == 3).then(|| {
            let [r0, r1, r2] = self.lam.r;
            (self.ell - HalfInt::int(1), RSLabel::new([r2, r0, r1], [p.v - 2, -1, 0]))
        })
    }

    pub fn flow(&self, m: HalfInt) -> Self {
        HWLabel { ell: self.ell + m, lam: self.lam }
    }
}

impl fmt::Display for HWLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I{}^{}", self.lam, self.ell)
    }
}

/// All nonzero `m` with `sigma^m(I_lam)` again highest-weight, and the resulting label.
pub fn hw_flow_maps(p: &LevelParams, lam: &RSLabel) -> Vec<(HalfInt, RSLabel)> {
    let v = p.v;
    let [r0, r1, r2] = lam.r;
    let [s0, s1, s2] = lam.s;
    let mut out = Vec::new();
    if s1 == -1 {
        out.push((HalfInt::int(1), RSLabel::new([r2, r0, r1], [s2, s0 - 1, 0])));
    }
    if s2 == 0 {
        out.push((HalfInt::int(-1), RSLabel::new([r1, r2, r0], [s1 + 1, -1, s0])));
    }
    if lam.s == [0, -1, v - 2] {
        out.push((HalfInt::int(2), RSLabel::new([r1, r2, r0], [0, v - 3, 0])));
    }
    if lam.s == [0, v - 3, 0] {
        out.push((HalfInt::int(-2), RSLabel::new([r2, r0, r1], [0, -1, v - 2])));
    }
    out
}

/// Orbit type: the number of untwisted highest-weight modules in the spectral-flow orbit.
pub fn orbit_type(p: &LevelParams, lam: &RSLabel) -> u8 {
    let (l, _) = leftmost(p, lam);
    if l.s[1] != -1 {
        1
    } else if l.s[2] != p.v - 2 {
        2
    } else {
        3
    }
}

/// Conjugate of an untwisted flowed highest-weight module.
///
/// Uses `conj(sigma^l M) = sigma^(-l) conj(M)` and
/// `conj(I[r;s]) = I[r0,r2,r1; s0,s2-1,s1+1]`.
pub fn conjugate_hw(p: &LevelParams, label: &HWLabel) -> Result<HWLabel> {
    if !label.ell.is_integer() {
        return Err(Error::Twisted(label.ell.to_string()));
    }
    let [r0, r1, r2] = label.lam.r;
    let [s0, s1, s2] = label.lam.s;
    HWLabel::new(p, -label.ell, RSLabel::new([r0, r2, r1], [s0, s2 - 1, s1 + 1]))
}

/// `conj(I^tw[r; s0,-1,s2]) = I^tw[r2,r1,r0; s2,-1,s0]`.
///
/// For `s1 != -1` the twisted module has an infinite-dimensional top space
/// and its conjugate is not highest-weight.
pub fn conjugate_twisted_hw(p: &LevelParams, lam: &RSLabel) -> Result<HWLabel> {
    if !lam.in_sigma(p) {
        return Err(Error::NotInSigma(*lam));
    }
    if lam.s[1] != -1 {
        return Err(Error::InfiniteTopSpace(*lam));
    }
    let [r0, r1, r2] = lam.r;
    let [s0, _, s2] = lam.s;
    HWLabel::new(p, HalfInt::HALF, RSLabel::new([r2, r1, r0], [s2, -1, s0]))
}

/// `sigma^ell` of the standard module with charge class `[j]` in the family `[lam]`,
/// in the modified-grading convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StandardLabel {
    ell: HalfInt,
    j: Q,
    orbit: OrbitClass,
}

impl StandardLabel {
    pub fn new(ell: HalfInt, j: Q, orbit: OrbitClass) -> Self {
        StandardLabel { ell, j: frac(j), orbit }
    }

    /// The nonsimple standard `R~_lam^ell`, charge `j_tw(lam) + kappa`.
    pub fn nonsimple(p: &LevelParams, lam: &RSLabel, ell: HalfInt) -> Result<Self> {
        if !lam.in_infwts(p) {
            return Err(Error::NotInfinite(*lam));
        }
        Ok(Self::new(ell, lam.j_tw(p) + p.kappa, OrbitClass::of(lam)))
    }

    /// `sigma^ell(R^tw_[j])` rewritten as `R~_[j+kappa]^(ell-1/2)`.
    pub fn from_twisted(p: &LevelParams, ell: HalfInt, j_tw: Q, orbit: OrbitClass) -> Self {
        Self::new(ell - HalfInt::HALF, j_tw + p.kappa, orbit)
    }

    /// Inverse of [`StandardLabel::from_twisted`]: `(ell + 1/2, j - kappa)`.
    pub fn to_twisted(&self, p: &LevelParams) -> (HalfInt, Q) {
        (self.ell + HalfInt::HALF, frac(self.j - p.kappa))
    }

    pub fn ell(&self) -> HalfInt {
        self.ell
    }

    /// Charge class in `[0, 1)`.
    pub fn j(&self) -> Q {
        self.j
    }

    pub fn orbit(&self) -> OrbitClass {
        self.orbit
    }

    pub fn flow(&self, m: HalfInt) -> Self {
        StandardLabel { ell: self.ell + m, ..*self }
    }

    /// The orbit member whose gap charge equals `j`, if any.
    pub fn gap_member(&self, p: &LevelParams) -> Option<RSLabel> {
        self.orbit.members().into_iter().find(|m| frac(m.j_tw(p) + p.kappa) == self.j)
    }

    pub fn is_nonsimple(&self, p: &LevelParams) -> bool {
        self.gap_member(p).is_some()
    }
}

impl fmt::Display for StandardLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R~[{};{}]^{}", fmt_q(self.j), self.orbit, self.ell)
    }
}

/// The gap charges `{[j_tw(sigma^i lam) + kappa]}` of a family, sorted.
pub fn gap_charges(p: &LevelParams, orbit: &OrbitClass) -> Vec<Q> {
    let mut out: Vec<Q> = orbit.members().iter().map(|m| frac(m.j_tw(p) + p.kappa)).collect();
    out.sort();
    out
}

/// The same gap set in the twisted convention, `{[j_tw(sigma^i lam)]}`.
pub fn gap_charges_twisted(p: &LevelParams, orbit: &OrbitClass) -> Vec<Q> {
    let mut out: Vec<Q> = gap_charges(p, orbit).into_iter().map(|j| frac(j - p.kappa)).collect();
    out.sort();
    out
}

/// Either kind of label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Hw(HWLabel),
    Std(StandardLabel),
}

impl Label {
    pub fn ell(&self) -> HalfInt {
        match self {
            Label::Hw(h) => h.ell(),
            Label::Std(s) => s.ell(),
        }
    }

    pub fn flow(&self, m: HalfInt) -> Label {
        match self {
            Label::Hw(h) => Label::Hw(h.flow(m)),
            Label::Std(s) => Label::Std(s.flow(m)),
        }
    }
}

impl From<HWLabel> for Label {
    fn from(h: HWLabel) -> Self {
        Label::Hw(h)
    }
}

impl From<StandardLabel> for Label {
    fn from(s: StandardLabel) -> Self {
        Label::Std(s)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Hw(h) => h.fmt(f),
            Label::Std(s) => s.fmt(f),
        }
    }
}

/// Spectral flow on any label; labels stay in normal form.
pub fn spectral_flow(label: &Label, m: HalfInt) -> Label {
    label.flow(m)
}

/// A Grothendieck group element: finitely many labels with nonzero integer coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FormalSum {
    terms: BTreeMap<Label, i64>,
}

impl FormalSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(l: impl Into<Label>) -> Self {
        let mut s = Self::new();
        s.add_term(l, 1);
        s
    }

    pub fn add_term(&mut self, l: impl Into<Label>, c: i64) {
        if c == 0 {
            return;
        }
        let l = l.into();
        let e = self.terms.entry(l).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&l);
        }
    }

    pub fn add_scaled(&mut self, other: &FormalSum, c: i64) {
        for (l, k) in &other.terms {
            self.add_term(*l, c * k);
        }
    }

    pub fn coeff(&self, l: &Label) -> i64 {
        *self.terms.get(l).unwrap_or(&0)
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Label, &i64)> {
        self.terms.iter()
    }

    pub fn flow(&self, m: HalfInt) -> FormalSum {
        let mut out = FormalSum::new();
        for (l, c) in &self.terms {
            out.add_term(l.flow(m), *c);
        }
        out
    }

    /// Keeps terms satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(&Label) -> bool) -> FormalSum {
        FormalSum { terms: self.terms.iter().filter(|(l, _)| keep(l)).map(|(l, c)| (*l, *c)).collect() }
    }

    pub fn all_nonnegative(&self) -> bool {
        self.terms.values().all(|c| *c > 0)
    }

    /// Rewrites every nonsimple standard label as the sum of its two highest-weight factors.
    ///
    /// The result is the expansion in simple classes, hence canonical.
    pub fn hw_view(&self, p: &LevelParams) -> FormalSum {
        let mut out = FormalSum::new();
        for (l, c) in &self.terms {
            match l {
                Label::Std(s) => match s.gap_member(p) {
                    Some(lam) => {
                        let (sub, quot) = standard_composition(p, &lam, s.ell());
                        out.add_term(sub, *c);
                        out.add_term(quot, *c);
                    }
                    None => out.add_term(*l, *c),
                },
                Label::Hw(_) => out.add_term(*l, *c),
            }
        }
        out
    }
}

/// Composition factors of `R~_lam^ell`: `I_lam^(ell+1)` and `I[r; s0,s1-1,s2+1]^ell`.
pub fn standard_composition(p: &LevelParams, lam: &RSLabel, ell: HalfInt) -> (HWLabel, HWLabel) {
    let [s0, s1, s2] = lam.s;
    let sub = HWLabel::new(p, ell + HalfInt::int(1), *lam).expect("relaxed labels lie in the hw set");
    let quot = HWLabel::new(p, ell, RSLabel::new(lam.r, [s0, s1 - 1, s2 + 1]))
        .expect("shifted label stays in the hw set");
    (sub, quot)
}

impl Neg for FormalSum {
    type Output = FormalSum;
    fn neg(self) -> FormalSum {
        FormalSum { terms: self.terms.into_iter().map(|(l, c)| (l, -c)).collect() }
    }
}

impl Add for FormalSum {
    type Output = FormalSum;
    fn add(mut self, o: FormalSum) -> FormalSum {
        self.add_scaled(&o, 1);
        self
    }
}

impl Sub for FormalSum {
    type Output = FormalSum;
    fn sub(mut self, o: FormalSum) -> FormalSum {
        self.add_scaled(&o, -1);
        self
    }
}

impl AddAssign<&FormalSum> for FormalSum {
    fn add_assign(&mut self, o: &FormalSum) {
        self.add_scaled(o, 1);
    }
}

impl fmt::Display for FormalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (l, c)) in self.terms.iter().enumerate() {
            let sep = if i == 0 { "" } else { " " };
            match (*c, i) {
                (1, 0) => write!(f, "{l}")?,
                (1, _) => write!(f, "{sep}+ {l}")?,
                (-1, 0) => write!(f, "-{l}")?,
                (-1, _) => write!(f, "{sep}- {l}")?,
                (c, 0) => write!(f, "{c}*{l}")?,
                (c, _) if c < 0 => write!(f, "{sep}- {}*{l}", -c)?,
                (c, _) => write!(f, "{sep}+ {c}*{l}")?,
            }
        }
        Ok(())
    }
}

/// Short exact sequence `0 -> sub -> middle -> quotient -> 0` of labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ses<M> {
    pub sub: HWLabel,
    pub middle: M,
    pub quotient: HWLabel,
}

impl Ses<StandardLabel> {
    /// `Gr(middle) - Gr(sub) - Gr(quotient)`, which vanishes for an exact sequence.
    pub fn defect(&self, p: &LevelParams) -> FormalSum {
        let mut s = FormalSum::single(self.middle).hw_view(p);
        s.add_term(self.sub, -1);
        s.add_term(self.quotient, -1);
        s
    }
}

/// The gap module of `lam`: `0 -> I^tw_lam -> R^tw_lam -> conj(I^tw[r0,r2,r1;s0,s2,s1]) -> 0`.
pub fn gap_decomposition(p: &LevelParams, lam: &RSLabel) -> Result<Ses<StandardLabel>> {
    if !lam.in_infwts(p) {
        return Err(Error::NotInfinite(*lam));
    }
    let sub = HWLabel::new(p, HalfInt::HALF, *lam)?;
    let middle = StandardLabel::from_twisted(p, HalfInt::ZERO, lam.j_tw(p), OrbitClass::of(lam));
    let [r0, r1, r2] = lam.r;
    let [s0, s1, s2] = lam.s;
    let partner = HWLabel::new(p, HalfInt::ZERO, RSLabel::new([r0, r2, r1], [s0, s2, s1]))?;
    let quotient = conjugate_hw(p, &partner)?.flow(-HalfInt::HALF);
    Ok(Ses { sub, middle, quotient })
}

/// Output of [`atypical_ses`]: the sequence plus the type of the submodule's orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtypicalSes {
    pub ses: Ses<StandardLabel>,
    pub sub_type: u8,
}

/// `0 -> sigma(I[r; s0,s1+1,s2-1]) -> R~[r; s0,s1+1,s2-1]^0 -> I[r;s] -> 0` for leftmost `lam`.
pub fn atypical_ses(p: &LevelParams, lam: &RSLabel) -> Result<AtypicalSes> {
    if !lam.in_sigma(p) {
        return Err(Error::NotInSigma(*lam));
    }
    if lam.s[2] == 0 {
        return Err(Error::NotLeftmost(*lam));
    }
    let [s0, s1, s2] = lam.s;
    let mu = RSLabel::new(lam.r, [s0, s1 + 1, s2 - 1]);
    let ses = Ses {
        sub: HWLabel::new(p, HalfInt::int(1), mu)?,
        middle: StandardLabel::nonsimple(p, &mu, HalfInt::ZERO)?,
        quotient: HWLabel::new(p, HalfInt::ZERO, *lam)?,
    };
    Ok(AtypicalSes { ses, sub_type: orbit_type(p, &mu) })
}

fn sign(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Alternating resolution of a flowed highest-weight module by nonsimple standards.
///
/// Terms whose flow exceeds `label.ell() + depth` are dropped.
pub fn resolution(p: &LevelParams, label: &HWLabel, depth: i64) -> FormalSum {
    let v = p.v;
    let lam = label.lam();
    let [r0, r1, r2] = lam.r;
    let [s0, s1, s2] = lam.s;
    let mut out = FormalSum::new();
    let mut push = |c: i64, f: i64, r: [i64; 3], s: [i64; 3]| {
        if f <= depth {
            let l = StandardLabel::nonsimple(p, &RSLabel::new(r, s), label.ell() + HalfInt::int(f))
                .expect("resolution terms are relaxed labels");
            out.add_term(l, c);
        }
    };
    for m in 0..s2 {
        push(sign(m), m, lam.r, [s0, s1 + m + 1, s2 - m - 1]);
    }
    let cyc = [[r1, r2, r0], [r0, r1, r2], [r2, r0, r1]];
    let sv = sign(v);
    let mut n = 0;
    while s0 > 0 && 3 * n * v + s2 < depth {
        for m in 0..s0 {
            let c = sign(s2 + m + n * v);
            let s = [v - 2 - s0, m, s0 - m - 1];
            for (i, r) in cyc.iter().enumerate() {
                let f = m + (3 * n + i as i64) * v + s2 + 1;
                push(if i == 1 { c * sv } else { c }, f, *r, s);
            }
        }
        n += 1;
    }
    let cyc = [[r2, r0, r1], [r1, r2, r0], [r0, r1, r2]];
    let mut n = 1;
    while (3 * n - 2) * v - s1 - 1 <= depth {
        for m in 0..=(v - 3 - s0) {
            let c = -sign(s1 + m + n * v);
            let s = [s0, m, v - 3 - s0 - m];
            for (i, r) in cyc.iter().enumerate() {
                let f = m + (3 * n - 2 + i as i64) * v - s1 - 1;
                push(if i == 1 { c * sv } else { c }, f, *r, s);
            }
        }
        n += 1;
    }
    out
}

/// All labels with coefficient in `sum` whose flow is at most `max`.
pub fn truncate_flow(sum: &FormalSum, max: HalfInt) -> FormalSum {
    sum.filter(|l| l.ell() <= max)
}

/// Exact zero test for a rational.
pub fn q_is_zero(q: Q) -> bool {
    q.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{enumerate_surv, level_params};

    fn l(r: [i64; 3], s: [i64; 3]) -> RSLabel {
        RSLabel::new(r, s)
    }

    #[test]
    fn half_int_display() {
        assert_eq!(HalfInt::from_twice(3).to_string(), "3/2");
        assert_eq!(HalfInt::from_twice(-1).to_string(), "-1/2");
        assert_eq!(HalfInt::int(-2).to_string(), "-2");
        assert_eq!(HalfInt::from_q(Q::new(5, 2)), Some(HalfInt::from_twice(5)));
        assert_eq!(HalfInt::from_q(Q::new(1, 3)), None);
    }

    #[test]
    fn flow_example() {
        let p = level_params(4, 3).unwrap();
        let a = HWLabel::new(&p, HalfInt::int(1), l([1, 0, 0], [0, -1, 1])).unwrap();
        let b = HWLabel::new(&p, HalfInt::ZERO, l([0, 1, 0], [1, -1, 0])).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn flow_maps_round_trip() {
        for (u, v) in [(4, 3), (5, 3), (3, 4), (4, 5), (7, 5), (5, 7)] {
            let p = level_params(u, v).unwrap();
            for lam in enumerate_surv(&p) {
                let h = HWLabel::new(&p, HalfInt::ZERO, lam).unwrap();
                for (m, mu) in hw_flow_maps(&p, &lam) {
                    assert!(mu.in_sigma(&p));
                    let back = HWLabel::new(&p, -m, mu).unwrap();
                    assert_eq!(back, h, "{lam} via {m}");
                }
            }
        }
    }

    #[test]
    fn type_counts_match_orbits() {
        for (u, v) in [(4, 3), (5, 3), (3, 4), (4, 5), (5, 4), (7, 5), (3, 7)] {
            let p = level_params(u, v).unwrap();
            let mut orbits: BTreeMap<HWLabel, Vec<RSLabel>> = BTreeMap::new();
            for lam in enumerate_surv(&p) {
                let h = HWLabel::new(&p, HalfInt::ZERO, lam).unwrap();
                orbits.entry(h.flow(-h.ell())).or_default().push(lam);
            }
            for (h, members) in orbits {
                assert_eq!(members.len() as u8, orbit_type(&p, &h.lam()), "{u},{v} {h}");
            }
        }
    }

    #[test]
    fn types() {
        let p = level_params(3, 4).unwrap();
        assert_eq!(orbit_type(&p, &l([0, 0, 0], [1, -1, 1])), 2);
        assert_eq!(orbit_type(&p, &p.vacuum()), 3);
        let p = level_params(5, 3).unwrap();
        for lam in enumerate_surv(&p) {
            assert_eq!(orbit_type(&p, &lam), 3);
        }
    }

    #[test]
    fn conjugation() {
        let p = level_params(4, 3).unwrap();
        let vac = HWLabel::new(&p, HalfInt::ZERO, p.vacuum()).unwrap();
        assert_eq!(conjugate_hw(&p, &vac).unwrap(), vac);
        let a = HWLabel::new(&p, HalfInt::ZERO, l([0, 1, 0], [1, -1, 0])).unwrap();
        let b = HWLabel::new(&p, HalfInt::ZERO, l([0, 0, 1], [1, -1, 0])).unwrap();
        assert_eq!(conjugate_hw(&p, &a).unwrap(), b);
        assert!(conjugate_hw(&p, &a.flow(HalfInt::HALF)).is_err());
        assert!(matches!(
            conjugate_twisted_hw(&p, &l([1, 0, 0], [0, 0, 0])),
            Err(Error::InfiniteTopSpace(_))
        ));
    }

    #[test]
    fn twisted_conjugation_agrees_with_flow_rule() {
        for (u, v) in [(4, 3), (3, 4), (4, 5), (5, 7)] {
            let p = level_params(u, v).unwrap();
            for lam in enumerate_surv(&p).into_iter().filter(|x| x.s[1] == -1) {
                let h = HWLabel::new(&p, HalfInt::ZERO, lam).unwrap();
                let via_flow = conjugate_hw(&p, &h).unwrap().flow(-HalfInt::HALF);
                assert_eq!(conjugate_twisted_hw(&p, &lam).unwrap(), via_flow);
            }
        }
    }

    #[test]
    fn conjugation_is_involution() {
        let p = level_params(5, 4).unwrap();
        for lam in enumerate_surv(&p) {
            let h = HWLabel::new(&p, HalfInt::int(3), lam).unwrap();
            assert_eq!(conjugate_hw(&p, &conjugate_hw(&p, &h).unwrap()).unwrap(), h);
        }
    }

    #[test]
    fn gap_and_atypical_sequences_are_exact() {
        for (u, v) in [(4, 3), (5, 3), (3, 4), (4, 5), (5, 7)] {
            let p = level_params(u, v).unwrap();
            for lam in enumerate_surv(&p) {
                if lam.in_infwts(&p) {
                    let ses = gap_decomposition(&p, &lam).unwrap();
                    assert!(ses.defect(&p).is_empty(), "{lam}");
                    assert_eq!(ses.sub, HWLabel::new(&p, HalfInt::HALF, lam).unwrap());
                }
                let (left, _) = leftmost(&p, &lam);
                let a = atypical_ses(&p, &left).unwrap();
                assert!(a.ses.defect(&p).is_empty());
                let s = left.s;
                let expect = if s == [0, v - 4, 1] {
                    3
                } else if s[2] == 1 {
                    2
                } else {
                    1
                };
                assert_eq!(a.sub_type, expect, "{left}");
            }
        }
    }

    #[test]
    fn gap_sets() {
        let p = level_params(4, 3).unwrap();
        let o = OrbitClass::of(&l([1, 0, 0], [0, 0, 0]));
        assert_eq!(gap_charges_twisted(&p, &o), vec![Q::new(1, 6), Q::new(1, 2), Q::new(5, 6)]);
        assert_eq!(gap_charges(&p, &o), vec![Q::new(1, 9), Q::new(4, 9), Q::new(7, 9)]);
        let p = level_params(3, 4).unwrap();
        let o = OrbitClass::of(&l([0, 0, 0], [1, 0, 0]));
        assert_eq!(gap_charges(&p, &o), vec![Q::zero(), Q::new(1, 4), Q::new(1, 2)]);
    }

    #[test]
    fn v3_resolution_pattern() {
        let p = level_params(5, 3).unwrap();
        let r = [1, 1, 0];
        let mid = l(r, [1, -1, 0]);
        let h = HWLabel::new(&p, HalfInt::ZERO, mid).unwrap();
        let res = resolution(&p, &h.flow(-h.ell()), 30).flow(h.ell());
        let std = |rr: [i64; 3], f: i64| {
            Label::Std(StandardLabel::nonsimple(&p, &l(rr, [0, 0, 0]), HalfInt::int(f)).unwrap())
        };
        let sig = |x: [i64; 3]| l(x, [0, 0, 0]).sigma().r;
        let sig_inv = |x: [i64; 3]| l(x, [0, 0, 0]).sigma_pow(-1).r;
        for n in 0..3 {
            let c = sign(n);
            assert_eq!(res.coeff(&std(sig_inv(r), 9 * n + 1)), c);
            assert_eq!(res.coeff(&std(r, 9 * n + 4)), -c);
            assert_eq!(res.coeff(&std(sig(r), 9 * n + 7)), c);
        }
    }

    #[test]
    fn type2_resolution_34() {
        let p = level_params(3, 4).unwrap();
        let h = HWLabel::new(&p, HalfInt::ZERO, l([0, 0, 0], [1, -1, 1])).unwrap();
        let res = resolution(&p, &h, 40);
        let mut expect = FormalSum::new();
        for n in 0..=20 {
            let s = StandardLabel::nonsimple(&p, &l([0, 0, 0], [1, 0, 0]), HalfInt::int(2 * n)).unwrap();
            expect.add_term(s, sign(n));
        }
        assert_eq!(res, expect);
    }

    #[test]
    fn resolution_telescopes_in_simple_classes() {
        for (u, v) in [(4, 3), (5, 3), (3, 4), (4, 5), (5, 4), (3, 5), (5, 7)] {
            let p = level_params(u, v).unwrap();
            let depth = 9 * v;
            for lam in enumerate_surv(&p) {
                let h = HWLabel::new(&p, HalfInt::int(2), lam).unwrap();
                let expanded = resolution(&p, &h, depth).hw_view(&p);
                let limit = h.ell() + HalfInt::int(depth);
                let head = expanded.filter(|x| x.ell() <= limit);
                assert_eq!(head, FormalSum::single(h), "{u},{v} {lam}");
            }
        }
    }
}
