//! S-kernels, closed-form Grothendieck fusion, the Fourier oracle, and the
//! resolution algorithm for products involving highest-weight modules.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::labels::{orbit_type, resolution, FormalSum, HWLabel, HalfInt, Label, StandardLabel};
use crate::sl3::{kac_walton_product, AffineLevelWeight};
use crate::w3::{e, w3_fusion_extended, w3_smatrix_entry, TOL};
use crate::weights::{enumerate_infwts, frac, is_integer, LevelParams, OrbitClass, RSLabel};
use crate::Q;

/// A kernel value with its factors: W3 entry, phase exponent and optional denominator.
///
/// `value = w3 * exp(-2 pi i phase) / denominator`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SKernelEntry {
    pub value: Complex64,
    pub w3: Complex64,
    pub phase: Q,
    pub denominator: Option<Complex64>,
}

impl SKernelEntry {
    fn build(w3: Complex64, phase: Q, denominator: Option<Complex64>) -> Self {
        let mut value = w3 * e(-phase);
        if let Some(d) = denominator {
            value /= d;
        }
        SKernelEntry { value, w3, phase, denominator }
    }
}

/// `D(x) = 2cos(3 pi x) - sum_i 2cos(pi (x + 2 j_tw(sigma^i lam')))` at `x = j' - kappa`.
///
/// Complex `x` is allowed so that formal series can be Abel-summed.
pub fn kernel_denominator(p: &LevelParams, x: Complex64, lamp: &RSLabel) -> Complex64 {
    let mut d = (x * 3.0 * PI).cos() * 2.0;
    for i in 0..3 {
        let jt = lamp.sigma_pow(i).j_tw(p).to_f64().unwrap();
        d -= ((x + 2.0 * jt) * PI).cos() * 2.0;
    }
    d
}

/// `D = 8 prod_i sin(pi c_i)` with `c_i = x - j_tw(sigma^i lam')`.
pub fn kernel_denominator_product(p: &LevelParams, x: f64, lamp: &RSLabel) -> f64 {
    8.0 * (0..3)
        .map(|i| (PI * (x - lamp.sigma_pow(i).j_tw(p).to_f64().unwrap())).sin())
        .product::<f64>()
}

fn require_integer(l: HalfInt) -> Result<()> {
    if l.is_integer() {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("kernel needs integral flow, got {l}")))
    }
}

/// `S^W_{[lam][lam']} exp(-2 pi i (2 kappa l l' + l (j' - kappa) + (j - kappa) l'))`.
pub fn standard_kernel(p: &LevelParams, a: &StandardLabel, b: &StandardLabel) -> Result<SKernelEntry> {
    require_integer(a.ell())?;
    require_integer(b.ell())?;
    let (l, lp) = (a.ell().to_q(), b.ell().to_q());
    let k = p.kappa;
    let phase = k * l * lp * 2 + l * (b.j() - k) + (a.j() - k) * lp;
    let w3 = w3_smatrix_entry(p, &a.orbit().rep(), &b.orbit().rep());
    Ok(SKernelEntry::build(w3, phase, None))
}

/// Standard kernel at a complex charge `j'`, used for Abel summation.
pub fn standard_kernel_complex(p: &LevelParams, a: &StandardLabel, lp: i64, jp: Complex64, orbit_b: &OrbitClass) -> Complex64 {
    let k = p.kappa.to_f64().unwrap();
    let l = a.ell().to_q().to_f64().unwrap();
    let lpf = lp as f64;
    let j = a.j().to_f64().unwrap();
    let phase = Complex64::new(2.0 * k * l * lpf + (j - k) * lpf, 0.0) + (jp - k) * l;
    let w3 = w3_smatrix_entry(p, &a.orbit().rep(), &orbit_b.rep());
    w3 * (Complex64::new(0.0, -2.0 * PI) * phase).exp()
}

fn type3_parts(p: &LevelParams, a: &HWLabel) -> Result<(Q, RSLabel, RSLabel)> {
    let (l, mid) = a.type3_middle(p).ok_or(Error::NotType3(a.lam()))?;
    let under = RSLabel::new(mid.r, [p.v - 3, 0, 0]);
    Ok((l.to_q(), mid, under))
}

/// Kernel of a type-3 highest-weight module against a standard module.
///
/// Raises [`Error::GapDivergence`] when the denominator vanishes, i.e. when `b` is nonsimple.
pub fn type3_kernel(p: &LevelParams, a: &HWLabel, b: &StandardLabel) -> Result<SKernelEntry> {
    type3_kernel_tol(p, a, b, TOL)
}

pub fn type3_kernel_tol(p: &LevelParams, a: &HWLabel, b: &StandardLabel, tol: f64) -> Result<SKernelEntry> {
    require_integer(b.ell())?;
    let (l, mid, under) = type3_parts(p, a)?;
    let lp = b.ell().to_q();
    let k = p.kappa;
    let lh = l - Q::new(1, 2);
    let phase = k * lh * lp * 2 + lh * (b.j() - k) + mid.j(p) * lp;
    let x = Complex64::new((b.j() - k).to_f64().unwrap(), 0.0);
    let d = kernel_denominator(p, x, &b.orbit().rep());
    if d.norm() < tol {
        return Err(Error::GapDivergence(b.to_string()));
    }
    let w3 = w3_smatrix_entry(p, &under, &b.orbit().rep());
    Ok(SKernelEntry::build(w3, phase, Some(d)))
}

/// Type-3 kernel at a complex charge `j'`.
pub fn type3_kernel_complex(p: &LevelParams, a: &HWLabel, lp: i64, jp: Complex64, orbit_b: &OrbitClass) -> Result<Complex64> {
    let (l, mid, under) = type3_parts(p, a)?;
    let k = p.kappa.to_f64().unwrap();
    let lh = l.to_f64().unwrap() - 0.5;
    let lpf = lp as f64;
    let x = jp - k;
    let phase = x * lh + 2.0 * k * lh * lpf + mid.j(p).to_f64().unwrap() * lpf;
    let w3 = w3_smatrix_entry(p, &under, &orbit_b.rep());
    Ok(w3 * (Complex64::new(0.0, -2.0 * PI) * phase).exp() / kernel_denominator(p, x, &orbit_b.rep()))
}

/// The vacuum kernel.
pub fn vacuum_kernel(p: &LevelParams, b: &StandardLabel) -> Result<SKernelEntry> {
    let vac = HWLabel::new(p, HalfInt::ZERO, p.vacuum())?;
    type3_kernel(p, &vac, b)
}

type W3Cache = HashMap<(OrbitClass, RSLabel), Vec<(OrbitClass, i64)>>;
type Sl3Cache = HashMap<(AffineLevelWeight, AffineLevelWeight), BTreeMap<AffineLevelWeight, i64>>;

/// Caches W3 fusion products for one level.
pub struct FusionEngine {
    p: LevelParams,
    orbits: Vec<OrbitClass>,
    w3: RefCell<W3Cache>,
    sl3: RefCell<Sl3Cache>,
}

impl FusionEngine {
    pub fn new(p: &LevelParams) -> Self {
        FusionEngine {
            p: *p,
            orbits: enumerate_infwts(p),
            w3: RefCell::new(HashMap::new()),
            sl3: RefCell::new(HashMap::new()),
        }
    }

    pub fn params(&self) -> &LevelParams {
        &self.p
    }

    /// Nonzero `N_{[a], b}^{[c]}` over all `c`; `b` may lie on an alcove wall.
    fn w3_products(&self, a: &OrbitClass, b: &RSLabel) -> Vec<(OrbitClass, i64)> {
        let key = (*a, *b);
        if let Some(v) = self.w3.borrow().get(&key) {
            return v.clone();
        }
        let out: Vec<_> = self
            .orbits
            .iter()
            .filter_map(|c| {
                let n = w3_fusion_extended(&self.p, a, b, c).expect("shifted labels stay on or inside the alcove");
                (n != 0).then_some((*c, n))
            })
            .collect();
        self.w3.borrow_mut().insert(key, out.clone());
        out
    }

    fn sl3_products(&self, r: [i64; 3], rp: [i64; 3]) -> BTreeMap<AffineLevelWeight, i64> {
        let key = (AffineLevelWeight(r), AffineLevelWeight(rp));
        if let Some(v) = self.sl3.borrow().get(&key) {
            return v.clone();
        }
        let out = kac_walton_product(self.p.u - 3, &key.0, &key.1).expect("integrable weights");
        self.sl3.borrow_mut().insert(key, out.clone());
        out
    }

    /// Closed-form product of two standard labels.
    pub fn fuse_standard(&self, a: &StandardLabel, b: &StandardLabel) -> FormalSum {
        let p = &self.p;
        let k = p.kappa;
        let (j, l) = (a.j() + b.j(), a.ell() + b.ell());
        let bp = b.orbit().rep();
        let mut out = FormalSum::new();
        let mut block = |lab: &RSLabel, shift: Q, flow: i64| {
            for (c, n) in self.w3_products(&a.orbit(), lab) {
                out.add_term(StandardLabel::new(l + HalfInt::int(flow), j + shift, c), n);
            }
        };
        block(&bp, -k * 4, 2);
        block(&bp, k * 2, -1);
        for i in 0..3 {
            let (x, y) = (i, (i + 1) % 3);
            let mut down = bp.s;
            down[x] -= 1;
            down[y] += 1;
            block(&RSLabel::new(bp.r, down), -k * 2, 1);
            let mut up = bp.s;
            up[x] += 1;
            up[y] -= 1;
            block(&RSLabel::new(bp.r, up), Q::from(0), 0);
        }
        out
    }

    /// Type-3 highest-weight times standard, closed form.
    pub fn fuse_type3_standard(&self, a: &HWLabel, b: &StandardLabel) -> Result<FormalSum> {
        let (l, mid, under) = type3_parts(&self.p, a)?;
        let lh = HalfInt::from_q(l).expect("flows are half-integral");
        let mut out = FormalSum::new();
        for (c, n) in self.w3_products(&OrbitClass::of(&under), &b.orbit().rep()) {
            out.add_term(StandardLabel::new(lh + b.ell(), mid.j(&self.p) + b.j(), c), n);
        }
        Ok(out)
    }

    /// Type-3 times type-3, through sl3 level `u-3` fusion on the `r` labels.
    pub fn fuse_type3_type3(&self, a: &HWLabel, b: &HWLabel) -> Result<FormalSum> {
        let (la, ma) = a.type3_middle(&self.p).ok_or(Error::NotType3(a.lam()))?;
        let (lb, mb) = b.type3_middle(&self.p).ok_or(Error::NotType3(b.lam()))?;
        let mut out = FormalSum::new();
        for (r, n) in self.sl3_products(ma.r, mb.r) {
            let lab = RSLabel::new(r.0, [self.p.v - 2, -1, 0]);
            out.add_term(HWLabel::new(&self.p, la + lb, lab)?, n);
        }
        Ok(out)
    }

    fn stabilised(&self, sum: FormalSum, limit: HalfInt, depth: i64) -> Result<FormalSum> {
        let window = HalfInt::int(3 * self.p.v);
        let tail = sum.filter(|l| l.ell() <= limit && l.ell() > limit - window);
        if !tail.is_empty() {
            return Err(Error::NotStabilised(depth));
        }
        Ok(sum.filter(|l| l.ell() <= limit))
    }

    /// Highest-weight times standard via the truncated resolution of `a`.
    pub fn fuse_hw_standard(&self, a: &HWLabel, b: &StandardLabel, depth: i64) -> Result<FormalSum> {
        let mut total = FormalSum::new();
        for (lab, c) in resolution(&self.p, a, depth).iter() {
            let Label::Std(r) = lab else { unreachable!("resolutions contain standard labels") };
            total.add_scaled(&self.fuse_standard(r, b), *c);
        }
        let limit = a.ell() + b.ell() + HalfInt::int(depth - 1);
        self.stabilised(total, limit, depth)
    }

    /// Product of a highest-weight label with any label, by resolution and telescoping.
    ///
    /// A standard `b` gives the answer in standard labels. A highest-weight `b`
    /// gives it in simple classes, with every gap standard split into its two
    /// highest-weight factors.
    pub fn fuse_general(&self, a: &HWLabel, b: &Label, depth: i64) -> Result<FormalSum> {
        match b {
            Label::Std(s) => self.fuse_hw_standard(a, s, depth),
            Label::Hw(h) => {
                let mut total = FormalSum::new();
                for (lab, c) in resolution(&self.p, h, depth).iter() {
                    let Label::Std(r) = lab else { unreachable!("resolutions contain standard labels") };
                    total.add_scaled(&self.fuse_hw_standard(a, r, depth)?, *c);
                }
                let limit = a.ell() + h.ell() + HalfInt::int(depth - 1);
                self.stabilised(total.hw_view(&self.p), limit, depth)
            }
        }
    }

    /// Dispatches to the closed forms where they exist, else to [`FusionEngine::fuse_general`].
    pub fn fuse(&self, a: &Label, b: &Label, depth: i64) -> Result<FormalSum> {
        let p = &self.p;
        let t3 = |h: &HWLabel| orbit_type(p, &h.lam()) == 3;
        match (a, b) {
            (Label::Std(x), Label::Std(y)) => Ok(self.fuse_standard(x, y)),
            (Label::Hw(x), Label::Std(y)) | (Label::Std(y), Label::Hw(x)) if t3(x) => self.fuse_type3_standard(x, y),
            (Label::Hw(x), Label::Hw(y)) if t3(x) && t3(y) => self.fuse_type3_type3(x, y),
            (Label::Hw(x), other) | (other, Label::Hw(x)) => self.fuse_general(x, other, depth),
        }
    }
}

pub fn fuse_standard(p: &LevelParams, a: &StandardLabel, b: &StandardLabel) -> FormalSum {
    FusionEngine::new(p).fuse_standard(a, b)
}

pub fn fuse_type3_standard(p: &LevelParams, a: &HWLabel, b: &StandardLabel) -> Result<FormalSum> {
    FusionEngine::new(p).fuse_type3_standard(a, b)
}

pub fn fuse_type3_type3(p: &LevelParams, a: &HWLabel, b: &HWLabel) -> Result<FormalSum> {
    FusionEngine::new(p).fuse_type3_type3(a, b)
}

pub fn fuse_general(p: &LevelParams, a: &HWLabel, b: &Label, depth: i64) -> Result<FormalSum> {
    FusionEngine::new(p).fuse_general(a, b, depth)
}

/// Kernel ingredients `W(mu) exp(-2 pi i (A m + B x)) / D^e` of one input.
struct KernelShape {
    a: Q,
    b: Q,
    w3_label: RSLabel,
    has_denominator: bool,
}

fn kernel_shape(p: &LevelParams, l: &Label) -> Result<KernelShape> {
    let k = p.kappa;
    match l {
        Label::Std(s) => {
            let ell = s.ell().to_q();
            Ok(KernelShape { a: k * ell * 2 + s.j() - k, b: ell, w3_label: s.orbit().rep(), has_denominator: false })
        }
        Label::Hw(h) => {
            let (ell, mid, under) = type3_parts(p, h)?;
            let lh = ell - Q::new(1, 2);
            Ok(KernelShape { a: k * lh * 2 + mid.j(p), b: lh, w3_label: under, has_denominator: true })
        }
    }
}

/// Fusion coefficient of `candidate` in `a x b`, computed from the standard Verlinde formula.
///
/// The charge sum gives an exact delta condition; the charge integral is the
/// Fourier coefficient of the trigonometric polynomial left after dividing by
/// the vacuum kernel. At most one input may be highest-weight (type 3).
pub fn verlinde_oracle(p: &LevelParams, a: &Label, b: &Label, candidate: &StandardLabel) -> Result<i64> {
    let sa = kernel_shape(p, a)?;
    let sb = kernel_shape(p, b)?;
    if sa.has_denominator && sb.has_denominator {
        return Err(Error::Unsupported("oracle takes at most one highest-weight input".into()));
    }
    let k = p.kappa;
    let sc = kernel_shape(p, &Label::Std(*candidate))?;
    let (av, bv) = (-k, Q::new(-1, 2));
    if !is_integer(frac(sa.a + sb.a - sc.a - av)) {
        return Ok(0);
    }
    let beta = sa.b + sb.b - sc.b - bv;
    let power = 1 - sa.has_denominator as i64 - sb.has_denominator as i64;
    let two_beta = beta * 2;
    if !two_beta.is_integer() {
        return Ok(0);
    }
    let n = two_beta.to_integer();
    let vac = p.w3_vacuum();
    let mut total = Complex64::new(0.0, 0.0);
    for mu in enumerate_infwts(p) {
        let m = mu.rep();
        let fourier = match (power, n) {
            (0, 0) => Complex64::new(1.0, 0.0),
            (0, _) => continue,
            (_, 3) | (_, -3) => Complex64::new(1.0, 0.0),
            (_, 1) | (_, -1) => -(0..3).map(|i| e(m.sigma_pow(i).j_tw(p) * n)).sum::<Complex64>(),
            _ => continue,
        };
        let w = w3_smatrix_entry(p, &sa.w3_label, &m) * w3_smatrix_entry(p, &sb.w3_label, &m)
            * w3_smatrix_entry(p, &sc.w3_label, &m).conj()
            / w3_smatrix_entry(p, &vac, &m);
        total += w * fourier;
    }
    let rounded = total.re.round();
    let residual = (total - rounded).norm();
    if residual > 1e-6 {
        return Err(Error::OracleFailure { residual });
    }
    Ok(rounded as i64)
}

/// The two order-3 simple currents with their `(j, delta)`; empty when `u = 3`.
pub fn simple_currents(p: &LevelParams) -> Result<Vec<(HWLabel, Q, Q)>> {
    if p.u == 3 {
        return Ok(Vec::new());
    }
    let n = p.u - 3;
    [[0, n, 0], [0, 0, n]]
        .into_iter()
        .map(|r| {
            let lam = RSLabel::new(r, [p.v - 2, -1, 0]);
            let d = crate::weights::hw_data(p, &lam)?;
            Ok((HWLabel::new(p, HalfInt::ZERO, lam)?, d.j, d.delta))
        })
        .collect()
}

/// All type-3 labels at flow zero in middle form `[r; v-2, -1, 0]`.
pub fn type3_labels(p: &LevelParams) -> Vec<HWLabel> {
    crate::weights::integrable_weights(p.u - 3)
        .into_iter()
        .map(|r| HWLabel::new(p, HalfInt::ZERO, RSLabel::new(r, [p.v - 2, -1, 0])).expect("middle labels are valid"))
        .collect()
}

/// Type-3 labels whose product with every type-3 label is a single unit term, vacuum excluded.
pub fn detect_simple_currents(p: &LevelParams) -> Result<Vec<HWLabel>> {
    let eng = FusionEngine::new(p);
    let all = type3_labels(p);
    let vac = HWLabel::new(p, HalfInt::ZERO, p.vacuum())?;
    let mut out = Vec::new();
    for a in &all {
        if *a == vac {
            continue;
        }
        let mut invertible = true;
        for b in &all {
            let prod = eng.fuse_type3_type3(a, b)?;
            if prod.len() != 1 || prod.iter().next().map(|(_, c)| *c) != Some(1) {
                invertible = false;
                break;
            }
        }
        if invertible {
            out.push(*a);
        }
    }
    Ok(out)
}

/// Compares the type-3 product table, computed through resolutions, with sl3 level `u-3` fusion.
pub fn subring_iso_check(p: &LevelParams, depth: i64) -> Result<bool> {
    let eng = FusionEngine::new(p);
    let all = type3_labels(p);
    for a in &all {
        for b in &all {
            let got = eng.fuse_general(a, &Label::Hw(*b), depth)?;
            let (_, ma) = a.type3_middle(p).expect("type 3");
            let (_, mb) = b.type3_middle(p).expect("type 3");
            let mut want = FormalSum::new();
            for (r, n) in eng.sl3_products(ma.r, mb.r) {
                let lab = RSLabel::new(r.0, [p.v - 2, -1, 0]);
                want.add_term(HWLabel::new(p, HalfInt::ZERO, lab)?, n);
            }
            if got != want || eng.fuse_type3_type3(a, b)? != want {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
