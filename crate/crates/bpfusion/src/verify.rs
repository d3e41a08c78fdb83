//! Invariant suites, runnable from tests and from the command line.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::labels::{gap_charges, resolution, FormalSum, HWLabel, HalfInt, Label, StandardLabel};
use crate::sl3::FiniteWeight;
use crate::verlinde::{type3_kernel_tol, type3_labels, verlinde_oracle, FusionEngine};
use crate::w3::{
    self, sigma_phase_check, sum_fund_modules_residual, sum_of_complete_residual, tensor_sum_residual,
    w3_fusion, w3_smatrix_entry, W3SMatrix,
};
use crate::weights::{enumerate_infwts, enumerate_surv, level_params, LevelParams, RSLabel};
use crate::Q;

/// Named groups of checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    W3Unitarity,
    W3Symmetry,
    W3Conjugation,
    W3Phases,
    W3Boundary,
    W3Verlinde,
    W3Identities,
    BpOracle,
    Telescoping,
    Gaps,
    SimpleCurrents,
    Subring,
    All,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::W3Unitarity,
        Suite::W3Symmetry,
        Suite::W3Conjugation,
        Suite::W3Phases,
        Suite::W3Boundary,
        Suite::W3Verlinde,
        Suite::W3Identities,
        Suite::BpOracle,
        Suite::Telescoping,
        Suite::Gaps,
        Suite::SimpleCurrents,
        Suite::Subring,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::W3Unitarity => "w3-unitarity",
            Suite::W3Symmetry => "w3-symmetry",
            Suite::W3Conjugation => "w3-conjugation",
            Suite::W3Phases => "w3-phases",
            Suite::W3Boundary => "w3-boundary",
            Suite::W3Verlinde => "w3-verlinde",
            Suite::W3Identities => "w3-identities",
            Suite::BpOracle => "bp-oracle",
            Suite::Telescoping => "telescoping",
            Suite::Gaps => "gaps",
            Suite::SimpleCurrents => "simple-currents",
            Suite::Subring => "subring",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .iter()
            .chain([Suite::All].iter())
            .find(|x| x.name() == s)
            .copied()
            .ok_or_else(|| Error::Parse { input: s.into(), reason: "unknown suite".into() })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Outcome of one suite.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: usize,
    pub max_residual: f64,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        SuiteReport { suite, checks: 0, max_residual: 0.0, failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn residual(&mut self, what: impl FnOnce() -> String, r: f64, tol: f64) {
        self.checks += 1;
        self.max_residual = self.max_residual.max(r);
        if r.is_nan() || r > tol {
            self.failures.push(format!("{}: residual {r:e}", what()));
        }
    }

    fn truth(&mut self, what: impl FnOnce() -> String, ok: bool) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn fail(&mut self, what: String) {
        self.checks += 1;
        self.failures.push(what);
    }
}

/// Knobs shared by all suites.
#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub tol: f64,
    pub depth: Option<i64>,
    pub seed: u64,
    pub samples: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { tol: w3::TOL, depth: None, seed: 0x5eed, samples: 100 }
    }
}

/// Runs one suite (or all of them) at a single level.
pub fn run_suite(p: &LevelParams, suite: Suite, opts: &VerifyOptions) -> Vec<SuiteReport> {
    if suite == Suite::All {
        return Suite::ALL.iter().flat_map(|s| run_suite(p, *s, opts)).collect();
    }
    let mut rep = SuiteReport::new(suite);
    let tol = opts.tol;
    match suite {
        Suite::W3Unitarity => {
            let s = W3SMatrix::new(p);
            rep.residual(|| "S S^dagger = 1".into(), s.unitarity_residual(), tol);
        }
        Suite::W3Symmetry => {
            let s = W3SMatrix::new(p);
            rep.residual(|| "S = S^T".into(), s.symmetry_residual(), tol);
        }
        Suite::W3Conjugation => {
            let s = W3SMatrix::new(p);
            rep.residual(|| "S^2 = C".into(), s.conjugation_residual(), tol);
        }
        Suite::W3Phases => {
            for a in enumerate_infwts(p) {
                for b in enumerate_infwts(p) {
                    for bm in b.members() {
                        rep.truth(|| format!("sigma phase {a} {bm}"), sigma_phase_check(p, &a.rep(), &bm, tol));
                    }
                }
            }
        }
        Suite::W3Boundary => boundary_suite(p, &mut rep, tol),
        Suite::W3Verlinde => {
            let s = W3SMatrix::new(p);
            for a in &s.orbits {
                for b in &s.orbits {
                    for c in &s.orbits {
                        let n = s.verlinde(a, b, c);
                        let k = w3_fusion(p, a, b, c);
                        rep.residual(|| format!("N({a},{b};{c})"), (n - k as f64).norm(), 1e-6);
                    }
                }
            }
        }
        Suite::W3Identities => identity_suite(&[*p], opts, &mut rep),
        Suite::BpOracle => oracle_suite(p, &mut rep),
        Suite::Telescoping => telescoping_suite(p, opts.depth.unwrap_or(p.default_depth()), &mut rep),
        Suite::Gaps => gaps_suite(p, tol, &mut rep),
        Suite::SimpleCurrents => simple_current_suite(p, &mut rep),
        Suite::Subring => match crate::verlinde::subring_iso_check(p, opts.depth.unwrap_or(p.default_depth())) {
            Ok(ok) => rep.truth(|| "type-3 subring differs from sl3 fusion".into(), ok),
            Err(e) => rep.fail(e.to_string()),
        },
        Suite::All => unreachable!(),
    }
    vec![rep]
}

fn boundary_suite(p: &LevelParams, rep: &mut SuiteReport, tol: f64) {
    let orbits = enumerate_infwts(p);
    let mut walls = Vec::new();
    for i in 0..3 {
        for lam in enumerate_surv(p) {
            let mut s = lam.s;
            if s[i] >= 0 {
                s[i] = -1;
                s[(i + 1) % 3] += lam.s[i] + 1;
                walls.push(RSLabel::new(lam.r, s));
            }
            let mut r = lam.r;
            r[i] = -1;
            r[(i + 1) % 3] += lam.r[i] + 1;
            walls.push(RSLabel::new(r, lam.s));
        }
    }
    for a in walls {
        for b in &orbits {
            let x = w3_smatrix_entry(p, &a, &b.rep()).norm();
            rep.residual(|| format!("S[{a}, {b}] on the wall"), x, tol);
        }
    }
}

/// Admissible levels with `3 <= u, v <= 7`.
pub fn small_levels() -> Vec<LevelParams> {
    let mut out = Vec::new();
    for u in 3..=7 {
        for v in 3..=7 {
            if let Ok(p) = level_params(u, v) {
                out.push(p);
            }
        }
    }
    out
}

/// The four W3 S-matrix identities at `opts.samples` random inputs each, drawn from `levels`.
pub fn identity_suite(levels: &[LevelParams], opts: &VerifyOptions, rep: &mut SuiteReport) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let tol = opts.tol;
    let pick = |rng: &mut ChaCha8Rng| {
        let p = *levels.choose(rng).expect("at least one level");
        let o = enumerate_infwts(&p);
        let a = o.choose(rng).unwrap().members()[rng.gen_range(0..3)];
        let b = o.choose(rng).unwrap().members()[rng.gen_range(0..3)];
        (p, a, b)
    };

    let (mut n, mut tries) = (0, 0);
    while n < opts.samples && tries < 50 * opts.samples {
        tries += 1;
        let (p, a, b) = pick(&mut rng);
        match w3::ratio_weyl_character_residual(&p, &a, &b) {
            Ok(r) => {
                rep.residual(|| format!("ratio identity at ({},{}) {a} {b}", p.u, p.v), r, tol);
                n += 1;
            }
            Err(_) => continue,
        }
    }
    rep.truth(|| format!("ratio identity sampled only {n} inputs"), n >= opts.samples);

    for _ in 0..opts.samples {
        let (p, a, b) = pick(&mut rng);
        let t1 = rng.gen_range(0..=3);
        let t = FiniteWeight([t1, rng.gen_range(0..=3 - t1)]);
        match tensor_sum_residual(&p, &a, t, &b) {
            Ok(r) => rep.residual(|| format!("tensor sum at ({},{}) {a} {t:?} {b}", p.u, p.v), r, tol),
            Err(e) => rep.fail(e.to_string()),
        }
    }

    for _ in 0..opts.samples {
        let v = rng.gen_range(3..=9);
        let c = Complex64::from_polar(rng.gen_range(0.5..1.5), rng.gen_range(0.0..std::f64::consts::TAU));
        let mut roots: Vec<i64> = (0..v).collect();
        roots.shuffle(&mut rng);
        let big = [0, 1, 2].map(|i| c * Complex64::from_polar(1.0, std::f64::consts::TAU * roots[i] as f64 / v as f64));
        let x = Complex64::from_polar(rng.gen_range(0.3..0.9), rng.gen_range(0.0..std::f64::consts::TAU));
        let r = sum_of_complete_residual(v, x, big);
        rep.residual(|| format!("complete symmetric sum at v={v}"), r, tol);
    }

    let (mut n, mut tries) = (0, 0);
    while n < opts.samples && tries < 50 * opts.samples {
        tries += 1;
        let (p, _, b) = pick(&mut rng);
        let jp: f64 = rng.gen_range(0.0..1.0);
        match sum_fund_modules_residual(&p, &b, jp) {
            Ok(r) => {
                rep.residual(|| format!("fundamental sum at ({},{}) {b} j'={jp}", p.u, p.v), r, tol);
                n += 1;
            }
            Err(Error::SingularCharge) => continue,
            Err(e) => rep.fail(e.to_string()),
        }
    }
    rep.truth(|| format!("fundamental sum sampled only {n} inputs"), n >= opts.samples);
}

/// Candidate labels around a product: flows `base + [-4, 4]` and charges `j0 + n kappa` plus one off-lattice charge.
pub fn oracle_window(p: &LevelParams, base: HalfInt, j0: Q) -> Vec<StandardLabel> {
    let mut out = Vec::new();
    for o in enumerate_infwts(p) {
        for dl in -4..=4 {
            let mut charges: Vec<Q> = (-8..=8).map(|n| j0 + p.kappa * n).collect();
            charges.push(j0 + Q::new(1, 11));
            for j in charges {
                out.push(StandardLabel::new(base + HalfInt::int(dl), j, o));
            }
        }
    }
    out
}

/// Compares a closed-form sum against the oracle on the window.
pub fn compare_with_oracle(p: &LevelParams, a: &Label, b: &Label, closed: &FormalSum, rep: &mut SuiteReport) {
    let j = |l: &Label| match l {
        Label::Std(s) => s.j(),
        Label::Hw(h) => h.type3_middle(p).map(|m| m.1.j(p)).unwrap_or_default(),
    };
    rep.truth(|| format!("{a} x {b} has negative coefficients"), closed.all_nonnegative());
    for cand in oracle_window(p, a.ell() + b.ell(), j(a) + j(b)) {
        let want = closed.coeff(&Label::Std(cand));
        match verlinde_oracle(p, a, b, &cand) {
            Ok(got) => rep.truth(|| format!("{a} x {b} at {cand}: oracle {got}, closed {want}"), got == want),
            Err(e) => rep.fail(format!("{a} x {b} at {cand}: {e}")),
        }
    }
}

fn oracle_suite(p: &LevelParams, rep: &mut SuiteReport) {
    let eng = FusionEngine::new(p);
    let orbits = enumerate_infwts(p);
    for oa in &orbits {
        for ob in &orbits {
            let a = StandardLabel::new(HalfInt::int(1), Q::new(1, 7), *oa);
            let b = StandardLabel::new(HalfInt::int(-1), Q::new(3, 13), *ob);
            compare_with_oracle(p, &a.into(), &b.into(), &eng.fuse_standard(&a, &b), rep);
        }
    }
    for t in type3_labels(p) {
        let b = StandardLabel::new(HalfInt::int(2), Q::new(2, 9), orbits[0]);
        match eng.fuse_type3_standard(&t, &b) {
            Ok(closed) => compare_with_oracle(p, &t.into(), &b.into(), &closed, rep),
            Err(e) => rep.fail(e.to_string()),
        }
    }
}

fn telescoping_suite(p: &LevelParams, depth: i64, rep: &mut SuiteReport) {
    let eng = FusionEngine::new(p);
    for lam in enumerate_surv(p) {
        let Ok(h) = HWLabel::new(p, HalfInt::ZERO, lam) else { continue };
        let view = resolution(p, &h, depth).hw_view(p);
        let exact = view.filter(|l| l.ell() <= h.ell() + HalfInt::int(depth));
        rep.truth(|| format!("resolution of {h} does not telescope"), exact == FormalSum::single(h));
    }
    for t in type3_labels(p) {
        for o in enumerate_infwts(p) {
            let b = StandardLabel::new(HalfInt::int(1), Q::new(4, 17), o);
            let closed = eng.fuse_type3_standard(&t, &b);
            let general = eng.fuse_general(&t, &Label::Std(b), depth);
            match (closed, general) {
                (Ok(c), Ok(g)) => rep.truth(|| format!("{t} x {b}: {g} vs {c}"), c == g),
                (Err(e), _) | (_, Err(e)) => rep.fail(format!("{t} x {b}: {e}")),
            }
        }
    }
}

/// Charges `n / (72 u v)` with `0 <= n < 72 u v`, a grid containing every gap charge.
pub fn charge_grid(p: &LevelParams) -> Vec<Q> {
    let d = 72 * p.u * p.v;
    (0..d).map(|n| Q::new(n, d)).collect()
}

fn gaps_suite(p: &LevelParams, tol: f64, rep: &mut SuiteReport) {
    let vac = match HWLabel::new(p, HalfInt::ZERO, p.vacuum()) {
        Ok(v) => v,
        Err(e) => return rep.fail(e.to_string()),
    };
    for o in enumerate_infwts(p) {
        let gaps = gap_charges(p, &o);
        rep.truth(|| format!("{o} has {} gap charges", gaps.len()), gaps.len() == 3);
        for j in charge_grid(p) {
            let b = StandardLabel::new(HalfInt::ZERO, j, o);
            let singular = matches!(type3_kernel_tol(p, &vac, &b, tol.max(1e-9)), Err(Error::GapDivergence(_)));
            rep.truth(|| format!("{b}: singular={singular}"), singular == gaps.contains(&j));
        }
    }
}

fn simple_current_suite(p: &LevelParams, rep: &mut SuiteReport) {
    let mut run = || -> Result<()> {
        let eng = FusionEngine::new(p);
        let mut cur: Vec<_> = crate::verlinde::simple_currents(p)?;
        let mut found = crate::verlinde::detect_simple_currents(p)?;
        found.sort();
        cur.sort_by_key(|c| c.0);
        rep.truth(|| format!("detected {} currents", found.len()), found == cur.iter().map(|c| c.0).collect::<Vec<_>>());
        let vac = HWLabel::new(p, HalfInt::ZERO, p.vacuum())?;
        let n = p.u - 3;
        for (c, j, d) in &cur {
            rep.truth(|| format!("{c} charge {j}"), j.abs() == Q::new(n, 3));
            rep.truth(|| format!("{c} weight {d}"), *d == Q::new(n * (2 * p.v - 3), 6));
            let mut power = FormalSum::single(*c);
            for _ in 0..2 {
                let Some((Label::Hw(x), 1)) = power.iter().next().map(|(l, k)| (*l, *k)) else {
                    return Err(Error::Unsupported(format!("{c} is not invertible")));
                };
                power = eng.fuse_type3_type3(&x, c)?;
            }
            rep.truth(|| format!("{c} cubed is {power}"), power == FormalSum::single(vac));
        }
        Ok(())
    };
    if let Err(e) = run() {
        rep.fail(e.to_string());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes_at_34_and_43() {
        for (u, v) in [(3, 4), (4, 3)] {
            let p = level_params(u, v).unwrap();
            for r in run_suite(&p, Suite::All, &VerifyOptions::default()) {
                assert!(r.passed(), "{u},{v} {}: {:?}", r.suite, &r.failures[..r.failures.len().min(3)]);
                assert!(r.checks > 0, "{}", r.suite);
            }
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn identity_suite_catches_a_wrong_tolerance() {
        // A broken tolerance must surface as failures rather than silently pass.
        let mut rep = SuiteReport::new(Suite::W3Identities);
        let opts = VerifyOptions { tol: -1.0, samples: 5, ..Default::default() };
        identity_suite(&small_levels(), &opts, &mut rep);
        assert!(!rep.passed());
    }
}
