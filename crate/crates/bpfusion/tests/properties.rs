use bpfusion::labels::{resolution, FormalSum, HWLabel, HalfInt, Label, StandardLabel};
use bpfusion::parse::parse_label;
use bpfusion::verlinde::{type3_labels, verlinde_oracle, FusionEngine};
use bpfusion::weights::{enumerate_infwts, enumerate_surv, level_params, LevelParams};
use bpfusion::Q;
use proptest::prelude::*;

const LEVELS: [(i64, i64); 7] = [(4, 3), (5, 3), (3, 4), (3, 5), (4, 5), (5, 4), (7, 3)];

fn level() -> impl Strategy<Value = LevelParams> {
    prop::sample::select(LEVELS.to_vec()).prop_map(|(u, v)| level_params(u, v).unwrap())
}

fn charge() -> impl Strategy<Value = Q> {
    (0i64..97, 1i64..13).prop_map(|(n, d)| Q::new(n, 97 * d))
}

/// A standard label at the given level, from raw random choices.
fn standard(p: &LevelParams, pick: usize, twice: i64, j: Q) -> StandardLabel {
    let o = enumerate_infwts(p);
    StandardLabel::new(HalfInt::from_twice(twice), j, o[pick % o.len()])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn standard_fusion_commutes(p in level(), x in 0usize..20, y in 0usize..20, la in -4i64..4, lb in -4i64..4, ja in charge(), jb in charge()) {
        let eng = FusionEngine::new(&p);
        let a = standard(&p, x, 2 * la, ja);
        let b = standard(&p, y, 2 * lb, jb);
        prop_assert_eq!(eng.fuse_standard(&a, &b), eng.fuse_standard(&b, &a));
    }

    #[test]
    fn fusion_is_flow_equivariant(p in level(), x in 0usize..20, y in 0usize..20, m in -5i64..5, ja in charge(), jb in charge()) {
        let eng = FusionEngine::new(&p);
        let a = standard(&p, x, 0, ja);
        let b = standard(&p, y, 2, jb);
        let shift = HalfInt::int(m);
        prop_assert_eq!(eng.fuse_standard(&a.flow(shift), &b), eng.fuse_standard(&a, &b).flow(shift));
    }

    #[test]
    fn standard_fusion_is_nonnegative(p in level(), x in 0usize..20, y in 0usize..20, ja in charge(), jb in charge()) {
        let eng = FusionEngine::new(&p);
        let f = eng.fuse_standard(&standard(&p, x, 0, ja), &standard(&p, y, 0, jb));
        prop_assert!(f.all_nonnegative() && !f.is_empty());
    }

    #[test]
    fn oracle_reproduces_random_products(p in level(), x in 0usize..20, y in 0usize..20, ja in charge(), jb in charge(), dl in -3i64..=3, pick in 0usize..64) {
        let eng = FusionEngine::new(&p);
        let a = standard(&p, x, 2, ja);
        let b = standard(&p, y, -2, jb);
        let closed = eng.fuse_standard(&a, &b);
        // Probe one term of the product and one nearby candidate.
        let terms: Vec<_> = closed.iter().collect();
        let (Label::Std(hit), want) = terms[pick % terms.len()] else { unreachable!() };
        prop_assert_eq!(verlinde_oracle(&p, &a.into(), &b.into(), hit).unwrap(), *want);
        let near = StandardLabel::new(hit.ell() + HalfInt::int(dl), hit.j() + p.kappa, hit.orbit());
        prop_assert_eq!(verlinde_oracle(&p, &a.into(), &b.into(), &near).unwrap(), closed.coeff(&Label::Std(near)));
    }

    #[test]
    fn resolutions_telescope(p in level(), pick in 0usize..200, twice in -6i64..6, depth in 1i64..30) {
        let all = enumerate_surv(&p);
        let h = HWLabel::new(&p, HalfInt::from_twice(twice), all[pick % all.len()]).unwrap();
        let view = resolution(&p, &h, depth).hw_view(&p);
        let exact = view.filter(|l| l.ell() <= h.ell() + HalfInt::int(depth));
        prop_assert_eq!(exact, FormalSum::single(h));
    }

    #[test]
    fn general_route_matches_type3_closed_form(p in level(), pick in 0usize..20, y in 0usize..20, jb in charge(), lb in -3i64..3) {
        let eng = FusionEngine::new(&p);
        let ts = type3_labels(&p);
        let a = ts[pick % ts.len()];
        let b = standard(&p, y, 2 * lb, jb);
        let general = eng.fuse_general(&a, &Label::Std(b), p.default_depth()).unwrap();
        prop_assert_eq!(general, eng.fuse_type3_standard(&a, &b).unwrap());
    }

    #[test]
    fn labels_round_trip(p in level(), pick in 0usize..200, twice in -9i64..9, j in charge()) {
        let all = enumerate_surv(&p);
        let h = Label::Hw(HWLabel::new(&p, HalfInt::from_twice(twice), all[pick % all.len()]).unwrap());
        prop_assert_eq!(parse_label(&p, &h.to_string()).unwrap(), h);
        let s = Label::Std(standard(&p, pick, twice, j));
        prop_assert_eq!(parse_label(&p, &s.to_string()).unwrap(), s);
    }
}
