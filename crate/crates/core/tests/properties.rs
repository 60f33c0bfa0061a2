use proptest::prelude::*;

use pencils::bounds;
use pencils::gf::{Embedding, FieldCtx};
use pencils::incidence;
use pencils::linsys::{self, LinearSystem, VerifyMode};
use pencils::mpoly::{det_linear_matrix, lincomb, monomial_count, BiForm};
use pencils::projspace::{enum_points, point_count};
use pencils::smoothness::Oracle;
use pencils::{Fe, HomForm};

const ORDERS: [u64; 10] = [2, 3, 4, 5, 7, 8, 9, 11, 25, 27];

fn field(q: u64) -> FieldCtx {
    FieldCtx::with_order(q).unwrap()
}

fn elems(ctx: &FieldCtx, raw: &[u32]) -> Vec<Fe> {
    raw.iter().map(|&c| ctx.elem(c % ctx.q()).unwrap()).collect()
}

fn form(ctx: &FieldCtx, nvars: usize, d: u32, raw: &[u32]) -> HomForm {
    let len = monomial_count(nvars, d) as usize;
    HomForm::from_coeff_vector(ctx, nvars, d, &elems(ctx, &raw[..len])).unwrap()
}

fn det_numeric(ctx: &FieldCtx, m: &[Vec<Fe>]) -> Fe {
    let k = m.len();
    if k == 1 {
        return m[0][0];
    }
    let mut acc = Fe::ZERO;
    for j in 0..k {
        let minor: Vec<Vec<Fe>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
            .collect();
        let term = ctx.mul(m[0][j], det_numeric(ctx, &minor));
        acc = if j % 2 == 0 { ctx.add(acc, term) } else { ctx.sub(acc, term) };
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn field_axioms(q in prop::sample::select(ORDERS.to_vec()), raw in prop::collection::vec(any::<u32>(), 3)) {
        let ctx = field(q);
        let v = elems(&ctx, &raw);
        let (a, b, c) = (v[0], v[1], v[2]);
        prop_assert_eq!(ctx.mul(a, ctx.add(b, c)), ctx.add(ctx.mul(a, b), ctx.mul(a, c)));
        prop_assert_eq!(ctx.mul(ctx.mul(a, b), c), ctx.mul(a, ctx.mul(b, c)));
        prop_assert_eq!(ctx.add(a, ctx.neg(a)), Fe::ZERO);
        prop_assert_eq!(ctx.mul(a, b), ctx.mul_poly_basis(a, b));
        prop_assert_eq!(ctx.pow(a, q), a);
        if !a.is_zero() {
            prop_assert_eq!(ctx.mul(a, ctx.inv(a).unwrap()), Fe::ONE);
            prop_assert_eq!(ctx.inv(a).unwrap(), ctx.inv_euclid(a).unwrap());
        }
        if ctx.is_odd() {
            let sq = ctx.mul(a, a);
            prop_assert!(ctx.is_square(sq).unwrap());
        } else {
            let r = ctx.sqrt_char2(a).unwrap();
            prop_assert_eq!(ctx.mul(r, r), a);
        }
    }

    #[test]
    fn embeddings_are_homomorphisms(
        (p, a, k) in prop::sample::select(vec![(2u64, 1u32, 2u32), (2, 2, 2), (2, 1, 3), (3, 1, 2), (2, 2, 3), (5, 1, 2)]),
        raw in prop::collection::vec(any::<u32>(), 2),
    ) {
        let sub = FieldCtx::new(p, a).unwrap();
        let sup = FieldCtx::new(p, a * k).unwrap();
        let emb = Embedding::new(&sub, &sup).unwrap();
        let v = elems(&sub, &raw);
        prop_assert_eq!(emb.apply(sub.add(v[0], v[1])), sup.add(emb.apply(v[0]), emb.apply(v[1])));
        prop_assert_eq!(emb.apply(sub.mul(v[0], v[1])), sup.mul(emb.apply(v[0]), emb.apply(v[1])));
        prop_assert_eq!(emb.apply(Fe::ONE), Fe::ONE);
    }

    #[test]
    fn restriction_matches_evaluation(
        q in prop::sample::select(ORDERS.to_vec()),
        nvars in 2usize..5,
        d in 1u32..5,
        raw in prop::collection::vec(any::<u32>(), 70),
        pts in prop::collection::vec(any::<u32>(), 10),
    ) {
        let ctx = field(q);
        let f = form(&ctx, nvars, d, &raw);
        let v = elems(&ctx, &pts);
        let (a, b) = (&v[..nvars], &v[nvars..2 * nvars]);
        let (s, t) = (v[8], v[9]);
        match f.restrict_to_line(a, b) {
            Ok(r) => {
                let x: Vec<Fe> = (0..nvars).map(|i| ctx.add(ctx.mul(s, a[i]), ctx.mul(t, b[i]))).collect();
                prop_assert_eq!(r.eval(s, t), f.eval(&x).unwrap());
                prop_assert_eq!(r.degree(), d);
            }
            Err(e) => prop_assert_eq!(e, pencils::Error::EqualPoints),
        }
    }

    #[test]
    fn print_parse_round_trip(
        q in prop::sample::select(ORDERS.to_vec()),
        nvars in 1usize..5,
        d in 1u32..5,
        raw in prop::collection::vec(any::<u32>(), 70),
    ) {
        let ctx = field(q);
        let f = form(&ctx, nvars, d, &raw);
        prop_assume!(!f.is_zero());
        prop_assert_eq!(HomForm::parse(&ctx, nvars, &f.to_string()).unwrap(), f);
    }

    #[test]
    fn euler_and_partial_linearity(
        q in prop::sample::select(ORDERS.to_vec()),
        nvars in 1usize..5,
        d in 1u32..5,
        raw in prop::collection::vec(any::<u32>(), 140),
    ) {
        let ctx = field(q);
        let f = form(&ctx, nvars, d, &raw[..70]);
        let g = form(&ctx, nvars, d, &raw[70..]);
        prop_assert!(f.euler_check());
        for i in 0..nvars {
            let lhs = f.add(&g).unwrap().partial(i).unwrap();
            let rhs = f.partial(i).unwrap().add(&g.partial(i).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn symbolic_det_matches_numeric(
        q in prop::sample::select(ORDERS.to_vec()),
        k in 1usize..5,
        raw in prop::collection::vec(any::<u32>(), 34),
    ) {
        let ctx = field(q);
        let v = elems(&ctx, &raw);
        let m: Vec<Vec<BiForm>> = (0..k)
            .map(|i| (0..k).map(|j| BiForm::linear(&ctx, v[2 * (i * k + j)], v[2 * (i * k + j) + 1])).collect())
            .collect();
        let det = det_linear_matrix(&m).unwrap();
        let (s, t) = (v[32], v[33]);
        let numeric: Vec<Vec<Fe>> = m.iter().map(|row| row.iter().map(|e| e.eval(s, t)).collect()).collect();
        prop_assert_eq!(det.eval(s, t), det_numeric(&ctx, &numeric));
    }

    #[test]
    fn incidence_identities_hold(
        q in prop::sample::select(vec![2u64, 3, 4, 5, 7]),
        d in 1u32..6,
        raw in prop::collection::vec(any::<u32>(), 21),
    ) {
        let ctx = field(q);
        let c = form(&ctx, 3, d, &raw);
        prop_assume!(!c.is_zero());
        let p = incidence::profile(&c).unwrap();
        prop_assert!(p.check_identities().is_ok());
        prop_assert_eq!(p.line_count(), q * q + q + 1);
        let line = incidence::find_avoiding_line(&c).unwrap();
        prop_assert_eq!(line.is_some(), p.t0() > 0);
        if let Some(l) = line {
            prop_assert_eq!(incidence::line_multiplicity(&c, &l), 0);
        }
    }

    #[test]
    fn threshold_predicate_is_monotone(n in 1u32..4, d in 2u32..4, q1 in 1u64..3_000_000, gap in 0u64..1000) {
        let t = bounds::theorem_threshold(n, d);
        if t.q_passes(q1) {
            prop_assert!(t.q_passes(q1 + gap));
        }
    }

    #[test]
    fn verdicts_invariant_under_basis_change(
        q in prop::sample::select(vec![3u64, 4, 5]),
        raw in prop::collection::vec(any::<u32>(), 16),
    ) {
        let ctx = field(q);
        let f0 = form(&ctx, 3, 2, &raw[..6]);
        let f1 = form(&ctx, 3, 2, &raw[6..12]);
        let Ok(sys) = LinearSystem::new(vec![f0.clone(), f1.clone()]) else { return Ok(()) };
        let m = elems(&ctx, &raw[12..]);
        let det = ctx.sub(ctx.mul(m[0], m[3]), ctx.mul(m[1], m[2]));
        prop_assume!(!det.is_zero());
        let g0 = lincomb(&[m[0], m[1]], &[f0.clone(), f1.clone()]).unwrap();
        let g1 = lincomb(&[m[2], m[3]], &[f0, f1]).unwrap();
        let other = LinearSystem::new(vec![g0, g1]).unwrap();
        let a = linsys::verify_all_smooth(&sys, Oracle::Auto, VerifyMode::Exhaustive).unwrap();
        let b = linsys::verify_all_smooth(&other, Oracle::Auto, VerifyMode::Exhaustive).unwrap();
        prop_assert_eq!(a.smooth_count, b.smooth_count);
        prop_assert_eq!(a.status, b.status);
        prop_assert_eq!(sys.canonical_span(), other.canonical_span());
    }
}

#[test]
fn members_are_distinct_classes() {
    for (q, r) in [(2u64, 3usize), (3, 2), (4, 1)] {
        let ctx = field(q);
        let gens: Vec<HomForm> = ["x^2", "y^2", "z^2", "x*y"][..=r]
            .iter()
            .map(|t| HomForm::parse(&ctx, 3, t).unwrap())
            .collect();
        let sys = LinearSystem::new(gens).unwrap();
        let members: Vec<HomForm> = sys.members().map(|(_, f)| f.normalized()).collect();
        assert_eq!(members.len() as u64, point_count(q, r));
        let distinct: std::collections::HashSet<String> = members.iter().map(|f| f.to_string()).collect();
        assert_eq!(distinct.len(), members.len());
    }
}

#[test]
fn points_enumerate_each_class_once() {
    for (q, n) in [(2u64, 3usize), (3, 2), (4, 2), (5, 1)] {
        let ctx = field(q);
        let pts: Vec<_> = enum_points(&ctx, n).collect();
        assert_eq!(pts.len() as u64, point_count(q, n));
        let set: std::collections::HashSet<_> = pts.iter().map(|p| p.coords().to_vec()).collect();
        assert_eq!(set.len(), pts.len());
    }
}
