//! Explicit pencils of quadric surfaces in P³ all of whose F_q-members are
//! smooth, and a smooth net of conics over F_2.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{make_field, Fe, FieldCtx};
use crate::linsys::LinearSystem;
use crate::mpoly::{det_linear_matrix, BiForm, HomForm};
use crate::projspace::p1_params;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadricPencilRecipe {
    pub ctx: FieldCtx,
    pub parity: Parity,
    pub c: Fe,
    pub f0: HomForm,
    pub f1: HomForm,
}

impl QuadricPencilRecipe {
    pub fn pencil(&self) -> LinearSystem {
        LinearSystem::new(vec![self.f0.clone(), self.f1.clone()]).expect("generators are independent")
    }
}

/// Smallest-scan `c` with `c² − 2c + 5` a non-square: the first `b` with
/// `b² + 1` a non-square gives `c = 2b + 1`.
pub fn find_shift_c_odd(ctx: &FieldCtx) -> Result<Fe> {
    if !ctx.is_odd() {
        return Err(Error::EvenCharacteristic);
    }
    for b in ctx.elements() {
        let s = ctx.mul(b, b);
        if ctx.is_square(ctx.add(s, Fe::ONE))? {
            continue;
        }
        let c = ctx.add(ctx.add(b, b), Fe::ONE);
        let disc = ctx.add(ctx.sub(ctx.mul(c, c), ctx.add(c, c)), ctx.from_int(5));
        if ctx.is_square(disc)? {
            return Err(Error::Internal(format!("c = {c} fails the non-square check")));
        }
        return Ok(c);
    }
    Err(Error::Internal(format!("no b with b^2+1 a non-square in GF({})", ctx.q())))
}

fn has_root_as(ctx: &FieldCtx, c: Fe) -> bool {
    ctx.elements().any(|t| ctx.add(ctx.add(ctx.mul(t, t), t), c).is_zero())
}

/// Smallest-code `c` with `t² + t + c` irreducible over F_q.
pub fn find_artin_schreier_c(ctx: &FieldCtx) -> Result<Fe> {
    if ctx.is_odd() {
        return Err(Error::OddCharacteristic);
    }
    let c = ctx
        .elements()
        .find(|&c| !has_root_as(ctx, c))
        .ok_or_else(|| Error::Internal("every t^2+t+c has a root".into()))?;
    if ctx.trace_to_prime(c) != Fe::ONE {
        return Err(Error::Internal(format!("rootless c = {c} has trace 0")));
    }
    Ok(c)
}

/// Number of `c` for which `t² + t + c` has no root.
pub fn count_artin_schreier(ctx: &FieldCtx) -> Result<u64> {
    if ctx.is_odd() {
        return Err(Error::OddCharacteristic);
    }
    Ok(ctx.elements().filter(|&c| !has_root_as(ctx, c)).count() as u64)
}

fn quadric(ctx: &FieldCtx, terms: &[(Fe, [u16; 4])]) -> HomForm {
    HomForm::from_terms(ctx, 4, 2, terms.iter().map(|(c, m)| (m.to_vec(), *c))).expect("degree 2 terms")
}

/// `f0 = x² + y² + z² + w²`, `f1 = xy + yz + zw + c·wx`.
pub fn build_odd_pencil(ctx: &FieldCtx) -> Result<QuadricPencilRecipe> {
    let c = find_shift_c_odd(ctx)?;
    let one = Fe::ONE;
    let f0 = quadric(ctx, &[(one, [2, 0, 0, 0]), (one, [0, 2, 0, 0]), (one, [0, 0, 2, 0]), (one, [0, 0, 0, 2])]);
    let f1 = quadric(ctx, &[(one, [1, 1, 0, 0]), (one, [0, 1, 1, 0]), (one, [0, 0, 1, 1]), (c, [1, 0, 0, 1])]);
    Ok(QuadricPencilRecipe {
        ctx: ctx.clone(),
        parity: Parity::Odd,
        c,
        f0,
        f1,
    })
}

/// `f0 = x² + y² + xy + yz + c·zw`, `f1 = x² + z² + yz + xw`.
pub fn build_even_pencil(ctx: &FieldCtx) -> Result<QuadricPencilRecipe> {
    let c = find_artin_schreier_c(ctx)?;
    let one = Fe::ONE;
    let f0 = quadric(
        ctx,
        &[(one, [2, 0, 0, 0]), (one, [0, 2, 0, 0]), (one, [1, 1, 0, 0]), (one, [0, 1, 1, 0]), (c, [0, 0, 1, 1])],
    );
    let f1 = quadric(ctx, &[(one, [2, 0, 0, 0]), (one, [0, 0, 2, 0]), (one, [0, 1, 1, 0]), (one, [1, 0, 0, 1])]);
    Ok(QuadricPencilRecipe {
        ctx: ctx.clone(),
        parity: Parity::Even,
        c,
        f0,
        f1,
    })
}

/// Either pencil according to the characteristic.
pub fn build_pencil(ctx: &FieldCtx) -> Result<QuadricPencilRecipe> {
    if ctx.is_odd() {
        build_odd_pencil(ctx)
    } else {
        build_even_pencil(ctx)
    }
}

/// The 4×4 matrix of linear forms in `s, t` whose determinant detects
/// singular members.
pub fn determinant_matrix(recipe: &QuadricPencilRecipe) -> Vec<Vec<BiForm>> {
    let ctx = &recipe.ctx;
    let lin = |a: Fe, b: Fe| BiForm::linear(ctx, a, b);
    let (z, one, c) = (Fe::ZERO, Fe::ONE, recipe.c);
    let zero = lin(z, z);
    let s = lin(one, z);
    let t = lin(z, one);
    match recipe.parity {
        Parity::Odd => {
            let two_s = lin(ctx.from_int(2), z);
            let ct = lin(z, c);
            vec![
                vec![two_s.clone(), t.clone(), zero.clone(), ct.clone()],
                vec![t.clone(), two_s.clone(), t.clone(), zero.clone()],
                vec![zero.clone(), t.clone(), two_s.clone(), t.clone()],
                vec![ct, zero, t, two_s],
            ]
        }
        Parity::Even => {
            let s_t = lin(one, one);
            let cs = lin(c, z);
            vec![
                vec![zero.clone(), s.clone(), zero.clone(), t.clone()],
                vec![s.clone(), zero.clone(), s_t.clone(), zero.clone()],
                vec![zero.clone(), s_t, zero.clone(), cs.clone()],
                vec![t, zero.clone(), cs, zero],
            ]
        }
    }
}

/// The claimed factorization of the determinant, expanded.
pub fn expected_determinant(recipe: &QuadricPencilRecipe) -> BiForm {
    let ctx = &recipe.ctx;
    let c = recipe.c;
    match recipe.parity {
        Parity::Odd => {
            // (1−c)t² ± 2(c+1)st − 4s²
            let lead = ctx.sub(Fe::ONE, c);
            let mid = ctx.mul(ctx.from_int(2), ctx.add(c, Fe::ONE));
            let four = ctx.neg(ctx.from_int(4));
            let a = BiForm::new(ctx, vec![four, mid, lead]);
            let b = BiForm::new(ctx, vec![four, ctx.neg(mid), lead]);
            a.mul(&b)
        }
        Parity::Even => {
            // (t² + st + c s²)²
            let f = BiForm::new(ctx, vec![c, Fe::ONE, Fe::ONE]);
            f.mul(&f)
        }
    }
}

/// Each quadratic factor of the expected determinant, for root checks.
pub fn determinant_factors(recipe: &QuadricPencilRecipe) -> Vec<BiForm> {
    let ctx = &recipe.ctx;
    let c = recipe.c;
    match recipe.parity {
        Parity::Odd => {
            let lead = ctx.sub(Fe::ONE, c);
            let mid = ctx.mul(ctx.from_int(2), ctx.add(c, Fe::ONE));
            let four = ctx.neg(ctx.from_int(4));
            vec![
                BiForm::new(ctx, vec![four, mid, lead]),
                BiForm::new(ctx, vec![four, ctx.neg(mid), lead]),
            ]
        }
        Parity::Even => vec![BiForm::new(ctx, vec![c, Fe::ONE, Fe::ONE])],
    }
}

/// Computes the determinant and compares it coefficientwise with the
/// expanded factorization.
pub fn verify_determinant_factorization(recipe: &QuadricPencilRecipe) -> Result<bool> {
    let det = det_linear_matrix(&determinant_matrix(recipe))?;
    Ok(det == expected_determinant(recipe))
}

/// True when the binary form vanishes nowhere on P¹(F_q).
pub fn nowhere_zero_on_p1(f: &BiForm, ctx: &FieldCtx) -> bool {
    p1_params(ctx).all(|(s, t)| !f.eval(s, t).is_zero())
}

/// The net `x² + y² + xz, xy + xz + z², x² + yz` over F_2.
pub fn example_f2_conic_net() -> LinearSystem {
    let g2 = make_field(2, 1).expect("GF(2)");
    let gens = ["x^2+y^2+x*z", "x*y+x*z+z^2", "x^2+y*z"]
        .iter()
        .map(|t| HomForm::parse(&g2, 3, t).expect("fixed text"))
        .collect();
    LinearSystem::new(gens).expect("independent")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::prime_power;
    use crate::linsys::{verify_all_smooth, VerifyMode};
    use crate::smoothness::{is_smooth, Oracle};

    #[test]
    fn odd_shift() {
        let g3 = make_field(3, 1).unwrap();
        assert_eq!(find_shift_c_odd(&g3).unwrap(), Fe::ZERO);
        let g5 = make_field(5, 1).unwrap();
        let c = find_shift_c_odd(&g5).unwrap();
        let disc = g5.add(g5.sub(g5.mul(c, c), g5.add(c, c)), g5.from_int(5));
        assert!(!g5.is_square(disc).unwrap());
        for q in (3..=199).filter(|&q| q % 2 == 1 && prime_power(q).is_some()) {
            find_shift_c_odd(&FieldCtx::with_order(q).unwrap()).unwrap();
        }
        assert_eq!(find_shift_c_odd(&make_field(2, 2).unwrap()), Err(Error::EvenCharacteristic));
    }

    #[test]
    fn artin_schreier() {
        assert_eq!(find_artin_schreier_c(&make_field(2, 1).unwrap()).unwrap(), Fe::ONE);
        for r in 1..=8 {
            let ctx = make_field(2, r).unwrap();
            assert_eq!(count_artin_schreier(&ctx).unwrap(), ctx.q() as u64 / 2);
            let c = find_artin_schreier_c(&ctx).unwrap();
            assert!(ctx.elements().take_while(|&x| x != c).all(|x| has_root_as(&ctx, x)));
        }
        assert_eq!(find_artin_schreier_c(&make_field(3, 1).unwrap()), Err(Error::OddCharacteristic));
    }

    #[test]
    fn pencils_have_four_term_generators() {
        let r = build_odd_pencil(&make_field(7, 1).unwrap()).unwrap();
        assert_eq!((r.f0.num_terms(), r.f1.num_terms()), (4, 4));
        assert!(build_odd_pencil(&make_field(2, 1).unwrap()).is_err());
        assert!(build_even_pencil(&make_field(3, 1).unwrap()).is_err());
    }

    #[test]
    fn small_pencils_all_smooth() {
        for q in [2u64, 3, 4, 5, 8, 9] {
            let r = build_pencil(&FieldCtx::with_order(q).unwrap()).unwrap();
            let rep = verify_all_smooth(&r.pencil(), Oracle::Auto, VerifyMode::Exhaustive).unwrap();
            assert_eq!(rep.smooth_count, q + 1, "q={q}");
            assert!(verify_determinant_factorization(&r).unwrap(), "q={q}");
        }
    }

    #[test]
    fn even_det_over_gf2() {
        let r = build_even_pencil(&make_field(2, 1).unwrap()).unwrap();
        let det = det_linear_matrix(&determinant_matrix(&r)).unwrap();
        assert_eq!(det.to_string(), "s^4 + s^2*t^2 + t^4");
    }

    #[test]
    fn odd_factor_discriminants() {
        for q in [3u64, 5, 7, 9, 11, 25] {
            let ctx = FieldCtx::with_order(q).unwrap();
            let r = build_odd_pencil(&ctx).unwrap();
            for f in determinant_factors(&r) {
                let [a, b, cc] = [f.coeffs()[0], f.coeffs()[1], f.coeffs()[2]];
                let disc = ctx.sub(ctx.mul(b, b), ctx.mul(ctx.from_int(4), ctx.mul(a, cc)));
                let c = r.c;
                let target = ctx.mul(ctx.from_int(4), ctx.add(ctx.sub(ctx.mul(c, c), ctx.add(c, c)), ctx.from_int(5)));
                assert_eq!(disc, target);
                assert!(nowhere_zero_on_p1(&f, &ctx));
            }
        }
    }

    #[test]
    fn conic_net() {
        let net = example_f2_conic_net();
        assert_eq!(net.r(), 2);
        let rep = verify_all_smooth(&net, Oracle::Auto, VerifyMode::Exhaustive).unwrap();
        assert_eq!((rep.smooth_count, rep.total_members), (7, 7));
        for g in net.generators() {
            assert!(is_smooth(g, Oracle::Quadric).unwrap().is_smooth());
        }
    }
}
