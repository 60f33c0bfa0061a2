//! Line/curve incidence counts in P²(F_q).
//!
//! For a plane curve C of degree δ and a line L, `m_L = #(C ∩ L)(F_q)` is the
//! number of distinct F_q-points of C on L. The profile records how many
//! lines have each value of `m_L`.

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf::FieldCtx;
use crate::mpoly::HomForm;
use crate::projspace::{line_at, point_coords_at, point_count, ProjLine};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IncidenceProfile {
    pub q: u64,
    pub delta: u32,
    /// Number of F_q-points of the curve.
    #[serde(rename = "N")]
    pub n_points: u64,
    /// `t[i]` = number of lines meeting the curve in exactly i F_q-points,
    /// for i = 0..=δ, lines contained in the curve excluded.
    pub t: Vec<u64>,
    /// Lines contained in the curve; each has q+1 points on it.
    pub overflow: u64,
}

impl IncidenceProfile {
    pub fn t0(&self) -> u64 {
        self.t[0]
    }

    pub fn line_count(&self) -> u64 {
        self.t.iter().sum::<u64>() + self.overflow
    }

    /// Rejects profiles where some line lies on the curve.
    pub fn strict(self) -> Result<Self> {
        if self.overflow > 0 {
            return Err(Error::LineInCurve(format!("{} of them", self.overflow)));
        }
        Ok(self)
    }

    /// Checks the three double-counting identities.
    pub fn check_identities(&self) -> Result<()> {
        let q = self.q as u128;
        let n = self.n_points as u128;
        let full = q + 1;
        let lines = self.t.iter().map(|&x| x as u128).sum::<u128>() + self.overflow as u128;
        if lines != q * q + q + 1 {
            return Err(Error::IdentityViolation(format!("sum t_i = {lines}, expected {}", q * q + q + 1)));
        }
        let weighted = self
            .t
            .iter()
            .enumerate()
            .map(|(i, &x)| i as u128 * x as u128)
            .sum::<u128>()
            + full * self.overflow as u128;
        if weighted != full * n {
            return Err(Error::IdentityViolation(format!("sum i*t_i = {weighted}, expected {}", full * n)));
        }
        let pair = |i: u128| i * i.saturating_sub(1) / 2;
        let pairs = self
            .t
            .iter()
            .enumerate()
            .map(|(i, &x)| pair(i as u128) * x as u128)
            .sum::<u128>()
            + pair(full) * self.overflow as u128;
        if pairs != pair(n) {
            return Err(Error::IdentityViolation(format!("sum C(i,2)*t_i = {pairs}, expected {}", pair(n))));
        }
        Ok(())
    }
}

fn check_plane_curve(c: &HomForm) -> Result<()> {
    if c.nvars() != 3 {
        return Err(Error::ShapeMismatch(format!("plane curve needs 3 variables, got {}", c.nvars())));
    }
    if c.is_zero() {
        return Err(Error::ZeroForm);
    }
    Ok(())
}

/// `#C(F_q)` by enumerating P²(F_q).
pub fn count_points(c: &HomForm) -> u64 {
    let ctx = c.ctx();
    let total = point_count(ctx.q() as u64, c.nvars() - 1);
    (0..total)
        .into_par_iter()
        .filter(|&i| {
            let p = point_coords_at(ctx, c.nvars() - 1, i).expect("index in range");
            c.eval_unchecked(&p).is_zero()
        })
        .count() as u64
}

/// `m_L`, with q+1 for a line contained in the curve.
pub fn line_multiplicity(c: &HomForm, line: &ProjLine) -> u64 {
    let (a, b) = line.parametrization(c.ctx());
    let r = c.restrict_unchecked(&a, &b);
    if r.is_zero() {
        c.ctx().q() as u64 + 1
    } else {
        r.count_roots_p1() as u64
    }
}

pub fn profile(c: &HomForm) -> Result<IncidenceProfile> {
    check_plane_curve(c)?;
    let ctx = c.ctx();
    let q = ctx.q() as u64;
    let delta = c.degree();
    let n_lines = point_count(q, 2);
    let buckets = (0..n_lines)
        .into_par_iter()
        .fold(
            || vec![0u64; q as usize + 2],
            |mut acc, i| {
                let line = line_at(ctx, i).expect("index in range");
                acc[line_multiplicity(c, &line) as usize] += 1;
                acc
            },
        )
        .reduce(
            || vec![0u64; q as usize + 2],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let overflow = buckets[q as usize + 1];
    let mut t = vec![0u64; delta as usize + 1];
    for (m, &count) in buckets[..=q as usize].iter().enumerate() {
        if count == 0 {
            continue;
        }
        // A line not on the curve meets it in at most δ points.
        let slot = t
            .get_mut(m)
            .ok_or_else(|| Error::Internal(format!("line meets a degree {delta} curve in {m} points")))?;
        *slot = count;
    }
    let prof = IncidenceProfile {
        q,
        delta,
        n_points: count_points(c),
        t,
        overflow,
    };
    prof.check_identities()?;
    Ok(prof)
}

/// `(q²+q+1) − (q+1)·N + N(N−1)/δ`
pub fn t0_lower_bound(q: u64, delta: u32, n: u64) -> BigRational {
    let q = BigInt::from(q);
    let n = BigInt::from(n);
    let base = &q * &q + &q + 1 - (&q + 1) * &n;
    BigRational::from_integer(base) + BigRational::new(&n * (&n - 1), BigInt::from(delta))
}

/// The interval `q+1 ∓ (δ−1)(δ−2)√q`, kept symbolically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HasseWeil {
    pub q: u64,
    pub delta: u32,
    /// `(δ−1)(δ−2)`
    pub coeff: u64,
}

impl HasseWeil {
    /// Exact test of `|N − (q+1)| ≤ (δ−1)(δ−2)√q`.
    pub fn contains(&self, n: u64) -> bool {
        let dev = n as i128 - (self.q as i128 + 1);
        (dev * dev) as u128 <= (self.coeff as u128).pow(2) * self.q as u128
    }

    /// Smallest and largest integers in the interval.
    pub fn integer_range(&self) -> (u64, u64) {
        let r = ((self.coeff as u128).pow(2) * self.q as u128).sqrt() as u64;
        ((self.q + 1).saturating_sub(r), self.q + 1 + r)
    }

    pub fn low_f64(&self) -> f64 {
        (self.q + 1) as f64 - self.coeff as f64 * (self.q as f64).sqrt()
    }

    pub fn high_f64(&self) -> f64 {
        (self.q + 1) as f64 + self.coeff as f64 * (self.q as f64).sqrt()
    }
}

pub fn hasse_weil_interval(q: u64, delta: u32) -> HasseWeil {
    let d = delta as u64;
    HasseWeil {
        q,
        delta,
        coeff: d.saturating_sub(1) * d.saturating_sub(2),
    }
}

fn ser_rational<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    #[serde(rename = "N")]
    pub n_points: u64,
    #[serde(serialize_with = "ser_rational")]
    pub lower_t0: BigRational,
    pub actual_t0: u64,
    pub t0_bound_ok: bool,
    pub hasse_weil_low: f64,
    pub hasse_weil_high: f64,
    pub hasse_weil_ok: bool,
}

pub fn bound_check(p: &IncidenceProfile) -> BoundCheck {
    let lower = t0_lower_bound(p.q, p.delta, p.n_points);
    let hw = hasse_weil_interval(p.q, p.delta);
    BoundCheck {
        n_points: p.n_points,
        t0_bound_ok: BigRational::from_integer(BigInt::from(p.t0())) >= lower,
        lower_t0: lower,
        actual_t0: p.t0(),
        hasse_weil_low: hw.low_f64(),
        hasse_weil_high: hw.high_f64(),
        hasse_weil_ok: hw.contains(p.n_points),
    }
}

/// First line in enumeration order carrying no F_q-point of the curve.
pub fn find_avoiding_line(c: &HomForm) -> Result<Option<ProjLine>> {
    check_plane_curve(c)?;
    let ctx: &FieldCtx = c.ctx();
    let n_lines = point_count(ctx.q() as u64, 2);
    Ok((0..n_lines)
        .into_par_iter()
        .map(|i| line_at(ctx, i).expect("index in range"))
        .find_first(|line| line_multiplicity(c, line) == 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;
    use crate::projspace::enum_points;

    fn curve(q: u64, text: &str) -> HomForm {
        HomForm::parse(&FieldCtx::with_order(q).unwrap(), 3, text).unwrap()
    }

    /// Tallies m_L by walking each curve point's pencil of lines.
    fn profile_by_points(c: &HomForm) -> (u64, Vec<u64>) {
        let ctx = c.ctx();
        let lines: Vec<ProjLine> = crate::projspace::enum_lines(ctx).collect();
        let pts: Vec<_> = enum_points(ctx, 2).filter(|p| c.eval(p.coords()).unwrap().is_zero()).collect();
        let m: Vec<u64> = lines
            .iter()
            .map(|l| pts.iter().filter(|p| l.contains(ctx, p.coords())).count() as u64)
            .collect();
        let mut hist = vec![0u64; ctx.q() as usize + 2];
        for x in m {
            hist[x as usize] += 1;
        }
        (pts.len() as u64, hist)
    }

    #[test]
    fn smooth_conic_over_gf2() {
        let p = profile(&curve(2, "x^2+y*z")).unwrap();
        assert_eq!(p.n_points, 3);
        assert_eq!(p.line_count(), 7);
        assert_eq!(p.overflow, 0);
        assert_eq!(t0_lower_bound(2, 2, 3), BigRational::from_integer(1.into()));
        assert!(bound_check(&p).t0_bound_ok);
    }

    #[test]
    fn a_line_as_curve() {
        for q in [2u64, 3, 4, 5] {
            let p = profile(&curve(q, "x")).unwrap();
            assert_eq!(p.overflow, 1);
            assert_eq!(p.t, vec![0, q * q + q]);
            assert!(matches!(p.strict(), Err(Error::LineInCurve(_))));
        }
    }

    #[test]
    fn matches_point_based_count() {
        for (q, text) in [
            (3, "x^3+y^3+z^3"),
            (4, "x^3+y^2*z+y*z^2"),
            (5, "y^2*z-x^3-x*z^2-z^3"),
            (7, "x*y*z"),
            (2, "x^2*y+x*y^2"),
        ] {
            let c = curve(q, text);
            let p = profile(&c).unwrap();
            let (n, hist) = profile_by_points(&c);
            assert_eq!(p.n_points, n, "{text}");
            // a line carrying q+1 curve points may or may not lie on the curve
            let mut merged = vec![0u64; q as usize + 2];
            for (i, &ti) in p.t.iter().enumerate() {
                merged[i] += ti;
            }
            merged[q as usize + 1] += p.overflow;
            assert_eq!(merged, hist, "{text}");
        }
    }

    #[test]
    fn corrupted_profile_fails_identities() {
        let mut p = profile(&curve(5, "x^2+y^2+z^2")).unwrap();
        p.t[0] += 1;
        p.t[1] -= 1;
        assert!(matches!(p.check_identities(), Err(Error::IdentityViolation(_))));
    }

    #[test]
    fn hasse_weil() {
        assert_eq!(hasse_weil_interval(7, 2).integer_range(), (8, 8));
        let hw = hasse_weil_interval(53, 3);
        assert_eq!(hw.integer_range(), (40, 68));
        assert!(hw.contains(40) && hw.contains(68) && !hw.contains(39) && !hw.contains(69));
        let p = profile(&curve(5, "y^2*z-x^3-x*z^2-z^3")).unwrap();
        assert!(hasse_weil_interval(5, 3).contains(p.n_points));
    }

    #[test]
    fn avoiding_line() {
        for (q, text) in [(2, "x^2+x*y+y^2"), (3, "x^3+y^3+z^3"), (5, "x^2+y^2+z^2")] {
            let c = curve(q, text);
            let p = profile(&c).unwrap();
            let line = find_avoiding_line(&c).unwrap();
            assert_eq!(line.is_some(), p.t0() > 0);
            if let Some(l) = line {
                assert_eq!(line_multiplicity(&c, &l), 0);
            }
        }
        // no F_2-points at all: the first line is returned
        let g2 = make_field(2, 1).unwrap();
        let c = HomForm::parse(&g2, 3, "x^4+y^4+z^4+x^2*y^2+y^2*z^2+z^2*x^2+x^2*y*z+x*y^2*z+x*y*z^2").unwrap();
        assert_eq!(count_points(&c), 0);
        assert_eq!(find_avoiding_line(&c).unwrap(), Some(line_at(&g2, 0).unwrap()));
    }

    #[test]
    fn rejects_non_plane_forms() {
        let g2 = make_field(2, 1).unwrap();
        let c = HomForm::parse(&g2, 4, "x*w").unwrap();
        assert!(profile(&c).is_err());
    }
}
