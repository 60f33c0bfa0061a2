//! Projective points and plane lines over a finite field.
//!
//! A point is stored by its normalized representative: the first nonzero
//! coordinate is 1. Points of P^n are enumerated chart by chart: first all
//! points `[1:*:...:*]`, then `[0:1:*:...]`, and so on, with the remaining
//! coordinates counting in base q (last coordinate fastest). Lines of P² use
//! the same order on their dual coordinates.

use std::fmt;
use std::ops::Range;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{Fe, FieldCtx};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ProjPoint {
    coords: Vec<Fe>,
}

impl ProjPoint {
    /// Normalizes `coords`; fails on the zero vector.
    pub fn new(ctx: &FieldCtx, coords: Vec<Fe>) -> Result<Self> {
        normalize(ctx, coords).map(|coords| ProjPoint { coords }).ok_or(Error::ZeroForm)
    }

    pub fn coords(&self) -> &[Fe] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Fe> {
        self.coords
    }

    /// Ambient dimension n.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_bracketed(f, &self.coords)
    }
}

fn write_bracketed(f: &mut fmt::Formatter<'_>, v: &[Fe]) -> fmt::Result {
    write!(f, "[")?;
    for (i, c) in v.iter().enumerate() {
        if i > 0 {
            write!(f, ":")?;
        }
        write!(f, "{c}")?;
    }
    write!(f, "]")
}

/// Scales a nonzero vector so its first nonzero entry is 1.
pub fn normalize(ctx: &FieldCtx, mut v: Vec<Fe>) -> Option<Vec<Fe>> {
    let lead = *v.iter().find(|c| !c.is_zero())?;
    if lead != Fe::ONE {
        let inv = ctx.inv(lead).expect("nonzero");
        for c in v.iter_mut() {
            *c = ctx.mul(*c, inv);
        }
    }
    Some(v)
}

/// `#P^n(F_q) = q^n + ... + q + 1`.
pub fn point_count(q: u64, n: usize) -> u64 {
    (0..=n).fold(0u64, |acc, _| acc * q + 1)
}

/// Like [`point_count`] but without overflow, for work estimates.
pub fn point_count_u128(q: u64, n: usize) -> u128 {
    (0..=n).fold(0u128, |acc, _| acc.saturating_mul(q as u128).saturating_add(1))
}

/// Coordinates of the point with enumeration index `index`.
pub fn point_coords_at(ctx: &FieldCtx, n: usize, mut index: u64) -> Result<Vec<Fe>> {
    let q = ctx.q() as u64;
    let total = point_count(q, n);
    if index >= total {
        return Err(Error::IndexOutOfRange {
            index: index as usize,
            limit: total as usize,
        });
    }
    let mut coords = vec![Fe::ZERO; n + 1];
    for k in 0..=n {
        let chart = q.pow((n - k) as u32);
        if index < chart {
            coords[k] = Fe::ONE;
            for slot in coords[k + 1..].iter_mut().rev() {
                *slot = Fe((index % q) as u32);
                index /= q;
            }
            break;
        }
        index -= chart;
    }
    Ok(coords)
}

pub fn point_at(ctx: &FieldCtx, n: usize, index: u64) -> Result<ProjPoint> {
    point_coords_at(ctx, n, index).map(|coords| ProjPoint { coords })
}

/// Calls `f` on the coordinates of each point with index in `range`, in
/// order, stopping early (and returning that index) when `f` returns true.
pub fn find_in_range<F>(ctx: &FieldCtx, n: usize, range: Range<u64>, mut f: F) -> Option<u64>
where
    F: FnMut(&[Fe]) -> bool,
{
    if range.is_empty() {
        return None;
    }
    let q = ctx.q();
    let mut coords = point_coords_at(ctx, n, range.start).ok()?;
    for idx in range {
        if f(&coords) {
            return Some(idx);
        }
        // odometer step over the free coordinates of the current chart
        let lead = coords.iter().position(|c| !c.is_zero()).expect("nonzero");
        let mut pos = n;
        loop {
            if pos == lead {
                // chart exhausted: move to the next chart
                coords.iter_mut().for_each(|c| *c = Fe::ZERO);
                if lead < n {
                    coords[lead + 1] = Fe::ONE;
                }
                break;
            }
            if coords[pos].0 + 1 < q {
                coords[pos].0 += 1;
                break;
            }
            coords[pos] = Fe::ZERO;
            pos -= 1;
        }
    }
    None
}

/// Iterator over all points of P^n(F_q) in enumeration order.
pub struct PointIter {
    ctx: FieldCtx,
    n: usize,
    next: u64,
    end: u64,
}

impl Iterator for PointIter {
    type Item = ProjPoint;

    fn next(&mut self) -> Option<ProjPoint> {
        if self.next >= self.end {
            return None;
        }
        let p = point_at(&self.ctx, self.n, self.next).ok();
        self.next += 1;
        p
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for PointIter {}

pub fn enum_points(ctx: &FieldCtx, n: usize) -> PointIter {
    PointIter {
        ctx: ctx.clone(),
        n,
        next: 0,
        end: point_count(ctx.q() as u64, n),
    }
}

/// Line `{a·x0 + b·x1 + c·x2 = 0}` in P², stored by normalized dual coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ProjLine {
    dual: [Fe; 3],
}

impl ProjLine {
    pub fn new(ctx: &FieldCtx, dual: [Fe; 3]) -> Result<Self> {
        let v = normalize(ctx, dual.to_vec()).ok_or(Error::ZeroForm)?;
        Ok(ProjLine {
            dual: [v[0], v[1], v[2]],
        })
    }

    pub fn dual(&self) -> [Fe; 3] {
        self.dual
    }

    pub fn contains(&self, ctx: &FieldCtx, p: &[Fe]) -> bool {
        let [a, b, c] = self.dual;
        let v = ctx.add(ctx.add(ctx.mul(a, p[0]), ctx.mul(b, p[1])), ctx.mul(c, p[2]));
        v.is_zero()
    }

    /// Two points spanning the line, each in normalized form.
    pub fn parametrization(&self, ctx: &FieldCtx) -> ([Fe; 3], [Fe; 3]) {
        let [a, b, c] = self.dual;
        if !a.is_zero() {
            // a = 1: x0 = -(b x1 + c x2)
            ([ctx.neg(b), Fe::ONE, Fe::ZERO], [ctx.neg(c), Fe::ZERO, Fe::ONE])
        } else if !b.is_zero() {
            ([Fe::ONE, Fe::ZERO, Fe::ZERO], [Fe::ZERO, ctx.neg(c), Fe::ONE])
        } else {
            ([Fe::ONE, Fe::ZERO, Fe::ZERO], [Fe::ZERO, Fe::ONE, Fe::ZERO])
        }
    }
}

impl fmt::Display for ProjLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_bracketed(f, &self.dual)
    }
}

/// All q²+q+1 lines of P²(F_q) in enumeration order.
pub fn enum_lines(ctx: &FieldCtx) -> impl ExactSizeIterator<Item = ProjLine> {
    enum_points(ctx, 2).map(|p| {
        let c = p.coords();
        ProjLine {
            dual: [c[0], c[1], c[2]],
        }
    })
}

pub fn line_at(ctx: &FieldCtx, index: u64) -> Result<ProjLine> {
    let c = point_coords_at(ctx, 2, index)?;
    Ok(ProjLine {
        dual: [c[0], c[1], c[2]],
    })
}

/// The parameter values `[s:t]` of P¹(F_q): `[1:t]` for t in code order, then `[0:1]`.
pub fn p1_params(ctx: &FieldCtx) -> impl Iterator<Item = (Fe, Fe)> + '_ {
    ctx.elements()
        .map(|t| (Fe::ONE, t))
        .chain(std::iter::once((Fe::ZERO, Fe::ONE)))
}

/// The q+1 points of `line` together with the spanning pair `(A, B)`; the
/// k-th point is `s·A + t·B` for the k-th parameter of [`p1_params`].
pub fn points_on_line(ctx: &FieldCtx, line: &ProjLine) -> (Vec<ProjPoint>, [Fe; 3], [Fe; 3]) {
    let (a, b) = line.parametrization(ctx);
    let pts = p1_params(ctx)
        .map(|(s, t)| {
            let v = (0..3)
                .map(|i| ctx.add(ctx.mul(s, a[i]), ctx.mul(t, b[i])))
                .collect();
            ProjPoint::new(ctx, v).expect("A and B are independent")
        })
        .collect();
    (pts, a, b)
}

/// The unique line through two distinct points of P².
pub fn line_through(ctx: &FieldCtx, p1: &ProjPoint, p2: &ProjPoint) -> Result<ProjLine> {
    if p1.dim() != 2 || p2.dim() != 2 {
        return Err(Error::ShapeMismatch("line_through needs points of P^2".into()));
    }
    let (u, v) = (p1.coords(), p2.coords());
    let cross = |i: usize, j: usize| ctx.sub(ctx.mul(u[i], v[j]), ctx.mul(u[j], v[i]));
    let dual = [cross(1, 2), cross(2, 0), cross(0, 1)];
    ProjLine::new(ctx, dual).map_err(|_| Error::EqualPoints)
}
