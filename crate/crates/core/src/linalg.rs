//! Dense Gaussian elimination over a [`FieldCtx`].

use crate::gf::{Fe, FieldCtx};

/// Row-reduces `rows` in place to reduced row echelon form and returns the
/// pivot columns. The pivot for each column is the first remaining row with a
/// nonzero entry there, so the result is deterministic.
pub fn rref(ctx: &FieldCtx, rows: &mut [Vec<Fe>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = ctx.inv(rows[r][col]).expect("pivot is nonzero");
        for x in rows[r].iter_mut().skip(col) {
            *x = ctx.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col];
            for (x, &pv) in row.iter_mut().zip(&pivot_row).skip(col) {
                *x = ctx.sub(*x, ctx.mul(factor, pv));
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

pub fn rank(ctx: &FieldCtx, rows: &[Vec<Fe>]) -> usize {
    let mut m = rows.to_vec();
    rref(ctx, &mut m).len()
}

/// Rank by forward elimination only, consuming the matrix. Cheaper than
/// [`rref`] for tall matrices where only the rank matters.
pub fn rank_in_place(ctx: &FieldCtx, mut rows: Vec<Vec<Fe>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = ctx.inv(rows[r][col]).expect("pivot is nonzero");
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        for row in tail.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let factor = ctx.mul(row[col], inv);
            for (x, &pv) in row.iter_mut().zip(pivot_row).skip(col) {
                *x = ctx.sub(*x, ctx.mul(factor, pv));
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

/// Basis of the right kernel `{v : M v = 0}`.
pub fn kernel(ctx: &FieldCtx, rows: &[Vec<Fe>], ncols: usize) -> Vec<Vec<Fe>> {
    let mut m = rows.to_vec();
    let pivots = rref(ctx, &mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Fe::ZERO; ncols];
            v[f] = Fe::ONE;
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = ctx.neg(row[f]);
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    #[test]
    fn kernel_vectors_are_in_kernel() {
        let ctx = make_field(5, 1).unwrap();
        let m = vec![
            vec![Fe(1), Fe(2), Fe(3)],
            vec![Fe(2), Fe(1), Fe(1)],
        ];
        let k = kernel(&ctx, &m, 3);
        assert_eq!(k.len(), 1);
        for row in &m {
            let dot = row
                .iter()
                .zip(&k[0])
                .fold(Fe::ZERO, |acc, (&a, &b)| ctx.add(acc, ctx.mul(a, b)));
            assert!(dot.is_zero());
        }
        assert_eq!(rank(&ctx, &m), 2);
        assert_eq!(rank_in_place(&ctx, m), 2);
    }
}
