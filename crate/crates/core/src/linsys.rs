//! Pencils and higher-dimensional linear systems of hypersurfaces.
//!
//! A system of projective dimension r is spanned by r+1 linearly independent
//! forms of the same degree; its F_q-members are the combinations
//! `a_0 F_0 + ... + a_r F_r` for `[a_0 : ... : a_r] ∈ P^r(F_q)`.

use std::collections::{BTreeMap, HashSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{Fe, FieldCtx};
use crate::linalg;
use crate::mpoly::{lincomb, monomial_count, HomForm};
use crate::projspace::{enum_points, normalize, point_coords_at, point_count, point_count_u128, ProjPoint};
use crate::smoothness::{is_smooth, Oracle, Status, Witness};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    ctx: FieldCtx,
    nvars: usize,
    degree: u32,
    generators: Vec<HomForm>,
}

impl LinearSystem {
    /// Fails unless the generators share field, variables and degree and are
    /// linearly independent.
    pub fn new(generators: Vec<HomForm>) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| Error::ShapeMismatch("a linear system needs generators".into()))?;
        let (ctx, nvars, degree) = (first.ctx().clone(), first.nvars(), first.degree());
        for g in &generators {
            if *g.ctx() != ctx || g.nvars() != nvars || g.degree() != degree {
                return Err(Error::ShapeMismatch("generators differ in field, variables or degree".into()));
            }
        }
        let rows: Vec<Vec<Fe>> = generators.iter().map(HomForm::coeff_vector).collect();
        if linalg::rank(&ctx, &rows) != generators.len() {
            return Err(Error::DependentGenerators);
        }
        Ok(LinearSystem {
            ctx,
            nvars,
            degree,
            generators,
        })
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    /// Dimension n of the ambient projective space.
    pub fn n(&self) -> usize {
        self.nvars - 1
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Projective dimension r.
    pub fn r(&self) -> usize {
        self.generators.len() - 1
    }

    pub fn generators(&self) -> &[HomForm] {
        &self.generators
    }

    /// `(q^(r+1) - 1)/(q - 1)`
    pub fn member_count(&self) -> u64 {
        point_count(self.ctx.q() as u64, self.r())
    }

    /// Each F_q-member once, keyed by its normalized coefficient point.
    pub fn members(&self) -> impl ExactSizeIterator<Item = (ProjPoint, HomForm)> + '_ {
        enum_points(&self.ctx, self.r()).map(move |a| {
            let f = lincomb(a.coords(), &self.generators).expect("shapes checked");
            (a, f)
        })
    }

    fn member_at(&self, index: u64) -> (Vec<Fe>, HomForm) {
        let a = point_coords_at(&self.ctx, self.r(), index).expect("index in range");
        let f = lincomb(&a, &self.generators).expect("shapes checked");
        (a, f)
    }

    /// Reduced row echelon form of the coefficient matrix: equal for two
    /// generator tuples exactly when they span the same system.
    pub fn canonical_span(&self) -> Vec<Vec<Fe>> {
        let mut rows: Vec<Vec<Fe>> = self.generators.iter().map(HomForm::coeff_vector).collect();
        linalg::rref(&self.ctx, &mut rows);
        rows
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportStatus {
    AllSmooth,
    HasSingular,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularMember {
    pub coeffs: ProjPoint,
    pub form: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SystemReport {
    pub total_members: u64,
    /// In short-circuit mode, the number of members checked smooth before the
    /// first non-smooth one.
    pub smooth_count: u64,
    pub status: ReportStatus,
    pub exhaustive: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_singular_member: Option<SingularMember>,
}

impl SystemReport {
    pub fn all_smooth(&self) -> bool {
        self.status == ReportStatus::AllSmooth
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum VerifyMode {
    #[default]
    ShortCircuit,
    Exhaustive,
}

/// Runs the smoothness oracle on every F_q-member.
pub fn verify_all_smooth(sys: &LinearSystem, oracle: Oracle, mode: VerifyMode) -> Result<SystemReport> {
    let total = sys.member_count();
    let check = |i: u64| -> Result<(u64, Vec<Fe>, HomForm, crate::smoothness::SmoothnessVerdict)> {
        let (a, f) = sys.member_at(i);
        let v = is_smooth(&f, oracle)?;
        Ok((i, a, f, v))
    };
    let record = |a: Vec<Fe>, f: &HomForm, v: crate::smoothness::SmoothnessVerdict| SingularMember {
        coeffs: ProjPoint::new(&sys.ctx, a).expect("normalized"),
        form: f.to_string(),
        status: v.status,
        witness: v.witness,
    };
    match mode {
        VerifyMode::ShortCircuit => {
            let hit = (0..total)
                .into_par_iter()
                .map(check)
                .find_first(|r| r.as_ref().map_or(true, |(.., v)| !v.is_smooth()));
            match hit {
                None => Ok(SystemReport {
                    total_members: total,
                    smooth_count: total,
                    status: ReportStatus::AllSmooth,
                    exhaustive: false,
                    first_singular_member: None,
                }),
                Some(r) => {
                    let (i, a, f, v) = r?;
                    let status = if v.status == Status::Inconclusive {
                        ReportStatus::Inconclusive
                    } else {
                        ReportStatus::HasSingular
                    };
                    Ok(SystemReport {
                        total_members: total,
                        smooth_count: i,
                        status,
                        exhaustive: false,
                        first_singular_member: Some(record(a, &f, v)),
                    })
                }
            }
        }
        VerifyMode::Exhaustive => {
            let all: Vec<_> = (0..total).into_par_iter().map(check).collect::<Result<_>>()?;
            let smooth_count = all.iter().filter(|(.., v)| v.is_smooth()).count() as u64;
            let any_singular = all.iter().any(|(.., v)| v.status == Status::Singular);
            let first = all.into_iter().find(|(.., v)| !v.is_smooth());
            let status = if smooth_count == total {
                ReportStatus::AllSmooth
            } else if any_singular {
                ReportStatus::HasSingular
            } else {
                ReportStatus::Inconclusive
            };
            Ok(SystemReport {
                total_members: total,
                smooth_count,
                status,
                exhaustive: true,
                first_singular_member: first.map(|(_, a, f, v)| record(a, &f, v)),
            })
        }
    }
}

/// Default cap on candidate forms or subsets visited by a search.
pub const DEFAULT_SEARCH_CAP: u128 = 100_000_000;

/// All smooth forms of degree d on P^n up to scalars, one normalized
/// representative each, in coefficient-point enumeration order.
pub fn enumerate_smooth_forms(ctx: &FieldCtx, n: usize, d: u32, cap: u128) -> Result<Vec<HomForm>> {
    let nvars = n + 1;
    let basis_len = monomial_count(nvars, d) as usize;
    let total = point_count_u128(ctx.q() as u64, basis_len - 1);
    if total > cap {
        return Err(Error::WorkCapExceeded { needed: total, cap });
    }
    let found: Vec<Option<HomForm>> = (0..total as u64)
        .into_par_iter()
        .map(|i| -> Result<Option<HomForm>> {
            let coeffs = point_coords_at(ctx, basis_len - 1, i)?;
            let f = HomForm::from_coeff_vector(ctx, nvars, d, &coeffs)?;
            Ok(is_smooth(&f, Oracle::Auto)?.is_smooth().then_some(f))
        })
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Every (r+1)-subset of the smooth forms.
    Exhaustive { cap: u128 },
    /// Independent random generator tuples, trial t drawing from stream t of
    /// a ChaCha generator seeded with `seed`.
    Random { seed: u64, max_trials: u64 },
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    /// Systems found, one per distinct span, in order of discovery.
    pub systems: Vec<LinearSystem>,
    /// Size of the smooth-form universe (exhaustive only).
    pub smooth_forms: Option<usize>,
    /// Raw (r+1)-subsets visited, or trials drawn.
    pub candidates_examined: u64,
    /// Candidates whose generators were independent.
    pub independent_candidates: u64,
    /// Candidates whose every member was smooth, before span deduplication.
    pub valid_candidates: u64,
}

pub fn search_all_smooth(ctx: &FieldCtx, n: usize, d: u32, r: usize, strategy: Strategy) -> Result<SearchOutcome> {
    match strategy {
        Strategy::Exhaustive { cap } => search_exhaustive(ctx, n, d, r, cap),
        Strategy::Random { seed, max_trials } => search_random(ctx, n, d, r, seed, max_trials),
    }
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Calls `f` on every k-subset of `lo..n` (as sorted index lists) that
/// extends `prefix`, in lexicographic order.
fn for_each_subset<F: FnMut(&[usize])>(prefix: &mut Vec<usize>, lo: usize, n: usize, k: usize, f: &mut F) {
    if prefix.len() == k {
        f(prefix);
        return;
    }
    let need = k - prefix.len();
    for i in lo..=n.saturating_sub(need) {
        prefix.push(i);
        for_each_subset(prefix, i + 1, n, k, f);
        prefix.pop();
    }
}

fn search_exhaustive(ctx: &FieldCtx, n: usize, d: u32, r: usize, cap: u128) -> Result<SearchOutcome> {
    let smooth = enumerate_smooth_forms(ctx, n, d, cap)?;
    let k = r + 1;
    let subsets = binomial(smooth.len() as u64, k as u64);
    if subsets > cap {
        return Err(Error::WorkCapExceeded { needed: subsets, cap });
    }
    let vectors: Vec<Vec<Fe>> = smooth.iter().map(HomForm::coeff_vector).collect();
    // Every member of a valid system is smooth, so it must normalize into this set.
    let lookup: HashSet<&[Fe]> = vectors.iter().map(Vec::as_slice).collect();
    let coeff_points: Vec<Vec<Fe>> = enum_points(ctx, r).map(ProjPoint::into_coords).collect();

    // Partition by first index; each part is visited in lexicographic order.
    let parts: Vec<(u64, u64, Vec<Vec<usize>>)> = (0..smooth.len())
        .into_par_iter()
        .map(|first| {
            let (mut examined, mut independent) = (0u64, 0u64);
            let mut valid = Vec::new();
            let mut prefix = vec![first];
            for_each_subset(&mut prefix, first + 1, smooth.len(), k, &mut |idx| {
                examined += 1;
                let rows: Vec<Vec<Fe>> = idx.iter().map(|&i| vectors[i].clone()).collect();
                if linalg::rank(ctx, &rows) != k {
                    return;
                }
                independent += 1;
                let all_members_smooth = coeff_points.iter().all(|a| {
                    let mut v = vec![Fe::ZERO; rows[0].len()];
                    for (&ai, row) in a.iter().zip(&rows) {
                        if ai.is_zero() {
                            continue;
                        }
                        for (x, &c) in v.iter_mut().zip(row) {
                            *x = ctx.add(*x, ctx.mul(ai, c));
                        }
                    }
                    normalize(ctx, v).is_some_and(|v| lookup.contains(v.as_slice()))
                });
                if all_members_smooth {
                    valid.push(idx.to_vec());
                }
            });
            (examined, independent, valid)
        })
        .collect();

    let mut outcome = SearchOutcome {
        systems: Vec::new(),
        smooth_forms: Some(smooth.len()),
        candidates_examined: 0,
        independent_candidates: 0,
        valid_candidates: 0,
    };
    let mut spans: BTreeMap<Vec<Vec<Fe>>, ()> = BTreeMap::new();
    for (examined, independent, valid) in parts {
        outcome.candidates_examined += examined;
        outcome.independent_candidates += independent;
        outcome.valid_candidates += valid.len() as u64;
        for idx in valid {
            let sys = LinearSystem::new(idx.iter().map(|&i| smooth[i].clone()).collect())?;
            let span = sys.canonical_span();
            if spans.insert(span, ()).is_none() {
                let report = verify_all_smooth(&sys, Oracle::Auto, VerifyMode::ShortCircuit)?;
                if !report.all_smooth() {
                    return Err(Error::Internal("lookup and oracle disagree on a member".into()));
                }
                outcome.systems.push(sys);
            }
        }
    }
    Ok(outcome)
}

/// Random form with the given seed stream; used by the random search and tests.
pub fn random_form<R: rand::Rng>(ctx: &FieldCtx, nvars: usize, d: u32, rng: &mut R) -> HomForm {
    let len = monomial_count(nvars, d) as usize;
    let coeffs: Vec<Fe> = (0..len).map(|_| ctx.random(rng)).collect();
    HomForm::from_coeff_vector(ctx, nvars, d, &coeffs).expect("length matches basis")
}

/// Deterministic generator for `(seed, stream)`.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// The first `count` certified-smooth forms among seeded random draws,
/// stream i of `seed` producing candidate i.
pub fn seeded_smooth_forms(
    ctx: &FieldCtx,
    nvars: usize,
    d: u32,
    seed: u64,
    count: usize,
    max_trials: u64,
) -> Result<Vec<HomForm>> {
    let mut found = Vec::with_capacity(count);
    for trial in 0..max_trials {
        if found.len() == count {
            break;
        }
        let f = random_form(ctx, nvars, d, &mut trial_rng(seed, trial));
        if !f.is_zero() && is_smooth(&f, Oracle::Auto)?.is_smooth() {
            found.push(f);
        }
    }
    if found.len() < count {
        return Err(Error::WorkCapExceeded {
            needed: count as u128,
            cap: found.len() as u128,
        });
    }
    Ok(found)
}

fn search_random(ctx: &FieldCtx, n: usize, d: u32, r: usize, seed: u64, max_trials: u64) -> Result<SearchOutcome> {
    let nvars = n + 1;
    let attempt = |trial: u64| -> Result<Option<LinearSystem>> {
        let mut rng = trial_rng(seed, trial);
        let gens: Vec<HomForm> = (0..=r).map(|_| random_form(ctx, nvars, d, &mut rng)).collect();
        let sys = match LinearSystem::new(gens) {
            Ok(s) => s,
            Err(Error::DependentGenerators) => return Ok(None),
            Err(e) => return Err(e),
        };
        let report = verify_all_smooth(&sys, Oracle::Auto, VerifyMode::ShortCircuit)?;
        Ok(report.all_smooth().then_some(sys))
    };
    let hit = (0..max_trials)
        .into_par_iter()
        .map(|t| (t, attempt(t)))
        .find_first(|(_, res)| !matches!(res, Ok(None)));
    match hit {
        None => Ok(SearchOutcome {
            systems: Vec::new(),
            smooth_forms: None,
            candidates_examined: max_trials,
            independent_candidates: 0,
            valid_candidates: 0,
        }),
        Some((t, res)) => {
            let sys = res?.expect("hit is a system");
            Ok(SearchOutcome {
                systems: vec![sys],
                smooth_forms: None,
                candidates_examined: t + 1,
                independent_candidates: 0,
                valid_candidates: 1,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    fn forms(ctx: &FieldCtx, nvars: usize, texts: &[&str]) -> Vec<HomForm> {
        texts.iter().map(|t| HomForm::parse(ctx, nvars, t).unwrap()).collect()
    }

    #[test]
    fn pencil_members_over_gf2() {
        let g2 = make_field(2, 1).unwrap();
        let sys = LinearSystem::new(forms(&g2, 3, &["x^2+y^2+x*z", "x*y+x*z+z^2"])).unwrap();
        let m: Vec<HomForm> = sys.members().map(|(_, f)| f).collect();
        assert_eq!(m.len(), 3);
        let g = sys.generators();
        assert!(m.contains(&g[0]) && m.contains(&g[1]) && m.contains(&g[0].add(&g[1]).unwrap()));
    }

    #[test]
    fn dependent_generators_rejected() {
        let g3 = make_field(3, 1).unwrap();
        let err = LinearSystem::new(forms(&g3, 3, &["x^2+y*z", "2*x^2+2*y*z"])).unwrap_err();
        assert_eq!(err, Error::DependentGenerators);
    }

    #[test]
    fn degenerate_pencil_is_caught() {
        let g3 = make_field(3, 1).unwrap();
        let sys = LinearSystem::new(forms(&g3, 3, &["x^2", "y^2"])).unwrap();
        let rep = verify_all_smooth(&sys, Oracle::Auto, VerifyMode::ShortCircuit).unwrap();
        assert_eq!(rep.status, ReportStatus::HasSingular);
        assert_eq!(rep.smooth_count, 0);
        let full = verify_all_smooth(&sys, Oracle::Auto, VerifyMode::Exhaustive).unwrap();
        assert_eq!(full.smooth_count, 0);
        assert!(full.smooth_count <= full.total_members);
    }

    #[test]
    fn smooth_form_counts() {
        let g2 = make_field(2, 1).unwrap();
        assert_eq!(enumerate_smooth_forms(&g2, 2, 2, DEFAULT_SEARCH_CAP).unwrap().len(), 28);
        let g3 = make_field(3, 1).unwrap();
        assert_eq!(enumerate_smooth_forms(&g3, 2, 2, DEFAULT_SEARCH_CAP).unwrap().len(), 234);
        for q in [2u64, 3, 4, 5] {
            let ctx = FieldCtx::with_order(q).unwrap();
            let lines = enumerate_smooth_forms(&ctx, 2, 1, DEFAULT_SEARCH_CAP).unwrap();
            assert_eq!(lines.len() as u64, q * q + q + 1);
        }
        assert!(matches!(
            enumerate_smooth_forms(&g3, 3, 3, 1000),
            Err(Error::WorkCapExceeded { .. })
        ));
    }

    #[test]
    fn subsets_are_lexicographic() {
        let mut seen = Vec::new();
        for_each_subset(&mut Vec::new(), 0, 5, 3, &mut |s| seen.push(s.to_vec()));
        assert_eq!(seen.len(), 10);
        assert_eq!(seen[0], vec![0, 1, 2]);
        assert_eq!(seen[9], vec![2, 3, 4]);
        assert_eq!(binomial(28, 4), 20475);
    }

    #[test]
    fn random_rng_streams_are_reproducible() {
        use rand::Rng;
        let a: u64 = trial_rng(7, 3).gen();
        let b: u64 = trial_rng(7, 3).gen();
        let c: u64 = trial_rng(7, 4).gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
