//! Homogeneous multivariate polynomials over a finite field.
//!
//! Forms are stored sparsely as a map from exponent vector to nonzero
//! coefficient. Monomials of a given degree are ordered graded
//! lexicographically with `x0` largest; forms print in decreasing order, e.g.
//! `x0^2 + 3*x1*x2`, with coefficients written as field-element codes.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{Embedding, Fe, FieldCtx};

/// Exponent vector of a monomial.
pub type Monomial = Vec<u16>;

/// All monomials of `degree` in `nvars` variables, in decreasing graded-lex order.
pub fn monomials(nvars: usize, degree: u32) -> Vec<Monomial> {
    fn rec(prefix: &mut Vec<u16>, left: u32, vars_left: usize, out: &mut Vec<Monomial>) {
        if vars_left == 1 {
            prefix.push(left as u16);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e as u16);
            rec(prefix, left - e, vars_left - 1, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        return out;
    }
    rec(&mut Vec::with_capacity(nvars), degree, nvars, &mut out);
    out
}

/// Number of monomials of `degree` in `nvars` variables, C(nvars-1+degree, degree).
pub fn monomial_count(nvars: usize, degree: u32) -> u64 {
    let (n, d) = (nvars as u64 - 1, degree as u64);
    (1..=n).fold(1u64, |acc, i| acc * (d + i) / i)
}

#[derive(Clone, PartialEq, Eq)]
pub struct HomForm {
    ctx: FieldCtx,
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Monomial, Fe>,
}

impl fmt::Debug for HomForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HomForm({} over {}: {})", self.nvars, self.ctx, self)
    }
}

impl HomForm {
    pub fn zero(ctx: &FieldCtx, nvars: usize, degree: u32) -> Self {
        HomForm {
            ctx: ctx.clone(),
            nvars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a form from `(exponents, coefficient)` pairs. Repeated monomials
    /// are summed and zero coefficients dropped.
    pub fn from_terms<I>(ctx: &FieldCtx, nvars: usize, degree: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, Fe)>,
    {
        let mut out = HomForm::zero(ctx, nvars, degree);
        for (mono, c) in terms {
            if mono.len() != nvars {
                return Err(Error::ShapeMismatch(format!(
                    "monomial has {} exponents, expected {nvars}",
                    mono.len()
                )));
            }
            let deg: u32 = mono.iter().map(|&e| e as u32).sum();
            if deg != degree {
                return Err(Error::WrongDegree {
                    expected: degree,
                    found: deg,
                });
            }
            ctx.elem(c.code())?;
            out.add_term(mono, c);
        }
        Ok(out)
    }

    /// Inverse of [`HomForm::coeff_vector`].
    pub fn from_coeff_vector(ctx: &FieldCtx, nvars: usize, degree: u32, coeffs: &[Fe]) -> Result<Self> {
        let basis = monomials(nvars, degree);
        if basis.len() != coeffs.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} coefficients for {} monomials",
                coeffs.len(),
                basis.len()
            )));
        }
        HomForm::from_terms(ctx, nvars, degree, basis.into_iter().zip(coeffs.iter().copied()))
    }

    fn add_term(&mut self, mono: Monomial, c: Fe) {
        if c.is_zero() {
            return;
        }
        let ctx = self.ctx.clone();
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = ctx.add(*o.get(), c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in decreasing monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, Fe)> {
        self.terms.iter().rev().map(|(m, &c)| (m, c))
    }

    pub fn coeff(&self, mono: &[u16]) -> Fe {
        self.terms.get(mono).copied().unwrap_or(Fe::ZERO)
    }

    /// Coefficients on the basis returned by [`monomials`].
    pub fn coeff_vector(&self) -> Vec<Fe> {
        monomials(self.nvars, self.degree)
            .iter()
            .map(|m| self.coeff(m))
            .collect()
    }

    fn same_shape(&self, other: &HomForm) -> Result<()> {
        if self.ctx != other.ctx || self.nvars != other.nvars || self.degree != other.degree {
            return Err(Error::ShapeMismatch(format!(
                "({}, {} vars, degree {}) vs ({}, {} vars, degree {})",
                self.ctx, self.nvars, self.degree, other.ctx, other.nvars, other.degree
            )));
        }
        Ok(())
    }

    pub fn scale(&self, c: Fe) -> HomForm {
        let mut out = HomForm::zero(&self.ctx, self.nvars, self.degree);
        if c.is_zero() {
            return out;
        }
        out.terms = self
            .terms
            .iter()
            .map(|(m, &x)| (m.clone(), self.ctx.mul(x, c)))
            .collect();
        out
    }

    pub fn add(&self, other: &HomForm) -> Result<HomForm> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    /// Scales so that the leading coefficient is 1; the zero form is unchanged.
    pub fn normalized(&self) -> HomForm {
        match self.terms.iter().next_back() {
            Some((_, &lead)) => self.scale(self.ctx.inv(lead).expect("nonzero")),
            None => self.clone(),
        }
    }

    /// Evaluates at a point whose coordinates live in the form's own field.
    pub fn eval(&self, pt: &[Fe]) -> Result<Fe> {
        if pt.len() != self.nvars {
            return Err(Error::ShapeMismatch(format!(
                "point has {} coordinates, form has {} variables",
                pt.len(),
                self.nvars
            )));
        }
        Ok(self.eval_unchecked(pt))
    }

    pub(crate) fn eval_unchecked(&self, pt: &[Fe]) -> Fe {
        let ctx = &self.ctx;
        let d = self.degree as usize;
        let mut powers = vec![Fe::ONE; self.nvars * (d + 1)];
        for (i, &x) in pt.iter().enumerate() {
            for k in 1..=d {
                powers[i * (d + 1) + k] = ctx.mul(powers[i * (d + 1) + k - 1], x);
            }
        }
        self.terms.iter().fold(Fe::ZERO, |acc, (m, &c)| {
            let v = m
                .iter()
                .enumerate()
                .fold(c, |v, (i, &e)| ctx.mul(v, powers[i * (d + 1) + e as usize]));
            ctx.add(acc, v)
        })
    }

    /// Evaluates at a point with coordinates in an extension field.
    pub fn eval_in(&self, emb: &Embedding, pt: &[Fe]) -> Result<Fe> {
        self.lift(emb)?.eval(pt)
    }

    /// The same form with coefficients mapped into a larger field.
    pub fn lift(&self, emb: &Embedding) -> Result<HomForm> {
        if *emb.sub() != self.ctx {
            return Err(Error::IncompatibleFields(format!(
                "form over {} but embedding from {}",
                self.ctx,
                emb.sub()
            )));
        }
        Ok(HomForm {
            ctx: emb.sup().clone(),
            nvars: self.nvars,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(m, &c)| (m.clone(), emb.apply(c)))
                .collect(),
        })
    }

    /// Formal partial derivative in the form's characteristic.
    pub fn partial(&self, i: usize) -> Result<HomForm> {
        if i >= self.nvars {
            return Err(Error::IndexOutOfRange {
                index: i,
                limit: self.nvars,
            });
        }
        let mut out = HomForm::zero(&self.ctx, self.nvars, self.degree.saturating_sub(1));
        for (m, &c) in &self.terms {
            if m[i] == 0 {
                continue;
            }
            let k = self.ctx.from_int(m[i] as i64);
            let mut dm = m.clone();
            dm[i] -= 1;
            out.add_term(dm, self.ctx.mul(c, k));
        }
        Ok(out)
    }

    /// All partial derivatives, in variable order.
    pub fn gradient(&self) -> Vec<HomForm> {
        (0..self.nvars)
            .map(|i| self.partial(i).expect("index in range"))
            .collect()
    }

    /// Product with a monomial of any degree.
    pub fn mul_monomial(&self, mono: &[u16]) -> HomForm {
        let extra: u32 = mono.iter().map(|&e| e as u32).sum();
        HomForm {
            ctx: self.ctx.clone(),
            nvars: self.nvars,
            degree: self.degree + extra,
            terms: self
                .terms
                .iter()
                .map(|(m, &c)| (m.iter().zip(mono).map(|(a, b)| a + b).collect(), c))
                .collect(),
        }
    }

    /// `Σ x_i ∂F/∂x_i == d·F` as formal polynomials.
    pub fn euler_check(&self) -> bool {
        let mut lhs = HomForm::zero(&self.ctx, self.nvars, self.degree);
        for i in 0..self.nvars {
            let mut unit = vec![0u16; self.nvars];
            unit[i] = 1;
            let term = self.partial(i).expect("in range").mul_monomial(&unit);
            for (m, &c) in &term.terms {
                lhs.add_term(m.clone(), c);
            }
        }
        let rhs = self.scale(self.ctx.from_int(self.degree as i64));
        lhs == rhs
    }

    /// The binary form `F(s·A + t·B)`.
    pub fn restrict_to_line(&self, a: &[Fe], b: &[Fe]) -> Result<BiForm> {
        if a.len() != self.nvars || b.len() != self.nvars {
            return Err(Error::ShapeMismatch("line points have wrong length".into()));
        }
        if !independent_pair(&self.ctx, a, b) {
            return Err(Error::EqualPoints);
        }
        Ok(self.restrict_unchecked(a, b))
    }

    pub(crate) fn restrict_unchecked(&self, a: &[Fe], b: &[Fe]) -> BiForm {
        let ctx = &self.ctx;
        let d = self.degree as usize;
        // powers[i][k] = (a_i s + b_i t)^k
        let powers: Vec<Vec<BiForm>> = a
            .iter()
            .zip(b)
            .map(|(&ai, &bi)| {
                let lin = BiForm::new(ctx, vec![ai, bi]);
                let mut row = vec![BiForm::one(ctx)];
                for k in 1..=d {
                    let next = row[k - 1].mul(&lin);
                    row.push(next);
                }
                row
            })
            .collect();
        let mut acc = BiForm::zero(ctx, self.degree);
        for (m, &c) in &self.terms {
            let mut prod = BiForm::new(ctx, vec![c]);
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    prod = prod.mul(&powers[i][e as usize]);
                }
            }
            acc.add_assign(&prod);
        }
        acc
    }

    /// Parses text such as `"x0^2 + 3*x1*x2"`; `x, y, z, w` are accepted as
    /// aliases for `x0..x3`.
    pub fn parse(ctx: &FieldCtx, nvars: usize, text: &str) -> Result<HomForm> {
        let raw = parse_terms(ctx, text)?;
        let max_var = raw.iter().flat_map(|(m, _)| m.keys().copied()).max();
        if let Some(v) = max_var {
            if v >= nvars {
                return Err(Error::Parse(format!("variable x{v} out of range for {nvars} variables")));
            }
        }
        let degree = raw
            .iter()
            .find(|(_, c)| !c.is_zero())
            .or(raw.first())
            .map(|(m, _)| m.values().sum::<u32>())
            .unwrap_or(0);
        let terms = raw.into_iter().map(|(m, c)| {
            let mut e = vec![0u16; nvars];
            for (v, k) in m {
                e[v] = k as u16;
            }
            (e, c)
        });
        HomForm::from_terms(ctx, nvars, degree, terms).map_err(|e| match e {
            Error::WrongDegree { .. } => Error::Parse("form is not homogeneous".into()),
            other => other,
        })
    }

    /// Like [`HomForm::parse`], taking the number of variables from the
    /// highest variable index that appears (at least `min_vars`).
    pub fn parse_auto(ctx: &FieldCtx, min_vars: usize, text: &str) -> Result<HomForm> {
        let raw = parse_terms(ctx, text)?;
        let max_var = raw.iter().flat_map(|(m, _)| m.keys().copied()).max();
        let nvars = max_var.map_or(min_vars, |v| (v + 1).max(min_vars));
        HomForm::parse(ctx, nvars, text)
    }
}

impl fmt::Display for HomForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("x{i}") } else { format!("x{i}^{e}") })
                .collect();
            match (c.code(), vars.is_empty()) {
                (_, true) => write!(f, "{c}")?,
                (1, false) => write!(f, "{}", vars.join("*"))?,
                (_, false) => write!(f, "{c}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

/// `Σ a_i F_i`, with zero terms dropped.
pub fn lincomb(coeffs: &[Fe], forms: &[HomForm]) -> Result<HomForm> {
    if coeffs.len() != forms.len() || forms.is_empty() {
        return Err(Error::ShapeMismatch(format!(
            "{} coefficients for {} forms",
            coeffs.len(),
            forms.len()
        )));
    }
    let first = &forms[0];
    let mut out = HomForm::zero(&first.ctx, first.nvars, first.degree);
    for (&a, f) in coeffs.iter().zip(forms) {
        first.same_shape(f)?;
        if a.is_zero() {
            continue;
        }
        for (m, &c) in &f.terms {
            out.add_term(m.clone(), first.ctx.mul(a, c));
        }
    }
    Ok(out)
}

fn independent_pair(ctx: &FieldCtx, a: &[Fe], b: &[Fe]) -> bool {
    // 2x2 minors all vanish iff a, b are dependent
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let minor = ctx.sub(ctx.mul(a[i], b[j]), ctx.mul(a[j], b[i]));
            if !minor.is_zero() {
                return true;
            }
        }
    }
    false
}

type RawTerm = (BTreeMap<usize, u32>, Fe);

fn parse_terms(ctx: &FieldCtx, text: &str) -> Result<Vec<RawTerm>> {
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(Error::Parse("empty form".into()));
    }
    let mut out = Vec::new();
    let mut negative = false;
    let mut current = String::new();
    let mut flush = |current: &mut String, negative: bool| -> Result<()> {
        if current.is_empty() {
            return Err(Error::Parse(format!("empty term in {text:?}")));
        }
        let (m, mut c) = parse_term(ctx, current)?;
        if negative {
            c = ctx.neg(c);
        }
        out.push((m, c));
        current.clear();
        Ok(())
    };
    for (i, ch) in cleaned.char_indices() {
        if ch == '+' || ch == '-' {
            if i == 0 {
                negative = ch == '-';
                continue;
            }
            flush(&mut current, negative)?;
            negative = ch == '-';
        } else {
            current.push(ch);
        }
    }
    flush(&mut current, negative)?;
    Ok(out)
}

fn parse_term(ctx: &FieldCtx, term: &str) -> Result<RawTerm> {
    let mut mono = BTreeMap::new();
    let mut coeff = Fe::ONE;
    for factor in term.split('*') {
        if factor.is_empty() {
            return Err(Error::Parse(format!("empty factor in {term:?}")));
        }
        if factor.chars().next().unwrap().is_ascii_digit() {
            let code: u32 = factor
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient {factor:?}")))?;
            let c = ctx
                .elem(code)
                .map_err(|_| Error::Parse(format!("coefficient {code} is not below q = {}", ctx.q())))?;
            coeff = ctx.mul(coeff, c);
            continue;
        }
        let (var, exp) = match factor.split_once('^') {
            Some((v, e)) => (
                v,
                e.parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?,
            ),
            None => (factor, 1),
        };
        let idx = match var {
            "x" => 0,
            "y" => 1,
            "z" => 2,
            "w" => 3,
            v if v.starts_with('x') => v[1..]
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad variable {v:?}")))?,
            v => return Err(Error::Parse(format!("bad variable {v:?}"))),
        };
        *mono.entry(idx).or_insert(0) += exp;
    }
    Ok((mono, coeff))
}

/// Binary form in `(s, t)`; `coeffs[i]` is the coefficient of `s^(d-i) t^i`.
#[derive(Clone, PartialEq, Eq)]
pub struct BiForm {
    ctx: FieldCtx,
    coeffs: Vec<Fe>,
}

impl fmt::Debug for BiForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiForm({})", self)
    }
}

impl BiForm {
    /// Degree is `coeffs.len() - 1`.
    pub fn new(ctx: &FieldCtx, coeffs: Vec<Fe>) -> Self {
        assert!(!coeffs.is_empty(), "a binary form needs at least one coefficient");
        BiForm {
            ctx: ctx.clone(),
            coeffs,
        }
    }

    pub fn zero(ctx: &FieldCtx, degree: u32) -> Self {
        BiForm::new(ctx, vec![Fe::ZERO; degree as usize + 1])
    }

    pub fn one(ctx: &FieldCtx) -> Self {
        BiForm::new(ctx, vec![Fe::ONE])
    }

    /// `a·s + b·t`
    pub fn linear(ctx: &FieldCtx, a: Fe, b: Fe) -> Self {
        BiForm::new(ctx, vec![a, b])
    }

    pub fn degree(&self) -> u32 {
        self.coeffs.len() as u32 - 1
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, s: Fe, t: Fe) -> Fe {
        let ctx = &self.ctx;
        // Horner in t from the top coefficient; the i-th step picks up s^(d-i).
        let mut acc = Fe::ZERO;
        let mut spow = Fe::ONE;
        for &c in self.coeffs.iter().rev() {
            acc = ctx.add(ctx.mul(acc, t), ctx.mul(c, spow));
            spow = ctx.mul(spow, s);
        }
        acc
    }

    pub fn mul(&self, other: &BiForm) -> BiForm {
        let ctx = &self.ctx;
        let mut out = vec![Fe::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = ctx.add(out[i + j], ctx.mul(a, b));
            }
        }
        BiForm::new(ctx, out)
    }

    pub fn add(&self, other: &BiForm) -> Result<BiForm> {
        if self.degree() != other.degree() {
            return Err(Error::ShapeMismatch(format!(
                "binary forms of degree {} and {}",
                self.degree(),
                other.degree()
            )));
        }
        let mut out = self.clone();
        out.add_assign(other);
        Ok(out)
    }

    fn add_assign(&mut self, other: &BiForm) {
        for (x, &y) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *x = self.ctx.add(*x, y);
        }
    }

    pub fn neg(&self) -> BiForm {
        BiForm::new(&self.ctx, self.coeffs.iter().map(|&c| self.ctx.neg(c)).collect())
    }

    /// Number of `[s:t] ∈ P¹(F_q)` where the form vanishes (q+1 for the zero form).
    pub fn count_roots_p1(&self) -> usize {
        let ctx = &self.ctx;
        let d = self.degree() as usize;
        let mut count = usize::from(self.coeffs[d].is_zero()); // [0:1]
        for t in ctx.elements() {
            // value at [1:t] = Σ c_i t^i
            let v = self
                .coeffs
                .iter()
                .rev()
                .fold(Fe::ZERO, |acc, &c| ctx.add(ctx.mul(acc, t), c));
            if v.is_zero() {
                count += 1;
            }
        }
        count
    }
}

impl fmt::Display for BiForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree() as usize;
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut vars = Vec::new();
            match d - i {
                0 => {}
                1 => vars.push("s".to_string()),
                k => vars.push(format!("s^{k}")),
            }
            match i {
                0 => {}
                1 => vars.push("t".to_string()),
                k => vars.push(format!("t^{k}")),
            }
            match (c.code(), vars.is_empty()) {
                (_, true) => write!(f, "{c}")?,
                (1, false) => write!(f, "{}", vars.join("*"))?,
                _ => write!(f, "{c}*{}", vars.join("*"))?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Determinant of a square matrix of binary forms, each of degree 1, by
/// cofactor expansion along the first row.
pub fn det_linear_matrix(m: &[Vec<BiForm>]) -> Result<BiForm> {
    let k = m.len();
    if k == 0 {
        return Err(Error::ShapeMismatch("empty matrix".into()));
    }
    if m.iter().any(|row| row.len() != k) {
        return Err(Error::ShapeMismatch("matrix is not square".into()));
    }
    if m.iter().flatten().any(|e| e.degree() != 1) {
        return Err(Error::ShapeMismatch("entries must be linear in (s, t)".into()));
    }
    let cols: Vec<usize> = (0..k).collect();
    Ok(cofactor(m, 0, &cols))
}

fn cofactor(m: &[Vec<BiForm>], row: usize, cols: &[usize]) -> BiForm {
    let ctx = &m[0][0].ctx;
    if cols.len() == 1 {
        return m[row][cols[0]].clone();
    }
    let mut acc = BiForm::zero(ctx, cols.len() as u32);
    for (j, &c) in cols.iter().enumerate() {
        let entry = &m[row][c];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = entry.mul(&cofactor(m, row + 1, &rest));
        acc.add_assign(&if j % 2 == 0 { term } else { term.neg() });
    }
    acc
}
