//! Exact polynomial identities behind the conic maps.
//!
//! Generators of the image ideals are stored in `data/ideals.txt`. Each is
//! expanded after replacing every Plücker variable by the matching maximal
//! minor of the point matrix; a generator holds iff the result is zero.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactgeom::Rational;
use crate::tropical::{TropPlucker, TAXA};

const IDEAL_DATA: &str = include_str!("../data/ideals.txt");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("exponent vector of length {found}, expected {expected}")]
    Arity { expected: usize, found: usize },
    #[error("malformed column subset {0:?}")]
    MalformedSubset(Vec<usize>),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("no ideal named {0}")]
    UnknownIdeal(String),
    #[error("variables index {found}-subsets but the vector has k = {expected}")]
    VariableMismatch { expected: usize, found: usize },
}

/// Sparse polynomial with integer coefficients in a fixed number of variables.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Poly {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Poly {
        Poly::monomial(nvars, vec![0; nvars], c).expect("right length")
    }

    pub fn one(nvars: usize) -> Poly {
        Poly::constant(nvars, 1)
    }

    pub fn var(nvars: usize, i: usize) -> Poly {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Poly::monomial(nvars, e, 1).expect("right length")
    }

    pub fn monomial(nvars: usize, exps: Vec<u32>, c: impl Into<BigInt>) -> Result<Poly, VerifyError> {
        if exps.len() != nvars {
            return Err(VerifyError::Arity { expected: nvars, found: exps.len() });
        }
        let mut p = Poly::zero(nvars);
        p.add_term(exps, c.into());
        Ok(p)
    }

    fn add_term(&mut self, exps: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigInt> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn pow(&self, n: u32) -> Poly {
        (0..n).fold(Poly::one(self.nvars), |acc, _| &acc * self)
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x * c);
        }
        out
    }

    /// Copy with the sign of the `i`-th term (in exponent order) flipped.
    pub fn with_term_negated(&self, i: usize) -> Poly {
        let mut out = self.clone();
        if let Some((e, _)) = self.terms.iter().nth(i) {
            let c = out.terms.get_mut(e).expect("present");
            *c = -c.clone();
        }
        out
    }

    /// Evaluation at integer values.
    pub fn eval(&self, x: &[BigInt]) -> BigInt {
        self.terms.iter().fold(BigInt::zero(), |acc, (e, c)| {
            acc + e.iter().zip(x).fold(c.clone(), |m, (&k, v)| m * v.pow(k))
        })
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&BigInt::from(-1))
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count");
        let mut out = Poly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let sign = if c.is_negative() { "-" } else if i > 0 { "+" } else { "" };
            let mono = e
                .iter()
                .enumerate()
                .filter(|(_, k)| **k > 0)
                .map(|(v, k)| if *k == 1 { format!("v{v}") } else { format!("v{v}^{k}") })
                .join("*");
            let abs = c.abs();
            let body = match (abs.is_one(), mono.is_empty()) {
                (true, false) => mono,
                (_, true) => abs.to_string(),
                (false, false) => format!("{abs}*{mono}"),
            };
            write!(f, "{}{}{}", if i > 0 { " " } else { "" }, sign, body)?;
        }
        Ok(())
    }
}

/// Variable names for the point coordinates: `x0, x1, x2, y0, ...`.
pub fn point_variables(arity: usize) -> Vec<String> {
    ["x", "y", "z"][..arity]
        .iter()
        .flat_map(|p| (0..3).map(move |i| format!("{p}{i}")))
        .collect()
}

/// Determinant of the columns `subset` of the matrix whose row `r` lists
/// the six quadratic monomials in the coordinates of point `r`.
pub fn minor_poly(arity: usize, subset: &[usize]) -> Result<Poly, VerifyError> {
    let ok = (2..=3).contains(&arity)
        && subset.len() == arity
        && subset.iter().all(|&c| c < 6)
        && subset.iter().all_unique();
    if !ok {
        return Err(VerifyError::MalformedSubset(subset.to_vec()));
    }
    let n = 3 * arity;
    let entry = |r: usize, col: usize| {
        let (a, b) = TAXA[col];
        let mut e = vec![0u32; n];
        e[3 * r + a] += 1;
        e[3 * r + b] += 1;
        Poly::monomial(n, e, 1).expect("right length")
    };
    let mut det = Poly::zero(n);
    for perm in (0..arity).permutations(arity) {
        let inversions = perm.iter().tuple_combinations().filter(|(a, b)| a > b).count();
        let term = (0..arity).fold(Poly::one(n), |acc, r| &acc * &entry(r, subset[perm[r]]));
        det = if inversions % 2 == 0 { &det + &term } else { &det - &term };
    }
    Ok(det)
}

/// How a Plücker variable is replaced by a minor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SignConvention {
    /// `p_S` is the minor on columns `S`.
    PlainMinor,
    /// `p_S` is the minor times the sign of the shuffle `(S, complement)`.
    ComplementSign,
}

impl SignConvention {
    pub const ALL: [SignConvention; 2] = [SignConvention::PlainMinor, SignConvention::ComplementSign];

    pub fn name(self) -> &'static str {
        match self {
            SignConvention::PlainMinor => "plain-minor",
            SignConvention::ComplementSign => "complement-sign",
        }
    }

    fn sign(self, subset: &[usize]) -> i64 {
        match self {
            SignConvention::PlainMinor => 1,
            SignConvention::ComplementSign => {
                // inversions of the word S followed by its complement
                let moved: usize = subset.iter().enumerate().map(|(pos, &s)| s - pos).sum();
                if moved.is_multiple_of(2) {
                    1
                } else {
                    -1
                }
            }
        }
    }
}

/// A named ideal: generators over Plücker variables indexed by `k`-subsets.
#[derive(Clone, Debug)]
pub struct IdealSpec {
    pub name: String,
    pub k: usize,
    pub variables: Vec<Vec<usize>>,
    pub generators: Vec<Poly>,
    /// Source text of each generator.
    pub texts: Vec<String>,
}

impl IdealSpec {
    pub fn variable_name(subset: &[usize]) -> String {
        format!("p{}", subset.iter().join(""))
    }

    /// All ideals in the bundled data file.
    pub fn bundled() -> Result<Vec<IdealSpec>, VerifyError> {
        parse_ideals(IDEAL_DATA)
    }

    pub fn by_name(name: &str) -> Result<IdealSpec, VerifyError> {
        Self::bundled()?
            .into_iter()
            .find(|s| s.name == name)
            .ok_or_else(|| VerifyError::UnknownIdeal(name.to_string()))
    }

    pub fn i2() -> IdealSpec {
        Self::by_name("I2").expect("bundled")
    }

    pub fn i3_sample() -> IdealSpec {
        Self::by_name("I3sample").expect("bundled")
    }

    /// Plücker variable index sets of a monomial, with multiplicity.
    pub fn monomial_variables(&self, exps: &[u32]) -> Vec<&[usize]> {
        exps.iter()
            .enumerate()
            .flat_map(|(v, &k)| std::iter::repeat_n(self.variables[v].as_slice(), k as usize))
            .collect()
    }
}

/// Parses the `[name k]` / generator-per-line format of `data/ideals.txt`.
pub fn parse_ideals(text: &str) -> Result<Vec<IdealSpec>, VerifyError> {
    let mut out: Vec<IdealSpec> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let err = |msg: &str| VerifyError::Parse { line: lineno + 1, msg: msg.to_string() };
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(head) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            let (name, k) = head.split_whitespace().collect_tuple().ok_or_else(|| err("header"))?;
            let k: usize = k.parse().map_err(|_| err("subset size"))?;
            if !(1..=6).contains(&k) {
                return Err(err("subset size"));
            }
            let variables: Vec<Vec<usize>> = (0..6).combinations(k).collect();
            out.push(IdealSpec {
                name: name.to_string(),
                k,
                variables,
                generators: Vec::new(),
                texts: Vec::new(),
            });
            continue;
        }
        let spec = out.last_mut().ok_or_else(|| err("generator before header"))?;
        let poly = parse_poly(line, spec).map_err(|e| match e {
            VerifyError::Parse { msg, .. } => err(&msg),
            other => other,
        })?;
        spec.generators.push(poly);
        spec.texts.push(line.to_string());
    }
    Ok(out)
}

fn parse_poly(line: &str, spec: &IdealSpec) -> Result<Poly, VerifyError> {
    let n = spec.variables.len();
    let perr = |msg: String| VerifyError::Parse { line: 0, msg };
    let mut acc = Poly::zero(n);
    let mut sign = 1i64;
    let flush = |acc: &mut Poly, term: &str, sign: i64| -> Result<(), VerifyError> {
        let mut coeff = BigInt::from(sign);
        let mut exps = vec![0u32; n];
        for factor in term.split('*').map(str::trim) {
            if factor.is_empty() {
                return Err(perr(format!("empty factor in {term:?}")));
            }
            if let Ok(c) = factor.parse::<BigInt>() {
                coeff *= c;
                continue;
            }
            let (name, power) = match factor.split_once('^') {
                Some((v, p)) => (v, p.parse::<u32>().map_err(|_| perr(format!("power in {factor:?}")))?),
                None => (factor, 1),
            };
            let digits = name.strip_prefix('p').ok_or_else(|| VerifyError::UnknownVariable(name.into()))?;
            let idx: Vec<usize> = digits
                .chars()
                .map(|c| c.to_digit(10).map(|d| d as usize))
                .collect::<Option<_>>()
                .ok_or_else(|| VerifyError::UnknownVariable(name.into()))?;
            let v = spec
                .variables
                .iter()
                .position(|s| *s == idx)
                .ok_or_else(|| VerifyError::UnknownVariable(name.into()))?;
            exps[v] += power;
        }
        *acc = &*acc + &Poly::monomial(n, exps, coeff).expect("right length");
        Ok(())
    };
    let mut current = String::new();
    let mut first = true;
    for ch in line.chars() {
        match ch {
            '+' | '-' => {
                if !current.trim().is_empty() {
                    flush(&mut acc, current.trim(), sign)?;
                } else if !first {
                    return Err(perr("dangling operator".into()));
                }
                first = false;
                current.clear();
                sign = if ch == '-' { -1 } else { 1 };
            }
            c => current.push(c),
        }
    }
    if current.trim().is_empty() {
        return Err(perr("trailing operator or empty line".into()));
    }
    flush(&mut acc, current.trim(), sign)?;
    Ok(acc)
}

/// Replaces each Plücker variable of `g` by `sign · minor` and expands.
pub fn substitute_and_expand(
    spec: &IdealSpec,
    g: &Poly,
    convention: SignConvention,
) -> Result<Poly, VerifyError> {
    if g.nvars() != spec.variables.len() {
        return Err(VerifyError::Arity { expected: spec.variables.len(), found: g.nvars() });
    }
    let arity = spec.k;
    let n = 3 * arity;
    let mut minors: BTreeMap<usize, Poly> = BTreeMap::new();
    let mut out = Poly::zero(n);
    for (exps, c) in g.terms() {
        let mut term = Poly::constant(n, c.clone());
        for (v, &k) in exps.iter().enumerate() {
            if k == 0 {
                continue;
            }
            if let std::collections::btree_map::Entry::Vacant(e) = minors.entry(v) {
                let s = &spec.variables[v];
                e.insert(minor_poly(arity, s)?.scale(&BigInt::from(convention.sign(s))));
            }
            term = &term * &minors[&v].pow(k);
        }
        out = &out + &term;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorCheck {
    pub index: usize,
    pub text: String,
    /// Number of terms left after expansion.
    pub residual_terms: usize,
}

impl GeneratorCheck {
    pub fn vanishes(&self) -> bool {
        self.residual_terms == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealReport {
    pub name: String,
    pub convention: SignConvention,
    pub checks: Vec<GeneratorCheck>,
}

impl IdealReport {
    pub fn all_vanish(&self) -> bool {
        self.checks.iter().all(GeneratorCheck::vanishes)
    }

    pub fn failures(&self) -> Vec<&GeneratorCheck> {
        self.checks.iter().filter(|c| !c.vanishes()).collect()
    }
}

pub fn verify_ideal(spec: &IdealSpec, convention: SignConvention) -> Result<IdealReport, VerifyError> {
    let checks = spec
        .generators
        .iter()
        .zip(&spec.texts)
        .enumerate()
        .map(|(index, (g, text))| {
            Ok(GeneratorCheck {
                index,
                text: text.clone(),
                residual_terms: substitute_and_expand(spec, g, convention)?.len(),
            })
        })
        .collect::<Result<_, VerifyError>>()?;
    Ok(IdealReport { name: spec.name.clone(), convention, checks })
}

/// First convention under which every generator vanishes, with its report;
/// otherwise the report for each convention tried.
pub fn resolve_convention(spec: &IdealSpec) -> Result<Result<IdealReport, Vec<IdealReport>>, VerifyError> {
    let mut tried = Vec::new();
    for c in SignConvention::ALL {
        let r = verify_ideal(spec, c)?;
        if r.all_vanish() {
            return Ok(Ok(r));
        }
        tried.push(r);
    }
    Ok(Err(tried))
}

/// Flips one term of generator `index` and reports whether the expansion
/// then fails to vanish.
pub fn negative_control(
    spec: &IdealSpec,
    index: usize,
    convention: SignConvention,
) -> Result<bool, VerifyError> {
    let g = spec.generators[index].with_term_negated(0);
    Ok(!substitute_and_expand(spec, &g, convention)?.is_zero())
}

/// Whether the maximum over the monomials of `g` of the summed coordinates
/// of `p` is attained at least twice.
pub fn tropical_vanishing(spec: &IdealSpec, g: &Poly, p: &TropPlucker) -> Result<bool, VerifyError> {
    if spec.k != p.k() {
        return Err(VerifyError::VariableMismatch { expected: p.k(), found: spec.k });
    }
    if g.nvars() != spec.variables.len() {
        return Err(VerifyError::Arity { expected: spec.variables.len(), found: g.nvars() });
    }
    let values: Vec<Rational> = g
        .terms()
        .keys()
        .map(|e| {
            spec.monomial_variables(e)
                .into_iter()
                .fold(Rational::zero(), |acc, s| acc + p.get(s))
        })
        .collect();
    let Some(max) = values.iter().max() else {
        return Ok(true);
    };
    Ok(values.iter().filter(|v| *v == max).count() >= 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tropical::{trop_phi, Config};

    #[test]
    fn bundled_counts() {
        assert_eq!(IdealSpec::i2().generators.len(), 45);
        assert_eq!(IdealSpec::i2().variables.len(), 15);
        assert_eq!(IdealSpec::i3_sample().generators.len(), 2);
        assert_eq!(IdealSpec::i3_sample().variables.len(), 20);
    }

    #[test]
    fn two_by_two_minor() {
        // x0^2 y1^2 - x1^2 y0^2 over (x0,x1,x2,y0,y1,y2)
        let m = minor_poly(2, &[0, 1]).unwrap();
        let mut want = Poly::monomial(6, vec![2, 0, 0, 0, 2, 0], 1).unwrap();
        want = &want - &Poly::monomial(6, vec![0, 2, 0, 2, 0, 0], 1).unwrap();
        assert_eq!(m, want);
        assert!(minor_poly(2, &[1, 1]).is_err());
        assert!(minor_poly(3, &[0, 1]).is_err());
    }

    #[test]
    fn three_by_three_minor_has_six_terms() {
        let m = minor_poly(3, &[0, 1, 2]).unwrap();
        assert_eq!(m.len(), 6);
        assert_eq!(m.degree(), Some(6));
    }

    #[test]
    fn parse_and_substitute_single_variable() {
        let spec = parse_ideals("[T 2]\np01\n").unwrap().remove(0);
        let e = substitute_and_expand(&spec, &spec.generators[0], SignConvention::PlainMinor).unwrap();
        assert_eq!(e, minor_poly(2, &[0, 1]).unwrap());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_ideals("p01\n"), Err(VerifyError::Parse { .. })));
        assert!(matches!(parse_ideals("[T 2]\np01 +\n"), Err(VerifyError::Parse { .. })));
        assert!(matches!(parse_ideals("[T 2]\np07\n"), Err(VerifyError::UnknownVariable(_))));
        assert!(matches!(parse_ideals("[T 2]\nq01\n"), Err(VerifyError::UnknownVariable(_))));
        let s = parse_ideals("[T 2]\n-2*p01^2 + 3*p02\n").unwrap().remove(0);
        assert_eq!(s.generators[0].len(), 2);
    }

    #[test]
    fn complement_sign() {
        assert_eq!(SignConvention::ComplementSign.sign(&[0, 1]), 1);
        assert_eq!(SignConvention::ComplementSign.sign(&[0, 2]), -1);
        assert_eq!(SignConvention::ComplementSign.sign(&[1, 2]), 1);
        assert_eq!(SignConvention::ComplementSign.sign(&[2, 5]), 1);
        assert_eq!(SignConvention::ComplementSign.sign(&[1, 4]), 1);
        assert_eq!(SignConvention::ComplementSign.sign(&[1, 3]), -1);
        assert_eq!(SignConvention::PlainMinor.sign(&[2, 5]), 1);
    }

    #[test]
    fn three_point_sample_vanishes_with_plain_minors() {
        let r = verify_ideal(&IdealSpec::i3_sample(), SignConvention::PlainMinor).unwrap();
        assert!(r.all_vanish(), "{:?}", r.failures());
    }

    #[test]
    fn two_point_ideal_convention() {
        let spec = IdealSpec::i2();
        let r = resolve_convention(&spec).unwrap().expect("some convention works");
        assert_eq!(r.convention, SignConvention::PlainMinor);
        assert_eq!(r.checks.len(), 45);
        assert!(!verify_ideal(&spec, SignConvention::ComplementSign).unwrap().all_vanish());
    }

    #[test]
    fn corrupted_generator_is_caught() {
        let spec = IdealSpec::i3_sample();
        assert!(negative_control(&spec, 0, SignConvention::PlainMinor).unwrap());
    }

    #[test]
    fn tropical_vanishing_on_row1() {
        let spec = IdealSpec::i3_sample();
        let e = trop_phi(&Config::triple_ints(4, 3, 3, -1)).unwrap();
        assert!(tropical_vanishing(&spec, &spec.generators[0], &e.raw).unwrap());
        let single = Poly::var(20, 0);
        assert!(!tropical_vanishing(&spec, &single, &e.raw).unwrap());
        assert!(tropical_vanishing(&IdealSpec::i2(), &IdealSpec::i2().generators[0], &e.raw).is_err());
    }
}
