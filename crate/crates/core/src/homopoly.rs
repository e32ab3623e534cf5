//! Sparse homogeneous polynomials over `F_q`, degree patterns, Jacobian
//! minors and the four certificate test systems.
//!
//! Terms are kept sorted in descending graded-reverse-lexicographic order
//! with no zero coefficients; this is the canonical form used for
//! serialization and for indexing Macaulay matrix columns.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, Embedding, Field};

/// Exponent vector of a monomial. `Ord` is graded reverse lexicographic.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial(pub Vec<u16>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn var(nvars: usize, i: usize) -> Monomial {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self.divides(other)`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }

    /// All monomials of total degree `degree` in `nvars` variables, in
    /// descending grevlex order.
    pub fn all_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
        fn rec(out: &mut Vec<Monomial>, cur: &mut Vec<u16>, i: usize, left: u32) {
            if i + 1 == cur.len() {
                cur[i] = left as u16;
                out.push(Monomial(cur.clone()));
                return;
            }
            for e in (0..=left).rev() {
                cur[i] = e as u16;
                rec(out, cur, i + 1, left - e);
            }
        }
        if nvars == 0 {
            return if degree == 0 {
                vec![Monomial(Vec::new())]
            } else {
                Vec::new()
            };
        }
        let mut out = Vec::new();
        rec(&mut out, &mut vec![0; nvars], 0, degree);
        out.sort_by(|a, b| b.cmp(a));
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        for (a, b) in self.0.iter().zip(&other.0).rev() {
            if a != b {
                // Smaller exponent in the last differing variable wins.
                return b.cmp(a);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A homogeneous polynomial of fixed total degree. The zero polynomial keeps
/// its nominal degree so that it can occupy a slot of a system.
#[derive(Clone, PartialEq, Eq)]
pub struct HomoPoly {
    field: Field,
    nvars: usize,
    degree: u32,
    terms: Vec<(Monomial, Elem)>,
}

impl fmt::Debug for HomoPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HomoPoly[F_{}, deg {}]({})", self.field, self.degree, self.to_text())
    }
}

impl fmt::Display for HomoPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coeff = self.field.format_elem(*c);
            let vars: Vec<String> =
                m.0.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| if e == 1 { format!("X{i}") } else { format!("X{i}^{e}") })
                    .collect();
            match (coeff.as_str(), vars.is_empty()) {
                (_, true) => write!(f, "{coeff}")?,
                ("1", false) => write!(f, "{}", vars.join("*"))?,
                _ => write!(f, "{coeff}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

impl HomoPoly {
    pub fn zero(field: &Field, nvars: usize, degree: u32) -> HomoPoly {
        HomoPoly {
            field: field.clone(),
            nvars,
            degree,
            terms: Vec::new(),
        }
    }

    /// Builds a polynomial from possibly repeated, possibly zero terms.
    pub fn from_terms<I>(field: &Field, nvars: usize, degree: u32, terms: I) -> Result<HomoPoly>
    where
        I: IntoIterator<Item = (Monomial, Elem)>,
    {
        let mut acc: HashMap<Monomial, Elem> = HashMap::new();
        for (m, c) in terms {
            if m.nvars() != nvars {
                return Err(Error::ArityMismatch {
                    expected: nvars,
                    found: m.nvars(),
                });
            }
            if m.degree() != degree {
                return Err(Error::InhomogeneousInput(format!(
                    "term of degree {} in a form of degree {degree}",
                    m.degree()
                )));
            }
            let e = acc.entry(m).or_insert(Elem::ZERO);
            *e = field.add(*e, c);
        }
        Ok(Self::from_map(field, nvars, degree, acc))
    }

    fn from_map(field: &Field, nvars: usize, degree: u32, acc: HashMap<Monomial, Elem>) -> HomoPoly {
        let mut terms: Vec<(Monomial, Elem)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        HomoPoly {
            field: field.clone(),
            nvars,
            degree,
            terms,
        }
    }

    pub fn var(field: &Field, nvars: usize, i: usize) -> HomoPoly {
        HomoPoly {
            field: field.clone(),
            nvars,
            degree: 1,
            terms: vec![(Monomial::var(nvars, i), Elem::ONE)],
        }
    }

    pub fn monomial(field: &Field, m: Monomial, c: Elem) -> HomoPoly {
        let degree = m.degree();
        let nvars = m.nvars();
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        HomoPoly {
            field: field.clone(),
            nvars,
            degree,
            terms,
        }
    }

    /// Polynomial with coefficient `coeffs[j]` on the j-th monomial of
    /// [`Monomial::all_of_degree`].
    pub fn from_dense(field: &Field, nvars: usize, degree: u32, coeffs: &[Elem]) -> HomoPoly {
        let monos = Monomial::all_of_degree(nvars, degree);
        assert_eq!(monos.len(), coeffs.len(), "dense coefficient vector length");
        let terms = monos
            .into_iter()
            .zip(coeffs.iter().copied())
            .filter(|(_, c)| !c.is_zero())
            .collect();
        HomoPoly {
            field: field.clone(),
            nvars,
            degree,
            terms,
        }
    }

    /// Dense coefficient vector in the order of [`Monomial::all_of_degree`].
    pub fn to_dense(&self) -> Vec<Elem> {
        Monomial::all_of_degree(self.nvars, self.degree)
            .iter()
            .map(|m| self.coeff(m))
            .collect()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &[(Monomial, Elem)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Elem {
        self.terms
            .binary_search_by(|(t, _)| m.cmp(t))
            .map(|i| self.terms[i].1)
            .unwrap_or(Elem::ZERO)
    }

    pub fn leading(&self) -> Option<&(Monomial, Elem)> {
        self.terms.first()
    }

    fn check_compatible(&self, other: &HomoPoly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::MixedFields);
        }
        if self.nvars != other.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &HomoPoly) -> Result<HomoPoly> {
        self.check_compatible(other)?;
        if self.is_zero() {
            return Ok(if other.is_zero() { self.clone() } else { other.clone() });
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.degree != other.degree {
            return Err(Error::InhomogeneousInput(format!(
                "adding forms of degree {} and {}",
                self.degree, other.degree
            )));
        }
        let f = &self.field;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => b.0.cmp(&a.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = f.add(self.terms[i].1, other.terms[j].1);
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(HomoPoly {
            field: f.clone(),
            nvars: self.nvars,
            degree: self.degree,
            terms: out,
        })
    }

    pub fn neg(&self) -> HomoPoly {
        self.scale(self.field.neg(Elem::ONE))
    }

    pub fn sub(&self, other: &HomoPoly) -> Result<HomoPoly> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: Elem) -> HomoPoly {
        let f = &self.field;
        let terms = if c.is_zero() {
            Vec::new()
        } else {
            self.terms.iter().map(|(m, a)| (m.clone(), f.mul(*a, c))).collect()
        };
        HomoPoly {
            field: f.clone(),
            nvars: self.nvars,
            degree: self.degree,
            terms,
        }
    }

    pub fn mul(&self, other: &HomoPoly) -> Result<HomoPoly> {
        self.check_compatible(other)?;
        let f = &self.field;
        let mut acc: HashMap<Monomial, Elem> = HashMap::new();
        for (ma, a) in &self.terms {
            for (mb, b) in &other.terms {
                let e = acc.entry(ma.mul(mb)).or_insert(Elem::ZERO);
                *e = f.add(*e, f.mul(*a, *b));
            }
        }
        Ok(Self::from_map(f, self.nvars, self.degree + other.degree, acc))
    }

    /// Multiplies by a monomial.
    pub fn shift(&self, m: &Monomial) -> HomoPoly {
        let terms = self.terms.iter().map(|(t, c)| (t.mul(m), *c)).collect();
        HomoPoly {
            field: self.field.clone(),
            nvars: self.nvars,
            degree: self.degree + m.degree(),
            terms,
        }
    }

    /// Formal partial derivative with respect to `X_j`; exponents are
    /// reduced mod p, so terms can vanish in positive characteristic.
    pub fn derivative(&self, j: usize) -> Result<HomoPoly> {
        if j >= self.nvars {
            return Err(Error::IndexOutOfRange {
                index: j,
                lo: 0,
                hi: self.nvars.saturating_sub(1),
            });
        }
        let f = &self.field;
        let degree = self.degree.saturating_sub(1);
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let e = m.0[j];
            if e == 0 {
                continue;
            }
            let factor = f.from_int(e as i64);
            let c = f.mul(*c, factor);
            if c.is_zero() {
                continue;
            }
            let mut exps = m.0.clone();
            exps[j] -= 1;
            terms.push((Monomial(exps), c));
        }
        // Lowering one exponent keeps the grevlex order of distinct terms.
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        Ok(HomoPoly {
            field: f.clone(),
            nvars: self.nvars,
            degree,
            terms,
        })
    }

    /// Value at a point with coordinates in the polynomial's own field.
    pub fn eval(&self, x: &[Elem]) -> Result<Elem> {
        if x.len() != self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                found: x.len(),
            });
        }
        Ok(eval_terms(&self.field, &self.terms, self.degree, x, |c| c))
    }

    /// Value at a point with coordinates in an extension field.
    pub fn eval_in(&self, emb: &Embedding, x: &[Elem]) -> Result<Elem> {
        if emb.source() != &self.field {
            return Err(Error::IncompatibleFields(format!(
                "embedding source F_{} differs from polynomial field F_{}",
                emb.source(),
                self.field
            )));
        }
        if x.len() != self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                found: x.len(),
            });
        }
        Ok(eval_terms(emb.target(), &self.terms, self.degree, x, |c| emb.apply(c)))
    }

    /// The same polynomial with coefficients mapped into an extension.
    pub fn embed(&self, emb: &Embedding) -> Result<HomoPoly> {
        if emb.source() != &self.field {
            return Err(Error::IncompatibleFields("embedding source differs".into()));
        }
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), emb.apply(*c))).collect();
        Ok(HomoPoly {
            field: emb.target().clone(),
            nvars: self.nvars,
            degree: self.degree,
            terms,
        })
    }

    /// `f(A x)`: substitutes `X_i -> sum_j a[i][j] X_j`.
    pub fn substitute_linear(&self, a: &[Vec<Elem>]) -> Result<HomoPoly> {
        if a.len() != self.nvars || a.iter().any(|r| r.len() != self.nvars) {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                found: a.len(),
            });
        }
        let f = &self.field;
        let images: Vec<HomoPoly> = a
            .iter()
            .map(|row| {
                HomoPoly::from_terms(
                    f,
                    self.nvars,
                    1,
                    row.iter().enumerate().map(|(j, &c)| (Monomial::var(self.nvars, j), c)),
                )
            })
            .collect::<Result<_>>()?;
        let mut out = HomoPoly::zero(f, self.nvars, self.degree);
        for (m, c) in &self.terms {
            let mut term = HomoPoly::monomial(f, Monomial(vec![0; self.nvars]), *c);
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    term = term.mul(&images[i])?;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Divides by the leading coefficient; returns `None` for zero.
    pub fn normalized(&self) -> Option<HomoPoly> {
        let (_, lc) = self.leading()?;
        let inv = self.field.inv(*lc).ok()?;
        Some(self.scale(inv))
    }

    /// Exact division test: `Some(quotient)` if `divisor` divides `self`.
    pub fn divide_exact(&self, divisor: &HomoPoly) -> Result<Option<HomoPoly>> {
        self.check_compatible(divisor)?;
        let Some((lm, lc)) = divisor.leading().cloned() else {
            return Err(Error::DivisionByZero);
        };
        if divisor.degree > self.degree {
            return Ok(if self.is_zero() {
                Some(HomoPoly::zero(&self.field, self.nvars, 0))
            } else {
                None
            });
        }
        let f = &self.field;
        let lc_inv = f.inv(lc)?;
        let qdeg = self.degree - divisor.degree;
        let mut rem = self.clone();
        let mut quot = HomoPoly::zero(f, self.nvars, qdeg);
        while let Some((m, c)) = rem.leading().cloned() {
            if !lm.divides(&m) {
                return Ok(None);
            }
            let t = HomoPoly::monomial(f, lm.quotient_of(&m), f.mul(c, lc_inv));
            rem = rem.sub(&divisor.mul(&t)?)?;
            quot = quot.add(&t)?;
        }
        Ok(Some(quot))
    }

    /// Parses `c:e0,e1,... + c:e0,... ` (coefficients may be `c0|c1|...`).
    /// An empty string or `0` is rejected because it carries no degree; the
    /// zero form of degree d is written `0:d,0,...,0`.
    pub fn parse(text: &str, field: &Field, nvars: usize) -> Result<HomoPoly> {
        let mut terms = Vec::new();
        let mut degree: Option<u32> = None;
        for raw in text.split('+') {
            let raw = raw.trim();
            let (c, e) = raw.split_once(':').ok_or_else(|| Error::Parse {
                line: 0,
                msg: format!("expected c:e0,...,en, got {raw:?}"),
            })?;
            let coeff = field.parse_elem(c)?;
            let exps: Vec<u16> = e
                .split(',')
                .map(|t| t.trim().parse::<u16>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Parse {
                    line: 0,
                    msg: format!("bad exponent vector {e:?}"),
                })?;
            if exps.len() != nvars {
                return Err(Error::ArityMismatch {
                    expected: nvars,
                    found: exps.len(),
                });
            }
            let m = Monomial(exps);
            match degree {
                None => degree = Some(m.degree()),
                Some(d) if d != m.degree() => {
                    return Err(Error::InhomogeneousInput(format!(
                        "terms of degree {d} and {} in one form",
                        m.degree()
                    )))
                }
                _ => {}
            }
            terms.push((m, coeff));
        }
        let degree = degree.ok_or(Error::EmptyInput)?;
        HomoPoly::from_terms(field, nvars, degree, terms)
    }

    /// Canonical text form accepted by [`HomoPoly::parse`].
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            let mut e = vec!["0".to_string(); self.nvars.max(1)];
            e[0] = self.degree.to_string();
            return format!("{}:{}", self.field.format_elem(Elem::ZERO), e.join(","));
        }
        self.terms
            .iter()
            .map(|(m, c)| {
                let e: Vec<String> = m.0.iter().map(|x| x.to_string()).collect();
                format!("{}:{}", self.field.format_elem(*c), e.join(","))
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

fn eval_terms(field: &Field, terms: &[(Monomial, Elem)], degree: u32, x: &[Elem], map: impl Fn(Elem) -> Elem) -> Elem {
    let pows: Vec<Vec<Elem>> = x
        .iter()
        .map(|&xi| {
            let mut v = Vec::with_capacity(degree as usize + 1);
            let mut cur = Elem::ONE;
            for _ in 0..=degree {
                v.push(cur);
                cur = field.mul(cur, xi);
            }
            v
        })
        .collect();
    terms.iter().fold(Elem::ZERO, |acc, (m, c)| {
        let t =
            m.0.iter()
                .enumerate()
                .fold(map(*c), |t, (i, &e)| field.mul(t, pows[i][e as usize]));
        field.add(acc, t)
    })
}

/// Determinant of a square matrix of polynomials by cofactor expansion along
/// the first row. `degree` is the nominal degree of the result.
pub fn poly_determinant(m: &[Vec<HomoPoly>], field: &Field, nvars: usize, degree: u32) -> Result<HomoPoly> {
    let n = m.len();
    if n == 0 {
        return Ok(HomoPoly::monomial(field, Monomial(vec![0; nvars]), Elem::ONE));
    }
    if n == 1 {
        let mut r = m[0][0].clone();
        if r.is_zero() {
            r.degree = degree;
        }
        return Ok(r);
    }
    let mut acc = HomoPoly::zero(field, nvars, degree);
    for col in 0..n {
        if m[0][col].is_zero() {
            continue;
        }
        let minor: Vec<Vec<HomoPoly>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != col)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let sub_degree = degree - m[0][col].degree();
        let sub = poly_determinant(&minor, field, nvars, sub_degree)?;
        let mut term = m[0][col].mul(&sub)?;
        if col % 2 == 1 {
            term = term.neg();
        }
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// The ambient dimension `n`, number of forms `s` and the nonincreasing
/// degree tuple `d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DegreePattern {
    n: usize,
    d: Vec<u32>,
}

impl DegreePattern {
    pub fn new(n: usize, d: Vec<u32>) -> Result<DegreePattern> {
        let s = d.len();
        if s == 0 || s >= n {
            return Err(Error::PatternViolation(format!("need 0 < s < n, got s={s}, n={n}")));
        }
        if d.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::PatternViolation(format!("degrees {d:?} are not nonincreasing")));
        }
        if d[s - 1] < 1 {
            return Err(Error::PatternViolation("degrees must be positive".into()));
        }
        if d[0] < 2 {
            return Err(Error::PatternViolation(
                "d_1 >= 2 required (all-linear systems are excluded)".into(),
            ));
        }
        Ok(DegreePattern { n, d })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.d.len()
    }

    pub fn degrees(&self) -> &[u32] {
        &self.d
    }

    pub fn nvars(&self) -> usize {
        self.n + 1
    }

    /// Bezout number `d_1 ... d_s`.
    pub fn delta(&self) -> u64 {
        self.d.iter().map(|&x| x as u64).product()
    }

    /// `sum (d_i - 1)`, the degree of every Jacobian minor.
    pub fn sigma(&self) -> u32 {
        self.d.iter().map(|&x| x - 1).sum()
    }
}

impl fmt::Display for DegreePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d: Vec<String> = self.d.iter().map(|x| x.to_string()).collect();
        write!(f, "n={} d=({})", self.n, d.join(","))
    }
}

/// A system `f = (f_1, ..., f_s)` of nonzero forms matching a degree pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySystem {
    pattern: DegreePattern,
    forms: Vec<HomoPoly>,
}

impl PolySystem {
    /// Forms are stably reordered by nonincreasing degree; the pattern is
    /// read off the forms.
    pub fn new(n: usize, mut forms: Vec<HomoPoly>) -> Result<PolySystem> {
        let first = forms.first().ok_or(Error::EmptyInput)?;
        let field = first.field().clone();
        for f in &forms {
            if f.field() != &field {
                return Err(Error::MixedFields);
            }
            if f.nvars() != n + 1 {
                return Err(Error::ArityMismatch {
                    expected: n + 1,
                    found: f.nvars(),
                });
            }
            if f.is_zero() {
                return Err(Error::PatternViolation("forms of a system must be nonzero".into()));
            }
        }
        forms.sort_by_key(|f| std::cmp::Reverse(f.degree()));
        let pattern = DegreePattern::new(n, forms.iter().map(|f| f.degree()).collect())?;
        Ok(PolySystem { pattern, forms })
    }

    pub fn pattern(&self) -> &DegreePattern {
        &self.pattern
    }

    pub fn forms(&self) -> &[HomoPoly] {
        &self.forms
    }

    pub fn field(&self) -> &Field {
        self.forms[0].field()
    }

    /// Text in the system file format.
    pub fn to_file_text(&self) -> String {
        write_system_file(self.field(), self.pattern.nvars(), &self.forms)
    }

    pub fn from_file_text(text: &str) -> Result<PolySystem> {
        let (_, nvars, forms) = parse_system_file(text)?;
        PolySystem::new(nvars - 1, forms)
    }

    /// Canonical single-line serialization used in run records.
    pub fn canonical(&self) -> String {
        self.forms.iter().map(|f| f.to_text()).collect::<Vec<_>>().join(" ; ")
    }
}

/// Writes the line-based system file format.
pub fn write_system_file(field: &Field, nvars: usize, forms: &[HomoPoly]) -> String {
    let mut out = format!("field {field}");
    if field.degree() > 1 {
        let default = Field::new(field.characteristic(), field.degree(), None).expect("valid field");
        if default.modulus() != field.modulus() {
            let m: Vec<String> = field.modulus().iter().map(|c| c.to_string()).collect();
            out.push_str(&format!(" modulus {}", m.join(",")));
        }
    }
    out.push_str(&format!("\nnvars {nvars}\n"));
    for (i, f) in forms.iter().enumerate() {
        out.push_str(&format!("poly {}: {}\n", i + 1, f.to_text()));
    }
    out
}

/// Parses the system file format, returning the field, the variable count
/// and the forms in file order. Blank lines and `#` comments are skipped.
pub fn parse_system_file(text: &str) -> Result<(Field, usize, Vec<HomoPoly>)> {
    let at = |line: usize, e: Error| match e {
        Error::Parse { msg, .. } => Error::Parse { line, msg },
        other => Error::Parse {
            line,
            msg: other.to_string(),
        },
    };
    let mut field: Option<Field> = None;
    let mut nvars: Option<usize> = None;
    let mut forms: Vec<(usize, HomoPoly)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("field ") {
            let rest = rest.trim();
            let (spec, modulus) = match rest.split_once("modulus") {
                Some((s, m)) => (s.trim(), Some(m.trim())),
                None => (rest, None),
            };
            let f = match modulus {
                None => Field::from_spec(spec).map_err(|e| at(line_no, e))?,
                Some(m) => {
                    let coeffs: Vec<u64> = m
                        .split(',')
                        .map(|t| t.trim().parse::<u64>())
                        .collect::<std::result::Result<_, _>>()
                        .map_err(|_| Error::Parse {
                            line: line_no,
                            msg: format!("bad modulus {m:?}"),
                        })?;
                    let base = Field::from_spec(spec).map_err(|e| at(line_no, e))?;
                    Field::new(base.characteristic(), base.degree(), Some(&coeffs)).map_err(|e| at(line_no, e))?
                }
            };
            field = Some(f);
        } else if let Some(rest) = line.strip_prefix("nvars ") {
            let v = rest.trim().parse::<usize>().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("bad nvars {rest:?}"),
            })?;
            nvars = Some(v);
        } else if let Some(rest) = line.strip_prefix("poly ") {
            let f = field.as_ref().ok_or_else(|| Error::Parse {
                line: line_no,
                msg: "poly before field line".into(),
            })?;
            let nv = nvars.ok_or_else(|| Error::Parse {
                line: line_no,
                msg: "poly before nvars line".into(),
            })?;
            let (index, body) = rest.split_once(':').ok_or_else(|| Error::Parse {
                line: line_no,
                msg: "expected `poly <i>: terms`".into(),
            })?;
            let index = index.trim().parse::<usize>().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("bad poly index {index:?}"),
            })?;
            if forms.iter().any(|(i, _)| *i == index) {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("duplicate poly {index}"),
                });
            }
            let p = HomoPoly::parse(body, f, nv).map_err(|e| at(line_no, e))?;
            forms.push((index, p));
        } else {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("unrecognized line {line:?}"),
            });
        }
    }
    let field = field.ok_or(Error::Parse {
        line: 0,
        msg: "missing field line".into(),
    })?;
    let nvars = nvars.ok_or(Error::Parse {
        line: 0,
        msg: "missing nvars line".into(),
    })?;
    forms.sort_by_key(|(i, _)| *i);
    Ok((field, nvars, forms.into_iter().map(|(_, p)| p).collect()))
}

/// The four certificates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Certificate {
    /// Set-theoretic complete intersection.
    Stci,
    /// Ideal-theoretic complete intersection.
    Ci,
    /// Nonsingular complete intersection.
    Nons,
    /// Absolutely irreducible complete intersection.
    Irr,
}

impl Certificate {
    pub const ALL: [Certificate; 4] = [Certificate::Stci, Certificate::Ci, Certificate::Nons, Certificate::Irr];

    pub fn as_str(self) -> &'static str {
        match self {
            Certificate::Stci => "stci",
            Certificate::Ci => "ci",
            Certificate::Nons => "nons",
            Certificate::Irr => "irr",
        }
    }

    /// What a passing certificate guarantees about `Z(f)`.
    pub fn guarantee(self) -> &'static str {
        match self {
            Certificate::Stci => {
                "Z(f) is a set-theoretic complete intersection of pure dimension n-s; f is a regular sequence"
            }
            Certificate::Ci => {
                "Z(f) is an ideal-theoretic complete intersection of dimension n-s and degree d_1...d_s; (f) is radical"
            }
            Certificate::Nons => "Z(f) is a nonsingular complete intersection",
            Certificate::Irr => "Z(f) is an absolutely irreducible complete intersection",
        }
    }

    /// Parses a comma list of names, or `all`.
    pub fn parse_list(s: &str) -> Result<Vec<Certificate>> {
        if s.trim() == "all" {
            return Ok(Certificate::ALL.to_vec());
        }
        s.split(',').map(|t| t.trim().parse()).collect()
    }
}

impl FromStr for Certificate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stci" => Ok(Certificate::Stci),
            "ci" => Ok(Certificate::Ci),
            "nons" => Ok(Certificate::Nons),
            "irr" => Ok(Certificate::Irr),
            other => Err(Error::UnsupportedCertificate(other.to_string())),
        }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `n+1` forms in `n+1` variables derived from a system for one certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestSystem {
    pub cert: Option<Certificate>,
    pub forms: Vec<HomoPoly>,
}

impl TestSystem {
    /// A raw list of forms, not tied to a certificate.
    pub fn raw(forms: Vec<HomoPoly>) -> TestSystem {
        TestSystem { cert: None, forms }
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.forms.iter().map(|f| f.degree()).collect()
    }
}

/// `det(df_i/dX_j : 1 <= i <= s, j in {1, ..., s-1, k-1})` for `s+1 <= k <= n+1`.
pub fn jacobian_minor(sys: &PolySystem, k: usize) -> Result<HomoPoly> {
    let pat = sys.pattern();
    let (n, s) = (pat.n(), pat.s());
    if k < s + 1 || k > n + 1 {
        return Err(Error::IndexOutOfRange {
            index: k,
            lo: s + 1,
            hi: n + 1,
        });
    }
    let columns: Vec<usize> = (1..s).chain(std::iter::once(k - 1)).collect();
    let matrix: Vec<Vec<HomoPoly>> = sys
        .forms()
        .iter()
        .map(|f| columns.iter().map(|&j| f.derivative(j)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    poly_determinant(&matrix, sys.field(), pat.nvars(), pat.sigma())
}

/// The Jacobian determinant with respect to `X_1, ..., X_s`.
pub fn jacobian_det(sys: &PolySystem) -> HomoPoly {
    jacobian_minor(sys, sys.pattern().s() + 1).expect("s+1 is always in range")
}

/// Derives the `n+1` forms whose common projective zero set must be empty
/// for the certificate to pass.
pub fn build_test_system(sys: &PolySystem, cert: Certificate) -> Result<TestSystem> {
    let pat = sys.pattern();
    let (n, s) = (pat.n(), pat.s());
    if pat.sigma() == 0 {
        return Err(Error::PatternViolation("sigma = 0".into()));
    }
    let field = sys.field();
    let nv = pat.nvars();
    let vars = |range: std::ops::RangeInclusive<usize>| range.map(|i| HomoPoly::var(field, nv, i));
    let mut forms: Vec<HomoPoly> = sys.forms().to_vec();
    match cert {
        Certificate::Stci => forms.extend(vars(s..=n)),
        Certificate::Ci => {
            forms.push(jacobian_det(sys));
            forms.extend(vars(s + 1..=n));
        }
        Certificate::Nons => {
            for k in s + 1..=n + 1 {
                forms.push(jacobian_minor(sys, k)?);
            }
        }
        Certificate::Irr => {
            if n < s + 1 {
                return Err(Error::PatternViolation("irr needs n >= s+1".into()));
            }
            forms.push(jacobian_minor(sys, s + 1)?);
            forms.push(jacobian_minor(sys, s + 2)?);
            forms.extend(vars(s + 2..=n));
        }
    }
    debug_assert_eq!(forms.len(), n + 1);
    Ok(TestSystem {
        cert: Some(cert),
        forms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    fn poly(text: &str, field: &Field, nvars: usize) -> HomoPoly {
        HomoPoly::parse(text, field, nvars).unwrap()
    }

    #[test]
    fn grevlex_order() {
        // x0^2 > x0x1 > x1^2 > x0x2 > x1x2 > x2^2
        let monos = Monomial::all_of_degree(3, 2);
        let expect: Vec<Vec<u16>> = vec![
            vec![2, 0, 0],
            vec![1, 1, 0],
            vec![0, 2, 0],
            vec![1, 0, 1],
            vec![0, 1, 1],
            vec![0, 0, 2],
        ];
        assert_eq!(monos.into_iter().map(|m| m.0).collect::<Vec<_>>(), expect);
    }

    #[test]
    fn parse_examples() {
        let f3 = f(3);
        let p = poly("1:2,0,0 + 1:0,1,1", &f3, 3);
        assert_eq!(p.degree(), 2);
        assert_eq!(p.terms().len(), 2);
        assert_eq!(p.to_string(), "X0^2 + X1*X2");
        let z = poly("2:1,1 + 1:1,1", &f3, 2);
        assert!(z.is_zero());
        assert_eq!(z.degree(), 2);
        assert!(matches!(
            HomoPoly::parse("1:2,0 + 1:1,0", &f3, 2),
            Err(Error::InhomogeneousInput(_))
        ));
        assert!(matches!(
            HomoPoly::parse("1:2,0,0", &f3, 2),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn eval_examples() {
        let f3 = f(3);
        let p = poly("1:2,0,0 + 1:0,1,1", &f3, 3);
        assert_eq!(
            p.eval(&[f3.from_int(1), Elem::ZERO, Elem::ZERO]).unwrap(),
            f3.from_int(1)
        );
        assert_eq!(
            p.eval(&[Elem::ZERO, f3.from_int(1), f3.from_int(2)]).unwrap(),
            f3.from_int(2)
        );
        let z = HomoPoly::zero(&f3, 3, 2);
        assert_eq!(
            z.eval(&[f3.from_int(1), f3.from_int(2), f3.from_int(1)]).unwrap(),
            Elem::ZERO
        );
        assert!(matches!(p.eval(&[Elem::ZERO]), Err(Error::ArityMismatch { .. })));
        let f9 = Field::new(3, 2, None).unwrap();
        let f4 = Field::new(2, 2, None).unwrap();
        let emb = f3.embed_into(&f9).unwrap();
        let i = f9.from_coeffs(&[0, 1]).unwrap(); // i^2 = -1
                                                  // X0^2 + X1 X2 at (i, 1, 1) = -1 + 1 = 0
        assert_eq!(p.eval_in(&emb, &[i, Elem::ONE, Elem::ONE]).unwrap(), Elem::ZERO);
        let bad = f(2).embed_into(&f4).unwrap();
        assert!(matches!(
            p.eval_in(&bad, &[Elem::ONE; 3]),
            Err(Error::IncompatibleFields(_))
        ));
    }

    fn example_system(field: &Field) -> PolySystem {
        // f = (X1 X2 + X0 X3, X1 X3), n = 3
        PolySystem::new(
            3,
            vec![poly("1:0,1,1,0 + 1:1,0,0,1", field, 4), poly("1:0,1,0,1", field, 4)],
        )
        .unwrap()
    }

    #[test]
    fn jacobian_minor_examples() {
        let f5 = f(5);
        let sys = example_system(&f5);
        let j3 = jacobian_minor(&sys, 3).unwrap();
        assert_eq!(j3, poly("-1:0,1,0,1", &f5, 4));
        let j4 = jacobian_minor(&sys, 4).unwrap();
        assert_eq!(j4, poly("1:0,1,1,0 + -1:1,0,0,1", &f5, 4));
        assert!(matches!(jacobian_minor(&sys, 2), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(jacobian_minor(&sys, 5), Err(Error::IndexOutOfRange { .. })));

        let f2 = f(2);
        let conic = PolySystem::new(2, vec![poly("1:2,0,0 + 1:0,1,1", &f2, 3)]).unwrap();
        assert_eq!(jacobian_minor(&conic, 2).unwrap(), HomoPoly::var(&f2, 3, 2));
    }

    #[test]
    fn jacobian_det_examples() {
        let f5 = f(5);
        let sys = example_system(&f5);
        assert_eq!(jacobian_det(&sys), jacobian_minor(&sys, 3).unwrap());
        let cube = PolySystem::new(2, vec![poly("1:3,0,0", &f5, 3)]).unwrap();
        let j = jacobian_det(&cube);
        assert!(j.is_zero());
        assert_eq!(j.degree(), 2);
        let sq = PolySystem::new(3, vec![poly("1:0,2,0,0", &f5, 4), poly("1:0,0,2,0", &f5, 4)]).unwrap();
        assert_eq!(jacobian_det(&sq), poly("4:0,1,1,0", &f5, 4));
    }

    #[test]
    fn test_system_recipes() {
        let f3 = f(3);
        let conic = PolySystem::new(2, vec![poly("1:2,0,0 + 1:0,1,1", &f3, 3)]).unwrap();
        let stci = build_test_system(&conic, Certificate::Stci).unwrap();
        assert_eq!(stci.forms[1], HomoPoly::var(&f3, 3, 1));
        assert_eq!(stci.forms[2], HomoPoly::var(&f3, 3, 2));
        let nons = build_test_system(&conic, Certificate::Nons).unwrap();
        assert_eq!(nons.forms[1], HomoPoly::var(&f3, 3, 2));
        assert_eq!(nons.forms[2], HomoPoly::var(&f3, 3, 1));

        let sys = example_system(&f3);
        let ci = build_test_system(&sys, Certificate::Ci).unwrap();
        assert_eq!(ci.degrees(), vec![2, 2, 2, 1]);
        assert_eq!(ci.forms[2], poly("-1:0,1,0,1", &f3, 4));
        assert_eq!(ci.forms[3], HomoPoly::var(&f3, 4, 3));
        let irr = build_test_system(&sys, Certificate::Irr).unwrap();
        assert_eq!(irr.degrees(), vec![2, 2, 2, 2]);
        let nons = build_test_system(&sys, Certificate::Nons).unwrap();
        assert_eq!(nons.degrees(), vec![2, 2, 2, 2]);
    }

    #[test]
    fn pattern_validation() {
        assert!(DegreePattern::new(3, vec![2, 2]).is_ok());
        assert!(DegreePattern::new(2, vec![1, 1]).is_err());
        assert!(DegreePattern::new(2, vec![2, 2]).is_err());
        assert!(DegreePattern::new(3, vec![2, 3]).is_err());
        assert!(DegreePattern::new(3, vec![1]).is_err());
        assert_eq!("irr".parse::<Certificate>().unwrap(), Certificate::Irr);
        assert!(matches!(
            "foo".parse::<Certificate>(),
            Err(Error::UnsupportedCertificate(_))
        ));
    }

    #[test]
    fn system_file_round_trip_and_line_errors() {
        let text = "# conic\nfield 3\nnvars 3\npoly 1: 1:2,0,0 + 1:0,1,1\n";
        let sys = PolySystem::from_file_text(text).unwrap();
        assert_eq!(sys.to_file_text(), "field 3\nnvars 3\npoly 1: 1:2,0,0 + 1:0,1,1\n");
        let err = PolySystem::from_file_text("field 3\nnvars 3\npoly 1: 1:2,0 + 1:0,1,1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
        let err = PolySystem::from_file_text("field 3\nnvars 3\nbogus\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let ext = "field 3^2\nnvars 3\npoly 1: 1|1:2,0,0 + 0|2:0,1,1\n";
        let sys = PolySystem::from_file_text(ext).unwrap();
        assert_eq!(sys.to_file_text(), ext);
    }

    #[test]
    fn exact_division() {
        let f5 = f(5);
        let a = poly("1:1,0,0 + 2:0,1,0", &f5, 3);
        let b = poly("1:1,1,0 + 3:0,0,2", &f5, 3);
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab.divide_exact(&a).unwrap().unwrap(), b);
        let c = poly("1:1,0,0 + 1:0,0,1", &f5, 3);
        assert!(ab.divide_exact(&c).unwrap().is_none());
    }
}
