//! Emptiness of the common projective zero set of `n+1` forms in `n+1`
//! variables, decided by the rank of the Macaulay matrix at degree
//! `N = sum(e_j - 1) + 1`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::homopoly::{build_test_system, Certificate, HomoPoly, Monomial, PolySystem, TestSystem};

/// `sum(e_j - 1) + 1`.
pub fn macaulay_degree(degrees: &[u32]) -> Result<u32> {
    if degrees.is_empty() {
        return Err(Error::EmptyInput);
    }
    if degrees.contains(&0) {
        return Err(Error::PatternViolation(
            "Macaulay degrees need forms of degree >= 1".into(),
        ));
    }
    Ok(degrees.iter().map(|e| e - 1).sum::<u32>() + 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmptinessVerdict {
    pub empty: bool,
    pub rank: usize,
    /// Macaulay degree `N`.
    pub degree: u32,
    pub rows: usize,
    pub cols: usize,
    /// Set when a zero form short-circuited the test.
    pub zero_form: bool,
}

/// Rows `m * g_j` for all monomials `m` of degree `N - e_j`, as dense
/// coefficient vectors over the degree-`N` monomials in grevlex order.
pub fn macaulay_matrix(forms: &[HomoPoly], degree: u32) -> Vec<Vec<Elem>> {
    let nvars = forms[0].nvars();
    let cols = Monomial::all_of_degree(nvars, degree);
    let index: HashMap<&Monomial, usize> = cols.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows = Vec::new();
    for g in forms {
        if g.degree() > degree {
            continue;
        }
        for m in Monomial::all_of_degree(nvars, degree - g.degree()) {
            let mut row = vec![Elem::ZERO; cols.len()];
            for (t, c) in g.terms() {
                row[index[&t.mul(&m)]] = *c;
            }
            rows.push(row);
        }
    }
    rows
}

/// Row rank by Gaussian elimination; stops early once `stop_at` is reached.
pub fn rank(field: &Field, mut rows: Vec<Vec<Elem>>, stop_at: usize) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() || r == stop_at {
            break;
        }
        let Some(pivot) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pivot);
        let inv = field.inv(rows[r][col]).expect("nonzero pivot");
        for x in rows[r][col..].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let (head, tail) = rows.split_at_mut(r + 1);
        let prow = &head[r];
        for row in tail.iter_mut() {
            let c = row[col];
            if c.is_zero() {
                continue;
            }
            for j in col..ncols {
                if !prow[j].is_zero() {
                    row[j] = field.sub(row[j], field.mul(c, prow[j]));
                }
            }
        }
        r += 1;
    }
    r
}

/// Decides whether the forms have no common zero in projective space over
/// the algebraic closure. A zero form never yields emptiness.
pub fn projective_empty(ts: &TestSystem) -> Result<EmptinessVerdict> {
    forms_empty(&ts.forms)
}

/// [`projective_empty`] on a raw list of forms.
pub fn forms_empty(forms: &[HomoPoly]) -> Result<EmptinessVerdict> {
    let first = forms.first().ok_or(Error::EmptyInput)?;
    let nvars = first.nvars();
    if forms.len() != nvars {
        return Err(Error::ArityMismatch {
            expected: nvars,
            found: forms.len(),
        });
    }
    for g in forms {
        if g.field() != first.field() {
            return Err(Error::MixedFields);
        }
        if g.nvars() != nvars {
            return Err(Error::ArityMismatch {
                expected: nvars,
                found: g.nvars(),
            });
        }
    }
    let degrees: Vec<u32> = forms.iter().map(|g| g.degree()).collect();
    if forms.iter().any(|g| g.is_zero()) {
        let degree = macaulay_degree(&degrees.iter().map(|&e| e.max(1)).collect::<Vec<_>>())?;
        return Ok(EmptinessVerdict {
            empty: false,
            rank: 0,
            degree,
            rows: 0,
            cols: 0,
            zero_form: true,
        });
    }
    let degree = macaulay_degree(&degrees)?;
    let rows = macaulay_matrix(forms, degree);
    let cols = rows.first().map_or(0, |r| r.len());
    let nrows = rows.len();
    let rank = rank(first.field(), rows, cols);
    Ok(EmptinessVerdict {
        empty: rank == cols,
        rank,
        degree,
        rows: nrows,
        cols,
        zero_form: false,
    })
}

/// Passes iff the certificate's test system has empty projective zero set.
pub fn certify(sys: &PolySystem, cert: Certificate) -> Result<bool> {
    Ok(certify_verdict(sys, cert)?.empty)
}

pub fn certify_verdict(sys: &PolySystem, cert: Certificate) -> Result<EmptinessVerdict> {
    projective_empty(&build_test_system(sys, cert)?)
}
