use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LemmaCheck {
    /// `(sum a_i)^2 = (k - 1)(sum a_i^2 + c)`.
    pub hypothesis_holds: bool,
    /// `2 a_1 a_2 >= c`.
    pub inequality_holds: bool,
    /// `2 a_1 a_2 = c`.
    pub equality: bool,
    /// `a_1 + a_2 = a_3 = ... = a_k`.
    pub equality_condition_holds: bool,
}

/// Evaluates Chen's algebraic lemma on concrete numbers: under the
/// hypothesis, `2 a_1 a_2 >= c` with equality iff `a_1 + a_2 = a_3 = ... = a_k`.
pub fn chen_lemma_check(a: &[f64], c: f64, tol: f64) -> Result<LemmaCheck> {
    let k = a.len();
    if k < 2 {
        return Err(Error::BadK(k));
    }
    let sum: f64 = a.iter().sum();
    let sum_sq: f64 = a.iter().map(|x| x * x).sum();
    let scale = 1.0f64.max(sum * sum).max(sum_sq).max(c.abs());
    let hypothesis = sum * sum - (k as f64 - 1.0) * (sum_sq + c);
    let product = 2.0 * a[0] * a[1];
    let head = a[0] + a[1];
    Ok(LemmaCheck {
        hypothesis_holds: hypothesis.abs() <= tol * scale,
        inequality_holds: product >= c - tol * scale,
        equality: (product - c).abs() <= tol * scale,
        equality_condition_holds: a[2..]
            .iter()
            .all(|x| (x - head).abs() <= tol * scale.sqrt()),
    })
}
