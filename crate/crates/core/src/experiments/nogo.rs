//! Exhaustive search for a sharp +-1 assignment on an anticommuting quadruple.

use serde::Serialize;

use crate::algebra::Quantity;
use crate::error::{QcalcError, Result};
use crate::nonlocality::BellQuadruple;
use crate::tolerances::Tolerances;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssignmentOutcome {
    pub values: [i8; 4],
    /// `v(f1 f2 f3 f4)` via the product rule.
    pub v_forward: i8,
    /// `v(f1 f4 f2 f3)` via the product rule.
    pub v_reordered: i8,
    /// `None` when every constraint holds.
    pub violation: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    /// Sign `s` with `f1 f4 f2 f3 = s f1 f2 f3 f4`.
    pub reorder_sign: f64,
    /// `||f1 f4 f2 f3 - s f1 f2 f3 f4||`
    pub identity_residual: f64,
    pub outcomes: Vec<AssignmentOutcome>,
    pub feasible: Vec<[i8; 4]>,
}

fn close(a: &Quantity, b: &Quantity, tol: f64) -> Result<bool> {
    Ok(a.distance(b)? <= tol)
}

/// Verify `f_j^2 = 1`, `f_j f_k = -f_k f_j` for `|j - k| = 2` and commutation
/// otherwise.
fn check_relations(fs: &[Quantity; 4], tol: &Tolerances) -> Result<()> {
    let one = fs[0].identity_like();
    for (j, f) in fs.iter().enumerate() {
        if !close(&f.square(), &one, tol.value_tol)? {
            return Err(QcalcError::RelationsNotSatisfied(format!("f{}^2 != 1", j + 1)));
        }
    }
    for j in 0..4 {
        for k in (j + 1)..4 {
            let jk = fs[j].mul(&fs[k])?;
            let kj = fs[k].mul(&fs[j])?;
            let (target, word) = if k - j == 2 {
                (kj.neg(), "anticommute")
            } else {
                (kj, "commute")
            };
            if !close(&jk, &target, tol.value_tol)? {
                return Err(QcalcError::RelationsNotSatisfied(format!(
                    "f{} and f{} do not {word}",
                    j + 1,
                    k + 1
                )));
            }
        }
    }
    Ok(())
}

/// Enumerate all 16 assignments `v_j in {-1, +1}` and extend each through the
/// product rule on the commuting pairs. Consistency with
/// `f1 f4 f2 f3 = s f1 f2 f3 f4` requires `v14 v23 = s v12 v34`, but the product
/// rule forces both sides' products to equal `v1 v2 v3 v4`, so no assignment
/// survives when `s = -1`.
pub fn kochen_specker_search(q: &BellQuadruple, tol: &Tolerances) -> Result<SearchResult> {
    let fs = q.members();
    check_relations(fs, tol)?;
    let forward = fs[0].mul(&fs[1])?.mul(&fs[2])?.mul(&fs[3])?;
    let reordered = fs[0].mul(&fs[3])?.mul(&fs[1])?.mul(&fs[2])?;
    let plus = reordered.distance(&forward)?;
    let minus = reordered.distance(&forward.neg())?;
    let (reorder_sign, identity_residual) = if minus < plus { (-1.0, minus) } else { (1.0, plus) };
    let s = reorder_sign as i8;

    let outcomes: Vec<AssignmentOutcome> = (0..16u8)
        .map(|bits| {
            let v: [i8; 4] = std::array::from_fn(|k| if bits >> k & 1 == 1 { 1 } else { -1 });
            let (v12, v34, v14, v23) = (v[0] * v[1], v[2] * v[3], v[0] * v[3], v[1] * v[2]);
            let v_forward = v12 * v34;
            let v_reordered = v14 * v23;
            let violation = (v_reordered != s * v_forward).then(|| {
                format!(
                    "v(f1f4)v(f2f3) = {v_reordered} but {s} * v(f1f2)v(f3f4) = {}, i.e. v0 = -v0 with v0 = {v_forward}",
                    s * v_forward
                )
            });
            AssignmentOutcome {
                values: v,
                v_forward,
                v_reordered,
                violation,
            }
        })
        .collect();
    let feasible = outcomes
        .iter()
        .filter(|o| o.violation.is_none())
        .map(|o| o.values)
        .collect();
    Ok(SearchResult {
        reorder_sign,
        identity_residual,
        outcomes,
        feasible,
    })
}
