use crate::field::{Endo, Matrix, Scalar, Subspace};
use crate::mhs::{GradedCoords, IncFiltration, PolarizationSystem};

/// First weight `k` at which `Gr_k(H)` fails to be an infinitesimal isometry
/// of `S_k`, i.e. `S_k(Hu, v) + S_k(u, Hv) ≠ 0`; `None` if all pass.
pub fn isometry_failure<S: Scalar>(
    h: &Endo<S>,
    pol: &PolarizationSystem<S>,
    gc: &GradedCoords<S>,
    w: &IncFiltration<S>,
    ctx: S::Ctx,
) -> Option<i32> {
    if !w.preserved_by(h, ctx).unwrap_or(false) {
        return Some(w.bottom());
    }
    for k in w.jumps() {
        let a = gc.graded_action(k, h);
        let s = &pol.forms[&k];
        if !a.transpose().mul(s).add(&s.mul(&a)).is_zero(ctx) {
            return Some(k);
        }
    }
    None
}

pub fn isometry_checks<S: Scalar>(
    h: &Endo<S>,
    pol: &PolarizationSystem<S>,
    gc: &GradedCoords<S>,
    w: &IncFiltration<S>,
    ctx: S::Ctx,
) -> bool {
    isometry_failure(h, pol, gc, w, ctx).is_none()
}

/// `W_j = (W_{-j-1})^⊥` under the bilinear form `Q` for all `j`.
pub fn is_self_dual<S: Scalar>(w: &IncFiltration<S>, q: &Matrix<S>, ctx: S::Ctx) -> bool {
    let n = w.ambient_dim();
    let span = w.bottom().abs().max(w.top().abs()) + 1;
    for j in -span..=span {
        let other = w.get(-j - 1);
        let perp = if other.is_zero() {
            Subspace::full(n)
        } else {
            let eqs: Vec<Vec<S>> = other.basis().iter().map(|b| q.apply(b)).collect();
            match Matrix::from_rows(eqs) {
                Ok(m) => match Subspace::span(n, &m.kernel(ctx), ctx) {
                    Ok(s) => s,
                    Err(_) => return false,
                },
                Err(_) => return false,
            }
        };
        if !perp.same_as(&w.get(j), ctx) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::field::{Exact, Gq};
    use crate::weights::monodromy_filtration;

    #[test]
    fn identity_is_not_an_isometry() {
        let w = IncFiltration::<Gq>::pure(2, 0);
        let pol = PolarizationSystem {
            hodge_numbers: BTreeMap::from([((0, 0), 2)]),
            lifts: BTreeMap::from([(0, Matrix::<Gq>::identity(2).row_vecs())]),
            forms: BTreeMap::from([(0, Matrix::identity(2))]),
        };
        let gc = pol.validate(&w, Exact).unwrap();
        assert!(!isometry_checks(&Matrix::identity(2), &pol, &gc, &w, Exact));
        assert!(isometry_checks(&Matrix::zeros(2, 2), &pol, &gc, &w, Exact));
    }

    #[test]
    fn symplectic_monodromy_is_self_dual() {
        let q = Matrix::<Gq>::from_i64_rows(&[&[0, 0, 0, 1], &[0, 0, 1, 0], &[0, -1, 0, 0], &[-1, 0, 0, 0]]);
        // Single Jordan block, infinitesimal isometry of an alternating Q.
        let n = Matrix::<Gq>::from_i64_rows(&[&[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, -1], &[0, 0, 0, 0]]);
        assert!(n.transpose().mul(&q).add(&q.mul(&n)).is_zero(Exact));
        let w = monodromy_filtration(&n, Exact).unwrap();
        assert!(is_self_dual(&w, &q, Exact));
    }
}
