//! Lie gradings obtained from associative gradings: `sl` restriction,
//! skew elements of an involution, and the outer gradings of `sl_n`.

use std::collections::BTreeMap;

use crate::abgroup::FinAbGroup;
use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::graded::{trace_zero_part, universal_group_of, verify_grading, MatGrading, ProductKind, SpanKind, Violation};
use crate::linalg::{nullspace, Matrix, Span};
use crate::sesquilinear::{FormSpec, PhiMap};

/// The `sl` part of an associative grading of `Mat_n`.
pub fn sl_restriction(g: &MatGrading) -> MatGrading {
    let mut l = trace_zero_part(g);
    l.kind = ProductKind::Lie;
    l
}

/// Restriction of a linear map to a component; errors when the component is not stable.
fn restrict(comp: &[Matrix], f: impl Fn(&Matrix) -> Matrix) -> Result<Matrix> {
    let n2 = comp[0].rows() * comp[0].cols();
    let span = Span::from_vectors(n2, comp.iter().map(|m| m.flat().to_vec()));
    let r = comp.len();
    let mut a = Matrix::zeros(r, r);
    for (k, x) in comp.iter().enumerate() {
        let c = span
            .coordinates(f(x).flat())
            .ok_or_else(|| Error::NotGrading("component is not stable under the involution".into()))?;
        for (i, v) in c.into_iter().enumerate() {
            a.set(i, k, v);
        }
    }
    Ok(a)
}

fn eigenvectors(comp: &[Matrix], a: &Matrix, ev: &CycNum) -> Vec<Matrix> {
    let r = comp.len();
    nullspace(&a.sub(&Matrix::scalar(r, ev)))
        .into_iter()
        .map(|c| {
            let mut m = Matrix::zeros(comp[0].rows(), comp[0].cols());
            for (x, b) in c.iter().zip(comp) {
                if !x.is_zero() {
                    m = m.add(&b.scale(x));
                }
            }
            m
        })
        .collect()
}

/// Skew elements `{x : phi(x) = -x}` of every component.
pub fn skew_part(g: &MatGrading, phi: &PhiMap) -> Result<MatGrading> {
    let minus = CycNum::from_int(-1);
    let mut components = BTreeMap::new();
    let mut dim = 0;
    for (l, comp) in &g.components {
        let a = restrict(comp, |x| phi.apply(x))?;
        let skew = eigenvectors(comp, &a, &minus);
        dim += skew.len();
        if !skew.is_empty() {
            components.insert(l.clone(), skew);
        }
    }
    Ok(MatGrading { n: g.n, kind: ProductKind::Lie, span: SpanKind::Subalgebra(dim), group: g.group.clone(), components })
}

/// Fine grading of the classical Lie algebra `K(R, phi)` attached to a form,
/// over its universal group.
pub fn skew_grading(spec: &FormSpec) -> Result<MatGrading> {
    if spec.phi_order() != 2 {
        return Err(Error::Invalid("the form does not define an involution".into()));
    }
    let raw = spec.refined_grading_raw()?;
    universal_group_of(&skew_part(&raw, &spec.phi())?)
}

/// Outer grading of `sl_n`: components of the refined phi-grading split by the
/// eigenvalue `-i^t` of `phi`, labelled `(g, t)` in `G x Z_4`, then relabelled over
/// the universal group.
pub fn outer_sl_grading(spec: &FormSpec) -> Result<MatGrading> {
    let order = spec.phi_order();
    if order != 2 && order != 4 {
        return Err(Error::Unsupported(format!("antiautomorphism of order {order}")));
    }
    let raw = spec.refined_grading_raw()?;
    let phi = spec.phi();
    let z4 = FinAbGroup::product(&[4]);
    let group = raw.group.direct_product(&z4);
    let mut items = Vec::new();
    for (l, comp) in &raw.components {
        let a = restrict(comp, |x| phi.apply(x))?;
        let mut found = 0;
        for t in 0..4 {
            let ev = -CycNum::root_of_unity(4, t);
            let vs = eigenvectors(comp, &a, &ev);
            found += vs.len();
            let label = FinAbGroup::pair(&group, l, &z4.image(&[t]));
            items.extend(vs.into_iter().map(|v| (label.clone(), v)));
        }
        if found != comp.len() {
            return Err(Error::NotGrading("phi is not diagonalizable on a component".into()));
        }
    }
    let split = MatGrading::from_labeled(raw.n, ProductKind::Lie, SpanKind::Full, group, items);
    universal_group_of(&sl_restriction(&split))
}

pub fn verify_lie(g: &MatGrading) -> Vec<Violation> {
    let mut v = verify_grading(g);
    if g.kind != ProductKind::Lie {
        v.push(Violation { what: "grading is not of Lie type".into() });
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{cartan_grading, pauli_grading};
    use crate::involutions::GradedInvolution;

    fn shape(g: &MatGrading) -> (usize, Vec<i64>) {
        (g.group.free_rank(), g.group.torsion())
    }

    #[test]
    fn sl_of_small_gradings() {
        let p = universal_group_of(&sl_restriction(&pauli_grading(2))).unwrap();
        assert_eq!(p.type_of(), vec![3]);
        assert_eq!(shape(&p), (0, vec![2, 2]));
        assert!(verify_lie(&p).is_empty());
        let c = sl_restriction(&cartan_grading(2));
        assert_eq!(c.type_of(), vec![3]);
        assert_eq!(sl_restriction(&pauli_grading(8)).type_of(), vec![63]);
    }

    #[test]
    fn skew_types() {
        let t = GradedInvolution::tau_o;
        let g0 = skew_grading(&FormSpec::new(1, t(), vec![0, 0, 0, 1], vec![]).unwrap()).unwrap();
        assert_eq!(g0.type_of(), vec![25, 0, 1]);
        let g1 = skew_grading(&FormSpec::new(1, t(), vec![0, 0, 1, 1], vec![]).unwrap()).unwrap();
        assert_eq!(g1.type_of(), vec![24, 2]);
        let f = skew_grading(&FormSpec::new(0, GradedInvolution::transpose(0), vec![0; 8], vec![]).unwrap()).unwrap();
        assert_eq!(f.type_of(), vec![28]);
        assert_eq!(shape(&f), (0, vec![2; 7]));
        assert!(verify_lie(&f).is_empty());
    }

    #[test]
    fn outer_examples() {
        let one = CycNum::one();
        let f = outer_sl_grading(&FormSpec::new(0, GradedInvolution::transpose(0), vec![], vec![one.clone(); 4]).unwrap()).unwrap();
        assert_eq!(shape(&f), (4, vec![2]));
        assert!(verify_lie(&f).is_empty());
        let q = outer_sl_grading(&FormSpec::new(1, GradedInvolution::tau_o(), vec![0, 1, 2, 3], vec![]).unwrap()).unwrap();
        assert_eq!(shape(&q), (0, vec![4, 4, 4]));
        let q3 = outer_sl_grading(&FormSpec::new(3, GradedInvolution::transpose(3), vec![0], vec![]).unwrap()).unwrap();
        assert_eq!(shape(&q3), (0, vec![2; 7]));
    }
}
