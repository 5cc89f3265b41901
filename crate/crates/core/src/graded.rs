//! Group gradings of matrix algebras and of Lie subalgebras of `gl_n`.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::abgroup::{FinAbGroup, GrpElt, Presentation};
use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::linalg::{nullspace, Matrix, Span, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProductKind {
    Associative,
    Lie,
}

/// What the components are expected to span inside `Mat_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpanKind {
    Full,
    TraceZero,
    /// A subalgebra of the given dimension (skew elements, `so(C, q)`, ...).
    Subalgebra(usize),
}

#[derive(Clone, Debug)]
pub struct MatGrading {
    pub n: usize,
    pub kind: ProductKind,
    pub span: SpanKind,
    pub group: FinAbGroup,
    pub components: BTreeMap<GrpElt, Vec<Matrix>>,
}

impl MatGrading {
    /// Groups labelled basis elements into components; empty components are dropped.
    pub fn from_labeled(
        n: usize,
        kind: ProductKind,
        span: SpanKind,
        group: FinAbGroup,
        items: impl IntoIterator<Item = (GrpElt, Matrix)>,
    ) -> Self {
        let mut components: BTreeMap<GrpElt, Vec<Matrix>> = BTreeMap::new();
        for (g, m) in items {
            components.entry(g).or_default().push(m);
        }
        components.retain(|_, v| !v.is_empty());
        MatGrading { n, kind, span, group, components }
    }

    pub fn dim(&self) -> usize {
        self.components.values().map(|c| c.len()).sum()
    }

    pub fn support(&self) -> Vec<GrpElt> {
        self.components.keys().cloned().collect()
    }

    pub fn component(&self, g: &GrpElt) -> Option<&[Matrix]> {
        self.components.get(g).map(|v| v.as_slice())
    }

    pub fn product(&self, x: &Matrix, y: &Matrix) -> Matrix {
        match self.kind {
            ProductKind::Associative => x.mul(y),
            ProductKind::Lie => x.commutator(y),
        }
    }

    /// `t[i]` is the number of components of dimension `i + 1`.
    pub fn type_of(&self) -> Vec<usize> {
        let max = self.components.values().map(|c| c.len()).max().unwrap_or(0);
        let mut t = vec![0; max];
        for c in self.components.values() {
            t[c.len() - 1] += 1;
        }
        t
    }

    pub fn all_basis(&self) -> Vec<Matrix> {
        self.components.values().flatten().cloned().collect()
    }

    /// Relabels along an injective map of the support into another group.
    pub fn relabel(&self, group: FinAbGroup, map: impl Fn(&GrpElt) -> GrpElt) -> Result<Self> {
        let mut components = BTreeMap::new();
        for (g, c) in &self.components {
            if components.insert(map(g), c.clone()).is_some() {
                return Err(Error::NotGrading("relabelling merges two components".into()));
            }
        }
        Ok(MatGrading { n: self.n, kind: self.kind, span: self.span.clone(), group, components })
    }

    pub fn with_kind(mut self, kind: ProductKind, span: SpanKind) -> Self {
        self.kind = kind;
        self.span = span;
        self
    }
}

/// Quaternion basis `q1 = diag(1,-1)`, `q2 = [[0,1],[1,0]]`, `q3 = q1 q2`.
pub fn quaternion_units() -> [Matrix; 3] {
    let q1 = Matrix::from_ints(&[&[1, 0], &[0, -1]]);
    let q2 = Matrix::from_ints(&[&[0, 1], &[1, 0]]);
    let q3 = q1.mul(&q2);
    [q1, q2, q3]
}

/// Pauli matrices `x = diag(1, e, ..., e^{n-1})` and the cyclic shift `y`, `xy = e yx`.
pub fn pauli_generators(n: usize) -> (Matrix, Matrix) {
    let x = Matrix::diag(&(0..n).map(|i| CycNum::root_of_unity(n as u32, i as i64)).collect::<Vec<_>>());
    let y = Matrix::from_fn(n, n, |i, j| if i == (j + 1) % n { CycNum::one() } else { CycNum::zero() });
    (x, y)
}

/// Division grading of `Mat_n` by `Z_n^2`, component `(a, b)` spanned by `x^a y^b`.
pub fn pauli_grading(n: usize) -> MatGrading {
    assert!(n >= 1);
    let (x, y) = pauli_generators(n);
    let group = FinAbGroup::product(&[n as i64, n as i64]);
    let mut items = Vec::new();
    let mut xa = Matrix::identity(n);
    for a in 0..n {
        let mut m = xa.clone();
        for b in 0..n {
            items.push((group.image(&[a as i64, b as i64]), m.clone()));
            m = m.mul(&y);
        }
        xa = xa.mul(&x);
    }
    MatGrading::from_labeled(n, ProductKind::Associative, SpanKind::Full, group, items)
}

/// Kronecker product of two associative gradings over the direct product group.
pub fn tensor_grading(a: &MatGrading, b: &MatGrading) -> Result<MatGrading> {
    if a.kind != ProductKind::Associative || b.kind != ProductKind::Associative {
        return Err(Error::LieTensor);
    }
    let group = a.group.direct_product(&b.group);
    let mut items = Vec::new();
    for (g, cg) in &a.components {
        for (h, ch) in &b.components {
            let label = FinAbGroup::pair(&group, g, h);
            for x in cg {
                for y in ch {
                    items.push((label.clone(), x.kron(y)));
                }
            }
        }
    }
    Ok(MatGrading::from_labeled(a.n * b.n, ProductKind::Associative, SpanKind::Full, group, items))
}

/// Cartan grading of `Mat_m` by `Z^{m-1}`: `deg v_1 = 0`, `deg v_i = e_{i-1}`.
pub fn cartan_grading(m: usize) -> MatGrading {
    let group = FinAbGroup::free(m.saturating_sub(1));
    let deg = |i: usize| {
        let mut v = vec![0i64; m.saturating_sub(1)];
        if i > 0 {
            v[i - 1] = 1;
        }
        v
    };
    let mut items = Vec::new();
    for i in 0..m {
        for j in 0..m {
            let d: Vec<i64> = deg(i).iter().zip(deg(j)).map(|(a, b)| a - b).collect();
            items.push((group.image(&d), Matrix::unit(m, i, j)));
        }
    }
    MatGrading::from_labeled(m, ProductKind::Associative, SpanKind::Full, group, items)
}

/// Grading of `Mat_k (x) D` with `E_ij (x) X_h` in degree `(g_i - g_j, h)`.
pub fn induced_grading(division: &MatGrading, group: &FinAbGroup, degrees: &[GrpElt]) -> Result<MatGrading> {
    if degrees.iter().any(|d| !group.contains(d)) {
        return Err(Error::MixedGroups);
    }
    let k = degrees.len();
    let prod = group.direct_product(&division.group);
    let mut items = Vec::new();
    for i in 0..k {
        for j in 0..k {
            let gij = degrees[i].sub(&degrees[j])?;
            for (h, ch) in &division.components {
                let label = FinAbGroup::pair(&prod, &gij, h);
                for x in ch {
                    items.push((label.clone(), Matrix::unit(k, i, j).kron(x)));
                }
            }
        }
    }
    Ok(MatGrading::from_labeled(k * division.n, ProductKind::Associative, SpanKind::Full, prod, items))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub what: String,
}

fn violation(what: impl Into<String>) -> Violation {
    Violation { what: what.into() }
}

/// Checks that the components form a direct sum of the declared span and that
/// products land in the component of the summed label.
pub fn verify_grading(g: &MatGrading) -> Vec<Violation> {
    let mut out = Vec::new();
    let n2 = g.n * g.n;
    let mut all = Span::new(n2);
    let mut spans: HashMap<&GrpElt, Span> = HashMap::new();
    for (label, comp) in &g.components {
        if !g.group.contains(label) {
            out.push(violation(format!("label {label} is not an element of {}", g.group)));
        }
        let mut s = Span::new(n2);
        for m in comp {
            if m.rows() != g.n || m.cols() != g.n {
                out.push(violation(format!("component {label} has a matrix of the wrong size")));
                continue;
            }
            if g.span == SpanKind::TraceZero && !m.trace().is_zero() {
                out.push(violation(format!("component {label} contains an element with nonzero trace")));
            }
            s.insert(m.flat().to_vec());
            if !all.insert(m.flat().to_vec()) {
                out.push(violation(format!("component {label} is not independent of the others")));
            }
        }
        spans.insert(label, s);
    }
    let expected = match g.span {
        SpanKind::Full => n2,
        SpanKind::TraceZero => n2 - 1,
        SpanKind::Subalgebra(d) => d,
    };
    if g.dim() != expected {
        out.push(violation(format!("components span dimension {} instead of {expected}", g.dim())));
    }
    let labels: Vec<&GrpElt> = g.components.keys().collect();
    for (ia, a) in labels.iter().enumerate() {
        let start = if g.kind == ProductKind::Lie { ia } else { 0 };
        for b in &labels[start..] {
            let Ok(target) = a.add(b) else {
                out.push(violation("labels from different groups"));
                continue;
            };
            let ts = spans.get(&target);
            'pairs: for x in &g.components[*a] {
                for y in &g.components[*b] {
                    let p = g.product(x, y);
                    if p.is_zero() {
                        continue;
                    }
                    let ok = ts.is_some_and(|s| s.contains(p.flat()));
                    if !ok {
                        out.push(violation(format!("product of components {a} and {b} leaves component {target}")));
                        break 'pairs;
                    }
                }
            }
        }
    }
    out
}

pub fn is_graded_division(g: &MatGrading) -> bool {
    if g.kind != ProductKind::Associative || !verify_grading(g).is_empty() {
        return false;
    }
    if g.components.values().any(|c| c.len() != 1 || c[0].det().is_zero()) {
        return false;
    }
    let labels: Vec<&GrpElt> = g.components.keys().collect();
    labels.iter().all(|a| {
        labels.iter().all(|b| a.add(b).is_ok_and(|s| g.components.contains_key(&s)))
    })
}

/// Spectrum type of an operator used to grade a space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spectrum {
    /// Automorphism of finite order; eigenvalue `z_k^j` gives label `j` in `Z_k`.
    Cyclic(u32),
    /// Derivation with integer eigenvalues (`ad h` for semisimple `h`).
    Integer,
}

pub struct GradingOperator<'a> {
    pub name: String,
    pub map: Box<dyn Fn(&Matrix) -> Matrix + 'a>,
    pub spectrum: Spectrum,
}

impl<'a> GradingOperator<'a> {
    pub fn new(name: impl Into<String>, spectrum: Spectrum, map: impl Fn(&Matrix) -> Matrix + 'a) -> Self {
        GradingOperator { name: name.into(), map: Box::new(map), spectrum }
    }

    /// `x -> g x g^{-1}` for an element `g` of finite order modulo scalars.
    pub fn conjugation(name: impl Into<String>, g: &Matrix, order: u32) -> Result<Self> {
        let gi = g.inverse()?;
        let g = g.clone();
        Ok(Self::new(name, Spectrum::Cyclic(order), move |x| g.mul(x).mul(&gi)))
    }

    /// `x -> [h, x]`.
    pub fn adjoint(name: impl Into<String>, h: &Matrix) -> Self {
        let h = h.clone();
        Self::new(name, Spectrum::Integer, move |x| h.commutator(x))
    }
}

fn product_of(kind: ProductKind, x: &Matrix, y: &Matrix) -> Matrix {
    match kind {
        ProductKind::Associative => x.mul(y),
        ProductKind::Lie => x.commutator(y),
    }
}

/// Simultaneous eigenspace decomposition of a space (given by a basis) under
/// commuting operators. Labels live in `Z^a x prod Z_k`.
pub fn grade_jointly(
    n: usize,
    kind: ProductKind,
    span: SpanKind,
    basis: &[Matrix],
    ops: &[GradingOperator<'_>],
) -> Result<MatGrading> {
    let d = basis.len();
    let space = Span::from_vectors(n * n, basis.iter().map(|m| m.flat().to_vec()));
    if space.dim() != d {
        return Err(Error::Invalid("grading basis is linearly dependent".into()));
    }
    let to_matrix = |c: &[CycNum]| {
        let mut m = Matrix::zeros(n, n);
        for (x, b) in c.iter().zip(basis) {
            if !x.is_zero() {
                m = m.add(&b.scale(x));
            }
        }
        m
    };
    // coordinate matrices of the operators (column k = image of basis k)
    let mut coords: Vec<Matrix> = Vec::new();
    for (oi, op) in ops.iter().enumerate() {
        let mut a = Matrix::zeros(d, d);
        for (k, b) in basis.iter().enumerate() {
            let img = (op.map)(b);
            let c = space
                .coordinates(img.flat())
                .ok_or_else(|| Error::Spectrum(oi, "operator does not preserve the space".into()))?;
            for (r, x) in c.into_iter().enumerate() {
                a.set(r, k, x);
            }
        }
        coords.push(a);
    }
    for i in 0..ops.len() {
        for j in i + 1..ops.len() {
            if coords[i].mul(&coords[j]) != coords[j].mul(&coords[i]) {
                return Err(Error::NonCommuting(i, j));
            }
        }
    }
    for (oi, op) in ops.iter().enumerate() {
        for x in basis {
            for y in basis {
                let lhs = (op.map)(&product_of(kind, x, y));
                let fx = (op.map)(x);
                let fy = (op.map)(y);
                let rhs = match op.spectrum {
                    Spectrum::Cyclic(_) => product_of(kind, &fx, &fy),
                    Spectrum::Integer => product_of(kind, &fx, y).add(&product_of(kind, x, &fy)),
                };
                if lhs != rhs {
                    return Err(Error::NotAutomorphism(oi));
                }
            }
        }
        if let Spectrum::Cyclic(k) = op.spectrum {
            if coords[oi].pow(k as u64) != Matrix::identity(d) {
                return Err(Error::Spectrum(oi, format!("order does not divide {k}")));
            }
        }
    }
    let ident: Vec<Vector> = (0..d)
        .map(|i| (0..d).map(|j| if i == j { CycNum::one() } else { CycNum::zero() }).collect())
        .collect();
    let mut blocks: Vec<(Vec<i64>, Vec<Vector>)> = vec![(Vec::new(), ident)];
    for (oi, op) in ops.iter().enumerate() {
        let a = &coords[oi];
        let candidates: Vec<(i64, CycNum)> = match op.spectrum {
            Spectrum::Cyclic(k) => (0..k as i64).map(|j| (j, CycNum::root_of_unity(k, j))).collect(),
            Spectrum::Integer => {
                let bound = (0..d)
                    .map(|r| (0..d).map(|c| { let (re, im) = a.get(r, c).to_complex(); (re * re + im * im).sqrt() }).sum::<f64>())
                    .fold(0.0, f64::max)
                    .ceil() as i64;
                (-bound..=bound).map(|e| (e, CycNum::from_int(e))).collect()
            }
        };
        let mut next = Vec::new();
        for (label, vecs) in blocks {
            let r = vecs.len();
            let sub = Span::from_vectors(d, vecs.iter().cloned());
            let mut restr = Matrix::zeros(r, r);
            for (k, v) in vecs.iter().enumerate() {
                let c = sub.coordinates(&a.mul_vec(v)).ok_or_else(|| Error::Spectrum(oi, "block not invariant".into()))?;
                for (i, x) in c.into_iter().enumerate() {
                    restr.set(i, k, x);
                }
            }
            let mut found = 0;
            for (lab, ev) in &candidates {
                let ns = nullspace(&restr.sub(&Matrix::scalar(r, ev)));
                if ns.is_empty() {
                    continue;
                }
                found += ns.len();
                let new_vecs: Vec<Vector> = ns
                    .iter()
                    .map(|c| {
                        let mut v = vec![CycNum::zero(); d];
                        for (x, w) in c.iter().zip(&vecs) {
                            if !x.is_zero() {
                                for (t, y) in v.iter_mut().zip(w) {
                                    *t = &*t + &(x * y);
                                }
                            }
                        }
                        v
                    })
                    .collect();
                let mut l = label.clone();
                l.push(*lab);
                next.push((l, new_vecs));
            }
            if found != r {
                return Err(Error::Spectrum(oi, "not diagonalizable over the expected spectrum".into()));
            }
        }
        blocks = next;
    }
    let moduli: Vec<i64> = ops
        .iter()
        .map(|o| match o.spectrum {
            Spectrum::Cyclic(k) => k as i64,
            Spectrum::Integer => 0,
        })
        .collect();
    let group = FinAbGroup::product(&moduli);
    let items = blocks
        .into_iter()
        .flat_map(|(label, vecs)| {
            let g = group.image(&label);
            vecs.into_iter().map(move |v| (g.clone(), v))
        })
        .map(|(g, v)| (g, to_matrix(&v)))
        .collect::<Vec<_>>();
    Ok(MatGrading::from_labeled(n, kind, span, group, items))
}

/// Grading by the eigenspaces of commuting automorphisms of finite order.
pub fn grade_by_automorphisms(
    n: usize,
    kind: ProductKind,
    span: SpanKind,
    basis: &[Matrix],
    ops: &[GradingOperator<'_>],
) -> Result<MatGrading> {
    if ops.iter().any(|o| o.spectrum == Spectrum::Integer) {
        return Err(Error::Invalid("automorphism with integer spectrum".into()));
    }
    grade_jointly(n, kind, span, basis, ops)
}

/// `Z^k` grading by the `ad`-eigenvalues of commuting semisimple elements.
pub fn grade_by_semisimple_elements(n: usize, span: SpanKind, basis: &[Matrix], hs: &[Matrix]) -> Result<MatGrading> {
    let ops: Vec<GradingOperator<'_>> =
        hs.iter().enumerate().map(|(i, h)| GradingOperator::adjoint(format!("ad h{i}"), h)).collect();
    grade_jointly(n, ProductKind::Lie, span, basis, &ops)
}

/// Relabels a grading over its universal group: one generator per support
/// element, one relation `s1 + s2 = s3` per nonzero product of components.
pub fn universal_group_of(g: &MatGrading) -> Result<MatGrading> {
    let labels: Vec<GrpElt> = g.support();
    if labels.len() <= 1 {
        let group = FinAbGroup::trivial();
        let z = group.zero();
        return g.relabel(group, |_| z.clone());
    }
    let index: HashMap<&GrpElt, usize> = labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let mut pres = Presentation::new(labels.len());
    for ia in 0..labels.len() {
        for ib in ia..labels.len() {
            let (a, b) = (&labels[ia], &labels[ib]);
            let ca = &g.components[a];
            let cb = &g.components[b];
            let nonzero = ca.iter().any(|x| {
                cb.iter().any(|y| {
                    !g.product(x, y).is_zero()
                        || (g.kind == ProductKind::Associative && !g.product(y, x).is_zero())
                })
            });
            if !nonzero {
                continue;
            }
            let t = a.add(b)?;
            let it = *index
                .get(&t)
                .ok_or_else(|| Error::NotGrading(format!("product of {a} and {b} has no component")))?;
            pres.relate_sparse(&[(ia, 1), (ib, 1), (it, -1)]);
        }
    }
    let group = FinAbGroup::from_presentation(&pres);
    g.relabel(group.clone(), |l| group.generator(index[l]))
        .map_err(|_| Error::NotGrading("grading is not realizable over its universal group".into()))
}

/// Intersects every component with the trace-zero matrices.
pub fn trace_zero_part(g: &MatGrading) -> MatGrading {
    let mut components = BTreeMap::new();
    for (l, c) in &g.components {
        let traced: Vec<&Matrix> = c.iter().filter(|m| !m.trace().is_zero()).collect();
        let mut out: Vec<Matrix> = c.iter().filter(|m| m.trace().is_zero()).cloned().collect();
        if let Some((first, rest)) = traced.split_first() {
            let t0 = first.trace();
            for m in rest {
                let f = m.trace().div(&t0).expect("nonzero trace");
                out.push(m.sub(&first.scale(&f)));
            }
        }
        if !out.is_empty() {
            components.insert(l.clone(), out);
        }
    }
    MatGrading { n: g.n, kind: g.kind, span: SpanKind::TraceZero, group: g.group.clone(), components }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quaternions() {
        let [q1, q2, q3] = quaternion_units();
        assert_eq!(q3, Matrix::from_ints(&[&[0, 1], &[-1, 0]]));
        assert_eq!(q1.mul(&q2), q2.mul(&q1).neg());
        let p = pauli_grading(2);
        assert!(is_graded_division(&p));
        assert_eq!(p.component(&p.group.image(&[1, 1])).unwrap()[0], q3);
    }

    #[test]
    fn cartan_types() {
        assert_eq!(cartan_grading(2).type_of(), vec![2, 1]);
        assert_eq!(cartan_grading(4).type_of(), vec![12, 0, 0, 1]);
        assert!(verify_grading(&cartan_grading(4)).is_empty());
    }

    #[test]
    fn tensor_rejects_lie() {
        let l = pauli_grading(2).with_kind(ProductKind::Lie, SpanKind::Full);
        assert_eq!(tensor_grading(&l, &pauli_grading(2)).unwrap_err(), Error::LieTensor);
    }

    #[test]
    fn induced_quaternion_with_order_two_degree() {
        let g = FinAbGroup::product(&[2]);
        let degs = [g.zero(), g.generator(0)];
        let ind = induced_grading(&pauli_grading(2), &g, &degs).unwrap();
        assert!(verify_grading(&ind).is_empty());
        assert_eq!(ind.group.torsion(), vec![2, 2, 2]);
        assert_eq!(ind.type_of(), vec![0, 8]);
    }

    #[test]
    fn non_commuting_operators_named() {
        let [q1, q2, _] = quaternion_units();
        let basis: Vec<Matrix> = (0..4).map(|k| Matrix::unit(2, k / 2, k % 2)).collect();
        let ops = vec![
            GradingOperator::conjugation("q1", &q1, 2).unwrap(),
            GradingOperator::conjugation("q2", &q2, 2).unwrap(),
        ];
        let g = grade_by_automorphisms(2, ProductKind::Associative, SpanKind::Full, &basis, &ops).unwrap();
        assert_eq!(g.type_of(), vec![4]);
        let p = Matrix::from_ints(&[&[1, 1], &[0, -1]]);
        let ops = vec![
            GradingOperator::conjugation("q1", &q1, 2).unwrap(),
            GradingOperator::conjugation("p", &p, 2).unwrap(),
        ];
        let err = grade_by_automorphisms(2, ProductKind::Associative, SpanKind::Full, &basis, &ops).unwrap_err();
        assert_eq!(err, Error::NonCommuting(0, 1));
    }
}
