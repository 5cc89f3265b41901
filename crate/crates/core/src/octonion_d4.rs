//! Split octonions in the idempotent basis `e1, e2, u1, u2, u3, v1, v2, v3`,
//! triality on `so(C, q) = so_8`, the automorphism group of the `D4` root
//! system, and the three fine gradings of `so_8` that involve outer
//! automorphisms of order 3. Assembles the complete `so_8` table.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::sync::OnceLock;

use serde::Serialize;

use crate::cyclotomic::{CycNum, Rational};
use crate::enumerate::{fine_gradings_so, Family, GradingReport, Options, Provenance};
use crate::error::{Error, Result};
use crate::graded::{grade_jointly, universal_group_of, GradingOperator, MatGrading, ProductKind, SpanKind, Spectrum};
use crate::linalg::{nullspace_rows, rref, solve, Matrix, Span, Vector};

pub const E1: usize = 0;
pub const E2: usize = 1;
pub const U: [usize; 3] = [2, 3, 4];
pub const V: [usize; 3] = [5, 6, 7];

#[derive(Clone, Copy)]
enum Slot {
    Idem(usize),
    Left(usize),
    Right(usize),
}

fn slot(i: usize) -> Slot {
    match i {
        0 | 1 => Slot::Idem(i),
        2..=4 => Slot::Left(i - 2),
        _ => Slot::Right(i - 5),
    }
}

/// `b_i b_j = sign * b_k`, or `None` when the product vanishes.
fn basis_product(i: usize, j: usize) -> Option<(usize, i64)> {
    use Slot::{Idem as E, Left as Lu, Right as Rv};
    let next = |a: usize| (a + 1) % 3;
    match (slot(i), slot(j)) {
        (E(a), E(b)) => (a == b).then_some((i, 1)),
        (E(0), Lu(_)) | (E(1), Rv(_)) => Some((j, 1)),
        (Lu(_), E(1)) | (Rv(_), E(0)) => Some((i, 1)),
        (Lu(a), Rv(b)) if a == b => Some((E1, -1)),
        (Rv(a), Lu(b)) if a == b => Some((E2, -1)),
        (Lu(a), Lu(b)) if b == next(a) => Some((V[next(b)], 1)),
        (Lu(a), Lu(b)) if a == next(b) => Some((V[next(a)], -1)),
        (Rv(a), Rv(b)) if b == next(a) => Some((U[next(b)], 1)),
        (Rv(a), Rv(b)) if a == next(b) => Some((U[next(a)], -1)),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Octonion(pub [CycNum; 8]);

impl Octonion {
    pub fn zero() -> Self {
        Octonion(std::array::from_fn(|_| CycNum::zero()))
    }

    /// The unit `1 = e1 + e2`.
    pub fn one() -> Self {
        Self::from_ints([1, 1, 0, 0, 0, 0, 0, 0])
    }

    pub fn basis(i: usize) -> Self {
        let mut x = Self::zero();
        x.0[i] = CycNum::one();
        x
    }

    pub fn from_ints(c: [i64; 8]) -> Self {
        Octonion(c.map(CycNum::from_int))
    }

    pub fn from_slice(c: &[CycNum]) -> Self {
        assert_eq!(c.len(), 8, "octonion coordinates");
        Octonion(std::array::from_fn(|i| c[i].clone()))
    }

    pub fn add(&self, o: &Self) -> Self {
        Octonion(std::array::from_fn(|i| &self.0[i] + &o.0[i]))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Octonion(std::array::from_fn(|i| &self.0[i] - &o.0[i]))
    }

    pub fn scale(&self, c: &CycNum) -> Self {
        Octonion(std::array::from_fn(|i| &self.0[i] * c))
    }

    /// Image under a linear map of `C` given in the octonion basis.
    pub fn apply(&self, f: &Matrix) -> Self {
        Self::from_slice(&f.mul_vec(&self.0))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(CycNum::is_zero)
    }
}

pub fn oct_mul(x: &Octonion, y: &Octonion) -> Octonion {
    let mut out = Octonion::zero();
    for (i, a) in x.0.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
        for (j, b) in y.0.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
            if let Some((k, s)) = basis_product(i, j) {
                out.0[k] += &(&(a * b) * &CycNum::from_int(s));
            }
        }
    }
    out
}

pub fn polar(x: &Octonion, y: &Octonion) -> CycNum {
    let mut s = &(&x.0[E1] * &y.0[E2]) + &(&x.0[E2] * &y.0[E1]);
    for i in 0..3 {
        s += &(&x.0[U[i]] * &y.0[V[i]]);
        s += &(&x.0[V[i]] * &y.0[U[i]]);
    }
    s
}

pub fn norm(x: &Octonion) -> CycNum {
    let mut s = &x.0[E1] * &x.0[E2];
    for i in 0..3 {
        s += &(&x.0[U[i]] * &x.0[V[i]]);
    }
    s
}

pub fn oct_conj(x: &Octonion) -> Octonion {
    let one = Octonion::one();
    one.scale(&polar(x, &one)).sub(x)
}

/// Gram matrix of the polar form; a permutation matrix pairing `e1, e2` and `u_i, v_i`.
pub fn polar_matrix() -> Matrix {
    Matrix::from_fn(8, 8, |i, j| CycNum::from_int(polar(&Octonion::basis(i), &Octonion::basis(j)).is_one() as i64))
}

fn column(f: &Matrix, i: usize) -> Octonion {
    Octonion::from_slice(&(0..8).map(|r| f.get(r, i).clone()).collect::<Vec<_>>())
}

pub fn is_automorphism(f: &Matrix) -> bool {
    if f.rows() != 8 || f.cols() != 8 || f.det().is_zero() {
        return false;
    }
    let cols: Vec<Octonion> = (0..8).map(|i| column(f, i)).collect();
    (0..8).all(|i| {
        (0..8).all(|j| {
            let lhs = match basis_product(i, j) {
                Some((k, s)) => cols[k].scale(&CycNum::from_int(s)),
                None => Octonion::zero(),
            };
            lhs == oct_mul(&cols[i], &cols[j])
        })
    })
}

/// `e_j` fixed, `u_i -> u_{i+1}`, `v_i -> v_{i+1}`.
pub fn tau_matrix() -> Matrix {
    let mut m = Matrix::zeros(8, 8);
    m.set(E1, E1, CycNum::one());
    m.set(E2, E2, CycNum::one());
    for i in 0..3 {
        m.set(U[(i + 1) % 3], U[i], CycNum::one());
        m.set(V[(i + 1) % 3], V[i], CycNum::one());
    }
    m
}

/// `diag(b0, 1/b0, b1, b2, b3, 1/b1, 1/b2, 1/b3)` with each `b` a power of `z_k`.
pub fn torus_element(k: u32, exps: [i64; 4]) -> Matrix {
    let r = |e: i64| CycNum::root_of_unity(k, e.rem_euclid(k as i64));
    let [a, b1, b2, b3] = exps;
    Matrix::diag(&[r(a), r(-a), r(b1), r(b2), r(b3), r(-b1), r(-b2), r(-b3)])
}

/// `diag(1, 1, 1, w, w^2, 1, w^2, w)`.
pub fn tau_omega_matrix() -> Matrix {
    torus_element(3, [0, 0, 1, 2])
}

/// `e1 <-> e2`, `u_i <-> v_i`.
pub fn exchange_matrix() -> Matrix {
    Matrix::from_fn(8, 8, |i, j| {
        let partner = match slot(j) {
            Slot::Idem(a) => 1 - a,
            Slot::Left(a) => V[a],
            Slot::Right(a) => U[a],
        };
        CycNum::from_int((i == partner) as i64)
    })
}

/// An automorphism of `C` with `eta^3 = id`, twisting the para-octonion product.
#[derive(Clone, Debug)]
pub struct Eta {
    map: Matrix,
    square: Matrix,
}

impl Eta {
    pub fn new(map: Matrix) -> Result<Self> {
        if !is_automorphism(&map) {
            return Err(Error::Invalid("eta is not an automorphism of C".into()));
        }
        if map.pow(3) != Matrix::identity(8) {
            return Err(Error::Invalid("eta^3 is not the identity".into()));
        }
        let square = map.mul(&map);
        Ok(Eta { map, square })
    }

    pub fn identity() -> Self {
        Self::new(Matrix::identity(8)).expect("identity")
    }

    pub fn map(&self) -> &Matrix {
        &self.map
    }
}

/// `x * y = eta(conj x) eta^2(conj y)`.
pub fn eta_mul(x: &Octonion, y: &Octonion, eta: &Eta) -> Octonion {
    oct_mul(&oct_conj(x).apply(&eta.map), &oct_conj(y).apply(&eta.square))
}

/// Basis of `so(C, q)`: `(E_ab - E_ba) B` for `a < b`, `B` the polar Gram matrix.
pub fn so_basis() -> Vec<Matrix> {
    let b = polar_matrix();
    let mut out = Vec::with_capacity(28);
    for i in 0..8 {
        for j in i + 1..8 {
            out.push(Matrix::unit(8, i, j).sub(&Matrix::unit(8, j, i)).mul(&b));
        }
    }
    out
}

/// `h0 = E_{e1} - E_{e2}`, `h_i = E_{u_i} - E_{v_i}`.
pub fn cartan() -> [Matrix; 4] {
    let d = |p: usize, q: usize| Matrix::unit(8, p, p).sub(&Matrix::unit(8, q, q));
    [d(E1, E2), d(U[0], V[0]), d(U[1], V[1]), d(U[2], V[2])]
}

pub fn in_so(f: &Matrix) -> bool {
    let b = polar_matrix();
    f.rows() == 8 && f.cols() == 8 && f.transpose().mul(&b).add(&b.mul(f)).is_zero()
}

/// An element of `so(C, q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SOElement(Matrix);

impl SOElement {
    pub fn new(m: Matrix) -> Result<Self> {
        if in_so(&m) {
            Ok(SOElement(m))
        } else {
            Err(Error::Invalid("input not in so(C,q)".into()))
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }
}

fn flatten(per_pair: impl Fn(usize, usize) -> Octonion) -> Vector {
    let mut v = Vec::with_capacity(512);
    for i in 0..8 {
        for j in 0..8 {
            v.extend(per_pair(i, j).0);
        }
    }
    v
}

fn combine(basis: &[Matrix], c: &[CycNum]) -> Matrix {
    let mut m = Matrix::zeros(8, 8);
    for (x, b) in c.iter().zip(basis) {
        if !x.is_zero() {
            m = m.add(&b.scale(x));
        }
    }
    m
}

/// The derivation algebra `der C`, as a basis of matrices.
pub fn derivations() -> Vec<Matrix> {
    let basis = so_basis();
    let defects: Vec<Vector> = basis
        .iter()
        .map(|d| {
            flatten(|i, j| {
                let (x, y) = (Octonion::basis(i), Octonion::basis(j));
                oct_mul(&x, &y).apply(d).sub(&oct_mul(&x.apply(d), &y)).sub(&oct_mul(&x, &y.apply(d)))
            })
        })
        .collect();
    let rows: Vec<Vector> = (0..512).map(|r| defects.iter().map(|v| v[r].clone()).collect()).collect();
    nullspace_rows(rows, basis.len()).iter().map(|c| combine(&basis, c)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialityTriple {
    pub d0: SOElement,
    pub d1: SOElement,
    pub d2: SOElement,
}

/// Solver for `d0(x*y) = d1(x)*y + x*d2(y)` under the `eta`-twisted product.
/// The 512 x 128 system, plus the `so(C, q)` conditions on `d1` and `d2`, is
/// reduced once against the 28 basis right-hand sides.
#[derive(Clone, Debug)]
pub struct Triality {
    eta: Eta,
    star: Vec<Vec<Octonion>>,
    basis: Vec<Matrix>,
    span: Span,
    lifts: Vec<(Matrix, Matrix)>,
}

const UNKNOWNS: usize = 128;

impl Triality {
    pub fn new(eta: Eta) -> Result<Self> {
        let star: Vec<Vec<Octonion>> = (0..8)
            .map(|i| (0..8).map(|j| eta_mul(&Octonion::basis(i), &Octonion::basis(j), &eta)).collect())
            .collect();
        let basis = so_basis();
        let span = Span::from_vectors(64, basis.iter().map(|m| m.flat().to_vec()));
        let rhs: Vec<Vector> = basis.iter().map(|d| Self::rhs(&star, d)).collect();
        let mut rows = Self::system(&star);
        for (r, row) in rows.iter_mut().enumerate() {
            row.extend(rhs.iter().map(|v| v[r].clone()));
        }
        let (red, pivots) = rref(rows, UNKNOWNS + basis.len());
        if pivots != (0..UNKNOWNS).collect::<Vec<_>>() {
            return Err(Error::Invalid("triality system is singular or inconsistent".into()));
        }
        let lifts = (0..basis.len())
            .map(|s| {
                let x: Vector = red.iter().map(|row| row[UNKNOWNS + s].clone()).collect();
                Self::unpack(&x)
            })
            .collect();
        Ok(Triality { eta, star, basis, span, lifts })
    }

    /// The untwisted triality, built once.
    pub fn standard() -> &'static Triality {
        static STD: OnceLock<Triality> = OnceLock::new();
        STD.get_or_init(|| Triality::new(Eta::identity()).expect("untwisted triality system is regular"))
    }

    pub fn eta(&self) -> &Eta {
        &self.eta
    }

    // unknowns: d1[k][i] at k*8+i, d2[k][j] at 64+k*8+j; one row per (i, j, coordinate)
    fn system(star: &[Vec<Octonion>]) -> Vec<Vector> {
        let mut rows = Vec::with_capacity(512);
        for i in 0..8 {
            for j in 0..8 {
                for r in 0..8 {
                    let mut row = vec![CycNum::zero(); UNKNOWNS];
                    for k in 0..8 {
                        row[k * 8 + i] += &star[k][j].0[r];
                        row[64 + k * 8 + j] += &star[i][k].0[r];
                    }
                    rows.push(row);
                }
            }
        }
        // (lambda, -lambda) solves the homogeneous identity, so pin d1 and d2
        // to so(C, q): entries of f^T B + B f vanish, B a permutation pairing
        let b = polar_matrix();
        let partner = |i: usize| (0..8).find(|&k| b.get(i, k).is_one()).expect("pairing");
        for offset in [0, 64] {
            for i in 0..8 {
                for j in i..8 {
                    let mut row = vec![CycNum::zero(); UNKNOWNS];
                    // (f^T B)_ij = f_{p(j), i}, (B f)_ij = f_{p(i), j}
                    row[offset + partner(j) * 8 + i] += &CycNum::one();
                    row[offset + partner(i) * 8 + j] += &CycNum::one();
                    rows.push(row);
                }
            }
        }
        rows
    }

    fn rhs(star: &[Vec<Octonion>], d0: &Matrix) -> Vector {
        let mut v = flatten(|i, j| star[i][j].apply(d0));
        v.resize(v.len() + 2 * 36, CycNum::zero());
        v
    }

    fn unpack(x: &[CycNum]) -> (Matrix, Matrix) {
        let d1 = Matrix::from_fn(8, 8, |k, i| x[k * 8 + i].clone());
        let d2 = Matrix::from_fn(8, 8, |k, j| x[64 + k * 8 + j].clone());
        (d1, d2)
    }

    fn triple(d0: &SOElement, d1: Matrix, d2: Matrix) -> Result<TrialityTriple> {
        Ok(TrialityTriple { d0: d0.clone(), d1: SOElement::new(d1)?, d2: SOElement::new(d2)? })
    }

    /// Lift assembled from the precomputed lifts of the basis.
    pub fn lift(&self, d0: &SOElement) -> Result<TrialityTriple> {
        let c = self.span.coordinates(d0.0.flat()).ok_or_else(|| Error::Invalid("input not in so(C,q)".into()))?;
        let (d1, d2) = (
            combine(&self.lifts.iter().map(|l| l.0.clone()).collect::<Vec<_>>(), &c),
            combine(&self.lifts.iter().map(|l| l.1.clone()).collect::<Vec<_>>(), &c),
        );
        Self::triple(d0, d1, d2)
    }

    /// Lift by a fresh solve of the full system for this single right-hand side.
    pub fn lift_direct(&self, d0: &SOElement) -> Result<TrialityTriple> {
        let rows = Self::system(&self.star);
        let a = Matrix::from_flat(rows.len(), UNKNOWNS, rows.into_iter().flatten().collect());
        let x = solve(&a, &Self::rhs(&self.star, &d0.0)).ok_or_else(|| Error::Invalid("input not in so(C,q)".into()))?;
        let (d1, d2) = Self::unpack(&x);
        Self::triple(d0, d1, d2)
    }

    /// Checks the defining identity on all pairs of basis vectors.
    pub fn satisfies(&self, t: &TrialityTriple) -> bool {
        (0..8).all(|i| {
            (0..8).all(|j| {
                let (x, y) = (Octonion::basis(i), Octonion::basis(j));
                let lhs = self.star[i][j].apply(&t.d0.0);
                let rhs = eta_mul(&x.apply(&t.d1.0), &y, &self.eta).add(&eta_mul(&x, &y.apply(&t.d2.0), &self.eta));
                lhs == rhs
            })
        })
    }

    /// `theta_eta(d) = d2`, for `d` in `so(C, q)`.
    pub fn theta(&self, d: &Matrix) -> Option<Matrix> {
        let c = self.span.coordinates(d.flat())?;
        Some(combine(&self.lifts.iter().map(|l| l.1.clone()).collect::<Vec<_>>(), &c))
    }

    fn theta_on_so(&self, d: &Matrix) -> Matrix {
        self.theta(d).expect("grading basis lies in so(C,q)")
    }

    fn basis(&self) -> &[Matrix] {
        &self.basis
    }
}

pub fn triality_lift(d0: &SOElement, eta: &Eta) -> Result<TrialityTriple> {
    Triality::new(eta.clone())?.lift_direct(d0)
}

pub fn theta(d0: &SOElement, eta: &Eta) -> Result<SOElement> {
    Ok(triality_lift(d0, eta)?.d2)
}

// ---------------------------------------------------------------------------
// The root system D4 and its automorphisms

pub type Root = [i64; 4];

/// `±e_i ± e_j`, `i < j`.
pub fn roots() -> Vec<Root> {
    let mut out = Vec::with_capacity(24);
    for i in 0..4 {
        for j in i + 1..4 {
            for (a, b) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                let mut r = [0; 4];
                r[i] = a;
                r[j] = b;
                out.push(r);
            }
        }
    }
    out
}

pub fn dot(a: &Root, b: &Root) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn neg(a: &Root) -> Root {
    a.map(|x| -x)
}

/// A linear map of `span(e0, .., e3)`, columns are images of the `e_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AutPhiElement(pub [[Rational; 4]; 4]);

impl AutPhiElement {
    pub fn identity() -> Self {
        AutPhiElement(std::array::from_fn(|i| std::array::from_fn(|j| Rational::from_integer((i == j) as i64))))
    }

    fn from_fn(f: impl Fn(usize, usize) -> Rational) -> Self {
        AutPhiElement(std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))))
    }

    /// `b -> b - (b|a) a`.
    pub fn reflection(a: &Root) -> Self {
        Self::from_fn(|i, j| Rational::from_integer((i == j) as i64 - a[i] * a[j]))
    }

    /// `e0 -> -e0`, the others fixed.
    pub fn iota_sigma() -> Self {
        Self::from_fn(|i, j| Rational::from_integer(if i != j { 0 } else if i == 0 { -1 } else { 1 }))
    }

    /// `e0` fixed, `e1 -> e2 -> e3 -> e1`.
    pub fn iota_tau() -> Self {
        let image = [0, 2, 3, 1];
        Self::from_fn(|i, j| Rational::from_integer((image[j] == i) as i64))
    }

    /// Triality on the Cartan subalgebra, `theta(h_j)` in column `j`.
    pub fn theta() -> Self {
        let cols = [[-1, -1, -1, -1], [1, 1, -1, -1], [1, -1, 1, -1], [1, -1, -1, 1]];
        Self::from_fn(|i, j| Rational::new(cols[j][i], 2))
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::from_fn(|i, j| (0..4).map(|k| self.0[i][k] * o.0[k][j]).sum())
    }

    /// Every element of the group is orthogonal.
    pub fn inverse(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i])
    }

    pub fn apply(&self, r: &Root) -> Option<Root> {
        let mut out = [0; 4];
        for (i, o) in out.iter_mut().enumerate() {
            let v: Rational = (0..4).map(|k| self.0[i][k] * Rational::from_integer(r[k])).sum();
            if !v.is_integer() {
                return None;
            }
            *o = v.to_integer();
        }
        Some(out)
    }

    pub fn permutes_roots(&self) -> bool {
        let phi: HashSet<Root> = roots().into_iter().collect();
        let image: HashSet<Root> = phi.iter().filter_map(|r| self.apply(r)).collect();
        image == phi
    }

    pub fn order(&self) -> u32 {
        let id = Self::identity();
        let mut p = self.clone();
        let mut k = 1;
        while p != id {
            p = p.mul(self);
            k += 1;
        }
        k
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_fn(4, 4, |i, j| CycNum::from_rational(self.0[i][j]))
    }
}

fn closure(gens: &[AutPhiElement]) -> Vec<AutPhiElement> {
    let mut seen: BTreeSet<AutPhiElement> = BTreeSet::new();
    let mut queue = VecDeque::from([AutPhiElement::identity()]);
    seen.insert(AutPhiElement::identity());
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.mul(g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen.into_iter().collect()
}

fn positive_reflections() -> Vec<AutPhiElement> {
    roots().iter().filter(|r| r.iter().find(|&&x| x != 0) == Some(&1)).map(AutPhiElement::reflection).collect()
}

pub fn weyl_group() -> Vec<AutPhiElement> {
    closure(&positive_reflections())
}

/// The group generated by the root reflections, `iota_sigma` and `theta`.
pub fn autphi_group() -> Vec<AutPhiElement> {
    let mut gens = positive_reflections();
    gens.push(AutPhiElement::iota_sigma());
    gens.push(AutPhiElement::theta());
    closure(&gens)
}

/// Conjugacy classes of the elements of order 3 in `group`.
pub fn order3_classes(group: &[AutPhiElement]) -> Vec<BTreeSet<AutPhiElement>> {
    let mut classes: Vec<BTreeSet<AutPhiElement>> = Vec::new();
    for x in group.iter().filter(|x| x.order() == 3) {
        if classes.iter().any(|c| c.contains(x)) {
            continue;
        }
        classes.push(group.iter().map(|g| g.mul(x).mul(&g.inverse())).collect());
    }
    classes
}

/// Pairwise property of a block: equal up to sign or orthogonal.
pub fn compatible(a: &Root, b: &Root) -> bool {
    a == b || *a == neg(b) || dot(a, b) == 0
}

/// `Phi_i = {±e0±e_i, ±e_i'±e_i''}`.
pub fn phi_blocks() -> [BTreeSet<Root>; 3] {
    std::array::from_fn(|b| {
        let i = b + 1;
        let (j, k) = match i {
            1 => (2, 3),
            2 => (1, 3),
            _ => (1, 2),
        };
        roots().into_iter().filter(|r| (r[0] != 0 && r[i] != 0) || (r[j] != 0 && r[k] != 0)).collect()
    })
}

/// All partitions of the roots into three blocks of eight with pairwise
/// compatible members; exhaustive backtracking with unlabelled blocks.
pub fn phi_partitions() -> Vec<Vec<BTreeSet<Root>>> {
    fn go(rest: &[Root], blocks: &mut Vec<Vec<Root>>, out: &mut Vec<Vec<BTreeSet<Root>>>) {
        let Some((r, rest)) = rest.split_first() else {
            out.push(blocks.iter().map(|b| b.iter().copied().collect()).collect());
            return;
        };
        for b in 0..blocks.len() {
            if blocks[b].len() < 8 && blocks[b].iter().all(|x| compatible(x, r)) {
                blocks[b].push(*r);
                go(rest, blocks, out);
                blocks[b].pop();
            }
        }
        if blocks.len() < 3 {
            blocks.push(vec![*r]);
            go(rest, blocks, out);
            blocks.pop();
        }
    }
    let mut out = Vec::new();
    go(&roots(), &mut Vec::new(), &mut out);
    out.retain(|p| p.len() == 3);
    out
}

/// True when the only admissible partition is `Phi_1, Phi_2, Phi_3`.
pub fn phi_partition_check() -> bool {
    let found = phi_partitions();
    let stated: BTreeSet<BTreeSet<Root>> = phi_blocks().into_iter().collect();
    found.len() == 1 && found[0].iter().cloned().collect::<BTreeSet<_>>() == stated
}

// ---------------------------------------------------------------------------
// Gradings with an outer automorphism of order 3

fn conj(f: &Matrix, fi: &Matrix, d: &Matrix) -> Matrix {
    f.mul(d).mul(fi)
}

/// Whether `x -> f x f^{-1}` commutes with `theta_eta` on `so(C, q)`.
pub fn commutes_with_theta(tri: &Triality, f: &Matrix) -> Result<bool> {
    let fi = f.inverse()?;
    Ok(tri.basis().iter().all(|d| tri.theta_on_so(&conj(f, &fi, d)) == conj(f, &fi, &tri.theta_on_so(d))))
}

/// Whether `f` or `-f` preserves the `eta`-twisted product.
pub fn twisted_automorphism_up_to_sign(eta: &Eta, f: &Matrix) -> bool {
    let b = |i| Octonion::basis(i);
    let mut sign: Option<bool> = None;
    for i in 0..8 {
        for j in 0..8 {
            let lhs = eta_mul(&b(i), &b(j), eta).apply(f);
            let rhs = eta_mul(&b(i).apply(f), &b(j).apply(f), eta);
            let s = if lhs == rhs && lhs.is_zero() {
                continue;
            } else if lhs == rhs {
                true
            } else if lhs.add(&rhs).is_zero() {
                false
            } else {
                return false;
            };
            if *sign.get_or_insert(s) != s {
                return false;
            }
        }
    }
    true
}

/// The 81 torus elements with all `b` cube roots of unity.
pub fn cube_root_torus() -> Vec<([i64; 4], Matrix)> {
    let mut out = Vec::with_capacity(81);
    for a in 0..3 {
        for b1 in 0..3 {
            for b2 in 0..3 {
                for b3 in 0..3 {
                    let e = [a, b1, b2, b3];
                    out.push((e, torus_element(3, e)));
                }
            }
        }
    }
    out
}

/// Torus elements among [`cube_root_torus`] whose conjugation commutes with `theta_eta`.
pub fn finite_centralizer(tri: &Triality) -> Result<Vec<([i64; 4], Matrix)>> {
    let mut out = Vec::new();
    for (e, f) in cube_root_torus() {
        if commutes_with_theta(tri, &f)? {
            out.push((e, f));
        }
    }
    Ok(out)
}

/// The involutive automorphisms of `C` of the shapes `diag(1,1,b,b)` with
/// `b_i = ±1`, `b1 b2 b3 = 1`, and their products with the exchange map.
pub fn involutive_candidates() -> Vec<Matrix> {
    let ex = exchange_matrix();
    let mut out = Vec::new();
    for b1 in [1, -1] {
        for b2 in [1, -1] {
            let b3 = b1 * b2;
            let d = Matrix::from_ints(&[
                &[1, 0, 0, 0, 0, 0, 0, 0],
                &[0, 1, 0, 0, 0, 0, 0, 0],
                &[0, 0, b1, 0, 0, 0, 0, 0],
                &[0, 0, 0, b2, 0, 0, 0, 0],
                &[0, 0, 0, 0, b3, 0, 0, 0],
                &[0, 0, 0, 0, 0, b1, 0, 0],
                &[0, 0, 0, 0, 0, 0, b2, 0],
                &[0, 0, 0, 0, 0, 0, 0, b3],
            ]);
            out.push(ex.mul(&d));
            out.push(d);
        }
    }
    let id = Matrix::identity(8);
    out.retain(|f| *f != id && is_automorphism(f) && f.mul(f) == id);
    out
}

/// Commuting triples of [`involutive_candidates`] generating `Z_2^3`, one per generated subgroup.
pub fn z2_cubed_triples() -> Vec<[Matrix; 3]> {
    let c = involutive_candidates();
    let mut groups: BTreeSet<BTreeSet<Matrix>> = BTreeSet::new();
    let mut out = Vec::new();
    for i in 0..c.len() {
        for j in i + 1..c.len() {
            for k in j + 1..c.len() {
                let t = [c[i].clone(), c[j].clone(), c[k].clone()];
                let commute = t.iter().all(|x| t.iter().all(|y| x.mul(y) == y.mul(x)));
                if !commute {
                    continue;
                }
                let mut g: BTreeSet<Matrix> = BTreeSet::new();
                for mask in 0..8u32 {
                    let mut m = Matrix::identity(8);
                    for (b, x) in t.iter().enumerate() {
                        if mask >> b & 1 == 1 {
                            m = m.mul(x);
                        }
                    }
                    g.insert(m);
                }
                if g.len() == 8 && groups.insert(g) {
                    out.push(t);
                }
            }
        }
    }
    out
}

fn so_grading(ops: &[GradingOperator<'_>]) -> Result<MatGrading> {
    let basis = so_basis();
    let g = grade_jointly(8, ProductKind::Lie, SpanKind::Subalgebra(basis.len()), &basis, ops)?;
    universal_group_of(&g)
}

fn theta_op(tri: &Triality) -> GradingOperator<'_> {
    GradingOperator::new("theta", Spectrum::Cyclic(3), move |x| tri.theta_on_so(x))
}

/// `ad(h1 - h2)`, `ad(h2 - h3)` and `theta`.
pub fn grading_a() -> Result<MatGrading> {
    let tri = Triality::standard();
    let h = cartan();
    let ops = [
        GradingOperator::adjoint("ad(h1-h2)", &h[1].sub(&h[2])),
        GradingOperator::adjoint("ad(h2-h3)", &h[2].sub(&h[3])),
        theta_op(tri),
    ];
    so_grading(&ops)
}

/// Conjugation by a `Z_2^3` of automorphisms of `C`, together with `theta`.
pub fn grading_b_candidates() -> Result<Vec<MatGrading>> {
    let tri = Triality::standard();
    let mut out = Vec::new();
    for t in z2_cubed_triples() {
        let mut ops = Vec::new();
        for (i, f) in t.iter().enumerate() {
            ops.push(GradingOperator::conjugation(format!("iota f{i}"), f, 2)?);
        }
        ops.push(theta_op(tri));
        out.push(so_grading(&ops)?);
    }
    Ok(out)
}

pub fn grading_b() -> Result<MatGrading> {
    grading_b_candidates()?.into_iter().next().ok_or_else(|| Error::Invalid("no Z_2^3 of automorphisms found".into()))
}

/// `theta_eta` together with two torus elements of its finite centralizer.
/// The first is `first` when given, else the first nontrivial element; the
/// second is searched for among the rest, demanding a `Z_3^3` universal group.
pub fn grading_c_with(eta: Eta, first: Option<Matrix>) -> Result<MatGrading> {
    let tri = Triality::new(eta)?;
    let cent: Vec<Matrix> = finite_centralizer(&tri)?.into_iter().map(|(_, f)| f).collect();
    let id = Matrix::identity(8);
    let g1 = match first {
        Some(f) if cent.contains(&f) => f,
        Some(_) => return Err(Error::Invalid("generator does not commute with theta_eta".into())),
        None => cent.iter().find(|f| **f != id).cloned().ok_or_else(|| Error::Invalid("trivial centralizer".into()))?,
    };
    let powers = [id.clone(), g1.clone(), g1.mul(&g1)];
    for g2 in cent.iter().filter(|f| !powers.contains(f)) {
        let ops = [
            GradingOperator::conjugation("iota g1", &g1, 3)?,
            GradingOperator::conjugation("iota g2", g2, 3)?,
            theta_op(&tri),
        ];
        let g = so_grading(&ops)?;
        if g.group.free_rank() == 0 && g.group.torsion() == [3, 3, 3] {
            return Ok(g);
        }
    }
    Err(Error::Invalid("no pair of centralizer elements gives a Z_3^3 eigenstructure".into()))
}

/// `theta_tau = iota_tau theta` with a pair from its nine-element torus centralizer.
pub fn grading_c() -> Result<MatGrading> {
    grading_c_with(Eta::new(tau_matrix())?, None)
}

pub fn build_triality_gradings() -> Result<[MatGrading; 3]> {
    Ok([grading_a()?, grading_b()?, grading_c()?])
}

// ---------------------------------------------------------------------------
// The so_8 table

#[derive(Clone, Debug, Serialize)]
pub struct D4Row {
    pub index: usize,
    /// Class key, `triality-a/b/c`, or `merged: <key> + <key>`.
    pub source: String,
    #[serde(flatten)]
    pub report: GradingReport,
}

/// The two classes of type (24,2) over `Z_2^3 x Z_4`, which are conjugate under triality.
fn merge_pair(reports: &[&GradingReport]) -> Result<(usize, usize)> {
    let hits: Vec<usize> = reports
        .iter()
        .enumerate()
        .filter(|(_, r)| r.type_ == [24, 2] && r.free_rank == 0 && r.torsion == [2, 2, 2, 4])
        .map(|(i, _)| i)
        .collect();
    match hits[..] {
        [a, b] if reports[a].division != reports[b].division => Ok((a, b)),
        _ => Err(Error::Invalid(format!("expected two (24,2) classes over Z_2^3 x Z_4, found {}", hits.len()))),
    }
}

pub fn d4_table(opts: &Options) -> Result<Vec<D4Row>> {
    let opts = Options { premerge: true, ..opts.clone() };
    let e = fine_gradings_so(8, &opts)?;
    let reports = e.reports();
    let (keep, drop) = merge_pair(&reports)?;
    let mut rows = Vec::new();
    for (i, r) in reports.iter().enumerate() {
        if i == drop {
            continue;
        }
        let mut report = (*r).clone();
        let source = if i == keep {
            report.provenance = Provenance::Merged;
            format!("merged: {} + {}", r.tuple, reports[drop].tuple)
        } else {
            r.tuple.clone()
        };
        rows.push((source, report));
    }
    for (name, g) in ["triality-a", "triality-b", "triality-c"].into_iter().zip(build_triality_gradings()?) {
        rows.push((name.to_string(), GradingReport::from_grading(Family::So, 8, "-", "-", Provenance::Triality, &g)));
    }
    Ok(rows.into_iter().enumerate().map(|(i, (source, report))| D4Row { index: i + 1, source, report }).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half(v: [i64; 4]) -> Matrix {
        let h = cartan();
        let mut m = Matrix::zeros(8, 8);
        for (c, x) in v.iter().zip(&h) {
            m = m.add(&x.scale(&CycNum::from_rational(Rational::new(*c, 2))));
        }
        m
    }

    fn shape(g: &MatGrading) -> (usize, Vec<i64>, Vec<usize>) {
        (g.group.free_rank(), g.group.torsion(), g.type_of())
    }

    #[test]
    fn multiplication_table() {
        let b = Octonion::basis;
        assert_eq!(oct_mul(&b(U[0]), &b(U[1])), b(V[2]));
        assert_eq!(oct_mul(&b(U[1]), &b(U[0])), b(V[2]).scale(&CycNum::from_int(-1)));
        assert_eq!(oct_mul(&b(E1), &b(U[0])), b(U[0]));
        assert_eq!(oct_mul(&b(U[0]), &b(E2)), b(U[0]));
        assert!(oct_mul(&b(E2), &b(U[0])).is_zero());
        assert_eq!(oct_mul(&b(V[2]), &b(U[2])), b(E2).scale(&CycNum::from_int(-1)));
        let one = Octonion::one();
        for i in 0..8 {
            assert_eq!(oct_mul(&one, &b(i)), b(i));
            assert_eq!(oct_mul(&b(i), &one), b(i));
        }
    }

    #[test]
    fn conjugation_reverses_products() {
        let b = Octonion::basis;
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(oct_conj(&oct_mul(&b(i), &b(j))), oct_mul(&oct_conj(&b(j)), &oct_conj(&b(i))));
            }
        }
    }

    #[test]
    fn twisted_products() {
        let id = Eta::identity();
        let b = Octonion::basis;
        assert_eq!(eta_mul(&b(E1), &b(E1), &id), b(E2));
        assert_eq!(eta_mul(&Octonion::one(), &Octonion::one(), &id), Octonion::one());
        let tau = tau_matrix();
        assert!(is_automorphism(&tau));
        assert!(Eta::new(tau.clone()).is_ok());
        assert_eq!(b(E1).apply(&tau), b(E1));
        assert!(Eta::new(exchange_matrix()).is_err());
        let mut bad = Matrix::identity(8);
        bad.set(E1, E1, CycNum::from_int(2));
        assert!(Eta::new(bad).is_err());
        assert!(is_automorphism(&exchange_matrix()));
        assert!(is_automorphism(&tau_omega_matrix()));
    }

    #[test]
    fn dimensions() {
        assert_eq!(so_basis().len(), 28);
        assert!(so_basis().iter().all(in_so));
        assert!(cartan().iter().all(in_so));
        let der = derivations();
        assert_eq!(der.len(), 14);
        assert!(der.iter().all(in_so));
        let one = Octonion::one();
        assert!(der.iter().all(|d| one.apply(d).is_zero()));
    }

    #[test]
    fn theta_on_cartan() {
        let tri = Triality::standard();
        let h = cartan();
        assert_eq!(tri.theta(&h[0]).unwrap(), half([-1, -1, -1, -1]));
        assert_eq!(tri.theta(&h[1]).unwrap(), half([1, 1, -1, -1]));
        assert_eq!(tri.theta(&h[2]).unwrap(), half([1, -1, 1, -1]));
        assert_eq!(tri.theta(&h[3]).unwrap(), half([1, -1, -1, 1]));
        let d = h[1].sub(&h[2]);
        assert_eq!(tri.theta(&d).unwrap(), d);
        // the Cartan action agrees with the root-system matrix
        let m = AutPhiElement::theta();
        for (j, x) in h.iter().enumerate() {
            let img = tri.theta(x).unwrap();
            for i in 0..4 {
                let coeff = if i == 0 { img.get(E1, E1).clone() } else { img.get(U[i - 1], U[i - 1]).clone() };
                assert_eq!(coeff, CycNum::from_rational(m.0[i][j]), "theta(h{j}) along h{i}");
            }
        }
    }

    #[test]
    fn theta_is_an_order_three_automorphism() {
        let tri = Triality::standard();
        let basis = so_basis();
        for x in &basis {
            let t = |d: &Matrix| tri.theta(d).unwrap();
            assert_eq!(t(&t(&t(x))), *x);
            for y in &basis {
                assert_eq!(t(&x.commutator(y)), t(x).commutator(&t(y)));
            }
        }
        for d in derivations() {
            assert_eq!(tri.theta(&d).unwrap(), d);
            let t = tri.lift(&SOElement::new(d.clone()).unwrap()).unwrap();
            assert_eq!((t.d1.matrix(), t.d2.matrix()), (&d, &d));
        }
    }

    #[test]
    fn precomputed_and_direct_lifts_agree() {
        let tri = Triality::standard();
        for (k, x) in so_basis().iter().enumerate().step_by(5) {
            let d = SOElement::new(x.clone()).unwrap();
            let a = tri.lift(&d).unwrap();
            assert!(tri.satisfies(&a));
            assert_eq!(a, tri.lift_direct(&d).unwrap(), "basis {k}");
        }
        assert!(SOElement::new(Matrix::identity(8)).is_err());
    }

    #[test]
    fn twisted_theta_is_conjugated_theta() {
        let tau = tau_matrix();
        let tt = Triality::new(Eta::new(tau.clone()).unwrap()).unwrap();
        let std = Triality::standard();
        let ti = tau.inverse().unwrap();
        for x in so_basis() {
            let lhs = tt.theta(&x).unwrap();
            assert_eq!(lhs, conj(&tau, &ti, &std.theta(&x).unwrap()));
            assert_eq!(lhs, std.theta(&conj(&tau, &ti, &x)).unwrap());
        }
    }

    #[test]
    fn root_system_group() {
        assert_eq!(weyl_group().len(), 192);
        let g = autphi_group();
        assert_eq!(g.len(), 1152);
        assert!(g.iter().all(|x| x.permutes_roots() && x.mul(&x.inverse()) == AutPhiElement::identity()));
        assert!(g.iter().all(|x| x.order() != 9));
        let classes = order3_classes(&g);
        assert_eq!(classes.len(), 3);
        let t = AutPhiElement::theta();
        let it = AutPhiElement::iota_tau();
        let reps = [it.clone(), t.clone(), it.mul(&t)];
        let idx: BTreeSet<usize> = reps.iter().map(|r| classes.iter().position(|c| c.contains(r)).unwrap()).collect();
        assert_eq!(idx.len(), 3);
        let s = |a: Root| AutPhiElement::reflection(&a);
        assert_eq!(it, s([0, 1, -1, 0]).mul(&s([0, 0, 1, -1])));
    }

    #[test]
    fn root_partition_is_unique() {
        for block in phi_blocks() {
            assert_eq!(block.len(), 8);
            assert!(block.iter().all(|a| block.iter().all(|b| compatible(a, b))));
        }
        assert!(!compatible(&[1, -1, 0, 0], &[1, 0, -1, 0]));
        assert!(phi_partition_check());
    }

    #[test]
    fn finite_centralizers() {
        let id_tri = Triality::standard();
        let tau = tau_matrix();
        let tt = Triality::new(Eta::new(tau.clone()).unwrap()).unwrap();
        let cent = finite_centralizer(&tt).unwrap();
        assert_eq!(cent.len(), 9);
        // constraint form: b0^3 = 1, b1 = b0 b3, b2 = b0 b1, b3 = b0 b2
        for (e, _) in &cent {
            let [a, b1, b2, b3] = *e;
            assert_eq!(((b1 - a - b3) % 3, (b2 - a - b1) % 3, (b3 - a - b2) % 3), (0, 0, 0));
        }
        let eta = Eta::new(tau).unwrap();
        let second: Vec<[i64; 4]> = cube_root_torus()
            .into_iter()
            .filter(|(_, f)| twisted_automorphism_up_to_sign(&eta, f))
            .map(|(e, _)| e)
            .collect();
        assert_eq!(second, cent.iter().map(|c| c.0).collect::<Vec<_>>());
        let tw = tau_omega_matrix();
        assert!(!cent.iter().any(|(_, f)| *f == tw));
        assert!(commutes_with_theta(id_tri, &tw).unwrap());
        let tw_tri = Triality::new(Eta::new(tw.clone()).unwrap()).unwrap();
        let cent_w = finite_centralizer(&tw_tri).unwrap();
        assert_eq!(cent_w.len(), 9);
        assert!(cent_w.iter().any(|(_, f)| *f == tw));
    }

    #[test]
    fn outer_gradings() {
        assert_eq!(shape(&grading_a().unwrap()), (2, vec![3], vec![26, 1]));
        let b = grading_b_candidates().unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(shape(&b[0]), (0, vec![2, 2, 6], vec![14, 7]));
        assert_eq!(shape(&grading_c().unwrap()), (0, vec![3, 3, 3], vec![24, 2]));
        // tau_w does not centralize iota_tau theta, and the quasitorus it
        // generates with theta_{tau_w} only yields a coarsening
        let tw = tau_omega_matrix();
        assert!(grading_c_with(Eta::new(tau_matrix()).unwrap(), Some(tw.clone())).is_err());
        let tri = Triality::new(Eta::new(tw.clone()).unwrap()).unwrap();
        let cent: Vec<Matrix> = finite_centralizer(&tri).unwrap().into_iter().map(|c| c.1).collect();
        let g2 = cent.iter().find(|f| ![Matrix::identity(8), tw.clone(), tw.mul(&tw)].contains(f)).unwrap();
        let ops = [
            GradingOperator::conjugation("tw", &tw, 3).unwrap(),
            GradingOperator::conjugation("g2", g2, 3).unwrap(),
            theta_op(&tri),
        ];
        assert_eq!(shape(&so_grading(&ops).unwrap()).2, vec![20, 1, 2]);
        for g in build_triality_gradings().unwrap() {
            assert!(crate::liealg::verify_lie(&g).is_empty());
        }
    }
}
