//! Equivalence invariants of the fine gradings attached to `D = Q^{(x) m}`.
//!
//! An I-tuple is a multiset of labels of `H = Z_2^{2m}`. Two tuples are
//! equivalent when a translation `h -> z + h` followed by a graded automorphism
//! of `D` (acting on `H` through the symplectic group of `beta`) maps one onto
//! the other. An I2-tuple also carries a graded involution, recorded as the
//! twist `w` of the transpose: its quadratic form is `q(h) = a.b(h) + beta(w, h)`.
//! Translating by `z` moves `w` to `w + z`; an automorphism `A` moves `w` to
//! `A w + c_A`, where `c_A` measures how `A` moves the transpose form.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::Hash;

use serde::Serialize;

use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::involutions::{beta, render_label, transpose_form, GradedInvolution, InvolutionKind, Label, QuatPower};
use crate::linalg::Matrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ITuple {
    pub m: usize,
    pub labels: Vec<Label>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct I2Tuple {
    pub m: usize,
    /// Kind of the antiautomorphism the tuple describes.
    pub phi_kind: InvolutionKind,
    /// The involution of `D` is the transpose twisted by `X_twist`.
    pub twist: Label,
    pub labels: Vec<Label>,
}

fn division_name(m: usize) -> String {
    match m {
        0 => "F".into(),
        1 => "Q".into(),
        _ => format!("Q^{m}"),
    }
}

fn render_labels(m: usize, labels: &[Label]) -> String {
    labels.iter().map(|&h| render_label(m, h)).collect::<Vec<_>>().join(", ")
}

impl ITuple {
    pub fn new(m: usize, mut labels: Vec<Label>) -> Self {
        labels.sort_unstable();
        ITuple { m, labels }
    }
}

impl fmt::Display for ITuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},({})]", division_name(self.m), render_labels(self.m, &self.labels))
    }
}

impl fmt::Display for I2Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[({},t={}),({})]",
            division_name(self.m),
            render_label(self.m, self.twist),
            render_labels(self.m, &self.labels)
        )
    }
}

/// Value of the quadratic form of the twisted transpose.
pub fn form_value(w: Label, h: Label) -> u32 {
    transpose_form(h) ^ beta(w, h)
}

/// Kind of the transpose twisted by `X_w`.
pub fn twist_kind(w: Label) -> InvolutionKind {
    if transpose_form(w) == 0 {
        InvolutionKind::Orthogonal
    } else {
        InvolutionKind::Symplectic
    }
}

impl I2Tuple {
    /// Validates that all labels share one symmetry type and that it matches `phi_kind`.
    pub fn new(m: usize, phi_kind: InvolutionKind, twist: Label, mut labels: Vec<Label>) -> Result<Self> {
        labels.sort_unstable();
        let vals: HashSet<u32> = labels.iter().map(|&h| form_value(twist, h)).collect();
        if vals.len() > 1 {
            return Err(Error::MixedSymmetry);
        }
        if let Some(&c) = vals.iter().next() {
            let k = twist_kind(twist);
            let expect = if c == 0 { k } else { k.flip() };
            if expect != phi_kind {
                return Err(Error::KindMismatch);
            }
        }
        Ok(I2Tuple { m, phi_kind, twist, labels })
    }

    /// Builds a tuple from an explicit involution of `D`.
    pub fn from_involution(tau: &GradedInvolution, phi_kind: InvolutionKind, labels: Vec<Label>) -> Result<Self> {
        let m = tau.m;
        let reference = GradedInvolution::transpose(m);
        let twist = (0..1u32 << (2 * m))
            .find(|&w| (0..reference.signs.len() as u32).all(|h| {
                let s = if form_value(w, h) == 0 { 1 } else { -1 };
                s == tau.sign(h)
            }))
            .ok_or(Error::NotInvolutionSign)?;
        Self::new(m, phi_kind, twist, labels)
    }

    /// Whether the labels are symmetric (`true`) for the involution; `None` when empty.
    pub fn hermitian(&self) -> Option<bool> {
        self.labels.first().map(|&h| form_value(self.twist, h) == 0)
    }
}

/// Symplectic transvection `h -> h + beta(h, v) v`.
pub fn transvection(v: Label, h: Label) -> Label {
    if beta(h, v) == 1 {
        h ^ v
    } else {
        h
    }
}

fn sorted(mut v: Vec<Label>) -> Vec<Label> {
    v.sort_unstable();
    v
}

/// The moves generating the symmetry group on labels: translations by the
/// basis vectors and all transvections.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Move {
    Translate(Label),
    Transvect(Label),
}

pub fn moves(m: usize) -> Vec<Move> {
    let mut out: Vec<Move> = (0..2 * m).map(|b| Move::Translate(1 << b)).collect();
    out.extend((1..1u32 << (2 * m)).map(Move::Transvect));
    out
}

pub fn apply_i(mv: Move, t: &ITuple) -> ITuple {
    let labels = match mv {
        Move::Translate(z) => t.labels.iter().map(|h| h ^ z).collect(),
        Move::Transvect(v) => t.labels.iter().map(|&h| transvection(v, h)).collect(),
    };
    ITuple { m: t.m, labels: sorted(labels) }
}

pub fn apply_i2(mv: Move, t: &I2Tuple) -> I2Tuple {
    let (twist, labels) = match mv {
        Move::Translate(z) => (t.twist ^ z, t.labels.iter().map(|h| h ^ z).collect()),
        Move::Transvect(v) => {
            let c = if transpose_form(v) == 0 { v } else { 0 };
            (transvection(v, t.twist) ^ c, t.labels.iter().map(|&h| transvection(v, h)).collect())
        }
    };
    I2Tuple { m: t.m, phi_kind: t.phi_kind, twist, labels: sorted(labels) }
}

fn orbit<S: Clone + Eq + Hash + Ord>(start: S, step: impl Fn(&S) -> Vec<S>, seen: &mut HashSet<S>) -> S {
    let mut best = start.clone();
    let mut queue = VecDeque::from([start.clone()]);
    seen.insert(start);
    while let Some(s) = queue.pop_front() {
        for t in step(&s) {
            if !seen.contains(&t) {
                if t < best {
                    best = t.clone();
                }
                seen.insert(t.clone());
                queue.push_back(t);
            }
        }
    }
    best
}

pub fn canonicalize_i(t: &ITuple) -> ITuple {
    let mv = moves(t.m);
    let mut seen = HashSet::new();
    orbit(ITuple::new(t.m, t.labels.clone()), |s| mv.iter().map(|&x| apply_i(x, s)).collect(), &mut seen)
}

pub fn canonicalize_i2(t: &I2Tuple) -> I2Tuple {
    let mv = moves(t.m);
    let mut seen = HashSet::new();
    let start = I2Tuple { labels: sorted(t.labels.clone()), ..t.clone() };
    orbit(start, |s| mv.iter().map(|&x| apply_i2(x, s)).collect(), &mut seen)
}

pub fn equivalent_i(a: &ITuple, b: &ITuple) -> bool {
    a.m == b.m && a.labels.len() == b.labels.len() && canonicalize_i(a) == canonicalize_i(b)
}

pub fn equivalent_i2(a: &I2Tuple, b: &I2Tuple) -> Result<bool> {
    if a.phi_kind != b.phi_kind {
        return Err(Error::KindMismatch);
    }
    Ok(a.m == b.m && a.labels.len() == b.labels.len() && canonicalize_i2(a) == canonicalize_i2(b))
}

/// All multisets of size `p` from `0..n`, in lexicographic order.
pub fn multisets(n: u32, p: usize) -> Vec<Vec<Label>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(p);
    fn rec(n: u32, p: usize, start: u32, cur: &mut Vec<Label>, out: &mut Vec<Vec<Label>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for h in start..n {
            cur.push(h);
            rec(n, p, h, cur, out);
            cur.pop();
        }
    }
    rec(n, p, 0, &mut cur, &mut out);
    out
}

/// Canonical representatives of the I-tuples of size `p` over `Q^{(x) m}`.
pub fn i_classes(m: usize, p: usize) -> Vec<ITuple> {
    let mv = moves(m);
    let mut seen = HashSet::new();
    let mut reps = Vec::new();
    for labels in multisets(1 << (2 * m), p) {
        let t = ITuple { m, labels };
        if !seen.contains(&t) {
            reps.push(orbit(t, |s| mv.iter().map(|&x| apply_i(x, s)).collect(), &mut seen));
        }
    }
    reps
}

/// Canonical representatives of the I2-tuples of size `p` describing an
/// antiautomorphism of the given kind.
pub fn i2_classes(m: usize, p: usize, phi_kind: InvolutionKind) -> Vec<I2Tuple> {
    let mv = moves(m);
    let mut seen = HashSet::new();
    let mut reps = Vec::new();
    let sets = multisets(1 << (2 * m), p);
    for w in 0..1u32 << (2 * m) {
        for labels in &sets {
            let Ok(t) = I2Tuple::new(m, phi_kind, w, labels.clone()) else { continue };
            if !seen.contains(&t) {
                reps.push(orbit(t, |s| mv.iter().map(|&x| apply_i2(x, s)).collect(), &mut seen));
            }
        }
    }
    reps
}

/// Matrix-level model of the same symmetries: generators are conjugations by
/// Clifford elements `1 + i y_v` (`y_v` a unit multiple of `X_v` squaring to 1),
/// and all actions are read off actual matrix products.
pub struct MatrixModel {
    pub m: usize,
    /// `label_perm[g][h]`: label of `U_g X_h U_g^{-1}`.
    label_perm: Vec<Vec<Label>>,
    /// `twist_perm[g][w]`: twist of `U_g tau_w U_g^{-1}`.
    twist_perm: Vec<Vec<Label>>,
    /// Translations by basis labels, computed from `X_z X_h` and `X_z S_w`.
    trans_label: Vec<Vec<Label>>,
    trans_twist: Vec<Vec<Label>>,
}

impl MatrixModel {
    pub fn new(m: usize) -> Self {
        let qp = QuatPower::new(m);
        let n = qp.order() as u32;
        let i4 = CycNum::root_of_unity(4, 1);
        let reference = GradedInvolution::transpose(m);
        let twists: Vec<GradedInvolution> = (0..n).map(|w| reference.twist_label(&qp, w)).collect();
        let twist_of = |inv: &GradedInvolution| twists.iter().position(|t| t.signs == inv.signs).expect("twist") as Label;
        let mut label_perm = Vec::new();
        let mut twist_perm = Vec::new();
        for v in 1..n {
            let x = qp.x(v);
            let sq = x.mul(x).get(0, 0).clone();
            let y = x.scale(&sq.sqrt_root_of_unity().expect("unit").inv().expect("nonzero"));
            let u = Matrix::identity(qp.size()).add(&y.scale(&i4));
            let ui = u.inverse().expect("invertible");
            label_perm.push((0..n).map(|h| qp.identify(&u.mul(qp.x(h)).mul(&ui)).expect("graded").0).collect());
            twist_perm.push(
                twists
                    .iter()
                    .map(|t| {
                        let s = u.mul(&t.s).mul(&u.transpose());
                        twist_of(&GradedInvolution::from_realization(&qp, s).expect("involution"))
                    })
                    .collect(),
            );
        }
        let mut trans_label = Vec::new();
        let mut trans_twist = Vec::new();
        for b in 0..2 * m {
            let z = 1u32 << b;
            trans_label.push((0..n).map(|h| qp.identify(&qp.x(z).mul(qp.x(h))).expect("graded").0).collect());
            trans_twist.push(
                twists
                    .iter()
                    .map(|t| twist_of(&GradedInvolution::from_realization(&qp, qp.x(z).mul(&t.s)).expect("involution")))
                    .collect(),
            );
        }
        MatrixModel { m, label_perm, twist_perm, trans_label, trans_twist }
    }

    fn steps(&self, t: &I2Tuple) -> Vec<I2Tuple> {
        let mk = |tw: &Vec<Label>, lp: &Vec<Label>| I2Tuple {
            m: t.m,
            phi_kind: t.phi_kind,
            twist: tw[t.twist as usize],
            labels: sorted(t.labels.iter().map(|&h| lp[h as usize]).collect()),
        };
        self.label_perm
            .iter()
            .zip(&self.twist_perm)
            .chain(self.trans_label.iter().zip(&self.trans_twist))
            .map(|(lp, tw)| mk(tw, lp))
            .collect()
    }

    pub fn canonicalize_i2(&self, t: &I2Tuple) -> I2Tuple {
        let mut seen = HashSet::new();
        let start = I2Tuple { labels: sorted(t.labels.clone()), ..t.clone() };
        orbit(start, |s| self.steps(s), &mut seen)
    }

    fn i_steps(&self, s: &ITuple) -> Vec<ITuple> {
        self.label_perm
            .iter()
            .chain(&self.trans_label)
            .map(|lp| ITuple { m: s.m, labels: sorted(s.labels.iter().map(|&h| lp[h as usize]).collect()) })
            .collect()
    }

    pub fn canonicalize_i(&self, t: &ITuple) -> ITuple {
        let mut seen = HashSet::new();
        orbit(ITuple::new(t.m, t.labels.clone()), |s| self.i_steps(s), &mut seen)
    }
}

/// Orbit representative of every state, computed over the whole state space.
fn class_map<S: Clone + Eq + Hash + Ord>(states: Vec<S>, step: impl Fn(&S) -> Vec<S>) -> HashMap<S, S> {
    let mut out = HashMap::new();
    for s in states {
        if out.contains_key(&s) {
            continue;
        }
        let mut seen = HashSet::new();
        let rep = orbit(s, &step, &mut seen);
        out.extend(seen.into_iter().map(|t| (t, rep.clone())));
    }
    out
}

fn i2_states(m: usize, p: usize, phi_kind: InvolutionKind) -> Vec<I2Tuple> {
    let sets = multisets(1 << (2 * m), p);
    (0..1u32 << (2 * m))
        .flat_map(|w| sets.iter().filter_map(move |l| I2Tuple::new(m, phi_kind, w, l.clone()).ok()))
        .collect()
}

/// Whether the combinatorial and matrix-level models induce the same
/// partition of the I2-tuples of size `p`.
pub fn cross_check_i2(model: &MatrixModel, p: usize, phi_kind: InvolutionKind) -> bool {
    let m = model.m;
    let mv = moves(m);
    let a = class_map(i2_states(m, p, phi_kind), |s| mv.iter().map(|&x| apply_i2(x, s)).collect());
    let b = class_map(i2_states(m, p, phi_kind), |s| model.steps(s));
    a == b
}

pub fn cross_check_i(model: &MatrixModel, p: usize) -> bool {
    let m = model.m;
    let states: Vec<ITuple> = multisets(1 << (2 * m), p).into_iter().map(|l| ITuple { m, labels: l }).collect();
    let mv = moves(m);
    let a = class_map(states.clone(), |s| mv.iter().map(|&x| apply_i(x, s)).collect());
    let b = class_map(states, |s| model.i_steps(s));
    a == b
}
