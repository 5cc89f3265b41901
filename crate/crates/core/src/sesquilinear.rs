//! Balanced sesquilinear forms over `D = Q^{(x) m}` and the induced
//! antiautomorphisms of `R = Mat_k(D)`.
//!
//! `R` is realized as `Mat_k (x) Mat_{2^m}`. With the involution realized by
//! `S`, the adjoint map is `phi(A) = M^{-1} A^T M` where `M = (I (x) S)^{-1} Delta`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::abgroup::{FinAbGroup, GrpElt, Presentation};
use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::graded::{universal_group_of, MatGrading, ProductKind, SpanKind};
use crate::involutions::{parse_label, render_label, GradedInvolution, InvolutionKind, Label, QuatPower};
use crate::linalg::{Matrix, Span};

#[derive(Clone, Debug)]
pub struct FormSpec {
    pub qp: QuatPower,
    pub tau: GradedInvolution,
    pub d_labels: Vec<Label>,
    /// Roots of unity of the hyperbolic blocks.
    pub nus: Vec<CycNum>,
}

/// Antiautomorphism `A -> M^{-1} A^T M`.
#[derive(Clone, Debug)]
pub struct PhiMap {
    pub m: Matrix,
    pub m_inv: Matrix,
}

impl PhiMap {
    pub fn apply(&self, a: &Matrix) -> Matrix {
        self.m_inv.mul(&a.transpose()).mul(&self.m)
    }
}

impl FormSpec {
    pub fn new(m: usize, tau: GradedInvolution, d_labels: Vec<Label>, nus: Vec<CycNum>) -> Result<Self> {
        let qp = QuatPower::new(m);
        if tau.m != m {
            return Err(Error::Dimension("involution acts on a different algebra".into()));
        }
        if d_labels.iter().any(|&h| h as usize >= qp.order()) {
            return Err(Error::Invalid("label outside the support of D".into()));
        }
        if nus.iter().any(|n| n.as_root_of_unity().is_none()) {
            return Err(Error::Invalid("hyperbolic coefficients must be roots of unity".into()));
        }
        Ok(FormSpec { qp, tau, d_labels, nus })
    }

    pub fn m(&self) -> usize {
        self.qp.m
    }

    pub fn p(&self) -> usize {
        self.d_labels.len()
    }

    pub fn s(&self) -> usize {
        self.nus.len()
    }

    pub fn k(&self) -> usize {
        self.p() + 2 * self.s()
    }

    /// Size of the matrices of `R`.
    pub fn size(&self) -> usize {
        self.k() * self.qp.size()
    }

    pub fn delta(&self) -> Matrix {
        let d = self.qp.size();
        let mut blocks: Vec<Matrix> = self.d_labels.iter().map(|&h| self.qp.x(h).clone()).collect();
        for nu in &self.nus {
            let hyp = Matrix::from_fn(2, 2, |i, j| match (i, j) {
                (0, 1) => nu.clone(),
                (1, 0) => nu.inv().expect("root of unity"),
                _ => CycNum::zero(),
            });
            blocks.push(hyp.kron(&Matrix::identity(d)));
        }
        Matrix::block_diag(&blocks)
    }

    pub fn phi(&self) -> PhiMap {
        let big_s = Matrix::identity(self.k()).kron(&self.tau.s);
        let m = big_s.inverse().expect("invertible").mul(&self.delta());
        let m_inv = m.inverse().expect("nondegenerate form");
        PhiMap { m, m_inv }
    }

    /// `eps_i` with `Gamma = diag(eps_i)`.
    pub fn epsilons(&self) -> Vec<CycNum> {
        let mut e: Vec<CycNum> = self.d_labels.iter().map(|&h| CycNum::from_int(self.tau.sign(h) as i64)).collect();
        for nu in &self.nus {
            let sq = nu * nu;
            e.push(sq.clone());
            e.push(sq.inv().expect("root of unity"));
        }
        e
    }

    pub fn gamma(&self) -> Matrix {
        Matrix::diag(&self.epsilons()).kron(&Matrix::identity(self.qp.size()))
    }

    /// Order of `phi` as a map (`2` for involutions).
    pub fn phi_order(&self) -> u32 {
        let e = self.epsilons();
        let Some(first) = e.first() else { return 2 };
        let mut t = 1u32;
        for x in &e {
            let (n, _) = x.div(first).expect("nonzero").as_root_of_unity().expect("root of unity");
            t = num_integer::lcm(t, n);
        }
        2 * t
    }

    /// Kind of `phi` when it is an involution.
    pub fn phi_kind(&self) -> Option<InvolutionKind> {
        if self.phi_order() != 2 {
            return None;
        }
        let tk = self.tau.kind().ok()?;
        let e = self.epsilons();
        let c = e.first().cloned().unwrap_or_else(CycNum::one);
        if c.is_one() {
            Some(tk)
        } else {
            Some(tk.flip())
        }
    }

    /// `B(X, Y) = S X^T M Y` for column blocks `X`, `Y` of size `k 2^m x 2^m`.
    pub fn form(&self, x: &Matrix, y: &Matrix) -> Matrix {
        let phi = self.phi();
        self.tau.s.mul(&x.transpose()).mul(&phi.m).mul(y)
    }

    fn degenerate(&self) -> bool {
        self.p() == 2 && self.s() == 0 && self.d_labels[0] == self.d_labels[1]
    }

    /// Presentation of the refined group: generators `g~_1..g~_k` then the `2m`
    /// generators of `H`.
    pub fn refined_presentation(&self) -> Presentation {
        let k = self.k();
        let mm = 2 * self.m();
        let mut pres = Presentation::new(k + mm);
        for (i, &h) in self.d_labels.iter().enumerate() {
            let mut rel = vec![0; k + mm];
            rel[i] = 2;
            for (b, x) in self.qp.bits(h).into_iter().enumerate() {
                rel[k + b] = x;
            }
            pres.relate(rel);
        }
        for j in 0..self.s() {
            let a = self.p() + 2 * j;
            pres.relate_sparse(&[(a, 1), (a + 1, 1)]);
        }
        for b in 0..mm {
            pres.relate_sparse(&[(k + b, 2)]);
        }
        pres
    }

    fn refined_label(&self, group: &FinAbGroup, i: usize, j: usize, h: Label) -> GrpElt {
        let k = self.k();
        let mut v = vec![0i64; k + 2 * self.m()];
        v[i] += 1;
        v[j] -= 1;
        for (b, x) in self.qp.bits(h).into_iter().enumerate() {
            v[k + b] = x;
        }
        group.image(&v)
    }

    /// Fine phi-grading of `R` over the presented refined group.
    pub fn refined_grading_raw(&self) -> Result<MatGrading> {
        if self.degenerate() {
            return Err(Error::NotFine);
        }
        let group = FinAbGroup::from_presentation(&self.refined_presentation());
        let k = self.k();
        let mut items = Vec::new();
        for i in 0..k {
            for j in 0..k {
                for h in self.qp.labels() {
                    let label = self.refined_label(&group, i, j, h);
                    items.push((label, Matrix::unit(k, i, j).kron(self.qp.x(h))));
                }
            }
        }
        Ok(MatGrading::from_labeled(self.size(), ProductKind::Associative, SpanKind::Full, group, items))
    }

    /// The refined grading over its universal group.
    pub fn refined_grading(&self) -> Result<MatGrading> {
        universal_group_of(&self.refined_grading_raw()?)
    }

    /// Condition for degrees `g_i` to give a phi-grading: `eps_i / eps_j = eps_i' / eps_j'`
    /// whenever `(g_i - g_j) - (g_i' - g_j')` lies in the image of `H`.
    pub fn is_phi_grading_with(&self, degrees: &[GrpElt], h_image: &[GrpElt]) -> Result<bool> {
        let k = self.k();
        if degrees.len() != k {
            return Err(Error::Dimension(format!("{} degrees for {k} coordinates", degrees.len())));
        }
        let hs: HashSet<&GrpElt> = h_image.iter().collect();
        let eps = self.epsilons();
        let mut seen: Vec<(GrpElt, CycNum)> = Vec::new();
        for i in 0..k {
            for j in 0..k {
                let d = degrees[i].sub(&degrees[j])?;
                let r = eps[i].div(&eps[j])?;
                for (d2, r2) in &seen {
                    if hs.contains(&d.sub(d2)?) && r != *r2 {
                        return Ok(false);
                    }
                }
                seen.push((d, r));
            }
        }
        Ok(true)
    }

    pub fn is_phi_grading(&self) -> bool {
        let group = FinAbGroup::from_presentation(&self.refined_presentation());
        let k = self.k();
        let unit = |i: usize| {
            let mut v = vec![0i64; k + 2 * self.m()];
            v[i] = 1;
            group.image(&v)
        };
        let degrees: Vec<GrpElt> = (0..k).map(unit).collect();
        let h_image: Vec<GrpElt> = self.qp.labels().map(|h| self.refined_label(&group, 0, 0, h)).collect();
        self.is_phi_grading_with(&degrees, &h_image).unwrap_or(false)
    }

    /// Matrix-level check: every component is phi-stable and phi^2 acts on it by a scalar.
    pub fn is_phi_grading_matrix(&self, g: &MatGrading) -> bool {
        let phi = self.phi();
        let n2 = g.n * g.n;
        g.components.values().all(|comp| {
            let span = Span::from_vectors(n2, comp.iter().map(|m| m.flat().to_vec()));
            let mut alpha: Option<CycNum> = None;
            comp.iter().all(|x| {
                let y = phi.apply(x);
                if !span.contains(y.flat()) {
                    return false;
                }
                let Some(c) = phi.apply(&y).proportional_to(x) else { return false };
                match &alpha {
                    None => {
                        alpha = Some(c);
                        true
                    }
                    Some(a) => *a == c,
                }
            })
        })
    }

    /// Looks for a homogeneous `z` and a graded involution `tau'` of `D` making
    /// every `z d_i` symmetric. Returns `(z, w)` with `tau' = tau_ref^{X_w}`.
    pub fn symmetric_representative(&self) -> Option<(Label, Label)> {
        let reference = GradedInvolution::transpose(self.m());
        for w in self.qp.labels() {
            let t = reference.twist_label(&self.qp, w);
            for z in self.qp.labels() {
                if self.d_labels.iter().all(|&h| {
                    let zd = self.qp.x(z).mul(self.qp.x(h));
                    t.apply(&zd) == zd
                }) {
                    return Some((z, w));
                }
            }
        }
        None
    }

    pub fn to_json(&self) -> FormSpecJson {
        let reference = GradedInvolution::transpose(self.m());
        let twist = self
            .qp
            .labels()
            .find(|&w| reference.twist_label(&self.qp, w).signs == self.tau.signs)
            .expect("every graded involution is a twist of the transpose");
        FormSpecJson {
            division: self.qp.name(),
            involution: self.tau.kind().map(|k| format!("{k:?}").to_lowercase()).unwrap_or_default(),
            twist: render_label(self.m(), twist),
            d_labels: self.d_labels.iter().map(|&h| render_label(self.m(), h)).collect(),
            nus: self.nus.iter().map(|n| n.as_root_of_unity().expect("root of unity")).collect(),
        }
    }

    pub fn from_json(j: &FormSpecJson) -> Result<Self> {
        let m = match j.division.as_str() {
            "F" => 0,
            "Q" => 1,
            s => s
                .strip_prefix("Q^")
                .and_then(|x| x.parse().ok())
                .ok_or_else(|| Error::Parse(format!("division algebra `{s}`")))?,
        };
        let qp = QuatPower::new(m);
        let w = parse_label(m, &j.twist)?;
        let tau = GradedInvolution::transpose(m).twist_label(&qp, w);
        let d_labels = j.d_labels.iter().map(|s| parse_label(m, s)).collect::<Result<Vec<_>>>()?;
        let nus = j.nus.iter().map(|&(n, k)| CycNum::root_of_unity(n.max(1), k as i64)).collect();
        Self::new(m, tau, d_labels, nus)
    }
}

/// Serialized form specification. The involution is the transpose twisted by
/// `X_twist`; `nus` are `(n, k)` pairs standing for `z_n^k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormSpecJson {
    pub division: String,
    pub involution: String,
    pub twist: String,
    pub d_labels: Vec<String>,
    pub nus: Vec<(u32, u32)>,
}
