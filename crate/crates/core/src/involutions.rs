//! Tensor powers of the quaternion algebra and their graded involutions.
//!
//! A label of `H = Z_2^{2m}` is a bit mask: bit `2i` is the exponent of `q1` in
//! tensor factor `i` and bit `2i + 1` the exponent of `q2`.

use serde::Serialize;

use crate::abgroup::{FinAbGroup, GrpElt};
use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::graded::{quaternion_units, MatGrading, ProductKind, SpanKind};
use crate::linalg::Matrix;

pub type Label = u32;

const A_BITS: u32 = 0x5555_5555;

/// Commutation pairing: `0` if `X_g`, `X_h` commute, `1` if they anticommute.
pub fn beta(g: Label, h: Label) -> u32 {
    let ga = g & A_BITS;
    let gb = (g >> 1) & A_BITS;
    let ha = h & A_BITS;
    let hb = (h >> 1) & A_BITS;
    ((ga & hb).count_ones() + (gb & ha).count_ones()) & 1
}

/// Quadratic form of the transpose involution: `sum a_i b_i`.
pub fn transpose_form(h: Label) -> u32 {
    (h & (h >> 1) & A_BITS).count_ones() & 1
}

pub fn render_label(m: usize, h: Label) -> String {
    if m == 0 {
        return "1".into();
    }
    (0..m)
        .map(|i| format!("{}{}", (h >> (2 * i)) & 1, (h >> (2 * i + 1)) & 1))
        .collect::<Vec<_>>()
        .join("|")
}

pub fn parse_label(m: usize, s: &str) -> Result<Label> {
    let bad = || Error::Parse(format!("label `{s}` for Q^{m}"));
    if m == 0 {
        return if s == "1" || s.is_empty() { Ok(0) } else { Err(bad()) };
    }
    let parts: Vec<&str> = s.split('|').collect();
    if parts.len() != m {
        return Err(bad());
    }
    let mut h = 0;
    for (i, p) in parts.iter().enumerate() {
        let b = p.as_bytes();
        if b.len() != 2 || !b.iter().all(|c| *c == b'0' || *c == b'1') {
            return Err(bad());
        }
        h |= ((b[0] - b'0') as u32) << (2 * i);
        h |= ((b[1] - b'0') as u32) << (2 * i + 1);
    }
    Ok(h)
}

/// `Q^{(x) m}` with its division grading by `Z_2^{2m}`.
#[derive(Clone, Debug)]
pub struct QuatPower {
    pub m: usize,
    basis: Vec<Matrix>,
    group: FinAbGroup,
}

impl QuatPower {
    pub fn new(m: usize) -> Self {
        let [q1, q2, q3] = quaternion_units();
        let single = [Matrix::identity(2), q1, q2, q3];
        let basis = (0..1u32 << (2 * m))
            .map(|h| {
                let mut x = Matrix::identity(1);
                for i in 0..m {
                    x = x.kron(&single[((h >> (2 * i)) & 3) as usize]);
                }
                x
            })
            .collect();
        QuatPower { m, basis, group: FinAbGroup::product(&vec![2; 2 * m]) }
    }

    /// Matrix size `2^m`.
    pub fn size(&self) -> usize {
        1 << self.m
    }

    pub fn order(&self) -> usize {
        self.basis.len()
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> {
        0..self.basis.len() as Label
    }

    pub fn x(&self, h: Label) -> &Matrix {
        &self.basis[h as usize]
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn bits(&self, h: Label) -> Vec<i64> {
        (0..2 * self.m).map(|i| ((h >> i) & 1) as i64).collect()
    }

    pub fn element(&self, h: Label) -> GrpElt {
        self.group.image(&self.bits(h))
    }

    pub fn grading(&self) -> MatGrading {
        let items = self.labels().map(|h| (self.element(h), self.x(h).clone()));
        MatGrading::from_labeled(self.size(), ProductKind::Associative, SpanKind::Full, self.group.clone(), items)
    }

    /// Label and scalar `c` with `x = c X_h`, if `x` is homogeneous.
    pub fn identify(&self, x: &Matrix) -> Option<(Label, CycNum)> {
        self.labels().find_map(|h| x.proportional_to(self.x(h)).map(|c| (h, c)))
    }

    pub fn name(&self) -> String {
        match self.m {
            0 => "F".into(),
            1 => "Q".into(),
            m => format!("Q^{m}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InvolutionKind {
    Orthogonal,
    Symplectic,
}

impl InvolutionKind {
    pub fn flip(self) -> Self {
        match self {
            InvolutionKind::Orthogonal => InvolutionKind::Symplectic,
            InvolutionKind::Symplectic => InvolutionKind::Orthogonal,
        }
    }
}

/// Orthogonal when the signs sum to `+sqrt|H|`, symplectic when to `-sqrt|H|`.
pub fn kind_of_signs(signs: &[i8]) -> Result<InvolutionKind> {
    let root = (signs.len() as f64).sqrt().round() as i64;
    if root * root != signs.len() as i64 {
        return Err(Error::NotInvolutionSign);
    }
    let s: i64 = signs.iter().map(|&x| x as i64).sum();
    if s == root {
        Ok(InvolutionKind::Orthogonal)
    } else if s == -root {
        Ok(InvolutionKind::Symplectic)
    } else {
        Err(Error::NotInvolutionSign)
    }
}

/// Graded involution `x -> S x^T S^{-1}` of `Q^{(x) m}` with `X_h -> sign(h) X_h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedInvolution {
    pub m: usize,
    pub signs: Vec<i8>,
    pub s: Matrix,
}

impl GradedInvolution {
    /// Reads the sign function off a realization matrix.
    pub fn from_realization(qp: &QuatPower, s: Matrix) -> Result<Self> {
        let si = s.inverse()?;
        let mut signs = Vec::with_capacity(qp.order());
        for h in qp.labels() {
            let img = s.mul(&qp.x(h).transpose()).mul(&si);
            let c = img
                .proportional_to(qp.x(h))
                .ok_or_else(|| Error::Invalid("realization is not a graded involution".into()))?;
            if c.is_one() {
                signs.push(1);
            } else if c == CycNum::from_int(-1) {
                signs.push(-1);
            } else {
                return Err(Error::Invalid("realization is not an involution".into()));
            }
        }
        Ok(GradedInvolution { m: qp.m, signs, s })
    }

    /// Transpose on `Q^{(x) m}` (identity for `m = 0`).
    pub fn transpose(m: usize) -> Self {
        let qp = QuatPower::new(m);
        Self::from_realization(&qp, Matrix::identity(qp.size())).expect("transpose")
    }

    /// `tau_o` on `Q`: signs `(+,+,+,-)`.
    pub fn tau_o() -> Self {
        Self::transpose(1)
    }

    /// `tau_s` on `Q` (standard conjugation): signs `(+,-,-,-)`.
    pub fn tau_s() -> Self {
        let [_, _, q3] = quaternion_units();
        Self::from_realization(&QuatPower::new(1), q3).expect("symplectic involution")
    }

    pub fn tensor(&self, other: &GradedInvolution) -> Self {
        let shift = 2 * self.m;
        let signs = (0..1u32 << (2 * (self.m + other.m)))
            .map(|h| {
                let lo = h & ((1u32 << shift) - 1);
                self.signs[lo as usize] * other.signs[(h >> shift) as usize]
            })
            .collect();
        GradedInvolution { m: self.m + other.m, signs, s: self.s.kron(&other.s) }
    }

    /// `tau_s (x) tau_o^{(x) m-1}` for symplectic, transpose for orthogonal.
    pub fn reference(m: usize, kind: InvolutionKind) -> Result<Self> {
        match kind {
            InvolutionKind::Orthogonal => Ok(Self::transpose(m)),
            InvolutionKind::Symplectic if m == 0 => Err(Error::Invalid("no symplectic involution on F".into())),
            InvolutionKind::Symplectic => Ok(Self::tau_s().tensor(&Self::transpose(m - 1))),
        }
    }

    pub fn kind(&self) -> Result<InvolutionKind> {
        kind_of_signs(&self.signs)
    }

    pub fn sign(&self, h: Label) -> i8 {
        self.signs[h as usize]
    }

    pub fn apply(&self, x: &Matrix) -> Matrix {
        self.s.mul(&x.transpose()).mul(&self.s.inverse().expect("invertible realization"))
    }

    /// `x -> d x^tau d^{-1}` for a nonzero homogeneous `d`.
    pub fn twist(&self, qp: &QuatPower, d: &Matrix) -> Result<Self> {
        if d.is_zero() {
            return Err(Error::ZeroTwist);
        }
        if qp.identify(d).is_none() {
            return Err(Error::Invalid("twisting element must be homogeneous".into()));
        }
        Self::from_realization(qp, d.mul(&self.s))
    }

    pub fn twist_label(&self, qp: &QuatPower, h: Label) -> Self {
        self.twist(qp, qp.x(h)).expect("basis elements are homogeneous")
    }

    /// Whether `sign(g) sign(h) (-1)^beta(g,h) = sign(g + h)` for all labels.
    pub fn satisfies_sign_rule(&self) -> bool {
        let n = self.signs.len() as u32;
        (0..n).all(|g| {
            (0..n).all(|h| {
                let b = if beta(g, h) == 1 { -1 } else { 1 };
                self.signs[g as usize] * self.signs[h as usize] * b == self.signs[(g ^ h) as usize]
            })
        })
    }

    /// Bit mask of the skew labels (`q(h) = 1`), one bit per label.
    pub fn form_bits(&self) -> Vec<u8> {
        self.signs.iter().map(|&s| (s < 0) as u8).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quaternion_signs() {
        assert_eq!(GradedInvolution::tau_o().signs, vec![1, 1, 1, -1]);
        assert_eq!(GradedInvolution::tau_s().signs, vec![1, -1, -1, -1]);
        assert_eq!(GradedInvolution::tau_o().kind().unwrap(), InvolutionKind::Orthogonal);
        assert_eq!(GradedInvolution::tau_s().kind().unwrap(), InvolutionKind::Symplectic);
        assert_eq!(kind_of_signs(&[1, 1, -1, -1]), Err(Error::NotInvolutionSign));
    }

    #[test]
    fn tensor_signs_multiply() {
        let t = GradedInvolution::tau_s().tensor(&GradedInvolution::tau_o());
        let qp = QuatPower::new(2);
        let direct = GradedInvolution::from_realization(&qp, t.s.clone()).unwrap();
        assert_eq!(direct.signs, t.signs);
        assert_eq!(t.kind().unwrap(), InvolutionKind::Symplectic);
        assert!(t.satisfies_sign_rule());
    }

    #[test]
    fn pairing_matches_matrices() {
        let qp = QuatPower::new(2);
        for g in qp.labels() {
            for h in qp.labels() {
                let xy = qp.x(g).mul(qp.x(h));
                let yx = qp.x(h).mul(qp.x(g));
                let expect = if beta(g, h) == 0 { xy.clone() } else { xy.neg() };
                assert_eq!(yx, expect);
                assert_eq!(qp.identify(&xy).unwrap().0, g ^ h);
            }
        }
    }

    #[test]
    fn twisting() {
        let qp = QuatPower::new(1);
        let t = GradedInvolution::tau_o().twist_label(&qp, 3);
        assert_eq!(t.signs, GradedInvolution::tau_s().signs);
        assert_eq!(GradedInvolution::tau_o().twist(&qp, &Matrix::zeros(2, 2)), Err(Error::ZeroTwist));
    }

    #[test]
    fn labels_round_trip() {
        assert_eq!(render_label(2, 0b0100), "00|10");
        assert_eq!(parse_label(2, "00|10").unwrap(), 0b0100);
        assert!(parse_label(2, "0|10").is_err());
    }
}
