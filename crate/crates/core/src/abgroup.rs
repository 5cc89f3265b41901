//! Finitely generated abelian groups in Smith normal form.
//!
//! A group is produced from a presentation (generators and integer relation
//! vectors). The normalized group keeps, for every presentation generator, its
//! image in the normalized coordinates: free coordinates first, then the torsion
//! coordinates with invariant factors `d_1 | d_2 | ...`.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Presentation {
    pub generators: usize,
    pub relations: Vec<Vec<i64>>,
}

impl Presentation {
    pub fn new(generators: usize) -> Self {
        Presentation { generators, relations: Vec::new() }
    }

    pub fn relate(&mut self, rel: Vec<i64>) {
        assert_eq!(rel.len(), self.generators, "relation length");
        if rel.iter().any(|&x| x != 0) {
            self.relations.push(rel);
        }
    }

    /// Adds the relation `sum coeff * e_idx = 0`.
    pub fn relate_sparse(&mut self, terms: &[(usize, i64)]) {
        let mut rel = vec![0; self.generators];
        for &(i, c) in terms {
            rel[i] += c;
        }
        self.relate(rel);
    }
}

/// Shape of a normalized group: `0` marks a free coordinate, `d >= 2` a torsion one.
type Shape = Arc<Vec<i64>>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinAbGroup {
    shape: Shape,
    free_rank: usize,
    basis_map: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GrpElt {
    shape: Shape,
    coords: Vec<i64>,
}

impl FinAbGroup {
    pub fn from_presentation(p: &Presentation) -> Self {
        let n = p.generators;
        let rows = hermite_rows(&p.relations, n);
        let (diag, v) = smith(rows, n);
        let mut free_cols = Vec::new();
        let mut tors_cols = Vec::new();
        for (t, &d) in diag.iter().enumerate() {
            if d == 0 {
                free_cols.push(t);
            } else if d > 1 {
                tors_cols.push((t, d));
            }
        }
        let mut shape = vec![0i64; free_cols.len()];
        shape.extend(tors_cols.iter().map(|&(_, d)| d as i64));
        let cols: Vec<usize> = free_cols.iter().copied().chain(tors_cols.iter().map(|&(t, _)| t)).collect();
        let shape = Arc::new(shape);
        let basis_map = (0..n)
            .map(|g| {
                let raw: Vec<i64> = cols.iter().map(|&c| i64::try_from(v[g][c]).expect("coordinate overflow")).collect();
                reduce_coords(&shape, raw)
            })
            .collect();
        FinAbGroup { free_rank: free_cols.len(), shape, basis_map }
    }

    pub fn trivial() -> Self {
        Self::from_presentation(&Presentation::new(0))
    }

    pub fn free(rank: usize) -> Self {
        Self::from_presentation(&Presentation::new(rank))
    }

    /// `Z_{d_1} x ... x Z_{d_k}` with one presentation generator per factor (`0` means `Z`).
    pub fn product(factors: &[i64]) -> Self {
        let mut p = Presentation::new(factors.len());
        for (i, &d) in factors.iter().enumerate() {
            if d != 0 {
                p.relate_sparse(&[(i, d)]);
            }
        }
        Self::from_presentation(&p)
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> Vec<i64> {
        self.shape[self.free_rank..].to_vec()
    }

    /// Number of coordinates of an element.
    pub fn coordinate_count(&self) -> usize {
        self.shape.len()
    }

    pub fn generator_count(&self) -> usize {
        self.basis_map.len()
    }

    pub fn order(&self) -> Option<u64> {
        (self.free_rank == 0).then(|| self.torsion().iter().map(|&d| d as u64).product())
    }

    pub fn is_trivial(&self) -> bool {
        self.shape.is_empty()
    }

    pub fn isomorphic(&self, other: &FinAbGroup) -> bool {
        self.shape == other.shape
    }

    pub fn zero(&self) -> GrpElt {
        GrpElt { shape: self.shape.clone(), coords: vec![0; self.shape.len()] }
    }

    pub fn elem(&self, coords: Vec<i64>) -> Result<GrpElt> {
        if coords.len() != self.shape.len() {
            return Err(Error::Dimension(format!("{} coordinates for {}", coords.len(), self)));
        }
        Ok(GrpElt { coords: reduce_coords(&self.shape, coords), shape: self.shape.clone() })
    }

    /// Image of the `j`-th presentation generator.
    pub fn generator(&self, j: usize) -> GrpElt {
        GrpElt { shape: self.shape.clone(), coords: self.basis_map[j].clone() }
    }

    /// Image of an integer combination of presentation generators.
    pub fn image(&self, x: &[i64]) -> GrpElt {
        assert_eq!(x.len(), self.basis_map.len(), "generator vector length");
        let mut coords = vec![0i64; self.shape.len()];
        for (j, &c) in x.iter().enumerate() {
            if c != 0 {
                for (k, &b) in self.basis_map[j].iter().enumerate() {
                    coords[k] += c * b;
                }
            }
        }
        GrpElt { coords: reduce_coords(&self.shape, coords), shape: self.shape.clone() }
    }

    pub fn contains(&self, e: &GrpElt) -> bool {
        e.shape == self.shape
    }

    pub fn elements(&self) -> Result<Vec<GrpElt>> {
        if self.free_rank > 0 {
            return Err(Error::InfiniteGroup);
        }
        let tors = self.torsion();
        let mut out = vec![Vec::new()];
        for &d in &tors {
            out = out
                .into_iter()
                .flat_map(|c: Vec<i64>| {
                    (0..d).map(move |x| {
                        let mut c = c.clone();
                        c.push(x);
                        c
                    })
                })
                .collect();
        }
        Ok(out.into_iter().map(|coords| GrpElt { shape: self.shape.clone(), coords }).collect())
    }

    /// Direct product; its presentation generators are the coordinates of `self`
    /// followed by those of `other`.
    pub fn direct_product(&self, other: &FinAbGroup) -> FinAbGroup {
        let shape: Vec<i64> = self.shape.iter().chain(other.shape.iter()).copied().collect();
        Self::product(&shape)
    }

    /// Element `(a, b)` of `self.direct_product(other)` (passed as `prod`).
    pub fn pair(prod: &FinAbGroup, a: &GrpElt, b: &GrpElt) -> GrpElt {
        let x: Vec<i64> = a.coords.iter().chain(b.coords.iter()).copied().collect();
        prod.image(&x)
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        for d in self.torsion() {
            parts.push(format!("Z_{d}"));
        }
        if parts.is_empty() {
            write!(f, "Z^0")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

impl Serialize for FinAbGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl GrpElt {
    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn add(&self, other: &GrpElt) -> Result<GrpElt> {
        if self.shape != other.shape {
            return Err(Error::MixedGroups);
        }
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(GrpElt { coords: reduce_coords(&self.shape, coords), shape: self.shape.clone() })
    }

    pub fn neg(&self) -> GrpElt {
        let coords = self.coords.iter().map(|a| -a).collect();
        GrpElt { coords: reduce_coords(&self.shape, coords), shape: self.shape.clone() }
    }

    pub fn sub(&self, other: &GrpElt) -> Result<GrpElt> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i64) -> GrpElt {
        let coords = self.coords.iter().map(|a| a * k).collect();
        GrpElt { coords: reduce_coords(&self.shape, coords), shape: self.shape.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// Order of the element, `None` when infinite.
    pub fn order(&self) -> Option<u64> {
        let mut ord = 1u64;
        for (&d, &c) in self.shape.iter().zip(&self.coords) {
            if d == 0 {
                if c != 0 {
                    return None;
                }
            } else {
                ord = ord.lcm(&((d / c.gcd(&d)) as u64));
            }
        }
        Some(ord)
    }
}

impl fmt::Display for GrpElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", c.join(","))
    }
}

fn reduce_coords(shape: &[i64], mut coords: Vec<i64>) -> Vec<i64> {
    for (c, &d) in coords.iter_mut().zip(shape) {
        if d != 0 {
            *c = c.rem_euclid(d);
        }
    }
    coords
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    // returns (g, s, t) with s*a + t*b = g >= 0
    let (mut r0, mut r1, mut s0, mut s1, mut t0, mut t1) = (a, b, 1i128, 0i128, 0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Row-echelon basis of the relation lattice (at most `n` rows).
fn hermite_rows(relations: &[Vec<i64>], n: usize) -> Vec<Vec<i128>> {
    let mut pivots: Vec<Option<Vec<i128>>> = vec![None; n];
    for rel in relations {
        let mut v: Vec<i128> = rel.iter().map(|&x| x as i128).collect();
        let mut c = 0;
        while c < n {
            if v[c] == 0 {
                c += 1;
                continue;
            }
            match pivots[c].take() {
                None => {
                    if v[c] < 0 {
                        v.iter_mut().for_each(|x| *x = -*x);
                    }
                    pivots[c] = Some(v);
                    break;
                }
                Some(r) => {
                    let (g, s, t) = ext_gcd(r[c], v[c]);
                    let (a, b) = (r[c] / g, v[c] / g);
                    let new_r: Vec<i128> = r.iter().zip(&v).map(|(x, y)| s * x + t * y).collect();
                    let new_v: Vec<i128> = r.iter().zip(&v).map(|(x, y)| b * x - a * y).collect();
                    let mut new_r = new_r;
                    // keep entries right of the pivot small
                    let p = new_r[c];
                    for j in c + 1..n {
                        if let Some(q) = pivots.get(j).and_then(|x| x.as_ref()) {
                            let f = new_r[j].div_euclid(q[j]);
                            if f != 0 {
                                for k in j..n {
                                    new_r[k] -= f * q[k];
                                }
                            }
                        }
                    }
                    debug_assert_eq!(p, new_r[c]);
                    pivots[c] = Some(new_r);
                    v = new_v;
                    c += 1;
                }
            }
        }
    }
    pivots.into_iter().flatten().collect()
}

/// Smith normal form `A V = U^{-1} D`; returns the diagonal (length `n`, `0` for
/// free columns) and the column transform `V`.
fn smith(mut a: Vec<Vec<i128>>, n: usize) -> (Vec<i128>, Vec<Vec<i128>>) {
    let r = a.len();
    let mut v: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i128).collect()).collect();
    let col_op = |a: &mut Vec<Vec<i128>>, v: &mut Vec<Vec<i128>>, dst: usize, src: usize, f: i128| {
        for row in a.iter_mut() {
            row[dst] -= f * row[src];
        }
        for row in v.iter_mut() {
            row[dst] -= f * row[src];
        }
    };
    let col_swap = |a: &mut Vec<Vec<i128>>, v: &mut Vec<Vec<i128>>, x: usize, y: usize| {
        for row in a.iter_mut() {
            row.swap(x, y);
        }
        for row in v.iter_mut() {
            row.swap(x, y);
        }
    };
    let mut diag = vec![0i128; n];
    let mut t = 0;
    while t < r.min(n) {
        // smallest nonzero entry of the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..n {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        col_swap(&mut a, &mut v, t, bj);
        loop {
            let mut clean = true;
            for i in t + 1..r {
                if a[i][t] != 0 {
                    let q = a[i][t].div_euclid(a[t][t]);
                    let (top, rest) = a.split_at_mut(i);
                    for (x, y) in rest[0].iter_mut().zip(&top[t]) {
                        *x -= q * y;
                    }
                    if a[i][t] != 0 {
                        clean = false;
                    }
                }
            }
            for j in t + 1..n {
                if a[t][j] != 0 {
                    let q = a[t][j].div_euclid(a[t][t]);
                    col_op(&mut a, &mut v, j, t, q);
                    if a[t][j] != 0 {
                        clean = false;
                    }
                }
            }
            if !clean {
                let mut best = (t, t);
                for i in t..r {
                    if a[i][t] != 0 && a[i][t].abs() < a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t..n {
                    if a[t][j] != 0 && a[t][j].abs() < a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    a.swap(t, best.0);
                } else if best.1 != t {
                    col_swap(&mut a, &mut v, t, best.1);
                }
                continue;
            }
            let p = a[t][t];
            let bad = (t + 1..r).find(|&i| (t + 1..n).any(|j| a[i][j] % p != 0));
            match bad {
                Some(i) => {
                    let (top, rest) = a.split_at_mut(i);
                    for (x, y) in top[t].iter_mut().zip(&rest[0]) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        diag[t] = a[t][t].abs();
        t += 1;
    }
    (diag, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(g: &FinAbGroup) -> (usize, Vec<i64>) {
        (g.free_rank(), g.torsion())
    }

    #[test]
    fn worked_presentations() {
        // g2,g3,g4,h1,h2 with 2g2, 2g3+h1, 2g4+h1, 2h1, 2h2
        let mut p = Presentation::new(5);
        p.relate(vec![2, 0, 0, 0, 0]);
        p.relate(vec![0, 2, 0, 1, 0]);
        p.relate(vec![0, 0, 2, 1, 0]);
        p.relate(vec![0, 0, 0, 2, 0]);
        p.relate(vec![0, 0, 0, 0, 2]);
        let g = FinAbGroup::from_presentation(&p);
        assert_eq!(shape(&g), (0, vec![2, 2, 2, 4]));
        assert_eq!(g.to_string(), "Z_2 x Z_2 x Z_2 x Z_4");

        let mut p = Presentation::new(5);
        p.relate(vec![2, 0, 0, 1, 0]);
        p.relate(vec![0, 2, 0, 0, 1]);
        p.relate(vec![0, 0, 2, 1, 1]);
        p.relate(vec![0, 0, 0, 2, 0]);
        p.relate(vec![0, 0, 0, 0, 2]);
        assert_eq!(shape(&FinAbGroup::from_presentation(&p)), (0, vec![2, 4, 4]));
    }

    #[test]
    fn free_and_mixed() {
        let g = FinAbGroup::product(&[0, 6, 4]);
        assert_eq!(shape(&g), (1, vec![2, 12]));
        assert_eq!(g.to_string(), "Z^1 x Z_2 x Z_12");
        assert_eq!(FinAbGroup::trivial().to_string(), "Z^0");
        let e = g.generator(1);
        assert_eq!(e.order(), Some(6));
        assert_eq!(g.generator(0).order(), None);
        assert!(g.elements().is_err());
    }

    #[test]
    fn generator_images_respect_relations() {
        let mut p = Presentation::new(3);
        p.relate(vec![1, 1, -1]);
        p.relate(vec![4, 0, 0]);
        let g = FinAbGroup::from_presentation(&p);
        let s = g.generator(0).add(&g.generator(1)).unwrap();
        assert_eq!(s, g.generator(2));
        assert_eq!(g.generator(0).scale(4), g.zero());
    }

    #[test]
    fn mixed_owner_rejected() {
        let a = FinAbGroup::product(&[2]);
        let b = FinAbGroup::product(&[3]);
        assert_eq!(a.generator(0).add(&b.generator(0)), Err(Error::MixedGroups));
    }
}
