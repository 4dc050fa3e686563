//! u_q(b) and A_q in idempotent bases.
//!
//! With `L = m` the basis is `{1_z X}` for `z ∈ (Z/m)^r`; with `L = n` it is the
//! bold basis `{𝟏_β X}` of A_q. In both cases `X·1_w = 1_{w+wt(X)}·X`, so
//!
//! `(1_z X)(1_w Y) = δ_{z, w+wt(X)} 1_z XY`.
//!
//! The group part of a [`Monomial`] holds the label.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::algebra::{
    mixed_radix, Algebra, Element, GradedAlgebra, Monomial, PbwWord, TensorElement, TensorKey, MAX_GROUP_RANK,
};
use crate::borel::Uqb;
use crate::cyclotomic::{CycScalar, CyclotomicField};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct IdempotentAlgebra {
    uqb: Arc<Uqb>,
    modulus: u32,
    stride: u32,
}

impl IdempotentAlgebra {
    /// `modulus` must be `m` (all of u_q(b)) or `n` (the bold basis of A_q).
    pub fn new(uqb: Arc<Uqb>, modulus: u32) -> Self {
        let m = uqb.m();
        assert!(modulus == m || modulus == uqb.n(), "modulus must be n or n²");
        IdempotentAlgebra {
            stride: m / modulus,
            uqb,
            modulus,
        }
    }

    pub fn uqb(&self) -> &Arc<Uqb> {
        &self.uqb
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn rank(&self) -> usize {
        self.uqb.rank()
    }

    pub fn is_bold(&self) -> bool {
        self.modulus != self.uqb.m()
    }

    pub fn labels(&self) -> impl Iterator<Item = Vec<u32>> {
        mixed_radix(vec![self.modulus; self.rank()])
    }

    pub fn label_count(&self) -> usize {
        (self.modulus as usize).pow(self.rank() as u32)
    }

    pub fn basis_monomial(&self, label: &[u32], word: PbwWord) -> Monomial {
        let l: Vec<u32> = label.iter().map(|x| x % self.modulus).collect();
        let zero = vec![0u32; self.uqb.letter_count()];
        Monomial::new(&l, &zero).with_pbw(word)
    }

    pub fn idempotent(&self, label: &[u32]) -> Element {
        Element::basis(self.basis_monomial(label, [0; 3]), self.field().one())
    }

    /// Packs a label vector into an integer key.
    pub fn pack(&self, label: &[u16]) -> u64 {
        label
            .iter()
            .rev()
            .fold(0u64, |acc, &x| acc * self.modulus as u64 + (x as u32 % self.modulus) as u64)
    }

    /// Label shifted by a weight, reduced mod L.
    pub fn shift(&self, label: &[u16], weight: &[i64]) -> [u16; MAX_GROUP_RANK] {
        let mut out = [0u16; MAX_GROUP_RANK];
        let l = self.modulus as i64;
        for i in 0..self.rank() {
            out[i] = (label[i] as i64 + weight[i]).rem_euclid(l) as u16;
        }
        out
    }

    fn label_dot(&self, label: &[u16], exps: &[i64]) -> i64 {
        label.iter().zip(exps).map(|(&a, &b)| a as i64 * b).sum()
    }

    /// Group basis → idempotent basis: `g^a X = Σ_λ q^{λ·a} 1_λ X`. In the bold
    /// basis `a` must be divisible by n.
    pub fn to_idempotent(&self, x: &Element) -> Result<Element> {
        let mut out = Element::zero();
        let f = self.field();
        for (b, c) in x.terms() {
            let a: Vec<i64> = b.group_exp().iter().map(|&v| v as i64).collect();
            if a.iter().any(|v| v % self.stride as i64 != 0) {
                return Err(Error::NotInSubalgebra(format!("{b:?} has a group exponent not divisible by n")));
            }
            for label in self.labels() {
                let l16: Vec<u16> = label.iter().map(|&v| v as u16).collect();
                let phase = f.zeta_pow(self.label_dot(&l16, &a));
                out.add_term(self.basis_monomial(&label, b.pbw_word()), c * &phase);
            }
        }
        Ok(out)
    }

    /// Idempotent basis → group basis: `1_λ = L^{-r} Σ_c q^{-s λ·c} g^{s c}` with
    /// `s = m/L`.
    pub fn to_group(&self, x: &Element) -> Element {
        let f = self.field();
        let norm = BigRational::new(BigInt::from(1), BigInt::from(self.label_count() as u64));
        let mut out = Element::zero();
        for (b, c) in x.terms() {
            let scaled = c.scale(&norm);
            for cs in self.labels() {
                let a: Vec<i64> = cs.iter().map(|&v| (v * self.stride) as i64).collect();
                let phase = f.zeta_pow(-self.label_dot(b.group_exp(), &a));
                let g: Vec<u32> = a.iter().map(|&v| v as u32).collect();
                let mono = self.uqb.monomial(&g, &vec![0; self.uqb.letter_count()]).with_pbw(b.pbw_word());
                out.add_term(mono, &scaled * &phase);
            }
        }
        out
    }

    fn map_tensor(
        &self,
        x: &TensorElement,
        f: impl Fn(&Element) -> Result<Element>,
    ) -> Result<TensorElement> {
        let mut cache = rustc_hash::FxHashMap::default();
        let mut out = TensorElement::zero(x.arity());
        for (key, c) in x.terms() {
            let mut partial: Vec<(TensorKey<Monomial>, CycScalar)> = vec![(TensorKey::new(), c.clone())];
            for b in key.iter() {
                if !cache.contains_key(b) {
                    cache.insert(*b, f(&Element::basis(*b, self.field().one()))?);
                }
                let img: &Element = &cache[b];
                let mut next = Vec::with_capacity(partial.len() * img.len());
                for (pk, pc) in &partial {
                    for (ib, ic) in img.terms() {
                        let mut k = pk.clone();
                        k.push(*ib);
                        next.push((k, pc * ic));
                    }
                }
                partial = next;
            }
            for (k, v) in partial {
                out.add_term(k, v);
            }
        }
        Ok(out)
    }

    pub fn tensor_to_idempotent(&self, x: &TensorElement) -> Result<TensorElement> {
        self.map_tensor(x, |e| self.to_idempotent(e))
    }

    pub fn tensor_to_group(&self, x: &TensorElement) -> Result<TensorElement> {
        self.map_tensor(x, |e| Ok(self.to_group(e)))
    }

    /// Fine labels (mod m) → bold labels (mod n), provided the coefficient of
    /// every `1_{z_1}X_1 ⊗ … ⊗ 1_{z_k}X_k` depends only on the `z_i` mod n. This
    /// is exactly membership in `A_q^{⊗k}`. On failure the offending term is
    /// reported.
    pub fn restrict_to_bold(&self, bold: &IdempotentAlgebra, x: &TensorElement) -> Result<TensorElement> {
        assert!(!self.is_bold() && bold.is_bold());
        let n = bold.modulus;
        let mut out = TensorElement::zero(x.arity());
        let mut seen: rustc_hash::FxHashMap<TensorKey<Monomial>, (CycScalar, u64)> = Default::default();
        for (key, c) in x.terms() {
            let reduced: TensorKey<Monomial> = key
                .iter()
                .map(|b| {
                    let l: Vec<u32> = b.group_exp().iter().map(|&v| v as u32 % n).collect();
                    bold.basis_monomial(&l, b.pbw_word())
                })
                .collect();
            match seen.get_mut(&reduced) {
                Some((v, count)) => {
                    if v != c {
                        return Err(Error::NotInSubalgebra(format!(
                            "coefficient of {key:?} differs from another lift of {reduced:?}"
                        )));
                    }
                    *count += 1;
                }
                None => {
                    seen.insert(reduced, (c.clone(), 1));
                }
            }
        }
        let lifts = ((self.modulus / n) as u64).pow((self.rank() * x.arity()) as u32);
        for (k, (c, count)) in seen {
            if count != lifts {
                return Err(Error::NotInSubalgebra(format!(
                    "{k:?} has {count} of {lifts} lifts in the support"
                )));
            }
            out.add_term(k, c);
        }
        Ok(out)
    }

    /// Bold labels → fine labels: `𝟏_β = Σ_{z ≡ β mod n} 1_z`.
    pub fn expand_from_bold(&self, x: &TensorElement) -> TensorElement {
        assert!(!self.is_bold());
        let n = self.uqb.n();
        let lifts: Vec<Vec<u32>> = mixed_radix(vec![n; self.rank()]).collect();
        let mut out = TensorElement::zero(x.arity());
        for (key, c) in x.terms() {
            let mut partial: Vec<TensorKey<Monomial>> = vec![TensorKey::new()];
            for b in key.iter() {
                let mut next = Vec::with_capacity(partial.len() * lifts.len());
                for p in &partial {
                    for t in &lifts {
                        let z: Vec<u32> = b.group_exp().iter().zip(t).map(|(&beta, &k)| beta as u32 + n * k).collect();
                        let mut k2 = p.clone();
                        k2.push(self.basis_monomial(&z, b.pbw_word()));
                        next.push(k2);
                    }
                }
                partial = next;
            }
            for k in partial {
                out.add_term(k, c.clone());
            }
        }
        out
    }
}

impl Algebra for IdempotentAlgebra {
    type Basis = Monomial;

    fn field(&self) -> &'static CyclotomicField {
        self.uqb.field()
    }

    fn unit(&self) -> Element {
        Element::from_terms(self.labels().map(|l| (self.basis_monomial(&l, [0; 3]), self.field().one())))
    }

    fn mul_basis(&self, a: &Monomial, b: &Monomial) -> Element {
        let wt = self.uqb.weight(&a.pbw_word());
        let expected = self.shift(b.group_exp(), &wt);
        if a.group_exp() != &expected[..self.rank()] {
            return Element::zero();
        }
        let mut out = Element::zero();
        for (w, c) in self.uqb.rewrite().mul_words(&a.pbw_word(), &b.pbw_word()) {
            out.add_term(a.with_pbw(w), c);
        }
        out
    }

    fn required_right_key(&self, a: &Monomial) -> Option<u64> {
        let wt: Vec<i64> = self.uqb.weight(&a.pbw_word()).iter().map(|x| -x).collect();
        let l = self.shift(a.group_exp(), &wt);
        Some(self.pack(&l[..self.rank()]))
    }

    fn right_key(&self, b: &Monomial) -> Option<u64> {
        Some(self.pack(b.group_exp()))
    }
}

impl GradedAlgebra for IdempotentAlgebra {
    fn degree(&self, b: &Monomial) -> u32 {
        b.pbw_degree()
    }

    fn max_degree(&self) -> u32 {
        self.uqb.max_degree()
    }

    /// A degree-zero tensor is `Σ c_λ 1_{λ_1}⊗…⊗1_{λ_k}` over orthogonal
    /// idempotents; it is invertible iff every label tuple has a nonzero
    /// coefficient, and then the inverse is `Σ c_λ^{-1} 1_λ`.
    fn invert_degree_zero(&self, x: &TensorElement) -> Result<TensorElement> {
        let k = x.arity();
        let expected = self.label_count().pow(k as u32);
        if x.len() != expected {
            return Err(Error::NotInvertible(format!(
                "diagonal part has {} of {} idempotent components",
                x.len(),
                expected
            )));
        }
        let mut out = TensorElement::zero(k);
        for (key, c) in x.terms() {
            out.add_term(key.clone(), c.inverse()?);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{multiply, HopfAlgebra};
    use crate::borel::build_uqb;
    use crate::lie::CartanType;

    #[test]
    fn round_trip_and_orthogonality() {
        let uqb = build_uqb(CartanType::A1, 3).unwrap();
        let fine = IdempotentAlgebra::new(uqb.clone(), 9);
        for b in uqb.basis().step_by(7) {
            let x = uqb.basis_element(b);
            let y = fine.to_idempotent(&x).unwrap();
            assert_eq!(fine.to_group(&y), x);
        }
        let one = fine.unit();
        assert_eq!(fine.to_group(&one), uqb.unit());
        for z in 0..9 {
            let a = fine.idempotent(&[z]);
            for w in 0..9 {
                let b = fine.idempotent(&[w]);
                let p = multiply(&fine, &a, &b);
                assert_eq!(p, if z == w { a.clone() } else { Element::zero() });
            }
        }
    }

    #[test]
    fn idempotent_product_matches_group_product() {
        let uqb = build_uqb(CartanType::A2, 5).unwrap();
        let fine = IdempotentAlgebra::new(uqb.clone(), 25);
        let x = uqb.basis_element(uqb.monomial(&[3, 7], &[1, 0, 2]));
        let y = uqb.basis_element(uqb.monomial(&[11, 2], &[0, 1, 1]));
        let xy = multiply(&*uqb, &x, &y);
        let ix = fine.to_idempotent(&x).unwrap();
        let iy = fine.to_idempotent(&y).unwrap();
        assert_eq!(fine.to_idempotent(&xy).unwrap(), multiply(&fine, &ix, &iy));
        let _ = uqb.coproduct(&x);
    }

    #[test]
    fn bold_basis_is_aq() {
        let uqb = build_uqb(CartanType::A1, 3).unwrap();
        let bold = IdempotentAlgebra::new(uqb.clone(), 3);
        let gn = uqb.g_pow(&[3]);
        let b = bold.to_idempotent(&gn).unwrap();
        assert_eq!(b.len(), 3);
        assert_eq!(bold.to_group(&b), gn);
        assert!(bold.to_idempotent(&uqb.g(0)).is_err());
    }
}
