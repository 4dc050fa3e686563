//! Sparse elements over monomial bases, tensor powers, and the generic product
//! machinery shared by every algebra in the crate.

mod probe;
mod rewrite;

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::cyclotomic::{CycScalar, CyclotomicField};
use crate::error::{Error, Result};

pub use probe::{associativity_probe, AssociativityCounterexample};
pub use rewrite::{mixed_radix, PbwWord, RewriteSystem, RootLetter, StraighteningRule};

pub const MAX_GROUP_RANK: usize = 4;
pub const MAX_ROOTS: usize = 3;

/// A normal-form basis word: group part (exponents, or idempotent labels in the
/// idempotent bases) followed by ordered root-vector exponents.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial {
    rank: u8,
    roots: u8,
    group: [u16; MAX_GROUP_RANK],
    pbw: [u16; MAX_ROOTS],
}

impl Monomial {
    pub fn new(group: &[u32], pbw: &[u32]) -> Self {
        assert!(group.len() <= MAX_GROUP_RANK && pbw.len() <= MAX_ROOTS);
        let mut g = [0u16; MAX_GROUP_RANK];
        let mut p = [0u16; MAX_ROOTS];
        for (dst, &v) in g.iter_mut().zip(group) {
            *dst = u16::try_from(v).expect("group exponent fits in u16");
        }
        for (dst, &v) in p.iter_mut().zip(pbw) {
            *dst = u16::try_from(v).expect("pbw exponent fits in u16");
        }
        Monomial {
            rank: group.len() as u8,
            roots: pbw.len() as u8,
            group: g,
            pbw: p,
        }
    }

    pub fn from_parts(rank: usize, roots: usize, group: [u16; MAX_GROUP_RANK], pbw: PbwWord) -> Self {
        Monomial {
            rank: rank as u8,
            roots: roots as u8,
            group,
            pbw,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank as usize
    }

    pub fn root_count(&self) -> usize {
        self.roots as usize
    }

    pub fn group_exp(&self) -> &[u16] {
        &self.group[..self.rank as usize]
    }

    pub fn pbw_exp(&self) -> &[u16] {
        &self.pbw[..self.roots as usize]
    }

    pub fn group_raw(&self) -> [u16; MAX_GROUP_RANK] {
        self.group
    }

    pub fn pbw_word(&self) -> PbwWord {
        self.pbw
    }

    pub fn with_group(&self, group: &[u32]) -> Self {
        let mut out = *self;
        for (i, &v) in group.iter().enumerate() {
            out.group[i] = v as u16;
        }
        out
    }

    pub fn with_pbw(&self, pbw: PbwWord) -> Self {
        let mut out = *self;
        out.pbw = pbw;
        out
    }

    pub fn pbw_degree(&self) -> u32 {
        self.pbw_exp().iter().map(|&x| x as u32).sum()
    }

    pub fn is_cartan(&self) -> bool {
        self.pbw_exp().iter().all(|&x| x == 0)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{:?}·e{:?}", self.group_exp(), self.pbw_exp())
    }
}

/// Basis element of a tensor power.
pub type TensorKey<B> = SmallVec<[B; 4]>;

/// A finite linear combination of basis elements. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Element<B: Hash + Eq = Monomial> {
    terms: FxHashMap<B, CycScalar>,
}

impl<B: Copy + Hash + Eq + Ord> Element<B> {
    pub fn zero() -> Self {
        Element {
            terms: FxHashMap::default(),
        }
    }

    pub fn basis(b: B, coeff: CycScalar) -> Self {
        let mut e = Self::zero();
        e.add_term(b, coeff);
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (B, CycScalar)>) -> Self {
        let mut e = Self::zero();
        for (b, c) in terms {
            e.add_term(b, c);
        }
        e
    }

    pub fn add_term(&mut self, b: B, coeff: CycScalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(b) {
            std::collections::hash_map::Entry::Occupied(mut o) => {
                let v = o.get() + &coeff;
                if v.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
            std::collections::hash_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Element<B>, s: &CycScalar) {
        for (b, c) in &other.terms {
            self.add_term(*b, c * s);
        }
    }

    pub fn coefficient(&self, b: &B) -> Option<&CycScalar> {
        self.terms.get(b)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&B, &CycScalar)> {
        self.terms.iter()
    }

    /// Terms sorted by basis element, for deterministic output.
    pub fn sorted_terms(&self) -> Vec<(B, CycScalar)> {
        let mut v: Vec<_> = self.terms.iter().map(|(b, c)| (*b, c.clone())).collect();
        v.sort_by_key(|a| a.0);
        v
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, s: &CycScalar) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, s);
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(*b, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(*b, -c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        Element {
            terms: self.terms.iter().map(|(b, c)| (*b, -c)).collect(),
        }
    }

    /// True when no stored coefficient is zero.
    pub fn audit(&self) -> bool {
        self.terms.values().all(|c| !c.is_zero())
    }

    pub fn into_tensor(self) -> TensorElement<B> {
        TensorElement {
            arity: 1,
            terms: self
                .terms
                .into_iter()
                .map(|(b, c)| (std::iter::once(b).collect(), c))
                .collect(),
        }
    }
}

impl<B: Copy + Hash + Eq + Ord + fmt::Debug> fmt::Debug for Element<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .sorted_terms()
            .into_iter()
            .map(|(b, c)| format!("({c})*{b:?}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A finite linear combination of pure tensors of fixed arity. Arity 0 is a
/// scalar and arity 1 is an element; both occur as intermediate results.
#[derive(Clone, PartialEq, Eq)]
pub struct TensorElement<B: Hash + Eq = Monomial> {
    arity: usize,
    terms: FxHashMap<TensorKey<B>, CycScalar>,
}

impl<B: Copy + Hash + Eq + Ord> TensorElement<B> {
    pub fn zero(arity: usize) -> Self {
        TensorElement {
            arity,
            terms: FxHashMap::default(),
        }
    }

    pub fn pure(key: &[B], coeff: CycScalar) -> Self {
        let mut t = Self::zero(key.len());
        t.add_term(key.iter().copied().collect(), coeff);
        t
    }

    pub fn scalar(c: CycScalar) -> Self {
        let mut t = Self::zero(0);
        t.add_term(TensorKey::new(), c);
        t
    }

    /// `x_1 ⊗ x_2 ⊗ … ⊗ x_k`.
    pub fn tensor_of(factors: &[&Element<B>]) -> Self {
        let mut acc = Self::scalar_one_like(factors);
        for f in factors {
            let mut next = Self::zero(acc.arity + 1);
            for (k, c) in &acc.terms {
                for (b, d) in f.terms() {
                    let mut key = k.clone();
                    key.push(*b);
                    next.add_term(key, c * d);
                }
            }
            acc = next;
        }
        acc
    }

    fn scalar_one_like(factors: &[&Element<B>]) -> Self {
        let field = factors
            .iter()
            .find_map(|f| f.terms().next().map(|(_, c)| c.field()));
        match field {
            Some(field) => Self::scalar(field.one()),
            None => Self::zero(0),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn add_term(&mut self, key: TensorKey<B>, coeff: CycScalar) {
        debug_assert_eq!(key.len(), self.arity);
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::hash_map::Entry::Occupied(mut o) => {
                let v = o.get() + &coeff;
                if v.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
            std::collections::hash_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
        }
    }

    pub fn coefficient(&self, key: &[B]) -> Option<&CycScalar> {
        self.terms.get(key)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TensorKey<B>, &CycScalar)> {
        self.terms.iter()
    }

    pub fn sorted_terms(&self) -> Vec<(TensorKey<B>, CycScalar)> {
        let mut v: Vec<_> = self.terms.iter().map(|(k, c)| (k.clone(), c.clone())).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, s: &CycScalar) -> Self {
        let mut out = Self::zero(self.arity);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c * s);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_arity(self.arity, other.arity)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_arity(self.arity, other.arity)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), -c);
        }
        Ok(out)
    }

    pub fn audit(&self) -> bool {
        self.terms.values().all(|c| !c.is_zero()) && self.terms.keys().all(|k| k.len() == self.arity)
    }

    /// Arity-1 tensors back to elements.
    pub fn into_element(self) -> Result<Element<B>> {
        check_arity(1, self.arity)?;
        Ok(Element::from_terms(self.terms.into_iter().map(|(k, c)| (k[0], c))))
    }

    /// Arity-0 tensors back to scalars.
    pub fn into_scalar(self, field: &'static CyclotomicField) -> Result<CycScalar> {
        check_arity(0, self.arity)?;
        Ok(self.terms.into_values().next().unwrap_or_else(|| field.zero()))
    }

    /// Reorders slots: slot `i` of the result is slot `perm[i]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.arity);
        let mut out = Self::zero(self.arity);
        for (k, c) in &self.terms {
            out.add_term(perm.iter().map(|&p| k[p]).collect(), c.clone());
        }
        out
    }

    /// `(a ⊗ b)` with `a` inserted before and `b` after: the tensor product of two tensors.
    pub fn outer(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.arity + other.arity);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let mut key = k1.clone();
                key.extend(k2.iter().copied());
                out.add_term(key, c1 * c2);
            }
        }
        out
    }
}

impl<B: Copy + Hash + Eq + Ord + fmt::Debug> fmt::Debug for TensorElement<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .sorted_terms()
            .into_iter()
            .map(|(k, c)| {
                let slots: Vec<String> = k.iter().map(|b| format!("{b:?}")).collect();
                format!("({c})*{}", slots.join("⊗"))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn check_arity(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::ArityMismatch { left, right })
    }
}

/// An associative algebra with a distinguished basis.
pub trait Algebra: Sync {
    type Basis: Copy + Hash + Eq + Ord + fmt::Debug + Send + Sync;

    fn field(&self) -> &'static CyclotomicField;

    fn unit(&self) -> Element<Self::Basis>;

    fn mul_basis(&self, a: &Self::Basis, b: &Self::Basis) -> Element<Self::Basis>;

    /// Key that the right factor must carry for `a * b` to be nonzero, when the
    /// basis has that shape (idempotent bases). `None` disables indexed products.
    fn required_right_key(&self, _a: &Self::Basis) -> Option<u64> {
        None
    }

    fn right_key(&self, _b: &Self::Basis) -> Option<u64> {
        None
    }
}

/// A Hopf algebra (or quasi-bialgebra coproduct data) on a basis.
pub trait HopfAlgebra: Algebra {
    fn coproduct_basis(&self, b: &Self::Basis) -> TensorElement<Self::Basis>;
    fn counit_basis(&self, b: &Self::Basis) -> CycScalar;
    fn antipode_basis(&self, b: &Self::Basis) -> Element<Self::Basis>;

    fn coproduct(&self, x: &Element<Self::Basis>) -> TensorElement<Self::Basis> {
        let mut out = TensorElement::zero(2);
        for (b, c) in x.terms() {
            for (k, d) in self.coproduct_basis(b).terms() {
                out.add_term(k.clone(), c * d);
            }
        }
        out
    }

    fn counit(&self, x: &Element<Self::Basis>) -> CycScalar {
        let mut acc = self.field().zero();
        for (b, c) in x.terms() {
            acc += &(c * &self.counit_basis(b));
        }
        acc
    }

    fn antipode(&self, x: &Element<Self::Basis>) -> Element<Self::Basis> {
        let mut out = Element::zero();
        for (b, c) in x.terms() {
            out.add_scaled(&self.antipode_basis(b), c);
        }
        out
    }
}

/// Algebras graded by PBW degree whose degree-zero part is a commutative group
/// algebra; used to invert tensors.
pub trait GradedAlgebra: Algebra {
    fn degree(&self, b: &Self::Basis) -> u32;

    /// Largest degree a nonzero basis element can have.
    fn max_degree(&self) -> u32;

    /// Inverse of a tensor all of whose slots have degree zero.
    fn invert_degree_zero(&self, x: &TensorElement<Self::Basis>) -> Result<TensorElement<Self::Basis>>;
}

pub fn multiply<A: Algebra>(alg: &A, x: &Element<A::Basis>, y: &Element<A::Basis>) -> Element<A::Basis> {
    let mut out = Element::zero();
    if x.is_zero() || y.is_zero() {
        return out;
    }
    if let Some(index) = build_index(alg, y.terms().map(|(b, c)| (std::slice::from_ref(b), b, c))) {
        for (a, c) in x.terms() {
            let Some(req) = alg.required_right_key(a) else { unreachable!() };
            if let Some(matches) = index.get(&req) {
                for (b, d) in matches {
                    let cd = c * *d;
                    out.add_scaled(&alg.mul_basis(a, b), &cd);
                }
            }
        }
        return out;
    }
    for (a, c) in x.terms() {
        for (b, d) in y.terms() {
            let cd = c * d;
            out.add_scaled(&alg.mul_basis(a, b), &cd);
        }
    }
    out
}

type Index<'a, B> = HashMap<u64, Vec<(&'a B, &'a CycScalar)>, rustc_hash::FxBuildHasher>;

fn build_index<'a, A: Algebra, I>(alg: &A, items: I) -> Option<Index<'a, A::Basis>>
where
    I: Iterator<Item = (&'a [A::Basis], &'a A::Basis, &'a CycScalar)>,
{
    let mut index: Index<'a, A::Basis> = HashMap::default();
    for (_, b, c) in items {
        let key = alg.right_key(b)?;
        index.entry(key).or_default().push((b, c));
    }
    Some(index)
}

/// Componentwise product in the k-fold tensor power.
pub fn tensor_multiply<A: Algebra>(
    alg: &A,
    x: &TensorElement<A::Basis>,
    y: &TensorElement<A::Basis>,
) -> Result<TensorElement<A::Basis>> {
    check_arity(x.arity, y.arity)?;
    let k = x.arity;
    let mut out = TensorElement::zero(k);
    if x.is_zero() || y.is_zero() {
        return Ok(out);
    }
    let mut slot_cache: FxHashMap<(A::Basis, A::Basis), Element<A::Basis>> = FxHashMap::default();

    // Indexed path: group y's terms by the tuple of their right keys.
    let keyed: Option<FxHashMap<SmallVec<[u64; 4]>, Vec<(&TensorKey<A::Basis>, &CycScalar)>>> = (|| {
        let mut idx: FxHashMap<SmallVec<[u64; 4]>, Vec<_>> = FxHashMap::default();
        for (key, c) in y.terms() {
            let mut tag = SmallVec::new();
            for b in key.iter() {
                tag.push(alg.right_key(b)?);
            }
            idx.entry(tag).or_default().push((key, c));
        }
        Some(idx)
    })();

    let mut emit = |kx: &TensorKey<A::Basis>, cx: &CycScalar, ky: &TensorKey<A::Basis>, cy: &CycScalar| {
        for s in 0..k {
            let prod = slot_cache
                .entry((kx[s], ky[s]))
                .or_insert_with(|| alg.mul_basis(&kx[s], &ky[s]));
            if prod.is_zero() {
                return;
            }
        }
        let mut partial: Vec<(TensorKey<A::Basis>, CycScalar)> = vec![(TensorKey::new(), cx * cy)];
        for s in 0..k {
            let prod = &slot_cache[&(kx[s], ky[s])];
            let mut next = Vec::with_capacity(partial.len() * prod.len());
            for (pk, pc) in &partial {
                for (b, d) in prod.terms() {
                    let mut key = pk.clone();
                    key.push(*b);
                    next.push((key, pc * d));
                }
            }
            partial = next;
        }
        for (key, c) in partial {
            out.add_term(key, c);
        }
    };

    match keyed {
        Some(idx) => {
            for (kx, cx) in x.terms() {
                let mut tag: SmallVec<[u64; 4]> = SmallVec::new();
                for b in kx.iter() {
                    match alg.required_right_key(b) {
                        Some(t) => tag.push(t),
                        None => unreachable!("algebra reports right keys but no required keys"),
                    }
                }
                if let Some(matches) = idx.get(&tag) {
                    for (ky, cy) in matches {
                        emit(kx, cx, ky, cy);
                    }
                }
            }
        }
        None => {
            for (kx, cx) in x.terms() {
                for (ky, cy) in y.terms() {
                    emit(kx, cx, ky, cy);
                }
            }
        }
    }
    Ok(out)
}

/// Product of a list of tensors, left to right.
pub fn tensor_product_chain<A: Algebra>(alg: &A, factors: &[&TensorElement<A::Basis>]) -> Result<TensorElement<A::Basis>> {
    let (first, rest) = factors.split_first().expect("at least one factor");
    let mut acc = (*first).clone();
    for f in rest {
        acc = tensor_multiply(alg, &acc, f)?;
    }
    Ok(acc)
}

/// Applies a linear map, given on basis elements, to one slot. The image of a
/// basis element is a tensor of any arity: 0 for counits, 1 for endomorphisms,
/// 2 for coproducts.
pub fn apply_on_slot<B, C, F>(x: &TensorElement<B>, slot: usize, f: F) -> Result<TensorElement<C>>
where
    B: Copy + Hash + Eq + Ord,
    C: Copy + Hash + Eq + Ord,
    F: Fn(&B) -> TensorElement<C>,
    B: Into<C>,
{
    if slot >= x.arity {
        return Err(Error::SlotOutOfRange { slot, arity: x.arity });
    }
    let mut cache: FxHashMap<B, TensorElement<C>> = FxHashMap::default();
    let mut out: Option<TensorElement<C>> = None;
    for (key, c) in x.terms() {
        let img = cache.entry(key[slot]).or_insert_with(|| f(&key[slot]));
        let target = out.get_or_insert_with(|| TensorElement::zero(x.arity - 1 + img.arity));
        for (ik, ic) in img.terms() {
            let mut nk: TensorKey<C> = key[..slot].iter().map(|&b| b.into()).collect();
            nk.extend(ik.iter().copied());
            nk.extend(key[slot + 1..].iter().map(|&b| b.into()));
            target.add_term(nk, c * ic);
        }
    }
    // Arity of an empty result: assume the map preserves arity unless an image was seen.
    Ok(out.unwrap_or_else(|| TensorElement::zero(x.arity)))
}

/// Like [`apply_on_slot`] but with an explicit result arity, so zero inputs keep
/// the right shape.
pub fn apply_on_slot_with_arity<B, F>(x: &TensorElement<B>, slot: usize, image_arity: usize, f: F) -> Result<TensorElement<B>>
where
    B: Copy + Hash + Eq + Ord,
    F: Fn(&B) -> TensorElement<B>,
{
    let out = apply_on_slot(x, slot, f)?;
    if out.is_zero() {
        return Ok(TensorElement::zero(x.arity - 1 + image_arity));
    }
    check_arity(x.arity - 1 + image_arity, out.arity)?;
    Ok(out)
}

/// `1^{⊗k}` for an algebra whose unit may be a sum of basis elements.
pub fn unit_tensor<A: Algebra>(alg: &A, arity: usize) -> TensorElement<A::Basis> {
    let unit = alg.unit();
    let factors: Vec<&Element<A::Basis>> = (0..arity).map(|_| &unit).collect();
    if arity == 0 {
        return TensorElement::scalar(alg.field().one());
    }
    TensorElement::tensor_of(&factors)
}

/// Inverse in the tensor power of a graded algebra: the degree-zero part is
/// inverted directly and the remainder by a terminating Neumann series.
pub fn invert_tensor<A: GradedAlgebra>(alg: &A, x: &TensorElement<A::Basis>) -> Result<TensorElement<A::Basis>> {
    let k = x.arity;
    let mut d0 = TensorElement::zero(k);
    let mut rest = TensorElement::zero(k);
    for (key, c) in x.terms() {
        if key.iter().all(|b| alg.degree(b) == 0) {
            d0.add_term(key.clone(), c.clone());
        } else {
            rest.add_term(key.clone(), c.clone());
        }
    }
    let d_inv = alg.invert_degree_zero(&d0)?;
    let mut result = d_inv.clone();
    if !rest.is_zero() {
        let step = tensor_multiply(alg, &d_inv, &rest)?.scale(&-alg.field().one());
        let mut term = d_inv.clone();
        let bound = alg.max_degree() as usize * k + 1;
        let mut converged = false;
        for _ in 0..bound {
            term = tensor_multiply(alg, &step, &term)?;
            if term.is_zero() {
                converged = true;
                break;
            }
            result = result.add(&term)?;
        }
        if !converged {
            return Err(Error::NotInvertible("series did not terminate".into()));
        }
    }
    let check = tensor_multiply(alg, x, &result)?;
    if check != unit_tensor(alg, k) {
        return Err(Error::NotInvertible("product with candidate inverse is not the unit".into()));
    }
    Ok(result)
}

pub fn commutator<A: Algebra>(alg: &A, x: &Element<A::Basis>, y: &Element<A::Basis>) -> Element<A::Basis> {
    multiply(alg, x, y).sub(&multiply(alg, y, x))
}

pub fn power<A: Algebra>(alg: &A, x: &Element<A::Basis>, e: u32) -> Element<A::Basis> {
    let mut acc = alg.unit();
    for _ in 0..e {
        acc = multiply(alg, &acc, x);
    }
    acc
}
