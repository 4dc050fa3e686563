//! The small quantum Borel algebra u_q(b), its Hopf structure, the subalgebra
//! A_q, the group algebra C[T], and the presentation of u_q(b) over A_q.

use std::sync::{Arc, RwLock};

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::algebra::{
    apply_on_slot_with_arity, invert_tensor, multiply, tensor_multiply, unit_tensor, Algebra, Element,
    GradedAlgebra, HopfAlgebra, Monomial, PbwWord, RewriteSystem, RootLetter, StraighteningRule, TensorElement,
    MAX_GROUP_RANK, MAX_ROOTS,
};
use crate::cyclotomic::{CycScalar, CyclotomicField};
use crate::error::{Error, Result};
use crate::idempotent::IdempotentAlgebra;
use crate::lie::{lie_datum, validate_params, CartanType, LieDatum};

/// Above this many basis pairs, exhaustive sweeps are replaced by seeded samples.
pub const EXHAUSTIVE_PAIR_LIMIT: u128 = 10_000;

pub struct Uqb {
    cartan_type: CartanType,
    datum: LieDatum,
    n: u32,
    m: u32,
    field: &'static CyclotomicField,
    rewrite: RewriteSystem,
    letter_coproducts: Vec<TensorElement>,
    letter_antipodes: Vec<Element>,
    letter_antipodes_inv: Vec<Element>,
    word_coproducts: RwLock<FxHashMap<PbwWord, TensorElement>>,
    word_antipodes: RwLock<FxHashMap<PbwWord, Element>>,
    word_antipodes_inv: RwLock<FxHashMap<PbwWord, Element>>,
}

impl std::fmt::Debug for Uqb {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "u_q(b)[{}, n={}]", self.cartan_type, self.n)
    }
}

/// The standard rule table for the positive part. For A2 the letters are
/// `e1 < E12 < e2` with `E12 = e1 e2 - q^{-1} e2 e1`.
pub fn standard_rewrite_system(t: CartanType, n: u32) -> Result<RewriteSystem> {
    let m = n * n;
    let field = CyclotomicField::get(m);
    let bound = u16::try_from(m).map_err(|_| Error::TooLarge(format!("n={n}")))?;
    let datum = lie_datum(t);
    let letters: Vec<RootLetter> = datum
        .positive_roots
        .iter()
        .map(|r| RootLetter {
            name: r.name.to_string(),
            weight: r.coords.iter().map(|&c| c as i64).collect(),
            bound,
        })
        .collect();
    let rules = match t {
        CartanType::A1 => Vec::new(),
        CartanType::A2 => {
            let w = |a: u16, b: u16, c: u16| -> PbwWord { [a, b, c] };
            vec![
                StraighteningRule {
                    later: 2,
                    earlier: 0,
                    rhs: vec![(w(1, 0, 1), field.zeta_pow(1)), (w(0, 1, 0), -field.zeta_pow(1))],
                },
                StraighteningRule {
                    later: 1,
                    earlier: 0,
                    rhs: vec![(w(1, 1, 0), field.zeta_pow(-1))],
                },
                StraighteningRule {
                    later: 2,
                    earlier: 1,
                    rhs: vec![(w(0, 1, 1), field.zeta_pow(-1))],
                },
            ]
        }
    };
    RewriteSystem::new(field, datum.rank, bound, letters, rules)
}

/// Builds u_q(b) with the standard rule table.
pub fn build_uqb(t: CartanType, n: i64) -> Result<Arc<Uqb>> {
    validate_params(t, n).map_err(Error::InvalidParameters)?;
    let n = n as u32;
    let rewrite = standard_rewrite_system(t, n)?;
    Ok(Arc::new(Uqb::with_rewrite(t, n, rewrite)))
}

impl Uqb {
    /// Builds the Hopf structure on top of an arbitrary rule table (used by
    /// negative controls and by re-imported exports).
    pub fn with_rewrite(t: CartanType, n: u32, rewrite: RewriteSystem) -> Self {
        let datum = lie_datum(t);
        let m = n * n;
        let field = CyclotomicField::get(m);
        let mut uqb = Uqb {
            cartan_type: t,
            datum,
            n,
            m,
            field,
            rewrite,
            letter_coproducts: Vec::new(),
            letter_antipodes: Vec::new(),
            letter_antipodes_inv: Vec::new(),
            word_coproducts: RwLock::new(FxHashMap::default()),
            word_antipodes: RwLock::new(FxHashMap::default()),
            word_antipodes_inv: RwLock::new(FxHashMap::default()),
        };
        uqb.init_letter_data();
        uqb
    }

    fn init_letter_data(&mut self) {
        let one = self.field.one();
        let r = self.datum.rank;
        let mut simple_cop = Vec::new();
        let mut simple_s = Vec::new();
        let mut simple_sinv = Vec::new();
        for i in 0..r {
            let e = self.e(i);
            let k = self.k(i);
            let kinv = self.k_inv(i);
            let unit = self.unit();
            simple_cop.push(
                TensorElement::tensor_of(&[&e, &k])
                    .add(&TensorElement::tensor_of(&[&unit, &e]))
                    .expect("same arity"),
            );
            simple_s.push(multiply(self, &e, &kinv).scale(&-one.clone()));
            simple_sinv.push(multiply(self, &kinv, &e).scale(&-one.clone()));
        }
        let letters = self.rewrite.letters().len();
        let mut cop = Vec::with_capacity(letters);
        let mut s = Vec::with_capacity(letters);
        let mut sinv = Vec::with_capacity(letters);
        for l in 0..letters {
            if let Some(i) = self.simple_index(l) {
                cop.push(simple_cop[i].clone());
                s.push(simple_s[i].clone());
                sinv.push(simple_sinv[i].clone());
            } else {
                // E12 = e1 e2 - q^{-1} e2 e1 (A2 only).
                let c = self.field.zeta_pow(-1);
                let d12 = tensor_multiply(self, &simple_cop[0], &simple_cop[1]).expect("arity 2");
                let d21 = tensor_multiply(self, &simple_cop[1], &simple_cop[0]).expect("arity 2");
                cop.push(d12.sub(&d21.scale(&c)).expect("arity 2"));
                // S and S^{-1} reverse products.
                let s21 = multiply(self, &simple_s[1], &simple_s[0]);
                let s12 = multiply(self, &simple_s[0], &simple_s[1]);
                s.push(s21.sub(&s12.scale(&c)));
                let t21 = multiply(self, &simple_sinv[1], &simple_sinv[0]);
                let t12 = multiply(self, &simple_sinv[0], &simple_sinv[1]);
                sinv.push(t21.sub(&t12.scale(&c)));
            }
        }
        self.letter_coproducts = cop;
        self.letter_antipodes = s;
        self.letter_antipodes_inv = sinv;
    }

    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }

    pub fn datum(&self) -> &LieDatum {
        &self.datum
    }

    pub fn rank(&self) -> usize {
        self.datum.rank
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `m = n²`, the order of q.
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn rewrite(&self) -> &RewriteSystem {
        &self.rewrite
    }

    pub fn letter_count(&self) -> usize {
        self.rewrite.letters().len()
    }

    /// Letter index of the simple root vector `e_i`.
    pub fn simple_letter(&self, i: usize) -> usize {
        self.datum.simple_root_position(i)
    }

    fn simple_index(&self, letter: usize) -> Option<usize> {
        (0..self.datum.rank).find(|&i| self.simple_letter(i) == letter)
    }

    /// Weight of a word in simple-root coordinates.
    pub fn weight(&self, w: &PbwWord) -> [i64; MAX_GROUP_RANK] {
        self.rewrite.weight(w)
    }

    /// `dim u_q(b) = m^{r+N}`.
    pub fn dimension(&self) -> u128 {
        self.rewrite.basis_size()
    }

    pub fn monomial(&self, group: &[u32], pbw: &[u32]) -> Monomial {
        self.rewrite.monomial(group, pbw)
    }

    pub fn group_monomial(&self, group: &[i64]) -> Monomial {
        let m = self.m as i64;
        let g: Vec<u32> = group.iter().map(|&x| x.rem_euclid(m) as u32).collect();
        self.monomial(&g, &vec![0; self.letter_count()])
    }

    pub fn basis_element(&self, b: Monomial) -> Element {
        Element::basis(b, self.field.one())
    }

    pub fn g(&self, i: usize) -> Element {
        let mut v = vec![0i64; self.rank()];
        v[i] = 1;
        self.basis_element(self.group_monomial(&v))
    }

    /// `g^a` for an exponent vector.
    pub fn g_pow(&self, a: &[i64]) -> Element {
        self.basis_element(self.group_monomial(a))
    }

    pub fn e(&self, i: usize) -> Element {
        self.letter(self.simple_letter(i))
    }

    pub fn letter(&self, l: usize) -> Element {
        let mut pbw = vec![0u32; self.letter_count()];
        pbw[l] = 1;
        self.basis_element(self.monomial(&vec![0; self.rank()], &pbw))
    }

    /// `K_i = Π_j g_j^{a_ij}`.
    pub fn k(&self, i: usize) -> Element {
        let a: Vec<i64> = self.datum.cartan_matrix[i].clone();
        self.g_pow(&a)
    }

    pub fn k_inv(&self, i: usize) -> Element {
        let a: Vec<i64> = self.datum.cartan_matrix[i].iter().map(|x| -x).collect();
        self.g_pow(&a)
    }

    /// All normal-form monomials.
    pub fn basis(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.rewrite.all_monomials()
    }

    /// A uniformly random normal-form monomial.
    pub fn random_monomial(&self, rng: &mut impl Rng) -> Monomial {
        let g: Vec<u32> = (0..self.rank()).map(|_| rng.gen_range(0..self.m)).collect();
        let p: Vec<u32> = (0..self.letter_count()).map(|_| rng.gen_range(0..self.m)).collect();
        self.monomial(&g, &p)
    }

    /// A random monomial of PBW degree at most `max_degree`.
    pub fn random_low_degree_monomial(&self, rng: &mut impl Rng, max_degree: u32) -> Monomial {
        let g: Vec<u32> = (0..self.rank()).map(|_| rng.gen_range(0..self.m)).collect();
        let mut p = vec![0u32; self.letter_count()];
        let total = rng.gen_range(0..=max_degree);
        for _ in 0..total {
            let l = rng.gen_range(0..p.len());
            if p[l] + 1 < self.m {
                p[l] += 1;
            }
        }
        self.monomial(&g, &p)
    }

    /// Generators `g_i` and all root vectors, as basis monomials.
    pub fn generator_monomials(&self) -> Vec<Monomial> {
        let mut out = Vec::new();
        for i in 0..self.rank() {
            let mut v = vec![0i64; self.rank()];
            v[i] = 1;
            out.push(self.group_monomial(&v));
        }
        for l in 0..self.letter_count() {
            let mut p = vec![0u32; self.letter_count()];
            p[l] = 1;
            out.push(self.monomial(&vec![0; self.rank()], &p));
        }
        out
    }

    fn split(&self, b: &Monomial) -> (Monomial, PbwWord) {
        let g = b.with_pbw([0; MAX_ROOTS]);
        (g, b.pbw_word())
    }

    fn last_letter(&self, w: &PbwWord) -> Option<usize> {
        (0..self.letter_count()).rev().find(|&l| w[l] > 0)
    }

    fn word_coproduct(&self, w: &PbwWord) -> TensorElement {
        if let Some(hit) = self.word_coproducts.read().expect("poisoned").get(w) {
            return hit.clone();
        }
        let result = match self.last_letter(w) {
            None => unit_tensor(self, 2),
            Some(l) => {
                let mut prefix = *w;
                prefix[l] -= 1;
                let head = self.word_coproduct(&prefix);
                tensor_multiply(self, &head, &self.letter_coproducts[l]).expect("arity 2")
            }
        };
        self.word_coproducts.write().expect("poisoned").insert(*w, result.clone());
        result
    }

    fn word_antipode_with(
        &self,
        w: &PbwWord,
        cache: &RwLock<FxHashMap<PbwWord, Element>>,
        letters: &[Element],
    ) -> Element {
        if let Some(hit) = cache.read().expect("poisoned").get(w) {
            return hit.clone();
        }
        let result = match self.last_letter(w) {
            None => self.unit(),
            Some(l) => {
                let mut prefix = *w;
                prefix[l] -= 1;
                let tail = self.word_antipode_with(&prefix, cache, letters);
                multiply(self, &letters[l], &tail)
            }
        };
        cache.write().expect("poisoned").insert(*w, result.clone());
        result
    }

    /// `S^{-1}` on a basis monomial.
    pub fn antipode_inverse_basis(&self, b: &Monomial) -> Element {
        let (g, w) = self.split(b);
        let ginv = self.group_inverse(&g);
        let sw = self.word_antipode_with(&w, &self.word_antipodes_inv, &self.letter_antipodes_inv);
        multiply(self, &sw, &self.basis_element(ginv))
    }

    pub fn antipode_inverse(&self, x: &Element) -> Element {
        let mut out = Element::zero();
        for (b, c) in x.terms() {
            out.add_scaled(&self.antipode_inverse_basis(b), c);
        }
        out
    }

    fn group_inverse(&self, g: &Monomial) -> Monomial {
        let inv: Vec<i64> = g.group_exp().iter().map(|&x| -(x as i64)).collect();
        self.group_monomial(&inv)
    }

    /// `(Δ⊗id)Δ(b)`, the iterated coproduct of a basis monomial.
    pub fn coproduct2_basis(&self, b: &Monomial) -> TensorElement {
        let d = self.coproduct_basis(b);
        apply_on_slot_with_arity(&d, 0, 2, |x| self.coproduct_basis(x)).expect("slot 0 exists")
    }
}

impl Algebra for Uqb {
    type Basis = Monomial;

    fn field(&self) -> &'static CyclotomicField {
        self.field
    }

    fn unit(&self) -> Element {
        self.basis_element(self.group_monomial(&vec![0; self.rank()]))
    }

    fn mul_basis(&self, a: &Monomial, b: &Monomial) -> Element {
        self.rewrite.mul_monomials(a, b)
    }
}

impl HopfAlgebra for Uqb {
    fn coproduct_basis(&self, b: &Monomial) -> TensorElement {
        let (g, w) = self.split(b);
        let gg = TensorElement::pure(&[g, g], self.field.one());
        if w.iter().all(|&e| e == 0) {
            return gg;
        }
        tensor_multiply(self, &gg, &self.word_coproduct(&w)).expect("arity 2")
    }

    fn counit_basis(&self, b: &Monomial) -> CycScalar {
        if b.is_cartan() {
            self.field.one()
        } else {
            self.field.zero()
        }
    }

    fn antipode_basis(&self, b: &Monomial) -> Element {
        let (g, w) = self.split(b);
        let ginv = self.group_inverse(&g);
        let sw = self.word_antipode_with(&w, &self.word_antipodes, &self.letter_antipodes);
        multiply(self, &sw, &self.basis_element(ginv))
    }
}

impl GradedAlgebra for Uqb {
    fn degree(&self, b: &Monomial) -> u32 {
        b.pbw_degree()
    }

    fn max_degree(&self) -> u32 {
        (self.m - 1) * self.letter_count() as u32
    }

    fn invert_degree_zero(&self, x: &TensorElement) -> Result<TensorElement> {
        let idem = IdempotentAlgebra::new(Arc::new(self.clone_shallow()), self.m);
        let d = idem.tensor_to_idempotent(x)?;
        let inv = idem.invert_degree_zero(&d)?;
        idem.tensor_to_group(&inv)
    }
}

impl Uqb {
    /// A copy sharing the rule table but with fresh caches.
    pub fn clone_shallow(&self) -> Uqb {
        Uqb::with_rewrite(self.cartan_type, self.n, self.rewrite.clone())
    }
}

/// Inverse of a tensor in u_q(b)^{⊗k}.
pub fn invert_uqb_tensor(uqb: &Uqb, x: &TensorElement) -> Result<TensorElement> {
    invert_tensor(uqb, x)
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckFailure {
    pub identity: String,
    pub input: String,
    pub detail: String,
}

fn fail(identity: &str, input: impl std::fmt::Debug, detail: impl Into<String>) -> CheckFailure {
    CheckFailure {
        identity: identity.to_string(),
        input: format!("{input:?}"),
        detail: detail.into(),
    }
}

/// Monomials used by the Hopf-axiom sweeps: all of them when the algebra is
/// small, otherwise generators plus seeded low-degree samples.
pub fn hopf_sample(uqb: &Uqb, samples: usize, seed: u64) -> Vec<Monomial> {
    if uqb.dimension() <= 100 {
        return uqb.basis().collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = uqb.generator_monomials();
    out.push(uqb.group_monomial(&vec![0; uqb.rank()]));
    for _ in 0..samples {
        out.push(uqb.random_low_degree_monomial(&mut rng, 4));
    }
    out
}

pub fn check_coassociativity(uqb: &Uqb, sample: &[Monomial]) -> std::result::Result<(), CheckFailure> {
    for b in sample {
        let d = uqb.coproduct_basis(b);
        let left = apply_on_slot_with_arity(&d, 0, 2, |x| uqb.coproduct_basis(x)).expect("slot");
        let right = apply_on_slot_with_arity(&d, 1, 2, |x| uqb.coproduct_basis(x)).expect("slot");
        if left != right {
            return Err(fail("(Δ⊗id)Δ = (id⊗Δ)Δ", b, format!("{:?}", left.sub(&right).expect("arity"))));
        }
    }
    Ok(())
}

pub fn check_counit(uqb: &Uqb, sample: &[Monomial]) -> std::result::Result<(), CheckFailure> {
    let eps = |x: &Monomial| TensorElement::scalar(uqb.counit_basis(x));
    for b in sample {
        let d = uqb.coproduct_basis(b);
        let expected = TensorElement::pure(&[*b], uqb.field().one());
        for slot in 0..2 {
            let got = apply_on_slot_with_arity(&d, slot, 0, eps).expect("slot");
            if got != expected {
                return Err(fail("(ε⊗id)Δ = id = (id⊗ε)Δ", b, format!("slot {slot}: {got:?}")));
            }
        }
    }
    Ok(())
}

/// `m(S⊗id)Δ(x) = ε(x)1 = m(id⊗S)Δ(x)`.
pub fn check_antipode(uqb: &Uqb, sample: &[Monomial]) -> std::result::Result<(), CheckFailure> {
    for b in sample {
        let d = uqb.coproduct_basis(b);
        let expected = uqb.unit().scale(&uqb.counit_basis(b));
        let mut left = Element::zero();
        let mut right = Element::zero();
        for (k, c) in d.terms() {
            let x = uqb.basis_element(k[0]);
            let y = uqb.basis_element(k[1]);
            left.add_scaled(&multiply(uqb, &uqb.antipode(&x), &y), c);
            right.add_scaled(&multiply(uqb, &x, &uqb.antipode(&y)), c);
        }
        if left != expected || right != expected {
            return Err(fail("m(S⊗id)Δ = ε = m(id⊗S)Δ", b, format!("{left:?} | {right:?}")));
        }
        let sinv = uqb.antipode_inverse(&uqb.antipode_basis(b));
        if sinv != uqb.basis_element(*b) {
            return Err(fail("S^{-1}S = id", b, format!("{sinv:?}")));
        }
    }
    Ok(())
}

/// `Δ(xy) = Δ(x)Δ(y)` on pairs from the sample.
pub fn check_coproduct_multiplicative(uqb: &Uqb, sample: &[Monomial]) -> std::result::Result<(), CheckFailure> {
    for a in sample {
        for b in sample.iter().take(24) {
            let prod = multiply(uqb, &uqb.basis_element(*a), &uqb.basis_element(*b));
            let left = uqb.coproduct(&prod);
            let right = tensor_multiply(uqb, &uqb.coproduct_basis(a), &uqb.coproduct_basis(b)).expect("arity");
            if left != right {
                return Err(fail("Δ(xy) = Δ(x)Δ(y)", (a, b), ""));
            }
        }
    }
    Ok(())
}

/// Quantum Serre relation `e_i²e_j − (q+q^{-1})e_ie_je_i + e_je_i² = 0` for
/// `a_ij = −1`, and the same combination of coproducts vanishing.
pub fn check_serre(uqb: &Uqb) -> std::result::Result<(), CheckFailure> {
    let r = uqb.rank();
    let f = uqb.field();
    let qq = &f.zeta_pow(1) + &f.zeta_pow(-1);
    for i in 0..r {
        for j in 0..r {
            if i == j || uqb.datum().cartan_matrix[i][j] != -1 {
                continue;
            }
            let (ei, ej) = (uqb.e(i), uqb.e(j));
            let serre = |x: &dyn Fn(&Element, &Element) -> Element| {
                let a = x(&x(&ei, &ei), &ej);
                let b = x(&x(&ei, &ej), &ei);
                let c = x(&x(&ej, &ei), &ei);
                a.sub(&b.scale(&qq)).add(&c)
            };
            let val = serre(&|a, b| multiply(uqb, a, b));
            if !val.is_zero() {
                return Err(fail("quantum Serre relation", (i, j), format!("{val:?}")));
            }
            let (di, dj) = (uqb.coproduct(&ei), uqb.coproduct(&ej));
            let tm = |a: &TensorElement, b: &TensorElement| tensor_multiply(uqb, a, b).expect("arity");
            let a = tm(&tm(&di, &di), &dj);
            let b = tm(&tm(&di, &dj), &di);
            let c = tm(&tm(&dj, &di), &di);
            let dval = a.sub(&b.scale(&qq)).and_then(|x| x.add(&c)).expect("arity");
            if !dval.is_zero() {
                return Err(fail("Δ(Serre) = 0", (i, j), format!("{dval:?}")));
            }
        }
    }
    Ok(())
}

/// The basis of A_q: group exponents divisible by n, any PBW word.
#[derive(Clone, Debug)]
pub struct AqBasis {
    rank: usize,
    letters: usize,
    n: u32,
    m: u32,
}

impl AqBasis {
    pub fn contains(&self, b: &Monomial) -> bool {
        b.group_exp().iter().all(|&x| (x as u32).is_multiple_of(self.n))
    }

    /// `n^r · m^N`.
    pub fn count(&self) -> u128 {
        (self.n as u128).pow(self.rank as u32) * (self.m as u128).pow(self.letters as u32)
    }

    pub fn iter(&self) -> impl Iterator<Item = Monomial> + '_ {
        let mut radices = vec![self.n; self.rank];
        radices.extend(std::iter::repeat_n(self.m, self.letters));
        crate::algebra::mixed_radix(radices).map(move |d| {
            let g: Vec<u32> = d[..self.rank].iter().map(|x| x * self.n).collect();
            Monomial::new(&g, &d[self.rank..])
        })
    }

    /// Enumerates the basis and counts it, without materializing it.
    pub fn enumerate_count(&self) -> u128 {
        self.iter().filter(|b| self.contains(b)).count() as u128
    }

    pub fn random(&self, rng: &mut impl Rng) -> Monomial {
        let g: Vec<u32> = (0..self.rank).map(|_| rng.gen_range(0..self.n) * self.n).collect();
        let p: Vec<u32> = (0..self.letters).map(|_| rng.gen_range(0..self.m)).collect();
        Monomial::new(&g, &p)
    }

    pub fn n(&self) -> u32 {
        self.n
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureReport {
    pub pairs_checked: u64,
    pub exhaustive: bool,
}

/// Builds the A_q basis, checks its cardinality against `n^{dim g}` and checks
/// closure under multiplication (exhaustive up to [`EXHAUSTIVE_PAIR_LIMIT`]
/// pairs, sampled beyond).
pub fn build_aq(uqb: &Uqb, samples: usize, seed: u64) -> Result<(AqBasis, ClosureReport), CheckFailure> {
    let aq = AqBasis {
        rank: uqb.rank(),
        letters: uqb.letter_count(),
        n: uqb.n(),
        m: uqb.m(),
    };
    let expected = (uqb.n() as u128).pow(uqb.datum().dim_g as u32);
    if aq.count() != expected {
        return Err(fail("|A_q| = n^{dim g}", (aq.count(), expected), ""));
    }
    let total_pairs = aq.count() * aq.count();
    let pairs: Vec<(Monomial, Monomial)> = if total_pairs <= EXHAUSTIVE_PAIR_LIMIT {
        let all: Vec<Monomial> = aq.iter().collect();
        all.iter().flat_map(|a| all.iter().map(move |b| (*a, *b))).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..samples).map(|_| (aq.random(&mut rng), aq.random(&mut rng))).collect()
    };
    for (a, b) in &pairs {
        let prod = uqb.mul_basis(a, b);
        let bad = prod.terms().find(|(x, _)| !aq.contains(x)).map(|(x, _)| *x);
        if let Some(bad) = bad {
            return Err(fail("A_q closed under multiplication", (a, b), format!("support term {bad:?}")));
        }
    }
    Ok((
        aq,
        ClosureReport {
            pairs_checked: pairs.len() as u64,
            exhaustive: total_pairs <= EXHAUSTIVE_PAIR_LIMIT,
        },
    ))
}

/// The group algebra C[(Z/L)^rank] with grouplike basis.
#[derive(Clone, Debug)]
pub struct GroupAlgebra {
    rank: usize,
    order: u32,
    field: &'static CyclotomicField,
}

/// C[T] with T = (Z/n²)^r, on generators `K_i'`.
pub fn build_group_algebra_t(r: usize, n: u32) -> GroupAlgebra {
    let m = n * n;
    GroupAlgebra {
        rank: r,
        order: m,
        field: CyclotomicField::get(m),
    }
}

impl GroupAlgebra {
    pub fn new(rank: usize, order: u32, field: &'static CyclotomicField) -> Self {
        GroupAlgebra { rank, order, field }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn element(&self, exps: &[i64]) -> Monomial {
        let g: Vec<u32> = exps.iter().map(|&x| x.rem_euclid(self.order as i64) as u32).collect();
        Monomial::new(&g, &[])
    }

    pub fn generator(&self, i: usize) -> Element {
        let mut v = vec![0i64; self.rank];
        v[i] = 1;
        Element::basis(self.element(&v), self.field.one())
    }

    pub fn dimension(&self) -> u128 {
        (self.order as u128).pow(self.rank as u32)
    }

    pub fn basis(&self) -> impl Iterator<Item = Monomial> + '_ {
        crate::algebra::mixed_radix(vec![self.order; self.rank]).map(|d| Monomial::new(&d, &[]))
    }
}

impl Algebra for GroupAlgebra {
    type Basis = Monomial;

    fn field(&self) -> &'static CyclotomicField {
        self.field
    }

    fn unit(&self) -> Element {
        Element::basis(self.element(&vec![0; self.rank]), self.field.one())
    }

    fn mul_basis(&self, a: &Monomial, b: &Monomial) -> Element {
        let s: Vec<i64> = a
            .group_exp()
            .iter()
            .zip(b.group_exp())
            .map(|(&x, &y)| x as i64 + y as i64)
            .collect();
        Element::basis(self.element(&s), self.field.one())
    }
}

impl HopfAlgebra for GroupAlgebra {
    fn coproduct_basis(&self, b: &Monomial) -> TensorElement {
        TensorElement::pure(&[*b, *b], self.field.one())
    }

    fn counit_basis(&self, _b: &Monomial) -> CycScalar {
        self.field.one()
    }

    fn antipode_basis(&self, b: &Monomial) -> Element {
        let inv: Vec<i64> = b.group_exp().iter().map(|&x| -(x as i64)).collect();
        Element::basis(self.element(&inv), self.field.one())
    }
}

/// The data implementing the Γ-action: conjugation by `p_{i,j} = g_i^j` and the
/// correction `(g_i^n)^{((j₁+j₂)'−j₁−j₂)/n}`.
#[derive(Clone, Debug)]
pub struct GammaActionData {
    pub conjugator: Element,
    pub correction: Vec<Vec<(i64, Element)>>,
}

/// `((j₁+j₂)' − j₁ − j₂)/n`, which is 0 or −1.
pub fn gamma_correction_exponent(n: u32, j1: u32, j2: u32) -> i64 {
    let s = (j1 + j2) as i64;
    let reduced = s.mod_floor(&(n as i64));
    (reduced - s) / n as i64
}

pub fn gamma_action_data(uqb: &Uqb, i: usize, j: u32) -> Result<GammaActionData> {
    let n = uqb.n();
    if j >= n || i >= uqb.rank() {
        return Err(Error::Unsupported(format!("gamma data needs i < r and 0 ≤ j < n (i={i}, j={j})")));
    }
    let mut pj = vec![0i64; uqb.rank()];
    pj[i] = j as i64;
    let conjugator = uqb.g_pow(&pj);
    let mut correction = Vec::new();
    for j1 in 0..n {
        let mut row = Vec::new();
        for j2 in 0..n {
            let c = gamma_correction_exponent(n, j1, j2);
            debug_assert!(c == 0 || c == -1);
            let mut v = vec![0i64; uqb.rank()];
            v[i] = c * n as i64;
            row.push((c, uqb.g_pow(&v)));
        }
        correction.push(row);
    }
    Ok(GammaActionData { conjugator, correction })
}

#[derive(Clone, Debug, Serialize)]
pub struct GammaReport {
    pub conjugation_identities: u64,
    pub composition_identities: u64,
    pub coherence_identities: u64,
    pub spanning_products: u64,
    pub spanning_count: u128,
    pub dimension: u128,
}

/// Checks the identities presenting u_q(b) over A_q:
/// (a) `p_{i,j} a = (g_i^j a g_i^{-j}) p_{i,j}` for generators `a` of A_q,
/// (b) `p_{i,j₁}p_{i,j₂} = p_{i,(j₁+j₂)'}(g_i^n)^{(j₁+j₂−(j₁+j₂)')/n}`,
/// coherence of the corrections over triples, and
/// (c) that `{A_q monomial · p-monomial}` is a basis of u_q(b).
pub fn gamma_presentation_check(uqb: &Uqb) -> std::result::Result<GammaReport, CheckFailure> {
    let n = uqb.n();
    let r = uqb.rank();
    let mut report = GammaReport {
        conjugation_identities: 0,
        composition_identities: 0,
        coherence_identities: 0,
        spanning_products: 0,
        spanning_count: 0,
        dimension: uqb.dimension(),
    };
    let mut aq_gens: Vec<Element> = (0..r)
        .map(|k| {
            let mut v = vec![0i64; r];
            v[k] = n as i64;
            uqb.g_pow(&v)
        })
        .collect();
    aq_gens.extend((0..r).map(|k| uqb.e(k)));
    for i in 0..r {
        for j in 0..n {
            let data = gamma_action_data(uqb, i, j).map_err(|e| fail("gamma data", (i, j), e.to_string()))?;
            let p = &data.conjugator;
            let mut inv = vec![0i64; r];
            inv[i] = -(j as i64);
            let p_inv = uqb.g_pow(&inv);
            for a in &aq_gens {
                let left = multiply(uqb, p, a);
                let conj = multiply(uqb, &multiply(uqb, p, a), &p_inv);
                let right = multiply(uqb, &conj, p);
                if left != right {
                    return Err(fail("p_{i,j} a = (g_i^j a g_i^{-j}) p_{i,j}", (i, j, a), ""));
                }
                report.conjugation_identities += 1;
            }
        }
        let p = |j: i64| {
            let mut v = vec![0i64; r];
            v[i] = j;
            uqb.g_pow(&v)
        };
        for j1 in 0..n {
            for j2 in 0..n {
                let left = multiply(uqb, &p(j1 as i64), &p(j2 as i64));
                let red = ((j1 + j2) % n) as i64;
                let carry = (j1 + j2) as i64 - red;
                debug_assert_eq!(carry / n as i64, -gamma_correction_exponent(n, j1, j2));
                let right = multiply(uqb, &p(red), &p(carry));
                if left != right {
                    return Err(fail("p_{i,j₁}p_{i,j₂} = p_{i,(j₁+j₂)'}(g_i^n)^{…}", (i, j1, j2), ""));
                }
                report.composition_identities += 1;
                for j3 in 0..n {
                    let c = |a: u32, b: u32| gamma_correction_exponent(n, a, b);
                    let lhs = c(j1, j2) + c((j1 + j2) % n, j3);
                    let rhs = c(j2, j3) + c(j1, (j2 + j3) % n);
                    if lhs != rhs {
                        return Err(fail("γ coherence", (i, j1, j2, j3), format!("{lhs} vs {rhs}")));
                    }
                    report.coherence_identities += 1;
                }
            }
        }
    }
    // (c): each product A_q-monomial · p-monomial is a nonzero multiple of a single
    // basis monomial, and the monomials obtained are pairwise distinct.
    let aq = AqBasis {
        rank: r,
        letters: uqb.letter_count(),
        n,
        m: uqb.m(),
    };
    let mut seen = vec![false; uqb.dimension() as usize];
    let m = uqb.m() as u128;
    let index = |b: &Monomial| -> usize {
        let mut idx: u128 = 0;
        for &x in b.group_exp() {
            idx = idx * m + x as u128;
        }
        for &x in b.pbw_exp() {
            idx = idx * m + x as u128;
        }
        idx as usize
    };
    for a in aq.iter() {
        for js in crate::algebra::mixed_radix(vec![n; r]) {
            let pj: Vec<i64> = js.iter().map(|&x| x as i64).collect();
            let prod = uqb.mul_basis(&a, &uqb.group_monomial(&pj));
            let terms: Vec<_> = prod.terms().collect();
            if terms.len() != 1 {
                return Err(fail("A_q·p spans u_q(b)", (a, js), "product is not a single monomial"));
            }
            let k = index(terms[0].0);
            if seen[k] {
                return Err(fail("A_q·p spans u_q(b)", (a, js), "repeated monomial"));
            }
            seen[k] = true;
            report.spanning_products += 1;
        }
    }
    report.spanning_count = seen.iter().filter(|&&x| x).count() as u128;
    if report.spanning_count != uqb.dimension() {
        return Err(fail("n^r·n^{dim g} = dim u_q(b)", report.spanning_count, ""));
    }
    Ok(report)
}

/// Picks `count` distinct elements of a slice with a seeded generator.
pub fn seeded_choice<T: Copy>(items: &[T], count: usize, seed: u64) -> Vec<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    items.choose_multiple(&mut rng, count.min(items.len())).copied().collect()
}

/// Sanity check that the A_q support condition is what membership means in the
/// group basis: every group exponent divisible by n.
pub fn aq_contains(uqb: &Uqb, b: &Monomial) -> bool {
    b.group_exp().iter().all(|&x| (x as u32).is_multiple_of(uqb.n()))
}

/// Offending support term of a tensor, if any slot lies outside A_q.
pub fn membership_in_aq_tensor(uqb: &Uqb, x: &TensorElement) -> std::result::Result<(), Vec<Monomial>> {
    for (k, _) in x.sorted_terms() {
        if k.iter().any(|b| !aq_contains(uqb, b)) {
            return Err(k.to_vec());
        }
    }
    Ok(())
}
