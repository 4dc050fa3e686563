//! Normal-form multiplication for algebras of the shape (group) × (ordered root
//! vectors) driven by a finite table of straightening rules.

use std::collections::BTreeMap;
use std::sync::RwLock;

use rustc_hash::FxHashMap;

use super::{Element, Monomial, MAX_GROUP_RANK, MAX_ROOTS};
use crate::cyclotomic::{CycScalar, CyclotomicField};
use crate::error::{Error, Result};

/// Exponents of the ordered root vectors.
pub type PbwWord = [u16; MAX_ROOTS];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootLetter {
    pub name: String,
    /// Weight in simple-root coordinates; conjugation by `g_i` scales the letter by `q^{weight_i}`.
    pub weight: Vec<i64>,
    /// Nilpotency order: the letter raised to this power is zero.
    pub bound: u16,
}

/// `later · earlier = Σ coeff · word`, each word in normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StraighteningRule {
    pub later: usize,
    pub earlier: usize,
    pub rhs: Vec<(PbwWord, CycScalar)>,
}

type WordElement = Vec<(PbwWord, CycScalar)>;

pub struct RewriteSystem {
    field: &'static CyclotomicField,
    rank: usize,
    group_order: u16,
    letters: Vec<RootLetter>,
    rules: BTreeMap<(usize, usize), StraighteningRule>,
    append_cache: RwLock<FxHashMap<(PbwWord, u8), WordElement>>,
    product_cache: RwLock<FxHashMap<(PbwWord, PbwWord), WordElement>>,
}

impl Clone for RewriteSystem {
    fn clone(&self) -> Self {
        RewriteSystem {
            field: self.field,
            rank: self.rank,
            group_order: self.group_order,
            letters: self.letters.clone(),
            rules: self.rules.clone(),
            append_cache: RwLock::new(FxHashMap::default()),
            product_cache: RwLock::new(FxHashMap::default()),
        }
    }
}

impl std::fmt::Debug for RewriteSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RewriteSystem")
            .field("rank", &self.rank)
            .field("group_order", &self.group_order)
            .field("letters", &self.letters)
            .field("rules", &self.rules.len())
            .finish()
    }
}

impl RewriteSystem {
    /// Checks that every out-of-order pair of letters has a rule and that every
    /// right-hand side is a normal word.
    pub fn new(
        field: &'static CyclotomicField,
        rank: usize,
        group_order: u16,
        letters: Vec<RootLetter>,
        rules: Vec<StraighteningRule>,
    ) -> Result<Self> {
        assert!(rank <= MAX_GROUP_RANK && letters.len() <= MAX_ROOTS);
        let mut table = BTreeMap::new();
        for r in rules {
            if r.later <= r.earlier {
                return Err(Error::MissingRule(format!(
                    "rule for ({}, {}) is not an out-of-order pair",
                    r.later, r.earlier
                )));
            }
            for (w, _) in &r.rhs {
                if w.iter().zip(&letters).any(|(&e, l)| e >= l.bound) {
                    return Err(Error::MissingRule(format!("right-hand side word {w:?} exceeds a nilpotency bound")));
                }
            }
            table.insert((r.later, r.earlier), r);
        }
        for later in 0..letters.len() {
            for earlier in 0..later {
                if !table.contains_key(&(later, earlier)) {
                    return Err(Error::MissingRule(format!(
                        "{}·{}",
                        letters[later].name, letters[earlier].name
                    )));
                }
            }
        }
        Ok(RewriteSystem {
            field,
            rank,
            group_order,
            letters,
            rules: table,
            append_cache: RwLock::new(FxHashMap::default()),
            product_cache: RwLock::new(FxHashMap::default()),
        })
    }

    pub fn field(&self) -> &'static CyclotomicField {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn group_order(&self) -> u16 {
        self.group_order
    }

    pub fn letters(&self) -> &[RootLetter] {
        &self.letters
    }

    pub fn rules(&self) -> impl Iterator<Item = &StraighteningRule> {
        self.rules.values()
    }

    /// Replaces a rule. Used by negative controls; clears the memo tables.
    pub fn set_rule(&mut self, rule: StraighteningRule) {
        self.rules.insert((rule.later, rule.earlier), rule);
        self.append_cache.write().expect("cache poisoned").clear();
        self.product_cache.write().expect("cache poisoned").clear();
    }

    pub fn set_letter_weight(&mut self, letter: usize, weight: Vec<i64>) {
        self.letters[letter].weight = weight;
        self.append_cache.write().expect("cache poisoned").clear();
        self.product_cache.write().expect("cache poisoned").clear();
    }

    /// Number of normal-form monomials: `group_order^rank · Π bounds`.
    pub fn basis_size(&self) -> u128 {
        let g = (self.group_order as u128).pow(self.rank as u32);
        self.letters.iter().fold(g, |acc, l| acc * l.bound as u128)
    }

    /// Total weight of a word.
    pub fn weight(&self, w: &PbwWord) -> [i64; MAX_GROUP_RANK] {
        let mut out = [0i64; MAX_GROUP_RANK];
        for (l, &e) in self.letters.iter().zip(w) {
            for (i, &wt) in l.weight.iter().enumerate() {
                out[i] += wt * e as i64;
            }
        }
        out
    }

    pub fn letter_word(&self, letter: usize) -> PbwWord {
        let mut w = [0u16; MAX_ROOTS];
        w[letter] = 1;
        w
    }

    fn last_letter(&self, w: &PbwWord) -> Option<usize> {
        (0..self.letters.len()).rev().find(|&i| w[i] > 0)
    }

    /// `w · x` for a normal word `w` and a single letter `x`.
    fn append(&self, w: &PbwWord, x: usize) -> WordElement {
        if let Some(hit) = self.append_cache.read().expect("cache poisoned").get(&(*w, x as u8)) {
            return hit.clone();
        }
        let result = match self.last_letter(w) {
            Some(last) if last > x => {
                let mut prefix = *w;
                prefix[last] -= 1;
                let rule = &self.rules[&(last, x)];
                let mut acc: FxHashMap<PbwWord, CycScalar> = FxHashMap::default();
                for (rw, c) in &rule.rhs {
                    for (out, d) in self.mul_words_uncached(&prefix, rw) {
                        accumulate(&mut acc, out, &(c * &d));
                    }
                }
                finish(acc)
            }
            _ => {
                let mut out = *w;
                out[x] += 1;
                if out[x] >= self.letters[x].bound {
                    Vec::new()
                } else {
                    vec![(out, self.field.one())]
                }
            }
        };
        self.append_cache
            .write()
            .expect("cache poisoned")
            .insert((*w, x as u8), result.clone());
        result
    }

    fn mul_words_uncached(&self, u: &PbwWord, v: &PbwWord) -> WordElement {
        let mut current: WordElement = vec![(*u, self.field.one())];
        for (letter, &e) in v.iter().enumerate().take(self.letters.len()) {
            for _ in 0..e {
                let mut acc: FxHashMap<PbwWord, CycScalar> = FxHashMap::default();
                for (w, c) in &current {
                    for (out, d) in self.append(w, letter) {
                        accumulate(&mut acc, out, &(c * &d));
                    }
                }
                current = finish(acc);
                if current.is_empty() {
                    return current;
                }
            }
        }
        current
    }

    /// Product of two normal words, as a combination of normal words.
    pub fn mul_words(&self, u: &PbwWord, v: &PbwWord) -> WordElement {
        if v.iter().all(|&e| e == 0) {
            return vec![(*u, self.field.one())];
        }
        if u.iter().all(|&e| e == 0) {
            return vec![(*v, self.field.one())];
        }
        if let Some(hit) = self.product_cache.read().expect("cache poisoned").get(&(*u, *v)) {
            return hit.clone();
        }
        let result = self.mul_words_uncached(u, v);
        self.product_cache
            .write()
            .expect("cache poisoned")
            .insert((*u, *v), result.clone());
        result
    }

    /// `(g^α X)(g^β Y) = q^{-β·wt(X)} g^{α+β} XY`.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Element<Monomial> {
        let m = self.group_order as i64;
        let wt = self.weight(&a.pbw_word());
        let bg = b.group_exp();
        let phase: i64 = bg.iter().zip(wt.iter()).map(|(&x, &w)| x as i64 * w).sum();
        let q = self.field.zeta_pow(-phase);
        let mut group = [0u16; MAX_GROUP_RANK];
        for (i, slot) in group.iter_mut().enumerate().take(self.rank) {
            *slot = ((a.group_raw()[i] as i64 + bg[i] as i64).rem_euclid(m)) as u16;
        }
        let mut out = Element::zero();
        for (w, c) in self.mul_words(&a.pbw_word(), &b.pbw_word()) {
            out.add_term(Monomial::from_parts(self.rank, self.letters.len(), group, w), &c * &q);
        }
        out
    }

    pub fn monomial(&self, group: &[u32], pbw: &[u32]) -> Monomial {
        assert_eq!(group.len(), self.rank);
        assert_eq!(pbw.len(), self.letters.len());
        let m = self.group_order as u32;
        let g: Vec<u32> = group.iter().map(|x| x % m).collect();
        Monomial::new(&g, pbw)
    }

    /// Every normal-form monomial, in lexicographic order.
    pub fn all_monomials(&self) -> impl Iterator<Item = Monomial> + '_ {
        let m = self.group_order as u32;
        let mut radices: Vec<u32> = vec![m; self.rank];
        radices.extend(self.letters.iter().map(|l| l.bound as u32));
        mixed_radix(radices).map(move |digits| self.monomial(&digits[..self.rank], &digits[self.rank..]))
    }
}

fn accumulate(acc: &mut FxHashMap<PbwWord, CycScalar>, w: PbwWord, c: &CycScalar) {
    if c.is_zero() {
        return;
    }
    match acc.get_mut(&w) {
        Some(v) => *v += c,
        None => {
            acc.insert(w, c.clone());
        }
    }
}

fn finish(acc: FxHashMap<PbwWord, CycScalar>) -> WordElement {
    let mut v: WordElement = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    v.sort_by_key(|a| a.0);
    v
}

/// All digit vectors with the given radices, last digit fastest.
pub fn mixed_radix(radices: Vec<u32>) -> impl Iterator<Item = Vec<u32>> {
    let total: u64 = radices.iter().map(|&r| r as u64).product();
    (0..total).map(move |mut idx| {
        let mut digits = vec![0u32; radices.len()];
        for k in (0..radices.len()).rev() {
            digits[k] = (idx % radices[k] as u64) as u32;
            idx /= radices[k] as u64;
        }
        digits
    })
}
