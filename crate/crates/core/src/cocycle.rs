//! Additive group cochains on Z/n and an exact decision procedure for whether a
//! 3-cocycle is a coboundary, via the Smith normal form of the coboundary map.
//!
//! Coefficients are taken in Z/n. Since H²(Z/n, C*) = 0, the map
//! H³(Z/n; μ_n) → H³(Z/n; C*) is injective, so deciding triviality over Z/n
//! decides it over C* as well.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::{mixed_radix, Algebra, TensorElement};
use crate::error::{Error, Result};
use crate::idempotent::IdempotentAlgebra;

/// A map `(Z/n)^k → Z/n`, stored densely (first argument slowest).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdditiveCochain {
    pub n: u32,
    pub degree: usize,
    pub values: Vec<u32>,
}

impl AdditiveCochain {
    pub fn zero(n: u32, degree: usize) -> Self {
        AdditiveCochain {
            n,
            degree,
            values: vec![0; (n as usize).pow(degree as u32)],
        }
    }

    pub fn from_fn(n: u32, degree: usize, f: impl Fn(&[u32]) -> i64) -> Self {
        let values = mixed_radix(vec![n; degree])
            .map(|args| f(&args).rem_euclid(n as i64) as u32)
            .collect();
        AdditiveCochain { n, degree, values }
    }

    fn index(&self, args: &[u32]) -> usize {
        args.iter().fold(0usize, |acc, &a| acc * self.n as usize + (a % self.n) as usize)
    }

    pub fn get(&self, args: &[u32]) -> u32 {
        assert_eq!(args.len(), self.degree);
        self.values[self.index(args)]
    }

    pub fn is_normalized(&self) -> bool {
        mixed_radix(vec![self.n; self.degree])
            .all(|args| !args.contains(&0) || self.get(&args) == 0)
    }
}

/// The closed-form restriction `ω(b,c,d) = a_ii·b·((c+d)' − c − d)/n mod n`.
pub fn restricted_formula(a_ii: i64, n: u32) -> AdditiveCochain {
    AdditiveCochain::from_fn(n, 3, |x| {
        let s = (x[1] + x[2]) as i64;
        a_ii * x[0] as i64 * ((s % n as i64) - s) / n as i64
    })
}

/// Restricts Φ (bold basis) to the copy of Z/n on coordinate `i` and transports
/// it to an additive cochain: each coefficient must be `(q^n)^k`, and `k mod n`
/// is recorded.
pub fn restrict_phi(bold: &IdempotentAlgebra, phi: &TensorElement, i: usize) -> Result<AdditiveCochain> {
    let r = bold.rank();
    let n = bold.modulus();
    if i >= r {
        return Err(Error::Unsupported(format!("coordinate {i} out of range for rank {r}")));
    }
    let field = bold.field();
    let embed = |x: u32| {
        let mut l = vec![0u32; r];
        l[i] = x;
        bold.basis_monomial(&l, [0; 3])
    };
    let mut values = Vec::with_capacity((n as usize).pow(3));
    for args in mixed_radix(vec![n; 3]) {
        let key = [embed(args[0]), embed(args[1]), embed(args[2])];
        let c = phi.coefficient(&key).cloned().unwrap_or_else(|| field.zero());
        let k = c
            .as_zeta_power()
            .filter(|k| k % n == 0)
            .ok_or_else(|| Error::NotAPowerOfQn(format!("{c} at {args:?}")))?;
        values.push(k / n);
    }
    Ok(AdditiveCochain { n, degree: 3, values })
}

/// `dω(a,b,c,d) = ω(b,c,d) − ω(a+b,c,d) + ω(a,b+c,d) − ω(a,b,c+d) + ω(a,b,c)`.
pub fn coboundary3(w: &AdditiveCochain) -> AdditiveCochain {
    assert_eq!(w.degree, 3);
    let n = w.n;
    AdditiveCochain::from_fn(n, 4, |x| {
        let (a, b, c, d) = (x[0], x[1], x[2], x[3]);
        w.get(&[b, c, d]) as i64 - w.get(&[a + b, c, d]) as i64 + w.get(&[a, b + c, d]) as i64
            - w.get(&[a, b, c + d]) as i64
            + w.get(&[a, b, c]) as i64
    })
}

pub fn is_cocycle(w: &AdditiveCochain) -> bool {
    coboundary3(w).values.iter().all(|&v| v == 0)
}

/// `dμ(a,b,c) = μ(b,c) − μ(a+b,c) + μ(a,b+c) − μ(a,b)`.
pub fn coboundary(mu: &AdditiveCochain) -> AdditiveCochain {
    assert_eq!(mu.degree, 2);
    AdditiveCochain::from_fn(mu.n, 3, |x| {
        let (a, b, c) = (x[0], x[1], x[2]);
        mu.get(&[b, c]) as i64 - mu.get(&[a + b, c]) as i64 + mu.get(&[a, b + c]) as i64 - mu.get(&[a, b]) as i64
    })
}

pub type IntMatrix = Vec<Vec<BigInt>>;

/// `left · matrix · right = diag`, with `left`, `right` unimodular and each
/// nonzero invariant factor dividing the next.
#[derive(Clone, Debug)]
pub struct IntegerMatrixSnf {
    pub matrix: IntMatrix,
    pub left: IntMatrix,
    pub right: IntMatrix,
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
}

fn identity(k: usize) -> IntMatrix {
    (0..k)
        .map(|i| (0..k).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let rows = a.len();
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![BigInt::zero(); cols]; rows];
    for i in 0..rows {
        for k in 0..inner {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..cols {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntMatrix) -> BigInt {
    let k = m.len();
    if k == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for p in 0..k {
        if a[p][p].is_zero() {
            match (p + 1..k).find(|&r| !a[r][p].is_zero()) {
                Some(r) => {
                    a.swap(p, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in p + 1..k {
            for j in p + 1..k {
                let v = &a[i][j] * &a[p][p] - &a[i][p] * &a[p][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[p][p].clone();
    }
    sign * &a[k - 1][k - 1]
}

/// Smith normal form with unimodular transforms.
pub fn smith_normal_form(matrix: &IntMatrix) -> IntegerMatrixSnf {
    let rows = matrix.len();
    let cols = if rows == 0 { 0 } else { matrix[0].len() };
    let mut a = matrix.clone();
    let mut left = identity(rows);
    let mut right = identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // Pivot: smallest nonzero entry in the remaining block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && pivot.is_none_or(|(pi, pj)| a[i][j].abs() < a[pi][pj].abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        left.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        for row in right.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut changed = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                row_sub(&mut a, i, t, &q);
                row_sub(&mut left, i, t, &q);
                if !a[i][t].is_zero() {
                    a.swap(t, i);
                    left.swap(t, i);
                    changed = true;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                col_sub(&mut a, j, t, &q);
                col_sub(&mut right, j, t, &q);
                if !a[t][j].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                    for row in right.iter_mut() {
                        row.swap(t, j);
                    }
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // Divisibility: the pivot must divide every remaining entry.
            let bad = (t + 1..rows).find_map(|i| (t + 1..cols).find(|&j| !(&a[i][j] % &a[t][t]).is_zero()).map(|j| (i, j)));
            match bad {
                Some((i, _)) => {
                    // add row i to row t and repeat the elimination
                    let one = -BigInt::one();
                    row_sub(&mut a, t, i, &one);
                    row_sub(&mut left, t, i, &one);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for v in a[t].iter_mut() {
                *v = -&*v;
            }
            for v in left[t].iter_mut() {
                *v = -&*v;
            }
        }
        t += 1;
    }
    let diagonal: Vec<BigInt> = (0..rows.min(cols)).map(|i| a[i][i].clone()).collect();
    let rank = diagonal.iter().filter(|d| !d.is_zero()).count();
    IntegerMatrixSnf {
        matrix: matrix.clone(),
        left,
        right,
        diagonal,
        rank,
    }
}

/// `row_i -= q · row_t`.
fn row_sub(m: &mut IntMatrix, i: usize, t: usize, q: &BigInt) {
    let src = m[t].clone();
    for (x, s) in m[i].iter_mut().zip(src.iter()) {
        if !s.is_zero() {
            *x -= q * s;
        }
    }
}

/// `col_j -= q · col_t`.
fn col_sub(m: &mut IntMatrix, j: usize, t: usize, q: &BigInt) {
    for row in m.iter_mut() {
        if !row[t].is_zero() {
            let d = q * &row[t];
            row[j] -= d;
        }
    }
}

impl IntegerMatrixSnf {
    /// Checks `L·M·R = D`, `|det L| = |det R| = 1` and the divisibility chain.
    pub fn verify(&self) -> bool {
        let lmr = mat_mul(&mat_mul(&self.left, &self.matrix), &self.right);
        let rows = self.matrix.len();
        let cols = if rows == 0 { 0 } else { self.matrix[0].len() };
        for i in 0..rows {
            for j in 0..cols {
                let expected = if i == j { self.diagonal[i].clone() } else { BigInt::zero() };
                if lmr[i][j] != expected {
                    return false;
                }
            }
        }
        let unimodular = |m: &IntMatrix| determinant(m).abs().is_one();
        let chain = self.diagonal.windows(2).all(|w| {
            if w[1].is_zero() {
                true
            } else {
                !w[0].is_zero() && (&w[1] % &w[0]).is_zero()
            }
        });
        unimodular(&self.left) && unimodular(&self.right) && chain
    }
}

/// The coboundary map C² → C³ as an `n³ × n²` integer matrix, in the index
/// order of [`AdditiveCochain`].
pub fn coboundary_matrix(n: u32) -> IntMatrix {
    let nu = n as usize;
    let mut out = vec![vec![BigInt::zero(); nu * nu]; nu * nu * nu];
    let idx2 = |a: u32, b: u32| ((a % n) * n + (b % n)) as usize;
    for (row, x) in mixed_radix(vec![n; 3]).enumerate() {
        let (a, b, c) = (x[0], x[1], x[2]);
        out[row][idx2(b, c)] += 1;
        out[row][idx2(a + b, c)] -= 1;
        out[row][idx2(a, b + c)] += 1;
        out[row][idx2(a, b)] -= 1;
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub enum CoboundaryVerdict {
    /// `dμ = ω`.
    Trivial { mu: AdditiveCochain },
    /// Row `index` of the diagonalized system has no solution: invariant factor
    /// `factor` and transformed right-hand side `residue` (mod n).
    Nontrivial { index: usize, factor: String, residue: u32 },
}

impl CoboundaryVerdict {
    pub fn is_trivial(&self) -> bool {
        matches!(self, CoboundaryVerdict::Trivial { .. })
    }
}

/// Decides whether `ω = dμ` for some 2-cochain `μ` over Z/n.
pub fn is_coboundary(w: &AdditiveCochain) -> Result<CoboundaryVerdict> {
    if w.degree != 3 {
        return Err(Error::Unsupported("is_coboundary expects a 3-cochain".into()));
    }
    let n = w.n;
    let nb = BigInt::from(n);
    let snf = smith_normal_form(&coboundary_matrix(n));
    let rhs: Vec<Vec<BigInt>> = w.values.iter().map(|&v| vec![BigInt::from(v)]).collect();
    let lw: Vec<BigInt> = mat_mul(&snf.left, &rhs).into_iter().map(|r| r[0].mod_floor(&nb)).collect();
    let cols = (n * n) as usize;
    let mut y = vec![BigInt::zero(); cols];
    for (k, b) in lw.iter().enumerate() {
        let s = snf.diagonal.get(k).cloned().unwrap_or_else(BigInt::zero);
        let g = s.gcd(&nb);
        if !(b % &g).is_zero() {
            return Ok(CoboundaryVerdict::Nontrivial {
                index: k,
                factor: s.to_string(),
                residue: b.to_u32().unwrap_or(0),
            });
        }
        if k < cols && !s.is_zero() {
            // s·y ≡ b (mod n)  ⇒  y = (b/g)·inv(s/g) mod n/g
            let modulus = &nb / &g;
            let inv = mod_inverse(&(&s / &g).mod_floor(&modulus), &modulus);
            y[k] = ((b / &g) * inv).mod_floor(&modulus);
        }
    }
    let mu_vec: Vec<u32> = mat_mul(&snf.right, &y.iter().map(|v| vec![v.clone()]).collect())
        .into_iter()
        .map(|r| r[0].mod_floor(&nb).to_u32().expect("residue fits"))
        .collect();
    let mu = AdditiveCochain {
        n,
        degree: 2,
        values: mu_vec,
    };
    if coboundary(&mu) != *w {
        return Err(Error::Unsupported("solver produced a witness that does not reproduce ω".into()));
    }
    Ok(CoboundaryVerdict::Trivial { mu })
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    if m.is_one() {
        return BigInt::zero();
    }
    let e = a.extended_gcd(m);
    assert!(e.gcd.is_one(), "not invertible");
    e.x.mod_floor(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn snf_examples() {
        let id = smith_normal_form(&m(&[&[1, 0], &[0, 1]]));
        assert!(id.verify());
        assert_eq!(id.diagonal, vec![BigInt::from(1), BigInt::from(1)]);
        let d = smith_normal_form(&m(&[&[2, 0], &[0, 3]]));
        assert!(d.verify());
        assert_eq!(d.diagonal, vec![BigInt::from(1), BigInt::from(6)]);
        let z = smith_normal_form(&m(&[&[0, 0, 0], &[0, 0, 0]]));
        assert!(z.verify());
        assert_eq!(z.rank, 0);
        let c = smith_normal_form(&coboundary_matrix(3));
        assert!(c.verify());
    }

    #[test]
    fn restricted_cocycle_a1_n3() {
        let w = restricted_formula(2, 3);
        assert_eq!(w.get(&[0, 1, 2]), 0);
        assert_eq!(w.get(&[1, 2, 2]), 1);
        assert!(is_cocycle(&w));
        assert!(w.is_normalized());
        assert!(!is_coboundary(&w).unwrap().is_trivial());
    }

    #[test]
    fn restriction_of_phi_matches_formula() {
        use crate::borel::build_uqb;
        use crate::lie::CartanType;
        use crate::twist::closed_form_phi;
        for (t, n) in [(CartanType::A1, 3), (CartanType::A1, 5), (CartanType::A2, 5)] {
            let uqb = build_uqb(t, n).unwrap();
            let bold = IdempotentAlgebra::new(uqb.clone(), n as u32);
            let phi = closed_form_phi(&uqb, &bold);
            for i in 0..uqb.rank() {
                let w = restrict_phi(&bold, &phi.value, i).unwrap();
                assert_eq!(w, restricted_formula(2, n as u32));
                assert!(is_cocycle(&w));
                assert!(!is_coboundary(&w).unwrap().is_trivial());
            }
        }
    }

    #[test]
    fn zero_is_trivial() {
        let v = is_coboundary(&AdditiveCochain::zero(5, 3)).unwrap();
        match v {
            CoboundaryVerdict::Trivial { mu } => assert_eq!(coboundary(&mu), AdditiveCochain::zero(5, 3)),
            _ => panic!("zero cochain must be trivial"),
        }
    }
}
