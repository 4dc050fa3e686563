//! Cartan data for the supported simple Lie algebras and the admissibility
//! conditions on the root-of-unity parameter `n`.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CartanType {
    A1,
    A2,
}

impl CartanType {
    pub const ALL: [CartanType; 2] = [CartanType::A1, CartanType::A2];
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CartanType::A1 => write!(f, "A1"),
            CartanType::A2 => write!(f, "A2"),
        }
    }
}

impl FromStr for CartanType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A1" | "a1" => Ok(CartanType::A1),
            "A2" | "a2" => Ok(CartanType::A2),
            other => Err(format!("unsupported Cartan type `{other}` (expected A1 or A2)")),
        }
    }
}

/// A positive root, written in simple-root coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositiveRoot {
    pub name: &'static str,
    pub coords: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieDatum {
    pub cartan_type: CartanType,
    pub rank: usize,
    pub cartan_matrix: Vec<Vec<i64>>,
    pub positive_root_count: usize,
    pub dim_g: usize,
    /// Positive roots in the fixed PBW order.
    pub positive_roots: Vec<PositiveRoot>,
}

impl LieDatum {
    pub fn determinant(&self) -> i64 {
        let a = &self.cartan_matrix;
        match self.rank {
            1 => a[0][0],
            2 => a[0][0] * a[1][1] - a[0][1] * a[1][0],
            r => unreachable!("rank {r} is not supported"),
        }
    }

    /// Index of the simple root `i` in the PBW order.
    pub fn simple_root_position(&self, i: usize) -> usize {
        self.positive_roots
            .iter()
            .position(|r| r.coords.iter().enumerate().all(|(k, &c)| c == u32::from(k == i)))
            .expect("every simple root appears among the positive roots")
    }
}

pub fn lie_datum(t: CartanType) -> LieDatum {
    match t {
        CartanType::A1 => LieDatum {
            cartan_type: t,
            rank: 1,
            cartan_matrix: vec![vec![2]],
            positive_root_count: 1,
            dim_g: 3,
            positive_roots: vec![PositiveRoot { name: "e1", coords: vec![1] }],
        },
        CartanType::A2 => LieDatum {
            cartan_type: t,
            rank: 2,
            cartan_matrix: vec![vec![2, -1], vec![-1, 2]],
            positive_root_count: 3,
            dim_g: 8,
            positive_roots: vec![
                PositiveRoot { name: "e1", coords: vec![1, 0] },
                PositiveRoot { name: "E12", coords: vec![1, 1] },
                PositiveRoot { name: "e2", coords: vec![0, 1] },
            ],
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParamViolation {
    TooSmall { n: i64 },
    Even { n: i64 },
    NotCoprimeToDeterminant { n: i64, det: i64, gcd: i64 },
    /// Only relevant for G2, which is not shipped; kept so the condition list is complete.
    DivisibleByThreeForG2 { n: i64 },
}

impl fmt::Display for ParamViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamViolation::TooSmall { n } => write!(f, "n={n} is smaller than 3"),
            ParamViolation::Even { n } => write!(f, "n={n} is even"),
            ParamViolation::NotCoprimeToDeterminant { n, det, gcd } => {
                write!(f, "gcd(n, det)={gcd} (n={n}, det={det})")
            }
            ParamViolation::DivisibleByThreeForG2 { n } => write!(f, "n={n} is divisible by 3 (G2)"),
        }
    }
}

/// Checks `n ≥ 3`, `n` odd and `gcd(n, det A) = 1`. Returns every violated condition.
pub fn validate_params(t: CartanType, n: i64) -> Result<(), Vec<ParamViolation>> {
    let datum = lie_datum(t);
    let det = datum.determinant();
    let mut violations = Vec::new();
    if n < 3 {
        violations.push(ParamViolation::TooSmall { n });
    }
    if n.is_even() {
        violations.push(ParamViolation::Even { n });
    }
    let g = n.gcd(&det);
    if n != 0 && g != 1 {
        violations.push(ParamViolation::NotCoprimeToDeterminant { n, det, gcd: g });
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_data() {
        let a1 = lie_datum(CartanType::A1);
        assert_eq!((a1.rank, a1.positive_root_count, a1.dim_g), (1, 1, 3));
        assert_eq!(a1.cartan_matrix, vec![vec![2]]);
        assert_eq!(a1.determinant(), 2);
        let a2 = lie_datum(CartanType::A2);
        assert_eq!((a2.rank, a2.positive_root_count, a2.dim_g), (2, 3, 8));
        assert_eq!(a2.cartan_matrix, vec![vec![2, -1], vec![-1, 2]]);
        assert_eq!(a2.determinant(), 3);
        for t in CartanType::ALL {
            let d = lie_datum(t);
            assert_eq!(d.dim_g, d.rank + 2 * d.positive_root_count);
            assert_eq!(d.positive_roots.len(), d.positive_root_count);
            assert!((0..d.rank).all(|i| d.cartan_matrix[i][i] == 2));
        }
        assert_eq!(a2.simple_root_position(0), 0);
        assert_eq!(a2.simple_root_position(1), 2);
    }

    #[test]
    fn parameter_validation() {
        assert!(validate_params(CartanType::A1, 3).is_ok());
        assert!(validate_params(CartanType::A1, 5).is_ok());
        assert!(validate_params(CartanType::A2, 5).is_ok());
        assert_eq!(
            validate_params(CartanType::A1, 4),
            Err(vec![ParamViolation::Even { n: 4 }, ParamViolation::NotCoprimeToDeterminant { n: 4, det: 2, gcd: 2 }])
        );
        let v = validate_params(CartanType::A2, 3).unwrap_err();
        assert_eq!(v, vec![ParamViolation::NotCoprimeToDeterminant { n: 3, det: 3, gcd: 3 }]);
        assert!(v[0].to_string().starts_with("gcd(n, det)=3"));
        assert_eq!(validate_params(CartanType::A1, 1).unwrap_err().len(), 1);
    }

    #[test]
    fn violations_are_monotone() {
        // a value failing more conditions reports a superset of a value failing fewer
        let even_and_shared = validate_params(CartanType::A2, 6).unwrap_err();
        assert!(even_and_shared.contains(&ParamViolation::Even { n: 6 }));
        assert!(even_and_shared.iter().any(|v| matches!(v, ParamViolation::NotCoprimeToDeterminant { .. })));
    }
}
