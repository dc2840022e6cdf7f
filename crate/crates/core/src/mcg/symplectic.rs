//! Integer symplectic matrices and the transvection action of Dehn twists on
//! first homology.
//!
//! Coordinates are taken in a fixed symplectic basis ordered
//! `(a_1, …, a_g, b_1, …, b_g)` with form matrix `J = [[0, I], [-I, 0]]`, so
//! `⟨u, v⟩ = Σ_i (u_i·v_{g+i} − u_{g+i}·v_i)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

/// Symplectic pairing of two integer vectors of length 2g. Widened to i128
/// so no chart data within the validated entry bound can overflow.
pub fn pairing(u: &[i64], v: &[i64]) -> i128 {
    let g = u.len() / 2;
    (0..g)
        .map(|i| u[i] as i128 * v[g + i] as i128 - u[g + i] as i128 * v[i] as i128)
        .sum()
}

/// 2g×2g integer matrix, stored row-major. Constructors do not force
/// symplecticity; [`SymplecticMatrix::is_symplectic`] checks `MᵀJM = J`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymplecticMatrix {
    genus: usize,
    entries: Vec<BigInt>,
}

impl SymplecticMatrix {
    pub fn identity(genus: usize) -> Self {
        let n = 2 * genus;
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = BigInt::one();
        }
        SymplecticMatrix { genus, entries }
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Option<Self> {
        let n = rows.len();
        if n == 0 || !n.is_multiple_of(2) || rows.iter().any(|r| r.len() != n) {
            return None;
        }
        Some(SymplecticMatrix {
            genus: n / 2,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Option<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn dim(&self) -> usize {
        2 * self.genus
    }

    pub fn entry(&self, row: usize, col: usize) -> &BigInt {
        &self.entries[row * self.dim() + col]
    }

    pub fn mul(&self, other: &SymplecticMatrix) -> SymplecticMatrix {
        assert_eq!(self.genus, other.genus, "genus mismatch");
        let n = self.dim();
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let lik = self.entry(i, k);
                if lik.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let prod = lik * other.entry(k, j);
                    entries[i * n + j] += prod;
                }
            }
        }
        SymplecticMatrix {
            genus: self.genus,
            entries,
        }
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        let n = self.dim();
        assert_eq!(v.len(), n, "vector length mismatch");
        (0..n)
            .map(|i| (0..n).map(|j| self.entry(i, j) * &v[j]).sum())
            .collect()
    }

    /// `⟨u, Mv⟩`-preserving check: `MᵀJM = J`.
    pub fn is_symplectic(&self) -> bool {
        let n = self.dim();
        let g = self.genus;
        // (MᵀJM)[i][j] = Σ_k (M[k][i]·M[g+k][j] − M[g+k][i]·M[k][j])
        for i in 0..n {
            for j in 0..n {
                let mut sum = BigInt::zero();
                for k in 0..g {
                    sum += self.entry(k, i) * self.entry(g + k, j);
                    sum -= self.entry(g + k, i) * self.entry(k, j);
                }
                let expected = if j == i + g {
                    BigInt::one()
                } else if i == j + g {
                    -BigInt::one()
                } else {
                    BigInt::zero()
                };
                if sum != expected {
                    return false;
                }
            }
        }
        true
    }

    /// Inverse of a symplectic matrix: `M⁻¹ = −J·Mᵀ·J`, exact over Z.
    pub fn inverse(&self) -> SymplecticMatrix {
        let n = self.dim();
        let g = self.genus;
        let mut entries = vec![BigInt::zero(); n * n];
        // (−J Mᵀ J)[i][j]: split by the block quadrant of (i, j)
        for i in 0..n {
            for j in 0..n {
                // J e_j: column j of J; row i of −J picks ±Mᵀ entries
                let src = if i < g {
                    // row i of −J is −e_{g+i} → picks Mᵀ[g+i][·] = M[·][g+i]
                    |m: &Self, jj: usize, i: usize| -m.entry(jj, m.genus + i).clone()
                } else {
                    |m: &Self, jj: usize, i: usize| m.entry(jj, i - m.genus).clone()
                };
                // J maps e_j: for j < g, Je_j = −e_{g+j}; else Je_j = e_{j−g}
                let val = if j < g {
                    -src(self, g + j, i)
                } else {
                    src(self, j - g, i)
                };
                entries[i * n + j] = val;
            }
        }
        SymplecticMatrix {
            genus: self.genus,
            entries,
        }
    }

    /// Transvection `x ↦ x + e·⟨x,c⟩·c` as a matrix: `I + e·c·(Jc)ᵀ`.
    pub fn transvection(class: &[i64], exponent: i64) -> SymplecticMatrix {
        let n = class.len();
        let g = n / 2;
        let mut m = SymplecticMatrix::identity(g);
        // (Jc)ᵀ has entries (Jc)_j = c_{g+j} for j < g, −c_{j−g} otherwise;
        // ⟨x,c⟩ = Σ_j x_j·(Jc)... with our convention ⟨x,c⟩ = x·(−Jc)?  Fix by
        // direct formula: ⟨x,c⟩ = Σ_i (x_i c_{g+i} − x_{g+i} c_i).
        for i in 0..n {
            for j in 0..n {
                let w = if j < g { class[g + j] } else { -class[j - g] };
                let add = BigInt::from(exponent) * class[i] * w;
                m.entries[i * n + j] += add;
            }
        }
        m
    }
}

impl fmt::Display for SymplecticMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dim();
        write!(f, "[")?;
        for i in 0..n {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..n {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.entry(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

// Serialized as rows of decimal strings, matching the plan-file convention
// for exact integers.
impl Serialize for SymplecticMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let n = self.dim();
        let rows: Vec<Vec<String>> = (0..n)
            .map(|i| (0..n).map(|j| self.entry(i, j).to_string()).collect())
            .collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SymplecticMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(deserializer)?;
        let parsed: Result<Vec<Vec<BigInt>>, _> = rows
            .iter()
            .map(|r| r.iter().map(|s| BigInt::from_str(s)).collect())
            .collect();
        let parsed = parsed.map_err(DeError::custom)?;
        SymplecticMatrix::from_rows(parsed)
            .ok_or_else(|| DeError::custom("matrix is not square of even dimension"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vec_i64(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn pairing_is_antisymmetric() {
        let u = [1, 2, 3, 4];
        let v = [5, -1, 0, 2];
        assert_eq!(pairing(&u, &v), -pairing(&v, &u));
        assert_eq!(pairing(&u, &u), 0);
    }

    #[test]
    fn genus_one_transvection_matches_hand_computation() {
        // class (1,0): fixes (1,0) and sends (0,1) to (0,1) - (1,0)
        let t = SymplecticMatrix::transvection(&[1, 0], 1);
        assert_eq!(t.apply(&vec_i64(&[1, 0])), vec_i64(&[1, 0]));
        assert_eq!(t.apply(&vec_i64(&[0, 1])), vec_i64(&[-1, 1]));
        assert!(t.is_symplectic());
    }

    #[test]
    fn zero_class_gives_identity() {
        let t = SymplecticMatrix::transvection(&[0, 0, 0, 0], 3);
        assert_eq!(t, SymplecticMatrix::identity(2));
    }

    #[test]
    fn transvection_inverse_is_opposite_exponent() {
        let c = [1, -2, 0, 3, 1, 1];
        let t = SymplecticMatrix::transvection(&c, 1);
        let t_inv = SymplecticMatrix::transvection(&c, -1);
        assert_eq!(t.mul(&t_inv), SymplecticMatrix::identity(3));
        assert_eq!(t.inverse(), t_inv);
        assert!(t.is_symplectic());
    }

    #[test]
    fn symplectic_inverse_via_transpose_conjugation() {
        let t = SymplecticMatrix::transvection(&[2, 1, 1, 0, 1, -1], 2);
        assert!(t.is_symplectic());
        assert_eq!(t.mul(&t.inverse()), SymplecticMatrix::identity(3));
        assert_eq!(t.inverse().mul(&t), SymplecticMatrix::identity(3));
    }

    #[test]
    fn serde_round_trip() {
        let t = SymplecticMatrix::transvection(&[1, 1, 0, -1], 3);
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(serde_json::from_str::<SymplecticMatrix>(&json).unwrap(), t);
    }
}
