//! Exact integer linear algebra: fraction-free determinants, Smith normal
//! form, and orders of finite abelian groups given by presentations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// Bareiss fraction-free determinant of a square integer matrix.
pub fn bareiss_det(m: &IntMatrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Diagonal of the Smith normal form (nonnegative, each dividing the next),
/// padded with zeros to `min(rows, cols)`.
pub fn smith_diagonal(m: &IntMatrix) -> Vec<BigInt> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut a = m.clone();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero absolute value in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut done = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..cols {
                    let v = &a[t][j] * &q;
                    a[i][j] -= v;
                }
                if !a[i][t].is_zero() {
                    done = false;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut().take(rows).skip(t) {
                    let v = &row[t] * &q;
                    row[j] -= v;
                }
                if !a[t][j].is_zero() {
                    done = false;
                }
            }
            if done {
                // the pivot must divide the rest of the block
                let bad = (t + 1..rows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| !(&a[i][j] % &a[t][t]).is_zero());
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for j in t..cols {
                            let v = a[i][j].clone();
                            a[t][j] += v;
                        }
                    }
                }
            }
            // move the smallest nonzero entry of row/column t to the pivot
            let mut best = (t, t);
            for i in t..rows {
                if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            a.swap(t, best.0);
            for row in a.iter_mut() {
                row.swap(t, best.1);
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag.resize(rows.min(cols), BigInt::zero());
    diag
}

/// A finitely presented abelian group `Z^g / ⟨columns of relations⟩`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianPresentation {
    pub generators: usize,
    /// `generators` rows; each column is one relation.
    pub relations: IntMatrix,
}

impl AbelianPresentation {
    pub fn new(generators: usize, relations: IntMatrix) -> Result<Self> {
        if relations.len() != generators {
            return Err(Error::arg(format!(
                "relation matrix has {} rows for {generators} generators",
                relations.len()
            )));
        }
        let width = relations.first().map_or(0, |r| r.len());
        if relations.iter().any(|r| r.len() != width) {
            return Err(Error::arg("ragged relation matrix"));
        }
        Ok(AbelianPresentation { generators, relations })
    }

    /// `Z/n_1 × … × Z/n_g` in diagonal form.
    pub fn cyclic(orders: &[BigInt]) -> Self {
        let g = orders.len();
        let relations = (0..g)
            .map(|i| (0..g).map(|j| if i == j { orders[i].clone() } else { BigInt::zero() }).collect())
            .collect();
        AbelianPresentation { generators: g, relations }
    }

    pub fn order(&self) -> Result<BigInt> {
        let diag = smith_diagonal(&self.relations);
        if diag.len() < self.generators || diag.iter().any(|d| d.is_zero()) {
            return Err(Error::Domain("presented group is infinite".into()));
        }
        Ok(diag.iter().product())
    }

    pub fn invariant_factors(&self) -> Result<Vec<BigInt>> {
        let diag = smith_diagonal(&self.relations);
        if diag.len() < self.generators || diag.iter().any(|d| d.is_zero()) {
            return Err(Error::Domain("presented group is infinite".into()));
        }
        Ok(diag.into_iter().filter(|d| !d.is_one()).collect())
    }
}

/// Order of the subgroup generated by the given coordinate columns inside
/// the presented group: `|⟨gens, rel⟩ / ⟨rel⟩| = |G| / |Z^g / ⟨gens, rel⟩|`.
pub fn abelian_order(p: &AbelianPresentation, generators: &IntMatrix) -> Result<BigInt> {
    if generators.len() != p.generators {
        return Err(Error::arg("generator columns must have one row per generator"));
    }
    let total = p.order()?;
    let joined: IntMatrix = p
        .relations
        .iter()
        .zip(generators)
        .map(|(r, g)| r.iter().chain(g).cloned().collect())
        .collect();
    let quotient = AbelianPresentation::new(p.generators, joined)?.order()?;
    Ok(total / quotient)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn determinants() {
        assert_eq!(bareiss_det(&m(&[&[2, 1], &[1, 3]])), BigInt::from(5));
        assert_eq!(bareiss_det(&m(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(
            bareiss_det(&m(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]])),
            BigInt::from(4)
        );
        assert_eq!(bareiss_det(&m(&[&[1, 2], &[2, 4]])), BigInt::zero());
    }

    #[test]
    fn smith_forms() {
        let d = smith_diagonal(&m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]));
        assert_eq!(d, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        let d = smith_diagonal(&m(&[&[4, 0], &[0, 6]]));
        assert_eq!(d, vec![BigInt::from(2), BigInt::from(12)]);
    }

    #[test]
    fn group_orders() {
        let z6 = AbelianPresentation::cyclic(&[BigInt::from(6)]);
        assert_eq!(z6.order().unwrap(), BigInt::from(6));
        assert_eq!(abelian_order(&z6, &m(&[&[1]])).unwrap(), BigInt::from(6));
        let z8 = AbelianPresentation::cyclic(&[BigInt::from(8)]);
        assert_eq!(abelian_order(&z8, &m(&[&[2]])).unwrap(), BigInt::from(4));
        let inf = AbelianPresentation::new(2, m(&[&[3], &[0]])).unwrap();
        assert!(inf.order().is_err());
        let z2z4 = AbelianPresentation::cyclic(&[BigInt::from(4), BigInt::from(2)]);
        assert_eq!(
            z2z4.invariant_factors().unwrap(),
            vec![BigInt::from(2), BigInt::from(4)]
        );
    }
}
