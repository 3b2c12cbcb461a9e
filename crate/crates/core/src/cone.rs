//! Exact polyhedral routines: LP feasibility by a rational simplex and
//! extreme rays by double description.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalars::{Rational, RationalMatrix};

/// Whether `v` is a non-negative combination of `gens`, decided by phase I
/// of the simplex method with Bland's rule.
pub(crate) fn nonneg_combination_exists(gens: &[Vec<Rational>], v: &[Rational]) -> bool {
    let m = v.len();
    let n = gens.len();
    if v.iter().all(Zero::is_zero) {
        return true;
    }
    if n == 0 {
        return false;
    }
    let width = n + m + 1;
    let rhs_col = n + m;
    let mut tab = vec![vec![Rational::zero(); width]; m + 1];
    for i in 0..m {
        let flip = v[i].is_negative();
        for (j, g) in gens.iter().enumerate() {
            tab[i][j] = if flip { -&g[i] } else { g[i].clone() };
        }
        tab[i][n + i] = Rational::one();
        tab[i][rhs_col] = v[i].abs();
    }
    let objective: Vec<Rational> = (0..n).map(|j| -(0..m).map(|i| tab[i][j].clone()).sum::<Rational>()).collect();
    tab[m][..n].clone_from_slice(&objective);
    tab[m][rhs_col] = -(0..m).map(|i| tab[i][rhs_col].clone()).sum::<Rational>();
    let mut basis: Vec<usize> = (n..n + m).collect();

    while let Some(enter) = (0..n + m).find(|&j| tab[m][j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if tab[i][enter].is_positive() {
                let ratio = &tab[i][rhs_col] / &tab[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            break;
        };
        let piv = tab[r][enter].clone();
        for x in tab[r].iter_mut() {
            *x /= &piv;
        }
        let pivot_row = tab[r].clone();
        for (i, row) in tab.iter_mut().enumerate() {
            if i == r || row[enter].is_zero() {
                continue;
            }
            let f = row[enter].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= &f * p;
            }
        }
        basis[r] = enter;
    }
    tab[m][rhs_col].is_zero()
}

/// Scales a rational vector to the primitive integer vector on its ray.
pub(crate) fn primitive(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect();
    primitive_int(ints)
}

pub(crate) fn primitive_int(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        v
    } else {
        v.into_iter().map(|x| x / &g).collect()
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }
    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }
    fn contains_all(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == *b)
    }
}

struct Ray {
    v: Vec<BigInt>,
    zeros: Bits,
}

/// Extreme rays of `{x : a·x ≥ 0 for every row a}` as primitive integer
/// vectors. The rows must span the ambient space, so the cone is pointed.
pub(crate) fn extreme_rays(rows: &[Vec<BigInt>], dim: usize) -> Result<Vec<Vec<BigInt>>> {
    for r in rows {
        if r.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: r.len(),
            });
        }
    }
    let to_rat = |r: &Vec<BigInt>| -> Vec<Rational> { r.iter().cloned().map(Rational::from_integer).collect() };

    // Greedy choice of `dim` independent rows.
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..rows.len() {
        let mut trial: Vec<Vec<Rational>> = chosen.iter().map(|&c| to_rat(&rows[c])).collect();
        trial.push(to_rat(&rows[i]));
        if RationalMatrix::from_rows(trial)?.rank() == chosen.len() + 1 {
            chosen.push(i);
            if chosen.len() == dim {
                break;
            }
        }
    }
    if chosen.len() < dim {
        return Err(Error::NotFullDimensional);
    }
    let a0 = RationalMatrix::from_rows(chosen.iter().map(|&c| to_rat(&rows[c])).collect())?;
    let inv = a0.inverse()?;

    let zero_set = |v: &[BigInt]| -> Bits {
        let mut z = Bits::new(rows.len());
        for (i, r) in rows.iter().enumerate() {
            if dot(r, v).is_zero() {
                z.set(i);
            }
        }
        z
    };

    let mut rays: Vec<Ray> = (0..dim)
        .map(|k| {
            let col: Vec<Rational> = (0..dim).map(|i| inv.get(i, k).clone()).collect();
            let v = primitive(&col);
            let zeros = zero_set(&v);
            Ray { v, zeros }
        })
        .collect();
    let mut processed = Bits::new(rows.len());
    for &c in &chosen {
        processed.set(c);
    }

    for (i, row) in rows.iter().enumerate() {
        if chosen.contains(&i) {
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|r| dot(row, &r.v)).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_negative()).collect();
        if neg.is_empty() {
            processed.set(i);
            continue;
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_positive()).collect();
        let masked: Vec<Bits> = rays.iter().map(|r| r.zeros.and(&processed)).collect();
        let mut next: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = masked[p].and(&masked[n]);
                if (common.count() as usize) + 2 < dim {
                    continue;
                }
                let adjacent = (0..rays.len())
                    .all(|k| k == p || k == n || !masked[k].contains_all(&common));
                if !adjacent {
                    continue;
                }
                let v: Vec<BigInt> = rays[n]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(x, y)| &vals[p] * x - &vals[n] * y)
                    .collect();
                let v = primitive_int(v);
                let zeros = zero_set(&v);
                next.push(Ray { v, zeros });
            }
        }
        let mut kept: Vec<Ray> = Vec::new();
        for (k, r) in rays.into_iter().enumerate() {
            if !vals[k].is_negative() {
                kept.push(r);
            }
        }
        kept.extend(next);
        rays = kept;
        processed.set(i);
    }
    let mut out: Vec<Vec<BigInt>> = rays.into_iter().map(|r| r.v).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::int;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn lp_feasibility() {
        let gens = vec![vec![int(0), int(1)], vec![int(1), int(-1)]];
        assert!(nonneg_combination_exists(&gens, &[int(1), int(0)]));
        assert!(!nonneg_combination_exists(&gens, &[int(1), int(-2)]));
        assert!(nonneg_combination_exists(&gens, &[int(0), int(0)]));
        assert!(!nonneg_combination_exists(&[vec![int(1)]], &[int(-1)]));
    }

    #[test]
    fn square_cone_rays() {
        // x ≥ 0, y ≥ 0, x + y ≥ 0 (redundant)
        let rows = vec![bi(&[1, 0]), bi(&[0, 1]), bi(&[1, 1])];
        assert_eq!(extreme_rays(&rows, 2).unwrap(), vec![bi(&[0, 1]), bi(&[1, 0])]);
    }

    #[test]
    fn octant_cut_by_plane() {
        // the cone over a square: x, y ≥ 0, z − x ≥ 0, z − y ≥ 0
        let rows = vec![bi(&[1, 0, 0]), bi(&[0, 1, 0]), bi(&[-1, 0, 1]), bi(&[0, -1, 1])];
        let rays = extreme_rays(&rows, 3).unwrap();
        assert_eq!(rays, vec![bi(&[0, 0, 1]), bi(&[0, 1, 1]), bi(&[1, 0, 1]), bi(&[1, 1, 1])]);
    }

    #[test]
    fn rank_deficient_rows() {
        let rows = vec![bi(&[1, 0]), bi(&[2, 0])];
        assert_eq!(extreme_rays(&rows, 2), Err(Error::NotFullDimensional));
    }
}
