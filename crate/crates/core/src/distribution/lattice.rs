//! Integer lattices in Z^n: Hermite and Smith normal forms, integer kernels,
//! saturation and exact membership.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntRow = Vec<BigInt>;

pub fn to_big(v: &[i64]) -> IntRow {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Unimodular row reduction on the first `ncols` columns. Rows keep their full
/// length, so any trailing columns record the transformation. Returns the
/// number of pivot rows; rows past that index vanish on the first `ncols` columns.
fn echelon(rows: &mut [IntRow], ncols: usize, reduce_above: bool) -> usize {
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        loop {
            // smallest nonzero entry at or below r in column c
            let best = (r..rows.len()).filter(|&i| !rows[i][c].is_zero()).min_by(|&i, &j| rows[i][c].abs().cmp(&rows[j][c].abs()));
            let Some(p) = best else { break };
            rows.swap(r, p);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let k = rows[i][c].div_floor(&rows[r][c]);
                let (head, tail) = rows.split_at_mut(i);
                sub_scaled(&mut tail[0], &head[r], &k);
                if !tail[0][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if rows[r][c].is_zero() {
            continue;
        }
        if rows[r][c].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -&*x;
            }
        }
        if reduce_above {
            for i in 0..r {
                let k = rows[i][c].div_floor(&rows[r][c]);
                if !k.is_zero() {
                    let (head, tail) = rows.split_at_mut(r);
                    sub_scaled(&mut head[i], &tail[0], &k);
                }
            }
        }
        r += 1;
    }
    r
}

fn sub_scaled(dst: &mut IntRow, src: &IntRow, k: &BigInt) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d -= k * s;
    }
}

/// Row Hermite normal form: nonzero rows only, positive pivots, entries above
/// each pivot reduced into [0, pivot).
pub fn hnf(rows: &[IntRow], ncols: usize) -> Vec<IntRow> {
    let mut m: Vec<IntRow> = rows.to_vec();
    let r = echelon(&mut m, ncols, true);
    m.truncate(r);
    m
}

fn transpose(m: &[IntRow], ncols: usize) -> Vec<IntRow> {
    (0..ncols).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

fn is_diagonal(m: &[IntRow]) -> bool {
    m.iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, x)| i == j || x.is_zero()))
}

/// Invariant factors d_1 | d_2 | ... of the Smith normal form (nonzero ones only).
pub fn snf(rows: &[IntRow], ncols: usize) -> Vec<BigInt> {
    let mut m = hnf(rows, ncols);
    let mut width = ncols;
    while !is_diagonal(&m) {
        let t = transpose(&m, width);
        width = m.len();
        m = hnf(&t, width);
    }
    let mut d: Vec<BigInt> = m.iter().enumerate().map(|(i, row)| row[i].abs()).collect();
    // enforce divisibility by replacing pairs with (gcd, lcm)
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
    d
}

/// A Z-basis of { y in Z^ncols : row . y = 0 for every row }, in Hermite form.
pub fn integer_kernel(rows: &[IntRow], ncols: usize) -> Vec<IntRow> {
    let m = rows.len();
    let mut aug: Vec<IntRow> = (0..ncols)
        .map(|j| {
            let mut row: IntRow = rows.iter().map(|r| r[j].clone()).collect();
            row.extend((0..ncols).map(|k| if k == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    let r = echelon(&mut aug, m, false);
    let kernel: Vec<IntRow> = aug[r..].iter().map(|row| row[m..].to_vec()).collect();
    hnf(&kernel, ncols)
}

/// A sublattice of Z^dim, kept in Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntLattice {
    dim: usize,
    basis: Vec<IntRow>,
}

impl IntLattice {
    pub fn from_rows(dim: usize, rows: &[IntRow]) -> IntLattice {
        IntLattice { dim, basis: hnf(rows, dim) }
    }

    pub fn from_i64_rows(dim: usize, rows: &[Vec<i64>]) -> IntLattice {
        let big: Vec<IntRow> = rows.iter().map(|r| to_big(r)).collect();
        IntLattice::from_rows(dim, &big)
    }

    pub fn full(dim: usize) -> IntLattice {
        let rows: Vec<IntRow> = (0..dim).map(|i| (0..dim).map(|j| BigInt::from(u8::from(i == j))).collect()).collect();
        IntLattice { dim, basis: rows }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[IntRow] {
        &self.basis
    }

    /// Coordinates of v in the Hermite basis, or `None` when v is not in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut rest: IntRow = v.to_vec();
        let mut coords = Vec::with_capacity(self.basis.len());
        let mut col = 0;
        for row in &self.basis {
            let pivot = row.iter().position(|x| !x.is_zero()).expect("Hermite rows are nonzero");
            if rest[col..pivot].iter().any(|x| !x.is_zero()) {
                return None;
            }
            let (k, r) = rest[pivot].div_rem(&row[pivot]);
            if !r.is_zero() {
                return None;
            }
            sub_scaled(&mut rest, row, &k);
            coords.push(k);
            col = pivot + 1;
        }
        rest.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    /// (Q-span of the lattice) intersected with Z^dim.
    pub fn saturate(&self) -> IntLattice {
        let k = integer_kernel(&self.basis, self.dim);
        IntLattice { dim: self.dim, basis: integer_kernel(&k, self.dim) }
    }

    /// Saturation intersected with the kernels of the given linear forms.
    pub fn saturate_within(&self, forms: &[IntRow]) -> IntLattice {
        let mut k = integer_kernel(&self.basis, self.dim);
        k.extend(forms.iter().cloned());
        IntLattice { dim: self.dim, basis: integer_kernel(&k, self.dim) }
    }

    pub fn contains_lattice(&self, other: &IntLattice) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn big(rows: &[Vec<i64>]) -> Vec<IntRow> {
        rows.iter().map(|r| to_big(r)).collect()
    }

    #[test]
    fn saturation_of_a_scaled_axis() {
        let l = IntLattice::from_i64_rows(2, &[vec![2, 0]]);
        assert!(!l.contains(&to_big(&[1, 0])));
        let s = l.saturate();
        assert_eq!(s.basis(), &big(&[vec![1, 0]])[..]);
        assert!(l.contains(&to_big(&[0, 0])));
    }

    #[test]
    fn kernel_is_orthogonal_and_saturated() {
        let rows = big(&[vec![2, 4, 6], vec![1, 1, 1]]);
        let k = integer_kernel(&rows, 3);
        assert_eq!(k, big(&[vec![1, -2, 1]]));
    }

    #[test]
    fn snf_divisibility_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let rows: Vec<Vec<i64>> = (0..6).map(|_| (0..6).map(|_| rng.gen_range(-9..=9)).collect()).collect();
            let d = snf(&big(&rows), 6);
            for w in d.windows(2) {
                assert!((&w[1] % &w[0]).is_zero(), "{d:?}");
            }
        }
        // diag(2, 3) has invariant factors 1, 6
        assert_eq!(snf(&big(&[vec![2, 0], vec![0, 3]]), 2), vec![BigInt::from(1), BigInt::from(6)]);
    }

    proptest! {
        #[test]
        fn membership_matches_construction(rows in prop::collection::vec(prop::collection::vec(-6i64..7, 4), 1..4), c in prop::collection::vec(-3i64..4, 3)) {
            let l = IntLattice::from_i64_rows(4, &rows);
            let mut v = vec![0i64; 4];
            for (row, k) in rows.iter().zip(&c) {
                for j in 0..4 {
                    v[j] += k * row[j];
                }
            }
            let bv = to_big(&v);
            let coords = l.coordinates(&bv);
            prop_assert!(coords.is_some());
            let coords = coords.unwrap();
            let mut back = vec![BigInt::zero(); 4];
            for (row, k) in l.basis().iter().zip(&coords) {
                for j in 0..4 {
                    back[j] += k * &row[j];
                }
            }
            prop_assert_eq!(back, bv);
            prop_assert!(l.saturate().contains_lattice(&l));
        }

        #[test]
        fn determinant_matches_snf(rows in prop::collection::vec(prop::collection::vec(-5i64..6, 3), 3)) {
            let m = big(&rows);
            let d = snf(&m, 3);
            let det = {
                let a = &rows;
                a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
            };
            if det == 0 {
                prop_assert!(d.len() < 3);
            } else {
                let prod: BigInt = d.iter().product();
                prop_assert_eq!(prod, BigInt::from(det.abs()));
            }
        }
    }
}
