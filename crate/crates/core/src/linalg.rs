//! Small exact linear algebra: Hermite forms over Z, 3x3 rational
//! inverses and kernels over F_p.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::arith::{mul_mod_u64, pow_mod_u64};

pub type IVec3 = [BigInt; 3];
pub type IMat3 = [IVec3; 3];
pub type QMat3 = [[BigRational; 3]; 3];

pub fn ivec(a: i64, b: i64, c: i64) -> IVec3 {
    [BigInt::from(a), BigInt::from(b), BigInt::from(c)]
}

fn axpy(y: &mut IVec3, k: &BigInt, x: &IVec3) {
    for i in 0..3 {
        y[i] -= k * &x[i];
    }
}

/// Lower-triangular Hermite form of the lattice spanned by `rows`.
///
/// Row `i` of the result has its positive pivot in column `i` and zeros to
/// the right; entries left of a pivot are reduced into `[0, pivot)`.
/// Returns `None` when the rows do not span a rank-3 lattice.
pub fn hnf(rows: &[IVec3]) -> Option<IMat3> {
    let mut pool: Vec<IVec3> = rows
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    let mut pivots: Vec<Option<IVec3>> = vec![None, None, None];
    for col in (0..3).rev() {
        let mut pivot: Option<IVec3> = None;
        let mut rest = Vec::with_capacity(pool.len());
        for mut row in pool.drain(..) {
            if row[col].is_zero() {
                rest.push(row);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(row),
                Some(mut p) => {
                    // Euclid on column `col` between p and row
                    while !row[col].is_zero() {
                        let q = p[col].div_floor(&row[col]);
                        axpy(&mut p, &q, &row);
                        std::mem::swap(&mut p, &mut row);
                    }
                    pivot = Some(p);
                    if row.iter().any(|x| !x.is_zero()) {
                        rest.push(row);
                    }
                }
            }
        }
        let mut p = pivot?;
        if p[col].is_negative() {
            for x in p.iter_mut() {
                *x = -&*x;
            }
        }
        pivots[col] = Some(p);
        pool = rest;
    }
    let mut out: IMat3 = [
        pivots[0].take().unwrap(),
        pivots[1].take().unwrap(),
        pivots[2].take().unwrap(),
    ];
    for j in 1..3 {
        for k in (0..j).rev() {
            let q = out[j][k].div_floor(&out[k][k]);
            if !q.is_zero() {
                let rk = out[k].clone();
                axpy(&mut out[j], &q, &rk);
            }
        }
    }
    Some(out)
}

pub fn det3<T>(m: &[[T; 3]; 3]) -> T
where
    T: Clone + std::ops::Mul<Output = T> + std::ops::Sub<Output = T> + std::ops::Add<Output = T>,
{
    let c = |i: usize, j: usize| m[i][j].clone();
    c(0, 0) * (c(1, 1) * c(2, 2) - c(1, 2) * c(2, 1))
        - c(0, 1) * (c(1, 0) * c(2, 2) - c(1, 2) * c(2, 0))
        + c(0, 2) * (c(1, 0) * c(2, 1) - c(1, 1) * c(2, 0))
}

pub fn qzero() -> BigRational {
    BigRational::zero()
}

pub fn qint(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn inverse_q(m: &QMat3) -> Option<QMat3> {
    let d = det3(m);
    if d.is_zero() {
        return None;
    }
    let c = |i: usize, j: usize| &m[i][j];
    let cof =
        |r0: usize, r1: usize, c0: usize, c1: usize| c(r0, c0) * c(r1, c1) - c(r0, c1) * c(r1, c0);
    let adj = [
        [cof(1, 2, 1, 2), -cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
        [-cof(1, 2, 0, 2), cof(0, 2, 0, 2), -cof(0, 1, 0, 2)],
        [cof(1, 2, 0, 1), -cof(0, 2, 0, 1), cof(0, 1, 0, 1)],
    ];
    Some(adj.map(|row| row.map(|x| x / &d)))
}

/// Row vector times matrix.
pub fn vec_mul_q(v: &[BigRational; 3], m: &QMat3) -> [BigRational; 3] {
    let mut out = [qzero(), qzero(), qzero()];
    for (i, vi) in v.iter().enumerate() {
        if vi.is_zero() {
            continue;
        }
        for j in 0..3 {
            out[j] += vi * &m[i][j];
        }
    }
    out
}

pub fn mat_mul_q(a: &QMat3, b: &QMat3) -> QMat3 {
    [
        vec_mul_q(&a[0], b),
        vec_mul_q(&a[1], b),
        vec_mul_q(&a[2], b),
    ]
}

pub fn to_q(m: &IMat3) -> QMat3 {
    m.clone().map(|r| r.map(BigRational::from_integer))
}

/// `x · A` for an integer row vector and integer matrix.
pub fn vec_mul_i(v: &IVec3, m: &IMat3) -> IVec3 {
    let mut out = ivec(0, 0, 0);
    for i in 0..3 {
        if v[i].is_zero() {
            continue;
        }
        for j in 0..3 {
            out[j] += &v[i] * &m[i][j];
        }
    }
    out
}

/// Solve `x · H = v` for lower-triangular `H` (as produced by [`hnf`]).
/// Returns `None` when the solution is not integral.
pub fn solve_lower_integral(h: &IMat3, v: &IVec3) -> Option<IVec3> {
    let mut rem = v.clone();
    let mut x = ivec(0, 0, 0);
    for k in (0..3).rev() {
        let (q, r) = rem[k].div_rem(&h[k][k]);
        if !r.is_zero() {
            return None;
        }
        let row = h[k].clone();
        axpy(&mut rem, &q, &row);
        x[k] = q;
    }
    Some(x)
}

/// Canonical representative of `v` modulo the lattice of `h`: every
/// coordinate ends in `[0, h[i][i])`.
pub fn reduce_mod_hnf(h: &IMat3, v: &IVec3) -> IVec3 {
    let mut rem = v.clone();
    for k in (0..3).rev() {
        let q = rem[k].div_floor(&h[k][k]);
        if !q.is_zero() {
            let row = h[k].clone();
            axpy(&mut rem, &q, &row);
        }
    }
    rem
}

/// Basis of the left kernel `{x : x·A = 0}` of an `n × m` matrix over F_p.
pub fn left_kernel_mod_p(a: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = a.len();
    if n == 0 {
        return Vec::new();
    }
    let m = a[0].len();
    // augment with identity, eliminate on the A part
    let mut rows: Vec<Vec<u64>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v: Vec<u64> = r.iter().map(|&x| x % p).collect();
            v.extend((0..n).map(|j| u64::from(i == j)));
            v
        })
        .collect();
    let mut rank = 0;
    for col in 0..m {
        let Some(piv) = (rank..n).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = pow_mod_u64(rows[rank][col], p - 2, p);
        for x in rows[rank].iter_mut() {
            *x = mul_mod_u64(*x, inv, p);
        }
        for r in 0..n {
            if r != rank && rows[r][col] != 0 {
                let f = rows[r][col];
                for c in 0..m + n {
                    let t = mul_mod_u64(f, rows[rank][c], p);
                    rows[r][c] = (rows[r][c] + p - t) % p;
                }
            }
        }
        rank += 1;
    }
    rows[rank..].iter().map(|r| r[m..].to_vec()).collect()
}

pub fn is_zero_vec(v: &IVec3) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn gcd_vec(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

pub fn identity() -> IMat3 {
    [ivec(1, 0, 0), ivec(0, 1, 0), ivec(0, 0, 1)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnf_of_simple_lattice() {
        let rows = [ivec(6, 0, 0), ivec(4, 2, 0), ivec(1, 1, 3), ivec(0, 0, 9)];
        let h = hnf(&rows).unwrap();
        assert_eq!(h[2][2], BigInt::from(3));
        // index = gcd of the 3x3 minors {36, 108, 54, 18}
        let det = &h[0][0] * &h[1][1] * &h[2][2];
        assert_eq!(det, BigInt::from(18));
        for r in &rows {
            assert!(solve_lower_integral(&h, r).is_some());
        }
        for j in 1..3 {
            for k in 0..j {
                assert!(h[j][k] >= BigInt::zero() && h[j][k] < h[k][k]);
            }
        }
    }

    #[test]
    fn hnf_rank_deficient() {
        assert!(hnf(&[ivec(1, 2, 3), ivec(2, 4, 6)]).is_none());
    }

    #[test]
    fn kernel_mod_p() {
        // rows 0 and 2 are equal, so e0 - e2 is in the left kernel
        let a = vec![vec![1, 2], vec![0, 1], vec![1, 2]];
        let k = left_kernel_mod_p(&a, 5);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        for col in 0..2 {
            let s: u64 = (0..3).map(|i| v[i] * a[i][col]).sum::<u64>() % 5;
            assert_eq!(s, 0);
        }
    }

    #[test]
    fn rational_inverse() {
        let m: QMat3 = [
            [qint(2), qint(1), qint(0)],
            [qint(0), qint(3), qint(1)],
            [qint(1), qint(0), qint(1)],
        ];
        let inv = inverse_q(&m).unwrap();
        let id = mat_mul_q(&m, &inv);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(id[i][j], qint(i64::from(i == j)));
            }
        }
    }
}
