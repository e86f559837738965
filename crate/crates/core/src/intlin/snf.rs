//! Smith normal form by unimodular row and column operations.
//!
//! The pivot at each step is an entry of minimal nonzero absolute value in
//! the trailing submatrix. Rows and columns are reduced against it by
//! truncated division until only the pivot survives, and the divisibility
//! condition `d_i | d_{i+1}` is restored by adding an offending row into
//! the pivot row and repeating.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// `U·A·V = D` with `U`, `V` unimodular and `D` diagonal.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

impl SmithForm {
    /// Nonzero diagonal entries `d_1 | d_2 | … | d_rank`, all positive.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }
}

/// Working state. `vt` holds `V` transposed so column operations on `V`
/// become row operations.
struct Work {
    d: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    vt: Vec<Vec<BigInt>>,
    rows: usize,
    cols: usize,
}

/// `dst -= q * src` over the nonzero entries of `src`.
fn sub_mul(dst: &mut [BigInt], src: &[BigInt], q: &BigInt) {
    if q.is_one() {
        for (a, b) in dst.iter_mut().zip(src) {
            if !b.is_zero() {
                *a -= b;
            }
        }
    } else if (-q).is_one() {
        for (a, b) in dst.iter_mut().zip(src) {
            if !b.is_zero() {
                *a += b;
            }
        }
    } else {
        for (a, b) in dst.iter_mut().zip(src) {
            if !b.is_zero() {
                *a -= b * q;
            }
        }
    }
}

fn two_rows(m: &mut [Vec<BigInt>], dst: usize, src: usize) -> (&mut Vec<BigInt>, &Vec<BigInt>) {
    debug_assert_ne!(dst, src);
    if dst < src {
        let (lo, hi) = m.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    }
}

impl Work {
    /// row_dst -= q * row_src on D (columns from `from`) and U.
    fn row_op(&mut self, dst: usize, src: usize, q: &BigInt, from: usize) {
        let (a, b) = two_rows(&mut self.d, dst, src);
        sub_mul(&mut a[from..], &b[from..], q);
        let (a, b) = two_rows(&mut self.u, dst, src);
        sub_mul(a, b, q);
    }

    /// col_dst -= q * col_src on D (rows from `from`) and V.
    fn col_op(&mut self, dst: usize, src: usize, q: &BigInt, from: usize) {
        for row in &mut self.d[from..] {
            if !row[src].is_zero() {
                let delta = &row[src] * q;
                row[dst] -= delta;
            }
        }
        let (a, b) = two_rows(&mut self.vt, dst, src);
        sub_mul(a, b, q);
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            self.d.swap(i, j);
            self.u.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for row in &mut self.d {
                row.swap(i, j);
            }
            self.vt.swap(i, j);
        }
    }

    /// Minimal nonzero |entry| in the trailing submatrix from `t`.
    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let e = &self.d[i][j];
                if e.is_zero() {
                    continue;
                }
                if e.magnitude().is_one() {
                    return Some((i, j));
                }
                match best {
                    Some((bi, bj)) if self.d[bi][bj].magnitude() <= e.magnitude() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }

    /// Clears row and column `t` against the pivot at `(t, t)`. Returns false
    /// when a nonzero remainder was left behind.
    fn eliminate(&mut self, t: usize) -> bool {
        let mut clean = true;
        for i in t + 1..self.rows {
            if self.d[i][t].is_zero() {
                continue;
            }
            let q = &self.d[i][t] / &self.d[t][t];
            if !q.is_zero() {
                self.row_op(i, t, &q, t);
            }
            if !self.d[i][t].is_zero() {
                clean = false;
            }
        }
        for j in t + 1..self.cols {
            if self.d[t][j].is_zero() {
                continue;
            }
            let q = &self.d[t][j] / &self.d[t][t];
            if !q.is_zero() {
                self.col_op(j, t, &q, t);
            }
            if !self.d[t][j].is_zero() {
                clean = false;
            }
        }
        clean
    }

    fn non_divisible(&self, t: usize) -> Option<usize> {
        let p = &self.d[t][t];
        if p.magnitude().is_one() {
            return None;
        }
        (t + 1..self.rows).find(|&i| (t + 1..self.cols).any(|j| !self.d[i][j].is_multiple_of(p)))
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (rows, cols) = (a.rows(), a.cols());
    let mut w = Work {
        d: a.to_rows(),
        u: IntMatrix::identity(rows).to_rows(),
        vt: IntMatrix::identity(cols).to_rows(),
        rows,
        cols,
    };
    let mut rank = 0;
    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = w.find_pivot(t) else {
            break;
        };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            if !w.eliminate(t) {
                let (pi, pj) = w.find_pivot(t).expect("nonzero remainder exists");
                w.swap_rows(t, pi);
                w.swap_cols(t, pj);
                continue;
            }
            match w.non_divisible(t) {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    w.row_op(t, i, &minus_one, t);
                }
                None => break,
            }
        }
        if w.d[t][t].is_negative() {
            for x in w.d[t].iter_mut().chain(w.u[t].iter_mut()) {
                *x = -std::mem::take(x);
            }
        }
        rank += 1;
    }
    let flatten = |m: Vec<Vec<BigInt>>, r: usize, c: usize| {
        IntMatrix::from_vec(r, c, m.into_iter().flatten().collect()).expect("shape preserved")
    };
    SmithForm {
        u: flatten(w.u, rows, rows),
        d: flatten(w.d, rows, cols),
        v: flatten(w.vt, cols, cols).transpose(),
        rank,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(a);
        assert_eq!(s.u.mul(a).unwrap().mul(&s.v).unwrap(), s.d);
        assert!(s.d.is_diagonal());
        assert_eq!(s.u.determinant().unwrap().abs(), BigInt::one());
        assert_eq!(s.v.determinant().unwrap().abs(), BigInt::one());
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        assert_eq!(s.rank, a.rank());
        s
    }

    #[test]
    fn diag_2_3() {
        let a = IntMatrix::from_rows(&[vec![2i64, 0], vec![0, 3]]).unwrap();
        let s = check(&a);
        assert_eq!(s.invariant_factors(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn identity_and_zero() {
        let s = check(&IntMatrix::identity(3));
        assert_eq!(s.d, IntMatrix::identity(3));
        let z = IntMatrix::zeros(1, 1);
        let s = check(&z);
        assert_eq!(s.d, z);
        assert_eq!(s.rank, 0);
    }

    #[test]
    fn rectangular() {
        let a = IntMatrix::from_rows(&[vec![2i64, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]).unwrap();
        let s = check(&a);
        assert_eq!(s.invariant_factors(), vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        let b = IntMatrix::from_rows(&[vec![1i64, 2, 3, 4], vec![5, 6, 7, 8]]).unwrap();
        let s = check(&b);
        assert_eq!(s.invariant_factors(), vec![BigInt::from(1), BigInt::from(4)]);
    }
}
