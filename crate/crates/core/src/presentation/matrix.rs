//! Integer matrices, Smith normal form and row Hermite normal form.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A dense rows × cols matrix of arbitrary-precision integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![vec![BigInt::zero(); cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = BigInt::one();
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        IntMatrix { rows: rows.len(), cols, data: rows }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        IntMatrix::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r][c]
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r]
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.data[i][k].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i][j] += &self.data[i][k] * &other.data[k][j];
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(Zero::is_zero))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.data.swap(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for r in &mut self.data {
            r.swap(a, b);
        }
    }

    /// row[dst] += k · row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let v = &self.data[src][c] * k;
            self.data[dst][c] += v;
        }
    }

    /// col[dst] += k · col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for r in &mut self.data {
            let v = &r[src] * k;
            r[dst] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for x in &mut self.data[r] {
            *x = -&*x;
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.data {
            let cells: Vec<String> = r.iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// `U·A·V = D` with `U`, `V` unimodular and `D` diagonal.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: Option<IntMatrix>,
    pub v: Option<IntMatrix>,
    /// Non-zero diagonal entries, positive, each dividing the next.
    pub invariants: Vec<BigInt>,
}

/// Smith normal form by elementary operations, pivoting on the smallest
/// non-zero absolute value in the remaining block. `track` also records
/// the unimodular transforms.
pub fn smith_normal_form(a: &IntMatrix, track: bool) -> SmithForm {
    let mut m = a.clone();
    let mut u = track.then(|| IntMatrix::identity(a.rows));
    let mut v = track.then(|| IntMatrix::identity(a.cols));
    let (rows, cols) = (a.rows, a.cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest non-zero entry in the block [t.., t..]
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = &m.data[i][j];
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < m.data[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap_rows(t, pi);
        if let Some(u) = u.as_mut() {
            u.swap_rows(t, pi);
        }
        m.swap_cols(t, pj);
        if let Some(v) = v.as_mut() {
            v.swap_cols(t, pj);
        }
        let mut dirty = false;
        for i in t + 1..rows {
            if m.data[i][t].is_zero() {
                continue;
            }
            let q = -m.data[i][t].div_floor(&m.data[t][t]);
            m.add_row(i, t, &q);
            if let Some(u) = u.as_mut() {
                u.add_row(i, t, &q);
            }
            dirty |= !m.data[i][t].is_zero();
        }
        for j in t + 1..cols {
            if m.data[t][j].is_zero() {
                continue;
            }
            let q = -m.data[t][j].div_floor(&m.data[t][t]);
            m.add_col(j, t, &q);
            if let Some(v) = v.as_mut() {
                v.add_col(j, t, &q);
            }
            dirty |= !m.data[t][j].is_zero();
        }
        if dirty {
            // a smaller remainder appeared; re-pivot on the same block
            continue;
        }
        // enforce divisibility of the rest of the block by the pivot
        let mut bad_row = None;
        'scan: for i in t + 1..rows {
            for j in t + 1..cols {
                if !m.data[i][j].is_multiple_of(&m.data[t][t]) {
                    bad_row = Some(i);
                    break 'scan;
                }
            }
        }
        if let Some(i) = bad_row {
            let one = BigInt::one();
            m.add_row(t, i, &one);
            if let Some(u) = u.as_mut() {
                u.add_row(t, i, &one);
            }
            continue;
        }
        if m.data[t][t].is_negative() {
            m.negate_row(t);
            if let Some(u) = u.as_mut() {
                u.negate_row(t);
            }
        }
        t += 1;
    }
    let invariants = (0..rows.min(cols))
        .map(|i| m.data[i][i].clone())
        .filter(|x| !x.is_zero())
        .collect();
    SmithForm { d: m, u, v, invariants }
}

/// Row Hermite normal form: returns the rank and the non-zero rows, which
/// form a basis of the row lattice.
pub fn hnf(a: &IntMatrix) -> (usize, Vec<Vec<BigInt>>) {
    let mut m = a.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // Euclid on column c among rows r..
        loop {
            let mut piv: Option<usize> = None;
            for i in r..rows {
                let x = &m.data[i][c];
                if !x.is_zero() && piv.is_none_or(|p| x.abs() < m.data[p][c].abs()) {
                    piv = Some(i);
                }
            }
            let Some(p) = piv else { break };
            m.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..rows {
                if m.data[i][c].is_zero() {
                    continue;
                }
                let q = -m.data[i][c].div_floor(&m.data[r][c]);
                m.add_row(i, r, &q);
                done &= m.data[i][c].is_zero();
            }
            if done {
                break;
            }
        }
        if m.data[r][c].is_zero() {
            continue;
        }
        if m.data[r][c].is_negative() {
            m.negate_row(r);
        }
        for i in 0..r {
            let q = -m.data[i][c].div_floor(&m.data[r][c]);
            m.add_row(i, r, &q);
        }
        r += 1;
    }
    let basis = m.data.into_iter().take(r).collect();
    (r, basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn is_unimodular(m: &IntMatrix) -> bool {
        // |det| = 1 via SNF of the square matrix
        let s = smith_normal_form(m, false);
        s.invariants.len() == m.rows() && s.invariants.iter().all(One::is_one)
    }

    #[test]
    fn hnf_examples() {
        let (r, b) = hnf(&IntMatrix::from_i64(&[vec![2], vec![1]]));
        assert_eq!(r, 1);
        assert_eq!(b, vec![vec![BigInt::from(1)]]);
        let (r, b) = hnf(&IntMatrix::identity(2));
        assert_eq!(r, 2);
        assert_eq!(IntMatrix::from_rows(2, b), IntMatrix::identity(2));
        let (r, b) = hnf(&IntMatrix::zeros(3, 2));
        assert_eq!(r, 0);
        assert!(b.is_empty());
    }

    #[test]
    fn snf_small() {
        let s = smith_normal_form(&IntMatrix::from_i64(&[vec![2, -3]]), true);
        assert_eq!(s.invariants, vec![BigInt::from(1)]);
        let s = smith_normal_form(&IntMatrix::from_i64(&[vec![2, 0], vec![0, 3]]), false);
        assert_eq!(s.invariants, vec![BigInt::from(1), BigInt::from(6)]);
        let s = smith_normal_form(&IntMatrix::from_i64(&[vec![4, 6], vec![6, 4]]), false);
        assert_eq!(s.invariants, vec![BigInt::from(2), BigInt::from(10)]);
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-9i64..10, c), r))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn snf_is_certified(rows in small_matrix()) {
            let a = IntMatrix::from_i64(&rows);
            let s = smith_normal_form(&a, true);
            let (u, v) = (s.u.clone().unwrap(), s.v.clone().unwrap());
            prop_assert_eq!(u.mul(&a).mul(&v), s.d.clone());
            prop_assert!(is_unimodular(&u) && is_unimodular(&v));
            for i in 0..s.d.rows() {
                for j in 0..s.d.cols() {
                    if i != j { prop_assert!(s.d.get(i, j).is_zero()); }
                }
            }
            for w in s.invariants.windows(2) {
                prop_assert!(w[1].is_multiple_of(&w[0]));
            }
            prop_assert!(s.invariants.iter().all(|x| x.is_positive()));
        }

        #[test]
        fn hnf_spans_the_row_lattice(rows in small_matrix()) {
            let a = IntMatrix::from_i64(&rows);
            let (r, basis) = hnf(&a);
            // same rank as SNF
            prop_assert_eq!(r, smith_normal_form(&a, false).invariants.len());
            // every original row reduces to zero against the echelon basis
            for row in 0..a.rows() {
                let mut x: Vec<BigInt> = a.row(row).to_vec();
                for brow in &basis {
                    let c = brow.iter().position(|v| !v.is_zero()).unwrap();
                    prop_assert!(x[c].is_multiple_of(&brow[c]));
                    let q = &x[c] / &brow[c];
                    for (xi, bi) in x.iter_mut().zip(brow) { *xi -= &q * bi; }
                }
                prop_assert!(x.iter().all(Zero::is_zero));
            }
            // and each basis row lies in the original lattice: stacking does not change the invariants
            if r > 0 {
                let mut stacked: Vec<Vec<BigInt>> = (0..a.rows()).map(|i| a.row(i).to_vec()).collect();
                stacked.extend(basis);
                let s1 = smith_normal_form(&a, false).invariants;
                let s2 = smith_normal_form(&IntMatrix::from_rows(a.cols(), stacked), false).invariants;
                prop_assert_eq!(s1, s2);
            }
        }
    }
}
