//! Integer matrices, Smith normal form, and kernels/cokernels of `M ⊗ K`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{AbelianGroup, ExtNat};
use crate::error::AlgebraError;

fn add(a: i128, b: i128) -> i128 {
    a.checked_add(b).expect("integer overflow in exact matrix arithmetic")
}

fn mul(a: i128, b: i128) -> i128 {
    a.checked_mul(b).expect("integer overflow in exact matrix arithmetic")
}

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from rows; panics if they are ragged.
    pub fn from_rows<R: AsRef<[i128]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged matrix rows");
            data.extend_from_slice(r.as_ref());
        }
        IntMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// A single column.
    pub fn column(entries: &[i128]) -> Self {
        IntMatrix {
            rows: entries.len(),
            cols: 1,
            data: entries.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i128 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i128) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn row(&self, i: usize) -> &[i128] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix shapes do not compose");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = add(out.get(i, j), mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hconcat(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows, "row counts differ");
        let mut out = IntMatrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j));
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> i128 {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut a = self.clone();
        let mut sign = 1;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a.get(k, k) == 0 {
                match (k + 1..n).find(|&i| a.get(i, k) != 0) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = mul(a.get(i, j), a.get(k, k)) - mul(a.get(i, k), a.get(k, j));
                    a.set(i, j, v / prev);
                }
            }
            prev = a.get(k, k);
        }
        sign * a.get(n - 1, n - 1)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += factor * row[src]
    fn add_row(&mut self, dst: usize, src: usize, factor: i128) {
        for j in 0..self.cols {
            let v = add(self.get(dst, j), mul(factor, self.get(src, j)));
            self.set(dst, j, v);
        }
    }

    /// col[dst] += factor * col[src]
    fn add_col(&mut self, dst: usize, src: usize, factor: i128) {
        for i in 0..self.rows {
            let v = add(self.get(i, dst), mul(factor, self.get(i, src)));
            self.set(i, dst, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}x{}", self.rows, self.cols)?;
        let rows: Vec<&[i128]> = (0..self.rows).map(|i| self.row(i)).collect();
        write!(f, "{rows:?}")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let r: Vec<String> = self.row(i).iter().map(i128::to_string).collect();
                format!("[{}]", r.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// Diagonal `d` of the Smith normal form, `len = min(rows, cols)`, with optional
/// unimodular transforms satisfying `u · M · v = diag(d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub d: Vec<i128>,
    pub u: Option<IntMatrix>,
    pub v: Option<IntMatrix>,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.d.iter().filter(|&&x| x != 0).count()
    }
}

/// Smith normal form with transforms.
pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    snf_impl(m, true)
}

/// Smith normal form, diagonal only.
pub fn smith_diagonal(m: &IntMatrix) -> Vec<i128> {
    snf_impl(m, false).d
}

struct SnfCalc {
    a: IntMatrix,
    u: Option<IntMatrix>,
    v: Option<IntMatrix>,
}

impl SnfCalc {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        if let Some(u) = &mut self.u {
            u.swap_rows(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        if let Some(v) = &mut self.v {
            v.swap_cols(i, j);
        }
    }

    fn add_row(&mut self, dst: usize, src: usize, f: i128) {
        self.a.add_row(dst, src, f);
        if let Some(u) = &mut self.u {
            u.add_row(dst, src, f);
        }
    }

    fn add_col(&mut self, dst: usize, src: usize, f: i128) {
        self.a.add_col(dst, src, f);
        if let Some(v) = &mut self.v {
            v.add_col(dst, src, f);
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        if let Some(u) = &mut self.u {
            u.negate_row(i);
        }
    }

    /// Position of the smallest nonzero entry in the trailing block.
    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows {
            for j in t..self.a.cols {
                let x = self.a.get(i, j).abs();
                if x != 0 && best.is_none_or(|(bi, bj)| x < self.a.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    /// Brings the trailing block at `t` to `p ⊕ rest` with `p` dividing `rest`.
    ///
    /// Each round moves the smallest entry of the block to the pivot and reduces its
    /// row and column with rounded quotients, so remainders are at most `|p| / 2` and
    /// entries and transforms stay small.
    fn process(&mut self, t: usize) -> bool {
        let (rows, cols) = (self.a.rows, self.a.cols);
        loop {
            let Some((pi, pj)) = self.min_pivot(t) else {
                return false;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            let p = self.a.get(t, t);
            let mut clean = true;
            for i in t + 1..rows {
                let x = self.a.get(i, t);
                if x != 0 {
                    self.add_row(i, t, -rounded_div(x, p));
                    clean &= self.a.get(i, t) == 0;
                }
            }
            for j in t + 1..cols {
                let x = self.a.get(t, j);
                if x != 0 {
                    self.add_col(j, t, -rounded_div(x, p));
                    clean &= self.a.get(t, j) == 0;
                }
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| self.a.get(i, j) % p != 0));
            match offender {
                Some(i) => self.add_row(t, i, 1),
                None => break,
            }
        }
        if self.a.get(t, t) < 0 {
            self.negate_row(t);
        }
        true
    }
}

/// Nearest integer to `x / p`.
fn rounded_div(x: i128, p: i128) -> i128 {
    let q = x.div_euclid(p);
    let r = x.rem_euclid(p);
    if 2 * r > p.abs() {
        q + p.signum()
    } else {
        q
    }
}

fn snf_impl(m: &IntMatrix, transforms: bool) -> SnfResult {
    let mut calc = SnfCalc {
        a: m.clone(),
        u: transforms.then(|| IntMatrix::identity(m.rows)),
        v: transforms.then(|| IntMatrix::identity(m.cols)),
    };
    let k = m.rows.min(m.cols);
    for t in 0..k {
        if !calc.process(t) {
            break;
        }
    }
    SnfResult {
        d: (0..k).map(|t| calc.a.get(t, t)).collect(),
        u: calc.u,
        v: calc.v,
    }
}

/// Kernel and cokernel of `m ⊗ K : K^cols → K^rows`.
///
/// Symbolic ranks in `k` are rejected; see [`ker_coker_with_symbolic`].
pub fn matrix_ker_coker(
    m: &IntMatrix,
    k: &AbelianGroup,
) -> Result<(AbelianGroup, AbelianGroup), AlgebraError> {
    if k.has_symbolic() {
        return Err(AlgebraError::SymbolicInExactMatrix);
    }
    let d = smith_diagonal(m);
    let mut ker = k.scale(ExtNat::Fin((m.cols - d.len()) as u64));
    let mut coker = k.scale(ExtNat::Fin((m.rows - d.len()) as u64));
    for &di in &d {
        if di == 0 {
            ker = ker.direct_sum(k);
            coker = coker.direct_sum(k);
        } else if di != 1 {
            let di = u64::try_from(di).expect("SNF diagonal is nonnegative");
            ker = ker.direct_sum(&k.n_torsion(di));
            coker = coker.direct_sum(&k.tensor(&AbelianGroup::cyclic(di))?);
        }
    }
    Ok((ker, coker))
}

/// As [`matrix_ker_coker`], but a symbolic free summand `ℤ^r` of `K` is carried
/// through as `ker(M on ℤ)^r` and `coker(M on ℤ)^r`. Fails when the latter has
/// torsion.
pub fn ker_coker_with_symbolic(
    m: &IntMatrix,
    k: &AbelianGroup,
) -> Result<(AbelianGroup, AbelianGroup), AlgebraError> {
    let exact = k.without_symbolic();
    let (mut ker, mut coker) = matrix_ker_coker(m, &exact)?;
    if !k.has_symbolic() {
        return Ok((ker, coker));
    }
    let (ker_z, coker_z) = matrix_ker_coker(m, &AbelianGroup::free(1u64))?;
    if !coker_z.torsion_part().is_zero() {
        return Err(AlgebraError::SymbolicTensorTorsion);
    }
    for s in k.symbolic_ranks() {
        let sym = AbelianGroup::symbolic(s.clone());
        ker = ker.direct_sum(&sym.scale(ker_z.free_mult()));
        coker = coker.direct_sum(&sym.scale(coker_z.free_mult()));
    }
    Ok((ker, coker))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(m: &IntMatrix) -> SnfResult {
        let r = smith_normal_form(m);
        let (u, v) = (r.u.clone().unwrap(), r.v.clone().unwrap());
        let prod = u.mul(m).mul(&v);
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let expect = if i == j { r.d[i] } else { 0 };
                assert_eq!(prod.get(i, j), expect, "u·M·v is not diag(d) for {m:?}");
            }
        }
        for w in r.d.windows(2) {
            assert!(w[1] == 0 || (w[0] != 0 && w[1] % w[0] == 0), "{:?}", r.d);
        }
        assert_eq!(u.determinant().abs(), 1);
        assert_eq!(v.determinant().abs(), 1);
        r
    }

    #[test]
    fn snf_examples() {
        for n in [3i128, 5, 7, 9, 21] {
            assert_eq!(check_snf(&IntMatrix::column(&[2, n])).d, vec![1]);
        }
        assert_eq!(check_snf(&IntMatrix::identity(4)).d, vec![1; 4]);
        assert_eq!(
            check_snf(&IntMatrix::from_rows(&[[2, 0], [0, 4]])).d,
            vec![2, 4]
        );
        assert_eq!(
            check_snf(&IntMatrix::from_rows(&[[4, 0], [0, 6]])).d,
            vec![2, 12]
        );
        assert!(check_snf(&IntMatrix::zeros(0, 3)).d.is_empty());
        assert_eq!(check_snf(&IntMatrix::zeros(2, 3)).d, vec![0, 0]);
    }

    #[test]
    fn coprime_pair_by_row_reduction() {
        // row1 -= k·row0 turns [[2],[2k+1]] into [[2],[1]]; one more step leaves [[0],[1]]
        for k in 1..20i128 {
            let mut col = [2i128, 2 * k + 1];
            col[1] -= k * col[0];
            col[0] -= 2 * col[1];
            assert_eq!(col, [0, 1]);
            assert_eq!(smith_diagonal(&IntMatrix::column(&[2, 2 * k + 1])), vec![1]);
        }
    }

    #[test]
    fn ker_coker_examples() {
        let z = AbelianGroup::free(1u64);
        let (k, c) = matrix_ker_coker(&IntMatrix::column(&[2, 3]), &z).unwrap();
        assert!(k.is_zero());
        assert_eq!(c, z);
        let (k, c) = matrix_ker_coker(&IntMatrix::identity(3), &AbelianGroup::cyclic(12)).unwrap();
        assert!(k.is_zero() && c.is_zero());
        let (k, c) =
            matrix_ker_coker(&IntMatrix::from_rows(&[[2]]), &AbelianGroup::cyclic(48)).unwrap();
        assert_eq!(k, AbelianGroup::cyclic(2));
        assert_eq!(c, AbelianGroup::cyclic(2));
        let sym = AbelianGroup::symbolic(super::super::SymbolicRank::positive("r"));
        assert_eq!(
            matrix_ker_coker(&IntMatrix::identity(1), &sym),
            Err(AlgebraError::SymbolicInExactMatrix)
        );
    }

    #[test]
    fn ker_coker_symbolic() {
        let sym = AbelianGroup::symbolic(super::super::SymbolicRank::positive("r"));
        let (k, c) = ker_coker_with_symbolic(&IntMatrix::column(&[2, 5]), &sym).unwrap();
        assert!(k.is_zero());
        assert_eq!(c, sym);
        assert_eq!(
            ker_coker_with_symbolic(&IntMatrix::from_rows(&[[2]]), &sym),
            Err(AlgebraError::SymbolicTensorTorsion)
        );
        let (k, c) = ker_coker_with_symbolic(&IntMatrix::zeros(1, 2), &sym).unwrap();
        assert_eq!(k.symbolic_ranks().len(), 2);
        assert_eq!(c, sym);
    }

    #[test]
    fn rank_equation_on_z() {
        let m = IntMatrix::from_rows(&[[1, 2, 3], [2, 4, 6], [0, 1, 1]]);
        let r = smith_normal_form(&m).rank();
        let (k, c) = matrix_ker_coker(&m, &AbelianGroup::free(1u64)).unwrap();
        assert_eq!(r, 2);
        assert_eq!(k.free_mult(), ExtNat::Fin(1));
        assert_eq!(c.free_mult(), ExtNat::Fin(1));
    }
}
