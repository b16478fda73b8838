//! Dense exact linear algebra: matrices, linear forms, row bases and
//! congruence diagonalization.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

/// Rectangular matrix of scalars from a single field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize, field: Field) -> Self {
        Matrix { rows, cols, field, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(n: usize, field: Field) -> Self {
        let mut m = Matrix::zeros(n, n, field);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds from rows, coercing every entry into `field`.
    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::Arity { expected: c, got: row.len() });
            }
            for v in row {
                data.push(v.coerce(field)?);
            }
        }
        Ok(Matrix { rows: r, cols: c, field, data })
    }

    pub fn from_i64(field: Field, rows: &[Vec<i64>]) -> Result<Self> {
        Matrix::from_rows(
            field,
            rows.iter().map(|r| r.iter().map(|&v| field.int(v)).collect()).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows, self.field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Arity { expected: self.cols, got: other.rows });
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        let mut out = Matrix::zeros(self.rows, other.cols, self.field);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + &(a * other.get(k, j));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// Reduced row echelon form together with the pivot columns.
    fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in 0..self.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..self.rows {
                if i != r && !m.get(i, c).is_zero() {
                    let f = m.get(i, c).clone();
                    for j in 0..self.cols {
                        let v = m.get(i, j) - &(&f * m.get(r, j));
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn det(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(Error::Arity { expected: self.rows, got: self.cols });
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = self.field.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(self.field.zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -&det;
            }
            let piv = m.get(c, c).clone();
            det = &det * &piv;
            let inv = piv.inv()?;
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c) * &inv;
                for j in c..n {
                    let v = m.get(i, j) - &(&f * m.get(c, j));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::Arity { expected: self.rows, got: self.cols });
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n, self.field);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, self.field.one());
        }
        let (r, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] >= n {
            return Err(Error::DependentRows);
        }
        let mut inv = Matrix::zeros(n, n, self.field);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Ok(inv)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Affine form `c_1 x_1 + … + c_n x_n + c_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    pub coeffs: Vec<Scalar>,
    pub constant: Scalar,
}

impl LinearForm {
    pub fn new(coeffs: Vec<Scalar>, constant: Scalar) -> Self {
        LinearForm { coeffs, constant }
    }

    /// Homogeneous form with the given coefficients.
    pub fn homogeneous(coeffs: Vec<Scalar>, field: Field) -> Self {
        LinearForm { coeffs, constant: field.zero() }
    }

    pub fn zero(n: usize, field: Field) -> Self {
        LinearForm { coeffs: vec![field.zero(); n], constant: field.zero() }
    }

    /// The form `x_i`.
    pub fn var(n: usize, i: usize, field: Field) -> Self {
        let mut f = LinearForm::zero(n, field);
        f.coeffs[i] = field.one();
        f
    }

    pub fn from_i64(field: Field, coeffs: &[i64], constant: i64) -> Self {
        LinearForm {
            coeffs: coeffs.iter().map(|&c| field.int(c)).collect(),
            constant: field.int(constant),
        }
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn field(&self) -> Field {
        self.constant.field()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.constant.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len()).filter(|&i| !self.coeffs[i].is_zero()).collect()
    }

    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.coeffs.len() {
            return Err(Error::Arity { expected: self.coeffs.len(), got: point.len() });
        }
        let mut acc = self.constant.clone();
        for (c, x) in self.coeffs.iter().zip(point) {
            if !c.is_zero() {
                acc = acc.checked_add(&c.checked_mul(x)?)?;
            }
        }
        Ok(acc)
    }

    pub fn add(&self, other: &LinearForm) -> LinearForm {
        LinearForm {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
            constant: &self.constant + &other.constant,
        }
    }

    pub fn scale(&self, s: &Scalar) -> LinearForm {
        LinearForm {
            coeffs: self.coeffs.iter().map(|a| a * s).collect(),
            constant: &self.constant * s,
        }
    }

    pub fn coerce(&self, field: Field) -> Result<LinearForm> {
        Ok(LinearForm {
            coeffs: self.coeffs.iter().map(|c| c.coerce(field)).collect::<Result<_>>()?,
            constant: self.constant.coerce(field)?,
        })
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(" "))?;
        if !self.constant.is_zero() {
            write!(f, " + {}", self.constant)?;
        }
        Ok(())
    }
}

/// Row-space data of a matrix `M`: `coords · basis = M`.
#[derive(Clone, Debug)]
pub struct RowBasis {
    pub rank: usize,
    /// Indices of the rows of `M` forming the basis.
    pub rows: Vec<usize>,
    pub basis: Vec<LinearForm>,
    /// `M.rows() × rank` coordinate matrix.
    pub coords: Matrix,
}

/// Greedy row basis drawn from the rows of `m`, with coordinates of every row.
pub fn rank_and_row_basis(m: &Matrix) -> RowBasis {
    let field = m.field();
    let n = m.cols();
    // Echelon rows of the chosen basis, each with its combination over basis rows.
    let mut echelon: Vec<(usize, Vec<Scalar>, Vec<Scalar>)> = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    let mut coords_rows: Vec<Vec<Scalar>> = Vec::with_capacity(m.rows());
    for i in 0..m.rows() {
        let mut v = m.row(i).to_vec();
        // v = row_i - Σ combo · basis
        let mut combo = vec![field.zero(); chosen.len()];
        for (pc, erow, ecombo) in &echelon {
            if v[*pc].is_zero() {
                continue;
            }
            let f = v[*pc].clone();
            for j in 0..n {
                v[j] = &v[j] - &(&f * &erow[j]);
            }
            for (t, c) in ecombo.iter().enumerate() {
                combo[t] = &combo[t] + &(&f * c);
            }
        }
        match v.iter().position(|x| !x.is_zero()) {
            None => coords_rows.push(combo),
            Some(pc) => {
                let inv = v[pc].inv().expect("nonzero pivot");
                // new echelon row e = (row_i - Σ combo·basis) / v[pc]
                let t = chosen.len();
                chosen.push(i);
                let mut ecombo: Vec<Scalar> = combo.iter().map(|c| -&(c * &inv)).collect();
                ecombo.push(inv.clone());
                let erow: Vec<Scalar> = v.iter().map(|x| x * &inv).collect();
                for c in coords_rows.iter_mut() {
                    c.push(field.zero());
                }
                let mut own = vec![field.zero(); t + 1];
                own[t] = field.one();
                coords_rows.push(own);
                for (_, _, ec) in echelon.iter_mut() {
                    ec.push(field.zero());
                }
                echelon.push((pc, erow, ecombo));
            }
        }
    }
    let rank = chosen.len();
    let mut coords = Matrix::zeros(m.rows(), rank, field);
    for (i, row) in coords_rows.into_iter().enumerate() {
        for (j, v) in row.into_iter().enumerate() {
            coords.set(i, j, v);
        }
    }
    let basis =
        chosen.iter().map(|&i| LinearForm::homogeneous(m.row(i).to_vec(), field)).collect();
    RowBasis { rank, rows: chosen, basis, coords }
}

/// Extends independent rows to an invertible `n × n` matrix by appending
/// standard basis vectors.
pub fn complete_invertible(partial: &[LinearForm], n: usize, field: Field) -> Result<Matrix> {
    if partial.len() > n {
        return Err(Error::DependentRows);
    }
    let mut rows: Vec<Vec<Scalar>> = Vec::with_capacity(n);
    for f in partial {
        if f.nvars() != n {
            return Err(Error::Arity { expected: n, got: f.nvars() });
        }
        rows.push(f.coerce(field)?.coeffs);
    }
    if Matrix::from_rows(field, rows.clone())?.rank() < partial.len() {
        return Err(Error::DependentRows);
    }
    let mut rank = partial.len();
    for i in 0..n {
        if rank == n {
            break;
        }
        let mut cand = rows.clone();
        let mut e = vec![field.zero(); n];
        e[i] = field.one();
        cand.push(e.clone());
        if Matrix::from_rows(field, cand)?.rank() > rank {
            rows.push(e);
            rank += 1;
        }
    }
    Matrix::from_rows(field, rows)
}

/// Finds invertible `Q` and diagonal `D` with `Q·A·Qᵀ = D`.
pub fn congruence_diagonalize(a: &Matrix) -> Result<(Matrix, Matrix)> {
    if !a.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let field = a.field();
    if field.characteristic() == 2 {
        return Err(Error::CharacteristicTwo);
    }
    let n = a.rows();
    let mut m = a.clone();
    let mut q = Matrix::identity(n, field);

    // Row op R_i += c·R_j applied as a congruence (rows and columns).
    fn add_multiple(m: &mut Matrix, q: &mut Matrix, i: usize, j: usize, c: &Scalar) {
        let n = m.rows();
        for k in 0..n {
            let v = m.get(i, k) + &(c * m.get(j, k));
            m.set(i, k, v);
        }
        for k in 0..n {
            let v = m.get(k, i) + &(c * m.get(k, j));
            m.set(k, i, v);
        }
        for k in 0..n {
            let v = q.get(i, k) + &(c * q.get(j, k));
            q.set(i, k, v);
        }
    }
    fn swap(m: &mut Matrix, q: &mut Matrix, i: usize, j: usize) {
        let n = m.rows();
        m.swap_rows(i, j);
        for k in 0..n {
            let (a, b) = (m.get(k, i).clone(), m.get(k, j).clone());
            m.set(k, i, b);
            m.set(k, j, a);
        }
        q.swap_rows(i, j);
    }

    for i in 0..n {
        if m.get(i, i).is_zero() {
            if let Some(j) = (i + 1..n).find(|&j| !m.get(j, j).is_zero()) {
                swap(&mut m, &mut q, i, j);
            } else if let Some(j) = (i + 1..n).find(|&j| !m.get(i, j).is_zero()) {
                // New pivot becomes 2·a_ij ≠ 0 in characteristic ≠ 2.
                add_multiple(&mut m, &mut q, i, j, &field.one());
            } else {
                continue;
            }
        }
        let piv_inv = m.get(i, i).inv()?;
        for j in i + 1..n {
            if m.get(j, i).is_zero() {
                continue;
            }
            let c = -&(m.get(j, i) * &piv_inv);
            add_multiple(&mut m, &mut q, j, i, &c);
        }
    }
    Ok((q, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    #[test]
    fn rank_identity_and_ones() {
        let id = Matrix::identity(3, Q);
        let rb = rank_and_row_basis(&id);
        assert_eq!(rb.rank, 3);
        assert_eq!(rb.rows, vec![0, 1, 2]);
        let ones = Matrix::from_i64(Q, &vec![vec![1; 4]; 4]).unwrap();
        let rb = rank_and_row_basis(&ones);
        assert_eq!(rb.rank, 1);
        assert_eq!(rb.basis[0].coeffs, vec![Q.one(); 4]);
    }

    fn basis_matrix(rb: &RowBasis, n: usize) -> Matrix {
        if rb.rank == 0 {
            return Matrix::zeros(0, n, Q);
        }
        Matrix::from_rows(Q, rb.basis.iter().map(|f| f.coeffs.clone()).collect()).unwrap()
    }

    #[test]
    fn coords_reconstruct_low_rank_product() {
        let u = Matrix::from_i64(Q, &[vec![1, 2], vec![0, 1], vec![3, -1], vec![2, 2]]).unwrap();
        let v = Matrix::from_i64(Q, &[vec![1, 0, 2, -1], vec![4, 1, 0, 3]]).unwrap();
        let m = u.mul(&v).unwrap();
        let rb = rank_and_row_basis(&m);
        assert_eq!(rb.rank, 2);
        assert_eq!(rb.coords.mul(&basis_matrix(&rb, 4)).unwrap(), m);
    }

    #[test]
    fn completion() {
        let t = complete_invertible(&[LinearForm::from_i64(Q, &[1, 1], 0)], 2, Q).unwrap();
        assert!(!t.det().unwrap().is_zero());
        assert_eq!(t.row(0), &[Q.one(), Q.one()]);
        let e1 = LinearForm::from_i64(Q, &[1, 0], 0);
        assert!(!complete_invertible(&[e1.clone()], 2, Q).unwrap().det().unwrap().is_zero());
        assert_eq!(complete_invertible(&[e1.clone(), e1], 2, Q), Err(Error::DependentRows));
    }

    #[test]
    fn congruence_examples() {
        let id = Matrix::identity(3, Q);
        let (qm, d) = congruence_diagonalize(&id).unwrap();
        assert_eq!(qm, id);
        assert_eq!(d, id);

        let a = Matrix::from_i64(Q, &[vec![0, 1], vec![1, 0]]).unwrap();
        let (qm, d) = congruence_diagonalize(&a).unwrap();
        assert_eq!(qm.mul(&a).unwrap().mul(&qm.transpose()).unwrap(), d);
        assert_eq!(d.get(0, 0), &Q.int(2));
        assert_eq!(d.get(1, 1), &Scalar::from_rational(&num_rational::BigRational::new((-1).into(), 2.into()), Q).unwrap());

        let star = Matrix::from_i64(
            Q,
            &[vec![0, 1, 1, 1], vec![1, 0, 0, 0], vec![1, 0, 0, 0], vec![1, 0, 0, 0]],
        )
        .unwrap();
        let (qm, d) = congruence_diagonalize(&star).unwrap();
        assert!(d.is_diagonal());
        assert_eq!(qm.mul(&star).unwrap().mul(&qm.transpose()).unwrap(), d);
        assert_eq!((0..4).filter(|&i| !d.get(i, i).is_zero()).count(), 2);
        assert_eq!(star.rank(), 2);
    }

    #[test]
    fn congruence_rejects() {
        let a = Matrix::from_i64(Q, &[vec![0, 1], vec![2, 0]]).unwrap();
        assert_eq!(congruence_diagonalize(&a), Err(Error::NotSymmetric));
        let f2 = Field::Prime(2);
        let b = Matrix::from_i64(f2, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(congruence_diagonalize(&b), Err(Error::CharacteristicTwo));
    }

    #[test]
    fn inverse_roundtrip() {
        let a = Matrix::from_i64(Q, &[vec![2, 1], vec![7, 4]]).unwrap();
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(2, Q));
        assert_eq!(a.det().unwrap(), Q.one());
        let s = Matrix::from_i64(Q, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(s.inverse(), Err(Error::DependentRows));
    }
}
