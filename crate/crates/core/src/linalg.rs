//! Dense vectors and matrices over GF(q).
//!
//! Column and row indices are 0-based here; external formats are 1-based.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GFVector {
    field: Field,
    elems: Vec<u32>,
}

impl GFVector {
    pub fn new(field: &Field, elems: Vec<u32>) -> Result<Self> {
        for &v in &elems {
            field.check(v)?;
        }
        Ok(GFVector {
            field: field.clone(),
            elems,
        })
    }

    pub fn zeros(field: &Field, len: usize) -> Self {
        GFVector {
            field: field.clone(),
            elems: vec![0; len],
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.elems
    }

    pub fn get(&self, i: usize) -> Option<FieldElement> {
        self.elems.get(i).map(|&v| self.field.elem(v).expect("stored values are reduced"))
    }

    pub fn is_zero(&self) -> bool {
        self.elems.iter().all(|&v| v == 0)
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.elems.iter().filter(|&&v| v != 0).count()
    }

    pub fn add(&self, other: &GFVector) -> Result<GFVector> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch(format!(
                "vector lengths {} and {}",
                self.len(),
                other.len()
            )));
        }
        let elems = self
            .elems
            .iter()
            .zip(&other.elems)
            .map(|(&a, &b)| self.field.add(a, b))
            .collect();
        Ok(GFVector {
            field: self.field.clone(),
            elems,
        })
    }

    pub fn scale(&self, c: u32) -> GFVector {
        GFVector {
            field: self.field.clone(),
            elems: self.elems.iter().map(|&a| self.field.mul(a, c)).collect(),
        }
    }

    /// Sum of all entries.
    pub fn sum(&self) -> u32 {
        self.elems.iter().fold(0, |acc, &v| self.field.add(acc, v))
    }
}

impl fmt::Display for GFVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.elems.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GFMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Solution set of `M·z^T = rhs`: `particular + span(kernel)`.
#[derive(Debug, Clone)]
pub struct AffineSolution {
    pub particular: GFVector,
    pub kernel: Vec<GFVector>,
}

impl AffineSolution {
    /// `particular + Σ coeffs[i]·kernel[i]`.
    pub fn point(&self, coeffs: &[u32]) -> Result<GFVector> {
        if coeffs.len() != self.kernel.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for a {}-dimensional kernel",
                coeffs.len(),
                self.kernel.len()
            )));
        }
        let mut z = self.particular.clone();
        for (c, v) in coeffs.iter().zip(&self.kernel) {
            z = z.add(&v.scale(*c))?;
        }
        Ok(z)
    }
}

impl GFMatrix {
    pub fn new(field: &Field, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!(
                "matrix must be at least 1x1, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        for &v in &data {
            field.check(v)?;
        }
        Ok(GFMatrix {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    pub fn from_rows<R: AsRef<[u32]>>(field: &Field, rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if let Some(bad) = rows.iter().find(|r| r.as_ref().len() != cols) {
            return Err(Error::DimensionMismatch(format!(
                "ragged rows: {} vs {cols} columns",
                bad.as_ref().len()
            )));
        }
        let data = rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect();
        GFMatrix::new(field, rows.len(), cols, data)
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        GFMatrix {
            field: field.clone(),
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> GFMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c));
            }
        }
        GFMatrix {
            field: self.field.clone(),
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Columns listed in `indices`, in ascending index order.
    pub fn select_columns(&self, indices: &[usize]) -> Result<GFMatrix> {
        let mut cols: Vec<usize> = indices.to_vec();
        cols.sort_unstable();
        cols.dedup();
        if cols.is_empty() {
            return Err(Error::EmptySelection);
        }
        if let Some(&bad) = cols.iter().find(|&&c| c >= self.cols) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                len: self.cols,
            });
        }
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for r in 0..self.rows {
            data.extend(cols.iter().map(|&c| self.get(r, c)));
        }
        Ok(GFMatrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: cols.len(),
            data,
        })
    }

    /// Row vector times matrix, `x·M`, on raw element values.
    pub fn left_mul_into(&self, x: &[u32], out: &mut [u32]) {
        debug_assert_eq!(x.len(), self.rows);
        debug_assert_eq!(out.len(), self.cols);
        out.fill(0);
        for (r, &xr) in x.iter().enumerate() {
            if xr == 0 {
                continue;
            }
            for (o, &g) in out.iter_mut().zip(self.row(r)) {
                *o = self.field.add(*o, self.field.mul(xr, g));
            }
        }
    }

    /// Matrix times column vector, `M·z^T`.
    pub fn mul_vec(&self, z: &GFVector) -> Result<GFVector> {
        if self.field != *z.field() {
            return Err(Error::FieldMismatch);
        }
        if z.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix times length-{} vector",
                self.rows,
                self.cols,
                z.len()
            )));
        }
        let elems = (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(z.as_slice())
                    .fold(0, |acc, (&m, &v)| self.field.add(acc, self.field.mul(m, v)))
            })
            .collect();
        Ok(GFVector {
            field: self.field.clone(),
            elems,
        })
    }

    /// Reduces in place to reduced row echelon form and returns the pivot
    /// columns. Pivots are the first nonzero entry found scanning down.
    fn rref_in_place(&mut self, pivot_limit: usize) -> Vec<usize> {
        let f = self.field.clone();
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..pivot_limit {
            if row == self.rows {
                break;
            }
            let Some(sel) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            if sel != row {
                for c in 0..cols {
                    self.data.swap(sel * cols + c, row * cols + c);
                }
            }
            let inv = f.inv(self.get(row, col)).expect("pivot is nonzero");
            for c in 0..cols {
                let v = &mut self.data[row * cols + c];
                *v = f.mul(*v, inv);
            }
            for r in 0..self.rows {
                let factor = self.get(r, col);
                if r == row || factor == 0 {
                    continue;
                }
                for c in 0..cols {
                    let sub = f.mul(factor, self.data[row * cols + c]);
                    let v = &mut self.data[r * cols + c];
                    *v = f.sub(*v, sub);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref_in_place(self.cols).len()
    }

    /// Full solution set of `M·z^T = rhs`.
    pub fn solve_affine(&self, rhs: &GFVector) -> Result<AffineSolution> {
        if self.field != *rhs.field() {
            return Err(Error::FieldMismatch);
        }
        if rhs.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "{} rows but right-hand side of length {}",
                self.rows,
                rhs.len()
            )));
        }
        let width = self.cols + 1;
        let mut data = Vec::with_capacity(self.rows * width);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.push(rhs.as_slice()[r]);
        }
        let mut aug = GFMatrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: width,
            data,
        };
        let pivots = aug.rref_in_place(self.cols);
        // A nonzero right-hand side left in a zero row means inconsistency.
        if (pivots.len()..self.rows).any(|r| aug.get(r, self.cols) != 0) {
            return Err(Error::NoSolution);
        }

        let f = &self.field;
        let mut particular = vec![0; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            particular[pc] = aug.get(r, self.cols);
        }
        let kernel = (0..self.cols)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![0; self.cols];
                v[free] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(aug.get(r, free));
                }
                GFVector {
                    field: f.clone(),
                    elems: v,
                }
            })
            .collect();
        Ok(AffineSolution {
            particular: GFVector {
                field: f.clone(),
                elems: particular,
            },
            kernel,
        })
    }

    /// Canonical solution of `M·z^T = rhs` with every free variable zero.
    pub fn solve(&self, rhs: &GFVector) -> Result<GFVector> {
        self.solve_affine(rhs).map(|s| s.particular)
    }

    /// Basis of the right null space `{v : M·v^T = 0}`.
    pub fn kernel(&self) -> Vec<GFVector> {
        self.solve_affine(&GFVector::zeros(&self.field, self.rows))
            .expect("homogeneous systems are consistent")
            .kernel
    }

    /// Parses the text form: one row per line, whitespace-separated values.
    pub fn parse_text(field: &Field, text: &str) -> Result<GFMatrix> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<u32>().map_err(|e| Error::Parse {
                        line: lineno + 1,
                        column: line.find(tok).unwrap_or(0) + 1,
                        msg: e.to_string(),
                    })
                })
                .collect::<Result<Vec<u32>>>()?;
            rows.push(row);
        }
        GFMatrix::from_rows(field, &rows)
    }
}

/// Codeword `x·G`.
pub fn encode_word(x: &GFVector, g: &GFMatrix) -> Result<GFVector> {
    if x.field() != g.field() {
        return Err(Error::FieldMismatch);
    }
    if x.len() != g.rows() {
        return Err(Error::DimensionMismatch(format!(
            "message of length {} for a generator with {} rows",
            x.len(),
            g.rows()
        )));
    }
    let mut out = vec![0; g.cols()];
    g.left_mul_into(x.as_slice(), &mut out);
    Ok(GFVector {
        field: g.field().clone(),
        elems: out,
    })
}

impl fmt::Display for GFMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(u32::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Field {
        Field::prime(2).unwrap()
    }

    fn f3() -> Field {
        Field::prime(3).unwrap()
    }

    #[test]
    fn encode_examples() {
        let g = GFMatrix::from_rows(&f2(), &[[1, 1, 1]]).unwrap();
        let x = GFVector::new(&f2(), vec![1]).unwrap();
        assert_eq!(encode_word(&x, &g).unwrap().as_slice(), &[1, 1, 1]);
        assert!(encode_word(&GFVector::zeros(&f2(), 1), &g).unwrap().is_zero());

        let g3 = GFMatrix::from_rows(&f3(), &[[1, 0, 1], [0, 1, 1]]).unwrap();
        let x = GFVector::new(&f3(), vec![1, 2]).unwrap();
        assert_eq!(encode_word(&x, &g3).unwrap().as_slice(), &[1, 2, 0]);

        assert!(matches!(
            encode_word(&GFVector::zeros(&f3(), 3), &g3),
            Err(Error::DimensionMismatch(_))
        ));
        assert_eq!(encode_word(&GFVector::zeros(&f2(), 2), &g3), Err(Error::FieldMismatch));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(GFMatrix::from_rows(&f2(), &[[1, 1, 1]]).unwrap().rank(), 1);
        assert_eq!(GFMatrix::new(&f3(), 2, 3, vec![0; 6]).unwrap().rank(), 0);
        assert_eq!(
            GFMatrix::from_rows(&f3(), &[[1, 0, 1], [0, 1, 1]]).unwrap().rank(),
            2
        );
        // Dependent over GF(2) but not over GF(3).
        let rows = [[1, 0, 1], [0, 1, 1], [1, 1, 0]];
        assert_eq!(GFMatrix::from_rows(&f2(), &rows).unwrap().rank(), 2);
        assert_eq!(GFMatrix::from_rows(&f3(), &rows).unwrap().rank(), 3);
    }

    #[test]
    fn solve_examples() {
        // G_B = (1) as a 1x1 system, rhs = a1 + a2.
        let gb = GFMatrix::from_rows(&f2(), &[[1]]).unwrap();
        for rhs in 0..2 {
            let z = gb.solve(&GFVector::new(&f2(), vec![rhs]).unwrap()).unwrap();
            assert_eq!(z.as_slice(), &[rhs]);
        }
        let m = GFMatrix::from_rows(&f3(), &[[1, 0, 1], [0, 1, 1]]).unwrap();
        assert!(m.solve(&GFVector::zeros(&f3(), 2)).unwrap().is_zero());

        let m = GFMatrix::from_rows(&f2(), &[[1], [1]]).unwrap();
        let rhs = GFVector::new(&f2(), vec![1, 0]).unwrap();
        assert_eq!(m.solve(&rhs), Err(Error::NoSolution));
        assert!(matches!(
            m.solve(&GFVector::zeros(&f2(), 3)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn solve_zeroes_free_variables() {
        let m = GFMatrix::from_rows(&f3(), &[[1, 2, 0], [0, 0, 1]]).unwrap();
        let rhs = GFVector::new(&f3(), vec![2, 1]).unwrap();
        let sol = m.solve_affine(&rhs).unwrap();
        assert_eq!(sol.particular.as_slice(), &[2, 0, 1]);
        assert_eq!(sol.kernel.len(), 1);
        assert!(m.mul_vec(&sol.kernel[0]).unwrap().is_zero());
        for c in 0..3 {
            let z = sol.point(&[c]).unwrap();
            assert_eq!(m.mul_vec(&z).unwrap(), rhs);
        }
    }

    #[test]
    fn select_columns_examples() {
        let g = GFMatrix::from_rows(&f2(), &[[1, 1, 1]]).unwrap();
        assert_eq!(g.select_columns(&[2]).unwrap().to_rows(), vec![vec![1]]);
        assert_eq!(g.select_columns(&[0, 1, 2]).unwrap(), g);
        assert_eq!(g.select_columns(&[1, 0]).unwrap().to_rows(), vec![vec![1, 1]]);
        assert_eq!(g.select_columns(&[]), Err(Error::EmptySelection));
        assert_eq!(
            g.select_columns(&[3]),
            Err(Error::IndexOutOfRange { index: 3, len: 3 })
        );
        let m = GFMatrix::from_rows(&f3(), &[[1, 0, 2], [0, 1, 1]]).unwrap();
        assert_eq!(m.select_columns(&[2, 0]).unwrap().to_rows(), vec![vec![1, 2], vec![0, 1]]);
    }

    #[test]
    fn left_kernel_of_rank_deficient_restriction() {
        let gb = GFMatrix::from_rows(&f2(), &[[1], [1]]).unwrap();
        let ker = gb.transpose().kernel();
        assert_eq!(ker.len(), 1);
        assert_eq!(ker[0].as_slice(), &[1, 1]);
    }

    #[test]
    fn text_form() {
        let m = GFMatrix::from_rows(&f3(), &[[1, 0, 1], [0, 1, 1]]).unwrap();
        assert_eq!(m.to_string(), "1 0 1\n0 1 1\n");
        assert_eq!(GFMatrix::parse_text(&f3(), &m.to_string()).unwrap(), m);
        assert!(matches!(
            GFMatrix::parse_text(&f3(), "1 x 1"),
            Err(Error::Parse { line: 1, column: 3, .. })
        ));
        assert!(matches!(
            GFMatrix::parse_text(&f3(), "1 3"),
            Err(Error::ElementOutOfRange { value: 3, q: 3 })
        ));
    }
}
