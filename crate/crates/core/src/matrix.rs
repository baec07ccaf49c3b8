//! Small dense matrices over chart polynomials.
//!
//! The resolution differentials and the Cech cochains are matrices with
//! entries in the coordinate rings of the two charts (Laurent in the first
//! variable on the overlap). Sizes never exceed 3x3, so a dense row-major
//! layout is plenty.

use crate::geometry::Poly3;
use crate::rational::Q;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Poly3>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            data: vec![Poly3::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Poly3::one();
        }
        m
    }

    /// Build from rows; panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<Poly3>>) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Poly3::is_zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &Poly3)> {
        self.data
            .iter()
            .enumerate()
            .map(move |(i, p)| ((i / self.cols, i % self.cols), p))
    }

    pub fn scale(&self, c: &Q) -> Mat {
        self.map(|p| p.scale(c))
    }

    pub fn scale_poly(&self, f: &Poly3) -> Mat {
        self.map(|p| p * f)
    }

    pub fn map(&self, f: impl Fn(&Poly3) -> Poly3) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Multiply on the left by the diagonal matrix with entries `d`.
    pub fn diag_left(&self, d: &[Poly3]) -> Mat {
        assert_eq!(d.len(), self.rows);
        let mut out = self.clone();
        for i in 0..self.rows {
            for jj in 0..self.cols {
                out[(i, jj)] = &self[(i, jj)] * &d[i];
            }
        }
        out
    }

    /// Multiply on the right by the diagonal matrix with entries `d`.
    pub fn diag_right(&self, d: &[Poly3]) -> Mat {
        assert_eq!(d.len(), self.cols);
        let mut out = self.clone();
        for i in 0..self.rows {
            for jj in 0..self.cols {
                out[(i, jj)] = &self[(i, jj)] * &d[jj];
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Poly3;
    fn index(&self, (r, c): (usize, usize)) -> &Poly3 {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r},{c}) out of {}x{}",
            self.rows,
            self.cols
        );
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Poly3 {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r},{c}) out of {}x{}",
            self.rows,
            self.cols
        );
        &mut self.data[r * self.cols + c]
    }
}

impl Add for &Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "shape mismatch in +"
        );
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "shape mismatch in -"
        );
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        self.map(|p| -p)
    }
}

impl Mul for &Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        assert_eq!(
            self.cols, rhs.rows,
            "shape mismatch in *: {}x{} times {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = Mat::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    out[(i, j)] = &out[(i, j)] + &(a * b);
                }
            }
        }
        out
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(
                    f,
                    "{}",
                    self[(i, j)].display_with(crate::geometry::Chart::U1.var_names())
                )?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}
