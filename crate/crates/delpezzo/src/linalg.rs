//! Dense exact linear algebra over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Exact rational scalar.
pub type Q = BigRational;

/// Shorthand for an integer as a rational.
pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses `"p"`, `"-p"` or `"p/q"` into an exact rational. Decimal points and
/// exponents are rejected.
pub fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let ok = |t: &str| {
        let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !ok(num) || !ok(den) {
        return None;
    }
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = den.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Q::new(n, d))
}

/// Formats a rational as `p` or `p/q`.
pub fn format_rational(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Row-major dense matrix of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Q) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        QMatrix { rows, cols, data }
    }

    /// Builds a matrix from rows. Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Q {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Q] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Q> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Matrix product. Panics on a shape mismatch.
    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        Self::from_fn(self.rows, other.cols, |r, c| {
            let mut acc = Q::zero();
            for k in 0..self.cols {
                let a = self.get(r, k);
                if !a.is_zero() {
                    acc += a * other.get(k, c);
                }
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len(), "shape mismatch");
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn select_columns(&self, idx: &[usize]) -> QMatrix {
        Self::from_fn(self.rows, idx.len(), |r, c| self.get(r, idx[c]).clone())
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..m.cols {
            if lead == m.rows {
                break;
            }
            let Some(p) = (lead..m.rows).find(|&r| !m.get(r, c).is_zero()) else {
                continue;
            };
            m.swap_rows(p, lead);
            let inv = m.get(lead, c).recip();
            for k in c..m.cols {
                let v = m.get(lead, k) * &inv;
                m.set(lead, k, v);
            }
            for r in 0..m.rows {
                if r == lead || m.get(r, c).is_zero() {
                    continue;
                }
                let f = m.get(r, c).clone();
                for k in c..m.cols {
                    let v = m.get(r, k) - &f * m.get(lead, k);
                    m.set(r, k, v);
                }
            }
            pivots.push(c);
            lead += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{v : M v = 0}`, returned as the rows of a
    /// matrix in reduced row echelon form.
    pub fn kernel(&self) -> QMatrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let rows: Vec<Vec<Q>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![Q::zero(); self.cols];
                v[f] = Q::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(i, f).clone();
                }
                v
            })
            .collect();
        if rows.is_empty() {
            return QMatrix::zeros(0, self.cols);
        }
        QMatrix::from_rows(rows).rref().0
    }

    /// Row space comparison via reduced echelon forms.
    pub fn same_row_space(&self, other: &QMatrix) -> bool {
        if self.cols != other.cols {
            return false;
        }
        let (a, pa) = self.rref();
        let (b, pb) = other.rref();
        pa == pb && (0..pa.len()).all(|r| a.row(r) == b.row(r))
    }

    pub fn determinant(&self) -> Q {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Q::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m.get(r, c).is_zero()) else {
                return Q::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det *= &piv;
            for r in c + 1..n {
                if m.get(r, c).is_zero() {
                    continue;
                }
                let f = m.get(r, c) / &piv;
                for k in c..n {
                    let v = m.get(r, k) - &f * m.get(c, k);
                    m.set(r, k, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self.get(r, c).clone()
            } else if c - n == r {
                Q::one()
            } else {
                Q::zero()
            }
        });
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(n, n, |r, c| red.get(r, n + c).clone()))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

/// Clears denominators: returns the primitive integer vector on the same
/// ray as `v` (zero stays zero).
pub fn primitive_integer_vector(v: &[Q]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Rank of a list of integer vectors of a fixed width, by fraction-free
/// elimination in `i128` with row content removal.
pub fn int_rank<const N: usize>(rows: &[[i64; N]]) -> usize {
    let mut m: Vec<[i128; N]> = rows.iter().map(|r| r.map(i128::from)).collect();
    let mut rank = 0;
    for c in 0..N {
        let Some(p) = (rank..m.len())
            .filter(|&r| m[r][c] != 0)
            .min_by_key(|&r| m[r][c].unsigned_abs())
        else {
            continue;
        };
        m.swap(rank, p);
        let piv = m[rank];
        for r in rank + 1..m.len() {
            let f = m[r][c];
            if f == 0 {
                continue;
            }
            let mut g = 0i128;
            for k in 0..N {
                let v = m[r][k]
                    .checked_mul(piv[c])
                    .and_then(|a| f.checked_mul(piv[k]).and_then(|b| a.checked_sub(b)));
                let Some(v) = v else {
                    return rational_rank(rows);
                };
                m[r][k] = v;
                g = g.gcd(&v);
            }
            if g > 1 {
                for k in 0..N {
                    m[r][k] /= g;
                }
            }
        }
        rank += 1;
        if rank == N {
            break;
        }
    }
    rank
}

fn rational_rank<const N: usize>(rows: &[[i64; N]]) -> usize {
    QMatrix::from_fn(rows.len(), N, |r, c| q(rows[r][c])).rank()
}

/// Exact dot product of a primitive integer vector with an `i64` vector,
/// returning only the sign when the fast path cannot be used.
pub fn signed_dot(a: &[BigInt], b: &[i64]) -> std::cmp::Ordering {
    let mut acc = BigInt::zero();
    for (x, &y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc.cmp(&BigInt::zero())
}

/// Converts a vector of big integers to `i64` if every entry fits.
pub fn to_i64_vec(v: &[BigInt]) -> Option<Vec<i64>> {
    v.iter().map(ToPrimitive::to_i64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_and_kernel() {
        let m = QMatrix::from_i64_rows(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.rows(), 1);
        let v = k.row(0).to_vec();
        assert!(m.mul_vec(&v).iter().all(Zero::is_zero));
    }

    #[test]
    fn determinant_and_inverse() {
        let m = QMatrix::from_i64_rows(&[vec![2, 1], vec![7, 4]]);
        assert_eq!(m.determinant(), q(1));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), QMatrix::identity(2));
        let s = QMatrix::from_i64_rows(&[vec![1, 2], vec![2, 4]]);
        assert!(s.inverse().is_none());
        assert_eq!(s.determinant(), q(0));
    }

    #[test]
    fn int_rank_matches_rational_rank() {
        let rows = [[1i64, 2, 3], [2, 4, 6], [0, 1, 1], [5, 11, 16]];
        assert_eq!(int_rank(&rows), 2);
        assert_eq!(rational_rank(&rows), 2);
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("3/7"), Some(Q::new(3.into(), 7.into())));
        assert_eq!(parse_rational("-4"), Some(q(-4)));
        assert_eq!(parse_rational("0.5"), None);
        assert_eq!(parse_rational("1e3"), None);
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(format_rational(&Q::new(6.into(), 4.into())), "3/2");
    }

    #[test]
    fn primitive_vector() {
        let v = [Q::new(1.into(), 2.into()), q(3), Q::new((-3).into(), 4.into())];
        let p = primitive_integer_vector(&v);
        assert_eq!(p, vec![BigInt::from(2), BigInt::from(12), BigInt::from(-3)]);
    }
}
