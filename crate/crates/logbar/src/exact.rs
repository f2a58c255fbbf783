//! Exact scalar arithmetic and sparse exact linear algebra.
//!
//! Scalars are arbitrary-precision rationals; complex scalars are Gaussian
//! rationals.  Matrices are stored sparsely and ranks/kernels are computed by
//! fraction-free (Bareiss-style) elimination with pivots chosen to keep
//! intermediate entries small.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::str::FromStr;

/// Make Debug output match Display ("p/q").
macro_rules! fmt_debug_via_display {
    () => {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            fmt::Display::fmt(self, f)
        }
    };
}

/// An exact rational scalar.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactScalar(pub BigRational);

impl ExactScalar {
    pub fn zero() -> Self {
        ExactScalar(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactScalar(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        ExactScalar(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        ExactScalar(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            // Fall back on separate conversion of numerator and denominator.
            let n = self.0.numer().to_f64().unwrap_or(f64::NAN);
            let d = self.0.denom().to_f64().unwrap_or(f64::NAN);
            n / d
        })
    }

    pub fn abs(&self) -> Self {
        ExactScalar(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "division by zero");
        ExactScalar(self.0.recip())
    }

    /// Integer power with negative exponents allowed (base must be nonzero then).
    pub fn powi(&self, e: i64) -> Self {
        if e == 0 {
            return ExactScalar::one();
        }
        let base = if e < 0 { self.recip() } else { self.clone() };
        let mut acc = BigRational::one();
        for _ in 0..e.unsigned_abs() {
            acc *= &base.0;
        }
        ExactScalar(acc)
    }

    /// Parse "p", "p/q", or a plain decimal like "-0.25".
    pub fn parse(s: &str) -> Result<Self, ExactParseError> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let num = BigInt::from_str(p.trim())
                .map_err(|_| ExactParseError(s.to_string()))?;
            let den = BigInt::from_str(q.trim())
                .map_err(|_| ExactParseError(s.to_string()))?;
            if den.is_zero() {
                return Err(ExactParseError(s.to_string()));
            }
            return Ok(ExactScalar(BigRational::new(num, den)));
        }
        if let Some((int, frac)) = s.split_once('.') {
            let neg = int.trim_start().starts_with('-');
            let ip = if int.is_empty() || int == "-" || int == "+" {
                BigInt::zero()
            } else {
                BigInt::from_str(int).map_err(|_| ExactParseError(s.to_string()))?
            };
            let fp = if frac.is_empty() {
                BigInt::zero()
            } else {
                BigInt::from_str(frac).map_err(|_| ExactParseError(s.to_string()))?
            };
            if fp.is_negative() {
                return Err(ExactParseError(s.to_string()));
            }
            let scale = BigInt::from(10u32).pow(frac.len() as u32);
            let mag = ip.abs() * &scale + fp;
            let signed = if neg { -mag } else { mag };
            return Ok(ExactScalar(BigRational::new(signed, scale)));
        }
        BigInt::from_str(s)
            .map(|n| ExactScalar(BigRational::from_integer(n)))
            .map_err(|_| ExactParseError(s.to_string()))
    }
}

#[derive(Debug, thiserror::Error)]
#[error("cannot parse exact scalar from {0:?}")]
pub struct ExactParseError(pub String);

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for ExactScalar {
    fmt_debug_via_display!();
}

impl serde::Serialize for ExactScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for ExactScalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        ExactScalar::parse(&s).map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                ExactScalar(self.0 $op rhs.0)
            }
        }
        impl<'a> $trait<&'a ExactScalar> for &'a ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &'a ExactScalar) -> ExactScalar {
                ExactScalar(&self.0 $op &rhs.0)
            }
        }
    };
}

forward_binop!(Add, add, +);
forward_binop!(Sub, sub, -);
forward_binop!(Mul, mul, *);

impl Div for ExactScalar {
    type Output = ExactScalar;
    fn div(self, rhs: ExactScalar) -> ExactScalar {
        assert!(!rhs.is_zero(), "division by zero");
        ExactScalar(self.0 / rhs.0)
    }
}

impl<'a> Div<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn div(self, rhs: &'a ExactScalar) -> ExactScalar {
        assert!(!rhs.is_zero(), "division by zero");
        ExactScalar(&self.0 / &rhs.0)
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar(-self.0)
    }
}

impl<'a> Neg for &'a ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar(-&self.0)
    }
}

impl AddAssign for ExactScalar {
    fn add_assign(&mut self, rhs: ExactScalar) {
        self.0 += rhs.0;
    }
}

/// A Gaussian-rational complex scalar.  The (lexicographic) order is only
/// there so the type can key ordered maps.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
pub struct ExactComplex {
    pub re: ExactScalar,
    pub im: ExactScalar,
}

impl ExactComplex {
    pub fn new(re: ExactScalar, im: ExactScalar) -> Self {
        ExactComplex { re, im }
    }

    pub fn zero() -> Self {
        ExactComplex::new(ExactScalar::zero(), ExactScalar::zero())
    }

    pub fn one() -> Self {
        ExactComplex::new(ExactScalar::one(), ExactScalar::zero())
    }

    pub fn from_int(re: i64, im: i64) -> Self {
        ExactComplex::new(ExactScalar::from_int(re), ExactScalar::from_int(im))
    }

    pub fn real(r: ExactScalar) -> Self {
        ExactComplex::new(r, ExactScalar::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        ExactComplex::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> ExactScalar {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        assert!(!n.is_zero(), "division by zero complex scalar");
        ExactComplex::new(&self.re / &n, &(-&self.im) / &n)
    }

    pub fn powi(&self, e: i64) -> Self {
        if e == 0 {
            return ExactComplex::one();
        }
        let base = if e < 0 { self.recip() } else { self.clone() };
        let mut acc = ExactComplex::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i", self.re, self.im.0)
    }
}

impl fmt::Debug for ExactComplex {
    fmt_debug_via_display!();
}

impl<'a> Add for &'a ExactComplex {
    type Output = ExactComplex;
    fn add(self, rhs: &'a ExactComplex) -> ExactComplex {
        ExactComplex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a> Sub for &'a ExactComplex {
    type Output = ExactComplex;
    fn sub(self, rhs: &'a ExactComplex) -> ExactComplex {
        ExactComplex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a> Mul for &'a ExactComplex {
    type Output = ExactComplex;
    fn mul(self, rhs: &'a ExactComplex) -> ExactComplex {
        ExactComplex::new(
            &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        )
    }
}

impl<'a> Div for &'a ExactComplex {
    type Output = ExactComplex;
    fn div(self, rhs: &'a ExactComplex) -> ExactComplex {
        self * &rhs.recip()
    }
}

impl<'a> Neg for &'a ExactComplex {
    type Output = ExactComplex;
    fn neg(self) -> ExactComplex {
        ExactComplex::new(-&self.re, -&self.im)
    }
}

/// A sparse matrix with exact rational entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: BTreeMap<(usize, usize), ExactScalar>,
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, r: usize, c: usize, v: ExactScalar) {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: ExactScalar) {
        if v.is_zero() {
            return;
        }
        let cur = self.get(r, c);
        self.set(r, c, &cur + &v);
    }

    pub fn get(&self, r: usize, c: usize) -> ExactScalar {
        self.entries
            .get(&(r, c))
            .cloned()
            .unwrap_or_else(ExactScalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &ExactScalar)> {
        self.entries.iter()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut t = ExactMatrix::new(self.cols, self.rows);
        for (&(r, c), v) in &self.entries {
            t.entries.insert((c, r), v.clone());
        }
        t
    }

    pub fn mul_vec(&self, v: &[ExactScalar]) -> Vec<ExactScalar> {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        let mut out = vec![ExactScalar::zero(); self.rows];
        for (&(r, c), a) in &self.entries {
            out[r] += a * &v[c];
        }
        out
    }

    pub fn matmul(&self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = ExactMatrix::new(self.rows, rhs.cols);
        // Group rhs by row for sparse access.
        let mut rhs_rows: Vec<Vec<(usize, &ExactScalar)>> = vec![Vec::new(); rhs.rows];
        for (&(r, c), v) in &rhs.entries {
            rhs_rows[r].push((c, v));
        }
        for (&(r, k), a) in &self.entries {
            for &(c, b) in &rhs_rows[k] {
                out.add_to(r, c, a * b);
            }
        }
        out
    }

    /// Rank via sparse fraction-free elimination.
    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// A basis of the right kernel.  Vectors are normalized: integer entries
    /// with overall gcd 1, first nonzero entry positive, ordered by their
    /// free-column index.
    pub fn kernel_basis(&self) -> Vec<Vec<ExactScalar>> {
        let ech = self.echelon();
        let pivot_col: Vec<usize> = ech.pivots.iter().map(|&(_, c)| c).collect();
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &c in &pivot_col {
                v[c] = true;
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            // Solve R x = 0 with x_free = 1, other free vars 0, by back
            // substitution through the echelon rows (top-down works because the
            // rows are in echelon order; we go bottom-up for standard form).
            let mut x = vec![ExactScalar::zero(); self.cols];
            x[free] = ExactScalar::one();
            for (ri, &(row_idx, col)) in ech.pivots.iter().enumerate().rev() {
                let _ = ri;
                let row = &ech.rows[row_idx];
                let mut s = ExactScalar::zero();
                let mut piv = ExactScalar::zero();
                for &(c, ref v) in row {
                    if c == col {
                        piv = v.clone();
                    } else {
                        s += v * &x[c];
                    }
                }
                debug_assert!(!piv.is_zero());
                x[col] = &(-&s) / &piv;
            }
            basis.push(normalize_kernel_vector(x));
        }
        basis
    }

    /// Fraction-free row reduction.  Rows are first cleared to integers, then
    /// eliminated Bareiss style (exact integer division by the previous pivot),
    /// with pivots chosen among candidates by minimal numerator bit size.
    fn echelon(&self) -> Echelon {
        // Integer-cleared sparse rows.
        let mut rows: Vec<Vec<(usize, ExactScalar)>> = Vec::with_capacity(self.rows);
        let mut by_row: Vec<Vec<(usize, ExactScalar)>> = vec![Vec::new(); self.rows];
        for (&(r, c), v) in &self.entries {
            by_row[r].push((c, v.clone()));
        }
        for row in by_row {
            if row.is_empty() {
                rows.push(Vec::new());
                continue;
            }
            let mut lcm = BigInt::one();
            for (_, v) in &row {
                lcm = lcm.lcm(v.0.denom());
            }
            let cleared: Vec<(usize, ExactScalar)> = row
                .into_iter()
                .map(|(c, v)| {
                    let scaled = v.0 * BigRational::from_integer(lcm.clone());
                    debug_assert!(scaled.denom().is_one());
                    (c, ExactScalar(scaled))
                })
                .collect();
            rows.push(cleared);
        }

        let mut active: Vec<usize> = (0..self.rows).collect();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut prev_pivot = ExactScalar::one();
        for col in 0..self.cols {
            // Candidate rows with a nonzero entry in this column.
            let mut best: Option<(usize, u64)> = None;
            for (ai, &r) in active.iter().enumerate() {
                if let Some(v) = row_get(&rows[r], col) {
                    let bits = v.0.numer().bits();
                    if best.map_or(true, |(_, b)| bits < b) {
                        best = Some((ai, bits));
                    }
                }
            }
            let Some((ai, _)) = best else { continue };
            let prow = active.remove(ai);
            let pval = row_get(&rows[prow], col).unwrap().clone();
            for &r in &active {
                if let Some(rv) = row_get(&rows[r], col) {
                    let rv = rv.clone();
                    let updated =
                        row_combine(&rows[prow], &rows[r], &rv, &pval, &prev_pivot);
                    rows[r] = updated;
                }
            }
            pivots.push((prow, col));
            prev_pivot = pval;
        }
        Echelon { rows, pivots }
    }
}

struct Echelon {
    rows: Vec<Vec<(usize, ExactScalar)>>,
    pivots: Vec<(usize, usize)>,
}

fn row_get<'a>(row: &'a [(usize, ExactScalar)], col: usize) -> Option<&'a ExactScalar> {
    row.iter().find(|&&(c, _)| c == col).map(|(_, v)| v)
}

/// Bareiss update: (pval * row - rv * prow) / prev, entrywise; division exact.
fn row_combine(
    prow: &[(usize, ExactScalar)],
    row: &[(usize, ExactScalar)],
    rv: &ExactScalar,
    pval: &ExactScalar,
    prev: &ExactScalar,
) -> Vec<(usize, ExactScalar)> {
    let mut out = Vec::with_capacity(row.len() + prow.len());
    let mut i = 0;
    let mut j = 0;
    while i < row.len() || j < prow.len() {
        let (c, val) = if j >= prow.len() || (i < row.len() && row[i].0 < prow[j].0) {
            let v = pval * &row[i].1;
            i += 1;
            (row[i - 1].0, v)
        } else if i >= row.len() || prow[j].0 < row[i].0 {
            let v = -&(rv * &prow[j].1);
            j += 1;
            (prow[j - 1].0, v)
        } else {
            let v = &(pval * &row[i].1) - &(rv * &prow[j].1);
            i += 1;
            j += 1;
            (row[i - 1].0, v)
        };
        if !val.is_zero() {
            out.push((c, &val / prev));
        }
    }
    out
}

/// Clear denominators, divide by the gcd, and make the first nonzero entry
/// positive.
fn normalize_kernel_vector(v: Vec<ExactScalar>) -> Vec<ExactScalar> {
    let mut lcm = BigInt::one();
    for x in &v {
        if !x.is_zero() {
            lcm = lcm.lcm(x.0.denom());
        }
    }
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (&x.0 * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let mut g = BigInt::zero();
    for n in &ints {
        g = g.gcd(n);
    }
    if g.is_zero() {
        return v;
    }
    let flip = ints
        .iter()
        .find(|n| !n.is_zero())
        .map(|n| n.is_negative())
        .unwrap_or(false);
    ints.into_iter()
        .map(|n| {
            let mut q = &n / &g;
            if flip {
                q = -q;
            }
            ExactScalar(BigRational::from_integer(q))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Independent oracle: dense Gaussian elimination over rationals.
    fn dense_rank_kernel(m: &ExactMatrix) -> (usize, Vec<Vec<ExactScalar>>) {
        let mut a: Vec<Vec<BigRational>> =
            vec![vec![BigRational::zero(); m.cols]; m.rows];
        for (&(r, c), v) in m.iter() {
            a[r][c] = v.0.clone();
        }
        let mut pivot_cols = Vec::new();
        let mut prow = 0;
        for col in 0..m.cols {
            let Some(pr) = (prow..m.rows).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(prow, pr);
            let inv = a[prow][col].recip();
            for c in 0..m.cols {
                a[prow][c] = &a[prow][c] * &inv;
            }
            for r in 0..m.rows {
                if r != prow && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for c in 0..m.cols {
                        let sub = &f * &a[prow][c];
                        a[r][c] = &a[r][c] - &sub;
                    }
                }
            }
            pivot_cols.push(col);
            prow += 1;
            if prow == m.rows {
                break;
            }
        }
        let rank = pivot_cols.len();
        let is_pivot: Vec<bool> = (0..m.cols)
            .map(|c| pivot_cols.contains(&c))
            .collect();
        let mut basis = Vec::new();
        for free in 0..m.cols {
            if is_pivot[free] {
                continue;
            }
            let mut x = vec![ExactScalar::zero(); m.cols];
            x[free] = ExactScalar::one();
            for (r, &pc) in pivot_cols.iter().enumerate() {
                x[pc] = ExactScalar(-a[r][free].clone());
            }
            basis.push(normalize_kernel_vector(x));
        }
        (rank, basis)
    }

    fn small_matrix() -> impl Strategy<Value = ExactMatrix> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec((-6i64..=6, 1i64..=3), r * c).prop_map(
                move |vals| {
                    let mut m = ExactMatrix::new(r, c);
                    for (i, (num, den)) in vals.into_iter().enumerate() {
                        m.set(i / c, i % c, ExactScalar::from_frac(num, den));
                    }
                    m
                },
            )
        })
    }

    proptest! {
        #[test]
        fn rank_kernel_match_dense_oracle(m in small_matrix()) {
            let (orank, okernel) = dense_rank_kernel(&m);
            prop_assert_eq!(m.rank(), orank);
            let kernel = m.kernel_basis();
            prop_assert_eq!(kernel.clone(), okernel);
            prop_assert_eq!(kernel.len(), m.cols - orank);
            for v in &kernel {
                let img = m.mul_vec(v);
                prop_assert!(img.iter().all(|x| x.is_zero()));
            }
        }

        #[test]
        fn rank_of_product_le_min(m in small_matrix(), n in small_matrix()) {
            // make shapes compatible by multiplying with the transpose
            let p = m.matmul(&m.transpose());
            prop_assert!(p.rank() <= m.rank());
            let _ = n;
        }
    }

    #[test]
    fn known_rank_and_kernel() {
        // [[1,2,3],[2,4,6],[0,1,1]] has rank 2; kernel spanned by (-1,-1,1).
        let mut m = ExactMatrix::new(3, 3);
        for (r, c, v) in [
            (0, 0, 1),
            (0, 1, 2),
            (0, 2, 3),
            (1, 0, 2),
            (1, 1, 4),
            (1, 2, 6),
            (2, 1, 1),
            (2, 2, 1),
        ] {
            m.set(r, c, ExactScalar::from_int(v));
        }
        assert_eq!(m.rank(), 2);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        assert_eq!(
            k[0],
            vec![
                ExactScalar::from_int(1),
                ExactScalar::from_int(1),
                ExactScalar::from_int(-1)
            ]
        );
    }

    #[test]
    fn scalar_parse_roundtrip() {
        for s in ["3", "-7/2", "0", "22/7"] {
            let v = ExactScalar::parse(s).unwrap();
            assert_eq!(v.to_string(), s);
        }
        assert_eq!(
            ExactScalar::parse("-0.25").unwrap(),
            ExactScalar::from_frac(-1, 4)
        );
        assert!(ExactScalar::parse("1/0").is_err());
        assert!(ExactScalar::parse("x").is_err());
    }

    #[test]
    fn complex_arithmetic() {
        let i = ExactComplex::from_int(0, 1);
        let z = ExactComplex::from_int(3, -2);
        assert_eq!(&i * &i, ExactComplex::from_int(-1, 0));
        assert_eq!(&(&z * &z.recip()), &ExactComplex::one());
        assert_eq!(z.powi(2), ExactComplex::from_int(5, -12));
        assert_eq!(z.norm_sqr(), ExactScalar::from_int(13));
    }
}
