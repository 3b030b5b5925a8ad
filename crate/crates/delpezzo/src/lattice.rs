//! The two rank-nine lattices: Pic(S) with basis `h, e1..e8` and H²(X, Z)
//! with basis `H, E1..E8`, plus the curve lattice of X with basis
//! `h, e1..e8` (a general line and a line in each exceptional divisor).
//!
//! A class is stored as `(d; m1, ..., m8)` and means `d·h - Σ mi·ei`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{format_rational, parse_rational, primitive_integer_vector, q, QMatrix, Q};

pub const RANK: usize = 9;

/// Largest coefficient accepted from class literals. Keeps every pairing of
/// parsed classes inside `i64`.
pub const COEFF_LIMIT: i64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Basis {
    #[serde(rename = "S")]
    Surface,
    #[serde(rename = "X")]
    Fourfold,
    /// Curve classes on X, paired against divisors by `H·h = 1`, `Ei·ei = -1`.
    #[serde(rename = "Xc")]
    FourfoldCurve,
}

impl Basis {
    pub fn tag(self) -> &'static str {
        match self {
            Basis::Surface => "S",
            Basis::Fourfold => "X",
            Basis::FourfoldCurve => "Xc",
        }
    }

    pub fn from_tag(s: &str) -> Option<Basis> {
        match s {
            "S" | "s" => Some(Basis::Surface),
            "X" | "x" => Some(Basis::Fourfold),
            "Xc" | "xc" => Some(Basis::FourfoldCurve),
            _ => None,
        }
    }

    /// The value `h·h` of the pairing between classes of these two bases.
    pub fn pairing_head(a: Basis, b: Basis) -> Result<i64> {
        use Basis::*;
        match (a, b) {
            (Surface, Surface) => Ok(1),
            (Fourfold, Fourfold) => Ok(3),
            (Fourfold, FourfoldCurve) | (FourfoldCurve, Fourfold) => Ok(1),
            _ => Err(Error::BasisMismatch { left: a, right: b }),
        }
    }

    fn symbols(self) -> (&'static str, &'static str) {
        match self {
            Basis::Fourfold => ("H", "E"),
            _ => ("h", "e"),
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// An integral class. Ordered lexicographically by `(d, m1, ..., m8)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PicClass {
    basis: Basis,
    coeffs: [i64; RANK],
}

impl PicClass {
    pub const fn new(basis: Basis, coeffs: [i64; RANK]) -> Self {
        PicClass { basis, coeffs }
    }

    pub const fn surface(coeffs: [i64; RANK]) -> Self {
        Self::new(Basis::Surface, coeffs)
    }

    pub const fn fourfold(coeffs: [i64; RANK]) -> Self {
        Self::new(Basis::Fourfold, coeffs)
    }

    pub const fn curve(coeffs: [i64; RANK]) -> Self {
        Self::new(Basis::FourfoldCurve, coeffs)
    }

    pub const fn zero(basis: Basis) -> Self {
        Self::new(basis, [0; RANK])
    }

    pub const fn hyperplane(basis: Basis) -> Self {
        let mut c = [0; RANK];
        c[0] = 1;
        Self::new(basis, c)
    }

    /// `ei` (or `Ei`), `i` in `1..=8`.
    pub fn exceptional(basis: Basis, i: usize) -> Self {
        assert!((1..=8).contains(&i), "exceptional index {i} out of range 1..=8");
        let mut c = [0; RANK];
        c[i] = -1;
        Self::new(basis, c)
    }

    /// `e = e1 + ... + e8`.
    pub const fn exceptional_sum(basis: Basis) -> Self {
        Self::new(basis, [0, -1, -1, -1, -1, -1, -1, -1, -1])
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn coeffs(&self) -> &[i64; RANK] {
        &self.coeffs
    }

    pub fn degree(&self) -> i64 {
        self.coeffs[0]
    }

    pub fn multiplicities(&self) -> &[i64] {
        &self.coeffs[1..]
    }

    /// Reinterprets the coefficients in another basis.
    pub fn with_basis(&self, basis: Basis) -> Self {
        Self::new(basis, self.coeffs)
    }

    pub fn pair(&self, other: &PicClass) -> Result<i64> {
        let head = Basis::pairing_head(self.basis, other.basis)?;
        Ok(raw_pair(head, &self.coeffs, &other.coeffs))
    }

    /// Same as [`PicClass::pair`] but panics on incompatible bases.
    pub fn dot(&self, other: &PicClass) -> i64 {
        match self.pair(other) {
            Ok(v) => v,
            Err(e) => panic!("{e}"),
        }
    }

    pub fn square(&self) -> i64 {
        self.dot(self)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Greatest common divisor of the coefficients.
    pub fn content(&self) -> i64 {
        self.coeffs.iter().fold(0i64, |g, &c| num_integer::gcd(g, c))
    }

    pub fn primitive(&self) -> PicClass {
        let g = self.content();
        if g <= 1 {
            return *self;
        }
        Self::new(self.basis, self.coeffs.map(|c| c / g))
    }

    pub fn checked_scale(&self, k: i64) -> Option<PicClass> {
        let mut c = [0; RANK];
        for (o, &x) in c.iter_mut().zip(&self.coeffs) {
            *o = x.checked_mul(k)?;
        }
        Some(Self::new(self.basis, c))
    }

    fn zip_with(&self, other: &PicClass, op: &str, f: impl Fn(i64, i64) -> Option<i64>) -> PicClass {
        assert_eq!(self.basis, other.basis, "cannot {op} classes of bases {} and {}", self.basis, other.basis);
        let mut c = [0; RANK];
        for i in 0..RANK {
            c[i] = f(self.coeffs[i], other.coeffs[i]).expect("class coefficient overflow");
        }
        Self::new(self.basis, c)
    }
}

pub(crate) fn raw_pair(head: i64, a: &[i64; RANK], b: &[i64; RANK]) -> i64 {
    let mut acc = head.checked_mul(a[0]).and_then(|x| x.checked_mul(b[0])).expect("pairing overflow");
    for i in 1..RANK {
        acc = a[i].checked_mul(b[i]).and_then(|x| acc.checked_sub(x)).expect("pairing overflow");
    }
    acc
}

impl PartialOrd for PicClass {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PicClass {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coeffs.cmp(&other.coeffs).then(self.basis.cmp(&other.basis))
    }
}

impl Add for PicClass {
    type Output = PicClass;
    fn add(self, rhs: PicClass) -> PicClass {
        self.zip_with(&rhs, "add", i64::checked_add)
    }
}

impl Sub for PicClass {
    type Output = PicClass;
    fn sub(self, rhs: PicClass) -> PicClass {
        self.zip_with(&rhs, "subtract", i64::checked_sub)
    }
}

impl Neg for PicClass {
    type Output = PicClass;
    fn neg(self) -> PicClass {
        self.checked_scale(-1).expect("class coefficient overflow")
    }
}

impl Mul<PicClass> for i64 {
    type Output = PicClass;
    fn mul(self, rhs: PicClass) -> PicClass {
        rhs.checked_scale(self).expect("class coefficient overflow")
    }
}

impl fmt::Display for PicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(Q, usize)> = std::iter::once((q(self.coeffs[0]), 0))
            .chain((1..RANK).map(|i| (q(-self.coeffs[i]), i)))
            .collect();
        write_terms(f, self.basis, &terms)
    }
}

fn write_terms(f: &mut fmt::Formatter<'_>, basis: Basis, terms: &[(Q, usize)]) -> fmt::Result {
    let (hs, es) = basis.symbols();
    let mut first = true;
    for (c, i) in terms {
        if c.is_zero() {
            continue;
        }
        let sym = if *i == 0 { hs.to_string() } else { format!("{es}{i}") };
        let a = c.abs();
        let mag = if a.is_one() {
            String::new()
        } else if a.is_integer() {
            a.to_string()
        } else {
            format!("({})", format_rational(&a))
        };
        if first {
            let sign = if c.is_negative() { "-" } else { "" };
            write!(f, "{sign}{mag}{sym}")?;
        } else {
            let sign = if c.is_negative() { " - " } else { " + " };
            write!(f, "{sign}{mag}{sym}")?;
        }
        first = false;
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

/// A class with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatClass {
    basis: Basis,
    coeffs: [Q; RANK],
}

impl RatClass {
    pub fn new(basis: Basis, coeffs: [Q; RANK]) -> Self {
        RatClass { basis, coeffs }
    }

    pub fn from_vec(basis: Basis, v: Vec<Q>) -> Self {
        let coeffs: [Q; RANK] = v.try_into().expect("a class has nine coefficients");
        RatClass { basis, coeffs }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn coeffs(&self) -> &[Q; RANK] {
        &self.coeffs
    }

    pub fn pair(&self, other: &RatClass) -> Result<Q> {
        let head = q(Basis::pairing_head(self.basis, other.basis)?);
        let mut acc = head * &self.coeffs[0] * &other.coeffs[0];
        for i in 1..RANK {
            acc -= &self.coeffs[i] * &other.coeffs[i];
        }
        Ok(acc)
    }

    pub fn pair_class(&self, other: &PicClass) -> Result<Q> {
        self.pair(&RatClass::from(*other))
    }

    pub fn scale(&self, k: &Q) -> RatClass {
        RatClass { basis: self.basis, coeffs: self.coeffs.clone().map(|c| c * k) }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// The integral class equal to this one, if any.
    pub fn to_integral(&self) -> Option<PicClass> {
        let mut c = [0i64; RANK];
        for (o, x) in c.iter_mut().zip(&self.coeffs) {
            if !x.is_integer() {
                return None;
            }
            *o = x.numer().to_i64()?;
        }
        Some(PicClass::new(self.basis, c))
    }

    /// The primitive integral class on the same ray.
    pub fn primitive_integral(&self) -> Option<PicClass> {
        let v = self.primitive_direction();
        let mut c = [0i64; RANK];
        for (o, x) in c.iter_mut().zip(&v) {
            *o = x.to_i64()?;
        }
        Some(PicClass::new(self.basis, c))
    }

    /// Primitive integer coordinates of the ray through this class.
    pub fn primitive_direction(&self) -> Vec<BigInt> {
        primitive_integer_vector(&self.coeffs)
    }

    pub fn to_vec(&self) -> Vec<Q> {
        self.coeffs.to_vec()
    }
}

impl From<PicClass> for RatClass {
    fn from(c: PicClass) -> Self {
        RatClass { basis: c.basis, coeffs: c.coeffs.map(q) }
    }
}

impl From<&PicClass> for RatClass {
    fn from(c: &PicClass) -> Self {
        RatClass::from(*c)
    }
}

impl<'a> Add<&'a RatClass> for &'a RatClass {
    type Output = RatClass;
    fn add(self, rhs: &RatClass) -> RatClass {
        assert_eq!(self.basis, rhs.basis, "cannot add classes of different bases");
        let mut c = self.coeffs.clone();
        for (a, b) in c.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
        RatClass { basis: self.basis, coeffs: c }
    }
}

impl<'a> Sub<&'a RatClass> for &'a RatClass {
    type Output = RatClass;
    fn sub(self, rhs: &RatClass) -> RatClass {
        self + &(-rhs)
    }
}

impl Neg for &RatClass {
    type Output = RatClass;
    fn neg(self) -> RatClass {
        RatClass { basis: self.basis, coeffs: self.coeffs.clone().map(|c| -c) }
    }
}

impl fmt::Display for RatClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(Q, usize)> = std::iter::once((self.coeffs[0].clone(), 0))
            .chain((1..RANK).map(|i| (-self.coeffs[i].clone(), i)))
            .collect();
        write_terms(f, self.basis, &terms)
    }
}

impl Serialize for RatClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let coeffs: Vec<serde_json::Value> = self.coeffs.iter().map(rational_json).collect();
        let mut st = s.serialize_struct("RatClass", 2)?;
        st.serialize_field("basis", &self.basis)?;
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for RatClass {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        rat_class_from_json(&v, Basis::Surface).map_err(serde::de::Error::custom)
    }
}

/// Integers as JSON numbers, everything else as `"p/q"` strings.
pub fn rational_json(x: &Q) -> serde_json::Value {
    match x.to_integer().to_i64() {
        Some(n) if x.is_integer() => serde_json::Value::from(n),
        _ => serde_json::Value::from(format_rational(x)),
    }
}

/// Parses a class literal: either `[d, m1, ..., m8]` or
/// `{"basis": "S", "coeffs": [...]}`. Entries are JSON integers or strings
/// holding exact rationals such as `"3/7"`; floats are rejected. The basis
/// inside an object literal wins over `default_basis`.
pub fn parse_rat_class(s: &str, default_basis: Basis) -> Result<RatClass> {
    let v: serde_json::Value = serde_json::from_str(s.trim()).map_err(|e| Error::Parse(format!("{s}: {e}")))?;
    rat_class_from_json(&v, default_basis)
}

/// Integral version of [`parse_rat_class`]; also enforces [`COEFF_LIMIT`].
pub fn parse_class(s: &str, default_basis: Basis) -> Result<PicClass> {
    let c = parse_rat_class(s, default_basis)?;
    let p = c.to_integral().ok_or_else(|| Error::NotIntegral(c.to_string()))?;
    if p.coeffs.iter().any(|x| x.abs() > COEFF_LIMIT) {
        return Err(Error::Parse(format!("coefficients of {s} exceed {COEFF_LIMIT} in absolute value")));
    }
    Ok(p)
}

fn rat_class_from_json(v: &serde_json::Value, default_basis: Basis) -> Result<RatClass> {
    use serde_json::Value;
    let (basis, arr) = match v {
        Value::Array(a) => (default_basis, a),
        Value::Object(o) => {
            let basis = match o.get("basis") {
                Some(Value::String(t)) => {
                    Basis::from_tag(t).ok_or_else(|| Error::Parse(format!("unknown basis tag {t:?}")))?
                }
                None => default_basis,
                Some(other) => return Err(Error::Parse(format!("bad basis field {other}"))),
            };
            match o.get("coeffs") {
                Some(Value::Array(a)) => (basis, a),
                _ => return Err(Error::Parse("missing coeffs array".into())),
            }
        }
        other => return Err(Error::Parse(format!("expected an array of nine entries, got {other}"))),
    };
    if arr.len() != RANK {
        return Err(Error::Parse(format!("expected {RANK} coefficients, got {}", arr.len())));
    }
    let out = arr.iter().map(rational_from_json).collect::<Result<Vec<Q>>>()?;
    Ok(RatClass::from_vec(basis, out))
}

/// A JSON integer, or a string holding an exact rational such as `"3/7"`.
pub fn rational_from_json(x: &serde_json::Value) -> Result<Q> {
    use serde_json::Value;
    match x {
        Value::Number(n) if n.is_i64() => Ok(q(n.as_i64().unwrap())),
        Value::Number(n) if n.is_u64() => Ok(Q::from_integer(BigInt::from(n.as_u64().unwrap()))),
        Value::Number(n) => Err(Error::Parse(format!("{n} is not an exact integer or rational"))),
        Value::String(s) => parse_rational(s).ok_or_else(|| Error::Parse(format!("{s:?} is not an exact rational"))),
        other => Err(Error::Parse(format!("unexpected entry {other}"))),
    }
}

/// An integral linear map between lattices, acting on coefficient vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LatticeMap {
    source: Basis,
    target: Basis,
    matrix: [[i64; RANK]; RANK],
}

impl LatticeMap {
    pub fn identity(basis: Basis) -> Self {
        let mut m = [[0; RANK]; RANK];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        LatticeMap { source: basis, target: basis, matrix: m }
    }

    pub fn from_matrix(source: Basis, target: Basis, matrix: [[i64; RANK]; RANK]) -> Self {
        LatticeMap { source, target, matrix }
    }

    /// The map sending `h` to `images[0]` and `ei` to `images[i]`.
    pub fn from_images(source: Basis, target: Basis, images: &[PicClass; RANK]) -> Self {
        let mut m = [[0; RANK]; RANK];
        for (col, img) in images.iter().enumerate() {
            assert_eq!(img.basis, target, "image in the wrong basis");
            // the coordinate vector with a 1 in slot i > 0 is -ei
            let sign = if col == 0 { 1 } else { -1 };
            for (row, line) in m.iter_mut().enumerate() {
                line[col] = sign * img.coeffs[row];
            }
        }
        LatticeMap { source, target, matrix: m }
    }

    pub fn source(&self) -> Basis {
        self.source
    }

    pub fn target(&self) -> Basis {
        self.target
    }

    pub fn matrix(&self) -> &[[i64; RANK]; RANK] {
        &self.matrix
    }

    pub fn apply(&self, x: &PicClass) -> Result<PicClass> {
        if x.basis != self.source {
            return Err(Error::WrongBasis { expected: self.source, found: x.basis });
        }
        let mut c = [0i64; RANK];
        for (r, o) in c.iter_mut().enumerate() {
            let mut acc = 0i64;
            for k in 0..RANK {
                acc = self.matrix[r][k]
                    .checked_mul(x.coeffs[k])
                    .and_then(|v| acc.checked_add(v))
                    .expect("class coefficient overflow");
            }
            *o = acc;
        }
        Ok(PicClass::new(self.target, c))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LatticeMap) -> Result<LatticeMap> {
        if inner.target != self.source {
            return Err(Error::BasisMismatch { left: inner.target, right: self.source });
        }
        let mut m = [[0i64; RANK]; RANK];
        for r in 0..RANK {
            for c in 0..RANK {
                m[r][c] = (0..RANK).map(|k| self.matrix[r][k] * inner.matrix[k][c]).sum();
            }
        }
        Ok(LatticeMap { source: inner.source, target: self.target, matrix: m })
    }

    pub fn to_rational(&self) -> RationalMap {
        RationalMap {
            source: self.source,
            target: self.target,
            matrix: QMatrix::from_fn(RANK, RANK, |r, c| q(self.matrix[r][c])),
        }
    }

    /// Images of the basis classes `h, e1, ..., e8`.
    pub fn images(&self) -> [PicClass; RANK] {
        let mut out = [PicClass::zero(self.target); RANK];
        for (i, o) in out.iter_mut().enumerate() {
            let b = if i == 0 { PicClass::hyperplane(self.source) } else { PicClass::exceptional(self.source, i) };
            *o = self.apply(&b).expect("basis matches");
        }
        out
    }

    /// Whether the map is an isometry of the form of its (common) basis.
    pub fn preserves_pairing(&self) -> bool {
        if self.source != self.target {
            return false;
        }
        let imgs = self.images();
        let basis: Vec<PicClass> = (0..RANK)
            .map(|i| if i == 0 { PicClass::hyperplane(self.source) } else { PicClass::exceptional(self.source, i) })
            .collect();
        (0..RANK).all(|i| (0..RANK).all(|j| imgs[i].dot(&imgs[j]) == basis[i].dot(&basis[j])))
    }
}

/// A rational linear map between lattices, acting on coefficient vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMap {
    source: Basis,
    target: Basis,
    matrix: QMatrix,
}

impl RationalMap {
    pub fn new(source: Basis, target: Basis, matrix: QMatrix) -> Self {
        assert_eq!((matrix.rows(), matrix.cols()), (RANK, RANK));
        RationalMap { source, target, matrix }
    }

    pub fn source(&self) -> Basis {
        self.source
    }

    pub fn target(&self) -> Basis {
        self.target
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &RatClass) -> Result<RatClass> {
        if x.basis != self.source {
            return Err(Error::WrongBasis { expected: self.source, found: x.basis });
        }
        Ok(RatClass::from_vec(self.target, self.matrix.mul_vec(&x.to_vec())))
    }

    pub fn apply_class(&self, x: &PicClass) -> Result<RatClass> {
        self.apply(&RatClass::from(*x))
    }

    pub fn inverse(&self) -> Option<RationalMap> {
        Some(RationalMap { source: self.target, target: self.source, matrix: self.matrix.inverse()? })
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &RationalMap) -> Result<RationalMap> {
        if inner.target != self.source {
            return Err(Error::BasisMismatch { left: inner.target, right: self.source });
        }
        Ok(RationalMap { source: inner.source, target: self.target, matrix: self.matrix.mul(&inner.matrix) })
    }

    pub fn scale(&self, k: &Q) -> RationalMap {
        let m = QMatrix::from_fn(RANK, RANK, |r, c| self.matrix.get(r, c) * k);
        RationalMap { source: self.source, target: self.target, matrix: m }
    }

    pub fn to_integral(&self) -> Option<LatticeMap> {
        let mut m = [[0i64; RANK]; RANK];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                let x = self.matrix.get(r, c);
                if !x.is_integer() {
                    return None;
                }
                *v = x.numer().to_i64()?;
            }
        }
        Some(LatticeMap { source: self.source, target: self.target, matrix: m })
    }
}

/// A rational class scaled to its primitive integer direction, for fast
/// exact sign tests against many integral classes.
#[derive(Clone, Debug)]
pub struct ClassProbe {
    basis: Basis,
    small: Option<[i64; RANK]>,
    big: Vec<BigInt>,
}

impl ClassProbe {
    pub fn new(x: &RatClass) -> Self {
        let big = x.primitive_direction();
        let small = big.iter().map(ToPrimitive::to_i64).collect::<Option<Vec<i64>>>().map(|v| {
            let a: [i64; RANK] = v.try_into().expect("nine entries");
            a
        });
        ClassProbe { basis: x.basis, small, big }
    }

    pub fn from_class(x: &PicClass) -> Self {
        Self::new(&RatClass::from(*x))
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    /// Sign of the pairing of the probed class with `n`.
    pub fn sign(&self, n: &PicClass) -> Result<std::cmp::Ordering> {
        let head = Basis::pairing_head(self.basis, n.basis)?;
        Ok(self.sign_with_head(head, &n.coeffs))
    }

    /// Sign of the pairing with a form head fixed by the caller.
    pub fn sign_with_head(&self, head: i64, n: &[i64; RANK]) -> std::cmp::Ordering {
        match &self.small {
            Some(v) => {
                let mut acc = i128::from(head) * i128::from(v[0]) * i128::from(n[0]);
                for i in 1..RANK {
                    acc -= i128::from(v[i]) * i128::from(n[i]);
                }
                acc.cmp(&0)
            }
            None => {
                let mut acc = BigInt::from(head) * &self.big[0] * n[0];
                for i in 1..RANK {
                    acc -= &self.big[i] * n[i];
                }
                acc.cmp(&BigInt::zero())
            }
        }
    }
}

/// `K_S = -3h + Σei` on the surface and `K_X = -5H + 3ΣEi` on the fourfold.
pub fn canonical_class(basis: Basis) -> Result<PicClass> {
    match basis {
        Basis::Surface => Ok(PicClass::surface([-3, -1, -1, -1, -1, -1, -1, -1, -1])),
        Basis::Fourfold => Ok(PicClass::fourfold([-5, -3, -3, -3, -3, -3, -3, -3, -3])),
        Basis::FourfoldCurve => Err(Error::InvalidArgument("curve classes have no canonical class".into())),
    }
}

/// `K_S`.
pub const fn k_s() -> PicClass {
    PicClass::surface([-3, -1, -1, -1, -1, -1, -1, -1, -1])
}

/// `K_X`.
pub const fn k_x() -> PicClass {
    PicClass::fourfold([-5, -3, -3, -3, -3, -3, -3, -3, -3])
}

fn require(basis: Basis, x: &PicClass) -> Result<()> {
    if x.basis != basis {
        return Err(Error::WrongBasis { expected: basis, found: x.basis });
    }
    Ok(())
}

/// The Bertini involution on Pic(S): `γ ↦ 2(γ·K)K - γ`.
pub fn bertini_pullback(g: &PicClass) -> Result<PicClass> {
    require(Basis::Surface, g)?;
    let k = k_s();
    Ok(2 * g.dot(&k) * k - *g)
}

pub fn bertini_map() -> LatticeMap {
    let imgs: [PicClass; RANK] = std::array::from_fn(|i| {
        let b = if i == 0 { PicClass::hyperplane(Basis::Surface) } else { PicClass::exceptional(Basis::Surface, i) };
        bertini_pullback(&b).expect("surface class")
    });
    LatticeMap::from_images(Basis::Surface, Basis::Surface, &imgs)
}

/// `γ ↦ γ + (γ·K)K`.
pub fn adjoint_twist(g: &PicClass) -> Result<PicClass> {
    require(Basis::Surface, g)?;
    let k = k_s();
    Ok(*g + g.dot(&k) * k)
}

/// Inverse of [`adjoint_twist`]: `γ ↦ γ - ½(γ·K)K`.
pub fn adjoint_twist_inverse(g: &RatClass) -> Result<RatClass> {
    if g.basis != Basis::Surface {
        return Err(Error::WrongBasis { expected: Basis::Surface, found: g.basis });
    }
    let k = RatClass::from(k_s());
    let c = g.pair(&k)? / q(2);
    Ok(g - &k.scale(&c))
}

/// Basis (in reduced echelon form) of the subspace of Pic(S)⊗Q fixed by the
/// Bertini involution.
pub fn involution_fixed_subspace() -> Vec<RatClass> {
    eigenspace(&bertini_map(), 1)
}

/// Basis of `{x : f(x) = λx}` for an endomorphism `f`.
pub fn eigenspace(f: &LatticeMap, lambda: i64) -> Vec<RatClass> {
    assert_eq!(f.source, f.target);
    let m = QMatrix::from_fn(RANK, RANK, |r, c| q(f.matrix[r][c] - if r == c { lambda } else { 0 }));
    let k = m.kernel();
    (0..k.rows()).map(|r| RatClass::from_vec(f.source, k.row(r).to_vec())).collect()
}

/// Whether two rational classes span the same ray.
pub fn proportional(a: &RatClass, b: &RatClass) -> bool {
    if a.basis != b.basis {
        return false;
    }
    let pa = a.primitive_direction();
    let pb = b.primitive_direction();
    pa == pb || pa.iter().zip(&pb).all(|(x, y)| *x == -y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h() -> PicClass {
        PicClass::hyperplane(Basis::Surface)
    }

    fn e(i: usize) -> PicClass {
        PicClass::exceptional(Basis::Surface, i)
    }

    #[test]
    fn forms() {
        assert_eq!(h().dot(&h()), 1);
        assert_eq!(e(1).dot(&e(1)), -1);
        assert_eq!(k_s().square(), 1);
        assert_eq!(k_x().square(), 3);
        let hh = PicClass::hyperplane(Basis::Fourfold);
        assert_eq!(hh.square(), 3);
        let line = PicClass::hyperplane(Basis::FourfoldCurve);
        assert_eq!(hh.pair(&line).unwrap(), 1);
        let e1 = PicClass::exceptional(Basis::Fourfold, 1);
        let l1 = PicClass::exceptional(Basis::FourfoldCurve, 1);
        assert_eq!(e1.pair(&l1).unwrap(), -1);
        assert!(h().pair(&hh).is_err());
        assert!(line.pair(&line).is_err());
    }

    #[test]
    fn anticanonical_classes() {
        assert_eq!(-k_s(), 3 * h() - PicClass::exceptional_sum(Basis::Surface));
        assert_eq!(canonical_class(Basis::Fourfold).unwrap(), k_x());
        assert!(canonical_class(Basis::FourfoldCurve).is_err());
    }

    #[test]
    fn display() {
        let c = PicClass::surface([6, 3, 2, 2, 2, 2, 2, 2, 2]);
        assert_eq!(c.to_string(), "6h - 3e1 - 2e2 - 2e3 - 2e4 - 2e5 - 2e6 - 2e7 - 2e8");
        assert_eq!(e(3).to_string(), "e3");
        assert_eq!(PicClass::zero(Basis::Fourfold).to_string(), "0");
        let r = RatClass::from(k_x()).scale(&Q::new(1.into(), 2.into()));
        assert!(r.to_string().starts_with("-(5/2)H + (3/2)E1"));
    }

    #[test]
    fn literals() {
        let c = parse_class("[-3,-1,-1,-1,-1,-1,-1,-1,-1]", Basis::Surface).unwrap();
        assert_eq!(c, k_s());
        let o = parse_class(r#"{"basis":"X","coeffs":[1,0,0,0,0,0,0,0,0]}"#, Basis::Surface).unwrap();
        assert_eq!(o.basis(), Basis::Fourfold);
        assert!(parse_class("[1.5,0,0,0,0,0,0,0,0]", Basis::Surface).is_err());
        assert!(parse_class("[1,0,0]", Basis::Surface).is_err());
        assert!(parse_class(r#"["1/2",0,0,0,0,0,0,0,0]"#, Basis::Surface).is_err());
        let r = parse_rat_class(r#"["1/2",0,0,0,0,0,0,0,"-3"]"#, Basis::Surface).unwrap();
        assert_eq!(r.coeffs()[0], Q::new(1.into(), 2.into()));
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(json, r#"{"basis":"S","coeffs":["1/2",0,0,0,0,0,0,0,-3]}"#);
        let back: RatClass = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        let pj = serde_json::to_string(&k_s()).unwrap();
        assert_eq!(pj, r#"{"basis":"S","coeffs":[-3,-1,-1,-1,-1,-1,-1,-1,-1]}"#);
    }

    #[test]
    fn bertini_examples() {
        assert_eq!(bertini_pullback(&k_s()).unwrap(), k_s());
        assert_eq!(bertini_pullback(&e(1)).unwrap(), PicClass::surface([6, 3, 2, 2, 2, 2, 2, 2, 2]));
        assert_eq!(bertini_pullback(&h()).unwrap(), PicClass::surface([17, 6, 6, 6, 6, 6, 6, 6, 6]));
        assert!(bertini_pullback(&PicClass::hyperplane(Basis::Fourfold)).is_err());
    }

    #[test]
    fn twist_examples() {
        assert_eq!(adjoint_twist(&k_s()).unwrap(), 2 * k_s());
        let c = h() - e(1);
        assert_eq!(adjoint_twist(&c).unwrap(), -2 * k_s() + c);
        assert_eq!(adjoint_twist(&h()).unwrap(), -3 * k_s() + h());
        let back = adjoint_twist_inverse(&RatClass::from(adjoint_twist(&c).unwrap())).unwrap();
        assert_eq!(back, RatClass::from(c));
    }

    #[test]
    fn fixed_subspace_is_canonical_line() {
        let fixed = involution_fixed_subspace();
        assert_eq!(fixed.len(), 1);
        assert!(proportional(&fixed[0], &RatClass::from(k_s())));
        assert_eq!(eigenspace(&bertini_map(), -1).len(), 8);
    }

    #[test]
    fn lattice_map_images_roundtrip() {
        let m = bertini_map();
        assert_eq!(m.apply(&e(1)).unwrap(), bertini_pullback(&e(1)).unwrap());
        assert_eq!(m.images()[0], bertini_pullback(&h()).unwrap());
        assert!(m.preserves_pairing());
        assert_eq!(m.compose(&m).unwrap(), LatticeMap::identity(Basis::Surface));
    }
}
