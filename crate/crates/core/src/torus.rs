//! Exact arithmetic for hyperbolic automorphisms of the 2-torus.
//!
//! Matrices carry `i128` entries and every power is computed with checked
//! arithmetic, so periodic-point counts are either exact or an explicit
//! [`TorusError::Overflow`]. Periodic points are produced as exact rationals
//! from the Smith normal form of `A^n - I` and only converted to floating
//! point at the boundary ([`RationalPoint::to_torus`]).

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorusError {
    #[error("matrix is not hyperbolic (trace {trace}, det {det})")]
    NotHyperbolic { trace: i128, det: i128 },
    #[error("matrix is not unimodular (det {det})")]
    NotUnimodular { det: i128 },
    #[error("integer overflow while computing the power n = {n}")]
    Overflow { n: u32 },
    #[error("periodic point count {count} exceeds the cap {cap}")]
    CapExceeded { count: u128, cap: u128 },
    #[error("period must be at least 1")]
    ZeroPeriod,
}

/// Integer 2x2 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IntMatrix2 {
    pub a11: i128,
    pub a12: i128,
    pub a21: i128,
    pub a22: i128,
}

impl IntMatrix2 {
    pub const IDENTITY: IntMatrix2 = IntMatrix2::new(1, 0, 0, 1);

    pub const fn new(a11: i128, a12: i128, a21: i128, a22: i128) -> Self {
        IntMatrix2 { a11, a12, a21, a22 }
    }

    /// Builds a matrix from a row-major array, the layout used by the
    /// configuration files.
    pub fn from_row_major(m: [i64; 4]) -> Self {
        IntMatrix2::new(m[0] as i128, m[1] as i128, m[2] as i128, m[3] as i128)
    }

    pub fn to_row_major(&self) -> [i128; 4] {
        [self.a11, self.a12, self.a21, self.a22]
    }

    pub fn det(&self) -> i128 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn trace(&self) -> i128 {
        self.a11 + self.a22
    }

    pub fn checked_det(&self) -> Option<i128> {
        self.a11
            .checked_mul(self.a22)?
            .checked_sub(self.a12.checked_mul(self.a21)?)
    }

    pub fn checked_mul(&self, o: &IntMatrix2) -> Option<IntMatrix2> {
        let dot = |a: i128, b: i128, c: i128, d: i128| -> Option<i128> {
            a.checked_mul(b)?.checked_add(c.checked_mul(d)?)
        };
        Some(IntMatrix2 {
            a11: dot(self.a11, o.a11, self.a12, o.a21)?,
            a12: dot(self.a11, o.a12, self.a12, o.a22)?,
            a21: dot(self.a21, o.a11, self.a22, o.a21)?,
            a22: dot(self.a21, o.a12, self.a22, o.a22)?,
        })
    }

    /// `self^n` by repeated squaring.
    pub fn checked_pow(&self, n: u32) -> Result<IntMatrix2, TorusError> {
        let overflow = TorusError::Overflow { n };
        let mut result = IntMatrix2::IDENTITY;
        let mut base = *self;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.checked_mul(&base).ok_or(overflow.clone())?;
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(&base).ok_or(overflow.clone())?;
            }
        }
        Ok(result)
    }

    /// Inverse of a unimodular matrix (adjugate times det).
    pub fn unimodular_inverse(&self) -> Result<IntMatrix2, TorusError> {
        let det = self.det();
        if det.abs() != 1 {
            return Err(TorusError::NotUnimodular { det });
        }
        Ok(IntMatrix2::new(
            det * self.a22,
            -det * self.a12,
            -det * self.a21,
            det * self.a11,
        ))
    }

    pub fn apply_vec(&self, v: [f64; 2]) -> [f64; 2] {
        [
            self.a11 as f64 * v[0] + self.a12 as f64 * v[1],
            self.a21 as f64 * v[0] + self.a22 as f64 * v[1],
        ]
    }

    /// Induced map on the torus, evaluated in floating point.
    pub fn apply(&self, p: TorusPoint) -> TorusPoint {
        let [x1, x2] = self.apply_vec([p.x1, p.x2]);
        TorusPoint::new(x1, x2)
    }
}

impl fmt::Display for IntMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a11, self.a12, self.a21, self.a22)
    }
}

/// Reduces a real number into `[0, 1)`.
pub fn wrap_unit(x: f64) -> f64 {
    let r = x - x.floor();
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Reduces a real number into `[-1/2, 1/2)`.
pub fn wrap_centered(x: f64) -> f64 {
    let r = x - (x + 0.5).floor();
    if r >= 0.5 {
        r - 1.0
    } else {
        r
    }
}

/// A point of the torus with coordinates in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct TorusPoint {
    pub x1: f64,
    pub x2: f64,
}

impl TorusPoint {
    pub const ORIGIN: TorusPoint = TorusPoint { x1: 0.0, x2: 0.0 };

    pub fn new(x1: f64, x2: f64) -> Self {
        TorusPoint {
            x1: wrap_unit(x1),
            x2: wrap_unit(x2),
        }
    }

    pub fn coords(&self) -> [f64; 2] {
        [self.x1, self.x2]
    }

    /// `self + v` reduced mod 1.
    pub fn translate(&self, v: [f64; 2]) -> TorusPoint {
        TorusPoint::new(self.x1 + v[0], self.x2 + v[1])
    }
}

/// Shortest representative of `p - q`, each coordinate in `[-1/2, 1/2)`.
pub fn displacement(p: TorusPoint, q: TorusPoint) -> [f64; 2] {
    [wrap_centered(p.x1 - q.x1), wrap_centered(p.x2 - q.x2)]
}

/// Flat wrap-around distance on the torus.
pub fn torus_distance(p: TorusPoint, q: TorusPoint) -> f64 {
    let d1 = (p.x1 - q.x1).abs().rem_euclid(1.0);
    let d2 = (p.x2 - q.x2).abs().rem_euclid(1.0);
    d1.min(1.0 - d1).hypot(d2.min(1.0 - d2))
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// An exact rational point of the torus, `num / den` with `0 <= num < den`
/// and `gcd(num1, num2, den) = 1`, so the representation is unique.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RationalPoint {
    num: [i128; 2],
    den: i128,
}

impl RationalPoint {
    pub const ORIGIN: RationalPoint = RationalPoint {
        num: [0, 0],
        den: 1,
    };

    /// Panics if `den == 0`.
    pub fn new(n1: i128, n2: i128, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        let (n1, n2, den) = if den < 0 {
            (-n1, -n2, -den)
        } else {
            (n1, n2, den)
        };
        let n1 = n1.rem_euclid(den);
        let n2 = n2.rem_euclid(den);
        let g = gcd(gcd(n1, n2), den);
        RationalPoint {
            num: [n1 / g, n2 / g],
            den: den / g,
        }
    }

    pub fn numerators(&self) -> [i128; 2] {
        self.num
    }

    pub fn denominator(&self) -> i128 {
        self.den
    }

    pub fn to_torus(&self) -> TorusPoint {
        let d = self.den as f64;
        TorusPoint::new(self.num[0] as f64 / d, self.num[1] as f64 / d)
    }

    /// Image under the induced torus map, exact.
    pub fn apply(&self, m: &IntMatrix2) -> Option<RationalPoint> {
        let [n1, n2] = self.num;
        let y1 = m.a11.checked_mul(n1)?.checked_add(m.a12.checked_mul(n2)?)?;
        let y2 = m.a21.checked_mul(n1)?.checked_add(m.a22.checked_mul(n2)?)?;
        Some(RationalPoint::new(y1, y2, self.den))
    }

    /// Exact test of `m^n p = p`, iterating `m` so intermediates stay below `den`.
    pub fn is_periodic(&self, m: &IntMatrix2, n: u32) -> bool {
        let mut p = *self;
        for _ in 0..n {
            match p.apply(m) {
                Some(q) => p = q,
                None => return false,
            }
        }
        p == *self
    }
}

impl Ord for RationalPoint {
    fn cmp(&self, o: &Self) -> Ordering {
        let c1 = (self.num[0] * o.den).cmp(&(o.num[0] * self.den));
        c1.then_with(|| (self.num[1] * o.den).cmp(&(o.num[1] * self.den)))
    }
}

impl PartialOrd for RationalPoint {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}/{}, {}/{})", self.num[0], self.den, self.num[1], self.den)
    }
}

/// Eigen-data of a hyperbolic unimodular matrix.
///
/// `eig_u`, `eig_s` are the signed eigenvalues with `|eig_u| > 1 > |eig_s|`;
/// `lambda_u`, `lambda_s` are their moduli. Eigenvectors are unit length,
/// oriented with a positive first coordinate (positive second coordinate if
/// the first vanishes).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicAutomorphism {
    pub matrix: IntMatrix2,
    pub eig_u: f64,
    pub eig_s: f64,
    pub lambda_u: f64,
    pub lambda_s: f64,
    pub v_u: [f64; 2],
    pub v_s: [f64; 2],
}

impl HyperbolicAutomorphism {
    pub fn log_lambda_u(&self) -> f64 {
        self.lambda_u.ln()
    }

    pub fn log_lambda_s(&self) -> f64 {
        self.lambda_s.ln()
    }
}

fn unit_eigenvector(m: &IntMatrix2, mu: f64) -> [f64; 2] {
    let c1 = [m.a12 as f64, mu - m.a11 as f64];
    let c2 = [mu - m.a22 as f64, m.a21 as f64];
    let n1 = c1[0].hypot(c1[1]);
    let n2 = c2[0].hypot(c2[1]);
    let (v, n) = if n1 >= n2 { (c1, n1) } else { (c2, n2) };
    let mut v = [v[0] / n, v[1] / n];
    if v[0] < 0.0 || (v[0] == 0.0 && v[1] < 0.0) {
        v = [-v[0], -v[1]];
    }
    v
}

/// Closed-form eigen-data from the characteristic polynomial `t^2 - tr t + det`.
pub fn eigen_data(m: IntMatrix2) -> Result<HyperbolicAutomorphism, TorusError> {
    let det = m.det();
    if det.abs() != 1 {
        return Err(TorusError::NotUnimodular { det });
    }
    let tr = m.trace();
    // det = -1 matrices are hyperbolic as soon as the trace is nonzero.
    let hyperbolic = if det == 1 { tr.abs() > 2 } else { tr != 0 };
    if !hyperbolic {
        return Err(TorusError::NotHyperbolic { trace: tr, det });
    }
    let trf = tr as f64;
    let disc = (trf * trf - 4.0 * det as f64).sqrt();
    let eig_u = 0.5 * (trf + trf.signum() * disc);
    let eig_s = det as f64 / eig_u;
    Ok(HyperbolicAutomorphism {
        matrix: m,
        eig_u,
        eig_s,
        lambda_u: eig_u.abs(),
        lambda_s: eig_s.abs(),
        v_u: unit_eigenvector(&m, eig_u),
        v_s: unit_eigenvector(&m, eig_s),
    })
}

/// `m^n - I`, checked.
fn power_minus_identity(m: &IntMatrix2, n: u32) -> Result<IntMatrix2, TorusError> {
    if n == 0 {
        return Err(TorusError::ZeroPeriod);
    }
    let p = m.checked_pow(n)?;
    let o = TorusError::Overflow { n };
    Ok(IntMatrix2::new(
        p.a11.checked_sub(1).ok_or(o.clone())?,
        p.a12,
        p.a21,
        p.a22.checked_sub(1).ok_or(o)?,
    ))
}

/// Number of fixed points of `m^n` on the torus, `|det(m^n - I)|`, evaluated
/// as `|det(m)^n - tr(m^n) + 1|` so only the power itself must fit.
pub fn periodic_count(m: &IntMatrix2, n: u32) -> Result<u128, TorusError> {
    if n == 0 {
        return Err(TorusError::ZeroPeriod);
    }
    let p = m.checked_pow(n)?;
    let det_n: i128 = if m.det() == -1 && n % 2 == 1 { -1 } else { 1 };
    let tr = p.a11.checked_add(p.a22).ok_or(TorusError::Overflow { n })?;
    let count = det_n
        .checked_sub(tr)
        .and_then(|x| x.checked_add(1))
        .ok_or(TorusError::Overflow { n })?;
    Ok(count.unsigned_abs())
}

/// Smith normal form `U A V = diag(d1, d2)` of a 2x2 integer matrix, with
/// `U`, `V` unimodular, `d1, d2 >= 0` and `d1 | d2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix2,
    pub v: IntMatrix2,
    pub d1: i128,
    pub d2: i128,
}

pub fn smith_normal_form(a: &IntMatrix2) -> SmithForm {
    // Row operations are mirrored on `u`, column operations on `v`.
    let mut m = [[a.a11, a.a12], [a.a21, a.a22]];
    let mut u = [[1i128, 0], [0, 1]];
    let mut v = [[1i128, 0], [0, 1]];

    fn swap_rows(x: &mut [[i128; 2]; 2]) {
        x.swap(0, 1);
    }
    fn swap_cols(x: &mut [[i128; 2]; 2]) {
        for row in x.iter_mut() {
            row.swap(0, 1);
        }
    }
    // row_i -= k * row_j
    fn row_sub(x: &mut [[i128; 2]; 2], i: usize, j: usize, k: i128) {
        let rj = x[j];
        for (a, b) in x[i].iter_mut().zip(rj) {
            *a -= k * b;
        }
    }
    fn col_sub(x: &mut [[i128; 2]; 2], i: usize, j: usize, k: i128) {
        for row in x.iter_mut() {
            row[i] -= k * row[j];
        }
    }

    loop {
        // Move the smallest nonzero entry to the pivot position.
        let mut best: Option<(usize, usize)> = None;
        for (r, row) in m.iter().enumerate() {
            for (c, &x) in row.iter().enumerate() {
                if x != 0 && best.is_none_or(|(br, bc)| x.abs() < m[br][bc].abs()) {
                    best = Some((r, c));
                }
            }
        }
        let Some((r, c)) = best else { break };
        if r == 1 {
            swap_rows(&mut m);
            swap_rows(&mut u);
        }
        if c == 1 {
            swap_cols(&mut m);
            swap_cols(&mut v);
        }
        let p = m[0][0];
        let k_row = m[1][0].div_euclid(p);
        row_sub(&mut m, 1, 0, k_row);
        row_sub(&mut u, 1, 0, k_row);
        let k_col = m[0][1].div_euclid(p);
        col_sub(&mut m, 1, 0, k_col);
        col_sub(&mut v, 1, 0, k_col);
        if m[1][0] != 0 || m[0][1] != 0 {
            continue;
        }
        if m[1][1] % p != 0 {
            // row_0 += row_1 brings a non-multiple into the pivot row.
            row_sub(&mut m, 0, 1, -1);
            row_sub(&mut u, 0, 1, -1);
            continue;
        }
        break;
    }
    for i in 0..2 {
        if m[i][i] < 0 {
            m[i][i] = -m[i][i];
            u[i] = [-u[i][0], -u[i][1]];
        }
    }
    SmithForm {
        u: IntMatrix2::new(u[0][0], u[0][1], u[1][0], u[1][1]),
        v: IntMatrix2::new(v[0][0], v[0][1], v[1][0], v[1][1]),
        d1: m[0][0],
        d2: m[1][1],
    }
}

/// All fixed points of `m^n`, exact, sorted lexicographically.
///
/// With `U (m^n - I) V = diag(d1, d2)` the solutions of `(m^n - I) y ∈ Z^2`
/// are `y = V (a/d1, b/d2)` for `0 <= a < d1`, `0 <= b < d2`.
pub fn enumerate_periodic_exact(
    m: &IntMatrix2,
    n: u32,
    cap: u128,
) -> Result<Vec<RationalPoint>, TorusError> {
    let a = power_minus_identity(m, n)?;
    let count = periodic_count(m, n)?;
    if count > cap {
        return Err(TorusError::CapExceeded { count, cap });
    }
    let snf = smith_normal_form(&a);
    let overflow = TorusError::Overflow { n };
    let (d1, d2) = (snf.d1, snf.d2);
    if d1 == 0 || d2 == 0 {
        return Err(TorusError::NotHyperbolic {
            trace: m.trace(),
            det: m.det(),
        });
    }
    let scale = d2 / d1;
    let mut pts = Vec::with_capacity(count as usize);
    for i in 0..d1 {
        for j in 0..d2 {
            let z1 = i * scale;
            let y = RationalPoint { num: [z1, j], den: d2 }
                .apply(&snf.v)
                .ok_or(overflow.clone())?;
            pts.push(y);
        }
    }
    pts.sort();
    Ok(pts)
}

/// Floating-point view of [`enumerate_periodic_exact`].
pub fn enumerate_periodic(m: &IntMatrix2, n: u32, cap: u128) -> Result<Vec<TorusPoint>, TorusError> {
    Ok(enumerate_periodic_exact(m, n, cap)?
        .iter()
        .map(RationalPoint::to_torus)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    const CAT: IntMatrix2 = IntMatrix2::new(2, 1, 1, 1);
    const PHI: IntMatrix2 = IntMatrix2::new(3, 2, 1, 1);

    #[test]
    fn cat_map_eigenvalues() {
        let h = eigen_data(CAT).unwrap();
        assert!((h.lambda_u - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-14);
        assert!((h.lambda_u - 2.6180340).abs() < 1e-7);
        assert!((h.lambda_s - 0.3819660).abs() < 1e-7);
        assert!((h.lambda_u * h.lambda_s - 1.0).abs() < 1e-15);
    }

    #[test]
    fn phi_eigenvalues() {
        let h = eigen_data(PHI).unwrap();
        assert!((h.lambda_u - (2.0 + 3f64.sqrt())).abs() < 1e-14);
    }

    #[test]
    fn eigenvectors_are_unit_and_oriented() {
        for m in [CAT, PHI, IntMatrix2::new(1, 1, 1, 0), IntMatrix2::new(-3, 1, -1, 0)] {
            let h = eigen_data(m).unwrap();
            for (v, mu) in [(h.v_u, h.eig_u), (h.v_s, h.eig_s)] {
                let mv = m.apply_vec(v);
                assert!((mv[0] - mu * v[0]).abs() < 1e-12, "{m}");
                assert!((mv[1] - mu * v[1]).abs() < 1e-12, "{m}");
                assert!((v[0].hypot(v[1]) - 1.0).abs() < 1e-15);
                assert!(v[0] > 0.0 || (v[0] == 0.0 && v[1] > 0.0));
            }
            assert!((h.eig_u * h.eig_s - m.det() as f64).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_non_hyperbolic_and_non_unimodular() {
        assert_eq!(
            eigen_data(IntMatrix2::new(1, 1, 0, 1)),
            Err(TorusError::NotHyperbolic { trace: 2, det: 1 })
        );
        assert_eq!(
            eigen_data(IntMatrix2::new(0, -1, 1, 0)),
            Err(TorusError::NotHyperbolic { trace: 0, det: 1 })
        );
        assert_eq!(
            eigen_data(IntMatrix2::new(2, 0, 0, 1)),
            Err(TorusError::NotUnimodular { det: 2 })
        );
    }

    #[test]
    fn counts_for_reference_matrices() {
        assert_eq!(periodic_count(&CAT, 1).unwrap(), 1);
        assert_eq!(periodic_count(&CAT, 4).unwrap(), 45);
        assert_eq!(periodic_count(&PHI, 2).unwrap(), 12);
        let seq: Vec<u128> = (1..=6).map(|n| periodic_count(&CAT, n).unwrap()).collect();
        assert_eq!(seq, vec![1, 5, 16, 45, 121, 320]);
    }

    #[test]
    fn count_matches_trace_recursion() {
        // t_{n+1} = tr * t_n - t_{n-1}, count = t_n - 2 for det = 1 and positive eigenvalues
        for m in [CAT, PHI] {
            let tr = m.trace();
            let (mut prev, mut cur) = (2i128, tr);
            for n in 1..=30 {
                assert_eq!(periodic_count(&m, n).unwrap(), (cur - 2) as u128);
                let next = tr * cur - prev;
                prev = cur;
                cur = next;
            }
        }
    }

    #[test]
    fn overflow_is_reported() {
        let err = periodic_count(&PHI, 80).unwrap_err();
        assert_eq!(err, TorusError::Overflow { n: 80 });
        assert!(periodic_count(&PHI, 40).is_ok());
    }

    #[test]
    fn fixed_points_small_cases() {
        let pts = enumerate_periodic(&PHI, 1, 1 << 20).unwrap();
        assert_eq!(pts, vec![TorusPoint::new(0.0, 0.0), TorusPoint::new(0.0, 0.5)]);
        let pts = enumerate_periodic(&CAT, 1, 1 << 20).unwrap();
        assert_eq!(pts, vec![TorusPoint::ORIGIN]);
    }

    #[test]
    fn cap_exceeded() {
        assert_eq!(
            enumerate_periodic_exact(&CAT, 6, 100),
            Err(TorusError::CapExceeded { count: 320, cap: 100 })
        );
    }

    #[test]
    fn smith_form_is_valid() {
        for a in [
            IntMatrix2::new(1, 2, 1, 0),
            IntMatrix2::new(88, 55, 55, 33),
            IntMatrix2::new(6, 4, 2, 2),
            IntMatrix2::new(0, 3, 5, 0),
            IntMatrix2::new(-4, 6, 6, -4),
        ] {
            let s = smith_normal_form(&a);
            assert_eq!(s.u.det().abs(), 1);
            assert_eq!(s.v.det().abs(), 1);
            let d = s.u.checked_mul(&a).unwrap().checked_mul(&s.v).unwrap();
            assert_eq!(d, IntMatrix2::new(s.d1, 0, 0, s.d2), "{a}");
            assert!(s.d1 > 0 && s.d2 % s.d1 == 0);
            assert_eq!(s.d1 * s.d2, a.det().abs());
        }
    }

    #[test]
    fn rational_point_normalization() {
        let p = RationalPoint::new(-1, 6, 4);
        assert_eq!(p, RationalPoint::new(3, 2, 4));
        assert_eq!(p.numerators(), [3, 2]);
        assert_eq!(RationalPoint::new(2, 4, 8), RationalPoint::new(1, 2, 4));
        assert!(RationalPoint::new(1, 0, 3) < RationalPoint::new(1, 0, 2));
    }

    #[test]
    fn distance_examples() {
        let d = torus_distance(TorusPoint::new(0.0, 0.0), TorusPoint::new(0.0, 0.5));
        assert_eq!(d, 0.5);
        let d = torus_distance(TorusPoint::new(0.1, 0.9), TorusPoint::new(0.9, 0.1));
        assert!((d - 0.2828427).abs() < 1e-7);
        let p = TorusPoint::new(0.3, 0.7);
        assert_eq!(torus_distance(p, p), 0.0);
    }

    #[test]
    fn wrapping() {
        assert_eq!(wrap_unit(-1e-20), 0.0);
        assert_eq!(wrap_unit(1.0), 0.0);
        assert_eq!(wrap_unit(-0.25), 0.75);
        assert_eq!(wrap_centered(0.5), -0.5);
        assert_eq!(wrap_centered(0.75), -0.25);
        assert_eq!(wrap_centered(-0.75), 0.25);
    }
}
