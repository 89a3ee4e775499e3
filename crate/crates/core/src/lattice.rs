//! Exact 2D lattice linear algebra.
//!
//! All monodromy arithmetic goes through the identity
//! `M_{w,n} v = v + n * wedge(w, v) * w`, which keeps the eigenvector,
//! determinant and power-law properties manifest.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::num::{Int, Rat};
use crate::{Error, Result};

/// Exact integer vector in the standard lattice of R^2.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeVec {
    pub x: Int,
    pub y: Int,
}

impl fmt::Debug for LatticeVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Display for LatticeVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

pub fn lvec(x: i64, y: i64) -> LatticeVec {
    LatticeVec::new(Int::from(x), Int::from(y))
}

impl LatticeVec {
    pub fn new(x: Int, y: Int) -> Self {
        LatticeVec { x, y }
    }

    pub fn zero() -> Self {
        LatticeVec::new(Int::zero(), Int::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn neg(&self) -> Self {
        LatticeVec::new(-&self.x, -&self.y)
    }

    pub fn add(&self, other: &Self) -> Self {
        LatticeVec::new(&self.x + &other.x, &self.y + &other.y)
    }

    pub fn sub(&self, other: &Self) -> Self {
        LatticeVec::new(&self.x - &other.x, &self.y - &other.y)
    }

    pub fn scale(&self, k: &Int) -> Self {
        LatticeVec::new(&self.x * k, &self.y * k)
    }

    pub fn is_primitive(&self) -> bool {
        !self.is_zero() && self.x.gcd(&self.y).is_one()
    }

    /// Counterclockwise rotation by 90 degrees; the inward normal of a
    /// counterclockwise boundary edge.
    pub fn rot90(&self) -> Self {
        LatticeVec::new(-&self.y, self.x.clone())
    }

    pub fn to_rat(&self) -> RatVec {
        RatVec {
            x: Rat::from_integer(self.x.clone()),
            y: Rat::from_integer(self.y.clone()),
        }
    }
}

/// Oriented wedge (determinant) of two lattice vectors.
pub fn wedge(v: &LatticeVec, w: &LatticeVec) -> Int {
    &v.x * &w.y - &v.y * &w.x
}

/// The primitive vector in the direction of `v`.
pub fn primitive(v: &LatticeVec) -> Result<LatticeVec> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let g = v.x.gcd(&v.y);
    Ok(LatticeVec::new(&v.x / &g, &v.y / &g))
}

/// Exact rational point of the plane.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalPoint {
    pub x: Rat,
    pub y: Rat,
}

impl fmt::Debug for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

pub fn rpoint(x: i64, y: i64) -> RationalPoint {
    RationalPoint::new(Rat::from_integer(Int::from(x)), Rat::from_integer(Int::from(y)))
}

impl RationalPoint {
    pub fn new(x: Rat, y: Rat) -> Self {
        RationalPoint { x, y }
    }

    pub fn origin() -> Self {
        rpoint(0, 0)
    }

    pub fn add_vec(&self, v: &LatticeVec, t: &Rat) -> Self {
        RationalPoint::new(&self.x + t * Rat::from_integer(v.x.clone()), &self.y + t * Rat::from_integer(v.y.clone()))
    }

    pub fn sub(&self, other: &Self) -> RatVec {
        RatVec {
            x: &self.x - &other.x,
            y: &self.y - &other.y,
        }
    }

    pub fn translate(&self, dx: &Rat, dy: &Rat) -> Self {
        RationalPoint::new(&self.x + dx, &self.y + dy)
    }

    /// Lexicographic comparison used by canonical forms.
    pub fn lex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.x.cmp(&other.x).then_with(|| self.y.cmp(&other.y))
    }
}

/// Rational displacement vector (difference of two rational points).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatVec {
    pub x: Rat,
    pub y: Rat,
}

impl RatVec {
    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// Primitive lattice direction of a rational vector.
    pub fn primitive_direction(&self) -> Result<LatticeVec> {
        if self.is_zero() {
            return Err(Error::ZeroVector);
        }
        let scale = self.x.denom().lcm(self.y.denom());
        let sx = (&self.x * Rat::from_integer(scale.clone())).to_integer();
        let sy = (&self.y * Rat::from_integer(scale)).to_integer();
        primitive(&LatticeVec::new(sx, sy))
    }
}

pub fn rat_wedge(v: &RatVec, w: &RatVec) -> Rat {
    &v.x * &w.y - &v.y * &w.x
}

/// Wedge of a lattice vector with a rational vector; used for exact
/// sidedness tests against eigenlines.
pub fn wedge_lat_rat(v: &LatticeVec, w: &RatVec) -> Rat {
    Rat::from_integer(v.x.clone()) * &w.y - Rat::from_integer(v.y.clone()) * &w.x
}

/// Integer 2x2 matrix of determinant +-1.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UnimodularMap {
    pub m11: Int,
    pub m12: Int,
    pub m21: Int,
    pub m22: Int,
}

impl fmt::Debug for UnimodularMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.m11, self.m12, self.m21, self.m22)
    }
}

impl UnimodularMap {
    pub fn new(m11: Int, m12: Int, m21: Int, m22: Int) -> Self {
        let m = UnimodularMap { m11, m12, m21, m22 };
        let det = m.det();
        assert!(
            det == Int::one() || det == -Int::one(),
            "determinant must be +-1, got {det}"
        );
        m
    }

    pub fn from_i64(m11: i64, m12: i64, m21: i64, m22: i64) -> Self {
        UnimodularMap::new(Int::from(m11), Int::from(m12), Int::from(m21), Int::from(m22))
    }

    pub fn identity() -> Self {
        UnimodularMap::from_i64(1, 0, 0, 1)
    }

    /// Counterclockwise rotation by pi/2.
    pub fn rot90() -> Self {
        UnimodularMap::from_i64(0, -1, 1, 0)
    }

    pub fn det(&self) -> Int {
        &self.m11 * &self.m22 - &self.m12 * &self.m21
    }

    pub fn mul(&self, other: &Self) -> Self {
        UnimodularMap::new(
            &self.m11 * &other.m11 + &self.m12 * &other.m21,
            &self.m11 * &other.m12 + &self.m12 * &other.m22,
            &self.m21 * &other.m11 + &self.m22 * &other.m21,
            &self.m21 * &other.m12 + &self.m22 * &other.m22,
        )
    }

    /// Inverse via the adjugate; exact because the determinant is a unit.
    pub fn inverse(&self) -> Self {
        let det = self.det();
        UnimodularMap::new(
            &self.m22 * &det,
            -&self.m12 * &det,
            -&self.m21 * &det,
            &self.m11 * &det,
        )
    }

    pub fn apply(&self, v: &LatticeVec) -> LatticeVec {
        LatticeVec::new(
            &self.m11 * &v.x + &self.m12 * &v.y,
            &self.m21 * &v.x + &self.m22 * &v.y,
        )
    }

    pub fn apply_rat(&self, v: &RatVec) -> RatVec {
        RatVec {
            x: Rat::from_integer(self.m11.clone()) * &v.x + Rat::from_integer(self.m12.clone()) * &v.y,
            y: Rat::from_integer(self.m21.clone()) * &v.x + Rat::from_integer(self.m22.clone()) * &v.y,
        }
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut acc = UnimodularMap::identity();
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }
}

/// Monodromy of a clockwise loop around `n` nodes with primitive
/// eigendirection `w = (s, t)`:
/// `[[1 - n s t, n s^2], [-n t^2, 1 + n s t]]`.
pub fn monodromy_matrix(w: &LatticeVec, n: u32) -> Result<UnimodularMap> {
    if !w.is_primitive() {
        return Err(Error::NotPrimitive(w.x.to_string(), w.y.to_string()));
    }
    assert!(n >= 1, "monodromy requires at least one node");
    let n = Int::from(n);
    let (s, t) = (&w.x, &w.y);
    Ok(UnimodularMap::new(
        Int::one() - &n * s * t,
        &n * s * s,
        -(&n * t * t),
        Int::one() + &n * s * t,
    ))
}

/// Apply the `n`-node monodromy with eigendirection `w` (or its inverse for
/// `power < 0`) to a rational vector without forming the matrix:
/// `M^k v = v + k * wedge(w, v) * w`.
pub fn monodromy_apply(w: &LatticeVec, power: i64, v: &RatVec) -> RatVec {
    let c = wedge_lat_rat(w, v) * Rat::from_integer(Int::from(power));
    RatVec {
        x: &v.x + &c * Rat::from_integer(w.x.clone()),
        y: &v.y + &c * Rat::from_integer(w.y.clone()),
    }
}

pub fn monodromy_apply_lat(w: &LatticeVec, power: i64, v: &LatticeVec) -> LatticeVec {
    let c = wedge(w, v) * Int::from(power);
    v.add(&w.scale(&c))
}

/// Affine length of the segment from `p` to `q`: the factor `lambda >= 0`
/// with `q - p = lambda * primitive(q - p)`.
pub fn affine_length(p: &RationalPoint, q: &RationalPoint) -> Rat {
    let d = q.sub(p);
    if d.is_zero() {
        return Rat::zero();
    }
    let dir = d.primitive_direction().expect("nonzero");
    if !dir.x.is_zero() {
        d.x / Rat::from_integer(dir.x)
    } else {
        d.y / Rat::from_integer(dir.y)
    }
}

/// Lattice distance from `p` to the line `<normal, x> = offset`.
pub fn lattice_distance(normal: &LatticeVec, offset: &Rat, p: &RationalPoint) -> Result<Rat> {
    if !normal.is_primitive() {
        return Err(Error::NotPrimitive(normal.x.to_string(), normal.y.to_string()));
    }
    let pairing = Rat::from_integer(normal.x.clone()) * &p.x + Rat::from_integer(normal.y.clone()) * &p.y;
    Ok((pairing - offset).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{rat, ratio};
    use proptest::prelude::*;

    #[test]
    fn wedge_examples() {
        assert_eq!(wedge(&lvec(1, 0), &lvec(0, 1)), Int::one());
        let v = lvec(7, -3);
        assert_eq!(wedge(&v, &v), Int::zero());
        assert_eq!(wedge(&lvec(2, 5), &lvec(1, 3)), Int::one());
    }

    #[test]
    fn primitive_examples() {
        assert_eq!(primitive(&lvec(-3, 3)).unwrap(), lvec(-1, 1));
        assert_eq!(primitive(&lvec(0, -4)).unwrap(), lvec(0, -1));
        assert_eq!(primitive(&lvec(2, 5)).unwrap(), lvec(2, 5));
        assert!(primitive(&lvec(0, 0)).is_err());
    }

    #[test]
    fn monodromy_examples() {
        let m = monodromy_matrix(&lvec(1, 1), 1).unwrap();
        assert_eq!(m, UnimodularMap::from_i64(0, 1, -1, 2));
        let m = monodromy_matrix(&lvec(1, 0), 5).unwrap();
        assert_eq!(m, UnimodularMap::from_i64(1, 5, 0, 1));
        let m = monodromy_matrix(&lvec(0, 1), 2).unwrap();
        assert_eq!(m, UnimodularMap::from_i64(1, 0, -2, 1));
        assert!(monodromy_matrix(&lvec(2, 2), 1).is_err());
    }

    #[test]
    fn affine_length_examples() {
        assert_eq!(affine_length(&rpoint(0, 0), &rpoint(3, 0)), rat(3));
        assert_eq!(affine_length(&rpoint(0, 0), &rpoint(2, 2)), rat(2));
        let q = RationalPoint::new(ratio(1, 2), ratio(3, 2));
        assert_eq!(affine_length(&RationalPoint::origin(), &q), ratio(1, 2));
        assert_eq!(affine_length(&rpoint(1, 1), &rpoint(1, 1)), rat(0));
    }

    #[test]
    fn lattice_distance_examples() {
        assert_eq!(
            lattice_distance(&lvec(0, 1), &rat(-1), &RationalPoint::origin()).unwrap(),
            rat(1)
        );
        assert_eq!(
            lattice_distance(&lvec(1, 1), &rat(2), &rpoint(1, 1)).unwrap(),
            rat(0)
        );
        assert_eq!(
            lattice_distance(&lvec(1, 1), &rat(-2), &RationalPoint::origin()).unwrap(),
            rat(2)
        );
        assert!(lattice_distance(&lvec(2, 0), &rat(0), &RationalPoint::origin()).is_err());
    }

    fn arb_primitive() -> impl Strategy<Value = LatticeVec> {
        (-30i64..=30, -30i64..=30)
            .prop_filter("nonzero", |(x, y)| *x != 0 || *y != 0)
            .prop_map(|(x, y)| primitive(&lvec(x, y)).unwrap())
    }

    proptest! {
        #[test]
        fn monodromy_fixes_eigenvector(w in arb_primitive(), n in 1u32..=100) {
            let m = monodromy_matrix(&w, n).unwrap();
            prop_assert_eq!(m.apply(&w), w.clone());
            prop_assert_eq!(m.det(), Int::one());
        }

        #[test]
        fn monodromy_power_law(w in arb_primitive(), n in 1u32..=20) {
            let m1 = monodromy_matrix(&w, 1).unwrap();
            let mn = monodromy_matrix(&w, n).unwrap();
            prop_assert_eq!(m1.pow(n as i64), mn.clone());
            // The closed-form application agrees with the matrix.
            let v = lvec(3, -7);
            prop_assert_eq!(monodromy_apply_lat(&w, n as i64, &v), mn.apply(&v));
            prop_assert_eq!(monodromy_apply_lat(&w, -(n as i64), &v), mn.inverse().apply(&v));
        }

        #[test]
        fn wedge_is_unimodular_invariant(
            a in -9i64..=9, b in -9i64..=9, c in -9i64..=9,
            vx in -50i64..=50, vy in -50i64..=50, wx in -50i64..=50, wy in -50i64..=50,
        ) {
            // Build a unimodular map from a shear pair; det = +1 by construction.
            let m = UnimodularMap::from_i64(1, 0, a, 1)
                .mul(&UnimodularMap::from_i64(1, b, 0, 1))
                .mul(&UnimodularMap::from_i64(1, 0, c, 1));
            let v = lvec(vx, vy);
            let w = lvec(wx, wy);
            prop_assert_eq!(wedge(&m.apply(&v), &m.apply(&w)), m.det() * wedge(&v, &w));
        }

        #[test]
        fn affine_length_is_affine_invariant(
            a in -6i64..=6, b in -6i64..=6,
            px in -20i64..=20, py in -20i64..=20,
            qx in -20i64..=20, qy in -20i64..=20,
            tx in -20i64..=20, ty in -20i64..=20,
        ) {
            let m = UnimodularMap::from_i64(1, 0, a, 1).mul(&UnimodularMap::from_i64(1, b, 0, 1));
            let p = rpoint(px, py);
            let q = rpoint(qx, qy);
            let tp = |pt: &RationalPoint| {
                let v = m.apply_rat(&pt.sub(&RationalPoint::origin()));
                RationalPoint::new(v.x + rat(tx), v.y + rat(ty))
            };
            prop_assert_eq!(affine_length(&tp(&p), &tp(&q)), affine_length(&p, &q));
        }
    }
}
