use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

use serde::{Deserialize, Serialize};

/// An angle `k·π/4` with `k` reduced mod 8.
///
/// All protocol angles (pre-rotations, computational angles, the angles sent
/// over the wire) live in this eight-element group, so arithmetic is exact.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "u8", into = "u8")]
pub struct Angle8(u8);

impl Angle8 {
    pub const ZERO: Angle8 = Angle8(0);
    pub const PI_4: Angle8 = Angle8(1);
    pub const PI_2: Angle8 = Angle8(2);
    pub const PI: Angle8 = Angle8(4);

    pub const fn new(k: u8) -> Self {
        Angle8(k & 7)
    }

    pub fn from_k(k: i64) -> Self {
        Angle8(k.rem_euclid(8) as u8)
    }

    pub const fn k(self) -> u8 {
        self.0
    }

    pub fn radians(self) -> f64 {
        f64::from(self.0) * FRAC_PI_4
    }

    /// `π` if `bit` is set, zero otherwise.
    pub const fn pi_times(bit: u8) -> Self {
        Angle8((bit & 1) * 4)
    }

    /// `(-1)^bit · self`.
    pub fn signed(self, bit: u8) -> Self {
        if bit & 1 == 1 {
            -self
        } else {
            self
        }
    }

    /// Iterator over the eight angles in increasing `k`.
    pub fn all() -> impl Iterator<Item = Angle8> + Clone {
        (0..8).map(Angle8)
    }
}

impl From<u8> for Angle8 {
    fn from(k: u8) -> Self {
        Angle8::new(k)
    }
}

impl From<Angle8> for u8 {
    fn from(a: Angle8) -> u8 {
        a.0
    }
}

impl Add for Angle8 {
    type Output = Angle8;
    fn add(self, rhs: Angle8) -> Angle8 {
        Angle8((self.0 + rhs.0) & 7)
    }
}

impl AddAssign for Angle8 {
    fn add_assign(&mut self, rhs: Angle8) {
        *self = *self + rhs;
    }
}

impl Neg for Angle8 {
    type Output = Angle8;
    fn neg(self) -> Angle8 {
        Angle8((8 - self.0) & 7)
    }
}

impl Sub for Angle8 {
    type Output = Angle8;
    fn sub(self, rhs: Angle8) -> Angle8 {
        self + (-rhs)
    }
}

impl fmt::Display for Angle8 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            0 => write!(f, "0"),
            4 => write!(f, "π"),
            k => write!(f, "{k}π/4"),
        }
    }
}

/// `angle_add` in operation form.
pub fn angle_add(a: Angle8, b: Angle8) -> Angle8 {
    a + b
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(angle_add(Angle8::new(2), Angle8::new(6)), Angle8::ZERO);
        assert_eq!(angle_add(Angle8::new(1), Angle8::PI), Angle8::new(5));
        // φ' = 3π/4, θ = π/2, r = 1
        let delta = Angle8::new(3) + Angle8::new(2) + Angle8::pi_times(1);
        assert_eq!(delta, Angle8::new(1));
    }

    #[test]
    fn reduction_and_sign() {
        assert_eq!(Angle8::new(9), Angle8::new(1));
        assert_eq!(Angle8::from_k(-1), Angle8::new(7));
        assert_eq!(Angle8::new(1).signed(1), Angle8::new(7));
        assert_eq!(Angle8::new(4).signed(1), Angle8::PI);
        assert_eq!(Angle8::new(3) - Angle8::new(5), Angle8::new(6));
    }

    #[test]
    fn serializes_as_integer() {
        assert_eq!(serde_json::to_string(&Angle8::new(5)).unwrap(), "5");
        let a: Angle8 = serde_json::from_str("13").unwrap();
        assert_eq!(a, Angle8::new(5));
    }

    proptest! {
        #[test]
        fn add_is_commutative_with_identity(a in 0u8..8, b in 0u8..8) {
            let (a, b) = (Angle8::new(a), Angle8::new(b));
            prop_assert_eq!(a + b, b + a);
            prop_assert_eq!(a + Angle8::ZERO, a);
            prop_assert_eq!(a + (-a), Angle8::ZERO);
        }
    }
}
