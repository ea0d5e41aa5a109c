//! Vector and rotator primitives for the left-handed, Z-up world.
//!
//! Positions are centimeters, angles are degrees. Cross products use the
//! usual algebraic formula; in this frame `Z x X = +Y` points to the right
//! of an observer looking down +X.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// World up axis.
pub const UP: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn length(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn length_xy(self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Unit vector, or `None` when the length is below `1e-9`.
    pub fn normalized(self) -> Option<Vec3> {
        let len = self.length();
        if len < 1e-9 || !len.is_finite() {
            None
        } else {
            Some(self * (1.0 / len))
        }
    }

    pub fn distance(self, other: Vec3) -> f64 {
        (self - other).length()
    }

    pub fn midpoint(self, other: Vec3) -> Vec3 {
        (self + other) * 0.5
    }

    /// Rodrigues rotation of `self` by `degrees` around the unit `axis`.
    ///
    /// With `axis = UP`, positive angles turn +X toward +Y.
    pub fn rotated(self, degrees: f64, axis: Vec3) -> Vec3 {
        let (sin, cos) = degrees.to_radians().sin_cos();
        self * cos + axis.cross(self) * sin + axis * (axis.dot(self) * (1.0 - cos))
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(v: [f64; 3]) -> Self {
        Vec3::new(v[0], v[1], v[2])
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Wrap an angle in degrees into `(-180, 180]`.
pub fn normalize_degrees(deg: f64) -> f64 {
    let mut d = deg % 360.0;
    if d <= -180.0 {
        d += 360.0;
    } else if d > 180.0 {
        d -= 360.0;
    }
    if d == 0.0 {
        0.0
    } else {
        d
    }
}

/// Pitch/yaw/roll in degrees, each normalized to `(-180, 180]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Rotator {
    pub pitch: f64,
    pub yaw: f64,
    pub roll: f64,
}

impl Rotator {
    pub const ZERO: Rotator = Rotator { pitch: 0.0, yaw: 0.0, roll: 0.0 };

    pub fn new(pitch: f64, yaw: f64, roll: f64) -> Self {
        Self {
            pitch: normalize_degrees(pitch),
            yaw: normalize_degrees(yaw),
            roll: normalize_degrees(roll),
        }
    }

    pub fn from_yaw(yaw: f64) -> Self {
        Self::new(0.0, yaw, 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.pitch.is_finite() && self.yaw.is_finite() && self.roll.is_finite()
    }

    /// Apply this rotation to a local-space vector (roll, then pitch, then yaw).
    pub fn rotate_vector(&self, v: Vec3) -> Vec3 {
        let forward = Vec3::new(1.0, 0.0, 0.0);
        let rolled = v.rotated(-self.roll, forward);
        // Positive pitch lifts +X toward +Z, i.e. a negative turn about +Y.
        let pitched = rolled.rotated(-self.pitch, Vec3::new(0.0, 1.0, 0.0));
        pitched.rotated(self.yaw, UP)
    }

    /// Unit vector along local +X.
    pub fn forward(&self) -> Vec3 {
        self.rotate_vector(Vec3::new(1.0, 0.0, 0.0))
    }
}
