//! Semantic orientation descriptors.
//!
//! Yaw 0 faces north (+X) and yaw 90 faces east (+Y), so turning right
//! increases yaw.

use crate::math::{normalize_degrees, Vec3};

#[derive(Debug, Clone, PartialEq)]
pub enum OrientationDescriptor {
    FaceNorth,
    FaceEast,
    FaceSouth,
    FaceWest,
    FaceCharacter(String),
    TurnLeft(f64),
    TurnRight(f64),
}

impl OrientationDescriptor {
    pub fn parse(raw: &str) -> Result<Self, String> {
        let s = raw.trim();
        let lower = s.to_lowercase();
        let turn = |rest: &str| -> Result<f64, String> {
            let deg: f64 = rest.parse().map_err(|_| format!("'{raw}': turn angle must be a number"))?;
            if !deg.is_finite() {
                return Err(format!("'{raw}': turn angle must be finite"));
            }
            Ok(deg)
        };
        match lower.as_str() {
            "face_north" => return Ok(Self::FaceNorth),
            "face_east" => return Ok(Self::FaceEast),
            "face_south" => return Ok(Self::FaceSouth),
            "face_west" => return Ok(Self::FaceWest),
            _ => {}
        }
        if lower.starts_with("face_character:") {
            let name = s["face_character:".len()..].trim();
            if name.is_empty() {
                return Err(format!("'{raw}': missing character name"));
            }
            return Ok(Self::FaceCharacter(name.to_string()));
        }
        if let Some(rest) = lower.strip_prefix("turn_left_") {
            return turn(rest).map(Self::TurnLeft);
        }
        if let Some(rest) = lower.strip_prefix("turn_right_") {
            return turn(rest).map(Self::TurnRight);
        }
        Err(format!(
            "unknown orientation '{raw}'; use face_north, face_east, face_south, face_west, \
             face_character:<name>, turn_left_<deg> or turn_right_<deg>"
        ))
    }

    /// Resolve to an absolute yaw for a character standing at `location`
    /// with `current_yaw`. `locate` looks up other characters by name.
    pub fn resolve(
        &self,
        location: Vec3,
        current_yaw: f64,
        locate: impl Fn(&str) -> Option<Vec3>,
    ) -> Result<f64, String> {
        let yaw = match self {
            Self::FaceNorth => 0.0,
            Self::FaceEast => 90.0,
            Self::FaceSouth => 180.0,
            Self::FaceWest => -90.0,
            Self::FaceCharacter(name) => {
                let target = locate(name).ok_or_else(|| format!("no character named '{name}' to face"))?;
                yaw_towards(location, target).ok_or_else(|| format!("'{name}' stands at the same spot"))?
            }
            Self::TurnLeft(deg) => current_yaw - deg,
            Self::TurnRight(deg) => current_yaw + deg,
        };
        Ok(normalize_degrees(yaw))
    }
}

/// Yaw in degrees pointing from `from` to `to` on the XY plane, or `None`
/// if they coincide horizontally.
pub fn yaw_towards(from: Vec3, to: Vec3) -> Option<f64> {
    let d = to - from;
    if d.length_xy() < 1e-9 {
        return None;
    }
    Some(d.y.atan2(d.x).to_degrees())
}
