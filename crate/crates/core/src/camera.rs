//! Camera shot templates: position templates that turn two (or one) actor
//! transforms into a camera pose, and movement templates that emit keyframes
//! starting from that pose.
//!
//! Bone positions are synthetic: `root + (0, 0, height)` taken from a
//! [`SkeletonProfile`], since no animation pose is ever evaluated.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::math::{Rotator, Vec3, UP};

const EPS: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CameraError {
    #[error("camera position coincides with its look-at target")]
    CoincidentPoints,
    #[error("actors '{0}' and '{1}' share the same horizontal position")]
    CoincidentActors(String, String),
    #[error("unknown bone '{bone}' on actor '{actor}'")]
    UnknownBone { actor: String, bone: String },
    #[error("rotation axis must be a unit vector")]
    NonUnitAxis,
    #[error("invalid template argument: {0}")]
    InvalidArgument(String),
    #[error("unknown {kind} template '{name}'; available: {available}")]
    UnknownTemplate {
        kind: &'static str,
        name: String,
        available: String,
    },
}

pub type Result<T, E = CameraError> = std::result::Result<T, E>;

/// Bone heights above the character root, in centimeters.
#[derive(Debug, Clone, PartialEq)]
pub struct SkeletonProfile {
    bone_heights: BTreeMap<String, f64>,
}

impl Default for SkeletonProfile {
    fn default() -> Self {
        let mut bone_heights = BTreeMap::new();
        bone_heights.insert("head".to_string(), 160.0);
        bone_heights.insert("spine_03".to_string(), 120.0);
        Self { bone_heights }
    }
}

impl SkeletonProfile {
    /// Set or replace one bone height. Non-positive or non-finite heights
    /// are rejected.
    pub fn with_bone(mut self, bone: &str, height: f64) -> Result<Self> {
        if !height.is_finite() || height <= 0.0 {
            return Err(CameraError::InvalidArgument(format!("bone height for '{bone}' must be > 0")));
        }
        self.bone_heights.insert(bone.to_string(), height);
        Ok(self)
    }

    pub fn height(&self, bone: &str) -> Option<f64> {
        self.bone_heights.get(bone).copied()
    }

    pub fn bones(&self) -> impl Iterator<Item = (&str, f64)> {
        self.bone_heights.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

/// What a template needs to know about one actor.
#[derive(Debug, Clone, PartialEq)]
pub struct ActorRef {
    pub name: String,
    pub location: Vec3,
    pub rotation: Rotator,
    pub skeleton: SkeletonProfile,
}

impl ActorRef {
    pub fn new(name: &str, location: Vec3, rotation: Rotator) -> Self {
        Self {
            name: name.to_string(),
            location,
            rotation,
            skeleton: SkeletonProfile::default(),
        }
    }

    pub fn bone(&self, bone: &str) -> Result<Vec3> {
        let h = self.skeleton.height(bone).ok_or_else(|| CameraError::UnknownBone {
            actor: self.name.clone(),
            bone: bone.to_string(),
        })?;
        Ok(self.location + Vec3::new(0.0, 0.0, h))
    }

    /// Horizontal facing direction from yaw.
    pub fn forward(&self) -> Vec3 {
        Rotator::from_yaw(self.rotation.yaw).forward()
    }

    /// Local right vector. The skeletal mesh sits at a -90 degree yaw offset
    /// from the actor, and its (-1, 0, 0) axis points to the actor's right.
    pub fn right(&self) -> Vec3 {
        Rotator::from_yaw(self.rotation.yaw - 90.0).rotate_vector(Vec3::new(-1.0, 0.0, 0.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CameraPose {
    pub position: Vec3,
    pub rotation: Rotator,
    pub look_target: Vec3,
}

impl CameraPose {
    /// Build a pose aimed at `look_target`; the rotation is always derived.
    pub fn aimed(position: Vec3, look_target: Vec3) -> Result<Self> {
        Ok(Self {
            position,
            rotation: look_at_rotation(position, look_target)?,
            look_target,
        })
    }
}

/// Yaw/pitch toward `target`; roll is always zero.
pub fn look_at_rotation(origin: Vec3, target: Vec3) -> Result<Rotator> {
    let d = target - origin;
    if !d.is_finite() || d.length() < EPS {
        return Err(CameraError::CoincidentPoints);
    }
    let yaw = d.y.atan2(d.x).to_degrees();
    let pitch = d.z.atan2(d.length_xy()).to_degrees();
    Ok(Rotator::new(pitch, yaw, 0.0))
}

pub fn rodrigues_rotate(v: Vec3, theta: f64, axis: Vec3) -> Result<Vec3> {
    if (axis.length() - 1.0).abs() > EPS {
        return Err(CameraError::NonUnitAxis);
    }
    Ok(v.rotated(theta, axis))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OtsVariant {
    Near,
    Mid,
    High,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OtsPreset {
    pub h_off: f64,
    pub d_side: f64,
    pub d_back: f64,
}

impl OtsVariant {
    pub fn name(self) -> &'static str {
        match self {
            OtsVariant::Near => "near",
            OtsVariant::Mid => "mid",
            OtsVariant::High => "high",
        }
    }

    pub fn preset(self) -> OtsPreset {
        match self {
            OtsVariant::Near => OtsPreset { h_off: 40.0, d_side: 100.0, d_back: 140.0 },
            OtsVariant::Mid => OtsPreset { h_off: 50.0, d_side: 230.0, d_back: 200.0 },
            OtsVariant::High => OtsPreset { h_off: 120.0, d_side: 200.0, d_back: 300.0 },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    fn sign(self) -> f64 {
        match self {
            Side::Left => -1.0,
            Side::Right => 1.0,
        }
    }
}

/// Forward and right basis between two actors, in the horizontal plane.
fn pair_basis(from: &ActorRef, to: &ActorRef) -> Result<(Vec3, Vec3)> {
    let d = to.location - from.location;
    let flat = Vec3::new(d.x, d.y, 0.0);
    if flat.length() < EPS {
        return Err(CameraError::CoincidentActors(from.name.clone(), to.name.clone()));
    }
    let f = d.normalized().ok_or_else(|| CameraError::CoincidentActors(from.name.clone(), to.name.clone()))?;
    let r = UP
        .cross(f)
        .normalized()
        .ok_or_else(|| CameraError::CoincidentActors(from.name.clone(), to.name.clone()))?;
    Ok((f, r))
}

pub fn compute_ots(from: &ActorRef, to: &ActorRef, preset: OtsPreset, shoulder_bone: &str) -> Result<CameraPose> {
    let (f, r) = pair_basis(from, to)?;
    let shoulder_from = from.bone(shoulder_bone)?;
    let shoulder_to = to.bone(shoulder_bone)?;
    // Height is taken from the bone's world z, so a raised root is not
    // counted twice.
    let position = from.location - f * preset.d_back
        + r * preset.d_side
        + Vec3::new(0.0, 0.0, shoulder_from.z - from.location.z + preset.h_off);
    CameraPose::aimed(position, shoulder_from.midpoint(shoulder_to))
}

pub fn compute_pov(
    from: &ActorRef,
    to: &ActorRef,
    head_bone: &str,
    forward_offset: f64,
    side_offset: f64,
) -> Result<CameraPose> {
    let (f, r) = pair_basis(from, to)?;
    let position = from.bone(head_bone)? + f * forward_offset + r * side_offset;
    CameraPose::aimed(position, to.bone(head_bone)?)
}

pub fn compute_on_axis(from: &ActorRef, to: &ActorRef, head_bone: &str) -> Result<CameraPose> {
    let head_from = from.bone(head_bone)?;
    let head_to = to.bone(head_bone)?;
    if head_from.distance(head_to) < EPS {
        return Err(CameraError::CoincidentActors(from.name.clone(), to.name.clone()));
    }
    CameraPose::aimed(head_from.midpoint(head_to), head_to)
}

pub fn compute_side_profile(actor: &ActorRef, side: Side, side_distance: f64, bone: &str) -> Result<CameraPose> {
    let anchor = actor.bone(bone)?;
    let position = anchor + actor.right() * (side.sign() * side_distance);
    CameraPose::aimed(position, anchor)
}

pub fn compute_establishing(
    a1: &ActorRef,
    a2: &ActorRef,
    side: Side,
    distance: f64,
    height_offset: f64,
) -> Result<CameraPose> {
    let lift = Vec3::new(0.0, 0.0, height_offset);
    let m = a1.location.midpoint(a2.location);
    let d = a2.location - a1.location;
    let r = match UP.cross(d).normalized() {
        Some(r) => r,
        None if distance.abs() < EPS => Vec3::ZERO,
        None => return Err(CameraError::CoincidentActors(a1.name.clone(), a2.name.clone())),
    };
    let position = m + r * (side.sign() * distance) + lift;
    CameraPose::aimed(position, m + lift)
}

/// Spherical placement around one actor. `yaw` is measured from the actor's
/// front, `pitch > 0` raises the camera.
pub fn compute_generic_focus(
    actor: &ActorRef,
    distance: f64,
    pitch: f64,
    yaw: f64,
    bone: Option<&str>,
) -> Result<CameraPose> {
    let target = match bone {
        Some(b) => actor.bone(b)?,
        None => actor.location,
    };
    let d0 = actor.forward();
    let d1 = d0.rotated(yaw, UP);
    let r1 = UP.cross(d1).normalized().ok_or(CameraError::CoincidentPoints)?;
    let d2 = d1.rotated(-pitch, r1);
    CameraPose::aimed(target + d2 * distance, target)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Interp {
    Linear,
    Constant,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MovementKeyframe {
    pub time: f64,
    pub position: Vec3,
    pub rotation: Rotator,
    pub interp: Interp,
}

fn check_timing(start: f64, duration: f64) -> Result<()> {
    if !start.is_finite() || start < 0.0 {
        return Err(CameraError::InvalidArgument("start_time must be >= 0".into()));
    }
    if !duration.is_finite() || duration <= 0.0 {
        return Err(CameraError::InvalidArgument("duration must be > 0".into()));
    }
    Ok(())
}

pub fn gen_dolly_keyframes(pose: &CameraPose, ratio: f64, start: f64, duration: f64) -> Result<Vec<MovementKeyframe>> {
    check_timing(start, duration)?;
    if !ratio.is_finite() || ratio <= 0.0 {
        return Err(CameraError::InvalidArgument("ratio must be > 0".into()));
    }
    let end = pose.look_target + (pose.position - pose.look_target) * ratio;
    Ok(vec![
        MovementKeyframe {
            time: start,
            position: pose.position,
            rotation: pose.rotation,
            interp: Interp::Linear,
        },
        MovementKeyframe {
            time: start + duration,
            position: end,
            rotation: look_at_rotation(end, pose.look_target)?,
            interp: Interp::Constant,
        },
    ])
}

/// Number of orbit steps for a duration at the given frame rate.
pub fn orbit_steps(duration: f64, frame_rate: u32) -> usize {
    (duration * frame_rate as f64 + 1e-9).floor().max(0.0) as usize
}

/// Orbit about the look target on the horizontal plane. Emits the initial
/// pose plus one key per step (N + 1 keys), the last one `Constant`.
pub fn gen_orbit_keyframes(
    pose: &CameraPose,
    angle: f64,
    clockwise: bool,
    start: f64,
    duration: f64,
    frame_rate: u32,
) -> Result<Vec<MovementKeyframe>> {
    check_timing(start, duration)?;
    if !angle.is_finite() {
        return Err(CameraError::InvalidArgument("angle must be finite".into()));
    }
    let n = orbit_steps(duration, frame_rate);
    if n == 0 {
        return Err(CameraError::InvalidArgument(format!(
            "duration {duration}s is shorter than one frame at {frame_rate} fps"
        )));
    }
    let total = if clockwise { angle } else { -angle };
    let r0 = pose.position - pose.look_target;
    let mut keys = Vec::with_capacity(n + 1);
    keys.push(MovementKeyframe {
        time: start,
        position: pose.position,
        rotation: pose.rotation,
        interp: Interp::Linear,
    });
    for i in 1..=n {
        let frac = i as f64 / n as f64;
        let p = pose.look_target + r0.rotated(total * frac, UP);
        keys.push(MovementKeyframe {
            time: start + duration * frac,
            position: p,
            rotation: look_at_rotation(p, pose.look_target)?,
            interp: if i == n { Interp::Constant } else { Interp::Linear },
        });
    }
    Ok(keys)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PositionTemplate {
    #[serde(rename = "OTS")]
    Ots,
    #[serde(rename = "POV")]
    Pov,
    OnAxis,
    SideProfile,
    Establishing,
    GenericFocus,
}

impl PositionTemplate {
    pub const ALL: [PositionTemplate; 6] = [
        PositionTemplate::Ots,
        PositionTemplate::Pov,
        PositionTemplate::OnAxis,
        PositionTemplate::SideProfile,
        PositionTemplate::Establishing,
        PositionTemplate::GenericFocus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PositionTemplate::Ots => "OTS",
            PositionTemplate::Pov => "POV",
            PositionTemplate::OnAxis => "OnAxis",
            PositionTemplate::SideProfile => "SideProfile",
            PositionTemplate::Establishing => "Establishing",
            PositionTemplate::GenericFocus => "GenericFocus",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|t| t.name() == name).ok_or_else(|| CameraError::UnknownTemplate {
            kind: "position",
            name: name.to_string(),
            available: Self::ALL.map(|t| t.name()).join(", "),
        })
    }
}

impl fmt::Display for PositionTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MovementTemplate {
    Dolly,
    Orbit,
}

impl MovementTemplate {
    pub const ALL: [MovementTemplate; 2] = [MovementTemplate::Dolly, MovementTemplate::Orbit];

    pub fn name(self) -> &'static str {
        match self {
            MovementTemplate::Dolly => "Dolly",
            MovementTemplate::Orbit => "Orbit",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|t| t.name() == name).ok_or_else(|| CameraError::UnknownTemplate {
            kind: "movement",
            name: name.to_string(),
            available: Self::ALL.map(|t| t.name()).join(", "),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OtsArgs {
    pub from_actor_name: String,
    pub to_actor_name: String,
    #[serde(default = "default_variant")]
    pub variant: OtsVariant,
    #[serde(default = "default_head")]
    pub shoulder_bone_name: String,
    pub shoulder_height_offset: Option<f64>,
    pub shoulder_side_offset: Option<f64>,
    pub distance_back: Option<f64>,
}

impl OtsArgs {
    pub fn preset(&self) -> OtsPreset {
        let base = self.variant.preset();
        OtsPreset {
            h_off: self.shoulder_height_offset.unwrap_or(base.h_off),
            d_side: self.shoulder_side_offset.unwrap_or(base.d_side),
            d_back: self.distance_back.unwrap_or(base.d_back),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PovArgs {
    pub from_actor_name: String,
    pub to_actor_name: String,
    #[serde(default = "default_head")]
    pub head_bone_name: String,
    #[serde(default = "default_pov_forward")]
    pub forward_offset: f64,
    #[serde(default = "default_pov_side")]
    pub side_offset: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OnAxisArgs {
    pub from_actor_name: String,
    pub to_actor_name: String,
    #[serde(default = "default_head")]
    pub head_bone_name: String,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SideProfileArgs {
    pub actor_name: String,
    #[serde(default = "default_left")]
    pub side: Side,
    #[serde(default = "default_300")]
    pub side_distance: f64,
    #[serde(default = "default_spine")]
    pub bone_name: String,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstablishingArgs {
    pub actor1_name: String,
    pub actor2_name: String,
    #[serde(default = "default_right")]
    pub side: Side,
    #[serde(default = "default_300")]
    pub distance: f64,
    #[serde(default = "default_150")]
    pub height_offset: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenericFocusArgs {
    pub actor_name: String,
    #[serde(default = "default_300")]
    pub distance: f64,
    #[serde(default)]
    pub pitch: f64,
    #[serde(default)]
    pub yaw: f64,
    pub bone_name: Option<String>,
}

fn default_variant() -> OtsVariant {
    OtsVariant::Mid
}
fn default_head() -> String {
    "head".to_string()
}
fn default_spine() -> String {
    "spine_03".to_string()
}
fn default_pov_forward() -> f64 {
    -20.0
}
fn default_pov_side() -> f64 {
    50.0
}
fn default_300() -> f64 {
    300.0
}
fn default_150() -> f64 {
    150.0
}
fn default_left() -> Side {
    Side::Left
}
fn default_right() -> Side {
    Side::Right
}

/// Parsed position-template arguments.
#[derive(Debug, Clone, PartialEq)]
pub enum PositionSpec {
    Ots(OtsArgs),
    Pov(PovArgs),
    OnAxis(OnAxisArgs),
    SideProfile(SideProfileArgs),
    Establishing(EstablishingArgs),
    GenericFocus(GenericFocusArgs),
}

fn parse_args<T: serde::de::DeserializeOwned>(template: &str, args: &Value) -> Result<T> {
    let args = if args.is_null() { json!({}) } else { args.clone() };
    serde_json::from_value(args).map_err(|e| CameraError::InvalidArgument(format!("{template}: {e}")))
}

impl PositionSpec {
    pub fn parse(template: PositionTemplate, args: &Value) -> Result<Self> {
        let name = template.name();
        Ok(match template {
            PositionTemplate::Ots => PositionSpec::Ots(parse_args(name, args)?),
            PositionTemplate::Pov => PositionSpec::Pov(parse_args(name, args)?),
            PositionTemplate::OnAxis => PositionSpec::OnAxis(parse_args(name, args)?),
            PositionTemplate::SideProfile => PositionSpec::SideProfile(parse_args(name, args)?),
            PositionTemplate::Establishing => PositionSpec::Establishing(parse_args(name, args)?),
            PositionTemplate::GenericFocus => PositionSpec::GenericFocus(parse_args(name, args)?),
        })
    }

    /// Actor names referenced by the arguments, in argument order.
    pub fn actor_names(&self) -> Vec<&str> {
        match self {
            PositionSpec::Ots(a) => vec![&a.from_actor_name, &a.to_actor_name],
            PositionSpec::Pov(a) => vec![&a.from_actor_name, &a.to_actor_name],
            PositionSpec::OnAxis(a) => vec![&a.from_actor_name, &a.to_actor_name],
            PositionSpec::SideProfile(a) => vec![&a.actor_name],
            PositionSpec::Establishing(a) => vec![&a.actor1_name, &a.actor2_name],
            PositionSpec::GenericFocus(a) => vec![&a.actor_name],
        }
    }

    /// Compute the pose. `actors` must line up with [`Self::actor_names`].
    pub fn compute(&self, actors: &[ActorRef]) -> Result<CameraPose> {
        let need = self.actor_names().len();
        if actors.len() != need {
            return Err(CameraError::InvalidArgument(format!("expected {need} actors, got {}", actors.len())));
        }
        match self {
            PositionSpec::Ots(a) => compute_ots(&actors[0], &actors[1], a.preset(), &a.shoulder_bone_name),
            PositionSpec::Pov(a) => {
                compute_pov(&actors[0], &actors[1], &a.head_bone_name, a.forward_offset, a.side_offset)
            }
            PositionSpec::OnAxis(a) => compute_on_axis(&actors[0], &actors[1], &a.head_bone_name),
            PositionSpec::SideProfile(a) => compute_side_profile(&actors[0], a.side, a.side_distance, &a.bone_name),
            PositionSpec::Establishing(a) => {
                compute_establishing(&actors[0], &actors[1], a.side, a.distance, a.height_offset)
            }
            PositionSpec::GenericFocus(a) => {
                compute_generic_focus(&actors[0], a.distance, a.pitch, a.yaw, a.bone_name.as_deref())
            }
        }
    }

    /// Short shot description stored as sequence metadata.
    pub fn describe(&self) -> String {
        match self {
            PositionSpec::Ots(a) => format!(
                "OTS shot from {} to {} ({} variant)",
                a.from_actor_name,
                a.to_actor_name,
                a.variant.name()
            ),
            PositionSpec::Pov(a) => format!("POV shot from {} toward {}", a.from_actor_name, a.to_actor_name),
            PositionSpec::OnAxis(a) => format!("On-axis shot from {} onto {}", a.from_actor_name, a.to_actor_name),
            PositionSpec::SideProfile(a) => {
                format!("Side profile of {} from the {}", a.actor_name, side_name(a.side))
            }
            PositionSpec::Establishing(a) => format!(
                "Establishing shot of {} and {} from the {}",
                a.actor1_name,
                a.actor2_name,
                side_name(a.side)
            ),
            PositionSpec::GenericFocus(a) => format!(
                "Focus on {} (distance {}, pitch {}, yaw {})",
                a.actor_name, a.distance, a.pitch, a.yaw
            ),
        }
    }
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Left => "left",
        Side::Right => "right",
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DollyArgs {
    #[serde(default = "default_ratio")]
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitArgs {
    #[serde(default = "default_angle")]
    pub angle: f64,
    #[serde(default = "default_true")]
    pub clockwise: bool,
}

fn default_ratio() -> f64 {
    0.8
}
fn default_angle() -> f64 {
    45.0
}
fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq)]
pub enum MovementSpec {
    Dolly(DollyArgs),
    Orbit(OrbitArgs),
}

impl MovementSpec {
    pub fn parse(template: MovementTemplate, args: &Value) -> Result<Self> {
        let name = template.name();
        Ok(match template {
            MovementTemplate::Dolly => MovementSpec::Dolly(parse_args(name, args)?),
            MovementTemplate::Orbit => MovementSpec::Orbit(parse_args(name, args)?),
        })
    }

    pub fn keyframes(&self, pose: &CameraPose, start: f64, duration: f64, frame_rate: u32) -> Result<Vec<MovementKeyframe>> {
        match self {
            MovementSpec::Dolly(a) => gen_dolly_keyframes(pose, a.ratio, start, duration),
            MovementSpec::Orbit(a) => gen_orbit_keyframes(pose, a.angle, a.clockwise, start, duration, frame_rate),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            MovementSpec::Dolly(a) if a.ratio < 1.0 => format!("dolly push-in (ratio {})", a.ratio),
            MovementSpec::Dolly(a) => format!("dolly pull-out (ratio {})", a.ratio),
            MovementSpec::Orbit(a) => format!(
                "orbit {} degrees {}",
                a.angle,
                if a.clockwise { "clockwise" } else { "counter-clockwise" }
            ),
        }
    }
}

fn param(name: &str, ty: &str, default: Value, description: &str) -> Value {
    json!({"name": name, "type": ty, "default": default, "required": default.is_null(), "description": description})
}

/// Structured catalog of every position and movement template with its
/// parameters.
pub fn template_catalog() -> Value {
    let from = param("from_actor_name", "str", Value::Null, "Actor the shot is taken from");
    let to = param("to_actor_name", "str", Value::Null, "Actor the camera focuses on");
    let positions = json!([
        {
            "name": "OTS",
            "description": "Over-the-shoulder framing: camera behind the from-actor's shoulder, focused on the to-actor.",
            "actors": 2,
            "parameters": [
                from, to,
                param("variant", "near|mid|high", json!("mid"), "Preset offsets: near (40,100,140), mid (50,230,200), high (120,200,300) as (height, side, back)"),
                param("shoulder_bone_name", "str", json!("head"), "Bone used as shoulder height reference"),
                param("shoulder_height_offset", "float", json!("auto"), "Height above the bone; overrides the variant"),
                param("shoulder_side_offset", "float", json!("auto"), "Lateral offset; overrides the variant"),
                param("distance_back", "float", json!("auto"), "Distance behind the from-actor; overrides the variant"),
            ]
        },
        {
            "name": "POV",
            "description": "Near point-of-view: camera at the from-actor's head looking at the to-actor's head.",
            "actors": 2,
            "parameters": [
                from, to,
                param("head_bone_name", "str", json!("head"), "Head bone"),
                param("forward_offset", "float", json!(-20.0), "Offset along the from->to axis (negative = behind the head)"),
                param("side_offset", "float", json!(50.0), "Lateral offset from the axis"),
            ]
        },
        {
            "name": "OnAxis",
            "description": "Camera halfway between both heads, looking straight at the to-actor.",
            "actors": 2,
            "parameters": [from, to, param("head_bone_name", "str", json!("head"), "Head bone")]
        },
        {
            "name": "SideProfile",
            "description": "Camera perpendicular to one actor's facing direction.",
            "actors": 1,
            "parameters": [
                param("actor_name", "str", Value::Null, "Actor to frame"),
                param("side", "left|right", json!("left"), "Which side of the actor"),
                param("side_distance", "float", json!(300.0), "Distance from the actor"),
                param("bone_name", "str", json!("spine_03"), "Bone used for camera height and aim"),
            ]
        },
        {
            "name": "Establishing",
            "description": "Wide shot of two actors from one side of the line between them.",
            "actors": 2,
            "parameters": [
                param("actor1_name", "str", Value::Null, "First actor"),
                param("actor2_name", "str", Value::Null, "Second actor"),
                param("side", "left|right", json!("right"), "Side relative to the actor1->actor2 direction"),
                param("distance", "float", json!(300.0), "Distance from the midpoint"),
                param("height_offset", "float", json!(150.0), "Camera and aim height above the midpoint"),
            ]
        },
        {
            "name": "GenericFocus",
            "description": "Spherical placement around one actor relative to its facing direction.",
            "actors": 1,
            "parameters": [
                param("actor_name", "str", Value::Null, "Actor to frame"),
                param("distance", "float", json!(300.0), "Camera-to-target distance"),
                param("pitch", "float", json!(0.0), "Elevation angle; positive looks down from above"),
                param("yaw", "float", json!(0.0), "Angle from the actor's front: 0 front, 90 side, 180 back"),
                param("bone_name", "str", json!("none"), "Optional bone to aim at instead of the actor root"),
            ]
        }
    ]);
    let movements = json!([
        {
            "name": "Dolly",
            "description": "Move toward or away from the look target; two keys.",
            "parameters": [param("ratio", "float", json!(0.8), "Distance scale: < 1 pushes in, > 1 pulls out")]
        },
        {
            "name": "Orbit",
            "description": "Arc around the look target on the horizontal plane; one key per frame.",
            "parameters": [
                param("angle", "float", json!(45.0), "Total rotation in degrees"),
                param("clockwise", "bool", json!(true), "Rotation direction"),
            ]
        }
    ]);
    json!({"position_templates": positions, "movement_templates": movements})
}
