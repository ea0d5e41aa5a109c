//! Reference camera math on plain arrays and 3x3 rotation matrices, checked
//! against the template functions.
#![allow(dead_code)]

use cutscene_core::camera::{
    compute_establishing, compute_generic_focus, compute_on_axis, compute_ots, compute_pov, compute_side_profile,
    gen_dolly_keyframes, gen_orbit_keyframes, orbit_steps, ActorRef, CameraPose, Interp, MovementKeyframe, OtsPreset,
    OtsVariant, Side,
};
use cutscene_core::math::{Rotator, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type V = [f64; 3];
type M = [[f64; 3]; 3];

pub const POS_TOL: f64 = 1e-6;
pub const DEG_TOL: f64 = 1e-6;

const Z: V = [0.0, 0.0, 1.0];
const X: V = [1.0, 0.0, 0.0];
const Y: V = [0.0, 1.0, 0.0];

fn add(a: V, b: V) -> V {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn sub(a: V, b: V) -> V {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn scale(a: V, s: f64) -> V {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn dot(a: V, b: V) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: V, b: V) -> V {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn norm(a: V) -> f64 {
    dot(a, a).sqrt()
}

fn unit(a: V) -> V {
    scale(a, 1.0 / norm(a))
}

fn mid(a: V, b: V) -> V {
    scale(add(a, b), 0.5)
}

/// R = I + sin(t) K + (1 - cos(t)) K^2 for unit axis k.
fn rotation_matrix(axis: V, degrees: f64) -> M {
    let (s, c) = degrees.to_radians().sin_cos();
    let k: M = [[0.0, -axis[2], axis[1]], [axis[2], 0.0, -axis[0]], [-axis[1], axis[0], 0.0]];
    let mut k2 = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            k2[i][j] = (0..3).map(|n| k[i][n] * k[n][j]).sum();
        }
    }
    let mut r = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let id = if i == j { 1.0 } else { 0.0 };
            r[i][j] = id + s * k[i][j] + (1.0 - c) * k2[i][j];
        }
    }
    r
}

fn apply(m: M, v: V) -> V {
    [dot(m[0], v), dot(m[1], v), dot(m[2], v)]
}

fn arr(v: Vec3) -> V {
    v.to_array()
}

/// (pitch, yaw) in degrees looking from `from` toward `to`.
fn look_at(from: V, to: V) -> (f64, f64) {
    let d = sub(to, from);
    let pitch = (d[2] / norm(d)).asin().to_degrees();
    let yaw = d[1].atan2(d[0]).to_degrees();
    (pitch, yaw)
}

fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(360.0);
    d.min(360.0 - d)
}

fn close(label: &str, got: V, want: V) -> Result<(), String> {
    let err = norm(sub(got, want));
    if err <= POS_TOL {
        Ok(())
    } else {
        Err(format!("{label}: got {got:?}, oracle {want:?} (off by {err:e})"))
    }
}

fn check_rotation(label: &str, got: Rotator, from: V, to: V) -> Result<(), String> {
    let (pitch, yaw) = look_at(from, to);
    let d = sub(to, from);
    let flat = (d[0] * d[0] + d[1] * d[1]).sqrt();
    let yaw_ok = flat < 1e-6 * norm(d) || angle_gap(got.yaw, yaw) <= DEG_TOL;
    if angle_gap(got.pitch, pitch) <= DEG_TOL && yaw_ok && angle_gap(got.roll, 0.0) <= DEG_TOL {
        Ok(())
    } else {
        Err(format!("{label}: rotation {got:?}, oracle pitch {pitch} yaw {yaw}"))
    }
}

fn check_pose(label: &str, pose: &CameraPose, position: V, target: V) -> Result<(), String> {
    close(&format!("{label} position"), arr(pose.position), position)?;
    close(&format!("{label} target"), arr(pose.look_target), target)?;
    check_rotation(label, pose.rotation, position, target)
}

struct Actor {
    loc: V,
    yaw: f64,
    head: f64,
    spine: f64,
    shoulder: f64,
}

impl Actor {
    fn random(rng: &mut ChaCha8Rng) -> Self {
        Actor {
            loc: [rng.gen_range(-1500.0..1500.0), rng.gen_range(-1500.0..1500.0), rng.gen_range(-100.0..100.0)],
            yaw: rng.gen_range(-180.0..180.0),
            head: rng.gen_range(140.0..190.0),
            spine: rng.gen_range(90.0..140.0),
            shoulder: rng.gen_range(120.0..160.0),
        }
    }

    fn bone(&self, name: &str) -> V {
        let h = match name {
            "head" => self.head,
            "spine_03" => self.spine,
            _ => self.shoulder,
        };
        add(self.loc, [0.0, 0.0, h])
    }

    fn forward(&self) -> V {
        apply(rotation_matrix(Z, self.yaw), X)
    }

    fn right(&self) -> V {
        apply(rotation_matrix(Z, self.yaw), Y)
    }

    fn actor_ref(&self, name: &str) -> ActorRef {
        let mut a = ActorRef::new(name, Vec3::from(self.loc), Rotator::from_yaw(self.yaw));
        a.skeleton = a
            .skeleton
            .with_bone("head", self.head)
            .and_then(|s| s.with_bone("spine_03", self.spine))
            .and_then(|s| s.with_bone("clavicle_r", self.shoulder))
            .unwrap();
        a
    }
}

fn random_pair(rng: &mut ChaCha8Rng) -> (Actor, Actor) {
    let a = Actor::random(rng);
    loop {
        let b = Actor::random(rng);
        let d = sub(b.loc, a.loc);
        if (d[0] * d[0] + d[1] * d[1]).sqrt() > 50.0 {
            return (a, b);
        }
    }
}

fn random_side(rng: &mut ChaCha8Rng) -> (Side, f64) {
    if rng.gen_bool(0.5) {
        (Side::Left, -1.0)
    } else {
        (Side::Right, 1.0)
    }
}

/// Horizontal forward and right between two actors.
fn pair_frame(from: &Actor, to: &Actor) -> (V, V) {
    let f = unit(sub(to.loc, from.loc));
    (f, unit(cross(Z, f)))
}

fn check_one(rng: &mut ChaCha8Rng, case: usize) -> Result<(), String> {
    let (a, b) = random_pair(rng);
    let (ra, rb) = (a.actor_ref("A"), b.actor_ref("B"));
    let err = |e: cutscene_core::camera::CameraError| format!("case {case}: {e}");

    // OTS, with a random preset or one of the named ones.
    let preset = match rng.gen_range(0..4) {
        0 => OtsVariant::Near.preset(),
        1 => OtsVariant::Mid.preset(),
        2 => OtsVariant::High.preset(),
        _ => OtsPreset {
            h_off: rng.gen_range(-50.0..200.0),
            d_side: rng.gen_range(-300.0..300.0),
            d_back: rng.gen_range(0.0..500.0),
        },
    };
    let bone = ["head", "spine_03", "clavicle_r"][rng.gen_range(0..3)];
    let (f, r) = pair_frame(&a, &b);
    let want = add(
        add(sub(a.loc, scale(f, preset.d_back)), scale(r, preset.d_side)),
        [0.0, 0.0, a.bone(bone)[2] - a.loc[2] + preset.h_off],
    );
    let pose = compute_ots(&ra, &rb, preset, bone).map_err(err)?;
    check_pose(&format!("case {case} OTS"), &pose, want, mid(a.bone(bone), b.bone(bone)))?;

    // POV
    let (fwd, side) = (rng.gen_range(-50.0..80.0), rng.gen_range(-60.0..60.0));
    let pose = compute_pov(&ra, &rb, "head", fwd, side).map_err(err)?;
    let want = add(add(a.bone("head"), scale(f, fwd)), scale(r, side));
    check_pose(&format!("case {case} POV"), &pose, want, b.bone("head"))?;

    // OnAxis
    let pose = compute_on_axis(&ra, &rb, "head").map_err(err)?;
    check_pose(&format!("case {case} OnAxis"), &pose, mid(a.bone("head"), b.bone("head")), b.bone("head"))?;

    // SideProfile
    let (side, sign) = random_side(rng);
    let dist = rng.gen_range(20.0..600.0);
    let bone = ["head", "spine_03"][rng.gen_range(0..2)];
    let pose = compute_side_profile(&ra, side, dist, bone).map_err(err)?;
    let want = add(a.bone(bone), scale(a.right(), sign * dist));
    check_pose(&format!("case {case} SideProfile"), &pose, want, a.bone(bone))?;

    // Establishing
    let (side, sign) = random_side(rng);
    let (dist, lift) = (rng.gen_range(100.0..1500.0), rng.gen_range(-100.0..600.0));
    let pose = compute_establishing(&ra, &rb, side, dist, lift).map_err(err)?;
    let m = mid(a.loc, b.loc);
    let across = unit(cross(Z, sub(b.loc, a.loc)));
    let want = add(add(m, scale(across, sign * dist)), [0.0, 0.0, lift]);
    check_pose(&format!("case {case} Establishing"), &pose, want, add(m, [0.0, 0.0, lift]))?;

    // GenericFocus: spherical coordinates around the actor's facing.
    let (dist, pitch, yaw) = (rng.gen_range(50.0..1000.0), rng.gen_range(-80.0..80.0), rng.gen_range(-180.0..180.0));
    let bone = if rng.gen_bool(0.5) { Some("head") } else { None };
    let target = bone.map_or(a.loc, |n| a.bone(n));
    let heading = apply(rotation_matrix(Z, yaw), a.forward());
    let axis = unit(cross(heading, Z));
    let dir = apply(rotation_matrix(axis, pitch), heading);
    let pose = compute_generic_focus(&ra, dist, pitch, yaw, bone).map_err(err)?;
    check_pose(&format!("case {case} GenericFocus"), &pose, add(target, scale(dir, dist)), target)?;

    // Dolly from that pose.
    let ratio = rng.gen_range(0.1..3.0);
    let (start, duration) = (rng.gen_range(0.0..20.0), rng.gen_range(0.2..8.0));
    let keys = gen_dolly_keyframes(&pose, ratio, start, duration).map_err(err)?;
    let p0 = arr(pose.position);
    let p1 = add(target, scale(sub(p0, target), ratio));
    check_keys(&format!("case {case} Dolly"), &keys, &[(start, p0), (start + duration, p1)], target)?;

    // Orbit: rotate the offset about the vertical through the target.
    let angle = rng.gen_range(-400.0..400.0);
    let clockwise = rng.gen_bool(0.5);
    let duration = rng.gen_range(0.1..3.0);
    let fps = [24, 30, 60][rng.gen_range(0..3)];
    let keys = gen_orbit_keyframes(&pose, angle, clockwise, start, duration, fps).map_err(err)?;
    let n = (duration * fps as f64 + 1e-9).floor() as usize;
    let total = if clockwise { angle } else { -angle };
    let offset = sub(p0, target);
    let expected: Vec<(f64, V)> = (0..=n)
        .map(|i| {
            let frac = i as f64 / n as f64;
            (start + duration * frac, add(target, apply(rotation_matrix(Z, total * frac), offset)))
        })
        .collect();
    check_keys(&format!("case {case} Orbit"), &keys, &expected, target)
}

fn check_keys(label: &str, keys: &[MovementKeyframe], expected: &[(f64, V)], target: V) -> Result<(), String> {
    if keys.len() != expected.len() {
        return Err(format!("{label}: {} keys, oracle {}", keys.len(), expected.len()));
    }
    for (i, (key, (time, pos))) in keys.iter().zip(expected).enumerate() {
        if (key.time - time).abs() > 1e-9 {
            return Err(format!("{label} key {i}: time {} vs {time}", key.time));
        }
        close(&format!("{label} key {i}"), arr(key.position), *pos)?;
        check_rotation(&format!("{label} key {i}"), key.rotation, *pos, target)?;
        let want = if i + 1 == keys.len() { Interp::Constant } else { Interp::Linear };
        if key.interp != want {
            return Err(format!("{label} key {i}: interp {:?}", key.interp));
        }
    }
    Ok(())
}

/// All position and movement templates against the oracle on `cases`
/// random configurations.
pub fn check_templates(seed: u64, cases: usize) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..cases).try_for_each(|case| check_one(&mut rng, case))
}

pub fn check_ots_presets() -> Result<(), String> {
    let table = [
        (OtsVariant::Near, (40.0, 100.0, 140.0)),
        (OtsVariant::Mid, (50.0, 230.0, 200.0)),
        (OtsVariant::High, (120.0, 200.0, 300.0)),
    ];
    for (variant, (h_off, d_side, d_back)) in table {
        let p = variant.preset();
        if (p.h_off, p.d_side, p.d_back) != (h_off, d_side, d_back) {
            return Err(format!("{} preset is {p:?}", variant.name()));
        }
    }
    Ok(())
}

fn sample_pose() -> CameraPose {
    CameraPose::aimed(Vec3::new(320.0, -140.0, 210.0), Vec3::new(15.0, 40.0, 150.0)).unwrap()
}

pub fn check_movement_invariants() -> Result<(), String> {
    let pose = sample_pose();
    let target = arr(pose.look_target);
    let keys = gen_dolly_keyframes(&pose, 1.0, 2.0, 3.0).map_err(|e| e.to_string())?;
    for k in &keys {
        close("dolly ratio 1", arr(k.position), arr(pose.position))?;
        check_rotation("dolly ratio 1", k.rotation, arr(pose.position), target)?;
    }

    for clockwise in [true, false] {
        let keys = gen_orbit_keyframes(&pose, 360.0, clockwise, 0.0, 2.0, 30).map_err(|e| e.to_string())?;
        close("orbit 360 closes", arr(keys.last().unwrap().position), arr(pose.position))?;
    }

    let radius = norm(sub(arr(pose.position), target));
    let flat = |p: V| ((p[0] - target[0]).powi(2) + (p[1] - target[1]).powi(2)).sqrt();
    let flat0 = flat(arr(pose.position));
    for angle in [45.0, 137.5, 360.0, 725.0] {
        let keys = gen_orbit_keyframes(&pose, angle, true, 1.0, 1.5, 30).map_err(|e| e.to_string())?;
        for (i, k) in keys.iter().enumerate() {
            let p = arr(k.position);
            if (norm(sub(p, target)) - radius).abs() > POS_TOL || (flat(p) - flat0).abs() > POS_TOL {
                return Err(format!("orbit {angle} key {i}: radius drifted"));
            }
            if (p[2] - arr(pose.position)[2]).abs() > POS_TOL {
                return Err(format!("orbit {angle} key {i}: height drifted"));
            }
        }
    }

    for (duration, n) in [(0.5, 15), (1.0, 30), (2.0, 60), (3.3, 99)] {
        if orbit_steps(duration, 30) != n {
            return Err(format!("orbit_steps({duration}, 30) = {}, want {n}", orbit_steps(duration, 30)));
        }
        let keys = gen_orbit_keyframes(&pose, 90.0, false, 0.0, duration, 30).map_err(|e| e.to_string())?;
        if keys.len() != n + 1 {
            return Err(format!("orbit over {duration}s has {} keys, want {}", keys.len(), n + 1));
        }
        let spacing = duration / n as f64;
        if keys.windows(2).any(|w| (w[1].time - w[0].time - spacing).abs() > 1e-9) {
            return Err(format!("orbit over {duration}s is not evenly spaced"));
        }
    }
    Ok(())
}
