//! Just enough RIFF/WAVE handling to build silent clips and read their
//! duration back.

/// Sample rate of generated silence (8-bit mono).
pub const SILENCE_RATE: u32 = 8000;

/// A silent 8-bit mono PCM clip of `seconds` (rounded to whole samples).
pub fn silent_wav(seconds: f64) -> Vec<u8> {
    let samples = (seconds.max(0.0) * SILENCE_RATE as f64).round() as u32;
    let mut out = Vec::with_capacity(44 + samples as usize);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + samples).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes()); // PCM
    out.extend_from_slice(&1u16.to_le_bytes()); // mono
    out.extend_from_slice(&SILENCE_RATE.to_le_bytes());
    out.extend_from_slice(&SILENCE_RATE.to_le_bytes()); // byte rate
    out.extend_from_slice(&1u16.to_le_bytes()); // block align
    out.extend_from_slice(&8u16.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&samples.to_le_bytes());
    out.resize(44 + samples as usize, 0x80);
    out
}

fn u16_at(b: &[u8], at: usize) -> Option<u16> {
    Some(u16::from_le_bytes(b.get(at..at + 2)?.try_into().ok()?))
}

fn u32_at(b: &[u8], at: usize) -> Option<u32> {
    Some(u32::from_le_bytes(b.get(at..at + 4)?.try_into().ok()?))
}

/// Duration in seconds from the `fmt ` byte rate and `data` chunk size.
pub fn wav_duration(bytes: &[u8]) -> Result<f64, String> {
    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err("not a RIFF/WAVE file".into());
    }
    let mut at = 12;
    let mut byte_rate = None;
    while at + 8 <= bytes.len() {
        let id = &bytes[at..at + 4];
        let size = u32_at(bytes, at + 4).ok_or("truncated chunk header")? as usize;
        let body = at + 8;
        match id {
            b"fmt " => {
                let format = u16_at(bytes, body).ok_or("truncated fmt chunk")?;
                if format != 1 && format != 3 {
                    return Err(format!("unsupported wave format {format}"));
                }
                byte_rate = Some(u32_at(bytes, body + 8).ok_or("truncated fmt chunk")?);
            }
            b"data" => {
                let rate = byte_rate.ok_or("data chunk before fmt chunk")?;
                if rate == 0 {
                    return Err("byte rate is zero".into());
                }
                return Ok(size as f64 / rate as f64);
            }
            _ => {}
        }
        at = body + size + (size & 1);
    }
    Err("no data chunk".into())
}
