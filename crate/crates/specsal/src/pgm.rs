//! Netpbm graymaps: P2 and P5 on input, P5 with maxval 255 on output.

use specsal_core::GrayImage;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct PgmError(String);

fn err(msg: impl Into<String>) -> PgmError {
    PgmError(msg.into())
}

struct Header {
    binary: bool,
    width: usize,
    height: usize,
    maxval: u32,
    data_start: usize,
}

fn parse_header(bytes: &[u8]) -> Result<Header, PgmError> {
    let binary = match bytes.get(..2) {
        Some(b"P2") => false,
        Some(b"P5") => true,
        _ => return Err(err("not a P2/P5 graymap")),
    };
    let mut pos = 2;
    let mut fields = [0u32; 3];
    for field in fields.iter_mut() {
        loop {
            match bytes.get(pos) {
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                _ => break,
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        *field = std::str::from_utf8(&bytes[start..pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| err("malformed header"))?;
    }
    // Exactly one whitespace byte separates the header from binary data.
    if !bytes.get(pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(err("malformed header"));
    }
    let [width, height, maxval] = fields;
    if width == 0 || height == 0 {
        return Err(err("empty image"));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(err(format!("maxval {maxval} out of range")));
    }
    Ok(Header { binary, width: width as usize, height: height as usize, maxval, data_start: pos + 1 })
}

/// Decodes a graymap into `[0, 1]` intensities.
pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage, PgmError> {
    let h = parse_header(bytes)?;
    let n = h.width * h.height;
    let body = &bytes[h.data_start.min(bytes.len())..];
    let raw: Vec<u32> = if h.binary {
        let wide = h.maxval > 255;
        let need = if wide { 2 * n } else { n };
        if body.len() < need {
            return Err(err(format!("expected {need} data bytes, found {}", body.len())));
        }
        if wide {
            body[..need].chunks(2).map(|c| u32::from(c[0]) << 8 | u32::from(c[1])).collect()
        } else {
            body[..n].iter().map(|&b| u32::from(b)).collect()
        }
    } else {
        let text = std::str::from_utf8(body).map_err(|_| err("non-ASCII P2 body"))?;
        let values = text
            .lines()
            .flat_map(|l| l.split('#').next().unwrap_or("").split_ascii_whitespace())
            .map(|t| t.parse::<u32>().map_err(|_| err(format!("bad sample {t:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        if values.len() < n {
            return Err(err(format!("expected {n} samples, found {}", values.len())));
        }
        values
    };
    if let Some(v) = raw[..n].iter().find(|&&v| v > h.maxval) {
        return Err(err(format!("sample {v} exceeds maxval {}", h.maxval)));
    }
    let scale = f64::from(h.maxval);
    let data = raw[..n].iter().map(|&v| f64::from(v) / scale).collect();
    GrayImage::new(h.width, h.height, data).map_err(|e| err(e.to_string()))
}

/// Quantizes to 8 bits, clamping to `[0, 1]`.
pub fn to_bytes(img: &GrayImage) -> Vec<u8> {
    img.data().iter().map(|&v| (v.clamp(0.0, 1.0) * 255.0).round() as u8).collect()
}

pub fn write_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend(to_bytes(img));
    out
}
