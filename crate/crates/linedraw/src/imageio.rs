//! Grayscale image files: PGM (P2/P5) and PNG.
//!
//! Values are mapped linearly between 0 and the format maximum; color PNGs
//! are reduced to luminance with Rec. 709 weights on the stored values.

use linedraw_core::image::ScalarImage;
use linedraw_core::valleys::luminance;

#[derive(Debug, thiserror::Error)]
pub enum ImageError {
    #[error("not a PGM or PNG file")]
    UnknownFormat,
    #[error("PGM: {0}")]
    Pgm(String),
    #[error("PNG decode: {0}")]
    PngDecode(#[from] png::DecodingError),
    #[error("PNG encode: {0}")]
    PngEncode(#[from] png::EncodingError),
    #[error("unsupported PNG layout {0:?}")]
    PngLayout(png::ColorType),
    #[error("empty image")]
    Empty,
}

fn quantize(v: f64, max: f64) -> f64 {
    let v = if v.is_nan() { 0.0 } else { v.clamp(0.0, 1.0) };
    (v * max).round()
}

/// Binary 8-bit PGM.
pub fn encode_pgm(img: &ScalarImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend(img.data().iter().map(|&v| quantize(v, 255.0) as u8));
    out
}

/// Binary 16-bit PGM (big-endian samples).
pub fn encode_pgm16(img: &ScalarImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n65535\n", img.width(), img.height()).into_bytes();
    for &v in img.data() {
        out.extend((quantize(v, 65535.0) as u16).to_be_bytes());
    }
    out
}

/// Header tokens, skipping whitespace and `#` comments; returns the tokens
/// and the offset just past the single whitespace byte that ends the header.
fn pgm_header(bytes: &[u8]) -> Result<([String; 4], usize), ImageError> {
    let mut tokens: Vec<String> = Vec::new();
    let mut i = 0;
    while tokens.len() < 4 {
        while i < bytes.len() && (bytes[i].is_ascii_whitespace() || bytes[i] == b'#') {
            if bytes[i] == b'#' {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            } else {
                i += 1;
            }
        }
        let start = i;
        while i < bytes.len() && !bytes[i].is_ascii_whitespace() && bytes[i] != b'#' {
            i += 1;
        }
        if start == i {
            return Err(ImageError::Pgm("truncated header".into()));
        }
        tokens.push(String::from_utf8_lossy(&bytes[start..i]).into_owned());
    }
    let [a, b, c, d]: [String; 4] = tokens.try_into().unwrap();
    Ok(([a, b, c, d], i + 1))
}

pub fn decode_pgm(bytes: &[u8]) -> Result<ScalarImage, ImageError> {
    let ([magic, w, h, max], offset) = pgm_header(bytes)?;
    let num = |s: &str| s.parse::<usize>().map_err(|_| ImageError::Pgm(format!("bad number {s:?}")));
    let (w, h, max) = (num(&w)?, num(&h)?, num(&max)?);
    if w == 0 || h == 0 {
        return Err(ImageError::Empty);
    }
    if max == 0 || max > 65535 {
        return Err(ImageError::Pgm(format!("maxval {max} out of range")));
    }
    let n = w * h;
    let samples: Vec<usize> = match magic.as_str() {
        "P5" => {
            let body = bytes.get(offset..).unwrap_or(&[]);
            let wide = max > 255;
            let need = if wide { 2 * n } else { n };
            if body.len() < need {
                return Err(ImageError::Pgm(format!("expected {need} data bytes, got {}", body.len())));
            }
            if wide {
                body[..need].chunks(2).map(|c| u16::from_be_bytes([c[0], c[1]]) as usize).collect()
            } else {
                body[..n].iter().map(|&b| b as usize).collect()
            }
        }
        "P2" => {
            let text = String::from_utf8_lossy(bytes.get(offset..).unwrap_or(&[]));
            let vals: Result<Vec<usize>, _> = text
                .lines()
                .map(|l| l.split('#').next().unwrap_or(""))
                .flat_map(|l| l.split_whitespace().map(str::to_owned).collect::<Vec<_>>())
                .take(n)
                .map(|t| num(&t))
                .collect();
            let vals = vals?;
            if vals.len() < n {
                return Err(ImageError::Pgm(format!("expected {n} samples, got {}", vals.len())));
            }
            vals
        }
        _ => return Err(ImageError::UnknownFormat),
    };
    if let Some(&bad) = samples.iter().find(|&&v| v > max) {
        return Err(ImageError::Pgm(format!("sample {bad} exceeds maxval {max}")));
    }
    let m = max as f64;
    Ok(ScalarImage::from_vec(w, h, samples.into_iter().map(|v| v as f64 / m).collect()))
}

/// 8-bit grayscale PNG with fixed encoder settings (deterministic bytes).
pub fn encode_png(img: &ScalarImage) -> Result<Vec<u8>, ImageError> {
    let mut out = Vec::new();
    {
        let mut enc = png::Encoder::new(&mut out, img.width() as u32, img.height() as u32);
        enc.set_color(png::ColorType::Grayscale);
        enc.set_depth(png::BitDepth::Eight);
        enc.set_compression(png::Compression::Balanced);
        let mut writer = enc.write_header()?;
        let data: Vec<u8> = img.data().iter().map(|&v| quantize(v, 255.0) as u8).collect();
        writer.write_image_data(&data)?;
        writer.finish()?;
    }
    Ok(out)
}

pub fn decode_png(bytes: &[u8]) -> Result<ScalarImage, ImageError> {
    let mut dec = png::Decoder::new(std::io::Cursor::new(bytes));
    dec.set_transformations(png::Transformations::EXPAND);
    let mut reader = dec.read_info()?;
    let mut buf = vec![0; reader.output_buffer_size().ok_or(ImageError::Empty)?];
    let info = reader.next_frame(&mut buf)?;
    let (w, h) = (info.width as usize, info.height as usize);
    if w == 0 || h == 0 {
        return Err(ImageError::Empty);
    }
    let wide = info.bit_depth == png::BitDepth::Sixteen;
    let max = if wide { 65535.0 } else { 255.0 };
    let sample = |i: usize| -> f64 {
        if wide {
            u16::from_be_bytes([buf[2 * i], buf[2 * i + 1]]) as f64 / max
        } else {
            buf[i] as f64 / max
        }
    };
    let channels = match info.color_type {
        png::ColorType::Grayscale => 1,
        png::ColorType::GrayscaleAlpha => 2,
        png::ColorType::Rgb => 3,
        png::ColorType::Rgba => 4,
        other => return Err(ImageError::PngLayout(other)),
    };
    let data = (0..w * h)
        .map(|p| {
            let i = p * channels;
            if channels < 3 {
                sample(i)
            } else {
                luminance([sample(i), sample(i + 1), sample(i + 2)])
            }
        })
        .collect();
    Ok(ScalarImage::from_vec(w, h, data))
}

/// Decodes PNG or PGM by content.
pub fn decode_image(bytes: &[u8]) -> Result<ScalarImage, ImageError> {
    if bytes.starts_with(b"\x89PNG") {
        decode_png(bytes)
    } else if bytes.starts_with(b"P5") || bytes.starts_with(b"P2") {
        decode_pgm(bytes)
    } else {
        Err(ImageError::UnknownFormat)
    }
}
