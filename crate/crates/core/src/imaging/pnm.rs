//! Netpbm graymap reader (P2 and P5, maxval ≤ 255) and a P5 writer.

use super::GrayImage;
use crate::error::{Result, SdrError};

fn malformed(msg: impl Into<String>) -> SdrError {
    SdrError::MalformedImage(msg.into())
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Header<'a> {
    fn skip_ws_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            let c = self.bytes[self.pos];
            if c == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else if c.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn uint(&mut self, what: &str) -> Result<usize> {
        self.skip_ws_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(malformed(format!("expected {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| malformed(format!("{what} out of range")))
    }
}

pub fn decode_pgm(bytes: &[u8]) -> Result<GrayImage> {
    if bytes.len() < 2 || bytes[0] != b'P' {
        return Err(malformed("missing netpbm magic"));
    }
    let binary = match bytes[1] {
        b'2' => false,
        b'5' => true,
        other => {
            return Err(malformed(format!(
                "unsupported netpbm type P{}",
                other as char
            )))
        }
    };
    let mut hdr = Header { bytes, pos: 2 };
    let width = hdr.uint("width")?;
    let height = hdr.uint("height")?;
    let maxval = hdr.uint("maxval")?;
    if maxval == 0 || maxval > 255 {
        return Err(malformed(format!("maxval {maxval} not in 1..=255")));
    }
    if width < 3 || height < 3 {
        return Err(SdrError::ImageTooSmall { width, height });
    }
    let n = width
        .checked_mul(height)
        .ok_or_else(|| malformed("dimensions overflow"))?;

    let raw: Vec<usize> = if binary {
        // Exactly one whitespace byte separates maxval from the raster.
        if hdr.pos >= bytes.len() || !bytes[hdr.pos].is_ascii_whitespace() {
            return Err(malformed("missing whitespace before raster"));
        }
        let start = hdr.pos + 1;
        let raster = bytes
            .get(start..start + n)
            .ok_or_else(|| malformed("truncated raster"))?;
        raster.iter().map(|&b| usize::from(b)).collect()
    } else {
        (0..n)
            .map(|_| hdr.uint("sample"))
            .collect::<Result<_>>()
            .map_err(|_| malformed("truncated or invalid ascii raster"))?
    };

    let mut data = Vec::with_capacity(n);
    for v in raw {
        if v > maxval {
            return Err(malformed(format!("sample {v} exceeds maxval {maxval}")));
        }
        let scaled = if maxval == 255 {
            v
        } else {
            (v * 255 + maxval / 2) / maxval
        };
        data.push(scaled as u8);
    }
    GrayImage::new(width, height, data)
}

/// Binary (P5) encoding with maxval 255.
pub fn encode_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.data());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ascii_uniform() {
        let src = b"P2\n# comment\n4 4\n255\n128 128 128 128\n128 128 128 128\n128 128 128 128\n128 128 128 128\n";
        let img = decode_pgm(src).unwrap();
        assert_eq!((img.width(), img.height()), (4, 4));
        assert!(img.data().iter().all(|&v| v == 128));
    }

    #[test]
    fn binary_roundtrip() {
        let img = GrayImage::new(3, 4, (0..12).map(|v| v * 20).collect()).unwrap();
        assert_eq!(decode_pgm(&encode_pgm(&img)).unwrap(), img);
    }

    #[test]
    fn low_maxval_is_rescaled() {
        let img = decode_pgm(b"P2 3 3 1 0 1 0 1 0 1 0 1 0").unwrap();
        assert_eq!(img.get(1, 0), 255);
        assert_eq!(img.get(0, 0), 0);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(decode_pgm(b"P6 3 3 255 ").is_err());
        assert!(decode_pgm(b"P5 3 3 255\n\x00\x01").is_err());
        assert!(decode_pgm(b"P2 3 3 65535 0").is_err());
        assert!(decode_pgm(b"P2 3 3 255 0 0 0 0 0 0 0 0 300").is_err());
        assert!(matches!(
            decode_pgm(b"P2 2 2 255 0 0 0 0"),
            Err(SdrError::ImageTooSmall { .. })
        ));
        assert!(decode_pgm(b"").is_err());
    }
}
