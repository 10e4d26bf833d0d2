//! Raster input, Sobel edge extraction and contour chaining.
//!
//! Images are 8-bit luminance rasters. Edges are found with the canonical
//! 3×3 Sobel pair, binarized against a threshold relative to the strongest
//! response, and then chained into ordered polylines that the
//! generalization stage can simplify.

mod edges;
mod pnm;
mod thin;
mod trace;

use std::path::Path;

pub use edges::{sobel_magnitude, suppress_non_maxima, threshold_edges, EdgeMap, GradientField, Threshold};
pub use pnm::{decode_pgm, encode_pgm};
pub use thin::{remove_staircase, thin_edges};
pub use trace::{trace_contours, Polyline};

use crate::error::{Result, SdrError};

/// Row-major 8-bit luminance raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width < 3 || height < 3 {
            return Err(SdrError::ImageTooSmall { width, height });
        }
        if data.len() != width * height {
            return Err(SdrError::MalformedImage(format!(
                "expected {} pixels for {width}x{height}, got {}",
                width * height,
                data.len()
            )));
        }
        Ok(GrayImage {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, v: u8) {
        self.data[y * self.width + x] = v;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageFormat {
    Pgm,
    Png,
}

impl ImageFormat {
    /// Guess from the file extension (`.pgm`, `.pnm`, `.png`).
    pub fn from_path(path: &Path) -> Option<Self> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        match ext.as_str() {
            "pgm" | "pnm" => Some(ImageFormat::Pgm),
            "png" => Some(ImageFormat::Png),
            _ => None,
        }
    }
}

/// ITU-R BT.601 luma, rounded to the nearest integer.
pub fn luminance(r: u8, g: u8, b: u8) -> u8 {
    let y = 0.299 * f64::from(r) + 0.587 * f64::from(g) + 0.114 * f64::from(b);
    y.round().clamp(0.0, 255.0) as u8
}

pub fn load_image(path: &Path, format: ImageFormat) -> Result<GrayImage> {
    let bytes = std::fs::read(path).map_err(|e| SdrError::io(path, e))?;
    match format {
        ImageFormat::Pgm => decode_pgm(&bytes),
        ImageFormat::Png => decode_png(&bytes),
    }
}

/// Decode an 8-bit (or 16-bit, stripped) PNG and reduce it to luminance.
pub fn decode_png(bytes: &[u8]) -> Result<GrayImage> {
    let bad = |e: png::DecodingError| SdrError::MalformedImage(format!("png: {e}"));
    let mut decoder = png::Decoder::new(bytes);
    decoder.set_transformations(png::Transformations::EXPAND | png::Transformations::STRIP_16);
    let mut reader = decoder.read_info().map_err(bad)?;
    let mut buf = vec![0; reader.output_buffer_size()];
    let info = reader.next_frame(&mut buf).map_err(bad)?;
    let (w, h) = (info.width as usize, info.height as usize);
    let px = &buf[..info.buffer_size()];
    let data: Vec<u8> = match info.color_type {
        png::ColorType::Grayscale => px.to_vec(),
        png::ColorType::GrayscaleAlpha => px.chunks_exact(2).map(|c| c[0]).collect(),
        png::ColorType::Rgb => px
            .chunks_exact(3)
            .map(|c| luminance(c[0], c[1], c[2]))
            .collect(),
        png::ColorType::Rgba => px
            .chunks_exact(4)
            .map(|c| luminance(c[0], c[1], c[2]))
            .collect(),
        png::ColorType::Indexed => {
            return Err(SdrError::MalformedImage(
                "indexed png was not expanded".into(),
            ))
        }
    };
    GrayImage::new(w, h, data)
}
