//! Reading grayscale images from PGM or PNG and writing PGM.

use std::fs;
use std::path::Path;

use specsal_core::GrayImage;

use crate::error::{CliError, CliResult};
use crate::pgm::{read_pgm, write_pgm};

const PNG_MAGIC: &[u8] = b"\x89PNG\r\n\x1a\n";

/// Decodes by content: PNG signature, otherwise Netpbm P2/P5.
pub fn decode_image(bytes: &[u8]) -> Result<GrayImage, String> {
    if bytes.starts_with(PNG_MAGIC) {
        let luma = image::load_from_memory_with_format(bytes, image::ImageFormat::Png)
            .map_err(|e| e.to_string())?
            .to_luma16();
        let (w, h) = luma.dimensions();
        let data = luma.into_raw().into_iter().map(|v| f64::from(v) / 65535.0).collect();
        GrayImage::new(w as usize, h as usize, data).map_err(|e| e.to_string())
    } else {
        read_pgm(bytes).map_err(|e| e.to_string())
    }
}

pub fn read_image(path: &Path) -> CliResult<GrayImage> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    decode_image(&bytes).map_err(|msg| CliError::Format { path: path.to_path_buf(), msg })
}

pub fn write_image(path: &Path, img: &GrayImage) -> CliResult<()> {
    write_file(path, &write_pgm(img))
}

pub fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}
