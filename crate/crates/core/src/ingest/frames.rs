use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{ExtendedColorType, GrayImage, ImageEncoder, ImageReader};

use super::{GrayFrame, IngestError, Location, Result};

fn is_graymap(path: &Path) -> bool {
    path.is_file()
        && path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| e.eq_ignore_ascii_case("pgm"))
}

/// Loads every `.pgm` file in `dir`. Lexicographic filename order defines
/// frame order; frames are numbered from 1.
pub fn load_frames(dir: impl AsRef<Path>) -> Result<Vec<GrayFrame>> {
    let dir = dir.as_ref();
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| IngestError::io(dir, e))?
        .map(|entry| entry.map(|e| e.path()))
        .collect::<std::io::Result<_>>()
        .map_err(|e| IngestError::io(dir, e))?;
    paths.retain(|p| is_graymap(p));
    paths.sort();

    let mut frames: Vec<GrayFrame> = Vec::with_capacity(paths.len());
    for (i, path) in paths.iter().enumerate() {
        let img = ImageReader::open(path)
            .map_err(|e| IngestError::io(path, e))?
            .decode()
            .map_err(|e| IngestError::Image {
                path: path.clone(),
                message: e.to_string(),
            })?
            .into_luma8();
        let (width, height) = img.dimensions();
        if let Some(first) = frames.first() {
            if (first.width, first.height) != (width, height) {
                return Err(IngestError::invalid(
                    path,
                    Location::File,
                    format!(
                        "frame is {width}x{height}, expected {}x{} like the first frame",
                        first.width, first.height
                    ),
                ));
            }
        }
        frames.push(GrayFrame {
            frame_index: i as u64 + 1,
            width,
            height,
            pixels: img.into_raw(),
        });
    }
    Ok(frames)
}

/// Writes frames as binary graymaps named `frame_00001.pgm`, ….
pub fn write_frames(dir: impl AsRef<Path>, frames: &[GrayFrame]) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| IngestError::io(dir, e))?;
    for (i, f) in frames.iter().enumerate() {
        let path = dir.join(format!("frame_{:05}.pgm", i + 1));
        write_graymap(&path, f.width, f.height, f.pixels.clone())?;
    }
    Ok(())
}

pub fn write_graymap(path: &Path, width: u32, height: u32, pixels: Vec<u8>) -> Result<()> {
    let img = GrayImage::from_raw(width, height, pixels).ok_or_else(|| {
        IngestError::Bundle(format!("pixel buffer does not match {width}x{height}"))
    })?;
    let image_err = |message: String| IngestError::Image {
        path: path.to_path_buf(),
        message,
    };
    let file = std::fs::File::create(path).map_err(|e| IngestError::io(path, e))?;
    let mut out = std::io::BufWriter::new(file);
    // binary graymap (P5); the encoder's default would be PAM
    PnmEncoder::new(&mut out)
        .with_subtype(PnmSubtype::Graymap(SampleEncoding::Binary))
        .write_image(img.as_raw(), width, height, ExtendedColorType::L8)
        .map_err(|e| image_err(e.to_string()))?;
    out.flush().map_err(|e| IngestError::io(path, e))
}
