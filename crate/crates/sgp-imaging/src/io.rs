//! Image file formats: exact binary doubles and 16-bit PGM for viewing.
//!
//! The binary format is a 16-byte header (8-byte magic, rows and cols as
//! little-endian `u32`) followed by row-major `f64` values, and round-trips
//! exactly. PGM output rescales to the `u16` range and is lossy by design.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use sgp_core::Scalar;

use crate::error::ImagingError;
use crate::image::Image;

const MAGIC: &[u8; 8] = b"SGPIMG01";

/// Writes the exact binary format.
pub fn write_binary<T: Scalar>(path: &Path, img: &Image<T>) -> Result<(), ImagingError> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(MAGIC)?;
    w.write_all(&(img.rows() as u32).to_le_bytes())?;
    w.write_all(&(img.cols() as u32).to_le_bytes())?;
    for &v in img.as_slice() {
        let d = v.to_f64().ok_or_else(|| {
            ImagingError::Format("pixel not representable as f64".into())
        })?;
        w.write_all(&d.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

/// Reads the exact binary format.
pub fn read_binary<T: Scalar>(path: &Path) -> Result<Image<T>, ImagingError> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(ImagingError::Format("bad magic bytes".into()));
    }
    let mut word = [0u8; 4];
    r.read_exact(&mut word)?;
    let rows = u32::from_le_bytes(word) as usize;
    r.read_exact(&mut word)?;
    let cols = u32::from_le_bytes(word) as usize;

    let mut data = Vec::with_capacity(rows * cols);
    let mut buf = [0u8; 8];
    for _ in 0..rows * cols {
        r.read_exact(&mut buf)?;
        data.push(T::of(f64::from_le_bytes(buf)));
    }
    Image::new(rows, cols, data)
}

/// Writes a 16-bit binary PGM (`P5`, maxval 65535, big-endian samples),
/// linearly rescaled so the maximum pixel maps to 65535.
pub fn write_pgm<T: Scalar>(path: &Path, img: &Image<T>) -> Result<(), ImagingError> {
    let mut w = BufWriter::new(File::create(path)?);
    write!(w, "P5\n{} {}\n65535\n", img.cols(), img.rows())?;
    let max = img.max().to_f64().unwrap_or(0.0);
    let scale = if max > 0.0 { 65535.0 / max } else { 0.0 };
    for &v in img.as_slice() {
        let d = (v.to_f64().unwrap_or(0.0).max(0.0) * scale).round() as u16;
        w.write_all(&d.to_be_bytes())?;
    }
    w.flush()?;
    Ok(())
}

/// Reads an 8- or 16-bit binary PGM; raw sample values become pixels.
pub fn read_pgm<T: Scalar>(path: &Path) -> Result<Image<T>, ImagingError> {
    let mut r = BufReader::new(File::open(path)?);
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if !bytes.starts_with(b"P5") {
        return Err(ImagingError::Format("not a binary PGM (P5)".into()));
    }

    // Header: three whitespace-separated tokens after the magic, with
    // comment lines allowed.
    let mut pos = 2;
    let mut tokens = Vec::with_capacity(3);
    while tokens.len() < 3 && pos < bytes.len() {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos < bytes.len() && bytes[pos] == b'#' {
            while pos < bytes.len() && bytes[pos] != b'\n' {
                pos += 1;
            }
            continue;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        tokens.push(
            std::str::from_utf8(&bytes[start..pos])
                .map_err(|_| ImagingError::Format("non-ASCII header".into()))?
                .to_string(),
        );
    }
    if tokens.len() < 3 || pos >= bytes.len() {
        return Err(ImagingError::Format("truncated PGM header".into()));
    }
    pos += 1; // single whitespace after maxval
    let cols: usize = tokens[0]
        .parse()
        .map_err(|_| ImagingError::Format("bad width".into()))?;
    let rows: usize = tokens[1]
        .parse()
        .map_err(|_| ImagingError::Format("bad height".into()))?;
    let maxval: u32 = tokens[2]
        .parse()
        .map_err(|_| ImagingError::Format("bad maxval".into()))?;

    let n = rows * cols;
    let mut data = Vec::with_capacity(n);
    if maxval > 255 {
        if bytes.len() < pos + 2 * n {
            return Err(ImagingError::Format("truncated 16-bit samples".into()));
        }
        for i in 0..n {
            let hi = bytes[pos + 2 * i] as u16;
            let lo = bytes[pos + 2 * i + 1] as u16;
            data.push(T::of(((hi << 8) | lo) as f64));
        }
    } else {
        if bytes.len() < pos + n {
            return Err(ImagingError::Format("truncated 8-bit samples".into()));
        }
        for i in 0..n {
            data.push(T::of(bytes[pos + i] as f64));
        }
    }
    Image::new(rows, cols, data)
}

/// Reads either supported format, dispatching on the leading bytes.
pub fn read_image<T: Scalar>(path: &Path) -> Result<Image<T>, ImagingError> {
    let mut probe = [0u8; 8];
    let got = File::open(path)?.read(&mut probe)?;
    if got >= 8 && &probe == MAGIC {
        read_binary(path)
    } else if got >= 2 && &probe[..2] == b"P5" {
        read_pgm(path)
    } else {
        Err(ImagingError::Format(
            "unrecognized image format (expected SGPIMG01 binary or P5 PGM)".into(),
        ))
    }
}
