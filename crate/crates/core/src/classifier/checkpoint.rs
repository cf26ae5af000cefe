//! Binary model checkpoints.
//!
//! All integers are little-endian `u32`, all reals little-endian IEEE-754 `f64`.
//!
//! | field            | content                                         |
//! |------------------|-------------------------------------------------|
//! | magic            | the 8 bytes `TTLSTM\0\0`                        |
//! | version          | `1`                                             |
//! | input size       | `1`                                             |
//! | hidden size `H`  |                                                 |
//! | classes `C`      |                                                 |
//! | normalization    | mean, std (`f64` each)                          |
//! | class names      | `C` × (byte length, UTF-8 bytes)                |
//! | parameters       | `w_x` (4H), `w_h` (H×4H), `b` (4H), `w_y` (H×C), `b_y` (C), row-major |
//!
//! Nothing may follow the last parameter.

use std::path::Path;

use ndarray::{Array1, Array2};

use super::lstm::{LstmModel, LstmParams, Normalization};
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 8] = b"TTLSTM\0\0";
pub const CHECKPOINT_VERSION: u32 = 1;
const MAX_HIDDEN: usize = 4096;
const MAX_CLASSES: usize = 4096;
const MAX_NAME_LEN: usize = 4096;

pub fn to_bytes(model: &LstmModel) -> Vec<u8> {
    let p = &model.params;
    let mut out = Vec::with_capacity(64 + 8 * p.len());
    out.extend_from_slice(MAGIC);
    for v in [
        CHECKPOINT_VERSION,
        1,
        p.hidden_size() as u32,
        model.num_classes() as u32,
    ] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out.extend_from_slice(&model.normalization.mean.to_le_bytes());
    out.extend_from_slice(&model.normalization.std.to_le_bytes());
    for name in &model.class_names {
        out.extend_from_slice(&(name.len() as u32).to_le_bytes());
        out.extend_from_slice(name.as_bytes());
    }
    for block in p.blocks() {
        for v in block {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8]> {
        if self.buf.len() - self.pos < n {
            return Err(Error::Format(format!(
                "checkpoint truncated while reading {what} at byte {}",
                self.pos
            )));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        Ok(u32::from_le_bytes(
            self.take(4, what)?.try_into().expect("4 bytes"),
        ))
    }

    fn f64(&mut self, what: &str) -> Result<f64> {
        Ok(f64::from_le_bytes(
            self.take(8, what)?.try_into().expect("8 bytes"),
        ))
    }

    fn f64s(&mut self, n: usize, what: &str) -> Result<Vec<f64>> {
        let raw = self.take(n * 8, what)?;
        let v: Vec<f64> = raw
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect();
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::Format(format!("non-finite value in {what}")));
        }
        Ok(v)
    }
}

pub fn from_bytes(buf: &[u8]) -> Result<LstmModel> {
    let mut r = Reader { buf, pos: 0 };
    if r.take(8, "magic")? != MAGIC {
        return Err(Error::Format("not a model checkpoint (bad magic)".into()));
    }
    let version = r.u32("version")?;
    if version != CHECKPOINT_VERSION {
        return Err(Error::UnsupportedVersion {
            what: "checkpoint",
            found: version,
            expected: CHECKPOINT_VERSION,
        });
    }
    let input = r.u32("input size")?;
    if input != 1 {
        return Err(Error::Format(format!(
            "input size {input} unsupported (expected 1)"
        )));
    }
    let hidden = r.u32("hidden size")? as usize;
    let classes = r.u32("class count")? as usize;
    if hidden == 0 || hidden > MAX_HIDDEN {
        return Err(Error::Format(format!("hidden size {hidden} out of range")));
    }
    if classes == 0 || classes > MAX_CLASSES {
        return Err(Error::Format(format!("class count {classes} out of range")));
    }
    let mean = r.f64("normalization mean")?;
    let std = r.f64("normalization std")?;
    if !mean.is_finite() || !(std > 0.0) || !std.is_finite() {
        return Err(Error::Format(format!(
            "invalid normalization ({mean}, {std})"
        )));
    }
    let mut class_names = Vec::with_capacity(classes);
    for k in 0..classes {
        let n = r.u32("class name length")? as usize;
        if n == 0 || n > MAX_NAME_LEN {
            return Err(Error::Format(format!(
                "class {k} name length {n} out of range"
            )));
        }
        let name = std::str::from_utf8(r.take(n, "class name")?)
            .map_err(|_| Error::Format(format!("class {k} name is not UTF-8")))?;
        if class_names.iter().any(|c: &String| c == name) {
            return Err(Error::Format(format!("duplicate class name {name:?}")));
        }
        class_names.push(name.to_string());
    }
    let expected = 8 * (4 * hidden + hidden * 4 * hidden + 4 * hidden + hidden * classes + classes);
    if buf.len() - r.pos != expected {
        return Err(Error::Format(format!(
            "parameter section has {} bytes, expected {expected}",
            buf.len() - r.pos
        )));
    }
    let params = LstmParams {
        w_x: Array1::from(r.f64s(4 * hidden, "w_x")?),
        w_h: Array2::from_shape_vec((hidden, 4 * hidden), r.f64s(hidden * 4 * hidden, "w_h")?)
            .expect("shape"),
        b: Array1::from(r.f64s(4 * hidden, "b")?),
        w_y: Array2::from_shape_vec((hidden, classes), r.f64s(hidden * classes, "w_y")?)
            .expect("shape"),
        b_y: Array1::from(r.f64s(classes, "b_y")?),
    };
    Ok(LstmModel {
        params,
        class_names,
        normalization: Normalization { mean, std },
    })
}

pub fn save_model(model: &LstmModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, to_bytes(model)).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<LstmModel> {
    let path = path.as_ref();
    let buf = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    from_bytes(&buf)
}
