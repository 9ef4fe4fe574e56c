//! Flat binary tensor container.
//!
//! ```text
//! offset  size  field
//!      0     4  magic "FCT1"
//!      4     4  dtype code, u32 LE (1 = f32)
//!      8    32  dims (batch, channels, height, width), 4 × u64 LE
//!     40   4·n  row-major f32 LE values
//! ```

use std::io::{Read, Write};

use super::{KernelError, Result, Tensor4};

pub const MAGIC: [u8; 4] = *b"FCT1";
pub const DTYPE_F32: u32 = 1;

fn io_err(e: std::io::Error) -> KernelError {
    KernelError::Container(e.to_string())
}

pub fn write_tensor<W: Write>(mut out: W, t: &Tensor4) -> Result<()> {
    let mut buf = Vec::with_capacity(40 + 4 * t.data().len());
    buf.extend_from_slice(&MAGIC);
    buf.extend_from_slice(&DTYPE_F32.to_le_bytes());
    for d in t.shape() {
        buf.extend_from_slice(&(d as u64).to_le_bytes());
    }
    for v in t.data() {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    out.write_all(&buf).map_err(io_err)
}

pub fn read_tensor<R: Read>(mut input: R) -> Result<Tensor4> {
    let mut header = [0u8; 40];
    input.read_exact(&mut header).map_err(io_err)?;
    if header[..4] != MAGIC {
        return Err(KernelError::Container(format!(
            "bad magic {:?}",
            &header[..4]
        )));
    }
    let dtype = u32::from_le_bytes(header[4..8].try_into().unwrap());
    if dtype != DTYPE_F32 {
        return Err(KernelError::Container(format!(
            "unsupported dtype code {dtype}"
        )));
    }
    let mut shape = [0usize; 4];
    for (i, d) in shape.iter_mut().enumerate() {
        let raw = u64::from_le_bytes(header[8 + 8 * i..16 + 8 * i].try_into().unwrap());
        *d = usize::try_from(raw)
            .map_err(|_| KernelError::Container(format!("dimension {raw} too large")))?;
    }
    let len = shape
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .and_then(|n| n.checked_mul(4))
        .ok_or_else(|| KernelError::Container(format!("shape {shape:?} overflows")))?;
    let mut body = Vec::new();
    input
        .take(len as u64)
        .read_to_end(&mut body)
        .map_err(io_err)?;
    if body.len() != len {
        return Err(KernelError::Container(format!(
            "truncated payload: expected {len} bytes, got {}",
            body.len()
        )));
    }
    let data = body
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Tensor4::new(shape, data)
}
