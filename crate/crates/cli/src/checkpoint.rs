//! Quench checkpoints: the state vector as raw little-endian doubles.
//!
//! Layout: 8-byte magic, `u64` dimension, `f64` time, then `2 * dim` doubles
//! (real and imaginary parts interleaved). The records up to the checkpoint
//! time live in a separate time-series CSV.

use std::io::{Read, Write};
use std::path::Path;

use lrtfim::exact::StateVector;
use num_complex::Complex64;

use crate::CliError;

const MAGIC: &[u8; 8] = b"LRTFIMS1";

pub fn save(path: &Path, state: &StateVector) -> Result<(), CliError> {
    let tmp = path.with_extension("tmp");
    {
        let mut w = std::io::BufWriter::new(std::fs::File::create(&tmp)?);
        w.write_all(MAGIC)?;
        w.write_all(&(state.amplitudes.len() as u64).to_le_bytes())?;
        w.write_all(&state.time.to_le_bytes())?;
        for a in &state.amplitudes {
            w.write_all(&a.re.to_le_bytes())?;
            w.write_all(&a.im.to_le_bytes())?;
        }
        w.flush()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

pub fn load(path: &Path, dim: usize) -> Result<StateVector, CliError> {
    let bad = |m: &str| CliError::Config(format!("checkpoint {}: {m}", path.display()));
    let mut r = std::io::BufReader::new(
        std::fs::File::open(path).map_err(|e| bad(&e.to_string()))?,
    );
    let mut word = [0u8; 8];
    r.read_exact(&mut word).map_err(|_| bad("truncated"))?;
    if &word != MAGIC {
        return Err(bad("not a checkpoint file"));
    }
    r.read_exact(&mut word).map_err(|_| bad("truncated"))?;
    let n = u64::from_le_bytes(word) as usize;
    if n != dim {
        return Err(bad(&format!("dimension {n} does not match the lattice ({dim})")));
    }
    r.read_exact(&mut word).map_err(|_| bad("truncated"))?;
    let time = f64::from_le_bytes(word);
    let mut amplitudes = Vec::with_capacity(n);
    let mut pair = [0u8; 16];
    for _ in 0..n {
        r.read_exact(&mut pair).map_err(|_| bad("truncated"))?;
        let re = f64::from_le_bytes(pair[..8].try_into().unwrap());
        let im = f64::from_le_bytes(pair[8..].try_into().unwrap());
        amplitudes.push(Complex64::new(re, im));
    }
    Ok(StateVector { amplitudes, time })
}
