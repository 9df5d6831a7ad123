//! Directory store: `metadata.json` plus one `snapshot_NNNNNN.bin` per
//! snapshot holding little-endian `f64` pairs `(re, im)` node by node.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{EvolutionConfig, Provenance, Status, Trajectory};
use crate::error::{Error, Result};
use crate::radial::{GridSpec, RadialField, RadialGrid};

const FORMAT: &str = "radial-nls-trajectory/1";

#[derive(Serialize, Deserialize)]
struct Metadata {
    format: String,
    grid: GridSpec,
    config: EvolutionConfig,
    provenance: Provenance,
    status: Status,
    t_plus: f64,
    times: Vec<f64>,
}

pub fn snapshot_file_name(index: usize) -> String {
    format!("snapshot_{index:06}.bin")
}

pub fn save(traj: &Trajectory, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let meta = Metadata {
        format: FORMAT.into(),
        grid: traj.grid().spec(),
        config: *traj.config(),
        provenance: traj.provenance().clone(),
        status: traj.status(),
        t_plus: traj.requested_t_plus(),
        times: traj.times().to_vec(),
    };
    fs::write(dir.join("metadata.json"), serde_json::to_string_pretty(&meta)? + "\n")?;
    for (i, u) in traj.snapshots().iter().enumerate() {
        write_snapshot(&dir.join(snapshot_file_name(i)), u)?;
    }
    Ok(())
}

pub fn load(dir: &Path) -> Result<Trajectory> {
    let meta: Metadata = serde_json::from_str(&fs::read_to_string(dir.join("metadata.json"))?)?;
    if meta.format != FORMAT {
        return Err(Error::Store(format!("unknown format {:?}", meta.format)));
    }
    let grid = Arc::new(RadialGrid::from_spec(meta.grid)?);
    let snapshots = (0..meta.times.len())
        .map(|i| read_snapshot(&dir.join(snapshot_file_name(i)), &grid))
        .collect::<Result<Vec<_>>>()?;
    Trajectory::from_parts(
        meta.config,
        meta.provenance,
        meta.times,
        snapshots,
        meta.status,
        meta.t_plus,
    )
}

/// Reads one snapshot file onto `grid`.
pub fn read_snapshot(path: &Path, grid: &Arc<RadialGrid>) -> Result<RadialField> {
    let bytes = fs::read(path)?;
    if bytes.len() != 16 * grid.len() {
        return Err(Error::Store(format!(
            "{}: {} bytes, expected {}",
            path.display(),
            bytes.len(),
            16 * grid.len()
        )));
    }
    let values = bytes
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
            Complex64::new(re, im)
        })
        .collect();
    RadialField::new(grid.clone(), values)
}

/// Writes one snapshot file.
pub fn write_snapshot(path: &Path, u: &RadialField) -> Result<()> {
    let mut bytes = Vec::with_capacity(16 * u.values().len());
    for v in u.values() {
        bytes.extend_from_slice(&v.re.to_le_bytes());
        bytes.extend_from_slice(&v.im.to_le_bytes());
    }
    fs::write(path, bytes)?;
    Ok(())
}
