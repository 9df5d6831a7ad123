use std::sync::Arc;

use radial_nls::dynamics::store::read_snapshot;
use radial_nls::radial::{RadialField, RadialGrid};

use crate::scenario::InitialData;
use crate::CliError;

/// Samples the initial data on `grid`.
pub fn initial_field(data: &InitialData, grid: &Arc<RadialGrid>) -> Result<RadialField, CliError> {
    let field = match *data {
        InitialData::Gaussian { amplitude, width } => {
            RadialField::from_real_fn(grid.clone(), |r| amplitude * (-(r / width).powi(2)).exp())?
        }
        InitialData::Ring { amplitude, center, width } => {
            RadialField::from_real_fn(grid.clone(), |r| amplitude * (-((r - center) / width).powi(2)).exp())?
        }
        InitialData::Sech { amplitude, width } => {
            RadialField::from_real_fn(grid.clone(), |r| amplitude / (r / width).cosh())?
        }
        InitialData::File { ref path } => read_snapshot(path, grid)?,
    };
    Ok(field)
}
