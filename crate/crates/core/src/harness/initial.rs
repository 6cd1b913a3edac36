//! Initial data construction for the comparison experiments.

use crate::approx::reconstruct_vbar_from_zeta;
use crate::error::{Error, Result};
use crate::harness::config::DataKind;
use crate::params::RegimeParams;
use crate::spectral::{Field, Grid};
use std::sync::Arc;

fn gaussian_profile(x: f64) -> f64 {
    (-(x / 2.0) * (x / 2.0)).exp()
}

fn algebraic_profile(x: f64) -> f64 {
    (1.0 + 10.0 * x * x).powf(-1.0 / 3.0)
}

/// Build `(zeta0, vbar0)` on the grid.
///
/// Decomposition kinds place a right-mover `v_+` and a left-mover
/// `v_- = (2/3) v_+` through the linear split inverse
/// `zeta0 = v_+ + v_-`, `vbar0 = (gamma+delta)(v_+ - v_-)`; the
/// unidirectional kind slaves the velocity to the deformation. Localized
/// kinds reject grids whose boundary tail exceeds 1e-12 (the algebraic
/// profile decays too slowly for that check to be meaningful).
pub fn make_initial_data(
    kind: DataKind,
    grid: &Arc<Grid>,
    p: &RegimeParams,
) -> Result<(Field, Field)> {
    let check_tail = |profile: &dyn Fn(f64) -> f64| -> Result<()> {
        let edge = profile(-0.5 * grid.length()).abs().max(profile(0.5 * grid.length()).abs());
        if edge > 1e-12 {
            return Err(Error::Config(format!(
                "grid too small for the initial data: boundary tail {edge:.3e} > 1e-12 \
                 (length {})",
                grid.length()
            )));
        }
        Ok(())
    };
    match kind {
        DataKind::GaussianLocalized => {
            check_tail(&gaussian_profile)?;
            let v_plus = grid.sample(gaussian_profile);
            split_from_waves(&v_plus, p)
        }
        DataKind::AlgebraicNonlocalized => {
            let v_plus = grid.sample(algebraic_profile);
            split_from_waves(&v_plus, p)
        }
        DataKind::UnidirectionalCompatible => {
            check_tail(&gaussian_profile)?;
            let zeta0 = grid.sample(gaussian_profile);
            let vbar0 = reconstruct_vbar_from_zeta(&zeta0, p)?;
            Ok((zeta0, vbar0))
        }
    }
}

fn split_from_waves(v_plus: &Field, p: &RegimeParams) -> Result<(Field, Field)> {
    // left-going wave initially two thirds of the right-going one, avoiding
    // symmetry cancellations
    let v_minus = v_plus.scale(2.0 / 3.0);
    let zeta0 = v_plus.add(&v_minus);
    let vbar0 = v_plus.sub(&v_minus).scale(p.gamma + p.delta);
    Ok((zeta0, vbar0))
}
