//! Defects as a lattice gas: densities, their derivatives, pressures and
//! equations of state for the crease-reversal families (fugacity `y` per
//! reversed crease pair, `z = y⁴` per face flip) and for the 3-coloring
//! layer-ordering family (fugacity `z` of the third colour).

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::elliptic::{agm, agm_deficit, complete};
use crate::freeenergy::{miura_symmetric_integrand, trapezoid_symmetric_integrand};
use crate::quadrature::QuadOptions;
use crate::{Error, Result};

/// Which fugacity parametrises a crease-defect curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Y,
    Z,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GasModel {
    Miura,
    Trapezoid,
    BarretoMars,
    /// Layer-ordering defects of the 3-coloring; `Z` family only.
    Coloring,
}

/// `y_c = √2/2`, where the Miura and trapezoid densities reach one.
pub const Y_CRITICAL: f64 = core::f64::consts::FRAC_1_SQRT_2;

fn check(f: f64) -> Result<()> {
    if f.is_finite() && f > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidWeight)
    }
}

fn y_of(f: f64, family: Family) -> f64 {
    match family {
        Family::Y => f,
        Family::Z => libm::sqrt(libm::sqrt(f)),
    }
}

/// Miura and trapezoid density, `1 − (2/π)·((¼ − y⁴)/(¼ + y⁴))·K(y²/(¼ + y⁴))`.
///
/// Saturates at 2 in `y` and at ½ in `z`, where `ρ(z) = ρ(y = z^{1/4})/4`.
pub fn density_miura_trapezoid(f: f64, family: Family) -> Result<f64> {
    check(f)?;
    let y = y_of(f, family);
    let y4 = y * y * y * y;
    // (2/π)·k'·K(k) = k'/AGM(1, k'), finite as k' → 0. Below the transition
    // 1 − k'/a = ((1 − k') − (1 − a))/a keeps the small densities accurate.
    let s = 0.25 + y4;
    let rho = if y4 < 0.25 {
        let eps = 2.0 * y4 / s;
        let deficit = agm_deficit(eps);
        (eps - deficit) / (1.0 - deficit)
    } else {
        let kp = (y4 - 0.25) / s;
        1.0 + kp / agm(1.0, kp)
    };
    Ok(match family {
        Family::Y => rho,
        Family::Z => 0.25 * rho,
    })
}

/// `dρ/dy = 4(K − E)/(πy)`, or the `z` derivative `y·(dρ/dy)/(16z)`.
/// Diverges logarithmically at the transition.
pub fn density_derivative_miura_trapezoid(f: f64, family: Family) -> Result<f64> {
    check(f)?;
    let y = y_of(f, family);
    let y4 = y * y * y * y;
    let s = 0.25 + y4;
    let c = complete(y * y / s, libm::fabs(0.25 - y4) / s);
    let d = 4.0 * c.k_minus_e / (PI * y);
    Ok(match family {
        Family::Y => d,
        Family::Z => d * y / (16.0 * f),
    })
}

/// Barreto's Mars: `ρ(y) = 2y⁴/(1 + y⁴)`, `ρ(z) = z/(2(1 + z))`.
pub fn density_barreto(f: f64, family: Family) -> Result<f64> {
    check(f)?;
    Ok(match family {
        Family::Y => {
            let y4 = f * f * f * f;
            2.0 * y4 / (1.0 + y4)
        }
        Family::Z => f / (2.0 * (1.0 + f)),
    })
}

pub fn density_derivative_barreto(f: f64, family: Family) -> Result<f64> {
    check(f)?;
    Ok(match family {
        Family::Y => {
            let y4 = f * f * f * f;
            8.0 * f * f * f / ((1.0 + y4) * (1.0 + y4))
        }
        Family::Z => 0.5 / ((1.0 + f) * (1.0 + f)),
    })
}

/// The root `t(z)` of the 3-coloring with fugacities `(1, 1, z)`:
/// `t² = 2(1 − z)(1 + 8z)/(9(1 + 8z + √Q))`, `Q = 1 + 12z + 36z² + 32z³`,
/// for `z < 1`, and `t = √(z(z − 1))/(3z)` for `z ≥ 1`.
pub fn coloring_t(z: f64) -> Result<f64> {
    check(z)?;
    Ok(coloring_t_parts(z).0)
}

/// `(t, 1 − 9t²)`, the second computed without cancellation.
pub fn coloring_t_with_gap(z: f64) -> Result<(f64, f64)> {
    check(z)?;
    Ok(coloring_t_parts(z))
}

fn coloring_t_parts(z: f64) -> (f64, f64) {
    if z >= 1.0 {
        (libm::sqrt(z * (z - 1.0)) / (3.0 * z), 1.0 / z)
    } else {
        let rq = libm::sqrt(1.0 + z * (12.0 + z * (36.0 + 32.0 * z)));
        let den = 1.0 + 8.0 * z + rq;
        let s = 2.0 * (1.0 - z) * (1.0 + 8.0 * z) / (9.0 * den);
        let one_minus_9s = (32.0 * z * z * z / (rq + 1.0 + 6.0 * z) + 16.0 * z * z) / den;
        (libm::sqrt(s), one_minus_9s)
    }
}

/// `P = ⅓ ln z + ½ ln[64(1 − 9t²)^{2/3} / (27(1 + t)³(1 − 3t))]`.
pub fn coloring_pressure(z: f64) -> Result<f64> {
    check(z)?;
    let (t, d) = coloring_t_parts(z);
    // 1 − 3t = (1 − 9t²)/(1 + 3t)
    let one_minus_3t = d / (1.0 + 3.0 * t);
    Ok(libm::log(z) / 3.0
        + 0.5
            * (libm::log(64.0 / 27.0) + (2.0 / 3.0) * libm::log(d)
                - 3.0 * libm::log1p(t)
                - libm::log(one_minus_3t)))
}

// Differentiating P through the cubic (1 − 3t²)³/(1 − 9t²) = (1 + 2z)³/(27z²)
// gives ρ = z dP/dz = [2z(1 + 3t) − (1 − 3t)(2 + 3t)] / (9(1 + 2z) t (1 + t)),
// whose numerator has no cancellation as z → 0 because 1 − 3t = O(z²).
fn coloring_rho_parts(z: f64) -> (f64, f64, f64) {
    let (t, d) = coloring_t_parts(z);
    let one_minus_3t = d / (1.0 + 3.0 * t);
    let num = 2.0 * z * (1.0 + 3.0 * t) - one_minus_3t * (2.0 + 3.0 * t);
    let den = 9.0 * (1.0 + 2.0 * z) * t * (1.0 + t);
    (num, den, t)
}

/// Third-colour density `ρ = z dP/dz`; `ρ(1) = 1/3`, saturating at ½.
pub fn coloring_density(z: f64) -> Result<f64> {
    check(z)?;
    if z == 1.0 {
        return Ok(1.0 / 3.0);
    }
    if z > 1.0 {
        let t = coloring_t_parts(z).0;
        return Ok(1.0 / 3.0 + 2.0 * t / (3.0 * (1.0 + t)));
    }
    let (num, den, _) = coloring_rho_parts(z);
    Ok(num / den)
}

/// `dρ/dz` by the chain rule through `t(z)`; infinite at `z = 1`.
pub fn coloring_density_derivative(z: f64) -> Result<f64> {
    check(z)?;
    if z == 1.0 {
        return Ok(f64::INFINITY);
    }
    let (num, den, t) = coloring_rho_parts(z);
    let d = coloring_t_parts(z).1;
    // dt/dz from the cubic
    let dt = (6.0 / (1.0 + 2.0 * z) - 2.0 / z) * (1.0 - 3.0 * t * t) * d / (108.0 * t * t * t);
    if z > 1.0 {
        return Ok(2.0 * dt / (3.0 * (1.0 + t) * (1.0 + t)));
    }
    let dnum = 2.0 + 6.0 * t + (6.0 * z + 3.0 + 18.0 * t) * dt;
    let dden = 18.0 * t * (1.0 + t) + 9.0 * (1.0 + 2.0 * z) * (1.0 + 2.0 * t) * dt;
    Ok((dnum * den - num * dden) / (den * den))
}

/// Colour fugacity `z` of the 3-coloring transition.
pub const Z_CRITICAL_COLORING: f64 = 1.0;

/// `βP` per site. Crease families use the symmetric-weight free energy by
/// quadrature, which converges slowly at the transition itself.
pub fn pressure(model: GasModel, family: Family, f: f64, opts: &QuadOptions) -> Result<f64> {
    check(f)?;
    match model {
        GasModel::Miura => Ok(miura_symmetric_integrand(y_of(f, family)).free_energy(opts).value),
        GasModel::Trapezoid => Ok(trapezoid_symmetric_integrand(y_of(f, family)).free_energy(opts).value),
        GasModel::BarretoMars => {
            let z = match family {
                Family::Y => f * f * f * f,
                Family::Z => f,
            };
            Ok(0.5 * libm::log1p(z))
        }
        GasModel::Coloring => match family {
            Family::Z => coloring_pressure(f),
            Family::Y => Err(Error::Unsupported),
        },
    }
}

pub fn density(model: GasModel, family: Family, f: f64) -> Result<f64> {
    match model {
        GasModel::Miura | GasModel::Trapezoid => density_miura_trapezoid(f, family),
        GasModel::BarretoMars => density_barreto(f, family),
        GasModel::Coloring => match family {
            Family::Z => coloring_density(f),
            Family::Y => Err(Error::Unsupported),
        },
    }
}

pub fn density_derivative(model: GasModel, family: Family, f: f64) -> Result<f64> {
    match model {
        GasModel::Miura | GasModel::Trapezoid => density_derivative_miura_trapezoid(f, family),
        GasModel::BarretoMars => density_derivative_barreto(f, family),
        GasModel::Coloring => match family {
            Family::Z => coloring_density_derivative(f),
            Family::Y => Err(Error::Unsupported),
        },
    }
}

/// The transition fugacity of a curve, if it has one.
pub fn transition_fugacity(model: GasModel, family: Family) -> Option<f64> {
    match (model, family) {
        (GasModel::Miura | GasModel::Trapezoid, Family::Y) => Some(Y_CRITICAL),
        (GasModel::Miura | GasModel::Trapezoid, Family::Z) => Some(0.25),
        (GasModel::Coloring, Family::Z) => Some(Z_CRITICAL_COLORING),
        _ => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EosPoint {
    pub fugacity: f64,
    pub pressure: f64,
    pub density: f64,
    pub ddensity: f64,
    /// `(f/ρ²)·dρ/df` in the curve's own fugacity.
    pub compressibility: f64,
    /// The grid point is the transition fugacity.
    pub critical: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LatticeGasCurve {
    pub model: GasModel,
    pub family: Family,
    pub transition: Option<f64>,
    pub points: Vec<EosPoint>,
}

pub fn eos_point(model: GasModel, family: Family, f: f64, opts: &QuadOptions) -> Result<EosPoint> {
    let pressure = pressure(model, family, f, opts)?;
    let density = density(model, family, f)?;
    let ddensity = density_derivative(model, family, f)?;
    let critical = transition_fugacity(model, family).is_some_and(|c| libm::fabs(f - c) <= 1e-12 * c);
    Ok(EosPoint { fugacity: f, pressure, density, ddensity, compressibility: f * ddensity / (density * density), critical })
}

pub fn equation_of_state(model: GasModel, family: Family, grid: &[f64], opts: &QuadOptions) -> Result<LatticeGasCurve> {
    let points = grid.iter().map(|&f| eos_point(model, family, f, opts)).collect::<Result<Vec<_>>>()?;
    Ok(LatticeGasCurve { model, family, transition: transition_fugacity(model, family), points })
}

/// `n` fugacities spaced evenly in `ln f` over `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return alloc::vec![lo];
    }
    let (a, b) = (libm::log(lo), libm::log(hi));
    (0..n).map(|i| libm::exp(a + (b - a) * i as f64 / (n - 1) as f64)).collect()
}
