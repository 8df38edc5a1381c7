//! Pointwise discrete residuals of the six Tzitzéica equations.

use super::{CoordKind, GeometrySpec};
use crate::algebra::SurfaceClass;
use crate::pde::ScalarField;
use crate::{Error, Result};
use num_complex::Complex64 as C64;

/// Signs (c₁, c₂) of the nonlinear part: residual = Lω + c₁·e^ω + c₂·t·e^{−2ω}
/// with L the second-order operator (¼Δ conformal, ∂u∂v asymptotic) and
/// t = |Q|² for the conformal classes, Re(QR) for the asymptotic ones.
///
/// The CH² signs are (−1, −1): with the (2,1)-form and ⟨𝔣,𝔣⟩ = −1 the
/// structure equations give 𝔣_zz̄ = e^ω𝔣 and 𝔣_z̄z̄ = ω_z̄𝔣_z̄ + Q̄e^{−ω}𝔣_z,
/// whose integrability is ω_zz̄ = e^ω + |Q|²e^{−2ω}; this is also the one
/// flatness of the CH² Lax pair is equivalent to.
pub(crate) fn nonlinearity_signs(class: SurfaceClass) -> (f64, f64) {
    match class {
        SurfaceClass::Cp2 => (1.0, -1.0),
        SurfaceClass::Ch2 => (-1.0, -1.0),
        SurfaceClass::AffDefEll => (1.0, 1.0),
        SurfaceClass::AffDefHyp => (-1.0, 1.0),
        // ω_uv − e^ω + QR e^{−2ω}
        SurfaceClass::Ch21 | SurfaceClass::AffIndef => (-1.0, 1.0),
    }
}

/// The coefficient multiplying e^{−2ω}: |Q|² for conformal classes, the
/// (real) product QR for asymptotic ones.
pub(crate) fn cubic_coefficient(class: SurfaceClass, q: C64, r: C64) -> f64 {
    if class.is_conformal() {
        q.norm_sqr()
    } else {
        (q * r).re
    }
}

/// Discrete left-hand side of the class's Tzitzéica equation on the grid of
/// `omega`: second-order central differences in the interior, order-2
/// one-sided stencils at the boundary. Conformal classes use
/// ω_zz̄ = ¼(ω_xx + ω_yy).
pub fn tzitzeica_residual(
    geom: &GeometrySpec,
    omega: &ScalarField,
    q: &dyn Fn(f64, f64) -> C64,
    r: &dyn Fn(f64, f64) -> C64,
) -> Result<ScalarField> {
    let (na, nb) = omega.dims();
    if na < 3 || nb < 3 {
        return Err(Error::GridTooSmall(na, nb));
    }
    let lin = match geom.coord_kind {
        CoordKind::Conformal => {
            let xx = omega.second_a();
            let yy = omega.second_b();
            let mut out = xx.clone();
            for i in 0..na {
                for j in 0..nb {
                    out.set(i, j, 0.25 * (xx.get(i, j) + yy.get(i, j)));
                }
            }
            out
        }
        CoordKind::Asymptotic => omega.mixed_ab(),
    };
    let (c1, c2) = nonlinearity_signs(geom.class);
    let mut out = lin;
    for i in 0..na {
        for j in 0..nb {
            let (a, b) = (omega.a(i), omega.b(j));
            let w = omega.get(i, j);
            let t = cubic_coefficient(geom.class, q(a, b), r(a, b));
            let v = out.get(i, j) + c1 * w.exp() + c2 * t * (-2.0 * w).exp();
            out.set(i, j, v);
        }
    }
    Ok(out)
}
