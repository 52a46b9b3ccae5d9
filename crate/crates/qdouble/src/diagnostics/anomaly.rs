//! Mixed anomaly between the electric and magnetic one-form symmetries.
//!
//! An open flux ribbon η deposits a class-C flux at each end. A closed
//! diagonal loop ξ encircling exactly one of those ends reads the deposit:
//! the electric expectation picks up the factor χ_Γ(flux)/χ_Γ(e) relative
//! to the undressed state. The reported phase is that ratio rescaled by
//! d_Γ, so a clean anomaly comes out as the character χ_Γ evaluated on the
//! class representative, and the two symmetries visibly fail to commute
//! whenever it differs from d_Γ.

use super::swssb::dressed_state;
use crate::error::{QdError, Result};
use crate::group::{ConjugacyClass, FiniteGroup, Irrep};
use crate::lattice::{Ribbon, TorusLattice};
use crate::operators::{direct_holonomy, ribbon_electric};
use crate::states::DensityState;
use num_complex::Complex64;

#[derive(Debug, Clone)]
pub struct AnomalyReport {
    /// tr(F^Γ_ξ ρ)/tr ρ.
    pub electric_before: Complex64,
    /// tr(F^Γ_ξ σ)/tr σ for the dressed σ.
    pub electric_after: Complex64,
    /// tr σ / tr ρ.
    pub dressed_trace: f64,
    /// d_Γ · electric_after / electric_before; absent when the character
    /// vanishes on the class and the after-expectation must simply be zero.
    pub phase: Option<Complex64>,
    /// χ_Γ at the class representative.
    pub expected: Complex64,
    pub character_zero: bool,
}

/// Expectation of the diagonal loop operator, normalized by the trace.
fn electric_expectation(
    group: &FiniteGroup,
    ir: &Irrep,
    lat: &TorusLattice,
    rho: &DensityState,
    xi: &Ribbon,
) -> f64Pair {
    let codec = rho.codec();
    let scale = ir.dim as f64 / group.order() as f64;
    match rho {
        DensityState::ClassicalDiagonal(cl) => {
            let mut num = Complex64::new(0.0, 0.0);
            let mut den = 0.0;
            for (&c, &p) in cl.probs() {
                let a = direct_holonomy(group, lat, xi, codec, c);
                num += ir.character(group.inv(a)) * scale * p;
                den += p;
            }
            f64Pair { num, den }
        }
        DensityState::PureEnsemble(en) => {
            let mut num = Complex64::new(0.0, 0.0);
            let mut den = 0.0;
            for (w, psi) in en.members() {
                let img = ribbon_electric(group, ir, lat, psi, xi);
                num += psi.inner(&img) * *w;
                den += w;
            }
            f64Pair { num, den }
        }
        DensityState::Dense(d) => {
            let mut num = Complex64::new(0.0, 0.0);
            for (j, &b) in d.basis().iter().enumerate() {
                let a = direct_holonomy(group, lat, xi, codec, b);
                num += ir.character(group.inv(a)) * scale * d.matrix()[(j, j)];
            }
            f64Pair { num, den: d.matrix().trace().re }
        }
    }
}

#[allow(non_camel_case_types)]
struct f64Pair {
    num: Complex64,
    den: f64,
}

/// Measure the anomaly of (Γ, C) on ρ: dress with the open ribbon η, then
/// compare the closed-loop electric expectation before and after. ξ must
/// enclose exactly one endpoint of η for the textbook value to appear;
/// the function itself only insists that ξ is closed and η is open.
pub fn anomaly_phase(
    group: &FiniteGroup,
    lat: &TorusLattice,
    rho: &DensityState,
    ir: &Irrep,
    class: &ConjugacyClass,
    xi: &Ribbon,
    eta: &Ribbon,
) -> Result<AnomalyReport> {
    if !xi.is_closed() {
        return Err(QdError::OpenRibbon);
    }
    if eta.is_closed() {
        return Err(QdError::Config(
            "flux dressing ribbon must be open; a closed one deposits no endpoint flux".into(),
        ));
    }
    let before = electric_expectation(group, ir, lat, rho, xi);
    if before.den < 1e-12 {
        return Err(QdError::Degenerate("state trace vanishes".into()));
    }
    let dressed = dressed_state(group, lat, rho, class, eta)?;
    let after = electric_expectation(group, ir, lat, &dressed, xi);
    let dressed_trace = after.den / before.den;
    if dressed_trace < 1e-12 {
        return Err(QdError::Degenerate(
            "dressing annihilates the state; no anomaly to report".into(),
        ));
    }
    let electric_before = before.num / before.den;
    let electric_after = after.num / after.den;
    let expected = ir.character(class.representative);
    let character_zero = expected.norm() < 1e-12;
    let phase = if character_zero {
        None
    } else if electric_before.norm() < 1e-12 {
        return Err(QdError::Degenerate(
            "electric expectation vanishes before dressing; phase undefined".into(),
        ));
    } else {
        Some(electric_after / electric_before * ir.dim as f64)
    };
    Ok(AnomalyReport {
        electric_before,
        electric_after,
        dressed_trace,
        phase,
        expected,
        character_zero,
    })
}
