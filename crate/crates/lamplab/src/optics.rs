//! Four-port interferometer: phase shifters, variable beam splitter, the
//! composed device unitary, and parameter synthesis for diagonal targets.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

use crate::qubit::{reduce_angle, U2Params, Unitary2};

#[derive(Debug, Error)]
pub enum OpticsError {
    #[error("no parameter branch reaches the target: best residual {residual:e}")]
    NoSolution { residual: f64 },
    #[error("angle range reduction altered the realized matrix (residual {residual:e})")]
    RangeReduction { residual: f64 },
    #[error("target is not unitary: deviation {deviation:e}")]
    TargetNotUnitary { deviation: f64 },
    #[error("network contains no elements")]
    EmptyNetwork,
}

/// A single element in the beam path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "param", rename_all = "lowercase")]
pub enum OpticalElement {
    /// diag(e^{i phase}, 1)
    Ps0(f64),
    /// diag(1, e^{i phase})
    Ps1(f64),
    /// Beam splitter with transmission cos^2(omega), reflectivity sin^2(omega).
    Bs(f64),
}

impl OpticalElement {
    pub fn matrix(&self) -> Unitary2 {
        match *self {
            OpticalElement::Ps0(phase) => phase_shifter_matrix(phase, 0),
            OpticalElement::Ps1(phase) => phase_shifter_matrix(phase, 1),
            OpticalElement::Bs(omega) => beamsplitter_matrix(omega),
        }
    }
}

/// Elements in beam-propagation order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpticalNetwork {
    pub elements: Vec<OpticalElement>,
}

/// Parameters realizing a target unitary, with the achieved residual and the
/// global phase that was factored out.
#[derive(Debug, Clone, Serialize)]
pub struct SynthesisResult {
    pub params: U2Params,
    pub residual: f64,
    pub global_phase: f64,
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// diag(e^{i phase}, 1) for port 0, diag(1, e^{i phase}) for port 1.
pub fn phase_shifter_matrix(phase: f64, port: u8) -> Unitary2 {
    let e = C64::from_polar(1.0, phase);
    let one = c(1.0, 0.0);
    let zero = c(0.0, 0.0);
    match port {
        0 => Unitary2::from_entries_unchecked([[e, zero], [zero, one]]),
        1 => Unitary2::from_entries_unchecked([[one, zero], [zero, e]]),
        _ => panic!("port must be 0 or 1"),
    }
}

/// Lossless beam splitter [[i sin w, cos w], [cos w, i sin w]]; each
/// reflection carries the factor i.
pub fn beamsplitter_matrix(omega: f64) -> Unitary2 {
    let (s, co) = omega.sin_cos();
    Unitary2::from_entries_unchecked([
        [c(0.0, s), c(co, 0.0)],
        [c(co, 0.0), c(0.0, s)],
    ])
}

/// Product of the element matrices in reverse propagation order.
pub fn network_unitary(network: &OpticalNetwork) -> Result<Unitary2, OpticsError> {
    let mut iter = network.elements.iter().rev();
    let first = iter.next().ok_or(OpticsError::EmptyNetwork)?;
    let mut acc = first.matrix();
    for el in iter {
        acc = acc.mul(&el.matrix());
    }
    Ok(acc)
}

/// The four-element device in propagation order: phase alpha+beta on port 0,
/// phase beta on port 1, the splitter, phase phi on port 0.
pub fn device_network(omega: f64, alpha: f64, beta: f64, phi: f64) -> OpticalNetwork {
    OpticalNetwork {
        elements: vec![
            OpticalElement::Ps0(alpha + beta),
            OpticalElement::Ps1(beta),
            OpticalElement::Bs(omega),
            OpticalElement::Ps0(phi),
        ],
    }
}

/// Closed form of the device unitary:
/// [[i e^{i(a+b+f)} sin w, e^{i(b+f)} cos w],
///  [e^{i(a+b)} cos w,     i e^{i b} sin w]].
pub fn ubs(omega: f64, alpha: f64, beta: f64, phi: f64) -> Unitary2 {
    let (s, co) = omega.sin_cos();
    let i = c(0.0, 1.0);
    Unitary2::from_entries_unchecked([
        [
            i * C64::from_polar(s, alpha + beta + phi),
            C64::from_polar(co, beta + phi),
        ],
        [
            C64::from_polar(co, alpha + beta),
            i * C64::from_polar(s, beta),
        ],
    ])
}

fn diag_target(top: f64, bottom: f64) -> Unitary2 {
    Unitary2::from_entries_unchecked([
        [C64::from_polar(1.0, top), c(0.0, 0.0)],
        [c(0.0, 0.0), C64::from_polar(1.0, bottom)],
    ])
}

fn finish_diag_synthesis(params: U2Params, target: &Unitary2) -> Result<SynthesisResult, OpticsError> {
    let realized = ubs(params.omega, params.alpha, params.beta, params.phi);
    let residual = realized.max_abs_diff(target);
    if residual >= 1e-12 {
        return Err(OpticsError::RangeReduction { residual });
    }
    Ok(SynthesisResult { params, residual, global_phase: 0.0 })
}

/// Device parameters realizing diag(e^{i lambda}, e^{i lambda}).  The alpha
/// angle is a free gauge, fixed to 0.
pub fn synthesize_equal_phase_diag(lambda: f64) -> Result<SynthesisResult, OpticsError> {
    let params = U2Params {
        omega: PI / 2.0,
        alpha: 0.0,
        beta: reduce_angle(lambda - PI / 2.0),
        phi: 0.0,
    };
    finish_diag_synthesis(params, &diag_target(lambda, lambda))
}

/// Device parameters realizing diag(e^{i lambda}, e^{-i lambda}).  The raw
/// solution (pi/2, 2 lambda, -pi/2 - lambda, 0) can leave alpha outside its
/// range; for omega = pi/2 only alpha + phi enters the matrix, so the sum
/// 2 lambda is split evenly between alpha and phi.
pub fn synthesize_opposite_phase_diag(lambda: f64) -> Result<SynthesisResult, OpticsError> {
    let sum = reduce_angle(2.0 * lambda);
    let params = U2Params {
        omega: PI / 2.0,
        alpha: sum / 2.0,
        beta: reduce_angle(-PI / 2.0 - lambda),
        phi: sum / 2.0,
    };
    finish_diag_synthesis(params, &diag_target(lambda, -lambda))
}

const GENERAL_RESIDUAL_LIMIT: f64 = 1e-8;

/// Recovers (omega, alpha, beta, phi) and a global phase such that
/// e^{i theta} ubs(params) matches the target.  The magnitudes fix omega;
/// entry arguments fix the phases up to branch choices, resolved by residual
/// minimization over the finite branch set.
pub fn synthesize_general(target: &Unitary2) -> Result<SynthesisResult, OpticsError> {
    let deviation = target.unitarity_deviation();
    if deviation > 1e-10 {
        return Err(OpticsError::TargetNotUnitary { deviation });
    }
    let t00 = target.entry(0, 0);
    let t01 = target.entry(0, 1);
    let t10 = target.entry(1, 0);
    let t11 = target.entry(1, 1);
    // |t00| = |sin w|, |t01| = |cos w|; base branch in [0, pi/2]
    let omega0 = t00.norm().atan2(t01.norm());

    // phase equations for the generic branch (sin, cos > 0):
    //   arg t00 = th + a + b + f + pi/2     arg t01 = th + b + f
    //   arg t10 = th + a + b                arg t11 = th + b + pi/2
    let half = PI / 2.0;
    let (alpha0, beta0, phi0) = if omega0.sin() < 1e-8 {
        // diagonal entries vanish; split the off-diagonal args
        let b = reduce_angle(t01.arg());
        (reduce_angle(t10.arg() - b), b, 0.0)
    } else if omega0.cos() < 1e-8 {
        // off-diagonal entries vanish
        let b = reduce_angle(t11.arg() - half);
        (reduce_angle(t00.arg() - half - b), b, 0.0)
    } else {
        let b = reduce_angle(t11.arg() - half);
        (
            reduce_angle(t10.arg() - b),
            b,
            reduce_angle(t01.arg() - b),
        )
    };

    let mut best: Option<SynthesisResult> = None;
    let omega_branches = [omega0, -omega0, PI - omega0, omega0 - PI];
    let shifts = [0.0, PI, -PI];
    for &omega in &omega_branches {
        if !(-PI..=PI).contains(&omega) {
            continue;
        }
        for &da in &shifts {
            let alpha = reduce_angle(alpha0 + da);
            if alpha.abs() > half + 1e-12 {
                continue;
            }
            for &df in &shifts {
                let phi = reduce_angle(phi0 + df);
                if phi.abs() > half + 1e-12 {
                    continue;
                }
                for &db in &shifts {
                    let beta = reduce_angle(beta0 + db);
                    let candidate = ubs(omega, alpha, beta, phi);
                    // optimal global phase aligns the largest target entry
                    let (r, cidx) = if t00.norm() >= t01.norm() { (0, 0) } else { (0, 1) };
                    let m = candidate.entry(r, cidx);
                    let t = target.entry(r, cidx);
                    let theta = if m.norm() > 1e-12 { (t / m).arg() } else { 0.0 };
                    let aligned = candidate.scale(C64::from_polar(1.0, theta));
                    let residual = aligned.max_abs_diff(target);
                    if best.as_ref().map_or(true, |b| residual < b.residual) {
                        best = Some(SynthesisResult {
                            params: U2Params {
                                omega,
                                alpha: alpha.clamp(-half, half),
                                beta,
                                phi: phi.clamp(-half, half),
                            },
                            residual,
                            global_phase: reduce_angle(theta),
                        });
                    }
                }
            }
        }
    }
    let best = best.expect("branch set is non-empty");
    if best.residual > GENERAL_RESIDUAL_LIMIT {
        return Err(OpticsError::NoSolution { residual: best.residual });
    }
    Ok(best)
}
