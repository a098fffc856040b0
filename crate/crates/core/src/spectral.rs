//! Bath spectral densities and the decoherence functions they induce.
//!
//! For a bath in its ground state the decoherence function of a dephasing
//! qubit splits into a damping part `G_R(t) = ∫ J(ω) (1 - cos ωt) / ω² dω`
//! and a phase part `ψ(t) = ∫ J(ω) sin ωt / ω² dω`. Both have closed forms
//! for the Ohmic family and the Lorentzian density; the quadrature oracle at
//! the bottom of this module evaluates the defining integrals directly.
//!
//! Times are elapsed times since the probe qubit started interacting with
//! the bath. Ohmic times are naturally measured in units of `1/ω_c` and
//! Lorentzian times in units of `1/λ` (`ħ = 1`).

use std::f64::consts::PI;

use statrs::function::gamma::gamma;

use crate::error::{check_time, invalid, Result};
use crate::quadrature::{integrate, integrate_to_infinity, QuadratureSettings};

/// Distance from `s = 1` below which the logarithmic Ohmic branch is used.
pub const OHMIC_LOG_BRANCH_WIDTH: f64 = 1e-12;

/// Bath spectral density `J(ω)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectralDensity {
    /// `J(ω) = η ω^s ω_c^{1-s} e^{-ω/ω_c}` for `ω ≥ 0`.
    Ohmic { eta: f64, s: f64, omega_c: f64 },
    /// `J(ω) = (γ / 2π) λ² / ((ω - δ)² + λ²)`.
    Lorentzian { gamma: f64, lambda: f64, delta: f64 },
}

impl SpectralDensity {
    pub fn ohmic(eta: f64, s: f64, omega_c: f64) -> Result<Self> {
        let bath = SpectralDensity::Ohmic { eta, s, omega_c };
        bath.validate()?;
        Ok(bath)
    }

    pub fn lorentzian(gamma: f64, lambda: f64, delta: f64) -> Result<Self> {
        let bath = SpectralDensity::Lorentzian { gamma, lambda, delta };
        bath.validate()?;
        Ok(bath)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            SpectralDensity::Ohmic { eta, s, omega_c } => {
                if !(eta >= 0.0 && eta.is_finite()) {
                    return Err(invalid("eta", format!("must be finite and >= 0, got {eta}")));
                }
                if !(s > 0.0 && s.is_finite()) {
                    return Err(invalid("s", format!("must be finite and > 0, got {s}")));
                }
                if !(omega_c > 0.0 && omega_c.is_finite()) {
                    return Err(invalid("omega_c", format!("must be finite and > 0, got {omega_c}")));
                }
            }
            SpectralDensity::Lorentzian { gamma, lambda, delta } => {
                if !(gamma >= 0.0 && gamma.is_finite()) {
                    return Err(invalid("gamma", format!("must be finite and >= 0, got {gamma}")));
                }
                if !(lambda > 0.0 && lambda.is_finite()) {
                    return Err(invalid("lambda", format!("must be finite and > 0, got {lambda}")));
                }
                if !(delta >= 0.0 && delta.is_finite()) {
                    return Err(invalid("delta", format!("must be finite and >= 0, got {delta}")));
                }
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> &'static str {
        match self {
            SpectralDensity::Ohmic { .. } => "ohmic",
            SpectralDensity::Lorentzian { .. } => "lorentzian",
        }
    }

    /// `J(ω)`. The Ohmic family vanishes for negative frequencies.
    pub fn density(&self, omega: f64) -> f64 {
        match *self {
            SpectralDensity::Ohmic { eta, s, omega_c } => {
                if omega <= 0.0 {
                    0.0
                } else {
                    let x = omega / omega_c;
                    eta * omega_c * x.powf(s) * (-x).exp()
                }
            }
            SpectralDensity::Lorentzian { gamma, lambda, delta } => {
                let d = omega - delta;
                gamma / (2.0 * PI) * lambda * lambda / (d * d + lambda * lambda)
            }
        }
    }

    /// Natural time unit of the bath: `1/ω_c` or `1/λ`.
    pub fn time_unit(&self) -> f64 {
        match *self {
            SpectralDensity::Ohmic { omega_c, .. } => 1.0 / omega_c,
            SpectralDensity::Lorentzian { lambda, .. } => 1.0 / lambda,
        }
    }
}

/// Settings of the auxiliary qubit that disturbs the bath before the probe
/// qubit couples to it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisturbanceConfig {
    pub enabled: bool,
    /// Duration of the auxiliary qubit's interaction with the bath.
    pub t_a: f64,
    /// `⟨σ_z⟩` of the auxiliary qubit's initial state.
    pub sz_a: f64,
}

impl DisturbanceConfig {
    pub fn off() -> Self {
        Self {
            enabled: false,
            t_a: 0.0,
            sz_a: 1.0,
        }
    }

    pub fn new(t_a: f64, sz_a: f64) -> Result<Self> {
        let dist = Self {
            enabled: true,
            t_a,
            sz_a,
        };
        dist.validate()?;
        Ok(dist)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_a >= 0.0 && self.t_a.is_finite()) {
            return Err(invalid("t_a", format!("must be finite and >= 0, got {}", self.t_a)));
        }
        if !(self.sz_a.abs() <= 1.0) {
            return Err(invalid("sz_a", format!("must lie in [-1, 1], got {}", self.sz_a)));
        }
        Ok(())
    }

    /// True when the disturbance contributes a cross term at all.
    pub fn is_active(&self) -> bool {
        self.enabled && self.t_a > 0.0
    }
}

impl Default for DisturbanceConfig {
    fn default() -> Self {
        Self::off()
    }
}

/// A validated bath with its t-independent constants precomputed.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Decoherence {
    Logarithmic {
        eta: f64,
        omega_c: f64,
    },
    PowerLaw {
        eta: f64,
        omega_c: f64,
        /// `s - 1`
        order: f64,
        s: f64,
        gamma_order: f64,
        gamma_s: f64,
    },
    Lorentzian {
        lambda: f64,
        delta: f64,
        /// `γ / (2λ (1 + (δ/λ)²))`
        scale: f64,
        /// `(1 - (δ/λ)²) / (1 + (δ/λ)²)`
        cos_weight: f64,
        /// `2 (δ/λ) / (1 + (δ/λ)²)`
        sin_weight: f64,
    },
}

impl Decoherence {
    pub(crate) fn new(bath: &SpectralDensity) -> Result<Self> {
        bath.validate()?;
        Ok(match *bath {
            SpectralDensity::Ohmic { eta, s, omega_c } => {
                if (s - 1.0).abs() < OHMIC_LOG_BRANCH_WIDTH {
                    Decoherence::Logarithmic { eta, omega_c }
                } else {
                    Decoherence::PowerLaw {
                        eta,
                        omega_c,
                        order: s - 1.0,
                        s,
                        gamma_order: gamma(s - 1.0),
                        gamma_s: gamma(s),
                    }
                }
            }
            SpectralDensity::Lorentzian { gamma, lambda, delta } => {
                let r = delta / lambda;
                let norm = 1.0 + r * r;
                Decoherence::Lorentzian {
                    lambda,
                    delta,
                    scale: gamma / (2.0 * lambda * norm),
                    cos_weight: (1.0 - r * r) / norm,
                    sin_weight: 2.0 * r / norm,
                }
            }
        })
    }

    /// `G_R(t)` for `t ≥ 0`.
    pub(crate) fn g_real(&self, t: f64) -> f64 {
        match *self {
            Decoherence::Logarithmic { eta, omega_c } => {
                let x = omega_c * t;
                0.5 * eta * (x * x).ln_1p()
            }
            Decoherence::PowerLaw {
                eta,
                omega_c,
                order,
                gamma_order,
                ..
            } => {
                // 1 - e^{u} cos v  =  -expm1(u) + 2 e^{u} sin²(v/2); avoids the
                // cancellation near s = 1 where Γ(s-1) blows up.
                let x = omega_c * t;
                let u = -0.5 * order * (x * x).ln_1p();
                let half_v = 0.5 * order * x.atan();
                let bracket = -u.exp_m1() + 2.0 * u.exp() * half_v.sin().powi(2);
                eta * gamma_order * bracket
            }
            Decoherence::Lorentzian {
                lambda,
                delta,
                scale,
                cos_weight,
                sin_weight,
            } => {
                let damp = (-lambda * t).exp();
                let (sin, cos) = (delta * t).sin_cos();
                scale * (lambda * t - cos_weight * (1.0 - damp * cos) - sin_weight * damp * sin)
            }
        }
    }

    /// `ψ(t)` for `t ≥ 0`, normalised so that `ψ(0) = 0`.
    pub(crate) fn psi(&self, t: f64) -> f64 {
        match *self {
            Decoherence::Logarithmic { eta, omega_c } => eta * (omega_c * t).atan(),
            Decoherence::PowerLaw {
                eta,
                omega_c,
                order,
                gamma_order,
                ..
            } => {
                let x = omega_c * t;
                let modulus = (-0.5 * order * (x * x).ln_1p()).exp();
                eta * gamma_order * modulus * (order * x.atan()).sin()
            }
            Decoherence::Lorentzian {
                lambda,
                delta,
                scale,
                cos_weight,
                sin_weight,
            } => {
                let damp = (-lambda * t).exp();
                let (sin, cos) = (delta * t).sin_cos();
                scale * (sin_weight - damp * (cos_weight * sin + sin_weight * cos))
            }
        }
    }

    /// `dG_R/dt = ∫ J(ω) sin(ωt) / ω dω`.
    pub(crate) fn g_real_rate(&self, t: f64) -> f64 {
        match *self {
            Decoherence::Logarithmic { eta, omega_c } => {
                let x = omega_c * t;
                eta * omega_c * x / (1.0 + x * x)
            }
            Decoherence::PowerLaw {
                eta,
                omega_c,
                s,
                gamma_s,
                ..
            } => {
                let x = omega_c * t;
                let modulus = (-0.5 * s * (x * x).ln_1p()).exp();
                eta * omega_c * gamma_s * modulus * (s * x.atan()).sin()
            }
            Decoherence::Lorentzian {
                lambda, delta, scale, ..
            } => {
                let damp = (-lambda * t).exp();
                let (sin, cos) = (delta * t).sin_cos();
                scale * (lambda - damp * (lambda * cos - delta * sin))
            }
        }
    }

    /// `dψ/dt = ∫ J(ω) cos(ωt) / ω dω`.
    pub(crate) fn psi_rate(&self, t: f64) -> f64 {
        match *self {
            Decoherence::Logarithmic { eta, omega_c } => {
                let x = omega_c * t;
                eta * omega_c / (1.0 + x * x)
            }
            Decoherence::PowerLaw {
                eta,
                omega_c,
                s,
                gamma_s,
                ..
            } => {
                let x = omega_c * t;
                let modulus = (-0.5 * s * (x * x).ln_1p()).exp();
                eta * omega_c * gamma_s * modulus * (s * x.atan()).cos()
            }
            Decoherence::Lorentzian {
                lambda, delta, scale, ..
            } => {
                let damp = (-lambda * t).exp();
                let (sin, cos) = (delta * t).sin_cos();
                scale * damp * (lambda * sin + delta * cos)
            }
        }
    }
}

/// Disturbance cross term evaluator: `G_I(t) = ψ(t + T_A) - ψ(t) - ψ(T_A)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct CrossTerm {
    t_a: f64,
    psi_t_a: f64,
}

impl CrossTerm {
    pub(crate) fn new(deco: &Decoherence, dist: &DisturbanceConfig) -> Option<Self> {
        dist.is_active().then(|| CrossTerm {
            t_a: dist.t_a,
            psi_t_a: deco.psi(dist.t_a),
        })
    }

    pub(crate) fn value(&self, deco: &Decoherence, t: f64) -> f64 {
        deco.psi(t + self.t_a) - deco.psi(t) - self.psi_t_a
    }

    pub(crate) fn rate(&self, deco: &Decoherence, t: f64) -> f64 {
        deco.psi_rate(t + self.t_a) - deco.psi_rate(t)
    }
}

/// Damping part of the decoherence function, `G_R(t) ≥ 0`.
pub fn g_real(bath: &SpectralDensity, t: f64) -> Result<f64> {
    check_time(t)?;
    Ok(Decoherence::new(bath)?.g_real(t))
}

/// Phase function `ψ(t) = ∫ J(ω) sin ωt / ω² dω`.
pub fn psi(bath: &SpectralDensity, t: f64) -> Result<f64> {
    check_time(t)?;
    Ok(Decoherence::new(bath)?.psi(t))
}

/// Time derivative of [`g_real`].
pub fn g_real_rate(bath: &SpectralDensity, t: f64) -> Result<f64> {
    check_time(t)?;
    Ok(Decoherence::new(bath)?.g_real_rate(t))
}

/// Time derivative of [`psi`].
pub fn psi_rate(bath: &SpectralDensity, t: f64) -> Result<f64> {
    check_time(t)?;
    Ok(Decoherence::new(bath)?.psi_rate(t))
}

/// Cross term left in the bath by the auxiliary qubit,
/// `G_I(t) = ψ(t + T_A) - ψ(t) - ψ(T_A)`; identically zero when the
/// disturbance is off or `T_A = 0`.
pub fn g_imag_cross(bath: &SpectralDensity, dist: &DisturbanceConfig, t: f64) -> Result<f64> {
    check_time(t)?;
    dist.validate()?;
    let deco = Decoherence::new(bath)?;
    Ok(CrossTerm::new(&deco, dist).map_or(0.0, |cross| cross.value(&deco, t)))
}

/// Which defining integral the oracle evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    /// `J(ω) (1 - cos ωt) / ω²`, giving `G_R(t)`.
    GReal,
    /// `J(ω) sin ωt / ω²`, giving `ψ(t)`.
    Psi,
}

/// Frequency domain of the oracle integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// `ω ∈ [0, ∞)`.
    HalfLine,
    /// `ω ∈ (-∞, ∞)`; the `Psi` kernel is then a principal value.
    FullLine,
}

impl Domain {
    /// The domain on which the closed forms of [`g_real`] and [`psi`] hold.
    pub fn closed_form_domain(bath: &SpectralDensity) -> Domain {
        match bath {
            SpectralDensity::Ohmic { .. } => Domain::HalfLine,
            SpectralDensity::Lorentzian { .. } => Domain::FullLine,
        }
    }
}

/// Evaluate the defining spectral integral of `G_R` or `ψ` by adaptive
/// quadrature, on the domain where the closed forms hold.
pub fn oracle_quadrature(bath: &SpectralDensity, kernel: Kernel, t: f64) -> Result<f64> {
    oracle_quadrature_with(
        bath,
        kernel,
        t,
        Domain::closed_form_domain(bath),
        &QuadratureSettings::default(),
    )
}

/// [`oracle_quadrature`] with an explicit domain and tolerances.
///
/// The range is split at `ω = A` (50 natural widths past the spectral
/// weight). The head `[0, A]` is integrated in `u = √ω`, which removes the
/// `ω^{s-1}` endpoint singularity of the sub-Ohmic `ψ` kernel; the tail is
/// mapped onto a finite interval. On the full line the negative frequencies
/// are folded onto the positive axis using the parity of each kernel.
pub fn oracle_quadrature_with(
    bath: &SpectralDensity,
    kernel: Kernel,
    t: f64,
    domain: Domain,
    settings: &QuadratureSettings,
) -> Result<f64> {
    check_time(t)?;
    bath.validate()?;
    if t == 0.0 {
        return Ok(0.0);
    }

    let folded = |omega: f64| -> f64 {
        let j = match (domain, kernel) {
            (Domain::HalfLine, _) => bath.density(omega),
            (Domain::FullLine, Kernel::GReal) => bath.density(omega) + bath.density(-omega),
            (Domain::FullLine, Kernel::Psi) => bath.density(omega) - bath.density(-omega),
        };
        if j == 0.0 {
            return 0.0;
        }
        let k = match kernel {
            Kernel::GReal => {
                let h = (0.5 * omega * t).sin();
                2.0 * h * h / (omega * omega)
            }
            Kernel::Psi => (omega * t).sin() / (omega * omega),
        };
        j * k
    };

    let split = match *bath {
        SpectralDensity::Ohmic { omega_c, s, .. } => (50.0 + 2.0 * s) * omega_c,
        SpectralDensity::Lorentzian { lambda, delta, .. } => delta + 50.0 * lambda,
    };

    let head = integrate(|u: f64| 2.0 * u * folded(u * u), 0.0, split.sqrt(), settings)?;
    let tail = integrate_to_infinity(folded, split, settings)?;
    Ok(head.value + tail.value)
}
