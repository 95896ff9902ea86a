//! State and channel constructors: the singlet source, the birefringent-quartz
//! phase-damping channel, and Werner/random families for testing.

use crate::error::{Error, Result};
use crate::qlinalg::{C64, ComplexMatrix, DensityMatrix, SystemShape, C_ZERO};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// Speed of light, m/s.
const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Calibration of the quartz thickness → coherence model.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CalibrationParams {
    /// Birefringence Δn of the quartz crystal (dimensionless).
    pub birefringence: f64,
    /// Center wavelength λ₀ in nanometers.
    pub center_wavelength_nm: f64,
    /// Spectral FWHM Δλ in nanometers.
    pub bandwidth_fwhm_nm: f64,
}

impl Default for CalibrationParams {
    fn default() -> Self {
        // 780 nm center with 3 nm interference filters; Δn is the standard
        // quartz value. Documentation-level defaults, not fitted to data.
        Self {
            birefringence: 0.00871,
            center_wavelength_nm: 780.0,
            bandwidth_fwhm_nm: 3.0,
        }
    }
}

impl CalibrationParams {
    pub fn validate(&self) -> Result<()> {
        if self.birefringence <= 0.0
            || self.center_wavelength_nm <= 0.0
            || self.bandwidth_fwhm_nm <= 0.0
        {
            return Err(Error::arg("calibration parameters must be positive"));
        }
        if self.bandwidth_fwhm_nm >= self.center_wavelength_nm {
            return Err(Error::arg("bandwidth must be below the center wavelength"));
        }
        Ok(())
    }
}

/// How much dephasing to apply: either the coherence factor directly, or a
/// quartz thickness resolved through a [`CalibrationParams`] model.
#[derive(Debug, Clone, Copy)]
pub enum PhaseDampingSpec {
    /// Off-diagonal retention factor d ∈ [0, 1].
    Coherence(f64),
    /// Quartz thickness in millimeters plus the spectral model.
    Thickness {
        mm: f64,
        calibration: CalibrationParams,
    },
}

impl PhaseDampingSpec {
    /// Resolve to a coherence factor d ∈ [0, 1].
    pub fn coherence(&self) -> Result<f64> {
        match *self {
            PhaseDampingSpec::Coherence(d) => {
                if !(0.0..=1.0).contains(&d) {
                    return Err(Error::arg(format!("coherence {d} outside [0,1]")));
                }
                Ok(d)
            }
            PhaseDampingSpec::Thickness { mm, calibration } => quartz_to_coherence(mm, &calibration),
        }
    }
}

/// The polarization singlet (|HV⟩ − |VH⟩)/√2 as a density matrix on `[2,2]`.
pub fn bell_singlet() -> DensityMatrix {
    let inv = std::f64::consts::FRAC_1_SQRT_2;
    let psi = [C_ZERO, C64::new(inv, 0.0), C64::new(-inv, 0.0), C_ZERO];
    DensityMatrix::new(ComplexMatrix::outer(&psi, &psi), SystemShape::qubits(2))
        .expect("singlet projector is a valid state")
}

/// Dephase one qubit of a multi-qubit state in the H/V basis: every element
/// connecting H and V of the target qubit is multiplied by `d`.
pub fn phase_damp(rho: &DensityMatrix, d: f64, target: usize) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&d) {
        return Err(Error::arg(format!("damping factor {d} outside [0,1]")));
    }
    let dims = rho.shape().dims();
    if target >= dims.len() {
        return Err(Error::arg(format!(
            "target {target} out of range for {} subsystems",
            dims.len()
        )));
    }
    if dims[target] != 2 {
        return Err(Error::arg("phase damping targets a qubit subsystem"));
    }
    // big-endian stride of the target digit
    let stride: usize = dims[target + 1..].iter().product();

    let side = rho.dim();
    let m = rho.matrix();
    let damped = ComplexMatrix::from_fn(side, side, |i, j| {
        let bit_i = (i / stride) % 2;
        let bit_j = (j / stride) % 2;
        if bit_i != bit_j {
            m.get(i, j) * C64::new(d, 0.0)
        } else {
            m.get(i, j)
        }
    });
    DensityMatrix::new(damped, rho.shape().clone())
}

/// The singlet after phase damping with coherence `d` on qubit A.
pub fn dephased_singlet(d: f64) -> Result<DensityMatrix> {
    phase_damp(&bell_singlet(), d, 0)
}

/// Coherence retained after traversing `thickness_mm` of quartz, for a
/// Gaussian spectrum: d(L) = exp(−½ (σ_ω Δn L / c)²) with
/// σ_ω = 2π c Δλ / (λ₀² √(8 ln 2)).
pub fn quartz_to_coherence(thickness_mm: f64, cal: &CalibrationParams) -> Result<f64> {
    if thickness_mm < 0.0 {
        return Err(Error::arg("quartz thickness must be ≥ 0"));
    }
    cal.validate()?;
    let lambda0 = cal.center_wavelength_nm * 1e-9;
    let dlambda = cal.bandwidth_fwhm_nm * 1e-9;
    let sigma_omega = 2.0 * std::f64::consts::PI * SPEED_OF_LIGHT * dlambda
        / (lambda0 * lambda0 * (8.0 * std::f64::consts::LN_2).sqrt());
    let delay = cal.birefringence * thickness_mm * 1e-3 / SPEED_OF_LIGHT;
    let arg = sigma_omega * delay;
    Ok((-0.5 * arg * arg).exp())
}

/// Werner state p·|ψ⁻⟩⟨ψ⁻| + (1−p)·I/4.
pub fn werner(p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::arg(format!("werner parameter {p} outside [0,1]")));
    }
    let singlet = bell_singlet();
    let mixed = ComplexMatrix::identity(4).scale(C64::new((1.0 - p) / 4.0, 0.0));
    let m = singlet.matrix().scale(C64::new(p, 0.0)).add(&mixed);
    DensityMatrix::new(m, SystemShape::qubits(2))
}

/// Ginibre-induced random two-qubit state: draw a 4×rank complex Gaussian G
/// and return GG†/Tr(GG†). Deterministic for a fixed seed.
pub fn random_density(seed: u64, rank: usize) -> Result<DensityMatrix> {
    if !(1..=4).contains(&rank) {
        return Err(Error::arg(format!("rank {rank} outside 1..=4")));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut g = ComplexMatrix::zeros(4, rank);
    for i in 0..4 {
        for j in 0..rank {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            g.set(i, j, C64::new(re, im));
        }
    }
    let gram = g.matmul(&g.adjoint());
    let tr = gram.trace().re;
    let m = gram.scale(C64::new(1.0 / tr, 0.0));
    DensityMatrix::new(m, SystemShape::qubits(2))
}

/// Rank-1 case of [`random_density`]: a Haar-like random pure two-qubit state.
pub fn random_pure(seed: u64) -> DensityMatrix {
    random_density(seed, 1).expect("rank 1 is always valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concurrence::wootters_concurrence;
    use crate::qlinalg;

    #[test]
    fn singlet_is_maximally_entangled() {
        let s = bell_singlet();
        assert!((s.matrix().trace().re - 1.0).abs() < 1e-15);
        assert!((s.purity() - 1.0).abs() < 1e-14);
        let half_i = ComplexMatrix::identity(2).scale(C64::new(0.5, 0.0));
        for sub in [0usize, 1] {
            let marginal = s.reduce(&[sub]).unwrap();
            assert!(marginal.matrix().approx_eq(&half_i, 1e-14));
        }
        assert!((wootters_concurrence(&s).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn phase_damp_identity_and_full() {
        let s = bell_singlet();
        let unchanged = phase_damp(&s, 1.0, 0).unwrap();
        assert!(unchanged.matrix().approx_eq(s.matrix(), 0.0));

        let fully = phase_damp(&s, 0.0, 0).unwrap();
        let mut expected = ComplexMatrix::zeros(4, 4);
        expected.set(1, 1, C64::new(0.5, 0.0));
        expected.set(2, 2, C64::new(0.5, 0.0));
        assert!(fully.matrix().approx_eq(&expected, 1e-15));
        assert!(wootters_concurrence(&fully).unwrap() < 1e-12);
    }

    #[test]
    fn phase_damp_preserves_diagonal() {
        let rho = random_density(77, 4).unwrap();
        let damped = phase_damp(&rho, 0.3, 1).unwrap();
        for i in 0..4 {
            assert!((damped.matrix().get(i, i) - rho.matrix().get(i, i)).norm() < 1e-15);
        }
    }

    #[test]
    fn phase_damp_semigroup() {
        let rho = random_density(123, 4).unwrap();
        let a = phase_damp(&phase_damp(&rho, 0.7, 0).unwrap(), 0.4, 0).unwrap();
        let b = phase_damp(&rho, 0.7 * 0.4, 0).unwrap();
        assert!(a.matrix().approx_eq(b.matrix(), crate::tol::CHANNEL_SEMIGROUP));
    }

    #[test]
    fn phase_damp_rejects_bad_args() {
        let s = bell_singlet();
        assert!(phase_damp(&s, 1.5, 0).is_err());
        assert!(phase_damp(&s, -0.1, 0).is_err());
        assert!(phase_damp(&s, 0.5, 2).is_err());
    }

    #[test]
    fn dephased_singlet_concurrence_tracks_d() {
        // Wootters concurrence of the dephased singlet equals d.
        for k in 0..=100 {
            let d = k as f64 / 100.0;
            let rho = dephased_singlet(d).unwrap();
            let c = wootters_concurrence(&rho).unwrap();
            assert!(
                (c - d).abs() < crate::tol::CLOSED_FORM,
                "d={d}: concurrence {c}"
            );
        }
    }

    #[test]
    fn dephased_singlet_matches_table_scale() {
        // d = 0.539 reproduces a concurrence of 0.539
        let rho = dephased_singlet(0.539).unwrap();
        assert!((wootters_concurrence(&rho).unwrap() - 0.539).abs() < 1e-12);
    }

    #[test]
    fn quartz_model_monotone() {
        let cal = CalibrationParams::default();
        assert!((quartz_to_coherence(0.0, &cal).unwrap() - 1.0).abs() < 1e-15);
        let grid = [0.0, 3.0, 6.6, 9.6, 13.2, 17.5, 20.5, 24.0];
        let ds: Vec<f64> = grid
            .iter()
            .map(|&l| quartz_to_coherence(l, &cal).unwrap())
            .collect();
        for w in ds.windows(2) {
            assert!(w[1] < w[0], "coherence must decrease with thickness");
        }
        assert!(quartz_to_coherence(24.052, &cal).unwrap() < 0.2);
        assert!(quartz_to_coherence(-1.0, &cal).is_err());
    }

    #[test]
    fn werner_family() {
        let singlet = bell_singlet();
        assert!(werner(1.0).unwrap().matrix().approx_eq(singlet.matrix(), 1e-15));
        let mixed = ComplexMatrix::identity(4).scale(C64::new(0.25, 0.0));
        assert!(werner(0.0).unwrap().matrix().approx_eq(&mixed, 1e-15));
        // closed form max(0, (3p−1)/2)
        let c = wootters_concurrence(&werner(0.8).unwrap()).unwrap();
        assert!((c - 0.7).abs() < 1e-12);
        assert!(werner(1.2).is_err());
    }

    #[test]
    fn random_density_invariant_scan() {
        // constructor-level validation runs on every draw; a failure panics
        for seed in 0..10_000u64 {
            let rank = (seed % 4 + 1) as usize;
            let rho = random_density(seed, rank).unwrap();
            debug_assert_eq!(rho.dim(), 4);
        }
    }

    #[test]
    fn random_pure_has_unit_purity() {
        for seed in 0..50 {
            let rho = random_pure(seed);
            assert!((rho.purity() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn random_density_is_deterministic() {
        let a = random_density(424_242, 3).unwrap();
        let b = random_density(424_242, 3).unwrap();
        assert!(a.matrix().approx_eq(b.matrix(), 0.0));
        let c = random_density(424_243, 3).unwrap();
        assert!(a.matrix().max_abs_diff(c.matrix()) > 1e-3);
    }

    #[test]
    fn phase_damping_spec_resolves() {
        assert!((PhaseDampingSpec::Coherence(0.4).coherence().unwrap() - 0.4).abs() < 1e-15);
        let spec = PhaseDampingSpec::Thickness {
            mm: 0.0,
            calibration: CalibrationParams::default(),
        };
        assert!((spec.coherence().unwrap() - 1.0).abs() < 1e-15);
        assert!(PhaseDampingSpec::Coherence(1.1).coherence().is_err());
    }

    #[test]
    fn reduced_states_of_dephased_singlet_stay_maximally_mixed() {
        let rho = dephased_singlet(0.3).unwrap();
        let half_i = qlinalg::ComplexMatrix::identity(2).scale(C64::new(0.5, 0.0));
        assert!(rho.reduce(&[0]).unwrap().matrix().approx_eq(&half_i, 1e-14));
        assert!(rho.reduce(&[1]).unwrap().matrix().approx_eq(&half_i, 1e-14));
    }
}
