//! Event-class simulation of the twofold-copy parity experiment.
//!
//! Two photon pairs from neighboring pump pulses form the two copies; a
//! delayed arm brings the first-pulse pair into coincidence with the
//! second-pulse pair on one beamsplitter per subsystem. Each beamsplitter
//! implements the POVM element E(m) = (I − m·S)/2 on the photons that meet
//! there, where m is the mode overlap: m at the interference dip, 0 with the
//! stage moved out (the ½·I normalization position).
//!
//! Same-pulse double pairs add a setting-independent fourfold background.
//! Blocking one arm isolates one background class per run (b₁, b₂), and the
//! estimator works on net counts raw − (b₁+b₂). Error bars come from a
//! parametric bootstrap around the six recorded counts.

use crate::concurrence::{BoundComponents, BoundEstimate, BoundSide, Observable};
use crate::error::{Error, Result};
use crate::qlinalg::{kron, C64, ComplexMatrix, DensityMatrix, SystemShape};
use crate::tol;
use crate::tomography::sample_poisson;
use crate::{concurrence, child_seed};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

/// Translational-stage position of one interferometer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    /// At the two-photon interference dip: E(m).
    Dip,
    /// Out of the interference region: E(0) = ½·I.
    Out,
}

/// Stage positions of the two interferometers (A side, B side).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Setting {
    pub stage_a: Stage,
    pub stage_b: Stage,
}

impl Setting {
    pub const DD: Setting = Setting { stage_a: Stage::Dip, stage_b: Stage::Dip };
    pub const DO: Setting = Setting { stage_a: Stage::Dip, stage_b: Stage::Out };
    pub const OD: Setting = Setting { stage_a: Stage::Out, stage_b: Stage::Dip };
    pub const OO: Setting = Setting { stage_a: Stage::Out, stage_b: Stage::Out };

    /// Canonical order used for arrays and serialized maps.
    pub const ALL: [Setting; 4] = [Self::DD, Self::DO, Self::OD, Self::OO];

    pub fn index(self) -> usize {
        match (self.stage_a, self.stage_b) {
            (Stage::Dip, Stage::Dip) => 0,
            (Stage::Dip, Stage::Out) => 1,
            (Stage::Out, Stage::Dip) => 2,
            (Stage::Out, Stage::Out) => 3,
        }
    }

    pub fn key(self) -> &'static str {
        ["dd", "do", "od", "oo"][self.index()]
    }
}

/// Configuration of one simulated acquisition.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimConfig {
    /// Mode overlap m ∈ [0,1] at the dip; 1 is perfect two-photon interference.
    pub mode_overlap: f64,
    /// Expected net fourfold counts at the (out,out) setting.
    pub signal_strength: f64,
    /// Relative weights of (signal, double-pair-in-pulse-1, double-pair-in-pulse-2).
    pub class_weights: [f64; 3],
    /// Parametric-bootstrap resamples for error bars.
    pub mc_trials: usize,
    pub seed: u64,
    /// De-bias the estimator for mode overlap < 1 before forming bounds.
    pub visibility_correction: bool,
    /// Pump pulse period in nanoseconds; documentation only.
    pub pulse_period_ns: f64,
    /// Extra length of the delay (reflection) arm in meters; documentation only.
    pub delay_excess_m: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            mode_overlap: 1.0,
            signal_strength: 5000.0,
            class_weights: [1.0, 1.0, 1.0],
            mc_trials: 200,
            seed: 7,
            visibility_correction: false,
            // 76 MHz repetition rate; the delay arm spans one pulse spacing.
            pulse_period_ns: 1e3 / 76.0,
            delay_excess_m: 3.947,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.mode_overlap) {
            return Err(Error::arg(format!(
                "mode_overlap {} outside [0,1]",
                self.mode_overlap
            )));
        }
        if self.signal_strength <= 0.0 {
            return Err(Error::arg("signal_strength must be positive"));
        }
        if self.class_weights.iter().any(|&w| w < 0.0) {
            return Err(Error::arg("class weights must be non-negative"));
        }
        if self.class_weights[0] <= 0.0 {
            return Err(Error::arg("signal class weight must be positive"));
        }
        if self.mc_trials == 0 {
            return Err(Error::arg("mc_trials must be ≥ 1"));
        }
        Ok(())
    }
}

/// One recorded acquisition: raw fourfold counts per setting plus the two
/// blocking-run backgrounds.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountRecord {
    /// Raw counts keyed dd/do/od/oo.
    pub settings: SettingCounts,
    /// Fourfolds with the reflection arm blocked (double pairs in pulse 2).
    pub b1: u64,
    /// Fourfolds with the transmission arm blocked (double pairs in pulse 1).
    pub b2: u64,
    pub config: SimConfig,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SettingCounts {
    pub dd: u64,
    #[serde(rename = "do")]
    pub dip_out: u64,
    pub od: u64,
    pub oo: u64,
}

impl SettingCounts {
    pub fn as_array(&self) -> [u64; 4] {
        [self.dd, self.dip_out, self.od, self.oo]
    }

    pub fn from_array(raw: [u64; 4]) -> Self {
        SettingCounts {
            dd: raw[0],
            dip_out: raw[1],
            od: raw[2],
            oo: raw[3],
        }
    }
}

impl CountRecord {
    pub fn raw(&self, setting: Setting) -> u64 {
        self.settings.as_array()[setting.index()]
    }

    /// Net counts raw − (b₁+b₂); may be negative from noise, kept unclamped
    /// so the estimator stays unbiased.
    pub fn net(&self, setting: Setting) -> f64 {
        self.raw(setting) as f64 - (self.b1 + self.b2) as f64
    }

    pub fn nets(&self) -> [f64; 4] {
        Setting::ALL.map(|s| self.net(s))
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let record: CountRecord =
            serde_json::from_str(text).map_err(|e| Error::Serialization(e.to_string()))?;
        record.config.validate()?;
        Ok(record)
    }
}

/// Beamsplitter POVM element E(m) = (I − m·S)/2 on the two photons of one
/// copy pair. E(1) = P₋, E(0) = ½·I.
pub fn bs_povm(mode_overlap: f64) -> Result<Observable> {
    if !(0.0..=1.0).contains(&mode_overlap) {
        return Err(Error::arg(format!(
            "mode overlap {mode_overlap} outside [0,1]"
        )));
    }
    let swap = concurrence::swap_operator(2);
    let identity = ComplexMatrix::identity(4);
    let matrix = identity
        .sub(&swap.scale(C64::new(mode_overlap, 0.0)))
        .scale(C64::new(0.5, 0.0));
    Observable::new(
        format!("E({mode_overlap:.3})"),
        matrix,
        SystemShape::qubits(2),
    )
}

/// Expected signal and background rates for every setting and both blocking
/// runs, in counts per acquisition.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RateTable {
    /// (signal, background) per setting in canonical dd/do/od/oo order.
    pub settings: [(f64, f64); 4],
    /// Expected counts with the reflection arm blocked.
    pub b1: f64,
    /// Expected counts with the transmission arm blocked.
    pub b2: f64,
}

impl RateTable {
    pub fn signal(&self, setting: Setting) -> f64 {
        self.settings[setting.index()].0
    }

    pub fn background(&self, setting: Setting) -> f64 {
        self.settings[setting.index()].1
    }

    pub fn total(&self, setting: Setting) -> f64 {
        self.signal(setting) + self.background(setting)
    }

    /// Net-rate vector (signal only), what the subtraction estimates.
    pub fn net_rates(&self) -> [f64; 4] {
        [
            self.settings[0].0,
            self.settings[1].0,
            self.settings[2].0,
            self.settings[3].0,
        ]
    }
}

/// Signal rate: A·Tr[ρ̃·E_A⊗E_B] with the overlap set per arm by the stage
/// position and A calibrated so the (out,out) signal equals
/// `signal_strength`. Background rate per double-pair class: matched arms
/// give a flat coincidence probability ¼, independent of the stages.
pub fn expected_rates(rho: &DensityMatrix, config: &SimConfig) -> Result<RateTable> {
    config.validate()?;
    let twofold = concurrence::twofold_state(rho)?;

    let e_dip = bs_povm(config.mode_overlap)?;
    let e_out = bs_povm(0.0)?;
    let povm = |stage: Stage| match stage {
        Stage::Dip => e_dip.matrix(),
        Stage::Out => e_out.matrix(),
    };

    // (out,out) trace is exactly 1/4, so A = 4·signal_strength.
    let amplitude = 4.0 * config.signal_strength;
    let [w_signal, w_double1, w_double2] = config.class_weights;
    let class_rate = |w: f64| amplitude * w / w_signal * 0.25;

    let mut settings = [(0.0, 0.0); 4];
    for setting in Setting::ALL {
        let operator = kron(povm(setting.stage_a), povm(setting.stage_b));
        let signal = amplitude * twofold.expectation(&operator);
        let background = class_rate(w_double1) + class_rate(w_double2);
        settings[setting.index()] = (signal, background);
    }
    Ok(RateTable {
        settings,
        b1: class_rate(w_double2),
        b2: class_rate(w_double1),
    })
}

/// Draw one full acquisition: Poisson counts at each setting plus the two
/// blocking runs. Deterministic per seed.
pub fn simulate_run(rho: &DensityMatrix, config: &SimConfig, seed: u64) -> Result<CountRecord> {
    let rates = expected_rates(rho, config)?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut raw = [0u64; 4];
    for setting in Setting::ALL {
        raw[setting.index()] = sample_poisson(&mut rng, rates.total(setting));
    }
    let b1 = sample_poisson(&mut rng, rates.b1);
    let b2 = sample_poisson(&mut rng, rates.b2);
    Ok(CountRecord {
        settings: SettingCounts::from_array(raw),
        b1,
        b2,
        config: config.clone(),
        seed,
    })
}

/// Bound estimates from one acquisition.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EstimatedBounds {
    pub lower: BoundEstimate,
    pub upper: BoundEstimate,
    pub components: BoundComponents,
    /// Diagnostics, e.g. corrected traces escaping [−ε, 1+ε].
    pub warnings: Vec<String>,
    /// Bootstrap resamples that produced usable estimates.
    pub resamples_used: usize,
}

/// Point estimates from net rates alone (no sampling, no error bars).
///
/// With R = net(dd)/net(oo), R_A = net(do)/net(oo), R_B = net(od)/net(oo) and
/// the dip treated as an ideal P₋ measurement:
/// tight² = R, K₁² = 2·R_B, K₂² = 2·R_A, V₁² = 2R − 2R_B, V₂² = 2R − 2R_A.
/// With visibility correction the three traces are first de-biased through
/// the affine per-arm relation E(m) = m·P₋ + (1−m)·½I.
pub fn bounds_from_net_rates(
    nets: [f64; 4],
    mode_overlap: f64,
    visibility_correction: bool,
) -> Result<(BoundEstimate, BoundEstimate, BoundComponents, Vec<String>)> {
    let [net_dd, net_do, net_od, net_oo] = nets;
    if net_oo <= 0.0 {
        return Err(Error::InsufficientData(format!(
            "net (out,out) counts must be positive, got {net_oo}"
        )));
    }
    let r = net_dd / net_oo;
    let r_a = net_do / net_oo;
    let r_b = net_od / net_oo;

    // Normalized traces: t_mm = Tr[ρ̃ P₋⊗P₋], t_a = Tr[ρ̃ P₋⊗I], t_b = Tr[ρ̃ I⊗P₋].
    let (t_mm, t_a, t_b) = if visibility_correction {
        if mode_overlap <= 0.0 {
            return Err(Error::InsufficientData(
                "visibility correction needs mode_overlap > 0".into(),
            ));
        }
        let m = mode_overlap;
        let t_a = (r_a - (1.0 - m)) / (2.0 * m);
        let t_b = (r_b - (1.0 - m)) / (2.0 * m);
        let t_mm = (r / 4.0
            - m * (1.0 - m) / 2.0 * (t_a + t_b)
            - (1.0 - m) * (1.0 - m) / 4.0)
            / (m * m);
        (t_mm, t_a, t_b)
    } else {
        (r / 4.0, r_a / 2.0, r_b / 2.0)
    };

    let mut warnings = Vec::new();
    for (name, value, high) in [
        ("Tr[P-⊗P-]", t_mm, 0.25),
        ("Tr[P-⊗I]", t_a, 1.0),
        ("Tr[I⊗P-]", t_b, 1.0),
    ] {
        if value < -tol::CORRECTED_TRACE_EPS || value > high + tol::CORRECTED_TRACE_EPS {
            warnings.push(format!(
                "estimated trace {name} = {value:.4} outside [0, {high}] band"
            ));
        }
    }

    let components = BoundComponents {
        v1_sq: 8.0 * t_mm - 4.0 * t_b,
        v2_sq: 8.0 * t_mm - 4.0 * t_a,
        k1_sq: 4.0 * t_b,
        k2_sq: 4.0 * t_a,
        tight_sq: 4.0 * t_mm,
    };
    let lower = BoundEstimate::exact(BoundSide::Lower, components.lower_sq());
    let upper = BoundEstimate::exact(BoundSide::Upper, components.upper_sq());
    Ok((lower, upper, components, warnings))
}

/// Full estimator: point values from the record's net counts and standard
/// errors from `mc_trials` parametric-bootstrap resamples of all six counts.
pub fn estimate_bounds(record: &CountRecord, config: &SimConfig) -> Result<EstimatedBounds> {
    config.validate()?;
    let (lower0, upper0, components, warnings) = bounds_from_net_rates(
        record.nets(),
        config.mode_overlap,
        config.visibility_correction,
    )?;

    let raw = record.settings.as_array();
    let mut rng = ChaCha12Rng::seed_from_u64(child_seed(config.seed, record.seed));
    let mut lowers = Vec::with_capacity(config.mc_trials);
    let mut uppers = Vec::with_capacity(config.mc_trials);
    for _ in 0..config.mc_trials {
        let resampled: [f64; 4] = raw.map(|c| sample_poisson(&mut rng, c as f64) as f64);
        let b1 = sample_poisson(&mut rng, record.b1 as f64) as f64;
        let b2 = sample_poisson(&mut rng, record.b2 as f64) as f64;
        let nets = resampled.map(|c| c - b1 - b2);
        match bounds_from_net_rates(nets, config.mode_overlap, config.visibility_correction) {
            Ok((lo, hi, _, _)) => {
                lowers.push(lo.value);
                uppers.push(hi.value);
            }
            // non-positive normalization in a resample; skip it
            Err(Error::InsufficientData(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    if lowers.len() < 2 {
        return Err(Error::InsufficientData(
            "too few usable bootstrap resamples".into(),
        ));
    }

    Ok(EstimatedBounds {
        lower: BoundEstimate::with_error(BoundSide::Lower, lower0.raw_square, std_dev(&lowers)),
        upper: BoundEstimate::with_error(BoundSide::Upper, upper0.raw_square, std_dev(&uppers)),
        components,
        warnings,
        resamples_used: lowers.len(),
    })
}

fn std_dev(samples: &[f64]) -> f64 {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    var.sqrt()
}

/// One interferometer scan: coincidence probability against stage position.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DipScan {
    pub positions: Vec<f64>,
    pub probabilities: Vec<f64>,
    /// (max − min)/max over the scan.
    pub visibility: f64,
}

/// Scan one beamsplitter through the interference region. The overlap decays
/// as m(x) = m·exp(−x²/2σ²) around the dip center; the coincidence
/// probability at each position is Tr[ρ_pair·E(m(x))].
pub fn dip_scan(
    rho_pair: &DensityMatrix,
    mode_overlap: f64,
    positions: &[f64],
    sigma: f64,
) -> Result<DipScan> {
    if !(0.0..=1.0).contains(&mode_overlap) {
        return Err(Error::arg(format!(
            "mode overlap {mode_overlap} outside [0,1]"
        )));
    }
    if sigma <= 0.0 {
        return Err(Error::arg("dip width sigma must be positive"));
    }
    if positions.is_empty() {
        return Err(Error::arg("dip scan needs at least one position"));
    }
    let probabilities: Vec<f64> = positions
        .iter()
        .map(|&x| {
            let m_x = mode_overlap * (-x * x / (2.0 * sigma * sigma)).exp();
            bs_povm(m_x).map(|e| rho_pair.expectation(e.matrix()))
        })
        .collect::<Result<_>>()?;
    let max = probabilities.iter().copied().fold(f64::MIN, f64::max);
    let min = probabilities.iter().copied().fold(f64::MAX, f64::min);
    let visibility = if max > 0.0 { (max - min) / max } else { 0.0 };
    Ok(DipScan {
        positions: positions.to_vec(),
        probabilities,
        visibility,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concurrence::{lower_bound, parity_projectors, upper_bound};
    use crate::states::{bell_singlet, dephased_singlet, random_density};

    fn maximally_mixed() -> DensityMatrix {
        DensityMatrix::new(
            ComplexMatrix::identity(4).scale(C64::new(0.25, 0.0)),
            SystemShape::qubits(2),
        )
        .unwrap()
    }

    #[test]
    fn bs_povm_limits() {
        let (p_minus, _) = parity_projectors(2).unwrap();
        assert!(bs_povm(1.0).unwrap().matrix().approx_eq(p_minus.matrix(), 1e-15));
        let half_i = ComplexMatrix::identity(4).scale(C64::new(0.5, 0.0));
        assert!(bs_povm(0.0).unwrap().matrix().approx_eq(&half_i, 1e-15));
        assert!(bs_povm(1.2).is_err());

        // Tr[E(m)·I/4] = (2−m)/4
        for m in [0.0, 0.3, 0.7, 1.0] {
            let e = bs_povm(m).unwrap();
            let got = maximally_mixed().expectation(e.matrix());
            assert!((got - (2.0 - m) / 4.0).abs() < 1e-14);
        }
    }

    #[test]
    fn singlet_rate_ratios() {
        let cfg = SimConfig::default();
        let rates = expected_rates(&bell_singlet(), &cfg).unwrap();
        let oo = rates.signal(Setting::OO);
        assert!((rates.signal(Setting::DD) / oo - 1.0).abs() < 1e-12);
        assert!((rates.signal(Setting::DO) / oo - 0.5).abs() < 1e-12);
        assert!((rates.signal(Setting::OD) / oo - 0.5).abs() < 1e-12);
        assert!((oo - cfg.signal_strength).abs() < 1e-9);
    }

    #[test]
    fn background_fraction_is_two_thirds() {
        let cfg = SimConfig::default();
        let rates = expected_rates(&bell_singlet(), &cfg).unwrap();
        let fraction = rates.background(Setting::OO) / rates.total(Setting::OO);
        assert!((fraction - 2.0 / 3.0).abs() < 1e-12);
        // blocking-run expectations split the background evenly here
        assert!((rates.b1 + rates.b2 - rates.background(Setting::OO)).abs() < 1e-9);
    }

    #[test]
    fn zero_overlap_is_setting_blind() {
        let cfg = SimConfig { mode_overlap: 0.0, ..SimConfig::default() };
        let rates = expected_rates(&dephased_singlet(0.6).unwrap(), &cfg).unwrap();
        let t0 = rates.total(Setting::ALL[0]);
        for s in Setting::ALL {
            assert!((rates.total(s) - t0).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_background_weights() {
        let cfg = SimConfig { class_weights: [1.0, 0.0, 0.0], ..SimConfig::default() };
        let rates = expected_rates(&bell_singlet(), &cfg).unwrap();
        assert_eq!(rates.b1, 0.0);
        assert_eq!(rates.b2, 0.0);
        let rec = simulate_run(&bell_singlet(), &cfg, 5).unwrap();
        assert_eq!(rec.b1, 0);
        assert_eq!(rec.b2, 0);
    }

    #[test]
    fn simulate_run_scale_and_determinism() {
        let cfg = SimConfig::default();
        let rec = simulate_run(&bell_singlet(), &cfg, 42).unwrap();
        // raw(out,out) ≈ 3·signal_strength = 15000, allow 6σ
        let oo = rec.raw(Setting::OO) as f64;
        assert!((oo - 15_000.0).abs() < 6.0 * 15_000f64.sqrt(), "oo = {oo}");

        let again = simulate_run(&bell_singlet(), &cfg, 42).unwrap();
        assert_eq!(rec.settings.as_array(), again.settings.as_array());
        assert_eq!((rec.b1, rec.b2), (again.b1, again.b2));
    }

    #[test]
    fn net_counts_unbiased_sample() {
        let cfg = SimConfig::default();
        let rho = dephased_singlet(0.8).unwrap();
        let rates = expected_rates(&rho, &cfg).unwrap();
        let runs = 2_000;
        let mut sums = [0.0f64; 4];
        for seed in 0..runs {
            let rec = simulate_run(&rho, &cfg, seed).unwrap();
            for (s, sum) in Setting::ALL.iter().zip(sums.iter_mut()) {
                *sum += rec.net(*s);
            }
        }
        for (s, sum) in Setting::ALL.iter().zip(&sums) {
            let mean = sum / runs as f64;
            let expected = rates.signal(*s);
            // variance of one net count = raw + b1 + b2 expectations
            let var = rates.total(*s) + rates.b1 + rates.b2;
            let sigma_mean = (var / runs as f64).sqrt();
            assert!(
                (mean - expected).abs() < 4.0 * sigma_mean,
                "setting {}: mean {mean}, expected {expected}",
                s.key()
            );
        }
    }

    #[test]
    fn estimator_consistent_with_exact_bounds() {
        for seed in 0..100 {
            let rho = random_density(seed + 50_000, 4).unwrap();
            let cfg = SimConfig::default();
            let rates = expected_rates(&rho, &cfg).unwrap();
            let (lo, hi, _, _) = bounds_from_net_rates(rates.net_rates(), 1.0, false).unwrap();
            let exact_lo = lower_bound(&rho).unwrap();
            let exact_hi = upper_bound(&rho).unwrap();
            assert!((lo.raw_square - exact_lo.raw_square).abs() < tol::EXACT_RECOVERY);
            assert!((hi.raw_square - exact_hi.raw_square).abs() < tol::EXACT_RECOVERY);
        }
    }

    #[test]
    fn visibility_correction_is_exact_on_rates() {
        for &m in &[0.3, 0.6, 0.9] {
            for seed in 0..50 {
                let rho = random_density(seed + 60_000, 4).unwrap();
                let cfg = SimConfig { mode_overlap: m, ..SimConfig::default() };
                let rates = expected_rates(&rho, &cfg).unwrap();
                let (lo, hi, _, _) = bounds_from_net_rates(rates.net_rates(), m, true).unwrap();
                let exact_lo = lower_bound(&rho).unwrap();
                let exact_hi = upper_bound(&rho).unwrap();
                assert!(
                    (lo.raw_square - exact_lo.raw_square).abs() < tol::EXACT_RECOVERY,
                    "m={m} seed={seed}"
                );
                assert!(
                    (hi.raw_square - exact_hi.raw_square).abs() < tol::EXACT_RECOVERY,
                    "m={m} seed={seed}"
                );
            }
        }
    }

    #[test]
    fn exact_reference_rates() {
        // singlet at m=1: R=1, R_A=R_B=0.5 → both bounds 1
        let rates = expected_rates(&bell_singlet(), &SimConfig::default()).unwrap();
        let (lo, hi, _, _) = bounds_from_net_rates(rates.net_rates(), 1.0, false).unwrap();
        assert!((lo.value - 1.0).abs() < 1e-10);
        assert!((hi.value - 1.0).abs() < 1e-10);

        // maximally mixed: lower clamps at 0 from raw −0.5, tight upper 0.5
        let rates = expected_rates(&maximally_mixed(), &SimConfig::default()).unwrap();
        let (lo, hi, comp, _) = bounds_from_net_rates(rates.net_rates(), 1.0, false).unwrap();
        assert!((lo.raw_square + 0.5).abs() < 1e-10);
        assert_eq!(lo.value, 0.0);
        assert!((comp.tight_sq - 0.25).abs() < 1e-10);
        assert!((hi.value - 0.5).abs() < 1e-10);
    }

    #[test]
    fn estimate_bounds_from_simulated_run() {
        let rho = dephased_singlet(0.93).unwrap();
        let cfg = SimConfig::default();
        let rec = simulate_run(&rho, &cfg, 11).unwrap();
        let est = estimate_bounds(&rec, &cfg).unwrap();
        // loose 5σ sanity on the point estimates
        assert!((est.lower.value - 0.93).abs() < 5.0 * est.lower.std_error.max(0.02));
        let true_upper = ((1.0 + 0.93 * 0.93) / 2.0f64).sqrt();
        assert!((est.upper.value - true_upper).abs() < 5.0 * est.upper.std_error.max(0.02));
        // bench-scale error bars: a few percent, the ±0.063 regime
        assert!(est.lower.std_error > 0.005 && est.lower.std_error < 0.2);
        assert!(est.upper.std_error > 0.0 && est.upper.std_error < 0.2);
        assert!(est.resamples_used > 0);
    }

    #[test]
    fn std_error_scales_with_signal_strength() {
        // σ ∝ 1/√signal_strength within a factor 1.5
        let rho = dephased_singlet(0.8).unwrap();
        let strengths = [1_000.0, 10_000.0, 100_000.0];
        let mut sigmas = Vec::new();
        for &s in &strengths {
            let cfg = SimConfig { signal_strength: s, ..SimConfig::default() };
            let mean_sigma: f64 = (0..20u64)
                .map(|seed| {
                    let rec = simulate_run(&rho, &cfg, 90_000 + seed).unwrap();
                    estimate_bounds(&rec, &cfg).unwrap().lower.std_error
                })
                .sum::<f64>()
                / 20.0;
            sigmas.push(mean_sigma);
        }
        for (pair, s_pair) in sigmas.windows(2).zip(strengths.windows(2)) {
            let observed_ratio = pair[0] / pair[1];
            let predicted_ratio = (s_pair[1] / s_pair[0]).sqrt();
            assert!(
                observed_ratio / predicted_ratio < 1.5 && predicted_ratio / observed_ratio < 1.5,
                "σ ratio {observed_ratio:.3} vs predicted {predicted_ratio:.3}"
            );
        }
    }

    #[test]
    fn estimate_bounds_deterministic() {
        let rho = dephased_singlet(0.5).unwrap();
        let cfg = SimConfig::default();
        let rec = simulate_run(&rho, &cfg, 3).unwrap();
        let a = estimate_bounds(&rec, &cfg).unwrap();
        let b = estimate_bounds(&rec, &cfg).unwrap();
        assert_eq!(a.lower.std_error, b.lower.std_error);
        assert_eq!(a.upper.std_error, b.upper.std_error);
    }

    #[test]
    fn estimator_rejects_nonpositive_normalization() {
        assert!(matches!(
            bounds_from_net_rates([10.0, 5.0, 5.0, 0.0], 1.0, false),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn record_json_roundtrip() {
        let rec = simulate_run(&bell_singlet(), &SimConfig::default(), 8).unwrap();
        let text = rec.to_json().unwrap();
        assert!(text.contains("\"do\""));
        let back = CountRecord::from_json(&text).unwrap();
        assert_eq!(rec.settings.as_array(), back.settings.as_array());
        assert_eq!(rec.net(Setting::DD), back.net(Setting::DD));
    }

    #[test]
    fn dip_scan_cases() {
        let positions: Vec<f64> = (-80..=80).map(|i| i as f64 * 0.1).collect();

        // no overlap, no interference
        let scan = dip_scan(&maximally_mixed(), 0.0, &positions, 1.0).unwrap();
        assert!(scan.visibility.abs() < 1e-12);

        // parallel-polarization pure pair: full HOM dip
        let hh = {
            let mut m = ComplexMatrix::zeros(4, 4);
            m.set(0, 0, C64::new(1.0, 0.0));
            DensityMatrix::new(m, SystemShape::qubits(2)).unwrap()
        };
        let scan = dip_scan(&hh, 1.0, &positions, 1.0).unwrap();
        assert!((scan.visibility - 1.0).abs() < 1e-9);
        let center = scan
            .probabilities
            .iter()
            .copied()
            .fold(f64::MAX, f64::min);
        assert!(center < 1e-9);

        // unpolarized independent photons at m=1: visibility 1/2
        let scan = dip_scan(&maximally_mixed(), 1.0, &positions, 1.0).unwrap();
        assert!((scan.visibility - 0.5).abs() < 1e-9);

        // the singlet pair anti-bunches: coincidence peak, not dip
        let scan = dip_scan(&bell_singlet(), 1.0, &positions, 1.0).unwrap();
        let center_p = scan.probabilities[scan.probabilities.len() / 2];
        assert!((center_p - 1.0).abs() < 1e-9);
    }
}
