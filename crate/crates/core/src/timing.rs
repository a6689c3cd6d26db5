//! Latency budget of one feed-forward cycle and the derived pipeline checks.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Loss fraction above which the duty-cycle report raises a warning.
pub const DUTY_CYCLE_WARNING: f64 = 0.05;

/// Delays (ns) contributing to one feed-forward cycle.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct LatencyBudget {
    pub fiber_to_detector: f64,
    pub detector_delay: f64,
    /// ± uncertainty on the detector delay; the only stochastic term.
    pub detector_uncertainty: f64,
    pub logic: f64,
    pub eom_driver: f64,
    pub pockels_rise: f64,
    pub cables: f64,
}

impl Default for LatencyBudget {
    fn default() -> Self {
        LatencyBudget {
            fiber_to_detector: 15.0,
            detector_delay: 35.0,
            detector_uncertainty: 3.0,
            logic: 7.5,
            eom_driver: 65.0,
            pockels_rise: 5.0,
            cables: 17.5,
        }
    }
}

impl LatencyBudget {
    pub fn zero() -> Self {
        LatencyBudget {
            fiber_to_detector: 0.0,
            detector_delay: 0.0,
            detector_uncertainty: 0.0,
            logic: 0.0,
            eom_driver: 0.0,
            pockels_rise: 0.0,
            cables: 0.0,
        }
    }

    /// Named delay terms in cycle order (the uncertainty is not a term).
    pub fn components(&self) -> [(&'static str, f64); 6] {
        [
            ("fiber_to_detector", self.fiber_to_detector),
            ("detector_delay", self.detector_delay),
            ("logic", self.logic),
            ("eom_driver", self.eom_driver),
            ("pockels_rise", self.pockels_rise),
            ("cables", self.cables),
        ]
    }

    /// Every term, uncertainty included, multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        LatencyBudget {
            fiber_to_detector: self.fiber_to_detector * k,
            detector_delay: self.detector_delay * k,
            detector_uncertainty: self.detector_uncertainty * k,
            logic: self.logic * k,
            eom_driver: self.eom_driver * k,
            pockels_rise: self.pockels_rise * k,
            cables: self.cables * k,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let terms = self.components().into_iter().chain([("detector_uncertainty", self.detector_uncertainty)]);
        for (name, v) in terms {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::OutOfRange { name, value: v, range: "[0, inf)" });
            }
        }
        Ok(())
    }
}

/// Mean cycle latency and its uncertainty, both in ns.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Latency {
    pub mean_ns: f64,
    pub uncertainty_ns: f64,
}

pub fn total_latency(b: &LatencyBudget) -> Result<Latency> {
    b.validate()?;
    let mean_ns = b.components().iter().map(|c| c.1).sum();
    Ok(Latency { mean_ns, uncertainty_ns: b.detector_uncertainty })
}

/// A delay fiber holding a photon while `required_cycles` feed-forward
/// cycles complete.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DelayFiber {
    pub name: String,
    pub length_m: f64,
    pub required_cycles: u32,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct PipelineSpec {
    pub delay_fibers: Vec<DelayFiber>,
    /// Inferred from 30 m ↔ 150 ns.
    pub propagation_ns_per_m: f64,
    pub eom_dead_time_ns: f64,
    pub max_driver_rate_hz: f64,
    pub pair_rate_hz: f64,
    pub four_photon_rate_hz: f64,
    pub switching_contrast: f64,
    pub n_eoms: u32,
}

impl Default for PipelineSpec {
    fn default() -> Self {
        PipelineSpec {
            delay_fibers: vec![
                DelayFiber { name: "qubit3".into(), length_m: 30.0, required_cycles: 1 },
                DelayFiber { name: "qubit4".into(), length_m: 60.0, required_cycles: 2 },
            ],
            propagation_ns_per_m: 5.0,
            eom_dead_time_ns: 1600.0,
            max_driver_rate_hz: 20e3,
            pair_rate_hz: 2e3,
            four_photon_rate_hz: 1.0,
            switching_contrast: 500.0,
            n_eoms: 3,
        }
    }
}

impl PipelineSpec {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("propagation_ns_per_m", self.propagation_ns_per_m),
            ("max_driver_rate_hz", self.max_driver_rate_hz),
            ("pair_rate_hz", self.pair_rate_hz),
            ("four_photon_rate_hz", self.four_photon_rate_hz),
            ("switching_contrast", self.switching_contrast),
        ];
        for (name, v) in positive {
            if !(v > 0.0) {
                return Err(Error::OutOfRange { name, value: v, range: "(0, inf)" });
            }
        }
        if !(self.eom_dead_time_ns >= 0.0) {
            return Err(Error::OutOfRange {
                name: "eom_dead_time_ns",
                value: self.eom_dead_time_ns,
                range: "[0, inf)",
            });
        }
        for f in &self.delay_fibers {
            if !(f.length_m > 0.0) {
                return Err(Error::OutOfRange { name: "length_m", value: f.length_m, range: "(0, inf)" });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FiberReport {
    pub name: String,
    pub length_m: f64,
    pub delay_ns: f64,
    pub required_ns: f64,
    pub margin_ns: f64,
    pub pass: bool,
    /// Set when the requirement of more than one concatenated cycle is a
    /// modeling assumption rather than a stated figure.
    pub model_assumption: bool,
}

/// Checks each fiber delay against `required_cycles` × cycle latency.
pub fn delay_line_check(spec: &PipelineSpec, budget: &LatencyBudget) -> Result<Vec<FiberReport>> {
    spec.validate()?;
    let cycle = total_latency(budget)?.mean_ns;
    Ok(spec
        .delay_fibers
        .iter()
        .map(|f| {
            let delay_ns = f.length_m * spec.propagation_ns_per_m;
            let required_ns = f.required_cycles as f64 * cycle;
            FiberReport {
                name: f.name.clone(),
                length_m: f.length_m,
                delay_ns,
                required_ns,
                margin_ns: delay_ns - required_ns,
                pass: delay_ns >= required_ns,
                model_assumption: f.required_cycles > 1,
            }
        })
        .collect())
}

/// Fraction of Poisson triggers at `rate_hz` that fall into the dead window
/// of an earlier one: λτ/(1 + λτ).
pub fn dead_time_loss(rate_hz: f64, dead_time_ns: f64) -> f64 {
    let x = rate_hz * dead_time_ns * 1e-9;
    x / (1.0 + x)
}

/// [`dead_time_loss`] at the pair rate of `spec`.
pub fn duty_cycle_loss(spec: &PipelineSpec) -> f64 {
    dead_time_loss(spec.pair_rate_hz, spec.eom_dead_time_ns)
}

/// (1 − 1/contrast)^n_eoms.
pub fn switching_accuracy(spec: &PipelineSpec) -> Result<f64> {
    if !(spec.switching_contrast > 1.0) {
        return Err(Error::OutOfRange {
            name: "switching_contrast",
            value: spec.switching_contrast,
            range: "(1, inf)",
        });
    }
    Ok(libm::pow(1.0 - 1.0 / spec.switching_contrast, spec.n_eoms as f64))
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DutyCycle {
    pub rate_hz: f64,
    pub loss: f64,
    pub warning: bool,
}

impl DutyCycle {
    fn at(rate_hz: f64, dead_time_ns: f64) -> Self {
        let loss = dead_time_loss(rate_hz, dead_time_ns);
        DutyCycle { rate_hz, loss, warning: loss > DUTY_CYCLE_WARNING }
    }
}

/// Everything the timing model derives from one configuration.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TimingReport {
    pub budget: LatencyBudget,
    pub latency: Latency,
    pub fibers: Vec<FiberReport>,
    pub duty_cycle_pair_rate: DutyCycle,
    pub duty_cycle_max_rate: DutyCycle,
    pub switching_accuracy: f64,
    /// Four-photon events per second that survive switching errors.
    pub corrected_event_rate_hz: f64,
}

pub fn timing_report(spec: &PipelineSpec, budget: &LatencyBudget) -> Result<TimingReport> {
    let latency = total_latency(budget)?;
    let fibers = delay_line_check(spec, budget)?;
    let acc = switching_accuracy(spec)?;
    Ok(TimingReport {
        budget: budget.clone(),
        latency,
        fibers,
        duty_cycle_pair_rate: DutyCycle::at(spec.pair_rate_hz, spec.eom_dead_time_ns),
        duty_cycle_max_rate: DutyCycle::at(spec.max_driver_rate_hz, spec.eom_dead_time_ns),
        switching_accuracy: acc,
        corrected_event_rate_hz: spec.four_photon_rate_hz * acc,
    })
}
