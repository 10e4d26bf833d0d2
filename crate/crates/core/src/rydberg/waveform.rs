use serde::{Deserialize, Serialize};

use crate::embedding::HardwareProfile;
use crate::error::{Result, SdrError};

/// Piecewise-linear schedule of `(t [µs], value)` samples, clamped outside
/// its sample range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct Waveform {
    samples: Vec<(f64, f64)>,
}

impl Waveform {
    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self> {
        let Some(&(t0, _)) = samples.first() else {
            return Err(SdrError::invalid("waveform needs at least one sample"));
        };
        if t0 != 0.0 {
            return Err(SdrError::invalid(format!("waveform must start at t = 0, not {t0}")));
        }
        if samples.iter().any(|(t, v)| !t.is_finite() || !v.is_finite()) {
            return Err(SdrError::invalid("waveform samples must be finite"));
        }
        if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(SdrError::invalid("waveform times must be strictly increasing"));
        }
        Ok(Waveform { samples })
    }

    pub fn constant(value: f64) -> Self {
        Waveform {
            samples: vec![(0.0, value)],
        }
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn eval(&self, t: f64) -> f64 {
        let s = &self.samples;
        let i = s.partition_point(|&(ts, _)| ts <= t);
        if i == 0 {
            return s[0].1;
        }
        if i == s.len() {
            return s[s.len() - 1].1;
        }
        let (t0, v0) = s[i - 1];
        let (t1, v1) = s[i];
        v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    }

    fn max_abs(&self) -> f64 {
        self.samples.iter().map(|s| s.1.abs()).fold(0.0, f64::max)
    }
}

impl TryFrom<Vec<[f64; 2]>> for Waveform {
    type Error = SdrError;

    fn try_from(v: Vec<[f64; 2]>) -> Result<Self> {
        Waveform::new(v.into_iter().map(|[t, x]| (t, x)).collect())
    }
}

impl From<Waveform> for Vec<[f64; 2]> {
    fn from(w: Waveform) -> Self {
        w.samples.into_iter().map(|(t, v)| [t, v]).collect()
    }
}

/// Rabi drive Ω, global detuning Δ_g, local detuning Δ_l (all rad/µs) and
/// drive phase φ (rad).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveformSet {
    pub omega: Waveform,
    pub delta_g: Waveform,
    pub delta_l: Waveform,
    pub phi: Waveform,
    pub duration: f64,
}

impl WaveformSet {
    /// Hardware admissibility: amplitude limits, duration limit, and a
    /// drive that starts and ends at zero.
    pub fn validate(&self, profile: &HardwareProfile) -> Result<()> {
        if !(self.duration > 0.0 && self.duration <= profile.t_max) {
            return Err(SdrError::Hardware(format!(
                "duration {} us outside (0, {}]",
                self.duration, profile.t_max
            )));
        }
        if self.omega.samples().iter().any(|&(_, v)| v < 0.0 || v > profile.omega_max) {
            return Err(SdrError::Hardware(format!(
                "rabi drive outside [0, {}] rad/us",
                profile.omega_max
            )));
        }
        for (name, w) in [("delta_g", &self.delta_g), ("delta_l", &self.delta_l)] {
            if w.max_abs() > profile.delta_abs_max {
                return Err(SdrError::Hardware(format!(
                    "{name} exceeds {} rad/us",
                    profile.delta_abs_max
                )));
            }
        }
        if self.omega.eval(0.0) != 0.0 || self.omega.eval(self.duration) != 0.0 {
            return Err(SdrError::Hardware(
                "rabi drive must start and end at zero".into(),
            ));
        }
        Ok(())
    }
}

/// Ω ramps up over the first and down over the last 10 % of the run while
/// Δ_g sweeps linearly from −Δmax/2 to +Δmax/2; Δ_l and φ stay at zero.
pub fn default_adiabatic_waveforms(profile: &HardwareProfile, duration: f64) -> Result<WaveformSet> {
    if !(duration > 0.0 && duration <= profile.t_max) {
        return Err(SdrError::invalid(format!(
            "duration {duration} us outside (0, {}]",
            profile.t_max
        )));
    }
    let om = profile.omega_max;
    let half = profile.delta_abs_max / 2.0;
    Ok(WaveformSet {
        omega: Waveform::new(vec![
            (0.0, 0.0),
            (0.1 * duration, om),
            (0.9 * duration, om),
            (duration, 0.0),
        ])?,
        delta_g: Waveform::new(vec![(0.0, -half), (duration, half)])?,
        delta_l: Waveform::constant(0.0),
        phi: Waveform::constant(0.0),
        duration,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn interpolation_and_clamp() {
        let w = Waveform::new(vec![(0.0, 0.0), (1.0, 10.0)]).unwrap();
        assert_eq!(w.eval(0.5), 5.0);
        assert_eq!(w.eval(2.0), 10.0);
        let p = Waveform::new(vec![(0.0, 0.0), (0.1, 15.7), (3.9, 15.7), (4.0, 0.0)]).unwrap();
        assert_eq!(p.eval(2.0), 15.7);
    }

    #[test]
    fn rejects_bad_samples() {
        assert!(Waveform::new(vec![]).is_err());
        assert!(Waveform::new(vec![(0.1, 0.0)]).is_err());
        assert!(Waveform::new(vec![(0.0, 0.0), (0.0, 1.0)]).is_err());
        assert!(serde_json::from_str::<Waveform>("[[0,0],[1,2],[0.5,1]]").is_err());
    }

    #[test]
    fn adiabatic_default() {
        let p = HardwareProfile {
            omega_max: 15.7,
            ..Default::default()
        };
        let w = default_adiabatic_waveforms(&p, 4.0).unwrap();
        let expect = [(0.0, 0.0), (0.4, 15.7), (3.6, 15.7), (4.0, 0.0)];
        for (a, b) in w.omega.samples().iter().zip(expect) {
            assert!((a.0 - b.0).abs() < 1e-15 && a.1 == b.1);
        }
        assert_eq!(w.delta_g.eval(2.0), 0.0);
        assert!((0..=40).all(|k| w.phi.eval(k as f64 * 0.1) == 0.0));
        w.validate(&p).unwrap();
        assert!(default_adiabatic_waveforms(&p, 5.0).is_err());
        assert!(default_adiabatic_waveforms(&p, 0.0).is_err());
    }

    #[test]
    fn validate_limits() {
        let p = HardwareProfile::default();
        let mut w = default_adiabatic_waveforms(&p, 2.0).unwrap();
        w.omega = Waveform::constant(1.0);
        assert!(w.validate(&p).is_err());
        let mut w = default_adiabatic_waveforms(&p, 2.0).unwrap();
        w.delta_g = Waveform::constant(1e4);
        assert!(w.validate(&p).is_err());
    }

    proptest! {
        #[test]
        fn exact_on_samples_affine_between(vals in prop::collection::vec(-50.0f64..50.0, 2..8), frac in 0.0f64..1.0) {
            let samples: Vec<(f64, f64)> = vals.iter().enumerate().map(|(i, &v)| (i as f64 * 0.5, v)).collect();
            let w = Waveform::new(samples.clone()).unwrap();
            for &(t, v) in &samples {
                prop_assert_eq!(w.eval(t), v);
            }
            for s in samples.windows(2) {
                let t = s[0].0 + frac * (s[1].0 - s[0].0);
                let expect = s[0].1 + frac * (s[1].1 - s[0].1);
                prop_assert!((w.eval(t) - expect).abs() < 1e-9);
            }
        }
    }
}
