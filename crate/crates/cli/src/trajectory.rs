//! Trajectory files: one JSON object holding the run parameters and a record
//! per collision. α values are the source of truth; velocities are derived.

use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use grover_rel::kinematics::velocity_from_alpha;
use grover_rel::{AlphaState, InitialSpeed, Real, ScalarBackend, TrajectoryPoint};
use serde::{Deserialize, Serialize};
use serde_json::Number;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpeedField {
    V0(Number),
    OneMinusV0(Number),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryFile {
    pub n: Number,
    pub v0_or_one_minus_v0: SpeedField,
    pub precision: String,
    pub records: Vec<TrajectoryRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub k: usize,
    pub v1: Number,
    pub v2: Number,
    pub alpha1: Number,
    pub alpha2: Number,
    #[serde(rename = "K1_frac")]
    pub k1_frac: Number,
    #[serde(rename = "K2_frac")]
    pub k2_frac: Number,
    pub e_drift: Number,
    pub p_drift: Number,
}

/// A JSON number carrying exactly the digits of `x`.
pub fn number<T: Real>(x: T) -> Number {
    Number::from_str(&x.to_output()).expect("scientific notation is valid JSON")
}

fn value<T: Real>(n: &Number, field: &str) -> Result<T> {
    T::parse_decimal(&n.to_string()).ok_or_else(|| anyhow!("field `{field}` is not a number: {n}"))
}

impl TrajectoryFile {
    pub fn new<T: Real>(n: T, speed: InitialSpeed<T>, points: &[TrajectoryPoint<T>]) -> Self {
        TrajectoryFile {
            n: number(n),
            v0_or_one_minus_v0: match speed {
                InitialSpeed::Velocity(v) => SpeedField::V0(number(v)),
                InitialSpeed::OneMinusVelocity(x) => SpeedField::OneMinusV0(number(x)),
            },
            precision: T::BACKEND.name().to_owned(),
            records: points
                .iter()
                .map(|p| TrajectoryRecord {
                    k: p.step,
                    v1: number(velocity_from_alpha(p.state.big()).get()),
                    v2: number(velocity_from_alpha(p.state.small()).get()),
                    alpha1: number(p.state.big().value()),
                    alpha2: number(p.state.small().value()),
                    k1_frac: number(p.k1_fraction),
                    k2_frac: number(p.k2_fraction),
                    e_drift: number(p.energy_drift_cumulative),
                    p_drift: number(p.momentum_drift_cumulative),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).context("malformed trajectory file")
    }

    pub fn backend(&self) -> Result<ScalarBackend> {
        Ok(self.precision.parse()?)
    }

    pub fn speed<T: Real>(&self) -> Result<InitialSpeed<T>> {
        Ok(match &self.v0_or_one_minus_v0 {
            SpeedField::V0(v) => InitialSpeed::Velocity(value(v, "v0")?),
            SpeedField::OneMinusV0(x) => InitialSpeed::OneMinusVelocity(value(x, "one_minus_v0")?),
        })
    }

    /// Rebuilds the trajectory points. The collision state comes from the α
    /// columns; the velocity columns are checked against it.
    pub fn points<T: Real>(&self) -> Result<Vec<TrajectoryPoint<T>>> {
        let mass_ratio = value::<T>(&self.n, "n")? - T::one();
        self.records
            .iter()
            .map(|r| {
                let state = AlphaState::from_alphas(value(&r.alpha1, "alpha1")?, value(&r.alpha2, "alpha2")?, mass_ratio)
                    .with_context(|| format!("record {}", r.k))?;
                for (field, stored, alpha) in [("v1", &r.v1, state.big()), ("v2", &r.v2, state.small())] {
                    let stored: f64 = value(stored, field)?;
                    let derived = velocity_from_alpha(alpha).get().to_f64();
                    if (stored - derived).abs() > 1e-12 {
                        bail!("record {}: {field} = {stored} disagrees with its alpha ({derived})", r.k);
                    }
                }
                Ok(TrajectoryPoint {
                    step: r.k,
                    state,
                    k1_fraction: value(&r.k1_frac, "K1_frac")?,
                    k2_fraction: value(&r.k2_frac, "K2_frac")?,
                    energy_drift_cumulative: value(&r.e_drift, "e_drift")?,
                    momentum_drift_cumulative: value(&r.p_drift, "p_drift")?,
                })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use grover_rel::{run_transfer, Extended, TransferConfig};

    fn round_trip<T: Real>(cfg: TransferConfig<T>) {
        let out = run_transfer(&cfg.clone().record_trajectory(true)).unwrap();
        let points = out.trajectory.unwrap();
        let file = TrajectoryFile::new(cfg.n, cfg.initial, &points);
        let parsed = TrajectoryFile::from_json(&file.to_json()).unwrap();
        assert_eq!(parsed, file);
        assert_eq!(parsed.backend().unwrap(), T::BACKEND);
        assert_eq!(parsed.speed::<T>().unwrap(), cfg.initial);

        let back = parsed.points::<T>().unwrap();
        assert_eq!(back.len(), points.len());
        let tol = T::from_f64(T::BACKEND.conservation_tolerance());
        let digits = T::from_f64(10f64.powi(-(T::BACKEND.significant_digits() as i32)));
        for (a, b) in back.iter().zip(&points) {
            assert_eq!(a.step, b.step);
            assert!((a.k2_fraction - b.k2_fraction).abs() <= digits * b.k2_fraction);
            assert!((a.k1_fraction + a.k2_fraction - T::one()).abs() <= tol);
            let da = a.state.small().rapidity() - b.state.small().rapidity();
            assert!(da.abs() <= tol);
        }
    }

    #[test]
    fn standard_round_trip() {
        round_trip(TransferConfig::with_velocity(100.0, 0.3));
    }

    #[test]
    fn extended_round_trip() {
        round_trip(TransferConfig::with_one_minus_velocity(
            Extended::from(1000.0),
            Extended::parse_decimal("2e-6").unwrap(),
        ));
    }

    #[test]
    fn schema_field_names() {
        let out = run_transfer(&TransferConfig::with_velocity(10.0, 0.3).record_trajectory(true)).unwrap();
        let file = TrajectoryFile::new(10.0, InitialSpeed::Velocity(0.3), &out.trajectory.unwrap());
        let json: serde_json::Value = serde_json::from_str(&file.to_json()).unwrap();
        let top: Vec<&str> = json.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(top, ["n", "precision", "records", "v0_or_one_minus_v0"]);
        let record: Vec<&str> = json["records"][0].as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(
            record,
            ["K1_frac", "K2_frac", "alpha1", "alpha2", "e_drift", "k", "p_drift", "v1", "v2"]
        );
        assert_eq!(json["v0_or_one_minus_v0"]["v0"].to_string(), "2.9999999999999999e-1");
    }

    #[test]
    fn rejects_inconsistent_velocity() {
        let out = run_transfer(&TransferConfig::with_velocity(10.0, 0.3).record_trajectory(true)).unwrap();
        let mut file = TrajectoryFile::new(10.0, InitialSpeed::Velocity(0.3), &out.trajectory.unwrap());
        file.records[1].v2 = number(0.5);
        assert!(file.points::<f64>().is_err());
    }
}
