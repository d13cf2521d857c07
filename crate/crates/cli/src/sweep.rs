//! Parameter sweeps over a fixed scene.

use rayon::prelude::*;
use serde::Deserialize;
use veil_core::format::sig9;
use veil_core::scene_file::MeasurementJson;
use veil_core::{forecast_holes, HoleSide, SceneFile};

use crate::error::{CliError, CliResult};
use crate::report::{extrapolation_row, interpolation_row, ExtrapolationRow, InterpolationRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum Parameter {
    #[serde(rename = "b")]
    Baseline,
    #[serde(rename = "s")]
    Offset,
    #[serde(rename = "h")]
    Hole,
    #[serde(rename = "n")]
    Count,
    #[serde(rename = "Zb")]
    BackgroundDepth,
    #[serde(rename = "x_R")]
    RightCamera,
}

impl Parameter {
    pub fn name(self) -> &'static str {
        match self {
            Self::Baseline => "b",
            Self::Offset => "s",
            Self::Hole => "h",
            Self::Count => "n",
            Self::BackgroundDepth => "Zb",
            Self::RightCamera => "x_R",
        }
    }

    fn is_interpolation(self) -> bool {
        self == Self::RightCamera
    }
}

/// A sweep file: `parameter` runs from `start` to `stop` in `steps` evenly
/// spaced values (both ends included) while the rest of `fixed` is held.
/// Lengths are meters, including `h`; `n` is rounded to a whole count.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub parameter: Parameter,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub fixed: SceneFile,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Row {
    Extrapolation(ExtrapolationRow),
    Interpolation(InterpolationRow),
}

impl Row {
    pub fn anonymity(&self) -> f64 {
        match self {
            Self::Extrapolation(r) => r.anonymity,
            Self::Interpolation(r) => r.anonymity,
        }
    }

    fn csv(&self) -> String {
        match self {
            Self::Extrapolation(r) => r.csv(),
            Self::Interpolation(r) => r.csv(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub parameter: Parameter,
    pub values: Vec<f64>,
    pub rows: Vec<Row>,
}

impl SweepSpec {
    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Validation(format!("sweep spec: {e}")))
    }

    fn check(&self) -> CliResult<()> {
        let mut problems = Vec::new();
        if self.steps < 2 {
            problems.push(format!("steps must be at least 2, got {}", self.steps));
        }
        if !(self.start.is_finite() && self.stop.is_finite() && self.start < self.stop) {
            problems.push(format!(
                "need finite start < stop, got {} and {}",
                self.start, self.stop
            ));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(CliError::Validation(format!("sweep spec: {}", problems.join("; "))))
        }
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            return self.stop;
        }
        self.start + (self.stop - self.start) * i as f64 / (self.steps - 1) as f64
    }

    /// The fixed scene with the swept parameter set to `v`.
    pub fn scene_at(&self, v: f64) -> CliResult<SceneFile> {
        let mut s = self.fixed.clone();
        match self.parameter {
            Parameter::Baseline => s.cameras.left_x = s.cameras.right_x - v,
            Parameter::Offset => s.synth_x = s.cameras.right_x + v,
            Parameter::Hole => {
                let lhat = match s.measurement {
                    Some(m) => m.lhat,
                    None => {
                        let fixed = s.load()?;
                        forecast_holes(&fixed.scene, &fixed.imaging)?.lhat
                    }
                };
                s.measurement = Some(MeasurementJson {
                    h: v,
                    lhat,
                    side: HoleSide::RightOfObject,
                });
            }
            Parameter::Count => {
                let p = &mut s.photographers;
                p.n = v.round() as u32;
                p.q_x = p.p_x + f64::from(p.n) * p.spacing;
            }
            Parameter::BackgroundDepth => {
                s.background.zb = v;
                s.cameras.z = v;
            }
            Parameter::RightCamera => s.cameras.right_x = v,
        }
        Ok(s)
    }

    fn row_at(&self, v: f64, prune_with_offset: bool) -> CliResult<Row> {
        let loaded = self.scene_at(v)?.load()?;
        if self.parameter.is_interpolation() {
            interpolation_row(&loaded).map(Row::Interpolation)
        } else {
            extrapolation_row(&loaded, prune_with_offset).map(Row::Extrapolation)
        }
    }

    /// Evaluates every step in parallel; rows come back in step order.
    pub fn run(&self, prune_with_offset: bool) -> CliResult<SweepResult> {
        self.check()?;
        let values: Vec<f64> = (0..self.steps).map(|i| self.value(i)).collect();
        let rows: Vec<CliResult<Row>> = values
            .par_iter()
            .map(|&v| self.row_at(v, prune_with_offset))
            .collect();
        let rows = rows
            .into_iter()
            .zip(&values)
            .enumerate()
            .map(|(i, (row, v))| {
                row.map_err(|e| {
                    CliError::Validation(format!(
                        "step {i} ({} = {}): {e}",
                        self.parameter.name(),
                        sig9(*v)
                    ))
                })
            })
            .collect::<CliResult<Vec<_>>>()?;
        Ok(SweepResult {
            parameter: self.parameter,
            values,
            rows,
        })
    }
}

impl SweepResult {
    pub fn to_csv(&self) -> String {
        let header = if self.parameter.is_interpolation() {
            InterpolationRow::HEADER
        } else {
            ExtrapolationRow::HEADER
        };
        let mut out = format!("{},{header}\n", self.parameter.name());
        for (v, row) in self.values.iter().zip(&self.rows) {
            out.push_str(&format!("{},{}\n", sig9(*v), row.csv()));
        }
        out
    }
}
