use serde::Serialize;
use serde_json::{Map, Value};

/// Largest residual of a run and where it occurred.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorstSample {
    pub configuration: Vec<f64>,
    pub value: f64,
}

/// Outcome of one seeded identity check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub identity: String,
    pub model: String,
    pub seed: u64,
    pub trials: usize,
    pub tolerance: f64,
    pub max_residual: f64,
    pub mean_residual: f64,
    pub pass: bool,
    pub worst_sample: Option<WorstSample>,
    /// Identity-specific extras (fitted constants, predictions, …).
    pub details: Map<String, Value>,
}

impl ResidualReport {
    /// Aggregates per-trial residuals (in trial order) into a report.
    pub fn from_samples(
        identity: &str,
        model: String,
        seed: u64,
        tolerance: f64,
        samples: impl IntoIterator<Item = (Vec<f64>, f64)>,
    ) -> Self {
        let mut max = 0.0f64;
        let mut sum = 0.0;
        let mut count = 0usize;
        let mut worst = None;
        let mut finite = true;
        for (x, r) in samples {
            finite &= r.is_finite();
            if worst.is_none() || r > max || !r.is_finite() {
                max = if r.is_finite() { r.max(max) } else { f64::INFINITY };
                worst = Some(WorstSample { configuration: x, value: r });
            }
            sum += r;
            count += 1;
        }
        let mean = if count == 0 { 0.0 } else { sum / count as f64 };
        Self {
            identity: identity.to_string(),
            model,
            seed,
            trials: count,
            tolerance,
            max_residual: max,
            mean_residual: mean.min(max),
            pass: finite && max <= tolerance,
            worst_sample: worst,
            details: Map::new(),
        }
    }

    pub fn with_detail(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.details.insert(key.to_string(), value.into());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        format!(
            "{:<24} {:<40} max={:.3e} mean={:.3e} tol={:.1e} {}",
            self.identity,
            self.model,
            self.max_residual,
            self.mean_residual,
            self.tolerance,
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}
