use alloc::collections::BTreeMap;

/// Where a number came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    Analytic,
    MonteCarlo,
}

impl Provenance {
    pub fn label(self) -> &'static str {
        match self {
            Provenance::Analytic => "analytic",
            Provenance::MonteCarlo => "monte-carlo",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricEstimate {
    pub mean: f64,
    /// Sample standard deviation over `sqrt(trials)`; infinite for one trial
    /// and zero for analytic values.
    pub std_error: f64,
    pub trials: u64,
    pub provenance: Provenance,
}

impl MetricEstimate {
    pub fn analytic(value: f64) -> Self {
        MetricEstimate {
            mean: value,
            std_error: 0.0,
            trials: 0,
            provenance: Provenance::Analytic,
        }
    }

    /// Whether `value` lies within `k` standard errors of the mean.
    pub fn agrees_with(&self, value: f64, k: f64) -> bool {
        (self.mean - value).abs() <= k * self.std_error
    }
}

/// Running mean and sum of squared deviations of one sample stream.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub count: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    pub fn push(&mut self, v: f64) {
        self.count += 1;
        let delta = v - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (v - self.mean);
    }

    /// Pairwise combination; deterministic for a fixed merge order.
    pub fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = (self.count + other.count) as f64;
        let delta = other.mean - self.mean;
        let (na, nb) = (self.count as f64, other.count as f64);
        self.mean += delta * nb / n;
        self.m2 += other.m2 + delta * delta * na * nb / n;
        self.count += other.count;
    }

    pub fn estimate(&self) -> Option<MetricEstimate> {
        if self.count == 0 {
            return None;
        }
        let std_error = if self.count == 1 {
            f64::INFINITY
        } else {
            let var = self.m2 / (self.count - 1) as f64;
            libm::sqrt(var / self.count as f64)
        };
        Some(MetricEstimate {
            mean: self.mean,
            std_error,
            trials: self.count,
            provenance: Provenance::MonteCarlo,
        })
    }
}

/// Quantities estimated by the Monte Carlo driver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Metric {
    /// SINR above threshold.
    Coverage,
    /// Footprint outlasts the slot, among covered trials.
    NoLeave,
    /// Footprint outlasts the slot, over all trials.
    NoLeaveUnconditional,
    /// Covered and the footprint outlasts the slot.
    Connectivity,
    LosAssociation,
    NlosAssociation,
    /// Shannon capacity regardless of coverage, bit/s.
    Rate,
    /// Aligned time within the slot, s.
    CommTime,
    /// Per-trial rate times aligned fraction, bit/s.
    Throughput,
}

impl Metric {
    pub const ALL: [Metric; 9] = [
        Metric::Coverage,
        Metric::NoLeave,
        Metric::NoLeaveUnconditional,
        Metric::Connectivity,
        Metric::LosAssociation,
        Metric::NlosAssociation,
        Metric::Rate,
        Metric::CommTime,
        Metric::Throughput,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Coverage => "P_cov",
            Metric::NoLeave => "P_NL",
            Metric::NoLeaveUnconditional => "P_NL_uncond",
            Metric::Connectivity => "P_C",
            Metric::LosAssociation => "P_L",
            Metric::NlosAssociation => "P_N",
            Metric::Rate => "rate",
            Metric::CommTime => "T_comm",
            Metric::Throughput => "B",
        }
    }

    pub fn from_name(name: &str) -> Option<Metric> {
        Metric::ALL.into_iter().find(|m| m.name() == name)
    }
}

/// Per-metric moments of a batch of trials.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrialAccumulator {
    pub moments: BTreeMap<Metric, Moments>,
    pub trials: u64,
}

impl TrialAccumulator {
    pub fn push(&mut self, metric: Metric, v: f64) {
        self.moments.entry(metric).or_default().push(v);
    }

    pub fn merge(&mut self, other: &TrialAccumulator) {
        self.trials += other.trials;
        for (m, mo) in &other.moments {
            self.moments.entry(*m).or_default().merge(mo);
        }
    }

    /// Estimate of `metric`; `None` when it never applied (e.g. the
    /// conditional no-leave probability with no covered trial).
    pub fn estimate(&self, metric: Metric) -> Option<MetricEstimate> {
        self.moments.get(&metric).and_then(Moments::estimate)
    }
}
