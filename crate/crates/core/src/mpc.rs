//! Machine configuration and round/space accounting for the (γ,δ)-MPC model.
//!
//! Algorithms in this crate execute sequentially on the host, but every bulk
//! primitive (sort, batched query, link-doubling step, routing) must be
//! charged to a [`RoundLedger`]. The ledger records canonical round costs and
//! tracks the peak number of live words, which is what the tests compare
//! against the model's round and total-space bounds.

use serde::Serialize;

use crate::{Error, Result};

/// Machine layout for input size `N`: `s = ceil(N^delta)` words per machine
/// and `p = ceil(N^(1+gamma) / s)` machines, so `p * s >= N^(1+gamma)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MachineConfig {
    pub input_size: u64,
    pub delta: f64,
    pub gamma: f64,
    pub local_capacity: u64,
    pub machine_count: u64,
}

/// Rounds a power that is within floating-point slop of an integer.
fn int_pow(base: f64, exp: f64) -> f64 {
    let x = base.powf(exp);
    if (x - x.round()).abs() < 1e-9 * x.max(1.0) {
        x.round()
    } else {
        x
    }
}

pub fn configure(input_size: u64, delta: f64, gamma: f64) -> Result<MachineConfig> {
    if input_size == 0 {
        return Err(Error::BadConfig("input size must be >= 1".into()));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::BadConfig(format!("delta {delta} not in (0, 1)")));
    }
    if !(gamma >= 0.0) {
        return Err(Error::BadConfig(format!("gamma {gamma} must be >= 0")));
    }
    let n = input_size as f64;
    let local_capacity = int_pow(n, delta).ceil() as u64;
    let total = int_pow(n, 1.0 + gamma);
    let machine_count = (total / local_capacity as f64).ceil() as u64;
    Ok(MachineConfig {
        input_size,
        delta,
        gamma,
        local_capacity,
        machine_count,
    })
}

/// Charged bulk primitives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimitiveKind {
    /// Global sort; charged `ceil(c / delta)` rounds.
    Sort,
    /// Batched lookups into stored mappings; charged a constant (request,
    /// serve, return).
    MultiQuery,
    /// One synchronous pointer-jumping / link-hop step over a mapping.
    LinkDoubleStep,
    /// One superstep of purely local computation.
    LocalRound,
    /// One bulk data exchange.
    Route,
}

#[derive(Debug, Clone, Serialize)]
pub struct Charge {
    pub kind: PrimitiveKind,
    pub volume: u64,
    pub rounds: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditFailure {
    pub machine: usize,
    pub load: u64,
    pub capacity: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AuditVerdict {
    Ok,
    Violations(usize),
}

/// Round costs. The sorting constant `c` and the multi-query constant are
/// left open by the model; defaults are `c = 1` and 3 rounds per batched
/// query phase.
#[derive(Debug, Clone, Copy)]
pub struct CostModel {
    pub delta: f64,
    pub sort_c: f64,
    pub multi_query_rounds: u64,
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel {
            delta: 0.5,
            sort_c: 1.0,
            multi_query_rounds: 3,
        }
    }
}

impl CostModel {
    pub fn for_delta(delta: f64) -> Self {
        CostModel {
            delta,
            ..CostModel::default()
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RoundLedger {
    cost: CostModel,
    pub rounds_charged: u64,
    pub charges: Vec<Charge>,
    pub peak_space: u64,
    pub audit_failures: Vec<AuditFailure>,
}

impl RoundLedger {
    pub fn new(cost: CostModel) -> Self {
        RoundLedger {
            cost,
            rounds_charged: 0,
            charges: Vec::new(),
            peak_space: 0,
            audit_failures: Vec::new(),
        }
    }

    pub fn cost_model(&self) -> CostModel {
        self.cost
    }

    fn rounds_for(&self, kind: PrimitiveKind) -> u64 {
        match kind {
            PrimitiveKind::Sort => (self.cost.sort_c / self.cost.delta).ceil() as u64,
            PrimitiveKind::MultiQuery => self.cost.multi_query_rounds,
            _ => 1,
        }
    }

    /// Appends one charged primitive covering `volume` live words.
    pub fn charge(&mut self, kind: PrimitiveKind, volume: u64) {
        let rounds = self.rounds_for(kind);
        self.rounds_charged += rounds;
        self.peak_space = self.peak_space.max(volume);
        self.charges.push(Charge {
            kind,
            volume,
            rounds,
        });
    }

    /// Charges `steps` consecutive rounds of the same unit-cost primitive.
    pub fn charge_steps(&mut self, kind: PrimitiveKind, steps: u64, volume: u64) {
        for _ in 0..steps {
            self.charge(kind, volume);
        }
    }

    /// Checks per-machine loads against the configured capacity. Violations
    /// are recorded, not raised.
    pub fn audit_load(&mut self, config: &MachineConfig, loads: &[u64]) -> AuditVerdict {
        debug_assert!(loads.len() <= config.machine_count as usize);
        let before = self.audit_failures.len();
        for (machine, &load) in loads.iter().enumerate() {
            if load > config.local_capacity {
                self.audit_failures.push(AuditFailure {
                    machine,
                    load,
                    capacity: config.local_capacity,
                });
            }
        }
        match self.audit_failures.len() - before {
            0 => AuditVerdict::Ok,
            k => AuditVerdict::Violations(k),
        }
    }

    pub fn report(&self) -> Report {
        let mut per_kind = std::collections::BTreeMap::new();
        for c in &self.charges {
            let entry = per_kind
                .entry(format!("{:?}", c.kind).to_lowercase())
                .or_insert(KindSummary::default());
            entry.count += 1;
            entry.rounds += c.rounds;
        }
        Report {
            rounds: self.rounds_charged,
            peak_space_words: self.peak_space,
            charges: self.charges.clone(),
            per_kind,
            audit_failures: self.audit_failures.len(),
        }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct KindSummary {
    pub count: u64,
    pub rounds: u64,
}

/// Serializable metrics record for one run.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub rounds: u64,
    pub peak_space_words: u64,
    pub charges: Vec<Charge>,
    pub per_kind: std::collections::BTreeMap<String, KindSummary>,
    pub audit_failures: usize,
}
