//! Imperialist competitive algorithm.
//!
//! A population of countries (candidate allocations) is split into empires:
//! the cheapest countries become imperialists and the rest are dealt out as
//! colonies in proportion to imperialist power. Each iteration colonies
//! assimilate toward their imperialist, some revolt to random positions,
//! imperialists are replaced by cheaper colonies, and the weakest empire
//! loses a colony to a stronger one. Empires that run out of colonies
//! collapse. The search stops after `max_iterations` or when one empire
//! remains.
//!
//! Costs follow a minimization convention; [`run`] prices a position as the
//! negated penalized objective.

mod ops;

pub use ops::{
    apportion, assimilate, compete, empire_power, exchange, form_empires, initialize,
    normalized_powers, revolve, roulette_winner, CompetitionOutcome, CostFunction,
};

use crate::error::{Error, Result};
use crate::model::{DeterministicLP, ResidualReport, Tolerances};
use crate::penalty::{penalized_objective, repair, PenaltyConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A candidate solution and its cost.
#[derive(Debug, Clone, PartialEq)]
pub struct Country {
    pub position: Vec<f64>,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Empire {
    pub imperialist: Country,
    pub colonies: Vec<Country>,
}

impl Empire {
    pub fn countries(&self) -> impl Iterator<Item = &Country> {
        std::iter::once(&self.imperialist).chain(&self.colonies)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IcaConfig {
    pub n_countries: usize,
    pub n_imperialists: usize,
    /// Probability that a colony is redrawn at random each iteration.
    pub revolution_rate: f64,
    pub max_iterations: usize,
    /// Weight of the mean colony cost in an empire's total cost.
    pub epsilon: f64,
    /// Assimilation step multiplier (> 1 lets colonies overshoot).
    pub assimilation_beta: f64,
    pub seed: u64,
}

impl Default for IcaConfig {
    fn default() -> Self {
        Self {
            n_countries: 100,
            n_imperialists: 10,
            revolution_rate: 0.2,
            max_iterations: 25,
            epsilon: 0.05,
            assimilation_beta: 2.0,
            seed: 0,
        }
    }
}

impl IcaConfig {
    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |reason: String| Error::Invalid {
            what: "ICA configuration".into(),
            reason,
        };
        if self.n_imperialists < 1 || self.n_imperialists >= self.n_countries {
            return Err(invalid(format!(
                "need 1 <= imperialists < countries, got {} of {}",
                self.n_imperialists, self.n_countries
            )));
        }
        if !(0.0..=1.0).contains(&self.revolution_rate) {
            return Err(invalid(format!("revolution rate {} outside [0, 1]", self.revolution_rate)));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 0.1) {
            return Err(invalid(format!("epsilon {} outside (0, 0.1)", self.epsilon)));
        }
        if !(self.assimilation_beta > 1.0 && self.assimilation_beta.is_finite()) {
            return Err(invalid(format!(
                "assimilation beta {} must exceed 1",
                self.assimilation_beta
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct TraceRecord {
    pub iteration: usize,
    /// Lowest cost seen so far.
    pub best_cost: f64,
    pub empires: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    /// Best position found, projected onto the budget and box.
    pub best_position: Vec<f64>,
    /// Best position as found, before projection.
    pub raw_position: Vec<f64>,
    /// Cost of `raw_position`.
    pub best_cost: f64,
    /// `c . best_position`.
    pub best_objective: f64,
    pub trace: Vec<TraceRecord>,
    pub residuals: ResidualReport,
    pub evaluations: u64,
    pub seed: u64,
}

/// Wraps a cost function and remembers the cheapest position it has priced.
struct Tracked<F> {
    inner: F,
    best: Option<Country>,
    evaluations: u64,
}

impl<F: CostFunction> CostFunction for Tracked<F> {
    fn cost(&mut self, position: &[f64]) -> f64 {
        let cost = self.inner.cost(position);
        self.evaluations += 1;
        if self.best.as_ref().is_none_or(|b| cost < b.cost) {
            self.best = Some(Country {
                position: position.to_vec(),
                cost,
            });
        }
        cost
    }
}

/// A running search. Drive it with [`IcaState::step`] to observe the
/// population between iterations, or call [`run`].
pub struct IcaState<F> {
    config: IcaConfig,
    upper: Vec<f64>,
    cost: Tracked<F>,
    rng: ChaCha8Rng,
    empires: Vec<Empire>,
    iteration: usize,
    trace: Vec<TraceRecord>,
}

impl<F: CostFunction> IcaState<F> {
    /// Seeds the generator, draws the initial population and forms empires.
    pub fn new(config: IcaConfig, upper: Vec<f64>, cost: F) -> Result<Self> {
        config.validate()?;
        if let Some(&u) = upper.iter().find(|u| !(u.is_finite() && **u >= 0.0)) {
            return Err(Error::Domain {
                what: "upper bound",
                value: u,
                domain: "[0, inf)",
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut cost = Tracked {
            inner: cost,
            best: None,
            evaluations: 0,
        };
        let countries = initialize(&config, &upper, &mut cost, &mut rng);
        let empires = form_empires(countries, &config, &mut rng);
        let mut state = Self {
            config,
            upper,
            cost,
            rng,
            empires,
            iteration: 0,
            trace: Vec::with_capacity(config.max_iterations + 1),
        };
        state.record();
        Ok(state)
    }

    pub fn empires(&self) -> &[Empire] {
        &self.empires
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn trace(&self) -> &[TraceRecord] {
        &self.trace
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Cheapest country evaluated so far.
    pub fn best(&self) -> &Country {
        self.cost.best.as_ref().expect("population is never empty")
    }

    pub fn is_finished(&self) -> bool {
        self.iteration >= self.config.max_iterations || self.empires.len() <= 1
    }

    /// Runs one iteration. Returns `false` once the stopping rule holds.
    pub fn step(&mut self) -> bool {
        if self.is_finished() {
            return false;
        }
        for empire in &mut self.empires {
            assimilate(empire, &self.config, &self.upper, &mut self.cost, &mut self.rng);
            revolve(empire, &self.config, &self.upper, &mut self.cost, &mut self.rng);
            exchange(empire);
        }
        if let Some(outcome) = compete(&mut self.empires, self.config.epsilon, &mut self.rng) {
            // A transferred colony may undercut its new imperialist.
            let winner = match outcome.collapsed && outcome.winner > outcome.loser {
                true => outcome.winner - 1,
                false => outcome.winner,
            };
            exchange(&mut self.empires[winner]);
        }
        self.iteration += 1;
        debug_assert!(self.in_box(), "position left the box");
        self.record();
        !self.is_finished()
    }

    fn in_box(&self) -> bool {
        self.empires.iter().flat_map(Empire::countries).all(|c| {
            c.position
                .iter()
                .zip(&self.upper)
                .all(|(x, u)| *x >= 0.0 && x <= u)
        })
    }

    fn record(&mut self) {
        self.trace.push(TraceRecord {
            iteration: self.iteration,
            best_cost: self.best().cost,
            empires: self.empires.len(),
        });
    }

    pub fn evaluations(&self) -> u64 {
        self.cost.evaluations
    }
}

/// Searches `lp` with penalized costs and returns the projected best point.
pub fn run(lp: &DeterministicLP, penalty: &PenaltyConfig, config: &IcaConfig) -> Result<RunReport> {
    penalty.validate()?;
    let cost = |x: &[f64]| -penalized_objective(lp, x, penalty);
    let mut state = IcaState::new(*config, lp.upper_bounds.clone(), cost)?;
    while state.step() {}

    let best = state.best().clone();
    let best_position = repair(&best.position, lp.total_fund, &lp.upper_bounds)?;
    let best_objective = lp.objective(&best_position)?;
    let residuals = lp.residuals(&best_position, &Tolerances::default())?;
    Ok(RunReport {
        best_position,
        raw_position: best.position,
        best_cost: best.cost,
        best_objective,
        residuals,
        evaluations: state.evaluations(),
        trace: state.trace,
        seed: config.seed,
    })
}
