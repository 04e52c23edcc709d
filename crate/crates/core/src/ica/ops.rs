//! The individual steps of the competitive search.

use super::{Country, Empire, IcaConfig};
use rand::seq::SliceRandom;
use rand::Rng;

/// Something that prices a position. Lower is better.
pub trait CostFunction {
    fn cost(&mut self, position: &[f64]) -> f64;
}

impl<F: FnMut(&[f64]) -> f64> CostFunction for F {
    fn cost(&mut self, position: &[f64]) -> f64 {
        self(position)
    }
}

fn uniform_point<R: Rng + ?Sized>(upper: &[f64], rng: &mut R) -> Vec<f64> {
    upper.iter().map(|&u| u * rng.random::<f64>()).collect()
}

/// Draws `config.n_countries` positions uniformly in `[0, upper]`.
pub fn initialize<C: CostFunction, R: Rng + ?Sized>(
    config: &IcaConfig,
    upper: &[f64],
    cost: &mut C,
    rng: &mut R,
) -> Vec<Country> {
    (0..config.n_countries)
        .map(|_| {
            let position = uniform_point(upper, rng);
            let cost = cost.cost(&position);
            Country { position, cost }
        })
        .collect()
}

/// Normalized powers `p_n = C_n / sum C_i` with `C_n = c_n - max_i c_i`.
///
/// All `C_n` are nonpositive, so the powers are nonnegative and sum to one.
/// When every cost is equal the ratio is undefined and uniform powers are
/// returned instead.
pub fn normalized_powers(costs: &[f64]) -> Vec<f64> {
    let worst = costs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let shifted: Vec<f64> = costs.iter().map(|c| c - worst).collect();
    let total: f64 = shifted.iter().sum();
    if total < 0.0 && total.is_finite() {
        shifted.iter().map(|c| c / total).collect()
    } else {
        vec![1.0 / costs.len() as f64; costs.len()]
    }
}

/// Splits `total` items by `shares` with the largest-remainder method.
/// Leftover units go to the largest fractional parts, lower index first.
pub fn apportion(shares: &[f64], total: usize) -> Vec<usize> {
    let quotas: Vec<f64> = shares.iter().map(|p| p * total as f64).collect();
    let mut counts: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..shares.len()).collect();
    order.sort_by(|&a, &b| {
        let fa = quotas[a] - quotas[a].floor();
        let fb = quotas[b] - quotas[b].floor();
        fb.total_cmp(&fa).then(a.cmp(&b))
    });
    for &i in order.iter().cycle().take(total.saturating_sub(assigned)) {
        counts[i] += 1;
    }
    counts
}

/// Promotes the `n_imperialists` cheapest countries and hands out the rest
/// in proportion to imperialist power. Colonies are shuffled before they are
/// dealt.
pub fn form_empires<R: Rng + ?Sized>(
    mut countries: Vec<Country>,
    config: &IcaConfig,
    rng: &mut R,
) -> Vec<Empire> {
    countries.sort_by(|a, b| a.cost.total_cmp(&b.cost));
    let n_imp = config.n_imperialists.min(countries.len());
    let mut colonies = countries.split_off(n_imp);
    let costs: Vec<f64> = countries.iter().map(|c| c.cost).collect();
    let counts = apportion(&normalized_powers(&costs), colonies.len());
    colonies.shuffle(rng);

    let mut dealt = colonies.into_iter();
    countries
        .into_iter()
        .zip(counts)
        .map(|(imperialist, k)| Empire {
            imperialist,
            colonies: dealt.by_ref().take(k).collect(),
        })
        .collect()
}

/// Moves every colony toward its imperialist: each coordinate advances by
/// `u * beta * (imperialist - colony)` with an independent `u ~ U(0, 1)`,
/// then is clamped to the box.
pub fn assimilate<C: CostFunction, R: Rng + ?Sized>(
    empire: &mut Empire,
    config: &IcaConfig,
    upper: &[f64],
    cost: &mut C,
    rng: &mut R,
) {
    let target = &empire.imperialist.position;
    for colony in &mut empire.colonies {
        for ((x, &t), &u) in colony.position.iter_mut().zip(target).zip(upper) {
            let step = rng.random::<f64>() * config.assimilation_beta * (t - *x);
            *x = (*x + step).clamp(0.0, u);
        }
        colony.cost = cost.cost(&colony.position);
    }
}

/// Redraws each colony uniformly in the box with probability
/// `revolution_rate`.
pub fn revolve<C: CostFunction, R: Rng + ?Sized>(
    empire: &mut Empire,
    config: &IcaConfig,
    upper: &[f64],
    cost: &mut C,
    rng: &mut R,
) {
    for colony in &mut empire.colonies {
        if rng.random::<f64>() < config.revolution_rate {
            colony.position = uniform_point(upper, rng);
            colony.cost = cost.cost(&colony.position);
        }
    }
}

/// Swaps the imperialist with its cheapest colony if that colony is
/// strictly cheaper. Returns whether a swap happened.
pub fn exchange(empire: &mut Empire) -> bool {
    let best = empire
        .colonies
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.cost.total_cmp(&b.1.cost));
    match best {
        Some((i, c)) if c.cost < empire.imperialist.cost => {
            std::mem::swap(&mut empire.imperialist, &mut empire.colonies[i]);
            true
        }
        _ => false,
    }
}

/// Total cost of an empire: the imperialist's cost plus `epsilon` times the
/// mean colony cost.
pub fn empire_power(empire: &Empire, epsilon: f64) -> f64 {
    if empire.colonies.is_empty() {
        return empire.imperialist.cost;
    }
    let mean = empire.colonies.iter().map(|c| c.cost).sum::<f64>() / empire.colonies.len() as f64;
    empire.imperialist.cost + epsilon * mean
}

/// What a round of competition did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompetitionOutcome {
    pub loser: usize,
    pub winner: usize,
    pub collapsed: bool,
}

/// Index of the empire that wins a contested colony, drawn by roulette over
/// possession probabilities. The losing empire is excluded from the draw.
pub fn roulette_winner<R: Rng + ?Sized>(powers: &[f64], loser: usize, rng: &mut R) -> usize {
    let mut p = normalized_powers(powers);
    p[loser] = 0.0;
    let total: f64 = p.iter().sum();
    if total.is_nan() || total <= 0.0 {
        let others = powers.len() - 1;
        let pick = rng.random_range(0..others);
        return if pick >= loser { pick + 1 } else { pick };
    }
    let r = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last = loser;
    for (i, &pi) in p.iter().enumerate() {
        if pi <= 0.0 {
            continue;
        }
        acc += pi;
        last = i;
        if r < acc {
            return i;
        }
    }
    last
}

/// One round of imperialistic competition.
///
/// The weakest empire (highest total cost) gives up its most expensive
/// colony to a roulette winner. An empire left without colonies collapses
/// and its imperialist joins the winner as a colony. No-op for fewer than
/// two empires.
pub fn compete<R: Rng + ?Sized>(
    empires: &mut Vec<Empire>,
    epsilon: f64,
    rng: &mut R,
) -> Option<CompetitionOutcome> {
    if empires.len() < 2 {
        return None;
    }
    let powers: Vec<f64> = empires.iter().map(|e| empire_power(e, epsilon)).collect();
    let loser = powers
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
        .map(|(i, _)| i)
        .expect("at least two empires");
    let winner = roulette_winner(&powers, loser, rng);

    if let Some(i) = empires[loser]
        .colonies
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cost.total_cmp(&b.1.cost))
        .map(|(i, _)| i)
    {
        let colony = empires[loser].colonies.swap_remove(i);
        empires[winner].colonies.push(colony);
    }

    let collapsed = empires[loser].colonies.is_empty();
    if collapsed {
        let fallen = empires.remove(loser);
        let winner = if winner > loser { winner - 1 } else { winner };
        empires[winner].colonies.push(fallen.imperialist);
    }
    Some(CompetitionOutcome {
        loser,
        winner,
        collapsed,
    })
}
