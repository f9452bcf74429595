//! Monitoring-cost sweeps around an equilibrium component of the base game.
//!
//! For each cost `c` the reduced monitored game is solved exactly and the
//! equilibrium whose projected outcome is closest to the component's outcome
//! `μ*` is recorded. A component *survives* at `c` when some Nash subset of the
//! monitored game still puts positive mass on every play in the support of `μ*`
//! after projection.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::equilibrium::{
    component_outcome, enumerate_extreme_equilibria, induced_outcome, maximal_nash_subsets, solve_components,
    Component, MixedEquilibrium, OutcomeReport,
};
use crate::error::{Error, Result};
use crate::game::SignalingGame;
use crate::index::{index_sum_for, IndexResult, PerturbationConfig};
use crate::normalform::{build_normal_form, build_reduced_sgcm, BimatrixGame, RowStrategy};
use crate::outcome::{outcome_distance, Outcome, Play};
use crate::rational::{self, Rational};

/// A component of the base game together with its constant outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseComponent {
    pub id: usize,
    pub component: Component,
    pub outcome: Outcome,
    pub payoffs: Option<(Rational, Rational)>,
}

/// Components of the base normal form, in the order used for `C0, C1, …` ids.
/// Fails if some component has a non-constant outcome.
pub fn base_components(game: &SignalingGame) -> Result<(BimatrixGame, Vec<BaseComponent>)> {
    let gamma = build_normal_form(game);
    let comps = solve_components(&gamma);
    let mut out = Vec::with_capacity(comps.len());
    for (id, component) in comps.into_iter().enumerate() {
        match component_outcome(game, &gamma, &component, true)? {
            OutcomeReport::Constant { outcome, payoffs } => {
                out.push(BaseComponent { id, component, outcome: outcome.projected(), payoffs })
            }
            OutcomeReport::NonConstant { .. } => {
                return Err(Error::Inconsistent(format!(
                    "component C{id} has a non-constant outcome; the game is not generic"
                )))
            }
        }
    }
    Ok((gamma, out))
}

/// Resolves `C<n>`, or the label of a pure sender strategy played throughout
/// exactly one component (e.g. `BB`).
pub fn resolve_component(gamma: &BimatrixGame, components: &[BaseComponent], id: &str) -> Result<usize> {
    if let Some(n) = id.strip_prefix('C').and_then(|n| n.parse::<usize>().ok()) {
        if n < components.len() {
            return Ok(n);
        }
        return Err(Error::UnknownComponent(id.to_string()));
    }
    if let Some(j) = gamma.col_labels.iter().position(|l| l == id) {
        let hits: Vec<usize> = components
            .iter()
            .filter(|c| c.component.extremes.iter().all(|e| e.col_mix[j] == rational::one()))
            .map(|c| c.id)
            .collect();
        if let [only] = hits.as_slice() {
            return Ok(*only);
        }
    }
    Err(Error::UnknownComponent(id.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grid {
    /// `c_max / 2^k` for `k = 0..steps`, dropping values below `c_min`.
    Geometric,
    /// `steps + 1` evenly spaced points from `c_min` to `c_max`.
    Linear,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub c_min: Rational,
    pub c_max: Rational,
    pub steps: usize,
    pub component: usize,
    pub epsilon: Option<Rational>,
    pub grid: Grid,
    pub delta: Rational,
}

impl SweepConfig {
    pub fn new(component: usize, c_min: Rational, c_max: Rational, steps: usize) -> Self {
        SweepConfig {
            c_min,
            c_max,
            steps,
            component,
            epsilon: None,
            grid: Grid::Geometric,
            delta: PerturbationConfig::default().delta,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.c_min.is_negative() || self.c_min >= self.c_max {
            return Err(Error::Config(format!(
                "need 0 <= cmin < cmax, got {} and {}",
                rational::show(&self.c_min),
                rational::show(&self.c_max)
            )));
        }
        if self.steps == 0 {
            return Err(Error::Config("steps must be at least 1".into()));
        }
        Ok(())
    }

    /// Costs to evaluate, ascending.
    pub fn grid_points(&self) -> Vec<Rational> {
        let mut points: Vec<Rational> = match self.grid {
            Grid::Geometric => {
                let mut c = self.c_max.clone();
                let half = rational::ratio(1, 2);
                let mut out = Vec::new();
                for _ in 0..self.steps {
                    if c < self.c_min {
                        break;
                    }
                    out.push(c.clone());
                    c = &c * &half;
                }
                out
            }
            Grid::Linear => {
                let width = (&self.c_max - &self.c_min) / rational::int(self.steps as i64);
                (0..=self.steps).map(|k| &self.c_min + &width * rational::int(k as i64)).collect()
            }
        };
        points.sort();
        points.dedup();
        points
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    pub c: Rational,
    /// The component survives at this cost.
    pub found: bool,
    pub nearest: Option<MixedEquilibrium>,
    pub monitor_probability: Rational,
    pub projected_outcome: Outcome,
    pub squared_distance: Rational,
    pub distance: String,
    pub payoffs: (Rational, Rational),
    /// Max-norm distance from the nearest equilibrium, mapped to base-game
    /// strategies, to the base component.
    pub mix_distance: f64,
    pub within_delta: bool,
    pub sender_support: Vec<(String, Rational)>,
    pub receiver_support: Vec<(String, Rational)>,
}

fn weighted(labels: &[String], mix: &[Rational]) -> Vec<(String, Rational)> {
    labels.iter().zip(mix).filter(|(_, w)| !w.is_zero()).map(|(l, w)| (l.clone(), w.clone())).collect()
}

/// Base row of every row of a reduced monitored game: monitoring rows map to
/// their per-message actions, the others to the constant default action.
fn base_row_image(reduced: &BimatrixGame, base: &BimatrixGame) -> Result<Vec<usize>> {
    let (Some(o), Some(ob)) = (&reduced.origin, &base.origin) else {
        return Err(Error::Inconsistent("normal forms lack strategy origins".into()));
    };
    o.rows
        .iter()
        .map(|r| {
            let target = match r {
                RowStrategy::Monitored(s) if s.monitor => s.on_message.clone(),
                RowStrategy::Monitored(s) => vec![s.default; s.on_message.len()],
                RowStrategy::Plain(s) => s.0.clone(),
            };
            ob.rows
                .iter()
                .position(|b| matches!(b, RowStrategy::Plain(p) if p.0 == target))
                .ok_or_else(|| Error::Inconsistent("no base row for a monitored strategy".into()))
        })
        .collect()
}

fn support_set(mu: &Outcome) -> BTreeSet<Play> {
    mu.support().into_iter().collect()
}

/// Everything computed about one cost level.
struct CostLevel {
    gamma: BimatrixGame,
    extremes: Vec<MixedEquilibrium>,
    projected: Vec<Outcome>,
    survives: bool,
}

fn solve_cost(game: &SignalingGame, target: &Outcome, c: &Rational) -> Result<CostLevel> {
    let gamma = build_reduced_sgcm(game, c)?.game;
    let extremes = enumerate_extreme_equilibria(&gamma);
    let projected: Vec<Outcome> = extremes
        .iter()
        .map(|e| induced_outcome(game, &gamma, &e.row_mix, &e.col_mix).map(|o| o.projected()))
        .collect::<Result<_>>()?;

    // The outcome is bilinear on a Nash subset, so the support at its
    // barycentre is the union over its vertex pairs.
    let wanted = support_set(target);
    let subsets = maximal_nash_subsets(&extremes);
    let survives = subsets.iter().any(|s| {
        let mut covered = BTreeSet::new();
        for x in &s.row_face {
            for y in &s.col_face {
                let k = extremes.iter().position(|e| &e.row_mix == x && &e.col_mix == y).unwrap();
                covered.extend(projected[k].support());
            }
        }
        wanted.is_subset(&covered)
    });
    Ok(CostLevel { gamma, extremes, projected, survives })
}

/// Whether the component with outcome `target` survives at cost `c`.
pub fn survives_at(game: &SignalingGame, target: &Outcome, c: &Rational) -> Result<bool> {
    Ok(solve_cost(game, target, c)?.survives)
}

pub fn evaluate_cost(
    game: &SignalingGame,
    base_gamma: &BimatrixGame,
    base: &BaseComponent,
    c: &Rational,
    delta: &Rational,
) -> Result<SweepRecord> {
    let level = solve_cost(game, &base.outcome, c)?;
    let mut best: Option<(usize, Rational)> = None;
    for (k, mu) in level.projected.iter().enumerate() {
        let d = outcome_distance(mu, &base.outcome)?.squared;
        // extremes are sorted, so a strict improvement keeps the least on ties
        if best.as_ref().is_none_or(|(_, b)| d < *b) {
            best = Some((k, d));
        }
    }
    let (k, squared) = best.ok_or_else(|| Error::Inconsistent("no equilibrium found".into()))?;
    let eq = level.extremes[k].clone();
    let gamma = &level.gamma;
    let monitors = &gamma.cost.as_ref().expect("monitored game").monitors;
    let monitor_probability = eq.row_mix.iter().zip(monitors).filter(|(_, m)| **m).map(|(w, _)| w.clone()).sum();
    let image = base_row_image(gamma, base_gamma)?;
    let mut base_mix = vec![rational::zero(); base_gamma.rows()];
    for (i, w) in eq.row_mix.iter().enumerate() {
        base_mix[image[i]] += w;
    }
    let mix_distance = base.component.distance_exact(&base_mix, &eq.col_mix);
    Ok(SweepRecord {
        c: c.clone(),
        found: level.survives,
        monitor_probability,
        projected_outcome: level.projected[k].clone(),
        distance: rational::sqrt_decimal(&squared),
        squared_distance: squared,
        payoffs: eq.payoffs.clone(),
        mix_distance,
        within_delta: mix_distance <= rational::to_f64(delta) + 1e-12,
        sender_support: weighted(&gamma.col_labels, &eq.col_mix),
        receiver_support: weighted(&gamma.row_labels, &eq.row_mix),
        nearest: Some(eq),
    })
}

/// Solves the reduced monitored game at every grid cost. Records are ordered
/// by `c` ascending.
pub fn cost_sweep(game: &SignalingGame, cfg: &SweepConfig) -> Result<Vec<SweepRecord>> {
    cfg.validate()?;
    let (gamma, comps) = base_components(game)?;
    let base = comps.get(cfg.component).ok_or_else(|| Error::UnknownComponent(format!("C{}", cfg.component)))?;
    cfg.grid_points().par_iter().map(|c| evaluate_cost(game, &gamma, base, c, &cfg.delta)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdResult {
    pub last_surviving: Rational,
    /// `None` when the component survives up to the cost at which monitoring
    /// is dominated, and hence at every cost.
    pub first_failing: Option<Rational>,
    pub width: Option<Rational>,
    /// Every cost evaluated, in evaluation order.
    pub evaluations: Vec<(Rational, bool)>,
}

/// A cost above which every monitoring strategy is strictly dominated by a
/// non-monitoring one.
pub fn dominating_cost(game: &SignalingGame) -> Rational {
    let values: Vec<&Rational> = game.payoffs.values().map(|p| &p.receiver).collect();
    let max = values.iter().max().map(|v| (*v).clone()).unwrap_or_default();
    let min = values.iter().min().map(|v| (*v).clone()).unwrap_or_default();
    max - min + rational::one()
}

const THRESHOLD_GRID: usize = 21;

/// Brackets the largest cost at which the component survives: a geometric
/// grid finds a surviving and a failing cost, then bisection narrows the gap to
/// at most `tolerance`.
pub fn survival_threshold(game: &SignalingGame, component: usize, tolerance: &Rational) -> Result<ThresholdResult> {
    if !tolerance.is_positive() {
        return Err(Error::Config("bracket tolerance must be positive".into()));
    }
    let (_, comps) = base_components(game)?;
    let base = comps.get(component).ok_or_else(|| Error::UnknownComponent(format!("C{component}")))?;
    let target = &base.outcome;

    let top = dominating_cost(game);
    let mut grid = SweepConfig::new(component, rational::zero(), top.clone(), THRESHOLD_GRID).grid_points();
    grid.retain(|c| c.is_positive());
    let outcomes: Vec<bool> = grid.par_iter().map(|c| survives_at(game, target, c)).collect::<Result<_>>()?;
    let mut evaluations: Vec<(Rational, bool)> = grid.iter().cloned().zip(outcomes.iter().copied()).collect();

    let Some(first_alive) = outcomes.iter().position(|&s| s) else {
        let tried: Vec<String> = grid.iter().map(rational::show).collect();
        return Err(Error::NoSurvivingCost(format!(
            "component C{component} fails at every grid cost in [{}, {}] ({} points)",
            tried.first().cloned().unwrap_or_default(),
            tried.last().cloned().unwrap_or_default(),
            tried.len()
        )));
    };
    let Some(first_dead) = (first_alive..grid.len()).find(|&k| !outcomes[k]) else {
        return Ok(ThresholdResult { last_surviving: top, first_failing: None, width: None, evaluations });
    };
    let mut lo = grid[first_dead - 1].clone();
    let mut hi = grid[first_dead].clone();
    let two = rational::int(2);
    while &hi - &lo > *tolerance {
        let mid = (&lo + &hi) / &two;
        let alive = survives_at(game, target, &mid)?;
        evaluations.push((mid.clone(), alive));
        if alive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ThresholdResult { width: Some(&hi - &lo), last_surviving: lo, first_failing: Some(hi), evaluations })
}

#[derive(Clone, Debug, PartialEq)]
pub struct TheoremReport {
    pub component: usize,
    pub epsilon: Rational,
    /// Largest grid cost below which every sampled cost stays within `ε`.
    pub c_epsilon: Option<Rational>,
    pub index: IndexResult,
    pub warning: Option<String>,
    pub evidence: Vec<SweepRecord>,
}

pub fn default_theorem_grid(component: usize) -> SweepConfig {
    SweepConfig::new(component, rational::zero(), rational::one(), 16)
}

/// Samples costs on the grid and returns the first cost at which the nearest
/// projected equilibrium outcome is `ε` or more away from the component's
/// outcome; every smaller sampled cost is within `ε`.
pub fn verify_theorem_bound(
    game: &SignalingGame,
    component: usize,
    epsilon: &Rational,
    grid: Option<SweepConfig>,
    index_cfg: &PerturbationConfig,
) -> Result<TheoremReport> {
    if !epsilon.is_positive() {
        return Err(Error::Config("epsilon must be positive".into()));
    }
    let cfg = grid.unwrap_or_else(|| default_theorem_grid(component));
    let cfg = SweepConfig { component, epsilon: Some(epsilon.clone()), ..cfg };
    let (gamma, comps) = base_components(game)?;
    if component >= comps.len() {
        return Err(Error::UnknownComponent(format!("C{component}")));
    }
    let plain: Vec<Component> = comps.iter().map(|c| c.component.clone()).collect();
    let index = index_sum_for(&gamma, &plain, index_cfg)?.indices.swap_remove(component);
    let warning = (index.value == 0 || index.indeterminate)
        .then(|| format!("component C{component} has index {}; no survival guarantee applies", index.value));

    let evidence = cost_sweep(game, &cfg)?;
    let eps2 = epsilon * epsilon;
    let first_bad = evidence.iter().position(|r| r.squared_distance >= eps2);
    let c_epsilon = match first_bad {
        None => Some(cfg.c_max.clone()),
        Some(0) => None,
        Some(k) => Some(evidence[k].c.clone()),
    };
    Ok(TheoremReport { component, epsilon: epsilon.clone(), c_epsilon, index, warning, evidence })
}
