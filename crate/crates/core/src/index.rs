//! Indices of equilibria and of equilibrium components.
//!
//! A regular equilibrium with supports `I` (rows) and `J` (columns), `|I| = |J| = k`,
//! gets
//!
//! ```text
//! (−1)^(k+1) · sign det [A_IJ  −1; 1ᵀ 0] · sign det [B_IJᵀ  −1; 1ᵀ 0]
//! ```
//!
//! where `A` is the row player's payoff matrix and `B` the column player's. The
//! bordered determinants are unchanged by adding a constant to a player's
//! payoffs, and the sign convention gives pure strict equilibria `+1` so that
//! the indices of a nondegenerate game sum to `+1`.
//!
//! A component's index is the sum of indices of the equilibria of a slightly
//! perturbed game that land near it.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::equilibrium::{enumerate_extreme_equilibria, solve_components, Component, MixedEquilibrium};
use crate::error::{Error, Result};
use crate::game::Payoff;
use crate::linalg::determinant;
use crate::normalform::{BimatrixGame, EmbedMap, Reduction};
use crate::rational::{self, Rational};

const PERTURBATION_DENOMINATOR: i64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexMethod {
    Determinant,
    Perturbation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexResult {
    pub value: i64,
    pub method: IndexMethod,
    pub replications: usize,
    /// Fraction of replications that produced `value`.
    pub agreement: Rational,
    /// Set when replications disagree; `value` is then the most common sum.
    pub indeterminate: bool,
    pub seed: Option<u64>,
}

impl IndexResult {
    fn determinant(value: i64) -> Self {
        IndexResult {
            value,
            method: IndexMethod::Determinant,
            replications: 1,
            agreement: rational::one(),
            indeterminate: false,
            seed: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerturbationConfig {
    /// Largest absolute payoff change.
    pub eta: Rational,
    /// Max-norm radius, on mixes, of the neighbourhood around a component.
    pub delta: Rational,
    pub replications: usize,
    pub seed: u64,
}

impl Default for PerturbationConfig {
    fn default() -> Self {
        PerturbationConfig {
            eta: rational::ratio(1, 1000),
            delta: rational::ratio(1, 20),
            replications: 20,
            seed: 20_250_917,
        }
    }
}

impl PerturbationConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.eta.is_positive() {
            return Err(Error::Config("perturbation magnitude must be positive".into()));
        }
        if !self.delta.is_positive() {
            return Err(Error::Config("neighbourhood radius must be positive".into()));
        }
        if self.replications == 0 {
            return Err(Error::Config("at least one replication is required".into()));
        }
        Ok(())
    }
}

/// Whether `eq` is regular: equal support sizes, no pure best reply outside the
/// supports, and both bordered indifference systems nonsingular.
fn bordered_signs(gamma: &BimatrixGame, eq: &MixedEquilibrium) -> std::result::Result<(usize, i32, i32), String> {
    let rows = eq.row_support();
    let cols = eq.col_support();
    if rows.len() != cols.len() {
        return Err(format!("support sizes differ ({} rows, {} columns)", rows.len(), cols.len()));
    }
    let row_values = gamma.row_values(&eq.col_mix);
    let col_values = gamma.col_values(&eq.row_mix);
    let row_best = row_values.iter().max().unwrap();
    let col_best = col_values.iter().max().unwrap();
    let row_ties = row_values.iter().filter(|v| *v == row_best).count();
    let col_ties = col_values.iter().filter(|v| *v == col_best).count();
    if row_ties != rows.len() || col_ties != cols.len() {
        return Err("a pure strategy outside the support is also a best reply".into());
    }

    let k = rows.len();
    let bordered = |entry: &dyn Fn(usize, usize) -> Rational| -> Rational {
        let mut m = vec![vec![rational::zero(); k + 1]; k + 1];
        for a in 0..k {
            for b in 0..k {
                m[a][b] = entry(a, b);
            }
            m[a][k] = rational::int(-1);
            m[k][a] = rational::one();
        }
        determinant(&m)
    };
    let row_det = bordered(&|a, b| gamma.u2(rows[a], cols[b]).clone());
    let col_det = bordered(&|a, b| gamma.u1(rows[b], cols[a]).clone());
    if row_det.is_zero() || col_det.is_zero() {
        return Err("indifference system is singular".into());
    }
    let sign = |d: &Rational| if d.is_positive() { 1 } else { -1 };
    Ok((k, sign(&row_det), sign(&col_det)))
}

pub fn is_regular(gamma: &BimatrixGame, eq: &MixedEquilibrium) -> bool {
    bordered_signs(gamma, eq).is_ok()
}

/// Index of a regular equilibrium from the signs of its bordered determinants.
pub fn equilibrium_index(gamma: &BimatrixGame, eq: &MixedEquilibrium) -> Result<IndexResult> {
    let (k, a, b) = bordered_signs(gamma, eq).map_err(Error::Degenerate)?;
    let parity = if k % 2 == 1 { 1 } else { -1 };
    Ok(IndexResult::determinant(i64::from(parity * a * b)))
}

/// Adds independent draws from `{−η, …, η}` on a grid of `1/10⁶` to every
/// payoff of both players.
pub fn perturb(gamma: &BimatrixGame, eta: &Rational, rng: &mut impl Rng) -> BimatrixGame {
    let scale = Rational::from_integer(BigInt::from(PERTURBATION_DENOMINATOR));
    let bound = (eta * scale).floor().to_integer().to_i64().unwrap_or(i64::MAX).max(1);
    let mut draw = || rational::ratio(rng.gen_range(-bound..=bound), PERTURBATION_DENOMINATOR);
    let mut out = gamma.clone();
    for row in &mut out.payoffs {
        for cell in row.iter_mut() {
            *cell = Payoff::new(&cell.sender + draw(), &cell.receiver + draw());
        }
    }
    out
}

/// Outcome of one perturbation draw.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Replication {
    sums: Vec<i64>,
    /// Equilibria of the perturbed game not within `δ` of any component.
    stray: usize,
}

fn replicate(
    gamma: &BimatrixGame,
    components: &[Component],
    cfg: &PerturbationConfig,
    rep: usize,
) -> Option<Replication> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(rep as u64);
    let delta = rational::to_f64(&cfg.delta);
    // a degenerate draw is vanishingly rare; redraw from the same stream
    for _ in 0..8 {
        let perturbed = perturb(gamma, &cfg.eta, &mut rng);
        let equilibria = enumerate_extreme_equilibria(&perturbed);
        let indices: Option<Vec<i64>> =
            equilibria.iter().map(|e| equilibrium_index(&perturbed, e).ok().map(|r| r.value)).collect();
        let Some(indices) = indices else { continue };
        let mut sums = vec![0; components.len()];
        let mut stray = 0;
        for (e, idx) in equilibria.iter().zip(indices) {
            let nearest = components
                .iter()
                .enumerate()
                .map(|(c, comp)| (comp.distance_exact(&e.row_mix, &e.col_mix), c))
                .min_by(|a, b| a.0.total_cmp(&b.0));
            match nearest {
                Some((d, c)) if d <= delta => sums[c] += idx,
                _ => stray += 1,
            }
        }
        return Some(Replication { sums, stray });
    }
    None
}

/// Perturbation indices of every component of `gamma`, from one shared set of
/// draws.
pub fn perturbation_indices(
    gamma: &BimatrixGame,
    components: &[Component],
    cfg: &PerturbationConfig,
) -> Result<Vec<IndexResult>> {
    cfg.validate()?;
    let reps: Vec<Option<Replication>> =
        (0..cfg.replications).into_par_iter().map(|r| replicate(gamma, components, cfg, r)).collect();
    let total = rational::int(cfg.replications as i64);
    Ok((0..components.len())
        .map(|c| {
            let mut tally: BTreeMap<i64, usize> = BTreeMap::new();
            let mut failed = 0;
            for rep in &reps {
                match rep {
                    Some(r) if r.stray == 0 => *tally.entry(r.sums[c]).or_default() += 1,
                    _ => failed += 1,
                }
            }
            let (value, count) = tally
                .iter()
                .max_by_key(|(v, n)| (**n, std::cmp::Reverse(v.abs())))
                .map(|(v, n)| (*v, *n))
                .unwrap_or((0, 0));
            IndexResult {
                value,
                method: crate::index::IndexMethod::Perturbation,
                replications: cfg.replications,
                agreement: rational::int(count as i64) / &total,
                indeterminate: count != cfg.replications || failed > 0,
                seed: Some(cfg.seed),
            }
        })
        .collect())
}

/// Index of one component via perturbation. The component must come from
/// `solve_components(gamma)`.
pub fn component_index(gamma: &BimatrixGame, component: &Component, cfg: &PerturbationConfig) -> Result<IndexResult> {
    let components = solve_components(gamma);
    let Some(pos) = components.iter().position(|c| c == component) else {
        return Err(Error::UnknownComponent("component is not a component of this game".into()));
    };
    Ok(perturbation_indices(gamma, &components, cfg)?.swap_remove(pos))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSumReport {
    pub indices: Vec<IndexResult>,
    pub sum: i64,
    pub holds: bool,
}

/// Component indices and their total. Components that are a single regular
/// equilibrium use the determinant formula; all others use perturbation.
pub fn index_sum_check(gamma: &BimatrixGame, cfg: &PerturbationConfig) -> Result<IndexSumReport> {
    let components = solve_components(gamma);
    index_sum_for(gamma, &components, cfg)
}

pub fn index_sum_for(
    gamma: &BimatrixGame,
    components: &[Component],
    cfg: &PerturbationConfig,
) -> Result<IndexSumReport> {
    let direct: Vec<Option<IndexResult>> = components
        .iter()
        .map(|c| match c.extremes.as_slice() {
            [single] => equilibrium_index(gamma, single).ok(),
            _ => None,
        })
        .collect();
    let indices: Vec<IndexResult> = if direct.iter().all(Option::is_some) {
        direct.into_iter().map(Option::unwrap).collect()
    } else {
        let perturbed = perturbation_indices(gamma, components, cfg)?;
        direct.into_iter().zip(perturbed).map(|(d, p)| d.unwrap_or(p)).collect()
    };
    let sum = indices.iter().map(|r| r.value).sum();
    let holds = sum == 1 && indices.iter().all(|r| !r.indeterminate);
    Ok(IndexSumReport { indices, sum, holds })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContainmentEntry {
    /// Position of the component in the zero-cost monitored game.
    pub component: usize,
    pub index: IndexResult,
    /// Base component receiving the image, when one exists.
    pub base_component: Option<usize>,
    pub base_index: Option<i64>,
    /// Every extreme, with duplicate rows merged, is in the base component.
    pub image_inside: bool,
    /// Every extreme of the base component, lifted onto monitoring rows, is in
    /// this component.
    pub lift_inside: bool,
    /// `false` for zero-index components, which carry no obligation.
    pub required: bool,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContainmentReport {
    pub entries: Vec<ContainmentEntry>,
    pub holds: bool,
}

/// For every non-zero-index component of the zero-cost reduced monitored game,
/// checks that it contains a non-zero-index component of the base game under
/// the embedding.
pub fn duplicate_containment_check(
    gamma0: &Reduction,
    base: &BimatrixGame,
    embed: &EmbedMap,
    cfg: &PerturbationConfig,
) -> Result<ContainmentReport> {
    let g0 = &gamma0.game;
    let comps0 = solve_components(g0);
    let idx0 = perturbation_indices(g0, &comps0, cfg)?;
    let comps = solve_components(base);
    let idx = index_sum_for(base, &comps, cfg)?.indices;

    let mut entries = Vec::new();
    for (c, (comp, index)) in comps0.iter().zip(idx0).enumerate() {
        let required = index.value != 0 || index.indeterminate;
        let images: Vec<(Vec<Rational>, Vec<Rational>)> =
            comp.extremes.iter().map(|e| (embed.push_forward(&e.row_mix, base.rows()), e.col_mix.clone())).collect();
        let base_component = comps.iter().position(|b| images.iter().all(|(x, y)| b.contains(base, x, y)));
        let image_inside = base_component.is_some();
        let lift_inside = base_component.is_some_and(|b| {
            comps[b].extremes.iter().all(|e| comp.contains(g0, &embed.lift(&e.row_mix, g0.rows()), &e.col_mix))
        });
        let base_index = base_component.map(|b| idx[b].value);
        let holds =
            !required || (image_inside && lift_inside && base_index.is_some_and(|v| v != 0) && !index.indeterminate);
        entries.push(ContainmentEntry {
            component: c,
            index,
            base_component,
            base_index,
            image_inside,
            lift_inside,
            required,
            holds,
        });
    }
    let holds = entries.iter().all(|e| e.holds);
    Ok(ContainmentReport { entries, holds })
}
