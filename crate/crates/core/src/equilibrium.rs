//! Exact enumeration of extreme Nash equilibria of bimatrix games, maximal Nash
//! subsets, and connected components of the Nash set.
//!
//! Extreme equilibria are the completely labeled vertex pairs of the two
//! best-response polytopes
//!
//! ```text
//! P = { x ≥ 0 : Σ_i x_i u1(i, j) ≤ 1  for every column j }
//! Q = { y ≥ 0 : Σ_j u2(i, j) y_j ≤ 1  for every row i }
//! ```
//!
//! after shifting payoffs to be positive. A non-zero vertex of `P` solves a
//! square subsystem that pairs `k` support rows with `k` tight columns, so the
//! vertices are found by running over support pairs and solving exactly. This
//! also covers degenerate games, where the Nash set has non-trivial faces.

use std::collections::{BTreeMap, BTreeSet};

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::Result;
use crate::game::{outcome_of_profile, Payoff, SignalingGame};
use crate::linalg::{solve, subsets};
use crate::normalform::{BimatrixGame, Side};
use crate::outcome::InducedOutcome;
use crate::rational::{self, Rational};

pub type Mix = Vec<Rational>;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MixedEquilibrium {
    pub row_mix: Mix,
    pub col_mix: Mix,
    pub payoffs: (Rational, Rational),
}

impl MixedEquilibrium {
    pub fn new(gamma: &BimatrixGame, row_mix: Mix, col_mix: Mix) -> Self {
        let Payoff { sender, receiver } = gamma.expected(&row_mix, &col_mix);
        MixedEquilibrium { row_mix, col_mix, payoffs: (sender, receiver) }
    }

    pub fn row_support(&self) -> Vec<usize> {
        support(&self.row_mix)
    }

    pub fn col_support(&self) -> Vec<usize> {
        support(&self.col_mix)
    }
}

pub fn support(mix: &[Rational]) -> Vec<usize> {
    mix.iter().enumerate().filter(|(_, w)| !w.is_zero()).map(|(i, _)| i).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deviation {
    pub side: Side,
    pub strategy: usize,
    pub gain: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquilibriumCheck {
    pub holds: bool,
    /// Every pure strategy that beats the current payoff, with its gain.
    pub deviations: Vec<Deviation>,
}

fn is_distribution(mix: &[Rational]) -> bool {
    mix.iter().all(|w| !w.is_negative()) && mix.iter().sum::<Rational>() == rational::one()
}

/// Checks both best-response conditions exactly.
pub fn is_equilibrium(gamma: &BimatrixGame, row_mix: &[Rational], col_mix: &[Rational]) -> EquilibriumCheck {
    assert!(row_mix.len() == gamma.rows() && col_mix.len() == gamma.cols(), "mix dimensions do not match the game");
    debug_assert!(is_distribution(row_mix) && is_distribution(col_mix));
    let current = gamma.expected(row_mix, col_mix);
    let mut deviations = Vec::new();
    for (i, v) in gamma.row_values(col_mix).into_iter().enumerate() {
        if v > current.receiver {
            deviations.push(Deviation { side: Side::Row, strategy: i, gain: v - &current.receiver });
        }
    }
    for (j, v) in gamma.col_values(row_mix).into_iter().enumerate() {
        if v > current.sender {
            deviations.push(Deviation { side: Side::Col, strategy: j, gain: v - &current.sender });
        }
    }
    EquilibriumCheck { holds: deviations.is_empty(), deviations }
}

/// Labels of a mixed strategy: rows are `0..m`, columns `m..m+n`.
fn row_mix_labels(gamma: &BimatrixGame, x: &[Rational]) -> BTreeSet<usize> {
    let m = gamma.rows();
    let values = gamma.col_values(x);
    let best = values.iter().max().cloned().unwrap_or_default();
    let mut labels: BTreeSet<usize> = support_complement(x).collect();
    labels.extend(values.iter().enumerate().filter(|(_, v)| **v == best).map(|(j, _)| m + j));
    labels
}

fn col_mix_labels(gamma: &BimatrixGame, y: &[Rational]) -> BTreeSet<usize> {
    let m = gamma.rows();
    let values = gamma.row_values(y);
    let best = values.iter().max().cloned().unwrap_or_default();
    let mut labels: BTreeSet<usize> = support_complement(y).map(|j| m + j).collect();
    labels.extend(values.iter().enumerate().filter(|(_, v)| **v == best).map(|(i, _)| i));
    labels
}

fn support_complement(mix: &[Rational]) -> impl Iterator<Item = usize> + '_ {
    mix.iter().enumerate().filter(|(_, w)| w.is_zero()).map(|(i, _)| i)
}

/// Shifts a payoff matrix so that every entry is at least one.
fn positive(matrix: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let min = matrix.iter().flatten().min().cloned().unwrap_or_default();
    let shift = rational::one() - min;
    matrix.into_iter().map(|r| r.into_iter().map(|v| v + &shift).collect()).collect()
}

/// Non-zero vertices of `{ z ≥ 0 : Σ_i z_i coeff[i][j] ≤ 1 ∀ j }`, with
/// `coeff` of shape `own × other` and all entries positive.
fn polytope_vertices(coeff: &[Vec<Rational>]) -> Vec<Mix> {
    let own = coeff.len();
    let other = coeff.first().map_or(0, Vec::len);
    let one = rational::one();
    let mut found: Vec<Mix> = (1..=own.min(other))
        .into_par_iter()
        .flat_map_iter(|k| {
            let tight_sets = subsets(other, k);
            subsets(own, k)
                .into_iter()
                .flat_map(move |rows| tight_sets.clone().into_iter().map(move |cols| (rows.clone(), cols)))
        })
        .filter_map(|(rows, cols)| {
            let a: Vec<Vec<Rational>> =
                cols.iter().map(|&j| rows.iter().map(|&i| coeff[i][j].clone()).collect()).collect();
            let z = solve(&a, &vec![one.clone(); rows.len()])?;
            if z.iter().any(|v| v.is_negative()) {
                return None;
            }
            let mut point = vec![rational::zero(); own];
            for (&i, v) in rows.iter().zip(z) {
                point[i] = v;
            }
            let feasible = (0..other).all(|j| {
                let s: Rational = (0..own).map(|i| &point[i] * &coeff[i][j]).sum();
                s <= one
            });
            feasible.then_some(point)
        })
        .collect();
    found.sort();
    found.dedup();
    found
}

fn normalize(point: &[Rational]) -> Mix {
    let total: Rational = point.iter().sum();
    point.iter().map(|v| v / &total).collect()
}

/// Every extreme point of the Nash set, sorted by `(row_mix, col_mix)`.
pub fn enumerate_extreme_equilibria(gamma: &BimatrixGame) -> Vec<MixedEquilibrium> {
    let (m, n) = (gamma.rows(), gamma.cols());
    if m == 0 || n == 0 {
        return Vec::new();
    }
    // P lives in row-mix space and is cut out by the column player's payoffs.
    let u1 = positive((0..m).map(|i| (0..n).map(|j| gamma.u1(i, j).clone()).collect()).collect());
    let u2t = positive((0..n).map(|j| (0..m).map(|i| gamma.u2(i, j).clone()).collect()).collect());

    let row_points: Vec<Mix> = polytope_vertices(&u1).iter().map(|p| normalize(p)).collect();
    let col_points: Vec<Mix> = polytope_vertices(&u2t).iter().map(|p| normalize(p)).collect();
    let row_labels: Vec<BTreeSet<usize>> = row_points.iter().map(|x| row_mix_labels(gamma, x)).collect();
    let col_labels: Vec<BTreeSet<usize>> = col_points.iter().map(|y| col_mix_labels(gamma, y)).collect();

    let mut out: Vec<MixedEquilibrium> = Vec::new();
    for (x, lx) in row_points.iter().zip(&row_labels) {
        for (y, ly) in col_points.iter().zip(&col_labels) {
            if lx.union(ly).count() == m + n {
                out.push(MixedEquilibrium::new(gamma, x.clone(), y.clone()));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// A maximal product `conv(rows) × conv(cols)` of equilibrium strategies.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct NashSubset {
    pub row_face: Vec<Mix>,
    pub col_face: Vec<Mix>,
}

/// Maximal bicliques of the bipartite graph whose edges are the extreme
/// equilibria. Sorted.
pub fn maximal_nash_subsets(extremes: &[MixedEquilibrium]) -> Vec<NashSubset> {
    let rows: Vec<&Mix> = extremes.iter().map(|e| &e.row_mix).collect::<BTreeSet<_>>().into_iter().collect();
    let cols: Vec<&Mix> = extremes.iter().map(|e| &e.col_mix).collect::<BTreeSet<_>>().into_iter().collect();
    let mut neighbours: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); rows.len()];
    for e in extremes {
        let r = rows.binary_search(&&e.row_mix).unwrap();
        let c = cols.binary_search(&&e.col_mix).unwrap();
        neighbours[r].insert(c);
    }

    // Closed column sets are exactly the intersections of neighbourhoods.
    let mut closed: BTreeSet<BTreeSet<usize>> = neighbours.iter().cloned().collect();
    loop {
        let current: Vec<BTreeSet<usize>> = closed.iter().cloned().collect();
        let mut grew = false;
        for (a, sa) in current.iter().enumerate() {
            for sb in &current[a + 1..] {
                let meet: BTreeSet<usize> = sa.intersection(sb).copied().collect();
                if !meet.is_empty() && closed.insert(meet) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }

    let mut out: Vec<NashSubset> = closed
        .into_iter()
        .filter(|ys| !ys.is_empty())
        .map(|ys| {
            let xs: Vec<usize> = (0..rows.len()).filter(|&r| ys.is_subset(&neighbours[r])).collect();
            NashSubset {
                row_face: xs.iter().map(|&r| rows[r].clone()).collect(),
                col_face: ys.iter().map(|&c| cols[c].clone()).collect(),
            }
        })
        .collect();
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub subsets: Vec<NashSubset>,
    pub extremes: Vec<MixedEquilibrium>,
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut root = i;
    while parent[root] != root {
        root = parent[root];
    }
    let mut cur = i;
    while parent[cur] != root {
        let next = parent[cur];
        parent[cur] = root;
        cur = next;
    }
    root
}

/// Connected components of the intersection graph of Nash subsets. Two subsets
/// meet iff they share an extreme point on both sides, because each side of a
/// maximal Nash subset is a face of the best-response polytope.
pub fn group_components(gamma: &BimatrixGame, subsets: &[NashSubset]) -> Vec<Component> {
    let mut parent: Vec<usize> = (0..subsets.len()).collect();
    for a in 0..subsets.len() {
        for b in a + 1..subsets.len() {
            let share_rows = subsets[a].row_face.iter().any(|x| subsets[b].row_face.contains(x));
            let share_cols = subsets[a].col_face.iter().any(|y| subsets[b].col_face.contains(y));
            if share_rows && share_cols {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..subsets.len() {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(i);
    }
    let mut out: Vec<Component> = groups
        .into_values()
        .map(|members| {
            let subs: Vec<NashSubset> = members.iter().map(|&i| subsets[i].clone()).collect();
            let mut extremes: Vec<MixedEquilibrium> = subs
                .iter()
                .flat_map(|s| {
                    s.row_face.iter().flat_map(move |x| {
                        s.col_face.iter().map(move |y| MixedEquilibrium::new(gamma, x.clone(), y.clone()))
                    })
                })
                .collect();
            extremes.sort();
            extremes.dedup();
            Component { subsets: subs, extremes }
        })
        .collect();
    out.sort_by(|a, b| a.extremes[0].cmp(&b.extremes[0]));
    out
}

/// Enumerates extremes, Nash subsets and components in one go.
pub fn solve_components(gamma: &BimatrixGame) -> Vec<Component> {
    let extremes = enumerate_extreme_equilibria(gamma);
    let subsets = maximal_nash_subsets(&extremes);
    group_components(gamma, &subsets)
}

impl Component {
    /// Exact membership: `(x, y)` lies in the component iff for some Nash
    /// subset it carries every label shared by that subset's row face and
    /// every label shared by its column face.
    pub fn contains(&self, gamma: &BimatrixGame, row_mix: &[Rational], col_mix: &[Rational]) -> bool {
        if !is_distribution(row_mix) || !is_distribution(col_mix) {
            return false;
        }
        let lx = row_mix_labels(gamma, row_mix);
        let ly = col_mix_labels(gamma, col_mix);
        self.subsets.iter().any(|s| {
            let common_x = common_labels(s.row_face.iter().map(|x| row_mix_labels(gamma, x)));
            let common_y = common_labels(s.col_face.iter().map(|y| col_mix_labels(gamma, y)));
            common_x.is_subset(&lx) && common_y.is_subset(&ly)
        })
    }

    /// Max-norm distance from `(x, y)` to the component.
    pub fn distance(&self, row_mix: &[f64], col_mix: &[f64]) -> f64 {
        self.subsets
            .iter()
            .map(|s| hull_distance(row_mix, &s.row_face).max(hull_distance(col_mix, &s.col_face)))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn distance_exact(&self, row_mix: &[Rational], col_mix: &[Rational]) -> f64 {
        let f = |v: &[Rational]| v.iter().map(rational::to_f64).collect::<Vec<_>>();
        self.distance(&f(row_mix), &f(col_mix))
    }

    /// Barycentre of the first Nash subset, a point in the relative interior of
    /// one of the component's faces.
    pub fn barycentre(&self) -> (Mix, Mix) {
        let s = &self.subsets[0];
        let avg = |face: &[Mix]| -> Mix {
            let k = rational::int(face.len() as i64);
            (0..face[0].len()).map(|i| face.iter().map(|p| &p[i]).sum::<Rational>() / &k).collect()
        };
        (avg(&s.row_face), avg(&s.col_face))
    }
}

fn common_labels(mut sets: impl Iterator<Item = BTreeSet<usize>>) -> BTreeSet<usize> {
    let first = sets.next().unwrap_or_default();
    sets.fold(first, |acc, s| acc.intersection(&s).copied().collect())
}

/// Max-norm distance from `p` to the convex hull of `points`.
pub fn hull_distance(p: &[f64], points: &[Mix]) -> f64 {
    let pts: Vec<Vec<f64>> = points.iter().map(|v| v.iter().map(rational::to_f64).collect()).collect();
    let direct = pts
        .iter()
        .map(|v| v.iter().zip(p).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
        .fold(f64::INFINITY, f64::min);
    if pts.len() == 1 {
        return direct;
    }
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let t = lp.add_var(1.0, (0.0, f64::INFINITY));
    let lambdas: Vec<_> = pts.iter().map(|_| lp.add_var(0.0, (0.0, 1.0))).collect();
    let simplex: Vec<_> = lambdas.iter().map(|&l| (l, 1.0)).collect();
    lp.add_constraint(&simplex[..], ComparisonOp::Eq, 1.0);
    for (i, &target) in p.iter().enumerate() {
        let mut upper: Vec<_> = lambdas.iter().zip(&pts).map(|(&l, v)| (l, v[i])).collect();
        let mut lower = upper.clone();
        upper.push((t, -1.0));
        lower.push((t, 1.0));
        lp.add_constraint(&upper[..], ComparisonOp::Le, target);
        lp.add_constraint(&lower[..], ComparisonOp::Ge, target);
    }
    match lp.solve() {
        Ok(solution) => solution.objective().min(direct),
        Err(_) => direct,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OutcomeReport {
    Constant {
        outcome: InducedOutcome,
        /// Present when both players' payoffs are also constant.
        payoffs: Option<(Rational, Rational)>,
    },
    NonConstant {
        witnesses: Box<[(MixedEquilibrium, InducedOutcome); 2]>,
    },
}

/// Outcome induced by a mixed profile of a normal form built from `game`.
pub fn induced_outcome(
    game: &SignalingGame,
    gamma: &BimatrixGame,
    row_mix: &[Rational],
    col_mix: &[Rational],
) -> Result<InducedOutcome> {
    let (profile, monitored) = gamma.profile(row_mix, col_mix)?;
    outcome_of_profile(game, &profile, monitored)
}

/// The common outcome of a component, or two extremes whose outcomes differ.
/// With `project`, monitored outcomes are compared after integrating out the
/// monitor bit. The outcome is bilinear on each Nash subset, so it is constant
/// on the component iff it is constant on the extremes.
pub fn component_outcome(
    game: &SignalingGame,
    gamma: &BimatrixGame,
    component: &Component,
    project: bool,
) -> Result<OutcomeReport> {
    let mut first: Option<(MixedEquilibrium, InducedOutcome)> = None;
    let mut payoffs_constant = true;
    for e in &component.extremes {
        let mut mu = induced_outcome(game, gamma, &e.row_mix, &e.col_mix)?;
        if project {
            mu = InducedOutcome::Plain(mu.projected());
        }
        match &first {
            None => first = Some((e.clone(), mu)),
            Some((e0, mu0)) => {
                if *mu0 != mu {
                    return Ok(OutcomeReport::NonConstant {
                        witnesses: Box::new([(e0.clone(), mu0.clone()), (e.clone(), mu)]),
                    });
                }
                payoffs_constant &= e0.payoffs == e.payoffs;
            }
        }
    }
    let (e0, outcome) = first.expect("component has at least one extreme");
    Ok(OutcomeReport::Constant { outcome, payoffs: payoffs_constant.then_some(e0.payoffs) })
}
