//! Normal forms: the base game `Γ`, the monitored game `Γ_c`, strategic
//! reduction, the embedding of `Γ` into the reduced monitored game at zero
//! cost, and pure-strategy dominance.
//!
//! Convention: the receiver (player 2) chooses rows and the sender (player 1)
//! chooses columns. Cells hold `(u1, u2)`.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{
    pure_payoff, pure_payoff_monitored, MixedProfile, Payoff, ReceiverMix, ReceiverStrategy, ReceiverStrategyC,
    SenderStrategy, SignalingGame,
};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum RowStrategy {
    Plain(ReceiverStrategy),
    Monitored(ReceiverStrategyC),
}

impl RowStrategy {
    pub fn monitors(&self) -> bool {
        matches!(self, RowStrategy::Monitored(s) if s.monitor)
    }
}

/// Strategy identities behind the rows and columns of a normal form built
/// from a signaling game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Origin {
    pub rows: Vec<RowStrategy>,
    pub cols: Vec<SenderStrategy>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostMeta {
    pub cost: Rational,
    /// Monitor bit per row.
    pub monitors: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BimatrixGame {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    /// `payoffs[row][col]`; `sender` is the column player's payoff.
    pub payoffs: Vec<Vec<Payoff>>,
    pub cost: Option<CostMeta>,
    pub origin: Option<Origin>,
}

impl BimatrixGame {
    /// A plain bimatrix game; `col_payoff[i][j]` belongs to the column player.
    pub fn from_matrices(
        row_labels: Vec<String>,
        col_labels: Vec<String>,
        col_payoff: &[Vec<Rational>],
        row_payoff: &[Vec<Rational>],
    ) -> Self {
        let payoffs = col_payoff
            .iter()
            .zip(row_payoff)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| Payoff::new(x.clone(), y.clone())).collect())
            .collect();
        BimatrixGame { row_labels, col_labels, payoffs, cost: None, origin: None }
    }

    /// Integer payoffs with labels `r0.. / c0..`.
    pub fn from_ints(col_payoff: &[Vec<i64>], row_payoff: &[Vec<i64>]) -> Self {
        let conv = |m: &[Vec<i64>]| -> Vec<Vec<Rational>> {
            m.iter().map(|r| r.iter().map(|&v| rational::int(v)).collect()).collect()
        };
        let rows = col_payoff.len();
        let cols = col_payoff.first().map_or(0, Vec::len);
        BimatrixGame::from_matrices(
            (0..rows).map(|i| format!("r{i}")).collect(),
            (0..cols).map(|j| format!("c{j}")).collect(),
            &conv(col_payoff),
            &conv(row_payoff),
        )
    }

    pub fn rows(&self) -> usize {
        self.payoffs.len()
    }

    pub fn cols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn u1(&self, row: usize, col: usize) -> &Rational {
        &self.payoffs[row][col].sender
    }

    pub fn u2(&self, row: usize, col: usize) -> &Rational {
        &self.payoffs[row][col].receiver
    }

    /// Sub-game on the given rows and columns, in the given order.
    pub fn restrict(&self, rows: &[usize], cols: &[usize]) -> BimatrixGame {
        BimatrixGame {
            row_labels: rows.iter().map(|&i| self.row_labels[i].clone()).collect(),
            col_labels: cols.iter().map(|&j| self.col_labels[j].clone()).collect(),
            payoffs: rows.iter().map(|&i| cols.iter().map(|&j| self.payoffs[i][j].clone()).collect()).collect(),
            cost: self
                .cost
                .as_ref()
                .map(|c| CostMeta { cost: c.cost.clone(), monitors: rows.iter().map(|&i| c.monitors[i]).collect() }),
            origin: self.origin.as_ref().map(|o| Origin {
                rows: rows.iter().map(|&i| o.rows[i].clone()).collect(),
                cols: cols.iter().map(|&j| o.cols[j].clone()).collect(),
            }),
        }
    }

    /// Expected payoff of every row against a column mix, for the row player.
    pub fn row_values(&self, col_mix: &[Rational]) -> Vec<Rational> {
        (0..self.rows()).map(|i| (0..self.cols()).map(|j| self.u2(i, j) * &col_mix[j]).sum()).collect()
    }

    /// Expected payoff of every column against a row mix, for the column player.
    pub fn col_values(&self, row_mix: &[Rational]) -> Vec<Rational> {
        (0..self.cols()).map(|j| (0..self.rows()).map(|i| self.u1(i, j) * &row_mix[i]).sum()).collect()
    }

    /// The mixed profile of the underlying signaling game. The flag is set when
    /// rows are monitored-game strategies.
    pub fn profile(&self, row_mix: &[Rational], col_mix: &[Rational]) -> Result<(MixedProfile, bool)> {
        let Some(origin) = &self.origin else {
            return Err(Error::StrategyMismatch("normal form has no strategy origin".into()));
        };
        let nonzero = |mix: &[Rational]| -> Vec<usize> {
            mix.iter().enumerate().filter(|(_, w)| !w.is_zero()).map(|(i, _)| i).collect()
        };
        let sender = nonzero(col_mix).into_iter().map(|j| (origin.cols[j].clone(), col_mix[j].clone())).collect();
        let rows = nonzero(row_mix);
        let monitored = matches!(origin.rows.first(), Some(RowStrategy::Monitored(_)));
        let receiver = if monitored {
            ReceiverMix::Monitored(
                rows.into_iter()
                    .map(|i| match &origin.rows[i] {
                        RowStrategy::Monitored(s) => Ok((s.clone(), row_mix[i].clone())),
                        RowStrategy::Plain(_) => Err(Error::StrategyMismatch("mixed row kinds".into())),
                    })
                    .collect::<Result<_>>()?,
            )
        } else {
            ReceiverMix::Plain(
                rows.into_iter()
                    .map(|i| match &origin.rows[i] {
                        RowStrategy::Plain(s) => Ok((s.clone(), row_mix[i].clone())),
                        RowStrategy::Monitored(_) => Err(Error::StrategyMismatch("mixed row kinds".into())),
                    })
                    .collect::<Result<_>>()?,
            )
        };
        Ok((MixedProfile { sender, receiver }, monitored))
    }

    /// `(u1, u2)` under a mixed profile.
    pub fn expected(&self, row_mix: &[Rational], col_mix: &[Rational]) -> Payoff {
        let mut u1 = rational::zero();
        let mut u2 = rational::zero();
        for (i, x) in row_mix.iter().enumerate() {
            for (j, y) in col_mix.iter().enumerate() {
                let w = x * y;
                u1 += &w * self.u1(i, j);
                u2 += &w * self.u2(i, j);
            }
        }
        Payoff::new(u1, u2)
    }
}

/// `(S1, S2)` in lexicographic order.
pub fn strategy_spaces(game: &SignalingGame) -> (Vec<SenderStrategy>, Vec<ReceiverStrategy>) {
    (game.sender_strategies(), game.receiver_strategies())
}

/// `S2^c = {0,1} × A^M × A`.
pub fn strategy_spaces_c(game: &SignalingGame) -> Vec<ReceiverStrategyC> {
    game.receiver_strategies_monitored()
}

pub fn build_normal_form(game: &SignalingGame) -> BimatrixGame {
    let (senders, receivers) = strategy_spaces(game);
    let payoffs = receivers.par_iter().map(|r| senders.iter().map(|s| pure_payoff(game, s, r)).collect()).collect();
    BimatrixGame {
        row_labels: receivers.iter().map(|r| game.receiver_label(r)).collect(),
        col_labels: senders.iter().map(|s| game.sender_label(s)).collect(),
        payoffs,
        cost: None,
        origin: Some(Origin { rows: receivers.into_iter().map(RowStrategy::Plain).collect(), cols: senders }),
    }
}

fn check_cost(c: &Rational) -> Result<()> {
    if c.is_negative() {
        return Err(Error::NegativeCost(rational::show(c)));
    }
    Ok(())
}

/// The unreduced normal form of the monitored game at cost `c`.
pub fn build_sgcm_normal_form(game: &SignalingGame, c: &Rational) -> Result<BimatrixGame> {
    check_cost(c)?;
    let senders = game.sender_strategies();
    let receivers = strategy_spaces_c(game);
    let payoffs =
        receivers.par_iter().map(|r| senders.iter().map(|s| pure_payoff_monitored(game, s, r, c)).collect()).collect();
    Ok(BimatrixGame {
        row_labels: receivers.iter().map(|r| game.receiver_label_monitored(r)).collect(),
        col_labels: senders.iter().map(|s| game.sender_label(s)).collect(),
        payoffs,
        cost: Some(CostMeta { cost: c.clone(), monitors: receivers.iter().map(|r| r.monitor).collect() }),
        origin: Some(Origin { rows: receivers.into_iter().map(RowStrategy::Monitored).collect(), cols: senders }),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartitionTag {
    /// Never monitors.
    NoMonitor,
    /// Monitors.
    Monitor,
    None,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyClass {
    /// Index of the lexicographically least member in the unreduced game.
    pub representative: usize,
    pub members: Vec<usize>,
    pub tag: PartitionTag,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub game: BimatrixGame,
    pub row_classes: Vec<StrategyClass>,
    pub col_classes: Vec<StrategyClass>,
}

fn tag_of(gamma: &BimatrixGame, row: usize) -> PartitionTag {
    match &gamma.cost {
        Some(meta) if meta.monitors[row] => PartitionTag::Monitor,
        Some(_) => PartitionTag::NoMonitor,
        None => PartitionTag::None,
    }
}

/// Groups indices whose keys are equal, keeping first-appearance order.
fn group_by_key<K: Ord>(keys: Vec<K>) -> Vec<Vec<usize>> {
    let mut groups: BTreeMap<K, usize> = BTreeMap::new();
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (i, k) in keys.into_iter().enumerate() {
        match groups.get(&k) {
            Some(&g) => out[g].push(i),
            None => {
                groups.insert(k, out.len());
                out.push(vec![i]);
            }
        }
    }
    out
}

/// Least member under the strategy order when the origin is known, else the
/// first index.
fn representative(gamma: &BimatrixGame, members: &[usize], rows: bool) -> usize {
    match &gamma.origin {
        Some(o) if rows => *members.iter().min_by(|&&a, &&b| o.rows[a].cmp(&o.rows[b])).unwrap(),
        Some(o) => *members.iter().min_by(|&&a, &&b| o.cols[a].cmp(&o.cols[b])).unwrap(),
        None => members[0],
    }
}

fn assemble(
    gamma: &BimatrixGame,
    row_groups: Vec<Vec<usize>>,
    col_groups: Vec<Vec<usize>>,
    row_label: impl Fn(&StrategyClass) -> String,
) -> Reduction {
    let mut row_classes: Vec<StrategyClass> = row_groups
        .into_iter()
        .map(|members| {
            let rep = representative(gamma, &members, true);
            StrategyClass { representative: rep, tag: tag_of(gamma, rep), members }
        })
        .collect();
    let mut col_classes: Vec<StrategyClass> = col_groups
        .into_iter()
        .map(|members| StrategyClass {
            representative: representative(gamma, &members, false),
            members,
            tag: PartitionTag::None,
        })
        .collect();
    row_classes.sort_by_key(|c| c.representative);
    col_classes.sort_by_key(|c| c.representative);

    let rows: Vec<usize> = row_classes.iter().map(|c| c.representative).collect();
    let cols: Vec<usize> = col_classes.iter().map(|c| c.representative).collect();
    let mut game = gamma.restrict(&rows, &cols);
    game.row_labels = row_classes.iter().map(&row_label).collect();
    Reduction { game, row_classes, col_classes }
}

/// Merges strategies whose payoff vectors (for both players) coincide against
/// every opposing pure strategy, on both sides.
pub fn reduce_normal_form(gamma: &BimatrixGame) -> Reduction {
    let row_keys: Vec<Vec<Payoff>> = gamma.payoffs.clone();
    let col_keys: Vec<Vec<Payoff>> =
        (0..gamma.cols()).map(|j| (0..gamma.rows()).map(|i| gamma.payoffs[i][j].clone()).collect()).collect();
    let row_keys: Vec<Vec<(Rational, Rational)>> =
        row_keys.into_iter().map(|r| r.into_iter().map(|p| (p.sender, p.receiver)).collect()).collect();
    let col_keys: Vec<Vec<(Rational, Rational)>> =
        col_keys.into_iter().map(|c| c.into_iter().map(|p| (p.sender, p.receiver)).collect()).collect();
    let labels = gamma.row_labels.clone();
    assemble(gamma, group_by_key(row_keys), group_by_key(col_keys), |c| labels[c.representative].clone())
}

/// The reduced monitored game `Γ̃_c`: receiver strategies that differ only at
/// unreached information sets are merged (monitoring strategies ignore the
/// default action, non-monitoring ones ignore the per-message actions). Unlike
/// [`reduce_normal_form`] this keeps the same six-class structure at `c = 0`,
/// where non-monitoring classes duplicate constant monitoring ones.
pub fn build_reduced_sgcm(game: &SignalingGame, c: &Rational) -> Result<Reduction> {
    let full = build_sgcm_normal_form(game, c)?;
    let strategies = strategy_spaces_c(game);
    let keys: Vec<(bool, Vec<usize>)> = strategies
        .iter()
        .map(|s| if s.monitor { (true, s.on_message.clone()) } else { (false, vec![s.default]) })
        .collect();
    let col_groups = (0..full.cols()).map(|j| vec![j]).collect();
    let compact = game.actions.iter().all(|a| a.chars().count() == 1);
    let star = if compact { "*".repeat(game.messages.len()) } else { vec!["*"; game.messages.len()].join(",") };
    Ok(assemble(&full, group_by_key(keys), col_groups, |class| {
        let s = &strategies[class.representative];
        if s.monitor {
            let acts = game.join_labels(s.on_message.iter().map(|&a| game.actions[a].as_str()), compact);
            format!("1{acts}|*")
        } else {
            format!("0{star}|{}", game.actions[s.default])
        }
    }))
}

/// How the reduced monitored game at zero cost embeds the base normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbedMap {
    /// Monitoring class row → base row with the same payoffs.
    pub monitor_bijection: Vec<(usize, usize)>,
    /// Non-monitoring class row → base constant strategy it duplicates.
    pub duplicate_pairs: Vec<(usize, usize)>,
    /// Base row for every row of the monitored game.
    pub row_image: Vec<usize>,
}

impl EmbedMap {
    /// Pushes a receiver mix on the monitored game forward to the base game.
    pub fn push_forward(&self, row_mix: &[Rational], base_rows: usize) -> Vec<Rational> {
        let mut out = vec![rational::zero(); base_rows];
        for (i, w) in row_mix.iter().enumerate() {
            out[self.row_image[i]] += w;
        }
        out
    }

    /// Lifts a base receiver mix onto the monitoring rows.
    pub fn lift(&self, base_mix: &[Rational], rows: usize) -> Vec<Rational> {
        let mut out = vec![rational::zero(); rows];
        for &(row, base) in &self.monitor_bijection {
            out[row] = base_mix[base].clone();
        }
        out
    }
}

/// Matches the rows of `gamma0` (from [`build_reduced_sgcm`] at zero cost) to
/// rows of the base normal form `gamma`, checking payoffs cell by cell.
pub fn embed_map(gamma0: &Reduction, gamma: &BimatrixGame) -> Result<EmbedMap> {
    let g0 = &gamma0.game;
    if let Some(meta) = &g0.cost {
        if meta.cost.is_positive() {
            return Err(Error::Inconsistent(format!(
                "embedding needs the zero-cost game, got cost {}",
                rational::show(&meta.cost)
            )));
        }
    }
    let (Some(o0), Some(ob)) = (&g0.origin, &gamma.origin) else {
        return Err(Error::Inconsistent("normal forms lack strategy origins".into()));
    };
    if o0.cols != ob.cols {
        return Err(Error::Inconsistent("sender strategy sets differ".into()));
    }
    let base_index: BTreeMap<&RowStrategy, usize> = ob.rows.iter().enumerate().map(|(i, s)| (s, i)).collect();

    let mut monitor_bijection = Vec::new();
    let mut duplicate_pairs = Vec::new();
    let mut row_image = Vec::with_capacity(g0.rows());
    for (row, strategy) in o0.rows.iter().enumerate() {
        let RowStrategy::Monitored(s) = strategy else {
            return Err(Error::Inconsistent(format!("row {} is not a monitored strategy", g0.row_labels[row])));
        };
        let target = if s.monitor {
            ReceiverStrategy(s.on_message.clone())
        } else {
            ReceiverStrategy(vec![s.default; s.on_message.len()])
        };
        let Some(&base) = base_index.get(&RowStrategy::Plain(target)) else {
            return Err(Error::Inconsistent(format!("no base row for {}", g0.row_labels[row])));
        };
        if g0.payoffs[row] != gamma.payoffs[base] {
            return Err(Error::Inconsistent(format!(
                "row {} does not match base row {}",
                g0.row_labels[row], gamma.row_labels[base]
            )));
        }
        if s.monitor {
            monitor_bijection.push((row, base));
        } else {
            duplicate_pairs.push((row, base));
        }
        row_image.push(base);
    }
    let mut hit: Vec<usize> = monitor_bijection.iter().map(|&(_, b)| b).collect();
    hit.sort_unstable();
    hit.dedup();
    if hit.len() != gamma.rows() || monitor_bijection.len() != gamma.rows() {
        return Err(Error::Inconsistent("monitoring rows are not in bijection with base rows".into()));
    }
    Ok(EmbedMap { monitor_bijection, duplicate_pairs, row_image })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DominanceMode {
    Strict,
    Weak,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Row,
    Col,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Elimination {
    pub side: Side,
    pub eliminated: String,
    pub dominator: String,
    pub round: usize,
}

fn dominates(a: &[&Rational], b: &[&Rational], mode: DominanceMode) -> bool {
    match mode {
        DominanceMode::Strict => a.iter().zip(b).all(|(x, y)| x > y),
        DominanceMode::Weak => a.iter().zip(b).all(|(x, y)| x >= y) && a.iter().zip(b).any(|(x, y)| x > y),
    }
}

/// Removes pure strategies dominated by another pure strategy. Each round
/// removes every strategy dominated in the current game, on both sides at once.
pub fn dominance_filter(gamma: &BimatrixGame, mode: DominanceMode, iterate: bool) -> (BimatrixGame, Vec<Elimination>) {
    let mut rows: Vec<usize> = (0..gamma.rows()).collect();
    let mut cols: Vec<usize> = (0..gamma.cols()).collect();
    let mut trace = Vec::new();
    let mut round = 0;
    loop {
        round += 1;
        let row_vec = |i: usize| cols.iter().map(|&j| gamma.u2(i, j)).collect::<Vec<_>>();
        let col_vec = |j: usize| rows.iter().map(|&i| gamma.u1(i, j)).collect::<Vec<_>>();
        let mut drop_rows = Vec::new();
        for &i in &rows {
            if let Some(&k) = rows.iter().find(|&&k| k != i && dominates(&row_vec(k), &row_vec(i), mode)) {
                drop_rows.push(i);
                trace.push(Elimination {
                    side: Side::Row,
                    eliminated: gamma.row_labels[i].clone(),
                    dominator: gamma.row_labels[k].clone(),
                    round,
                });
            }
        }
        let mut drop_cols = Vec::new();
        for &j in &cols {
            if let Some(&k) = cols.iter().find(|&&k| k != j && dominates(&col_vec(k), &col_vec(j), mode)) {
                drop_cols.push(j);
                trace.push(Elimination {
                    side: Side::Col,
                    eliminated: gamma.col_labels[j].clone(),
                    dominator: gamma.col_labels[k].clone(),
                    round,
                });
            }
        }
        if drop_rows.is_empty() && drop_cols.is_empty() {
            break;
        }
        rows.retain(|i| !drop_rows.contains(i));
        cols.retain(|j| !drop_cols.contains(j));
        if !iterate {
            break;
        }
    }
    (gamma.restrict(&rows, &cols), trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::tests::beer_quiche;
    use crate::rational::{int, ratio};

    fn cell(g: &BimatrixGame, row: &str, col: &str) -> (Rational, Rational) {
        let i = g.row_labels.iter().position(|l| l == row).unwrap();
        let j = g.col_labels.iter().position(|l| l == col).unwrap();
        (g.u1(i, j).clone(), g.u2(i, j).clone())
    }

    #[test]
    fn base_cells() {
        let g = build_normal_form(&beer_quiche());
        assert_eq!((g.rows(), g.cols()), (4, 4));
        // canonical row labels list the action after beer, then after quiche
        assert_eq!(cell(&g, "NF", "BB"), (ratio(29, 10), ratio(9, 10)));
        assert_eq!(cell(&g, "FN", "QB"), (ratio(9, 5), int(1)));
        assert_eq!(cell(&g, "FF", "BQ"), (int(1), ratio(1, 10)));
    }

    #[test]
    fn space_sizes() {
        let g = beer_quiche();
        let mut one_type = g.clone();
        one_type.types = vec!["S".into()];
        one_type.prior = vec![int(1)];
        one_type.messages.push("X".into());
        assert_eq!(one_type.sender_strategies().len(), 3);
        assert_eq!(one_type.receiver_strategies().len(), 8);
        let mut three_actions = g.clone();
        three_actions.actions.push("Z".into());
        assert_eq!(three_actions.receiver_strategies().len(), 9);
        let mut one_msg = three_actions.clone();
        one_msg.messages.truncate(1);
        assert_eq!(strategy_spaces_c(&one_msg).len(), 18);
        let mut one_action = g.clone();
        one_action.actions.truncate(1);
        assert_eq!(strategy_spaces_c(&one_action).len(), 2);
    }

    #[test]
    fn sgcm_cells() {
        let game = beer_quiche();
        let c = ratio(1, 20);
        let g = build_sgcm_normal_form(&game, &c).unwrap();
        assert_eq!(g.rows(), 16);
        // monitor, beer->N, quiche->F, default F
        assert_eq!(cell(&g, "1NF|F", "BB"), (ratio(29, 10), ratio(9, 10) - &c));
        for acts in ["FF", "FN", "NF", "NN"] {
            assert_eq!(cell(&g, &format!("0{acts}|N"), "BQ"), (int(3), ratio(9, 10)));
        }
        assert!(matches!(build_sgcm_normal_form(&game, &int(-1)), Err(Error::NegativeCost(_))));
    }

    #[test]
    fn zero_cost_cells_match_base() {
        let game = beer_quiche();
        let base = build_normal_form(&game);
        let g0 = build_sgcm_normal_form(&game, &int(0)).unwrap();
        let origin = g0.origin.as_ref().unwrap();
        for (i, s) in origin.rows.iter().enumerate() {
            let RowStrategy::Monitored(s) = s else { unreachable!() };
            let b = if s.monitor { s.on_message.clone() } else { vec![s.default; 2] };
            let bi = base
                .origin
                .as_ref()
                .unwrap()
                .rows
                .iter()
                .position(|r| *r == RowStrategy::Plain(ReceiverStrategy(b.clone())))
                .unwrap();
            assert_eq!(g0.payoffs[i], base.payoffs[bi]);
        }
    }

    #[test]
    fn cost_shifts_only_monitoring_rows() {
        let game = beer_quiche();
        let a = build_sgcm_normal_form(&game, &ratio(1, 20)).unwrap();
        let b = build_sgcm_normal_form(&game, &ratio(3, 10)).unwrap();
        let monitors = &a.cost.as_ref().unwrap().monitors;
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                assert_eq!(a.u1(i, j), b.u1(i, j));
                let shift = if monitors[i] { ratio(1, 4) } else { int(0) };
                assert_eq!(a.u2(i, j) - b.u2(i, j), shift);
            }
        }
    }

    #[test]
    fn reductions() {
        let game = beer_quiche();
        let full = build_sgcm_normal_form(&game, &ratio(1, 20)).unwrap();
        let reduced = reduce_normal_form(&full);
        assert_eq!(reduced.game.rows(), 6);
        assert_eq!(reduced.game.cols(), 4);
        let structural = build_reduced_sgcm(&game, &ratio(1, 20)).unwrap();
        assert_eq!(structural.game.payoffs, reduced.game.payoffs);
        assert_eq!(structural.game.row_labels, ["0**|F", "0**|N", "1FF|*", "1FN|*", "1NF|*", "1NN|*"]);
        assert_eq!(reduced.row_classes.iter().filter(|c| c.tag == PartitionTag::Monitor).count(), 4);

        let at_zero = build_reduced_sgcm(&game, &int(0)).unwrap();
        assert_eq!(at_zero.game.rows(), 6);
        assert_eq!(reduce_normal_form(&at_zero.game).game.rows(), 4);

        let base = build_normal_form(&game);
        assert_eq!(reduce_normal_form(&base).game.rows(), 4);
        let twice = reduce_normal_form(&reduced.game);
        assert_eq!(twice.game, reduced.game);
    }

    #[test]
    fn embedding() {
        let game = beer_quiche();
        let base = build_normal_form(&game);
        let g0 = build_reduced_sgcm(&game, &int(0)).unwrap();
        let map = embed_map(&g0, &base).unwrap();
        let label = |i: usize| g0.game.row_labels[i].as_str();
        let duplicates: Vec<(&str, &str)> =
            map.duplicate_pairs.iter().map(|&(r, b)| (label(r), base.row_labels[b].as_str())).collect();
        assert_eq!(duplicates, [("0**|F", "FF"), ("0**|N", "NN")]);
        assert!(map.monitor_bijection.iter().any(|&(r, b)| label(r) == "1NF|*" && base.row_labels[b] == "NF"));

        let positive = build_reduced_sgcm(&game, &ratio(1, 20)).unwrap();
        assert!(embed_map(&positive, &base).is_err());
    }

    #[test]
    fn embedding_single_action() {
        let mut game = beer_quiche();
        game.actions.truncate(1);
        game.payoffs.retain(|&(_, _, a), _| a == 0);
        let base = build_normal_form(&game);
        let g0 = build_reduced_sgcm(&game, &int(0)).unwrap();
        assert_eq!(g0.game.rows(), 2);
        let map = embed_map(&g0, &base).unwrap();
        assert_eq!(map.row_image, vec![0, 0]);
    }

    #[test]
    fn dominance() {
        let game = beer_quiche();
        let base = build_normal_form(&game);
        let (_, trace) = dominance_filter(&base, DominanceMode::Strict, false);
        assert_eq!(
            trace,
            vec![Elimination { side: Side::Row, eliminated: "FF".into(), dominator: "NN".into(), round: 1 }]
        );

        let reduced = build_reduced_sgcm(&game, &ratio(1, 20)).unwrap();
        let (_, trace) = dominance_filter(&reduced.game, DominanceMode::Strict, false);
        assert!(trace.iter().any(|e| e.eliminated == "0**|F" && e.dominator == "0**|N"));

        let pennies = BimatrixGame::from_ints(&[vec![0, 1], vec![1, 0]], &[vec![1, 0], vec![0, 1]]);
        let (same, trace) = dominance_filter(&pennies, DominanceMode::Weak, true);
        assert!(trace.is_empty());
        assert_eq!(same, pennies);
    }
}
