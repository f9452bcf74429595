//! Signaling games `(T, M, A, p, u)`, their pure strategies, and mixed profiles.
//!
//! Labels are kept in declaration order and every enumeration in the crate runs
//! over label indices in that order, so strategies and plays compare
//! lexicographically by the declared labels.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::outcome::{InducedOutcome, Outcome, PlayC};
use crate::rational::{self, Rational};

/// Payoff pair `(u1, u2)`: sender first, receiver second.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Payoff {
    pub sender: Rational,
    pub receiver: Rational,
}

impl Payoff {
    pub fn new(sender: Rational, receiver: Rational) -> Self {
        Payoff { sender, receiver }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignalingGame {
    pub types: Vec<String>,
    pub messages: Vec<String>,
    pub actions: Vec<String>,
    /// Prior over types, aligned with `types`.
    pub prior: Vec<Rational>,
    /// Keyed by `(type, message, action)` indices.
    pub payoffs: BTreeMap<(usize, usize, usize), Payoff>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        for v in &self.violations {
            writeln!(f, "violation: {v}")?;
        }
        Ok(())
    }
}

fn check_labels(kind: &str, labels: &[String], out: &mut Vec<String>) {
    if labels.is_empty() {
        out.push(format!("{kind} empty"));
    }
    let mut seen = BTreeSet::new();
    for l in labels {
        if !seen.insert(l) {
            out.push(format!("duplicate {kind} label `{l}`"));
        }
    }
}

/// Checks every structural invariant of a signaling game and lists the ones
/// that fail.
pub fn validate_game(game: &SignalingGame) -> ValidationReport {
    let mut violations = Vec::new();
    check_labels("types", &game.types, &mut violations);
    check_labels("messages", &game.messages, &mut violations);
    check_labels("actions", &game.actions, &mut violations);

    if game.prior.len() != game.types.len() {
        violations.push(format!("prior has {} entries for {} types", game.prior.len(), game.types.len()));
    }
    for (t, p) in game.prior.iter().enumerate() {
        if !p.is_positive() {
            let label = game.types.get(t).map(String::as_str).unwrap_or("?");
            violations.push(format!("prior of `{label}` is not positive ({})", rational::show(p)));
        }
    }
    let total: Rational = game.prior.iter().sum();
    if total != rational::one() {
        violations.push(format!("prior sums to {}", rational::show(&total)));
    }

    for t in 0..game.types.len() {
        for m in 0..game.messages.len() {
            for a in 0..game.actions.len() {
                if !game.payoffs.contains_key(&(t, m, a)) {
                    violations.push(format!(
                        "missing payoff for ({},{},{})",
                        game.types[t], game.messages[m], game.actions[a]
                    ));
                }
            }
        }
    }
    for &(t, m, a) in game.payoffs.keys() {
        if t >= game.types.len() || m >= game.messages.len() || a >= game.actions.len() {
            violations.push(format!("payoff key ({t},{m},{a}) out of range"));
        }
    }
    ValidationReport { violations }
}

impl SignalingGame {
    /// Builds and validates a game.
    pub fn new(
        types: Vec<String>,
        messages: Vec<String>,
        actions: Vec<String>,
        prior: Vec<Rational>,
        payoffs: BTreeMap<(usize, usize, usize), Payoff>,
    ) -> Result<Self> {
        let game = SignalingGame { types, messages, actions, prior, payoffs };
        let report = validate_game(&game);
        if report.is_ok() {
            Ok(game)
        } else {
            Err(Error::InvalidGame(report.violations))
        }
    }

    pub fn payoff(&self, t: usize, m: usize, a: usize) -> &Payoff {
        &self.payoffs[&(t, m, a)]
    }

    pub fn type_index(&self, label: &str) -> Option<usize> {
        self.types.iter().position(|l| l == label)
    }

    pub fn message_index(&self, label: &str) -> Option<usize> {
        self.messages.iter().position(|l| l == label)
    }

    pub fn action_index(&self, label: &str) -> Option<usize> {
        self.actions.iter().position(|l| l == label)
    }

    /// `S1 = M^T` in lexicographic order.
    pub fn sender_strategies(&self) -> Vec<SenderStrategy> {
        product(self.types.len(), self.messages.len()).into_iter().map(SenderStrategy).collect()
    }

    /// `S2 = A^M` in lexicographic order.
    pub fn receiver_strategies(&self) -> Vec<ReceiverStrategy> {
        product(self.messages.len(), self.actions.len()).into_iter().map(ReceiverStrategy).collect()
    }

    /// `{0,1} × A^M × A` ordered by monitor bit, then the per-message
    /// actions, then the default action.
    pub fn receiver_strategies_monitored(&self) -> Vec<ReceiverStrategyC> {
        let mut out = Vec::new();
        for monitor in [false, true] {
            for on_message in product(self.messages.len(), self.actions.len()) {
                for default in 0..self.actions.len() {
                    out.push(ReceiverStrategyC { monitor, on_message: on_message.clone(), default });
                }
            }
        }
        out
    }

    fn compact_labels(labels: &[String]) -> bool {
        labels.iter().all(|l| l.chars().count() == 1)
    }

    pub(crate) fn join_labels<'a>(&self, labels: impl Iterator<Item = &'a str>, compact: bool) -> String {
        let parts: Vec<&str> = labels.collect();
        if compact {
            parts.concat()
        } else {
            parts.join(",")
        }
    }

    /// Messages per type in type order, e.g. `BQ` for strong→beer, weak→quiche.
    pub fn sender_label(&self, s: &SenderStrategy) -> String {
        let compact = Self::compact_labels(&self.messages);
        self.join_labels(s.0.iter().map(|&m| self.messages[m].as_str()), compact)
    }

    /// Actions per message in declared message order.
    pub fn receiver_label(&self, s: &ReceiverStrategy) -> String {
        let compact = Self::compact_labels(&self.actions);
        self.join_labels(s.0.iter().map(|&a| self.actions[a].as_str()), compact)
    }

    /// `{bit}{actions per message}|{default}`, e.g. `1NF|F`.
    pub fn receiver_label_monitored(&self, s: &ReceiverStrategyC) -> String {
        let compact = Self::compact_labels(&self.actions);
        format!(
            "{}{}|{}",
            if s.monitor { 1 } else { 0 },
            self.join_labels(s.on_message.iter().map(|&a| self.actions[a].as_str()), compact),
            self.actions[s.default]
        )
    }

    fn check_sender(&self, s: &SenderStrategy) -> Result<()> {
        if s.0.len() != self.types.len() || s.0.iter().any(|&m| m >= self.messages.len()) {
            return Err(Error::StrategyMismatch(format!("sender strategy {:?}", s.0)));
        }
        Ok(())
    }

    fn check_receiver(&self, s: &[usize]) -> Result<()> {
        if s.len() != self.messages.len() || s.iter().any(|&a| a >= self.actions.len()) {
            return Err(Error::StrategyMismatch(format!("receiver strategy {s:?}")));
        }
        Ok(())
    }
}

/// All maps from `0..len` into `0..base`, in lexicographic order.
fn product(len: usize, base: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::with_capacity(len)];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..base).map(move |x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out
}

/// `s1 ∈ M^T`: the message sent by each type.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SenderStrategy(pub Vec<usize>);

/// `s2 ∈ A^M`: the action taken after each message.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ReceiverStrategy(pub Vec<usize>);

/// Receiver strategy in the monitored game. `on_message` is used only when
/// `monitor` is set, `default` only when it is not.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ReceiverStrategyC {
    pub monitor: bool,
    pub on_message: Vec<usize>,
    pub default: usize,
}

impl ReceiverStrategyC {
    /// Action taken after message `m`.
    pub fn action(&self, m: usize) -> usize {
        if self.monitor {
            self.on_message[m]
        } else {
            self.default
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReceiverMix {
    Plain(Vec<(ReceiverStrategy, Rational)>),
    Monitored(Vec<(ReceiverStrategyC, Rational)>),
}

/// A mixed profile with sparse weight lists. Weights must be non-negative and
/// sum to one on each side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedProfile {
    pub sender: Vec<(SenderStrategy, Rational)>,
    pub receiver: ReceiverMix,
}

fn check_weights<'a>(side: &str, weights: impl Iterator<Item = &'a Rational>) -> Result<()> {
    let mut total = rational::zero();
    for w in weights {
        if w.is_negative() {
            return Err(Error::StrategyMismatch(format!("{side} weight {} is negative", rational::show(w))));
        }
        total += w;
    }
    if total != rational::one() {
        return Err(Error::StrategyMismatch(format!("{side} weights sum to {}", rational::show(&total))));
    }
    Ok(())
}

/// Probability that type `t` sends message `m` under the sender mix.
fn send_prob(sender: &[(SenderStrategy, Rational)], t: usize, m: usize) -> Rational {
    sender.iter().filter(|(s, _)| s.0[t] == m).map(|(_, w)| w.clone()).sum()
}

/// The distribution over plays induced by `profile`.
///
/// `monitored` states which strategy space the receiver mix is expected to
/// live in; a mismatch is rejected.
pub fn outcome_of_profile(game: &SignalingGame, profile: &MixedProfile, monitored: bool) -> Result<InducedOutcome> {
    for (s, _) in &profile.sender {
        game.check_sender(s)?;
    }
    check_weights("sender", profile.sender.iter().map(|(_, w)| w))?;

    match (&profile.receiver, monitored) {
        (ReceiverMix::Plain(mix), false) => {
            for (s, _) in mix {
                game.check_receiver(&s.0)?;
            }
            check_weights("receiver", mix.iter().map(|(_, w)| w))?;
            let plays = crate::outcome::enumerate_plays(game);
            let mass = plays
                .iter()
                .map(|w| {
                    let respond: Rational =
                        mix.iter().filter(|(s, _)| s.0[w.message] == w.action).map(|(_, x)| x.clone()).sum();
                    if respond.is_zero() {
                        return rational::zero();
                    }
                    &game.prior[w.ty] * send_prob(&profile.sender, w.ty, w.message) * respond
                })
                .collect();
            Ok(InducedOutcome::Plain(Outcome { plays, mass }))
        }
        (ReceiverMix::Monitored(mix), true) => {
            for (s, _) in mix {
                game.check_receiver(&s.on_message)?;
                if s.default >= game.actions.len() {
                    return Err(Error::StrategyMismatch(format!("default action {}", s.default)));
                }
            }
            check_weights("receiver", mix.iter().map(|(_, w)| w))?;
            let plays = crate::outcome::enumerate_plays_monitored(game);
            let mass = plays
                .iter()
                .map(|w: &PlayC| {
                    let respond: Rational = mix
                        .iter()
                        .filter(|(s, _)| s.monitor == w.monitor && s.action(w.message) == w.action)
                        .map(|(_, x)| x.clone())
                        .sum();
                    if respond.is_zero() {
                        return rational::zero();
                    }
                    &game.prior[w.ty] * send_prob(&profile.sender, w.ty, w.message) * respond
                })
                .collect();
            Ok(InducedOutcome::Monitored(Outcome { plays, mass }))
        }
        (ReceiverMix::Plain(_), true) => Err(Error::StrategyMismatch("expected monitored receiver strategies".into())),
        (ReceiverMix::Monitored(_), false) => {
            Err(Error::StrategyMismatch("expected unmonitored receiver strategies".into()))
        }
    }
}

/// Expected payoffs of a pure profile in the base game.
pub fn pure_payoff(game: &SignalingGame, s1: &SenderStrategy, s2: &ReceiverStrategy) -> Payoff {
    let mut u1 = rational::zero();
    let mut u2 = rational::zero();
    for (t, p) in game.prior.iter().enumerate() {
        let m = s1.0[t];
        let u = game.payoff(t, m, s2.0[m]);
        u1 += p * &u.sender;
        u2 += p * &u.receiver;
    }
    Payoff::new(u1, u2)
}

/// Expected payoffs of a pure profile in the monitored game at cost `cost`.
pub fn pure_payoff_monitored(
    game: &SignalingGame,
    s1: &SenderStrategy,
    s2: &ReceiverStrategyC,
    cost: &Rational,
) -> Payoff {
    let mut u1 = rational::zero();
    let mut u2 = rational::zero();
    for (t, p) in game.prior.iter().enumerate() {
        let m = s1.0[t];
        let u = game.payoff(t, m, s2.action(m));
        u1 += p * &u.sender;
        u2 += p * &u.receiver;
    }
    if s2.monitor {
        u2 -= cost;
    }
    Payoff::new(u1, u2)
}
