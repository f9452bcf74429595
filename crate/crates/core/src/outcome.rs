//! Plays, outcomes, the monitor-bit projection and outcome distances.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::game::SignalingGame;
use crate::rational::{self, Rational};

/// `(t, m, a)` as label indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Play {
    pub ty: usize,
    pub message: usize,
    pub action: usize,
}

/// `(t, m, s21, a)` as label indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlayC {
    pub ty: usize,
    pub message: usize,
    pub monitor: bool,
    pub action: usize,
}

/// Dense distribution over an ordered play set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome<P = Play> {
    pub plays: Vec<P>,
    pub mass: Vec<Rational>,
}

pub type OutcomeC = Outcome<PlayC>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InducedOutcome {
    Plain(Outcome),
    Monitored(OutcomeC),
}

impl InducedOutcome {
    /// The base-game outcome, projecting out the monitor bit if present.
    pub fn projected(&self) -> Outcome {
        match self {
            InducedOutcome::Plain(o) => o.clone(),
            InducedOutcome::Monitored(o) => project_outcome(o),
        }
    }
}

impl<P: Copy + Ord> Outcome<P> {
    pub fn mass_of(&self, play: &P) -> Rational {
        match self.plays.binary_search(play) {
            Ok(i) => self.mass[i].clone(),
            Err(_) => rational::zero(),
        }
    }

    pub fn total(&self) -> Rational {
        self.mass.iter().sum()
    }

    pub fn support(&self) -> Vec<P> {
        self.plays.iter().zip(&self.mass).filter(|(_, m)| !m.is_zero()).map(|(p, _)| *p).collect()
    }

    /// Convex combination `λ·self + (1−λ)·other` over the same play set.
    pub fn mix(&self, other: &Self, lambda: &Rational) -> Result<Self> {
        if self.plays != other.plays {
            return Err(Error::PlaySetMismatch);
        }
        let rest = rational::one() - lambda;
        let mass = self.mass.iter().zip(&other.mass).map(|(a, b)| lambda * a + &rest * b).collect();
        Ok(Outcome { plays: self.plays.clone(), mass })
    }
}

/// `W = T × M × A` in lexicographic order of declared labels.
pub fn enumerate_plays(game: &SignalingGame) -> Vec<Play> {
    let mut out = Vec::new();
    for ty in 0..game.types.len() {
        for message in 0..game.messages.len() {
            for action in 0..game.actions.len() {
                out.push(Play { ty, message, action });
            }
        }
    }
    out
}

/// `W_c = T × M × {0,1} × A` in lexicographic order.
pub fn enumerate_plays_monitored(game: &SignalingGame) -> Vec<PlayC> {
    let mut out = Vec::new();
    for ty in 0..game.types.len() {
        for message in 0..game.messages.len() {
            for monitor in [false, true] {
                for action in 0..game.actions.len() {
                    out.push(PlayC { ty, message, monitor, action });
                }
            }
        }
    }
    out
}

/// Integrates out the monitoring decision.
pub fn project_outcome(mu: &OutcomeC) -> Outcome {
    let triples: BTreeSet<Play> =
        mu.plays.iter().map(|w| Play { ty: w.ty, message: w.message, action: w.action }).collect();
    let plays: Vec<Play> = triples.into_iter().collect();
    let mut mass = vec![rational::zero(); plays.len()];
    for (w, m) in mu.plays.iter().zip(&mu.mass) {
        let key = Play { ty: w.ty, message: w.message, action: w.action };
        let i = plays.binary_search(&key).expect("projected play present");
        mass[i] += m;
    }
    Outcome { plays, mass }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distance {
    pub squared: Rational,
    /// Decimal rendering of the square root, for display only.
    pub approx: String,
}

impl Distance {
    pub fn value(&self) -> f64 {
        rational::to_f64(&self.squared).sqrt()
    }
}

/// Euclidean distance between two outcomes over the same play set, kept exact
/// as a squared rational.
pub fn outcome_distance<P: PartialEq>(a: &Outcome<P>, b: &Outcome<P>) -> Result<Distance> {
    if a.plays != b.plays {
        return Err(Error::PlaySetMismatch);
    }
    let squared: Rational = a
        .mass
        .iter()
        .zip(&b.mass)
        .map(|(x, y)| {
            let d = x - y;
            &d * &d
        })
        .sum();
    let approx = rational::sqrt_decimal(&squared);
    Ok(Distance { squared, approx })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutcomeClass {
    Pooling,
    Separating,
    Hybrid,
}

impl fmt::Display for OutcomeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutcomeClass::Pooling => "pooling",
            OutcomeClass::Separating => "separating",
            OutcomeClass::Hybrid => "hybrid",
        })
    }
}

pub fn classify_outcome(game: &SignalingGame, mu: &Outcome) -> OutcomeClass {
    if game.types.len() == 1 || game.messages.len() == 1 {
        return OutcomeClass::Pooling;
    }
    let mut sent: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); game.types.len()];
    for (w, m) in mu.plays.iter().zip(&mu.mass) {
        if m.is_positive() {
            sent[w.ty].insert(w.message);
        }
    }
    let all: BTreeSet<usize> = sent.iter().flatten().copied().collect();
    if all.len() == 1 {
        return OutcomeClass::Pooling;
    }
    let disjoint = (0..sent.len()).all(|i| (i + 1..sent.len()).all(|j| sent[i].is_disjoint(&sent[j])));
    if disjoint {
        OutcomeClass::Separating
    } else {
        OutcomeClass::Hybrid
    }
}

/// `0.9·(S,B,N) + 0.1·(W,B,N)`, listing only plays with positive mass.
pub fn describe(game: &SignalingGame, mu: &Outcome) -> String {
    let terms: Vec<String> = mu
        .plays
        .iter()
        .zip(&mu.mass)
        .filter(|(_, m)| !m.is_zero())
        .map(|(w, m)| {
            format!(
                "{}·({},{},{})",
                rational::show(m),
                game.types[w.ty],
                game.messages[w.message],
                game.actions[w.action]
            )
        })
        .collect();
    terms.join(" + ")
}

pub fn describe_monitored(game: &SignalingGame, mu: &OutcomeC) -> String {
    let terms: Vec<String> = mu
        .plays
        .iter()
        .zip(&mu.mass)
        .filter(|(_, m)| !m.is_zero())
        .map(|(w, m)| {
            format!(
                "{}·({},{},{},{})",
                rational::show(m),
                game.types[w.ty],
                game.messages[w.message],
                u8::from(w.monitor),
                game.actions[w.action]
            )
        })
        .collect();
    terms.join(" + ")
}
