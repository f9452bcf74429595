//! Shared fixtures and a brute-force support-enumeration oracle that does not
//! go through the crate's solver.

#![allow(dead_code, clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sgcm::{parse_game_file, BimatrixGame, Rational, SignalingGame};

pub const FIXTURE: &str = include_str!("../../fixtures/beerquiche.sg");

pub fn fixture_path() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/beerquiche.sg")
}

pub fn beer_quiche() -> SignalingGame {
    parse_game_file(FIXTURE).expect("fixture parses")
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    q(n, 1)
}

pub enum Solution {
    Unique(Vec<Rational>),
    Many,
    None,
}

/// Row reduction of `[a | b]` that distinguishes inconsistent and
/// underdetermined systems.
pub fn solve_exact(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Solution {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        b.swap(r, p);
        let inv = Rational::one() / &a[r][c];
        for k in 0..cols {
            a[r][k] = &a[r][k] * &inv;
        }
        b[r] = &b[r] * &inv;
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for k in 0..cols {
                    let t = &f * &a[r][k];
                    a[i][k] -= t;
                }
                let t = &f * &b[r];
                b[i] -= t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    if (r..rows).any(|i| !b[i].is_zero()) {
        return Solution::None;
    }
    if r < cols {
        return Solution::Many;
    }
    let mut x = vec![Rational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = b[i].clone();
    }
    Solution::Unique(x)
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..(1 << n))
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect())
        .collect()
}

/// `own[i][j]` is the payoff of the player choosing `i` against `j`. Solves for
/// the opponent's mix on `opp` that makes every strategy in `mine` indifferent.
/// Returns the full-length mix and the common value.
fn indifference(own: &[Vec<i64>], mine: &[usize], opp: &[usize], opp_n: usize) -> Option<(Vec<Rational>, Rational)> {
    let k = opp.len();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for &i in mine {
        let mut row: Vec<Rational> = opp.iter().map(|&j| int(own[i][j])).collect();
        row.push(int(-1));
        a.push(row);
        b.push(Rational::zero());
    }
    let mut ones = vec![Rational::one(); k];
    ones.push(Rational::zero());
    a.push(ones);
    b.push(Rational::one());
    let Solution::Unique(sol) = solve_exact(a, b) else { return None };
    let mut mix = vec![Rational::zero(); opp_n];
    for (t, &j) in opp.iter().enumerate() {
        if !sol[t].is_positive() {
            return None;
        }
        mix[j] = sol[t].clone();
    }
    Some((mix, sol[k].clone()))
}

fn value(own: &[Vec<i64>], i: usize, mix: &[Rational]) -> Rational {
    mix.iter().enumerate().map(|(j, w)| w * int(own[i][j])).sum()
}

fn transpose(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    (0..m[0].len()).map(|j| m.iter().map(|r| r[j]).collect()).collect()
}

/// Every equilibrium of a nondegenerate game, by scanning equal-size support
/// pairs. `row[i][j]` is the row player's payoff, `col[i][j]` the column
/// player's.
pub fn support_enumeration(row: &[Vec<i64>], col: &[Vec<i64>]) -> Vec<(Vec<Rational>, Vec<Rational>)> {
    let (m, n) = (row.len(), row[0].len());
    let col_t = transpose(col);
    let mut out = Vec::new();
    for k in 1..=m.min(n) {
        for rows in subsets(m, k) {
            for cols in subsets(n, k) {
                let Some((y, v)) = indifference(row, &rows, &cols, n) else { continue };
                let Some((x, u)) = indifference(&col_t, &cols, &rows, m) else { continue };
                let row_ok = (0..m).all(|i| value(row, i, &y) <= v);
                let col_ok = (0..n).all(|j| value(&col_t, j, &x) <= u);
                if row_ok && col_ok {
                    out.push((x, y));
                }
            }
        }
    }
    out.sort();
    out
}

/// True when some mixed strategy of either player with support size `k` has
/// more than `k` pure best replies, or when that question has a continuum of
/// answers.
pub fn is_degenerate(row: &[Vec<i64>], col: &[Vec<i64>]) -> bool {
    let col_t = transpose(col);
    // (payoffs of the replying player indexed [reply][mixer's strategy])
    let cases = [(&col_t, row.len()), (&row.to_vec(), col[0].len())];
    for (replier, mixer_n) in cases {
        let reply_n = replier.len();
        for k in 1..=mixer_n {
            if k + 1 > reply_n {
                break;
            }
            for support in subsets(mixer_n, k) {
                for replies in subsets(reply_n, k + 1) {
                    let mut a = Vec::new();
                    let mut b = Vec::new();
                    for &j in &replies {
                        let mut r: Vec<Rational> = support.iter().map(|&i| int(replier[j][i])).collect();
                        r.push(int(-1));
                        a.push(r);
                        b.push(Rational::zero());
                    }
                    let mut ones = vec![Rational::one(); k];
                    ones.push(Rational::zero());
                    a.push(ones);
                    b.push(Rational::one());
                    match solve_exact(a, b) {
                        Solution::None => {}
                        Solution::Many => return true,
                        Solution::Unique(sol) => {
                            if sol[..k].iter().all(|w| w.is_positive()) {
                                let mut mix = vec![Rational::zero(); mixer_n];
                                for (t, &i) in support.iter().enumerate() {
                                    mix[i] = sol[t].clone();
                                }
                                let best = (0..reply_n).all(|j| value(replier, j, &mix) <= sol[k]);
                                if best {
                                    return true;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    false
}

pub struct RandomGame {
    pub row: Vec<Vec<i64>>,
    pub col: Vec<Vec<i64>>,
}

impl RandomGame {
    pub fn bimatrix(&self) -> BimatrixGame {
        BimatrixGame::from_ints(&self.col, &self.row)
    }
}

/// `count` nondegenerate games with sizes between 2×2 and 4×4 and integer
/// payoffs in [-9, 9].
pub fn random_nondegenerate_games(count: usize, seed: u64) -> (Vec<RandomGame>, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut games = Vec::new();
    let mut rejected = 0;
    while games.len() < count {
        let m = rng.gen_range(2..=4);
        let n = rng.gen_range(2..=4);
        let mut draw =
            || -> Vec<Vec<i64>> { (0..m).map(|_| (0..n).map(|_| rng.gen_range(-9..=9)).collect()).collect() };
        let row = draw();
        let col = draw();
        if is_degenerate(&row, &col) {
            rejected += 1;
            continue;
        }
        games.push(RandomGame { row, col });
    }
    (games, rejected)
}
