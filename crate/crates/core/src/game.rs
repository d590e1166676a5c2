//! Finite strategic games with exact payoffs, action profiles and coalitions.

use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::model::CoalitionalModel;
use crate::rational::{parse_rational, Rational};

/// Largest profile space accepted by any exhaustive analysis.
pub const MAX_PROFILES: usize = 1 << 16;
/// Largest player count for coalition enumeration.
pub const MAX_PLAYERS: usize = 16;

/// A nonempty set of players, stored as a bitmask (bit `i` = player `i`, zero based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coalition(u32);

impl Coalition {
    pub fn from_mask(mask: u32) -> Result<Self> {
        if mask == 0 {
            return Err(Error::InvalidArgument("coalition must be nonempty".into()));
        }
        Ok(Coalition(mask))
    }

    /// Builds a coalition from zero-based player indices.
    pub fn from_players(players: &[usize]) -> Result<Self> {
        let mut mask = 0u32;
        for &p in players {
            if p >= MAX_PLAYERS {
                return Err(Error::InvalidArgument(format!("player index {p} out of range")));
            }
            mask |= 1 << p;
        }
        Self::from_mask(mask)
    }

    /// The coalition of all `n` players.
    pub fn grand(n: usize) -> Self {
        Coalition(((1u64 << n) - 1) as u32)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn contains(self, player: usize) -> bool {
        player < 32 && self.0 & (1 << player) != 0
    }

    pub fn size(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn members(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..32).filter(move |&i| mask & (1 << i) != 0)
    }

    pub fn is_subset_of(self, other: Coalition) -> bool {
        self.0 & !other.0 == 0
    }

    /// Checks that every member is a valid player of an `n`-player game.
    pub fn fits(self, n: usize) -> bool {
        n >= 32 || self.0 >> n == 0
    }
}

/// Printed with one-based player numbers, e.g. `{1,2}`.
impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.members().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

/// All `2^n - 1` nonempty coalitions of `n` players, in increasing mask order.
pub fn enumerate_coalitions(n: usize) -> Result<Vec<Coalition>> {
    if n == 0 {
        return Err(Error::InvalidArgument("coalitions need at least one player".into()));
    }
    if n > MAX_PLAYERS {
        return Err(Error::CapExceeded { what: "player count", actual: n, limit: MAX_PLAYERS });
    }
    Ok((1..(1u32 << n)).map(Coalition).collect())
}

/// One action index per player.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Profile(pub Vec<usize>);

impl Profile {
    pub fn actions(&self) -> &[usize] {
        &self.0
    }
}

/// Raw, unvalidated game description as read from a file.
#[derive(Debug, Clone, Default)]
pub struct RawGame {
    pub players: usize,
    pub actions: Vec<Vec<String>>,
    pub payoffs: Vec<RawPayoffRow>,
}

#[derive(Debug, Clone)]
pub struct RawPayoffRow {
    pub profile: Vec<String>,
    pub values: Vec<String>,
}

/// A finite strategic game with an exact, total payoff table.
#[derive(Debug, Clone, PartialEq)]
pub struct Game {
    action_names: Vec<Vec<String>>,
    // payoffs[profile * n + player]
    payoffs: Vec<Rational>,
    num_profiles: usize,
}

impl Game {
    /// Builds a game by evaluating `payoff(profile)` on every profile. Action names
    /// default to `a1, a2, ...` for player 1, `b1, b2, ...` for player 2 and so on.
    pub fn from_fn<F>(action_counts: &[usize], mut payoff: F) -> Result<Game>
    where
        F: FnMut(&Profile) -> Vec<Rational>,
    {
        let names = default_action_names(action_counts);
        let num_profiles = check_shape(action_counts)?;
        let n = action_counts.len();
        let mut payoffs = Vec::with_capacity(num_profiles * n);
        let mut defects = Vec::new();
        for k in 0..num_profiles {
            let profile = decode(action_counts, k);
            let values = payoff(&profile);
            if values.len() != n {
                defects.push(format!(
                    "profile {} has {} payoffs, expected {n}",
                    k,
                    values.len()
                ));
                payoffs.extend(std::iter::repeat(Rational::zero()).take(n));
            } else {
                payoffs.extend(values);
            }
        }
        if !defects.is_empty() {
            return Err(Error::InvalidGame(defects));
        }
        Ok(Game { action_names: names, payoffs, num_profiles })
    }

    /// Two-player bimatrix game from row-major `(row payoff, column payoff)` cells.
    pub fn bimatrix(cells: &[Vec<(Rational, Rational)>]) -> Result<Game> {
        let rows = cells.len();
        let cols = cells.first().map_or(0, Vec::len);
        if cells.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidGame(vec!["ragged bimatrix".into()]));
        }
        Game::from_fn(&[rows, cols], |p| {
            let (a, b) = &cells[p.0[0]][p.0[1]];
            vec![a.clone(), b.clone()]
        })
    }

    pub fn with_action_names(mut self, names: Vec<Vec<String>>) -> Result<Game> {
        let ok = names.len() == self.action_names.len()
            && names.iter().zip(&self.action_names).all(|(a, b)| a.len() == b.len());
        if !ok {
            return Err(Error::InvalidGame(vec!["action name shape mismatch".into()]));
        }
        self.action_names = names;
        Ok(self)
    }

    pub fn num_players(&self) -> usize {
        self.action_names.len()
    }

    pub fn action_counts(&self) -> Vec<usize> {
        self.action_names.iter().map(Vec::len).collect()
    }

    pub fn action_count(&self, player: usize) -> usize {
        self.action_names[player].len()
    }

    pub fn action_names(&self) -> &[Vec<String>] {
        &self.action_names
    }

    pub fn num_profiles(&self) -> usize {
        self.num_profiles
    }

    pub fn payoff(&self, player: usize, profile: &Profile) -> &Rational {
        &self.payoffs[self.index_of(profile) * self.num_players() + player]
    }

    pub fn payoff_at(&self, player: usize, index: usize) -> &Rational {
        &self.payoffs[index * self.num_players() + player]
    }

    /// Lexicographic rank of a profile, player 1 most significant.
    pub fn index_of(&self, profile: &Profile) -> usize {
        debug_assert_eq!(profile.0.len(), self.num_players());
        profile
            .0
            .iter()
            .zip(&self.action_names)
            .fold(0, |acc, (&a, names)| acc * names.len() + a)
    }

    pub fn profile_at(&self, index: usize) -> Profile {
        decode(&self.action_counts(), index)
    }

    /// Looks a profile up by action names, e.g. `["a2", "b1"]`.
    pub fn profile_named(&self, names: &[&str]) -> Option<Profile> {
        if names.len() != self.num_players() {
            return None;
        }
        let actions = names
            .iter()
            .zip(&self.action_names)
            .map(|(name, list)| list.iter().position(|a| a == name))
            .collect::<Option<Vec<_>>>()?;
        Some(Profile(actions))
    }

    /// `(a1,b2)` style label.
    pub fn profile_label(&self, profile: &Profile) -> String {
        let parts: Vec<&str> = profile
            .0
            .iter()
            .zip(&self.action_names)
            .map(|(&a, names)| names[a].as_str())
            .collect();
        format!("({})", parts.join(","))
    }

    pub fn check_caps(&self) -> Result<()> {
        if self.num_players() > MAX_PLAYERS {
            return Err(Error::CapExceeded {
                what: "player count",
                actual: self.num_players(),
                limit: MAX_PLAYERS,
            });
        }
        if self.num_profiles > MAX_PROFILES {
            return Err(Error::CapExceeded {
                what: "profile count",
                actual: self.num_profiles,
                limit: MAX_PROFILES,
            });
        }
        Ok(())
    }
}

/// All profiles in lexicographic order.
pub fn enumerate_profiles(game: &Game) -> Vec<Profile> {
    (0..game.num_profiles()).map(|k| game.profile_at(k)).collect()
}

fn decode(action_counts: &[usize], mut index: usize) -> Profile {
    let mut actions = vec![0; action_counts.len()];
    for (slot, &count) in actions.iter_mut().zip(action_counts).rev() {
        *slot = index % count;
        index /= count;
    }
    Profile(actions)
}

fn check_shape(action_counts: &[usize]) -> Result<usize> {
    let mut defects = Vec::new();
    if action_counts.is_empty() {
        defects.push("game has zero players".to_string());
    }
    for (i, &c) in action_counts.iter().enumerate() {
        if c == 0 {
            defects.push(format!("player {} has zero actions", i + 1));
        }
    }
    if !defects.is_empty() {
        return Err(Error::InvalidGame(defects));
    }
    if action_counts.len() > MAX_PLAYERS {
        return Err(Error::CapExceeded {
            what: "player count",
            actual: action_counts.len(),
            limit: MAX_PLAYERS,
        });
    }
    action_counts
        .iter()
        .try_fold(1usize, |acc, &c| acc.checked_mul(c).filter(|&p| p <= MAX_PROFILES))
        .ok_or(Error::CapExceeded {
            what: "profile count",
            actual: action_counts.iter().fold(1usize, |a, &c| a.saturating_mul(c)),
            limit: MAX_PROFILES,
        })
}

fn default_action_names(action_counts: &[usize]) -> Vec<Vec<String>> {
    action_counts
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let prefix = if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("p{}_", i + 1)
            };
            (1..=c).map(|k| format!("{prefix}{k}")).collect()
        })
        .collect()
}

/// Checks a raw description and produces a [`Game`], or every defect found.
pub fn validate_game(raw: &RawGame) -> Result<Game> {
    let mut defects = Vec::new();
    if raw.players == 0 {
        defects.push("game has zero players".to_string());
    }
    if raw.actions.len() != raw.players {
        defects.push(format!(
            "`players` is {} but {} action lists were given",
            raw.players,
            raw.actions.len()
        ));
    }
    for (i, list) in raw.actions.iter().enumerate() {
        if list.is_empty() {
            defects.push(format!("player {} has zero actions", i + 1));
        }
        for (k, name) in list.iter().enumerate() {
            if list[..k].contains(name) {
                defects.push(format!("player {} has duplicate action `{name}`", i + 1));
            }
        }
    }
    if !defects.is_empty() {
        return Err(Error::InvalidGame(defects));
    }
    let counts: Vec<usize> = raw.actions.iter().map(Vec::len).collect();
    let num_profiles = check_shape(&counts)?;
    let n = raw.players;
    let skeleton = Game {
        action_names: raw.actions.clone(),
        payoffs: Vec::new(),
        num_profiles,
    };

    let mut table: HashMap<usize, Vec<Rational>> = HashMap::new();
    for (row_no, row) in raw.payoffs.iter().enumerate() {
        let names: Vec<&str> = row.profile.iter().map(String::as_str).collect();
        let Some(profile) = skeleton.profile_named(&names) else {
            defects.push(format!(
                "payoff row {}: unknown profile ({})",
                row_no + 1,
                names.join(",")
            ));
            continue;
        };
        let label = skeleton.profile_label(&profile);
        if row.values.len() != n {
            defects.push(format!(
                "payoff row {} for {label}: {} values, expected {n}",
                row_no + 1,
                row.values.len()
            ));
            continue;
        }
        let mut values = Vec::with_capacity(n);
        for v in &row.values {
            match parse_rational(v) {
                Ok(q) => values.push(q),
                Err(_) => defects.push(format!(
                    "payoff row {} for {label}: non-rational payoff literal `{v}`",
                    row_no + 1
                )),
            }
        }
        if values.len() != n {
            continue;
        }
        let k = skeleton.index_of(&profile);
        if table.insert(k, values).is_some() {
            defects.push(format!("duplicate payoff row for profile {label}"));
        }
    }

    let mut payoffs = Vec::with_capacity(num_profiles * n);
    for k in 0..num_profiles {
        match table.remove(&k) {
            Some(values) => payoffs.extend(values),
            None => {
                let label = skeleton.profile_label(&skeleton.profile_at(k));
                for player in 1..=n {
                    defects.push(format!("missing payoff (player {player}, profile {label})"));
                }
            }
        }
    }
    if !defects.is_empty() {
        return Err(Error::InvalidGame(defects));
    }
    Ok(Game { payoffs, ..skeleton })
}

impl CoalitionalModel for Game {
    fn num_players(&self) -> usize {
        self.num_players()
    }

    fn num_states(&self) -> usize {
        self.num_profiles
    }

    fn payoff(&self, player: usize, state: usize) -> &Rational {
        self.payoff_at(player, state)
    }

    fn reachable_states(&self, coalition: Coalition, state: usize) -> Vec<usize> {
        let counts = self.action_counts();
        let base = decode(&counts, state).0;
        let members: Vec<usize> = coalition.members().filter(|&i| i < counts.len()).collect();
        // odometer over the coalition's joint actions; others stay fixed
        let mut current = base.clone();
        for &i in &members {
            current[i] = 0;
        }
        let mut out = Vec::new();
        loop {
            out.push(self.index_of(&Profile(current.clone())));
            let mut carry = true;
            for &i in members.iter().rev() {
                current[i] += 1;
                if current[i] < counts[i] {
                    carry = false;
                    break;
                }
                current[i] = 0;
            }
            if carry {
                break;
            }
        }
        out
    }

    fn reachable_count(&self, coalition: Coalition, _: usize) -> usize {
        coalition
            .members()
            .filter_map(|i| self.action_names.get(i))
            .map(Vec::len)
            .product()
    }

    fn state_label(&self, state: usize) -> String {
        self.profile_label(&self.profile_at(state))
    }
}
