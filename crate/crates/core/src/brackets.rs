//! Balanced bracket strings over `( ) < > |` and their combinatorics:
//! matching, upper covers, ranks, contents, enumeration and collapse.
//!
//! Token indices are 1-based. The integer position `m` sits between tokens
//! `b_m` and `b_{m+1}`, so a string of length `L` reads variables `x_1..x_{L-1}`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Token {
    LRound,
    RRound,
    LAngle,
    RAngle,
    Bar,
}

impl Token {
    pub fn from_char(c: char) -> Option<Token> {
        match c {
            '(' => Some(Token::LRound),
            ')' => Some(Token::RRound),
            '<' | '⟨' => Some(Token::LAngle),
            '>' | '⟩' => Some(Token::RAngle),
            '|' => Some(Token::Bar),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Token::LRound => '(',
            Token::RRound => ')',
            Token::LAngle => '<',
            Token::RAngle => '>',
            Token::Bar => '|',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Kind {
    Par,
    Ang,
    Bra,
    Tbra,
    Qbra,
}

impl Kind {
    pub const ALL: [Kind; 5] = [Kind::Par, Kind::Ang, Kind::Bra, Kind::Tbra, Kind::Qbra];

    /// Number of bars inside the angle pair, `None` for round-only strings.
    pub fn bars(self) -> Option<usize> {
        match self {
            Kind::Par => None,
            Kind::Ang => Some(0),
            Kind::Bra => Some(1),
            Kind::Tbra => Some(2),
            Kind::Qbra => Some(3),
        }
    }

    fn from_bars(bars: Option<usize>) -> Kind {
        match bars {
            None => Kind::Par,
            Some(0) => Kind::Ang,
            Some(1) => Kind::Bra,
            Some(2) => Kind::Tbra,
            _ => Kind::Qbra,
        }
    }

    /// String length for size parameter `n`.
    pub fn length(self, n: usize) -> usize {
        match self {
            Kind::Par | Kind::Ang => 2 * n,
            Kind::Bra | Kind::Qbra => 2 * n + 1,
            Kind::Tbra => 2 * n + 2,
        }
    }

    /// Number of round pairs in a string of size `n`.
    pub fn round_pairs(self, n: usize) -> Option<usize> {
        match self {
            Kind::Par => Some(n),
            Kind::Ang | Kind::Bra | Kind::Tbra => n.checked_sub(1),
            Kind::Qbra => n.checked_sub(2),
        }
    }

    fn size_from_round_pairs(self, r: usize) -> usize {
        match self {
            Kind::Par => r,
            Kind::Ang | Kind::Bra | Kind::Tbra => r + 1,
            Kind::Qbra => r + 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Kind::Par => "par",
            Kind::Ang => "ang",
            Kind::Bra => "bra",
            Kind::Tbra => "tbra",
            Kind::Qbra => "qbra",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Kind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown kind '{s}' (expected par|ang|bra|tbra|qbra)"))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BracketError {
    #[error("UNBALANCED: {0}")]
    Unbalanced(String),
    #[error("MULTIPLE_ANGLE_PAIRS: second '<' at position {0}")]
    MultipleAnglePairs(usize),
    #[error("NESTED_ANGLES: '<' at position {0} lies inside round brackets")]
    NestedAngles(usize),
    #[error("BAR_OUTSIDE_ANGLES: '|' at position {0} is not inside an angle pair")]
    BarOutsideAngles(usize),
    #[error("BAR_NOT_TOP_LEVEL: '|' at position {0} lies inside round brackets")]
    BarNotTopLevel(usize),
    #[error("TOO_MANY_BARS: more than three bars inside the angle pair")]
    TooManyBars,
    #[error("EMPTY_INPUT")]
    EmptyInput,
    #[error("INVALID_CHARACTER: '{ch}' at position {pos}")]
    InvalidCharacter { ch: char, pos: usize },
    #[error("NOT_A_LEFT_BRACKET: position {0}")]
    NotLeftBracket(usize),
    #[error("NOT_COLLAPSIBLE: position {0} is not a minimal, non-maximal round bracket")]
    NotCollapsible(usize),
    #[error("SIZE_GUARD: enumeration of {kind} with n={n} is outside 1..={max}")]
    SizeGuard { kind: Kind, n: usize, max: usize },
}

impl BracketError {
    pub fn code(&self) -> &'static str {
        match self {
            BracketError::Unbalanced(_) => "UNBALANCED",
            BracketError::MultipleAnglePairs(_) => "MULTIPLE_ANGLE_PAIRS",
            BracketError::NestedAngles(_) => "NESTED_ANGLES",
            BracketError::BarOutsideAngles(_) => "BAR_OUTSIDE_ANGLES",
            BracketError::BarNotTopLevel(_) => "BAR_NOT_TOP_LEVEL",
            BracketError::TooManyBars => "TOO_MANY_BARS",
            BracketError::EmptyInput => "EMPTY_INPUT",
            BracketError::InvalidCharacter { .. } => "INVALID_CHARACTER",
            BracketError::NotLeftBracket(_) => "NOT_A_LEFT_BRACKET",
            BracketError::NotCollapsible(_) => "NOT_COLLAPSIBLE",
            BracketError::SizeGuard { .. } => "SIZE_GUARD",
        }
    }
}

/// Matching data. `partner[i]` is the right end of the left bracket at `i`;
/// for the angle pair and bars the "right end" is the next link of the chain
/// `< -> | -> ... -> >`. `parent[i]` is the upper cover of round bracket `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchTable {
    partner: BTreeMap<usize, usize>,
    parent: BTreeMap<usize, usize>,
    chain: Vec<usize>,
}

impl MatchTable {
    pub fn partner(&self, i: usize) -> Option<usize> {
        self.partner.get(&i).copied()
    }

    /// Upper cover of the round bracket at `i`: the innermost enclosing round
    /// bracket, or the opening of the angle segment holding it.
    pub fn parent(&self, i: usize) -> Option<usize> {
        self.parent.get(&i).copied()
    }

    /// Positions `<, |, .., >`; empty for round-only strings.
    pub fn chain(&self) -> &[usize] {
        &self.chain
    }

    pub fn left_brackets(&self) -> impl Iterator<Item = usize> + '_ {
        self.partner.keys().copied()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketString {
    tokens: Vec<Token>,
    kind: Kind,
    n: usize,
    matching: MatchTable,
}

impl BracketString {
    pub fn parse(text: &str) -> Result<Self, BracketError> {
        let mut tokens = Vec::new();
        for (pos, ch) in text.chars().filter(|c| !c.is_whitespace()).enumerate() {
            tokens.push(
                Token::from_char(ch).ok_or(BracketError::InvalidCharacter { ch, pos: pos + 1 })?,
            );
        }
        Self::from_tokens(tokens)
    }

    pub fn from_tokens(tokens: Vec<Token>) -> Result<Self, BracketError> {
        if tokens.is_empty() {
            return Err(BracketError::EmptyInput);
        }
        let mut partner = BTreeMap::new();
        let mut parent = BTreeMap::new();
        let mut stack: Vec<usize> = Vec::new();
        let mut chain: Vec<usize> = Vec::new();
        let mut angle_open = false;
        let mut angle_seen = false;

        for (idx, &tok) in tokens.iter().enumerate() {
            let pos = idx + 1;
            match tok {
                Token::LRound => {
                    let up = stack
                        .last()
                        .copied()
                        .or_else(|| angle_open.then(|| *chain.last().unwrap()));
                    if let Some(up) = up {
                        parent.insert(pos, up);
                    }
                    stack.push(pos);
                }
                Token::RRound => {
                    let open = stack.pop().ok_or_else(|| {
                        BracketError::Unbalanced(format!("')' at position {pos} has no partner"))
                    })?;
                    partner.insert(open, pos);
                }
                Token::LAngle => {
                    if angle_seen {
                        return Err(BracketError::MultipleAnglePairs(pos));
                    }
                    if !stack.is_empty() {
                        return Err(BracketError::NestedAngles(pos));
                    }
                    angle_seen = true;
                    angle_open = true;
                    chain.push(pos);
                }
                Token::Bar => {
                    if !angle_open {
                        return Err(BracketError::BarOutsideAngles(pos));
                    }
                    if !stack.is_empty() {
                        return Err(BracketError::BarNotTopLevel(pos));
                    }
                    if chain.len() > 3 {
                        return Err(BracketError::TooManyBars);
                    }
                    chain.push(pos);
                }
                Token::RAngle => {
                    if !angle_open {
                        return Err(BracketError::Unbalanced(format!(
                            "'>' at position {pos} has no partner"
                        )));
                    }
                    if !stack.is_empty() {
                        return Err(BracketError::Unbalanced(format!(
                            "'>' at position {pos} closes over an open '(' at position {}",
                            stack.last().unwrap()
                        )));
                    }
                    angle_open = false;
                    chain.push(pos);
                }
            }
        }
        if let Some(open) = stack.last() {
            return Err(BracketError::Unbalanced(format!(
                "'(' at position {open} is never closed"
            )));
        }
        if angle_open {
            return Err(BracketError::Unbalanced(format!(
                "'<' at position {} is never closed",
                chain[0]
            )));
        }
        for w in chain.windows(2) {
            partner.insert(w[0], w[1]);
        }

        let bars = angle_seen.then(|| chain.len() - 2);
        let kind = Kind::from_bars(bars);
        let rounds = tokens.iter().filter(|t| **t == Token::LRound).count();
        let n = kind.size_from_round_pairs(rounds);
        debug_assert_eq!(kind.length(n), tokens.len());
        Ok(BracketString {
            tokens,
            kind,
            n,
            matching: MatchTable {
                partner,
                parent,
                chain,
            },
        })
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Number of variables `x_1..x_{L-1}` the string's positions address.
    pub fn ambient(&self) -> usize {
        self.tokens.len() - 1
    }

    pub fn matching(&self) -> &MatchTable {
        &self.matching
    }

    /// Token at 1-based position `i`.
    pub fn token(&self, i: usize) -> Token {
        self.tokens[i - 1]
    }

    pub fn starts_with_angle(&self) -> bool {
        self.tokens[0] == Token::LAngle
    }

    pub fn render(&self) -> String {
        self.tokens.iter().map(|t| t.as_char()).collect()
    }

    pub fn partner(&self, i: usize) -> Result<usize, BracketError> {
        self.matching
            .partner(i)
            .ok_or(BracketError::NotLeftBracket(i))
    }

    /// Round left brackets in increasing position.
    pub fn round_lefts(&self) -> Vec<usize> {
        (1..=self.len())
            .filter(|&i| self.token(i) == Token::LRound)
            .collect()
    }

    /// Left brackets strictly between `i` and its partner.
    fn inner_lefts(&self, i: usize, right: usize) -> impl Iterator<Item = usize> + '_ {
        self.matching.partner.range(i + 1..right).map(|(&k, _)| k)
    }

    /// Content of the left bracket (round, angle or bar) at `i`.
    pub fn content_of(&self, i: usize) -> Result<BTreeSet<usize>, BracketError> {
        let right = self.partner(i)?;
        let mut set: BTreeSet<usize> = (i..right).collect();
        for k in self.inner_lefts(i, right) {
            let kr = self.matching.partner[&k];
            for m in k..kr {
                set.remove(&m);
            }
        }
        Ok(set)
    }

    pub fn content(&self) -> ContentMap {
        let rounds = self
            .round_lefts()
            .into_iter()
            .map(|i| (i, self.content_of(i).unwrap()))
            .collect();
        let chain = self.matching.chain();
        let special = chain
            .iter()
            .take(chain.len().saturating_sub(1))
            .map(|&i| self.content_of(i).unwrap())
            .collect();
        let ranks = self
            .round_lefts()
            .into_iter()
            .map(|i| (i, self.rank(i).unwrap()))
            .collect();
        ContentMap {
            rounds,
            special,
            ranks,
        }
    }

    /// Rank: 1 for an empty pair, else one more than the largest rank of the
    /// left brackets strictly inside.
    pub fn rank(&self, i: usize) -> Result<usize, BracketError> {
        let right = self.partner(i)?;
        let inner = self
            .inner_lefts(i, right)
            .map(|k| self.rank(k).unwrap())
            .max();
        Ok(1 + inner.unwrap_or(0))
    }

    pub fn height(&self) -> usize {
        self.matching
            .left_brackets()
            .map(|i| self.rank(i).unwrap())
            .max()
            .unwrap_or(0)
    }

    /// A round bracket that is minimal (encloses nothing) and not maximal
    /// (has an upper cover).
    pub fn is_collapsible(&self, k: usize) -> bool {
        k >= 1
            && k <= self.len()
            && self.token(k) == Token::LRound
            && self.matching.partner(k) == Some(k + 1)
            && self.matching.parent(k).is_some()
    }

    pub fn collapsible_positions(&self) -> Vec<usize> {
        (1..=self.len())
            .filter(|&k| self.is_collapsible(k))
            .collect()
    }

    /// Removes the empty pair at `k, k+1`.
    pub fn collapse(&self, k: usize) -> Result<BracketString, BracketError> {
        if !self.is_collapsible(k) {
            return Err(BracketError::NotCollapsible(k));
        }
        let mut tokens = self.tokens.clone();
        tokens.drain(k - 1..k + 1);
        BracketString::from_tokens(tokens)
    }
}

impl fmt::Display for BracketString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl FromStr for BracketString {
    type Err = BracketError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BracketString::parse(s)
    }
}

impl Serialize for BracketString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.render())
    }
}

/// Index shift after collapsing the pair at `k, k+1`.
pub fn minus2(k: usize, m: usize) -> usize {
    if m > k {
        m - 2
    } else {
        m
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContentMap {
    /// Round left bracket position to its content.
    pub rounds: BTreeMap<usize, BTreeSet<usize>>,
    /// Contents of the angle opening and each bar, in chain order.
    pub special: Vec<BTreeSet<usize>>,
    ranks: BTreeMap<usize, usize>,
}

fn fmt_set(set: &BTreeSet<usize>) -> String {
    set.iter()
        .map(|m| m.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl ContentMap {
    /// `num(b)`: every position covered by some content.
    pub fn num(&self) -> BTreeSet<usize> {
        self.rounds
            .values()
            .chain(self.special.iter())
            .flatten()
            .copied()
            .collect()
    }

    /// Round contents ordered by decreasing rank, then position.
    pub fn rounds_by_rank(&self) -> Vec<&BTreeSet<usize>> {
        let mut keys: Vec<usize> = self.rounds.keys().copied().collect();
        keys.sort_by_key(|i| (std::cmp::Reverse(self.ranks[i]), *i));
        keys.iter().map(|i| &self.rounds[i]).collect()
    }

    /// `⟨5,7,9⟩`, `⟨3,5|6,8,10⟩`; empty when there is no angle pair.
    pub fn render_special(&self) -> String {
        if self.special.is_empty() {
            return String::new();
        }
        let inner: Vec<String> = self.special.iter().map(fmt_set).collect();
        format!("⟨{}⟩", inner.join("|"))
    }

    /// `{{1,3,5},{2},{4}}`.
    pub fn render_rounds(&self) -> String {
        let parts: Vec<String> = self
            .rounds_by_rank()
            .into_iter()
            .map(|s| format!("{{{}}}", fmt_set(s)))
            .collect();
        format!("{{{}}}", parts.join(","))
    }
}

impl fmt::Display for ContentMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.special.is_empty() {
            f.write_str(&self.render_rounds())
        } else {
            write!(f, "{} {}", self.render_special(), self.render_rounds())
        }
    }
}

impl Serialize for ContentMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.rounds.len() + 1))?;
        for (i, set) in &self.rounds {
            map.serialize_entry(&i.to_string(), set)?;
        }
        map.serialize_entry("special", &self.special)?;
        map.end()
    }
}

pub const ENUMERATION_MAX_N: usize = 8;

/// Dyck words with `pairs` round pairs, in lexicographic order with `(` < `)`.
pub fn dyck_words(pairs: usize) -> Vec<Vec<Token>> {
    fn go(open: usize, close: usize, cur: &mut Vec<Token>, out: &mut Vec<Vec<Token>>) {
        if open == 0 && close == 0 {
            out.push(cur.clone());
            return;
        }
        if open > 0 {
            cur.push(Token::LRound);
            go(open - 1, close + 1, cur, out);
            cur.pop();
        }
        if close > 0 {
            cur.push(Token::RRound);
            go(open, close - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(pairs, 0, &mut Vec::new(), &mut out);
    out
}

/// All compositions of `total` into `parts` nonnegative summands.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    (0..=total)
        .flat_map(|first| {
            compositions(total - first, parts - 1)
                .into_iter()
                .map(move |mut rest| {
                    rest.insert(0, first);
                    rest
                })
        })
        .collect()
}

/// Every string of the given kind and size, sorted by rendering.
pub fn enumerate(kind: Kind, n: usize) -> Result<Vec<BracketString>, BracketError> {
    let min = if kind == Kind::Qbra { 2 } else { 1 };
    if n < min || n > ENUMERATION_MAX_N {
        return Err(BracketError::SizeGuard {
            kind,
            n,
            max: ENUMERATION_MAX_N,
        });
    }
    let r = kind.round_pairs(n).unwrap();
    let mut out: Vec<BracketString> = match kind.bars() {
        None => dyck_words(r)
            .into_iter()
            .map(|t| BracketString::from_tokens(t).unwrap())
            .collect(),
        Some(bars) => {
            // outside-left, one word per angle segment, outside-right
            let segments = bars + 1;
            let words: Vec<Vec<Vec<Token>>> = (0..=r).map(dyck_words).collect();
            let mut acc = Vec::new();
            for comp in compositions(r, segments + 2) {
                let mut partial: Vec<Vec<Token>> = vec![Vec::new()];
                for (slot, &size) in comp.iter().enumerate() {
                    let mut next = Vec::new();
                    for prefix in &partial {
                        for w in &words[size] {
                            let mut t = prefix.clone();
                            if slot == 1 {
                                t.push(Token::LAngle);
                            } else if slot > 1 && slot <= segments {
                                t.push(Token::Bar);
                            } else if slot == segments + 1 {
                                t.push(Token::RAngle);
                            }
                            t.extend_from_slice(w);
                            next.push(t);
                        }
                    }
                    partial = next;
                }
                acc.extend(partial);
            }
            acc.into_iter()
                .map(|t| BracketString::from_tokens(t).unwrap())
                .collect()
        }
    };
    out.sort_by_key(|b| b.render());
    Ok(out)
}

/// Strings of the kind that begin with the angle bracket.
pub fn enumerate_angle_first(kind: Kind, n: usize) -> Result<Vec<BracketString>, BracketError> {
    Ok(enumerate(kind, n)?
        .into_iter()
        .filter(|b| b.starts_with_angle())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(s: &str) -> BracketString {
        BracketString::parse(s).unwrap()
    }

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn classification() {
        let cases = [
            ("(()())", Kind::Par, 3),
            ("()<()|()()>()", Kind::Bra, 6),
            ("()<(())|()|>", Kind::Tbra, 5),
            ("(())<()()>()", Kind::Ang, 6),
            ("<|||>", Kind::Qbra, 2),
            ("<>", Kind::Ang, 1),
            ("<||>", Kind::Tbra, 1),
        ];
        for (s, kind, n) in cases {
            let parsed = b(s);
            assert_eq!((parsed.kind(), parsed.n()), (kind, n), "{s}");
            assert_eq!(parsed.len(), kind.length(n));
        }
    }

    #[test]
    fn parse_errors() {
        let code = |s: &str| BracketString::parse(s).unwrap_err().code();
        assert_eq!(code("(("), "UNBALANCED");
        assert_eq!(code("(()"), "UNBALANCED");
        assert_eq!(code(")("), "UNBALANCED");
        assert_eq!(code("<(>)"), "UNBALANCED");
        assert_eq!(code("<><>"), "MULTIPLE_ANGLE_PAIRS");
        assert_eq!(code("(<>)"), "NESTED_ANGLES");
        assert_eq!(code("()|"), "BAR_OUTSIDE_ANGLES");
        assert_eq!(code("<(|)>"), "BAR_NOT_TOP_LEVEL");
        assert_eq!(code("<||||>"), "TOO_MANY_BARS");
        assert_eq!(code(""), "EMPTY_INPUT");
        assert_eq!(code("(x)"), "INVALID_CHARACTER");
    }

    #[test]
    fn unicode_aliases() {
        assert_eq!(b("⟨()|⟩").render(), "<()|>");
    }

    #[test]
    fn contents_of_worked_examples() {
        let c = b("(()())").content();
        assert_eq!(c.rounds[&1], set(&[1, 3, 5]));
        assert_eq!(c.rounds[&2], set(&[2]));
        assert_eq!(c.rounds[&4], set(&[4]));
        assert_eq!(c.render_rounds(), "{{1,3,5},{2},{4}}");

        assert_eq!(
            b("(())()(())").content().render_rounds(),
            "{{1,3},{7,9},{2},{5},{8}}"
        );

        let c = b("(())<()()>()").content();
        assert_eq!(c.render_special(), "⟨5,7,9⟩");
        let rounds: BTreeSet<_> = c.rounds.values().cloned().collect();
        assert_eq!(
            rounds,
            [set(&[1, 3]), set(&[2]), set(&[6]), set(&[8]), set(&[11])].into()
        );

        assert_eq!(
            b("()<()|()()>()").content().render_special(),
            "⟨3,5|6,8,10⟩"
        );
        let c = b("()<(())|()|>").content();
        assert_eq!(c.render_special(), "⟨3,7|8,10|11⟩");
        assert_eq!(c.rounds[&4], set(&[4, 6]));
    }

    #[test]
    fn ranks_and_height() {
        let s = b("(()())");
        assert_eq!(
            (s.rank(1).unwrap(), s.rank(2).unwrap(), s.rank(4).unwrap()),
            (2, 1, 1)
        );
        assert_eq!(s.height(), 2);
        assert_eq!(b("()").rank(1).unwrap(), 1);
        assert_eq!(b("((()))").height(), 3);
        assert_eq!(s.rank(3).unwrap_err().code(), "NOT_A_LEFT_BRACKET");
    }

    #[test]
    fn small_enumerations() {
        let render = |v: Vec<BracketString>| v.into_iter().map(|s| s.render()).collect::<Vec<_>>();
        assert_eq!(
            render(enumerate(Kind::Ang, 2).unwrap()),
            ["()<>", "<()>", "<>()"]
        );
        assert_eq!(enumerate(Kind::Bra, 2).unwrap().len(), 4);
        assert_eq!(enumerate(Kind::Tbra, 2).unwrap().len(), 5);
        assert_eq!(render(enumerate(Kind::Qbra, 2).unwrap()), ["<|||>"]);
        assert_eq!(enumerate(Kind::Par, 3).unwrap().len(), 5);
        assert!(enumerate(Kind::Par, 9).is_err());
        assert!(enumerate(Kind::Qbra, 1).is_err());
        assert_eq!(
            render(enumerate_angle_first(Kind::Bra, 2).unwrap()),
            ["<()|>", "<|()>", "<|>()"]
        );
    }

    #[test]
    fn collapse_examples() {
        assert_eq!(b("(())(()())").collapse(6).unwrap().render(), "(())(())");
        assert_eq!(b("(())").collapse(2).unwrap().render(), "()");
        assert_eq!(b("()").collapse(1).unwrap_err().code(), "NOT_COLLAPSIBLE");
        assert_eq!(b("(())").collapse(1).unwrap_err().code(), "NOT_COLLAPSIBLE");
        let collapsed = b("<()|>").collapse(2).unwrap();
        assert_eq!(
            (collapsed.render(), collapsed.kind(), collapsed.n()),
            ("<|>".to_string(), Kind::Bra, 1)
        );
    }

    #[test]
    fn content_json_shape() {
        let json = serde_json::to_string(&b("<()|>").content()).unwrap();
        assert_eq!(json, r#"{"2":[2],"special":[[1,3],[4]]}"#);
    }
}
