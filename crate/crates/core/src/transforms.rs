//! String rewrites relating a bracket string to its shifted companion.
//!
//! Two index rules cover all six maps. The rotating maps drop `b_1`, shift
//! the rest one place left, write new marks just before selected positions
//! and close with a final bracket. The embedding maps keep the length plus
//! one, replace `b_1` by `<`, overwrite selected positions with bars and
//! append `>`. Every output is re-parsed before it is returned.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::brackets::{BracketError, BracketString, Kind, Token};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("WRONG_KIND: expected {expected}, got {got}")]
    WrongKind { expected: Kind, got: Kind },
    #[error("NOT_ANGLE_FIRST: the first token must be '<'")]
    NotAngleFirst,
    #[error("INVALID_OUTPUT: {0}")]
    InvalidOutput(BracketError),
}

impl TransformError {
    pub fn code(&self) -> &'static str {
        match self {
            TransformError::WrongKind { .. } => "WRONG_KIND",
            TransformError::NotAngleFirst => "NOT_ANGLE_FIRST",
            TransformError::InvalidOutput(_) => "INVALID_OUTPUT",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transform {
    Ass,
    Bra,
    AssBraket,
    AssToTbra,
    AssTbra,
    AssToQbra,
}

impl Transform {
    pub const ALL: [Transform; 6] = [
        Transform::Ass,
        Transform::Bra,
        Transform::AssBraket,
        Transform::AssToTbra,
        Transform::AssTbra,
        Transform::AssToQbra,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Transform::Ass => "ass",
            Transform::Bra => "bra",
            Transform::AssBraket => "ass-braket",
            Transform::AssToTbra => "ass-to-tbra",
            Transform::AssTbra => "ass-tbra",
            Transform::AssToQbra => "ass-to-qbra",
        }
    }

    pub fn source_kind(self) -> Kind {
        match self {
            Transform::Ass | Transform::Bra => Kind::Par,
            Transform::AssBraket | Transform::AssToTbra => Kind::Bra,
            Transform::AssTbra | Transform::AssToQbra => Kind::Tbra,
        }
    }

    pub fn target_kind(self) -> Kind {
        match self {
            Transform::Ass => Kind::Par,
            Transform::Bra | Transform::AssBraket => Kind::Bra,
            Transform::AssToTbra | Transform::AssTbra => Kind::Tbra,
            Transform::AssToQbra => Kind::Qbra,
        }
    }

    pub fn apply(self, b: &BracketString) -> Result<BracketString, TransformError> {
        match self {
            Transform::Ass => ass(b),
            Transform::Bra => bra(b),
            Transform::AssBraket => ass_braket(b),
            Transform::AssToTbra => ass_to_tbra(b),
            Transform::AssTbra => ass_tbra(b),
            Transform::AssToQbra => ass_to_qbra(b),
        }
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Transform {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Transform::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown transform '{s}'"))
    }
}

fn expect_kind(b: &BracketString, kind: Kind) -> Result<(), TransformError> {
    if b.kind() != kind {
        return Err(TransformError::WrongKind {
            expected: kind,
            got: b.kind(),
        });
    }
    Ok(())
}

fn expect_angle_first(b: &BracketString, kind: Kind) -> Result<(), TransformError> {
    expect_kind(b, kind)?;
    if !b.starts_with_angle() {
        return Err(TransformError::NotAngleFirst);
    }
    Ok(())
}

fn finish(tokens: Vec<Token>, kind: Kind) -> Result<BracketString, TransformError> {
    let out = BracketString::from_tokens(tokens).map_err(TransformError::InvalidOutput)?;
    if out.kind() != kind {
        return Err(TransformError::WrongKind {
            expected: kind,
            got: out.kind(),
        });
    }
    Ok(out)
}

/// `b'_m = b_{m+1}`, except `b'_{p-1}` is the mark for each marked `p` and
/// `b'_L = closer`.
fn rotate(b: &BracketString, marks: &[(usize, Token)], closer: Token) -> Vec<Token> {
    let len = b.len();
    (1..=len)
        .map(|m| {
            if m == len {
                closer
            } else if let Some(&(_, t)) = marks.iter().find(|(p, _)| *p == m + 1) {
                t
            } else {
                b.token(m + 1)
            }
        })
        .collect()
}

/// `b''_1 = <`, `b''_m = b_m` for `2 <= m <= L` except marked positions,
/// which become bars, and `b''_{L+1} = >`.
fn embed(b: &BracketString, bars_at: &[usize]) -> Vec<Token> {
    let len = b.len();
    (1..=len + 1)
        .map(|m| {
            if m == 1 {
                Token::LAngle
            } else if m == len + 1 {
                Token::RAngle
            } else if bars_at.contains(&m) {
                Token::Bar
            } else {
                b.token(m)
            }
        })
        .collect()
}

/// Positions of the bars and the closing angle bracket.
fn chain_tail(b: &BracketString) -> Vec<usize> {
    b.matching().chain()[1..].to_vec()
}

pub fn ass(b: &BracketString) -> Result<BracketString, TransformError> {
    expect_kind(b, Kind::Par)?;
    let i = b.partner(1).unwrap();
    finish(rotate(b, &[(i, Token::LRound)], Token::RRound), Kind::Par)
}

pub fn bra(b: &BracketString) -> Result<BracketString, TransformError> {
    expect_kind(b, Kind::Par)?;
    let i = b.partner(1).unwrap();
    finish(embed(b, &[i]), Kind::Bra)
}

pub fn ass_braket(b: &BracketString) -> Result<BracketString, TransformError> {
    expect_angle_first(b, Kind::Bra)?;
    let tail = chain_tail(b);
    let (i, j) = (tail[0], tail[1]);
    finish(
        rotate(b, &[(i, Token::LAngle), (j, Token::Bar)], Token::RAngle),
        Kind::Bra,
    )
}

pub fn ass_to_tbra(b: &BracketString) -> Result<BracketString, TransformError> {
    expect_angle_first(b, Kind::Bra)?;
    finish(embed(b, &chain_tail(b)), Kind::Tbra)
}

pub fn ass_tbra(b: &BracketString) -> Result<BracketString, TransformError> {
    expect_angle_first(b, Kind::Tbra)?;
    let tail = chain_tail(b);
    let (i, j, k) = (tail[0], tail[1], tail[2]);
    finish(
        rotate(
            b,
            &[(i, Token::LAngle), (j, Token::Bar), (k, Token::Bar)],
            Token::RAngle,
        ),
        Kind::Tbra,
    )
}

pub fn ass_to_qbra(b: &BracketString) -> Result<BracketString, TransformError> {
    expect_angle_first(b, Kind::Tbra)?;
    finish(embed(b, &chain_tail(b)), Kind::Qbra)
}
