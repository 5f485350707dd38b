//! Windowed LZ77 with greedy longest-match parsing.
//!
//! Matches may overlap the current position. Among matches of equal length
//! the smallest offset wins. Candidate positions are kept in hash chains
//! keyed by the two-symbol prefix, so only positions that can start a match
//! of length >= 2 are examined.

use std::collections::HashMap;
use std::fmt::{self, Display, Write as _};
use std::hash::Hash;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Token<T> {
    Literal(T),
    /// Copy `length` symbols starting `offset` positions back.
    Match {
        offset: usize,
        length: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lz77Tokens<T> {
    pub tokens: Vec<Token<T>>,
    pub window: usize,
}

impl<T> Lz77Tokens<T> {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

pub fn lz77_encode<T: Copy + Eq + Hash>(
    s: &[T],
    window: usize,
    min_match: usize,
) -> Result<Lz77Tokens<T>> {
    if window == 0 {
        return Err(Error::invalid("LZ77 window must be at least 1"));
    }
    if min_match < 2 {
        return Err(Error::invalid("LZ77 min_match must be at least 2"));
    }
    let n = s.len();
    let mut chains: HashMap<(T, T), Vec<usize>> = HashMap::new();
    let mut tokens = Vec::new();
    let mut indexed = 0;
    let mut i = 0;
    while i < n {
        let mut best_len = 0;
        let mut best_off = 0;
        if i + 1 < n {
            if let Some(list) = chains.get(&(s[i], s[i + 1])) {
                let max_len = n - i;
                for &j in list.iter().rev() {
                    let off = i - j;
                    if off > window {
                        break;
                    }
                    let mut l = 0;
                    while l < max_len && s[j + l] == s[i + l] {
                        l += 1;
                    }
                    if l > best_len {
                        best_len = l;
                        best_off = off;
                        if l == max_len {
                            break;
                        }
                    }
                }
            }
        }
        let advance = if best_len >= min_match {
            tokens.push(Token::Match {
                offset: best_off,
                length: best_len,
            });
            best_len
        } else {
            tokens.push(Token::Literal(s[i]));
            1
        };
        i += advance;
        while indexed < i {
            if indexed + 1 < n {
                chains
                    .entry((s[indexed], s[indexed + 1]))
                    .or_default()
                    .push(indexed);
            }
            indexed += 1;
        }
    }
    Ok(Lz77Tokens { tokens, window })
}

pub fn lz77_decode<T: Copy>(t: &Lz77Tokens<T>) -> Result<Vec<T>> {
    let mut out: Vec<T> = Vec::new();
    for (k, tok) in t.tokens.iter().enumerate() {
        match *tok {
            Token::Literal(sym) => out.push(sym),
            Token::Match { offset, length } => {
                if offset == 0 || offset > out.len() {
                    return Err(Error::Decode(format!(
                        "token {k}: offset {offset} with only {} symbols decoded",
                        out.len()
                    )));
                }
                if offset > t.window {
                    return Err(Error::Decode(format!(
                        "token {k}: offset {offset} exceeds the window {}",
                        t.window
                    )));
                }
                if length == 0 {
                    return Err(Error::Decode(format!("token {k}: zero-length match")));
                }
                let start = out.len() - offset;
                for p in 0..length {
                    let sym = out[start + p];
                    out.push(sym);
                }
            }
        }
    }
    Ok(out)
}

impl<T: Display> Display for Token<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Literal(s) => write!(f, "L:{s}"),
            Token::Match { offset, length } => write!(f, "M:{offset},{length}"),
        }
    }
}

impl<T: Display> Lz77Tokens<T> {
    /// One token per line: `L:<sym>` or `M:<offset>,<len>`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for t in &self.tokens {
            let _ = writeln!(out, "{t}");
        }
        out
    }
}

impl<T: FromStr> Lz77Tokens<T> {
    pub fn from_text(text: &str, window: usize) -> Result<Self> {
        let mut tokens = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = || Error::Parse(format!("line {}: '{line}' is not a token", ln + 1));
            if let Some(sym) = line.strip_prefix("L:") {
                tokens.push(Token::Literal(sym.parse::<T>().map_err(|_| bad())?));
            } else if let Some(rest) = line.strip_prefix("M:") {
                let (o, l) = rest.split_once(',').ok_or_else(bad)?;
                tokens.push(Token::Match {
                    offset: o.trim().parse().map_err(|_| bad())?,
                    length: l.trim().parse().map_err(|_| bad())?,
                });
            } else {
                return Err(bad());
            }
        }
        Ok(Lz77Tokens { tokens, window })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alternating_string_is_three_tokens() {
        let s: Vec<u8> = (0..20_000).map(|i| (i % 2) as u8).collect();
        let t = lz77_encode(&s, 4096, 2).unwrap();
        assert_eq!(
            t.tokens,
            vec![
                Token::Literal(0),
                Token::Literal(1),
                Token::Match {
                    offset: 2,
                    length: 19_998
                }
            ]
        );
        assert_eq!(lz77_decode(&t).unwrap(), s);
    }

    #[test]
    fn no_repetition_is_all_literals() {
        let t = lz77_encode(&['a', 'b', 'c'], 16, 2).unwrap();
        assert_eq!(t.len(), 3);
        assert!(t.tokens.iter().all(|t| matches!(t, Token::Literal(_))));
    }

    #[test]
    fn smallest_offset_wins_ties() {
        // "ab" occurs at 0 and 3; both give a match of length 2 at 6
        let s = ['a', 'b', 'x', 'a', 'b', 'y', 'a', 'b'];
        let t = lz77_encode(&s, 16, 2).unwrap();
        assert_eq!(
            t.tokens.last(),
            Some(&Token::Match {
                offset: 3,
                length: 2
            })
        );
    }

    #[test]
    fn window_limits_lookback() {
        let mut s: Vec<u32> = (0..10).collect();
        s.extend(100..120);
        s.extend(0..10);
        let wide = lz77_encode(&s, 64, 2).unwrap();
        let narrow = lz77_encode(&s, 20, 2).unwrap();
        assert_eq!(wide.len(), 31);
        assert_eq!(narrow.len(), 40);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(lz77_encode(&[1, 2], 0, 2).is_err());
        assert!(lz77_encode(&[1, 2], 4, 1).is_err());
    }

    #[test]
    fn decode_errors() {
        let empty: Lz77Tokens<u8> = Lz77Tokens {
            tokens: vec![],
            window: 4,
        };
        assert!(lz77_decode(&empty).unwrap().is_empty());
        let bad = Lz77Tokens {
            tokens: vec![
                Token::Literal(1u8),
                Token::Match {
                    offset: 2,
                    length: 1,
                },
            ],
            window: 4,
        };
        assert!(matches!(lz77_decode(&bad), Err(Error::Decode(_))));
        let outside = Lz77Tokens {
            tokens: vec![
                Token::Literal(1u8),
                Token::Literal(2),
                Token::Match {
                    offset: 2,
                    length: 1,
                },
            ],
            window: 1,
        };
        assert!(lz77_decode(&outside).is_err());
    }

    #[test]
    fn text_form() {
        let s: Vec<i64> = vec![3, 3, 3, 3, -1, 3, 3];
        let t = lz77_encode(&s, 8, 2).unwrap();
        let text = t.to_text();
        assert_eq!(text, "L:3\nM:1,3\nL:-1\nM:3,2\n");
        let back = Lz77Tokens::<i64>::from_text(&text, 8).unwrap();
        assert_eq!(back, t);
        assert!(Lz77Tokens::<i64>::from_text("X:1\n", 8).is_err());
        assert!(Lz77Tokens::<i64>::from_text("M:1\n", 8).is_err());
    }
}
