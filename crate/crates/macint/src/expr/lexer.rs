//! Tokenizer for the expression grammar. Every token carries the byte offset
//! it starts at so parse errors can point into the source text.

#[derive(Debug, Clone, PartialEq)]
pub(super) enum TokenKind {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    /// A byte the lexer does not recognize; reported by the parser together
    /// with whatever it expected at that position.
    Unrecognized(char),
    End,
}

impl TokenKind {
    pub(super) fn describe(&self) -> String {
        match self {
            TokenKind::Number(_) => "number".to_string(),
            TokenKind::Ident(name) => format!("`{name}`"),
            TokenKind::Plus => "`+`".to_string(),
            TokenKind::Minus => "`-`".to_string(),
            TokenKind::Star => "`*`".to_string(),
            TokenKind::Slash => "`/`".to_string(),
            TokenKind::Caret => "`^`".to_string(),
            TokenKind::LParen => "`(`".to_string(),
            TokenKind::RParen => "`)`".to_string(),
            TokenKind::Unrecognized(c) => format!("`{c}`"),
            TokenKind::End => "end of input".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(super) struct Token {
    pub kind: TokenKind,
    pub offset: usize,
}

pub(super) fn tokenize(text: &str) -> Vec<Token> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let offset = i;
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'+' => push_single(&mut tokens, TokenKind::Plus, &mut i, offset),
            b'-' => push_single(&mut tokens, TokenKind::Minus, &mut i, offset),
            b'*' => push_single(&mut tokens, TokenKind::Star, &mut i, offset),
            b'/' => push_single(&mut tokens, TokenKind::Slash, &mut i, offset),
            b'^' => push_single(&mut tokens, TokenKind::Caret, &mut i, offset),
            b'(' => push_single(&mut tokens, TokenKind::LParen, &mut i, offset),
            b')' => push_single(&mut tokens, TokenKind::RParen, &mut i, offset),
            b'0'..=b'9' => {
                let end = scan_number(bytes, i);
                // The scanned slice is ASCII digits/., always a valid f64.
                let value: f64 = text[i..end].parse().expect("lexer produced a bad number");
                tokens.push(Token {
                    kind: TokenKind::Number(value),
                    offset,
                });
                i = end;
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let mut end = i + 1;
                while end < bytes.len()
                    && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_')
                {
                    end += 1;
                }
                tokens.push(Token {
                    kind: TokenKind::Ident(text[i..end].to_string()),
                    offset,
                });
                i = end;
            }
            _ => {
                // Keep byte alignment for multi-byte UTF-8 by consuming the
                // whole character.
                let c = text[i..].chars().next().expect("offset is on a char boundary");
                tokens.push(Token {
                    kind: TokenKind::Unrecognized(c),
                    offset,
                });
                i += c.len_utf8();
            }
        }
    }
    tokens.push(Token {
        kind: TokenKind::End,
        offset: bytes.len(),
    });
    tokens
}

fn push_single(tokens: &mut Vec<Token>, kind: TokenKind, i: &mut usize, offset: usize) {
    tokens.push(Token { kind, offset });
    *i += 1;
}

/// Scans `digits ('.' digits*)? (('e'|'E') ('+'|'-')? digits+)?` starting at
/// `start`. The exponent part is consumed only when at least one digit
/// follows, so `2e` lexes as the number `2` followed by the identifier `e`.
fn scan_number(bytes: &[u8], start: usize) -> usize {
    let mut i = start;
    while i < bytes.len() && bytes[i].is_ascii_digit() {
        i += 1;
    }
    if i < bytes.len() && bytes[i] == b'.' {
        i += 1;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
    }
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        let mut j = i + 1;
        if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
            j += 1;
        }
        if j < bytes.len() && bytes[j].is_ascii_digit() {
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            i = j;
        }
    }
    i
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(text: &str) -> Vec<TokenKind> {
        tokenize(text).into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn lexes_operators_and_numbers() {
        assert_eq!(
            kinds("1+2.5*3"),
            vec![
                TokenKind::Number(1.0),
                TokenKind::Plus,
                TokenKind::Number(2.5),
                TokenKind::Star,
                TokenKind::Number(3.0),
                TokenKind::End,
            ]
        );
    }

    #[test]
    fn exponent_needs_digits() {
        // "2e" is the number 2 followed by the constant e, not a malformed
        // float.
        assert_eq!(
            kinds("2e"),
            vec![
                TokenKind::Number(2.0),
                TokenKind::Ident("e".to_string()),
                TokenKind::End,
            ]
        );
        assert_eq!(kinds("2e3"), vec![TokenKind::Number(2000.0), TokenKind::End]);
        assert_eq!(
            kinds("1.5e-2"),
            vec![TokenKind::Number(0.015), TokenKind::End]
        );
    }

    #[test]
    fn offsets_are_byte_positions() {
        let tokens = tokenize("x + sin(x)");
        assert_eq!(tokens[0].offset, 0);
        assert_eq!(tokens[1].offset, 2);
        assert_eq!(tokens[2].offset, 4);
        assert_eq!(tokens[3].offset, 7);
    }

    #[test]
    fn unrecognized_bytes_become_tokens() {
        let tokens = tokenize("1 @ 2");
        assert_eq!(tokens[1].kind, TokenKind::Unrecognized('@'));
        assert_eq!(tokens[1].offset, 2);
    }
}
