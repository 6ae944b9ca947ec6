use crate::error::{Error, Position, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Subsumed,
    Colon,
    Comma,
    LParen,
    RParen,
    Dot,
    Amp,
    Bar,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Subsumed => "`[=`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Comma => "`,`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<(Tok, Position)>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);

    while let Some(&c) = chars.peek() {
        let pos = Position { line, column };
        let advance = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>, column: &mut usize| {
            chars.next();
            *column += 1;
        };
        match c {
            '\n' => {
                chars.next();
                line += 1;
                column = 1;
            }
            c if c.is_whitespace() => advance(&mut chars, &mut column),
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    advance(&mut chars, &mut column);
                }
            }
            '[' => {
                advance(&mut chars, &mut column);
                if chars.peek() == Some(&'=') {
                    advance(&mut chars, &mut column);
                    out.push((Tok::Subsumed, pos));
                } else {
                    return Err(Error::Parse {
                        position: pos,
                        expected: vec!["`[=`".into()],
                        found: "`[`".into(),
                    });
                }
            }
            ':' | ',' | '(' | ')' | '.' | '&' | '|' => {
                advance(&mut chars, &mut column);
                let tok = match c {
                    ':' => Tok::Colon,
                    ',' => Tok::Comma,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '.' => Tok::Dot,
                    '&' => Tok::Amp,
                    _ => Tok::Bar,
                };
                out.push((tok, pos));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut ident = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        ident.push(c);
                        advance(&mut chars, &mut column);
                    } else {
                        break;
                    }
                }
                out.push((Tok::Ident(ident), pos));
            }
            other => {
                return Err(Error::Parse {
                    position: pos,
                    expected: vec!["identifier or punctuation".into()],
                    found: format!("`{other}`"),
                })
            }
        }
    }
    out.push((Tok::Eof, Position { line, column }));
    Ok(out)
}
