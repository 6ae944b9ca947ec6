use std::collections::HashMap;

use super::lexer::{tokenize, Tok};
use super::RESERVED;
use crate::concept::{Concept, Dialect, Name};
use crate::error::{Error, Position, Result};
use crate::kb::{KnowledgeBase, RoleRef, Sentence, Signature};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Category {
    Concept,
    Role,
    Individual,
}

impl Category {
    fn label(self) -> &'static str {
        match self {
            Category::Concept => "concept name",
            Category::Role => "role name",
            Category::Individual => "individual",
        }
    }
}

struct Parser {
    toks: Vec<(Tok, Position)>,
    at: usize,
    /// Declared names, when a `signature` block is present.
    declared: Option<HashMap<String, Category>>,
    seen: HashMap<String, Category>,
    order: (Vec<Name>, Vec<Name>, Vec<Name>),
    dialect: Dialect,
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        Ok(Parser {
            toks: tokenize(text)?,
            at: 0,
            declared: None,
            seen: HashMap::new(),
            order: Default::default(),
            dialect: Dialect::ALC,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.at + offset).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn pos(&self) -> Position {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T> {
        Err(Error::Parse {
            position: self.pos(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().describe(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(&[what])
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    /// A non-reserved identifier, registered under `cat`.
    fn name(&mut self, cat: Category) -> Result<Name> {
        let pos = self.pos();
        let ident = match self.peek() {
            Tok::Ident(s) if !RESERVED.contains(&s.as_str()) => s.clone(),
            _ => return self.fail(&[cat.label()]),
        };
        self.bump();
        self.register(&ident, cat, pos)?;
        Ok(Name::new(ident))
    }

    fn register(&mut self, ident: &str, cat: Category, pos: Position) -> Result<()> {
        if let Some(declared) = &self.declared {
            return match declared.get(ident) {
                Some(c) if *c == cat => Ok(()),
                Some(c) => Err(Error::Parse {
                    position: pos,
                    expected: vec![cat.label().into()],
                    found: format!("`{ident}` (declared as {})", c.label()),
                }),
                None => Err(Error::Parse {
                    position: pos,
                    expected: vec![format!("declared {}", cat.label())],
                    found: format!("undeclared `{ident}`"),
                }),
            };
        }
        match self.seen.get(ident) {
            Some(c) if *c != cat => Err(Error::Parse {
                position: pos,
                expected: vec![cat.label().into()],
                found: format!("`{ident}` (already used as {})", c.label()),
            }),
            Some(_) => Ok(()),
            None => {
                self.seen.insert(ident.to_string(), cat);
                let n = Name::new(ident);
                match cat {
                    Category::Concept => self.order.0.push(n),
                    Category::Role => self.order.1.push(n),
                    Category::Individual => self.order.2.push(n),
                }
                Ok(())
            }
        }
    }

    fn header(&mut self) -> Result<()> {
        if !self.is_keyword("dialect") {
            return self.fail(&["`dialect`"]);
        }
        self.bump();
        let d = match self.peek() {
            Tok::Ident(s) => Dialect::parse(s),
            _ => None,
        };
        match d {
            Some(d) => {
                self.dialect = d;
                self.bump();
            }
            None => return self.fail(&["`EL`", "`ELU`", "`ALC`"]),
        }
        if self.is_keyword("signature") {
            self.bump();
            self.signature_block()?;
        }
        Ok(())
    }

    fn signature_block(&mut self) -> Result<()> {
        let mut declared = HashMap::new();
        loop {
            let cat = match self.peek() {
                Tok::Ident(s) if s == "end" => {
                    self.bump();
                    break;
                }
                Tok::Ident(s) if s == "concepts" => Category::Concept,
                Tok::Ident(s) if s == "roles" => Category::Role,
                Tok::Ident(s) if s == "individuals" => Category::Individual,
                _ => return self.fail(&["`concepts`", "`roles`", "`individuals`", "`end`"]),
            };
            self.bump();
            self.expect(Tok::Colon, "`:`")?;
            let mut first = true;
            while first || *self.peek() == Tok::Comma {
                if !first {
                    self.bump();
                }
                first = false;
                // an empty list is allowed: `roles:` followed by the next key
                if !first && matches!(self.peek(), Tok::Ident(s) if ["concepts", "roles", "individuals", "end"].contains(&s.as_str()))
                {
                    break;
                }
                let pos = self.pos();
                let ident = match self.peek() {
                    Tok::Ident(s) if !RESERVED.contains(&s.as_str()) => s.clone(),
                    _ => return self.fail(&[cat.label()]),
                };
                self.bump();
                if let Some(prev) = declared.insert(ident.clone(), cat) {
                    return Err(Error::Parse {
                        position: pos,
                        expected: vec![cat.label().into()],
                        found: format!("`{ident}` (already declared as {})", prev.label()),
                    });
                }
                let n = Name::new(&ident);
                match cat {
                    Category::Concept => self.order.0.push(n),
                    Category::Role => self.order.1.push(n),
                    Category::Individual => self.order.2.push(n),
                }
            }
        }
        self.declared = Some(declared);
        Ok(())
    }

    fn sentence(&mut self) -> Result<(Sentence, Position)> {
        let start = self.pos();
        let s = match (self.peek().clone(), self.peek_at(1).clone(), self.peek_at(2).clone()) {
            (Tok::LParen, Tok::Ident(_), Tok::Comma) => {
                self.bump();
                let a = self.name(Category::Individual)?;
                self.expect(Tok::Comma, "`,`")?;
                let b = self.name(Category::Individual)?;
                self.expect(Tok::RParen, "`)`")?;
                self.expect(Tok::Colon, "`:`")?;
                let role = if self.is_keyword("TopRole") {
                    self.bump();
                    RoleRef::Universal
                } else {
                    RoleRef::Named(self.name(Category::Role)?)
                };
                Sentence::RoleFact(a, b, role)
            }
            (Tok::Ident(_), Tok::Colon, _) => {
                let a = self.name(Category::Individual)?;
                self.bump();
                let c = self.concept()?;
                Sentence::InstanceOf(a, c)
            }
            _ => {
                let lhs = self.concept()?;
                self.expect(Tok::Subsumed, "`[=`")?;
                let rhs = self.concept()?;
                Sentence::Gci(lhs, rhs)
            }
        };
        self.expect(Tok::Dot, "`.`")?;
        if let Some(ctor) = s.dialect_violation(self.dialect) {
            return Err(Error::DialectViolation {
                dialect: self.dialect,
                constructor: ctor,
                position: start,
            });
        }
        Ok((s, start))
    }

    fn concept(&mut self) -> Result<Concept> {
        let mut parts = vec![self.conj()?];
        while *self.peek() == Tok::Bar {
            self.bump();
            parts.push(self.conj()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Concept::or(parts) })
    }

    fn conj(&mut self) -> Result<Concept> {
        let mut parts = vec![self.unary()?];
        while *self.peek() == Tok::Amp {
            self.bump();
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Concept::and(parts) })
    }

    fn unary(&mut self) -> Result<Concept> {
        if self.is_keyword("not") {
            self.bump();
            return Ok(Concept::not(self.unary()?));
        }
        let universal = self.is_keyword("only");
        if universal || self.is_keyword("some") {
            self.bump();
            let role = self.name(Category::Role)?;
            self.expect(Tok::Dot, "`.`")?;
            let filler = self.primary()?;
            return Ok(if universal {
                Concept::Forall(role, Box::new(filler))
            } else {
                Concept::Exists(role, Box::new(filler))
            });
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Concept> {
        match self.peek() {
            Tok::LParen => {
                self.bump();
                let c = self.concept()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(c)
            }
            Tok::Ident(s) if s == "Top" => {
                self.bump();
                Ok(Concept::Top)
            }
            Tok::Ident(s) if s == "Bot" => {
                self.bump();
                Ok(Concept::Bot)
            }
            Tok::Ident(_) => Ok(Concept::Atom(self.name(Category::Concept)?)),
            _ => self.fail(&["concept"]),
        }
    }

    fn signature(&self) -> Result<Signature> {
        let (c, r, i) = self.order.clone();
        Signature::new(c, r, i)
    }
}

/// Parses a complete KB file.
pub fn parse_kb(text: &str) -> Result<KnowledgeBase> {
    parse_kb_spanned(text).map(|(kb, _)| kb)
}

/// Like [`parse_kb`], also returning the start position of every sentence
/// (duplicates keep the position of their first occurrence).
pub fn parse_kb_spanned(text: &str) -> Result<(KnowledgeBase, Vec<Position>)> {
    let mut p = Parser::new(text)?;
    p.header()?;
    let mut sentences: Vec<Sentence> = Vec::new();
    let mut spans = Vec::new();
    while *p.peek() != Tok::Eof {
        let (s, pos) = p.sentence()?;
        if !sentences.contains(&s) {
            sentences.push(s);
            spans.push(pos);
        }
    }
    let kb = KnowledgeBase::new(p.signature()?, p.dialect, sentences)?;
    Ok((kb, spans))
}

/// Parses a single concept; names are taken as concept/role names.
pub fn parse_concept(text: &str) -> Result<Concept> {
    let mut p = Parser::new(text)?;
    let c = p.concept()?;
    if *p.peek() != Tok::Eof {
        return p.fail(&["end of concept"]);
    }
    Ok(c)
}

/// Parses one sentence; the trailing `.` is optional.
pub fn parse_sentence(text: &str) -> Result<Sentence> {
    let trimmed = text.trim_end();
    let owned;
    let text = if trimmed.ends_with('.') {
        trimmed
    } else {
        owned = format!("{trimmed}.");
        &owned
    };
    let mut p = Parser::new(text)?;
    let (s, _) = p.sentence()?;
    if *p.peek() != Tok::Eof {
        return p.fail(&["end of sentence"]);
    }
    Ok(s)
}
