//! Morphism text format.
//!
//! ```text
//! // Fibonacci
//! morphism fib on 0 1 {
//!   0 -> 0 1 ;
//!   1 -> 0 ;
//! }
//! morphism phi on 0 1 to c {
//!   0 -> c ;
//!   1 -> eps ;
//! }
//! ```
//!
//! Letters are whitespace-free tokens. The optional `to` clause fixes the
//! target alphabet and its order; without it the target is the source
//! alphabet followed by any new letters in order of first use. `eps` is the
//! empty image. `//` starts a comment.

use crate::error::{Error, Result};
use crate::morphism::Morphism;
use crate::words::{Alphabet, Word};

/// A parsed morphism together with its name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismDef {
    pub name: String,
    pub morphism: Morphism,
}

const RESERVED: &[&str] = &["{", "}", ";", "->", "eps", "to", "on", "morphism"];

#[derive(Clone, Debug)]
struct Token {
    text: String,
    line: usize,
    column: usize,
}

fn tokenize(input: &str) -> Vec<Token> {
    let mut out = Vec::new();
    for (ln, line) in input.lines().enumerate() {
        let line = match line.find("//") {
            Some(i) => &line[..i],
            None => line,
        };
        let chars: Vec<(usize, char)> = line.char_indices().collect();
        let mut i = 0;
        while i < chars.len() {
            let (_, c) = chars[i];
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let column = i + 1;
            if matches!(c, '{' | '}' | ';') {
                out.push(Token {
                    text: c.to_string(),
                    line: ln + 1,
                    column,
                });
                i += 1;
                continue;
            }
            let mut text = String::new();
            while i < chars.len() {
                let c = chars[i].1;
                if c.is_whitespace() || matches!(c, '{' | '}' | ';') {
                    break;
                }
                text.push(c);
                i += 1;
            }
            out.push(Token {
                text,
                line: ln + 1,
                column,
            });
        }
    }
    out
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn err<T>(&self, tok: Option<&Token>, message: impl Into<String>) -> Result<T> {
        let (line, column) = tok.map_or(self.end, |t| (t.line, t.column));
        Err(Error::Parse {
            line,
            column,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: &str) -> Result<Token> {
        match self.next() {
            Some(t) if t.text == want => Ok(t),
            Some(t) => {
                let msg = format!("expected `{want}`, found `{}`", t.text);
                self.err(Some(&t), msg)
            }
            None => self.err(None, format!("expected `{want}`, found end of input")),
        }
    }

    fn letter(&mut self) -> Result<Token> {
        match self.next() {
            Some(t) if !RESERVED.contains(&t.text.as_str()) => Ok(t),
            Some(t) => {
                let msg = format!("expected a letter, found `{}`", t.text);
                self.err(Some(&t), msg)
            }
            None => self.err(None, "expected a letter, found end of input"),
        }
    }

    fn is_letter_next(&self) -> bool {
        self.peek()
            .is_some_and(|t| !RESERVED.contains(&t.text.as_str()))
    }

    fn definition(&mut self) -> Result<MorphismDef> {
        self.expect("morphism")?;
        let name = self.letter()?.text;
        self.expect("on")?;
        let mut source = Vec::new();
        while self.is_letter_next() {
            source.push(self.letter()?);
        }
        if source.is_empty() {
            return self.err(self.peek(), "source alphabet must list at least one letter");
        }
        let source_alpha = self.alphabet(&source)?;
        let mut target_decl = None;
        if self.peek().is_some_and(|t| t.text == "to") {
            self.next();
            let mut target = Vec::new();
            while self.is_letter_next() {
                target.push(self.letter()?);
            }
            if target.is_empty() {
                return self.err(self.peek(), "target alphabet must list at least one letter");
            }
            target_decl = Some(self.alphabet(&target)?);
        }
        self.expect("{")?;
        let mut rules: Vec<(Token, Vec<Token>)> = Vec::new();
        loop {
            match self.peek() {
                Some(t) if t.text == "}" => {
                    self.next();
                    break;
                }
                None => return self.err(None, "unterminated morphism body"),
                _ => {}
            }
            let lhs = self.letter()?;
            self.expect("->")?;
            let mut rhs = Vec::new();
            if self.peek().is_some_and(|t| t.text == "eps") {
                self.next();
            } else {
                while self.is_letter_next() {
                    rhs.push(self.letter()?);
                }
                if rhs.is_empty() {
                    return self.err(self.peek(), "empty image must be written `eps`");
                }
            }
            match self.peek() {
                Some(t) if t.text == ";" => {
                    self.next();
                }
                Some(t) if t.text == "}" => {}
                other => {
                    let other = other.cloned();
                    return self.err(other.as_ref(), "expected `;` or `}` after a rule");
                }
            }
            rules.push((lhs, rhs));
        }

        let target = match target_decl {
            Some(t) => t,
            None => {
                let mut labels: Vec<String> = source_alpha.labels().to_vec();
                for (_, rhs) in &rules {
                    for t in rhs {
                        if !labels.contains(&t.text) {
                            labels.push(t.text.clone());
                        }
                    }
                }
                Alphabet::new(labels).map_err(|e| Error::Parse {
                    line: source[0].line,
                    column: source[0].column,
                    message: e.to_string(),
                })?
            }
        };

        let mut images: Vec<Option<Word>> = vec![None; source_alpha.len()];
        for (lhs, rhs) in &rules {
            let Some(a) = source_alpha.letter(&lhs.text) else {
                return self.err(
                    Some(lhs),
                    format!("letter `{}` is not in the source alphabet", lhs.text),
                );
            };
            if images[a as usize].is_some() {
                return self.err(Some(lhs), format!("duplicate rule for `{}`", lhs.text));
            }
            let mut img = Word::new();
            for t in rhs {
                match target.letter(&t.text) {
                    Some(l) => img.push(l),
                    None => {
                        return self.err(
                            Some(t),
                            format!("letter `{}` is not in the target alphabet", t.text),
                        )
                    }
                }
            }
            images[a as usize] = Some(img);
        }
        let missing: Vec<&str> = source_alpha
            .labels()
            .iter()
            .zip(&images)
            .filter(|(_, i)| i.is_none())
            .map(|(l, _)| l.as_str())
            .collect();
        if !missing.is_empty() {
            let msg = format!("no rule for letter(s): {}", missing.join(" "));
            return self.err(Some(&source[0]), msg);
        }
        let morphism = Morphism::new(
            source_alpha,
            target,
            images.into_iter().map(Option::unwrap).collect(),
        )?;
        Ok(MorphismDef { name, morphism })
    }

    fn alphabet(&self, toks: &[Token]) -> Result<Alphabet> {
        for (i, t) in toks.iter().enumerate() {
            if toks[..i].iter().any(|p| p.text == t.text) {
                return self.err(Some(t), format!("duplicate letter `{}`", t.text));
            }
        }
        Alphabet::new(toks.iter().map(|t| t.text.clone())).map_err(|e| Error::Parse {
            line: toks[0].line,
            column: toks[0].column,
            message: e.to_string(),
        })
    }
}

/// Parses every morphism definition in `input`.
pub fn parse_morphisms(input: &str) -> Result<Vec<MorphismDef>> {
    let tokens = tokenize(input);
    let end = (input.lines().count().max(1), 1);
    let mut p = Parser {
        tokens,
        pos: 0,
        end,
    };
    let mut out = Vec::new();
    while p.peek().is_some() {
        out.push(p.definition()?);
    }
    if out.is_empty() {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "no morphism definition found".into(),
        });
    }
    Ok(out)
}

/// Parses exactly one definition.
pub fn parse_morphism(input: &str) -> Result<MorphismDef> {
    let mut defs = parse_morphisms(input)?;
    if defs.len() != 1 {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: format!("expected one morphism definition, found {}", defs.len()),
        });
    }
    Ok(defs.remove(0))
}

/// Renders a morphism in the text format. Parsing the output yields the
/// same name and the same morphism.
pub fn format_morphism(name: &str, m: &Morphism) -> String {
    let mut out = format!("morphism {name} on {}", m.source().labels().join(" "));
    if m.source() != m.target() {
        out.push_str(" to ");
        out.push_str(&m.target().labels().join(" "));
    }
    out.push_str(" {\n");
    for a in m.source().letters() {
        let img = m.image(a);
        let rhs = if img.is_empty() {
            "eps".to_string()
        } else {
            img.iter()
                .map(|&l| m.target().label(l))
                .collect::<Vec<_>>()
                .join(" ")
        };
        out.push_str(&format!("  {} -> {} ;\n", m.source().label(a), rhs));
    }
    out.push('}');
    out
}

/// Whether a label can be written in the text format.
pub fn is_writable_label(label: &str) -> bool {
    !label.is_empty()
        && !RESERVED.contains(&label)
        && !label.contains("//")
        && !label
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '{' | '}' | ';'))
}
