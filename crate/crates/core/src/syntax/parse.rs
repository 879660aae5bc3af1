//! Surface grammar.
//!
//! ```text
//! expr   := or ( "->" expr )?
//! or     := and ( "|" and )*
//! and    := choice ( "&" choice )*
//! choice := unary ( ("+[" cl "]" | "*[" cl "]") unary )*
//! unary  := "~" unary | "T" | "F" | letter | "(" expr ")"
//! cl     := "" | n | "d" n | "c" n        (bare only for cirquentize input)
//! ```
//!
//! `~` over compound subexpressions and `->` are expanded while parsing.

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use super::{Cirquent, ClusterId, Kind, Letter, Polarity};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("polarity error at {pos}: `{op}` needs a {expected} cluster")]
    Polarity { pos: usize, op: &'static str, expected: &'static str },
    #[error("bare cluster `{op}[]` at {pos}; use cirquentize input for unnumbered choices")]
    Placeholder { pos: usize, op: &'static str },
}

/// A cirquent whose choice connectives may lack a cluster index, as written
/// in the extended grammar (`+[]`, `*[]`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Top,
    Bot,
    Lit { letter: Letter, positive: bool },
    Par { kind: Kind, left: Box<Formula>, right: Box<Formula> },
    Choice { kind: Kind, index: Option<u32>, left: Box<Formula>, right: Box<Formula> },
}

impl Formula {
    pub fn parse(text: &str) -> Result<Formula, ParseError> {
        let tokens = lex(text)?;
        let mut p = Parser { tokens, pos: 0, end: text.len() };
        let f = p.expr()?;
        if let Some(t) = p.peek() {
            return Err(ParseError::Syntax { pos: t.pos, msg: format!("unexpected {}", t.tok.describe()) });
        }
        Ok(f)
    }

    fn negate(self) -> Formula {
        match self {
            Formula::Top => Formula::Bot,
            Formula::Bot => Formula::Top,
            Formula::Lit { letter, positive } => Formula::Lit { letter, positive: !positive },
            Formula::Par { kind, left, right } => Formula::Par {
                kind: kind.dual(),
                left: Box::new(left.negate()),
                right: Box::new(right.negate()),
            },
            Formula::Choice { kind, index, left, right } => Formula::Choice {
                kind: kind.dual(),
                index,
                left: Box::new(left.negate()),
                right: Box::new(right.negate()),
            },
        }
    }

    fn polarity(kind: Kind) -> Polarity {
        match kind {
            Kind::Or => Polarity::Disjunctive,
            Kind::And => Polarity::Conjunctive,
        }
    }

    fn used_indices(&self, out: &mut BTreeSet<ClusterId>) {
        match self {
            Formula::Par { left, right, .. } => {
                left.used_indices(out);
                right.used_indices(out);
            }
            Formula::Choice { kind, index, left, right } => {
                if let Some(i) = index {
                    out.insert(ClusterId { polarity: Formula::polarity(*kind), index: *i });
                }
                left.used_indices(out);
                right.used_indices(out);
            }
            _ => {}
        }
    }

    /// Converts to a cirquent, numbering placeholders with `fresh`.
    fn build(&self, fresh: &mut dyn FnMut(Polarity) -> Option<u32>) -> Option<Cirquent> {
        Some(match self {
            Formula::Top => Cirquent::Top,
            Formula::Bot => Cirquent::Bot,
            Formula::Lit { letter, positive } => Cirquent::lit(letter.clone(), *positive),
            Formula::Par { kind, left, right } => Cirquent::Par {
                kind: *kind,
                left: Arc::new(left.build(fresh)?),
                right: Arc::new(right.build(fresh)?),
            },
            Formula::Choice { kind, index, left, right } => {
                let polarity = Formula::polarity(*kind);
                let index = match index {
                    Some(i) => *i,
                    None => fresh(polarity)?,
                };
                Cirquent::Choice {
                    cluster: ClusterId { polarity, index },
                    left: Arc::new(left.build(fresh)?),
                    right: Arc::new(right.build(fresh)?),
                }
            }
        })
    }

    /// The cirquent, if every choice connective carries an explicit cluster.
    pub fn to_cirquent(&self) -> Option<Cirquent> {
        self.build(&mut |_| None)
    }

    /// Gives every unnumbered choice connective its own fresh cluster, distinct
    /// from every cluster in the result. Fresh indices count up from 1,
    /// skipping indices already used with the same polarity.
    pub fn cirquentize(&self) -> Cirquent {
        let mut used = BTreeSet::new();
        self.used_indices(&mut used);
        let mut fresh = |polarity: Polarity| {
            let index = (1..)
                .find(|&i| !used.contains(&ClusterId { polarity, index: i }))
                .expect("finitely many clusters");
            used.insert(ClusterId { polarity, index });
            Some(index)
        };
        self.build(&mut fresh).expect("fresh clusters are always available")
    }
}

/// Parses surface text into an official-form cirquent.
pub fn parse(text: &str) -> Result<Cirquent, ParseError> {
    let tokens = lex(text)?;
    if let Some(t) = tokens.iter().find(|t| matches!(t.tok, Tok::Choice(_, None))) {
        let op = if matches!(t.tok, Tok::Choice(Kind::Or, _)) { "+" } else { "*" };
        return Err(ParseError::Placeholder { pos: t.pos, op });
    }
    let f = Formula::parse(text)?;
    Ok(f.to_cirquent().expect("placeholders rejected above"))
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Letter(Letter),
    Top,
    Bot,
    Not,
    And,
    Or,
    Implies,
    Choice(Kind, Option<u32>),
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Letter(l) => format!("letter `{l}`"),
            Tok::Top => "`T`".into(),
            Tok::Bot => "`F`".into(),
            Tok::Not => "`~`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Choice(Kind::Or, _) => "`+[..]`".into(),
            Tok::Choice(Kind::And, _) => "`*[..]`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
        }
    }
}

struct Spanned {
    tok: Tok,
    pos: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |pos: usize, msg: &str| ParseError::Syntax { pos, msg: msg.to_string() };
    while i < bytes.len() {
        let start = i;
        let tok = match bytes[i] {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'~' => Tok::Not,
            b'&' => Tok::And,
            b'|' => Tok::Or,
            b'T' => Tok::Top,
            b'F' => Tok::Bot,
            b'-' => {
                if bytes.get(i + 1) != Some(&b'>') {
                    return Err(err(i, "expected `->`"));
                }
                i += 1;
                Tok::Implies
            }
            op @ (b'+' | b'*') => {
                let kind = if op == b'+' { Kind::Or } else { Kind::And };
                if bytes.get(i + 1) != Some(&b'[') {
                    return Err(err(i, "expected `[` after choice operator"));
                }
                let close = text[i..]
                    .find(']')
                    .map(|k| i + k)
                    .ok_or_else(|| err(i, "unterminated cluster bracket"))?;
                let inner = text[i + 2..close].trim();
                let index = lex_cluster(inner, kind, i)?;
                i = close;
                Tok::Choice(kind, index)
            }
            b'a'..=b'z' => {
                let mut j = i + 1;
                while j < bytes.len() && matches!(bytes[j], b'a'..=b'z' | b'0'..=b'9' | b'_') {
                    j += 1;
                }
                let letter = Letter::new(&text[i..j]).expect("lexed letter shape");
                i = j - 1;
                Tok::Letter(letter)
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(err(i, &format!("unexpected character `{ch}`")));
            }
        };
        out.push(Spanned { tok, pos: start });
        i += 1;
    }
    Ok(out)
}

fn lex_cluster(inner: &str, kind: Kind, pos: usize) -> Result<Option<u32>, ParseError> {
    if inner.is_empty() {
        return Ok(None);
    }
    let (op, expected) = match kind {
        Kind::Or => ("+", "disjunctive"),
        Kind::And => ("*", "conjunctive"),
    };
    let digits = match (inner.as_bytes()[0], kind) {
        (b'd', Kind::Or) | (b'c', Kind::And) => &inner[1..],
        (b'd', Kind::And) | (b'c', Kind::Or) => {
            return Err(ParseError::Polarity { pos, op, expected })
        }
        _ => inner,
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseError::Syntax { pos, msg: format!("bad cluster `{inner}`") });
    }
    digits
        .parse()
        .map(Some)
        .map_err(|_| ParseError::Syntax { pos, msg: format!("cluster index `{digits}` out of range") })
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Spanned> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek().map(|t| &t.tok) == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn here(&self) -> usize {
        self.peek().map_or(self.end, |t| t.pos)
    }

    fn expr(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.expr()?;
            return Ok(Formula::Par { kind: Kind::Or, left: Box::new(lhs.negate()), right: Box::new(rhs) });
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Or) {
            let rhs = self.and()?;
            lhs = Formula::Par { kind: Kind::Or, left: Box::new(lhs), right: Box::new(rhs) };
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.choice()?;
        while self.eat(&Tok::And) {
            let rhs = self.choice()?;
            lhs = Formula::Par { kind: Kind::And, left: Box::new(lhs), right: Box::new(rhs) };
        }
        Ok(lhs)
    }

    fn choice(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while let Some(Spanned { tok: Tok::Choice(kind, index), .. }) = self.peek() {
            let (kind, index) = (*kind, *index);
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Formula::Choice { kind, index, left: Box::new(lhs), right: Box::new(rhs) };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let pos = self.here();
        let Some(t) = self.tokens.get(self.pos) else {
            return Err(ParseError::Syntax { pos, msg: "unexpected end of input".into() });
        };
        let f = match &t.tok {
            Tok::Not => {
                self.pos += 1;
                return Ok(self.unary()?.negate());
            }
            Tok::Top => Formula::Top,
            Tok::Bot => Formula::Bot,
            Tok::Letter(l) => Formula::Lit { letter: l.clone(), positive: true },
            Tok::LParen => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(&Tok::RParen) {
                    return Err(ParseError::Syntax { pos: self.here(), msg: "expected `)`".into() });
                }
                return Ok(inner);
            }
            other => {
                return Err(ParseError::Syntax { pos, msg: format!("unexpected {}", other.describe()) })
            }
        };
        self.pos += 1;
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atoms() {
        assert_eq!(parse("T").unwrap(), Cirquent::Top);
        assert_eq!(parse("F").unwrap(), Cirquent::Bot);
        assert_eq!(parse("~r1").unwrap(), Cirquent::neg("r1"));
    }

    #[test]
    fn grammar_examples() {
        assert_eq!(
            parse("p & (q +[1] r)").unwrap(),
            Cirquent::and(Cirquent::pos("p"), Cirquent::chor(1, Cirquent::pos("q"), Cirquent::pos("r")))
        );
        assert_eq!(
            parse("~(p *[1] q)").unwrap(),
            Cirquent::chor(1, Cirquent::neg("p"), Cirquent::neg("q"))
        );
        assert_eq!(parse("p -> q").unwrap(), Cirquent::or(Cirquent::neg("p"), Cirquent::pos("q")));
    }

    #[test]
    fn precedence_and_associativity() {
        // ~ > choice > & > | > ->
        assert_eq!(parse("p | q & r").unwrap(), parse("p | (q & r)").unwrap());
        assert_eq!(parse("p & q +[1] r").unwrap(), parse("p & (q +[1] r)").unwrap());
        assert_eq!(parse("p | q | r").unwrap(), parse("(p | q) | r").unwrap());
        assert_eq!(parse("p & q & r").unwrap(), parse("(p & q) & r").unwrap());
        assert_eq!(parse("p -> q -> r").unwrap(), parse("p -> (q -> r)").unwrap());
        assert_eq!(parse("p +[1] q *[2] r").unwrap(), parse("(p +[1] q) *[2] r").unwrap());
        assert_eq!(parse("p | q -> r").unwrap(), parse("(p | q) -> r").unwrap());
        assert_eq!(parse("~~p").unwrap(), parse("p").unwrap());
    }

    #[test]
    fn implication_negates_compound_antecedent() {
        assert_eq!(
            parse("p & (q +[1] r) -> (p&q) +[2] (p&r)").unwrap(),
            parse("(~p | (~q *[1] ~r)) | ((p&q) +[2] (p&r))").unwrap()
        );
    }

    #[test]
    fn prefixed_cluster_tokens() {
        assert_eq!(parse("p +[d3] q").unwrap(), parse("p +[3] q").unwrap());
        assert_eq!(parse("p *[c3] q").unwrap(), parse("p *[3] q").unwrap());
        assert!(matches!(parse("p +[c3] q"), Err(ParseError::Polarity { .. })));
        assert!(matches!(parse("p *[d3] q"), Err(ParseError::Polarity { .. })));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert_eq!(
            parse("p & "),
            Err(ParseError::Syntax { pos: 4, msg: "unexpected end of input".into() })
        );
        assert!(matches!(parse("(p | q"), Err(ParseError::Syntax { pos: 6, .. })));
        assert!(matches!(parse("p q"), Err(ParseError::Syntax { pos: 2, .. })));
        assert!(matches!(parse("p $ q"), Err(ParseError::Syntax { pos: 2, .. })));
        assert!(matches!(parse("p +[x] q"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse("p - q"), Err(ParseError::Syntax { pos: 2, .. })));
        assert!(matches!(parse("p +[] q"), Err(ParseError::Placeholder { pos: 2, .. })));
    }

    #[test]
    fn cirquentize_examples() {
        assert_eq!(Formula::parse("p +[] q").unwrap().cirquentize(), parse("p +[1] q").unwrap());
        let two = Formula::parse("(p +[] q) & (p +[] q)").unwrap().cirquentize();
        assert_eq!(two, parse("(p +[1] q) & (p +[2] q)").unwrap());
        assert_eq!(Formula::parse("p | q").unwrap().cirquentize(), parse("p | q").unwrap());
        // explicit indices are kept and skipped over
        assert_eq!(
            Formula::parse("(p +[1] q) & (p +[] q) & (p *[] q)").unwrap().cirquentize(),
            parse("(p +[1] q) & (p +[2] q) & (p *[1] q)").unwrap()
        );
        // a negated placeholder becomes a fresh cluster of the dual polarity
        assert_eq!(Formula::parse("~(p +[] q)").unwrap().cirquentize(), parse("~p *[1] ~q").unwrap());
    }
}
