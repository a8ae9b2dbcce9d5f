use std::fmt;

use super::{Space, World};
use crate::{Error, Result};

/// Propositional formula over `variable = value` atoms.
///
/// Atoms hold variable and value indices into the [`Space`] they were built
/// against; use [`Formula::display`] to render them back to text.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom { variable: usize, value: usize },
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Top,
    Bottom,
}

impl Formula {
    pub fn atom(space: &Space, variable: &str, value: &str) -> Result<Formula> {
        let v = space.variable_index(variable)?;
        let value = space.variable(v).value_index(value)?;
        Ok(Formula::Atom { variable: v, value })
    }

    pub fn and(self, other: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(other))
    }

    /// Left-nested conjunction, `Top` when empty.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Formula {
        parts
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::Top)
    }

    pub(crate) fn holds_at(&self, space: &Space, world: usize) -> bool {
        match self {
            Formula::Atom { variable, value } => space.value_at(world, *variable) == *value,
            Formula::Not(f) => !f.holds_at(space, world),
            Formula::And(a, b) => a.holds_at(space, world) && b.holds_at(space, world),
            Formula::Or(a, b) => a.holds_at(space, world) || b.holds_at(space, world),
            Formula::Top => true,
            Formula::Bottom => false,
        }
    }

    pub(crate) fn extension_indices(&self, space: &Space) -> Vec<usize> {
        (0..space.world_count())
            .filter(|&w| self.holds_at(space, w))
            .collect()
    }

    pub(crate) fn check_space(&self, space: &Space) -> Result<()> {
        match self {
            Formula::Atom { variable, value } => {
                if *variable >= space.variables().len()
                    || *value >= space.variable(*variable).size()
                {
                    return Err(Error::SpaceMismatch);
                }
                Ok(())
            }
            Formula::Not(f) => f.check_space(space),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.check_space(space)?;
                b.check_space(space)
            }
            Formula::Top | Formula::Bottom => Ok(()),
        }
    }

    pub fn display<'a>(&'a self, space: &'a Space) -> FormulaDisplay<'a> {
        FormulaDisplay {
            formula: self,
            space,
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Or(..) => 1,
            Formula::And(..) => 2,
            Formula::Not(_) => 3,
            _ => 4,
        }
    }
}

pub struct FormulaDisplay<'a> {
    formula: &'a Formula,
    space: &'a Space,
}

impl FormulaDisplay<'_> {
    fn write(&self, f: &mut fmt::Formatter<'_>, node: &Formula, min_prec: u8) -> fmt::Result {
        let parens = node.precedence() < min_prec;
        if parens {
            f.write_str("(")?;
        }
        match node {
            Formula::Atom { variable, value } => {
                let var = self.space.variable(*variable);
                write!(f, "{}={}", var.name(), var.domain()[*value])?;
            }
            Formula::Not(inner) => {
                f.write_str("!")?;
                self.write(f, inner, 3)?;
            }
            // Binary connectives are left-associative: a right operand of the
            // same precedence needs parentheses to keep its structure.
            Formula::And(a, b) => {
                self.write(f, a, 2)?;
                f.write_str(" & ")?;
                self.write(f, b, 3)?;
            }
            Formula::Or(a, b) => {
                self.write(f, a, 1)?;
                f.write_str(" | ")?;
                self.write(f, b, 2)?;
            }
            Formula::Top => f.write_str("true")?,
            Formula::Bottom => f.write_str("false")?,
        }
        if parens {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, self.formula, 0)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Eq,
    Not,
    And,
    Or,
    LParen,
    RParen,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '\'' | '-' | '.')
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let mut tokens = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        let token = match c {
            c if c.is_whitespace() => {
                chars.next();
                continue;
            }
            '=' => Token::Eq,
            '!' => Token::Not,
            '&' => Token::And,
            '|' => Token::Or,
            '(' => Token::LParen,
            ')' => Token::RParen,
            c if is_ident_char(c) => {
                let mut ident = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if !is_ident_char(c) {
                        break;
                    }
                    ident.push(c);
                    chars.next();
                }
                tokens.push((pos, Token::Ident(ident)));
                continue;
            }
            other => {
                return Err(Error::Syntax {
                    position: pos,
                    message: format!("unexpected character `{other}`"),
                });
            }
        };
        chars.next();
        tokens.push((pos, token));
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
    space: &'a Space,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            position: self.offset(),
            message: message.into(),
        })
    }

    fn at_given(&self) -> bool {
        matches!(self.peek(), Some(Token::Ident(s)) if s == "given")
            && !matches!(self.tokens.get(self.pos + 1), Some((_, Token::Eq)))
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.conjunction()?;
        while self.peek() == Some(&Token::Or) {
            self.pos += 1;
            lhs = lhs.or(self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Token::And) {
            self.pos += 1;
            lhs = lhs.and(self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.peek() == Some(&Token::Not) {
            self.pos += 1;
            return Ok(!self.unary()?);
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Formula> {
        match self.peek().cloned() {
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.disjunction()?;
                if self.peek() != Some(&Token::RParen) {
                    return self.error("expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                if self.peek() == Some(&Token::Eq) {
                    self.pos += 1;
                    let Some(Token::Ident(value)) = self.peek().cloned() else {
                        return self.error("expected a value after `=`");
                    };
                    self.pos += 1;
                    return Formula::atom(self.space, &name, &value);
                }
                match name.as_str() {
                    "true" => Ok(Formula::Top),
                    "false" => Ok(Formula::Bottom),
                    _ => {
                        self.pos -= 1;
                        self.error(format!("expected `=` after `{name}`"))
                    }
                }
            }
            Some(_) => self.error("expected an atom, `!`, `(`, `true` or `false`"),
            None => self.error("unexpected end of input"),
        }
    }
}

/// Parses `atom := IDENT '=' IDENT`, connectives `!`, `&`, `|` (binding in
/// that order, left-associative), parentheses and the constants `true` and
/// `false`.
pub fn parse_formula(text: &str, space: &Space) -> Result<Formula> {
    let mut parser = Parser {
        tokens: tokenize(text)?,
        pos: 0,
        end: text.len(),
        space,
    };
    let formula = parser.disjunction()?;
    if parser.pos != parser.tokens.len() {
        return parser.error("unexpected trailing input");
    }
    Ok(formula)
}

/// Parses a probability query: a formula, optionally followed by the keyword
/// `given` and a conditioning formula (`Z=z given X=x_B`).
pub fn parse_query(text: &str, space: &Space) -> Result<(Formula, Option<Formula>)> {
    let mut parser = Parser {
        tokens: tokenize(text)?,
        pos: 0,
        end: text.len(),
        space,
    };
    let target = parser.disjunction()?;
    let given = if parser.at_given() {
        parser.pos += 1;
        Some(parser.disjunction()?)
    } else {
        None
    };
    if parser.pos != parser.tokens.len() {
        return parser.error("unexpected trailing input");
    }
    Ok((target, given))
}

pub fn satisfies(space: &Space, world: &World, formula: &Formula) -> bool {
    formula.holds_at(space, space.world_index(world))
}

/// Worlds satisfying `formula`, in canonical order.
pub fn extension(formula: &Formula, space: &Space) -> Vec<World> {
    formula
        .extension_indices(space)
        .into_iter()
        .map(|i| space.world(i))
        .collect()
}

/// The closest world function.
///
/// A world that satisfies the formula is its own closest world. For an atom
/// `X=x` only the `X` coordinate changes. For any other formula the result is
/// the satisfying world at minimal Hamming distance, ties going to the world
/// that comes first in canonical order.
pub fn closest_world(world: &World, formula: &Formula, space: &Space) -> Result<World> {
    let map = closest_map(space, formula)?;
    Ok(space.world(map[space.world_index(world)]))
}

/// `closest_world` for every world of the space, by index.
pub(crate) fn closest_map(space: &Space, formula: &Formula) -> Result<Vec<usize>> {
    if let Formula::Atom { variable, value } = formula {
        return Ok((0..space.world_count())
            .map(|w| space.with_value(w, *variable, *value))
            .collect());
    }
    let targets = formula.extension_indices(space);
    if targets.is_empty() {
        return Err(Error::NoClosestWorld(formula.display(space).to_string()));
    }
    let target_worlds: Vec<World> = targets.iter().map(|&t| space.world(t)).collect();
    Ok((0..space.world_count())
        .map(|w| {
            if formula.holds_at(space, w) {
                return w;
            }
            let here = space.world(w);
            let mut best = (usize::MAX, usize::MAX);
            for (&t, tw) in targets.iter().zip(&target_worlds) {
                let d = here.hamming(tw);
                if d < best.0 {
                    best = (d, t);
                }
            }
            best.1
        })
        .collect())
}

/// All non-empty conjunctions of atoms over `variables`, at most one atom
/// per variable.
pub(crate) fn partial_assignments(space: &Space, variables: &[usize]) -> Vec<Formula> {
    let mut out: Vec<Vec<Formula>> = vec![Vec::new()];
    for &v in variables {
        let mut next = Vec::new();
        for prefix in &out {
            next.push(prefix.clone());
            for value in 0..space.variable(v).size() {
                let mut with = prefix.clone();
                with.push(Formula::Atom { variable: v, value });
                next.push(with);
            }
        }
        out = next;
    }
    out.into_iter()
        .filter(|p| !p.is_empty())
        .map(Formula::conjunction)
        .collect()
}

impl std::ops::Not for Formula {
    type Output = Formula;

    fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }
}
