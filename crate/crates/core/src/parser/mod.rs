//! Text syntax for operator expressions.
//!
//! ```text
//! a_1(k)  a+_2(k')  da_1[3](k)  da+_1[1,2](q)  a_3(.)
//! delta(k,q)  delta(k,q)'[1,1]  k[2](q)^3  w_1(k)^-1  $m1^2
//! 1/2  -3i  i  (1/2+3i)
//! int(q) ...                       binds q over the whole term
//! E_1^2(k,k')  Elow_{12}(k,q)  Eup^{12}(k,q)  Elow_{123}(p1,p2,p3)
//! ```
//! Juxtaposition is the (non-commutative) operator product.

mod lexer;
mod render;

pub use render::render;

use lexer::{Lexer, Tok, Token};

use crate::error::{ParseError, SymbolicError};
use crate::expr::{Expr, KernelKind, Label, MultiIndex, OpFactor};
use crate::scalar::Scalar;

/// Parser configuration: species count N and momentum dimension d.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParseConfig {
    pub species: u8,
    pub dim: u8,
}

impl Default for ParseConfig {
    fn default() -> Self {
        ParseConfig { species: 3, dim: 3 }
    }
}

/// Parses with the default configuration (N = 3, d = 3).
pub fn parse(src: &str) -> Result<Expr, ParseError> {
    parse_with(src, ParseConfig::default())
}

pub fn parse_with(src: &str, config: ParseConfig) -> Result<Expr, ParseError> {
    let tokens = Lexer::new(src).tokenize()?;
    let mut p = Parser {
        tokens,
        pos: 0,
        config,
    };
    let e = p.expr()?;
    let t = p.peek();
    if t.tok != Tok::Eof {
        return Err(t.error(match t.tok {
            Tok::RParen => "unbalanced parentheses: unexpected `)`".to_string(),
            _ => format!("unexpected {}", t.tok),
        }));
    }
    Ok(e)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    config: ParseConfig,
}

impl Token {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }
}

fn sym_err(at: &Token, e: SymbolicError) -> ParseError {
    at.error(e.to_string())
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<Token, ParseError> {
        let t = self.next();
        if t.tok == want {
            Ok(t)
        } else if want == Tok::RParen && t.tok == Tok::Eof {
            Err(t.error("unbalanced parentheses: missing `)`"))
        } else {
            Err(t.error(format!("expected {want}, found {}", t.tok)))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut negate = false;
        match self.peek().tok {
            Tok::Minus => {
                self.next();
                negate = true;
            }
            Tok::Plus => {
                self.next();
            }
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if negate { first.neg() } else { first };
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.next();
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.next();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let start = self.peek().clone();
        let mut acc = Expr::one();
        let mut binds: Vec<(String, Token)> = Vec::new();
        let mut count = 0;
        loop {
            match self.peek().tok {
                Tok::Plus | Tok::Minus | Tok::RParen | Tok::Eof => break,
                _ => {}
            }
            let at = self.peek().clone();
            if let Tok::Ident(ref w) = at.tok {
                if w == "int" {
                    self.next();
                    self.expect(Tok::LParen)?;
                    let (label, _) = self.label()?;
                    self.expect(Tok::RParen)?;
                    binds.push((label, at));
                    count += 1;
                    continue;
                }
            }
            let f = self.factor()?;
            acc = acc.mul(&f).map_err(|e| sym_err(&at, e))?;
            count += 1;
        }
        if count == 0 {
            return Err(start.error(format!("expected a factor, found {}", start.tok)));
        }
        for (label, at) in binds {
            acc = acc.integrate(&label).map_err(|e| sym_err(&at, e))?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let t = self.next();
        match t.tok.clone() {
            Tok::Number { value, imaginary } => {
                let s = if imaginary {
                    Scalar::imag(value)
                } else {
                    Scalar::real(value)
                };
                Ok(Expr::scalar(s))
            }
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Dollar => {
                let name = match self.next() {
                    Token {
                        tok: Tok::Ident(n), ..
                    } => n,
                    other => return Err(other.error("expected a symbol name after `$`")),
                };
                let e = self.opt_exponent()?;
                Ok(Expr::scalar(Scalar::symbol(&name, e)))
            }
            Tok::Ident(word) => self.word_factor(&word, &t),
            other => Err(t.error(format!("unexpected {other}"))),
        }
    }

    fn word_factor(&mut self, word: &str, at: &Token) -> Result<Expr, ParseError> {
        match word {
            "i" => Ok(Expr::scalar(Scalar::i())),
            "a" | "a+" => {
                self.expect(Tok::Underscore)?;
                let species = self.species()?;
                let label = self.op_label()?;
                Ok(Expr::op(OpFactor::new(species, word == "a+", label)))
            }
            "da" | "da+" => {
                self.expect(Tok::Underscore)?;
                let species = self.species()?;
                let deriv = self.axes()?;
                let label_at = self.peek().clone();
                let label = self.op_label()?;
                if label == Label::Discrete {
                    return Err(sym_err(&label_at, SymbolicError::DiscreteDerivative));
                }
                let mut op = OpFactor::new(species, word == "da+", label);
                op.deriv = deriv;
                Ok(Expr::op(op))
            }
            "delta" => {
                self.expect(Tok::LParen)?;
                let (l1, _) = self.label()?;
                self.expect(Tok::Comma)?;
                let (l2, _) = self.label()?;
                self.expect(Tok::RParen)?;
                let mut e = Expr::delta(&l1, &l2);
                if self.peek().tok == Tok::Prime {
                    self.next();
                    let deriv = self.axes()?;
                    let mut term = crate::expr::Term::scalar(Scalar::one());
                    term.deltas.push(crate::expr::DeltaFactor {
                        lhs: l1,
                        rhs: l2,
                        deriv,
                    });
                    e = Expr::from_terms(vec![term]).map_err(|err| sym_err(at, err))?;
                }
                Ok(e)
            }
            "k" => {
                self.expect(Tok::LBracket)?;
                let axis = self.axis()?;
                self.expect(Tok::RBracket)?;
                let (label, _) = self.paren_label()?;
                let power = self.opt_exponent()?;
                if power == 0 {
                    return Ok(Expr::one());
                }
                Ok(Expr::kernel(&label, KernelKind::Component { axis, power }))
            }
            "w" => {
                self.expect(Tok::Underscore)?;
                let species = self.species()?;
                let (label, _) = self.paren_label()?;
                let exponent = self.opt_exponent()?;
                if exponent == 0 {
                    return Ok(Expr::one());
                }
                Ok(Expr::kernel(&label, KernelKind::Energy { species, exponent }))
            }
            "E" => {
                self.expect(Tok::Underscore)?;
                let mu = self.species()?;
                self.expect(Tok::Caret)?;
                let nu = self.species()?;
                let labels = self.label_list(2)?;
                let a = Expr::op(OpFactor::new(mu, false, labels[0].clone()));
                let c = Expr::op(OpFactor::new(nu, true, labels[1].clone()));
                let half = Scalar::ratio(1, 2);
                let ac = a.mul(&c).map_err(|e| sym_err(at, e))?;
                let ca = c.mul(&a).map_err(|e| sym_err(at, e))?;
                Ok(ac.add(&ca).scale(&half))
            }
            "Elow" | "Eup" => {
                if word == "Elow" {
                    self.expect(Tok::Underscore)?;
                } else {
                    self.expect(Tok::Caret)?;
                }
                let species = self.species_group()?;
                let labels = self.label_list(species.len())?;
                let mut acc = Expr::one();
                for (s, l) in species.into_iter().zip(labels) {
                    let op = Expr::op(OpFactor::new(s, word == "Eup", l));
                    acc = acc.mul(&op).map_err(|e| sym_err(at, e))?;
                }
                Ok(acc)
            }
            other => Err(at.error(format!("unknown symbol `{other}`"))),
        }
    }

    fn opt_exponent(&mut self) -> Result<i32, ParseError> {
        if self.peek().tok != Tok::Caret {
            return Ok(1);
        }
        self.next();
        let neg = if self.peek().tok == Tok::Minus {
            self.next();
            true
        } else {
            false
        };
        let t = self.next();
        match t.tok {
            Tok::Number {
                value,
                imaginary: false,
            } if value.is_integer() && value.numer().abs() <= i32::MAX as i128 => {
                let v = *value.numer() as i32;
                Ok(if neg { -v } else { v })
            }
            _ => Err(t.error("expected an integer exponent")),
        }
    }

    fn small_int(&mut self, what: &str) -> Result<(i128, Token), ParseError> {
        let t = self.next();
        match t.tok {
            Tok::Number {
                value,
                imaginary: false,
            } if value.is_integer() => Ok((*value.numer(), t)),
            _ => Err(t.error(format!("expected {what}"))),
        }
    }

    fn check_species(&self, s: i128, at: &Token) -> Result<u8, ParseError> {
        if s < 1 || s > self.config.species as i128 {
            return Err(at.error(format!(
                "species {s} out of range 1..{}",
                self.config.species
            )));
        }
        Ok(s as u8)
    }

    fn species(&mut self) -> Result<u8, ParseError> {
        let (s, at) = self.small_int("a species index")?;
        self.check_species(s, &at)
    }

    /// `{12}` (one digit per index) or `{1,2}`.
    fn species_group(&mut self) -> Result<Vec<u8>, ParseError> {
        self.expect(Tok::LBrace)?;
        let mut out = Vec::new();
        let (first, at) = self.small_int("species indices")?;
        if self.peek().tok == Tok::Comma {
            out.push(self.check_species(first, &at)?);
            while self.peek().tok == Tok::Comma {
                self.next();
                let (s, at) = self.small_int("a species index")?;
                out.push(self.check_species(s, &at)?);
            }
        } else {
            for ch in first.to_string().chars() {
                let s = ch.to_digit(10).unwrap() as i128;
                out.push(self.check_species(s, &at)?);
            }
        }
        self.expect(Tok::RBrace)?;
        Ok(out)
    }

    fn axis(&mut self) -> Result<u8, ParseError> {
        let (a, at) = self.small_int("an axis index")?;
        if a < 1 || a > self.config.dim as i128 {
            return Err(at.error(format!(
                "derivative axis {a} out of range 1..{}",
                self.config.dim
            )));
        }
        Ok(a as u8)
    }

    /// `[1,2,...]`
    fn axes(&mut self) -> Result<MultiIndex, ParseError> {
        self.expect(Tok::LBracket)?;
        let mut m = MultiIndex::ZERO;
        m = m.plus_axis(self.axis()?);
        while self.peek().tok == Tok::Comma {
            self.next();
            m = m.plus_axis(self.axis()?);
        }
        self.expect(Tok::RBracket)?;
        Ok(m)
    }

    fn label(&mut self) -> Result<(String, Token), ParseError> {
        let t = self.next();
        match &t.tok {
            Tok::Label(s) => Ok((s.clone(), t.clone())),
            Tok::Ident(s) => Ok((s.clone(), t.clone())),
            _ => Err(t.error(format!("expected a momentum label, found {}", t.tok))),
        }
    }

    fn paren_label(&mut self) -> Result<(String, Token), ParseError> {
        self.expect(Tok::LParen)?;
        let l = self.label()?;
        self.expect(Tok::RParen)?;
        Ok(l)
    }

    fn any_label(&mut self) -> Result<Label, ParseError> {
        if self.peek().tok == Tok::Dot {
            self.next();
            return Ok(Label::Discrete);
        }
        Ok(Label::Named(self.label()?.0))
    }

    fn op_label(&mut self) -> Result<Label, ParseError> {
        self.expect(Tok::LParen)?;
        let l = self.any_label()?;
        self.expect(Tok::RParen)?;
        Ok(l)
    }

    fn label_list(&mut self, n: usize) -> Result<Vec<Label>, ParseError> {
        let open = self.expect(Tok::LParen)?;
        let mut out = vec![self.any_label()?];
        while self.peek().tok == Tok::Comma {
            self.next();
            out.push(self.any_label()?);
        }
        self.expect(Tok::RParen)?;
        if out.len() != n {
            return Err(open.error(format!("expected {n} labels, found {}", out.len())));
        }
        Ok(out)
    }
}
