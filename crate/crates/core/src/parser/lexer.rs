use std::fmt;

use crate::error::ParseError;
use crate::scalar::Q;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    /// identifier carrying primes, e.g. `k''`
    Label(String),
    Number { value: Q, imaginary: bool },
    Plus,
    Minus,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Underscore,
    Caret,
    Prime,
    Dot,
    Dollar,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Label(s) => write!(f, "`{s}`"),
            Tok::Number { value, imaginary } => {
                write!(f, "number `{value}{}`", if *imaginary { "i" } else { "" })
            }
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Underscore => f.write_str("`_`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::Prime => f.write_str("`'`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Dollar => f.write_str("`$`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

pub(crate) struct Lexer<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
    _src: &'a str,
}

impl<'a> Lexer<'a> {
    pub fn new(src: &'a str) -> Self {
        Lexer {
            chars: src.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
            _src: src,
        }
    }

    fn peek_at(&self, off: usize) -> Option<char> {
        self.chars.get(self.pos + off).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn digits(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek_at(0).filter(|c| c.is_ascii_digit()) {
            s.push(c);
            self.bump();
        }
        s
    }

    pub fn tokenize(mut self) -> Result<Vec<Token>, ParseError> {
        let mut out = Vec::new();
        loop {
            while self.peek_at(0).is_some_and(char::is_whitespace) {
                self.bump();
            }
            let (line, column) = (self.line, self.column);
            let err = |message: String| ParseError {
                line,
                column,
                message,
            };
            let Some(c) = self.peek_at(0) else {
                out.push(Token {
                    tok: Tok::Eof,
                    line,
                    column,
                });
                return Ok(out);
            };
            let tok = if c.is_ascii_digit() {
                let n = self.digits();
                let mut value: Q = Q::from_integer(
                    n.parse::<i128>()
                        .map_err(|_| err(format!("number `{n}` too large")))?,
                );
                if self.peek_at(0) == Some('/') {
                    self.bump();
                    let d = self.digits();
                    if d.is_empty() {
                        return Err(err("expected a denominator after `/`".into()));
                    }
                    let d: i128 = d
                        .parse()
                        .map_err(|_| err(format!("number `{d}` too large")))?;
                    if d == 0 {
                        return Err(err("zero denominator".into()));
                    }
                    value /= Q::from_integer(d);
                }
                let imaginary = self.peek_at(0) == Some('i')
                    && !self.peek_at(1).is_some_and(|c| c.is_ascii_alphanumeric());
                if imaginary {
                    self.bump();
                }
                Tok::Number { value, imaginary }
            } else if c.is_ascii_alphabetic() {
                let mut word = String::new();
                while let Some(c) = self.peek_at(0).filter(|c| c.is_ascii_alphanumeric()) {
                    word.push(c);
                    self.bump();
                }
                if (word == "a" || word == "da")
                    && self.peek_at(0) == Some('+')
                    && self.peek_at(1) == Some('_')
                {
                    self.bump();
                    word.push('+');
                    Tok::Ident(word)
                } else if self.peek_at(0) == Some('\'') {
                    while self.peek_at(0) == Some('\'') {
                        self.bump();
                        word.push('\'');
                    }
                    Tok::Label(word)
                } else {
                    Tok::Ident(word)
                }
            } else {
                self.bump();
                match c {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    ',' => Tok::Comma,
                    '_' => Tok::Underscore,
                    '^' => Tok::Caret,
                    '\'' => Tok::Prime,
                    '.' => Tok::Dot,
                    '$' => Tok::Dollar,
                    other => return Err(err(format!("unexpected character `{other}`"))),
                }
            };
            out.push(Token { tok, line, column });
        }
    }
}
