use super::ast::ComparisonOp;
use super::ParseError;

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    Word(String),
    Quoted(String),
    Regex { pattern: String, case_insensitive: bool },
    Op(ComparisonOp),
    OpenParen,
    CloseParen,
    Ampersand,
    Pipe,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    /// Byte offset of the first character.
    pub offset: usize,
    /// Source text of the token, including quotes and delimiters.
    pub lexeme: String,
}

impl Token {
    pub fn len(&self) -> usize {
        self.lexeme.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lexeme.is_empty()
    }

    pub fn end(&self) -> usize {
        self.offset + self.lexeme.len()
    }
}

/// Splits query text into tokens.
///
/// Bare words end at whitespace, at `( ) & | "` and at the start of a
/// comparison operator, so `a<=b` lexes as three tokens. Operators are
/// matched longest first.
pub fn tokenize(input: &str) -> Result<Vec<Token>, ParseError> {
    Lexer { input, pos: 0 }.run()
}

struct Lexer<'a> {
    input: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn run(mut self) -> Result<Vec<Token>, ParseError> {
        let mut tokens = Vec::new();
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
                continue;
            }
            let start = self.pos;
            let kind = match c {
                '(' => self.single(TokenKind::OpenParen),
                ')' => self.single(TokenKind::CloseParen),
                '&' => self.single(TokenKind::Ampersand),
                '|' => self.single(TokenKind::Pipe),
                '"' => self.quoted()?,
                '/' => self.regex()?,
                _ => match self.operator() {
                    Some(op) => TokenKind::Op(op),
                    None => self.word(),
                },
            };
            tokens.push(Token {
                kind,
                offset: start,
                lexeme: self.input[start..self.pos].to_owned(),
            });
        }
        Ok(tokens)
    }

    fn rest(&self) -> &'a str {
        &self.input[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn single(&mut self, kind: TokenKind) -> TokenKind {
        self.pos += 1;
        kind
    }

    fn operator(&mut self) -> Option<ComparisonOp> {
        let rest = self.rest();
        for symbol in ["<=", ">=", "!=", "=", "~", "<", ">"] {
            if rest.starts_with(symbol) {
                self.pos += symbol.len();
                return ComparisonOp::from_symbol(symbol);
            }
        }
        None
    }

    fn word(&mut self) -> TokenKind {
        let start = self.pos;
        let mut chars = self.rest().char_indices().peekable();
        let mut end = self.rest().len();
        while let Some((i, c)) = chars.next() {
            let boundary = c.is_whitespace()
                || matches!(c, '(' | ')' | '&' | '|' | '"' | '=' | '<' | '>' | '~')
                || (c == '!' && chars.peek().is_some_and(|&(_, n)| n == '='));
            if boundary {
                end = i;
                break;
            }
        }
        self.pos += end;
        TokenKind::Word(self.input[start..self.pos].to_owned())
    }

    fn quoted(&mut self) -> Result<TokenKind, ParseError> {
        let start = self.pos;
        let mut text = String::new();
        let mut chars = self.input[start + 1..].char_indices();
        while let Some((i, c)) = chars.next() {
            match c {
                '"' => {
                    self.pos = start + 1 + i + 1;
                    return Ok(TokenKind::Quoted(text));
                }
                '\\' => match chars.clone().next() {
                    Some((_, esc @ ('"' | '\\'))) => {
                        chars.next();
                        text.push(esc);
                    }
                    _ => text.push('\\'),
                },
                _ => text.push(c),
            }
        }
        Err(ParseError::new(
            "unterminated quoted string",
            start,
            self.input.len() - start,
        ))
    }

    fn regex(&mut self) -> Result<TokenKind, ParseError> {
        let start = self.pos;
        let body_start = start + 1;
        let mut chars = self.input[body_start..].char_indices();
        let mut close = None;
        while let Some((i, c)) = chars.next() {
            match c {
                '\\' => {
                    chars.next();
                }
                '/' => {
                    close = Some(body_start + i);
                    break;
                }
                _ => {}
            }
        }
        let Some(close) = close else {
            return Err(ParseError::new(
                "unterminated regular expression",
                start,
                self.input.len() - start,
            ));
        };
        let pattern = self.input[body_start..close].to_owned();
        self.pos = close + 1;

        let mut case_insensitive = false;
        while let Some(c) = self.peek() {
            if !c.is_alphanumeric() {
                break;
            }
            if c != 'i' {
                return Err(ParseError::new(
                    format!("unknown regular expression flag '{c}'"),
                    self.pos,
                    c.len_utf8(),
                ));
            }
            case_insensitive = true;
            self.pos += 1;
        }
        Ok(TokenKind::Regex {
            pattern,
            case_insensitive,
        })
    }
}
