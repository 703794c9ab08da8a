use super::ast::{FieldPath, Literal, NumLiteral, QueryAst, RegexLiteral};
use super::lexer::{tokenize, Token, TokenKind};
use super::ParseError;

/// Parses query text.
///
/// ```text
/// expr    = logic [ '|' expr ]
/// logic   = primary [ '&' logic ]
/// primary = path op literal | '(' expr ')'
/// ```
pub fn parse_query(input: &str) -> Result<QueryAst, ParseError> {
    let tokens = tokenize(input)?;
    if tokens.is_empty() {
        return Err(ParseError::new("empty query", 0, 0));
    }
    let mut parser = Parser {
        tokens: &tokens,
        pos: 0,
        input_len: input.len(),
    };
    let ast = parser.expr()?;
    if let Some(tok) = parser.peek() {
        let message = match tok.kind {
            TokenKind::CloseParen => "unmatched ')'",
            _ => "expected '&' or '|'",
        };
        return Err(ParseError::at_token(message, tok));
    }
    Ok(ast)
}

struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
    input_len: usize,
}

impl<'t> Parser<'t> {
    fn peek(&self) -> Option<&'t Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<&'t Token> {
        let tok = self.tokens.get(self.pos);
        self.pos += 1;
        tok
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek().is_some_and(|t| &t.kind == kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn end_of_input(&self, message: &str) -> ParseError {
        ParseError::new(message, self.input_len, 0)
    }

    fn expr(&mut self) -> Result<QueryAst, ParseError> {
        let left = self.logic()?;
        if self.eat(&TokenKind::Pipe) {
            let right = self.expr()?;
            return Ok(QueryAst::or(left, right));
        }
        Ok(left)
    }

    fn logic(&mut self) -> Result<QueryAst, ParseError> {
        let left = self.primary()?;
        if self.eat(&TokenKind::Ampersand) {
            let right = self.logic()?;
            return Ok(QueryAst::and(left, right));
        }
        Ok(left)
    }

    fn primary(&mut self) -> Result<QueryAst, ParseError> {
        let Some(tok) = self.next() else {
            return Err(self.end_of_input("expected a condition"));
        };
        match &tok.kind {
            TokenKind::OpenParen => {
                let inner = self.expr()?;
                match self.next() {
                    Some(t) if t.kind == TokenKind::CloseParen => Ok(inner),
                    Some(t) => Err(ParseError::at_token("expected ')'", t)),
                    None => Err(ParseError::at_token("unclosed '('", tok)),
                }
            }
            TokenKind::Word(text) => {
                let path = FieldPath::parse(text)
                    .ok_or_else(|| ParseError::at_token("invalid field path", tok))?;
                self.comparison(path)
            }
            TokenKind::Quoted(_) => Err(ParseError::at_token(
                "left side of a comparison must be a field path, not a quoted string",
                tok,
            )),
            TokenKind::Regex { .. } => Err(ParseError::at_token(
                "left side of a comparison must be a field path, not a regular expression",
                tok,
            )),
            TokenKind::Op(op) => Err(ParseError::at_token(
                format!("operator '{op}' is missing its left operand"),
                tok,
            )),
            TokenKind::CloseParen => Err(ParseError::at_token("unmatched ')'", tok)),
            TokenKind::Ampersand | TokenKind::Pipe => Err(ParseError::at_token(
                "connective is missing its left operand",
                tok,
            )),
        }
    }

    fn comparison(&mut self, path: FieldPath) -> Result<QueryAst, ParseError> {
        let op = match self.next() {
            Some(Token {
                kind: TokenKind::Op(op),
                ..
            }) => *op,
            Some(t) => return Err(ParseError::at_token("expected a comparison operator", t)),
            None => return Err(self.end_of_input("expected a comparison operator")),
        };
        let Some(tok) = self.next() else {
            return Err(self.end_of_input(&format!("operator '{op}' is missing its right operand")));
        };
        let literal = match &tok.kind {
            TokenKind::Quoted(text) => Literal::Str(text.clone()),
            TokenKind::Word(text) => match NumLiteral::parse(text) {
                Some(num) => Literal::Num(num),
                None if super::ast::is_numeric_lexeme(text) => {
                    return Err(ParseError::at_token("number out of range", tok))
                }
                None => Literal::Str(text.clone()),
            },
            TokenKind::Regex {
                pattern,
                case_insensitive,
            } => {
                if op != super::ComparisonOp::Match {
                    return Err(ParseError::at_token(
                        format!("regular expressions can only be used with '~', not '{op}'"),
                        tok,
                    ));
                }
                let regex = RegexLiteral::new(pattern, *case_insensitive).map_err(|e| {
                    ParseError::at_token(format!("invalid regular expression: {}", first_line(&e)), tok)
                })?;
                Literal::Regex(regex)
            }
            _ => {
                return Err(ParseError::at_token(
                    format!("operator '{op}' is missing its right operand"),
                    tok,
                ))
            }
        };
        Ok(QueryAst::cmp(path, op, literal))
    }
}

fn first_line(err: &regex::Error) -> String {
    let text = err.to_string();
    text.lines()
        .rev()
        .find(|l| l.starts_with("error:"))
        .map(|l| l.trim_start_matches("error:").trim().to_owned())
        .unwrap_or(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::query::ComparisonOp::*;

    fn cmp(path: &str, op: crate::query::ComparisonOp, lit: Literal) -> QueryAst {
        QueryAst::cmp(FieldPath::parse(path).unwrap(), op, lit)
    }

    fn num(s: &str) -> Literal {
        Literal::num(s).unwrap()
    }

    #[test]
    fn table_two_query_two() {
        let ast =
            parse_query(r#"type = "Extract Method" & extractMethod.sourceMethodsCount >= 2"#).unwrap();
        assert_eq!(
            ast,
            QueryAst::and(
                cmp("type", Eq, Literal::str("Extract Method")),
                cmp("extractMethod.sourceMethodsCount", Ge, num("2")),
            )
        );
    }

    #[test]
    fn and_binds_tighter_than_or() {
        let ast = parse_query("a = 1 | b = 2 & c = 3").unwrap();
        assert_eq!(
            ast,
            QueryAst::or(
                cmp("a", Eq, num("1")),
                QueryAst::and(cmp("b", Eq, num("2")), cmp("c", Eq, num("3"))),
            )
        );
    }

    #[test]
    fn parentheses_override() {
        let ast = parse_query("(a = 1 | b = 2) & c = 3").unwrap();
        assert_eq!(
            ast,
            QueryAst::and(
                QueryAst::or(cmp("a", Eq, num("1")), cmp("b", Eq, num("2"))),
                cmp("c", Eq, num("3")),
            )
        );
    }

    #[test]
    fn chains_are_right_associative() {
        let ast = parse_query("a = 1 & b = 2 & c = 3").unwrap();
        assert_eq!(
            ast,
            QueryAst::and(
                cmp("a", Eq, num("1")),
                QueryAst::and(cmp("b", Eq, num("2")), cmp("c", Eq, num("3"))),
            )
        );
    }

    #[test]
    fn bare_operands_are_typed() {
        let ast = parse_query("commit.date >= 2022-01-01 & x < -2.5").unwrap();
        assert_eq!(
            ast,
            QueryAst::and(
                cmp("commit.date", Ge, Literal::str("2022-01-01")),
                cmp("x", Lt, num("-2.5")),
            )
        );
    }

    fn err(input: &str) -> ParseError {
        let e = parse_query(input).unwrap_err();
        assert!(e.offset + e.length <= input.len(), "{e:?} for {input:?}");
        e
    }

    #[test]
    fn error_offsets() {
        assert_eq!(err("").offset, 0);
        assert_eq!(err("   ").offset, 0);
        assert_eq!(err("a = ").offset, 4);
        assert_eq!(err("type = ").offset, 7);
        assert_eq!(err("= 1").offset, 0);
        assert_eq!(err("a = 1 &").offset, 7);
        assert_eq!(err("a = 1 | & b = 2").offset, 8);
        assert_eq!(err("(a = 1").offset, 0);
        assert_eq!(err("a = 1)").offset, 5);
        assert_eq!(err("a = /x/").offset, 4);
        assert_eq!(err(r#""a" = 1"#).offset, 0);
        assert_eq!(err("/a/ ~ b").offset, 0);
        assert_eq!(err("a b").offset, 2);
        assert_eq!(err("a = 1 b = 2").offset, 6);
        assert_eq!(err("a ~ /(/").offset, 4);
        assert_eq!(err("a.. = 1").offset, 0);
    }

    #[test]
    fn unterminated_quote_recovers_when_closed() {
        let input = r#"a = "unclosed"#;
        let e = err(input);
        assert_eq!(e.offset, 4);
        let fixed = format!("{input}\"");
        assert!(parse_query(&fixed).is_ok());
    }

    #[test]
    fn unbalanced_paren_recovers_when_removed() {
        let input = "(a = 1 | b = 2";
        let e = err(input);
        let mut fixed = input.to_owned();
        fixed.replace_range(e.offset..e.offset + e.length, "");
        assert!(parse_query(&fixed).is_ok());

        let input = "a = 1 | b = 2)";
        let e = err(input);
        let mut fixed = input.to_owned();
        fixed.replace_range(e.offset..e.offset + e.length, "");
        assert!(parse_query(&fixed).is_ok());
    }
}
