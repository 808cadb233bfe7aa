use thiserror::Error;

use super::{BinaryOp, CondOp, Expr, UnaryOp, Var};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("expected {expected}, found {found}")]
    UnexpectedToken {
        expected: &'static str,
        found: String,
    },
    #[error("unexpected end of input, expected {0}")]
    UnexpectedEnd(&'static str),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("`{name}` takes {expected} argument(s), {found} given")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("invalid number `{0}`")]
    InvalidNumber(String),
    #[error("trailing input after expression: {0}")]
    TrailingInput(String),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    LParen,
    RParen,
    Comma,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Pos {
    line: usize,
    column: usize,
}

fn err(pos: Pos, kind: ParseErrorKind) -> ParseError {
    ParseError {
        line: pos.line,
        column: pos.column,
        kind,
    }
}

fn tokenize(text: &str) -> Result<(Vec<(Tok, Pos)>, Pos), ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let (mut line, mut column) = (1usize, 1usize);
    let mut idx = 0;
    while idx < chars.len() {
        let c = chars[idx];
        let pos = Pos { line, column };
        if c == '\n' {
            line += 1;
            column = 1;
            idx += 1;
            continue;
        }
        if c.is_whitespace() {
            column += 1;
            idx += 1;
            continue;
        }
        if c == '#' {
            while idx < chars.len() && chars[idx] != '\n' {
                idx += 1;
                column += 1;
            }
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(t) = single {
            toks.push((t, pos));
            idx += 1;
            column += 1;
            continue;
        }
        let starts_number = c.is_ascii_digit()
            || c == '.'
            || ((c == '-' || c == '+')
                && chars
                    .get(idx + 1)
                    .is_some_and(|n| n.is_ascii_digit() || *n == '.'));
        if starts_number {
            let start = idx;
            idx += 1;
            while idx < chars.len() {
                let n = chars[idx];
                let exp_sign = (n == '-' || n == '+') && matches!(chars[idx - 1], 'e' | 'E');
                if n.is_ascii_digit() || n == '.' || n == 'e' || n == 'E' || exp_sign {
                    idx += 1;
                } else {
                    break;
                }
            }
            let lexeme: String = chars[start..idx].iter().collect();
            let value: f64 = lexeme
                .parse()
                .map_err(|_| err(pos, ParseErrorKind::InvalidNumber(lexeme.clone())))?;
            if !value.is_finite() {
                return Err(err(pos, ParseErrorKind::InvalidNumber(lexeme)));
            }
            column += idx - start;
            toks.push((Tok::Num(value), pos));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = idx;
            while idx < chars.len() && (chars[idx].is_ascii_alphanumeric() || chars[idx] == '_') {
                idx += 1;
            }
            column += idx - start;
            toks.push((Tok::Ident(chars[start..idx].iter().collect()), pos));
            continue;
        }
        return Err(err(pos, ParseErrorKind::UnexpectedChar(c)));
    }
    Ok((toks, Pos { line, column }))
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    end: Pos,
}

impl Parser {
    fn peek(&self) -> Option<&(Tok, Pos)> {
        self.toks.get(self.at)
    }

    fn next(&mut self, expected: &'static str) -> Result<(Tok, Pos), ParseError> {
        match self.toks.get(self.at) {
            Some(t) => {
                self.at += 1;
                Ok(t.clone())
            }
            None => Err(err(self.end, ParseErrorKind::UnexpectedEnd(expected))),
        }
    }

    fn expect(&mut self, want: Tok, expected: &'static str) -> Result<(), ParseError> {
        let (tok, pos) = self.next(expected)?;
        if tok == want {
            Ok(())
        } else {
            Err(err(
                pos,
                ParseErrorKind::UnexpectedToken {
                    expected,
                    found: tok.describe(),
                },
            ))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let (tok, pos) = self.next("an expression")?;
        match tok {
            Tok::Num(v) => Ok(Expr::Const(v)),
            Tok::Ident(name) => {
                if let Some(v) = variable(&name) {
                    return Ok(Expr::Var(v));
                }
                let expected_arity = function_arity(&name)
                    .ok_or_else(|| err(pos, ParseErrorKind::UnknownName(name.clone())))?;
                self.expect(Tok::LParen, "`(`")?;
                let mut args = vec![self.expr()?];
                loop {
                    let (tok, p) = self.next("`,` or `)`")?;
                    match tok {
                        Tok::Comma => args.push(self.expr()?),
                        Tok::RParen => break,
                        other => {
                            return Err(err(
                                p,
                                ParseErrorKind::UnexpectedToken {
                                    expected: "`,` or `)`",
                                    found: other.describe(),
                                },
                            ))
                        }
                    }
                }
                if args.len() != expected_arity {
                    return Err(err(
                        pos,
                        ParseErrorKind::Arity {
                            name,
                            expected: expected_arity,
                            found: args.len(),
                        },
                    ));
                }
                Ok(build(&name, args))
            }
            other => Err(err(
                pos,
                ParseErrorKind::UnexpectedToken {
                    expected: "an expression",
                    found: other.describe(),
                },
            )),
        }
    }
}

fn variable(name: &str) -> Option<Var> {
    Some(match name {
        "k" | "k_i" => Var::Ki,
        "k_j" => Var::Kj,
        "d" => Var::Dist,
        "i" => Var::I,
        "j" => Var::J,
        _ => return None,
    })
}

fn function_arity(name: &str) -> Option<usize> {
    Some(match name {
        "exp" | "log" | "abs" => 1,
        "add" | "sub" | "mul" | "div" | "pow" | "min" | "max" => 2,
        "zer" | "aff" => 3,
        "gt" | "lt" | "eq" => 4,
        _ => return None,
    })
}

fn build(name: &str, args: Vec<Expr>) -> Expr {
    let mut it = args.into_iter();
    let mut arg = || it.next().expect("arity checked");
    match name {
        "exp" => Expr::unary(UnaryOp::Exp, arg()),
        "log" => Expr::unary(UnaryOp::Log, arg()),
        "abs" => Expr::unary(UnaryOp::Abs, arg()),
        "add" | "sub" | "mul" | "div" | "pow" | "min" | "max" => {
            let op = BinaryOp::ALL
                .into_iter()
                .find(|op| op.name() == name)
                .expect("known binary op");
            let lhs = arg();
            Expr::binary(op, lhs, arg())
        }
        "gt" | "lt" | "eq" => {
            let op = CondOp::ALL
                .into_iter()
                .find(|op| op.name() == name)
                .expect("known cond op");
            let (lhs, rhs, then) = (arg(), arg(), arg());
            Expr::cond(op, lhs, rhs, then, arg())
        }
        "zer" => {
            let (test, then) = (arg(), arg());
            Expr::zero_cond(test, then, arg())
        }
        "aff" => {
            let (groups, then) = (arg(), arg());
            Expr::affinity(groups, then, arg())
        }
        _ => unreachable!("arity table and builder disagree on `{name}`"),
    }
}

/// Parses one generator expression in canonical prefix syntax.
///
/// `#` starts a comment running to the end of the line; `k` is accepted as an
/// alias for `k_i`.
pub fn parse_generator(text: &str) -> Result<Expr, ParseError> {
    let (toks, end) = tokenize(text)?;
    let mut parser = Parser { toks, at: 0, end };
    let expr = parser.expr()?;
    if let Some((tok, pos)) = parser.peek() {
        return Err(err(*pos, ParseErrorKind::TrailingInput(tok.describe())));
    }
    Ok(expr)
}
