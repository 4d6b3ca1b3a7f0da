//! Rule conditions.
//!
//! ```text
//! or   := and ("or" and)*
//! and  := not ("and" not)*
//! not  := "not" not | "(" or ")" | cmp
//! cmp  := (value|abs|bin|sign) (<|<=|>|>=|==|!=) number
//!       | (source|target) (==|!=) "quoted text"
//! ```

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NumVar {
    Value,
    Abs,
    Bin,
    Sign,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TextVar {
    Source,
    Target,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl CmpOp {
    fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
            CmpOp::Eq => "==",
            CmpOp::Ne => "!=",
        }
    }

    fn apply(self, a: f64, b: f64) -> bool {
        match self {
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Gt => a > b,
            CmpOp::Ge => a >= b,
            CmpOp::Eq => a == b,
            CmpOp::Ne => a != b,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Condition {
    Num(NumVar, CmpOp, f64),
    /// `true` for `==`, `false` for `!=`.
    Text(TextVar, bool, String),
    Not(Box<Condition>),
    And(Box<Condition>, Box<Condition>),
    Or(Box<Condition>, Box<Condition>),
}

/// The per-ribbon facts a condition can test.
#[derive(Debug, Clone, Copy)]
pub struct RibbonContext<'a> {
    pub value: f64,
    pub bin: usize,
    pub source: &'a str,
    pub target: &'a str,
}

impl RibbonContext<'_> {
    fn number(&self, var: NumVar) -> f64 {
        match var {
            NumVar::Value => self.value,
            NumVar::Abs => self.value.abs(),
            NumVar::Bin => self.bin as f64,
            NumVar::Sign => {
                if self.value > 0.0 {
                    1.0
                } else if self.value < 0.0 {
                    -1.0
                } else {
                    0.0
                }
            }
        }
    }
}

impl Condition {
    pub fn eval(&self, ctx: &RibbonContext<'_>) -> bool {
        match self {
            Condition::Num(var, op, lit) => op.apply(ctx.number(*var), *lit),
            Condition::Text(var, eq, lit) => {
                let v = match var {
                    TextVar::Source => ctx.source,
                    TextVar::Target => ctx.target,
                };
                (v == lit) == *eq
            }
            Condition::Not(c) => !c.eval(ctx),
            Condition::And(a, b) => a.eval(ctx) && b.eval(ctx),
            Condition::Or(a, b) => a.eval(ctx) || b.eval(ctx),
        }
    }

    pub fn parse(text: &str) -> Result<Condition, String> {
        let tokens = tokenize(text)?;
        let mut p = Parser { tokens, pos: 0 };
        let c = p.or()?;
        match p.peek() {
            None => Ok(c),
            Some(t) => Err(format!("unexpected {t} after condition")),
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::Num(var, op, lit) => {
                let name = match var {
                    NumVar::Value => "value",
                    NumVar::Abs => "abs",
                    NumVar::Bin => "bin",
                    NumVar::Sign => "sign",
                };
                write!(f, "{name} {} {lit}", op.symbol())
            }
            Condition::Text(var, eq, lit) => {
                let name = match var {
                    TextVar::Source => "source",
                    TextVar::Target => "target",
                };
                let escaped = lit.replace('\\', "\\\\").replace('"', "\\\"");
                write!(f, "{name} {} \"{escaped}\"", if *eq { "==" } else { "!=" })
            }
            Condition::Not(c) => write!(f, "not ({c})"),
            Condition::And(a, b) => write!(f, "({a}) and ({b})"),
            Condition::Or(a, b) => write!(f, "({a}) or ({b})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Number(f64),
    Str(String),
    Op(CmpOp),
    LParen,
    RParen,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Ident(s) => write!(f, "`{s}`"),
            Token::Number(n) => write!(f, "`{n}`"),
            Token::Str(s) => write!(f, "\"{s}\""),
            Token::Op(op) => write!(f, "`{}`", op.symbol()),
            Token::LParen => f.write_str("`(`"),
            Token::RParen => f.write_str("`)`"),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<Token>, String> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            _ if c.is_whitespace() => i += 1,
            '(' => {
                out.push(Token::LParen);
                i += 1;
            }
            ')' => {
                out.push(Token::RParen);
                i += 1;
            }
            '<' | '>' | '=' | '!' => {
                let next = chars.get(i + 1).copied();
                let (op, len) = match (c, next) {
                    ('<', Some('=')) => (CmpOp::Le, 2),
                    ('<', _) => (CmpOp::Lt, 1),
                    ('>', Some('=')) => (CmpOp::Ge, 2),
                    ('>', _) => (CmpOp::Gt, 1),
                    ('=', Some('=')) => (CmpOp::Eq, 2),
                    ('!', Some('=')) => (CmpOp::Ne, 2),
                    _ => {
                        return Err(format!(
                            "unexpected `{c}` (comparisons are <, <=, >, >=, ==, !=)"
                        ))
                    }
                };
                out.push(Token::Op(op));
                i += len;
            }
            '"' => {
                let mut s = String::new();
                i += 1;
                loop {
                    match chars.get(i) {
                        None => return Err("unterminated string".into()),
                        Some('"') => {
                            i += 1;
                            break;
                        }
                        Some('\\') => {
                            match chars.get(i + 1) {
                                Some(&e @ ('"' | '\\')) => s.push(e),
                                _ => return Err("bad escape in string".into()),
                            }
                            i += 2;
                        }
                        Some(&ch) => {
                            s.push(ch);
                            i += 1;
                        }
                    }
                }
                out.push(Token::Str(s));
            }
            _ if c.is_ascii_digit() || c == '-' || c == '+' || c == '.' => {
                let start = i;
                i += 1;
                while i < chars.len()
                    && (chars[i].is_ascii_alphanumeric()
                        || chars[i] == '.'
                        || ((chars[i] == '-' || chars[i] == '+')
                            && matches!(chars[i - 1], 'e' | 'E')))
                {
                    i += 1;
                }
                let lit: String = chars[start..i].iter().collect();
                let n: f64 = lit.parse().map_err(|_| format!("bad number {lit:?}"))?;
                if !n.is_finite() {
                    return Err(format!("bad number {lit:?}"));
                }
                out.push(Token::Number(n));
            }
            _ if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token::Ident(chars[start..i].iter().collect()));
            }
            _ => return Err(format!("unexpected character `{c}`")),
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn keyword(&mut self, word: &str) -> bool {
        if matches!(self.peek(), Some(Token::Ident(w)) if w == word) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn or(&mut self) -> Result<Condition, String> {
        let mut left = self.and()?;
        while self.keyword("or") {
            left = Condition::Or(Box::new(left), Box::new(self.and()?));
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<Condition, String> {
        let mut left = self.not()?;
        while self.keyword("and") {
            left = Condition::And(Box::new(left), Box::new(self.not()?));
        }
        Ok(left)
    }

    fn not(&mut self) -> Result<Condition, String> {
        if self.keyword("not") {
            return Ok(Condition::Not(Box::new(self.not()?)));
        }
        if self.peek() == Some(&Token::LParen) {
            self.pos += 1;
            let inner = self.or()?;
            return match self.next() {
                Some(Token::RParen) => Ok(inner),
                _ => Err("expected `)`".into()),
            };
        }
        self.comparison()
    }

    fn comparison(&mut self) -> Result<Condition, String> {
        let var = match self.next() {
            Some(Token::Ident(v)) => v,
            Some(t) => return Err(format!("expected a variable, found {t}")),
            None => return Err("expected a variable, found end of condition".into()),
        };
        let op = match self.next() {
            Some(Token::Op(op)) => op,
            _ => return Err(format!("expected a comparison after `{var}`")),
        };
        let num_var = match var.as_str() {
            "value" => Some(NumVar::Value),
            "abs" => Some(NumVar::Abs),
            "bin" => Some(NumVar::Bin),
            "sign" => Some(NumVar::Sign),
            _ => None,
        };
        if let Some(nv) = num_var {
            return match self.next() {
                Some(Token::Number(n)) => Ok(Condition::Num(nv, op, n)),
                _ => Err(format!("`{var}` must be compared with a number")),
            };
        }
        let text_var = match var.as_str() {
            "source" => TextVar::Source,
            "target" => TextVar::Target,
            other => {
                return Err(format!(
                    "unknown variable `{other}` (expected value, abs, bin, sign, source, target)"
                ))
            }
        };
        let eq = match op {
            CmpOp::Eq => true,
            CmpOp::Ne => false,
            _ => return Err(format!("`{var}` supports only == and !=")),
        };
        match self.next() {
            Some(Token::Str(s)) => Ok(Condition::Text(text_var, eq, s)),
            _ => Err(format!("`{var}` must be compared with a quoted string")),
        }
    }
}
