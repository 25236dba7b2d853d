//! Functions on the spectrum given as expressions in `z`.
//!
//! Grammar (whitespace ignored, juxtaposition multiplies):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*')? unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := number | 'i' | 'j' | 'k' | 'z' | 'zbar'
//!         | 'conj' '(' expr ')' | 'abs' '(' expr ')' | '(' expr ')'
//! ```
//!
//! Products are evaluated in the order written, so `c z^a conj(z)^b` with the
//! coefficient first is the polynomial term `L_c z^a z̄^b`.

use qspectra::Quaternion;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(Quaternion),
    Z,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
    Conj(Box<Expr>),
    Abs(Box<Expr>),
}

impl Expr {
    pub fn eval(&self, z: Quaternion) -> Quaternion {
        match self {
            Expr::Const(q) => *q,
            Expr::Z => z,
            Expr::Add(a, b) => a.eval(z) + b.eval(z),
            Expr::Sub(a, b) => a.eval(z) - b.eval(z),
            Expr::Mul(a, b) => a.eval(z) * b.eval(z),
            Expr::Neg(a) => -a.eval(z),
            Expr::Pow(a, k) => {
                let base = a.eval(z);
                (0..*k).fold(Quaternion::ONE, |acc, _| acc * base)
            }
            Expr::Conj(a) => a.eval(z).conj(),
            Expr::Abs(a) => Quaternion::real(a.eval(z).norm()),
        }
    }

    /// Whether the expression does not mention `z`.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Const(_) => true,
            Expr::Z => false,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.is_constant() && b.is_constant(),
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Conj(a) | Expr::Abs(a) => a.is_constant(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Token>, String> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = k;
            while k < chars.len() && (chars[k].is_ascii_digit() || chars[k] == '.') {
                k += 1;
            }
            if k < chars.len() && (chars[k] == 'e' || chars[k] == 'E') {
                let mut m = k + 1;
                if m < chars.len() && (chars[m] == '+' || chars[m] == '-') {
                    m += 1;
                }
                if m < chars.len() && chars[m].is_ascii_digit() {
                    k = m;
                    while k < chars.len() && chars[k].is_ascii_digit() {
                        k += 1;
                    }
                }
            }
            let text: String = chars[start..k].iter().collect();
            out.push(Token::Num(text.parse().map_err(|_| format!("bad number '{text}'"))?));
        } else if c.is_ascii_alphabetic() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_alphabetic() {
                k += 1;
            }
            out.push(Token::Ident(chars[start..k].iter().collect()));
        } else if "+-*^()".contains(c) {
            out.push(Token::Op(c));
            k += 1;
        } else {
            return Err(format!("unexpected character '{c}'"));
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

    fn expect(&mut self, op: char) -> Result<(), String> {
        match self.next() {
            Some(Token::Op(c)) if c == op => Ok(()),
            other => Err(format!("expected '{op}', found {other:?}")),
        }
    }

    fn expr(&mut self) -> Result<Expr, String> {
        let mut lhs = self.term()?;
        while let Some(Token::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if c == '+' { Expr::Add(Box::new(lhs), Box::new(rhs)) } else { Expr::Sub(Box::new(lhs), Box::new(rhs)) };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, String> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Op('*')) => self.pos += 1,
                Some(Token::Num(_)) | Some(Token::Ident(_)) | Some(Token::Op('(')) => {}
                _ => return Ok(lhs),
            }
            let rhs = self.unary()?;
            lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr, String> {
        if self.peek() == Some(&Token::Op('-')) {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, String> {
        let base = self.atom()?;
        if self.peek() == Some(&Token::Op('^')) {
            self.pos += 1;
            return match self.next() {
                Some(Token::Num(x)) if x >= 0.0 && x.fract() == 0.0 && x <= u32::MAX as f64 => Ok(Expr::Pow(Box::new(base), x as u32)),
                other => Err(format!("exponent must be a non-negative integer, found {other:?}")),
            };
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, String> {
        match self.next() {
            Some(Token::Num(x)) => Ok(Expr::Const(Quaternion::real(x))),
            Some(Token::Op('(')) => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Token::Ident(name)) => match name.as_str() {
                "i" => Ok(Expr::Const(Quaternion::I)),
                "j" => Ok(Expr::Const(Quaternion::J)),
                "k" => Ok(Expr::Const(Quaternion::K)),
                "z" => Ok(Expr::Z),
                "zbar" => Ok(Expr::Conj(Box::new(Expr::Z))),
                "conj" | "abs" => {
                    self.expect('(')?;
                    let e = self.expr()?;
                    self.expect(')')?;
                    Ok(if name == "conj" { Expr::Conj(Box::new(e)) } else { Expr::Abs(Box::new(e)) })
                }
                _ => Err(format!("unknown name '{name}'")),
            },
            other => Err(format!("unexpected {other:?}")),
        }
    }
}

pub fn parse(s: &str) -> Result<Expr, String> {
    let mut p = Parser { tokens: tokenize(s)?, pos: 0 };
    if p.tokens.is_empty() {
        return Err("empty expression".into());
    }
    let e = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(format!("trailing input at token {}", p.pos + 1));
    }
    Ok(e)
}

/// A quaternion literal such as `1 - 0.5i + 2k`.
pub fn parse_quaternion(s: &str) -> Result<Quaternion, String> {
    let e = parse(s)?;
    if !e.is_constant() {
        return Err(format!("'{s}' is not a constant"));
    }
    Ok(e.eval(Quaternion::ZERO))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(s: &str, z: Quaternion) -> Quaternion {
        parse(s).unwrap().eval(z)
    }

    #[test]
    fn polynomials() {
        let z = Quaternion::new(0.5, 2.0, 0.0, 0.0);
        assert_eq!(at("z", z), z);
        assert_eq!(at("conj(z)", z), z.conj());
        assert_eq!(at("zbar", z), z.conj());
        assert_eq!(at("1", z), Quaternion::ONE);
        assert_eq!(at("z^2", z), z * z);
        assert_eq!(at("2z^2 - 3 z zbar + 1", z), z * z * 2.0 - z * z.conj() * 3.0 + Quaternion::ONE);
        assert_eq!(at("j z", z), Quaternion::J * z);
        assert_eq!(at("(1 + k) * conj(z)^3", z), (Quaternion::ONE + Quaternion::K) * z.conj() * z.conj() * z.conj());
        assert_eq!(at("abs(z)", z), Quaternion::real(z.norm()));
        assert_eq!(at("-z", z), -z);
        assert_eq!(at("1e-1 z", z), z * 0.1);
    }

    #[test]
    fn literals() {
        assert_eq!(parse_quaternion("1 - 0.5i + 2k").unwrap(), Quaternion::new(1.0, -0.5, 0.0, 2.0));
        assert_eq!(parse_quaternion("-j").unwrap(), -Quaternion::J);
        assert!(parse_quaternion("z").is_err());
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in ["", "z^", "z^-1", "z^1.5", "foo", "(z", "z)", "2 $ z", "conj z"] {
            assert!(parse(bad).is_err(), "{bad}");
        }
    }
}
