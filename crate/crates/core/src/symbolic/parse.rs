//! Recursive-descent parser for the plain expression grammar.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := ('-' | '+') unary | power
//! power := atom ('^' exponent)?
//! exponent := ['-' | '+'] digits | '(' ['-' | '+'] digits ')'
//! atom  := digits | ident | '(' expr ')'
//! ```

use num_bigint::BigInt;

use super::expr::Expr;
use super::{SymbolicError, Q};

/// Nesting limit for parentheses and unary operators.
pub const MAX_DEPTH: usize = 200;
/// Largest accepted exponent magnitude.
pub const MAX_EXPONENT: i32 = 1000;

pub fn parse_expr_tree(s: &str) -> Result<Expr, SymbolicError> {
    let mut p = Parser {
        src: s.as_bytes(),
        pos: 0,
        depth: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    depth: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> SymbolicError {
        SymbolicError::Syntax {
            offset: self.pos,
            message: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn enter(&mut self) -> Result<(), SymbolicError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.error("expression nested too deeply"));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, SymbolicError> {
        let mut terms = vec![self.term()?];
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    terms.push(self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    terms.push(Expr::neg(self.term()?));
                }
                _ => break,
            }
        }
        Ok(Expr::add(terms))
    }

    fn term(&mut self) -> Result<Expr, SymbolicError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = match acc {
                        Expr::Mul(mut fs) => {
                            fs.push(rhs);
                            Expr::Mul(fs)
                        }
                        other => Expr::Mul(vec![other, rhs]),
                    };
                }
                Some(b'/') => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = Expr::div(acc, rhs);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Expr, SymbolicError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.enter()?;
                let e = self.unary()?;
                self.depth -= 1;
                Ok(Expr::neg(e))
            }
            Some(b'+') => {
                self.pos += 1;
                self.enter()?;
                let e = self.unary()?;
                self.depth -= 1;
                Ok(e)
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, SymbolicError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let paren = self.peek() == Some(b'(');
        if paren {
            self.pos += 1;
        }
        let mut neg = false;
        match self.peek() {
            Some(b'-') => {
                neg = true;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        self.skip_ws();
        let start = self.pos;
        let digits = self.digits();
        if digits.is_empty() {
            return Err(self.error("expected integer exponent"));
        }
        let n: i32 = match digits.parse::<i32>() {
            Ok(n) if n <= MAX_EXPONENT => n,
            _ => {
                return Err(SymbolicError::Syntax {
                    offset: start,
                    message: format!("exponent out of range (max {MAX_EXPONENT})"),
                })
            }
        };
        if paren {
            if self.peek() != Some(b')') {
                return Err(self.error("expected ')'"));
            }
            self.pos += 1;
        }
        Ok(Expr::Pow(Box::new(base), if neg { -n } else { n }))
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<Expr, SymbolicError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                self.enter()?;
                let e = self.expr()?;
                self.depth -= 1;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits();
                let n: BigInt = d.parse().expect("digits");
                Ok(Expr::Num(Q::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                Ok(Expr::var(name))
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn offset(s: &str) -> usize {
        match parse_expr_tree(s) {
            Err(SymbolicError::Syntax { offset, .. }) => offset,
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn unclosed_paren_reports_end_offset() {
        assert_eq!(offset("1/(x"), 4);
    }

    #[test]
    fn other_syntax_errors() {
        assert_eq!(offset("x + "), 4);
        assert_eq!(offset("x $ y"), 2);
        assert_eq!(offset("x^y"), 2);
        assert_eq!(offset("(x))"), 3);
        assert!(parse_expr_tree(&"(".repeat(500)).is_err());
        assert!(parse_expr_tree("x^99999").is_err());
    }

    #[test]
    fn precedence() {
        let e = parse_expr_tree("-a^2 + 3/2*b").unwrap();
        assert_eq!(e.plain(), "-a^2 + 3/2*b");
        let e = parse_expr_tree("x^-1 * y^(2)").unwrap();
        assert_eq!(e.plain(), "x^-1*y^2");
    }
}
