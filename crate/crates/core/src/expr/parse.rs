use super::Expr;
use crate::error::{Error, Result};

/// Parses a functor expression.
///
/// ```text
/// expr := term ('(*)' term)*
/// term := atom | func '(' args ')'
/// atom := 'S^' k | 'G^' k | 'T^' k | 'I' | 'frob(' r ')'
/// ```
pub fn parse(text: &str) -> Result<Expr> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
    };
    p.skip_ws();
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error_at(&self, pos: usize, message: impl Into<String>) -> Error {
        let mut line = 1;
        let mut column = 1;
        for &c in &self.chars[..pos.min(self.chars.len())] {
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        }
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        self.error_at(self.pos, message)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    /// Consumes a `(*)` or `⊗` operator if present.
    fn tensor_op(&mut self) -> bool {
        self.skip_ws();
        if self.peek() == Some('⊗') {
            self.pos += 1;
            return true;
        }
        if self.peek() != Some('(') {
            return false;
        }
        let save = self.pos;
        self.pos += 1;
        self.skip_ws();
        if self.peek() == Some('*') {
            self.pos += 1;
            self.skip_ws();
            if self.peek() == Some(')') {
                self.pos += 1;
                return true;
            }
        }
        self.pos = save;
        false
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut e = self.term()?;
        while self.tensor_op() {
            let rhs = self.term()?;
            e = Expr::tensor(e, rhs);
        }
        Ok(e)
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_' || c == 'Γ')
        {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn number(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a nonnegative integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse()
            .map_err(|_| self.error_at(start, "integer out of range"))
    }

    fn power(&mut self) -> Result<u32> {
        self.expect('^')?;
        self.number()
    }

    fn term(&mut self) -> Result<Expr> {
        self.skip_ws();
        let start = self.pos;
        let name = self.ident();
        match name.as_str() {
            "" => Err(self.error("expected a functor")),
            "S" => Ok(Expr::Sym(self.power()?)),
            "G" | "Γ" => Ok(Expr::Div(self.power()?)),
            "T" => Ok(Expr::Tens(self.power()?)),
            "I" => Ok(Expr::Id),
            "frob" => {
                self.expect('(')?;
                let r = self.number()?;
                self.expect(')')?;
                Ok(Expr::Frob(r))
            }
            "dual" => {
                self.expect('(')?;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(Expr::dual(e))
            }
            "twist" | "param_sub" | "param_sup" => {
                self.expect('(')?;
                let e = self.expr()?;
                self.expect(',')?;
                let k = self.number()?;
                self.expect(')')?;
                Ok(match name.as_str() {
                    "twist" => Expr::twist(e, k),
                    "param_sub" => Expr::param_sub(e, k),
                    _ => Expr::param_sup(e, k),
                })
            }
            "compose" => {
                self.expect('(')?;
                let a = self.expr()?;
                self.expect(',')?;
                let b = self.expr()?;
                self.expect(')')?;
                Ok(Expr::compose(a, b))
            }
            other => Err(self.error_at(start, format!("unknown functor '{other}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(parse("S^2").unwrap(), Expr::Sym(2));
        assert_eq!(
            parse("dual(G^2) (*) I").unwrap(),
            Expr::Tensor(vec![Expr::dual(Expr::Div(2)), Expr::Id])
        );
        assert_eq!(parse(" twist( S^2 ,1 ) ").unwrap(), Expr::twist(Expr::Sym(2), 1));
        assert_eq!(parse("Γ^2⊗I").unwrap(), Expr::tensor(Expr::Div(2), Expr::Id));
        assert_eq!(
            parse("I (*) I (*) S^1").unwrap(),
            Expr::Tensor(vec![Expr::Id, Expr::Id, Expr::Sym(1)])
        );
    }

    #[test]
    fn error_positions() {
        let pos = |s: &str| match parse(s) {
            Err(Error::Parse { line, column, .. }) => (line, column),
            other => panic!("expected parse error, got {other:?}"),
        };
        assert_eq!(pos("S^"), (1, 3));
        assert_eq!(pos("Q^2"), (1, 1));
        assert_eq!(pos("S^2 (*)"), (1, 8));
        assert_eq!(pos("dual(S^2"), (1, 9));
        assert_eq!(pos("S^2\n  (*) X"), (2, 7));
        assert_eq!(pos("S^2 S^2"), (1, 5));
    }
}
