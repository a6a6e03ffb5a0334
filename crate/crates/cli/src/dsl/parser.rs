use super::ast::{BinOp, Expr, ExprKind, Func, Span};
use super::lexer::{Tok, Token};
use super::{Diagnostic, ParseContext};

const MAX_DEPTH: usize = 200;

pub struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    depth: usize,
    ctx: &'a ParseContext,
}

impl<'a> Parser<'a> {
    pub fn new(toks: Vec<Token>, ctx: &'a ParseContext) -> Self {
        Self { toks, pos: 0, depth: 0, ctx }
    }

    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Span, Diagnostic> {
        let t = self.peek();
        if t.tok == tok {
            Ok(self.bump().span)
        } else {
            Err(Diagnostic::new(t.span, format!("expected {what}, found {}", t.tok.describe())))
        }
    }

    pub fn parse_all(&mut self) -> Result<Expr, Diagnostic> {
        let e = self.sum()?;
        let t = self.peek();
        if t.tok != Tok::Eof {
            return Err(Diagnostic::new(t.span, format!("unexpected {} after expression", t.tok.describe())));
        }
        Ok(e)
    }

    fn enter(&mut self, span: Span) -> Result<(), Diagnostic> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(Diagnostic::new(span, "expression nested too deeply"));
        }
        Ok(())
    }

    fn sum(&mut self) -> Result<Expr, Diagnostic> {
        let span = self.peek().span;
        self.enter(span)?;
        let mut lhs = self.product()?;
        loop {
            let op = match self.peek().tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            self.bump();
            let rhs = self.product()?;
            lhs = Expr::new(ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), span);
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Expr, Diagnostic> {
        let span = self.peek().span;
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek().tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => break,
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::new(ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, Diagnostic> {
        let span = self.peek().span;
        if self.peek().tok == Tok::Minus {
            self.bump();
            self.enter(span)?;
            let inner = self.unary()?;
            self.depth -= 1;
            return Ok(Expr::new(ExprKind::Neg(Box::new(inner)), span));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, Diagnostic> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let t = self.bump();
        match t.tok {
            Tok::Int(s) => {
                let k: u32 = s
                    .parse()
                    .map_err(|_| Diagnostic::new(t.span, format!("exponent `{s}` is too large")))?;
                let span = base.span;
                Ok(Expr::new(ExprKind::Pow(Box::new(base), k), span))
            }
            other => Err(Diagnostic::new(
                t.span,
                format!("expected a non-negative integer exponent, found {}", other.describe()),
            )),
        }
    }

    fn args(&mut self, close: Tok, what: &str) -> Result<Vec<Expr>, Diagnostic> {
        let mut out = vec![self.sum()?];
        while self.peek().tok == Tok::Comma {
            self.bump();
            out.push(self.sum()?);
        }
        self.expect(close, what)?;
        Ok(out)
    }

    fn atom(&mut self) -> Result<Expr, Diagnostic> {
        let t = self.bump();
        let span = t.span;
        let kind = match t.tok {
            Tok::Int(s) => ExprKind::Int(s),
            Tok::Decimal(s) => {
                if !self.ctx.allows_decimals() {
                    return Err(Diagnostic::new(span, format!("decimal `{s}` needs --field f64")));
                }
                ExprKind::Decimal(s)
            }
            Tok::Coeff(s) => ExprKind::Coeff(s),
            Tok::LParen => {
                let e = self.sum()?;
                self.expect(Tok::RParen, "`)`")?;
                return Ok(e);
            }
            Tok::LBracket => ExprKind::Tuple(self.args(Tok::RBracket, "`,` or `]`")?),
            Tok::Ident(name) => return self.ident(name, span),
            other => {
                return Err(Diagnostic::new(span, format!("expected expression, found {}", other.describe())));
            }
        };
        Ok(Expr::new(kind, span))
    }

    fn ident(&mut self, name: String, span: Span) -> Result<Expr, Diagnostic> {
        if let Some(f) = Func::from_name(&name) {
            if self.peek().tok == Tok::LParen {
                self.bump();
                let args = self.args(Tok::RParen, "`,` or `)`")?;
                let (lo, hi) = f.arity();
                if args.len() < lo || args.len() > hi {
                    let want = match (lo, hi) {
                        (a, b) if a == b => format!("{a}"),
                        (a, _) => format!("at least {a}"),
                    };
                    return Err(Diagnostic::new(
                        span,
                        format!("`{}` takes {want} argument(s), got {}", f.name(), args.len()),
                    ));
                }
                return Ok(Expr::new(ExprKind::Call(f, args), span));
            }
        }
        if name == "logform" && *self.peek_at(0) == Tok::LBrace {
            self.bump();
            let body = self.sum()?;
            self.expect(Tok::RBrace, "`}`")?;
            return Ok(Expr::new(ExprKind::LogForm(Box::new(body)), span));
        }
        if name == "i" {
            return Ok(Expr::new(ExprKind::ImagUnit, span));
        }
        if let Some(m) = name.strip_prefix("zeta") {
            return match m.parse::<u64>() {
                Ok(k) if k > 0 && !m.starts_with('0') => Ok(Expr::new(ExprKind::Zeta(k), span)),
                _ => Err(Diagnostic::new(span, format!("`{name}` is not a root of unity `zetaM` with M ≥ 1"))),
            };
        }
        if let Some(i) = self.ctx.var_index(&name) {
            return Ok(Expr::new(ExprKind::Var(i), span));
        }
        if let Some(i) = name.strip_prefix('d').and_then(|v| self.ctx.var_index(v)) {
            return Ok(Expr::new(ExprKind::Differential(i), span));
        }
        Err(Diagnostic::new(
            span,
            format!("unknown name `{name}` (variables: {})", self.ctx.names().join(", ")),
        ))
    }
}
