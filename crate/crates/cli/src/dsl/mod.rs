//! The expression language shared by every subcommand.
//!
//! Grammar (EBNF, also in `docs/grammar.md`):
//!
//! ```text
//! sum     = product { ("+" | "-") product } ;
//! product = unary { ("*" | "/") unary } ;
//! unary   = "-" unary | power ;
//! power   = atom [ "^" integer ] ;
//! atom    = integer | decimal | coeff | "i" | zeta | var | dvar
//!         | func "(" sum { "," sum } ")" | "[" sum { "," sum } "]"
//!         | "logform" "{" sum "}" | "(" sum ")" ;
//! func    = "d" | "dlog" | "wedge" | "iv" | "lie" ;
//! ```

pub mod ast;
mod lexer;
mod parser;
mod printer;

use std::fmt;

use germcalc::coeff::FieldSpec;
use germcalc::jets::default_var_names;

pub use ast::{BinOp, Expr, ExprKind, Func, Span};
pub use printer::print;

/// A positioned parse error.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub span: Span,
    pub message: String,
}

impl Diagnostic {
    pub fn new(span: Span, message: impl Into<String>) -> Self {
        Self {
            span,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.span, self.message)
    }
}

impl std::error::Error for Diagnostic {}

/// What the parser needs to know: the number of variables and the field.
#[derive(Clone, Debug)]
pub struct ParseContext {
    pub n: usize,
    pub field: FieldSpec,
}

impl ParseContext {
    pub fn new(n: usize, field: FieldSpec) -> Self {
        Self { n, field }
    }

    /// Canonical variable names: `x, y, z` up to three variables, else `z1…`.
    pub fn names(&self) -> Vec<String> {
        default_var_names(self.n)
    }

    /// `z1…zn` always; `x, y, z` as well when `n ≤ 3`.
    pub fn var_index(&self, name: &str) -> Option<usize> {
        if self.n <= 3 {
            if let Some(i) = ["x", "y", "z"].iter().position(|v| *v == name) {
                return (i < self.n).then_some(i);
            }
        }
        let k = name.strip_prefix('z')?;
        if k.starts_with('0') {
            return None;
        }
        let k: usize = k.parse().ok()?;
        (1..=self.n).contains(&k).then(|| k - 1)
    }

    pub fn allows_decimals(&self) -> bool {
        self.field == FieldSpec::Float
    }
}

pub fn parse(src: &str, ctx: &ParseContext) -> Result<Expr, Diagnostic> {
    let toks = lexer::lex(src)?;
    parser::Parser::new(toks, ctx).parse_all()
}

#[cfg(test)]
mod tests;
