use super::ast::Span;
use super::Diagnostic;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Int(String),
    Decimal(String),
    Coeff(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Int(s) | Tok::Decimal(s) => format!("number `{s}`"),
            Tok::Coeff(s) => format!("coefficient `{s}`"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Eof => "end of input".into(),
            t => format!("`{}`", t.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Caret => "^",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Comma => ",",
            _ => "",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

/// Length of an unsigned rational or decimal at the start of `s`.
fn number_len(s: &[char]) -> usize {
    let digits = |from: usize| s[from..].iter().take_while(|c| c.is_ascii_digit()).count();
    let mut k = digits(0);
    if k == 0 {
        return 0;
    }
    if s.get(k) == Some(&'/') && digits(k + 1) > 0 {
        return k + 1 + digits(k + 1);
    }
    if s.get(k) == Some(&'.') && digits(k + 1) > 0 {
        k += 1 + digits(k + 1);
    }
    k + exponent_len(&s[k..])
}

fn exponent_len(s: &[char]) -> usize {
    if !matches!(s.first(), Some('e' | 'E')) {
        return 0;
    }
    let sign = usize::from(matches!(s.get(1), Some('+' | '-')));
    let d = s[1 + sign..].iter().take_while(|c| c.is_ascii_digit()).count();
    if d == 0 {
        0
    } else {
        1 + sign + d
    }
}

/// Whether `s` is a printed complex coefficient `[-]a±b(i|j)`.
fn is_complex_literal(s: &[char]) -> bool {
    let mut k = usize::from(s.first() == Some(&'-'));
    let a = number_len(&s[k..]);
    if a == 0 {
        return false;
    }
    k += a;
    if !matches!(s.get(k), Some('+' | '-')) {
        return false;
    }
    k += 1;
    let b = number_len(&s[k..]);
    if b == 0 {
        return false;
    }
    k += b;
    k + 1 == s.len() && matches!(s[k], 'i' | 'j')
}

pub fn lex(src: &str) -> Result<Vec<Token>, Diagnostic> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1u32, 1u32);
    let mut k = 0;
    let advance = |k: &mut usize, line: &mut u32, col: &mut u32, count: usize| {
        for _ in 0..count {
            if chars[*k] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            *k += 1;
        }
    };
    while k < chars.len() {
        let c = chars[k];
        let span = Span { line, col };
        if c.is_whitespace() {
            advance(&mut k, &mut line, &mut col, 1);
            continue;
        }
        let (tok, len) = if c.is_ascii_digit() {
            let digits = chars[k..].iter().take_while(|c| c.is_ascii_digit()).count();
            let mut len = digits;
            let mut decimal = false;
            if chars.get(k + len) == Some(&'.') {
                let frac = chars[k + len + 1..].iter().take_while(|c| c.is_ascii_digit()).count();
                if frac == 0 {
                    return Err(Diagnostic::new(span, "expected digits after the decimal point"));
                }
                len += 1 + frac;
                decimal = true;
            }
            let e = exponent_len(&chars[k + len..]);
            len += e;
            decimal |= e > 0;
            let text: String = chars[k..k + len].iter().collect();
            (if decimal { Tok::Decimal(text) } else { Tok::Int(text) }, len)
        } else if c.is_ascii_alphabetic() || c == '_' {
            let len = chars[k..].iter().take_while(|c| c.is_ascii_alphanumeric() || **c == '_').count();
            let text: String = chars[k..k + len].iter().collect();
            if text == "poly" && chars.get(k + len) == Some(&'(') {
                match chars[k + len..].iter().position(|&c| c == ')') {
                    Some(close) => {
                        let total = len + close + 1;
                        (Tok::Coeff(chars[k..k + total].iter().collect()), total)
                    }
                    None => return Err(Diagnostic::new(span, "unclosed `poly(`")),
                }
            } else {
                (Tok::Ident(text), len)
            }
        } else if c == '(' {
            let close = chars[k + 1..].iter().position(|&c| c == ')');
            match close {
                Some(close) if is_complex_literal(&chars[k + 1..k + 1 + close]) => {
                    (Tok::Coeff(chars[k..k + close + 2].iter().collect()), close + 2)
                }
                _ => (Tok::LParen, 1),
            }
        } else {
            let tok = match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                ')' => Tok::RParen,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                ',' => Tok::Comma,
                other => return Err(Diagnostic::new(span, format!("unexpected character `{other}`"))),
            };
            (tok, 1)
        };
        out.push(Token { tok, span });
        advance(&mut k, &mut line, &mut col, len);
    }
    out.push(Token {
        tok: Tok::Eof,
        span: Span { line, col },
    });
    Ok(out)
}
