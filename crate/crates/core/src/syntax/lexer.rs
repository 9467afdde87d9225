//! Tokenizer shared by the program, expectation, domain and state parsers.

use super::ParseError;
use num::BigRational;
use num::bigint::BigInt;

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    Number(BigRational),
    // keywords
    Skip,
    If,
    Else,
    While,
    Unif,
    In,
    Inf,
    True,
    False,
    And,
    Or,
    Not,
    Min,
    Max,
    Abs,
    Harm,
    // punctuation
    Assign, // :=
    Semi,
    Comma,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    DotDot,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Percent,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{}`", s),
            Tok::Number(n) => format!("number `{}`", n),
            Tok::Eof => "end of input".to_string(),
            Tok::Assign => "`:=`".to_string(),
            Tok::Semi => "`;`".to_string(),
            Tok::Comma => "`,`".to_string(),
            Tok::LParen => "`(`".to_string(),
            Tok::RParen => "`)`".to_string(),
            Tok::LBrace => "`{`".to_string(),
            Tok::RBrace => "`}`".to_string(),
            Tok::LBracket => "`[`".to_string(),
            Tok::RBracket => "`]`".to_string(),
            Tok::DotDot => "`..`".to_string(),
            Tok::Plus => "`+`".to_string(),
            Tok::Minus => "`-`".to_string(),
            Tok::Star => "`*`".to_string(),
            Tok::Slash => "`/`".to_string(),
            Tok::Caret => "`^`".to_string(),
            Tok::Percent => "`%`".to_string(),
            Tok::Lt => "`<`".to_string(),
            Tok::Le => "`<=`".to_string(),
            Tok::Gt => "`>`".to_string(),
            Tok::Ge => "`>=`".to_string(),
            Tok::Eq => "`=`".to_string(),
            Tok::Ne => "`!=`".to_string(),
            other => format!("`{:?}`", other).to_lowercase(),
        }
    }
}

/// Source position, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl std::fmt::Display for Span {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone)]
pub struct SpannedTok {
    pub tok: Tok,
    pub span: Span,
}

pub fn lex(src: &str) -> Result<Vec<SpannedTok>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    let mut line: u32 = 1;
    let mut col: u32 = 1;

    macro_rules! push {
        ($tok:expr, $span:expr) => {
            out.push(SpannedTok { tok: $tok, span: $span })
        };
    }

    while i < chars.len() {
        let c = chars[i];
        let span = Span { line, col };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '#' => {
                // comment to end of line
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '/' if i + 1 < chars.len() && chars[i + 1] == '/' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_ascii_alphanumeric() || chars[i] == '_')
                {
                    i += 1;
                    col += 1;
                }
                let word: String = chars[start..i].iter().collect();
                let tok = match word.as_str() {
                    "skip" => Tok::Skip,
                    "if" => Tok::If,
                    "else" => Tok::Else,
                    "while" => Tok::While,
                    "unif" => Tok::Unif,
                    "in" => Tok::In,
                    "inf" => Tok::Inf,
                    "true" => Tok::True,
                    "false" => Tok::False,
                    "and" => Tok::And,
                    "or" => Tok::Or,
                    "not" => Tok::Not,
                    "min" => Tok::Min,
                    "max" => Tok::Max,
                    "abs" => Tok::Abs,
                    "harm" => Tok::Harm,
                    _ => Tok::Ident(word),
                };
                push!(tok, span);
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                    col += 1;
                }
                // Decimal fraction — but `1..3` is a range, not `1.` `.3`.
                let mut num = if i + 1 < chars.len()
                    && chars[i] == '.'
                    && chars[i + 1].is_ascii_digit()
                {
                    i += 1;
                    col += 1;
                    let frac_start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                        col += 1;
                    }
                    let int_part: String = chars[start..frac_start - 1].iter().collect();
                    let frac_part: String = chars[frac_start..i].iter().collect();
                    let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
                    let numer: BigInt = format!("{}{}", int_part, frac_part)
                        .parse()
                        .expect("digits");
                    BigRational::new(numer, denom)
                } else {
                    let digits: String = chars[start..i].iter().collect();
                    BigRational::from_integer(digits.parse::<BigInt>().expect("digits"))
                };
                // normalize (BigRational::new already reduces)
                if num.denom() < &BigInt::from(0) {
                    num = -num;
                }
                push!(Tok::Number(num), span);
            }
            ':' => {
                if i + 1 < chars.len() && chars[i + 1] == '=' {
                    i += 2;
                    col += 2;
                    push!(Tok::Assign, span);
                } else {
                    return Err(ParseError::UnexpectedChar { ch: ':', span });
                }
            }
            ';' => {
                i += 1;
                col += 1;
                push!(Tok::Semi, span);
            }
            ',' => {
                i += 1;
                col += 1;
                push!(Tok::Comma, span);
            }
            '(' => {
                i += 1;
                col += 1;
                push!(Tok::LParen, span);
            }
            ')' => {
                i += 1;
                col += 1;
                push!(Tok::RParen, span);
            }
            '{' => {
                i += 1;
                col += 1;
                push!(Tok::LBrace, span);
            }
            '}' => {
                i += 1;
                col += 1;
                push!(Tok::RBrace, span);
            }
            '[' => {
                i += 1;
                col += 1;
                push!(Tok::LBracket, span);
            }
            ']' => {
                i += 1;
                col += 1;
                push!(Tok::RBracket, span);
            }
            '.' => {
                if i + 1 < chars.len() && chars[i + 1] == '.' {
                    i += 2;
                    col += 2;
                    push!(Tok::DotDot, span);
                } else {
                    return Err(ParseError::UnexpectedChar { ch: '.', span });
                }
            }
            '+' => {
                i += 1;
                col += 1;
                push!(Tok::Plus, span);
            }
            '-' => {
                i += 1;
                col += 1;
                push!(Tok::Minus, span);
            }
            '*' => {
                i += 1;
                col += 1;
                push!(Tok::Star, span);
            }
            '/' => {
                i += 1;
                col += 1;
                push!(Tok::Slash, span);
            }
            '^' => {
                i += 1;
                col += 1;
                push!(Tok::Caret, span);
            }
            '%' => {
                i += 1;
                col += 1;
                push!(Tok::Percent, span);
            }
            '<' => {
                if i + 1 < chars.len() && chars[i + 1] == '=' {
                    i += 2;
                    col += 2;
                    push!(Tok::Le, span);
                } else {
                    i += 1;
                    col += 1;
                    push!(Tok::Lt, span);
                }
            }
            '>' => {
                if i + 1 < chars.len() && chars[i + 1] == '=' {
                    i += 2;
                    col += 2;
                    push!(Tok::Ge, span);
                } else {
                    i += 1;
                    col += 1;
                    push!(Tok::Gt, span);
                }
            }
            '=' => {
                i += 1;
                col += 1;
                push!(Tok::Eq, span);
            }
            '!' => {
                if i + 1 < chars.len() && chars[i + 1] == '=' {
                    i += 2;
                    col += 2;
                    push!(Tok::Ne, span);
                } else {
                    return Err(ParseError::UnexpectedChar { ch: '!', span });
                }
            }
            other => return Err(ParseError::UnexpectedChar { ch: other, span }),
        }
    }
    out.push(SpannedTok {
        tok: Tok::Eof,
        span: Span { line, col },
    });
    Ok(out)
}
