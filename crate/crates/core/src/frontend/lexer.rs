use std::fmt;

/// 1-based source position.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Token {
    Ident(String),
    Nat(usize),
    /// `#name` directive head.
    Hash(String),
    KwType,
    KwMvar,
    Colon,
    Dot,
    Comma,
    Caret,
    Arrow,
    Turnstile,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Eof,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Ident(s) => write!(f, "identifier `{s}`"),
            Token::Nat(n) => write!(f, "number `{n}`"),
            Token::Hash(s) => write!(f, "directive `#{s}`"),
            Token::KwType => f.write_str("`type`"),
            Token::KwMvar => f.write_str("`mvar`"),
            Token::Colon => f.write_str("`:`"),
            Token::Dot => f.write_str("`.`"),
            Token::Comma => f.write_str("`,`"),
            Token::Caret => f.write_str("`^`"),
            Token::Arrow => f.write_str("`->`"),
            Token::Turnstile => f.write_str("`|-`"),
            Token::LBrace => f.write_str("`{`"),
            Token::RBrace => f.write_str("`}`"),
            Token::LBracket => f.write_str("`[`"),
            Token::RBracket => f.write_str("`]`"),
            Token::LParen => f.write_str("`(`"),
            Token::RParen => f.write_str("`)`"),
            Token::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Lexed {
    pub tok: Token,
    pub pos: Pos,
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\'' || c == '/'
}

pub fn lex(text: &str) -> Result<Vec<Lexed>, super::ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line: u32 = 1;
    let mut col: u32 = 1;

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if let Some(c) = c {
                if c == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
            }
            c
        }};
    }

    loop {
        let pos = Pos { line, col };
        let c = match chars.peek().copied() {
            Some(c) => c,
            None => {
                out.push(Lexed {
                    tok: Token::Eof,
                    pos,
                });
                return Ok(out);
            }
        };
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '%' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                bump!();
            }
            continue;
        }
        let tok = match c {
            ':' => {
                bump!();
                Token::Colon
            }
            '.' => {
                bump!();
                Token::Dot
            }
            ',' => {
                bump!();
                Token::Comma
            }
            '^' => {
                bump!();
                Token::Caret
            }
            '{' => {
                bump!();
                Token::LBrace
            }
            '}' => {
                bump!();
                Token::RBrace
            }
            '[' => {
                bump!();
                Token::LBracket
            }
            ']' => {
                bump!();
                Token::RBracket
            }
            '(' => {
                bump!();
                Token::LParen
            }
            ')' => {
                bump!();
                Token::RParen
            }
            '-' => {
                bump!();
                match chars.peek() {
                    Some('>') => {
                        bump!();
                        Token::Arrow
                    }
                    _ => {
                        return Err(super::ParseError::new(pos, "expected `->`".to_owned()));
                    }
                }
            }
            '|' => {
                bump!();
                match chars.peek() {
                    Some('-') => {
                        bump!();
                        Token::Turnstile
                    }
                    _ => {
                        return Err(super::ParseError::new(pos, "expected `|-`".to_owned()));
                    }
                }
            }
            '#' => {
                bump!();
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if is_ident_continue(c) {
                        name.push(c);
                        bump!();
                    } else {
                        break;
                    }
                }
                if name.is_empty() {
                    return Err(super::ParseError::new(
                        pos,
                        "expected directive name after `#`".to_owned(),
                    ));
                }
                Token::Hash(name)
            }
            c if c.is_ascii_digit() => {
                let mut n: usize = 0;
                while let Some(&c) = chars.peek() {
                    if let Some(d) = c.to_digit(10) {
                        n = n * 10 + d as usize;
                        bump!();
                    } else {
                        break;
                    }
                }
                Token::Nat(n)
            }
            c if is_ident_start(c) => {
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if is_ident_continue(c) {
                        name.push(c);
                        bump!();
                    } else {
                        break;
                    }
                }
                match name.as_str() {
                    "type" => Token::KwType,
                    "mvar" => Token::KwMvar,
                    _ => Token::Ident(name),
                }
            }
            other => {
                return Err(super::ParseError::new(
                    pos,
                    format!("unexpected character `{other}`"),
                ));
            }
        };
        out.push(Lexed { tok, pos });
    }
}
