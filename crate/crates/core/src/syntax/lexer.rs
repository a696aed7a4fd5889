use super::{Diagnostic, Pos};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Name(String),
    Var(String),
    Int(i64),
    LParen,
    RParen,
    Comma,
    Semi,
    /// Statement terminator.
    Dot,
    DotDot,
    Dollar,
    /// `<-`
    If,
    /// `=>`
    Implies,
    Eq,
    Neq,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    Minus,
    Star,
    ColonColon,
    /// `->`
    Arrow,
    /// `\+`
    NotOp,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Name(n) => format!("name `{}`", n),
            Tok::Var(v) => format!("variable `{}`", v),
            Tok::Int(n) => format!("integer `{}`", n),
            Tok::Eof => "end of input".to_string(),
            other => format!("`{}`", other.text()),
        }
    }

    pub(crate) fn text(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::Dot => ".",
            Tok::DotDot => "..",
            Tok::Dollar => "$",
            Tok::If => "<-",
            Tok::Implies => "=>",
            Tok::Eq => "=",
            Tok::Neq => "\\=",
            Tok::Lt => "<",
            Tok::Le => "=<",
            Tok::Gt => ">",
            Tok::Ge => ">=",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::ColonColon => "::",
            Tok::Arrow => "->",
            Tok::NotOp => "\\+",
            Tok::Name(_) => "name",
            Tok::Var(_) => "variable",
            Tok::Int(_) => "integer",
            Tok::Eof => "end of input",
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>, Diagnostic> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, n: usize| {
        for k in 0..n {
            if chars[*i + k] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
        }
        *i += n;
    };
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, 1);
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col, 1);
            }
            continue;
        }
        let next = chars.get(i + 1).copied();
        let (tok, len) = if c.is_ascii_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            let word: String = chars[i..j].iter().collect();
            let tok = if c.is_ascii_uppercase() || c == '_' { Tok::Var(word) } else { Tok::Name(word) };
            (tok, j - i)
        } else if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let text: String = chars[i..j].iter().collect();
            let n = text
                .parse::<i64>()
                .map_err(|_| Diagnostic::error(pos, format!("integer literal `{}` out of range", text)))?;
            (Tok::Int(n), j - i)
        } else {
            match (c, next) {
                ('<', Some('-')) => (Tok::If, 2),
                ('<', Some('=')) => (Tok::Le, 2),
                ('<', _) => (Tok::Lt, 1),
                ('=', Some('>')) => (Tok::Implies, 2),
                ('=', Some('<')) => (Tok::Le, 2),
                ('=', _) => (Tok::Eq, 1),
                ('>', Some('=')) => (Tok::Ge, 2),
                ('>', _) => (Tok::Gt, 1),
                ('\\', Some('=')) => (Tok::Neq, 2),
                ('\\', Some('+')) => (Tok::NotOp, 2),
                ('-', Some('>')) => (Tok::Arrow, 2),
                ('-', _) => (Tok::Minus, 1),
                ('+', _) => (Tok::Plus, 1),
                ('*', _) => (Tok::Star, 1),
                (':', Some(':')) => (Tok::ColonColon, 2),
                ('.', Some('.')) => (Tok::DotDot, 2),
                ('.', _) => (Tok::Dot, 1),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                (',', _) => (Tok::Comma, 1),
                (';', _) => (Tok::Semi, 1),
                ('$', _) => (Tok::Dollar, 1),
                _ => return Err(Diagnostic::error(pos, format!("unexpected character `{}`", c))),
            }
        };
        out.push(Token { tok, pos });
        advance(&mut i, &mut line, &mut col, len);
    }
    out.push(Token { tok: Tok::Eof, pos: Pos { line, col } });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_and_terminators() {
        let toks: Vec<Tok> = tokenize("X in 1..N. dim(8) <- true.").unwrap().into_iter().map(|t| t.tok).collect();
        assert_eq!(
            toks,
            vec![
                Tok::Var("X".into()),
                Tok::Name("in".into()),
                Tok::Int(1),
                Tok::DotDot,
                Tok::Var("N".into()),
                Tok::Dot,
                Tok::Name("dim".into()),
                Tok::LParen,
                Tok::Int(8),
                Tok::RParen,
                Tok::If,
                Tok::Name("true".into()),
                Tok::Dot,
                Tok::Eof,
            ]
        );
    }

    #[test]
    fn comments_and_operators() {
        let toks: Vec<Tok> =
            tokenize("% comment\nA \\= B => C =< D").unwrap().into_iter().map(|t| t.tok).collect();
        assert_eq!(toks[1], Tok::Neq);
        assert_eq!(toks[3], Tok::Implies);
        assert_eq!(toks[5], Tok::Le);
        assert!(tokenize("p(#)").is_err());
    }
}
