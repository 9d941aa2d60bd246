use std::fmt;

use super::ast::Pos;
use super::SyntaxError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    Keyword(Keyword),
    Punct(&'static str),
    Eof,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keyword {
    Class,
    Void,
    If,
    Else,
    While,
    For,
    Return,
    Break,
    Continue,
    True,
    False,
    Int,
    Boolean,
    Long,
    Short,
    Byte,
    Char,
    Float,
    Double,
}

impl Keyword {
    fn from_word(word: &str) -> Option<Keyword> {
        Some(match word {
            "class" => Keyword::Class,
            "void" => Keyword::Void,
            "if" => Keyword::If,
            "else" => Keyword::Else,
            "while" => Keyword::While,
            "for" => Keyword::For,
            "return" => Keyword::Return,
            "break" => Keyword::Break,
            "continue" => Keyword::Continue,
            "true" => Keyword::True,
            "false" => Keyword::False,
            "int" => Keyword::Int,
            "boolean" => Keyword::Boolean,
            "long" => Keyword::Long,
            "short" => Keyword::Short,
            "byte" => Keyword::Byte,
            "char" => Keyword::Char,
            "float" => Keyword::Float,
            "double" => Keyword::Double,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Keyword::Class => "class",
            Keyword::Void => "void",
            Keyword::If => "if",
            Keyword::Else => "else",
            Keyword::While => "while",
            Keyword::For => "for",
            Keyword::Return => "return",
            Keyword::Break => "break",
            Keyword::Continue => "continue",
            Keyword::True => "true",
            Keyword::False => "false",
            Keyword::Int => "int",
            Keyword::Boolean => "boolean",
            Keyword::Long => "long",
            Keyword::Short => "short",
            Keyword::Byte => "byte",
            Keyword::Char => "char",
            Keyword::Float => "float",
            Keyword::Double => "double",
        }
    }

    pub fn is_primitive_type(self) -> bool {
        matches!(
            self,
            Keyword::Int
                | Keyword::Boolean
                | Keyword::Long
                | Keyword::Short
                | Keyword::Byte
                | Keyword::Char
                | Keyword::Float
                | Keyword::Double
        )
    }
}

/// Java reserved words that the subset does not support.
const UNSUPPORTED_WORDS: &[&str] = &[
    "abstract",
    "assert",
    "case",
    "catch",
    "const",
    "default",
    "do",
    "enum",
    "extends",
    "final",
    "finally",
    "goto",
    "implements",
    "import",
    "instanceof",
    "interface",
    "native",
    "new",
    "null",
    "package",
    "private",
    "protected",
    "public",
    "static",
    "strictfp",
    "super",
    "switch",
    "synchronized",
    "this",
    "throw",
    "throws",
    "transient",
    "try",
    "volatile",
];

// Longest first so that maximal munch works with a linear scan.
const PUNCTS: &[&str] = &[
    "++", "--", "+=", "-=", "*=", "/=", "%=", "<=", ">=", "==", "!=", "&&", "||", "+", "-", "*", "/", "%", "<", ">",
    "=", "!", "(", ")", "{", "}", ";", ",", ":",
];

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(name) => write!(f, "identifier `{name}`"),
            Tok::Int(v) => write!(f, "integer `{v}`"),
            Tok::Keyword(k) => write!(f, "`{}`", k.as_str()),
            Tok::Punct(p) => write!(f, "`{p}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

pub fn tokenize(source: &str) -> Result<Vec<Token>, SyntaxError> {
    let mut lexer = Lexer {
        chars: source.chars().collect(),
        at: 0,
        line: 1,
        column: 1,
    };
    let mut tokens = Vec::new();
    loop {
        lexer.skip_trivia()?;
        let pos = lexer.pos();
        let Some(c) = lexer.peek(0) else {
            tokens.push(Token { tok: Tok::Eof, pos });
            return Ok(tokens);
        };
        let tok = if c.is_ascii_alphabetic() || c == '_' || c == '$' {
            let word = lexer.take_while(|c| c.is_ascii_alphanumeric() || c == '_' || c == '$');
            if let Some(k) = Keyword::from_word(&word) {
                Tok::Keyword(k)
            } else if UNSUPPORTED_WORDS.contains(&word.as_str()) {
                return Err(SyntaxError::new(
                    pos,
                    format!("keyword `{word}` is not part of the supported subset"),
                ));
            } else {
                Tok::Ident(word)
            }
        } else if c.is_ascii_digit() {
            let digits = lexer.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
            match digits.parse::<i64>() {
                Ok(v) if digits == "0" || !digits.starts_with('0') => Tok::Int(v),
                _ => return Err(SyntaxError::new(pos, format!("unsupported integer literal `{digits}`"))),
            }
        } else if let Some(p) = PUNCTS.iter().find(|p| lexer.starts_with(p)) {
            for _ in 0..p.len() {
                lexer.bump();
            }
            Tok::Punct(p)
        } else {
            return Err(SyntaxError::new(pos, format!("unexpected character `{c}`")));
        };
        tokens.push(Token { tok, pos });
    }
}

struct Lexer {
    chars: Vec<char>,
    at: usize,
    line: u32,
    column: u32,
}

impl Lexer {
    fn pos(&self) -> Pos {
        Pos::new(self.line, self.column)
    }

    fn peek(&self, ahead: usize) -> Option<char> {
        self.chars.get(self.at + ahead).copied()
    }

    fn starts_with(&self, s: &str) -> bool {
        s.chars().enumerate().all(|(i, c)| self.peek(i) == Some(c))
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek(0)?;
        self.at += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek(0).filter(|&c| pred(c)) {
            out.push(c);
            self.bump();
        }
        out
    }

    fn skip_trivia(&mut self) -> Result<(), SyntaxError> {
        loop {
            match self.peek(0) {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('/') if self.peek(1) == Some('/') => {
                    while self.peek(0).is_some_and(|c| c != '\n') {
                        self.bump();
                    }
                }
                Some('/') if self.peek(1) == Some('*') => {
                    let start = self.pos();
                    self.bump();
                    self.bump();
                    loop {
                        if self.starts_with("*/") {
                            self.bump();
                            self.bump();
                            break;
                        }
                        if self.bump().is_none() {
                            return Err(SyntaxError::new(start, "unterminated block comment"));
                        }
                    }
                }
                _ => return Ok(()),
            }
        }
    }
}
