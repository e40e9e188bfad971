use super::PddlError;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum SExpr {
    Word {
        text: String,
        line: usize,
        col: usize,
    },
    List {
        items: Vec<SExpr>,
        line: usize,
        col: usize,
    },
}

impl SExpr {
    pub fn pos(&self) -> (usize, usize) {
        match self {
            SExpr::Word { line, col, .. } | SExpr::List { line, col, .. } => (*line, *col),
        }
    }

    pub fn word(&self) -> Option<&str> {
        match self {
            SExpr::Word { text, .. } => Some(text),
            SExpr::List { .. } => None,
        }
    }

    pub fn list(&self) -> Option<&[SExpr]> {
        match self {
            SExpr::List { items, .. } => Some(items),
            SExpr::Word { .. } => None,
        }
    }

    /// Lowercased head word of a list, if any.
    pub fn head(&self) -> Option<String> {
        self.list()?.first()?.word().map(|w| w.to_ascii_lowercase())
    }

    pub fn error(&self, message: impl Into<String>) -> PddlError {
        let (line, col) = self.pos();
        PddlError::Syntax {
            line,
            col,
            message: message.into(),
        }
    }

    pub fn unsupported(&self, construct: impl Into<String>) -> PddlError {
        let (line, col) = self.pos();
        PddlError::Unsupported {
            construct: construct.into(),
            line,
            col,
        }
    }
}

/// Reads exactly one top-level s-expression; `;` starts a line comment.
pub(crate) fn read(text: &str) -> Result<SExpr, PddlError> {
    let mut stack: Vec<(Vec<SExpr>, usize, usize)> = Vec::new();
    let mut done: Option<SExpr> = None;
    let (mut line, mut col) = (1usize, 1usize);
    let mut chars = text.chars().peekable();
    let mut word = String::new();
    let mut word_pos = (0, 0);

    let flush = |word: &mut String,
                 pos: (usize, usize),
                 stack: &mut Vec<(Vec<SExpr>, usize, usize)>,
                 done: &Option<SExpr>|
     -> Result<(), PddlError> {
        if word.is_empty() {
            return Ok(());
        }
        let w = SExpr::Word {
            text: std::mem::take(word),
            line: pos.0,
            col: pos.1,
        };
        match stack.last_mut() {
            Some((items, _, _)) if done.is_none() => {
                items.push(w);
                Ok(())
            }
            _ => Err(w.error("expected `(`")),
        }
    };

    while let Some(c) = chars.next() {
        let here = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
        match c {
            ';' => {
                flush(&mut word, word_pos, &mut stack, &done)?;
                while let Some(&n) = chars.peek() {
                    if n == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
            }
            '(' => {
                flush(&mut word, word_pos, &mut stack, &done)?;
                if done.is_some() {
                    return Err(syntax(here, "trailing input after the definition"));
                }
                stack.push((Vec::new(), here.0, here.1));
            }
            ')' => {
                flush(&mut word, word_pos, &mut stack, &done)?;
                let (items, l, c0) = stack.pop().ok_or_else(|| syntax(here, "unbalanced `)`"))?;
                let e = SExpr::List {
                    items,
                    line: l,
                    col: c0,
                };
                match stack.last_mut() {
                    Some((parent, _, _)) => parent.push(e),
                    None => done = Some(e),
                }
            }
            c if c.is_whitespace() => flush(&mut word, word_pos, &mut stack, &done)?,
            c => {
                if word.is_empty() {
                    word_pos = here;
                }
                word.push(c);
            }
        }
    }
    flush(&mut word, word_pos, &mut stack, &done)?;
    if let Some((_, l, c)) = stack.last() {
        return Err(syntax((*l, *c), "unclosed `(`"));
    }
    done.ok_or_else(|| syntax((line, col), "empty input"))
}

fn syntax((line, col): (usize, usize), message: &str) -> PddlError {
    PddlError::Syntax {
        line,
        col,
        message: message.to_string(),
    }
}
