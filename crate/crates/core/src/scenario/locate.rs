//! Maps JSON pointers back to line and column positions in source text.

/// 1-based line and column (in characters) of the value at `pointer`, or of
/// the deepest enclosing value that exists.
pub fn locate(text: &str, pointer: &str) -> Option<(usize, usize)> {
    let segments: Vec<String> = if pointer.is_empty() {
        Vec::new()
    } else {
        pointer
            .strip_prefix('/')?
            .split('/')
            .map(|s| s.replace("~1", "/").replace("~0", "~"))
            .collect()
    };
    let mut sc = Scanner {
        s: text.as_bytes(),
        i: 0,
        depth: 0,
    };
    sc.ws();
    let offset = sc.find(&segments)?;
    Some(line_col(text, offset))
}

/// 1-based line and column of a byte offset.
pub fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text.as_bytes()[..offset];
    let line = before.iter().filter(|&&b| b == b'\n').count() + 1;
    let line_start = before.iter().rposition(|&b| b == b'\n').map_or(0, |p| p + 1);
    let col = String::from_utf8_lossy(&before[line_start..]).chars().count() + 1;
    (line, col)
}

/// Escapes one pointer segment.
pub fn escape(segment: &str) -> String {
    segment.replace('~', "~0").replace('/', "~1")
}

struct Scanner<'a> {
    s: &'a [u8],
    i: usize,
    depth: usize,
}

impl Scanner<'_> {
    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.i).copied()
    }

    /// Offset of the value reached by `path` from the value at the cursor.
    fn find(&mut self, path: &[String]) -> Option<usize> {
        let here = self.i;
        let Some((seg, rest)) = path.split_first() else {
            return Some(here);
        };
        match self.peek()? {
            b'{' => {
                self.i += 1;
                loop {
                    self.ws();
                    if self.peek()? == b'}' {
                        return Some(here);
                    }
                    let key_start = self.i;
                    self.skip_string()?;
                    let key: String = serde_json::from_slice(&self.s[key_start..self.i]).ok()?;
                    self.ws();
                    if self.peek()? != b':' {
                        return Some(here);
                    }
                    self.i += 1;
                    self.ws();
                    if key == *seg {
                        return self.find(rest).or(Some(here));
                    }
                    self.skip_value()?;
                    self.ws();
                    if self.peek()? == b',' {
                        self.i += 1;
                    }
                }
            }
            b'[' => {
                let target: usize = seg.parse().ok()?;
                self.i += 1;
                let mut index = 0;
                loop {
                    self.ws();
                    if self.peek()? == b']' {
                        return Some(here);
                    }
                    if index == target {
                        return self.find(rest).or(Some(here));
                    }
                    self.skip_value()?;
                    self.ws();
                    if self.peek()? == b',' {
                        self.i += 1;
                    }
                    index += 1;
                }
            }
            _ => Some(here),
        }
    }

    fn skip_string(&mut self) -> Option<()> {
        if self.peek()? != b'"' {
            return None;
        }
        self.i += 1;
        loop {
            match self.peek()? {
                b'"' => {
                    self.i += 1;
                    return Some(());
                }
                b'\\' => self.i += 2,
                _ => self.i += 1,
            }
        }
    }

    fn skip_value(&mut self) -> Option<()> {
        self.depth += 1;
        if self.depth > 512 {
            return None;
        }
        let r = match self.peek()? {
            b'"' => self.skip_string(),
            open @ (b'{' | b'[') => {
                let close = if open == b'{' { b'}' } else { b']' };
                self.i += 1;
                loop {
                    self.ws();
                    match self.peek()? {
                        c if c == close => {
                            self.i += 1;
                            break Some(());
                        }
                        b',' | b':' => self.i += 1,
                        _ => self.skip_value()?,
                    }
                }
            }
            _ => {
                while let Some(c) = self.peek() {
                    if matches!(c, b',' | b'}' | b']') || c.is_ascii_whitespace() {
                        break;
                    }
                    self.i += 1;
                }
                Some(())
            }
        };
        self.depth -= 1;
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOC: &str = "{\n  \"a\": 1,\n  \"b\": [\n    {\"c\": \"x\"},\n    {\"c\": \"y\", \"d/e\": [true]}\n  ]\n}";

    #[test]
    fn finds_nested_values() {
        assert_eq!(locate(DOC, ""), Some((1, 1)));
        assert_eq!(locate(DOC, "/a"), Some((2, 8)));
        assert_eq!(locate(DOC, "/b/1/c"), Some((5, 11)));
        assert_eq!(locate(DOC, "/b/1/d~1e/0"), Some((5, 24)));
    }

    #[test]
    fn missing_paths_fall_back_to_the_parent() {
        assert_eq!(locate(DOC, "/b/7"), Some((3, 8)));
        assert_eq!(locate(DOC, "/zzz"), Some((1, 1)));
    }

    #[test]
    fn garbage_does_not_panic() {
        for text in ["", "{", "[1,", "{\"a\"", "\"\\", "{\"a\":[{]}"] {
            let _ = locate(text, "/a/0/b");
        }
    }
}
