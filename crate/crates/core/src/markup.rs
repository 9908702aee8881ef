//! Wiki markup stripping.
//!
//! The cleaner handles the constructs that leak into sentence text from
//! Wikipedia dumps: `[[link|display]]`, `{{templates}}`, `{| tables |}`,
//! `<tags>` and `''emphasis''` quotes. Nested constructs are resolved by
//! repeating a single pass until nothing changes. An opener without a closer
//! is dropped together with the rest of its line.

/// Strip wiki markup from `raw` and collapse whitespace.
pub fn clean_markup(raw: &str) -> String {
    let mut text = raw.to_string();
    loop {
        let next = strip_pass(&text);
        if next == text {
            break;
        }
        text = next;
    }
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn strip_pass(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut i = 0;
    while i < s.len() {
        let rest = &s[i..];
        if rest.starts_with("{{") {
            i += skip_balanced(rest, "{{", "}}");
        } else if rest.starts_with("{|") {
            i += skip_balanced(rest, "{|", "|}");
        } else if rest.starts_with("[[") {
            match find_close(rest, "[[", "]]") {
                Some(end) => {
                    out.push_str(link_display(&rest[2..end]));
                    i += end + 2;
                }
                None => i += line_end(rest),
            }
        } else if rest.starts_with("''") {
            i += rest.len() - rest.trim_start_matches('\'').len();
        } else if is_tag_start(rest) {
            match rest.find('>') {
                Some(end) if !rest[..end].contains('\n') => i += end + 1,
                _ => i += line_end(rest),
            }
        } else {
            let c = rest.chars().next().expect("non-empty");
            out.push(c);
            i += c.len_utf8();
        }
    }
    out
}

fn is_tag_start(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next() == Some('<')
        && matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '/' || c == '!')
}

/// Byte offset of the closer matching the opener at the start of `s`.
fn find_close(s: &str, open: &str, close: &str) -> Option<usize> {
    let mut depth = 0usize;
    let mut i = 0;
    while i < s.len() {
        let rest = &s[i..];
        if rest.starts_with(open) {
            depth += 1;
            i += open.len();
        } else if rest.starts_with(close) {
            depth -= 1;
            if depth == 0 {
                return Some(i);
            }
            i += close.len();
        } else {
            i += rest.chars().next().map_or(1, char::len_utf8);
        }
    }
    None
}

/// Length in bytes to skip for a balanced block, or to end of line when
/// the block never closes.
fn skip_balanced(s: &str, open: &str, close: &str) -> usize {
    match find_close(s, open, close) {
        Some(end) => end + close.len(),
        None => line_end(s),
    }
}

fn line_end(s: &str) -> usize {
    s.find('\n').unwrap_or(s.len())
}

/// Display text of a link body: everything after the last top-level `|`.
fn link_display(body: &str) -> &str {
    let mut depth = 0i32;
    let mut cut = 0;
    let bytes = body.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if body[i..].starts_with("[[") {
            depth += 1;
            i += 2;
            continue;
        }
        if body[i..].starts_with("]]") {
            depth -= 1;
            i += 2;
            continue;
        }
        if bytes[i] == b'|' && depth == 0 {
            cut = i + 1;
        }
        i += 1;
    }
    &body[cut..]
}
