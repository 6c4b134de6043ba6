use crate::report::{Line, Mark};
use std::io::IsTerminal;

/// Color only on a terminal and only when `NO_COLOR` is unset or empty.
pub fn color_enabled() -> bool {
    let no_color = std::env::var_os("NO_COLOR").is_some_and(|v| !v.is_empty());
    !no_color && std::io::stdout().is_terminal()
}

fn paint(code: &str, s: &str, color: bool) -> String {
    if color {
        format!("\x1b[{code}m{s}\x1b[0m")
    } else {
        s.to_string()
    }
}

pub fn render(lines: &[Line], color: bool) -> String {
    let mut out = String::new();
    for l in lines {
        let indent = "  ".repeat(l.depth);
        let text = match l.mark {
            None => l.text.clone(),
            Some(Mark::Heading) => paint("1", &l.text, color),
            Some(m) => {
                let (code, word) = match m {
                    Mark::Holds => ("32", "holds"),
                    Mark::Fails => ("31", "fails"),
                    _ => ("33", "unknown"),
                };
                format!("{:<44} {}", l.text, paint(code, word, color))
            }
        };
        out.push_str(&indent);
        out.push_str(text.trim_end());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_rendering_has_no_escapes() {
        let lines = vec![Line::heading("E1"), Line::status(1, "AKQ[I-NLP]", Mark::Holds)];
        let s = render(&lines, false);
        assert!(!s.contains('\x1b'));
        assert!(s.contains("AKQ[I-NLP]") && s.ends_with("holds\n"));
        assert!(render(&lines, true).contains("\x1b[32mholds"));
    }
}
