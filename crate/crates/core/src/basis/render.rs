use std::str::FromStr;

use super::{BasisMonomial, DEFAULT_BIT_BUDGET};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    /// `i(i(1)) v i(1)`, the parseable form.
    Expr,
    /// Stacked bars, one bar per ι, read bottom to top.
    NestedBar,
    /// `e<serial>`; falls back to the expression form past the bit budget.
    Serial,
}

impl FromStr for RenderFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "expr" => Ok(RenderFormat::Expr),
            "nested-bar" | "bar" => Ok(RenderFormat::NestedBar),
            "serial" => Ok(RenderFormat::Serial),
            other => Err(format!("unknown render format `{other}`")),
        }
    }
}

pub(super) fn render(m: &BasisMonomial, format: RenderFormat) -> String {
    match format {
        RenderFormat::Expr => expr(m),
        RenderFormat::Serial => match m.serial_with_budget(DEFAULT_BIT_BUDGET) {
            Ok(q) => format!("e{q}"),
            Err(_) => expr(m),
        },
        RenderFormat::NestedBar => Block::of(m).lines.join("\n"),
    }
}

fn expr(m: &BasisMonomial) -> String {
    if m.is_unit() {
        return "1".to_string();
    }
    m.factors()
        .iter()
        .map(|f| format!("i({})", expr(f.body())))
        .collect::<Vec<_>>()
        .join(" v ")
}

/// Bottom-aligned block of ASCII art.
struct Block {
    lines: Vec<String>,
    width: usize,
}

impl Block {
    fn of(m: &BasisMonomial) -> Block {
        if m.is_unit() {
            return Block { lines: vec!["o".into()], width: 1 };
        }
        let parts: Vec<Block> = m.factors().iter().map(|f| Block::of(f.body()).bar()).collect();
        Block::beside(parts)
    }

    fn bar(mut self) -> Block {
        self.lines.insert(0, "_".repeat(self.width));
        self
    }

    fn beside(parts: Vec<Block>) -> Block {
        let height = parts.iter().map(|b| b.lines.len()).max().unwrap_or(0);
        let width = parts.iter().map(|b| b.width).sum::<usize>() + parts.len().saturating_sub(1);
        let mut lines = vec![String::new(); height];
        for (i, part) in parts.iter().enumerate() {
            let pad = height - part.lines.len();
            for (row, line) in lines.iter_mut().enumerate() {
                if i > 0 {
                    line.push(' ');
                }
                if row < pad {
                    line.push_str(&" ".repeat(part.width));
                } else {
                    line.push_str(&part.lines[row - pad]);
                }
            }
        }
        let lines = lines.into_iter().map(|l| l.trim_end().to_string()).collect();
        Block { lines, width }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expr_of_e6() {
        let m = BasisMonomial::from_serial_u64(6);
        assert_eq!(m.render(RenderFormat::Expr), "i(i(i(1))) v i(i(1))");
        assert_eq!(m.render(RenderFormat::Serial), "e6");
        assert_eq!(BasisMonomial::unit().render(RenderFormat::Expr), "1");
    }

    #[test]
    fn bars_stack_by_rank() {
        let m = BasisMonomial::from_serial_u64(6);
        assert_eq!(m.render(RenderFormat::NestedBar), "_\n_ _\n_ _\no o");
        let e8 = BasisMonomial::from_serial_u64(8);
        assert_eq!(e8.render(RenderFormat::NestedBar), "___\n_\n_ _\no o");
    }
}
