use std::path::PathBuf;

use ck_core::conformal::Window;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleFamily {
    RankOne,
    Uniform,
    /// Bits listed from the window's lower end.
    Pattern(String),
    /// Every 0/1 pattern on the window, checked but not solved.
    AllPatterns,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Verify,
    Derivations { degrees: (i64, i64) },
    Cohomology,
    Modules { family: ModuleFamily, rules: Option<PathBuf> },
    Ope { file: Option<PathBuf> },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Derivations { .. } => "derivations",
            Command::Cohomology => "cohomology",
            Command::Modules { .. } => "modules",
            Command::Ope { .. } => "ope",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    /// Builtin name or path to a JSON spec.
    pub algebra: String,
    pub window: Window,
    pub degbound: u32,
    pub command: Command,
    pub format: Format,
    /// Worker count; `None` leaves it to `CK_THREADS` or the machine.
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn new(command: Command, algebra: &str) -> Self {
        let degbound = match command {
            Command::Derivations { .. } => 6,
            _ => 5,
        };
        RunConfig {
            algebra: algebra.to_string(),
            window: Window::new(-2, 2).expect("default window"),
            degbound,
            command,
            format: Format::Text,
            threads: None,
        }
    }
}

/// Parses `a..b` (inclusive, either end may be negative).
pub fn parse_range(text: &str) -> Result<(i64, i64), CliError> {
    let bad = || CliError::Usage(format!("expected a range a..b, got `{}`", text));
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(CliError::Usage(format!("empty range {}", text)));
    }
    Ok((a, b))
}

pub fn parse_window(text: &str) -> Result<Window, CliError> {
    let (a, b) = parse_range(text)?;
    Window::new(a, b).map_err(CliError::Core)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("-2..2").unwrap(), (-2, 2));
        assert_eq!(parse_range("0..0").unwrap(), (0, 0));
        assert!(parse_range("2..-2").is_err());
        assert!(parse_range("1-3").is_err());
        assert!(parse_range("a..3").is_err());
    }

    #[test]
    fn defaults() {
        let c = RunConfig::new(Command::Derivations { degrees: (-1, 1) }, "csv");
        assert_eq!(c.degbound, 6);
        assert_eq!(RunConfig::new(Command::Cohomology, "csv").degbound, 5);
        assert_eq!(c.window.to_string(), "-2..2");
    }
}
