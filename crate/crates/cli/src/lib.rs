//! Front end for the `oldr` library: file formats, the solve pipeline,
//! benchmark suites and SVG rendering.

pub mod bench;
pub mod formats;
pub mod pipeline;
pub mod render;

use oldr::ilp_core::{Backend, ExhaustiveLimits, ExternalSolver};

/// Environment variable holding the external solver command template.
pub const SOLVER_CMD_ENV: &str = "OLDR_SOLVER_CMD";

/// Picks the ILP backend. `auto` uses the external solver when a command is
/// configured (flag first, then environment) and the exhaustive search otherwise.
pub fn resolve_backend(kind: &str, flag: Option<&str>, env: Option<&str>) -> Result<Backend, String> {
    let cmd = flag.or(env).map(str::to_string);
    match (kind, cmd) {
        ("exhaustive", _) | ("auto", None) => Ok(Backend::Exhaustive(ExhaustiveLimits::default())),
        ("external", Some(command)) | ("auto", Some(command)) => Ok(Backend::External(ExternalSolver { command })),
        ("external", None) => Err(format!("external backend needs --solver-cmd or {SOLVER_CMD_ENV}")),
        (other, _) => Err(format!("unknown backend `{other}` (auto, exhaustive, external)")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flag_wins_over_environment() {
        let b = resolve_backend("auto", Some("flag {model} {solution}"), Some("env")).unwrap();
        assert_eq!(b, Backend::External(ExternalSolver { command: "flag {model} {solution}".into() }));
        let b = resolve_backend("auto", None, Some("env")).unwrap();
        assert_eq!(b, Backend::External(ExternalSolver { command: "env".into() }));
        assert!(matches!(resolve_backend("auto", None, None).unwrap(), Backend::Exhaustive(_)));
        assert!(resolve_backend("external", None, None).is_err());
    }
}
